//! A desk-scale anonymous payment ledger.
//!
//! Coins are commitments in a fixed-depth Merkle tree. Minting reveals a
//! value and an inner commitment; pouring spends two coins into two new
//! ones and proves, with the pour circuit in [`circuit`], that the inputs
//! are in the tree, belong to the spender, reveal the right serial numbers
//! and carry the same total value as the outputs. Recipients find their
//! coins by trial-decrypting pour ciphertexts.
//!
//! Every primitive here (MiMC with 11 rounds, the transparent group behind
//! encryption, signatures and proofs) is for demonstration only.

mod error;
pub mod circuit;
pub mod json;
pub mod keys;
pub mod ledger;
pub mod merkle;
pub mod mimc;
pub mod params;

pub use error::DapError;
pub use keys::{check_sig, create_address, encrypt_coin, sign, try_decrypt, Address, PublicAddress};
pub use ledger::{mint, pour, receive, verify_tx, Coin, LedgerState, MintTx, PourSystem, PourTx, Tx};
pub use merkle::{merkle_check, AuthPath, MerkleTree};
pub use params::DapParams;
