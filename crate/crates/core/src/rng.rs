//! Deterministic randomness. Every consumer derives its own ChaCha20 stream
//! from `(seed, label)`, so adding a new consumer never shifts the values
//! another one sees. The derivation (SHA-256 of `label || 0x00 || seed_le`
//! as the ChaCha20 key) is part of the on-disk reproducibility contract.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

pub type DetRng = ChaCha20Rng;

pub fn seeded(seed: u64, label: &str) -> DetRng {
    let mut h = Sha256::new();
    h.update(label.as_bytes());
    h.update([0u8]);
    h.update(seed.to_le_bytes());
    let key: [u8; 32] = h.finalize().into();
    ChaCha20Rng::from_seed(key)
}
