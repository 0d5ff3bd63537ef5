#![allow(dead_code)]

use std::sync::OnceLock;

use desksnark::rng::{seeded, DetRng};
use desksnark::snark::{ProvingKey, SnarkParams, VerifyingKey};
use desksnark::Scalar;
use desksnark_ledger::{create_address, mint, verify_tx, Address, Coin, DapParams, LedgerState, PourSystem, Tx};

pub struct Keys {
    pub params: DapParams,
    pub system: PourSystem,
    pub pk: ProvingKey,
    pub vk: VerifyingKey,
}

impl Keys {
    pub fn new(params: DapParams, seed: u64) -> Self {
        let system = PourSystem::new(&params).unwrap();
        let (pk, vk) = system.setup(&SnarkParams { lambda: 128, seed }).unwrap();
        Keys { params, system, pk, vk }
    }
}

/// Standard parameters (depth 4, 11 rounds), set up once per test binary.
pub fn standard() -> &'static Keys {
    static KEYS: OnceLock<Keys> = OnceLock::new();
    KEYS.get_or_init(|| Keys::new(DapParams::standard(), 1))
}

/// Depth 2, 3 rounds: same structure, a fraction of the proving cost.
pub fn small() -> &'static Keys {
    static KEYS: OnceLock<Keys> = OnceLock::new();
    KEYS.get_or_init(|| {
        let d = desksnark::Domain::bn254();
        Keys::new(DapParams::new(&d, 2, 3, 1 << 32).unwrap(), 2)
    })
}

pub fn rng(label: &str) -> DetRng {
    seeded(99, label)
}

pub fn address(params: &DapParams, seed: u64) -> Address {
    create_address(params, &params.domain().from_u64(seed))
}

pub fn value(params: &DapParams, v: u64) -> Scalar {
    params.domain().from_u64(v)
}

/// Mints `v` to `addr` and applies the transaction.
pub fn minted(ledger: &mut LedgerState, keys: &Keys, addr: &Address, v: u64, r: &mut DetRng) -> Coin {
    let (coin, tx) = mint(ledger, addr, &value(&keys.params, v), r).unwrap();
    assert!(verify_tx(ledger, &Tx::Mint(tx), &keys.vk));
    coin
}
