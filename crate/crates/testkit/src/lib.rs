//! Test support that deliberately shares no code with the crates under test:
//! everything here is plain `BigInt` arithmetic.
//!
//! * [`programs`]: random straight-line programs with a known gate count and
//!   a reference evaluator.
//! * [`oracle`]: schoolbook polynomial long division and row-by-row dot
//!   product checks, modulo `p` or over the rationals.

pub mod oracle;
pub mod programs;

use num_bigint::BigInt;

/// The BN254 scalar field modulus.
pub fn bn254_r() -> BigInt {
    "21888242871839275222246405745257275088548364400416034343698204186575808495617"
        .parse()
        .unwrap()
}
