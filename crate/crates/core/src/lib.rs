//! A small, exact-arithmetic arithmetization pipeline:
//!
//! ```text
//! source --parse/flatten--> gates --compile--> R1CS --interpolate--> QAP
//!        --setup/prove/verify--> 4-element proof checked by a pairing equation
//! ```
//!
//! Everything runs over a prime field (default: the BN254 scalar field) or,
//! for reproducing hand-worked tables, over exact rationals. The group used
//! by [`snark`] is a transparent stand-in that stores exponents in the clear:
//! it exercises the protocol structure and offers no cryptographic hiding.

pub mod algebra;
pub mod frontend;
pub mod lincomb;
pub mod qap;
pub mod r1cs;
pub mod rng;
pub mod snark;
pub mod worked;

pub use algebra::{Domain, Poly, Scalar};
pub use frontend::{compile_source, flatten, parse_source, FlatProgram};
pub use lincomb::LinearCombination;
pub use qap::{combine_with_witness, compute_h, r1cs_to_qap, target_poly, Qap};
pub use r1cs::{compile_to_r1cs, generate_witness, is_satisfied, ConstraintSystem, WitnessVector};

/// The cubic used throughout the documentation and tests: `x^3 + x + 5`.
pub const CUBIC_SOURCE: &str = "def f(x):\n    y = x**3\n    return x + y + 5\n";
