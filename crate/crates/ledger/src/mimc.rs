//! MiMC-style permutation and rate-1 sponge.
//!
//! `perm(x)`: for `i = 1..=rounds`, `x := (x + i)^e`. The exponent is the
//! smallest odd `e >= 3` with `gcd(e, p - 1) = 1`, so the round map is a
//! bijection of the field. On BN254 that is `e = 5` (3 divides `p - 1`).
//!
//! Not collision resistant at any real strength: eleven rounds is far below
//! what a secure instantiation needs.

use desksnark::algebra::{Domain, Scalar};
use num_bigint::BigUint;
use num_integer::Integer;

use crate::DapError;

pub const DEFAULT_ROUNDS: u32 = 11;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mimc {
    domain: Domain,
    rounds: u32,
    exponent: u64,
    constants: Vec<Scalar>,
}

/// Smallest odd `e >= 3` with `gcd(e, p - 1) = 1`, searched up to 63.
pub fn permutation_exponent(p: &BigUint) -> Option<u64> {
    let pm1 = p - 1u32;
    (3u64..64)
        .step_by(2)
        .find(|e| pm1.gcd(&BigUint::from(*e)) == BigUint::from(1u32))
}

impl Mimc {
    pub fn new(domain: &Domain, rounds: u32) -> Result<Self, DapError> {
        let field = domain
            .field()
            .ok_or(desksnark::algebra::AlgebraError::FieldRequired)?;
        let exponent = permutation_exponent(field.modulus()).ok_or(DapError::NoPermutationExponent)?;
        Ok(Mimc {
            domain: domain.clone(),
            rounds,
            exponent,
            constants: (1..=rounds as u64).map(|i| domain.from_u64(i)).collect(),
        })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn rounds(&self) -> u32 {
        self.rounds
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Round constants `c_1..c_rounds`.
    pub fn constants(&self) -> &[Scalar] {
        &self.constants
    }

    pub fn perm(&self, x: &Scalar) -> Scalar {
        self.constants
            .iter()
            .fold(x.clone(), |x, c| (&x + c).pow(self.exponent))
    }

    /// `state := 0; for m in inputs: state := perm(state + m)`.
    pub fn hash(&self, inputs: &[Scalar]) -> Result<Scalar, DapError> {
        if inputs.is_empty() {
            return Err(DapError::EmptyHashInput);
        }
        Ok(inputs
            .iter()
            .fold(self.domain.zero(), |s, m| self.perm(&(&s + m))))
    }

    /// `hash` for callers whose input is a non-empty literal.
    pub(crate) fn h(&self, inputs: &[Scalar]) -> Scalar {
        self.hash(inputs).expect("non-empty input")
    }

    /// R1CS rows one round costs: squarings plus multiplications of a
    /// left-to-right square-and-multiply chain.
    pub fn rows_per_round(&self) -> usize {
        let bits = 64 - self.exponent.leading_zeros() as usize;
        (bits - 1) + (self.exponent.count_ones() as usize - 1)
    }
}
