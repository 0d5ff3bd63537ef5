//! Exact arithmetic: prime-field and rational scalars, dense polynomials,
//! Lagrange interpolation and long division.

mod kernel;
mod poly;
mod scalar;

pub use poly::{lagrange_interpolate, vanishing_poly, LagrangeBasis, Poly};
pub use scalar::{is_probable_prime, Domain, PrimeField, Scalar, BN254_MODULUS};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("operands belong to different number domains")]
    DomainMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("division by the zero polynomial")]
    ZeroPolynomialDivisor,
    #[error("duplicate interpolation node {0}")]
    DuplicateNode(String),
    #[error("empty input")]
    EmptyInput,
    #[error("modulus {0} is not prime")]
    NotPrime(String),
    #[error("cannot parse scalar {0:?}")]
    ParseScalar(String),
    #[error("operation requires a prime field, not rationals")]
    FieldRequired,
}
