//! Dual-mode scalars: elements of a prime field, or exact rationals.
//!
//! A [`Domain`] names the number system a computation runs in. Every
//! [`Scalar`] remembers its domain, and arithmetic between scalars of
//! different domains is an error (`try_*` methods) or a panic (operator
//! impls). Field moduli are compared by value, so two independently built
//! contexts for the same prime interoperate.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::RngCore;

use super::AlgebraError;

/// Order of the BN254 scalar field.
pub const BN254_MODULUS: &str =
    "21888242871839275222246405745257275088548364400416034343698204186575808495617";

/// A prime field `Z/pZ`. Cheap to clone.
#[derive(Clone)]
pub struct PrimeField(Arc<BigUint>);

impl PrimeField {
    /// Builds a field context, rejecting composite or tiny moduli.
    pub fn new(modulus: BigUint) -> Result<Self, AlgebraError> {
        if !is_probable_prime(&modulus) {
            return Err(AlgebraError::NotPrime(modulus.to_string()));
        }
        Ok(PrimeField(Arc::new(modulus)))
    }

    pub fn bn254() -> Self {
        PrimeField(Arc::new(BigUint::from_str(BN254_MODULUS).expect("constant")))
    }

    pub fn modulus(&self) -> &BigUint {
        &self.0
    }

    fn reduce_signed(&self, v: &BigInt) -> BigUint {
        let m = BigInt::from_biguint(Sign::Plus, (*self.0).clone());
        v.mod_floor(&m).to_biguint().expect("mod_floor is non-negative")
    }
}

impl PartialEq for PrimeField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for PrimeField {}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0)
    }
}

/// The number system a computation runs in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Domain {
    Field(PrimeField),
    Rational,
}

impl Domain {
    pub fn bn254() -> Self {
        Domain::Field(PrimeField::bn254())
    }

    pub fn prime_field(modulus: BigUint) -> Result<Self, AlgebraError> {
        PrimeField::new(modulus).map(Domain::Field)
    }

    pub fn is_field(&self) -> bool {
        matches!(self, Domain::Field(_))
    }

    pub fn field(&self) -> Option<&PrimeField> {
        match self {
            Domain::Field(f) => Some(f),
            Domain::Rational => None,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_bigint(&BigInt::zero())
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_u64(&self, v: u64) -> Scalar {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self {
            Domain::Field(f) => Scalar(Repr::Field {
                value: f.reduce_signed(v),
                field: f.clone(),
            }),
            Domain::Rational => Scalar(Repr::Rational(BigRational::from_integer(v.clone()))),
        }
    }

    /// `num / den` in this domain. Fails when `den` is zero.
    pub fn ratio(&self, num: i64, den: i64) -> Result<Scalar, AlgebraError> {
        self.from_i64(num).try_div(&self.from_i64(den))
    }

    /// Parses the serialized form: a decimal integer (either mode, reduced
    /// modulo p in field mode) or `num/den` (rational mode only).
    pub fn parse(&self, s: &str) -> Result<Scalar, AlgebraError> {
        let s = s.trim();
        let bad = || AlgebraError::ParseScalar(s.to_string());
        match (self, s.split_once('/')) {
            (Domain::Field(_), Some(_)) => Err(bad()),
            (_, None) => BigInt::from_str(s).map(|v| self.from_bigint(&v)).map_err(|_| bad()),
            (Domain::Rational, Some((n, d))) => {
                let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
                let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(AlgebraError::DivisionByZero);
                }
                Ok(Scalar(Repr::Rational(BigRational::new(n, d))))
            }
        }
    }

    /// Uniform field element. Rational mode has no uniform distribution.
    pub fn random<R: RngCore + ?Sized>(&self, rng: &mut R) -> Result<Scalar, AlgebraError> {
        let f = self.field().ok_or(AlgebraError::FieldRequired)?;
        // 512 bits reduced mod a <=256-bit prime: bias below 2^-256.
        let mut bytes = [0u8; 64];
        rng.fill_bytes(&mut bytes);
        let v = BigUint::from_bytes_le(&bytes) % f.modulus();
        Ok(Scalar(Repr::Field {
            value: v,
            field: f.clone(),
        }))
    }

    /// Header string used by the JSON file formats: the decimal modulus, or
    /// `"rational"`.
    pub fn tag(&self) -> String {
        match self {
            Domain::Field(f) => f.modulus().to_string(),
            Domain::Rational => "rational".to_string(),
        }
    }

    pub fn from_tag(tag: &str) -> Result<Self, AlgebraError> {
        if tag == "rational" {
            return Ok(Domain::Rational);
        }
        let m = BigUint::from_str(tag).map_err(|_| AlgebraError::ParseScalar(tag.to_string()))?;
        Domain::prime_field(m)
    }
}

#[derive(Clone)]
enum Repr {
    Field { value: BigUint, field: PrimeField },
    Rational(BigRational),
}

/// A field element or an exact rational. Field values are kept in `[0, p)`;
/// rationals are kept reduced with a positive denominator.
#[derive(Clone)]
pub struct Scalar(Repr);

impl Scalar {
    /// Wraps a value already reduced below the modulus.
    pub(super) fn from_reduced(value: BigUint, field: &PrimeField) -> Scalar {
        debug_assert!(&value < field.modulus());
        Scalar(Repr::Field {
            value,
            field: field.clone(),
        })
    }

    pub(super) fn field_value(&self) -> Option<&BigUint> {
        match &self.0 {
            Repr::Field { value, .. } => Some(value),
            Repr::Rational(_) => None,
        }
    }

    pub fn domain(&self) -> Domain {
        match &self.0 {
            Repr::Field { field, .. } => Domain::Field(field.clone()),
            Repr::Rational(_) => Domain::Rational,
        }
    }

    pub fn in_domain(&self, d: &Domain) -> bool {
        match (&self.0, d) {
            (Repr::Field { field, .. }, Domain::Field(g)) => field == g,
            (Repr::Rational(_), Domain::Rational) => true,
            _ => false,
        }
    }

    pub fn same_domain(&self, other: &Scalar) -> bool {
        match (&self.0, &other.0) {
            (Repr::Field { field: a, .. }, Repr::Field { field: b, .. }) => a == b,
            (Repr::Rational(_), Repr::Rational(_)) => true,
            _ => false,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Field { value, .. } => value.is_zero(),
            Repr::Rational(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Field { value, .. } => value.is_one(),
            Repr::Rational(r) => r.is_one(),
        }
    }

    fn check(&self, other: &Scalar) -> Result<(), AlgebraError> {
        if self.same_domain(other) {
            Ok(())
        } else {
            Err(AlgebraError::DomainMismatch)
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar, AlgebraError> {
        self.check(other)?;
        Ok(match (&self.0, &other.0) {
            (Repr::Field { value: a, field }, Repr::Field { value: b, .. }) => {
                let mut s = a + b;
                if &s >= field.modulus() {
                    s -= field.modulus();
                }
                Scalar(Repr::Field {
                    value: s,
                    field: field.clone(),
                })
            }
            (Repr::Rational(a), Repr::Rational(b)) => Scalar(Repr::Rational(a + b)),
            _ => unreachable!(),
        })
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar, AlgebraError> {
        self.check(other)?;
        Ok(match (&self.0, &other.0) {
            (Repr::Field { value: a, field }, Repr::Field { value: b, .. }) => {
                let value = if a >= b { a - b } else { field.modulus() - b + a };
                Scalar(Repr::Field {
                    value,
                    field: field.clone(),
                })
            }
            (Repr::Rational(a), Repr::Rational(b)) => Scalar(Repr::Rational(a - b)),
            _ => unreachable!(),
        })
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar, AlgebraError> {
        self.check(other)?;
        Ok(match (&self.0, &other.0) {
            (Repr::Field { value: a, field }, Repr::Field { value: b, .. }) => {
                Scalar(Repr::Field {
                    value: (a * b) % field.modulus(),
                    field: field.clone(),
                })
            }
            (Repr::Rational(a), Repr::Rational(b)) => Scalar(Repr::Rational(a * b)),
            _ => unreachable!(),
        })
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar, AlgebraError> {
        self.check(other)?;
        self.try_mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<Scalar, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(match &self.0 {
            Repr::Field { value, field } => {
                let p = field.modulus();
                Scalar(Repr::Field {
                    value: value.modpow(&(p - 2u32), p),
                    field: field.clone(),
                })
            }
            Repr::Rational(r) => Scalar(Repr::Rational(r.recip())),
        })
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.domain().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn square(&self) -> Scalar {
        self * self
    }

    /// Canonical integer representative of a field element.
    pub fn to_biguint(&self) -> Option<BigUint> {
        match &self.0 {
            Repr::Field { value, .. } => Some(value.clone()),
            Repr::Rational(_) => None,
        }
    }

    /// The rational value, when this is a rational scalar.
    pub fn to_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Rational(r) => Some(r),
            Repr::Field { .. } => None,
        }
    }

    /// Small-integer view: field elements below 2^64, or rationals that are
    /// non-negative integers below 2^64.
    pub fn to_u64(&self) -> Option<u64> {
        match &self.0 {
            Repr::Field { value, .. } => value.to_u64(),
            Repr::Rational(r) if r.is_integer() => r.to_integer().to_u64(),
            Repr::Rational(_) => None,
        }
    }

    /// Approximate value for display and tolerance checks. Field elements
    /// are rendered via their canonical representative.
    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Field { value, .. } => value.to_f64().unwrap_or(f64::NAN),
            Repr::Rational(r) => {
                let n = r.numer().to_f64().unwrap_or(f64::NAN);
                let d = r.denom().to_f64().unwrap_or(f64::NAN);
                n / d
            }
        }
    }

    /// Decimal rendering truncated toward zero at `places` digits, the way
    /// hand-worked QAP tables usually print (55/6 -> "9.166"). Field values
    /// print as integers.
    pub fn render_decimal(&self, places: usize) -> String {
        match &self.0 {
            Repr::Field { value, .. } => value.to_string(),
            Repr::Rational(r) => {
                let scale = BigInt::from(10u32).pow(places as u32);
                let scaled = (r * BigRational::from_integer(scale.clone())).trunc().to_integer();
                let neg = r.is_negative();
                let abs = scaled.abs();
                let (int, frac) = abs.div_rem(&scale);
                let sign = if neg { "-" } else { "" };
                if places == 0 {
                    format!("{sign}{int}")
                } else {
                    format!("{sign}{int}.{:0>width$}", frac.to_string(), width = places)
                }
            }
        }
    }

    /// Serialized form: decimal integer in field mode, `num/den` in
    /// rational mode.
    pub fn to_repr_string(&self) -> String {
        match &self.0 {
            Repr::Field { value, .. } => value.to_string(),
            Repr::Rational(r) => format!("{}/{}", r.numer(), r.denom()),
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Field { value: a, field: f }, Repr::Field { value: b, field: g }) => {
                a == b && f == g
            }
            (Repr::Rational(a), Repr::Rational(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Field { value, .. } => value.hash(state),
            Repr::Rational(r) => r.hash(state),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_repr_string())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Rational(r) if r.is_integer() => write!(f, "{}", r.numer()),
            _ => write!(f, "{}", self.to_repr_string()),
        }
    }
}

// Operator impls panic on a domain mismatch; use the `try_*` methods where
// operands come from untrusted input.
macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$try(rhs).expect("scalar domain mismatch")
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Field { value, field } => Scalar(Repr::Field {
                value: if value.is_zero() {
                    BigUint::zero()
                } else {
                    field.modulus() - value
                },
                field: field.clone(),
            }),
            Repr::Rational(r) => Scalar(Repr::Rational(-r)),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

const SMALL_PRIMES: [u32; 24] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
];

/// Miller-Rabin over fixed bases. Deterministic below 3.3e24 and a strong
/// probable-prime test above that.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if *n < BigUint::from(2u32) {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if *n == BigUint::from(p) {
            return true;
        }
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in &SMALL_PRIMES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
