//! Transparent stand-in for a pairing-friendly group.
//!
//! An element "g^a" is stored as its exponent `a` in the scalar field, so
//! combining is exponent addition, scaling is exponent multiplication and
//! the pairing multiplies exponents. Every algebraic identity a real
//! bilinear group satisfies holds here exactly, which makes the proof
//! system fully testable.
//!
//! INSECURE: the discrete logarithm of every element is its serialization.
//! Nothing built on this group hides anything.

use std::fmt;

use crate::algebra::{Domain, Scalar};

use super::SnarkError;

/// Element of the source group, written additively.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElem {
    exp: Scalar,
}

/// Element of the pairing target group, written additively.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TargetElem {
    exp: Scalar,
}

fn field_scalar(x: &Scalar) -> Result<Scalar, SnarkError> {
    if x.domain().is_field() {
        Ok(x.clone())
    } else {
        Err(SnarkError::FieldRequired)
    }
}

impl GroupElem {
    /// `E(x) = g^x`.
    pub fn encode(x: &Scalar) -> Result<Self, SnarkError> {
        Ok(GroupElem {
            exp: field_scalar(x)?,
        })
    }

    pub fn generator(domain: &Domain) -> Result<Self, SnarkError> {
        GroupElem::encode(&domain.one())
    }

    pub fn identity(domain: &Domain) -> Result<Self, SnarkError> {
        GroupElem::encode(&domain.zero())
    }

    pub fn is_identity(&self) -> bool {
        self.exp.is_zero()
    }

    pub fn domain(&self) -> Domain {
        self.exp.domain()
    }

    /// Group operation: `E(a) . E(b) = E(a + b)`.
    pub fn combine(&self, other: &GroupElem) -> Result<Self, SnarkError> {
        Ok(GroupElem {
            exp: self.exp.try_add(&other.exp).map_err(|_| SnarkError::ContextMismatch)?,
        })
    }

    /// Inverse element.
    pub fn negate(&self) -> Self {
        GroupElem { exp: -&self.exp }
    }

    /// `E(a)^c = E(a c)`.
    pub fn scale(&self, c: &Scalar) -> Result<Self, SnarkError> {
        Ok(GroupElem {
            exp: self.exp.try_mul(c).map_err(|_| SnarkError::ContextMismatch)?,
        })
    }

    /// Field image of the serialized element, for hashing into transcripts.
    pub fn transcript_scalar(&self) -> Scalar {
        self.exp.clone()
    }

    pub fn to_repr_string(&self) -> String {
        self.exp.to_repr_string()
    }

    pub fn parse(domain: &Domain, s: &str) -> Result<Self, SnarkError> {
        GroupElem::encode(&domain.parse(s)?)
    }
}

impl TargetElem {
    pub fn encode(x: &Scalar) -> Result<Self, SnarkError> {
        Ok(TargetElem {
            exp: field_scalar(x)?,
        })
    }

    pub fn combine(&self, other: &TargetElem) -> Result<Self, SnarkError> {
        Ok(TargetElem {
            exp: self.exp.try_add(&other.exp).map_err(|_| SnarkError::ContextMismatch)?,
        })
    }

    pub fn scale(&self, c: &Scalar) -> Result<Self, SnarkError> {
        Ok(TargetElem {
            exp: self.exp.try_mul(c).map_err(|_| SnarkError::ContextMismatch)?,
        })
    }
}

/// Bilinear map: `e(E(a), E(b)) = E_T(a b)`.
pub fn pair(a: &GroupElem, b: &GroupElem) -> Result<TargetElem, SnarkError> {
    Ok(TargetElem {
        exp: a.exp.try_mul(&b.exp).map_err(|_| SnarkError::ContextMismatch)?,
    })
}

impl fmt::Debug for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E({})", self.exp)
    }
}

impl fmt::Debug for TargetElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E_T({})", self.exp)
    }
}
