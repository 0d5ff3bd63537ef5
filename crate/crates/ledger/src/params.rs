use desksnark::algebra::{Domain, Scalar};

use crate::mimc::{Mimc, DEFAULT_ROUNDS};
use crate::DapError;

pub const DEFAULT_DEPTH: usize = 4;

/// Largest mintable value by default: `2^32`.
pub const DEFAULT_V_MAX: u64 = 1 << 32;

/// Everything the ledger's primitives are parameterized by.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DapParams {
    pub mimc: Mimc,
    pub depth: usize,
    pub v_max: Scalar,
}

impl DapParams {
    pub fn new(domain: &Domain, depth: usize, rounds: u32, v_max: u64) -> Result<Self, DapError> {
        if !(1..=20).contains(&depth) {
            return Err(DapError::BadDepth);
        }
        Ok(DapParams {
            mimc: Mimc::new(domain, rounds)?,
            depth,
            v_max: domain.from_u64(v_max),
        })
    }

    /// BN254, depth 4, 11 rounds, `v_max = 2^32`.
    pub fn standard() -> Self {
        DapParams::new(&Domain::bn254(), DEFAULT_DEPTH, DEFAULT_ROUNDS, DEFAULT_V_MAX)
            .expect("standard parameters are valid")
    }

    pub fn domain(&self) -> &Domain {
        self.mimc.domain()
    }

    pub fn hash(&self, inputs: &[Scalar]) -> Result<Scalar, DapError> {
        self.mimc.hash(inputs)
    }

    /// `prf(key, x) = hash([key, x])`.
    pub fn prf(&self, key: &Scalar, x: &Scalar) -> Scalar {
        self.mimc.h(&[key.clone(), x.clone()])
    }

    pub fn check_value(&self, v: &Scalar) -> Result<(), DapError> {
        let in_range = v.in_domain(self.domain())
            && v.to_biguint().expect("field scalar") <= self.v_max.to_biguint().expect("field scalar");
        if in_range {
            Ok(())
        } else {
            Err(DapError::ValueOutOfRange(v.to_string()))
        }
    }

    /// Nested commitment: `k = hash([a_pk, rho, r])`, `cm = hash([k, v])`.
    /// Returns `(cm, k)`.
    pub fn comm(
        &self,
        a_pk: &Scalar,
        v: &Scalar,
        rho: &Scalar,
        r: &Scalar,
    ) -> Result<(Scalar, Scalar), DapError> {
        self.check_value(v)?;
        let k = self.mimc.h(&[a_pk.clone(), rho.clone(), r.clone()]);
        Ok((self.mimc.h(&[k.clone(), v.clone()]), k))
    }
}
