#![allow(dead_code)]

use desksnark::algebra::{Domain, Poly, Scalar};
use desksnark::r1cs::ConstraintSystem;
use desksnark_testkit::oracle::DenseRow;
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn modulus(d: &Domain) -> BigInt {
    BigInt::from(d.field().expect("field domain").modulus().clone())
}

pub fn to_int(s: &Scalar) -> BigInt {
    BigInt::from(s.to_biguint().expect("field scalar"))
}

pub fn coeffs(p: &Poly) -> Vec<BigInt> {
    p.coeffs().iter().map(to_int).collect()
}

pub fn dense_rows(cs: &ConstraintSystem) -> Vec<DenseRow> {
    cs.rows
        .iter()
        .map(|r| {
            let [v, w, k] = r.dense(cs.num_wires, &cs.domain);
            let conv = |xs: Vec<Scalar>| xs.iter().map(to_int).collect();
            DenseRow { v: conv(v), w: conv(w), k: conv(k) }
        })
        .collect()
}
