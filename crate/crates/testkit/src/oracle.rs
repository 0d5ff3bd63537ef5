//! Reference implementations. Polynomials are ascending coefficient
//! vectors; trailing zeros are trimmed on output so the zero polynomial is
//! empty.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

fn trim<T: Zero>(mut v: Vec<T>) -> Vec<T> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

pub fn inv_mod(a: &BigInt, p: &BigInt) -> BigInt {
    a.mod_floor(p).modpow(&(p - 2u32), p)
}

/// Schoolbook long division modulo prime `p`. `None` for a zero divisor.
pub fn divmod_mod(num: &[BigInt], den: &[BigInt], p: &BigInt) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
    let den = trim(den.iter().map(|c| c.mod_floor(p)).collect());
    let mut rem = trim(num.iter().map(|c| c.mod_floor(p)).collect::<Vec<_>>());
    let lead_inv = inv_mod(den.last()?, p);
    if rem.len() < den.len() {
        return Some((vec![], rem));
    }
    let mut quot = vec![BigInt::zero(); rem.len() - den.len() + 1];
    while rem.len() >= den.len() {
        let shift = rem.len() - den.len();
        let c = (rem.last().unwrap() * &lead_inv).mod_floor(p);
        for (i, d) in den.iter().enumerate() {
            rem[shift + i] = (&rem[shift + i] - &c * d).mod_floor(p);
        }
        quot[shift] = c;
        rem = trim(rem);
    }
    Some((trim(quot), rem))
}

/// Schoolbook long division over the rationals.
pub fn divmod_rational(
    num: &[BigRational],
    den: &[BigRational],
) -> Option<(Vec<BigRational>, Vec<BigRational>)> {
    let den = trim(den.to_vec());
    let lead = den.last()?.clone();
    let mut rem = trim(num.to_vec());
    if rem.len() < den.len() {
        return Some((vec![], rem));
    }
    let mut quot = vec![BigRational::zero(); rem.len() - den.len() + 1];
    while rem.len() >= den.len() {
        let shift = rem.len() - den.len();
        let c = rem.last().unwrap() / &lead;
        for (i, d) in den.iter().enumerate() {
            rem[shift + i] = &rem[shift + i] - &c * d;
        }
        quot[shift] = c;
        rem = trim(rem);
    }
    Some((trim(quot), rem))
}

pub fn mul_mod(a: &[BigInt], b: &[BigInt], p: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (&out[i + j] + x * y).mod_floor(p);
        }
    }
    trim(out)
}

/// `prod (x - i)` for `i = 1..=n`, modulo `p`.
pub fn vanishing_mod(n: usize, p: &BigInt) -> Vec<BigInt> {
    (1..=n).fold(vec![BigInt::one()], |acc, i| {
        mul_mod(&acc, &[BigInt::from(-(i as i64)), BigInt::one()], p)
    })
}

pub fn dot_mod(a: &[BigInt], b: &[BigInt], p: &BigInt) -> BigInt {
    assert_eq!(a.len(), b.len(), "dot product of unequal lengths");
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| (acc + x * y).mod_floor(p))
}

/// One dense R1CS row.
pub struct DenseRow {
    pub v: Vec<BigInt>,
    pub w: Vec<BigInt>,
    pub k: Vec<BigInt>,
}

/// `(t.v)(t.w) == t.k` on every row, modulo `p`.
pub fn rows_satisfied(rows: &[DenseRow], t: &[BigInt], p: &BigInt) -> bool {
    rows.iter().all(|r| {
        (dot_mod(t, &r.v, p) * dot_mod(t, &r.w, p)).mod_floor(p) == dot_mod(t, &r.k, p)
    })
}
