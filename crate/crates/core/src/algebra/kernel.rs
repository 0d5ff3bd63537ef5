//! Inner loops of the polynomial routines.
//!
//! The loops are written once against [`Arith`]. Fields whose modulus fits
//! in 256 bits run them on fixed-width Montgomery residues; everything else
//! (rationals, larger primes) runs them on plain [`Scalar`]s.

use crypto_bigint::modular::{MontyForm, MontyParams};
use crypto_bigint::{Odd, U256};
use num_bigint::BigUint;

use super::{Domain, PrimeField, Scalar};

pub(super) trait Arith {
    type E: Clone;
    fn lift(&self, s: &Scalar) -> Self::E;
    fn lower(&self, e: &Self::E) -> Scalar;
    fn zero(&self) -> Self::E;
    fn is_zero(&self, e: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;

    fn lift_all(&self, s: &[Scalar]) -> Vec<Self::E> {
        s.iter().map(|x| self.lift(x)).collect()
    }

    fn lower_all(&self, e: &[Self::E]) -> Vec<Scalar> {
        e.iter().map(|x| self.lower(x)).collect()
    }
}

pub(super) struct Exact(pub Domain);

impl Arith for Exact {
    type E = Scalar;

    fn lift(&self, s: &Scalar) -> Scalar {
        s.clone()
    }
    fn lower(&self, e: &Scalar) -> Scalar {
        e.clone()
    }
    fn zero(&self) -> Scalar {
        self.0.zero()
    }
    fn is_zero(&self, e: &Scalar) -> bool {
        e.is_zero()
    }
    fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a + b
    }
    fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a - b
    }
    fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a * b
    }
}

pub(super) struct Mont {
    params: MontyParams<4>,
    field: PrimeField,
}

impl Mont {
    pub(super) fn for_domain(domain: &Domain) -> Option<Mont> {
        let field = domain.field()?;
        let m = field.modulus();
        if m.bits() > 256 || !m.bit(0) {
            return None;
        }
        let odd = Odd::new(to_uint(m)).into_option()?;
        Some(Mont {
            params: MontyParams::new_vartime(odd),
            field: field.clone(),
        })
    }
}

fn to_uint(v: &BigUint) -> U256 {
    let mut bytes = v.to_bytes_le();
    bytes.resize(32, 0);
    U256::from_le_slice(&bytes)
}

impl Arith for Mont {
    type E = MontyForm<4>;

    fn lift(&self, s: &Scalar) -> Self::E {
        let v = s.field_value().expect("field scalar");
        MontyForm::new(&to_uint(v), self.params)
    }
    fn lower(&self, e: &Self::E) -> Scalar {
        let v = BigUint::from_bytes_le(&e.retrieve().to_le_bytes());
        Scalar::from_reduced(v, &self.field)
    }
    fn zero(&self) -> Self::E {
        MontyForm::zero(self.params)
    }
    fn is_zero(&self, e: &Self::E) -> bool {
        *e.as_montgomery() == U256::ZERO
    }
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E {
        a + b
    }
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E {
        a - b
    }
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E {
        a * b
    }
}

/// Runs `$body` with `$k` bound to the fastest [`Arith`] for `$domain`.
macro_rules! with_arith {
    ($domain:expr, $k:ident => $body:expr) => {
        match $crate::algebra::kernel::Mont::for_domain($domain) {
            Some($k) => $body,
            None => {
                let $k = $crate::algebra::kernel::Exact($domain.clone());
                $body
            }
        }
    };
}
pub(super) use with_arith;

pub(super) fn mul<A: Arith>(k: &A, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let (a, b) = (k.lift_all(a), k.lift_all(b));
    let mut out = vec![k.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if k.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = k.add(&out[i + j], &k.mul(x, y));
        }
    }
    k.lower_all(&out)
}

/// Long division by `den` (degree `den.len() - 1`, leading inverse given).
pub(super) fn divmod<A: Arith>(
    k: &A,
    num: &[Scalar],
    den: &[Scalar],
    lead_inv: &Scalar,
) -> (Vec<Scalar>, Vec<Scalar>) {
    let dd = den.len() - 1;
    let mut rem = k.lift_all(num);
    let den = k.lift_all(den);
    let lead_inv = k.lift(lead_inv);
    let mut quot = vec![k.zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let top = &rem[i + dd];
        if k.is_zero(top) {
            continue;
        }
        let q = k.mul(top, &lead_inv);
        for (j, d) in den.iter().enumerate() {
            rem[i + j] = k.sub(&rem[i + j], &k.mul(&q, d));
        }
        quot[i] = q;
    }
    rem.truncate(dd);
    (k.lower_all(&quot), k.lower_all(&rem))
}

/// Coefficients of the monic `prod (x - node)`.
pub(super) fn vanishing<A: Arith>(k: &A, one: &Scalar, nodes: &[Scalar]) -> Vec<Scalar> {
    let mut coeffs = vec![k.lift(one)];
    for a in nodes {
        let a = k.lift(a);
        coeffs.push(k.zero());
        for i in (0..coeffs.len()).rev() {
            let lower = if i > 0 { coeffs[i - 1].clone() } else { k.zero() };
            coeffs[i] = k.sub(&lower, &k.mul(&a, &coeffs[i]));
        }
    }
    k.lower_all(&coeffs)
}

/// Barycentric weights `1 / prod_{k != i} (x_i - x_k)`, with a single
/// inversion for the whole batch. The nodes must be distinct.
pub(super) fn weights<A: Arith>(k: &A, one: &Scalar, nodes: &[Scalar]) -> Vec<Scalar> {
    let xs = k.lift_all(nodes);
    let one = k.lift(one);
    let denoms: Vec<A::E> = xs
        .iter()
        .enumerate()
        .map(|(i, xi)| {
            xs.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(one.clone(), |acc, (_, xj)| k.mul(&acc, &k.sub(xi, xj)))
        })
        .collect();
    let mut prefix = Vec::with_capacity(denoms.len());
    let mut run = one;
    for d in &denoms {
        prefix.push(run.clone());
        run = k.mul(&run, d);
    }
    let mut inv = k.lift(&k.lower(&run).inv().expect("distinct nodes"));
    let mut out = vec![k.zero(); denoms.len()];
    for i in (0..denoms.len()).rev() {
        out[i] = k.mul(&inv, &prefix[i]);
        inv = k.mul(&inv, &denoms[i]);
    }
    k.lower_all(&out)
}

/// `sum_i values[i] * w_i * z / (x - x_i)` for each value set.
pub(super) fn interpolate<A: Arith>(
    k: &A,
    nodes: &[Scalar],
    weights: &[Scalar],
    vanishing: &[Scalar],
    value_sets: &[&[Scalar]],
) -> Vec<Vec<Scalar>> {
    let n = nodes.len();
    let z = k.lift_all(vanishing);
    let mut acc = vec![vec![k.zero(); n]; value_sets.len()];
    let mut quotient = vec![k.zero(); n];
    for i in 0..n {
        let live: Vec<usize> = (0..value_sets.len())
            .filter(|&s| !value_sets[s][i].is_zero())
            .collect();
        if live.is_empty() {
            continue;
        }
        // synthetic division of z by (x - x_i)
        let xi = k.lift(&nodes[i]);
        quotient[n - 1] = z[n].clone();
        for j in (1..n).rev() {
            quotient[j - 1] = k.add(&z[j], &k.mul(&xi, &quotient[j]));
        }
        let wi = k.lift(&weights[i]);
        for s in live {
            let c = k.mul(&k.lift(&value_sets[s][i]), &wi);
            for (a, q) in acc[s].iter_mut().zip(&quotient) {
                *a = k.add(a, &k.mul(&c, q));
            }
        }
    }
    acc.iter().map(|c| k.lower_all(c)).collect()
}
