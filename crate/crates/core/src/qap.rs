//! R1CS to QAP: every wire column of `V`, `W`, `K` becomes the polynomial
//! that takes the column's value at gate node `i` (nodes are `1..=n`).
//! A witness satisfies every row at once iff `V*W - K` is divisible by
//! `z = (x-1)...(x-n)`.
//!
//! Columns are kept sparse next to a shared [`LagrangeBasis`]; per-wire
//! polynomials are materialized on request. Large circuits (the payment
//! circuit has ~1500 gates) never need all of them at once: setup only
//! evaluates them at one point and proving interpolates the three
//! witness-weighted combinations directly.

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraError, Domain, LagrangeBasis, Poly, Scalar};
use crate::r1cs::{ConstraintSystem, R1csError, WitnessVector};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QapError {
    #[error("constraint system has no rows")]
    Empty,
    #[error("target polynomial is not divisible by z (remainder {remainder:?})")]
    NotDivisible { remainder: Poly },
    #[error("dimension mismatch: expected {expected} wires, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    R1cs(#[from] R1csError),
}

type Column = Vec<(usize, Scalar)>;

/// The three per-wire polynomial families plus the vanishing polynomial.
#[derive(Clone, Debug)]
pub struct Qap {
    domain: Domain,
    num_gates: usize,
    num_wires: usize,
    public_wires: Vec<usize>,
    wire_names: Vec<String>,
    digest: String,
    basis: LagrangeBasis,
    v_cols: Vec<Column>,
    w_cols: Vec<Column>,
    k_cols: Vec<Column>,
}

/// Every wire polynomial evaluated at one point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WireEvaluations {
    pub v: Vec<Scalar>,
    pub w: Vec<Scalar>,
    pub k: Vec<Scalar>,
    pub z: Scalar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    V,
    W,
    K,
}

impl Qap {
    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn num_gates(&self) -> usize {
        self.num_gates
    }

    pub fn num_wires(&self) -> usize {
        self.num_wires
    }

    pub fn public_wires(&self) -> &[usize] {
        &self.public_wires
    }

    pub fn wire_names(&self) -> &[String] {
        &self.wire_names
    }

    /// Digest of the constraint system this QAP came from.
    pub fn digest(&self) -> &str {
        &self.digest
    }

    pub fn z(&self) -> &Poly {
        self.basis.vanishing()
    }

    fn cols(&self, fam: Family) -> &[Column] {
        match fam {
            Family::V => &self.v_cols,
            Family::W => &self.w_cols,
            Family::K => &self.k_cols,
        }
    }

    fn column_values(&self, col: &Column) -> Vec<Scalar> {
        let mut vals = vec![self.domain.zero(); self.num_gates];
        for (i, c) in col {
            vals[*i] = c.clone();
        }
        vals
    }

    /// Polynomial of wire `j` in family `fam`.
    pub fn poly(&self, fam: Family, j: usize) -> Poly {
        self.basis.interpolate(&self.column_values(&self.cols(fam)[j]))
    }

    pub fn polys(&self, fam: Family) -> Vec<Poly> {
        (0..self.num_wires).map(|j| self.poly(fam, j)).collect()
    }

    /// All wire polynomials and `z` at `x`, in `O(gates + nonzeros)` after
    /// one basis evaluation.
    pub fn evaluate_at(&self, x: &Scalar) -> Result<WireEvaluations, QapError> {
        let basis = self.basis.eval_basis(x)?;
        let eval = |cols: &[Column]| -> Vec<Scalar> {
            cols.iter()
                .map(|col| {
                    col.iter()
                        .fold(self.domain.zero(), |acc, (i, c)| &acc + &(c * &basis[*i]))
                })
                .collect()
        };
        Ok(WireEvaluations {
            v: eval(&self.v_cols),
            w: eval(&self.w_cols),
            k: eval(&self.k_cols),
            z: self.z().eval(x)?,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let fam = |f| self.polys(f).iter().map(Poly::to_strings).collect();
        serde_json::to_value(QapFile {
            field: self.domain.tag(),
            num_gates: self.num_gates,
            v_polys: fam(Family::V),
            w_polys: fam(Family::W),
            k_polys: fam(Family::K),
            z: self.z().to_strings(),
        })
        .expect("plain data")
    }
}

#[derive(Serialize, Deserialize)]
struct QapFile {
    field: String,
    num_gates: usize,
    v_polys: Vec<Vec<String>>,
    w_polys: Vec<Vec<String>>,
    k_polys: Vec<Vec<String>>,
    z: Vec<String>,
}

/// Interpolates every wire column over nodes `1..=rows`.
pub fn r1cs_to_qap(cs: &ConstraintSystem) -> Result<Qap, QapError> {
    if cs.rows.is_empty() {
        return Err(QapError::Empty);
    }
    let n = cs.num_wires;
    let mut v_cols = vec![Vec::new(); n];
    let mut w_cols = vec![Vec::new(); n];
    let mut k_cols = vec![Vec::new(); n];
    for (i, row) in cs.rows.iter().enumerate() {
        for (cols, lc) in [(&mut v_cols, &row.v), (&mut w_cols, &row.w), (&mut k_cols, &row.k)] {
            for (j, c) in lc.iter() {
                cols[j].push((i, c.clone()));
            }
        }
    }
    Ok(Qap {
        domain: cs.domain.clone(),
        num_gates: cs.rows.len(),
        num_wires: n,
        public_wires: cs.public_wires.clone(),
        wire_names: cs.wire_names.clone(),
        digest: cs.digest(),
        basis: LagrangeBasis::consecutive(&cs.domain, cs.rows.len())?,
        v_cols,
        w_cols,
        k_cols,
    })
}

/// `(V, W, K)` with `V = sum_j t[j] * v_j` and likewise for `W`, `K`.
///
/// Computed by weighting each row at its node and interpolating once per
/// family, which equals the per-wire sum by linearity of interpolation.
pub fn combine_with_witness(q: &Qap, t: &WitnessVector) -> Result<(Poly, Poly, Poly), QapError> {
    if t.len() != q.num_wires {
        return Err(QapError::DimensionMismatch {
            expected: q.num_wires,
            got: t.len(),
        });
    }
    if t.t.iter().any(|s| !s.in_domain(&q.domain)) {
        return Err(AlgebraError::DomainMismatch.into());
    }
    let node_values = |cols: &[Column]| -> Vec<Scalar> {
        let mut acc = vec![q.domain.zero(); q.num_gates];
        for (j, col) in cols.iter().enumerate() {
            if t.t[j].is_zero() {
                continue;
            }
            for (i, c) in col {
                acc[*i] = &acc[*i] + &(c * &t.t[j]);
            }
        }
        acc
    };
    let (a, b, c) = (node_values(&q.v_cols), node_values(&q.w_cols), node_values(&q.k_cols));
    let mut polys = q.basis.interpolate_many(&[&a, &b, &c]);
    let k = polys.pop().expect("three");
    let w = polys.pop().expect("three");
    let v = polys.pop().expect("three");
    Ok((v, w, k))
}

/// `T = V * W - K`.
pub fn target_poly(v: &Poly, w: &Poly, k: &Poly) -> Result<Poly, QapError> {
    Ok(v.mul(w)?.sub(k)?)
}

/// `H = T / Z`, only when the division is exact.
pub fn compute_h(t: &Poly, z: &Poly) -> Result<Poly, QapError> {
    let (h, rem) = t.divmod(z)?;
    if rem.is_zero() {
        Ok(h)
    } else {
        Err(QapError::NotDivisible { remainder: rem })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::compile_source;
    use crate::r1cs::{compile_to_r1cs, generate_witness};
    use crate::CUBIC_SOURCE;

    fn cubic_qap(d: &Domain) -> (ConstraintSystem, Qap) {
        let cs = compile_to_r1cs(&compile_source(CUBIC_SOURCE, d).unwrap());
        let q = r1cs_to_qap(&cs).unwrap();
        (cs, q)
    }

    #[test]
    fn first_v_polynomial_exact() {
        let d = Domain::Rational;
        let (_, q) = cubic_qap(&d);
        let v0 = q.poly(Family::V, 0);
        let rendered: Vec<_> = v0.coeffs().iter().map(|c| c.render_decimal(3)).collect();
        assert_eq!(rendered, ["-5.000", "9.166", "-5.000", "0.833"]);
        assert_eq!(v0.coeffs()[3], d.ratio(5, 6).unwrap());
    }

    #[test]
    fn evaluation_at_nodes_reproduces_rows() {
        let d = Domain::Rational;
        let (cs, q) = cubic_qap(&d);
        for (i, row) in cs.rows.iter().enumerate() {
            let at = q.evaluate_at(&d.from_u64(i as u64 + 1)).unwrap();
            let [v, w, k] = row.dense(cs.num_wires, &d);
            assert_eq!((at.v, at.w, at.k), (v, w, k), "gate {}", i + 1);
            assert!(at.z.is_zero());
        }
        for (i, row) in cs.rows.iter().enumerate() {
            let x = d.from_u64(i as u64 + 1);
            let [v, _, _] = row.dense(cs.num_wires, &d);
            for (j, p) in q.polys(Family::V).iter().enumerate() {
                assert_eq!(p.eval(&x).unwrap(), v[j]);
            }
        }
    }

    #[test]
    fn unit_witness_selects_first_wire() {
        let d = Domain::Rational;
        let (_, q) = cubic_qap(&d);
        let mut t = vec![d.zero(); 6];
        t[0] = d.one();
        let (v, w, k) = combine_with_witness(&q, &WitnessVector::new(t).unwrap()).unwrap();
        assert_eq!(v, q.poly(Family::V, 0));
        assert_eq!(w, q.poly(Family::W, 0));
        assert_eq!(k, q.poly(Family::K, 0));
    }

    #[test]
    fn combined_v_at_first_node_is_row_dot_product() {
        let d = Domain::Rational;
        let (_, q) = cubic_qap(&d);
        let fp = compile_source(CUBIC_SOURCE, &d).unwrap();
        let t = generate_witness(&fp, &d.from_i64(3)).unwrap();
        let (v, _, _) = combine_with_witness(&q, &t).unwrap();
        assert_eq!(v.eval(&d.one()).unwrap(), d.from_i64(3));
    }

    #[test]
    fn h_of_z_is_one_and_zero_target_is_zero() {
        let d = Domain::bn254();
        let (_, q) = cubic_qap(&d);
        assert_eq!(compute_h(q.z(), q.z()).unwrap(), Poly::constant(d.one()));
        let zero = Poly::zero(&d);
        assert!(target_poly(&zero, &zero, &zero).unwrap().is_zero());
    }

    #[test]
    fn corrupted_witness_is_not_divisible() {
        let d = Domain::Rational;
        let (_, q) = cubic_qap(&d);
        let fp = compile_source(CUBIC_SOURCE, &d).unwrap();
        let mut t = generate_witness(&fp, &d.from_i64(3)).unwrap();
        t.t[3] = d.from_i64(10);
        let (v, w, k) = combine_with_witness(&q, &t).unwrap();
        let err = compute_h(&target_poly(&v, &w, &k).unwrap(), q.z()).unwrap_err();
        assert!(matches!(err, QapError::NotDivisible { ref remainder } if !remainder.is_zero()));
    }

    #[test]
    fn empty_system_rejected() {
        let cs = ConstraintSystem {
            domain: Domain::bn254(),
            num_wires: 1,
            wire_names: vec!["one".into()],
            public_wires: vec![0],
            rows: vec![],
        };
        assert!(matches!(r1cs_to_qap(&cs), Err(QapError::Empty)));
    }

    #[test]
    fn qap_json_lists_polys_per_wire() {
        let d = Domain::Rational;
        let (_, q) = cubic_qap(&d);
        let json = q.to_json();
        assert_eq!(json["num_gates"], 4);
        assert_eq!(json["v_polys"].as_array().unwrap().len(), 6);
        assert_eq!(json["z"], serde_json::json!(["24/1", "-50/1", "35/1", "-10/1", "1/1"]));
        assert_eq!(json["v_polys"][2], serde_json::json!([]));
    }
}
