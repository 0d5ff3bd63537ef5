//! Rank-1 constraint systems: rows `(v, w, k)` satisfied by an assignment
//! `t` when `(t.v) * (t.w) - (t.k) = 0`.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::{AlgebraError, Domain, Scalar};
use crate::frontend::{FlatProgram, FrontendError, ONE_WIRE};
use crate::lincomb::LinearCombination;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum R1csError {
    #[error("dimension mismatch: expected {expected} entries, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("witness must hold 1 on the `one` wire")]
    BadOneWire,
    #[error("malformed constraint file: {0}")]
    Malformed(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Frontend(#[from] FrontendError),
}

/// One constraint row. Stored sparsely; [`Constraint::dense`] expands it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub v: LinearCombination,
    pub w: LinearCombination,
    pub k: LinearCombination,
}

impl Constraint {
    pub fn dense(&self, num_wires: usize, domain: &Domain) -> [Vec<Scalar>; 3] {
        [
            self.v.to_dense(num_wires, domain),
            self.w.to_dense(num_wires, domain),
            self.k.to_dense(num_wires, domain),
        ]
    }

    pub fn holds(&self, t: &[Scalar], domain: &Domain) -> bool {
        let lhs = &self.v.eval(t, domain) * &self.w.eval(t, domain);
        lhs == self.k.eval(t, domain)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSystem {
    pub domain: Domain,
    pub num_wires: usize,
    pub wire_names: Vec<String>,
    pub public_wires: Vec<usize>,
    pub rows: Vec<Constraint>,
}

impl ConstraintSystem {
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn private_wires(&self) -> Vec<usize> {
        (0..self.num_wires)
            .filter(|w| !self.public_wires.contains(w))
            .collect()
    }

    /// Index of the first violated row.
    pub fn first_unsatisfied(&self, t: &WitnessVector) -> Result<Option<usize>, R1csError> {
        self.check_len(t)?;
        Ok(self.rows.iter().position(|r| !r.holds(&t.t, &self.domain)))
    }

    fn check_len(&self, t: &WitnessVector) -> Result<(), R1csError> {
        if t.t.len() != self.num_wires {
            return Err(R1csError::DimensionMismatch {
                expected: self.num_wires,
                got: t.t.len(),
            });
        }
        if t.t.iter().any(|s| !s.in_domain(&self.domain)) {
            return Err(AlgebraError::DomainMismatch.into());
        }
        Ok(())
    }

    /// Hex SHA-256 over the canonical sparse encoding of the system. Keys
    /// and proofs carry it so mismatched circuits are caught early.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.domain.tag().as_bytes());
        h.update(format!("|{}|{:?}|", self.num_wires, self.public_wires).as_bytes());
        for row in &self.rows {
            for lc in [&row.v, &row.w, &row.k] {
                for (i, c) in lc.iter() {
                    h.update(format!("{i}:{};", c.to_repr_string()).as_bytes());
                }
                h.update(b"/");
            }
        }
        hex::encode(h.finalize())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let [v, w, k] = r.dense(self.num_wires, &self.domain);
                let s = |xs: Vec<Scalar>| xs.iter().map(Scalar::to_repr_string).collect();
                RowFile {
                    v: s(v),
                    w: s(w),
                    k: s(k),
                }
            })
            .collect();
        serde_json::to_value(R1csFile {
            field: self.domain.tag(),
            num_wires: self.num_wires,
            wires: self.wire_names.clone(),
            public: self.public_wires.clone(),
            rows,
        })
        .expect("plain data")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, R1csError> {
        let file: R1csFile = serde_json::from_value(value.clone())
            .map_err(|e| R1csError::Malformed(e.to_string()))?;
        let domain = Domain::from_tag(&file.field)?;
        let n = file.num_wires;
        let parse = |xs: &[String]| -> Result<LinearCombination, R1csError> {
            if xs.len() != n {
                return Err(R1csError::DimensionMismatch {
                    expected: n,
                    got: xs.len(),
                });
            }
            let vals = xs.iter().map(|s| domain.parse(s)).collect::<Result<Vec<_>, _>>()?;
            Ok(LinearCombination::from_dense(&vals))
        };
        let rows = file
            .rows
            .iter()
            .map(|r| {
                Ok(Constraint {
                    v: parse(&r.v)?,
                    w: parse(&r.w)?,
                    k: parse(&r.k)?,
                })
            })
            .collect::<Result<Vec<_>, R1csError>>()?;
        let wire_names = if file.wires.len() == n {
            file.wires
        } else {
            (0..n).map(|i| format!("w{i}")).collect()
        };
        Ok(ConstraintSystem {
            domain,
            num_wires: n,
            wire_names,
            public_wires: file.public,
            rows,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct R1csFile {
    field: String,
    num_wires: usize,
    #[serde(default)]
    wires: Vec<String>,
    public: Vec<usize>,
    rows: Vec<RowFile>,
}

#[derive(Serialize, Deserialize)]
struct RowFile {
    v: Vec<String>,
    w: Vec<String>,
    k: Vec<String>,
}

/// A full wire assignment. Entry 0 is always 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessVector {
    pub t: Vec<Scalar>,
}

impl WitnessVector {
    pub fn new(t: Vec<Scalar>) -> Result<Self, R1csError> {
        match t.first() {
            Some(one) if one.is_one() => Ok(WitnessVector { t }),
            _ => Err(R1csError::BadOneWire),
        }
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let domain = self.t[0].domain();
        serde_json::json!({
            "field": domain.tag(),
            "t": self.t.iter().map(Scalar::to_repr_string).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, R1csError> {
        #[derive(Deserialize)]
        struct File {
            field: String,
            t: Vec<String>,
        }
        let file: File = serde_json::from_value(value.clone())
            .map_err(|e| R1csError::Malformed(e.to_string()))?;
        let domain = Domain::from_tag(&file.field)?;
        let t = file.t.iter().map(|s| domain.parse(s)).collect::<Result<Vec<_>, _>>()?;
        WitnessVector::new(t)
    }
}

/// One row per gate: `v` = left operand, `w` = right operand (the `one` wire
/// for additions), `k` = unit vector at the output wire.
pub fn compile_to_r1cs(fp: &FlatProgram) -> ConstraintSystem {
    let rows = fp
        .gates
        .iter()
        .map(|g| Constraint {
            v: g.left.clone(),
            w: g.right.clone(),
            k: LinearCombination::wire(g.out, &fp.domain),
        })
        .collect();
    ConstraintSystem {
        domain: fp.domain.clone(),
        num_wires: fp.num_wires(),
        wire_names: fp.wires.clone(),
        public_wires: fp.public_wires.clone(),
        rows,
    }
}

/// Forward-evaluates the program on `input`.
pub fn generate_witness(fp: &FlatProgram, input: &Scalar) -> Result<WitnessVector, R1csError> {
    let t = fp.forward(input)?;
    debug_assert!(t[ONE_WIRE].is_one());
    Ok(WitnessVector { t })
}

pub fn is_satisfied(cs: &ConstraintSystem, t: &WitnessVector) -> Result<bool, R1csError> {
    Ok(cs.first_unsatisfied(t)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::compile_source;
    use crate::CUBIC_SOURCE;

    fn cubic(d: &Domain) -> (FlatProgram, ConstraintSystem) {
        let fp = compile_source(CUBIC_SOURCE, d).unwrap();
        let cs = compile_to_r1cs(&fp);
        (fp, cs)
    }

    fn ints(d: &Domain, xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| d.from_i64(x)).collect()
    }

    #[test]
    fn first_and_fourth_gate_triples() {
        let d = Domain::Rational;
        let (_, cs) = cubic(&d);
        assert_eq!(
            cs.rows[0].dense(6, &d),
            [ints(&d, &[0, 1, 0, 0, 0, 0]), ints(&d, &[0, 1, 0, 0, 0, 0]), ints(&d, &[0, 0, 0, 1, 0, 0])]
        );
        assert_eq!(
            cs.rows[3].dense(6, &d),
            [ints(&d, &[5, 0, 0, 0, 0, 1]), ints(&d, &[1, 0, 0, 0, 0, 0]), ints(&d, &[0, 0, 1, 0, 0, 0])]
        );
    }

    #[test]
    fn witnesses_at_several_inputs() {
        let d = Domain::bn254();
        let (fp, cs) = cubic(&d);
        for (x, expected) in [
            (3, [1, 3, 35, 9, 27, 30]),
            (0, [1, 0, 5, 0, 0, 0]),
            (7, [1, 7, 355, 49, 343, 350]),
        ] {
            let t = generate_witness(&fp, &d.from_i64(x)).unwrap();
            assert_eq!(t.t, ints(&d, &expected));
            assert!(is_satisfied(&cs, &t).unwrap());
        }
    }

    #[test]
    fn corrupted_output_is_unsatisfied() {
        let d = Domain::Rational;
        let (_, cs) = cubic(&d);
        let t = WitnessVector::new(ints(&d, &[1, 3, 36, 9, 27, 30])).unwrap();
        assert!(!is_satisfied(&cs, &t).unwrap());
        assert_eq!(cs.first_unsatisfied(&t).unwrap(), Some(3));
    }

    #[test]
    fn negative_root_still_satisfies_rows() {
        let d = Domain::Rational;
        let (_, cs) = cubic(&d);
        let t = WitnessVector::new(ints(&d, &[1, -3, -25, 9, -27, -30])).unwrap();
        assert!(is_satisfied(&cs, &t).unwrap());
    }

    #[test]
    fn every_single_entry_mutation_breaks_the_cubic() {
        let d = Domain::bn254();
        let (fp, cs) = cubic(&d);
        let honest = generate_witness(&fp, &d.from_i64(3)).unwrap();
        for i in 1..honest.len() {
            let mut t = honest.clone();
            t.t[i] = &t.t[i] + &d.one();
            assert!(!is_satisfied(&cs, &t).unwrap(), "wire {i}");
        }
    }

    #[test]
    fn dimension_and_one_wire_errors() {
        let d = Domain::Rational;
        let (_, cs) = cubic(&d);
        let short = WitnessVector::new(ints(&d, &[1, 3])).unwrap();
        assert_eq!(
            is_satisfied(&cs, &short).unwrap_err(),
            R1csError::DimensionMismatch { expected: 6, got: 2 }
        );
        assert_eq!(
            WitnessVector::new(ints(&d, &[2, 3])).unwrap_err(),
            R1csError::BadOneWire
        );
    }

    #[test]
    fn rows_are_sparse() {
        let d = Domain::bn254();
        let fp = compile_source("def f(x):\n a = 3*x + x*x - 7\n return a*a*(a + x)", &d).unwrap();
        let cs = compile_to_r1cs(&fp);
        for (row, gate) in cs.rows.iter().zip(&fp.gates) {
            let nnz = row.v.len() + row.w.len() + row.k.len();
            assert!(nnz <= gate.left.len() + gate.right.len() + 1);
        }
    }

    #[test]
    fn json_is_dense_and_round_trips() {
        let d = Domain::Rational;
        let (_, cs) = cubic(&d);
        let json = cs.to_json();
        assert_eq!(json["rows"][3]["v"], serde_json::json!(["5/1", "0/1", "0/1", "0/1", "0/1", "1/1"]));
        assert_eq!(ConstraintSystem::from_json(&json).unwrap(), cs);
        let t = WitnessVector::new(ints(&d, &[1, 3, 35, 9, 27, 30])).unwrap();
        assert_eq!(WitnessVector::from_json(&t.to_json()).unwrap(), t);
    }
}
