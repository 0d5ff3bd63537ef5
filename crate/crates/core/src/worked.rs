//! The cubic `x^3 + x + 5 == 35` carried through every stage in exact
//! rational arithmetic, with a plain-text rendering of each table.

use std::fmt::Write as _;

use crate::algebra::{Domain, Poly, Scalar};
use crate::frontend::{compile_source, FlatProgram, FrontendError};
use crate::qap::{combine_with_witness, r1cs_to_qap, target_poly, Family, Qap, QapError};
use crate::r1cs::{compile_to_r1cs, generate_witness, ConstraintSystem, R1csError, WitnessVector};
use crate::CUBIC_SOURCE;

#[derive(Debug, thiserror::Error)]
pub enum WorkedError {
    #[error(transparent)]
    Frontend(#[from] FrontendError),
    #[error(transparent)]
    R1cs(#[from] R1csError),
    #[error(transparent)]
    Qap(#[from] QapError),
}

pub struct WorkedExample {
    pub program: FlatProgram,
    pub r1cs: ConstraintSystem,
    pub witness: WitnessVector,
    pub qap: Qap,
    pub v: Poly,
    pub w: Poly,
    pub k: Poly,
    pub t: Poly,
    pub h: Poly,
    pub remainder: Poly,
}

impl WorkedExample {
    pub fn build() -> Result<Self, WorkedError> {
        let d = Domain::Rational;
        let program = compile_source(CUBIC_SOURCE, &d)?;
        let r1cs = compile_to_r1cs(&program);
        let witness = generate_witness(&program, &d.from_i64(3))?;
        let qap = r1cs_to_qap(&r1cs)?;
        let (v, w, k) = combine_with_witness(&qap, &witness)?;
        let t = target_poly(&v, &w, &k)?;
        let (h, remainder) = t.divmod(qap.z()).map_err(QapError::from)?;
        Ok(WorkedExample {
            program,
            r1cs,
            witness,
            qap,
            v,
            w,
            k,
            t,
            h,
            remainder,
        })
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let names = &self.r1cs.wire_names;
        let d = &self.r1cs.domain;
        let _ = writeln!(out, "program:\n{}", CUBIC_SOURCE.trim_end());
        let _ = writeln!(out, "\nwires: [{}]", names.join(", "));
        let _ = writeln!(out, "\ngates:");
        for g in &self.program.gates {
            // additions carry the whole sum on the left and `one` on the right
            let rhs = match g.kind {
                crate::frontend::GateKind::Add => render_lc(&g.left, names),
                crate::frontend::GateKind::Mul => format!(
                    "{} * {}",
                    render_factor(&g.left, names),
                    render_factor(&g.right, names)
                ),
            };
            let _ = writeln!(out, "  {} = {rhs}", names[g.out]);
        }
        for (label, pick) in [("V", 0usize), ("W", 1), ("K", 2)] {
            let _ = writeln!(out, "\nR1CS {label} (rows = gates, columns = wires):");
            for row in &self.r1cs.rows {
                let dense = &row.dense(self.r1cs.num_wires, d)[pick];
                let _ = writeln!(out, "  [{}]", join(dense.iter().map(Scalar::to_string)));
            }
        }
        let _ = writeln!(
            out,
            "\nwitness at x = 3: [{}]",
            join(self.witness.t.iter().map(Scalar::to_string))
        );
        for (label, fam) in [("V", Family::V), ("W", Family::W), ("K", Family::K)] {
            let _ = writeln!(out, "\n{label} polynomials (ascending coefficients):");
            for (j, p) in self.qap.polys(fam).iter().enumerate() {
                let _ = writeln!(out, "  {:>5}: {}", names[j], decimals(p));
            }
        }
        let _ = writeln!(out, "\ncombined with the witness:");
        let _ = writeln!(out, "  V = {}", decimals(&self.v));
        let _ = writeln!(out, "  W = {}", decimals(&self.w));
        let _ = writeln!(out, "  K = {}", decimals(&self.k));
        let _ = writeln!(out, "\nT = V*W - K = {}", decimals(&self.t));
        let _ = writeln!(out, "Z = {}", decimals(self.qap.z()));
        let _ = writeln!(out, "H = T / Z = {}", decimals(&self.h));
        let _ = writeln!(out, "remainder = {}", decimals(&self.remainder));
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let exact = |p: &Poly| serde_json::json!(p.to_strings());
        serde_json::json!({
            "wires": self.r1cs.wire_names,
            "r1cs": self.r1cs.to_json(),
            "witness": self.witness.to_json(),
            "qap": self.qap.to_json(),
            "v": exact(&self.v),
            "w": exact(&self.w),
            "k": exact(&self.k),
            "t": exact(&self.t),
            "z": exact(self.qap.z()),
            "h": exact(&self.h),
            "remainder": exact(&self.remainder),
        })
    }
}

fn render_lc(lc: &crate::lincomb::LinearCombination, names: &[String]) -> String {
    let terms: Vec<String> = lc
        .iter()
        .map(|(j, c)| match (j, c.is_one()) {
            (0, _) => c.to_string(),
            (_, true) => names[j].clone(),
            _ => format!("{c}*{}", names[j]),
        })
        .collect();
    terms.join(" + ")
}

fn render_factor(lc: &crate::lincomb::LinearCombination, names: &[String]) -> String {
    if lc.iter().count() > 1 {
        format!("({})", render_lc(lc, names))
    } else {
        render_lc(lc, names)
    }
}

fn join(items: impl Iterator<Item = String>) -> String {
    items.collect::<Vec<_>>().join(", ")
}

/// Coefficients to three places, truncated toward zero.
pub fn decimals(p: &Poly) -> String {
    if p.is_zero() {
        return "[0]".into();
    }
    format!("[{}]", join(p.coeffs().iter().map(|c| c.render_decimal(3))))
}
