//! Source language front end: parsing and flattening into binary gates.
//!
//! Flattening turns every `+`, `-` and `*` into exactly one gate and expands
//! `e**k` into `k - 1` left-to-right multiplications. The wire list starts
//! with `one`, the input and `out`, followed by intermediates in the order
//! they are created. For `y = x**3; return x + y + 5` this yields
//!
//! ```text
//! sym1 = x * x
//! y    = sym1 * x
//! sym2 = x + y
//! out  = sym2 + 5
//! ```
//!
//! over wires `[one, x, out, sym1, y, sym2]`.

mod ast;
mod parse;

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

pub use ast::{Assignment, Ast, BinOp, Expr};
pub use parse::{parse_source, RESERVED};

use crate::algebra::{AlgebraError, Domain, Scalar};
use crate::lincomb::LinearCombination;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FrontendError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("undefined variable '{name}' at {line}:{col}")]
    UndefinedVariable { name: String, line: usize, col: usize },
    #[error("variable '{name}' reassigned at {line}:{col}")]
    Reassignment { name: String, line: usize, col: usize },
    #[error("'{name}' is a reserved wire name ({line}:{col})")]
    ReservedName { name: String, line: usize, col: usize },
    #[error("malformed circuit file: {0}")]
    Malformed(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

pub const ONE_WIRE: usize = 0;
pub const INPUT_WIRE: usize = 1;
pub const OUT_WIRE: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    Mul,
    Add,
}

/// `left * right = out`. Add gates keep `right = one`, so both kinds share
/// the same evaluation rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gate {
    pub kind: GateKind,
    pub left: LinearCombination,
    pub right: LinearCombination,
    pub out: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatProgram {
    pub domain: Domain,
    pub wires: Vec<String>,
    pub public_wires: Vec<usize>,
    pub gates: Vec<Gate>,
}

impl FlatProgram {
    pub fn num_wires(&self) -> usize {
        self.wires.len()
    }

    pub fn wire_index(&self, name: &str) -> Option<usize> {
        self.wires.iter().position(|w| w == name)
    }

    /// Runs the gates in order from `input`, returning every wire's value.
    pub fn forward(&self, input: &Scalar) -> Result<Vec<Scalar>, FrontendError> {
        if !input.in_domain(&self.domain) {
            return Err(AlgebraError::DomainMismatch.into());
        }
        let mut values = vec![self.domain.zero(); self.wires.len()];
        values[ONE_WIRE] = self.domain.one();
        values[INPUT_WIRE] = input.clone();
        for g in &self.gates {
            let l = g.left.eval(&values, &self.domain);
            let r = g.right.eval(&values, &self.domain);
            values[g.out] = &l * &r;
        }
        Ok(values)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let file = CircuitFile {
            field: self.domain.tag(),
            wires: self.wires.clone(),
            public: self.public_wires.clone(),
            gates: self
                .gates
                .iter()
                .map(|g| GateFile {
                    kind: g.kind,
                    left: g.left.to_json_map(),
                    right: g.right.to_json_map(),
                    out: g.out,
                })
                .collect(),
        };
        serde_json::to_value(file).expect("plain data")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, FrontendError> {
        let file: CircuitFile = serde_json::from_value(value.clone())
            .map_err(|e| FrontendError::Malformed(e.to_string()))?;
        let domain = Domain::from_tag(&file.field)?;
        let n = file.wires.len();
        if n < 3 || file.wires[ONE_WIRE] != "one" {
            return Err(FrontendError::Malformed("wire 0 must be 'one'".into()));
        }
        let mut gates = Vec::with_capacity(file.gates.len());
        let mut assigned = HashSet::new();
        for g in &file.gates {
            let left = LinearCombination::from_json_map(&g.left, &domain)?;
            let right = LinearCombination::from_json_map(&g.right, &domain)?;
            let in_range = |lc: &LinearCombination| lc.max_wire().is_none_or(|w| w < n);
            if g.out >= n || g.out <= INPUT_WIRE || !in_range(&left) || !in_range(&right) {
                return Err(FrontendError::Malformed("wire index out of range".into()));
            }
            if !assigned.insert(g.out) {
                return Err(FrontendError::Malformed(format!("wire {} assigned twice", g.out)));
            }
            gates.push(Gate {
                kind: g.kind,
                left,
                right,
                out: g.out,
            });
        }
        if file.public.iter().any(|&w| w >= n) {
            return Err(FrontendError::Malformed("public wire out of range".into()));
        }
        Ok(FlatProgram {
            domain,
            wires: file.wires,
            public_wires: file.public,
            gates,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct CircuitFile {
    field: String,
    wires: Vec<String>,
    public: Vec<usize>,
    gates: Vec<GateFile>,
}

#[derive(Serialize, Deserialize)]
struct GateFile {
    kind: GateKind,
    left: BTreeMap<String, String>,
    right: BTreeMap<String, String>,
    out: usize,
}

enum Dest<'a> {
    Fresh,
    Named(&'a str),
}

struct Flattener<'a> {
    domain: &'a Domain,
    wires: Vec<String>,
    env: HashMap<String, usize>,
    taken: HashSet<String>,
    next_sym: usize,
    gates: Vec<Gate>,
}

impl Flattener<'_> {
    fn alloc(&mut self, dest: Dest) -> usize {
        let name = match dest {
            Dest::Named(n) => n.to_string(),
            Dest::Fresh => loop {
                self.next_sym += 1;
                let cand = format!("sym{}", self.next_sym);
                if !self.taken.contains(&cand) {
                    break cand;
                }
            },
        };
        if let Some(&idx) = self.env.get(&name) {
            // Only `out`, which is pre-allocated at index 2.
            return idx;
        }
        let idx = self.wires.len();
        self.wires.push(name.clone());
        self.env.insert(name, idx);
        idx
    }

    fn one(&self) -> LinearCombination {
        LinearCombination::wire(ONE_WIRE, self.domain)
    }

    /// Reduces an expression to a linear combination, emitting gates for
    /// any compound sub-expression.
    fn operand(&mut self, e: &Expr) -> LinearCombination {
        match e {
            Expr::Var(v) => LinearCombination::wire(self.env[v], self.domain),
            Expr::Lit(n) => LinearCombination::constant(self.domain.from_bigint(n)),
            Expr::Pow(b, 1) => self.operand(b),
            _ => {
                let w = self.emit(e, Dest::Fresh);
                LinearCombination::wire(w, self.domain)
            }
        }
    }

    fn emit(&mut self, e: &Expr, dest: Dest) -> usize {
        match e {
            Expr::Binary(l, op, r) => {
                let a = self.operand(l);
                let b = self.operand(r);
                let (kind, left, right) = match op {
                    BinOp::Add => (GateKind::Add, a.plus(&b), self.one()),
                    BinOp::Sub => (GateKind::Add, a.minus(&b), self.one()),
                    BinOp::Mul => (GateKind::Mul, a, b),
                };
                let out = self.alloc(dest);
                self.gates.push(Gate { kind, left, right, out });
                out
            }
            Expr::Pow(b, k) if *k >= 2 => {
                let base = self.operand(b);
                let mut acc = base.clone();
                let mut dest = Some(dest);
                let mut out = 0;
                for i in 1..*k {
                    let d = if i == k - 1 { dest.take().expect("used once") } else { Dest::Fresh };
                    out = self.alloc(d);
                    self.gates.push(Gate {
                        kind: GateKind::Mul,
                        left: acc,
                        right: base.clone(),
                        out,
                    });
                    acc = LinearCombination::wire(out, self.domain);
                }
                out
            }
            // Atom: copy gate `dest = atom * one`.
            _ => {
                let left = self.operand(e);
                let out = self.alloc(dest);
                self.gates.push(Gate {
                    kind: GateKind::Mul,
                    left,
                    right: self.one(),
                    out,
                });
                out
            }
        }
    }
}

/// Flattens a validated program into gates over `domain`.
pub fn flatten(ast: &Ast, domain: &Domain) -> FlatProgram {
    let mut taken: HashSet<String> = ast.assignments.iter().map(|a| a.target.clone()).collect();
    taken.insert(ast.param.clone());
    let mut f = Flattener {
        domain,
        wires: vec!["one".into(), ast.param.clone(), "out".into()],
        env: HashMap::from([
            ("one".to_string(), ONE_WIRE),
            (ast.param.clone(), INPUT_WIRE),
            ("out".to_string(), OUT_WIRE),
        ]),
        taken,
        next_sym: 0,
        gates: Vec::new(),
    };
    for a in &ast.assignments {
        f.emit(&a.expr, Dest::Named(&a.target));
    }
    f.emit(&ast.ret, Dest::Named("out"));
    FlatProgram {
        domain: domain.clone(),
        wires: f.wires,
        public_wires: vec![ONE_WIRE, OUT_WIRE],
        gates: f.gates,
    }
}

/// Parse and flatten in one step.
pub fn compile_source(text: &str, domain: &Domain) -> Result<FlatProgram, FrontendError> {
    Ok(flatten(&parse_source(text)?, domain))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::CUBIC_SOURCE;

    fn lc(domain: &Domain, terms: &[(usize, i64)]) -> LinearCombination {
        terms.iter().fold(LinearCombination::new(), |acc, &(w, c)| {
            acc.with_term(w, domain.from_i64(c))
        })
    }

    #[test]
    fn cubic_flattens_to_four_gates() {
        let d = Domain::Rational;
        let fp = compile_source(CUBIC_SOURCE, &d).unwrap();
        assert_eq!(fp.wires, ["one", "x", "out", "sym1", "y", "sym2"]);
        assert_eq!(fp.public_wires, [0, 2]);
        let expected = vec![
            Gate { kind: GateKind::Mul, left: lc(&d, &[(1, 1)]), right: lc(&d, &[(1, 1)]), out: 3 },
            Gate { kind: GateKind::Mul, left: lc(&d, &[(3, 1)]), right: lc(&d, &[(1, 1)]), out: 4 },
            Gate { kind: GateKind::Add, left: lc(&d, &[(1, 1), (4, 1)]), right: lc(&d, &[(0, 1)]), out: 5 },
            Gate { kind: GateKind::Add, left: lc(&d, &[(0, 5), (5, 1)]), right: lc(&d, &[(0, 1)]), out: 2 },
        ];
        assert_eq!(fp.gates, expected);
    }

    #[test]
    fn bare_return_is_a_copy_gate() {
        let d = Domain::bn254();
        let fp = compile_source("def f(x): return x", &d).unwrap();
        assert_eq!(fp.wires, ["one", "x", "out"]);
        assert_eq!(
            fp.gates,
            vec![Gate { kind: GateKind::Mul, left: lc(&d, &[(1, 1)]), right: lc(&d, &[(0, 1)]), out: 2 }]
        );
    }

    #[test]
    fn interpreter_and_gates_agree_at_three() {
        let d = Domain::bn254();
        let ast = parse_source(CUBIC_SOURCE).unwrap();
        let fp = flatten(&ast, &d);
        let x = d.from_i64(3);
        assert_eq!(ast.evaluate(&x), d.from_i64(35));
        assert_eq!(fp.forward(&x).unwrap()[OUT_WIRE], d.from_i64(35));
    }

    #[test]
    fn subtraction_folds_into_linear_combination() {
        let d = Domain::bn254();
        let fp = compile_source("def f(x): return x - 3", &d).unwrap();
        assert_eq!(fp.gates.len(), 1);
        assert_eq!(fp.gates[0].left, lc(&d, &[(0, -3), (1, 1)]));
        assert_eq!(fp.forward(&d.from_i64(10)).unwrap()[OUT_WIRE], d.from_i64(7));
    }

    #[test]
    fn fresh_names_skip_user_variables() {
        let d = Domain::bn254();
        let fp = compile_source("def f(x):\n sym1 = x * x * x\n return sym1", &d).unwrap();
        assert_eq!(fp.wires, ["one", "x", "out", "sym2", "sym1"]);
    }

    #[test]
    fn json_round_trip() {
        let d = Domain::Rational;
        let fp = compile_source(CUBIC_SOURCE, &d).unwrap();
        let back = FlatProgram::from_json(&fp.to_json()).unwrap();
        assert_eq!(back, fp);
        let mut bad = fp.to_json();
        bad["gates"][0]["out"] = serde_json::json!(99);
        assert!(matches!(FlatProgram::from_json(&bad), Err(FrontendError::Malformed(_))));
    }
}
