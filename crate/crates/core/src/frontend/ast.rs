use std::fmt;

use num_bigint::BigInt;

use crate::algebra::{Domain, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Var(String),
    Lit(BigInt),
    Binary(Box<Expr>, BinOp, Box<Expr>),
    /// Exponent is at least 1.
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn var(name: &str) -> Self {
        Expr::Var(name.to_string())
    }

    pub fn lit(v: i64) -> Self {
        Expr::Lit(BigInt::from(v))
    }

    pub fn bin(l: Expr, op: BinOp, r: Expr) -> Self {
        Expr::Binary(Box::new(l), op, Box::new(r))
    }

    pub fn pow(base: Expr, k: u32) -> Self {
        Expr::Pow(Box::new(base), k)
    }

    /// A bare variable or literal, after peeling `e**1`.
    pub fn is_atom(&self) -> bool {
        match self {
            Expr::Var(_) | Expr::Lit(_) => true,
            Expr::Pow(b, 1) => b.is_atom(),
            _ => false,
        }
    }

    pub(crate) fn eval(&self, env: &dyn Fn(&str) -> Scalar, domain: &Domain) -> Scalar {
        match self {
            Expr::Var(v) => env(v),
            Expr::Lit(n) => domain.from_bigint(n),
            Expr::Binary(l, op, r) => {
                let (a, b) = (l.eval(env, domain), r.eval(env, domain));
                match op {
                    BinOp::Add => &a + &b,
                    BinOp::Sub => &a - &b,
                    BinOp::Mul => &a * &b,
                }
            }
            Expr::Pow(b, k) => b.eval(env, domain).pow(u64::from(*k)),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Lit(n) => write!(f, "{n}"),
            Expr::Binary(l, op, r) => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                };
                write!(f, "({l} {sym} {r})")
            }
            Expr::Pow(b, k) => write!(f, "({b})**{k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub target: String,
    pub expr: Expr,
}

/// A single-input function: straight-line assignments then a return.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ast {
    pub name: String,
    pub param: String,
    pub assignments: Vec<Assignment>,
    pub ret: Expr,
}

impl Ast {
    /// Reference interpreter.
    pub fn evaluate(&self, input: &Scalar) -> Scalar {
        let domain = input.domain();
        let mut env: Vec<(String, Scalar)> = vec![(self.param.clone(), input.clone())];
        for a in &self.assignments {
            let v = {
                let lookup = |name: &str| lookup(&env, name);
                a.expr.eval(&lookup, &domain)
            };
            env.push((a.target.clone(), v));
        }
        let lookup = |name: &str| lookup(&env, name);
        self.ret.eval(&lookup, &domain)
    }
}

fn lookup(env: &[(String, Scalar)], name: &str) -> Scalar {
    env.iter()
        .rev()
        .find(|(n, _)| n == name)
        .map(|(_, v)| v.clone())
        .expect("validated ast references only bound names")
}
