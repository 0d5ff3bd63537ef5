use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use rand::Rng;

#[derive(Clone, Debug)]
pub enum GenExpr {
    Var(String),
    Lit(u32),
    Add(Box<GenExpr>, Box<GenExpr>),
    Sub(Box<GenExpr>, Box<GenExpr>),
    Mul(Box<GenExpr>, Box<GenExpr>),
    Pow(Box<GenExpr>, u32),
}

impl GenExpr {
    fn is_atom(&self) -> bool {
        matches!(self, GenExpr::Var(_) | GenExpr::Lit(_))
    }

    /// Gates emitted when the expression appears as an operand.
    fn operand_gates(&self) -> usize {
        match self {
            GenExpr::Var(_) | GenExpr::Lit(_) => 0,
            GenExpr::Pow(b, 1) => b.operand_gates(),
            _ => self.top_gates(),
        }
    }

    /// Gates emitted when the expression is bound to a name.
    fn top_gates(&self) -> usize {
        match self {
            GenExpr::Add(a, b) | GenExpr::Sub(a, b) | GenExpr::Mul(a, b) => {
                1 + a.operand_gates() + b.operand_gates()
            }
            GenExpr::Pow(b, k) if *k >= 2 => b.operand_gates() + (*k as usize - 1),
            GenExpr::Pow(b, _) => 1 + b.operand_gates(),
            _ => 1,
        }
    }

    pub fn eval(&self, env: &dyn Fn(&str) -> BigInt, p: &BigInt) -> BigInt {
        let r = match self {
            GenExpr::Var(v) => env(v),
            GenExpr::Lit(n) => BigInt::from(*n),
            GenExpr::Add(a, b) => a.eval(env, p) + b.eval(env, p),
            GenExpr::Sub(a, b) => a.eval(env, p) - b.eval(env, p),
            GenExpr::Mul(a, b) => a.eval(env, p) * b.eval(env, p),
            GenExpr::Pow(b, k) => b.eval(env, p).modpow(&BigInt::from(*k), p),
        };
        r.mod_floor(p)
    }
}

impl fmt::Display for GenExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sub = |f: &mut fmt::Formatter<'_>, e: &GenExpr| {
            if e.is_atom() {
                write!(f, "{e}")
            } else {
                write!(f, "({e})")
            }
        };
        match self {
            GenExpr::Var(v) => write!(f, "{v}"),
            GenExpr::Lit(n) => write!(f, "{n}"),
            GenExpr::Add(a, b) | GenExpr::Sub(a, b) | GenExpr::Mul(a, b) => {
                let op = match self {
                    GenExpr::Add(..) => "+",
                    GenExpr::Sub(..) => "-",
                    _ => "*",
                };
                sub(f, a)?;
                write!(f, " {op} ")?;
                sub(f, b)
            }
            GenExpr::Pow(b, k) => {
                sub(f, b)?;
                write!(f, "**{k}")
            }
        }
    }
}

/// A random program `def f(x): ... return ...`.
#[derive(Clone, Debug)]
pub struct GenProgram {
    pub stmts: Vec<(String, GenExpr)>,
    pub ret: GenExpr,
}

impl GenProgram {
    pub fn source(&self) -> String {
        let mut s = String::from("def f(x):\n");
        for (name, e) in &self.stmts {
            s.push_str(&format!("    {name} = {e}\n"));
        }
        s.push_str(&format!("    return {}\n", self.ret));
        s
    }

    /// Gate count under the flattening rules: one gate per binary operator,
    /// `k - 1` for `e**k`, and one copy gate when a bare atom is bound.
    pub fn gate_count(&self) -> usize {
        self.stmts.iter().map(|(_, e)| e.top_gates()).sum::<usize>() + self.ret.top_gates()
    }

    /// Reference output for input `x`, modulo `p`.
    pub fn eval(&self, x: &BigInt, p: &BigInt) -> BigInt {
        let mut env: Vec<(String, BigInt)> = vec![("x".into(), x.mod_floor(p))];
        for (name, e) in &self.stmts {
            let snapshot = env.clone();
            let look = move |v: &str| lookup(&snapshot, v);
            let val = e.eval(&look, p);
            env.push((name.clone(), val));
        }
        let look = move |v: &str| lookup(&env, v);
        self.ret.eval(&look, p)
    }
}

fn lookup(env: &[(String, BigInt)], v: &str) -> BigInt {
    env.iter()
        .find(|(n, _)| n == v)
        .map(|(_, val)| val.clone())
        .unwrap_or_else(|| panic!("generator bound no `{v}`"))
}

fn random_expr<R: Rng>(rng: &mut R, scope: &[String], depth: u32) -> GenExpr {
    if depth == 0 || rng.random_bool(0.3) {
        return if rng.random_bool(0.7) {
            GenExpr::Var(scope[rng.random_range(0..scope.len())].clone())
        } else {
            GenExpr::Lit(rng.random_range(0..10))
        };
    }
    let a = Box::new(random_expr(rng, scope, depth - 1));
    match rng.random_range(0..10) {
        0..=2 => GenExpr::Add(a, Box::new(random_expr(rng, scope, depth - 1))),
        3..=4 => GenExpr::Sub(a, Box::new(random_expr(rng, scope, depth - 1))),
        5..=7 => GenExpr::Mul(a, Box::new(random_expr(rng, scope, depth - 1))),
        _ => GenExpr::Pow(a, rng.random_range(2..=3)),
    }
}

/// Draws programs until one has between 1 and `max_gates` gates.
pub fn random_program<R: Rng>(rng: &mut R, max_gates: usize) -> GenProgram {
    loop {
        let mut scope = vec!["x".to_string()];
        let mut stmts = Vec::new();
        for i in 0..rng.random_range(0..4) {
            let e = random_expr(rng, &scope, 3);
            let name = format!("v{i}");
            scope.push(name.clone());
            stmts.push((name, e));
        }
        let ret = random_expr(rng, &scope, 3);
        let prog = GenProgram { stmts, ret };
        let n = prog.gate_count();
        if (1..=max_gates).contains(&n) {
            return prog;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn cubic_counts_four_gates() {
        let x = || Box::new(GenExpr::Var("x".into()));
        let prog = GenProgram {
            stmts: vec![("y".into(), GenExpr::Pow(x(), 3))],
            ret: GenExpr::Add(
                Box::new(GenExpr::Add(x(), Box::new(GenExpr::Var("y".into())))),
                Box::new(GenExpr::Lit(5)),
            ),
        };
        assert_eq!(prog.gate_count(), 4);
        assert_eq!(prog.eval(&3.into(), &101.into()), 35.into());
        assert_eq!(prog.source(), "def f(x):\n    y = x**3\n    return (x + y) + 5\n");
    }

    #[test]
    fn generated_programs_respect_bound() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        for _ in 0..50 {
            let p = random_program(&mut rng, 20);
            assert!((1..=20).contains(&p.gate_count()));
        }
    }
}
