//! Hand-built R1CS for a 2-in/2-out pour.
//!
//! Public wires, in order: `one, rt, sn_old_1, sn_old_2, cm_new_1, cm_new_2`.
//! Per old coin the circuit recomputes `a_pk = prf(a_sk, 0)`, the nested
//! commitment, a Merkle walk ending at `rt` and `sn = prf(a_sk, rho)`; per
//! new coin it recomputes the commitment; one row enforces
//! `v_old_1 + v_old_2 = v_new_1 + v_new_2`.
//!
//! The last row of each terminal hash writes straight into its public wire,
//! so no separate equality rows are needed. Values are not range checked.

use desksnark::algebra::{Domain, Scalar};
use desksnark::lincomb::LinearCombination as Lc;
use desksnark::r1cs::{Constraint, ConstraintSystem, WitnessVector};

use crate::merkle::AuthPath;
use crate::mimc::Mimc;
use crate::DapParams;

pub const PUBLIC_NAMES: [&str; 6] = ["one", "rt", "sn_old_1", "sn_old_2", "cm_new_1", "cm_new_2"];

/// Gate builder that tracks the assignment alongside the rows. Shape-only
/// callers feed dummy inputs; the rows do not depend on values.
pub struct CircuitBuilder {
    domain: Domain,
    names: Vec<String>,
    values: Vec<Scalar>,
    public: Vec<usize>,
    rows: Vec<Constraint>,
}

impl CircuitBuilder {
    pub fn new(domain: &Domain) -> Self {
        CircuitBuilder {
            domain: domain.clone(),
            names: vec!["one".into()],
            values: vec![domain.one()],
            public: vec![0],
            rows: Vec::new(),
        }
    }

    pub fn one(&self) -> Lc {
        Lc::wire(0, &self.domain)
    }

    pub fn var(&self, index: usize) -> Lc {
        Lc::wire(index, &self.domain)
    }

    pub fn constant(&self, c: Scalar) -> Lc {
        Lc::constant(c)
    }

    fn alloc(&mut self, name: String, value: Scalar) -> usize {
        self.names.push(name);
        self.values.push(value);
        self.values.len() - 1
    }

    pub fn public_input(&mut self, name: &str, value: Scalar) -> usize {
        let i = self.alloc(name.into(), value);
        self.public.push(i);
        i
    }

    pub fn private_input(&mut self, name: &str, value: Scalar) -> usize {
        self.alloc(name.into(), value)
    }

    pub fn eval(&self, lc: &Lc) -> Scalar {
        lc.eval(&self.values, &self.domain)
    }

    /// New wire `out = a * b`.
    pub fn mul(&mut self, a: &Lc, b: &Lc) -> Lc {
        let value = &self.eval(a) * &self.eval(b);
        let name = format!("t{}", self.values.len());
        let out = self.alloc(name, value);
        self.enforce(a.clone(), b.clone(), self.var(out));
        self.var(out)
    }

    /// `a * b = target` for an already allocated wire; the assignment of
    /// `target` is left alone.
    pub fn mul_into(&mut self, a: &Lc, b: &Lc, target: usize) {
        self.enforce(a.clone(), b.clone(), self.var(target));
    }

    pub fn enforce(&mut self, v: Lc, w: Lc, k: Lc) {
        self.rows.push(Constraint { v, w, k });
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn finish(self) -> (ConstraintSystem, WitnessVector) {
        let cs = ConstraintSystem {
            domain: self.domain,
            num_wires: self.values.len(),
            wire_names: self.names,
            public_wires: self.public,
            rows: self.rows,
        };
        let t = WitnessVector::new(self.values).expect("wire 0 holds one");
        (cs, t)
    }
}

/// `t^e` by left-to-right square-and-multiply; the final row goes to
/// `target` when given.
fn pow_gadget(b: &mut CircuitBuilder, t: &Lc, e: u64, target: Option<usize>) -> Lc {
    let bits = 64 - e.leading_zeros();
    let mut ops = Vec::new();
    for i in (0..bits - 1).rev() {
        ops.push(false);
        if (e >> i) & 1 == 1 {
            ops.push(true);
        }
    }
    let mut acc = t.clone();
    for (n, times_base) in ops.iter().enumerate() {
        let rhs = if *times_base { t.clone() } else { acc.clone() };
        if n + 1 == ops.len() {
            if let Some(tgt) = target {
                b.mul_into(&acc, &rhs, tgt);
                return b.var(tgt);
            }
        }
        acc = b.mul(&acc, &rhs);
    }
    acc
}

pub fn perm_gadget(b: &mut CircuitBuilder, mimc: &Mimc, x: Lc, target: Option<usize>) -> Lc {
    let mut x = x;
    let last = mimc.constants().len();
    for (i, c) in mimc.constants().iter().enumerate() {
        let t = x.plus(&b.constant(c.clone()));
        x = pow_gadget(b, &t, mimc.exponent(), target.filter(|_| i + 1 == last));
    }
    x
}

pub fn hash_gadget(b: &mut CircuitBuilder, mimc: &Mimc, inputs: &[Lc], target: Option<usize>) -> Lc {
    assert!(!inputs.is_empty(), "hash of nothing");
    let mut state = Lc::new();
    for (i, m) in inputs.iter().enumerate() {
        let last = i + 1 == inputs.len();
        state = perm_gadget(b, mimc, state.plus(m), target.filter(|_| last));
    }
    state
}

/// Public part of a pour.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PourStatement {
    pub rt: Scalar,
    pub sn_old: [Scalar; 2],
    pub cm_new: [Scalar; 2],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OldCoinWitness {
    pub v: Scalar,
    pub rho: Scalar,
    pub r: Scalar,
    pub a_sk: Scalar,
    pub path: AuthPath,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewCoinWitness {
    pub v: Scalar,
    pub rho: Scalar,
    pub r: Scalar,
    pub a_pk: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PourWitness {
    pub old: [OldCoinWitness; 2],
    pub new: [NewCoinWitness; 2],
}

impl PourWitness {
    /// All-zero witness of the right shape.
    pub fn dummy(params: &DapParams) -> Self {
        let z = params.domain().zero();
        let old = OldCoinWitness {
            v: z.clone(),
            rho: z.clone(),
            r: z.clone(),
            a_sk: z.clone(),
            path: AuthPath {
                siblings: vec![z.clone(); params.depth],
                bits: vec![false; params.depth],
            },
        };
        let new = NewCoinWitness {
            v: z.clone(),
            rho: z.clone(),
            r: z.clone(),
            a_pk: z,
        };
        PourWitness {
            old: [old.clone(), old],
            new: [new.clone(), new],
        }
    }
}

impl PourStatement {
    pub fn dummy(params: &DapParams) -> Self {
        let z = params.domain().zero();
        PourStatement {
            rt: z.clone(),
            sn_old: [z.clone(), z.clone()],
            cm_new: [z.clone(), z],
        }
    }

    /// Values in [`PUBLIC_NAMES`] order, without `one`.
    pub fn values(&self) -> [Scalar; 5] {
        [
            self.rt.clone(),
            self.sn_old[0].clone(),
            self.sn_old[1].clone(),
            self.cm_new[0].clone(),
            self.cm_new[1].clone(),
        ]
    }
}

/// Builds the pour system and its assignment for `stmt`, `wit`.
pub fn synthesize(
    params: &DapParams,
    stmt: &PourStatement,
    wit: &PourWitness,
) -> (ConstraintSystem, WitnessVector) {
    let d = params.domain();
    let m = &params.mimc;
    let mut b = CircuitBuilder::new(d);
    let publics: Vec<usize> = PUBLIC_NAMES[1..]
        .iter()
        .zip(stmt.values())
        .map(|(name, v)| b.public_input(name, v))
        .collect();
    let (rt, sn, cm_new) = (publics[0], [publics[1], publics[2]], [publics[3], publics[4]]);

    let mut old_v = Vec::new();
    for (i, c) in wit.old.iter().enumerate() {
        let tag = format!("old{}", i + 1);
        let v = b.private_input(&format!("{tag}.v"), c.v.clone());
        let rho = b.private_input(&format!("{tag}.rho"), c.rho.clone());
        let r = b.private_input(&format!("{tag}.r"), c.r.clone());
        let a_sk = b.private_input(&format!("{tag}.a_sk"), c.a_sk.clone());
        let (v, rho, r, a_sk) = (b.var(v), b.var(rho), b.var(r), b.var(a_sk));

        let a_pk = hash_gadget(&mut b, m, &[a_sk.clone(), Lc::new()], None);
        let k = hash_gadget(&mut b, m, &[a_pk, rho.clone(), r], None);
        let mut cur = hash_gadget(&mut b, m, &[k, v.clone()], None);
        for (l, (sib, bit)) in c.path.siblings.iter().zip(&c.path.bits).enumerate() {
            let s = b.private_input(&format!("{tag}.sib{l}"), sib.clone());
            let bit = b.private_input(&format!("{tag}.bit{l}"), d.from_u64(*bit as u64));
            let (s, bit) = (b.var(s), b.var(bit));
            // bit * (1 - bit) = 0
            b.enforce(bit.clone(), b.one().minus(&bit), Lc::new());
            // swap = bit * (sib - cur); left = cur + swap; right = sib - swap
            let swap = b.mul(&bit, &s.minus(&cur));
            let left = cur.plus(&swap);
            let right = s.minus(&swap);
            let last = l + 1 == c.path.siblings.len();
            cur = hash_gadget(&mut b, m, &[left, right], Some(rt).filter(|_| last));
        }
        hash_gadget(&mut b, m, &[a_sk, rho], Some(sn[i]));
        old_v.push(v);
    }

    let mut new_v = Vec::new();
    for (j, c) in wit.new.iter().enumerate() {
        let tag = format!("new{}", j + 1);
        let v = b.private_input(&format!("{tag}.v"), c.v.clone());
        let rho = b.private_input(&format!("{tag}.rho"), c.rho.clone());
        let r = b.private_input(&format!("{tag}.r"), c.r.clone());
        let a_pk = b.private_input(&format!("{tag}.a_pk"), c.a_pk.clone());
        let (v, rho, r, a_pk) = (b.var(v), b.var(rho), b.var(r), b.var(a_pk));
        let k = hash_gadget(&mut b, m, &[a_pk, rho, r], None);
        hash_gadget(&mut b, m, &[k, v.clone()], Some(cm_new[j]));
        new_v.push(v);
    }

    b.enforce(old_v[0].plus(&old_v[1]), b.one(), new_v[0].plus(&new_v[1]));
    b.finish()
}

/// The pour system alone.
pub fn pour_circuit(params: &DapParams) -> ConstraintSystem {
    synthesize(params, &PourStatement::dummy(params), &PourWitness::dummy(params)).0
}

/// Permutation calls in the pour circuit: per old coin 2 (`a_pk`) + 3 (`k`)
/// + 2 (`cm`) + 2 per level + 2 (`sn`); per new coin 3 + 2.
pub fn pour_perm_calls(depth: usize) -> usize {
    2 * (2 + 3 + 2 + 2 * depth + 2) + 2 * (3 + 2)
}

/// Expected row count: hashing, two rows per Merkle level per old coin,
/// and the conservation row.
pub fn pour_row_count(params: &DapParams) -> usize {
    let m = &params.mimc;
    m.rows_per_round() * m.rounds() as usize * pour_perm_calls(params.depth) + 2 * 2 * params.depth + 1
}
