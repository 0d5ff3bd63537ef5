//! Setup, prove and verify over the transparent group in [`group`].
//!
//! The proof is four group elements `(pi_v, pi_w, pi_k, pi_h)`: encodings of
//! the private parts of `V(s)`, `W(s)`, `K(s)` and of `H(s)` at a setup point
//! `s` the prover never sees in the clear (in a real group; here it is only
//! hidden by convention). The verifier folds the public wires in itself and
//! checks
//!
//! ```text
//! e(V(s), W(s)) == e(H(s), z(s)) * e(K(s), 1)
//! ```
//!
//! so its work is three pairings plus a few group operations per public wire,
//! independent of the circuit size.

pub mod group;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraError, Domain, Scalar};
use crate::qap::{combine_with_witness, compute_h, target_poly, Qap, QapError};
use crate::r1cs::WitnessVector;
use crate::rng::seeded;

pub use group::{pair, GroupElem, TargetElem};

/// Written into every key and proof file.
pub const INSECURE_HEADER: &str =
    "insecure-demo: transparent group, exponents are stored in the clear";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SnarkError {
    #[error("group encodings need a prime field, not rationals")]
    FieldRequired,
    #[error("elements come from different fields")]
    ContextMismatch,
    #[error("key or proof belongs to a different constraint system")]
    DigestMismatch,
    #[error("witness does not satisfy the constraint system")]
    UnsatisfiedWitness,
    #[error("missing public input `{0}`")]
    MissingPublicInput(String),
    #[error("unexpected public input `{0}`")]
    UnexpectedPublicInput(String),
    #[error("public input `one` must equal 1")]
    BadOneWire,
    #[error("dimension mismatch: expected {expected} wires, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("H has degree {degree} but the key only holds powers up to {max}")]
    KeyTooSmall { degree: usize, max: usize },
    #[error("malformed key or proof: {0}")]
    Malformed(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Qap(#[from] QapError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SnarkParams {
    /// Nominal security level in bits. Recorded in the keys; the transparent
    /// group provides none of it.
    pub lambda: u32,
    pub seed: u64,
}

impl Default for SnarkParams {
    fn default() -> Self {
        SnarkParams { lambda: 128, seed: 0 }
    }
}

/// Public inputs keyed by wire name, including `one`.
pub type PublicInputs = BTreeMap<String, Scalar>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProvingKey {
    pub domain: Domain,
    pub digest: String,
    pub lambda: u32,
    pub num_gates: usize,
    /// `E(s^i)` for `i = 0..powers.len()`.
    pub powers: Vec<GroupElem>,
    pub private_wires: Vec<usize>,
    /// `E(v_j(s))` for each private wire, aligned with `private_wires`.
    pub v: Vec<GroupElem>,
    pub w: Vec<GroupElem>,
    pub k: Vec<GroupElem>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicWireKey {
    pub index: usize,
    pub name: String,
    pub v: GroupElem,
    pub w: GroupElem,
    pub k: GroupElem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyingKey {
    pub domain: Domain,
    pub digest: String,
    pub lambda: u32,
    pub one: GroupElem,
    pub z: GroupElem,
    pub public: Vec<PublicWireKey>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proof {
    pub digest: String,
    pub pi_v: GroupElem,
    pub pi_w: GroupElem,
    pub pi_k: GroupElem,
    pub pi_h: GroupElem,
}

/// Group operations performed by one verification.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpTally {
    pub combine: usize,
    pub scale: usize,
    pub pair: usize,
}

impl OpTally {
    pub fn total(&self) -> usize {
        self.combine + self.scale + self.pair
    }
}

/// Number of powers `E(s^0..)` the proving key carries for `n` gates: enough
/// for `z` itself and for any `H` with `deg(V W - K) <= 2(n-1)`.
pub fn powers_needed(n: usize) -> usize {
    let deg_z = n;
    let deg_t = 2 * n.saturating_sub(1);
    deg_z + deg_t.saturating_sub(deg_z) + 1
}

/// Samples `s` from the seeded stream and runs [`setup_at`].
///
/// `s` is redrawn while it is a gate node (where `z(s) = 0`).
pub fn setup(qap: &Qap, params: &SnarkParams) -> Result<(ProvingKey, VerifyingKey), SnarkError> {
    let domain = qap.domain();
    if !domain.is_field() {
        return Err(SnarkError::FieldRequired);
    }
    let mut rng = seeded(params.seed, "snark/setup-point");
    loop {
        let s = domain.random(&mut rng)?;
        if !qap.z().eval(&s)?.is_zero() {
            return setup_at(qap, &s, params.lambda);
        }
    }
}

/// Deterministic setup at an explicit point. The caller is the trusted
/// party and must forget `s`.
pub fn setup_at(qap: &Qap, s: &Scalar, lambda: u32) -> Result<(ProvingKey, VerifyingKey), SnarkError> {
    let domain = qap.domain().clone();
    if !domain.is_field() {
        return Err(SnarkError::FieldRequired);
    }
    let at = qap.evaluate_at(s)?;
    let mut powers = Vec::with_capacity(powers_needed(qap.num_gates()));
    let mut p = domain.one();
    for _ in 0..powers_needed(qap.num_gates()) {
        powers.push(GroupElem::encode(&p)?);
        p = &p * s;
    }
    let is_public = |j: usize| qap.public_wires().contains(&j);
    let private_wires: Vec<usize> = (0..qap.num_wires()).filter(|j| !is_public(*j)).collect();
    let enc = |vals: &[Scalar], idx: &[usize]| -> Result<Vec<GroupElem>, SnarkError> {
        idx.iter().map(|j| GroupElem::encode(&vals[*j])).collect()
    };
    let pk = ProvingKey {
        domain: domain.clone(),
        digest: qap.digest().to_string(),
        lambda,
        num_gates: qap.num_gates(),
        powers,
        v: enc(&at.v, &private_wires)?,
        w: enc(&at.w, &private_wires)?,
        k: enc(&at.k, &private_wires)?,
        private_wires,
    };
    let public = qap
        .public_wires()
        .iter()
        .map(|&j| {
            Ok(PublicWireKey {
                index: j,
                name: qap.wire_names()[j].clone(),
                v: GroupElem::encode(&at.v[j])?,
                w: GroupElem::encode(&at.w[j])?,
                k: GroupElem::encode(&at.k[j])?,
            })
        })
        .collect::<Result<_, SnarkError>>()?;
    let vk = VerifyingKey {
        domain: domain.clone(),
        digest: qap.digest().to_string(),
        lambda,
        one: GroupElem::generator(&domain)?,
        z: GroupElem::encode(&at.z)?,
        public,
    };
    Ok((pk, vk))
}

fn linear_combo(
    domain: &Domain,
    terms: impl Iterator<Item = (Scalar, GroupElem)>,
    tally: &mut OpTally,
) -> Result<GroupElem, SnarkError> {
    let mut acc = GroupElem::identity(domain)?;
    for (c, g) in terms {
        acc = acc.combine(&g.scale(&c)?)?;
        tally.scale += 1;
        tally.combine += 1;
    }
    Ok(acc)
}

/// Builds a proof that `t` satisfies the system behind `qap`.
pub fn prove(pk: &ProvingKey, qap: &Qap, t: &WitnessVector) -> Result<Proof, SnarkError> {
    if qap.digest() != pk.digest {
        return Err(SnarkError::DigestMismatch);
    }
    if t.len() != qap.num_wires() {
        return Err(SnarkError::DimensionMismatch {
            expected: qap.num_wires(),
            got: t.len(),
        });
    }
    let (v, w, k) = combine_with_witness(qap, t)?;
    let h = match compute_h(&target_poly(&v, &w, &k)?, qap.z()) {
        Ok(h) => h,
        Err(QapError::NotDivisible { .. }) => return Err(SnarkError::UnsatisfiedWitness),
        Err(e) => return Err(e.into()),
    };
    if h.coeffs().len() > pk.powers.len() {
        return Err(SnarkError::KeyTooSmall {
            degree: h.coeffs().len() - 1,
            max: pk.powers.len() - 1,
        });
    }
    let mut scratch = OpTally::default();
    let private = |elems: &[GroupElem]| {
        let terms = pk
            .private_wires
            .iter()
            .zip(elems)
            .map(|(j, g)| (t.t[*j].clone(), g.clone()));
        linear_combo(&pk.domain, terms, &mut OpTally::default())
    };
    let pi_h = linear_combo(
        &pk.domain,
        h.coeffs().iter().cloned().zip(pk.powers.iter().cloned()),
        &mut scratch,
    )?;
    Ok(Proof {
        digest: pk.digest.clone(),
        pi_v: private(&pk.v)?,
        pi_w: private(&pk.w)?,
        pi_k: private(&pk.k)?,
        pi_h,
    })
}

impl VerifyingKey {
    /// Reads the public wire values out of a full witness.
    pub fn public_inputs_from(&self, t: &WitnessVector) -> PublicInputs {
        self.public
            .iter()
            .map(|p| (p.name.clone(), t.t[p.index].clone()))
            .collect()
    }

    pub fn public_names(&self) -> Vec<&str> {
        self.public.iter().map(|p| p.name.as_str()).collect()
    }
}

/// Checks `proof` against the public inputs.
///
/// Malformed calls (wrong key, missing or extra inputs, `one != 1`) are
/// errors; a well-formed proof that fails the pairing check is `Ok(false)`.
pub fn verify(vk: &VerifyingKey, inputs: &PublicInputs, proof: &Proof) -> Result<bool, SnarkError> {
    verify_counted(vk, inputs, proof, &mut OpTally::default())
}

pub fn verify_counted(
    vk: &VerifyingKey,
    inputs: &PublicInputs,
    proof: &Proof,
    tally: &mut OpTally,
) -> Result<bool, SnarkError> {
    if proof.digest != vk.digest {
        return Err(SnarkError::DigestMismatch);
    }
    for name in inputs.keys() {
        if !vk.public.iter().any(|p| &p.name == name) {
            return Err(SnarkError::UnexpectedPublicInput(name.clone()));
        }
    }
    let mut values = Vec::with_capacity(vk.public.len());
    for p in &vk.public {
        let x = inputs
            .get(&p.name)
            .ok_or_else(|| SnarkError::MissingPublicInput(p.name.clone()))?;
        if !x.in_domain(&vk.domain) {
            return Err(SnarkError::ContextMismatch);
        }
        if p.index == 0 && !x.is_one() {
            return Err(SnarkError::BadOneWire);
        }
        values.push(x.clone());
    }
    let fold = |own: &GroupElem, pick: fn(&PublicWireKey) -> &GroupElem, tally: &mut OpTally| {
        let terms = values.iter().cloned().zip(vk.public.iter().map(|p| pick(p).clone()));
        let public = linear_combo(&vk.domain, terms, tally)?;
        tally.combine += 1;
        own.combine(&public)
    };
    let v = fold(&proof.pi_v, |p| &p.v, tally)?;
    let w = fold(&proof.pi_w, |p| &p.w, tally)?;
    let k = fold(&proof.pi_k, |p| &p.k, tally)?;
    let lhs = pair(&v, &w)?;
    let rhs = pair(&proof.pi_h, &vk.z)?.combine(&pair(&k, &vk.one)?)?;
    tally.pair += 3;
    tally.combine += 1;
    Ok(lhs == rhs)
}

#[derive(Serialize, Deserialize)]
struct PkFile {
    warning: String,
    field: String,
    digest: String,
    lambda: u32,
    num_gates: usize,
    powers: Vec<String>,
    private_wires: Vec<usize>,
    v: Vec<String>,
    w: Vec<String>,
    k: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct VkWireFile {
    index: usize,
    name: String,
    v: String,
    w: String,
    k: String,
}

#[derive(Serialize, Deserialize)]
struct VkFile {
    warning: String,
    field: String,
    digest: String,
    lambda: u32,
    one: String,
    z: String,
    public: Vec<VkWireFile>,
}

#[derive(Serialize, Deserialize)]
struct ProofFile {
    warning: String,
    field: String,
    digest: String,
    pi_v: String,
    pi_w: String,
    pi_k: String,
    pi_h: String,
}

fn strings(elems: &[GroupElem]) -> Vec<String> {
    elems.iter().map(GroupElem::to_repr_string).collect()
}

fn elems(domain: &Domain, strs: &[String]) -> Result<Vec<GroupElem>, SnarkError> {
    strs.iter().map(|s| GroupElem::parse(domain, s)).collect()
}

fn from_value<T: for<'de> Deserialize<'de>>(value: &serde_json::Value) -> Result<T, SnarkError> {
    serde_json::from_value(value.clone()).map_err(|e| SnarkError::Malformed(e.to_string()))
}

fn field_domain(tag: &str) -> Result<Domain, SnarkError> {
    let d = Domain::from_tag(tag)?;
    if d.is_field() {
        Ok(d)
    } else {
        Err(SnarkError::FieldRequired)
    }
}

impl ProvingKey {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(PkFile {
            warning: INSECURE_HEADER.into(),
            field: self.domain.tag(),
            digest: self.digest.clone(),
            lambda: self.lambda,
            num_gates: self.num_gates,
            powers: strings(&self.powers),
            private_wires: self.private_wires.clone(),
            v: strings(&self.v),
            w: strings(&self.w),
            k: strings(&self.k),
        })
        .expect("plain data")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, SnarkError> {
        let f: PkFile = from_value(value)?;
        let domain = field_domain(&f.field)?;
        let n = f.private_wires.len();
        if f.v.len() != n || f.w.len() != n || f.k.len() != n {
            return Err(SnarkError::Malformed("per-wire arrays differ in length".into()));
        }
        if f.powers.is_empty() {
            return Err(SnarkError::Malformed("no powers".into()));
        }
        Ok(ProvingKey {
            powers: elems(&domain, &f.powers)?,
            v: elems(&domain, &f.v)?,
            w: elems(&domain, &f.w)?,
            k: elems(&domain, &f.k)?,
            domain,
            digest: f.digest,
            lambda: f.lambda,
            num_gates: f.num_gates,
            private_wires: f.private_wires,
        })
    }
}

impl VerifyingKey {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(VkFile {
            warning: INSECURE_HEADER.into(),
            field: self.domain.tag(),
            digest: self.digest.clone(),
            lambda: self.lambda,
            one: self.one.to_repr_string(),
            z: self.z.to_repr_string(),
            public: self
                .public
                .iter()
                .map(|p| VkWireFile {
                    index: p.index,
                    name: p.name.clone(),
                    v: p.v.to_repr_string(),
                    w: p.w.to_repr_string(),
                    k: p.k.to_repr_string(),
                })
                .collect(),
        })
        .expect("plain data")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, SnarkError> {
        let f: VkFile = from_value(value)?;
        let domain = field_domain(&f.field)?;
        let public = f
            .public
            .iter()
            .map(|p| {
                Ok(PublicWireKey {
                    index: p.index,
                    name: p.name.clone(),
                    v: GroupElem::parse(&domain, &p.v)?,
                    w: GroupElem::parse(&domain, &p.w)?,
                    k: GroupElem::parse(&domain, &p.k)?,
                })
            })
            .collect::<Result<_, SnarkError>>()?;
        Ok(VerifyingKey {
            one: GroupElem::parse(&domain, &f.one)?,
            z: GroupElem::parse(&domain, &f.z)?,
            domain,
            digest: f.digest,
            lambda: f.lambda,
            public,
        })
    }
}

impl Proof {
    pub fn elements(&self) -> [&GroupElem; 4] {
        [&self.pi_v, &self.pi_w, &self.pi_k, &self.pi_h]
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ProofFile {
            warning: INSECURE_HEADER.into(),
            field: self.pi_v.domain().tag(),
            digest: self.digest.clone(),
            pi_v: self.pi_v.to_repr_string(),
            pi_w: self.pi_w.to_repr_string(),
            pi_k: self.pi_k.to_repr_string(),
            pi_h: self.pi_h.to_repr_string(),
        })
        .expect("plain data")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, SnarkError> {
        let f: ProofFile = from_value(value)?;
        let d = field_domain(&f.field)?;
        Ok(Proof {
            digest: f.digest,
            pi_v: GroupElem::parse(&d, &f.pi_v)?,
            pi_w: GroupElem::parse(&d, &f.pi_w)?,
            pi_k: GroupElem::parse(&d, &f.pi_k)?,
            pi_h: GroupElem::parse(&d, &f.pi_h)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::compile_source;
    use crate::qap::r1cs_to_qap;
    use crate::r1cs::{compile_to_r1cs, generate_witness};
    use crate::CUBIC_SOURCE;

    fn cubic() -> (Qap, WitnessVector) {
        let d = Domain::bn254();
        let fp = compile_source(CUBIC_SOURCE, &d).unwrap();
        let q = r1cs_to_qap(&compile_to_r1cs(&fp)).unwrap();
        let t = generate_witness(&fp, &d.from_i64(3)).unwrap();
        (q, t)
    }

    #[test]
    fn cubic_key_has_seven_powers() {
        assert_eq!(powers_needed(4), 7);
        assert_eq!(powers_needed(1), 2);
        let (q, _) = cubic();
        let (pk, vk) = setup(&q, &SnarkParams::default()).unwrap();
        assert_eq!(pk.powers.len(), 7);
        assert_eq!(pk.private_wires, vec![1, 3, 4, 5]);
        assert_eq!(vk.public_names(), vec!["one", "out"]);
    }

    #[test]
    fn honest_proof_verifies() {
        let (q, t) = cubic();
        let (pk, vk) = setup(&q, &SnarkParams::default()).unwrap();
        let proof = prove(&pk, &q, &t).unwrap();
        let inputs = vk.public_inputs_from(&t);
        assert_eq!(inputs["out"], q.domain().from_i64(35));
        assert!(verify(&vk, &inputs, &proof).unwrap());
    }

    #[test]
    fn wrong_output_is_rejected() {
        let (q, t) = cubic();
        let (pk, vk) = setup(&q, &SnarkParams::default()).unwrap();
        let proof = prove(&pk, &q, &t).unwrap();
        let mut inputs = vk.public_inputs_from(&t);
        inputs.insert("out".into(), q.domain().from_i64(36));
        assert!(!verify(&vk, &inputs, &proof).unwrap());
    }

    #[test]
    fn malformed_inputs_are_errors() {
        let (q, t) = cubic();
        let (pk, vk) = setup(&q, &SnarkParams::default()).unwrap();
        let proof = prove(&pk, &q, &t).unwrap();
        let good = vk.public_inputs_from(&t);

        let mut missing = good.clone();
        missing.remove("out");
        assert_eq!(
            verify(&vk, &missing, &proof).unwrap_err(),
            SnarkError::MissingPublicInput("out".into())
        );
        let mut extra = good.clone();
        extra.insert("x".into(), q.domain().from_i64(3));
        assert_eq!(
            verify(&vk, &extra, &proof).unwrap_err(),
            SnarkError::UnexpectedPublicInput("x".into())
        );
        let mut bad_one = good.clone();
        bad_one.insert("one".into(), q.domain().from_i64(2));
        assert_eq!(verify(&vk, &bad_one, &proof).unwrap_err(), SnarkError::BadOneWire);
        let mut other = proof.clone();
        other.digest = "00".into();
        assert_eq!(verify(&vk, &good, &other).unwrap_err(), SnarkError::DigestMismatch);
    }

    #[test]
    fn unsatisfying_witness_cannot_be_proved() {
        let (q, mut t) = cubic();
        let (pk, _) = setup(&q, &SnarkParams::default()).unwrap();
        t.t[4] = q.domain().from_i64(1);
        assert_eq!(prove(&pk, &q, &t).unwrap_err(), SnarkError::UnsatisfiedWitness);
    }

    #[test]
    fn setup_is_deterministic_per_seed() {
        let (q, _) = cubic();
        let a = setup(&q, &SnarkParams { lambda: 128, seed: 5 }).unwrap();
        let b = setup(&q, &SnarkParams { lambda: 128, seed: 5 }).unwrap();
        let c = setup(&q, &SnarkParams { lambda: 128, seed: 6 }).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.1.z, c.1.z);
    }

    #[test]
    fn verifier_cost_tracks_public_wires_only() {
        let (q, t) = cubic();
        let (pk, vk) = setup(&q, &SnarkParams::default()).unwrap();
        let proof = prove(&pk, &q, &t).unwrap();
        let mut tally = OpTally::default();
        assert!(verify_counted(&vk, &vk.public_inputs_from(&t), &proof, &mut tally).unwrap());
        let l = vk.public.len();
        assert_eq!(tally.pair, 3);
        assert_eq!(tally.scale, 3 * l);
        assert_eq!(tally.combine, 3 * l + 3 + 1);
    }

    #[test]
    fn json_round_trip() {
        let (q, t) = cubic();
        let (pk, vk) = setup(&q, &SnarkParams::default()).unwrap();
        let proof = prove(&pk, &q, &t).unwrap();
        let pkj = pk.to_json();
        assert_eq!(pkj["warning"], INSECURE_HEADER);
        assert_eq!(ProvingKey::from_json(&pkj).unwrap(), pk);
        assert_eq!(VerifyingKey::from_json(&vk.to_json()).unwrap(), vk);
        assert_eq!(Proof::from_json(&proof.to_json()).unwrap(), proof);
        assert!(matches!(
            Proof::from_json(&serde_json::json!({"field": "7"})),
            Err(SnarkError::Malformed(_))
        ));
    }

    #[test]
    fn rational_qap_cannot_be_set_up() {
        let d = Domain::Rational;
        let fp = compile_source(CUBIC_SOURCE, &d).unwrap();
        let q = r1cs_to_qap(&compile_to_r1cs(&fp)).unwrap();
        assert_eq!(setup(&q, &SnarkParams::default()).unwrap_err(), SnarkError::FieldRequired);
    }
}
