use std::collections::HashSet;

use desksnark::algebra::Scalar;
use desksnark::qap::{r1cs_to_qap, Qap};
use desksnark::r1cs::{is_satisfied, ConstraintSystem};
use desksnark::snark::{self, GroupElem, Proof, ProvingKey, PublicInputs, SnarkError, SnarkParams, VerifyingKey};
use rand::RngCore;

use crate::circuit::{
    pour_circuit, synthesize, NewCoinWitness, OldCoinWitness, PourStatement, PourWitness, PUBLIC_NAMES,
};
use crate::keys::{check_sig, encrypt_coin, sign, try_decrypt, Address, Ciphertext, CoinPlain, PublicAddress, Signature};
use crate::merkle::MerkleTree;
use crate::{DapError, DapParams};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coin {
    pub a_pk: Scalar,
    pub v: Scalar,
    pub rho: Scalar,
    pub r: Scalar,
    /// Inner commitment `hash([a_pk, rho, r])`.
    pub k: Scalar,
    pub cm: Scalar,
}

impl Coin {
    pub fn open(params: &DapParams, a_pk: &Scalar, plain: &CoinPlain) -> Result<Self, DapError> {
        let (cm, k) = params.comm(a_pk, &plain.v, &plain.rho, &plain.r)?;
        Ok(Coin {
            a_pk: a_pk.clone(),
            v: plain.v.clone(),
            rho: plain.rho.clone(),
            r: plain.r.clone(),
            k,
            cm,
        })
    }

    pub fn plain(&self) -> CoinPlain {
        CoinPlain {
            v: self.v.clone(),
            rho: self.rho.clone(),
            r: self.r.clone(),
        }
    }

    pub fn serial(&self, params: &DapParams, a_sk: &Scalar) -> Scalar {
        params.prf(a_sk, &self.rho)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MintTx {
    pub cm: Scalar,
    pub v: Scalar,
    pub k: Scalar,
    pub sig_pk: GroupElem,
    pub signature: Signature,
}

impl MintTx {
    pub fn message(&self) -> Vec<Scalar> {
        vec![self.cm.clone(), self.v.clone(), self.k.clone()]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PourTx {
    pub rt: Scalar,
    pub sn_old: [Scalar; 2],
    pub cm_new: [Scalar; 2],
    pub proof: Proof,
    pub ciphertexts: [Ciphertext; 2],
    /// One-time verification key for `signature`.
    pub sig_pk: GroupElem,
    pub signature: Signature,
}

impl PourTx {
    pub fn statement(&self) -> PourStatement {
        PourStatement {
            rt: self.rt.clone(),
            sn_old: self.sn_old.clone(),
            cm_new: self.cm_new.clone(),
        }
    }

    /// Everything the signature covers.
    pub fn message(&self) -> Vec<Scalar> {
        let mut m: Vec<Scalar> = self.statement().values().to_vec();
        m.extend(self.proof.elements().iter().map(|g| g.transcript_scalar()));
        for ct in &self.ciphertexts {
            m.extend(ct.words());
        }
        m.push(self.sig_pk.transcript_scalar());
        m
    }

    /// Every scalar visible in the transaction.
    pub fn visible_scalars(&self) -> Vec<Scalar> {
        let mut m = self.message();
        m.push(self.signature.r.transcript_scalar());
        m.push(self.signature.s.clone());
        m
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tx {
    Mint(MintTx),
    Pour(PourTx),
}

/// The pour circuit, its QAP, and keys. Setup is deterministic per seed.
pub struct PourSystem {
    pub cs: ConstraintSystem,
    pub qap: Qap,
}

impl PourSystem {
    pub fn new(params: &DapParams) -> Result<Self, DapError> {
        let cs = pour_circuit(params);
        let qap = r1cs_to_qap(&cs).map_err(SnarkError::from)?;
        Ok(PourSystem { cs, qap })
    }

    pub fn setup(&self, snark_params: &SnarkParams) -> Result<(ProvingKey, VerifyingKey), DapError> {
        Ok(snark::setup(&self.qap, snark_params)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LedgerState {
    pub params: DapParams,
    tree: MerkleTree,
    serials: Vec<Scalar>,
    serial_set: HashSet<Scalar>,
    roots: Vec<Scalar>,
    txs: Vec<Tx>,
}

impl LedgerState {
    pub fn new(params: DapParams) -> Self {
        let tree = MerkleTree::new(&params);
        LedgerState {
            roots: vec![tree.root().clone()],
            params,
            tree,
            serials: Vec::new(),
            serial_set: HashSet::new(),
            txs: Vec::new(),
        }
    }

    /// Rebuilds a ledger from persisted parts, checking that the root
    /// history ends at the root of `leaves`.
    pub fn from_parts(
        params: DapParams,
        leaves: &[Scalar],
        serials: Vec<Scalar>,
        roots: Vec<Scalar>,
        txs: Vec<Tx>,
    ) -> Result<Self, DapError> {
        let tree = MerkleTree::from_leaves(&params, leaves)?;
        if roots.last() != Some(tree.root()) {
            return Err(DapError::Malformed("root history does not end at the tree root".into()));
        }
        let serial_set: HashSet<Scalar> = serials.iter().cloned().collect();
        if serial_set.len() != serials.len() {
            return Err(DapError::Malformed("duplicate serial number".into()));
        }
        Ok(LedgerState {
            params,
            tree,
            serials,
            serial_set,
            roots,
            txs,
        })
    }

    pub fn tree(&self) -> &MerkleTree {
        &self.tree
    }

    pub fn root(&self) -> &Scalar {
        self.tree.root()
    }

    pub fn roots(&self) -> &[Scalar] {
        &self.roots
    }

    pub fn serials(&self) -> &[Scalar] {
        &self.serials
    }

    pub fn txs(&self) -> &[Tx] {
        &self.txs
    }

    pub fn is_spent(&self, sn: &Scalar) -> bool {
        self.serial_set.contains(sn)
    }

    pub fn knows_root(&self, rt: &Scalar) -> bool {
        self.roots.contains(rt)
    }

    fn append(&mut self, cm: &Scalar) -> Result<(), DapError> {
        self.tree.append(&self.params, cm.clone())?;
        self.roots.push(self.tree.root().clone());
        Ok(())
    }
}

fn random_scalar<R: RngCore + ?Sized>(ledger: &LedgerState, rng: &mut R) -> Result<Scalar, DapError> {
    Ok(ledger.params.domain().random(rng)?)
}

/// A fresh coin of value `v` for `addr` and the transaction announcing it.
/// The ledger is not modified; [`verify_tx`] appends on acceptance.
pub fn mint<R: RngCore + ?Sized>(
    ledger: &LedgerState,
    addr: &Address,
    v: &Scalar,
    rng: &mut R,
) -> Result<(Coin, MintTx), DapError> {
    let params = &ledger.params;
    params.check_value(v)?;
    if ledger.tree.leaves().len() >= ledger.tree.capacity() {
        return Err(DapError::TreeFull(ledger.tree.capacity()));
    }
    let plain = CoinPlain {
        v: v.clone(),
        rho: random_scalar(ledger, rng)?,
        r: random_scalar(ledger, rng)?,
    };
    let coin = Coin::open(params, &addr.a_pk, &plain)?;
    let message = [coin.cm.clone(), coin.v.clone(), coin.k.clone()];
    let tx = MintTx {
        cm: coin.cm.clone(),
        v: coin.v.clone(),
        k: coin.k.clone(),
        sig_pk: addr.sig_pk.clone(),
        signature: sign(params, &addr.sig_sk, &message),
    };
    Ok((coin, tx))
}

/// Statement and witness for spending `old` into `new` against the
/// current root.
pub fn pour_witness(
    ledger: &LedgerState,
    old: [(&Coin, &Address); 2],
    new: [&Coin; 2],
) -> Result<(PourStatement, PourWitness), DapError> {
    let params = &ledger.params;
    if old[0].0.cm == old[1].0.cm {
        return Err(DapError::DuplicateCoin);
    }
    let mut old_w = Vec::new();
    let mut sns = Vec::new();
    for (coin, addr) in old {
        if coin.a_pk != addr.a_pk {
            return Err(DapError::WrongOwner);
        }
        let idx = ledger.tree.position(&coin.cm).ok_or(DapError::CoinNotInTree)?;
        let sn = coin.serial(params, &addr.a_sk);
        if ledger.is_spent(&sn) {
            return Err(DapError::CoinAlreadySpent);
        }
        sns.push(sn);
        old_w.push(OldCoinWitness {
            v: coin.v.clone(),
            rho: coin.rho.clone(),
            r: coin.r.clone(),
            a_sk: addr.a_sk.clone(),
            path: ledger.tree.path(idx)?,
        });
    }
    let new_w = new.map(|c| NewCoinWitness {
        v: c.v.clone(),
        rho: c.rho.clone(),
        r: c.r.clone(),
        a_pk: c.a_pk.clone(),
    });
    let stmt = PourStatement {
        rt: ledger.root().clone(),
        sn_old: [sns[0].clone(), sns[1].clone()],
        cm_new: [new[0].cm.clone(), new[1].cm.clone()],
    };
    let [o1, o2]: [OldCoinWitness; 2] = old_w.try_into().expect("two inputs");
    Ok((stmt, PourWitness { old: [o1, o2], new: new_w }))
}

/// Spends two coins into two new ones paid to `outputs`.
///
/// Proves against the current root. Returns the transaction and the new
/// coins (which the recipients recover with [`receive`]).
pub fn pour<R: RngCore + ?Sized>(
    ledger: &LedgerState,
    old: [(&Coin, &Address); 2],
    outputs: [(&PublicAddress, &Scalar); 2],
    system: &PourSystem,
    pk: &ProvingKey,
    rng: &mut R,
) -> Result<(PourTx, [Coin; 2]), DapError> {
    let params = &ledger.params;
    let mut new_coins = Vec::new();
    let mut cts = Vec::new();
    for (to, v) in outputs {
        let plain = CoinPlain {
            v: v.clone(),
            rho: random_scalar(ledger, rng)?,
            r: random_scalar(ledger, rng)?,
        };
        let coin = Coin::open(params, &to.a_pk, &plain)?;
        cts.push(encrypt_coin(params, &to.enc_pk, &plain, rng)?);
        new_coins.push(coin);
    }
    let (stmt, wit) = pour_witness(ledger, old, [&new_coins[0], &new_coins[1]])?;
    let (cs, t) = synthesize(params, &stmt, &wit);
    if !is_satisfied(&cs, &t).map_err(|e| DapError::Malformed(e.to_string()))? {
        return Err(SnarkError::UnsatisfiedWitness.into());
    }
    let proof = snark::prove(pk, &system.qap, &t)?;

    let one_time_sk = random_scalar(ledger, rng)?;
    let sig_pk = GroupElem::generator(params.domain())?.scale(&one_time_sk)?;
    let mut tx = PourTx {
        rt: stmt.rt,
        sn_old: stmt.sn_old,
        cm_new: stmt.cm_new,
        proof,
        ciphertexts: [cts[0].clone(), cts[1].clone()],
        sig_pk,
        signature: sign(params, &one_time_sk, &[]),
    };
    tx.signature = sign(params, &one_time_sk, &tx.message());
    let [a, b]: [Coin; 2] = new_coins.try_into().expect("two outputs");
    Ok((tx, [a, b]))
}

pub fn pour_public_inputs(tx: &PourTx, domain: &desksnark::algebra::Domain) -> PublicInputs {
    let mut m = PublicInputs::new();
    m.insert(PUBLIC_NAMES[0].into(), domain.one());
    for (name, v) in PUBLIC_NAMES[1..].iter().zip(tx.statement().values()) {
        m.insert(name.to_string(), v);
    }
    m
}

/// Checks `tx` against the ledger and applies it when valid. Every failure
/// is `false`; the ledger is unchanged in that case.
pub fn verify_tx(ledger: &mut LedgerState, tx: &Tx, vk: &VerifyingKey) -> bool {
    let ok = match tx {
        Tx::Mint(m) => check_mint(ledger, m),
        Tx::Pour(p) => check_pour(ledger, p, vk),
    };
    if !ok {
        return false;
    }
    let before = ledger.clone();
    let applied = match tx {
        Tx::Mint(m) => ledger.append(&m.cm),
        Tx::Pour(p) => p.cm_new.iter().try_for_each(|cm| ledger.append(cm)).map(|_| {
            for sn in &p.sn_old {
                ledger.serials.push(sn.clone());
                ledger.serial_set.insert(sn.clone());
            }
        }),
    };
    if applied.is_err() {
        *ledger = before;
        return false;
    }
    ledger.txs.push(tx.clone());
    true
}

fn room_for(ledger: &LedgerState, n: usize) -> bool {
    ledger.tree.leaves().len() + n <= ledger.tree.capacity()
}

fn check_mint(ledger: &LedgerState, m: &MintTx) -> bool {
    let p = &ledger.params;
    let d = p.domain();
    [&m.cm, &m.v, &m.k].iter().all(|s| s.in_domain(d))
        && p.check_value(&m.v).is_ok()
        && p.hash(&[m.k.clone(), m.v.clone()]).ok().as_ref() == Some(&m.cm)
        && check_sig(p, &m.sig_pk, &m.message(), &m.signature)
        && room_for(ledger, 1)
}

fn check_pour(ledger: &LedgerState, tx: &PourTx, vk: &VerifyingKey) -> bool {
    let p = &ledger.params;
    tx.statement().values().iter().all(|s| s.in_domain(p.domain()))
        && tx.sn_old[0] != tx.sn_old[1]
        && !tx.sn_old.iter().any(|sn| ledger.is_spent(sn))
        && ledger.knows_root(&tx.rt)
        && room_for(ledger, 2)
        && check_sig(p, &tx.sig_pk, &tx.message(), &tx.signature)
        && matches!(
            snark::verify(vk, &pour_public_inputs(tx, p.domain()), &tx.proof),
            Ok(true)
        )
}

/// Coins paid to `addr` by pours on the ledger that are still unspent.
pub fn receive(ledger: &LedgerState, addr: &Address) -> Vec<Coin> {
    let p = &ledger.params;
    let mut found: Vec<Coin> = Vec::new();
    for tx in &ledger.txs {
        let Tx::Pour(pt) = tx else { continue };
        for ct in &pt.ciphertexts {
            let Some(plain) = try_decrypt(p, &addr.enc_sk, ct) else { continue };
            let Ok(coin) = Coin::open(p, &addr.a_pk, &plain) else { continue };
            if ledger.tree.position(&coin.cm).is_none()
                || ledger.is_spent(&coin.serial(p, &addr.a_sk))
                || found.iter().any(|c| c.cm == coin.cm)
            {
                continue;
            }
            found.push(coin);
        }
    }
    found
}
