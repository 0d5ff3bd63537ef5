//! JSON forms of addresses, coins, transactions and the ledger. All scalars
//! and group elements are decimal strings.

use desksnark::algebra::{Domain, Scalar};
use desksnark::snark::{GroupElem, Proof};
use serde_json::{json, Value};

use crate::keys::{Address, Ciphertext, PublicAddress, Signature};
use crate::ledger::{Coin, LedgerState, MintTx, PourTx, Tx};
use crate::{DapError, DapParams};

/// Written into every file that holds secret keys.
pub const SECRET_HEADER: &str = "SECRET-DEMO-ONLY: these keys protect nothing; do not reuse";

fn bad(msg: impl Into<String>) -> DapError {
    DapError::Malformed(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, DapError> {
    v.get(key).ok_or_else(|| bad(format!("missing `{key}`")))
}

fn scalar(d: &Domain, v: &Value, key: &str) -> Result<Scalar, DapError> {
    let s = field(v, key)?
        .as_str()
        .ok_or_else(|| bad(format!("`{key}` is not a string")))?;
    Ok(d.parse(s)?)
}

fn group(d: &Domain, v: &Value, key: &str) -> Result<GroupElem, DapError> {
    let s = field(v, key)?
        .as_str()
        .ok_or_else(|| bad(format!("`{key}` is not a string")))?;
    Ok(GroupElem::parse(d, s)?)
}

fn scalars(d: &Domain, v: &Value, key: &str) -> Result<Vec<Scalar>, DapError> {
    field(v, key)?
        .as_array()
        .ok_or_else(|| bad(format!("`{key}` is not an array")))?
        .iter()
        .map(|x| {
            x.as_str()
                .ok_or_else(|| bad(format!("`{key}` holds a non-string")))
                .and_then(|s| Ok(d.parse(s)?))
        })
        .collect()
}

fn pair<T: Clone>(items: Vec<T>, key: &str) -> Result<[T; 2], DapError> {
    items
        .try_into()
        .map_err(|_| bad(format!("`{key}` must have exactly two entries")))
}

fn s(x: &Scalar) -> String {
    x.to_repr_string()
}

fn g(x: &GroupElem) -> String {
    x.to_repr_string()
}

pub fn address_to_json(a: &Address) -> Value {
    json!({
        "warning": SECRET_HEADER,
        "a_sk": s(&a.a_sk),
        "a_pk": s(&a.a_pk),
        "enc_sk": s(&a.enc_sk),
        "enc_pk": g(&a.enc_pk),
        "sig_sk": s(&a.sig_sk),
        "sig_pk": g(&a.sig_pk),
    })
}

/// Reads a secret address file and checks the keys fit together.
pub fn address_from_json(params: &DapParams, v: &Value) -> Result<Address, DapError> {
    let d = params.domain();
    let a = Address {
        a_sk: scalar(d, v, "a_sk")?,
        a_pk: scalar(d, v, "a_pk")?,
        enc_sk: scalar(d, v, "enc_sk")?,
        enc_pk: group(d, v, "enc_pk")?,
        sig_sk: scalar(d, v, "sig_sk")?,
        sig_pk: group(d, v, "sig_pk")?,
    };
    if !a.is_consistent(params) {
        return Err(bad("address keys are inconsistent"));
    }
    Ok(a)
}

pub fn public_address_to_json(a: &PublicAddress) -> Value {
    json!({ "a_pk": s(&a.a_pk), "enc_pk": g(&a.enc_pk) })
}

/// Accepts a public address or a full secret address file.
pub fn public_address_from_json(d: &Domain, v: &Value) -> Result<PublicAddress, DapError> {
    Ok(PublicAddress {
        a_pk: scalar(d, v, "a_pk")?,
        enc_pk: group(d, v, "enc_pk")?,
    })
}

pub fn coin_to_json(c: &Coin) -> Value {
    json!({
        "a_pk": s(&c.a_pk),
        "v": s(&c.v),
        "rho": s(&c.rho),
        "r": s(&c.r),
        "k": s(&c.k),
        "cm": s(&c.cm),
    })
}

/// Reads a coin and checks its commitment opens.
pub fn coin_from_json(params: &DapParams, v: &Value) -> Result<Coin, DapError> {
    let d = params.domain();
    let c = Coin {
        a_pk: scalar(d, v, "a_pk")?,
        v: scalar(d, v, "v")?,
        rho: scalar(d, v, "rho")?,
        r: scalar(d, v, "r")?,
        k: scalar(d, v, "k")?,
        cm: scalar(d, v, "cm")?,
    };
    if Coin::open(params, &c.a_pk, &c.plain())? != c {
        return Err(bad("coin commitment does not open"));
    }
    Ok(c)
}

fn sig_to_json(sig: &Signature) -> Value {
    json!({ "r": g(&sig.r), "s": s(&sig.s) })
}

fn sig_from_json(d: &Domain, v: &Value) -> Result<Signature, DapError> {
    Ok(Signature {
        r: group(d, v, "r")?,
        s: scalar(d, v, "s")?,
    })
}

fn ct_to_json(ct: &Ciphertext) -> Value {
    json!({
        "epk": g(&ct.epk),
        "c": ct.c.iter().map(s).collect::<Vec<_>>(),
        "tag": s(&ct.tag),
    })
}

fn ct_from_json(d: &Domain, v: &Value) -> Result<Ciphertext, DapError> {
    let c: [Scalar; 3] = scalars(d, v, "c")?
        .try_into()
        .map_err(|_| bad("ciphertext must have three words"))?;
    Ok(Ciphertext {
        epk: group(d, v, "epk")?,
        c,
        tag: scalar(d, v, "tag")?,
    })
}

pub fn tx_to_json(tx: &Tx) -> Value {
    match tx {
        Tx::Mint(m) => json!({
            "type": "mint",
            "cm": s(&m.cm),
            "v": s(&m.v),
            "k": s(&m.k),
            "sig_pk": g(&m.sig_pk),
            "signature": sig_to_json(&m.signature),
        }),
        Tx::Pour(p) => json!({
            "type": "pour",
            "rt": s(&p.rt),
            "sn_old": p.sn_old.iter().map(s).collect::<Vec<_>>(),
            "cm_new": p.cm_new.iter().map(s).collect::<Vec<_>>(),
            "proof": p.proof.to_json(),
            "ciphertexts": p.ciphertexts.iter().map(ct_to_json).collect::<Vec<_>>(),
            "sig_pk": g(&p.sig_pk),
            "signature": sig_to_json(&p.signature),
        }),
    }
}

pub fn tx_from_json(d: &Domain, v: &Value) -> Result<Tx, DapError> {
    match field(v, "type")?.as_str() {
        Some("mint") => Ok(Tx::Mint(MintTx {
            cm: scalar(d, v, "cm")?,
            v: scalar(d, v, "v")?,
            k: scalar(d, v, "k")?,
            sig_pk: group(d, v, "sig_pk")?,
            signature: sig_from_json(d, field(v, "signature")?)?,
        })),
        Some("pour") => {
            let cts = field(v, "ciphertexts")?
                .as_array()
                .ok_or_else(|| bad("`ciphertexts` is not an array"))?
                .iter()
                .map(|c| ct_from_json(d, c))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Tx::Pour(PourTx {
                rt: scalar(d, v, "rt")?,
                sn_old: pair(scalars(d, v, "sn_old")?, "sn_old")?,
                cm_new: pair(scalars(d, v, "cm_new")?, "cm_new")?,
                proof: Proof::from_json(field(v, "proof")?)?,
                ciphertexts: pair(cts, "ciphertexts")?,
                sig_pk: group(d, v, "sig_pk")?,
                signature: sig_from_json(d, field(v, "signature")?)?,
            }))
        }
        _ => Err(bad("`type` must be \"mint\" or \"pour\"")),
    }
}

pub fn ledger_to_json(l: &LedgerState) -> Value {
    let p = &l.params;
    json!({
        "field": p.domain().tag(),
        "depth": p.depth,
        "rounds": p.mimc.rounds(),
        "v_max": s(&p.v_max),
        "leaves": l.tree().leaves().iter().map(s).collect::<Vec<_>>(),
        "serials": l.serials().iter().map(s).collect::<Vec<_>>(),
        "roots": l.roots().iter().map(s).collect::<Vec<_>>(),
        "txs": l.txs().iter().map(tx_to_json).collect::<Vec<_>>(),
    })
}

pub fn ledger_from_json(v: &Value) -> Result<LedgerState, DapError> {
    let tag = field(v, "field")?.as_str().ok_or_else(|| bad("`field` is not a string"))?;
    let d = Domain::from_tag(tag)?;
    let depth = field(v, "depth")?.as_u64().ok_or_else(|| bad("`depth` is not a number"))?;
    let rounds = field(v, "rounds")?.as_u64().ok_or_else(|| bad("`rounds` is not a number"))?;
    let v_max = scalar(&d, v, "v_max")?
        .to_u64()
        .ok_or_else(|| bad("`v_max` does not fit in 64 bits"))?;
    let params = DapParams::new(&d, depth as usize, rounds as u32, v_max)?;
    let txs = field(v, "txs")?
        .as_array()
        .ok_or_else(|| bad("`txs` is not an array"))?
        .iter()
        .map(|t| tx_from_json(&d, t))
        .collect::<Result<Vec<_>, _>>()?;
    LedgerState::from_parts(
        params,
        &scalars(&d, v, "leaves")?,
        scalars(&d, v, "serials")?,
        scalars(&d, v, "roots")?,
        txs,
    )
}
