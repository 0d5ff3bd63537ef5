//! Addresses, coin encryption and signatures over the transparent group.
//!
//! These mirror the shape of an ECIES-style hybrid scheme and of Schnorr
//! signatures, but the group stores discrete logs in the clear, so neither
//! hides or authenticates anything against a real adversary.

use desksnark::algebra::{Domain, Scalar};
use desksnark::snark::GroupElem;
use rand::RngCore;

use crate::{DapError, DapParams};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Address {
    pub a_sk: Scalar,
    pub a_pk: Scalar,
    pub enc_sk: Scalar,
    pub enc_pk: GroupElem,
    pub sig_sk: Scalar,
    pub sig_pk: GroupElem,
}

/// What a payer needs to send coins to an address.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicAddress {
    pub a_pk: Scalar,
    pub enc_pk: GroupElem,
}

fn gen(domain: &Domain) -> GroupElem {
    GroupElem::generator(domain).expect("field domain")
}

/// Derives every key from `seed` with domain tags 1, 2, 3.
pub fn create_address(params: &DapParams, seed: &Scalar) -> Address {
    let d = params.domain();
    let a_sk = params.prf(seed, &d.from_u64(1));
    let enc_sk = params.prf(seed, &d.from_u64(2));
    let sig_sk = params.prf(seed, &d.from_u64(3));
    Address {
        a_pk: params.prf(&a_sk, &d.zero()),
        enc_pk: gen(d).scale(&enc_sk).expect("same field"),
        sig_pk: gen(d).scale(&sig_sk).expect("same field"),
        a_sk,
        enc_sk,
        sig_sk,
    }
}

impl Address {
    pub fn public(&self) -> PublicAddress {
        PublicAddress {
            a_pk: self.a_pk.clone(),
            enc_pk: self.enc_pk.clone(),
        }
    }

    /// Recomputes the public halves from the secrets.
    pub fn is_consistent(&self, params: &DapParams) -> bool {
        let g = gen(params.domain());
        self.a_pk == params.prf(&self.a_sk, &params.domain().zero())
            && g.scale(&self.enc_sk).ok().as_ref() == Some(&self.enc_pk)
            && g.scale(&self.sig_sk).ok().as_ref() == Some(&self.sig_pk)
    }
}

/// Coin opening sent to the recipient: value, serial seed, trapdoor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoinPlain {
    pub v: Scalar,
    pub rho: Scalar,
    pub r: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ciphertext {
    pub epk: GroupElem,
    pub c: [Scalar; 3],
    pub tag: Scalar,
}

impl Ciphertext {
    /// Every word, for signing and scanning.
    pub fn words(&self) -> Vec<Scalar> {
        let mut w = vec![self.epk.transcript_scalar()];
        w.extend(self.c.iter().cloned());
        w.push(self.tag.clone());
        w
    }
}

fn stream_key(params: &DapParams, shared: &GroupElem) -> Scalar {
    params.mimc.h(&[shared.transcript_scalar()])
}

fn mac(params: &DapParams, key: &Scalar, c: &[Scalar; 3]) -> Scalar {
    params
        .mimc
        .h(&[key.clone(), c[0].clone(), c[1].clone(), c[2].clone()])
}

pub fn encrypt_coin<R: RngCore + ?Sized>(
    params: &DapParams,
    enc_pk: &GroupElem,
    plain: &CoinPlain,
    rng: &mut R,
) -> Result<Ciphertext, DapError> {
    let d = params.domain();
    let e = d.random(rng)?;
    let shared = enc_pk.scale(&e)?;
    let key = stream_key(params, &shared);
    let pad = |i: u64| params.mimc.h(&[key.clone(), d.from_u64(i)]);
    let c = [
        &plain.v + &pad(1),
        &plain.rho + &pad(2),
        &plain.r + &pad(3),
    ];
    Ok(Ciphertext {
        epk: gen(d).scale(&e)?,
        tag: mac(params, &key, &c),
        c,
    })
}

/// `None` when the tag does not match (not ours, or tampered).
pub fn try_decrypt(params: &DapParams, enc_sk: &Scalar, ct: &Ciphertext) -> Option<CoinPlain> {
    let d = params.domain();
    let shared = ct.epk.scale(enc_sk).ok()?;
    let key = stream_key(params, &shared);
    if mac(params, &key, &ct.c) != ct.tag {
        return None;
    }
    let pad = |i: u64| params.mimc.h(&[key.clone(), d.from_u64(i)]);
    Some(CoinPlain {
        v: &ct.c[0] - &pad(1),
        rho: &ct.c[1] - &pad(2),
        r: &ct.c[2] - &pad(3),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub r: GroupElem,
    pub s: Scalar,
}

fn challenge(params: &DapParams, r: &GroupElem, msg: &[Scalar]) -> Scalar {
    let mut input = vec![r.transcript_scalar()];
    input.extend_from_slice(msg);
    params.mimc.h(&input)
}

/// Schnorr-style signature with a nonce derived from the key and message.
pub fn sign(params: &DapParams, sig_sk: &Scalar, msg: &[Scalar]) -> Signature {
    let d = params.domain();
    let mut input = vec![sig_sk.clone(), d.from_u64(msg.len() as u64)];
    input.extend_from_slice(msg);
    let nonce = params.mimc.h(&input);
    let r = gen(d).scale(&nonce).expect("same field");
    let e = challenge(params, &r, msg);
    Signature {
        s: &nonce + &(&e * sig_sk),
        r,
    }
}

/// `E(s) == R + e * pk`.
pub fn check_sig(params: &DapParams, sig_pk: &GroupElem, msg: &[Scalar], sig: &Signature) -> bool {
    let d = params.domain();
    if !sig.s.in_domain(d) {
        return false;
    }
    let e = challenge(params, &sig.r, msg);
    let lhs = gen(d).scale(&sig.s);
    let rhs = sig_pk.scale(&e).and_then(|x| x.combine(&sig.r));
    matches!((lhs, rhs), (Ok(a), Ok(b)) if a == b)
}
