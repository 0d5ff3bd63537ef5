mod common;

use common::{address, minted, rng, standard, value};
use desksnark::snark::SnarkError;
use desksnark_ledger::json::{ledger_from_json, ledger_to_json, tx_from_json, tx_to_json};
use desksnark_ledger::{mint, pour, receive, verify_tx, DapError, LedgerState, Tx};

#[test]
fn mint_verifies_and_appends() {
    let k = standard();
    let mut ledger = LedgerState::new(k.params.clone());
    let alice = address(&k.params, 1);
    let mut r = rng("mint");
    let (coin, tx) = mint(&ledger, &alice, &value(&k.params, 0), &mut r).unwrap();
    assert_eq!(ledger.tree().leaves().len(), 0, "mint itself does not touch the ledger");
    assert!(verify_tx(&mut ledger, &Tx::Mint(tx.clone()), &k.vk));
    assert_eq!(ledger.tree().leaves(), [coin.cm.clone()]);
    assert_eq!(ledger.roots().len(), 2);

    let mut forged = tx.clone();
    forged.v = value(&k.params, 1);
    assert!(!verify_tx(&mut ledger, &Tx::Mint(forged), &k.vk));

    let too_big = value(&k.params, (1 << 32) + 1);
    assert!(matches!(
        mint(&ledger, &alice, &too_big, &mut r),
        Err(DapError::ValueOutOfRange(_))
    ));
}

#[test]
fn full_lifecycle() {
    let k = standard();
    let p = &k.params;
    let mut ledger = LedgerState::new(p.clone());
    let alice = address(p, 1);
    let bob = address(p, 2);
    let mut r = rng("lifecycle");
    let c2 = minted(&mut ledger, k, &alice, 2, &mut r);
    let c3 = minted(&mut ledger, k, &alice, 3, &mut r);
    assert!(receive(&ledger, &bob).is_empty());

    let (tx, [to_bob, to_alice]) = pour(
        &ledger,
        [(&c2, &alice), (&c3, &alice)],
        [(&bob.public(), &value(p, 4)), (&alice.public(), &value(p, 1))],
        &k.system,
        &k.pk,
        &mut r,
    )
    .unwrap();
    let tx = Tx::Pour(tx);
    let before = ledger.clone();
    assert!(verify_tx(&mut ledger, &tx, &k.vk));
    assert_eq!(ledger.serials().len(), 2);
    assert_eq!(ledger.tree().leaves().len(), 4);

    // replay is a double spend
    assert!(!verify_tx(&mut ledger, &tx, &k.vk));
    // the same transaction against the pre-pour state would still verify
    assert!(verify_tx(&mut before.clone(), &tx, &k.vk));

    assert_eq!(receive(&ledger, &bob), [to_bob.clone()]);
    assert_eq!(receive(&ledger, &alice), [to_alice.clone()]);

    // spent coins can no longer be poured
    let again = pour(
        &ledger,
        [(&c2, &alice), (&c3, &alice)],
        [(&bob.public(), &value(p, 4)), (&alice.public(), &value(p, 1))],
        &k.system,
        &k.pk,
        &mut r,
    );
    assert_eq!(again.unwrap_err(), DapError::CoinAlreadySpent);

    // Bob spends his coin (with a zero coin of his own); receive drops it.
    let zero = minted(&mut ledger, k, &bob, 0, &mut r);
    let (tx2, _) = pour(
        &ledger,
        [(&to_bob, &bob), (&zero, &bob)],
        [(&alice.public(), &value(p, 3)), (&bob.public(), &value(p, 1))],
        &k.system,
        &k.pk,
        &mut r,
    )
    .unwrap();
    assert!(verify_tx(&mut ledger, &Tx::Pour(tx2), &k.vk));
    let bobs = receive(&ledger, &bob);
    assert_eq!(bobs.len(), 1);
    assert_eq!(bobs[0].v, value(p, 1));
    assert!(!bobs.contains(&to_bob));
    assert_eq!(receive(&ledger, &alice).len(), 2);

    // ledger and tx JSON round trips
    let restored = ledger_from_json(&ledger_to_json(&ledger)).unwrap();
    assert_eq!(restored, ledger);
    assert_eq!(tx_from_json(p.domain(), &tx_to_json(&tx)).unwrap(), tx);
}

#[test]
fn bad_pours() {
    let k = standard();
    let p = &k.params;
    let mut ledger = LedgerState::new(p.clone());
    let alice = address(p, 1);
    let bob = address(p, 2);
    let mut r = rng("bad");
    let c2 = minted(&mut ledger, k, &alice, 2, &mut r);
    let c3 = minted(&mut ledger, k, &alice, 3, &mut r);
    let out = |a: u64, b: u64| (value(p, a), value(p, b));

    let (v4, v2) = out(4, 2);
    let err = pour(
        &ledger,
        [(&c2, &alice), (&c3, &alice)],
        [(&bob.public(), &v4), (&alice.public(), &v2)],
        &k.system,
        &k.pk,
        &mut r,
    )
    .unwrap_err();
    assert_eq!(err, DapError::Snark(SnarkError::UnsatisfiedWitness));

    let (v4, v1) = out(4, 1);
    let same = pour(
        &ledger,
        [(&c2, &alice), (&c2, &alice)],
        [(&bob.public(), &v4), (&alice.public(), &v1)],
        &k.system,
        &k.pk,
        &mut r,
    );
    assert_eq!(same.unwrap_err(), DapError::DuplicateCoin);

    let wrong_owner = pour(
        &ledger,
        [(&c2, &bob), (&c3, &alice)],
        [(&bob.public(), &v4), (&alice.public(), &v1)],
        &k.system,
        &k.pk,
        &mut r,
    );
    assert_eq!(wrong_owner.unwrap_err(), DapError::WrongOwner);

    let (unminted, _) = mint(&ledger, &alice, &value(p, 5), &mut r).unwrap();
    let missing = pour(
        &ledger,
        [(&c2, &alice), (&unminted, &alice)],
        [(&bob.public(), &v4), (&alice.public(), &value(p, 3))],
        &k.system,
        &k.pk,
        &mut r,
    );
    assert_eq!(missing.unwrap_err(), DapError::CoinNotInTree);
}

#[test]
fn tampered_pours_are_rejected() {
    let k = standard();
    let p = &k.params;
    let mut ledger = LedgerState::new(p.clone());
    let alice = address(p, 1);
    let bob = address(p, 2);
    let mut r = rng("tamper");
    let c2 = minted(&mut ledger, k, &alice, 2, &mut r);
    let c3 = minted(&mut ledger, k, &alice, 3, &mut r);
    let (tx, _) = pour(
        &ledger,
        [(&c2, &alice), (&c3, &alice)],
        [(&bob.public(), &value(p, 4)), (&alice.public(), &value(p, 1))],
        &k.system,
        &k.pk,
        &mut r,
    )
    .unwrap();

    let one = p.domain().one();
    let mut fabricated = tx.clone();
    fabricated.rt = &fabricated.rt + &one;
    let mut swapped_cm = tx.clone();
    swapped_cm.cm_new[0] = &swapped_cm.cm_new[0] + &one;
    let mut same_sn = tx.clone();
    same_sn.sn_old[1] = same_sn.sn_old[0].clone();
    let mut resigned_elsewhere = tx.clone();
    resigned_elsewhere.ciphertexts[0].tag = &resigned_elsewhere.ciphertexts[0].tag + &one;
    for (name, bad) in [
        ("fabricated root", fabricated),
        ("changed commitment", swapped_cm),
        ("duplicate serial", same_sn),
        ("changed ciphertext", resigned_elsewhere),
    ] {
        let mut l = ledger.clone();
        assert!(!verify_tx(&mut l, &Tx::Pour(bad), &k.vk), "{name}");
        assert_eq!(l, ledger, "{name}: rejected tx changed the ledger");
    }
    assert!(verify_tx(&mut ledger, &Tx::Pour(tx), &k.vk));
}

#[test]
fn pour_reveals_no_old_coin_data() {
    let k = standard();
    let p = &k.params;
    let mut ledger = LedgerState::new(p.clone());
    let alice = address(p, 1);
    let bob = address(p, 2);
    let mut r = rng("anon");
    let c2 = minted(&mut ledger, k, &alice, 2, &mut r);
    let c3 = minted(&mut ledger, k, &alice, 3, &mut r);
    let (tx, _) = pour(
        &ledger,
        [(&c2, &alice), (&c3, &alice)],
        [(&bob.public(), &value(p, 4)), (&alice.public(), &value(p, 1))],
        &k.system,
        &k.pk,
        &mut r,
    )
    .unwrap();
    let visible = tx.visible_scalars();
    for c in [&c2, &c3] {
        for secret in [&c.a_pk, &c.v, &c.rho, &c.r] {
            assert!(!visible.contains(secret), "pour leaks {secret}");
        }
    }
}
