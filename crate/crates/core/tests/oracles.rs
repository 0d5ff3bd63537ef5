//! `compute_h` against schoolbook long division and `is_satisfied` against
//! row-by-row dot products, on the worked cubic and on random instances.

mod common;

use common::{coeffs, dense_rows, modulus, rng, to_int};
use desksnark::algebra::Domain;
use desksnark::qap::{combine_with_witness, compute_h, target_poly};
use desksnark::worked::WorkedExample;
use desksnark::{compile_source, compile_to_r1cs, generate_witness, is_satisfied, r1cs_to_qap};
use desksnark_testkit::oracle::{divmod_mod, divmod_rational, rows_satisfied, vanishing_mod};
use desksnark_testkit::programs::random_program;
use num_bigint::BigInt;
use rand::Rng;

#[test]
fn worked_cubic_agrees_with_rational_long_division() {
    let ex = WorkedExample::build().unwrap();
    let rat = |p: &desksnark::Poly| -> Vec<_> {
        p.coeffs().iter().map(|c| c.to_rational().unwrap().clone()).collect()
    };
    let (q, r) = divmod_rational(&rat(&ex.t), &rat(ex.qap.z())).unwrap();
    assert_eq!(q, rat(&ex.h));
    assert!(r.is_empty());
    assert!(ex.remainder.is_zero());
}

#[test]
fn worked_cubic_agrees_with_dot_products() {
    let d = Domain::bn254();
    let p = modulus(&d);
    let fp = compile_source(desksnark::CUBIC_SOURCE, &d).unwrap();
    let cs = compile_to_r1cs(&fp);
    let t = generate_witness(&fp, &d.from_i64(3)).unwrap();
    let ti: Vec<BigInt> = t.t.iter().map(to_int).collect();
    assert!(rows_satisfied(&dense_rows(&cs), &ti, &p));
    assert!(is_satisfied(&cs, &t).unwrap());
}

#[test]
fn random_instances_agree_with_oracles() {
    let d = Domain::bn254();
    let p = modulus(&d);
    let mut r = rng(2024);
    let mut unsat = 0;
    for case in 0..100 {
        let fp = compile_source(&random_program(&mut r, 20).source(), &d).unwrap();
        let cs = compile_to_r1cs(&fp);
        let q = r1cs_to_qap(&cs).unwrap();
        let mut t = generate_witness(&fp, &d.from_i64(r.random_range(-1000..1000))).unwrap();
        if case % 2 == 1 {
            let j = r.random_range(1..t.len());
            t.t[j] = d.random(&mut r).unwrap();
        }
        let ti: Vec<BigInt> = t.t.iter().map(to_int).collect();
        let sat = rows_satisfied(&dense_rows(&cs), &ti, &p);
        assert_eq!(is_satisfied(&cs, &t).unwrap(), sat, "case {case}");
        unsat += usize::from(!sat);

        assert_eq!(coeffs(q.z()), vanishing_mod(cs.rows.len(), &p));
        let (v, w, k) = combine_with_witness(&q, &t).unwrap();
        let target = target_poly(&v, &w, &k).unwrap();
        let (oq, or) = divmod_mod(&coeffs(&target), &coeffs(q.z()), &p).unwrap();
        match compute_h(&target, q.z()) {
            Ok(h) => {
                assert!(or.is_empty(), "case {case}: oracle remainder nonzero");
                assert_eq!(coeffs(&h), oq, "case {case}");
            }
            Err(_) => assert!(!or.is_empty(), "case {case}: oracle divides exactly"),
        }
        assert_eq!(or.is_empty(), sat, "case {case}");
    }
    assert!(unsat > 0, "corruptions never broke a row");
}
