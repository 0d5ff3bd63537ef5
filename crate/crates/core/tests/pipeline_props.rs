mod common;

use common::{modulus, rng, to_int};
use desksnark::algebra::Domain;
use desksnark::qap::{combine_with_witness, compute_h, target_poly, QapError};
use desksnark::{compile_source, compile_to_r1cs, generate_witness, is_satisfied, r1cs_to_qap};
use desksnark_testkit::programs::random_program;
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn flattening_preserves_semantics_and_gate_count(seed in any::<u64>(), x in any::<i64>()) {
        let d = Domain::bn254();
        let p = modulus(&d);
        let prog = random_program(&mut rng(seed), 20);
        let fp = compile_source(&prog.source(), &d).unwrap();
        prop_assert_eq!(fp.gates.len(), prog.gate_count());
        let wires = fp.forward(&d.from_i64(x)).unwrap();
        prop_assert_eq!(to_int(&wires[2]), prog.eval(&BigInt::from(x), &p));
    }

    #[test]
    fn honest_witness_satisfies(seed in any::<u64>(), x in any::<i64>()) {
        let d = Domain::bn254();
        let fp = compile_source(&random_program(&mut rng(seed), 20).source(), &d).unwrap();
        let cs = compile_to_r1cs(&fp);
        let t = generate_witness(&fp, &d.from_i64(x)).unwrap();
        prop_assert!(is_satisfied(&cs, &t).unwrap());
    }

    #[test]
    fn qap_nodes_reproduce_rows(seed in any::<u64>()) {
        let d = Domain::bn254();
        let fp = compile_source(&random_program(&mut rng(seed), 20).source(), &d).unwrap();
        let cs = compile_to_r1cs(&fp);
        let q = r1cs_to_qap(&cs).unwrap();
        for (i, row) in cs.rows.iter().enumerate() {
            let at = q.evaluate_at(&d.from_u64(i as u64 + 1)).unwrap();
            let [v, w, k] = row.dense(cs.num_wires, &d);
            prop_assert_eq!(at.v, v);
            prop_assert_eq!(at.w, w);
            prop_assert_eq!(at.k, k);
        }
    }

    /// Random single-entry corruptions: divisibility holds exactly when the
    /// rows do.
    #[test]
    fn divisibility_iff_satisfied(seed in any::<u64>(), x in any::<i64>()) {
        let d = Domain::bn254();
        let mut r = rng(seed);
        let fp = compile_source(&random_program(&mut r, 20).source(), &d).unwrap();
        let cs = compile_to_r1cs(&fp);
        let q = r1cs_to_qap(&cs).unwrap();
        let mut t = generate_witness(&fp, &d.from_i64(x)).unwrap();
        if r.random_bool(0.5) {
            let j = r.random_range(1..t.len());
            t.t[j] = &t.t[j] + &d.from_u64(r.random_range(1..1000));
        }
        let (v, w, k) = combine_with_witness(&q, &t).unwrap();
        let h = compute_h(&target_poly(&v, &w, &k).unwrap(), q.z());
        let sat = is_satisfied(&cs, &t).unwrap();
        prop_assert_eq!(h.is_ok(), sat);
        if !sat {
            prop_assert!(matches!(h, Err(QapError::NotDivisible { .. })), "unexpected error kind");
        }
    }
}

#[test]
fn corrupting_any_intermediate_wire_breaks_the_cubic() {
    let d = Domain::bn254();
    let fp = compile_source(desksnark::CUBIC_SOURCE, &d).unwrap();
    let cs = compile_to_r1cs(&fp);
    let t = generate_witness(&fp, &d.from_i64(3)).unwrap();
    for j in 1..t.len() {
        let mut bad = t.clone();
        bad.t[j] = &bad.t[j] + &d.one();
        assert!(!is_satisfied(&cs, &bad).unwrap(), "wire {j}");
    }
}
