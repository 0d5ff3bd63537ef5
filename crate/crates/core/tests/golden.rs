//! The cubic `x^3 + x + 5` with `x = 3`, checked against hand-worked tables
//! in exact rational arithmetic.

use desksnark::algebra::{Domain, Poly};
use desksnark::qap::Family;
use desksnark::worked::{decimals, WorkedExample};
use desksnark::{
    compile_source, compile_to_r1cs, generate_witness, is_satisfied, r1cs_to_qap, CUBIC_SOURCE,
};

const TOL: f64 = 5e-3;

fn close(p: &Poly, want: &[f64]) -> bool {
    p.coeffs().len() == want.len()
        && p.coeffs()
            .iter()
            .zip(want)
            .all(|(c, w)| (c.to_f64() - w).abs() <= TOL)
}

fn ints(d: &Domain, v: &[i64]) -> Vec<desksnark::Scalar> {
    v.iter().map(|&x| d.from_i64(x)).collect()
}

#[test]
fn flattening_gives_four_gates_in_wire_order() {
    let d = Domain::Rational;
    let fp = compile_source(CUBIC_SOURCE, &d).unwrap();
    assert_eq!(fp.wires, ["one", "x", "out", "sym1", "y", "sym2"]);
    assert_eq!(fp.gates.len(), 4);
    let outs: Vec<_> = fp.gates.iter().map(|g| fp.wires[g.out].as_str()).collect();
    assert_eq!(outs, ["sym1", "y", "sym2", "out"]);
}

#[test]
fn r1cs_matrices_match_exactly() {
    let d = Domain::Rational;
    let cs = compile_to_r1cs(&compile_source(CUBIC_SOURCE, &d).unwrap());
    let v = [[0, 1, 0, 0, 0, 0], [0, 0, 0, 1, 0, 0], [0, 1, 0, 0, 1, 0], [5, 0, 0, 0, 0, 1]];
    let w = [[0, 1, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [1, 0, 0, 0, 0, 0], [1, 0, 0, 0, 0, 0]];
    let k = [[0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1], [0, 0, 1, 0, 0, 0]];
    assert_eq!(cs.rows.len(), 4);
    for (i, row) in cs.rows.iter().enumerate() {
        let [rv, rw, rk] = row.dense(6, &d);
        assert_eq!(rv, ints(&d, &v[i]), "V row {}", i + 1);
        assert_eq!(rw, ints(&d, &w[i]), "W row {}", i + 1);
        assert_eq!(rk, ints(&d, &k[i]), "K row {}", i + 1);
    }
}

#[test]
fn witness_at_three() {
    let d = Domain::Rational;
    let fp = compile_source(CUBIC_SOURCE, &d).unwrap();
    let t = generate_witness(&fp, &d.from_i64(3)).unwrap();
    assert_eq!(t.t, ints(&d, &[1, 3, 35, 9, 27, 30]));
    assert!(is_satisfied(&compile_to_r1cs(&fp), &t).unwrap());
}

#[test]
fn first_v_polynomial_is_exact() {
    let d = Domain::Rational;
    let q = r1cs_to_qap(&compile_to_r1cs(&compile_source(CUBIC_SOURCE, &d).unwrap())).unwrap();
    let want = Poly::new(
        &d,
        vec![
            d.from_i64(-5),
            d.ratio(55, 6).unwrap(),
            d.from_i64(-5),
            d.ratio(5, 6).unwrap(),
        ],
    )
    .unwrap();
    assert_eq!(q.poly(Family::V, 0), want);
}

#[test]
fn v_group_decimals() {
    let d = Domain::Rational;
    let q = r1cs_to_qap(&compile_to_r1cs(&compile_source(CUBIC_SOURCE, &d).unwrap())).unwrap();
    let want: [&[f64]; 6] = [
        &[-5.0, 9.166, -5.0, 0.833],
        &[8.0, -11.333, 5.0, -0.666],
        &[],
        &[-6.0, 9.5, -4.0, 0.5],
        &[4.0, -7.0, 3.5, -0.5],
        &[-1.0, 1.833, -1.0, 0.166],
    ];
    for (j, w) in want.iter().enumerate() {
        assert!(close(&q.poly(Family::V, j), w), "v_{}", j + 1);
    }
}

#[test]
fn combined_target_and_quotient() {
    let ex = WorkedExample::build().unwrap();
    assert!(close(&ex.v, &[43.0, -73.333, 38.5, -5.166]), "V = {}", decimals(&ex.v));
    assert!(close(&ex.w, &[-3.0, 10.333, -5.0, 0.666]), "W = {}", decimals(&ex.w));
    assert!(close(&ex.k, &[-41.0, 71.666, -24.5, 2.833]), "K = {}", decimals(&ex.k));
    assert!(close(
        &ex.t,
        &[-88.0, 592.666, -1063.777, 805.833, -294.777, 51.5, -3.444]
    ));
    assert_eq!(ex.qap.z(), &Poly::from_i64s(&Domain::Rational, &[24, -50, 35, -10, 1]));
    assert!(close(&ex.h, &[-3.666, 17.055, -3.444]));
    assert!(ex.remainder.is_zero());
}

#[test]
fn evaluating_at_first_node_gives_first_gate() {
    let d = Domain::Rational;
    let q = r1cs_to_qap(&compile_to_r1cs(&compile_source(CUBIC_SOURCE, &d).unwrap())).unwrap();
    let at = q.evaluate_at(&d.one()).unwrap();
    assert_eq!(at.v, ints(&d, &[0, 1, 0, 0, 0, 0]));
    assert_eq!(at.w, ints(&d, &[0, 1, 0, 0, 0, 0]));
    assert_eq!(at.k, ints(&d, &[0, 0, 0, 1, 0, 0]));
}
