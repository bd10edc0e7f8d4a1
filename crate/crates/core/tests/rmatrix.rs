use kmat_core::lie::{build_sl, contragredient, split_casimir};
use kmat_core::linalg::{c64, eye, fro, partial_transpose, re, swap_operator};
use kmat_core::rmatrix::*;
use kmat_core::series::RationalMatrixFn;
use kmat_core::spectral::SpectralSampler;
use kmat_core::Error;

fn max_ybe(r: &RMatrix, count: usize, seed: u64) -> f64 {
    let mut s = SpectralSampler::new(seed);
    s.pairs(count)
        .into_iter()
        .map(|(u, v)| ybe_residual(r, r, r, u, v).unwrap())
        .fold(0.0, f64::max)
}

#[test]
fn closed_form_at_one() {
    let r = yang_r(2).unwrap();
    let expected = (eye(4) + swap_operator(2, 2) / re(4.0)) * re(7.0 / 8.0);
    assert!(fro(&(r.evaluate(re(1.0)).unwrap() - expected)) <= 1e-15);
    assert!(matches!(yang_r(1), Err(Error::InvalidDimension(_))));
}

#[test]
fn yang_baxter_suite() {
    for n in 2..=5 {
        assert!(
            max_ybe(&yang_r(n).unwrap(), 100, n as u64) <= 1e-11,
            "n={n}"
        );
    }
    let r3 = yang_r(3).unwrap();
    assert!(ybe_residual(&r3, &r3, &r3, re(0.7), re(1.3)).unwrap() <= 1e-12);
}

#[test]
fn redressing_preserves_solution() {
    let r = yang_r(3)
        .unwrap()
        .redress(&[re(1.0), re(0.0), re(1.0)], &[re(0.0), re(0.0), re(1.0)])
        .unwrap();
    assert!(max_ybe(&r, 20, 9) <= 1e-11);
}

#[test]
fn corrupted_swap_coefficient_breaks_equation() {
    let n = 2;
    let r = yang_r(n).unwrap();
    let mut num = r.func().numerator().to_vec();
    num[1] += swap_operator(n, n) * re(0.01);
    let func = RationalMatrixFn::new(num, r.func().denominator().to_vec(), "corrupt").unwrap();
    let (r1, r2) = r.reps();
    let bad = RMatrix::from_parts(func, r1.clone(), r2.clone(), false).unwrap();
    assert!(max_ybe(&bad, 10, 1) >= 1e-4);
}

#[test]
fn pole_names_factor() {
    let r = yang_r(2).unwrap();
    match ybe_residual(&r, &r, &r, re(0.0), re(0.5)) {
        Err(Error::Pole { factor, .. }) => assert_eq!(factor, "R12(u)"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn expansion_equals_split_casimir() {
    for n in 2..=5 {
        let r = yang_r(n).unwrap();
        let (_, rep) = build_sl(n).unwrap();
        let s = r.expand(1).unwrap();
        assert!(fro(&(s.coeff(0) - eye(n * n))) <= 1e-13);
        assert!(fro(&(s.coeff(1) - split_casimir(&rep, &rep).unwrap())) <= 1e-13);
    }
}

#[test]
fn unitarity_is_scalar() {
    for n in 2..=4 {
        let r = yang_r(n).unwrap();
        let mut s = SpectralSampler::new(2);
        for _ in 0..5 {
            let (_, defect) = unitarity_defect(&r, s.point()).unwrap();
            assert!(defect <= 1e-12);
        }
    }
}

#[test]
fn crossed_definition_and_expansion() {
    let r = yang_r(2).unwrap();
    let rb = crossed_r(&r, re(0.0)).unwrap();
    let expected = partial_transpose(&r.evaluate(re(-1.0)).unwrap(), &[2, 2], 0);
    assert!(fro(&(rb.evaluate(re(1.0)).unwrap() - expected)) == 0.0);
    assert!(rb.twisted());
    assert!(crossed_r(&rb, re(0.0)).is_err());

    for n in [2, 3] {
        let (_, rep) = build_sl(n).unwrap();
        let c = find_crossing(n, &[]).unwrap();
        let rb = crossed_r(&yang_r(n).unwrap(), c.gamma).unwrap();
        let s = rb.expand(1).unwrap();
        let cg = split_casimir(&contragredient(&rep), &rep).unwrap();
        // R̄(u) → I only up to the sign of u: R(Γ−u) expands in −1/u.
        assert!(fro(&(s.coeff(0) - eye(n * n))) <= 1e-13);
        assert!(fro(&(s.coeff(1) - &cg)) <= 1e-12, "n={n}");
    }
}

#[test]
fn double_crossing_returns_original() {
    let r = yang_r(2).unwrap();
    let g = c64(0.3, 0.1);
    let rb = crossed_r(&r, g).unwrap();
    let mut s = SpectralSampler::new(4);
    for _ in 0..10 {
        let u = s.point();
        // R̄(Γ−u)^{T₁} = R(u).
        let back = partial_transpose(&rb.evaluate(g - u).unwrap(), &[2, 2], 0);
        let orig = r.evaluate(u).unwrap();
        let ratio = orig.trace() / back.trace();
        assert!(fro(&(back * ratio - orig)) <= 1e-12);
    }
}

#[test]
fn crossing_search() {
    let verify = SpectralSampler::new(5).pairs(20);
    for n in [2, 3] {
        let c = find_crossing(n, &verify).unwrap();
        assert_eq!(c.roots.len(), 1);
        assert!(c.objective <= 1e-10);
        assert!(c.bybe_residual <= 1e-10);
        assert!((c.gamma - re(-0.25)).norm() <= 1e-10);
        assert!(crossing_objective_at(n, c.gamma + 0.1).unwrap() >= 1e-4);
    }
}

#[test]
fn classical_r_examples() {
    let (_, rep2) = build_sl(2).unwrap();
    let r = classical_r(&rep2, &rep2).unwrap();
    let expected = (swap_operator(2, 2) - eye(4) / re(2.0)) / re(8.0);
    assert!(fro(&(r.evaluate(re(2.0)).unwrap() - expected)) <= 1e-15);
    let hbar = 0.37;
    let u = c64(0.8, 0.3);
    let lhs = r.evaluate(u / hbar).unwrap();
    assert!(fro(&(lhs - r.evaluate(u).unwrap() * re(hbar))) <= 1e-15);

    let (_, rep3) = build_sl(3).unwrap();
    let r3 = classical_r(&rep3, &rep3).unwrap();
    let res = cybe_residual(&r3, &r3, &r3, [3, 3, 3], re(1.1), re(-0.4)).unwrap();
    assert!(res <= 1e-12, "{res}");
}
