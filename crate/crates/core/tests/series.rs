use kmat_core::linalg::{c64, diag, eye, fro, inverse, re, unit, CMat};
use kmat_core::rmatrix::yang_r;
use kmat_core::series::{MatrixSeries, RationalMatrixFn};
use kmat_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(rng: &mut ChaCha8Rng, d: usize) -> CMat {
    CMat::from_fn(d, d, |_, _| {
        c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

fn random_series(rng: &mut ChaCha8Rng, d: usize, order: usize) -> MatrixSeries {
    MatrixSeries::new((0..=order).map(|_| random_matrix(rng, d)).collect()).unwrap()
}

#[test]
fn telescoping_product() {
    let a = CMat::from_fn(3, 3, |i, j| re((i + 2 * j) as f64 * 0.1));
    let plus = MatrixSeries::new(vec![eye(3), a.clone(), CMat::zeros(3, 3)]).unwrap();
    let minus = MatrixSeries::new(vec![eye(3), -&a, CMat::zeros(3, 3)]).unwrap();
    let p = plus.mul(&minus).unwrap();
    assert!(fro(p.coeff(1)) == 0.0);
    assert!(fro(&(p.coeff(2) + &a * &a)) <= 1e-15);
}

#[test]
fn product_matches_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let a = random_series(&mut rng, 4, 3);
    let b = random_series(&mut rng, 4, 3);
    let u = re(1e3);
    let exact = a.evaluate(u) * b.evaluate(u);
    let prod = a.mul(&b).unwrap().evaluate(u);
    // Dropped terms are O(u⁻⁴).
    let scale = fro(&exact);
    assert!(fro(&(exact - prod)) / scale <= 1e-9 + 100.0 / u.norm().powi(4));
    let id = MatrixSeries::identity(4, 4);
    let s = random_series(&mut rng, 4, 4);
    assert!(id.mul(&s).unwrap().max_coeff_diff(&s) == 0.0);
}

#[test]
fn inverse_examples() {
    let n = unit(3, 0, 2);
    let s = MatrixSeries::new(vec![eye(3), n.clone(), CMat::zeros(3, 3)]).unwrap();
    let inv = s.inverse().unwrap();
    assert!(fro(&(inv.coeff(1) + &n)) == 0.0);
    assert!(fro(inv.coeff(2)) == 0.0);

    let j = diag(&[re(1.0), re(1.0), re(-1.0)]);
    let f =
        RationalMatrixFn::new(vec![eye(3) * re(0.7), j], vec![re(0.0), re(1.0)], "diag").unwrap();
    let u = re(50.0);
    let inv = f.expand(8).unwrap().inverse().unwrap().evaluate(u);
    let pointwise = inverse(&f.evaluate(u).unwrap()).unwrap();
    assert!(fro(&(inv - pointwise)) <= 1e-10);

    let nil = MatrixSeries::new(vec![unit(2, 0, 1), eye(2)]).unwrap();
    assert!(matches!(
        nil.inverse(),
        Err(Error::NotQuasiClassical { .. })
    ));
}

#[test]
fn expansion_examples() {
    let xi = c64(0.3, -0.2);
    let f =
        RationalMatrixFn::new(vec![eye(2) * xi, eye(2)], vec![re(0.0), re(1.0)], "shift").unwrap();
    let s = f.expand(2).unwrap();
    assert!(fro(&(s.coeff(0) - eye(2))) == 0.0);
    assert!(fro(&(s.coeff(1) - eye(2) * xi)) == 0.0);

    let g = RationalMatrixFn::new(vec![eye(2)], vec![re(-1.0), re(1.0)], "pole").unwrap();
    let s = g.expand(3).unwrap();
    assert!(fro(s.coeff(0)) == 0.0);
    for r in 1..=3 {
        assert!(fro(&(s.coeff(r) - eye(2))) <= 1e-15);
    }

    let r = yang_r(2).unwrap();
    let s = r.func().expand(1).unwrap();
    assert!(fro(&(s.coeff(0) - eye(4))) <= 1e-14);
    assert!(fro(&(s.coeff(1) - r.casimir())) <= 1e-13);

    let unbounded = RationalMatrixFn::new(vec![eye(2), eye(2)], vec![re(1.0)], "linear").unwrap();
    assert!(matches!(
        unbounded.expand(1),
        Err(Error::NormalizationRequired { .. })
    ));
}

fn check_remainder(f: &RationalMatrixFn, order: usize) {
    let s = f.expand(order).unwrap();
    let raw = |u: f64| fro(&(f.evaluate(re(u)).unwrap() - s.evaluate(re(u))));
    let c = raw(1e2) * 1e2f64.powi(order as i32 + 1);
    for u in [1e3, 1e4] {
        let floor = 1e-13 * fro(&f.evaluate(re(u)).unwrap());
        assert!(
            raw(u) <= 1.1 * c / u.powi(order as i32 + 1) + floor,
            "order {order} at {u}"
        );
    }
}

#[test]
fn expansion_remainder_decays() {
    let r = yang_r(3).unwrap();
    for order in 1..=3 {
        check_remainder(r.func(), order);
    }
    let j = diag(&[re(1.0), re(-1.0)]);
    let g = RationalMatrixFn::new(vec![eye(2) * re(0.4), j], vec![re(0.7), re(1.0)], "shifted")
        .unwrap();
    for order in 1..=4 {
        check_remainder(&g, order);
    }
    let u = re(1e6);
    let s = r.func().expand(4).unwrap();
    assert!(fro(&(r.evaluate(u).unwrap() - s.evaluate(u))) <= 1e-8 * fro(&r.evaluate(u).unwrap()));
}

#[test]
fn pole_error() {
    let g = RationalMatrixFn::new(vec![eye(2)], vec![re(-1.0), re(1.0)], "pole").unwrap();
    assert!(matches!(g.evaluate(re(1.0)), Err(Error::Pole { .. })));
}

#[test]
fn text_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let s = random_series(&mut rng, 3, 2);
    let back = MatrixSeries::from_text(&s.to_text()).unwrap();
    assert!(back.max_coeff_diff(&s) == 0.0);
    assert!(MatrixSeries::from_text("2 2 1\n").is_err());
}
