//! Prints one PASS/FAIL line per acceptance criterion and exits non-zero when
//! any criterion fails.

use kmat_core::classify::{extract_involution, solvable_structure, symmetric_pair_check};
use kmat_core::kmatrix::*;
use kmat_core::lie::{build_sl, centralizer, contragredient, restricted_casimir, SubalgebraBasis};
use kmat_core::linalg::{c64, diag, eye, flatten, fro, kron, principal_angle, re, unit, CMat};
use kmat_core::rmatrix::{crossing_objective_at, find_crossing, yang_r, ybe_residual, RMatrix};
use kmat_core::series::RationalMatrixFn;
use kmat_core::spectral::SpectralSampler;
use kmat_core::{Result, KERNEL_CUTOFF};
use num_complex::Complex64;

struct Outcome {
    pass: bool,
    lines: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            pass: true,
            lines: Vec::new(),
        }
    }

    fn le(&mut self, what: impl AsRef<str>, value: f64, tol: f64) {
        self.record(what, value <= tol, format!("{value:.3e} <= {tol:.0e}"));
    }

    fn ge(&mut self, what: impl AsRef<str>, value: f64, tol: f64) {
        self.record(what, value >= tol, format!("{value:.3e} >= {tol:.0e}"));
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, what: impl AsRef<str>, got: T, expected: T) {
        let ok = got == expected;
        self.record(what, ok, format!("{got:?} == {expected:?}"));
    }

    fn record(&mut self, what: impl AsRef<str>, ok: bool, detail: String) {
        self.pass &= ok;
        let mark = if ok { "ok  " } else { "FAIL" };
        self.lines
            .push(format!("    [{mark}] {}: {detail}", what.as_ref()));
    }

    fn note(&mut self, text: impl Into<String>) {
        self.lines.push(format!("    [info] {}", text.into()));
    }
}

fn max_ybe(r: &RMatrix, count: usize, seed: u64) -> Result<f64> {
    let mut s = SpectralSampler::new(seed);
    let mut worst = 0.0f64;
    for (u, v) in s.pairs(count) {
        worst = worst.max(ybe_residual(r, r, r, u, v)?);
    }
    Ok(worst)
}

fn max_bybe(k: &KMatrix, setup: &BoundarySetup, count: usize, seed: u64) -> Result<f64> {
    let mut s = SpectralSampler::new(seed);
    let mut worst = 0.0f64;
    for (u, v) in s.pairs(count) {
        worst = worst.max(bybe_residual(setup, k, u, v)?);
    }
    Ok(worst)
}

fn gamma(n: usize) -> Result<Complex64> {
    Ok(find_crossing(n, &SpectralSampler::new(5).pairs(20))?.gamma)
}

fn skew(n: usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    for b in 0..n / 2 {
        m[(2 * b, 2 * b + 1)] = re(1.0);
        m[(2 * b + 1, 2 * b)] = re(-1.0);
    }
    m
}

const SPLITS: [(usize, usize, usize); 3] = [(2, 1, 1), (3, 2, 1), (4, 2, 2)];

/// Every K-matrix of the reflection-equation suites with its setup and the
/// expected fixed-algebra dimension.
fn boundary_instances() -> Result<Vec<(String, KMatrix, BoundarySetup, usize)>> {
    let mut out = Vec::new();
    for (n, p, q) in SPLITS {
        for xi in [c64(0.0, 0.0), c64(0.7, 0.0), c64(1.0, 1.0)] {
            let k = diagonal_k(n, p, q, xi)?;
            let setup = BoundarySetup::yang_for(&k, None)?;
            out.push((
                format!("diag({n},{p},{q}) xi={xi}"),
                k,
                setup,
                p * p + q * q - 1,
            ));
        }
    }
    for (n, kappa, dim, tag) in [
        (2, eye(2), 1, "I"),
        (3, eye(3), 3, "I"),
        (2, skew(2), 3, "skew"),
        (4, skew(4), 10, "skew"),
    ] {
        let k = constant_twisted_k(n, kappa)?;
        let setup = BoundarySetup::yang_for(&k, Some(gamma(n)?))?;
        out.push((format!("twisted {tag} n={n}"), k, setup, dim));
    }
    Ok(out)
}

fn criterion1() -> Result<Outcome> {
    let mut o = Outcome::new();
    for n in 2..=5 {
        o.le(
            format!("YBE n={n}, 100 pairs"),
            max_ybe(&yang_r(n)?, 100, n as u64)?,
            1e-11,
        );
    }
    Ok(o)
}

fn criterion2() -> Result<Outcome> {
    let mut o = Outcome::new();
    let dir = Complex64::from_polar(1.0, 0.4);
    for n in 2..=4 {
        let r = yang_r(n)?;
        let (_, rep) = build_sl(n)?;
        let c12 = kmat_core::lie::split_casimir(&rep, &rep)?;
        let defect = |mag: f64| -> Result<f64> {
            let u = dir * mag;
            Ok(fro(&((r.evaluate(u)? - eye(n * n)) * u - &c12)))
        };
        let fitted = 1e2 * defect(1e2)?;
        for mag in [1e2, 1e3, 1e4] {
            // Allow 10% slack on the constant fitted at the first point.
            o.le(
                format!("n={n} |u|={mag:.0e}: |u|·defect / (1.1·C={fitted:.3e})"),
                mag * defect(mag)? / (1.1 * fitted),
                1.0,
            );
        }
        let s = r.expand(1)?;
        o.le(
            format!("n={n} order-1 coefficient vs split Casimir"),
            fro(&(s.coeff(1) - &c12)),
            1e-12,
        );
    }
    Ok(o)
}

fn criterion3() -> Result<Outcome> {
    let mut o = Outcome::new();
    for (label, k, setup, _) in boundary_instances()? {
        o.le(
            format!("{label}, 50 pairs"),
            max_bybe(&k, &setup, 50, 1)?,
            1e-10,
        );
    }
    Ok(o)
}

fn criterion4() -> Result<Outcome> {
    let mut o = Outcome::new();
    for (label, k, _, dim) in boundary_instances()? {
        let (rep1, rep2) = k.reps();
        let inv = extract_involution(&k.leading()?, rep1, rep2)?;
        o.le(
            format!("{label}: N-defect"),
            inv.orthogonality_residual,
            1e-10,
        );
        o.le(format!("{label}: |M^2 - I|"), inv.square_residual, 1e-10);
        o.le(
            format!("{label}: automorphism"),
            inv.automorphism_residual,
            1e-10,
        );
        o.eq(format!("{label}: fixed dim"), inv.plus_space.dim(), dim);
        let sym = residual_symmetry(&k, 7)?;
        o.eq(
            format!("{label}: residual symmetry dim"),
            sym.algebra.dim(),
            dim,
        );
        o.le(
            format!("{label}: principal angle"),
            symmetric_pair_check(&inv, &sym.algebra).distance,
            1e-8,
        );
    }
    Ok(o)
}

fn criterion5() -> Result<Outcome> {
    let mut o = Outcome::new();
    for (n, p, q) in SPLITS {
        let r = yang_r(n)?;
        let kappa = signature(p, q);
        let report = perturbative_solve(
            &kappa,
            &BoundarySetup::untwisted(&r),
            &SolveOptions::default(),
        )?;
        o.eq(
            format!("J({p},{q}) nullspace table"),
            report.nullspace_dims(),
            vec![1, 0, 0],
        );
        let (_, rep) = build_sl(n)?;
        let dir = flatten(&(rep.image(&aiii_center(&rep, p, q)?) * &kappa));
        let null = flatten(&report.orders[0].null_basis[0]);
        let angle = principal_angle(
            &CMat::from_column_slice(n * n, 1, null.as_slice()),
            &CMat::from_column_slice(n * n, 1, dir.as_slice()),
            KERNEL_CUTOFF,
        );
        o.le(
            format!("J({p},{q}) order-1 direction angle to rho(X0)J"),
            angle,
            1e-8,
        );
    }
    let r = yang_r(3)?;
    let report = perturbative_solve(
        &eye(3),
        &BoundarySetup::twisted(&r, gamma(3)?)?,
        &SolveOptions::default(),
    )?;
    o.eq(
        "twisted AI n=3 nullspace table",
        report.nullspace_dims(),
        vec![0, 0, 0],
    );
    Ok(o)
}

fn criterion6() -> Result<Outcome> {
    let mut o = Outcome::new();
    let a0 = c64(0.3, 0.0);
    let probes = SpectralSampler::new(8).pairs(20);
    for (n, p, q) in SPLITS {
        let (_, rep) = build_sl(n)?;
        let kt = ClassicalKappa::aiii(p, q, a0)?;
        let s = kt.expand(1)?;
        let j = signature(p, q);
        let x0 = rep.image(&aiii_center(&rep, p, q)?);
        let lead = fro(&(s.coeff(0) - &j)) + fro(&(s.coeff(1) - &x0 * &j * a0));
        o.le(
            format!("J({p},{q}): expansion J + (a0/u) rho(X0) J"),
            lead,
            1e-13,
        );
        let mut worst = 0.0f64;
        let mut truncated = 0.0f64;
        let tr = ClassicalKappa::aiii_truncated(p, q, a0)?;
        for &(u, v) in &probes {
            worst = worst.max(cbybe_residual(&kt, &rep, &rep, u, v)?);
            truncated = truncated.max(cbybe_residual(&tr, &rep, &rep, u, v)?);
        }
        o.le(format!("J({p},{q}) a0=0.3: cbYBE residual"), worst, 1e-10);
        o.note(format!(
            "J({p},{q}): two-term truncation alone leaves cbYBE residual {truncated:.3e}"
        ));

        let one = ClassicalKappa::aiii(p, q, re(1.0))?;
        let mut scaling = 0.0f64;
        for b in [re(0.5), re(2.0), c64(1.0, 1.0)] {
            let kb = ClassicalKappa::aiii(p, q, b)?;
            for &(u, _) in probes.iter().take(5) {
                scaling = scaling.max(fro(&(kb.evaluate(u)? - one.evaluate(u / b)?)));
            }
        }
        o.le(format!("J({p},{q}): scaling identity"), scaling, 1e-13);
    }
    for (n, kappa) in [(2, skew(2)), (3, eye(3)), (4, skew(4))] {
        let (_, rep) = build_sl(n)?;
        let report = classical_perturbative_solve(
            &kappa,
            &rep,
            &contragredient(&rep),
            &SolveOptions::default(),
        )?;
        o.eq(
            format!("semisimple fixed algebra n={n}: classical nullspaces"),
            report.nullspace_dims(),
            vec![0, 0, 0],
        );
    }
    Ok(o)
}

fn criterion7() -> Result<Outcome> {
    let mut o = Outcome::new();
    for (n, k) in [(2, 1), (4, 1), (4, 2), (5, 1), (5, 2)] {
        let km = nilpotent_k(n, k)?;
        let setup = BoundarySetup::yang_for(&km, None)?;
        o.le(
            format!("n={n} k={k}: bYBE"),
            max_bybe(&km, &setup, 50, 6)?,
            1e-10,
        );
        let mut unit_defect = 0.0f64;
        for u in SpectralSampler::new(9).pairs(10).into_iter().map(|p| p.0) {
            unit_defect =
                unit_defect.max(fro(&(km.evaluate(u)? * km.evaluate(-u)? + eye(n) / (u * u))));
        }
        o.le(format!("n={n} k={k}: unitarity"), unit_defect, 1e-12);
    }
    for (n, k, expected) in [(4, 1, 9), (5, 2, 10)] {
        let s = solvable_structure(n, k)?;
        let sym = residual_symmetry(&nilpotent_k(n, k)?, 7)?;
        let brute = centralizer(&build_sl(n)?.1, &jordan_kappa(n, k)).dim();
        o.eq(
            format!("n={n} k={k}: constructed count"),
            s.total_dim,
            expected,
        );
        o.eq(
            format!("n={n} k={k}: residual symmetry dim"),
            sym.algebra.dim(),
            expected,
        );
        o.eq(
            format!("n={n} k={k}: brute-force centralizer dim"),
            brute,
            expected,
        );
        o.record(
            format!("n={n} k={k}: bracket relations (integer)"),
            s.relations_hold(),
            format!("{} relations", s.relations.len()),
        );
        o.record(
            format!("n={n} k={k}: derived series, h2 abelian"),
            s.derived_series_ok && s.h2_abelian,
            String::new(),
        );
    }
    Ok(o)
}

fn gl2_boundary(rep: &kmat_core::lie::Representation, kappa: &CMat) -> BoundaryRep {
    let h = centralizer(rep, kappa);
    let images = (0..h.dim())
        .map(|a| rep.image(&h.vector(a)).view((0, 0), (2, 2)).into_owned())
        .collect();
    BoundaryRep { h, images }
}

/// `½c^(h,1)⊗1 + 2C^(h,1B)` times `κ ⊗ 1`.
fn constructed_k1(
    rep: &kmat_core::lie::Representation,
    kappa: &CMat,
    boundary: &BoundaryRep,
) -> Result<CMat> {
    let rc = restricted_casimir(rep, rep, &boundary.h)?;
    let m = boundary.images[0].nrows();
    let mut c1b = CMat::zeros(rep.d() * m, rep.d() * m);
    for a in 0..boundary.h.dim() {
        let mut z = CMat::zeros(m, m);
        for b in 0..boundary.h.dim() {
            z += &boundary.images[b] * rc.metric_inv[(a, b)];
        }
        c1b += kron(&rep.image(&boundary.h.vector(a)), &z);
    }
    Ok((kron(&rc.quadratic, &eye(m)) * re(0.5) + c1b * re(2.0)) * kron(kappa, &eye(m)))
}

fn criterion8() -> Result<Outcome> {
    let mut o = Outcome::new();
    let (_, rep) = build_sl(3)?;
    let kappa = signature(2, 1);
    let boundary = gl2_boundary(&rep, &kappa);
    let k1 = constructed_k1(&rep, &kappa, &boundary)?;
    let report = k1_structure_check(&rep, &kappa, &boundary, &k1)?;
    o.le(
        "gl(2)-block boundary: u^4 identity residual",
        report.x2a_residual,
        1e-10,
    );
    let doubled = diagonal_k(3, 2, 1, c64(0.7, 0.0))?.tensor_identity(2)?;
    let irr = irreducibility_check(&doubled, 7)?;
    o.eq("K_scalar ⊗ I2 irreducible", irr.irreducible, false);
    let mut all = true;
    let mut count = 0;
    for (_, k, _, _) in boundary_instances()? {
        all &= irreducibility_check(&k, 7)?.irreducible;
        count += 1;
    }
    for (n, k) in [(2, 1), (4, 1), (5, 2)] {
        all &= irreducibility_check(&nilpotent_k(n, k)?, 7)?.irreducible;
        count += 1;
    }
    o.record(
        "every d_B=1 instance irreducible",
        all,
        format!("{count} instances"),
    );
    Ok(o)
}

fn criterion9() -> Result<Outcome> {
    let mut o = Outcome::new();

    let n = 2;
    let r = yang_r(n)?;
    let mut num = r.func().numerator().to_vec();
    // R = (1 − 1/(2n²u))(I + c P) with c = 1/(2nu) + 0.01, over the denominator u².
    let p = kmat_core::linalg::swap_operator(n, n);
    num[2] += &p * re(0.01);
    num[1] -= &p * re(0.01 / (2.0 * (n * n) as f64));
    let func = RationalMatrixFn::new(num, r.func().denominator().to_vec(), "corrupt")?;
    let (r1, r2) = r.reps();
    let bad_r = RMatrix::from_parts(func, r1.clone(), r2.clone(), false)?;
    o.ge("corrupted R: YBE residual", max_ybe(&bad_r, 10, 1)?, 1e-4);

    for n in [2, 3] {
        let g = gamma(n)?;
        let k = constant_twisted_k(n, eye(n))?;
        let wrong = BoundarySetup::yang_for(&k, Some(g + 0.1))?;
        o.ge(
            format!("n={n} wrong crossing (found+0.1): kappa=I twisted bYBE residual"),
            max_bybe(&k, &wrong, 20, 5)?,
            1e-4,
        );
        o.note(format!(
            "n={n}: crossing objective at found+0.1 = {:.3e}",
            crossing_objective_at(n, g + 0.1)?
        ));
    }

    let k = diagonal_k(3, 2, 1, c64(0.7, 0.0))?;
    let setup = BoundarySetup::yang_for(&k, None)?;
    let one_sided = diag(&[c64(0.7, 0.0), c64(0.7, 0.0), c64(0.8, 0.0)]);
    let (rep1, rep2) = k.reps();
    let func = RationalMatrixFn::new(
        vec![one_sided, k.func().numerator()[1].clone()],
        k.func().denominator().to_vec(),
        "corrupt",
    )?;
    let bad_k = KMatrix::new(func, rep1.clone(), rep2.clone(), 1, KFamily::Custom)?;
    o.ge(
        "one-sided xi: bYBE residual",
        max_bybe(&bad_k, &setup, 10, 3)?,
        1e-4,
    );

    let (alg, rep) = build_sl(3)?;
    let not_solution = unit(3, 0, 1) + unit(3, 1, 0) + unit(3, 2, 2) * re(2.0);
    let res = cbybe_residual(
        &ClassicalKappa::constant(not_solution),
        &rep,
        &rep,
        c64(0.9, 0.2),
        c64(-0.3, 0.7),
    )?;
    o.ge("E12+E21+2E33: cbYBE residual", res, 1e-4);

    let kappa = signature(2, 1);
    let boundary = gl2_boundary(&rep, &kappa);
    let k1 = constructed_k1(&rep, &kappa, &boundary)?;
    let e13 = alg
        .labels()
        .iter()
        .position(|l| l == "E13")
        .expect("E13 label");
    let bad = &k1 + kron(&(rep.y(e13) * &kappa), &eye(2));
    o.ge(
        "f-direction added to k1: decomposition defect",
        k1_structure_check(&rep, &kappa, &boundary, &bad)?.decomposition_defect,
        1e-4,
    );

    let inv = extract_involution(&kappa, &rep, &rep)?;
    let hs: Vec<usize> = (0..alg.dim())
        .filter(|&i| alg.labels()[i].starts_with('H'))
        .collect();
    let cartan = CMat::from_fn(alg.dim(), hs.len(), |i, j| {
        if i == hs[j] {
            re(1.0)
        } else {
            re(0.0)
        }
    });
    let report = symmetric_pair_check(&inv, &SubalgebraBasis::new(alg, cartan)?);
    o.ge(
        "Cartan vs J(2,1) fixed algebra: distance",
        report.distance,
        1e-4,
    );
    Ok(o)
}

type Criterion = fn() -> Result<Outcome>;

fn main() {
    let criteria: [(&str, Criterion); 9] = [
        ("Yang-Baxter suite", criterion1),
        ("quasi-classical expansion", criterion2),
        ("reflection-equation suites", criterion3),
        ("involution extraction", criterion4),
        ("uniqueness dichotomy", criterion5),
        ("classical subsystem", criterion6),
        ("non-quasi-classical family", criterion7),
        ("boundary-space structure", criterion8),
        ("negative controls", criterion9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (pass, lines) = match run() {
            Ok(o) => (o.pass, o.lines),
            Err(e) => (false, vec![format!("    [FAIL] error: {e}")]),
        };
        println!(
            "criterion {}: {} ({name})",
            i + 1,
            if pass { "PASS" } else { "FAIL" }
        );
        for line in lines {
            println!("{line}");
        }
        if !pass {
            failed += 1;
        }
    }
    println!("acceptance: {} of 9 criteria pass", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
