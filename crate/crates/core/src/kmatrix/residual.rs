use num_complex::Complex64;

use super::{BoundarySetup, ClassicalKappa, KMatrix};
use crate::error::{Error, Result};
use crate::lie::{split_casimir, Representation};
use crate::linalg::{c64, commutator, embed, eye, fro, kron, CMat, CVec};
use crate::rmatrix::RMatrix;

fn named<T>(r: Result<T>, name: &str) -> Result<T> {
    r.map_err(|e| match e {
        Error::Pole { u, .. } => Error::Pole {
            factor: name.to_string(),
            u,
        },
        e => e,
    })
}

fn eval_r(r: &RMatrix, u: Complex64, name: &str) -> Result<CMat> {
    named(r.evaluate(u), name)
}

/// Reflection-equation defect matrix on `C^d ⊗ C^d ⊗ C^{d_B}`:
/// `R12^(11)(u−v) K13(u) R21^(12)(u+v) K23(v) − K23(v) R12^(12)(u+v) K13(u) R21^(22)(u−v)`.
pub fn bybe_defect<F>(
    setup: &BoundarySetup,
    kfn: F,
    d: usize,
    d_b: usize,
    u: Complex64,
    v: Complex64,
) -> Result<CMat>
where
    F: Fn(Complex64) -> Result<CMat>,
{
    if setup.r11.dims() != (d, d) || setup.r12.dims() != (d, d) || setup.r22.dims() != (d, d) {
        return Err(Error::ShapeMismatch(
            "R-matrix legs do not match the K-matrix dimension".into(),
        ));
    }
    let dims = [d, d, d_b];
    let r11 = eval_r(&setup.r11, u - v, "R11(u-v)")?;
    let r12 = eval_r(&setup.r12, u + v, "R12(u+v)")?;
    let r22 = eval_r(&setup.r22, u - v, "R22(u-v)")?;
    let ku = named(kfn(u), "K(u)")?;
    let kv = named(kfn(v), "K(v)")?;
    if ku.shape() != (d * d_b, d * d_b) {
        return Err(Error::ShapeMismatch(format!(
            "K(u) is {:?}, expected {}×{}",
            ku.shape(),
            d * d_b,
            d * d_b
        )));
    }
    let k13 = embed(&ku, &[0, 2], &dims);
    let k23 = embed(&kv, &[1, 2], &dims);
    let lhs = embed(&r11, &[0, 1], &dims) * &k13 * embed(&r12, &[1, 0], &dims) * &k23;
    let rhs = &k23 * embed(&r12, &[0, 1], &dims) * &k13 * embed(&r22, &[1, 0], &dims);
    Ok(lhs - rhs)
}

/// Frobenius norm of the reflection-equation defect for `k`.
pub fn bybe_residual(
    setup: &BoundarySetup,
    k: &KMatrix,
    u: Complex64,
    v: Complex64,
) -> Result<f64> {
    bybe_residual_with(setup, |x| k.evaluate(x), k.d(), k.d_b(), u, v)
}

pub fn bybe_residual_with<F>(
    setup: &BoundarySetup,
    kfn: F,
    d: usize,
    d_b: usize,
    u: Complex64,
    v: Complex64,
) -> Result<f64>
where
    F: Fn(Complex64) -> Result<CMat>,
{
    Ok(fro(&bybe_defect(setup, kfn, d, d_b, u, v)?))
}

/// The classical reflection-equation defect
/// `(C11 κ̃1(u)κ̃2(v) − κ̃1(u)κ̃2(v) C22)/(u−v) + (κ̃1(u) C21 κ̃2(v) − κ̃2(v) C12 κ̃1(u))/(u+v)`,
/// with `Cij` the split Casimir of `ρi ⊗ ρj`.
pub fn cbybe_defect(
    kt: &ClassicalKappa,
    rep1: &Representation,
    rep2: &Representation,
    u: Complex64,
    v: Complex64,
) -> Result<CMat> {
    let diff = u - v;
    let sum = u + v;
    if diff.norm() < 1e-14 * (1.0 + u.norm()) {
        return Err(Error::Pole {
            factor: "1/(u-v)".into(),
            u,
        });
    }
    if sum.norm() < 1e-14 * (1.0 + u.norm()) {
        return Err(Error::Pole {
            factor: "1/(u+v)".into(),
            u,
        });
    }
    let c11 = split_casimir(rep1, rep1)?;
    let c22 = split_casimir(rep2, rep2)?;
    let c12 = split_casimir(rep1, rep2)?;
    let c21 = split_casimir(rep2, rep1)?;
    let d = rep1.d();
    let id = eye(d);
    let k1 = kron(&named(kt.evaluate(u), "kappa(u)")?, &id);
    let k2 = kron(&id, &named(kt.evaluate(v), "kappa(v)")?);
    let kk = &k1 * &k2;
    let first = (&c11 * &kk - &kk * &c22) / diff;
    let second = (&k1 * &c21 * &k2 - &k2 * &c12 * &k1) / sum;
    Ok(first + second)
}

pub fn cbybe_residual(
    kt: &ClassicalKappa,
    rep1: &Representation,
    rep2: &Representation,
    u: Complex64,
    v: Complex64,
) -> Result<f64> {
    Ok(fro(&cbybe_defect(kt, rep1, rep2, u, v)?))
}

const CONSTANT_PROBES: [(Complex64, Complex64); 2] = [
    (c64(0.7, 0.3), c64(-0.4, 1.1)),
    (c64(1.3, -0.2), c64(0.5, 0.6)),
];

/// Largest classical reflection defect of a constant `κ` over fixed probe
/// points; zero exactly when both constant constraints hold.
pub fn constant_cbybe_residual(
    kappa: &CMat,
    rep1: &Representation,
    rep2: &Representation,
) -> Result<f64> {
    let kt = ClassicalKappa::constant(kappa.clone());
    let mut worst = 0.0f64;
    for &(u, v) in &CONSTANT_PROBES {
        worst = worst.max(cbybe_residual(&kt, rep1, rep2, u, v)?);
    }
    Ok(worst)
}

/// `‖(ρ1(X)⊗1) K(u) − K(u) (ρ2(X)⊗1) + [1⊗ρ_B(X), K(u)]‖`.
pub fn symmetry_residual(k: &KMatrix, x: &CVec, rho_b_x: &CMat, u: Complex64) -> Result<f64> {
    let (rep1, rep2) = k.reps();
    let m = k.d_b();
    if rho_b_x.shape() != (m, m) {
        return Err(Error::ShapeMismatch(format!(
            "boundary image must be {m}×{m}"
        )));
    }
    let idb = eye(m);
    let ku = k.evaluate(u)?;
    let a = kron(&rep1.image(x), &idb);
    let b = kron(&rep2.image(x), &idb);
    let z = kron(&eye(k.d()), rho_b_x);
    Ok(fro(&(&a * &ku - &ku * &b + commutator(&z, &ku))))
}

/// Comparison of the first-order term of the scaled reflection equation with
/// the classical defect of `κ`.
#[derive(Debug, Clone, Copy)]
pub struct ClassicalLimit {
    /// Richardson-extrapolated `x → 0` limit of `defect(u/x, v/x)/x`, compared
    /// with the classical defect, relative to the larger of the two norms
    /// (absolute when both are below one).
    pub difference: f64,
    pub classical_norm: f64,
    pub limit_norm: f64,
}

/// Finite-difference check at `x ∈ {1e-2, 1e-3}` that the `O(x)` part of the
/// reflection equation at `(u/x, v/x)` is the classical defect of `κ`.
pub fn classical_limit_check(
    setup: &BoundarySetup,
    k: &KMatrix,
    u: Complex64,
    v: Complex64,
) -> Result<ClassicalLimit> {
    if k.d_b() != 1 {
        return Err(Error::InvalidArgument(
            "classical-limit check is for scalar boundaries".into(),
        ));
    }
    let scaled = |x: f64| -> Result<CMat> {
        Ok(bybe_defect(setup, |w| k.evaluate(w), k.d(), 1, u / x, v / x)? / Complex64::new(x, 0.0))
    };
    let (h1, h2) = (1e-2, 1e-3);
    let limit = (scaled(h2)? * Complex64::new(h1 / h2, 0.0) - scaled(h1)?)
        / Complex64::new(h1 / h2 - 1.0, 0.0);
    let (rep1, rep2) = k.reps();
    let classical = cbybe_defect(&ClassicalKappa::constant(k.leading()?), rep1, rep2, u, v)?;
    let (cn, ln) = (fro(&classical), fro(&limit));
    Ok(ClassicalLimit {
        difference: fro(&(limit - classical)) / cn.max(ln).max(1.0),
        classical_norm: cn,
        limit_norm: ln,
    })
}
