use num_complex::Complex64;

use super::{KFamily, KMatrix};
use crate::error::{Error, Result};
use crate::lie::{build_sl, contragredient, Representation};
use crate::linalg::{fro, inverse, re, CMat, CVec};
use crate::series::{MatrixSeries, RationalMatrixFn};

/// `J = diag(I_p, −I_q)`.
pub fn signature(p: usize, q: usize) -> CMat {
    CMat::from_fn(p + q, p + q, |i, j| {
        if i != j {
            re(0.0)
        } else if i < p {
            re(1.0)
        } else {
            re(-1.0)
        }
    })
}

/// `Σ_{a<k} E_{2a+1, 2a+2}` (one-based): `k` nilpotent Jordan blocks of size two.
pub fn jordan_kappa(n: usize, k: usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    for a in 0..k {
        m[(2 * a, 2 * a + 1)] = re(1.0);
    }
    m
}

/// Coordinates of `X₀ = diag(q I_p, −p I_q)/√(pqn)`, the centre of
/// `s(gl(p) ⊕ gl(q))` normalized to `Tr ρ(X₀)² = 1`.
pub fn aiii_center(rep: &Representation, p: usize, q: usize) -> Result<CVec> {
    let n = p + q;
    if rep.d() != n || p == 0 || q == 0 {
        return Err(Error::InvalidArgument(format!(
            "centre of s(gl({p})+gl({q})) needs a {n}-dimensional rep"
        )));
    }
    let s = ((p * q * n) as f64).sqrt();
    let x0 = CMat::from_fn(n, n, |i, j| {
        if i != j {
            re(0.0)
        } else if i < p {
            re(q as f64 / s)
        } else {
            re(-(p as f64) / s)
        }
    });
    let (coords, rest) = rep.decompose(&x0)?;
    if fro(&rest) > 1e-12 {
        return Err(Error::InvalidArgument(
            "X₀ is not in the image of the representation".into(),
        ));
    }
    Ok(coords)
}

fn check_split(n: usize, p: usize, q: usize) -> Result<()> {
    if p + q != n || p == 0 || q == 0 {
        return Err(Error::InvalidArgument(format!(
            "need p + q = n with p, q ≥ 1; got p={p}, q={q}, n={n}"
        )));
    }
    Ok(())
}

/// `K(u) = (u J + ξ I)/u`, i.e. `diag((1+ξ/u) I_p, (−1+ξ/u) I_q)`.
pub fn diagonal_k(n: usize, p: usize, q: usize, xi: Complex64) -> Result<KMatrix> {
    check_split(n, p, q)?;
    let (_, rep) = build_sl(n)?;
    diagonal_k_on(&rep, p, q, xi)
}

pub fn diagonal_k_on(rep: &Representation, p: usize, q: usize, xi: Complex64) -> Result<KMatrix> {
    check_split(rep.d(), p, q)?;
    let n = rep.d();
    let func = RationalMatrixFn::new(
        vec![CMat::identity(n, n) * xi, signature(p, q)],
        vec![re(0.0), re(1.0)],
        format!("diag:sl({n}):{p},{q}"),
    )?;
    Ok(KMatrix::new(
        func,
        rep.clone(),
        rep.clone(),
        1,
        KFamily::Diagonal { p, q },
    )?
    .with_param("xi", xi))
}

/// Constant `K = κ` with `κᵀ = ±κ`, paired with the contragredient.
pub fn constant_twisted_k(n: usize, kappa: CMat) -> Result<KMatrix> {
    if kappa.shape() != (n, n) {
        return Err(Error::ShapeMismatch(format!("κ must be {n}×{n}")));
    }
    if inverse(&kappa).is_none() {
        return Err(Error::NotQuasiClassical {
            rcond: crate::linalg::rcond(&kappa),
        });
    }
    let scale = fro(&kappa);
    let sym = fro(&(&kappa - kappa.transpose())) <= 1e-12 * scale;
    let skew = fro(&(&kappa + kappa.transpose())) <= 1e-12 * scale;
    if !sym && !skew {
        return Err(Error::InvalidArgument(
            "twisted constant κ must be symmetric or skew-symmetric".into(),
        ));
    }
    if skew && n % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "skew-symmetric κ needs even n, got {n}"
        )));
    }
    let (_, rep) = build_sl(n)?;
    let cg = contragredient(&rep);
    let tag = if sym { "sym" } else { "skew" };
    let func = RationalMatrixFn::constant(kappa, format!("twist-const:sl({n}):{tag}"));
    KMatrix::new(func, rep, cg, 1, KFamily::ConstantTwisted)
}

/// `K(u) = κ + I/u` with `κ` made of `k` nilpotent Jordan blocks.
pub fn nilpotent_k(n: usize, k: usize) -> Result<KMatrix> {
    if 2 * k > n || k == 0 {
        return Err(Error::InvalidArgument(format!(
            "need 1 ≤ k and 2k ≤ n; got k={k}, n={n}"
        )));
    }
    let (_, rep) = build_sl(n)?;
    let func = RationalMatrixFn::new(
        vec![CMat::identity(n, n), jordan_kappa(n, k)],
        vec![re(0.0), re(1.0)],
        format!("nilpotent:sl({n}):k={k}"),
    )?;
    Ok(
        KMatrix::new(func, rep.clone(), rep, 1, KFamily::Nilpotent { k })?
            .with_param("k", re(k as f64)),
    )
}

/// `K(u) = Σ_r c⁽ʳ⁾ u^(−r)` from a finite series, read as an exact rational function.
pub fn custom_k(
    series: &MatrixSeries,
    rep1: Representation,
    rep2: Representation,
) -> Result<KMatrix> {
    let r = series.order();
    let num: Vec<CMat> = (0..=r).map(|i| series.coeff(r - i).clone()).collect();
    let mut den = vec![re(0.0); r + 1];
    den[r] = re(1.0);
    let d_b = series.shape().0 / rep1.d().max(1);
    let func = RationalMatrixFn::new(num, den, "custom")?;
    KMatrix::new(func, rep1, rep2, d_b, KFamily::Custom)
}

/// A spectral-parameter-dependent classical `κ̃(u)`.
#[derive(Debug, Clone)]
pub struct ClassicalKappa {
    func: RationalMatrixFn,
    a0: Option<Complex64>,
}

impl ClassicalKappa {
    pub fn constant(kappa: CMat) -> Self {
        ClassicalKappa {
            func: RationalMatrixFn::constant(kappa, "kappa"),
            a0: None,
        }
    }

    pub fn from_fn(func: RationalMatrixFn) -> Self {
        ClassicalKappa { func, a0: None }
    }

    /// The exact one-parameter solution for `κ = J(p,q)`,
    /// `κ̃(u) = n (u J + c) / (n u + c (p − q))`, with `c` fixed so that
    /// `κ̃(u) = J + (a₀/u) ρ(X₀) J + O(u⁻²)`.
    pub fn aiii(p: usize, q: usize, a0: Complex64) -> Result<Self> {
        let n = p + q;
        check_split(n, p, q)?;
        let nf = n as f64;
        let c = a0 * (nf.sqrt() / (2.0 * ((p * q) as f64).sqrt()));
        let num = vec![CMat::identity(n, n) * (c * nf), signature(p, q) * re(nf)];
        let den = vec![c * (p as f64 - q as f64), re(nf)];
        let func = RationalMatrixFn::new(num, den, format!("kappa-tilde:aiii({p},{q})"))?;
        Ok(ClassicalKappa { func, a0: Some(a0) })
    }

    /// The two-term truncation `J + (a₀/u) ρ(X₀) J`.
    pub fn aiii_truncated(p: usize, q: usize, a0: Complex64) -> Result<Self> {
        let n = p + q;
        check_split(n, p, q)?;
        let (_, rep) = build_sl(n)?;
        let x0 = rep.image(&aiii_center(&rep, p, q)?);
        let j = signature(p, q);
        let func = RationalMatrixFn::new(
            vec![&x0 * &j * a0, j],
            vec![re(0.0), re(1.0)],
            "kappa-tilde:truncated",
        )?;
        Ok(ClassicalKappa { func, a0: Some(a0) })
    }

    pub fn func(&self) -> &RationalMatrixFn {
        &self.func
    }

    pub fn a0(&self) -> Option<Complex64> {
        self.a0
    }

    pub fn evaluate(&self, u: Complex64) -> Result<CMat> {
        self.func.evaluate(u)
    }

    pub fn expand(&self, order: usize) -> Result<MatrixSeries> {
        self.func.expand(order)
    }
}
