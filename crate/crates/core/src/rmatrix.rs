//! Rational R-matrices for `sl(n)` and Yang-Baxter residuals.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kmatrix::{bybe_residual, constant_twisted_k, BoundarySetup};
use crate::lie::{build_sl, contragredient, split_casimir, Representation};
use crate::linalg::{c64, commutator, embed, eye, fro, partial_transpose, re, swap_operator, CMat};
use crate::series::{MatrixSeries, RationalMatrixFn};

/// `R(u)` on `C^{d1} ⊗ C^{d2}` together with the representations of its legs.
#[derive(Debug, Clone)]
pub struct RMatrix {
    func: RationalMatrixFn,
    rep1: Representation,
    rep2: Representation,
    casimir: CMat,
    twisted: bool,
    crossing: Option<Complex64>,
}

impl RMatrix {
    /// Wraps a rational function acting on `rep1 ⊗ rep2`.
    pub fn from_parts(
        func: RationalMatrixFn,
        rep1: Representation,
        rep2: Representation,
        twisted: bool,
    ) -> Result<Self> {
        let d = rep1.d() * rep2.d();
        if func.shape() != (d, d) {
            return Err(Error::ShapeMismatch(format!(
                "R-matrix {:?} on a {d}-dimensional product",
                func.shape()
            )));
        }
        let casimir = split_casimir(&rep1, &rep2)?;
        Ok(RMatrix {
            func,
            rep1,
            rep2,
            casimir,
            twisted,
            crossing: None,
        })
    }

    pub fn func(&self) -> &RationalMatrixFn {
        &self.func
    }

    pub fn reps(&self) -> (&Representation, &Representation) {
        (&self.rep1, &self.rep2)
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rep1.d(), self.rep2.d())
    }

    /// Split Casimir of the leg representations.
    pub fn casimir(&self) -> &CMat {
        &self.casimir
    }

    pub fn twisted(&self) -> bool {
        self.twisted
    }

    pub fn crossing(&self) -> Option<Complex64> {
        self.crossing
    }

    pub fn evaluate(&self, u: Complex64) -> Result<CMat> {
        self.func.evaluate(u)
    }

    pub fn expand(&self, order: usize) -> Result<MatrixSeries> {
        self.func.expand(order)
    }

    /// The same R-matrix read in `ρ1_cg ⊗ ρ2_cg`: every coefficient transposed.
    pub fn full_transpose(&self) -> Result<Self> {
        let func = self
            .func
            .map_linear(|m| m.transpose())?
            .with_meta(format!("{}^T", self.func.meta()));
        let mut out = Self::from_parts(
            func,
            contragredient(&self.rep1),
            contragredient(&self.rep2),
            self.twisted,
        )?;
        out.crossing = self.crossing;
        Ok(out)
    }

    /// Same operator with a scalar dressing `p(u)/q(u)`.
    pub fn redress(&self, p: &[Complex64], q: &[Complex64]) -> Result<Self> {
        let mut out = self.clone();
        out.func = self.func.scale_rational(p, q)?;
        Ok(out)
    }
}

/// `R(u) = (1 − 1/(2n²u)) (I + P/(2nu))` on the defining representation of
/// `sl(n)`, stored as `N(u)/u²`.
pub fn yang_r(n: usize) -> Result<RMatrix> {
    let (_, rep) = build_sl(n)?;
    yang_r_on(&rep)
}

/// Yang's R-matrix on `ρ ⊗ ρ` for the defining representation `ρ` of `sl(n)`.
pub fn yang_r_on(rep: &Representation) -> Result<RMatrix> {
    let n = rep.d();
    if n < 2 {
        return Err(Error::InvalidDimension(format!(
            "sl(n) needs n ≥ 2, got {n}"
        )));
    }
    let nf = n as f64;
    let p = swap_operator(n, n);
    let id = eye(n * n);
    let num = vec![
        &p * re(-1.0 / (4.0 * nf * nf * nf)),
        &p * re(1.0 / (2.0 * nf)) - &id * re(1.0 / (2.0 * nf * nf)),
        id,
    ];
    let func = RationalMatrixFn::new(
        num,
        vec![re(0.0), re(0.0), re(1.0)],
        format!("yang:sl({n})"),
    )?;
    RMatrix::from_parts(func, rep.clone(), rep.clone(), false)
}

fn eval_named(r: &RMatrix, u: Complex64, name: &str) -> Result<CMat> {
    r.evaluate(u).map_err(|e| match e {
        Error::Pole { u, .. } => Error::Pole {
            factor: name.to_string(),
            u,
        },
        e => e,
    })
}

/// `‖R12(u) R13(u+v) R23(v) − R23(v) R13(u+v) R12(u)‖_F`.
pub fn ybe_residual(
    r12: &RMatrix,
    r13: &RMatrix,
    r23: &RMatrix,
    u: Complex64,
    v: Complex64,
) -> Result<f64> {
    let (a, b) = r12.dims();
    if r13.dims() != (a, r23.dims().1) || r23.dims().0 != b {
        return Err(Error::ShapeMismatch(
            "incompatible leg dimensions for the Yang-Baxter equation".into(),
        ));
    }
    let dims = [a, b, r23.dims().1];
    let x12 = embed(&eval_named(r12, u, "R12(u)")?, &[0, 1], &dims);
    let x13 = embed(&eval_named(r13, u + v, "R13(u+v)")?, &[0, 2], &dims);
    let x23 = embed(&eval_named(r23, v, "R23(v)")?, &[1, 2], &dims);
    Ok(fro(&(&x12 * &x13 * &x23 - &x23 * &x13 * &x12)))
}

/// `R̄(u) = R(Γ − u)^{T₁}`, acting on `ρ1_cg ⊗ ρ2`.
pub fn crossed_r(r: &RMatrix, gamma: Complex64) -> Result<RMatrix> {
    if r.twisted {
        return Err(Error::InvalidArgument(
            "crossing applies to untwisted R-matrices".into(),
        ));
    }
    let dims = [r.rep1.d(), r.rep2.d()];
    let func = r
        .func
        .substitute_affine(gamma, re(-1.0))
        .map_linear(|m| partial_transpose(m, &dims, 0))?
        .with_meta(format!("{}:crossed", r.func.meta()));
    let mut out = RMatrix::from_parts(func, contragredient(&r.rep1), r.rep2.clone(), true)?;
    out.crossing = Some(gamma);
    Ok(out)
}

/// `R(u) · P R(−u) P = s(u) I`; returns `s` and the off-scalar defect.
pub fn unitarity_defect(r: &RMatrix, u: Complex64) -> Result<(Complex64, f64)> {
    let (a, b) = r.dims();
    let p = swap_operator(a, b);
    let prod = r.evaluate(u)? * &p * r.evaluate(-u)? * p.transpose();
    let s = prod.trace() / re((a * b) as f64);
    Ok((s, fro(&(prod - eye(a * b) * s))))
}

/// Crossed unitarity `R̄(u)R̄(−u) / s − I`, whose vanishing pins the
/// crossing parameter.
fn crossed_unitarity_vector(base: &RMatrix, gamma: Complex64, u: Complex64) -> Result<CMat> {
    let rb = crossed_r(base, gamma)?;
    let prod = rb.evaluate(u)? * rb.evaluate(-u)?;
    let d = prod.nrows();
    let s = prod.trace() / re(d as f64);
    Ok(prod / s - eye(d))
}

/// Result of the crossing-parameter search.
#[derive(Debug, Clone)]
pub struct Crossing {
    pub gamma: Complex64,
    /// Crossed-unitarity defect at `gamma`.
    pub objective: f64,
    /// Largest twisted reflection residual for `κ = I` at the verification points.
    pub bybe_residual: f64,
    /// Interior grid points whose objective is a strict local minimum.
    pub local_minima: Vec<f64>,
    /// Distinct zeros of the objective reached by refining from each local minimum.
    pub roots: Vec<Complex64>,
}

const CROSSING_PROBES: [Complex64; 2] = [c64(0.37, 0.61), c64(1.3, -0.4)];

/// Crossed-unitarity defect of Yang's `R` for `sl(n)` at a trial `Γ`.
pub fn crossing_objective_at(n: usize, gamma: Complex64) -> Result<f64> {
    Ok(crossing_objective(&yang_r(n)?, gamma))
}

fn crossing_objective(base: &RMatrix, gamma: Complex64) -> f64 {
    CROSSING_PROBES
        .iter()
        .map(|&u| {
            crossed_unitarity_vector(base, gamma, u)
                .map(|m| fro(&m))
                .unwrap_or(f64::INFINITY)
        })
        .fold(0.0, f64::max)
}

/// Searches `Γ` on the grid `[−3, 3]` with step `1/8`, refines with
/// Gauss-Newton on the crossed-unitarity defect, and verifies the twisted
/// reflection equation for `κ = I` at `verify` sample pairs.
pub fn find_crossing(n: usize, verify: &[(Complex64, Complex64)]) -> Result<Crossing> {
    let base = yang_r(n)?;
    let grid: Vec<f64> = (-24..=24).map(|i| i as f64 / 8.0).collect();
    let values: Vec<f64> = grid
        .iter()
        .map(|&g| crossing_objective(&base, re(g)))
        .collect();
    let landscape = || {
        grid.iter()
            .zip(&values)
            .map(|(g, v)| format!("gamma={g:+.3} objective={v:.3e}"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let local_minima: Vec<f64> = (0..grid.len())
        .filter(|&i| {
            i > 0
                && i + 1 < grid.len()
                && values[i].is_finite()
                && values[i] < values[i - 1]
                && values[i] < values[i + 1]
        })
        .map(|i| grid[i])
        .collect();
    let start = grid
        .iter()
        .zip(&values)
        .filter(|(_, v)| v.is_finite())
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(g, _)| *g)
        .ok_or_else(|| Error::CrossingNotFound {
            landscape: landscape(),
        })?;

    let gamma = refine_crossing(&base, re(start));
    let objective = crossing_objective(&base, gamma);
    if !(objective <= 1e-10) || gamma.norm() > 3.0 + 1e-9 {
        return Err(Error::CrossingNotFound {
            landscape: landscape(),
        });
    }
    let setup = BoundarySetup::twisted(&base, gamma)?;
    let k = constant_twisted_k(n, eye(n))?;
    let mut worst = 0.0f64;
    for &(u, v) in verify {
        worst = worst.max(bybe_residual(&setup, &k, u, v)?);
    }
    let mut roots: Vec<Complex64> = Vec::new();
    for &g in &local_minima {
        let r = refine_crossing(&base, re(g));
        if crossing_objective(&base, r) <= 1e-10 && roots.iter().all(|x| (x - r).norm() > 1e-6) {
            roots.push(r);
        }
    }
    Ok(Crossing {
        gamma,
        objective,
        bybe_residual: worst,
        local_minima,
        roots,
    })
}

fn refine_crossing(base: &RMatrix, mut gamma: Complex64) -> Complex64 {
    let stack = |g: Complex64| -> Option<Vec<Complex64>> {
        let mut out = Vec::new();
        for &u in &CROSSING_PROBES {
            out.extend(crossed_unitarity_vector(base, g, u).ok()?.iter().copied());
        }
        Some(out)
    };
    for _ in 0..30 {
        let Some(r) = stack(gamma) else { break };
        let norm: f64 = r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-15 {
            break;
        }
        // The residual is holomorphic in Γ, so a complex central difference
        // gives its derivative.
        let h = 1e-6;
        let (Some(rp), Some(rm)) = (stack(gamma + h), stack(gamma - h)) else {
            break;
        };
        let jac: Vec<Complex64> = rp
            .iter()
            .zip(&rm)
            .map(|(a, b)| (a - b) / (2.0 * h))
            .collect();
        let jj: f64 = jac.iter().map(|z| z.norm_sqr()).sum();
        if jj == 0.0 {
            break;
        }
        let jr: Complex64 = jac.iter().zip(&r).map(|(j, x)| j.conj() * x).sum();
        let step = jr / jj;
        gamma -= step;
        if step.norm() < 1e-15 {
            break;
        }
    }
    gamma
}

/// `r(u) = C/u`.
pub fn classical_r(rep1: &Representation, rep2: &Representation) -> Result<RationalMatrixFn> {
    let c = split_casimir(rep1, rep2)?;
    RationalMatrixFn::new(vec![c], vec![re(0.0), re(1.0)], "classical-r")
}

/// `‖[r12(u), r13(u+v)] + [r12(u), r23(v)] + [r13(u+v), r23(v)]‖_F`.
pub fn cybe_residual(
    r12: &RationalMatrixFn,
    r13: &RationalMatrixFn,
    r23: &RationalMatrixFn,
    dims: [usize; 3],
    u: Complex64,
    v: Complex64,
) -> Result<f64> {
    let x12 = embed(&r12.evaluate(u)?, &[0, 1], &dims);
    let x13 = embed(&r13.evaluate(u + v)?, &[0, 2], &dims);
    let x23 = embed(&r23.evaluate(v)?, &[1, 2], &dims);
    Ok(fro(&(commutator(&x12, &x13)
        + commutator(&x12, &x23)
        + commutator(&x13, &x23))))
}
