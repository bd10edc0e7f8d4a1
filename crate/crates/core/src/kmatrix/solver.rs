//! Order-by-order solution of the reflection equation for `K(u) = Σ k⁽ʳ⁾ u^(−r)`.
//!
//! Scaling `u → u/x`, `v → v/x`, the `x^m` coefficient of the reflection
//! equation is
//! `Σ_{a+b+c+d=m} u^(−a) v^(−b) (u−v)^(−c) (u+v)^(−d) O(a,b,c,d)` with
//! `O = C⁽ᶜ⁾(11)_12 k⁽ᵃ⁾_1 C⁽ᵈ⁾(12)_21 k⁽ᵇ⁾_2 − k⁽ᵇ⁾_2 C⁽ᵈ⁾(12)_12 k⁽ᵃ⁾_1 C⁽ᶜ⁾(22)_21`.
//! Clearing denominators gives a homogeneous polynomial of degree `3m` in
//! `(u, v)` whose every coefficient must vanish. For a scalar boundary the
//! order-`m` system is affine in `k⁽ᵐ⁻¹⁾`.

use num_complex::Complex64;

use super::residual::constant_cbybe_residual;
use super::BoundarySetup;
use crate::error::{Error, Result};
use crate::lie::{split_casimir, Representation};
use crate::linalg::{
    embed, eye, flatten, fro, hstack, inverse, kron, lstsq, nullspace, rcond, re, unflatten, unit,
    CMat, CVec,
};
use crate::series::{poly_product, MatrixSeries};
use crate::KERNEL_CUTOFF;

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Highest order `r` of `k⁽ʳ⁾` to solve for.
    pub order: usize,
    /// Known expansion used to fix free directions; the solver projects onto it.
    pub reference: Option<MatrixSeries>,
    /// Tolerance for the constant classical equation on the seed `κ`.
    pub seed_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            order: 3,
            reference: None,
            seed_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OrderSolution {
    pub r: usize,
    /// Chosen `k⁽ʳ⁾`.
    pub k: CMat,
    /// Dimension of the homogeneous solution space after normalization.
    pub nullspace_dim: usize,
    pub null_basis: Vec<CMat>,
    /// Nullspace dimension of the reduced four-structure system, when available.
    pub reduced_nullspace_dim: Option<usize>,
    /// `‖M k − rhs‖` relative to the right-hand side.
    pub inconsistency: f64,
    /// Number of independent scalar equations assembled at this order.
    pub equations: usize,
    pub rank: usize,
    pub anomaly: bool,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub kappa: CMat,
    pub seed_residual: f64,
    pub orders: Vec<OrderSolution>,
}

impl SolveReport {
    pub fn nullspace_dims(&self) -> Vec<usize> {
        self.orders.iter().map(|o| o.nullspace_dim).collect()
    }

    pub fn any_anomaly(&self) -> bool {
        self.orders.iter().any(|o| o.anomaly)
    }

    /// `κ + Σ k⁽ʳ⁾ u^(−r)` as solved.
    pub fn series(&self) -> MatrixSeries {
        let coeffs = std::iter::once(self.kappa.clone())
            .chain(self.orders.iter().map(|o| o.k.clone()))
            .collect();
        MatrixSeries::new(coeffs).expect("consistent shapes")
    }
}

/// Ascending coefficients in `u` (with `v = 1`) of
/// `u^e_u · v^e_v · (u − v)^e_minus · (u + v)^e_plus`, padded to `len`.
fn spectral_poly(e_u: usize, e_minus: usize, e_plus: usize, len: usize) -> Vec<f64> {
    let one = re(1.0);
    let mut p = vec![one];
    for _ in 0..e_minus {
        p = poly_product(&p, &[-one, one]);
    }
    for _ in 0..e_plus {
        p = poly_product(&p, &[one, one]);
    }
    let mut out = vec![0.0; len];
    for (i, c) in p.iter().enumerate() {
        out[i + e_u] = c.re;
    }
    out
}

struct Assembler {
    d: usize,
    c11: Vec<CMat>,
    c12: Vec<CMat>,
    c22: Vec<CMat>,
}

impl Assembler {
    fn new(setup: &BoundarySetup, max_order: usize) -> Result<Self> {
        let d = setup.r11.dims().0;
        let e = |r: &crate::rmatrix::RMatrix| -> Result<Vec<CMat>> {
            Ok(r.expand(max_order)?.coeffs().to_vec())
        };
        Ok(Assembler {
            d,
            c11: e(&setup.r11)?,
            c12: e(&setup.r12)?,
            c22: e(&setup.r22)?,
        })
    }

    /// Flattened coefficient equations at `x^m`, with `ks[r]` for `r < m`.
    fn equations(&self, m: usize, ks: &[CMat]) -> CVec {
        let d = self.d;
        let dims = [d, d];
        let id = eye(d);
        let len = 3 * m + 1;
        let block = d.pow(4);
        let mut out = CVec::zeros(len * block);
        let k1: Vec<CMat> = ks.iter().map(|k| kron(k, &id)).collect();
        let k2: Vec<CMat> = ks.iter().map(|k| kron(&id, k)).collect();
        for a in 0..m {
            for b in 0..(m - a) {
                for c in 0..=(m - a - b) {
                    let dd = m - a - b - c;
                    let lhs = embed(&self.c11[c], &[0, 1], &dims)
                        * &k1[a]
                        * embed(&self.c12[dd], &[1, 0], &dims)
                        * &k2[b];
                    let rhs = &k2[b]
                        * embed(&self.c12[dd], &[0, 1], &dims)
                        * &k1[a]
                        * embed(&self.c22[c], &[1, 0], &dims);
                    let op = flatten(&(lhs - rhs));
                    // u^(m−a) v^(m−b) (u−v)^(m−c) (u+v)^(m−d); degree in u offsets by m−a.
                    let poly = spectral_poly(m - a, m - c, m - dd, len);
                    for (i, w) in poly.iter().enumerate() {
                        if *w != 0.0 {
                            out.rows_mut(i * block, block).axpy(re(*w), &op, re(1.0));
                        }
                    }
                }
            }
        }
        out
    }
}

/// `(b, A)` with `F(X) = b + A vec(X)` for an affine map of `d×d` matrices.
fn affine_system(d: usize, f: impl Fn(&CMat) -> CVec) -> (CVec, CMat) {
    let b = f(&CMat::zeros(d, d));
    let cols: Vec<CVec> = (0..d * d).map(|e| f(&unit(d, e / d, e % d)) - &b).collect();
    let a = hstack(&cols, b.len());
    (b, a)
}

struct LinearSolve {
    x: CVec,
    null: CMat,
    inconsistency: f64,
    rank: usize,
}

/// Solves `A x = −b` together with `Tr(X κ⁻¹) = 0`, projecting free
/// directions onto `reference` when given.
fn solve_normalized(a: &CMat, b: &CVec, kinv: &CMat, reference: Option<&CMat>) -> LinearSolve {
    let d = kinv.nrows();
    let n = a.ncols();
    let scale = (fro(a) / (n as f64).sqrt()).max(1.0);
    let mut m = CMat::zeros(a.nrows() + 1, n);
    m.rows_mut(0, a.nrows()).copy_from(a);
    for e in 0..n {
        // Tr(E_ij κ⁻¹) = (κ⁻¹)_ji
        m[(a.nrows(), e)] = kinv[(e % d, e / d)] * scale;
    }
    let mut rhs = CVec::zeros(a.nrows() + 1);
    rhs.rows_mut(0, a.nrows()).copy_from(&(-b));
    let rhs_m = CMat::from_column_slice(rhs.len(), 1, rhs.as_slice());
    let mut x: CVec = lstsq(&m, &rhs_m, KERNEL_CUTOFF).column(0).into_owned();
    let null = nullspace(&m, KERNEL_CUTOFF);
    if let (Some(r), true) = (reference, null.ncols() > 0) {
        let delta = flatten(r) - &x;
        x += &null * (null.adjoint() * delta);
    }
    let inconsistency = (&m * &x - &rhs).norm() / rhs.norm().max(scale);
    LinearSolve {
        x,
        rank: n - null.ncols(),
        null,
        inconsistency,
    }
}

fn seed_check(
    kappa: &CMat,
    rep1: &Representation,
    rep2: &Representation,
    tol: f64,
) -> Result<(CMat, f64)> {
    let kinv = inverse(kappa).ok_or(Error::NotQuasiClassical {
        rcond: rcond(kappa),
    })?;
    let seed = constant_cbybe_residual(kappa, rep1, rep2)?;
    if seed > tol * fro(kappa).max(1.0).powi(2) {
        return Err(Error::InvalidSeed { defect: seed });
    }
    Ok((kinv, seed))
}

/// Solves for `k⁽¹⁾ … k⁽ᴿ⁾` given `κ`, normalizing with `Tr(k⁽ʳ⁾ κ⁻¹) = 0`.
pub fn perturbative_solve(
    kappa: &CMat,
    setup: &BoundarySetup,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    let rep1 = setup.r11.reps().0.clone();
    let rep2 = setup.r22.reps().0.clone();
    let d = rep1.d();
    if kappa.shape() != (d, d) {
        return Err(Error::ShapeMismatch(format!("κ must be {d}×{d}")));
    }
    let (kinv, seed_residual) = seed_check(kappa, &rep1, &rep2, opts.seed_tol)?;
    let asm = Assembler::new(setup, opts.order + 1)?;
    let reduced = ReducedSystem::new(kappa, &rep1, &rep2)?;
    let mut ks = vec![kappa.clone()];
    let mut orders = Vec::with_capacity(opts.order);
    for r in 1..=opts.order {
        let (b, a) = affine_system(d, |x| {
            let mut trial = ks.clone();
            trial.push(x.clone());
            asm.equations(r + 1, &trial)
        });
        let reference = opts
            .reference
            .as_ref()
            .filter(|s| s.order() >= r)
            .map(|s| s.coeff(r).clone());
        let sol = solve_normalized(&a, &b, &kinv, reference.as_ref());
        let k = unflatten(sol.x.as_slice(), d, d);
        let reduced_dim = reduced.nullspace_dim(r, &kinv);
        let null_basis: Vec<CMat> = (0..sol.null.ncols())
            .map(|j| unflatten(sol.null.column(j).as_slice(), d, d))
            .collect();
        let anomaly = sol.inconsistency > 1e-8 || reduced_dim != null_basis.len();
        orders.push(OrderSolution {
            r,
            k: k.clone(),
            nullspace_dim: null_basis.len(),
            null_basis,
            reduced_nullspace_dim: Some(reduced_dim),
            inconsistency: sol.inconsistency,
            equations: a.nrows(),
            rank: sol.rank,
            anomaly,
        });
        ks.push(k);
    }
    Ok(SolveReport {
        kappa: kappa.clone(),
        seed_residual,
        orders,
    })
}

/// The homogeneous conditions on an order-`r` correction `δk` built from the
/// four spectral structures of the first non-trivial order.
struct ReducedSystem {
    kappa: CMat,
    c11: CMat,
    c12: CMat,
    c21: CMat,
    c22: CMat,
}

impl ReducedSystem {
    fn new(kappa: &CMat, rep1: &Representation, rep2: &Representation) -> Result<Self> {
        Ok(ReducedSystem {
            kappa: kappa.clone(),
            c11: split_casimir(rep1, rep1)?,
            c12: split_casimir(rep1, rep2)?,
            c21: split_casimir(rep2, rep1)?,
            c22: split_casimir(rep2, rep2)?,
        })
    }

    fn terms(&self, dk: &CMat) -> [CMat; 4] {
        let d = self.kappa.nrows();
        let id = eye(d);
        let (k1, k2) = (kron(&self.kappa, &id), kron(&id, &self.kappa));
        let (x1, x2) = (kron(dk, &id), kron(&id, dk));
        [
            &self.c11 * &x1 * &k2 - &x1 * &k2 * &self.c22,
            &self.c11 * &k1 * &x2 - &k1 * &x2 * &self.c22,
            &x1 * &self.c21 * &k2 - &k2 * &self.c12 * &x1,
            &k1 * &self.c21 * &x2 - &x2 * &self.c12 * &k1,
        ]
    }

    fn nullspace_dim(&self, r: usize, kinv: &CMat) -> usize {
        let d = self.kappa.nrows();
        let (b, a) = affine_system(d, |x| {
            let [t1, t2, t3, t4] = self.terms(x);
            let parts: Vec<CMat> = if r == 1 {
                vec![&t1 + &t2, &t2 + &t3, &t2 + &t4]
            } else {
                vec![t1, t2, t3, t4]
            };
            let flat: Vec<Complex64> = parts
                .iter()
                .flat_map(|p| flatten(p).iter().copied().collect::<Vec<_>>())
                .collect();
            CVec::from_vec(flat)
        });
        debug_assert!(b.norm() == 0.0);
        solve_normalized(&a, &b, kinv, None).null.ncols()
    }
}

/// Order-by-order solution of the classical reflection equation for
/// `κ̃(u) = Σ κ⁽ʳ⁾ u^(−r)` with `Tr(κ⁽ʳ⁾ κ⁻¹) = 0`.
pub fn classical_perturbative_solve(
    kappa: &CMat,
    rep1: &Representation,
    rep2: &Representation,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    let d = rep1.d();
    if kappa.shape() != (d, d) {
        return Err(Error::ShapeMismatch(format!("κ must be {d}×{d}")));
    }
    let (kinv, seed_residual) = seed_check(kappa, rep1, rep2, opts.seed_tol)?;
    let c11 = split_casimir(rep1, rep1)?;
    let c12 = split_casimir(rep1, rep2)?;
    let c21 = split_casimir(rep2, rep1)?;
    let c22 = split_casimir(rep2, rep2)?;
    let id = eye(d);
    // Level m: Σ_{a+b=m} (u+v) u^b v^a (C11 κa_1 κb_2 − κa_1 κb_2 C22)
    //                 + (u−v) u^b v^a (κa_1 C21 κb_2 − κb_2 C12 κa_1).
    let equations = |m: usize, ks: &[CMat]| -> CVec {
        let len = m + 2;
        let block = d.pow(4);
        let mut out = CVec::zeros(len * block);
        for a in 0..=m {
            let b = m - a;
            let (x1, x2) = (kron(&ks[a], &id), kron(&id, &ks[b]));
            let first = flatten(&(&c11 * &x1 * &x2 - &x1 * &x2 * &c22));
            let second = flatten(&(&x1 * &c21 * &x2 - &x2 * &c12 * &x1));
            let p1 = spectral_poly(b, 0, 1, len);
            let p2 = spectral_poly(b, 1, 0, len);
            for i in 0..len {
                let mut blk = out.rows_mut(i * block, block);
                if p1[i] != 0.0 {
                    blk.axpy(re(p1[i]), &first, re(1.0));
                }
                if p2[i] != 0.0 {
                    blk.axpy(re(p2[i]), &second, re(1.0));
                }
            }
        }
        out
    };
    let mut ks = vec![kappa.clone()];
    let mut orders = Vec::with_capacity(opts.order);
    for r in 1..=opts.order {
        let (b, a) = affine_system(d, |x| {
            let mut trial = ks.clone();
            trial.push(x.clone());
            equations(r, &trial)
        });
        let reference = opts
            .reference
            .as_ref()
            .filter(|s| s.order() >= r)
            .map(|s| s.coeff(r).clone());
        let sol = solve_normalized(&a, &b, &kinv, reference.as_ref());
        let k = unflatten(sol.x.as_slice(), d, d);
        let null_basis: Vec<CMat> = (0..sol.null.ncols())
            .map(|j| unflatten(sol.null.column(j).as_slice(), d, d))
            .collect();
        orders.push(OrderSolution {
            r,
            k: k.clone(),
            nullspace_dim: null_basis.len(),
            null_basis,
            reduced_nullspace_dim: None,
            inconsistency: sol.inconsistency,
            equations: a.nrows(),
            rank: sol.rank,
            anomaly: sol.inconsistency > 1e-8,
        });
        ks.push(k);
    }
    Ok(SolveReport {
        kappa: kappa.clone(),
        seed_residual,
        orders,
    })
}
