//! Reflection K-matrices: families, residuals, residual symmetry, the
//! order-by-order solver and first-order structure checks.

mod families;
mod residual;
mod solver;
mod structure;
mod symmetry;

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lie::{contragredient, RepKind, Representation, SubalgebraBasis};
use crate::linalg::{inverse, rcond, CMat};
use crate::rmatrix::{crossed_r, yang_r_on, RMatrix};
use crate::series::{MatrixSeries, RationalMatrixFn};

pub use families::{
    aiii_center, constant_twisted_k, custom_k, diagonal_k, diagonal_k_on, jordan_kappa,
    nilpotent_k, signature, ClassicalKappa,
};
pub use residual::{
    bybe_residual, bybe_residual_with, cbybe_defect, cbybe_residual, classical_limit_check,
    constant_cbybe_residual, symmetry_residual, ClassicalLimit,
};
pub use solver::{
    classical_perturbative_solve, perturbative_solve, OrderSolution, SolveOptions, SolveReport,
};
pub use structure::{k1_structure_check, K1StructureReport};
pub use symmetry::{
    irreducibility_check, residual_symmetry, IrreducibilityReport, ResidualSymmetry,
};

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum KFamily {
    Diagonal {
        p: usize,
        q: usize,
    },
    ConstantTwisted,
    Nilpotent {
        k: usize,
    },
    Custom,
    /// Built from other K-matrices, e.g. by extending the boundary space.
    Composite,
}

impl fmt::Display for KFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KFamily::Diagonal { p, q } => write!(f, "diag({p},{q})"),
            KFamily::ConstantTwisted => write!(f, "twist-const"),
            KFamily::Nilpotent { k } => write!(f, "nilpotent(k={k})"),
            KFamily::Custom => write!(f, "custom"),
            KFamily::Composite => write!(f, "composite"),
        }
    }
}

/// A representation of a subalgebra `h` on the boundary space, given by the
/// images of the basis vectors of `h`.
#[derive(Debug, Clone)]
pub struct BoundaryRep {
    pub h: SubalgebraBasis,
    pub images: Vec<CMat>,
}

/// `K(u)` on `C^d ⊗ C^{d_B}`, normalized so that it is finite at infinity.
#[derive(Debug, Clone)]
pub struct KMatrix {
    func: RationalMatrixFn,
    rep1: Representation,
    rep2: Representation,
    d_b: usize,
    boundary: Option<BoundaryRep>,
    family: KFamily,
    params: BTreeMap<String, Complex64>,
}

impl KMatrix {
    pub fn new(
        func: RationalMatrixFn,
        rep1: Representation,
        rep2: Representation,
        d_b: usize,
        family: KFamily,
    ) -> Result<Self> {
        if rep1.d() != rep2.d() {
            return Err(Error::ShapeMismatch(
                "K-matrix legs need equal dimension".into(),
            ));
        }
        if !rep1.same_algebra(&rep2) {
            return Err(Error::AlgebraMismatch);
        }
        let dd = rep1.d() * d_b;
        if d_b == 0 || func.shape() != (dd, dd) {
            return Err(Error::ShapeMismatch(format!(
                "K-matrix {:?} on C^{} ⊗ C^{d_b}",
                func.shape(),
                rep1.d()
            )));
        }
        if let Some(p) = func.num_degree() {
            if p > func.den_degree() {
                return Err(Error::NormalizationRequired {
                    num: p,
                    den: func.den_degree(),
                });
            }
        }
        Ok(KMatrix {
            func,
            rep1,
            rep2,
            d_b,
            boundary: None,
            family,
            params: BTreeMap::new(),
        })
    }

    pub fn with_param(mut self, name: &str, value: Complex64) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    pub fn with_boundary(mut self, boundary: BoundaryRep) -> Result<Self> {
        if boundary.images.len() != boundary.h.dim()
            || boundary
                .images
                .iter()
                .any(|m| m.shape() != (self.d_b, self.d_b))
        {
            return Err(Error::ShapeMismatch(
                "boundary images must be d_B×d_B, one per h basis vector".into(),
            ));
        }
        self.boundary = Some(boundary);
        Ok(self)
    }

    pub fn func(&self) -> &RationalMatrixFn {
        &self.func
    }

    pub fn reps(&self) -> (&Representation, &Representation) {
        (&self.rep1, &self.rep2)
    }

    pub fn d(&self) -> usize {
        self.rep1.d()
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn boundary(&self) -> Option<&BoundaryRep> {
        self.boundary.as_ref()
    }

    pub fn family(&self) -> &KFamily {
        &self.family
    }

    pub fn params(&self) -> &BTreeMap<String, Complex64> {
        &self.params
    }

    /// Whether the second leg carries the contragredient of the first.
    pub fn twisted(&self) -> bool {
        self.rep2.kind() != self.rep1.kind()
            && self.rep2.same_matrices(&contragredient(&self.rep1), 0.0)
    }

    pub fn evaluate(&self, u: Complex64) -> Result<CMat> {
        self.func.evaluate(u)
    }

    pub fn expand(&self, order: usize) -> Result<MatrixSeries> {
        self.func.expand(order)
    }

    /// Leading coefficient `κ̃ = K(∞)`.
    pub fn leading(&self) -> Result<CMat> {
        Ok(self.expand(0)?.coeff(0).clone())
    }

    pub fn is_quasi_classical(&self) -> Result<bool> {
        Ok(inverse(&self.leading()?).is_some())
    }

    /// The same K-matrix rescaled so that `Tr(K(u) κ⁻¹) = d` identically.
    pub fn normalized(&self) -> Result<Self> {
        let kappa = self.leading()?;
        let kinv = inverse(&kappa).ok_or(Error::NotQuasiClassical {
            rcond: rcond(&kappa),
        })?;
        let mut out = self.clone();
        out.func = self.func.normalize_trace(&kinv)?;
        Ok(out)
    }

    /// Multiplies by a scalar rational function `p(u)/q(u)`.
    pub fn redress(&self, p: &[Complex64], q: &[Complex64]) -> Result<Self> {
        let mut out = self.clone();
        out.func = self.func.scale_rational(p, q)?;
        Ok(out)
    }

    /// `K(u) ⊗ I_m`: the same K with an inert boundary space of dimension `m`.
    pub fn tensor_identity(&self, m: usize) -> Result<Self> {
        let id = CMat::identity(m, m);
        let func = self.func.map_linear(|c| crate::linalg::kron(c, &id))?;
        KMatrix::new(
            func,
            self.rep1.clone(),
            self.rep2.clone(),
            self.d_b * m,
            KFamily::Composite,
        )
    }

    /// `Σ E_ij ⊗ diag(Ψ1^ij, Ψ2^ij)`: two scalar-boundary K-matrices stacked
    /// into a two-dimensional boundary space.
    pub fn stack_boundary(a: &KMatrix, b: &KMatrix) -> Result<Self> {
        if a.d_b != 1 || b.d_b != 1 || a.d() != b.d() {
            return Err(Error::ShapeMismatch(
                "stacking needs two scalar-boundary K-matrices of equal d".into(),
            ));
        }
        let d = a.d();
        let place = |m: &CMat, slot: usize| {
            let mut out = CMat::zeros(2 * d, 2 * d);
            for i in 0..d {
                for j in 0..d {
                    out[(2 * i + slot, 2 * j + slot)] = m[(i, j)];
                }
            }
            out
        };
        // Bring both onto the common denominator D_a·D_b.
        let fa = a
            .func
            .scale_rational(b.func.denominator(), &[Complex64::new(1.0, 0.0)])?;
        let fb = b
            .func
            .scale_rational(a.func.denominator(), &[Complex64::new(1.0, 0.0)])?;
        let len = fa.numerator().len().max(fb.numerator().len());
        let num = (0..len)
            .map(|i| {
                let mut m = CMat::zeros(2 * d, 2 * d);
                if let Some(c) = fa.numerator().get(i) {
                    m += place(c, 0);
                }
                if let Some(c) = fb.numerator().get(i) {
                    m += place(c, 1);
                }
                m
            })
            .collect();
        let den = crate::series::poly_product(a.func.denominator(), b.func.denominator());
        let func = RationalMatrixFn::new(num, den, "stacked")?;
        KMatrix::new(func, a.rep1.clone(), a.rep2.clone(), 2, KFamily::Composite)
    }

    /// Blocks `Ψ^{ij}(u)` (each `d_B × d_B`) of `K(u) = Σ E_ij ⊗ Ψ^{ij}(u)`.
    pub fn boundary_blocks(&self, u: Complex64) -> Result<Vec<CMat>> {
        let k = self.evaluate(u)?;
        let (d, m) = (self.d(), self.d_b);
        Ok((0..d * d)
            .map(|ij| {
                let (i, j) = (ij / d, ij % d);
                CMat::from_fn(m, m, |b, c| k[(i * m + b, j * m + c)])
            })
            .collect())
    }
}

/// The four R-matrices entering the reflection equation:
/// `R^(11)` on `ρ1⊗ρ1`, `R^(12)` on `ρ1_cross⊗ρ1` and `R^(22)` on `ρ2⊗ρ2`.
#[derive(Debug, Clone)]
pub struct BoundarySetup {
    pub r11: RMatrix,
    pub r12: RMatrix,
    pub r22: RMatrix,
    pub twisted: bool,
}

impl BoundarySetup {
    pub fn untwisted(r: &RMatrix) -> Self {
        BoundarySetup {
            r11: r.clone(),
            r12: r.clone(),
            r22: r.clone(),
            twisted: false,
        }
    }

    /// `R^(12) = R̄ = R(Γ−u)^{T₁}` and `R^(22)` the transpose of `R`.
    pub fn twisted(r: &RMatrix, gamma: Complex64) -> Result<Self> {
        Ok(BoundarySetup {
            r11: r.clone(),
            r12: crossed_r(r, gamma)?,
            r22: r.full_transpose()?,
            twisted: true,
        })
    }

    /// Yang's R-matrix on the first leg of `k`, twisted when `k` pairs its
    /// representation with the contragredient.
    pub fn yang_for(k: &KMatrix, gamma: Option<Complex64>) -> Result<Self> {
        if k.rep1.kind() != RepKind::Defining {
            return Err(Error::UnsupportedRepPair(
                "Yang's R-matrix needs the defining representation".into(),
            ));
        }
        let r = yang_r_on(&k.rep1)?;
        if k.twisted() {
            let g = gamma.ok_or_else(|| {
                Error::InvalidArgument("twisted K-matrix needs a crossing parameter".into())
            })?;
            Self::twisted(&r, g)
        } else if k.rep2.same_matrices(&k.rep1, 0.0) {
            Ok(Self::untwisted(&r))
        } else {
            Err(Error::UnsupportedRepPair(
                "second leg is neither ρ nor its contragredient".into(),
            ))
        }
    }
}
