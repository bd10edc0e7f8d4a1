//! Complex Lie algebras given by structure constants, their matrix
//! representations, split Casimirs and subalgebra diagnostics.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    canonical_basis, column_space, commutator, distance_to_span, flatten, fro, inverse, kron,
    nullspace, rcond, re, trace_form, unit, CMat, CVec, Cutoff,
};
use crate::KERNEL_CUTOFF;

/// A finite-dimensional Lie algebra with `[X_A, X_B] = f_AB^C X_C`.
#[derive(Debug, Clone)]
pub struct LieAlgebra {
    dim: usize,
    labels: Vec<String>,
    /// Flattened `f[(a * dim + b) * dim + c] = f_ab^c`.
    f: Vec<Complex64>,
    killing: CMat,
    killing_inv: CMat,
}

impl LieAlgebra {
    /// Builds the algebra and its Killing form. Fails if the Killing form is
    /// degenerate, since every consumer here needs `B^AB`.
    pub fn from_structure_constants(labels: Vec<String>, f: Vec<Complex64>) -> Result<Self> {
        let dim = labels.len();
        if f.len() != dim * dim * dim {
            return Err(Error::ShapeMismatch(format!(
                "expected {} structure constants, got {}",
                dim * dim * dim,
                f.len()
            )));
        }
        let mut alg = LieAlgebra {
            dim,
            labels,
            f,
            killing: CMat::zeros(dim, dim),
            killing_inv: CMat::zeros(dim, dim),
        };
        let ads: Vec<CMat> = (0..dim).map(|a| alg.ad(a)).collect();
        alg.killing = CMat::from_fn(dim, dim, |a, b| trace_form(&ads[a], &ads[b]));
        let rc = rcond(&alg.killing);
        alg.killing_inv = inverse(&alg.killing).ok_or(Error::SingularMetric { rcond: rc })?;
        Ok(alg)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn f(&self, a: usize, b: usize, c: usize) -> Complex64 {
        self.f[(a * self.dim + b) * self.dim + c]
    }

    /// Absolute rank cutoff for bracket images of unit vectors. Brackets of
    /// commuting elements carry round-off from the basis, so a relative
    /// cutoff would count that noise as rank.
    pub fn bracket_cutoff(&self) -> Cutoff {
        let scale = self.f.iter().map(|z| z.norm()).fold(1.0, f64::max);
        Cutoff::Absolute(1e-9 * scale)
    }

    pub fn killing(&self) -> &CMat {
        &self.killing
    }

    pub fn killing_inv(&self) -> &CMat {
        &self.killing_inv
    }

    /// Adjoint matrix acting on coordinate columns: `(ad_A)_{C,B} = f_AB^C`.
    pub fn ad(&self, a: usize) -> CMat {
        CMat::from_fn(self.dim, self.dim, |c, b| self.f(a, b, c))
    }

    /// Bracket of two elements given by coordinates in the basis.
    pub fn bracket(&self, x: &CVec, y: &CVec) -> CVec {
        let n = self.dim;
        let mut out = CVec::zeros(n);
        for a in 0..n {
            if x[a] == Complex64::new(0.0, 0.0) {
                continue;
            }
            for b in 0..n {
                let w = x[a] * y[b];
                if w == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..n {
                    out[c] += w * self.f(a, b, c);
                }
            }
        }
        out
    }

    pub fn basis_vector(&self, a: usize) -> CVec {
        let mut v = CVec::zeros(self.dim);
        v[a] = re(1.0);
        v
    }

    /// Killing form evaluated on two coordinate vectors.
    pub fn killing_of(&self, x: &CVec, y: &CVec) -> Complex64 {
        (x.transpose() * &self.killing * y)[(0, 0)]
    }

    pub fn antisymmetry_residual(&self) -> f64 {
        let n = self.dim;
        let mut acc = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    acc = acc.max((self.f(a, b, c) + self.f(b, a, c)).norm());
                }
            }
        }
        acc
    }

    /// Largest entry of the Jacobi identity defect.
    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let mut s = Complex64::new(0.0, 0.0);
                        for e in 0..n {
                            s += self.f(a, b, e) * self.f(e, c, d)
                                + self.f(b, c, e) * self.f(e, a, d)
                                + self.f(c, a, e) * self.f(e, b, d);
                        }
                        worst = worst.max(s.norm());
                    }
                }
            }
        }
        worst
    }

    /// Largest `|B([X,Y],Z) + B(Y,[X,Z])|` over basis triples.
    pub fn killing_invariance_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let mut s = Complex64::new(0.0, 0.0);
                    for e in 0..n {
                        s += self.f(x, y, e) * self.killing[(e, z)]
                            + self.killing[(y, e)] * self.f(x, z, e);
                    }
                    worst = worst.max(s.norm());
                }
            }
        }
        worst
    }

    /// Killing-form symmetry and inverse defects.
    pub fn killing_consistency_residual(&self) -> f64 {
        let sym = fro(&(&self.killing - self.killing.transpose()));
        let inv = fro(&(&self.killing * &self.killing_inv - CMat::identity(self.dim, self.dim)));
        sym.max(inv)
    }

    /// Exact comparison of dimension and structure constants.
    pub fn same_as(&self, other: &LieAlgebra) -> bool {
        self.dim == other.dim
            && self
                .f
                .iter()
                .zip(&other.f)
                .all(|(a, b)| (a - b).norm() <= 1e-12 * (1.0 + a.norm()))
    }

    /// Sparse `A B C value` triplets, one per non-zero structure constant.
    pub fn to_triplets(&self) -> String {
        let n = self.dim;
        let mut s = String::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let v = self.f(a, b, c);
                    if v != Complex64::new(0.0, 0.0) {
                        s.push_str(&format!("{a} {b} {c} {}\n", crate::io::format_complex(v)));
                    }
                }
            }
        }
        s
    }

    pub fn from_triplets(labels: Vec<String>, text: &str) -> Result<Self> {
        let n = labels.len();
        let mut f = vec![Complex64::new(0.0, 0.0); n * n * n];
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 {
                return Err(Error::Parse(format!(
                    "line {}: expected 'A B C value'",
                    lineno + 1
                )));
            }
            let idx = |s: &str| -> Result<usize> {
                let i: usize = s
                    .parse()
                    .map_err(|_| Error::Parse(format!("line {}: bad index {s}", lineno + 1)))?;
                if i >= n {
                    return Err(Error::Parse(format!(
                        "line {}: index {i} out of range",
                        lineno + 1
                    )));
                }
                Ok(i)
            };
            let (a, b, c) = (idx(parts[0])?, idx(parts[1])?, idx(parts[2])?);
            f[(a * n + b) * n + c] = crate::io::parse_complex(parts[3])?;
        }
        Self::from_structure_constants(labels, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum RepKind {
    Defining,
    Contragredient,
    Custom,
}

/// Matrices `Y_A = ρ(X_A)` on `C^d`, one per basis element of the algebra.
#[derive(Debug, Clone)]
pub struct Representation {
    algebra: Arc<LieAlgebra>,
    d: usize,
    y: Vec<CMat>,
    kind: RepKind,
}

impl Representation {
    pub fn new(algebra: Arc<LieAlgebra>, y: Vec<CMat>, kind: RepKind) -> Result<Self> {
        if y.len() != algebra.dim() {
            return Err(Error::ShapeMismatch(format!(
                "{} matrices for an algebra of dimension {}",
                y.len(),
                algebra.dim()
            )));
        }
        let d = y.first().map(|m| m.nrows()).unwrap_or(0);
        if y.iter().any(|m| m.nrows() != d || m.ncols() != d) {
            return Err(Error::ShapeMismatch(
                "representation matrices must all be d×d".into(),
            ));
        }
        Ok(Representation {
            algebra,
            d,
            y,
            kind,
        })
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.algebra
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn kind(&self) -> RepKind {
        self.kind
    }

    pub fn matrices(&self) -> &[CMat] {
        &self.y
    }

    pub fn y(&self, a: usize) -> &CMat {
        &self.y[a]
    }

    /// `ρ(X)` for `X = x^A X_A`.
    pub fn image(&self, x: &CVec) -> CMat {
        let mut m = CMat::zeros(self.d, self.d);
        for (a, ya) in self.y.iter().enumerate() {
            if x[a] != Complex64::new(0.0, 0.0) {
                m += ya * x[a];
            }
        }
        m
    }

    pub fn same_algebra(&self, other: &Representation) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra.same_as(&other.algebra)
    }

    /// Entrywise equality of the representation matrices.
    pub fn same_matrices(&self, other: &Representation, tol: f64) -> bool {
        self.d == other.d
            && self.same_algebra(other)
            && self
                .y
                .iter()
                .zip(&other.y)
                .all(|(a, b)| fro(&(a - b)) <= tol)
    }

    /// Largest `‖[Y_A, Y_B] − f_AB^C Y_C‖`.
    pub fn homomorphism_residual(&self) -> f64 {
        let n = self.algebra.dim();
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                let mut rhs = CMat::zeros(self.d, self.d);
                for c in 0..n {
                    let f = self.algebra.f(a, b, c);
                    if f != Complex64::new(0.0, 0.0) {
                        rhs += &self.y[c] * f;
                    }
                }
                worst = worst.max(fro(&(commutator(&self.y[a], &self.y[b]) - rhs)));
            }
        }
        worst
    }

    /// Trace metric `C_AB = Tr(Y_A Y_B)`.
    pub fn trace_metric(&self) -> CMat {
        let n = self.algebra.dim();
        CMat::from_fn(n, n, |a, b| trace_form(&self.y[a], &self.y[b]))
    }

    /// The constant `c` in `Tr(Y_A Y_B) = c B_AB`, and the relative spread of
    /// the ratio over all non-zero Killing entries.
    pub fn metric_ratio(&self) -> (Complex64, f64) {
        let g = self.trace_metric();
        let b = self.algebra.killing();
        let scale = b.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let ratios: Vec<Complex64> = g
            .iter()
            .zip(b.iter())
            .filter(|(_, bv)| bv.norm() > 1e-12 * scale)
            .map(|(gv, bv)| gv / bv)
            .collect();
        let Some(&c) = ratios.first() else {
            return (Complex64::new(0.0, 0.0), 0.0);
        };
        let spread =
            ratios.iter().map(|r| (r - c).norm()).fold(0.0, f64::max) / c.norm().max(1e-300);
        // Entries where B vanishes must vanish in the trace metric too.
        let off = g
            .iter()
            .zip(b.iter())
            .filter(|(_, bv)| bv.norm() <= 1e-12 * scale)
            .map(|(gv, _)| gv.norm())
            .fold(0.0, f64::max)
            / c.norm().max(1e-300);
        (c, spread.max(off))
    }

    pub fn is_faithful(&self) -> bool {
        let cols: Vec<CVec> = self.y.iter().map(flatten).collect();
        let m = crate::linalg::hstack(&cols, self.d * self.d);
        crate::linalg::rank(&m, KERNEL_CUTOFF) == self.algebra.dim()
    }

    /// Splits a matrix as `Σ x^B Y_B + complement` with the complement
    /// trace-orthogonal to every `Y_A`. Returns the coordinates and the
    /// complement.
    pub fn decompose(&self, m: &CMat) -> Result<(CVec, CMat)> {
        let g = self.trace_metric();
        let ginv = inverse(&g).ok_or(Error::SingularMetric { rcond: rcond(&g) })?;
        let t = CVec::from_iterator(self.y.len(), self.y.iter().map(|ya| trace_form(ya, m)));
        let x = ginv * t;
        let comp = m - self.image(&x);
        Ok((x, comp))
    }
}

/// Builds `sl(n)` with basis `{E_ij (i≠j)} ∪ {E_ii − E_{i+1,i+1}}` and its
/// defining representation.
pub fn build_sl(n: usize) -> Result<(Arc<LieAlgebra>, Representation)> {
    if n < 2 {
        return Err(Error::InvalidDimension(format!(
            "sl(n) needs n ≥ 2, got {n}"
        )));
    }
    let mut labels = Vec::new();
    let mut mats = Vec::new();
    let sep = if n >= 10 { "," } else { "" };
    for i in 0..n {
        for j in 0..n {
            if i != j {
                labels.push(format!("E{}{}{}", i + 1, sep, j + 1));
                mats.push(unit(n, i, j));
            }
        }
    }
    for i in 0..n - 1 {
        labels.push(format!("H{}", i + 1));
        mats.push(unit(n, i, i) - unit(n, i + 1, i + 1));
    }
    let dim = mats.len();
    let mut f = vec![Complex64::new(0.0, 0.0); dim * dim * dim];
    for a in 0..dim {
        for b in 0..dim {
            let coords = sl_coordinates(&commutator(&mats[a], &mats[b]));
            for (c, v) in coords.into_iter().enumerate() {
                f[(a * dim + b) * dim + c] = v;
            }
        }
    }
    let alg = Arc::new(LieAlgebra::from_structure_constants(labels, f)?);
    let rep = Representation::new(alg.clone(), mats, RepKind::Defining)?;
    Ok((alg, rep))
}

/// Exact coordinates of a traceless `n×n` matrix in the `sl(n)` basis.
pub fn sl_coordinates(m: &CMat) -> Vec<Complex64> {
    let n = m.nrows();
    let mut out = Vec::with_capacity(n * n - 1);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.push(m[(i, j)]);
            }
        }
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n - 1 {
        acc += m[(i, i)];
        out.push(acc);
    }
    out
}

/// `X ↦ −ρ(X)ᵀ`.
pub fn contragredient(rep: &Representation) -> Representation {
    let kind = match rep.kind {
        RepKind::Contragredient => RepKind::Defining,
        _ => RepKind::Contragredient,
    };
    Representation {
        algebra: rep.algebra.clone(),
        d: rep.d,
        y: rep.y.iter().map(|m| -m.transpose()).collect(),
        kind,
    }
}

/// Split Casimir `C^(12) = B^AB ρ1(X_A) ⊗ ρ2(X_B)`.
pub fn split_casimir(rep1: &Representation, rep2: &Representation) -> Result<CMat> {
    if !rep1.same_algebra(rep2) {
        return Err(Error::AlgebraMismatch);
    }
    let binv = rep1.algebra.killing_inv();
    let n = rep1.algebra.dim();
    let mut c = CMat::zeros(rep1.d * rep2.d, rep1.d * rep2.d);
    for a in 0..n {
        // Contract the second index first: Σ_B B^AB Y2_B.
        let mut right = CMat::zeros(rep2.d, rep2.d);
        for b in 0..n {
            let w = binv[(a, b)];
            if w != Complex64::new(0.0, 0.0) {
                right += &rep2.y[b] * w;
            }
        }
        c += kron(&rep1.y[a], &right);
    }
    Ok(c)
}

/// Largest `‖[C, ρ1(X_A)⊗1 + 1⊗ρ2(X_A)]‖` over the basis.
pub fn casimir_invariance_residual(c: &CMat, rep1: &Representation, rep2: &Representation) -> f64 {
    let i1 = CMat::identity(rep1.d, rep1.d);
    let i2 = CMat::identity(rep2.d, rep2.d);
    (0..rep1.algebra.dim())
        .map(|a| {
            let g = kron(&rep1.y[a], &i2) + kron(&i1, &rep2.y[a]);
            fro(&commutator(c, &g))
        })
        .fold(0.0, f64::max)
}

/// A subspace of the algebra, stored as coordinate columns in the adjoint
/// basis, with an optional complement.
#[derive(Debug, Clone)]
pub struct SubalgebraBasis {
    parent: Arc<LieAlgebra>,
    vectors: CMat,
    complement: Option<CMat>,
}

impl SubalgebraBasis {
    pub fn new(parent: Arc<LieAlgebra>, vectors: CMat) -> Result<Self> {
        if vectors.nrows() != parent.dim() && vectors.ncols() > 0 {
            return Err(Error::ShapeMismatch(format!(
                "basis vectors have {} coordinates, algebra has dimension {}",
                vectors.nrows(),
                parent.dim()
            )));
        }
        let vectors = if vectors.ncols() == 0 {
            CMat::zeros(parent.dim(), 0)
        } else {
            vectors
        };
        Ok(SubalgebraBasis {
            parent,
            vectors,
            complement: None,
        })
    }

    pub fn with_complement(mut self, complement: CMat) -> Self {
        self.complement = Some(complement);
        self
    }

    /// The whole algebra.
    pub fn full(parent: Arc<LieAlgebra>) -> Self {
        let n = parent.dim();
        SubalgebraBasis {
            parent,
            vectors: CMat::identity(n, n),
            complement: None,
        }
    }

    pub fn parent(&self) -> &Arc<LieAlgebra> {
        &self.parent
    }

    pub fn vectors(&self) -> &CMat {
        &self.vectors
    }

    pub fn complement(&self) -> Option<&CMat> {
        self.complement.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn vector(&self, i: usize) -> CVec {
        self.vectors.column(i).into_owned()
    }

    /// Largest distance of `[x_i, x_j]` from the span, relative to the basis scale.
    pub fn closure_residual(&self) -> f64 {
        span_bracket_residual(&self.parent, &self.vectors, &self.vectors, &self.vectors)
    }

    /// `[h,f] ⊆ f` and `[f,f] ⊆ h` residuals; `None` without a complement.
    pub fn grading_residuals(&self) -> Option<(f64, f64)> {
        let f = self.complement.as_ref()?;
        let hf = span_bracket_residual(&self.parent, &self.vectors, f, f);
        let ff = span_bracket_residual(&self.parent, f, f, &self.vectors);
        Some((hf, ff))
    }
}

/// Largest relative distance of `[a_i, b_j]` from `span(target)`.
pub fn span_bracket_residual(alg: &LieAlgebra, a: &CMat, b: &CMat, target: &CMat) -> f64 {
    let q = column_space(target, Cutoff::Relative(1e-12));
    let mut worst = 0.0f64;
    for i in 0..a.ncols() {
        let x = a.column(i).into_owned();
        for j in 0..b.ncols() {
            let y = b.column(j).into_owned();
            let br = alg.bracket(&x, &y);
            let scale = (x.norm() * y.norm()).max(1e-300);
            worst = worst.max(distance_to_span(&q, &br) / scale);
        }
    }
    worst
}

/// `End(C^d) = W ⊕ W̄` with `W = ρ(h)` and `W̄` its trace-orthogonal complement.
#[derive(Debug, Clone)]
pub struct EndDecomposition {
    pub sub_basis: Vec<CMat>,
    pub complement_basis: Vec<CMat>,
}

impl EndDecomposition {
    /// Decomposition relative to `ρ(h)`, or to `ρ(g)` when `h` is `None`.
    pub fn new(rep: &Representation, h: Option<&SubalgebraBasis>) -> Self {
        let d = rep.d;
        let sub_basis: Vec<CMat> = match h {
            Some(h) => (0..h.dim()).map(|i| rep.image(&h.vector(i))).collect(),
            None => rep.y.clone(),
        };
        // Rows: vec(Yᵀ) so that row · vec(M) = Tr(Y M).
        let mut a = CMat::zeros(sub_basis.len(), d * d);
        for (r, y) in sub_basis.iter().enumerate() {
            let yt = flatten(&y.transpose());
            for k in 0..d * d {
                a[(r, k)] = yt[k];
            }
        }
        let ker = nullspace(&a, KERNEL_CUTOFF);
        let complement_basis = (0..ker.ncols())
            .map(|j| crate::linalg::unflatten(ker.column(j).as_slice(), d, d))
            .collect();
        EndDecomposition {
            sub_basis,
            complement_basis,
        }
    }

    pub fn orthogonality_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for y in &self.sub_basis {
            for yb in &self.complement_basis {
                worst = worst.max(trace_form(y, yb).norm());
            }
        }
        worst
    }

    /// Whether the two bases together span `End(C^d)`.
    pub fn spans(&self) -> bool {
        let Some(first) = self.sub_basis.first().or(self.complement_basis.first()) else {
            return true;
        };
        let d = first.nrows();
        let cols: Vec<CVec> = self
            .sub_basis
            .iter()
            .chain(&self.complement_basis)
            .map(flatten)
            .collect();
        crate::linalg::rank(&crate::linalg::hstack(&cols, d * d), KERNEL_CUTOFF) == d * d
    }
}

/// Casimir data of a subalgebra `h` with basis `{X_a}`.
#[derive(Debug, Clone)]
pub struct RestrictedCasimir {
    /// `C^(h,12) = B^ab ρ1(X_a) ⊗ ρ2(X_b)`.
    pub split: CMat,
    /// `c^(h,1) = B^ab ρ1(X_a) ρ1(X_b)`.
    pub quadratic: CMat,
    /// `B^ab`, inverse of the Killing form restricted to `h`.
    pub metric_inv: CMat,
}

/// Restricted split and quadratic Casimirs of `h`. Errors when the Killing
/// form restricted to `h` is degenerate.
pub fn restricted_casimir(
    rep1: &Representation,
    rep2: &Representation,
    h: &SubalgebraBasis,
) -> Result<RestrictedCasimir> {
    if !rep1.same_algebra(rep2) || !h.parent.same_as(&rep1.algebra) {
        return Err(Error::AlgebraMismatch);
    }
    let v = &h.vectors;
    let k = v.ncols();
    let bh = v.transpose() * rep1.algebra.killing() * v;
    let rc = rcond(&bh);
    if k > 0 && rc < 1e-10 {
        return Err(Error::SingularMetric { rcond: rc });
    }
    let binv = if k == 0 {
        CMat::zeros(0, 0)
    } else {
        inverse(&bh).ok_or(Error::SingularMetric { rcond: rc })?
    };
    let y1: Vec<CMat> = (0..k).map(|a| rep1.image(&h.vector(a))).collect();
    let y2: Vec<CMat> = (0..k).map(|a| rep2.image(&h.vector(a))).collect();
    let mut split = CMat::zeros(rep1.d * rep2.d, rep1.d * rep2.d);
    let mut quadratic = CMat::zeros(rep1.d, rep1.d);
    for a in 0..k {
        let mut right2 = CMat::zeros(rep2.d, rep2.d);
        let mut right1 = CMat::zeros(rep1.d, rep1.d);
        for b in 0..k {
            right2 += &y2[b] * binv[(a, b)];
            right1 += &y1[b] * binv[(a, b)];
        }
        split += kron(&y1[a], &right2);
        quadratic += &y1[a] * right1;
    }
    Ok(RestrictedCasimir {
        split,
        quadratic,
        metric_inv: binv,
    })
}

/// Centralizer `{X ∈ g : [ρ(X), κ] = 0}` as a canonical basis.
pub fn centralizer(rep: &Representation, kappa: &CMat) -> SubalgebraBasis {
    centralizer_with(rep, kappa, KERNEL_CUTOFF)
}

pub fn centralizer_with(rep: &Representation, kappa: &CMat, cutoff: Cutoff) -> SubalgebraBasis {
    let cols: Vec<CVec> = rep
        .y
        .iter()
        .map(|y| flatten(&commutator(y, kappa)))
        .collect();
    let a = crate::linalg::hstack(&cols, rep.d * rep.d);
    let ker = nullspace(&a, cutoff);
    SubalgebraBasis {
        parent: rep.algebra.clone(),
        vectors: canonical_basis(&ker, cutoff),
        complement: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum AlgebraClass {
    Semisimple,
    Reductive,
    Solvable,
    /// Radical (solvable ideal) plus a Levi factor of the given dimensions.
    Semidirect {
        solvable_dim: usize,
        reductive_dim: usize,
    },
}

impl fmt::Display for AlgebraClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraClass::Semisimple => write!(f, "semisimple"),
            AlgebraClass::Reductive => write!(f, "reductive"),
            AlgebraClass::Solvable => write!(f, "solvable"),
            AlgebraClass::Semidirect {
                solvable_dim,
                reductive_dim,
            } => {
                write!(
                    f,
                    "semidirect(solvable {solvable_dim}, reductive {reductive_dim})"
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SubalgebraReport {
    pub dim: usize,
    /// Dimensions of `h ⊇ [h,h] ⊇ …` until the series stabilizes.
    pub derived_series: Vec<usize>,
    pub center_dim: usize,
    pub radical_dim: usize,
    pub abelian: bool,
    pub class: AlgebraClass,
}

/// Derived series as a list of coordinate-column subspaces, starting with `h`.
pub fn derived_series(alg: &LieAlgebra, h: &CMat) -> Vec<CMat> {
    let mut series = vec![column_space(h, KERNEL_CUTOFF)];
    loop {
        let cur = series.last().expect("non-empty");
        let k = cur.ncols();
        if k == 0 {
            break;
        }
        let mut cols = Vec::with_capacity(k * (k - 1) / 2);
        for i in 0..k {
            for j in i + 1..k {
                cols.push(alg.bracket(&cur.column(i).into_owned(), &cur.column(j).into_owned()));
            }
        }
        let next = if cols.is_empty() {
            CMat::zeros(alg.dim(), 0)
        } else {
            column_space(
                &crate::linalg::hstack(&cols, alg.dim()),
                alg.bracket_cutoff(),
            )
        };
        let stable = next.ncols() == k;
        series.push(next);
        if stable {
            break;
        }
    }
    series
}

/// Dimension data and structural class of a subalgebra. The radical is the
/// Killing-orthogonal of `[h,h]` inside `h` (Cartan's criterion with the
/// trace form of the ambient adjoint representation).
pub fn classify_subalgebra(h: &SubalgebraBasis) -> Result<SubalgebraReport> {
    let closure = h.closure_residual();
    if closure > 1e-8 {
        return Err(Error::NotClosed { residual: closure });
    }
    let alg = &h.parent;
    let series = derived_series(alg, &h.vectors);
    let q = &series[0];
    let k = q.ncols();
    let derived_dims: Vec<usize> = series.iter().map(|s| s.ncols()).collect();

    // Center: x = Q c with [x, q_j] = 0 for all j.
    let center_dim = if k == 0 {
        0
    } else {
        let n = alg.dim();
        let mut m = CMat::zeros(n * k, k);
        for i in 0..k {
            let qi = q.column(i).into_owned();
            for j in 0..k {
                let br = alg.bracket(&qi, &q.column(j).into_owned());
                for r in 0..n {
                    m[(j * n + r, i)] = br[r];
                }
            }
        }
        nullspace(&m, alg.bracket_cutoff()).ncols()
    };

    // Radical: x = Q c with B(x, d) = 0 for all d ∈ [h,h].
    let radical_dim = if k == 0 {
        0
    } else {
        let d1 = series
            .get(1)
            .cloned()
            .unwrap_or_else(|| CMat::zeros(alg.dim(), 0));
        if d1.ncols() == 0 {
            k
        } else {
            let m = d1.transpose() * alg.killing() * q;
            let scale = alg.killing().iter().map(|z| z.norm()).fold(1.0, f64::max);
            nullspace(&m, Cutoff::Absolute(1e-9 * scale)).ncols()
        }
    };

    let solvable = derived_dims.last() == Some(&0);
    let class = if solvable {
        AlgebraClass::Solvable
    } else if radical_dim == 0 {
        AlgebraClass::Semisimple
    } else if radical_dim == center_dim {
        AlgebraClass::Reductive
    } else {
        AlgebraClass::Semidirect {
            solvable_dim: radical_dim,
            reductive_dim: k - radical_dim,
        }
    };
    Ok(SubalgebraReport {
        dim: k,
        derived_series: derived_dims,
        center_dim,
        radical_dim,
        abelian: center_dim == k,
        class,
    })
}
