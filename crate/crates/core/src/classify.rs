//! Involutions hidden in leading coefficients, symmetric-pair certification
//! and classification reports.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kmatrix::{
    bybe_residual, constant_cbybe_residual, jordan_kappa, residual_symmetry, BoundarySetup,
    KFamily, KMatrix,
};
use crate::lie::{
    build_sl, centralizer, classify_subalgebra, contragredient, span_bracket_residual,
    AlgebraClass, LieAlgebra, Representation, SubalgebraBasis, SubalgebraReport,
};
use crate::linalg::{
    canonical_basis, column_space, commutator, eye, flatten, fro, hstack, inverse, nullspace,
    principal_angle, rank, rcond, re, unflatten, CMat, CVec,
};
use crate::spectral::SpectralSampler;
use crate::KERNEL_CUTOFF;

/// `α(X_A) = M_A^B X_B` together with its eigenspaces.
#[derive(Debug, Clone)]
pub struct Involution {
    pub algebra: Arc<LieAlgebra>,
    pub m: CMat,
    /// Norm of the components of `Ad_κ(ρ2(X_A))` outside `ρ1(g)`.
    pub n_defect: f64,
    pub plus_space: SubalgebraBasis,
    pub minus_space: SubalgebraBasis,
    pub square_residual: f64,
    pub automorphism_residual: f64,
    pub orthogonality_residual: f64,
}

impl Involution {
    /// `[h,f] ⊆ f` and `[f,f] ⊆ h` residuals for the eigenspaces.
    pub fn grading_residuals(&self) -> (f64, f64) {
        let h = self.plus_space.vectors();
        let f = self.minus_space.vectors();
        (
            span_bracket_residual(&self.algebra, h, f, f),
            span_bracket_residual(&self.algebra, f, f, h),
        )
    }
}

/// Reads `α` off `Ad_κ(ρ2(X_A)) = ρ1(α(X_A))`, projecting with the trace form
/// of `ρ1`.
pub fn extract_involution(
    kappa: &CMat,
    rep1: &Representation,
    rep2: &Representation,
) -> Result<Involution> {
    extract_involution_with(kappa, rep1, rep2, 1e-10)
}

pub fn extract_involution_with(
    kappa: &CMat,
    rep1: &Representation,
    rep2: &Representation,
    tol: f64,
) -> Result<Involution> {
    if !rep1.same_algebra(rep2) {
        return Err(Error::AlgebraMismatch);
    }
    let kinv = inverse(kappa).ok_or(Error::NotQuasiClassical {
        rcond: rcond(kappa),
    })?;
    let alg = rep1.algebra().clone();
    let n = alg.dim();
    let scale = fro(kappa) * fro(&kinv);
    let mut m = CMat::zeros(n, n);
    let mut n_defect = 0.0f64;
    for a in 0..n {
        let ad = kappa * rep2.y(a) * &kinv;
        let (x, rest) = rep1.decompose(&ad)?;
        for b in 0..n {
            m[(a, b)] = x[b];
        }
        n_defect += fro(&rest).powi(2);
    }
    let n_defect = n_defect.sqrt();
    if n_defect > tol * scale.max(1.0) {
        return Err(Error::CbybeViolation { defect: n_defect });
    }
    let seed = constant_cbybe_residual(kappa, rep1, rep2)?;
    if seed > 1e-8 * scale.max(1.0) {
        return Err(Error::CbybeViolation { defect: seed });
    }

    let id = eye(n);
    let square_residual = fro(&(&m * &m - &id));
    let mut automorphism_residual = 0.0f64;
    for a in 0..n {
        let ma: CVec = m.row(a).transpose();
        for b in 0..n {
            let mb: CVec = m.row(b).transpose();
            let rhs = alg.bracket(&ma, &mb);
            let mut lhs = CVec::zeros(n);
            for e in 0..n {
                let f = alg.f(a, b, e);
                if f != Complex64::new(0.0, 0.0) {
                    lhs += m.row(e).transpose() * f;
                }
            }
            automorphism_residual = automorphism_residual.max((lhs - rhs).norm());
        }
    }
    let orthogonality_residual = match inverse(&m) {
        Some(minv) => fro(&(minv - alg.killing() * m.transpose() * alg.killing_inv())),
        None => f64::INFINITY,
    };
    // α acts on coordinate columns as Mᵀ.
    let mt = m.transpose();
    let plus = canonical_basis(
        &column_space(&((&id + &mt) * re(0.5)), KERNEL_CUTOFF),
        KERNEL_CUTOFF,
    );
    let minus = canonical_basis(
        &column_space(&((&id - &mt) * re(0.5)), KERNEL_CUTOFF),
        KERNEL_CUTOFF,
    );
    let plus_space =
        SubalgebraBasis::new(alg.clone(), plus.clone())?.with_complement(minus.clone());
    let minus_space = SubalgebraBasis::new(alg.clone(), minus)?;
    Ok(Involution {
        algebra: alg,
        m,
        n_defect,
        plus_space,
        minus_space,
        square_residual,
        automorphism_residual,
        orthogonality_residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetricPairReport {
    /// Largest principal angle between the claimed algebra and the fixed algebra.
    pub distance: f64,
    pub grading_hf: f64,
    pub grading_ff: f64,
    pub pass: bool,
}

/// Compares `h_claimed` with the fixed algebra of `inv` and checks the Z₂
/// grading against the `−1` eigenspace.
pub fn symmetric_pair_check(inv: &Involution, h_claimed: &SubalgebraBasis) -> SymmetricPairReport {
    let distance = if h_claimed.dim() != inv.plus_space.dim() {
        std::f64::consts::FRAC_PI_2
    } else {
        principal_angle(h_claimed.vectors(), inv.plus_space.vectors(), KERNEL_CUTOFF)
    };
    let f = inv.minus_space.vectors();
    let h = h_claimed.vectors();
    let grading_hf = span_bracket_residual(&inv.algebra, h, f, f);
    let grading_ff = span_bracket_residual(&inv.algebra, f, f, h);
    let pass = distance <= 1e-8 && grading_hf <= 1e-10 && grading_ff <= 1e-10;
    SymmetricPairReport {
        distance,
        grading_hf,
        grading_ff,
        pass,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TwistClass {
    /// `ρ2 = ρ1`; the involution is inner.
    Inner,
    /// `ρ2 = ρ1_cg` and no intertwiner exists.
    Outer,
    /// `ρ2 = ρ1_cg` but the two representations are equivalent.
    InnerEquivalent,
    NonQuasiClassical,
}

impl fmt::Display for TwistClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TwistClass::Inner => "inner",
            TwistClass::Outer => "outer",
            TwistClass::InnerEquivalent => "inner-equivalent",
            TwistClass::NonQuasiClassical => "non-quasi-classical",
        })
    }
}

/// Invertible `V` with `V ρ(α(X)) = ρ(X) V` for every basis element, if any.
pub fn intertwiner(inv: &Involution, rep: &Representation) -> Option<CMat> {
    let d = rep.d();
    let n = inv.algebra.dim();
    let alpha_images: Vec<CMat> = (0..n)
        .map(|a| rep.image(&inv.m.row(a).transpose()))
        .collect();
    let cols: Vec<CVec> = (0..d * d)
        .map(|e| {
            let v = crate::linalg::unit(d, e / d, e % d);
            let parts: Vec<Complex64> = (0..n)
                .flat_map(|a| {
                    flatten(&(&v * &alpha_images[a] - rep.y(a) * &v))
                        .iter()
                        .copied()
                        .collect::<Vec<_>>()
                })
                .collect();
            CVec::from_vec(parts)
        })
        .collect();
    let ker = nullspace(&hstack(&cols, cols[0].len()), KERNEL_CUTOFF);
    if ker.ncols() == 0 {
        return None;
    }
    // A fixed generic combination is invertible whenever some element is.
    let mut v = CMat::zeros(d, d);
    for j in 0..ker.ncols() {
        let w = Complex64::new(1.0 + 0.37 * j as f64, 0.21 * (j as f64 + 1.0).sqrt());
        v += unflatten(ker.column(j).as_slice(), d, d) * w;
    }
    (rcond(&v) > 1e-8).then_some(v)
}

/// Inner when both legs carry the same representation; for a contragredient
/// second leg, outer unless an intertwiner for the involution exists.
pub fn twist_class(
    kappa: &CMat,
    rep1: &Representation,
    rep2: &Representation,
) -> Result<TwistClass> {
    if inverse(kappa).is_none() {
        return Ok(TwistClass::NonQuasiClassical);
    }
    let tol = 1e-12;
    if rep2.same_matrices(rep1, tol) {
        extract_involution(kappa, rep1, rep2)?;
        return Ok(TwistClass::Inner);
    }
    if rep2.same_matrices(&contragredient(rep1), tol) {
        let inv = extract_involution(kappa, rep1, rep2)?;
        return Ok(if intertwiner(&inv, rep1).is_some() {
            TwistClass::InnerEquivalent
        } else {
            TwistClass::Outer
        });
    }
    Err(Error::UnsupportedRepPair(
        "second leg is neither ρ nor its contragredient".into(),
    ))
}

/// Exact integer bases of the centralizer of a nilpotent `κ` with `k` Jordan
/// blocks, and their bracket relations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolvableStructure {
    pub n: usize,
    pub k: usize,
    /// Dimensions of `h₂, h_D, h₊, h₋, h_r`.
    pub dims: [usize; 5],
    pub total_dim: usize,
    pub centralizer_dim: usize,
    /// Every constructed element commutes with `κ`.
    pub commutes_with_kappa: bool,
    /// `(relation, holds)` for each bracket relation of the table.
    pub relations: Vec<(String, bool)>,
    /// `[h_s,h_s] = h₂ + h₊ + h₋` and `[h₁,h₁] = h₂`.
    pub derived_series_ok: bool,
    pub h2_abelian: bool,
}

impl SolvableStructure {
    pub fn matches_centralizer(&self) -> bool {
        self.total_dim == self.centralizer_dim
    }

    pub fn relations_hold(&self) -> bool {
        self.relations.iter().all(|(_, ok)| *ok)
    }
}

type IMat = Vec<Vec<i64>>;

fn izeros(n: usize) -> IMat {
    vec![vec![0; n]; n]
}

fn ielem(n: usize, i: usize, j: usize) -> IMat {
    let mut m = izeros(n);
    m[i][j] = 1;
    m
}

fn icomm(a: &IMat, b: &IMat) -> IMat {
    let n = a.len();
    let mut out = izeros(n);
    for i in 0..n {
        for j in 0..n {
            let mut s = 0;
            for l in 0..n {
                s += a[i][l] * b[l][j] - b[i][l] * a[l][j];
            }
            out[i][j] = s;
        }
    }
    out
}

fn is_zero(a: &IMat) -> bool {
    a.iter().all(|r| r.iter().all(|&x| x == 0))
}

fn to_cmat(a: &IMat) -> CMat {
    let n = a.len();
    CMat::from_fn(n, n, |i, j| re(a[i][j] as f64))
}

fn span_dim(ms: &[IMat], n: usize) -> usize {
    if ms.is_empty() {
        return 0;
    }
    let cols: Vec<CVec> = ms.iter().map(|m| flatten(&to_cmat(m))).collect();
    rank(&hstack(&cols, n * n), KERNEL_CUTOFF)
}

/// Builds `h₂ = {E_{2a−1,2b}}`, `h_D = {(n−2k)(E_{2a−1,2a−1}+E_{2a,2a}) − 2Σ_{i>2k} E_ii}`,
/// `h₊ = {E_{2a−1,i}}`, `h₋ = {E_{i,2a}}` (one-based, `i > 2k`) and
/// `h_r = sl(n−2k)` on the last block, and verifies the bracket table.
pub fn solvable_structure(n: usize, k: usize) -> Result<SolvableStructure> {
    if k == 0 || 2 * k >= n {
        return Err(Error::OutOfDomain(format!(
            "need 1 ≤ k and 2k < n (h_D divides by n − 2k); got n={n}, k={k}"
        )));
    }
    let r = n - 2 * k;
    let h2: Vec<IMat> = (0..k)
        .flat_map(|a| (0..k).map(move |b| ielem(n, 2 * a, 2 * b + 1)))
        .collect();
    let hd: Vec<IMat> = (0..k)
        .map(|a| {
            let mut m = izeros(n);
            m[2 * a][2 * a] = r as i64;
            m[2 * a + 1][2 * a + 1] = r as i64;
            for i in 2 * k..n {
                m[i][i] = -2;
            }
            m
        })
        .collect();
    let hp: Vec<IMat> = (0..k)
        .flat_map(|a| (2 * k..n).map(move |i| ielem(n, 2 * a, i)))
        .collect();
    let hm: Vec<IMat> = (0..k)
        .flat_map(|a| (2 * k..n).map(move |i| ielem(n, i, 2 * a + 1)))
        .collect();
    let mut hr: Vec<IMat> = Vec::new();
    for i in 2 * k..n {
        for j in 2 * k..n {
            if i != j {
                hr.push(ielem(n, i, j));
            }
        }
    }
    for i in 2 * k..n.saturating_sub(1) {
        let mut m = izeros(n);
        m[i][i] = 1;
        m[i + 1][i + 1] = -1;
        hr.push(m);
    }

    // Support masks: h₂, h₊ and h₋ are spanned by elementary matrices.
    let mask = |set: &[IMat]| -> Vec<Vec<bool>> {
        let mut s = vec![vec![false; n]; n];
        for m in set {
            for i in 0..n {
                for j in 0..n {
                    if m[i][j] != 0 {
                        s[i][j] = true;
                    }
                }
            }
        }
        s
    };
    let within =
        |m: &IMat, s: &Vec<Vec<bool>>| (0..n).all(|i| (0..n).all(|j| m[i][j] == 0 || s[i][j]));
    let (m2, mp, mmn) = (mask(&h2), mask(&hp), mask(&hm));

    let all_zero =
        |a: &[IMat], b: &[IMat]| a.iter().all(|x| b.iter().all(|y| is_zero(&icomm(x, y))));
    let all_within = |a: &[IMat], b: &[IMat], s: &Vec<Vec<bool>>| {
        a.iter().all(|x| b.iter().all(|y| within(&icomm(x, y), s)))
    };
    let relations = vec![
        ("[h2,h2]=0".to_string(), all_zero(&h2, &h2)),
        ("[h2,h+]=0".to_string(), all_zero(&h2, &hp)),
        ("[h2,h-]=0".to_string(), all_zero(&h2, &hm)),
        ("[hD,hD]=0".to_string(), all_zero(&hd, &hd)),
        ("[h+,h+]=0".to_string(), all_zero(&hp, &hp)),
        ("[h-,h-]=0".to_string(), all_zero(&hm, &hm)),
        ("[hD,h2]<=h2".to_string(), all_within(&hd, &h2, &m2)),
        ("[hD,h+]<=h+".to_string(), all_within(&hd, &hp, &mp)),
        ("[hD,h-]<=h-".to_string(), all_within(&hd, &hm, &mmn)),
        ("[h+,h-]<=h2".to_string(), all_within(&hp, &hm, &m2)),
    ];

    let kappa = {
        let mut m = izeros(n);
        for a in 0..k {
            m[2 * a][2 * a + 1] = 1;
        }
        m
    };
    let constructed: Vec<IMat> = h2
        .iter()
        .chain(&hd)
        .chain(&hp)
        .chain(&hm)
        .chain(&hr)
        .cloned()
        .collect();
    let commutes_with_kappa = constructed.iter().all(|x| is_zero(&icomm(x, &kappa)));

    let hs: Vec<IMat> = h2
        .iter()
        .chain(&hd)
        .chain(&hp)
        .chain(&hm)
        .cloned()
        .collect();
    let brackets = |set: &[IMat]| -> Vec<IMat> {
        let mut out = Vec::new();
        for (i, x) in set.iter().enumerate() {
            for y in &set[i + 1..] {
                let c = icomm(x, y);
                if !is_zero(&c) {
                    out.push(c);
                }
            }
        }
        out
    };
    let h1: Vec<IMat> = h2.iter().chain(&hp).chain(&hm).cloned().collect();
    let d_hs = brackets(&hs);
    let d_h1 = brackets(&h1);
    let same_span = |a: &[IMat], b: &[IMat]| {
        let joint: Vec<IMat> = a.iter().chain(b).cloned().collect();
        let (da, db) = (span_dim(a, n), span_dim(b, n));
        da == db && span_dim(&joint, n) == da
    };
    let derived_series_ok = same_span(&d_hs, &h1) && same_span(&d_h1, &h2);

    let (_, rep) = build_sl(n)?;
    let centralizer_dim = centralizer(&rep, &jordan_kappa(n, k)).dim();
    let dims = [h2.len(), hd.len(), hp.len(), hm.len(), hr.len()];
    Ok(SolvableStructure {
        n,
        k,
        dims,
        total_dim: span_dim(&constructed, n),
        centralizer_dim,
        commutes_with_kappa,
        h2_abelian: all_zero(&h2, &h2),
        relations,
        derived_series_ok,
    })
}

/// One named check with its residual and tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            residual,
            tolerance,
            pass: residual <= tolerance,
        }
    }

    /// A check on an exact count: residual is the absolute difference.
    pub fn count(name: impl Into<String>, got: usize, expected: usize) -> Self {
        Check::new(name, (got as f64 - expected as f64).abs(), 0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvolutionSummary {
    pub plus_dim: usize,
    pub minus_dim: usize,
    pub n_defect: f64,
    pub square_residual: f64,
    pub automorphism_residual: f64,
    pub orthogonality_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub k_family: String,
    pub quasi_classical: bool,
    pub involution: Option<InvolutionSummary>,
    pub residual_algebra: SubalgebraReport,
    pub twist_class: TwistClass,
    pub symmetric_pair: Option<SymmetricPairReport>,
    pub solvable: Option<SolvableStructure>,
    pub checks: Vec<Check>,
}

impl ClassificationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// `key = value` summary lines, without the checks.
    pub fn summary_lines(&self) -> Vec<String> {
        let (solvable_dim, reductive_dim) = match self.residual_algebra.class {
            AlgebraClass::Solvable => (self.residual_algebra.dim, 0),
            AlgebraClass::Semidirect {
                solvable_dim,
                reductive_dim,
            } => (solvable_dim, reductive_dim),
            AlgebraClass::Semisimple | AlgebraClass::Reductive => (0, self.residual_algebra.dim),
        };
        let mut lines = vec![
            format!("k_family = {}", self.k_family),
            format!("quasi_classical = {}", self.quasi_classical),
            format!("twist_class = {}", self.twist_class),
            format!("h.dim = {}", self.residual_algebra.dim),
            format!("h.class = {}", self.residual_algebra.class),
            format!("h.center_dim = {}", self.residual_algebra.center_dim),
            format!("h.radical_dim = {}", self.residual_algebra.radical_dim),
            format!(
                "h.derived_series = {}",
                self.residual_algebra
                    .derived_series
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            format!("h.solvable_dim = {solvable_dim}"),
            format!("h.reductive_dim = {reductive_dim}"),
        ];
        if let Some(inv) = &self.involution {
            lines.push(format!("involution.plus_dim = {}", inv.plus_dim));
            lines.push(format!("involution.minus_dim = {}", inv.minus_dim));
        }
        if let Some(sp) = &self.symmetric_pair {
            lines.push(format!(
                "symmetric_pair = {}",
                if sp.pass { "pass" } else { "fail" }
            ));
        }
        if let Some(s) = &self.solvable {
            lines.push(format!(
                "solvable.dims = {}",
                s.dims
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ));
            lines.push(format!("solvable.total_dim = {}", s.total_dim));
            lines.push(format!("solvable.centralizer_dim = {}", s.centralizer_dim));
        }
        lines
    }

    /// Flat `key = value` lines: the summary, one line per check, and the verdict.
    pub fn to_key_value(&self) -> String {
        let mut lines = self.summary_lines();
        for c in &self.checks {
            lines.push(format!(
                "check.{} = {} residual={:.3e} tol={:.1e}",
                c.name,
                if c.pass { "pass" } else { "fail" },
                c.residual,
                c.tolerance
            ));
        }
        lines.push(format!("all_pass = {}", self.all_pass()));
        lines.join("\n") + "\n"
    }
}

fn stage<T>(r: Result<T>, name: &'static str) -> Result<T> {
    r.map_err(|e| e.at_stage(name))
}

/// Expansion, quasi-classicality, involution, residual symmetry and its
/// structure, in that order.
pub fn classify_kmatrix(k: &KMatrix, samples: usize, tol: f64) -> Result<ClassificationReport> {
    let kappa = stage(k.leading(), "expansion")?;
    let qc = inverse(&kappa).is_some();
    let (rep1, rep2) = k.reps();
    let mut checks = Vec::new();
    let sym = stage(residual_symmetry(k, samples), "residual_symmetry")?;
    let closure = sym.algebra.closure_residual();
    checks.push(Check::new("residual_symmetry_closure", closure, tol));
    let residual_algebra = stage(classify_subalgebra(&sym.algebra), "classify_subalgebra")?;

    let (involution, symmetric_pair, twist, solvable);
    if qc && k.d_b() == 1 {
        let inv = stage(extract_involution(&kappa, rep1, rep2), "involution")?;
        checks.push(Check::new("involution_n_defect", inv.n_defect, tol));
        checks.push(Check::new("involution_square", inv.square_residual, tol));
        checks.push(Check::new(
            "involution_automorphism",
            inv.automorphism_residual,
            tol,
        ));
        checks.push(Check::new(
            "involution_orthogonality",
            inv.orthogonality_residual,
            tol,
        ));
        let sp = symmetric_pair_check(&inv, &sym.algebra);
        checks.push(Check::new("symmetric_pair_distance", sp.distance, 1e-8));
        checks.push(Check::new(
            "symmetric_pair_grading",
            sp.grading_hf.max(sp.grading_ff),
            tol,
        ));
        twist = stage(twist_class(&kappa, rep1, rep2), "twist_class")?;
        involution = Some(InvolutionSummary {
            plus_dim: inv.plus_space.dim(),
            minus_dim: inv.minus_space.dim(),
            n_defect: inv.n_defect,
            square_residual: inv.square_residual,
            automorphism_residual: inv.automorphism_residual,
            orthogonality_residual: inv.orthogonality_residual,
        });
        symmetric_pair = Some(sp);
        solvable = None;
    } else {
        involution = None;
        symmetric_pair = None;
        twist = if qc {
            TwistClass::Inner
        } else {
            TwistClass::NonQuasiClassical
        };
        solvable = match k.family() {
            KFamily::Nilpotent { k: blocks } if 2 * blocks < k.d() => {
                let s = stage(solvable_structure(k.d(), *blocks), "solvable_structure")?;
                checks.push(Check::count(
                    "solvable_relations",
                    s.relations.iter().filter(|r| !r.1).count(),
                    0,
                ));
                checks.push(Check::count(
                    "solvable_dim_vs_residual_symmetry",
                    s.total_dim,
                    sym.algebra.dim(),
                ));
                Some(s)
            }
            _ => None,
        };
    }
    Ok(ClassificationReport {
        k_family: k.func().meta().to_string(),
        quasi_classical: qc,
        involution,
        residual_algebra,
        twist_class: twist,
        symmetric_pair,
        solvable,
        checks,
    })
}

/// Reflection-equation and family-specific checks at seeded sample pairs.
pub fn verify_kmatrix(
    k: &KMatrix,
    setup: &BoundarySetup,
    pairs: usize,
    seed: u64,
    tol: f64,
) -> Result<Vec<Check>> {
    let mut sampler = SpectralSampler::new(seed);
    let mut worst = 0.0f64;
    for (u, v) in sampler.pairs(pairs) {
        let scale = fro(&k.evaluate(u)?) * fro(&k.evaluate(v)?);
        worst = worst.max(bybe_residual(setup, k, u, v)? / scale.max(1.0));
    }
    let mut checks = vec![Check::new("bybe_max_residual", worst, tol)];
    if let KFamily::Nilpotent { .. } = k.family() {
        let mut unit_worst = 0.0f64;
        for _ in 0..pairs.min(20) {
            let u = sampler.point();
            let prod = k.evaluate(u)? * k.evaluate(-u)? + eye(k.d()) / (u * u);
            unit_worst = unit_worst.max(fro(&prod));
        }
        checks.push(Check::new("unitarity", unit_worst, tol));
    }
    if k.d_b() == 1 {
        let kappa = k.leading()?;
        if inverse(&kappa).is_some() {
            let (rep1, rep2) = k.reps();
            checks.push(Check::new(
                "constant_cbybe",
                constant_cbybe_residual(&kappa, rep1, rep2)?,
                tol,
            ));
        }
    }
    Ok(checks)
}

/// `[x, y]` of two matrices, for callers working in the defining representation.
pub fn matrix_bracket(a: &CMat, b: &CMat) -> CMat {
    commutator(a, b)
}
