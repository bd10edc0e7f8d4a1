//! Dense complex linear algebra used throughout the crate: tensor-leg
//! embeddings, rank-revealing kernels and subspace comparisons.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

#[inline]
pub const fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn zeros(r: usize, c: usize) -> CMat {
    CMat::zeros(r, c)
}

pub fn eye(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Matrix with a single unit entry at `(i, j)`.
pub fn unit(n: usize, i: usize, j: usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    m[(i, j)] = Complex64::new(1.0, 0.0);
    m
}

pub fn diag(entries: &[Complex64]) -> CMat {
    let n = entries.len();
    let mut m = CMat::zeros(n, n);
    for (i, &e) in entries.iter().enumerate() {
        m[(i, i)] = e;
    }
    m
}

pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> CMat {
    CMat::from_row_iterator(rows, cols, data.iter().map(|&x| re(x)))
}

/// Kronecker product with the row-major leg convention `(i, j) -> i * d2 + j`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// Frobenius norm.
pub fn fro(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Plain (bilinear, non-conjugated) trace form `Tr(a b)`.
pub fn trace_form(a: &CMat, b: &CMat) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Row-major flattening of a matrix into a column vector.
pub fn flatten(a: &CMat) -> CVec {
    CVec::from_iterator(
        a.nrows() * a.ncols(),
        (0..a.nrows()).flat_map(|i| (0..a.ncols()).map(move |j| a[(i, j)])),
    )
}

pub fn unflatten(v: &[Complex64], rows: usize, cols: usize) -> CMat {
    CMat::from_row_slice(rows, cols, v)
}

/// Swap operator on `C^{d1} ⊗ C^{d2}`, mapping `e_i ⊗ e_j` to `e_j ⊗ e_i`.
pub fn swap_operator(d1: usize, d2: usize) -> CMat {
    let mut p = CMat::zeros(d1 * d2, d1 * d2);
    for i in 0..d1 {
        for j in 0..d2 {
            p[(j * d1 + i, i * d2 + j)] = Complex64::new(1.0, 0.0);
        }
    }
    p
}

fn decode(mut idx: usize, dims: &[usize], out: &mut [usize]) {
    for l in (0..dims.len()).rev() {
        out[l] = idx % dims[l];
        idx /= dims[l];
    }
}

/// Transpose of one tensor leg of an operator on `⊗ C^{dims[l]}`.
pub fn partial_transpose(m: &CMat, dims: &[usize], leg: usize) -> CMat {
    let n: usize = dims.iter().product();
    assert_eq!(m.nrows(), n);
    let mut out = CMat::zeros(n, n);
    let mut r = vec![0; dims.len()];
    let mut c = vec![0; dims.len()];
    let encode = |v: &[usize]| v.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x);
    for i in 0..n {
        decode(i, dims, &mut r);
        for j in 0..n {
            decode(j, dims, &mut c);
            std::mem::swap(&mut r[leg], &mut c[leg]);
            out[(encode(&r), encode(&c))] = m[(i, j)];
            std::mem::swap(&mut r[leg], &mut c[leg]);
        }
    }
    out
}

/// Embeds an operator acting on the tensor legs `legs` (in that order) into
/// the full space `⊗_l C^{dims[l]}`, acting as identity on the other legs.
///
/// `embed(r, &[1, 0], ..)` is the leg-swapped `R_21`, and `embed(r, &[0, 2], ..)`
/// equals `P_23 (R ⊗ 1) P_32` on three legs.
pub fn embed(op: &CMat, legs: &[usize], dims: &[usize]) -> CMat {
    let sub: usize = legs.iter().map(|&l| dims[l]).product();
    assert_eq!(
        op.nrows(),
        sub,
        "operator size does not match the selected legs"
    );
    assert_eq!(
        op.ncols(),
        sub,
        "operator size does not match the selected legs"
    );
    let n: usize = dims.iter().product();
    let others: Vec<usize> = (0..dims.len()).filter(|l| !legs.contains(l)).collect();
    let n_other: usize = others.iter().map(|&l| dims[l]).product();

    let strides: Vec<usize> = (0..dims.len())
        .map(|l| dims[l + 1..].iter().product())
        .collect();
    // Offset in the full index contributed by a sub-index on `legs`.
    let leg_offset = |mut s: usize| -> usize {
        let mut off = 0;
        for &l in legs.iter().rev() {
            off += (s % dims[l]) * strides[l];
            s /= dims[l];
        }
        off
    };
    let other_offset = |mut s: usize| -> usize {
        let mut off = 0;
        for &l in others.iter().rev() {
            off += (s % dims[l]) * strides[l];
            s /= dims[l];
        }
        off
    };
    let sub_off: Vec<usize> = (0..sub).map(leg_offset).collect();

    let mut out = CMat::zeros(n, n);
    for o in 0..n_other {
        let base = other_offset(o);
        for i in 0..sub {
            for j in 0..sub {
                let z = op[(i, j)];
                if z != Complex64::new(0.0, 0.0) {
                    out[(base + sub_off[i], base + sub_off[j])] = z;
                }
            }
        }
    }
    out
}

/// Cutoff rule for rank decisions.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Cutoff {
    /// `max(rows, cols) · ε · σ_max`
    #[default]
    Machine,
    /// `rel · σ_max`
    Relative(f64),
    Absolute(f64),
}

impl Cutoff {
    fn threshold(self, rows: usize, cols: usize, smax: f64) -> f64 {
        match self {
            Cutoff::Machine => rows.max(cols) as f64 * f64::EPSILON * smax,
            Cutoff::Relative(r) => r * smax,
            Cutoff::Absolute(a) => a,
        }
    }
}

fn to_faer(a: &CMat) -> faer::Mat<Complex64> {
    faer::Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

fn from_faer(a: faer::MatRef<'_, Complex64>) -> CMat {
    CMat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

/// Full SVD `a = u · diag(s) · v^H` with `u`, `v` square and `s` of length
/// `min(rows, cols)` in decreasing order.
///
/// Delegates to faer: nalgebra's complex bidiagonal SVD loses accuracy on
/// rank-deficient input.
pub fn svd_full(a: &CMat) -> (CMat, Vec<f64>, CMat) {
    let (m, k) = a.shape();
    if m == 0 || k == 0 {
        return (CMat::identity(m, m), Vec::new(), CMat::identity(k, k));
    }
    let svd = to_faer(a).svd().expect("SVD of a finite matrix converges");
    let s = (0..m.min(k)).map(|i| svd.S()[i].re).collect();
    (from_faer(svd.U()), s, from_faer(svd.V()))
}

/// Orthonormal basis (as columns) of the kernel of `a`.
pub fn nullspace(a: &CMat, cutoff: Cutoff) -> CMat {
    let k = a.ncols();
    if k == 0 {
        return CMat::zeros(0, 0);
    }
    if a.nrows() == 0 {
        return CMat::identity(k, k);
    }
    let (_, s, v) = svd_full(a);
    let smax = s.first().copied().unwrap_or(0.0);
    let thr = cutoff.threshold(a.nrows(), k, smax);
    let rank = s.iter().take(k).filter(|&&x| x > thr).count();
    v.columns(rank, k - rank).into_owned()
}

pub fn singular_values(a: &CMat) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    to_faer(a)
        .singular_values()
        .expect("SVD of a finite matrix converges")
}

pub fn rank(a: &CMat, cutoff: Cutoff) -> usize {
    let s = singular_values(a);
    let smax = s.first().copied().unwrap_or(0.0);
    let thr = cutoff.threshold(a.nrows(), a.ncols(), smax);
    s.iter().filter(|&&x| x > thr && x > 0.0).count()
}

/// Orthonormal basis (as columns) of the column space of `a`.
pub fn column_space(a: &CMat, cutoff: Cutoff) -> CMat {
    if a.ncols() == 0 || a.nrows() == 0 {
        return CMat::zeros(a.nrows(), 0);
    }
    let (u, s, _) = svd_full(a);
    let smax = s.first().copied().unwrap_or(0.0);
    let thr = cutoff.threshold(a.nrows(), a.ncols(), smax);
    let r = s.iter().filter(|&&x| x > thr && x > 0.0).count();
    u.columns(0, r).into_owned()
}

/// Canonical reduced-row-echelon basis of the column span of `cols`.
///
/// The span is first made orthonormal, then brought to the unique form whose
/// pivot coordinates (earliest adjoint-basis indices) are unit vectors, so two
/// numerically equal subspaces always produce the same readable basis.
pub fn canonical_basis(cols: &CMat, cutoff: Cutoff) -> CMat {
    let q = column_space(cols, cutoff);
    let r = q.ncols();
    if r == 0 {
        return q;
    }
    // Work on rows = basis vectors.
    let mut m = q.transpose();
    let (rows, ncol) = m.shape();
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    let mut pivot_row = 0;
    for col in 0..ncol {
        if pivot_row == rows {
            break;
        }
        let (best, val) =
            (pivot_row..rows)
                .map(|i| (i, m[(i, col)].norm()))
                .fold(
                    (pivot_row, -1.0),
                    |acc, x| if x.1 > acc.1 { x } else { acc },
                );
        if val <= 1e-9 * scale {
            continue;
        }
        m.swap_rows(pivot_row, best);
        let p = m[(pivot_row, col)];
        for j in 0..ncol {
            m[(pivot_row, j)] /= p;
        }
        for i in 0..rows {
            if i != pivot_row {
                let f = m[(i, col)];
                if f != Complex64::new(0.0, 0.0) {
                    for j in 0..ncol {
                        let t = m[(pivot_row, j)];
                        m[(i, j)] -= f * t;
                    }
                }
            }
        }
        pivot_row += 1;
    }
    // Flush rounding dust to exact zeros so reports stay readable.
    for z in m.iter_mut() {
        if z.re.abs() < 1e-13 {
            z.re = 0.0;
        }
        if z.im.abs() < 1e-13 {
            z.im = 0.0;
        }
    }
    m.transpose()
}

/// Sine of the largest principal angle between two column spans; 1 when the
/// dimensions differ.
pub fn subspace_sine(a: &CMat, b: &CMat, cutoff: Cutoff) -> f64 {
    let qa = column_space(a, cutoff);
    let qb = column_space(b, cutoff);
    if qa.ncols() != qb.ncols() {
        return 1.0;
    }
    if qa.ncols() == 0 {
        return 0.0;
    }
    let proj = &qb - &qa * (qa.adjoint() * &qb);
    let s = singular_values(&proj);
    s.first().copied().unwrap_or(0.0).min(1.0)
}

/// Largest principal angle (radians) between two column spans.
pub fn principal_angle(a: &CMat, b: &CMat, cutoff: Cutoff) -> f64 {
    subspace_sine(a, b, cutoff).asin()
}

/// Distance from `v` to the column span of the orthonormal matrix `q`.
pub fn distance_to_span(q: &CMat, v: &CVec) -> f64 {
    if q.ncols() == 0 {
        return v.norm();
    }
    (v - q * (q.adjoint() * v)).norm()
}

/// Minimum-norm least-squares solution of `a x = b` (SVD pseudo-inverse).
pub fn lstsq(a: &CMat, b: &CMat, cutoff: Cutoff) -> CMat {
    let (u, s, v) = svd_full(a);
    let smax = s.first().copied().unwrap_or(0.0);
    let thr = cutoff.threshold(a.nrows(), a.ncols(), smax);
    let r = s
        .iter()
        .take(u.ncols())
        .filter(|&&x| x > thr && x > 0.0)
        .count();
    let mut x = CMat::zeros(a.ncols(), b.ncols());
    for i in 0..r {
        let ui = u.column(i);
        let coef = ui.adjoint() * b / Complex64::new(s[i], 0.0);
        x += v.column(i) * coef;
    }
    x
}

/// Ratio of smallest to largest singular value (0 for singular input).
pub fn rcond(a: &CMat) -> f64 {
    let s = singular_values(a);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if hi > 0.0 => lo / hi,
        _ => 0.0,
    }
}

pub fn inverse(a: &CMat) -> Option<CMat> {
    if rcond(a) < 1e-13 {
        return None;
    }
    a.clone().try_inverse()
}

/// Stacks columns of several matrices horizontally.
pub fn hstack(cols: &[CVec], rows: usize) -> CMat {
    let mut m = CMat::zeros(rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        m.set_column(j, c);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rand_mat(n: usize, seed: u64) -> CMat {
        let mut s = seed;
        CMat::from_fn(n, n, |_, _| {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let a = ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5;
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let b = ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5;
            c64(a, b)
        })
    }

    #[test]
    fn rank_one_projector_column_space() {
        let a = from_real(3, 3, &[0.5, -0.5, 0.0, -0.5, 0.5, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(singular_values(&a)[0], 1.0);
        let q = column_space(&a, Cutoff::Machine);
        assert_eq!(q.ncols(), 1);
        let expected = from_real(3, 1, &[1.0, -1.0, 0.0]);
        assert!(principal_angle(&q, &expected, Cutoff::Machine) < 1e-15);
    }

    #[test]
    fn svd_reconstructs_rank_deficient_products() {
        for seed in 0..20 {
            let a = rand_mat(6, seed);
            let low = a.columns(0, 2) * a.rows(0, 2);
            let (u, s, v) = svd_full(&low);
            let mut sm = CMat::zeros(6, 6);
            for (i, x) in s.iter().enumerate() {
                sm[(i, i)] = re(*x);
            }
            assert!(fro(&(u * sm * v.adjoint() - &low)) <= 1e-14 * fro(&low));
            assert_eq!(rank(&low, Cutoff::Machine), 2);
        }
    }

    #[test]
    fn swap_conjugates_kron() {
        let a = rand_mat(2, 1);
        let b = rand_mat(3, 2);
        let p = swap_operator(2, 3);
        let lhs = &p * kron(&a, &b) * p.transpose();
        assert!(fro(&(lhs - kron(&b, &a))) < 1e-14);
    }

    #[test]
    fn embed_thirteen_matches_p23_conjugation() {
        let (d1, d2, d3) = (2, 3, 2);
        let r = rand_mat(d1 * d3, 7);
        let p23 = kron(&eye(d1), &swap_operator(d3, d2));
        let p32 = kron(&eye(d1), &swap_operator(d2, d3));
        let direct = &p23 * kron(&r, &eye(d2)) * &p32;
        let e = embed(&r, &[0, 2], &[d1, d2, d3]);
        assert!(fro(&(direct - e)) < 1e-14);
    }

    #[test]
    fn embed_swapped_legs_is_swap_conjugate() {
        let r = rand_mat(4, 3);
        let p = swap_operator(2, 2);
        let e = embed(&r, &[1, 0], &[2, 2]);
        assert!(fro(&(e - &p * &r * &p)) < 1e-14);
    }

    #[test]
    fn partial_transpose_of_swap_is_trace_operator() {
        let n = 3;
        let q = partial_transpose(&swap_operator(n, n), &[n, n], 0);
        let mut phi = CVec::zeros(n * n);
        for i in 0..n {
            phi[i * n + i] = re(1.0);
        }
        assert!(fro(&(q - &phi * phi.transpose())) < 1e-15);
    }

    #[test]
    fn nullspace_of_wide_matrix() {
        let a = from_real(1, 3, &[1.0, 1.0, 0.0]);
        let ns = nullspace(&a, Cutoff::Machine);
        assert_eq!(ns.ncols(), 2);
        assert!(fro(&(&a * &ns)) < 1e-14);
    }

    #[test]
    fn canonical_basis_is_rref() {
        let v = from_real(3, 2, &[2.0, 1.0, 2.0, 1.0, 0.0, 1.0]);
        let b = canonical_basis(&v, Cutoff::Machine);
        let expect = from_real(3, 2, &[1.0, 0.0, 1.0, 0.0, 0.0, 1.0]);
        assert!(fro(&(b - expect)) < 1e-12);
    }

    #[test]
    fn principal_angle_detects_tilt() {
        let a = from_real(3, 1, &[1.0, 0.0, 0.0]);
        let b = from_real(3, 1, &[1.0, 1e-9, 0.0]);
        let ang = principal_angle(&a, &b, Cutoff::Machine);
        assert!((ang - 1e-9).abs() < 1e-15);
    }
}
