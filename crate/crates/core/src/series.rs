//! Matrix-valued truncated series in `1/u` and rational matrix functions with
//! scalar denominators.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::io::{content_lines, parse_usizes, read_matrix_from, write_matrix};
use crate::linalg::{fro, inverse, kron, rcond, CMat};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `Σ_{r=0..R} c⁽ʳ⁾ u^(−r)`, valid up to and including order `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSeries {
    rows: usize,
    cols: usize,
    coeffs: Vec<CMat>,
}

impl MatrixSeries {
    pub fn new(coeffs: Vec<CMat>) -> Result<Self> {
        let first = coeffs.first().ok_or_else(|| {
            Error::InvalidArgument("series needs at least one coefficient".into())
        })?;
        let (rows, cols) = first.shape();
        if coeffs.iter().any(|c| c.shape() != (rows, cols)) {
            return Err(Error::ShapeMismatch(
                "series coefficients differ in shape".into(),
            ));
        }
        Ok(MatrixSeries { rows, cols, coeffs })
    }

    pub fn zero(rows: usize, cols: usize, order: usize) -> Self {
        MatrixSeries {
            rows,
            cols,
            coeffs: vec![CMat::zeros(rows, cols); order + 1],
        }
    }

    pub fn identity(d: usize, order: usize) -> Self {
        Self::constant(CMat::identity(d, d), order)
    }

    pub fn constant(m: CMat, order: usize) -> Self {
        let mut s = Self::zero(m.nrows(), m.ncols(), order);
        s.coeffs[0] = m;
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn coeff(&self, r: usize) -> &CMat {
        &self.coeffs[r]
    }

    pub fn coeffs(&self) -> &[CMat] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        let keep = (order + 1).min(self.coeffs.len());
        MatrixSeries {
            rows: self.rows,
            cols: self.cols,
            coeffs: self.coeffs[..keep].to_vec(),
        }
    }

    pub fn map(&self, f: impl Fn(&CMat) -> CMat) -> Result<Self> {
        Self::new(self.coeffs.iter().map(f).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Self, f: impl Fn(&CMat, &CMat) -> CMat) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch(format!(
                "{:?} vs {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let n = self.order().min(other.order()) + 1;
        Self::new(
            (0..n)
                .map(|r| f(&self.coeffs[r], &other.coeffs[r]))
                .collect(),
        )
    }

    pub fn scale(&self, c: Complex64) -> Self {
        MatrixSeries {
            rows: self.rows,
            cols: self.cols,
            coeffs: self.coeffs.iter().map(|m| m * c).collect(),
        }
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.cauchy(other, |a, b| a * b, self.cols == other.rows)
    }

    /// Coefficient-wise Kronecker product, `(a ⊗ b)(u) = a(u) ⊗ b(u)`.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        self.cauchy(other, kron, true)
    }

    fn cauchy(&self, other: &Self, op: impl Fn(&CMat, &CMat) -> CMat, ok: bool) -> Result<Self> {
        if !ok {
            return Err(Error::ShapeMismatch(format!(
                "{:?} · {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|r| {
                let mut acc = op(&self.coeffs[0], &other.coeffs[r]);
                for s in 1..=r {
                    acc += op(&self.coeffs[s], &other.coeffs[r - s]);
                }
                acc
            })
            .collect();
        Self::new(coeffs)
    }

    /// Multiplicative inverse to the same order. The leading coefficient must
    /// be invertible.
    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch(
                "inverse of a non-square series".into(),
            ));
        }
        let c0 = &self.coeffs[0];
        let inv0 = inverse(c0).ok_or(Error::NotQuasiClassical { rcond: rcond(c0) })?;
        let mut out: Vec<CMat> = vec![inv0.clone()];
        for r in 1..=self.order() {
            let mut acc = CMat::zeros(self.rows, self.cols);
            for s in 1..=r {
                acc += &self.coeffs[s] * &out[r - s];
            }
            out.push(-&inv0 * acc);
        }
        Self::new(out)
    }

    /// Divides by a scalar series `s = Σ s_r u^(−r)` with `s_0 ≠ 0`.
    pub fn div_scalar_series(&self, s: &[Complex64]) -> Result<Self> {
        if s.is_empty() || s[0] == ZERO {
            return Err(Error::InvalidArgument(
                "scalar divisor with vanishing leading term".into(),
            ));
        }
        let order = self.order().min(s.len() - 1);
        let mut inv = vec![Complex64::new(1.0, 0.0) / s[0]];
        for r in 1..=order {
            let acc: Complex64 = (1..=r).map(|j| s[j] * inv[r - j]).sum();
            inv.push(-acc / s[0]);
        }
        let coeffs = (0..=order)
            .map(|r| {
                let mut acc = CMat::zeros(self.rows, self.cols);
                for j in 0..=r {
                    acc += &self.coeffs[j] * inv[r - j];
                }
                acc
            })
            .collect();
        Self::new(coeffs)
    }

    /// Rescales so that `Tr(K(u) κ⁻¹) = d` holds order by order, where `κ` is
    /// the leading coefficient.
    pub fn normalize_trace(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        let kinv = inverse(c0).ok_or(Error::NotQuasiClassical { rcond: rcond(c0) })?;
        let d = Complex64::new(self.rows as f64, 0.0);
        let s: Vec<Complex64> = self
            .coeffs
            .iter()
            .map(|c| (c * &kinv).trace() / d)
            .collect();
        self.div_scalar_series(&s)
    }

    /// `Σ c⁽ʳ⁾ u^(−r)`.
    pub fn evaluate(&self, u: Complex64) -> CMat {
        let w = Complex64::new(1.0, 0.0) / u;
        let mut acc = self.coeffs[self.order()].clone();
        for r in (0..self.order()).rev() {
            acc = acc * w + &self.coeffs[r];
        }
        acc
    }

    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let n = self.order().min(other.order()) + 1;
        (0..n)
            .map(|r| fro(&(&self.coeffs[r] - &other.coeffs[r])))
            .fold(0.0, f64::max)
    }

    /// Header `d_rows d_cols order`, then the coefficient matrices in
    /// increasing order.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.rows, self.cols, self.order());
        for c in &self.coeffs {
            s.push_str(&write_matrix(c));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty series file".into()))?;
        let h = parse_usizes(header, 3)?;
        let mut coeffs = Vec::with_capacity(h[2] + 1);
        for r in 0..=h[2] {
            let m = read_matrix_from(&mut lines)?;
            if m.shape() != (h[0], h[1]) {
                return Err(Error::Parse(format!(
                    "coefficient {r} has shape {:?}, expected ({}, {})",
                    m.shape(),
                    h[0],
                    h[1]
                )));
            }
            coeffs.push(m);
        }
        if lines.next().is_some() {
            return Err(Error::Parse("trailing data after series".into()));
        }
        Self::new(coeffs)
    }
}

/// Scalar polynomial with ascending coefficients.
fn poly_eval(p: &[Complex64], u: Complex64) -> Complex64 {
    p.iter().rev().fold(ZERO, |acc, &c| acc * u + c)
}

/// Product of two ascending-coefficient scalar polynomials.
pub fn poly_product(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Coefficients of `(a + b·u)^k`, ascending.
fn affine_power(a: Complex64, b: Complex64, k: usize) -> Vec<Complex64> {
    (0..k).fold(vec![Complex64::new(1.0, 0.0)], |p, _| {
        poly_product(&p, &[a, b])
    })
}

fn degree(norms: impl Iterator<Item = f64>) -> Option<usize> {
    norms
        .enumerate()
        .filter(|(_, n)| *n != 0.0)
        .map(|(i, _)| i)
        .last()
}

/// `f(u) = N(u) / D(u)` with matrix polynomial `N` and scalar polynomial `D`.
#[derive(Debug, Clone)]
pub struct RationalMatrixFn {
    rows: usize,
    cols: usize,
    num: Vec<CMat>,
    den: Vec<Complex64>,
    meta: String,
}

impl RationalMatrixFn {
    pub fn new(num: Vec<CMat>, den: Vec<Complex64>, meta: impl Into<String>) -> Result<Self> {
        let first = num
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty numerator".into()))?;
        let (rows, cols) = first.shape();
        if num.iter().any(|c| c.shape() != (rows, cols)) {
            return Err(Error::ShapeMismatch(
                "numerator coefficients differ in shape".into(),
            ));
        }
        if den.iter().all(|c| *c == ZERO) {
            return Err(Error::InvalidArgument(
                "denominator is identically zero".into(),
            ));
        }
        Ok(RationalMatrixFn {
            rows,
            cols,
            num,
            den,
            meta: meta.into(),
        })
    }

    pub fn constant(m: CMat, meta: impl Into<String>) -> Self {
        let (rows, cols) = m.shape();
        RationalMatrixFn {
            rows,
            cols,
            num: vec![m],
            den: vec![Complex64::new(1.0, 0.0)],
            meta: meta.into(),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn meta(&self) -> &str {
        &self.meta
    }

    pub fn with_meta(mut self, meta: impl Into<String>) -> Self {
        self.meta = meta.into();
        self
    }

    pub fn numerator(&self) -> &[CMat] {
        &self.num
    }

    pub fn denominator(&self) -> &[Complex64] {
        &self.den
    }

    pub fn num_degree(&self) -> Option<usize> {
        degree(self.num.iter().map(fro))
    }

    pub fn den_degree(&self) -> usize {
        degree(self.den.iter().map(|c| c.norm())).unwrap_or(0)
    }

    /// Exact evaluation. Errors when `u` is (numerically) a root of `D`.
    pub fn evaluate(&self, u: Complex64) -> Result<CMat> {
        let d = poly_eval(&self.den, u);
        let scale: f64 = self
            .den
            .iter()
            .enumerate()
            .map(|(i, c)| c.norm() * u.norm().powi(i as i32))
            .sum();
        if d.norm() <= 1e-14 * scale || !d.is_finite() {
            return Err(Error::Pole {
                factor: self.meta.clone(),
                u,
            });
        }
        let mut acc = self.num[self.num.len() - 1].clone();
        for c in self.num[..self.num.len() - 1].iter().rev() {
            acc = acc * u + c;
        }
        Ok(acc / d)
    }

    /// Expansion `Σ c⁽ʳ⁾ u^(−r)` at infinity up to `order`.
    pub fn expand(&self, order: usize) -> Result<MatrixSeries> {
        let q = self.den_degree();
        let Some(p) = self.num_degree() else {
            return Ok(MatrixSeries::zero(self.rows, self.cols, order));
        };
        if p > q {
            return Err(Error::NormalizationRequired { num: p, den: q });
        }
        // With w = 1/u: f = w^(q−p) Ñ(w)/D̃(w), Ñ_k = N_(p−k), D̃_k = D_(q−k).
        let shift = q - p;
        let nt = |k: usize| {
            if k <= p {
                self.num[p - k].clone()
            } else {
                CMat::zeros(self.rows, self.cols)
            }
        };
        let dt = |k: usize| if k <= q { self.den[q - k] } else { ZERO };
        let mut c: Vec<CMat> = Vec::with_capacity(order + 1);
        for k in 0..=order.saturating_sub(shift) {
            let mut acc = nt(k);
            for j in 1..=k {
                acc -= &c[k - j] * dt(j);
            }
            c.push(acc / dt(0));
        }
        let mut coeffs = vec![CMat::zeros(self.rows, self.cols); order + 1];
        for (k, m) in c.into_iter().enumerate() {
            if k + shift <= order {
                coeffs[k + shift] = m;
            }
        }
        MatrixSeries::new(coeffs)
    }

    /// Applies a linear map to every numerator coefficient.
    pub fn map_linear(&self, f: impl Fn(&CMat) -> CMat) -> Result<Self> {
        Self::new(
            self.num.iter().map(f).collect(),
            self.den.clone(),
            self.meta.clone(),
        )
    }

    /// `u ↦ a + b·u`.
    pub fn substitute_affine(&self, a: Complex64, b: Complex64) -> Self {
        let num_len = self.num.len();
        let mut num = vec![CMat::zeros(self.rows, self.cols); num_len];
        for (i, c) in self.num.iter().enumerate() {
            for (k, w) in affine_power(a, b, i).into_iter().enumerate() {
                num[k] += c * w;
            }
        }
        let mut den = vec![ZERO; self.den.len()];
        for (i, c) in self.den.iter().enumerate() {
            for (k, w) in affine_power(a, b, i).into_iter().enumerate() {
                den[k] += c * w;
            }
        }
        RationalMatrixFn {
            rows: self.rows,
            cols: self.cols,
            num,
            den,
            meta: self.meta.clone(),
        }
    }

    /// Multiplies by the scalar rational function `p(u)/q(u)`.
    pub fn scale_rational(&self, p: &[Complex64], q: &[Complex64]) -> Result<Self> {
        let mut num = vec![CMat::zeros(self.rows, self.cols); self.num.len() + p.len() - 1];
        for (i, c) in self.num.iter().enumerate() {
            for (j, w) in p.iter().enumerate() {
                num[i + j] += c * *w;
            }
        }
        Self::new(num, poly_product(&self.den, q), self.meta.clone())
    }

    /// Divides by `Tr(f(u) κ⁻¹)/d` so that `Tr(f(u) κ⁻¹) = d` identically.
    /// The result stays an exact rational function.
    pub fn normalize_trace(&self, kappa_inv: &CMat) -> Result<Self> {
        let d = Complex64::new(self.rows as f64, 0.0);
        let t: Vec<Complex64> = self.num.iter().map(|c| (c * kappa_inv).trace()).collect();
        if t.iter().all(|c| *c == ZERO) {
            return Err(Error::InvalidArgument(
                "trace normalization is identically zero".into(),
            ));
        }
        // f = N/D and Tr(f κ⁻¹) = T/D, so the normalized function is d·N/T.
        Self::new(
            self.num.iter().map(|c| c * d).collect(),
            t,
            self.meta.clone(),
        )
    }

    /// Pointwise product `f(u)·g(u)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{:?} · {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let mut num =
            vec![CMat::zeros(self.rows, other.cols); self.num.len() + other.num.len() - 1];
        for (i, a) in self.num.iter().enumerate() {
            for (j, b) in other.num.iter().enumerate() {
                num[i + j] += a * b;
            }
        }
        Self::new(
            num,
            poly_product(&self.den, &other.den),
            format!("{}·{}", self.meta, other.meta),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, eye, re, unit};

    #[test]
    fn telescoping_product() {
        let a = CMat::from_fn(3, 3, |i, j| c64(i as f64 - j as f64, 0.5));
        let p = MatrixSeries::new(vec![eye(3), a.clone(), CMat::zeros(3, 3)]).unwrap();
        let m = MatrixSeries::new(vec![eye(3), -a.clone(), CMat::zeros(3, 3)]).unwrap();
        let prod = p.mul(&m).unwrap();
        assert!(fro(&(prod.coeff(0) - eye(3))) == 0.0);
        assert!(fro(prod.coeff(1)) == 0.0);
        assert!(fro(&(prod.coeff(2) + &a * &a)) < 1e-14);
    }

    #[test]
    fn truncation_order_tracks_minimum() {
        let a = MatrixSeries::identity(2, 4);
        let b = MatrixSeries::identity(2, 2);
        assert_eq!(a.mul(&b).unwrap().order(), 2);
        assert_eq!(a.add(&b).unwrap().order(), 2);
        assert!(a.mul(&MatrixSeries::identity(3, 2)).is_err());
    }

    #[test]
    fn nilpotent_geometric_inverse() {
        let n = unit(2, 0, 1);
        let s = MatrixSeries::new(vec![eye(2), n.clone(), CMat::zeros(2, 2)]).unwrap();
        let inv = s.inverse().unwrap();
        assert!(fro(&(inv.coeff(1) + &n)) == 0.0);
        assert!(fro(inv.coeff(2)) == 0.0);
    }

    #[test]
    fn singular_leading_coefficient() {
        let s = MatrixSeries::new(vec![unit(2, 0, 1), eye(2)]).unwrap();
        assert!(matches!(s.inverse(), Err(Error::NotQuasiClassical { .. })));
    }

    #[test]
    fn inverse_matches_pointwise() {
        // diag(u+0.7, u+0.7, −u+0.7)/u, normalized, expanded and inverted.
        let j = crate::linalg::diag(&[re(1.0), re(1.0), re(-1.0)]);
        let f = RationalMatrixFn::new(
            vec![eye(3) * re(0.7), j.clone()],
            vec![re(0.0), re(1.0)],
            "k",
        )
        .unwrap();
        let f = f.normalize_trace(&j).unwrap();
        let s = f.expand(8).unwrap();
        let inv = s.inverse().unwrap();
        let u = re(50.0);
        let exact = f.evaluate(u).unwrap().try_inverse().unwrap();
        assert!(fro(&(inv.evaluate(u) - exact)) < 1e-10);
    }

    #[test]
    fn expand_examples() {
        let xi = c64(0.3, -0.2);
        let f =
            RationalMatrixFn::new(vec![eye(2) * xi, eye(2)], vec![re(0.0), re(1.0)], "f").unwrap();
        let s = f.expand(2).unwrap();
        assert!(fro(&(s.coeff(0) - eye(2))) == 0.0);
        assert!(fro(&(s.coeff(1) - eye(2) * xi)) == 0.0);
        assert!(fro(s.coeff(2)) == 0.0);

        let g = RationalMatrixFn::new(vec![eye(2)], vec![re(-1.0), re(1.0)], "g").unwrap();
        let s = g.expand(3).unwrap();
        assert!(fro(s.coeff(0)) == 0.0);
        for r in 1..=3 {
            assert!(fro(&(s.coeff(r) - eye(2))) == 0.0);
        }

        let h = RationalMatrixFn::new(vec![eye(2), eye(2)], vec![re(1.0)], "h").unwrap();
        assert!(matches!(
            h.expand(2),
            Err(Error::NormalizationRequired { num: 1, den: 0 })
        ));
    }

    #[test]
    fn pole_and_substitution() {
        let g = RationalMatrixFn::new(vec![eye(2)], vec![re(-1.0), re(1.0)], "g").unwrap();
        assert!(matches!(g.evaluate(re(1.0)), Err(Error::Pole { .. })));
        // g(2 − u) = 1/(1 − u).
        let h = g.substitute_affine(re(2.0), re(-1.0));
        let u = c64(0.3, 0.8);
        let expect = eye(2) / (re(1.0) - u);
        assert!(fro(&(h.evaluate(u).unwrap() - expect)) < 1e-15);
    }

    #[test]
    fn series_text_round_trip() {
        let s = MatrixSeries::new(vec![eye(2), unit(2, 0, 1) * c64(0.25, -1.0)]).unwrap();
        let back = MatrixSeries::from_text(&s.to_text()).unwrap();
        assert_eq!(back, s);
        assert!(MatrixSeries::from_text("2 2 1\n2 2\n1+0j 0+0j\n0+0j 1+0j\n").is_err());
    }
}
