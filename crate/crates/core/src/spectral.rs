//! Spectral sample points.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded points on the annulus `0.3 ≤ |u| ≤ 3`, kept away from the real axis.
#[derive(Debug, Clone)]
pub struct SpectralSampler {
    rng: ChaCha8Rng,
}

impl SpectralSampler {
    pub fn new(seed: u64) -> Self {
        SpectralSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn point(&mut self) -> Complex64 {
        loop {
            let r = self.rng.gen_range(0.3..=3.0);
            let theta = self.rng.gen_range(0.0..std::f64::consts::TAU);
            let u = Complex64::from_polar(r, theta);
            if u.im.abs() >= 0.05 {
                return u;
            }
        }
    }

    /// A pair with `|u − v|` and `|u + v|` both at least 0.1.
    pub fn pair(&mut self) -> (Complex64, Complex64) {
        loop {
            let (u, v) = (self.point(), self.point());
            if (u - v).norm() >= 0.1 && (u + v).norm() >= 0.1 {
                return (u, v);
            }
        }
    }

    pub fn pairs(&mut self, count: usize) -> Vec<(Complex64, Complex64)> {
        (0..count).map(|_| self.pair()).collect()
    }
}

/// `count` points on a fixed generic complex ray, used to sample
/// u-dependent linear conditions.
pub fn ray_points(count: usize) -> Vec<Complex64> {
    let dir = Complex64::from_polar(1.0, 0.6123);
    (0..count)
        .map(|s| dir * (0.45 + 0.37 * s as f64 + 0.011 * (s * s) as f64))
        .collect()
}
