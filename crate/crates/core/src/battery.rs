//! Seeded smooth test fields and sample points.
//!
//! Each field is a sum of differences of Gaussians
//! `c (e^{-|x-x_0|^2/s^2} - 2^{-n} e^{-|x-x_0|^2/(4s^2)})`, which has zero mean
//! and zero first moments, so periodization barely touches its transforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::grid::{Field, GridSpec, MAX_DIM};
use crate::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub center: [f64; MAX_DIM],
    pub width: f64,
    pub coefficient: Complex64,
}

impl Bump {
    pub fn eval(&self, dim: usize, x: &[f64]) -> Complex64 {
        let r2: f64 = (0..dim).map(|a| (x[a] - self.center[a]).powi(2)).sum();
        let s2 = self.width * self.width;
        let weight = 0.5f64.powi(dim as i32);
        self.coefficient * ((-r2 / s2).exp() - weight * (-r2 / (4.0 * s2)).exp())
    }
}

pub const BUMPS_PER_FIELD: usize = 3;

pub struct Battery {
    rng: ChaCha8Rng,
}

impl Battery {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Bumps with centers in `[-2, 2]^n` and widths in `[0.4, 0.8]`.
    pub fn bumps(&mut self, dim: usize, complex: bool) -> Vec<Bump> {
        (0..BUMPS_PER_FIELD)
            .map(|_| {
                let mut center = [0.0; MAX_DIM];
                for c in center.iter_mut().take(dim) {
                    *c = self.rng.gen_range(-2.0..=2.0);
                }
                let width = self.rng.gen_range(0.4..=0.8);
                let re = self.rng.gen_range(-1.0..=1.0);
                let im = if complex {
                    self.rng.gen_range(-1.0..=1.0)
                } else {
                    0.0
                };
                Bump {
                    center,
                    width,
                    coefficient: Complex64::new(re, im),
                }
            })
            .collect()
    }

    pub fn field(&mut self, spec: GridSpec, complex: bool) -> Result<Field> {
        let dim = spec.dim();
        let bumps = self.bumps(dim, complex);
        Field::sample(spec, |x| bumps.iter().map(|b| b.eval(dim, x)).sum::<Complex64>())
    }

    /// Grid points with every coordinate in `[-reach, reach]`.
    pub fn points(&mut self, spec: &GridSpec, count: usize, reach: f64) -> Vec<[f64; MAX_DIM]> {
        let h = spec.spacing();
        let lo = ((spec.half_width() - reach) / h).ceil() as usize;
        let hi = ((spec.half_width() + reach) / h).floor() as usize;
        let hi = hi.min(spec.points_per_axis() - 1);
        (0..count)
            .map(|_| {
                let mut multi = [0usize; MAX_DIM];
                for m in multi.iter_mut().take(spec.dim()) {
                    *m = self.rng.gen_range(lo..=hi);
                }
                spec.point(spec.ravel(&multi[..spec.dim()]))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_fields() {
        let spec = GridSpec::new(2, 8.0, 64).unwrap();
        let a = Battery::new(7).field(spec, true).unwrap();
        let b = Battery::new(7).field(spec, true).unwrap();
        let c = Battery::new(8).field(spec, true).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn fields_have_zero_mean() {
        for dim in 1..=2 {
            let spec = GridSpec::new(dim, 8.0, 128).unwrap();
            let f = Battery::new(3).field(spec, false).unwrap();
            assert!(f.is_real(0.0));
            assert!(f.integral().norm() < 1e-9, "{}", f.integral());
        }
    }

    #[test]
    fn points_stay_in_reach_and_on_grid() {
        let spec = GridSpec::new(2, 8.0, 128).unwrap();
        let pts = Battery::new(1).points(&spec, 500, 3.0);
        for p in &pts {
            assert!(p[0].abs() <= 3.0 && p[1].abs() <= 3.0);
            assert!(spec.locate(&p[..2]).is_some());
        }
    }
}
