//! In-place n-dimensional complex FFT on row-major grids, built on `rustfft`.
//!
//! Planners are created per transform object, so nothing is shared between
//! threads.

use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::grid::GridSpec;
use crate::Complex64;

/// Lines gathered at once along strided axes.
const BATCH: usize = 16;

pub(crate) struct FftNd {
    dim: usize,
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl FftNd {
    pub fn new(spec: &GridSpec) -> Self {
        let n = spec.points_per_axis();
        let mut planner = FftPlanner::new();
        Self {
            dim: spec.dim(),
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.run(data, &self.forward);
    }

    /// Inverse transform including the `1/N^n` normalization.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.run(data, &self.inverse);
        let scale = 1.0 / data.len() as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }

    fn run(&self, data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        let n = self.n;
        assert_eq!(data.len(), n.pow(self.dim as u32));
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        // last axis is contiguous
        fft.process_with_scratch(data, &mut scratch);
        let mut lines = vec![Complex64::new(0.0, 0.0); n * BATCH];
        for axis in 0..self.dim.saturating_sub(1) {
            let stride = n.pow((self.dim - 1 - axis) as u32);
            let block = n * stride;
            for outer in (0..data.len()).step_by(block) {
                let mut inner = 0;
                while inner < stride {
                    let width = BATCH.min(stride - inner);
                    for i in 0..n {
                        let row = outer + i * stride + inner;
                        for b in 0..width {
                            lines[b * n + i] = data[row + b];
                        }
                    }
                    fft.process_with_scratch(&mut lines[..width * n], &mut scratch);
                    for i in 0..n {
                        let row = outer + i * stride + inner;
                        for b in 0..width {
                            data[row + b] = lines[b * n + i];
                        }
                    }
                    inner += width;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_dft(spec: &GridSpec, data: &[Complex64]) -> Vec<Complex64> {
        let n = spec.points_per_axis();
        let dim = spec.dim();
        (0..data.len())
            .map(|k| {
                let km = spec.unravel(k);
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, &v) in data.iter().enumerate() {
                    let jm = spec.unravel(j);
                    let phase: f64 = (0..dim)
                        .map(|a| (km[a] * jm[a]) as f64 / n as f64)
                        .sum::<f64>()
                        * -2.0
                        * std::f64::consts::PI;
                    acc += v * Complex64::from_polar(1.0, phase);
                }
                acc
            })
            .collect()
    }

    #[test]
    fn matches_naive_dft_in_all_dimensions() {
        for dim in 1..=3 {
            let spec = GridSpec::new(dim, 1.0, 8).unwrap();
            let data: Vec<Complex64> = (0..spec.len())
                .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
                .collect();
            let expected = naive_dft(&spec, &data);
            let mut got = data.clone();
            let fft = FftNd::new(&spec);
            fft.forward(&mut got);
            for (a, b) in got.iter().zip(&expected) {
                assert!((a - b).norm() < 1e-10, "dim {dim}");
            }
            fft.inverse(&mut got);
            for (a, b) in got.iter().zip(&data) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }
}
