//! Uniform periodic grids on centered boxes `[-L, L)^n` and sampled fields.
//!
//! Values are stored row-major with axis 0 slowest. Every field is complex;
//! real data simply carries zero imaginary parts.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::Complex64;

/// Coordinates of a grid point; components past `dim` are zero.
pub type Point = [f64; 3];

pub const MAX_DIM: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    dim: usize,
    half_width: f64,
    points_per_axis: usize,
}

impl GridSpec {
    /// Grid with `points_per_axis` cells per axis on `[-half_width, half_width)^dim`.
    ///
    /// The point count must be even so the origin is a grid point.
    pub fn new(dim: usize, half_width: f64, points_per_axis: usize) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&dim) {
            return Err(Error::InvalidGrid(format!("dim {dim} outside 1..=3")));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "half width must be positive, got {half_width}"
            )));
        }
        if points_per_axis % 2 != 0 {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be even so the origin is a grid point, got {points_per_axis}"
            )));
        }
        if points_per_axis < 8 {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be at least 8, got {points_per_axis}"
            )));
        }
        Ok(Self {
            dim,
            half_width,
            points_per_axis,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points_per_axis as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    pub fn cell_diameter(&self) -> f64 {
        self.spacing() * (self.dim as f64).sqrt()
    }

    pub fn box_volume(&self) -> f64 {
        (2.0 * self.half_width).powi(self.dim as i32)
    }

    /// Total number of grid points, `N^n`.
    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Same box with a different number of points per axis.
    pub fn with_points(&self, points_per_axis: usize) -> Result<Self> {
        Self::new(self.dim, self.half_width, points_per_axis)
    }

    pub fn coordinate(&self, k: usize) -> f64 {
        -self.half_width + k as f64 * self.spacing()
    }

    pub fn unravel(&self, mut index: usize) -> [usize; MAX_DIM] {
        let n = self.points_per_axis;
        let mut out = [0; MAX_DIM];
        for axis in (0..self.dim).rev() {
            out[axis] = index % n;
            index /= n;
        }
        out
    }

    pub fn ravel(&self, multi: &[usize]) -> usize {
        multi[..self.dim]
            .iter()
            .fold(0, |acc, &k| acc * self.points_per_axis + k)
    }

    pub fn point(&self, index: usize) -> Point {
        let multi = self.unravel(index);
        let mut p = [0.0; MAX_DIM];
        for axis in 0..self.dim {
            p[axis] = self.coordinate(multi[axis]);
        }
        p
    }

    /// Index of the grid point at `x`, if `x` is one (to within a tiny fraction of a cell).
    pub fn locate(&self, x: &[f64]) -> Option<usize> {
        if x.len() < self.dim {
            return None;
        }
        let h = self.spacing();
        let mut multi = [0usize; MAX_DIM];
        for axis in 0..self.dim {
            let t = (x[axis] + self.half_width) / h;
            let k = t.round();
            if (t - k).abs() > 1e-9 || k < 0.0 || k >= self.points_per_axis as f64 {
                return None;
            }
            multi[axis] = k as usize;
        }
        Some(self.ravel(&multi))
    }

    /// Like [`GridSpec::locate`] but reports a non-grid point as an error.
    pub fn require_point(&self, x: &[f64]) -> Result<usize> {
        self.locate(x).ok_or_else(|| {
            Error::InvalidArgument(format!("{:?} is not a grid point", &x[..x.len().min(3)]))
        })
    }

    /// Minimal-image signed form of an index difference, or `None` on the
    /// half-period plane where the image is ambiguous.
    pub fn signed_offset(&self, k: usize) -> Option<i64> {
        let n = self.points_per_axis;
        let k = k % n;
        if k == n / 2 {
            None
        } else if k < n / 2 {
            Some(k as i64)
        } else {
            Some(k as i64 - n as i64)
        }
    }

    /// Angular frequency of DFT index `k` on this box (fftfreq ordering).
    pub fn frequency(&self, k: usize) -> f64 {
        let n = self.points_per_axis as i64;
        let k = k as i64;
        let signed = if k < n / 2 { k } else { k - n };
        std::f64::consts::PI * signed as f64 / self.half_width
    }

    pub(crate) fn check_same(&self, other: &GridSpec) -> Result<()> {
        if self != other {
            return Err(Error::GridMismatch(format!("{self:?} vs {other:?}")));
        }
        Ok(())
    }

    pub(crate) fn require_dim(&self, dims: &'static str, ok: bool) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::Dimension {
                expected: dims,
                found: self.dim,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    spec: GridSpec,
    values: Vec<Complex64>,
}

impl Field {
    pub fn zeros(spec: GridSpec) -> Self {
        Self {
            values: vec![Complex64::new(0.0, 0.0); spec.len()],
            spec,
        }
    }

    pub fn from_values(spec: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a grid of {} points",
                values.len(),
                spec.len()
            )));
        }
        Ok(Self { spec, values })
    }

    pub fn from_real(spec: GridSpec, values: &[f64]) -> Result<Self> {
        Self::from_values(
            spec,
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    /// Point samples `values[k] = f(x_k)`.
    pub fn sample<S, F>(spec: GridSpec, f: F) -> Result<Self>
    where
        S: Into<Complex64>,
        F: Fn(&[f64]) -> S,
    {
        let mut values = Vec::with_capacity(spec.len());
        for index in 0..spec.len() {
            let p = spec.point(index);
            let v: Complex64 = f(&p[..spec.dim]).into();
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::NonFinite {
                    point: p[..spec.dim].to_vec(),
                    value: v.to_string(),
                });
            }
            values.push(v);
        }
        Ok(Self { spec, values })
    }

    /// Cell averages by the midpoint rule on `sub^n` sub-cells.
    ///
    /// Used for discontinuous data (indicators), where point samples make a
    /// staircase whose boundary error dominates everything near the jump.
    pub fn sample_cell_average<S, F>(spec: GridSpec, sub: usize, f: F) -> Result<Self>
    where
        S: Into<Complex64>,
        F: Fn(&[f64]) -> S,
    {
        if sub == 0 {
            return Err(Error::InvalidArgument("sub-cell count must be positive".into()));
        }
        let dim = spec.dim;
        let h = spec.spacing();
        let per_cell = sub.pow(dim as u32);
        let shifts: Vec<Point> = (0..per_cell)
            .map(|s| {
                let mut rest = s;
                let mut shift = [0.0; MAX_DIM];
                for item in shift.iter_mut().take(dim) {
                    let k = rest % sub;
                    rest /= sub;
                    *item = h * ((k as f64 + 0.5) / sub as f64 - 0.5);
                }
                shift
            })
            .collect();
        let weight = 1.0 / per_cell as f64;
        let mut values = Vec::with_capacity(spec.len());
        for index in 0..spec.len() {
            let p = spec.point(index);
            let mut acc = Complex64::new(0.0, 0.0);
            for shift in &shifts {
                let mut q = p;
                for axis in 0..dim {
                    q[axis] += shift[axis];
                }
                acc += f(&q[..dim]).into();
            }
            if !(acc.re.is_finite() && acc.im.is_finite()) {
                return Err(Error::NonFinite {
                    point: p[..dim].to_vec(),
                    value: acc.to_string(),
                });
            }
            values.push(acc * weight);
        }
        Ok(Self { spec, values })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn get(&self, index: usize) -> Complex64 {
        self.values[index]
    }

    /// Value at a grid point; `None` when `x` is not one.
    pub fn at(&self, x: &[f64]) -> Option<Complex64> {
        self.spec.locate(x).map(|i| self.values[i])
    }

    /// Midpoint-rule integral over the box.
    pub fn integral(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() * self.spec.cell_volume()
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Field {
        Field {
            spec: self.spec,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise modulus as a real field.
    pub fn abs(&self) -> Field {
        self.map(|v| Complex64::new(v.norm(), 0.0))
    }

    pub fn real_part(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.values.iter().all(|v| v.im.abs() <= tol)
    }

    pub fn scaled(&self, c: Complex64) -> Field {
        self.map(|v| v * c)
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: Complex64, other: &Field, b: Complex64) -> Result<Field> {
        self.spec.check_same(&other.spec)?;
        Ok(Field {
            spec: self.spec,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&x, &y)| a * x + b * y)
                .collect(),
        })
    }

    /// Largest pointwise difference to another field on the same grid.
    pub fn max_abs_diff(&self, other: &Field) -> Result<f64> {
        self.spec.check_same(&other.spec)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm())))
    }
}

impl Add for &Field {
    type Output = Field;

    fn add(self, rhs: &Field) -> Field {
        let one = Complex64::new(1.0, 0.0);
        self.combine(one, rhs, one).expect("fields on different grids")
    }
}

impl Sub for &Field {
    type Output = Field;

    fn sub(self, rhs: &Field) -> Field {
        let one = Complex64::new(1.0, 0.0);
        self.combine(one, rhs, -one).expect("fields on different grids")
    }
}

impl Mul<f64> for &Field {
    type Output = Field;

    fn mul(self, rhs: f64) -> Field {
        self.scaled(Complex64::new(rhs, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_volume_of_default_grid() {
        let spec = GridSpec::new(2, 8.0, 256).unwrap();
        assert_eq!(spec.cell_volume(), 0.00390625);
    }

    #[test]
    fn one_dimensional_coordinates() {
        let spec = GridSpec::new(1, 4.0, 8).unwrap();
        let xs: Vec<f64> = (0..8).map(|k| spec.coordinate(k)).collect();
        assert_eq!(xs, vec![-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]);
        assert!(spec.locate(&[0.0]).is_some());
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(matches!(
            GridSpec::new(2, 8.0, 255),
            Err(Error::InvalidGrid(_))
        ));
        assert!(GridSpec::new(0, 8.0, 16).is_err());
        assert!(GridSpec::new(4, 8.0, 16).is_err());
        assert!(GridSpec::new(2, -1.0, 16).is_err());
        assert!(GridSpec::new(2, 1.0, 6).is_err());
    }

    #[test]
    fn ravel_round_trip() {
        let spec = GridSpec::new(3, 1.0, 8).unwrap();
        for index in [0, 1, 17, 200, 511] {
            assert_eq!(spec.ravel(&spec.unravel(index)), index);
            let p = spec.point(index);
            assert_eq!(spec.locate(&p), Some(index));
        }
    }

    #[test]
    fn indicator_samples() {
        let spec = GridSpec::new(2, 4.0, 64).unwrap();
        let disc = Field::sample(spec, |x| {
            if x[0] * x[0] + x[1] * x[1] <= 1.0 {
                1.0
            } else {
                0.0
            }
        })
        .unwrap();
        assert_eq!(disc.at(&[0.0, 0.0]).unwrap().re, 1.0);
        assert_eq!(disc.at(&[2.0, 0.0]).unwrap().re, 0.0);
    }

    #[test]
    fn integrals_of_simple_fields() {
        let spec = GridSpec::new(2, 3.0, 32).unwrap();
        let one = Field::sample(spec, |_| 1.0).unwrap();
        assert!((one.integral().re - 36.0).abs() < 1e-12);
        let x1 = Field::sample(spec, |x| x[0]).unwrap();
        // the grid is symmetric except for the single row at -L
        let row = -3.0 * 6.0 * spec.spacing();
        assert!((x1.integral().re - row).abs() < 1e-12);
        assert_eq!(Field::zeros(spec).integral().re, 0.0);
    }

    #[test]
    fn odd_integrand_vanishes_on_symmetric_support() {
        let spec = GridSpec::new(2, 8.0, 128).unwrap();
        let f = Field::sample(spec, |x| x[0] * (-(x[0] * x[0] + x[1] * x[1])).exp()).unwrap();
        assert!(f.integral().norm() < 1e-12);
    }

    #[test]
    fn disc_area_by_midpoint_rule() {
        let spec = GridSpec::new(2, 8.0, 512).unwrap();
        let disc = Field::sample(spec, |x| {
            if x[0] * x[0] + x[1] * x[1] <= 1.0 {
                1.0
            } else {
                0.0
            }
        })
        .unwrap();
        let area = disc.integral().re;
        assert!((area - std::f64::consts::PI).abs() < 0.02 * std::f64::consts::PI);
    }

    #[test]
    fn integral_is_linear() {
        let spec = GridSpec::new(2, 2.0, 16).unwrap();
        let f = Field::sample(spec, |x| (x[0] + 0.3 * x[1]).sin()).unwrap();
        let g = Field::sample(spec, |x| (x[1] - x[0]).cos()).unwrap();
        let lhs = (&f + &g).integral();
        let rhs = f.integral() + g.integral();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn refinement_of_smooth_integral() {
        // exp(-|x|^2) has integral pi; the midpoint error shrinks under refinement
        let errs: Vec<f64> = [16, 32]
            .iter()
            .map(|&n| {
                let spec = GridSpec::new(2, 2.0, n).unwrap();
                let f = Field::sample(spec, |x| {
                    let r2 = x[0] * x[0] + x[1] * x[1];
                    if r2 < 1.0 {
                        (1.0 - r2).powi(3)
                    } else {
                        0.0
                    }
                })
                .unwrap();
                (f.integral().re - std::f64::consts::PI / 4.0).abs()
            })
            .collect();
        assert!(errs[1] < errs[0]);
    }

    #[test]
    fn non_finite_sample_names_point() {
        let spec = GridSpec::new(1, 1.0, 8).unwrap();
        let err = Field::sample(spec, |x| 1.0 / x[0]).unwrap_err();
        match err {
            Error::NonFinite { point, .. } => assert_eq!(point, vec![0.0]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn cell_average_of_constant_is_exact() {
        let spec = GridSpec::new(2, 1.0, 8).unwrap();
        let f = Field::sample_cell_average(spec, 4, |_| 2.5).unwrap();
        assert!(f.values().iter().all(|v| (v.re - 2.5).abs() < 1e-15));
    }

    #[test]
    fn signed_offsets_skip_half_period() {
        let spec = GridSpec::new(1, 1.0, 8).unwrap();
        assert_eq!(spec.signed_offset(0), Some(0));
        assert_eq!(spec.signed_offset(3), Some(3));
        assert_eq!(spec.signed_offset(4), None);
        assert_eq!(spec.signed_offset(5), Some(-3));
    }
}
