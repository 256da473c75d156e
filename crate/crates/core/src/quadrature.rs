//! Direct-space sums: truncated and maximal singular integrals, ball and disc
//! averages, the Cauchy transform, and the polar principal-value rule used to
//! calibrate the spectral Riesz constant.
//!
//! Everything lives on the periodic box. An offset `y` between two grid points
//! is taken as its minimal image; offsets with a component equal to half the
//! period have no minimal image and are dropped from every sum. Membership
//! uses cell centers: `|y| > ε` for truncations, `|y| ≤ r` for balls and discs.
//!
//! The pointwise routines accumulate contributions in a fixed order, from the
//! farthest offset inward, so `T^ε f(x)` is bit-identical whichever ladder
//! asked for it. The `_grid` routines evaluate the same discrete sums at every
//! grid point as circular convolutions.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fft::FftNd;
use crate::grid::{Field, GridSpec, MAX_DIM};
use crate::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    /// `y_j/|y|^{n+1}`, `j` 1-based.
    Riesz(usize),
    /// `1/(π w^2)` with `w = y_1 + i y_2`.
    Beurling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub dim: usize,
}

impl KernelSpec {
    pub fn riesz(dim: usize, j: usize) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&dim) || j == 0 || j > dim {
            return Err(Error::InvalidArgument(format!(
                "Riesz kernel index {j} in dimension {dim}"
            )));
        }
        Ok(Self {
            kind: KernelKind::Riesz(j),
            dim,
        })
    }

    pub fn beurling() -> Self {
        Self {
            kind: KernelKind::Beurling,
            dim: 2,
        }
    }

    pub fn is_real(&self) -> bool {
        matches!(self.kind, KernelKind::Riesz(_))
    }

    /// Kernel value at a nonzero offset.
    pub fn eval(&self, y: &[f64]) -> Complex64 {
        match self.kind {
            KernelKind::Riesz(j) => {
                let r2: f64 = y[..self.dim].iter().map(|v| v * v).sum();
                Complex64::new(y[j - 1] / r2.sqrt().powi(self.dim as i32 + 1), 0.0)
            }
            KernelKind::Beurling => {
                let w = Complex64::new(y[0], y[1]);
                (w * w).inv() / PI
            }
        }
    }
}

fn check_kernel(spec: &GridSpec, k: &KernelSpec) -> Result<()> {
    if spec.dim() != k.dim {
        return Err(Error::GridMismatch(format!(
            "kernel for dimension {} on a {}-dimensional grid",
            k.dim,
            spec.dim()
        )));
    }
    Ok(())
}

/// Truncation radii, stored ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationLadder {
    radii: Vec<f64>,
}

impl TruncationLadder {
    /// `eps0 * ratio^k` for `k = 0..count`.
    pub fn geometric(eps0: f64, ratio: f64, count: usize) -> Result<Self> {
        if !(eps0 > 0.0) || !(ratio > 0.0) || ratio == 1.0 || count == 0 {
            return Err(Error::InvalidArgument(format!(
                "geometric ladder needs eps0 > 0, ratio > 0 and != 1, count >= 1 \
                 (got {eps0}, {ratio}, {count})"
            )));
        }
        Self::from_radii((0..count).map(|k| eps0 * ratio.powi(k as i32)).collect())
    }

    pub fn from_radii(mut radii: Vec<f64>) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::InvalidArgument("empty truncation ladder".into()));
        }
        if let Some(bad) = radii.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
            return Err(Error::InvalidArgument(format!("bad truncation radius {bad}")));
        }
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        Ok(Self { radii })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.radii[0]
    }

    pub fn max(&self) -> f64 {
        self.radii[self.radii.len() - 1]
    }

    /// Union with another ladder.
    pub fn refined(&self, other: &TruncationLadder) -> Self {
        let mut radii = self.radii.clone();
        radii.extend_from_slice(&other.radii);
        Self::from_radii(radii).expect("union of valid ladders")
    }

    /// Every radius must exceed a cell diameter and stay below the half width.
    pub fn check(&self, spec: &GridSpec) -> Result<()> {
        for &r in &self.radii {
            check_radius(spec, r)?;
        }
        Ok(())
    }
}

fn check_radius(spec: &GridSpec, r: f64) -> Result<()> {
    if !(r >= spec.cell_diameter()) {
        return Err(Error::Resolution(format!(
            "radius {r} is below the cell diameter {}",
            spec.cell_diameter()
        )));
    }
    if r >= spec.half_width() {
        return Err(Error::InvalidArgument(format!(
            "radius {r} is not below the half width {}",
            spec.half_width()
        )));
    }
    Ok(())
}

/// Minimal-image offset of DFT index `index`, or `None` on a half-period plane.
pub(crate) fn offset_vector(spec: &GridSpec, index: usize) -> Option<[f64; MAX_DIM]> {
    let multi = spec.unravel(index);
    let h = spec.spacing();
    let mut y = [0.0; MAX_DIM];
    for a in 0..spec.dim() {
        y[a] = spec.signed_offset(multi[a])? as f64 * h;
    }
    Some(y)
}

fn norm(y: &[f64]) -> f64 {
    y.iter().map(|v| v * v).sum::<f64>().sqrt()
}

#[derive(Clone, Copy)]
struct Offset {
    r: f64,
    y: [f64; MAX_DIM],
    shift: [i64; MAX_DIM],
}

/// Offsets of a grid sorted by decreasing length, reusable across points.
pub struct PointQuadrature {
    spec: GridSpec,
    offsets: Vec<Offset>,
}

impl PointQuadrature {
    pub fn new(spec: GridSpec) -> Self {
        let mut offsets = Vec::with_capacity(spec.len());
        for index in 0..spec.len() {
            if let Some(y) = offset_vector(&spec, index) {
                let multi = spec.unravel(index);
                let mut shift = [0i64; MAX_DIM];
                for a in 0..spec.dim() {
                    shift[a] = spec.signed_offset(multi[a]).unwrap_or(0);
                }
                offsets.push(Offset {
                    r: norm(&y[..spec.dim()]),
                    y,
                    shift,
                });
            }
        }
        // stable: ties keep index order
        offsets.sort_by(|a, b| b.r.total_cmp(&a.r));
        Self { spec, offsets }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    /// Index of `x - y` for grid point multi-index `m`.
    fn source(&self, m: &[usize; MAX_DIM], shift: &[i64; MAX_DIM]) -> usize {
        let n = self.spec.points_per_axis() as i64;
        let mut index = 0usize;
        for a in 0..self.spec.dim() {
            let k = (m[a] as i64 - shift[a]).rem_euclid(n);
            index = index * n as usize + k as usize;
        }
        index
    }

    /// `T^ε f(x)` for every radius of `radii` (ascending), one pass from outside in.
    fn truncated_many(
        &self,
        f: &Field,
        k: &KernelSpec,
        radii: &[f64],
        x: &[f64],
    ) -> Result<Vec<Complex64>> {
        self.spec.check_same(f.spec())?;
        check_kernel(&self.spec, k)?;
        for &r in radii {
            check_radius(&self.spec, r)?;
        }
        let m = self.spec.unravel(self.spec.require_point(x)?);
        let dv = self.spec.cell_volume();
        let mut out = vec![Complex64::new(0.0, 0.0); radii.len()];
        let mut acc = Complex64::new(0.0, 0.0);
        let mut next = radii.len();
        for off in &self.offsets {
            while next > 0 && off.r <= radii[next - 1] {
                out[next - 1] = acc * dv;
                next -= 1;
            }
            if next == 0 {
                break;
            }
            acc += f.get(self.source(&m, &off.shift)) * k.eval(&off.y);
        }
        for slot in out.iter_mut().take(next) {
            *slot = acc * dv;
        }
        Ok(out)
    }

    pub fn truncated_transform(
        &self,
        f: &Field,
        k: &KernelSpec,
        eps: f64,
        x: &[f64],
    ) -> Result<Complex64> {
        Ok(self.truncated_many(f, k, &[eps], x)?[0])
    }

    pub fn maximal_transform(
        &self,
        f: &Field,
        k: &KernelSpec,
        ladder: &TruncationLadder,
        x: &[f64],
    ) -> Result<f64> {
        let values = self.truncated_many(f, k, ladder.radii(), x)?;
        Ok(values.iter().fold(0.0f64, |m, v| m.max(v.norm())))
    }

    /// Largest mean of `|f|` over the closed balls `|y| ≤ r`, `r` in the ladder.
    pub fn hl_maximal(&self, f: &Field, ladder: &TruncationLadder, x: &[f64]) -> Result<f64> {
        self.spec.check_same(f.spec())?;
        ladder.check(&self.spec)?;
        let m = self.spec.unravel(self.spec.require_point(x)?);
        let radii = ladder.radii();
        let mut best = 0.0f64;
        let mut sum = 0.0;
        let mut count = 0usize;
        let mut next = 0;
        for off in self.offsets.iter().rev() {
            while next < radii.len() && off.r > radii[next] {
                best = best.max(sum / count as f64);
                next += 1;
            }
            if next == radii.len() {
                break;
            }
            sum += f.get(self.source(&m, &off.shift)).norm();
            count += 1;
        }
        for _ in next..radii.len() {
            best = best.max(sum / count as f64);
        }
        Ok(best)
    }

    /// Mean of `g` over cells with center in the closed disc of radius `r` about `z`.
    pub fn disc_average(&self, g: &Field, z: &[f64], r: f64) -> Result<Complex64> {
        self.spec.check_same(g.spec())?;
        if !(r >= 0.0) {
            return Err(Error::InvalidArgument(format!("disc radius {r}")));
        }
        let m = self.spec.unravel(self.spec.require_point(z)?);
        let mut sum = Complex64::new(0.0, 0.0);
        let mut count = 0usize;
        for off in self.offsets.iter().rev() {
            if off.r > r {
                break;
            }
            sum += g.get(self.source(&m, &off.shift));
            count += 1;
        }
        if count == 0 {
            return Err(Error::InvalidArgument(format!(
                "disc of radius {r} about {z:?} holds no cell centers"
            )));
        }
        Ok(sum / count as f64)
    }

    /// `Σ_w f(z - w)/(π w) h^2` over nonzero offsets.
    pub fn cauchy_transform(&self, f: &Field, z: &[f64]) -> Result<Complex64> {
        self.spec.check_same(f.spec())?;
        self.spec.require_dim("2", self.spec.dim() == 2)?;
        let m = self.spec.unravel(self.spec.require_point(z)?);
        let mut acc = Complex64::new(0.0, 0.0);
        for off in &self.offsets {
            if off.r == 0.0 {
                continue;
            }
            let w = Complex64::new(off.y[0], off.y[1]);
            acc += f.get(self.source(&m, &off.shift)) / w;
        }
        Ok(acc * (self.spec.cell_volume() / PI))
    }
}

pub fn truncated_transform(f: &Field, k: &KernelSpec, eps: f64, x: &[f64]) -> Result<Complex64> {
    PointQuadrature::new(*f.spec()).truncated_transform(f, k, eps, x)
}

pub fn maximal_transform(
    f: &Field,
    k: &KernelSpec,
    ladder: &TruncationLadder,
    x: &[f64],
) -> Result<f64> {
    PointQuadrature::new(*f.spec()).maximal_transform(f, k, ladder, x)
}

pub fn hl_maximal(f: &Field, ladder: &TruncationLadder, x: &[f64]) -> Result<f64> {
    PointQuadrature::new(*f.spec()).hl_maximal(f, ladder, x)
}

pub fn disc_average(g: &Field, z: &[f64], r: f64) -> Result<Complex64> {
    PointQuadrature::new(*g.spec()).disc_average(g, z, r)
}

pub fn cauchy_transform(f: &Field, z: &[f64]) -> Result<Complex64> {
    PointQuadrature::new(*f.spec()).cauchy_transform(f, z)
}

/// Whole-grid evaluation of offset sums `Σ_y f(x - y) w(y)` by circular convolution.
struct Convolver {
    fft: FftNd,
    f_hat: Vec<Complex64>,
}

impl Convolver {
    fn new(f: &Field) -> Self {
        let spec = *f.spec();
        let fft = FftNd::new(&spec);
        let mut f_hat = f.values().to_vec();
        fft.forward(&mut f_hat);
        Self { fft, f_hat }
    }

    /// Fills `table` with weights at each offset index, then convolves in place.
    fn apply(&self, table: &mut [Complex64]) {
        self.fft.forward(table);
        for (t, f) in table.iter_mut().zip(&self.f_hat) {
            *t *= f;
        }
        self.fft.inverse(table);
    }
}

fn fill_truncated_kernel(spec: &GridSpec, k: &KernelSpec, eps: f64, table: &mut [Complex64]) {
    let dim = spec.dim();
    let dv = spec.cell_volume();
    for (index, t) in table.iter_mut().enumerate() {
        *t = match offset_vector(spec, index) {
            Some(y) if norm(&y[..dim]) > eps => k.eval(&y) * dv,
            _ => Complex64::new(0.0, 0.0),
        };
    }
}

/// `T^ε f` at every grid point.
pub fn truncated_transform_grid(f: &Field, k: &KernelSpec, eps: f64) -> Result<Field> {
    let spec = *f.spec();
    check_kernel(&spec, k)?;
    check_radius(&spec, eps)?;
    let conv = Convolver::new(f);
    let mut table = vec![Complex64::new(0.0, 0.0); spec.len()];
    fill_truncated_kernel(&spec, k, eps, &mut table);
    conv.apply(&mut table);
    Field::from_values(spec, table)
}

/// `max_ε |T^ε f|` over the ladder at every grid point, as a real field.
///
/// For real `f` and a real kernel two radii share one convolution, one in the
/// real and one in the imaginary channel.
pub fn maximal_transform_grid(f: &Field, k: &KernelSpec, ladder: &TruncationLadder) -> Result<Field> {
    let spec = *f.spec();
    check_kernel(&spec, k)?;
    ladder.check(&spec)?;
    let conv = Convolver::new(f);
    let paired = k.is_real() && f.is_real(0.0);
    let mut best = vec![0.0f64; spec.len()];
    let mut table = vec![Complex64::new(0.0, 0.0); spec.len()];
    let radii = ladder.radii();
    let dim = spec.dim();
    let dv = spec.cell_volume();
    let step = if paired { 2 } else { 1 };
    for pair in radii.chunks(step) {
        if paired {
            let lo = pair[0];
            let hi = pair.get(1).copied().unwrap_or(lo);
            for (index, t) in table.iter_mut().enumerate() {
                *t = match offset_vector(&spec, index) {
                    Some(y) => {
                        let r = norm(&y[..dim]);
                        let kv = k.eval(&y).re * dv;
                        Complex64::new(
                            if r > lo { kv } else { 0.0 },
                            if r > hi { kv } else { 0.0 },
                        )
                    }
                    None => Complex64::new(0.0, 0.0),
                };
            }
            conv.apply(&mut table);
            for (b, t) in best.iter_mut().zip(&table) {
                *b = b.max(t.re.abs()).max(t.im.abs());
            }
        } else {
            fill_truncated_kernel(&spec, k, pair[0], &mut table);
            conv.apply(&mut table);
            for (b, t) in best.iter_mut().zip(&table) {
                *b = b.max(t.norm());
            }
        }
    }
    Field::from_real(spec, &best)
}

/// Largest ball mean of `|f|` over the ladder at every grid point.
pub fn hl_maximal_grid(f: &Field, ladder: &TruncationLadder) -> Result<Field> {
    let spec = *f.spec();
    ladder.check(&spec)?;
    let conv = Convolver::new(&f.abs());
    let dim = spec.dim();
    let mut best = vec![0.0f64; spec.len()];
    let mut table = vec![Complex64::new(0.0, 0.0); spec.len()];
    let radii = ladder.radii();
    for pair in radii.chunks(2) {
        let lo = pair[0];
        let hi = pair.get(1).copied().unwrap_or(lo);
        let (mut n_lo, mut n_hi) = (0usize, 0usize);
        for (index, t) in table.iter_mut().enumerate() {
            *t = match offset_vector(&spec, index) {
                Some(y) => {
                    let r = norm(&y[..dim]);
                    n_lo += (r <= lo) as usize;
                    n_hi += (r <= hi) as usize;
                    Complex64::new((r <= lo) as u8 as f64, (r <= hi) as u8 as f64)
                }
                None => Complex64::new(0.0, 0.0),
            };
        }
        conv.apply(&mut table);
        for (b, t) in best.iter_mut().zip(&table) {
            *b = b.max(t.re / n_lo as f64).max(t.im / n_hi as f64);
        }
    }
    Field::from_real(spec, &best)
}

/// Mean of `g` over the closed disc of radius `r` about every grid point.
pub fn disc_average_grid(g: &Field, r: f64) -> Result<Field> {
    let spec = *g.spec();
    check_radius(&spec, r)?;
    let conv = Convolver::new(g);
    let dim = spec.dim();
    let mut count = 0usize;
    let mut table: Vec<Complex64> = (0..spec.len())
        .map(|index| match offset_vector(&spec, index) {
            Some(y) if norm(&y[..dim]) <= r => {
                count += 1;
                Complex64::new(1.0, 0.0)
            }
            _ => Complex64::new(0.0, 0.0),
        })
        .collect();
    conv.apply(&mut table);
    let scale = 1.0 / count as f64;
    for t in table.iter_mut() {
        *t *= scale;
    }
    Field::from_values(spec, table)
}

/// Cauchy transform at every grid point.
pub fn cauchy_transform_grid(f: &Field) -> Result<Field> {
    let spec = *f.spec();
    spec.require_dim("2", spec.dim() == 2)?;
    let conv = Convolver::new(f);
    let scale = spec.cell_volume() / PI;
    let mut table: Vec<Complex64> = (0..spec.len())
        .map(|index| match offset_vector(&spec, index) {
            Some(y) if y[0] != 0.0 || y[1] != 0.0 => Complex64::new(y[0], y[1]).inv() * scale,
            _ => Complex64::new(0.0, 0.0),
        })
        .collect();
    conv.apply(&mut table);
    Field::from_values(spec, table)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p1 = x;
                p0 = 1.0;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Principal value `∫ f(x - y) y_j/|y|^{n+1} dy` for a smooth, rapidly decaying `f`.
///
/// Polar form with antipodal directions paired,
/// `½ ∫_S θ_j ∫_0^∞ (f(x - rθ) - f(x + rθ))/r dr dσ(θ)`, whose radial integrand
/// is smooth at `r = 0`. Radial part: 8-point Gauss panels of width 1/4 up to
/// `|x| + 10`. Angles: trapezoid on the circle, Gauss in `cos θ` times
/// trapezoid in azimuth on the sphere.
pub fn riesz_pv_pointwise<F>(f: &F, x: &[f64], j: usize) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let dim = x.len();
    if !(1..=MAX_DIM).contains(&dim) || j == 0 || j > dim {
        return Err(Error::InvalidArgument(format!(
            "polar rule for index {j} in dimension {dim}"
        )));
    }
    let (gx, gw) = gauss_legendre(8);
    let panel = 0.25;
    let reach = norm(x) + 10.0;
    let panels = (reach / panel).ceil() as usize;
    let mut radial = Vec::with_capacity(panels * 8);
    for p in 0..panels {
        let a = p as f64 * panel;
        for (t, w) in gx.iter().zip(&gw) {
            radial.push((a + 0.5 * panel * (t + 1.0), 0.5 * panel * w));
        }
    }
    let line = |theta: &[f64]| {
        let mut minus = [0.0; MAX_DIM];
        let mut plus = [0.0; MAX_DIM];
        radial
            .iter()
            .map(|&(r, w)| {
                for a in 0..dim {
                    minus[a] = x[a] - r * theta[a];
                    plus[a] = x[a] + r * theta[a];
                }
                w * (f(&minus[..dim]) - f(&plus[..dim])) / r
            })
            .sum::<f64>()
    };
    let value = match dim {
        1 => line(&[1.0]),
        2 => {
            let m = 128;
            let dphi = 2.0 * PI / m as f64;
            0.5 * (0..m)
                .map(|k| {
                    let phi = k as f64 * dphi;
                    let theta = [phi.cos(), phi.sin()];
                    theta[j - 1] * line(&theta) * dphi
                })
                .sum::<f64>()
        }
        _ => {
            let (ux, uw) = gauss_legendre(48);
            let m = 96;
            let dphi = 2.0 * PI / m as f64;
            let mut acc = 0.0;
            for (u, w) in ux.iter().zip(&uw) {
                let s = (1.0 - u * u).sqrt();
                for k in 0..m {
                    let phi = k as f64 * dphi;
                    let theta = [s * phi.cos(), s * phi.sin(), *u];
                    acc += theta[j - 1] * line(&theta) * w * dphi;
                }
            }
            0.5 * acc
        }
    };
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral;

    fn gaussian(spec: GridSpec, c: [f64; 2], s: f64) -> Field {
        Field::sample(spec, |x| {
            (-((x[0] - c[0]).powi(2) + (x[1] - c[1]).powi(2)) / (s * s)).exp()
        })
        .unwrap()
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in [1, 2, 5, 8, 48] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            let deg = 2 * n - 1;
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32 - 1)).sum();
            let exact = if (deg - 1) % 2 == 0 { 2.0 / deg as f64 } else { 0.0 };
            assert!((got - exact).abs() < 1e-12, "n {n}");
        }
    }

    #[test]
    fn riesz_kernel_values() {
        let k = KernelSpec::riesz(2, 1).unwrap();
        // y = (3, 4): 3 / 5^3
        assert!((k.eval(&[3.0, 4.0]).re - 3.0 / 125.0).abs() < 1e-15);
        let k = KernelSpec::riesz(1, 1).unwrap();
        assert!((k.eval(&[-0.5]).re + 2.0).abs() < 1e-15);
        let k = KernelSpec::riesz(3, 3).unwrap();
        assert!((k.eval(&[0.0, 0.0, 2.0]).re - 0.125).abs() < 1e-15);
        let b = KernelSpec::beurling();
        let v = b.eval(&[1.0, 1.0]);
        assert!((v - Complex64::new(0.0, -0.5) / PI).norm() < 1e-15);
    }

    #[test]
    fn radial_field_truncation_vanishes_at_origin() {
        let spec = GridSpec::new(2, 4.0, 64).unwrap();
        let f = gaussian(spec, [0.0, 0.0], 1.0);
        let q = PointQuadrature::new(spec);
        for eps in [0.2, 0.5, 1.3] {
            for j in 1..=2 {
                let k = KernelSpec::riesz(2, j).unwrap();
                assert!(q.truncated_transform(&f, &k, eps, &[0.0, 0.0]).unwrap().norm() < 1e-13);
            }
        }
    }

    #[test]
    fn beurling_of_disc_outside_is_independent_of_eps() {
        let spec = GridSpec::new(2, 4.0, 64).unwrap();
        let disc = Field::sample(spec, |x| ((x[0] * x[0] + x[1] * x[1]) <= 1.0) as u8 as f64).unwrap();
        let q = PointQuadrature::new(spec);
        let k = KernelSpec::beurling();
        let z = [2.5, 0.0];
        let a = q.truncated_transform(&disc, &k, 0.2, &z).unwrap();
        let b = q.truncated_transform(&disc, &k, 1.2, &z).unwrap();
        assert!((a - b).norm() < 1e-15);
    }

    #[test]
    fn perturbing_eps_between_shells_changes_nothing() {
        let spec = GridSpec::new(2, 4.0, 64).unwrap();
        let f = gaussian(spec, [0.3, -0.2], 0.8);
        let k = KernelSpec::riesz(2, 1).unwrap();
        let q = PointQuadrature::new(spec);
        let h = spec.spacing();
        // shells at 4h and sqrt(17)h; anything in between selects the same cells
        let a = q.truncated_transform(&f, &k, 4.0 * h + 1e-9, &[0.5, 0.0]).unwrap();
        let b = q.truncated_transform(&f, &k, 4.1 * h, &[0.5, 0.0]).unwrap();
        assert_eq!(a, b);
        // strict inequality: radius exactly 4h drops the 4h shell
        let c = q.truncated_transform(&f, &k, 4.0 * h, &[0.5, 0.0]).unwrap();
        assert_eq!(a, c);
        let d = q.truncated_transform(&f, &k, 4.0 * h - 1e-9, &[0.5, 0.0]).unwrap();
        assert_ne!(a, d);
    }

    #[test]
    fn resolution_is_enforced() {
        let spec = GridSpec::new(2, 4.0, 64).unwrap();
        let f = Field::zeros(spec);
        let k = KernelSpec::beurling();
        assert!(matches!(
            truncated_transform(&f, &k, 0.1, &[0.0, 0.0]),
            Err(Error::Resolution(_))
        ));
        assert!(matches!(
            truncated_transform_grid(&f, &k, 4.5),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn single_radius_ladder_equals_truncation() {
        let spec = GridSpec::new(2, 4.0, 64).unwrap();
        let f = gaussian(spec, [0.5, 0.5], 0.7);
        let k = KernelSpec::beurling();
        let q = PointQuadrature::new(spec);
        let ladder = TruncationLadder::from_radii(vec![0.6]).unwrap();
        let t = q.truncated_transform(&f, &k, 0.6, &[1.0, 0.0]).unwrap();
        assert_eq!(q.maximal_transform(&f, &k, &ladder, &[1.0, 0.0]).unwrap(), t.norm());
    }

    #[test]
    fn grid_routines_match_pointwise_sums() {
        let spec = GridSpec::new(2, 4.0, 64).unwrap();
        let f = gaussian(spec, [0.5, -0.25], 0.6).combine(
            Complex64::new(1.0, 0.0),
            &gaussian(spec, [-1.0, 0.75], 0.9),
            Complex64::new(0.0, -0.4),
        )
        .unwrap();
        let real = gaussian(spec, [0.25, 0.0], 0.5);
        let q = PointQuadrature::new(spec);
        let ladder = TruncationLadder::geometric(0.2, 1.5, 5).unwrap();
        let bk = KernelSpec::beurling();
        let rk = KernelSpec::riesz(2, 2).unwrap();
        let bt = truncated_transform_grid(&f, &bk, 0.45).unwrap();
        let bm = maximal_transform_grid(&f, &bk, &ladder).unwrap();
        let rm = maximal_transform_grid(&real, &rk, &ladder).unwrap();
        let hm = hl_maximal_grid(&f, &ladder).unwrap();
        let da = disc_average_grid(&f, 0.7).unwrap();
        for x in [[0.0, 0.0], [1.0, -0.5], [-2.0, 3.0], [3.875, -4.0]] {
            let i = spec.locate(&x).unwrap();
            let t = q.truncated_transform(&f, &bk, 0.45, &x).unwrap();
            assert!((bt.get(i) - t).norm() < 1e-12);
            let m = q.maximal_transform(&f, &bk, &ladder, &x).unwrap();
            assert!((bm.get(i).re - m).abs() < 1e-12);
            let m = q.maximal_transform(&real, &rk, &ladder, &x).unwrap();
            assert!((rm.get(i).re - m).abs() < 1e-12);
            let m = q.hl_maximal(&f, &ladder, &x).unwrap();
            assert!((hm.get(i).re - m).abs() < 1e-12);
            let d = q.disc_average(&f, &x, 0.7).unwrap();
            assert!((da.get(i) - d).norm() < 1e-12);
        }
    }

    #[test]
    fn hl_maximal_of_constant_is_its_modulus() {
        let spec = GridSpec::new(2, 4.0, 32).unwrap();
        let f = Field::sample(spec, |_| Complex64::new(-3.0, 4.0)).unwrap();
        let ladder = TruncationLadder::geometric(0.5, 2.0, 3).unwrap();
        let m = hl_maximal(&f, &ladder, &[1.0, 1.0]).unwrap();
        assert!((m - 5.0).abs() < 1e-14);
        let g = hl_maximal_grid(&f, &ladder).unwrap();
        assert!(g.values().iter().all(|v| (v.re - 5.0).abs() < 1e-12));
    }

    #[test]
    fn hl_maximal_of_disc_seen_from_outside() {
        // the fraction of B(x, r) covered by the unit disc, |x| = 2, peaks
        // strictly between r = 1 and r = 3
        let spec = GridSpec::new(2, 8.0, 512).unwrap();
        let disc = Field::sample(spec, |x| ((x[0] * x[0] + x[1] * x[1]) <= 1.0) as u8 as f64).unwrap();
        let q = PointQuadrature::new(spec);
        let radii: Vec<f64> = (0..40).map(|k| 1.05 + 0.1 * k as f64).collect();
        let fractions: Vec<f64> = radii
            .iter()
            .map(|&r| {
                let l = TruncationLadder::from_radii(vec![r]).unwrap();
                q.hl_maximal(&disc, &l, &[2.0, 0.0]).unwrap()
            })
            .collect();
        let (peak, best) = fractions
            .iter()
            .enumerate()
            .fold((0, 0.0), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        assert!(best > 0.0 && best < 1.0);
        assert!(peak > 0 && peak < radii.len() - 1);
        // exact lens-area ratio at the peak radius
        let r = radii[peak];
        let (d, a) = (2.0f64, 1.0f64);
        let lens = a * a * ((d * d + a * a - r * r) / (2.0 * d * a)).acos()
            + r * r * ((d * d + r * r - a * a) / (2.0 * d * r)).acos()
            - 0.5 * ((-d + a + r) * (d + a - r) * (d - a + r) * (d + a + r)).sqrt();
        assert!((best - lens / (PI * r * r)).abs() < 0.01, "{best}");
        let full = TruncationLadder::from_radii(radii).unwrap();
        assert_eq!(q.hl_maximal(&disc, &full, &[2.0, 0.0]).unwrap(), best);
    }

    #[test]
    fn cauchy_transform_of_disc() {
        let spec = GridSpec::new(2, 8.0, 512).unwrap();
        let disc = Field::sample_cell_average(spec, 4, |x| {
            ((x[0] * x[0] + x[1] * x[1]) <= 1.0) as u8 as f64
        })
        .unwrap();
        let q = PointQuadrature::new(spec);
        for z in [[0.5, 0.25], [-0.25, -0.5], [2.0, 0.0], [1.5, -1.5]] {
            let w = Complex64::new(z[0], z[1]);
            let exact = if w.norm() < 1.0 { w.conj() } else { w.inv() };
            let got = q.cauchy_transform(&disc, &z).unwrap();
            assert!((got - exact).norm() < 5e-3, "{z:?}: {got} vs {exact}");
        }
        assert_eq!(
            q.cauchy_transform(&Field::zeros(spec), &[0.0, 0.0]).unwrap(),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn cauchy_transform_inverts_d_bar() {
        let spec = GridSpec::new(2, 8.0, 256).unwrap();
        let f = gaussian(spec, [0.25, 0.0], 0.7);
        let cf = cauchy_transform_grid(&f).unwrap();
        let q = PointQuadrature::new(spec);
        let z = [0.75, -0.5];
        let i = spec.locate(&z).unwrap();
        assert!((cf.get(i) - q.cauchy_transform(&f, &z).unwrap()).norm() < 1e-12);
        let back = spectral::d_bar(&cf).unwrap();
        for x in [[0.25, 0.0], [0.75, 0.5], [-0.5, 0.25]] {
            let i = spec.locate(&x).unwrap();
            assert!((back.get(i) - f.get(i)).norm() < 2e-2, "{x:?}");
        }
    }

    #[test]
    fn truncated_beurling_converges_to_spectral_value() {
        let spec = GridSpec::new(2, 8.0, 512).unwrap();
        let f = gaussian(spec, [0.0, 0.0], 1.0);
        let exact = spectral::beurling(&f).unwrap().at(&[0.5, 0.25]).unwrap();
        let q = PointQuadrature::new(spec);
        let k = KernelSpec::beurling();
        let errs: Vec<f64> = [0.4, 0.2, 0.1]
            .iter()
            .map(|&e| (q.truncated_transform(&f, &k, e, &[0.5, 0.25]).unwrap() - exact).norm())
            .collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
        assert!(errs[2] < 5e-3);
    }

    #[test]
    fn polar_rule_reproduces_hilbert_of_gaussian() {
        // 2√π D(1), D the Dawson function
        let got = riesz_pv_pointwise(&|x: &[f64]| (-x[0] * x[0]).exp(), &[1.0], 1).unwrap();
        assert!((got - 2.0 * PI.sqrt() * 0.538_079_506_912_768_4).abs() < 1e-10);
    }

    #[test]
    fn ladder_validation() {
        let l = TruncationLadder::geometric(1.0, 0.5, 3).unwrap();
        assert_eq!(l.radii(), &[0.25, 0.5, 1.0]);
        assert!(TruncationLadder::geometric(1.0, 1.0, 3).is_err());
        assert!(TruncationLadder::from_radii(vec![]).is_err());
        let spec = GridSpec::new(2, 1.0, 8).unwrap();
        assert!(matches!(l.check(&spec), Err(Error::Resolution(_))));
    }
}
