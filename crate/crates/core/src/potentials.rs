//! The auxiliary field `h` with `R_j h = χ_{|x|≥1} K_j`, and the single-layer
//! potential `p(x) = ∫_{|y|=1} |x-y|^{1-n} dσ(y)` of the unit sphere.
//!
//! `h` is built spectrally, `h = -γ^{-2} Σ_i R_i(χ K_i)`. The near-sphere
//! behaviour `h = c_0 p + b` with bounded `b` is then checked by a fit.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::{Field, GridSpec, MAX_DIM};
use crate::spectral::{apply_multiplier, riesz, riesz_constant, MultiplierSpec};
use crate::Complex64;

/// Largest admissible kernel size `L^{-n}` at the box boundary.
pub const BOUNDARY_KERNEL_LIMIT: f64 = 0.02;

/// `χ_{|x| ≥ 1}(x) x_j/|x|^{n+1}`.
pub fn exterior_kernel(dim: usize, j: usize, x: &[f64]) -> f64 {
    let r = x[..dim].iter().map(|v| v * v).sum::<f64>().sqrt();
    if r >= 1.0 {
        x[j - 1] / r.powi(dim as i32 + 1)
    } else {
        0.0
    }
}

fn sub_cells(dim: usize) -> usize {
    if dim == 2 {
        8
    } else {
        4
    }
}

/// The field `h` on `spec` (dimension 2 or 3).
///
/// The exterior kernels are cell averaged; their jump across the sphere
/// otherwise leaves a staircase error of order one near it. Requires
/// `L^{-n} ≤` [`BOUNDARY_KERNEL_LIMIT`].
pub fn h_field(spec: GridSpec) -> Result<Field> {
    let dim = spec.dim();
    spec.require_dim("2 or 3", dim == 2 || dim == 3)?;
    let edge = spec.half_width().powi(-(dim as i32));
    if edge > BOUNDARY_KERNEL_LIMIT {
        return Err(Error::InvalidGrid(format!(
            "half width {} leaves kernel size {edge:.3} at the boundary (limit {BOUNDARY_KERNEL_LIMIT})",
            spec.half_width()
        )));
    }
    let gamma = riesz_constant(dim)?;
    let mut acc = Field::zeros(spec);
    for j in 1..=dim {
        let mut data =
            Field::sample_cell_average(spec, sub_cells(dim), |x| exterior_kernel(dim, j, x))?;
        // planes x_a = -L are their own mirror images on the torus, where an
        // odd kernel has no consistent value
        for i in 0..spec.len() {
            if spec.unravel(i)[..dim].contains(&0) {
                data.values_mut()[i] = Complex64::new(0.0, 0.0);
            }
        }
        acc = &acc + &apply_multiplier(&data, &MultiplierSpec::riesz(dim, j)?)?;
    }
    Ok(&acc * (-1.0 / (gamma * gamma)))
}

fn distance_to_sphere(x: &[f64]) -> f64 {
    (x.iter().map(|v| v * v).sum::<f64>().sqrt() - 1.0).abs()
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityResidual {
    /// `sup |R_j h - χ K_j|` for `j = 1..=n`.
    pub per_axis: Vec<f64>,
    pub points: usize,
}

impl IdentityResidual {
    pub fn sup(&self) -> f64 {
        self.per_axis.iter().fold(0.0, |m, v| m.max(*v))
    }
}

/// Residual of `R_j h = χ K_j` at grid points at least `min_cells` cells from the sphere.
pub fn identity_residual(h: &Field, min_cells: f64) -> Result<IdentityResidual> {
    let spec = *h.spec();
    let dim = spec.dim();
    let cut = min_cells * spec.spacing();
    let keep: Vec<usize> = (0..spec.len())
        .filter(|&i| distance_to_sphere(&spec.point(i)[..dim]) >= cut)
        .collect();
    let mut per_axis = Vec::with_capacity(dim);
    for j in 1..=dim {
        let rj = riesz(h, j)?;
        let worst = keep.iter().fold(0.0f64, |m, &i| {
            let target = exterior_kernel(dim, j, &spec.point(i));
            m.max((rj.get(i).re - target).abs())
        });
        per_axis.push(worst);
    }
    Ok(IdentityResidual {
        per_axis,
        points: keep.len(),
    })
}

/// `max |h(x)| |x|^{n+1}` over `lo ≤ |x| ≤ hi`.
pub fn decay_constant(h: &Field, lo: f64, hi: f64) -> f64 {
    decay_table(h, lo, hi, 1)[0].1
}

/// The decay product maximized over `bins` equal radial shells of `[lo, hi]`,
/// as `(shell midpoint, max)` pairs.
pub fn decay_table(h: &Field, lo: f64, hi: f64, bins: usize) -> Vec<(f64, f64)> {
    let spec = h.spec();
    let dim = spec.dim();
    let width = (hi - lo) / bins as f64;
    let mut table: Vec<(f64, f64)> = (0..bins)
        .map(|b| (lo + (b as f64 + 0.5) * width, 0.0))
        .collect();
    for i in 0..spec.len() {
        let p = spec.point(i);
        let r = p[..dim].iter().map(|v| v * v).sum::<f64>().sqrt();
        if r < lo || r > hi {
            continue;
        }
        let b = (((r - lo) / width) as usize).min(bins - 1);
        table[b].1 = table[b].1.max(h.get(i).norm() * r.powi(dim as i32 + 1));
    }
    table
}

/// Largest `|h(x) - h(Qx)|` over coordinate reflections and axis swaps `Q`,
/// for grid points with `|x| ≤ radius`.
pub fn symmetry_defect(h: &Field, radius: f64) -> f64 {
    let spec = *h.spec();
    let dim = spec.dim();
    let n = spec.points_per_axis();
    let mut worst = 0.0f64;
    for i in 0..spec.len() {
        let m = spec.unravel(i);
        let p = spec.point(i);
        if m[..dim].contains(&0) || p[..dim].iter().map(|v| v * v).sum::<f64>() > radius * radius {
            continue;
        }
        let v = h.get(i);
        for a in 0..dim {
            let mut q = m;
            q[a] = n - m[a];
            worst = worst.max((h.get(spec.ravel(&q[..dim])) - v).norm());
            for b in a + 1..dim {
                let mut q = m;
                q.swap(a, b);
                worst = worst.max((h.get(spec.ravel(&q[..dim])) - v).norm());
            }
        }
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpherePotentialSpec {
    pub dim: usize,
    /// Circle nodes (n = 2) or polar-angle nodes (n = 3, azimuth by symmetry).
    pub nodes: usize,
}

impl SpherePotentialSpec {
    /// Node count `max(64, ⌈16/d⌉)` for points at distance `d` from the sphere.
    pub fn resolving(dim: usize, d: f64) -> Self {
        Self {
            dim,
            nodes: 64usize.max((16.0 / d).ceil() as usize),
        }
    }

    fn spacing(&self) -> f64 {
        if self.dim == 2 {
            2.0 * PI / self.nodes as f64
        } else {
            PI / self.nodes as f64
        }
    }
}

/// `p(x)` by surface quadrature; the rule must resolve `d(x)` with node
/// spacing at most `d(x)/2`.
pub fn p_eval(x: &[f64], spec: &SpherePotentialSpec) -> Result<f64> {
    let dim = spec.dim;
    if x.len() != dim || !(dim == 2 || dim == 3) {
        return Err(Error::Dimension {
            expected: "2 or 3",
            found: x.len(),
        });
    }
    let d = distance_to_sphere(x);
    if spec.spacing() > d / 2.0 {
        return Err(Error::Resolution(format!(
            "{} nodes cannot resolve distance {d:e} to the sphere; use at least {}",
            spec.nodes,
            SpherePotentialSpec::resolving(dim, d).nodes
        )));
    }
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let q = spec.nodes;
    let value = if dim == 2 {
        // trapezoid on the circle; rotating the nodes with x keeps p radial
        let dt = 2.0 * PI / q as f64;
        (0..q)
            .map(|k| {
                let t = k as f64 * dt;
                dt / (r * r + 1.0 - 2.0 * r * t.cos()).sqrt()
            })
            .sum()
    } else {
        // midpoint rule in the polar angle from x; ring weights 2π sin θ Δθ,
        // rescaled to total 4π
        let dt = PI / q as f64;
        let rings: Vec<(f64, f64)> = (0..q)
            .map(|k| {
                let t = (k as f64 + 0.5) * dt;
                (t.cos(), 2.0 * PI * t.sin() * dt)
            })
            .collect();
        let total: f64 = rings.iter().map(|(_, w)| w).sum();
        let scale = 4.0 * PI / total;
        rings
            .iter()
            .map(|(c, w)| scale * w / (r * r + 1.0 - 2.0 * r * c))
            .sum()
    };
    Ok(value)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandReport {
    /// `p/log(1/d)` at the base node counts, one entry per distance and side.
    pub base: Vec<(f64, f64)>,
    pub min: f64,
    pub max: f64,
    /// Extremes of the ratio over all refined node counts.
    pub refined_min: f64,
    pub refined_max: f64,
}

impl BandReport {
    /// Refined ratios stay in `[m/2, 2M]`.
    pub fn is_stable(&self) -> bool {
        self.refined_min >= 0.5 * self.min && self.refined_max <= 2.0 * self.max
    }
}

/// Ratio `p(x)/log(1/d(x))` at `|x| = 1 ± d` along a diagonal direction, at
/// the resolving node count and at that count times each factor in `refinements`.
pub fn log_band(dim: usize, distances: &[f64], refinements: &[usize]) -> Result<BandReport> {
    if distances.is_empty() || distances.iter().any(|&d| !(d > 0.0 && d < 1.0)) {
        return Err(Error::InvalidArgument("distances must lie in (0, 1)".into()));
    }
    let dir: Vec<f64> = (0..dim).map(|_| 1.0 / (dim as f64).sqrt()).collect();
    let mut base = Vec::new();
    let (mut refined_min, mut refined_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for &d in distances {
        for radius in [1.0 - d, 1.0 + d] {
            let x: Vec<f64> = dir.iter().map(|u| u * radius).collect();
            let coarse = SpherePotentialSpec::resolving(dim, d);
            let ratio = |s: &SpherePotentialSpec| -> Result<f64> {
                Ok(p_eval(&x, s)? / (1.0 / d).ln())
            };
            base.push((d, ratio(&coarse)?));
            for &f in refinements {
                let v = ratio(&SpherePotentialSpec {
                    dim,
                    nodes: coarse.nodes * f,
                })?;
                refined_min = refined_min.min(v);
                refined_max = refined_max.max(v);
            }
        }
    }
    let min = base.iter().fold(f64::INFINITY, |m, b| m.min(b.1));
    let max = base.iter().fold(f64::NEG_INFINITY, |m, b| m.max(b.1));
    if refinements.is_empty() {
        refined_min = min;
        refined_max = max;
    }
    Ok(BandReport {
        base,
        min,
        max,
        refined_min,
        refined_max,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PotentialFit {
    pub c0: f64,
    pub intercept: f64,
    /// `sup |h - c_0 p|` over the fit window.
    pub b_sup: f64,
    pub sup_h: f64,
    /// RMS of `h - c_0 p - intercept`.
    pub rms_residual: f64,
    pub points: usize,
}

/// Least-squares fit `h ≈ c_0 p + b_0` on grid points with `d(x)` in
/// `[2 cells, d_max]`.
pub fn fit_c0_and_bound_b(h: &Field, d_max: f64) -> Result<PotentialFit> {
    let spec = *h.spec();
    let dim = spec.dim();
    let d_min = 2.0 * spec.spacing();
    if !(d_max > d_min) {
        return Err(Error::Fit(format!(
            "fit window [{d_min}, {d_max}] is empty at this resolution"
        )));
    }
    let mut ps = Vec::new();
    let mut hs = Vec::new();
    for i in 0..spec.len() {
        let x = spec.point(i);
        let d = distance_to_sphere(&x[..dim]);
        if d < d_min || d > d_max {
            continue;
        }
        ps.push(p_eval(&x[..dim], &SpherePotentialSpec::resolving(dim, d))?);
        hs.push(h.get(i).re);
    }
    let n = ps.len() as f64;
    if ps.len() < 3 {
        return Err(Error::Fit(format!("{} points in the fit window", ps.len())));
    }
    let pm = ps.iter().sum::<f64>() / n;
    let hm = hs.iter().sum::<f64>() / n;
    let spp: f64 = ps.iter().map(|p| (p - pm) * (p - pm)).sum();
    if spp.sqrt() < 1e-8 * pm.abs().max(1.0) * n.sqrt() {
        return Err(Error::Fit("p is nearly constant on the fit window".into()));
    }
    let sph: f64 = ps.iter().zip(&hs).map(|(p, h)| (p - pm) * (h - hm)).sum();
    let c0 = sph / spp;
    let intercept = hm - c0 * pm;
    let mut b_sup = 0.0f64;
    let mut sup_h = 0.0f64;
    let mut sq = 0.0;
    for (p, h) in ps.iter().zip(&hs) {
        b_sup = b_sup.max((h - c0 * p).abs());
        sup_h = sup_h.max(h.abs());
        sq += (h - c0 * p - intercept).powi(2);
    }
    Ok(PotentialFit {
        c0,
        intercept,
        b_sup,
        sup_h,
        rms_residual: (sq / n).sqrt(),
        points: ps.len(),
    })
}

/// Rotates `x` within the plane of its first two coordinates.
pub fn rotate(x: &[f64], angle: f64) -> [f64; MAX_DIM] {
    let mut y = [0.0; MAX_DIM];
    y[..x.len()].copy_from_slice(x);
    let (s, c) = angle.sin_cos();
    y[0] = c * x[0] - s * x[1];
    y[1] = s * x[0] + c * x[1];
    y
}
