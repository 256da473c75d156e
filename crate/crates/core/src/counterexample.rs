//! The dipole experiment: `R_1 f_ε` is two opposite unit bumps, so its
//! `L^1` norm stays at 2, while the weak-L¹ size of the maximal truncation
//! `R_1^* f_ε` grows like `log(1/ε)`.

use crate::error::{Error, Result};
use crate::grid::{Field, GridSpec, MAX_DIM};
use crate::norms::{distribution_of_magnitudes, log_lambda_grid, lp_norm, weak_quasinorm_of};
use crate::quadrature::{maximal_transform_grid, KernelSpec, TruncationLadder};
use crate::spectral::{dipole_preimage, riesz, MOLLIFIER_CELLS};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleSource {
    pub eps: f64,
    pub spec: GridSpec,
}

impl DipoleSource {
    /// Bumps at `a = -e_1` and `b = e_1` of width `eps`, kept at least `L/2`
    /// away from the box boundary.
    pub fn new(eps: f64, spec: GridSpec) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "mollifier width {eps} must lie in (0, 1)"
            )));
        }
        let margin = spec.half_width() - (1.0 + eps);
        if margin < spec.half_width() / 2.0 {
            return Err(Error::InvalidGrid(format!(
                "half width {} leaves margin {margin:.3} around the bumps, need L/2",
                spec.half_width()
            )));
        }
        Ok(Self { eps, spec })
    }

    pub fn a(&self) -> [f64; MAX_DIM] {
        [-1.0, 0.0, 0.0]
    }

    pub fn b(&self) -> [f64; MAX_DIM] {
        [1.0, 0.0, 0.0]
    }
}

/// `f_ε` with `R_1 f_ε = φ_ε(· - a) - φ_ε(· - b)`.
pub fn build_f_eps(src: &DipoleSource) -> Result<Field> {
    dipole_preimage(src.eps, src.spec)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub dim: usize,
    pub half_width: f64,
    /// Finest grid allowed; widths needing more points are skipped.
    pub max_points: usize,
    /// Smallest grid used.
    pub min_points: usize,
    /// Required cells per mollifier width, `h ≤ ε / cells_per_eps`.
    pub cells_per_eps: f64,
    pub ladder: TruncationLadder,
    pub lambda_count: usize,
    pub lambda_min: f64,
    /// Every `stride`-th grid point per axis enters the level-set count.
    pub stride: usize,
    pub eta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub eps: f64,
    pub points_per_axis: usize,
    pub stride: usize,
    pub l1_of_r1f: f64,
    pub l1_of_f: f64,
    pub weak_quasinorm: f64,
    /// λ attaining the quasinorm.
    pub lambda_star: f64,
    pub max_r1star: f64,
    pub ladder_min: f64,
    pub ladder_max: f64,
    pub ladder_count: usize,
    pub lambda_count: usize,
    pub lambda_min: f64,
    /// Lower-bound samples on the positive axis; `None` when the window is empty.
    pub spot_check: Option<Vec<AxisSample>>,
}

impl SweepRecord {
    pub fn ratio(&self) -> f64 {
        self.weak_quasinorm / self.l1_of_r1f
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SweepOutcome {
    Record(SweepRecord),
    Skipped { eps: f64, reason: String },
}

/// Smallest power-of-two grid with `h ≤ ε / cells`, or `None` beyond `max_points`.
pub fn grid_for(eps: f64, cfg: &SweepConfig) -> Option<usize> {
    let mut n = cfg.min_points.next_power_of_two().max(8);
    while 2.0 * cfg.half_width / n as f64 > eps / cfg.cells_per_eps {
        n *= 2;
        if n > cfg.max_points {
            return None;
        }
    }
    Some(n)
}

/// `δ` range `[4, min(ε^{-η}, L/2)]` on which the axis lower bound is sampled.
pub fn spot_check_window(eps: f64, eta: f64, half_width: f64) -> Option<(f64, f64)> {
    let hi = eps.powf(-eta).min(half_width / 2.0);
    (hi >= 4.0).then_some((4.0, hi))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSample {
    pub delta: f64,
    pub r1star: f64,
    /// `R_1^* f_ε(x) δ^n / log(1/ε)`, an empirical `1/C`.
    pub scaled: f64,
}

/// Samples `R_1^*` at `x = b + δ e_1` for grid values of `δ` in the window.
pub fn axis_lower_bound(r1star: &Field, eps: f64, eta: f64) -> Option<Vec<AxisSample>> {
    let spec = r1star.spec();
    let (lo, hi) = spot_check_window(eps, eta, spec.half_width())?;
    let dim = spec.dim();
    let samples = (0..spec.points_per_axis())
        .filter_map(|k| {
            let x1 = spec.coordinate(k);
            let delta = x1 - 1.0;
            if delta < lo || delta > hi {
                return None;
            }
            let mut x = [0.0; MAX_DIM];
            x[0] = x1;
            let v = r1star.at(&x[..dim])?.re;
            Some(AxisSample {
                delta,
                r1star: v,
                scaled: v * delta.powi(dim as i32) / (1.0 / eps).ln(),
            })
        })
        .collect();
    Some(samples)
}

/// One sweep entry on its own grid.
pub fn run_one(eps: f64, cfg: &SweepConfig) -> Result<SweepOutcome> {
    let n = match grid_for(eps, cfg) {
        Some(n) => n,
        None => {
            return Ok(SweepOutcome::Skipped {
                eps,
                reason: format!(
                    "needs more than {} points per axis to put {} cells across ε",
                    cfg.max_points, cfg.cells_per_eps
                ),
            })
        }
    };
    let spec = GridSpec::new(cfg.dim, cfg.half_width, n)?;
    if 2.0 * eps < MOLLIFIER_CELLS * spec.spacing() {
        return Ok(SweepOutcome::Skipped {
            eps,
            reason: format!("mollifier unresolved on {n} points per axis"),
        });
    }
    let src = DipoleSource::new(eps, spec)?;
    let f = build_f_eps(&src)?;
    let l1_of_f = lp_norm(&f, 1.0)?;
    let l1_of_r1f = lp_norm(&riesz(&f, 1)?, 1.0)?;
    let rstar = maximal_transform_grid(&f, &KernelSpec::riesz(cfg.dim, 1)?, &cfg.ladder)?;
    drop(f);

    let stride = cfg.stride.max(1);
    let magnitudes: Vec<f64> = (0..spec.len())
        .filter(|&i| spec.unravel(i)[..cfg.dim].iter().all(|k| k % stride == 0))
        .map(|i| rstar.get(i).re)
        .collect();
    let max_r1star = magnitudes.iter().fold(0.0f64, |m, v| m.max(*v));
    let lambdas = log_lambda_grid(cfg.lambda_min, max_r1star, cfg.lambda_count)?;
    let cell = (stride as f64 * spec.spacing()).powi(cfg.dim as i32);
    let dist = distribution_of_magnitudes(&magnitudes, cell, &lambdas)?;
    let (weak_quasinorm, lambda_star) = weak_quasinorm_of(&dist);

    Ok(SweepOutcome::Record(SweepRecord {
        eps,
        points_per_axis: n,
        stride,
        l1_of_r1f,
        l1_of_f,
        weak_quasinorm,
        lambda_star,
        max_r1star,
        ladder_min: cfg.ladder.min(),
        ladder_max: cfg.ladder.max(),
        ladder_count: cfg.ladder.len(),
        lambda_count: cfg.lambda_count,
        lambda_min: cfg.lambda_min,
        spot_check: axis_lower_bound(&rstar, eps, cfg.eta),
    }))
}

pub fn run_sweep(eps_list: &[f64], cfg: &SweepConfig) -> Result<Vec<SweepOutcome>> {
    eps_list.iter().map(|&eps| run_one(eps, cfg)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Least squares `weak_quasinorm ≈ slope·log(1/ε) + intercept`.
pub fn fit_log_growth(records: &[SweepRecord]) -> Result<LogFit> {
    if records.len() < 4 {
        return Err(Error::Fit(format!(
            "{} usable records, need at least 4",
            records.len()
        )));
    }
    let xs: Vec<f64> = records.iter().map(|r| (1.0 / r.eps).ln()).collect();
    let ys: Vec<f64> = records.iter().map(|r| r.weak_quasinorm).collect();
    let n = xs.len() as f64;
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xm).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - ym).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all records share one ε".into()));
    }
    if syy == 0.0 {
        return Err(Error::Fit(
            "constant quasinorm column: slope 0 and r² undefined".into(),
        ));
    }
    let slope = sxy / sxx;
    Ok(LogFit {
        slope,
        intercept: ym - slope * xm,
        r2: sxy * sxy / (sxx * syy),
    })
}
