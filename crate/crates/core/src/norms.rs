//! Lebesgue norms, distribution functions and weak-type quasinorms of fields.

use crate::error::{Error, Result};
use crate::grid::Field;

/// `(∫|f|^p)^{1/p}` by the midpoint rule; `p = f64::INFINITY` gives the max modulus.
pub fn lp_norm(f: &Field, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidArgument(format!("L^p norm needs p >= 1, got {p}")));
    }
    if p.is_infinite() {
        return Ok(f.max_abs());
    }
    let dv = f.spec().cell_volume();
    let sum: f64 = if p == 1.0 {
        f.values().iter().map(|v| v.norm()).sum()
    } else if p == 2.0 {
        f.values().iter().map(|v| v.norm_sqr()).sum()
    } else {
        f.values().iter().map(|v| v.norm().powf(p)).sum()
    };
    Ok((sum * dv).powf(1.0 / p))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionRecord {
    pub lambda: f64,
    /// Measure of `{|f| > λ}`: number of cells times the cell volume.
    pub superlevel_measure: f64,
}

fn check_lambdas(lambdas: &[f64]) -> Result<()> {
    if lambdas.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
        return Err(Error::InvalidArgument("λ values must be positive and finite".into()));
    }
    if lambdas.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("λ grid must be sorted ascending".into()));
    }
    Ok(())
}

/// Distribution function of a list of magnitudes, each carrying `cell_measure`.
pub fn distribution_of_magnitudes(
    magnitudes: &[f64],
    cell_measure: f64,
    lambdas: &[f64],
) -> Result<Vec<DistributionRecord>> {
    check_lambdas(lambdas)?;
    let mut sorted = magnitudes.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(lambdas
        .iter()
        .map(|&lambda| {
            let below = sorted.partition_point(|&v| v <= lambda);
            DistributionRecord {
                lambda,
                superlevel_measure: (sorted.len() - below) as f64 * cell_measure,
            }
        })
        .collect())
}

pub fn distribution(f: &Field, lambdas: &[f64]) -> Result<Vec<DistributionRecord>> {
    let magnitudes: Vec<f64> = f.values().iter().map(|v| v.norm()).collect();
    distribution_of_magnitudes(&magnitudes, f.spec().cell_volume(), lambdas)
}

/// Largest `λ·|{|f| > λ}|` over a distribution, with the λ attaining it.
pub fn weak_quasinorm_of(records: &[DistributionRecord]) -> (f64, f64) {
    records.iter().fold((0.0, f64::NAN), |best, r| {
        let v = r.lambda * r.superlevel_measure;
        if v > best.0 {
            (v, r.lambda)
        } else {
            best
        }
    })
}

/// `max_λ λ·|{|f| > λ}|` over the λ grid.
pub fn weak_quasinorm(f: &Field, lambdas: &[f64]) -> Result<f64> {
    Ok(weak_quasinorm_of(&distribution(f, lambdas)?).0)
}

/// `count` log-spaced values from `lo` to `hi` inclusive.
pub fn log_lambda_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) || count < 2 {
        return Err(Error::InvalidArgument(format!(
            "λ grid needs 0 < lo < hi and count >= 2 (got {lo}, {hi}, {count})"
        )));
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..count)
        .map(|k| {
            if k == 0 {
                lo
            } else if k + 1 == count {
                hi
            } else {
                (a + (b - a) * k as f64 / (count - 1) as f64).exp()
            }
        })
        .collect())
}
