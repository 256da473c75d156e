//! Flat `key = value` run configuration shared by every subcommand.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::quadrature::TruncationLadder;

pub const OUTPUT_ENV: &str = "SINGTOOL_OUT";

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dim: usize,
    pub half_width: f64,
    pub points: usize,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub plots: bool,

    pub ladder_eps0: f64,
    pub ladder_ratio: f64,
    pub ladder_count: usize,
    pub lambda_count: usize,
    pub lambda_min: f64,

    pub battery_fields: usize,
    pub battery_points: usize,
    pub identity_fields: usize,
    pub identity_points: usize,
    pub identity_radii: Vec<f64>,

    pub beurling_r_min: f64,
    pub beurling_r_max: f64,
    pub tol_beurling: f64,
    pub tol_cauchy: f64,
    pub tol_identity: f64,
    pub tol_cotlar: f64,
    pub cap_norm_ratio: f64,
    pub cap_pointwise: f64,
    pub pointwise_points: usize,

    pub potentials_dim: usize,
    pub potentials_half_width: f64,
    pub potentials_points: usize,
    pub tol_decay_change: f64,
    pub tol_h_identity: f64,
    pub fit_d_max: f64,
    pub band_refinements: Vec<usize>,
    pub tol_b_change: f64,

    pub ce_eps: Vec<f64>,
    pub ce_half_width: f64,
    pub ce_min_points: usize,
    pub ce_max_points: usize,
    pub ce_cells: f64,
    pub ce_ladder_eps0: f64,
    pub ce_ladder_ratio: f64,
    pub ce_ladder_count: usize,
    pub ce_stride: usize,
    pub ce_multiple: f64,
    pub eta: f64,
    pub tol_budget: f64,
    pub min_r2: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            dim: 2,
            half_width: 8.0,
            points: 512,
            seed: 20_240_611,
            output_dir: PathBuf::from("singtool-out"),
            plots: false,

            ladder_eps0: 0.25,
            ladder_ratio: 1.25,
            ladder_count: 12,
            lambda_count: 64,
            lambda_min: 1e-4,

            battery_fields: 10,
            battery_points: 200,
            identity_fields: 3,
            identity_points: 100,
            identity_radii: vec![0.25, 0.5, 1.0],

            beurling_r_min: 1.1,
            beurling_r_max: 4.0,
            tol_beurling: 0.05,
            tol_cauchy: 0.02,
            tol_identity: 0.01,
            tol_cotlar: 0.01,
            cap_norm_ratio: 10.0,
            cap_pointwise: 20.0,
            pointwise_points: 200,

            potentials_dim: 2,
            potentials_half_width: 8.0,
            potentials_points: 512,
            tol_decay_change: 0.2,
            tol_h_identity: 0.05,
            fit_d_max: 0.3,
            band_refinements: vec![2, 4],
            tol_b_change: 0.2,

            ce_eps: (3..=7).map(|k| 2f64.powi(-k)).collect(),
            ce_half_width: 4.0,
            ce_min_points: 64,
            ce_max_points: 4096,
            ce_cells: 4.0,
            ce_ladder_eps0: 0.5,
            ce_ladder_ratio: 1.01,
            ce_ladder_count: 196,
            ce_stride: 1,
            ce_multiple: 0.8,
            eta: 0.25,
            tol_budget: 2.02,
            min_r2: 0.9,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: Display,
{
    value
        .trim()
        .parse()
        .map_err(|e| Error::Config(format!("{key} = {value:?}: {e}")))
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>>
where
    T::Err: Display,
{
    value
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse(key, s))
        .collect()
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.trim() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        other => Err(Error::Config(format!("{key} = {other:?} is not a boolean"))),
    }
}

impl RunConfig {
    /// Every recognized key, in documentation order.
    pub const KEYS: &'static [&'static str] = &[
        "dim",
        "half_width",
        "points",
        "seed",
        "output_dir",
        "plots",
        "ladder_eps0",
        "ladder_ratio",
        "ladder_count",
        "lambda_count",
        "lambda_min",
        "battery_fields",
        "battery_points",
        "identity_fields",
        "identity_points",
        "identity_radii",
        "beurling_r_min",
        "beurling_r_max",
        "tol_beurling",
        "tol_cauchy",
        "tol_identity",
        "tol_cotlar",
        "cap_norm_ratio",
        "cap_pointwise",
        "pointwise_points",
        "potentials_dim",
        "potentials_half_width",
        "potentials_points",
        "tol_decay_change",
        "tol_h_identity",
        "fit_d_max",
        "band_refinements",
        "tol_b_change",
        "ce_eps",
        "ce_half_width",
        "ce_min_points",
        "ce_max_points",
        "ce_cells",
        "ce_ladder_eps0",
        "ce_ladder_ratio",
        "ce_ladder_count",
        "ce_stride",
        "ce_multiple",
        "eta",
        "tol_budget",
        "min_r2",
    ];

    /// Sets one key; dashes in the key are read as underscores.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('-', "_");
        let k = key.as_str();
        match k {
            "dim" => self.dim = parse(k, value)?,
            "half_width" => self.half_width = parse(k, value)?,
            "points" => self.points = parse(k, value)?,
            "seed" => self.seed = parse(k, value)?,
            "output_dir" => self.output_dir = PathBuf::from(value.trim()),
            "plots" => self.plots = parse_bool(k, value)?,
            "ladder_eps0" => self.ladder_eps0 = parse(k, value)?,
            "ladder_ratio" => self.ladder_ratio = parse(k, value)?,
            "ladder_count" => self.ladder_count = parse(k, value)?,
            "lambda_count" => self.lambda_count = parse(k, value)?,
            "lambda_min" => self.lambda_min = parse(k, value)?,
            "battery_fields" => self.battery_fields = parse(k, value)?,
            "battery_points" => self.battery_points = parse(k, value)?,
            "identity_fields" => self.identity_fields = parse(k, value)?,
            "identity_points" => self.identity_points = parse(k, value)?,
            "identity_radii" => self.identity_radii = parse_list(k, value)?,
            "beurling_r_min" => self.beurling_r_min = parse(k, value)?,
            "beurling_r_max" => self.beurling_r_max = parse(k, value)?,
            "tol_beurling" => self.tol_beurling = parse(k, value)?,
            "tol_cauchy" => self.tol_cauchy = parse(k, value)?,
            "tol_identity" => self.tol_identity = parse(k, value)?,
            "tol_cotlar" => self.tol_cotlar = parse(k, value)?,
            "cap_norm_ratio" => self.cap_norm_ratio = parse(k, value)?,
            "cap_pointwise" => self.cap_pointwise = parse(k, value)?,
            "pointwise_points" => self.pointwise_points = parse(k, value)?,
            "potentials_dim" => self.potentials_dim = parse(k, value)?,
            "potentials_half_width" => self.potentials_half_width = parse(k, value)?,
            "potentials_points" => self.potentials_points = parse(k, value)?,
            "tol_decay_change" => self.tol_decay_change = parse(k, value)?,
            "tol_h_identity" => self.tol_h_identity = parse(k, value)?,
            "fit_d_max" => self.fit_d_max = parse(k, value)?,
            "band_refinements" => self.band_refinements = parse_list(k, value)?,
            "tol_b_change" => self.tol_b_change = parse(k, value)?,
            "ce_eps" => self.ce_eps = parse_list(k, value)?,
            "ce_half_width" => self.ce_half_width = parse(k, value)?,
            "ce_min_points" => self.ce_min_points = parse(k, value)?,
            "ce_max_points" => self.ce_max_points = parse(k, value)?,
            "ce_cells" => self.ce_cells = parse(k, value)?,
            "ce_ladder_eps0" => self.ce_ladder_eps0 = parse(k, value)?,
            "ce_ladder_ratio" => self.ce_ladder_ratio = parse(k, value)?,
            "ce_ladder_count" => self.ce_ladder_count = parse(k, value)?,
            "ce_stride" => self.ce_stride = parse(k, value)?,
            "ce_multiple" => self.ce_multiple = parse(k, value)?,
            "eta" => self.eta = parse(k, value)?,
            "tol_budget" => self.tol_budget = parse(k, value)?,
            "min_r2" => self.min_r2 = parse(k, value)?,
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse_str(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
            cfg.set(key, value)
                .map_err(|e| Error::Config(format!("line {}: {e}", n + 1)))?;
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse_str(&text)
    }

    /// Applies `SINGTOOL_OUT` if set, then checks every value.
    pub fn finish(mut self) -> Result<Self> {
        if let Some(dir) = std::env::var_os(OUTPUT_ENV) {
            if !dir.is_empty() {
                self.output_dir = PathBuf::from(dir);
            }
        }
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("half_width", self.half_width),
            ("ladder_eps0", self.ladder_eps0),
            ("ladder_ratio", self.ladder_ratio),
            ("lambda_min", self.lambda_min),
            ("beurling_r_min", self.beurling_r_min),
            ("tol_beurling", self.tol_beurling),
            ("tol_cauchy", self.tol_cauchy),
            ("tol_identity", self.tol_identity),
            ("tol_cotlar", self.tol_cotlar),
            ("cap_norm_ratio", self.cap_norm_ratio),
            ("cap_pointwise", self.cap_pointwise),
            ("potentials_half_width", self.potentials_half_width),
            ("tol_decay_change", self.tol_decay_change),
            ("tol_h_identity", self.tol_h_identity),
            ("fit_d_max", self.fit_d_max),
            ("tol_b_change", self.tol_b_change),
            ("ce_half_width", self.ce_half_width),
            ("ce_cells", self.ce_cells),
            ("ce_ladder_eps0", self.ce_ladder_eps0),
            ("ce_ladder_ratio", self.ce_ladder_ratio),
            ("ce_multiple", self.ce_multiple),
            ("eta", self.eta),
            ("tol_budget", self.tol_budget),
            ("min_r2", self.min_r2),
        ];
        for (key, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{key} must be positive, got {v}")));
            }
        }
        let counts = [
            ("ladder_count", self.ladder_count),
            ("lambda_count", self.lambda_count),
            ("battery_fields", self.battery_fields),
            ("battery_points", self.battery_points),
            ("identity_fields", self.identity_fields),
            ("identity_points", self.identity_points),
            ("pointwise_points", self.pointwise_points),
            ("ce_ladder_count", self.ce_ladder_count),
            ("ce_stride", self.ce_stride),
        ];
        for (key, v) in counts {
            if v == 0 {
                return Err(Error::Config(format!("{key} must be at least 1")));
            }
        }
        if self.lambda_count < 2 {
            return Err(Error::Config("lambda_count must be at least 2".into()));
        }
        if self.beurling_r_max <= self.beurling_r_min {
            return Err(Error::Config("beurling_r_max must exceed beurling_r_min".into()));
        }
        if self.ce_eps.is_empty() || self.ce_eps.iter().any(|e| !(*e > 0.0 && *e < 0.25)) {
            return Err(Error::Config("ce_eps entries must lie in (0, 1/4)".into()));
        }
        if self.identity_radii.is_empty() || self.identity_radii.iter().any(|r| !(*r > 0.0)) {
            return Err(Error::Config("identity_radii must be positive".into()));
        }
        if self.band_refinements.iter().any(|&f| f < 2) {
            return Err(Error::Config("band_refinements must be at least 2".into()));
        }
        if self.ce_max_points < self.ce_min_points {
            return Err(Error::Config("ce_max_points is below ce_min_points".into()));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::new(self.dim, self.half_width, self.points)
    }

    pub fn ladder(&self) -> Result<TruncationLadder> {
        TruncationLadder::geometric(self.ladder_eps0, self.ladder_ratio, self.ladder_count)
    }

    pub fn ce_ladder(&self) -> Result<TruncationLadder> {
        TruncationLadder::geometric(self.ce_ladder_eps0, self.ce_ladder_ratio, self.ce_ladder_count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_overrides() {
        let cfg = RunConfig::parse_str(
            "# desk scale\npoints = 256  # coarse\nidentity_radii = 0.5, 1.0\n\nplots = yes\n",
        )
        .unwrap();
        assert_eq!(cfg.points, 256);
        assert_eq!(cfg.identity_radii, vec![0.5, 1.0]);
        assert!(cfg.plots);
        assert_eq!(cfg.half_width, 8.0);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(matches!(RunConfig::parse_str("pionts = 3"), Err(Error::Config(_))));
        assert!(matches!(RunConfig::parse_str("points = many"), Err(Error::Config(_))));
        assert!(matches!(RunConfig::parse_str("points 3"), Err(Error::Config(_))));
        let mut cfg = RunConfig::default();
        cfg.tol_cotlar = 0.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn every_documented_key_is_settable() {
        let probe = |k: &str| match k {
            "output_dir" => "x",
            "plots" => "false",
            "identity_radii" | "ce_eps" => "0.125",
            "band_refinements" => "2",
            _ => "3",
        };
        for key in RunConfig::KEYS {
            let mut cfg = RunConfig::default();
            cfg.set(key, probe(key)).unwrap();
        }
        let mut cfg = RunConfig::default();
        cfg.set("half-width", "6").unwrap();
        assert_eq!(cfg.half_width, 6.0);
    }

    #[test]
    fn defaults_are_valid() {
        RunConfig::default().validate().unwrap();
        assert_eq!(RunConfig::default().ce_eps.len(), 5);
    }
}
