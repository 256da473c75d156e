//! The verification subcommands. Each returns a [`Report`] with its checks,
//! one CSV table and optional plots.

use crate::battery::Battery;
use crate::config::RunConfig;
use crate::counterexample::{fit_log_growth, run_sweep, SweepConfig, SweepOutcome, SweepRecord};
use crate::error::{Error, Result};
use crate::grid::{Field, GridSpec};
use crate::norms::lp_norm;
use crate::potentials::{
    decay_constant, decay_table, fit_c0_and_bound_b, h_field, identity_residual, log_band,
    symmetry_defect,
};
use crate::quadrature::{
    cauchy_transform_grid, disc_average_grid, hl_maximal_grid, maximal_transform_grid,
    truncated_transform_grid, KernelSpec,
};
use crate::report::{num, Check, Plot, Report, Series, Table};
use crate::spectral::{beurling, riesz};
use crate::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    BeurlingIdentity,
    Cotlar,
    MaximalRiesz,
    Counterexample,
    Potentials,
}

impl Command {
    pub const ALL: [Command; 5] = [
        Command::BeurlingIdentity,
        Command::Cotlar,
        Command::MaximalRiesz,
        Command::Counterexample,
        Command::Potentials,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::BeurlingIdentity => "verify-beurling-identity",
            Command::Cotlar => "verify-cotlar",
            Command::MaximalRiesz => "verify-theorem1",
            Command::Counterexample => "run-counterexample",
            Command::Potentials => "verify-potentials",
        }
    }

    pub fn run(self, cfg: &RunConfig) -> Result<Report> {
        match self {
            Command::BeurlingIdentity => verify_beurling_identity(cfg),
            Command::Cotlar => verify_cotlar(cfg),
            Command::MaximalRiesz => verify_maximal_riesz(cfg),
            Command::Counterexample => run_counterexample(cfg),
            Command::Potentials => verify_potentials(cfg),
        }
    }
}

const DISC_SUB_CELLS: usize = 8;
/// Sample points keep every coordinate within this distance of the origin.
const SAMPLE_REACH: f64 = 3.0;

fn require_dim(cfg: &RunConfig, what: &'static str, ok: bool) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Dimension {
            expected: what,
            found: cfg.dim,
        })
    }
}

fn unit_disc(spec: GridSpec) -> Result<Field> {
    Field::sample_cell_average(spec, DISC_SUB_CELLS, |x: &[f64]| {
        if x[0] * x[0] + x[1] * x[1] <= 1.0 {
            1.0
        } else {
            0.0
        }
    })
}

fn modulus(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn blank() -> String {
    String::new()
}

/// `sup |B χ_D - 1/z^2|` over `r_min ≤ |z| ≤ r_max`, plus the per-point rows.
fn beurling_annulus_error(
    spec: GridSpec,
    cfg: &RunConfig,
    table: Option<&mut Table>,
) -> Result<(f64, Field)> {
    let b = beurling(&unit_disc(spec)?)?;
    let mut worst = 0.0f64;
    let mut rows = Vec::new();
    for i in 0..spec.len() {
        let p = spec.point(i);
        let r = modulus(&p[..2]);
        if r < cfg.beurling_r_min || r > cfg.beurling_r_max {
            continue;
        }
        let z = Complex64::new(p[0], p[1]);
        let expected = (z * z).inv();
        let got = b.get(i);
        let err = (got - expected).norm();
        worst = worst.max(err);
        if table.is_some() {
            rows.push(vec![
                "closed_form".into(),
                spec.points_per_axis().to_string(),
                num(p[0]),
                num(p[1]),
                num(got.re),
                num(got.im),
                num(expected.re),
                num(expected.im),
                num(err),
            ]);
        }
    }
    if let Some(t) = table {
        t.rows.extend(rows);
    }
    Ok((worst, b))
}

pub fn verify_beurling_identity(cfg: &RunConfig) -> Result<Report> {
    require_dim(cfg, "2", cfg.dim == 2)?;
    let spec = cfg.grid()?;
    let fine = spec.with_points(2 * spec.points_per_axis())?;
    let mut table = Table::new(&[
        "kind",
        "points",
        "x",
        "y",
        "computed_re",
        "computed_im",
        "expected_re",
        "expected_im",
        "error",
    ]);
    let (coarse_err, b) = beurling_annulus_error(spec, cfg, Some(&mut table))?;
    let (fine_err, _) = beurling_annulus_error(fine, cfg, None)?;
    let n = spec.points_per_axis();
    let mut report = Report::new(Command::BeurlingIdentity.name(), Table::default());
    report.checks.push(Check::at_most(
        format!("sup |B(disc) - 1/z^2| on {}≤|z|≤{} at N={n}", cfg.beurling_r_min, cfg.beurling_r_max),
        coarse_err,
        cfg.tol_beurling,
    ));
    report.checks.push(Check::above(
        format!("error drop from N={n} to N={}", 2 * n),
        coarse_err - fine_err,
        0.0,
    ));
    for (kind, n_used, err) in [("refinement", n, coarse_err), ("refinement", 2 * n, fine_err)] {
        table.push(vec![
            kind.into(),
            n_used.to_string(),
            blank(),
            blank(),
            num(err),
            blank(),
            blank(),
            blank(),
            num(err),
        ]);
    }

    for (z, expected) in [
        (Complex64::new(2.0, 0.0), Complex64::new(0.25, 0.0)),
        (Complex64::new(1.0, 1.0), Complex64::new(0.0, -0.5)),
    ] {
        let got = spec.require_point(&[z.re, z.im]).map(|i| b.get(i))?;
        let err = (got - expected).norm();
        report.checks.push(Check::at_most(
            format!("spot value at z = {}{:+}i", z.re, z.im),
            err,
            cfg.tol_beurling,
        ));
        table.push(vec![
            "spot".into(),
            n.to_string(),
            num(z.re),
            num(z.im),
            num(got.re),
            num(got.im),
            num(expected.re),
            num(expected.im),
            num(err),
        ]);
    }

    // Cauchy route: C(χ_D) is z̄ inside and 1/z outside, and B(χ_D) = -∂_z C(χ_D)
    // is 0 inside and 1/z^2 outside.
    let cauchy = cauchy_transform_grid(&unit_disc(spec)?)?;
    let margin = cfg.beurling_r_min - 1.0;
    let cells = 2.0 * spec.spacing();
    let (mut cauchy_err, mut interior_err) = (0.0f64, 0.0f64);
    for i in 0..spec.len() {
        let p = spec.point(i);
        let r = modulus(&p[..2]);
        if r > cfg.beurling_r_max {
            continue;
        }
        let z = Complex64::new(p[0], p[1]);
        let inside = r < 1.0;
        if (r - 1.0).abs() >= cells {
            let expected = if inside { z.conj() } else { z.inv() };
            let got = cauchy.get(i);
            let err = (got - expected).norm();
            cauchy_err = cauchy_err.max(err);
            table.push(vec![
                "cauchy".into(),
                n.to_string(),
                num(p[0]),
                num(p[1]),
                num(got.re),
                num(got.im),
                num(expected.re),
                num(expected.im),
                num(err),
            ]);
        }
        if inside && 1.0 - r >= margin {
            let got = b.get(i);
            interior_err = interior_err.max(got.norm());
            table.push(vec![
                "interior".into(),
                n.to_string(),
                num(p[0]),
                num(p[1]),
                num(got.re),
                num(got.im),
                num(0.0),
                num(0.0),
                num(got.norm()),
            ]);
        }
    }
    report.checks.push(Check::at_most(
        "sup |C(disc) - F| away from the circle",
        cauchy_err,
        cfg.tol_cauchy,
    ));
    report.checks.push(Check::at_most(
        format!("sup |B(disc)| on |z|≤{:.3}", 1.0 - margin),
        interior_err,
        cfg.tol_beurling,
    ));
    report.table = table;
    report.plots.push(Plot {
        file_stem: "beurling-refinement".into(),
        title: "Beurling closed form: sup error vs grid".into(),
        x_label: "log2 N".into(),
        y_label: "sup error".into(),
        series: vec![Series {
            name: "sup |B(disc) - 1/z^2|".into(),
            points: vec![
                ((n as f64).log2(), coarse_err),
                (((2 * n) as f64).log2(), fine_err),
            ],
            markers: false,
        }],
    });
    Ok(report)
}

/// Grid points at distance `offset` from the unit circle, at `count` angles.
fn circle_points(spec: &GridSpec, offset: f64, count: usize) -> Vec<[f64; 3]> {
    let h = spec.spacing();
    let mut out: Vec<[f64; 3]> = Vec::with_capacity(count);
    for k in 0..count {
        let t = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
        let (s, c) = t.sin_cos();
        let snap = |v: f64| (v / h).round() * h;
        let p = [snap((1.0 + offset) * c), snap((1.0 + offset) * s), 0.0];
        if spec.locate(&p[..2]).is_some() && !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

pub fn verify_cotlar(cfg: &RunConfig) -> Result<Report> {
    require_dim(cfg, "2", cfg.dim == 2)?;
    let spec = cfg.grid()?;
    let ladder = cfg.ladder()?;
    let kernel = KernelSpec::beurling();
    let tol = cfg.tol_cotlar;
    let mut table = Table::new(&["kind", "field", "radius", "x", "y", "lhs", "rhs", "ratio"]);
    let mut battery = Battery::new(cfg.seed);

    let cotlar_at = |label: String,
                         f: &Field,
                         points: &[[f64; 3]],
                         table: &mut Table|
     -> Result<(usize, f64)> {
        let bstar = maximal_transform_grid(f, &kernel, &ladder)?;
        let m = hl_maximal_grid(&beurling(f)?, &ladder)?;
        let (mut violations, mut worst) = (0usize, 0.0f64);
        for p in points {
            let i = spec.require_point(&p[..2])?;
            let (lhs, rhs) = (bstar.get(i).re, m.get(i).re);
            let ratio = lhs / rhs;
            violations += (lhs > (1.0 + tol) * rhs) as usize;
            worst = worst.max(ratio);
            table.push(vec![
                "cotlar".into(),
                label.clone(),
                blank(),
                num(p[0]),
                num(p[1]),
                num(lhs),
                num(rhs),
                num(ratio),
            ]);
        }
        Ok((violations, worst))
    };

    let (mut violations, mut worst) = (0usize, 0.0f64);
    for field in 0..cfg.battery_fields {
        let f = battery.field(spec, true)?;
        let points = battery.points(&spec, cfg.battery_points, SAMPLE_REACH);
        let (v, w) = cotlar_at(field.to_string(), &f, &points, &mut table)?;
        violations += v;
        worst = worst.max(w);
    }

    let mut disc_points = battery.points(&spec, cfg.battery_points, SAMPLE_REACH);
    let h = spec.spacing();
    for offset in [-2.0 * h, -h, 0.0, h, 2.0 * h] {
        disc_points.extend(circle_points(&spec, offset, 32));
    }
    let (disc_violations, disc_worst) =
        cotlar_at("disc".into(), &unit_disc(spec)?, &disc_points, &mut table)?;

    let mut report = Report::new(Command::Cotlar.name(), Table::default());
    report.checks.push(Check::at_most(
        format!("violations of B*f ≤ (1+{tol})·M(Bf) on the battery"),
        violations as f64,
        0.0,
    ));
    report.checks.push(Check::at_most(
        "violations for the disc indicator",
        disc_violations as f64,
        0.0,
    ));
    report.notes.push(format!(
        "largest ratio B*f / M(Bf): battery {worst}, disc {disc_worst}"
    ));

    let mut identity = Battery::new(cfg.seed.wrapping_add(1));
    let mut identity_err = 0.0f64;
    for field in 0..cfg.identity_fields {
        let f = identity.field(spec, true)?;
        let points = identity.points(&spec, cfg.identity_points, SAMPLE_REACH);
        let bf = beurling(&f)?;
        for &r in &cfg.identity_radii {
            let truncated = truncated_transform_grid(&f, &kernel, r)?;
            let averaged = disc_average_grid(&bf, r)?;
            for p in &points {
                let i = spec.require_point(&p[..2])?;
                let (lhs, rhs) = (truncated.get(i), averaged.get(i));
                let err = (lhs - rhs).norm();
                identity_err = identity_err.max(err);
                table.push(vec![
                    "identity".into(),
                    field.to_string(),
                    num(r),
                    num(p[0]),
                    num(p[1]),
                    num(lhs.norm()),
                    num(rhs.norm()),
                    num(err),
                ]);
            }
        }
    }
    report.checks.push(Check::at_most(
        "sup |B^r f - mean of Bf over D(z,r)|",
        identity_err,
        cfg.tol_identity,
    ));
    report.table = table;
    Ok(report)
}

pub fn verify_maximal_riesz(cfg: &RunConfig) -> Result<Report> {
    require_dim(cfg, "1 or 2", cfg.dim == 1 || cfg.dim == 2)?;
    let spec = cfg.grid()?;
    let ladder = cfg.ladder()?;
    let mut table = Table::new(&["kind", "field", "j", "p", "x", "y", "value", "bound", "ratio"]);
    let mut battery = Battery::new(cfg.seed);
    let (mut worst_ratio, mut c_s) = (0.0f64, 0.0f64);
    let coord = |p: &[f64; 3], a: usize| if a < cfg.dim { num(p[a]) } else { blank() };

    for field in 0..cfg.battery_fields {
        let f = battery.field(spec, false)?;
        let points = battery.points(&spec, cfg.pointwise_points, SAMPLE_REACH);
        for j in 1..=cfg.dim {
            let rj = riesz(&f, j)?;
            let rstar = maximal_transform_grid(&f, &KernelSpec::riesz(cfg.dim, j)?, &ladder)?;
            for p in [2.0, 4.0] {
                let (top, bottom) = (lp_norm(&rstar, p)?, lp_norm(&rj, p)?);
                let ratio = top / bottom;
                worst_ratio = worst_ratio.max(ratio);
                table.push(vec![
                    "norm_ratio".into(),
                    field.to_string(),
                    j.to_string(),
                    num(p),
                    blank(),
                    blank(),
                    num(top),
                    num(bottom),
                    num(ratio),
                ]);
            }
            let squared = rj.map(|v| Complex64::new(v.norm_sqr(), 0.0));
            let m = hl_maximal_grid(&squared, &ladder)?;
            for p in &points {
                let i = spec.require_point(&p[..cfg.dim])?;
                let (value, bound) = (rstar.get(i).re, m.get(i).re.sqrt());
                if bound <= 0.0 {
                    continue;
                }
                let ratio = value / bound;
                c_s = c_s.max(ratio);
                table.push(vec![
                    "pointwise".into(),
                    field.to_string(),
                    j.to_string(),
                    num(2.0),
                    coord(p, 0),
                    coord(p, 1),
                    num(value),
                    num(bound),
                    num(ratio),
                ]);
            }
        }
    }

    let h_spec = GridSpec::new(cfg.potentials_dim, cfg.potentials_half_width, cfg.potentials_points)?;
    let h = h_field(h_spec)?;
    let decay = decay_table(&h, 2.0, h_spec.half_width() / 2.0, 8);
    for &(r, v) in &decay {
        table.push(vec![
            "h_decay".into(),
            blank(),
            blank(),
            blank(),
            num(r),
            blank(),
            num(v),
            blank(),
            blank(),
        ]);
    }

    let mut report = Report::new(Command::MaximalRiesz.name(), table);
    report.checks.push(Check::at_most(
        "max ‖R_j* f‖_p / ‖R_j f‖_p over the battery, p ∈ {2,4}",
        worst_ratio,
        cfg.cap_norm_ratio,
    ));
    report.checks.push(Check::at_most(
        "fitted C_2 in R_j* f ≤ C_2 M(|R_j f|^2)^(1/2)",
        c_s,
        cfg.cap_pointwise,
    ));
    report.notes.push(format!(
        "h decay |h|·|x|^(n+1) on 2≤|x|≤{}: max {}",
        h_spec.half_width() / 2.0,
        decay.iter().fold(0.0f64, |m, d| m.max(d.1))
    ));
    Ok(report)
}

pub fn sweep_config(cfg: &RunConfig) -> Result<SweepConfig> {
    Ok(SweepConfig {
        dim: cfg.dim,
        half_width: cfg.ce_half_width,
        max_points: cfg.ce_max_points,
        min_points: cfg.ce_min_points,
        cells_per_eps: cfg.ce_cells,
        ladder: cfg.ce_ladder()?,
        lambda_count: cfg.lambda_count,
        lambda_min: cfg.lambda_min,
        stride: cfg.ce_stride,
        eta: cfg.eta,
    })
}

pub fn run_counterexample(cfg: &RunConfig) -> Result<Report> {
    require_dim(cfg, "2", cfg.dim == 2)?;
    let outcomes = run_sweep(&cfg.ce_eps, &sweep_config(cfg)?)?;
    let mut table = Table::new(&[
        "eps",
        "points",
        "stride",
        "l1_r1f",
        "l1_f",
        "weak_quasinorm",
        "lambda_star",
        "max_r1star",
        "ratio",
        "ladder_min",
        "ladder_max",
        "ladder_count",
        "lambda_count",
        "lambda_min",
        "spot_check_min",
        "status",
    ]);
    let mut records: Vec<SweepRecord> = Vec::new();
    let mut report = Report::new(Command::Counterexample.name(), Table::default());
    for outcome in outcomes {
        match outcome {
            SweepOutcome::Record(r) => {
                let spot = match &r.spot_check {
                    Some(s) if !s.is_empty() => {
                        num(s.iter().fold(f64::INFINITY, |m, a| m.min(a.scaled)))
                    }
                    _ => "not evaluated".into(),
                };
                table.push(vec![
                    num(r.eps),
                    r.points_per_axis.to_string(),
                    r.stride.to_string(),
                    num(r.l1_of_r1f),
                    num(r.l1_of_f),
                    num(r.weak_quasinorm),
                    num(r.lambda_star),
                    num(r.max_r1star),
                    num(r.ratio()),
                    num(r.ladder_min),
                    num(r.ladder_max),
                    r.ladder_count.to_string(),
                    r.lambda_count.to_string(),
                    num(r.lambda_min),
                    spot,
                    "ok".into(),
                ]);
                records.push(r);
            }
            SweepOutcome::Skipped { eps, reason } => {
                let mut row = vec![blank(); 16];
                row[0] = num(eps);
                row[15] = format!("skipped: {reason}");
                table.push(row);
                report.notes.push(format!("ε = {eps} skipped: {reason}"));
            }
        }
    }

    match fit_log_growth(&records) {
        Ok(fit) => {
            report.checks.push(Check::above("log-growth slope", fit.slope, 0.0));
            report
                .checks
                .push(Check::at_least("log-growth r^2", fit.r2, cfg.min_r2));
            report.notes.push(format!(
                "weak quasinorm ≈ {}·log(1/ε) + {}",
                fit.slope, fit.intercept
            ));
            let xs: Vec<f64> = records.iter().map(|r| (1.0 / r.eps).ln()).collect();
            let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            report.plots.push(Plot {
                file_stem: "counterexample-growth".into(),
                title: "Weak quasinorm of the maximal transform vs log(1/ε)".into(),
                x_label: "log(1/ε)".into(),
                y_label: "weak L1 quasinorm".into(),
                series: vec![
                    Series {
                        name: "sweep".into(),
                        points: xs.iter().zip(&records).map(|(x, r)| (*x, r.weak_quasinorm)).collect(),
                        markers: true,
                    },
                    Series {
                        name: "fit".into(),
                        points: [lo, hi]
                            .iter()
                            .map(|&x| (x, fit.slope * x + fit.intercept))
                            .collect(),
                        markers: false,
                    },
                ],
            });
        }
        Err(e) => {
            report.checks.push(Check::above("log-growth slope", f64::NAN, 0.0));
            report.notes.push(format!("log fit failed: {e}"));
        }
    }

    let budget = records.iter().fold(0.0f64, |m, r| m.max(r.l1_of_r1f));
    report
        .checks
        .push(Check::at_most("max ‖R_1 f_ε‖_1", budget, cfg.tol_budget));
    let mut by_eps = records.clone();
    by_eps.sort_by(|a, b| b.eps.total_cmp(&a.eps));
    let drops = by_eps
        .windows(2)
        .filter(|w| w[1].weak_quasinorm < w[0].weak_quasinorm)
        .count();
    report.checks.push(Check::at_most(
        "decreases in the weak quasinorm column as ε shrinks",
        drops as f64,
        0.0,
    ));
    if let Some(smallest) = by_eps.last() {
        report.checks.push(Check::above(
            format!("weak quasinorm / ‖R_1 f_ε‖_1 at ε = {}", smallest.eps),
            smallest.ratio(),
            cfg.ce_multiple,
        ));
    }
    report.table = table;
    Ok(report)
}

pub fn verify_potentials(cfg: &RunConfig) -> Result<Report> {
    let dim = cfg.potentials_dim;
    if !(dim == 2 || dim == 3) {
        return Err(Error::Dimension {
            expected: "2 or 3",
            found: dim,
        });
    }
    let spec = GridSpec::new(dim, cfg.potentials_half_width, cfg.potentials_points)?;
    let fine = spec.with_points(2 * spec.points_per_axis())?;
    let mut table = Table::new(&["kind", "points", "param", "side", "value"]);
    let mut report = Report::new(Command::Potentials.name(), Table::default());
    let (lo, hi) = (2.0, spec.half_width() / 2.0);

    let mut decays = Vec::new();
    let mut fits = Vec::new();
    let mut curves = Vec::new();
    for (level, s) in [spec, fine].into_iter().enumerate() {
        let n = s.points_per_axis().to_string();
        let h = h_field(s)?;
        let residual = identity_residual(&h, 2.0)?;
        for (j, v) in residual.per_axis.iter().enumerate() {
            table.push(vec![
                "identity_residual".into(),
                n.clone(),
                (j + 1).to_string(),
                blank(),
                num(*v),
            ]);
        }
        if level == 0 {
            report.checks.push(Check::at_most(
                format!("sup |R_j h - χK_j| two cells from the sphere, N={n}"),
                residual.sup(),
                cfg.tol_h_identity,
            ));
            report
                .notes
                .push(format!("symmetry defect of h: {}", symmetry_defect(&h, 1.5)));
        }
        let curve = decay_table(&h, lo, hi, 8);
        for &(r, v) in &curve {
            table.push(vec!["decay".into(), n.clone(), num(r), blank(), num(v)]);
        }
        curves.push((n.clone(), curve));
        decays.push(decay_constant(&h, lo, hi));
        let fit = fit_c0_and_bound_b(&h, cfg.fit_d_max)?;
        for (key, v) in [
            ("c0", fit.c0),
            ("intercept", fit.intercept),
            ("b_sup", fit.b_sup),
            ("sup_h", fit.sup_h),
            ("rms_residual", fit.rms_residual),
        ] {
            table.push(vec!["fit".into(), n.clone(), key.into(), blank(), num(v)]);
        }
        fits.push(fit);
    }

    let decay_change = (decays[1] - decays[0]).abs() / decays[0];
    report.checks.push(Check::at_most(
        format!("relative change of max |h||x|^(n+1) on {lo}≤|x|≤{hi}"),
        decay_change,
        cfg.tol_decay_change,
    ));
    report.checks.push(Check::above(
        "c0 keeps its sign under refinement",
        fits[0].c0 * fits[1].c0,
        0.0,
    ));
    report.checks.push(Check::at_most(
        "relative change of sup |h - c0 p| under refinement",
        (fits[1].b_sup - fits[0].b_sup).abs() / fits[0].b_sup,
        cfg.tol_b_change,
    ));

    let distances: Vec<f64> = (0..=12)
        .map(|k| 1e-4 * (0.4f64 / 1e-4).powf(k as f64 / 12.0))
        .collect();
    let band = log_band(dim, &distances, &cfg.band_refinements)?;
    for (k, &(d, v)) in band.base.iter().enumerate() {
        let side = if k % 2 == 0 { "inner" } else { "outer" };
        table.push(vec!["band".into(), blank(), num(d), side.into(), num(v)]);
    }
    for (key, v) in [
        ("min", band.min),
        ("max", band.max),
        ("refined_min", band.refined_min),
        ("refined_max", band.refined_max),
    ] {
        table.push(vec!["band_summary".into(), blank(), key.into(), blank(), num(v)]);
    }
    report.checks.push(Check::at_least(
        "refined p/log(1/d) minimum over half the base minimum",
        band.refined_min / (0.5 * band.min),
        1.0,
    ));
    report.checks.push(Check::at_most(
        "refined p/log(1/d) maximum over twice the base maximum",
        band.refined_max / (2.0 * band.max),
        1.0,
    ));

    report.plots.push(Plot {
        file_stem: "potentials-decay".into(),
        title: "Decay of h: max |h||x|^(n+1) per shell".into(),
        x_label: "|x|".into(),
        y_label: "max |h||x|^(n+1)".into(),
        series: curves
            .into_iter()
            .map(|(n, c)| Series {
                name: format!("N = {n}"),
                points: c,
                markers: false,
            })
            .collect(),
    });
    report.plots.push(Plot {
        file_stem: "potentials-band".into(),
        title: "p(x) / log(1/d(x)) near the sphere".into(),
        x_label: "log10 d".into(),
        y_label: "ratio".into(),
        series: ["inner", "outer"]
            .iter()
            .enumerate()
            .map(|(side, name)| Series {
                name: (*name).into(),
                points: band
                    .base
                    .iter()
                    .skip(side)
                    .step_by(2)
                    .map(|&(d, v)| (d.log10(), v))
                    .collect(),
                markers: false,
            })
            .collect(),
    });
    report.table = table;
    Ok(report)
}
