//! Command-line front end: parameter ingestion, one subcommand per
//! computation, and bit-stable CSV/JSON serialization.
//!
//! Floats are rendered with a fixed 17-significant-digit scientific format
//! so identical invocations produce byte-identical files.

use crate::analysis::{self, AnalysisError, EnergyTable, ResidualScalingReport};
use crate::basis::{quadrature_x4_element, QuadratureRule};
use crate::eigen::EigenError;
use crate::hamiltonian::{build_matrix, v_element};
use crate::params::{reduce, ParamError, PhysicalParams, ReducedParams};
use crate::perturbation::{
    breakdown, e2_closed, e2_closed_with, e2_even_closed, e2_odd_closed, e2_series, E2Source,
    E2_COEFFS,
};
use rayon::prelude::*;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_BAD_CONFIG: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("solver failed: {0}")]
    Solver(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<EigenError> for CliError {
    fn from(e: EigenError) -> Self {
        match e {
            EigenError::BadTolerance(_) => CliError::Config(e.to_string()),
            other => CliError::Solver(other.to_string()),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Eigen(inner) => inner.into(),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Solver(_) => EXIT_NO_CONVERGENCE,
            _ => EXIT_BAD_CONFIG,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Fully resolved run configuration: defaults, then config file, then CLI
/// flags, validated like the params module.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mass: f64,
    pub hbar: f64,
    pub half_width: f64,
    pub coupling: f64,
    pub n_matrix: usize,
    pub n_levels: usize,
    pub s_max: usize,
    pub tol: f64,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
    pub reduced: bool,
    pub parallel: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mass: 1.0,
            hbar: 1.0,
            half_width: 1.0,
            coupling: 1.0,
            n_matrix: 256,
            n_levels: 10,
            s_max: 2000,
            tol: 1e-12,
            format: OutputFormat::Csv,
            output: None,
            reduced: false,
            parallel: false,
        }
    }
}

impl RunConfig {
    pub fn physical(&self) -> Result<PhysicalParams, CliError> {
        Ok(PhysicalParams::new(
            self.mass,
            self.hbar,
            self.half_width,
            self.coupling,
        )?)
    }

    pub fn reduced_params(&self) -> Result<ReducedParams, CliError> {
        Ok(reduce(&self.physical()?)?)
    }

    /// Factor applied to reduced energies on output: ε in physical mode,
    /// 1 in `--reduced` mode.
    pub fn energy_scale(&self) -> Result<f64, CliError> {
        if self.reduced {
            Ok(1.0)
        } else {
            Ok(self.reduced_params()?.epsilon)
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.physical()?;
        if self.n_matrix == 0 {
            return Err(CliError::Config("matrix size must be at least 1".into()));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(CliError::Config(format!(
                "tol must lie in (0, 1), got {}",
                self.tol
            )));
        }
        Ok(())
    }

    fn validate_levels(&self) -> Result<(), CliError> {
        if self.n_levels == 0 || self.n_levels > self.n_matrix {
            return Err(CliError::Config(
                "levels must be between 1 and the matrix size".into(),
            ));
        }
        Ok(())
    }

    /// Overlay `key = value` pairs from a flat config file. `#` starts a
    /// comment; unknown keys are an error.
    pub fn apply_config_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = fs::read_to_string(path)?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!(
                    "{}:{}: expected `key = value`, got `{raw}`",
                    path.display(),
                    lineno + 1
                ))
            })?;
            let key = key.trim().replace('-', "_");
            let value = value.trim();
            let bad = |what: &str| {
                CliError::Config(format!(
                    "{}:{}: invalid {what} `{value}`",
                    path.display(),
                    lineno + 1
                ))
            };
            let parse_f64 = || value.parse::<f64>().map_err(|_| bad("number"));
            let parse_usize = || value.parse::<usize>().map_err(|_| bad("integer"));
            match key.as_str() {
                "mass" => self.mass = parse_f64()?,
                "hbar" => self.hbar = parse_f64()?,
                "half_width" => self.half_width = parse_f64()?,
                "coupling" => self.coupling = parse_f64()?,
                "matrix_size" => self.n_matrix = parse_usize()?,
                "levels" => self.n_levels = parse_usize()?,
                "s_max" => self.s_max = parse_usize()?,
                "tol" => self.tol = parse_f64()?,
                "format" => {
                    self.format = match value {
                        "csv" => OutputFormat::Csv,
                        "json" => OutputFormat::Json,
                        _ => return Err(bad("format")),
                    }
                }
                "output" => self.output = Some(PathBuf::from(value)),
                "reduced" => self.reduced = value.parse::<bool>().map_err(|_| bad("bool"))?,
                "parallel" => self.parallel = value.parse::<bool>().map_err(|_| bad("bool"))?,
                other => {
                    return Err(CliError::Config(format!(
                        "{}:{}: unknown key `{other}`",
                        path.display(),
                        lineno + 1
                    )))
                }
            }
        }
        Ok(())
    }
}

/// Fixed 17-significant-digit rendering; round-trips any f64 and never
/// depends on shortest-representation heuristics.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_params_json(cfg: &RunConfig) -> String {
    format!(
        "{{\"mass\": {}, \"hbar\": {}, \"half_width\": {}, \"coupling\": {}, \"reduced\": {}}}",
        fmt_float(cfg.mass),
        fmt_float(cfg.hbar),
        fmt_float(cfg.half_width),
        fmt_float(cfg.coupling),
        cfg.reduced
    )
}

fn table_to_csv(table: &EnergyTable, scale: f64) -> String {
    let mut out = String::from(
        "r,e_diag,e_rs2,e2_closed,e2_series,abs_diff_pert_diag,rel_diff_closed_series\n",
    );
    for row in &table.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            row.r,
            fmt_float(row.e_diag * scale),
            fmt_float(row.e_rs2 * scale),
            fmt_float(row.e2_closed * scale),
            fmt_float(row.e2_series * scale),
            fmt_float(row.abs_diff_pert_diag * scale),
            fmt_float(row.rel_diff_closed_series),
        );
    }
    out
}

fn table_to_json(table: &EnergyTable, scale: f64, cfg: &RunConfig) -> String {
    let mut levels = String::new();
    for (i, row) in table.rows.iter().enumerate() {
        if i > 0 {
            levels.push_str(", ");
        }
        let _ = write!(
            levels,
            "{{\"r\": {}, \"e_diag\": {}, \"e_rs2\": {}, \"e2_closed\": {}, \"e2_series\": {}, \"abs_diff\": {}}}",
            row.r,
            fmt_float(row.e_diag * scale),
            fmt_float(row.e_rs2 * scale),
            fmt_float(row.e2_closed * scale),
            fmt_float(row.e2_series * scale),
            fmt_float(row.abs_diff_pert_diag * scale),
        );
    }
    format!(
        "{{\"params\": {}, \"levels\": [{}], \"meta\": {{\"n_matrix\": {}, \"tol\": {}}}}}\n",
        fmt_params_json(cfg),
        levels,
        cfg.n_matrix,
        fmt_float(cfg.tol)
    )
}

/// `spectrum`: the full method-comparison table for the lowest levels.
pub fn cmd_spectrum(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.validate()?;
    cfg.validate_levels()?;
    let rp = cfg.reduced_params()?;
    let table = analysis::compare_table(cfg.n_levels, &rp, cfg.n_matrix, cfg.s_max, cfg.tol)?;
    let scale = cfg.energy_scale()?;
    Ok(match cfg.format {
        OutputFormat::Csv => table_to_csv(&table, scale),
        OutputFormat::Json => table_to_json(&table, scale, cfg),
    })
}

/// `perturb`: the E⁽⁰⁾/E⁽¹⁾/E⁽²⁾ breakdown of one level.
pub fn cmd_perturb(cfg: &RunConfig, r: usize, source: E2Source) -> Result<String, CliError> {
    cfg.validate()?;
    let rp = cfg.reduced_params()?;
    let b = breakdown(r, &rp, source, cfg.s_max)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let scale = cfg.energy_scale()?;
    let source_name = match source {
        E2Source::Closed => "closed",
        E2Source::Series => "series",
    };
    Ok(match cfg.format {
        OutputFormat::Csv => format!(
            "r,e0,e1,e2,total,e2_source\n{},{},{},{},{},{}\n",
            b.r,
            fmt_float(b.e0 * scale),
            fmt_float(b.e1 * scale),
            fmt_float(b.e2 * scale),
            fmt_float(b.total * scale),
            source_name,
        ),
        OutputFormat::Json => format!(
            "{{\"params\": {}, \"r\": {}, \"e0\": {}, \"e1\": {}, \"e2\": {}, \"total\": {}, \"e2_source\": \"{}\"}}\n",
            fmt_params_json(cfg),
            b.r,
            fmt_float(b.e0 * scale),
            fmt_float(b.e1 * scale),
            fmt_float(b.e2 * scale),
            fmt_float(b.total * scale),
            source_name,
        ),
    })
}

/// `dump-matrix`: the Hamiltonian as `row,col,value` CSV in reduced units.
pub fn cmd_dump_matrix(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.validate()?;
    let rp = cfg.reduced_params()?;
    let m = build_matrix(cfg.n_matrix, &rp).map_err(|e| CliError::Config(e.to_string()))?;
    let mut out = String::from("row,col,value\n");
    for r in 0..m.n() {
        for s in 0..m.n() {
            let _ = writeln!(out, "{},{},{}", r, s, fmt_float(m.get(r, s)));
        }
    }
    Ok(out)
}

/// `sweep`: residual-vs-g study plus one comparison table per grid point.
pub fn cmd_sweep(
    cfg: &RunConfig,
    r: usize,
    g_min: f64,
    g_max: f64,
    steps: usize,
) -> Result<String, CliError> {
    cfg.validate()?;
    cfg.validate_levels()?;
    if steps == 0 {
        return Err(CliError::Config("steps must be at least 1".into()));
    }
    if steps > 1 && g_min >= g_max {
        return Err(CliError::Config(format!(
            "g range is empty: g_min = {g_min} >= g_max = {g_max}"
        )));
    }
    if g_min <= 0.0 {
        return Err(CliError::Config("g_min must be positive".into()));
    }
    let g_values: Vec<f64> = if steps == 1 {
        vec![g_min]
    } else {
        (0..steps)
            .map(|i| g_min + (g_max - g_min) * i as f64 / (steps - 1) as f64)
            .collect()
    };
    let report = analysis::residual_scaling(r, &g_values, cfg.n_matrix, cfg.tol)?;
    let tables: Vec<EnergyTable> = if cfg.parallel {
        g_values
            .par_iter()
            .map(|&g| {
                analysis::compare_table(
                    cfg.n_levels,
                    &ReducedParams::from_g(g),
                    cfg.n_matrix,
                    cfg.s_max,
                    cfg.tol,
                )
            })
            .collect::<Result<_, _>>()?
    } else {
        g_values
            .iter()
            .map(|&g| {
                analysis::compare_table(
                    cfg.n_levels,
                    &ReducedParams::from_g(g),
                    cfg.n_matrix,
                    cfg.s_max,
                    cfg.tol,
                )
            })
            .collect::<Result<_, _>>()?
    };
    Ok(match cfg.format {
        OutputFormat::Csv => sweep_to_csv(&report, &g_values, &tables),
        OutputFormat::Json => sweep_to_json(&report, &g_values, &tables, cfg),
    })
}

fn sweep_to_csv(
    report: &ResidualScalingReport,
    g_values: &[f64],
    tables: &[EnergyTable],
) -> String {
    let mut out = String::from("g,residual,excluded\n");
    for ((g, res), ex) in g_values
        .iter()
        .zip(&report.residuals)
        .zip(&report.excluded)
    {
        let _ = writeln!(out, "{},{},{}", fmt_float(*g), fmt_float(*res), ex);
    }
    match report.fitted_slope {
        Some(slope) => {
            let _ = writeln!(out, "slope,{},", fmt_float(slope));
        }
        None => out.push_str("slope,,\n"),
    }
    for (g, table) in g_values.iter().zip(tables) {
        let _ = writeln!(out, "# g = {}", fmt_float(*g));
        out.push_str(&table_to_csv(table, 1.0));
    }
    out
}

fn sweep_to_json(
    report: &ResidualScalingReport,
    g_values: &[f64],
    tables: &[EnergyTable],
    cfg: &RunConfig,
) -> String {
    let mut points = String::new();
    for (i, ((g, res), table)) in g_values
        .iter()
        .zip(&report.residuals)
        .zip(tables)
        .enumerate()
    {
        if i > 0 {
            points.push_str(", ");
        }
        let mut levels = String::new();
        for (j, row) in table.rows.iter().enumerate() {
            if j > 0 {
                levels.push_str(", ");
            }
            let _ = write!(
                levels,
                "{{\"r\": {}, \"e_diag\": {}, \"e_rs2\": {}, \"e2_closed\": {}, \"e2_series\": {}, \"abs_diff\": {}}}",
                row.r,
                fmt_float(row.e_diag),
                fmt_float(row.e_rs2),
                fmt_float(row.e2_closed),
                fmt_float(row.e2_series),
                fmt_float(row.abs_diff_pert_diag),
            );
        }
        let _ = write!(
            points,
            "{{\"g\": {}, \"residual\": {}, \"excluded\": {}, \"levels\": [{}]}}",
            fmt_float(*g),
            fmt_float(*res),
            report.excluded[i],
            levels
        );
    }
    let slope = match report.fitted_slope {
        Some(s) => fmt_float(s),
        None => "null".into(),
    };
    format!(
        "{{\"r\": {}, \"slope\": {}, \"points\": [{}], \"meta\": {{\"n_matrix\": {}, \"tol\": {}}}}}\n",
        report.r, slope, points, cfg.n_matrix, fmt_float(cfg.tol)
    )
}

/// One check of the validation suite.
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// `validate`: run the oracle cross-checks end to end. `quick` skips the
/// slope study, which dominates the runtime.
pub fn run_validation(cfg: &RunConfig, quick: bool) -> Result<Vec<CheckResult>, CliError> {
    cfg.validate()?;
    let mut checks = Vec::new();

    // Closed-form matrix elements vs. the quadrature oracle (a = 1, so the
    // reduced element is g times the physical integral).
    {
        let rule = QuadratureRule::gauss_legendre(96, 1.0);
        let mut max_err: f64 = 0.0;
        for g in [8.0 / (std::f64::consts::PI * std::f64::consts::PI), 5.0] {
            let rp = ReducedParams::from_g(g);
            for r in 0..=30usize {
                for s in 0..=30usize {
                    let oracle = g * quadrature_x4_element(r, s, 1.0, &rule)
                        .map_err(|e| CliError::Config(e.to_string()))?;
                    max_err = max_err.max((v_element(r, s, &rp) - oracle).abs());
                }
            }
        }
        checks.push(CheckResult {
            name: "matrix-elements-vs-quadrature",
            passed: max_err <= 1e-12,
            detail: format!("max |closed - oracle| = {max_err:.3e}"),
        });
    }

    // Closed-form E2 vs. brute-force series.
    checks.push(closed_vs_series_check(&E2_COEFFS, "e2-closed-vs-series"));

    // Mutation sensitivity: a 1e-6 bump of any single coefficient must
    // break the closed-vs-series agreement.
    {
        let mut all_detected = true;
        for k in 0..E2_COEFFS.len() {
            let mut mutated = E2_COEFFS;
            mutated[k] *= 1.0 + 1e-6;
            let res = closed_vs_series_check(&mutated, "mutant");
            if res.passed {
                all_detected = false;
            }
        }
        checks.push(CheckResult {
            name: "mutation-sensitivity",
            passed: all_detected,
            detail: if all_detected {
                "all 5 coefficient mutants detected".into()
            } else {
                "a perturbed coefficient slipped through".into()
            },
        });
    }

    // Parity-family unification.
    {
        let mut max_rel: f64 = 0.0;
        for r in 0..=50usize {
            let even = e2_even_closed(r, 1.0);
            let odd = e2_odd_closed(r, 1.0);
            let even_ref = e2_closed(2 * r, 1.0);
            let odd_ref = e2_closed(2 * r + 1, 1.0);
            max_rel = max_rel.max((even - even_ref).abs() / even_ref.abs());
            max_rel = max_rel.max((odd - odd_ref).abs() / odd_ref.abs());
        }
        checks.push(CheckResult {
            name: "parity-family-unification",
            passed: max_rel <= 1e-14,
            detail: format!("max rel diff = {max_rel:.3e}"),
        });
    }

    if !quick {
        let report = analysis::residual_scaling(0, &analysis::DEFAULT_G_GRID, cfg.n_matrix, cfg.tol)?;
        let slope = report.fitted_slope.unwrap_or(f64::NAN);
        checks.push(CheckResult {
            name: "truncation-order-slope",
            passed: (2.8..=3.2).contains(&slope),
            detail: format!("log-log slope = {slope:.4}"),
        });
    }

    Ok(checks)
}

fn closed_vs_series_check(coeffs: &[f64; 5], name: &'static str) -> CheckResult {
    let mut worst: f64 = 0.0;
    let mut passed = true;
    for g in [0.01, 8.0 / (std::f64::consts::PI * std::f64::consts::PI), 5.0] {
        for r in 0..20usize {
            let closed = e2_closed_with(r, g, coeffs);
            let series = e2_series(r, g, 2000).expect("s_max is large enough").value;
            let err = (closed - series).abs();
            let tol = (1e-9 * closed.abs()).max(1e-12);
            worst = worst.max(err / tol);
            if err > tol {
                passed = false;
            }
        }
    }
    CheckResult {
        name,
        passed,
        detail: format!("worst error / tolerance = {worst:.3e}"),
    }
}

/// Write to the configured path, or stdout when none is set.
pub fn emit(cfg: &RunConfig, content: &str) -> Result<(), CliError> {
    match &cfg.output {
        Some(path) => fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}
