//! Command-line front end: `check`, `state`, `scan` and `probe`.
//!
//! Exit status: 0 when every check passes, 1 on a numerical failure, 2 on a
//! configuration error.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::algebra::AlgebraSpec;
use crate::coherent::{
    aocs, dual_cs, eigen_residual, expectation, perelomov_cs, CoherentOptions, CoherentStateVector, Family,
    PerelomovGenerator,
};
use crate::config::{ComplexLiteral, ConfigError, FileConfig, GlobalFlags, RunConfig, ScanAxis, ScanFlags, StateFlags};
use crate::conjugate::{conjugate_raising, dual_conjugate, vacuum_epsilon, LieTarget};
use crate::error::Error;
use crate::repr::{build_lowest_weight_rep, probe_dimension, ProbeVerdict, UNITARITY_TOL};
use crate::table::{fmt_f64, Table};
use crate::verify::{run_suite_with, SuiteConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERICAL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "deformed-cs", version, about = "Coherent states of deformed su(1,1)/su(2) algebras")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalFlags,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the verification suite and write the report.
    Check {
        /// Coherent-state parameter to exercise (repeatable).
        #[arg(long = "param", allow_hyphen_values = true)]
        params: Vec<ComplexLiteral>,
    },
    /// Write the coefficient table of one coherent state.
    State(StateFlags),
    /// Sweep one parameter and tabulate observables.
    Scan {
        #[command(flatten)]
        state: StateFlags,
        #[command(flatten)]
        scan: ScanFlags,
    },
    /// Classify the lowest-weight ladder (infinite, finite, invalid).
    Probe {
        /// Number of ladder steps to scan (defaults to --dim).
        #[arg(long)]
        max_n: Option<usize>,
    },
}

enum Failure {
    Config(String),
    Numerical(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Numerical(e.to_string())
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(Failure::Config(msg)) => {
            eprintln!("configuration error: {msg}");
            EXIT_CONFIG
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            EXIT_NUMERICAL
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32, Failure> {
    let file = match &cli.global.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    match &cli.command {
        Command::Check { params } => {
            let mut cfg = RunConfig::resolve(&cli.global, None, None, file)?;
            if !params.is_empty() {
                cfg.params = params.clone();
            }
            cmd_check(&cfg)
        }
        Command::State(state) => cmd_state(&RunConfig::resolve(&cli.global, Some(state), None, file)?),
        Command::Scan { state, scan } => {
            let cfg = RunConfig::resolve(&cli.global, Some(state), Some(scan), file)?;
            if cfg.scan.is_none() {
                return Err(Failure::Config("scan needs --axis".into()));
            }
            cmd_scan(&cfg)
        }
        Command::Probe { max_n } => {
            let cfg = RunConfig::resolve(&cli.global, None, None, file)?;
            cmd_probe(&cfg, max_n.unwrap_or(cfg.dim))
        }
    }
}

fn emit(cfg: &RunConfig, table: &Table) -> Result<(), Failure> {
    let text = table.render(cfg.format);
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure::Config(format!("writing {}: {e}", path.display())))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| Failure::Config(format!("writing stdout: {e}")))
        }
    }
}

fn meta(cfg: &RunConfig, command: &str, extra: Value) -> Value {
    let mut m = json!({ "command": command, "config": cfg });
    if let (Some(obj), Value::Object(more)) = (m.as_object_mut(), extra) {
        obj.extend(more);
    }
    m
}

/// Runs the verification suite; exit 0 iff every entry passes.
pub fn cmd_check_table(cfg: &RunConfig) -> (Table, bool) {
    let suite = SuiteConfig {
        spec: cfg.spec,
        h0: cfg.h0,
        dim: cfg.dim,
        state_params: cfg.params.iter().map(|p| p.0).collect(),
        tail_ceiling: cfg.tail_ceiling,
        epsilon: cfg.epsilon,
    };
    let report = run_suite_with(&suite);
    let mut table = Table::new(
        meta(cfg, "check", json!({ "overall_pass": report.overall_pass })),
        &["name", "status", "residual", "tolerance", "context"],
    );
    for e in &report.entries {
        table.push(vec![
            e.name.clone(),
            e.status.name().into(),
            fmt_f64(e.residual),
            fmt_f64(e.tolerance),
            e.context.clone(),
        ]);
    }
    (table, report.overall_pass)
}

fn cmd_check(cfg: &RunConfig) -> Result<i32, Failure> {
    let (table, pass) = cmd_check_table(cfg);
    emit(cfg, &table)?;
    if !pass {
        eprintln!("verification failed; see report entries with status 'fail'");
    }
    Ok(if pass { EXIT_OK } else { EXIT_NUMERICAL })
}

fn options(cfg: &RunConfig, h0: f64, finite: bool, normalize: bool) -> CoherentOptions {
    let generator = if cfg.mapped {
        let target = if finite { LieTarget::Su2 } else { LieTarget::Su11 };
        PerelomovGenerator::Mapped { target, epsilon: cfg.epsilon.unwrap_or_else(|| vacuum_epsilon(target, h0)) }
    } else {
        PerelomovGenerator::Deformed
    };
    CoherentOptions { normalize, tail_ceiling: cfg.tail_ceiling, generator }
}

fn build_state(
    cfg: &RunConfig,
    spec: &AlgebraSpec,
    param: Complex64,
    normalize: bool,
) -> Result<(crate::repr::Representation, CoherentStateVector), Error> {
    let rep = build_lowest_weight_rep(spec, cfg.h0, cfg.dim)?;
    let opts = options(cfg, cfg.h0, rep.is_finite(), normalize);
    let state = match cfg.family {
        Family::Aocs => aocs(&conjugate_raising(&rep)?, param, &opts)?,
        Family::Dual => dual_cs(&rep, param, &opts)?,
        Family::Perelomov => perelomov_cs(&rep, param, &opts)?,
    };
    Ok((rep, state))
}

/// Coefficient table of the configured state.
pub fn cmd_state_table(cfg: &RunConfig) -> Result<Table, Error> {
    let param = cfg.first_param();
    let (rep, state) = build_state(cfg, &cfg.spec, param, !cfg.unnormalized)?;
    let extra = json!({
        "family": state.family().name(),
        "parameter": ComplexLiteral(param),
        "tail_mass": fmt_f64(state.tail_mass()),
        "norm": fmt_f64(state.norm()),
        "unitarity_defect": state.unitarity_defect().map(fmt_f64),
        "representation": rep.describe(),
    });
    let mut table = Table::new(meta(cfg, "state", extra), &["n", "weight", "coeff_re", "coeff_im", "prob"]);
    for (n, (z, p)) in state.coeffs().iter().zip(state.probabilities()).enumerate() {
        table.push(vec![n.to_string(), fmt_f64(rep.weight(n)), fmt_f64(z.re), fmt_f64(z.im), fmt_f64(p)]);
    }
    Ok(table)
}

fn cmd_state(cfg: &RunConfig) -> Result<i32, Failure> {
    let table = cmd_state_table(cfg)?;
    emit(cfg, &table)?;
    Ok(EXIT_OK)
}

const SCAN_COLUMNS: [&str; 8] =
    ["value", "expect_h", "expect_epem", "norm", "tail_mass", "eigen_residual", "ref_deviation", "error"];

fn scan_point(cfg: &RunConfig, value: f64) -> Vec<String> {
    let base = cfg.first_param();
    let phase = if base.norm() > 0.0 { base / base.norm() } else { Complex64::new(1.0, 0.0) };
    let axis = cfg.scan.expect("scan range").axis;
    let (spec, param) = match (axis, cfg.spec) {
        (ScanAxis::A, AlgebraSpec::Quadratic { .. }) => (AlgebraSpec::Quadratic { a: value }, base),
        (ScanAxis::C, AlgebraSpec::Higgs { h, .. }) => (AlgebraSpec::Higgs { c: value, h }, base),
        (ScanAxis::H, AlgebraSpec::Higgs { c, .. }) => (AlgebraSpec::Higgs { c, h: value }, base),
        (ScanAxis::Q, AlgebraSpec::QDeformed { .. }) => (AlgebraSpec::QDeformed { q: value }, base),
        (ScanAxis::Beta | ScanAxis::Xi, spec) => (spec, phase * value),
        (_, spec) => (spec, base),
    };
    let nan = fmt_f64(f64::NAN);
    let fail = |msg: String| {
        let mut row = vec![fmt_f64(value)];
        row.extend(std::iter::repeat_n(nan.clone(), 6));
        row.push(msg);
        row
    };
    if let Err(e) = spec.validate() {
        return fail(e.to_string());
    }
    let (rep, state) = match build_state(cfg, &spec, param, false) {
        Ok(x) => x,
        Err(e) => return fail(e.to_string()),
    };
    let epem = rep.e_plus() * rep.e_minus();
    let ex_h = expectation(&state, rep.h()).map(|z| z.re).unwrap_or(f64::NAN);
    let ex_epem = expectation(&state, &epem).map(|z| z.re).unwrap_or(f64::NAN);
    let top = rep.dim() - 1;
    let eigen = match cfg.family {
        Family::Aocs => eigen_residual(&state, rep.e_minus(), param, top).unwrap_or(f64::NAN),
        Family::Dual => conjugate_raising(&rep)
            .and_then(|pair| eigen_residual(&state, &dual_conjugate(&pair), param, top))
            .unwrap_or(f64::NAN),
        Family::Perelomov => f64::NAN,
    };
    let reference = build_state(cfg, &spec.undeformed(), param, false)
        .ok()
        .filter(|(_, s)| s.dim() == state.dim())
        .map(|(_, s)| {
            state.probabilities().iter().zip(s.probabilities()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        })
        .unwrap_or(f64::NAN);
    vec![
        fmt_f64(value),
        fmt_f64(ex_h),
        fmt_f64(ex_epem),
        fmt_f64(state.norm()),
        fmt_f64(state.tail_mass()),
        fmt_f64(eigen),
        fmt_f64(reference),
        String::new(),
    ]
}

/// One row per grid point, in grid order. Per-point failures are recorded in
/// the `error` column.
pub fn cmd_scan_table(cfg: &RunConfig) -> Table {
    let range = cfg.scan.expect("scan range");
    let mut table = Table::new(meta(cfg, "scan", json!({ "family": cfg.family.name() })), &SCAN_COLUMNS);
    for value in range.values() {
        table.push(scan_point(cfg, value));
    }
    table
}

fn cmd_scan(cfg: &RunConfig) -> Result<i32, Failure> {
    emit(cfg, &cmd_scan_table(cfg))?;
    Ok(EXIT_OK)
}

fn cmd_probe(cfg: &RunConfig, max_n: usize) -> Result<i32, Failure> {
    let probe = probe_dimension(&cfg.spec, cfg.h0, max_n, UNITARITY_TOL);
    let (verdict, n) = match probe.verdict {
        ProbeVerdict::InfiniteUpTo(n) => ("infinite", n),
        ProbeVerdict::Finite(d) => ("finite", d),
        ProbeVerdict::InvalidAt(n) => ("invalid", n),
    };
    let mut table = Table::new(meta(cfg, "probe", json!({ "max_n": max_n })), &["verdict", "n", "first_nonpositive"]);
    table.push(vec![verdict.into(), n.to_string(), probe.first_nonpositive.map(|k| k.to_string()).unwrap_or_default()]);
    emit(cfg, &table)?;
    Ok(EXIT_OK)
}
