//! Run configuration: command-line flags layered over an optional TOML file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraKind, AlgebraSpec};
use crate::coherent::{Family, DEFAULT_TAIL_CEILING};

pub const DEFAULT_H0: f64 = 0.25;
pub const DEFAULT_DIM: usize = 64;
/// Largest accepted truncation.
pub const MAX_DIM: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn bad(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

/// Complex number written as `re+imi` (also `re`, `imi`, `re-imi`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexLiteral(pub Complex64);

impl FromStr for ComplexLiteral {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let err = || bad(format!("cannot parse complex number '{s}' (expected e.g. 0.5+0.2i)"));
        if t.is_empty() {
            return Err(err());
        }
        let Some(body) = t.strip_suffix('i') else {
            return t.parse::<f64>().map(|re| ComplexLiteral(Complex64::new(re, 0.0))).map_err(|_| err());
        };
        let bytes = body.as_bytes();
        let split =
            (1..bytes.len()).rev().find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        let parse_im = |x: &str| match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => x.parse::<f64>().map_err(|_| err()),
        };
        let (re, im) = match split {
            Some(k) => (body[..k].parse::<f64>().map_err(|_| err())?, parse_im(&body[k..])?),
            None => (0.0, parse_im(body)?),
        };
        Ok(ComplexLiteral(Complex64::new(re, im)))
    }
}

impl fmt::Display for ComplexLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.0;
        let sign = if z.im.is_sign_negative() { '-' } else { '+' };
        write!(f, "{}{}{}i", z.re, sign, z.im.abs())
    }
}

impl Serialize for ComplexLiteral {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ComplexLiteral {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraArg {
    Su11,
    Quadratic,
    Higgs,
    Qdeformed,
}

impl From<AlgebraArg> for AlgebraKind {
    fn from(a: AlgebraArg) -> Self {
        match a {
            AlgebraArg::Su11 => AlgebraKind::Su11,
            AlgebraArg::Quadratic => AlgebraKind::Quadratic,
            AlgebraArg::Higgs => AlgebraKind::Higgs,
            AlgebraArg::Qdeformed => AlgebraKind::QDeformed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FamilyArg {
    Aocs,
    Dual,
    Perelomov,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Aocs => Family::Aocs,
            FamilyArg::Dual => Family::Dual,
            FamilyArg::Perelomov => Family::Perelomov,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ScanAxis {
    A,
    C,
    H,
    Q,
    /// `|β|` (or `|γ|` for the dual family) at fixed phase.
    Beta,
    /// `|ξ|` at fixed phase.
    Xi,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct GlobalFlags {
    #[arg(long, global = true, value_enum)]
    pub algebra: Option<AlgebraArg>,
    /// Quadratic deformation parameter.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Higgs linear coefficient.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub c: Option<f64>,
    /// Higgs cubic coefficient (curvature).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub h: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub q: Option<f64>,
    /// Lowest weight of the representation.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub h0: Option<f64>,
    /// Truncation dimension.
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    #[arg(long = "tail-ceiling", global = true)]
    pub tail_ceiling: Option<f64>,
    /// Lie-map constant (defaults to the vacuum-consistent value).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub epsilon: Option<f64>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
}

/// Flags specific to state construction and scans.
#[derive(Debug, Clone, Default, Args)]
pub struct StateFlags {
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    /// State parameter β, γ or ξ, e.g. `0.5+0.2i`.
    #[arg(long, allow_hyphen_values = true)]
    pub param: Option<ComplexLiteral>,
    /// Use the mapped lowering operator in the Perelomov exponent.
    #[arg(long)]
    pub mapped: bool,
    /// Keep the unnormalized series coefficients.
    #[arg(long)]
    pub unnormalized: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ScanFlags {
    #[arg(long, value_enum)]
    pub axis: Option<ScanAxis>,
    #[arg(long, allow_negative_numbers = true)]
    pub start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub stop: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScanSection {
    pub axis: Option<ScanAxis>,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub step: Option<f64>,
}

/// Contents of a `--config` file. Unknown keys are rejected.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub algebra: Option<AlgebraArg>,
    pub a: Option<f64>,
    pub c: Option<f64>,
    pub h: Option<f64>,
    pub q: Option<f64>,
    pub h0: Option<f64>,
    pub dim: Option<usize>,
    pub tail_ceiling: Option<f64>,
    pub epsilon: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub family: Option<FamilyArg>,
    pub param: Option<ComplexLiteral>,
    pub params: Option<Vec<ComplexLiteral>>,
    pub mapped: Option<bool>,
    pub unnormalized: Option<bool>,
    pub scan: Option<ScanSection>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| bad(format!("reading {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| bad(format!("parsing {}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRange {
    pub axis: ScanAxis,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl ScanRange {
    /// Grid `start, start + step, …` up to `stop` inclusive; empty when
    /// `stop < start`.
    pub fn values(&self) -> Vec<f64> {
        if self.stop < self.start {
            return Vec::new();
        }
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|k| self.start + k as f64 * self.step).collect()
    }
}

/// Fully resolved and validated configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub spec: AlgebraSpec,
    pub h0: f64,
    pub dim: usize,
    pub tail_ceiling: f64,
    pub epsilon: Option<f64>,
    pub family: Family,
    pub params: Vec<ComplexLiteral>,
    pub mapped: bool,
    pub unnormalized: bool,
    pub scan: Option<ScanRange>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl RunConfig {
    /// Merges flags over the file (flags win) and validates the result.
    pub fn resolve(
        global: &GlobalFlags,
        state: Option<&StateFlags>,
        scan: Option<&ScanFlags>,
        file: FileConfig,
    ) -> Result<Self, ConfigError> {
        let kind: AlgebraKind = global
            .algebra
            .or(file.algebra)
            .ok_or_else(|| bad("--algebra is required (su11|quadratic|higgs|qdeformed)"))?
            .into();
        let file_scan = file.scan.unwrap_or_default();
        let axis = scan.and_then(|s| s.axis).or(file_scan.axis);
        let scan = match axis {
            None => None,
            Some(axis) => {
                let pick = |flag: Option<f64>, f: Option<f64>, name: &str| {
                    flag.or(f).ok_or_else(|| bad(format!("scan needs --{name}")))
                };
                let start = pick(scan.and_then(|s| s.start), file_scan.start, "start")?;
                let stop = pick(scan.and_then(|s| s.stop), file_scan.stop, "stop")?;
                let step = pick(scan.and_then(|s| s.step), file_scan.step, "step")?;
                if !(start.is_finite() && stop.is_finite() && step.is_finite() && step > 0.0) {
                    return Err(bad("scan range needs finite start/stop and a positive step"));
                }
                let compatible = matches!(
                    (axis, kind),
                    (ScanAxis::A, AlgebraKind::Quadratic)
                        | (ScanAxis::C | ScanAxis::H, AlgebraKind::Higgs)
                        | (ScanAxis::Q, AlgebraKind::QDeformed)
                        | (ScanAxis::Beta | ScanAxis::Xi, _)
                );
                if !compatible {
                    return Err(bad(format!("scan axis {axis:?} does not apply to {}", kind.name())));
                }
                Some(ScanRange { axis, start, stop, step })
            }
        };

        // the scanned structure parameter may be given by the range alone
        let from_scan = |axis: ScanAxis| scan.filter(|r| r.axis == axis).map(|r| r.start);
        let a = global.a.or(file.a).or_else(|| from_scan(ScanAxis::A));
        let c = global.c.or(file.c).or_else(|| from_scan(ScanAxis::C));
        let h = global.h.or(file.h).or_else(|| from_scan(ScanAxis::H));
        let q = global.q.or(file.q).or_else(|| from_scan(ScanAxis::Q));
        let need =
            |v: Option<f64>, name: &str| v.ok_or_else(|| bad(format!("--{name} is required for {}", kind.name())));
        let spec = match kind {
            AlgebraKind::Su11 => AlgebraSpec::Su11,
            AlgebraKind::Quadratic => AlgebraSpec::Quadratic { a: need(a, "a")? },
            AlgebraKind::Higgs => AlgebraSpec::Higgs { c: need(c, "c")?, h: need(h, "h")? },
            AlgebraKind::QDeformed => AlgebraSpec::QDeformed { q: need(q, "q")? },
        };
        spec.validate().map_err(|e| bad(e.to_string()))?;

        let h0 = global.h0.or(file.h0).unwrap_or(DEFAULT_H0);
        if !h0.is_finite() {
            return Err(bad("h0 must be finite"));
        }
        let dim = global.dim.or(file.dim).unwrap_or(DEFAULT_DIM);
        if !(2..=MAX_DIM).contains(&dim) {
            return Err(bad(format!("dim must lie in 2..={MAX_DIM}, got {dim}")));
        }
        let tail_ceiling = global.tail_ceiling.or(file.tail_ceiling).unwrap_or(DEFAULT_TAIL_CEILING);
        if !(tail_ceiling > 0.0 && tail_ceiling <= 1.0) {
            return Err(bad(format!("tail ceiling must lie in (0, 1], got {tail_ceiling}")));
        }
        let epsilon = global.epsilon.or(file.epsilon);
        if epsilon.is_some_and(|e| !e.is_finite()) {
            return Err(bad("epsilon must be finite"));
        }

        let family = state.and_then(|s| s.family).or(file.family).unwrap_or(FamilyArg::Aocs).into();
        let mut params: Vec<ComplexLiteral> = match state.and_then(|s| s.param) {
            Some(p) => vec![p],
            None => file.params.clone().unwrap_or_default(),
        };
        if params.is_empty() {
            if let Some(p) = file.param {
                params.push(p);
            }
        }
        if params.iter().any(|p| !p.0.re.is_finite() || !p.0.im.is_finite()) {
            return Err(bad("state parameters must be finite"));
        }
        let mapped = state.map(|s| s.mapped).unwrap_or(false) || file.mapped.unwrap_or(false);
        let unnormalized = state.map(|s| s.unnormalized).unwrap_or(false) || file.unnormalized.unwrap_or(false);

        Ok(RunConfig {
            spec,
            h0,
            dim,
            tail_ceiling,
            epsilon,
            family,
            params,
            mapped,
            unnormalized,
            scan,
            out: global.out.clone().or(file.out),
            format: global.format.or(file.format).unwrap_or(OutputFormat::Csv),
        })
    }

    pub fn first_param(&self) -> Complex64 {
        self.params.first().map(|p| p.0).unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(s: &str) -> Complex64 {
        s.parse::<ComplexLiteral>().unwrap().0
    }

    #[test]
    fn complex_literals() {
        assert_eq!(z("0.5+0.2i"), Complex64::new(0.5, 0.2));
        assert_eq!(z("0.5-0.2i"), Complex64::new(0.5, -0.2));
        assert_eq!(z("-0.5"), Complex64::new(-0.5, 0.0));
        assert_eq!(z("-0.3i"), Complex64::new(0.0, -0.3));
        assert_eq!(z("i"), Complex64::new(0.0, 1.0));
        assert_eq!(z("1e-3+2.5e-1i"), Complex64::new(1e-3, 0.25));
        assert!("0.5+".parse::<ComplexLiteral>().is_err());
        assert!("abc".parse::<ComplexLiteral>().is_err());
        let lit = ComplexLiteral(Complex64::new(0.1, -0.7));
        assert_eq!(lit.to_string().parse::<ComplexLiteral>().unwrap(), lit);
    }

    #[test]
    fn q_one_is_rejected() {
        let g = GlobalFlags { algebra: Some(AlgebraArg::Qdeformed), q: Some(1.0), ..Default::default() };
        assert!(RunConfig::resolve(&g, None, None, FileConfig::default()).is_err());
    }

    #[test]
    fn flags_override_file() {
        let file: FileConfig = toml::from_str("algebra = \"higgs\"\nc = 1.0\nh = -0.05\nh0 = 4.0\ndim = 32\n").unwrap();
        let g = GlobalFlags { dim: Some(48), ..Default::default() };
        let cfg = RunConfig::resolve(&g, None, None, file).unwrap();
        assert_eq!(cfg.dim, 48);
        assert_eq!(cfg.h0, 4.0);
        assert_eq!(cfg.spec, AlgebraSpec::Higgs { c: 1.0, h: -0.05 });
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<FileConfig>("algebra = \"su11\"\nbogus = 1\n").is_err());
        assert!(toml::from_str::<FileConfig>("[scan]\naxis = \"q\"\nwidth = 2\n").is_err());
    }

    #[test]
    fn scan_grid() {
        let r = ScanRange { axis: ScanAxis::A, start: 0.0, stop: 0.2, step: 0.1 };
        assert_eq!(r.values().len(), 3);
        let empty = ScanRange { stop: -1.0, ..r };
        assert!(empty.values().is_empty());
    }
}
