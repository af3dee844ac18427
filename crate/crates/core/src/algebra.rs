//! Catalog of deformed algebras in Cartan-Weyl form and their structure
//! functions.
//!
//! Every algebra is presented as `[H, E±] = ±E±`, `[E+, E-] = f(H)` with a
//! potential `g` satisfying `f(h) = g(h) - g(h - 1)`. The Casimir is
//! `C = E- E+ + g(H) = E+ E- + g(H - 1)`, so on a vacuum annihilated by `E-`
//! its value is `g(h0 - 1)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::verify::{Entry, VerificationReport};

/// Smallest admissible distance of `q` from 1.
pub const Q_EXCLUSION: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraKind {
    Su11,
    Quadratic,
    Higgs,
    QDeformed,
}

impl AlgebraKind {
    pub fn name(self) -> &'static str {
        match self {
            AlgebraKind::Su11 => "su11",
            AlgebraKind::Quadratic => "quadratic",
            AlgebraKind::Higgs => "higgs",
            AlgebraKind::QDeformed => "qdeformed",
        }
    }
}

/// A deformed algebra together with its deformation parameters.
///
/// * `Su11`: `[K+, K-] = -2 K0`
/// * `Quadratic`: `[N+, N-] = 2 N0 + a N0²`
/// * `Higgs`: `[M+, M-] = 2 c M0 + 4 h M0³`
/// * `QDeformed`: `[D+, D-] = (q^D0 - q^-D0) / (q - q⁻¹)`, real `q > 0`, `q ≠ 1`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algebra", rename_all = "lowercase")]
pub enum AlgebraSpec {
    Su11,
    Quadratic {
        a: f64,
    },
    Higgs {
        c: f64,
        h: f64,
    },
    #[serde(rename = "qdeformed")]
    QDeformed {
        q: f64,
    },
}

impl AlgebraSpec {
    pub fn quadratic(a: f64) -> Result<Self> {
        let spec = AlgebraSpec::Quadratic { a };
        spec.validate()?;
        Ok(spec)
    }

    pub fn higgs(c: f64, h: f64) -> Result<Self> {
        let spec = AlgebraSpec::Higgs { c, h };
        spec.validate()?;
        Ok(spec)
    }

    pub fn qdeformed(q: f64) -> Result<Self> {
        let spec = AlgebraSpec::QDeformed { q };
        spec.validate()?;
        Ok(spec)
    }

    pub fn kind(&self) -> AlgebraKind {
        match self {
            AlgebraSpec::Su11 => AlgebraKind::Su11,
            AlgebraSpec::Quadratic { .. } => AlgebraKind::Quadratic,
            AlgebraSpec::Higgs { .. } => AlgebraKind::Higgs,
            AlgebraSpec::QDeformed { .. } => AlgebraKind::QDeformed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |name: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidSpec(format!("{name} must be finite, got {v}")))
            }
        };
        match *self {
            AlgebraSpec::Su11 => Ok(()),
            AlgebraSpec::Quadratic { a } => finite("a", a),
            AlgebraSpec::Higgs { c, h } => {
                finite("c", c)?;
                finite("h", h)
            }
            AlgebraSpec::QDeformed { q } => {
                finite("q", q)?;
                if q <= 0.0 {
                    return Err(Error::InvalidSpec(format!("q must be positive, got {q}")));
                }
                if (q - 1.0).abs() <= Q_EXCLUSION {
                    return Err(Error::InvalidSpec(format!(
                        "q = {q} is the undeformed point; |q - 1| must exceed {Q_EXCLUSION:e}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Structure function `f(h)` of `[E+, E-] = f(H)`.
    pub fn f(&self, h: f64) -> f64 {
        match *self {
            AlgebraSpec::Su11 => -2.0 * h,
            AlgebraSpec::Quadratic { a } => 2.0 * h + a * h * h,
            AlgebraSpec::Higgs { c, h: curv } => 2.0 * c * h + 4.0 * curv * h * h * h,
            AlgebraSpec::QDeformed { q } => {
                let s = q.ln();
                (h * s).sinh() / s.sinh()
            }
        }
    }

    /// Casimir potential `g(h)`, with the additive constant of the printed
    /// closed forms.
    pub fn g(&self, h: f64) -> f64 {
        match *self {
            AlgebraSpec::Su11 => -h * (h + 1.0),
            AlgebraSpec::Quadratic { a } => h * (h + 1.0) + a / 3.0 * h * (h + 1.0) * (h + 0.5),
            AlgebraSpec::Higgs { c, h: curv } => c * h * (h + 1.0) + curv * h * h * (h + 1.0) * (h + 1.0),
            AlgebraSpec::QDeformed { q } => {
                let s = q.ln();
                let num = ((h + 0.5) * s).exp() + (-(h + 0.5) * s).exp();
                let den = ((0.5 * s).exp() - (-0.5 * s).exp()) * (q - q.recip());
                num / den
            }
        }
    }

    /// `g(x) - g(y)`.
    ///
    /// For the q-deformed algebra the difference is evaluated in product
    /// form, which stays accurate as `q → 1` where `g` itself blows up.
    pub fn g_diff(&self, x: f64, y: f64) -> f64 {
        match *self {
            AlgebraSpec::QDeformed { q } => {
                let s = q.ln();
                ((x + y + 1.0) * s / 2.0).sinh() * ((x - y) * s / 2.0).sinh() / ((s / 2.0).sinh() * s.sinh())
            }
            _ => self.g(x) - self.g(y),
        }
    }

    /// Casimir value on a vacuum of lowest weight `h0`: `c = g(h0 - 1)`.
    pub fn casimir_lowest_weight(&self, h0: f64) -> f64 {
        self.g(h0 - 1.0)
    }

    /// The undeformed algebra this one reduces to as its deformation
    /// parameter is switched off. The q→1 limit of `f` is `h` (not `2h`),
    /// which is the Higgs form with `c = 1/2`.
    pub fn undeformed(&self) -> AlgebraSpec {
        match *self {
            AlgebraSpec::Su11 => AlgebraSpec::Su11,
            AlgebraSpec::Quadratic { .. } => AlgebraSpec::Quadratic { a: 0.0 },
            AlgebraSpec::Higgs { c, .. } => AlgebraSpec::Higgs { c, h: 0.0 },
            AlgebraSpec::QDeformed { .. } => AlgebraSpec::Higgs { c: 0.5, h: 0.0 },
        }
    }

    /// Compact parameter description used in report contexts.
    pub fn describe(&self) -> String {
        match *self {
            AlgebraSpec::Su11 => "su11".to_string(),
            AlgebraSpec::Quadratic { a } => format!("quadratic(a={a})"),
            AlgebraSpec::Higgs { c, h } => format!("higgs(c={c},h={h})"),
            AlgebraSpec::QDeformed { q } => format!("qdeformed(q={q})"),
        }
    }
}

pub fn structure_f(spec: &AlgebraSpec, h: f64) -> f64 {
    spec.f(h)
}

pub fn structure_g(spec: &AlgebraSpec, h: f64) -> f64 {
    spec.g(h)
}

pub fn casimir_lowest_weight(spec: &AlgebraSpec, h0: f64) -> f64 {
    spec.casimir_lowest_weight(h0)
}

/// Integers and half-integers in `[-8, 8]`.
pub fn probe_grid() -> Vec<f64> {
    (-16..=16).map(|k| k as f64 / 2.0).collect()
}

/// Checks `f(h) = g(h) - g(h - 1)` pointwise using the closed form of `g`.
pub fn check_fg_consistency(spec: &AlgebraSpec, h_values: &[f64], tol: f64) -> VerificationReport {
    let max_dev = h_values.iter().map(|&h| (spec.f(h) - (spec.g(h) - spec.g(h - 1.0))).abs()).fold(0.0, f64::max);
    let context = format!("{} over {} points", spec.describe(), h_values.len());
    let mut report = VerificationReport::default();
    report.push(Entry::check("fg_consistency", max_dev, tol, context));
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_examples() {
        assert_eq!(AlgebraSpec::Su11.f(1.0), -2.0);
        assert_eq!(AlgebraSpec::Quadratic { a: 0.0 }.f(1.0), 2.0);
        assert!((AlgebraSpec::QDeformed { q: 2.0 }.f(1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn g_examples() {
        assert_eq!(AlgebraSpec::Su11.g(1.0), -2.0);
        assert_eq!(AlgebraSpec::Quadratic { a: 3.0 }.g(1.0), 5.0);
        assert_eq!(AlgebraSpec::Higgs { c: 1.0, h: 0.0 }.g(1.0), 2.0);
    }

    #[test]
    fn su11_g_is_exact_on_half_integers() {
        for h in probe_grid() {
            assert_eq!(AlgebraSpec::Su11.g(h), -h * (h + 1.0));
        }
    }

    #[test]
    fn casimir_examples() {
        assert_eq!(AlgebraSpec::Su11.casimir_lowest_weight(0.25), 3.0 / 16.0);
        assert_eq!(AlgebraSpec::Su11.casimir_lowest_weight(0.75), 3.0 / 16.0);
        assert_eq!(AlgebraSpec::Quadratic { a: 0.0 }.casimir_lowest_weight(1.0), 0.0);
    }

    #[test]
    fn fg_consistency_examples() {
        let su = check_fg_consistency(&AlgebraSpec::Su11, &(-3..=3).map(f64::from).collect::<Vec<_>>(), 1e-12);
        assert!(su.overall_pass);
        assert_eq!(su.entries[0].residual, 0.0);

        let higgs = AlgebraSpec::Higgs { c: 2.0, h: 0.3 };
        let grid: Vec<f64> = (-5..=5).map(f64::from).collect();
        assert!(check_fg_consistency(&higgs, &grid, 1e-10).overall_pass);

        let q = AlgebraSpec::QDeformed { q: 1.5 };
        let grid: Vec<f64> = (-4..=4).map(f64::from).collect();
        assert!(check_fg_consistency(&q, &grid, 1e-10).overall_pass);
    }

    #[test]
    fn validation() {
        assert!(AlgebraSpec::qdeformed(1.0).is_err());
        assert!(AlgebraSpec::qdeformed(1.0 + 1e-13).is_err());
        assert!(AlgebraSpec::qdeformed(-0.5).is_err());
        assert!(AlgebraSpec::qdeformed(0.5).is_ok());
        assert!(AlgebraSpec::quadratic(f64::NAN).is_err());
        assert!(AlgebraSpec::higgs(1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn g_diff_matches_direct_difference() {
        let specs = [
            AlgebraSpec::Su11,
            AlgebraSpec::Quadratic { a: -0.4 },
            AlgebraSpec::Higgs { c: 1.0, h: 0.2 },
            AlgebraSpec::QDeformed { q: 1.7 },
            AlgebraSpec::QDeformed { q: 0.6 },
        ];
        for spec in specs {
            for x in probe_grid() {
                for y in [-2.5, 0.0, 1.5] {
                    let direct = spec.g(x) - spec.g(y);
                    assert!((spec.g_diff(x, y) - direct).abs() <= 1e-10 * (1.0 + direct.abs()));
                }
            }
        }
    }

    #[test]
    fn q_to_one_limit_converges_pointwise_to_h() {
        for h in probe_grid() {
            let devs: Vec<f64> =
                [1.1, 1.01, 1.001].iter().map(|&q| (AlgebraSpec::QDeformed { q }.f(h) - h).abs()).collect();
            if h == 0.0 || h.abs() == 1.0 {
                assert!(devs.iter().all(|d| *d < 1e-12));
            } else {
                assert!(devs[0] > devs[1] && devs[1] > devs[2], "h={h}: {devs:?}");
            }
        }
    }

    #[test]
    fn reduced_deformations_match_compact_form() {
        for h in probe_grid() {
            assert_eq!(AlgebraSpec::Quadratic { a: 0.0 }.f(h), 2.0 * h);
            assert_eq!(AlgebraSpec::Higgs { c: 1.0, h: 0.0 }.f(h), 2.0 * h);
        }
    }
}
