//! Residual checks collected into a machine-readable report.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{check_fg_consistency, probe_grid, AlgebraSpec};
use crate::coherent::{
    aocs, dual_cs, eigen_residual, matrix_exponential, perelomov_cs, CoherentOptions, DEFAULT_TAIL_CEILING,
};
use crate::conjugate::{conjugate_raising, dual_conjugate, map_to_lie, solve_alpha, vacuum_epsilon, LieTarget};
use crate::error::{Error, Result};
use crate::matrix::OperatorMatrix;
use crate::repr::{build_lowest_weight_rep, casimir_matrix, Representation};

/// Tolerance for bracket and Casimir identities.
pub const BRACKET_TOL: f64 = 1e-10;
/// Tolerance for coherent-state eigenvalue residuals.
pub const EIGEN_TOL: f64 = 1e-7;
/// Tolerance for series-versus-exponential agreement.
pub const ORACLE_TOL: f64 = 1e-10;
/// Norm tolerance for Perelomov states on closed representations.
pub const CLOSED_NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub name: String,
    #[serde(with = "lenient_f64")]
    pub residual: f64,
    #[serde(with = "lenient_f64")]
    pub tolerance: f64,
    pub pass: bool,
    pub status: Status,
    pub context: String,
}

impl Entry {
    pub fn check(name: impl Into<String>, residual: f64, tolerance: f64, context: impl Into<String>) -> Self {
        let ok = residual <= tolerance;
        Self {
            name: name.into(),
            residual,
            tolerance,
            pass: ok,
            status: if ok { Status::Pass } else { Status::Fail },
            context: context.into(),
        }
    }

    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            residual: 0.0,
            tolerance: 0.0,
            pass: true,
            status: Status::Skipped,
            context: reason.into(),
        }
    }

    pub fn failed(name: impl Into<String>, tolerance: f64, context: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            residual: f64::INFINITY,
            tolerance,
            pass: false,
            status: Status::Fail,
            context: context.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub entries: Vec<Entry>,
    pub overall_pass: bool,
}

impl Default for VerificationReport {
    fn default() -> Self {
        Self { entries: Vec::new(), overall_pass: true }
    }
}

impl VerificationReport {
    pub fn push(&mut self, entry: Entry) {
        self.overall_pass &= entry.pass;
        self.entries.push(entry);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        for e in other.entries {
            self.push(e);
        }
    }

    pub fn get(&self, name: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| !e.pass)
    }

    fn sort(&mut self) {
        self.entries.sort_by(|a, b| a.name.cmp(&b.name));
        self.overall_pass = self.entries.iter().all(|e| e.pass);
    }
}

/// Max-entry norm of `AB - BA - target` on the leading `trust × trust` block.
pub fn commutator_residual(
    a: &OperatorMatrix,
    b: &OperatorMatrix,
    target: &OperatorMatrix,
    trust: usize,
) -> Result<f64> {
    for other in [b, target] {
        if other.dim() != a.dim() {
            return Err(Error::DimensionMismatch { left: a.dim(), right: other.dim() });
        }
    }
    if trust > a.dim() {
        return Err(Error::InvalidDimension { dim: trust, reason: "trust block exceeds operator dimension" });
    }
    Ok((&a.commutator(b) - target).max_abs_block(trust))
}

/// Inputs of a full verification run.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub spec: AlgebraSpec,
    pub h0: f64,
    pub dim: usize,
    pub state_params: Vec<Complex64>,
    pub tail_ceiling: f64,
    /// Lie-map constant; `None` selects the vacuum-consistent value.
    pub epsilon: Option<f64>,
}

impl SuiteConfig {
    pub fn new(spec: AlgebraSpec, h0: f64, dim: usize, state_params: Vec<Complex64>) -> Self {
        Self { spec, h0, dim, state_params, tail_ceiling: DEFAULT_TAIL_CEILING, epsilon: None }
    }
}

pub fn run_suite(spec: &AlgebraSpec, h0: f64, dim: usize, state_params: &[Complex64]) -> VerificationReport {
    run_suite_with(&SuiteConfig::new(*spec, h0, dim, state_params.to_vec()))
}

/// Runs every applicable check. Construction errors become failed entries;
/// checks that do not apply to a representation become skipped entries.
/// Operator identities are reported relative to [`bracket_scale`].
pub fn run_suite_with(cfg: &SuiteConfig) -> VerificationReport {
    let mut report = VerificationReport::default();
    let spec = cfg.spec;

    if let Err(e) = spec.validate() {
        report.push(Entry::failed("00.spec", 0.0, e.to_string()));
        report.sort();
        return report;
    }

    for mut e in check_fg_consistency(&spec, &probe_grid(), BRACKET_TOL).entries {
        e.name = format!("01.algebra.{}", e.name);
        report.push(e);
    }
    report.push(telescoping_entry(&spec, cfg.h0));

    let rep = match build_lowest_weight_rep(&spec, cfg.h0, cfg.dim) {
        Ok(rep) => {
            report.push(Entry::check("03.rep.construct", 0.0, 0.0, rep.describe()));
            rep
        }
        Err(e) => {
            report.push(Entry::failed("03.rep.construct", 0.0, format!("{} h0={}: {e}", spec.describe(), cfg.h0)));
            report.sort();
            return report;
        }
    };
    let ctx = rep.describe();

    for e in rep_brackets(&rep) {
        report.push(e);
    }
    for e in casimir_checks(&rep) {
        report.push(e);
    }
    for e in conjugate_checks(&rep) {
        report.push(e);
    }
    for target in [LieTarget::Su11, LieTarget::Su2] {
        for e in lie_map_checks(&rep, target, cfg.epsilon) {
            report.push(e);
        }
    }

    let opts = CoherentOptions { tail_ceiling: cfg.tail_ceiling, ..CoherentOptions::unnormalized() };
    for (i, &p) in cfg.state_params.iter().enumerate() {
        let pctx = format!("{ctx} param={p}");
        for e in state_checks(&rep, i, p, &opts, &pctx) {
            report.push(e);
        }
    }

    report.sort();
    report
}

fn telescoping_entry(spec: &AlgebraSpec, h0: f64) -> Entry {
    let c = spec.casimir_lowest_weight(h0);
    let alpha = solve_alpha(spec, h0);
    let f_conj = |h: f64| (h + alpha) / spec.g_diff(h0 - 1.0, h);
    let mut max_dev = 0.0f64;
    let mut used = 0;
    for h in probe_grid() {
        let (up, down) = (c - spec.g(h), c - spec.g(h - 1.0));
        if spec.g_diff(h0 - 1.0, h).abs() < 1e-12 || spec.g_diff(h0 - 1.0, h - 1.0).abs() < 1e-12 {
            continue;
        }
        let lhs = f_conj(h) * up - f_conj(h - 1.0) * down;
        max_dev = max_dev.max((lhs - 1.0).abs());
        used += 1;
    }
    Entry::check(
        "02.algebra.F_telescoping",
        max_dev,
        BRACKET_TOL,
        format!("{} h0={h0} over {used} grid points", spec.describe()),
    )
}

/// Magnitude against which a bracket defect is judged: the larger of 1 and
/// the biggest entry of `AB` or `BA` on the trusted block. Identities
/// between entries of size S can only hold to about S·1e-16.
pub fn bracket_scale(a: &OperatorMatrix, b: &OperatorMatrix, trust: usize) -> f64 {
    (a * b).max_abs_block(trust).max((b * a).max_abs_block(trust)).max(1.0)
}

fn bracket(name: &str, a: &OperatorMatrix, b: &OperatorMatrix, target: &OperatorMatrix, ctx: &str) -> Entry {
    bracket_scaled(name, a, b, target, ctx, None)
}

fn bracket_scaled(
    name: &str,
    a: &OperatorMatrix,
    b: &OperatorMatrix,
    target: &OperatorMatrix,
    ctx: &str,
    scale: Option<f64>,
) -> Entry {
    let trust = a.commutator(b).trust_rows().min(target.trust_rows());
    let scale = scale.unwrap_or_else(|| bracket_scale(a, b, trust));
    match commutator_residual(a, b, target, trust) {
        Ok(r) => Entry::check(name, r / scale, BRACKET_TOL, format!("{ctx} trust={trust} scale={scale:.3e}")),
        Err(e) => Entry::failed(name, BRACKET_TOL, format!("{ctx}: {e}")),
    }
}

fn rep_brackets(rep: &Representation) -> Vec<Entry> {
    let ctx = rep.describe();
    let f_h = OperatorMatrix::diagonal((0..rep.dim()).map(|n| rep.spec().f(rep.weight(n))));
    let hermiticity = (rep.e_minus() - &rep.e_plus().adjoint()).max_abs_block(rep.dim());
    vec![
        bracket("04.rep.[H,E+]=E+", rep.h(), rep.e_plus(), rep.e_plus(), &ctx),
        bracket("04.rep.[H,E-]=-E-", rep.h(), rep.e_minus(), &rep.e_minus().scale(Complex64::new(-1.0, 0.0)), &ctx),
        bracket("04.rep.[E+,E-]=f(H)", rep.e_plus(), rep.e_minus(), &f_h, &ctx),
        Entry::check("04.rep.hermiticity", hermiticity, 0.0, ctx),
    ]
}

fn casimir_checks(rep: &Representation) -> Vec<Entry> {
    let ctx = rep.describe();
    let cas = casimir_matrix(rep);
    let trust = cas.trust_rows();
    let c_id = OperatorMatrix::identity(rep.dim()).scale(Complex64::new(rep.casimir(), 0.0));
    // C is a difference of E-E+ and -g(H); its rounding error follows their size
    let inner = (rep.e_minus() * rep.e_plus())
        .max_abs_block(trust)
        .max((0..trust).map(|n| rep.spec().g(rep.weight(n)).abs()).fold(1.0, f64::max));
    let constancy = (&cas - &c_id).max_abs_block(trust) / inner;
    let zero = OperatorMatrix::zeros(rep.dim());
    let with = |x: &OperatorMatrix| Some(inner * x.max_abs_block(trust).max(1.0));
    vec![
        Entry::check(
            "05.casimir.constant",
            constancy,
            BRACKET_TOL,
            format!("{ctx} c={} scale={inner:.3e}", rep.casimir()),
        ),
        bracket_scaled("05.casimir.[C,H]=0", &cas, rep.h(), &zero, &ctx, with(rep.h())),
        bracket_scaled("05.casimir.[C,E+]=0", &cas, rep.e_plus(), &zero, &ctx, with(rep.e_plus())),
        bracket_scaled("05.casimir.[C,E-]=0", &cas, rep.e_minus(), &zero, &ctx, with(rep.e_minus())),
    ]
}

fn conjugate_checks(rep: &Representation) -> Vec<Entry> {
    let ctx = rep.describe();
    let pair = match conjugate_raising(rep) {
        Ok(pair) => pair,
        Err(Error::CompactRep) => {
            let why = format!("{ctx}: canonical conjugate undefined on a closed ladder");
            return vec![
                Entry::skipped("06.conjugate.[E-,Et+]=1", why.clone()),
                Entry::skipped("06.conjugate.[Et+^dag,E+]=1", why),
            ];
        }
        Err(e) => {
            return vec![
                Entry::failed("06.conjugate.[E-,Et+]=1", BRACKET_TOL, format!("{ctx}: {e}")),
                Entry::failed("06.conjugate.[Et+^dag,E+]=1", BRACKET_TOL, format!("{ctx}: {e}")),
            ]
        }
    };
    let id = OperatorMatrix::identity(rep.dim());
    let ctx = format!("{ctx} alpha={}", pair.alpha());
    vec![
        bracket("06.conjugate.[E-,Et+]=1", rep.e_minus(), pair.e_tilde_plus(), &id, &ctx),
        bracket("06.conjugate.[Et+^dag,E+]=1", &dual_conjugate(&pair), rep.e_plus(), &id, &ctx),
    ]
}

/// Constants used to exercise the ε-independence of the bracket on excited rows.
pub const EPSILON_PROBES: [f64; 3] = [0.0, 1.0, -2.5];

fn lie_map_checks(rep: &Representation, target: LieTarget, epsilon: Option<f64>) -> Vec<Entry> {
    let label = match target {
        LieTarget::Su11 => "su11",
        LieTarget::Su2 => "su2",
    };
    let eps = epsilon.unwrap_or_else(|| vacuum_epsilon(target, rep.h0()));
    let ctx = format!("{} b={} eps={eps}", rep.describe(), target.sign());
    let mut out = Vec::new();
    let name = format!("07.liemap.{label}.[E+,Ebar-]=-2bH");
    match map_to_lie(rep, target, eps) {
        Ok(map) => {
            let d = map.bracket_defect();
            let trust = d.trust_rows();
            let scale = bracket_scale(rep.e_plus(), map.e_bar_minus(), trust);
            out.push(Entry::check(
                name,
                d.max_abs_block(trust) / scale,
                BRACKET_TOL,
                format!("{ctx} trust={trust} scale={scale:.3e}"),
            ));
        }
        Err(e) => out.push(Entry::failed(name, BRACKET_TOL, format!("{ctx}: {e}"))),
    }
    for (k, &probe) in EPSILON_PROBES.iter().enumerate() {
        let name = format!("07.liemap.{label}.excited.eps{k}");
        let pctx = format!("{} b={} eps={probe} interior rows", rep.describe(), target.sign());
        match map_to_lie(rep, target, probe) {
            Ok(map) => {
                let d = map.bracket_defect();
                // a closed ladder's top row pins ε just like the vacuum does
                let end = if rep.is_finite() { rep.dim() - 1 } else { d.trust_rows() };
                let scale = bracket_scale(rep.e_plus(), map.e_bar_minus(), end);
                out.push(Entry::check(
                    name,
                    d.max_abs_range(1, end) / scale,
                    BRACKET_TOL,
                    format!("{pctx} scale={scale:.3e}"),
                ));
            }
            Err(e) => out.push(Entry::failed(name, BRACKET_TOL, format!("{pctx}: {e}"))),
        }
    }
    out
}

/// Max-entry distance between two coefficient vectors, relative to the
/// larger of 1 and the biggest coefficient.
pub fn vector_distance(a: &DVector<Complex64>, b: &DVector<Complex64>) -> f64 {
    let scale = a.iter().chain(b.iter()).map(|z| z.norm()).fold(1.0, f64::max);
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale
}

/// `exp(t X)|vac⟩` through the dense exponential.
pub fn exponential_route(x: &OperatorMatrix, t: Complex64) -> Result<DVector<Complex64>> {
    Ok(matrix_exponential(&x.scale(t))?.entries().column(0).into_owned())
}

fn state_checks(rep: &Representation, i: usize, p: Complex64, opts: &CoherentOptions, ctx: &str) -> Vec<Entry> {
    let mut out = Vec::new();
    let top = rep.dim() - 1;

    let n_aocs = |s: &str| format!("08.state.p{i:02}.aocs.{s}");
    match conjugate_raising(rep) {
        Err(_) => {
            out.push(Entry::skipped(n_aocs("eigen"), format!("{ctx}: no conjugate on a closed ladder")));
            out.push(Entry::skipped(n_aocs("oracle"), format!("{ctx}: no conjugate on a closed ladder")));
        }
        Ok(pair) => match aocs(&pair, p, opts) {
            Ok(state) => {
                match eigen_residual(&state, rep.e_minus(), p, top) {
                    Ok(r) => out.push(Entry::check(
                        n_aocs("eigen"),
                        r,
                        EIGEN_TOL,
                        format!("{ctx} tail={:.3e}", state.tail_mass()),
                    )),
                    Err(e) => out.push(Entry::failed(n_aocs("eigen"), EIGEN_TOL, format!("{ctx}: {e}"))),
                }
                match exponential_route(pair.e_tilde_plus(), p) {
                    Ok(v) => {
                        out.push(Entry::check(n_aocs("oracle"), vector_distance(state.coeffs(), &v), ORACLE_TOL, ctx))
                    }
                    Err(e) => out.push(Entry::failed(n_aocs("oracle"), ORACLE_TOL, format!("{ctx}: {e}"))),
                }
            }
            Err(e) => {
                out.push(Entry::failed(n_aocs("eigen"), EIGEN_TOL, format!("{ctx}: {e}")));
                out.push(Entry::failed(n_aocs("oracle"), ORACLE_TOL, format!("{ctx}: {e}")));
            }
        },
    }

    let n_dual = |s: &str| format!("08.state.p{i:02}.dual.{s}");
    match dual_cs(rep, p, opts) {
        Ok(state) => {
            match conjugate_raising(rep) {
                Ok(pair) => match eigen_residual(&state, &dual_conjugate(&pair), p, top) {
                    Ok(r) => out.push(Entry::check(
                        n_dual("eigen"),
                        r,
                        EIGEN_TOL,
                        format!("{ctx} tail={:.3e}", state.tail_mass()),
                    )),
                    Err(e) => out.push(Entry::failed(n_dual("eigen"), EIGEN_TOL, format!("{ctx}: {e}"))),
                },
                Err(_) => out.push(Entry::skipped(n_dual("eigen"), format!("{ctx}: no conjugate on a closed ladder"))),
            }
            match exponential_route(rep.e_plus(), p) {
                Ok(v) => out.push(Entry::check(n_dual("oracle"), vector_distance(state.coeffs(), &v), ORACLE_TOL, ctx)),
                Err(e) => out.push(Entry::failed(n_dual("oracle"), ORACLE_TOL, format!("{ctx}: {e}"))),
            }
        }
        Err(e) => {
            out.push(Entry::failed(n_dual("eigen"), EIGEN_TOL, format!("{ctx}: {e}")));
            out.push(Entry::failed(n_dual("oracle"), ORACLE_TOL, format!("{ctx}: {e}")));
        }
    }

    let name = format!("08.state.p{i:02}.perelomov.unitarity");
    let tol = if rep.is_finite() { CLOSED_NORM_TOL } else { opts.tail_ceiling };
    match perelomov_cs(rep, p, opts) {
        Ok(state) => out.push(Entry::check(name, state.unitarity_defect().unwrap_or(0.0), tol, ctx)),
        Err(e) => out.push(Entry::failed(name, tol, format!("{ctx}: {e}"))),
    }
    out
}

/// Serializes non-finite floats as strings so reports survive JSON.
mod lenient_f64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_str(&v.to_string())
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    #[test]
    fn residual_of_generic_matrices_is_positive() {
        let a = OperatorMatrix::new(
            DMatrix::from_fn(4, 4, |i, j| Complex64::new((i * 3 + j) as f64 * 0.37 % 1.0, (i + 2 * j) as f64 * 0.11)),
            4,
        )
        .unwrap();
        let b = OperatorMatrix::new(
            DMatrix::from_fn(4, 4, |i, j| Complex64::new(((i + 1) * (j + 2)) as f64 * 0.13 % 1.0, 0.0)),
            4,
        )
        .unwrap();
        let r = commutator_residual(&a, &b, &OperatorMatrix::zeros(4), 4).unwrap();
        assert!(r > 1e-3);
        assert!(matches!(
            commutator_residual(&a, &OperatorMatrix::zeros(3), &OperatorMatrix::zeros(4), 4),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn overall_pass_is_conjunction() {
        let mut r = VerificationReport::default();
        r.push(Entry::check("a", 1e-12, 1e-10, ""));
        r.push(Entry::skipped("b", "n/a"));
        assert!(r.overall_pass);
        r.push(Entry::check("c", 1.0, 1e-10, ""));
        assert!(!r.overall_pass);
    }

    #[test]
    fn report_json_round_trip_with_infinite_residual() {
        let mut r = VerificationReport::default();
        r.push(Entry::failed("x", 1e-10, "boom"));
        let text = serde_json::to_string(&r).unwrap();
        let back: VerificationReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn su11_warm_up_suite_passes() {
        let report = run_suite(&AlgebraSpec::Su11, 0.25, 64, &[Complex64::new(0.5, 0.0)]);
        for e in report.failures() {
            eprintln!("{e:?}");
        }
        assert!(report.overall_pass);
    }

    #[test]
    fn compact_suite_marks_conjugate_skipped() {
        let report = run_suite(&AlgebraSpec::Quadratic { a: 0.0 }, -2.0, 64, &[]);
        assert_eq!(report.get("03.rep.construct").unwrap().status, Status::Pass);
        assert!(report.get("03.rep.construct").unwrap().context.contains("FiniteExact"));
        assert_eq!(report.get("06.conjugate.[E-,Et+]=1").unwrap().status, Status::Skipped);
        assert!(report.overall_pass, "{:?}", report.failures().collect::<Vec<_>>());
    }

    #[test]
    fn entries_are_sorted_and_deterministic() {
        let a = run_suite(&AlgebraSpec::Higgs { c: 1.0, h: -0.05 }, 4.0, 32, &[Complex64::new(0.2, 0.1)]);
        let b = run_suite(&AlgebraSpec::Higgs { c: 1.0, h: -0.05 }, 4.0, 32, &[Complex64::new(0.2, 0.1)]);
        assert_eq!(a, b);
        assert!(a.entries.windows(2).all(|w| w[0].name <= w[1].name));
    }
}
