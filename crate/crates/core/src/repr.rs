//! Truncated lowest-weight representations.
//!
//! On the weight basis `|n⟩` (weight `h0 + n`) the Casimir relation gives
//! `E- E+ |n⟩ = (c - g(h0 + n)) |n⟩` with `c = g(h0 - 1)`, so the raising
//! matrix elements are `⟨n+1|E+|n⟩ = sqrt(c - g(h0 + n))`, chosen real and
//! non-negative. A zero of `c - g(h0 + n)` terminates the ladder and yields a
//! finite-dimensional representation; a negative value before any zero means
//! no unitary lowest-weight representation exists.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraSpec;
use crate::error::{Error, Result};
use crate::matrix::OperatorMatrix;

/// Threshold for treating `c - g(h0 + n)` as zero or negative.
pub const UNITARITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RepKind {
    /// Infinite ladder cut at `dim` basis states.
    InfiniteTruncated,
    /// Ladder terminates inside the requested size; no truncation.
    FiniteExact,
}

/// Truncated lowest-weight triple `(H, E+, E-)`.
#[derive(Debug, Clone)]
pub struct Representation {
    spec: AlgebraSpec,
    h0: f64,
    casimir: f64,
    kind: RepKind,
    h: OperatorMatrix,
    e_plus: OperatorMatrix,
    e_minus: OperatorMatrix,
}

impl Representation {
    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    /// Lowest weight.
    pub fn h0(&self) -> f64 {
        self.h0
    }

    /// Casimir value `c`.
    pub fn casimir(&self) -> f64 {
        self.casimir
    }

    pub fn kind(&self) -> RepKind {
        self.kind
    }

    pub fn is_finite(&self) -> bool {
        self.kind == RepKind::FiniteExact
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    pub fn h(&self) -> &OperatorMatrix {
        &self.h
    }

    pub fn e_plus(&self) -> &OperatorMatrix {
        &self.e_plus
    }

    pub fn e_minus(&self) -> &OperatorMatrix {
        &self.e_minus
    }

    pub fn weight(&self, n: usize) -> f64 {
        self.h0 + n as f64
    }

    /// `c - g(h0 + n)`, the eigenvalue of `E- E+` on `|n⟩`.
    pub fn gap(&self, n: usize) -> f64 {
        self.spec.g_diff(self.h0 - 1.0, self.weight(n))
    }

    /// `⟨n+1|E+|n⟩` for `n < dim - 1`.
    pub fn raising_element(&self, n: usize) -> f64 {
        self.e_plus.get(n + 1, n).re
    }

    /// Rows trusted for single ladder applications.
    pub fn ladder_trust(&self) -> usize {
        self.e_plus.trust_rows()
    }

    pub fn describe(&self) -> String {
        format!("{} h0={} dim={} {:?}", self.spec.describe(), self.h0, self.dim(), self.kind)
    }

    fn from_raising(spec: AlgebraSpec, h0: f64, casimir: f64, kind: RepKind, raising: &[f64]) -> Self {
        let dim = raising.len() + 1;
        let mut ep = DMatrix::zeros(dim, dim);
        for (n, &e) in raising.iter().enumerate() {
            ep[(n + 1, n)] = Complex64::new(e, 0.0);
        }
        let ladder_trust = match kind {
            RepKind::FiniteExact => dim,
            RepKind::InfiniteTruncated => dim - 1,
        };
        let e_plus = OperatorMatrix::from_parts(ep, ladder_trust);
        let e_minus = e_plus.adjoint();
        let h = OperatorMatrix::diagonal((0..dim).map(|n| h0 + n as f64));
        Self { spec, h0, casimir, kind, h, e_plus, e_minus }
    }
}

/// Builds the lowest-weight representation of weight `h0`, cut at `dim`
/// basis states unless the ladder terminates earlier.
pub fn build_lowest_weight_rep(spec: &AlgebraSpec, h0: f64, dim: usize) -> Result<Representation> {
    spec.validate()?;
    if !h0.is_finite() {
        return Err(Error::InvalidSpec(format!("h0 must be finite, got {h0}")));
    }
    if dim < 2 {
        return Err(Error::InvalidDimension { dim, reason: "truncation needs at least 2 states" });
    }
    let casimir = spec.casimir_lowest_weight(h0);
    let mut raising = Vec::with_capacity(dim - 1);
    let mut kind = RepKind::InfiniteTruncated;
    for n in 0..dim {
        let gap = spec.g_diff(h0 - 1.0, h0 + n as f64);
        if gap.abs() <= UNITARITY_TOL {
            kind = RepKind::FiniteExact;
            break;
        }
        if n == dim - 1 {
            break;
        }
        if gap < -UNITARITY_TOL {
            return Err(Error::UnitarityViolation { n, gap });
        }
        raising.push(gap.sqrt());
    }
    Ok(Representation::from_raising(*spec, h0, casimir, kind, &raising))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProbeVerdict {
    /// `c - g(h0 + n) > 0` for every scanned `n`.
    InfiniteUpTo(usize),
    /// Ladder closes with this many states.
    Finite(usize),
    /// `c - g(h0 + n) < 0` at this `n` before any zero.
    InvalidAt(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepProbe {
    pub verdict: ProbeVerdict,
    pub first_nonpositive: Option<usize>,
}

/// Scans the sign of `c - g(h0 + n)` for `n` in `0..max_n`.
pub fn probe_dimension(spec: &AlgebraSpec, h0: f64, max_n: usize, tol: f64) -> RepProbe {
    for n in 0..max_n {
        let gap = spec.g_diff(h0 - 1.0, h0 + n as f64);
        if gap.abs() <= tol {
            return RepProbe { verdict: ProbeVerdict::Finite(n + 1), first_nonpositive: Some(n) };
        }
        if gap < -tol {
            return RepProbe { verdict: ProbeVerdict::InvalidAt(n), first_nonpositive: Some(n) };
        }
    }
    RepProbe { verdict: ProbeVerdict::InfiniteUpTo(max_n), first_nonpositive: None }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OscillatorSector {
    /// Vacuum `|0⟩`, weights `1/4 + n`.
    Even,
    /// Vacuum `|1⟩`, weights `3/4 + n`.
    Odd,
}

impl OscillatorSector {
    fn offset(self) -> usize {
        match self {
            OscillatorSector::Even => 0,
            OscillatorSector::Odd => 1,
        }
    }
}

/// su(1,1) realized on one bosonic mode: `K- = a²/2`, `K+ = (a†)²/2`,
/// `K0 = (2a†a + 1)/4`, restricted to one parity sector and relabelled
/// `0, 1, 2, …`. The sector has `fock_dim / 2` states.
pub fn oscillator_realization(sector: OscillatorSector, fock_dim: usize) -> Result<Representation> {
    if fock_dim < 4 || !fock_dim.is_multiple_of(2) {
        return Err(Error::InvalidDimension { dim: fock_dim, reason: "Fock dimension must be even and >= 4" });
    }
    let one = Complex64::new(1.0, 0.0);
    let mut a = DMatrix::<Complex64>::zeros(fock_dim, fock_dim);
    for n in 1..fock_dim {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    let ad = a.adjoint();
    let k_minus = (&a * &a) * Complex64::new(0.5, 0.0);
    let k_plus = (&ad * &ad) * Complex64::new(0.5, 0.0);
    let k0 = ((&ad * &a) * Complex64::new(2.0, 0.0) + DMatrix::identity(fock_dim, fock_dim) * one)
        * Complex64::new(0.25, 0.0);

    let idx: Vec<usize> = (0..fock_dim / 2).map(|k| sector.offset() + 2 * k).collect();
    let dim = idx.len();
    let project = |m: &DMatrix<Complex64>| DMatrix::from_fn(dim, dim, |i, j| m[(idx[i], idx[j])]);

    let h = project(&k0);
    let h0 = h[(0, 0)].re;
    let spec = AlgebraSpec::Su11;
    Ok(Representation {
        spec,
        h0,
        casimir: spec.casimir_lowest_weight(h0),
        kind: RepKind::InfiniteTruncated,
        h: OperatorMatrix::from_parts(h, dim),
        e_plus: OperatorMatrix::from_parts(project(&k_plus), dim - 1),
        e_minus: OperatorMatrix::from_parts(project(&k_minus), dim - 1),
    })
}

/// `E- E+ + g(H)`; equals `c·I` on its trusted rows.
pub fn casimir_matrix(rep: &Representation) -> OperatorMatrix {
    let g_h = OperatorMatrix::diagonal((0..rep.dim()).map(|n| rep.spec.g(rep.weight(n))));
    &(rep.e_minus() * rep.e_plus()) + &g_h
}

/// Finds the lowest weight whose ladder closes after exactly `dim` states,
/// searching within half a unit of the symmetric value `-(dim - 1)/2`.
pub fn finite_lowest_weight(spec: &AlgebraSpec, dim: usize) -> Result<f64> {
    spec.validate()?;
    if dim < 2 {
        return Err(Error::InvalidDimension { dim, reason: "need at least 2 states" });
    }
    let top = (dim - 1) as f64;
    let closing = |h0: f64| spec.g_diff(h0 - 1.0, h0 + top);
    let center = -top / 2.0;
    let (mut lo, mut hi) = (center - 0.5, center + 0.5);
    let (mut f_lo, f_hi) = (closing(lo), closing(hi));
    if f_lo == 0.0 {
        hi = lo;
    } else if f_hi == 0.0 {
        lo = hi;
    } else if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoFiniteWeight {
            dim,
            reason: format!("no sign change of c - g(h0+{}) on [{lo}, {hi}]", dim - 1),
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let f_mid = closing(mid);
        if f_mid == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let h0 = 0.5 * (lo + hi);
    let rep = build_lowest_weight_rep(spec, h0, dim)?;
    if rep.kind() != RepKind::FiniteExact || rep.dim() != dim {
        return Err(Error::NoFiniteWeight {
            dim,
            reason: format!("ladder at h0={h0} closes with {} states", rep.dim()),
        });
    }
    Ok(h0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn su11_quarter_first_raising_element() {
        let rep = build_lowest_weight_rep(&AlgebraSpec::Su11, 0.25, 8).unwrap();
        assert_eq!(rep.kind(), RepKind::InfiniteTruncated);
        assert!((rep.raising_element(0) - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(rep.casimir(), 3.0 / 16.0);
    }

    #[test]
    fn su11_three_quarter_first_raising_element() {
        let rep = build_lowest_weight_rep(&AlgebraSpec::Su11, 0.75, 8).unwrap();
        assert!((rep.raising_element(0) - 1.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn compact_quadratic_closes() {
        let rep = build_lowest_weight_rep(&AlgebraSpec::Quadratic { a: 0.0 }, -1.0, 8).unwrap();
        assert_eq!(rep.kind(), RepKind::FiniteExact);
        assert_eq!(rep.dim(), 3);
        assert_eq!(rep.ladder_trust(), 3);
    }

    #[test]
    fn unitarity_violation_is_reported() {
        // c - g(h0) = g(0) - g(1) < 0 for the compact quadratic algebra.
        let err = build_lowest_weight_rep(&AlgebraSpec::Quadratic { a: 0.2 }, 1.0, 8).unwrap_err();
        assert!(matches!(err, Error::UnitarityViolation { n: 0, .. }));
    }

    #[test]
    fn rejects_tiny_dimension() {
        assert!(build_lowest_weight_rep(&AlgebraSpec::Su11, 0.25, 1).is_err());
    }

    #[test]
    fn hermitian_structure() {
        let rep = build_lowest_weight_rep(&AlgebraSpec::Higgs { c: 1.0, h: -0.05 }, 4.0, 16).unwrap();
        assert_eq!(rep.e_minus(), &rep.e_plus().adjoint());
        for n in 0..rep.dim() {
            assert_eq!(rep.h().get(n, n), Complex64::new(4.0 + n as f64, 0.0));
        }
        let vac = rep.e_minus().entries().column(0).iter().all(|z| *z == Complex64::new(0.0, 0.0));
        assert!(vac);
    }

    #[test]
    fn probe_examples() {
        let p = probe_dimension(&AlgebraSpec::Su11, 0.25, 64, 1e-10);
        assert_eq!(p.verdict, ProbeVerdict::InfiniteUpTo(64));
        assert_eq!(p.first_nonpositive, None);

        let p = probe_dimension(&AlgebraSpec::Quadratic { a: 0.0 }, -2.0, 64, 1e-10);
        assert_eq!(p.verdict, ProbeVerdict::Finite(5));

        // c = g(-1/2) = 1/4 and c - g(1/2) = 1 > 0: this Higgs point is su(1,1) itself.
        let p = probe_dimension(&AlgebraSpec::Higgs { c: -1.0, h: 0.0 }, 0.5, 8, 1e-10);
        assert_eq!(p.verdict, ProbeVerdict::InfiniteUpTo(8));

        let p = probe_dimension(&AlgebraSpec::Higgs { c: 1.0, h: 0.0 }, 0.5, 8, 1e-10);
        assert_eq!(p.verdict, ProbeVerdict::InvalidAt(0));
    }

    #[test]
    fn oscillator_weights() {
        let even = oscillator_realization(OscillatorSector::Even, 16).unwrap();
        let odd = oscillator_realization(OscillatorSector::Odd, 16).unwrap();
        assert_eq!(even.dim(), 8);
        for n in 0..8 {
            assert!((even.h().get(n, n).re - (0.25 + n as f64)).abs() < 1e-15);
        }
        assert_eq!(odd.h0(), 0.75);
        assert!(oscillator_realization(OscillatorSector::Even, 7).is_err());
    }

    #[test]
    fn casimir_is_constant_on_trusted_rows() {
        let rep = build_lowest_weight_rep(&AlgebraSpec::Su11, 0.25, 16).unwrap();
        let cas = casimir_matrix(&rep);
        let target = OperatorMatrix::identity(16).scale(Complex64::new(3.0 / 16.0, 0.0));
        assert!((&cas - &target).max_abs_block(cas.trust_rows()) < 1e-12);

        let finite = build_lowest_weight_rep(&AlgebraSpec::Quadratic { a: 0.0 }, -2.0, 16).unwrap();
        let cas = casimir_matrix(&finite);
        assert_eq!(cas.trust_rows(), 5);
        let target = OperatorMatrix::identity(5).scale(Complex64::new(finite.casimir(), 0.0));
        assert!((&cas - &target).max_abs_block(5) < 1e-12);

        let higgs = AlgebraSpec::Higgs { c: 1.0, h: -0.05 };
        let rep = build_lowest_weight_rep(&higgs, 4.0, 24).unwrap();
        let cas = casimir_matrix(&rep);
        let target = OperatorMatrix::identity(24).scale(Complex64::new(higgs.g(3.0), 0.0));
        assert!((&cas - &target).max_abs_block(cas.trust_rows()) < 1e-10);
    }

    #[test]
    fn finite_weight_search() {
        assert_eq!(finite_lowest_weight(&AlgebraSpec::Quadratic { a: 0.0 }, 5).unwrap(), -2.0);
        let h0 = finite_lowest_weight(&AlgebraSpec::Quadratic { a: 0.1 }, 5).unwrap();
        assert!((h0 + 2.0).abs() < 0.5 && h0 != -2.0);
        let q = finite_lowest_weight(&AlgebraSpec::QDeformed { q: 1.3 }, 4).unwrap();
        assert!((q + 1.5).abs() < 1e-12);
    }
}
