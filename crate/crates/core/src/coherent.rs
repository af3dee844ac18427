//! Coherent-state families on a lowest-weight representation.
//!
//! * AOCS: `|β⟩ = exp(β Ẽ+)|vac⟩`, eigenstates of `E-`.
//! * Dual: `|γ⟩ = exp(γ E+)|vac⟩`, eigenstates of `Ẽ+†`.
//! * Perelomov: `exp(ξ E+ - ξ* E-)|vac⟩`.
//!
//! The first two are computed from their closed ladder series; the
//! Perelomov state goes through a dense matrix exponential.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::conjugate::{map_to_lie, ConjugatePair, LieTarget};
use crate::error::{Error, Result};
use crate::matrix::OperatorMatrix;
use crate::repr::Representation;

pub use crate::expm::matrix_exponential;

pub const DEFAULT_TAIL_CEILING: f64 = 1e-8;

/// Number of top basis states counted in the tail mass.
pub const TAIL_ROWS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Aocs,
    Dual,
    Perelomov,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Aocs => "aocs",
            Family::Dual => "dual",
            Family::Perelomov => "perelomov",
        }
    }
}

/// Lowering partner used in the Perelomov exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "lowercase")]
pub enum PerelomovGenerator {
    /// `ξ E+ - ξ* E-`, manifestly anti-Hermitian.
    Deformed,
    /// `ξ E+ - ξ* Ē-` with the mapped lowering operator.
    Mapped { target: LieTarget, epsilon: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentOptions {
    pub normalize: bool,
    pub tail_ceiling: f64,
    pub generator: PerelomovGenerator,
}

impl Default for CoherentOptions {
    fn default() -> Self {
        Self { normalize: true, tail_ceiling: DEFAULT_TAIL_CEILING, generator: PerelomovGenerator::Deformed }
    }
}

impl CoherentOptions {
    pub fn unnormalized() -> Self {
        Self { normalize: false, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoherentStateVector {
    coeffs: DVector<Complex64>,
    family: Family,
    parameter: Complex64,
    normalized: bool,
    tail_mass: f64,
    unitarity_defect: Option<f64>,
}

impl CoherentStateVector {
    pub fn coeffs(&self) -> &DVector<Complex64> {
        &self.coeffs
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn parameter(&self) -> Complex64 {
        self.parameter
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Share of the squared norm sitting in the top two basis states.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    /// Perelomov states only: squared norm leaking into the truncation
    /// boundary (truncated reps) or `|1 - ‖U|vac⟩‖²|` (closed reps).
    pub fn unitarity_defect(&self) -> Option<f64> {
        self.unitarity_defect
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.norm()
    }

    /// `|c_n|² / ‖c‖²`.
    pub fn probabilities(&self) -> Vec<f64> {
        let n2 = self.coeffs.norm_squared();
        self.coeffs.iter().map(|z| z.norm_sqr() / n2).collect()
    }

    pub fn normalize(&mut self) {
        let n = self.coeffs.norm();
        if n > 0.0 {
            self.coeffs /= Complex64::new(n, 0.0);
        }
        self.normalized = true;
    }
}

fn tail_mass(coeffs: &DVector<Complex64>) -> f64 {
    let total = coeffs.norm_squared();
    let start = coeffs.len().saturating_sub(TAIL_ROWS);
    let tail: f64 = coeffs.iter().skip(start).map(|z| z.norm_sqr()).sum();
    if total > 0.0 {
        tail / total
    } else {
        0.0
    }
}

fn finish(
    rep: &Representation,
    coeffs: DVector<Complex64>,
    family: Family,
    parameter: Complex64,
    opts: &CoherentOptions,
) -> Result<CoherentStateVector> {
    if coeffs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Truncation { tail_mass: 1.0, ceiling: opts.tail_ceiling });
    }
    let tail = tail_mass(&coeffs);
    if !rep.is_finite() && tail > opts.tail_ceiling {
        return Err(Error::Truncation { tail_mass: tail, ceiling: opts.tail_ceiling });
    }
    let mut state =
        CoherentStateVector { coeffs, family, parameter, normalized: false, tail_mass: tail, unitarity_defect: None };
    if opts.normalize {
        state.normalize();
    }
    Ok(state)
}

/// Annihilation-operator eigenstate `exp(β Ẽ+)|vac⟩` from the series
/// `c_n = βⁿ / ∏_{k<n} sqrt(c - g(h0 + k))`.
pub fn aocs(pair: &ConjugatePair, beta: Complex64, opts: &CoherentOptions) -> Result<CoherentStateVector> {
    let rep = pair.rep();
    let dim = rep.dim();
    let mut coeffs = DVector::zeros(dim);
    coeffs[0] = Complex64::new(1.0, 0.0);
    for n in 0..dim - 1 {
        coeffs[n + 1] = coeffs[n] * beta / rep.raising_element(n);
    }
    finish(rep, coeffs, Family::Aocs, beta, opts)
}

/// Dual state `exp(γ E+)|vac⟩` from `c_n = γⁿ/n! ∏_{k<n} sqrt(c - g(h0 + k))`.
pub fn dual_cs(rep: &Representation, gamma: Complex64, opts: &CoherentOptions) -> Result<CoherentStateVector> {
    let dim = rep.dim();
    let mut coeffs = DVector::zeros(dim);
    coeffs[0] = Complex64::new(1.0, 0.0);
    for n in 0..dim - 1 {
        coeffs[n + 1] = coeffs[n] * gamma * (rep.raising_element(n) / (n as f64 + 1.0));
    }
    finish(rep, coeffs, Family::Dual, gamma, opts)
}

/// `ξ E+ - ξ* E-` (or the mapped variant).
pub fn perelomov_generator(
    rep: &Representation,
    xi: Complex64,
    generator: PerelomovGenerator,
) -> Result<OperatorMatrix> {
    let lowering = match generator {
        PerelomovGenerator::Deformed => rep.e_minus().clone(),
        PerelomovGenerator::Mapped { target, epsilon } => map_to_lie(rep, target, epsilon)?.e_bar_minus().clone(),
    };
    Ok(&rep.e_plus().scale(xi) - &lowering.scale(xi.conj()))
}

/// Group-displaced vacuum `exp(ξ E+ - ξ* E-)|vac⟩`.
pub fn perelomov_cs(rep: &Representation, xi: Complex64, opts: &CoherentOptions) -> Result<CoherentStateVector> {
    let u = matrix_exponential(&perelomov_generator(rep, xi, opts.generator)?)?;
    let coeffs: DVector<Complex64> = u.entries().column(0).into_owned();
    let defect = if rep.is_finite() {
        (1.0 - coeffs.norm_squared()).abs()
    } else {
        let start = rep.dim().saturating_sub(TAIL_ROWS);
        coeffs.iter().skip(start).map(|z| z.norm_sqr()).sum::<f64>() / coeffs.norm_squared()
    };
    if !rep.is_finite() && defect > opts.tail_ceiling {
        return Err(Error::Truncation { tail_mass: defect, ceiling: opts.tail_ceiling });
    }
    let unitary = opts.generator == PerelomovGenerator::Deformed;
    let mut state = finish(rep, coeffs, Family::Perelomov, xi, &CoherentOptions { normalize: false, ..*opts })?;
    state.unitarity_defect = Some(defect);
    state.normalized = unitary;
    if opts.normalize && !unitary {
        state.normalize();
    }
    Ok(state)
}

/// `⟨ψ|A|ψ⟩ / ⟨ψ|ψ⟩`.
pub fn expectation(state: &CoherentStateVector, op: &OperatorMatrix) -> Result<Complex64> {
    let v = op.apply(&state.coeffs)?;
    Ok(state.coeffs.dotc(&v) / Complex64::new(state.coeffs.norm_squared(), 0.0))
}

/// `‖(A - λ)ψ‖ / ‖ψ‖` over the first `rows` components.
pub fn eigen_residual(
    state: &CoherentStateVector,
    op: &OperatorMatrix,
    eigenvalue: Complex64,
    rows: usize,
) -> Result<f64> {
    let v = op.apply(&state.coeffs)?;
    let rows = rows.min(v.len());
    let r: f64 = (0..rows).map(|n| (v[n] - eigenvalue * state.coeffs[n]).norm_sqr()).sum();
    Ok(r.sqrt() / state.coeffs.norm())
}
