//! Canonical conjugate of the lowering operator and the map onto the
//! undeformed su(1,1)/su(2) brackets.
//!
//! `Ẽ+ = E+ F(C, H)` with `F(C, H) = (H + α)/(C - g(H))` satisfies
//! `[E-, Ẽ+] = 1`. On the vacuum `E+ E-` vanishes, which pins `α = 1 - h0`.
//!
//! `Ē- = E- G(C, H)` with `G(C, H) = ((H² - H) b + ε)/(C - g(H - 1))` gives
//! `[E+, Ē-] = -2 b H` on every excited state, for any `ε`. On the vacuum the
//! bracket additionally needs `ε = b h0 (1 - h0)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraSpec;
use crate::error::{Error, Result};
use crate::matrix::OperatorMatrix;
use crate::repr::Representation;

/// Threshold below which `c - g(h - 1)` is treated as a vanishing denominator.
pub const DENOMINATOR_TOL: f64 = 1e-12;

/// Sector constant making `[E-, Ẽ+] = 1` hold on the vacuum.
pub fn solve_alpha(_spec: &AlgebraSpec, h0: f64) -> f64 {
    1.0 - h0
}

#[derive(Debug, Clone)]
pub struct ConjugatePair {
    rep: Representation,
    alpha: f64,
    e_tilde_plus: OperatorMatrix,
}

impl ConjugatePair {
    pub fn rep(&self) -> &Representation {
        &self.rep
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn e_tilde_plus(&self) -> &OperatorMatrix {
        &self.e_tilde_plus
    }
}

/// Builds `Ẽ+ = E+ · diag F(c, h0 + n)`.
pub fn conjugate_raising(rep: &Representation) -> Result<ConjugatePair> {
    if rep.is_finite() {
        return Err(Error::CompactRep);
    }
    let alpha = solve_alpha(rep.spec(), rep.h0());
    let dim = rep.dim();
    let f_diag = (0..dim).map(|n| {
        let gap = rep.gap(n);
        // the top column of E+ is zero, so F there only needs to be finite
        if n + 1 == dim && gap.abs() <= DENOMINATOR_TOL {
            0.0
        } else {
            (rep.weight(n) + alpha) / gap
        }
    });
    let f = OperatorMatrix::diagonal(f_diag);
    let e_tilde_plus = rep.e_plus() * &f;
    Ok(ConjugatePair { rep: rep.clone(), alpha, e_tilde_plus })
}

/// `Ẽ+†`, the operator whose eigenstates are the dual coherent states.
pub fn dual_conjugate(pair: &ConjugatePair) -> OperatorMatrix {
    pair.e_tilde_plus.adjoint()
}

/// Which undeformed bracket `[E+, Ē-] = -2 b H` is targeted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LieTarget {
    /// `b = +1`, noncompact.
    Su11,
    /// `b = -1`, compact.
    Su2,
}

impl LieTarget {
    pub fn sign(self) -> f64 {
        match self {
            LieTarget::Su11 => 1.0,
            LieTarget::Su2 => -1.0,
        }
    }

    pub fn from_sign(b: i32) -> Option<Self> {
        match b {
            1 => Some(LieTarget::Su11),
            -1 => Some(LieTarget::Su2),
            _ => None,
        }
    }

    /// Natural target for a representation: su(1,1) for infinite ladders,
    /// su(2) for closed ones.
    pub fn for_rep(rep: &Representation) -> Self {
        if rep.is_finite() {
            LieTarget::Su2
        } else {
            LieTarget::Su11
        }
    }
}

/// The unique `ε` for which `[E+, Ē-] = -2 b H` also holds on the vacuum.
pub fn vacuum_epsilon(target: LieTarget, h0: f64) -> f64 {
    target.sign() * h0 * (1.0 - h0)
}

#[derive(Debug, Clone)]
pub struct LieMap {
    rep: Representation,
    target: LieTarget,
    epsilon: f64,
    e_bar_minus: OperatorMatrix,
}

impl LieMap {
    pub fn rep(&self) -> &Representation {
        &self.rep
    }

    pub fn target(&self) -> LieTarget {
        self.target
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn e_bar_minus(&self) -> &OperatorMatrix {
        &self.e_bar_minus
    }

    /// `-2 b H`.
    pub fn target_bracket(&self) -> OperatorMatrix {
        self.rep.h().scale(Complex64::new(-2.0 * self.target.sign(), 0.0))
    }

    /// `[E+, Ē-] + 2 b H`.
    pub fn bracket_defect(&self) -> OperatorMatrix {
        &self.rep.e_plus().commutator(&self.e_bar_minus) - &self.target_bracket()
    }

    /// Exact vacuum-row defect `|(h0² - h0) b + ε|`.
    pub fn vacuum_defect(&self) -> f64 {
        let h0 = self.rep.h0();
        ((h0 * h0 - h0) * self.target.sign() + self.epsilon).abs()
    }
}

/// Builds `Ē- = E- · diag G(c, h0 + n)`.
pub fn map_to_lie(rep: &Representation, target: LieTarget, epsilon: f64) -> Result<LieMap> {
    if !epsilon.is_finite() {
        return Err(Error::InvalidSpec(format!("epsilon must be finite, got {epsilon}")));
    }
    let b = target.sign();
    let dim = rep.dim();
    let mut g_diag = Vec::with_capacity(dim);
    // column 0 of E- vanishes, so G(h0) never contributes
    g_diag.push(0.0);
    for n in 1..dim {
        let h = rep.weight(n);
        let denom = rep.gap(n - 1);
        if denom.abs() < DENOMINATOR_TOL {
            return Err(Error::DegenerateDenominator { n, value: denom });
        }
        g_diag.push(((h * h - h) * b + epsilon) / denom);
    }
    let e_bar_minus = rep.e_minus() * &OperatorMatrix::diagonal(g_diag);
    Ok(LieMap { rep: rep.clone(), target, epsilon, e_bar_minus })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repr::build_lowest_weight_rep;

    #[test]
    fn alpha_examples() {
        assert_eq!(solve_alpha(&AlgebraSpec::Su11, 0.25), 0.75);
        assert_eq!(solve_alpha(&AlgebraSpec::Su11, 0.75), 0.25);
        assert_eq!(solve_alpha(&AlgebraSpec::QDeformed { q: 2.0 }, 1.0), 0.0);
    }

    #[test]
    fn su11_conjugate_first_element() {
        let rep = build_lowest_weight_rep(&AlgebraSpec::Su11, 0.25, 16).unwrap();
        let pair = conjugate_raising(&rep).unwrap();
        assert!((pair.e_tilde_plus().get(1, 0).re - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn conjugate_elements_follow_closed_form() {
        let spec = AlgebraSpec::Higgs { c: 1.0, h: -0.05 };
        let rep = build_lowest_weight_rep(&spec, 4.0, 24).unwrap();
        let pair = conjugate_raising(&rep).unwrap();
        let c = spec.g(3.0);
        for n in 0..23 {
            let expected = (n as f64 + 1.0) / (c - spec.g(4.0 + n as f64)).sqrt();
            let got = pair.e_tilde_plus().get(n + 1, n).re;
            assert!((got - expected).abs() <= 1e-12 * expected.abs().max(1.0), "n={n}");
        }
    }

    #[test]
    fn conjugate_is_lower_bidiagonal() {
        let rep = build_lowest_weight_rep(&AlgebraSpec::Quadratic { a: -0.5 }, 5.0, 12).unwrap();
        let pair = conjugate_raising(&rep).unwrap();
        for i in 0..12 {
            for j in 0..12 {
                if i != j + 1 {
                    assert_eq!(pair.e_tilde_plus().get(i, j), Complex64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn compact_rep_is_refused() {
        let rep = build_lowest_weight_rep(&AlgebraSpec::Quadratic { a: 0.0 }, -2.0, 16).unwrap();
        assert!(matches!(conjugate_raising(&rep), Err(Error::CompactRep)));
    }

    #[test]
    fn su11_identity_map() {
        // G ≡ 1 for undeformed su(1,1) exactly when ε = c.
        let rep = build_lowest_weight_rep(&AlgebraSpec::Su11, 0.25, 32).unwrap();
        let eps = rep.casimir();
        assert_eq!(eps, vacuum_epsilon(LieTarget::Su11, 0.25));
        let map = map_to_lie(&rep, LieTarget::Su11, eps).unwrap();
        let diff = map.e_bar_minus() - rep.e_minus();
        assert!(diff.max_abs_block(32) < 1e-12);
    }

    #[test]
    fn vacuum_row_needs_matching_epsilon() {
        let rep = build_lowest_weight_rep(&AlgebraSpec::Su11, 0.25, 16).unwrap();
        let map = map_to_lie(&rep, LieTarget::Su11, 0.0).unwrap();
        let d = map.bracket_defect();
        assert!((d.get(0, 0).norm() - map.vacuum_defect()).abs() < 1e-14);
        assert!((map.vacuum_defect() - 3.0 / 16.0).abs() < 1e-15);
        assert!(d.max_abs_range(1, d.trust_rows()) < 1e-12);
    }

    #[test]
    fn finite_higgs_su2_map_holds_everywhere() {
        let rep = build_lowest_weight_rep(&AlgebraSpec::Higgs { c: 1.0, h: 0.1 }, -2.0, 16).unwrap();
        assert!(rep.is_finite());
        let target = LieTarget::Su2;
        let map = map_to_lie(&rep, target, vacuum_epsilon(target, rep.h0())).unwrap();
        let d = map.bracket_defect();
        assert_eq!(d.trust_rows(), rep.dim());
        assert!(d.max_abs_block(rep.dim()) < 1e-12);
    }

    #[test]
    fn rejects_non_finite_epsilon() {
        let rep = build_lowest_weight_rep(&AlgebraSpec::Quadratic { a: 0.0 }, -2.0, 16).unwrap();
        assert!(map_to_lie(&rep, LieTarget::Su2, f64::NAN).is_err());
    }
}
