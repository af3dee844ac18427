use crate::error::{Error, Result};
use crate::matrix::OperatorMatrix;

/// Largest 1-norm accepted by [`matrix_exponential`].
pub const MAX_EXP_NORM: f64 = 1e6;

/// `exp(A)` by scaling and squaring with a degree-13 Padé approximant
/// (nalgebra's implementation of Higham's algorithm).
///
/// The result inherits the trust boundary of `A`.
pub fn matrix_exponential(a: &OperatorMatrix) -> Result<OperatorMatrix> {
    let norm = a.norm_one();
    if !norm.is_finite() || norm > MAX_EXP_NORM {
        return Err(Error::Overflow { norm });
    }
    let exp = a.entries().exp();
    if exp.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Overflow { norm });
    }
    Ok(OperatorMatrix::from_parts(exp, a.trust_rows()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_gives_identity() {
        let e = matrix_exponential(&OperatorMatrix::zeros(5)).unwrap();
        assert!((&e - &OperatorMatrix::identity(5)).max_abs_block(5) < 1e-15);
    }

    #[test]
    fn diagonal() {
        let e = matrix_exponential(&OperatorMatrix::diagonal([1.0, 2.0])).unwrap();
        assert!((e.get(0, 0).re - 1f64.exp()).abs() < 1e-14);
        assert!((e.get(1, 1).re - 2f64.exp()).abs() < 1e-13);
        assert_eq!(e.get(0, 1), c(0.0, 0.0));
    }

    #[test]
    fn nilpotent_series_terminates() {
        let a = OperatorMatrix::new(
            DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(3.0, -1.0), c(0.0, 0.0), c(0.0, 0.0)]),
            2,
        )
        .unwrap();
        let e = matrix_exponential(&a).unwrap();
        let expected = &OperatorMatrix::identity(2) + &a;
        assert!((&e - &expected).max_abs_block(2) < 1e-14);
    }

    #[test]
    fn rotation_generator() {
        let t = 40.0;
        let a =
            OperatorMatrix::new(DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(t, 0.0), c(-t, 0.0), c(0.0, 0.0)]), 2)
                .unwrap();
        let e = matrix_exponential(&a).unwrap();
        assert!((e.get(0, 0).re - t.cos()).abs() < 1e-12);
        assert!((e.get(0, 1).re - t.sin()).abs() < 1e-12);
    }

    #[test]
    fn overflow_is_reported() {
        let big = OperatorMatrix::diagonal([800.0, 0.0]);
        assert!(matches!(matrix_exponential(&big), Err(Error::Overflow { .. })));
        let huge = OperatorMatrix::diagonal([-2e6, 0.0]);
        assert!(matches!(matrix_exponential(&huge), Err(Error::Overflow { .. })));
    }
}
