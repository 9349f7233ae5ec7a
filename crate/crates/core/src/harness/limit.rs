//! Pole-to-infinity limit: with `W = (z - α)^n` and `n = deg P`, the
//! rational bounds at `z = 1`, rescaled by `|W(1)|`, approach the
//! polynomial bounds as `α → ∞`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blaschke::PoleSet;
use crate::bounds::{
    check_zero_side, BoundError, BoundEvaluator, BoundKind, LowerBound, MaxNormBound, PolyBound, PolyEvaluator, Side,
};
use crate::poly::Polynomial;
use crate::rational::{RationalError, RationalFn};

pub const DEFAULT_ALPHAS: [f64; 5] = [10.0, 30.0, 100.0, 300.0, 1000.0];

/// Relative gap required at the largest `α`.
pub const LIMIT_GAP_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LimitFamily {
    /// `thm1-coeff` against `malik-refined`.
    Upper,
    /// `thm3-coeff` against `turan-malik-refined`.
    Lower,
}

impl LimitFamily {
    pub fn kinds(self) -> (BoundKind, BoundKind) {
        match self {
            LimitFamily::Upper => (
                BoundKind::MaxNorm(MaxNormBound::Thm1Coeff),
                BoundKind::Poly(PolyBound::MalikUpperRefined),
            ),
            LimitFamily::Lower => (
                BoundKind::Lower(LowerBound::Thm3Coeff),
                BoundKind::Poly(PolyBound::TuranMalikRefined),
            ),
        }
    }

    pub fn side(self) -> Side {
        match self {
            LimitFamily::Upper => Side::Outside,
            LimitFamily::Lower => Side::Inside,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitRow {
    pub alpha: f64,
    /// `|B'(1)|`.
    pub b_prime: f64,
    /// Rational right-hand side at `z = 1`, unscaled.
    pub rational_rhs: f64,
    /// `|W(1)| = (α - 1)^n`.
    pub scale: f64,
    pub scaled_rhs: f64,
    /// `|W(1)| |R'(1)|`.
    pub scaled_lhs: f64,
    pub poly_rhs: f64,
    /// `|scaled_rhs - poly_rhs| / |poly_rhs|`.
    pub relative_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitTable {
    pub family: LimitFamily,
    pub k: f64,
    pub numerator: Vec<[f64; 2]>,
    /// `|P'(1)|`.
    pub poly_lhs: f64,
    pub rows: Vec<LimitRow>,
}

impl LimitTable {
    pub fn monotone(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].relative_gap <= w[0].relative_gap)
    }

    pub fn final_gap(&self) -> Option<f64> {
        self.rows.last().map(|r| r.relative_gap)
    }

    /// Monotone gap, below `LIMIT_GAP_TOL` at the last `α`.
    pub fn converged(&self) -> bool {
        self.monotone() && self.final_gap().is_some_and(|g| g < LIMIT_GAP_TOL)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LimitError {
    #[error("alphas must be increasing and exceed max(1, k) = {floor}; got {alpha} at index {index}")]
    BadAlpha { index: usize, alpha: f64, floor: f64 },
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Rational(#[from] RationalError),
}

/// Family whose hypothesis `p`'s zeros satisfy; `Upper` when both do.
pub fn default_family(p: &Polynomial<f64>, k: f64) -> Result<LimitFamily, LimitError> {
    let zeros = p.roots().map_err(BoundError::from)?;
    if k >= 1.0 && check_zero_side(&zeros, Side::Outside, k).is_ok() {
        Ok(LimitFamily::Upper)
    } else {
        check_zero_side(&zeros, Side::Inside, k)?;
        Ok(LimitFamily::Lower)
    }
}

pub fn limit_study(
    p: &Polynomial<f64>,
    k: f64,
    alphas: &[f64],
    family: LimitFamily,
) -> Result<LimitTable, LimitError> {
    let floor = k.max(1.0);
    for (index, &alpha) in alphas.iter().enumerate() {
        let increasing = index == 0 || alpha > alphas[index - 1];
        if !(alpha > floor && alpha.is_finite() && increasing) {
            return Err(LimitError::BadAlpha { index, alpha, floor });
        }
    }
    let (rational_kind, poly_kind) = family.kinds();
    let z = Complex::new(1.0, 0.0);
    let pe = PolyEvaluator::new(p.clone())?;
    let BoundKind::Poly(poly_mode) = poly_kind else { unreachable!() };
    let poly = pe.bound(z, k, poly_mode)?;
    let n = p.degree();
    let mut rows = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let r = RationalFn::new(p.clone(), PoleSet::repeated(alpha, n).map_err(RationalError::from)?)?;
        let ev = BoundEvaluator::new(&r)?;
        let pt = ev.point(z)?;
        let v = ev.evaluate(rational_kind, &pt, k, None)?;
        let scale = (alpha - 1.0).powi(n as i32);
        let scaled_rhs = v.rhs * scale;
        rows.push(LimitRow {
            alpha,
            b_prime: pt.b_prime,
            rational_rhs: v.rhs,
            scale,
            scaled_rhs,
            scaled_lhs: v.lhs * scale,
            poly_rhs: poly.rhs,
            relative_gap: (scaled_rhs - poly.rhs).abs() / poly.rhs.abs(),
        });
    }
    Ok(LimitTable {
        family,
        k,
        numerator: p.coeffs().iter().map(|c| [c.re, c.im]).collect(),
        poly_lhs: poly.lhs,
        rows,
    })
}

/// Built-in numerators for the limit study: `(name, coefficients, k, family)`.
pub fn builtin_limit_cases() -> Vec<(&'static str, Polynomial<f64>, f64, LimitFamily)> {
    vec![
        ("z+1", Polynomial::from_real_coeffs(&[1.0, 1.0]), 1.0, LimitFamily::Upper),
        ("(z+2)^2", Polynomial::from_real_coeffs(&[4.0, 4.0, 1.0]), 2.0, LimitFamily::Upper),
        ("z^2+z+1", Polynomial::from_real_coeffs(&[1.0, 1.0, 1.0]), 1.0, LimitFamily::Upper),
        ("z", Polynomial::from_real_coeffs(&[0.0, 1.0]), 1.0, LimitFamily::Lower),
        ("z^2", Polynomial::from_real_coeffs(&[0.0, 0.0, 1.0]), 1.0, LimitFamily::Lower),
        ("z^2+0.5z", Polynomial::from_real_coeffs(&[0.0, 0.5, 1.0]), 0.5, LimitFamily::Lower),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_pole_b_prime_closed_form() {
        let p = Polynomial::from_real_coeffs(&[1.0, 1.0]);
        let t = limit_study(&p, 1.0, &[10.0, 100.0, 1000.0], LimitFamily::Upper).unwrap();
        for row in &t.rows {
            let a = row.alpha;
            assert!((row.b_prime - (a + 1.0) / (a - 1.0)).abs() < 1e-12);
        }
        assert!(t.monotone());
        assert!((t.poly_lhs - 1.0).abs() < 1e-15);
    }

    #[test]
    fn lower_limit_recovers_polynomial_value() {
        let p = Polynomial::from_real_coeffs(&[0.0, 0.0, 1.0]);
        let t = limit_study(&p, 1.0, &DEFAULT_ALPHAS, LimitFamily::Lower).unwrap();
        assert!((t.rows[0].poly_rhs - 1.5).abs() < 1e-12);
        assert!(t.monotone());
        let last = t.rows.last().unwrap();
        assert!((last.scaled_rhs - 1.5).abs() < 1e-2);
    }

    #[test]
    fn builtin_cases_are_monotone() {
        for (name, p, k, fam) in builtin_limit_cases() {
            let t = limit_study(&p, k, &DEFAULT_ALPHAS, fam).unwrap();
            assert!(t.monotone(), "{name}: {:?}", t.rows);
        }
    }

    #[test]
    fn rejects_bad_alphas() {
        let p = Polynomial::from_real_coeffs(&[1.0, 1.0]);
        assert!(matches!(
            limit_study(&p, 1.0, &[10.0, 5.0], LimitFamily::Upper),
            Err(LimitError::BadAlpha { index: 1, .. })
        ));
        assert!(matches!(
            limit_study(&p, 2.0, &[1.5], LimitFamily::Upper),
            Err(LimitError::BadAlpha { index: 0, .. })
        ));
    }

    #[test]
    fn picks_family_from_zeros() {
        assert_eq!(default_family(&Polynomial::from_real_coeffs(&[1.0, 1.0]), 1.0).unwrap(), LimitFamily::Upper);
        assert_eq!(default_family(&Polynomial::from_real_coeffs(&[0.0, 1.0]), 1.0).unwrap(), LimitFamily::Lower);
        assert!(default_family(&Polynomial::from_real_coeffs(&[1.0, -2.5, 1.0]), 0.9).is_err());
    }
}
