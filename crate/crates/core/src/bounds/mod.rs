//! Evaluators for every derivative bound, pointwise on the unit circle.
//!
//! Each evaluator returns a [`BoundValue`] holding `lhs = |R'(z)|` (or
//! `|P'(z)|`), the bound's right-hand side, and the signed margin. Upper
//! bounds pass when `rhs >= lhs`, lower bounds when `lhs >= rhs`, both up to
//! a relative tolerance.
//!
//! [`BoundEvaluator`] precomputes what every point shares (the sup-norm,
//! the zeros of `P`, `Σ 1/(1 + |b_j|)`), so sweeping many points and kinds
//! over one instance stays cheap.

mod kind;

use std::sync::OnceLock;

use num_complex::Complex;
use serde::Serialize;
use thiserror::Error;

pub use kind::{BoundKind, Family, LevelSetBound, LowerBound, MaxNormBound, PolyBound, Radius, Side, WaliShahForm};

use crate::blaschke::{BlaschkeError, LevelSetData};
use crate::circle;
use crate::poly::{PolyError, Polynomial};
use crate::rational::{LevelMaxima, RationalError, RationalFn, SupNormResult, ZeroData};
use crate::scalar::{on_unit_circle, unit, Scalar};

/// Relative pass tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Slack on zero moduli when checking `|b_j| >= k` or `|b_j| <= k`.
pub const HYPOTHESIS_BAND: f64 = 1e-9;
/// Square-root brackets in `[-BRACKET_CLAMP * scale, 0)` are rounding noise.
pub const BRACKET_CLAMP: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("hypothesis violated: zero {index} has |b_{index}| = {modulus}, needs |b| {relation} {radius}", relation = if *side == Side::Outside { ">=" } else { "<=" })]
    Hypothesis {
        index: usize,
        modulus: f64,
        side: Side,
        radius: f64,
    },
    #[error("k = {k} is invalid for the {side} family")]
    InvalidK { k: f64, side: Side },
    #[error("{kind}: bracket under the square root is {value:e} (scale {scale:e})")]
    NegativeBracket { kind: BoundKind, value: f64, scale: f64 },
    #[error("{kind} needs a nonzero constant term")]
    ZeroConstantTerm { kind: BoundKind },
    #[error("polynomial bounds need degree >= 1")]
    DegreeTooLow,
    #[error("level-set maxima M_1 = M_2 = 0")]
    DegenerateLevelMaxima,
    #[error("{kind} needs level-set data")]
    NeedsLevelSet { kind: BoundKind },
    #[error("{kind} does not apply here")]
    WrongFamily { kind: BoundKind },
    #[error("point has modulus {modulus}, expected a point on the unit circle")]
    OffCircle { modulus: f64 },
    #[error("x_{index} = {value} is negative")]
    NegativeInput { index: usize, value: f64 },
    #[error(transparent)]
    Rational(#[from] RationalError),
    #[error(transparent)]
    Blaschke(#[from] BlaschkeError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

fn f64_of<T: Scalar>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundValue<T> {
    pub kind: BoundKind,
    pub lhs: T,
    pub rhs: T,
    /// `rhs - lhs` for upper bounds, `lhs - rhs` for lower bounds.
    pub margin: T,
    pub pass: bool,
}

impl<T: Scalar> BoundValue<T> {
    pub fn new(kind: BoundKind, lhs: T, rhs: T, tol: T) -> Self {
        let margin = if kind.is_lower() { lhs - rhs } else { rhs - lhs };
        let scale = T::one().max(lhs.abs()).max(rhs.abs());
        Self {
            kind,
            lhs,
            rhs,
            margin,
            pass: margin >= -tol * scale,
        }
    }

    /// Margin divided by `max(1, |lhs|, |rhs|)`.
    pub fn relative_margin(&self) -> T {
        self.margin / T::one().max(self.lhs.abs()).max(self.rhs.abs())
    }
}

/// Everything a bound needs at one circle point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointData<T> {
    pub z: Complex<T>,
    /// `R(z)`.
    pub value: Complex<T>,
    /// `R'(z)`.
    pub prime: Complex<T>,
    /// `|B'(z)|`.
    pub b_prime: T,
}

/// Rejects the first zero on the wrong side of `radius`.
pub fn check_zero_side<T: Scalar>(zeros: &[Complex<T>], side: Side, radius: T) -> Result<(), BoundError> {
    let band = T::tol(HYPOTHESIS_BAND, 1e3);
    for (index, b) in zeros.iter().enumerate() {
        let r = b.norm();
        let ok = match side {
            Side::Outside => r >= radius - band,
            Side::Inside => r <= radius + band,
        };
        if !ok {
            return Err(BoundError::Hypothesis {
                index,
                modulus: f64_of(r),
                side,
                radius: f64_of(radius),
            });
        }
    }
    Ok(())
}

fn check_k<T: Scalar>(k: T, side: Side) -> Result<(), BoundError> {
    let ok = match side {
        Side::Outside => k >= T::one(),
        Side::Inside => k > T::zero() && k <= T::one(),
    };
    if ok {
        Ok(())
    } else {
        Err(BoundError::InvalidK { k: f64_of(k), side })
    }
}

/// Checks `kind`'s zero hypothesis and returns the radius it uses.
fn hypothesis_radius<T: Scalar>(kind: BoundKind, zeros: &[Complex<T>], k: T) -> Result<T, BoundError> {
    match kind.hypothesis() {
        None => Ok(T::one()),
        Some((side, Radius::One)) => {
            check_zero_side(zeros, side, T::one())?;
            Ok(T::one())
        }
        Some((side, Radius::K)) => {
            check_k(k, side)?;
            check_zero_side(zeros, side, k)?;
            Ok(k)
        }
    }
}

fn clamped_sqrt<T: Scalar>(kind: BoundKind, bracket: T, scale: T) -> Result<T, BoundError> {
    if bracket >= T::zero() {
        Ok(bracket.sqrt())
    } else if bracket >= -T::tol(BRACKET_CLAMP, 1e3) * scale.abs() {
        Ok(T::zero())
    } else {
        Err(BoundError::NegativeBracket {
            kind,
            value: f64_of(bracket),
            scale: f64_of(scale),
        })
    }
}

/// `(|α_0| - k^m |α_m|)/(|α_0| + k^m |α_m|)`.
fn coeff_ratio<T: Scalar>(a0: T, am: T, k: T, m: usize) -> T {
    let km = k.powi(m as i32) * am;
    (a0 - km) / (a0 + km)
}

/// `Σ 1/(1 + |b_j|)`.
pub fn inverse_sum<T: Scalar>(zeros: &[Complex<T>]) -> T {
    zeros
        .iter()
        .map(|b| (T::one() + b.norm()).recip())
        .fold(T::zero(), |acc, x| acc + x)
}

/// Shared per-instance state for evaluating bounds on `R`.
#[derive(Debug)]
pub struct BoundEvaluator<'a, T: Scalar> {
    r: &'a RationalFn<T>,
    sup: SupNormResult<T>,
    zeros: ZeroData<T>,
    inv_sum: T,
    tol: T,
    poly: OnceLock<Result<PolyEvaluator<T>, BoundError>>,
}

impl<'a, T: Scalar> BoundEvaluator<'a, T> {
    pub fn new(r: &'a RationalFn<T>) -> Result<Self, BoundError> {
        let zeros = r.zero_data()?;
        Ok(Self {
            r,
            sup: r.sup_norm_circle(),
            inv_sum: inverse_sum(&zeros.zeros),
            zeros,
            tol: T::lit(DEFAULT_TOL),
            poly: OnceLock::new(),
        })
    }

    pub fn with_tolerance(mut self, tol: T) -> Self {
        self.tol = tol;
        self
    }

    pub fn rational(&self) -> &RationalFn<T> {
        self.r
    }

    pub fn sup_norm(&self) -> &SupNormResult<T> {
        &self.sup
    }

    pub fn zero_data(&self) -> &ZeroData<T> {
        &self.zeros
    }

    pub fn tolerance(&self) -> T {
        self.tol
    }

    /// `Σ 1/(1 + |b_j|)` over the zeros of `P`.
    pub fn inverse_zero_sum(&self) -> T {
        self.inv_sum
    }

    pub fn point(&self, z: Complex<T>) -> Result<PointData<T>, BoundError> {
        if !on_unit_circle(z, T::tol(1e-12, 64.0)) {
            return Err(BoundError::OffCircle {
                modulus: f64_of(z.norm()),
            });
        }
        Ok(PointData {
            z,
            value: self.r.eval(z)?,
            prime: self.r.eval_prime(z)?,
            b_prime: self.r.poles().b_prime_modulus_unchecked(z),
        })
    }

    pub fn point_at_angle(&self, theta: T) -> Result<PointData<T>, BoundError> {
        self.point(unit(theta))
    }

    pub fn level_maxima(&self, ls: &LevelSetData<T>) -> Result<LevelMaxima<T>, BoundError> {
        Ok(self.r.level_maxima(ls)?)
    }

    /// Polynomial evaluator for the numerator `P`, built on first use.
    pub fn numerator_evaluator(&self) -> Result<&PolyEvaluator<T>, BoundError> {
        self.poly
            .get_or_init(|| PolyEvaluator::with_zeros(self.r.numerator().clone(), self.zeros.zeros.clone()))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn nm(&self) -> (T, T) {
        (T::from_usize_lossy(self.r.n()), T::from_usize_lossy(self.r.m()))
    }

    fn coeff_moduli(&self) -> (T, T) {
        let (a0, am) = self.r.end_coefficients();
        (a0.norm(), am.norm())
    }

    pub fn upper_maxnorm(&self, pt: &PointData<T>, k: T, mode: MaxNormBound) -> Result<BoundValue<T>, BoundError> {
        let kind = BoundKind::MaxNorm(mode);
        let k = hypothesis_radius(kind, &self.zeros.zeros, k)?;
        let (n, m) = self.nm();
        let half = T::lit(0.5);
        let two = T::lit(2.0);
        let big_m = self.sup.value;
        let rho2 = (pt.value.norm() / big_m).powi(2);
        let bp = pt.b_prime;
        let az_term = n * (k - T::one()) / (k + T::one()) * rho2;
        let rhs = match mode {
            MaxNormBound::Bernstein => bp * big_m,
            MaxNormBound::Lmr => half * bp * big_m,
            MaxNormBound::AzizZargar => half * (bp - az_term) * big_m,
            MaxNormBound::Thm1 => {
                let corr = n / (k + T::one()) - self.inv_sum;
                half * (bp - az_term - two * rho2 * corr) * big_m
            }
            MaxNormBound::Thm1Coeff => {
                let (a0, am) = self.coeff_moduli();
                let corr = n - m + coeff_ratio(a0, am, k, self.r.m());
                half * (bp - az_term - two * rho2 / (k + T::one()) * corr) * big_m
            }
        };
        Ok(BoundValue::new(kind, pt.prime.norm(), rhs, self.tol))
    }

    pub fn upper_levelset(
        &self,
        pt: &PointData<T>,
        lm: &LevelMaxima<T>,
        k: T,
        mode: LevelSetBound,
    ) -> Result<BoundValue<T>, BoundError> {
        let kind = BoundKind::LevelSet(mode);
        let k = hypothesis_radius(kind, &self.zeros.zeros, k)?;
        let (n, m) = self.nm();
        let half = T::lit(0.5);
        let bp = pt.b_prime;
        let s = lm.m1 * lm.m1 + lm.m2 * lm.m2;
        if !(s > T::zero()) {
            return Err(BoundError::DegenerateLevelMaxima);
        }
        let r2 = pt.value.norm_sqr();
        let f_term = T::lit(2.0) * n * (k - T::one()) / (k + T::one()) * r2 * bp / s;
        let scale = bp * bp;
        let rhs = match mode {
            LevelSetBound::LmrA => half * bp * (lm.m1 + lm.m2),
            LevelSetBound::AzizShahD => half * bp * s.sqrt(),
            LevelSetBound::AzizShahF => half * clamped_sqrt(kind, scale - f_term, scale)? * s.sqrt(),
            LevelSetBound::Thm2 => {
                let corr = n / (T::one() + k) - self.inv_sum;
                let bracket = scale - f_term - T::lit(4.0) * r2 * bp / s * corr;
                half * clamped_sqrt(kind, bracket, scale)? * s.sqrt()
            }
            LevelSetBound::Thm2Coeff => {
                let (a0, am) = self.coeff_moduli();
                let corr = n - m + coeff_ratio(a0, am, k, self.r.m());
                let bracket = scale - f_term - T::lit(4.0) * r2 * bp / (s * (T::one() + k)) * corr;
                half * clamped_sqrt(kind, bracket, scale)? * s.sqrt()
            }
        };
        Ok(BoundValue::new(kind, pt.prime.norm(), rhs, self.tol))
    }

    pub fn lower(&self, pt: &PointData<T>, k: T, mode: LowerBound) -> Result<BoundValue<T>, BoundError> {
        let kind = BoundKind::Lower(mode);
        let k = hypothesis_radius(kind, &self.zeros.zeros, k)?;
        let (n, m) = self.nm();
        let half = T::lit(0.5);
        let two = T::lit(2.0);
        let bp = pt.b_prime;
        let kp1 = T::one() + k;
        let base = (two * m - n * kp1) / kp1;
        let bracket = match mode {
            LowerBound::LmrC => bp - (n - m),
            LowerBound::AzizShahG => bp + base,
            LowerBound::Thm3 => bp + base + two * (self.inv_sum - m / kp1),
            LowerBound::Thm3Coeff => {
                let (a0, am) = self.coeff_moduli();
                bp + base - two * k / kp1 * coeff_ratio(a0, am, k, self.r.m())
            }
        };
        Ok(BoundValue::new(kind, pt.prime.norm(), half * bracket * pt.value.norm(), self.tol))
    }

    /// The `k = 1` coefficient forms; `lm` is needed by the upper variants.
    pub fn wali_shah(
        &self,
        pt: &PointData<T>,
        lm: Option<&LevelMaxima<T>>,
        form: WaliShahForm,
    ) -> Result<BoundValue<T>, BoundError> {
        let kind = BoundKind::WaliShah(form);
        hypothesis_radius(kind, &self.zeros.zeros, T::one())?;
        let (n, m) = self.nm();
        let (a0, am) = self.coeff_moduli();
        let half = T::lit(0.5);
        let bp = pt.b_prime;
        let rhs = match form {
            WaliShahForm::UpperRatio | WaliShahForm::UpperSqrt => {
                let lm = lm.ok_or(BoundError::NeedsLevelSet { kind })?;
                let s = lm.m1 * lm.m1 + lm.m2 * lm.m2;
                if !(s > T::zero()) {
                    return Err(BoundError::DegenerateLevelMaxima);
                }
                let coeff = if form == WaliShahForm::UpperRatio {
                    (a0 - am) / (a0 + am)
                } else {
                    if a0 == T::zero() {
                        return Err(BoundError::ZeroConstantTerm { kind });
                    }
                    (a0.sqrt() - am.sqrt()) / a0.sqrt()
                };
                let bracket = s - T::lit(2.0) * pt.value.norm_sqr() / bp * (n - m + coeff);
                half * bp * clamped_sqrt(kind, bracket, s)?
            }
            WaliShahForm::LowerRatio => half * (bp - (n - m) + (am - a0) / (am + a0)) * pt.value.norm(),
            WaliShahForm::LowerSqrt => half * (bp - (n - m) + (am.sqrt() - a0.sqrt()) / am.sqrt()) * pt.value.norm(),
        };
        Ok(BoundValue::new(kind, pt.prime.norm(), rhs, self.tol))
    }

    /// Dispatches on `kind`. Polynomial kinds are applied to the numerator.
    pub fn evaluate(
        &self,
        kind: BoundKind,
        pt: &PointData<T>,
        k: T,
        lm: Option<&LevelMaxima<T>>,
    ) -> Result<BoundValue<T>, BoundError> {
        match kind {
            BoundKind::MaxNorm(mode) => self.upper_maxnorm(pt, k, mode),
            BoundKind::LevelSet(mode) => {
                let lm = lm.ok_or(BoundError::NeedsLevelSet { kind })?;
                self.upper_levelset(pt, lm, k, mode)
            }
            BoundKind::Lower(mode) => self.lower(pt, k, mode),
            BoundKind::WaliShah(form) => self.wali_shah(pt, lm, form),
            BoundKind::Poly(mode) => {
                let pe = self.numerator_evaluator()?;
                pe.bound(pt.z, k, mode).map(|v| v.with_tolerance(self.tol))
            }
        }
    }
}

impl<T: Scalar> BoundValue<T> {
    fn with_tolerance(self, tol: T) -> Self {
        Self::new(self.kind, self.lhs, self.rhs, tol)
    }
}

/// Shared state for polynomial bounds on `P`.
#[derive(Debug, Clone)]
pub struct PolyEvaluator<T: Scalar> {
    p: Polynomial<T>,
    dp: Polynomial<T>,
    sup: T,
    sup_theta: T,
    zeros: Vec<Complex<T>>,
    tol: T,
}

impl<T: Scalar> PolyEvaluator<T> {
    pub fn new(p: Polynomial<T>) -> Result<Self, BoundError> {
        if p.is_zero() || p.degree() == 0 {
            return Err(BoundError::DegreeTooLow);
        }
        let zeros = p.roots()?;
        Self::with_zeros(p, zeros)
    }

    fn with_zeros(p: Polynomial<T>, zeros: Vec<Complex<T>>) -> Result<Self, BoundError> {
        if p.is_zero() || p.degree() == 0 {
            return Err(BoundError::DegreeTooLow);
        }
        // Same grid and refinement policy as the rational sup-norm.
        let best = circle::maximize(|theta| p.eval(unit(theta)).norm_sqr());
        Ok(Self {
            dp: p.derivative(),
            sup: best.value.sqrt(),
            sup_theta: best.theta,
            p,
            zeros,
            tol: T::lit(DEFAULT_TOL),
        })
    }

    pub fn with_tolerance(mut self, tol: T) -> Self {
        self.tol = tol;
        self
    }

    /// `M(P, 1)`.
    pub fn sup_norm(&self) -> T {
        self.sup
    }

    pub fn sup_theta(&self) -> T {
        self.sup_theta
    }

    pub fn zeros(&self) -> &[Complex<T>] {
        &self.zeros
    }

    pub fn bound(&self, z: Complex<T>, k: T, mode: PolyBound) -> Result<BoundValue<T>, BoundError> {
        if !on_unit_circle(z, T::tol(1e-12, 64.0)) {
            return Err(BoundError::OffCircle {
                modulus: f64_of(z.norm()),
            });
        }
        let kind = BoundKind::Poly(mode);
        let k = hypothesis_radius(kind, &self.zeros, k)?;
        let deg = self.p.degree();
        let n = T::from_usize_lossy(deg);
        let half = T::lit(0.5);
        let two = T::lit(2.0);
        let pa = self.p.eval(z).norm();
        let big_m = self.sup;
        let rho2 = (pa / big_m).powi(2);
        let a0 = self.p.constant_term().norm();
        let an = self.p.leading().norm();
        let rhs = match mode {
            PolyBound::ErdosLax => half * n * big_m,
            PolyBound::Turan => half * n * pa,
            PolyBound::MalikUpperRefined => {
                let inner = n * (k - T::one()) / two + coeff_ratio(a0, an, k, deg);
                half * (n - two / (k + T::one()) * inner * rho2) * big_m
            }
            PolyBound::ErdosLaxRefined => half * (n - rho2 * (a0 - an) / (a0 + an)) * big_m,
            PolyBound::TuranMalikRefined => {
                n / (k + T::one()) * (T::one() - k / n * coeff_ratio(a0, an, k, deg)) * pa
            }
            PolyBound::DubininRefined => half * n * (T::one() + (an - a0) / (an + a0) / n) * pa,
        };
        Ok(BoundValue::new(kind, self.dp.eval(z).norm(), rhs, self.tol))
    }
}

/// Upper bound in terms of `M(R, 1)` at `z`.
pub fn upper_maxnorm<T: Scalar>(
    r: &RationalFn<T>,
    z: Complex<T>,
    k: T,
    mode: MaxNormBound,
) -> Result<BoundValue<T>, BoundError> {
    let ev = BoundEvaluator::new(r)?;
    ev.upper_maxnorm(&ev.point(z)?, k, mode)
}

/// Upper bound in terms of the level-set maxima for `ls.lambda`.
pub fn upper_levelset<T: Scalar>(
    r: &RationalFn<T>,
    ls: &LevelSetData<T>,
    z: Complex<T>,
    k: T,
    mode: LevelSetBound,
) -> Result<BoundValue<T>, BoundError> {
    let ev = BoundEvaluator::new(r)?;
    let lm = ev.level_maxima(ls)?;
    ev.upper_levelset(&ev.point(z)?, &lm, k, mode)
}

pub fn lower_bound<T: Scalar>(
    r: &RationalFn<T>,
    z: Complex<T>,
    k: T,
    mode: LowerBound,
) -> Result<BoundValue<T>, BoundError> {
    let ev = BoundEvaluator::new(r)?;
    ev.lower(&ev.point(z)?, k, mode)
}

pub fn poly_bound<T: Scalar>(p: &Polynomial<T>, z: Complex<T>, k: T, mode: PolyBound) -> Result<BoundValue<T>, BoundError> {
    PolyEvaluator::new(p.clone())?.bound(z, k, mode)
}

/// The `k = 1` coefficient forms. `ls` is only read by the upper variants.
pub fn wali_shah_forms<T: Scalar>(
    r: &RationalFn<T>,
    ls: &LevelSetData<T>,
    z: Complex<T>,
    variant: WaliShahForm,
) -> Result<BoundValue<T>, BoundError> {
    let ev = BoundEvaluator::new(r)?;
    let lm = ev.level_maxima(ls)?;
    ev.wali_shah(&ev.point(z)?, Some(&lm), variant)
}

/// `(Σ (1 - x_j)/(1 + x_j), (1 - ∏ x_j)/(1 + ∏ x_j))`.
///
/// The first dominates when every `x_j ∈ [0, 1]`; the order reverses when
/// every `x_j >= 1`.
pub fn product_ratio_gap<T: Scalar>(xs: &[T]) -> Result<(T, T), BoundError> {
    if let Some((index, &x)) = xs.iter().enumerate().find(|(_, &x)| x < T::zero()) {
        return Err(BoundError::NegativeInput {
            index,
            value: f64_of(x),
        });
    }
    let lhs = xs
        .iter()
        .map(|&x| (T::one() - x) / (T::one() + x))
        .fold(T::zero(), |acc, v| acc + v);
    let prod = xs.iter().fold(T::one(), |acc, &x| acc * x);
    Ok((lhs, (T::one() - prod) / (T::one() + prod)))
}
