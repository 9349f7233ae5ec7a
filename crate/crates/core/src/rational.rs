//! `R = P/W` with `deg P <= n`: evaluation, derivative, the conjugate
//! transform on the circle, sup-norm, and level-set maxima.

use num_complex::Complex;
use thiserror::Error;

use crate::blaschke::{BlaschkeError, LevelSetData, PoleSet};
use crate::circle;
use crate::poly::{PolyError, Polynomial};
use crate::scalar::{on_unit_circle, unit, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RationalError {
    #[error("numerator is identically zero")]
    ZeroNumerator,
    #[error("numerator degree {m} exceeds the number of poles {n}")]
    DegreeExceedsPoles { m: usize, n: usize },
    #[error("numerator vanishes at pole {index} (common factor)")]
    CommonFactor { index: usize },
    #[error("evaluation at pole {index}")]
    AtPole { index: usize },
    #[error("point has modulus {modulus}, expected a point on the unit circle")]
    OffCircle { modulus: f64 },
    #[error("level-set data was built for a different pole set")]
    PoleSetMismatch,
    #[error(transparent)]
    Blaschke(#[from] BlaschkeError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RationalFn<T: Scalar> {
    numerator: Polynomial<T>,
    poles: PoleSet<T>,
    numerator_prime: Polynomial<T>,
    denominator_prime: Polynomial<T>,
}

/// `M(R, 1)` and where it is attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupNormResult<T> {
    pub value: T,
    pub arg_theta: T,
    pub samples_used: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelMaxima<T> {
    /// `max |R(t_j)|` over the roots of `B = λ`.
    pub m1: T,
    /// `max |R(s_j)|` over the roots of `B = -λ`.
    pub m2: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroData<T: Scalar> {
    pub zeros: Vec<Complex<T>>,
    pub m: usize,
    /// `+∞` when `m = 0`.
    pub min_modulus: T,
    /// `0` when `m = 0`.
    pub max_modulus: T,
}

impl<T: Scalar> RationalFn<T> {
    pub fn new(numerator: Polynomial<T>, poles: PoleSet<T>) -> Result<Self, RationalError> {
        if numerator.is_zero() {
            return Err(RationalError::ZeroNumerator);
        }
        let (m, n) = (numerator.degree(), poles.n());
        if m > n {
            return Err(RationalError::DegreeExceedsPoles { m, n });
        }
        let tol = T::tol(1e-12, 16.0);
        for (index, &a) in poles.poles().iter().enumerate() {
            let scale = numerator
                .coeffs()
                .iter()
                .rev()
                .fold(T::zero(), |acc, c| acc * a.norm() + c.norm());
            if numerator.eval(a).norm() <= tol * scale {
                return Err(RationalError::CommonFactor { index });
            }
        }
        let numerator_prime = numerator.derivative();
        let denominator_prime = poles.denominator().derivative();
        Ok(Self {
            numerator,
            poles,
            numerator_prime,
            denominator_prime,
        })
    }

    /// `R = B`, the Blaschke product itself.
    pub fn blaschke(poles: PoleSet<T>) -> Result<Self, RationalError> {
        let numerator = poles.blaschke_numerator().clone();
        Self::new(numerator, poles)
    }

    /// `R = B + λ`.
    pub fn blaschke_plus(poles: PoleSet<T>, lambda: Complex<T>) -> Result<Self, RationalError> {
        let numerator = poles.blaschke_numerator() + &poles.denominator().scale(lambda);
        Self::new(numerator, poles)
    }

    pub fn numerator(&self) -> &Polynomial<T> {
        &self.numerator
    }

    pub fn poles(&self) -> &PoleSet<T> {
        &self.poles
    }

    /// `m = deg P`.
    pub fn m(&self) -> usize {
        self.numerator.degree()
    }

    pub fn n(&self) -> usize {
        self.poles.n()
    }

    fn check_pole(&self, z: Complex<T>) -> Result<(), RationalError> {
        match self.poles.poles().iter().position(|&a| a == z) {
            Some(index) => Err(RationalError::AtPole { index }),
            None => Ok(()),
        }
    }

    pub fn eval(&self, z: Complex<T>) -> Result<Complex<T>, RationalError> {
        self.check_pole(z)?;
        Ok(self.numerator.eval(z) / self.poles.w_eval(z))
    }

    /// `R'(z) = (P'W - PW')/W^2`.
    pub fn eval_prime(&self, z: Complex<T>) -> Result<Complex<T>, RationalError> {
        self.check_pole(z)?;
        let w = self.poles.w_eval(z);
        let num = self.numerator_prime.eval(z) * w - self.numerator.eval(z) * self.denominator_prime.eval(z);
        Ok(num / (w * w))
    }

    /// `|(R*)'(z)| = | |B'(z)| R(z) - z R'(z) |` for `|z| = 1`, where
    /// `R*(z) = B(z) conj(R(1/conj z))`.
    pub fn conj_transform_prime_modulus(&self, z: Complex<T>) -> Result<T, RationalError> {
        if !on_unit_circle(z, T::tol(1e-12, 64.0)) {
            return Err(RationalError::OffCircle {
                modulus: z.norm().to_f64().unwrap_or(f64::NAN),
            });
        }
        let bp = self.poles.b_prime_modulus_unchecked(z);
        Ok((self.eval(z)? * bp - z * self.eval_prime(z)?).norm())
    }

    /// `M(R, 1)` by grid search plus golden-section refinement of `|R|^2`.
    pub fn sup_norm_circle(&self) -> SupNormResult<T> {
        let best = circle::maximize(|theta| {
            let z = unit(theta);
            (self.numerator.eval(z) / self.poles.w_eval(z)).norm_sqr()
        });
        SupNormResult {
            value: best.value.sqrt(),
            arg_theta: best.theta,
            samples_used: best.evaluations,
        }
    }

    pub fn level_maxima(&self, ls: &LevelSetData<T>) -> Result<LevelMaxima<T>, RationalError> {
        if !ls.belongs_to(&self.poles) {
            return Err(RationalError::PoleSetMismatch);
        }
        let max_abs = |pts: &[Complex<T>]| -> Result<T, RationalError> {
            pts.iter()
                .map(|&p| self.eval(p).map(|v| v.norm()))
                .try_fold(T::zero(), |acc, v| v.map(|v| acc.max(v)))
        };
        Ok(LevelMaxima {
            m1: max_abs(&ls.t)?,
            m2: max_abs(&ls.s)?,
        })
    }

    pub fn zero_data(&self) -> Result<ZeroData<T>, RationalError> {
        let zeros = self.numerator.roots()?;
        let min_modulus = zeros.iter().map(|b| b.norm()).fold(T::infinity(), T::min);
        let max_modulus = zeros.iter().map(|b| b.norm()).fold(T::zero(), T::max);
        Ok(ZeroData {
            m: zeros.len(),
            zeros,
            min_modulus,
            max_modulus,
        })
    }

    /// `α_0`, `α_m` of the numerator.
    pub fn end_coefficients(&self) -> (Complex<T>, Complex<T>) {
        (self.numerator.constant_term(), self.numerator.leading())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn rf(num: &[f64], poles: &[C]) -> RationalFn<f64> {
        RationalFn::new(
            Polynomial::from_real_coeffs(num),
            PoleSet::new(poles.to_vec()).unwrap(),
        )
        .unwrap()
    }

    /// `R*(e^{iθ}) = B(z) conj(R(1/conj z))`, built from its definition.
    fn conj_transform_direct(r: &RationalFn<f64>, theta: f64) -> C {
        let z = unit(theta);
        let reflected = C::new(1.0, 0.0) / z.conj();
        r.poles().b_eval(z).unwrap() * r.eval(reflected).unwrap().conj()
    }

    /// `|d/dθ R*(e^{iθ})| = |(R*)'(z)|`, central differences.
    fn conj_transform_prime_fd(r: &RationalFn<f64>, theta: f64) -> f64 {
        let h = 1e-5;
        ((conj_transform_direct(r, theta + h) - conj_transform_direct(r, theta - h)) / (2.0 * h)).norm()
    }

    #[test]
    fn construction_errors() {
        let poles = PoleSet::new(vec![c(2.0, 0.0)]).unwrap();
        assert_eq!(
            RationalFn::new(Polynomial::zero(), poles.clone()),
            Err(RationalError::ZeroNumerator)
        );
        assert_eq!(
            RationalFn::new(Polynomial::monomial(2), poles.clone()),
            Err(RationalError::DegreeExceedsPoles { m: 2, n: 1 })
        );
        assert_eq!(
            RationalFn::new(Polynomial::from_real_coeffs(&[-2.0, 1.0]), poles),
            Err(RationalError::CommonFactor { index: 0 })
        );
    }

    #[test]
    fn eval_examples() {
        let p2 = [c(2.0, 0.0)];
        let r = rf(&[1.0, 1.0], &p2);
        assert_eq!(r.eval(c(1.0, 0.0)).unwrap(), c(-2.0, 0.0));
        assert_eq!(rf(&[1.0], &p2).eval(c(1.0, 0.0)).unwrap(), c(-1.0, 0.0));
        assert_eq!(rf(&[0.0, 1.0], &p2).eval(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert_eq!(r.eval(c(2.0, 0.0)), Err(RationalError::AtPole { index: 0 }));
    }

    #[test]
    fn eval_prime_examples() {
        let p2 = [c(2.0, 0.0)];
        let one = c(1.0, 0.0);
        assert_eq!(rf(&[1.0, 1.0], &p2).eval_prime(one).unwrap(), c(-3.0, 0.0));
        assert_eq!(rf(&[0.0, 1.0], &p2).eval_prime(one).unwrap(), c(-2.0, 0.0));
        let r = rf(&[1.0], &p2);
        let h = 1e-5;
        let fd = (r.eval(one + h).unwrap() - r.eval(one - h).unwrap()) / (2.0 * h);
        assert!((fd - r.eval_prime(one).unwrap()).norm() < 1e-8);
        assert!((r.eval_prime(one).unwrap().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn conj_transform_examples() {
        let p2 = [c(2.0, 0.0)];
        let one = c(1.0, 0.0);
        let r = rf(&[1.0, 1.0], &p2);
        assert!((r.conj_transform_prime_modulus(one).unwrap() - 3.0).abs() < 1e-14);
        assert!((conj_transform_prime_fd(&r, 0.0) - 3.0).abs() < 1e-8);

        // R = 1/(z - 2): R* = z/(z - 2), so |(R*)'(1)| = 2.
        let r = rf(&[1.0], &p2);
        assert!((r.conj_transform_prime_modulus(one).unwrap() - 2.0).abs() < 1e-14);
        assert!((conj_transform_prime_fd(&r, 0.0) - 2.0).abs() < 1e-8);

        assert!(matches!(
            r.conj_transform_prime_modulus(c(0.5, 0.0)),
            Err(RationalError::OffCircle { .. })
        ));
    }

    #[test]
    fn conj_transform_of_blaschke_vanishes() {
        let poles = PoleSet::new(vec![c(2.0, 0.5), c(-1.5, 1.0)]).unwrap();
        let r = RationalFn::blaschke(poles).unwrap();
        for i in 0..16 {
            let th = i as f64 * 0.39 + 0.1;
            let v = r.conj_transform_prime_modulus(unit(th)).unwrap();
            assert!(v < 1e-12, "{v}");
            assert!(conj_transform_prime_fd(&r, th) < 1e-8);
        }
    }

    #[test]
    fn conj_transform_matches_finite_differences() {
        let r = rf(&[0.5, -1.0, 0.25], &[c(1.3, 0.4), c(-2.0, 1.0)]);
        for i in 0..32 {
            let th = i as f64 * std::f64::consts::TAU / 32.0;
            let a = r.conj_transform_prime_modulus(unit(th)).unwrap();
            assert!((a - conj_transform_prime_fd(&r, th)).abs() < 1e-6);
        }
    }

    fn dense_grid_max(r: &RationalFn<f64>, samples: usize) -> f64 {
        (0..samples)
            .map(|i| r.eval(unit(i as f64 * std::f64::consts::TAU / samples as f64)).unwrap().norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn sup_norm_examples() {
        let p2 = [c(2.0, 0.0)];
        for (num, expect) in [(&[1.0][..], 1.0), (&[1.0, 1.0][..], 2.0), (&[0.0, 1.0][..], 1.0)] {
            let r = rf(num, &p2);
            let s = r.sup_norm_circle();
            assert!((s.value - expect).abs() <= 1e-12 * expect, "{num:?} {s:?}");
            let dist = s.arg_theta.min(std::f64::consts::TAU - s.arg_theta);
            assert!(dist < 1e-6, "{s:?}");
            assert!(s.value >= dense_grid_max(&r, 100_000));
            assert!(s.samples_used > circle::GRID_SAMPLES);
        }
    }

    #[test]
    fn level_maxima_examples() {
        let p2 = PoleSet::new(vec![c(2.0, 0.0)]).unwrap();
        let ls = LevelSetData::new(&p2, c(1.0, 0.0)).unwrap();
        let lm = rf(&[1.0, 1.0], &[c(2.0, 0.0)]).level_maxima(&ls).unwrap();
        assert!((lm.m1 - 2.0).abs() < 1e-14 && lm.m2.abs() < 1e-14);
        let lm = rf(&[1.0], &[c(2.0, 0.0)]).level_maxima(&ls).unwrap();
        assert!((lm.m1 - 1.0).abs() < 1e-14 && (lm.m2 - 1.0 / 3.0).abs() < 1e-14);

        let other = PoleSet::new(vec![c(3.0, 0.0)]).unwrap();
        let ls_other = LevelSetData::new(&other, c(1.0, 0.0)).unwrap();
        assert_eq!(
            rf(&[1.0], &[c(2.0, 0.0)]).level_maxima(&ls_other),
            Err(RationalError::PoleSetMismatch)
        );
    }

    #[test]
    fn zero_data_examples() {
        let p = [c(2.0, 0.0), c(0.0, 3.0)];
        let z = rf(&[1.0, 1.0], &p).zero_data().unwrap();
        assert_eq!(z.m, 1);
        assert!((z.min_modulus - 1.0).abs() < 1e-15 && (z.max_modulus - 1.0).abs() < 1e-15);
        let z = rf(&[0.0, 0.0, 1.0], &p).zero_data().unwrap();
        assert_eq!((z.m, z.min_modulus, z.max_modulus), (2, 0.0, 0.0));
        let z = rf(&[-2.0, 0.0, 2.0], &p).zero_data().unwrap();
        assert_eq!(z.m, 2);
        let back = Polynomial::from_roots(c(2.0, 0.0), &z.zeros).unwrap();
        assert!((back.coeff(0) - c(-2.0, 0.0)).norm() < 1e-12);
        assert!(back.coeff(1).norm() < 1e-12);
        let z = rf(&[3.0], &p).zero_data().unwrap();
        assert_eq!(z.m, 0);
        assert!(z.min_modulus.is_infinite());
    }

    #[test]
    fn blaschke_plus_lambda_zeros_on_circle() {
        let poles = PoleSet::new(vec![c(2.0, 0.0), c(3.0, 0.0)]).unwrap();
        let r = RationalFn::blaschke_plus(poles, c(1.0, 0.0)).unwrap();
        assert_eq!(r.m(), 2);
        let z = r.zero_data().unwrap();
        assert!((z.min_modulus - 1.0).abs() < 1e-12 && (z.max_modulus - 1.0).abs() < 1e-12);
    }
}
