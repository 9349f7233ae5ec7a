//! Pole-side machinery: `W`, the finite Blaschke product `B`, its
//! derivative, and the level sets `B(z) = ±λ` with their weights.
//!
//! Conditioning degrades as poles approach the unit circle (terms like
//! `1/|z - a|^2` blow up); the type accepts any `|a| > 1`.

use num_complex::Complex;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::{PolyError, Polynomial};
use crate::scalar::{arg_2pi, on_unit_circle, unit, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BlaschkeError {
    #[error("a pole set needs at least one pole")]
    Empty,
    #[error("pole {index} has modulus {modulus} but poles must lie outside the closed unit disk")]
    PoleNotOutside { index: usize, modulus: f64 },
    #[error("evaluation at pole {index}")]
    AtPole { index: usize },
    #[error("B'(z) is singular at z = 1/conj(a_{index})")]
    Singular { index: usize },
    #[error("point has modulus {modulus}, expected a point on the unit circle")]
    OffCircle { modulus: f64 },
    #[error("level-set root {index} is {distance:e} off the unit circle")]
    LevelSetOffCircle { index: usize, distance: f64 },
    #[error("level-set roots {i} and {j} coincide to within {distance:e}")]
    LevelSetNotSimple { i: usize, j: usize, distance: f64 },
    #[error("level-set data was built for a different pole set")]
    PoleSetMismatch,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoleSet<T: Scalar> {
    poles: Vec<Complex<T>>,
    /// `W(z) = ∏(z - a_j)`.
    denominator: Polynomial<T>,
    /// `∏(1 - conj(a_j) z)`, the numerator of `B`.
    blaschke_numerator: Polynomial<T>,
}

fn to_f64<T: Scalar>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

impl<T: Scalar> PoleSet<T> {
    pub fn new(poles: Vec<Complex<T>>) -> Result<Self, BlaschkeError> {
        if poles.is_empty() {
            return Err(BlaschkeError::Empty);
        }
        if let Some((index, a)) = poles.iter().enumerate().find(|(_, a)| !(a.norm() > T::one())) {
            return Err(BlaschkeError::PoleNotOutside {
                index,
                modulus: to_f64(a.norm()),
            });
        }
        let one = Complex::<T>::one();
        let mut denominator = Polynomial::constant(one);
        let mut blaschke_numerator = Polynomial::constant(one);
        for &a in &poles {
            denominator = &denominator * &Polynomial::from_coeffs(vec![-a, one]);
            blaschke_numerator = &blaschke_numerator * &Polynomial::from_coeffs(vec![one, -a.conj()]);
        }
        Ok(Self {
            poles,
            denominator,
            blaschke_numerator,
        })
    }

    /// `n` copies of the real pole `a`.
    pub fn repeated(a: T, n: usize) -> Result<Self, BlaschkeError> {
        Self::new(vec![Complex::new(a, T::zero()); n])
    }

    pub fn poles(&self) -> &[Complex<T>] {
        &self.poles
    }

    pub fn n(&self) -> usize {
        self.poles.len()
    }

    pub fn denominator(&self) -> &Polynomial<T> {
        &self.denominator
    }

    pub fn blaschke_numerator(&self) -> &Polynomial<T> {
        &self.blaschke_numerator
    }

    /// `W(z)`; zero exactly at the poles.
    pub fn w_eval(&self, z: Complex<T>) -> Complex<T> {
        self.poles.iter().fold(Complex::<T>::one(), |acc, &a| acc * (z - a))
    }

    fn pole_at(&self, z: Complex<T>) -> Option<usize> {
        self.poles.iter().position(|&a| z == a)
    }

    pub fn b_eval(&self, z: Complex<T>) -> Result<Complex<T>, BlaschkeError> {
        if let Some(index) = self.pole_at(z) {
            return Err(BlaschkeError::AtPole { index });
        }
        Ok(self
            .poles
            .iter()
            .fold(Complex::<T>::one(), |acc, &a| acc * (Complex::<T>::one() - a.conj() * z) / (z - a)))
    }

    /// `B'(z)` through the logarithmic derivative.
    pub fn b_prime(&self, z: Complex<T>) -> Result<Complex<T>, BlaschkeError> {
        let b = self.b_eval(z)?;
        let mut sum = Complex::zero();
        for (index, &a) in self.poles.iter().enumerate() {
            let num = Complex::<T>::one() - a.conj() * z;
            if num.is_zero() {
                return Err(BlaschkeError::Singular { index });
            }
            sum = sum - a.conj() / num - (z - a).inv();
        }
        Ok(b * sum)
    }

    fn check_circle(&self, z: Complex<T>) -> Result<(), BlaschkeError> {
        if on_unit_circle(z, T::tol(1e-12, 64.0)) {
            Ok(())
        } else {
            Err(BlaschkeError::OffCircle {
                modulus: to_f64(z.norm()),
            })
        }
    }

    /// `|B'(z)| = Σ (|a_j|^2 - 1)/|z - a_j|^2` for `|z| = 1`.
    pub fn b_prime_modulus(&self, z: Complex<T>) -> Result<T, BlaschkeError> {
        self.check_circle(z)?;
        Ok(self.b_prime_modulus_unchecked(z))
    }

    pub(crate) fn b_prime_modulus_unchecked(&self, z: Complex<T>) -> T {
        self.poles
            .iter()
            .map(|&a| (a.norm_sqr() - T::one()) / (z - a).norm_sqr())
            .fold(T::zero(), |acc, x| acc + x)
    }

    /// `Re(z W'(z)/W(z))` on the unit circle, from `Σ Re(z/(z - a_j))`.
    pub fn re_zw_ratio(&self, z: Complex<T>) -> Result<T, BlaschkeError> {
        self.check_circle(z)?;
        Ok(self
            .poles
            .iter()
            .map(|&a| (z / (z - a)).re)
            .fold(T::zero(), |acc, x| acc + x))
    }

    /// The `n` solutions of `B(z) = λ`, on the unit circle, sorted by
    /// argument in `[0, 2π)`.
    pub fn level_set_roots(&self, lambda: Complex<T>) -> Result<Vec<Complex<T>>, BlaschkeError> {
        self.check_circle(lambda)?;
        let f = &self.blaschke_numerator - &self.denominator.scale(lambda);
        assert!(
            f.degree() == self.n() && f.leading().norm() > T::zero(),
            "level-set equation lost degree: |∏ a_j| > 1 rules this out"
        );
        let df = f.derivative();
        let mut roots = f.roots()?;
        let off_tol = T::tol(1e-8, 1e2);
        for (index, z) in roots.iter_mut().enumerate() {
            for _ in 0..3 {
                let d = df.eval(*z);
                if d.is_zero() {
                    break;
                }
                *z = *z - f.eval(*z) / d;
            }
            let r = z.norm();
            if (r - T::one()).abs() > off_tol {
                return Err(BlaschkeError::LevelSetOffCircle {
                    index,
                    distance: to_f64((r - T::one()).abs()),
                });
            }
            *z = *z / r;
        }
        roots.sort_by(|a, b| arg_2pi(*a).partial_cmp(&arg_2pi(*b)).unwrap_or(std::cmp::Ordering::Equal));
        let simple_tol = T::tol(1e-8, 1e2);
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                let d = (roots[i] - roots[j]).norm();
                if d <= simple_tol {
                    return Err(BlaschkeError::LevelSetNotSimple {
                        i,
                        j,
                        distance: to_f64(d),
                    });
                }
            }
        }
        Ok(roots)
    }

    /// Weights `C_j` with `1/C_j = Σ_ν (|a_ν|^2 - 1)/|t_j - a_ν|^2`.
    pub fn c_weights(&self, t: &[Complex<T>]) -> Result<Vec<T>, BlaschkeError> {
        t.iter()
            .map(|&tj| {
                if !on_unit_circle(tj, T::tol(1e-10, 1e3)) {
                    return Err(BlaschkeError::OffCircle {
                        modulus: to_f64(tj.norm()),
                    });
                }
                if let Some(index) = self.pole_at(tj) {
                    return Err(BlaschkeError::AtPole { index });
                }
                Ok(self.b_prime_modulus_unchecked(tj).recip())
            })
            .collect()
    }
}

/// `count` equispaced unimodular values `e^{2πiq/count}`, starting at 1.
pub fn lambda_sweep<T: Scalar>(count: usize) -> Vec<Complex<T>> {
    let step = T::TAU() / T::from_usize_lossy(count.max(1));
    (0..count).map(|q| unit(step * T::from_usize_lossy(q))).collect()
}

/// Level-set data for one `λ`: roots of `B = λ` and `B = -λ`, and the
/// weights attached to the former.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSetData<T: Scalar> {
    pub lambda: Complex<T>,
    pub t: Vec<Complex<T>>,
    pub s: Vec<Complex<T>>,
    pub c_weights: Vec<T>,
    poles: Vec<Complex<T>>,
}

impl<T: Scalar> LevelSetData<T> {
    pub fn new(ps: &PoleSet<T>, lambda: Complex<T>) -> Result<Self, BlaschkeError> {
        let t = ps.level_set_roots(lambda)?;
        let s = ps.level_set_roots(-lambda)?;
        let c_weights = ps.c_weights(&t)?;
        Ok(Self {
            lambda,
            t,
            s,
            c_weights,
            poles: ps.poles.clone(),
        })
    }

    pub fn belongs_to(&self, ps: &PoleSet<T>) -> bool {
        self.poles == ps.poles
    }

    /// `Σ_j C_j |(B(z) - λ)/(z - t_j)|^2`, the right side of the `z B'/B`
    /// expansion. `z` must differ from every `t_j`.
    pub fn weighted_kernel_sum(&self, b_at_z: Complex<T>, z: Complex<T>) -> T {
        let num = (b_at_z - self.lambda).norm_sqr();
        self.t
            .iter()
            .zip(&self.c_weights)
            .map(|(&tj, &cj)| cj * num / (z - tj).norm_sqr())
            .fold(T::zero(), |acc, x| acc + x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn ps(poles: &[C]) -> PoleSet<f64> {
        PoleSet::new(poles.to_vec()).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert_eq!(PoleSet::<f64>::new(vec![]), Err(BlaschkeError::Empty));
        assert!(matches!(
            PoleSet::new(vec![c(2.0, 0.0), c(0.0, 1.0)]),
            Err(BlaschkeError::PoleNotOutside { index: 1, .. })
        ));
        assert!(matches!(
            PoleSet::new(vec![c(0.5, 0.0)]),
            Err(BlaschkeError::PoleNotOutside { index: 0, .. })
        ));
    }

    #[test]
    fn w_examples() {
        let p = ps(&[c(2.0, 0.0)]);
        assert_eq!(p.w_eval(c(1.0, 0.0)), c(-1.0, 0.0));
        assert_eq!(p.w_eval(c(2.0, 0.0)), c(0.0, 0.0));
        let p = ps(&[c(2.0, 0.0), c(0.0, 3.0)]);
        assert_eq!(p.w_eval(c(0.0, 0.0)), c(0.0, 6.0));
        assert_eq!(p.denominator().eval(c(0.0, 0.0)), c(0.0, 6.0));
    }

    #[test]
    fn b_examples() {
        let p = ps(&[c(2.0, 0.0)]);
        assert_eq!(p.b_eval(c(1.0, 0.0)).unwrap(), c(1.0, 0.0));
        let bi = p.b_eval(c(0.0, 1.0)).unwrap();
        assert!((bi - c(-0.8, 0.6)).norm() < 1e-15);
        assert!((bi.norm() - 1.0).abs() < 1e-15);
        let b0 = p.b_eval(c(0.0, 0.0)).unwrap();
        assert!((b0 - c(-0.5, 0.0)).norm() < 1e-15);
        assert_eq!(p.b_eval(c(2.0, 0.0)), Err(BlaschkeError::AtPole { index: 0 }));
    }

    #[test]
    fn b_prime_modulus_examples() {
        let p = ps(&[c(2.0, 0.0)]);
        assert!((p.b_prime_modulus(c(1.0, 0.0)).unwrap() - 3.0).abs() < 1e-15);
        assert!((p.b_prime_modulus(c(0.0, 1.0)).unwrap() - 0.6).abs() < 1e-15);
        assert!(matches!(p.b_prime_modulus(c(0.5, 0.0)), Err(BlaschkeError::OffCircle { .. })));
        // Finite-difference cross-check of |B'(1)| = 3.
        let h = 1e-6;
        let z = c(1.0, 0.0);
        let fd = (p.b_eval(z + h).unwrap() - p.b_eval(z - h).unwrap()) / (2.0 * h);
        assert!((fd.norm() - 3.0).abs() < 1e-8);
    }

    #[test]
    fn b_prime_modulus_tends_to_degree_as_pole_recedes() {
        let z = c(0.6, 0.8);
        let mut last = f64::INFINITY;
        for a in [10.0, 100.0, 1000.0] {
            let v = ps(&[c(a, 0.0)]).b_prime_modulus(z).unwrap();
            assert!((v - 1.0).abs() < (last - 1.0).abs());
            last = v;
        }
        assert!((last - 1.0).abs() < 2e-3);
    }

    #[test]
    fn b_prime_examples() {
        let p = ps(&[c(2.0, 0.0)]);
        assert!((p.b_prime(c(1.0, 0.0)).unwrap().norm() - 3.0).abs() < 1e-14);
        assert!((p.b_prime(c(0.0, 1.0)).unwrap().norm() - 0.6).abs() < 1e-14);
        let p = ps(&[c(2.0, 0.0), c(3.0, 0.0)]);
        assert!((p.b_prime(c(1.0, 0.0)).unwrap().norm() - 5.0).abs() < 1e-14);
        assert!((p.b_prime_modulus(c(1.0, 0.0)).unwrap() - 5.0).abs() < 1e-14);
        assert_eq!(
            ps(&[c(2.0, 0.0)]).b_prime(c(0.5, 0.0)),
            Err(BlaschkeError::Singular { index: 0 })
        );
    }

    #[test]
    fn level_set_examples() {
        let p = ps(&[c(2.0, 0.0)]);
        let t = p.level_set_roots(c(1.0, 0.0)).unwrap();
        assert_eq!(t.len(), 1);
        assert!((t[0] - c(1.0, 0.0)).norm() < 1e-14);
        let s = p.level_set_roots(c(-1.0, 0.0)).unwrap();
        assert!((s[0] - c(-1.0, 0.0)).norm() < 1e-14);

        let p = ps(&[c(2.0, 0.0), c(2.0, 0.0)]);
        let t = p.level_set_roots(c(1.0, 0.0)).unwrap();
        assert_eq!(t.len(), 2);
        for &z in &t {
            assert!((z.norm() - 1.0).abs() < 1e-15);
            assert!((p.b_eval(z).unwrap() - c(1.0, 0.0)).norm() <= 1e-9);
        }
        assert!(arg_2pi(t[0]) < arg_2pi(t[1]));
        assert!(matches!(p.level_set_roots(c(2.0, 0.0)), Err(BlaschkeError::OffCircle { .. })));
    }

    #[test]
    fn c_weight_examples() {
        let p = ps(&[c(2.0, 0.0)]);
        let w = p.c_weights(&[c(1.0, 0.0)]).unwrap();
        assert!((w[0] - 1.0 / 3.0).abs() < 1e-15);
        // At z = i: (1/3) |B(i) - 1|^2 / |i - 1|^2 = (1/3)(18/5)/2 = 3/5.
        let ls = LevelSetData::new(&p, c(1.0, 0.0)).unwrap();
        let z = c(0.0, 1.0);
        let v = ls.weighted_kernel_sum(p.b_eval(z).unwrap(), z);
        assert!((v - 0.6).abs() < 1e-15);

        let p = ps(&[c(2.0, 0.0), c(3.0, 0.0)]);
        let ls = LevelSetData::new(&p, c(1.0, 0.0)).unwrap();
        let v = ls.weighted_kernel_sum(p.b_eval(z).unwrap(), z);
        assert!((v - p.b_prime_modulus(z).unwrap()).abs() < 1e-8);
        assert!(ls.c_weights.iter().all(|&w| w > 0.0));
        assert!(matches!(p.c_weights(&[c(0.5, 0.0)]), Err(BlaschkeError::OffCircle { .. })));
    }

    #[test]
    fn re_zw_examples() {
        let p = ps(&[c(2.0, 0.0)]);
        for (z, expect) in [(c(1.0, 0.0), -1.0), (c(0.0, 1.0), 0.2)] {
            let v = p.re_zw_ratio(z).unwrap();
            assert!((v - expect).abs() < 1e-15);
            assert!((v - (1.0 - p.b_prime_modulus(z).unwrap()) / 2.0).abs() < 1e-15);
        }
        let p = ps(&[c(10.0, 0.0)]);
        let v = p.re_zw_ratio(c(1.0, 0.0)).unwrap();
        assert!((v + 1.0 / 9.0).abs() < 1e-15);
        assert!((v - (1.0 - 99.0 / 81.0) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn lambda_sweep_is_unimodular() {
        let l: Vec<C> = lambda_sweep(16);
        assert_eq!(l.len(), 16);
        assert_eq!(l[0], c(1.0, 0.0));
        assert!((l[8] - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn mismatched_pole_sets() {
        let a = ps(&[c(2.0, 0.0)]);
        let b = ps(&[c(3.0, 0.0)]);
        let ls = LevelSetData::new(&a, c(1.0, 0.0)).unwrap();
        assert!(ls.belongs_to(&a));
        assert!(!ls.belongs_to(&b));
    }
}
