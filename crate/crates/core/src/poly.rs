//! Dense complex polynomials in ascending-power coefficient form.
//!
//! Coefficients are never trimmed by magnitude: only exact zeros at the top
//! are removed, because the degree `m` of a numerator enters the bounds
//! through `n - m`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::Zero;
use thiserror::Error;

use crate::scalar::Scalar;

pub const MAX_ROOT_ITERATIONS: usize = 200;
/// Roots closer than this (relative) are candidates for a multiple root.
const CLUSTER_RADIUS: f64 = 1e-2;
const CLUSTER_NOISE_FACTOR: f64 = 1e3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("leading coefficient must be nonzero")]
    ZeroLeading,
    #[error("the zero polynomial has no well-defined roots")]
    ZeroPolynomial,
    #[error("root finder did not converge after {iterations} iterations (max residual {max_residual:e})")]
    NoConvergence {
        iterations: usize,
        max_residual: f64,
        best: Vec<Complex<f64>>,
        residuals: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T: Scalar> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Scalar> Polynomial<T> {
    /// Builds from ascending coefficients, stripping exact trailing zeros.
    ///
    /// An empty list (or one of zeros) gives the zero polynomial.
    pub fn from_coeffs(coeffs: Vec<Complex<T>>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real_coeffs(coeffs: &[T]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Complex::new(c, T::zero())).collect())
    }

    /// `leading * prod (z - root)`.
    pub fn from_roots(leading: Complex<T>, roots: &[Complex<T>]) -> Result<Self, PolyError> {
        if leading.is_zero() {
            return Err(PolyError::ZeroLeading);
        }
        let mut coeffs = vec![leading];
        for &r in roots {
            // Multiply by (z - r).
            coeffs.push(Complex::zero());
            for j in (1..coeffs.len()).rev() {
                coeffs[j] = coeffs[j - 1] - r * coeffs[j];
            }
            coeffs[0] = -r * coeffs[0];
        }
        Ok(Self::from_coeffs(coeffs))
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex<T>) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The monomial `z^power`.
    pub fn monomial(power: usize) -> Self {
        let mut coeffs = vec![Complex::zero(); power + 1];
        coeffs[power] = Complex::new(T::one(), T::zero());
        Self { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Index of the last nonzero coefficient; `0` for constants and for the
    /// zero polynomial (check [`is_zero`](Self::is_zero) to tell them apart).
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// Coefficient of `z^j`, zero beyond the degree.
    pub fn coeff(&self, j: usize) -> Complex<T> {
        self.coeffs.get(j).copied().unwrap_or_else(Complex::zero)
    }

    /// `α_0`.
    pub fn constant_term(&self) -> Complex<T> {
        self.coeff(0)
    }

    /// `α_m`, zero for the zero polynomial.
    pub fn leading(&self) -> Complex<T> {
        self.coeffs.last().copied().unwrap_or_else(Complex::zero)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::zero(), |acc, &c| acc * z + c)
    }

    /// Value together with a bound on the Horner rounding error at `z`.
    fn eval_with_noise(&self, z: Complex<T>) -> (Complex<T>, T) {
        let r = z.norm();
        let mut acc = Complex::zero();
        let mut mag = T::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
            mag = mag * r + c.norm();
        }
        let m = T::from_usize_lossy(self.coeffs.len().max(1));
        (acc, T::lit(8.0) * m * T::epsilon() * mag)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, &c)| c * T::from_usize_lossy(j))
            .collect();
        Self::from_coeffs(coeffs)
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// All `m` roots, with multiplicity, by Aberth-Ehrlich iteration.
    ///
    /// Exact zero roots (vanishing low-order coefficients) are split off
    /// first. A nonzero constant has no roots.
    pub fn roots(&self) -> Result<Vec<Complex<T>>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let zeros_at_origin = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        let reduced = Self {
            coeffs: self.coeffs[zeros_at_origin..].to_vec(),
        };
        let mut roots = vec![Complex::zero(); zeros_at_origin];
        let mut found = reduced.aberth()?;
        reduced.merge_clusters(&mut found);
        roots.extend(found);
        Ok(roots)
    }

    /// Replaces tight clusters that form a numerically multiple root by that
    /// root, found as a simple zero of the `(s-1)`-th derivative.
    ///
    /// A cluster is accepted only if every lower derivative vanishes at the
    /// refined centre to rounding level; otherwise the roots are left alone.
    fn merge_clusters(&self, roots: &mut [Complex<T>]) {
        let m = roots.len();
        if m < 2 {
            return;
        }
        let radius = T::lit(CLUSTER_RADIUS);
        let mut group: Vec<usize> = (0..m).collect();
        for i in 0..m {
            for j in 0..i {
                let scale = T::one() + roots[i].norm().max(roots[j].norm());
                if (roots[i] - roots[j]).norm() <= radius * scale {
                    let (gi, gj) = (group[i], group[j]);
                    for g in group.iter_mut() {
                        if *g == gi {
                            *g = gj;
                        }
                    }
                }
            }
        }
        let mut labels: Vec<usize> = group.clone();
        labels.sort_unstable();
        labels.dedup();
        for label in labels {
            let members: Vec<usize> = (0..m).filter(|&i| group[i] == label).collect();
            let s = members.len();
            if s < 2 {
                continue;
            }
            let sf = T::from_usize_lossy(s);
            let centroid = members.iter().fold(Complex::zero(), |acc, &i| acc + roots[i]) / sf;
            let mut derivs = vec![self.clone()];
            for _ in 0..s {
                let next = derivs.last().expect("nonempty").derivative();
                derivs.push(next);
            }
            let (target, slope) = (&derivs[s - 1], &derivs[s]);
            let mut c = centroid;
            for _ in 0..20 {
                let d = slope.eval(c);
                if d.is_zero() {
                    break;
                }
                let step = target.eval(c) / d;
                c = c - step;
                if step.norm() <= T::epsilon() * (T::one() + c.norm()) {
                    break;
                }
            }
            let spread = members.iter().map(|&i| (roots[i] - centroid).norm()).fold(T::zero(), T::max);
            if (c - centroid).norm() > spread + T::tol(1e-13, 4.0) * (T::one() + c.norm()) {
                continue;
            }
            let vanishes = derivs[..s].iter().all(|q| {
                let (v, noise) = q.eval_with_noise(c);
                v.norm() <= T::lit(CLUSTER_NOISE_FACTOR) * noise
            });
            if vanishes {
                for &i in &members {
                    roots[i] = c;
                }
            }
        }
    }

    fn aberth(&self) -> Result<Vec<Complex<T>>, PolyError> {
        let m = self.degree();
        match m {
            0 => return Ok(Vec::new()),
            1 => return Ok(vec![-self.coeffs[0] / self.coeffs[1]]),
            _ => {}
        }
        let lead = self.leading();
        let radius = T::one()
            + self.coeffs[..m]
                .iter()
                .map(|&c| (c / lead).norm())
                .fold(T::zero(), T::max);
        let mf = T::from_usize_lossy(m);
        // Off-axis start avoids symmetric stalls for real polynomials.
        let offset = T::lit(0.4);
        let mut z: Vec<Complex<T>> = (0..m)
            .map(|i| {
                let th = T::TAU() * T::from_usize_lossy(i) / mf + offset;
                Complex::new(radius * th.cos(), radius * th.sin())
            })
            .collect();
        let dp = self.derivative();
        let step_tol = T::tol(1e-13, 4.0);
        let mut done = vec![false; m];

        for _ in 0..MAX_ROOT_ITERATIONS {
            let mut all_quiet = true;
            for i in 0..m {
                if done[i] {
                    continue;
                }
                let (p, noise) = self.eval_with_noise(z[i]);
                if p.norm() <= noise {
                    // Residual already at rounding level; keep the root
                    // active so clusters keep contracting together.
                    continue;
                }
                all_quiet = false;
                let d = dp.eval(z[i]);
                let ratio = if d.is_zero() {
                    Complex::new(step_tol * (T::one() + z[i].norm()), T::zero())
                } else {
                    p / d
                };
                let mut s = Complex::zero();
                for (j, &zj) in z.iter().enumerate() {
                    if j != i {
                        let diff = z[i] - zj;
                        if !diff.is_zero() {
                            s = s + diff.inv();
                        }
                    }
                }
                let denom = Complex::new(T::one(), T::zero()) - ratio * s;
                let w = if denom.is_zero() { ratio } else { ratio / denom };
                z[i] = z[i] - w;
                if w.norm() < step_tol * (T::one() + z[i].norm()) {
                    done[i] = true;
                }
            }
            if all_quiet || done.iter().all(|&d| d) {
                return Ok(z);
            }
        }

        let residuals: Vec<f64> = z
            .iter()
            .map(|&r| self.eval(r).norm().to_f64().unwrap_or(f64::NAN))
            .collect();
        Err(PolyError::NoConvergence {
            iterations: MAX_ROOT_ITERATIONS,
            max_residual: residuals.iter().copied().fold(0.0, f64::max),
            best: z
                .iter()
                .map(|c| Complex::new(c.re.to_f64().unwrap_or(f64::NAN), c.im.to_f64().unwrap_or(f64::NAN)))
                .collect(),
            residuals,
        })
    }
}

impl<T: Scalar> Add for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn add(self, rhs: Self) -> Polynomial<T> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::from_coeffs((0..len).map(|j| self.coeff(j) + rhs.coeff(j)).collect())
    }
}

impl<T: Scalar> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn sub(self, rhs: Self) -> Polynomial<T> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::from_coeffs((0..len).map(|j| self.coeff(j) - rhs.coeff(j)).collect())
    }
}

impl<T: Scalar> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn neg(self) -> Polynomial<T> {
        Polynomial::from_coeffs(self.coeffs.iter().map(|&c| -c).collect())
    }
}

impl<T: Scalar> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn mul(self, rhs: Self) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Complex::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + a * b;
            }
        }
        Polynomial::from_coeffs(out)
    }
}
