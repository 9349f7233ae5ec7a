//! Seeded random instances that satisfy a zero-location hypothesis by
//! construction.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blaschke::PoleSet;
use crate::bounds::Side;
use crate::poly::Polynomial;
use crate::rational::{RationalError, RationalFn};

pub const DEFAULT_DELTA: f64 = 0.05;
pub const DEFAULT_MAX_POLE_MODULUS: f64 = 10.0;

/// Description of one random instance. Identical specs give identical
/// instances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub k: f64,
    pub side: Side,
    /// Pole moduli are drawn from `(1 + delta, max_pole_modulus]`.
    pub delta: f64,
    pub max_pole_modulus: f64,
    /// Zero moduli are drawn from `[lo·k, hi·k]`.
    pub zero_modulus_factors: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("n must be at least 1")]
    NoPoles,
    #[error("m = {m} exceeds n = {n}")]
    DegreeExceedsPoles { m: usize, n: usize },
    #[error("k = {k} is invalid for the {side} family")]
    InvalidK { k: f64, side: Side },
    #[error("pole range (1 + {delta}, {max}] is empty or invalid")]
    PoleRange { delta: f64, max: f64 },
    #[error("zero modulus factors ({lo}, {hi}) leave the {side} range")]
    ZeroRange { lo: f64, hi: f64, side: Side },
    #[error(transparent)]
    Rational(#[from] RationalError),
}

impl InstanceSpec {
    /// Default ranges: zeros in `[k, 3k]` outside, `[0, k]` inside.
    pub fn new(seed: u64, n: usize, m: usize, k: f64, side: Side) -> Self {
        Self {
            seed,
            n,
            m,
            k,
            side,
            delta: DEFAULT_DELTA,
            max_pole_modulus: DEFAULT_MAX_POLE_MODULUS,
            zero_modulus_factors: match side {
                Side::Outside => (1.0, 3.0),
                Side::Inside => (0.0, 1.0),
            },
        }
    }

    pub fn with_pole_range(mut self, delta: f64, max_pole_modulus: f64) -> Self {
        self.delta = delta;
        self.max_pole_modulus = max_pole_modulus;
        self
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        if self.n == 0 {
            return Err(SpecError::NoPoles);
        }
        if self.m > self.n {
            return Err(SpecError::DegreeExceedsPoles { m: self.m, n: self.n });
        }
        let k_ok = self.k.is_finite()
            && match self.side {
                Side::Outside => self.k >= 1.0,
                Side::Inside => self.k > 0.0 && self.k <= 1.0,
            };
        if !k_ok {
            return Err(SpecError::InvalidK { k: self.k, side: self.side });
        }
        if !(self.delta > 0.0 && self.max_pole_modulus > 1.0 + self.delta && self.max_pole_modulus.is_finite()) {
            return Err(SpecError::PoleRange {
                delta: self.delta,
                max: self.max_pole_modulus,
            });
        }
        let (lo, hi) = self.zero_modulus_factors;
        let range_ok = lo <= hi
            && lo >= 0.0
            && hi.is_finite()
            && match self.side {
                Side::Outside => lo >= 1.0,
                Side::Inside => hi <= 1.0,
            };
        if !range_ok {
            return Err(SpecError::ZeroRange { lo, hi, side: self.side });
        }
        Ok(())
    }
}

/// Per-instance spec for entry `index` of a seeded family: `n` uniform in
/// `1..=n_max`, `m` uniform in `1..=n`, and an instance seed drawn from
/// its own ChaCha stream.
pub fn family_spec(master_seed: u64, index: u64, n_max: usize, k: f64, side: Side) -> InstanceSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    let n = rng.gen_range(1..=n_max.max(1));
    let m = rng.gen_range(1..=n);
    InstanceSpec::new(rng.gen(), n, m, k, side)
}

pub fn family(master_seed: u64, count: usize, n_max: usize, k: f64, side: Side) -> Vec<InstanceSpec> {
    (0..count as u64)
        .map(|i| family_spec(master_seed, i, n_max, k, side))
        .collect()
}

/// Uniform on `(0, 1]`.
fn open_unit(rng: &mut ChaCha8Rng) -> f64 {
    1.0 - rng.gen::<f64>()
}

fn polar(rng: &mut ChaCha8Rng, modulus: f64) -> Complex<f64> {
    Complex::from_polar(modulus, rng.gen_range(0.0..std::f64::consts::TAU))
}

pub fn gen_instance(spec: &InstanceSpec) -> Result<RationalFn<f64>, SpecError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let lo = 1.0 + spec.delta;
    let poles: Vec<Complex<f64>> = (0..spec.n)
        .map(|_| {
            let r = lo + (spec.max_pole_modulus - lo) * open_unit(&mut rng);
            polar(&mut rng, r)
        })
        .collect();
    let (flo, fhi) = spec.zero_modulus_factors;
    let zeros: Vec<Complex<f64>> = (0..spec.m)
        .map(|_| {
            let r = spec.k * rng.gen_range(flo..=fhi);
            polar(&mut rng, r)
        })
        .collect();
    let lead_modulus = rng.gen_range(0.5..=2.0);
    let lead = polar(&mut rng, lead_modulus);
    let p = Polynomial::from_roots(lead, &zeros).map_err(RationalError::from)?;
    let ps = PoleSet::new(poles).map_err(RationalError::from)?;
    Ok(RationalFn::new(p, ps)?)
}
