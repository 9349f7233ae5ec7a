//! Derivative bounds for rational functions with prescribed poles.
//!
//! For poles `a_1..a_n` outside the closed unit disk, `W(z) = ∏(z - a_j)`
//! and `B(z) = ∏(1 - conj(a_j) z)/(z - a_j)`. The crate evaluates every
//! Bernstein, Erdős-Lax and Turán type bound for `R = P/W` with
//! `deg P <= n` on the unit circle, together with the Blaschke-product
//! identities they rest on, and a seeded harness that checks them in bulk.
//!
//! The numerical core is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` aliases below are what the harness and CLI use.

pub mod blaschke;
pub mod bounds;
pub mod circle;
pub mod harness;
pub mod instance;
pub mod poly;
pub mod rational;
pub mod scalar;

pub use blaschke::{BlaschkeError, LevelSetData, PoleSet};
pub use bounds::{
    BoundError, BoundEvaluator, BoundKind, BoundValue, LevelSetBound, LowerBound, MaxNormBound,
    PolyBound, Side, WaliShahForm,
};
pub use poly::{PolyError, Polynomial};
pub use rational::{LevelMaxima, RationalError, RationalFn, SupNormResult, ZeroData};
pub use scalar::Scalar;

pub use num_complex::Complex;

pub type C64 = Complex<f64>;
pub type C32 = Complex<f32>;

pub type Polynomial64 = Polynomial<f64>;
pub type PoleSet64 = PoleSet<f64>;
pub type RationalFn64 = RationalFn<f64>;
pub type LevelSetData64 = LevelSetData<f64>;
pub type BoundValue64 = BoundValue<f64>;

pub type Polynomial32 = Polynomial<f32>;
pub type PoleSet32 = PoleSet<f32>;
pub type RationalFn32 = RationalFn<f32>;
