//! Seeded instance generation and batch verification: every bound over
//! random instances, the improvement orderings, the Blaschke identities,
//! the equality families, and the pole-to-infinity limit.

mod gen;
mod limit;
mod report;
mod sharpness;
mod suite;

pub use gen::{family, family_spec, gen_instance, InstanceSpec, SpecError, DEFAULT_DELTA, DEFAULT_MAX_POLE_MODULUS};
pub use limit::{builtin_limit_cases, default_family, limit_study, LimitError, LimitFamily, LimitRow, LimitTable, DEFAULT_ALPHAS, LIMIT_GAP_TOL};
pub use report::{CheckSummary, ConfigEcho, Failure, KindSummary, Record, Summary, VerificationReport};
pub use sharpness::{sharpness_suite, BLASCHKE_PLUS_LAMBDA, SHARPNESS_CIRCLE_POINTS, SHARPNESS_TOL, SHIFTED_POWER_LOWER, SHIFTED_POWER_UPPER};
pub use suite::{
    run_cases, run_cases_streaming, run_suite, run_suite_streaming, Case, SuiteConfig, DEFAULT_POINTS, IDENTITIES,
    IDENTITY_POINTS, LAMBDA_SWEEP_COUNT, ORDERINGS, ORDERING_SLACK,
};
