//! The extremal families on which the refined bounds hold with equality.

use std::time::Instant;

use num_complex::Complex;

use super::report::{CheckSummary, ConfigEcho, Failure, KindSummary, Record, Summary, VerificationReport};
use crate::blaschke::{LevelSetData, PoleSet};
use crate::bounds::{BoundEvaluator, BoundKind, BoundValue, LevelSetBound, LowerBound, MaxNormBound, Side, DEFAULT_TOL};
use crate::instance::InstanceFile;
use crate::poly::Polynomial;
use crate::rational::RationalFn;

/// `|lhs - rhs| <= SHARPNESS_TOL * max(1, rhs)` at the designated points.
pub const SHARPNESS_TOL: f64 = 1e-8;
/// Circle points used for the family with equality everywhere.
pub const SHARPNESS_CIRCLE_POINTS: usize = 64;

pub const SHIFTED_POWER_UPPER: &str = "shifted-power-upper";
pub const BLASCHKE_PLUS_LAMBDA: &str = "blaschke-plus-lambda";
pub const SHIFTED_POWER_LOWER: &str = "shifted-power-lower";

struct Extremal {
    name: &'static str,
    rational: RationalFn<f64>,
    k: f64,
    side: Side,
    kinds: Vec<BoundKind>,
    thetas: Vec<f64>,
    lambda: Option<Complex<f64>>,
}

fn one() -> Complex<f64> {
    Complex::new(1.0, 0.0)
}

/// `(z + k)^m / (z - a)^n`.
fn shifted_power(k: f64, m: usize, a: f64, n: usize) -> RationalFn<f64> {
    let p = Polynomial::from_roots(one(), &vec![Complex::new(-k, 0.0); m]).expect("finite roots");
    RationalFn::new(p, PoleSet::repeated(a, n).expect("a > 1")).expect("no common factor")
}

/// `n` distinct poles of modulus at least `a`, spread in angle.
fn spread_poles(a: f64, n: usize) -> PoleSet<f64> {
    let poles = (0..n)
        .map(|j| Complex::from_polar(a * (1.0 + 0.5 * j as f64), 1.1 * j as f64))
        .collect();
    PoleSet::new(poles).expect("poles outside")
}

fn families() -> Vec<Extremal> {
    let mut out = Vec::new();
    for n in 1..=3 {
        for k in [1.0, 1.5] {
            for a in [2.0, 5.0] {
                out.push(Extremal {
                    name: SHIFTED_POWER_UPPER,
                    rational: shifted_power(k, n, a, n),
                    k,
                    side: Side::Outside,
                    kinds: vec![
                        BoundKind::MaxNorm(MaxNormBound::Thm1),
                        BoundKind::MaxNorm(MaxNormBound::Thm1Coeff),
                        BoundKind::MaxNorm(MaxNormBound::AzizZargar),
                    ],
                    thetas: vec![0.0],
                    lambda: None,
                });
            }
        }
    }
    let circle: Vec<f64> = (0..SHARPNESS_CIRCLE_POINTS)
        .map(|i| std::f64::consts::TAU * i as f64 / SHARPNESS_CIRCLE_POINTS as f64)
        .collect();
    for n in 1..=3 {
        for a in [2.0, 5.0] {
            for lambda in [one(), Complex::from_polar(1.0, std::f64::consts::FRAC_PI_3)] {
                out.push(Extremal {
                    name: BLASCHKE_PLUS_LAMBDA,
                    rational: RationalFn::blaschke_plus(spread_poles(a, n), lambda).expect("valid"),
                    k: 1.0,
                    side: Side::Outside,
                    kinds: vec![BoundKind::LevelSet(LevelSetBound::Thm2)],
                    thetas: circle.clone(),
                    lambda: Some(lambda),
                });
            }
        }
    }
    for n in 1..=3 {
        for m in 0..=n {
            for k in [0.5, 1.0] {
                for a in [2.0, 5.0] {
                    out.push(Extremal {
                        name: SHIFTED_POWER_LOWER,
                        rational: shifted_power(k, m, a, n),
                        k,
                        side: Side::Inside,
                        kinds: vec![
                            BoundKind::Lower(LowerBound::Thm3),
                            BoundKind::Lower(LowerBound::Thm3Coeff),
                        ],
                        thetas: vec![0.0],
                        lambda: None,
                    });
                }
            }
        }
    }
    out
}

/// Builds the extremal families and checks equality at their designated
/// points.
pub fn sharpness_suite() -> VerificationReport {
    let start = Instant::now();
    let fams = families();
    let mut kinds: Vec<BoundKind> = Vec::new();
    for f in &fams {
        for &k in &f.kinds {
            if !kinds.contains(&k) {
                kinds.push(k);
            }
        }
    }
    let mut summary = Summary {
        instances: fams.len(),
        kinds: kinds.iter().map(|&k| KindSummary::empty(k)).collect(),
        equalities: [SHIFTED_POWER_UPPER, BLASCHKE_PLUS_LAMBDA, SHIFTED_POWER_LOWER]
            .iter()
            .map(|&n| CheckSummary::new(n, SHARPNESS_TOL))
            .collect(),
        ..Summary::default()
    };
    let mut records = Vec::new();

    for (id, f) in fams.iter().enumerate() {
        let serial = || InstanceFile::from_rational(&f.rational).with_hypothesis(f.k, f.side);
        let fail = |summary: &mut Summary, check: &str, detail: String, error: bool| {
            summary.failures.push(Failure {
                instance_id: id,
                check: check.to_string(),
                detail,
                error,
                instance: serial(),
            })
        };
        let eq_idx = summary.equalities.iter().position(|e| e.name == f.name).expect("known family");
        let outcome = (|| -> Result<Vec<(f64, BoundValue<f64>)>, String> {
            let ev = BoundEvaluator::new(&f.rational).map_err(|e| e.to_string())?;
            let lm = match f.lambda {
                Some(l) => {
                    let ls = LevelSetData::new(f.rational.poles(), l).map_err(|e| e.to_string())?;
                    Some(ev.level_maxima(&ls).map_err(|e| e.to_string())?)
                }
                None => None,
            };
            let mut vals = Vec::new();
            for &theta in &f.thetas {
                let pt = ev.point_at_angle(theta).map_err(|e| e.to_string())?;
                for &kind in &f.kinds {
                    vals.push((theta, ev.evaluate(kind, &pt, f.k, lm.as_ref()).map_err(|e| format!("{kind}: {e}"))?));
                }
            }
            Ok(vals)
        })();
        let vals = match outcome {
            Ok(v) => v,
            Err(e) => {
                fail(&mut summary, f.name, e, true);
                continue;
            }
        };
        let mut missed = false;
        for (theta, v) in vals {
            let rec = Record::new(id, &v, theta, f.lambda.map(|l| [l.re, l.im]));
            let ki = kinds.iter().position(|&k| k == v.kind).expect("registered");
            summary.kinds[ki].push(&rec);
            let gap = (v.lhs - v.rhs).abs() / 1f64.max(v.rhs.abs());
            if !summary.equalities[eq_idx].push(gap) && !missed {
                missed = true;
                fail(
                    &mut summary,
                    f.name,
                    format!("{} at theta = {theta}: lhs = {:e}, rhs = {:e}", v.kind, v.lhs, v.rhs),
                    false,
                );
            }
            records.push(rec);
        }
    }
    VerificationReport {
        config: ConfigEcho {
            kinds,
            points: SHARPNESS_CIRCLE_POINTS,
            lambda_sweep: false,
            identities: false,
            tolerance: DEFAULT_TOL,
            seed: None,
        },
        summary,
        records,
        runtime_seconds: start.elapsed().as_secs_f64(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_families_attain_equality() {
        let rep = sharpness_suite();
        assert!(rep.passed(), "{:#?}", rep.summary.failures);
        for e in &rep.summary.equalities {
            assert!(e.checks > 0 && e.worst <= SHARPNESS_TOL, "{e:?}");
        }
    }

    #[test]
    fn blaschke_plus_lambda_is_checked_on_the_whole_circle() {
        let rep = sharpness_suite();
        let e = rep.summary.equalities.iter().find(|e| e.name == BLASCHKE_PLUS_LAMBDA).unwrap();
        assert_eq!(e.checks, 3 * 2 * 2 * SHARPNESS_CIRCLE_POINTS);
    }
}
