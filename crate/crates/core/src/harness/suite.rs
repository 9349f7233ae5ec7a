//! Batch verification over many instances.

use std::collections::HashMap;
use std::time::Instant;

use num_complex::Complex;
use rayon::prelude::*;

use super::gen::{gen_instance, InstanceSpec};
use super::report::{CheckSummary, ConfigEcho, Failure, KindSummary, Record, Summary, VerificationReport};
use crate::blaschke::{lambda_sweep, LevelSetData};
use crate::bounds::{
    BoundError, BoundEvaluator, BoundKind, BoundValue, LevelSetBound, LowerBound, MaxNormBound, PointData, Side, WaliShahForm,
    DEFAULT_TOL,
};
use crate::instance::InstanceFile;
use crate::rational::{LevelMaxima, RationalFn};
use crate::scalar::unit;

pub const DEFAULT_POINTS: usize = 128;
pub const LAMBDA_SWEEP_COUNT: usize = 16;
pub const IDENTITY_POINTS: usize = 32;
/// Relative slack allowed when comparing two right-hand sides.
pub const ORDERING_SLACK: f64 = 1e-12;

/// Residual tolerances for the identities, relative to `max(1, |sides|)`.
pub const INTERPOLATION_TOL: f64 = 1e-8;
pub const KERNEL_SUM_TOL: f64 = 1e-8;
pub const MODULUS_SUM_TOL: f64 = 1e-9;
pub const RE_ZW_TOL: f64 = 1e-10;
/// Relative slack on `|R'| + |(R*)'| <= |B'| M` and
/// `|R'|^2 + |(R*)'|^2 <= |B'|^2 (M_1^2 + M_2^2)/2`.
pub const LEMMA_TOL: f64 = 1e-9;

/// Instances verified together before their records are handed on.
const CHUNK: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub kinds: Vec<BoundKind>,
    pub points: usize,
    pub lambda_sweep: bool,
    pub identities: bool,
    pub tolerance: f64,
    /// Keep every record in the report. Summaries are complete either way.
    pub keep_records: bool,
    pub seed: Option<u64>,
}

impl SuiteConfig {
    pub fn new(kinds: Vec<BoundKind>) -> Self {
        Self {
            kinds,
            points: DEFAULT_POINTS,
            lambda_sweep: false,
            identities: false,
            tolerance: DEFAULT_TOL,
            keep_records: true,
            seed: None,
        }
    }

    fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            kinds: self.kinds.clone(),
            points: self.points,
            lambda_sweep: self.lambda_sweep,
            identities: self.identities,
            tolerance: self.tolerance,
            seed: self.seed,
        }
    }

    /// The verification angles: `points` equispaced from 0 plus `extra`.
    pub fn thetas(&self, extra: f64) -> Vec<f64> {
        let mut out: Vec<f64> = (0..self.points)
            .map(|i| std::f64::consts::TAU * i as f64 / self.points as f64)
            .collect();
        if self.points == 0 {
            out.push(0.0);
        }
        if !out.contains(&extra) {
            out.push(extra);
        }
        out
    }

    pub fn lambdas(&self) -> Vec<Complex<f64>> {
        if self.lambda_sweep {
            lambda_sweep(LAMBDA_SWEEP_COUNT)
        } else {
            vec![Complex::new(1.0, 0.0)]
        }
    }
}

/// One instance with the hypothesis it is checked under.
#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub id: usize,
    pub rational: RationalFn<f64>,
    pub k: f64,
    pub side: Side,
}

impl Case {
    pub fn serialize(&self) -> InstanceFile {
        InstanceFile::from_rational(&self.rational).with_hypothesis(self.k, self.side)
    }
}

/// Pointwise orderings between a refined bound and its baseline.
pub const ORDERINGS: [(&str, BoundKind, BoundKind); 8] = [
    ("thm1 <= aziz-zargar", BoundKind::MaxNorm(MaxNormBound::Thm1), BoundKind::MaxNorm(MaxNormBound::AzizZargar)),
    ("thm1-coeff <= aziz-zargar", BoundKind::MaxNorm(MaxNormBound::Thm1Coeff), BoundKind::MaxNorm(MaxNormBound::AzizZargar)),
    ("thm2 <= aziz-shah-f", BoundKind::LevelSet(LevelSetBound::Thm2), BoundKind::LevelSet(LevelSetBound::AzizShahF)),
    ("aziz-shah-d <= lmr-a", BoundKind::LevelSet(LevelSetBound::AzizShahD), BoundKind::LevelSet(LevelSetBound::LmrA)),
    ("thm3 >= aziz-shah-g", BoundKind::Lower(LowerBound::Thm3), BoundKind::Lower(LowerBound::AzizShahG)),
    ("thm3-coeff >= aziz-shah-g", BoundKind::Lower(LowerBound::Thm3Coeff), BoundKind::Lower(LowerBound::AzizShahG)),
    ("ws-upper-ratio <= ws-upper-sqrt", BoundKind::WaliShah(WaliShahForm::UpperRatio), BoundKind::WaliShah(WaliShahForm::UpperSqrt)),
    ("ws-lower-ratio >= ws-lower-sqrt", BoundKind::WaliShah(WaliShahForm::LowerRatio), BoundKind::WaliShah(WaliShahForm::LowerSqrt)),
];

pub const IDENTITIES: [(&str, f64); 6] = [
    ("interpolation", INTERPOLATION_TOL),
    ("kernel-sum", KERNEL_SUM_TOL),
    ("b-prime-modulus", MODULUS_SUM_TOL),
    ("re-zw-ratio", RE_ZW_TOL),
    ("derivative-sum-bound", LEMMA_TOL),
    ("derivative-square-bound", LEMMA_TOL),
];

/// Everything produced for one instance, before merging.
struct CaseResult {
    records: Vec<Record>,
    kinds: Vec<KindSummary>,
    orderings: Vec<CheckSummary>,
    identities: Vec<CheckSummary>,
    failures: Vec<Failure>,
}

impl CaseResult {
    fn new(cfg: &SuiteConfig) -> Self {
        Self {
            records: Vec::new(),
            kinds: cfg.kinds.iter().map(|&k| KindSummary::empty(k)).collect(),
            orderings: ORDERINGS.iter().map(|o| CheckSummary::new(o.0, ORDERING_SLACK)).collect(),
            identities: if cfg.identities {
                IDENTITIES.iter().map(|&(n, t)| CheckSummary::new(n, t)).collect()
            } else {
                Vec::new()
            },
            failures: Vec::new(),
        }
    }
}

struct Ctx<'a> {
    case: &'a Case,
    failed: HashMap<String, ()>,
    out: CaseResult,
}

impl Ctx<'_> {
    /// Records a failed check once per check and instance.
    fn fail(&mut self, check: &str, detail: String) {
        self.push_failure(check, detail, false);
    }

    /// Records a check that could not be evaluated.
    fn error(&mut self, check: &str, detail: String) {
        self.push_failure(check, detail, true);
    }

    fn push_failure(&mut self, check: &str, detail: String, error: bool) {
        if self.failed.insert(check.to_string(), ()).is_none() {
            self.out.failures.push(Failure {
                instance_id: self.case.id,
                check: check.to_string(),
                detail,
                error,
                instance: self.case.serialize(),
            });
        }
    }
}

fn lambda_pair(l: Complex<f64>) -> [f64; 2] {
    [l.re, l.im]
}

fn verify_case(case: &Case, cfg: &SuiteConfig) -> CaseResult {
    let mut cx = Ctx {
        case,
        failed: HashMap::new(),
        out: CaseResult::new(cfg),
    };
    let r = &case.rational;
    let ev = match BoundEvaluator::new(r) {
        Ok(ev) => ev.with_tolerance(cfg.tolerance),
        Err(e) => {
            cx.error("engine", e.to_string());
            return cx.out;
        }
    };

    let needs_lambda = cfg.identities || cfg.kinds.iter().any(|k| k.uses_lambda());
    let mut levels: Vec<(Complex<f64>, LevelSetData<f64>, LevelMaxima<f64>)> = Vec::new();
    if needs_lambda {
        for lambda in cfg.lambdas() {
            match LevelSetData::new(r.poles(), lambda).map_err(|e| e.to_string()).and_then(|ls| {
                let lm = ev.level_maxima(&ls).map_err(|e| e.to_string())?;
                Ok((ls, lm))
            }) {
                Ok((ls, lm)) => levels.push((lambda, ls, lm)),
                Err(e) => cx.error("level-set", format!("lambda = {lambda}: {e}")),
            }
        }
    }

    let mut disabled = vec![false; cfg.kinds.len()];
    for theta in cfg.thetas(ev.sup_norm().arg_theta) {
        let pt = match ev.point_at_angle(theta) {
            Ok(pt) => pt,
            Err(e) => {
                cx.error("engine", format!("theta = {theta}: {e}"));
                continue;
            }
        };
        let mut plain: HashMap<BoundKind, f64> = HashMap::new();
        let mut per_lambda: Vec<HashMap<BoundKind, f64>> = vec![HashMap::new(); levels.len()];
        for (ki, &kind) in cfg.kinds.iter().enumerate() {
            if disabled[ki] {
                continue;
            }
            let mut eval = |lm: Option<&LevelMaxima<f64>>, lambda: Option<[f64; 2]>| -> Option<f64> {
                match ev.evaluate(kind, &pt, case.k, lm) {
                    Ok(v) => {
                        push_record(&mut cx, ki, &v, theta, lambda);
                        Some(v.rhs)
                    }
                    Err(e) => {
                        disabled[ki] = true;
                        // A negative bracket would contradict the bound itself.
                        if matches!(e, BoundError::NegativeBracket { .. }) {
                            cx.fail(kind.tag(), e.to_string());
                        } else {
                            cx.error(kind.tag(), e.to_string());
                        }
                        None
                    }
                }
            };
            if kind.uses_lambda() {
                for (li, (lambda, _, lm)) in levels.iter().enumerate() {
                    match eval(Some(lm), Some(lambda_pair(*lambda))) {
                        Some(rhs) => {
                            per_lambda[li].insert(kind, rhs);
                        }
                        None => break,
                    }
                }
            } else if let Some(rhs) = eval(None, None) {
                plain.insert(kind, rhs);
            }
        }
        check_orderings(&mut cx, &plain, theta, None);
        for (li, map) in per_lambda.iter().enumerate() {
            check_orderings(&mut cx, map, theta, Some(levels[li].0));
        }
    }

    if cfg.identities {
        check_identities(&mut cx, &ev, &levels);
    }
    cx.out
}

fn push_record(cx: &mut Ctx, ki: usize, v: &BoundValue<f64>, theta: f64, lambda: Option<[f64; 2]>) {
    let rec = Record::new(cx.case.id, v, theta, lambda);
    cx.out.kinds[ki].push(&rec);
    if !rec.pass {
        let detail = format!(
            "theta = {theta}, lambda = {lambda:?}: lhs = {:e}, rhs = {:e}, margin = {:e}",
            v.lhs, v.rhs, v.margin
        );
        cx.fail(v.kind.tag(), detail);
    }
    cx.out.records.push(rec);
}

fn check_orderings(cx: &mut Ctx, rhs: &HashMap<BoundKind, f64>, theta: f64, lambda: Option<Complex<f64>>) {
    for (i, &(name, refined, baseline)) in ORDERINGS.iter().enumerate() {
        let (Some(&a), Some(&b)) = (rhs.get(&refined), rhs.get(&baseline)) else {
            continue;
        };
        let scale = 1f64.max(a.abs()).max(b.abs());
        // Positive when the refinement is looser than the baseline.
        let excess = if refined.is_lower() { (b - a) / scale } else { (a - b) / scale };
        if !cx.out.orderings[i].push(excess) {
            cx.fail(name, format!("theta = {theta}, lambda = {lambda:?}: refined {a:e}, baseline {b:e}"));
        }
    }
}

fn rel(diff: f64, a: f64, b: f64) -> f64 {
    diff / 1f64.max(a).max(b)
}

fn check_identities(
    cx: &mut Ctx,
    ev: &BoundEvaluator<f64>,
    levels: &[(Complex<f64>, LevelSetData<f64>, LevelMaxima<f64>)],
) {
    let r = ev.rational();
    let ps = r.poles();
    let n = ps.n() as f64;
    let big_m = ev.sup_norm().value;
    for i in 0..IDENTITY_POINTS {
        let theta = std::f64::consts::TAU * (i as f64 + 0.5) / IDENTITY_POINTS as f64;
        let z = unit(theta);
        let computed = (|| -> Result<_, String> {
            let pt: PointData<f64> = ev.point(z).map_err(|e| e.to_string())?;
            let b = ps.b_eval(z).map_err(|e| e.to_string())?;
            let b_prime = ps.b_prime(z).map_err(|e| e.to_string())?;
            let re_zw = ps.re_zw_ratio(z).map_err(|e| e.to_string())?;
            let star = r.conj_transform_prime_modulus(z).map_err(|e| e.to_string())?;
            Ok((pt, b, b_prime, re_zw, star))
        })();
        let (pt, b, b_prime, re_zw, star) = match computed {
            Ok(v) => v,
            Err(e) => {
                cx.error("identities", format!("theta = {theta}: {e}"));
                continue;
            }
        };
        let bp = pt.b_prime;
        let d_abs = pt.prime.norm();

        let modulus = rel((bp - b_prime.norm()).abs(), bp, b_prime.norm());
        record_identity(cx, 2, modulus, theta, None);
        let re_zw_check = rel((re_zw - (n - bp) / 2.0).abs(), re_zw.abs(), bp);
        record_identity(cx, 3, re_zw_check, theta, None);
        let sum_bound = (d_abs + star - bp * big_m) / 1f64.max(bp * big_m);
        record_identity(cx, 4, sum_bound, theta, None);

        for (lambda, ls, lm) in levels {
            let kernel = |weights: &dyn Fn(usize) -> Complex<f64>| -> Complex<f64> {
                let num = (b - lambda).norm_sqr();
                ls.t
                    .iter()
                    .zip(&ls.c_weights)
                    .enumerate()
                    .map(|(j, (&tj, &cj))| weights(j) * (cj * num / (z - tj).norm_sqr()))
                    .sum()
            };
            let zb = z * b_prime / b;
            let kernel_sum = ls.weighted_kernel_sum(b, z);
            record_identity(cx, 1, rel((zb - kernel_sum).norm(), zb.norm(), kernel_sum), theta, Some(*lambda));

            let values: Vec<Complex<f64>> = ls.t.iter().map(|&t| r.eval(t).unwrap_or(Complex::new(f64::NAN, 0.0))).collect();
            let lhs_interp = b_prime * pt.value - pt.prime * (b - lambda);
            let rhs_interp = b / z * kernel(&|j| values[j]);
            record_identity(cx, 0, rel((lhs_interp - rhs_interp).norm(), lhs_interp.norm(), rhs_interp.norm()), theta, Some(*lambda));

            let s = lm.m1 * lm.m1 + lm.m2 * lm.m2;
            let bound = 0.5 * bp * bp * s;
            let square_bound = (d_abs * d_abs + star * star - bound) / 1f64.max(bound);
            record_identity(cx, 5, square_bound, theta, Some(*lambda));
        }
    }
}

fn record_identity(cx: &mut Ctx, idx: usize, value: f64, theta: f64, lambda: Option<Complex<f64>>) {
    if !cx.out.identities[idx].push(value) {
        let name = IDENTITIES[idx].0;
        cx.fail(name, format!("theta = {theta}, lambda = {lambda:?}: value {value:e}"));
    }
}

/// Generates each spec's instance and verifies it.
pub fn run_suite(specs: &[InstanceSpec], cfg: &SuiteConfig) -> VerificationReport {
    run_suite_streaming(specs, cfg, |_| {})
}

pub fn run_suite_streaming(specs: &[InstanceSpec], cfg: &SuiteConfig, sink: impl FnMut(&[Record])) -> VerificationReport {
    let start = Instant::now();
    let generated: Vec<Result<Case, Failure>> = specs
        .par_iter()
        .enumerate()
        .map(|(id, spec)| {
            gen_instance(spec)
                .map(|rational| Case {
                    id,
                    rational,
                    k: spec.k,
                    side: spec.side,
                })
                .map_err(|e| Failure {
                    instance_id: id,
                    check: "generator".into(),
                    detail: format!("{e} ({spec:?})"),
                    error: true,
                    instance: InstanceFile {
                        poles: Vec::new(),
                        numerator_coeffs: Vec::new(),
                        k: Some(spec.k),
                        side: Some(spec.side),
                    },
                })
        })
        .collect();
    let mut cases = Vec::with_capacity(generated.len());
    let mut gen_failures = Vec::new();
    for g in generated {
        match g {
            Ok(c) => cases.push(c),
            Err(f) => gen_failures.push(f),
        }
    }
    let mut report = run_cases_streaming(&cases, cfg, sink);
    report.summary.instances = specs.len();
    if !gen_failures.is_empty() {
        gen_failures.extend(report.summary.failures);
        gen_failures.sort_by_key(|f| f.instance_id);
        report.summary.failures = gen_failures;
    }
    report.runtime_seconds = start.elapsed().as_secs_f64();
    report
}

pub fn run_cases(cases: &[Case], cfg: &SuiteConfig) -> VerificationReport {
    run_cases_streaming(cases, cfg, |_| {})
}

/// Verifies `cases` in parallel and hands each instance's records to
/// `sink` in instance order.
pub fn run_cases_streaming(cases: &[Case], cfg: &SuiteConfig, mut sink: impl FnMut(&[Record])) -> VerificationReport {
    let start = Instant::now();
    let mut summary = Summary {
        instances: cases.len(),
        kinds: cfg.kinds.iter().map(|&k| KindSummary::empty(k)).collect(),
        orderings: ORDERINGS.iter().map(|o| CheckSummary::new(o.0, ORDERING_SLACK)).collect(),
        identities: if cfg.identities {
            IDENTITIES.iter().map(|&(n, t)| CheckSummary::new(n, t)).collect()
        } else {
            Vec::new()
        },
        equalities: Vec::new(),
        failures: Vec::new(),
    };
    let mut records = Vec::new();
    for chunk in cases.chunks(CHUNK) {
        let results: Vec<CaseResult> = chunk.par_iter().map(|c| verify_case(c, cfg)).collect();
        for res in results {
            for (acc, s) in summary.kinds.iter_mut().zip(&res.kinds) {
                acc.merge(s);
            }
            for (acc, s) in summary.orderings.iter_mut().zip(&res.orderings) {
                acc.merge(s);
            }
            for (acc, s) in summary.identities.iter_mut().zip(&res.identities) {
                acc.merge(s);
            }
            summary.failures.extend(res.failures);
            sink(&res.records);
            if cfg.keep_records {
                records.extend(res.records);
            }
        }
    }
    summary.orderings.retain(|o| o.checks > 0);
    VerificationReport {
        config: cfg.echo(),
        summary,
        records,
        runtime_seconds: start.elapsed().as_secs_f64(),
    }
}
