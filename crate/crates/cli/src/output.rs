//! Human tables, JSON documents and the CSV record stream.

use std::fs::File;
use std::path::Path;

use blaschke_bounds::blaschke::LevelSetData;
use blaschke_bounds::bounds::inverse_sum;
use blaschke_bounds::harness::{CheckSummary, LimitTable, Record, VerificationReport};
use blaschke_bounds::RationalFn64;
use num_complex::Complex;
use serde_json::json;

use crate::UsageError;

pub const CSV_HEADER: [&str; 9] = [
    "instance_id",
    "bound_kind",
    "lambda_re",
    "lambda_im",
    "theta",
    "lhs",
    "rhs",
    "margin",
    "pass",
];

/// Failures listed in the human report before truncating.
const SHOWN_FAILURES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

/// 17 significant digits, enough to round-trip an `f64`.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Streams records to a CSV file, header first. A no-op without a path.
pub struct CsvSink {
    writer: Option<csv::Writer<File>>,
    error: Option<csv::Error>,
}

impl CsvSink {
    pub fn open(path: Option<&Path>) -> Result<Self, UsageError> {
        let writer = match path {
            Some(p) => {
                let mut w = csv::Writer::from_path(p).map_err(|e| UsageError(format!("{}: {e}", p.display())))?;
                w.write_record(CSV_HEADER)?;
                Some(w)
            }
            None => None,
        };
        Ok(Self { writer, error: None })
    }

    pub fn write(&mut self, records: &[Record]) {
        let Some(w) = self.writer.as_mut() else { return };
        if self.error.is_some() {
            return;
        }
        for r in records {
            let (lre, lim) = match r.lambda {
                Some([re, im]) => (num(re), num(im)),
                None => (String::new(), String::new()),
            };
            let row = [
                r.instance_id.to_string(),
                r.kind.tag().to_string(),
                lre,
                lim,
                num(r.theta),
                num(r.lhs),
                num(r.rhs),
                num(r.margin),
                r.pass.to_string(),
            ];
            if let Err(e) = w.write_record(&row) {
                self.error = Some(e);
                return;
            }
        }
    }

    pub fn finish(mut self) -> Result<(), UsageError> {
        if let Some(e) = self.error.take() {
            return Err(e.into());
        }
        if let Some(w) = self.writer.as_mut() {
            w.flush()?;
        }
        Ok(())
    }
}

fn print_checks(title: &str, checks: &[CheckSummary]) {
    if checks.is_empty() {
        return;
    }
    println!("\n{title}");
    println!("  {:<32} {:>10} {:>10} {:>12} {:>10}", "check", "count", "violations", "worst", "tolerance");
    for c in checks {
        println!(
            "  {:<32} {:>10} {:>10} {:>12.3e} {:>10.0e}",
            c.name, c.checks, c.violations, c.worst, c.tolerance
        );
    }
}

pub fn print_report(report: &VerificationReport, as_json: bool) {
    if as_json {
        println!("{}", report.to_json());
        return;
    }
    let s = &report.summary;
    println!("instances: {}  runtime: {:.2}s", s.instances, report.runtime_seconds);
    if !s.kinds.is_empty() {
        println!(
            "\n  {:<22} {:>10} {:>8} {:>13} {:>13} {:>13}",
            "bound", "records", "failures", "min margin", "min rel", "mean margin"
        );
        for k in &s.kinds {
            println!(
                "  {:<22} {:>10} {:>8} {:>13.4e} {:>13.4e} {:>13.4e}",
                k.kind.tag(),
                k.records,
                k.failures,
                k.min_margin,
                k.min_relative_margin,
                k.mean_margin
            );
        }
    }
    print_checks("orderings", &s.orderings);
    print_checks("identities", &s.identities);
    print_checks("equalities", &s.equalities);
    if !s.failures.is_empty() {
        println!("\nfailures");
        for f in s.failures.iter().take(SHOWN_FAILURES) {
            let tag = if f.error { "error" } else { "fail" };
            println!("  [{tag}] instance {} {}: {}", f.instance_id, f.check, f.detail);
            println!("      {}", f.instance.to_json());
        }
        if s.failures.len() > SHOWN_FAILURES {
            println!("  ... {} more", s.failures.len() - SHOWN_FAILURES);
        }
    }
    if report.passed() {
        println!("\nPASS");
    } else {
        println!("\nFAIL ({} failing checks)", s.failures.len());
    }
}

pub fn print_limit(t: &LimitTable, as_json: bool) {
    if as_json {
        println!("{}", serde_json::to_string_pretty(t).expect("table serializes"));
        return;
    }
    let (rk, pk) = t.family.kinds();
    println!("{rk} against {pk}, k = {}, |P'(1)| = {}", t.k, t.poly_lhs);
    println!(
        "  {:>10} {:>14} {:>16} {:>16} {:>16} {:>12}",
        "alpha", "|B'(1)|", "|W(1)| rhs", "|W(1)| lhs", "poly rhs", "rel gap"
    );
    for r in &t.rows {
        println!(
            "  {:>10} {:>14.10} {:>16.12} {:>16.12} {:>16.12} {:>12.4e}",
            r.alpha, r.b_prime, r.scaled_rhs, r.scaled_lhs, r.poly_rhs, r.relative_gap
        );
    }
    println!(
        "monotone: {}  final gap: {:.4e}  {}",
        t.monotone(),
        t.final_gap().unwrap_or(f64::NAN),
        if t.converged() { "PASS" } else { "FAIL" }
    );
}

fn pairs(v: &[Complex<f64>]) -> Vec<[f64; 2]> {
    v.iter().map(|c| [c.re, c.im]).collect()
}

pub fn print_description(r: &RationalFn64, as_json: bool) -> Result<(), UsageError> {
    let zd = r.zero_data()?;
    let sup = r.sup_norm_circle();
    let one = Complex::new(1.0, 0.0);
    let ls = LevelSetData::new(r.poles(), one)?;
    let lm = r.level_maxima(&ls)?;
    let (a0, am) = r.end_coefficients();
    let bp1 = r.poles().b_prime_modulus(one)?;
    let inv = inverse_sum(&zd.zeros);
    if as_json {
        let doc = json!({
            "n": r.n(),
            "m": r.m(),
            "poles": pairs(r.poles().poles()),
            "zeros": pairs(&zd.zeros),
            "zero_min_modulus": if zd.m > 0 { Some(zd.min_modulus) } else { None },
            "zero_max_modulus": zd.max_modulus,
            "alpha_0": [a0.re, a0.im],
            "alpha_m": [am.re, am.im],
            "sup_norm": sup.value,
            "sup_theta": sup.arg_theta,
            "inverse_zero_sum": inv,
            "b_prime_at_1": bp1,
            "level_maxima_lambda_1": [lm.m1, lm.m2],
        });
        println!("{}", serde_json::to_string_pretty(&doc)?);
        return Ok(());
    }
    println!("n = {}, m = {}", r.n(), r.m());
    println!("poles:");
    for a in r.poles().poles() {
        println!("  {:<40} |a| = {}", a.to_string(), a.norm());
    }
    println!("zeros:");
    for b in &zd.zeros {
        println!("  {:<40} |b| = {}", b.to_string(), b.norm());
    }
    if zd.m > 0 {
        println!("zero moduli in [{}, {}]", zd.min_modulus, zd.max_modulus);
    }
    println!("alpha_0 = {a0}, alpha_m = {am}");
    println!("M(R, 1) = {} at theta = {}", sup.value, sup.arg_theta);
    println!("sum 1/(1 + |b_j|) = {inv}");
    println!("|B'(1)| = {bp1}");
    println!("lambda = 1: M_1 = {}, M_2 = {}", lm.m1, lm.m2);
    Ok(())
}
