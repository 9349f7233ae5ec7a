//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::f64::consts::TAU;
use std::process::{Command, ExitCode};
use std::time::Instant;

use blaschke_bounds::bounds::{poly_bound, product_ratio_gap, PolyEvaluator};
use blaschke_bounds::harness::{
    builtin_limit_cases, family, gen_instance, limit_study, run_suite, sharpness_suite, SuiteConfig, DEFAULT_POINTS,
    IDENTITIES, ORDERINGS,
};
use blaschke_bounds::{
    BoundKind, LevelSetBound, LevelSetData, LowerBound, MaxNormBound, PoleSet, PolyBound, Polynomial, Side, C64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;
const INSTANCES_PER_FAMILY: usize = 500;
const N_MAX: usize = 8;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn upper_kinds() -> Vec<BoundKind> {
    use LevelSetBound as L;
    use MaxNormBound as M;
    let mut v: Vec<BoundKind> = [M::Bernstein, M::Lmr, M::AzizZargar, M::Thm1, M::Thm1Coeff]
        .into_iter()
        .map(BoundKind::MaxNorm)
        .collect();
    v.extend([L::LmrA, L::AzizShahD, L::AzizShahF, L::Thm2, L::Thm2Coeff].map(BoundKind::LevelSet));
    v
}

fn lower_kinds() -> Vec<BoundKind> {
    use LowerBound as L;
    [L::LmrC, L::AzizShahG, L::Thm3, L::Thm3Coeff].map(BoundKind::Lower).to_vec()
}

/// The five random families of the inequality suite, each with its own seed.
fn families() -> Vec<(&'static str, u64, f64, Side)> {
    vec![
        ("outside k=1", 1001, 1.0, Side::Outside),
        ("outside k=1.5", 1002, 1.5, Side::Outside),
        ("outside k=2", 1003, 2.0, Side::Outside),
        ("inside k=0.5", 1004, 0.5, Side::Inside),
        ("inside k=1", 1005, 1.0, Side::Inside),
    ]
}

fn inequality_suite() -> (Outcome, Outcome) {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut all_pass = true;
    let mut ordering_pass = true;
    let mut ordering_lines = Vec::new();
    for (name, seed, k, side) in families() {
        let kinds = match side {
            Side::Outside => upper_kinds(),
            Side::Inside => lower_kinds(),
        };
        let mut cfg = SuiteConfig::new(kinds);
        cfg.points = DEFAULT_POINTS;
        cfg.lambda_sweep = true;
        cfg.tolerance = TOL;
        cfg.keep_records = false;
        let report = run_suite(&family(seed, INSTANCES_PER_FAMILY, N_MAX, k, side), &cfg);
        let s = &report.summary;
        let fails = s.failure_count();
        all_pass &= report.passed() && s.instances == INSTANCES_PER_FAMILY;
        let worst = s
            .kinds
            .iter()
            .min_by(|a, b| a.min_relative_margin.total_cmp(&b.min_relative_margin))
            .map(|k| format!("{} {:.2e}", k.kind, k.min_relative_margin))
            .unwrap_or_default();
        lines.push(format!("{name}: {} instances, {fails} failures, min rel margin {worst}", s.instances));
        for (oname, lo, hi) in ORDERINGS {
            if !s.kinds.iter().any(|k| k.kind == lo) || !s.kinds.iter().any(|k| k.kind == hi) {
                continue;
            }
            match s.ordering(oname) {
                Some(c) if c.checks > 0 => {
                    ordering_pass &= c.violations == 0;
                    ordering_lines.push(format!(
                        "{name}: {oname} {} checks, {} violations, worst excess {:.2e}",
                        c.checks, c.violations, c.worst
                    ));
                }
                _ => {
                    ordering_pass = false;
                    ordering_lines.push(format!("{name}: {oname} not evaluated"));
                }
            }
        }
    }
    lines.push(format!("wall time {:.1}s", start.elapsed().as_secs_f64()));
    (outcome(all_pass, lines.join("\n    ")), outcome(ordering_pass, ordering_lines.join("\n    ")))
}

fn sharpness() -> Outcome {
    let report = sharpness_suite();
    let mut worst: f64 = 0.0;
    let mut pass = report.passed();
    for r in &report.records {
        let rel = (r.lhs - r.rhs).abs() / r.rhs;
        worst = worst.max(rel);
        pass &= r.rhs > 0.0 && rel <= 1e-8;
    }
    outcome(
        pass && !report.records.is_empty(),
        format!("{} equality records, worst |lhs - rhs|/rhs {worst:.2e}", report.records.len()),
    )
}

fn identities() -> Outcome {
    let mut cfg = SuiteConfig::new(Vec::new());
    cfg.identities = true;
    cfg.keep_records = false;
    let report = run_suite(&family(2001, 100, N_MAX, 1.0, Side::Outside), &cfg);
    let mut pass = report.passed();
    let mut parts = Vec::new();
    for (name, tol) in IDENTITIES {
        match report.summary.identity(name) {
            Some(c) => {
                pass &= c.checks > 0 && c.violations == 0 && c.worst <= tol;
                parts.push(format!("{name} {:.1e}", c.worst));
            }
            None => {
                pass = false;
                parts.push(format!("{name} missing"));
            }
        }
    }

    let one = C64::new(1.0, 0.0);
    let ps = PoleSet::new(vec![C64::new(2.0, 0.0)]).unwrap();
    let bp = ps.b_prime_modulus(one).unwrap();
    let t = ps.level_set_roots(one).unwrap();
    let c = ps.c_weights(&t).unwrap();
    let ls = LevelSetData::new(&ps, one).unwrap();
    let i = C64::new(0.0, 1.0);
    let kernel = ls.weighted_kernel_sum(ps.b_eval(i).unwrap(), i);
    let worked = (bp - 3.0).abs() <= 1e-12
        && c.len() == 1
        && (c[0] - 1.0 / 3.0).abs() <= 1e-12
        && (kernel - 0.6).abs() <= 1e-12;
    parts.push(format!("|B'(1)| = {bp}, C_1 = {}, kernel sum at i = {kernel}", c[0]));
    outcome(pass && worked, parts.join(", "))
}

fn product_ratio() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3001);
    let mut worst_below: f64 = f64::INFINITY;
    let mut worst_above: f64 = f64::INFINITY;
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=20);
        let xs: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..=1.0)).collect();
        let (l, r) = product_ratio_gap(&xs).unwrap();
        worst_below = worst_below.min(l - r);
        let xs: Vec<f64> = (0..n).map(|_| rng.gen_range(1.0..=10.0)).collect();
        let (l, r) = product_ratio_gap(&xs).unwrap();
        worst_above = worst_above.min(r - l);
    }
    let exact = product_ratio_gap(&[0.0, 0.0]).unwrap() == (2.0, 1.0) && {
        let (l, r): (f64, f64) = product_ratio_gap(&[2.0, 3.0]).unwrap();
        (l + 5.0 / 6.0).abs() <= 4.0 * f64::EPSILON && (r + 5.0 / 7.0).abs() <= 4.0 * f64::EPSILON
    };
    outcome(
        worst_below >= -1e-12 && worst_above >= -1e-12 && exact,
        format!("min slack on [0,1]: {worst_below:.2e}, on [1,10]: {worst_above:.2e}, spot checks {exact}"),
    )
}

fn polynomial_corollaries() -> Outcome {
    let one = C64::new(1.0, 0.0);
    let p = Polynomial::from_real_coeffs(&[1.0, 1.0]);
    let el = poly_bound(&p, one, 1.0, PolyBound::ErdosLaxRefined).unwrap();
    let el_ok = (el.lhs - el.rhs).abs() <= 1e-12;

    let mut dub_ok = true;
    for n in 1..=6 {
        let v = poly_bound(&Polynomial::monomial(n), one, 1.0, PolyBound::DubininRefined).unwrap();
        dub_ok &= v.pass && (v.rhs - (n as f64 + 1.0) / 2.0).abs() <= 1e-12;
        if n == 1 {
            dub_ok &= (v.lhs - v.rhs).abs() <= 1e-12;
        }
    }

    let mut checked = 0usize;
    let mut failures = 0usize;
    let mut min_rel: f64 = f64::INFINITY;
    for (seed, k) in [(4001, 0.5), (4002, 1.0)] {
        for spec in family(seed, 200, N_MAX, k, Side::Inside) {
            let p = gen_instance(&spec).unwrap().numerator().clone();
            let ev = PolyEvaluator::new(p).unwrap().with_tolerance(TOL);
            let extra = ev.sup_theta();
            let thetas = (0..DEFAULT_POINTS).map(|j| TAU * j as f64 / DEFAULT_POINTS as f64).chain([extra]);
            for theta in thetas {
                let v = ev.bound(C64::from_polar(1.0, theta), k, PolyBound::TuranMalikRefined).unwrap();
                checked += 1;
                failures += usize::from(!v.pass);
                min_rel = min_rel.min(v.relative_margin());
            }
        }
    }
    outcome(
        el_ok && dub_ok && failures == 0,
        format!(
            "erdos-lax-refined equality {:.1e}, dubinin on z^n {dub_ok}, turan-malik-refined {checked} checks, {failures} failures, min rel margin {min_rel:.2e}",
            (el.lhs - el.rhs).abs()
        ),
    )
}

fn limit() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, p, k, fam) in builtin_limit_cases() {
        let t = limit_study(&p, k, &[10.0, 100.0, 1000.0], fam).unwrap();
        pass &= t.converged();
        parts.push(format!(
            "{name}: monotone {}, gap at 1000 {:.3e}",
            t.monotone(),
            t.final_gap().unwrap_or(f64::NAN)
        ));
    }
    outcome(pass, parts.join(", "))
}

/// Dense-grid maximum of `f` over `samples` equispaced angles, and the same
/// refined by a parabola through each grid-local maximum.
fn grid_oracle(f: impl Fn(f64) -> f64, samples: usize) -> (f64, f64) {
    let h = TAU / samples as f64;
    let vals: Vec<f64> = (0..samples).map(|j| f(h * j as f64)).collect();
    let raw = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut refined = raw;
    for j in 0..samples {
        let (l, c, r) = (vals[(j + samples - 1) % samples], vals[j], vals[(j + 1) % samples]);
        if c >= l && c >= r {
            let curv = l - 2.0 * c + r;
            if curv < 0.0 {
                let off = 0.5 * (l - r) / curv;
                refined = refined.max(c - 0.25 * (l - r) * off);
            }
        }
    }
    (raw, refined)
}

/// `R'(z)` by the trapezoidal rule on `R(ζ)/(ζ - z)^2` over a circle about
/// `z` at half the distance to the nearest pole.
fn cauchy_derivative(r: &blaschke_bounds::RationalFn64, z: C64) -> C64 {
    let rho = 0.5 * r.poles().poles().iter().map(|a| (a - z).norm()).fold(f64::INFINITY, f64::min);
    let nodes = 512;
    let sum: C64 = (0..nodes)
        .map(|j| {
            let w = C64::from_polar(1.0, TAU * j as f64 / nodes as f64);
            r.eval(z + rho * w).unwrap() / w
        })
        .sum();
    sum / (rho * nodes as f64)
}

fn numerics_oracles() -> Outcome {
    let mut worst_sup: f64 = 0.0;
    let mut below_grid = 0usize;
    let mut worst_fd: f64 = 0.0;
    let mut worst_cauchy: f64 = 0.0;
    let h = 1e-5;
    let specs = family(5001, 200, N_MAX, 1.0, Side::Outside);
    for spec in &specs {
        let r = gen_instance(spec).unwrap();
        let sup = r.sup_norm_circle().value;
        let (raw, refined) = grid_oracle(|t| r.eval(C64::from_polar(1.0, t)).unwrap().norm(), 100_000);
        if sup < raw * (1.0 - 1e-12) {
            below_grid += 1;
        }
        worst_sup = worst_sup.max((sup - refined).abs() / refined);
        for j in 0..32 {
            let z = C64::from_polar(1.0, TAU * (j as f64 + 0.5) / 32.0);
            let fd = (r.eval(z + h).unwrap() - r.eval(z - h).unwrap()) / (2.0 * h);
            let d = r.eval_prime(z).unwrap();
            worst_fd = worst_fd.max((d - fd).norm());
            worst_cauchy = worst_cauchy.max((d - cauchy_derivative(&r, z)).norm() / d.norm().max(1.0));
        }
    }
    outcome(
        below_grid == 0 && worst_sup <= 1e-9 && worst_fd <= 1e-6,
        format!(
            "{} instances: sup below grid max {below_grid}, worst rel gap to refined grid {worst_sup:.2e}, worst |R' - FD| {worst_fd:.2e}, worst rel gap to contour integral {worst_cauchy:.2e}",
            specs.len()
        ),
    )
}

fn csv_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| -> Vec<u8> {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_bb"))
            .args(["fuzz", "--seed", "42", "--count", "200", "--lambda-sweep", "--csv"])
            .arg(&path)
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .unwrap()
            .status;
        assert!(status.success(), "bb fuzz exited with {status}");
        std::fs::read(path).unwrap()
    };
    let a = run("a.csv", "1");
    let b = run("b.csv", "4");
    let c = run("c.csv", "4");
    let header = a.split(|&b| b == b'\n').next().unwrap_or_default() == b"instance_id,bound_kind,lambda_re,lambda_im,theta,lhs,rhs,margin,pass";
    let rows = a.iter().filter(|&&b| b == b'\n').count();
    outcome(
        a == b && b == c && header && rows > 1,
        format!("{} bytes, {rows} lines, identical across 1 and 4 threads: {}", a.len(), a == b && b == c),
    )
}

fn main() -> ExitCode {
    let (ineq, orderings) = inequality_suite();
    let results = [
        ("inequality suite", ineq),
        ("orderings", orderings),
        ("sharpness", sharpness()),
        ("identities", identities()),
        ("product ratio", product_ratio()),
        ("polynomial corollaries", polynomial_corollaries()),
        ("pole-to-infinity limit", limit()),
        ("numerical oracles", numerics_oracles()),
        ("csv determinism", csv_determinism()),
    ];
    let mut failed = 0;
    for (i, (name, o)) in results.iter().enumerate() {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {} {name}: {tag}\n    {}", i + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
