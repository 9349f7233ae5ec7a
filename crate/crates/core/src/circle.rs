//! Global maximization of a smooth periodic function of `θ ∈ [0, 2π)`.
//!
//! A uniform grid locates local maxima; the best few are refined by
//! golden-section search inside their grid brackets.

use crate::scalar::{wrap_angle, Scalar};

pub const GRID_SAMPLES: usize = 4096;
pub const REFINED_BRACKETS: usize = 3;
pub const THETA_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleMax<T> {
    pub theta: T,
    pub value: T,
    pub evaluations: usize,
}

/// Maximizes `f` over the circle. Ties within a few ulps resolve to the
/// smallest `θ`.
pub fn maximize<T: Scalar, F: Fn(T) -> T>(f: F) -> CircleMax<T> {
    maximize_with(f, GRID_SAMPLES, REFINED_BRACKETS)
}

pub fn maximize_with<T: Scalar, F: Fn(T) -> T>(f: F, samples: usize, brackets: usize) -> CircleMax<T> {
    let samples = samples.max(3);
    let h = T::TAU() / T::from_usize_lossy(samples);
    let grid: Vec<T> = (0..samples).map(|i| f(h * T::from_usize_lossy(i))).collect();
    let mut evaluations = samples;

    let mut peaks: Vec<usize> = (0..samples)
        .filter(|&i| {
            let prev = grid[(i + samples - 1) % samples];
            let next = grid[(i + 1) % samples];
            grid[i] >= prev && grid[i] >= next
        })
        .collect();
    peaks.sort_by(|&a, &b| grid[b].partial_cmp(&grid[a]).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b)));
    peaks.truncate(brackets);

    let mut candidates: Vec<(T, T)> = Vec::with_capacity(2 * peaks.len() + 1);
    for &i in &peaks {
        let centre = h * T::from_usize_lossy(i);
        candidates.push((centre, grid[i]));
        let (theta, value, used) = golden_max(&f, centre - h, centre + h, T::lit(THETA_TOL));
        evaluations += used;
        candidates.push((wrap_angle(theta), value));
    }
    if candidates.is_empty() {
        candidates.push((T::zero(), grid[0]));
    }

    let tie = T::lit(4.0) * T::epsilon();
    let best_value = candidates.iter().map(|c| c.1).fold(T::neg_infinity(), T::max);
    let (theta, value) = candidates
        .into_iter()
        .filter(|&(_, v)| v >= best_value - tie * best_value.abs())
        .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal))
        .expect("at least one candidate");
    CircleMax {
        theta,
        value,
        evaluations,
    }
}

/// Golden-section search for a maximum of `f` on `[lo, hi]`.
fn golden_max<T: Scalar, F: Fn(T) -> T>(f: &F, lo: T, hi: T, tol: T) -> (T, T, usize) {
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut used = 2;
    while (b - a) > tol && used < 200 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
        used += 1;
    }
    if f1 >= f2 {
        (x1, f1, used)
    } else {
        (x2, f2, used)
    }
}
