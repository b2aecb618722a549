//! Adaptive lattice sums with a truncation estimate.
//!
//! Terms are summed shell by shell (`max|kᵢ| = s`) until two consecutive
//! shells are negligible. The reported tail bound is twice the total size of
//! the next three shells, which dominates the remainder for Gaussian decay.

use num_complex::Complex64;
use serde::Serialize;

/// A floating-point value with a bound on its truncation error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NumericResult {
    #[serde(serialize_with = "super::complex_pair")]
    pub value: Complex64,
    pub tail_bound: f64,
}

impl NumericResult {
    pub fn exact(value: Complex64) -> Self {
        NumericResult { value, tail_bound: 0.0 }
    }

    pub fn map(self, f: impl FnOnce(Complex64) -> Complex64, scale: f64) -> Self {
        NumericResult { value: f(self.value), tail_bound: self.tail_bound * scale }
    }
}

const REL_TOL: f64 = 1e-17;
const ABS_TOL: f64 = 1e-60;
const MAX_SHELL: i64 = 4_000;

fn shell_1d(f: &impl Fn(i64) -> Complex64, s: i64) -> (Complex64, f64) {
    if s == 0 {
        let v = f(0);
        return (v, v.norm());
    }
    let (a, b) = (f(s), f(-s));
    (a + b, a.norm() + b.norm())
}

fn shell_2d(f: &impl Fn(i64, i64) -> Complex64, s: i64) -> (Complex64, f64) {
    if s == 0 {
        let v = f(0, 0);
        return (v, v.norm());
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut size = 0.0;
    let mut add = |v: Complex64| {
        acc += v;
        size += v.norm();
    };
    for k in -s..=s {
        add(f(k, s));
        add(f(k, -s));
    }
    for k in -s + 1..s {
        add(f(s, k));
        add(f(-s, k));
    }
    (acc, size)
}

fn run(shell: impl Fn(i64) -> (Complex64, f64), max_shell: Option<i64>) -> NumericResult {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut quiet = 0;
    let mut s = 0;
    loop {
        let (v, size) = shell(s);
        acc += v;
        let negligible = size <= REL_TOL * acc.norm() || size <= ABS_TOL;
        quiet = if negligible { quiet + 1 } else { 0 };
        let done = match max_shell {
            Some(m) => s >= m,
            None => (s >= 3 && quiet >= 2) || s >= MAX_SHELL,
        };
        if done {
            break;
        }
        s += 1;
    }
    let tail: f64 = (s + 1..=s + 3).map(|k| shell(k).1).sum();
    NumericResult { value: acc, tail_bound: 2.0 * tail }
}

/// `Σ_{k∈Z} f(k)`.
pub fn sum_1d(f: impl Fn(i64) -> Complex64) -> NumericResult {
    run(|s| shell_1d(&f, s), None)
}

/// `Σ_{|k|≤cutoff} f(k)`.
pub fn sum_1d_cutoff(f: impl Fn(i64) -> Complex64, cutoff: i64) -> NumericResult {
    run(|s| shell_1d(&f, s), Some(cutoff))
}

/// `Σ_{(a,b)∈Z²} f(a, b)`.
pub fn sum_2d(f: impl Fn(i64, i64) -> Complex64) -> NumericResult {
    run(|s| shell_2d(&f, s), None)
}

/// `Σ_{max(|a|,|b|)≤cutoff} f(a, b)`.
pub fn sum_2d_cutoff(f: impl Fn(i64, i64) -> Complex64, cutoff: i64) -> NumericResult {
    run(|s| shell_2d(&f, s), Some(cutoff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gaussian_sum() {
        // Σ e^{−πk²t} = t^{−1/2} Σ e^{−πk²/t}
        let t = 0.7;
        let lhs = sum_1d(|k| Complex64::new((-PI * (k * k) as f64 * t).exp(), 0.0));
        let rhs = sum_1d(|k| Complex64::new((-PI * (k * k) as f64 / t).exp() / t.sqrt(), 0.0));
        assert!((lhs.value - rhs.value).norm() < 1e-14);
    }

    #[test]
    fn cutoff_doubling_within_bound() {
        let f = |a: i64, b: i64| Complex64::new((-0.3 * (a * a + a * b + b * b) as f64).exp(), 0.0);
        for cut in [2, 4, 6] {
            let r1 = sum_2d_cutoff(f, cut);
            let r2 = sum_2d_cutoff(f, 2 * cut);
            assert!((r1.value - r2.value).norm() <= r1.tail_bound, "cut {cut}");
        }
    }
}
