//! Appell functions, their completions and the specialisations that enter the
//! rank-2 generating functions.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::special::{eta, phase, sgn_minus_e_scaled, theta1};
use super::sums::{sum_1d, sum_1d_cutoff, NumericResult};
use super::NumericError;
use crate::qseries::PoleSeries;

const POLE_RADIUS: f64 = 1e-8;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `e(num)/(1 − e(den))`, rewritten as `−e(num − den)/(1 − e(−den))` when `|e(den)| > 1`.
fn pole_term(num: Complex64, den: Complex64) -> Complex64 {
    if den.im < 0.0 {
        -phase(num - den) / (c(1.0) - phase(-den))
    } else {
        phase(num) / (c(1.0) - phase(den))
    }
}

fn sgn_f(x: f64) -> i32 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

fn r_term(u: Complex64, tau: Complex64, j: i64) -> Complex64 {
    // r = j + ½; (sgn r − E((r + Im u/y)√(2y))) (−1)^{r−½} a^{−r} q^{−r²/2}
    let y = tau.im;
    let r = j as f64 + 0.5;
    let x = (r + u.im / y) * (2.0 * y).sqrt();
    let arg = -u * r - tau * (r * r / 2.0);
    // |a^{−r} q^{−r²/2}| = e^{−2π Im(arg)}
    let log_scale = -2.0 * PI * arg.im;
    let weight = sgn_minus_e_scaled(sgn_f(r), x, log_scale);
    let sign = if j.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    sign * weight * phase(c(arg.re))
}

/// `R(u,τ) = Σ_{r∈Z+½} (sgn r − E((r + Im u/y)√(2y))) (−1)^{r−½} a^{−r} q^{−r²/2}`.
pub fn r_function(u: Complex64, tau: Complex64) -> Result<NumericResult, NumericError> {
    check_tau(tau)?;
    Ok(sum_1d(|j| r_term(u, tau, j)))
}

/// `R(u,τ)` summed over `|j| ≤ cutoff` with `r = j + ½`.
pub fn r_function_cutoff(u: Complex64, tau: Complex64, cutoff: i64) -> Result<NumericResult, NumericError> {
    check_tau(tau)?;
    Ok(sum_1d_cutoff(|j| r_term(u, tau, j), cutoff))
}

fn check_tau(tau: Complex64) -> Result<(), NumericError> {
    if tau.im <= 0.0 {
        return Err(NumericError::NotInUpperHalfPlane(tau.im));
    }
    Ok(())
}

/// Reject `u` within `1e−8` of a pole `a qⁿ = 1`.
fn check_poles(u: Complex64, tau: Complex64) -> Result<(), NumericError> {
    // a qⁿ = 1 ⇔ u + nτ ∈ Z; only n near −Im u / y can come close
    let n0 = (-u.im / tau.im).round() as i64;
    for n in n0 - 1..=n0 + 1 {
        let d = Complex64::new(1.0, 0.0) - phase(u + tau * n as f64);
        if d.norm() < POLE_RADIUS {
            return Err(NumericError::NearPole);
        }
    }
    Ok(())
}

/// `A_ℓ(u,v,τ) = a^{ℓ/2} Σ_n (−1)^{ℓn} q^{ℓn(n+1)/2} bⁿ / (1 − a qⁿ)`, with `a^{ℓ/2} = e^{πiℓu}`.
pub fn appell_numeric(ell: u32, u: Complex64, v: Complex64, tau: Complex64) -> Result<NumericResult, NumericError> {
    check_tau(tau)?;
    check_poles(u, tau)?;
    let l = ell as f64;
    let pre = phase(u * (l / 2.0));
    let sum = sum_1d(|n| {
        let nf = n as f64;
        let sign = if (ell as i64 * n).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        sign * pole_term(tau * (l * nf * (nf + 1.0) / 2.0) + v * nf, u + tau * nf)
    });
    Ok(sum.map(|s| s * pre, pre.norm()))
}

/// `Â_ℓ = A_ℓ + (i/2) Σ_{k<ℓ} a^k θ₁(v + kτ + (ℓ−1)/2, ℓτ) R(ℓu − v − kτ − (ℓ−1)/2, ℓτ)`.
pub fn appell_completed(ell: u32, u: Complex64, v: Complex64, tau: Complex64) -> Result<NumericResult, NumericError> {
    let a = appell_numeric(ell, u, v, tau)?;
    let l = ell as f64;
    let mut corr = Complex64::new(0.0, 0.0);
    let mut tail = a.tail_bound;
    for k in 0..ell {
        let kf = k as f64;
        let shift = (l - 1.0) / 2.0;
        let th = theta1(v + tau * kf + shift, tau * l)?;
        let r = r_function(u * l - v - tau * kf - shift, tau * l)?;
        let ak = phase(u * kf);
        corr += ak * th * r.value;
        tail += 0.5 * (ak * th).norm() * r.tail_bound;
    }
    Ok(NumericResult { value: a.value + Complex64::new(0.0, 0.5) * corr, tail_bound: tail })
}

/// Holomorphic `A_{ℓ,(α,β)}(z,τ)`, summed directly over `n` so that it is valid
/// wherever the Appell sum converges.
pub fn appell_spec(ell: u32, alpha: i64, beta: i64, z: Complex64, tau: Complex64) -> Result<NumericResult, NumericError> {
    check_tau(tau)?;
    let l = ell as i64;
    let lf = ell as f64;
    let (alpha, beta) = (alpha.rem_euclid(2), beta.rem_euclid(2));
    let w4 = |n: i64| tau * (2 * n + beta) as f64 + z * 4.0;
    // poles at q^{2n+β} w⁴ = 1
    let n0 = (-(4.0 * z.im) / (2.0 * tau.im)).round() as i64;
    for n in n0 - 2..=n0 + 2 {
        if beta == 0 && n == 0 {
            continue;
        }
        if (c(1.0) - phase(w4(n))).norm() < POLE_RADIUS {
            return Err(NumericError::NearPole);
        }
    }
    if beta == 1 {
        let geo = sum_1d(|n| {
            let nf = n as f64;
            let e = tau * (lf * nf * (nf + 1.0) + (alpha * n) as f64) + z * (2 * (l - 2) * n) as f64;
            pole_term(e, w4(n))
        });
        let (pre, mut total) = if alpha == 1 {
            (phase(tau * ((lf + 2.0) / 4.0) + z * lf), geo)
        } else {
            (phase(tau * (lf / 4.0) + z * (lf - 2.0)), geo)
        };
        total = total.map(|x| x * pre, pre.norm());
        if alpha == 0 {
            let th = sum_1d(|n| {
                let t = (2 * n + 1) as f64;
                phase(tau * (lf * t * t / 4.0) + z * ((l - 2) as f64 * t))
            });
            total = NumericResult { value: total.value - 0.5 * th.value, tail_bound: total.tail_bound + 0.5 * th.tail_bound };
        }
        return Ok(total);
    }
    if (c(1.0) - phase(z * 4.0)).norm() < POLE_RADIUS {
        return Err(NumericError::NearPole);
    }
    let geo = sum_1d(|n| {
        let nf = n as f64;
        let e = tau * (lf * nf * nf + (alpha * n) as f64) + z * (2 * (l - 2) * n) as f64;
        pole_term(e, w4(n))
    });
    let eta3 = eta(tau)?.powu(3);
    let th = Complex64::i() * eta3 / theta1(z * 4.0, tau)?;
    let mut total = if alpha == 1 {
        let w2 = phase(z * 2.0);
        geo.map(|x| x * w2 + th, w2.norm())
    } else {
        geo.map(|x| x + th, 1.0)
    };
    if alpha == 0 {
        let t = sum_1d(|n| phase(tau * (lf * (n * n) as f64) + z * (2 * (l - 2) * n) as f64));
        total = NumericResult { value: total.value - 0.5 * t.value, tail_bound: total.tail_bound + 0.5 * t.tail_bound };
    }
    Ok(total)
}

/// The non-holomorphic completion term of `Â_{ℓ,(α,β)}(z,τ)`.
pub fn appell_spec_nonhol(ell: u32, alpha: i64, beta: i64, z: Complex64, tau: Complex64) -> Result<NumericResult, NumericError> {
    check_tau(tau)?;
    let l = ell as i64;
    let lf = ell as f64;
    let y = tau.im;
    let two_l = 2 * l;
    let mut value = Complex64::new(0.0, 0.0);
    let mut tail = 0.0;
    for k in 0..l {
        let r1 = (2 * k + beta * l + alpha).rem_euclid(two_l);
        let s1 = sum_1d(|j| {
            let n1 = (r1 + two_l * j) as f64;
            phase(z * ((lf - 2.0) / lf * n1) + tau * (n1 * n1 / (4.0 * lf)))
        });
        let r2 = (-2 * k - alpha).rem_euclid(two_l);
        let s2 = sum_1d(|j| {
            let n2 = r2 + two_l * j;
            let nf = n2 as f64;
            let x = (nf + 2.0 * (lf + 2.0) * z.im / y) * (y / lf).sqrt();
            let arg = z * (-(lf + 2.0) / lf * nf) - tau * (nf * nf / (4.0 * lf));
            let log_scale = -2.0 * PI * arg.im;
            sgn_minus_e_scaled(n2.signum() as i32, x, log_scale) * phase(c(arg.re))
        });
        value += s1.value * s2.value;
        tail += s1.value.norm() * s2.tail_bound + s2.value.norm() * s1.tail_bound + s1.tail_bound * s2.tail_bound;
    }
    Ok(NumericResult { value: value / 2.0, tail_bound: tail / 2.0 })
}

/// `Â_{ℓ,(α,β)}(z,τ)`.
pub fn a_hat_spec(ell: u32, alpha: i64, beta: i64, z: Complex64, tau: Complex64) -> Result<NumericResult, NumericError> {
    let h = appell_spec(ell, alpha, beta, z, tau)?;
    let n = appell_spec_nonhol(ell, alpha, beta, z, tau)?;
    Ok(NumericResult { value: h.value + n.value, tail_bound: h.tail_bound + n.tail_bound })
}

/// `A_{ℓ,(1,1)}(z,τ) = q^{(2−ℓ)/4} w^{−ℓ} A_ℓ(τ + 4z, ℓ/2 + τ + 2(ℓ−2)z, 2τ)`.
pub fn appell_spec_via_level(ell: u32, z: Complex64, tau: Complex64) -> Result<NumericResult, NumericError> {
    let l = ell as f64;
    let u = tau + z * 4.0;
    let v = c(l / 2.0) + tau + z * (2.0 * (l - 2.0));
    let a = appell_numeric(ell, u, v, tau * 2.0)?;
    let pre = phase(tau * ((2.0 - l) / 4.0) - z * l);
    Ok(a.map(|x| x * pre, pre.norm()))
}

/// Evaluate an exact truncated series at `(z, τ)`, dividing by its `(w^m − w^{−m})` factors.
pub fn eval_pole_series(p: &PoleSeries, z: Complex64, tau: Complex64) -> Result<NumericResult, NumericError> {
    check_tau(tau)?;
    let mut body = Complex64::new(0.0, 0.0);
    let mut last = 0.0;
    for (e, poly) in p.body().terms() {
        let ef = e.to_f64().unwrap_or(f64::NAN);
        let mut coeff = Complex64::new(0.0, 0.0);
        for (k, cq) in poly.terms() {
            coeff += cq.to_f64().unwrap_or(f64::NAN) * phase(z * k as f64);
        }
        let t = phase(tau * ef) * coeff;
        last = t.norm();
        body += t;
    }
    let mut den = Complex64::new(1.0, 0.0);
    for &m in p.den() {
        let mf = m as f64;
        den *= phase(z * mf) - phase(-z * mf);
    }
    if den.norm() < POLE_RADIUS {
        return Err(NumericError::NearPole);
    }
    // the first omitted order is comparable to the last kept one times |q|^{1/24}
    let tail = last * (-2.0 * PI * tau.im / 24.0).exp() / den.norm();
    Ok(NumericResult { value: body / den, tail_bound: tail })
}

/// Lerch sum `μ(u,v,τ) = A₁(u,v,τ)/θ₁(v,τ)`.
pub fn lerch_mu(u: Complex64, v: Complex64, tau: Complex64) -> Result<Complex64, NumericError> {
    let th = theta1(v, tau)?;
    if th.norm() < POLE_RADIUS {
        return Err(NumericError::NearPole);
    }
    Ok(appell_numeric(1, u, v, tau)?.value / th)
}

/// Both sides of `μ(u+z,v+z) − μ(u,v) = iη³θ₁(u+v+z)θ₁(z)/(θ₁(u)θ₁(v)θ₁(u+z)θ₁(v+z))`.
pub fn quasi_periodicity_sides(
    u: Complex64,
    v: Complex64,
    z: Complex64,
    tau: Complex64,
) -> Result<(Complex64, Complex64), NumericError> {
    let lhs = lerch_mu(u + z, v + z, tau)? - lerch_mu(u, v, tau)?;
    let t = |x| theta1(x, tau);
    let den = t(u)? * t(v)? * t(u + z)? * t(v + z)?;
    if den.norm() < POLE_RADIUS {
        return Err(NumericError::NearPole);
    }
    let rhs = Complex64::i() * eta(tau)?.powu(3) * t(u + v + z)? * t(z)? / den;
    Ok((lhs, rhs))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::appell_a;
    use crate::qseries::QExp;

    fn c2(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn r_cutoff_doubling() {
        let (u, tau) = (c2(0.23, 0.11), c2(0.1, 0.9));
        for cut in [3, 5] {
            let a = r_function_cutoff(u, tau, cut).unwrap();
            let b = r_function_cutoff(u, tau, 2 * cut).unwrap();
            assert!((a.value - b.value).norm() <= a.tail_bound);
        }
        let full = r_function(u, tau).unwrap();
        let big = r_function_cutoff(u, tau, 60).unwrap();
        assert!((full.value - big.value).norm() < 1e-13);
    }

    #[test]
    fn r_is_odd_under_u_negation() {
        // R(−u) = R(u) for Zwegers' R
        let (u, tau) = (c2(0.31, -0.07), c2(-0.2, 1.1));
        let a = r_function(u, tau).unwrap().value;
        let b = r_function(-u, tau).unwrap().value;
        assert!((a - b).norm() < 1e-12, "{a} {b}");
    }

    #[test]
    fn level_form_matches_specialisation() {
        let (z, tau) = (c2(0.17, 0.02), c2(0.13, 0.95));
        for ell in 1..=3 {
            let a = appell_spec(ell, 1, 1, z, tau).unwrap().value;
            let b = appell_spec_via_level(ell, z, tau).unwrap().value;
            assert!((a - b).norm() < 1e-12, "ℓ={ell}");
        }
    }

    #[test]
    fn exact_series_matches_direct_sum() {
        let (z, tau) = (c2(0.21, 0.01), c2(-0.17, 1.2));
        for ell in 1..=3 {
            for (alpha, beta) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                let exact = appell_a(ell, alpha, beta, QExp::from_integer(14)).unwrap();
                let a = eval_pole_series(&exact, z, tau).unwrap();
                let b = appell_spec(ell, alpha, beta, z, tau).unwrap();
                assert!((a.value - b.value).norm() < 1e-9, "ℓ={ell} ({alpha},{beta}): {} vs {}", a.value, b.value);
            }
        }
    }

    #[test]
    fn pole_is_detected() {
        let tau = c2(0.0, 1.0);
        assert!(matches!(appell_numeric(1, c2(0.0, 0.0), c2(0.3, 0.0), tau), Err(NumericError::NearPole)));
    }
}
