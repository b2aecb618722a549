//! Error-function variants and the elementary modular functions in floating point.

use std::f64::consts::PI;

use num_complex::Complex64;
use libm::{erf, erfc};

use super::NumericError;

/// `e(x) = exp(2πi x)`.
pub fn phase(x: Complex64) -> Complex64 {
    (Complex64::i() * 2.0 * PI * x).exp()
}

/// `E(x) = 2∫₀ˣ e^{−πu²} du = erf(√π x)`.
pub fn completion_e(x: f64) -> f64 {
    erf(PI.sqrt() * x)
}

/// `e^{t²} erfc(t)` for `t ≥ 0`, finite for all `t`.
pub fn erfcx(t: f64) -> f64 {
    debug_assert!(t >= 0.0);
    if t < 10.0 {
        (t * t).exp() * erfc(t)
    } else {
        // continued fraction t + (1/2)/(t + 1/(t + (3/2)/(t + …))), evaluated backwards
        let mut acc = t;
        for k in (1..=60).rev() {
            acc = t + (k as f64 / 2.0) / acc;
        }
        1.0 / (PI.sqrt() * acc)
    }
}

/// `(sgn(s) − E(x))·e^{log_scale}`, computed without cancellation or overflow
/// when `x` has the sign `s`.
pub fn sgn_minus_e_scaled(s: i32, x: f64, log_scale: f64) -> f64 {
    let sf = s as f64;
    if s != 0 && sf * x > 0.0 {
        let t = PI.sqrt() * x.abs();
        sf * erfcx(t) * (log_scale - t * t).exp()
    } else {
        (sf - completion_e(x)) * log_scale.exp()
    }
}

/// The two incomplete-gamma weights of the completions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nu {
    Half,
    ThreeHalves,
}

/// `β_ν(x) = ∫ₓ^∞ u^{−ν} e^{−πu} du`.
pub fn beta_nu(nu: Nu, x: f64) -> Result<f64, NumericError> {
    beta_nu_scaled(nu, x, 0.0)
}

/// `β_ν(x)·e^{log_scale}`.
pub fn beta_nu_scaled(nu: Nu, x: f64, log_scale: f64) -> Result<f64, NumericError> {
    match nu {
        Nu::Half => {
            if x < 0.0 {
                return Err(NumericError::Domain(format!("β_1/2 needs x ≥ 0, got {x}")));
            }
            // β_{1/2}(x) = erfc(√(πx))
            let t = (PI * x).sqrt();
            Ok(erfcx(t) * (log_scale - t * t).exp())
        }
        Nu::ThreeHalves => {
            if x <= 0.0 {
                return Err(NumericError::Domain(format!("β_3/2 needs x > 0, got {x}")));
            }
            let half = beta_nu_scaled(Nu::Half, x, log_scale)?;
            Ok(2.0 / x.sqrt() * (log_scale - PI * x).exp() - 2.0 * PI * half)
        }
    }
}

fn check_tau(tau: Complex64) -> Result<(), NumericError> {
    if tau.im <= 0.0 {
        return Err(NumericError::NotInUpperHalfPlane(tau.im));
    }
    Ok(())
}

/// `η(τ) = q^{1/24} ∏(1 − qⁿ)`.
pub fn eta(tau: Complex64) -> Result<Complex64, NumericError> {
    check_tau(tau)?;
    let q = phase(tau);
    let mut p = phase(tau / 24.0);
    let mut qn = q;
    while qn.norm() > 1e-18 {
        p *= Complex64::new(1.0, 0.0) - qn;
        qn *= q;
    }
    Ok(p)
}

/// `Σ ε_j q^{r²/2} w^r` over `r = j + shift`, `j ∈ Z`, with `q^{r²/2} = e^{πiτr²}`
/// and `ε_j = (−1)^j` when `alternating`.
fn theta_sum(z: Complex64, tau: Complex64, shift: f64, alternating: bool) -> Complex64 {
    let term = |j: i64| {
        let r = j as f64 + shift;
        let sign = if alternating && j.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
        sign * phase(tau * (r * r / 2.0) + z * r)
    };
    let mut s = term(0);
    if shift != 0.0 {
        s += term(-1);
    }
    for k in 1.. {
        let lo = if shift != 0.0 { -k - 1 } else { -k };
        let shell = term(k) + term(lo);
        s += shell;
        let bound = term(k).norm() + term(lo).norm();
        if (k > 2 && bound < 1e-18 * s.norm().max(1e-300)) || k > 10_000 {
            break;
        }
    }
    s
}

/// `θ₁(z,τ) = i Σ_{r∈Z+½} (−1)^{r−½} q^{r²/2} w^r`.
pub fn theta1(z: Complex64, tau: Complex64) -> Result<Complex64, NumericError> {
    check_tau(tau)?;
    Ok(Complex64::i() * theta_sum(z, tau, 0.5, true))
}

/// `θ₂(z,τ) = Σ_{r∈Z+½} q^{r²/2} w^r`.
pub fn theta2(z: Complex64, tau: Complex64) -> Result<Complex64, NumericError> {
    check_tau(tau)?;
    Ok(theta_sum(z, tau, 0.5, false))
}

/// `θ₃(z,τ) = Σ_{n∈Z} q^{n²/2} wⁿ`.
pub fn theta3(z: Complex64, tau: Complex64) -> Result<Complex64, NumericError> {
    check_tau(tau)?;
    Ok(theta_sum(z, tau, 0.0, false))
}
