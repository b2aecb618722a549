//! The completed indefinite theta function `ϑ̂`, the completed rank-2
//! generating function and its `τ̄`-derivative at `z = ½`.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::appell::{a_hat_spec, appell_spec_nonhol, eval_pole_series};
use super::special::{beta_nu_scaled, completion_e, phase, sgn_minus_e_scaled, Nu};
use super::sums::{sum_1d, sum_2d, NumericResult};
use super::{CheckReport, HPoint, NumericError};
use crate::invariants::{f2, specialize_at_half};
use crate::lattice::Polarization;
use crate::qseries::{PoleSeries, QExp};

/// Tolerance pinned for the cancellation of the first-line completion term.
pub const CANCELLATION_TOLERANCE: f64 = 1e-8;
/// Tolerance pinned for the closed-form `∂_τ̄ f̂₂` against a finite difference.
pub const DTAUBAR_TOLERANCE: f64 = 1e-4;
/// Step of the central finite differences.
pub const FD_STEP: f64 = 1e-4;

fn sgn_f(x: f64) -> i32 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

fn parity_sign(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `Σ_ℓ` with a real polarization `J = mC + (mℓ+n)f`; classes are written
/// `c = NC − Mf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealPolarization {
    pub ell: u32,
    pub m: f64,
    pub n: f64,
}

impl RealPolarization {
    pub fn new(ell: u32, m: f64, n: f64) -> Result<Self, NumericError> {
        let p = RealPolarization { ell, m, n };
        let j2 = p.j2();
        if j2.is_nan() || j2 <= 0.0 {
            return Err(NumericError::DegeneratePolarization);
        }
        Ok(p)
    }

    pub fn from_polarization(ell: u32, j: &Polarization) -> Result<Self, NumericError> {
        let m = j.m.to_f64().unwrap_or(f64::NAN);
        let n = j.n.to_f64().unwrap_or(f64::NAN);
        Self::new(ell, m, n)
    }

    pub(crate) fn l_f64(&self) -> f64 {
        self.ell as f64
    }

    /// `J² = m(ℓm + 2n)`.
    pub fn j2(&self) -> f64 {
        self.m * (self.l_f64() * self.m + 2.0 * self.n)
    }

    /// `K·J = −(ℓ+2)m − 2n`.
    pub fn kj(&self) -> f64 {
        -(self.l_f64() + 2.0) * self.m - 2.0 * self.n
    }

    /// `c·J = Nn − Mm`.
    pub fn cj(&self, big_n: f64, big_m: f64) -> f64 {
        big_n * self.n - big_m * self.m
    }

    /// `(N₁C − M₁f)·(N₂C − M₂f)`.
    pub fn dot(&self, n1: f64, m1: f64, n2: f64, m2: f64) -> f64 {
        -self.l_f64() * n1 * n2 - n1 * m2 - m1 * n2
    }

    /// `c·K = (ℓ−2)N + 2M`.
    pub fn ck(&self, big_n: f64, big_m: f64) -> f64 {
        (self.l_f64() - 2.0) * big_n + 2.0 * big_m
    }
}

/// Per-class data of `c = NC − Mf` entering the completions.
pub(crate) struct Projected {
    pub(crate) cj: f64,
    pub(crate) c2: f64,
    pub(crate) cp2: f64,
    pub(crate) cm2: f64,
    /// `K·c₋ = K·c − (c·J)(K·J)/J²`.
    pub(crate) k_cm: f64,
    /// `(−1)^{K·c}`.
    pub(crate) sign: f64,
}

pub(crate) fn project(j: &RealPolarization, big_n: i64, big_m: i64) -> Projected {
    let (nf, mf) = (big_n as f64, big_m as f64);
    let cj = j.cj(nf, mf);
    let c2 = j.dot(nf, mf, nf, mf);
    let cp2 = cj * cj / j.j2();
    let ck = (j.ell as i64 - 2) * big_n + 2 * big_m;
    Projected { cj, c2, cp2, cm2: c2 - cp2, k_cm: ck as f64 - cj * j.kj() / j.j2(), sign: parity_sign(ck) }
}

/// `ϑ̂^{m,n}_{α,β}(z,τ) = Σ ½[E((−M + 2(ℓ+2)Im z/y)√(y/ℓ)) − E((c·J + 2(2n+(ℓ+2)m)Im z/y)√(y/J²))] w^{c·K} q^{−c²/4}`
/// over `N = 2b − β`, `M = 2a − α`.
pub fn theta_hat(
    j: &RealPolarization,
    alpha: i64,
    beta: i64,
    z: Complex64,
    tau: Complex64,
) -> Result<NumericResult, NumericError> {
    check_tau(tau)?;
    let y = tau.im;
    let l = j.l_f64();
    let shift_f = 2.0 * (l + 2.0) * z.im / y;
    let shift_j = 2.0 * (2.0 * j.n + (l + 2.0) * j.m) * z.im / y;
    Ok(sum_2d(|a, b| {
        let (big_n, big_m) = (2 * b - beta, 2 * a - alpha);
        let (nf, mf) = (big_n as f64, big_m as f64);
        let x1 = (-mf + shift_f) * (y / l).sqrt();
        let x2 = (j.cj(nf, mf) + shift_j) * (y / j.j2()).sqrt();
        let arg = z * j.ck(nf, mf) - tau * (j.dot(nf, mf, nf, mf) / 4.0);
        let log_scale = -2.0 * PI * arg.im;
        let (s1, s2) = (sgn_f(x1), sgn_f(x2));
        // E₁ − E₂ = (s₂ − E₂) − (s₁ − E₁) + (s₁ − s₂)
        let mut weight = sgn_minus_e_scaled(s2, x2, log_scale) - sgn_minus_e_scaled(s1, x1, log_scale);
        if s1 != s2 {
            weight += (s1 - s2) as f64 * log_scale.exp();
        }
        0.5 * weight * phase(Complex64::new(arg.re, 0.0))
    }))
}

/// The non-holomorphic part of the first line of `ϑ̂`:
/// `Σ ½(E((−M + 2(ℓ+2)Im z/y)√(y/ℓ)) − sgn(−M)) w^{c·K} q^{−c²/4}`.
pub fn theta_hat_first_line(
    ell: u32,
    alpha: i64,
    beta: i64,
    z: Complex64,
    tau: Complex64,
) -> Result<NumericResult, NumericError> {
    check_tau(tau)?;
    let y = tau.im;
    let l = ell as f64;
    let li = ell as i64;
    let shift_f = 2.0 * (l + 2.0) * z.im / y;
    // for fixed M the sum over N is an ordinary theta series
    Ok(sum_1d(|a| {
        let big_m = 2 * a - alpha;
        let mf = big_m as f64;
        let x1 = (-mf + shift_f) * (y / l).sqrt();
        let inner = |log_weight: f64| {
            sum_1d(|b| {
                let nf = (2 * b - beta) as f64;
                let arg = z * ((li - 2) as f64 * nf + 2.0 * mf) + tau * (l * nf * nf / 4.0 + nf * mf / 2.0);
                let log_scale = -2.0 * PI * arg.im + log_weight;
                log_scale.exp() * phase(Complex64::new(arg.re, 0.0))
            })
            .value
        };
        let s1 = sgn_f(x1);
        if s1 == sgn_f(-mf) {
            // E − sgn = −(sgn − E), small and computed scaled
            let t = std::f64::consts::PI.sqrt() * x1.abs();
            if s1 == 0 {
                return Complex64::new(0.0, 0.0);
            }
            let log_weight = super::special::erfcx(t).ln() - t * t;
            -0.5 * s1 as f64 * inner(log_weight)
        } else {
            0.5 * (completion_e(x1) - sgn_f(-mf) as f64) * inner(0.0)
        }
    }))
}

/// `first line + Â_nonhol`, which vanishes.
pub fn first_line_cancellation(
    ell: u32,
    alpha: i64,
    beta: i64,
    z: Complex64,
    tau: Complex64,
) -> Result<CheckReport, NumericError> {
    let first = theta_hat_first_line(ell, alpha, beta, z, tau)?.value;
    let appell = appell_spec_nonhol(ell, alpha, beta, z, tau)?.value;
    let residual = (first + appell).norm() / appell.norm().max(1e-300);
    let name = format!("first-line cancellation l={ell} ({alpha},{beta})");
    Ok(CheckReport::new(&name, HPoint::new(tau, z), residual, CANCELLATION_TOLERANCE))
}

/// `f̂_{2,βC−αf}(z,τ) = Â_{ℓ,(α,β)}(z,τ) + ϑ̂^{m,n}_{α,β}(z,τ)`.
pub fn f2hat(
    j: &RealPolarization,
    alpha: i64,
    beta: i64,
    z: Complex64,
    tau: Complex64,
) -> Result<NumericResult, NumericError> {
    let a = a_hat_spec(j.ell, alpha, beta, z, tau)?;
    let t = theta_hat(j, alpha, beta, z, tau)?;
    Ok(NumericResult { value: a.value + t.value, tail_bound: a.tail_bound + t.tail_bound })
}

fn check_tau(tau: Complex64) -> Result<(), NumericError> {
    if tau.im <= 0.0 {
        return Err(NumericError::NotInUpperHalfPlane(tau.im));
    }
    Ok(())
}

/// The non-holomorphic part of `f̂_{2,c₁}(τ)`:
/// `Σ_{c ∈ −c₁ + 2H²} (K·J|c·J|/(8πJ²) β_{3/2}(c₊²y) − ¼ K·c₋ sgn(c·J) β_{1/2}(c₊²y)) (−1)^{K·c} q^{−c²/4}`,
/// with the `c·J = 0` terms at their limit `K·J/(4π√(J²y))`.
pub fn f2hat_nonhol(j: &RealPolarization, alpha: i64, beta: i64, tau: Complex64) -> Result<NumericResult, NumericError> {
    check_tau(tau)?;
    let y = tau.im;
    let err = std::cell::RefCell::new(None);
    let r = sum_2d(|a, b| {
        let p = project(j, 2 * b - beta, 2 * a - alpha);
        let arg = -tau * (p.c2 / 4.0);
        let log_scale = -2.0 * PI * arg.im;
        let ph = p.sign * phase(Complex64::new(arg.re, 0.0));
        if p.cj == 0.0 {
            return j.kj() / (4.0 * PI * (j.j2() * y).sqrt()) * log_scale.exp() * ph;
        }
        let x = p.cp2 * y;
        let b32 = beta_nu_scaled(Nu::ThreeHalves, x, log_scale);
        let b12 = beta_nu_scaled(Nu::Half, x, log_scale);
        match (b32, b12) {
            (Ok(b32), Ok(b12)) => {
                let w = j.kj() * p.cj.abs() / (8.0 * PI * j.j2()) * b32 - 0.25 * p.k_cm * p.cj.signum() * b12;
                w * ph
            }
            (Err(e), _) | (_, Err(e)) => {
                *err.borrow_mut() = Some(e);
                Complex64::new(0.0, 0.0)
            }
        }
    });
    match err.into_inner() {
        Some(e) => Err(e),
        None => Ok(r),
    }
}

/// Holomorphic `f_{2,c₁}(τ) = −½ (w∂_w f_{2,c₁})(w = −1)` from the exact series,
/// evaluated at `τ` with enough terms for double precision.
pub fn f2_at_half(
    ell: u32,
    alpha: i64,
    beta: i64,
    j: &Polarization,
    tau: Complex64,
) -> Result<NumericResult, NumericError> {
    check_tau(tau)?;
    // |q|^{qmax} ≤ 1e−17
    let qmax = ((17.0 * 10f64.ln()) / (2.0 * PI * tau.im)).ceil() as i64 + 1;
    let qmax = QExp::from_integer(qmax.clamp(2, 40));
    let f = f2(ell, alpha, beta, j, qmax)?;
    let series = specialize_at_half(&f, 2, qmax).map_err(NumericError::from)?;
    eval_pole_series(&PoleSeries::from_series(series), Complex64::new(0.0, 0.0), tau)
}

/// `f̂_{2,c₁}(τ) = f_{2,c₁}(τ) + f2hat_nonhol`.
pub fn f2hat_euler(
    ell: u32,
    alpha: i64,
    beta: i64,
    j: &Polarization,
    tau: Complex64,
) -> Result<NumericResult, NumericError> {
    let real = RealPolarization::from_polarization(ell, j)?;
    let hol = f2_at_half(ell, alpha, beta, j, tau)?;
    let non = f2hat_nonhol(&real, alpha, beta, tau)?;
    Ok(NumericResult { value: hol.value + non.value, tail_bound: hol.tail_bound + non.tail_bound })
}

/// Closed form of `∂_τ̄ f̂_{2,c₁}(τ)`:
/// `−iK·J/(16π√J² y^{3/2}) Σ (−1)^{K·c} q^{−c₋²/4} q̄^{c₊²/4} + i/(8√y) Σ K·c₋ (c·J/√J²)(−1)^{K·c} q^{−c₋²/4} q̄^{c₊²/4}`.
///
/// The overall sign is the one a finite difference of [`f2hat_nonhol`] produces.
pub fn dtaubar_f2hat(j: &RealPolarization, alpha: i64, beta: i64, tau: Complex64) -> Result<NumericResult, NumericError> {
    check_tau(tau)?;
    let y = tau.im;
    let sj = j.j2().sqrt();
    let weights = sum_2d(|a, b| {
        let p = project(j, 2 * b - beta, 2 * a - alpha);
        let qq = phase(-tau * (p.cm2 / 4.0) - tau.conj() * (p.cp2 / 4.0));
        let c1 = -Complex64::i() * j.kj() / (16.0 * PI * sj * y.powf(1.5));
        let c2 = Complex64::i() / (8.0 * y.sqrt()) * p.k_cm * p.cj / sj;
        (c1 + c2) * p.sign * qq
    });
    Ok(weights)
}

fn central(g: &impl Fn(Complex64) -> Result<Complex64, NumericError>, tau: Complex64, step: Complex64) -> Result<Complex64, NumericError> {
    Ok((g(tau + step)? - g(tau - step)?) / (2.0 * step.norm()))
}

/// Central difference along `step`, Richardson-extrapolated once.
fn richardson(g: &impl Fn(Complex64) -> Result<Complex64, NumericError>, tau: Complex64, step: Complex64) -> Result<Complex64, NumericError> {
    let coarse = central(g, tau, step)?;
    let fine = central(g, tau, step / 2.0)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// `½(∂_x + i∂_y) g` by central differences with step `h`.
pub fn fd_dtaubar(
    g: impl Fn(Complex64) -> Result<Complex64, NumericError>,
    tau: Complex64,
    h: f64,
) -> Result<Complex64, NumericError> {
    let dx = richardson(&g, tau, Complex64::new(h, 0.0))?;
    let dy = richardson(&g, tau, Complex64::new(0.0, h))?;
    Ok(0.5 * (dx + Complex64::i() * dy))
}

/// `½(∂_x − i∂_y) g` by central differences with step `h`.
pub fn fd_dtau(
    g: impl Fn(Complex64) -> Result<Complex64, NumericError>,
    tau: Complex64,
    h: f64,
) -> Result<Complex64, NumericError> {
    let dx = richardson(&g, tau, Complex64::new(h, 0.0))?;
    let dy = richardson(&g, tau, Complex64::new(0.0, h))?;
    Ok(0.5 * (dx - Complex64::i() * dy))
}

/// Closed-form `∂_τ̄ f̂₂(τ)` against a central difference of `f̂₂(τ)`.
pub fn dtaubar_check(
    ell: u32,
    alpha: i64,
    beta: i64,
    j: &Polarization,
    tau: Complex64,
) -> Result<CheckReport, NumericError> {
    let real = RealPolarization::from_polarization(ell, j)?;
    let fd = fd_dtaubar(|t| Ok(f2hat_euler(ell, alpha, beta, j, t)?.value), tau, FD_STEP)?;
    let closed = dtaubar_f2hat(&real, alpha, beta, tau)?.value;
    let residual = (fd - closed).norm() / closed.norm().max(1e-300);
    let name = format!("dtaubar f2hat l={ell} ({alpha},{beta}) J=({},{})", j.m, j.n);
    Ok(CheckReport::new(&name, HPoint::new(tau, Complex64::new(0.5, 0.0)), residual, DTAUBAR_TOLERANCE))
}

/// `f̂₂(z,τ)` against `Â + ϑ̂` evaluated through the exact series when `y` is
/// large, where all completion terms are negligible.
pub fn large_y_limit(
    ell: u32,
    alpha: i64,
    beta: i64,
    j: &Polarization,
    z: Complex64,
    tau: Complex64,
) -> Result<(Complex64, Complex64), NumericError> {
    let real = RealPolarization::from_polarization(ell, j)?;
    let completed = f2hat(&real, alpha, beta, z, tau)?.value;
    let qmax = QExp::from_integer(6);
    let exact = f2(ell, alpha, beta, j, qmax)?;
    let exact = eval_pole_series(&exact, z, tau)?.value;
    Ok((completed, exact))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Side;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn degenerate_polarization() {
        assert_eq!(RealPolarization::new(1, 0.0, 1.0), Err(NumericError::DegeneratePolarization));
    }

    #[test]
    fn first_line_cancels_appell_completion() {
        let (z, tau) = (c(0.13, 0.04), c(0.1, 0.9));
        for ell in 1..=3 {
            for (alpha, beta) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                let r = first_line_cancellation(ell, alpha, beta, z, tau).unwrap();
                assert!(r.pass, "{r:?}");
            }
        }
    }

    #[test]
    fn dtaubar_matches_finite_difference() {
        let j = Polarization::integral(1, 1, Side::Plus).unwrap();
        let r = dtaubar_check(1, 1, 1, &j, c(0.11, 0.93)).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn beta_three_halves_prefactor() {
        // a single term with c·J ≠ 0 at large y is dominated by its β_{3/2} piece
        let j = RealPolarization::new(1, 1.0, 1.0).unwrap();
        let p = project(&j, 1, 0);
        assert_eq!(p.cj, 1.0);
        assert!((p.k_cm - (-1.0 - 1.0 * (-5.0) / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn completion_fades_at_large_y() {
        let j = Polarization::integral(1, 1, Side::Exact).unwrap();
        for (alpha, beta) in [(0, 1), (1, 1)] {
            let (a, b) = large_y_limit(1, alpha, beta, &j, c(0.11, 0.0), c(0.2, 30.0)).unwrap();
            assert!((a - b).norm() < 1e-10, "{a} {b}");
        }
        let (z, tau) = (c(0.11, 0.0), c(0.2, 30.0));
        for ell in 1..=3 {
            let hat = crate::completions::a_hat_spec(ell, 1, 1, z, tau).unwrap().value;
            let hol = crate::completions::appell_spec(ell, 1, 1, z, tau).unwrap().value;
            assert!((hat - hol).norm() < 1e-10);
        }
    }
}
