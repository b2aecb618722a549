//! Siegel–Narain theta functions of `Σ_ℓ`, the function `Υ_{c₁}` and the
//! holomorphic anomaly of the rank-2 partition function.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::special::{eta, phase};
use super::sums::{sum_2d, NumericResult};
use super::theta_hat::{dtaubar_f2hat, f2hat_nonhol, fd_dtau, fd_dtaubar, project, RealPolarization, FD_STEP};
use super::{relative_residual, CheckReport, HPoint, NumericError};

/// Tolerance pinned for the anomaly equation.
pub const ANOMALY_TOLERANCE: f64 = 1e-4;
/// Tolerance pinned for `D_r Θ = 0`.
pub const D_R_TOLERANCE: f64 = 1e-5;

const CLASSES: [(i64, i64); 4] = [(0, 0), (1, 0), (0, 1), (1, 1)];

/// `Θ_{r,μ}(ρ,τ) = Σ_{k ∈ rH² + rK/2 + μ} (−1)^{r k·K} q^{k₊²/2r} q̄^{−k₋²/2r} e^{2πi ρ·k}`
/// for `μ = βC − αf` and `ρ = ρ_C C + ρ_f f`.
pub fn siegel_narain_theta(
    j: &RealPolarization,
    r: u32,
    mu: (i64, i64),
    rho: [Complex64; 2],
    tau: Complex64,
) -> Result<NumericResult, NumericError> {
    if tau.im <= 0.0 {
        return Err(NumericError::NotInUpperHalfPlane(tau.im));
    }
    let rf = r as f64;
    let l = j.l_f64();
    let (beta, alpha) = mu;
    Ok(sum_2d(|a, b| {
        let big_n = rf * a as f64 - rf + beta as f64;
        let big_m = rf * b as f64 + rf * (2.0 + l) / 2.0 + alpha as f64;
        let kj = j.cj(big_n, big_m);
        let k2 = j.dot(big_n, big_m, big_n, big_m);
        let kp2 = kj * kj / j.j2();
        let km2 = k2 - kp2;
        let parity = (rf * j.ck(big_n, big_m)).round() as i64;
        let sign = if parity.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let rho_k = rho[0] * (-l * big_n - big_m) + rho[1] * big_n;
        sign * phase(tau * (kp2 / (2.0 * rf)) + tau.conj() * (km2 / (2.0 * rf)) + rho_k)
    }))
}

/// `Υ_{c₁}(τ) = Σ_{c ∈ −c₁+2H²} K·c₋ (c·J/√J²)(−1)^{K·c} q^{c₊²/4} q̄^{−c₋²/4}` for `c₁ = βC − αf`.
pub fn upsilon(j: &RealPolarization, alpha: i64, beta: i64, tau: Complex64) -> Result<NumericResult, NumericError> {
    if tau.im <= 0.0 {
        return Err(NumericError::NotInUpperHalfPlane(tau.im));
    }
    let sj = j.j2().sqrt();
    Ok(sum_2d(|a, b| {
        let p = project(j, 2 * b - beta, 2 * a - alpha);
        p.k_cm * p.cj / sj * p.sign * phase(tau * (p.cp2 / 4.0) + tau.conj() * (p.cm2 / 4.0))
    }))
}

type Q64 = Ratio<i64>;

/// Exact bookkeeping of `Υ_{c₁}` at an integral polarization `J_{m,n}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UpsilonReport {
    pub ell: u32,
    pub m: i64,
    pub n: i64,
    pub alpha: i64,
    pub beta: i64,
    /// Exponents of `q` and `q̄` up to this value were enumerated.
    pub bound: i64,
    pub terms: usize,
    /// Terms with `K·c₋ (c·J) ≠ 0`.
    pub nonzero_terms: usize,
    /// Distinct monomials `q^{c₊²/4} q̄^{−c₋²/4}`.
    pub monomials: usize,
    /// Monomials whose total coefficient is nonzero.
    pub nonzero_monomials: usize,
}

impl UpsilonReport {
    pub fn vanishes_termwise(&self) -> bool {
        self.nonzero_terms == 0
    }

    pub fn vanishes(&self) -> bool {
        self.nonzero_monomials == 0
    }
}

/// Sum `√J²·Υ_{c₁}` exactly, monomial by monomial, through `q^{bound} q̄^{bound}`.
pub fn upsilon_exact(ell: u32, m: i64, n: i64, alpha: i64, beta: i64, bound: i64) -> Result<UpsilonReport, NumericError> {
    let l = ell as i64;
    let j2 = m * (l * m + 2 * n);
    if j2 <= 0 {
        return Err(NumericError::DegeneratePolarization);
    }
    let kj = -(l + 2) * m - 2 * n;
    // c₊² − c₋² ≥ λ(N² + M²) with λ the smallest eigenvalue of that form
    let real = RealPolarization::new(ell, m as f64, n as f64)?;
    let form = |nf: f64, mf: f64| {
        let cj = real.cj(nf, mf);
        2.0 * cj * cj / real.j2() - real.dot(nf, mf, nf, mf)
    };
    let (a11, a22) = (form(1.0, 0.0), form(0.0, 1.0));
    let a12 = (form(1.0, 1.0) - a11 - a22) / 2.0;
    let lambda = (a11 + a22) / 2.0 - (((a11 - a22) / 2.0).powi(2) + a12 * a12).sqrt();
    let radius = ((8 * bound) as f64 / lambda).sqrt().ceil() as i64 + 2;
    let mut monomials: BTreeMap<(Q64, Q64), Q64> = BTreeMap::new();
    let (mut terms, mut nonzero_terms) = (0, 0);
    let lim = Q64::from_integer(bound);
    for big_n in -radius..=radius {
        if (big_n - beta).rem_euclid(2) != 0 {
            continue;
        }
        for big_m in -radius..=radius {
            if (big_m - alpha).rem_euclid(2) != 0 {
                continue;
            }
            let cj = big_n * n - big_m * m;
            let c2 = -l * big_n * big_n - 2 * big_n * big_m;
            let cp2 = Q64::new(cj * cj, j2);
            let cm2 = Q64::from_integer(c2) - cp2;
            let (eq, eqbar) = (cp2 / 4, -cm2 / 4);
            if eq > lim || eqbar > lim {
                continue;
            }
            let ck = (l - 2) * big_n + 2 * big_m;
            let k_cm = Q64::from_integer(ck) - Q64::new(cj * kj, j2);
            let sign = if ck.rem_euclid(2) == 0 { 1 } else { -1 };
            let weight = k_cm * cj * sign;
            terms += 1;
            if !weight.is_zero() {
                nonzero_terms += 1;
            }
            *monomials.entry((eq, eqbar)).or_insert_with(Q64::zero) += weight;
        }
    }
    let nonzero_monomials = monomials.values().filter(|c| !c.is_zero()).count();
    Ok(UpsilonReport {
        ell,
        m,
        n,
        alpha,
        beta,
        bound,
        terms,
        nonzero_terms,
        monomials: monomials.len(),
        nonzero_monomials,
    })
}

/// Both sides of the anomaly equation at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnomalyReport {
    /// Left side from a finite-difference `∂_τ̄` of `f̂₂(τ)`.
    pub check: CheckReport,
    /// Left side from the closed form of `∂_τ̄ f̂₂(τ)`.
    pub closed_form_residual: f64,
    /// Residual of the equation with the opposite overall sign on its right side.
    pub opposite_sign_residual: f64,
}

/// `D₂Ẑ₂ = Σ_{c₁} conj(∂_τ̄ f̂_{2,c₁}/η⁸) Θ_{2,c₁}` (using `D₂Θ = 0`) against
/// `iK·J/(16π√J² y^{3/2}) Z₁² − i/(8√y) conj(η^{−4})² Σ Υ_{c₁} Θ_{2,c₁}`,
/// with `Z₁ = conj(η^{−4}) Θ_{1,0}`.
pub fn anomaly_check(j: &RealPolarization, rho: [Complex64; 2], tau: Complex64) -> Result<AnomalyReport, NumericError> {
    let y = tau.im;
    let eta_inv4 = eta(tau)?.powi(-4);
    let mut lhs = Complex64::new(0.0, 0.0);
    let mut lhs_closed = Complex64::new(0.0, 0.0);
    let mut ups = Complex64::new(0.0, 0.0);
    for (beta, alpha) in CLASSES {
        let th = siegel_narain_theta(j, 2, (beta, alpha), rho, tau)?.value;
        // the holomorphic part of f̂₂(τ) drops out of ∂_τ̄
        let d = fd_dtaubar(|t| Ok(f2hat_nonhol(j, alpha, beta, t)?.value), tau, FD_STEP)?;
        let closed = dtaubar_f2hat(j, alpha, beta, tau)?.value;
        lhs += (d * eta_inv4 * eta_inv4).conj() * th;
        lhs_closed += (closed * eta_inv4 * eta_inv4).conj() * th;
        ups += upsilon(j, alpha, beta, tau)?.value * th;
    }
    let z1 = eta_inv4.conj() * siegel_narain_theta(j, 1, (0, 0), rho, tau)?.value;
    let sj = j.j2().sqrt();
    let factorised = -Complex64::i() * j.kj() / (16.0 * PI * sj * y.powf(1.5)) * z1 * z1;
    let upsilon_term = Complex64::i() / (8.0 * y.sqrt()) * eta_inv4.conj().powi(2) * ups;
    let rhs = -(factorised + upsilon_term);
    let point = HPoint { rho, ..HPoint::new(tau, Complex64::new(0.5, 0.0)) };
    let name = format!("anomaly l={} J=({},{})", j.ell, j.m, j.n);
    Ok(AnomalyReport {
        check: CheckReport::new(&name, point, relative_residual(lhs, rhs), ANOMALY_TOLERANCE),
        closed_form_residual: relative_residual(lhs_closed, rhs),
        opposite_sign_residual: relative_residual(lhs, -rhs),
    })
}

/// `D_r Θ_{r,μ} = (∂_τ + (i/4πr) ∂²_{ρ₊}) Θ_{r,μ}` by finite differences, relative
/// to the size of its two terms.
pub fn d_r_theta_check(
    j: &RealPolarization,
    r: u32,
    mu: (i64, i64),
    rho: [Complex64; 2],
    tau: Complex64,
) -> Result<CheckReport, NumericError> {
    let theta = |rho: [Complex64; 2], tau| siegel_narain_theta(j, r, mu, rho, tau).map(|t| t.value);
    let dtau = fd_dtau(|t| theta(rho, t), tau, FD_STEP)?;
    let sj = j.j2().sqrt();
    let dir = [j.m / sj, (j.m * j.l_f64() + j.n) / sj];
    let along = |t: f64| [rho[0] + dir[0] * t, rho[1] + dir[1] * t];
    let h = 1e-3;
    let second = |h: f64| -> Result<Complex64, NumericError> {
        Ok((theta(along(h), tau)? - 2.0 * theta(rho, tau)? + theta(along(-h), tau)?) / (h * h))
    };
    let d2 = (4.0 * second(h / 2.0)? - second(h)?) / 3.0;
    let heat = Complex64::i() / (4.0 * PI * r as f64) * d2;
    let scale = dtau.norm().max(heat.norm());
    let residual = if scale == 0.0 { 0.0 } else { (dtau + heat).norm() / scale };
    let point = HPoint { rho, ..HPoint::new(tau, Complex64::new(0.0, 0.0)) };
    let name = format!("D_r Theta r={r} mu=({},{}) l={}", mu.0, mu.1, j.ell);
    Ok(CheckReport::new(&name, point, residual, D_R_TOLERANCE))
}

/// The anomaly equation at `points` generic polarizations with random `τ` and `ρ`.
pub fn anomaly_sweep(points: usize, seed: u64) -> Result<Vec<AnomalyReport>, NumericError> {
    const GENERIC: [(u32, f64, f64); 5] = [(1, 1.0, 1.0), (2, 2.0, 1.0), (1, 1.0, 2.0), (3, 1.0, 1.0), (2, 1.0, 3.0)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(points);
    for i in 0..points {
        let (ell, m, n) = GENERIC[i % GENERIC.len()];
        let j = RealPolarization::new(ell, m, n)?;
        let tau = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.7..1.3));
        let rho = [
            Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.1..0.1)),
            Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.1..0.1)),
        ];
        out.push(anomaly_check(&j, rho, tau)?);
    }
    Ok(out)
}
