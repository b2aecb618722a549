//! Floating-point evaluation of the modular completions: Appell functions and
//! their completions, the completed rank-2 generating function, and the
//! Siegel–Narain theta functions entering the holomorphic anomaly.

mod anomaly;
mod appell;
mod modular;
mod special;
mod sums;
mod theta_hat;

use num_complex::Complex64;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::invariants::InvariantError;

pub use anomaly::{
    anomaly_check, anomaly_sweep, d_r_theta_check, siegel_narain_theta, upsilon, upsilon_exact, AnomalyReport, UpsilonReport,
    ANOMALY_TOLERANCE, D_R_TOLERANCE,
};
pub use appell::{
    a_hat_spec, appell_completed, appell_numeric, appell_spec, appell_spec_nonhol, appell_spec_via_level,
    eval_pole_series, lerch_mu, quasi_periodicity_sides, r_function, r_function_cutoff,
};
pub use modular::{
    quasi_periodicity_check, quasi_periodicity_sweep, s_law_check, t_law_check, t_law_phase, modularity_sweep, random_point,
    PhaseConvention,
};
pub use special::{beta_nu, beta_nu_scaled, completion_e, erfcx, eta, phase, theta1, theta2, theta3, Nu};
pub use theta_hat::{
    dtaubar_check, dtaubar_f2hat, f2_at_half, f2hat, f2hat_euler, f2hat_nonhol, fd_dtau, fd_dtaubar, first_line_cancellation,
    large_y_limit, theta_hat, theta_hat_first_line, RealPolarization, CANCELLATION_TOLERANCE, DTAUBAR_TOLERANCE, FD_STEP,
};
pub use sums::{sum_1d, sum_1d_cutoff, sum_2d, sum_2d_cutoff, NumericResult};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("Im τ = {0} is not positive")]
    NotInUpperHalfPlane(f64),
    #[error("evaluation point lies within 1e-8 of a pole")]
    NearPole,
    #[error("polarization has J² ≤ 0")]
    DegeneratePolarization,
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

pub(crate) fn complex_pair<S: Serializer>(c: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    [c.re, c.im].serialize(s)
}

/// A point of `H × C` (or `H × C × C` for Appell functions), with the
/// elliptic variable `ρ = (ρ_C, ρ_f)` used by the Siegel–Narain theta.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HPoint {
    #[serde(serialize_with = "complex_pair")]
    pub tau: Complex64,
    #[serde(serialize_with = "complex_pair")]
    pub z: Complex64,
    #[serde(serialize_with = "complex_pair")]
    pub u: Complex64,
    #[serde(serialize_with = "complex_pair")]
    pub v: Complex64,
    #[serde(serialize_with = "complex_pairs")]
    pub rho: [Complex64; 2],
}

fn complex_pairs<S: Serializer>(c: &[Complex64; 2], s: S) -> Result<S::Ok, S::Error> {
    [[c[0].re, c[0].im], [c[1].re, c[1].im]].serialize(s)
}

impl HPoint {
    pub fn new(tau: Complex64, z: Complex64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        HPoint { tau, z, u: zero, v: zero, rho: [zero; 2] }
    }
}

/// One numeric identity evaluated at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub point: HPoint,
    /// `|lhs − rhs| / max(|lhs|, |rhs|)` unless stated otherwise by the check.
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckReport {
    pub fn new(check: &str, point: HPoint, residual: f64, tolerance: f64) -> Self {
        CheckReport { check: check.to_string(), point, residual, tolerance, pass: residual <= tolerance }
    }
}

/// `|a − b| / max(|a|, |b|)`, and `0` when both vanish.
pub fn relative_residual(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        return 0.0;
    }
    (a - b).norm() / scale
}
