//! Numeric checks of the `S` and `T` laws of the completed Appell functions
//! and of the quasi-periodicity of the Lerch sum.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::appell::{a_hat_spec, quasi_periodicity_sides};
use super::special::phase;
use super::{relative_residual, CheckReport, HPoint, NumericError};

/// Tolerance pinned for the `T` law.
pub const T_TOLERANCE: f64 = 1e-8;
/// Tolerance pinned for the `S` law.
pub const S_TOLERANCE: f64 = 1e-6;
/// Tolerance pinned for quasi-periodicity.
pub const QP_TOLERANCE: f64 = 1e-8;

/// Which multiplier to use in the `T` law.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseConvention {
    /// `e^{2πi(ℓβ² + 2αβ)/4}`, which is what the functions satisfy.
    LevelDependent,
    /// `e^{2πi(β² + 2αβ)/4}`, correct only for `ℓ ≡ 1 (mod 4)` or `β = 0`.
    Printed,
}

pub fn t_law_phase(ell: u32, alpha: i64, beta: i64, convention: PhaseConvention) -> Complex64 {
    let l = match convention {
        PhaseConvention::LevelDependent => ell as i64,
        PhaseConvention::Printed => 1,
    };
    let x = (l * beta * beta + 2 * alpha * beta).rem_euclid(4) as f64 / 4.0;
    phase(Complex64::new(x, 0.0))
}

/// `Â(z, τ+1)` against the multiplier times `Â(z, τ)`.
pub fn t_law_check(
    ell: u32,
    alpha: i64,
    beta: i64,
    z: Complex64,
    tau: Complex64,
    convention: PhaseConvention,
) -> Result<CheckReport, NumericError> {
    let lhs = a_hat_spec(ell, alpha, beta, z, tau + 1.0)?.value;
    let rhs = t_law_phase(ell, alpha, beta, convention) * a_hat_spec(ell, alpha, beta, z, tau)?.value;
    let name = match convention {
        PhaseConvention::LevelDependent => format!("T-law l={ell} ({alpha},{beta})"),
        PhaseConvention::Printed => format!("T-law (printed phase) l={ell} ({alpha},{beta})"),
    };
    Ok(CheckReport::new(&name, HPoint::new(tau, z), relative_residual(lhs, rhs), T_TOLERANCE))
}

/// `Â(z/τ, −1/τ) = (τ/2) e^{−16πi z²/τ} Σ (−1)^{ℓββ̃+αβ̃+βα̃} Â_{(α̃,β̃)}(z, τ)`.
pub fn s_law_check(ell: u32, alpha: i64, beta: i64, z: Complex64, tau: Complex64) -> Result<CheckReport, NumericError> {
    let lhs = a_hat_spec(ell, alpha, beta, z / tau, -1.0 / tau)?.value;
    let mut sum = Complex64::new(0.0, 0.0);
    for at in 0..2 {
        for bt in 0..2 {
            let sign = if (ell as i64 * beta * bt + alpha * bt + beta * at) % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * a_hat_spec(ell, at, bt, z, tau)?.value;
        }
    }
    let rhs = tau / 2.0 * phase(-8.0 * z * z / tau) * sum;
    let name = format!("S-law l={ell} ({alpha},{beta})");
    Ok(CheckReport::new(&name, HPoint::new(tau, z), relative_residual(lhs, rhs), S_TOLERANCE))
}

/// `Re z ∈ [−½, ½]`, `Im z ∈ [−0.1, 0.1]`, `Re τ ∈ [−½, ½]`, `Im τ ∈ [0.8, 1.3]`.
pub fn random_point(rng: &mut impl Rng) -> (Complex64, Complex64) {
    let z = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.1..0.1));
    let tau = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.8..1.3));
    (z, tau)
}

/// Draw points until `check` does not report a pole; give up after 100 draws.
fn with_resampling<T>(
    rng: &mut ChaCha8Rng,
    mut draw: impl FnMut(&mut ChaCha8Rng) -> Result<T, NumericError>,
) -> Result<T, NumericError> {
    for _ in 0..100 {
        match draw(rng) {
            Err(NumericError::NearPole) => continue,
            other => return other,
        }
    }
    Err(NumericError::NearPole)
}

/// `T` and `S` laws for `ℓ ∈ ells`, all four `(α, β)` and `points` random points each.
pub fn modularity_sweep(ells: &[u32], points: usize, seed: u64) -> Result<Vec<CheckReport>, NumericError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for &ell in ells {
        for (alpha, beta) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            for _ in 0..points {
                let reports = with_resampling(&mut rng, |rng| {
                    let (z, tau) = random_point(rng);
                    Ok([
                        t_law_check(ell, alpha, beta, z, tau, PhaseConvention::LevelDependent)?,
                        s_law_check(ell, alpha, beta, z, tau)?,
                    ])
                })?;
                out.extend(reports);
            }
        }
    }
    Ok(out)
}

/// `μ(u+z, v+z) − μ(u, v)` against `iη³θ₁(u+v+z)θ₁(z)/(θ₁(u)θ₁(v)θ₁(u+z)θ₁(v+z))`.
pub fn quasi_periodicity_check(
    u: Complex64,
    v: Complex64,
    z: Complex64,
    tau: Complex64,
) -> Result<CheckReport, NumericError> {
    let (lhs, rhs) = quasi_periodicity_sides(u, v, z, tau)?;
    let point = HPoint { u, v, ..HPoint::new(tau, z) };
    Ok(CheckReport::new("quasi-periodicity", point, relative_residual(lhs, rhs), QP_TOLERANCE))
}

pub fn quasi_periodicity_sweep(points: usize, seed: u64) -> Result<Vec<CheckReport>, NumericError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(points);
    for _ in 0..points {
        out.push(with_resampling(&mut rng, |rng| {
            let (z, tau) = random_point(rng);
            let u = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.2..0.2));
            let v = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.2..0.2));
            quasi_periodicity_check(u, v, z, tau)
        })?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_phase_agrees_when_ell_is_one_mod_four() {
        for (alpha, beta) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            assert_eq!(
                t_law_phase(1, alpha, beta, PhaseConvention::Printed),
                t_law_phase(1, alpha, beta, PhaseConvention::LevelDependent)
            );
        }
        assert_ne!(
            t_law_phase(2, 0, 1, PhaseConvention::Printed),
            t_law_phase(2, 0, 1, PhaseConvention::LevelDependent)
        );
    }

    #[test]
    fn t_and_s_laws_at_one_point() {
        let (z, tau) = (Complex64::new(0.13, 0.04), Complex64::new(-0.21, 1.05));
        for ell in 1..=3 {
            for (alpha, beta) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                let t = t_law_check(ell, alpha, beta, z, tau, PhaseConvention::LevelDependent).unwrap();
                assert!(t.pass, "{t:?}");
                let s = s_law_check(ell, alpha, beta, z, tau).unwrap();
                assert!(s.pass, "{s:?}");
            }
        }
    }

    #[test]
    fn printed_t_phase_fails_on_sigma_two() {
        let (z, tau) = (Complex64::new(0.13, 0.04), Complex64::new(-0.21, 1.05));
        let t = t_law_check(2, 0, 1, z, tau, PhaseConvention::Printed).unwrap();
        assert!(!t.pass);
    }

    #[test]
    fn quasi_periodicity_few_points() {
        for r in quasi_periodicity_sweep(5, 7).unwrap() {
            assert!(r.pass, "{r:?}");
        }
    }
}
