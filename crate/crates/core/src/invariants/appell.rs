//! Level-ℓ Appell series `A_{ℓ,(α,β)}(z,τ)` specialised to the rank-2
//! generating functions.

use super::InvariantError;
use crate::qseries::{coef, coef_frac, eta_pow, theta1_inv, Coef, PoleSeries, QExp, QSeries, WLaurent};

/// Expand `c·q^{e0}w^{k0} / (1 − q^{s}w^{4})` for `s ≠ 0` into `out`, through `qmax`.
///
/// For `s < 0` the factor is rewritten as `−q^{−s}w^{−4}/(1 − q^{−s}w^{−4})`
/// so that the expansion runs in increasing powers of `q`.
fn add_geometric(out: &mut QSeries, e0: QExp, k0: i64, s: i64, c: &Coef, qmax: QExp) {
    debug_assert!(s != 0);
    let (step, wstep, first, sign) = if s > 0 { (s, 4, 0, c.clone()) } else { (-s, -4, 1, -c.clone()) };
    let mut j = first;
    loop {
        let e = e0 + step * j;
        if e > qmax {
            break;
        }
        out.add_term(e, k0 + wstep * j, sign.clone());
        j += 1;
    }
}

/// Smallest `n ≥ 0` such that `g(n') > qmax` for all `n' ≥ n` with `g` the
/// leading exponent of the `n`-th geometric block, which grows quadratically.
fn scan_limit(ell: i64, qmax: QExp) -> i64 {
    let q = qmax.to_integer().max(0) + 2;
    // ℓn² ≤ leading exponent + O(n): a generous box suffices.
    ((q as f64 / ell as f64).sqrt() as i64) + q + 2
}

/// `D·(iη³/θ₁(4z,τ))` as a series (`D = w² − w^{−2}`), i.e.
/// `∏(1−q^n)² / ∏(1−q^n w⁴)(1−q^n w^{−4})`.
fn eta3_over_theta1_4z(qmax: QExp) -> Result<PoleSeries, InvariantError> {
    let e3 = eta_pow(3, qmax + QExp::new(1, 8));
    let inv = theta1_inv(4, qmax + QExp::new(3, 8))?;
    Ok(inv.mul_series(&e3).truncate(qmax))
}

/// The Appell series of the rank-2 generating function.
///
/// `β = 1` gives a pure series; `β = 0` carries the pole `1/(w² − w^{−2})`
/// from the `n = 0` geometric term and from `iη³/θ₁(4z)`.
pub fn appell_a(ell: u32, alpha: i64, beta: i64, qmax: QExp) -> Result<PoleSeries, InvariantError> {
    if ell == 0 {
        return Err(InvariantError::UnsupportedEll);
    }
    let l = ell as i64;
    let alpha = alpha.rem_euclid(2);
    let beta = beta.rem_euclid(2);
    let lim = scan_limit(l, qmax);
    let one = coef(1);
    let mut s = QSeries::zero(qmax);
    if beta == 1 {
        // A_{(1,1)} = q^{(ℓ+2)/4} w^ℓ Σ q^{ℓn(n+1)+n} w^{2(ℓ−2)n} / (1 − q^{2n+1} w⁴)
        // A_{(0,1)} = −½ Σ q^{ℓ(2n+1)²/4} w^{(ℓ−2)(2n+1)} + q^{ℓ/4} w^{ℓ−2} Σ q^{ℓn(n+1)} w^{2(ℓ−2)n} / (1 − q^{2n+1} w⁴)
        let (e_pre, w_pre) =
            if alpha == 1 { (QExp::new(l + 2, 4), l) } else { (QExp::new(l, 4), l - 2) };
        for n in -lim..=lim {
            let e0 = e_pre + l * n * (n + 1) + alpha * n;
            let k0 = w_pre + 2 * (l - 2) * n;
            add_geometric(&mut s, e0, k0, 2 * n + 1, &one, qmax);
            if alpha == 0 {
                let t = 2 * n + 1;
                s.add_term(QExp::new(l * t * t, 4), (l - 2) * t, coef_frac(-1, 2));
            }
        }
        return Ok(PoleSeries::from_series(s));
    }
    // β = 0, written over D = w² − w^{−2}:
    // A_{(1,0)} = w² Σ q^{ℓn²+n} w^{2(ℓ−2)n} / (1 − q^{2n} w⁴) + iη³/θ₁(4z)
    // A_{(0,0)} = −½ Σ q^{ℓn²} w^{2(ℓ−2)n} + Σ q^{ℓn²} w^{2(ℓ−2)n} / (1 − q^{2n} w⁴) + iη³/θ₁(4z)
    let w_pre = if alpha == 1 { 2 } else { 0 };
    let d = WLaurent::antisym(2);
    let mut geo = QSeries::zero(qmax);
    for n in -lim..=lim {
        let e0 = QExp::from_integer(l * n * n + alpha * n);
        let k0 = w_pre + 2 * (l - 2) * n;
        if n == 0 {
            // w^{k0}/(1 − w⁴) = −w^{k0−2}/D
            s.add_term(e0, k0 - 2, coef(-1));
        } else {
            add_geometric(&mut geo, e0, k0, 2 * n, &one, qmax);
        }
        if alpha == 0 {
            geo.add_term(QExp::from_integer(l * n * n), 2 * (l - 2) * n, coef_frac(-1, 2));
        }
    }
    let body = s.add(&geo.mul_laurent(&d));
    let lattice = PoleSeries::new(vec![2], body);
    Ok(lattice.add(&eta3_over_theta1_4z(qmax)?))
}

/// `true` when the Appell data is entirely regular (no pole in `w`).
pub fn appell_is_regular(beta: i64) -> bool {
    beta.rem_euclid(2) == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    fn qe(n: i64) -> QExp {
        QExp::from_integer(n)
    }

    #[test]
    fn leading_term_beta_one() {
        for ell in 1..=3u32 {
            let a = appell_a(ell, 1, 1, qe(3)).unwrap();
            let lead = a.body().lead().unwrap();
            assert_eq!(lead, QExp::new(ell as i64 + 2, 4));
            let c = a.body().coeff(lead).unwrap();
            assert_eq!(c.coeff(ell as i64), Coef::one());
        }
    }

    #[test]
    fn theta_part_of_a01() {
        // for ℓ = 2 the w-exponents of −½ Σ q^{ℓ(2n+1)²/4} w^{(ℓ−2)(2n+1)} collapse to w⁰;
        // the q^{1/2} coefficient collects n = 0 and n = −1 of that sum plus one geometric term.
        // They cancel.
        let a = appell_a(2, 0, 1, qe(2)).unwrap();
        assert!(a.body().coeff(QExp::new(1, 2)).is_none());
    }

    #[test]
    fn ell_zero_rejected() {
        assert!(matches!(appell_a(0, 0, 1, qe(2)), Err(InvariantError::UnsupportedEll)));
    }

    #[test]
    fn beta_zero_has_pole() {
        let a = appell_a(1, 1, 0, qe(2)).unwrap();
        assert_eq!(a.den(), &[2]);
        // the q⁰ parts of the n = 0 geometric term and of iη³/θ₁(4z) cancel
        assert!(a.body().coeff(QExp::zero()).is_none());
    }
}
