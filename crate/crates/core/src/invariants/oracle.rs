//! Brute-force enumerations over a fixed box of lattice points, used to
//! cross-check the cone-restricted sums of the rank-2 generating functions.
//!
//! Nothing here truncates by geometry: every `(a, b)` or `(n, k)` with
//! `|·| ≤ bound` is visited and terms beyond `q^{qmax}` are dropped afterwards.

use super::appell::appell_a;
use super::blowup::IdentityCheck;
use super::rank2::indef_theta;
use super::InvariantError;
use crate::lattice::{sgn, Polarization};
use crate::qseries::{coef, coef_frac, Coef, PoleSeries, QExp, QSeries};

/// Add `c·q^{e0}w^{k0}/(1 − q^s w⁴)` expanded over `0 ≤ k ≤ bound`; for `s < 0`
/// the expansion is in `q^{−s}w^{−4}`.
fn add_box_geometric(out: &mut QSeries, e0: QExp, k0: i64, s: i64, c: &Coef, bound: i64, qmax: QExp) {
    for k in 0..=bound {
        let (e, w, c) = if s > 0 {
            (e0 + s * k, k0 + 4 * k, c.clone())
        } else {
            (e0 - s * (k + 1), k0 - 4 * (k + 1), -c.clone())
        };
        if e <= qmax {
            out.add_term(e, w, c);
        }
    }
}

/// `A_{ℓ,(α,β)}` with every geometric factor and the `iη³/θ₁(4z)` part expanded
/// by brute force, the latter through
/// `iη³/θ₁(4z) = −w² Σ_n (−1)ⁿ q^{n(n+1)/2}/(1 − qⁿw⁴)`.
pub fn box_appell(ell: u32, alpha: i64, beta: i64, qmax: QExp, bound: i64) -> Result<PoleSeries, InvariantError> {
    if ell == 0 {
        return Err(InvariantError::UnsupportedEll);
    }
    let l = ell as i64;
    let (alpha, beta) = (alpha.rem_euclid(2), beta.rem_euclid(2));
    let one = coef(1);
    let mut regular = QSeries::zero(qmax);
    if beta == 1 {
        let (e_pre, w_pre) = if alpha == 1 { (QExp::new(l + 2, 4), l) } else { (QExp::new(l, 4), l - 2) };
        for n in -bound..=bound {
            let e0 = e_pre + l * n * (n + 1) + alpha * n;
            add_box_geometric(&mut regular, e0, w_pre + 2 * (l - 2) * n, 2 * n + 1, &one, bound, qmax);
            if alpha == 0 {
                let t = 2 * n + 1;
                let e = QExp::new(l * t * t, 4);
                if e <= qmax {
                    regular.add_term(e, (l - 2) * t, coef_frac(-1, 2));
                }
            }
        }
        return Ok(PoleSeries::from_series(regular));
    }
    // β = 0: the n = 0 terms w^k/(1 − w⁴) = −w^{k−2}/(w² − w^{−2}) go into the pole part
    let mut polar = QSeries::zero(qmax);
    let w_pre = if alpha == 1 { 2 } else { 0 };
    for n in -bound..=bound {
        let e0 = QExp::from_integer(l * n * n + alpha * n);
        let k0 = w_pre + 2 * (l - 2) * n;
        if n == 0 {
            polar.add_term(e0, k0 - 2, coef(-1));
        } else {
            add_box_geometric(&mut regular, e0, k0, 2 * n, &one, bound, qmax);
        }
        if alpha == 0 {
            let e = QExp::from_integer(l * n * n);
            if e <= qmax {
                regular.add_term(e, 2 * (l - 2) * n, coef_frac(-1, 2));
            }
        }
        // −w² (−1)ⁿ q^{n(n+1)/2}/(1 − qⁿw⁴)
        let sign = if n.rem_euclid(2) == 0 { coef(-1) } else { coef(1) };
        let e0 = QExp::from_integer(n * (n + 1) / 2);
        if n == 0 {
            polar.add_term(e0, 0, -sign);
        } else {
            add_box_geometric(&mut regular, e0, 2, n, &sign, bound, qmax);
        }
    }
    let pole = PoleSeries::new(vec![2], polar);
    Ok(pole.add(&PoleSeries::from_series(regular)))
}

/// `ϑ^{m,n}_{α,β}` summed over `|a|, |b| ≤ bound`.
pub fn box_indef_theta(
    ell: u32,
    alpha: i64,
    beta: i64,
    j: &Polarization,
    qmax: QExp,
    bound: i64,
) -> Result<QSeries, InvariantError> {
    if ell == 0 {
        return Err(InvariantError::UnsupportedEll);
    }
    let l = ell as i64;
    let mut s = QSeries::zero(qmax);
    for a in -bound..=bound {
        for b in -bound..=bound {
            let (big_n, big_m) = (2 * b - beta.rem_euclid(2), 2 * a - alpha.rem_euclid(2));
            let weight = sgn(-big_m) - j.sign_nm(big_n, big_m);
            if weight == 0 {
                continue;
            }
            let e = QExp::new(l * big_n * big_n, 4) + QExp::new(big_n * big_m, 2);
            if e <= qmax {
                s.add_term(e, (l - 2) * big_n + 2 * big_m, coef_frac(weight as i64, 2));
            }
        }
    }
    Ok(s)
}

/// Compare [`appell_a`] and [`indef_theta`] with their box enumerations.
pub fn oracle_check(
    ell: u32,
    alpha: i64,
    beta: i64,
    j: &Polarization,
    qmax: QExp,
    bound: i64,
) -> Result<Vec<IdentityCheck>, InvariantError> {
    let mut out = Vec::new();
    let fast = appell_a(ell, alpha, beta, qmax)?;
    let slow = box_appell(ell, alpha, beta, qmax, bound)?;
    let mismatch = fast.agrees_with(&slow).err();
    out.push(IdentityCheck {
        name: format!("Appell l={ell} ({alpha},{beta})"),
        holds: mismatch.is_none(),
        first_mismatch: mismatch,
    });
    match indef_theta(ell, alpha, beta, j, qmax) {
        Ok(fast) => {
            let slow = box_indef_theta(ell, alpha, beta, j, qmax, bound)?;
            let mismatch = PoleSeries::from_series(fast).agrees_with(&PoleSeries::from_series(slow)).err();
            out.push(IdentityCheck {
                name: format!("theta l={ell} ({alpha},{beta}) J={j}"),
                holds: mismatch.is_none(),
                first_mismatch: mismatch,
            });
        }
        Err(InvariantError::NonTerminatingSum) => {}
        Err(e) => return Err(e),
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Side;

    #[test]
    fn small_box_agrees() {
        let j = Polarization::integral(1, 1, Side::Plus).unwrap();
        for (alpha, beta) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            for c in oracle_check(1, alpha, beta, &j, QExp::from_integer(3), 20).unwrap() {
                assert!(c.holds, "{c:?}");
            }
        }
    }

    #[test]
    fn too_small_box_is_noticed() {
        let j = Polarization::integral(1, 1, Side::Plus).unwrap();
        let checks = oracle_check(1, 1, 1, &j, QExp::from_integer(4), 1).unwrap();
        assert!(checks.iter().any(|c| !c.holds));
    }
}
