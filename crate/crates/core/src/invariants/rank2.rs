//! Rank-2 generating functions `f_{2,βC−αf} = A_{ℓ,(α,β)} + ϑ^{m,n}_{α,β}`.
//!
//! Both lattice sums run over `c = NC − Mf` with `N = 2b − β`, `M = 2a − α`,
//! `w`-exponent `c·K = (ℓ−2)N + 2M` and `q`-exponent `−c²/4 = ℓN²/4 + NM/2`.
//! A term can only survive when `N·M ≥ 0` and `N ≠ 0`, which gives
//! `|N| ≤ 2√(qmax/ℓ)` and `|M| ≤ 2(qmax − ℓN²/4)/|N|`.

use num_traits::Zero;

use super::appell::appell_a;
use super::InvariantError;
use crate::lattice::{sgn, Polarization};
use crate::qseries::{coef_frac, PoleSeries, QExp, QSeries};

/// Visit every `(N, M)` with `N ≡ β`, `M ≡ α (mod 2)`, `N ≠ 0`, `NM ≥ 0` and
/// `ℓN²/4 + NM/2 ≤ qmax`.
pub(crate) fn for_each_cone_point(
    ell: i64,
    alpha: i64,
    beta: i64,
    qmax: QExp,
    mut visit: impl FnMut(i64, i64, QExp),
) {
    if qmax < QExp::zero() {
        return;
    }
    let qm = qmax.to_integer() + 1;
    let n_max = 2 * ((qm as f64 / ell as f64).sqrt() as i64) + 2;
    for big_n in -n_max..=n_max {
        if big_n == 0 || (big_n - beta).rem_euclid(2) != 0 {
            continue;
        }
        let base = QExp::new(ell * big_n * big_n, 4);
        if base > qmax {
            continue;
        }
        let m_max = (((qmax - base) * 2) / big_n.abs()).to_integer() + 1;
        for k in 0..=m_max {
            let big_m = k * big_n.signum();
            if (big_m - alpha).rem_euclid(2) != 0 {
                continue;
            }
            let qe = base + QExp::new(big_n * big_m, 2);
            if qe <= qmax {
                visit(big_n, big_m, qe);
            }
        }
    }
}

/// `ϑ^{m,n}_{α,β} = Σ ½(sgn(−M) − sgn_J(Nn − Mm)) w^{(ℓ−2)N+2M} q^{ℓN²/4+NM/2}`.
pub fn indef_theta(
    ell: u32,
    alpha: i64,
    beta: i64,
    j: &Polarization,
    qmax: QExp,
) -> Result<QSeries, InvariantError> {
    if ell == 0 {
        return Err(InvariantError::UnsupportedEll);
    }
    let (alpha, beta) = (alpha.rem_euclid(2), beta.rem_euclid(2));
    if beta == 0 && j.m.is_zero() {
        // N = 0 terms all sit at q⁰ and the sum does not terminate.
        return Err(InvariantError::NonTerminatingSum);
    }
    let l = ell as i64;
    let mut s = QSeries::zero(qmax);
    for_each_cone_point(l, alpha, beta, qmax, |big_n, big_m, qe| {
        let weight = sgn(-big_m) - j.sign_nm(big_n, big_m);
        if weight != 0 {
            s.add_term(qe, (l - 2) * big_n + 2 * big_m, coef_frac(weight as i64, 2));
        }
    });
    Ok(s)
}

/// `f_{2,βC−αf}(z,τ; Σ_ℓ, J)`.
pub fn f2(ell: u32, alpha: i64, beta: i64, j: &Polarization, qmax: QExp) -> Result<PoleSeries, InvariantError> {
    let a = appell_a(ell, alpha, beta, qmax)?;
    Ok(a.add(&PoleSeries::from_series(indef_theta(ell, alpha, beta, j, qmax)?)))
}

/// `f2` from an Appell series computed once and reused for many `J`.
pub(crate) fn f2_with_appell(
    appell: &PoleSeries,
    ell: u32,
    alpha: i64,
    beta: i64,
    j: &Polarization,
    qmax: QExp,
) -> Result<PoleSeries, InvariantError> {
    let theta = indef_theta(ell, alpha, beta, j, qmax)?;
    Ok(appell.truncate(qmax).add(&PoleSeries::from_series(theta)))
}

/// The direct wall sum for `β = 1`:
/// `−½ Σ ½(sgn_J(Nn − Mm) − sgn N)(w^{c·K} − w^{−c·K}) q^{−c²/4}`.
pub fn f2_wall_sum(ell: u32, alpha: i64, j: &Polarization, qmax: QExp) -> Result<QSeries, InvariantError> {
    if ell == 0 {
        return Err(InvariantError::UnsupportedEll);
    }
    let l = ell as i64;
    let mut s = QSeries::zero(qmax);
    for_each_cone_point(l, alpha.rem_euclid(2), 1, qmax, |big_n, big_m, qe| {
        let weight = j.sign_nm(big_n, big_m) - sgn(big_n);
        if weight != 0 {
            let x = (l - 2) * big_n + 2 * big_m;
            s.add_term(qe, x, coef_frac(-weight as i64, 4));
            s.add_term(qe, -x, coef_frac(weight as i64, 4));
        }
    });
    Ok(s)
}

/// Change of `f_2` from `J_from` to `J_to`, summed wall by wall:
/// `Σ_c −¼(sgn_{J_to}(c·J) − sgn_{J_from}(c·J))(w^{c·K} − w^{−c·K}) q^{−c²/4}`.
pub fn f2_transport(
    ell: u32,
    alpha: i64,
    beta: i64,
    from: &Polarization,
    to: &Polarization,
    qmax: QExp,
) -> Result<QSeries, InvariantError> {
    if ell == 0 {
        return Err(InvariantError::UnsupportedEll);
    }
    if beta.rem_euclid(2) == 0 && (from.m.is_zero() || to.m.is_zero()) {
        return Err(InvariantError::NonTerminatingSum);
    }
    let l = ell as i64;
    let mut s = QSeries::zero(qmax);
    for_each_cone_point(l, alpha.rem_euclid(2), beta.rem_euclid(2), qmax, |big_n, big_m, qe| {
        let weight = to.sign_nm(big_n, big_m) - from.sign_nm(big_n, big_m);
        if weight != 0 {
            let x = (l - 2) * big_n + 2 * big_m;
            s.add_term(qe, x, coef_frac(-weight as i64, 4));
            s.add_term(qe, -x, coef_frac(weight as i64, 4));
        }
    });
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Side;

    fn qe(n: i64) -> QExp {
        QExp::from_integer(n)
    }

    #[test]
    fn vanishing_chamber() {
        let near_fibre = Polarization::integral(0, 1, Side::Plus).unwrap();
        for ell in 1..=3 {
            for alpha in 0..2 {
                let f = f2(ell, alpha, 1, &near_fibre, qe(5)).unwrap();
                assert!(f.body().vanishes(), "ℓ={ell} α={alpha}: {}", f);
            }
        }
    }

    #[test]
    fn appell_plus_theta_matches_wall_sum() {
        for ell in 1..=3 {
            for alpha in 0..2 {
                for (m, n) in [(1, 0), (1, 1), (2, 1), (1, 3), (3, 7)] {
                    for side in [Side::Minus, Side::Exact, Side::Plus] {
                        let j = Polarization::integral(m, n, side).unwrap();
                        let lhs = f2(ell, alpha, 1, &j, qe(5)).unwrap();
                        let rhs = f2_wall_sum(ell, alpha, &j, qe(5)).unwrap();
                        assert_eq!(lhs.body().agrees_with(&rhs), Ok(()), "ℓ={ell} α={alpha} J={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn theta_vanishes_at_j10_exact() {
        let j = Polarization::integral(1, 0, Side::Exact).unwrap();
        for alpha in 0..2 {
            assert!(indef_theta(1, alpha, 1, &j, qe(4)).unwrap().vanishes());
        }
    }

    #[test]
    fn degenerate_beta_zero() {
        let j = Polarization::integral(0, 1, Side::Plus).unwrap();
        assert!(matches!(indef_theta(1, 1, 0, &j, qe(2)), Err(InvariantError::NonTerminatingSum)));
    }
}
