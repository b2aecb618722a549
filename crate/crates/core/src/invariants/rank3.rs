//! Rank-3 generating function as a sum over walls `c = NC − Mf` with
//! `N = 3b − 2β`, `M = 3a − 2α`, each weighted by the rank-2 function of the
//! remaining constituent evaluated on the wall itself.

use std::collections::HashMap;

use num_traits::Zero;
use rayon::prelude::*;

use super::appell::appell_a;
use super::rank2::f2_with_appell;
use super::InvariantError;
use crate::lattice::{sgn, Polarization, Side};
use crate::qseries::{coef_frac, PoleSeries, QExp, QSeries, WLaurent};

/// One outer lattice point of the rank-3 sum.
#[derive(Debug, Clone, Copy)]
struct WallTerm {
    a_par: i64,
    b_par: i64,
    big_n: i64,
    big_m: i64,
    qe: QExp,
    x: i64,
    weight: i32,
}

/// Enumerate `(a, b)` with nonzero `sgn_to(c·J) − sgn_from(c·J)`, `q`-exponent
/// `ℓN²/12 + NM/6 ≤ qmax` and `w`-exponent `X ≠ 0`.
///
/// A nonzero sign difference between a polarization and the fibre side forces
/// `NM ≥ 0`; then `|N| ≤ √(12 qmax/ℓ)` and `|M| ≤ 6(qmax − ℓN²/12)/|N|`.
fn wall_terms(
    ell: i64,
    alpha: i64,
    beta: i64,
    from: Option<&Polarization>,
    to: &Polarization,
    qmax: QExp,
) -> Vec<WallTerm> {
    let mut out = Vec::new();
    if qmax < QExp::zero() {
        return out;
    }
    let qm = qmax.to_integer() + 1;
    let n_max = ((12 * qm) as f64 / ell as f64).sqrt() as i64 + 3;
    for big_n in -n_max..=n_max {
        if (big_n + 2 * beta).rem_euclid(3) != 0 {
            continue;
        }
        let base = QExp::new(ell * big_n * big_n, 12);
        if big_n == 0 || base > qmax {
            continue;
        }
        let m_max = (((qmax - base) * 6) / big_n.abs()).to_integer() + 1;
        for k in 0..=m_max {
            let big_m = k * big_n.signum();
            if (big_m + 2 * alpha).rem_euclid(3) != 0 {
                continue;
            }
            let qe = base + QExp::new(big_n * big_m, 6);
            if qe > qmax {
                continue;
            }
            let from_sign = from.map_or(sgn(big_n), |j| j.sign_nm(big_n, big_m));
            let weight = to.sign_nm(big_n, big_m) - from_sign;
            let x = (ell - 2) * big_n + 2 * big_m;
            if weight == 0 || x == 0 {
                continue;
            }
            let b = (big_n + 2 * beta) / 3;
            let a = (big_m + 2 * alpha) / 3;
            out.push(WallTerm {
                a_par: a.rem_euclid(2),
                b_par: b.rem_euclid(2),
                big_n,
                big_m,
                qe,
                x,
                weight,
            });
        }
    }
    out
}

/// The rank-2 factor evaluated exactly on the wall `J_{|N|,|M|}`.
fn inner_polarization(t: &WallTerm) -> Polarization {
    Polarization::integral(t.big_n.abs(), t.big_m.abs(), Side::Exact).expect("N ≠ 0 on every term")
}

fn check_beta(beta: i64) -> Result<(), InvariantError> {
    if beta.rem_euclid(3) == 0 {
        return Err(InvariantError::BetaDivisible);
    }
    Ok(())
}

/// Shared implementation of `f3` and its transport between two polarizations.
fn wall_sum(
    ell: u32,
    alpha: i64,
    beta: i64,
    from: Option<&Polarization>,
    to: &Polarization,
    qmax: QExp,
) -> Result<PoleSeries, InvariantError> {
    if ell == 0 {
        return Err(InvariantError::UnsupportedEll);
    }
    check_beta(beta)?;
    let terms = wall_terms(ell as i64, alpha, beta, from, to, qmax);
    // Appell parts depend only on the parities; compute each once.
    let mut appell: HashMap<(i64, i64), PoleSeries> = HashMap::new();
    for t in &terms {
        if let std::collections::hash_map::Entry::Vacant(e) = appell.entry((t.a_par, t.b_par)) {
            e.insert(appell_a(ell, t.a_par, t.b_par, qmax)?);
        }
    }
    let d = vec![2u32];
    let contributions: Result<Vec<QSeries>, InvariantError> = terms
        .par_iter()
        .map(|t| {
            let jin = inner_polarization(t);
            let inner = f2_with_appell(&appell[&(t.a_par, t.b_par)], ell, t.a_par, t.b_par, &jin, qmax - t.qe)?;
            let inner = inner.over(&d);
            // −½ weight (w^X − w^{−X}) q^{qe}
            let mut pref = WLaurent::zero();
            pref.add_term(t.x, coef_frac(-(t.weight as i64), 2));
            pref.add_term(-t.x, coef_frac(t.weight as i64, 2));
            Ok(inner.body().mul_laurent(&pref).shift(t.qe, 0))
        })
        .collect();
    let mut body = QSeries::zero(qmax);
    for c in contributions? {
        for (q, p) in c.terms() {
            body.add_laurent(*q, p);
        }
    }
    Ok(PoleSeries::new(d, body))
}

/// `f_{3,βC−αf}(z,τ; Σ_ℓ, J)` for `β ≢ 0 (mod 3)`.
pub fn f3(ell: u32, alpha: i64, beta: i64, j: &Polarization, qmax: QExp) -> Result<PoleSeries, InvariantError> {
    wall_sum(ell, alpha, beta, None, j, qmax)
}

/// Change of `f_3` between two polarizations, accumulated wall by wall.
pub fn f3_transport(
    ell: u32,
    alpha: i64,
    beta: i64,
    from: &Polarization,
    to: &Polarization,
    qmax: QExp,
) -> Result<PoleSeries, InvariantError> {
    wall_sum(ell, alpha, beta, Some(from), to, qmax)
}

/// Distinct wall ratios `m:n` that contribute to the rank-3 sum up to `qmax`
/// when moving from the fibre side to `to`.
pub fn f3_wall_ratios(ell: u32, alpha: i64, beta: i64, to: &Polarization, qmax: QExp) -> Vec<(i64, i64)> {
    let mut v: Vec<(i64, i64)> = wall_terms(ell as i64, alpha, beta, None, to, qmax)
        .iter()
        .map(|t| {
            let g = num_integer::gcd(t.big_n.abs(), t.big_m.abs());
            (t.big_n.abs() / g, t.big_m.abs() / g)
        })
        .collect();
    v.sort_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)));
    v.dedup();
    v
}
