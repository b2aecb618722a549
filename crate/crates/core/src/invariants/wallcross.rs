//! Wall-crossing of refined invariants between two polarizations.

use num_bigint::BigInt;
use num_traits::Zero;

use super::blowup::IdentityCheck;
use super::extract::{prefactor_pow, GeneratingFunction};
use super::rank2::f2_transport;
use super::rank3::{f3_transport, f3_wall_ratios};
use super::{InvariantError, ResidueClass};
use crate::lattice::{ical, pairing, walls, ChernVector, DivisorClass, Polarization, Surface, WallRatio, Q};
use crate::qseries::{Coef, PoleSeries, QExp, QSeries, WFraction, WLaurent};

/// `ΔΩ(Γ₁+Γ₂) = −½(sgn I(Γ₁,Γ₂;J_to) − sgn I(Γ₁,Γ₂;J_from))(w^{⟨Γ₁,Γ₂⟩} − w^{−⟨Γ₁,Γ₂⟩}) Ω(Γ₁) Ω(Γ₂)`
/// for primitive `Γ₁`, `Γ₂`.
#[allow(clippy::too_many_arguments)]
pub fn delta_omega_primitive(
    g1: &ChernVector,
    g2: &ChernVector,
    from: &Polarization,
    to: &Polarization,
    omega1: &WFraction,
    omega2: &WFraction,
    s: &Surface,
) -> WFraction {
    let c = crate::lattice::relative_class(g1, g2);
    let weight = to.sign(c) - from.sign(c);
    debug_assert_eq!(ical(g1, g2, to).is_zero(), to.pair(c).is_zero());
    if weight == 0 {
        return WFraction::polynomial(WLaurent::zero());
    }
    let k = pairing(g1, g2, s);
    let bracket = WLaurent::antisym(k).scale(&Coef::new(BigInt::from(-weight), BigInt::from(2)));
    omega1.mul(omega2).mul_laurent(&bracket)
}

/// `Ω` of a rank-1 charge: `c₂`-th coefficient of `1/(w − w^{−1})·∏(…)^{−1}`.
fn rank_one_omega(g: &ChernVector) -> Result<WFraction, InvariantError> {
    let k = g.c2.to_integer();
    if k < 0 {
        return Ok(WFraction::polynomial(WLaurent::zero()));
    }
    let e = QExp::from_integer(k) - QExp::new(1, 6);
    let pref = prefactor_pow(1, e);
    Ok(pref.coeff(e)?)
}

/// Change of `Ω(Γ)` for a rank-2 charge, summed over the walls of `Γ` with the
/// primitive wall-crossing formula.
pub fn rank2_wall_delta(
    gamma: &ChernVector,
    from: &Polarization,
    to: &Polarization,
    s: &Surface,
) -> Result<WFraction, InvariantError> {
    if gamma.r != 2 {
        return Err(InvariantError::UnsupportedRank(gamma.r));
    }
    let mut acc = WFraction::polynomial(WLaurent::zero());
    for wall in walls(gamma, s)? {
        for dec in &wall.decompositions {
            let parts: Vec<&ChernVector> = dec.constituents().collect();
            let (a, b) = (parts[0], parts[1]);
            let oa = rank_one_omega(a)?;
            let ob = rank_one_omega(b)?;
            acc = acc.add(&delta_omega_primitive(a, b, from, to, &oa, &ob, s));
        }
    }
    Ok(acc.reduce())
}

/// Transported generating functions: `f(J_to) = f(J_from) + delta_f`, and the
/// same for `h`.
#[derive(Debug, Clone)]
pub struct Transport {
    pub delta_f: PoleSeries,
    pub delta_h: PoleSeries,
    /// Walls whose contributions entered, by ratio `m:n`.
    pub walls: Vec<WallRatio>,
}

/// Move `f_{r,c₁}` from `from` to `to` wall by wall.
pub fn wallcross_transport(
    s: &Surface,
    r: u32,
    c1: DivisorClass,
    from: &Polarization,
    to: &Polarization,
    qmax: QExp,
) -> Result<Transport, InvariantError> {
    let class = ResidueClass::of(r, c1);
    let ell = s.ell();
    let (delta_f, walls) = match r {
        1 => (PoleSeries::from_series(QSeries::zero(qmax)), Vec::new()),
        2 => {
            let d = f2_transport(ell, class.alpha, class.beta, from, to, qmax)?;
            let mut ratios: Vec<WallRatio> = Vec::new();
            // Contributing walls come from the same cone points as the transport sum.
            super::rank2::for_each_cone_point(ell as i64, class.alpha, class.beta, qmax, |n, m, _| {
                if to.sign_nm(n, m) != from.sign_nm(n, m) {
                    if let Some(w) = WallRatio::orthogonal_to(n, m) {
                        if !ratios.contains(&w) {
                            ratios.push(w);
                        }
                    }
                }
            });
            ratios.sort_by(|a, b| (a.m * b.n).cmp(&(b.m * a.n)));
            (PoleSeries::from_series(d), ratios)
        }
        3 => {
            let d = f3_transport(ell, class.alpha, class.beta, from, to, qmax)?;
            let mut ratios: Vec<WallRatio> = f3_wall_ratios(ell, class.alpha, class.beta, to, qmax)
                .into_iter()
                .chain(f3_wall_ratios(ell, class.alpha, class.beta, from, qmax))
                .map(|(m, n)| WallRatio { m, n })
                .collect();
            ratios.sort_by(|a, b| (a.m * b.n).cmp(&(b.m * a.n)));
            ratios.dedup();
            (d, ratios)
        }
        _ => return Err(InvariantError::UnsupportedRank(r)),
    };
    let hmax = qmax - QExp::new(r as i64, 6);
    let delta_h = prefactor_pow(r, qmax).mul_bounded(&delta_f, Some(hmax));
    Ok(Transport { delta_f, delta_h, walls })
}

/// Coefficient of `Δh` at the exponent of `Γ`.
pub fn transported_omega(t: &Transport, gamma: &ChernVector, s: &Surface) -> Result<WFraction, InvariantError> {
    let e = gamma.discriminant(s) * gamma.r_i64() - QExp::new(gamma.r as i64, 6);
    Ok(t.delta_h.coeff(e)?)
}

/// Transport `from → to` directly and through `via`; the two must agree exactly.
pub fn two_path_check(
    s: &Surface,
    r: u32,
    c1: DivisorClass,
    from: &Polarization,
    via: &Polarization,
    to: &Polarization,
    qmax: QExp,
) -> Result<IdentityCheck, InvariantError> {
    let direct = wallcross_transport(s, r, c1, from, to, qmax)?.delta_f;
    let first = wallcross_transport(s, r, c1, from, via, qmax)?.delta_f;
    let second = wallcross_transport(s, r, c1, via, to, qmax)?.delta_f;
    let mismatch = direct.agrees_with(&first.add(&second)).err();
    Ok(IdentityCheck {
        name: format!("r={r} c1={c1}: {from} -> {to} vs via {via}"),
        holds: mismatch.is_none(),
        first_mismatch: mismatch,
    })
}

/// For every integral `c₂` whose `h`-exponent lies in `[−r/6, qmax]`, compare the
/// rank-2 jump summed over walls with the difference of the closed-form
/// generating functions at `to` and `from`.
pub fn wall_sum_vs_closed_form(
    s: &Surface,
    c1: DivisorClass,
    from: &Polarization,
    to: &Polarization,
    qmax: QExp,
) -> Result<Vec<(i64, bool)>, InvariantError> {
    let mut out = Vec::new();
    // lowest c₂ with Δ ≥ 0
    let delta = |c2: i64| -> Result<Q, InvariantError> { Ok(ChernVector::integral(2, c1, c2)?.discriminant(s)) };
    let mut c2 = 0;
    while delta(c2)? < Q::zero() {
        c2 += 1;
    }
    while delta(c2 - 1)? >= Q::zero() {
        c2 -= 1;
    }
    let exponent = |c2: i64| -> Result<QExp, InvariantError> {
        Ok(ChernVector::integral(2, c1, c2)?.discriminant(s) * 2 - QExp::new(1, 3))
    };
    let mut top = c2;
    while exponent(top + 1)? <= qmax {
        top += 1;
    }
    let g_from = GeneratingFunction::new(*s, 2, c1, *from, top)?;
    let g_to = GeneratingFunction::new(*s, 2, c1, *to, top)?;
    for k in c2..=top {
        let gamma = ChernVector::integral(2, c1, k)?;
        let walls_sum = rank2_wall_delta(&gamma, from, to, s)?;
        let closed = g_to.omega_bar(k)?.sub(&g_from.omega_bar(k)?);
        out.push((k, walls_sum.equals(&closed)));
    }
    Ok(out)
}
