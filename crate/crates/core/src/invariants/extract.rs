//! From `f_r` to `h_r`, refined invariants, Poincaré polynomials and Euler numbers.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::rank2::f2;
use super::rank3::f3;
use super::{warnings_for, InvariantError, ResidueClass};
use crate::lattice::{q_text, ChernVector, DivisorClass, Polarization, Surface};
use crate::qseries::{coef, eta_pow, euler_product, Coef, PoleSeries, QExp, QSeries, WFraction, WLaurent};

/// `f_{1,c₁} = 1`, independent of `ℓ`, `c₁` and `J`.
pub fn f1(qmax: QExp) -> PoleSeries {
    PoleSeries::from_series(QSeries::one().add(&QSeries::zero(qmax)))
}

/// `(i/(θ₁(2z,τ)η(τ)))^r = q^{−r/6} U^r/(w − w^{−1})^r` with
/// `U = 1/∏(1−q^n)²(1−q^n w²)(1−q^n w^{−2})`, through `q^{qmax}`.
pub fn prefactor_pow(r: u32, qmax: QExp) -> PoleSeries {
    let off = QExp::new(-(r as i64), 6);
    let body = euler_product(&[0, 0, 2, -2], -(r as i32), qmax - off).shift(off, 0);
    PoleSeries::new(vec![1; r as usize], body)
}

/// `h_r = (i/(θ₁(2z)η^{b₂−1}))^r f_r`, through `q^{qmax}`.
pub fn h_from_f(f: &PoleSeries, r: u32, qmax: QExp) -> PoleSeries {
    prefactor_pow(r, qmax).mul_bounded(f, Some(qmax))
}

/// Coefficient of `q^e` in `a·b`.
fn product_coeff(a: &QSeries, b: &QSeries, e: QExp) -> WLaurent {
    let mut acc = WLaurent::zero();
    for (x, p) in b.terms() {
        if let Some(c) = a.coeff(e - *x) {
            acc += &(c * p);
        }
    }
    acc
}

/// A rational function `num/den` of `w`, used for evaluations at `w = −1`
/// where the `(w^m − w^{−m})` denominators can vanish.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFn {
    pub num: WLaurent,
    pub den: WLaurent,
}

impl RatFn {
    pub fn from_fraction(f: &WFraction) -> Self {
        RatFn { num: f.num.clone(), den: f.den_poly() }
    }

    /// Cancel common factors `(1 + w)` until the denominator is nonzero at `w = −1`.
    pub fn regular_at_minus_one(&self) -> Result<RatFn, InvariantError> {
        let one_plus_w = WLaurent::from_terms([(0, coef(1)), (1, coef(1))]);
        let mut cur = self.clone();
        while cur.den.eval_minus_one().is_zero() {
            if cur.num.is_zero() {
                return Ok(RatFn { num: WLaurent::zero(), den: WLaurent::one() });
            }
            let (Some(n), Some(d)) = (cur.num.div_exact(&one_plus_w), cur.den.div_exact(&one_plus_w)) else {
                return Err(InvariantError::PoleAtMinusOne);
            };
            cur = RatFn { num: n, den: d };
        }
        Ok(cur)
    }

    /// `w·d/dw` by the quotient rule.
    pub fn w_log_deriv(&self) -> RatFn {
        let num = &(&self.num.w_log_deriv() * &self.den) - &(&self.num * &self.den.w_log_deriv());
        RatFn { num, den: &self.den * &self.den }
    }

    pub fn eval_minus_one(&self) -> Result<Coef, InvariantError> {
        let r = self.regular_at_minus_one()?;
        Ok(r.num.eval_minus_one() / r.den.eval_minus_one())
    }
}

/// Checked Poincaré data of one moduli space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiData {
    pub dim: i64,
    /// `b_0, …, b_{2·dim}`.
    pub poincare: Vec<BigInt>,
    /// `p(M, 1)`.
    pub euler: BigInt,
    /// `(−1)^dim · lim_{w→−1} (w − w^{−1}) Ω(Γ, w)`.
    pub euler_limit: Coef,
}

fn sign_pow(d: i64) -> Coef {
    if d.is_even() {
        coef(1)
    } else {
        coef(-1)
    }
}

/// `p(M, w) = w^{dim}(w − w^{−1}) Ω(Γ, w)`, validated as an even palindromic
/// polynomial of degree `2·dim` with nonnegative integer coefficients.
pub fn betti_extract(omega: &WFraction, gamma: &ChernVector, s: &Surface) -> Result<BettiData, InvariantError> {
    let dim = gamma.moduli_dim(s)?;
    let lift = WLaurent::antisym(1).shift(dim);
    let p = omega.mul_laurent(&lift);
    let poly = p.to_polynomial().ok_or_else(|| InvariantError::NotPolynomial(p.reduce().to_string()))?;
    if !poly.is_zero() && (poly.low() < Some(0) || poly.high() > Some(2 * dim)) {
        return Err(InvariantError::NotPolynomial(poly.to_string()));
    }
    if !poly.is_integral() || poly.has_negative() {
        return Err(InvariantError::NegativeBetti(poly.to_string()));
    }
    if !poly.is_palindromic_about(2 * dim) {
        return Err(InvariantError::NotPalindromic(poly.to_string()));
    }
    let poincare: Vec<BigInt> = (0..=2 * dim).map(|i| poly.coeff(i).to_integer()).collect();
    let euler = poly.eval_one().to_integer();
    let times = RatFn { num: &omega.num * &WLaurent::antisym(1), den: omega.den_poly() };
    let euler_limit = times.eval_minus_one()? * sign_pow(dim);
    Ok(BettiData { dim, poincare, euler, euler_limit })
}

/// `f_r(τ) = (−1)^{r−1}/(2^{r−1}(r−1)!)·[(w∂_w)^{r−1} f_r](w = −1)` through `q^{upto}`.
pub fn specialize_at_half(f: &PoleSeries, r: u32, upto: QExp) -> Result<QSeries, InvariantError> {
    let fmax = f.qmax().unwrap_or(upto);
    if upto > fmax {
        return Err(InvariantError::ExponentBeyondTruncation { needed: upto, qmax: fmax });
    }
    let den = WFraction::new(WLaurent::one(), f.den().to_vec()).den_poly();
    let factorial: i64 = (1..r as i64).product();
    let norm = sign_pow(r as i64 - 1) / Coef::from_integer(BigInt::from(factorial << (r - 1)));
    let mut f_tau = QSeries::zero(upto);
    for (x, p) in f.body().terms() {
        if *x > upto {
            break;
        }
        let mut g = RatFn { num: p.clone(), den: den.clone() }.regular_at_minus_one()?;
        for _ in 1..r {
            g = g.w_log_deriv().regular_at_minus_one()?;
        }
        f_tau.add_term(*x, 0, g.eval_minus_one()? * &norm);
    }
    Ok(f_tau)
}

/// Euler number through the `z`-derivative route: `h_r(τ) = η^{−4r} f_r(τ)`
/// with `f_r(τ)` from [`specialize_at_half`], read at `q^{rΔ−r/6}` and times `(−1)^{dim}`.
pub fn euler_by_derivative(f: &PoleSeries, gamma: &ChernVector, s: &Surface) -> Result<Coef, InvariantError> {
    let r = gamma.r;
    let dim = gamma.moduli_dim(s)?;
    let e = gamma.discriminant(s) * gamma.r_i64() - QExp::new(r as i64, 6);
    let lift = QExp::new(r as i64, 6);
    let f_tau = specialize_at_half(f, r, e + lift)?;
    let eta = eta_pow(-4 * r as i32, e + lift);
    let c = product_coeff(&eta, &f_tau, e);
    Ok(c.coeff(0) * sign_pow(dim))
}

/// Invert `Ω̄(Γ) = Σ_{m|Γ} Ω(Γ/m, −(−w)^m)/m`.
pub fn rational_to_integer(
    rational: &HashMap<ChernVector, WFraction>,
    gamma: &ChernVector,
    s: &Surface,
) -> Result<WFraction, InvariantError> {
    let bar = rational.get(gamma).ok_or(InvariantError::MissingDivisorData(*gamma))?;
    let mut omega = bar.clone();
    for m in 2..=gamma.content() as u32 {
        if let Some(sub) = gamma.divide(m, s) {
            let sub_omega = rational_to_integer(rational, &sub, s)?;
            let term = sub_omega.substitute_power(m, m % 2 == 0).scale(&Coef::new(BigInt::one(), BigInt::from(m)));
            omega = omega.sub(&term);
        }
    }
    Ok(omega.reduce())
}

/// Forward map `Ω ↦ Ω̄`.
pub fn rational_from_integer(
    integer: &HashMap<ChernVector, WFraction>,
    gamma: &ChernVector,
    s: &Surface,
) -> Result<WFraction, InvariantError> {
    let mut bar = integer.get(gamma).ok_or(InvariantError::MissingDivisorData(*gamma))?.clone();
    for m in 2..=gamma.content() as u32 {
        if let Some(sub) = gamma.divide(m, s) {
            let o = integer.get(&sub).ok_or(InvariantError::MissingDivisorData(sub))?;
            bar = bar.add(&o.substitute_power(m, m % 2 == 0).scale(&Coef::new(BigInt::one(), BigInt::from(m))));
        }
    }
    Ok(bar.reduce())
}

/// Everything known about one `(Γ, J)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantRecord {
    pub ell: u32,
    pub gamma: ChernVector,
    pub j: Polarization,
    /// `Ω(Γ, w; J)`.
    pub refined: WFraction,
    pub dim: i64,
    pub poincare: Vec<BigInt>,
    pub euler: BigInt,
    pub warnings: Vec<String>,
}

fn big_json(b: &BigInt) -> Value {
    match b.to_i64() {
        Some(v) => json!(v),
        None => json!(b.to_string()),
    }
}

impl InvariantRecord {
    pub fn to_json(&self) -> Value {
        let (b, a) = self.gamma.c1.beta_alpha();
        json!({
            "ell": self.ell,
            "r": self.gamma.r,
            "c1": [b, a],
            "c2": q_text::to_string(&self.gamma.c2),
            "J": {
                "m": q_text::to_string(&self.j.m),
                "n": q_text::to_string(&self.j.n),
                "side": self.j.side.to_string(),
            },
            "dim": self.dim,
            "betti": self.poincare.iter().map(big_json).collect::<Vec<_>>(),
            "euler": big_json(&self.euler),
            "warnings": self.warnings,
        })
    }

    /// Even Betti numbers `b_0, b_2, …, b_{2·dim}`.
    pub fn even_betti(&self) -> Vec<BigInt> {
        self.poincare.iter().step_by(2).cloned().collect()
    }
}

/// `f_r` and `(i/θ₁(2z)η)^r` for a fixed residue class and polarization,
/// ready for coefficient extraction.
#[derive(Debug, Clone)]
pub struct GeneratingFunction {
    surface: Surface,
    r: u32,
    c1: DivisorClass,
    j: Polarization,
    f: PoleSeries,
    pref: PoleSeries,
}

impl GeneratingFunction {
    /// Prepare `h_{r,c₁}` far enough to read off all `c₂ ≤ c2_max`.
    pub fn new(
        surface: Surface,
        r: u32,
        c1: DivisorClass,
        j: Polarization,
        c2_max: i64,
    ) -> Result<Self, InvariantError> {
        let top = ChernVector::integral(r, c1, c2_max)?;
        let qmax = (top.discriminant(&surface) * r as i64).max(QExp::zero());
        Self::with_qmax(surface, r, c1, j, qmax)
    }

    /// Prepare `f_{r,c₁}` through `q^{qmax}` (and `h_{r,c₁}` through `q^{qmax − r/6}`).
    pub fn with_qmax(
        surface: Surface,
        r: u32,
        c1: DivisorClass,
        j: Polarization,
        qmax: QExp,
    ) -> Result<Self, InvariantError> {
        let class = ResidueClass::of(r, c1);
        let ell = surface.ell();
        let f = match r {
            1 => f1(qmax),
            2 => f2(ell, class.alpha, class.beta, &j, qmax)?,
            3 => f3(ell, class.alpha, class.beta, &j, qmax)?,
            _ => return Err(InvariantError::UnsupportedRank(r)),
        };
        let pref = prefactor_pow(r, qmax);
        Ok(GeneratingFunction { surface, r, c1, j, f, pref })
    }

    pub fn f(&self) -> &PoleSeries {
        &self.f
    }

    pub fn surface(&self) -> &Surface {
        &self.surface
    }

    pub fn polarization(&self) -> &Polarization {
        &self.j
    }

    /// The full `h_{r,c₁}`.
    pub fn h(&self) -> PoleSeries {
        let qmax = self.f.qmax().map(|q| q - QExp::new(self.r as i64, 6));
        self.pref.mul_bounded(&self.f, qmax)
    }

    pub fn gamma(&self, c2: i64) -> Result<ChernVector, InvariantError> {
        Ok(ChernVector::integral(self.r, self.c1, c2)?)
    }

    /// `Ω̄(Γ, w; J)`: the coefficient of `q^{rΔ−r/6}` in `h_{r,c₁}`.
    pub fn omega_bar(&self, c2: i64) -> Result<WFraction, InvariantError> {
        let gamma = self.gamma(c2)?;
        let e = gamma.discriminant(&self.surface) * self.r as i64 - QExp::new(self.r as i64, 6);
        let avail = self.f.qmax().map(|q| q - QExp::new(self.r as i64, 6));
        if let Some(m) = avail {
            if e > m {
                return Err(InvariantError::ExponentBeyondTruncation { needed: e, qmax: m });
            }
        }
        let num = product_coeff(self.pref.body(), self.f.body(), e);
        let mut den = self.pref.den().to_vec();
        den.extend_from_slice(self.f.den());
        Ok(WFraction::new(num, den).reduce())
    }

    /// `Ω(Γ, w; J)`, removing multi-cover contributions when `Γ` is not primitive.
    pub fn omega(&self, c2: i64) -> Result<WFraction, InvariantError> {
        let gamma = self.gamma(c2)?;
        if gamma.content() == 1 {
            return self.omega_bar(c2);
        }
        let mut data = HashMap::new();
        data.insert(gamma, self.omega_bar(c2)?);
        for m in 2..=gamma.content() as u32 {
            if let Some(sub) = gamma.divide(m, &self.surface) {
                let c2s = sub.c2.to_integer();
                let g = GeneratingFunction::new(self.surface, sub.r, sub.c1, self.j, c2s)?;
                for k in 2..=sub.content() as u32 {
                    if let Some(subsub) = sub.divide(k, &self.surface) {
                        let gg = GeneratingFunction::new(self.surface, subsub.r, subsub.c1, self.j, subsub.c2.to_integer())?;
                        data.insert(subsub, gg.omega_bar(subsub.c2.to_integer())?);
                    }
                }
                data.insert(sub, g.omega_bar(c2s)?);
            }
        }
        rational_to_integer(&data, &gamma, &self.surface)
    }

    /// Betti numbers and Euler number with all three Euler routes cross-checked.
    pub fn record(&self, c2: i64) -> Result<InvariantRecord, InvariantError> {
        let gamma = self.gamma(c2)?;
        if !gamma.c2.is_integer() {
            return Err(InvariantError::NonIntegralC2(gamma.c2));
        }
        let omega = self.omega(c2)?;
        let betti = betti_extract(&omega, &gamma, &self.surface)?;
        let p1 = Coef::from_integer(betti.euler.clone());
        let mut derivative = None;
        if gamma.content() == 1 {
            let d = euler_by_derivative(&self.f, &gamma, &self.surface)?;
            derivative = Some(d);
        }
        let consistent = betti.euler_limit == p1 && derivative.as_ref().is_none_or(|d| *d == p1);
        if !consistent {
            return Err(InvariantError::EulerMismatch {
                p1: p1.to_string(),
                limit: betti.euler_limit.to_string(),
                derivative: derivative.map(|d| d.to_string()).unwrap_or_default(),
            });
        }
        Ok(InvariantRecord {
            ell: self.surface.ell(),
            gamma,
            j: self.j,
            refined: omega,
            dim: betti.dim,
            poincare: betti.poincare,
            euler: betti.euler,
            warnings: warnings_for(self.surface.ell()),
        })
    }
}
