//! Intersection theory of the Hirzebruch surface `Σ_ℓ`, Chern data of
//! sheaves, polarizations and walls of marginal stability.
//!
//! Classes are written in the basis `(C, f)`: `C` is the base curve with
//! `C² = −ℓ`, `f` the fibre with `f² = 0` and `C·f = 1`. A polarization
//! `J_{m,n} = m(C + ℓf) + nf` pairs with `c = aC + bf` as `c·J = a·n + b·m`,
//! independently of `ℓ`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact rational used for slopes, polarizations and second Chern classes.
pub type Q = Rational64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("ℓ = 0 is not supported (Σ_0 = P¹×P¹ lacks the level-ℓ Appell data)")]
    UnsupportedEll,
    #[error("moduli dimension {0} is not an integer")]
    NonIntegerDimension(Q),
    #[error("moduli dimension {0} is negative")]
    NegativeDimension(i64),
    #[error("polarization has J² = 0")]
    DegeneratePolarization,
    #[error("polarization J_{{{m},{n}}} is outside the closed ample cone")]
    InvalidPolarization { m: Q, n: Q },
    #[error("rank {0} is not supported here")]
    UnsupportedRank(u32),
    #[error("rank must be at least 1")]
    ZeroRank,
}

/// Rationals serialise as `"p/q"` strings (plain `"p"` when integral).
pub mod q_text {
    use super::Q;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn to_string(q: &Q) -> String {
        if q.is_integer() {
            q.numer().to_string()
        } else {
            format!("{}/{}", q.numer(), q.denom())
        }
    }

    pub fn parse(s: &str) -> Result<Q, String> {
        let bad = || format!("invalid rational '{s}'");
        match s.trim().split_once('/') {
            Some((n, d)) => {
                let n: i64 = n.trim().parse().map_err(|_| bad())?;
                let d: i64 = d.trim().parse().map_err(|_| bad())?;
                if d == 0 {
                    return Err(bad());
                }
                Ok(Q::new(n, d))
            }
            None => Ok(Q::from_integer(s.trim().parse().map_err(|_| bad())?)),
        }
    }

    pub fn serialize<S: Serializer>(q: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_string(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(D::Error::custom)
    }
}

/// Integral class `c·C + f·f` in `H²(Σ_ℓ, Z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DivisorClass {
    /// Coefficient of the base curve `C`.
    pub c: i64,
    /// Coefficient of the fibre `f`.
    pub f: i64,
}

impl DivisorClass {
    pub const ZERO: DivisorClass = DivisorClass { c: 0, f: 0 };
    pub const BASE: DivisorClass = DivisorClass { c: 1, f: 0 };
    pub const FIBRE: DivisorClass = DivisorClass { c: 0, f: 1 };

    pub const fn new(c: i64, f: i64) -> Self {
        DivisorClass { c, f }
    }

    /// The class `βC − αf`, the parametrisation used by the generating functions.
    pub const fn from_beta_alpha(beta: i64, alpha: i64) -> Self {
        DivisorClass { c: beta, f: -alpha }
    }

    /// `(β, α)` with `self = βC − αf`.
    pub const fn beta_alpha(&self) -> (i64, i64) {
        (self.c, -self.f)
    }

    pub fn is_divisible_by(&self, m: i64) -> bool {
        self.c % m == 0 && self.f % m == 0
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, o: DivisorClass) -> DivisorClass {
        DivisorClass::new(self.c + o.c, self.f + o.f)
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, o: DivisorClass) -> DivisorClass {
        DivisorClass::new(self.c - o.c, self.f - o.f)
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass::new(-self.c, -self.f)
    }
}

impl Mul<DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, d: DivisorClass) -> DivisorClass {
        DivisorClass::new(self * d.c, self * d.f)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.c, self.f) {
            (0, 0) => write!(f, "0"),
            (c, 0) => write!(f, "{}", term(c, "C")),
            (0, b) => write!(f, "{}", term(b, "f")),
            (c, b) => {
                let tail = term(b.abs(), "f");
                write!(f, "{}{}{}", term(c, "C"), if b < 0 { "-" } else { "+" }, tail)
            }
        }
    }
}

fn term(k: i64, sym: &str) -> String {
    match k {
        1 => sym.to_string(),
        -1 => format!("-{sym}"),
        _ => format!("{k}{sym}"),
    }
}

/// Rational class, e.g. a slope `c₁/r` or a projection `c_±`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SlopeVector {
    #[serde(with = "q_text")]
    pub c: Q,
    #[serde(with = "q_text")]
    pub f: Q,
}

impl SlopeVector {
    pub fn new(c: Q, f: Q) -> Self {
        SlopeVector { c, f }
    }

    pub fn zero() -> Self {
        SlopeVector::new(Q::zero(), Q::zero())
    }

    pub fn scale(&self, k: Q) -> Self {
        SlopeVector::new(self.c * k, self.f * k)
    }
}

impl From<DivisorClass> for SlopeVector {
    fn from(d: DivisorClass) -> Self {
        SlopeVector::new(Q::from_integer(d.c), Q::from_integer(d.f))
    }
}

impl Add for SlopeVector {
    type Output = SlopeVector;
    fn add(self, o: SlopeVector) -> SlopeVector {
        SlopeVector::new(self.c + o.c, self.f + o.f)
    }
}

impl Sub for SlopeVector {
    type Output = SlopeVector;
    fn sub(self, o: SlopeVector) -> SlopeVector {
        SlopeVector::new(self.c - o.c, self.f - o.f)
    }
}

/// The Hirzebruch surface `Σ_ℓ`, `ℓ ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Surface {
    ell: u32,
}

impl Surface {
    /// Holomorphic Euler characteristic `χ(O)`.
    pub const CHI_O: i64 = 1;
    /// Topological Euler characteristic.
    pub const CHI_TOP: i64 = 4;
    pub const B2: i64 = 2;

    pub fn new(ell: u32) -> Result<Self, LatticeError> {
        if ell == 0 {
            return Err(LatticeError::UnsupportedEll);
        }
        Ok(Surface { ell })
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn ell_i64(&self) -> i64 {
        self.ell as i64
    }

    /// `K = −2C − (2+ℓ)f`.
    pub fn canonical_class(&self) -> DivisorClass {
        DivisorClass::new(-2, -2 - self.ell_i64())
    }

    /// Integral intersection form.
    pub fn dot(&self, x: DivisorClass, y: DivisorClass) -> i64 {
        -self.ell_i64() * x.c * y.c + x.c * y.f + x.f * y.c
    }

    /// Intersection form on rational classes.
    pub fn intersect(&self, x: impl Into<SlopeVector>, y: impl Into<SlopeVector>) -> Q {
        let (x, y) = (x.into(), y.into());
        -Q::from_integer(self.ell_i64()) * x.c * y.c + x.c * y.f + x.f * y.c
    }

    pub fn square(&self, x: DivisorClass) -> i64 {
        self.dot(x, x)
    }

    /// The class of `J_{m,n}`.
    pub fn polarization_class(&self, j: &Polarization) -> SlopeVector {
        SlopeVector::new(j.m, j.m * Q::from_integer(self.ell_i64()) + j.n)
    }

    /// `(c_+, c_−)` with `c_+ = (c·J/J²) J`.
    pub fn project_pm(
        &self,
        c: impl Into<SlopeVector>,
        j: &Polarization,
    ) -> Result<(SlopeVector, SlopeVector), LatticeError> {
        let c = c.into();
        let j2 = j.square(self);
        if j2.is_zero() {
            return Err(LatticeError::DegeneratePolarization);
        }
        let jc = self.polarization_class(j);
        let plus = jc.scale(self.intersect(c, jc) / j2);
        Ok((plus, c - plus))
    }
}

/// Which side of a wall a sign evaluation `sgn(c·J)` falls on when `c·J = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `J − εf`: ties resolve to `−sgn(c·f)`.
    Minus,
    /// On the wall: `sgn(0) = 0`.
    Exact,
    /// `J + εf`: ties resolve to `sgn(c·f)`.
    Plus,
}

impl std::str::FromStr for Side {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "minus" | "-" => Ok(Side::Minus),
            "exact" | "0" => Ok(Side::Exact),
            "plus" | "+" => Ok(Side::Plus),
            _ => Err(format!("unknown side '{s}' (expected minus, exact or plus)")),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Minus => "minus",
            Side::Exact => "exact",
            Side::Plus => "plus",
        })
    }
}

/// Polarization `J_{m,n} = m(C+ℓf) + nf` with a tie-break side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Polarization {
    #[serde(with = "q_text")]
    pub m: Q,
    #[serde(with = "q_text")]
    pub n: Q,
    pub side: Side,
}

impl Polarization {
    pub fn new(m: Q, n: Q, side: Side) -> Result<Self, LatticeError> {
        if m.is_negative() || n.is_negative() || (m.is_zero() && n.is_zero()) {
            return Err(LatticeError::InvalidPolarization { m, n });
        }
        Ok(Polarization { m, n, side })
    }

    pub fn integral(m: i64, n: i64, side: Side) -> Result<Self, LatticeError> {
        Polarization::new(Q::from_integer(m), Q::from_integer(n), side)
    }

    pub fn with_side(&self, side: Side) -> Self {
        Polarization { side, ..*self }
    }

    pub fn is_ample(&self) -> bool {
        self.m.is_positive() && self.n.is_positive()
    }

    /// `J² = m(ℓm + 2n)`.
    pub fn square(&self, s: &Surface) -> Q {
        self.m * (self.m * Q::from_integer(s.ell_i64()) + self.n * 2)
    }

    /// `c·J` for `c = aC + bf`.
    pub fn pair(&self, c: DivisorClass) -> Q {
        self.n * c.c + self.m * c.f
    }

    /// `sgn(c·J)` for `c = aC + bf`, with ties broken according to `side`.
    pub fn sign(&self, c: DivisorClass) -> i32 {
        self.sign_nm(c.c, -c.f)
    }

    /// `sgn(c·J)` for `c = NC − Mf`, i.e. `sgn(N·n − M·m)`, ties broken by `side`.
    pub fn sign_nm(&self, big_n: i64, big_m: i64) -> i32 {
        let (mn, md) = (*self.m.numer() as i128, *self.m.denom() as i128);
        let (nn, nd) = (*self.n.numer() as i128, *self.n.denom() as i128);
        let v = big_n as i128 * nn * md - big_m as i128 * mn * nd;
        match v.cmp(&0) {
            Ordering::Greater => 1,
            Ordering::Less => -1,
            Ordering::Equal => match self.side {
                Side::Exact => 0,
                Side::Plus => sgn(big_n),
                Side::Minus => -sgn(big_n),
            },
        }
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "J({},{};{})", self.m, self.n, self.side)
    }
}

pub(crate) fn sgn(x: i64) -> i32 {
    match x.cmp(&0) {
        Ordering::Greater => 1,
        Ordering::Less => -1,
        Ordering::Equal => 0,
    }
}

/// Chern data `(r, c₁, c₂)` of a sheaf.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChernVector {
    pub r: u32,
    pub c1: DivisorClass,
    #[serde(with = "q_text")]
    pub c2: Q,
}

impl ChernVector {
    pub fn new(r: u32, c1: DivisorClass, c2: Q) -> Result<Self, LatticeError> {
        if r == 0 {
            return Err(LatticeError::ZeroRank);
        }
        Ok(ChernVector { r, c1, c2 })
    }

    pub fn integral(r: u32, c1: DivisorClass, c2: i64) -> Result<Self, LatticeError> {
        ChernVector::new(r, c1, Q::from_integer(c2))
    }

    pub fn r_i64(&self) -> i64 {
        self.r as i64
    }

    /// `ch₂ = c₁²/2 − c₂`.
    pub fn ch2(&self, s: &Surface) -> Q {
        Q::new(s.square(self.c1), 2) - self.c2
    }

    /// Rebuild from `(r, c₁, ch₂)`.
    pub fn from_ch(r: u32, c1: DivisorClass, ch2: Q, s: &Surface) -> Result<Self, LatticeError> {
        ChernVector::new(r, c1, Q::new(s.square(c1), 2) - ch2)
    }

    pub fn slope(&self) -> SlopeVector {
        SlopeVector::from(self.c1).scale(Q::new(1, self.r_i64()))
    }

    /// `Δ = (c₂ − (r−1)c₁²/(2r)) / r`.
    pub fn discriminant(&self, s: &Surface) -> Q {
        let r = self.r_i64();
        (self.c2 - Q::new((r - 1) * s.square(self.c1), 2 * r)) / r
    }

    /// `2r²Δ − r²χ(O) + 1`.
    pub fn moduli_dim(&self, s: &Surface) -> Result<i64, LatticeError> {
        let r = self.r_i64();
        let d = self.discriminant(s) * (2 * r * r) - Q::from_integer(r * r * Surface::CHI_O - 1);
        if !d.is_integer() {
            return Err(LatticeError::NonIntegerDimension(d));
        }
        let d = d.to_integer();
        if d < 0 {
            return Err(LatticeError::NegativeDimension(d));
        }
        Ok(d)
    }

    /// Sum of charges: ranks, first Chern classes and `ch₂` add.
    pub fn add(&self, o: &ChernVector, s: &Surface) -> ChernVector {
        let ch2 = self.ch2(s) + o.ch2(s);
        ChernVector::from_ch(self.r + o.r, self.c1 + o.c1, ch2, s).expect("positive rank")
    }

    /// Twist by a line bundle `L`: `c₁ ↦ c₁ + rL`, `ch ↦ ch·e^L`.
    pub fn twist(&self, l: DivisorClass, s: &Surface) -> ChernVector {
        let r = self.r_i64();
        let ch2 = self.ch2(s) + Q::from_integer(s.dot(self.c1, l)) + Q::new(r * s.square(l), 2);
        ChernVector::from_ch(self.r, self.c1 + r * l, ch2, s).expect("positive rank")
    }

    /// `Γ/m` if it is again an integral charge.
    pub fn divide(&self, m: u32, s: &Surface) -> Option<ChernVector> {
        let mi = m as i64;
        if m == 0 || self.r % m != 0 || !self.c1.is_divisible_by(mi) {
            return None;
        }
        let c1 = DivisorClass::new(self.c1.c / mi, self.c1.f / mi);
        let g = ChernVector::from_ch(self.r / m, c1, self.ch2(s) / mi, s).ok()?;
        g.c2.is_integer().then_some(g)
    }

    /// Largest `m` dividing `(r, c₁)`; the charge is primitive when this is 1.
    pub fn content(&self) -> i64 {
        self.r_i64().gcd(&self.c1.c).gcd(&self.c1.f)
    }
}

impl fmt::Display for ChernVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.r, self.c1, self.c2)
    }
}

/// `⟨Γ₁,Γ₂⟩ = r₁r₂(μ₂−μ₁)·K`.
pub fn pairing(g1: &ChernVector, g2: &ChernVector, s: &Surface) -> i64 {
    s.dot(relative_class(g1, g2), s.canonical_class())
}

/// `I(Γ₁,Γ₂;J) = r₁r₂(μ₂−μ₁)·J`.
pub fn ical(g1: &ChernVector, g2: &ChernVector, j: &Polarization) -> Q {
    j.pair(relative_class(g1, g2))
}

/// `r₁r₂(μ₂ − μ₁) = r₁c₁(Γ₂) − r₂c₁(Γ₁)`.
pub fn relative_class(g1: &ChernVector, g2: &ChernVector) -> DivisorClass {
    g1.r_i64() * g2.c1 - g2.r_i64() * g1.c1
}

/// `Δ(F)` from the quotients `E_1, …, E_s` of a filtration.
pub fn discriminant_from_filtration(quotients: &[ChernVector], s: &Surface) -> Q {
    let total = quotients
        .iter()
        .skip(1)
        .fold(quotients[0], |acc, e| acc.add(e, s));
    let r = Q::from_integer(total.r_i64());
    let mut sum = Q::zero();
    for e in quotients {
        sum += Q::from_integer(e.r_i64()) / r * e.discriminant(s);
    }
    let mut partial = quotients[0];
    for e in &quotients[1..] {
        let next = partial.add(e, s);
        let dmu = partial.slope() - next.slope();
        let weight = Q::from_integer(partial.r_i64() * next.r_i64()) / Q::from_integer(e.r_i64());
        sum -= weight * s.intersect(dmu, dmu) / (r * 2);
        partial = next;
    }
    sum
}

/// Ray `J_{m,n}` of a wall, stored as a coprime pair of non-negative integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WallRatio {
    pub m: i64,
    pub n: i64,
}

impl WallRatio {
    /// The ray orthogonal to `c = NC − Mf`, if it lies in the closed ample cone
    /// and has `J² > 0`.
    pub fn orthogonal_to(big_n: i64, big_m: i64) -> Option<WallRatio> {
        if big_n == 0 || big_n.signum() * big_m.signum() < 0 {
            return None;
        }
        let (m, n) = (big_n.abs(), big_m.abs());
        let g = m.gcd(&n);
        Some(WallRatio { m: m / g, n: n / g })
    }

    pub fn polarization(&self) -> Polarization {
        Polarization::integral(self.m, self.n, Side::Exact).expect("m > 0 on every wall")
    }

    /// `m/n` as a float, `+∞` on the `J_{1,0}` boundary ray.
    pub fn value(&self) -> f64 {
        if self.n == 0 {
            f64::INFINITY
        } else {
            self.m as f64 / self.n as f64
        }
    }

    fn cmp_value(&self, o: &WallRatio) -> Ordering {
        (self.m as i128 * o.n as i128).cmp(&(o.m as i128 * self.n as i128))
    }
}

impl fmt::Display for WallRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.m, self.n)
    }
}

/// One way of writing `Γ` as a sum of semistable constituents with equal slope on the wall.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub parts: Vec<(ChernVector, u32)>,
}

impl Decomposition {
    fn from_list(mut list: Vec<ChernVector>) -> Self {
        list.sort_by_key(chern_key);
        let mut parts: Vec<(ChernVector, u32)> = Vec::new();
        for g in list {
            match parts.last_mut() {
                Some((h, k)) if *h == g => *k += 1,
                _ => parts.push((g, 1)),
            }
        }
        Decomposition { parts }
    }

    pub fn constituents(&self) -> impl Iterator<Item = &ChernVector> {
        self.parts.iter().flat_map(|(g, k)| std::iter::repeat_n(g, *k as usize))
    }
}

fn chern_key(g: &ChernVector) -> (u32, DivisorClass, i64, i64) {
    (g.r, g.c1, *g.c2.numer(), *g.c2.denom())
}

/// A wall of marginal stability with all decompositions of `Γ` into constituents
/// having `Δ_i ≥ 0` that destabilise on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wall {
    pub ratio: WallRatio,
    pub decompositions: Vec<Decomposition>,
}

/// Enumerate the walls for `Γ` inside the closed ample cone, sorted by `m/n`.
///
/// A wall is orthogonal to `c = r₁c₁(E₂) − r₂c₁(E₁)` for a two-step splitting.
/// Requiring `Δ₁, Δ₂ ≥ 0` in the filtration formula gives
/// `−c² ≤ 2r²r₁r₂Δ(Γ)`, and on a wall `c = NC − Mf` has `NM ≥ 0`, so
/// `−c² = ℓN² + 2NM` bounds both `|N|` and `|M|`.
pub fn walls(g: &ChernVector, s: &Surface) -> Result<Vec<Wall>, LatticeError> {
    if g.r != 2 && g.r != 3 {
        return Err(LatticeError::UnsupportedRank(g.r));
    }
    let delta = g.discriminant(s);
    if delta.is_negative() {
        return Ok(Vec::new());
    }
    let r = g.r_i64();
    // Only the 1 + (r−1) splitting needs enumerating: for r = 3 a (2,1)
    // ordering describes the same wall with c negated.
    let (r1, r2) = (1i64, r - 1);
    let budget = delta * (2 * r * r * r1 * r2);
    let ell = s.ell_i64();
    let n_max = (budget / ell).to_f64().unwrap_or(0.0).sqrt().floor() as i64 + 1;
    let mut found: Vec<Wall> = Vec::new();
    for big_n in 1..=n_max {
        let m_max = ((budget - Q::from_integer(ell * big_n * big_n)) / (2 * big_n))
            .to_f64()
            .unwrap_or(-1.0)
            .floor() as i64;
        for big_m in 0..=m_max.max(-1) {
            // c = r1 c1(E2) − r2 c1(E1) = c1 − r c1(E1) with r1 = 1
            let c = DivisorClass::new(big_n, -big_m);
            let diff = g.c1 - c;
            if !diff.is_divisible_by(r) {
                continue;
            }
            if Q::from_integer(-s.square(c)) > budget {
                continue;
            }
            let e1 = DivisorClass::new(diff.c / r, diff.f / r);
            let e2 = g.c1 - e1;
            let Some(ratio) = WallRatio::orthogonal_to(big_n, big_m) else { continue };
            let decs = two_step_decompositions(g, e1, e2, s, ratio);
            if decs.is_empty() {
                continue;
            }
            match found.iter_mut().find(|w| w.ratio == ratio) {
                Some(w) => w.decompositions.extend(decs),
                None => found.push(Wall { ratio, decompositions: decs }),
            }
        }
    }
    for w in &mut found {
        w.decompositions.sort_by_key(dec_key);
        w.decompositions.dedup();
    }
    found.sort_by(|a, b| a.ratio.cmp_value(&b.ratio));
    Ok(found)
}

fn dec_key(d: &Decomposition) -> Vec<(u32, DivisorClass, i64, i64, u32)> {
    d.parts
        .iter()
        .map(|(g, k)| (g.r, g.c1, *g.c2.numer(), *g.c2.denom(), *k))
        .collect()
}

/// All `(E₁ rank 1, E₂ rank r−1)` with given first Chern classes and `Δ_i ≥ 0`,
/// plus for rank 3 the refinements of `E₂` into two rank-1 sheaves aligned on the same wall.
fn two_step_decompositions(
    g: &ChernVector,
    e1: DivisorClass,
    e2: DivisorClass,
    s: &Surface,
    ratio: WallRatio,
) -> Vec<Decomposition> {
    let r2 = g.r - 1;
    let ch2 = g.ch2(s);
    // ch₂(E₁) = e1²/2 − k1 ; ch₂(E₂) = ch₂ − ch₂(E₁)
    let half_e1 = Q::new(s.square(e1), 2);
    let mut out = Vec::new();
    let mut k1 = 0i64;
    loop {
        let ch2_e1 = half_e1 - k1;
        let Ok(big_e2) = ChernVector::from_ch(r2, e2, ch2 - ch2_e1, s) else { break };
        if big_e2.discriminant(s).is_negative() {
            break;
        }
        let big_e1 = ChernVector::integral(1, e1, k1).expect("rank 1");
        if big_e2.c2.is_integer() {
            out.push(Decomposition::from_list(vec![big_e1, big_e2]));
            if r2 == 2 {
                for (a, b) in aligned_rank_one_pairs(&big_e2, s, ratio) {
                    out.push(Decomposition::from_list(vec![big_e1, a, b]));
                }
            }
        }
        k1 += 1;
    }
    out
}

/// Splittings of a rank-2 charge into two rank-1 charges orthogonal to the wall,
/// each with `c₂ ≥ 0`.
fn aligned_rank_one_pairs(
    e: &ChernVector,
    s: &Surface,
    ratio: WallRatio,
) -> Vec<(ChernVector, ChernVector)> {
    // c = e_b − e_a must satisfy c·J_W = 0: c = t·(m C − n f) with t ∈ Z.
    let v = DivisorClass::new(ratio.m, -ratio.n);
    let delta = e.discriminant(s);
    let vv = -s.square(v);
    if vv <= 0 {
        return Vec::new();
    }
    let t_max = ((delta * 8) / vv).to_f64().unwrap_or(0.0).sqrt().floor() as i64 + 1;
    let mut out = Vec::new();
    for t in 1..=t_max {
        let c = t * v;
        let sum = e.c1;
        let diff = sum - c;
        if !diff.is_divisible_by(2) {
            continue;
        }
        let ea = DivisorClass::new(diff.c / 2, diff.f / 2);
        let eb = sum - ea;
        let ch2 = e.ch2(s);
        let mut ka = 0i64;
        loop {
            let ch2_a = Q::new(s.square(ea), 2) - ka;
            let Ok(b) = ChernVector::from_ch(1, eb, ch2 - ch2_a, s) else { break };
            if b.c2.is_negative() {
                break;
            }
            let a = ChernVector::integral(1, ea, ka).expect("rank 1");
            out.push((a, b));
            ka += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(ell: u32) -> Surface {
        Surface::new(ell).unwrap()
    }

    #[test]
    fn basic_intersections() {
        assert_eq!(s(2).dot(DivisorClass::BASE, DivisorClass::BASE), -2);
        assert_eq!(s(5).dot(DivisorClass::FIBRE, DivisorClass::FIBRE), 0);
        assert_eq!(s(1).dot(DivisorClass::new(1, 2), DivisorClass::FIBRE), 1);
        assert_eq!(s(3).canonical_class(), DivisorClass::new(-2, -5));
        assert_eq!(s(1).square(s(1).canonical_class()), 8);
    }

    #[test]
    fn discriminants_and_dimensions() {
        let one = s(1);
        let g = ChernVector::integral(1, DivisorClass::ZERO, 5).unwrap();
        assert_eq!(g.discriminant(&one), Q::from_integer(5));
        let g = ChernVector::integral(3, DivisorClass::new(-1, 0), 2).unwrap();
        assert_eq!(g.discriminant(&one), Q::new(7, 9));
        assert_eq!(g.moduli_dim(&one).unwrap(), 6);
        let g = ChernVector::integral(2, DivisorClass::BASE, 1).unwrap();
        assert_eq!(g.discriminant(&one), Q::new(5, 8));
        let g = ChernVector::integral(3, DivisorClass::new(-1, -1), 2).unwrap();
        assert_eq!(g.moduli_dim(&one).unwrap(), 2);
        let g = ChernVector::integral(1, DivisorClass::ZERO, 1).unwrap();
        assert_eq!(g.moduli_dim(&one).unwrap(), 2);
    }

    #[test]
    fn dimension_errors() {
        let one = s(1);
        let g = ChernVector::integral(2, DivisorClass::ZERO, 0).unwrap();
        assert_eq!(g.moduli_dim(&one), Err(LatticeError::NegativeDimension(-3)));
        let g = ChernVector::new(2, DivisorClass::ZERO, Q::new(1, 3)).unwrap();
        assert!(matches!(g.moduli_dim(&one), Err(LatticeError::NonIntegerDimension(_))));
    }

    #[test]
    fn projections() {
        let one = s(1);
        let j = Polarization::integral(1, 0, Side::Exact).unwrap();
        // J_{1,0} = C + f on Σ_1 and C·(C+f) = 0
        let (p, m) = one.project_pm(DivisorClass::BASE, &j).unwrap();
        assert_eq!(p, SlopeVector::zero());
        assert_eq!(m, SlopeVector::from(DivisorClass::BASE));
        let jc = one.polarization_class(&j);
        let (p, m) = one.project_pm(jc, &j).unwrap();
        assert_eq!(p, jc);
        assert_eq!(m, SlopeVector::zero());
        let degenerate = Polarization::integral(0, 1, Side::Exact).unwrap();
        assert_eq!(
            one.project_pm(DivisorClass::BASE, &degenerate),
            Err(LatticeError::DegeneratePolarization)
        );
    }

    #[test]
    fn pairings() {
        let one = s(1);
        let g1 = ChernVector::integral(1, DivisorClass::ZERO, 0).unwrap();
        let g2 = ChernVector::integral(1, DivisorClass::new(0, -1), 0).unwrap();
        assert_eq!(pairing(&g1, &g2, &one), 2);
        assert_eq!(pairing(&g1, &g1, &one), 0);
        let g3 = ChernVector::integral(1, DivisorClass::BASE, 0).unwrap();
        let j11 = Polarization::integral(1, 1, Side::Exact).unwrap();
        assert_eq!(ical(&g1, &g3, &j11), Q::from_integer(1));
        assert_eq!(ical(&g1, &g1, &j11), Q::zero());
    }

    #[test]
    fn tie_break() {
        let j = Polarization::integral(1, 1, Side::Exact).unwrap();
        assert_eq!(j.sign_nm(2, 2), 0);
        assert_eq!(j.with_side(Side::Plus).sign_nm(2, 2), 1);
        assert_eq!(j.with_side(Side::Minus).sign_nm(2, 2), -1);
        assert_eq!(j.sign_nm(3, 1), 1);
        let half = Polarization::new(Q::new(1, 2), Q::from_integer(1), Side::Exact).unwrap();
        assert_eq!(half.sign_nm(1, 2), 0);
    }

    fn ab_labels(w: &Wall) -> Vec<(i64, i64)> {
        // (a, b) with c1(E2) = bC − af, for either constituent
        let mut v: Vec<(i64, i64)> = w
            .decompositions
            .iter()
            .flat_map(|d| d.constituents().map(|g| (-g.c1.f, g.c1.c)).collect::<Vec<_>>())
            .collect();
        v.sort();
        v.dedup();
        v
    }

    #[test]
    fn figure_one_walls() {
        let one = s(1);
        let c1 = DivisorClass::new(-1, -1);
        let g2 = ChernVector::integral(2, c1, 2).unwrap();
        let w = walls(&g2, &one).unwrap();
        let ratios: Vec<_> = w.iter().map(|w| (w.ratio.m, w.ratio.n)).collect();
        assert_eq!(ratios, vec![(1, 3), (1, 1)]);
        let g3 = ChernVector::integral(2, c1, 3).unwrap();
        let w3 = walls(&g3, &one).unwrap();
        let ratios: Vec<_> = w3.iter().map(|w| (w.ratio.m, w.ratio.n)).collect();
        assert_eq!(ratios, vec![(1, 5), (1, 3), (1, 1)]);
        let labels: Vec<_> = w3.iter().map(ab_labels).collect();
        assert!(labels[0].contains(&(3, 0)));
        assert!(labels[1].contains(&(2, 0)));
        assert!(labels[2].contains(&(1, 0)));
    }

    #[test]
    fn negative_discriminant_has_no_walls() {
        let g = ChernVector::integral(2, DivisorClass::new(-1, -1), 0).unwrap();
        assert!(g.discriminant(&s(1)).is_negative());
        assert!(walls(&g, &s(1)).unwrap().is_empty());
    }

    #[test]
    fn unsupported_rank() {
        let g = ChernVector::integral(4, DivisorClass::BASE, 3).unwrap();
        assert_eq!(walls(&g, &s(1)), Err(LatticeError::UnsupportedRank(4)));
    }

    #[test]
    fn rank_three_walls_contain_triples() {
        let one = s(1);
        let g = ChernVector::integral(3, DivisorClass::new(-1, 0), 4).unwrap();
        let w = walls(&g, &one).unwrap();
        assert!(!w.is_empty());
        let triples = w
            .iter()
            .flat_map(|w| w.decompositions.iter())
            .filter(|d| d.constituents().count() == 3)
            .count();
        assert!(triples > 0);
    }

    #[test]
    fn filtration_discriminant_matches_direct() {
        let one = s(1);
        let e1 = ChernVector::integral(1, DivisorClass::new(0, -1), 1).unwrap();
        let e2 = ChernVector::integral(2, DivisorClass::new(-1, 1), 3).unwrap();
        let f = e1.add(&e2, &one);
        assert_eq!(discriminant_from_filtration(&[e1, e2], &one), f.discriminant(&one));
    }

    #[test]
    fn display() {
        assert_eq!(DivisorClass::new(-1, -2).to_string(), "-C-2f");
        assert_eq!(DivisorClass::new(1, 0).to_string(), "C");
        assert_eq!(DivisorClass::new(0, 3).to_string(), "3f");
    }
}
