use std::fmt;

use num_traits::One;

use super::laurent::{Coef, WLaurent};
use super::series::{QExp, QSeries};
use super::SeriesError;

/// Product `∏ (w^{m_i} − w^{−m_i})` over a sorted multiset of positive `m_i`.
fn den_poly(den: &[u32]) -> WLaurent {
    den.iter().fold(WLaurent::one(), |acc, &m| &acc * &WLaurent::antisym(m as i64))
}

/// Multiset difference `a − b` (both sorted).
fn multiset_minus(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut rest = a.to_vec();
    for m in b {
        if let Some(i) = rest.iter().position(|x| x == m) {
            rest.remove(i);
        }
    }
    rest
}

/// Sorted union with maximal multiplicities.
fn multiset_union(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = a.to_vec();
    out.extend(multiset_minus(b, a));
    out.sort_unstable();
    out
}

/// `body / ∏ (w^{m_i} − w^{−m_i})`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PoleSeries {
    den: Vec<u32>,
    body: QSeries,
}

impl PoleSeries {
    pub fn new(mut den: Vec<u32>, body: QSeries) -> Self {
        assert!(den.iter().all(|&m| m > 0), "denominator factors must be positive");
        den.sort_unstable();
        PoleSeries { den, body }
    }

    pub fn from_series(body: QSeries) -> Self {
        PoleSeries { den: Vec::new(), body }
    }

    pub fn den(&self) -> &[u32] {
        &self.den
    }

    pub fn body(&self) -> &QSeries {
        &self.body
    }

    pub fn into_body(self) -> QSeries {
        self.body
    }

    pub fn qmax(&self) -> Option<QExp> {
        self.body.qmax()
    }

    /// Rewrite over a larger denominator multiset containing the current one.
    pub fn over(&self, den: &[u32]) -> PoleSeries {
        let extra = multiset_minus(den, &self.den);
        let body = self.body.mul_laurent(&den_poly(&extra));
        PoleSeries::new(den.to_vec(), body)
    }

    pub fn add(&self, o: &PoleSeries) -> PoleSeries {
        let den = multiset_union(&self.den, &o.den);
        PoleSeries::new(den.clone(), self.over(&den).body.add(&o.over(&den).body))
    }

    pub fn sub(&self, o: &PoleSeries) -> PoleSeries {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> PoleSeries {
        PoleSeries { den: self.den.clone(), body: self.body.neg() }
    }

    pub fn scale(&self, k: &Coef) -> PoleSeries {
        PoleSeries { den: self.den.clone(), body: self.body.scale(k) }
    }

    pub fn mul(&self, o: &PoleSeries) -> PoleSeries {
        self.mul_bounded(o, None)
    }

    pub fn mul_bounded(&self, o: &PoleSeries, cap: Option<QExp>) -> PoleSeries {
        let mut den = self.den.clone();
        den.extend_from_slice(&o.den);
        PoleSeries::new(den, self.body.mul_bounded(&o.body, cap))
    }

    pub fn mul_series(&self, s: &QSeries) -> PoleSeries {
        PoleSeries { den: self.den.clone(), body: self.body.mul(s) }
    }

    pub fn mul_laurent(&self, p: &WLaurent) -> PoleSeries {
        PoleSeries { den: self.den.clone(), body: self.body.mul_laurent(p) }
    }

    pub fn truncate(&self, qmax: QExp) -> PoleSeries {
        PoleSeries { den: self.den.clone(), body: self.body.truncate(qmax) }
    }

    /// Substitute `w → w^{−1}`; each denominator factor changes sign.
    pub fn w_invert(&self) -> PoleSeries {
        let body = self.body.w_invert();
        let body = if self.den.len() % 2 == 1 { body.neg() } else { body };
        PoleSeries { den: self.den.clone(), body }
    }

    /// Remove one factor `(w^m − w^{−m})`, dividing the body exactly.
    pub fn reduce_pole(&self, m: u32) -> Result<PoleSeries, SeriesError> {
        let i = self.den.iter().position(|&x| x == m).ok_or(SeriesError::MissingFactor(m))?;
        let d = WLaurent::antisym(m as i64);
        let mut body = QSeries::zero(QExp::from_integer(0)).with_qmax(self.body.qmax());
        for (q, p) in self.body.terms() {
            let quot = p.div_exact(&d).ok_or(SeriesError::NotDivisible { m, q: *q })?;
            body.add_laurent(*q, &quot);
        }
        let mut den = self.den.clone();
        den.remove(i);
        Ok(PoleSeries { den, body })
    }

    /// Cancel every denominator factor that divides the body.
    pub fn reduce_all(&self) -> PoleSeries {
        let mut cur = self.clone();
        let mut i = 0;
        while i < cur.den.len() {
            match cur.reduce_pole(cur.den[i]) {
                Ok(next) => cur = next,
                Err(_) => i += 1,
            }
        }
        cur
    }

    /// Coefficient of `q^e` as a rational function of `w`.
    pub fn coeff(&self, q: QExp) -> Result<WFraction, SeriesError> {
        Ok(WFraction::new(self.body.coeff_checked(q)?, self.den.clone()))
    }

    pub fn agrees_with(&self, o: &PoleSeries) -> Result<(), QExp> {
        let den = multiset_union(&self.den, &o.den);
        self.over(&den).body.agrees_with(&o.over(&den).body)
    }
}

impl From<QSeries> for PoleSeries {
    fn from(s: QSeries) -> Self {
        PoleSeries::from_series(s)
    }
}

impl fmt::Display for PoleSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.body);
        }
        write!(f, "[{}] / ", self.body)?;
        for m in &self.den {
            write!(f, "(w^{m}-w^-{m})")?;
        }
        Ok(())
    }
}

/// Rational function `num / ∏ (w^{m_i} − w^{−m_i})`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WFraction {
    pub num: WLaurent,
    pub den: Vec<u32>,
}

impl WFraction {
    pub fn new(num: WLaurent, mut den: Vec<u32>) -> Self {
        den.sort_unstable();
        WFraction { num, den }
    }

    pub fn polynomial(num: WLaurent) -> Self {
        WFraction { num, den: Vec::new() }
    }

    pub fn den_poly(&self) -> WLaurent {
        den_poly(&self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn over(&self, den: &[u32]) -> WFraction {
        let extra = multiset_minus(den, &self.den);
        WFraction::new(&self.num * &den_poly(&extra), den.to_vec())
    }

    pub fn add(&self, o: &WFraction) -> WFraction {
        let den = multiset_union(&self.den, &o.den);
        WFraction::new(&self.over(&den).num + &o.over(&den).num, den)
    }

    pub fn sub(&self, o: &WFraction) -> WFraction {
        self.add(&o.scale(&-Coef::one()))
    }

    pub fn scale(&self, k: &Coef) -> WFraction {
        WFraction::new(self.num.scale(k), self.den.clone())
    }

    pub fn mul(&self, o: &WFraction) -> WFraction {
        let mut den = self.den.clone();
        den.extend_from_slice(&o.den);
        WFraction::new(&self.num * &o.num, den)
    }

    pub fn mul_laurent(&self, p: &WLaurent) -> WFraction {
        WFraction::new(&self.num * p, self.den.clone())
    }

    /// Cancel denominator factors that divide the numerator.
    pub fn reduce(&self) -> WFraction {
        let mut cur = self.clone();
        let mut i = 0;
        while i < cur.den.len() {
            match cur.num.div_exact(&WLaurent::antisym(cur.den[i] as i64)) {
                Some(q) => {
                    cur.num = q;
                    cur.den.remove(i);
                }
                None => i += 1,
            }
        }
        cur
    }

    /// Exact equality as rational functions.
    pub fn equals(&self, o: &WFraction) -> bool {
        let den = multiset_union(&self.den, &o.den);
        self.over(&den).num == o.over(&den).num
    }

    /// Substitute `w → s·w^k` with `s = ±1`. A factor `(w^m − w^{−m})`
    /// becomes `s^m (w^{km} − w^{−km})`.
    pub fn substitute_power(&self, k: u32, negate: bool) -> WFraction {
        let mut num = self.num.substitute_power(k as i64, negate);
        let flips = self.den.iter().filter(|&&m| negate && m % 2 == 1).count();
        if flips % 2 == 1 {
            num = -&num;
        }
        WFraction::new(num, self.den.iter().map(|m| m * k).collect())
    }

    pub fn w_invert(&self) -> WFraction {
        let num = self.num.w_invert();
        let num = if self.den.len() % 2 == 1 { -&num } else { num };
        WFraction::new(num, self.den.clone())
    }

    /// Cast to a Laurent polynomial if no denominator is left after reduction.
    pub fn to_polynomial(&self) -> Option<WLaurent> {
        let r = self.reduce();
        r.den.is_empty().then_some(r.num)
    }
}

impl fmt::Display for WFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({}) / ", self.num)?;
        for m in &self.den {
            write!(f, "(w^{m}-w^-{m})")?;
        }
        Ok(())
    }
}
