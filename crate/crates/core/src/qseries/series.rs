use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

use super::laurent::{Coef, WLaurent};
use super::SeriesError;

/// Exponent of `q`.
pub type QExp = Rational64;

/// Truncated power series in rational powers of `q` with Laurent-polynomial
/// coefficients in `w`.
///
/// Every coefficient up to and including `qmax` is exact. `qmax = None`
/// marks a series that is known completely (a finite sum).
#[derive(Clone, PartialEq, Eq, Default)]
pub struct QSeries {
    qmax: Option<QExp>,
    terms: BTreeMap<QExp, WLaurent>,
}

fn min_bound(a: Option<QExp>, b: Option<QExp>) -> Option<QExp> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl QSeries {
    /// Zero, known through `qmax`.
    pub fn zero(qmax: QExp) -> Self {
        QSeries { qmax: Some(qmax), terms: BTreeMap::new() }
    }

    /// The exact zero series.
    pub fn exact_zero() -> Self {
        QSeries::default()
    }

    pub fn one() -> Self {
        QSeries::exact_monomial(QExp::zero(), WLaurent::one())
    }

    pub fn exact_monomial(q: QExp, p: WLaurent) -> Self {
        let mut s = QSeries::exact_zero();
        s.add_laurent(q, &p);
        s
    }

    /// `c·q^e·w^k`, exact.
    pub fn term(q: QExp, w: i64, c: Coef) -> Self {
        QSeries::exact_monomial(q, WLaurent::monomial(w, c))
    }

    /// Exact finite series from terms.
    pub fn exact_from<I: IntoIterator<Item = (QExp, WLaurent)>>(terms: I) -> Self {
        let mut s = QSeries::exact_zero();
        for (q, p) in terms {
            s.add_laurent(q, &p);
        }
        s
    }

    pub fn qmax(&self) -> Option<QExp> {
        self.qmax
    }

    pub fn is_exact(&self) -> bool {
        self.qmax.is_none()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest exponent carrying a nonzero coefficient.
    pub fn lead(&self) -> Option<QExp> {
        self.terms.keys().next().copied()
    }

    /// Lower bound for every exponent, including unknown tail terms.
    fn lead_bound(&self) -> Option<QExp> {
        self.lead().or(self.qmax)
    }

    pub fn coeff(&self, q: QExp) -> Option<&WLaurent> {
        self.terms.get(&q)
    }

    /// The coefficient of `q^e`, failing if `e` lies beyond the truncation.
    pub fn coeff_checked(&self, q: QExp) -> Result<WLaurent, SeriesError> {
        if let Some(m) = self.qmax {
            if q > m {
                return Err(SeriesError::BeyondTruncation { requested: q, qmax: m });
            }
        }
        Ok(self.terms.get(&q).cloned().unwrap_or_default())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&QExp, &WLaurent)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn in_range(&self, q: QExp) -> bool {
        self.qmax.is_none_or(|m| q <= m)
    }

    pub fn add_term(&mut self, q: QExp, w: i64, c: Coef) {
        if c.is_zero() || !self.in_range(q) {
            return;
        }
        let slot = self.terms.entry(q).or_default();
        slot.add_term(w, c);
        if slot.is_zero() {
            self.terms.remove(&q);
        }
    }

    /// `self += k·w^shift·p·q^q`.
    pub fn add_scaled(&mut self, q: QExp, p: &WLaurent, k: &Coef, shift: i64) {
        if p.is_zero() || k.is_zero() || !self.in_range(q) {
            return;
        }
        let slot = self.terms.entry(q).or_default();
        slot.add_scaled_shifted(p, k, shift);
        if slot.is_zero() {
            self.terms.remove(&q);
        }
    }

    pub fn add_laurent(&mut self, q: QExp, p: &WLaurent) {
        self.add_scaled(q, p, &Coef::one(), 0);
    }

    /// Restrict to exponents `≤ qmax` (never raises the truncation order).
    pub fn truncate(&self, qmax: QExp) -> QSeries {
        let bound = min_bound(self.qmax, Some(qmax));
        let terms = self.terms.range(..=bound.unwrap()).map(|(k, v)| (*k, v.clone())).collect();
        QSeries { qmax: bound, terms }
    }

    pub fn add(&self, o: &QSeries) -> QSeries {
        let qmax = min_bound(self.qmax, o.qmax);
        let mut r = match qmax {
            Some(m) => self.truncate(m),
            None => self.clone(),
        };
        for (q, p) in &o.terms {
            r.add_laurent(*q, p);
        }
        r
    }

    pub fn sub(&self, o: &QSeries) -> QSeries {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> QSeries {
        QSeries { qmax: self.qmax, terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect() }
    }

    pub fn scale(&self, k: &Coef) -> QSeries {
        if k.is_zero() {
            return QSeries { qmax: self.qmax, terms: BTreeMap::new() };
        }
        QSeries { qmax: self.qmax, terms: self.terms.iter().map(|(e, v)| (*e, v.scale(k))).collect() }
    }

    /// Multiply by `q^e·w^k`.
    pub fn shift(&self, e: QExp, k: i64) -> QSeries {
        QSeries {
            qmax: self.qmax.map(|m| m + e),
            terms: self.terms.iter().map(|(q, v)| (*q + e, v.shift(k))).collect(),
        }
    }

    /// Multiply every coefficient by a Laurent polynomial.
    pub fn mul_laurent(&self, p: &WLaurent) -> QSeries {
        let mut r = QSeries { qmax: self.qmax, terms: BTreeMap::new() };
        for (q, v) in &self.terms {
            let prod = v * p;
            if !prod.is_zero() {
                r.terms.insert(*q, prod);
            }
        }
        r
    }

    /// Truncation order of a product, following
    /// `min(qmax_A + lead_B, qmax_B + lead_A)`.
    pub fn product_bound(&self, o: &QSeries) -> Option<QExp> {
        let a = self.qmax.zip(o.lead_bound()).map(|(m, l)| m + l);
        let b = o.qmax.zip(self.lead_bound()).map(|(m, l)| m + l);
        min_bound(a, b)
    }

    pub fn mul(&self, o: &QSeries) -> QSeries {
        self.mul_bounded(o, None)
    }

    /// Product, additionally truncated at `cap` when given.
    pub fn mul_bounded(&self, o: &QSeries, cap: Option<QExp>) -> QSeries {
        let qmax = min_bound(self.product_bound(o), cap);
        let mut r = QSeries { qmax, terms: BTreeMap::new() };
        for (qa, pa) in &self.terms {
            for (qb, pb) in &o.terms {
                let e = *qa + *qb;
                if let Some(m) = qmax {
                    if e > m {
                        break;
                    }
                }
                let prod = pa * pb;
                let slot = r.terms.entry(e).or_default();
                *slot += &prod;
            }
        }
        r.terms.retain(|_, v| !v.is_zero());
        r
    }

    pub fn pow(&self, k: u32, cap: Option<QExp>) -> QSeries {
        let mut acc = QSeries::one();
        for _ in 0..k {
            acc = acc.mul_bounded(self, cap);
        }
        acc
    }

    /// Substitute `w → w^{−1}`.
    pub fn w_invert(&self) -> QSeries {
        QSeries { qmax: self.qmax, terms: self.terms.iter().map(|(k, v)| (*k, v.w_invert())).collect() }
    }

    /// Apply `w·d/dw` coefficientwise.
    pub fn w_log_deriv(&self) -> QSeries {
        let mut r = QSeries { qmax: self.qmax, terms: BTreeMap::new() };
        for (k, v) in &self.terms {
            let d = v.w_log_deriv();
            if !d.is_zero() {
                r.terms.insert(*k, d);
            }
        }
        r
    }

    /// Map every coefficient, dropping those that become zero.
    pub fn map_coeffs(&self, f: impl Fn(&WLaurent) -> WLaurent) -> QSeries {
        let mut r = QSeries { qmax: self.qmax, terms: BTreeMap::new() };
        for (k, v) in &self.terms {
            let d = f(v);
            if !d.is_zero() {
                r.terms.insert(*k, d);
            }
        }
        r
    }

    /// Set `w = 1`, keeping the result as a series with constant coefficients.
    pub fn at_w_one(&self) -> QSeries {
        self.map_coeffs(|p| WLaurent::monomial(0, p.eval_one()))
    }

    /// Inverse of a series whose leading coefficient is a single monomial
    /// `c·w^k`, computed through `cap` (required when the input is exact).
    pub fn inverse(&self, cap: Option<QExp>) -> Result<QSeries, SeriesError> {
        let lead = self.lead().ok_or(SeriesError::NotInvertible)?;
        let (k, c) = self.terms[&lead].as_monomial().ok_or(SeriesError::NotInvertible)?;
        let inv_c = c.recip();
        // Normalise to 1 + (higher terms) with unit leading term.
        let unit = self.shift(-lead, -k).scale(&inv_c);
        let natural = unit.qmax;
        let limit = min_bound(natural, cap.map(|m| m + lead)).ok_or(SeriesError::UnboundedInverse)?;
        let gaps: Vec<(QExp, WLaurent)> =
            unit.terms.iter().filter(|(e, _)| !e.is_zero()).map(|(e, v)| (*e, v.clone())).collect();
        let exps = semigroup_upto(gaps.iter().map(|(e, _)| *e), limit);
        let mut inv: BTreeMap<QExp, WLaurent> = BTreeMap::new();
        for t in exps {
            let mut acc = if t.is_zero() { WLaurent::one() } else { WLaurent::zero() };
            for (g, a) in &gaps {
                if *g > t {
                    break;
                }
                if let Some(b) = inv.get(&(t - *g)) {
                    acc -= &(a * b);
                }
            }
            if !acc.is_zero() {
                inv.insert(t, acc);
            }
        }
        let unit_inv = QSeries { qmax: Some(limit), terms: inv };
        Ok(unit_inv.shift(-lead, -k).scale(&inv_c))
    }

    /// `true` if every coefficient through `qmax` vanishes.
    pub fn vanishes(&self) -> bool {
        self.terms.is_empty()
    }

    /// Compare with another series on their common range.
    pub fn agrees_with(&self, o: &QSeries) -> Result<(), QExp> {
        let bound = min_bound(self.qmax, o.qmax);
        let keys: BTreeSet<QExp> = self.terms.keys().chain(o.terms.keys()).copied().collect();
        for k in keys {
            if bound.is_some_and(|b| k > b) {
                break;
            }
            let zero = WLaurent::zero();
            if self.terms.get(&k).unwrap_or(&zero) != o.terms.get(&k).unwrap_or(&zero) {
                return Err(k);
            }
        }
        Ok(())
    }

    pub(crate) fn from_parts(qmax: Option<QExp>, terms: BTreeMap<QExp, WLaurent>) -> Self {
        let mut s = QSeries { qmax, terms: BTreeMap::new() };
        for (k, v) in terms {
            s.add_laurent(k, &v);
        }
        s
    }

    pub(crate) fn with_qmax(mut self, qmax: Option<QExp>) -> Self {
        if let Some(m) = qmax {
            self.terms.retain(|k, _| *k <= m);
        }
        self.qmax = qmax;
        self
    }
}

/// All finite sums of the positive generators that are `≤ limit`, including 0.
fn semigroup_upto(gens: impl Iterator<Item = QExp>, limit: QExp) -> Vec<QExp> {
    let gens: Vec<QExp> = gens.filter(|g| g.is_positive() && *g <= limit).collect();
    let mut seen: BTreeSet<QExp> = BTreeSet::new();
    if limit.is_negative() {
        return Vec::new();
    }
    seen.insert(QExp::zero());
    let mut frontier = vec![QExp::zero()];
    while let Some(x) = frontier.pop() {
        for g in &gens {
            let y = x + *g;
            if y <= limit && seen.insert(y) {
                frontier.push(y);
            }
        }
    }
    seen.into_iter().collect()
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        let mut first = true;
        for (q, p) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({p})*q^({q})")?;
        }
        match self.qmax {
            Some(m) => write!(f, " + O(q^>{m})"),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::laurent::coef;
    use super::*;

    fn qe(n: i64) -> QExp {
        QExp::from_integer(n)
    }

    #[test]
    fn additive_identity() {
        let a = QSeries::term(qe(1), 2, coef(3)).add(&QSeries::term(QExp::new(1, 2), -1, coef(1)));
        assert_eq!(a.add(&QSeries::exact_zero()), a);
    }

    #[test]
    fn difference_of_squares() {
        let mut x = QSeries::one();
        x.add_term(qe(1), 1, coef(1));
        let mut y = QSeries::one();
        y.add_term(qe(1), 1, coef(-1));
        let prod = x.truncate(qe(3)).mul(&y.truncate(qe(3)));
        let mut expect = QSeries::zero(qe(3));
        expect.add_term(qe(0), 0, coef(1));
        expect.add_term(qe(2), 2, coef(-1));
        assert_eq!(prod, expect);
    }

    #[test]
    fn truncation_rule() {
        let a = QSeries::term(QExp::new(1, 2), 0, coef(1)).add(&QSeries::zero(qe(3)));
        let b = QSeries::term(qe(1), 0, coef(1)).add(&QSeries::zero(qe(5)));
        assert_eq!(a.mul(&b).qmax(), Some(qe(4)));
    }

    #[test]
    fn inverse_of_geometric() {
        let mut one_minus = QSeries::one();
        one_minus.add_term(qe(1), 2, coef(-1));
        let inv = one_minus.inverse(Some(qe(6))).unwrap();
        for k in 0..=6 {
            assert_eq!(inv.coeff(qe(k)).cloned().unwrap_or_default(), WLaurent::monomial(2 * k, coef(1)));
        }
        let back = inv.mul(&one_minus);
        assert_eq!(back.agrees_with(&QSeries::one()), Ok(()));
    }

    #[test]
    fn inverse_needs_monomial_lead() {
        let s = QSeries::exact_monomial(qe(0), WLaurent::antisym(1));
        assert_eq!(s.inverse(Some(qe(2))), Err(SeriesError::NotInvertible));
    }
}
