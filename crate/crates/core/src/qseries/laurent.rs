use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact coefficient ring. Lattice sums carry `½ sgn` weights, so coefficients
/// are rationals even though every extracted invariant is integral.
pub type Coef = BigRational;

pub fn coef(n: i64) -> Coef {
    Coef::from_integer(BigInt::from(n))
}

pub fn coef_frac(n: i64, d: i64) -> Coef {
    Coef::new(BigInt::from(n), BigInt::from(d))
}

/// Laurent polynomial in `w` stored densely from exponent `low` upwards.
///
/// The vector never has zero entries at either end; the zero polynomial is
/// the empty vector with `low = 0`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct WLaurent {
    low: i64,
    coeffs: Vec<Coef>,
}

impl WLaurent {
    pub fn zero() -> Self {
        WLaurent::default()
    }

    pub fn one() -> Self {
        WLaurent::monomial(0, Coef::one())
    }

    pub fn monomial(exp: i64, c: Coef) -> Self {
        if c.is_zero() {
            return WLaurent::zero();
        }
        WLaurent { low: exp, coeffs: vec![c] }
    }

    /// `w^k`.
    pub fn w_pow(k: i64) -> Self {
        WLaurent::monomial(k, Coef::one())
    }

    /// `w^m − w^{−m}`.
    pub fn antisym(m: i64) -> Self {
        let mut p = WLaurent::w_pow(m);
        p.add_term(-m, -Coef::one());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Coef)>>(terms: I) -> Self {
        let mut p = WLaurent::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn from_dense(low: i64, coeffs: Vec<Coef>) -> Self {
        let mut p = WLaurent { low, coeffs };
        p.trim();
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn low(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn high(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, exp: i64) -> Coef {
        let i = exp - self.low;
        if i < 0 || i >= self.coeffs.len() as i64 {
            Coef::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    /// Nonzero `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Coef)> {
        let low = self.low;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (low + i as i64, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// If this is `c·w^k`, return `(k, c)`.
    pub fn as_monomial(&self) -> Option<(i64, &Coef)> {
        (self.coeffs.len() == 1).then(|| (self.low, &self.coeffs[0]))
    }

    fn trim(&mut self) {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => {
                self.coeffs.clear();
                self.low = 0;
            }
            Some(i) => {
                if i > 0 {
                    self.coeffs.drain(..i);
                    self.low += i as i64;
                }
                while self.coeffs.last().is_some_and(|c| c.is_zero()) {
                    self.coeffs.pop();
                }
            }
        }
    }

    /// Grow the storage so that `[lo, hi]` is addressable.
    fn reserve_range(&mut self, lo: i64, hi: i64) {
        if self.coeffs.is_empty() {
            self.low = lo;
            self.coeffs = vec![Coef::zero(); (hi - lo + 1) as usize];
            return;
        }
        if lo < self.low {
            let extra = (self.low - lo) as usize;
            let mut v = vec![Coef::zero(); extra];
            v.append(&mut self.coeffs);
            self.coeffs = v;
            self.low = lo;
        }
        let top = self.low + self.coeffs.len() as i64 - 1;
        if hi > top {
            self.coeffs.resize((hi - self.low + 1) as usize, Coef::zero());
        }
    }

    pub fn add_term(&mut self, exp: i64, c: Coef) {
        if c.is_zero() {
            return;
        }
        self.reserve_range(exp, exp);
        self.coeffs[(exp - self.low) as usize] += c;
        self.trim();
    }

    /// `self += k·w^shift·other`.
    pub fn add_scaled_shifted(&mut self, other: &WLaurent, k: &Coef, shift: i64) {
        if other.is_zero() || k.is_zero() {
            return;
        }
        let lo = other.low + shift;
        let hi = lo + other.coeffs.len() as i64 - 1;
        self.reserve_range(lo, hi);
        let off = (lo - self.low) as usize;
        let unit = k.is_one();
        for (i, c) in other.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if unit {
                self.coeffs[off + i] += c;
            } else {
                self.coeffs[off + i] += c * k;
            }
        }
        self.trim();
    }

    pub fn scale(&self, k: &Coef) -> WLaurent {
        if k.is_zero() {
            return WLaurent::zero();
        }
        WLaurent { low: self.low, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// Multiply by `w^k`.
    pub fn shift(&self, k: i64) -> WLaurent {
        if self.is_zero() {
            return WLaurent::zero();
        }
        WLaurent { low: self.low + k, coeffs: self.coeffs.clone() }
    }

    /// Substitute `w → w^{−1}`.
    pub fn w_invert(&self) -> WLaurent {
        match self.high() {
            None => WLaurent::zero(),
            Some(h) => {
                let mut coeffs = self.coeffs.clone();
                coeffs.reverse();
                WLaurent { low: -h, coeffs }
            }
        }
    }

    /// Substitute `w → s·w^k` for `k ≥ 1`, `s = ±1`.
    pub fn substitute_power(&self, k: i64, negate: bool) -> WLaurent {
        assert!(k >= 1, "substitution power must be positive");
        let mut out = WLaurent::zero();
        for (e, c) in self.terms() {
            let flip = negate && e.rem_euclid(2) == 1;
            out.add_term(e * k, if flip { -c.clone() } else { c.clone() });
        }
        out
    }

    /// Apply `w·d/dw`.
    pub fn w_log_deriv(&self) -> WLaurent {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * coef(self.low + i as i64))
            .collect();
        WLaurent::from_dense(self.low, coeffs)
    }

    /// Exact value at `w = 1`.
    pub fn eval_one(&self) -> Coef {
        self.coeffs.iter().fold(Coef::zero(), |acc, c| acc + c)
    }

    /// Exact value at `w = −1`.
    pub fn eval_minus_one(&self) -> Coef {
        self.terms().fold(Coef::zero(), |acc, (e, c)| if e.rem_euclid(2) == 0 { acc + c } else { acc - c })
    }

    /// Exact value at `w = i`.
    pub fn eval_i(&self) -> Complex<Coef> {
        let mut re = Coef::zero();
        let mut im = Coef::zero();
        for (e, c) in self.terms() {
            match e.rem_euclid(4) {
                0 => re += c,
                1 => im += c,
                2 => re -= c,
                _ => im -= c,
            }
        }
        Complex::new(re, im)
    }

    /// Numerical value at a complex point.
    pub fn eval_complex(&self, w: Complex<f64>) -> Complex<f64> {
        use num_traits::ToPrimitive;
        let mut acc = Complex::new(0.0, 0.0);
        for (e, c) in self.terms() {
            acc += w.powi(e as i32) * c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    /// Exact division. Returns `None` unless `den` divides `self` in `Q[w, w^{−1}]`.
    pub fn div_exact(&self, den: &WLaurent) -> Option<WLaurent> {
        let (dlo, dhi) = (den.low()?, den.high()?);
        if self.is_zero() {
            return Some(WLaurent::zero());
        }
        let lead = den.coeff(dhi);
        let mut rem = self.clone();
        let qlo = self.low - dlo;
        let qhi = self.high()? - dhi;
        if qhi < qlo {
            return None;
        }
        let mut quot = vec![Coef::zero(); (qhi - qlo + 1) as usize];
        for e in (qlo..=qhi).rev() {
            let c = rem.coeff(e + dhi);
            if c.is_zero() {
                continue;
            }
            let qc = &c / &lead;
            rem.add_scaled_shifted(den, &-qc.clone(), e);
            quot[(e - qlo) as usize] = qc;
        }
        rem.is_zero().then(|| WLaurent::from_dense(qlo, quot))
    }

    pub fn is_palindromic_about(&self, centre2: i64) -> bool {
        self.terms().all(|(e, c)| self.coeff(centre2 - e) == *c)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn has_negative(&self) -> bool {
        self.coeffs.iter().any(|c| c.is_negative())
    }
}

impl fmt::Debug for WLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for WLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "{c}")?,
                _ => write!(f, "{c}*w^{e}")?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a WLaurent> for &'a WLaurent {
    type Output = WLaurent;
    fn add(self, o: &WLaurent) -> WLaurent {
        let mut r = self.clone();
        r += o;
        r
    }
}

impl AddAssign<&WLaurent> for WLaurent {
    fn add_assign(&mut self, o: &WLaurent) {
        self.add_scaled_shifted(o, &Coef::one(), 0);
    }
}

impl SubAssign<&WLaurent> for WLaurent {
    fn sub_assign(&mut self, o: &WLaurent) {
        self.add_scaled_shifted(o, &-Coef::one(), 0);
    }
}

impl<'a> Sub<&'a WLaurent> for &'a WLaurent {
    type Output = WLaurent;
    fn sub(self, o: &WLaurent) -> WLaurent {
        let mut r = self.clone();
        r -= o;
        r
    }
}

impl Neg for &WLaurent {
    type Output = WLaurent;
    fn neg(self) -> WLaurent {
        WLaurent { low: self.low, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl<'a> Mul<&'a WLaurent> for &'a WLaurent {
    type Output = WLaurent;
    fn mul(self, o: &WLaurent) -> WLaurent {
        if self.is_zero() || o.is_zero() {
            return WLaurent::zero();
        }
        let mut coeffs = vec![Coef::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        WLaurent::from_dense(self.low + o.low, coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(i64, i64)]) -> WLaurent {
        WLaurent::from_terms(terms.iter().map(|&(e, c)| (e, coef(c))))
    }

    #[test]
    fn normalisation() {
        let mut a = p(&[(3, 1), (-2, 4)]);
        a.add_term(3, coef(-1));
        assert_eq!(a, p(&[(-2, 4)]));
        a.add_term(-2, coef(-4));
        assert!(a.is_zero());
        assert_eq!(a, WLaurent::zero());
    }

    #[test]
    fn invert_is_involution() {
        let a = p(&[(2, 1), (0, 3)]);
        assert_eq!(a.w_invert(), p(&[(-2, 1), (0, 3)]));
        assert_eq!(a.w_invert().w_invert(), a);
    }

    #[test]
    fn evaluations() {
        let a = WLaurent::antisym(1);
        assert!(a.eval_minus_one().is_zero());
        assert_eq!(WLaurent::w_pow(2).eval_minus_one(), coef(1));
        let b = p(&[(1, 1), (-1, 1)]);
        assert_eq!(b.eval_i(), Complex::new(coef(0), coef(0)));
    }

    #[test]
    fn log_derivative() {
        assert_eq!(WLaurent::w_pow(5).w_log_deriv(), p(&[(5, 5)]));
        assert!(WLaurent::one().w_log_deriv().is_zero());
        let (x, y) = (WLaurent::w_pow(1), WLaurent::w_pow(2));
        let lhs = (&x * &y).w_log_deriv();
        let rhs = &(&x.w_log_deriv() * &y) + &(&x * &y.w_log_deriv());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn exact_division() {
        let d = WLaurent::antisym(1);
        let x = p(&[(3, 2), (0, -1), (-4, 7)]);
        assert_eq!((&d * &x).div_exact(&d), Some(x));
        assert_eq!(WLaurent::w_pow(2).div_exact(&d), None);
    }

    #[test]
    fn substitution() {
        let a = p(&[(1, 1), (2, 3)]);
        assert_eq!(a.substitute_power(2, true), p(&[(2, -1), (4, 3)]));
    }
}
