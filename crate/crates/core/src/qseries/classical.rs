//! Dedekind eta, Jacobi theta functions and related infinite products.
//!
//! `θ₁` is stored without its overall factor `i`:
//! `θ₁(z,τ)/i = Σ_{r∈Z+½} (−1)^{r−½} q^{r²/2} w^r`, so `i/θ₁` is a real
//! series. Half-integral powers of `w` cannot be stored, hence `θ₁` and
//! `θ₂` require an even `z`-scale.

use num_integer::Integer;
use num_traits::{One, Zero};

use super::laurent::{coef, Coef, WLaurent};
use super::pole::PoleSeries;
use super::series::{QExp, QSeries};
use super::SeriesError;

fn floor_int(x: QExp) -> i64 {
    x.floor().to_integer()
}

/// Integer-exponent series stored densely by power of `q`.
struct Dense {
    coeffs: Vec<WLaurent>,
}

impl Dense {
    fn one(n: usize) -> Self {
        let mut coeffs = vec![WLaurent::zero(); n + 1];
        coeffs[0] = WLaurent::one();
        Dense { coeffs }
    }

    fn top(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Multiply by `(1 − q^n w^k)`.
    fn mul_linear(&mut self, n: usize, k: i64) {
        for e in (n..=self.top()).rev() {
            let (lo, hi) = self.coeffs.split_at_mut(e);
            let src = &lo[e - n];
            if !src.is_zero() {
                hi[0].add_scaled_shifted(src, &-Coef::one(), k);
            }
        }
    }

    /// Divide by `(1 − q^n w^k)`.
    fn div_linear(&mut self, n: usize, k: i64) {
        for e in n..=self.top() {
            let (lo, hi) = self.coeffs.split_at_mut(e);
            let src = &lo[e - n];
            if !src.is_zero() {
                hi[0].add_scaled_shifted(src, &Coef::one(), k);
            }
        }
    }

    fn into_series(self, offset: QExp, qmax: QExp) -> QSeries {
        let mut s = QSeries::zero(qmax);
        for (e, p) in self.coeffs.into_iter().enumerate() {
            s.add_laurent(offset + e as i64, &p);
        }
        s
    }
}

/// `∏_{n≥1} ∏_{k∈w_exps} (1 − q^n w^k)^{power}` through `q^{qmax}`
/// (`power` = ±1 repeated `|power|` times).
pub fn euler_product(w_exps: &[i64], power: i32, qmax: QExp) -> QSeries {
    if qmax < QExp::zero() {
        return QSeries::zero(qmax);
    }
    let top = floor_int(qmax) as usize;
    let mut d = Dense::one(top);
    for n in 1..=top {
        for &k in w_exps {
            for _ in 0..power.unsigned_abs() {
                if power > 0 {
                    d.mul_linear(n, k);
                } else {
                    d.div_linear(n, k);
                }
            }
        }
    }
    d.into_series(QExp::zero(), qmax)
}

/// `η(τ) = q^{1/24} ∏ (1 − q^n)`.
pub fn eta(qmax: QExp) -> QSeries {
    eta_pow(1, qmax)
}

/// `η(τ)^k` for any integer `k`, through `q^{qmax}`.
pub fn eta_pow(k: i32, qmax: QExp) -> QSeries {
    let offset = QExp::new(k as i64, 24);
    if k == 0 {
        return QSeries::one().add(&QSeries::zero(qmax));
    }
    let body = euler_product(&[0], k, qmax - offset);
    body.shift(offset, 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaKind {
    One,
    Two,
    Three,
}

impl TryFrom<u8> for ThetaKind {
    type Error = SeriesError;
    fn try_from(k: u8) -> Result<Self, SeriesError> {
        match k {
            1 => Ok(ThetaKind::One),
            2 => Ok(ThetaKind::Two),
            3 => Ok(ThetaKind::Three),
            _ => Err(SeriesError::UnknownTheta(k)),
        }
    }
}

/// `θ_kind(a·z, b·τ)` as a lattice sum (`θ₁` divided by `i`).
pub fn theta(kind: ThetaKind, z_scale: i64, tau_scale: i64, qmax: QExp) -> Result<QSeries, SeriesError> {
    if z_scale < 0 || tau_scale < 1 {
        return Err(SeriesError::BadScale { z_scale, tau_scale });
    }
    let half_integral = kind != ThetaKind::Three;
    if half_integral && z_scale.is_odd() {
        return Err(SeriesError::HalfIntegralPower(z_scale));
    }
    let mut s = QSeries::zero(qmax);
    if qmax < QExp::zero() {
        return Ok(s);
    }
    // work with 2r = t (odd for θ₁, θ₂) or r = t/2 with t even for θ₃
    let bound = ((qmax * 8 / tau_scale).to_integer() as f64).sqrt() as i64 + 2;
    for t in -bound..=bound {
        if half_integral != t.is_odd() {
            continue;
        }
        // r = t/2 ; q^{b r²/2} = q^{b t²/8}
        let qe = QExp::new(tau_scale * t * t, 8);
        if qe > qmax {
            continue;
        }
        let w = z_scale * t / 2;
        let c = match kind {
            // (−1)^{r−½} with r − ½ = (t−1)/2
            ThetaKind::One => {
                if ((t - 1) / 2).rem_euclid(2) == 0 {
                    coef(1)
                } else {
                    coef(-1)
                }
            }
            _ => coef(1),
        };
        s.add_term(qe, w, c);
    }
    Ok(s)
}

/// `θ₁(a·z, τ)/i` in triple-product form
/// `q^{1/8}(w^{a/2} − w^{−a/2}) ∏(1−q^n)(1−q^n w^a)(1−q^n w^{−a})`.
pub fn theta1_product(z_scale: i64, qmax: QExp) -> Result<QSeries, SeriesError> {
    if z_scale.is_odd() || z_scale < 0 {
        return Err(SeriesError::HalfIntegralPower(z_scale));
    }
    let off = QExp::new(1, 8);
    let prod = euler_product(&[0, z_scale, -z_scale], 1, qmax - off);
    Ok(prod.shift(off, 0).mul_laurent(&WLaurent::antisym(z_scale / 2)))
}

/// `i/θ₁(a·z, τ)` as `PoleSeries{den = {a/2}}` with body
/// `q^{−1/8}/∏(1−q^n)(1−q^n w^a)(1−q^n w^{−a})`.
pub fn theta1_inv(z_scale: i64, qmax: QExp) -> Result<PoleSeries, SeriesError> {
    if z_scale < 2 || z_scale.is_odd() {
        return Err(SeriesError::HalfIntegralPower(z_scale));
    }
    let off = QExp::new(-1, 8);
    let body = euler_product(&[0, z_scale, -z_scale], -1, qmax - off).shift(off, 0);
    Ok(PoleSeries::new(vec![(z_scale / 2) as u32], body))
}

/// The rank-`r` blow-up factor
/// `B_{r,k} = η^{−r} Σ_{a_i∈Z+k/r, Σa_i=0} q^{½Σa_i²} w^{Σ_{i<j}(a_i−a_j)}`.
/// With `refined = false` the variable `w` is set to 1.
pub fn blowup_factor(r: u32, k: i64, refined: bool, qmax: QExp) -> Result<QSeries, SeriesError> {
    if !(1..=3).contains(&r) {
        return Err(SeriesError::UnsupportedBlowupRank(r));
    }
    let ri = r as i64;
    let k = k.rem_euclid(ri);
    // The eta prefactor has leading exponent −r/24; the lattice sum is needed through qmax + r/24.
    let lattice_max = qmax + QExp::new(ri, 24);
    let mut lattice = QSeries::zero(lattice_max);
    let bound = ((lattice_max * 2).to_integer().max(0) as f64).sqrt() as i64 + 2;
    let mut idx = vec![-bound; (r - 1) as usize];
    loop {
        // a_i = n_i + k/r for i < r, a_r = −Σ a_i
        let mut a: Vec<QExp> = idx.iter().map(|&n| QExp::from_integer(n) + QExp::new(k, ri)).collect();
        let last: QExp = -a.iter().fold(QExp::zero(), |s, x| s + x);
        a.push(last);
        let qe = a.iter().fold(QExp::zero(), |s, x| s + x * x) / 2;
        if qe <= lattice_max {
            let mut wexp = QExp::zero();
            for i in 0..a.len() {
                for j in i + 1..a.len() {
                    wexp += a[i] - a[j];
                }
            }
            debug_assert!(wexp.is_integer());
            let w = if refined { wexp.to_integer() } else { 0 };
            lattice.add_term(qe, w, coef(1));
        }
        // odometer over n_1..n_{r−1}
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                let eta_inv = eta_pow(-(r as i32), qmax);
                return Ok(lattice.mul(&eta_inv).truncate(qmax));
            }
            idx[pos] += 1;
            if idx[pos] > bound {
                idx[pos] = -bound;
                pos += 1;
            } else {
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qe(n: i64) -> QExp {
        QExp::from_integer(n)
    }

    #[test]
    fn eta_coefficients() {
        let e = eta(qe(8));
        let expect: &[(i64, i64)] = &[(0, 1), (1, -1), (2, -1), (5, 1), (7, 1)];
        let off = QExp::new(1, 24);
        for &(k, c) in expect {
            assert_eq!(e.coeff(off + k).unwrap(), &WLaurent::monomial(0, coef(c)));
        }
        assert_eq!(e.len(), expect.len());
    }

    #[test]
    fn eta_inverse_powers() {
        let e = eta_pow(-4, qe(4));
        let off = QExp::new(-1, 6);
        let expect = [1, 4, 14, 40, 105];
        for (k, c) in expect.iter().enumerate() {
            assert_eq!(e.coeff(off + k as i64).unwrap(), &WLaurent::monomial(0, coef(*c)));
        }
        let prod = eta(qe(6)).mul(&eta_pow(-1, qe(6)));
        assert_eq!(prod.agrees_with(&QSeries::one()), Ok(()));
    }

    #[test]
    fn theta_three_at_zero() {
        let t = theta(ThetaKind::Three, 0, 1, qe(2)).unwrap();
        assert_eq!(t.coeff(qe(0)).unwrap(), &WLaurent::monomial(0, coef(1)));
        assert_eq!(t.coeff(QExp::new(1, 2)).unwrap(), &WLaurent::monomial(0, coef(2)));
        assert_eq!(t.coeff(qe(2)).unwrap(), &WLaurent::monomial(0, coef(2)));
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn theta_one_sum_equals_product() {
        for a in [2, 4] {
            let sum = theta(ThetaKind::One, a, 1, qe(6)).unwrap();
            let prod = theta1_product(a, qe(6)).unwrap();
            assert_eq!(sum.agrees_with(&prod), Ok(()));
        }
    }

    #[test]
    fn theta1_inverse_roundtrip() {
        let inv = theta1_inv(2, qe(5)).unwrap();
        let th = theta1_product(2, qe(5)).unwrap();
        let one = inv.mul_series(&th).reduce_pole(1).unwrap();
        assert_eq!(one.body().agrees_with(&QSeries::one()), Ok(()));
        let lead = inv.body().lead().unwrap();
        assert_eq!(lead, QExp::new(-1, 8));
        assert_eq!(theta1_inv(4, qe(2)).unwrap().den(), &[2]);
    }

    #[test]
    fn odd_scale_rejected() {
        assert!(matches!(theta(ThetaKind::Two, 1, 1, qe(1)), Err(SeriesError::HalfIntegralPower(1))));
    }

    #[test]
    fn blowup_rank_two_is_theta_over_eta_squared() {
        let q = qe(5);
        let eta2 = eta_pow(-2, q + 1);
        let b0 = blowup_factor(2, 0, true, q).unwrap();
        let t3 = theta(ThetaKind::Three, 2, 2, q + 1).unwrap().mul(&eta2);
        assert_eq!(b0.agrees_with(&t3), Ok(()));
        let b1 = blowup_factor(2, 1, true, q).unwrap();
        let t2 = theta(ThetaKind::Two, 2, 2, q + 1).unwrap().mul(&eta2);
        assert_eq!(b1.agrees_with(&t2), Ok(()));
    }

    #[test]
    fn blowup_rank_one_is_eta_inverse() {
        let b = blowup_factor(1, 0, true, qe(4)).unwrap();
        assert_eq!(b.agrees_with(&eta_pow(-1, qe(4))), Ok(()));
    }
}
