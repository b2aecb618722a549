//! Exact series arithmetic: Laurent polynomials in `w`, truncated series in
//! rational powers of `q`, explicit `(w^m − w^{−m})` denominators and the
//! classical eta/theta building blocks.

mod classical;
mod json;
mod laurent;
mod pole;
mod series;

use thiserror::Error;

pub use classical::{
    blowup_factor, eta, eta_pow, euler_product, theta, theta1_inv, theta1_product, ThetaKind,
};
pub use json::{pole_from_json, pole_to_json, series_from_json, series_to_json, JsonError};
pub use laurent::{coef, coef_frac, Coef, WLaurent};
pub use pole::{PoleSeries, WFraction};
pub use series::{QExp, QSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("(w^{m} - w^-{m}) does not divide the coefficient of q^{q}")]
    NotDivisible { m: u32, q: QExp },
    #[error("no factor (w^{0} - w^-{0}) in the denominator")]
    MissingFactor(u32),
    #[error("leading coefficient is not a monomial in w")]
    NotInvertible,
    #[error("inverse of an exact series needs an explicit truncation order")]
    UnboundedInverse,
    #[error("coefficient of q^{requested} requested but the series is only known through q^{qmax}")]
    BeyondTruncation { requested: QExp, qmax: QExp },
    #[error("theta function with z-scale {0} would need half-integral powers of w")]
    HalfIntegralPower(i64),
    #[error("invalid theta scales a = {z_scale}, b = {tau_scale}")]
    BadScale { z_scale: i64, tau_scale: i64 },
    #[error("theta kind must be 1, 2 or 3, got {0}")]
    UnknownTheta(u8),
    #[error("blow-up factor only implemented for r = 1, 2, 3 (got {0})")]
    UnsupportedBlowupRank(u32),
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn small_series() -> impl Strategy<Value = QSeries> {
        prop::collection::vec((0i64..8, 1i64..=2, -3i64..=3, -4i64..=4), 0..6).prop_map(|ts| {
            let mut s = QSeries::zero(QExp::from_integer(4));
            for (n, d, w, c) in ts {
                s.add_term(QExp::new(n, d), w, coef(c));
            }
            s
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in small_series(), b in small_series(), c in small_series()) {
            let ab_c = a.mul(&b).mul(&c);
            let a_bc = a.mul(&b.mul(&c));
            prop_assert_eq!(ab_c.agrees_with(&a_bc), Ok(()));
            let lhs = a.mul(&b.add(&c));
            let rhs = a.mul(&b).add(&a.mul(&c));
            prop_assert_eq!(lhs.agrees_with(&rhs), Ok(()));
            prop_assert_eq!(a.mul(&b).agrees_with(&b.mul(&a)), Ok(()));
        }

        #[test]
        fn invert_symmetry_at_minus_one(a in small_series()) {
            for (q, p) in a.terms() {
                let inv = a.w_invert();
                prop_assert_eq!(inv.coeff(*q).unwrap().eval_minus_one(), p.eval_minus_one());
            }
            prop_assert_eq!(a.w_invert().w_invert(), a);
        }

        #[test]
        fn truncation_stability(lo in 1i64..4, extra in 1i64..3) {
            let q1 = QExp::from_integer(lo);
            let q2 = QExp::from_integer(lo + extra);
            prop_assert_eq!(eta_pow(-3, q1).agrees_with(&eta_pow(-3, q2)), Ok(()));
            prop_assert_eq!(theta1_inv(2, q1).unwrap().agrees_with(&theta1_inv(2, q2).unwrap()), Ok(()));
            let t1 = theta(ThetaKind::Two, 2, 2, q1).unwrap();
            let t2 = theta(ThetaKind::Two, 2, 2, q2).unwrap();
            prop_assert_eq!(t1.agrees_with(&t2), Ok(()));
            let b1 = blowup_factor(3, 1, true, q1).unwrap();
            let b2 = blowup_factor(3, 1, true, q2).unwrap();
            prop_assert_eq!(b1.agrees_with(&b2), Ok(()));
        }
    }
}
