//! The multiplicative relations between the rank-2 Appell functions with
//! `β = 0` and `β = 1`, which on `Σ₁` are the blow-up formula in disguise.

use num_traits::Zero;
use serde::Serialize;

use super::appell::appell_a;
use super::InvariantError;
use crate::lattice::q_text;
use crate::qseries::{blowup_factor, theta, PoleSeries, QExp, ThetaKind};

/// Outcome of one exact series identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
    /// Lowest `q`-exponent where the two sides differ.
    #[serde(serialize_with = "opt_q")]
    pub first_mismatch: Option<QExp>,
}

fn opt_q<S: serde::Serializer>(q: &Option<QExp>, s: S) -> Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_some(&q_text::to_string(q)),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlowupReport {
    pub ell: u32,
    #[serde(with = "q_text")]
    pub qmax: QExp,
    pub identities: Vec<IdentityCheck>,
}

impl BlowupReport {
    pub fn all_hold(&self) -> bool {
        self.identities.iter().all(|c| c.holds)
    }
}

fn compare(name: &str, lhs: &PoleSeries, rhs: &PoleSeries) -> IdentityCheck {
    let mismatch = lhs.agrees_with(rhs).err();
    IdentityCheck { name: name.to_string(), holds: mismatch.is_none(), first_mismatch: mismatch }
}

/// Check, through `q^{qmax}`,
///
/// * `θ₃(2z,2τ)·A_{ℓ,(1,0)} = θ₂(2z,2τ)·A_{ℓ,(1,1)}`,
/// * `θ₂(2z,2τ)·A_{ℓ,(0,0)} = θ₃(2z,2τ)·A_{ℓ,(0,1)}`,
/// * `θ₃(2z,2τ)·B_{2,1} = θ₂(2z,2τ)·B_{2,0}`.
///
/// The first two are expected to hold only for `ℓ = 1`.
pub fn blowup_check(ell: u32, qmax: QExp) -> Result<BlowupReport, InvariantError> {
    let th2 = theta(ThetaKind::Two, 2, 2, qmax)?;
    let th3 = theta(ThetaKind::Three, 2, 2, qmax)?;
    let a10 = appell_a(ell, 1, 0, qmax)?;
    let a11 = appell_a(ell, 1, 1, qmax)?;
    let a00 = appell_a(ell, 0, 0, qmax)?;
    let a01 = appell_a(ell, 0, 1, qmax)?;
    // Leading exponents are ≥ 0 on both sides, so products are exact through qmax.
    debug_assert!(a10.body().lead().is_none_or(|e| e >= QExp::zero()));
    let mut identities = vec![
        compare("A(1,0)*theta3 = theta2*A(1,1)", &a10.mul_series(&th3), &a11.mul_series(&th2)),
        compare("A(0,0)*theta2 = theta3*A(0,1)", &a00.mul_series(&th2), &a01.mul_series(&th3)),
    ];
    let b20 = blowup_factor(2, 0, true, qmax)?;
    let b21 = blowup_factor(2, 1, true, qmax)?;
    identities.push(compare(
        "B(2,1)*theta3 = theta2*B(2,0)",
        &PoleSeries::from_series(b21.mul(&th3)),
        &PoleSeries::from_series(b20.mul(&th2)),
    ));
    Ok(BlowupReport { ell, qmax, identities })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn holds_on_sigma_one() {
        let rep = blowup_check(1, QExp::from_integer(4)).unwrap();
        assert!(rep.all_hold(), "{rep:?}");
    }

    #[test]
    fn appell_relation_fails_on_sigma_two() {
        let rep = blowup_check(2, QExp::from_integer(4)).unwrap();
        assert!(!rep.identities[0].holds);
        assert!(!rep.identities[1].holds);
        assert!(rep.identities[2].holds);
    }
}
