//! Generating functions of refined BPS invariants on `Σ_ℓ` for ranks 1–3,
//! wall-crossing, and extraction of Betti and Euler numbers.

mod appell;
mod blowup;
mod extract;
mod oracle;
mod rank2;
mod rank3;
mod wallcross;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{ChernVector, DivisorClass, LatticeError, Q};
use crate::qseries::{QExp, SeriesError};

pub use appell::{appell_a, appell_is_regular};
pub use blowup::{blowup_check, BlowupReport, IdentityCheck};
pub use extract::{
    betti_extract, euler_by_derivative, f1, h_from_f, prefactor_pow, rational_from_integer, rational_to_integer,
    specialize_at_half, BettiData, GeneratingFunction, InvariantRecord, RatFn,
};
pub use oracle::{box_appell, box_indef_theta, oracle_check};
pub use rank2::{f2, f2_transport, f2_wall_sum, indef_theta};
pub use rank3::{f3, f3_transport, f3_wall_ratios};
pub use wallcross::{
    delta_omega_primitive, rank2_wall_delta, transported_omega, two_path_check, wall_sum_vs_closed_form, wallcross_transport,
    Transport,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("ℓ = 0 is not supported: the Appell function A_(0,(0,1)) is undefined")]
    UnsupportedEll,
    #[error("rank {0} is not supported")]
    UnsupportedRank(u32),
    #[error("rank-3 generating function needs β ≢ 0 mod 3")]
    BetaDivisible,
    #[error("lattice sum does not terminate for a polarization with m = 0 and β even")]
    NonTerminatingSum,
    #[error("q^{needed} lies beyond the computed order q^{qmax}")]
    ExponentBeyondTruncation { needed: QExp, qmax: QExp },
    #[error("c2 = {0} is not an integer")]
    NonIntegralC2(Q),
    #[error("missing rational invariant for divisor charge {0}")]
    MissingDivisorData(ChernVector),
    #[error("refined invariant is not a polynomial after removing the pole: {0}")]
    NotPolynomial(String),
    #[error("Poincaré polynomial is not palindromic: {0}")]
    NotPalindromic(String),
    #[error("negative or non-integral Betti number in {0}")]
    NegativeBetti(String),
    #[error("Euler numbers disagree: p(1) = {p1}, limit = {limit}, derivative = {derivative}")]
    EulerMismatch { p1: String, limit: String, derivative: String },
    #[error("function has a pole at w = -1")]
    PoleAtMinusOne,
}

/// `c₁ ≡ βC − αf (mod r·H²)` with `0 ≤ α, β < r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResidueClass {
    pub r: u32,
    pub alpha: i64,
    pub beta: i64,
}

impl ResidueClass {
    pub fn of(r: u32, c1: DivisorClass) -> Self {
        let (beta, alpha) = c1.beta_alpha();
        let ri = r as i64;
        ResidueClass { r, alpha: alpha.rem_euclid(ri), beta: beta.rem_euclid(ri) }
    }

    pub fn representative(&self) -> DivisorClass {
        DivisorClass::from_beta_alpha(self.beta, self.alpha)
    }
}

/// Provenance warning attached to every result with `ℓ > 2`.
pub const ELL_WARNING: &str =
    "l > 2: -K is not nef, so the wall-crossing formulas used here lack a proof for this surface";

pub fn warnings_for(ell: u32) -> Vec<String> {
    if ell > 2 {
        vec![ELL_WARNING.to_string()]
    } else {
        Vec::new()
    }
}
