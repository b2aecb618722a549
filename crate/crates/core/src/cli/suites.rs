//! The `check` verbs: each suite collects named items, each with its own
//! expectation, and passes when every item meets it.

use clap::ValueEnum;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::CliError;
use crate::completions::{
    anomaly_sweep, d_r_theta_check, dtaubar_check, first_line_cancellation, large_y_limit, modularity_sweep,
    quasi_periodicity_sweep, t_law_check, upsilon_exact, CheckReport, PhaseConvention, RealPolarization,
};
use crate::invariants::{blowup_check, oracle_check, IdentityCheck};
use crate::lattice::{q_text, Polarization, Side};
use crate::qseries::QExp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Blowup,
    Modularity,
    Anomaly,
    Oracles,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteItem {
    pub name: String,
    /// Whether the identity is expected to hold; a suite passes when every
    /// item behaves as expected.
    pub expected: bool,
    pub holds: bool,
    pub residual: Option<f64>,
    pub tolerance: Option<f64>,
    pub first_mismatch: Option<String>,
}

impl SuiteItem {
    fn exact(c: &IdentityCheck, expected: bool) -> Self {
        SuiteItem {
            name: c.name.clone(),
            expected,
            holds: c.holds,
            residual: None,
            tolerance: None,
            first_mismatch: c.first_mismatch.map(|q| q_text::to_string(&q)),
        }
    }

    fn numeric(c: &CheckReport) -> Self {
        SuiteItem {
            name: c.check.clone(),
            expected: true,
            holds: c.pass,
            residual: Some(c.residual),
            tolerance: Some(c.tolerance),
            first_mismatch: None,
        }
    }

    fn flag(name: String, expected: bool, holds: bool) -> Self {
        SuiteItem { name, expected, holds, residual: None, tolerance: None, first_mismatch: None }
    }

    pub fn as_expected(&self) -> bool {
        self.expected == self.holds
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub pass: bool,
    pub items: Vec<SuiteItem>,
    /// Largest residual per family of numeric checks.
    pub max_residuals: Vec<(String, f64)>,
}

fn finish(suite: Suite, seed: u64, items: Vec<SuiteItem>) -> SuiteReport {
    let mut max_residuals: Vec<(String, f64)> = Vec::new();
    for it in &items {
        let Some(r) = it.residual else { continue };
        let family = it.name.split(" l=").next().unwrap_or(&it.name).to_string();
        match max_residuals.iter_mut().find(|(f, _)| *f == family) {
            Some((_, m)) => *m = m.max(r),
            None => max_residuals.push((family, r)),
        }
    }
    let pass = items.iter().all(SuiteItem::as_expected);
    SuiteReport { suite, seed, pass, items, max_residuals }
}

fn blowup(ells: &[u32], qmax: QExp) -> Result<Vec<SuiteItem>, CliError> {
    let mut items = Vec::new();
    for &ell in ells {
        let rep = blowup_check(ell, qmax)?;
        for (i, c) in rep.identities.iter().enumerate() {
            // the Appell relations are the blow-up formula only on Σ₁
            let expected = ell == 1 || i == 2;
            let mut item = SuiteItem::exact(c, expected);
            item.name = format!("{} l={ell}", item.name);
            items.push(item);
        }
    }
    Ok(items)
}

fn modularity(ells: &[u32], points: usize, seed: u64) -> Result<Vec<SuiteItem>, CliError> {
    let mut items: Vec<SuiteItem> = modularity_sweep(ells, points, seed)?.iter().map(SuiteItem::numeric).collect();
    items.extend(quasi_periodicity_sweep(5 * points, seed)?.iter().map(SuiteItem::numeric));
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    for &ell in ells {
        for (alpha, beta) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            let z = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.1..0.1));
            let tau = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.8..1.3));
            items.push(SuiteItem::numeric(&first_line_cancellation(ell, alpha, beta, z, tau)?));
            // the printed multiplier is reported but only expected where it agrees
            let printed = t_law_check(ell, alpha, beta, z, tau, PhaseConvention::Printed)?;
            let mut item = SuiteItem::numeric(&printed);
            item.expected = beta == 0 || ell % 4 == 1;
            items.push(item);
        }
        let j = Polarization::integral(1, 1, Side::Plus)?;
        let (completed, exact) = large_y_limit(ell, 1, 1, &j, Complex64::new(0.13, 0.02), Complex64::new(0.1, 30.0))?;
        let diff = (completed - exact).norm();
        items.push(SuiteItem {
            name: format!("large-y limit l={ell}"),
            expected: true,
            holds: diff < 1e-10,
            residual: Some(diff),
            tolerance: Some(1e-10),
            first_mismatch: None,
        });
    }
    Ok(items)
}

fn anomaly(ells: &[u32], points: usize, seed: u64) -> Result<Vec<SuiteItem>, CliError> {
    let mut items = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &ell in ells {
        let j = Polarization::integral(1, 1, Side::Plus)?;
        for (alpha, beta) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            let tau = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.8..1.3));
            items.push(SuiteItem::numeric(&dtaubar_check(ell, alpha, beta, &j, tau)?));
        }
    }
    // Υ at J = −K₁ = 2C + 3f, i.e. (m, n) = (2, 1), vanishes term by term
    for (alpha, beta) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
        let r = upsilon_exact(1, 2, 1, alpha, beta, 6)?;
        items.push(SuiteItem::flag(format!("Upsilon vanishes termwise at -K_1 ({alpha},{beta})"), true, r.vanishes_termwise()));
    }
    // at J = C + f the terms survive and only the coefficients cancel
    for (alpha, beta) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
        let r = upsilon_exact(1, 1, 0, alpha, beta, 6)?;
        items.push(SuiteItem::flag(format!("Upsilon vanishes coefficientwise at C+f ({alpha},{beta})"), true, r.vanishes()));
    }
    for rep in anomaly_sweep(points, seed)? {
        items.push(SuiteItem::numeric(&rep.check));
        let mut flipped = SuiteItem::flag(format!("{} (opposite sign)", rep.check.check), false, rep.opposite_sign_residual <= rep.check.tolerance);
        flipped.residual = Some(rep.opposite_sign_residual);
        flipped.tolerance = Some(rep.check.tolerance);
        items.push(flipped);
    }
    let j = RealPolarization::new(1, 1.0, 1.0)?;
    for mu in [(0, 0), (1, 1)] {
        let rho = [Complex64::new(0.21, 0.03), Complex64::new(-0.17, 0.05)];
        items.push(SuiteItem::numeric(&d_r_theta_check(&j, 2, mu, rho, Complex64::new(0.1, 0.9))?));
    }
    Ok(items)
}

fn oracles(ells: &[u32], qmax: QExp) -> Result<Vec<SuiteItem>, CliError> {
    let js = [
        Polarization::integral(1, 0, Side::Plus)?,
        Polarization::integral(1, 1, Side::Plus)?,
        Polarization::integral(2, 1, Side::Plus)?,
    ];
    let mut items = Vec::new();
    for &ell in ells {
        for (alpha, beta) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            for j in &js {
                for c in oracle_check(ell, alpha, beta, j, qmax, ORACLE_BOX)? {
                    // the Appell comparison does not depend on J
                    if j != &js[0] && c.name.starts_with("Appell") {
                        continue;
                    }
                    items.push(SuiteItem::exact(&c, true));
                }
            }
        }
    }
    Ok(items)
}

/// Side length of the brute-force box in the oracle suite.
pub const ORACLE_BOX: i64 = 60;

pub fn run_suite(
    suite: Suite,
    ell: Option<u32>,
    qmax: Option<QExp>,
    points: Option<usize>,
    seed: u64,
) -> Result<SuiteReport, CliError> {
    let items = match suite {
        Suite::Blowup => {
            let ells = ell.map_or(vec![1, 2], |l| vec![l]);
            blowup(&ells, qmax.unwrap_or(QExp::from_integer(6)))?
        }
        Suite::Modularity => {
            let ells = ell.map_or(vec![1, 2, 3], |l| vec![l]);
            modularity(&ells, points.unwrap_or(20), seed)?
        }
        Suite::Anomaly => {
            let ells = ell.map_or(vec![1, 2], |l| vec![l]);
            anomaly(&ells, points.unwrap_or(5), seed)?
        }
        Suite::Oracles => {
            let ells = ell.map_or(vec![1, 2, 3], |l| vec![l]);
            oracles(&ells, qmax.unwrap_or(QExp::from_integer(4)))?
        }
    };
    Ok(finish(suite, seed, items))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blowup_suite_expects_failure_off_sigma_one() {
        let rep = run_suite(Suite::Blowup, None, Some(QExp::from_integer(3)), None, 1).unwrap();
        assert!(rep.pass);
        assert!(rep.items.iter().any(|i| !i.holds && !i.expected));
    }

    #[test]
    fn unexpected_outcome_fails_suite() {
        let item = SuiteItem::flag("x".into(), true, false);
        assert!(!finish(Suite::Blowup, 0, vec![item]).pass);
    }
}
