use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::checks::{algebra_checks, idempotence_defect, CheckResult};
use super::generators::{build_generators, Generators};
use super::vev::vev_oracle;
use super::{OracleConfig, OracleError};
use crate::algebra::{normal_order, Generator, ModeId, OperatorWord};
use crate::vacuum::{vev, VacuumSpec};

pub const DEFAULT_SEED: u64 = 20_240_917;
pub const DEFAULT_WORD_COUNT: usize = 200;
pub const MAX_WORD_LEN: usize = 6;
pub const AGREEMENT_TOL: f64 = 1e-10;

#[derive(Clone, Debug, Serialize)]
pub struct AgreementCase {
    pub word: String,
    pub symbolic: [f64; 2],
    pub oracle: [f64; 2],
    pub error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    pub cases: Vec<AgreementCase>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    /// Fixed-width pass/fail table.
    pub fn table(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let op = if c.lower_bound { ">=" } else { "<=" };
            out.push_str(&format!(
                "{:<4} {:<36} {:.3e} {op} {:.1e}\n",
                if c.passed() { "PASS" } else { "FAIL" },
                c.name,
                c.value,
                c.threshold
            ));
        }
        out
    }
}

/// Word of length `1..=max_len` over `a`, `a†` and `𝟙` of the given modes.
pub fn random_word(rng: &mut impl Rng, modes: &[ModeId], max_len: usize) -> OperatorWord {
    let len = rng.gen_range(1..=max_len);
    let factors = (0..len)
        .map(|_| {
            let mode = modes[rng.gen_range(0..modes.len())].clone();
            match rng.gen_range(0..5) {
                0 | 1 => Generator::annihilate(mode),
                2 | 3 => Generator::create(mode),
                _ => Generator::unit(mode),
            }
        })
        .collect();
    OperatorWord::new(factors)
}

/// Product vacuum with random `p` on `1..=n_max` and random complex profile.
pub fn random_vacuum(rng: &mut impl Rng, modes: &[ModeId], n_max: u32) -> VacuumSpec {
    let p: Vec<(u32, f64)> = (1..=n_max).map(|n| (n, rng.gen_range(0.05..1.0))).collect();
    let total: f64 = p.iter().map(|x| x.1).sum();
    let profile: Vec<(ModeId, C64)> = modes
        .iter()
        .map(|m| {
            (
                m.clone(),
                C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            )
        })
        .collect();
    VacuumSpec::from_pairs(p.into_iter().map(|(n, x)| (n, x / total)), profile, true)
        .expect("random vacuum is valid")
}

/// Symbolic and matrix vacuum expectations on `count` seeded random words.
pub fn agreement_suite(
    gens: &Generators,
    seed: u64,
    count: usize,
) -> Result<Vec<AgreementCase>, OracleError> {
    let cfg = gens.config();
    let modes: Vec<ModeId> = cfg.modes.iter().take(2).map(|m| m.id.clone()).collect();
    let n_max = cfg.max_oscillators.min(3) as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::with_capacity(count);
    while cases.len() < count {
        let vac = random_vacuum(&mut rng, &modes, n_max);
        let word = random_word(&mut rng, &modes, MAX_WORD_LEN);
        let oracle = match vev_oracle(gens, &vac, &word) {
            Ok(v) => v,
            Err(OracleError::TruncationWarning(_)) => continue,
            Err(e) => return Err(e),
        };
        let form = normal_order(&word).map_err(|e| OracleError::InvalidConfig(e.to_string()))?;
        let symbolic = vev(&vac, &form).map_err(|e| OracleError::InvalidConfig(e.to_string()))?;
        cases.push(AgreementCase {
            word: word.to_string(),
            symbolic: [symbolic.re, symbolic.im],
            oracle: [oracle.re, oracle.im],
            error: (symbolic - oracle).norm(),
        });
    }
    Ok(cases)
}

/// Algebra relations, the non-idempotence witness, and the randomized agreement suite.
pub fn run_verification(
    cfg: &OracleConfig,
    seed: u64,
    count: usize,
) -> Result<VerifyReport, OracleError> {
    let gens = build_generators(cfg)?;
    let mut checks = algebra_checks(&gens);
    if cfg.max_oscillators >= 2 {
        checks.push(CheckResult::above(
            "1_l^2 != 1_l",
            idempotence_defect(&gens),
            1e-3,
        ));
    }
    let cases = agreement_suite(&gens, seed, count)?;
    let worst = cases.iter().map(|c| c.error).fold(0.0, f64::max);
    checks.push(CheckResult::below(
        format!("vev agreement ({} words)", cases.len()),
        worst,
        AGREEMENT_TOL,
    ));
    Ok(VerifyReport {
        seed,
        checks,
        cases,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_verification_passes() {
        let cfg = OracleConfig::numbered(2, 5, 2).unwrap();
        let report = run_verification(&cfg, 7, 30).unwrap();
        assert!(report.passed(), "{}", report.table());
        assert_eq!(report.cases.len(), 30);
    }

    #[test]
    fn seeded_words_are_reproducible() {
        let modes = [ModeId::from("k1"), ModeId::from("k2")];
        let a: Vec<String> = {
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            (0..10)
                .map(|_| random_word(&mut rng, &modes, 6).to_string())
                .collect()
        };
        let b: Vec<String> = {
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            (0..10)
                .map(|_| random_word(&mut rng, &modes, 6).to_string())
                .collect()
        };
        assert_eq!(a, b);
    }
}
