use num_complex::Complex64 as C64;
use serde::Serialize;

use super::expm::expm;
use super::generators::{build_generators, Generators};
use super::operator::{DenseOperator, OneBodyOperator, SparseVec};
use super::{OracleConfig, OracleError};
use crate::algebra::ModeId;

/// Outcome of one numerical check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    /// `true` when the check requires `value ≥ threshold` instead of `value ≤ threshold`.
    pub lower_bound: bool,
}

impl CheckResult {
    pub fn below(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        CheckResult {
            name: name.into(),
            value,
            threshold,
            lower_bound: false,
        }
    }

    pub fn above(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        CheckResult {
            name: name.into(),
            value,
            threshold,
            lower_bound: true,
        }
    }

    pub fn passed(&self) -> bool {
        if self.lower_bound {
            self.value >= self.threshold
        } else {
            self.value <= self.threshold
        }
    }
}

pub const ALGEBRA_TOL: f64 = 1e-12;
pub const HEISENBERG_TOL: f64 = 1e-8;

fn max_dev(a: &SparseVec, b: &SparseVec) -> f64 {
    let mut dev: f64 = 0.0;
    for (k, x) in a {
        dev = dev.max((x - b.get(k).copied().unwrap_or_default()).norm());
    }
    for (k, y) in b {
        if !a.contains_key(k) {
            dev = dev.max(y.norm());
        }
    }
    dev
}

fn basis(col: usize) -> SparseVec {
    SparseVec::from([(col, C64::new(1.0, 0.0))])
}

/// Columns whose every oscillator sits below the top Fock level.
pub fn safe_columns(cfg: &OracleConfig, n: usize) -> impl Iterator<Item = usize> + '_ {
    (0..cfg.sector_dim(n)).filter(move |&j| cfg.levels(n, j).iter().all(|&k| k + 1 < cfg.fock_dim))
}

/// Columns of total excitation `≤ D − 2`; an invariant subspace of both Hamiltonians.
pub fn low_excitation_columns(cfg: &OracleConfig, n: usize) -> Vec<usize> {
    (0..cfg.sector_dim(n))
        .filter(|&j| cfg.total_excitation(n, j) + 2 <= cfg.fock_dim)
        .collect()
}

/// `max ‖([X, Y] − Z) e_j‖_∞` over truncation-safe columns.
fn commutator_deviation(
    cfg: &OracleConfig,
    x: &OneBodyOperator,
    y: &OneBodyOperator,
    z: Option<&OneBodyOperator>,
) -> f64 {
    let mut dev: f64 = 0.0;
    for n in 1..=cfg.max_oscillators {
        for j in safe_columns(cfg, n) {
            let e = basis(j);
            let xy = x.apply_sparse(n, &y.apply_sparse(n, &e));
            let mut yx = y.apply_sparse(n, &x.apply_sparse(n, &e));
            if let Some(z) = z {
                for (k, v) in z.apply_sparse(n, &e) {
                    *yx.entry(k).or_default() += v;
                }
            }
            dev = dev.max(max_dev(&xy, &yx));
        }
    }
    dev
}

/// The four commutation relations, centrality of `𝟙_λ`, and the resolution of identity.
pub fn algebra_checks(gens: &Generators) -> Vec<CheckResult> {
    let cfg = gens.config();
    let ids: Vec<ModeId> = cfg.modes.iter().map(|m| m.id.clone()).collect();
    let mut same = 0.0f64;
    let mut cross = 0.0f64;
    let mut aa = 0.0f64;
    let mut adad = 0.0f64;
    let mut central = 0.0f64;
    for l in &ids {
        let a = gens.annihilator(l).unwrap();
        let ad = gens.creator(l).unwrap();
        let one = gens.unit(l).unwrap();
        for m in &ids {
            let b = gens.annihilator(m).unwrap();
            let bd = gens.creator(m).unwrap();
            if l == m {
                same = same.max(commutator_deviation(cfg, a, bd, Some(one)));
            } else {
                cross = cross.max(commutator_deviation(cfg, a, bd, None));
            }
            aa = aa.max(commutator_deviation(cfg, a, b, None));
            adad = adad.max(commutator_deviation(cfg, ad, bd, None));
            for g in [b, bd, gens.unit(m).unwrap()] {
                central = central.max(commutator_deviation(cfg, one, g, None));
            }
        }
    }
    vec![
        CheckResult::below("[a_l, ad_l] = 1_l", same, ALGEBRA_TOL),
        CheckResult::below("[a_l, ad_m] = 0 (l != m)", cross, ALGEBRA_TOL),
        CheckResult::below("[a_l, a_m] = 0", aa, ALGEBRA_TOL),
        CheckResult::below("[ad_l, ad_m] = 0", adad, ALGEBRA_TOL),
        CheckResult::below("1_l central", central, ALGEBRA_TOL),
        CheckResult::below(
            "sum_l 1_l = 1",
            resolution_of_identity_defect(gens),
            ALGEBRA_TOL,
        ),
    ]
}

/// `max |Σ_λ 𝟙_λ − 1|` over every basis column.
pub fn resolution_of_identity_defect(gens: &Generators) -> f64 {
    let cfg = gens.config();
    let mut dev: f64 = 0.0;
    for n in 1..=cfg.max_oscillators {
        for j in 0..cfg.sector_dim(n) {
            let e = basis(j);
            let mut sum = SparseVec::new();
            for m in &cfg.modes {
                for (k, v) in gens.unit(&m.id).unwrap().apply_sparse(n, &e) {
                    *sum.entry(k).or_default() += v;
                }
            }
            dev = dev.max(max_dev(&sum, &e));
        }
    }
    dev
}

/// `max_λ max |𝟙_λ² − 𝟙_λ|`; nonzero means the measures are not projectors.
pub fn idempotence_defect(gens: &Generators) -> f64 {
    let cfg = gens.config();
    let mut dev: f64 = 0.0;
    for m in &cfg.modes {
        let one = gens.unit(&m.id).unwrap();
        for n in 1..=cfg.max_oscillators {
            for j in 0..cfg.sector_dim(n) {
                let e = basis(j);
                let once = one.apply_sparse(n, &e);
                dev = dev.max(max_dev(&one.apply_sparse(n, &once), &once));
            }
        }
    }
    dev
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Evolution {
    /// Generated by the noninteracting extension `𝓗`.
    Script,
    /// Generated by the mode sum `𝐇`.
    Bold,
}

/// Dense data reused across several times `t`.
pub struct HeisenbergProbe {
    cfg: OracleConfig,
    h_script: DenseOperator,
    h_bold: DenseOperator,
    columns: Vec<Vec<usize>>,
}

impl HeisenbergProbe {
    pub fn new(cfg: &OracleConfig) -> Result<Self, OracleError> {
        let gens = build_generators(cfg)?;
        let h_script = gens.h_script().to_dense(cfg)?;
        let h_bold = gens.h_bold()?;
        let columns = (1..=cfg.max_oscillators)
            .map(|n| low_excitation_columns(cfg, n))
            .collect();
        Ok(HeisenbergProbe {
            cfg: cfg.clone(),
            h_script,
            h_bold,
            columns,
        })
    }

    /// Deviation of `e^{iHt} 𝒂_λ e^{−iHt}` from the expected form.
    ///
    /// With `expect_units` false the reference is the scalar phase `e^{−iω t} 𝒂_λ`;
    /// otherwise it is `e^{−iω t 𝟙_λ} 𝒂_λ`.
    pub fn deviation(
        &self,
        mode: &ModeId,
        t: f64,
        evolution: Evolution,
        expect_units: bool,
    ) -> Result<f64, OracleError> {
        let idx = self
            .cfg
            .mode_index(mode)
            .ok_or_else(|| OracleError::UnknownMode(mode.to_string()))?;
        let omega = self.cfg.modes[idx].omega;
        let gens = build_generators(&self.cfg)?;
        let a = gens.annihilator(mode)?.to_dense(&self.cfg)?;
        let one = gens.unit(mode)?.to_dense(&self.cfg)?;
        let h = match evolution {
            Evolution::Script => &self.h_script,
            Evolution::Bold => &self.h_bold,
        };
        let mut dev: f64 = 0.0;
        for n in 1..=self.cfg.max_oscillators {
            let u = expm(&(h.block(n) * C64::new(0.0, -t)));
            let lhs = u.adjoint() * a.block(n) * &u;
            let rhs = if expect_units {
                expm(&(one.block(n) * C64::new(0.0, -omega * t))) * a.block(n)
            } else {
                a.block(n) * C64::from_polar(1.0, -omega * t)
            };
            for &j in &self.columns[n - 1] {
                for r in 0..lhs.nrows() {
                    dev = dev.max((lhs[(r, j)] - rhs[(r, j)]).norm());
                }
            }
        }
        Ok(dev)
    }
}

/// `max |e^{iHt} 𝒂_λ e^{−iHt} − reference|` with the reference matching the evolution:
/// scalar phase for `𝓗`, `e^{−iω t 𝟙_λ}` for `𝐇`.
pub fn heisenberg_phase_check(
    cfg: &OracleConfig,
    mode: &ModeId,
    t: f64,
    evolution: Evolution,
) -> Result<f64, OracleError> {
    HeisenbergProbe::new(cfg)?.deviation(mode, t, evolution, evolution == Evolution::Bold)
}
