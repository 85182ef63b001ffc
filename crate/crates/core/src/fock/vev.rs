use nalgebra::DVector;
use num_complex::Complex64 as C64;

use super::generators::Generators;
use super::operator::FockState;
use super::{OracleConfig, OracleError};
use crate::algebra::{GeneratorKind, NormalForm, OperatorWord};
use crate::vacuum::VacuumSpec;

/// `v^{⊗n}` in row-major slot order.
pub fn tensor_power(v: &DVector<C64>, n: usize) -> DVector<C64> {
    let mut out = DVector::from_element(1, C64::new(1.0, 0.0));
    for _ in 0..n {
        out = out.kronecker(v);
    }
    out
}

/// One-oscillator ground state `|O⟩ = Σ_λ O_λ |λ, 0⟩`.
pub fn ground_profile(cfg: &OracleConfig, vac: &VacuumSpec) -> Result<DVector<C64>, OracleError> {
    let mut v = DVector::zeros(cfg.local_dim());
    for (id, &amp) in vac.profile() {
        if amp == C64::new(0.0, 0.0) {
            continue;
        }
        let m = cfg
            .mode_index(id)
            .ok_or_else(|| OracleError::UnknownMode(id.to_string()))?;
        v[cfg.local_index(m, 0)] = amp;
    }
    Ok(v)
}

/// `|𝟘⟩ = ⊕_n √p_n |O⟩^{⊗n}`.
pub fn vacuum_state(cfg: &OracleConfig, vac: &VacuumSpec) -> Result<FockState, OracleError> {
    if vac.max_oscillators() as usize > cfg.max_oscillators {
        return Err(OracleError::UnsupportedVacuum(format!(
            "vacuum has weight on n = {} but the oracle stops at N = {}",
            vac.max_oscillators(),
            cfg.max_oscillators
        )));
    }
    let o = ground_profile(cfg, vac)?;
    let mut state = FockState::zeros(cfg);
    for (&n, &p) in vac.p() {
        *state.sector_mut(n as usize) = tensor_power(&o, n as usize) * C64::new(p.sqrt(), 0.0);
    }
    Ok(state)
}

pub fn apply_word(
    gens: &Generators,
    word: &OperatorWord,
    state: &FockState,
) -> Result<FockState, OracleError> {
    let mut out = state.clone();
    for g in word.factors.iter().rev() {
        out = gens.get(g)?.apply(&out);
    }
    out.scale(word.coefficient.to_c64());
    Ok(out)
}

pub fn apply_normal_form(
    gens: &Generators,
    form: &NormalForm,
    state: &FockState,
) -> Result<FockState, OracleError> {
    let mut out = FockState::zeros(gens.config());
    for word in form.to_words() {
        out.axpy(C64::new(1.0, 0.0), &apply_word(gens, &word, state)?);
    }
    Ok(out)
}

fn creator_count(word: &OperatorWord) -> usize {
    word.factors
        .iter()
        .filter(|g| g.kind == GeneratorKind::Create)
        .count()
}

/// `⟨𝟘| word |𝟘⟩` by direct matrix action.
pub fn vev_oracle(
    gens: &Generators,
    vac: &VacuumSpec,
    word: &OperatorWord,
) -> Result<C64, OracleError> {
    let cfg = gens.config();
    let creators = creator_count(word);
    if creators >= cfg.fock_dim {
        return Err(OracleError::TruncationWarning(format!(
            "{creators} creators reach the truncated level D = {}",
            cfg.fock_dim
        )));
    }
    let vacuum = vacuum_state(cfg, vac)?;
    Ok(vacuum.inner(&apply_word(gens, word, &vacuum)?))
}

/// Vacuum averages `(⟨𝟘|𝓗|𝟘⟩, ⟨𝟘|𝐇|𝟘⟩)`.
pub fn vacuum_energies(gens: &Generators, vac: &VacuumSpec) -> Result<(f64, f64), OracleError> {
    let vacuum = vacuum_state(gens.config(), vac)?;
    let script = vacuum.inner(&gens.h_script().apply(&vacuum)).re;
    let bold = vacuum.inner(&gens.apply_h_bold(&vacuum)).re;
    Ok((script, bold))
}
