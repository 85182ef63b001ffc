use std::collections::BTreeMap;

use nalgebra::DVector;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::generators::Generators;
use super::operator::FockState;
use super::vev::tensor_power;
use super::{OracleConfig, OracleError};
use crate::algebra::ModeId;

/// Largest tolerated `1 − Σ_{k<D} |⟨k|β⟩|²` for a truncated coherent state.
pub const COHERENT_NORM_TOL: f64 = 1e-6;

/// Normalized truncation of `|β⟩` to `D` levels, with the discarded weight.
pub fn truncated_coherent(beta: C64, d: usize) -> (DVector<C64>, f64) {
    let mut v = DVector::zeros(d);
    let mut term = C64::new((-0.5 * beta.norm_sqr()).exp(), 0.0);
    for k in 0..d {
        if k > 0 {
            term *= beta / (k as f64).sqrt();
        }
        v[k] = term;
    }
    let kept = v.norm_squared();
    let deficit = (1.0 - kept).max(0.0);
    (v.unscale(kept.sqrt()), deficit)
}

fn local_coherent(cfg: &OracleConfig, mode: usize, beta: C64) -> Result<DVector<C64>, OracleError> {
    let (c, deficit) = truncated_coherent(beta, cfg.fock_dim);
    if deficit > COHERENT_NORM_TOL {
        return Err(OracleError::TruncationWarning(format!(
            "coherent amplitude {beta} loses {deficit:.3e} of its norm at D = {}",
            cfg.fock_dim
        )));
    }
    let mut v = DVector::zeros(cfg.local_dim());
    v.rows_mut(cfg.local_index(mode, 0), cfg.fock_dim)
        .copy_from(&c);
    Ok(v)
}

fn mode_index(cfg: &OracleConfig, mode: &ModeId) -> Result<usize, OracleError> {
    cfg.mode_index(mode)
        .ok_or_else(|| OracleError::UnknownMode(mode.to_string()))
}

/// `|𝜶_λ⟩ = ⊕_n f_n |λ, α/(n c_n)⟩^{⊗n}`; `f[i]` is the weight of sector `i + 1`.
pub fn coherent_state(
    cfg: &OracleConfig,
    mode: &ModeId,
    alpha: C64,
    f: &[C64],
) -> Result<FockState, OracleError> {
    let m = mode_index(cfg, mode)?;
    if f.len() > cfg.max_oscillators {
        return Err(OracleError::InvalidConfig(format!(
            "{} sector weights for N = {}",
            f.len(),
            cfg.max_oscillators
        )));
    }
    let total: f64 = f.iter().map(|z| z.norm_sqr()).sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(OracleError::InvalidConfig(format!(
            "Σ|f_n|² = {total}, expected 1"
        )));
    }
    let mut state = FockState::zeros(cfg);
    for (i, &fn_) in f.iter().enumerate() {
        if fn_ == C64::new(0.0, 0.0) {
            continue;
        }
        let n = i + 1;
        let nc = n as f64 * cfg.weights.c(n);
        if nc == 0.0 {
            return Err(OracleError::InvalidConfig(format!(
                "c_{n} = 0 with f_{n} ≠ 0"
            )));
        }
        let local = local_coherent(cfg, m, alpha / nc)?;
        *state.sector_mut(n) = tensor_power(&local, n) * fn_;
    }
    Ok(state)
}

/// One-oscillator superposition `Σ_λ Φ_λ |λ⟩|α_λ⟩` from `(λ, Φ_λ, α_λ)` triples.
pub fn mode_superposition(
    cfg: &OracleConfig,
    terms: &[(ModeId, C64, C64)],
) -> Result<FockState, OracleError> {
    let total: f64 = terms.iter().map(|(_, phi, _)| phi.norm_sqr()).sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(OracleError::InvalidConfig(format!(
            "Σ|Φ_λ|² = {total}, expected 1"
        )));
    }
    let mut state = FockState::zeros(cfg);
    for (id, phi, alpha) in terms {
        let m = mode_index(cfg, id)?;
        let v = local_coherent(cfg, m, *alpha)? * *phi;
        *state.sector_mut(1) += v;
    }
    Ok(state)
}

/// `‖(𝒂_λ − α)ψ‖`.
pub fn eigen_residual(
    gens: &Generators,
    mode: &ModeId,
    alpha: C64,
    state: &FockState,
) -> Result<f64, OracleError> {
    let mut r = gens.annihilator(mode)?.apply(state);
    r.axpy(-alpha, state);
    Ok(r.norm_sqr().sqrt())
}

/// `(⟨ψ|𝓗|ψ⟩, ⟨ψ|𝐇|ψ⟩)`.
pub fn energies(gens: &Generators, state: &FockState) -> (f64, f64) {
    let script = state.inner(&gens.h_script().apply(state)).re;
    let bold = state.inner(&gens.apply_h_bold(state)).re;
    (script, bold)
}

/// Geometry of one field mode: wave vector and complex polarization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeGeometry {
    pub kappa: [f64; 3],
    pub polarization: [C64; 3],
}

/// Quantization volume and per-mode geometry, in units with `ħ = c = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldGeometry {
    pub volume: f64,
    pub modes: BTreeMap<ModeId, ModeGeometry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FieldAverages {
    pub a: [f64; 3],
    pub e: [f64; 3],
    pub b: [f64; 3],
}

fn cross(n: [f64; 3], v: [f64; 3]) -> [f64; 3] {
    [
        n[1] * v[2] - n[2] * v[1],
        n[2] * v[0] - n[0] * v[2],
        n[0] * v[1] - n[1] * v[0],
    ]
}

/// `⟨ψ|A(t,x)|ψ⟩`, `⟨ψ|E(t,x)|ψ⟩`, `⟨ψ|B(t,x)|ψ⟩` from the mode-sum field operators.
pub fn field_averages(
    gens: &Generators,
    geometry: &FieldGeometry,
    state: &FockState,
    t: f64,
    x: [f64; 3],
) -> Result<FieldAverages, OracleError> {
    let cfg = gens.config();
    let mut out = FieldAverages {
        a: [0.0; 3],
        e: [0.0; 3],
        b: [0.0; 3],
    };
    for (id, geo) in &geometry.modes {
        let omega = cfg.modes[mode_index(cfg, id)?].omega;
        let mean_a = state.inner(&gens.annihilator(id)?.apply(state));
        let kx: f64 = geo.kappa.iter().zip(&x).map(|(k, x)| k * x).sum();
        let z = mean_a * C64::from_polar(1.0, kx - omega * t);
        let knorm = geo.kappa.iter().map(|k| k * k).sum::<f64>().sqrt();
        let n_hat = if knorm > 0.0 {
            geo.kappa.map(|k| k / knorm)
        } else {
            [0.0; 3]
        };
        let amp_a = (1.0 / (2.0 * omega * geometry.volume)).sqrt();
        let amp_e = (omega / (2.0 * geometry.volume)).sqrt();
        // i(w − w̄) = −2 Im w
        let w = geo.polarization.map(|e| z * e);
        let e_like = w.map(|w| amp_e * (-2.0 * w.im));
        let b = cross(n_hat, e_like);
        for c in 0..3 {
            out.a[c] += amp_a * 2.0 * w[c].re;
            out.e[c] += e_like[c];
            out.b[c] += b[c];
        }
    }
    Ok(out)
}
