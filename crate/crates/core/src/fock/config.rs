use serde::{Deserialize, Serialize};

use super::OracleError;
use crate::algebra::{ModeId, ModeLabel};

pub const DEFAULT_DIM_CAP: usize = 20_000;
pub const DEFAULT_DENSE_CAP: usize = 2_048;

/// Per-sector coefficients `c_n` of the multi-oscillator extension.
#[derive(Clone, Debug, PartialEq)]
pub enum ExtensionWeights {
    /// `c_n = 1/√n`, the choice that keeps `Σ_λ 𝟙_λ = 1`.
    InverseSqrt,
    /// `c_n = 1`.
    Unit,
    /// Explicit `c_1, c_2, …`.
    Custom(Vec<f64>),
}

impl ExtensionWeights {
    pub fn c(&self, n: usize) -> f64 {
        match self {
            ExtensionWeights::InverseSqrt => 1.0 / (n as f64).sqrt(),
            ExtensionWeights::Unit => 1.0,
            ExtensionWeights::Custom(c) => c[n - 1],
        }
    }
}

/// Truncation and mode data for the dense realization.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleConfig {
    pub modes: Vec<ModeLabel>,
    /// Number-basis truncation `D` of a single oscillator.
    pub fock_dim: usize,
    /// Highest oscillator-number sector `N`.
    pub max_oscillators: usize,
    pub weights: ExtensionWeights,
    /// Cap on `Σ_{n≤N} (M·D)^n`.
    pub dim_cap: usize,
    /// Largest sector that may be materialized as a dense matrix.
    pub dense_cap: usize,
}

impl OracleConfig {
    pub fn new(
        modes: Vec<ModeLabel>,
        fock_dim: usize,
        max_oscillators: usize,
    ) -> Result<Self, OracleError> {
        let cfg = OracleConfig {
            modes,
            fock_dim,
            max_oscillators,
            weights: ExtensionWeights::InverseSqrt,
            dim_cap: DEFAULT_DIM_CAP,
            dense_cap: DEFAULT_DENSE_CAP,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Modes `k1..kM` with frequencies `1, 2, …, M`.
    pub fn numbered(
        mode_count: usize,
        fock_dim: usize,
        max_oscillators: usize,
    ) -> Result<Self, OracleError> {
        let modes = (1..=mode_count)
            .map(|i| ModeLabel::new(format!("k{i}"), i as f64))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| OracleError::InvalidConfig(e.to_string()))?;
        OracleConfig::new(modes, fock_dim, max_oscillators)
    }

    pub fn with_weights(mut self, weights: ExtensionWeights) -> Result<Self, OracleError> {
        self.weights = weights;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        if self.modes.is_empty() {
            return Err(OracleError::InvalidConfig("no modes".into()));
        }
        for (i, m) in self.modes.iter().enumerate() {
            if self.modes[..i].iter().any(|o| o.id == m.id) {
                return Err(OracleError::InvalidConfig(format!(
                    "duplicate mode `{}`",
                    m.id
                )));
            }
        }
        if self.fock_dim < 2 {
            return Err(OracleError::InvalidConfig("fock_dim must be ≥ 2".into()));
        }
        if self.max_oscillators < 1 {
            return Err(OracleError::InvalidConfig(
                "max_oscillators must be ≥ 1".into(),
            ));
        }
        if let ExtensionWeights::Custom(c) = &self.weights {
            if c.len() < self.max_oscillators || c.iter().any(|x| !x.is_finite()) {
                return Err(OracleError::InvalidConfig(
                    "custom weights need one finite c_n per sector".into(),
                ));
            }
        }
        match self.total_dim() {
            Some(d) if d <= self.dim_cap => Ok(()),
            Some(d) => Err(OracleError::DimensionCap {
                dim: d,
                cap: self.dim_cap,
            }),
            None => Err(OracleError::DimensionCap {
                dim: usize::MAX,
                cap: self.dim_cap,
            }),
        }
    }

    /// One-oscillator dimension `M·D`.
    pub fn local_dim(&self) -> usize {
        self.modes.len() * self.fock_dim
    }

    /// `(M·D)^n`.
    pub fn sector_dim(&self, n: usize) -> usize {
        self.local_dim().pow(n as u32)
    }

    pub fn total_dim(&self) -> Option<usize> {
        let l = self.local_dim();
        let mut total = 0usize;
        let mut d = 1usize;
        for _ in 0..self.max_oscillators {
            d = d.checked_mul(l)?;
            total = total.checked_add(d)?;
        }
        Some(total)
    }

    pub fn mode_index(&self, id: &ModeId) -> Option<usize> {
        self.modes.iter().position(|m| &m.id == id)
    }

    /// Local basis index of `|λ_m, k⟩`.
    pub fn local_index(&self, mode: usize, level: usize) -> usize {
        mode * self.fock_dim + level
    }

    /// Fock level of every oscillator in a sector-`n` basis state.
    pub fn levels(&self, n: usize, mut index: usize) -> Vec<usize> {
        let l = self.local_dim();
        let mut out = vec![0; n];
        for slot in (0..n).rev() {
            out[slot] = (index % l) % self.fock_dim;
            index /= l;
        }
        out
    }

    pub fn total_excitation(&self, n: usize, index: usize) -> usize {
        self.levels(n, index).iter().sum()
    }

    pub fn from_json(text: &str) -> Result<Self, OracleError> {
        let doc: ConfigDoc = serde_json::from_str(text)
            .map_err(|e| OracleError::InvalidConfig(format!("config file: {e}")))?;
        let modes = doc
            .modes
            .into_iter()
            .map(|m| ModeLabel::new(m.id, m.omega))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| OracleError::InvalidConfig(e.to_string()))?;
        let weights = match doc.weights {
            None => ExtensionWeights::InverseSqrt,
            Some(WeightsDoc::Named(s)) => match s.as_str() {
                "inverse_sqrt" => ExtensionWeights::InverseSqrt,
                "unit" => ExtensionWeights::Unit,
                other => {
                    return Err(OracleError::InvalidConfig(format!(
                        "unknown weights `{other}`"
                    )))
                }
            },
            Some(WeightsDoc::List(c)) => ExtensionWeights::Custom(c),
        };
        let cfg = OracleConfig {
            modes,
            fock_dim: doc.fock_dim,
            max_oscillators: doc.max_oscillators,
            weights,
            dim_cap: doc.dim_cap.unwrap_or(DEFAULT_DIM_CAP),
            dense_cap: doc.dense_cap.unwrap_or(DEFAULT_DENSE_CAP),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct ConfigDoc {
    modes: Vec<ModeDoc>,
    fock_dim: usize,
    max_oscillators: usize,
    #[serde(default)]
    weights: Option<WeightsDoc>,
    #[serde(default)]
    dim_cap: Option<usize>,
    #[serde(default)]
    dense_cap: Option<usize>,
}

#[derive(Deserialize, Serialize)]
struct ModeDoc {
    id: String,
    omega: f64,
}

#[derive(Deserialize, Serialize)]
#[serde(untagged)]
enum WeightsDoc {
    Named(String),
    List(Vec<f64>),
}
