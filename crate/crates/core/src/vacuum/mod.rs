//! Product-form vacua `|𝟘⟩ = ⊕_n √p_n |O⟩^{⊗n}` and their moments.
//!
//! Vacuum expectations of products of the POV measures `𝟙_λ` reduce to
//! counting assignments of operator slots to oscillators: slots that land on
//! the same oscillator must share a mode, and each occupied oscillator
//! contributes `|O_λ|²`.

mod partitions;

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{ModeId, ModeLabel, ModeTable, NormalForm};

pub use partitions::{for_each_set_partition, homogeneous_partition_weights};

pub const NORMALIZATION_TOL: f64 = 1e-12;
pub const DEFAULT_MOMENT_CAP: u32 = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VacuumError {
    #[error("InvalidVacuum: {0}")]
    Invalid(String),
    #[error("UnsupportedVacuum: {0}")]
    Unsupported(String),
    #[error("MomentTooLarge: total power {requested} exceeds cap {cap}")]
    MomentTooLarge { requested: u32, cap: u32 },
}

impl VacuumError {
    pub fn name(&self) -> &'static str {
        match self {
            VacuumError::Invalid(_) => "InvalidVacuum",
            VacuumError::Unsupported(_) => "UnsupportedVacuum",
            VacuumError::MomentTooLarge { .. } => "MomentTooLarge",
        }
    }
}

/// Oscillator-number distribution `p_n` plus single-oscillator ground-state
/// profile `O_λ`. Immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct VacuumSpec {
    p: BTreeMap<u32, f64>,
    profile: BTreeMap<ModeId, Complex64>,
}

impl VacuumSpec {
    /// Validates `Σ p_n = 1`, `p_n ≥ 0`, `n ≥ 1` and `Σ |O_λ|² = 1` (to
    /// 1e-12). With `renormalize` the profile is rescaled instead of rejected.
    pub fn new(
        p: BTreeMap<u32, f64>,
        profile: BTreeMap<ModeId, Complex64>,
        renormalize: bool,
    ) -> Result<Self, VacuumError> {
        if p.is_empty() {
            return Err(VacuumError::Invalid(
                "empty oscillator-number distribution".into(),
            ));
        }
        let mut total = 0.0;
        for (&n, &pn) in &p {
            if n == 0 {
                return Err(VacuumError::Invalid("oscillator numbers start at 1".into()));
            }
            if !(pn.is_finite() && pn >= 0.0) {
                return Err(VacuumError::Invalid(format!(
                    "p_{n} = {pn} is not a probability"
                )));
            }
            total += pn;
        }
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(VacuumError::Invalid(format!("Σ p_n = {total}, expected 1")));
        }
        let p: BTreeMap<u32, f64> = p.into_iter().filter(|&(_, pn)| pn > 0.0).collect();

        if profile.is_empty() {
            return Err(VacuumError::Invalid("empty mode profile".into()));
        }
        if profile
            .values()
            .any(|o| !(o.re.is_finite() && o.im.is_finite()))
        {
            return Err(VacuumError::Invalid("non-finite profile amplitude".into()));
        }
        let norm2: f64 = profile.values().map(|o| o.norm_sqr()).sum();
        let profile = if renormalize {
            if norm2 == 0.0 {
                return Err(VacuumError::Invalid("profile is identically zero".into()));
            }
            let s = norm2.sqrt();
            profile.into_iter().map(|(k, o)| (k, o / s)).collect()
        } else {
            if (norm2 - 1.0).abs() > NORMALIZATION_TOL {
                return Err(VacuumError::Invalid(format!(
                    "Σ |O_λ|² = {norm2}, expected 1"
                )));
            }
            profile
        };
        Ok(VacuumSpec { p, profile })
    }

    pub fn from_pairs<P, Q, S>(p: P, profile: Q, renormalize: bool) -> Result<Self, VacuumError>
    where
        P: IntoIterator<Item = (u32, f64)>,
        Q: IntoIterator<Item = (S, Complex64)>,
        S: Into<ModeId>,
    {
        let profile = profile.into_iter().map(|(k, v)| (k.into(), v)).collect();
        VacuumSpec::new(p.into_iter().collect(), profile, renormalize)
    }

    /// Flat profile `O_λ = 1/√M` over the given modes.
    pub fn flat<P, I, S>(p: P, modes: I) -> Result<Self, VacuumError>
    where
        P: IntoIterator<Item = (u32, f64)>,
        I: IntoIterator<Item = S>,
        S: Into<ModeId>,
    {
        let ids: Vec<ModeId> = modes.into_iter().map(Into::into).collect();
        let c = 1.0 / (ids.len() as f64).sqrt();
        VacuumSpec::from_pairs(
            p,
            ids.into_iter().map(|id| (id, Complex64::new(c, 0.0))),
            true,
        )
    }

    /// Truncated geometric distribution `p_n ∝ ratio^(n-1)` for `n = 1..=n_max`.
    pub fn truncated_geometric(ratio: f64, n_max: u32) -> Result<BTreeMap<u32, f64>, VacuumError> {
        if !(ratio.is_finite() && ratio > 0.0) || n_max == 0 {
            return Err(VacuumError::Invalid(
                "geometric ratio must be positive, n_max ≥ 1".into(),
            ));
        }
        let raw: Vec<f64> = (0..n_max).map(|i| ratio.powi(i as i32)).collect();
        let z: f64 = raw.iter().sum();
        Ok(raw
            .into_iter()
            .enumerate()
            .map(|(i, w)| (i as u32 + 1, w / z))
            .collect())
    }

    pub fn p(&self) -> &BTreeMap<u32, f64> {
        &self.p
    }

    pub fn profile(&self) -> &BTreeMap<ModeId, Complex64> {
        &self.profile
    }

    /// `O_λ`, zero for modes outside the profile.
    pub fn amplitude(&self, mode: &ModeId) -> Complex64 {
        self.profile.get(mode).copied().unwrap_or_default()
    }

    pub fn max_oscillators(&self) -> u32 {
        *self.p.keys().next_back().expect("p is non-empty")
    }

    /// Profile modes as a table (frequencies are placeholders; the algebra
    /// never reads them).
    pub fn mode_table(&self) -> ModeTable {
        let mut t = ModeTable::new();
        for id in self.profile.keys() {
            t.insert(ModeLabel {
                id: id.clone(),
                omega: 1.0,
            })
            .expect("profile ids are unique");
        }
        t
    }

    pub fn from_json(text: &str) -> Result<Self, VacuumError> {
        let doc: VacuumDoc = serde_json::from_str(text)
            .map_err(|e| VacuumError::Invalid(format!("vacuum file: {e}")))?;
        if doc.sectors.is_some() {
            return Err(VacuumError::Unsupported(
                "general (entangled) sector amplitudes; only product-form vacua are supported"
                    .into(),
            ));
        }
        let mut p = BTreeMap::new();
        for (k, v) in doc.p {
            let n: u32 = k.trim().parse().map_err(|_| {
                VacuumError::Invalid(format!("oscillator number `{k}` is not an integer"))
            })?;
            if p.insert(n, v).is_some() {
                return Err(VacuumError::Invalid(format!(
                    "duplicate oscillator number {n}"
                )));
            }
        }
        let mut profile = BTreeMap::new();
        for entry in doc.profile {
            let id = ModeId::from(entry.id);
            if profile
                .insert(id.clone(), Complex64::new(entry.re, entry.im))
                .is_some()
            {
                return Err(VacuumError::Invalid(format!(
                    "duplicate profile mode `{id}`"
                )));
            }
        }
        VacuumSpec::new(p, profile, doc.renormalize)
    }

    pub fn to_json(&self) -> String {
        let doc = VacuumDoc {
            p: self.p.iter().map(|(n, v)| (n.to_string(), *v)).collect(),
            profile: self
                .profile
                .iter()
                .map(|(id, o)| ProfileEntry {
                    id: id.to_string(),
                    re: o.re,
                    im: o.im,
                })
                .collect(),
            renormalize: false,
            sectors: None,
        };
        serde_json::to_string(&doc).expect("vacuum serializes")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VacuumDoc {
    p: BTreeMap<String, f64>,
    profile: Vec<ProfileEntry>,
    #[serde(default)]
    renormalize: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sectors: Option<serde_json::Value>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileEntry {
    id: String,
    re: f64,
    #[serde(default)]
    im: f64,
}

/// A product `𝟙_{λ1}^{k1} 𝟙_{λ2}^{k2} …`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MomentRequest {
    powers: BTreeMap<ModeId, u32>,
}

impl MomentRequest {
    pub fn new<I, S>(powers: I) -> Self
    where
        I: IntoIterator<Item = (S, u32)>,
        S: Into<ModeId>,
    {
        let mut req = MomentRequest::default();
        for (m, k) in powers {
            if k > 0 {
                *req.powers.entry(m.into()).or_insert(0) += k;
            }
        }
        req
    }

    pub fn single(mode: impl Into<ModeId>, power: u32) -> Self {
        MomentRequest::new([(mode, power)])
    }

    pub fn total_power(&self) -> u32 {
        self.powers.values().sum()
    }

    pub fn powers(&self) -> &BTreeMap<ModeId, u32> {
        &self.powers
    }
}

/// `⟨1/n^k⟩ = Σ_n p_n / n^k`.
pub fn inv_n_moment(vac: &VacuumSpec, k: u32) -> f64 {
    vac.p
        .iter()
        .map(|(&n, &pn)| pn / (n as f64).powi(k as i32))
        .sum()
}

/// `⟨𝟘|𝟙_{λ1}…𝟙_{λk}|𝟘⟩` with the default power cap.
pub fn unit_moment(vac: &VacuumSpec, req: &MomentRequest) -> Result<f64, VacuumError> {
    unit_moment_with_cap(vac, req, DEFAULT_MOMENT_CAP)
}

/// Exact moment via set partitions of the `k` operator slots:
///
/// `Σ_n p_n n^{-k} Σ_P [P mode-homogeneous] n(n-1)…(n-|P|+1) Π_blocks |O_λ|²`.
pub fn unit_moment_with_cap(
    vac: &VacuumSpec,
    req: &MomentRequest,
    cap: u32,
) -> Result<f64, VacuumError> {
    let k = req.total_power();
    if k > cap {
        return Err(VacuumError::MomentTooLarge { requested: k, cap });
    }
    let mut slot_modes = Vec::with_capacity(k as usize);
    let mut weights = Vec::with_capacity(req.powers.len());
    for (idx, (mode, &pow)) in req.powers.iter().enumerate() {
        weights.push(vac.amplitude(mode).norm_sqr());
        slot_modes.extend(std::iter::repeat_n(idx, pow as usize));
    }
    let by_blocks = homogeneous_partition_weights(&slot_modes, &weights);
    let mut total = 0.0;
    for (&n, &pn) in &vac.p {
        let nf = n as f64;
        let mut inner = 0.0;
        // n^{(b)} / n^k = Π_{i<b} (n-i)/n · n^{b-k}
        let mut falling = 1.0;
        for (b, &wb) in by_blocks.iter().enumerate() {
            if b > 0 {
                falling *= (nf - (b as f64 - 1.0)) / nf;
            }
            if falling <= 0.0 {
                break;
            }
            if wb != 0.0 {
                inner += wb * falling * nf.powi(b as i32 - k as i32);
            }
        }
        total += pn * inner;
    }
    Ok(total)
}

/// Vacuum expectation of a normal form: only pure-𝟙 terms survive.
pub fn vev(vac: &VacuumSpec, form: &NormalForm) -> Result<Complex64, VacuumError> {
    vev_with_cap(vac, form, DEFAULT_MOMENT_CAP)
}

pub fn vev_with_cap(
    vac: &VacuumSpec,
    form: &NormalForm,
    cap: u32,
) -> Result<Complex64, VacuumError> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (key, coeff) in form.terms() {
        if !key.is_pure_unit() {
            continue;
        }
        let req = MomentRequest::new(key.units.iter().map(|(m, p)| (m.clone(), *p)));
        acc += coeff.to_c64() * unit_moment_with_cap(vac, &req, cap)?;
    }
    Ok(acc)
}

/// `⟨𝟘|𝟙_λ^N|𝟘⟩`, the norm factor of the `N`-photon state in mode `λ`.
pub fn nphoton_norm(vac: &VacuumSpec, mode: &ModeId, n: u32) -> Result<f64, VacuumError> {
    unit_moment(vac, &MomentRequest::single(mode.clone(), n))
}
