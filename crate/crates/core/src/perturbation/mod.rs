//! Canonical vs non-canonical vacuum expectations and the multiplicative
//! X-factors they induce on perturbative amplitudes.
//!
//! Both theories share the same normal-ordering rules; they differ only in
//! how the central `𝟙_λ` is evaluated on the vacuum. The canonical theory
//! sets `𝟙_λ = 1`; the non-canonical one uses the POV-measure moments of a
//! product-form vacuum.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::algebra::{
    normal_order, AlgebraError, Coeff, Generator, GeneratorKind, ModeId, ModeTable, NormalForm,
    OperatorWord,
};
use crate::vacuum::{self, for_each_set_partition, MomentRequest, VacuumError, VacuumSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PerturbationError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Vacuum(#[from] VacuumError),
    #[error("ZeroDenominator: ⟨𝟙_{mode}^{power}⟩ vanishes")]
    ZeroDenominator { mode: ModeId, power: u32 },
    #[error("InvalidProcess: {0}")]
    InvalidProcess(String),
    #[error("InvalidFlatVacuum: {0}")]
    InvalidFlatVacuum(String),
}

impl PerturbationError {
    pub fn name(&self) -> &'static str {
        match self {
            PerturbationError::Algebra(e) => e.name(),
            PerturbationError::Vacuum(e) => e.name(),
            PerturbationError::ZeroDenominator { .. } => "ZeroDenominator",
            PerturbationError::InvalidProcess(_) => "InvalidProcess",
            PerturbationError::InvalidFlatVacuum(_) => "InvalidFlatVacuum",
        }
    }
}

/// Exact canonical (CCR) vacuum value of a normal form: every `𝟙_λ` is
/// replaced by the scalar 1 and only pure-unit terms survive.
pub fn canonical_vev_exact(form: &NormalForm) -> Coeff {
    let mut acc = Coeff::zero();
    for (key, coeff) in form.terms() {
        if key.is_pure_unit() {
            acc += coeff;
        }
    }
    acc
}

pub fn canonical_vev(form: &NormalForm) -> Complex64 {
    canonical_vev_exact(form).to_c64()
}

pub fn canonical_vev_word(word: &OperatorWord) -> Result<Complex64, AlgebraError> {
    Ok(canonical_vev(&normal_order(word)?))
}

/// Ratio of non-canonical to canonical value; `Undefined` when the canonical
/// value vanishes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum XRatio {
    Defined(Complex64),
    Undefined,
}

impl XRatio {
    pub fn value(&self) -> Option<Complex64> {
        match self {
            XRatio::Defined(z) => Some(*z),
            XRatio::Undefined => None,
        }
    }
}

impl Serialize for XRatio {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.value().serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct XFactorReport {
    pub canonical: Complex64,
    pub noncanonical: Complex64,
    pub ratio: XRatio,
    pub vanishing: bool,
}

pub fn xfactor(vac: &VacuumSpec, word: &OperatorWord) -> Result<XFactorReport, PerturbationError> {
    let form = normal_order(word)?;
    xfactor_form(vac, &form)
}

pub fn xfactor_form(
    vac: &VacuumSpec,
    form: &NormalForm,
) -> Result<XFactorReport, PerturbationError> {
    let canonical = canonical_vev_exact(form);
    let noncanonical = vacuum::vev(vac, form)?;
    let vanishing = canonical.is_zero();
    let canonical = canonical.to_c64();
    let ratio = if vanishing {
        XRatio::Undefined
    } else {
        XRatio::Defined(noncanonical / canonical)
    };
    Ok(XFactorReport {
        canonical,
        noncanonical,
        ratio,
        vanishing,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProcessKind {
    /// Spontaneous emission of `n` identical photons in mode `mode`.
    NPhotonSame { mode: ModeId, n: u32 },
    /// Spontaneous emission of one photon in each of two different modes.
    TwoDifferent { mode: ModeId, other: ModeId },
    /// `|N_λ⟩ → |(N+1)_λ⟩`, first order.
    Stimulated { mode: ModeId, n: u32 },
}

/// Field-side factor multiplying the canonical amplitude of `process`.
pub fn emission_factor(vac: &VacuumSpec, process: &ProcessKind) -> Result<f64, PerturbationError> {
    match process {
        ProcessKind::NPhotonSame { mode, n } => {
            if *n == 0 {
                return Err(PerturbationError::InvalidProcess(
                    "photon number must be ≥ 1".into(),
                ));
            }
            Ok(vacuum::nphoton_norm(vac, mode, *n)?.sqrt())
        }
        ProcessKind::TwoDifferent { mode, other } => {
            if mode == other {
                return Err(PerturbationError::InvalidProcess(
                    "two-photon emission needs two different modes".into(),
                ));
            }
            let req = MomentRequest::new([(mode.clone(), 1), (other.clone(), 1)]);
            Ok(vacuum::unit_moment(vac, &req)?.sqrt())
        }
        ProcessKind::Stimulated { mode, n } => {
            let den = vacuum::nphoton_norm(vac, mode, *n)?;
            let num = vacuum::nphoton_norm(vac, mode, n + 1)?;
            if den <= 0.0 {
                return Err(PerturbationError::ZeroDenominator {
                    mode: mode.clone(),
                    power: *n,
                });
            }
            Ok((num / den).sqrt())
        }
    }
}

/// One nonvanishing term of the spontaneous-decay expansion.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayTerm {
    /// Operator family (`01`, `0101`, `0011`; 0 = annihilator, 1 = creator).
    pub family: String,
    /// Placeholder pattern, e.g. `X0101_{λλλ'λ'}`.
    pub pattern: String,
    /// Concrete modes substituted for the placeholders, left to right.
    pub modes: Vec<ModeId>,
    pub word: String,
    pub report: XFactorReport,
}

const PLACEHOLDERS: [&str; 4] = ["λ", "λ'", "λ''", "λ'''"];

/// X-factors attached to each nonvanishing term at perturbative order 2 or 4.
///
/// Mode patterns are enumerated over placeholders (one per block of a set
/// partition of the operator positions); classes whose canonical value
/// vanishes are dropped, and each surviving class is instantiated with every
/// injective assignment of profile modes.
pub fn decay_series_factors(
    vac: &VacuumSpec,
    order: u32,
) -> Result<Vec<DecayTerm>, PerturbationError> {
    use GeneratorKind::{Annihilate as A, Create as C};
    let families: Vec<(&str, Vec<GeneratorKind>)> = match order {
        2 => vec![("01", vec![A, C])],
        4 => vec![("0101", vec![A, C, A, C]), ("0011", vec![A, A, C, C])],
        _ => {
            return Err(PerturbationError::InvalidProcess(format!(
                "order must be 2 or 4, got {order}"
            )))
        }
    };
    let modes: Vec<ModeId> = vac.profile().keys().cloned().collect();
    let mut out = Vec::new();
    for (family, kinds) in families {
        let mut classes: Vec<(Vec<usize>, usize)> = Vec::new();
        for_each_set_partition(kinds.len(), |rgs, blocks| {
            classes.push((rgs.to_vec(), blocks))
        });
        for (rgs, blocks) in classes {
            let placeholder_word = build_word(&kinds, &rgs, |b| ModeId::from(PLACEHOLDERS[b]));
            if canonical_vev_exact(&normal_order(&placeholder_word)?).is_zero() {
                continue;
            }
            let pattern = format!(
                "X{family}_{{{}}}",
                rgs.iter().map(|&b| PLACEHOLDERS[b]).collect::<String>()
            );
            for assignment in injective_assignments(modes.len(), blocks) {
                let word = build_word(&kinds, &rgs, |b| modes[assignment[b]].clone());
                let report = xfactor(vac, &word)?;
                out.push(DecayTerm {
                    family: family.to_owned(),
                    pattern: pattern.clone(),
                    modes: assignment.iter().map(|&i| modes[i].clone()).collect(),
                    word: word.to_string(),
                    report,
                });
            }
        }
    }
    Ok(out)
}

fn build_word<F: Fn(usize) -> ModeId>(
    kinds: &[GeneratorKind],
    rgs: &[usize],
    mode: F,
) -> OperatorWord {
    OperatorWord::new(
        kinds
            .iter()
            .zip(rgs)
            .map(|(&kind, &b)| Generator {
                kind,
                mode: mode(b),
            })
            .collect(),
    )
}

fn injective_assignments(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !cur.contains(&i) {
                cur.push(i);
                go(n, k, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Constant vacuum amplitude `C` on the `M` modes below `omega_max`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FlatVacuum {
    pub c: f64,
    pub mode_count: usize,
    pub omega_max: f64,
}

impl FlatVacuum {
    pub fn new(mode_count: usize, omega_max: f64) -> Result<Self, PerturbationError> {
        if mode_count == 0 {
            return Err(PerturbationError::InvalidFlatVacuum(
                "no modes below the cutoff".into(),
            ));
        }
        let c = 1.0 / (mode_count as f64).sqrt();
        FlatVacuum::with_amplitude(c, mode_count, omega_max)
    }

    /// Checks `C ∈ (0, 1]` and `C² M = 1` to 1e-12.
    pub fn with_amplitude(
        c: f64,
        mode_count: usize,
        omega_max: f64,
    ) -> Result<Self, PerturbationError> {
        if !(c > 0.0 && c <= 1.0) {
            return Err(PerturbationError::InvalidFlatVacuum(format!(
                "C = {c} outside (0, 1]"
            )));
        }
        if !(omega_max.is_finite() && omega_max > 0.0) {
            return Err(PerturbationError::InvalidFlatVacuum(
                "cutoff must be positive".into(),
            ));
        }
        if (c * c * mode_count as f64 - 1.0).abs() > 1e-12 {
            return Err(PerturbationError::InvalidFlatVacuum(format!(
                "C²·M = {} ≠ 1",
                c * c * mode_count as f64
            )));
        }
        Ok(FlatVacuum {
            c,
            mode_count,
            omega_max,
        })
    }

    /// Counts the in-band modes (`ω < ω_max`) of `table`.
    pub fn from_table(table: &ModeTable, omega_max: f64) -> Result<Self, PerturbationError> {
        FlatVacuum::new(
            table.iter().filter(|m| m.omega < omega_max).count(),
            omega_max,
        )
    }

    /// Product vacuum with `O_λ = C` in band and `0` above the cutoff.
    pub fn vacuum<P>(&self, table: &ModeTable, p: P) -> Result<VacuumSpec, PerturbationError>
    where
        P: IntoIterator<Item = (u32, f64)>,
    {
        let in_band = table.iter().filter(|m| m.omega < self.omega_max).count();
        if in_band != self.mode_count {
            return Err(PerturbationError::InvalidFlatVacuum(format!(
                "table has {in_band} modes below the cutoff, expected {}",
                self.mode_count
            )));
        }
        let profile: BTreeMap<ModeId, Complex64> = table
            .iter()
            .map(|m| {
                let o = if m.omega < self.omega_max {
                    self.c
                } else {
                    0.0
                };
                (m.id.clone(), Complex64::new(o, 0.0))
            })
            .collect();
        Ok(VacuumSpec::new(p.into_iter().collect(), profile, false)?)
    }
}

/// Experimental coupling from the bare one: `e_ex/m_ex = C · e/m`.
pub fn renormalize_coupling(flat: &FlatVacuum, bare_e_over_m: f64) -> f64 {
    flat.c * bare_e_over_m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_word_untyped as parse;

    fn vac() -> VacuumSpec {
        VacuumSpec::from_pairs(
            [(1, 0.3), (2, 0.7)],
            [
                ("k1", Complex64::new(0.6, 0.0)),
                ("k2", Complex64::new(0.0, 0.8)),
            ],
            false,
        )
        .unwrap()
    }

    #[test]
    fn canonical_values() {
        assert_eq!(
            canonical_vev_word(&parse("a(k1) ad(k1)").unwrap())
                .unwrap()
                .re,
            1.0
        );
        assert_eq!(
            canonical_vev_word(&parse("ad(k1) a(k1)").unwrap())
                .unwrap()
                .re,
            0.0
        );
        assert_eq!(
            canonical_vev_word(&parse("a(k1) a(k1) ad(k1) ad(k1)").unwrap())
                .unwrap()
                .re,
            2.0
        );
    }

    #[test]
    fn xfactor_examples() {
        let v = vac();
        let inv = vacuum::inv_n_moment(&v, 1);
        let r = xfactor(&v, &parse("a(k1) ad(k1)").unwrap()).unwrap();
        assert!((r.ratio.value().unwrap().re - 0.36).abs() < 1e-15);
        assert!(!r.vanishing);
        let want = (1.0 - inv) * 0.36 * 0.64;
        for w in ["a(k1) ad(k1) a(k2) ad(k2)", "a(k1) a(k2) ad(k1) ad(k2)"] {
            let r = xfactor(&v, &parse(w).unwrap()).unwrap();
            assert!((r.ratio.value().unwrap().re - want).abs() < 1e-15, "{w}");
        }
        let r = xfactor(&v, &parse("ad(k1)").unwrap()).unwrap();
        assert_eq!(r.ratio, XRatio::Undefined);
        assert!(r.vanishing);
        assert_eq!(r.noncanonical, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn undefined_ratio_serializes_as_null() {
        let r = xfactor(&vac(), &parse("ad(k1)").unwrap()).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"ratio\":null"), "{json}");
    }

    #[test]
    fn stimulated_projector_case_and_zero_denominator() {
        let v = VacuumSpec::from_pairs(
            [(1, 1.0)],
            [
                ("k1", Complex64::new(1.0, 0.0)),
                ("k2", Complex64::new(0.0, 0.0)),
            ],
            false,
        )
        .unwrap();
        for n in 1..=3 {
            let f = emission_factor(
                &v,
                &ProcessKind::Stimulated {
                    mode: "k1".into(),
                    n,
                },
            )
            .unwrap();
            assert!((f - 1.0).abs() < 1e-15);
        }
        let err = emission_factor(
            &v,
            &ProcessKind::Stimulated {
                mode: "k2".into(),
                n: 2,
            },
        )
        .unwrap_err();
        assert_eq!(err.name(), "ZeroDenominator");
    }

    #[test]
    fn decay_series_order_two_and_four() {
        let v = vac();
        let two = decay_series_factors(&v, 2).unwrap();
        assert_eq!(two.len(), 2);
        assert!(two.iter().all(|t| t.pattern == "X01_{λλ}"));

        let four = decay_series_factors(&v, 4).unwrap();
        let patterns: std::collections::BTreeSet<_> =
            four.iter().map(|t| t.pattern.as_str()).collect();
        let want: std::collections::BTreeSet<_> = [
            "X0101_{λλλλ}",
            "X0101_{λλλ'λ'}",
            "X0011_{λλλλ}",
            "X0011_{λλ'λλ'}",
            "X0011_{λλ'λ'λ}",
        ]
        .into_iter()
        .collect();
        assert_eq!(patterns, want);
        assert!(decay_series_factors(&v, 3).is_err());
    }

    #[test]
    fn coupling_renormalization() {
        let flat = FlatVacuum::with_amplitude(0.1, 100, 1.0).unwrap();
        assert!((renormalize_coupling(&flat, 1.0) - 0.1).abs() < 1e-15);
        let single = FlatVacuum::new(1, 1.0).unwrap();
        assert_eq!(renormalize_coupling(&single, 3.5), 3.5);
        let m = 7;
        let f = FlatVacuum::new(m, 1.0).unwrap();
        assert!((renormalize_coupling(&f, (m as f64).sqrt()) - 1.0).abs() < 1e-15);
        assert!(FlatVacuum::with_amplitude(0.5, 3, 1.0).is_err());
    }

    #[test]
    fn flat_vacuum_cuts_off_high_modes() {
        let table = ModeTable::from_pairs([("k1", 0.5), ("k2", 0.9), ("k3", 2.0)]).unwrap();
        let flat = FlatVacuum::from_table(&table, 1.0).unwrap();
        assert_eq!(flat.mode_count, 2);
        let v = flat.vacuum(&table, [(5, 1.0)]).unwrap();
        assert_eq!(v.amplitude(&"k3".into()), Complex64::new(0.0, 0.0));
        assert!((v.amplitude(&"k1".into()).re - 0.5f64.sqrt()).abs() < 1e-15);
    }
}
