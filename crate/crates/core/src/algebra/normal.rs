use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{AlgebraError, Coeff, Generator, GeneratorKind, ModeId, OperatorWord};

/// Default cap on the number of intermediate words produced while ordering.
pub const DEFAULT_TERM_CAP: usize = 1_000_000;

/// Monomial key of a normal-ordered term: 𝟙 powers, then creators, then
/// annihilators. Multisets are kept sorted by mode id.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermKey {
    pub units: Vec<(ModeId, u32)>,
    pub creators: Vec<ModeId>,
    pub annihilators: Vec<ModeId>,
}

impl TermKey {
    pub fn is_pure_unit(&self) -> bool {
        self.creators.is_empty() && self.annihilators.is_empty()
    }

    pub fn imbalance(&self) -> i64 {
        self.creators.len() as i64 - self.annihilators.len() as i64
    }

    /// Total power of the 𝟙 factors.
    pub fn unit_degree(&self) -> u32 {
        self.units.iter().map(|(_, p)| p).sum()
    }

    /// The term written back out as a word: units, creators, annihilators.
    pub fn to_word(&self, coefficient: Coeff) -> OperatorWord {
        let mut factors = Vec::new();
        for (mode, pow) in &self.units {
            for _ in 0..*pow {
                factors.push(Generator::unit(mode.clone()));
            }
        }
        factors.extend(self.creators.iter().cloned().map(Generator::create));
        factors.extend(self.annihilators.iter().cloned().map(Generator::annihilate));
        OperatorWord {
            factors,
            coefficient,
        }
    }
}

/// Canonical normal-ordered polynomial in the non-CCR generators.
///
/// Terms are unique per key and sorted; zero coefficients are dropped.
/// `𝟙_λ` powers are never reduced.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NormalForm {
    terms: BTreeMap<TermKey, Coeff>,
}

impl NormalForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        let mut nf = Self::default();
        nf.add_term(TermKey::default(), Coeff::one());
        nf
    }

    pub fn add_term(&mut self, key: TermKey, coeff: Coeff) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(existing) => {
                *existing += &coeff;
                if existing.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, coeff);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &Coeff)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, key: &TermKey) -> Option<&Coeff> {
        self.terms.get(key)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Each term as a word in normal order.
    pub fn to_words(&self) -> Vec<OperatorWord> {
        self.terms
            .iter()
            .map(|(k, c)| k.to_word(c.clone()))
            .collect()
    }

    pub fn to_json(&self) -> String {
        let doc = NormalFormDoc {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| {
                    let z = c.to_c64();
                    TermDoc {
                        coeff: [z.re, z.im],
                        units: k.units.iter().map(|(m, p)| (m.to_string(), *p)).collect(),
                        creators: k.creators.iter().map(ToString::to_string).collect(),
                        annihilators: k.annihilators.iter().map(ToString::to_string).collect(),
                    }
                })
                .collect(),
        };
        serde_json::to_string(&doc).expect("normal form serializes")
    }

    /// Parses the JSON shape emitted by [`NormalForm::to_json`]. Input terms
    /// are re-canonicalized, so unsorted or duplicated keys are merged.
    pub fn from_json(text: &str) -> Result<Self, AlgebraError> {
        let doc: NormalFormDoc =
            serde_json::from_str(text).map_err(|e| AlgebraError::Json(e.to_string()))?;
        let mut nf = NormalForm::zero();
        for t in doc.terms {
            let mut units: BTreeMap<ModeId, u32> = BTreeMap::new();
            for (m, p) in t.units {
                if p == 0 {
                    return Err(AlgebraError::Json(format!(
                        "unit power for `{m}` must be positive"
                    )));
                }
                *units.entry(ModeId::from(m)).or_default() += p;
            }
            let mut creators: Vec<ModeId> = t.creators.into_iter().map(ModeId::from).collect();
            let mut annihilators: Vec<ModeId> =
                t.annihilators.into_iter().map(ModeId::from).collect();
            creators.sort();
            annihilators.sort();
            let key = TermKey {
                units: units.into_iter().collect(),
                creators,
                annihilators,
            };
            nf.add_term(key, Coeff::from_f64_exact(t.coeff[0], t.coeff[1]));
        }
        Ok(nf)
    }
}

#[derive(Serialize, Deserialize)]
struct NormalFormDoc {
    terms: Vec<TermDoc>,
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    coeff: [f64; 2],
    units: Vec<(String, u32)>,
    creators: Vec<String>,
    annihilators: Vec<String>,
}

/// Rewrite engine for the non-CCR algebra
/// `a_λ a†_μ → a†_μ a_λ + δ_λμ 𝟙_λ`, with every `𝟙_λ` central.
#[derive(Clone, Copy, Debug)]
pub struct NormalOrderer {
    pub term_cap: usize,
}

impl Default for NormalOrderer {
    fn default() -> Self {
        NormalOrderer {
            term_cap: DEFAULT_TERM_CAP,
        }
    }
}

struct Pending {
    coeff: Coeff,
    units: BTreeMap<ModeId, u32>,
    // only Create / Annihilate
    ops: Vec<Generator>,
}

impl NormalOrderer {
    pub fn new(term_cap: usize) -> Self {
        NormalOrderer { term_cap }
    }

    pub fn normal_order(&self, word: &OperatorWord) -> Result<NormalForm, AlgebraError> {
        let mut out = NormalForm::zero();
        self.order_into(word, &mut out)?;
        Ok(out)
    }

    /// Product of two normal forms, brought back to normal order.
    pub fn multiply(&self, lhs: &NormalForm, rhs: &NormalForm) -> Result<NormalForm, AlgebraError> {
        let mut out = NormalForm::zero();
        for (lk, lc) in lhs.terms() {
            for (rk, rc) in rhs.terms() {
                let mut factors = lk.to_word(Coeff::one()).factors;
                factors.extend(rk.to_word(Coeff::one()).factors);
                let word = OperatorWord {
                    factors,
                    coefficient: lc * rc,
                };
                self.order_into(&word, &mut out)?;
            }
        }
        Ok(out)
    }

    /// Normal-orders every term of `form` again; a normal form is a fixed point.
    pub fn normal_order_form(&self, form: &NormalForm) -> Result<NormalForm, AlgebraError> {
        let mut out = NormalForm::zero();
        for word in form.to_words() {
            self.order_into(&word, &mut out)?;
        }
        Ok(out)
    }

    fn order_into(&self, word: &OperatorWord, out: &mut NormalForm) -> Result<(), AlgebraError> {
        if word.coefficient.is_zero() {
            return Ok(());
        }
        let mut units = BTreeMap::new();
        let mut ops = Vec::with_capacity(word.factors.len());
        for g in &word.factors {
            match g.kind {
                GeneratorKind::Unit => *units.entry(g.mode.clone()).or_insert(0) += 1,
                _ => ops.push(g.clone()),
            }
        }
        let mut stack = vec![Pending {
            coeff: word.coefficient.clone(),
            units,
            ops,
        }];
        let mut produced = 1usize;
        while let Some(mut p) = stack.pop() {
            // rightmost adjacent (a, a†) pair
            let hit = (0..p.ops.len().saturating_sub(1)).rev().find(|&i| {
                p.ops[i].kind == GeneratorKind::Annihilate
                    && p.ops[i + 1].kind == GeneratorKind::Create
            });
            let Some(i) = hit else {
                out.add_term(finish_key(p.units, p.ops), p.coeff);
                continue;
            };
            if p.ops[i].mode == p.ops[i + 1].mode {
                let mut contracted = p.ops.clone();
                let mode = contracted.remove(i).mode;
                contracted.remove(i);
                let mut units = p.units.clone();
                *units.entry(mode).or_insert(0) += 1;
                stack.push(Pending {
                    coeff: p.coeff.clone(),
                    units,
                    ops: contracted,
                });
                produced += 1;
            }
            p.ops.swap(i, i + 1);
            stack.push(p);
            produced += 1;
            if produced > self.term_cap || stack.len() + out.len() > self.term_cap {
                return Err(AlgebraError::TermExplosion { cap: self.term_cap });
            }
        }
        if out.len() > self.term_cap {
            return Err(AlgebraError::TermExplosion { cap: self.term_cap });
        }
        Ok(())
    }
}

fn finish_key(units: BTreeMap<ModeId, u32>, ops: Vec<Generator>) -> TermKey {
    let mut creators = Vec::new();
    let mut annihilators = Vec::new();
    for g in ops {
        match g.kind {
            GeneratorKind::Create => creators.push(g.mode),
            GeneratorKind::Annihilate => annihilators.push(g.mode),
            GeneratorKind::Unit => unreachable!("units are stripped before ordering"),
        }
    }
    creators.sort();
    annihilators.sort();
    TermKey {
        units: units.into_iter().collect(),
        creators,
        annihilators,
    }
}

/// Normal order with the default term cap.
pub fn normal_order(word: &OperatorWord) -> Result<NormalForm, AlgebraError> {
    NormalOrderer::default().normal_order(word)
}

/// Product of two normal forms with the default term cap.
pub fn multiply(lhs: &NormalForm, rhs: &NormalForm) -> Result<NormalForm, AlgebraError> {
    NormalOrderer::default().multiply(lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_word_untyped as parse;

    fn nf(text: &str) -> NormalForm {
        normal_order(&parse(text).unwrap()).unwrap()
    }

    fn key(units: &[(&str, u32)], creators: &[&str], annihilators: &[&str]) -> TermKey {
        TermKey {
            units: units.iter().map(|(m, p)| (ModeId::from(*m), *p)).collect(),
            creators: creators.iter().map(|m| ModeId::from(*m)).collect(),
            annihilators: annihilators.iter().map(|m| ModeId::from(*m)).collect(),
        }
    }

    #[test]
    fn single_contraction_gives_unit() {
        let f = nf("a(k1) ad(k1)");
        assert_eq!(f.len(), 2);
        assert_eq!(
            f.coefficient(&key(&[], &["k1"], &["k1"])),
            Some(&Coeff::one())
        );
        assert_eq!(
            f.coefficient(&key(&[("k1", 1)], &[], &[])),
            Some(&Coeff::one())
        );
    }

    #[test]
    fn distinct_modes_commute() {
        let f = nf("a(k1) ad(k2)");
        assert_eq!(f.len(), 1);
        assert_eq!(
            f.coefficient(&key(&[], &["k2"], &["k1"])),
            Some(&Coeff::one())
        );
    }

    #[test]
    fn already_normal() {
        let f = nf("ad(k1) a(k1)");
        assert_eq!(f.len(), 1);
        assert_eq!(
            f.coefficient(&key(&[], &["k1"], &["k1"])),
            Some(&Coeff::one())
        );
    }

    #[test]
    fn double_pair() {
        let f = nf("a(k1) a(k1) ad(k1) ad(k1)");
        assert_eq!(f.len(), 3);
        assert_eq!(
            f.coefficient(&key(&[], &["k1", "k1"], &["k1", "k1"])),
            Some(&Coeff::one())
        );
        assert_eq!(
            f.coefficient(&key(&[("k1", 1)], &["k1"], &["k1"])),
            Some(&Coeff::from_int(4))
        );
        assert_eq!(
            f.coefficient(&key(&[("k1", 2)], &[], &[])),
            Some(&Coeff::from_int(2))
        );
    }

    #[test]
    fn units_are_central_and_not_reduced() {
        let f = nf("one(k1) a(k1) one(k1)");
        assert_eq!(f.len(), 1);
        assert_eq!(
            f.coefficient(&key(&[("k1", 2)], &[], &["k1"])),
            Some(&Coeff::one())
        );
    }

    #[test]
    fn multiply_examples() {
        let unit = nf("one(k1)");
        let a = nf("a(k1)");
        assert_eq!(multiply(&unit, &a).unwrap(), nf("one(k1) a(k1)"));
        assert_eq!(multiply(&a, &NormalForm::identity()).unwrap(), a);
        assert_eq!(multiply(&a, &nf("ad(k1)")).unwrap(), nf("a(k1) ad(k1)"));
    }

    #[test]
    fn term_explosion_is_reported() {
        let w = parse("a(k) a(k) a(k) a(k) ad(k) ad(k) ad(k) ad(k)").unwrap();
        let err = NormalOrderer::new(10).normal_order(&w).unwrap_err();
        assert!(matches!(err, AlgebraError::TermExplosion { cap: 10 }));
    }

    #[test]
    fn json_roundtrip_is_byte_identical() {
        let f = nf("a(k2) a(k1) ad(k1) ad(k2) one(k1)");
        let text = f.to_json();
        let back = NormalForm::from_json(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn json_shape() {
        let text = nf("a(k1) ad(k1)").to_json();
        assert_eq!(
            text,
            r#"{"terms":[{"coeff":[1.0,0.0],"units":[],"creators":["k1"],"annihilators":["k1"]},{"coeff":[1.0,0.0],"units":[["k1",1]],"creators":[],"annihilators":[]}]}"#
        );
    }
}
