use std::fmt;

use super::{AlgebraError, Coeff, ModeId, ModeTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GeneratorKind {
    Annihilate,
    Create,
    /// The central element 𝟙_λ on the right-hand side of [a_λ, a†_λ].
    Unit,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub kind: GeneratorKind,
    pub mode: ModeId,
}

impl Generator {
    pub fn annihilate(mode: impl Into<ModeId>) -> Self {
        Generator {
            kind: GeneratorKind::Annihilate,
            mode: mode.into(),
        }
    }

    pub fn create(mode: impl Into<ModeId>) -> Self {
        Generator {
            kind: GeneratorKind::Create,
            mode: mode.into(),
        }
    }

    pub fn unit(mode: impl Into<ModeId>) -> Self {
        Generator {
            kind: GeneratorKind::Unit,
            mode: mode.into(),
        }
    }

    pub fn adjoint(&self) -> Self {
        let kind = match self.kind {
            GeneratorKind::Annihilate => GeneratorKind::Create,
            GeneratorKind::Create => GeneratorKind::Annihilate,
            GeneratorKind::Unit => GeneratorKind::Unit,
        };
        Generator {
            kind,
            mode: self.mode.clone(),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head = match self.kind {
            GeneratorKind::Annihilate => "a",
            GeneratorKind::Create => "ad",
            GeneratorKind::Unit => "one",
        };
        write!(f, "{head}({})", self.mode)
    }
}

/// An ordered product of generators times a scalar. The empty product is the
/// identity operator.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorWord {
    pub factors: Vec<Generator>,
    pub coefficient: Coeff,
}

impl OperatorWord {
    pub fn identity() -> Self {
        OperatorWord {
            factors: Vec::new(),
            coefficient: Coeff::one(),
        }
    }

    pub fn new(factors: Vec<Generator>) -> Self {
        OperatorWord {
            factors,
            coefficient: Coeff::one(),
        }
    }

    pub fn with_coefficient(mut self, coefficient: Coeff) -> Self {
        self.coefficient = coefficient;
        self
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// #creators − #annihilators.
    pub fn imbalance(&self) -> i64 {
        self.factors
            .iter()
            .map(|g| match g.kind {
                GeneratorKind::Create => 1,
                GeneratorKind::Annihilate => -1,
                GeneratorKind::Unit => 0,
            })
            .sum()
    }

    /// Hermitian adjoint (factors reversed and conjugated).
    pub fn adjoint(&self) -> Self {
        let coefficient = match &self.coefficient {
            Coeff::Exact(z) => Coeff::Exact(z.conj()),
            Coeff::Float(z) => Coeff::Float(z.conj()),
        };
        OperatorWord {
            factors: self.factors.iter().rev().map(Generator::adjoint).collect(),
            coefficient,
        }
    }
}

impl fmt::Display for OperatorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficient != Coeff::one() {
            write!(f, "{} ", self.coefficient)?;
        }
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, g) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Parses `a(id)`, `ad(id)` and `one(id)` items, whitespace-separated or
/// adjacent, into a word with coefficient 1. Every id must be in `table`.
pub fn parse_word(text: &str, table: &ModeTable) -> Result<OperatorWord, AlgebraError> {
    parse_with(text, |id, offset| {
        let mode = ModeId::from(id);
        if table.contains(&mode) {
            Ok(mode)
        } else {
            Err(AlgebraError::UnknownMode {
                id: id.to_owned(),
                offset,
            })
        }
    })
}

/// Parses without a mode table; every syntactically valid id is accepted.
pub fn parse_word_untyped(text: &str) -> Result<OperatorWord, AlgebraError> {
    parse_with(text, |id, _| Ok(ModeId::from(id)))
}

/// Distinct mode ids referenced by `text`, in order of first appearance.
pub fn referenced_modes(text: &str) -> Result<Vec<ModeId>, AlgebraError> {
    let word = parse_word_untyped(text)?;
    let mut seen = Vec::new();
    for g in word.factors {
        if !seen.contains(&g.mode) {
            seen.push(g.mode);
        }
    }
    Ok(seen)
}

fn parse_with<F>(text: &str, mut resolve: F) -> Result<OperatorWord, AlgebraError>
where
    F: FnMut(&str, usize) -> Result<ModeId, AlgebraError>,
{
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut factors = Vec::new();
    loop {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos == bytes.len() {
            break;
        }
        let rest = &text[pos..];
        let (kind, head_len) = if rest.starts_with("ad(") {
            (GeneratorKind::Create, 3)
        } else if rest.starts_with("a(") {
            (GeneratorKind::Annihilate, 2)
        } else if rest.starts_with("one(") {
            (GeneratorKind::Unit, 4)
        } else {
            return Err(AlgebraError::Parse {
                offset: pos,
                message: "expected `a(`, `ad(` or `one(`".into(),
            });
        };
        let id_start = pos + head_len;
        let close = match text[id_start..].find(')') {
            Some(rel) => id_start + rel,
            None => {
                return Err(AlgebraError::Parse {
                    offset: text.len(),
                    message: "unterminated item, expected `)`".into(),
                })
            }
        };
        let id = &text[id_start..close];
        if id.is_empty() {
            return Err(AlgebraError::Parse {
                offset: id_start,
                message: "empty mode id".into(),
            });
        }
        if let Some(bad) = id.find(|c: char| c.is_whitespace() || c == '(') {
            return Err(AlgebraError::Parse {
                offset: id_start + bad,
                message: "invalid character in mode id".into(),
            });
        }
        let mode = resolve(id, id_start)?;
        factors.push(Generator { kind, mode });
        pos = close + 1;
    }
    if factors.is_empty() {
        return Err(AlgebraError::Parse {
            offset: 0,
            message: "empty operator word".into(),
        });
    }
    Ok(OperatorWord::new(factors))
}
