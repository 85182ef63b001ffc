use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::AlgebraError;

/// Opaque mode identifier. Polarization and wave vector are folded into the
/// token; the algebra never looks inside it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ModeId(String);

impl ModeId {
    pub fn new(id: impl Into<String>) -> Self {
        ModeId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ModeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ModeId {
    fn from(s: &str) -> Self {
        ModeId(s.to_owned())
    }
}

impl From<String> for ModeId {
    fn from(s: String) -> Self {
        ModeId(s)
    }
}

/// A field mode λ together with its angular frequency (natural units).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeLabel {
    pub id: ModeId,
    pub omega: f64,
}

impl ModeLabel {
    pub fn new(id: impl Into<ModeId>, omega: f64) -> Result<Self, AlgebraError> {
        let id = id.into();
        if !(omega.is_finite() && omega > 0.0) {
            return Err(AlgebraError::InvalidMode {
                id: id.to_string(),
                reason: format!("frequency must be positive and finite, got {omega}"),
            });
        }
        if id.as_str().is_empty() {
            return Err(AlgebraError::InvalidMode {
                id: String::new(),
                reason: "empty mode id".into(),
            });
        }
        Ok(ModeLabel { id, omega })
    }
}

/// The set of modes an expression may refer to, keyed by id.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ModeTable {
    modes: BTreeMap<ModeId, ModeLabel>,
}

impl ModeTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a table from `(id, omega)` pairs, rejecting duplicates.
    pub fn from_pairs<I, S>(pairs: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<ModeId>,
    {
        let mut table = ModeTable::new();
        for (id, omega) in pairs {
            table.insert(ModeLabel::new(id, omega)?)?;
        }
        Ok(table)
    }

    pub fn insert(&mut self, mode: ModeLabel) -> Result<(), AlgebraError> {
        if self.modes.contains_key(&mode.id) {
            return Err(AlgebraError::InvalidMode {
                id: mode.id.to_string(),
                reason: "duplicate mode id".into(),
            });
        }
        self.modes.insert(mode.id.clone(), mode);
        Ok(())
    }

    pub fn get(&self, id: &str) -> Option<&ModeLabel> {
        self.modes.get(&ModeId::from(id))
    }

    pub fn contains(&self, id: &ModeId) -> bool {
        self.modes.contains_key(id)
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Modes in lexicographic id order.
    pub fn iter(&self) -> impl Iterator<Item = &ModeLabel> {
        self.modes.values()
    }
}
