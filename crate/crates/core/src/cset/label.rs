//! Security labels and label universes.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::CSetError;

/// A security level. Names are non-empty tokens over letters, digits and `_`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(Arc<str>);

impl Label {
    pub fn new(name: &str) -> Result<Self, CSetError> {
        if is_token(name) {
            Ok(Label(Arc::from(name)))
        } else {
            Err(CSetError::InvalidLabel(name.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_token(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Label::new(&s).map_err(serde::de::Error::custom)
    }
}

/// A finite set of labels, iterated in lexicographic order.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelUniverse {
    labels: Vec<Label>,
}

impl LabelUniverse {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a universe from label names, rejecting malformed or repeated names.
    pub fn new<'a>(names: impl IntoIterator<Item = &'a str>) -> Result<Self, CSetError> {
        let mut seen = BTreeSet::new();
        for name in names {
            let label = Label::new(name)?;
            if !seen.insert(label.clone()) {
                return Err(CSetError::DuplicateLabel(label));
            }
        }
        Ok(LabelUniverse {
            labels: seen.into_iter().collect(),
        })
    }

    pub fn from_labels(labels: impl IntoIterator<Item = Label>) -> Self {
        let set: BTreeSet<Label> = labels.into_iter().collect();
        LabelUniverse {
            labels: set.into_iter().collect(),
        }
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn contains(&self, label: &Label) -> bool {
        self.position(label).is_some()
    }

    pub fn position(&self, label: &Label) -> Option<usize> {
        self.labels.binary_search(label).ok()
    }

    pub fn label_set(&self) -> BTreeSet<Label> {
        self.labels.iter().cloned().collect()
    }

    pub fn is_subset(&self, other: &LabelUniverse) -> bool {
        self.labels.iter().all(|l| other.contains(l))
    }

    pub fn union(&self, other: &LabelUniverse) -> LabelUniverse {
        Self::from_labels(self.labels.iter().chain(other.labels.iter()).cloned())
    }

    pub fn intersection(&self, other: &LabelUniverse) -> LabelUniverse {
        Self::from_labels(self.labels.iter().filter(|l| other.contains(l)).cloned())
    }

    pub fn difference(&self, other: &LabelUniverse) -> LabelUniverse {
        Self::from_labels(self.labels.iter().filter(|l| !other.contains(l)).cloned())
    }

    /// All subsets, ordered by bitmask over the canonical label order.
    pub fn subsets(&self) -> Vec<LabelUniverse> {
        let n = self.labels.len();
        (0..1usize << n)
            .map(|mask| {
                Self::from_labels(
                    (0..n)
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| self.labels[i].clone()),
                )
            })
            .collect()
    }
}

impl fmt::Debug for LabelUniverse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.labels.iter()).finish()
    }
}

impl fmt::Display for LabelUniverse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, l) in self.labels.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}
