use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cset::{CSetError, Label, LabelUniverse};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("order has a cycle through {0} and {1}")]
    CycleViolatesAntisymmetry(Label, Label),
    #[error("unknown label {0}")]
    UnknownLabel(String),
    #[error("a poset needs at least one label")]
    NoLabels,
    #[error(transparent)]
    Label(#[from] CSetError),
    #[error("bad poset file: {0}")]
    Json(String),
}

/// Labels under a partial order, stored as its reflexive-transitive closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecurityPoset {
    labels: LabelUniverse,
    /// `leq[i * n + j]` iff `labels[i] ⊑ labels[j]`.
    leq: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PosetFile {
    labels: Vec<String>,
    #[serde(default)]
    order: Vec<(String, String)>,
}

impl SecurityPoset {
    /// Closes the generator pairs `(lower, higher)` under reflexivity and
    /// transitivity, then rejects cycles.
    pub fn load(labels: &[&str], order: &[(&str, &str)]) -> Result<Self, PosetError> {
        if labels.is_empty() {
            return Err(PosetError::NoLabels);
        }
        let universe = LabelUniverse::new(labels.iter().copied())?;
        let n = universe.len();
        let idx = |s: &str| -> Result<usize, PosetError> {
            Label::new(s)
                .ok()
                .and_then(|l| universe.position(&l))
                .ok_or_else(|| PosetError::UnknownLabel(s.to_string()))
        };
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for (a, b) in order {
            let (i, j) = (idx(a)?, idx(b)?);
            leq[i * n + j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if leq[i * n + k] && leq[k * n + j] {
                        leq[i * n + j] = true;
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if leq[i * n + j] && leq[j * n + i] {
                    let ls = universe.labels();
                    return Err(PosetError::CycleViolatesAntisymmetry(
                        ls[i].clone(),
                        ls[j].clone(),
                    ));
                }
            }
        }
        Ok(SecurityPoset {
            labels: universe,
            leq,
        })
    }

    /// Parses `{"labels": [...], "order": [[lower, higher], ...]}`.
    pub fn from_json(text: &str) -> Result<Self, PosetError> {
        let f: PosetFile =
            serde_json::from_str(text).map_err(|e| PosetError::Json(e.to_string()))?;
        let labels: Vec<&str> = f.labels.iter().map(String::as_str).collect();
        let order: Vec<(&str, &str)> = f
            .order
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        Self::load(&labels, &order)
    }

    /// The two-point chain `L ⊑ H`.
    pub fn low_high() -> Self {
        Self::load(&["L", "H"], &[("L", "H")]).expect("valid chain")
    }

    pub fn universe(&self) -> &LabelUniverse {
        &self.labels
    }

    pub fn contains(&self, l: &Label) -> bool {
        self.labels.contains(l)
    }

    pub fn leq(&self, a: &Label, b: &Label) -> bool {
        match (self.labels.position(a), self.labels.position(b)) {
            (Some(i), Some(j)) => self.leq[i * self.labels.len() + j],
            _ => false,
        }
    }

    /// `↓l = {l' | l' ⊑ l}`.
    pub fn down_set(&self, l: &Label) -> Result<LabelUniverse, PosetError> {
        if !self.contains(l) {
            return Err(PosetError::UnknownLabel(l.to_string()));
        }
        Ok(LabelUniverse::from_labels(
            self.labels
                .labels()
                .iter()
                .filter(|m| self.leq(m, l))
                .cloned(),
        ))
    }

    /// `↓π`, the union of the down-sets of the members of `π`.
    pub fn down_set_of(&self, pi: &BTreeSet<Label>) -> Result<LabelUniverse, PosetError> {
        let mut out = LabelUniverse::empty();
        for l in pi {
            out = out.union(&self.down_set(l)?);
        }
        Ok(out)
    }

    /// `l ⊑ π`: `l` lies below some member of `π`.
    pub fn below_some(&self, l: &Label, pi: &BTreeSet<Label>) -> bool {
        pi.iter().any(|p| self.leq(l, p))
    }

    /// Generator pairs of the closure, excluding the diagonal.
    pub fn order_pairs(&self) -> Vec<(Label, Label)> {
        let ls = self.labels.labels();
        let mut out = Vec::new();
        for a in ls {
            for b in ls {
                if a != b && self.leq(a, b) {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(s: &str) -> Label {
        Label::new(s).unwrap()
    }

    #[test]
    fn chain_closure() {
        let p = SecurityPoset::low_high();
        assert!(p.leq(&l("L"), &l("H")));
        assert!(p.leq(&l("H"), &l("H")));
        assert!(!p.leq(&l("H"), &l("L")));
        assert_eq!(p.order_pairs(), vec![(l("L"), l("H"))]);
        assert_eq!(p.down_set(&l("H")).unwrap().len(), 2);
        assert_eq!(p.down_set(&l("L")).unwrap().labels(), &[l("L")]);
    }

    #[test]
    fn cycle_is_rejected() {
        assert!(matches!(
            SecurityPoset::load(&["L", "H"], &[("L", "H"), ("H", "L")]),
            Err(PosetError::CycleViolatesAntisymmetry(..))
        ));
        assert!(matches!(
            SecurityPoset::load(&["L"], &[("L", "M")]),
            Err(PosetError::UnknownLabel(_))
        ));
    }

    #[test]
    fn discrete_without_generators() {
        let p = SecurityPoset::load(&["a", "b"], &[]).unwrap();
        assert!(p.order_pairs().is_empty());
    }

    /// Oracle: reachability by depth-first search over the generator edges.
    fn reachable(edges: &[(&str, &str)], from: &str, to: &str) -> bool {
        let mut stack = vec![from];
        let mut seen = BTreeSet::new();
        while let Some(x) = stack.pop() {
            if x == to {
                return true;
            }
            if seen.insert(x) {
                stack.extend(edges.iter().filter(|(a, _)| *a == x).map(|(_, b)| *b));
            }
        }
        false
    }

    #[test]
    fn diamond_down_set_matches_reachability() {
        let edges = [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")];
        let p = SecurityPoset::load(&["bot", "a", "b", "top"], &edges).unwrap();
        assert_eq!(p.down_set(&l("top")).unwrap().len(), 4);
        for x in ["bot", "a", "b", "top"] {
            for y in ["bot", "a", "b", "top"] {
                assert_eq!(p.leq(&l(x), &l(y)), reachable(&edges, x, y), "{x} {y}");
            }
        }
    }

    #[test]
    fn json_form() {
        let p = SecurityPoset::from_json(r#"{"labels":["L","H"],"order":[["L","H"]]}"#).unwrap();
        assert_eq!(p, SecurityPoset::low_high());
        assert!(SecurityPoset::from_json("{").is_err());
    }
}
