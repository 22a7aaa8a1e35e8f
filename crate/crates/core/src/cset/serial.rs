//! JSON form of a classified set:
//! `{"labels": [...], "carrier": [...], "relations": {"L": [[x, y], ...]}}`.
//! Only non-diagonal pairs are listed; the diagonal is implied.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::element::Element;
use super::label::{Label, LabelUniverse};
use super::set::ClassifiedSet;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SetRepr {
    labels: Vec<Label>,
    carrier: Vec<Element>,
    #[serde(default)]
    relations: BTreeMap<Label, Vec<(Element, Element)>>,
}

impl Serialize for ClassifiedSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SetRepr {
            labels: self.universe().labels().to_vec(),
            carrier: self.carrier().to_vec(),
            relations: self.relation_pairs(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ClassifiedSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = SetRepr::deserialize(d)?;
        let n = r.labels.len();
        let universe = LabelUniverse::from_labels(r.labels);
        if universe.len() != n {
            return Err(serde::de::Error::custom("duplicate label"));
        }
        ClassifiedSet::new(universe, r.carrier, r.relations).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let text = r#"{"labels":["L","H"],"carrier":["ff","tt","(tt, *)"],"relations":{"H":[["ff","tt"]]}}"#;
        let s: ClassifiedSet = serde_json::from_str(text).unwrap();
        assert_eq!(s.len(), 3);
        let back: ClassifiedSet =
            serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn json_rejects_bad_relation() {
        let text = r#"{"labels":["L"],"carrier":["a"],"relations":{"L":[["a","b"]]}}"#;
        assert!(serde_json::from_str::<ClassifiedSet>(text).is_err());
    }
}
