use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::element::Element;
use super::label::{Label, LabelUniverse};
use super::CSetError;

/// A binary relation on `0..n`, stored as a dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    bits: Vec<bool>,
}

impl Relation {
    pub fn diagonal(n: usize) -> Self {
        let mut bits = vec![false; n * n];
        for i in 0..n {
            bits[i * n + i] = true;
        }
        Relation { n, bits }
    }

    pub fn complete(n: usize) -> Self {
        Relation {
            n,
            bits: vec![true; n * n],
        }
    }

    /// The relation `{(i, j) | pred(i, j)}`.
    pub fn from_fn(n: usize, mut pred: impl FnMut(usize, usize) -> bool) -> Self {
        let mut bits = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                bits.push(pred(i, j));
            }
        }
        Relation { n, bits }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.n + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.n + j] = true;
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i))
    }

    pub fn is_complete(&self) -> bool {
        self.bits.iter().all(|&b| b)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == (i == j)))
    }

    /// Related index pairs in row-major order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n)
            .flat_map(move |i| (0..self.n).map(move |j| (i, j)))
            .filter(move |&(i, j)| self.get(i, j))
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

#[derive(PartialEq, Eq, Hash)]
struct Inner {
    universe: LabelUniverse,
    carrier: Vec<Element>,
    relations: Vec<Relation>,
}

/// A finite carrier with one reflexive relation per label. Cloning is cheap.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ClassifiedSet(Arc<Inner>);

impl ClassifiedSet {
    /// Builds a set from raw input. The carrier is sorted, and each relation gets its
    /// reflexive closure. Labels with no entry get the diagonal.
    pub fn new(
        universe: LabelUniverse,
        carrier: Vec<Element>,
        relations: BTreeMap<Label, Vec<(Element, Element)>>,
    ) -> Result<Self, CSetError> {
        let mut carrier = carrier;
        carrier.sort();
        for w in carrier.windows(2) {
            if w[0] == w[1] {
                return Err(CSetError::DuplicateElement(w[0].clone()));
            }
        }
        let n = carrier.len();
        let mut rels = vec![Relation::diagonal(n); universe.len()];
        for (label, pairs) in relations {
            let li = universe
                .position(&label)
                .ok_or_else(|| CSetError::UnknownLabel(label.clone()))?;
            for (x, y) in pairs {
                let find = |e: &Element| {
                    carrier
                        .binary_search(e)
                        .map_err(|_| CSetError::RelationOutOfCarrier {
                            label: label.clone(),
                            element: e.clone(),
                        })
                };
                let (i, j) = (find(&x)?, find(&y)?);
                rels[li].set(i, j);
            }
        }
        Ok(Self::from_parts(universe, carrier, rels))
    }

    /// Trusted constructor: `carrier` sorted and duplicate-free, one reflexive relation per label.
    pub(crate) fn from_parts(
        universe: LabelUniverse,
        carrier: Vec<Element>,
        relations: Vec<Relation>,
    ) -> Self {
        debug_assert!(
            carrier.windows(2).all(|w| w[0] < w[1]),
            "carrier not canonical"
        );
        debug_assert_eq!(relations.len(), universe.len());
        debug_assert!(relations
            .iter()
            .all(|r| r.size() == carrier.len() && r.is_reflexive()));
        ClassifiedSet(Arc::new(Inner {
            universe,
            carrier,
            relations,
        }))
    }

    /// Every label related by the diagonal only.
    pub fn discrete(universe: LabelUniverse, carrier: Vec<Element>) -> Result<Self, CSetError> {
        Self::new(universe, carrier, BTreeMap::new())
    }

    /// Every label related by the complete relation.
    pub fn codiscrete(universe: LabelUniverse, carrier: Vec<Element>) -> Result<Self, CSetError> {
        let d = Self::discrete(universe, carrier)?;
        let n = d.len();
        let rels = vec![Relation::complete(n); d.universe().len()];
        Ok(Self::from_parts(
            d.universe().clone(),
            d.carrier().to_vec(),
            rels,
        ))
    }

    /// The booleans `{ff, tt}` with the diagonal at every label.
    pub fn delta_bool(universe: &LabelUniverse) -> Self {
        Self::discrete(universe.clone(), vec![Element::tt(), Element::ff()]).expect("distinct")
    }

    /// The booleans `{ff, tt}` with the complete relation at every label.
    pub fn nabla_bool(universe: &LabelUniverse) -> Self {
        Self::codiscrete(universe.clone(), vec![Element::tt(), Element::ff()]).expect("distinct")
    }

    pub fn universe(&self) -> &LabelUniverse {
        &self.0.universe
    }

    pub fn carrier(&self) -> &[Element] {
        &self.0.carrier
    }

    pub fn len(&self) -> usize {
        self.0.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.carrier.is_empty()
    }

    pub fn index_of(&self, e: &Element) -> Option<usize> {
        self.0.carrier.binary_search(e).ok()
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.index_of(e).is_some()
    }

    /// Relations in universe order.
    pub fn relations(&self) -> &[Relation] {
        &self.0.relations
    }

    pub fn relation(&self, label: &Label) -> Option<&Relation> {
        self.universe()
            .position(label)
            .map(|i| &self.0.relations[i])
    }

    /// Whether `x R_label y`. False for unknown labels or elements.
    pub fn related(&self, label: &Label, x: &Element, y: &Element) -> bool {
        match (self.relation(label), self.index_of(x), self.index_of(y)) {
            (Some(r), Some(i), Some(j)) => r.get(i, j),
            _ => false,
        }
    }

    /// Non-diagonal related pairs per label, the inverse of [`ClassifiedSet::new`].
    pub fn relation_pairs(&self) -> BTreeMap<Label, Vec<(Element, Element)>> {
        self.universe()
            .labels()
            .iter()
            .zip(self.relations())
            .map(|(l, r)| {
                let pairs = r
                    .pairs()
                    .filter(|(i, j)| i != j)
                    .map(|(i, j)| (self.carrier()[i].clone(), self.carrier()[j].clone()))
                    .collect();
                (l.clone(), pairs)
            })
            .collect()
    }
}

impl fmt::Debug for ClassifiedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClassifiedSet")
            .field("universe", self.universe())
            .field("carrier", &self.carrier())
            .field("relations", &self.relation_pairs())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lh() -> LabelUniverse {
        LabelUniverse::new(["L", "H"]).unwrap()
    }

    fn atoms(names: &[&str]) -> Vec<Element> {
        names.iter().map(|n| Element::atom(n).unwrap()).collect()
    }

    #[test]
    fn empty_relations_give_discrete_bool() {
        let s = ClassifiedSet::new(lh(), atoms(&["tt", "ff"]), BTreeMap::new()).unwrap();
        assert_eq!(s, ClassifiedSet::delta_bool(&lh()));
        assert!(s.relations().iter().all(Relation::is_diagonal));
    }

    #[test]
    fn all_pairs_give_codiscrete_bool() {
        let b = atoms(&["tt", "ff"]);
        let all: Vec<_> = b
            .iter()
            .flat_map(|x| b.iter().map(move |y| (x.clone(), y.clone())))
            .collect();
        let mut rels = BTreeMap::new();
        for l in lh().labels() {
            rels.insert(l.clone(), all.clone());
        }
        let s = ClassifiedSet::new(lh(), b, rels).unwrap();
        assert_eq!(s, ClassifiedSet::nabla_bool(&lh()));
    }

    #[test]
    fn out_of_carrier_pair_is_rejected() {
        let u = LabelUniverse::new(["L"]).unwrap();
        let mut rels = BTreeMap::new();
        rels.insert(
            Label::new("L").unwrap(),
            vec![(Element::atom("a").unwrap(), Element::atom("b").unwrap())],
        );
        let err = ClassifiedSet::new(u, atoms(&["a"]), rels).unwrap_err();
        assert!(matches!(err, CSetError::RelationOutOfCarrier { .. }));
    }

    #[test]
    fn unknown_label_and_duplicates_are_rejected() {
        let u = LabelUniverse::new(["L"]).unwrap();
        let mut rels = BTreeMap::new();
        rels.insert(Label::new("H").unwrap(), vec![]);
        assert!(matches!(
            ClassifiedSet::new(u.clone(), atoms(&["a"]), rels),
            Err(CSetError::UnknownLabel(_))
        ));
        assert!(matches!(
            ClassifiedSet::discrete(u, atoms(&["a", "a"])),
            Err(CSetError::DuplicateElement(_))
        ));
    }

    #[test]
    fn relation_pairs_round_trip() {
        let u = LabelUniverse::new(["L"]).unwrap();
        let mut rels = BTreeMap::new();
        rels.insert(
            Label::new("L").unwrap(),
            vec![(Element::atom("b").unwrap(), Element::atom("a").unwrap())],
        );
        let s = ClassifiedSet::new(u.clone(), atoms(&["a", "b", "c"]), rels).unwrap();
        let again = ClassifiedSet::new(u, s.carrier().to_vec(), s.relation_pairs()).unwrap();
        assert_eq!(s, again);
    }
}
