use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::element::Element;
use super::set::ClassifiedSet;
use super::CSetError;

/// A relation-preserving total map, stored as carrier indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    source: ClassifiedSet,
    target: ClassifiedSet,
    map: Arc<[usize]>,
}

impl Morphism {
    /// Builds a morphism from an element-level table.
    pub fn new(
        source: ClassifiedSet,
        target: ClassifiedSet,
        mapping: impl IntoIterator<Item = (Element, Element)>,
    ) -> Result<Self, CSetError> {
        let mut slots: Vec<Option<usize>> = vec![None; source.len()];
        for (x, y) in mapping {
            let i = source
                .index_of(&x)
                .ok_or_else(|| CSetError::NotInSource(x.clone()))?;
            let j = target
                .index_of(&y)
                .ok_or_else(|| CSetError::NotInTarget(y.clone()))?;
            match slots[i] {
                Some(k) if k != j => return Err(CSetError::AmbiguousMapping(x)),
                _ => slots[i] = Some(j),
            }
        }
        let map = slots
            .iter()
            .enumerate()
            .map(|(i, s)| s.ok_or_else(|| CSetError::NotTotal(source.carrier()[i].clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_indices(source, target, map)
    }

    /// Builds a morphism from carrier indices, validating preservation.
    pub fn from_indices(
        source: ClassifiedSet,
        target: ClassifiedSet,
        map: Vec<usize>,
    ) -> Result<Self, CSetError> {
        if source.universe() != target.universe() {
            return Err(CSetError::UniverseMismatch);
        }
        if map.len() != source.len() {
            return Err(CSetError::NotTotal(
                source
                    .carrier()
                    .get(map.len())
                    .cloned()
                    .unwrap_or(Element::Star),
            ));
        }
        if let Some(&j) = map.iter().find(|&&j| j >= target.len()) {
            return Err(CSetError::NotInTarget(Element::Atom(j.to_string().into())));
        }
        let f = Morphism {
            source,
            target,
            map: map.into(),
        };
        f.validate()?;
        Ok(f)
    }

    /// Trusted constructor for maps that preserve relations by construction.
    pub(crate) fn unchecked(source: ClassifiedSet, target: ClassifiedSet, map: Vec<usize>) -> Self {
        let f = Morphism {
            source,
            target,
            map: map.into(),
        };
        debug_assert!(f.validate().is_ok(), "trusted morphism failed validation");
        f
    }

    /// Scans every related pair of the source. Reports the first violation in
    /// (label, row, column) order.
    pub fn validate(&self) -> Result<(), CSetError> {
        let labels = self.source.universe().labels();
        for (li, (rs, rt)) in self
            .source
            .relations()
            .iter()
            .zip(self.target.relations())
            .enumerate()
        {
            for (i, j) in rs.pairs() {
                if !rt.get(self.map[i], self.map[j]) {
                    return Err(CSetError::NotAMorphism {
                        label: labels[li].clone(),
                        x: self.source.carrier()[i].clone(),
                        y: self.source.carrier()[j].clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn identity(x: &ClassifiedSet) -> Self {
        Morphism {
            source: x.clone(),
            target: x.clone(),
            map: (0..x.len()).collect(),
        }
    }

    /// `g ∘ f`.
    pub fn compose(g: &Morphism, f: &Morphism) -> Result<Self, CSetError> {
        if f.target != g.source {
            return Err(CSetError::EndpointMismatch);
        }
        let map = f.map.iter().map(|&i| g.map[i]).collect();
        Ok(Self::unchecked(f.source.clone(), g.target.clone(), map))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Morphism) -> Result<Self, CSetError> {
        Self::compose(other, self)
    }

    /// Same underlying mapping between new endpoints with identical carriers.
    pub fn retype(&self, source: ClassifiedSet, target: ClassifiedSet) -> Result<Self, CSetError> {
        if source.carrier() != self.source.carrier() || target.carrier() != self.target.carrier() {
            return Err(CSetError::EndpointMismatch);
        }
        Self::from_indices(source, target, self.map.to_vec())
    }

    pub fn source(&self) -> &ClassifiedSet {
        &self.source
    }

    pub fn target(&self) -> &ClassifiedSet {
        &self.target
    }

    pub fn indices(&self) -> &[usize] {
        &self.map
    }

    pub fn apply_index(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn apply(&self, x: &Element) -> Option<&Element> {
        self.source
            .index_of(x)
            .map(|i| &self.target.carrier()[self.map[i]])
    }

    /// At most one distinct output.
    pub fn is_constant(&self) -> bool {
        self.map.windows(2).all(|w| w[0] == w[1])
    }

    pub fn mapping_table(&self) -> BTreeMap<Element, Element> {
        self.source
            .carrier()
            .iter()
            .zip(self.map.iter())
            .map(|(x, &j)| (x.clone(), self.target.carrier()[j].clone()))
            .collect()
    }

    /// The function table as a `Fun` element.
    pub fn as_element(&self) -> Element {
        Element::fun(self.mapping_table().into_iter().collect())
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morphism {:?}", self.mapping_table())
    }
}
