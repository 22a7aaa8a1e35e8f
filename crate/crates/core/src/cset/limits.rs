//! Finite limits and colimits.

use std::collections::BTreeMap;

use petgraph::unionfind::UnionFind;

use super::element::Element;
use super::label::LabelUniverse;
use super::morphism::Morphism;
use super::set::{ClassifiedSet, Relation};
use super::CSetError;

/// The one-point set, related to itself at every label.
pub fn terminal(universe: &LabelUniverse) -> ClassifiedSet {
    ClassifiedSet::from_parts(
        universe.clone(),
        vec![Element::Star],
        vec![Relation::diagonal(1); universe.len()],
    )
}

pub fn initial(universe: &LabelUniverse) -> ClassifiedSet {
    ClassifiedSet::from_parts(
        universe.clone(),
        vec![],
        vec![Relation::diagonal(0); universe.len()],
    )
}

/// The unique map `X → 1`.
pub fn bang(x: &ClassifiedSet) -> Morphism {
    Morphism::unchecked(x.clone(), terminal(x.universe()), vec![0; x.len()])
}

/// The unique map `0 → X`.
pub fn absurd(x: &ClassifiedSet) -> Morphism {
    Morphism::unchecked(initial(x.universe()), x.clone(), vec![])
}

/// The point `1 → X` picking `e`.
pub fn point(x: &ClassifiedSet, e: &Element) -> Option<Morphism> {
    x.index_of(e)
        .map(|i| Morphism::unchecked(terminal(x.universe()), x.clone(), vec![i]))
}

fn same_universe(a: &ClassifiedSet, b: &ClassifiedSet) -> Result<(), CSetError> {
    if a.universe() == b.universe() {
        Ok(())
    } else {
        Err(CSetError::UniverseMismatch)
    }
}

/// `A × B`. The pair `(a_i, b_j)` sits at index `i * |B| + j`.
#[derive(Clone, Debug)]
pub struct Product {
    pub object: ClassifiedSet,
    pub proj1: Morphism,
    pub proj2: Morphism,
}

impl Product {
    pub fn new(a: &ClassifiedSet, b: &ClassifiedSet) -> Result<Self, CSetError> {
        same_universe(a, b)?;
        let (n, m) = (a.len(), b.len());
        let carrier = a
            .carrier()
            .iter()
            .flat_map(|x| {
                b.carrier()
                    .iter()
                    .map(move |y| Element::pair(x.clone(), y.clone()))
            })
            .collect();
        let rels = a
            .relations()
            .iter()
            .zip(b.relations())
            .map(|(ra, rb)| {
                Relation::from_fn(n * m, |p, q| ra.get(p / m, q / m) && rb.get(p % m, q % m))
            })
            .collect();
        let object = ClassifiedSet::from_parts(a.universe().clone(), carrier, rels);
        let proj1 = Morphism::unchecked(
            object.clone(),
            a.clone(),
            (0..n * m).map(|p| p / m).collect(),
        );
        let proj2 = Morphism::unchecked(
            object.clone(),
            b.clone(),
            (0..n * m).map(|p| p % m).collect(),
        );
        Ok(Product {
            object,
            proj1,
            proj2,
        })
    }

    pub fn left(&self) -> &ClassifiedSet {
        self.proj1.target()
    }

    pub fn right(&self) -> &ClassifiedSet {
        self.proj2.target()
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.right().len() + j
    }

    /// `⟨f, g⟩ : C → A × B`.
    pub fn tuple(&self, f: &Morphism, g: &Morphism) -> Result<Morphism, CSetError> {
        if f.source() != g.source() || f.target() != self.left() || g.target() != self.right() {
            return Err(CSetError::EndpointMismatch);
        }
        let map = (0..f.source().len())
            .map(|c| self.index(f.apply_index(c), g.apply_index(c)))
            .collect();
        Ok(Morphism::unchecked(
            f.source().clone(),
            self.object.clone(),
            map,
        ))
    }
}

/// `f × g : A × B → A' × B'`.
pub fn product_morphism(f: &Morphism, g: &Morphism) -> Result<Morphism, CSetError> {
    let dom = Product::new(f.source(), g.source())?;
    let cod = Product::new(f.target(), g.target())?;
    let l = Morphism::compose(f, &dom.proj1)?;
    let r = Morphism::compose(g, &dom.proj2)?;
    cod.tuple(&l, &r)
}

/// `A + B`. Left injections come first, then right ones.
#[derive(Clone, Debug)]
pub struct Coproduct {
    pub object: ClassifiedSet,
    pub inj1: Morphism,
    pub inj2: Morphism,
}

impl Coproduct {
    pub fn new(a: &ClassifiedSet, b: &ClassifiedSet) -> Result<Self, CSetError> {
        same_universe(a, b)?;
        let (n, m) = (a.len(), b.len());
        let carrier = a
            .carrier()
            .iter()
            .cloned()
            .map(Element::inl)
            .chain(b.carrier().iter().cloned().map(Element::inr))
            .collect();
        let rels = a
            .relations()
            .iter()
            .zip(b.relations())
            .map(|(ra, rb)| {
                Relation::from_fn(n + m, |p, q| match (p < n, q < n) {
                    (true, true) => ra.get(p, q),
                    (false, false) => rb.get(p - n, q - n),
                    _ => false,
                })
            })
            .collect();
        let object = ClassifiedSet::from_parts(a.universe().clone(), carrier, rels);
        let inj1 = Morphism::unchecked(a.clone(), object.clone(), (0..n).collect());
        let inj2 = Morphism::unchecked(b.clone(), object.clone(), (n..n + m).collect());
        Ok(Coproduct { object, inj1, inj2 })
    }

    /// `[f, g] : A + B → C`.
    pub fn cotuple(&self, f: &Morphism, g: &Morphism) -> Result<Morphism, CSetError> {
        if f.target() != g.target()
            || f.source() != self.inj1.source()
            || g.source() != self.inj2.source()
        {
            return Err(CSetError::EndpointMismatch);
        }
        let map = f.indices().iter().chain(g.indices()).copied().collect();
        Ok(Morphism::unchecked(
            self.object.clone(),
            f.target().clone(),
            map,
        ))
    }
}

fn parallel(f: &Morphism, g: &Morphism) -> Result<(), CSetError> {
    if f.source() == g.source() && f.target() == g.target() {
        Ok(())
    } else {
        Err(CSetError::NotParallel)
    }
}

/// The subset where `f` and `g` agree, with restricted relations.
#[derive(Clone, Debug)]
pub struct Equalizer {
    pub object: ClassifiedSet,
    pub include: Morphism,
    f: Morphism,
    g: Morphism,
}

impl Equalizer {
    pub fn new(f: &Morphism, g: &Morphism) -> Result<Self, CSetError> {
        parallel(f, g)?;
        let a = f.source();
        let keep: Vec<usize> = (0..a.len())
            .filter(|&i| f.apply_index(i) == g.apply_index(i))
            .collect();
        let carrier = keep.iter().map(|&i| a.carrier()[i].clone()).collect();
        let rels = a
            .relations()
            .iter()
            .map(|r| Relation::from_fn(keep.len(), |p, q| r.get(keep[p], keep[q])))
            .collect();
        let object = ClassifiedSet::from_parts(a.universe().clone(), carrier, rels);
        let include = Morphism::unchecked(object.clone(), a.clone(), keep);
        Ok(Equalizer {
            object,
            include,
            f: f.clone(),
            g: g.clone(),
        })
    }

    /// The corestriction of `h : C → A` with `f ∘ h = g ∘ h`.
    pub fn factor(&self, h: &Morphism) -> Result<Morphism, CSetError> {
        if h.target() != self.f.source() {
            return Err(CSetError::EndpointMismatch);
        }
        if Morphism::compose(&self.f, h)? != Morphism::compose(&self.g, h)? {
            return Err(CSetError::NotEqualized);
        }
        let inc = self.include.indices();
        let map = h
            .indices()
            .iter()
            .map(|&a| inc.binary_search(&a).expect("equalized point is included"))
            .collect();
        Ok(Morphism::unchecked(
            h.source().clone(),
            self.object.clone(),
            map,
        ))
    }
}

/// Quotient of `X` by an equivalence given as a class index per element.
/// Classes become `Class` elements; `[b] R [b']` iff some members are related.
pub(crate) fn quotient_by(
    x: &ClassifiedSet,
    uf: &mut UnionFind<usize>,
    keep_labels: &[usize],
    universe: LabelUniverse,
) -> (ClassifiedSet, Vec<usize>) {
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..x.len() {
        groups.entry(uf.find_mut(i)).or_default().push(i);
    }
    let mut classes: Vec<(Element, Vec<usize>)> = groups
        .into_values()
        .map(|members| {
            let e = Element::class(members.iter().map(|&i| x.carrier()[i].clone()).collect());
            (e, members)
        })
        .collect();
    classes.sort_by(|a, b| a.0.cmp(&b.0));
    let mut class_of = vec![0; x.len()];
    for (ci, (_, members)) in classes.iter().enumerate() {
        for &i in members {
            class_of[i] = ci;
        }
    }
    let k = classes.len();
    let rels = keep_labels
        .iter()
        .map(|&li| {
            let r = &x.relations()[li];
            let mut q = Relation::diagonal(k);
            for (i, j) in r.pairs() {
                q.set(class_of[i], class_of[j]);
            }
            q
        })
        .collect();
    let carrier = classes.into_iter().map(|(e, _)| e).collect();
    (ClassifiedSet::from_parts(universe, carrier, rels), class_of)
}

/// Quotient of `B` by the least equivalence containing every `(f a, g a)`.
#[derive(Clone, Debug)]
pub struct Coequalizer {
    pub object: ClassifiedSet,
    pub quotient: Morphism,
    f: Morphism,
    g: Morphism,
}

impl Coequalizer {
    pub fn new(f: &Morphism, g: &Morphism) -> Result<Self, CSetError> {
        parallel(f, g)?;
        let b = f.target();
        let mut uf = UnionFind::new(b.len());
        for i in 0..f.source().len() {
            uf.union(f.apply_index(i), g.apply_index(i));
        }
        let all: Vec<usize> = (0..b.universe().len()).collect();
        let (object, class_of) = quotient_by(b, &mut uf, &all, b.universe().clone());
        let quotient = Morphism::unchecked(b.clone(), object.clone(), class_of);
        Ok(Coequalizer {
            object,
            quotient,
            f: f.clone(),
            g: g.clone(),
        })
    }

    /// The map `Q → C` induced by `h : B → C` with `h ∘ f = h ∘ g`.
    pub fn factor(&self, h: &Morphism) -> Result<Morphism, CSetError> {
        if h.source() != self.f.target() {
            return Err(CSetError::EndpointMismatch);
        }
        if Morphism::compose(h, &self.f)? != Morphism::compose(h, &self.g)? {
            return Err(CSetError::NotCoequalized);
        }
        factor_through_classes(&self.quotient, h)
    }
}

/// Given a surjection `q : B → Q` and `h : B → C` constant on fibres of `q`,
/// the unique `k` with `k ∘ q = h`. Returns `NotConstantOnClasses` otherwise.
pub(crate) fn factor_through_classes(q: &Morphism, h: &Morphism) -> Result<Morphism, CSetError> {
    let mut map: Vec<Option<usize>> = vec![None; q.target().len()];
    for b in 0..q.source().len() {
        let c = q.apply_index(b);
        match map[c] {
            Some(v) if v != h.apply_index(b) => {
                return Err(CSetError::NotConstantOnClasses(
                    q.source().carrier()[b].clone(),
                ))
            }
            _ => map[c] = Some(h.apply_index(b)),
        }
    }
    let map = map
        .into_iter()
        .map(|v| v.expect("quotient maps are surjective"))
        .collect();
    Morphism::from_indices(q.target().clone(), h.target().clone(), map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cset::enumerate_hom;
    use crate::cset::EnumCap;

    fn lh() -> LabelUniverse {
        LabelUniverse::new(["L", "H"]).unwrap()
    }

    fn swap(d: &ClassifiedSet) -> Morphism {
        Morphism::new(
            d.clone(),
            d.clone(),
            vec![
                (Element::tt(), Element::ff()),
                (Element::ff(), Element::tt()),
            ],
        )
        .unwrap()
    }

    fn const_tt(d: &ClassifiedSet) -> Morphism {
        Morphism::new(
            d.clone(),
            d.clone(),
            vec![
                (Element::tt(), Element::tt()),
                (Element::ff(), Element::tt()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn terminal_and_initial_homs() {
        let d = ClassifiedSet::delta_bool(&lh());
        let one = terminal(&lh());
        let zero = initial(&lh());
        let cap = EnumCap::default();
        assert_eq!(enumerate_hom(&d, &one, cap).unwrap().len(), 1);
        assert_eq!(enumerate_hom(&zero, &d, cap).unwrap().len(), 1);
        assert_eq!(enumerate_hom(&d, &zero, cap).unwrap().len(), 0);
        assert_eq!(enumerate_hom(&zero, &zero, cap).unwrap().len(), 1);
        let t = terminal(&LabelUniverse::empty());
        assert_eq!(t.len(), 1);
        assert!(t.relations().is_empty());
        assert!(bang(&ClassifiedSet::nabla_bool(&lh())).validate().is_ok());
    }

    #[test]
    fn product_relation_is_componentwise() {
        let l = LabelUniverse::new(["L"]).unwrap();
        let p = Product::new(
            &ClassifiedSet::delta_bool(&l),
            &ClassifiedSet::nabla_bool(&l),
        )
        .unwrap();
        let lab = l.labels()[0].clone();
        let pr = |a: Element, b: Element| Element::pair(a, b);
        assert!(p.object.related(
            &lab,
            &pr(Element::tt(), Element::tt()),
            &pr(Element::tt(), Element::ff())
        ));
        assert!(!p.object.related(
            &lab,
            &pr(Element::tt(), Element::tt()),
            &pr(Element::ff(), Element::tt())
        ));
        assert_eq!(
            Product::new(
                &ClassifiedSet::delta_bool(&l),
                &ClassifiedSet::delta_bool(&l)
            )
            .unwrap()
            .object
            .len(),
            4
        );
    }

    #[test]
    fn tuple_of_points_is_point_of_pair() {
        let d = ClassifiedSet::delta_bool(&lh());
        let p = Product::new(&d, &d).unwrap();
        let h = p
            .tuple(
                &point(&d, &Element::tt()).unwrap(),
                &point(&d, &Element::ff()).unwrap(),
            )
            .unwrap();
        assert_eq!(
            h.apply(&Element::Star),
            Some(&Element::pair(Element::tt(), Element::ff()))
        );
    }

    #[test]
    fn coproduct_of_points_is_discrete_bool() {
        let one = terminal(&lh());
        let c = Coproduct::new(&one, &one).unwrap();
        let d = ClassifiedSet::delta_bool(&lh());
        let rename = Morphism::new(
            c.object.clone(),
            d.clone(),
            vec![
                (Element::inl(Element::Star), Element::tt()),
                (Element::inr(Element::Star), Element::ff()),
            ],
        )
        .unwrap();
        let back = Morphism::new(
            d.clone(),
            c.object.clone(),
            vec![
                (Element::tt(), Element::inl(Element::Star)),
                (Element::ff(), Element::inr(Element::Star)),
            ],
        )
        .unwrap();
        assert_eq!(
            Morphism::compose(&back, &rename).unwrap(),
            Morphism::identity(&c.object)
        );
        assert_eq!(
            Morphism::compose(&rename, &back).unwrap(),
            Morphism::identity(&d)
        );
    }

    #[test]
    fn coproduct_cross_tags_unrelated_and_fold() {
        let d = ClassifiedSet::delta_bool(&lh());
        let c = Coproduct::new(&d, &d).unwrap();
        let l = lh().labels()[1].clone();
        let l = &l;
        assert!(!c.object.related(
            l,
            &Element::inl(Element::tt()),
            &Element::inr(Element::tt())
        ));
        let id = Morphism::identity(&d);
        let fold = c.cotuple(&id, &id).unwrap();
        assert_eq!(
            fold.apply(&Element::inr(Element::ff())),
            Some(&Element::ff())
        );
        assert_eq!(
            fold.apply(&Element::inl(Element::tt())),
            Some(&Element::tt())
        );
    }

    #[test]
    fn equalizer_examples() {
        let d = ClassifiedSet::delta_bool(&lh());
        let id = Morphism::identity(&d);
        assert!(Equalizer::new(&id, &swap(&d)).unwrap().object.is_empty());
        let e = Equalizer::new(&id, &id).unwrap();
        assert_eq!(e.object, d);
        assert_eq!(e.include, id);
        let e = Equalizer::new(&const_tt(&d), &id).unwrap();
        assert_eq!(e.object.carrier(), &[Element::tt()]);
    }

    #[test]
    fn coequalizer_of_two_points_is_terminal_like() {
        let d = ClassifiedSet::delta_bool(&lh());
        let f = point(&d, &Element::tt()).unwrap();
        let g = point(&d, &Element::ff()).unwrap();
        let q = Coequalizer::new(&f, &g).unwrap();
        assert_eq!(q.object.len(), 1);
        assert!(q.object.relations().iter().all(Relation::is_complete));
        let id = Morphism::identity(&d);
        let q = Coequalizer::new(&id, &id).unwrap();
        assert_eq!(q.object.len(), 2);
    }

    #[test]
    fn coequalizer_gluing_one_pair_has_three_classes() {
        let d = ClassifiedSet::delta_bool(&lh());
        let s = Coproduct::new(&d, &d).unwrap();
        let one = terminal(&lh());
        let f = point(&s.object, &Element::inl(Element::tt())).unwrap();
        let g = point(&s.object, &Element::inr(Element::tt())).unwrap();
        assert_eq!(f.source(), &one);
        let q = Coequalizer::new(&f, &g).unwrap();
        assert_eq!(q.object.len(), 3);
    }

    #[test]
    fn factor_errors() {
        let d = ClassifiedSet::delta_bool(&lh());
        let id = Morphism::identity(&d);
        let e = Equalizer::new(&const_tt(&d), &id).unwrap();
        assert!(matches!(e.factor(&id), Err(CSetError::NotEqualized)));
        let f = point(&d, &Element::tt()).unwrap();
        let g = point(&d, &Element::ff()).unwrap();
        let q = Coequalizer::new(&f, &g).unwrap();
        assert!(matches!(q.factor(&id), Err(CSetError::NotCoequalized)));
        assert!(q.factor(&const_tt(&d)).is_ok());
    }
}
