//! The levelled adjoint string `C_π ⊣ Δ_π ⊣ U_π ⊣ ∇_π` between sets over `ℒ`
//! and sets over `ℒ − π`, and the modalities `□_π = Δ_π U_π`, `◆_π = ∇_π U_π`,
//! `∫_π = Δ_π C_π` they induce.
//!
//! The global functors are the case `π = ℒ`.

use petgraph::unionfind::UnionFind;

use crate::cset::{
    factor_through_classes, quotient_by, CSetError, ClassifiedSet, Element, LabelUniverse,
    Morphism, Product, Relation,
};

/// A selection `π ⊆ ℒ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LevelMask {
    universe: LabelUniverse,
    selected: LabelUniverse,
}

impl LevelMask {
    pub fn new(universe: LabelUniverse, selected: LabelUniverse) -> Result<Self, CSetError> {
        if let Some(l) = selected.labels().iter().find(|l| !universe.contains(l)) {
            return Err(CSetError::UnknownLabel(l.clone()));
        }
        Ok(LevelMask { universe, selected })
    }

    /// `π = ℒ`.
    pub fn all(universe: &LabelUniverse) -> Self {
        LevelMask {
            universe: universe.clone(),
            selected: universe.clone(),
        }
    }

    pub fn none(universe: &LabelUniverse) -> Self {
        LevelMask {
            universe: universe.clone(),
            selected: LabelUniverse::empty(),
        }
    }

    pub fn universe(&self) -> &LabelUniverse {
        &self.universe
    }

    pub fn selected(&self) -> &LabelUniverse {
        &self.selected
    }

    /// `ℒ − π`, the universe of the forgetful image.
    pub fn rest(&self) -> LabelUniverse {
        self.universe.difference(&self.selected)
    }

    fn is_selected(&self, i: usize) -> bool {
        self.selected.contains(&self.universe.labels()[i])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModalityKind {
    BoxK,
    DiamondK,
    ShapeK,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransposeDirection {
    Forward,
    Backward,
}

fn expect_universe(x: &ClassifiedSet, u: &LabelUniverse) -> Result<(), CSetError> {
    if x.universe() == u {
        Ok(())
    } else {
        Err(CSetError::UniverseMismatch)
    }
}

/// `U_π`: drops the relations at `π`.
pub fn forget(pi: &LevelMask, x: &ClassifiedSet) -> Result<ClassifiedSet, CSetError> {
    expect_universe(x, pi.universe())?;
    let rels = (0..pi.universe().len())
        .filter(|&i| !pi.is_selected(i))
        .map(|i| x.relations()[i].clone())
        .collect();
    Ok(ClassifiedSet::from_parts(
        pi.rest(),
        x.carrier().to_vec(),
        rels,
    ))
}

fn extend(
    pi: &LevelMask,
    x: &ClassifiedSet,
    fill: impl Fn(usize) -> Relation,
) -> Result<ClassifiedSet, CSetError> {
    let rest = pi.rest();
    expect_universe(x, &rest)?;
    let rels = pi
        .universe()
        .labels()
        .iter()
        .enumerate()
        .map(|(i, l)| {
            if pi.is_selected(i) {
                fill(x.len())
            } else {
                x.relation(l).expect("label in rest").clone()
            }
        })
        .collect();
    Ok(ClassifiedSet::from_parts(
        pi.universe().clone(),
        x.carrier().to_vec(),
        rels,
    ))
}

/// `Δ_π`: the diagonal at every label of `π`.
pub fn discretize(pi: &LevelMask, x: &ClassifiedSet) -> Result<ClassifiedSet, CSetError> {
    extend(pi, x, Relation::diagonal)
}

/// `∇_π`: the complete relation at every label of `π`.
pub fn codiscretize(pi: &LevelMask, x: &ClassifiedSet) -> Result<ClassifiedSet, CSetError> {
    extend(pi, x, Relation::complete)
}

pub fn forget_morphism(pi: &LevelMask, f: &Morphism) -> Result<Morphism, CSetError> {
    Ok(Morphism::unchecked(
        forget(pi, f.source())?,
        forget(pi, f.target())?,
        f.indices().to_vec(),
    ))
}

pub fn discretize_morphism(pi: &LevelMask, f: &Morphism) -> Result<Morphism, CSetError> {
    Ok(Morphism::unchecked(
        discretize(pi, f.source())?,
        discretize(pi, f.target())?,
        f.indices().to_vec(),
    ))
}

pub fn codiscretize_morphism(pi: &LevelMask, f: &Morphism) -> Result<Morphism, CSetError> {
    Ok(Morphism::unchecked(
        codiscretize(pi, f.source())?,
        codiscretize(pi, f.target())?,
        f.indices().to_vec(),
    ))
}

/// `C_π X` together with the quotient map from the carrier of `X`.
#[derive(Clone, Debug)]
pub struct Components {
    pub mask: LevelMask,
    pub source: ClassifiedSet,
    /// `C_π X`, over `ℒ − π`.
    pub object: ClassifiedSet,
    /// Class index of each carrier element of `source`.
    pub quotient: Vec<usize>,
}

impl Components {
    /// The unit `X → Δ_π C_π X`, sending each element to its class.
    pub fn unit(&self) -> Morphism {
        let target = discretize(&self.mask, &self.object).expect("universe checked");
        Morphism::unchecked(self.source.clone(), target, self.quotient.clone())
    }

    /// The transpose `C_π X → Y` of `f : X → Δ_π Y`.
    pub fn factor(&self, f: &Morphism) -> Result<Morphism, CSetError> {
        if f.source() != &self.source {
            return Err(CSetError::EndpointMismatch);
        }
        let y = forget(&self.mask, f.target())?;
        if discretize(&self.mask, &y)? != *f.target() {
            return Err(CSetError::ShapeMismatch);
        }
        let q = Morphism::unchecked(
            forget(&self.mask, &self.source)?,
            self.object.clone(),
            self.quotient.clone(),
        );
        let h = Morphism::unchecked(forget(&self.mask, &self.source)?, y, f.indices().to_vec());
        factor_through_classes(&q, &h)
    }

    /// The inverse transpose: `g : C_π X → Y` gives `Δ_π g ∘ unit : X → Δ_π Y`.
    pub fn unfactor(&self, g: &Morphism) -> Result<Morphism, CSetError> {
        if g.source() != &self.object {
            return Err(CSetError::EndpointMismatch);
        }
        Morphism::compose(&discretize_morphism(&self.mask, g)?, &self.unit())
    }
}

/// `C_π`: the quotient by the equivalence closure of `⋃_{ℓ∈π} R_ℓ`, with
/// `[b] R_ℓ [b']` for `ℓ ∉ π` iff some members are related.
pub fn components(pi: &LevelMask, x: &ClassifiedSet) -> Result<Components, CSetError> {
    expect_universe(x, pi.universe())?;
    let mut uf = UnionFind::new(x.len());
    let mut keep = Vec::new();
    for (li, r) in x.relations().iter().enumerate() {
        if pi.is_selected(li) {
            for (i, j) in r.pairs() {
                uf.union(i, j);
            }
        } else {
            keep.push(li);
        }
    }
    let (object, quotient) = quotient_by(x, &mut uf, &keep, pi.rest());
    Ok(Components {
        mask: pi.clone(),
        source: x.clone(),
        object,
        quotient,
    })
}

/// `C_π f`, sending `[x]` to `[f x]`.
pub fn components_morphism(pi: &LevelMask, f: &Morphism) -> Result<Morphism, CSetError> {
    let cs = components(pi, f.source())?;
    let ct = components(pi, f.target())?;
    let mut map = vec![0; cs.object.len()];
    for (x, &c) in cs.quotient.iter().enumerate() {
        map[c] = ct.quotient[f.apply_index(x)];
    }
    Ok(Morphism::unchecked(cs.object, ct.object, map))
}

pub fn modality_object(
    kind: ModalityKind,
    pi: &LevelMask,
    x: &ClassifiedSet,
) -> Result<ClassifiedSet, CSetError> {
    match kind {
        ModalityKind::BoxK => discretize(pi, &forget(pi, x)?),
        ModalityKind::DiamondK => codiscretize(pi, &forget(pi, x)?),
        ModalityKind::ShapeK => discretize(pi, &components(pi, x)?.object),
    }
}

pub fn modality_morphism(
    kind: ModalityKind,
    pi: &LevelMask,
    f: &Morphism,
) -> Result<Morphism, CSetError> {
    match kind {
        ModalityKind::BoxK => discretize_morphism(pi, &forget_morphism(pi, f)?),
        ModalityKind::DiamondK => codiscretize_morphism(pi, &forget_morphism(pi, f)?),
        ModalityKind::ShapeK => discretize_morphism(pi, &components_morphism(pi, f)?),
    }
}

/// Counit `□_π X → X`, unit `X → ◆_π X`, or unit `X → ∫_π X`.
pub fn structural_map(
    kind: ModalityKind,
    pi: &LevelMask,
    x: &ClassifiedSet,
) -> Result<Morphism, CSetError> {
    match kind {
        ModalityKind::BoxK => Ok(Morphism::unchecked(
            modality_object(kind, pi, x)?,
            x.clone(),
            (0..x.len()).collect(),
        )),
        ModalityKind::DiamondK => Ok(Morphism::unchecked(
            x.clone(),
            modality_object(kind, pi, x)?,
            (0..x.len()).collect(),
        )),
        ModalityKind::ShapeK => Ok(components(pi, x)?.unit()),
    }
}

/// The `□_π ⊣ ◆_π` transpose. Forward takes `f : □_π A → B` and the object `A`,
/// returning `A → ◆_π B`; backward takes `g : A → ◆_π B` and `B`, returning
/// `□_π A → B`. The underlying mapping is unchanged.
pub fn adjoint_transpose(
    direction: TransposeDirection,
    pi: &LevelMask,
    f: &Morphism,
    object: &ClassifiedSet,
) -> Result<Morphism, CSetError> {
    match direction {
        TransposeDirection::Forward => {
            let a = object;
            if modality_object(ModalityKind::BoxK, pi, a)? != *f.source() {
                return Err(CSetError::ShapeMismatch);
            }
            let target = modality_object(ModalityKind::DiamondK, pi, f.target())?;
            Morphism::from_indices(a.clone(), target, f.indices().to_vec())
        }
        TransposeDirection::Backward => {
            let b = object;
            if modality_object(ModalityKind::DiamondK, pi, b)? != *f.target() {
                return Err(CSetError::ShapeMismatch);
            }
            let source = modality_object(ModalityKind::BoxK, pi, f.source())?;
            Morphism::from_indices(source, b.clone(), f.indices().to_vec())
        }
    }
}

/// `t_{A,B} : A × ◆_π B → ◆_π (A × B)`, the identity on pairs.
pub fn strength(
    pi: &LevelMask,
    a: &ClassifiedSet,
    b: &ClassifiedSet,
) -> Result<Morphism, CSetError> {
    let db = modality_object(ModalityKind::DiamondK, pi, b)?;
    let src = Product::new(a, &db)?.object;
    let tgt = modality_object(ModalityKind::DiamondK, pi, &Product::new(a, b)?.object)?;
    Morphism::from_indices(src, tgt, (0..a.len() * b.len()).collect())
}

/// `∫_π ∫_π X → ∫_π X`, collapsing the singleton classes of the outer quotient,
/// and its inverse.
pub fn shape_idempotence_iso(
    pi: &LevelMask,
    x: &ClassifiedSet,
) -> Result<(Morphism, Morphism), CSetError> {
    let once = modality_object(ModalityKind::ShapeK, pi, x)?;
    let twice = modality_object(ModalityKind::ShapeK, pi, &once)?;
    let mut map = Vec::with_capacity(twice.len());
    for c in twice.carrier() {
        match c {
            Element::Class(m) if m.len() == 1 => {
                map.push(once.index_of(&m[0]).ok_or(CSetError::ShapeMismatch)?)
            }
            _ => return Err(CSetError::ShapeMismatch),
        }
    }
    if map.len() != once.len() {
        return Err(CSetError::ShapeMismatch);
    }
    let mut inv = vec![0; map.len()];
    for (i, &j) in map.iter().enumerate() {
        inv[j] = i;
    }
    Ok((
        Morphism::from_indices(twice.clone(), once.clone(), map)?,
        Morphism::from_indices(once, twice, inv)?,
    ))
}

/// The canonical comparison `C_π(X × Y) → C_π X × C_π Y`.
pub fn components_product_comparison(
    pi: &LevelMask,
    x: &ClassifiedSet,
    y: &ClassifiedSet,
) -> Result<Morphism, CSetError> {
    let p = Product::new(x, y)?;
    let l = components_morphism(pi, &p.proj1)?;
    let r = components_morphism(pi, &p.proj2)?;
    Product::new(l.target(), r.target())?.tuple(&l, &r)
}

fn check_subset(x: &ClassifiedSet, pi: &LabelUniverse) -> Result<(), CSetError> {
    match pi.labels().iter().find(|l| !x.universe().contains(l)) {
        Some(_) => Err(CSetError::UniverseMismatch),
        None => Ok(()),
    }
}

/// Complete relations at every label of `π`.
pub fn is_protected_at(x: &ClassifiedSet, pi: &LabelUniverse) -> Result<bool, CSetError> {
    check_subset(x, pi)?;
    Ok(pi
        .labels()
        .iter()
        .all(|l| x.relation(l).is_some_and(Relation::is_complete)))
}

/// Diagonal relations at every label of `π`.
pub fn is_visible_at(x: &ClassifiedSet, pi: &LabelUniverse) -> Result<bool, CSetError> {
    check_subset(x, pi)?;
    Ok(pi
        .labels()
        .iter()
        .all(|l| x.relation(l).is_some_and(Relation::is_diagonal)))
}

/// `□_π` on a set over any universe containing `π`.
pub fn box_at(pi: &LabelUniverse, x: &ClassifiedSet) -> Result<ClassifiedSet, CSetError> {
    modality_object(
        ModalityKind::BoxK,
        &LevelMask::new(x.universe().clone(), pi.clone())?,
        x,
    )
}

/// `◆_π` on a set over any universe containing `π`.
pub fn diamond_at(pi: &LabelUniverse, x: &ClassifiedSet) -> Result<ClassifiedSet, CSetError> {
    modality_object(
        ModalityKind::DiamondK,
        &LevelMask::new(x.universe().clone(), pi.clone())?,
        x,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cset::{enumerate_hom, initial, EnumCap, Label};
    use std::collections::BTreeMap;

    fn u(names: &[&str]) -> LabelUniverse {
        LabelUniverse::new(names.iter().copied()).unwrap()
    }

    fn mask(all: &[&str], sel: &[&str]) -> LevelMask {
        LevelMask::new(u(all), u(sel)).unwrap()
    }

    fn abc() -> ClassifiedSet {
        let mut rels = BTreeMap::new();
        rels.insert(
            Label::new("L").unwrap(),
            vec![(Element::atom("a").unwrap(), Element::atom("b").unwrap())],
        );
        ClassifiedSet::new(
            u(&["L"]),
            ["a", "b", "c"]
                .iter()
                .map(|n| Element::atom(n).unwrap())
                .collect(),
            rels,
        )
        .unwrap()
    }

    /// Oracle: equivalence closure by repeated relaxation over a boolean matrix.
    #[allow(clippy::needless_range_loop)]
    fn closure_classes(x: &ClassifiedSet, pi: &LevelMask) -> Vec<Vec<usize>> {
        let n = x.len();
        let mut m = vec![vec![false; n]; n];
        for (li, r) in x.relations().iter().enumerate() {
            if pi.selected().contains(&x.universe().labels()[li]) {
                for i in 0..n {
                    for j in 0..n {
                        if r.get(i, j) {
                            m[i][j] = true;
                            m[j][i] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            m[i][i] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if m[i][k] && m[k][j] {
                        m[i][j] = true;
                    }
                }
            }
        }
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            if !classes.iter().any(|c| c.contains(&i)) {
                classes.push((0..n).filter(|&j| m[i][j]).collect());
            }
        }
        classes
    }

    #[test]
    fn forget_discretize_codiscretize_examples() {
        let lh = u(&["L", "H"]);
        let d = ClassifiedSet::delta_bool(&lh);
        let h = mask(&["L", "H"], &["H"]);
        assert_eq!(
            forget(&h, &d).unwrap(),
            ClassifiedSet::delta_bool(&u(&["L"]))
        );
        let all = LevelMask::all(&lh);
        let bare = forget(&all, &d).unwrap();
        assert!(bare.universe().is_empty());
        assert_eq!(forget(&LevelMask::none(&lh), &d).unwrap(), d);
        assert_eq!(discretize(&all, &bare).unwrap(), d);
        assert_eq!(
            codiscretize(&all, &bare).unwrap(),
            ClassifiedSet::nabla_bool(&lh)
        );
        let mixed = codiscretize(&h, &ClassifiedSet::delta_bool(&u(&["L"]))).unwrap();
        assert!(mixed
            .relation(&Label::new("L").unwrap())
            .unwrap()
            .is_diagonal());
        assert!(mixed
            .relation(&Label::new("H").unwrap())
            .unwrap()
            .is_complete());
        assert!(matches!(
            discretize(&h, &d),
            Err(CSetError::UniverseMismatch)
        ));
    }

    #[test]
    fn components_examples() {
        let lh = u(&["L", "H"]);
        let all = LevelMask::all(&lh);
        assert_eq!(
            components(&all, &ClassifiedSet::nabla_bool(&lh))
                .unwrap()
                .object
                .len(),
            1
        );
        let x = abc();
        let c = components(&LevelMask::all(x.universe()), &x).unwrap();
        assert_eq!(c.object.len(), 2);
        assert_eq!(c.quotient[0], c.quotient[1]);
        assert_ne!(c.quotient[0], c.quotient[2]);
        assert_eq!(components(&all, &initial(&lh)).unwrap().object.len(), 0);
    }

    #[test]
    fn components_agree_with_closure_oracle() {
        let x = abc();
        let pi = LevelMask::all(x.universe());
        let c = components(&pi, &x).unwrap();
        for class in closure_classes(&x, &pi) {
            assert!(class.iter().all(|&i| c.quotient[i] == c.quotient[class[0]]));
        }
        assert_eq!(closure_classes(&x, &pi).len(), c.object.len());
    }

    #[test]
    fn modality_examples() {
        let lh = u(&["L", "H"]);
        let all = LevelMask::all(&lh);
        let d = ClassifiedSet::delta_bool(&lh);
        let n = ClassifiedSet::nabla_bool(&lh);
        assert_eq!(modality_object(ModalityKind::BoxK, &all, &n).unwrap(), d);
        assert_eq!(
            modality_object(ModalityKind::DiamondK, &all, &d).unwrap(),
            n
        );
        let x = abc();
        let s = modality_object(ModalityKind::ShapeK, &LevelMask::all(x.universe()), &x).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.relations()[0].is_diagonal());
    }

    #[test]
    fn shape_morphism_maps_class_images() {
        let x = abc();
        let c = Element::atom("c").unwrap();
        let f = Morphism::new(
            x.clone(),
            x.clone(),
            x.carrier().iter().map(|e| (e.clone(), c.clone())),
        )
        .unwrap();
        let pi = LevelMask::all(x.universe());
        let g = modality_morphism(ModalityKind::ShapeK, &pi, &f).unwrap();
        let ab = Element::class(vec![
            Element::atom("a").unwrap(),
            Element::atom("b").unwrap(),
        ]);
        let cc = Element::class(vec![c.clone()]);
        assert_eq!(g.apply(&ab), Some(&cc));
        assert_eq!(g.apply(&cc), Some(&cc));
    }

    #[test]
    fn structural_maps() {
        let lh = u(&["L", "H"]);
        let all = LevelMask::all(&lh);
        let n = ClassifiedSet::nabla_bool(&lh);
        let eps = structural_map(ModalityKind::BoxK, &all, &n).unwrap();
        let mut seen = eps.indices().to_vec();
        seen.dedup();
        assert_eq!(seen.len(), n.len());
        let eta = structural_map(ModalityKind::ShapeK, &all, &n).unwrap();
        assert!(eta.is_constant());
        let z = structural_map(ModalityKind::DiamondK, &all, &initial(&lh)).unwrap();
        assert!(z.indices().is_empty());
    }

    #[test]
    fn transpose_round_trip_and_counts() {
        let lh = u(&["L", "H"]);
        let pi = mask(&["L", "H"], &["H"]);
        let d = ClassifiedSet::delta_bool(&lh);
        let n = ClassifiedSet::nabla_bool(&lh);
        let eps = structural_map(ModalityKind::BoxK, &pi, &n).unwrap();
        let eta = adjoint_transpose(TransposeDirection::Forward, &pi, &eps, &n).unwrap();
        assert_eq!(
            eta,
            structural_map(ModalityKind::DiamondK, &pi, &n).unwrap()
        );
        for a in [&d, &n] {
            for b in [&d, &n] {
                let ba = modality_object(ModalityKind::BoxK, &pi, a).unwrap();
                let db = modality_object(ModalityKind::DiamondK, &pi, b).unwrap();
                let left = enumerate_hom(&ba, b, EnumCap::default()).unwrap();
                let right = enumerate_hom(a, &db, EnumCap::default()).unwrap();
                assert_eq!(left.len(), right.len());
                for f in &left {
                    let g = adjoint_transpose(TransposeDirection::Forward, &pi, f, a).unwrap();
                    let back = adjoint_transpose(TransposeDirection::Backward, &pi, &g, b).unwrap();
                    assert_eq!(&back, f);
                }
            }
        }
        assert!(matches!(
            adjoint_transpose(
                TransposeDirection::Forward,
                &pi,
                &Morphism::identity(&n),
                &d
            ),
            Err(CSetError::ShapeMismatch)
        ));
    }

    #[test]
    fn strength_is_identity_on_pairs() {
        let lh = u(&["L", "H"]);
        let all = LevelMask::all(&lh);
        let d = ClassifiedSet::delta_bool(&lh);
        let t = strength(&all, &d, &ClassifiedSet::nabla_bool(&lh)).unwrap();
        assert_eq!(t.indices(), &[0, 1, 2, 3]);
    }

    #[test]
    fn protection_and_visibility() {
        let lh = u(&["L", "H"]);
        let n = ClassifiedSet::nabla_bool(&lh);
        assert!(is_protected_at(&n, &lh).unwrap());
        assert!(!is_visible_at(&n, &u(&["L"])).unwrap());
        let x = abc();
        let dx = diamond_at(x.universe(), &x).unwrap();
        assert!(is_protected_at(&dx, x.universe()).unwrap());
        let z = initial(&lh);
        assert!(is_protected_at(&z, &lh).unwrap());
        assert!(is_visible_at(&z, &lh).unwrap());
        assert!(is_protected_at(&n, &u(&["M"])).is_err());
    }

    #[test]
    fn shape_iso_round_trips() {
        let x = abc();
        let pi = LevelMask::all(x.universe());
        let (f, g) = shape_idempotence_iso(&pi, &x).unwrap();
        assert_eq!(
            Morphism::compose(&g, &f).unwrap(),
            Morphism::identity(f.source())
        );
        assert_eq!(
            Morphism::compose(&f, &g).unwrap(),
            Morphism::identity(g.source())
        );
    }

    #[test]
    fn components_transpose_round_trip() {
        let x = abc();
        let pi = LevelMask::all(x.universe());
        let c = components(&pi, &x).unwrap();
        let y = forget(&pi, &ClassifiedSet::delta_bool(x.universe())).unwrap();
        let dy = discretize(&pi, &y).unwrap();
        let homs = enumerate_hom(&x, &dy, EnumCap::default()).unwrap();
        let homs_c = enumerate_hom(&c.object, &y, EnumCap::default()).unwrap();
        assert_eq!(homs.len(), homs_c.len());
        for f in &homs {
            assert_eq!(&c.unfactor(&c.factor(f).unwrap()).unwrap(), f);
        }
    }
}
