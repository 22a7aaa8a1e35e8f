use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::constancy::{codiscrete_constancy_cases, constancy_between_cases, constancy_cases};
use super::random::{random_set, random_set_of_size, trial_rng};
use super::report::{CheckReport, Tally};
use super::{attempt, labels_json, set_json, table_json, HarnessError};
use crate::cohesion::{
    adjoint_transpose, box_at, codiscretize, components, components_product_comparison, diamond_at,
    discretize, forget, is_protected_at, modality_morphism, modality_object, shape_idempotence_iso,
    strength, structural_map, LevelMask, ModalityKind, TransposeDirection,
};
use crate::cset::{
    enumerate_hom, initial, product_morphism, terminal, CSetError, ClassifiedSet, Coequalizer,
    Coproduct, Element, EnumCap, Equalizer, Exponential, LabelUniverse, Morphism, Product,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LawGroup {
    Bcc,
    Adjunction,
    Corollary,
    Levelled,
    Strength,
    Ideal,
    Contractibility,
    Constancy,
}

impl LawGroup {
    pub const ALL: [LawGroup; 8] = [
        LawGroup::Bcc,
        LawGroup::Adjunction,
        LawGroup::Corollary,
        LawGroup::Levelled,
        LawGroup::Strength,
        LawGroup::Ideal,
        LawGroup::Contractibility,
        LawGroup::Constancy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LawGroup::Bcc => "bcc",
            LawGroup::Adjunction => "adjunction",
            LawGroup::Corollary => "corollary",
            LawGroup::Levelled => "levelled",
            LawGroup::Strength => "strength",
            LawGroup::Ideal => "ideal",
            LawGroup::Contractibility => "contractibility",
            LawGroup::Constancy => "constancy",
        }
    }
}

impl fmt::Display for LawGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LawGroup {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        LawGroup::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = LawGroup::ALL.iter().map(|g| g.name()).collect();
                format!(
                    "unknown law group `{s}` (expected one of {})",
                    names.join(", ")
                )
            })
    }
}

/// Runs `trials` seeded instances of every law in `group`. Trials run in
/// parallel; failures are reported in trial order.
pub fn run_law_suite(
    group: LawGroup,
    seed: u64,
    trials: u64,
    cap: EnumCap,
) -> Result<CheckReport, HarnessError> {
    if trials == 0 {
        return Err(HarnessError::InvalidArgument(
            "trials must be at least 1".into(),
        ));
    }
    let start = Instant::now();
    let tallies: Vec<Result<Tally, HarnessError>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let mut tally = Tally::default();
            run_trial(group, &mut rng, cap, &mut tally)?;
            for f in &mut tally.failures {
                if let Value::Object(m) = &mut f.inputs {
                    m.insert("trial".into(), json!(trial));
                }
            }
            Ok(tally)
        })
        .collect();
    let mut total = Tally::default();
    for t in tallies {
        total.merge(t?);
    }
    total.notes.sort();
    total.notes.dedup();
    Ok(CheckReport::from_tally(group.name(), seed, total, start))
}

fn run_trial(
    group: LawGroup,
    rng: &mut impl Rng,
    cap: EnumCap,
    t: &mut Tally,
) -> Result<(), HarnessError> {
    match group {
        LawGroup::Bcc => bcc(rng, cap, t),
        LawGroup::Adjunction => adjunction(rng, cap, t),
        LawGroup::Corollary => corollary(rng, t),
        LawGroup::Levelled => levelled(rng, t),
        LawGroup::Strength => strength_laws(rng, t),
        LawGroup::Ideal => ideal(rng, cap, t),
        LawGroup::Contractibility => contractibility(rng, t),
        LawGroup::Constancy => constancy(rng, cap, t),
    }
}

fn lh() -> LabelUniverse {
    LabelUniverse::new(["L", "H"]).expect("valid labels")
}

fn lmh() -> LabelUniverse {
    LabelUniverse::new(["L", "M", "H"]).expect("valid labels")
}

fn mask(u: &LabelUniverse, pi: &LabelUniverse) -> LevelMask {
    LevelMask::new(u.clone(), pi.clone()).expect("subset of universe")
}

/// Records an unexpected error from a law's construction as a failure.
fn ok_or_fail<T>(
    t: &mut Tally,
    law: &str,
    inputs: impl Fn() -> Value,
    r: Result<T, CSetError>,
) -> Option<T> {
    attempt(t, law, inputs, r)
}

fn tables(ms: &[Morphism]) -> Vec<Vec<usize>> {
    ms.iter().map(|m| m.indices().to_vec()).collect()
}

fn compose(g: &Morphism, f: &Morphism) -> Morphism {
    Morphism::compose(g, f).expect("composable by construction")
}

/// `α : (X × Y) × Z → X × (Y × Z)`.
fn associator(
    x: &ClassifiedSet,
    y: &ClassifiedSet,
    z: &ClassifiedSet,
) -> Result<Morphism, CSetError> {
    let src = Product::new(&Product::new(x, y)?.object, z)?.object;
    let tgt = Product::new(x, &Product::new(y, z)?.object)?.object;
    let pairs: Vec<(Element, Element)> = src
        .carrier()
        .iter()
        .map(|e| {
            let (xy, c) = e.as_pair().expect("pair");
            let (a, b) = xy.as_pair().expect("pair");
            (
                e.clone(),
                Element::pair(a.clone(), Element::pair(b.clone(), c.clone())),
            )
        })
        .collect();
    Morphism::new(src, tgt, pairs)
}

fn bcc(rng: &mut impl Rng, cap: EnumCap, t: &mut Tally) -> Result<(), HarnessError> {
    let full = lh();
    let k = rng.gen_range(0..=2);
    let u = LabelUniverse::from_labels(full.labels()[..k].iter().cloned());
    let a = random_set(rng, &u, 3);
    let b = random_set(rng, &u, 3);
    let c = random_set(rng, &u, 3);
    let inputs = || json!({"A": set_json(&a), "B": set_json(&b), "C": set_json(&c)});

    for x in [&a, &b, &c] {
        let Some(to_one) = ok_or_fail(t, "terminal", inputs, enumerate_hom(x, &terminal(&u), cap))
        else {
            continue;
        };
        t.check(
            "terminal",
            to_one.len() == 1,
            inputs,
            || json!({"homs": to_one.len()}),
        );
        let Some(from_zero) = ok_or_fail(t, "initial", inputs, enumerate_hom(&initial(&u), x, cap))
        else {
            continue;
        };
        t.check(
            "initial",
            from_zero.len() == 1,
            inputs,
            || json!({"homs": from_zero.len()}),
        );
    }

    // Product: Hom(C, A × B) ≅ Hom(C, A) × Hom(C, B).
    let p = Product::new(&a, &b)?;
    if let (Some(ca), Some(cb), Some(cab)) = (
        ok_or_fail(t, "product", inputs, enumerate_hom(&c, &a, cap)),
        ok_or_fail(t, "product", inputs, enumerate_hom(&c, &b, cap)),
        ok_or_fail(t, "product", inputs, enumerate_hom(&c, &p.object, cap)),
    ) {
        let mut fibres: HashMap<(Vec<usize>, Vec<usize>), usize> = HashMap::new();
        for k in &cab {
            let key = (
                compose(&p.proj1, k).indices().to_vec(),
                compose(&p.proj2, k).indices().to_vec(),
            );
            *fibres.entry(key).or_default() += 1;
        }
        for f in &ca {
            for g in &cb {
                let h = p.tuple(f, g)?;
                let ok = h.validate().is_ok()
                    && compose(&p.proj1, &h) == *f
                    && compose(&p.proj2, &h) == *g
                    && fibres.get(&(f.indices().to_vec(), g.indices().to_vec())) == Some(&1);
                t.check(
                    "product",
                    ok,
                    inputs,
                    || json!({"f": table_json(f), "g": table_json(g)}),
                );
            }
        }
        t.check(
            "product-count",
            cab.len() == ca.len() * cb.len(),
            inputs,
            || json!({"pairs": cab.len()}),
        );
    }

    // Coproduct: Hom(A + B, C) ≅ Hom(A, C) × Hom(B, C).
    let s = Coproduct::new(&a, &b)?;
    if let (Some(ac), Some(bc), Some(abc)) = (
        ok_or_fail(t, "coproduct", inputs, enumerate_hom(&a, &c, cap)),
        ok_or_fail(t, "coproduct", inputs, enumerate_hom(&b, &c, cap)),
        ok_or_fail(t, "coproduct", inputs, enumerate_hom(&s.object, &c, cap)),
    ) {
        let mut fibres: HashMap<(Vec<usize>, Vec<usize>), usize> = HashMap::new();
        for k in &abc {
            let key = (
                compose(k, &s.inj1).indices().to_vec(),
                compose(k, &s.inj2).indices().to_vec(),
            );
            *fibres.entry(key).or_default() += 1;
        }
        for f in &ac {
            for g in &bc {
                let h = s.cotuple(f, g)?;
                let ok = h.validate().is_ok()
                    && compose(&h, &s.inj1) == *f
                    && compose(&h, &s.inj2) == *g
                    && fibres.get(&(f.indices().to_vec(), g.indices().to_vec())) == Some(&1);
                t.check(
                    "coproduct",
                    ok,
                    inputs,
                    || json!({"f": table_json(f), "g": table_json(g)}),
                );
            }
        }
    }

    // Equalizers and coequalizers of every parallel pair A ⇉ B.
    if let (Some(ab), Some(chom), Some(bchom)) = (
        ok_or_fail(t, "equalizer", inputs, enumerate_hom(&a, &b, cap)),
        ok_or_fail(t, "equalizer", inputs, enumerate_hom(&c, &a, cap)),
        ok_or_fail(t, "coequalizer", inputs, enumerate_hom(&b, &c, cap)),
    ) {
        for f in &ab {
            for g in &ab {
                let w = || json!({"f": table_json(f), "g": table_json(g)});
                let e = Equalizer::new(f, g)?;
                let Some(ce) =
                    ok_or_fail(t, "equalizer", inputs, enumerate_hom(&c, &e.object, cap))
                else {
                    continue;
                };
                let mut fibres: HashMap<Vec<usize>, usize> = HashMap::new();
                for k in &ce {
                    *fibres
                        .entry(compose(&e.include, k).indices().to_vec())
                        .or_default() += 1;
                }
                let mut ok = e.include.validate().is_ok();
                let mut equalizing = 0;
                for h in &chom {
                    if compose(f, h) == compose(g, h) {
                        equalizing += 1;
                        ok &= match e.factor(h) {
                            Ok(k) => {
                                compose(&e.include, &k) == *h && fibres.get(h.indices()) == Some(&1)
                            }
                            Err(_) => false,
                        };
                    }
                }
                ok &= equalizing == ce.len();
                t.check("equalizer", ok, inputs, w);

                let q = Coequalizer::new(f, g)?;
                let Some(qc) =
                    ok_or_fail(t, "coequalizer", inputs, enumerate_hom(&q.object, &c, cap))
                else {
                    continue;
                };
                let mut fibres: HashMap<Vec<usize>, usize> = HashMap::new();
                for k in &qc {
                    *fibres
                        .entry(compose(k, &q.quotient).indices().to_vec())
                        .or_default() += 1;
                }
                let mut ok = q.quotient.validate().is_ok()
                    && compose(&q.quotient, f) == compose(&q.quotient, g);
                let mut coequalizing = 0;
                for h in &bchom {
                    if compose(h, f) == compose(h, g) {
                        coequalizing += 1;
                        ok &= match q.factor(h) {
                            Ok(k) => {
                                compose(&k, &q.quotient) == *h
                                    && fibres.get(h.indices()) == Some(&1)
                            }
                            Err(_) => false,
                        };
                    }
                }
                ok &= coequalizing == qc.len();
                t.check("coequalizer", ok, inputs, w);
            }
        }
    }

    // Exponential: Hom(C × A, B) ≅ Hom(C, B^A) via currying.
    let Some(exp) = ok_or_fail(t, "exponential", inputs, Exponential::new(&a, &b, cap)) else {
        return Ok(());
    };
    let ca = Product::new(&c, &a)?;
    if let (Some(uncurried), Some(named)) = (
        ok_or_fail(t, "exponential", inputs, enumerate_hom(&ca.object, &b, cap)),
        ok_or_fail(
            t,
            "exponential",
            inputs,
            enumerate_hom(&c, &exp.object, cap),
        ),
    ) {
        t.check(
            "exponential-eval",
            exp.eval.validate().is_ok(),
            inputs,
            || json!(null),
        );
        let mut fibres: HashMap<Vec<usize>, usize> = HashMap::new();
        for g in &named {
            *fibres
                .entry(exp.uncurry(g)?.indices().to_vec())
                .or_default() += 1;
        }
        for f in &uncurried {
            let ok = match exp.curry(&c, f) {
                Ok(g) => {
                    g.validate().is_ok()
                        && exp.uncurry(&g).map(|h| h == *f).unwrap_or(false)
                        && fibres.get(f.indices()) == Some(&1)
                        && product_morphism(&g, &Morphism::identity(&a))
                            .map(|gi| compose(&exp.eval, &gi) == *f)
                            .unwrap_or(false)
                }
                Err(_) => false,
            };
            t.check("exponential", ok, inputs, || json!({"f": table_json(f)}));
        }
        t.check(
            "exponential-count",
            uncurried.len() == named.len(),
            inputs,
            || json!({"uncurried": uncurried.len(), "named": named.len()}),
        );
    }
    Ok(())
}

fn adjunction(rng: &mut impl Rng, cap: EnumCap, t: &mut Tally) -> Result<(), HarnessError> {
    let u = lh();
    for pi in u.subsets() {
        let m = mask(&u, &pi);
        let rest = m.rest();
        let x = random_set(rng, &u, 3);
        let y = random_set(rng, &u, 3);
        let xr = random_set(rng, &rest, 3);
        let yr = random_set(rng, &rest, 3);
        let inputs = || {
            json!({"pi": labels_json(&pi), "X": set_json(&x), "Y": set_json(&y),
                   "Xr": set_json(&xr), "Yr": set_json(&yr)})
        };

        // Δ_π ⊣ U_π and U_π ⊣ ∇_π: the transposes are identities on tables.
        let pairs = [
            (
                "discrete-forget",
                discretize(&m, &xr)?,
                y.clone(),
                xr.clone(),
                forget(&m, &y)?,
            ),
            (
                "forget-codiscrete",
                x.clone(),
                codiscretize(&m, &yr)?,
                forget(&m, &x)?,
                yr.clone(),
            ),
        ];
        for (law, s1, t1, s2, t2) in pairs {
            if let (Some(h1), Some(h2)) = (
                ok_or_fail(t, law, inputs, enumerate_hom(&s1, &t1, cap)),
                ok_or_fail(t, law, inputs, enumerate_hom(&s2, &t2, cap)),
            ) {
                t.check(
                    law,
                    tables(&h1) == tables(&h2),
                    inputs,
                    || json!({"left": h1.len(), "right": h2.len()}),
                );
            }
        }

        // C_π ⊣ Δ_π with explicit transposes.
        let comps = components(&m, &x)?;
        let dyr = discretize(&m, &yr)?;
        if let (Some(from_c), Some(into_d)) = (
            ok_or_fail(
                t,
                "components-discrete",
                inputs,
                enumerate_hom(&comps.object, &yr, cap),
            ),
            ok_or_fail(
                t,
                "components-discrete",
                inputs,
                enumerate_hom(&x, &dyr, cap),
            ),
        ) {
            for g in &from_c {
                let ok = comps
                    .unfactor(g)
                    .and_then(|f| f.validate().map(|_| f))
                    .and_then(|f| comps.factor(&f))
                    .map(|back| back == *g)
                    .unwrap_or(false);
                t.check("components-discrete", ok, inputs, || table_json(g));
            }
            for f in &into_d {
                let ok = comps
                    .factor(f)
                    .and_then(|g| comps.unfactor(&g))
                    .map(|back| back == *f)
                    .unwrap_or(false);
                t.check("components-discrete", ok, inputs, || table_json(f));
            }
            t.check(
                "components-discrete-count",
                from_c.len() == into_d.len(),
                inputs,
                || json!({"left": from_c.len(), "right": into_d.len()}),
            );
        }

        // □_π ⊣ ◆_π.
        let bx = modality_object(ModalityKind::BoxK, &m, &x)?;
        let dy = modality_object(ModalityKind::DiamondK, &m, &y)?;
        if let (Some(from_box), Some(into_diamond)) = (
            ok_or_fail(t, "box-diamond", inputs, enumerate_hom(&bx, &y, cap)),
            ok_or_fail(t, "box-diamond", inputs, enumerate_hom(&x, &dy, cap)),
        ) {
            for f in &from_box {
                let ok = adjoint_transpose(TransposeDirection::Forward, &m, f, &x)
                    .and_then(|g| adjoint_transpose(TransposeDirection::Backward, &m, &g, &y))
                    .map(|back| back == *f)
                    .unwrap_or(false);
                t.check("box-diamond", ok, inputs, || table_json(f));
            }
            for g in &into_diamond {
                let ok = adjoint_transpose(TransposeDirection::Backward, &m, g, &y)
                    .and_then(|f| adjoint_transpose(TransposeDirection::Forward, &m, &f, &x))
                    .map(|back| back == *g)
                    .unwrap_or(false);
                t.check("box-diamond", ok, inputs, || table_json(g));
            }
            t.check(
                "box-diamond-count",
                from_box.len() == into_diamond.len(),
                inputs,
                || json!({"left": from_box.len(), "right": into_diamond.len()}),
            );
        }
    }
    Ok(())
}

fn is_identity(m: &Morphism) -> bool {
    m.source() == m.target() && m.indices().iter().enumerate().all(|(i, &j)| i == j)
}

fn corollary(rng: &mut impl Rng, t: &mut Tally) -> Result<(), HarnessError> {
    let u = lmh();
    let x = random_set(rng, &u, 3);
    let y = random_set(rng, &u, 3);
    for pi in u.subsets() {
        let m = mask(&u, &pi);
        let xr = random_set(rng, &m.rest(), 3);
        let inputs = || json!({"pi": labels_json(&pi), "X": set_json(&x), "Y": set_json(&y), "Xr": set_json(&xr)});
        let boxed = |s: &ClassifiedSet| modality_object(ModalityKind::BoxK, &m, s);
        let diamond = |s: &ClassifiedSet| modality_object(ModalityKind::DiamondK, &m, s);

        t.check(
            "forget-discrete",
            forget(&m, &discretize(&m, &xr)?)? == xr,
            inputs,
            || json!(null),
        );
        t.check(
            "forget-codiscrete",
            forget(&m, &codiscretize(&m, &xr)?)? == xr,
            inputs,
            || json!(null),
        );
        let bxx = boxed(&x)?;
        t.check("box-idempotent", boxed(&bxx)? == bxx, inputs, || {
            set_json(&bxx)
        });
        let dxx = diamond(&x)?;
        t.check("diamond-idempotent", diamond(&dxx)? == dxx, inputs, || {
            set_json(&dxx)
        });

        let shape_ok = match shape_idempotence_iso(&m, &x) {
            Ok((to, from)) => {
                is_identity(&compose(&to, &from)) && is_identity(&compose(&from, &to))
            }
            Err(_) => false,
        };
        t.check("shape-idempotent", shape_ok, inputs, || json!(null));

        let xy = Product::new(&x, &y)?.object;
        let prod_boxed = Product::new(&boxed(&x)?, &boxed(&y)?)?.object;
        t.check("box-products", boxed(&xy)? == prod_boxed, inputs, || {
            set_json(&boxed(&xy).unwrap())
        });

        let cmp_ok = match components_product_comparison(&m, &x, &y) {
            Ok(c) => {
                let n = c.target().len();
                let mut inv = vec![usize::MAX; n];
                for (i, &j) in c.indices().iter().enumerate() {
                    inv[j] = i;
                }
                c.source().len() == n
                    && inv.iter().all(|&i| i != usize::MAX)
                    && Morphism::from_indices(c.target().clone(), c.source().clone(), inv).is_ok()
            }
            Err(_) => false,
        };
        t.check("components-products", cmp_ok, inputs, || json!(null));

        let counit = structural_map(ModalityKind::BoxK, &m, &x)?;
        let mut seen = counit.indices().to_vec();
        seen.sort_unstable();
        seen.dedup();
        t.check(
            "nullstellensatz-mono",
            seen.len() == x.len() && counit.validate().is_ok(),
            inputs,
            || table_json(&counit),
        );
        let unit = structural_map(ModalityKind::ShapeK, &m, &x)?;
        let mut hit = vec![false; unit.target().len()];
        for &j in unit.indices() {
            hit[j] = true;
        }
        t.check(
            "shape-unit-epi",
            hit.iter().all(|&h| h) && unit.validate().is_ok(),
            inputs,
            || table_json(&unit),
        );
        let eta = structural_map(ModalityKind::DiamondK, &m, &x)?;
        t.check("diamond-unit", eta.validate().is_ok(), inputs, || {
            table_json(&eta)
        });
    }
    Ok(())
}

/// The nine stacking laws for one pair `(π, π′)`.
fn switch_laws(
    t: &mut Tally,
    x: &ClassifiedSet,
    p: &LabelUniverse,
    q: &LabelUniverse,
) -> Result<(), HarnessError> {
    let bx = |s: &LabelUniverse, y: &ClassifiedSet| box_at(s, y);
    let dm = |s: &LabelUniverse, y: &ClassifiedSet| diamond_at(s, y);
    let inputs = || json!({"X": set_json(x), "pi": labels_json(p), "pi2": labels_json(q)});
    let pq = p.union(q);
    let mut law = |name: &str, lhs: ClassifiedSet, rhs: ClassifiedSet| {
        let ok = lhs == rhs;
        t.check(
            name,
            ok,
            inputs,
            || json!({"lhs": set_json(&lhs), "rhs": set_json(&rhs)}),
        );
    };
    law("box-box", bx(p, &bx(q, x)?)?, bx(&pq, x)?);
    law("box-box-swapped", bx(q, &bx(p, x)?)?, bx(&pq, x)?);
    law("diamond-diamond", dm(p, &dm(q, x)?)?, dm(&pq, x)?);
    law("diamond-diamond-swapped", dm(q, &dm(p, x)?)?, dm(&pq, x)?);
    if p.is_subset(q) {
        law("box-absorbs-diamond", bx(q, &dm(p, x)?)?, bx(q, x)?);
        law("diamond-absorbs-box", dm(q, &bx(p, x)?)?, dm(q, x)?);
    }
    if p.intersection(q).is_empty() {
        law("disjoint-commute", bx(p, &dm(q, x)?)?, dm(q, &bx(p, x)?)?);
    }
    law(
        "box-diamond-switch",
        bx(p, &dm(q, x)?)?,
        dm(&q.difference(p), &bx(p, x)?)?,
    );
    law(
        "diamond-box-switch",
        dm(p, &bx(q, x)?)?,
        bx(&q.difference(p), &dm(p, x)?)?,
    );
    Ok(())
}

/// A square `D = A ∩ B ⊆ A, B ⊆ C` of label sets.
struct Square {
    c: LabelUniverse,
    a: LabelUniverse,
    b: LabelUniverse,
    d: LabelUniverse,
}

fn pullback_squares(u: &LabelUniverse) -> Vec<Square> {
    let mut out = Vec::new();
    for c in u.subsets() {
        for a in c.subsets() {
            for b in c.subsets() {
                let d = a.intersection(&b);
                out.push(Square {
                    c: c.clone(),
                    a: a.clone(),
                    b,
                    d,
                });
            }
        }
    }
    out
}

/// `U_α Δ_β = Δ_γ U_δ` and `U_α ∇_β = ∇_γ U_δ` on every square, and
/// `Δ_α ∇_γ = ∇_β Δ_δ` where the square is also a pushout (`A ∪ B = C`).
fn square_equations(
    t: &mut Tally,
    sq: &Square,
    xb: &ClassifiedSet,
    xd: &ClassifiedSet,
) -> Result<(), HarnessError> {
    let alpha = mask(&sq.c, &sq.c.difference(&sq.a));
    let beta = mask(&sq.c, &sq.c.difference(&sq.b));
    let gamma = mask(&sq.a, &sq.a.difference(&sq.d));
    let delta = mask(&sq.b, &sq.b.difference(&sq.d));
    let inputs = || {
        json!({"C": labels_json(&sq.c), "A": labels_json(&sq.a), "B": labels_json(&sq.b),
               "XB": set_json(xb), "XD": set_json(xd)})
    };
    let lhs = forget(&alpha, &discretize(&beta, xb)?)?;
    let rhs = discretize(&gamma, &forget(&delta, xb)?)?;
    t.check(
        "square-forget-discrete",
        lhs == rhs,
        inputs,
        || json!({"lhs": set_json(&lhs), "rhs": set_json(&rhs)}),
    );
    let lhs = forget(&alpha, &codiscretize(&beta, xb)?)?;
    let rhs = codiscretize(&gamma, &forget(&delta, xb)?)?;
    t.check(
        "square-forget-codiscrete",
        lhs == rhs,
        inputs,
        || json!({"lhs": set_json(&lhs), "rhs": set_json(&rhs)}),
    );
    if sq.a.union(&sq.b) == sq.c {
        let lhs = discretize(&alpha, &codiscretize(&gamma, xd)?)?;
        let rhs = codiscretize(&beta, &discretize(&delta, xd)?)?;
        t.check(
            "square-discrete-codiscrete",
            lhs == rhs,
            inputs,
            || json!({"lhs": set_json(&lhs), "rhs": set_json(&rhs)}),
        );
    }
    Ok(())
}

fn levelled(rng: &mut impl Rng, t: &mut Tally) -> Result<(), HarnessError> {
    let u = lmh();
    let x = random_set(rng, &u, 3);
    let subsets = u.subsets();
    for p in &subsets {
        for q in &subsets {
            switch_laws(t, &x, p, q)?;
        }
    }
    let by_universe: HashMap<LabelUniverse, ClassifiedSet> = subsets
        .iter()
        .map(|s| (s.clone(), random_set(rng, s, 3)))
        .collect();
    for sq in pullback_squares(&u) {
        square_equations(t, &sq, &by_universe[&sq.b], &by_universe[&sq.d])?;
    }
    Ok(())
}

fn strength_laws(rng: &mut impl Rng, t: &mut Tally) -> Result<(), HarnessError> {
    let u = lh();
    let a = random_set(rng, &u, 3);
    let b = random_set(rng, &u, 3);
    let c = random_set(rng, &u, 3);
    let one = terminal(&u);
    for pi in u.subsets() {
        let m = mask(&u, &pi);
        let inputs = || json!({"pi": labels_json(&pi), "A": set_json(&a), "B": set_json(&b), "C": set_json(&c)});
        let dm = |s: &ClassifiedSet| modality_object(ModalityKind::DiamondK, &m, s);
        let dmap = |f: &Morphism| modality_morphism(ModalityKind::DiamondK, &m, f);
        let eta = |s: &ClassifiedSet| structural_map(ModalityKind::DiamondK, &m, s);
        let id = Morphism::identity;
        let mut law = |name: &str, lhs: Morphism, rhs: Morphism| {
            let ok = lhs == rhs;
            t.check(
                name,
                ok,
                inputs,
                || json!({"lhs": table_json(&lhs), "rhs": table_json(&rhs)}),
            );
        };

        // ◆π₂ ∘ t_{1,A} = π₂.
        let one_a = Product::new(&one, &a)?;
        let lhs = compose(&dmap(&one_a.proj2)?, &strength(&m, &one, &a)?);
        law(
            "strength-unit-object",
            lhs,
            Product::new(&one, &dm(&a)?)?.proj2,
        );

        // ◆α ∘ t_{A×B,C} = t_{A,B×C} ∘ (id × t_{B,C}) ∘ α.
        let ab = Product::new(&a, &b)?.object;
        let bc = Product::new(&b, &c)?.object;
        let lhs = compose(&dmap(&associator(&a, &b, &c)?)?, &strength(&m, &ab, &c)?);
        let rhs = compose(
            &strength(&m, &a, &bc)?,
            &compose(
                &product_morphism(&id(&a), &strength(&m, &b, &c)?)?,
                &associator(&a, &b, &dm(&c)?)?,
            ),
        );
        law("strength-associative", lhs, rhs);

        // t_{A,B} ∘ (id × η_B) = η_{A×B}.
        let lhs = compose(
            &strength(&m, &a, &b)?,
            &product_morphism(&id(&a), &eta(&b)?)?,
        );
        law("strength-unit", lhs, eta(&Product::new(&a, &b)?.object)?);

        // t_{A,B} ∘ (id × μ_B) = μ_{A×B} ∘ ◆t_{A,B} ∘ t_{A,◆B}, with μ the identity on ◆◆ = ◆.
        let db = dm(&b)?;
        let ddb = dm(&db)?;
        let mu_b = id(&db).retype(ddb.clone(), db.clone())?;
        let dab = dm(&ab)?;
        let mu_ab = id(&dab).retype(dm(&dab)?, dab.clone())?;
        let lhs = compose(&strength(&m, &a, &b)?, &product_morphism(&id(&a), &mu_b)?);
        let rhs = compose(
            &mu_ab,
            &compose(&dmap(&strength(&m, &a, &b)?)?, &strength(&m, &a, &db)?),
        );
        law("strength-multiplication", lhs, rhs);
    }
    Ok(())
}

fn ideal(rng: &mut impl Rng, cap: EnumCap, t: &mut Tally) -> Result<(), HarnessError> {
    let u = lh();
    let a = random_set(rng, &u, 3);
    let b = random_set(rng, &u, 3);
    for pi in u.subsets() {
        let protected_b = diamond_at(&pi, &b)?;
        for (law, target) in [("ideal", b.clone()), ("ideal-diamond", protected_b)] {
            if !is_protected_at(&target, &pi)? {
                continue;
            }
            let inputs =
                || json!({"pi": labels_json(&pi), "A": set_json(&a), "B": set_json(&target)});
            if let Some(exp) = ok_or_fail(t, law, inputs, Exponential::new(&a, &target, cap)) {
                let ok = is_protected_at(&exp.object, &pi)?;
                t.check(law, ok, inputs, || set_json(&exp.object));
            }
        }
    }
    Ok(())
}

fn contractibility(rng: &mut impl Rng, t: &mut Tally) -> Result<(), HarnessError> {
    let u = lh();
    for pi in u.subsets().into_iter().filter(|p| !p.is_empty()) {
        let m = mask(&u, &pi);
        let n = rng.gen_range(0..=3);
        let x = random_set_of_size(rng, &m.rest(), n);
        let classes = components(&m, &codiscretize(&m, &x)?)?.object.len();
        let expected = usize::from(!x.is_empty());
        t.check(
            "contractible",
            classes == expected,
            || json!({"pi": labels_json(&pi), "X": set_json(&x)}),
            || json!({"components": classes}),
        );
    }
    Ok(())
}

fn constancy(rng: &mut impl Rng, cap: EnumCap, t: &mut Tally) -> Result<(), HarnessError> {
    let u = lh();
    let n = rng.gen_range(1..=3);
    let a = random_set_of_size(rng, &u, n);
    for pi in u.subsets().into_iter().filter(|p| !p.is_empty()) {
        let m = mask(&u, &pi);
        let b = random_set(rng, &m.rest(), 3);
        constancy_cases(t, &a, &b, &m, cap)?;
        for q in u.subsets() {
            let gap = pi.difference(&q);
            if gap.is_empty() {
                continue;
            }
            let b = box_at(&gap, &random_set(rng, &u, 3))?;
            constancy_between_cases(t, &a, &b, &pi, &q, cap)?;
        }
    }
    let b = random_set(rng, &u, 3);
    codiscrete_constancy_cases(t, &a, &b, cap)?;
    Ok(())
}
