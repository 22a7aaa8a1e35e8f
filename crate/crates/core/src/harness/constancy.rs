use std::time::Instant;

use serde_json::json;

use super::report::{CheckReport, Tally};
use super::{attempt, labels_json, set_json, table_json, HarnessError};
use crate::cohesion::{box_at, diamond_at, discretize, modality_object, LevelMask, ModalityKind};
use crate::cset::{enumerate_hom, ClassifiedSet, EnumCap, LabelUniverse};

/// Every `◆_π A → Δ_π B` is constant and, for nonempty `A`, there are exactly
/// `|B|` of them. `B` lives over `ℒ − π`. Vacuous when `π = ∅`.
pub fn check_constancy(
    a: &ClassifiedSet,
    b: &ClassifiedSet,
    pi: &LevelMask,
    cap: EnumCap,
) -> Result<CheckReport, HarnessError> {
    let start = Instant::now();
    let mut tally = Tally::default();
    constancy_cases(&mut tally, a, b, pi, cap)?;
    Ok(CheckReport::from_tally("constancy", 0, tally, start))
}

pub(crate) fn constancy_cases(
    tally: &mut Tally,
    a: &ClassifiedSet,
    b: &ClassifiedSet,
    pi: &LevelMask,
    cap: EnumCap,
) -> Result<(), HarnessError> {
    if pi.selected().is_empty() {
        tally.note("π = ∅: constancy does not apply");
        return Ok(());
    }
    let src = modality_object(ModalityKind::DiamondK, pi, a)?;
    let tgt = discretize(pi, b)?;
    let inputs = || json!({"A": set_json(a), "B": set_json(b), "pi": labels_json(pi.selected())});
    let Some(homs) = attempt(tally, "constancy", inputs, enumerate_hom(&src, &tgt, cap)) else {
        return Ok(());
    };
    for f in &homs {
        tally.check("constancy", f.is_constant(), inputs, || table_json(f));
    }
    if a.is_empty() {
        tally.note("empty A: point count skipped");
    } else {
        tally.check(
            "constancy-count",
            homs.len() == b.len(),
            inputs,
            || json!({"homs": homs.len(), "points": b.len()}),
        );
    }
    Ok(())
}

/// Every `◆_π A → ◆_{π′} B` is constant when `B` is visible at `π − π′ ≠ ∅`
/// and `A` is nonempty.
pub fn check_constancy_between(
    a: &ClassifiedSet,
    b: &ClassifiedSet,
    pi: &LabelUniverse,
    pi2: &LabelUniverse,
    cap: EnumCap,
) -> Result<CheckReport, HarnessError> {
    let start = Instant::now();
    let mut tally = Tally::default();
    constancy_between_cases(&mut tally, a, b, pi, pi2, cap)?;
    Ok(CheckReport::from_tally(
        "constancy-between",
        0,
        tally,
        start,
    ))
}

pub(crate) fn constancy_between_cases(
    tally: &mut Tally,
    a: &ClassifiedSet,
    b: &ClassifiedSet,
    pi: &LabelUniverse,
    pi2: &LabelUniverse,
    cap: EnumCap,
) -> Result<(), HarnessError> {
    let gap = pi.difference(pi2);
    if gap.is_empty() || a.is_empty() {
        tally.note("π − π′ = ∅ or A empty: constancy does not apply");
        return Ok(());
    }
    if !crate::cohesion::is_visible_at(b, &gap)? {
        return Err(HarnessError::InvalidArgument(format!(
            "B must be visible at {{{}}}",
            gap.labels()
                .iter()
                .map(|l| l.as_str())
                .collect::<Vec<_>>()
                .join(", ")
        )));
    }
    let src = diamond_at(pi, a)?;
    let tgt = diamond_at(pi2, b)?;
    let inputs = || json!({"A": set_json(a), "B": set_json(b), "pi": labels_json(pi), "pi2": labels_json(pi2)});
    if let Some(homs) = attempt(
        tally,
        "constancy-between",
        inputs,
        enumerate_hom(&src, &tgt, cap),
    ) {
        for f in &homs {
            tally.check("constancy-between", f.is_constant(), inputs, || {
                table_json(f)
            });
        }
    }
    Ok(())
}

/// The global dual: every `∇A → □B` is constant, and there are `|B|` of them
/// for nonempty `A` over a nonempty universe.
pub(crate) fn codiscrete_constancy_cases(
    tally: &mut Tally,
    a: &ClassifiedSet,
    b: &ClassifiedSet,
    cap: EnumCap,
) -> Result<(), HarnessError> {
    let u = a.universe().clone();
    if u.is_empty() || a.is_empty() {
        tally.note("empty universe or empty A: dual constancy does not apply");
        return Ok(());
    }
    let src = diamond_at(&u, a)?;
    let tgt = box_at(&u, b)?;
    let inputs = || json!({"A": set_json(a), "B": set_json(b)});
    if let Some(homs) = attempt(
        tally,
        "dual-constancy",
        inputs,
        enumerate_hom(&src, &tgt, cap),
    ) {
        for f in &homs {
            tally.check("dual-constancy", f.is_constant(), inputs, || table_json(f));
        }
        tally.check(
            "dual-constancy-count",
            homs.len() == b.len(),
            inputs,
            || json!({"homs": homs.len(), "points": b.len()}),
        );
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cset::Element;

    fn lh() -> LabelUniverse {
        LabelUniverse::new(["L", "H"]).unwrap()
    }

    #[test]
    fn booleans_into_booleans() {
        let u = lh();
        let a = ClassifiedSet::delta_bool(&u);
        let b = ClassifiedSet::discrete(LabelUniverse::empty(), vec![Element::tt(), Element::ff()])
            .unwrap();
        let r = check_constancy(&a, &b, &LevelMask::all(&u), EnumCap::default()).unwrap();
        assert!(r.passed, "{}", r.to_text());
        assert_eq!(r.cases, 3);
    }

    #[test]
    fn empty_domain_and_empty_pi() {
        let u = lh();
        let a = ClassifiedSet::discrete(u.clone(), vec![]).unwrap();
        let b = ClassifiedSet::discrete(LabelUniverse::empty(), vec![Element::tt()]).unwrap();
        let r = check_constancy(&a, &b, &LevelMask::all(&u), EnumCap::default()).unwrap();
        assert!(r.failures.is_empty());
        let b = ClassifiedSet::delta_bool(&u);
        let r = check_constancy(
            &ClassifiedSet::delta_bool(&u),
            &b,
            &LevelMask::none(&u),
            EnumCap::default(),
        )
        .unwrap();
        assert!(r.vacuous);
    }

    #[test]
    fn non_constant_maps_are_caught() {
        // Once π′ covers π the premise fails and non-constant maps appear.
        let u = lh();
        let h = LabelUniverse::new(["H"]).unwrap();
        let a = ClassifiedSet::delta_bool(&u);
        let b = ClassifiedSet::delta_bool(&u);
        let r = check_constancy_between(&a, &b, &h, &LabelUniverse::empty(), EnumCap::default())
            .unwrap();
        assert!(r.passed);
        let src = diamond_at(&h, &a).unwrap();
        let tgt = diamond_at(&h, &b).unwrap();
        let homs = enumerate_hom(&src, &tgt, EnumCap::default()).unwrap();
        assert!(homs.iter().any(|f| !f.is_constant()));
    }

    #[test]
    fn dual_form() {
        let u = lh();
        let mut t = Tally::default();
        let a = ClassifiedSet::delta_bool(&u);
        codiscrete_constancy_cases(&mut t, &a, &a, EnumCap::default()).unwrap();
        assert!(t.failures.is_empty());
        assert_eq!(t.cases, 3);
    }
}
