use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cset::{ClassifiedSet, Element, Label, LabelUniverse};

/// The generator for trial `trial` of a run seeded with `seed`. Each trial
/// has its own stream, so results do not depend on scheduling.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// A set with carrier size uniform in `[0, max_carrier]` and each
/// off-diagonal pair related at each label with probability 1/2.
pub fn random_classified_set(
    seed: u64,
    universe: &LabelUniverse,
    max_carrier: usize,
) -> ClassifiedSet {
    random_set(&mut ChaCha8Rng::seed_from_u64(seed), universe, max_carrier)
}

pub fn random_set(
    rng: &mut impl Rng,
    universe: &LabelUniverse,
    max_carrier: usize,
) -> ClassifiedSet {
    let n = rng.gen_range(0..=max_carrier);
    random_set_of_size(rng, universe, n)
}

pub fn random_set_of_size(rng: &mut impl Rng, universe: &LabelUniverse, n: usize) -> ClassifiedSet {
    let carrier: Vec<Element> = (0..n)
        .map(|i| Element::atom(&format!("e{i}")).expect("valid atom"))
        .collect();
    let mut rels: BTreeMap<Label, Vec<(Element, Element)>> = BTreeMap::new();
    for l in universe.labels() {
        let mut pairs = Vec::new();
        for a in &carrier {
            for b in &carrier {
                if a != b && rng.gen_bool(0.5) {
                    pairs.push((a.clone(), b.clone()));
                }
            }
        }
        rels.insert(l.clone(), pairs);
    }
    ClassifiedSet::new(universe.clone(), carrier, rels).expect("generated set is well formed")
}

/// A uniformly chosen subset of `universe`.
pub fn random_subset(rng: &mut impl Rng, universe: &LabelUniverse) -> LabelUniverse {
    LabelUniverse::from_labels(
        universe
            .labels()
            .iter()
            .filter(|_| rng.gen_bool(0.5))
            .cloned(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lh() -> LabelUniverse {
        LabelUniverse::new(["L", "H"]).unwrap()
    }

    #[test]
    fn zero_carrier_is_empty() {
        for seed in 0..10 {
            assert!(random_classified_set(seed, &lh(), 0).is_empty());
        }
    }

    #[test]
    fn deterministic_in_seed() {
        for seed in 0..20 {
            assert_eq!(
                random_classified_set(seed, &lh(), 4),
                random_classified_set(seed, &lh(), 4)
            );
        }
        let a = trial_rng(3, 5).gen::<u64>();
        let b = trial_rng(3, 5).gen::<u64>();
        let c = trial_rng(3, 6).gen::<u64>();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn reflexive_and_sized() {
        let mut sizes = std::collections::BTreeSet::new();
        for seed in 0..200 {
            let x = random_classified_set(seed, &lh(), 3);
            assert!(x.len() <= 3);
            sizes.insert(x.len());
            assert!(x.relations().iter().all(|r| r.is_reflexive()));
        }
        assert_eq!(sizes.len(), 4);
    }
}
