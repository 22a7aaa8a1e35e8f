//! Hom-set enumeration and exponential objects.

use std::collections::HashMap;

use super::element::Element;
use super::limits::{terminal, Product};
use super::morphism::Morphism;
use super::set::{ClassifiedSet, Relation};
use super::CSetError;

/// Upper bound on the number of candidate functions `|B|^|A|` an enumeration may face.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumCap(pub u64);

impl Default for EnumCap {
    fn default() -> Self {
        EnumCap(1_000_000)
    }
}

impl EnumCap {
    pub fn check(self, a: usize, b: usize) -> Result<(), CSetError> {
        let required = candidate_count(a, b);
        if required.is_none_or(|r| r > self.0) {
            Err(CSetError::EnumerationCapExceeded {
                limit: self.0,
                domain: a,
                codomain: b,
            })
        } else {
            Ok(())
        }
    }
}

/// `b^a`, or `None` on overflow.
pub fn candidate_count(a: usize, b: usize) -> Option<u64> {
    u32::try_from(a)
        .ok()
        .and_then(|a| (b as u64).checked_pow(a))
}

/// Every morphism `A → B`, lexicographic in the index tables.
pub fn enumerate_hom(
    a: &ClassifiedSet,
    b: &ClassifiedSet,
    cap: EnumCap,
) -> Result<Vec<Morphism>, CSetError> {
    if a.universe() != b.universe() {
        return Err(CSetError::UniverseMismatch);
    }
    cap.check(a.len(), b.len())?;
    Ok(hom_tables(a, b)
        .into_iter()
        .map(|t| Morphism::unchecked(a.clone(), b.clone(), t))
        .collect())
}

/// Backtracking search; a partial assignment is extended only while every
/// related pair among the assigned prefix stays related in the target.
pub(crate) fn hom_tables(a: &ClassifiedSet, b: &ClassifiedSet) -> Vec<Vec<usize>> {
    let (n, m) = (a.len(), b.len());
    let mut out = Vec::new();
    if n > 0 && m == 0 {
        return out;
    }
    let ra = a.relations();
    let rb = b.relations();
    let mut cur = vec![0usize; n];
    fn go(
        k: usize,
        n: usize,
        m: usize,
        cur: &mut Vec<usize>,
        ra: &[Relation],
        rb: &[Relation],
        out: &mut Vec<Vec<usize>>,
    ) {
        if k == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..m {
            cur[k] = v;
            let ok = ra.iter().zip(rb).all(|(r, s)| {
                (0..=k).all(|j| {
                    (!r.get(j, k) || s.get(cur[j], v)) && (!r.get(k, j) || s.get(v, cur[j]))
                })
            });
            if ok {
                go(k + 1, n, m, cur, ra, rb, out);
            }
        }
    }
    go(0, n, m, &mut cur, ra, rb, &mut out);
    out
}

/// Points `1 → X`, in carrier order.
pub fn enumerate_points(x: &ClassifiedSet) -> Vec<Morphism> {
    let one = terminal(x.universe());
    (0..x.len())
        .map(|i| Morphism::unchecked(one.clone(), x.clone(), vec![i]))
        .collect()
}

/// `B^A` with its evaluation map. Carrier elements are `Fun` tables over `A`.
#[derive(Clone, Debug)]
pub struct Exponential {
    pub object: ClassifiedSet,
    /// `ev : B^A × A → B`.
    pub eval: Morphism,
    domain: ClassifiedSet,
    codomain: ClassifiedSet,
    tables: Vec<Vec<usize>>,
    lookup: HashMap<Vec<usize>, usize>,
}

impl Exponential {
    pub fn new(a: &ClassifiedSet, b: &ClassifiedSet, cap: EnumCap) -> Result<Self, CSetError> {
        if a.universe() != b.universe() {
            return Err(CSetError::UniverseMismatch);
        }
        cap.check(a.len(), b.len())?;
        let tables = hom_tables(a, b);
        let carrier: Vec<Element> = tables
            .iter()
            .map(|t| {
                Element::fun(
                    t.iter()
                        .enumerate()
                        .map(|(i, &j)| (a.carrier()[i].clone(), b.carrier()[j].clone()))
                        .collect(),
                )
            })
            .collect();
        let k = tables.len();
        let rels = a
            .relations()
            .iter()
            .zip(b.relations())
            .map(|(ra, rb)| {
                Relation::from_fn(k, |p, q| {
                    ra.pairs().all(|(x, y)| rb.get(tables[p][x], tables[q][y]))
                })
            })
            .collect();
        let object = ClassifiedSet::from_parts(a.universe().clone(), carrier, rels);
        let prod = Product::new(&object, a)?;
        let eval_map = (0..k)
            .flat_map(|p| (0..a.len()).map(move |x| (p, x)))
            .map(|(p, x)| tables[p][x])
            .collect();
        let eval = Morphism::unchecked(prod.object, b.clone(), eval_map);
        let lookup = tables
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, t)| (t, i))
            .collect();
        Ok(Exponential {
            object,
            eval,
            domain: a.clone(),
            codomain: b.clone(),
            tables,
            lookup,
        })
    }

    pub fn domain(&self) -> &ClassifiedSet {
        &self.domain
    }

    pub fn codomain(&self) -> &ClassifiedSet {
        &self.codomain
    }

    /// Index of the carrier element whose table is `t`.
    pub fn index_of_table(&self, t: &[usize]) -> Option<usize> {
        self.lookup.get(t).copied()
    }

    pub fn table(&self, i: usize) -> &[usize] {
        &self.tables[i]
    }

    /// The name `1 → B^A` of a morphism `A → B`.
    pub fn name_of(&self, f: &Morphism) -> Result<usize, CSetError> {
        if f.source() != &self.domain || f.target() != &self.codomain {
            return Err(CSetError::EndpointMismatch);
        }
        Ok(self.lookup[f.indices()])
    }

    /// `λf : C → B^A` for `f : C × A → B`.
    pub fn curry(&self, c: &ClassifiedSet, f: &Morphism) -> Result<Morphism, CSetError> {
        let prod = Product::new(c, &self.domain)?;
        if f.source() != &prod.object || f.target() != &self.codomain {
            return Err(CSetError::EndpointMismatch);
        }
        let n = self.domain.len();
        let map = (0..c.len())
            .map(|ci| {
                let t: Vec<usize> = (0..n).map(|x| f.apply_index(prod.index(ci, x))).collect();
                self.lookup[&t]
            })
            .collect();
        Ok(Morphism::unchecked(c.clone(), self.object.clone(), map))
    }

    /// `ev ∘ (g × id_A) : C × A → B` for `g : C → B^A`.
    pub fn uncurry(&self, g: &Morphism) -> Result<Morphism, CSetError> {
        if g.target() != &self.object {
            return Err(CSetError::EndpointMismatch);
        }
        let c = g.source();
        let prod = Product::new(c, &self.domain)?;
        let n = self.domain.len();
        let map = (0..c.len() * n)
            .map(|p| self.tables[g.apply_index(p / n.max(1))][p % n.max(1)])
            .collect();
        Ok(Morphism::unchecked(prod.object, self.codomain.clone(), map))
    }
}
