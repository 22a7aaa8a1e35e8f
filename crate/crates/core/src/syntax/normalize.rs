//! Leftmost-outermost full normalization.
//!
//! Redex matching looks through ascriptions. When a reduct moves a subterm out
//! of a checked position, it is wrapped in the ascription the redex carried, so
//! single steps stay checkable. The final normal form has every ascription erased.

use thiserror::Error;

use super::ast::{Term, Type};
use super::subst::substitute;

pub const DEFAULT_FUEL: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("fuel exhausted after {0} steps")]
    FuelExhausted(u64),
}

/// Strips ascriptions, returning the core term and the outermost ascribed type.
fn peel(t: &Term) -> (&Term, Option<&Type>) {
    let mut ty = None;
    let mut cur = t;
    while let Term::Ann(m, a) = cur {
        if ty.is_none() {
            ty = Some(a);
        }
        cur = m;
    }
    (cur, ty)
}

fn wrap(v: &Term, ty: Option<Type>) -> Term {
    match (v, ty) {
        (Term::Var(_) | Term::Ann(..), _) | (_, None) => v.clone(),
        (_, Some(a)) => Term::ann(v.clone(), a),
    }
}

fn component(ty: Option<&Type>, pick: impl Fn(&Type) -> Option<&Type>) -> Option<Type> {
    ty.and_then(pick).cloned()
}

/// Contracts `t` itself if it is a redex.
fn contract(t: &Term) -> Option<Term> {
    match t {
        Term::App(f, a) => match peel(f).0 {
            Term::Lam(x, dom, b) => Some(substitute(b, x, &wrap(a, Some(dom.clone())))),
            _ => None,
        },
        Term::Fst(p) | Term::Snd(p) => {
            let (core, ty) = peel(p);
            let Term::Pair(a, b) = core else { return None };
            let first = matches!(t, Term::Fst(_));
            let cty = component(ty, |t| match t {
                Type::Prod(l, r) => Some(if first { &**l } else { &**r }),
                _ => None,
            });
            Some(wrap(if first { a } else { b }, cty))
        }
        Term::Case(s, x, n, y, p) => {
            let (core, ty) = peel(s);
            match core {
                Term::Inl(v) => {
                    let a = component(ty, |t| match t {
                        Type::Sum(l, _) => Some(&**l),
                        _ => None,
                    });
                    Some(substitute(n, x, &wrap(v, a)))
                }
                Term::Inr(v) => {
                    let b = component(ty, |t| match t {
                        Type::Sum(_, r) => Some(&**r),
                        _ => None,
                    });
                    Some(substitute(p, y, &wrap(v, b)))
                }
                _ => None,
            }
        }
        Term::If(c, a, b) => match peel(c).0 {
            Term::TT => Some((**a).clone()),
            Term::FF => Some((**b).clone()),
            _ => None,
        },
        Term::Let(x, m, n) => {
            let (core, ty) = peel(m);
            let inner = match core {
                Term::Ret(v) | Term::RetL(_, v) => v,
                _ => return None,
            };
            let a = component(ty, |t| match t {
                Type::Monad(a) | Type::LevMonad(_, a) => Some(&**a),
                _ => None,
            });
            Some(substitute(n, x, &wrap(inner, a)))
        }
        Term::LetBox(u, m, n) => {
            let (core, ty) = peel(m);
            let Term::BoxI(v) = core else { return None };
            let a = component(ty, |t| match t {
                Type::BoxT(a) => Some(&**a),
                _ => None,
            });
            Some(substitute(n, u, &wrap(v, a)))
        }
        Term::Unseal(l, m) => {
            let (core, ty) = peel(m);
            match core {
                Term::SealI(l2, v) if l2 == l => {
                    let a = component(ty, |t| match t {
                        Type::Seal(_, a) => Some(&**a),
                        _ => None,
                    });
                    Some(wrap(v, a))
                }
                _ => None,
            }
        }
        _ => None,
    }
}

/// One leftmost-outermost step, or `None` at a normal form.
pub fn step(t: &Term) -> Option<Term> {
    if let Some(r) = contract(t) {
        return Some(r);
    }
    let children = t.children();
    for (i, c) in children.iter().enumerate() {
        if let Some(new) = step(c) {
            let mut k = 0;
            let mut slot = Some(new);
            return Some(t.map_children(
                &mut |c| {
                    let out = if k == i {
                        slot.take().expect("single replacement")
                    } else {
                        c.clone()
                    };
                    k += 1;
                    out
                },
                false,
            ));
        }
    }
    None
}

/// Reduces until no redex remains, then erases ascriptions.
pub fn normalize(t: &Term, fuel: u64) -> Result<Term, NormalizeError> {
    let mut cur = t.clone();
    let mut steps = 0;
    while let Some(next) = step(&cur) {
        if steps == fuel {
            return Err(NormalizeError::FuelExhausted(steps));
        }
        steps += 1;
        cur = next;
    }
    Ok(cur.erase_annotations())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_equal, parse_term};

    fn nf(s: &str) -> Term {
        normalize(&parse_term(s).unwrap(), DEFAULT_FUEL).unwrap()
    }

    #[test]
    fn computation_rules() {
        assert_eq!(nf("if tt then ff else tt"), Term::FF);
        assert_eq!(nf("let box u = box tt in u"), Term::TT);
        assert_eq!(nf("unseal[H] (seal[H] tt)"), Term::TT);
        assert_eq!(nf("(\\x:Bool. (x, x)) tt"), Term::pair(Term::TT, Term::TT));
        assert_eq!(
            nf("case (inl tt : Bool + Unit) of inl a => a | inr b => ff"),
            Term::TT
        );
        assert_eq!(nf("let x = ret ff in ret x"), Term::ret(Term::FF));
        assert_eq!(nf("snd (tt, ff)"), Term::FF);
    }

    #[test]
    fn unseal_requires_matching_label() {
        let t = nf("unseal[L] (seal[H] tt)");
        assert!(matches!(t, Term::Unseal(..)));
    }

    #[test]
    fn normalizes_under_binders() {
        let t = nf("\\x:Bool. if tt then x else ff");
        assert!(alpha_equal(&t, &parse_term("\\y:Bool. y").unwrap()));
    }

    #[test]
    fn fuel_is_reported() {
        let t = parse_term("fst (fst ((tt, ff), ff))").unwrap();
        assert_eq!(normalize(&t, 1), Err(NormalizeError::FuelExhausted(1)));
        assert!(normalize(&t, 2).is_ok());
    }

    #[test]
    fn idempotent() {
        let t = nf("(\\f:Bool -> Bool. f (f tt)) (\\b:Bool. if b then ff else tt)");
        assert_eq!(t, Term::TT);
        let t = nf("\\p:Bool * Bool. (snd p, fst ((\\q:Bool*Bool. q) p))");
        assert_eq!(normalize(&t, DEFAULT_FUEL).unwrap(), t);
    }
}
