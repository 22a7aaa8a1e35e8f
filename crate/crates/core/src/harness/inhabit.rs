use std::collections::BTreeSet;

use crate::calculi::{check_against, Calculus, SecurityPoset, TypingContext};
use crate::cset::Label;
use crate::syntax::{step, Name, Term, Type};

#[derive(Clone)]
struct Var {
    name: Name,
    ty: Type,
    modal: bool,
    hidden: bool,
}

#[derive(Clone)]
struct Scope {
    vars: Vec<Var>,
}

impl Scope {
    fn bind(&self, ty: &Type, modal: bool) -> (Name, Scope) {
        let name = format!("x{}", self.vars.len());
        let mut s = self.clone();
        s.vars.push(Var {
            name: name.clone(),
            ty: ty.clone(),
            modal,
            hidden: false,
        });
        (name, s)
    }

    fn boxed(&self) -> Scope {
        let mut s = self.clone();
        for v in &mut s.vars {
            v.hidden |= !v.modal;
        }
        s
    }

    fn visible(&self) -> impl Iterator<Item = &Var> {
        // Later bindings shadow nothing: names are unique by construction.
        self.vars.iter().filter(|v| !v.hidden)
    }
}

struct Gen<'a> {
    calculus: Calculus,
    poset: &'a SecurityPoset,
}

/// Splits `n` into two positive parts.
fn splits2(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..n).map(move |i| (i, n - i))
}

#[cfg(test)]
fn splits3(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (1..n).flat_map(move |i| (1..n - i).map(move |j| (i, j, n - i - j)))
}

impl Gen<'_> {
    /// Normal terms of exact size `n` at `ty` (up to the final type filter).
    fn check(&self, scope: &Scope, ty: &Type, n: usize) -> Vec<Term> {
        use Calculus::*;
        let mut out = Vec::new();
        if n == 0 {
            return out;
        }
        match ty {
            Type::Unit if n == 1 => out.push(Term::Unit),
            Type::Bool if n == 1 => out.extend([Term::TT, Term::FF]),
            Type::BoolCo if n == 1 && self.calculus == DaviesPfenning => {
                out.extend([Term::TT, Term::FF])
            }
            Type::Prod(a, b) => {
                for (i, j) in splits2(n - 1) {
                    for m in self.check(scope, a, i) {
                        for p in self.check(scope, b, j) {
                            out.push(Term::pair(m.clone(), p));
                        }
                    }
                }
            }
            Type::Sum(a, b) => {
                out.extend(self.check(scope, a, n - 1).into_iter().map(Term::inl));
                out.extend(self.check(scope, b, n - 1).into_iter().map(Term::inr));
            }
            Type::Arrow(d, c) if n > 1 + d.size() => {
                let (x, inner) = scope.bind(d, false);
                for body in self.check(&inner, c, n - 1 - d.size()) {
                    out.push(Term::lam(&x, (**d).clone(), body));
                }
            }
            Type::Monad(a) if self.calculus == Moggi => {
                out.extend(self.check(scope, a, n - 1).into_iter().map(Term::ret));
            }
            Type::BoxT(a) if self.calculus == DaviesPfenning => {
                out.extend(
                    self.check(&scope.boxed(), a, n - 1)
                        .into_iter()
                        .map(Term::boxi),
                );
            }
            Type::LevMonad(l, a) if self.calculus == Dcc => {
                out.extend(
                    self.check(scope, a, n - 1)
                        .into_iter()
                        .map(|m| Term::ret_l(l.clone(), m)),
                );
            }
            Type::Seal(l, a) if self.calculus == Sealing => {
                out.extend(
                    self.check(scope, a, n - 1)
                        .into_iter()
                        .map(|m| Term::seal(l.clone(), m)),
                );
            }
            _ => {}
        }
        for (m, got) in self.neutral(scope, n) {
            if got == *ty {
                out.push(m);
            }
        }
        self.eliminations(scope, ty, n, &mut out);
        out
    }

    /// `if`, `case`, `let` and `let box` with a neutral principal argument.
    fn eliminations(&self, scope: &Scope, ty: &Type, n: usize, out: &mut Vec<Term>) {
        use Calculus::*;
        if n < 3 {
            return;
        }
        for (k, rest) in splits2(n - 1) {
            for (s, sty) in self.neutral(scope, k) {
                match &sty {
                    Type::Bool | Type::BoolCo => {
                        for (i, j) in splits2(rest) {
                            for a in self.check(scope, ty, i) {
                                for b in self.check(scope, ty, j) {
                                    out.push(Term::ite(s.clone(), a.clone(), b));
                                }
                            }
                        }
                    }
                    Type::Sum(a, b) => {
                        let (x, sa) = scope.bind(a, false);
                        let (y, sb) = scope.bind(b, false);
                        for (i, j) in splits2(rest) {
                            for l in self.check(&sa, ty, i) {
                                for r in self.check(&sb, ty, j) {
                                    out.push(Term::case(s.clone(), &x, l.clone(), &y, r));
                                }
                            }
                        }
                    }
                    Type::Monad(a) if self.calculus == Moggi => {
                        let (x, inner) = scope.bind(a, false);
                        for body in self.check(&inner, ty, rest) {
                            out.push(Term::let_(&x, s.clone(), body));
                        }
                    }
                    Type::LevMonad(_, a) if self.calculus == Dcc => {
                        let (x, inner) = scope.bind(a, false);
                        for body in self.check(&inner, ty, rest) {
                            out.push(Term::let_(&x, s.clone(), body));
                        }
                    }
                    Type::BoxT(a) if self.calculus == DaviesPfenning => {
                        let (u, inner) = scope.bind(a, true);
                        for body in self.check(&inner, ty, rest) {
                            out.push(Term::let_box(&u, s.clone(), body));
                        }
                    }
                    _ => {}
                }
            }
        }
    }

    /// Variables and eliminations applied to them, of exact size `n`, with
    /// their synthesized types.
    fn neutral(&self, scope: &Scope, n: usize) -> Vec<(Term, Type)> {
        let mut out = Vec::new();
        if n == 1 {
            for v in scope.visible() {
                out.push((Term::var(&v.name), v.ty.clone()));
            }
            return out;
        }
        for (m, ty) in self.neutral(scope, n - 1) {
            match &ty {
                Type::Prod(a, b) => {
                    out.push((Term::fst(m.clone()), (**a).clone()));
                    out.push((Term::snd(m), (**b).clone()));
                }
                Type::Seal(l, a)
                    if self.calculus == Calculus::Sealing && self.poset.contains(l) =>
                {
                    out.push((Term::unseal(l.clone(), m), (**a).clone()));
                }
                _ => {}
            }
        }
        for (i, j) in splits2(n - 1) {
            for (f, fty) in self.neutral(scope, i) {
                if let Type::Arrow(d, c) = &fty {
                    for a in self.check(scope, d, j) {
                        out.push((Term::app(f.clone(), a), (**c).clone()));
                    }
                }
            }
        }
        out
    }
}

/// All closed normal forms of size at most `bound` that check at `ty` in
/// `calculus` under `observers`, ordered by size.
///
/// Principal arguments of `if`, `case`, `let` and `let box` are generated as
/// neutral terms. A non-neutral normal principal argument needs at least size
/// 4, and a closed term can only reach one under a binder, so nothing is lost
/// below size 9.
pub fn enumerate_inhabitants(
    poset: &SecurityPoset,
    calculus: Calculus,
    observers: &BTreeSet<Label>,
    ty: &Type,
    bound: usize,
) -> Vec<Term> {
    let gen = Gen { calculus, poset };
    let ctx = TypingContext::new(calculus).with_observers(observers.iter().cloned());
    let scope = Scope { vars: Vec::new() };
    let mut out = Vec::new();
    for n in 1..=bound {
        for t in gen.check(&scope, ty, n) {
            if step(&t).is_none() && check_against(poset, &ctx, &t, ty).is_ok() {
                out.push(t);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculi::typecheck;
    use crate::syntax::{alpha_equal, parse_type};

    fn lh() -> SecurityPoset {
        SecurityPoset::low_high()
    }

    fn shown(ts: &[Term]) -> Vec<String> {
        ts.iter().map(|t| t.to_string()).collect()
    }

    fn none() -> BTreeSet<Label> {
        BTreeSet::new()
    }

    #[test]
    fn moggi_monadic_booleans() {
        let ts = enumerate_inhabitants(
            &lh(),
            Calculus::Moggi,
            &none(),
            &parse_type("T Bool").unwrap(),
            3,
        );
        assert_eq!(shown(&ts), ["ret tt", "ret ff"]);
    }

    #[test]
    fn plain_booleans() {
        for calc in Calculus::ALL {
            let ts = enumerate_inhabitants(&lh(), calc, &none(), &Type::Bool, 1);
            assert_eq!(shown(&ts), ["tt", "ff"]);
        }
    }

    #[test]
    fn sealed_booleans() {
        let ty = parse_type("Seal[H] Bool").unwrap();
        let ts = enumerate_inhabitants(&lh(), Calculus::Sealing, &none(), &ty, 3);
        assert_eq!(shown(&ts), ["seal[H] tt", "seal[H] ff"]);
    }

    #[test]
    fn codiscrete_booleans_only_in_dp() {
        let ts = enumerate_inhabitants(&lh(), Calculus::DaviesPfenning, &none(), &Type::BoolCo, 7);
        assert_eq!(shown(&ts), ["tt", "ff"]);
        assert!(
            enumerate_inhabitants(&lh(), Calculus::Moggi, &none(), &Type::BoolCo, 7).is_empty()
        );
    }

    #[test]
    fn function_space_counts() {
        // Identity and the two constants have size 3. The conditionals on x
        // have size 6, with each branch one of tt, ff, x.
        let ty = parse_type("Bool -> Bool").unwrap();
        let ts = enumerate_inhabitants(&lh(), Calculus::Moggi, &none(), &ty, 6);
        assert_eq!(ts.len(), 3 + 9);
        assert!(ts.iter().all(|t| t.size() <= 6));
    }

    /// Independent oracle: every syntax tree of the given size over a fixed
    /// alphabet, filtered by the checker and the normal-form test.
    fn brute(calc: Calculus, ty: &Type, bound: usize) -> Vec<Term> {
        let poset = lh();
        let labels: Vec<Label> = poset.universe().labels().to_vec();
        fn types(n: usize, labels: &[Label]) -> Vec<Type> {
            let mut out = Vec::new();
            if n == 1 {
                return vec![Type::Bool, Type::BoolCo, Type::Unit];
            }
            for (i, j) in splits2(n - 1) {
                for a in types(i, labels) {
                    for b in types(j, labels) {
                        out.push(Type::prod(a.clone(), b.clone()));
                        out.push(Type::sum(a.clone(), b.clone()));
                        out.push(Type::arrow(a.clone(), b));
                    }
                }
            }
            for a in types(n - 1, labels) {
                out.push(Type::monad(a.clone()));
                out.push(Type::boxed(a.clone()));
                for l in labels {
                    out.push(Type::lev(l.clone(), a.clone()));
                    out.push(Type::seal(l.clone(), a.clone()));
                }
            }
            out
        }
        fn terms(n: usize, depth: usize, labels: &[Label]) -> Vec<Term> {
            let mut out = Vec::new();
            if n == 1 {
                out.extend([Term::Unit, Term::TT, Term::FF]);
                out.extend((0..depth).map(|i| Term::var(&format!("x{i}"))));
                return out;
            }
            let x = format!("x{depth}");
            let y = format!("x{}", depth + 1);
            for m in terms(n - 1, depth, labels) {
                out.push(Term::fst(m.clone()));
                out.push(Term::snd(m.clone()));
                out.push(Term::inl(m.clone()));
                out.push(Term::inr(m.clone()));
                out.push(Term::ret(m.clone()));
                out.push(Term::boxi(m.clone()));
                for l in labels {
                    out.push(Term::ret_l(l.clone(), m.clone()));
                    out.push(Term::seal(l.clone(), m.clone()));
                    out.push(Term::unseal(l.clone(), m.clone()));
                }
            }
            for (i, j) in splits2(n - 1) {
                for a in types(i, labels) {
                    for b in terms(j, depth + 1, labels) {
                        out.push(Term::lam(&x, a.clone(), b));
                    }
                }
                for a in terms(i, depth, labels) {
                    for b in terms(j, depth, labels) {
                        out.push(Term::app(a.clone(), b.clone()));
                        out.push(Term::pair(a.clone(), b.clone()));
                    }
                    for b in terms(j, depth + 1, labels) {
                        out.push(Term::let_(&x, a.clone(), b.clone()));
                        out.push(Term::let_box(&x, a.clone(), b));
                    }
                }
            }
            for (i, j, k) in splits3(n - 1) {
                for s in terms(i, depth, labels) {
                    for a in terms(j, depth, labels) {
                        for b in terms(k, depth, labels) {
                            out.push(Term::ite(s.clone(), a.clone(), b));
                        }
                    }
                    for a in terms(j, depth + 1, labels) {
                        for b in terms(k, depth + 2, labels) {
                            out.push(Term::case(s.clone(), &x, a.clone(), &y, b));
                        }
                    }
                }
            }
            out
        }
        let ctx = TypingContext::new(calc);
        (1..=bound)
            .flat_map(|n| terms(n, 0, &labels))
            .filter(|t| step(t).is_none() && check_against(&poset, &ctx, t, ty).is_ok())
            .collect()
    }

    #[test]
    fn agrees_with_brute_force() {
        let cases = [
            (Calculus::Moggi, "T Bool"),
            (Calculus::Moggi, "Bool -> Bool"),
            (Calculus::Moggi, "T Bool -> T Bool"),
            (Calculus::DaviesPfenning, "Box Bool"),
            (Calculus::DaviesPfenning, "Box Bool -> Bool"),
            (Calculus::Dcc, "T[H] Bool"),
            (Calculus::Dcc, "T[L] Bool -> T[H] Bool"),
            (Calculus::Sealing, "Seal[L] Bool -> Bool"),
            (Calculus::Moggi, "Bool * Unit"),
            (Calculus::Moggi, "Unit + Bool"),
        ];
        for (calc, src) in cases {
            let ty = parse_type(src).unwrap();
            let fast = enumerate_inhabitants(&lh(), calc, &none(), &ty, 5);
            let slow = brute(calc, &ty, 5);
            assert_eq!(
                fast.len(),
                slow.len(),
                "{calc} {src}: {:?} vs {:?}",
                shown(&fast),
                shown(&slow)
            );
            for t in &slow {
                assert!(
                    fast.iter().any(|u| alpha_equal(t, u)),
                    "{calc} {src}: missing {t}"
                );
            }
        }
    }

    #[test]
    fn every_inhabitant_is_a_closed_well_typed_normal_form() {
        let ty = parse_type("(Bool -> Bool) -> Bool").unwrap();
        let ts = enumerate_inhabitants(&lh(), Calculus::Moggi, &none(), &ty, 7);
        assert!(!ts.is_empty());
        for t in &ts {
            assert!(t.free_vars().is_empty());
            assert!(step(t).is_none());
            assert_eq!(
                typecheck(&lh(), &TypingContext::new(Calculus::Moggi), t).unwrap(),
                ty
            );
        }
        let sizes: Vec<_> = ts.iter().map(Term::size).collect();
        assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
    }
}
