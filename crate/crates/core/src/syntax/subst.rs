use std::collections::BTreeSet;

use super::ast::{Name, Term};
use super::parse::fresh_name;

/// `body[replacement/x]`, renaming binders of `body` that would capture.
pub fn substitute(body: &Term, x: &str, replacement: &Term) -> Term {
    let fv = replacement.free_vars();
    subst(body, x, replacement, &fv)
}

fn subst(t: &Term, x: &str, r: &Term, fv: &BTreeSet<Name>) -> Term {
    match t {
        Term::Var(y) if y == x => r.clone(),
        Term::Var(_) => t.clone(),
        Term::Lam(y, a, b) => {
            let (y, b) = under(y, b, x, r, fv);
            Term::Lam(y, a.clone(), Box::new(b))
        }
        Term::Let(y, m, n) => {
            let m = subst(m, x, r, fv);
            let (y, n) = under(y, n, x, r, fv);
            Term::Let(y, Box::new(m), Box::new(n))
        }
        Term::LetBox(y, m, n) => {
            let m = subst(m, x, r, fv);
            let (y, n) = under(y, n, x, r, fv);
            Term::LetBox(y, Box::new(m), Box::new(n))
        }
        Term::Case(s, y, n, z, p) => {
            let s = subst(s, x, r, fv);
            let (y, n) = under(y, n, x, r, fv);
            let (z, p) = under(z, p, x, r, fv);
            Term::Case(Box::new(s), y, Box::new(n), z, Box::new(p))
        }
        _ => t.map_children(&mut |c| subst(c, x, r, fv), false),
    }
}

fn under(y: &Name, body: &Term, x: &str, r: &Term, fv: &BTreeSet<Name>) -> (Name, Term) {
    if y == x {
        return (y.clone(), body.clone());
    }
    let body_fv = body.free_vars();
    if !body_fv.contains(x) {
        return (y.clone(), body.clone());
    }
    if fv.contains(y) {
        let fresh = fresh_name(y, &|n| n == x || fv.contains(n) || body_fv.contains(n));
        let renamed = substitute(body, y, &Term::Var(fresh.clone()));
        (fresh, subst(&renamed, x, r, fv))
    } else {
        (y.clone(), subst(body, x, r, fv))
    }
}

/// Equality up to renaming of bound variables. Ascriptions and labels must match.
pub fn alpha_equal(a: &Term, b: &Term) -> bool {
    eq(a, b, &mut Vec::new(), &mut Vec::new())
}

fn eq<'a>(a: &'a Term, b: &'a Term, ea: &mut Vec<&'a str>, eb: &mut Vec<&'a str>) -> bool {
    fn bind<'a>(
        x: &'a str,
        y: &'a str,
        m: &'a Term,
        n: &'a Term,
        ea: &mut Vec<&'a str>,
        eb: &mut Vec<&'a str>,
    ) -> bool {
        ea.push(x);
        eb.push(y);
        let r = eq(m, n, ea, eb);
        ea.pop();
        eb.pop();
        r
    }
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => {
            let ix = ea.iter().rposition(|v| *v == x);
            let iy = eb.iter().rposition(|v| *v == y);
            match (ix, iy) {
                (Some(i), Some(j)) => i == j,
                (None, None) => x == y,
                _ => false,
            }
        }
        (Term::Lam(x, ta, m), Term::Lam(y, tb, n)) => ta == tb && bind(x, y, m, n, ea, eb),
        (Term::Let(x, m1, n1), Term::Let(y, m2, n2))
        | (Term::LetBox(x, m1, n1), Term::LetBox(y, m2, n2)) => {
            eq(m1, m2, ea, eb) && bind(x, y, n1, n2, ea, eb)
        }
        (Term::Case(s1, x1, n1, y1, p1), Term::Case(s2, x2, n2, y2, p2)) => {
            eq(s1, s2, ea, eb) && bind(x1, x2, n1, n2, ea, eb) && bind(y1, y2, p1, p2, ea, eb)
        }
        (Term::Ann(m, ta), Term::Ann(n, tb)) => ta == tb && eq(m, n, ea, eb),
        (Term::RetL(l1, m), Term::RetL(l2, n))
        | (Term::SealI(l1, m), Term::SealI(l2, n))
        | (Term::Unseal(l1, m), Term::Unseal(l2, n)) => l1 == l2 && eq(m, n, ea, eb),
        _ => {
            if std::mem::discriminant(a) != std::mem::discriminant(b) {
                return false;
            }
            let (ca, cb) = (a.children(), b.children());
            ca.len() == cb.len() && ca.iter().zip(cb).all(|(m, n)| eq(m, n, ea, eb))
        }
    }
}
