use std::collections::BTreeSet;
use std::fmt;

use crate::cset::Label;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Bool,
    /// The codiscrete booleans.
    BoolCo,
    Unit,
    Prod(Box<Type>, Box<Type>),
    Sum(Box<Type>, Box<Type>),
    Arrow(Box<Type>, Box<Type>),
    /// `T A`
    Monad(Box<Type>),
    /// `Box A`
    BoxT(Box<Type>),
    /// `T[l] A`
    LevMonad(Label, Box<Type>),
    /// `Seal[l] A`
    Seal(Label, Box<Type>),
}

impl Type {
    pub fn prod(a: Type, b: Type) -> Type {
        Type::Prod(Box::new(a), Box::new(b))
    }
    pub fn sum(a: Type, b: Type) -> Type {
        Type::Sum(Box::new(a), Box::new(b))
    }
    pub fn arrow(a: Type, b: Type) -> Type {
        Type::Arrow(Box::new(a), Box::new(b))
    }
    pub fn monad(a: Type) -> Type {
        Type::Monad(Box::new(a))
    }
    pub fn boxed(a: Type) -> Type {
        Type::BoxT(Box::new(a))
    }
    pub fn lev(l: Label, a: Type) -> Type {
        Type::LevMonad(l, Box::new(a))
    }
    pub fn seal(l: Label, a: Type) -> Type {
        Type::Seal(l, Box::new(a))
    }

    pub fn size(&self) -> usize {
        match self {
            Type::Bool | Type::BoolCo | Type::Unit => 1,
            Type::Prod(a, b) | Type::Sum(a, b) | Type::Arrow(a, b) => 1 + a.size() + b.size(),
            Type::Monad(a) | Type::BoxT(a) | Type::LevMonad(_, a) | Type::Seal(_, a) => {
                1 + a.size()
            }
        }
    }

    /// Labels mentioned anywhere in the type.
    pub fn labels(&self) -> BTreeSet<Label> {
        let mut out = BTreeSet::new();
        self.collect_labels(&mut out);
        out
    }

    fn collect_labels(&self, out: &mut BTreeSet<Label>) {
        match self {
            Type::Bool | Type::BoolCo | Type::Unit => {}
            Type::Prod(a, b) | Type::Sum(a, b) | Type::Arrow(a, b) => {
                a.collect_labels(out);
                b.collect_labels(out);
            }
            Type::Monad(a) | Type::BoxT(a) => a.collect_labels(out),
            Type::LevMonad(l, a) | Type::Seal(l, a) => {
                out.insert(l.clone());
                a.collect_labels(out);
            }
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        let level = match self {
            Type::Arrow(..) => 0,
            Type::Sum(..) => 1,
            Type::Prod(..) => 2,
            Type::Monad(_) | Type::BoxT(_) | Type::LevMonad(..) | Type::Seal(..) => 3,
            _ => 4,
        };
        let open = level < prec;
        if open {
            f.write_str("(")?;
        }
        match self {
            Type::Bool => f.write_str("Bool")?,
            Type::BoolCo => f.write_str("BoolCo")?,
            Type::Unit => f.write_str("Unit")?,
            Type::Arrow(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" -> ")?;
                b.fmt_prec(f, 0)?;
            }
            Type::Sum(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" + ")?;
                b.fmt_prec(f, 2)?;
            }
            Type::Prod(a, b) => {
                a.fmt_prec(f, 2)?;
                f.write_str(" * ")?;
                b.fmt_prec(f, 3)?;
            }
            Type::Monad(a) => {
                f.write_str("T ")?;
                a.fmt_prec(f, 3)?;
            }
            Type::BoxT(a) => {
                f.write_str("Box ")?;
                a.fmt_prec(f, 3)?;
            }
            Type::LevMonad(l, a) => {
                write!(f, "T[{l}] ")?;
                a.fmt_prec(f, 3)?;
            }
            Type::Seal(l, a) => {
                write!(f, "Seal[{l}] ")?;
                a.fmt_prec(f, 3)?;
            }
        }
        if open {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl fmt::Debug for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub type Name = String;

/// Terms of all four calculi. `Let` serves both the monadic metalanguage and the
/// levelled calculus; the checker reads its meaning off the scrutinee's type.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Name),
    Lam(Name, Type, Box<Term>),
    App(Box<Term>, Box<Term>),
    Pair(Box<Term>, Box<Term>),
    Fst(Box<Term>),
    Snd(Box<Term>),
    Inl(Box<Term>),
    Inr(Box<Term>),
    /// `case M of inl x => N | inr y => P`
    Case(Box<Term>, Name, Box<Term>, Name, Box<Term>),
    Unit,
    TT,
    FF,
    If(Box<Term>, Box<Term>, Box<Term>),
    Ret(Box<Term>),
    Let(Name, Box<Term>, Box<Term>),
    BoxI(Box<Term>),
    LetBox(Name, Box<Term>, Box<Term>),
    RetL(Label, Box<Term>),
    SealI(Label, Box<Term>),
    Unseal(Label, Box<Term>),
    /// `(M : A)`
    Ann(Box<Term>, Type),
}

macro_rules! unary {
    ($($f:ident => $v:ident),*) => {
        $(pub fn $f(m: Term) -> Term { Term::$v(Box::new(m)) })*
    };
}

impl Term {
    pub fn var(x: &str) -> Term {
        Term::Var(x.to_string())
    }
    pub fn lam(x: &str, a: Type, body: Term) -> Term {
        Term::Lam(x.to_string(), a, Box::new(body))
    }
    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }
    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(Box::new(a), Box::new(b))
    }
    unary!(fst => Fst, snd => Snd, inl => Inl, inr => Inr, ret => Ret, boxi => BoxI);
    pub fn case(m: Term, x: &str, n: Term, y: &str, p: Term) -> Term {
        Term::Case(
            Box::new(m),
            x.to_string(),
            Box::new(n),
            y.to_string(),
            Box::new(p),
        )
    }
    pub fn ite(c: Term, a: Term, b: Term) -> Term {
        Term::If(Box::new(c), Box::new(a), Box::new(b))
    }
    pub fn let_(x: &str, m: Term, n: Term) -> Term {
        Term::Let(x.to_string(), Box::new(m), Box::new(n))
    }
    pub fn let_box(u: &str, m: Term, n: Term) -> Term {
        Term::LetBox(u.to_string(), Box::new(m), Box::new(n))
    }
    pub fn ret_l(l: Label, m: Term) -> Term {
        Term::RetL(l, Box::new(m))
    }
    pub fn seal(l: Label, m: Term) -> Term {
        Term::SealI(l, Box::new(m))
    }
    pub fn unseal(l: Label, m: Term) -> Term {
        Term::Unseal(l, Box::new(m))
    }
    pub fn ann(m: Term, a: Type) -> Term {
        Term::Ann(Box::new(m), a)
    }

    /// Node count, including the nodes of type annotations.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Unit | Term::TT | Term::FF => 1,
            Term::Lam(_, a, b) => 1 + a.size() + b.size(),
            Term::App(a, b) | Term::Pair(a, b) | Term::Let(_, a, b) | Term::LetBox(_, a, b) => {
                1 + a.size() + b.size()
            }
            Term::Fst(a)
            | Term::Snd(a)
            | Term::Inl(a)
            | Term::Inr(a)
            | Term::Ret(a)
            | Term::BoxI(a)
            | Term::RetL(_, a)
            | Term::SealI(_, a)
            | Term::Unseal(_, a) => 1 + a.size(),
            Term::Case(m, _, n, _, p) | Term::If(m, n, p) => 1 + m.size() + n.size() + p.size(),
            Term::Ann(m, a) => 1 + m.size() + a.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<Name>) {
        let under =
            |x: &'a str, body: &'a Term, bound: &mut Vec<&'a str>, out: &mut BTreeSet<Name>| {
                bound.push(x);
                body.collect_free(bound, out);
                bound.pop();
            };
        match self {
            Term::Var(x) => {
                if !bound.contains(&x.as_str()) {
                    out.insert(x.clone());
                }
            }
            Term::Unit | Term::TT | Term::FF => {}
            Term::Lam(x, _, b) => under(x, b, bound, out),
            Term::App(a, b) | Term::Pair(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Term::Let(x, m, n) | Term::LetBox(x, m, n) => {
                m.collect_free(bound, out);
                under(x, n, bound, out);
            }
            Term::Fst(a)
            | Term::Snd(a)
            | Term::Inl(a)
            | Term::Inr(a)
            | Term::Ret(a)
            | Term::BoxI(a)
            | Term::RetL(_, a)
            | Term::SealI(_, a)
            | Term::Unseal(_, a)
            | Term::Ann(a, _) => a.collect_free(bound, out),
            Term::Case(m, x, n, y, p) => {
                m.collect_free(bound, out);
                under(x, n, bound, out);
                under(y, p, bound, out);
            }
            Term::If(m, n, p) => {
                m.collect_free(bound, out);
                n.collect_free(bound, out);
                p.collect_free(bound, out);
            }
        }
    }

    /// Immediate subterms, in the order `map_children` visits them.
    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Var(_) | Term::Unit | Term::TT | Term::FF => vec![],
            Term::Lam(_, _, m)
            | Term::Fst(m)
            | Term::Snd(m)
            | Term::Inl(m)
            | Term::Inr(m)
            | Term::Ret(m)
            | Term::BoxI(m)
            | Term::RetL(_, m)
            | Term::SealI(_, m)
            | Term::Unseal(_, m)
            | Term::Ann(m, _) => vec![m],
            Term::App(m, n) | Term::Pair(m, n) | Term::Let(_, m, n) | Term::LetBox(_, m, n) => {
                vec![m, n]
            }
            Term::Case(m, _, n, _, p) | Term::If(m, n, p) => vec![m, n, p],
        }
    }

    /// Removes every ascription.
    pub fn erase_annotations(&self) -> Term {
        self.map_children(&mut |t| t.erase_annotations(), true)
    }

    /// Rebuilds the node with `f` applied to each immediate subterm. With
    /// `strip_ann`, an ascription is replaced by its erased body.
    pub(crate) fn map_children(&self, f: &mut dyn FnMut(&Term) -> Term, strip_ann: bool) -> Term {
        let mut b = |t: &Term| Box::new(f(t));
        match self {
            Term::Var(_) | Term::Unit | Term::TT | Term::FF => self.clone(),
            Term::Lam(x, a, m) => Term::Lam(x.clone(), a.clone(), b(m)),
            Term::App(m, n) => Term::App(b(m), b(n)),
            Term::Pair(m, n) => Term::Pair(b(m), b(n)),
            Term::Fst(m) => Term::Fst(b(m)),
            Term::Snd(m) => Term::Snd(b(m)),
            Term::Inl(m) => Term::Inl(b(m)),
            Term::Inr(m) => Term::Inr(b(m)),
            Term::Case(m, x, n, y, p) => Term::Case(b(m), x.clone(), b(n), y.clone(), b(p)),
            Term::If(m, n, p) => Term::If(b(m), b(n), b(p)),
            Term::Ret(m) => Term::Ret(b(m)),
            Term::Let(x, m, n) => Term::Let(x.clone(), b(m), b(n)),
            Term::BoxI(m) => Term::BoxI(b(m)),
            Term::LetBox(x, m, n) => Term::LetBox(x.clone(), b(m), b(n)),
            Term::RetL(l, m) => Term::RetL(l.clone(), b(m)),
            Term::SealI(l, m) => Term::SealI(l.clone(), b(m)),
            Term::Unseal(l, m) => Term::Unseal(l.clone(), b(m)),
            Term::Ann(m, a) => {
                if strip_ann {
                    *b(m)
                } else {
                    Term::Ann(b(m), a.clone())
                }
            }
        }
    }

    /// 0: binders and conditionals; 1: application; 2: keyword prefixes; 3: atoms.
    fn level(&self) -> u8 {
        match self {
            Term::Lam(..) | Term::If(..) | Term::Let(..) | Term::LetBox(..) | Term::Case(..) => 0,
            Term::App(..) => 1,
            Term::Fst(_)
            | Term::Snd(_)
            | Term::Inl(_)
            | Term::Inr(_)
            | Term::Ret(_)
            | Term::BoxI(_)
            | Term::RetL(..)
            | Term::SealI(..)
            | Term::Unseal(..) => 2,
            Term::Var(_) | Term::Unit | Term::TT | Term::FF | Term::Pair(..) | Term::Ann(..) => 3,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        let open = self.level() < prec;
        if open {
            f.write_str("(")?;
        }
        match self {
            Term::Var(x) => f.write_str(x)?,
            Term::Unit => f.write_str("unit")?,
            Term::TT => f.write_str("tt")?,
            Term::FF => f.write_str("ff")?,
            Term::Lam(x, a, m) => {
                write!(f, "\\{x}:{a}. ")?;
                m.fmt_prec(f, 0)?;
            }
            Term::App(m, n) => {
                m.fmt_prec(f, 1)?;
                f.write_str(" ")?;
                n.fmt_prec(f, 3)?;
            }
            Term::Pair(m, n) => {
                f.write_str("(")?;
                m.fmt_prec(f, 0)?;
                f.write_str(", ")?;
                n.fmt_prec(f, 0)?;
                f.write_str(")")?;
            }
            Term::Ann(m, a) => {
                f.write_str("(")?;
                m.fmt_prec(f, 0)?;
                write!(f, " : {a})")?;
            }
            Term::Fst(m) => prefix(f, "fst", m)?,
            Term::Snd(m) => prefix(f, "snd", m)?,
            Term::Inl(m) => prefix(f, "inl", m)?,
            Term::Inr(m) => prefix(f, "inr", m)?,
            Term::Ret(m) => prefix(f, "ret", m)?,
            Term::BoxI(m) => prefix(f, "box", m)?,
            Term::RetL(l, m) => prefix(f, &format!("ret[{l}]"), m)?,
            Term::SealI(l, m) => prefix(f, &format!("seal[{l}]"), m)?,
            Term::Unseal(l, m) => prefix(f, &format!("unseal[{l}]"), m)?,
            Term::Case(m, x, n, y, p) => {
                f.write_str("case ")?;
                m.fmt_prec(f, 0)?;
                write!(f, " of inl {x} => ")?;
                n.fmt_prec(f, 1)?;
                write!(f, " | inr {y} => ")?;
                p.fmt_prec(f, 0)?;
            }
            Term::If(m, n, p) => {
                f.write_str("if ")?;
                m.fmt_prec(f, 0)?;
                f.write_str(" then ")?;
                n.fmt_prec(f, 0)?;
                f.write_str(" else ")?;
                p.fmt_prec(f, 0)?;
            }
            Term::Let(x, m, n) => {
                write!(f, "let {x} = ")?;
                m.fmt_prec(f, 0)?;
                f.write_str(" in ")?;
                n.fmt_prec(f, 0)?;
            }
            Term::LetBox(x, m, n) => {
                write!(f, "let box {x} = ")?;
                m.fmt_prec(f, 0)?;
                f.write_str(" in ")?;
                n.fmt_prec(f, 0)?;
            }
        }
        if open {
            f.write_str(")")?;
        }
        Ok(())
    }
}

fn prefix(f: &mut fmt::Formatter<'_>, kw: &str, m: &Term) -> fmt::Result {
    f.write_str(kw)?;
    f.write_str(" ")?;
    m.fmt_prec(f, 3)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
