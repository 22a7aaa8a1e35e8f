use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::poset::SecurityPoset;
use crate::cset::Label;
use crate::syntax::{Name, Term, Type};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Calculus {
    Moggi,
    #[serde(rename = "dp")]
    DaviesPfenning,
    Dcc,
    Sealing,
}

impl Calculus {
    pub const ALL: [Calculus; 4] = [
        Calculus::Moggi,
        Calculus::DaviesPfenning,
        Calculus::Dcc,
        Calculus::Sealing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Calculus::Moggi => "moggi",
            Calculus::DaviesPfenning => "dp",
            Calculus::Dcc => "dcc",
            Calculus::Sealing => "sealing",
        }
    }
}

impl fmt::Display for Calculus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Calculus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "moggi" => Ok(Calculus::Moggi),
            "dp" | "davies-pfenning" => Ok(Calculus::DaviesPfenning),
            "dcc" => Ok(Calculus::Dcc),
            "sealing" => Ok(Calculus::Sealing),
            _ => Err(format!(
                "unknown calculus `{s}` (expected moggi, dp, dcc or sealing)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("type mismatch at `{at}`: expected {expected}, got {got}")]
    TypeMismatch {
        expected: String,
        got: Box<Type>,
        at: Box<Term>,
    },
    #[error("unbound variable {0}")]
    UnboundVariable(Name),
    #[error("ordinary variable {0} used under box")]
    ModalViolation(Name),
    #[error("{ty} is not protected at {label}")]
    NotProtected { ty: Type, label: Label },
    #[error("{0} is not codiscrete")]
    NotCodiscrete(Type),
    #[error("cannot unseal at {label}: not below any observer in {{{observers}}}")]
    UnsealNotPermitted { label: Label, observers: String },
    #[error("{construct} is not part of the {calculus} calculus")]
    ForeignConstruct {
        construct: String,
        calculus: Calculus,
    },
    #[error("cannot infer a type for `{0}`; add an ascription")]
    CannotInfer(Box<Term>),
    #[error("unknown label {0}")]
    UnknownLabel(Label),
    #[error("ill-formed context: {0}")]
    IllFormedContext(String),
}

/// `Δ; Γ; π`: modal zone, ordinary zone and observer set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypingContext {
    pub calculus: Calculus,
    ordinary: Vec<(Name, Type)>,
    modal: Vec<(Name, Type)>,
    observers: BTreeSet<Label>,
}

impl TypingContext {
    pub fn new(calculus: Calculus) -> Self {
        TypingContext {
            calculus,
            ordinary: Vec::new(),
            modal: Vec::new(),
            observers: BTreeSet::new(),
        }
    }

    pub fn with_var(mut self, x: &str, ty: Type) -> Self {
        self.ordinary.push((x.to_string(), ty));
        self
    }

    pub fn with_modal(mut self, u: &str, ty: Type) -> Self {
        self.modal.push((u.to_string(), ty));
        self
    }

    pub fn with_observers(mut self, pi: impl IntoIterator<Item = Label>) -> Self {
        self.observers.extend(pi);
        self
    }

    pub fn ordinary(&self) -> &[(Name, Type)] {
        &self.ordinary
    }

    pub fn modal(&self) -> &[(Name, Type)] {
        &self.modal
    }

    pub fn observers(&self) -> &BTreeSet<Label> {
        &self.observers
    }

    pub fn names(&self) -> BTreeSet<Name> {
        self.ordinary
            .iter()
            .chain(&self.modal)
            .map(|(x, _)| x.clone())
            .collect()
    }

    pub fn validate(&self, poset: &SecurityPoset) -> Result<(), TypeError> {
        let mut seen = BTreeSet::new();
        for (x, ty) in self.ordinary.iter().chain(&self.modal) {
            if !seen.insert(x) {
                return Err(TypeError::IllFormedContext(format!("{x} is bound twice")));
            }
            check_type(poset, self.calculus, ty)?;
        }
        if !self.modal.is_empty() && self.calculus != Calculus::DaviesPfenning {
            return Err(TypeError::IllFormedContext(format!(
                "the {} calculus has no modal zone",
                self.calculus
            )));
        }
        if !self.observers.is_empty() && self.calculus != Calculus::Sealing {
            return Err(TypeError::IllFormedContext(format!(
                "the {} calculus has no observers",
                self.calculus
            )));
        }
        for l in &self.observers {
            if !poset.contains(l) {
                return Err(TypeError::UnknownLabel(l.clone()));
            }
        }
        Ok(())
    }
}

fn foreign(construct: &str, calculus: Calculus) -> TypeError {
    TypeError::ForeignConstruct {
        construct: construct.to_string(),
        calculus,
    }
}

/// Checks that a type only uses constructors and labels of the calculus.
pub fn check_type(poset: &SecurityPoset, calculus: Calculus, ty: &Type) -> Result<(), TypeError> {
    use Calculus::*;
    match ty {
        Type::Bool | Type::Unit => Ok(()),
        Type::BoolCo if calculus == DaviesPfenning => Ok(()),
        Type::BoolCo => Err(foreign("BoolCo", calculus)),
        Type::Prod(a, b) | Type::Sum(a, b) | Type::Arrow(a, b) => {
            check_type(poset, calculus, a)?;
            check_type(poset, calculus, b)
        }
        Type::Monad(a) if calculus == Moggi => check_type(poset, calculus, a),
        Type::Monad(_) => Err(foreign("T", calculus)),
        Type::BoxT(a) if calculus == DaviesPfenning => check_type(poset, calculus, a),
        Type::BoxT(_) => Err(foreign("Box", calculus)),
        Type::LevMonad(l, a) | Type::Seal(l, a) => {
            let ok = matches!(
                (ty, calculus),
                (Type::LevMonad(..), Dcc) | (Type::Seal(..), Sealing)
            );
            if !ok {
                let name = if matches!(ty, Type::LevMonad(..)) {
                    "T[l]"
                } else {
                    "Seal[l]"
                };
                return Err(foreign(name, calculus));
            }
            if !poset.contains(l) {
                return Err(TypeError::UnknownLabel(l.clone()));
            }
            check_type(poset, calculus, a)
        }
    }
}

/// Protection at `l`: `T[l'] A` when `l ⊑ l'` or `A` is protected; products
/// of protected types; arrows into a protected type. Nothing else.
pub fn is_protected_type(ty: &Type, l: &Label, poset: &SecurityPoset) -> Result<bool, TypeError> {
    if !poset.contains(l) {
        return Err(TypeError::UnknownLabel(l.clone()));
    }
    fn go(ty: &Type, l: &Label, poset: &SecurityPoset) -> Result<bool, TypeError> {
        Ok(match ty {
            Type::LevMonad(l2, a) => {
                if !poset.contains(l2) {
                    return Err(TypeError::UnknownLabel(l2.clone()));
                }
                poset.leq(l, l2) || go(a, l, poset)?
            }
            Type::Prod(a, b) => go(a, l, poset)? && go(b, l, poset)?,
            Type::Arrow(_, b) => go(b, l, poset)?,
            _ => false,
        })
    }
    go(ty, l, poset)
}

/// Codiscrete types: `Unit`, `BoolCo`, products of codiscrete types and arrows
/// into a codiscrete type.
pub fn is_codiscrete_type(ty: &Type) -> bool {
    match ty {
        Type::Unit | Type::BoolCo => true,
        Type::Prod(a, b) => is_codiscrete_type(a) && is_codiscrete_type(b),
        Type::Arrow(_, b) => is_codiscrete_type(b),
        _ => false,
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Zone {
    Ordinary,
    Modal,
}

#[derive(Clone)]
struct Binding {
    name: Name,
    ty: Type,
    zone: Zone,
    hidden: bool,
}

#[derive(Clone)]
struct Env {
    vars: Vec<Binding>,
    observers: BTreeSet<Label>,
}

impl Env {
    fn lookup(&self, x: &str) -> Result<Type, TypeError> {
        match self.vars.iter().rev().find(|b| b.name == x) {
            None => Err(TypeError::UnboundVariable(x.to_string())),
            Some(b) if b.hidden => Err(TypeError::ModalViolation(x.to_string())),
            Some(b) => Ok(b.ty.clone()),
        }
    }

    fn bind(&self, x: &str, ty: Type, zone: Zone) -> Env {
        let mut e = self.clone();
        e.vars.push(Binding {
            name: x.to_string(),
            ty,
            zone,
            hidden: false,
        });
        e
    }

    /// The premise context of `box`: ordinary variables go out of scope.
    fn boxed(&self) -> Env {
        let mut e = self.clone();
        for b in &mut e.vars {
            if b.zone == Zone::Ordinary {
                b.hidden = true;
            }
        }
        e
    }

    fn sealed(&self, l: &Label) -> Env {
        let mut e = self.clone();
        e.observers.insert(l.clone());
        e
    }
}

struct Checker<'a> {
    calculus: Calculus,
    poset: &'a SecurityPoset,
}

fn mismatch(expected: impl Into<String>, got: Type, at: &Term) -> TypeError {
    TypeError::TypeMismatch {
        expected: expected.into(),
        got: Box::new(got),
        at: Box::new(at.clone()),
    }
}

impl Checker<'_> {
    fn allowed(&self, t: &Term) -> Result<(), TypeError> {
        use Calculus::*;
        let (name, ok) = match t {
            Term::Ret(_) => ("ret", self.calculus == Moggi),
            Term::Let(..) => ("let", matches!(self.calculus, Moggi | Dcc)),
            Term::BoxI(_) => ("box", self.calculus == DaviesPfenning),
            Term::LetBox(..) => ("let box", self.calculus == DaviesPfenning),
            Term::RetL(..) => ("ret[l]", self.calculus == Dcc),
            Term::SealI(..) => ("seal[l]", self.calculus == Sealing),
            Term::Unseal(..) => ("unseal[l]", self.calculus == Sealing),
            _ => return Ok(()),
        };
        if ok {
            Ok(())
        } else {
            Err(foreign(name, self.calculus))
        }
    }

    fn label(&self, l: &Label) -> Result<(), TypeError> {
        if self.poset.contains(l) {
            Ok(())
        } else {
            Err(TypeError::UnknownLabel(l.clone()))
        }
    }

    /// The side condition of the monadic `let` on the type of its body.
    fn let_side_condition(&self, bound: &Type, body: &Type, at: &Term) -> Result<(), TypeError> {
        match bound {
            Type::Monad(_) => match body {
                Type::Monad(_) => Ok(()),
                _ => Err(mismatch("a type T B", body.clone(), at)),
            },
            Type::LevMonad(l, _) => {
                if is_protected_type(body, l, self.poset)? {
                    Ok(())
                } else {
                    Err(TypeError::NotProtected {
                        ty: body.clone(),
                        label: l.clone(),
                    })
                }
            }
            _ => unreachable!("let scrutinee is monadic"),
        }
    }

    fn let_bound(&self, env: &Env, m: &Term) -> Result<(Type, Type), TypeError> {
        let ty = self.infer(env, m)?;
        match &ty {
            Type::Monad(a) if self.calculus == Calculus::Moggi => Ok(((**a).clone(), ty.clone())),
            Type::LevMonad(_, a) if self.calculus == Calculus::Dcc => {
                Ok(((**a).clone(), ty.clone()))
            }
            _ => {
                let want = if self.calculus == Calculus::Moggi {
                    "a type T A"
                } else {
                    "a type T[l] A"
                };
                Err(mismatch(want, ty, m))
            }
        }
    }

    fn check(&self, env: &Env, t: &Term, expected: &Type) -> Result<(), TypeError> {
        self.allowed(t)?;
        match (t, expected) {
            (Term::Lam(x, a, b), Type::Arrow(d, c)) => {
                check_type(self.poset, self.calculus, a)?;
                if **d != *a {
                    return Err(mismatch(
                        expected.to_string(),
                        Type::arrow(a.clone(), (**c).clone()),
                        t,
                    ));
                }
                self.check(&env.bind(x, a.clone(), Zone::Ordinary), b, c)
            }
            (Term::Pair(m, n), Type::Prod(a, b)) => {
                self.check(env, m, a)?;
                self.check(env, n, b)
            }
            (Term::Inl(m), Type::Sum(a, _)) => self.check(env, m, a),
            (Term::Inr(m), Type::Sum(_, b)) => self.check(env, m, b),
            (Term::Inl(_) | Term::Inr(_), _) => Err(mismatch("a sum type", expected.clone(), t)),
            (Term::TT | Term::FF, Type::BoolCo) if self.calculus == Calculus::DaviesPfenning => {
                Ok(())
            }
            (Term::If(c, a, b), _) => {
                self.if_condition(env, c, expected)?;
                self.check(env, a, expected)?;
                self.check(env, b, expected)
            }
            (Term::Case(s, x, n, y, p), _) => {
                let (a, b) = self.scrutinee(env, s)?;
                self.check(&env.bind(x, a, Zone::Ordinary), n, expected)?;
                self.check(&env.bind(y, b, Zone::Ordinary), p, expected)
            }
            (Term::Let(x, m, n), _) => {
                let (a, bound) = self.let_bound(env, m)?;
                self.let_side_condition(&bound, expected, t)?;
                self.check(&env.bind(x, a, Zone::Ordinary), n, expected)
            }
            (Term::LetBox(u, m, n), _) => {
                let a = self.boxed_bound(env, m)?;
                self.check(&env.bind(u, a, Zone::Modal), n, expected)
            }
            (Term::Ret(m), Type::Monad(a)) => self.check(env, m, a),
            (Term::RetL(l, m), Type::LevMonad(l2, a)) if l == l2 => {
                self.label(l)?;
                self.check(env, m, a)
            }
            (Term::BoxI(m), Type::BoxT(a)) => self.check(&env.boxed(), m, a),
            (Term::SealI(l, m), Type::Seal(l2, a)) if l == l2 => {
                self.label(l)?;
                self.check(&env.sealed(l), m, a)
            }
            _ => {
                let got = self.infer(env, t)?;
                if got == *expected {
                    Ok(())
                } else {
                    Err(mismatch(expected.to_string(), got, t))
                }
            }
        }
    }

    fn if_condition(&self, env: &Env, c: &Term, motive: &Type) -> Result<(), TypeError> {
        match self.infer(env, c)? {
            Type::Bool => Ok(()),
            Type::BoolCo => {
                if is_codiscrete_type(motive) {
                    Ok(())
                } else {
                    Err(TypeError::NotCodiscrete(motive.clone()))
                }
            }
            other => Err(mismatch("Bool", other, c)),
        }
    }

    fn scrutinee(&self, env: &Env, s: &Term) -> Result<(Type, Type), TypeError> {
        match self.infer(env, s)? {
            Type::Sum(a, b) => Ok((*a, *b)),
            other => Err(mismatch("a sum type", other, s)),
        }
    }

    fn boxed_bound(&self, env: &Env, m: &Term) -> Result<Type, TypeError> {
        match self.infer(env, m)? {
            Type::BoxT(a) => Ok(*a),
            other => Err(mismatch("a type Box A", other, m)),
        }
    }

    fn infer(&self, env: &Env, t: &Term) -> Result<Type, TypeError> {
        self.allowed(t)?;
        match t {
            Term::Var(x) => env.lookup(x),
            Term::Lam(x, a, b) => {
                check_type(self.poset, self.calculus, a)?;
                let c = self.infer(&env.bind(x, a.clone(), Zone::Ordinary), b)?;
                Ok(Type::arrow(a.clone(), c))
            }
            Term::App(f, a) => match self.infer(env, f)? {
                Type::Arrow(d, c) => {
                    self.check(env, a, &d)?;
                    Ok(*c)
                }
                other => Err(mismatch("a function type", other, f)),
            },
            Term::Pair(m, n) => Ok(Type::prod(self.infer(env, m)?, self.infer(env, n)?)),
            Term::Fst(p) | Term::Snd(p) => match self.infer(env, p)? {
                Type::Prod(a, b) => Ok(if matches!(t, Term::Fst(_)) { *a } else { *b }),
                other => Err(mismatch("a product type", other, p)),
            },
            Term::Inl(_) | Term::Inr(_) => Err(TypeError::CannotInfer(Box::new(t.clone()))),
            Term::Unit => Ok(Type::Unit),
            Term::TT | Term::FF => Ok(Type::Bool),
            Term::If(c, a, b) => {
                let cty = self.infer(env, c)?;
                let ty = self.infer(env, a)?;
                match cty {
                    Type::Bool => {}
                    Type::BoolCo => {
                        if !is_codiscrete_type(&ty) {
                            return Err(TypeError::NotCodiscrete(ty));
                        }
                    }
                    other => return Err(mismatch("Bool", other, c)),
                }
                self.check(env, b, &ty)?;
                Ok(ty)
            }
            Term::Case(s, x, n, y, p) => {
                let (a, b) = self.scrutinee(env, s)?;
                let ty = self.infer(&env.bind(x, a, Zone::Ordinary), n)?;
                self.check(&env.bind(y, b, Zone::Ordinary), p, &ty)?;
                Ok(ty)
            }
            Term::Let(x, m, n) => {
                let (a, bound) = self.let_bound(env, m)?;
                let ty = self.infer(&env.bind(x, a, Zone::Ordinary), n)?;
                self.let_side_condition(&bound, &ty, t)?;
                Ok(ty)
            }
            Term::LetBox(u, m, n) => {
                let a = self.boxed_bound(env, m)?;
                self.infer(&env.bind(u, a, Zone::Modal), n)
            }
            Term::Ret(m) => Ok(Type::monad(self.infer(env, m)?)),
            Term::RetL(l, m) => {
                self.label(l)?;
                Ok(Type::lev(l.clone(), self.infer(env, m)?))
            }
            Term::BoxI(m) => Ok(Type::boxed(self.infer(&env.boxed(), m)?)),
            Term::SealI(l, m) => {
                self.label(l)?;
                Ok(Type::seal(l.clone(), self.infer(&env.sealed(l), m)?))
            }
            Term::Unseal(l, m) => {
                self.label(l)?;
                match self.infer(env, m)? {
                    Type::Seal(l2, a) if l2 == *l => {
                        if self.poset.below_some(l, &env.observers) {
                            Ok(*a)
                        } else {
                            Err(TypeError::UnsealNotPermitted {
                                label: l.clone(),
                                observers: env
                                    .observers
                                    .iter()
                                    .map(Label::as_str)
                                    .collect::<Vec<_>>()
                                    .join(", "),
                            })
                        }
                    }
                    other => Err(mismatch(format!("a type Seal[{l}] A"), other, m)),
                }
            }
            Term::Ann(m, a) => {
                check_type(self.poset, self.calculus, a)?;
                self.check(env, m, a)?;
                Ok(a.clone())
            }
        }
    }
}

fn initial_env(poset: &SecurityPoset, ctx: &TypingContext) -> Result<Env, TypeError> {
    ctx.validate(poset)?;
    let mut vars = Vec::new();
    for (x, ty) in &ctx.modal {
        vars.push(Binding {
            name: x.clone(),
            ty: ty.clone(),
            zone: Zone::Modal,
            hidden: false,
        });
    }
    for (x, ty) in &ctx.ordinary {
        vars.push(Binding {
            name: x.clone(),
            ty: ty.clone(),
            zone: Zone::Ordinary,
            hidden: false,
        });
    }
    Ok(Env {
        vars,
        observers: ctx.observers.clone(),
    })
}

/// Synthesizes the type of `t` under `ctx`.
pub fn typecheck(poset: &SecurityPoset, ctx: &TypingContext, t: &Term) -> Result<Type, TypeError> {
    let env = initial_env(poset, ctx)?;
    Checker {
        calculus: ctx.calculus,
        poset,
    }
    .infer(&env, t)
}

/// Checks `t` against `ty` under `ctx`. Injections need this mode.
pub fn check_against(
    poset: &SecurityPoset,
    ctx: &TypingContext,
    t: &Term,
    ty: &Type,
) -> Result<(), TypeError> {
    let env = initial_env(poset, ctx)?;
    check_type(poset, ctx.calculus, ty)?;
    Checker {
        calculus: ctx.calculus,
        poset,
    }
    .check(&env, t, ty)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_term, parse_type};

    fn l(s: &str) -> Label {
        Label::new(s).unwrap()
    }

    fn ty(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    fn infer(ctx: &TypingContext, s: &str) -> Result<Type, TypeError> {
        typecheck(&SecurityPoset::low_high(), ctx, &parse_term(s).unwrap())
    }

    #[test]
    fn dp_conditional_on_boxes() {
        let ctx = TypingContext::new(Calculus::DaviesPfenning).with_var("b", Type::Bool);
        assert_eq!(
            infer(&ctx, "if b then box tt else box ff"),
            Ok(ty("Box Bool"))
        );
    }

    #[test]
    fn dp_box_hides_ordinary_variables() {
        let ctx = TypingContext::new(Calculus::DaviesPfenning).with_var("f", ty("Bool -> Bool"));
        assert_eq!(
            infer(&ctx, "box f"),
            Err(TypeError::ModalViolation("f".into()))
        );
        let ctx = TypingContext::new(Calculus::DaviesPfenning).with_modal("g", ty("Bool -> Bool"));
        assert_eq!(infer(&ctx, "box g"), Ok(ty("Box (Bool -> Bool)")));
        let ctx = TypingContext::new(Calculus::DaviesPfenning);
        assert_eq!(
            infer(&ctx, "\\x:Box Bool. let box u = x in box (u, u)"),
            Ok(ty("Box Bool -> Box (Bool * Bool)"))
        );
    }

    #[test]
    fn dp_codiscrete_elimination() {
        let ctx = TypingContext::new(Calculus::DaviesPfenning).with_var("c", Type::BoolCo);
        assert_eq!(infer(&ctx, "if c then unit else unit"), Ok(Type::Unit));
        assert_eq!(
            infer(&ctx, "if c then tt else ff"),
            Err(TypeError::NotCodiscrete(Type::Bool))
        );
        let t = parse_term("if c then tt else ff").unwrap();
        assert_eq!(
            check_against(&SecurityPoset::low_high(), &ctx, &t, &Type::BoolCo),
            Ok(())
        );
        let t = parse_term("if c then box tt else box ff").unwrap();
        assert!(matches!(
            check_against(&SecurityPoset::low_high(), &ctx, &t, &ty("Box Bool")),
            Err(TypeError::NotCodiscrete(_))
        ));
    }

    #[test]
    fn dcc_protection() {
        let ctx = TypingContext::new(Calculus::Dcc).with_var("x", ty("T[L] Bool"));
        assert_eq!(infer(&ctx, "let y = x in ret[H] y"), Ok(ty("T[H] Bool")));
        let ctx = TypingContext::new(Calculus::Dcc).with_var("x", ty("T[H] Bool"));
        assert_eq!(
            infer(&ctx, "let y = x in ret[L] y"),
            Err(TypeError::NotProtected {
                ty: ty("T[L] Bool"),
                label: l("H")
            })
        );
        assert!(matches!(
            infer(&ctx, "let y = x in y"),
            Err(TypeError::NotProtected { .. })
        ));
        assert_eq!(
            infer(&ctx, "let y = x in ret[H] (y, y)"),
            Ok(ty("T[H] (Bool * Bool)"))
        );
    }

    #[test]
    fn protection_clauses() {
        let p = SecurityPoset::low_high();
        assert_eq!(is_protected_type(&ty("T[H] Bool"), &l("L"), &p), Ok(true));
        assert_eq!(is_protected_type(&Type::Bool, &l("L"), &p), Ok(false));
        assert_eq!(
            is_protected_type(&ty("Unit -> T[H] Bool"), &l("L"), &p),
            Ok(true)
        );
        assert_eq!(is_protected_type(&ty("T[L] Bool"), &l("H"), &p), Ok(false));
        assert_eq!(
            is_protected_type(&ty("T[L] (T[H] Bool)"), &l("H"), &p),
            Ok(true)
        );
        assert_eq!(
            is_protected_type(&ty("T[H] Bool + T[H] Bool"), &l("L"), &p),
            Ok(false)
        );
        assert_eq!(is_protected_type(&Type::Unit, &l("L"), &p), Ok(false));
        assert!(is_protected_type(&Type::Bool, &l("M"), &p).is_err());
    }

    #[test]
    fn codiscrete_clauses() {
        assert!(is_codiscrete_type(&Type::BoolCo));
        assert!(is_codiscrete_type(&ty("Bool -> BoolCo")));
        assert!(is_codiscrete_type(&ty("Unit * BoolCo")));
        assert!(!is_codiscrete_type(&ty("Box Bool")));
        assert!(!is_codiscrete_type(&ty("BoolCo + BoolCo")));
    }

    #[test]
    fn sealing_rules() {
        let ctx = TypingContext::new(Calculus::Sealing);
        assert_eq!(infer(&ctx, "seal[H] tt"), Ok(ty("Seal[H] Bool")));
        assert_eq!(
            infer(&ctx, "seal[H] (unseal[H] (seal[H] tt))"),
            Ok(ty("Seal[H] Bool"))
        );
        let ctx = TypingContext::new(Calculus::Sealing)
            .with_var("x", ty("Seal[H] Bool"))
            .with_observers([l("L")]);
        assert!(matches!(
            infer(&ctx, "unseal[H] x"),
            Err(TypeError::UnsealNotPermitted { .. })
        ));
        let ctx = TypingContext::new(Calculus::Sealing)
            .with_var("x", ty("Seal[L] Bool"))
            .with_observers([l("H")]);
        assert_eq!(infer(&ctx, "unseal[L] x"), Ok(Type::Bool));
    }

    #[test]
    fn foreign_constructs() {
        let moggi = TypingContext::new(Calculus::Moggi);
        assert!(matches!(
            infer(&moggi, "box tt"),
            Err(TypeError::ForeignConstruct { .. })
        ));
        assert!(matches!(
            infer(&moggi, "ret[H] tt"),
            Err(TypeError::ForeignConstruct { .. })
        ));
        let dp = TypingContext::new(Calculus::DaviesPfenning);
        assert!(matches!(
            infer(&dp, "let x = ret tt in x"),
            Err(TypeError::ForeignConstruct { .. })
        ));
        let dcc = TypingContext::new(Calculus::Dcc);
        assert!(matches!(
            infer(&dcc, "\\x:T Bool. x"),
            Err(TypeError::ForeignConstruct { .. })
        ));
        assert!(matches!(
            infer(&dcc, "seal[H] tt"),
            Err(TypeError::ForeignConstruct { .. })
        ));
    }

    #[test]
    fn moggi_let_stays_in_the_monad() {
        let ctx = TypingContext::new(Calculus::Moggi).with_var("x", ty("T Bool"));
        assert_eq!(
            infer(&ctx, "let y = x in ret (y, y)"),
            Ok(ty("T (Bool * Bool)"))
        );
        assert!(matches!(
            infer(&ctx, "let y = x in y"),
            Err(TypeError::TypeMismatch { .. })
        ));
    }

    #[test]
    fn injections_need_checking_mode() {
        let ctx = TypingContext::new(Calculus::Moggi);
        assert!(matches!(
            infer(&ctx, "inl tt"),
            Err(TypeError::CannotInfer(_))
        ));
        assert_eq!(infer(&ctx, "(inl tt : Bool + Unit)"), Ok(ty("Bool + Unit")));
        assert_eq!(
            infer(&ctx, "\\s:Bool + Unit. case s of inl a => a | inr u => ff"),
            Ok(ty("Bool + Unit -> Bool"))
        );
        assert_eq!(
            infer(
                &ctx,
                "(\\b:Bool. if b then inl tt else inr unit : Bool -> Bool + Unit)"
            ),
            Ok(ty("Bool -> Bool + Unit"))
        );
    }

    #[test]
    fn contexts_are_validated() {
        let dup = TypingContext::new(Calculus::DaviesPfenning)
            .with_var("x", Type::Bool)
            .with_modal("x", Type::Bool);
        assert!(matches!(
            infer(&dup, "tt"),
            Err(TypeError::IllFormedContext(_))
        ));
        let modal = TypingContext::new(Calculus::Moggi).with_modal("u", Type::Bool);
        assert!(matches!(
            infer(&modal, "tt"),
            Err(TypeError::IllFormedContext(_))
        ));
        assert_eq!(
            infer(&TypingContext::new(Calculus::Moggi), "y"),
            Err(TypeError::UnboundVariable("y".into()))
        );
    }
}
