use std::collections::{BTreeSet, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use thiserror::Error;

use super::poset::{PosetError, SecurityPoset};
use super::typing::{check_against, check_type, Calculus, TypeError, TypingContext};
use crate::cohesion::{box_at, diamond_at};
use crate::cset::{
    terminal, CSetError, ClassifiedSet, Coproduct, Element, EnumCap, Exponential, Label,
    LabelUniverse, Morphism, Product,
};
use crate::syntax::{Name, Term, Type};

static VIOLATIONS: AtomicU64 = AtomicU64::new(0);

/// Number of [`DenoteError::SemanticSoundnessViolation`]s raised in this process.
pub fn semantic_violation_count() -> u64 {
    VIOLATIONS.load(Ordering::SeqCst)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DenoteError {
    #[error("ill-typed: {0}")]
    IllTyped(#[from] TypeError),
    #[error("semantic soundness violation: {detail}")]
    SemanticSoundnessViolation {
        label: Option<Label>,
        x: Option<Element>,
        y: Option<Element>,
        detail: String,
    },
    #[error(transparent)]
    Set(#[from] CSetError),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

fn violation(
    label: Option<Label>,
    x: Option<Element>,
    y: Option<Element>,
    detail: String,
) -> DenoteError {
    VIOLATIONS.fetch_add(1, Ordering::SeqCst);
    DenoteError::SemanticSoundnessViolation {
        label,
        x,
        y,
        detail,
    }
}

/// Interprets types and terms as classified sets over the labels of a poset.
///
/// Arrow types are interpreted relative to the observer set `π` in force:
/// `⟦A → B⟧_π = ⟦B⟧_π^{□_{↓π} ⟦A⟧_π}` and `⟦Seal[l] A⟧_π = ◆_{↓l} ⟦A⟧_{π ∪ {l}}`.
/// Outside the sealing calculus `π` is empty and arrows are plain exponentials.
pub struct DenEnv {
    poset: SecurityPoset,
    cap: EnumCap,
    cache: Mutex<HashMap<(Type, BTreeSet<Label>), ClassifiedSet>>,
}

impl DenEnv {
    pub fn new(poset: SecurityPoset) -> Self {
        Self::with_cap(poset, EnumCap::default())
    }

    pub fn with_cap(poset: SecurityPoset, cap: EnumCap) -> Self {
        DenEnv {
            poset,
            cap,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn poset(&self) -> &SecurityPoset {
        &self.poset
    }

    pub fn universe(&self) -> &LabelUniverse {
        self.poset.universe()
    }

    /// `⟦A⟧` in the given calculus, with no observers.
    pub fn denote_type(&self, calculus: Calculus, ty: &Type) -> Result<ClassifiedSet, DenoteError> {
        check_type(&self.poset, calculus, ty)?;
        self.denote_type_at(ty, &BTreeSet::new())
    }

    /// `⟦A⟧_π`.
    pub fn denote_type_at(
        &self,
        ty: &Type,
        pi: &BTreeSet<Label>,
    ) -> Result<ClassifiedSet, DenoteError> {
        let key = (ty.clone(), pi.clone());
        if let Some(x) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(x.clone());
        }
        let u = self.universe();
        let x = match ty {
            Type::Bool => ClassifiedSet::delta_bool(u),
            Type::BoolCo => ClassifiedSet::nabla_bool(u),
            Type::Unit => terminal(u),
            Type::Prod(a, b) => {
                Product::new(&self.denote_type_at(a, pi)?, &self.denote_type_at(b, pi)?)?.object
            }
            Type::Sum(a, b) => {
                Coproduct::new(&self.denote_type_at(a, pi)?, &self.denote_type_at(b, pi)?)?.object
            }
            Type::Arrow(a, b) => {
                let dom = box_at(&self.poset.down_set_of(pi)?, &self.denote_type_at(a, pi)?)?;
                Exponential::new(&dom, &self.denote_type_at(b, pi)?, self.cap)?.object
            }
            Type::Monad(a) => diamond_at(u, &self.denote_type_at(a, pi)?)?,
            Type::BoxT(a) => box_at(u, &self.denote_type_at(a, pi)?)?,
            Type::LevMonad(l, a) => {
                diamond_at(&self.poset.down_set(l)?, &self.denote_type_at(a, pi)?)?
            }
            Type::Seal(l, a) => {
                let mut inner = pi.clone();
                inner.insert(l.clone());
                diamond_at(&self.poset.down_set(l)?, &self.denote_type_at(a, &inner)?)?
            }
        };
        self.cache
            .lock()
            .expect("cache lock")
            .insert(key, x.clone());
        Ok(x)
    }

    fn nested(
        &self,
        tys: &[(Name, Type)],
        pi: &BTreeSet<Label>,
        boxed: &LabelUniverse,
    ) -> Result<ClassifiedSet, DenoteError> {
        let mut acc = terminal(self.universe());
        for (_, ty) in tys.iter().rev() {
            let a = box_at(boxed, &self.denote_type_at(ty, pi)?)?;
            acc = Product::new(&a, &acc)?.object;
        }
        Ok(acc)
    }

    /// The object a context denotes: right-nested products ending in `1`. In
    /// Davies-Pfenning it is `□(modal zone) × (ordinary zone)`; in sealing each
    /// factor is `□_{↓π} ⟦A_i⟧_π`.
    pub fn context_object(&self, ctx: &TypingContext) -> Result<ClassifiedSet, DenoteError> {
        let pi = ctx.observers();
        match ctx.calculus {
            Calculus::Moggi | Calculus::Dcc => {
                self.nested(ctx.ordinary(), pi, &LabelUniverse::empty())
            }
            Calculus::Sealing => self.nested(ctx.ordinary(), pi, &self.poset.down_set_of(pi)?),
            Calculus::DaviesPfenning => {
                let modal = self.nested(ctx.modal(), pi, &LabelUniverse::empty())?;
                let modal = box_at(self.universe(), &modal)?;
                let ordinary = self.nested(ctx.ordinary(), pi, &LabelUniverse::empty())?;
                Ok(Product::new(&modal, &ordinary)?.object)
            }
        }
    }

    /// Binds context variables from an element of [`DenEnv::context_object`].
    fn bindings(ctx: &TypingContext, e: &Element) -> Vec<(Name, Element)> {
        fn unnest(tys: &[(Name, Type)], mut e: &Element, out: &mut Vec<(Name, Element)>) {
            for (x, _) in tys {
                let (v, rest) = e.as_pair().expect("context element is a nested pair");
                out.push((x.clone(), v.clone()));
                e = rest;
            }
        }
        let mut out = Vec::new();
        if ctx.calculus == Calculus::DaviesPfenning {
            let (m, o) = e.as_pair().expect("context element is a pair");
            unnest(ctx.modal(), m, &mut out);
            unnest(ctx.ordinary(), o, &mut out);
        } else {
            unnest(ctx.ordinary(), e, &mut out);
        }
        out
    }

    /// `⟦ctx ⊢ t : ty⟧`, computed pointwise on the erasure of `t` and then
    /// validated as a morphism from the context object to `⟦ty⟧_π`.
    pub fn denote_term(
        &self,
        ctx: &TypingContext,
        t: &Term,
        ty: &Type,
    ) -> Result<Morphism, DenoteError> {
        check_against(&self.poset, ctx, t, ty)?;
        let dom = self.context_object(ctx)?;
        let cod = self.denote_type_at(ty, ctx.observers())?;
        let mut map = Vec::with_capacity(dom.len());
        for e in dom.carrier() {
            let mut env = Self::bindings(ctx, e);
            let v = self.eval(t, &mut env, ctx.observers())?;
            match cod.index_of(&v) {
                Some(j) => map.push(j),
                None => {
                    return Err(violation(
                        None,
                        Some(e.clone()),
                        Some(v.clone()),
                        format!(
                        "value {v} at input {e} is not an element of the interpretation of {ty}"
                    ),
                    ))
                }
            }
        }
        Morphism::from_indices(dom, cod, map).map_err(|err| match err {
            CSetError::NotAMorphism { label, x, y } => {
                let detail = format!(
                    "denotation of `{t}` breaks the relation at {label} between {x} and {y}"
                );
                violation(Some(label), Some(x), Some(y), detail)
            }
            other => DenoteError::Set(other),
        })
    }

    /// `⟦⊢ t : ty⟧ : 1 → ⟦ty⟧`.
    pub fn denote_closed(
        &self,
        calculus: Calculus,
        t: &Term,
        ty: &Type,
    ) -> Result<Morphism, DenoteError> {
        self.denote_term(&TypingContext::new(calculus), t, ty)
    }

    fn eval(
        &self,
        t: &Term,
        env: &mut Vec<(Name, Element)>,
        pi: &BTreeSet<Label>,
    ) -> Result<Element, DenoteError> {
        let stuck = |what: &str, v: &Element| {
            violation(
                None,
                Some(v.clone()),
                None,
                format!("{what} got {v} in `{t}`"),
            )
        };
        Ok(match t {
            Term::Var(x) => env
                .iter()
                .rev()
                .find(|(y, _)| y == x)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| {
                    violation(None, None, None, format!("unbound {x} during evaluation"))
                })?,
            Term::Lam(x, a, b) => {
                let dom = self.denote_type_at(a, pi)?;
                let mut table = Vec::with_capacity(dom.len());
                for d in dom.carrier() {
                    env.push((x.clone(), d.clone()));
                    let r = self.eval(b, env, pi);
                    env.pop();
                    table.push((d.clone(), r?));
                }
                Element::fun(table)
            }
            Term::App(f, a) => {
                let fv = self.eval(f, env, pi)?;
                let av = self.eval(a, env, pi)?;
                match fv.apply(&av) {
                    Some(r) => r.clone(),
                    None => return Err(stuck("application", &fv)),
                }
            }
            Term::Pair(a, b) => Element::pair(self.eval(a, env, pi)?, self.eval(b, env, pi)?),
            Term::Fst(p) | Term::Snd(p) => {
                let v = self.eval(p, env, pi)?;
                let (a, b) = v.as_pair().ok_or_else(|| stuck("projection", &v))?;
                if matches!(t, Term::Fst(_)) {
                    a.clone()
                } else {
                    b.clone()
                }
            }
            Term::Inl(m) => Element::inl(self.eval(m, env, pi)?),
            Term::Inr(m) => Element::inr(self.eval(m, env, pi)?),
            Term::Case(s, x, n, y, p) => {
                let v = self.eval(s, env, pi)?;
                let (name, body, inner) = match &v {
                    Element::Inl(i) => (x, n, (**i).clone()),
                    Element::Inr(i) => (y, p, (**i).clone()),
                    _ => return Err(stuck("case", &v)),
                };
                self.eval_under(name, inner, body, env, pi)?
            }
            Term::Unit => Element::Star,
            Term::TT => Element::tt(),
            Term::FF => Element::ff(),
            Term::If(c, a, b) => {
                let v = self.eval(c, env, pi)?;
                if v == Element::tt() {
                    self.eval(a, env, pi)?
                } else if v == Element::ff() {
                    self.eval(b, env, pi)?
                } else {
                    return Err(stuck("conditional", &v));
                }
            }
            Term::Ret(m)
            | Term::RetL(_, m)
            | Term::BoxI(m)
            | Term::Unseal(_, m)
            | Term::Ann(m, _) => self.eval(m, env, pi)?,
            Term::SealI(l, m) => {
                let mut inner = pi.clone();
                inner.insert(l.clone());
                self.eval(m, env, &inner)?
            }
            Term::Let(x, m, n) | Term::LetBox(x, m, n) => {
                let v = self.eval(m, env, pi)?;
                self.eval_under(x, v, n, env, pi)?
            }
        })
    }

    fn eval_under(
        &self,
        x: &Name,
        v: Element,
        body: &Term,
        env: &mut Vec<(Name, Element)>,
        pi: &BTreeSet<Label>,
    ) -> Result<Element, DenoteError> {
        env.push((x.clone(), v));
        let r = self.eval(body, env, pi);
        env.pop();
        r
    }
}
