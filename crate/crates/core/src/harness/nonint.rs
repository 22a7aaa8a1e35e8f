use std::collections::BTreeSet;
use std::time::Instant;

use serde_json::json;

use super::inhabit::enumerate_inhabitants;
use super::report::{CheckReport, Tally};
use super::{table_json, HarnessError};
use crate::calculi::{check_against, Calculus, DenEnv, SecurityPoset, TypingContext};
use crate::cset::Label;
use crate::syntax::{alpha_equal, normalize, substitute, Name, Term, Type};

/// A program `M` with one free hole variable, to be checked for
/// noninterference at `result`.
#[derive(Debug, Clone)]
pub struct NiQuery {
    pub calculus: Calculus,
    pub hole: Name,
    pub hole_type: Type,
    pub observers: BTreeSet<Label>,
    pub program: Term,
    pub result: Type,
}

impl NiQuery {
    pub fn context(&self) -> TypingContext {
        TypingContext::new(self.calculus)
            .with_var(&self.hole, self.hole_type.clone())
            .with_observers(self.observers.iter().cloned())
    }
}

/// Bool, Unit, and products and sums of them.
pub fn is_ground(ty: &Type) -> bool {
    match ty {
        Type::Bool | Type::Unit => true,
        Type::Prod(a, b) | Type::Sum(a, b) => is_ground(a) && is_ground(b),
        _ => false,
    }
}

/// The hypotheses of each calculus's noninterference theorem.
pub fn validate_side_conditions(poset: &SecurityPoset, q: &NiQuery) -> Result<(), HarnessError> {
    let unmet = |s: String| Err(HarnessError::SideConditionUnmet(s));
    match q.calculus {
        Calculus::Moggi => {
            if !matches!(q.hole_type, Type::Monad(_)) {
                return unmet(format!("hole must have a type T A, not {}", q.hole_type));
            }
            if q.result != Type::Bool {
                return unmet(format!("result must be Bool, not {}", q.result));
            }
        }
        Calculus::DaviesPfenning => {
            if q.hole_type != Type::BoolCo {
                return unmet(format!("hole must have type BoolCo, not {}", q.hole_type));
            }
            match &q.result {
                Type::BoxT(g) if is_ground(g) => {}
                other => return unmet(format!("result must be Box G with G ground, not {other}")),
            }
        }
        Calculus::Dcc => {
            let Type::LevMonad(l, _) = &q.hole_type else {
                return unmet(format!("hole must have a type T[l] A, not {}", q.hole_type));
            };
            let Type::LevMonad(l2, b) = &q.result else {
                return unmet(format!("result must be T[l'] Bool, not {}", q.result));
            };
            if **b != Type::Bool {
                return unmet(format!("result must be T[l'] Bool, not {}", q.result));
            }
            for k in [l, l2] {
                if !poset.contains(k) {
                    return Err(HarnessError::SideConditionUnmet(format!(
                        "unknown label {k}"
                    )));
                }
            }
            if poset.leq(l, l2) {
                return unmet(format!("{l} ⊑ {l2}: the hole may flow to the result"));
            }
        }
        Calculus::Sealing => {
            let Type::Seal(l, _) = &q.hole_type else {
                return unmet(format!(
                    "hole must have a type Seal[l] A, not {}",
                    q.hole_type
                ));
            };
            if q.result != Type::Bool {
                return unmet(format!("result must be Bool, not {}", q.result));
            }
            if !poset.contains(l) {
                return unmet(format!("unknown label {l}"));
            }
            if poset.below_some(l, &q.observers) {
                return unmet(format!("{l} is below an observer"));
            }
        }
    }
    Ok(())
}

/// Checks noninterference of `q` twice: syntactically, by normalizing every
/// instance `M[E/x]` for closed normal `E` of size at most `bound`; and
/// semantically, by testing the denotation of `M` for constancy. The two
/// verdicts must agree.
pub fn check_noninterference(
    env: &DenEnv,
    q: &NiQuery,
    bound: usize,
    fuel: u64,
) -> Result<CheckReport, HarnessError> {
    let start = Instant::now();
    let poset = env.poset();
    if bound == 0 {
        return Err(HarnessError::InvalidArgument(
            "size bound must be at least 1".into(),
        ));
    }
    validate_side_conditions(poset, q)?;
    let ctx = q.context();
    check_against(poset, &ctx, &q.program, &q.result)?;

    let mut tally = Tally::default();
    let inputs = || json!({"program": q.program.to_string(), "hole": q.hole, "hole_type": q.hole_type.to_string()});

    let instances = enumerate_inhabitants(poset, q.calculus, &q.observers, &q.hole_type, bound);
    let mut normal_forms = Vec::with_capacity(instances.len());
    for e in &instances {
        normal_forms.push(normalize(&substitute(&q.program, &q.hole, e), fuel)?);
    }
    let mut syntactic = true;
    if instances.len() < 2 {
        tally.note(format!(
            "{} closed instance(s) within size {bound}",
            instances.len()
        ));
    }
    for i in 1..instances.len() {
        let ok = alpha_equal(&normal_forms[0], &normal_forms[i]);
        syntactic &= ok;
        tally.check("syntactic", ok, inputs, || {
            json!({
                "instances": [instances[0].to_string(), instances[i].to_string()],
                "normal_forms": [normal_forms[0].to_string(), normal_forms[i].to_string()],
            })
        });
    }

    let den = env.denote_term(&ctx, &q.program, &q.result)?;
    let semantic = den.is_constant();
    tally.check("semantic", semantic, inputs, || table_json(&den));
    if !instances.is_empty() {
        tally.check(
            "agreement",
            syntactic == semantic,
            inputs,
            || json!({"syntactic": syntactic, "semantic": semantic}),
        );
    }
    let suite = format!("nonint-{}", q.calculus);
    Ok(CheckReport::from_tally(&suite, 0, tally, start))
}
