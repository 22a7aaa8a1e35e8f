use std::collections::BTreeSet;
use std::time::Instant;

use serde_json::json;

use super::report::{CheckReport, Tally};
use super::{table_json, HarnessError};
use crate::calculi::{check_against, typecheck, Calculus, DenEnv, DenoteError, TypingContext};
use crate::cset::{Label, Morphism};
use crate::syntax::{alpha_equal, normalize, step, Term, Type};

/// Ground types and one modality applied to a ground type.
fn is_modal_ground(ty: &Type) -> bool {
    match ty {
        Type::Bool | Type::BoolCo | Type::Unit => true,
        Type::Prod(a, b) | Type::Sum(a, b) => is_modal_ground(a) && is_modal_ground(b),
        Type::Monad(a) | Type::BoxT(a) | Type::LevMonad(_, a) | Type::Seal(_, a) => {
            is_modal_ground(a)
        }
        Type::Arrow(..) => false,
    }
}

/// Constants, and tuples, injections and modal introductions of constants.
pub fn is_canonical(t: &Term) -> bool {
    match t {
        Term::TT | Term::FF | Term::Unit => true,
        Term::Pair(a, b) => is_canonical(a) && is_canonical(b),
        Term::Inl(a)
        | Term::Inr(a)
        | Term::Ret(a)
        | Term::BoxI(a)
        | Term::RetL(_, a)
        | Term::SealI(_, a) => is_canonical(a),
        _ => false,
    }
}

fn denote(
    env: &DenEnv,
    ctx: &TypingContext,
    t: &Term,
    ty: &Type,
    tally: &mut Tally,
) -> Option<Morphism> {
    match env.denote_term(ctx, t, ty) {
        Ok(m) => Some(m),
        Err(e @ DenoteError::SemanticSoundnessViolation { .. }) => {
            tally.fail(
                "semantic-soundness",
                json!({"term": t.to_string()}),
                json!({"error": e.to_string()}),
            );
            None
        }
        Err(e) => {
            tally.fail(
                "denotation",
                json!({"term": t.to_string()}),
                json!({"error": e.to_string()}),
            );
            None
        }
    }
}

/// For each closed term: subject reduction along the reduction sequence,
/// `⟦M⟧ = ⟦nf M⟧`, canonical normal forms at (modal) ground types, and
/// distinct denotations for distinct canonical forms of one type. Also checks
/// `⟦tt⟧ ≠ ⟦ff⟧`.
pub fn check_soundness(
    env: &DenEnv,
    calculus: Calculus,
    observers: &BTreeSet<Label>,
    corpus: &[Term],
    fuel: u64,
) -> Result<CheckReport, HarnessError> {
    let start = Instant::now();
    let poset = env.poset();
    let ctx = TypingContext::new(calculus).with_observers(observers.iter().cloned());
    let mut tally = Tally::default();
    let mut canonical: Vec<(Type, Term, Morphism)> = Vec::new();

    for m in corpus {
        let ty = typecheck(poset, &ctx, m)?;
        let inputs = || json!({"term": m.to_string(), "type": ty.to_string()});

        let mut cur = m.clone();
        let mut steps = 0;
        let mut preserved = true;
        while let Some(next) = step(&cur) {
            if steps == fuel {
                return Err(crate::syntax::NormalizeError::FuelExhausted(steps).into());
            }
            steps += 1;
            if let Err(e) = check_against(poset, &ctx, &next, &ty) {
                preserved = false;
                tally.fail(
                    "subject-reduction",
                    inputs(),
                    json!({"step": next.to_string(), "error": e.to_string()}),
                );
                break;
            }
            cur = next;
        }
        if preserved {
            tally.check("subject-reduction", true, inputs, || json!(null));
        }

        let nf = normalize(m, fuel)?;
        if is_modal_ground(&ty) {
            tally.check(
                "canonicity",
                is_canonical(&nf),
                inputs,
                || json!({"normal_form": nf.to_string()}),
            );
        }
        let (Some(dm), Some(dn)) = (
            denote(env, &ctx, m, &ty, &mut tally),
            denote(env, &ctx, &nf, &ty, &mut tally),
        ) else {
            continue;
        };
        tally.check("denotation-preserved", dm == dn, inputs, || {
            json!({"normal_form": nf.to_string(), "term": table_json(&dm), "nf": table_json(&dn)})
        });
        if is_canonical(&nf)
            && !canonical
                .iter()
                .any(|(t, n, _)| *t == ty && alpha_equal(n, &nf))
        {
            canonical.push((ty.clone(), nf, dn));
        }
    }

    for (i, (ti, ni, di)) in canonical.iter().enumerate() {
        for (tj, nj, dj) in &canonical[i + 1..] {
            if ti == tj {
                tally.check(
                    "injectivity",
                    di != dj,
                    || json!({"type": ti.to_string(), "terms": [ni.to_string(), nj.to_string()]}),
                    || table_json(di),
                );
            }
        }
    }

    let tt = denote(env, &ctx, &Term::TT, &Type::Bool, &mut tally);
    let ff = denote(env, &ctx, &Term::FF, &Type::Bool, &mut tally);
    if let (Some(tt), Some(ff)) = (tt, ff) {
        tally.check("tt-ne-ff", tt != ff, || json!({}), || table_json(&tt));
    }
    let suite = format!("soundness-{calculus}");
    Ok(CheckReport::from_tally(&suite, 0, tally, start))
}
