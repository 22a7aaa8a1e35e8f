//! Unified syntax for the four calculi: parsing, printing, substitution and
//! normalization.

mod ast;
mod normalize;
mod parse;
mod subst;

pub use ast::{Name, Term, Type};
pub use normalize::{normalize, step, NormalizeError, DEFAULT_FUEL};
pub use parse::{freshen, parse_term, parse_type, ParseError};
pub use subst::{alpha_equal, substitute};

#[cfg(test)]
pub(crate) mod strategies {
    use super::*;
    use crate::cset::Label;
    use proptest::prelude::*;

    pub fn arb_label() -> impl Strategy<Value = Label> {
        prop_oneof![Just("L"), Just("H")].prop_map(|s| Label::new(s).unwrap())
    }

    pub fn arb_type() -> impl Strategy<Value = Type> {
        let leaf = prop_oneof![Just(Type::Bool), Just(Type::BoolCo), Just(Type::Unit)];
        leaf.prop_recursive(3, 16, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Type::prod(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Type::sum(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Type::arrow(a, b)),
                inner.clone().prop_map(Type::monad),
                inner.clone().prop_map(Type::boxed),
                (arb_label(), inner.clone()).prop_map(|(l, a)| Type::lev(l, a)),
                (arb_label(), inner).prop_map(|(l, a)| Type::seal(l, a)),
            ]
        })
    }

    fn arb_name() -> impl Strategy<Value = String> {
        prop_oneof![Just("x"), Just("y"), Just("z")].prop_map(String::from)
    }

    pub fn arb_term() -> impl Strategy<Value = Term> {
        let leaf = prop_oneof![
            arb_name().prop_map(Term::Var),
            Just(Term::Unit),
            Just(Term::TT),
            Just(Term::FF),
        ];
        leaf.prop_recursive(4, 32, 3, |t| {
            prop_oneof![
                (arb_name(), arb_type(), t.clone()).prop_map(|(x, a, b)| Term::Lam(
                    x,
                    a,
                    Box::new(b)
                )),
                (t.clone(), t.clone()).prop_map(|(a, b)| Term::app(a, b)),
                (t.clone(), t.clone()).prop_map(|(a, b)| Term::pair(a, b)),
                t.clone().prop_map(Term::fst),
                t.clone().prop_map(Term::inr),
                t.clone().prop_map(Term::ret),
                t.clone().prop_map(Term::boxi),
                (t.clone(), arb_name(), t.clone(), arb_name(), t.clone())
                    .prop_map(|(m, x, n, y, p)| Term::case(m, &x, n, &y, p)),
                (t.clone(), t.clone(), t.clone()).prop_map(|(a, b, c)| Term::ite(a, b, c)),
                (arb_name(), t.clone(), t.clone()).prop_map(|(x, m, n)| Term::let_(&x, m, n)),
                (arb_name(), t.clone(), t.clone()).prop_map(|(x, m, n)| Term::let_box(&x, m, n)),
                (arb_label(), t.clone()).prop_map(|(l, m)| Term::ret_l(l, m)),
                (arb_label(), t.clone()).prop_map(|(l, m)| Term::seal(l, m)),
                (arb_label(), t.clone()).prop_map(|(l, m)| Term::unseal(l, m)),
                (t, arb_type()).prop_map(|(m, a)| Term::ann(m, a)),
            ]
        })
    }
}

#[cfg(test)]
mod tests {
    use super::strategies::*;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn print_examples() {
        assert_eq!(Term::TT.to_string(), "tt");
        let t = parse_term("let x = let y = tt in y in (\\z:Bool. z) x").unwrap();
        assert!(alpha_equal(&parse_term(&t.to_string()).unwrap(), &t));
        let c = parse_term("if b then box tt else box ff").unwrap();
        assert!(alpha_equal(&parse_term(&c.to_string()).unwrap(), &c));
    }

    proptest! {
        #[test]
        fn type_round_trip(a in arb_type()) {
            prop_assert_eq!(parse_type(&a.to_string()).unwrap(), a);
        }

        #[test]
        fn term_round_trip(t in arb_term()) {
            let printed = t.to_string();
            let back = parse_term(&printed).unwrap();
            prop_assert!(alpha_equal(&back, &t), "{} reparsed as {}", printed, back);
        }

        #[test]
        fn freshening_preserves_alpha_class(t in arb_term()) {
            prop_assert!(alpha_equal(&freshen(&t), &t));
        }

        #[test]
        fn normalization_is_deterministic(t in arb_term()) {
            let a = normalize(&t, 200);
            let b = normalize(&t, 200);
            prop_assert_eq!(&a, &b);
            if let Ok(n) = a {
                prop_assert!(alpha_equal(&normalize(&n, 200).unwrap(), &n));
            }
        }
    }
}
