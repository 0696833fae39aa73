use proptest::prelude::*;

use colog_core::calculus::Derivation;
use colog_core::classical::is_tautology;
use colog_core::decider::{canonical_key, decide};
use colog_core::game::{Interpretation, LabMove, MoveToken, Player};
use colog_core::syntax::{parse, Formula, OccurrenceSpec, Term, Var};

fn var() -> impl Strategy<Value = Var> {
    prop::sample::select(vec!["x", "y", "z", "w1"]).prop_map(Var::new)
}

fn term() -> impl Strategy<Value = Term> {
    prop_oneof![var().prop_map(Term::Var), (0u64..12).prop_map(Term::Const)]
}

fn atom() -> impl Strategy<Value = Formula> {
    prop_oneof![
        Just(Formula::Top),
        Just(Formula::Bot),
        Just(Formula::atom("q", vec![])),
        term().prop_map(|t| Formula::atom("p", vec![t])),
        (term(), term()).prop_map(|(a, b)| Formula::atom("r", vec![a, b])),
    ]
}

fn formula() -> impl Strategy<Value = Formula> {
    atom().prop_recursive(4, 32, 3, |inner| {
        let list = prop::collection::vec(inner.clone(), 2..4);
        prop_oneof![
            inner.clone().prop_map(Formula::negate),
            list.clone().prop_map(Formula::And),
            list.clone().prop_map(Formula::Or),
            list.clone().prop_map(Formula::ChoAnd),
            list.prop_map(Formula::ChoOr),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (var(), inner.clone()).prop_map(|(x, g)| Formula::forall(x, g)),
            (var(), inner.clone()).prop_map(|(x, g)| Formula::exists(x, g)),
            (var(), inner.clone()).prop_map(|(x, g)| Formula::cho_all(x, g)),
            (var(), inner).prop_map(|(x, g)| Formula::cho_ex(x, g)),
        ]
    })
}

fn propositional() -> impl Strategy<Value = Formula> {
    let letter = prop::sample::select(vec!["a", "b", "c"]).prop_map(|l| Formula::atom(l, vec![]));
    letter.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::negate),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::And(vec![a, b])),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::Or(vec![a, b])),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::implies(a, b)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn print_then_parse_is_identity(f in formula()) {
        let text = f.to_string();
        let back = parse(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(&back, &f, "{}", text);
    }

    #[test]
    fn canonical_key_ignores_variable_names(f in formula()) {
        let renamed = f.rename_variables(&mut |x| Var::new(format!("r_{}", x.name())));
        prop_assert_eq!(canonical_key(&f), canonical_key(&renamed));
    }

    #[test]
    fn elementary_verdicts_are_tautologies(f in propositional()) {
        prop_assert_eq!(decide(&f).unwrap().is_provable(), is_tautology(&f).unwrap());
    }

    #[test]
    fn tokens_round_trip(path in prop::collection::vec(1usize..5, 0..4), payload in 0u64..100, machine: bool) {
        let t = MoveToken::new(OccurrenceSpec::new(path), payload);
        prop_assert_eq!(t.to_string().parse::<MoveToken>().unwrap(), t.clone());
        let who = if machine { Player::Machine } else { Player::Environment };
        let m = LabMove::new(who, t);
        prop_assert_eq!(m.to_string().parse::<LabMove>().unwrap(), m);
    }

    #[test]
    fn interpretations_round_trip(seed: u64, domain in 1u64..4) {
        use rand::SeedableRng;
        let sig = parse("p(x) /\\ q /\\ r(x, y)").unwrap().signature();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let i = Interpretation::random(&sig, domain, &mut rng);
        prop_assert_eq!(Interpretation::from_json(&i.to_json()).unwrap(), i);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    /// Small blind-free formulas: certificates survive serialization and check.
    #[test]
    fn decided_certificates_round_trip_and_check(f in formula().prop_filter("blind-free", |f| !f.has_blind_quantifiers() && f.depth() <= 3)) {
        let v = decide(&f).unwrap();
        let text = v.certificate().to_jsonl();
        let back = Derivation::from_jsonl(&text).unwrap();
        prop_assert_eq!(back.to_jsonl(), text);
        prop_assert!(v.check(100_000).is_ok(), "{}", f);
    }
}
