//! Translation regression tests: state counts, degeneralization indices and
//! the bounded equivalence gate on the documented example formulas.

use fgltl_core::automata::{
    accepts_lasso, accepts_lasso_rabin, build_dgrw, check_equiv_bounded,
    check_equiv_bounded_rabin, degeneralization_index, degeneralize, degeneralize_with,
    parse_dgrw, write_dgrw, EquivVerdict, TranslateOptions,
};
use fgltl_core::ltl::{eval_lasso, parse_any_atoms, Formula, LassoWord, Letter};

fn letter(names: &[&str]) -> Letter {
    Letter::from_names(names.iter().copied())
}

fn fairness(n: usize) -> Formula {
    let atoms = ["a", "b", "c", "d", "e", "f", "g", "h"];
    Formula::and((0..n).map(|i| {
        Formula::or([
            Formula::ev(Formula::al(Formula::atom(atoms[2 * i]))),
            Formula::al(Formula::ev(Formula::atom(atoms[2 * i + 1]))),
        ])
    }))
}

#[test]
fn eventually_or_always_has_three_states() {
    let f = parse_any_atoms("F a | G b").unwrap();
    let a = build_dgrw(&f).unwrap();
    assert_eq!(a.state_count(), 3);
    // determinism and totality over the full letter set
    for row in &a.delta {
        assert_eq!(row.len(), a.alphabet.letter_count());
        assert!(row.iter().all(|&t| t < a.state_count()));
    }
}

#[test]
fn recurrence_formula_has_two_states_and_four_after_degeneralization() {
    let f = parse_any_atoms("G F a & G F !a").unwrap();
    let a = build_dgrw(&f).unwrap();
    assert_eq!(a.state_count(), 2);
    assert_eq!(degeneralization_index(&a), 2);
    let r = degeneralize(&a).unwrap();
    assert_eq!(r.state_count(), 4);
    assert_eq!(r.pairs.len(), a.condition.pair_count());
}

#[test]
fn three_fairness_constraints() {
    let f = fairness(3);
    let a = build_dgrw(&f).unwrap();
    assert_eq!(a.state_count(), 64);
    assert_eq!(degeneralization_index(&a), 24);
    // unpruned degeneralization multiplies the state space exactly
    let opts = TranslateOptions::default();
    let full = degeneralize_with(&a, &opts, false).unwrap();
    assert_eq!(full.state_count(), 64 * 24);
    let pruned = degeneralize_with(&a, &opts, true).unwrap();
    assert!(pruned.state_count() <= 64 * 24);
}

#[test]
fn degeneralization_index_table() {
    for (text, expect) in [
        ("G F a & G F b & G F c", 3),
        ("G F a & G F b & G F c & G F d", 4),
        ("(F G a | G F b) & (F G c | G F d)", 2),
        (
            "(G F a & G F b & G F c) | (G F !a & G F !b & G F !c)",
            9,
        ),
    ] {
        let a = build_dgrw(&parse_any_atoms(text).unwrap()).unwrap();
        assert_eq!(degeneralization_index(&a), expect, "|B| of {text}");
    }
}

#[test]
fn infinitary_formulas_collapse_to_letter_memory() {
    for text in [
        "G F a & G F !a",
        "(F G a | G F b) & (F G c | G F d)",
        "(G F a & G F b) | G F !c",
    ] {
        let f = parse_any_atoms(text).unwrap();
        assert!(f.is_infinitary(), "{text}");
        let a = build_dgrw(&f).unwrap();
        let first = &a.states[0].formula;
        assert!(a.states.iter().all(|s| &s.formula == first), "{text}");
        assert!(a.state_count() <= a.alphabet.letter_count(), "{text}");
    }
}

#[test]
fn condition_shape_bounds() {
    for text in [
        "F a | G b",
        "G F a & G F !a",
        "(F G a | G F b) & (F G c | G F d)",
        "F (a & G b) | G F c",
    ] {
        let f = parse_any_atoms(text).unwrap();
        let n = f.size() as u32;
        let a = build_dgrw(&f).unwrap();
        let k = a.condition.pair_count();
        assert!(k >= 1);
        assert!((k as u128) <= 2u128.saturating_pow(n), "{text}: k={k}");
        for p in &a.condition.pairs {
            assert!(p.isets.len() <= n as usize, "{text}");
            assert!(!p.isets.is_empty(), "{text}");
        }
    }
}

#[test]
fn lasso_acceptance_examples() {
    let f = parse_any_atoms("F a | G b").unwrap();
    let a = build_dgrw(&f).unwrap();
    assert!(accepts_lasso(&a, &LassoWord::new(vec![], vec![letter(&["b"])])));
    assert!(!accepts_lasso(&a, &LassoWord::new(vec![], vec![Letter::empty()])));

    let g = parse_any_atoms("G F a & G F !a").unwrap();
    let b = build_dgrw(&g).unwrap();
    assert!(accepts_lasso(
        &b,
        &LassoWord::new(vec![], vec![letter(&["a"]), Letter::empty()])
    ));
    assert!(!accepts_lasso(&b, &LassoWord::new(vec![], vec![letter(&["a"])])));
}

#[test]
fn bounded_equivalence_gate() {
    let f = parse_any_atoms("F a | G b").unwrap();
    let a = build_dgrw(&f).unwrap();
    assert_eq!(check_equiv_bounded(&a, &f, 3), EquivVerdict::Equal);

    let g = parse_any_atoms("G F a & G F !a").unwrap();
    let b = build_dgrw(&g).unwrap();
    assert_eq!(check_equiv_bounded(&b, &g, 4), EquivVerdict::Equal);
}

#[test]
fn mutated_condition_yields_counterexample() {
    let f = parse_any_atoms("F a | G b").unwrap();
    let a = build_dgrw(&f).unwrap();
    // Dropping a pair can only shrink the language; at least one pair must be
    // essential, and the checker has to pinpoint a witness word for it.
    let mut broke = false;
    for i in 0..a.condition.pair_count() {
        let mut m = a.clone();
        m.condition.pairs.remove(i);
        match check_equiv_bounded(&m, &f, 3) {
            EquivVerdict::Counterexample(w) => {
                assert_ne!(accepts_lasso(&m, &w), eval_lasso(&f, &w));
                broke = true;
            }
            EquivVerdict::Equal => {}
        }
    }
    assert!(broke, "no single pair deletion was detected");
}

#[test]
fn degeneralization_preserves_language() {
    for text in ["F a | G b", "G F a & G F !a", "F G a | G F b"] {
        let f = parse_any_atoms(text).unwrap();
        let a = build_dgrw(&f).unwrap();
        let r = degeneralize(&a).unwrap();
        assert_eq!(
            check_equiv_bounded_rabin(&r, &f, 3),
            EquivVerdict::Equal,
            "{text}"
        );
    }
}

#[test]
fn index_one_degeneralization_is_identity_shaped() {
    let f = parse_any_atoms("F a | G b").unwrap();
    let a = build_dgrw(&f).unwrap();
    assert_eq!(degeneralization_index(&a), 1);
    let r = degeneralize(&a).unwrap();
    assert_eq!(r.state_count(), a.state_count());
    assert_eq!(r.pairs.len(), a.condition.pair_count());
}

#[test]
fn text_format_round_trip() {
    for text in ["F a | G b", "G F a & G F !a", "(F G a | G F b) & (F G c | G F d)"] {
        let f = parse_any_atoms(text).unwrap();
        let a = build_dgrw(&f).unwrap();
        let dumped = write_dgrw(&a);
        let b = parse_dgrw(&dumped).unwrap();
        assert_eq!(a.state_count(), b.state_count());
        assert_eq!(a.initial, b.initial);
        assert_eq!(a.delta, b.delta);
        assert_eq!(a.condition.pairs.len(), b.condition.pairs.len());
        for (pa, pb) in a.condition.pairs.iter().zip(&b.condition.pairs) {
            assert_eq!(pa.fset, pb.fset);
            assert_eq!(pa.isets, pb.isets);
        }
        // and it still accepts the same small lassos
        assert_eq!(check_equiv_bounded(&b, &f, 2), EquivVerdict::Equal);
    }
}

#[test]
fn alphabet_guard() {
    let many: Vec<String> = (0..12).map(|i| format!("x{i}")).collect();
    let f = Formula::or(many.iter().map(|a| Formula::ev(Formula::atom(a))));
    let err = build_dgrw(&f).unwrap_err();
    assert!(matches!(
        err,
        fgltl_core::automata::TranslateError::AlphabetTooLarge { .. }
    ));
}

#[test]
fn true_false_automata() {
    let t = build_dgrw(&Formula::tt()).unwrap();
    assert_eq!(t.state_count(), 1);
    assert!(accepts_lasso(&t, &LassoWord::new(vec![], vec![Letter::empty()])));
    let f = build_dgrw(&Formula::ff()).unwrap();
    assert!(!accepts_lasso(&f, &LassoWord::new(vec![], vec![Letter::empty()])));
}

#[test]
fn rabin_lasso_acceptance_matches_formula() {
    let f = parse_any_atoms("G F a & G F !a").unwrap();
    let a = build_dgrw(&f).unwrap();
    let r = degeneralize(&a).unwrap();
    let yes = LassoWord::new(vec![], vec![letter(&["a"]), Letter::empty()]);
    let no = LassoWord::new(vec![letter(&["a"])], vec![Letter::empty()]);
    assert!(accepts_lasso_rabin(&r, &yes));
    assert!(!accepts_lasso_rabin(&r, &no));
}
