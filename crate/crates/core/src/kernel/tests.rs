use super::*;
use crate::testutil::{clause, lit, term, term_pair};
use alloc::vec;
use proptest::prelude::*;

#[test]
fn unify_examples() {
    let s = unify(&lit("p(X)"), &lit("p(a)")).unwrap();
    assert_eq!(s, Substitution::from_pairs([(0, term("a"))]));
    assert!(unify(&lit("p(X)"), &lit("q(a)")).is_none());
    let (x, y) = term_pair("p(X, f(X))", "p(Y, Y)");
    assert!(unify(&x, &y).is_none(), "occurs check");
}

#[test]
fn unify_returns_idempotent_mgu() {
    let (s, t) = term_pair("f(X, g(Y), Y)", "f(g(Z), Z, a)");
    let sigma = unify(&s, &t).unwrap();
    assert_eq!(sigma.apply_term(&s), sigma.apply_term(&t));
    assert_eq!(sigma.apply_term(&sigma.apply_term(&s)), sigma.apply_term(&s));
    assert_eq!(sigma.apply_term(&s), term("f(g(g(a)), g(a), a)"));
}

#[test]
fn match_examples() {
    assert_eq!(matching(&lit("p(X)"), &lit("p(f(a))")).unwrap(), Substitution::from_pairs([(0, term("f(a)"))]));
    assert!(matching(&lit("p(f(a))"), &lit("p(X)")).is_none());
    assert!(matching(&lit("p(X,X)"), &lit("p(a,b)")).is_none());
}

#[test]
fn apply_examples() {
    let s = Substitution::from_pairs([(0, term("a"))]);
    assert_eq!(s.apply_literal(&lit("p(X,Y)")), Literal::pos("p", vec![term("a"), Term::Var(1)]));
    let c = clause("p(X) | q(Y)");
    assert_eq!(Substitution::new().apply_clause(&c), c);
    assert_eq!(s.apply_clause(&clause("p(X) | p(a)")), clause("p(a)"));
}

#[test]
fn rename_apart_examples() {
    let used: BTreeSet<Var> = [0].into_iter().collect();
    let r = rename_apart(&clause("p(X)"), &used);
    assert_eq!(r, Clause::unit(Literal::pos("p", vec![Term::Var(1)])));
    let g = clause("p(a) | q(b)");
    assert_eq!(rename_apart(&g, &used), g);
    let both = clause("p(X) | q(X)");
    let r = rename_apart(&both, &[0, 3].into_iter().collect());
    assert_eq!(r.vars().len(), 1);
    assert!(variant_equal(&r, &both));
}

#[test]
fn variant_examples() {
    assert!(variant_equal(&clause("p(X) | q(X)"), &clause("p(Y) | q(Y)")));
    assert!(!variant_equal(&clause("p(X) | q(X)"), &clause("p(Y) | q(Z)")));
    let c = clause("p(X, f(Y)) | ~q(Y)");
    assert!(variant_equal(&c, &c));
    assert!(!variant_equal(&clause("p(X, Y)"), &clause("p(X, X)")));
}

#[test]
fn subsumption_examples() {
    assert!(subsumes(&clause("p(X)"), &clause("p(a) | q(b)")));
    assert!(!subsumes(&clause("p(a)"), &clause("p(X)")));
    assert!(!subsumes(&clause("p(X) | q(X)"), &clause("p(a) | q(b)")));
    // a clause never subsumes its own proper factor
    assert!(!subsumes(&clause("p(X) | p(Y)"), &clause("p(Z)")));
    assert!(!subsumes(&clause("p(X)"), &clause("~p(a)")));
}

#[test]
fn tautology_examples() {
    assert!(is_tautology(&clause("p(a) | ~p(a)")));
    assert!(is_tautology(&clause("f(X) = f(X)")));
    assert!(!is_tautology(&clause("p(X) | ~p(a)")));
    assert!(!is_tautology(&clause("f(X) != f(X)")));
}

#[test]
fn measures_examples() {
    let m = literal_measures(&lit("~p(f(X), a)"));
    assert_eq!(m, Measures { symbol_count: 4, var_occurrences: 1, distinct_vars: 1, max_depth: 3 });
    assert_eq!(literal_measures(&lit("p(a)")).symbol_count, 2);
    assert_eq!(literal_measures(&lit("~p(a)")).symbol_count, 2);
    assert_eq!(clause_measures(&Clause::empty()), Measures::default());
    assert_eq!(literal_measures(&lit("p(X)")).max_depth, 2);
}

#[test]
fn clause_is_a_set() {
    let c = clause("q(a) | p(X) | q(a)");
    assert_eq!(c.len(), 2);
    // negative literals first, then by predicate name
    let d = clause("r | ~s | p");
    assert_eq!(d.literals()[0], lit("~s"));
    assert_eq!(d.literals()[1], lit("p"));
}

// ---- property tests -------------------------------------------------------

fn arb_term(depth: u32) -> BoxedStrategy<Term> {
    let leaf = prop_oneof![
        (0u32..3).prop_map(Term::Var),
        Just(Term::constant("a")),
        Just(Term::constant("b")),
    ];
    leaf.prop_recursive(depth, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::app("f", vec![t])),
            (inner.clone(), inner).prop_map(|(x, y)| Term::app("g", vec![x, y])),
        ]
    })
    .boxed()
}

fn arb_literal() -> impl Strategy<Value = Literal> {
    (any::<bool>(), prop::sample::select(vec!["p", "q"]), arb_term(2), arb_term(2))
        .prop_map(|(pos, p, x, y)| Literal::new(pos, p, vec![x, y]))
}

fn arb_clause() -> impl Strategy<Value = Clause> {
    prop::collection::vec(arb_literal(), 1..4).prop_map(Clause::new)
}

/// All terms of depth ≤ 2 over {a/0, f/1}.
fn small_terms() -> Vec<Term> {
    let a = Term::constant("a");
    let fa = Term::app("f", vec![a.clone()]);
    vec![a, fa]
}

proptest! {
    #[test]
    fn mgu_is_sound(s in arb_term(4), t in arb_term(4)) {
        if let Some(sigma) = unify(&s, &t) {
            let (x, y) = (sigma.apply_term(&s), sigma.apply_term(&t));
            prop_assert_eq!(&x, &y);
            prop_assert_eq!(sigma.apply_term(&x), x);
        }
    }

    #[test]
    fn mgu_is_most_general(s in arb_small_term(), t in arb_small_term()) {
        // Brute force: every ground substitution of X0,X1 over depth-2 terms.
        let candidates = small_terms();
        let sigma = unify(&s, &t);
        for t0 in &candidates {
            for t1 in &candidates {
                let tau = Substitution::from_pairs([(0, t0.clone()), (1, t1.clone())]);
                if tau.apply_term(&s) == tau.apply_term(&t) {
                    let sigma = sigma.as_ref().expect("a unifier exists, so unify must succeed");
                    // τ = τ' ∘ σ: match (σX0, σX1) onto (τX0, τX1) simultaneously
                    let lhs = Term::app("w", vec![sigma.apply_term(&Term::Var(0)), sigma.apply_term(&Term::Var(1))]);
                    let rhs = Term::app("w", vec![t0.clone(), t1.clone()]);
                    prop_assert!(matching(&lhs, &rhs).is_some(), "τ does not factor through σ");
                }
            }
        }
    }

    #[test]
    fn subsumption_is_reflexive(c in arb_clause()) {
        prop_assert!(subsumes(&c, &c));
    }

    #[test]
    fn subsumption_is_transitive(a in arb_clause(), b in arb_clause(), c in arb_clause()) {
        if subsumes(&a, &b) && subsumes(&b, &c) {
            prop_assert!(subsumes(&a, &c));
        }
    }

    #[test]
    fn instances_are_subsumed(c in arb_clause(), t in arb_term(2)) {
        let inst = Substitution::from_pairs([(0, t)]).apply_clause(&c);
        if inst.len() == c.len() {
            prop_assert!(subsumes(&c, &inst));
        }
    }

    #[test]
    fn variants_are_an_equivalence(c in arb_clause(), shift in 1u32..50) {
        let d = c.shifted(shift);
        prop_assert!(variant_equal(&c, &c));
        prop_assert!(variant_equal(&c, &d));
        prop_assert!(variant_equal(&d, &c));
        let e = rename_apart(&d, &d.vars().into_iter().collect());
        prop_assert!(variant_equal(&c, &e));
        prop_assert!(variant_equal(&c, &c.normalized()));
        prop_assert_eq!(c.skeleton(), e.skeleton());
    }

    #[test]
    fn empty_substitution_is_identity(c in arb_clause()) {
        prop_assert_eq!(Substitution::new().apply_clause(&c), c);
    }
}

fn arb_small_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![(0u32..2).prop_map(Term::Var), Just(Term::constant("a"))];
    leaf.prop_recursive(2, 6, 1, |inner| inner.prop_map(|t| Term::app("f", vec![t])))
}
