mod common;

use common::{find_counterexample, holds, laws, strategies, Margins};
use msotree::compiler::{compile_formula, zero_pad_closure, CompileOptions};
use msotree::logic::{expand_macros, parse, parse_formula, VarTable};
use proptest::prelude::*;

fn ambient() -> VarTable {
    VarTable::from_names(["x", "y", "X"]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn double_complement(a in strategies::det_automaton(2, 4)) {
        laws::double_complement(&a)?;
    }

    #[test]
    fn de_morgan(a in strategies::det_automaton(2, 3), b in strategies::det_automaton(2, 3)) {
        laws::de_morgan(&a, &b)?;
    }

    #[test]
    fn project_after_cylindrify_is_identity(a in strategies::det_automaton(2, 4), pos in 0..3usize) {
        laws::section(&a, pos)?;
    }

    #[test]
    fn minimize_is_idempotent_and_preserves_language(
        a in prop_oneof![strategies::det_automaton(2, 4), strategies::nfa(2, 4)]
    ) {
        laws::minimize(&a)?;
    }

    #[test]
    fn determinize_preserves_language(a in strategies::nfa(2, 4)) {
        let d = a.determinize();
        prop_assert!(d.is_deterministic());
        let bad = find_counterexample(2, 3, |t| a.run_membership(t).unwrap() == d.run_membership(t).unwrap());
        prop_assert!(bad.is_none(), "differs on {}", bad.unwrap());
    }

    #[test]
    fn intersection_and_union_are_pointwise(a in strategies::nfa(1, 3), b in strategies::det_automaton(1, 3)) {
        let i = a.intersect(&b).unwrap();
        let u = a.union(&b).unwrap();
        let bad = find_counterexample(1, 4, |t| {
            let (x, y) = (a.run_membership(t).unwrap(), b.run_membership(t).unwrap());
            i.run_membership(t).unwrap() == (x && y) && u.run_membership(t).unwrap() == (x || y)
        });
        prop_assert!(bad.is_none(), "differs on {}", bad.unwrap());
    }

    #[test]
    fn emptiness_agrees_with_witness(a in prop_oneof![strategies::det_automaton(1, 4), strategies::nfa(1, 4)]) {
        let w = a.witness();
        prop_assert_eq!(a.is_empty(), w.is_none());
        if let Some(t) = w {
            prop_assert!(a.run_membership(&t).unwrap());
            if t.size() > 0 {
                let smaller = find_counterexample(1, t.size() - 1, |s| !a.run_membership(s).unwrap());
                prop_assert!(smaller.is_none(), "{} is accepted and smaller than {}", smaller.unwrap(), t);
            }
        }
        prop_assert_eq!(a.emptiness_cross_check(), Some(a.is_empty()));
    }

    #[test]
    fn closure_is_idempotent_and_extensive(a in strategies::det_automaton(1, 3)) {
        let c = zero_pad_closure(&a);
        prop_assert!(a.is_subset_of(&c).unwrap());
        prop_assert!(zero_pad_closure(&c).equivalent(&c).unwrap());
    }

    #[test]
    fn text_round_trip(a in strategies::nfa(2, 3)) {
        let back = msotree::TreeAutomaton::from_text(&a.to_text()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn forall_is_not_exists_not(f in strategies::formula(1)) {
        laws::forall_is_not_exists_not(&f)?;
    }

    #[test]
    fn print_then_parse_is_identity(f in strategies::formula(2)) {
        let text = f.to_string();
        prop_assert_eq!(parse(&text).unwrap(), f, "{}", text);
    }

    #[test]
    fn singleton_atoms_do_not_change_languages(f in strategies::formula(2)) {
        let on = compile_formula(&f, Some(&ambient()), CompileOptions::default()).unwrap();
        let off_opts = CompileOptions { singleton_atoms: false, ..CompileOptions::default() };
        let off = compile_formula(&f, Some(&ambient()), off_opts).unwrap();
        prop_assert!(on.automaton.equivalent(&off.automaton).unwrap(), "{}", f);
    }

    #[test]
    fn minimization_policy_does_not_change_languages(f in strategies::formula(1)) {
        let on = compile_formula(&f, Some(&ambient()), CompileOptions::default()).unwrap();
        let off_opts = CompileOptions { minimize: false, ..CompileOptions::default() };
        let off = compile_formula(&f, Some(&ambient()), off_opts).unwrap();
        prop_assert!(on.automaton.equivalent(&off.automaton).unwrap(), "{}", f);
    }

    #[test]
    fn compiled_formulas_match_the_evaluator(f in strategies::formula(2)) {
        let c = compile_formula(&f, Some(&ambient()), CompileOptions::default()).unwrap();
        let bad = find_counterexample(3, 3, |t| c.automaton.run_membership(t).unwrap() == holds(&f, &c.table, t, Margins::default()));
        prop_assert!(bad.is_none(), "{} disagrees on {}", f, bad.unwrap());
    }

    #[test]
    fn contradictions_compile_to_the_empty_automaton(f in strategies::formula(1)) {
        let both = msotree::logic::Formula::and(f.clone(), msotree::logic::Formula::not(f));
        let c = compile_formula(&both, Some(&ambient()), CompileOptions::default()).unwrap();
        prop_assert!(c.automaton.is_empty());
        prop_assert_eq!(c.automaton.num_states(), 1);
    }
}

#[test]
fn macro_expansion_keeps_free_variables() {
    let file = parse_formula(
        "def CCom(x,y) := (all1 z. pdom(z,x) -> pdom(z,y)) & ~rdom(x,y);\n\
         def AcCom(x,y) := CCom(x,y) & ~CCom(y,x) & prec(x,y);\n\
         AcCom(a,z) & in(z,Z)",
    )
    .unwrap();
    let expanded = expand_macros(&file.main, &file.defs).unwrap();
    assert_eq!(expanded.free_vars(), file.main.free_vars());
    assert!(!expanded.has_calls());
}
