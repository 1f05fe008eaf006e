use std::fs;

use msotree::clp::{load_program, parse_query, solve, ClpError, Program, Solution, SolveOptions};
use msotree::compiler::CompileOptions;
use msotree::logic::parse;

fn fixture(name: &str) -> String {
    fs::read_to_string(format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn solutions(program: &Program, query: &str) -> Vec<Solution> {
    let q = parse_query(query, &program.defs).unwrap();
    solve(program, &q, SolveOptions::default()).unwrap().map(Result::unwrap).collect()
}

#[test]
fn lexicon_solutions_entail_their_clauses() {
    let p = load_program(&fixture("lexicon.clp")).unwrap();
    let sols = solutions(&p, "?- lexicon(x).");
    assert_eq!(sols.len(), 3);
    let opts = CompileOptions::default();
    let entails = |s: &Solution, f: &str| s.store.entails(&parse(f).unwrap(), &opts).unwrap();
    assert!(entails(&sols[0], "in(x,Sees) & in(x,V)"));
    assert!(entails(&sols[1], "in(x,John) & in(x,N)"));
    assert!(entails(&sols[2], "in(x,Mary) & in(x,N)"));
    assert!(!entails(&sols[1], "~in(x,N)"));
    assert!(sols[1].store.entails(&parse("in(x,V)").unwrap(), &opts).is_err());
}

#[test]
fn solutions_are_sound() {
    let p = load_program(&fixture("toy_grammar.clp")).unwrap();
    let sols = solutions(&p, &fixture("toy_input.qry"));
    assert!(!sols.is_empty());
    let opts = CompileOptions::default();
    for s in &sols {
        for f in &s.applied {
            assert!(s.store.entails(f, &opts).unwrap(), "store does not entail {f}");
        }
        assert!(s.store.automaton().run_membership(&s.witness).unwrap());
    }
}

#[test]
fn stores_only_shrink_along_a_derivation() {
    let p = load_program(&fixture("toy_grammar.clp")).unwrap();
    for s in solutions(&p, &fixture("toy_input.qry")) {
        for pair in s.history.windows(2) {
            assert!(pair[1].refines(&pair[0]).unwrap());
        }
    }
}

#[test]
fn clause_order_does_not_change_the_answers() {
    let text = fixture("lexicon.clp");
    let reversed: String = text.lines().rev().map(|l| format!("{l}\n")).collect();
    let a = load_program(&text).unwrap();
    let b = load_program(&reversed).unwrap();
    let sa = solutions(&a, "lexicon(x) & lexicon(y)");
    let sb = solutions(&b, "lexicon(x) & lexicon(y)");
    assert_eq!(sa.len(), 9);
    assert_eq!(sb.len(), sa.len());
    for s in &sa {
        let matched = sb.iter().any(|t| {
            t.store.table() == s.store.table() && t.store.automaton().equivalent(s.store.automaton()).unwrap()
        });
        assert!(matched, "no counterpart for {}", s.store);
    }
}

#[test]
fn self_precedence_has_no_solutions() {
    let p = load_program(&fixture("lexicon.clp")).unwrap();
    assert!(solutions(&p, "?- { prec(x,x) } & lexicon(x).").is_empty());
}

#[test]
fn ungrammatical_order_has_no_solutions() {
    let p = load_program(&fixture("toy_grammar.clp")).unwrap();
    assert!(solutions(&p, &fixture("toy_permuted.qry")).is_empty());
}

#[test]
fn parse_program_loads() {
    let p = load_program(&fixture("parse.clp")).unwrap();
    assert_eq!(p.defs.len(), 1);
    assert_eq!(p.clauses.len(), 4);
    assert!(p.warnings.is_empty());
    assert!(p.clauses.iter().all(|c| c.constraint.as_ref().is_none_or(|f| !f.has_calls())));
}

#[test]
fn static_errors() {
    let p = load_program(&fixture("lexicon.clp")).unwrap();
    let q = parse_query("lexicon(x) & verb(x)", &p.defs).unwrap();
    assert!(matches!(solve(&p, &q, SolveOptions::default()), Err(ClpError::UnknownPredicate(name)) if name == "verb/1"));
    assert!(load_program("lexicon(x) <- { in(x,V) ").is_err());
}

#[test]
fn width_overflow_is_reported() {
    let p = load_program("w(a,b,c,d) <- { prec(a,b) & prec(c,d) }.").unwrap();
    let q = parse_query("w(a,b,c,d) & w(e,f,g,h)", &[]).unwrap();
    let opts = SolveOptions {
        compile: CompileOptions { max_width: 6, ..CompileOptions::default() },
        ..SolveOptions::default()
    };
    let results: Vec<_> = solve(&p, &q, opts).unwrap().collect();
    assert_eq!(results.len(), 1);
    assert!(results[0].is_err());
}
