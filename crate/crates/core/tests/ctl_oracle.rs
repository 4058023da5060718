mod common;

use std::collections::BTreeSet;

use common::{oracle_fire, oracle_graph, reachable_from, seeded_net, Graph};
use pnverify_core::ctl::{Checker, Cmp, Formula};
use pnverify_core::statespace::replay;
use pnverify_core::{explore, parse_formula, Net};
use proptest::prelude::*;

/// Direct semantics: `EF`/`AG` quantify over the states reachable by some
/// path, `E[a U b]` searches the paths that stay inside `a`.
fn holds(net: &Net, g: &Graph, f: &Formula, m: &[u64]) -> bool {
    use Formula::*;
    match f {
        True => true,
        False => false,
        Deadlock => g[m].is_empty(),
        Tokens { place, cmp, value } => cmp.eval(m[net.place(place).unwrap().0], *value),
        Enabled(t) => oracle_fire(net, m, net.transition(t).unwrap().0).is_some(),
        Not(x) => !holds(net, g, x, m),
        And(a, b) => holds(net, g, a, m) && holds(net, g, b, m),
        Or(a, b) => holds(net, g, a, m) || holds(net, g, b, m),
        Implies(a, b) => !holds(net, g, a, m) || holds(net, g, b, m),
        EX(x) => g[m].iter().any(|(_, n)| holds(net, g, x, n)),
        AX(x) => g[m].iter().all(|(_, n)| holds(net, g, x, n)),
        EF(x) => reachable_from(g, m).iter().any(|n| holds(net, g, x, n)),
        AG(x) => reachable_from(g, m).iter().all(|n| holds(net, g, x, n)),
        EU(a, b) => {
            let mut seen = BTreeSet::new();
            let mut stack = vec![m.to_vec()];
            while let Some(s) = stack.pop() {
                if !seen.insert(s.clone()) {
                    continue;
                }
                if holds(net, g, b, &s) {
                    return true;
                }
                if holds(net, g, a, &s) {
                    stack.extend(g[&s].iter().map(|(_, n)| n.clone()));
                }
            }
            false
        }
        EG(_) | AF(_) | AU(..) => unimplemented!("not part of the oracle fragment"),
    }
}

fn atom(net: &Net) -> impl Strategy<Value = Formula> {
    let places: Vec<String> = net.places().map(|p| net.place_name(p).to_owned()).collect();
    let transitions: Vec<String> = net.transitions().map(|t| net.transition_name(t).to_owned()).collect();
    prop_oneof![
        Just(Formula::Deadlock),
        Just(Formula::True),
        (prop::sample::select(places), prop::sample::select(vec![Cmp::Le, Cmp::Eq, Cmp::Ge]), 0u64..4)
            .prop_map(|(p, c, v)| Formula::tokens(&p, c, v)),
        prop::sample::select(transitions).prop_map(|t| Formula::enabled(&t)),
    ]
}

fn formula(net: &Net) -> impl Strategy<Value = Formula> {
    atom(net).prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::ef),
            inner.clone().prop_map(Formula::ag),
            inner.clone().prop_map(Formula::not),
            inner.clone().prop_map(|f| Formula::EX(Box::new(f))),
            inner.clone().prop_map(|f| Formula::AX(Box::new(f))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::EU(Box::new(a), Box::new(b))),
        ]
    })
}

fn case() -> impl Strategy<Value = (u64, Vec<Formula>)> {
    any::<u64>().prop_flat_map(|seed| {
        let net = seeded_net(seed);
        (Just(seed), prop::collection::vec(formula(&net), 4))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn labelling_matches_direct_semantics((seed, formulas) in case()) {
        let net = seeded_net(seed);
        let Some(oracle) = oracle_graph(&net, 200) else { return Ok(()) };
        let g = explore(&net, 200);
        let mut checker = Checker::new(&net, &g);
        for f in &formulas {
            let labels = checker.labels(f).unwrap();
            for (s, m) in g.states().iter().enumerate() {
                prop_assert_eq!(labels[s], holds(&net, &oracle, f, m.counts()), "{} at {:?}", f, m);
            }
            let v = checker.check(f).unwrap();
            prop_assert_eq!(v.holds, labels[0]);
            if let Some(path) = v.trace {
                replay(&net, &path).unwrap();
            }
        }
    }

    #[test]
    fn dualities((seed, formulas) in case()) {
        let net = seeded_net(seed);
        let g = explore(&net, 300);
        if !g.is_complete() {
            return Ok(());
        }
        let mut c = Checker::new(&net, &g);
        let b = |f: &Formula| Box::new(f.clone());
        for f in &formulas {
            let pairs = [
                (Formula::AF(b(f)), Formula::AU(Box::new(Formula::True), b(f))),
                (Formula::EF(b(f)), Formula::EU(Box::new(Formula::True), b(f))),
                (Formula::EG(b(f)), Formula::not(Formula::AF(Box::new(Formula::not(f.clone()))))),
                (Formula::ag(f.clone()), Formula::not(Formula::ef(Formula::not(f.clone())))),
                (Formula::AX(b(f)), Formula::or(Formula::Deadlock, Formula::not(Formula::EX(Box::new(Formula::not(f.clone())))))),
            ];
            for (lhs, rhs) in pairs {
                let (l, r) = (c.labels(&lhs).unwrap(), c.labels(&rhs).unwrap());
                prop_assert_eq!(l, r, "{} vs {}", lhs, rhs);
            }
        }
    }

    #[test]
    fn universal_counterexamples_reach_a_violation((seed, formulas) in case()) {
        let net = seeded_net(seed);
        let g = explore(&net, 300);
        if !g.is_complete() {
            return Ok(());
        }
        let mut c = Checker::new(&net, &g);
        for f in formulas.iter().filter(|f| f.is_state_formula()) {
            let v = c.check(&Formula::ag(f.clone())).unwrap();
            if !v.holds {
                let end = replay(&net, &v.trace.expect("refuted AG has a counterexample")).unwrap();
                prop_assert!(!pnverify_core::ctl::eval_state(&net, f, &end).unwrap());
            }
            let v = c.check(&Formula::ef(f.clone())).unwrap();
            if v.holds {
                let end = replay(&net, &v.trace.expect("EF witness")).unwrap();
                prop_assert!(pnverify_core::ctl::eval_state(&net, f, &end).unwrap());
            }
        }
    }
}

#[test]
fn fig3b_liveness_counterexample_ends_in_a_deadlock() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/fig3b.pn")).unwrap();
    let net = pnverify_core::parse_net(&text).unwrap();
    let g = explore(&net, 100);
    let v = Checker::new(&net, &g).check(&parse_formula("AG EF enabled(t4)").unwrap()).unwrap();
    assert!(!v.holds);
    let end = replay(&net, &v.trace.unwrap()).unwrap();
    let shown = pnverify_core::format_marking(&net, &end);
    assert!(shown == "{p4}" || shown == "{p6}", "{shown}");
}
