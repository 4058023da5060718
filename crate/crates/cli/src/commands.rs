use std::fmt::Write;

use pnverify_core::ctl::{self, CheckError, Checker};
use pnverify_core::scenario::{build_scenario, property_suite, Context, ScenarioConfig};
use pnverify_core::statespace::{self, Boundedness, Reach};
use pnverify_core::structural::{self, InvariantVector};
use pnverify_core::{
    dsl, parse_formula, parse_properties, Marking, Net, ReachabilityGraph, Status as GraphStatus, TransitionId,
};
use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::report::*;
use crate::{load_net, read_source, Failure, Status};

fn names(net: &Net, path: &[TransitionId]) -> Vec<String> {
    path.iter().map(|&t| net.transition_name(t).to_owned()).collect()
}

fn exploration(g: &ReachabilityGraph) -> Exploration {
    let (status, limit) = match g.status() {
        GraphStatus::Complete => ("complete", None),
        GraphStatus::Truncated { limit } => ("truncated", Some(limit)),
    };
    Exploration { status, limit: limit.unwrap_or(g.state_count()), states: g.state_count(), edges: g.edge_count() }
}

fn exploration_line(net: &Net, g: &ReachabilityGraph) -> String {
    match g.status() {
        GraphStatus::Complete => format!("net {}: {} states, {} edges\n", net.name(), g.state_count(), g.edge_count()),
        GraphStatus::Truncated { limit } => {
            format!("net {}: state space truncated at {limit} states (raise --limit)\n", net.name())
        }
    }
}

pub fn check(net_path: &str, props_path: &str, limit: usize) -> Result<crate::report::Outcome, Failure> {
    if net_path == "-" && props_path == "-" {
        return Err(Failure("only one input can come from standard input".into()));
    }
    let net = load_net(net_path)?;
    let text = read_source(props_path)?;
    let props = parse_properties(&text).map_err(|e| Failure(format!("{props_path}:{e}")))?;
    for p in &props {
        ctl::validate(&net, &p.formula).map_err(|e| Failure(format!("{props_path}:{}: {}: {e}", p.line, p.name)))?;
    }

    let g = statespace::explore(&net, limit);
    let mut checker = Checker::new(&net, &g);
    let mut results = Vec::with_capacity(props.len());
    let mut human = exploration_line(&net, &g);
    for p in &props {
        let (verdict, trace) = match checker.check(&p.formula) {
            Ok(v) => (if v.holds { "holds" } else { "refuted" }, v.trace),
            Err(CheckError::Truncated { .. }) => ("unknown", None),
            Err(e) => return Err(e.into()),
        };
        let end = match &trace {
            Some(path) => Some(dsl::format_marking(&net, &statespace::replay(&net, path)?)),
            None => None,
        };
        let _ = writeln!(human, "{verdict:<8} {}", p.name);
        if let (Some(path), Some(end)) = (&trace, &end) {
            let label = if verdict == "holds" { "witness" } else { "counterexample" };
            let _ = writeln!(human, "         {label}: {} -> {end}", display_path(&net, path));
        }
        results.push(PropertyResult {
            name: p.name.clone(),
            formula: p.formula.to_string(),
            verdict,
            trace: trace.map(|t| names(&net, &t)),
            end,
        });
    }

    let count = |v: &str| results.iter().filter(|r| r.verdict == v).count();
    let summary =
        Summary { total: results.len(), holds: count("holds"), refuted: count("refuted"), unknown: count("unknown") };
    let _ = write!(human, "{}/{} properties hold", summary.holds, summary.total);
    if summary.unknown > 0 {
        let _ = write!(human, ", {} undecided", summary.unknown);
    }
    human.push('\n');
    let status = if summary.unknown > 0 {
        Status::Truncated
    } else if summary.refuted > 0 {
        Status::Refuted
    } else {
        Status::Pass
    };
    let report = CheckReport {
        header: Header::new("check", net.name()),
        exploration: exploration(&g),
        properties: results,
        summary,
    };
    Ok(Outcome::new(status, &report, human))
}

fn display_path(net: &Net, path: &[TransitionId]) -> String {
    if path.is_empty() {
        "(empty)".to_owned()
    } else {
        names(net, path).join(" ")
    }
}

fn invariant_entry(net: &Net, v: &InvariantVector, constant: bool) -> InvariantEntry {
    let label = |i: usize| match v.kind {
        structural::InvariantKind::Place => net.place_name(pnverify_core::PlaceId(i)).to_owned(),
        structural::InvariantKind::Transition => net.transition_name(TransitionId(i)).to_owned(),
    };
    let terms: Vec<String> = v
        .support()
        .into_iter()
        .map(|i| {
            let w = &v.weights[i];
            if *w == 1u32.into() {
                label(i)
            } else {
                format!("{w} {}", label(i))
            }
        })
        .collect();
    InvariantEntry {
        text: terms.join(" + "),
        weights: v.support().into_iter().map(|i| Weight { name: label(i), weight: big(&v.weights[i]) }).collect(),
        constant: constant.then(|| big(&v.weighted_sum(net.initial_marking().counts()))),
    }
}

pub fn analyze(net_path: &str, limit: usize) -> Result<Outcome, Failure> {
    let net = load_net(net_path)?;
    let g = statespace::explore(&net, limit);
    let p_invariants: Vec<_> = structural::p_invariants(&net).iter().map(|v| invariant_entry(&net, v, true)).collect();
    let t_invariants: Vec<_> = structural::t_invariants(&net).iter().map(|v| invariant_entry(&net, v, false)).collect();
    let mut human = exploration_line(&net, &g);

    let mut report = AnalyzeReport {
        header: Header::new("analyze", net.name()),
        exploration: exploration(&g),
        bounded: None,
        unbounded_places: Vec::new(),
        deadlock_free: None,
        deadlocks: Vec::new(),
        dead_transitions: Vec::new(),
        liveness: Vec::new(),
        bounds: Vec::new(),
        p_invariants,
        t_invariants,
    };

    let status = if g.is_complete() {
        let live = statespace::liveness(&net, &g)?;
        let bounds = statespace::place_bounds(&net, &g)?;
        report.bounded = Some(true);
        report.deadlock_free = Some(live.deadlock_free);
        report.deadlocks = live.dead_markings.iter().map(|m| dsl::format_marking(&net, m)).collect();
        report.dead_transitions =
            statespace::dead_transitions(&net, &g)?.into_iter().map(|t| net.transition_name(t).to_owned()).collect();
        report.liveness = net
            .transitions()
            .map(|t| TransitionClass { transition: net.transition_name(t).to_owned(), class: live.of(t).to_string() })
            .collect();
        report.bounds = net
            .places()
            .map(|p| PlaceBound { place: net.place_name(p).to_owned(), bound: bounds[p.index()] })
            .collect();

        if report.deadlocks.is_empty() {
            human.push_str("deadlock-free\n");
        } else {
            let _ = writeln!(human, "deadlocks: {}", report.deadlocks.join(" "));
        }
        if !report.dead_transitions.is_empty() {
            let _ = writeln!(human, "dead transitions: {}", report.dead_transitions.join(" "));
        }
        human.push_str("liveness:\n");
        for c in &report.liveness {
            let _ = writeln!(human, "  {:<24} {}", c.transition, c.class);
        }
        human.push_str("bounds:\n");
        for b in &report.bounds {
            let _ = writeln!(human, "  {:<24} {}", b.place, b.bound);
        }
        Status::Pass
    } else {
        // the graph says nothing definite; boundedness can still be decided
        match statespace::karp_miller_with_limit(&net, limit) {
            Ok(tree) => match tree.verdict {
                Boundedness::Bounded => {
                    report.bounded = Some(true);
                    human.push_str("bounded (Karp-Miller), but the state space exceeds the limit\n");
                }
                Boundedness::Unbounded { places } => {
                    report.bounded = Some(false);
                    report.unbounded_places = places.iter().map(|&p| net.place_name(p).to_owned()).collect();
                    let _ = writeln!(human, "unbounded places: {}", report.unbounded_places.join(" "));
                }
            },
            Err(_) => human.push_str("boundedness undecided: coverability tree exceeds the limit\n"),
        }
        Status::Truncated
    };

    human.push_str("P-invariants:\n");
    for inv in &report.p_invariants {
        let constant = inv.constant.as_ref().map(|c| c.to_string().trim_matches('"').to_owned()).unwrap_or_default();
        let _ = writeln!(human, "  {} = {constant}", inv.text);
    }
    human.push_str("T-invariants:\n");
    for inv in &report.t_invariants {
        let _ = writeln!(human, "  {}", inv.text);
    }
    Ok(Outcome::new(status, &report, human))
}

pub fn reach(net_path: &str, goal: &str, limit: usize) -> Result<Outcome, Failure> {
    let net = load_net(net_path)?;
    let result = if goal.trim_start().starts_with('{') {
        let target = dsl::parse_marking(&net, goal).map_err(|e| Failure(format!("goal:{e}")))?;
        statespace::reachable(&net, |m: &Marking| *m == target, limit)
    } else {
        let f = parse_formula(goal).map_err(|e| Failure(format!("goal:{e}")))?;
        if !f.is_state_formula() {
            return Err(Failure("goal must be a marking literal or a formula without temporal operators".into()));
        }
        ctl::validate(&net, &f)?;
        statespace::reachable(&net, |m: &Marking| ctl::eval_state(&net, &f, m).expect("validated"), limit)
    };

    let mut report = ReachReport {
        header: Header::new("reach", net.name()),
        goal: goal.to_owned(),
        verdict: "unknown",
        limit,
        witness: None,
        marking: None,
    };
    let (status, human) = match result {
        Reach::Found { witness, marking } => {
            let end = dsl::format_marking(&net, &marking);
            let human = format!("reachable in {} steps: {} -> {end}\n", witness.len(), display_path(&net, &witness));
            report.verdict = "reachable";
            report.witness = Some(names(&net, &witness));
            report.marking = Some(end);
            (Status::Pass, human)
        }
        Reach::Unreachable => {
            report.verdict = "unreachable";
            (Status::Refuted, "unreachable\n".to_owned())
        }
        Reach::LimitReached { limit } => {
            (Status::Truncated, format!("unknown: no match within {limit} states (raise --limit)\n"))
        }
    };
    Ok(Outcome::new(status, &report, human))
}

pub fn simulate_random(net: &Net, seed: u64, steps: usize) -> Result<Outcome, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = net.initial_marking().clone();
    let initial = dsl::format_marking(net, &m);
    let mut human = format!("seed {seed}\n{initial}\n");
    let mut fired = Vec::new();
    for _ in 0..steps {
        let Some(&t) = net.enabled_set(&m).choose(&mut rng) else { break };
        m = net.fire(&m, t)?;
        let marking = dsl::format_marking(net, &m);
        let _ = writeln!(human, "{} -> {marking}", net.transition_name(t));
        fired.push(SimStep { transition: net.transition_name(t).to_owned(), marking });
    }
    let deadlock = net.is_dead(&m);
    if deadlock {
        human.push_str("deadlock: no enabled transitions\n");
    }
    let report =
        SimulationReport { header: Header::new("simulate", net.name()), seed, initial, steps: fired, deadlock };
    Ok(Outcome::new(Status::Pass, &report, human))
}

pub fn dot(net_path: &str, marking: Option<&str>) -> Result<Outcome, Failure> {
    let net = load_net(net_path)?;
    let m = match marking {
        Some(text) => dsl::parse_marking(&net, text).map_err(|e| Failure(format!("marking:{e}")))?,
        None => net.initial_marking().clone(),
    };
    Ok(Outcome::raw(dsl::to_dot(&net, &m)))
}

pub fn scenario(context: Context, budget: u64, props: bool) -> Result<Outcome, Failure> {
    let cfg = ScenarioConfig::new(context, budget)?;
    let text = if props { property_suite(&cfg).to_props() } else { dsl::serialize_net(&build_scenario(&cfg)?) };
    Ok(Outcome::raw(text))
}
