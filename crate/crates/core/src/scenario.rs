//! The robot error-explanation scenario and its verification suite.
//!
//! A robot in `normal` operation hits an error, explains it to the user in a
//! modality chosen by the context places (`attention`, `no_attention`,
//! `not_present`), and either gets resolved by `act` or retries after
//! `ignore`. A counter of `budget` tokens moves to `counter'` with each
//! explanation; once it is exhausted the robot switches off into `p2` and
//! can `restart`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use thiserror::Error;

use crate::ctl::{CheckError, Checker, Cmp, Formula};
use crate::dsl;
use crate::net::{Net, NetBuilder, TransitionId};
use crate::statespace::{self, AnalysisError, Liveness, ReachabilityGraph};
use crate::structural::{self, InvariantCheck, InvariantVector};

pub const EXPLAIN_TRANSITIONS: [&str; 3] = ["explain_speech", "explain_speech_light", "explain_speech_sound"];
pub const CONTEXT_PLACES: [&str; 3] = ["attention", "no_attention", "not_present"];
pub const ROBOT_PLACES: [&str; 4] = ["normal", "error_occurred", "user_informed", "p2"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Context {
    #[default]
    Attention,
    NoAttention,
    NotPresent,
}

impl Context {
    pub const ALL: [Context; 3] = [Context::Attention, Context::NoAttention, Context::NotPresent];

    pub fn place(self) -> &'static str {
        match self {
            Context::Attention => "attention",
            Context::NoAttention => "no_attention",
            Context::NotPresent => "not_present",
        }
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.place())
    }
}

impl FromStr for Context {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Context::ALL.into_iter().find(|c| c.place() == s).ok_or_else(|| ScenarioError::UnknownContext(s.to_owned()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("explanation budget must be at least 1")]
    ZeroBudget,
    #[error("unknown context `{0}` (expected attention, no_attention or not_present)")]
    UnknownContext(String),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    Invariant(#[from] structural::InvariantError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScenarioConfig {
    pub initial_context: Context,
    /// Explanation attempts before the robot shuts down.
    pub explanation_budget: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig { initial_context: Context::Attention, explanation_budget: 3 }
    }
}

impl ScenarioConfig {
    pub fn new(initial_context: Context, explanation_budget: u64) -> Result<Self, ScenarioError> {
        if explanation_budget == 0 {
            return Err(ScenarioError::ZeroBudget);
        }
        Ok(ScenarioConfig { initial_context, explanation_budget })
    }
}

pub fn build_scenario(cfg: &ScenarioConfig) -> Result<Net, ScenarioError> {
    let budget = cfg.explanation_budget;
    if budget == 0 {
        return Err(ScenarioError::ZeroBudget);
    }
    let mut b = NetBuilder::new("hri_scenario");
    let places: [(&str, u64); 9] = [
        ("normal", 1),
        ("error_occurred", 0),
        ("user_informed", 0),
        ("p2", 0),
        ("attention", u64::from(cfg.initial_context == Context::Attention)),
        ("no_attention", u64::from(cfg.initial_context == Context::NoAttention)),
        ("not_present", u64::from(cfg.initial_context == Context::NotPresent)),
        ("counter", budget),
        ("counter'", 0),
    ];
    for (name, tokens) in places {
        b.place(name, tokens).expect("fixed names are valid");
    }
    let transitions = [
        "error_action",
        "explain_speech",
        "explain_speech_light",
        "explain_speech_sound",
        "act",
        "ignore",
        "switch_off",
        "restart",
        "reset",
        "lose_attention",
        "gain_attention",
        "leave_attentive",
        "leave_inattentive",
        "arrive",
    ];
    for t in transitions {
        b.transition(t).expect("fixed names are valid");
    }

    let mut wire = || -> Result<(), crate::net::NetError> {
        b.input("normal", "error_action", 1)?;
        b.read("counter", "error_action", budget)?;
        b.output("error_action", "error_occurred", 1)?;

        for (t, context) in [
            ("explain_speech", "not_present"),
            ("explain_speech_light", "attention"),
            ("explain_speech_sound", "no_attention"),
        ] {
            b.input("error_occurred", t, 1)?;
            b.input("counter", t, 1)?;
            b.read(context, t, 1)?;
            b.output(t, "user_informed", 1)?;
            b.output(t, "counter'", 1)?;
        }

        b.input("user_informed", "act", 1)?;
        b.output("act", "normal", 1)?;
        b.input("user_informed", "ignore", 1)?;
        b.output("ignore", "error_occurred", 1)?;

        b.input("error_occurred", "switch_off", 1)?;
        b.input("counter'", "switch_off", budget)?;
        b.output("switch_off", "p2", 1)?;
        b.output("switch_off", "counter", budget)?;

        b.input("p2", "restart", 1)?;
        b.output("restart", "normal", 1)?;

        b.input("counter'", "reset", 1)?;
        b.read("normal", "reset", 1)?;
        b.output("reset", "counter", 1)?;

        for (t, from, to) in [
            ("lose_attention", "attention", "no_attention"),
            ("gain_attention", "no_attention", "attention"),
            ("leave_attentive", "attention", "not_present"),
            ("leave_inattentive", "no_attention", "not_present"),
            ("arrive", "not_present", "no_attention"),
        ] {
            b.input(from, t, 1)?;
            b.output(t, to, 1)?;
        }
        Ok(())
    };
    wire().expect("scenario arcs are well formed");
    Ok(b.build())
}

/// How a suite entry is decided.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SuiteCheck {
    /// A CTL formula evaluated at the initial state.
    Ctl(Formula),
    /// `place_bounds(place) <= max`.
    PlaceBound { place: String, max: u64 },
    /// Every listed transition classified live.
    Live(Vec<String>),
    /// The unit vector over `places` is a generated P-invariant with the
    /// given constant weighted sum.
    PInvariant { places: Vec<String>, constant: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub check: SuiteCheck,
    pub expected: bool,
}

impl SuiteEntry {
    /// The entry as a single CTL formula, for property files.
    pub fn as_formula(&self) -> Formula {
        match &self.check {
            SuiteCheck::Ctl(f) => f.clone(),
            SuiteCheck::PlaceBound { place, max } => Formula::ag(Formula::tokens(place, Cmp::Le, *max)),
            SuiteCheck::Live(ts) => Formula::all(ts.iter().map(|t| Formula::ag(Formula::ef(Formula::enabled(t))))),
            SuiteCheck::PInvariant { places, constant } => {
                // the weighted sum is a sum of 0/1 weights: enumerate the splits
                Formula::ag(Formula::any(
                    splits(places.len(), *constant).into_iter().map(|split| {
                        Formula::all(places.iter().zip(split).map(|(p, n)| Formula::tokens(p, Cmp::Eq, n)))
                    }),
                ))
            }
        }
    }
}

/// All ways of writing `total` as an ordered sum of `parts` naturals,
/// lexicographically descending in the first part.
fn splits(parts: usize, total: u64) -> Vec<Vec<u64>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in splits(parts - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertySuite {
    pub entries: Vec<SuiteEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub holds: bool,
    pub expected: bool,
    /// Witness or counterexample for CTL entries that have one.
    pub trace: Option<Vec<TransitionId>>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.holds == self.expected
    }
}

fn ctl(text: &str) -> Formula {
    crate::ctl::parse_formula(text).expect("suite formulas are well formed")
}

pub fn property_suite(cfg: &ScenarioConfig) -> PropertySuite {
    let budget = cfg.explanation_budget;
    let entry = |name, description, check| SuiteEntry { name, description, check, expected: true };
    let pairs = [
        ("explain_speech", "explain_speech_light"),
        ("explain_speech", "explain_speech_sound"),
        ("explain_speech_light", "explain_speech_sound"),
    ];
    let entries = vec![
        entry("deadlock_free", "every reachable marking enables some transition", SuiteCheck::Ctl(ctl("AG !deadlock"))),
        entry(
            "idle_reachable",
            "the idle marking with a token in p2 is reachable",
            SuiteCheck::Ctl(ctl("EF tokens(p2) = 1")),
        ),
        entry(
            "restartable",
            "from idle the robot can always return to normal",
            SuiteCheck::Ctl(ctl("AG (tokens(p2) = 1 -> EF tokens(normal) = 1)")),
        ),
        entry(
            "counter_bounded",
            "counter' never exceeds the explanation budget",
            SuiteCheck::PlaceBound { place: "counter'".into(), max: budget },
        ),
        entry(
            "fairness",
            "whenever the user is informed, act is enabled",
            SuiteCheck::Ctl(ctl("AG (tokens(user_informed) >= 1 -> enabled(act))")),
        ),
        entry(
            "safety_no_premature_shutdown",
            "switch_off is only enabled once the budget is used up",
            SuiteCheck::Ctl(Formula::ag(Formula::implies(
                Formula::enabled("switch_off"),
                Formula::tokens("counter'", Cmp::Eq, budget),
            ))),
        ),
        entry(
            "modality_attention",
            "speech and light needs an attentive, present user",
            SuiteCheck::Ctl(ctl(
                "AG (enabled(explain_speech_light) -> (tokens(attention) = 1 & tokens(not_present) = 0))",
            )),
        ),
        entry(
            "modality_exclusive",
            "no two explanation modalities are enabled together",
            SuiteCheck::Ctl(Formula::all(
                pairs
                    .iter()
                    .map(|(a, b)| Formula::ag(Formula::not(Formula::and(Formula::enabled(a), Formula::enabled(b))))),
            )),
        ),
        entry(
            "modality_reachable",
            "every explanation modality can be enabled",
            SuiteCheck::Ctl(Formula::all(EXPLAIN_TRANSITIONS.iter().map(|t| Formula::ef(Formula::enabled(t))))),
        ),
        entry("act_ignore_live", "act and ignore are live", SuiteCheck::Live(vec!["act".into(), "ignore".into()])),
        entry(
            "context_invariant",
            "exactly one context place is marked",
            SuiteCheck::PInvariant { places: CONTEXT_PLACES.iter().map(|s| s.to_string()).collect(), constant: 1 },
        ),
        entry(
            "counter_invariant",
            "counter and counter' always hold the full budget together",
            SuiteCheck::PInvariant { places: vec!["counter".into(), "counter'".into()], constant: budget },
        ),
        entry(
            "shutdown_forced",
            "with the budget used up, switch_off is enabled and no explanation is",
            SuiteCheck::Ctl(Formula::ag(Formula::implies(
                Formula::and(
                    Formula::tokens("error_occurred", Cmp::Eq, 1),
                    Formula::tokens("counter'", Cmp::Eq, budget),
                ),
                Formula::all(
                    std::iter::once(Formula::enabled("switch_off"))
                        .chain(EXPLAIN_TRANSITIONS.iter().map(|t| Formula::not(Formula::enabled(t)))),
                ),
            ))),
        ),
    ];
    PropertySuite { entries }
}

impl PropertySuite {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Property-file rendering, one `name : formula` per entry.
    pub fn to_props(&self) -> String {
        let formulas: Vec<(&str, Formula)> = self.entries.iter().map(|e| (e.name, e.as_formula())).collect();
        dsl::serialize_properties(formulas.iter().map(|(n, f)| (*n, f)))
    }

    /// Decides every entry on `net`, using the structural and state-space
    /// routes for non-CTL entries.
    pub fn evaluate(&self, net: &Net, g: &ReachabilityGraph) -> Result<Vec<SuiteOutcome>, ScenarioError> {
        g.require_complete()?;
        let mut checker = Checker::new(net, g);
        let bounds = statespace::place_bounds(net, g)?;
        let live = statespace::liveness(net, g)?;
        let invariants = structural::p_invariants(net);

        let mut out = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            let (holds, trace) = match &e.check {
                SuiteCheck::Ctl(f) => {
                    let v = checker.check(f)?;
                    (v.holds, v.trace)
                }
                SuiteCheck::PlaceBound { place, max } => {
                    let p = net.place(place).map_err(AnalysisError::from)?;
                    (bounds[p.index()] <= *max, None)
                }
                SuiteCheck::Live(ts) => {
                    let mut all = true;
                    for t in ts {
                        let t = net.transition(t).map_err(AnalysisError::from)?;
                        all &= live.of(t) == Liveness::Live;
                    }
                    (all, None)
                }
                SuiteCheck::PInvariant { places, constant } => {
                    let mut weights = vec![0u64; net.place_count()];
                    for p in places {
                        weights[net.place(p).map_err(AnalysisError::from)?.index()] = 1;
                    }
                    let v = InvariantVector::place(weights);
                    let generated = invariants.contains(&v);
                    let check = structural::check_p_invariant(net, &v, g)?;
                    let constant_ok = check == InvariantCheck::Invariant { constant: BigUint::from(*constant) };
                    (generated && constant_ok, None)
                }
            };
            out.push(SuiteOutcome { name: e.name, holds, expected: e.expected, trace });
        }
        Ok(out)
    }
}

/// State and edge counts of the full reachability graph.
pub fn scenario_statespace_census(cfg: &ScenarioConfig) -> Result<(usize, usize), ScenarioError> {
    let net = build_scenario(cfg)?;
    let g = statespace::explore(&net, statespace::DEFAULT_LIMIT);
    g.require_complete()?;
    Ok((g.state_count(), g.edge_count()))
}
