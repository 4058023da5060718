//! Run reports: one serde struct per command, rendered as JSON with stable
//! keys (field order) or as plain text.

use serde::Serialize;

use crate::Status;

pub const SCHEMA_VERSION: u32 = 1;

pub struct Outcome {
    pub status: Status,
    pub human: String,
    pub json: String,
    /// The output is an artifact (DOT, net text) printed even with `--quiet`.
    pub raw: bool,
}

impl Outcome {
    pub fn new<T: Serialize>(status: Status, report: &T, human: String) -> Self {
        let mut json = serde_json::to_string_pretty(report).expect("reports serialize");
        json.push('\n');
        Outcome { status, human, json, raw: false }
    }

    pub fn raw(text: String) -> Self {
        Outcome { status: Status::Pass, human: text.clone(), json: text, raw: true }
    }

    pub fn silent(status: Status) -> Self {
        Outcome { status, human: String::new(), json: String::new(), raw: false }
    }
}

#[derive(Serialize)]
pub struct Header {
    pub schema_version: u32,
    pub command: &'static str,
    pub net: String,
}

impl Header {
    pub fn new(command: &'static str, net: &str) -> Self {
        Header { schema_version: SCHEMA_VERSION, command, net: net.to_owned() }
    }
}

#[derive(Serialize)]
pub struct Exploration {
    /// `complete` or `truncated`.
    pub status: &'static str,
    pub limit: usize,
    pub states: usize,
    pub edges: usize,
}

#[derive(Serialize)]
pub struct CheckReport {
    #[serde(flatten)]
    pub header: Header,
    pub exploration: Exploration,
    pub properties: Vec<PropertyResult>,
    pub summary: Summary,
}

#[derive(Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub formula: String,
    /// `holds`, `refuted` or `unknown` (state limit reached).
    pub verdict: &'static str,
    pub trace: Option<Vec<String>>,
    /// Marking at the end of the trace.
    pub end: Option<String>,
}

#[derive(Serialize)]
pub struct Summary {
    pub total: usize,
    pub holds: usize,
    pub refuted: usize,
    pub unknown: usize,
}

#[derive(Serialize)]
pub struct AnalyzeReport {
    #[serde(flatten)]
    pub header: Header,
    pub exploration: Exploration,
    /// Always decided: by the graph when complete, by Karp–Miller otherwise.
    pub bounded: Option<bool>,
    pub unbounded_places: Vec<String>,
    pub deadlock_free: Option<bool>,
    pub deadlocks: Vec<String>,
    pub dead_transitions: Vec<String>,
    pub liveness: Vec<TransitionClass>,
    pub bounds: Vec<PlaceBound>,
    pub p_invariants: Vec<InvariantEntry>,
    pub t_invariants: Vec<InvariantEntry>,
}

#[derive(Serialize)]
pub struct TransitionClass {
    pub transition: String,
    /// `dead`, `quasi-live` or `live`.
    pub class: String,
}

#[derive(Serialize)]
pub struct PlaceBound {
    pub place: String,
    pub bound: u64,
}

#[derive(Serialize)]
pub struct InvariantEntry {
    /// Sum notation, e.g. `counter + counter'` or `2 p + q`.
    pub text: String,
    /// Nonzero weights, in declaration order.
    pub weights: Vec<Weight>,
    /// Weighted token sum at the initial marking (P-invariants only).
    pub constant: Option<serde_json::Value>,
}

#[derive(Serialize)]
pub struct Weight {
    pub name: String,
    /// A number, or a decimal string when it exceeds 64 bits.
    pub weight: serde_json::Value,
}

pub fn big(n: &num_bigint::BigUint) -> serde_json::Value {
    match u64::try_from(n) {
        Ok(v) => v.into(),
        Err(_) => n.to_string().into(),
    }
}

#[derive(Serialize)]
pub struct ReachReport {
    #[serde(flatten)]
    pub header: Header,
    pub goal: String,
    /// `reachable`, `unreachable` or `unknown`.
    pub verdict: &'static str,
    pub limit: usize,
    pub witness: Option<Vec<String>>,
    pub marking: Option<String>,
}

#[derive(Serialize)]
pub struct SimulationReport {
    #[serde(flatten)]
    pub header: Header,
    pub seed: u64,
    pub initial: String,
    pub steps: Vec<SimStep>,
    pub deadlock: bool,
}

#[derive(Serialize)]
pub struct SimStep {
    pub transition: String,
    pub marking: String,
}
