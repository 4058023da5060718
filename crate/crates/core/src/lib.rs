//! Place/transition nets with weighted arcs and read arcs.
//!
//! The crate covers the firing and step semantics, a text format, explicit
//! state-space analyses (reachability, deadlocks, liveness, boundedness via
//! Karp–Miller), Farkas invariants and a CTL model checker, plus a worked
//! human–robot interaction model.

pub mod ctl;
pub mod dsl;
pub mod gen;
mod lex;
pub mod net;
pub mod scenario;
pub mod simulate;
pub mod statespace;
pub mod structural;

pub use ctl::{check, parse_formula, CheckError, Checker, Cmp, Formula, Verdict};
pub use dsl::{format_marking, parse_marking, parse_net, parse_properties, serialize_net, to_dot, Property};
pub use lex::{ParseError, Pos};
pub use net::{Arc, ArcKind, Marking, Net, NetBuilder, NetError, PlaceId, Step, TransitionId};
pub use statespace::{explore, AnalysisError, ReachabilityGraph, Status, DEFAULT_LIMIT};
