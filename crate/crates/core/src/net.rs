//! Place/transition nets with weighted arcs and read arcs.
//!
//! A [`Net`] is immutable once built. Markings are plain values and every
//! operation here is a pure function of `(net, marking)`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

/// Dense index of a place within its net.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlaceId(pub usize);

/// Dense index of a transition within its net.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TransitionId(pub usize);

impl PlaceId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl TransitionId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArcKind {
    /// Place to transition, consuming.
    Input,
    /// Transition to place, producing.
    Output,
    /// Place to transition, tested but not consumed.
    Read,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arc {
    pub place: PlaceId,
    pub transition: TransitionId,
    pub kind: ArcKind,
    pub weight: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetError {
    #[error("duplicate place `{0}`")]
    DuplicatePlace(String),
    #[error("duplicate transition `{0}`")]
    DuplicateTransition(String),
    #[error("`{0}` is declared both as a place and as a transition")]
    NameClash(String),
    #[error("invalid name `{0}`")]
    InvalidName(String),
    #[error("unknown place `{0}`")]
    UnknownPlace(String),
    #[error("unknown transition `{0}`")]
    UnknownTransition(String),
    #[error("place index {0} out of range")]
    PlaceOutOfRange(usize),
    #[error("transition index {0} out of range")]
    TransitionOutOfRange(usize),
    #[error("arc between `{place}` and `{transition}` has weight 0")]
    ZeroWeight { place: String, transition: String },
    #[error("duplicate {kind:?} arc between `{place}` and `{transition}`")]
    DuplicateArc { place: String, transition: String, kind: ArcKind },
    #[error("`{place}` has both an input arc and a read arc to `{transition}`")]
    InputAndRead { place: String, transition: String },
    #[error("transition `{0}` is not enabled")]
    NotEnabled(String),
    #[error("step is not enabled")]
    StepNotEnabled,
    #[error("a step must contain at least one transition")]
    EmptyStep,
    #[error("transition `{0}` appears twice in a step")]
    DuplicateInStep(String),
    #[error("conflict and concurrency are defined for two distinct transitions, got `{0}` twice")]
    SameTransition(String),
    #[error("marking has {found} entries but the net has {expected} places")]
    MarkingSize { expected: usize, found: usize },
    #[error("token count overflow in place `{0}`")]
    Overflow(String),
}

/// Token counts over all places of a net. Absent places hold zero tokens.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Marking(Vec<u64>);

impl Marking {
    pub fn zero(places: usize) -> Self {
        Marking(vec![0; places])
    }

    pub fn from_counts(counts: Vec<u64>) -> Self {
        Marking(counts)
    }

    pub fn get(&self, place: PlaceId) -> u64 {
        self.0.get(place.0).copied().unwrap_or(0)
    }

    pub fn set(&mut self, place: PlaceId, count: u64) {
        self.0[place.0] = count;
    }

    pub fn counts(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of all tokens.
    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Pointwise `self <= other`.
    pub fn le(&self, other: &Marking) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Places holding at least one token, in index order.
    pub fn support(&self) -> impl Iterator<Item = (PlaceId, u64)> + '_ {
        self.0.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, &c)| (PlaceId(i), c))
    }
}

/// A nonempty set of distinct transitions fired simultaneously.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Step(BTreeSet<TransitionId>);

impl Step {
    pub fn new(net: &Net, transitions: impl IntoIterator<Item = TransitionId>) -> Result<Self, NetError> {
        let mut set = BTreeSet::new();
        for t in transitions {
            net.check_transition(t)?;
            if !set.insert(t) {
                return Err(NetError::DuplicateInStep(net.transition_name(t).to_owned()));
            }
        }
        if set.is_empty() {
            return Err(NetError::EmptyStep);
        }
        Ok(Step(set))
    }

    pub fn transitions(&self) -> impl Iterator<Item = TransitionId> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Arcs attached to one transition, split by kind.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct TransitionArcs {
    inputs: Vec<(PlaceId, u64)>,
    reads: Vec<(PlaceId, u64)>,
    outputs: Vec<(PlaceId, u64)>,
}

/// An immutable marked Petri net.
#[derive(Debug, Clone)]
pub struct Net {
    name: String,
    places: Vec<String>,
    transitions: Vec<String>,
    arcs: Vec<Arc>,
    initial: Marking,
    place_index: HashMap<String, PlaceId>,
    transition_index: HashMap<String, TransitionId>,
    by_transition: Vec<TransitionArcs>,
}

/// Structural equality: name, declaration order, arc list and initial marking.
impl PartialEq for Net {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.places == other.places
            && self.transitions == other.transitions
            && self.arcs == other.arcs
            && self.initial == other.initial
    }
}

impl Eq for Net {}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Incremental, validating constructor for [`Net`].
#[derive(Debug, Clone)]
pub struct NetBuilder {
    name: String,
    places: Vec<String>,
    initial: Vec<u64>,
    transitions: Vec<String>,
    arcs: Vec<Arc>,
    place_index: HashMap<String, PlaceId>,
    transition_index: HashMap<String, TransitionId>,
}

impl NetBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        NetBuilder {
            name: name.into(),
            places: Vec::new(),
            initial: Vec::new(),
            transitions: Vec::new(),
            arcs: Vec::new(),
            place_index: HashMap::new(),
            transition_index: HashMap::new(),
        }
    }

    pub fn place(&mut self, name: &str, tokens: u64) -> Result<PlaceId, NetError> {
        if !is_identifier(name) {
            return Err(NetError::InvalidName(name.to_owned()));
        }
        if self.place_index.contains_key(name) {
            return Err(NetError::DuplicatePlace(name.to_owned()));
        }
        if self.transition_index.contains_key(name) {
            return Err(NetError::NameClash(name.to_owned()));
        }
        let id = PlaceId(self.places.len());
        self.places.push(name.to_owned());
        self.initial.push(tokens);
        self.place_index.insert(name.to_owned(), id);
        Ok(id)
    }

    pub fn transition(&mut self, name: &str) -> Result<TransitionId, NetError> {
        if !is_identifier(name) {
            return Err(NetError::InvalidName(name.to_owned()));
        }
        if self.transition_index.contains_key(name) {
            return Err(NetError::DuplicateTransition(name.to_owned()));
        }
        if self.place_index.contains_key(name) {
            return Err(NetError::NameClash(name.to_owned()));
        }
        let id = TransitionId(self.transitions.len());
        self.transitions.push(name.to_owned());
        self.transition_index.insert(name.to_owned(), id);
        Ok(id)
    }

    pub fn place_id(&self, name: &str) -> Option<PlaceId> {
        self.place_index.get(name).copied()
    }

    pub fn transition_id(&self, name: &str) -> Option<TransitionId> {
        self.transition_index.get(name).copied()
    }

    pub fn arc(
        &mut self,
        place: PlaceId,
        transition: TransitionId,
        kind: ArcKind,
        weight: u64,
    ) -> Result<(), NetError> {
        let pname = self.places.get(place.0).ok_or(NetError::PlaceOutOfRange(place.0))?.clone();
        let tname = self.transitions.get(transition.0).ok_or(NetError::TransitionOutOfRange(transition.0))?.clone();
        if weight == 0 {
            return Err(NetError::ZeroWeight { place: pname, transition: tname });
        }
        for a in self.arcs.iter().filter(|a| a.place == place && a.transition == transition) {
            if a.kind == kind {
                return Err(NetError::DuplicateArc { place: pname, transition: tname, kind });
            }
            if matches!((a.kind, kind), (ArcKind::Input, ArcKind::Read) | (ArcKind::Read, ArcKind::Input)) {
                return Err(NetError::InputAndRead { place: pname, transition: tname });
            }
        }
        self.arcs.push(Arc { place, transition, kind, weight });
        Ok(())
    }

    pub fn input(&mut self, place: &str, transition: &str, weight: u64) -> Result<(), NetError> {
        let (p, t) = self.resolve(place, transition)?;
        self.arc(p, t, ArcKind::Input, weight)
    }

    pub fn output(&mut self, transition: &str, place: &str, weight: u64) -> Result<(), NetError> {
        let (p, t) = self.resolve(place, transition)?;
        self.arc(p, t, ArcKind::Output, weight)
    }

    pub fn read(&mut self, place: &str, transition: &str, weight: u64) -> Result<(), NetError> {
        let (p, t) = self.resolve(place, transition)?;
        self.arc(p, t, ArcKind::Read, weight)
    }

    fn resolve(&self, place: &str, transition: &str) -> Result<(PlaceId, TransitionId), NetError> {
        let p = self.place_id(place).ok_or_else(|| NetError::UnknownPlace(place.to_owned()))?;
        let t = self.transition_id(transition).ok_or_else(|| NetError::UnknownTransition(transition.to_owned()))?;
        Ok((p, t))
    }

    pub fn build(self) -> Net {
        let mut by_transition = vec![TransitionArcs::default(); self.transitions.len()];
        for a in &self.arcs {
            let entry = &mut by_transition[a.transition.0];
            match a.kind {
                ArcKind::Input => entry.inputs.push((a.place, a.weight)),
                ArcKind::Read => entry.reads.push((a.place, a.weight)),
                ArcKind::Output => entry.outputs.push((a.place, a.weight)),
            }
        }
        Net {
            name: self.name,
            places: self.places,
            transitions: self.transitions,
            arcs: self.arcs,
            initial: Marking(self.initial),
            place_index: self.place_index,
            transition_index: self.transition_index,
            by_transition,
        }
    }
}

impl Net {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn place_count(&self) -> usize {
        self.places.len()
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn places(&self) -> impl ExactSizeIterator<Item = PlaceId> {
        (0..self.places.len()).map(PlaceId)
    }

    pub fn transitions(&self) -> impl ExactSizeIterator<Item = TransitionId> {
        (0..self.transitions.len()).map(TransitionId)
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn initial_marking(&self) -> &Marking {
        &self.initial
    }

    pub fn place_name(&self, p: PlaceId) -> &str {
        &self.places[p.0]
    }

    pub fn transition_name(&self, t: TransitionId) -> &str {
        &self.transitions[t.0]
    }

    pub fn place_id(&self, name: &str) -> Option<PlaceId> {
        self.place_index.get(name).copied()
    }

    pub fn transition_id(&self, name: &str) -> Option<TransitionId> {
        self.transition_index.get(name).copied()
    }

    pub fn place(&self, name: &str) -> Result<PlaceId, NetError> {
        self.place_id(name).ok_or_else(|| NetError::UnknownPlace(name.to_owned()))
    }

    pub fn transition(&self, name: &str) -> Result<TransitionId, NetError> {
        self.transition_id(name).ok_or_else(|| NetError::UnknownTransition(name.to_owned()))
    }

    pub(crate) fn check_transition(&self, t: TransitionId) -> Result<(), NetError> {
        if t.0 < self.transitions.len() {
            Ok(())
        } else {
            Err(NetError::TransitionOutOfRange(t.0))
        }
    }

    fn check_marking(&self, m: &Marking) -> Result<(), NetError> {
        if m.len() == self.places.len() {
            Ok(())
        } else {
            Err(NetError::MarkingSize { expected: self.places.len(), found: m.len() })
        }
    }

    /// Consuming input arcs of `t`.
    pub fn inputs(&self, t: TransitionId) -> &[(PlaceId, u64)] {
        &self.by_transition[t.0].inputs
    }

    pub fn reads(&self, t: TransitionId) -> &[(PlaceId, u64)] {
        &self.by_transition[t.0].reads
    }

    pub fn outputs(&self, t: TransitionId) -> &[(PlaceId, u64)] {
        &self.by_transition[t.0].outputs
    }

    /// Pre-set of `t`: places connected by an input or a read arc.
    pub fn preset(&self, t: TransitionId) -> BTreeSet<PlaceId> {
        let arcs = &self.by_transition[t.0];
        arcs.inputs.iter().chain(&arcs.reads).map(|&(p, _)| p).collect()
    }

    pub fn postset(&self, t: TransitionId) -> BTreeSet<PlaceId> {
        self.by_transition[t.0].outputs.iter().map(|&(p, _)| p).collect()
    }

    /// Weight of the consuming arc `p -> t`, 0 if absent.
    pub fn input_weight(&self, p: PlaceId, t: TransitionId) -> u64 {
        weight_of(&self.by_transition[t.0].inputs, p)
    }

    pub fn read_weight(&self, p: PlaceId, t: TransitionId) -> u64 {
        weight_of(&self.by_transition[t.0].reads, p)
    }

    pub fn output_weight(&self, t: TransitionId, p: PlaceId) -> u64 {
        weight_of(&self.by_transition[t.0].outputs, p)
    }

    /// Enabling test without id or size validation, for hot loops over
    /// markings that are known to belong to this net.
    pub(crate) fn enabled_unchecked(&self, m: &Marking, t: TransitionId) -> bool {
        let arcs = &self.by_transition[t.0];
        arcs.inputs.iter().chain(&arcs.reads).all(|&(p, w)| m.0[p.0] >= w)
    }

    pub(crate) fn fire_unchecked(&self, m: &Marking, t: TransitionId) -> Result<Marking, NetError> {
        let arcs = &self.by_transition[t.0];
        let mut next = m.clone();
        for &(p, w) in &arcs.inputs {
            next.0[p.0] -= w;
        }
        for &(p, w) in &arcs.outputs {
            next.0[p.0] = next.0[p.0].checked_add(w).ok_or_else(|| NetError::Overflow(self.places[p.0].clone()))?;
        }
        Ok(next)
    }

    pub fn is_enabled(&self, m: &Marking, t: TransitionId) -> Result<bool, NetError> {
        self.check_transition(t)?;
        self.check_marking(m)?;
        Ok(self.enabled_unchecked(m, t))
    }

    /// Fires `t` at `m`. Places touched only by read arcs keep their count.
    pub fn fire(&self, m: &Marking, t: TransitionId) -> Result<Marking, NetError> {
        if !self.is_enabled(m, t)? {
            return Err(NetError::NotEnabled(self.transitions[t.0].clone()));
        }
        self.fire_unchecked(m, t)
    }

    /// Transitions enabled at `m`, in declaration order. Empty iff `m` is dead.
    pub fn enabled_set(&self, m: &Marking) -> Vec<TransitionId> {
        if m.len() != self.places.len() {
            return Vec::new();
        }
        self.transitions().filter(|&t| self.enabled_unchecked(m, t)).collect()
    }

    pub fn is_dead(&self, m: &Marking) -> bool {
        m.len() == self.places.len() && !self.transitions().any(|t| self.enabled_unchecked(m, t))
    }

    /// Tokens a step needs in every place: consumed weights add up, read
    /// weights are shared so only the largest one counts.
    fn step_demand(&self, s: &Step) -> Vec<u64> {
        let mut consumed = vec![0u64; self.places.len()];
        let mut read = vec![0u64; self.places.len()];
        for t in s.transitions() {
            let arcs = &self.by_transition[t.0];
            for &(p, w) in &arcs.inputs {
                consumed[p.0] = consumed[p.0].saturating_add(w);
            }
            for &(p, w) in &arcs.reads {
                read[p.0] = read[p.0].max(w);
            }
        }
        consumed.into_iter().zip(read).map(|(c, r)| c.saturating_add(r)).collect()
    }

    pub fn step_enabled(&self, m: &Marking, s: &Step) -> Result<bool, NetError> {
        self.check_marking(m)?;
        for t in s.transitions() {
            self.check_transition(t)?;
        }
        Ok(self.step_demand(s).iter().zip(&m.0).all(|(need, have)| have >= need))
    }

    pub fn fire_step(&self, m: &Marking, s: &Step) -> Result<Marking, NetError> {
        if !self.step_enabled(m, s)? {
            return Err(NetError::StepNotEnabled);
        }
        let mut next = m.clone();
        for t in s.transitions() {
            for &(p, w) in &self.by_transition[t.0].inputs {
                next.0[p.0] -= w;
            }
        }
        for t in s.transitions() {
            for &(p, w) in &self.by_transition[t.0].outputs {
                next.0[p.0] = next.0[p.0].checked_add(w).ok_or_else(|| NetError::Overflow(self.places[p.0].clone()))?;
            }
        }
        Ok(next)
    }

    fn pair_step(&self, t1: TransitionId, t2: TransitionId) -> Result<Step, NetError> {
        self.check_transition(t1)?;
        self.check_transition(t2)?;
        if t1 == t2 {
            return Err(NetError::SameTransition(self.transitions[t1.0].clone()));
        }
        Step::new(self, [t1, t2])
    }

    /// Both enabled, but not together: firing one can disable the other.
    pub fn in_conflict(&self, m: &Marking, t1: TransitionId, t2: TransitionId) -> Result<bool, NetError> {
        let step = self.pair_step(t1, t2)?;
        Ok(self.is_enabled(m, t1)? && self.is_enabled(m, t2)? && !self.step_enabled(m, &step)?)
    }

    pub fn are_concurrent(&self, m: &Marking, t1: TransitionId, t2: TransitionId) -> Result<bool, NetError> {
        let step = self.pair_step(t1, t2)?;
        self.step_enabled(m, &step)
    }

    /// The same net with every read arc `(p, t, w)` replaced by an input arc
    /// and an output arc of weight `w`. Interleaving behaviour is unchanged.
    pub fn with_reads_as_self_loops(&self) -> Net {
        let mut b = NetBuilder::new(self.name.clone());
        for (i, name) in self.places.iter().enumerate() {
            b.place(name, self.initial.0[i]).expect("names already validated");
        }
        for name in &self.transitions {
            b.transition(name).expect("names already validated");
        }
        let mut extra_output: HashMap<(PlaceId, TransitionId), u64> = HashMap::new();
        for a in &self.arcs {
            if a.kind == ArcKind::Read {
                extra_output.insert((a.place, a.transition), a.weight);
            }
        }
        for a in &self.arcs {
            match a.kind {
                ArcKind::Read => {
                    b.arc(a.place, a.transition, ArcKind::Input, a.weight)
                        .expect("read arcs never coexist with input arcs");
                    let has_output = self
                        .arcs
                        .iter()
                        .any(|o| o.kind == ArcKind::Output && o.place == a.place && o.transition == a.transition);
                    if !has_output {
                        b.arc(a.place, a.transition, ArcKind::Output, a.weight).expect("fresh output arc");
                    }
                }
                ArcKind::Output => {
                    let w = a.weight + extra_output.get(&(a.place, a.transition)).copied().unwrap_or(0);
                    b.arc(a.place, a.transition, ArcKind::Output, w).expect("fresh output arc");
                }
                ArcKind::Input => {
                    b.arc(a.place, a.transition, ArcKind::Input, a.weight).expect("copied arc");
                }
            }
        }
        b.build()
    }

    /// A marking from `(place name, count)` pairs; unlisted places are 0.
    pub fn marking<'a>(&self, pairs: impl IntoIterator<Item = (&'a str, u64)>) -> Result<Marking, NetError> {
        let mut m = Marking::zero(self.places.len());
        for (name, count) in pairs {
            let p = self.place(name)?;
            m.0[p.0] = count;
        }
        Ok(m)
    }

    /// Renders `m` in brace notation, e.g. `{p0, 2 p2}`.
    pub fn display_marking<'a>(&'a self, m: &'a Marking) -> MarkingDisplay<'a> {
        MarkingDisplay { net: self, marking: m }
    }
}

fn weight_of(arcs: &[(PlaceId, u64)], p: PlaceId) -> u64 {
    arcs.iter().find(|(q, _)| *q == p).map_or(0, |&(_, w)| w)
}

pub struct MarkingDisplay<'a> {
    net: &'a Net,
    marking: &'a Marking,
}

impl fmt::Display for MarkingDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (p, count)) in self.marking.support().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            let name = self.net.places.get(p.0).map_or("?", String::as_str);
            if count == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{count} {name}")?;
            }
        }
        f.write_str("}")
    }
}
