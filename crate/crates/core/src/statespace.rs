//! Explicit reachability graphs and the behavioural analyses built on them:
//! deadlocks, dead transitions, liveness, place bounds, Karp–Miller
//! coverability, witness search and causal dependency.
//!
//! Exploration is breadth-first with transitions tried in declaration order,
//! so state numbering and witnesses are reproducible. Read arcs behave like
//! consume+produce self-loops here, which is exact for interleaving
//! semantics.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use thiserror::Error;

use crate::net::{Marking, Net, NetError, PlaceId, TransitionId};

pub const DEFAULT_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("state space truncated at {limit} states; rerun with a larger limit")]
    Truncated { limit: usize },
    #[error(transparent)]
    Net(#[from] NetError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Complete,
    /// Exploration stopped because another state would exceed `limit`.
    Truncated {
        limit: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub source: usize,
    pub transition: TransitionId,
    pub target: usize,
}

#[derive(Debug, Clone)]
pub struct ReachabilityGraph {
    states: Vec<Marking>,
    index: HashMap<Marking, usize>,
    edges: Vec<Edge>,
    successors: Vec<Vec<(TransitionId, usize)>>,
    predecessors: Vec<Vec<(TransitionId, usize)>>,
    /// States `0..expanded` have every enabled transition recorded.
    expanded: usize,
    status: Status,
}

impl ReachabilityGraph {
    pub fn states(&self) -> &[Marking] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &Marking {
        &self.states[i]
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn index_of(&self, m: &Marking) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Outgoing `(transition, target)` pairs of state `s`, in declaration order.
    pub fn successors(&self, s: usize) -> &[(TransitionId, usize)] {
        &self.successors[s]
    }

    pub fn predecessors(&self, s: usize) -> &[(TransitionId, usize)] {
        &self.predecessors[s]
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn is_complete(&self) -> bool {
        self.status == Status::Complete
    }

    /// Number of leading states whose outgoing edges are all present.
    pub fn expanded(&self) -> usize {
        self.expanded
    }

    pub fn require_complete(&self) -> Result<(), AnalysisError> {
        match self.status {
            Status::Complete => Ok(()),
            Status::Truncated { limit } => Err(AnalysisError::Truncated { limit }),
        }
    }

    /// Shortest firing sequence from state 0 to `target` inside the graph.
    pub fn path_to(&self, target: usize) -> Option<Vec<TransitionId>> {
        self.path_between(0, target)
    }

    pub fn path_between(&self, from: usize, target: usize) -> Option<Vec<TransitionId>> {
        self.bfs_path(from, |s| s == target, |_| true).map(|(_, path)| path)
    }

    /// BFS from `from` through states accepted by `through`, stopping at the
    /// first state satisfying `goal`. Returns that state and a shortest path.
    pub(crate) fn bfs_path(
        &self,
        from: usize,
        goal: impl Fn(usize) -> bool,
        through: impl Fn(usize) -> bool,
    ) -> Option<(usize, Vec<TransitionId>)> {
        let mut parents: HashMap<usize, Option<(usize, TransitionId)>> = HashMap::from([(from, None)]);
        let mut queue = VecDeque::from([from]);
        while let Some(s) = queue.pop_front() {
            if goal(s) {
                let mut path = Vec::new();
                let mut cur = s;
                while let Some((prev, t)) = parents[&cur] {
                    path.push(t);
                    cur = prev;
                }
                path.reverse();
                return Some((s, path));
            }
            if !through(s) {
                continue;
            }
            for &(t, next) in &self.successors[s] {
                if let Entry::Vacant(e) = parents.entry(next) {
                    e.insert(Some((s, t)));
                    queue.push_back(next);
                }
            }
        }
        None
    }
}

/// Breadth-first construction of the reachability graph from the initial
/// marking, holding at most `limit` states.
pub fn explore(net: &Net, limit: usize) -> ReachabilityGraph {
    explore_with(net, limit, |_| true)
}

/// Like [`explore`], but only transitions accepted by `allowed` may fire.
pub fn explore_with(net: &Net, limit: usize, allowed: impl Fn(TransitionId) -> bool) -> ReachabilityGraph {
    let limit = limit.max(1);
    let m0 = net.initial_marking().clone();
    let mut g = ReachabilityGraph {
        states: vec![m0.clone()],
        index: HashMap::from([(m0, 0)]),
        edges: Vec::new(),
        successors: vec![Vec::new()],
        predecessors: vec![Vec::new()],
        expanded: 0,
        status: Status::Complete,
    };
    let transitions: Vec<TransitionId> = net.transitions().filter(|&t| allowed(t)).collect();

    'bfs: while g.expanded < g.states.len() {
        let s = g.expanded;
        let mut out = Vec::new();
        for &t in &transitions {
            if !net.enabled_unchecked(&g.states[s], t) {
                continue;
            }
            // Counts beyond u64 only arise on unbounded nets; treat as truncation.
            let Ok(next) = net.fire_unchecked(&g.states[s], t) else {
                g.status = Status::Truncated { limit };
                break 'bfs;
            };
            let target = match g.index.get(&next) {
                Some(&i) => i,
                None => {
                    if g.states.len() >= limit {
                        g.status = Status::Truncated { limit };
                        break 'bfs;
                    }
                    let i = g.states.len();
                    g.index.insert(next.clone(), i);
                    g.states.push(next);
                    g.successors.push(Vec::new());
                    g.predecessors.push(Vec::new());
                    i
                }
            };
            out.push((t, target));
        }
        for &(t, target) in &out {
            g.edges.push(Edge { source: s, transition: t, target });
            g.predecessors[target].push((t, s));
        }
        g.successors[s] = out;
        g.expanded += 1;
    }
    g
}

/// Reachable markings that enable no transition, in state order.
pub fn deadlocks(net: &Net, g: &ReachabilityGraph) -> Result<Vec<Marking>, AnalysisError> {
    Ok(deadlock_states(net, g)?.into_iter().map(|s| g.states[s].clone()).collect())
}

pub fn deadlock_states(net: &Net, g: &ReachabilityGraph) -> Result<Vec<usize>, AnalysisError> {
    g.require_complete()?;
    Ok((0..g.state_count()).filter(|&s| g.successors[s].is_empty() && net.is_dead(&g.states[s])).collect())
}

/// Transitions labelling no edge of the (complete) graph.
pub fn dead_transitions(net: &Net, g: &ReachabilityGraph) -> Result<Vec<TransitionId>, AnalysisError> {
    g.require_complete()?;
    let mut fires = vec![false; net.transition_count()];
    for e in &g.edges {
        fires[e.transition.0] = true;
    }
    Ok(net.transitions().filter(|t| !fires[t.0]).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Liveness {
    /// Never enabled in any reachable marking.
    Dead,
    /// Enabled somewhere, but some reachable marking can no longer enable it.
    QuasiLive,
    /// From every reachable marking some marking enabling it is reachable.
    Live,
}

impl fmt::Display for Liveness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Liveness::Dead => "dead",
            Liveness::QuasiLive => "quasi-live",
            Liveness::Live => "live",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LivenessReport {
    /// Indexed by transition.
    pub transitions: Vec<Liveness>,
    pub deadlock_free: bool,
    pub dead_markings: Vec<Marking>,
}

impl LivenessReport {
    pub fn of(&self, t: TransitionId) -> Liveness {
        self.transitions[t.0]
    }
}

/// Classifies every transition. A transition is live iff it labels an edge
/// leaving some state of every terminal strongly connected component: every
/// run eventually settles in one of those components.
pub fn liveness(net: &Net, g: &ReachabilityGraph) -> Result<LivenessReport, AnalysisError> {
    g.require_complete()?;
    let mut graph: DiGraph<(), ()> = DiGraph::with_capacity(g.state_count(), g.edge_count());
    let nodes: Vec<_> = (0..g.state_count()).map(|_| graph.add_node(())).collect();
    for e in &g.edges {
        graph.add_edge(nodes[e.source], nodes[e.target], ());
    }
    let sccs = tarjan_scc(&graph);
    let mut component = vec![0usize; g.state_count()];
    for (c, scc) in sccs.iter().enumerate() {
        for n in scc {
            component[n.index()] = c;
        }
    }
    let mut terminal = vec![true; sccs.len()];
    for e in &g.edges {
        if component[e.source] != component[e.target] {
            terminal[component[e.source]] = false;
        }
    }

    let dead = dead_transitions(net, g)?;
    let mut classes = Vec::with_capacity(net.transition_count());
    for t in net.transitions() {
        if dead.contains(&t) {
            classes.push(Liveness::Dead);
            continue;
        }
        let mut in_component = vec![false; sccs.len()];
        for e in g.edges.iter().filter(|e| e.transition == t) {
            in_component[component[e.source]] = true;
        }
        let live = (0..sccs.len()).filter(|&c| terminal[c]).all(|c| in_component[c]);
        classes.push(if live { Liveness::Live } else { Liveness::QuasiLive });
    }

    let dead_markings = deadlocks(net, g)?;
    Ok(LivenessReport { transitions: classes, deadlock_free: dead_markings.is_empty(), dead_markings })
}

/// Maximum token count of each place over all reachable markings.
pub fn place_bounds(net: &Net, g: &ReachabilityGraph) -> Result<Vec<u64>, AnalysisError> {
    g.require_complete()?;
    let mut bounds = vec![0u64; net.place_count()];
    for m in &g.states {
        for (b, &c) in bounds.iter_mut().zip(m.counts()) {
            *b = (*b).max(c);
        }
    }
    Ok(bounds)
}

/// A token count in an extended marking: finite or ω.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Count {
    Finite(u64),
    Omega,
}

impl Count {
    fn covers(self, w: u64) -> bool {
        match self {
            Count::Omega => true,
            Count::Finite(n) => n >= w,
        }
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Finite(n) => write!(f, "{n}"),
            Count::Omega => f.write_str("ω"),
        }
    }
}

pub type ExtendedMarking = Vec<Count>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverabilityNode {
    pub marking: ExtendedMarking,
    pub parent: Option<usize>,
    pub children: Vec<(TransitionId, usize)>,
    /// Leaf whose marking already labels an earlier node.
    pub duplicate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Boundedness {
    Bounded,
    /// Places that received ω somewhere in the tree.
    Unbounded {
        places: Vec<PlaceId>,
    },
}

#[derive(Debug, Clone)]
pub struct CoverabilityTree {
    /// Node 0 is the root; nodes are numbered in breadth-first order.
    pub nodes: Vec<CoverabilityNode>,
    pub verdict: Boundedness,
}

impl CoverabilityTree {
    pub fn is_bounded(&self) -> bool {
        self.verdict == Boundedness::Bounded
    }

    /// Distinct node markings, in node order.
    pub fn markings(&self) -> Vec<&ExtendedMarking> {
        self.nodes.iter().filter(|n| !n.duplicate).map(|n| &n.marking).collect()
    }

    /// Whether some node marking covers `m` pointwise.
    pub fn covers(&self, m: &Marking) -> bool {
        self.nodes.iter().any(|n| n.marking.iter().zip(m.counts()).all(|(&c, &k)| c.covers(k)))
    }
}

/// Karp–Miller coverability tree. A node whose marking already labels an
/// earlier node is a duplicate leaf; a new marking strictly covering one of
/// its ancestors is accelerated to ω on every strictly larger place.
pub fn karp_miller(net: &Net) -> CoverabilityTree {
    karp_miller_with_limit(net, usize::MAX).expect("no node limit")
}

/// [`karp_miller`] that gives up once the tree has more than `limit` nodes.
pub fn karp_miller_with_limit(net: &Net, limit: usize) -> Result<CoverabilityTree, AnalysisError> {
    let root: ExtendedMarking = net.initial_marking().counts().iter().map(|&c| Count::Finite(c)).collect();
    let mut nodes =
        vec![CoverabilityNode { marking: root.clone(), parent: None, children: Vec::new(), duplicate: false }];
    let mut seen: HashMap<ExtendedMarking, usize> = HashMap::from([(root, 0)]);
    let mut queue = VecDeque::from([0usize]);

    while let Some(n) = queue.pop_front() {
        if nodes.len() > limit {
            return Err(AnalysisError::Truncated { limit });
        }
        for t in net.transitions() {
            let current = &nodes[n].marking;
            let enabled = net.inputs(t).iter().chain(net.reads(t)).all(|&(p, w)| current[p.0].covers(w));
            if !enabled {
                continue;
            }
            let mut next = current.clone();
            let mut overflow = false;
            for &(p, w) in net.inputs(t) {
                if let Count::Finite(k) = next[p.0] {
                    next[p.0] = Count::Finite(k - w);
                }
            }
            for &(p, w) in net.outputs(t) {
                if let Count::Finite(k) = next[p.0] {
                    match k.checked_add(w) {
                        Some(v) => next[p.0] = Count::Finite(v),
                        None => overflow = true,
                    }
                }
            }
            if overflow {
                // unreachable in practice: acceleration fires long before
                continue;
            }
            accelerate(&nodes, n, &mut next);

            let id = nodes.len();
            let duplicate = seen.contains_key(&next);
            if !duplicate {
                seen.insert(next.clone(), id);
                queue.push_back(id);
            }
            nodes.push(CoverabilityNode { marking: next, parent: Some(n), children: Vec::new(), duplicate });
            nodes[n].children.push((t, id));
        }
    }

    let mut omega = vec![false; net.place_count()];
    for node in &nodes {
        for (i, c) in node.marking.iter().enumerate() {
            if *c == Count::Omega {
                omega[i] = true;
            }
        }
    }
    let places: Vec<PlaceId> = (0..omega.len()).filter(|&i| omega[i]).map(PlaceId).collect();
    let verdict = if places.is_empty() { Boundedness::Bounded } else { Boundedness::Unbounded { places } };
    Ok(CoverabilityTree { nodes, verdict })
}

fn accelerate(nodes: &[CoverabilityNode], parent: usize, next: &mut ExtendedMarking) {
    let mut ancestor = Some(parent);
    while let Some(a) = ancestor {
        let old = &nodes[a].marking;
        let covers = old.iter().zip(next.iter()).all(|(o, n)| o <= n);
        if covers && old != next {
            for (o, n) in old.iter().zip(next.iter_mut()) {
                if o < n {
                    *n = Count::Omega;
                }
            }
        }
        ancestor = nodes[a].parent;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reach {
    /// A shortest firing sequence from the initial marking to the goal.
    Found { witness: Vec<TransitionId>, marking: Marking },
    /// The full state space was explored without meeting the goal.
    Unreachable,
    /// The state limit was hit before the goal was met.
    LimitReached { limit: usize },
}

/// Breadth-first search for a marking satisfying `goal`.
pub fn reachable(net: &Net, goal: impl Fn(&Marking) -> bool, limit: usize) -> Reach {
    let limit = limit.max(1);
    let m0 = net.initial_marking().clone();
    if goal(&m0) {
        return Reach::Found { witness: Vec::new(), marking: m0 };
    }
    let mut states = vec![m0.clone()];
    let mut parent: Vec<Option<(usize, TransitionId)>> = vec![None];
    let mut index = HashMap::from([(m0, 0usize)]);
    let mut head = 0;
    while head < states.len() {
        let s = head;
        head += 1;
        for t in net.transitions() {
            if !net.enabled_unchecked(&states[s], t) {
                continue;
            }
            let Ok(next) = net.fire_unchecked(&states[s], t) else {
                return Reach::LimitReached { limit };
            };
            if index.contains_key(&next) {
                continue;
            }
            if goal(&next) {
                let mut witness = vec![t];
                let mut cur = s;
                while let Some((prev, pt)) = parent[cur] {
                    witness.push(pt);
                    cur = prev;
                }
                witness.reverse();
                return Reach::Found { witness, marking: next };
            }
            if states.len() >= limit {
                return Reach::LimitReached { limit };
            }
            index.insert(next.clone(), states.len());
            states.push(next);
            parent.push(Some((s, t)));
        }
    }
    Reach::Unreachable
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Causality {
    /// Every run that fires the second transition fires the first one earlier.
    Dependent,
    Independent,
    /// The second transition never fires, so the question is vacuous.
    NeverFires,
}

impl Causality {
    pub fn holds(self) -> bool {
        self == Causality::Dependent
    }
}

/// Whether `second` can only fire after `first` has fired: re-explore
/// without `first` and check that `second` labels no edge.
pub fn causally_dependent(
    net: &Net,
    first: TransitionId,
    second: TransitionId,
    limit: usize,
) -> Result<Causality, AnalysisError> {
    net.check_transition(first)?;
    net.check_transition(second)?;
    let full = explore(net, limit);
    full.require_complete()?;
    if !full.edges().iter().any(|e| e.transition == second) {
        return Ok(Causality::NeverFires);
    }
    if first == second {
        return Ok(Causality::Independent);
    }
    let reduced = explore_with(net, limit, |t| t != first);
    reduced.require_complete()?;
    if reduced.edges().iter().any(|e| e.transition == second) {
        Ok(Causality::Independent)
    } else {
        Ok(Causality::Dependent)
    }
}

/// Replays `path` from the initial marking with the firing rule.
pub fn replay(net: &Net, path: &[TransitionId]) -> Result<Marking, NetError> {
    let mut m = net.initial_marking().clone();
    for &t in path {
        m = net.fire(&m, t)?;
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_net;

    fn fig3a() -> Net {
        parse_net(
            "net fig3a { places { p1 = 1; p2; p3; p4; p5; p6; } transitions { t1; t2; t3; t4; t5; }
             arcs { p1 -> t1; t1 -> p2; t1 -> p3; p2 -> t2; t2 -> p4; p3 -> t3; t3 -> p5;
                    p4 -> t4; p5 -> t4; t4 -> p6; p6 -> t5; t5 -> p1; } }",
        )
        .unwrap()
    }

    fn fig3b() -> Net {
        parse_net(
            "net fig3b { places { p1 = 1; p2; p3; p4; p5; p6; } transitions { t1; t2; t3; t4; t5; }
             arcs { p1 -> t1; t1 -> p2; p1 -> t2; t2 -> p3; p2 -> t3; t3 -> p4;
                    p2 -> t4; p3 -> t4; t4 -> p5; p3 -> t5; t5 -> p6; } }",
        )
        .unwrap()
    }

    fn names(net: &Net, ms: &[Marking]) -> Vec<String> {
        ms.iter().map(|m| net.display_marking(m).to_string()).collect()
    }

    #[test]
    fn fig3a_state_space() {
        let net = fig3a();
        let g = explore(&net, DEFAULT_LIMIT);
        assert!(g.is_complete());
        assert_eq!(names(&net, g.states()), ["{p1}", "{p2, p3}", "{p3, p4}", "{p2, p5}", "{p4, p5}", "{p6}"]);
        assert_eq!(g.edge_count(), 7);
        assert!(deadlocks(&net, &g).unwrap().is_empty());
        assert!(dead_transitions(&net, &g).unwrap().is_empty());
        let report = liveness(&net, &g).unwrap();
        assert!(report.deadlock_free);
        assert!(report.transitions.iter().all(|&l| l == Liveness::Live));
    }

    #[test]
    fn fig3b_state_space() {
        let net = fig3b();
        let g = explore(&net, DEFAULT_LIMIT);
        assert_eq!(names(&net, g.states()), ["{p1}", "{p2}", "{p3}", "{p4}", "{p6}"]);
        assert_eq!(names(&net, &deadlocks(&net, &g).unwrap()), ["{p4}", "{p6}"]);
        let t4 = net.transition("t4").unwrap();
        assert_eq!(dead_transitions(&net, &g).unwrap(), vec![t4]);
        let report = liveness(&net, &g).unwrap();
        assert!(!report.deadlock_free);
        use Liveness::*;
        assert_eq!(report.transitions, vec![QuasiLive, QuasiLive, QuasiLive, Dead, QuasiLive]);
    }

    #[test]
    fn no_transitions() {
        let net = parse_net("net n { places { p = 2; } transitions {} arcs {} }").unwrap();
        let g = explore(&net, 10);
        assert_eq!(g.state_count(), 1);
        assert_eq!(g.edge_count(), 0);
        assert!(g.is_complete());
    }

    #[test]
    fn unconnected_transition_is_never_dead() {
        let net = parse_net("net n { places { p; } transitions { u; } arcs {} }").unwrap();
        let g = explore(&net, 10);
        assert!(dead_transitions(&net, &g).unwrap().is_empty());
        assert_eq!(liveness(&net, &g).unwrap().transitions, vec![Liveness::Live]);
    }

    #[test]
    fn truncation_is_reported() {
        let net = parse_net("net src { places { p; } transitions { t; } arcs { t -> p; } }").unwrap();
        let g = explore(&net, 5);
        assert_eq!(g.status(), Status::Truncated { limit: 5 });
        assert_eq!(g.state_count(), 5);
        assert_eq!(deadlocks(&net, &g), Err(AnalysisError::Truncated { limit: 5 }));
        assert!(place_bounds(&net, &g).is_err());
        assert!(liveness(&net, &g).is_err());
        assert_eq!(reachable(&net, |m| m.total() > 100, 5), Reach::LimitReached { limit: 5 });
    }

    #[test]
    fn bounds_of_weighted_net() {
        let net = parse_net(
            "net fig1 { places { p0 = 2; p1 = 3; p2; } transitions { t0; }
             arcs { p0 -> t0; p1 -3-> t0; t0 -2-> p2; } }",
        )
        .unwrap();
        let g = explore(&net, 100);
        assert_eq!(place_bounds(&net, &g).unwrap(), vec![2, 3, 2]);
    }

    #[test]
    fn karp_miller_source_transition() {
        let net = parse_net("net src { places { p; } transitions { t; } arcs { t -> p; } }").unwrap();
        let tree = karp_miller(&net);
        assert_eq!(tree.verdict, Boundedness::Unbounded { places: vec![PlaceId(0)] });
        assert_eq!(tree.nodes[1].marking, vec![Count::Omega]);
    }

    #[test]
    fn karp_miller_bounded_matches_reachability() {
        for net in [fig3a(), fig3b()] {
            let tree = karp_miller(&net);
            assert!(tree.is_bounded());
            let g = explore(&net, DEFAULT_LIMIT);
            let mut tree_markings: Vec<Marking> = tree
                .markings()
                .into_iter()
                .map(|m| {
                    Marking::from_counts(
                        m.iter()
                            .map(|c| match c {
                                Count::Finite(n) => *n,
                                Count::Omega => unreachable!(),
                            })
                            .collect(),
                    )
                })
                .collect();
            let mut states = g.states().to_vec();
            tree_markings.sort();
            states.sort();
            assert_eq!(tree_markings, states);
        }
    }

    #[test]
    fn karp_miller_partial_omega() {
        // p cycles, q grows each lap
        let net = parse_net(
            "net g { places { p = 1; q; r; } transitions { a; b; }
                             arcs { p -> a; a -> q; a -> r; r -> b; b -> p; } }",
        )
        .unwrap();
        let tree = karp_miller(&net);
        assert_eq!(tree.verdict, Boundedness::Unbounded { places: vec![PlaceId(1)] });
        let m = net.marking([("p", 1), ("q", 40)]).unwrap();
        assert!(tree.covers(&m));
        let both = net.marking([("p", 1), ("r", 1)]).unwrap();
        assert!(!tree.covers(&both));
    }

    #[test]
    fn witnesses() {
        let net = fig3b();
        let p5 = net.place("p5").unwrap();
        let goal = net.marking([("p5", 1)]).unwrap();
        assert_eq!(reachable(&net, |m| *m == goal, 100), Reach::Unreachable);
        assert_eq!(reachable(&net, |m| m.get(p5) > 0, 100), Reach::Unreachable);
        let m0 = net.initial_marking().clone();
        assert_eq!(reachable(&net, |m| *m == m0, 100), Reach::Found { witness: vec![], marking: m0.clone() });

        let p6 = net.marking([("p6", 1)]).unwrap();
        match reachable(&net, |m| *m == p6, 100) {
            Reach::Found { witness, marking } => {
                let names: Vec<_> = witness.iter().map(|&t| net.transition_name(t)).collect();
                assert_eq!(names, ["t2", "t5"]);
                assert_eq!(replay(&net, &witness).unwrap(), marking);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn causal_dependency() {
        let net = fig3a();
        let t = |n: &str| net.transition(n).unwrap();
        for first in ["t1", "t2", "t3"] {
            assert_eq!(causally_dependent(&net, t(first), t("t4"), 100).unwrap(), Causality::Dependent);
        }
        assert_eq!(causally_dependent(&net, t("t3"), t("t2"), 100).unwrap(), Causality::Independent);
        assert_eq!(causally_dependent(&net, t("t2"), t("t3"), 100).unwrap(), Causality::Independent);
        assert_eq!(causally_dependent(&net, t("t2"), t("t2"), 100).unwrap(), Causality::Independent);
        assert!(!Causality::Independent.holds());

        let b = fig3b();
        let t1 = b.transition("t1").unwrap();
        let t4 = b.transition("t4").unwrap();
        assert_eq!(causally_dependent(&b, t1, t4, 100).unwrap(), Causality::NeverFires);
    }

    #[test]
    fn graph_paths() {
        let net = fig3a();
        let g = explore(&net, 100);
        let target = g.index_of(&net.marking([("p6", 1)]).unwrap()).unwrap();
        let path = g.path_to(target).unwrap();
        assert_eq!(path.len(), 4);
        assert_eq!(replay(&net, &path).unwrap(), *g.state(target));
    }
}
