//! Oracles shared by the integration tests. They work from the arc list
//! directly and never call the library's firing or exploration code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use pnverify_core::gen::{random_net, GenParams};
use pnverify_core::{ArcKind, Net};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn seeded_net(seed: u64) -> Net {
    random_net(&mut ChaCha8Rng::seed_from_u64(seed), &GenParams::default())
}

/// Successor of `m` under transition index `t`, or `None` if disabled.
pub fn oracle_fire(net: &Net, m: &[u64], t: usize) -> Option<Vec<u64>> {
    let mut need = vec![0u64; m.len()];
    let mut delta = vec![0i128; m.len()];
    for a in net.arcs().iter().filter(|a| a.transition.0 == t) {
        let p = a.place.0;
        match a.kind {
            ArcKind::Input => {
                need[p] = need[p].max(a.weight);
                delta[p] -= a.weight as i128;
            }
            ArcKind::Read => need[p] = need[p].max(a.weight),
            ArcKind::Output => delta[p] += a.weight as i128,
        }
    }
    if m.iter().zip(&need).any(|(have, need)| have < need) {
        return None;
    }
    Some(m.iter().zip(&delta).map(|(&v, &d)| (v as i128 + d) as u64).collect())
}

/// Labelled edges of the reachable part, found by depth-first search.
/// Returns `None` once more than `cap` states turn up.
/// Reachable markings with their labelled successors.
pub type Graph = BTreeMap<Vec<u64>, Vec<(usize, Vec<u64>)>>;

pub fn oracle_graph(net: &Net, cap: usize) -> Option<Graph> {
    let m0 = net.initial_marking().counts().to_vec();
    let mut graph = BTreeMap::new();
    let mut stack = vec![m0];
    while let Some(m) = stack.pop() {
        if graph.contains_key(&m) {
            continue;
        }
        if graph.len() >= cap {
            return None;
        }
        let succ: Vec<(usize, Vec<u64>)> =
            (0..net.transition_count()).filter_map(|t| oracle_fire(net, &m, t).map(|n| (t, n))).collect();
        for (_, n) in &succ {
            if !graph.contains_key(n) {
                stack.push(n.clone());
            }
        }
        graph.insert(m, succ);
    }
    Some(graph)
}

pub fn reachable_from(graph: &Graph, start: &[u64]) -> BTreeSet<Vec<u64>> {
    let mut seen = BTreeSet::new();
    let mut stack = vec![start.to_vec()];
    while let Some(m) = stack.pop() {
        if seen.insert(m.clone()) {
            stack.extend(graph[&m].iter().map(|(_, n)| n.clone()));
        }
    }
    seen
}
