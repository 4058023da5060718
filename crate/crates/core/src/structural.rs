//! Incidence matrix and semi-positive P/T-invariants.
//!
//! Invariants are computed with the Farkas elimination over exact
//! arbitrary-precision integers, then reduced to the minimal-support
//! generators, each divided by the gcd of its entries.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::net::{Net, PlaceId, TransitionId};
use crate::statespace::{AnalysisError, ReachabilityGraph};

/// `C[p][t] = W(t,p) - W(p,t)`; read arcs contribute nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IncidenceMatrix {
    pub fn places(&self) -> usize {
        self.rows
    }

    pub fn transitions(&self) -> usize {
        self.cols
    }

    pub fn get(&self, p: PlaceId, t: TransitionId) -> i64 {
        self.data[p.0 * self.cols + t.0]
    }

    pub fn column(&self, t: TransitionId) -> Vec<i64> {
        (0..self.rows).map(|p| self.data[p * self.cols + t.0]).collect()
    }

    pub fn row(&self, p: PlaceId) -> &[i64] {
        &self.data[p.0 * self.cols..(p.0 + 1) * self.cols]
    }

    fn transposed(&self) -> IncidenceMatrix {
        let mut data = vec![0; self.data.len()];
        for r in 0..self.rows {
            for c in 0..self.cols {
                data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        IncidenceMatrix { rows: self.cols, cols: self.rows, data }
    }
}

pub fn incidence(net: &Net) -> IncidenceMatrix {
    let rows = net.place_count();
    let cols = net.transition_count();
    let mut data = vec![0i64; rows * cols];
    for t in net.transitions() {
        for &(p, w) in net.inputs(t) {
            data[p.0 * cols + t.0] -= w as i64;
        }
        for &(p, w) in net.outputs(t) {
            data[p.0 * cols + t.0] += w as i64;
        }
    }
    IncidenceMatrix { rows, cols, data }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InvariantKind {
    Place,
    Transition,
}

/// A nonzero, nonnegative, gcd-normalised weighting over places or
/// transitions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InvariantVector {
    pub kind: InvariantKind,
    pub weights: Vec<BigUint>,
}

impl InvariantVector {
    pub fn place(weights: Vec<u64>) -> Self {
        InvariantVector { kind: InvariantKind::Place, weights: weights.into_iter().map(BigUint::from).collect() }
    }

    pub fn transition(weights: Vec<u64>) -> Self {
        InvariantVector { kind: InvariantKind::Transition, weights: weights.into_iter().map(BigUint::from).collect() }
    }

    /// Indices with a nonzero weight.
    pub fn support(&self) -> Vec<usize> {
        self.weights.iter().enumerate().filter(|(_, w)| !w.is_zero()).map(|(i, _)| i).collect()
    }

    /// The weights as `u64`, if they all fit.
    pub fn weights_u64(&self) -> Option<Vec<u64>> {
        self.weights.iter().map(|w| u64::try_from(w).ok()).collect()
    }

    /// `Σ weight[p] · tokens[p]`.
    pub fn weighted_sum(&self, counts: &[u64]) -> BigUint {
        self.weights.iter().zip(counts).map(|(w, &c)| w * BigUint::from(c)).sum()
    }
}

impl fmt::Display for InvariantVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.weights.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// Semi-positive place invariants: `yᵀ·C = 0`.
pub fn p_invariants(net: &Net) -> Vec<InvariantVector> {
    farkas(&incidence(net)).into_iter().map(|weights| InvariantVector { kind: InvariantKind::Place, weights }).collect()
}

/// Semi-positive transition invariants: `C·x = 0`.
pub fn t_invariants(net: &Net) -> Vec<InvariantVector> {
    farkas(&incidence(net).transposed())
        .into_iter()
        .map(|weights| InvariantVector { kind: InvariantKind::Transition, weights })
        .collect()
}

/// Minimal-support semi-positive solutions `y` of `yᵀ·A = 0`, sorted
/// lexicographically by support.
fn farkas(a: &IncidenceMatrix) -> Vec<Vec<BigUint>> {
    let n = a.rows;
    let m = a.cols;
    if n == 0 {
        return Vec::new();
    }
    // each row: (remaining columns of A, identity part tracking the combination)
    let mut rows: Vec<(Vec<BigInt>, Vec<BigInt>)> = (0..n)
        .map(|i| {
            let left = a.row(PlaceId(i)).iter().map(|&v| BigInt::from(v)).collect();
            let mut right = vec![BigInt::zero(); n];
            right[i] = BigInt::from(1);
            (left, right)
        })
        .collect();

    for col in 0..m {
        let mut next: Vec<(Vec<BigInt>, Vec<BigInt>)> =
            rows.iter().filter(|(l, _)| l[col].is_zero()).cloned().collect();
        let pos: Vec<_> = rows.iter().filter(|(l, _)| l[col].sign() == Sign::Plus).collect();
        let neg: Vec<_> = rows.iter().filter(|(l, _)| l[col].sign() == Sign::Minus).collect();
        for (pl, pr) in &pos {
            for (nl, nr) in &neg {
                let a = nl[col].abs();
                let b = pl[col].abs();
                let left: Vec<BigInt> = pl.iter().zip(nl).map(|(x, y)| x * &a + y * &b).collect();
                let right: Vec<BigInt> = pr.iter().zip(nr).map(|(x, y)| x * &a + y * &b).collect();
                let row = normalise(left, right);
                if !dominated(&next, &row.1) {
                    next.retain(|(_, r)| !strictly_contains(r, &row.1));
                    next.push(row);
                }
            }
        }
        rows = next;
    }

    let mut out: Vec<Vec<BigInt>> = Vec::new();
    for (_, r) in rows {
        if r.iter().all(Zero::is_zero) || out.contains(&r) {
            continue;
        }
        out.push(r);
    }
    let supports: Vec<BTreeSet<usize>> = out.iter().map(|r| support_of(r)).collect();
    let mut minimal: Vec<Vec<BigUint>> = out
        .iter()
        .enumerate()
        .filter(|(i, _)| {
            !supports.iter().enumerate().any(|(j, s)| j != *i && s.is_subset(&supports[*i]) && s != &supports[*i])
        })
        .map(|(_, r)| r.iter().map(|v| v.magnitude().clone()).collect())
        .collect();
    minimal.sort_by(|x, y| {
        let sx: Vec<usize> = support_of_u(x);
        let sy: Vec<usize> = support_of_u(y);
        sx.cmp(&sy).then_with(|| x.cmp(y))
    });
    minimal.dedup();
    minimal
}

fn normalise(left: Vec<BigInt>, right: Vec<BigInt>) -> (Vec<BigInt>, Vec<BigInt>) {
    let g = left.iter().chain(&right).fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() || g == BigInt::from(1) {
        return (left, right);
    }
    (left.into_iter().map(|v| v / &g).collect(), right.into_iter().map(|v| v / &g).collect())
}

fn support_of(r: &[BigInt]) -> BTreeSet<usize> {
    r.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, _)| i).collect()
}

fn support_of_u(r: &[BigUint]) -> Vec<usize> {
    r.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, _)| i).collect()
}

/// Some existing row has a support contained in that of `r`.
fn dominated(rows: &[(Vec<BigInt>, Vec<BigInt>)], r: &[BigInt]) -> bool {
    rows.iter().any(|(_, other)| other.iter().zip(r).all(|(o, x)| o.is_zero() || !x.is_zero()))
}

/// `big`'s support strictly contains `small`'s.
fn strictly_contains(big: &[BigInt], small: &[BigInt]) -> bool {
    big.iter().zip(small).all(|(b, s)| s.is_zero() || !b.is_zero())
        && big.iter().zip(small).any(|(b, s)| s.is_zero() && !b.is_zero())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InvariantCheck {
    /// `yᵀ·C = 0` and the weighted token sum equals `constant` in every state.
    Invariant { constant: BigUint },
    /// `yᵀ·C ≠ 0`. The weighted sum may still happen to be constant on the
    /// reachable states, e.g. when the offending transitions are dead.
    NotInvariant { constant_on_reachable: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("expected a place vector")]
    NotPlaceVector,
    #[error("vector has {found} entries but the net has {expected} places")]
    Size { expected: usize, found: usize },
    #[error("vector annihilates the incidence matrix but its weighted sum changes between state 0 and state {state}")]
    Inconsistent { state: usize },
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

/// Checks a place vector algebraically and by enumeration over `g`.
/// An algebraic invariant whose sum is not constant on the graph is an
/// internal inconsistency and reported as an error.
pub fn check_p_invariant(
    net: &Net,
    v: &InvariantVector,
    g: &ReachabilityGraph,
) -> Result<InvariantCheck, InvariantError> {
    if v.kind != InvariantKind::Place {
        return Err(InvariantError::NotPlaceVector);
    }
    if v.weights.len() != net.place_count() {
        return Err(InvariantError::Size { expected: net.place_count(), found: v.weights.len() });
    }
    g.require_complete()?;

    let c = incidence(net);
    let algebraic = net.transitions().all(|t| {
        let sum: BigInt = net.places().map(|p| BigInt::from(v.weights[p.0].clone()) * c.get(p, t)).sum();
        sum.is_zero()
    });

    let constant = v.weighted_sum(g.state(0).counts());
    let changed_at = (1..g.state_count()).find(|&s| v.weighted_sum(g.state(s).counts()) != constant);

    match (algebraic, changed_at) {
        (true, None) => Ok(InvariantCheck::Invariant { constant }),
        (true, Some(state)) => Err(InvariantError::Inconsistent { state }),
        (false, changed) => Ok(InvariantCheck::NotInvariant { constant_on_reachable: changed.is_none() }),
    }
}
