//! CTL over reachability graphs.
//!
//! Atoms talk about a single marking: `tokens(p) OP n`, `enabled(t)`,
//! `deadlock`, `true`, `false`. Path quantifiers range over maximal paths;
//! a deadlock state has no successors, so `EX f` is false and `AX f` is true
//! there, `EG f` holds at a deadlock satisfying `f`, and `AF f` / `A[f U g]`
//! need the goal before the path ends.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::lex::{Cursor, ParseError, Tok};
use crate::net::{Marking, Net, PlaceId, TransitionId};
use crate::statespace::{ReachabilityGraph, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cmp {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Cmp {
    pub fn eval(self, lhs: u64, rhs: u64) -> bool {
        match self {
            Cmp::Lt => lhs < rhs,
            Cmp::Le => lhs <= rhs,
            Cmp::Eq => lhs == rhs,
            Cmp::Ge => lhs >= rhs,
            Cmp::Gt => lhs > rhs,
        }
    }
}

impl fmt::Display for Cmp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Eq => "=",
            Cmp::Ge => ">=",
            Cmp::Gt => ">",
        })
    }
}

/// A CTL formula whose place and transition names are still unresolved.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Deadlock,
    Tokens { place: String, cmp: Cmp, value: u64 },
    Enabled(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    EX(Box<Formula>),
    EF(Box<Formula>),
    EG(Box<Formula>),
    AX(Box<Formula>),
    AF(Box<Formula>),
    AG(Box<Formula>),
    EU(Box<Formula>, Box<Formula>),
    AU(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn tokens(place: &str, cmp: Cmp, value: u64) -> Formula {
        Formula::Tokens { place: place.to_owned(), cmp, value }
    }

    pub fn enabled(t: &str) -> Formula {
        Formula::Enabled(t.to_owned())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn ef(f: Formula) -> Formula {
        Formula::EF(Box::new(f))
    }

    pub fn ag(f: Formula) -> Formula {
        Formula::AG(Box::new(f))
    }

    /// Conjunction of a nonempty list, left-nested.
    pub fn all(fs: impl IntoIterator<Item = Formula>) -> Formula {
        fs.into_iter().reduce(Formula::and).unwrap_or(Formula::True)
    }

    pub fn any(fs: impl IntoIterator<Item = Formula>) -> Formula {
        fs.into_iter().reduce(Formula::or).unwrap_or(Formula::False)
    }

    /// No temporal operator anywhere: the formula is a predicate on markings.
    pub fn is_state_formula(&self) -> bool {
        use Formula::*;
        match self {
            True | False | Deadlock | Tokens { .. } | Enabled(_) => true,
            Not(f) => f.is_state_formula(),
            And(a, b) | Or(a, b) | Implies(a, b) => a.is_state_formula() && b.is_state_formula(),
            _ => false,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            _ => 4,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // operands of a prefix operator and binary operands of lower or equal
        // precedence get parentheses; `->` is right-associative
        fn operand(f: &mut fmt::Formatter<'_>, x: &Formula, min: u8) -> fmt::Result {
            if x.precedence() < min {
                write!(f, "({x})")
            } else {
                write!(f, "{x}")
            }
        }
        fn prefix(f: &mut fmt::Formatter<'_>, op: &str, x: &Formula) -> fmt::Result {
            f.write_str(op)?;
            if x.precedence() < 4 {
                write!(f, "({x})")
            } else {
                write!(f, "{x}")
            }
        }
        use Formula::*;
        match self {
            True => f.write_str("true"),
            False => f.write_str("false"),
            Deadlock => f.write_str("deadlock"),
            Tokens { place, cmp, value } => write!(f, "tokens({place}) {cmp} {value}"),
            Enabled(t) => write!(f, "enabled({t})"),
            Not(x) => prefix(f, "!", x),
            And(a, b) => {
                operand(f, a, 3)?;
                f.write_str(" & ")?;
                operand(f, b, 4)
            }
            Or(a, b) => {
                operand(f, a, 2)?;
                f.write_str(" | ")?;
                operand(f, b, 3)
            }
            Implies(a, b) => {
                operand(f, a, 2)?;
                f.write_str(" -> ")?;
                operand(f, b, 1)
            }
            EX(x) => prefix(f, "EX ", x),
            EF(x) => prefix(f, "EF ", x),
            EG(x) => prefix(f, "EG ", x),
            AX(x) => prefix(f, "AX ", x),
            AF(x) => prefix(f, "AF ", x),
            AG(x) => prefix(f, "AG ", x),
            EU(a, b) => write!(f, "E[{a} U {b}]"),
            AU(a, b) => write!(f, "A[{a} U {b}]"),
        }
    }
}

/// Parses a formula. Precedence from tightest: prefix operators (`!`, `EX`,
/// …), `&`, `|`, then right-associative `->`.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut cur = Cursor::new(text)?;
    let f = parse_formula_tokens(&mut cur)?;
    if !cur.at_end() {
        return Err(cur.unexpected("end of formula"));
    }
    Ok(f)
}

pub(crate) fn parse_formula_tokens(cur: &mut Cursor) -> Result<Formula, ParseError> {
    let f = implication(cur)?;
    if !cur.at_end() {
        return Err(cur.unexpected("an operator or end of formula"));
    }
    Ok(f)
}

fn implication(cur: &mut Cursor) -> Result<Formula, ParseError> {
    let lhs = disjunction(cur)?;
    if cur.eat(&Tok::Arrow) {
        let rhs = implication(cur)?;
        return Ok(Formula::implies(lhs, rhs));
    }
    Ok(lhs)
}

fn disjunction(cur: &mut Cursor) -> Result<Formula, ParseError> {
    let mut f = conjunction(cur)?;
    while cur.eat(&Tok::Pipe) {
        f = Formula::or(f, conjunction(cur)?);
    }
    Ok(f)
}

fn conjunction(cur: &mut Cursor) -> Result<Formula, ParseError> {
    let mut f = unary(cur)?;
    while cur.eat(&Tok::Amp) {
        f = Formula::and(f, unary(cur)?);
    }
    Ok(f)
}

fn unary(cur: &mut Cursor) -> Result<Formula, ParseError> {
    if cur.eat(&Tok::Bang) {
        return Ok(Formula::not(unary(cur)?));
    }
    if cur.eat(&Tok::LParen) {
        let f = implication(cur)?;
        cur.expect(&Tok::RParen)?;
        return Ok(f);
    }
    let (word, pos) = match cur.peek() {
        Tok::Ident(_) => cur.ident()?,
        _ => return Err(cur.unexpected("a formula")),
    };
    let boxed = |cur: &mut Cursor| unary(cur).map(Box::new);
    Ok(match word.as_str() {
        "true" => Formula::True,
        "false" => Formula::False,
        "deadlock" => Formula::Deadlock,
        "EX" => Formula::EX(boxed(cur)?),
        "EF" => Formula::EF(boxed(cur)?),
        "EG" => Formula::EG(boxed(cur)?),
        "AX" => Formula::AX(boxed(cur)?),
        "AF" => Formula::AF(boxed(cur)?),
        "AG" => Formula::AG(boxed(cur)?),
        "E" | "A" => {
            cur.expect(&Tok::LBracket)?;
            let a = implication(cur)?;
            cur.keyword("U")?;
            let b = implication(cur)?;
            cur.expect(&Tok::RBracket)?;
            if word == "E" {
                Formula::EU(Box::new(a), Box::new(b))
            } else {
                Formula::AU(Box::new(a), Box::new(b))
            }
        }
        "tokens" => {
            cur.expect(&Tok::LParen)?;
            let (place, _) = cur.ident()?;
            cur.expect(&Tok::RParen)?;
            let cmp = match cur.next().tok {
                Tok::Lt => Cmp::Lt,
                Tok::Le => Cmp::Le,
                Tok::Eq => Cmp::Eq,
                Tok::Ge => Cmp::Ge,
                Tok::Gt => Cmp::Gt,
                other => {
                    return Err(ParseError::new(
                        pos,
                        format!("expected a comparison after tokens({place}), found {other}"),
                    ))
                }
            };
            let (value, _) = cur.nat()?;
            Formula::Tokens { place, cmp, value }
        }
        "enabled" => {
            cur.expect(&Tok::LParen)?;
            let (t, _) = cur.ident()?;
            cur.expect(&Tok::RParen)?;
            Formula::Enabled(t)
        }
        other => return Err(ParseError::new(pos, format!("unknown operator or atom `{other}`"))),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("unknown place `{0}` in formula")]
    UnknownPlace(String),
    #[error("unknown transition `{0}` in formula")]
    UnknownTransition(String),
    #[error("state space truncated at {limit} states; only EF over a state formula can be decided on a partial graph")]
    Truncated { limit: usize },
}

/// Formula with names resolved against a net.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Node {
    True,
    False,
    Deadlock,
    Tokens(PlaceId, Cmp, u64),
    Enabled(TransitionId),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    EX(Box<Node>),
    EG(Box<Node>),
    EU(Box<Node>, Box<Node>),
    AX(Box<Node>),
    AU(Box<Node>, Box<Node>),
}

fn resolve(net: &Net, f: &Formula) -> Result<Node, CheckError> {
    use Formula as F;
    let r = |x: &Formula| resolve(net, x).map(Box::new);
    Ok(match f {
        F::True => Node::True,
        F::False => Node::False,
        F::Deadlock => Node::Deadlock,
        F::Tokens { place, cmp, value } => {
            Node::Tokens(net.place_id(place).ok_or_else(|| CheckError::UnknownPlace(place.clone()))?, *cmp, *value)
        }
        F::Enabled(t) => Node::Enabled(net.transition_id(t).ok_or_else(|| CheckError::UnknownTransition(t.clone()))?),
        F::Not(x) => Node::Not(r(x)?),
        F::And(a, b) => Node::And(r(a)?, r(b)?),
        F::Or(a, b) => Node::Or(r(a)?, r(b)?),
        F::Implies(a, b) => Node::Or(Box::new(Node::Not(r(a)?)), r(b)?),
        F::EX(x) => Node::EX(r(x)?),
        F::EF(x) => Node::EU(Box::new(Node::True), r(x)?),
        F::EG(x) => Node::EG(r(x)?),
        F::AX(x) => Node::AX(r(x)?),
        F::AF(x) => Node::AU(Box::new(Node::True), r(x)?),
        // AG f = ¬EF ¬f
        F::AG(x) => Node::Not(Box::new(Node::EU(Box::new(Node::True), Box::new(Node::Not(r(x)?))))),
        F::EU(a, b) => Node::EU(r(a)?, r(b)?),
        F::AU(a, b) => Node::AU(r(a)?, r(b)?),
    })
}

/// Checks that every place and transition named in `f` exists in `net`.
pub fn validate(net: &Net, f: &Formula) -> Result<(), CheckError> {
    resolve(net, f).map(|_| ())
}

/// Evaluates a temporal-free formula on a single marking.
pub fn eval_state(net: &Net, f: &Formula, m: &Marking) -> Result<bool, CheckError> {
    debug_assert!(f.is_state_formula());
    Ok(eval_node(net, &resolve(net, f)?, m))
}

fn eval_node(net: &Net, n: &Node, m: &Marking) -> bool {
    match n {
        Node::True => true,
        Node::False => false,
        Node::Deadlock => net.is_dead(m),
        Node::Tokens(p, cmp, v) => cmp.eval(m.get(*p), *v),
        Node::Enabled(t) => net.enabled_unchecked(m, *t),
        Node::Not(x) => !eval_node(net, x, m),
        Node::And(a, b) => eval_node(net, a, m) && eval_node(net, b, m),
        Node::Or(a, b) => eval_node(net, a, m) || eval_node(net, b, m),
        _ => unreachable!("temporal operator in a state formula"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    /// Whether the initial state satisfies the formula.
    pub holds: bool,
    /// Witness path for a satisfied existential property or counterexample
    /// path for a refuted universal one, starting at the initial marking.
    pub trace: Option<Vec<TransitionId>>,
}

/// Fixpoint labelling of a complete reachability graph.
pub struct Checker<'a> {
    net: &'a Net,
    graph: &'a ReachabilityGraph,
    cache: HashMap<Node, Vec<bool>>,
}

impl<'a> Checker<'a> {
    pub fn new(net: &'a Net, graph: &'a ReachabilityGraph) -> Self {
        Checker { net, graph, cache: HashMap::new() }
    }

    /// Per-state satisfaction of `f`, indexed like the graph's states.
    pub fn labels(&mut self, f: &Formula) -> Result<Vec<bool>, CheckError> {
        self.require_complete()?;
        let node = resolve(self.net, f)?;
        Ok(self.sat(&node).clone())
    }

    pub fn check(&mut self, f: &Formula) -> Result<Verdict, CheckError> {
        let node = resolve(self.net, f)?;
        if let Status::Truncated { limit } = self.graph.status() {
            return self.check_partial(f, &node, limit);
        }
        let holds = self.sat(&node)[0];
        let trace = if has_path_evidence(f, holds) { self.evidence(&node, 0, holds) } else { None };
        Ok(Verdict { holds, trace })
    }

    fn require_complete(&self) -> Result<(), CheckError> {
        match self.graph.status() {
            Status::Complete => Ok(()),
            Status::Truncated { limit } => Err(CheckError::Truncated { limit }),
        }
    }

    /// On a partial graph only a found `EF φ` witness is conclusive.
    fn check_partial(&mut self, f: &Formula, node: &Node, limit: usize) -> Result<Verdict, CheckError> {
        if let Formula::EF(inner) = f {
            if inner.is_state_formula() {
                let Node::EU(_, goal) = node else { unreachable!() };
                let g = self.graph;
                let found = g.bfs_path(0, |s| eval_node(self.net, goal, g.state(s)), |_| true);
                if let Some((_, path)) = found {
                    return Ok(Verdict { holds: true, trace: Some(path) });
                }
            }
        }
        Err(CheckError::Truncated { limit })
    }

    fn sat(&mut self, n: &Node) -> &Vec<bool> {
        if !self.cache.contains_key(n) {
            let v = self.compute(n);
            self.cache.insert(n.clone(), v);
        }
        &self.cache[n]
    }

    fn compute(&mut self, n: &Node) -> Vec<bool> {
        let g = self.graph;
        let count = g.state_count();
        let net = self.net;
        match n {
            Node::True => vec![true; count],
            Node::False => vec![false; count],
            Node::Deadlock | Node::Tokens(..) | Node::Enabled(_) => {
                g.states().iter().map(|m| eval_node(net, n, m)).collect()
            }
            Node::Not(x) => self.sat(x).iter().map(|b| !b).collect(),
            Node::And(a, b) => {
                let a = self.sat(a).clone();
                self.sat(b).iter().zip(a).map(|(&x, y)| x && y).collect()
            }
            Node::Or(a, b) => {
                let a = self.sat(a).clone();
                self.sat(b).iter().zip(a).map(|(&x, y)| x || y).collect()
            }
            Node::EX(x) => {
                let x = self.sat(x);
                (0..count).map(|s| g.successors(s).iter().any(|&(_, t)| x[t])).collect()
            }
            Node::AX(x) => {
                let x = self.sat(x);
                (0..count).map(|s| g.successors(s).iter().all(|&(_, t)| x[t])).collect()
            }
            Node::EU(a, b) => {
                // least fixpoint, backwards from b through a
                let a = self.sat(a).clone();
                let mut set = self.sat(b).clone();
                let mut work: Vec<usize> = (0..count).filter(|&s| set[s]).collect();
                while let Some(s) = work.pop() {
                    for &(_, p) in g.predecessors(s) {
                        if !set[p] && a[p] {
                            set[p] = true;
                            work.push(p);
                        }
                    }
                }
                set
            }
            Node::AU(a, b) => {
                // least fixpoint: b, or a with successors that all satisfy it
                let a = self.sat(a).clone();
                let mut set = self.sat(b).clone();
                let mut pending: Vec<usize> = (0..count).map(|s| g.successors(s).len()).collect();
                let mut work: Vec<usize> = (0..count).filter(|&s| set[s]).collect();
                while let Some(s) = work.pop() {
                    for &(_, p) in g.predecessors(s) {
                        pending[p] -= 1;
                        if pending[p] == 0 && !set[p] && a[p] && !g.successors(p).is_empty() {
                            set[p] = true;
                            work.push(p);
                        }
                    }
                }
                set
            }
            Node::EG(x) => {
                // greatest fixpoint: x, and a successor in the set or no successor at all
                let mut set = self.sat(x).clone();
                let mut alive: Vec<usize> =
                    (0..count).map(|s| g.successors(s).iter().filter(|&&(_, t)| set[t]).count()).collect();
                let mut work: Vec<usize> =
                    (0..count).filter(|&s| set[s] && alive[s] == 0 && !g.successors(s).is_empty()).collect();
                for &s in &work {
                    set[s] = false;
                }
                while let Some(s) = work.pop() {
                    for &(_, p) in g.predecessors(s) {
                        if set[p] {
                            alive[p] -= 1;
                            if alive[p] == 0 {
                                set[p] = false;
                                work.push(p);
                            }
                        }
                    }
                }
                set
            }
        }
    }

    /// A path from `s` showing that `n` holds (`positive`) or fails there.
    /// Atoms and plain boolean combinations contribute an empty path.
    fn evidence(&mut self, n: &Node, s: usize, positive: bool) -> Option<Vec<TransitionId>> {
        let g = self.graph;
        match (n, positive) {
            (Node::True | Node::False | Node::Deadlock | Node::Tokens(..) | Node::Enabled(_), _) => Some(Vec::new()),
            (Node::Not(x), _) => self.evidence(x, s, !positive),
            (Node::And(a, b), false) | (Node::Or(a, b), true) => {
                let pick = if self.sat(a)[s] == positive { a } else { b };
                self.evidence(pick, s, positive)
            }
            (Node::And(..), true) | (Node::Or(..), false) => Some(Vec::new()),
            (Node::EX(x), true) | (Node::AX(x), false) => {
                let xs = self.sat(x).clone();
                let &(t, next) = g.successors(s).iter().find(|&&(_, t)| xs[t] == positive)?;
                let mut path = vec![t];
                path.extend(self.evidence(x, next, positive)?);
                Some(path)
            }
            (Node::EX(_), false) | (Node::AX(_), true) => Some(Vec::new()),
            (Node::EU(a, b), true) => {
                let a_set = self.sat(a).clone();
                let b_set = self.sat(b).clone();
                let (end, mut path) = g.bfs_path(s, |x| b_set[x], |x| a_set[x])?;
                path.extend(self.evidence(b, end, true)?);
                Some(path)
            }
            (Node::EU(a, b), false) => {
                // every path avoids b through a; show a maximal run that never meets b
                let avoid = Node::EG(Box::new(Node::Not(b.clone())));
                if self.sat(&avoid)[s] {
                    Some(self.lasso(&avoid, s))
                } else {
                    // every run leaves a before reaching b
                    let a_set = self.sat(a).clone();
                    let b_set = self.sat(b).clone();
                    let (_, path) = g.bfs_path(s, |x| !a_set[x] && !b_set[x], |x| !b_set[x])?;
                    Some(path)
                }
            }
            (Node::EG(_), true) => Some(self.lasso(n, s)),
            (Node::EG(x), false) => {
                // every maximal path hits ¬x: show the shortest way there
                let xs = self.sat(x).clone();
                let (_, path) = g.bfs_path(s, |y| !xs[y], |_| true)?;
                Some(path)
            }
            (Node::AU(a, b), false) => {
                let a_set = self.sat(a).clone();
                let b_set = self.sat(b).clone();
                if let Some((_, path)) = g.bfs_path(s, |x| !a_set[x] && !b_set[x], |x| !b_set[x]) {
                    return Some(path);
                }
                let avoid = Node::EG(Box::new(Node::Not(b.clone())));
                self.sat(&avoid)[s].then(|| self.lasso(&avoid, s))
            }
            (Node::AU(..), true) => Some(Vec::new()),
        }
    }

    /// Follows first successors inside the `EG` set of `eg` until a state
    /// repeats or a deadlock is reached.
    fn lasso(&mut self, eg: &Node, s: usize) -> Vec<TransitionId> {
        let g = self.graph;
        let set = self.sat(eg).clone();
        let mut seen = vec![false; g.state_count()];
        let mut path = Vec::new();
        let mut cur = s;
        while !seen[cur] {
            seen[cur] = true;
            match g.successors(cur).iter().find(|&&(_, t)| set[t]) {
                Some(&(t, next)) => {
                    path.push(t);
                    cur = next;
                }
                None => break,
            }
        }
        path
    }
}

/// Whether the verdict is backed by a single run: a satisfied existential
/// operator or a refuted universal one, looking through negations.
fn has_path_evidence(f: &Formula, holds: bool) -> bool {
    use Formula::*;
    match f {
        Not(x) => has_path_evidence(x, !holds),
        EX(_) | EF(_) | EG(_) | EU(..) => holds,
        AX(_) | AF(_) | AG(_) | AU(..) => !holds,
        _ => false,
    }
}

/// Checks `f` at the initial state of `g`.
pub fn check(net: &Net, g: &ReachabilityGraph, f: &Formula) -> Result<Verdict, CheckError> {
    Checker::new(net, g).check(f)
}

/// `AG EF enabled(t)`.
pub fn liveness_query(net: &Net, t: TransitionId) -> Formula {
    Formula::ag(Formula::ef(Formula::enabled(net.transition_name(t))))
}

pub fn check_liveness_query(net: &Net, g: &ReachabilityGraph, t: TransitionId) -> Result<Verdict, CheckError> {
    check(net, g, &liveness_query(net, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_net;
    use crate::statespace::{explore, replay};

    fn fig3b() -> Net {
        parse_net(
            "net fig3b { places { p1 = 1; p2; p3; p4; p5; p6; } transitions { t1; t2; t3; t4; t5; }
             arcs { p1 -> t1; t1 -> p2; p1 -> t2; t2 -> p3; p2 -> t3; t3 -> p4;
                    p2 -> t4; p3 -> t4; t4 -> p5; p3 -> t5; t5 -> p6; } }",
        )
        .unwrap()
    }

    fn fig3a() -> Net {
        parse_net(
            "net fig3a { places { p1 = 1; p2; p3; p4; p5; p6; } transitions { t1; t2; t3; t4; t5; }
             arcs { p1 -> t1; t1 -> p2; t1 -> p3; p2 -> t2; t2 -> p4; p3 -> t3; t3 -> p5;
                    p4 -> t4; p5 -> t4; t4 -> p6; p6 -> t5; t5 -> p1; } }",
        )
        .unwrap()
    }

    #[test]
    fn parse_shapes() {
        assert_eq!(parse_formula("AG !deadlock").unwrap(), Formula::ag(Formula::not(Formula::Deadlock)));
        assert_eq!(
            parse_formula("AG (tokens(user_informed) >= 1 -> enabled(act))").unwrap(),
            Formula::ag(Formula::implies(Formula::tokens("user_informed", Cmp::Ge, 1), Formula::enabled("act")))
        );
        assert_eq!(parse_formula("EF tokens(p2) = 1").unwrap(), Formula::ef(Formula::tokens("p2", Cmp::Eq, 1)));
        assert_eq!(
            parse_formula("a_is_not_an_atom").unwrap_err().message,
            "unknown operator or atom `a_is_not_an_atom`"
        );
    }

    #[test]
    fn precedence() {
        let f = parse_formula("!true & false | deadlock -> true -> false").unwrap();
        let expected = Formula::implies(
            Formula::or(Formula::and(Formula::not(Formula::True), Formula::False), Formula::Deadlock),
            Formula::implies(Formula::True, Formula::False),
        );
        assert_eq!(f, expected);
        let u = parse_formula("A[tokens(counter') < 3 U enabled(switch_off)]").unwrap();
        assert!(matches!(u, Formula::AU(..)));
        assert_eq!(u.to_string(), "A[tokens(counter') < 3 U enabled(switch_off)]");
    }

    #[test]
    fn syntax_errors_have_positions() {
        let e = parse_formula("AG (deadlock").unwrap_err();
        assert_eq!(e.pos.column, 13);
        let e = parse_formula("tokens(p) 3").unwrap_err();
        assert!(e.message.contains("comparison"));
        assert!(parse_formula("E[true deadlock]").is_err());
        assert!(parse_formula("deadlock deadlock").is_err());
        assert!(parse_formula("").is_err());
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "AG !deadlock",
            "AG (tokens(user_informed) >= 1 -> enabled(act))",
            "EF tokens(p2) = 1",
            "!(tokens(p) = 1)",
            "(true -> false) -> true",
            "!(true & false) | EX AX EG (deadlock | true)",
            "E[!deadlock U tokens(x) > 2 & enabled(y)]",
            "AG EF enabled(t)",
        ] {
            let f = parse_formula(text).unwrap();
            assert_eq!(parse_formula(&f.to_string()).unwrap(), f, "{text} -> {f}");
        }
    }

    #[test]
    fn unresolved_names() {
        let net = fig3b();
        let g = explore(&net, 100);
        assert_eq!(
            check(&net, &g, &parse_formula("EF tokens(p9) = 1").unwrap()),
            Err(CheckError::UnknownPlace("p9".into()))
        );
        assert_eq!(
            check(&net, &g, &parse_formula("EF enabled(t9)").unwrap()),
            Err(CheckError::UnknownTransition("t9".into()))
        );
    }

    #[test]
    fn dead_transition_has_no_witness() {
        let net = fig3b();
        let g = explore(&net, 100);
        let v = check(&net, &g, &parse_formula("EF enabled(t4)").unwrap()).unwrap();
        assert!(!v.holds);
        assert_eq!(v.trace, None);
    }

    #[test]
    fn liveness_counterexample_ends_in_deadlock() {
        let net = fig3b();
        let g = explore(&net, 100);
        let t4 = net.transition("t4").unwrap();
        let v = check_liveness_query(&net, &g, t4).unwrap();
        assert!(!v.holds);
        let end = replay(&net, v.trace.as_ref().unwrap()).unwrap();
        assert!(net.is_dead(&end));

        let t1 = net.transition("t1").unwrap();
        assert!(!check_liveness_query(&net, &g, t1).unwrap().holds);

        let a = fig3a();
        let ga = explore(&a, 100);
        for t in a.transitions() {
            assert!(check_liveness_query(&a, &ga, t).unwrap().holds);
        }
    }

    #[test]
    fn finite_path_conventions() {
        let net = fig3b();
        let g = explore(&net, 100);
        let mut c = Checker::new(&net, &g);
        let p4 = g.index_of(&net.marking([("p4", 1)]).unwrap()).unwrap();
        assert!(!c.labels(&parse_formula("EX true").unwrap()).unwrap()[p4]);
        assert!(c.labels(&parse_formula("AX false").unwrap()).unwrap()[p4]);
        assert!(c.labels(&parse_formula("EG true").unwrap()).unwrap()[p4]);
        assert!(!c.labels(&parse_formula("AF false").unwrap()).unwrap()[p4]);
        assert!(!c.labels(&parse_formula("A[true U false]").unwrap()).unwrap()[p4]);
        // every run from m0 ends in a deadlock
        assert!(c.check(&parse_formula("AF deadlock").unwrap()).unwrap().holds);
        assert!(!c.check(&parse_formula("EG !deadlock").unwrap()).unwrap().holds);
    }

    #[test]
    fn traces_only_for_path_verdicts() {
        let net = fig3a();
        let g = explore(&net, 100);
        let mut c = Checker::new(&net, &g);
        for (text, traced) in [
            ("AG !deadlock", false),
            ("!EF deadlock", false),
            ("!AG tokens(p1) = 1", true),
            ("EF tokens(p6) = 1 & AG !deadlock", false),
            ("tokens(p1) = 1", false),
        ] {
            let v = c.check(&parse_formula(text).unwrap()).unwrap();
            assert!(v.holds, "{text}");
            assert_eq!(v.trace.is_some(), traced, "{text}");
        }
    }

    #[test]
    fn witnesses_replay() {
        let net = fig3a();
        let g = explore(&net, 100);
        let cases = [
            ("EF tokens(p6) = 1", true),
            ("E[!enabled(t4) U enabled(t4)]", true),
            ("EG !enabled(t5) ", false),
            ("AG tokens(p4) = 0", false),
            ("AF tokens(p4) = 1", true),
            ("EX tokens(p3) = 1", true),
            ("AX tokens(p3) = 0", false),
            ("A[tokens(p6) = 0 U tokens(p4) = 1]", true),
            ("A[tokens(p3) = 0 U tokens(p6) = 1]", false),
        ];
        let mut c = Checker::new(&net, &g);
        for (text, expected) in cases {
            let f = parse_formula(text).unwrap();
            let v = c.check(&f).unwrap();
            assert_eq!(v.holds, expected, "{text}");
            if let Some(path) = &v.trace {
                replay(&net, path).unwrap_or_else(|e| panic!("{text}: {e}"));
            }
        }
        let v = c.check(&parse_formula("AG tokens(p4) = 0").unwrap()).unwrap();
        let end = replay(&net, v.trace.as_ref().unwrap()).unwrap();
        assert_eq!(end.get(net.place("p4").unwrap()), 1);
    }

    #[test]
    fn partial_graphs() {
        let net = parse_net("net src { places { p; } transitions { t; } arcs { t -> p; } }").unwrap();
        let g = explore(&net, 10);
        let v = check(&net, &g, &parse_formula("EF tokens(p) = 4").unwrap()).unwrap();
        assert_eq!(v, Verdict { holds: true, trace: Some(vec![TransitionId(0); 4]) });
        assert_eq!(
            check(&net, &g, &parse_formula("EF tokens(p) = 40").unwrap()),
            Err(CheckError::Truncated { limit: 10 })
        );
        assert_eq!(
            check(&net, &g, &parse_formula("AG tokens(p) < 40").unwrap()),
            Err(CheckError::Truncated { limit: 10 })
        );
    }
}
