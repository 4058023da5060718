//! Interactive token game with undo.

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::net::{Marking, Net, NetError, TransitionId};

#[derive(Debug, Clone)]
pub struct TokenGame<'a> {
    net: &'a Net,
    history: Vec<(Marking, Option<TransitionId>)>,
}

impl<'a> TokenGame<'a> {
    pub fn new(net: &'a Net) -> Self {
        Self::starting_at(net, net.initial_marking().clone())
    }

    pub fn starting_at(net: &'a Net, m: Marking) -> Self {
        TokenGame { net, history: vec![(m, None)] }
    }

    pub fn net(&self) -> &'a Net {
        self.net
    }

    pub fn marking(&self) -> &Marking {
        &self.history.last().expect("history is never empty").0
    }

    pub fn enabled(&self) -> Vec<TransitionId> {
        self.net.enabled_set(self.marking())
    }

    pub fn is_deadlocked(&self) -> bool {
        self.net.is_dead(self.marking())
    }

    /// Transitions fired since the start, oldest first.
    pub fn trace(&self) -> Vec<TransitionId> {
        self.history.iter().filter_map(|(_, t)| *t).collect()
    }

    pub fn fire(&mut self, t: TransitionId) -> Result<&Marking, NetError> {
        let next = self.net.fire(self.marking(), t)?;
        self.history.push((next, Some(t)));
        Ok(self.marking())
    }

    /// Fires by transition name, or by 1-based position in [`Self::enabled`].
    pub fn fire_named(&mut self, what: &str) -> Result<TransitionId, NetError> {
        let t = match what.parse::<usize>() {
            Ok(n) => {
                let enabled = self.enabled();
                *n.checked_sub(1).and_then(|i| enabled.get(i)).ok_or_else(|| NetError::NotEnabled(format!("#{n}")))?
            }
            Err(_) => self.net.transition(what)?,
        };
        self.fire(t)?;
        Ok(t)
    }

    /// Undoes the last firing. Returns the transition undone.
    pub fn undo(&mut self) -> Option<TransitionId> {
        if self.history.len() > 1 {
            self.history.pop().and_then(|(_, t)| t)
        } else {
            None
        }
    }

    pub fn reset(&mut self) {
        self.history.truncate(1);
    }

    /// Fires up to `k` uniformly chosen enabled transitions, stopping early
    /// at a deadlock. Returns what was fired.
    pub fn auto<R: Rng + ?Sized>(&mut self, k: usize, rng: &mut R) -> Result<Vec<TransitionId>, NetError> {
        let mut fired = Vec::new();
        for _ in 0..k {
            let Some(&t) = self.enabled().choose(rng) else { break };
            self.fire(t)?;
            fired.push(t);
        }
        Ok(fired)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_net;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn chain() -> Net {
        parse_net("net c { places { a = 1; b; c; } transitions { t; u; } arcs { a -> t; t -> b; b -> u; u -> c; } }")
            .unwrap()
    }

    #[test]
    fn fire_undo_reset() {
        let net = chain();
        let mut g = TokenGame::new(&net);
        assert_eq!(g.fire_named("t").unwrap(), TransitionId(0));
        assert_eq!(g.fire_named("1").unwrap(), TransitionId(1));
        assert!(g.is_deadlocked());
        assert_eq!(g.trace(), [TransitionId(0), TransitionId(1)]);
        assert_eq!(g.undo(), Some(TransitionId(1)));
        assert_eq!(net.display_marking(g.marking()).to_string(), "{b}");
        g.reset();
        assert_eq!(g.marking(), net.initial_marking());
        assert_eq!(g.undo(), None);
    }

    #[test]
    fn rejects_disabled_and_unknown() {
        let net = chain();
        let mut g = TokenGame::new(&net);
        assert!(matches!(g.fire_named("u"), Err(NetError::NotEnabled(_))));
        assert!(matches!(g.fire_named("2"), Err(NetError::NotEnabled(_))));
        assert!(matches!(g.fire_named("0"), Err(NetError::NotEnabled(_))));
        assert!(g.fire_named("zz").is_err());
        assert!(g.trace().is_empty());
    }

    #[test]
    fn auto_stops_at_deadlock() {
        let net = chain();
        let mut g = TokenGame::new(&net);
        let fired = g.auto(10, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(fired.len(), 2);
    }
}
