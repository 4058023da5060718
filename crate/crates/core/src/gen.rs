//! Random nets for property testing and the acceptance suite.

use rand::Rng;

use crate::net::{ArcKind, Net, NetBuilder, PlaceId, TransitionId};

/// Shape limits for [`random_net`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenParams {
    pub max_places: usize,
    pub max_transitions: usize,
    pub max_weight: u64,
    pub max_tokens: u64,
    /// Probability in percent that a place/transition pair gets an input arc.
    pub input_percent: u32,
    pub output_percent: u32,
    pub read_percent: u32,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            max_places: 6,
            max_transitions: 6,
            max_weight: 2,
            max_tokens: 2,
            input_percent: 30,
            output_percent: 30,
            read_percent: 15,
        }
    }
}

/// Draws a net with at least one place and one transition. A place never
/// has both an input and a read arc to the same transition.
pub fn random_net<R: Rng + ?Sized>(rng: &mut R, params: &GenParams) -> Net {
    let places = rng.random_range(1..=params.max_places.max(1));
    let transitions = rng.random_range(1..=params.max_transitions.max(1));
    let mut b = NetBuilder::new("random");
    for i in 0..places {
        let tokens = rng.random_range(0..=params.max_tokens);
        b.place(&format!("p{i}"), tokens).expect("generated names are fresh");
    }
    for i in 0..transitions {
        b.transition(&format!("t{i}")).expect("generated names are fresh");
    }
    let weight = |rng: &mut R| rng.random_range(1..=params.max_weight.max(1));
    for t in (0..transitions).map(TransitionId) {
        for p in (0..places).map(PlaceId) {
            let roll = rng.random_range(0..100);
            if roll < params.input_percent {
                let w = weight(rng);
                b.arc(p, t, ArcKind::Input, w).expect("fresh arc");
            } else if roll < params.input_percent + params.read_percent {
                let w = weight(rng);
                b.arc(p, t, ArcKind::Read, w).expect("fresh arc");
            }
            if rng.random_range(0..100) < params.output_percent {
                let w = weight(rng);
                b.arc(p, t, ArcKind::Output, w).expect("fresh arc");
            }
        }
    }
    b.build()
}
