//! Subgraph isomorphism cuts.
//!
//! For a window of layers, build the connectivity graph of all gates it
//! contains. If that graph does not embed edge-induced into the d-th
//! relaxed hardware graph, then at the window's first layer some gate
//! pair must sit more than d+1 apart, forcing the pair to travel at
//! least d+1 hops inside the window — and the cycle structure of the
//! permutation doubles that for the movement of all tokens. Each window
//! yields the cut for the largest d whose embedding provably fails.

use std::time::{Duration, Instant};

use crate::graph::{
    connectivity_graph, edge_induced_subgraph_isomorphic, Graph, SgiOutcome, DEFAULT_SGI_BUDGET,
};

use super::TapInstance;

/// One valid inequality over a layer window `[t0, t1]` (1-based,
/// inclusive): the tokens in `tokens` travel at least `d + 1` hops over
/// the window's transitions, and all tokens together at least
/// `2 (d + 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SgiCut {
    pub t0: usize,
    pub t1: usize,
    /// Tokens of the window's gates, ascending.
    pub tokens: Vec<usize>,
    /// Largest relaxation level whose embedding fails.
    pub d: u32,
}

impl SgiCut {
    pub fn rhs_restricted(&self) -> u64 {
        self.d as u64 + 1
    }

    pub fn rhs_all(&self) -> u64 {
        2 * (self.d as u64 + 1)
    }
}

/// Enumerates windows by increasing width until the wall-clock budget is
/// spent; windows that embed at relaxation level 0 produce no cut.
pub fn generate_sgi_cuts(instance: &TapInstance, budget: Duration) -> Vec<SgiCut> {
    let num_layers = instance.layers.len();
    let mut cuts = Vec::new();
    if num_layers < 2 || budget.is_zero() {
        return cuts;
    }
    let deadline = Instant::now() + budget;
    let diameter = instance.graph.diameter();
    let mut relaxed: Vec<Option<Graph>> = vec![None; diameter.max(1) as usize];

    'windows: for width in 2..=num_layers {
        for t0 in 1..=num_layers - width + 1 {
            if Instant::now() >= deadline {
                break 'windows;
            }
            let t1 = t0 + width - 1;
            let pairs: Vec<(usize, usize)> = instance.layers[t0 - 1..t1].concat();
            let conn = connectivity_graph(&pairs)
                .expect("instance layers contain no self-pairs");
            let mut best: Option<u32> = None;
            for d in 0..diameter {
                let host = relaxed[d as usize]
                    .get_or_insert_with(|| Graph::from(&instance.graph.relaxed(d)));
                match edge_induced_subgraph_isomorphic(&conn.graph, host, DEFAULT_SGI_BUDGET) {
                    SgiOutcome::NotEmbeds => best = Some(d),
                    // An undecided check must not certify a cut.
                    SgiOutcome::Embeds | SgiOutcome::Undecided => break,
                }
                if Instant::now() >= deadline {
                    break;
                }
            }
            if let Some(d) = best {
                cuts.push(SgiCut { t0, t1, tokens: conn.tokens, d });
            }
        }
    }
    cuts
}
