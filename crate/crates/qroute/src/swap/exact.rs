//! Exact token swapping by best-first search over the Cayley graph of
//! allocations, where two allocations are adjacent when one hardware-edge
//! transposition maps between them.
//!
//! Nodes carry `g` (swaps so far) and the admissible heuristic `h` from
//! [`super::combined_lower_bound`]. The incumbent upper bound starts from
//! the approximation at the root and is refreshed from any expanded node
//! whose heuristic dropped below its parent's; search stops as soon as
//! the smallest `f = g + h` in the frontier reaches the incumbent, which
//! proves the incumbent optimal.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::time::{Duration, Instant};

use crate::graph::HardwareGraph;
use crate::tap::Allocation;

use super::{approx_solve, candidate_independent_sets, combined_lower_bound, SwapSequence};

#[derive(Debug, Clone, Copy, Default)]
pub struct ExactLimits {
    pub time_limit: Option<Duration>,
    pub max_nodes: Option<usize>,
}

/// Result of [`exact_solve`]: the sequence is optimal unless a limit
/// expired, in which case `proven_lower_bound` records how far the proof
/// got.
#[derive(Debug, Clone)]
pub struct SwapSolveOutcome {
    pub sequence: SwapSequence,
    pub optimal: bool,
    pub proven_lower_bound: u32,
}

struct Node {
    alloc: Allocation,
    parent: Option<(usize, (usize, usize))>,
    g: u32,
    h: u32,
}

pub fn exact_solve(
    graph: &HardwareGraph,
    start: &Allocation,
    target: &Allocation,
    limits: ExactLimits,
) -> SwapSolveOutcome {
    let deadline = limits.time_limit.map(|d| Instant::now() + d);
    let sets = candidate_independent_sets(graph, 0x5eed);

    let mut incumbent = approx_solve(graph, start, target);
    let mut incumbent_len = incumbent.len() as u32;

    let root_h = combined_lower_bound(graph, start, target, &sets);
    let mut nodes = vec![Node { alloc: start.clone(), parent: None, g: 0, h: root_h }];
    let mut best_g: HashMap<Box<[u16]>, u32> = HashMap::new();
    best_g.insert(pack(start), 0);

    // Min-heap on (f, h, insertion order): equal f prefers deeper nodes.
    let mut open: BinaryHeap<Reverse<(u32, u32, u64, usize)>> = BinaryHeap::new();
    open.push(Reverse((root_h, root_h, 0, 0)));
    let mut pushes = 0u64;
    let mut expanded = 0usize;

    while let Some(Reverse((f, _, _, idx))) = open.pop() {
        if f >= incumbent_len {
            // Every remaining completion costs at least f.
            return SwapSolveOutcome {
                sequence: incumbent,
                optimal: true,
                proven_lower_bound: incumbent_len,
            };
        }
        let (g, h) = (nodes[idx].g, nodes[idx].h);
        if best_g.get(&pack(&nodes[idx].alloc)).copied() != Some(g) {
            continue; // stale heap entry
        }
        if nodes[idx].alloc == *target {
            let sequence = SwapSequence::new(path_to(&nodes, idx));
            return SwapSolveOutcome { sequence, optimal: true, proven_lower_bound: g };
        }

        let over_nodes = limits.max_nodes.is_some_and(|m| expanded >= m);
        let over_time = deadline.is_some_and(|d| Instant::now() >= d);
        if over_nodes || over_time {
            return SwapSolveOutcome {
                sequence: incumbent,
                optimal: false,
                proven_lower_bound: f,
            };
        }
        expanded += 1;

        for &(u, v) in graph.edges() {
            let mut child = nodes[idx].alloc.clone();
            child.swap_vertices(u, v);
            let child_g = g + 1;
            let key = pack(&child);
            if best_g.get(&key).is_some_and(|&known| known <= child_g) {
                continue;
            }
            best_g.insert(key, child_g);

            let child_h = combined_lower_bound(graph, &child, target, &sets);
            if child_h < h {
                // Heuristic dropped: refresh the incumbent from here.
                let completion = approx_solve(graph, &child, target);
                let total = child_g + completion.len() as u32;
                if total < incumbent_len {
                    let mut swaps = path_to(&nodes, idx);
                    swaps.push((u, v));
                    swaps.extend_from_slice(&completion.swaps);
                    incumbent = SwapSequence::new(swaps);
                    incumbent_len = total;
                }
            }

            let child_f = child_g + child_h;
            if child_f >= incumbent_len {
                continue;
            }
            nodes.push(Node { alloc: child, parent: Some((idx, (u, v))), g: child_g, h: child_h });
            pushes += 1;
            open.push(Reverse((child_f, child_h, pushes, nodes.len() - 1)));
        }
    }

    // Frontier exhausted without beating the incumbent.
    SwapSolveOutcome { sequence: incumbent, optimal: true, proven_lower_bound: incumbent_len }
}

fn pack(a: &Allocation) -> Box<[u16]> {
    a.to_vertex_slice().iter().map(|&v| v as u16).collect()
}

fn path_to(nodes: &[Node], mut idx: usize) -> Vec<(usize, usize)> {
    let mut swaps = Vec::new();
    while let Some((parent, swap)) = nodes[idx].parent {
        swaps.push(swap);
        idx = parent;
    }
    swaps.reverse();
    swaps
}
