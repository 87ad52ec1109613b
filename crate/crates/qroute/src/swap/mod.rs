//! Token swapping solvers.
//!
//! An instance is a hardware graph together with a start and a target
//! allocation over the same tokens. A solution is an ordered list of edge
//! transpositions that, applied to the start allocation in list order,
//! produces the target allocation.

mod approx;
mod bounds;
mod exact;

pub use approx::{approx_solve, approx_solve_original};
pub use bounds::{
    blocking_lower_bound, candidate_independent_sets, combined_lower_bound,
    distance_lower_bound, parity_adjust, split_graph_lower_bound,
};
pub use exact::{exact_solve, ExactLimits, SwapSolveOutcome};

use std::collections::{HashSet, VecDeque};

use crate::graph::HardwareGraph;
use crate::tap::Allocation;
use crate::{Error, Result};

/// Ordered swap list plus its parallel depth under greedy scheduling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapSequence {
    pub swaps: Vec<(usize, usize)>,
    pub depth: usize,
}

impl SwapSequence {
    pub fn new(swaps: Vec<(usize, usize)>) -> Self {
        let depth = schedule_depth(&swaps);
        Self { swaps, depth }
    }

    pub fn empty() -> Self {
        Self { swaps: Vec::new(), depth: 0 }
    }

    pub fn len(&self) -> usize {
        self.swaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.swaps.is_empty()
    }
}

/// Greedy list scheduling: each swap lands in the earliest layer after
/// the last layer touching either of its vertices.
pub fn schedule_depth(swaps: &[(usize, usize)]) -> usize {
    let mut busy: Vec<usize> = Vec::new();
    let mut depth = 0;
    for &(u, v) in swaps {
        let top = u.max(v);
        if top >= busy.len() {
            busy.resize(top + 1, 0);
        }
        let layer = busy[u].max(busy[v]) + 1;
        busy[u] = layer;
        busy[v] = layer;
        depth = depth.max(layer);
    }
    depth
}

/// Applies the swaps in order, exchanging the tokens at the two vertices
/// of each swap.
pub fn apply_swaps(alloc: &Allocation, swaps: &[(usize, usize)]) -> Allocation {
    let mut out = alloc.clone();
    for &(u, v) in swaps {
        out.swap_vertices(u, v);
    }
    out
}

/// Like [`apply_swaps`] but rejects swaps that are not hardware edges.
pub fn apply_swaps_checked(
    graph: &HardwareGraph,
    alloc: &Allocation,
    swaps: &[(usize, usize)],
) -> Result<Allocation> {
    let mut out = alloc.clone();
    for &(u, v) in swaps {
        if !graph.has_edge(u, v) {
            return Err(Error::InvalidEdge(u, v, "swap on a non-edge"));
        }
        out.swap_vertices(u, v);
    }
    Ok(out)
}

const BRUTE_FORCE_GUARD: usize = 8;

/// Optimal swap count by breadth-first search over all allocations.
/// Guarded to small graphs; this is the test oracle, not a solver.
pub fn brute_force_opt(
    graph: &HardwareGraph,
    start: &Allocation,
    target: &Allocation,
) -> Result<u32> {
    let n = graph.num_vertices();
    if n > BRUTE_FORCE_GUARD {
        return Err(Error::BruteForceGuard { n, guard: BRUTE_FORCE_GUARD });
    }
    let pack = |a: &[usize]| -> Vec<u8> { a.iter().map(|&v| v as u8).collect() };
    let goal = pack(start_to_vertex(target));
    let mut cur = pack(start_to_vertex(start));
    if cur == goal {
        return Ok(0);
    }
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    seen.insert(cur.clone());
    let mut queue = VecDeque::new();
    queue.push_back((std::mem::take(&mut cur), 0u32));
    while let Some((state, d)) = queue.pop_front() {
        for &(u, v) in graph.edges() {
            let mut next = state.clone();
            // Exchange the tokens at vertices u and v.
            let (pu, pv) = token_positions(&next, u as u8, v as u8);
            next.swap(pu, pv);
            if next == goal {
                return Ok(d + 1);
            }
            if seen.insert(next.clone()) {
                queue.push_back((next, d + 1));
            }
        }
    }
    unreachable!("swap moves generate the full symmetric group on a connected graph")
}

fn start_to_vertex(a: &Allocation) -> &[usize] {
    a.to_vertex_slice()
}

fn token_positions(state: &[u8], u: u8, v: u8) -> (usize, usize) {
    let mut pu = usize::MAX;
    let mut pv = usize::MAX;
    for (idx, &vertex) in state.iter().enumerate() {
        if vertex == u {
            pu = idx;
        } else if vertex == v {
            pv = idx;
        }
    }
    (pu, pv)
}

/// Parsed form of a swap-instance file: a graph reference (path or
/// preset) plus start and target allocation lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapInstanceFile {
    pub graph_ref: String,
    pub start: Vec<usize>,
    pub target: Vec<usize>,
}

impl SwapInstanceFile {
    /// Format:
    ///
    /// ```text
    /// graph: ring8.g
    /// start: 0:1 1:0 2:2 ...
    /// target: 0:0 1:1 2:2 ...
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut graph_ref = None;
        let mut start = None;
        let mut target = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line: idx + 1, msg };
            let (key, rest) = line
                .split_once(':')
                .ok_or_else(|| err("expected `key: value`".into()))?;
            match key.trim() {
                "graph" => graph_ref = Some(rest.trim().to_string()),
                "start" => start = Some(parse_allocation_pairs(rest, idx + 1)?),
                "target" => target = Some(parse_allocation_pairs(rest, idx + 1)?),
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        Ok(Self {
            graph_ref: graph_ref
                .ok_or_else(|| Error::InvalidInput("missing `graph:` line".into()))?,
            start: start.ok_or_else(|| Error::InvalidInput("missing `start:` line".into()))?,
            target: target.ok_or_else(|| Error::InvalidInput("missing `target:` line".into()))?,
        })
    }
}

/// Parses `token:vertex` pairs into a dense token-to-vertex table.
pub fn parse_allocation_pairs(text: &str, line: usize) -> Result<Vec<usize>> {
    let err = |msg: String| Error::Parse { line, msg };
    let mut entries = Vec::new();
    for field in text.split_whitespace() {
        let (t, v) = field
            .split_once(':')
            .ok_or_else(|| err(format!("expected `token:vertex`, found `{field}`")))?;
        let t: usize = t.parse().map_err(|_| err(format!("bad token id `{t}`")))?;
        let v: usize = v.parse().map_err(|_| err(format!("bad vertex id `{v}`")))?;
        entries.push((t, v));
    }
    let n = entries.len();
    let mut to_vertex = vec![usize::MAX; n];
    for (t, v) in entries {
        if t >= n {
            return Err(err(format!("token {t} out of range for {n} entries")));
        }
        if to_vertex[t] != usize::MAX {
            return Err(err(format!("token {t} assigned twice")));
        }
        to_vertex[t] = v;
    }
    Ok(to_vertex)
}
