//! The token allocation problem: one allocation per layer such that every
//! gate pair of the layer sits on a hardware edge, minimizing the summed
//! hop distance all tokens travel between consecutive allocations.
//!
//! Costs are kept as doubled integers (the movement sum) so the
//! half-integral objective needs no floating point. The solver runs a
//! best-first search over the layered graph whose stage-t nodes are the
//! feasible allocations of layer t; subgraph isomorphism cuts provide
//! admissible lower bounds on the remaining cost for pruning.

mod cuts;
mod ilp;

pub use cuts::{generate_sgi_cuts, SgiCut};
pub use ilp::{build_model, symmetric_fractional_solution, IlpModel, LinConstraint, Sense, VarKey};

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use crate::circuit::{layer_gates, Circuit};
use crate::graph::HardwareGraph;
use crate::{Error, Result};

/// Bijection between tokens and vertices, stored in both directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation {
    to_vertex: Vec<usize>,
    to_token: Vec<usize>,
}

impl std::hash::Hash for Allocation {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.to_vertex.hash(state);
    }
}

impl Allocation {
    pub fn from_to_vertex(to_vertex: Vec<usize>) -> Result<Self> {
        let n = to_vertex.len();
        let mut to_token = vec![usize::MAX; n];
        for (token, &vertex) in to_vertex.iter().enumerate() {
            if vertex >= n {
                return Err(Error::InvalidInput(format!(
                    "vertex {vertex} out of range in allocation of size {n}"
                )));
            }
            if to_token[vertex] != usize::MAX {
                return Err(Error::InvalidInput(format!(
                    "allocation is not a bijection: vertex {vertex} taken twice"
                )));
            }
            to_token[vertex] = token;
        }
        Ok(Self { to_vertex, to_token })
    }

    pub(crate) fn from_to_vertex_unchecked(to_vertex: Vec<usize>) -> Self {
        let mut to_token = vec![usize::MAX; to_vertex.len()];
        for (token, &vertex) in to_vertex.iter().enumerate() {
            to_token[vertex] = token;
        }
        Self { to_vertex, to_token }
    }

    pub fn identity(n: usize) -> Self {
        Self { to_vertex: (0..n).collect(), to_token: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.to_vertex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.to_vertex.is_empty()
    }

    #[inline]
    pub fn vertex_of(&self, token: usize) -> usize {
        self.to_vertex[token]
    }

    #[inline]
    pub fn token_at(&self, vertex: usize) -> usize {
        self.to_token[vertex]
    }

    pub fn to_vertex_slice(&self) -> &[usize] {
        &self.to_vertex
    }

    pub fn to_token_slice(&self) -> &[usize] {
        &self.to_token
    }

    /// Exchanges the tokens at two vertices.
    pub fn swap_vertices(&mut self, u: usize, v: usize) {
        let p = self.to_token[u];
        let q = self.to_token[v];
        self.to_token.swap(u, v);
        self.to_vertex[p] = v;
        self.to_vertex[q] = u;
    }

    /// Total hop distance all tokens travel from `self` to `other`.
    pub fn movement(&self, other: &Allocation, graph: &HardwareGraph) -> u64 {
        (0..self.len())
            .map(|q| graph.dist(self.to_vertex[q], other.to_vertex[q]) as u64)
            .sum()
    }
}

#[derive(Debug, Clone)]
pub struct TapOptions {
    /// Maximum hops a token may move per transition; arcs violating it
    /// are discarded.
    pub distance_limit: Option<u32>,
    /// Enumerate only tokens that participate in gates; the remaining
    /// tokens are frozen on a fixed vertex subset for all time steps.
    pub active_only: bool,
    pub time_limit: Option<Duration>,
    /// Wall-clock budget for cut generation before the solve.
    pub cut_budget: Duration,
    /// Heuristic mode: keep only this many states per stage. The result
    /// is flagged non-optimal.
    pub beam_width: Option<usize>,
}

impl Default for TapOptions {
    fn default() -> Self {
        Self {
            distance_limit: None,
            active_only: false,
            time_limit: None,
            cut_budget: Duration::from_secs(10),
            beam_width: None,
        }
    }
}

/// A token allocation problem: hardware graph, token set padded to the
/// vertex count, and the layered gate pairs.
#[derive(Debug, Clone)]
pub struct TapInstance {
    pub graph: HardwareGraph,
    /// Token count of the originating circuit, before padding.
    pub circuit_tokens: usize,
    pub layers: Vec<Vec<(usize, usize)>>,
    pub options: TapOptions,
}

impl TapInstance {
    pub fn new(
        graph: HardwareGraph,
        circuit_tokens: usize,
        layers: Vec<Vec<(usize, usize)>>,
        options: TapOptions,
    ) -> Result<Self> {
        let n = graph.num_vertices();
        if circuit_tokens > n {
            return Err(Error::TooManyTokens { tokens: circuit_tokens, vertices: n });
        }
        for (t, layer) in layers.iter().enumerate() {
            let mut seen = vec![false; n];
            for &(p, q) in layer {
                if p == q {
                    return Err(Error::SelfPair(p));
                }
                if p >= circuit_tokens || q >= circuit_tokens {
                    return Err(Error::InvalidInput(format!(
                        "layer {} uses token pair ({p}, {q}) outside the circuit's {} tokens",
                        t + 1,
                        circuit_tokens
                    )));
                }
                if seen[p] || seen[q] {
                    return Err(Error::InvalidInput(format!(
                        "layer {} pairs are not vertex-disjoint",
                        t + 1
                    )));
                }
                seen[p] = true;
                seen[q] = true;
            }
        }
        Ok(Self { graph, circuit_tokens, layers, options })
    }

    pub fn from_circuit(
        graph: HardwareGraph,
        circuit: &Circuit,
        options: TapOptions,
    ) -> Result<Self> {
        let layers = layer_gates(circuit).layers;
        Self::new(graph, circuit.num_tokens, layers, options)
    }

    /// Total token count after padding: one per vertex.
    pub fn num_tokens(&self) -> usize {
        self.graph.num_vertices()
    }

    /// Tokens participating in at least one gate pair.
    pub fn active_tokens(&self) -> Vec<bool> {
        let mut active = vec![false; self.num_tokens()];
        for layer in &self.layers {
            for &(p, q) in layer {
                active[p] = true;
                active[q] = true;
            }
        }
        active
    }
}

/// Vertex restriction used by `active_only` mode: inactive tokens are
/// pinned, active tokens only range over the remaining vertices.
#[derive(Debug, Clone, Default)]
pub struct Freeze {
    /// Vertices available to enumerated tokens.
    pub allowed: Vec<bool>,
    /// Fixed `(token, vertex)` assignments.
    pub pinned: Vec<(usize, usize)>,
}

enum Slot {
    Pair(usize, usize),
    Free(usize),
}

/// Lazy backtracking enumeration of the feasible allocations of one
/// layer: gate endpoints are assigned to directed hardware edges first,
/// then the remaining tokens fill the remaining vertices in ascending
/// order. Yields every feasible bijection exactly once.
pub struct FeasibleAllocations {
    slots: Vec<Slot>,
    pair_cands: Vec<(usize, usize)>,
    free_cands: Vec<usize>,
    assignment: Vec<usize>,
    used: Vec<bool>,
    cursor: Vec<usize>,
    depth: usize,
    complete: bool,
    done: bool,
}

/// Enumerates feasible allocations of `layer` on `graph`, honoring an
/// optional vertex freeze.
pub fn feasible_allocations(
    graph: &HardwareGraph,
    layer: &[(usize, usize)],
    freeze: Option<&Freeze>,
) -> FeasibleAllocations {
    let n = graph.num_vertices();
    let default_allowed = vec![true; n];
    let (allowed, pinned): (&[bool], &[(usize, usize)]) = match freeze {
        Some(f) => (&f.allowed, &f.pinned),
        None => (&default_allowed, &[]),
    };

    let mut assignment = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut in_slot = vec![false; n];
    for &(token, vertex) in pinned {
        assignment[token] = vertex;
        used[vertex] = true;
        in_slot[token] = true;
    }

    let mut slots = Vec::new();
    for &(p, q) in layer {
        slots.push(Slot::Pair(p, q));
        in_slot[p] = true;
        in_slot[q] = true;
    }
    slots.extend(
        in_slot
            .iter()
            .enumerate()
            .filter(|(_, &taken)| !taken)
            .map(|(token, _)| Slot::Free(token)),
    );

    let mut pair_cands = Vec::new();
    for &(u, v) in graph.edges() {
        if allowed[u] && allowed[v] {
            pair_cands.push((u, v));
            pair_cands.push((v, u));
        }
    }
    let free_cands: Vec<usize> = (0..n).filter(|&v| allowed[v] && !used[v]).collect();

    let num_slots = slots.len();
    FeasibleAllocations {
        slots,
        pair_cands,
        free_cands,
        assignment,
        used,
        cursor: vec![0; num_slots + 1],
        depth: 0,
        complete: false,
        done: false,
    }
}

impl FeasibleAllocations {
    fn candidate_count(&self, depth: usize) -> usize {
        match self.slots[depth] {
            Slot::Pair(..) => self.pair_cands.len(),
            Slot::Free(_) => self.free_cands.len(),
        }
    }

    /// Applies the candidate at `cursor[depth]` if it is available.
    fn try_apply(&mut self, depth: usize) -> bool {
        let cand = self.cursor[depth];
        match self.slots[depth] {
            Slot::Pair(p, q) => {
                let (u, v) = self.pair_cands[cand];
                if self.used[u] || self.used[v] {
                    return false;
                }
                self.assignment[p] = u;
                self.assignment[q] = v;
                self.used[u] = true;
                self.used[v] = true;
                true
            }
            Slot::Free(token) => {
                let v = self.free_cands[cand];
                if self.used[v] {
                    return false;
                }
                self.assignment[token] = v;
                self.used[v] = true;
                true
            }
        }
    }

    fn unapply(&mut self, depth: usize) {
        let cand = self.cursor[depth];
        match self.slots[depth] {
            Slot::Pair(p, q) => {
                let (u, v) = self.pair_cands[cand];
                self.assignment[p] = usize::MAX;
                self.assignment[q] = usize::MAX;
                self.used[u] = false;
                self.used[v] = false;
            }
            Slot::Free(token) => {
                let v = self.free_cands[cand];
                self.assignment[token] = usize::MAX;
                self.used[v] = false;
            }
        }
    }

    fn backtrack(&mut self) -> bool {
        if self.depth == 0 {
            return false;
        }
        self.depth -= 1;
        self.unapply(self.depth);
        self.cursor[self.depth] += 1;
        true
    }
}

impl Iterator for FeasibleAllocations {
    type Item = Allocation;

    fn next(&mut self) -> Option<Allocation> {
        if self.done {
            return None;
        }
        if self.complete {
            self.complete = false;
            if self.slots.is_empty() || !self.backtrack() {
                self.done = true;
                return None;
            }
        }
        loop {
            if self.depth == self.slots.len() {
                self.complete = true;
                return Some(Allocation::from_to_vertex_unchecked(self.assignment.clone()));
            }
            if self.cursor[self.depth] < self.candidate_count(self.depth) {
                if self.try_apply(self.depth) {
                    self.depth += 1;
                    self.cursor[self.depth] = 0;
                } else {
                    self.cursor[self.depth] += 1;
                }
            } else if !self.backtrack() {
                self.done = true;
                return None;
            }
        }
    }
}

/// Allocation sequence with its doubled cost (total movement). The cost
/// itself may be half-integral.
#[derive(Debug, Clone)]
pub struct TapSolution {
    pub allocations: Vec<Allocation>,
    pub doubled_cost: u64,
    pub optimal: bool,
    /// Best proven doubled-cost lower bound; equals `doubled_cost` when
    /// optimal.
    pub lower_bound_doubled: u64,
    /// The time limit expired and the result is a greedy completion.
    pub timed_out: bool,
}

impl TapSolution {
    pub fn cost(&self) -> f64 {
        self.doubled_cost as f64 / 2.0
    }

    /// Ceiling of the cost: a lower bound on the swaps of any routing.
    pub fn lower_bound_on_swaps(&self) -> u64 {
        self.doubled_cost.div_ceil(2)
    }
}

/// Computes the frozen vertex subset for `active_only` mode from a
/// greedy placement of the active tokens in the first layer.
fn compute_freeze(instance: &TapInstance) -> Result<Option<Freeze>> {
    if !instance.options.active_only || instance.layers.is_empty() {
        return Ok(None);
    }
    let n = instance.num_tokens();
    let active = instance.active_tokens();
    let seed = feasible_allocations(&instance.graph, &instance.layers[0], None)
        .next()
        .ok_or(Error::InfeasibleLayer(1))?;
    let mut allowed = vec![false; n];
    for token in 0..n {
        if active[token] {
            allowed[seed.vertex_of(token)] = true;
        }
    }
    let pinned: Vec<(usize, usize)> = (0..n)
        .filter(|&t| !active[t])
        .map(|t| (t, seed.vertex_of(t)))
        .collect();
    Ok(Some(Freeze { allowed, pinned }))
}

/// Movement cost of a transition, or `None` when a token would exceed
/// the per-transition distance limit.
fn transition_cost(
    graph: &HardwareGraph,
    from: &Allocation,
    to: &Allocation,
    limit: Option<u32>,
) -> Option<u64> {
    let mut total = 0u64;
    for q in 0..from.len() {
        let d = graph.dist(from.vertex_of(q), to.vertex_of(q));
        if limit.is_some_and(|l| d > l) {
            return None;
        }
        total += d as u64;
    }
    Some(total)
}

/// Exact solve by best-first search over stages; see the module docs.
/// With a `beam_width` the search degrades to a truncated stage sweep and
/// the result is flagged non-optimal.
pub fn solve_tap(instance: &TapInstance) -> Result<TapSolution> {
    let num_layers = instance.layers.len();
    if num_layers == 0 {
        return Ok(TapSolution {
            allocations: Vec::new(),
            doubled_cost: 0,
            optimal: true,
            lower_bound_doubled: 0,
            timed_out: false,
        });
    }
    let freeze = compute_freeze(instance)?;
    let enumerate = |layer_idx: usize| -> FeasibleAllocations {
        feasible_allocations(&instance.graph, &instance.layers[layer_idx], freeze.as_ref())
    };

    if num_layers == 1 {
        let first = enumerate(0).next().ok_or(Error::InfeasibleLayer(1))?;
        return Ok(TapSolution {
            allocations: vec![first],
            doubled_cost: 0,
            optimal: true,
            lower_bound_doubled: 0,
            timed_out: false,
        });
    }

    if let Some(width) = instance.options.beam_width {
        return beam_solve(instance, &freeze, width);
    }

    let cuts = if instance.options.cut_budget.is_zero() {
        Vec::new()
    } else {
        generate_sgi_cuts(instance, instance.options.cut_budget)
    };
    let future_bound = future_bounds(&cuts, num_layers);

    let deadline = instance.options.time_limit.map(|d| Instant::now() + d);
    let limit = instance.options.distance_limit;

    let mut stages: Vec<Option<Vec<Allocation>>> = (0..num_layers).map(|_| None).collect();
    let mut dist: Vec<Vec<u64>> = vec![Vec::new(); num_layers];
    let mut parent: Vec<Vec<u32>> = vec![Vec::new(); num_layers];
    let mut closed: Vec<Vec<bool>> = vec![Vec::new(); num_layers];

    let materialize = |s: usize,
                           stages: &mut Vec<Option<Vec<Allocation>>>,
                           dist: &mut Vec<Vec<u64>>,
                           parent: &mut Vec<Vec<u32>>,
                           closed: &mut Vec<Vec<bool>>|
     -> Result<()> {
        if stages[s].is_none() {
            let allocs: Vec<Allocation> = enumerate(s).collect();
            if allocs.is_empty() {
                return Err(Error::InfeasibleLayer(s + 1));
            }
            dist[s] = vec![u64::MAX; allocs.len()];
            parent[s] = vec![u32::MAX; allocs.len()];
            closed[s] = vec![false; allocs.len()];
            stages[s] = Some(allocs);
        }
        Ok(())
    };

    // Min-heap over (f, stage-from-end, order): ties prefer deeper stages.
    let mut open: BinaryHeap<Reverse<(u64, usize, u64, u32)>> = BinaryHeap::new();
    let mut pushes = 0u64;

    materialize(0, &mut stages, &mut dist, &mut parent, &mut closed)?;
    for (i, g) in dist[0].iter_mut().enumerate() {
        *g = 0;
        open.push(Reverse((future_bound[0], num_layers, pushes, i as u32)));
        pushes += 1;
    }

    while let Some(Reverse((f, stage_from_end, _, idx))) = open.pop() {
        let s = num_layers - stage_from_end;
        let i = idx as usize;
        let g = dist[s][i];
        if g == u64::MAX || g + future_bound[s] != f || closed[s][i] {
            continue;
        }
        if s == num_layers - 1 {
            let allocations = reconstruct(&stages, &parent, s, i);
            return Ok(TapSolution {
                allocations,
                doubled_cost: g,
                optimal: true,
                lower_bound_doubled: g,
                timed_out: false,
            });
        }
        if deadline.is_some_and(|d| Instant::now() >= d) {
            return finish_after_timeout(instance, &freeze, &stages, &parent, s, i, g, f);
        }
        closed[s][i] = true;

        materialize(s + 1, &mut stages, &mut dist, &mut parent, &mut closed)?;
        let (head, tail) = stages.split_at(s + 1);
        let from = &head[s].as_ref().unwrap()[i];
        let succs = tail[0].as_ref().unwrap();
        for (j, to) in succs.iter().enumerate() {
            let Some(w) = transition_cost(&instance.graph, from, to, limit) else {
                continue;
            };
            let nd = g + w;
            if nd < dist[s + 1][j] {
                dist[s + 1][j] = nd;
                parent[s + 1][j] = i as u32;
                closed[s + 1][j] = false;
                open.push(Reverse((
                    nd + future_bound[s + 1],
                    num_layers - (s + 1),
                    pushes,
                    j as u32,
                )));
                pushes += 1;
            }
        }
    }

    // Without a distance limit every transition has finite cost, so the
    // final stage is reachable; with one, the layered graph may be cut.
    let first_unreached = (0..num_layers)
        .find(|&s| dist[s].is_empty() || dist[s].iter().all(|&g| g == u64::MAX))
        .unwrap_or(num_layers - 1);
    Err(Error::DistanceLimitInfeasible(first_unreached + 1))
}

/// Greedy completion used when the time limit expires: extend the best
/// popped state by locally cheapest transitions.
#[allow(clippy::too_many_arguments)]
fn finish_after_timeout(
    instance: &TapInstance,
    freeze: &Option<Freeze>,
    stages: &[Option<Vec<Allocation>>],
    parent: &[Vec<u32>],
    s: usize,
    i: usize,
    g: u64,
    proven: u64,
) -> Result<TapSolution> {
    let mut allocations = reconstruct(stages, parent, s, i);
    let mut doubled = g;
    for layer in s + 1..instance.layers.len() {
        let cur = allocations.last().unwrap();
        let mut best: Option<(u64, Allocation)> = None;
        for cand in feasible_allocations(&instance.graph, &instance.layers[layer], freeze.as_ref())
        {
            // The limit is ignored here: a feasible completion matters
            // more than respecting the pruning option after timeout.
            let w = transition_cost(&instance.graph, cur, &cand, None).unwrap();
            if best.as_ref().is_none_or(|(bw, _)| w < *bw) {
                best = Some((w, cand));
            }
        }
        let (w, next) = best.ok_or(Error::InfeasibleLayer(layer + 1))?;
        doubled += w;
        allocations.push(next);
    }
    Ok(TapSolution {
        allocations,
        doubled_cost: doubled,
        optimal: false,
        lower_bound_doubled: proven,
        timed_out: true,
    })
}

fn reconstruct(
    stages: &[Option<Vec<Allocation>>],
    parent: &[Vec<u32>],
    mut s: usize,
    mut i: usize,
) -> Vec<Allocation> {
    let mut out = Vec::with_capacity(s + 1);
    loop {
        out.push(stages[s].as_ref().unwrap()[i].clone());
        if s == 0 {
            break;
        }
        i = parent[s][i] as usize;
        s -= 1;
    }
    out.reverse();
    out
}

/// `future_bound[s]` is an admissible lower bound on the doubled cost of
/// transitions `s..L-1`: the best total RHS of non-overlapping cut
/// windows lying entirely in that range.
fn future_bounds(cuts: &[SgiCut], num_layers: usize) -> Vec<u64> {
    let mut bound = vec![0u64; num_layers + 1];
    for s in (0..num_layers).rev() {
        bound[s] = bound[s + 1];
        for cut in cuts {
            // 1-based window [t0, t1] covers 0-based transitions
            // t0-1 .. t1-2.
            if cut.t0 - 1 == s {
                bound[s] = bound[s].max(cut.rhs_all() + bound[cut.t1 - 1]);
            }
        }
    }
    bound
}

/// Truncated stage sweep: keep the `width` cheapest states per stage.
fn beam_solve(
    instance: &TapInstance,
    freeze: &Option<Freeze>,
    width: usize,
) -> Result<TapSolution> {
    let width = width.max(1);
    let limit = instance.options.distance_limit;
    let mut states: Vec<(u64, Vec<Allocation>)> =
        feasible_allocations(&instance.graph, &instance.layers[0], freeze.as_ref())
            .take(width)
            .map(|a| (0u64, vec![a]))
            .collect();
    if states.is_empty() {
        return Err(Error::InfeasibleLayer(1));
    }
    for layer in 1..instance.layers.len() {
        let mut next: Vec<(u64, Vec<Allocation>)> = Vec::new();
        for cand in feasible_allocations(&instance.graph, &instance.layers[layer], freeze.as_ref())
        {
            let best = states
                .iter()
                .filter_map(|(g, path)| {
                    transition_cost(&instance.graph, path.last().unwrap(), &cand, limit)
                        .map(|w| (g + w, path))
                })
                .min_by_key(|(g, _)| *g);
            if let Some((g, path)) = best {
                let mut path = path.clone();
                path.push(cand);
                next.push((g, path));
                if next.len() >= 4 * width {
                    next.sort_by_key(|a| a.0);
                    next.truncate(width);
                }
            }
        }
        if next.is_empty() {
            return Err(Error::InfeasibleLayer(layer + 1));
        }
        next.sort_by_key(|a| a.0);
        next.truncate(width);
        states = next;
    }
    let (doubled_cost, allocations) = states.into_iter().min_by_key(|(g, _)| *g).unwrap();
    Ok(TapSolution { allocations, doubled_cost, optimal: false, lower_bound_doubled: 0, timed_out: false })
}

#[cfg(test)]
mod tests;
