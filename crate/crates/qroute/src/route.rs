//! End-to-end routing pass: layer the circuit, solve the token
//! allocation problem, realize each transition between consecutive
//! allocations with swaps, and assemble the retargeted output stream.
//!
//! [`verify_routed`] replays the output independently of how it was
//! assembled: it tracks the token permutation through the stream, checks
//! hardware adjacency of every two-qubit operation, and confirms that
//! the logical gates appear in a dependency-respecting order.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::circuit::{compute_metrics, layer_gates, Circuit, Gate, RoutingMetrics};
use crate::graph::HardwareGraph;
use crate::swap::{
    approx_solve, candidate_independent_sets, combined_lower_bound, exact_solve, ExactLimits,
    SwapSequence,
};
use crate::tap::{solve_tap, Allocation, TapInstance, TapOptions, TapSolution};
use crate::{Error, Result};

/// One element of the routed output stream, on physical vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RoutedOp {
    One { vertex: usize, label: String, origin: usize },
    Two { a: usize, b: usize, label: String, origin: usize },
    Swap { a: usize, b: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Heuristic,
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolveStatus::Optimal => write!(f, "optimal"),
            SolveStatus::Heuristic => write!(f, "heuristic"),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RouteOptions {
    pub tap: TapOptions,
    /// Solve each transition exactly instead of by approximation.
    pub exact_swaps: bool,
    pub swap_limits: ExactLimits,
}

#[derive(Debug, Clone)]
pub struct RoutedCircuit {
    pub initial_allocation: Allocation,
    pub stream: Vec<RoutedOp>,
    pub per_transition_swaps: Vec<SwapSequence>,
    pub allocations: Vec<Allocation>,
    pub metrics: RoutingMetrics,
    /// Optimal means: allocation cost proven minimal and every
    /// transition's swap count proven minimal.
    pub status: SolveStatus,
    /// A time or node limit expired somewhere; the result is a valid
    /// routing but carries no optimality claim.
    pub limit_expired: bool,
    pub tap_doubled_cost: u64,
}

impl RoutedCircuit {
    pub fn swaps_added(&self) -> usize {
        self.metrics.swaps_added
    }

    /// Routed-circuit text: the circuit grammar over physical indices,
    /// a `swap u v` line per inserted swap, and an `alloc` header with
    /// the initial token placement.
    pub fn to_text(&self, num_vertices: usize, circuit_tokens: usize) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "q {num_vertices}");
        let pairs: Vec<String> = (0..circuit_tokens)
            .map(|t| format!("{t}:{}", self.initial_allocation.vertex_of(t)))
            .collect();
        let _ = writeln!(out, "alloc {}", pairs.join(" "));
        for op in &self.stream {
            match op {
                RoutedOp::One { vertex, label, .. } => {
                    let _ = writeln!(out, "g1 {vertex} {label}");
                }
                RoutedOp::Two { a, b, label, .. } => {
                    let _ = writeln!(out, "g2 {a} {b} {label}");
                }
                RoutedOp::Swap { a, b } => {
                    let _ = writeln!(out, "swap {a} {b}");
                }
            }
        }
        out
    }
}

pub fn route(
    circuit: &Circuit,
    graph: &HardwareGraph,
    options: &RouteOptions,
) -> Result<RoutedCircuit> {
    let n = graph.num_vertices();
    if circuit.num_tokens > n {
        return Err(Error::TooManyTokens { tokens: circuit.num_tokens, vertices: n });
    }
    let layers = layer_gates(circuit);
    let num_layers = layers.num_layers();

    let tap_solution: TapSolution;
    let allocations: Vec<Allocation>;
    if num_layers == 0 {
        tap_solution = TapSolution {
            allocations: Vec::new(),
            doubled_cost: 0,
            optimal: true,
            lower_bound_doubled: 0,
            timed_out: false,
        };
        allocations = vec![Allocation::identity(n)];
    } else {
        let instance = TapInstance::new(
            graph.clone(),
            circuit.num_tokens,
            layers.layers.clone(),
            options.tap.clone(),
        )?;
        tap_solution = solve_tap(&instance)?;
        allocations = tap_solution.allocations.clone();
    }

    // Transitions between consecutive allocations are independent token
    // swapping subproblems.
    let independent_sets = candidate_independent_sets(graph, 0x5eed);
    let transitions: Vec<(SwapSequence, bool, bool)> = allocations
        .par_windows(2)
        .map(|pair| {
            let (from, to) = (&pair[0], &pair[1]);
            if options.exact_swaps {
                let out = exact_solve(graph, from, to, options.swap_limits);
                (out.sequence, out.optimal, !out.optimal)
            } else {
                let seq = approx_solve(graph, from, to);
                let certificate =
                    combined_lower_bound(graph, from, to, &independent_sets);
                let proven = seq.len() as u32 == certificate;
                (seq, proven, false)
            }
        })
        .collect();

    let swaps_proven_optimal = transitions.iter().all(|(_, proven, _)| *proven);
    let any_swap_timeout = transitions.iter().any(|(_, _, timed_out)| *timed_out);
    let per_transition_swaps: Vec<SwapSequence> =
        transitions.into_iter().map(|(seq, _, _)| seq).collect();

    let stream = assemble_stream(circuit, &layers.origin, &allocations, &per_transition_swaps);

    let mut routed = RoutedCircuit {
        initial_allocation: allocations[0].clone(),
        stream,
        per_transition_swaps,
        allocations,
        metrics: RoutingMetrics {
            swaps_added: 0,
            two_qubit_gates_in: 0,
            two_qubit_gates_out: 0,
            two_qubit_gates_out_decomposed: 0,
            depth_in: 0,
            depth_out: 0,
            relative_gate_increase: 0.0,
            relative_gate_increase_decomposed: 0.0,
            relative_depth_increase: 0.0,
        },
        status: if tap_solution.optimal && swaps_proven_optimal {
            SolveStatus::Optimal
        } else {
            SolveStatus::Heuristic
        },
        limit_expired: tap_solution.timed_out || any_swap_timeout,
        tap_doubled_cost: tap_solution.doubled_cost,
    };
    routed.metrics = compute_metrics(circuit, &routed);
    Ok(routed)
}

/// Emits the stream block by block: the one-qubit gates anchored before
/// any two-qubit gate, then for each layer its two-qubit gates followed
/// by the one-qubit gates anchored to it, with the transition swaps in
/// between. A one-qubit gate is anchored to the layer of the latest
/// earlier two-qubit gate on its token, which preserves per-token order.
fn assemble_stream(
    circuit: &Circuit,
    origin: &[Vec<usize>],
    allocations: &[Allocation],
    transitions: &[SwapSequence],
) -> Vec<RoutedOp> {
    let num_layers = origin.len();
    let mut anchored: Vec<Vec<(usize, usize, &str)>> = vec![Vec::new(); num_layers + 1];
    let mut last_layer = vec![0usize; circuit.num_tokens];
    let mut gate_layer = vec![0usize; circuit.gates.len()];
    for (idx, gate) in circuit.gates.iter().enumerate() {
        match gate {
            Gate::Two { a, b, .. } => {
                let layer = last_layer[*a].max(last_layer[*b]) + 1;
                last_layer[*a] = layer;
                last_layer[*b] = layer;
                gate_layer[idx] = layer;
            }
            Gate::One { token, label } => {
                anchored[last_layer[*token]].push((idx, *token, label));
            }
        }
    }

    let mut stream = Vec::new();
    let alloc_for_block = |block: usize| &allocations[block.saturating_sub(1)];
    for (idx, token, label) in &anchored[0] {
        stream.push(RoutedOp::One {
            vertex: alloc_for_block(0).vertex_of(*token),
            label: (*label).to_string(),
            origin: *idx,
        });
    }
    for layer in 1..=num_layers {
        let alloc = alloc_for_block(layer);
        for &idx in &origin[layer - 1] {
            let Gate::Two { a, b, label } = &circuit.gates[idx] else {
                unreachable!("layer origins point at two-qubit gates")
            };
            stream.push(RoutedOp::Two {
                a: alloc.vertex_of(*a),
                b: alloc.vertex_of(*b),
                label: label.clone(),
                origin: idx,
            });
        }
        for (idx, token, label) in &anchored[layer] {
            stream.push(RoutedOp::One {
                vertex: alloc.vertex_of(*token),
                label: (*label).to_string(),
                origin: *idx,
            });
        }
        if layer < num_layers {
            for &(u, v) in &transitions[layer - 1].swaps {
                stream.push(RoutedOp::Swap { a: u, b: v });
            }
        }
    }
    stream
}

/// Replays a routed circuit and checks it against the original.
///
/// Verified: every two-qubit operation (gate or swap) acts on a hardware
/// edge; the logical gate sequence extracted by tracking tokens matches
/// the original circuit per token, in order; and the final permutation
/// equals the initial allocation advanced by the declared per-transition
/// swaps. Returns a first-divergence diagnostic on failure.
pub fn verify_routed(
    original: &Circuit,
    routed: &RoutedCircuit,
    graph: &HardwareGraph,
) -> std::result::Result<(), String> {
    let n = graph.num_vertices();
    if routed.initial_allocation.len() != n {
        return Err(format!(
            "initial allocation covers {} tokens, hardware has {n} vertices",
            routed.initial_allocation.len()
        ));
    }

    // Per-token queues of pending original gate indices.
    let mut pending: Vec<VecDeque<usize>> = vec![VecDeque::new(); original.num_tokens];
    for (idx, gate) in original.gates.iter().enumerate() {
        match gate {
            Gate::One { token, .. } => pending[*token].push_back(idx),
            Gate::Two { a, b, .. } => {
                pending[*a].push_back(idx);
                pending[*b].push_back(idx);
            }
        }
    }

    let mut alloc = routed.initial_allocation.clone();
    for (pos, op) in routed.stream.iter().enumerate() {
        match op {
            RoutedOp::Swap { a, b } => {
                if !graph.has_edge(*a, *b) {
                    return Err(format!("stream[{pos}]: swap ({a}, {b}) is not an edge"));
                }
                alloc.swap_vertices(*a, *b);
            }
            RoutedOp::One { vertex, label, .. } => {
                let token = alloc.token_at(*vertex);
                if token >= original.num_tokens {
                    return Err(format!(
                        "stream[{pos}]: one-qubit gate on padding token {token}"
                    ));
                }
                let Some(&idx) = pending[token].front() else {
                    return Err(format!(
                        "stream[{pos}]: token {token} has no pending gates"
                    ));
                };
                match &original.gates[idx] {
                    Gate::One { label: want, .. } if want == label => {
                        pending[token].pop_front();
                    }
                    other => {
                        return Err(format!(
                            "stream[{pos}]: token {token} expected {other:?}, saw g1 {label}"
                        ));
                    }
                }
            }
            RoutedOp::Two { a, b, label, .. } => {
                if !graph.has_edge(*a, *b) {
                    return Err(format!("stream[{pos}]: gate ({a}, {b}) is not an edge"));
                }
                let p = alloc.token_at(*a);
                let q = alloc.token_at(*b);
                if p >= original.num_tokens || q >= original.num_tokens {
                    return Err(format!(
                        "stream[{pos}]: two-qubit gate touches padding token"
                    ));
                }
                let (Some(&ip), Some(&iq)) = (pending[p].front(), pending[q].front()) else {
                    return Err(format!(
                        "stream[{pos}]: token {p} or {q} has no pending gates"
                    ));
                };
                if ip != iq {
                    return Err(format!(
                        "stream[{pos}]: tokens ({p}, {q}) next expect gates {ip} and {iq}"
                    ));
                }
                match &original.gates[ip] {
                    Gate::Two { a: wa, b: wb, label: want }
                        if (*wa, *wb) == (p, q) && want == label =>
                    {
                        pending[p].pop_front();
                        pending[q].pop_front();
                    }
                    other => {
                        return Err(format!(
                            "stream[{pos}]: expected {other:?}, saw g2 on tokens ({p}, {q}) label {label}"
                        ));
                    }
                }
            }
        }
    }

    for (token, queue) in pending.iter().enumerate() {
        if let Some(&idx) = queue.front() {
            return Err(format!("gate {idx} on token {token} never appeared"));
        }
    }

    // Final permutation consistency against the declared swap lists.
    let mut expected = routed.initial_allocation.clone();
    for seq in &routed.per_transition_swaps {
        for &(u, v) in &seq.swaps {
            expected.swap_vertices(u, v);
        }
    }
    if expected != alloc {
        return Err("stream permutation disagrees with per-transition swaps".into());
    }
    Ok(())
}
