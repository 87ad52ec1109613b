//! Circuit data model, text format, gate layering, synthetic instance
//! generators and routing metrics.
//!
//! Gates are opaque: only the operand tokens matter for routing. The
//! text format is line oriented:
//!
//! ```text
//! q 4            # token count
//! g2 0 1 cx      # two-qubit gate with a label
//! g1 2 h         # one-qubit gate
//! ```

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::graph::HardwareGraph;
use crate::route::{RoutedCircuit, RoutedOp};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gate {
    One { token: usize, label: String },
    Two { a: usize, b: usize, label: String },
}

impl Gate {
    pub fn label(&self) -> &str {
        match self {
            Gate::One { label, .. } | Gate::Two { label, .. } => label,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    pub num_tokens: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_tokens: usize, gates: Vec<Gate>) -> Result<Self> {
        for gate in &gates {
            match *gate {
                Gate::One { token, .. } => {
                    if token >= num_tokens {
                        return Err(Error::InvalidInput(format!(
                            "gate operand {token} out of range for {num_tokens} tokens"
                        )));
                    }
                }
                Gate::Two { a, b, .. } => {
                    if a >= num_tokens || b >= num_tokens {
                        return Err(Error::InvalidInput(format!(
                            "gate operand ({a}, {b}) out of range for {num_tokens} tokens"
                        )));
                    }
                    if a == b {
                        return Err(Error::SelfPair(a));
                    }
                }
            }
        }
        Ok(Self { num_tokens, gates })
    }

    /// Ordered `(gate_index, a, b)` triples of the two-qubit gates.
    pub fn two_qubit_gates(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.gates.iter().enumerate().filter_map(|(idx, g)| match *g {
            Gate::Two { a, b, .. } => Some((idx, a, b)),
            Gate::One { .. } => None,
        })
    }

    pub fn num_two_qubit_gates(&self) -> usize {
        self.two_qubit_gates().count()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut num_tokens: Option<usize> = None;
        let mut gates = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line: idx + 1, msg };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse_num = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| err(format!("expected an integer, found `{s}`")))
            };
            match (fields[0], num_tokens) {
                ("q", None) => {
                    if fields.len() != 2 {
                        return Err(err("header must be `q <num_tokens>`".into()));
                    }
                    num_tokens = Some(parse_num(fields[1])?);
                }
                ("q", Some(_)) => return Err(err("duplicate `q` header".into())),
                (_, None) => return Err(err("circuit must start with `q <num_tokens>`".into())),
                ("g1", Some(n)) => {
                    if fields.len() < 2 {
                        return Err(err("`g1` needs one operand".into()));
                    }
                    let token = parse_num(fields[1])?;
                    if token >= n {
                        return Err(err(format!("operand {token} out of range (q {n})")));
                    }
                    gates.push(Gate::One { token, label: fields[2..].join(" ") });
                }
                ("g2", Some(n)) => {
                    if fields.len() < 3 {
                        return Err(err("`g2` needs two operands".into()));
                    }
                    let a = parse_num(fields[1])?;
                    let b = parse_num(fields[2])?;
                    if a >= n || b >= n {
                        return Err(err(format!("operand ({a}, {b}) out of range (q {n})")));
                    }
                    if a == b {
                        return Err(err(format!("two-qubit gate repeats token {a}")));
                    }
                    gates.push(Gate::Two { a, b, label: fields[3..].join(" ") });
                }
                (other, Some(_)) => return Err(err(format!("unknown directive `{other}`"))),
            }
        }
        let num_tokens = num_tokens.ok_or(Error::Parse {
            line: 0,
            msg: "empty circuit file".into(),
        })?;
        Circuit::new(num_tokens, gates)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "q {}", self.num_tokens);
        for gate in &self.gates {
            match gate {
                Gate::One { token, label } => {
                    let _ = writeln!(out, "g1 {token} {label}");
                }
                Gate::Two { a, b, label } => {
                    let _ = writeln!(out, "g2 {a} {b} {label}");
                }
            }
        }
        out
    }
}

/// Two-qubit gates grouped into layers of vertex-disjoint pairs, in a
/// dependency-respecting order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerSequence {
    /// Token pairs per layer.
    pub layers: Vec<Vec<(usize, usize)>>,
    /// Index of the originating gate in the circuit, parallel to `layers`.
    pub origin: Vec<Vec<usize>>,
}

impl LayerSequence {
    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }
}

/// Greedy as-soon-as-possible packing: every two-qubit gate lands in the
/// earliest layer after the last layer that used either operand.
/// One-qubit gates impose no constraint.
pub fn layer_gates(circuit: &Circuit) -> LayerSequence {
    let mut last_layer = vec![0usize; circuit.num_tokens];
    let mut layers: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut origin: Vec<Vec<usize>> = Vec::new();
    for (idx, a, b) in circuit.two_qubit_gates() {
        let layer = last_layer[a].max(last_layer[b]) + 1;
        if layer > layers.len() {
            layers.push(Vec::new());
            origin.push(Vec::new());
        }
        layers[layer - 1].push((a, b));
        origin[layer - 1].push(idx);
        last_layer[a] = layer;
        last_layer[b] = layer;
    }
    LayerSequence { layers, origin }
}

/// Generates a circuit that admits a zero-swap routing by construction:
/// a hidden token-to-vertex bijection is drawn, and every layer emits
/// gates on the tokens sitting at `gates_per_layer` random vertex-disjoint
/// hardware edges.
pub fn gen_zero_swap(
    graph: &HardwareGraph,
    depth: usize,
    gates_per_layer: usize,
    seed: u64,
) -> Result<Circuit> {
    let n = graph.num_vertices();
    if gates_per_layer > n / 2 || !has_matching_of_size(graph, gates_per_layer) {
        return Err(Error::NoMatching { want: gates_per_layer });
    }
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut token_at: Vec<usize> = (0..n).collect();
    token_at.shuffle(&mut rng);

    let mut gates = Vec::new();
    for _ in 0..depth {
        let matching = sample_matching(graph, gates_per_layer, &mut rng);
        for (u, v) in matching {
            let (u, v) = if rng.gen_bool(0.5) { (u, v) } else { (v, u) };
            gates.push(Gate::Two { a: token_at[u], b: token_at[v], label: "cx".into() });
        }
    }
    Circuit::new(n, gates)
}

/// Draws `size` vertex-disjoint edges by shuffling the edge list and
/// collecting greedily, retrying on failure. The caller has already
/// established that a matching of this size exists.
fn sample_matching(graph: &HardwareGraph, size: usize, rng: &mut SplitMix64) -> Vec<(usize, usize)> {
    let mut edges: Vec<(usize, usize)> = graph.edges().to_vec();
    loop {
        edges.shuffle(rng);
        let mut used = vec![false; graph.num_vertices()];
        let mut picked = Vec::with_capacity(size);
        for &(u, v) in &edges {
            if !used[u] && !used[v] {
                used[u] = true;
                used[v] = true;
                picked.push((u, v));
                if picked.len() == size {
                    return picked;
                }
            }
        }
    }
}

/// Exact check via backtracking over the edge list; hardware graphs are
/// small enough that this stays cheap.
fn has_matching_of_size(graph: &HardwareGraph, size: usize) -> bool {
    fn go(edges: &[(usize, usize)], used: &mut [bool], need: usize) -> bool {
        if need == 0 {
            return true;
        }
        if edges.len() < need {
            return false;
        }
        let (u, v) = edges[0];
        if !used[u] && !used[v] {
            used[u] = true;
            used[v] = true;
            if go(&edges[1..], used, need - 1) {
                return true;
            }
            used[u] = false;
            used[v] = false;
        }
        go(&edges[1..], used, need)
    }
    go(graph.edges(), &mut vec![false; graph.num_vertices()], size)
}

/// Quantum-volume style circuit: `depth` layers, each a random pairing of
/// the tokens with the leftover token dropped when `width` is odd.
pub fn gen_qv(width: usize, depth: usize, seed: u64) -> Result<Circuit> {
    if width < 2 {
        return Err(Error::InvalidInput("qv width must be at least 2".into()));
    }
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..width).collect();
    let mut gates = Vec::new();
    for _ in 0..depth {
        order.shuffle(&mut rng);
        for pair in 0..width / 2 {
            gates.push(Gate::Two {
                a: order[2 * pair],
                b: order[2 * pair + 1],
                label: "su4".into(),
            });
        }
    }
    Circuit::new(width, gates)
}

/// Gate and depth accounting for a routed circuit.
///
/// A swap counts as one parallel unit for depth; for gate counts both the
/// native figure (swap = 1) and the decomposed figure (swap = 3 two-qubit
/// gates) are reported.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RoutingMetrics {
    pub swaps_added: usize,
    pub two_qubit_gates_in: usize,
    pub two_qubit_gates_out: usize,
    pub two_qubit_gates_out_decomposed: usize,
    pub depth_in: usize,
    pub depth_out: usize,
    pub relative_gate_increase: f64,
    pub relative_gate_increase_decomposed: f64,
    pub relative_depth_increase: f64,
}

fn ratio_increase(before: usize, after: usize) -> f64 {
    if before == 0 {
        0.0
    } else {
        (after as f64 - before as f64) / before as f64
    }
}

pub fn compute_metrics(input: &Circuit, routed: &RoutedCircuit) -> RoutingMetrics {
    let two_qubit_gates_in = input.num_two_qubit_gates();
    let depth_in = layer_gates(input).num_layers();
    let swaps_added = routed
        .stream
        .iter()
        .filter(|op| matches!(op, RoutedOp::Swap { .. }))
        .count();
    let depth_out = stream_depth(&routed.stream);
    let two_qubit_gates_out = two_qubit_gates_in + swaps_added;
    let two_qubit_gates_out_decomposed = two_qubit_gates_in + 3 * swaps_added;
    RoutingMetrics {
        swaps_added,
        two_qubit_gates_in,
        two_qubit_gates_out,
        two_qubit_gates_out_decomposed,
        depth_in,
        depth_out,
        relative_gate_increase: ratio_increase(two_qubit_gates_in, two_qubit_gates_out),
        relative_gate_increase_decomposed: ratio_increase(
            two_qubit_gates_in,
            two_qubit_gates_out_decomposed,
        ),
        relative_depth_increase: ratio_increase(depth_in, depth_out),
    }
}

/// Greedy layering of a physical op stream; one-qubit gates are
/// transparent, swaps and two-qubit gates each occupy one unit.
fn stream_depth(stream: &[RoutedOp]) -> usize {
    let mut busy: Vec<usize> = Vec::new();
    let mut depth = 0;
    let ensure = |busy: &mut Vec<usize>, v: usize| {
        if v >= busy.len() {
            busy.resize(v + 1, 0);
        }
    };
    for op in stream {
        let (a, b) = match *op {
            RoutedOp::Two { a, b, .. } | RoutedOp::Swap { a, b } => (a, b),
            RoutedOp::One { .. } => continue,
        };
        ensure(&mut busy, a.max(b));
        let layer = busy[a].max(busy[b]) + 1;
        busy[a] = layer;
        busy[b] = layer;
        depth = depth.max(layer);
    }
    depth
}
