//! Token swapping approximation with a guaranteed factor of four.
//!
//! The algorithm repeatedly walks along distance-decreasing neighbours:
//! from each vertex it steps to a neighbour strictly closer to the
//! target of the token sitting there. A walk ends either by revisiting a
//! vertex — the enclosed cycle is rotated one step forward, a "happy swap
//! chain" that moves every involved token closer — or at a vertex already
//! holding its target token, where a single "unhappy swap" displaces that
//! token to let the walker pass.
//!
//! The modified variant replaces arbitrary choices with deliberate ones.
//! Walk steps prefer the neighbour closing the smallest cycle, then any
//! neighbour that is not a dead end. The start vertex is chosen by
//! exploring the walk from every unsatisfied vertex first and committing
//! to the one that closes the smallest cycle: small cycles give the most
//! distance decrease per swap, and unhappy swaps are spent only when no
//! happy chain exists at all. Ties avoid the previously swapped vertices
//! (only vertex-disjoint swaps parallelize) and fall back to the lowest
//! vertex id, keeping the algorithm deterministic. The original variant
//! resolves start and step with a seeded RNG and is kept for comparison
//! runs.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_xoshiro::SplitMix64;

use crate::graph::HardwareGraph;
use crate::tap::Allocation;

use super::SwapSequence;

/// Step rule used when no cycle can be closed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum StepStyle {
    DodgeDeadEnds,
    PushThrough,
}

/// Fixed seeds for the tie-break-perturbed passes.
const PERTURBED_PASS_SEEDS: [u64; 4] = [0xA5A5_0001, 0xA5A5_0002, 0xA5A5_0003, 0xA5A5_0004];
/// Fixed seeds for the free-walk passes.
const FREE_WALK_SEEDS: [u64; 16] = [
    0x0F0F_0001,
    0x0F0F_0002,
    0x0F0F_0003,
    0x0F0F_0004,
    0x0F0F_0005,
    0x0F0F_0006,
    0x0F0F_0007,
    0x0F0F_0008,
    0x0F0F_0009,
    0x0F0F_000A,
    0x0F0F_000B,
    0x0F0F_000C,
    0x0F0F_000D,
    0x0F0F_000E,
    0x0F0F_000F,
    0x0F0F_0010,
];

/// Modified approximation: keeps every preference rule of the walk and
/// resolves the remaining free choices several ways, returning the
/// shortest result. The pass set pairs both step styles (dodging dead
/// ends pays off on well-connected graphs, pushing through satisfied
/// blockers on sparse ones) with the deterministic lowest-id tie-break
/// and a few seed-perturbed tie-break orders; on larger instances a few
/// free random walks are added for diversity. Deterministic overall.
pub fn approx_solve(
    graph: &HardwareGraph,
    start: &Allocation,
    target: &Allocation,
) -> SwapSequence {
    let mut best: Option<SwapSequence> = None;
    let mut consider = |candidate: SwapSequence| {
        if best.as_ref().is_none_or(|b| candidate.len() < b.len()) {
            best = Some(candidate);
        }
    };
    for style in [StepStyle::DodgeDeadEnds, StepStyle::PushThrough] {
        consider(solve_pass(graph, start, target, style, None));
        for seed in PERTURBED_PASS_SEEDS {
            consider(solve_pass(graph, start, target, style, Some(seed)));
        }
    }
    if graph.num_vertices() > 8 {
        for seed in FREE_WALK_SEEDS {
            consider(free_walk_pass(graph, start, target, seed));
        }
    }
    best.expect("at least one pass runs")
}

/// One pass of fully random walks, like the unmodified variant but with
/// a fixed seed; used only as a portfolio member.
fn free_walk_pass(
    graph: &HardwareGraph,
    start: &Allocation,
    target: &Allocation,
    seed: u64,
) -> SwapSequence {
    approx_solve_original(graph, start, target, seed)
}

fn solve_pass(
    graph: &HardwareGraph,
    start: &Allocation,
    target: &Allocation,
    style: StepStyle,
    seed: Option<u64>,
) -> SwapSequence {
    let n = graph.num_vertices();
    debug_assert_eq!(start.len(), n);
    debug_assert_eq!(target.len(), n);
    let mut perturb = seed.map(SplitMix64::seed_from_u64);

    let mut alloc = start.clone();
    let mut swaps: Vec<(usize, usize)> = Vec::new();
    let mut prev_chain: Vec<bool> = vec![false; n];
    let guard = termination_guard(graph);
    let mut performed = 0usize;

    loop {
        let unsatisfied: Vec<usize> = (0..n)
            .filter(|&v| alloc.token_at(v) != target.token_at(v))
            .collect();
        if unsatisfied.is_empty() {
            break;
        }
        let fresh: Vec<usize> = unsatisfied
            .iter()
            .copied()
            .filter(|&v| !prev_chain[v])
            .collect();
        let pool = if fresh.is_empty() { &unsatisfied } else { &fresh };
        let v0 = match perturb.as_mut() {
            Some(rng) => *pool.choose(rng).expect("non-empty"),
            None => pool[0],
        };
        let walk = plan_walk(graph, target, &alloc, v0, style, perturb.as_mut());
        let chain = execute(&mut alloc, &mut swaps, &walk);
        prev_chain.fill(false);
        for v in chain {
            prev_chain[v] = true;
        }

        performed += 1;
        assert!(performed <= guard, "token swapping walk failed to terminate");
    }
    SwapSequence::new(swaps)
}

/// Unmodified variant resolving start and step uniformly at random.
pub fn approx_solve_original(
    graph: &HardwareGraph,
    start: &Allocation,
    target: &Allocation,
    seed: u64,
) -> SwapSequence {
    let n = graph.num_vertices();
    debug_assert_eq!(start.len(), n);
    debug_assert_eq!(target.len(), n);
    let mut rng = SplitMix64::seed_from_u64(seed);

    let mut alloc = start.clone();
    let mut swaps: Vec<(usize, usize)> = Vec::new();
    let guard = termination_guard(graph);
    let mut performed = 0usize;

    loop {
        let unsatisfied: Vec<usize> = (0..n)
            .filter(|&v| alloc.token_at(v) != target.token_at(v))
            .collect();
        if unsatisfied.is_empty() {
            break;
        }
        let v0 = *unsatisfied.choose(&mut rng).expect("non-empty");
        let walk = random_walk(graph, target, &alloc, v0, &mut rng);
        execute(&mut alloc, &mut swaps, &walk);

        performed += 1;
        assert!(performed <= guard, "token swapping walk failed to terminate");
    }
    SwapSequence::new(swaps)
}

/// Termination is guaranteed: every unhappy swap is later absorbed by a
/// happy chain and the number of happy chains is finite. The guard turns
/// a would-be hang into a loud failure.
fn termination_guard(graph: &HardwareGraph) -> usize {
    let n = graph.num_vertices();
    64 + 8 * n * n * (graph.diameter() as usize + 1)
}

/// Outcome of one walk: either a closed cycle of vertices whose tokens
/// all rotate one step forward, or an unhappy swap at a dead end.
enum Walk {
    Cycle { cycle: Vec<usize> },
    Unhappy { prev: usize, dead_end: usize },
}

/// Distance-decreasing neighbours for the token sitting at `v`; empty
/// exactly when the vertex is satisfied.
fn decreasing_neighbors(
    graph: &HardwareGraph,
    target: &Allocation,
    alloc: &Allocation,
    v: usize,
) -> Vec<usize> {
    let goal = target.vertex_of(alloc.token_at(v));
    let here = graph.dist(v, goal);
    graph
        .neighbors(v)
        .iter()
        .copied()
        .filter(|&u| graph.dist(u, goal) < here)
        .collect()
}

/// Walk from `v0` using the modified step rule; performs no swaps.
/// Ties left open by the preference rules go to the lowest vertex id,
/// or are drawn from `perturb` when a seed is supplied.
fn plan_walk(
    graph: &HardwareGraph,
    target: &Allocation,
    alloc: &Allocation,
    v0: usize,
    style: StepStyle,
    mut perturb: Option<&mut SplitMix64>,
) -> Walk {
    let mut path = vec![v0];
    let mut on_path_at = vec![usize::MAX; graph.num_vertices()];
    on_path_at[v0] = 0;

    loop {
        let cur = *path.last().expect("path never empty");
        let decreasing = decreasing_neighbors(graph, target, alloc, cur);
        if decreasing.is_empty() {
            // Dead end: `cur` holds its target token. The walker behind
            // it gets through with one unhappy swap.
            return Walk::Unhappy { prev: path[path.len() - 2], dead_end: cur };
        }
        // Smallest closable cycle first, i.e. the on-path candidate seen
        // latest in the walk.
        let cycle = decreasing
            .iter()
            .copied()
            .filter(|&u| on_path_at[u] != usize::MAX)
            .max_by_key(|&u| on_path_at[u]);
        let step = cycle.unwrap_or_else(|| {
            let preferred: Vec<usize> = match style {
                StepStyle::DodgeDeadEnds => {
                    // Dodge dead ends: prefer neighbours whose tokens are
                    // themselves unsatisfied.
                    let unsat: Vec<usize> = decreasing
                        .iter()
                        .copied()
                        .filter(|&u| alloc.token_at(u) != target.token_at(u))
                        .collect();
                    if unsat.is_empty() {
                        decreasing.clone()
                    } else {
                        unsat
                    }
                }
                // Push through blockers along any shortest path.
                StepStyle::PushThrough => decreasing.clone(),
            };
            match perturb.as_deref_mut() {
                Some(rng) => *preferred.choose(rng).expect("non-empty"),
                None => preferred[0],
            }
        });
        if on_path_at[step] != usize::MAX {
            return Walk::Cycle { cycle: path[on_path_at[step]..].to_vec() };
        }
        on_path_at[step] = path.len();
        path.push(step);
    }
}

/// Walk from `v0` stepping uniformly at random, closing a cycle only
/// when the random step happens to land on the walk.
fn random_walk(
    graph: &HardwareGraph,
    target: &Allocation,
    alloc: &Allocation,
    v0: usize,
    rng: &mut SplitMix64,
) -> Walk {
    let mut path = vec![v0];
    let mut on_path_at = vec![usize::MAX; graph.num_vertices()];
    on_path_at[v0] = 0;

    loop {
        let cur = *path.last().expect("path never empty");
        let decreasing = decreasing_neighbors(graph, target, alloc, cur);
        if decreasing.is_empty() {
            return Walk::Unhappy { prev: path[path.len() - 2], dead_end: cur };
        }
        let step = *decreasing.choose(rng).expect("non-empty");
        if on_path_at[step] != usize::MAX {
            return Walk::Cycle { cycle: path[on_path_at[step]..].to_vec() };
        }
        on_path_at[step] = path.len();
        path.push(step);
    }
}

/// Performs the planned swaps. A cycle `v_0 .. v_{c-1}` rotates every
/// token one step forward via the c-1 swaps `(v_{c-2}, v_{c-1}), ...,
/// (v_0, v_1)`. Returns the vertices involved.
fn execute(
    alloc: &mut Allocation,
    swaps: &mut Vec<(usize, usize)>,
    walk: &Walk,
) -> Vec<usize> {
    match walk {
        Walk::Cycle { cycle } => {
            for i in (0..cycle.len() - 1).rev() {
                alloc.swap_vertices(cycle[i], cycle[i + 1]);
                swaps.push((cycle[i], cycle[i + 1]));
            }
            cycle.clone()
        }
        Walk::Unhappy { prev, dead_end } => {
            alloc.swap_vertices(*prev, *dead_end);
            swaps.push((*prev, *dead_end));
            vec![*prev, *dead_end]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::swap::{apply_swaps_checked, brute_force_opt};
    use rand::Rng;

    fn random_allocation(n: usize, rng: &mut SplitMix64) -> Allocation {
        let mut v: Vec<usize> = (0..n).collect();
        v.shuffle(rng);
        Allocation::from_to_vertex(v).unwrap()
    }

    #[test]
    fn identity_needs_no_swaps() {
        let graph = HardwareGraph::ring(5).unwrap();
        let id = Allocation::identity(5);
        assert!(approx_solve(&graph, &id, &id).is_empty());
    }

    #[test]
    fn single_transposition() {
        let graph = HardwareGraph::line(3).unwrap();
        let start = Allocation::from_to_vertex(vec![1, 0, 2]).unwrap();
        let target = Allocation::identity(3);
        let seq = approx_solve(&graph, &start, &target);
        assert_eq!(seq.swaps, vec![(0, 1)]);
    }

    #[test]
    fn result_transforms_start_into_target() {
        let mut rng = SplitMix64::seed_from_u64(11);
        for graph in [
            HardwareGraph::line(6).unwrap(),
            HardwareGraph::ring(7).unwrap(),
            HardwareGraph::grid(2, 4).unwrap(),
            HardwareGraph::star(5).unwrap(),
        ] {
            for _ in 0..40 {
                let n = graph.num_vertices();
                let start = random_allocation(n, &mut rng);
                let target = random_allocation(n, &mut rng);
                let seq = approx_solve(&graph, &start, &target);
                let end = apply_swaps_checked(&graph, &start, &seq.swaps).unwrap();
                assert_eq!(end, target);

                let seed = rng.gen();
                let orig = approx_solve_original(&graph, &start, &target, seed);
                let end = apply_swaps_checked(&graph, &start, &orig.swaps).unwrap();
                assert_eq!(end, target);
            }
        }
    }

    #[test]
    fn deterministic_output() {
        let graph = HardwareGraph::grid(2, 3).unwrap();
        let mut rng = SplitMix64::seed_from_u64(3);
        for _ in 0..20 {
            let start = random_allocation(6, &mut rng);
            let target = random_allocation(6, &mut rng);
            assert_eq!(
                approx_solve(&graph, &start, &target),
                approx_solve(&graph, &start, &target)
            );
        }
    }

    /// On a path the walk only ever closes 2-cycles and every swap
    /// removes exactly one inversion, so the result is optimal.
    #[test]
    fn optimal_on_lines() {
        let mut rng = SplitMix64::seed_from_u64(21);
        let graph = HardwareGraph::line(6).unwrap();
        let target = Allocation::identity(6);
        for _ in 0..60 {
            let start = random_allocation(6, &mut rng);
            let seq = approx_solve(&graph, &start, &target);
            let opt = brute_force_opt(&graph, &start, &target).unwrap();
            assert_eq!(seq.len() as u32, opt);
        }
    }

    #[test]
    fn within_factor_four_of_optimum() {
        let mut rng = SplitMix64::seed_from_u64(17);
        for graph in [
            HardwareGraph::ring(6).unwrap(),
            HardwareGraph::grid(2, 3).unwrap(),
            HardwareGraph::complete(5).unwrap(),
            HardwareGraph::star(6).unwrap(),
        ] {
            let n = graph.num_vertices();
            for _ in 0..50 {
                let start = random_allocation(n, &mut rng);
                let target = random_allocation(n, &mut rng);
                let approx = approx_solve(&graph, &start, &target).len() as u32;
                let opt = brute_force_opt(&graph, &start, &target).unwrap();
                assert!(approx <= 4 * opt || (opt == 0 && approx == 0));
                if opt == 0 {
                    assert_eq!(approx, 0);
                }
            }
        }
    }
}
