//! Brute-force oracles shared by the integration suites. Everything here
//! enumerates exhaustively and stays independent of the library's search
//! implementations.

#![allow(dead_code)]

use qroute::graph::{line_graph, Graph};
use qroute::tap::Allocation;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_xoshiro::SplitMix64;

/// Edge-induced subgraph of `host` spanned by the chosen edge indices,
/// with vertices relabeled densely.
fn edge_induced(host: &Graph, chosen: &[usize]) -> Graph {
    let mut vertices: Vec<usize> = chosen
        .iter()
        .flat_map(|&e| {
            let (u, v) = host.edges()[e];
            [u, v]
        })
        .collect();
    vertices.sort_unstable();
    vertices.dedup();
    let index = |v: usize| vertices.binary_search(&v).unwrap();
    let edges: Vec<(usize, usize)> = chosen
        .iter()
        .map(|&e| {
            let (u, v) = host.edges()[e];
            (index(u), index(v))
        })
        .collect();
    Graph::new(vertices.len(), &edges).unwrap()
}

/// Exhaustive graph isomorphism via backtracking injection.
pub fn graphs_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges() {
        return false;
    }
    let mut da: Vec<usize> = (0..a.num_vertices()).map(|v| a.degree(v)).collect();
    let mut db: Vec<usize> = (0..b.num_vertices()).map(|v| b.degree(v)).collect();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return false;
    }
    fn extend(a: &Graph, b: &Graph, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let v = map.len();
        if v == a.num_vertices() {
            return true;
        }
        for w in 0..b.num_vertices() {
            if used[w] || a.degree(v) != b.degree(w) {
                continue;
            }
            if (0..v).all(|u| a.has_edge(u, v) == b.has_edge(map[u], w)) {
                map.push(w);
                used[w] = true;
                if extend(a, b, map, used) {
                    return true;
                }
                map.pop();
                used[w] = false;
            }
        }
        false
    }
    extend(a, b, &mut Vec::new(), &mut vec![false; b.num_vertices()])
}

/// Brute-force edge-induced subgraph isomorphism: enumerate every edge
/// subset of the right size and compare.
pub fn brute_edge_sgi(pattern: &Graph, host: &Graph) -> bool {
    if pattern.num_vertices() == 0 {
        return true;
    }
    if (0..pattern.num_vertices()).any(|v| pattern.degree(v) == 0) {
        return false;
    }
    let k = pattern.num_edges();
    if k > host.num_edges() {
        return false;
    }
    let mut chosen = Vec::with_capacity(k);
    fn pick(
        pattern: &Graph,
        host: &Graph,
        k: usize,
        from: usize,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if chosen.len() == k {
            return graphs_isomorphic(&edge_induced(host, chosen), pattern);
        }
        for e in from..host.num_edges() {
            chosen.push(e);
            if pick(pattern, host, k, e + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    pick(pattern, host, k, 0, &mut chosen)
}

/// Brute-force node-induced subgraph isomorphism on the line graphs,
/// accepting only matches whose edge correspondence lifts to a vertex
/// mapping of the originals.
pub fn brute_line_reduction_sgi(pattern: &Graph, host: &Graph) -> bool {
    if pattern.num_vertices() == 0 {
        return true;
    }
    if (0..pattern.num_vertices()).any(|v| pattern.degree(v) == 0) {
        return false;
    }
    let lp = line_graph(pattern);
    let lh = line_graph(host);
    if lp.num_vertices() > lh.num_vertices() {
        return false;
    }
    fn extend(
        pattern: &Graph,
        host: &Graph,
        lp: &Graph,
        lh: &Graph,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let v = map.len();
        if v == lp.num_vertices() {
            return lift(pattern, host, map);
        }
        for w in 0..lh.num_vertices() {
            if used[w] {
                continue;
            }
            if (0..v).all(|u| lp.has_edge(u, v) == lh.has_edge(map[u], w)) {
                map.push(w);
                used[w] = true;
                if extend(pattern, host, lp, lh, map, used) {
                    return true;
                }
                map.pop();
                used[w] = false;
            }
        }
        false
    }
    extend(
        pattern,
        host,
        &lp,
        &lh,
        &mut Vec::new(),
        &mut vec![false; lh.num_vertices()],
    )
}

/// Tries to lift an edge correspondence to an injective vertex mapping.
fn lift(pattern: &Graph, host: &Graph, edge_map: &[usize]) -> bool {
    fn go(
        pattern: &Graph,
        host: &Graph,
        edge_map: &[usize],
        idx: usize,
        vmap: &mut [usize],
        vused: &mut [bool],
    ) -> bool {
        if idx == pattern.num_edges() {
            return true;
        }
        let (a, b) = pattern.edges()[idx];
        let (x, y) = host.edges()[edge_map[idx]];
        for (pa, pb) in [(x, y), (y, x)] {
            let mut created = Vec::new();
            let mut ok = true;
            for (p, h) in [(a, pa), (b, pb)] {
                if vmap[p] == h {
                    continue;
                }
                if vmap[p] != usize::MAX || vused[h] {
                    ok = false;
                    break;
                }
                vmap[p] = h;
                vused[h] = true;
                created.push((p, h));
            }
            if ok && go(pattern, host, edge_map, idx + 1, vmap, vused) {
                return true;
            }
            for (p, h) in created {
                vmap[p] = usize::MAX;
                vused[h] = false;
            }
        }
        false
    }
    go(
        pattern,
        host,
        edge_map,
        0,
        &mut vec![usize::MAX; pattern.num_vertices()],
        &mut vec![false; host.num_vertices()],
    )
}

/// All non-isomorphic simple graphs with up to `max_n` vertices.
pub fn all_graphs_up_to(max_n: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for n in 0..=max_n {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        let mut seen: Vec<Graph> = Vec::new();
        for mask in 0u32..(1 << pairs.len()) {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let g = Graph::new(n, &edges).unwrap();
            if !seen.iter().any(|h| graphs_isomorphic(h, &g)) {
                seen.push(g);
            }
        }
        out.extend(seen);
    }
    out
}

/// Random connected graph: a random spanning tree plus extra edges.
pub fn random_connected_graph(n: usize, extra: usize, rng: &mut SplitMix64) -> Graph {
    assert!(n >= 1);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        edges.push((order[i], order[j]));
    }
    for _ in 0..extra {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            edges.push((u, v));
        }
    }
    Graph::new(n, &edges).unwrap()
}

pub fn random_graph(n: usize, edge_prob: f64, rng: &mut SplitMix64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(edge_prob) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges).unwrap()
}

pub fn random_allocation(n: usize, rng: &mut SplitMix64) -> Allocation {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    Allocation::from_to_vertex(v).unwrap()
}

/// Optimal swap count on a path graph: the inversion count of the
/// position permutation (adjacent-transposition sorting distance).
pub fn line_swap_optimum(start: &Allocation, target: &Allocation) -> u32 {
    let n = start.len();
    let perm: Vec<usize> = (0..n)
        .map(|pos| target.vertex_of(start.token_at(pos)))
        .collect();
    let mut inversions = 0;
    for i in 0..n {
        for j in i + 1..n {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    inversions
}
