//! Hardware connectivity graphs and the graph transforms consumed by the
//! allocation and swapping solvers.
//!
//! [`HardwareGraph`] is a connected undirected graph over vertices
//! `0..n-1` with a precomputed dense matrix of BFS hop distances.
//! [`Graph`] is the plain (possibly disconnected) variant used for
//! connectivity graphs, line graphs and isomorphism patterns.
//!
//! The edge-induced subgraph isomorphism check reduces to a node-induced
//! search on the line graphs of both inputs. A found line-graph embedding
//! is accepted only if the edge correspondence lifts to an injective
//! vertex mapping; without that check the reduction misreports the
//! triangle/claw pair, whose line graphs coincide.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::{Error, Result};

/// Connected undirected hardware graph with all-pairs hop distances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardwareGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    dist: Vec<u32>,
}

impl HardwareGraph {
    /// Builds the graph and its distance matrix by repeated BFS.
    ///
    /// Edges are normalized to `u < v`, sorted and deduplicated. Fails if
    /// any endpoint is out of range, an edge is a self-loop, or the graph
    /// is disconnected (the error names an unreachable vertex pair).
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("graph needs at least one vertex".into()));
        }
        let mut norm = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u == v {
                return Err(Error::InvalidEdge(u, v, "self-loop"));
            }
            if u >= n || v >= n {
                return Err(Error::InvalidEdge(u, v, "endpoint out of range"));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        norm.dedup();

        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &norm {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }

        let mut dist = vec![u32::MAX; n * n];
        let mut queue = VecDeque::new();
        for src in 0..n {
            let row = &mut dist[src * n..(src + 1) * n];
            row[src] = 0;
            queue.clear();
            queue.push_back(src);
            while let Some(u) = queue.pop_front() {
                for &w in &adj[u] {
                    if row[w] == u32::MAX {
                        row[w] = row[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
            if let Some(far) = row.iter().position(|&d| d == u32::MAX) {
                return Err(Error::Disconnected(src, far));
            }
        }

        Ok(Self { n, edges: norm, adj, dist })
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.dist(u, v) == 1
    }

    /// Hop distance between two vertices.
    #[inline]
    pub fn dist(&self, u: usize, v: usize) -> u32 {
        self.dist[u * self.n + v]
    }

    pub fn diameter(&self) -> u32 {
        self.dist.iter().copied().max().unwrap_or(0)
    }

    /// The d-th relaxed graph: same vertices, edge wherever the hop
    /// distance is at most `d + 1`. Relaxing by 0 returns the graph
    /// itself; relaxing by at least `diameter - 1` yields a complete
    /// graph.
    pub fn relaxed(&self, d: u32) -> HardwareGraph {
        let limit = d.saturating_add(1);
        let mut edges = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.dist(u, v) <= limit {
                    edges.push((u, v));
                }
            }
        }
        HardwareGraph::new(self.n, &edges).expect("relaxation preserves connectivity")
    }

    /// Shortest-path distance from `s` to `t` when `banned` vertices are
    /// removed. `None` if no such path remains.
    pub fn dist_avoiding(&self, s: usize, t: usize, banned: &[usize]) -> Option<u32> {
        if banned.contains(&s) || banned.contains(&t) {
            return None;
        }
        if s == t {
            return Some(0);
        }
        let mut seen = vec![false; self.n];
        for &b in banned {
            seen[b] = true;
        }
        seen[s] = true;
        let mut queue = VecDeque::new();
        queue.push_back((s, 0));
        while let Some((u, d)) = queue.pop_front() {
            for &w in &self.adj[u] {
                if w == t {
                    return Some(d + 1);
                }
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back((w, d + 1));
                }
            }
        }
        None
    }

    /// Parses the line-oriented graph format: first significant line is
    /// the vertex count, each further line one `i j` edge. Anything after
    /// a `#` is a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let parse_num = |s: &str| {
                s.parse::<usize>().map_err(|_| Error::Parse {
                    line: idx + 1,
                    msg: format!("expected an integer, found `{s}`"),
                })
            };
            match n {
                None => {
                    let count = parse_num(fields.next().unwrap())?;
                    if fields.next().is_some() {
                        return Err(Error::Parse {
                            line: idx + 1,
                            msg: "header line must contain the vertex count only".into(),
                        });
                    }
                    n = Some(count);
                }
                Some(_) => {
                    let u = parse_num(fields.next().ok_or(Error::Parse {
                        line: idx + 1,
                        msg: "expected `i j`".into(),
                    })?)?;
                    let v = parse_num(fields.next().ok_or(Error::Parse {
                        line: idx + 1,
                        msg: "edge line needs two endpoints".into(),
                    })?)?;
                    if fields.next().is_some() {
                        return Err(Error::Parse {
                            line: idx + 1,
                            msg: "edge line must contain exactly two endpoints".into(),
                        });
                    }
                    edges.push((u, v));
                }
            }
        }
        let n = n.ok_or(Error::Parse { line: 0, msg: "empty graph file".into() })?;
        Self::new(n, &edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.n);
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Builds one of the named presets: `line:n`, `ring:n`, `ladder:n`
    /// (a 2 x n/2 mesh), `grid:rxc`.
    pub fn preset(spec: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("unknown graph preset `{spec}`"));
        let (kind, arg) = spec.split_once(':').ok_or_else(bad)?;
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
        match kind {
            "line" => Self::line(num(arg)?),
            "ring" => Self::ring(num(arg)?),
            "ladder" => Self::ladder(num(arg)?),
            "grid" => {
                let (r, c) = arg.split_once('x').ok_or_else(bad)?;
                Self::grid(num(r)?, num(c)?)
            }
            _ => Err(bad()),
        }
    }

    pub fn line(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Self::new(n, &edges)
    }

    pub fn ring(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidInput("a ring needs at least 3 vertices".into()));
        }
        let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
        Self::new(n, &edges)
    }

    /// Ladder with `n` vertices total, i.e. a 2 x n/2 grid.
    pub fn ladder(n: usize) -> Result<Self> {
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::InvalidInput("a ladder needs an even vertex count >= 2".into()));
        }
        Self::grid(2, n / 2)
    }

    /// Grid of `r` rows and `c` columns, row-major vertex ids.
    pub fn grid(r: usize, c: usize) -> Result<Self> {
        if r == 0 || c == 0 {
            return Err(Error::InvalidInput("grid dimensions must be positive".into()));
        }
        let mut edges = Vec::new();
        for i in 0..r {
            for j in 0..c {
                let v = i * c + j;
                if j + 1 < c {
                    edges.push((v, v + 1));
                }
                if i + 1 < r {
                    edges.push((v, v + c));
                }
            }
        }
        Self::new(r * c, &edges)
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Self::new(n, &edges)
    }

    pub fn star(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
        Self::new(n, &edges)
    }
}

/// Plain undirected simple graph; may be disconnected or empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut norm = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u == v {
                return Err(Error::InvalidEdge(u, v, "self-loop"));
            }
            if u >= n || v >= n {
                return Err(Error::InvalidEdge(u, v, "endpoint out of range"));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        norm.dedup();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &norm {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Self { n, edges: norm, adj })
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }
}

impl From<&HardwareGraph> for Graph {
    fn from(g: &HardwareGraph) -> Self {
        Graph::new(g.num_vertices(), g.edges()).expect("hardware graph is a valid simple graph")
    }
}

/// Line graph: one vertex per input edge, adjacency wherever two input
/// edges share an endpoint. Vertex `k` of the result corresponds to
/// `g.edges()[k]`.
pub fn line_graph(g: &Graph) -> Graph {
    let m = g.num_edges();
    let mut edges = Vec::new();
    for a in 0..m {
        let (u1, v1) = g.edges()[a];
        for b in a + 1..m {
            let (u2, v2) = g.edges()[b];
            if u1 == u2 || u1 == v2 || v1 == u2 || v1 == v2 {
                edges.push((a, b));
            }
        }
    }
    Graph::new(m, &edges).expect("line graph construction is closed over simple graphs")
}

/// Connectivity graph of a set of token pairs: vertices are the tokens
/// occurring in any pair, edges the undirected versions of the pairs.
#[derive(Debug, Clone)]
pub struct ConnectivityGraph {
    pub graph: Graph,
    /// Token id represented by each graph vertex, ascending.
    pub tokens: Vec<usize>,
}

pub fn connectivity_graph(pairs: &[(usize, usize)]) -> Result<ConnectivityGraph> {
    let mut tokens: Vec<usize> = Vec::new();
    for &(p, q) in pairs {
        if p == q {
            return Err(Error::SelfPair(p));
        }
        tokens.push(p);
        tokens.push(q);
    }
    tokens.sort_unstable();
    tokens.dedup();
    let index = |t: usize| tokens.binary_search(&t).expect("token collected above");
    let edges: Vec<_> = pairs.iter().map(|&(p, q)| (index(p), index(q))).collect();
    Ok(ConnectivityGraph { graph: Graph::new(tokens.len(), &edges)?, tokens })
}

/// Greedy independent set: vertices by ascending degree, ties broken by
/// vertex id, each taken unless a neighbor was already taken.
pub fn greedy_independent_set(g: &Graph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.num_vertices()).collect();
    order.sort_by_key(|&v| (g.degree(v), v));
    let mut blocked = vec![false; g.num_vertices()];
    let mut set = Vec::new();
    for v in order {
        if !blocked[v] {
            set.push(v);
            for &w in g.neighbors(v) {
                blocked[w] = true;
            }
        }
    }
    set.sort_unstable();
    set
}

/// Outcome of a budgeted subgraph isomorphism search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SgiOutcome {
    Embeds,
    NotEmbeds,
    /// The node-expansion budget ran out before the search finished.
    /// Callers must not derive bounds from this.
    Undecided,
}

/// Default node-expansion budget for isomorphism searches.
pub const DEFAULT_SGI_BUDGET: u64 = 1_000_000;

/// Tests whether some edge-induced subgraph of `host` is isomorphic to
/// `pattern`.
///
/// The search runs node-induced on the two line graphs with degree-aware
/// candidate ordering; every complete line-graph match is verified to
/// lift to an injective vertex mapping before it is accepted. Patterns
/// containing an isolated vertex never match, since an edge-induced
/// subgraph has no isolated vertices.
pub fn edge_induced_subgraph_isomorphic(
    pattern: &Graph,
    host: &Graph,
    budget: u64,
) -> SgiOutcome {
    if pattern.num_vertices() == 0 {
        return SgiOutcome::Embeds;
    }
    if (0..pattern.num_vertices()).any(|v| pattern.degree(v) == 0) {
        return SgiOutcome::NotEmbeds;
    }
    if pattern.num_edges() > host.num_edges() || pattern.num_vertices() > host.num_vertices() {
        return SgiOutcome::NotEmbeds;
    }
    let lp = line_graph(pattern);
    let lh = line_graph(host);
    let mut search = LineGraphSearch {
        pattern,
        host,
        lp: &lp,
        lh: &lh,
        order: matching_order(&lp),
        mapped: vec![usize::MAX; lp.num_vertices()],
        used: vec![false; lh.num_vertices()],
        remaining: budget,
    };
    search.run(0)
}

/// Connected-expansion ordering of pattern vertices: each next vertex
/// maximizes mapped neighbors, then degree, then lowest id.
fn matching_order(g: &Graph) -> Vec<usize> {
    let n = g.num_vertices();
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    for _ in 0..n {
        let mut best: Option<(usize, usize, usize)> = None;
        for v in 0..n {
            if placed[v] {
                continue;
            }
            let anchored = g.neighbors(v).iter().filter(|&&w| placed[w]).count();
            let key = (anchored, g.degree(v), n - v);
            if best.is_none_or(|(a, d, id)| key > (a, d, id)) {
                best = Some(key);
            }
        }
        let (_, _, nv) = best.expect("unplaced vertex exists");
        let v = n - nv;
        placed[v] = true;
        order.push(v);
    }
    order
}

struct LineGraphSearch<'a> {
    pattern: &'a Graph,
    host: &'a Graph,
    lp: &'a Graph,
    lh: &'a Graph,
    order: Vec<usize>,
    mapped: Vec<usize>,
    used: Vec<bool>,
    remaining: u64,
}

impl LineGraphSearch<'_> {
    fn run(&mut self, depth: usize) -> SgiOutcome {
        if depth == self.order.len() {
            return if self.lifts() { SgiOutcome::Embeds } else { SgiOutcome::NotEmbeds };
        }
        let pv = self.order[depth];
        let anchor = self.lp.neighbors(pv).iter().find(|&&w| self.mapped[w] != usize::MAX);
        let candidates: Vec<usize> = match anchor {
            Some(&w) => self.lh.neighbors(self.mapped[w]).to_vec(),
            None => (0..self.lh.num_vertices()).collect(),
        };
        let mut undecided = false;
        for hv in candidates {
            if self.used[hv] {
                continue;
            }
            if self.remaining == 0 {
                return SgiOutcome::Undecided;
            }
            self.remaining -= 1;
            if !self.feasible(pv, hv) {
                continue;
            }
            self.mapped[pv] = hv;
            self.used[hv] = true;
            match self.run(depth + 1) {
                SgiOutcome::Embeds => return SgiOutcome::Embeds,
                SgiOutcome::Undecided => undecided = true,
                SgiOutcome::NotEmbeds => {}
            }
            self.mapped[pv] = usize::MAX;
            self.used[hv] = false;
            if undecided {
                return SgiOutcome::Undecided;
            }
        }
        SgiOutcome::NotEmbeds
    }

    /// Induced-adjacency consistency of extending the match by `pv -> hv`.
    fn feasible(&self, pv: usize, hv: usize) -> bool {
        if self.lh.degree(hv) < self.lp.degree(pv) {
            return false;
        }
        for other in 0..self.lp.num_vertices() {
            let image = self.mapped[other];
            if image == usize::MAX {
                continue;
            }
            if self.lp.has_edge(pv, other) != self.lh.has_edge(hv, image) {
                return false;
            }
        }
        true
    }

    /// Lifts the edge correspondence to a vertex mapping. Each pattern
    /// edge maps onto its image edge in one of two orientations; the
    /// backtracking below finds an orientation choice that is globally
    /// consistent and injective, if any exists.
    fn lifts(&self) -> bool {
        let mut vmap = vec![usize::MAX; self.pattern.num_vertices()];
        let mut vused = vec![false; self.host.num_vertices()];
        self.lift_edge(0, &mut vmap, &mut vused)
    }

    fn lift_edge(&self, idx: usize, vmap: &mut [usize], vused: &mut [bool]) -> bool {
        if idx == self.pattern.num_edges() {
            return true;
        }
        let (a, b) = self.pattern.edges()[idx];
        let (x, y) = self.host.edges()[self.mapped[idx]];
        for (pa, pb) in [(x, y), (y, x)] {
            let Some(created_a) = try_bind(a, pa, vmap, vused) else { continue };
            if let Some(created_b) = try_bind(b, pb, vmap, vused) {
                if self.lift_edge(idx + 1, vmap, vused) {
                    return true;
                }
                if created_b {
                    unbind(b, vmap, vused);
                }
            }
            if created_a {
                unbind(a, vmap, vused);
            }
        }
        false
    }
}

/// Binds pattern vertex `p` to host vertex `h` unless it conflicts with
/// an existing binding. Returns whether a new binding was created, or
/// `None` on conflict.
fn try_bind(p: usize, h: usize, vmap: &mut [usize], vused: &mut [bool]) -> Option<bool> {
    if vmap[p] == h {
        return Some(false);
    }
    if vmap[p] != usize::MAX || vused[h] {
        return None;
    }
    vmap[p] = h;
    vused[h] = true;
    Some(true)
}

fn unbind(p: usize, vmap: &mut [usize], vused: &mut [bool]) {
    vused[vmap[p]] = false;
    vmap[p] = usize::MAX;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::new(n, edges).unwrap()
    }

    fn sgi(pattern: &Graph, host: &Graph) -> SgiOutcome {
        edge_induced_subgraph_isomorphic(pattern, host, DEFAULT_SGI_BUDGET)
    }

    #[test]
    fn line_distances() {
        let graph = HardwareGraph::line(4).unwrap();
        assert_eq!(graph.dist(0, 3), 3);
        assert_eq!(graph.dist(3, 0), 3);
        for v in 0..4 {
            assert_eq!(graph.dist(v, v), 0);
        }
        assert_eq!(graph.diameter(), 3);
    }

    #[test]
    fn ring_distances() {
        let graph = HardwareGraph::ring(8).unwrap();
        assert_eq!(graph.dist(0, 5), 3);
        assert_eq!(graph.dist(0, 4), 4);
        assert_eq!(graph.diameter(), 4);
    }

    #[test]
    fn distance_matrix_is_metric() {
        for graph in [
            HardwareGraph::grid(3, 3).unwrap(),
            HardwareGraph::ladder(8).unwrap(),
            HardwareGraph::star(6).unwrap(),
        ] {
            let n = graph.num_vertices();
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(graph.dist(i, j), graph.dist(j, i));
                    assert_eq!(graph.dist(i, j) == 1, graph.has_edge(i, j));
                    for k in 0..n {
                        assert!(graph.dist(i, k) <= graph.dist(i, j) + graph.dist(j, k));
                    }
                }
            }
        }
    }

    #[test]
    fn disconnected_graph_is_rejected() {
        let err = HardwareGraph::new(4, &[(0, 1), (2, 3)]).unwrap_err();
        assert!(matches!(err, crate::Error::Disconnected(..)), "{err}");
    }

    #[test]
    fn graph_file_round_trip() {
        let graph = HardwareGraph::grid(2, 3).unwrap();
        let parsed = HardwareGraph::parse(&graph.to_text()).unwrap();
        assert_eq!(parsed, graph);
        let with_comments = "# hardware\n4  # vertices\n0 1\n1 2\n2 3\n";
        assert_eq!(
            HardwareGraph::parse(with_comments).unwrap(),
            HardwareGraph::line(4).unwrap()
        );
    }

    #[test]
    fn presets() {
        assert_eq!(HardwareGraph::preset("line:4").unwrap(), HardwareGraph::line(4).unwrap());
        assert_eq!(HardwareGraph::preset("ring:5").unwrap(), HardwareGraph::ring(5).unwrap());
        assert_eq!(HardwareGraph::preset("ladder:6").unwrap(), HardwareGraph::grid(2, 3).unwrap());
        assert_eq!(HardwareGraph::preset("grid:3x4").unwrap(), HardwareGraph::grid(3, 4).unwrap());
        assert!(HardwareGraph::preset("mesh:4").is_err());
        assert!(HardwareGraph::preset("line").is_err());
    }

    #[test]
    fn relaxed_graph_levels() {
        let line = HardwareGraph::line(4).unwrap();
        assert_eq!(line.relaxed(0), line);
        assert_eq!(line.relaxed(2), HardwareGraph::complete(4).unwrap());
        let complete = HardwareGraph::complete(5).unwrap();
        assert_eq!(complete.relaxed(3), complete);
        // Monotone: each level's edges contain the previous level's.
        let ring = HardwareGraph::ring(7).unwrap();
        for d in 0..ring.diameter() {
            let smaller = ring.relaxed(d);
            let larger = ring.relaxed(d + 1);
            for &(u, v) in smaller.edges() {
                assert!(larger.has_edge(u, v));
            }
        }
        assert_eq!(
            ring.relaxed(ring.diameter() - 1),
            HardwareGraph::complete(7).unwrap()
        );
    }

    #[test]
    fn line_graph_examples() {
        // Path of two edges: both share the middle vertex.
        let path = g(3, &[(0, 1), (1, 2)]);
        let lg = line_graph(&path);
        assert_eq!(lg.num_vertices(), 2);
        assert_eq!(lg.edges(), &[(0, 1)]);
        // Triangle is its own line graph.
        let triangle = g(3, &[(0, 1), (0, 2), (1, 2)]);
        let lg = line_graph(&triangle);
        assert_eq!(lg.num_vertices(), 3);
        assert_eq!(lg.num_edges(), 3);
        // Star on three spokes: every pair of spokes shares the hub.
        let star = g(4, &[(0, 1), (0, 2), (0, 3)]);
        let lg = line_graph(&star);
        assert_eq!(lg.num_vertices(), 3);
        assert_eq!(lg.num_edges(), 3);
    }

    #[test]
    fn connectivity_graph_collapses_duplicates() {
        let conn = connectivity_graph(&[(7, 3), (3, 7)]).unwrap();
        assert_eq!(conn.tokens, vec![3, 7]);
        assert_eq!(conn.graph.num_edges(), 1);
        assert!(connectivity_graph(&[(2, 2)]).is_err());
        let empty = connectivity_graph(&[]).unwrap();
        assert_eq!(empty.graph.num_vertices(), 0);
    }

    /// The running example: gates (0,1), (1,2), (0,3), (2,3) form a
    /// 4-cycle on the tokens.
    #[test]
    fn connectivity_graph_of_running_example() {
        let conn = connectivity_graph(&[(0, 1), (1, 2), (0, 3), (2, 3)]).unwrap();
        assert_eq!(conn.tokens, vec![0, 1, 2, 3]);
        assert_eq!(conn.graph.num_edges(), 4);
        for v in 0..4 {
            assert_eq!(conn.graph.degree(v), 2);
        }
    }

    #[test]
    fn greedy_independent_set_examples() {
        let line = g(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(greedy_independent_set(&line), vec![0, 3]);
        let complete = g(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(greedy_independent_set(&complete).len(), 1);
        let ring6 = g(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)]);
        assert_eq!(greedy_independent_set(&ring6), vec![0, 2, 4]);
    }

    #[test]
    fn sgi_identity_and_embeddings() {
        let ring8 = Graph::from(&HardwareGraph::ring(8).unwrap());
        assert_eq!(sgi(&ring8, &ring8), SgiOutcome::Embeds);
        let path3 = g(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(sgi(&path3, &ring8), SgiOutcome::Embeds);
        // The 4-cycle of the running example does not fit a 4-line.
        let cycle4 = g(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]);
        let line4 = Graph::from(&HardwareGraph::line(4).unwrap());
        assert_eq!(sgi(&cycle4, &line4), SgiOutcome::NotEmbeds);
    }

    /// Triangle and claw have the same line graph; only the vertex-map
    /// lift keeps them apart.
    #[test]
    fn sgi_triangle_vs_claw() {
        let triangle = g(3, &[(0, 1), (0, 2), (1, 2)]);
        let claw = g(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(sgi(&triangle, &claw), SgiOutcome::NotEmbeds);
        assert_eq!(sgi(&claw, &triangle), SgiOutcome::NotEmbeds);
        assert_eq!(sgi(&triangle, &triangle), SgiOutcome::Embeds);
        assert_eq!(sgi(&claw, &claw), SgiOutcome::Embeds);
        // A claw inside a star with spare spokes.
        let star5 = g(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert_eq!(sgi(&claw, &star5), SgiOutcome::Embeds);
        assert_eq!(sgi(&triangle, &star5), SgiOutcome::NotEmbeds);
    }

    #[test]
    fn sgi_edge_cases() {
        let empty = g(0, &[]);
        let line4 = Graph::from(&HardwareGraph::line(4).unwrap());
        assert_eq!(sgi(&empty, &line4), SgiOutcome::Embeds);
        // Isolated pattern vertices can never be covered by edges.
        let isolated = g(2, &[]);
        assert_eq!(sgi(&isolated, &line4), SgiOutcome::NotEmbeds);
        // More pattern edges than host edges.
        let k4 = Graph::from(&HardwareGraph::complete(4).unwrap());
        assert_eq!(sgi(&k4, &line4), SgiOutcome::NotEmbeds);
    }

    #[test]
    fn sgi_budget_exhaustion_is_undecided() {
        let pattern = Graph::from(&HardwareGraph::grid(2, 4).unwrap());
        let host = Graph::from(&HardwareGraph::grid(3, 4).unwrap());
        assert_eq!(
            edge_induced_subgraph_isomorphic(&pattern, &host, 3),
            SgiOutcome::Undecided
        );
        assert_eq!(
            edge_induced_subgraph_isomorphic(&pattern, &host, DEFAULT_SGI_BUDGET),
            SgiOutcome::Embeds
        );
    }
}
