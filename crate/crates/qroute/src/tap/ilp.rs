//! Binary flow model of the token allocation problem, exported as LP
//! text for external solvers.
//!
//! Variables: `w_t_q_i` places token q at vertex i in layer t,
//! `x_t_q_i_j` moves token q from i to j between layers t and t+1, and
//! `y_t_p_q_i_j` performs gate (p, q) along directed arc (i, j) of layer
//! t. The gate product constraint is linearized by the McCormick triple.
//! The model is kept as structured data so tests can evaluate candidate
//! assignments against it exactly.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{SgiCut, TapInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKey {
    W { t: usize, q: usize, i: usize },
    X { t: usize, q: usize, i: usize, j: usize },
    Y { t: usize, p: usize, q: usize, i: usize, j: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Eq,
    Le,
    Ge,
}

#[derive(Debug, Clone)]
pub struct LinConstraint {
    pub name: String,
    pub terms: Vec<(f64, usize)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl LinConstraint {
    pub fn lhs_value(&self, assignment: &[f64]) -> f64 {
        self.terms.iter().map(|&(c, v)| c * assignment[v]).sum()
    }

    /// Violation amount; zero when satisfied.
    pub fn violation(&self, assignment: &[f64]) -> f64 {
        let lhs = self.lhs_value(assignment);
        match self.sense {
            Sense::Eq => (lhs - self.rhs).abs(),
            Sense::Le => (lhs - self.rhs).max(0.0),
            Sense::Ge => (self.rhs - lhs).max(0.0),
        }
    }
}

#[derive(Debug, Clone)]
pub struct IlpModel {
    pub var_names: Vec<String>,
    pub var_keys: Vec<VarKey>,
    pub objective: Vec<(f64, usize)>,
    pub constraints: Vec<LinConstraint>,
    /// Subgraph isomorphism cuts, kept apart from the base model.
    pub cut_constraints: Vec<LinConstraint>,
}

impl IlpModel {
    pub fn num_vars(&self) -> usize {
        self.var_names.len()
    }

    pub fn objective_value(&self, assignment: &[f64]) -> f64 {
        self.objective.iter().map(|&(c, v)| c * assignment[v]).sum()
    }

    /// Largest violation of any base constraint.
    pub fn max_violation(&self, assignment: &[f64]) -> f64 {
        self.constraints
            .iter()
            .map(|c| c.violation(assignment))
            .fold(0.0, f64::max)
    }

    /// Renders the model in LP text format with deterministic variable
    /// and constraint order; cuts go into a commented block of the
    /// constraint section.
    pub fn to_lp_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "\\ token allocation flow model");
        let _ = writeln!(
            out,
            "\\ {} variables, {} constraints, {} cuts",
            self.num_vars(),
            self.constraints.len(),
            self.cut_constraints.len()
        );
        let _ = writeln!(out, "Minimize");
        out.push_str(" obj:");
        if self.objective.is_empty() {
            out.push_str(" 0");
        } else {
            render_terms(&mut out, &self.objective, &self.var_names);
        }
        out.push('\n');
        let _ = writeln!(out, "Subject To");
        for c in &self.constraints {
            render_constraint(&mut out, c, &self.var_names);
        }
        if !self.cut_constraints.is_empty() {
            let _ = writeln!(out, "\\ SGI cuts");
            for c in &self.cut_constraints {
                render_constraint(&mut out, c, &self.var_names);
            }
        }
        let _ = writeln!(out, "Binary");
        for name in &self.var_names {
            let _ = writeln!(out, " {name}");
        }
        let _ = writeln!(out, "End");
        out
    }
}

fn render_number(out: &mut String, value: f64) {
    if value.fract() == 0.0 {
        let _ = write!(out, "{}", value as i64);
    } else {
        let _ = write!(out, "{value}");
    }
}

fn render_terms(out: &mut String, terms: &[(f64, usize)], names: &[String]) {
    for (pos, &(coef, var)) in terms.iter().enumerate() {
        let sign = if coef < 0.0 { "-" } else { "+" };
        if pos == 0 && coef >= 0.0 {
            out.push(' ');
        } else {
            let _ = write!(out, " {sign} ");
        }
        let magnitude = coef.abs();
        if magnitude != 1.0 {
            render_number(out, magnitude);
            out.push(' ');
        }
        out.push_str(&names[var]);
        // Keep lines well under solver limits.
        if (pos + 1) % 8 == 0 && pos + 1 < terms.len() {
            out.push_str("\n   ");
        }
    }
}

fn render_constraint(out: &mut String, c: &LinConstraint, names: &[String]) {
    let _ = write!(out, " {}:", c.name);
    render_terms(out, &c.terms, names);
    let op = match c.sense {
        Sense::Eq => "=",
        Sense::Le => "<=",
        Sense::Ge => ">=",
    };
    let _ = write!(out, " {op} ");
    render_number(out, c.rhs);
    out.push('\n');
}

struct Builder {
    names: Vec<String>,
    keys: Vec<VarKey>,
    w: HashMap<(usize, usize, usize), usize>,
    x: HashMap<(usize, usize, usize, usize), usize>,
    y: HashMap<(usize, usize, usize, usize, usize), usize>,
}

impl Builder {
    fn add(&mut self, name: String, key: VarKey) -> usize {
        let id = self.names.len();
        self.names.push(name);
        self.keys.push(key);
        id
    }
}

/// Builds the flow model of an instance over its padded token set.
/// A distance limit drops the movement variables it forbids; the
/// `active_only` option does not alter the exported model.
pub fn build_model(instance: &TapInstance, cuts: &[SgiCut]) -> IlpModel {
    let n = instance.num_tokens();
    let num_layers = instance.layers.len();
    let graph = &instance.graph;
    let limit = instance.options.distance_limit;

    let mut b = Builder {
        names: Vec::new(),
        keys: Vec::new(),
        w: HashMap::new(),
        x: HashMap::new(),
        y: HashMap::new(),
    };

    // Directed arcs in deterministic edge order.
    let arcs: Vec<(usize, usize)> = graph
        .edges()
        .iter()
        .flat_map(|&(u, v)| [(u, v), (v, u)])
        .collect();

    for t in 1..=num_layers {
        for q in 0..n {
            for i in 0..n {
                let id = b.add(format!("w_{t}_{q}_{i}"), VarKey::W { t, q, i });
                b.w.insert((t, q, i), id);
            }
        }
    }
    for t in 1..num_layers {
        for q in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if limit.is_some_and(|l| graph.dist(i, j) > l) {
                        continue;
                    }
                    let id = b.add(format!("x_{t}_{q}_{i}_{j}"), VarKey::X { t, q, i, j });
                    b.x.insert((t, q, i, j), id);
                }
            }
        }
    }
    for (t, layer) in instance.layers.iter().enumerate() {
        let t = t + 1;
        for &(p, q) in layer {
            for &(i, j) in &arcs {
                let id = b.add(format!("y_{t}_{p}_{q}_{i}_{j}"), VarKey::Y { t, p, q, i, j });
                b.y.insert((t, p, q, i, j), id);
            }
        }
    }

    let mut objective: Vec<(f64, usize)> = Vec::new();
    for t in 1..num_layers {
        for q in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if let Some(&id) = b.x.get(&(t, q, i, j)) {
                        let c = graph.dist(i, j) as f64;
                        if c != 0.0 {
                            objective.push((c, id));
                        }
                    }
                }
            }
        }
    }

    let mut constraints: Vec<LinConstraint> = Vec::new();

    // Token conservation: flow out of layer t, flow into layer t+1.
    for t in 1..num_layers {
        for q in 0..n {
            for i in 0..n {
                let mut terms = vec![(1.0, b.w[&(t, q, i)])];
                for j in 0..n {
                    if let Some(&id) = b.x.get(&(t, q, i, j)) {
                        terms.push((-1.0, id));
                    }
                }
                constraints.push(LinConstraint {
                    name: format!("fo_{t}_{q}_{i}"),
                    terms,
                    sense: Sense::Eq,
                    rhs: 0.0,
                });
            }
        }
    }
    for t in 2..=num_layers {
        for q in 0..n {
            for i in 0..n {
                let mut terms = vec![(1.0, b.w[&(t, q, i)])];
                for j in 0..n {
                    if let Some(&id) = b.x.get(&(t - 1, q, j, i)) {
                        terms.push((-1.0, id));
                    }
                }
                constraints.push(LinConstraint {
                    name: format!("fi_{t}_{q}_{i}"),
                    terms,
                    sense: Sense::Eq,
                    rhs: 0.0,
                });
            }
        }
    }

    // Every gate runs on exactly one arc.
    for (t, layer) in instance.layers.iter().enumerate() {
        let t = t + 1;
        for &(p, q) in layer {
            let terms: Vec<(f64, usize)> =
                arcs.iter().map(|&(i, j)| (1.0, b.y[&(t, p, q, i, j)])).collect();
            constraints.push(LinConstraint {
                name: format!("gate_{t}_{p}_{q}"),
                terms,
                sense: Sense::Eq,
                rhs: 1.0,
            });
        }
    }

    // McCormick linearization of y = w_p_i * w_q_j.
    for (t, layer) in instance.layers.iter().enumerate() {
        let t = t + 1;
        for &(p, q) in layer {
            for &(i, j) in &arcs {
                let y = b.y[&(t, p, q, i, j)];
                let wp = b.w[&(t, p, i)];
                let wq = b.w[&(t, q, j)];
                constraints.push(LinConstraint {
                    name: format!("mc1_{t}_{p}_{q}_{i}_{j}"),
                    terms: vec![(1.0, y), (-1.0, wp)],
                    sense: Sense::Le,
                    rhs: 0.0,
                });
                constraints.push(LinConstraint {
                    name: format!("mc2_{t}_{p}_{q}_{i}_{j}"),
                    terms: vec![(1.0, y), (-1.0, wq)],
                    sense: Sense::Le,
                    rhs: 0.0,
                });
                constraints.push(LinConstraint {
                    name: format!("mc3_{t}_{p}_{q}_{i}_{j}"),
                    terms: vec![(1.0, y), (-1.0, wp), (-1.0, wq)],
                    sense: Sense::Ge,
                    rhs: -1.0,
                });
            }
        }
    }

    // Bijectivity of every layer's allocation.
    for t in 1..=num_layers {
        for q in 0..n {
            let terms: Vec<(f64, usize)> = (0..n).map(|i| (1.0, b.w[&(t, q, i)])).collect();
            constraints.push(LinConstraint {
                name: format!("at_{t}_{q}"),
                terms,
                sense: Sense::Eq,
                rhs: 1.0,
            });
        }
        for i in 0..n {
            let terms: Vec<(f64, usize)> = (0..n).map(|q| (1.0, b.w[&(t, q, i)])).collect();
            constraints.push(LinConstraint {
                name: format!("av_{t}_{i}"),
                terms,
                sense: Sense::Eq,
                rhs: 1.0,
            });
        }
    }

    // Cuts, each in restricted-token and all-token form.
    let mut cut_constraints: Vec<LinConstraint> = Vec::new();
    for (c_idx, cut) in cuts.iter().enumerate() {
        let movement_terms = |tokens: &dyn Fn(usize) -> bool| -> Vec<(f64, usize)> {
            let mut terms = Vec::new();
            for t in cut.t0..cut.t1 {
                for q in (0..n).filter(|&q| tokens(q)) {
                    for i in 0..n {
                        for j in 0..n {
                            if let Some(&id) = b.x.get(&(t, q, i, j)) {
                                let c = graph.dist(i, j) as f64;
                                if c != 0.0 {
                                    terms.push((c, id));
                                }
                            }
                        }
                    }
                }
            }
            terms
        };
        let in_subset = |q: usize| cut.tokens.binary_search(&q).is_ok();
        cut_constraints.push(LinConstraint {
            name: format!("sgi_r_{c_idx}"),
            terms: movement_terms(&in_subset),
            sense: Sense::Ge,
            rhs: cut.rhs_restricted() as f64,
        });
        cut_constraints.push(LinConstraint {
            name: format!("sgi_a_{c_idx}"),
            terms: movement_terms(&|_| true),
            sense: Sense::Ge,
            rhs: cut.rhs_all() as f64,
        });
    }

    IlpModel {
        var_names: b.names,
        var_keys: b.keys,
        objective,
        constraints,
        cut_constraints,
    }
}

/// The fully symmetric fractional point: every `w` at 1/|Q|, movement
/// only on self-loops at 1/|Q|, every `y` at 1/|A|. It satisfies the LP
/// relaxation of the base model with objective zero, which is exactly
/// why the cuts are worth emitting.
pub fn symmetric_fractional_solution(instance: &TapInstance, model: &IlpModel) -> Vec<f64> {
    let nq = instance.num_tokens() as f64;
    let arcs = (2 * instance.graph.num_edges()) as f64;
    model
        .var_keys
        .iter()
        .map(|key| match *key {
            VarKey::W { .. } => 1.0 / nq,
            VarKey::X { i, j, .. } => {
                if i == j {
                    1.0 / nq
                } else {
                    0.0
                }
            }
            VarKey::Y { .. } => 1.0 / arcs,
        })
        .collect()
}
