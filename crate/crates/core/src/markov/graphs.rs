use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::Operator;
use crate::error::{Error, Result};
use crate::exactlin::RealMatrix;

/// Undirected simple graph with positive edge weights (conductances).
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleGraph {
    num_vertices: usize,
    /// Each edge stored once with `u < v`.
    edges: Vec<(usize, usize, f64)>,
    labels: Vec<String>,
}

impl SimpleGraph {
    pub fn new(num_vertices: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let labels = (0..num_vertices).map(|i| i.to_string()).collect();
        Self::with_labels(num_vertices, edges, labels)
    }

    pub fn with_labels(
        num_vertices: usize,
        edges: Vec<(usize, usize, f64)>,
        labels: Vec<String>,
    ) -> Result<Self> {
        if labels.len() != num_vertices {
            return Err(Error::DimensionMismatch {
                expected: num_vertices,
                found: labels.len(),
            });
        }
        let mut seen = BTreeSet::new();
        let mut normalized = Vec::with_capacity(edges.len());
        for (u, v, w) in edges {
            if u >= num_vertices || v >= num_vertices {
                return Err(Error::InvalidParameter(format!("edge ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("loop at vertex {u}")));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidParameter(format!("edge ({u},{v}) has weight {w}")));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(Error::InvalidParameter(format!("parallel edge ({u},{v})")));
            }
            normalized.push((key.0, key.1, w));
        }
        Ok(Self {
            num_vertices,
            edges: normalized,
            labels,
        })
    }

    /// Reads a symmetric weight matrix with zero diagonal; zero entries mean
    /// "no edge".
    pub fn from_weight_matrix(m: &RealMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: m.rows(),
                found: m.cols(),
            });
        }
        let n = m.rows();
        let mut edges = Vec::new();
        for i in 0..n {
            if m[(i, i)] != 0.0 {
                return Err(Error::InvalidParameter(format!("nonzero diagonal at {i}")));
            }
            for j in (i + 1)..n {
                let (a, b) = (m[(i, j)], m[(j, i)]);
                if a != b {
                    return Err(Error::NotSymmetric((a - b).abs()));
                }
                if a < 0.0 {
                    return Err(Error::InvalidParameter(format!("negative weight at ({i},{j})")));
                }
                if a > 0.0 {
                    edges.push((i, j, a));
                }
            }
        }
        Self::new(n, edges)
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.0 == v || e.1 == v).count()
    }

    /// Two-coloring if one exists.
    pub fn is_bipartite(&self) -> bool {
        let mut color = vec![None; self.num_vertices];
        for start in 0..self.num_vertices {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(false);
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                let cu = color[u].unwrap();
                for &(a, b, _) in &self.edges {
                    let other = if a == u {
                        b
                    } else if b == u {
                        a
                    } else {
                        continue;
                    };
                    match color[other] {
                        None => {
                            color[other] = Some(!cu);
                            stack.push(other);
                        }
                        Some(c) if c == cu => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }

    /// Graphviz rendering with vertex labels and edge weights.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("graph {name} {{\n");
        for (i, label) in self.labels.iter().enumerate() {
            let _ = writeln!(out, "  {i} [label=\"{label}\"];");
        }
        for &(u, v, w) in &self.edges {
            let _ = writeln!(out, "  {u} -- {v} [weight={w}];");
        }
        out.push_str("}\n");
        out
    }
}

/// Weighted graph Laplacian: `H_xy = w(x,y)` off the diagonal and
/// `H_xx = −Σ_y w(x,y)`.
pub fn graph_laplacian(g: &SimpleGraph) -> Operator {
    let n = g.num_vertices;
    let mut h = RealMatrix::zeros(n, n);
    for &(u, v, w) in &g.edges {
        h[(u, v)] += w;
        h[(v, u)] += w;
        h[(u, u)] -= w;
        h[(v, v)] -= w;
    }
    h
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphSpec {
    Desargues,
    Petersen,
    Cycle(usize),
    Complete(usize),
    /// The `k`- and `(k+1)`-element subsets of an `n`-set, joined by inclusion.
    HypercubeLevels { n: usize, k: usize },
}

impl GraphSpec {
    /// Parses a generator name with its integer arguments, e.g.
    /// `("cycle", ["3"])` or `("hypercube_levels", ["5", "2"])`.
    pub fn parse(name: &str, args: &[String]) -> Result<Self> {
        let ints: Vec<usize> = args
            .iter()
            .map(|a| {
                a.parse()
                    .map_err(|_| Error::InvalidParameter(format!("expected integer, got `{a}`")))
            })
            .collect::<Result<_>>()?;
        let arity = |want: usize| -> Result<()> {
            if ints.len() == want {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "generator `{name}` takes {want} argument(s), got {}",
                    ints.len()
                )))
            }
        };
        match name {
            "desargues" => arity(0).map(|_| Self::Desargues),
            "petersen" => arity(0).map(|_| Self::Petersen),
            "cycle" => arity(1).map(|_| Self::Cycle(ints[0])),
            "complete" => arity(1).map(|_| Self::Complete(ints[0])),
            "hypercube_levels" => {
                // accept either (n, k) or (n, k, k+1)
                if ints.len() == 3 && ints[2] == ints[1] + 1 {
                    return Ok(Self::HypercubeLevels { n: ints[0], k: ints[1] });
                }
                arity(2).map(|_| Self::HypercubeLevels { n: ints[0], k: ints[1] })
            }
            other => Err(Error::InvalidParameter(format!("unknown graph generator `{other}`"))),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::Desargues => "desargues".into(),
            Self::Petersen => "petersen".into(),
            Self::Cycle(n) => format!("cycle_{n}"),
            Self::Complete(n) => format!("complete_{n}"),
            Self::HypercubeLevels { n, k } => format!("hypercube_levels_{n}_{k}"),
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn subset_label(s: &[usize]) -> String {
    let inner: Vec<String> = s.iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

fn hypercube_levels(n: usize, k: usize) -> Result<SimpleGraph> {
    if k >= n {
        return Err(Error::InvalidParameter(format!("need k < n, got n={n}, k={k}")));
    }
    let lower = subsets(n, k);
    let upper = subsets(n, k + 1);
    let mut edges = Vec::new();
    for (i, a) in lower.iter().enumerate() {
        for (j, b) in upper.iter().enumerate() {
            if a.iter().all(|x| b.contains(x)) {
                edges.push((i, lower.len() + j, 1.0));
            }
        }
    }
    let labels = lower.iter().chain(&upper).map(|s| subset_label(s)).collect();
    SimpleGraph::with_labels(lower.len() + upper.len(), edges, labels)
}

/// Named graphs with unit weights. The Desargues graph is built from the 2-
/// and 3-element subsets of a 5-set under inclusion; the Petersen graph from
/// the 2-element subsets with edges between disjoint pairs.
pub fn generate_graph(spec: GraphSpec) -> Result<SimpleGraph> {
    match spec {
        GraphSpec::Desargues => hypercube_levels(5, 2),
        GraphSpec::HypercubeLevels { n, k } => hypercube_levels(n, k),
        GraphSpec::Petersen => {
            let verts = subsets(5, 2);
            let mut edges = Vec::new();
            for i in 0..verts.len() {
                for j in (i + 1)..verts.len() {
                    if verts[i].iter().all(|x| !verts[j].contains(x)) {
                        edges.push((i, j, 1.0));
                    }
                }
            }
            let labels = verts.iter().map(|s| subset_label(s)).collect();
            SimpleGraph::with_labels(verts.len(), edges, labels)
        }
        GraphSpec::Cycle(n) => {
            if n < 3 {
                return Err(Error::InvalidParameter(format!("cycle needs n ≥ 3, got {n}")));
            }
            SimpleGraph::new(n, (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect())
        }
        GraphSpec::Complete(n) => {
            if n == 0 {
                return Err(Error::InvalidParameter("complete graph needs n ≥ 1".into()));
            }
            let edges = (0..n)
                .flat_map(|i| ((i + 1)..n).map(move |j| (i, j, 1.0)))
                .collect();
            SimpleGraph::new(n, edges)
        }
    }
}
