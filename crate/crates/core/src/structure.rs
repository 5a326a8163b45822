//! Structural analysis of a reaction network: the incidence maps `s`, `t`,
//! `∂ = t − s` and `Y`, connected and strongly connected components, weak
//! reversibility, the stoichiometric subspace `im Y∂`, linear conservation
//! laws, and the deficiency.
//!
//! Everything here is exact integer arithmetic.

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::{int_kernel_basis, int_left_kernel_basis, int_rank, pivot_columns, IntMatrix};
use crate::netcore::ReactionNetwork;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMaps {
    /// `|K| × |T|`, column `τ` is the indicator of `s(τ)`.
    pub s_mat: IntMatrix,
    /// `|K| × |T|`, column `τ` is the indicator of `t(τ)`.
    pub t_mat: IntMatrix,
    /// `∂ = t − s`.
    pub boundary: IntMatrix,
    /// `|S| × |K|`, column `κ` is the complex vector `Y(κ)`.
    pub y_mat: IntMatrix,
}

impl IncidenceMaps {
    /// `Y∂`, whose columns are the reaction vectors.
    pub fn stoichiometric_matrix(&self) -> IntMatrix {
        self.y_mat
            .mul(&self.boundary)
            .expect("entries of Y∂ are bounded by complex sizes")
    }
}

pub fn build_incidence(n: &ReactionNetwork) -> IncidenceMaps {
    let (k, t, s) = (n.num_complexes(), n.transitions().len(), n.num_species());
    let mut s_mat = IntMatrix::zeros(k, t);
    let mut t_mat = IntMatrix::zeros(k, t);
    for (j, tr) in n.transitions().iter().enumerate() {
        s_mat[(tr.source, j)] = 1;
        t_mat[(tr.target, j)] = 1;
    }
    let mut boundary = IntMatrix::zeros(k, t);
    for i in 0..k {
        for j in 0..t {
            boundary[(i, j)] = t_mat[(i, j)] - s_mat[(i, j)];
        }
    }
    let mut y_mat = IntMatrix::zeros(s, k);
    for (c, complex) in n.complexes().iter().enumerate() {
        for (i, &count) in complex.counts().iter().enumerate() {
            y_mat[(i, c)] = i64::from(count);
        }
    }
    IncidenceMaps {
        s_mat,
        t_mat,
        boundary,
        y_mat,
    }
}

/// Relabels an arbitrary partition so that components are numbered in order
/// of their smallest member.
fn canonical_labels(raw: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    raw.iter()
        .map(|r| {
            let next = map.len();
            *map.entry(*r).or_insert(next)
        })
        .collect()
}

/// Connected components of the complex graph, ignoring edge directions.
/// Returns the component id of every complex.
pub fn connected_components(n: &ReactionNetwork) -> Vec<usize> {
    let mut uf = UnionFind::new(n.num_complexes());
    for t in n.transitions() {
        uf.union(t.source, t.target);
    }
    let raw: Vec<usize> = (0..n.num_complexes()).map(|i| uf.find(i)).collect();
    canonical_labels(&raw)
}

/// Strongly connected components (Tarjan). Returns the component id of
/// every complex, numbered by smallest member.
pub fn strong_components(n: &ReactionNetwork) -> Vec<usize> {
    let mut g = DiGraph::<(), ()>::with_capacity(n.num_complexes(), n.transitions().len());
    let nodes: Vec<_> = (0..n.num_complexes()).map(|_| g.add_node(())).collect();
    for t in n.transitions() {
        g.add_edge(nodes[t.source], nodes[t.target], ());
    }
    let mut raw = vec![0; n.num_complexes()];
    for (id, scc) in tarjan_scc(&g).into_iter().enumerate() {
        for v in scc {
            raw[v.index()] = id;
        }
    }
    canonical_labels(&raw)
}

fn count_labels(labels: &[usize]) -> usize {
    labels.iter().max().map_or(0, |m| m + 1)
}

/// Every transition can be undone by a directed path: the endpoints of each
/// edge share a strongly connected component.
pub fn weakly_reversible(n: &ReactionNetwork) -> bool {
    let scc = strong_components(n);
    n.transitions().iter().all(|t| scc[t.source] == scc[t.target])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    #[serde(rename = "complexes")]
    pub num_complexes: usize,
    #[serde(rename = "components")]
    pub num_components: usize,
    #[serde(rename = "strong_components")]
    pub num_strong_components: usize,
    pub weakly_reversible: bool,
    pub stoich_dim: usize,
    pub deficiency: usize,
    pub conservation_laws: Vec<Vec<i64>>,
    #[serde(skip)]
    pub component_of: Vec<usize>,
}

/// `dim(im ∂ ∩ ker Y)`, computed directly: a basis `B` of `im ∂` is read off
/// the pivot columns of `∂`, and the intersection is `B·ker(Y·B)`.
fn intersection_dimension(maps: &IncidenceMaps) -> Result<usize> {
    let pivots = pivot_columns(&maps.boundary);
    if pivots.is_empty() {
        return Ok(0);
    }
    let basis = maps.boundary.select_columns(&pivots);
    let yb = maps.y_mat.mul(&basis)?;
    Ok(int_kernel_basis(&yb)?.len())
}

/// Full structural report. The deficiency is computed both as
/// `dim(im ∂ ∩ ker Y)` and as `|K| − #components − dim(im Y∂)`; disagreement
/// is reported as [`Error::Internal`].
pub fn deficiency(n: &ReactionNetwork) -> Result<StructureReport> {
    let maps = build_incidence(n);
    let component_of = connected_components(n);
    let num_components = count_labels(&component_of);
    let num_strong_components = count_labels(&strong_components(n));
    let yd = maps.stoichiometric_matrix();
    let stoich_dim = int_rank(&yd);
    let k = n.num_complexes();

    let by_intersection = intersection_dimension(&maps)?;
    let by_formula = (k as i64) - (num_components as i64) - (stoich_dim as i64);
    if by_formula != by_intersection as i64 {
        return Err(Error::Internal(format!(
            "deficiency mismatch: dim(im ∂ ∩ ker Y) = {by_intersection}, \
             |K| - components - dim(im Y∂) = {by_formula}"
        )));
    }

    Ok(StructureReport {
        num_complexes: k,
        num_components,
        num_strong_components,
        weakly_reversible: weakly_reversible(n),
        stoich_dim,
        deficiency: by_intersection,
        conservation_laws: int_left_kernel_basis(&yd)?,
        component_of,
    })
}

/// Basis of the left kernel of `Y∂`: integer vectors `w` with `w·(Y∂) = 0`.
pub fn conservation_laws(n: &ReactionNetwork) -> Result<Vec<Vec<i64>>> {
    int_left_kernel_basis(&build_incidence(n).stoichiometric_matrix())
}

/// Whether `x − y` lies in the stoichiometric subspace, i.e. every
/// conservation law takes the same value on `x` and `y` (to within `1e-9`
/// relative).
pub fn same_compatibility_class(n: &ReactionNetwork, x: &[f64], y: &[f64]) -> Result<bool> {
    let s = n.num_species();
    for v in [x, y] {
        if v.len() != s {
            return Err(Error::DimensionMismatch {
                expected: s,
                found: v.len(),
            });
        }
    }
    let laws = conservation_laws(n)?;
    Ok(laws.iter().all(|w| {
        let mut diff = 0.0;
        let mut scale: f64 = 1.0;
        for ((&wi, &xi), &yi) in w.iter().zip(x).zip(y) {
            let wi = wi as f64;
            diff += wi * (xi - yi);
            scale += (wi * xi).abs() + (wi * yi).abs();
        }
        diff.abs() <= 1e-9 * scale
    }))
}
