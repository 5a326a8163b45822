use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use super::{hamiltonian, GraphWithRates};
use crate::error::{Error, Result};
use crate::exactlin::{least_squares, perron_frobenius, RealMatrix};

/// Strong-component label of every state. Labels are numbered in order of
/// each component's smallest state.
pub fn strong_components_of(g: &GraphWithRates) -> Vec<usize> {
    let mut dg = DiGraph::<(), ()>::with_capacity(g.num_states, g.edges.len());
    let nodes: Vec<_> = (0..g.num_states).map(|_| dg.add_node(())).collect();
    for e in &g.edges {
        dg.add_edge(nodes[e.source], nodes[e.target], ());
    }
    let mut comps: Vec<Vec<usize>> = tarjan_scc(&dg)
        .into_iter()
        .map(|c| {
            let mut v: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
            v.sort_unstable();
            v
        })
        .collect();
    comps.sort_by_key(|c| c[0]);
    let mut label = vec![0; g.num_states];
    for (i, c) in comps.iter().enumerate() {
        for &s in c {
            label[s] = i;
        }
    }
    label
}

/// Strong components with no edge leaving them, each sorted, ordered by
/// smallest state.
pub fn terminal_classes(g: &GraphWithRates) -> Vec<Vec<usize>> {
    let label = strong_components_of(g);
    let count = label.iter().max().map_or(0, |m| m + 1);
    let mut leaves = vec![false; count];
    for e in &g.edges {
        if label[e.source] != label[e.target] {
            leaves[label[e.source]] = true;
        }
    }
    let mut classes = vec![Vec::new(); count];
    for (s, &l) in label.iter().enumerate() {
        classes[l].push(s);
    }
    classes
        .into_iter()
        .zip(leaves)
        .filter(|(_, leaves)| !leaves)
        .map(|(c, _)| c)
        .collect()
}

fn bordered_solve(h_c: &RealMatrix) -> Result<Vec<f64>> {
    let n = h_c.rows();
    let mut a = RealMatrix::zeros(n + 1, n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = h_c[(i, j)];
        }
        a[(n, i)] = 1.0;
    }
    let mut b = vec![0.0; n + 1];
    b[n] = 1.0;
    Ok(least_squares(&a, &b)?.solution)
}

/// Equilibria of the master equation, one probability vector per terminal
/// strong component. For a weakly reversible graph these are exactly the
/// connected components and each vector is strictly positive on its
/// component; in general the vectors still span `ker H`.
///
/// Each vector comes from the bordered system `{H_C ψ = 0, Σψ = 1}` solved by
/// least squares and is cross-checked against the Perron–Frobenius vector of
/// `H_C + cI`, `c = 1 + max|diag H_C|`.
pub fn component_equilibria(g: &GraphWithRates) -> Result<Vec<Vec<f64>>> {
    let h = hamiltonian(g)?;
    let mut out = Vec::new();
    for class in terminal_classes(g) {
        let h_c = h.principal_submatrix(&class);
        let psi_c = bordered_solve(&h_c)?;
        if psi_c.iter().any(|&x| x <= 0.0 || x.is_nan()) {
            return Err(Error::Numerical(format!(
                "equilibrium on class {class:?} is not strictly positive"
            )));
        }

        let c = 1.0 + (0..class.len()).map(|i| h_c[(i, i)].abs()).fold(0.0, f64::max);
        let pf = perron_frobenius(&h_c.shift(c))?;
        let top = psi_c.iter().cloned().fold(0.0, f64::max);
        let gap = psi_c
            .iter()
            .zip(&pf.v)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if gap > 1e-8 * top {
            return Err(Error::Internal(format!(
                "bordered solve and Perron–Frobenius disagree by {gap:e} on class {class:?}"
            )));
        }

        let mut psi = vec![0.0; g.num_states];
        for (&s, &x) in class.iter().zip(&psi_c) {
            psi[s] = x;
        }
        out.push(psi);
    }
    Ok(out)
}
