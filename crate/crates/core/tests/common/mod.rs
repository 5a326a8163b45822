#![allow(dead_code)]

use proptest::prelude::*;
use proptest::sample::Index;
use stochnet::exactlin::RealMatrix;
use stochnet::netcore::{Complex, ReactionNetwork, SpeciesTable, Transition};

/// Builds a network from a pool of complex vectors and edges into the pool.
/// Duplicate complexes are merged; only complexes touched by an edge are kept.
pub fn build_network(species: usize, pool: &[Vec<u32>], edges: &[(usize, usize, f64)]) -> ReactionNetwork {
    let names: Vec<String> = (0..species).map(|i| format!("S{i}")).collect();
    let table = SpeciesTable::from_names(names.iter().map(String::as_str)).unwrap();
    let mut complexes: Vec<Vec<u32>> = Vec::new();
    let mut intern = |c: &Vec<u32>| match complexes.iter().position(|x| x == c) {
        Some(i) => i,
        None => {
            complexes.push(c.clone());
            complexes.len() - 1
        }
    };
    let transitions: Vec<Transition> = edges
        .iter()
        .map(|&(a, b, rate)| Transition {
            source: intern(&pool[a]),
            target: intern(&pool[b]),
            rate,
        })
        .collect();
    ReactionNetwork::new(table, complexes.into_iter().map(Complex).collect(), transitions).unwrap()
}

pub fn arb_network(
    max_species: usize,
    max_complexes: usize,
    max_transitions: usize,
    max_count: u32,
) -> impl Strategy<Value = ReactionNetwork> {
    (1..=max_species).prop_flat_map(move |s| {
        (
            prop::collection::vec(prop::collection::vec(0..=max_count, s), 1..=max_complexes),
            prop::collection::vec((any::<Index>(), any::<Index>(), 0.1f64..5.0), 1..=max_transitions),
        )
            .prop_map(move |(pool, raw)| {
                let edges: Vec<(usize, usize, f64)> = raw
                    .iter()
                    .map(|(a, b, r)| (a.index(pool.len()), b.index(pool.len()), *r))
                    .collect();
                build_network(s, &pool, &edges)
            })
    })
}

/// Weakly reversible networks: every edge is paired with its reverse.
pub fn arb_reversible_network(
    max_species: usize,
    max_complexes: usize,
    max_pairs: usize,
    max_count: u32,
) -> impl Strategy<Value = ReactionNetwork> {
    (1..=max_species).prop_flat_map(move |s| {
        (
            prop::collection::vec(prop::collection::vec(0..=max_count, s), 2..=max_complexes),
            prop::collection::vec(
                (any::<Index>(), any::<Index>(), 0.1f64..5.0, 0.1f64..5.0),
                1..=max_pairs,
            ),
        )
            .prop_map(move |(pool, raw)| {
                let mut edges = Vec::new();
                for (a, b, r1, r2) in raw {
                    let (a, b) = (a.index(pool.len()), b.index(pool.len()));
                    edges.push((a, b, r1));
                    edges.push((b, a, r2));
                }
                build_network(s, &pool, &edges)
            })
    })
}

/// Symmetric nonnegative weights with zero diagonal, some entries zero.
pub fn arb_weights(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = RealMatrix> {
    n.prop_flat_map(|n| {
        prop::collection::vec(prop_oneof![Just(0.0), 0.01f64..5.0], n * n).prop_map(move |v| {
            let mut m = RealMatrix::zeros(n, n);
            for i in 0..n {
                for j in (i + 1)..n {
                    m[(i, j)] = v[i * n + j];
                    m[(j, i)] = v[i * n + j];
                }
            }
            m
        })
    })
}

/// Fills in the diagonal so every column sums to zero. Applied to symmetric
/// weights this gives the corresponding Dirichlet operator.
pub fn with_zero_column_sums(w: &RealMatrix) -> RealMatrix {
    let n = w.rows();
    let mut h = w.clone();
    for j in 0..n {
        let s: f64 = (0..n).filter(|&i| i != j).map(|i| w[(i, j)]).sum();
        h[(j, j)] = -s;
    }
    h
}

/// Infinitesimal stochastic matrices with nonnegative, not necessarily
/// symmetric off-diagonal entries.
pub fn arb_generator(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = RealMatrix> {
    n.prop_flat_map(|n| {
        prop::collection::vec(prop_oneof![2 => Just(0.0), 3 => 0.01f64..5.0], n * n).prop_map(
            move |v| {
                let mut m = RealMatrix::zeros(n, n);
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            m[(i, j)] = v[i * n + j];
                        }
                    }
                }
                with_zero_column_sums(&m)
            },
        )
    })
}

pub fn to_nalgebra(m: &RealMatrix) -> nalgebra::DMatrix<f64> {
    nalgebra::DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}
