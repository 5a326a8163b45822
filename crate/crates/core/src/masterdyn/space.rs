use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::netcore::ReactionNetwork;

/// A finite, ordered set of population vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace {
    states: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    cap: u64,
    closed: bool,
}

fn total(s: &[u32]) -> u64 {
    s.iter().map(|&c| u64::from(c)).sum()
}

/// `ℓ + n − m` when `ℓ ≥ m`.
pub(crate) fn fire(state: &[u32], input: &[u32], output: &[u32]) -> Option<Vec<u32>> {
    state
        .iter()
        .zip(input.iter().zip(output))
        .map(|(&l, (&m, &n))| l.checked_sub(m).and_then(|d| d.checked_add(n)))
        .collect()
}

impl StateSpace {
    /// An explicit list of states. `closed` is computed against `n`: true
    /// when every applicable transition maps the list into itself.
    pub fn from_states(n: &ReactionNetwork, states: Vec<Vec<u32>>, cap: u64) -> Result<Self> {
        let mut index = HashMap::with_capacity(states.len());
        for (i, s) in states.iter().enumerate() {
            if s.len() != n.num_species() {
                return Err(Error::DimensionMismatch {
                    expected: n.num_species(),
                    found: s.len(),
                });
            }
            if index.insert(s.clone(), i).is_some() {
                return Err(Error::InvalidParameter(format!("duplicate state {s:?}")));
            }
        }
        let closed = states.iter().all(|s| {
            (0..n.transitions().len()).all(|j| {
                match fire(s, n.input(j).counts(), n.output(j).counts()) {
                    Some(t) => index.contains_key(&t),
                    None => true,
                }
            })
        });
        Ok(Self {
            states,
            index,
            cap,
            closed,
        })
    }

    pub fn states(&self) -> &[Vec<u32>] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, state: &[u32]) -> Option<usize> {
        self.index.get(state).copied()
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    /// No transition leaves the set.
    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn max_count(&self) -> u32 {
        self.states.iter().flatten().copied().max().unwrap_or(0)
    }
}

/// Breadth-first enumeration of the states reachable from `n0` without the
/// total count exceeding `cap`.
pub fn enumerate_states(n: &ReactionNetwork, n0: &[u32], cap: u64) -> Result<StateSpace> {
    enumerate_states_from(n, &[n0.to_vec()], cap)
}

/// Like [`enumerate_states`], from several seeds at once; the result is the
/// union of their reachable sets, in BFS order.
pub fn enumerate_states_from(
    n: &ReactionNetwork,
    seeds: &[Vec<u32>],
    cap: u64,
) -> Result<StateSpace> {
    let s = n.num_species();
    let mut states = Vec::new();
    let mut index = HashMap::new();
    let mut queue = VecDeque::new();
    for seed in seeds {
        if seed.len() != s {
            return Err(Error::DimensionMismatch {
                expected: s,
                found: seed.len(),
            });
        }
        if total(seed) > cap {
            return Err(Error::InvalidParameter(format!(
                "cap {cap} is below the initial total count {}",
                total(seed)
            )));
        }
        if !index.contains_key(seed) {
            index.insert(seed.clone(), states.len());
            states.push(seed.clone());
            queue.push_back(seed.clone());
        }
    }

    let mut closed = true;
    while let Some(state) = queue.pop_front() {
        for j in 0..n.transitions().len() {
            let Some(next) = fire(&state, n.input(j).counts(), n.output(j).counts()) else {
                continue;
            };
            if total(&next) > cap {
                closed = false;
                continue;
            }
            if !index.contains_key(&next) {
                index.insert(next.clone(), states.len());
                states.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(StateSpace {
        states,
        index,
        cap,
        closed,
    })
}

fn check_len(space: &StateSpace, psi: &[f64]) -> Result<()> {
    if psi.len() != space.len() {
        return Err(Error::DimensionMismatch {
            expected: space.len(),
            found: psi.len(),
        });
    }
    Ok(())
}

fn normalized(mut psi: Vec<f64>) -> Result<Vec<f64>> {
    let sum: f64 = psi.iter().sum();
    if !(sum > 0.0 && sum.is_finite()) {
        return Err(Error::Numerical(format!("cannot normalize a vector with mass {sum}")));
    }
    for p in psi.iter_mut() {
        *p /= sum;
    }
    Ok(psi)
}

/// The distribution concentrated on `state`.
pub fn point_mass(space: &StateSpace, state: &[u32]) -> Result<Vec<f64>> {
    let i = space
        .index_of(state)
        .ok_or_else(|| Error::InvalidParameter(format!("state {state:?} is not in the space")))?;
    let mut psi = vec![0.0; space.len()];
    psi[i] = 1.0;
    Ok(psi)
}

/// `w·ℓ` for every state.
pub fn observable_values(space: &StateSpace, w: &[f64]) -> Vec<f64> {
    space
        .states()
        .iter()
        .map(|s| s.iter().zip(w).map(|(&c, wi)| f64::from(c) * wi).sum())
        .collect()
}

/// `Σ_ℓ (o·ℓ)^order ψ_ℓ` for `order ∈ {1, 2}`.
pub fn moments(space: &StateSpace, psi: &[f64], o: &[f64], order: u32) -> Result<f64> {
    check_len(space, psi)?;
    if !(order == 1 || order == 2) {
        return Err(Error::InvalidParameter(format!("moment order must be 1 or 2, got {order}")));
    }
    Ok(observable_values(space, o)
        .iter()
        .zip(psi)
        .map(|(v, p)| v.powi(order as i32) * p)
        .sum())
}

/// Restricts `psi` to the states with `w·ℓ = k` and renormalizes.
pub fn condition_on_class(space: &StateSpace, psi: &[f64], w: &[i64], k: i64) -> Result<Vec<f64>> {
    check_len(space, psi)?;
    let mut any = false;
    let out: Vec<f64> = space
        .states()
        .iter()
        .zip(psi)
        .map(|(s, &p)| {
            let v: i64 = s.iter().zip(w).map(|(&c, &wi)| i64::from(c) * wi).sum();
            if v == k {
                any = true;
                p
            } else {
                0.0
            }
        })
        .collect();
    if !any {
        return Err(Error::InvalidParameter(format!("no state has w·ℓ = {k}")));
    }
    normalized(out)
}

/// `ψ ↦ exp(sO)ψ`, renormalized, where `o` lists the observable's value on
/// each state.
pub fn symmetry_scale(space: &StateSpace, psi: &[f64], o: &[f64], s: f64) -> Result<Vec<f64>> {
    check_len(space, psi)?;
    check_len(space, o)?;
    // shift the exponent so the largest weight on the support is e⁰
    let top = o
        .iter()
        .zip(psi)
        .filter(|(_, &p)| p != 0.0)
        .map(|(v, _)| s * v)
        .fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return Err(Error::Overflow);
    }
    let out: Vec<f64> = o
        .iter()
        .zip(psi)
        .map(|(v, p)| if *p == 0.0 { 0.0 } else { p * (s * v - top).exp() })
        .collect();
    normalized(out).map_err(|_| Error::Overflow)
}

/// `½ Σ |p − q|`.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// `state_index,<species...>,probability`, one row per state.
pub fn distribution_csv(n: &ReactionNetwork, space: &StateSpace, psi: &[f64]) -> String {
    let mut out = String::from("state_index");
    for name in n.species().names() {
        out.push(',');
        out.push_str(name);
    }
    out.push_str(",probability\n");
    for (i, (s, p)) in space.states().iter().zip(psi).enumerate() {
        let _ = write!(out, "{i}");
        for c in s {
            let _ = write!(out, ",{c}");
        }
        let _ = writeln!(out, ",{p:e}");
    }
    out
}
