use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::operator::propensity;
use super::space::fire;
use crate::error::{Error, Result};
use crate::netcore::ReactionNetwork;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsaConfig {
    pub t_end: f64,
    pub seed: u64,
    pub trials: usize,
    /// Number of equal time bins; the mean is recorded at `bins + 1` times.
    pub bins: usize,
    /// Worker threads; `1` runs on the calling thread.
    pub threads: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SsaResult {
    pub config: SsaConfig,
    pub end_states: Vec<Vec<u32>>,
    pub bin_times: Vec<f64>,
    /// Mean population at each bin time, averaged over trials in trial order.
    pub bin_means: Vec<Vec<f64>>,
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SsaSummary {
    pub trials: usize,
    pub seed: u64,
    pub t: f64,
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
}

impl SsaResult {
    pub fn summary(&self) -> SsaSummary {
        SsaSummary {
            trials: self.config.trials,
            seed: self.config.seed,
            t: self.config.t_end,
            mean: self.mean.clone(),
            variance: self.variance.clone(),
        }
    }
}

/// One Gillespie trajectory. Returns the state at each of `grid`'s times.
fn run_trial(
    n: &ReactionNetwork,
    n0: &[u32],
    grid: &[f64],
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Vec<u32>>> {
    let transitions = n.transitions();
    let mut state = n0.to_vec();
    let mut t = 0.0;
    let mut out = Vec::with_capacity(grid.len());
    let mut next_grid = 0;
    let mut props = vec![0.0; transitions.len()];
    let t_end = *grid.last().expect("grid is nonempty");
    loop {
        let mut total = 0.0;
        for (j, tr) in transitions.iter().enumerate() {
            props[j] = propensity(tr.rate, n.input(j).counts(), &state);
            total += props[j];
        }
        let wait = if total > 0.0 {
            let u: f64 = rng.random();
            -(1.0 - u).ln() / total
        } else {
            f64::INFINITY
        };
        let t_next = t + wait;
        while next_grid < grid.len() && grid[next_grid] < t_next {
            out.push(state.clone());
            next_grid += 1;
        }
        if t_next > t_end {
            // the last grid point is t_end itself; include a jump exactly there
            while next_grid < grid.len() {
                out.push(state.clone());
                next_grid += 1;
            }
            return Ok(out);
        }
        let target = rng.random::<f64>() * total;
        let mut acc = 0.0;
        let mut chosen = transitions.len() - 1;
        for (j, p) in props.iter().enumerate() {
            acc += p;
            if target < acc {
                chosen = j;
                break;
            }
        }
        while props[chosen] == 0.0 {
            chosen -= 1;
        }
        state = fire(&state, n.input(chosen).counts(), n.output(chosen).counts())
            .ok_or(Error::Overflow)?;
        t = t_next;
    }
}

/// Gillespie's direct method. Trial `i` draws from a ChaCha8 generator seeded
/// with `seed` on stream `i`, so results do not depend on the thread count.
pub fn ssa_sample(n: &ReactionNetwork, n0: &[u32], config: SsaConfig) -> Result<SsaResult> {
    if config.trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    if !(config.t_end >= 0.0 && config.t_end.is_finite()) {
        return Err(Error::InvalidParameter(format!("t must be nonnegative, got {}", config.t_end)));
    }
    if n0.len() != n.num_species() {
        return Err(Error::DimensionMismatch {
            expected: n.num_species(),
            found: n0.len(),
        });
    }
    let bins = config.bins.max(1);
    let grid: Vec<f64> = (0..=bins)
        .map(|j| {
            if j == bins {
                config.t_end
            } else {
                config.t_end * j as f64 / bins as f64
            }
        })
        .collect();

    let trial = |i: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(i as u64);
        run_trial(n, n0, &grid, &mut rng)
    };
    let paths: Vec<Vec<Vec<u32>>> = if config.threads <= 1 {
        (0..config.trials).map(trial).collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| Error::Internal(e.to_string()))?;
        pool.install(|| (0..config.trials).into_par_iter().map(trial).collect::<Result<_>>())?
    };

    let s = n.num_species();
    let trials = config.trials as f64;
    let mut bin_means = vec![vec![0.0; s]; grid.len()];
    for path in &paths {
        for (acc, state) in bin_means.iter_mut().zip(path) {
            for (a, &c) in acc.iter_mut().zip(state) {
                *a += f64::from(c);
            }
        }
    }
    for row in bin_means.iter_mut() {
        for a in row.iter_mut() {
            *a /= trials;
        }
    }
    let end_states: Vec<Vec<u32>> = paths.into_iter().map(|mut p| p.pop().unwrap()).collect();
    let mean = bin_means.last().unwrap().clone();
    let mut variance = vec![0.0; s];
    for state in &end_states {
        for i in 0..s {
            variance[i] += (f64::from(state[i]) - mean[i]).powi(2);
        }
    }
    let denom = (trials - 1.0).max(1.0);
    for v in variance.iter_mut() {
        *v /= denom;
    }
    Ok(SsaResult {
        config,
        end_states,
        bin_times: grid,
        bin_means,
        mean,
        variance,
    })
}
