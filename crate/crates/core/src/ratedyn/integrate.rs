use std::fmt::Write as _;

use super::RateSystem;
use crate::error::{Error, Result};
use crate::netcore::ReactionNetwork;

/// How far below zero a component may drift before integration aborts.
pub const NEGATIVITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub species: Vec<String>,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// Step-doubling error estimate for each step: `‖y_h − y_{h/2}‖∞ / 15`.
    pub step_errors: Vec<f64>,
}

impl Trajectory {
    pub fn final_state(&self) -> &[f64] {
        self.states.last().expect("trajectory has at least one sample")
    }

    pub fn max_step_error(&self) -> f64 {
        self.step_errors.iter().cloned().fold(0.0, f64::max)
    }

    /// `t,<species...>` header followed by one row per sample.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for s in &self.species {
            out.push(',');
            out.push_str(s);
        }
        out.push('\n');
        for (t, x) in self.times.iter().zip(&self.states) {
            let _ = write!(out, "{t:e}");
            for v in x {
                let _ = write!(out, ",{v:e}");
            }
            out.push('\n');
        }
        out
    }
}

fn axpy(x: &[f64], a: f64, k: &[f64]) -> Vec<f64> {
    x.iter().zip(k).map(|(xi, ki)| xi + a * ki).collect()
}

fn rk4_step(sys: &RateSystem, x: &[f64], h: f64) -> Vec<f64> {
    let f = |y: &[f64]| sys.classical(y).0;
    let k1 = f(x);
    let k2 = f(&axpy(x, h / 2.0, &k1));
    let k3 = f(&axpy(x, h / 2.0, &k2));
    let k4 = f(&axpy(x, h, &k3));
    x.iter()
        .enumerate()
        .map(|(i, xi)| xi + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

/// Integrates the rate equation from `x0` with classical fixed-step RK4.
/// Every step is recorded; the last one is shortened to land on `t_end`.
/// Leaving the nonnegative orthant by more than [`NEGATIVITY_TOL`] or
/// producing NaN is an error: the step size is too large.
pub fn integrate_rate(n: &ReactionNetwork, x0: &[f64], t_end: f64, dt: f64) -> Result<Trajectory> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidParameter(format!("t_end must be nonnegative, got {t_end}")));
    }
    let sys = RateSystem::new(n)?;
    sys.rhs(x0)?;

    let steps = (t_end / dt - 1e-9).ceil().max(0.0) as usize;
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut step_errors = Vec::with_capacity(steps);
    times.push(0.0);
    states.push(x0.to_vec());

    let mut x = x0.to_vec();
    let mut t = 0.0;
    for k in 1..=steps {
        let t_next = if k == steps { t_end } else { k as f64 * dt };
        let h = t_next - t;
        let full = rk4_step(&sys, &x, h);
        let half = rk4_step(&sys, &rk4_step(&sys, &x, h / 2.0), h / 2.0);
        let err = full
            .iter()
            .zip(&half)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
            / 15.0;

        if let Some(v) = full.iter().find(|v| v.is_nan()) {
            return Err(Error::Numerical(format!("state became {v} at t = {t_next}")));
        }
        if let Some(v) = full.iter().find(|&&v| v < -NEGATIVITY_TOL) {
            return Err(Error::Numerical(format!(
                "state left the nonnegative orthant ({v:e}) at t = {t_next}; reduce dt"
            )));
        }
        if full.iter().any(|v| v.is_infinite()) {
            return Err(Error::Numerical(format!("state overflowed at t = {t_next}")));
        }
        x = full;
        t = t_next;
        times.push(t);
        states.push(x.clone());
        step_errors.push(err);
    }

    Ok(Trajectory {
        species: n.species().names().to_vec(),
        times,
        states,
        step_errors,
    })
}
