//! The junction dynamics: one step per arrival round, with the implicit
//! junction coupling resolved by updating `x_{n+m}` before `x_n`.

use std::collections::VecDeque;
use std::io::Write;

use thiserror::Error;

use crate::format::sig15;
use crate::numeric::{Exact, Real};
use crate::spectral::FullEigenpair;
use crate::traffic::{Arcs, JunctionConvention, TrafficConfig};

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error("state has {got} entries, expected {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("state entry {0} is not finite")]
    NotFinite(f64),
    #[error("window {window} needs more than {len} states")]
    WindowTooLarge { window: usize, len: usize },
    #[error("window must be at least 1")]
    ZeroWindow,
    #[error("csv output failed: {0}")]
    Io(#[from] std::io::Error),
}

/// State `x^k`, with `x_1..x_{n+m}` stored 0-based.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T = f64> {
    pub x: Vec<T>,
    pub k: usize,
}

impl<T: Real> StateVector<T> {
    pub fn initial(x: Vec<T>) -> Self {
        StateVector { x, k: 0 }
    }
}

/// Consecutive states of one run. May hold only a tail of the run, in which
/// case the first state's `k` is above zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<T = f64> {
    pub states: Vec<StateVector<T>>,
    pub config: TrafficConfig,
}

/// The step map in a given field.
#[derive(Clone, Debug)]
pub struct Dynamics<T> {
    arcs: Arcs<T>,
    convention: JunctionConvention,
}

impl<T: Real> Dynamics<T> {
    pub fn new(arcs: Arcs<T>, convention: JunctionConvention) -> Self {
        Dynamics { arcs, convention }
    }

    pub fn size(&self) -> usize {
        self.arcs.size()
    }

    /// `x^{k+1}` from `x^k`. Panics if `x` has the wrong length.
    pub fn step(&self, x: &[T]) -> Vec<T> {
        let arcs = &self.arcs;
        let (n, size) = (arcs.n, arcs.size());
        assert_eq!(x.len(), size, "state length must be n+m");
        let old = |i: usize| x[i - 1].clone();
        let a = |i: usize| arcs.a(i).clone();
        let abar = |i: usize| arcs.abar(i).clone();
        let mut next = x.to_vec();
        for q in arcs.interior_positions() {
            next[q - 1] = (a(q - 1) + old(q - 1)).min(abar(q) + old(q + 1));
        }
        let xnm = (abar(size) + old(1) + old(n + 1) - old(n)).min(a(size - 1) + old(size - 1));
        next[n - 1] = (abar(n) + old(1) + old(n + 1) - xnm.clone()).min(a(n - 1) + old(n - 1));
        next[size - 1] = xnm;
        let half = (old(n) + old(size)).half();
        let (to_first, to_second) = match self.convention {
            JunctionConvention::EV => (a(n), a(size)),
            JunctionConvention::DS => (a(size), a(n)),
        };
        next[0] = (to_first + half.clone()).min(abar(1) + old(2));
        next[n] = (to_second + half).min(abar(n + 1) + old(n + 2));
        next
    }

    /// Largest `|x^k_i − (x_i + kλ)|` over `k ≤ steps`, starting from `x`.
    pub fn linearity_deviation(&self, lambda: &T, x: &[T], steps: usize) -> T {
        let mut state = x.to_vec();
        let mut worst = T::zero();
        for k in 1..=steps {
            state = self.step(&state);
            let shift = T::from_int(k as i64) * lambda.clone();
            for (got, base) in state.iter().zip(x) {
                worst = worst.max((got.clone() - base.clone() - shift.clone()).abs());
            }
        }
        worst
    }
}

impl Dynamics<f64> {
    pub fn from_config(config: &TrafficConfig) -> Self {
        Dynamics::new(Arcs::from_config(config), config.convention)
    }
}

impl Dynamics<Exact> {
    /// Exact dynamics on the rationals the `f64` arc values represent.
    pub fn exact(config: &TrafficConfig) -> Self {
        Dynamics::new(Arcs::exact(config), config.convention)
    }
}

fn check_state(config: &TrafficConfig, x: &[f64]) -> Result<(), DynamicsError> {
    if x.len() != config.size() {
        return Err(DynamicsError::WrongLength {
            expected: config.size(),
            got: x.len(),
        });
    }
    match x.iter().find(|v| !v.is_finite()) {
        Some(&v) => Err(DynamicsError::NotFinite(v)),
        None => Ok(()),
    }
}

/// One application of the dynamics. Panics if the state has the wrong length.
pub fn step(config: &TrafficConfig, state: &StateVector) -> StateVector {
    StateVector {
        x: Dynamics::from_config(config).step(&state.x),
        k: state.k + 1,
    }
}

/// The `steps + 1` states `x^0, ..., x^steps`.
pub fn simulate(
    config: &TrafficConfig,
    x0: &StateVector,
    steps: usize,
) -> Result<Trajectory, DynamicsError> {
    simulate_tail(config, x0, steps, steps + 1)
}

/// Runs `steps` steps but keeps only the last `keep` states (at least one).
pub fn simulate_tail(
    config: &TrafficConfig,
    x0: &StateVector,
    steps: usize,
    keep: usize,
) -> Result<Trajectory, DynamicsError> {
    check_state(config, &x0.x)?;
    let keep = keep.max(1);
    let dynamics = Dynamics::from_config(config);
    let mut states = VecDeque::with_capacity(keep.min(steps + 1));
    states.push_back(x0.clone());
    let mut current = x0.clone();
    for _ in 0..steps {
        current = StateVector {
            x: dynamics.step(&current.x),
            k: current.k + 1,
        };
        if states.len() == keep {
            states.pop_front();
        }
        states.push_back(current.clone());
    }
    Ok(Trajectory {
        states: states.into(),
        config: config.clone(),
    })
}

/// Average increments over the last `window` steps of a trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthRate {
    pub per_coordinate: Vec<f64>,
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

/// `(x^K − x^{K−window}) / window` per coordinate, with `K` the last state.
pub fn growth_rate(traj: &Trajectory, window: usize) -> Result<GrowthRate, DynamicsError> {
    if window == 0 {
        return Err(DynamicsError::ZeroWindow);
    }
    let len = traj.states.len();
    if window >= len {
        return Err(DynamicsError::WindowTooLarge { window, len });
    }
    let last = &traj.states[len - 1].x;
    let first = &traj.states[len - 1 - window].x;
    let per_coordinate: Vec<f64> = last
        .iter()
        .zip(first)
        .map(|(b, a)| (b - a) / window as f64)
        .collect();
    let min = per_coordinate.iter().copied().fold(f64::INFINITY, f64::min);
    let max = per_coordinate
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let mean = per_coordinate.iter().sum::<f64>() / per_coordinate.len() as f64;
    Ok(GrowthRate {
        per_coordinate,
        min,
        mean,
        max,
    })
}

/// Largest deviation from `x + kλ` over `steps` steps from the eigenvector,
/// in `f64`. Meaningful under [`JunctionConvention::EV`].
///
/// Some eigenvectors are unstable fixed points of the normalized dynamics,
/// so rounding errors can grow over long runs; [`linearity_check_exact`]
/// is free of that effect.
pub fn linearity_check(config: &TrafficConfig, pair: &FullEigenpair, steps: usize) -> f64 {
    Dynamics::from_config(config).linearity_deviation(&pair.lambda, &pair.x, steps)
}

/// [`linearity_check`] in exact rational arithmetic.
pub fn linearity_check_exact(
    config: &TrafficConfig,
    pair: &FullEigenpair<Exact>,
    steps: usize,
) -> f64 {
    Dynamics::exact(config)
        .linearity_deviation(&pair.lambda, &pair.x, steps)
        .to_f64()
}

/// Writes `k,x_1,...,x_{n+m}` and one row per state.
pub fn write_csv<W: Write>(traj: &Trajectory, out: W) -> Result<(), DynamicsError> {
    let mut w = csv::Writer::from_writer(out);
    let size = traj.config.size();
    let mut header = vec!["k".to_string()];
    header.extend((1..=size).map(|i| format!("x_{i}")));
    w.write_record(&header).map_err(csv_io)?;
    for s in &traj.states {
        let mut row = vec![s.k.to_string()];
        row.extend(s.x.iter().map(|&v| sig15(v)));
        w.write_record(&row).map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_io(e: csv::Error) -> DynamicsError {
    DynamicsError::Io(std::io::Error::other(e))
}
