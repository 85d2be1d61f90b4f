//! Random inputs shared by the integration tests.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tropica::minplus::MinPlusMatrix;
use tropica::spectral::Regime;
use tropica::traffic::{allocate, DerivedParams, TrafficConfig};

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Moves random amounts between random arcs of `config`, keeping the total
/// and every constraint.
pub fn redistribute(config: &TrafficConfig, rng: &mut ChaCha8Rng, moves: usize) -> TrafficConfig {
    let (n, size) = (config.n, config.size());
    let mut a = config.a.clone();
    let junction = |i: usize| i == n - 1 || i == size - 1;
    for _ in 0..moves {
        let from = rng.random_range(0..size);
        let to = rng.random_range(0..size);
        if from == to {
            continue;
        }
        let mut room = 1.0 - a[to];
        if junction(to) && !junction(from) {
            room = room.min(1.0 - a[n - 1] - a[size - 1]);
        }
        let amount = rng.random_range(0.0..=1.0) * a[from].min(room).max(0.0);
        a[from] -= amount;
        a[to] += amount;
    }
    let out = TrafficConfig::new(config.n, config.m, a).expect("moves keep the constraints");
    out.with_convention(config.convention)
}

/// Density interval on which `regime` applies, if any.
pub fn regime_interval(p: &DerivedParams, regime: Regime) -> Option<(f64, f64)> {
    match regime {
        Regime::R1 => Some((0.0, p.d1)),
        Regime::R2 => Some((p.d1, p.d2)),
        Regime::R3 if p.m != p.n + 2 => Some((p.r.min(p.d2), p.r.max(p.d2))),
        Regime::R3 => None,
        Regime::R4 => Some((p.r, 1.0)),
    }
}

/// A random valid configuration with `n, m ∈ [2, 10]` whose density lies in
/// the interval of a regime drawn at random.
pub fn config_in_some_regime(rng: &mut ChaCha8Rng) -> TrafficConfig {
    loop {
        let n = rng.random_range(2..=10);
        let m = rng.random_range(2..=10);
        let probe = allocate(n, m, 0.5).unwrap().derive().unwrap();
        let regime = Regime::ALL[rng.random_range(0..4)];
        let Some((lo, hi)) = regime_interval(&probe, regime) else {
            continue;
        };
        let d = lo + (hi - lo) * rng.random_range(0.0..=1.0);
        let base = allocate(n, m, d).unwrap();
        return redistribute(&base, rng, 3 * (n + m));
    }
}

/// A random square matrix whose circuits all have positive weight: entries
/// `c_ij + p_i − p_j` with `c_ij > 0`, so every circuit weighs `Σ c > 0`.
pub fn positive_circuit_matrix(rng: &mut ChaCha8Rng, size: usize) -> MinPlusMatrix {
    let potential: Vec<f64> = (0..size).map(|_| rng.random_range(-3.0..3.0)).collect();
    let mut m = MinPlusMatrix::epsilon(size, size);
    for i in 0..size {
        for j in 0..size {
            if rng.random_bool(0.6) {
                let c = rng.random_range(0.05..4.0);
                m.set(
                    i,
                    j,
                    tropica::minplus::MinPlusScalar::finite(c + potential[i] - potential[j]),
                );
            }
        }
    }
    m
}

/// A random matrix containing a circuit of weight `≤ 0`. Circuit weights are
/// multiples of 1/8 so a zero-weight circuit sums to exactly zero.
pub fn nonpositive_circuit_matrix(rng: &mut ChaCha8Rng, size: usize) -> MinPlusMatrix {
    let mut m = positive_circuit_matrix(rng, size);
    let len = rng.random_range(1..=size);
    let mut nodes: Vec<usize> = (0..size).collect();
    for i in 0..len {
        let j = rng.random_range(i..size);
        nodes.swap(i, j);
    }
    let cycle = &nodes[..len];
    let deficit = rng.random_range(0..=8) as f64 / 8.0;
    let mut total = 0.0;
    for k in 0..len {
        let (i, j) = (cycle[k], cycle[(k + 1) % len]);
        let w = if k + 1 == len {
            -total - deficit
        } else {
            rng.random_range(-16..=16) as f64 / 8.0
        };
        total += w;
        m.set(i, j, tropica::minplus::MinPlusScalar::finite(w));
    }
    m
}
