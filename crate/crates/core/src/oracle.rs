//! Independent checks used by the tests: a root scan of the characteristic
//! function, a fixed-point Kleene star, and the coincidence of the
//! eigenproblem and the simplified system at the smallest size.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::minplus::{MinPlusError, MinPlusMatrix};
use crate::spectral::{
    eigen_set, residual_ev, residual_ss, CharacteristicPieces, FullEigenpair, DEDUP_SPACING,
};
use crate::traffic::{DerivedParams, TrafficConfig};

/// Tolerance on `|F|` for a point to count as a root.
pub const ROOT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("fixed-point iteration did not settle within {0} iterations")]
    NoConvergence(usize),
    #[error("requires n = m = 2, got n = {n}, m = {m}")]
    WrongSize { n: usize, m: usize },
    #[error(transparent)]
    MinPlus(#[from] MinPlusError),
}

/// Zeros of the characteristic function: isolated points, plus closed
/// segments on which it vanishes identically.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RootSet {
    pub points: Vec<f64>,
    pub intervals: Vec<(f64, f64)>,
}

/// Every zero of `F` by direct scan. `F > 0` for `λ < 0` and `F < 0` for
/// `λ > 1/4`, so only `[0, 1/4]` is searched; on it `F` is linear between
/// consecutive pairwise intersections of its four pieces.
pub fn scalar_roots(params: &DerivedParams) -> RootSet {
    let pieces = CharacteristicPieces::new(params);
    let f = |l: f64| pieces.eval(l);
    let (lo, hi) = (0.0, 0.25);
    let mut breaks = vec![lo, hi];
    let all = pieces.all();
    for (i, p) in all.iter().enumerate() {
        for q in &all[i + 1..] {
            let ds = p.slope - q.slope;
            if ds.abs() > f64::EPSILON {
                let at = (q.intercept - p.intercept) / ds;
                if at > lo && at < hi {
                    breaks.push(at);
                }
            }
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() <= ROOT_TOLERANCE);

    let is_zero = |l: f64| f(l).abs() <= ROOT_TOLERANCE;
    let mut roots = RootSet::default();
    let mut candidates = Vec::new();
    for w in breaks.windows(2) {
        let (p, q) = (w[0], w[1]);
        let (fp, fq) = (f(p), f(q));
        if is_zero(p) && is_zero(q) && is_zero(0.5 * (p + q)) {
            match roots.intervals.last_mut() {
                Some(last) if (last.1 - p).abs() <= ROOT_TOLERANCE => last.1 = q,
                _ => roots.intervals.push((p, q)),
            }
            continue;
        }
        if is_zero(p) {
            candidates.push(p);
        }
        if is_zero(q) {
            candidates.push(q);
        }
        if fp * fq < 0.0 && !is_zero(p) && !is_zero(q) {
            candidates.push(p - fp * (q - p) / (fq - fp));
        }
    }
    candidates.sort_by(f64::total_cmp);
    for c in candidates {
        let in_interval = roots
            .intervals
            .iter()
            .any(|&(a, b)| a - ROOT_TOLERANCE <= c && c <= b + ROOT_TOLERANCE);
        let duplicate = roots
            .points
            .last()
            .is_some_and(|&last| (c - last).abs() <= DEDUP_SPACING);
        if !in_interval && !duplicate {
            roots.points.push(c);
        }
    }
    roots
}

/// Isolated roots of `F` that no regime construction produces.
pub fn unconstructed_roots(params: &DerivedParams) -> Vec<f64> {
    let built: Vec<f64> = eigen_set(params).into_iter().map(|e| e.lambda).collect();
    scalar_roots(params)
        .points
        .into_iter()
        .filter(|r| built.iter().all(|b| (b - r).abs() > DEDUP_SPACING))
        .collect()
}

/// `S ← I ⊕ A ⊗ S` from `S = I` until stationary.
pub fn star_fixed_point(a: &MinPlusMatrix, max_iters: usize) -> Result<MinPlusMatrix, OracleError> {
    if !a.is_square() {
        return Err(MinPlusError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        }
        .into());
    }
    let identity = MinPlusMatrix::identity(a.rows());
    let mut s = identity.clone();
    for _ in 0..max_iters {
        let next = identity.oplus(&a.mat_mul(&s)?)?;
        if next == s {
            return Ok(s);
        }
        s = next;
    }
    Err(OracleError::NoConvergence(max_iters))
}

/// Simplified-system residual evaluator, replaceable for mutation tests.
pub type SsEvaluator = dyn Fn(&TrafficConfig, f64, &[f64]) -> f64;

/// At `n = m = 2` the eigenproblem and the simplified system are the same
/// equations. Compares their residuals on `samples` random `(λ, x)`.
pub fn ev_ss_coincide_base(
    config: &TrafficConfig,
    samples: usize,
    seed: u64,
) -> Result<bool, OracleError> {
    let ss = |c: &TrafficConfig, l: f64, x: &[f64]| {
        residual_ss(c, l, x).expect("state has four entries")
    };
    ev_ss_coincide_with(config, samples, seed, &ss)
}

/// [`ev_ss_coincide_base`] with a caller-supplied simplified-system residual.
pub fn ev_ss_coincide_with(
    config: &TrafficConfig,
    samples: usize,
    seed: u64,
    ss: &SsEvaluator,
) -> Result<bool, OracleError> {
    if config.n != 2 || config.m != 2 {
        return Err(OracleError::WrongSize {
            n: config.n,
            m: config.m,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let lambda = rng.random_range(-1.0..1.0);
        let x: Vec<f64> = (0..4).map(|_| rng.random_range(-2.0..2.0)).collect();
        let ev = residual_ev(config, lambda, &x).expect("state has four entries");
        worst = worst.max((ev - ss(config, lambda, &x)).abs());
    }
    Ok(worst <= 1e-12)
}

/// Whether every eigenvalue is at most `1/4` (up to `1e-12`). Each pair is
/// expected to solve its eigenproblem; the check does not re-verify that.
pub fn lambda_bound_check(pairs: &[FullEigenpair]) -> bool {
    pairs.iter().all(|p| p.lambda <= 0.25 + 1e-12)
}
