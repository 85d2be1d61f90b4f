//! Closed-form eigenvalues and eigenvectors of the junction system.
//!
//! The eigenvalue λ solves the scalar equation
//! `0 = max(min(d − (1+ρ)λ, 1/4 − λ, r − d − (2r−1+ρ)λ), −λ)`, and each of its
//! four linear pieces comes with an explicit eigenvector of the reduced
//! four-variable system (positions `1, n, n+1, n+m`). The remaining
//! positions are filled in by a min-plus Kleene star, and every construction
//! is checked against the residuals of the full, simplified, reduced and
//! shifted systems.

mod construct;
mod residual;

use std::fmt;

use thiserror::Error;

use crate::minplus::MinPlusError;
use crate::numeric::Real;
use crate::traffic::{DerivedParams, TrafficError};

pub use construct::{
    exact_eigenpair, extend_by_relaxation, extend_full, extend_full_exact, reduced_eigenvector,
    reduced_in, FullEigenpair, ReducedEigenpair,
};
pub use residual::{
    ev_residuals, residual_ev, residual_s, residual_ss, residual_sz, s_residuals, ss_residuals,
    sz_residuals, z_transform, ZTransform, ZVector,
};

/// Closed intervals of the regime conditions are widened by this much so
/// that both constructions are emitted at a shared endpoint.
pub const APPLICABILITY_SLACK: f64 = 1e-12;

/// Eigenvalues closer than this are reported once.
pub const DEDUP_SPACING: f64 = 1e-9;

/// Default absolute tolerance for residual verification.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// The four eigenvector constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regime {
    /// Free flow, `λ = d/(1+ρ)`, for `d ≤ d₁`.
    R1,
    /// Saturation, `λ = 1/4`, for `d₁ ≤ d ≤ d₂`.
    R2,
    /// Congestion, `λ = (r−d)/(2r−1+ρ)`, for `d` between `r` and `d₂`.
    R3,
    /// Jam, `λ = 0`, for `d ≥ r`.
    R4,
}

impl Regime {
    pub const ALL: [Regime; 4] = [Regime::R1, Regime::R2, Regime::R3, Regime::R4];
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("regime {regime} does not apply at density {d}")]
    RegimeNotApplicable { regime: Regime, d: f64 },
    #[error("requires r ≥ 1/2, got r = {r}")]
    RNotApplicable { r: f64 },
    #[error("uniqueness hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("positive eigenvalue set {found:?} is not the singleton {{{expected}}}")]
    UniquenessViolated { found: Vec<f64>, expected: f64 },
    #[error("expected {expected} entries, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("interior relaxation did not settle within {0} passes")]
    NoConvergence(usize),
    #[error(transparent)]
    MinPlus(#[from] MinPlusError),
    #[error(transparent)]
    Traffic(#[from] TrafficError),
}

/// `intercept + slope·λ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Affine {
    pub intercept: f64,
    pub slope: f64,
}

impl Affine {
    pub fn eval(&self, lambda: f64) -> f64 {
        self.intercept + self.slope * lambda
    }
}

/// The four linear pieces of the characteristic function
/// `F(λ) = max(min(g1, g2, g3), g4)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CharacteristicPieces {
    /// `d − (1+ρ)λ`
    pub g1: Affine,
    /// `1/4 − λ`
    pub g2: Affine,
    /// `r − d − (2r−1+ρ)λ`
    pub g3: Affine,
    /// `−λ`
    pub g4: Affine,
}

impl CharacteristicPieces {
    pub fn new(params: &DerivedParams) -> Self {
        let DerivedParams { d, r, rho, .. } = *params;
        CharacteristicPieces {
            g1: Affine {
                intercept: d,
                slope: -(1.0 + rho),
            },
            g2: Affine {
                intercept: 0.25,
                slope: -1.0,
            },
            g3: Affine {
                intercept: r - d,
                slope: -(2.0 * r - 1.0 + rho),
            },
            g4: Affine {
                intercept: 0.0,
                slope: -1.0,
            },
        }
    }

    pub fn all(&self) -> [Affine; 4] {
        [self.g1, self.g2, self.g3, self.g4]
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        let inner = self
            .g1
            .eval(lambda)
            .min(self.g2.eval(lambda))
            .min(self.g3.eval(lambda));
        inner.max(self.g4.eval(lambda))
    }
}

/// `F(λ)`; its zeros are the eigenvalues.
pub fn characteristic(lambda: f64, params: &DerivedParams) -> f64 {
    CharacteristicPieces::new(params).eval(lambda)
}

/// Whether the density condition of `regime` holds (closed intervals,
/// widened by [`APPLICABILITY_SLACK`]).
pub fn regime_applies(params: &DerivedParams, regime: Regime) -> bool {
    let t = APPLICABILITY_SLACK;
    let DerivedParams { d, d1, d2, r, .. } = *params;
    match regime {
        Regime::R1 => d <= d1 + t,
        Regime::R2 => d1 - t <= d && d <= d2 + t,
        Regime::R3 => {
            !params.congestion_slope_vanishes() && r.min(d2) - t <= d && d <= r.max(d2) + t
        }
        Regime::R4 => d >= r - t,
    }
}

/// One eigenvalue and the constructions that produce it.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigenvalue {
    pub lambda: f64,
    pub regimes: Vec<Regime>,
}

/// The eigenvalues built by the four regime constructions, sorted
/// descending, with values closer than [`DEDUP_SPACING`] merged. Values are
/// clamped into `[0, 1/4]` to absorb overshoot from the applicability slack.
///
/// For `r < 1/2` this is the constructed set; no claim is made that it is
/// the complete spectrum.
pub fn eigen_set(params: &DerivedParams) -> Vec<Eigenvalue> {
    let mut raw: Vec<(f64, Regime)> = Regime::ALL
        .iter()
        .filter(|&&g| regime_applies(params, g))
        .map(|&g| (regime_lambda(params, g).clamp(0.0, 0.25), g))
        .collect();
    for &(lambda, g) in &raw {
        debug_assert!(
            characteristic(lambda, params).abs() <= 1e-9,
            "regime {g} gives λ = {lambda} with F(λ) = {}",
            characteristic(lambda, params)
        );
    }
    raw.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut out: Vec<Eigenvalue> = Vec::new();
    for (lambda, g) in raw {
        match out.last_mut() {
            Some(last) if (last.lambda - lambda).abs() <= DEDUP_SPACING => {
                // R2 and R4 give the exact constants 1/4 and 0.
                if matches!(g, Regime::R2 | Regime::R4) {
                    last.lambda = lambda;
                }
                last.regimes.push(g);
            }
            _ => out.push(Eigenvalue {
                lambda,
                regimes: vec![g],
            }),
        }
    }
    out
}

/// The six density regions of the fundamental diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Region {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// A region and its density interval `[lo, hi)` (closed at 1 for `F`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegionLabel {
    pub label: Region,
    pub lo: f64,
    pub hi: f64,
}

impl RegionLabel {
    pub fn is_empty(&self) -> bool {
        self.lo >= self.hi && !(self.label == Region::F && self.lo <= 1.0)
    }

    pub fn contains(&self, d: f64) -> bool {
        if self.label == Region::F {
            self.lo <= d && d <= self.hi
        } else {
            self.lo <= d && d < self.hi
        }
    }
}

/// All six intervals, possibly empty, in label order.
pub fn region_intervals(params: &DerivedParams) -> [RegionLabel; 6] {
    let DerivedParams { d1, d2, r, .. } = *params;
    let mk = |label, lo, hi| RegionLabel { label, lo, hi };
    [
        mk(Region::A, 0.0, d1.min(r)),
        mk(Region::B, d1.min(r), d1),
        mk(Region::C, d1, d2.min(r)),
        mk(Region::D, d1.max(r), d2),
        mk(Region::E, d2, d2.max(r)),
        mk(Region::F, d2.max(r), 1.0),
    ]
}

/// The region containing the configuration's density.
pub fn classify_region(params: &DerivedParams) -> RegionLabel {
    let d = params.d.clamp(0.0, 1.0);
    region_intervals(params)
        .into_iter()
        .filter(|reg| !reg.is_empty())
        .find(|reg| reg.contains(d))
        .expect("region intervals cover [0, 1]")
}

/// Nonnegative eigenvalue `max(min(d/(1+ρ), 1/4, (r−d)/(2r−1+ρ)), 0)` for `r ≥ 1/2`.
pub fn lambda_nonneg(params: &DerivedParams) -> Result<f64, SpectralError> {
    if !params.r_at_least_half() {
        return Err(SpectralError::RNotApplicable { r: params.r });
    }
    Ok(min_of_branches(params).max(0.0))
}

fn min_of_branches(params: &DerivedParams) -> f64 {
    let DerivedParams { d, r, rho, .. } = *params;
    (d / (1.0 + rho))
        .min(0.25)
        .min((r - d) / (2.0 * r - 1.0 + rho))
}

/// Large-system limit `max(min(d, 1/4, (r−d)/(2r−1)), 0)`, for `r ≥ 1/2`.
pub fn lambda_asymptotic(d: f64, r: f64) -> f64 {
    let slope = 2.0 * r - 1.0;
    let congestion = if slope > 0.0 {
        (r - d) / slope
    } else if r > d {
        f64::INFINITY
    } else if r < d {
        f64::NEG_INFINITY
    } else {
        0.0
    };
    d.min(0.25).min(congestion).max(0.0)
}

/// Checks that the constructed set has exactly one positive eigenvalue when
/// `r > 1/2` and `0 < d < r`, and returns it.
pub fn assert_unique_positive(params: &DerivedParams) -> Result<f64, SpectralError> {
    if !params.r_above_half() {
        return Err(SpectralError::HypothesisViolated(format!(
            "r = {} is not above 1/2",
            params.r
        )));
    }
    if !(params.d > 0.0 && params.d < params.r) {
        return Err(SpectralError::HypothesisViolated(format!(
            "density {} is not in (0, r = {})",
            params.d, params.r
        )));
    }
    let expected = min_of_branches(params);
    let found: Vec<f64> = eigen_set(params)
        .into_iter()
        .map(|e| e.lambda)
        .filter(|&l| l > 0.0)
        .collect();
    match found.as_slice() {
        [only] if (only - expected).abs() <= 1e-12 => Ok(*only),
        _ => Err(SpectralError::UniquenessViolated { found, expected }),
    }
}

/// The eigenvalue formula of `regime`, without checking that it applies.
pub fn regime_lambda(params: &DerivedParams, regime: Regime) -> f64 {
    lambda_in(params, regime)
}

/// Generic closed forms shared by the float and exact paths.
pub(crate) fn lambda_in<T: Real>(params: &DerivedParams<T>, regime: Regime) -> T {
    let one = T::from_int(1);
    match regime {
        Regime::R1 => params.d.clone() / (one + params.rho.clone()),
        Regime::R2 => one / T::from_int(4),
        Regime::R3 => {
            (params.r.clone() - params.d.clone())
                / (T::from_int(2) * params.r.clone() - one + params.rho.clone())
        }
        Regime::R4 => T::zero(),
    }
}
