//! The two-ring junction system: sizes, arc values, the traffic constraints
//! and the quantities derived from them.
//!
//! Positions are 1-based everywhere in the public surface: the priority
//! ring holds positions `1..=n` and the other ring `n+1..=n+m`. Positions
//! `n` and `n+m` are the two places feeding the junction.

mod io;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeric::{Exact, Real};

pub use io::{parse_config, serialize_config};

/// Slack allowed on the inequality constraints to absorb rounding in
/// generated configurations.
pub const CONSTRAINT_SLACK: f64 = 1e-12;

/// Which arc values weight the half-sum terms of the junction exits.
///
/// `EV` feeds `x_1` with `a_n` and `x_{n+1}` with `a_{n+m}`, the pairing used
/// by the eigenvalue problem. `DS` swaps them.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum JunctionConvention {
    #[default]
    EV,
    DS,
}

impl fmt::Display for JunctionConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JunctionConvention::EV => write!(f, "EV"),
            JunctionConvention::DS => write!(f, "DS"),
        }
    }
}

impl std::str::FromStr for JunctionConvention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "EV" | "ev" => Ok(JunctionConvention::EV),
            "DS" | "ds" => Ok(JunctionConvention::DS),
            other => Err(format!(
                "unknown junction convention {other:?} (expected EV or DS)"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrafficConfig {
    pub n: usize,
    pub m: usize,
    /// `a_1..a_{n+m}`, stored 0-based.
    pub a: Vec<f64>,
    pub convention: JunctionConvention,
}

/// One broken constraint of a [`TrafficConfig`].
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    NTooSmall { n: usize },
    MTooSmall { m: usize },
    WrongLength { expected: usize, got: usize },
    NotFinite { index: usize },
    ArcOutOfRange { index: usize, value: f64 },
    JunctionOverflow { a_n: f64, a_nm: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NTooSmall { n } => write!(f, "n ≥ 2 required (got n = {n})"),
            Violation::MTooSmall { m } => write!(f, "m ≥ 2 required (got m = {m})"),
            Violation::WrongLength { expected, got } => {
                write!(f, "expected n+m = {expected} arc values, got {got}")
            }
            Violation::NotFinite { index } => write!(f, "a_{index} is not a finite number"),
            Violation::ArcOutOfRange { index, value } => {
                write!(f, "a_{index} = {value} outside [0, 1]")
            }
            Violation::JunctionOverflow { a_n, a_nm } => {
                write!(f, "a_n + a_{{n+m}} = {} > 1", a_n + a_nm)
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum TrafficError {
    #[error("invalid configuration: {}", join_violations(.0))]
    InvalidConfig(Vec<Violation>),
    #[error("density {0} outside [0, 1]")]
    DensityOutOfRange(f64),
    #[error("missing field {0:?}")]
    MissingField(String),
    #[error("fields {0:?} and {1:?} are mutually exclusive")]
    ConflictingFields(String, String),
    #[error("malformed configuration document: {0}")]
    Malformed(#[from] serde_json::Error),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

impl TrafficConfig {
    /// Builds a validated configuration with the default junction convention.
    pub fn new(n: usize, m: usize, a: Vec<f64>) -> Result<Self, TrafficError> {
        let config = TrafficConfig {
            n,
            m,
            a,
            convention: JunctionConvention::default(),
        };
        config.validate().map_err(TrafficError::InvalidConfig)?;
        Ok(config)
    }

    pub fn with_convention(mut self, convention: JunctionConvention) -> Self {
        self.convention = convention;
        self
    }

    /// `n + m`.
    pub fn size(&self) -> usize {
        self.n + self.m
    }

    /// Arc value at 1-based position `i`.
    pub fn arc(&self, i: usize) -> f64 {
        self.a[i - 1]
    }

    /// Lists every violated constraint; `Ok` iff the configuration is usable.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        if self.n < 2 {
            out.push(Violation::NTooSmall { n: self.n });
        }
        if self.m < 2 {
            out.push(Violation::MTooSmall { m: self.m });
        }
        if self.a.len() != self.size() {
            out.push(Violation::WrongLength {
                expected: self.size(),
                got: self.a.len(),
            });
            return Err(out);
        }
        for (i, &v) in self.a.iter().enumerate() {
            if !v.is_finite() {
                out.push(Violation::NotFinite { index: i + 1 });
            } else if !(-CONSTRAINT_SLACK..=1.0 + CONSTRAINT_SLACK).contains(&v) {
                out.push(Violation::ArcOutOfRange {
                    index: i + 1,
                    value: v,
                });
            }
        }
        if self.n >= 1 && self.size() >= 2 {
            let (a_n, a_nm) = (self.arc(self.n), self.arc(self.size()));
            if a_n + a_nm > 1.0 + CONSTRAINT_SLACK {
                out.push(Violation::JunctionOverflow { a_n, a_nm });
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    /// Derived quantities in `f64`.
    pub fn derive(&self) -> Result<DerivedParams, TrafficError> {
        self.validate().map_err(TrafficError::InvalidConfig)?;
        Ok(DerivedParams::from_arcs(self.n, self.m, &self.a))
    }

    /// Derived quantities in exact rational arithmetic, reading each arc
    /// value as the rational number its `f64` represents.
    pub fn derive_exact(&self) -> Result<DerivedParams<Exact>, TrafficError> {
        self.validate().map_err(TrafficError::InvalidConfig)?;
        let a: Vec<Exact> = self.a.iter().map(|&v| Exact::from_f64(v)).collect();
        Ok(DerivedParams::from_arcs(self.n, self.m, &a))
    }
}

/// Free-function form of [`TrafficConfig::validate`].
pub fn validate(config: &TrafficConfig) -> Result<(), Vec<Violation>> {
    config.validate()
}

/// Free-function form of [`TrafficConfig::derive`].
pub fn derive(config: &TrafficConfig) -> Result<DerivedParams, TrafficError> {
    config.derive()
}

/// Quantities computed from a valid configuration.
///
/// `b_n`, `bbar_n` sum `a_i`, `ā_i` over `1..n-1`; `b_m`, `bbar_m` over
/// `n+1..n+m-1`.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivedParams<T = f64> {
    pub n: usize,
    pub m: usize,
    /// `a_n`.
    pub a_n: T,
    /// `a_{n+m}`.
    pub a_nm: T,
    /// `ā_1..ā_{n+m}`, stored 0-based.
    pub abar: Vec<T>,
    pub d: T,
    pub r: T,
    pub rho: T,
    pub b_n: T,
    pub bbar_n: T,
    pub b_m: T,
    pub bbar_m: T,
    pub d1: T,
    pub d2: T,
}

impl<T: Real> DerivedParams<T> {
    /// Computes every derived quantity from raw arc values. Does not validate.
    pub fn from_arcs(n: usize, m: usize, a: &[T]) -> Self {
        let size = n + m;
        let (a, abar) = Arcs::new(n, m, a.to_vec()).into_parts();
        let one = T::from_int(1);
        let a_n = a[n - 1].clone();
        let a_nm = a[size - 1].clone();
        let sum = |v: &[T]| v.iter().cloned().fold(T::zero(), |acc, x| acc + x);
        let denom = T::from_int((size - 1) as i64);
        let total = sum(&a);
        DerivedParams {
            n,
            m,
            d: total / denom.clone(),
            r: T::from_int(n as i64) / denom.clone(),
            rho: one / denom.clone(),
            b_n: sum(&a[..n - 1]),
            bbar_n: sum(&abar[..n - 1]),
            b_m: sum(&a[n..size - 1]),
            bbar_m: sum(&abar[n..size - 1]),
            d1: T::from_int(size as i64) / (T::from_int(4) * denom.clone()),
            d2: T::from_int((3 * n + m) as i64 - 2) / (T::from_int(4) * denom),
            a_n,
            a_nm,
            abar,
        }
    }

    /// `ā_i` at 1-based position `i`.
    pub fn abar_at(&self, i: usize) -> T {
        self.abar[i - 1].clone()
    }

    pub fn size(&self) -> usize {
        self.n + self.m
    }
}

impl DerivedParams<f64> {
    /// `r ≥ 1/2`, decided on the integers (`n ≥ m − 1`).
    pub fn r_at_least_half(&self) -> bool {
        self.n + 1 >= self.m
    }

    /// `r > 1/2`, decided on the integers (`n ≥ m`).
    pub fn r_above_half(&self) -> bool {
        self.n >= self.m
    }

    /// `m = n + 2`, where `2r − 1 + ρ = 0` and `d₂ = r`.
    pub fn congestion_slope_vanishes(&self) -> bool {
        self.m == self.n + 2
    }
}

/// Arc values and their complements with 1-based accessors, in any field.
#[derive(Clone, Debug, PartialEq)]
pub struct Arcs<T> {
    pub n: usize,
    pub m: usize,
    a: Vec<T>,
    abar: Vec<T>,
}

impl<T: Real> Arcs<T> {
    pub fn new(n: usize, m: usize, a: Vec<T>) -> Self {
        let size = n + m;
        assert_eq!(a.len(), size, "arc vector must have n+m entries");
        let one = T::from_int(1);
        let junction_bar = one.clone() - a[n - 1].clone() - a[size - 1].clone();
        let abar = (1..=size)
            .map(|i| {
                if i == n || i == size {
                    junction_bar.clone()
                } else {
                    one.clone() - a[i - 1].clone()
                }
            })
            .collect();
        Arcs { n, m, a, abar }
    }

    pub fn size(&self) -> usize {
        self.n + self.m
    }

    /// `a_i`, 1-based.
    pub fn a(&self, i: usize) -> &T {
        &self.a[i - 1]
    }

    /// `ā_i`, 1-based.
    pub fn abar(&self, i: usize) -> &T {
        &self.abar[i - 1]
    }

    /// Interior positions `2..n-1` and `n+2..n+m-1`, in increasing order.
    pub fn interior_positions(&self) -> impl Iterator<Item = usize> {
        (2..self.n).chain(self.n + 2..self.size())
    }

    pub(crate) fn into_parts(self) -> (Vec<T>, Vec<T>) {
        (self.a, self.abar)
    }
}

impl Arcs<f64> {
    pub fn from_config(config: &TrafficConfig) -> Self {
        Arcs::new(config.n, config.m, config.a.clone())
    }
}

impl Arcs<Exact> {
    /// Each `f64` arc value read as the rational it represents.
    pub fn exact(config: &TrafficConfig) -> Self {
        Arcs::new(
            config.n,
            config.m,
            config.a.iter().map(|&v| Exact::from_f64(v)).collect(),
        )
    }
}

/// Builds a valid configuration of density exactly `d`.
///
/// With `s = d(n+m−1)`: if `s/(n+m) ≤ 1/2` every arc gets `s/(n+m)`;
/// otherwise the two junction arcs get `1/2` and every other arc
/// `(s−1)/(n+m−2)`. Both branches give `1/2` everywhere at the switch.
pub fn allocate(n: usize, m: usize, d: f64) -> Result<TrafficConfig, TrafficError> {
    if !(0.0..=1.0).contains(&d) {
        return Err(TrafficError::DensityOutOfRange(d));
    }
    if n < 2 || m < 2 {
        let mut v = Vec::new();
        if n < 2 {
            v.push(Violation::NTooSmall { n });
        }
        if m < 2 {
            v.push(Violation::MTooSmall { m });
        }
        return Err(TrafficError::InvalidConfig(v));
    }
    let size = n + m;
    let s = d * (size - 1) as f64;
    let uniform = s / size as f64;
    let a = if uniform <= 0.5 {
        vec![uniform; size]
    } else {
        let rest = ((s - 1.0) / (size - 2) as f64).min(1.0);
        let mut a = vec![rest; size];
        a[n - 1] = 0.5;
        a[size - 1] = 0.5;
        a
    };
    TrafficConfig::new(n, m, a)
}
