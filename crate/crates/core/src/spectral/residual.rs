//! Per-equation residuals of the four systems.
//!
//! Every residual is `|lhs − rhs|` for one equation, in any field. The
//! `residual_*` wrappers return the maximum as `f64`.

use crate::numeric::Real;
use crate::traffic::{Arcs, DerivedParams, TrafficConfig};

use super::{ReducedEigenpair, SpectralError};

fn check_len<T>(x: &[T], expected: usize) -> Result<(), SpectralError> {
    if x.len() == expected {
        Ok(())
    } else {
        Err(SpectralError::WrongLength {
            expected,
            got: x.len(),
        })
    }
}

fn max_abs<T: Real>(r: &[T]) -> f64 {
    r.iter().map(|v| v.abs().to_f64()).fold(0.0, f64::max)
}

/// Residuals of the eigenproblem, one per position `1..=n+m`, in the form
/// `|λ + x_i − min(...)|`.
pub fn ev_residuals<T: Real>(arcs: &Arcs<T>, lambda: &T, x: &[T]) -> Vec<T> {
    let (n, size) = (arcs.n, arcs.size());
    let xv = |i: usize| x[i - 1].clone();
    let a = |i: usize| arcs.a(i).clone();
    let abar = |i: usize| arcs.abar(i).clone();
    let l = lambda.clone();
    let half = (xv(n) + xv(size)).half();
    (1..=size)
        .map(|i| {
            let rhs = if i == n {
                let junction = abar(n) + xv(1) + xv(n + 1) - l.clone() - xv(size);
                junction.min(a(n - 1) + xv(n - 1))
            } else if i == size {
                let junction = abar(size) + xv(1) + xv(n + 1) - xv(n);
                junction.min(a(size - 1) + xv(size - 1))
            } else if i == 1 {
                (a(n) + half.clone()).min(abar(1) + xv(2))
            } else if i == n + 1 {
                (a(size) + half.clone()).min(abar(n + 1) + xv(n + 2))
            } else {
                (a(i - 1) + xv(i - 1)).min(abar(i) + xv(i + 1))
            };
            (l.clone() + xv(i) - rhs).abs()
        })
        .collect()
}

/// The four reduced equations evaluated at `(x_1, x_n, x_{n+1}, x_{n+m})`,
/// in that order.
fn s_equations<T: Real>(p: &DerivedParams<T>, lambda: &T, v: [T; 4]) -> [T; 4] {
    let [x1, xn, xn1, xnm] = v;
    let (n, m) = (p.n, p.m);
    let l = lambda.clone();
    let pow = |k: usize| T::from_int(k as i64) * l.clone();
    let two = T::from_int(2);
    let half = (xn.clone() + xnm.clone()).half();
    let eq_n = (p.abar_at(n) - two * l.clone() + x1.clone() + xn1.clone() - xnm.clone())
        .min(p.b_n.clone() - pow(n - 1) + x1.clone());
    let eq_nm = (p.abar_at(n + m) - l.clone() + x1.clone() + xn1.clone() - xn.clone())
        .min(p.b_m.clone() - pow(m - 1) + xn1.clone());
    let eq_1 =
        (p.a_n.clone() - l.clone() + half.clone()).min(p.bbar_n.clone() - pow(n - 1) + xn.clone());
    let eq_n1 =
        (p.a_nm.clone() - l.clone() + half).min(p.bbar_m.clone() - pow(m - 1) + xnm.clone());
    [
        (x1 - eq_1).abs(),
        (xn - eq_n).abs(),
        (xn1 - eq_n1).abs(),
        (xnm - eq_nm).abs(),
    ]
}

/// Residuals of the simplified system on a full vector: the interior
/// equations `x_q = min(a_{q−1} − λ + x_{q−1}, ā_q − λ + x_{q+1})` followed by
/// the four reduced equations.
pub fn ss_residuals<T: Real>(
    arcs: &Arcs<T>,
    params: &DerivedParams<T>,
    lambda: &T,
    x: &[T],
) -> Vec<T> {
    let (n, size) = (arcs.n, arcs.size());
    let l = lambda.clone();
    let mut out: Vec<T> = arcs
        .interior_positions()
        .map(|q| {
            let left = arcs.a(q - 1).clone() - l.clone() + x[q - 2].clone();
            let right = arcs.abar(q).clone() - l.clone() + x[q].clone();
            (x[q - 1].clone() - left.min(right)).abs()
        })
        .collect();
    let reduced = [
        x[0].clone(),
        x[n - 1].clone(),
        x[n].clone(),
        x[size - 1].clone(),
    ];
    out.extend(s_equations(params, lambda, reduced));
    out
}

/// Residuals of the four-variable system, ordered `x_1, x_n, x_{n+1}, x_{n+m}`.
pub fn s_residuals<T: Real>(params: &DerivedParams<T>, pair: &ReducedEigenpair<T>) -> [T; 4] {
    s_equations(params, &pair.lambda, pair.as_array())
}

/// `(z_1, z_n, z_{n+1}, z_{n+m})`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZVector<T = f64> {
    pub z1: T,
    pub zn: T,
    pub zn1: T,
    pub znm: T,
}

impl<T: Real> ZVector<T> {
    pub fn as_array(&self) -> [T; 4] {
        [
            self.z1.clone(),
            self.zn.clone(),
            self.zn1.clone(),
            self.znm.clone(),
        ]
    }
}

/// A shifted vector and whether `λ > 0`, without which the shifted system is
/// not equivalent to the reduced one.
#[derive(Clone, Debug, PartialEq)]
pub struct ZTransform<T = f64> {
    pub z: ZVector<T>,
    pub lambda_positive: bool,
}

/// `z_1 = x_1 + (m−1)λ`, `z_n = x_n`, `z_{n+1} = x_{n+1} + (m−1)λ`,
/// `z_{n+m} = x_{n+m} + (2m−2)λ`.
pub fn z_transform<T: Real>(pair: &ReducedEigenpair<T>, m: usize) -> ZTransform<T> {
    let l = pair.lambda.clone();
    let shift = T::from_int(m as i64 - 1) * l.clone();
    let z = ZVector {
        z1: pair.x1.clone() + shift.clone(),
        zn: pair.xn.clone(),
        zn1: pair.xn1.clone() + shift.clone(),
        znm: pair.xnm.clone() + shift.clone() + shift,
    };
    ZTransform {
        z,
        lambda_positive: l > T::zero(),
    }
}

/// Residuals of the shifted system, ordered `z_1, z_n, z_{n+1}, z_{n+m}`.
pub fn sz_residuals<T: Real>(params: &DerivedParams<T>, lambda: &T, z: &ZVector<T>) -> [T; 4] {
    let (n, m) = (params.n, params.m);
    let l = lambda.clone();
    let int = |k: i64| T::from_int(k);
    let [z1, zn, zn1, znm] = z.as_array();
    let half = (zn.clone() + znm.clone()).half();
    let eq_n = (params.abar_at(n) - params.b_m.clone() - int(2) * l.clone() + z1.clone())
        .min(params.b_n.clone() - int((n + m) as i64 - 2) * l.clone() + z1.clone());
    let eq_nm = params.b_m.clone() + zn1.clone();
    let eq_1 = (params.a_n.clone() - l.clone() + half.clone())
        .min(params.bbar_n.clone() - int(n as i64 - m as i64) * l.clone() + zn.clone());
    let eq_n1 = (params.a_nm.clone() - l.clone() + half)
        .min(params.bbar_m.clone() - int(2 * m as i64 - 2) * l + znm.clone());
    [
        (z1 - eq_1).abs(),
        (zn - eq_n).abs(),
        (zn1 - eq_n1).abs(),
        (znm - eq_nm).abs(),
    ]
}

/// Largest eigenproblem residual of `(λ, x)` over all `n+m` equations.
pub fn residual_ev(config: &TrafficConfig, lambda: f64, x: &[f64]) -> Result<f64, SpectralError> {
    check_len(x, config.size())?;
    Ok(max_abs(&ev_residuals(
        &Arcs::from_config(config),
        &lambda,
        x,
    )))
}

/// Largest simplified-system residual of `(λ, x)`.
pub fn residual_ss(config: &TrafficConfig, lambda: f64, x: &[f64]) -> Result<f64, SpectralError> {
    check_len(x, config.size())?;
    let params = config.derive()?;
    Ok(max_abs(&ss_residuals(
        &Arcs::from_config(config),
        &params,
        &lambda,
        x,
    )))
}

/// Largest residual of the four-variable system.
pub fn residual_s(params: &DerivedParams, pair: &ReducedEigenpair) -> f64 {
    max_abs(&s_residuals(params, pair))
}

/// Largest residual of the shifted system.
pub fn residual_sz(params: &DerivedParams, lambda: f64, z: &ZVector) -> f64 {
    max_abs(&sz_residuals(params, &lambda, z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{extend_full, reduced_eigenvector, Regime};
    use crate::traffic::allocate;

    fn sample() -> TrafficConfig {
        TrafficConfig::new(4, 3, vec![0.3, 0.1, 0.2, 0.2, 0.1, 0.2, 0.4]).unwrap()
    }

    #[test]
    fn constructed_pair_has_zero_residuals() {
        let c = sample();
        let p = c.derive().unwrap();
        let pair = reduced_eigenvector(&p, Regime::R1).unwrap();
        assert!(residual_s(&p, &pair) <= 1e-12);
        let full = extend_full(&c, &pair).unwrap();
        assert!(residual_ev(&c, full.lambda, &full.x).unwrap() <= 1e-12);
        assert!(residual_ss(&c, full.lambda, &full.x).unwrap() <= 1e-12);
        assert!(residual_ev(&c, full.lambda + 0.01, &full.x).unwrap() >= 0.005);
    }

    #[test]
    fn saturation_pair_has_zero_residuals() {
        let c = allocate(4, 3, 0.4).unwrap();
        let p = c.derive().unwrap();
        let pair = reduced_eigenvector(&p, Regime::R2).unwrap();
        assert!(residual_s(&p, &pair) <= 1e-12);
        let full = extend_full(&c, &pair).unwrap();
        assert!(residual_ss(&c, full.lambda, &full.x).unwrap() <= 1e-12);
    }

    #[test]
    fn perturbed_pair_is_not_a_solution() {
        let p = sample().derive().unwrap();
        let mut pair = reduced_eigenvector(&p, Regime::R1).unwrap();
        pair.xn += 0.05;
        assert!(residual_s(&p, &pair) > 1e-3);
    }

    #[test]
    fn zero_system() {
        let c = TrafficConfig::new(3, 2, vec![0.0; 5]).unwrap();
        assert_eq!(residual_ev(&c, 0.0, &[0.0; 5]).unwrap(), 0.0);
    }

    #[test]
    fn wrong_length() {
        assert!(matches!(
            residual_ev(&sample(), 0.0, &[0.0; 3]),
            Err(SpectralError::WrongLength {
                expected: 7,
                got: 3
            })
        ));
    }

    #[test]
    fn z_transform_examples() {
        let p = sample().derive().unwrap();
        let pair = reduced_eigenvector(&p, Regime::R1).unwrap();
        let t = z_transform(&pair, 3);
        assert!(t.lambda_positive);
        let want = [3.0 / 7.0, -0.3 / 7.0, 4.4 / 7.0, 6.5 / 7.0];
        for (g, w) in t.z.as_array().iter().zip(want) {
            assert!((g - w).abs() <= 1e-12);
        }
        assert!(residual_sz(&p, pair.lambda, &t.z) <= 1e-12);

        let c = allocate(5, 4, 0.2).unwrap();
        let pair = reduced_eigenvector(&c.derive().unwrap(), Regime::R1).unwrap();
        let l = pair.lambda;
        let z = z_transform(&pair, 4).z.as_array();
        let want = [3.0 * l, 0.0, 3.0 * l, 6.0 * l];
        for (g, w) in z.iter().zip(want) {
            assert!((g - w).abs() <= 1e-12);
        }

        let p = allocate(4, 3, 0.8).unwrap().derive().unwrap();
        let pair = reduced_eigenvector(&p, Regime::R4).unwrap();
        assert!(!z_transform(&pair, 3).lambda_positive);
    }
}
