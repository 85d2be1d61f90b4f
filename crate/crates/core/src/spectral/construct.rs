use crate::minplus::{MinPlusMatrix, MinPlusScalar};
use crate::numeric::{Exact, Real};
use crate::traffic::{Arcs, DerivedParams, TrafficConfig};

use super::{lambda_in, regime_applies, Regime, SpectralError};

/// Eigenvalue with the eigenvector restricted to positions `1, n, n+1, n+m`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedEigenpair<T = f64> {
    pub lambda: T,
    pub x1: T,
    pub xn: T,
    pub xn1: T,
    pub xnm: T,
    pub regime: Regime,
}

impl<T: Real> ReducedEigenpair<T> {
    /// `(x_1, x_n, x_{n+1}, x_{n+m})`.
    pub fn as_array(&self) -> [T; 4] {
        [
            self.x1.clone(),
            self.xn.clone(),
            self.xn1.clone(),
            self.xnm.clone(),
        ]
    }
}

/// Eigenvalue with the full `n+m` eigenvector (0-based storage of `x_1..x_{n+m}`).
#[derive(Clone, Debug, PartialEq)]
pub struct FullEigenpair<T = f64> {
    pub lambda: T,
    pub x: Vec<T>,
}

impl<T: Real> FullEigenpair<T> {
    pub fn to_f64(&self) -> FullEigenpair<f64> {
        FullEigenpair {
            lambda: self.lambda.to_f64(),
            x: self.x.iter().map(Real::to_f64).collect(),
        }
    }
}

/// Closed-form reduced eigenvector of `regime`, with `x_1 = 0`.
///
/// Does not check that the regime applies at this density.
pub fn reduced_in<T: Real>(p: &DerivedParams<T>, regime: Regime) -> ReducedEigenpair<T> {
    let int = |v: usize| T::from_int(v as i64);
    let (n, m) = (p.n, p.m);
    let lambda = lambda_in(p, regime);
    let l = lambda.clone();
    let a_n = p.a_n.clone();
    let a_nm = p.a_nm.clone();
    let abar_n = p.abar_at(n);
    let two = T::from_int(2);
    let (xn, xn1, xnm) = match regime {
        Regime::R1 => (
            p.b_n.clone() - int(n - 1) * l.clone(),
            a_nm - a_n.clone(),
            int(n + 1) * l - two * a_n - p.b_n.clone(),
        ),
        Regime::R2 => (
            (int(m) - int(3)) * l.clone() + abar_n - p.b_m.clone(),
            a_nm.clone() - a_n.clone(),
            p.b_m.clone() + a_nm - a_n - int(m - 1) * l,
        ),
        Regime::R3 => {
            // Coefficients 2m−n+1 and m−n+2 may be negative.
            let c_nm = T::from_int(2 * m as i64 - n as i64 + 1);
            let c_n1 = T::from_int(m as i64 - n as i64 + 2);
            (
                int(n - 1) * l.clone() - p.bbar_n.clone(),
                p.b_m.clone() + two.clone() * a_nm.clone() - p.bbar_n.clone() - c_n1 * l.clone(),
                two.clone() * p.b_m.clone() + two * a_nm - p.bbar_n.clone() - c_nm * l,
            )
        }
        Regime::R4 => (
            -p.bbar_n.clone(),
            T::from_int(1) + a_nm - a_n.clone(),
            int(n + 1) - two * a_n - p.b_n.clone(),
        ),
    };
    ReducedEigenpair {
        lambda,
        x1: T::zero(),
        xn,
        xn1,
        xnm,
        regime,
    }
}

/// Closed-form reduced eigenvector of `regime` at these parameters.
pub fn reduced_eigenvector(
    params: &DerivedParams,
    regime: Regime,
) -> Result<ReducedEigenpair, SpectralError> {
    if !regime_applies(params, regime) {
        return Err(SpectralError::RegimeNotApplicable {
            regime,
            d: params.d,
        });
    }
    Ok(reduced_in(params, regime))
}

/// Places the four known values into an `n+m` vector (`None` elsewhere).
fn boundary_slots<T: Real>(n: usize, m: usize, pair: &ReducedEigenpair<T>) -> Vec<Option<T>> {
    let size = n + m;
    let mut x = vec![None; size];
    x[0] = Some(pair.x1.clone());
    x[n - 1] = Some(pair.xn.clone());
    x[n] = Some(pair.xn1.clone());
    x[size - 1] = Some(pair.xnm.clone());
    x
}

/// Fills the interior positions by solving `x = A ⊗ x ⊕ b` with the Kleene star.
///
/// Row `q` of `A` carries `a_{q−1} − λ` towards `x_{q−1}` and `ā_q − λ`
/// towards `x_{q+1}`; a neighbour on the boundary contributes to `b`
/// instead. Every circuit of `A` has weight `2k(1/2 − λ)`, so the star
/// exists for `λ < 1/2`.
pub fn extend_full(
    config: &TrafficConfig,
    pair: &ReducedEigenpair,
) -> Result<FullEigenpair, SpectralError> {
    config
        .validate()
        .map_err(crate::traffic::TrafficError::InvalidConfig)?;
    let arcs = Arcs::from_config(config);
    let size = arcs.size();
    let lambda = pair.lambda;
    let mut x = boundary_slots(config.n, config.m, pair);

    let interior: Vec<usize> = arcs.interior_positions().collect();
    let mut slot = vec![None; size + 2];
    for (k, &q) in interior.iter().enumerate() {
        slot[q] = Some(k);
    }
    let dim = interior.len();
    let mut a_mat = MinPlusMatrix::epsilon(dim, dim);
    let mut b = vec![MinPlusScalar::EPSILON; dim];
    for (row, &q) in interior.iter().enumerate() {
        let links = [
            (q - 1, arcs.a(q - 1) - lambda),
            (q + 1, arcs.abar(q) - lambda),
        ];
        for (nb, w) in links {
            let w = MinPlusScalar::finite(w);
            match slot[nb] {
                Some(col) => a_mat[(row, col)] = w,
                None => {
                    let known = x[nb - 1].expect("neighbour of an interior place is known");
                    b[row] = b[row].oplus(w.otimes(MinPlusScalar::finite(known)));
                }
            }
        }
    }
    let solved = a_mat.affine_solve(&b)?;
    for (&q, v) in interior.iter().zip(solved) {
        x[q - 1] = Some(v.value());
    }
    Ok(FullEigenpair {
        lambda,
        x: x.into_iter()
            .map(|v| v.expect("every position solved"))
            .collect(),
    })
}

/// Fills the interior positions by value iteration `x ← A ⊗ x ⊕ b` from ε,
/// in any field. Stationary after at most `interior + 1` passes when `λ < 1/2`.
pub fn extend_by_relaxation<T: Real>(
    arcs: &Arcs<T>,
    pair: &ReducedEigenpair<T>,
) -> Result<FullEigenpair<T>, SpectralError> {
    let mut x = boundary_slots(arcs.n, arcs.m, pair);
    let interior: Vec<usize> = arcs.interior_positions().collect();
    let lambda = pair.lambda.clone();
    let max_passes = interior.len() + 1;
    let mut settled = interior.is_empty();
    for _ in 0..max_passes {
        if settled {
            break;
        }
        let mut next = x.clone();
        let mut changed = false;
        for &q in &interior {
            let left = x[q - 2]
                .clone()
                .map(|v| arcs.a(q - 1).clone() - lambda.clone() + v);
            let right = x[q]
                .clone()
                .map(|v| arcs.abar(q).clone() - lambda.clone() + v);
            let value = match (left, right) {
                (Some(l), Some(r)) => Some(l.min(r)),
                (l, r) => l.or(r),
            };
            if value != x[q - 1] {
                changed = true;
            }
            next[q - 1] = value;
        }
        x = next;
        settled = !changed;
    }
    if !settled {
        return Err(SpectralError::NoConvergence(max_passes));
    }
    Ok(FullEigenpair {
        lambda,
        x: x.into_iter()
            .map(|v| v.expect("every position reached"))
            .collect(),
    })
}

/// Exact-arithmetic counterpart of [`extend_full`].
pub fn extend_full_exact(
    config: &TrafficConfig,
    pair: &ReducedEigenpair<Exact>,
) -> Result<FullEigenpair<Exact>, SpectralError> {
    config
        .validate()
        .map_err(crate::traffic::TrafficError::InvalidConfig)?;
    extend_by_relaxation(&Arcs::exact(config), pair)
}

/// The full eigenpair of `regime`, computed in exact rational arithmetic from
/// the rationals the configuration's `f64` arc values represent.
pub fn exact_eigenpair(
    config: &TrafficConfig,
    regime: Regime,
) -> Result<FullEigenpair<Exact>, SpectralError> {
    let params = config.derive()?;
    if !regime_applies(&params, regime) {
        return Err(SpectralError::RegimeNotApplicable {
            regime,
            d: params.d,
        });
    }
    let exact = config.derive_exact()?;
    extend_full_exact(config, &reduced_in(&exact, regime))
}
