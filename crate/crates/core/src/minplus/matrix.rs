use std::fmt;

use super::{MinPlusError, MinPlusScalar};

/// Dense min-plus matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct MinPlusMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<MinPlusScalar>,
}

/// Outcome of [`MinPlusMatrix::check_circuits_positive`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircuitCheck {
    /// Every circuit of the precedence graph has strictly positive weight.
    pub all_positive: bool,
    /// Smallest circuit weight found, `None` for an acyclic graph. When a
    /// negative circuit exists this is some nonpositive circuit weight, not
    /// necessarily the most negative one.
    pub min_weight: Option<f64>,
}

impl MinPlusMatrix {
    /// All-ε matrix.
    pub fn epsilon(rows: usize, cols: usize) -> Self {
        MinPlusMatrix {
            rows,
            cols,
            entries: vec![MinPlusScalar::EPSILON; rows * cols],
        }
    }

    /// e on the diagonal, ε elsewhere.
    pub fn identity(size: usize) -> Self {
        let mut m = Self::epsilon(size, size);
        for i in 0..size {
            m[(i, i)] = MinPlusScalar::E;
        }
        m
    }

    /// Builds a matrix from rows of raw values; `f64::INFINITY` stands for ε.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, MinPlusError> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(n_rows * n_cols);
        for row in rows {
            if row.len() != n_cols {
                return Err(MinPlusError::RaggedRows);
            }
            for &v in row {
                entries.push(MinPlusScalar::new(v)?);
            }
        }
        Ok(MinPlusMatrix {
            rows: n_rows,
            cols: n_cols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> MinPlusScalar {
        self[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: MinPlusScalar) {
        self[(i, j)] = value;
    }

    pub fn row(&self, i: usize) -> &[MinPlusScalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Entrywise ⊕.
    pub fn oplus(&self, other: &Self) -> Result<Self, MinPlusError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MinPlusError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.oplus(*b))
            .collect();
        Ok(MinPlusMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Min-plus product `(A ⊗ B)(i,j) = ⊕ₖ A(i,k) ⊗ B(k,j)`.
    pub fn mat_mul(&self, other: &Self) -> Result<Self, MinPlusError> {
        if self.cols != other.rows {
            return Err(MinPlusError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut out = Self::epsilon(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik.is_epsilon() {
                    continue;
                }
                for j in 0..other.cols {
                    let cand = aik.otimes(other[(k, j)]);
                    let slot = &mut out[(i, j)];
                    *slot = slot.oplus(cand);
                }
            }
        }
        Ok(out)
    }

    /// Min-plus matrix-vector product.
    pub fn mul_vec(&self, v: &[MinPlusScalar]) -> Result<Vec<MinPlusScalar>, MinPlusError> {
        if self.cols != v.len() {
            return Err(MinPlusError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (v.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(MinPlusScalar::EPSILON, |acc, (a, x)| {
                        acc.oplus(a.otimes(*x))
                    })
            })
            .collect())
    }

    /// Largest absolute entrywise difference; ε only matches ε.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| match (a.is_epsilon(), b.is_epsilon()) {
                (true, true) => 0.0,
                (false, false) => (a.value() - b.value()).abs(),
                _ => f64::INFINITY,
            })
            .fold(0.0, f64::max)
    }

    fn require_square(&self) -> Result<(), MinPlusError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(MinPlusError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Shortest-walk closure `A⁺` by triangle relaxation, one pass per pivot.
    /// A nonpositive circuit through `i` leaves a nonpositive diagonal entry.
    fn relaxed_closure(&self) -> Self {
        let n = self.rows;
        let mut c = self.clone();
        for k in 0..n {
            for i in 0..n {
                let cik = c[(i, k)];
                if cik.is_epsilon() {
                    continue;
                }
                for j in 0..n {
                    let cand = cik.otimes(c[(k, j)]);
                    if cand < c[(i, j)] {
                        c[(i, j)] = cand;
                    }
                }
            }
        }
        c
    }

    /// Checks that every circuit of the precedence graph has positive weight.
    ///
    /// Panics if the matrix is not square.
    pub fn check_circuits_positive(&self) -> CircuitCheck {
        self.require_square()
            .expect("circuit check needs a square matrix");
        let closure = self.relaxed_closure();
        let min_weight = (0..self.rows)
            .map(|i| closure[(i, i)])
            .filter(|w| !w.is_epsilon())
            .map(MinPlusScalar::value)
            .reduce(f64::min);
        let all_positive = min_weight.is_none_or(|w| w > 0.0);
        CircuitCheck {
            all_positive,
            min_weight,
        }
    }

    /// Kleene star `A* = ⊕_{k=0}^{size-1} Aᵏ`, defined here only when every
    /// circuit weight is strictly positive.
    pub fn kleene_star(&self) -> Result<Self, MinPlusError> {
        self.require_square()?;
        let closure = self.relaxed_closure();
        let min_weight = (0..self.rows)
            .map(|i| closure[(i, i)])
            .filter(|w| !w.is_epsilon())
            .map(MinPlusScalar::value)
            .reduce(f64::min);
        if min_weight.is_some_and(|w| w <= 0.0) {
            return Err(MinPlusError::NonPositiveCircuit {
                weight: min_weight.unwrap_or_default(),
            });
        }
        Self::identity(self.rows).oplus(&closure)
    }

    /// Unique solution `x = A* ⊗ b` of `x = A ⊗ x ⊕ b`.
    pub fn affine_solve(&self, b: &[MinPlusScalar]) -> Result<Vec<MinPlusScalar>, MinPlusError> {
        if b.len() != self.rows {
            return Err(MinPlusError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (b.len(), 1),
            });
        }
        self.kleene_star()?.mul_vec(b)
    }
}

impl std::ops::Index<(usize, usize)> for MinPlusMatrix {
    type Output = MinPlusScalar;

    fn index(&self, (i, j): (usize, usize)) -> &MinPlusScalar {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for MinPlusMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut MinPlusScalar {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for MinPlusMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MinPlusMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{v}")?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Free-function form of [`MinPlusMatrix::mat_mul`].
pub fn mat_mul(a: &MinPlusMatrix, b: &MinPlusMatrix) -> Result<MinPlusMatrix, MinPlusError> {
    a.mat_mul(b)
}

/// Free-function form of [`MinPlusMatrix::kleene_star`].
pub fn kleene_star(a: &MinPlusMatrix) -> Result<MinPlusMatrix, MinPlusError> {
    a.kleene_star()
}

/// Free-function form of [`MinPlusMatrix::check_circuits_positive`].
pub fn check_circuits_positive(a: &MinPlusMatrix) -> CircuitCheck {
    a.check_circuits_positive()
}

/// Free-function form of [`MinPlusMatrix::affine_solve`].
pub fn affine_solve(
    a: &MinPlusMatrix,
    b: &[MinPlusScalar],
) -> Result<Vec<MinPlusScalar>, MinPlusError> {
    a.affine_solve(b)
}
