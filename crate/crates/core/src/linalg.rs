//! Dense matrices over Λ and fraction-free (Bareiss) elimination.
//!
//! Pivots must be certified units: nonzero with a single leading monomial.
//! Exact inputs stay exact throughout because every Bareiss division is an
//! exact division in the group ring; truncated inputs fall back to series
//! division at a working cutoff and the result records the weakest cutoff
//! at which a vanishing entry was taken to be zero.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use thiserror::Error;

use crate::lattice::Lattice;
use crate::series::{same_lattice, Cutoff, NovikovElement, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("indeterminate pivot in column {column}: nonzero candidates exist but none has a unique leading monomial")]
    Indeterminate { column: usize },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    lattice: Arc<Lattice>,
    rows: usize,
    cols: usize,
    entries: Vec<NovikovElement>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(lattice: &Arc<Lattice>, rows: usize, cols: usize) -> Self {
        Matrix {
            lattice: lattice.clone(),
            rows,
            cols,
            entries: vec![NovikovElement::zero(lattice); rows * cols],
        }
    }

    pub fn identity(lattice: &Arc<Lattice>, n: usize) -> Self {
        let mut m = Self::zeros(lattice, n, n);
        for i in 0..n {
            m.set(i, i, NovikovElement::one(lattice));
        }
        m
    }

    pub fn from_rows(lattice: &Arc<Lattice>, rows: Vec<Vec<NovikovElement>>) -> Result<Self, LinalgError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(LinalgError::Shape("ragged rows".into()));
            }
            for e in row {
                if !same_lattice(e.lattice(), lattice) {
                    return Err(SeriesError::LatticeMismatch.into());
                }
                entries.push(e);
            }
        }
        Ok(Matrix {
            lattice: lattice.clone(),
            rows: nrows,
            cols: ncols,
            entries,
        })
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &NovikovElement {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: NovikovElement) {
        debug_assert!(same_lattice(value.lattice(), &self.lattice));
        self.entries[r * self.cols + c] = value;
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &NovikovElement)> {
        self.entries
            .iter()
            .enumerate()
            .map(move |(i, e)| (i / self.cols, i % self.cols, e))
    }

    /// Submatrix with the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(&self.lattice, rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.set(i, j, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn column(&self, c: usize) -> Vec<NovikovElement> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn from_columns(lattice: &Arc<Lattice>, rows: usize, columns: &[Vec<NovikovElement>]) -> Matrix {
        let mut m = Matrix::zeros(lattice, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            debug_assert_eq!(col.len(), rows);
            for (i, e) in col.iter().enumerate() {
                m.set(i, j, e.clone());
            }
        }
        m
    }

    fn check_same(&self, other: &Matrix) -> Result<(), LinalgError> {
        if !same_lattice(&self.lattice, &other.lattice) {
            return Err(SeriesError::LatticeMismatch.into());
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_same(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Matrix { entries, ..self.clone() })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_same(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Matrix { entries, ..self.clone() })
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if !same_lattice(&self.lattice, &other.lattice) {
            return Err(SeriesError::LatticeMismatch.into());
        }
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(&self.lattice, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j) + &(a * b);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn scale_column(&mut self, c: usize, by: &NovikovElement) {
        for r in 0..self.rows {
            let v = self.get(r, c) * by;
            self.set(r, c, v);
        }
    }

    pub fn scale_row(&mut self, r: usize, by: &NovikovElement) {
        for c in 0..self.cols {
            let v = self.get(r, c) * by;
            self.set(r, c, v);
        }
    }

    /// First entry that is not known to vanish, together with the weakest
    /// cutoff at which the other entries were certified zero.
    pub fn zero_check(&self) -> ZeroCheck {
        let mut certified = Cutoff::Exact;
        for (r, c, e) in self.entries() {
            if !e.is_zero_below_cutoff() {
                return ZeroCheck::Nonzero { row: r, col: c };
            }
            certified = certified.meet(e.cutoff());
        }
        ZeroCheck::Zero { certified }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZeroCheck {
    Zero { certified: Cutoff },
    Nonzero { row: usize, col: usize },
}

/// Output of fraction-free row reduction.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub rank: usize,
    /// Pivot columns in the order they were found (indices into the input).
    pub pivot_columns: Vec<usize>,
    /// The final Bareiss pivot; for a square full-rank matrix reduced in
    /// natural column order it equals ± the determinant.
    pub last_pivot: Option<NovikovElement>,
    /// Parity of the row permutation.
    pub odd_permutation: bool,
    /// Weakest cutoff at which a vanishing entry was treated as zero.
    pub certified: Cutoff,
}

/// Fraction-free row echelon form, visiting columns in `column_order`.
/// A column becomes a pivot column iff it is independent of the pivot
/// columns visited before it.
pub fn echelon(
    m: &Matrix,
    column_order: &[usize],
    working_cutoff: &BigRational,
) -> Result<Echelon, LinalgError> {
    let mut a = m.clone();
    let mut certified = Cutoff::Exact;
    let mut prev = NovikovElement::one(&m.lattice);
    let mut rank = 0;
    let mut pivots = Vec::new();
    let mut odd = false;

    for (step, &col) in column_order.iter().enumerate() {
        if rank == a.rows {
            break;
        }
        let mut pivot_row = None;
        let mut saw_nonzero = false;
        for r in rank..a.rows {
            let e = a.get(r, col);
            if e.is_zero_below_cutoff() {
                certified = certified.meet(e.cutoff());
                continue;
            }
            saw_nonzero = true;
            if e.is_certified_unit() {
                pivot_row = Some(r);
                break;
            }
        }
        let Some(p) = pivot_row else {
            if saw_nonzero {
                return Err(LinalgError::Indeterminate { column: col });
            }
            continue;
        };
        if p != rank {
            for c in 0..a.cols {
                a.entries.swap(p * a.cols + c, rank * a.cols + c);
            }
            odd = !odd;
        }
        let pivot = a.get(rank, col).clone();
        for r in rank + 1..a.rows {
            let lead = a.get(r, col).clone();
            for &c in &column_order[step + 1..] {
                let num = &(&pivot * a.get(r, c)) - &(&lead * a.get(rank, c));
                let v = num.div(&prev, working_cutoff)?;
                a.set(r, c, v);
            }
            a.set(r, col, NovikovElement::zero(&m.lattice));
        }
        prev = pivot;
        pivots.push(col);
        rank += 1;
    }
    // Entries below the final pivot row that were never visited as pivot
    // candidates still decide the rank; certify them too.
    for r in rank..a.rows {
        for &c in column_order {
            certified = certified.meet(a.get(r, c).cutoff());
        }
    }
    Ok(Echelon {
        rank,
        last_pivot: (rank > 0).then_some(prev),
        pivot_columns: pivots,
        odd_permutation: odd,
        certified,
    })
}

/// Determinant of a square matrix with its certification cutoff.
pub fn determinant(
    m: &Matrix,
    working_cutoff: &BigRational,
) -> Result<(NovikovElement, Cutoff), LinalgError> {
    if m.rows != m.cols {
        return Err(LinalgError::Shape(format!(
            "determinant of a {}x{} matrix",
            m.rows, m.cols
        )));
    }
    if m.rows == 0 {
        return Ok((NovikovElement::one(&m.lattice), Cutoff::Exact));
    }
    let order: Vec<usize> = (0..m.cols).collect();
    let e = echelon(m, &order, working_cutoff)?;
    if e.rank < m.rows || e.pivot_columns != order {
        return Ok((NovikovElement::zero(&m.lattice), e.certified));
    }
    let det = e.last_pivot.expect("full rank");
    let det = if e.odd_permutation { -det } else { det };
    let certified = e.certified.meet(det.cutoff());
    Ok((det, certified))
}

pub fn rank(m: &Matrix, working_cutoff: &BigRational) -> Result<(usize, Cutoff), LinalgError> {
    let order: Vec<usize> = (0..m.cols).collect();
    let e = echelon(m, &order, working_cutoff)?;
    Ok((e.rank, e.certified))
}
