use nalgebra::{DMatrix, DVector};
use thiserror::Error;

/// Pivots with smaller magnitude mark the system as singular.
pub const PIVOT_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinearError {
    #[error("singular system: pivot {pivot:e} in column {column}")]
    Singular { column: usize, pivot: f64 },
    #[error("dimension mismatch: {rows}x{cols} matrix, right-hand side of length {rhs}")]
    Dimension {
        rows: usize,
        cols: usize,
        rhs: usize,
    },
}

/// Solve `a * x = c` by LU decomposition with partial pivoting.
/// `a` is row-major `n x n`.
pub fn solve_linear(a: &[Vec<f64>], c: &[f64]) -> Result<Vec<f64>, LinearError> {
    let n = c.len();
    if a.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(LinearError::Dimension {
            rows: a.len(),
            cols: a.first().map_or(0, Vec::len),
            rhs: n,
        });
    }
    let flat: Vec<f64> = a.iter().flatten().copied().collect();
    let mut x = c.to_vec();
    solve_in_place(&flat, &mut x)?;
    Ok(x)
}

/// Same as [`solve_linear`] on a flat row-major buffer; the solution
/// overwrites `rhs`.
pub(crate) fn solve_in_place(m: &[f64], rhs: &mut [f64]) -> Result<(), LinearError> {
    let n = rhs.len();
    if n == 0 {
        return Ok(());
    }
    let lu = DMatrix::from_row_slice(n, n, m).lu();
    let u = lu.u();
    if let Some(column) = (0..n).find(|&i| u[(i, i)].abs() < PIVOT_EPSILON) {
        return Err(LinearError::Singular {
            column,
            pivot: u[(column, column)].abs(),
        });
    }
    let x = lu
        .solve(&DVector::from_column_slice(rhs))
        .ok_or(LinearError::Singular {
            column: n - 1,
            pivot: 0.0,
        })?;
    rhs.copy_from_slice(x.as_slice());
    Ok(())
}
