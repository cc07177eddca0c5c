//! Diagonal (Ruiz) equilibration of the constraint matrix.
//!
//! Each sweep divides every row and column by the square root of its largest
//! scaled absolute entry, pushing all row and column maxima toward one. The
//! solver iterates on the scaled data and the scales are unwound before any
//! quantity leaves the module:
//!
//! ```text
//!     A' = Dr·A·Dc,   x = Dc·x',   y = Dr·y',
//!     c' = Dc·c,      l' = Dc⁻¹·l, u' = Dc⁻¹·u,   L' = Dr·L,  U' = Dr·U.
//! ```

use crate::sparse::SparseMatrix;

#[derive(Debug, Clone)]
pub struct Scaling {
    pub row_scale: Vec<f64>,
    pub col_scale: Vec<f64>,
}

impl Scaling {
    /// Identity scaling.
    pub fn identity(nrows: usize, ncols: usize) -> Self {
        Scaling { row_scale: vec![1.0; nrows], col_scale: vec![1.0; ncols] }
    }

    /// Runs `sweeps` rounds of simultaneous row/column equilibration.
    pub fn ruiz(matrix: &SparseMatrix, sweeps: u32) -> Self {
        let mut scaling = Self::identity(matrix.nrows(), matrix.ncols());
        let mut row_max = vec![0.0f64; matrix.nrows()];
        let mut col_max = vec![0.0f64; matrix.ncols()];
        for _ in 0..sweeps {
            row_max.fill(0.0);
            col_max.fill(0.0);
            for (i, j, v) in matrix.triplets() {
                let scaled = (v * scaling.row_scale[i] * scaling.col_scale[j]).abs();
                if scaled > row_max[i] {
                    row_max[i] = scaled;
                }
                if scaled > col_max[j] {
                    col_max[j] = scaled;
                }
            }
            for (scale, &peak) in scaling.row_scale.iter_mut().zip(&row_max) {
                if peak > 0.0 {
                    *scale /= peak.sqrt();
                }
            }
            for (scale, &peak) in scaling.col_scale.iter_mut().zip(&col_max) {
                if peak > 0.0 {
                    *scale /= peak.sqrt();
                }
            }
        }
        scaling
    }

    /// The scaled matrix `Dr·A·Dc`.
    pub fn apply(&self, matrix: &SparseMatrix) -> SparseMatrix {
        let triplets: Vec<(usize, usize, f64)> = matrix
            .triplets()
            .map(|(i, j, v)| (i, j, v * self.row_scale[i] * self.col_scale[j]))
            .collect();
        SparseMatrix::from_triplets(matrix.nrows(), matrix.ncols(), &triplets)
    }
}
