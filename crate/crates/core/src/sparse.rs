//! Thin wrapper around sparse LU for the Newton linear solves.
//!
//! Assembly happens in triplet form; factorization and solves are forced onto
//! a single thread so that repeated runs produce bit-identical solutions
//! regardless of the process thread pool.

use crate::error::{Error, Result};
use faer::prelude::*;
use faer::sparse::{SparseColMat, Triplet};

/// Square sparse system assembled from triplets.
pub struct SparseSystem {
    n: usize,
    triplets: Vec<Triplet<usize, usize, f64>>,
}

impl SparseSystem {
    pub fn new(n: usize) -> Self {
        SparseSystem { n, triplets: Vec::new() }
    }

    pub fn with_capacity(n: usize, nnz: usize) -> Self {
        SparseSystem { n, triplets: Vec::with_capacity(nnz) }
    }

    #[inline]
    pub fn push(&mut self, row: usize, col: usize, val: f64) {
        debug_assert!(row < self.n && col < self.n);
        self.triplets.push(Triplet::new(row, col, val));
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.triplets.len()
    }

    /// Solve A x = b by sparse LU. Duplicate triplets are summed.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        assert_eq!(b.len(), self.n);
        let a = SparseColMat::try_new_from_triplets(self.n, self.n, &self.triplets)
            .map_err(|e| Error::LinearSolve {
                rung: 0,
                eps: 0.0,
                msg: format!("assembly failed: {e:?}"),
            })?;
        let lu = a.sp_lu().map_err(|e| Error::LinearSolve {
            rung: 0,
            eps: 0.0,
            msg: format!("LU factorization failed: {e:?}"),
        })?;
        let rhs = Mat::from_fn(self.n, 1, |i, _| b[i]);
        let x = lu.solve(&rhs);
        Ok((0..self.n).map(|i| x[(i, 0)]).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn solves_small_poisson() {
        // 1-d Dirichlet Laplacian, u'' = -1 on (0,1): u = x(1-x)/2
        let n = 63;
        let h = 1.0 / (n as f64 + 1.0);
        let mut sys = SparseSystem::new(n);
        let mut b = vec![h * h; n];
        for i in 0..n {
            sys.push(i, i, 2.0);
            if i > 0 {
                sys.push(i, i - 1, -1.0);
            }
            if i + 1 < n {
                sys.push(i, i + 1, -1.0);
            }
        }
        let x = sys.solve(&b).unwrap();
        for i in 0..n {
            let xi = (i as f64 + 1.0) * h;
            assert_relative_eq!(x[i], 0.5 * xi * (1.0 - xi), epsilon = 1e-12);
        }
        // duplicate triplets accumulate
        let mut sys2 = SparseSystem::new(2);
        sys2.push(0, 0, 1.0);
        sys2.push(0, 0, 1.0);
        sys2.push(1, 1, 2.0);
        b = vec![2.0, 2.0];
        let x2 = sys2.solve(&b).unwrap();
        assert_relative_eq!(x2[0], 1.0, epsilon = 1e-14);
        assert_relative_eq!(x2[1], 1.0, epsilon = 1e-14);
    }
}
