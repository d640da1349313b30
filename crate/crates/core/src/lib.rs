//! Exact invariants of the block-product hypersurfaces
//! x_11...x_1d + ... + x_l1...x_ld = 0 in projective space of dimension
//! ld - 1: Hodge-Du Bois diamonds, intersection-cohomology Betti series
//! with an independent cross-check, the graded lattice combinatorics of
//! the associated torus cone, exact torus-polystability tests, and
//! volume / S-invariant certificates.
//!
//! All values are computed in arbitrary-precision integer or rational
//! arithmetic. Every public type is immutable after construction and every
//! operation is a pure function, so values can be shared freely across
//! threads.

pub mod error;
pub mod exact;
pub mod hodge;
pub mod ih;
pub mod kvol;
pub mod lattice;
mod lp;
pub mod stability;

pub use error::{Error, Result};
pub use exact::{binomial, factorial, multinomial, IntPoly, RatPoly, TateClass};
pub use hodge::{GradedMhs, HodgeDiamond, PureSummand};
pub use kvol::{ValuationKind, ValuationModel, ValuationReport};
pub use lattice::{LatticeCtx, LatticeVec};
pub use stability::{MonomialSupport, WeightSupport, WeightSystem};

pub(crate) mod linalg {
    use num::traits::Zero;
    use num::BigRational;

    /// Rank of a dense rational matrix by exact Gaussian elimination.
    pub(crate) fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for col in 0..ncols {
            let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(rank, pivot);
            let pivot_row = rows[rank].clone();
            for row in rows.iter_mut().skip(rank + 1) {
                if row[col].is_zero() {
                    continue;
                }
                let factor = &row[col] / &pivot_row[col];
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= &factor * p;
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }

    #[cfg(test)]
    mod tests {
        use super::*;
        use num::BigInt;

        fn row(v: &[i64]) -> Vec<BigRational> {
            v.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        }

        #[test]
        fn rank_small_matrices() {
            assert_eq!(rank(vec![row(&[1, 0]), row(&[0, 1])]), 2);
            assert_eq!(rank(vec![row(&[1, 2]), row(&[2, 4])]), 1);
            assert_eq!(rank(vec![row(&[0, 0])]), 0);
            assert_eq!(rank(Vec::new()), 0);
        }
    }
}
