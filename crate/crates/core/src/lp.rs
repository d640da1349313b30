//! Dense two-phase primal simplex over exact rationals with Bland's rule.
//!
//! Small instances only; every pivot is exact, so feasibility and
//! optimality verdicts carry no tolerance.

use num::traits::{One, Signed, Zero};
use num::BigRational;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum LpOutcome {
    Infeasible,
    Optimal {
        value: BigRational,
        solution: Vec<BigRational>,
    },
}

struct Tableau {
    /// rows[0..m] are constraints, each of length ncols+1 with the
    /// right-hand side last; the objective row is kept separately.
    rows: Vec<Vec<BigRational>>,
    obj: Vec<BigRational>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &BigRational {
        &self.rows[i][self.ncols]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = BigRational::one() / self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let factor = r[col].clone();
            for (v, p) in r.iter_mut().zip(&pivot_row) {
                *v -= &factor * p;
            }
        }
        if !self.obj[col].is_zero() {
            let factor = self.obj[col].clone();
            for (v, p) in self.obj.iter_mut().zip(&pivot_row) {
                *v -= &factor * p;
            }
        }
        self.basis[row] = col;
    }

    /// Bland's rule: entering column is the lowest index with a negative
    /// reduced cost; leaving row is the min-ratio row with the lowest basis
    /// index. Returns false at optimality.
    fn step(&mut self, allowed: usize) -> Result<bool> {
        let Some(col) = (0..allowed).find(|&j| self.obj[j].is_negative()) else {
            return Ok(false);
        };
        let mut best: Option<(usize, BigRational)> = None;
        for i in 0..self.rows.len() {
            if !self.rows[i][col].is_positive() {
                continue;
            }
            let ratio = self.rhs(i) / &self.rows[i][col];
            let better = match &best {
                None => true,
                Some((bi, br)) => {
                    ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                }
            };
            if better {
                best = Some((i, ratio));
            }
        }
        let Some((row, _)) = best else {
            return Err(Error::InvalidParameter(
                "linear program is unbounded".into(),
            ));
        };
        self.pivot(row, col);
        Ok(true)
    }

    /// Rebuild the objective row for costs `c` over the current basis:
    /// obj[j] = c_B . column_j - c_j (so negative entries are improving for
    /// maximization) and the last entry is the current objective value.
    fn set_objective(&mut self, c: &[BigRational]) {
        let mut obj = vec![BigRational::zero(); self.ncols + 1];
        for (j, slot) in obj.iter_mut().enumerate() {
            let mut value = BigRational::zero();
            for (i, &b) in self.basis.iter().enumerate() {
                if !c[b].is_zero() {
                    value += &c[b] * &self.rows[i][j];
                }
            }
            if j < self.ncols {
                value -= &c[j];
            }
            *slot = value;
        }
        self.obj = obj;
    }
}

/// Maximize c . x subject to A x = b, x >= 0.
pub(crate) fn maximize(
    c: &[BigRational],
    a: &[Vec<BigRational>],
    b: &[BigRational],
) -> Result<LpOutcome> {
    let n = c.len();
    let m = a.len();
    if b.len() != m || a.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidParameter(
            "inconsistent linear program dimensions".into(),
        ));
    }

    // Phase 1 tableau with one artificial variable per row.
    let ncols = n + m;
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row = Vec::with_capacity(ncols + 1);
        for v in &a[i] {
            row.push(if flip { -v } else { v.clone() });
        }
        for k in 0..m {
            row.push(if k == i {
                BigRational::one()
            } else {
                BigRational::zero()
            });
        }
        row.push(if flip { -&b[i] } else { b[i].clone() });
        rows.push(row);
    }
    let mut t = Tableau {
        rows,
        obj: Vec::new(),
        basis: (n..n + m).collect(),
        ncols,
    };

    // Phase 1: maximize minus the sum of artificials.
    let mut phase1_cost = vec![BigRational::zero(); ncols];
    for slot in phase1_cost.iter_mut().skip(n) {
        *slot = -BigRational::one();
    }
    t.set_objective(&phase1_cost);
    while t.step(ncols)? {}
    // Phase-1 value is minus the total artificial mass: zero iff feasible.
    if t.obj[ncols].is_negative() {
        return Ok(LpOutcome::Infeasible);
    }

    // Drive leftover artificials out of the basis; drop redundant rows.
    let mut redundant = Vec::new();
    for i in 0..t.rows.len() {
        if t.basis[i] < n {
            continue;
        }
        if let Some(col) = (0..n).find(|&j| !t.rows[i][j].is_zero()) {
            t.pivot(i, col);
        } else {
            redundant.push(i);
        }
    }
    for &i in redundant.iter().rev() {
        t.rows.remove(i);
        t.basis.remove(i);
    }

    // Phase 2 on the structural columns.
    let mut cost = c.to_vec();
    cost.resize(ncols, BigRational::zero());
    t.set_objective(&cost);
    while t.step(n)? {}

    let mut solution = vec![BigRational::zero(); n];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            solution[b] = t.rhs(i).clone();
        }
    }
    let value = t.obj[t.ncols].clone();
    Ok(LpOutcome::Optimal { value, solution })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigInt;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn rats(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn solves_a_tiny_program() {
        // max x + y s.t. x + y + s = 1 -> 1
        let outcome = maximize(
            &rats(&[1, 1, 0]),
            &[rats(&[1, 1, 1])],
            &rats(&[1]),
        )
        .unwrap();
        match outcome {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat(1)),
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn detects_infeasibility() {
        // x = -1, x >= 0
        let outcome = maximize(&rats(&[0]), &[rats(&[1])], &rats(&[-1])).unwrap();
        assert_eq!(outcome, LpOutcome::Infeasible);
    }

    #[test]
    fn detects_unboundedness() {
        // max x s.t. x - y = 0
        let outcome = maximize(&rats(&[1, 0]), &[rats(&[1, -1])], &rats(&[0]));
        assert!(outcome.is_err());
    }

    #[test]
    fn handles_redundant_rows() {
        // duplicated constraint
        let outcome = maximize(
            &rats(&[1, 0]),
            &[rats(&[1, 1]), rats(&[1, 1])],
            &rats(&[1, 1]),
        )
        .unwrap();
        match outcome {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat(1)),
            other => panic!("unexpected outcome {other:?}"),
        }
    }
}
