//! Exact fraction-free elimination for affine systems.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::rational::{lcm_denominators, Rational};

/// `Σ coeffs[k].1 · x[coeffs[k].0] = rhs`.
#[derive(Debug, Clone)]
pub struct AffineEquation {
    pub coeffs: Vec<(usize, Rational)>,
    pub rhs: Rational,
    pub tag: String,
}

#[derive(Debug, Clone, Default)]
pub struct LinearSystem {
    pub unknowns: Vec<String>,
    pub equations: Vec<AffineEquation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SolveStatus {
    Unique,
    /// Free unknowns were set to zero.
    Underdetermined { free: Vec<usize> },
    /// Index of an equation that cannot be satisfied.
    Inconsistent { witness: usize },
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub values: Vec<Rational>,
    pub status: SolveStatus,
    pub rank: usize,
}

impl Solution {
    pub fn nullity(&self) -> usize {
        self.values.len() - self.rank
    }
}

impl LinearSystem {
    pub fn new(unknowns: Vec<String>) -> Self {
        LinearSystem {
            unknowns,
            equations: Vec::new(),
        }
    }

    pub fn push(&mut self, coeffs: Vec<(usize, Rational)>, rhs: Rational, tag: impl Into<String>) {
        self.equations.push(AffineEquation {
            coeffs,
            rhs,
            tag: tag.into(),
        });
    }
}

/// Solves a single affine system.
pub fn graded_linear_solve(system: &LinearSystem) -> Solution {
    let rows: Vec<Vec<(usize, Rational)>> =
        system.equations.iter().map(|e| e.coeffs.clone()).collect();
    let rhs: Vec<Vec<Rational>> = system.equations.iter().map(|e| vec![e.rhs.clone()]).collect();
    solve_shared(&rows, system.unknowns.len(), &rhs)
        .pop()
        .expect("one right-hand side")
}

/// Solves `A x = b_c` for every right-hand-side column `c` with one
/// elimination of `A`. `rhs[r][c]` is entry `r` of column `c`.
pub fn solve_shared(
    rows: &[Vec<(usize, Rational)>],
    ncols: usize,
    rhs: &[Vec<Rational>],
) -> Vec<Solution> {
    let nrows = rows.len();
    let nrhs = rhs.first().map_or(0, |r| r.len());
    let width = ncols + nrhs;
    let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(nrows);
    for (r, row) in rows.iter().enumerate() {
        let scale = lcm_denominators(row.iter().map(|(_, c)| c).chain(rhs[r].iter()));
        let mut dense = vec![BigInt::zero(); width];
        for (j, c) in row {
            let v = c.numer() * (&scale / c.denom());
            dense[*j] += v;
        }
        for (k, c) in rhs[r].iter().enumerate() {
            dense[ncols + k] = c.numer() * (&scale / c.denom());
        }
        m.push(dense);
    }
    let mut origin: Vec<usize> = (0..nrows).collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        origin.swap(r, p);
        let (top, bottom) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let piv = pivot_row[c].clone();
        for row in bottom.iter_mut() {
            let factor = row[c].clone();
            if factor.is_zero() {
                for j in c + 1..width {
                    if !row[j].is_zero() {
                        row[j] = &row[j] * &piv / &prev;
                    }
                }
                continue;
            }
            for j in c + 1..width {
                let v = &piv * &row[j] - &factor * &pivot_row[j];
                debug_assert!(v.is_multiple_of(&prev));
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = piv;
        pivots.push((r, c));
        r += 1;
    }
    let rank = pivots.len();
    let pivot_cols: Vec<usize> = pivots.iter().map(|p| p.1).collect();
    let free: Vec<usize> = (0..ncols).filter(|c| !pivot_cols.contains(c)).collect();

    (0..nrhs)
        .map(|k| {
            let col = ncols + k;
            if let Some(bad) = (rank..nrows).find(|&i| !m[i][col].is_zero()) {
                return Solution {
                    values: vec![Rational::zero(); ncols],
                    status: SolveStatus::Inconsistent {
                        witness: origin[bad],
                    },
                    rank,
                };
            }
            let mut x = vec![Rational::zero(); ncols];
            for &(row, c) in pivots.iter().rev() {
                let mut acc = Rational::from(m[row][col].clone());
                for &(_, c2) in pivots.iter().filter(|p| p.1 > c) {
                    if !m[row][c2].is_zero() {
                        acc -= &(&Rational::from(m[row][c2].clone()) * &x[c2]);
                    }
                }
                x[c] = &acc / &Rational::from(m[row][c].clone());
            }
            Solution {
                values: x,
                status: if free.is_empty() {
                    SolveStatus::Unique
                } else {
                    SolveStatus::Underdetermined { free: free.clone() }
                },
                rank,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn two_by_two() {
        let mut s = LinearSystem::new(vec!["x".into(), "y".into()]);
        s.push(vec![(0, q(1)), (1, q(1))], q(2), "sum");
        s.push(vec![(0, q(1)), (1, q(-1))], q(0), "diff");
        let sol = graded_linear_solve(&s);
        assert_eq!(sol.status, SolveStatus::Unique);
        assert_eq!(sol.values, vec![q(1), q(1)]);
    }

    #[test]
    fn underdetermined_reports_free() {
        let mut s = LinearSystem::new(vec!["x".into(), "y".into()]);
        s.push(vec![(0, q(1)), (1, q(1))], q(0), "only");
        let sol = graded_linear_solve(&s);
        assert_eq!(sol.status, SolveStatus::Underdetermined { free: vec![1] });
        assert_eq!(sol.nullity(), 1);
    }

    #[test]
    fn inconsistent_reports_witness() {
        let mut s = LinearSystem::new(vec!["x".into()]);
        s.push(vec![(0, q(2))], q(2), "a");
        s.push(vec![(0, q(4))], q(5), "b");
        let sol = graded_linear_solve(&s);
        assert_eq!(sol.status, SolveStatus::Inconsistent { witness: 1 });
    }

    #[test]
    fn rational_entries_and_redundant_rows() {
        let mut s = LinearSystem::new(vec!["a".into(), "b".into(), "c".into()]);
        s.push(vec![(0, Rational::new(1, 2)), (2, Rational::new(1, 3))], q(1), "r0");
        s.push(vec![(1, Rational::new(2, 7))], Rational::new(1, 7), "r1");
        s.push(vec![(0, q(3)), (2, q(2))], q(6), "r2");
        s.push(vec![(2, q(5))], q(0), "r3");
        let sol = graded_linear_solve(&s);
        assert_eq!(sol.status, SolveStatus::Unique);
        assert_eq!(sol.values, vec![q(2), Rational::new(1, 2), q(0)]);
    }
}
