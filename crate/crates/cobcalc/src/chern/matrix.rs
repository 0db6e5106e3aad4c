//! Exact matrices over a Chern context ring and their inversion.
//!
//! The coefficient matrix of a split bundle has units on the anti-diagonal
//! and nilpotents everywhere else, so Gauss-Jordan elimination pivoting on
//! unit entries always succeeds; unit-plus-nilpotent entries are inverted by
//! the geometric series.

use super::{ChernContext, ChernError};
use crate::ring::Series;

#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientMatrix {
    n: usize,
    /// Row-major: entry(j, i) = entries[j * n + i].
    entries: Vec<Series>,
}

impl CoefficientMatrix {
    pub fn from_entries(n: usize, entries: Vec<Series>) -> Self {
        assert_eq!(entries.len(), n * n);
        CoefficientMatrix { n, entries }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entry(&self, row: usize, col: usize) -> &Series {
        &self.entries[row * self.n + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Series]> {
        self.entries.chunks(self.n)
    }

    /// Anti-diagonal entries must be units, all others nilpotent.
    pub fn structure_check(&self, ctx: &ChernContext) -> Result<(), ChernError> {
        for j in 0..self.n {
            for i in 0..self.n {
                let c = self.entry(j, i).constant_term();
                if i + j == self.n - 1 {
                    if !ctx.ring().is_unit(&c) {
                        return Err(ChernError::StructureViolation(format!(
                            "entry ({j},{i}) on the anti-diagonal has non-unit constant {c}"
                        )));
                    }
                } else if !c.is_zero() {
                    return Err(ChernError::StructureViolation(format!(
                        "entry ({j},{i}) off the anti-diagonal has constant {c}, expected nilpotent"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn mul(&self, other: &CoefficientMatrix) -> CoefficientMatrix {
        assert_eq!(self.n, other.n);
        let mut entries = Vec::with_capacity(self.n * self.n);
        for j in 0..self.n {
            for i in 0..self.n {
                let mut acc = self.entry(0, 0).empty_like();
                for k in 0..self.n {
                    let prod = self
                        .entry(j, k)
                        .mul(other.entry(k, i))
                        .expect("same context");
                    acc = acc.add(&prod).expect("same context");
                }
                entries.push(acc);
            }
        }
        CoefficientMatrix {
            n: self.n,
            entries,
        }
    }

    pub fn identity_like(&self, ctx: &ChernContext) -> CoefficientMatrix {
        let mut entries = Vec::with_capacity(self.n * self.n);
        for j in 0..self.n {
            for i in 0..self.n {
                entries.push(if i == j { ctx.one() } else { ctx.zero() });
            }
        }
        CoefficientMatrix {
            n: self.n,
            entries,
        }
    }

    pub fn is_identity(&self, ctx: &ChernContext) -> bool {
        *self == self.identity_like(ctx)
    }

    /// Exact inverse by Gauss-Jordan elimination, pivoting on unit entries.
    pub fn invert(&self, ctx: &ChernContext) -> Result<CoefficientMatrix, ChernError> {
        let n = self.n;
        let mut work = self.entries.clone();
        let mut inv = self.identity_like(ctx).entries;

        for col in 0..n {
            // find a pivot row with an invertible entry in this column
            let pivot = (col..n)
                .find(|&row| ctx.ring().is_unit(&work[row * n + col].constant_term()))
                .ok_or_else(|| {
                    ChernError::NotInvertible(format!("no unit pivot in column {col}"))
                })?;
            if pivot != col {
                for k in 0..n {
                    work.swap(pivot * n + k, col * n + k);
                    inv.swap(pivot * n + k, col * n + k);
                }
            }
            let pivot_inv = work[col * n + col]
                .invert_unit()
                .map_err(|e| ChernError::NotInvertible(e.to_string()))?;
            for k in 0..n {
                work[col * n + k] = work[col * n + k].mul(&pivot_inv).expect("same context");
                inv[col * n + k] = inv[col * n + k].mul(&pivot_inv).expect("same context");
            }
            for row in 0..n {
                if row == col {
                    continue;
                }
                let factor = work[row * n + col].clone();
                if factor.is_zero() {
                    continue;
                }
                for k in 0..n {
                    let w = work[col * n + k].mul(&factor).expect("same context");
                    work[row * n + k] = work[row * n + k].sub(&w).expect("same context");
                    let v = inv[col * n + k].mul(&factor).expect("same context");
                    inv[row * n + k] = inv[row * n + k].sub(&v).expect("same context");
                }
            }
        }
        Ok(CoefficientMatrix { n, entries: inv })
    }
}
