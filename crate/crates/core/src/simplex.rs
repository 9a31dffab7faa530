//! Exact two-phase simplex over the rationals with Bland's rule.
//!
//! Solves `min c·x` subject to `A x = b`, `x ≥ 0` and returns primal and
//! dual certificates, or a Farkas vector when the system is infeasible.

use num_traits::{One, Signed, Zero};

use crate::scalar::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    /// `dual` satisfies `Aᵀy ≤ c` and `b·y = value`.
    Optimal {
        x: Vec<Rational>,
        value: Rational,
        dual: Vec<Rational>,
    },
    /// `Aᵀy ≤ 0` and `b·y > 0`.
    Infeasible { farkas: Vec<Rational> },
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Original row index of each tableau row.
    origin: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x = &*x / &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        self.basis[r] = c;
    }

    /// Runs Bland's rule over columns `< eligible`; false if unbounded.
    fn optimise(&mut self, cost: &[Rational], eligible: usize) -> bool {
        loop {
            let entering = (0..eligible).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut z = cost[j].clone();
                for (i, row) in self.rows.iter().enumerate() {
                    if !row[j].is_zero() {
                        z -= &cost[self.basis[i]] * &row[j];
                    }
                }
                z.is_negative()
            });
            let Some(j) = entering else { return true };
            let mut best: Option<(Rational, usize, usize)> = None;
            for i in 0..self.rows.len() {
                if self.rows[i][j].is_positive() {
                    let ratio = self.rhs(i) / &self.rows[i][j];
                    let better = match &best {
                        None => true,
                        Some((r, _, b)) => ratio < *r || (ratio == *r && self.basis[i] < *b),
                    };
                    if better {
                        best = Some((ratio, i, self.basis[i]));
                    }
                }
            }
            match best {
                None => return false,
                Some((_, i, _)) => self.pivot(i, j),
            }
        }
    }
}

/// Solves `Mᵀ y = c` for square `M`, by Gauss-Jordan elimination.
fn solve_transposed(m: &[Vec<Rational>], c: &[Rational]) -> Option<Vec<Rational>> {
    let n = c.len();
    let mut aug: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = (0..n).map(|j| m[j][i].clone()).collect();
            row.push(c[i].clone());
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, piv);
        let p = aug[col][col].clone();
        for x in aug[col].iter_mut() {
            *x = &*x / &p;
        }
        let prow = aug[col].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x = &*x - &(&f * y);
                }
            }
        }
    }
    Some(aug.into_iter().map(|mut r| r.pop().expect("rhs")).collect())
}

pub fn solve_lp(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> LpOutcome {
    let m = b.len();
    let n = c.len();
    assert!(a.len() == m && a.iter().all(|r| r.len() == n), "LP shape");
    // row signs so that b ≥ 0
    let sign: Vec<Rational> = b
        .iter()
        .map(|x| if x.is_negative() { -Rational::one() } else { Rational::one() })
        .collect();
    let width = n + m;
    let full = |i: usize, j: usize| -> Rational {
        if j < n {
            &a[i][j] * &sign[i]
        } else if j - n == i {
            Rational::one()
        } else {
            Rational::zero()
        }
    };
    let mut t = Tableau {
        rows: (0..m)
            .map(|i| {
                let mut row: Vec<Rational> = (0..width).map(|j| full(i, j)).collect();
                row.push(&b[i] * &sign[i]);
                row
            })
            .collect(),
        basis: (n..n + m).collect(),
        origin: (0..m).collect(),
        width,
    };
    let dual_of = |t: &Tableau, cost: &[Rational]| -> Vec<Rational> {
        let k = t.rows.len();
        let bmat: Vec<Vec<Rational>> = (0..k)
            .map(|r| t.basis.iter().map(|&j| full(t.origin[r], j)).collect())
            .collect();
        // bmat[r][col] is row r of the basis matrix; solve Bᵀ y = c_B
        let cb: Vec<Rational> = t.basis.iter().map(|&j| cost[j].clone()).collect();
        let y = solve_transposed(&bmat, &cb).expect("basis matrix is invertible");
        let mut out = vec![Rational::zero(); m];
        for (r, yr) in y.into_iter().enumerate() {
            out[t.origin[r]] = yr * &sign[t.origin[r]];
        }
        out
    };

    let phase1: Vec<Rational> = (0..width)
        .map(|j| if j < n { Rational::zero() } else { Rational::one() })
        .collect();
    t.optimise(&phase1, width);
    let infeasibility: Rational = (0..m)
        .filter(|&i| t.basis[i] >= n)
        .map(|i| t.rhs(i).clone())
        .sum();
    if infeasibility.is_positive() {
        // the phase-one dual has Aᵀy ≤ 0 and b·y = infeasibility > 0
        return LpOutcome::Infeasible {
            farkas: dual_of(&t, &phase1),
        };
    }
    // drive zero-level artificials out of the basis or drop redundant rows
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => {
                    t.pivot(i, j);
                    i += 1;
                }
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    t.origin.remove(i);
                }
            }
        } else {
            i += 1;
        }
    }
    let cost: Vec<Rational> = (0..width)
        .map(|j| if j < n { c[j].clone() } else { Rational::zero() })
        .collect();
    if !t.optimise(&cost, n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &j) in t.basis.iter().enumerate() {
        x[j] = t.rhs(i).clone();
    }
    let value = x.iter().zip(c).map(|(xi, ci)| xi * ci).sum();
    let dual = dual_of(&t, &cost);
    LpOutcome::Optimal { x, value, dual }
}
