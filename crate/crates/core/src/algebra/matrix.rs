//! Dense matrices over Q(x), with fraction-free elimination.
//!
//! Rows are first cleared of denominators, then elimination runs over the
//! polynomial ring using Bareiss' exact-division step, which keeps
//! intermediate entries as minors of the input instead of letting nested
//! fractions grow.

use super::gcd::lcm;
use super::mpoly::{MPoly, Vars};
use super::ratfunc::RatFunc;
use super::AlgebraError;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FracMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<RatFunc>,
}

impl FracMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<RatFunc>) -> Result<Self, AlgebraError> {
        if rows == 0 || cols == 0 {
            return Err(AlgebraError::Dimension("matrix must be at least 1x1".into()));
        }
        if entries.len() != rows * cols {
            return Err(AlgebraError::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let vars = entries[0].vars();
        if let Some(bad) = entries.iter().find(|e| e.vars() != vars) {
            return Err(AlgebraError::VarMismatch {
                left: vars.to_vec(),
                right: bad.vars().to_vec(),
            });
        }
        Ok(FracMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        f: impl FnMut(usize, usize) -> RatFunc,
    ) -> Result<Self, AlgebraError> {
        let mut f = f;
        let entries = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .map(|(i, j)| f(i, j))
            .collect();
        Self::new(rows, cols, entries)
    }

    pub fn identity(vars: &Vars, n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                RatFunc::one(vars)
            } else {
                RatFunc::zero(vars)
            }
        })
        .expect("identity has valid shape")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn vars(&self) -> &Vars {
        self.entries[0].vars()
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFunc {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[RatFunc] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Same matrix with the order of its rows reversed.
    pub fn reverse_rows(&self) -> Self {
        let entries = (0..self.rows)
            .rev()
            .flat_map(|i| self.row(i).iter().cloned())
            .collect();
        FracMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn mul_vec(&self, v: &[RatFunc]) -> Result<Vec<RatFunc>, AlgebraError> {
        if v.len() != self.cols {
            return Err(AlgebraError::Dimension(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(RatFunc::zero(self.vars()), |acc, (a, b)| &acc + &(a * b))
            })
            .collect())
    }

    fn require_square(&self) -> Result<(), AlgebraError> {
        if self.rows != self.cols {
            return Err(AlgebraError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }

    /// Determinant by Bareiss elimination.
    pub fn determinant(&self) -> Result<RatFunc, AlgebraError> {
        self.require_square()?;
        let n = self.rows;
        let vars = self.vars().clone();
        let (mut m, scale) = clear_rows(
            (0..n).map(|i| self.row(i).to_vec()).collect(),
            &vars,
        );
        let mut negate = false;
        let mut prev = MPoly::one(&vars);
        for k in 0..n.saturating_sub(1) {
            let Some(p) = pick_pivot(&m, k) else {
                return Ok(RatFunc::zero(&vars));
            };
            if p != k {
                m.swap(p, k);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                    m[i][j] = t.div_exact(&prev).expect("Bareiss step divides exactly");
                }
                m[i][k] = MPoly::zero(&vars);
            }
            prev = m[k][k].clone();
        }
        let mut det = m[n - 1][n - 1].clone();
        if negate {
            det = -det;
        }
        RatFunc::new(det, scale)
    }

    /// Solves `self * x = rhs` exactly by fraction-free Gauss-Jordan elimination.
    pub fn solve(&self, rhs: &[RatFunc]) -> Result<Vec<RatFunc>, AlgebraError> {
        self.require_square()?;
        let n = self.rows;
        if rhs.len() != n {
            return Err(AlgebraError::Dimension(format!(
                "right-hand side of length {} for {n} equations",
                rhs.len()
            )));
        }
        let vars = self.vars().clone();
        if rhs.iter().any(|r| r.vars() != &vars) {
            return Err(AlgebraError::VarMismatch {
                left: vars.to_vec(),
                right: rhs.iter().find(|r| r.vars() != &vars).unwrap().vars().to_vec(),
            });
        }
        let aug: Vec<Vec<RatFunc>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.push(rhs[i].clone());
                r
            })
            .collect();
        let (mut m, _) = clear_rows(aug, &vars);
        let mut prev = MPoly::one(&vars);
        for k in 0..n {
            let p = pick_pivot(&m, k).ok_or(AlgebraError::Singular)?;
            m.swap(p, k);
            for i in 0..n {
                if i == k {
                    continue;
                }
                for j in 0..=n {
                    if j == k {
                        continue;
                    }
                    let t = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                    m[i][j] = t.div_exact(&prev).expect("fraction-free step divides exactly");
                }
                m[i][k] = MPoly::zero(&vars);
            }
            prev = m[k][k].clone();
        }
        (0..n)
            .map(|i| RatFunc::new(m[i][n].clone(), m[i][i].clone()))
            .collect()
    }
}

/// Multiplies each row by the lcm of its denominators.
/// Returns the polynomial rows and the product of the multipliers.
fn clear_rows(rows: Vec<Vec<RatFunc>>, vars: &Vars) -> (Vec<Vec<MPoly>>, MPoly) {
    let mut scale = MPoly::one(vars);
    let cleared = rows
        .into_iter()
        .map(|row| {
            let l = row
                .iter()
                .filter(|e| !e.is_polynomial())
                .fold(MPoly::one(vars), |acc, e| lcm(&acc, e.den()));
            if l.is_one() {
                return row.into_iter().map(|e| e.num().clone()).collect();
            }
            scale = &scale * &l;
            row.into_iter()
                .map(|e| &e.num().clone() * &l.div_exact(e.den()).expect("lcm is a multiple"))
                .collect()
        })
        .collect();
    (cleared, scale)
}

/// Row index `>= k` with a nonzero entry in column `k`, preferring the sparsest.
fn pick_pivot(m: &[Vec<MPoly>], k: usize) -> Option<usize> {
    (k..m.len())
        .filter(|&i| !m[i][k].is_zero())
        .min_by_key(|&i| m[i][k].num_terms())
}
