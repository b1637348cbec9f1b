//! Small exact linear algebra over Gaussian rationals: rank, solve, and
//! row reduction. Dense Gaussian elimination; fine at the sizes used here.

use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c));
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    /// Rank by exact Gaussian elimination.
    pub fn rank(mut self) -> usize {
        let mut rank = 0;
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            // find pivot
            let mut pivot = None;
            for r in row..self.rows {
                if !self.get(r, col).is_zero() {
                    pivot = Some(r);
                    break;
                }
            }
            let Some(p) = pivot else { continue };
            self.swap_rows(row, p);
            let inv = self.get(row, col).recip();
            for c in col..self.cols {
                let v = self.get(row, c) * &inv;
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r != row && !self.get(r, col).is_zero() {
                    let factor = self.get(r, col).clone();
                    for c in col..self.cols {
                        let v = self.get(r, c) - &(self.get(row, c) * &factor);
                        self.set(r, c, v);
                    }
                }
            }
            row += 1;
            rank += 1;
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Solves `A x = b` exactly. Returns `None` if the system is
    /// inconsistent; for underdetermined systems free variables are set
    /// to zero.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            let mut pivot = None;
            for r in row..self.rows {
                if !aug.get(r, col).is_zero() {
                    pivot = Some(r);
                    break;
                }
            }
            let Some(p) = pivot else { continue };
            aug.swap_rows(row, p);
            let inv = aug.get(row, col).recip();
            for c in col..=self.cols {
                let v = aug.get(row, c) * &inv;
                aug.set(row, c, v);
            }
            for r in 0..self.rows {
                if r != row && !aug.get(r, col).is_zero() {
                    let factor = aug.get(r, col).clone();
                    for c in col..=self.cols {
                        let v = aug.get(r, c) - &(aug.get(row, c) * &factor);
                        aug.set(r, c, v);
                    }
                }
            }
            pivots.push((row, col));
            row += 1;
        }
        // Inconsistency: zero row with nonzero rhs.
        for r in row..self.rows {
            if !aug.get(r, self.cols).is_zero() {
                return None;
            }
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (r, c) in pivots {
            x[c] = aug.get(r, self.cols).clone();
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: i64) -> Scalar {
        Scalar::from_int(v)
    }

    #[test]
    fn rank_of_dependent_rows() {
        let m = Matrix::from_rows(vec![
            vec![s(1), s(2), s(3)],
            vec![s(2), s(4), s(6)],
            vec![s(0), s(1), s(1)],
        ]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn solve_square_system() {
        let m = Matrix::from_rows(vec![vec![s(2), s(1)], vec![s(1), s(3)]]);
        let x = m.solve(&[s(5), s(10)]).unwrap();
        assert_eq!(x, vec![s(1), s(3)]);
    }

    #[test]
    fn solve_detects_inconsistency() {
        let m = Matrix::from_rows(vec![vec![s(1), s(1)], vec![s(2), s(2)]]);
        assert!(m.solve(&[s(1), s(3)]).is_none());
    }
}
