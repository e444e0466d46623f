//! Dense matrices over a tower field and Gaussian elimination.
//!
//! The same routines serve matrices over F_p, F_q and F_{q^n}, since the
//! subfields embed as small codes.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldTower};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Elem::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Elem::ONE;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Elem>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Matrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn entries(&self) -> &[Elem] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn mul(&self, t: &FieldTower, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            t.sum((0..self.cols).map(|k| t.mul(self[(i, k)], other[(k, j)])))
        })
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, t: &FieldTower, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| t.sum((0..self.rows).map(|i| t.mul(v[i], self[(i, j)]))))
            .collect()
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, t: &FieldTower, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| t.sum((0..self.cols).map(|j| t.mul(self[(i, j)], v[j]))))
            .collect()
    }

    /// Removes row `r` and column `c`.
    pub fn minor(&self, r: usize, c: usize) -> Matrix {
        let mut data = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in (0..self.rows).filter(|&i| i != r) {
            for j in (0..self.cols).filter(|&j| j != c) {
                data.push(self[(i, j)]);
            }
        }
        Matrix {
            rows: self.rows - 1,
            cols: self.cols - 1,
            data,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Reduces in place to reduced row echelon form and returns the pivot columns.
    pub fn rref(&mut self, t: &FieldTower) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = t.safe_inv(self[(r, c)]);
            for j in c..self.cols {
                self[(r, j)] = t.mul(self[(r, j)], inv);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self[(i, c)];
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = t.sub(self[(i, j)], t.mul(f, self[(r, j)]));
                    self[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, t: &FieldTower) -> usize {
        self.clone().rref(t).len()
    }

    pub fn determinant(&self, t: &FieldTower) -> Elem {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Elem::ONE;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !a[(i, c)].is_zero()) else {
                return Elem::ZERO;
            };
            if pr != c {
                a.swap_rows(pr, c);
                det = t.neg(det);
            }
            let piv = a[(c, c)];
            det = t.mul(det, piv);
            let inv = t.safe_inv(piv);
            for i in c + 1..n {
                let f = t.mul(a[(i, c)], inv);
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = t.sub(a[(i, j)], t.mul(f, a[(c, j)]));
                    a[(i, j)] = v;
                }
            }
        }
        det
    }

    /// Basis of {x : A x = 0}.
    pub fn nullspace(&self, t: &FieldTower) -> Vec<Vec<Elem>> {
        let mut a = self.clone();
        let pivots = a.rref(t);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Elem::ZERO; self.cols];
                v[f] = Elem::ONE;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = t.neg(a[(r, f)]);
                }
                v
            })
            .collect()
    }

    /// One solution of A x = b with free variables set to zero.
    pub fn solve(&self, t: &FieldTower, b: &[Elem]) -> Result<Vec<Elem>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self[(i, j)]
            } else {
                b[i]
            }
        });
        let pivots = aug.rref(t);
        if pivots.last() == Some(&self.cols) {
            return Err(Error::NoSolution);
        }
        let mut x = vec![Elem::ZERO; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug[(r, self.cols)];
        }
        Ok(x)
    }

    /// One solution of x A = b with free variables set to zero.
    pub fn solve_left(&self, t: &FieldTower, b: &[Elem]) -> Result<Vec<Elem>> {
        self.transpose().solve(t, b)
    }

    pub fn inverse(&self, t: &FieldTower) -> Result<Matrix> {
        let n = self.rows;
        assert_eq!(n, self.cols);
        let mut aug = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)]
            } else if j - n == i {
                Elem::ONE
            } else {
                Elem::ZERO
            }
        });
        let pivots = aug.rref(t);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::SingularBasisSystem);
        }
        Ok(Matrix::from_fn(n, n, |i, j| aug[(i, n + j)]))
    }

    pub fn is_idempotent(&self, t: &FieldTower) -> bool {
        self.rows == self.cols && self.mul(t, self) == *self
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Elem;
    fn index(&self, (i, j): (usize, usize)) -> &Elem {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Elem {
        &mut self.data[i * self.cols + j]
    }
}

/// Rows separated by `;`, entries by `,`.
impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(";")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            f.write_str(&row.join(","))?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> FieldTower {
        FieldTower::new(7, 1, 1).unwrap()
    }

    fn m(rows: &[&[u32]]) -> Matrix {
        Matrix::from_rows(
            &rows
                .iter()
                .map(|r| r.iter().map(|&x| Elem(x)).collect())
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn determinant_over_f7() {
        let t = f7();
        assert_eq!(m(&[&[1, 2], &[3, 4]]).determinant(&t), Elem(5));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant(&t), Elem(6));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).determinant(&t), Elem(0));
    }

    #[test]
    fn solve_and_nullspace() {
        let t = f7();
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(a.rank(&t), 1);
        let ns = a.nullspace(&t);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(a.mul_vec(&t, v).iter().all(|e| e.is_zero()));
        }
        let x = a.solve(&t, &[Elem(1), Elem(2)]).unwrap();
        assert_eq!(a.mul_vec(&t, &x), vec![Elem(1), Elem(2)]);
        assert_eq!(a.solve(&t, &[Elem(1), Elem(1)]), Err(Error::NoSolution));
    }

    #[test]
    fn inverse_round_trip() {
        let t = FieldTower::new(2, 1, 3).unwrap();
        let a = m(&[&[1, 2, 3], &[0, 5, 1], &[7, 0, 4]]);
        if !a.determinant(&t).is_zero() {
            let ai = a.inverse(&t).unwrap();
            assert_eq!(a.mul(&t, &ai), Matrix::identity(3));
        }
    }
}
