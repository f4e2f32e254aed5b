//! Exact dense linear algebra over the scalar field.
//!
//! Row reduction with exact rational-function pivots; no pivoting strategy
//! beyond "first nonzero" is needed since there is no rounding.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::scalars::ScalarElement;

/// A dense matrix over `Q(t1..tk)`. `k` is carried so empty matrices can
/// still produce zeros of the right ring.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    k: usize,
    rows: usize,
    cols: usize,
    data: Vec<ScalarElement>,
}

impl Matrix {
    pub fn zeros(k: usize, rows: usize, cols: usize) -> Self {
        Matrix {
            k,
            rows,
            cols,
            data: vec![ScalarElement::zero(k); rows * cols],
        }
    }

    pub fn identity(k: usize, n: usize) -> Self {
        let mut m = Self::zeros(k, n, n);
        for i in 0..n {
            m[(i, i)] = ScalarElement::one(k);
        }
        m
    }

    pub fn from_rows(k: usize, rows: Vec<Vec<ScalarElement>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|v| v.len()).unwrap_or(0);
        assert!(rows.iter().all(|v| v.len() == c), "ragged matrix rows");
        let data: Vec<ScalarElement> = rows.into_iter().flatten().collect();
        for e in &data {
            assert_eq!(e.base_vars(), k, "matrix entry from a different scalar ring");
        }
        Matrix { k, rows: r, cols: c, data }
    }

    pub fn base_vars(&self) -> usize {
        self.k
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[ScalarElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zeros(self.k, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn neg(&self) -> Matrix {
        self.map(|e| -e)
    }

    pub fn map<F: Fn(&ScalarElement) -> ScalarElement>(&self, f: F) -> Matrix {
        Matrix {
            k: self.k,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[ScalarElement]) -> Vec<ScalarElement> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = ScalarElement::zero(self.k);
                for j in 0..self.cols {
                    acc = &acc + &(&self[(i, j)] * &v[j]);
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form; returns (rref, pivot column per pivot row).
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip().expect("pivot is nonzero");
            for j in c..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let factor = m[(i, c)].clone();
                    for j in c..m.cols {
                        let sub = &factor * &m[(r, j)];
                        m[(i, j)] = &m[(i, j)] - &sub;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel: one vector per free column, entry 1 at the
    /// free column, ordered by free-column index.
    pub fn kernel_basis(&self) -> Vec<Vec<ScalarElement>> {
        let (m, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![ScalarElement::zero(self.k); self.cols];
            v[free] = ScalarElement::one(self.k);
            for (prow, &pcol) in pivots.iter().enumerate() {
                v[pcol] = -&m[(prow, free)];
            }
            basis.push(v);
        }
        basis
    }

    /// Solve `self * x = b` exactly; `None` when inconsistent. Returns one
    /// solution (free variables set to zero).
    pub fn solve(&self, b: &[ScalarElement]) -> Option<Vec<ScalarElement>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.k, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (m, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // pivot in the augmented column
        }
        let mut x = vec![ScalarElement::zero(self.k); self.cols];
        for (prow, &pcol) in pivots.iter().enumerate() {
            x[pcol] = m[(prow, self.cols)].clone();
        }
        Some(x)
    }

    pub fn det(&self) -> ScalarElement {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut m = self.clone();
        let mut det = ScalarElement::one(self.k);
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                return ScalarElement::zero(self.k);
            };
            if p != c {
                m.swap_rows(c, p);
                det = -&det;
            }
            det = &det * &m[(c, c)];
            let inv = m[(c, c)].recip().unwrap();
            for i in (c + 1)..m.rows {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let factor = &m[(i, c)] * &inv;
                for j in c..m.cols {
                    let sub = &factor * &m[(c, j)];
                    m[(i, j)] = &m[(i, j)] - &sub;
                }
            }
        }
        det
    }

    /// Exact inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Matrix::zeros(self.k, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = ScalarElement::one(self.k);
        }
        let (m, pivots) = aug.rref();
        if pivots.len() < n || pivots[..n.min(pivots.len())] != (0..n).collect::<Vec<_>>()[..] {
            return None;
        }
        let mut inv = Matrix::zeros(self.k, n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = m[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = ScalarElement;
    fn index(&self, (i, j): (usize, usize)) -> &ScalarElement {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut ScalarElement {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            k: self.k,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            k: self.k,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix dimension mismatch");
        let mut out = Matrix::zeros(self.k, self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = ScalarElement::zero(self.k);
                for l in 0..self.cols {
                    acc = &acc + &(&self[(i, l)] * &rhs[(l, j)]);
                }
                out[(i, j)] = acc;
            }
        }
        out
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
