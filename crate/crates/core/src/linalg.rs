//! Compressed sparse rows with row-parallel products.

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

const PAR_ROWS: usize = 2048;

#[derive(Debug, Clone, PartialEq)]
pub struct Csr<T> {
    rows: usize,
    cols: usize,
    indptr: Vec<usize>,
    indices: Vec<u32>,
    values: Vec<T>,
}

impl<T: Clone> Csr<T> {
    /// Builds from per-row entry lists; column indices must be < `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<(u32, T)>>) -> Self {
        let mut indptr = Vec::with_capacity(rows.len() + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for mut r in rows.into_iter() {
            r.sort_by_key(|e| e.0);
            for (c, v) in r {
                debug_assert!((c as usize) < cols);
                indices.push(c);
                values.push(v);
            }
            indptr.push(indices.len());
        }
        Csr {
            rows: indptr.len() - 1,
            cols,
            indptr,
            indices,
            values,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (u32, &T)> {
        let span = self.indptr[i]..self.indptr[i + 1];
        self.indices[span.clone()]
            .iter()
            .copied()
            .zip(&self.values[span])
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Csr<U> {
        Csr {
            rows: self.rows,
            cols: self.cols,
            indptr: self.indptr.clone(),
            indices: self.indices.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut rows: Vec<Vec<(u32, T)>> = vec![Vec::new(); self.cols];
        for i in 0..self.rows {
            for (j, v) in self.row(i) {
                rows[j as usize].push((i as u32, v.clone()));
            }
        }
        Csr::from_rows(self.rows, rows)
    }

    /// Column indices of each row, for graph algorithms.
    pub fn pattern(&self) -> Vec<Vec<u32>> {
        (0..self.rows)
            .map(|i| self.row(i).map(|(j, _)| j).collect())
            .collect()
    }
}

impl Csr<f64> {
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        let dot = |i: usize| self.row(i).map(|(j, v)| v * x[j as usize]).sum::<f64>();
        if self.rows >= PAR_ROWS {
            (0..self.rows).into_par_iter().map(dot).collect()
        } else {
            (0..self.rows).map(dot).collect()
        }
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.rows)
            .map(|i| self.row(i).map(|(_, v)| v).sum())
            .collect()
    }
}

impl Csr<BigRational> {
    pub fn matvec(&self, x: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .into_par_iter()
            .map(|i| {
                self.row(i)
                    .fold(BigRational::zero(), |acc, (j, v)| acc + v * &x[j as usize])
            })
            .collect()
    }
}

pub fn sup_norm(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_transpose() {
        let m = Csr::from_rows(3, vec![vec![(2, 1.0), (0, 2.0)], vec![], vec![(1, 3.0)]]);
        assert_eq!(m.matvec(&[1.0, 1.0, 1.0]), vec![3.0, 0.0, 3.0]);
        let t = m.transpose();
        assert_eq!(t.matvec(&[1.0, 0.0, 0.0]), vec![2.0, 0.0, 1.0]);
        assert_eq!(m.nnz(), 3);
        assert_eq!(m.pattern()[0], vec![0, 2]);
    }
}
