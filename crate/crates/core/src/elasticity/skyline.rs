//! Symmetric positive-definite envelope (skyline) storage with an in-place
//! Cholesky factorization.
//!
//! Row `i` stores columns `first[i]..=i` contiguously, so both the
//! factorization and the triangular solves work on contiguous slices. With
//! row-major node numbering on a structured mesh the envelope is about two
//! mesh rows wide.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub(crate) struct Skyline {
    first: Vec<usize>,
    start: Vec<usize>,
    values: Vec<f64>,
}

impl Skyline {
    /// Allocates a zero matrix whose row `i` spans columns `first[i]..=i`.
    pub(crate) fn new(first: Vec<usize>) -> Self {
        let mut start = Vec::with_capacity(first.len() + 1);
        let mut acc = 0usize;
        for (i, &f) in first.iter().enumerate() {
            debug_assert!(f <= i);
            start.push(acc);
            acc += i - f + 1;
        }
        start.push(acc);
        Self {
            first,
            start,
            values: vec![0.0; acc],
        }
    }

    pub(crate) fn dim(&self) -> usize {
        self.first.len()
    }

    /// Adds `v` at `(i, j)`; only the lower triangle `j <= i` is stored.
    #[inline]
    pub(crate) fn add(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if j > i { (j, i) } else { (i, j) };
        debug_assert!(j >= self.first[i], "entry outside the envelope");
        self.values[self.start[i] + j - self.first[i]] += v;
    }

    #[inline]
    fn row(&self, i: usize) -> &[f64] {
        &self.values[self.start[i]..self.start[i + 1]]
    }

    /// Overwrites the matrix with its Cholesky factor `L` (`A = L L^T`).
    pub(crate) fn factor(&mut self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            let fi = self.first[i];
            let si = self.start[i];
            for j in fi..i {
                let fj = self.first[j];
                let k0 = fi.max(fj);
                let sj = self.start[j];
                let (head, tail) = self.values.split_at_mut(si);
                let rj = &head[sj + (k0 - fj)..sj + (j - fj)];
                let ri = &tail[k0 - fi..j - fi];
                let dot: f64 = ri.iter().zip(rj).map(|(a, b)| a * b).sum();
                let ljj = head[sj + j - fj];
                tail[j - fi] = (tail[j - fi] - dot) / ljj;
            }
            let row = &mut self.values[si..self.start[i + 1]];
            let (off, diag) = row.split_at_mut(i - fi);
            let d = diag[0] - off.iter().map(|v| v * v).sum::<f64>();
            if !(d > 0.0) {
                return Err(Error::Singular(format!(
                    "stiffness matrix is not positive definite at row {i} (pivot {d:.3e})"
                )));
            }
            diag[0] = d.sqrt();
        }
        Ok(())
    }

    /// Solves `L L^T x = b` with a factored matrix.
    pub(crate) fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut y = b.to_vec();
        for i in 0..n {
            let row = self.row(i);
            let fi = self.first[i];
            let dot: f64 = row[..i - fi].iter().zip(&y[fi..i]).map(|(a, b)| a * b).sum();
            y[i] = (y[i] - dot) / row[i - fi];
        }
        for i in (0..n).rev() {
            let row = self.row(i);
            let fi = self.first[i];
            y[i] /= row[i - fi];
            let yi = y[i];
            for (yk, l) in y[fi..i].iter_mut().zip(&row[..i - fi]) {
                *yk -= l * yi;
            }
        }
        y
    }

    /// `A x` for an unfactored matrix.
    #[cfg(test)]
    pub(crate) fn mul(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut out = vec![0.0; n];
        for i in 0..n {
            let fi = self.first[i];
            let row = self.row(i);
            for (k, &a) in row.iter().enumerate() {
                let j = fi + k;
                out[i] += a * x[j];
                if j != i {
                    out[j] += a * x[i];
                }
            }
        }
        out
    }
}
