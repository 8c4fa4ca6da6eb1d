//! Dense row-major matrix used for pixel grids, token sequences and
//! parameter tensors.

use crate::error::{AgeError, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length must match shape");
        Mat { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn full(rows: usize, cols: usize, value: T) -> Self {
        Mat {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> T {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [T] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols
    }

    pub fn check_shape(&self, rows: usize, cols: usize, what: &str) -> Result<()> {
        if self.rows != rows || self.cols != cols {
            return Err(AgeError::Shape(format!(
                "{what}: expected {rows}x{cols}, got {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        debug_assert!(self.same_shape(other));
        for (a, &b) in self.data.iter_mut().zip(other.data.iter()) {
            *a += b;
        }
    }

    pub fn scale(&mut self, k: T) {
        for v in self.data.iter_mut() {
            *v *= k;
        }
    }

    pub fn min_max(&self) -> (T, T) {
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for &v in &self.data {
            if v < lo {
                lo = v;
            }
            if v > hi {
                hi = v;
            }
        }
        (lo, hi)
    }

    /// Min-max normalize into [0,1]; a constant matrix maps to all zeros.
    pub fn min_max_normalized(&self) -> Self {
        let (lo, hi) = self.min_max();
        let span = hi - lo;
        if span <= T::zero() {
            return Mat::zeros(self.rows, self.cols);
        }
        self.map(|v| (v - lo) / span)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        out
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// `self * other`, (m x k) * (k x n) -> (m x n).
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul inner dims");
        let (m, k, n) = (self.rows, self.cols, other.cols);
        let mut out = Mat::zeros(m, n);
        for i in 0..m {
            let a_row = &self.data[i * k..(i + 1) * k];
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for (p, &a) in a_row.iter().enumerate() {
                if a == T::zero() {
                    continue;
                }
                let b_row = &other.data[p * n..(p + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(b_row.iter()) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// `self^T * other`, (k x m)^T * (k x n) -> (m x n).
    pub fn matmul_at(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "matmul_at inner dims");
        let (k, m, n) = (self.rows, self.cols, other.cols);
        let mut out = Mat::zeros(m, n);
        for p in 0..k {
            let a_row = &self.data[p * m..(p + 1) * m];
            let b_row = &other.data[p * n..(p + 1) * n];
            for (i, &a) in a_row.iter().enumerate() {
                if a == T::zero() {
                    continue;
                }
                let out_row = &mut out.data[i * n..(i + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(b_row.iter()) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// `self * other^T`, (m x k) * (n x k)^T -> (m x n).
    pub fn matmul_bt(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "matmul_bt inner dims");
        let (m, k, n) = (self.rows, self.cols, other.rows);
        let mut out = Mat::zeros(m, n);
        for i in 0..m {
            let a_row = &self.data[i * k..(i + 1) * k];
            for j in 0..n {
                let b_row = &other.data[j * k..(j + 1) * k];
                let mut acc = T::zero();
                for (&a, &b) in a_row.iter().zip(b_row.iter()) {
                    acc += a * b;
                }
                out.data[i * n + j] = acc;
            }
        }
        out
    }
}

impl<T: Scalar> Mat<T> {
    /// Convert element-wise into another scalar type.
    pub fn convert<U: Scalar>(&self) -> Mat<U> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| U::from_f64(v.to_f64())).collect(),
        }
    }
}

/// Boolean grid used for foreground masks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolGrid {
    rows: usize,
    cols: usize,
    data: Vec<bool>,
}

impl BoolGrid {
    pub fn new(rows: usize, cols: usize) -> Self {
        BoolGrid {
            rows,
            cols,
            data: vec![false; rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<bool>) -> Self {
        assert_eq!(data.len(), rows * cols);
        BoolGrid { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        self.data[r * self.cols + c] = v;
    }

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    pub fn count_true(&self) -> usize {
        self.data.iter().filter(|&&v| v).count()
    }

    pub fn any(&self) -> bool {
        self.data.iter().any(|&v| v)
    }

    /// True-cell fraction relative to the full grid.
    pub fn fraction(&self) -> f64 {
        if self.data.is_empty() {
            0.0
        } else {
            self.count_true() as f64 / self.data.len() as f64
        }
    }

    /// Dilate by `radius` in the Chebyshev metric (square neighborhood).
    pub fn dilate(&self, radius: usize) -> BoolGrid {
        if radius == 0 {
            return self.clone();
        }
        let mut out = BoolGrid::new(self.rows, self.cols);
        let r = radius as isize;
        for row in 0..self.rows as isize {
            for col in 0..self.cols as isize {
                if !self.data[row as usize * self.cols + col as usize] {
                    continue;
                }
                for dr in -r..=r {
                    for dc in -r..=r {
                        let (nr, nc) = (row + dr, col + dc);
                        if nr >= 0 && nr < self.rows as isize && nc >= 0 && nc < self.cols as isize
                        {
                            out.data[nr as usize * self.cols + nc as usize] = true;
                        }
                    }
                }
            }
        }
        out
    }

    /// Expand each cell into a `factor x factor` pixel block.
    pub fn upsample_nearest(&self, factor: usize) -> BoolGrid {
        let mut out = BoolGrid::new(self.rows * factor, self.cols * factor);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    for pr in r * factor..(r + 1) * factor {
                        for pc in c * factor..(c + 1) * factor {
                            out.set(pr, pc, true);
                        }
                    }
                }
            }
        }
        out
    }
}

/// Numerically stable softmax over a slice, in place.
pub fn softmax_in_place<T: Scalar>(row: &mut [T]) {
    let max = row.iter().cloned().fold(T::neg_infinity(), T::max);
    let mut sum = T::zero();
    for v in row.iter_mut() {
        *v = (*v - max).exp();
        sum += *v;
    }
    for v in row.iter_mut() {
        *v /= sum;
    }
}

/// Softmax of a slice into a new vector.
pub fn softmax<T: Scalar>(row: &[T]) -> Vec<T> {
    let mut out = row.to_vec();
    softmax_in_place(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matmul_agrees_with_hand_computation() {
        let a = Mat::from_vec(2, 3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let b = Mat::from_vec(3, 2, vec![7.0, 8.0, 9.0, 10.0, 11.0, 12.0]);
        let c = a.matmul(&b);
        assert_eq!(c.data(), &[58.0, 64.0, 139.0, 154.0]);
    }

    #[test]
    fn transposed_variants_match_explicit_transpose() {
        let a = Mat::from_fn(3, 4, |r, c| (r * 7 + c) as f64 * 0.25 - 1.0);
        let b = Mat::from_fn(3, 5, |r, c| (r + c * 3) as f64 * 0.5);
        let c = Mat::from_fn(6, 4, |r, c| ((r * c) as f64).sin());

        let at_b = a.matmul_at(&b);
        assert_eq!(at_b, a.transpose().matmul(&b));

        let c_at = c.matmul_bt(&a);
        assert_eq!(c_at, c.matmul(&a.transpose()));
    }

    #[test]
    fn softmax_rows_sum_to_one() {
        let mut row = vec![1.0f64, 2.0, 3.0, 400.0];
        softmax_in_place(&mut row);
        let sum: f64 = row.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert!(row.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn min_max_normalize_constant_is_zero() {
        let m: Mat<f32> = Mat::full(3, 3, 0.7);
        assert!(m.min_max_normalized().data().iter().all(|&v| v == 0.0));
    }
}
