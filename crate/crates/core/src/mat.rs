use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

// Unused when std ends up linked (dev builds).
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::scalar::{is_finite, Scalar, ONE, ZERO};

/// Largest row or column count accepted by [`Mat::new`].
pub const MAX_DIM: usize = 32;

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    /// Builds a matrix from row-major entries, enforcing the size cap and
    /// finiteness.
    pub fn new(rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if rows > MAX_DIM || cols > MAX_DIM {
            return Err(Error::invalid(alloc::format!(
                "{rows}x{cols} exceeds the {MAX_DIM}x{MAX_DIM} size cap"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::shape(
                alloc::format!("{} entries", rows * cols),
                alloc::format!("{} entries", entries.len()),
            ));
        }
        if !entries.iter().all(|z| is_finite(*z)) {
            return Err(Error::NonFinite);
        }
        Ok(Mat {
            rows,
            cols,
            data: entries,
        })
    }

    pub(crate) fn from_vec_unchecked(rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Mat { rows, cols, data }
    }

    /// Real matrix from nested rows. Panics on ragged input; meant for
    /// literals.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            let row = row.as_ref();
            assert_eq!(row.len(), c, "ragged matrix literal");
            data.extend(row.iter().map(|&x| Scalar::new(x, 0.0)));
        }
        Mat::from_vec_unchecked(r, c, data)
    }

    /// Complex matrix from nested rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[Scalar]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            let row = row.as_ref();
            assert_eq!(row.len(), c, "ragged matrix literal");
            data.extend_from_slice(row);
        }
        Mat::from_vec_unchecked(r, c, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat::from_vec_unchecked(rows, cols, vec![ZERO; rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        Mat::scalar(n, ONE)
    }

    pub fn scalar(n: usize, z: Scalar) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = z;
        }
        m
    }

    pub fn diag(d: &[Scalar]) -> Self {
        let mut m = Mat::zeros(d.len(), d.len());
        for (i, &z) in d.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn real_diag(d: &[f64]) -> Self {
        let d: Vec<Scalar> = d.iter().map(|&x| Scalar::new(x, 0.0)).collect();
        Mat::diag(&d)
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
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn into_entries(self) -> Vec<Scalar> {
        self.data
    }

    pub fn diagonal(&self) -> Vec<Scalar> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Conjugate transpose `A*`.
    pub fn adjoint(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].conj();
            }
        }
        t
    }

    pub fn conj(&self) -> Mat {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(Scalar) -> Scalar) -> Mat {
        Mat::from_vec_unchecked(self.rows, self.cols, self.data.iter().map(|&z| f(z)).collect())
    }

    pub fn scale(&self, z: Scalar) -> Mat {
        self.map(|x| x * z)
    }

    pub fn scale_real(&self, x: f64) -> Mat {
        self.map(|z| z * x)
    }

    /// Frobenius norm.
    pub fn norm_fro(&self) -> f64 {
        // Scaled accumulation keeps tiny and huge entries from under/overflowing.
        let mut scale = 0.0f64;
        let mut ssq = 1.0f64;
        for z in &self.data {
            for x in [z.re.abs(), z.im.abs()] {
                if x > 0.0 {
                    if scale < x {
                        ssq = 1.0 + ssq * (scale / x) * (scale / x);
                        scale = x;
                    } else {
                        ssq += (x / scale) * (x / scale);
                    }
                }
            }
        }
        scale * ssq.sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// True when every imaginary part is at most `tol` in magnitude.
    pub fn is_real_within(&self, tol: f64) -> bool {
        self.data.iter().all(|z| z.im.abs() <= tol)
    }

    /// Drops imaginary parts.
    pub fn real_part(&self) -> Mat {
        self.map(|z| Scalar::new(z.re, 0.0))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| is_finite(*z))
    }

    pub fn checked_mul(&self, rhs: &Mat) -> Result<Mat> {
        if self.cols != rhs.rows {
            return Err(Error::shape(
                alloc::format!("{} rows on the right", self.cols),
                alloc::format!("{}", rhs.rows),
            ));
        }
        Ok(self.mul_unchecked(rhs))
    }

    fn mul_unchecked(&self, rhs: &Mat) -> Mat {
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[l * rhs.cols..(l + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// `self^m` by repeated squaring; `m = 0` gives the identity.
    pub fn pow(&self, mut m: u32) -> Mat {
        assert!(self.is_square(), "pow of a non-square matrix");
        let mut base = self.clone();
        let mut acc = Mat::identity(self.rows);
        while m > 0 {
            if m & 1 == 1 {
                acc = &acc * &base;
            }
            m >>= 1;
            if m > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        let mut out = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out[(i, j)] = self[(r0 + i, c0 + j)];
            }
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Mat) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)];
            }
        }
    }

    pub fn block_diag(blocks: &[Mat]) -> Mat {
        let r: usize = blocks.iter().map(Mat::rows).sum();
        let c: usize = blocks.iter().map(Mat::cols).sum();
        let mut out = Mat::zeros(r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// `I_p ⊕ −I_q`.
    pub fn sign_split(p: usize, q: usize) -> Mat {
        let mut d = vec![ONE; p];
        d.extend(core::iter::repeat_n(-ONE, q));
        Mat::diag(&d)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn dimension_string(&self) -> alloc::string::String {
        alloc::format!("{}x{}", self.rows, self.cols)
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = Scalar;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        assert_eq!(
            self.cols, rhs.rows,
            "matrix product {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        self.mul_unchecked(rhs)
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Mat::from_vec_unchecked(self.rows, self.cols, data)
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference shape");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Mat::from_vec_unchecked(self.rows, self.cols, data)
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        self.map(|z| -z)
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>12.5e}{:+.5e}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// `‖a − b‖_F`.
pub fn distance(a: &Mat, b: &Mat) -> f64 {
    (a - b).norm_fro()
}

/// `abs / scale`, or `abs` itself when the scale vanishes.
pub(crate) fn relative(abs: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        abs / scale
    } else {
        abs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_enforces_cap_and_shape() {
        assert!(Mat::new(33, 1, vec![ZERO; 33]).is_err());
        assert!(matches!(
            Mat::new(2, 2, vec![ZERO; 3]),
            Err(Error::ShapeMismatch { .. })
        ));
        assert_eq!(
            Mat::new(1, 1, vec![Scalar::new(f64::NAN, 0.0)]),
            Err(Error::NonFinite)
        );
        assert!(Mat::new(0, 0, vec![]).is_ok());
    }

    #[test]
    fn pow_matches_repeated_product() {
        let a = Mat::from_real_rows(&[[1.0, 2.0], [3.0, 4.0]]);
        let cube = &(&a * &a) * &a;
        assert!(distance(&a.pow(3), &cube) < 1e-12);
        assert_eq!(a.pow(0), Mat::identity(2));
    }

    #[test]
    fn norm_handles_extreme_magnitudes() {
        let a = Mat::real_diag(&[3e200, 4e200]);
        assert!((a.norm_fro() / 5e200 - 1.0).abs() < 1e-15);
        assert_eq!(Mat::zeros(3, 3).norm_fro(), 0.0);
    }

    #[test]
    fn sign_split_layout() {
        let d = Mat::sign_split(1, 2);
        assert_eq!(d.diagonal(), vec![ONE, -ONE, -ONE]);
    }
}
