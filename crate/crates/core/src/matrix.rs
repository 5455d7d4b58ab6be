//! Small dense square matrices over a [`Coeff`] field.
//!
//! These hold the `k × k` matrix coefficients of group-algebra elements. They
//! are deliberately minimal; anything spectral goes through `nalgebra` in
//! [`crate::regular`].

use std::fmt;

use num::complex::Complex64;

use crate::scalar::Coeff;

#[derive(Clone, PartialEq)]
pub struct Mat<S> {
    n: usize,
    data: Vec<S>,
}

impl<S: fmt::Debug> fmt::Debug for Mat<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[S]> = self.data.chunks(self.n.max(1)).collect();
        f.debug_struct("Mat").field("rows", &rows).finish()
    }
}

impl<S: Coeff> Mat<S> {
    pub fn zeros(n: usize) -> Self {
        Mat { n, data: vec![S::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    /// Matrix unit `E_{ij}` (zero-based indices).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n);
        m.set(i, j, S::one());
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Mat { n, data }
    }

    /// Builds from row-major rows; `None` if the rows are not square.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(Mat { n, data: rows.into_iter().flatten().collect() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<S>> {
        self.data.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        Mat {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Mat {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        Mat { n: self.n, data: self.data.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for l in 0..n {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(l, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).clone() + a.clone() * b.clone();
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> S {
        (0..self.n).fold(S::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    /// Frobenius norm, an upper bound for the operator norm.
    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x.to_c64().norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.modulus()).fold(0.0, f64::max)
    }

    pub fn map<T: Coeff>(&self, f: impl Fn(&S) -> T) -> Mat<T> {
        Mat { n: self.n, data: self.data.iter().map(f).collect() }
    }

    pub fn to_c64(&self) -> Mat<Complex64> {
        self.map(|x| x.to_c64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gaussian, GaussianRational};

    #[test]
    fn units_multiply() {
        let e12 = Mat::<Complex64>::unit(2, 0, 1);
        let e21 = Mat::<Complex64>::unit(2, 1, 0);
        assert_eq!(e12.mul(&e21), Mat::unit(2, 0, 0));
        assert!(e12.mul(&e12).is_zero());
    }

    #[test]
    fn exact_adjoint_and_trace() {
        let m = Mat::from_rows(vec![
            vec![gaussian((1, 2), (1, 1)), gaussian((0, 1), (3, 1))],
            vec![gaussian((2, 1), (0, 1)), gaussian((-1, 3), (0, 1))],
        ])
        .unwrap();
        let adj = m.conj_transpose();
        assert_eq!(adj.conj_transpose(), m);
        assert_eq!(m.trace(), gaussian((1, 6), (1, 1)));
        assert_eq!(adj.get(0, 1), &gaussian((2, 1), (0, 1)));
        let _: Mat<GaussianRational> = Mat::identity(3);
    }
}
