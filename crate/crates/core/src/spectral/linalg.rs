//! Dense exact linear algebra over a field, with matrices as row vectors.

use num_traits::{One, Zero};

use crate::rational::Rational;

/// Arithmetic of a field whose elements may need context (such as a
/// defining polynomial) to multiply.
pub trait Field {
    type Elem: Clone + PartialEq + std::fmt::Debug;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.sub(&self.zero(), a)
    }
}

/// The rationals.
#[derive(Copy, Clone, Debug, Default)]
pub struct Q;

impl Field for Q {
    type Elem = Rational;
    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn inv(&self, a: &Rational) -> Rational {
        a.recip()
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
}

pub type Matrix<T> = Vec<Vec<T>>;

pub fn zeros<F: Field>(k: &F, rows: usize, cols: usize) -> Matrix<F::Elem> {
    vec![vec![k.zero(); cols]; rows]
}

pub fn identity<F: Field>(k: &F, n: usize) -> Matrix<F::Elem> {
    let mut m = zeros(k, n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = k.one();
    }
    m
}

pub fn ncols<T>(m: &Matrix<T>, fallback: usize) -> usize {
    m.first().map_or(fallback, Vec::len)
}

pub fn transpose<T: Clone>(m: &Matrix<T>, cols: usize) -> Matrix<T> {
    (0..cols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

/// `a * b` where `a` is `n x inner` and `b` is `inner x cols`.
pub fn mul<F: Field>(k: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>, cols: usize) -> Matrix<F::Elem> {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = k.zero();
                    for (x, brow) in row.iter().zip(b) {
                        if !k.is_zero(x) && !k.is_zero(&brow[j]) {
                            acc = k.add(&acc, &k.mul(x, &brow[j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mul_vec<F: Field>(k: &F, a: &Matrix<F::Elem>, x: &[F::Elem]) -> Vec<F::Elem> {
    a.iter()
        .map(|row| {
            let mut acc = k.zero();
            for (r, xi) in row.iter().zip(x) {
                if !k.is_zero(r) && !k.is_zero(xi) {
                    acc = k.add(&acc, &k.mul(r, xi));
                }
            }
            acc
        })
        .collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(k: &F, m: &mut Matrix<F::Elem>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !k.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, p);
        let inv = k.inv(&m[r][c]);
        for x in m[r].iter_mut() {
            *x = k.mul(x, &inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || k.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !k.is_zero(p) {
                    *x = k.sub(x, &k.mul(&factor, p));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(k: &F, m: &Matrix<F::Elem>, cols: usize) -> usize {
    let mut m = m.clone();
    rref(k, &mut m, cols).len()
}

/// Basis of the right kernel, one vector per free column in ascending
/// order, each with a 1 in its free column. The result depends only on the
/// row space of `m`.
pub fn kernel<F: Field>(k: &F, m: &Matrix<F::Elem>, cols: usize) -> Vec<Vec<F::Elem>> {
    let mut r = m.clone();
    let pivots = rref(k, &mut r, cols);
    let mut is_pivot = vec![None; cols];
    for (i, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(i);
    }
    (0..cols)
        .filter(|&c| is_pivot[c].is_none())
        .map(|free| {
            let mut v = vec![k.zero(); cols];
            v[free] = k.one();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = k.neg(&r[i][free]);
            }
            v
        })
        .collect()
}

/// Solves `a X = b` for square invertible `a` (`n x n`, `b` is `n x m`).
pub fn solve<F: Field>(k: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>, m: usize) -> Option<Matrix<F::Elem>> {
    let n = a.len();
    let mut aug: Matrix<F::Elem> = a.iter().zip(b).map(|(ra, rb)| ra.iter().chain(rb).cloned().collect()).collect();
    let pivots = rref(k, &mut aug, n + m);
    if pivots.len() < n || pivots.iter().any(|&c| c >= n) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Columns of a list of vectors, as an `n x len` matrix.
pub fn from_columns<T: Clone>(cols: &[Vec<T>], n: usize) -> Matrix<T> {
    (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
}
