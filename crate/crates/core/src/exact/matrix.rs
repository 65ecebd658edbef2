use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::{IntPolynomial, Rat};
use crate::error::{Error, Result};

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::malformed(
                "matrix must have at least one row and column",
            ));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{} entries", rows * cols),
                got: format!("{} entries", data.len()),
            });
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            entries.iter().map(|&v| BigInt::from(v)).collect(),
        )
    }

    /// Square matrix from a row-major entry list whose length is a perfect square.
    pub fn square(entries: Vec<BigInt>) -> Result<Self> {
        let n = (entries.len() as f64).sqrt().round() as usize;
        if n * n != entries.len() {
            return Err(Error::malformed(format!(
                "{} entries do not form a square matrix",
                entries.len()
            )));
        }
        Self::new(n, n, entries)
    }

    pub fn square_i64(entries: &[i64]) -> Result<Self> {
        Self::square(entries.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::DimensionMismatch {
                expected: "square matrix".into(),
                got: format!("{}x{}", self.rows, self.cols),
            })
        }
    }

    pub fn require_dim(&self, n: usize) -> Result<()> {
        if self.rows == n && self.cols == n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: format!("{n}x{n}"),
                got: format!("{}x{}", self.rows, self.cols),
            })
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: format!("{} rows on the right factor", self.cols),
                got: format!("{}", rhs.rows),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.get(k, j);
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Self {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "shape mismatch: {}x{} vs {}x{}",
            self.rows,
            self.cols,
            rhs.rows,
            rhs.cols
        );
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * k).collect(),
        }
    }

    pub fn trace(&self) -> BigInt {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        let n = self.require_square()?;
        let mut m = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[k * n + k].is_zero() {
                let Some(swap) = (k + 1..n).find(|&r| !m[r * n + k].is_zero()) else {
                    return Ok(BigInt::zero());
                };
                for j in 0..n {
                    m.swap(k * n + j, swap * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[i * n + j] * &m[k * n + k] - &m[i * n + k] * &m[k * n + j]) / &prev;
                    m[i * n + j] = v;
                }
            }
            prev = m[k * n + k].clone();
        }
        Ok(sign * &m[n * n - 1])
    }

    pub fn pow(&self, mut e: u32) -> Result<Self> {
        let n = self.require_square()?;
        let mut base = self.clone();
        let mut acc = Self::identity(n);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|v| !v.is_negative())
    }

    pub fn is_positive(&self) -> bool {
        self.data.iter().all(|v| v.is_positive())
    }

    /// Characteristic polynomial `det(tI - A)` (Faddeev-LeVerrier, exact).
    pub fn char_poly(&self) -> Result<IntPolynomial> {
        let n = self.require_square()?;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut m = Self::zeros(n, n);
        for k in 1..=n {
            let mut next = self * &m;
            for i in 0..n {
                next.data[i * n + i] += &coeffs[n - k + 1];
            }
            m = next;
            let am = self * &m;
            coeffs[n - k] = -am.trace() / BigInt::from(k);
        }
        Ok(IntPolynomial::new(coeffs))
    }

    /// `t^2 - tr(A) t + det(A)` for a 2x2 matrix.
    pub fn char_poly_2x2(&self) -> Result<IntPolynomial> {
        self.require_dim(2)?;
        Ok(IntPolynomial::new(vec![
            self.det()?,
            -self.trace(),
            BigInt::one(),
        ]))
    }

    /// Inverse of a matrix with determinant +-1.
    pub fn inverse_unimodular(&self) -> Result<Self> {
        let n = self.require_square()?;
        let det = self.det()?;
        if det.abs() != BigInt::one() {
            return Err(Error::precondition(format!(
                "matrix has determinant {det}, not +-1"
            )));
        }
        // Gauss-Jordan over Q on [A | I]; the result is integral.
        let mut aug: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                (0..2 * n)
                    .map(|j| {
                        if j < n {
                            Rat::from_integer(self.get(i, j).clone())
                        } else if j - n == i {
                            Rat::one()
                        } else {
                            Rat::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&r| !aug[r][c].is_zero()).expect("nonsingular");
            aug.swap(c, p);
            let pivot = aug[c][c].clone();
            for v in aug[c].iter_mut() {
                *v /= &pivot;
            }
            for r in 0..n {
                if r != c && !aug[r][c].is_zero() {
                    let f = aug[r][c].clone();
                    for j in 0..2 * n {
                        let delta = &f * &aug[c][j];
                        aug[r][j] -= delta;
                    }
                }
            }
        }
        let data = aug
            .into_iter()
            .flat_map(|row| row.into_iter().skip(n).map(|v| v.to_integer()))
            .collect();
        Self::new(n, n, data)
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] += k * row[src]`
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let delta = k * &self.data[src * self.cols + j];
            self.data[dst * self.cols + j] += delta;
        }
    }

    /// `col[dst] += k * col[src]`
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let delta = k * &self.data[i * self.cols + src];
            self.data[i * self.cols + dst] += delta;
        }
    }

    pub(crate) fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self.data[r * self.cols + j]);
            self.data[r * self.cols + j] = v;
        }
    }

    /// Applies the 2x2 transform `[c_a c_b] <- [c_a c_b] * [[p, q], [r, s]]` to two columns.
    pub(crate) fn mix_cols(&mut self, a: usize, b: usize, t: [&BigInt; 4]) {
        let [p, q, r, s] = t;
        for i in 0..self.rows {
            let x = self.data[i * self.cols + a].clone();
            let y = self.data[i * self.cols + b].clone();
            self.data[i * self.cols + a] = &x * p + &y * r;
            self.data[i * self.cols + b] = &x * q + &y * s;
        }
    }

    /// Row-major rendering `a,b;c,d`.
    pub fn to_compact(&self) -> String {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl<'a> Mul<&'a IntMatrix> for &'a IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_mul(rhs).expect("matrix shape mismatch")
    }
}

impl<'a> Add<&'a IntMatrix> for &'a IntMatrix {
    type Output = IntMatrix;
    fn add(self, rhs: &IntMatrix) -> IntMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<'a> Sub<&'a IntMatrix> for &'a IntMatrix {
    type Output = IntMatrix;
    fn sub(self, rhs: &IntMatrix) -> IntMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;
    fn neg(self) -> IntMatrix {
        self.scale(&BigInt::from(-1))
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_compact())
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
