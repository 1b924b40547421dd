//! Exact Gaussian-rational scalars and dense matrices.
//!
//! Every matrix used by the verification engine has entries in `Q(i)`, so all
//! identities can be checked with exact equality and no tolerance.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::AlgebraError;

/// A complex number `re + i·im` with arbitrary-precision rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    re: BigRational,
    im: BigRational,
}

impl ExactScalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        Self::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    /// `n/d` on the real axis. Panics if `d == 0`.
    pub fn ratio(n: i64, d: i64) -> Self {
        Self::new(
            BigRational::new(BigInt::from(n), BigInt::from(d)),
            BigRational::zero(),
        )
    }

    /// `(re_n + i·im_n) / d`.
    pub fn gaussian(re_n: i64, im_n: i64, d: i64) -> Self {
        Self::new(
            BigRational::new(BigInt::from(re_n), BigInt::from(d)),
            BigRational::new(BigInt::from(im_n), BigInt::from(d)),
        )
    }

    pub fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|²`, which is always rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Real part as a purely real scalar.
    pub fn real_part(&self) -> Self {
        Self::new(self.re.clone(), BigRational::zero())
    }

    /// Imaginary part as a purely real scalar.
    pub fn imag_part(&self) -> Self {
        Self::new(self.im.clone(), BigRational::zero())
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return None;
        }
        Some(Self::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for ExactScalar {
    /// Renders as `a`, `bi`, or `a+bi` with rational `a`, `b` (e.g. `1/2-3/4i`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imag = |r: &BigRational| -> String {
            if r.is_one() {
                "i".to_string()
            } else if (-r.clone()).is_one() {
                "-i".to_string()
            } else {
                format!("{}i", fmt_rational(r))
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.re)),
            (true, false) => write!(f, "{}", imag(&self.im)),
            (false, false) => {
                let im = imag(&self.im);
                if self.im.is_negative() {
                    write!(f, "{}{}", fmt_rational(&self.re), im)
                } else {
                    write!(f, "{}+{}", fmt_rational(&self.re), im)
                }
            }
        }
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl<'a> Add<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl<'a> Div<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    /// Panics on division by zero; callers check `is_zero` first.
    fn div(self, rhs: &ExactScalar) -> ExactScalar {
        let inv = rhs.inv().expect("division by exact zero");
        self * &inv
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::new(-self.re.clone(), -self.im.clone())
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::new(-self.re, -self.im)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

/// Dense row-major matrix over [`ExactScalar`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<ExactScalar>,
}

/// Reduced row-echelon form with zero rows removed.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: ExactMatrix,
    pub pivots: Vec<usize>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<ExactScalar>) -> Result<Self, AlgebraError> {
        if entries.len() != rows * cols {
            return Err(AlgebraError::EntryCount {
                rows,
                cols,
                got: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![ExactScalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, ExactScalar::one());
        }
        m
    }

    /// Builds from `(re, im)` integer pairs, row by row.
    pub fn from_gaussian_ints(rows: &[&[(i64, i64)]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let entries = rows
            .iter()
            .flat_map(|row| {
                assert_eq!(row.len(), c, "ragged matrix literal");
                row.iter().map(|&(a, b)| ExactScalar::gaussian(a, b, 1))
            })
            .collect();
        Self {
            rows: r,
            cols: c,
            entries,
        }
    }

    /// Builds from real integers, row by row.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let entries = rows
            .iter()
            .flat_map(|row| {
                assert_eq!(row.len(), c, "ragged matrix literal");
                row.iter().map(|&a| ExactScalar::from_int(a))
            })
            .collect();
        Self {
            rows: r,
            cols: c,
            entries,
        }
    }

    pub fn from_rows(rows: Vec<Vec<ExactScalar>>) -> Result<Self, AlgebraError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(AlgebraError::EntryCount {
                    rows: r,
                    cols: c,
                    got: row.len(),
                });
            }
            entries.extend(row);
        }
        Self::new(r, c, entries)
    }

    pub fn column_vector(values: Vec<ExactScalar>) -> Self {
        let n = values.len();
        Self {
            rows: n,
            cols: 1,
            entries: values,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[ExactScalar] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &ExactScalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: ExactScalar) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[ExactScalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(ExactScalar::is_zero)
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        self.map(|e| e * s)
    }

    pub fn map(&self, f: impl Fn(&ExactScalar) -> ExactScalar) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    fn zip_with(
        &self,
        other: &Self,
        op: &'static str,
        f: impl Fn(&ExactScalar, &ExactScalar) -> ExactScalar,
    ) -> Result<Self, AlgebraError> {
        if self.shape() != other.shape() {
            return Err(AlgebraError::shape(op, self.shape(), other.shape()));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.zip_with(other, "sub", |a, b| a - b)
    }

    /// Exact matrix product `self · other`.
    pub fn matmul(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.cols != other.rows {
            return Err(AlgebraError::shape("matrix_product", self.shape(), other.shape()));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    out.entries[i * other.cols + j] += &(a * b);
                }
            }
        }
        Ok(out)
    }

    /// Standard Kronecker product: block `(i, j)` of the result is `self[i][j] · other`.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    fn square_pair(&self, other: &Self, op: &'static str) -> Result<(), AlgebraError> {
        if !self.is_square() || !other.is_square() || self.rows != other.rows {
            return Err(AlgebraError::shape(op, self.shape(), other.shape()));
        }
        Ok(())
    }

    /// `[a, b] = ab − ba`.
    pub fn commutator(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.square_pair(other, "commutator")?;
        self.matmul(other)?.sub(&other.matmul(self)?)
    }

    /// `{a, b} = ab + ba`.
    pub fn anticommutator(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.square_pair(other, "anticommutator")?;
        self.matmul(other)?.add(&other.matmul(self)?)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn conj_transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && self.conj_transpose() == *self
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (jn, &j) in cols.iter().enumerate() {
                out.set(i, jn, self.get(i, j).clone());
            }
        }
        out
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.cols != other.cols {
            return Err(AlgebraError::shape("vstack", self.shape(), other.shape()));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Self::new(self.rows + other.rows, self.cols, entries)
    }

    /// Realification of a complex matrix acting on real vectors: `[Re A; Im A]`.
    pub fn real_imag_stack(&self) -> Self {
        let re = self.map(ExactScalar::real_part);
        let im = self.map(ExactScalar::imag_part);
        re.vstack(&im).expect("same column count")
    }

    /// Exact reduced row-echelon form over `Q(i)`, zero rows dropped.
    pub fn rref(&self) -> Echelon {
        let mut rows: Vec<Vec<ExactScalar>> =
            (0..self.rows).map(|r| self.row(r).to_vec()).collect();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for col in 0..self.cols {
            if lead == rows.len() {
                break;
            }
            let Some(p) = (lead..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(lead, p);
            let inv = rows[lead][col].inv().expect("nonzero pivot");
            for e in rows[lead].iter_mut() {
                *e = &*e * &inv;
            }
            let pivot_row = rows[lead].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r == lead || row[col].is_zero() {
                    continue;
                }
                let f = row[col].clone();
                for (e, pv) in row.iter_mut().zip(&pivot_row) {
                    if !pv.is_zero() {
                        *e = &*e - &(&f * pv);
                    }
                }
            }
            pivots.push(col);
            lead += 1;
        }
        rows.truncate(lead);
        let matrix = Self::from_rows(rows).unwrap_or_else(|_| Self::zeros(0, self.cols));
        let matrix = if matrix.rows == 0 {
            Self::zeros(0, self.cols)
        } else {
            matrix
        };
        Echelon { matrix, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// True iff `v` (a single row of length `cols`) lies in the row space of `self`.
    pub fn row_space_contains(&self, v: &[ExactScalar]) -> Result<bool, AlgebraError> {
        if v.len() != self.cols {
            return Err(AlgebraError::shape("row_space_contains", self.shape(), (1, v.len())));
        }
        let base = self.rank();
        let extended = self.vstack(&Self::from_rows(vec![v.to_vec()])?)?;
        Ok(extended.rank() == base)
    }

    /// True iff the row spaces of `self` and `other` coincide.
    pub fn row_space_equal(&self, other: &Self) -> Result<bool, AlgebraError> {
        if self.cols != other.cols {
            return Err(AlgebraError::shape("row_space_equal", self.shape(), other.shape()));
        }
        Ok(self.rref().matrix == other.rref().matrix)
    }

    /// Exact inverse of a square matrix.
    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        if !self.is_square() {
            return Err(AlgebraError::NotSquare(self.shape()));
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, ExactScalar::one());
        }
        let ech = aug.rref();
        if ech.pivots.len() < n || ech.pivots[n - 1] >= n {
            return Err(AlgebraError::Singular);
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Ok(ech.matrix.select_columns(&cols))
    }

    /// Entries rendered as exact rational strings, row by row.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(ToString::to_string).collect())
            .collect()
    }

    /// Nonzero entries as `(row, col, value)` strings.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize, String)> {
        let mut out = Vec::new();
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.get(r, c);
                if !v.is_zero() {
                    out.push((r, c, v.to_string()));
                }
            }
        }
        out
    }
}

impl Serialize for ExactMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(serializer)
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s0() -> ExactMatrix {
        ExactMatrix::identity(2)
    }
    fn s1() -> ExactMatrix {
        ExactMatrix::from_ints(&[&[0, 1], &[1, 0]])
    }
    fn s2() -> ExactMatrix {
        ExactMatrix::from_gaussian_ints(&[&[(0, 0), (0, -1)], &[(0, 1), (0, 0)]])
    }
    fn s3() -> ExactMatrix {
        ExactMatrix::from_ints(&[&[1, 0], &[0, -1]])
    }

    #[test]
    fn scalar_display() {
        assert_eq!(ExactScalar::ratio(1, 2).to_string(), "1/2");
        assert_eq!(ExactScalar::i().to_string(), "i");
        assert_eq!((-ExactScalar::i()).to_string(), "-i");
        assert_eq!(ExactScalar::gaussian(1, -3, 4).to_string(), "1/4-3/4i");
        assert_eq!(ExactScalar::gaussian(2, 2, 1).to_string(), "2+2i");
        assert_eq!(ExactScalar::zero().to_string(), "0");
    }

    #[test]
    fn scalar_division_is_exact() {
        let a = ExactScalar::gaussian(1, 2, 1);
        let b = ExactScalar::gaussian(3, -1, 1);
        let q = &a / &b;
        assert_eq!(&q * &b, a);
        assert!(ExactScalar::zero().inv().is_none());
    }

    #[test]
    fn pauli_products() {
        assert_eq!(s1().matmul(&s1()).unwrap(), s0());
        assert_eq!(s1().matmul(&s2()).unwrap(), s3().scale(&ExactScalar::i()));
        assert_eq!(
            s1().commutator(&s2()).unwrap(),
            s3().scale(&ExactScalar::gaussian(0, 2, 1))
        );
        assert_eq!(s1().anticommutator(&s1()).unwrap(), s0().scale(&2.into()));
    }

    #[test]
    fn product_shape_error_names_both_shapes() {
        let a = ExactMatrix::zeros(2, 3);
        let b = ExactMatrix::zeros(2, 3);
        let err = a.matmul(&b).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("2x3"), "{msg}");
        assert!(s1().commutator(&ExactMatrix::identity(4)).is_err());
        assert!(s1().anticommutator(&ExactMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn kron_identity() {
        assert_eq!(s0().kron(&s0()), ExactMatrix::identity(4));
    }

    #[test]
    fn conj_transpose_of_scalar_i() {
        let a = s0().scale(&ExactScalar::i());
        assert_eq!(a.conj_transpose(), s0().scale(&-ExactScalar::i()));
    }

    #[test]
    fn row_space_examples() {
        let a = ExactMatrix::from_ints(&[&[1, 0], &[0, 1]]);
        let b = ExactMatrix::from_ints(&[&[1, 1], &[1, -1]]);
        assert!(a.row_space_equal(&b).unwrap());
        let c = ExactMatrix::from_ints(&[&[1, 0]]);
        let d = ExactMatrix::from_ints(&[&[0, 1]]);
        assert!(!c.row_space_equal(&d).unwrap());
        assert!(b.row_space_equal(&b.scale(&2.into())).unwrap());
        assert!(a.row_space_equal(&ExactMatrix::zeros(1, 3)).is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let a = ExactMatrix::from_gaussian_ints(&[&[(1, 1), (2, 0)], &[(0, -1), (3, 0)]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.matmul(&inv).unwrap(), ExactMatrix::identity(2));
        assert!(matches!(
            ExactMatrix::from_ints(&[&[1, 2], &[2, 4]]).inverse(),
            Err(AlgebraError::Singular)
        ));
    }

    #[test]
    fn rref_of_zero_matrix_is_empty() {
        let e = ExactMatrix::zeros(3, 4).rref();
        assert_eq!(e.matrix.shape(), (0, 4));
        assert!(e.pivots.is_empty());
    }

    fn small_gaussian() -> impl Strategy<Value = ExactScalar> {
        (-3i64..=3, -3i64..=3, 1i64..=3).prop_map(|(a, b, d)| ExactScalar::gaussian(a, b, d))
    }

    fn matrix(r: usize, c: usize) -> impl Strategy<Value = ExactMatrix> {
        proptest::collection::vec(small_gaussian(), r * c)
            .prop_map(move |e| ExactMatrix::new(r, c, e).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn product_is_associative(a in matrix(2, 3), b in matrix(3, 2), c in matrix(2, 2)) {
            let left = a.matmul(&b).unwrap().matmul(&c).unwrap();
            let right = a.matmul(&b.matmul(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn kron_mixed_product(a in matrix(2, 2), b in matrix(2, 2), c in matrix(2, 2), d in matrix(2, 2)) {
            let lhs = a.kron(&b).matmul(&c.kron(&d)).unwrap();
            let rhs = a.matmul(&c).unwrap().kron(&b.matmul(&d).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn conj_transpose_is_involution(a in matrix(3, 2)) {
            prop_assert_eq!(a.conj_transpose().conj_transpose(), a);
        }

        #[test]
        fn row_space_equality_is_equivalence(a in matrix(2, 3), t in matrix(2, 2), u in matrix(2, 2)) {
            prop_assert!(a.row_space_equal(&a).unwrap());
            // invertible mixes keep the row space; singular ones may shrink it
            let b = t.matmul(&a).unwrap();
            let c = u.matmul(&b).unwrap();
            let ab = a.row_space_equal(&b).unwrap();
            let bc = b.row_space_equal(&c).unwrap();
            prop_assert_eq!(ab, b.row_space_equal(&a).unwrap());
            if ab && bc {
                prop_assert!(a.row_space_equal(&c).unwrap());
            }
            if t.inverse().is_ok() {
                prop_assert!(ab);
            }
        }
    }
}
