//! Exact integer matrices and vectors, with rational elimination where a
//! field is needed.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::Ratio;
use num_traits::{One, Zero};

use super::gf2::Gf2Matrix;
use crate::error::{Error, Result};
use crate::scalar::IntScalar;
use crate::text::{read_matrix, Lines};

/// Integer vector with ℓ1 norm semantics.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVector<T>(pub Vec<T>);

impl<T: IntScalar> IntVector<T> {
    pub fn zeros(dim: usize) -> Self {
        IntVector(vec![T::zero(); dim])
    }

    pub fn from_i64s(values: &[i64]) -> Self {
        IntVector(values.iter().map(|&v| T::from_i64_exact(v)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[T] {
        &self.0
    }

    pub fn l1_norm(&self) -> T {
        self.0.iter().fold(T::zero(), |acc, x| acc + x.abs())
    }

    /// The ℓ1 norm as a machine integer; `None` on overflow.
    pub fn l1_norm_u64(&self) -> Option<u64> {
        self.l1_norm().to_u64()
    }

    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &IntVector<T>) -> T {
        assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    /// gcd of the absolute entries (0 for the zero vector).
    pub fn content(&self) -> T {
        self.0.iter().fold(T::zero(), |g, x| g.gcd(x))
    }

    /// Flips the sign so the first nonzero entry is positive.
    pub fn canonical_sign(mut self) -> Self {
        if let Some(first) = self.0.iter().find(|x| !x.is_zero()) {
            if first.is_negative() {
                self = -self;
            }
        }
        self
    }

    /// `self ⊑ other`: sign-compatible and coordinatewise dominated.
    pub fn is_conformal_to(&self, other: &IntVector<T>) -> bool {
        assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).all(|(u, v)| {
            !(u.clone() * v.clone()).is_negative() && u.abs() <= v.abs()
        })
    }

    /// Whether every entry lies in {-1, 0, 1}.
    pub fn is_unit_valued(&self) -> bool {
        self.0.iter().all(|x| x.abs() <= T::one())
    }
}

impl<T: IntScalar> Neg for IntVector<T> {
    type Output = IntVector<T>;
    fn neg(self) -> Self::Output {
        IntVector(self.0.into_iter().map(|x| -x).collect())
    }
}

impl<T: IntScalar> Add for &IntVector<T> {
    type Output = IntVector<T>;
    fn add(self, rhs: Self) -> Self::Output {
        assert_eq!(self.dim(), rhs.dim());
        IntVector(
            self.0
                .iter()
                .zip(&rhs.0)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }
}

impl<T: IntScalar> Sub for &IntVector<T> {
    type Output = IntVector<T>;
    fn sub(self, rhs: Self) -> Self::Output {
        assert_eq!(self.dim(), rhs.dim());
        IntVector(
            self.0
                .iter()
                .zip(&rhs.0)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        )
    }
}

impl<T: fmt::Display> fmt::Display for IntVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

impl<T: fmt::Display> fmt::Debug for IntVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
    }
}

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix<T> {
    n_rows: usize,
    n_cols: usize,
    data: Vec<T>,
}

impl<T: IntScalar> IntMatrix<T> {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        IntMatrix {
            n_rows,
            n_cols,
            data: vec![T::zero(); n_rows * n_cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_rows(n_cols: usize, rows: Vec<Vec<T>>) -> Result<Self> {
        let n_rows = rows.len();
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != n_cols {
                return Err(Error::Dimension(format!(
                    "row {r} has {} entries, expected {n_cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(IntMatrix {
            n_rows,
            n_cols,
            data,
        })
    }

    /// Convenience constructor from machine integers; panics on ragged rows.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let n_cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| T::from_i64_exact(v)).collect())
            .collect();
        Self::from_rows(n_cols, rows).expect("rectangular rows")
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        assert!(r < self.n_rows && c < self.n_cols);
        &self.data[r * self.n_cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        assert!(r < self.n_rows && c < self.n_cols);
        self.data[r * self.n_cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.n_cols..(r + 1) * self.n_cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        (0..self.n_rows).map(move |r| self.row(r))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n_cols, self.n_rows);
        for r in 0..self.n_rows {
            for c in 0..self.n_cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut m = Self::zeros(self.n_rows, cols.len());
        for r in 0..self.n_rows {
            for (j, &c) in cols.iter().enumerate() {
                m.set(r, j, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.set(i, j, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn mul_vec(&self, x: &IntVector<T>) -> IntVector<T> {
        assert_eq!(x.dim(), self.n_cols);
        IntVector(
            self.rows()
                .map(|row| {
                    row.iter()
                        .zip(x.entries())
                        .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
                })
                .collect(),
        )
    }

    pub fn annihilates(&self, x: &IntVector<T>) -> bool {
        self.mul_vec(x).is_zero()
    }

    /// Entries reduced mod 2 (sign is irrelevant).
    pub fn mod2(&self) -> Gf2Matrix {
        let two = T::one() + T::one();
        let mut m = Gf2Matrix::zeros(self.n_rows, self.n_cols);
        for r in 0..self.n_rows {
            for c in 0..self.n_cols {
                if !self.get(r, c).mod_floor(&two).is_zero() {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    pub fn convert<U: IntScalar>(&self) -> Option<IntMatrix<U>> {
        let data = self
            .data
            .iter()
            .map(|x| x.to_i64().and_then(U::from_i64))
            .collect::<Option<Vec<U>>>()?;
        Some(IntMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            data,
        })
    }

    /// Reduced row-echelon form over the rationals and its pivot columns.
    /// Zero rows are dropped.
    pub fn rational_rref(&self) -> (Vec<Vec<Ratio<T>>>, Vec<usize>) {
        let rows: Vec<Vec<Ratio<T>>> = self
            .rows()
            .map(|r| r.iter().map(|x| Ratio::from_integer(x.clone())).collect())
            .collect();
        rational_rref(rows, self.n_cols)
    }

    pub fn rank(&self) -> usize {
        self.rational_rref().1.len()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<T> {
        if self.n_rows != self.n_cols {
            return Err(Error::Dimension(format!(
                "determinant of a {}x{} matrix",
                self.n_rows, self.n_cols
            )));
        }
        let n = self.n_rows;
        let mut a = self.clone();
        let mut sign = T::one();
        let mut prev = T::one();
        for k in 0..n {
            if a.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !a.get(r, k).is_zero()) else {
                    return Ok(T::zero());
                };
                for c in 0..n {
                    a.data.swap(k * n + c, p * n + c);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j).clone() * a.get(k, k).clone()
                        - a.get(i, k).clone() * a.get(k, j).clone())
                        / prev.clone();
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        Ok(if n == 0 { T::one() } else { sign * a.get(n - 1, n - 1).clone() })
    }

    /// Parses the matrix text format.
    pub fn parse(text: &str) -> Result<Self> {
        Self::read(&mut Lines::new(text))
    }

    pub(crate) fn read(lines: &mut Lines<'_>) -> Result<Self> {
        let (_, cols, rows) = read_matrix::<T>(lines)?;
        Self::from_rows(cols, rows)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl<T: fmt::Display> fmt::Display for IntMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n_rows, self.n_cols)?;
        for r in 0..self.n_rows {
            let row: Vec<String> = self.data[r * self.n_cols..(r + 1) * self.n_cols]
                .iter()
                .map(|x| x.to_string())
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl<T: fmt::Display> fmt::Debug for IntMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Gauss-Jordan over `Ratio<T>`. Returns the nonzero rows of the reduced
/// form (pivot entries equal to one) and the pivot columns.
pub fn rational_rref<T: IntScalar>(
    mut rows: Vec<Vec<Ratio<T>>>,
    n_cols: usize,
) -> (Vec<Vec<Ratio<T>>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n_cols {
        if row == rows.len() {
            break;
        }
        let Some(p) = (row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(row, p);
        let inv = rows[row][col].recip();
        for x in rows[row].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for r in 0..rows.len() {
            if r != row && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in 0..n_cols {
                    let d = rows[row][c].clone() * f.clone();
                    rows[r][c] = rows[r][c].clone() - d;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    rows.truncate(row);
    (rows, pivots)
}

/// Clears denominators and removes the common factor, producing the primitive
/// integer vector on the same rational line.
pub fn primitive_integer_vector<T: IntScalar>(v: &[Ratio<T>]) -> IntVector<T> {
    let lcm = v.iter().fold(T::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<T> = v
        .iter()
        .map(|x| x.numer().clone() * (lcm.clone() / x.denom().clone()))
        .collect();
    let g = ints.iter().fold(T::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        return IntVector(ints);
    }
    IntVector(ints.into_iter().map(|x| x / g.clone()).collect())
}

/// The unique (up to sign) primitive integer kernel vector of `a` supported
/// exactly on `support`, if the restricted columns have a one-dimensional
/// kernel and that kernel has full support. The first nonzero entry is
/// positive.
pub fn int_kernel_vector<T: IntScalar>(a: &IntMatrix<T>, support: &[usize]) -> Option<IntVector<T>> {
    let mut cols = support.to_vec();
    cols.sort_unstable();
    cols.dedup();
    if cols.is_empty() || cols.iter().any(|&c| c >= a.n_cols()) {
        return None;
    }
    let sub = a.select_columns(&cols);
    let (rref, pivots) = sub.rational_rref();
    if cols.len() - pivots.len() != 1 {
        return None;
    }
    let free = (0..cols.len()).find(|c| !pivots.contains(c))?;
    let mut local = vec![Ratio::<T>::zero(); cols.len()];
    local[free] = Ratio::one();
    for (row, &p) in rref.iter().zip(&pivots) {
        local[p] = -row[free].clone();
    }
    let local = primitive_integer_vector(&local);
    if local.entries().iter().any(Zero::is_zero) {
        return None;
    }
    let mut full = IntVector::zeros(a.n_cols());
    for (x, &c) in local.0.into_iter().zip(&cols) {
        full.0[c] = x;
    }
    Some(full.canonical_sign())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type M = IntMatrix<i64>;
    type V = IntVector<i64>;

    #[test]
    fn kernel_vector_on_pair() {
        let a = M::from_i64_rows(&[&[1, 1, 1]]);
        assert_eq!(int_kernel_vector(&a, &[0, 1]), Some(V::from_i64s(&[1, -1, 0])));
    }

    #[test]
    fn kernel_vector_requires_one_dimensional_kernel() {
        let a = M::from_i64_rows(&[&[1, 1, 1]]);
        assert_eq!(int_kernel_vector(&a, &[0, 1, 2]), None);
        let id = M::identity(2);
        assert_eq!(int_kernel_vector(&id, &[0]), None);
    }

    #[test]
    fn kernel_vector_is_primitive_for_non_unit_entries() {
        // 2x + 3y = 0 on {0,1}: (3,-2).
        let a = M::from_i64_rows(&[&[2, 3, 0]]);
        assert_eq!(int_kernel_vector(&a, &[1, 0]), Some(V::from_i64s(&[3, -2, 0])));
        // Kernel on {0,2} is the axis e_2, not full support.
        assert_eq!(int_kernel_vector(&a, &[0, 2]), None);
    }

    #[test]
    fn kernel_vector_works_over_bigint() {
        let a = IntMatrix::<BigInt>::from_i64_rows(&[&[1, -1, 0], &[0, 1, -1]]);
        let u = int_kernel_vector(&a, &[0, 1, 2]).unwrap();
        assert_eq!(u, IntVector::<BigInt>::from_i64s(&[1, 1, 1]));
    }

    #[test]
    fn determinants() {
        assert_eq!(M::from_i64_rows(&[&[1, 1], &[-1, 1]]).determinant(), Ok(2));
        assert_eq!(M::identity(4).determinant(), Ok(1));
        assert_eq!(M::zeros(0, 0).determinant(), Ok(1));
        let a = M::from_i64_rows(&[&[0, 1, 2], &[3, 4, 5], &[6, 7, 9]]);
        // Cofactor expansion by hand: 0*(36-35) - 1*(27-30) + 2*(21-24) = -3.
        assert_eq!(a.determinant(), Ok(-3));
        assert!(M::zeros(2, 3).determinant().is_err());
    }

    #[test]
    fn conformality() {
        let v = V::from_i64s(&[2, -1, -1]);
        assert!(V::from_i64s(&[1, -1, 0]).is_conformal_to(&v));
        assert!(!V::from_i64s(&[1, 1, 0]).is_conformal_to(&v));
        assert!(!V::from_i64s(&[3, 0, 0]).is_conformal_to(&v));
    }

    fn laplace(a: &M) -> i64 {
        let n = a.n_rows();
        if n == 0 {
            return 1;
        }
        (0..n)
            .map(|j| {
                let rows: Vec<usize> = (1..n).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * a.get(0, j) * laplace(&a.select(&rows, &cols))
            })
            .sum()
    }

    proptest! {
        #[test]
        fn bareiss_matches_laplace(n in 0usize..5, entries in proptest::collection::vec(-3i64..4, 25)) {
            let rows: Vec<Vec<i64>> = (0..n).map(|r| entries[r * 5..r * 5 + n].to_vec()).collect();
            let a = M::from_rows(n, rows).unwrap();
            prop_assert_eq!(a.determinant().unwrap(), laplace(&a));
        }

        #[test]
        fn kernel_vector_is_in_kernel(entries in proptest::collection::vec(-2i64..3, 12), mask in 1u32..64) {
            let rows: Vec<Vec<i64>> = entries.chunks(6).map(|c| c.to_vec()).collect();
            let a = M::from_rows(6, rows).unwrap();
            let support: Vec<usize> = (0..6).filter(|i| mask >> i & 1 == 1).collect();
            if let Some(u) = int_kernel_vector(&a, &support) {
                prop_assert!(a.annihilates(&u));
                prop_assert_eq!(u.content(), 1);
                prop_assert_eq!(u.support(), support);
            }
        }
    }
}
