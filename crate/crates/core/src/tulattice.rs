//! Totally unimodular matrices and their kernel lattices.
//!
//! `L(A)` is the set of integer vectors `v` with `A v = 0`; `λ` is its least
//! nonzero ℓ1 norm. For TU matrices the circuits of `A` (primitive kernel
//! vectors of minimal support) correspond to the circuits of the binary
//! matroid of `A mod 2`, and every kernel vector shorter than `2λ` is one of
//! them. Two independent routes to the short vectors are provided so that
//! each can serve as an oracle for the other.

use std::collections::HashMap;
use std::fmt;

use num_rational::Ratio;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{int_kernel_vector, IntMatrix, IntVector};
use crate::matroid::{mask_indices, BinaryMatroid, WeightFn};
use crate::scalar::{below, Bound, IntScalar};

/// Exhaustive TU testing handles matrices whose smaller side is at most this.
pub const MAX_TU_SIDE: usize = 14;
/// Cap on the number of square submatrices the TU test may visit.
pub const MAX_TU_MINORS: u128 = 60_000_000;
/// Column cap for the box-scan oracle.
pub const MAX_SCAN_COLS: usize = 16;
/// Cap on the lattice points the box-scan oracle may visit.
pub const MAX_SCAN_POINTS: u128 = 20_000_000;

/// A circuit of a matrix: primitive kernel vector with minimal support.
pub type SignedCircuit<T> = IntVector<T>;

fn binom(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

fn next_combination(mask: u64) -> u64 {
    let low = mask & mask.wrapping_neg();
    let ripple = mask + low;
    ripple | (((ripple ^ mask) >> 2) / low)
}

/// Masks with `k` bits set among the low `n` bits, ascending.
fn combinations(n: usize, k: usize) -> impl Iterator<Item = u64> {
    let first = if k == 0 { 0 } else { (1u64 << k) - 1 };
    let limit = 1u64 << n;
    let mut next = Some(first);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if k == 0 {
            None
        } else {
            let n2 = next_combination(cur);
            (n2 < limit).then_some(n2)
        };
        Some(cur)
    })
}

/// Whether every square submatrix has determinant in {-1, 0, 1}.
///
/// Minors are computed level by level: each `k×k` determinant is a Laplace
/// expansion along its first row over the already verified `(k-1)×(k-1)`
/// minors, so every intermediate value stays tiny.
pub fn is_tu<T: IntScalar>(a: &IntMatrix<T>) -> Result<bool> {
    let mut entries = Vec::with_capacity(a.n_rows() * a.n_cols());
    for r in 0..a.n_rows() {
        for c in 0..a.n_cols() {
            match a.get(r, c).to_i64() {
                Some(x @ -1..=1) => entries.push(x as i8),
                _ => return Ok(false),
            }
        }
    }
    // Work with the short side as rows.
    let (rows, cols, at): (usize, usize, Box<dyn Fn(usize, usize) -> i8>) =
        if a.n_rows() <= a.n_cols() {
            let n = a.n_cols();
            (a.n_rows(), n, Box::new(move |r, c| entries[r * n + c]))
        } else {
            let n = a.n_cols();
            (n, a.n_rows(), Box::new(move |r, c| entries[c * n + r]))
        };
    if rows > MAX_TU_SIDE {
        return Err(Error::guard(format!(
            "smaller side {rows}; exhaustive TU test supports at most {MAX_TU_SIDE}"
        )));
    }
    if cols > 64 {
        return Err(Error::guard(format!("{cols} columns; at most 64 supported")));
    }
    let minors: u128 = (1..=rows as u128)
        .map(|k| binom(rows as u128, k) * binom(cols as u128, k))
        .sum();
    if minors > MAX_TU_MINORS {
        return Err(Error::guard(format!(
            "{minors} square submatrices; exhaustive TU test visits at most {MAX_TU_MINORS}"
        )));
    }

    let mut prev: HashMap<(u64, u64), i8> = HashMap::new();
    for r in 0..rows {
        for c in 0..cols {
            prev.insert((1 << r, 1 << c), at(r, c));
        }
    }
    for k in 2..=rows {
        let mut level = HashMap::with_capacity((binom(rows as u128, k as u128) * binom(cols as u128, k as u128)) as usize);
        for rmask in combinations(rows, k) {
            let top = rmask.trailing_zeros() as usize;
            let rest = rmask & (rmask - 1);
            for cmask in combinations(cols, k) {
                let mut det: i64 = 0;
                for (j, c) in mask_indices(cmask).enumerate() {
                    let x = at(top, c);
                    if x == 0 {
                        continue;
                    }
                    let sub = prev[&(rest, cmask & !(1 << c))];
                    let term = i64::from(x) * i64::from(sub);
                    det += if j % 2 == 0 { term } else { -term };
                }
                if !(-1..=1).contains(&det) {
                    return Ok(false);
                }
                level.insert((rmask, cmask), det as i8);
            }
        }
        prev = level;
    }
    Ok(true)
}

/// The binary matroid of `A mod 2` with columns labelled by index.
fn mod2_matroid<T: IntScalar>(a: &IntMatrix<T>) -> BinaryMatroid {
    BinaryMatroid::with_prefix("", a.mod2())
}

/// All circuits of a TU matrix, one per support, first nonzero entry
/// positive, ordered by support.
pub fn matrix_circuits<T: IntScalar>(a: &IntMatrix<T>) -> Result<Vec<SignedCircuit<T>>> {
    let m = mod2_matroid(a);
    let masks = m.circuit_masks(&WeightFn::unit(m.len()), None)?;
    masks
        .into_iter()
        .map(|mask| {
            let support: Vec<usize> = mask_indices(mask).collect();
            int_kernel_vector(a, &support).ok_or_else(|| {
                Error::contract(format!(
                    "support {support:?} is a circuit mod 2 but not over the rationals; matrix is not TU"
                ))
            })
        })
        .collect()
}

/// Least ℓ1 norm of a circuit, which for TU matrices is `λ(L(A))`; `None` for
/// a trivial kernel.
pub fn lambda<T: IntScalar>(a: &IntMatrix<T>) -> Result<Option<u64>> {
    let circuits = matrix_circuits(a)?;
    circuits.iter().map(norm_u64).collect::<Result<Vec<_>>>().map(|n| n.into_iter().min())
}

fn norm_u64<T: IntScalar>(v: &IntVector<T>) -> Result<u64> {
    v.l1_norm_u64()
        .ok_or_else(|| Error::guard("vector norm exceeds 64 bits"))
}

fn check_kernel<T: IntScalar>(a: &IntMatrix<T>, v: &IntVector<T>) -> Result<()> {
    if v.dim() != a.n_cols() {
        return Err(Error::Dimension(format!(
            "vector of length {} for {} columns",
            v.dim(),
            a.n_cols()
        )));
    }
    if v.is_zero() {
        return Err(Error::contract("vector is zero"));
    }
    if !a.annihilates(v) {
        return Err(Error::contract("vector is not in the kernel"));
    }
    Ok(())
}

/// A circuit `u` with `u ⊑ v`: same signs as `v` and entrywise no larger.
pub fn conformal_circuit<T: IntScalar>(a: &IntMatrix<T>, v: &IntVector<T>) -> Result<SignedCircuit<T>> {
    check_kernel(a, v)?;
    let support = v.support();
    let restricted = BinaryMatroid::with_prefix("", a.mod2().select_columns(&support));
    for mask in restricted.circuit_masks(&WeightFn::unit(support.len()), None)? {
        let cols: Vec<usize> = mask_indices(mask).map(|i| support[i]).collect();
        let Some(mut u) = int_kernel_vector(a, &cols) else {
            continue;
        };
        let first = cols[0];
        if (u.0[first].clone() * v.0[first].clone()).is_negative() {
            u = -u;
        }
        if u.is_conformal_to(v) {
            return Ok(u);
        }
    }
    Err(Error::contract("no conformal circuit found; matrix is not TU"))
}

/// Peels conformal circuits off `v` until nothing remains. The pieces sum to
/// `v` and their norms sum to `‖v‖1`.
pub fn conformal_decompose<T: IntScalar>(a: &IntMatrix<T>, v: &IntVector<T>) -> Result<Vec<SignedCircuit<T>>> {
    if v.dim() != a.n_cols() {
        return Err(Error::Dimension(format!(
            "vector of length {} for {} columns",
            v.dim(),
            a.n_cols()
        )));
    }
    let mut rest = v.clone();
    let mut out = Vec::new();
    while !rest.is_zero() {
        let u = conformal_circuit(a, &rest)?;
        rest = &rest - &u;
        out.push(u);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShortVectorMethod {
    /// Signed circuits below the bound; valid for bounds up to `2λ`.
    Circuits,
    /// Exhaustive scan of the kernel lattice inside the ℓ1 ball.
    BoxScan,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeReport<T: IntScalar> {
    /// `None` when the kernel is trivial.
    pub lambda: Option<u64>,
    pub vectors: Vec<IntVector<T>>,
    pub bound: Bound,
}

impl<T: IntScalar> LatticeReport<T> {
    pub fn is_trivial(&self) -> bool {
        self.lambda.is_none()
    }

    pub fn count(&self) -> usize {
        self.vectors.len()
    }
}

impl<T: IntScalar> fmt::Display for LatticeReport<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.lambda {
            Some(l) => writeln!(f, "lambda {l}")?,
            None => writeln!(f, "lambda infinite")?,
        }
        writeln!(f, "bound {}", self.bound)?;
        writeln!(f, "count {}", self.vectors.len())?;
        for v in &self.vectors {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Nonzero kernel vectors with `‖v‖1 < bound`, sorted, by either method.
pub fn short_vectors<T: IntScalar>(
    a: &IntMatrix<T>,
    bound: &Bound,
    method: ShortVectorMethod,
) -> Result<LatticeReport<T>> {
    let (lambda, mut vectors) = match method {
        ShortVectorMethod::Circuits => {
            let circuits = matrix_circuits(a)?;
            let lambda = circuits
                .iter()
                .map(norm_u64)
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .min();
            if let Some(l) = lambda {
                if *bound > Bound::from_integer(2 * l) {
                    return Err(Error::contract(format!(
                        "bound {bound} exceeds 2λ = {}; use the box scan",
                        2 * l
                    )));
                }
            }
            let mut out = Vec::new();
            for c in circuits {
                if below(norm_u64(&c)?, bound) {
                    out.push(-c.clone());
                    out.push(c);
                }
            }
            (lambda, out)
        }
        ShortVectorMethod::BoxScan => {
            let scan = KernelScan::new(a)?;
            let lambda = scan.lambda()?;
            let mut out = Vec::new();
            if let Some(n) = max_norm_below(bound) {
                scan.visit(n, &mut |v, norm| {
                    if below(norm, bound) {
                        out.push(v);
                    }
                })?;
            }
            (lambda, out)
        }
    };
    vectors.sort();
    Ok(LatticeReport {
        lambda,
        vectors,
        bound: *bound,
    })
}

/// Largest integer strictly below `bound`, if any is nonnegative.
pub(crate) fn max_norm_below(bound: &Bound) -> Option<u64> {
    let (p, q) = (*bound.numer(), *bound.denom());
    (p > 0).then(|| (p - 1) / q)
}

/// Number of integer points of ℓ1 norm at most `r` in dimension `d`.
pub(crate) fn l1_ball_size(d: usize, r: u64) -> u128 {
    (0..=d.min(r as usize) as u128)
        .map(|k| (1u128 << k) * binom(d as u128, k) * binom(r as u128, k))
        .sum()
}

/// Kernel parametrized by its free coordinates: `x_P = -R x_F` from the
/// reduced row echelon form. The projection onto the free coordinates is
/// injective on the kernel and never increases the ℓ1 norm.
struct KernelScan<T: IntScalar> {
    n_cols: usize,
    free: Vec<usize>,
    /// `(pivot column, coefficients on free columns)`.
    pivot_rows: Vec<(usize, Vec<Ratio<T>>)>,
}

impl<T: IntScalar> KernelScan<T> {
    fn new(a: &IntMatrix<T>) -> Result<Self> {
        if a.n_cols() > MAX_SCAN_COLS {
            return Err(Error::guard(format!(
                "{} columns; box scan supports at most {MAX_SCAN_COLS}",
                a.n_cols()
            )));
        }
        let (rref, pivots) = a.rational_rref();
        let free: Vec<usize> = (0..a.n_cols()).filter(|c| !pivots.contains(c)).collect();
        let pivot_rows = rref
            .iter()
            .zip(&pivots)
            .map(|(row, &p)| (p, free.iter().map(|&f| row[f].clone()).collect()))
            .collect();
        Ok(KernelScan {
            n_cols: a.n_cols(),
            free,
            pivot_rows,
        })
    }

    /// Calls `f` on every nonzero integer kernel vector whose free part has
    /// norm at most `radius`, with its full ℓ1 norm.
    fn visit(&self, radius: u64, f: &mut dyn FnMut(IntVector<T>, u64)) -> Result<()> {
        let points = l1_ball_size(self.free.len(), radius);
        if points > MAX_SCAN_POINTS {
            return Err(Error::guard(format!(
                "{points} lattice points; box scan visits at most {MAX_SCAN_POINTS}"
            )));
        }
        let mut x = vec![0i64; self.free.len()];
        self.recurse(0, radius, &mut x, f);
        Ok(())
    }

    fn recurse(&self, i: usize, budget: u64, x: &mut Vec<i64>, f: &mut dyn FnMut(IntVector<T>, u64)) {
        if i == x.len() {
            if x.iter().any(|&v| v != 0) {
                if let Some((v, n)) = self.complete(x) {
                    f(v, n);
                }
            }
            return;
        }
        let b = budget as i64;
        for val in -b..=b {
            x[i] = val;
            self.recurse(i + 1, budget - val.unsigned_abs(), x, f);
        }
        x[i] = 0;
    }

    fn complete(&self, x: &[i64]) -> Option<(IntVector<T>, u64)> {
        let mut v = IntVector::<T>::zeros(self.n_cols);
        for (&c, &val) in self.free.iter().zip(x) {
            v.0[c] = T::from_i64_exact(val);
        }
        for (p, coeffs) in &self.pivot_rows {
            let mut acc = Ratio::<T>::zero();
            for (coef, &val) in coeffs.iter().zip(x) {
                if val != 0 {
                    acc = acc - coef.clone() * Ratio::from_integer(T::from_i64_exact(val));
                }
            }
            if !acc.denom().is_one() {
                return None;
            }
            v.0[*p] = acc.to_integer();
        }
        let n = v.l1_norm().to_u64()?;
        Some((v, n))
    }

    /// Least norm of a nonzero kernel vector, by growing the scan radius
    /// until it reaches the best norm seen.
    fn lambda(&self) -> Result<Option<u64>> {
        if self.free.is_empty() {
            return Ok(None);
        }
        let mut best: Option<u64> = None;
        let mut radius = 1;
        loop {
            self.visit(radius, &mut |_, n| {
                best = Some(best.map_or(n, |b| b.min(n)));
            })?;
            if let Some(b) = best {
                if radius >= b {
                    return Ok(Some(b));
                }
            }
            radius = best.map_or(radius * 2, |b| b.min(radius * 2));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ZMatrix64;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn ones3() -> ZMatrix64 {
        ZMatrix64::from_i64_rows(&[&[1, 1, 1]])
    }

    fn v(x: &[i64]) -> IntVector<i64> {
        IntVector::from_i64s(x)
    }

    /// Oracle: determinant of every square submatrix by Bareiss elimination.
    fn brute_is_tu(a: &ZMatrix64) -> bool {
        let (r, c) = (a.n_rows(), a.n_cols());
        for k in 1..=r.min(c) {
            for rm in combinations(r, k) {
                for cm in combinations(c, k) {
                    let rows: Vec<usize> = mask_indices(rm).collect();
                    let cols: Vec<usize> = mask_indices(cm).collect();
                    let d = a.select(&rows, &cols).determinant().unwrap();
                    if d.abs() > 1 {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Oracle: primitive kernel vectors of minimal support found by scanning
    /// the box [-2, 2]^n; canonical sign.
    fn brute_circuits(a: &ZMatrix64) -> BTreeSet<IntVector<i64>> {
        let n = a.n_cols();
        let mut kernel = Vec::new();
        let total = 5usize.pow(n as u32);
        for code in 1..total {
            let mut x = vec![0i64; n];
            let mut c = code;
            for xi in x.iter_mut() {
                *xi = (c % 5) as i64 - 2;
                c /= 5;
            }
            let x = IntVector(x);
            if a.annihilates(&x) && x.content() == 1 {
                kernel.push(x);
            }
        }
        let supports: Vec<BTreeSet<usize>> = kernel.iter().map(|x| x.support().into_iter().collect()).collect();
        kernel
            .iter()
            .zip(&supports)
            .filter(|(_, s)| !supports.iter().any(|t| t.is_subset(s) && t != *s))
            .map(|(x, _)| x.clone().canonical_sign())
            .collect()
    }

    #[test]
    fn tu_examples() {
        assert!(!is_tu(&ZMatrix64::from_i64_rows(&[&[1, 1], &[-1, 1]])).unwrap());
        assert!(is_tu(&ZMatrix64::identity(5)).unwrap());
        assert!(!is_tu(&ZMatrix64::from_i64_rows(&[&[2]])).unwrap());
        // Bipartite incidence of K_{2,3}, one side's rows negated.
        let k23 = ZMatrix64::from_i64_rows(&[
            &[1, 1, 1, 0, 0, 0],
            &[0, 0, 0, 1, 1, 1],
            &[-1, 0, 0, -1, 0, 0],
            &[0, -1, 0, 0, -1, 0],
        ]);
        assert!(is_tu(&k23).unwrap());
        assert!(brute_is_tu(&k23));
        // Odd-cycle incidence has determinant 2.
        let c3 = ZMatrix64::from_i64_rows(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        assert!(!is_tu(&c3).unwrap());
    }

    #[test]
    fn tu_guard() {
        let big = ZMatrix64::zeros(15, 15);
        assert!(is_tu(&big).unwrap_err().is_guard());
        assert!(is_tu(&ZMatrix64::zeros(3, 40)).unwrap());
    }

    #[test]
    fn circuits_examples() {
        let got = matrix_circuits(&ones3()).unwrap();
        assert_eq!(got, vec![v(&[1, -1, 0]), v(&[1, 0, -1]), v(&[0, 1, -1])]);
        assert_eq!(got.iter().cloned().collect::<BTreeSet<_>>(), brute_circuits(&ones3()));
        assert!(matrix_circuits(&ZMatrix64::identity(3)).unwrap().is_empty());
        // Directed C4 incidence: one circuit alternating around the cycle.
        let c4 = ZMatrix64::from_i64_rows(&[
            &[1, 0, 0, -1],
            &[-1, 1, 0, 0],
            &[0, -1, 1, 0],
            &[0, 0, -1, 1],
        ]);
        assert_eq!(matrix_circuits(&c4).unwrap(), vec![v(&[1, 1, 1, 1])]);
        let undirected = ZMatrix64::from_i64_rows(&[&[1, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 1, 1]]);
        assert_eq!(matrix_circuits(&undirected).unwrap(), vec![v(&[1, -1, 1, -1])]);
    }

    #[test]
    fn conformal_examples() {
        let a = ones3();
        let c = conformal_circuit(&a, &v(&[1, -1, 0])).unwrap();
        assert_eq!(c, v(&[1, -1, 0]));
        let w = v(&[2, -1, -1]);
        let u = conformal_circuit(&a, &w).unwrap();
        assert!(u.is_conformal_to(&w));
        assert!(u == v(&[1, -1, 0]) || u == v(&[1, 0, -1]));
        assert!(conformal_circuit(&a, &v(&[1, 0, 0])).is_err());
        assert!(conformal_circuit(&a, &v(&[0, 0, 0])).is_err());

        assert!(conformal_decompose(&a, &v(&[0, 0, 0])).unwrap().is_empty());
        assert_eq!(conformal_decompose(&a, &v(&[0, 1, -1])).unwrap(), vec![v(&[0, 1, -1])]);
        let parts = conformal_decompose(&a, &w).unwrap();
        assert_eq!(parts.len(), 2);
        let sum = parts.iter().fold(IntVector::zeros(3), |acc, p| &acc + p);
        assert_eq!(sum, w);
        assert_eq!(parts.iter().map(|p| p.l1_norm()).sum::<i64>(), 4);
    }

    #[test]
    fn short_vector_examples() {
        let a = ones3();
        let b = Bound::from_integer(3);
        let fast = short_vectors(&a, &b, ShortVectorMethod::Circuits).unwrap();
        let scan = short_vectors(&a, &b, ShortVectorMethod::BoxScan).unwrap();
        assert_eq!(fast.lambda, Some(2));
        assert_eq!(fast.count(), 6);
        assert_eq!(fast, scan);
        assert_eq!(
            fast.to_string(),
            "lambda 2\nbound 3\ncount 6\n-1 0 1\n-1 1 0\n0 -1 1\n0 1 -1\n1 -1 0\n1 0 -1\n"
        );
        // Past 2λ the box scan sees non-circuits such as (2,-1,-1).
        let wide = short_vectors(&a, &Bound::from_integer(5), ShortVectorMethod::BoxScan).unwrap();
        assert!(wide.vectors.contains(&v(&[2, -1, -1])));
        assert!(short_vectors(&a, &Bound::from_integer(5), ShortVectorMethod::Circuits).is_err());

        for method in [ShortVectorMethod::Circuits, ShortVectorMethod::BoxScan] {
            let id = short_vectors(&ZMatrix64::identity(3), &Bound::from_integer(10), method).unwrap();
            assert!(id.is_trivial());
            assert!(id.vectors.is_empty());
        }
    }

    #[test]
    fn bound_helpers() {
        assert_eq!(max_norm_below(&Bound::new(3, 1)), Some(2));
        assert_eq!(max_norm_below(&Bound::new(7, 2)), Some(3));
        assert_eq!(max_norm_below(&Bound::new(0, 1)), None);
        assert_eq!(l1_ball_size(2, 1), 5);
        assert_eq!(l1_ball_size(3, 2), 25);
    }

    fn small_matrix() -> impl Strategy<Value = ZMatrix64> {
        (1usize..=4, 1usize..=5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-1i64..=1, c), r)
                .prop_map(move |rows| ZMatrix64::from_rows(c, rows).unwrap())
        })
    }

    proptest! {
        #[test]
        fn tu_matches_minor_oracle(a in small_matrix()) {
            prop_assert_eq!(is_tu(&a).unwrap(), brute_is_tu(&a));
        }

        #[test]
        fn tu_circuits_match_box_oracle(a in small_matrix()) {
            prop_assume!(is_tu(&a).unwrap());
            let got: BTreeSet<_> = matrix_circuits(&a).unwrap().into_iter().collect();
            prop_assert!(got.iter().all(|c| c.is_unit_valued()));
            prop_assert_eq!(got, brute_circuits(&a));
        }

        #[test]
        fn decomposition_is_norm_additive(a in small_matrix(), coeffs in proptest::collection::vec(-2i64..=2, 6)) {
            prop_assume!(is_tu(&a).unwrap());
            let circuits = matrix_circuits(&a).unwrap();
            let mut x = IntVector::zeros(a.n_cols());
            for (c, k) in circuits.iter().zip(&coeffs) {
                for (xi, ci) in x.0.iter_mut().zip(&c.0) {
                    *xi += k * ci;
                }
            }
            let parts = conformal_decompose(&a, &x).unwrap();
            let sum = parts.iter().fold(IntVector::zeros(a.n_cols()), |acc, p| &acc + p);
            prop_assert_eq!(&sum, &x);
            prop_assert_eq!(parts.iter().map(|p| p.l1_norm()).sum::<i64>(), x.l1_norm());
        }
    }
}
