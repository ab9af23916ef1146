//! Dense bit-packed matrices and vectors over GF(2).

use std::fmt;

use crate::error::{Error, Result};
use crate::text::{read_matrix, Lines};

const WORD: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// Bit vector over GF(2) with a fixed length.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2Vector {
    len: usize,
    words: Vec<u64>,
}

impl Gf2Vector {
    pub fn zeros(len: usize) -> Self {
        Gf2Vector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.set(i, true);
        }
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        Self::from_indices(bits.len(), bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i))
    }

    /// Low `len` bits of `mask`.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= WORD);
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = if len == WORD { mask } else { mask & ((1u64 << len) - 1) };
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let m = 1u64 << (i % WORD);
        if bit {
            self.words[i / WORD] |= m;
        } else {
            self.words[i / WORD] &= !m;
        }
    }

    pub fn xor_assign(&mut self, other: &Gf2Vector) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices of the set bits, ascending.
    pub fn ones(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.count_ones());
        for (wi, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                out.push(wi * WORD + b);
                w &= w - 1;
            }
        }
        out
    }

    pub fn dot(&self, other: &Gf2Vector) -> bool {
        assert_eq!(self.len, other.len);
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones % 2 == 1
    }

    /// The vector as a `u64` mask, when it fits.
    pub fn to_mask(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Dense matrix over GF(2), rows bit-packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    n_rows: usize,
    n_cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        let stride = words_for(n_cols);
        Gf2Matrix {
            n_rows,
            n_cols,
            stride,
            data: vec![0; stride * n_rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of 0/1 entries.
    pub fn from_rows<R: AsRef<[u8]>>(n_cols: usize, rows: &[R]) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), n_cols);
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n_cols {
                return Err(Error::Dimension(format!(
                    "row {r} has {} entries, expected {n_cols}",
                    row.len()
                )));
            }
            for (c, &b) in row.iter().enumerate() {
                match b {
                    0 => {}
                    1 => m.set(r, c, true),
                    _ => return Err(Error::contract(format!("GF(2) entry {b} at ({r}, {c})"))),
                }
            }
        }
        Ok(m)
    }

    pub fn from_row_vectors(n_cols: usize, rows: &[Gf2Vector]) -> Self {
        let mut m = Self::zeros(rows.len(), n_cols);
        for (r, v) in rows.iter().enumerate() {
            assert_eq!(v.len(), n_cols);
            m.row_words_mut(r).copy_from_slice(v.words());
        }
        m
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.n_rows && c < self.n_cols);
        (self.data[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        assert!(r < self.n_rows && c < self.n_cols);
        let w = &mut self.data[r * self.stride + c / WORD];
        let m = 1u64 << (c % WORD);
        if bit {
            *w |= m;
        } else {
            *w &= !m;
        }
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> Gf2Vector {
        Gf2Vector {
            len: self.n_cols,
            words: self.row_words(r).to_vec(),
        }
    }

    pub fn column(&self, c: usize) -> Gf2Vector {
        Gf2Vector::from_indices(self.n_rows, (0..self.n_rows).filter(|&r| self.get(r, c)))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.data.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    /// row[dst] ^= row[src]
    fn add_row(&mut self, src: usize, dst: usize) {
        for w in 0..self.stride {
            let v = self.data[src * self.stride + w];
            self.data[dst * self.stride + w] ^= v;
        }
    }

    /// Reduced row-echelon form and the pivot columns, in increasing order.
    /// Zero rows end up at the bottom; the shape is unchanged.
    pub fn rref(&self) -> (Gf2Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.n_cols {
            if row == m.n_rows {
                break;
            }
            let Some(p) = (row..m.n_rows).find(|&r| m.get(r, col)) else {
                continue;
            };
            m.swap_rows(row, p);
            for r in 0..m.n_rows {
                if r != row && m.get(r, col) {
                    m.add_row(row, r);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of the nullspace `{x : M x = 0}`; one vector per non-pivot column.
    pub fn kernel_basis(&self) -> Vec<Gf2Vector> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.n_cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.n_cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = Gf2Vector::zeros(self.n_cols);
                v.set(free, true);
                for (i, &p) in pivots.iter().enumerate() {
                    if r.get(i, free) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    pub fn mul_vec(&self, x: &Gf2Vector) -> Gf2Vector {
        assert_eq!(x.len(), self.n_cols);
        let mut out = Gf2Vector::zeros(self.n_rows);
        for r in 0..self.n_rows {
            let parity: u32 = self
                .row_words(r)
                .iter()
                .zip(x.words())
                .map(|(a, b)| (a & b).count_ones())
                .sum();
            if parity % 2 == 1 {
                out.set(r, true);
            }
        }
        out
    }

    pub fn select_columns(&self, cols: &[usize]) -> Gf2Matrix {
        let mut m = Gf2Matrix::zeros(self.n_rows, cols.len());
        for (j, &c) in cols.iter().enumerate() {
            for r in 0..self.n_rows {
                if self.get(r, c) {
                    m.set(r, j, true);
                }
            }
        }
        m
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut t = Gf2Matrix::zeros(self.n_cols, self.n_rows);
        for r in 0..self.n_rows {
            for c in 0..self.n_cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    /// Drops all-zero rows.
    pub fn without_zero_rows(&self) -> Gf2Matrix {
        let rows: Vec<Gf2Vector> = (0..self.n_rows)
            .map(|r| self.row(r))
            .filter(|v| !v.is_zero())
            .collect();
        Gf2Matrix::from_row_vectors(self.n_cols, &rows)
    }

    /// Columns as `u64` masks over the rows. Requires `n_rows <= 64`.
    pub(crate) fn column_masks(&self) -> Option<Vec<u64>> {
        if self.n_rows > WORD {
            return None;
        }
        Some(
            (0..self.n_cols)
                .map(|c| {
                    (0..self.n_rows)
                        .filter(|&r| self.get(r, c))
                        .fold(0u64, |acc, r| acc | (1 << r))
                })
                .collect(),
        )
    }

    /// Parses the matrix text format restricted to entries in {0, 1}.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = Lines::new(text);
        Self::read(&mut lines)
    }

    pub(crate) fn read(lines: &mut Lines<'_>) -> Result<Self> {
        let (_, cols, rows) = read_matrix::<u8>(lines)?;
        Self::from_rows(cols, &rows)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n_rows, self.n_cols)?;
        for r in 0..self.n_rows {
            let row: Vec<&str> = (0..self.n_cols)
                .map(|c| if self.get(r, c) { "1" } else { "0" })
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.n_rows, self.n_cols)?;
        for r in 0..self.n_rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}
