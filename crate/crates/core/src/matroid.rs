//! Binary matroids given by a GF(2) representation.
//!
//! Elements are identified by string labels so that matroids built from
//! different sources can be compared and glued by name.
//! Set-valued results use [`ElementSet`]; internally the exhaustive routines
//! work on `u64` masks, which caps circuit enumeration at 64 elements.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{Gf2Matrix, Gf2Vector};
use crate::scalar::{below, Bound};
use crate::text::Lines;

pub type ElementSet = BTreeSet<String>;

/// Builds an [`ElementSet`] from string-like labels.
pub fn element_set<I, S>(labels: I) -> ElementSet
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    labels.into_iter().map(Into::into).collect()
}

/// Kernel dimension up to which circuits are found by walking the cycle space.
const KERNEL_WALK_MAX_NULLITY: usize = 22;
const MAX_MASK_ELEMENTS: usize = 64;

/// Natural-number weights, one per ground-set element in matroid order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightFn(Vec<u64>);

impl WeightFn {
    pub fn unit(m: usize) -> Self {
        WeightFn(vec![1; m])
    }

    pub fn new(weights: Vec<u64>) -> Self {
        WeightFn(weights)
    }

    /// Weights keyed by label; every element of `matroid` must be present.
    pub fn from_labels(matroid: &BinaryMatroid, weights: &HashMap<String, u64>) -> Result<Self> {
        for label in weights.keys() {
            matroid.index_of(label)?;
        }
        matroid
            .labels()
            .iter()
            .map(|l| {
                weights
                    .get(l)
                    .copied()
                    .ok_or_else(|| Error::contract(format!("no weight for element `{l}`")))
            })
            .collect::<Result<Vec<_>>>()
            .map(WeightFn)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> u64 {
        self.0[i]
    }

    pub fn values(&self) -> &[u64] {
        &self.0
    }

    pub fn of_mask(&self, mask: u64) -> u64 {
        mask_indices(mask).map(|i| self.0[i]).sum()
    }

    pub fn of_indices(&self, idx: &[usize]) -> u64 {
        idx.iter().map(|&i| self.0[i]).sum()
    }
}

pub(crate) fn mask_indices(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            return None;
        }
        let i = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        Some(i)
    })
}

/// Rank of a set of GF(2) vectors given as masks (xor basis).
pub(crate) fn mask_rank(vectors: impl IntoIterator<Item = u64>) -> usize {
    let mut basis = [0u64; 64];
    let mut rank = 0;
    for mut v in vectors {
        while v != 0 {
            let hi = 63 - v.leading_zeros() as usize;
            if basis[hi] == 0 {
                basis[hi] = v;
                rank += 1;
                break;
            }
            v ^= basis[hi];
        }
    }
    rank
}

#[derive(Clone, PartialEq, Eq)]
pub struct BinaryMatroid {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    rep: Gf2Matrix,
}

impl BinaryMatroid {
    pub fn new(labels: Vec<String>, rep: Gf2Matrix) -> Result<Self> {
        if labels.len() != rep.n_cols() {
            return Err(Error::Dimension(format!(
                "{} labels for {} columns",
                labels.len(),
                rep.n_cols()
            )));
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || l.chars().any(char::is_whitespace) {
                return Err(Error::contract(format!("invalid element label `{l}`")));
            }
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(BinaryMatroid { labels, index, rep })
    }

    /// Labels `prefix0`, `prefix1`, ... in column order.
    pub fn with_prefix(prefix: &str, rep: Gf2Matrix) -> Self {
        let labels = (0..rep.n_cols()).map(|i| format!("{prefix}{i}")).collect();
        Self::new(labels, rep).expect("generated labels are distinct")
    }

    /// The free matroid on `labels`: every subset independent.
    pub fn free(labels: Vec<String>) -> Result<Self> {
        let rep = Gf2Matrix::identity(labels.len());
        Self::new(labels, rep)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rep(&self) -> &Gf2Matrix {
        &self.rep
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rep.rank()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn contains(&self, label: &str) -> bool {
        self.index.contains_key(label)
    }

    pub fn indices_of<'a, I>(&self, labels: I) -> Result<Vec<usize>>
    where
        I: IntoIterator<Item = &'a String>,
    {
        let mut idx: Vec<usize> = labels
            .into_iter()
            .map(|l| self.index_of(l))
            .collect::<Result<_>>()?;
        idx.sort_unstable();
        idx.dedup();
        Ok(idx)
    }

    pub fn set_of_indices(&self, idx: impl IntoIterator<Item = usize>) -> ElementSet {
        idx.into_iter().map(|i| self.labels[i].clone()).collect()
    }

    pub(crate) fn set_of_mask(&self, mask: u64) -> ElementSet {
        self.set_of_indices(mask_indices(mask))
    }

    pub(crate) fn mask_of(&self, set: &ElementSet) -> Result<u64> {
        self.guard_mask()?;
        Ok(self.indices_of(set)?.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    fn guard_mask(&self) -> Result<()> {
        if self.len() > MAX_MASK_ELEMENTS {
            return Err(Error::guard(format!(
                "{} elements; exhaustive routines support at most {MAX_MASK_ELEMENTS}",
                self.len()
            )));
        }
        Ok(())
    }

    /// Column masks over a row basis of the representation.
    fn column_masks(&self) -> Vec<u64> {
        let basis = self.rep.rref().0.without_zero_rows();
        basis
            .column_masks()
            .expect("a row basis has at most as many rows as columns")
    }

    pub fn is_independent(&self, set: &ElementSet) -> Result<bool> {
        let idx = self.indices_of(set)?;
        Ok(self.rep.select_columns(&idx).rank() == idx.len())
    }

    /// Rank of a subset of the ground set.
    pub fn rank_of(&self, set: &ElementSet) -> Result<usize> {
        let idx = self.indices_of(set)?;
        Ok(self.rep.select_columns(&idx).rank())
    }

    /// Whether `set` is a circuit (inclusion-minimal dependent set).
    pub fn is_circuit(&self, set: &ElementSet) -> Result<bool> {
        let mask = self.mask_of(set)?;
        let cols = self.column_masks();
        Ok(mask != 0 && is_circuit_mask(&cols, mask))
    }

    /// Whether the indicator vector of `set` lies in the cycle space.
    pub fn in_cycle_space(&self, set: &ElementSet) -> Result<bool> {
        let idx = self.indices_of(set)?;
        Ok(self
            .rep
            .mul_vec(&Gf2Vector::from_indices(self.len(), idx))
            .is_zero())
    }

    /// All circuits `C` with `w(C) < bound`, in canonical order.
    pub fn circuits_up_to(&self, w: &WeightFn, bound: u64) -> Result<Vec<ElementSet>> {
        self.circuits_below(w, &Bound::from_integer(bound))
    }

    /// All circuits `C` with `w(C) < bound` for a rational bound.
    pub fn circuits_below(&self, w: &WeightFn, bound: &Bound) -> Result<Vec<ElementSet>> {
        let masks = self.circuit_masks(w, Some(bound))?;
        Ok(masks.into_iter().map(|m| self.set_of_mask(m)).collect())
    }

    /// Every circuit of the matroid, in canonical order.
    pub fn circuits(&self) -> Result<Vec<ElementSet>> {
        let masks = self.circuit_masks(&WeightFn::unit(self.len()), None)?;
        Ok(masks.into_iter().map(|m| self.set_of_mask(m)).collect())
    }

    /// Circuits as masks over the ground-set order. The order is canonical:
    /// ascending by the sorted list of element indices.
    pub(crate) fn circuit_masks(&self, w: &WeightFn, bound: Option<&Bound>) -> Result<Vec<u64>> {
        self.guard_mask()?;
        if w.len() != self.len() {
            return Err(Error::Dimension(format!(
                "{} weights for {} elements",
                w.len(),
                self.len()
            )));
        }
        let nullity = self.len() - self.rank();
        let route = if nullity <= KERNEL_WALK_MAX_NULLITY {
            CircuitRoute::KernelWalk
        } else {
            CircuitRoute::SupportSearch
        };
        Ok(self.circuit_masks_via(route, w, bound))
    }

    pub(crate) fn circuit_masks_via(
        &self,
        route: CircuitRoute,
        w: &WeightFn,
        bound: Option<&Bound>,
    ) -> Vec<u64> {
        let admissible = |weight: u64| bound.is_none_or(|b| below(weight, b));
        let cols = self.column_masks();
        let mut found = match route {
            CircuitRoute::KernelWalk => {
                let basis: Vec<u64> = self
                    .rep
                    .kernel_basis()
                    .iter()
                    .map(|v| v.to_mask().expect("at most 64 elements"))
                    .collect();
                let mut out = Vec::new();
                let mut v = 0u64;
                // Gray-code walk over all 2^k kernel vectors.
                for i in 1u64..(1u64 << basis.len()) {
                    v ^= basis[i.trailing_zeros() as usize];
                    if admissible(w.of_mask(v)) && is_circuit_mask(&cols, v) {
                        out.push(v);
                    }
                }
                out
            }
            CircuitRoute::SupportSearch => {
                let mut out = Vec::new();
                let mut stack: Vec<usize> = Vec::new();
                support_search(&cols, w, &admissible, &mut stack, 0, 0, &mut out);
                out
            }
        };
        found.sort_by_key(|&m| canonical_key(m));
        found
    }

    /// Minimum circuit weight; `None` when the matroid has no circuit.
    pub fn girth(&self, w: &WeightFn) -> Result<Option<u64>> {
        Ok(self
            .circuit_masks(w, None)?
            .into_iter()
            .map(|m| w.of_mask(m))
            .min())
    }

    /// Whether every two elements lie on a common circuit.
    pub fn is_connected(&self) -> Result<bool> {
        if self.len() <= 1 {
            return Ok(true);
        }
        let mut reach = 1u64;
        let circuits = self.circuit_masks(&WeightFn::unit(self.len()), None)?;
        loop {
            let grown = circuits.iter().filter(|&&c| c & reach != 0).fold(reach, |acc, &c| acc | c);
            if grown == reach {
                break;
            }
            reach = grown;
        }
        Ok(reach.count_ones() as usize == self.len())
    }

    /// The dual matroid on the same labels: its row space is the orthogonal
    /// complement of the row space of the representation.
    pub fn dual(&self) -> BinaryMatroid {
        let m = self.len();
        let (r, pivots) = self.rep.rref();
        let mut is_pivot = vec![false; m];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..m).filter(|&c| !is_pivot[c]).collect();
        let mut d = Gf2Matrix::zeros(free.len(), m);
        for (j, &f) in free.iter().enumerate() {
            d.set(j, f, true);
            for (i, &p) in pivots.iter().enumerate() {
                if r.get(i, f) {
                    d.set(j, p, true);
                }
            }
        }
        BinaryMatroid::new(self.labels.clone(), d).expect("labels unchanged")
    }

    pub fn delete(&self, set: &ElementSet) -> Result<BinaryMatroid> {
        let drop = self.indices_of(set)?;
        let keep: Vec<usize> = (0..self.len()).filter(|i| drop.binary_search(i).is_err()).collect();
        let labels = keep.iter().map(|&i| self.labels[i].clone()).collect();
        BinaryMatroid::new(labels, self.rep.select_columns(&keep))
    }

    pub fn contract(&self, set: &ElementSet) -> Result<BinaryMatroid> {
        Ok(self.dual().delete(set)?.dual())
    }

    /// Restriction to `set` (deletion of the complement).
    pub fn restrict(&self, set: &ElementSet) -> Result<BinaryMatroid> {
        let keep = self.indices_of(set)?;
        let complement = self.set_of_indices((0..self.len()).filter(|i| keep.binary_search(i).is_err()));
        self.delete(&complement)
    }

    /// Splits a disjoint union of circuits into pairwise-disjoint circuits by
    /// repeatedly peeling off a minimal dependent subset.
    pub fn symdiff_decompose(&self, set: &ElementSet) -> Result<Vec<ElementSet>> {
        if !self.in_cycle_space(set)? {
            return Err(Error::contract("set is not a disjoint union of circuits"));
        }
        let mut remaining = self.indices_of(set)?;
        let mut out = Vec::new();
        while !remaining.is_empty() {
            let circuit = self.first_circuit_within(&remaining);
            remaining.retain(|i| circuit.binary_search(i).is_err());
            out.push(self.set_of_indices(circuit));
        }
        Ok(out)
    }

    /// Some circuit contained in the dependent index set `idx`.
    fn first_circuit_within(&self, idx: &[usize]) -> Vec<usize> {
        let mut chosen: Vec<usize> = Vec::new();
        for &e in idx {
            chosen.push(e);
            let sub = self.rep.select_columns(&chosen);
            if sub.rank() < chosen.len() {
                let v = &sub.kernel_basis()[0];
                return v.ones().into_iter().map(|j| chosen[j]).collect();
            }
        }
        unreachable!("a nonempty member of the cycle space is dependent")
    }

    /// Same matroid with labels renamed through `f`.
    pub fn relabel(&self, f: impl Fn(&str) -> String) -> Result<BinaryMatroid> {
        BinaryMatroid::new(self.labels.iter().map(|l| f(l)).collect(), self.rep.clone())
    }

    /// Parses a matroid file: a line of labels, then the matrix text format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = Lines::new(text);
        let (_, header) = lines.expect_content("label line")?;
        let labels: Vec<String> = header.split_whitespace().map(str::to_string).collect();
        let rep = Gf2Matrix::read(&mut lines)?;
        Self::new(labels, rep)
    }

    pub fn to_text(&self) -> String {
        format!("{}\n{}", self.labels.join(" "), self.rep)
    }
}

impl fmt::Debug for BinaryMatroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryMatroid {:?}\n{:?}", self.labels, self.rep)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum CircuitRoute {
    /// Walk the whole cycle space and keep minimal supports.
    KernelWalk,
    /// Grow independent sets in index order; stop at the first dependency.
    SupportSearch,
}

fn canonical_key(mask: u64) -> Vec<usize> {
    mask_indices(mask).collect()
}

/// A nonempty kernel-vector support (or any set) is a circuit iff it is
/// dependent and each single-element deletion is independent.
fn is_circuit_mask(cols: &[u64], mask: u64) -> bool {
    let size = mask.count_ones() as usize;
    let rank = mask_rank(mask_indices(mask).map(|i| cols[i]));
    if rank + 1 != size {
        return false;
    }
    mask_indices(mask).all(|drop| mask_rank(mask_indices(mask & !(1 << drop)).map(|i| cols[i])) == size - 1)
}

fn support_search(
    cols: &[u64],
    w: &WeightFn,
    admissible: &dyn Fn(u64) -> bool,
    chosen: &mut Vec<usize>,
    weight: u64,
    start: usize,
    out: &mut Vec<u64>,
) {
    for e in start..cols.len() {
        let total = weight + w.get(e);
        if !admissible(total) {
            continue;
        }
        chosen.push(e);
        let rank = mask_rank(chosen.iter().map(|&i| cols[i]));
        if rank == chosen.len() {
            support_search(cols, w, admissible, chosen, total, e + 1, out);
        } else {
            // `chosen - e` is independent, so `chosen` holds exactly one
            // circuit; keep it only if it is all of `chosen`.
            let mask = chosen.iter().fold(0u64, |m, &i| m | (1 << i));
            if is_circuit_mask(cols, mask) {
                out.push(mask);
            }
        }
        chosen.pop();
    }
}

/// The ten-element regular matroid that is neither graphic nor cographic,
/// with the standard 5×10 GF(2) representation. Labels `r0`..`r9`.
pub fn r10() -> BinaryMatroid {
    const ROWS: [[u8; 10]; 5] = [
        [1, 1, 0, 0, 1, 1, 0, 0, 0, 0],
        [1, 1, 1, 0, 0, 0, 1, 0, 0, 0],
        [0, 1, 1, 1, 0, 0, 0, 1, 0, 0],
        [0, 0, 1, 1, 1, 0, 0, 0, 1, 0],
        [1, 0, 0, 1, 1, 0, 0, 0, 0, 1],
    ];
    let rep = Gf2Matrix::from_rows(10, &ROWS).expect("constant matrix");
    BinaryMatroid::with_prefix("r", rep)
}
