//! 1-, 2- and 3-sums of binary matroids.
//!
//! The sum of `M1` and `M2` sharing `S = E1 ∩ E2` lives on `E1 △ E2`; its
//! cycle space is the projection onto `E1 △ E2` of the pairs of cycles of
//! `M1` and `M2` that agree on `S`. Circuits are the minimal nonempty
//! members of that space.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::linalg::{Gf2Matrix, Gf2Vector};
use crate::matroid::{BinaryMatroid, ElementSet, WeightFn};
use crate::scalar::Bound;
use crate::text::{parse_fields, Lines};

#[derive(Clone, Debug)]
pub struct KSumSpec {
    pub kind: u8,
    pub left: BinaryMatroid,
    pub right: BinaryMatroid,
    /// `(left label, right label)` pairs identified by the sum.
    pub shared: Vec<(String, String)>,
}

/// A circuit of a sum written as `c1 △ c2`. `c1` uses left labels, `c2`
/// right labels; `pivot` is the left label of the shared element both pieces
/// pass through, if any.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CircuitSplit {
    pub c1: ElementSet,
    pub c2: ElementSet,
    pub pivot: Option<String>,
}

pub fn shared_size(kind: u8) -> Result<usize> {
    match kind {
        1 => Ok(0),
        2 => Ok(1),
        3 => Ok(3),
        k => Err(Error::contract(format!("sum kind {k}; expected 1, 2 or 3"))),
    }
}

impl KSumSpec {
    pub fn new(kind: u8, left: BinaryMatroid, right: BinaryMatroid, shared: Vec<(String, String)>) -> Self {
        KSumSpec {
            kind,
            left,
            right,
            shared,
        }
    }

    /// Reads the header file (`kind s`, then `s` lines `left right`) and the
    /// two operand matroid files.
    pub fn parse(header: &str, left: &str, right: &str) -> Result<Self> {
        let mut lines = Lines::new(header);
        let (n, first) = lines.expect_content("header `kind s`")?;
        let ks: Vec<usize> = parse_fields(n, first, 2)?;
        let kind = u8::try_from(ks[0]).map_err(|_| Error::parse(n, "kind out of range"))?;
        let mut shared = Vec::with_capacity(ks[1]);
        for _ in 0..ks[1] {
            let (n, line) = lines.expect_content("shared pair `left right`")?;
            let f: Vec<String> = parse_fields(n, line, 2)?;
            shared.push((f[0].clone(), f[1].clone()));
        }
        if let Some((n, _)) = lines.next_content() {
            return Err(Error::parse(n, "trailing content after the shared pairs"));
        }
        Ok(KSumSpec {
            kind,
            left: BinaryMatroid::parse(left)?,
            right: BinaryMatroid::parse(right)?,
            shared,
        })
    }

    pub fn header_text(&self) -> String {
        let mut out = format!("{} {}\n", self.kind, self.shared.len());
        for (a, b) in &self.shared {
            out.push_str(&format!("{a} {b}\n"));
        }
        out
    }

    pub fn shared_left(&self) -> ElementSet {
        self.shared.iter().map(|(a, _)| a.clone()).collect()
    }

    pub fn shared_right(&self) -> ElementSet {
        self.shared.iter().map(|(_, b)| b.clone()).collect()
    }

    fn right_to_left(&self) -> HashMap<&str, &str> {
        self.shared.iter().map(|(a, b)| (b.as_str(), a.as_str())).collect()
    }

    fn left_to_right(&self) -> HashMap<&str, &str> {
        self.shared.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect()
    }

    /// The right operand with its shared labels renamed to the left ones.
    fn aligned_right(&self) -> Result<BinaryMatroid> {
        let map = self.right_to_left();
        self.right
            .relabel(|l| map.get(l).map_or_else(|| l.to_string(), |a| a.to_string()))
    }

    /// Checks the side conditions of a k-sum.
    pub fn validate(&self) -> Result<()> {
        let s = shared_size(self.kind)?;
        if self.shared.len() != s {
            return Err(Error::contract(format!(
                "{}-sum needs {s} shared pairs, found {}",
                self.kind,
                self.shared.len()
            )));
        }
        let (sl, sr) = (self.shared_left(), self.shared_right());
        if sl.len() != s || sr.len() != s {
            return Err(Error::contract("shared labels repeat"));
        }
        for l in &sl {
            self.left.index_of(l)?;
        }
        for r in &sr {
            self.right.index_of(r)?;
        }
        for (name, m) in [("left", &self.left), ("right", &self.right)] {
            if m.len() < 2 * s + 1 {
                return Err(Error::contract(format!(
                    "{name} operand has {} elements; a {}-sum needs at least {}",
                    m.len(),
                    self.kind,
                    2 * s + 1
                )));
            }
        }
        for l in self.left.labels() {
            if !sl.contains(l) && self.right.contains(l) && !sr.contains(l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let aligned = self.aligned_right()?;
        for l in aligned.labels() {
            if !sl.contains(l) && self.left.contains(l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        for (name, m, set) in [("left", &self.left, &sl), ("right", &self.right, &sr)] {
            let dual = m.dual();
            match self.kind {
                2 => {
                    if m.is_circuit(set)? {
                        return Err(Error::contract(format!("shared element is a loop of the {name} operand")));
                    }
                    if dual.is_circuit(set)? {
                        return Err(Error::contract(format!("shared element is a coloop of the {name} operand")));
                    }
                }
                3 => {
                    if !m.is_circuit(set)? {
                        return Err(Error::contract(format!("shared triple is not a circuit of the {name} operand")));
                    }
                    let items: Vec<&String> = set.iter().collect();
                    for mask in 1u8..8 {
                        let sub: ElementSet = (0..3).filter(|i| mask >> i & 1 == 1).map(|i| items[i].clone()).collect();
                        if dual.is_circuit(&sub)? {
                            return Err(Error::contract(format!(
                                "shared triple contains a cocircuit of the {name} operand"
                            )));
                        }
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// The sum on `E1 △ E2` with `S` taken as the common labels, without the
/// k-sum side conditions. Ground order: `E1 \ S` in left order, then
/// `E2 \ S` in right order.
pub fn general_sum(m1: &BinaryMatroid, m2: &BinaryMatroid) -> Result<BinaryMatroid> {
    let shared: Vec<&String> = m1.labels().iter().filter(|l| m2.contains(l)).collect();
    let a: Vec<&String> = m1.labels().iter().filter(|l| !m2.contains(l)).collect();
    let b: Vec<&String> = m2.labels().iter().filter(|l| !m1.contains(l)).collect();
    let (na, ns, nb) = (a.len(), shared.len(), b.len());
    let mut pos: HashMap<&str, usize> = HashMap::new();
    for (i, l) in a.iter().chain(&shared).chain(&b).enumerate() {
        pos.insert(l.as_str(), i);
    }
    let n = na + ns + nb;
    let (r1, r2) = (m1.rep().n_rows(), m2.rep().n_rows());
    let mut h = Gf2Matrix::zeros(r1 + r2, n);
    for (offset, m) in [(0, m1), (r1, m2)] {
        for (c, l) in m.labels().iter().enumerate() {
            let target = pos[l.as_str()];
            for r in 0..m.rep().n_rows() {
                if m.rep().get(r, c) {
                    h.set(offset + r, target, true);
                }
            }
        }
    }
    let projected: Vec<Gf2Vector> = h
        .kernel_basis()
        .into_iter()
        .map(|z| {
            let keep = z.ones().into_iter().filter(|&i| i < na || i >= na + ns).map(|i| if i < na { i } else { i - ns });
            Gf2Vector::from_indices(na + nb, keep)
        })
        .collect();
    let space = Gf2Matrix::from_row_vectors(na + nb, &projected);
    let normals = space.kernel_basis();
    let rep = Gf2Matrix::from_row_vectors(na + nb, &normals);
    let labels = a.into_iter().chain(b).cloned().collect();
    BinaryMatroid::new(labels, rep)
}

/// The k-sum described by `spec`, after checking its side conditions.
pub fn compose(spec: &KSumSpec) -> Result<BinaryMatroid> {
    spec.validate()?;
    general_sum(&spec.left, &spec.aligned_right()?)
}

/// Every decomposition of `c` as in the circuit lemma for sums: `c` a
/// circuit of one operand avoiding `S`, or `c = C1 △ C2` with circuits
/// meeting `S` in the same single element. For a valid sum there is exactly
/// one.
pub fn split_witnesses(spec: &KSumSpec, c: &ElementSet) -> Result<Vec<CircuitSplit>> {
    let sum = compose(spec)?;
    if !sum.is_circuit(c)? {
        return Err(Error::contract("set is not a circuit of the sum"));
    }
    let left_part: ElementSet = c.iter().filter(|l| spec.left.contains(l)).cloned().collect();
    let to_right = spec.left_to_right();
    let right_part: ElementSet = c.iter().filter(|l| !spec.left.contains(l)).cloned().collect();
    let mut out = Vec::new();
    if right_part.is_empty() && spec.left.is_circuit(&left_part)? {
        out.push(CircuitSplit {
            c1: left_part.clone(),
            c2: ElementSet::new(),
            pivot: None,
        });
    }
    if left_part.is_empty() && spec.right.is_circuit(&right_part)? {
        out.push(CircuitSplit {
            c1: ElementSet::new(),
            c2: right_part.clone(),
            pivot: None,
        });
    }
    for e in spec.shared_left() {
        let mut c1 = left_part.clone();
        c1.insert(e.clone());
        let mut c2 = right_part.clone();
        c2.insert(to_right[e.as_str()].to_string());
        if spec.left.is_circuit(&c1)? && spec.right.is_circuit(&c2)? {
            out.push(CircuitSplit {
                c1,
                c2,
                pivot: Some(e),
            });
        }
    }
    Ok(out)
}

/// The unique decomposition of a circuit of the sum.
pub fn split_circuit(spec: &KSumSpec, c: &ElementSet) -> Result<CircuitSplit> {
    let mut witnesses = split_witnesses(spec, c)?;
    if witnesses.len() != 1 {
        return Err(Error::contract(format!(
            "circuit has {} decompositions; expected exactly one",
            witnesses.len()
        )));
    }
    Ok(witnesses.remove(0))
}

/// Outcome of replaying the light-piece argument for a sum `M = M1 ⊕ M2`
/// under a weight function with girth at least `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GirthSumReport {
    pub r: u64,
    /// `None` when the girth precondition holds; otherwise a circuit of the
    /// sum lighter than `r`.
    pub precondition_witness: Option<ElementSet>,
    /// Per shared element (left label): the circuits `C1` of `M1` with
    /// `C1 ∩ S = {e}` and `w(C1) < r/2`.
    pub light_left: BTreeMap<String, Vec<ElementSet>>,
    /// The derived weights on the right operand (right labels), with shared
    /// elements lacking a unique light piece removed.
    pub right_weights: BTreeMap<String, u64>,
    /// Circuits of the reduced right operand with `w'(C2) < r`.
    pub light_right: Vec<ElementSet>,
}

impl GirthSumReport {
    pub fn precondition_holds(&self) -> bool {
        self.precondition_witness.is_none()
    }

    /// At most one light left piece per shared element.
    pub fn unique_light_pieces(&self) -> bool {
        self.light_left.values().all(|v| v.len() <= 1)
    }

    /// No light circuit in the reweighted right operand.
    pub fn no_light_right_circuit(&self) -> bool {
        self.light_right.is_empty()
    }

    pub fn claims_hold(&self) -> bool {
        !self.precondition_holds() || (self.unique_light_pieces() && self.no_light_right_circuit())
    }
}

/// Replays the light-piece argument: `w` is given on the sum's ground set
/// and extended by zero on `S`; `w'` on `M2` charges each shared element the
/// weight of the unique light piece through it.
pub fn weighted_girth_sum_check(spec: &KSumSpec, w: &WeightFn, r: u64) -> Result<GirthSumReport> {
    let sum = compose(spec)?;
    if w.len() != sum.len() {
        return Err(Error::Dimension(format!("{} weights for {} elements", w.len(), sum.len())));
    }
    let weight_of: HashMap<&str, u64> = sum.labels().iter().map(String::as_str).zip(w.values().iter().copied()).collect();
    let ext = |l: &str| weight_of.get(l).copied().unwrap_or(0);
    let mut report = GirthSumReport {
        r,
        precondition_witness: None,
        light_left: BTreeMap::new(),
        right_weights: BTreeMap::new(),
        light_right: Vec::new(),
    };
    if let Some(c) = sum.circuits_up_to(w, r)?.into_iter().next() {
        report.precondition_witness = Some(c);
        return Ok(report);
    }

    let shared = spec.shared_left();
    let w1 = WeightFn::new(spec.left.labels().iter().map(|l| ext(l)).collect());
    let half = Bound::new(r, 2);
    let left_light = spec.left.circuits_below(&w1, &half)?;
    let mut pieces: BTreeMap<String, Vec<ElementSet>> = shared.iter().map(|e| (e.clone(), Vec::new())).collect();
    for c in left_light {
        let hits: Vec<&String> = c.iter().filter(|l| shared.contains(*l)).collect();
        if let [e] = hits[..] {
            pieces.get_mut(e).expect("shared label").push(c.clone());
        }
    }

    let to_right = spec.left_to_right();
    let mut dropped = ElementSet::new();
    let mut charge: HashMap<String, u64> = HashMap::new();
    for (e, list) in &pieces {
        let right_label = to_right[e.as_str()].to_string();
        match list.as_slice() {
            [c] => {
                charge.insert(right_label, c.iter().map(|l| ext(l)).sum());
            }
            _ => {
                dropped.insert(right_label);
            }
        }
    }
    report.light_left = pieces;

    let reduced = spec.right.delete(&dropped)?;
    let w2: Vec<u64> = reduced
        .labels()
        .iter()
        .map(|l| charge.get(l).copied().unwrap_or_else(|| ext(l)))
        .collect();
    report.right_weights = reduced.labels().iter().cloned().zip(w2.iter().copied()).collect();
    report.light_right = reduced.circuits_up_to(&WeightFn::new(w2), r)?;
    Ok(report)
}

/// Circuit sets of two matroids compared as label sets.
pub fn same_circuits(a: &BinaryMatroid, b: &BinaryMatroid) -> Result<bool> {
    let ca: BTreeSet<ElementSet> = a.circuits()?.into_iter().collect();
    let cb: BTreeSet<ElementSet> = b.circuits()?.into_iter().collect();
    Ok(ca == cb)
}

/// Both association orders of a 2-sum over a 2- or 3-sum: `M1 ⊕2 (M3 △ M4)`
/// against `(M1 ⊕2 M3) △ M4`. Shared elements are the common labels; `M1`
/// meets only `M3`, in one element.
pub fn association_orders(
    m1: &BinaryMatroid,
    m3: &BinaryMatroid,
    m4: &BinaryMatroid,
) -> Result<(BinaryMatroid, BinaryMatroid)> {
    let common = |a: &BinaryMatroid, b: &BinaryMatroid| a.labels().iter().filter(|l| b.contains(l)).count();
    if common(m1, m3) != 1 || common(m1, m4) != 0 || ![1, 3].contains(&common(m3, m4)) {
        return Err(Error::contract(
            "need one label shared by M1 and M3, none by M1 and M4, and 1 or 3 by M3 and M4",
        ));
    }
    let inner_first = general_sum(m1, &general_sum(m3, m4)?)?;
    let outer_first = general_sum(&general_sum(m1, m3)?, m4)?;
    Ok((inner_first, outer_first))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{cographic_matroid, graphic_matroid, WeightedMultigraph};
    use crate::matroid::{element_set, r10};

    fn triangle(prefix: &str) -> BinaryMatroid {
        graphic_matroid(&WeightedMultigraph::complete(3)).relabel(|l| format!("{prefix}{l}")).unwrap()
    }

    fn k4(prefix: &str) -> BinaryMatroid {
        graphic_matroid(&WeightedMultigraph::complete(4)).relabel(|l| format!("{prefix}{l}")).unwrap()
    }

    fn pair(a: &str, b: &str) -> (String, String) {
        (a.to_string(), b.to_string())
    }

    /// Oracle: the literal definition. All cycles of each operand, all pairs
    /// agreeing on `S`, projected, minimal nonempty members.
    fn brute_sum_circuits(spec: &KSumSpec) -> BTreeSet<ElementSet> {
        let cycles = |m: &BinaryMatroid| -> Vec<ElementSet> {
            let basis = m.rep().kernel_basis();
            (0u32..(1 << basis.len()))
                .map(|s| {
                    let mut v = Gf2Vector::zeros(m.len());
                    for (i, b) in basis.iter().enumerate() {
                        if s >> i & 1 == 1 {
                            v.xor_assign(b);
                        }
                    }
                    m.set_of_indices(v.ones())
                })
                .collect()
        };
        let map = spec.right_to_left();
        let rename = |c: &ElementSet| -> ElementSet { c.iter().map(|l| map.get(l.as_str()).map_or(l.clone(), |a| a.to_string())).collect() };
        let s = spec.shared_left();
        let mut members = BTreeSet::new();
        for c1 in cycles(&spec.left) {
            for c2 in cycles(&spec.right).iter().map(rename) {
                let d: ElementSet = c1.symmetric_difference(&c2).cloned().collect();
                if !d.is_empty() && d.is_disjoint(&s) {
                    members.insert(d);
                }
            }
        }
        members
            .iter()
            .filter(|d| !members.iter().any(|e| e.is_subset(d) && e != *d))
            .cloned()
            .collect()
    }

    #[test]
    fn one_sum_of_triangles() {
        let spec = KSumSpec::new(1, triangle("a"), triangle("b"), vec![]);
        let m = compose(&spec).unwrap();
        assert_eq!(
            m.circuits().unwrap(),
            vec![element_set(["ae0", "ae1", "ae2"]), element_set(["be0", "be1", "be2"])]
        );
        for c in m.circuits().unwrap() {
            let split = split_circuit(&spec, &c).unwrap();
            assert!(split.c1.is_empty() || split.c2.is_empty());
        }
    }

    #[test]
    fn two_sum_of_triangles_is_c4() {
        let spec = KSumSpec::new(2, triangle("a"), triangle("b"), vec![pair("ae0", "be0")]);
        let m = compose(&spec).unwrap();
        assert_eq!(m.labels(), &["ae1", "ae2", "be1", "be2"].map(String::from));
        let c4 = graphic_matroid(&WeightedMultigraph::cycle(4));
        assert_eq!(m.circuits().unwrap().len(), 1);
        assert_eq!(c4.circuits().unwrap().len(), 1);
        let c = element_set(["ae1", "ae2", "be1", "be2"]);
        assert_eq!(m.circuits().unwrap(), vec![c.clone()]);
        let split = split_circuit(&spec, &c).unwrap();
        assert_eq!(split.pivot.as_deref(), Some("ae0"));
        assert_eq!(split.c1, element_set(["ae0", "ae1", "ae2"]));
        assert_eq!(split.c2, element_set(["be0", "be1", "be2"]));
    }

    /// K4 with a second copy of edge 23, so that it is large enough for a 3-sum.
    fn k4_plus(prefix: &str) -> BinaryMatroid {
        let g = WeightedMultigraph::from_pairs(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (2, 3)]).unwrap();
        graphic_matroid(&g).relabel(|l| format!("{prefix}{l}")).unwrap()
    }

    fn triangle_pairs() -> Vec<(String, String)> {
        // Edges 01, 02, 12 of K4.
        vec![pair("ae0", "be0"), pair("ae1", "be1"), pair("ae3", "be3")]
    }

    #[test]
    fn k4_sum_over_triangle_matches_definition() {
        // Two K4s are too small for a 3-sum, so only the bare sum applies.
        let spec = KSumSpec::new(3, k4("a"), k4("b"), triangle_pairs());
        assert!(matches!(compose(&spec), Err(Error::Contract(_))));
        let m = general_sum(&spec.left, &spec.aligned_right().unwrap()).unwrap();
        let got: BTreeSet<ElementSet> = m.circuits().unwrap().into_iter().collect();
        assert_eq!(got, brute_sum_circuits(&spec));
    }

    #[test]
    fn three_sum_matches_definition() {
        let spec = KSumSpec::new(3, k4_plus("a"), k4_plus("b"), triangle_pairs());
        let m = compose(&spec).unwrap();
        let got: BTreeSet<ElementSet> = m.circuits().unwrap().into_iter().collect();
        assert_eq!(got, brute_sum_circuits(&spec));
        for c in &got {
            assert_eq!(split_witnesses(&spec, c).unwrap().len(), 1);
        }
        // The two parallel copies form a circuit of one operand avoiding S.
        let par = element_set(["ae5", "ae6"]);
        assert_eq!(
            split_circuit(&spec, &par).unwrap(),
            CircuitSplit { c1: par.clone(), c2: ElementSet::new(), pivot: None }
        );
    }

    #[test]
    fn side_conditions() {
        let mut spec = KSumSpec::new(2, triangle("a"), triangle("b"), vec![]);
        assert!(matches!(compose(&spec), Err(Error::Contract(_))));
        spec.shared = vec![pair("ae0", "zz")];
        assert!(matches!(compose(&spec), Err(Error::UnknownLabel(_))));
        // A pendant edge is a coloop.
        let path = graphic_matroid(&WeightedMultigraph::path(4)).relabel(|l| format!("p{l}")).unwrap();
        let spec = KSumSpec::new(2, path, triangle("b"), vec![pair("pe0", "be0")]);
        assert!(matches!(compose(&spec), Err(Error::Contract(_))));
        // Too small for a 3-sum.
        let spec = KSumSpec::new(3, triangle("a"), k4("b"), vec![pair("ae0", "be0"), pair("ae1", "be1"), pair("ae2", "be3")]);
        assert!(matches!(compose(&spec), Err(Error::Contract(_))));
        // Overlapping non-shared labels.
        let spec = KSumSpec::new(1, triangle("a"), triangle("a"), vec![]);
        assert!(matches!(compose(&spec), Err(Error::DuplicateLabel(_))));
        // In the cographic K4 the triangle is a bond, not a circuit.
        let co = cographic_matroid(&WeightedMultigraph::complete(4)).relabel(|l| format!("c{l}")).unwrap();
        let spec = KSumSpec::new(3, co, k4("b"), vec![pair("ce0", "be0"), pair("ce1", "be1"), pair("ce3", "be3")]);
        assert!(matches!(compose(&spec), Err(Error::Contract(_))));
    }

    #[test]
    fn r10_two_sum_matches_definition() {
        let spec = KSumSpec::new(2, r10(), k4("b"), vec![pair("r0", "be0")]);
        let m = compose(&spec).unwrap();
        let got: BTreeSet<ElementSet> = m.circuits().unwrap().into_iter().collect();
        assert_eq!(got, brute_sum_circuits(&spec));
        for c in &got {
            assert_eq!(split_witnesses(&spec, c).unwrap().len(), 1);
        }
    }

    #[test]
    fn girth_check_examples() {
        let spec = KSumSpec::new(2, triangle("a"), triangle("b"), vec![pair("ae0", "be0")]);
        let w = WeightFn::unit(4);
        let rep = weighted_girth_sum_check(&spec, &w, 4).unwrap();
        assert!(rep.precondition_holds());
        assert!(rep.claims_hold());
        assert!(rep.light_left["ae0"].is_empty());
        // No light piece through the shared element, so it is dropped.
        assert!(!rep.right_weights.contains_key("be0"));
        let one = weighted_girth_sum_check(&spec, &w, 1).unwrap();
        assert!(one.precondition_holds() && one.claims_hold());
        let five = weighted_girth_sum_check(&spec, &w, 5).unwrap();
        assert!(!five.precondition_holds());

        // Heavier left path makes the right triangle light through be0.
        let w = WeightFn::new(vec![1, 1, 5, 5]);
        let rep = weighted_girth_sum_check(&spec, &w, 12).unwrap();
        assert!(rep.precondition_holds());
        assert_eq!(rep.light_left["ae0"], vec![element_set(["ae0", "ae1", "ae2"])]);
        assert_eq!(rep.right_weights["be0"], 2);
        assert!(rep.claims_hold());
    }

    #[test]
    fn spec_file_round_trip() {
        let spec = KSumSpec::new(2, triangle("a"), triangle("b"), vec![pair("ae0", "be0")]);
        let back = KSumSpec::parse(&spec.header_text(), &spec.left.to_text(), &spec.right.to_text()).unwrap();
        assert_eq!(back.kind, 2);
        assert_eq!(back.shared, spec.shared);
        assert!(same_circuits(&compose(&back).unwrap(), &compose(&spec).unwrap()).unwrap());
        assert!(matches!(KSumSpec::parse("2 1\n", "", ""), Err(Error::Parse { .. })));
    }
}
