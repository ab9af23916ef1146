//! Isolating weight assignments for explicit set families.
//!
//! A family `B ⊆ 2^E` is viewed through its 0/1 polytope: a weight vector
//! minimizes over a face, and `L_F` is the lattice of integer vectors
//! parallel to face `F`. The construction refines a weight vector round by
//! round, `w_i = mN·w_{i-1} + w'_i`, where each `w'_i` is drawn from a
//! modular family that avoids every short vector of the current face
//! lattice. The family is black-box: it is built from `m`, `c` and a count
//! bound `k` only, and a candidate is a choice of one modular vector per
//! round.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graphs::WeightedMultigraph;
use crate::linalg::{rational_rref, IntVector};
use crate::scalar::{below, Bound, IntScalar};
use crate::text::{parse_fields, Lines};
use crate::tulattice::{l1_ball_size, max_norm_below, MAX_SCAN_POINTS};

/// A family of distinct subsets of `{0, ..., m-1}`, each stored sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubsetFamily {
    m: usize,
    members: Vec<Vec<usize>>,
}

impl SubsetFamily {
    pub fn new(m: usize, members: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(members.len());
        for mut s in members {
            s.sort_unstable();
            if s.windows(2).any(|p| p[0] == p[1]) {
                return Err(Error::contract(format!("member {s:?} repeats an element")));
            }
            if let Some(&x) = s.iter().find(|&&x| x >= m) {
                return Err(Error::Dimension(format!("element {x} outside 0..{m}")));
            }
            if !seen.insert(s.clone()) {
                return Err(Error::contract(format!("member {s:?} listed twice")));
            }
            out.push(s);
        }
        Ok(SubsetFamily { m, members: out })
    }

    pub fn ground_size(&self) -> usize {
        self.m
    }

    pub fn members(&self) -> &[Vec<usize>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Indicator vector of member `i`.
    pub fn vertex(&self, i: usize) -> Vec<u8> {
        let mut x = vec![0; self.m];
        for &e in &self.members[i] {
            x[e] = 1;
        }
        x
    }

    fn subfamily(&self, keep: impl Fn(&[usize]) -> bool) -> SubsetFamily {
        SubsetFamily {
            m: self.m,
            members: self.members.iter().filter(|s| keep(s)).cloned().collect(),
        }
    }

    pub fn contains_family(&self, other: &SubsetFamily) -> bool {
        other.members.iter().all(|s| self.members.contains(s))
    }

    /// Family file: `m k`, then `k` lines of element indices; an empty line
    /// is the empty set.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = Lines::new(text);
        let (n, header) = lines.expect_content("family header `m k`")?;
        let mk: Vec<usize> = parse_fields(n, header, 2)?;
        let mut members = Vec::with_capacity(mk[1]);
        for _ in 0..mk[1] {
            let (n, line) = lines
                .next_raw()
                .ok_or_else(|| Error::parse(n, "unexpected end of input, expected a member line"))?;
            let count = line.split_whitespace().count();
            members.push(parse_fields(n, line, count)?);
        }
        if let Some((n, _)) = lines.next_content() {
            return Err(Error::parse(n, "trailing content after the last member"));
        }
        Self::new(mk[0], members)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.m, self.members.len());
        for s in &self.members {
            let items: Vec<String> = s.iter().map(usize::to_string).collect();
            out.push_str(&items.join(" "));
            out.push('\n');
        }
        out
    }
}

fn check_weights<T>(b: &SubsetFamily, w: &[T]) -> Result<()> {
    if w.len() != b.m {
        return Err(Error::Dimension(format!("{} weights for ground size {}", w.len(), b.m)));
    }
    Ok(())
}

pub fn member_weight<T: IntScalar>(member: &[usize], w: &[T]) -> T {
    member.iter().fold(T::zero(), |acc, &e| acc + w[e].clone())
}

/// The members of minimum weight: the vertices of the minimizing face.
pub fn min_face<T: IntScalar>(b: &SubsetFamily, w: &[T]) -> Result<SubsetFamily> {
    check_weights(b, w)?;
    let best = b
        .members
        .iter()
        .map(|s| member_weight(s, w))
        .min()
        .ok_or_else(|| Error::contract("empty family"))?;
    Ok(b.subfamily(|s| member_weight(s, w) == best))
}

/// Whether `w` has a unique minimum-weight member.
pub fn is_isolating<T: IntScalar>(b: &SubsetFamily, w: &[T]) -> Result<bool> {
    if b.len() == 1 {
        check_weights(b, w)?;
        return Ok(true);
    }
    Ok(min_face(b, w)?.len() == 1)
}

/// All perfect matchings of a bipartite multigraph, as edge-index sets.
pub fn bipartite_pm_family(g: &WeightedMultigraph) -> Result<SubsetFamily> {
    let n = g.n_vertices();
    let mut side: Vec<Option<bool>> = vec![None; n];
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, e) in g.edges().iter().enumerate() {
        if e.is_loop() {
            return Err(Error::contract("graph has a self-loop; not bipartite"));
        }
        adj[e.u].push((i, e.v));
        adj[e.v].push((i, e.u));
    }
    for s in 0..n {
        if side[s].is_some() {
            continue;
        }
        side[s] = Some(false);
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            let sx = side[x].expect("coloured before push");
            for &(_, y) in &adj[x] {
                match side[y] {
                    None => {
                        side[y] = Some(!sx);
                        stack.push(y);
                    }
                    Some(sy) if sy == sx => return Err(Error::contract("graph is not bipartite")),
                    Some(_) => {}
                }
            }
        }
    }
    let mut out = Vec::new();
    if n.is_multiple_of(2) {
        let mut matched = vec![false; n];
        let mut chosen = Vec::new();
        extend_matching(&adj, &mut matched, &mut chosen, &mut out);
    }
    out.sort();
    SubsetFamily::new(g.n_edges(), out)
}

fn extend_matching(
    adj: &[Vec<(usize, usize)>],
    matched: &mut [bool],
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let Some(v) = matched.iter().position(|&x| !x) else {
        out.push(chosen.clone());
        return;
    };
    matched[v] = true;
    for &(e, u) in &adj[v] {
        if !matched[u] {
            matched[u] = true;
            chosen.push(e);
            extend_matching(adj, matched, chosen, out);
            chosen.pop();
            matched[u] = false;
        }
    }
    matched[v] = false;
}

/// The modular weight family: `(1, t, ..., t^{m-1}) mod j` for
/// `j = 2, ..., q`, where `q` is the least integer with `2^q ≥ t^{mk}`,
/// raised to at least 7. For any `k` nonzero vectors with entries in
/// `(-t, t)` some member has nonzero inner product with all of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FksFamily {
    pub m: usize,
    pub k: u64,
    pub t: u64,
    pub q: u64,
    /// `vectors[j - 2]` is the member for modulus `j`.
    pub vectors: Vec<Vec<u64>>,
}

impl FksFamily {
    pub fn member(&self, j: u64) -> &[u64] {
        &self.vectors[(j - 2) as usize]
    }

    pub fn moduli(&self) -> std::ops::RangeInclusive<u64> {
        2..=self.q
    }
}

/// Least `q ≥ 7` with `2^q ≥ t^{mk}`.
pub fn fks_q(m: usize, k: u64, t: u64) -> u64 {
    let power = BigUint::from(t).pow((m as u64 * k) as u32);
    let bits = power.bits();
    let exact = if power.is_zero() || power.is_one() {
        0
    } else if power.trailing_zeros() == Some(bits - 1) {
        bits - 1
    } else {
        bits
    };
    exact.max(7)
}

pub fn fks_family(m: usize, k: u64, t: u64) -> Result<FksFamily> {
    if m == 0 || k == 0 || t == 0 {
        return Err(Error::contract("m, k and t must be at least 1"));
    }
    let q = fks_q(m, k, t);
    let vectors = (2..=q)
        .map(|j| {
            let mut x = 1 % j;
            (0..m)
                .map(|_| {
                    let cur = x;
                    x = ((x as u128 * t as u128) % j as u128) as u64;
                    cur
                })
                .collect()
        })
        .collect();
    Ok(FksFamily { m, k, t, q, vectors })
}

fn ratio_pow(c: &Bound, e: u32) -> Ratio<BigUint> {
    Ratio::new(BigUint::from(*c.numer()).pow(e), BigUint::from(*c.denom()).pow(e))
}

/// `c^e` as an exact bound, if it fits.
pub fn bound_pow(c: &Bound, e: u32) -> Result<Bound> {
    let r = ratio_pow(c, e);
    match (r.numer().to_u64(), r.denom().to_u64()) {
        (Some(n), Some(d)) => Ok(Bound::new(n, d)),
        _ => Err(Error::guard(format!("c^{e} does not fit in 64 bits"))),
    }
}

/// Parameters and per-round choices of the candidate family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFamily {
    pub m: usize,
    pub c: Bound,
    /// Number of refinement rounds: the largest `p` with `c^p ≤ m + 1`.
    pub p: u32,
    /// Entry bound for vectors the per-round choice must avoid.
    pub t: u64,
    /// Scale between rounds is `m·N`.
    pub n_scale: u64,
    pub w0: Vec<u64>,
    pub fks: FksFamily,
}

/// One member of the family: a modulus per round and the assembled weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub choices: Vec<u64>,
    pub weights: Vec<BigInt>,
}

/// Builds the candidate family for ground size `m`, ratio `c > 1` and a
/// bound `k` on the number of short vectors per face lattice. The family
/// does not depend on any particular set family.
pub fn build_family(m: usize, c: Bound, k: u64) -> Result<WeightFamily> {
    if c <= Bound::one() {
        return Err(Error::contract(format!("c = {c}; need c > 1")));
    }
    if m == 0 {
        return Err(Error::contract("ground size must be at least 1"));
    }
    let limit = Ratio::from_integer(BigUint::from(m as u64 + 1));
    let mut p = 0u32;
    while ratio_pow(&c, p + 1) <= limit {
        p += 1;
    }
    let t = (c * Bound::from_integer(m as u64 + 1)).ceil().to_integer();
    let fks = fks_family(m, k.max(1), t)?;
    let w0 = if c <= Bound::from_integer(2) {
        vec![1; m]
    } else {
        let base = c.ceil().to_integer();
        let mut x = 1u64;
        (0..m)
            .map(|_| {
                let cur = x;
                x = x.saturating_mul(base);
                cur
            })
            .collect()
    };
    Ok(WeightFamily {
        m,
        c,
        p,
        t,
        n_scale: fks.q + 1,
        w0,
        fks,
    })
}

impl WeightFamily {
    /// Number of candidates, `(q - 1)^p`.
    pub fn candidate_count(&self) -> BigUint {
        BigUint::from(self.fks.q - 1).pow(self.p)
    }

    /// `(mN)^{p+1} · q`, an upper bound on every candidate weight.
    pub fn weight_bound(&self) -> BigUint {
        BigUint::from(self.m as u64 * self.n_scale).pow(self.p + 1) * BigUint::from(self.fks.q)
    }

    fn scale(&self) -> BigInt {
        BigInt::from(self.m as u64 * self.n_scale)
    }

    /// `mN·w + w'`.
    pub fn refine(&self, w: &[BigInt], w_prime: &[BigInt]) -> Vec<BigInt> {
        let s = self.scale();
        w.iter().zip(w_prime).map(|(a, b)| &s * a + b).collect()
    }

    pub fn w0(&self) -> Vec<BigInt> {
        self.w0.iter().map(|&x| BigInt::from(x)).collect()
    }

    pub fn round_vector(&self, j: u64) -> Vec<BigInt> {
        self.fks.member(j).iter().map(|&x| BigInt::from(x)).collect()
    }

    pub fn assemble(&self, choices: &[u64]) -> Result<Candidate> {
        if choices.len() != self.p as usize {
            return Err(Error::Dimension(format!("{} choices for {} rounds", choices.len(), self.p)));
        }
        let mut w = self.w0();
        for &j in choices {
            if !(2..=self.fks.q).contains(&j) {
                return Err(Error::contract(format!("modulus {j} outside 2..={}", self.fks.q)));
            }
            w = self.refine(&w, &self.round_vector(j));
        }
        Ok(Candidate {
            choices: choices.to_vec(),
            weights: w,
        })
    }

    /// Choices of the candidate at position `index` in lexicographic order.
    pub fn choices_at(&self, index: &BigUint) -> Option<Vec<u64>> {
        if *index >= self.candidate_count() {
            return None;
        }
        let radix = BigUint::from(self.fks.q - 1);
        let mut rest = index.clone();
        let mut out = vec![0; self.p as usize];
        for slot in out.iter_mut().rev() {
            let (d, r) = rest.div_rem(&radix);
            *slot = r.to_u64().expect("digit below q") + 2;
            rest = d;
        }
        Some(out)
    }

    /// Lazy lexicographic walk over all candidate choices.
    pub fn choices(&self) -> ChoiceIter {
        ChoiceIter {
            q: self.fks.q,
            next: Some(vec![2; self.p as usize]),
        }
    }
}

/// Mixed-radix counter over `{2..=q}^p`; cloneable for sharding.
#[derive(Clone, Debug)]
pub struct ChoiceIter {
    q: u64,
    next: Option<Vec<u64>>,
}

impl Iterator for ChoiceIter {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if succ[i] < self.q {
                succ[i] += 1;
                self.next = Some(succ);
                break;
            }
            succ[i] = 2;
        }
        Some(cur)
    }
}

/// Short vectors of the lattice of a face: integer vectors in the rational
/// span of the differences of its vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceLatticeProbe {
    pub face: SubsetFamily,
    /// Primitive integer vectors spanning the direction space of the face.
    pub basis: Vec<IntVector<BigInt>>,
    pub bound: Bound,
    pub short_vectors: Vec<IntVector<BigInt>>,
}

impl FaceLatticeProbe {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Least norm among the listed vectors; `None` if there are none.
    pub fn shortest(&self) -> Option<u64> {
        self.short_vectors.iter().filter_map(|v| v.l1_norm_u64()).min()
    }
}

/// Every nonzero integer vector of `L_F` with `‖v‖1 < bound`. A vector of
/// the span is fixed by its pivot coordinates in the reduced basis, and those
/// coordinates have ℓ1 norm at most `‖v‖1`, so scanning them is exhaustive.
pub fn face_lattice_short_vectors(face: &SubsetFamily, bound: &Bound) -> Result<FaceLatticeProbe> {
    let m = face.ground_size();
    if face.is_empty() {
        return Err(Error::contract("empty face"));
    }
    let x0 = face.vertex(0);
    let diffs: Vec<Vec<Ratio<BigInt>>> = (1..face.len())
        .map(|i| {
            face.vertex(i)
                .iter()
                .zip(&x0)
                .map(|(&a, &b)| Ratio::from_integer(BigInt::from(i64::from(a) - i64::from(b))))
                .collect()
        })
        .collect();
    let (rows, pivots) = rational_rref(diffs, m);
    let basis: Vec<IntVector<BigInt>> = rows
        .iter()
        .map(|r| crate::linalg::primitive_integer_vector(r))
        .collect();

    // Rows over a common denominator, as i128 numerators.
    let denom = rows
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let to_i128 = |x: BigInt| {
        x.to_i128()
            .ok_or_else(|| Error::guard("face basis entries exceed 128 bits"))
    };
    let d = to_i128(denom.clone())?;
    let numer: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| to_i128(x.numer() * (&denom / x.denom())))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut short_vectors = Vec::new();
    if let Some(radius) = max_norm_below(bound) {
        let dim = pivots.len();
        let points = l1_ball_size(dim, radius);
        if points > MAX_SCAN_POINTS {
            return Err(Error::guard(format!(
                "{points} lattice points; face scan visits at most {MAX_SCAN_POINTS}"
            )));
        }
        let mut coeffs = vec![0i64; dim];
        scan_face(&numer, d, bound, 0, radius, &mut coeffs, &mut short_vectors);
    }
    short_vectors.sort();
    Ok(FaceLatticeProbe {
        face: face.clone(),
        basis,
        bound: *bound,
        short_vectors,
    })
}

fn scan_face(
    numer: &[Vec<i128>],
    d: i128,
    bound: &Bound,
    i: usize,
    budget: u64,
    coeffs: &mut Vec<i64>,
    out: &mut Vec<IntVector<BigInt>>,
) {
    if i == coeffs.len() {
        if coeffs.iter().all(|&c| c == 0) {
            return;
        }
        let m = numer.first().map_or(0, Vec::len);
        let mut v = Vec::with_capacity(m);
        let mut norm: u64 = 0;
        for col in 0..m {
            let s: i128 = numer.iter().zip(coeffs.iter()).map(|(row, &c)| row[col] * c as i128).sum();
            if s % d != 0 {
                return;
            }
            let x = s / d;
            norm += x.unsigned_abs() as u64;
            v.push(BigInt::from(x));
        }
        if below(norm, bound) {
            out.push(IntVector(v));
        }
        return;
    }
    let b = budget as i64;
    for c in -b..=b {
        coeffs[i] = c;
        scan_face(numer, d, bound, i + 1, budget - c.unsigned_abs(), coeffs, out);
    }
    coeffs[i] = 0;
}

/// Nonzero vectors of `L_{P(B)}` with norm below `c^{p+1}`: a count that
/// bounds the short vectors of every face lattice met by the rounds.
pub fn measured_k(b: &SubsetFamily, c: &Bound) -> Result<u64> {
    if b.is_empty() {
        return Err(Error::contract("empty family"));
    }
    let m = b.ground_size();
    let p = build_family(m, *c, 1)?.p;
    let probe = face_lattice_short_vectors(b, &bound_pow(c, p + 1)?)?;
    Ok(probe.short_vectors.len() as u64)
}

fn hits_all(w: &[BigInt], vectors: &[IntVector<BigInt>]) -> bool {
    vectors.iter().all(|v| {
        let dot: BigInt = v.0.iter().zip(w).map(|(a, b)| a * b).sum();
        !dot.is_zero()
    })
}

/// Result of searching the family for an isolating candidate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub candidate: Option<Candidate>,
    /// Candidates tested with the isolation check.
    pub evaluated: u64,
}

/// Looks for an isolating member of `family` for `b`, testing at most
/// `max_candidates`. The first test is the candidate whose round choices
/// each hit all short vectors of the current face lattice (falling back to
/// the smallest next face); the rest follow lexicographic order.
pub fn find_isolating(b: &SubsetFamily, family: &WeightFamily, max_candidates: u64) -> Result<SearchOutcome> {
    if b.is_empty() {
        return Err(Error::contract("empty family"));
    }
    if b.ground_size() != family.m {
        return Err(Error::Dimension(format!(
            "family of ground size {} against weights for {}",
            b.ground_size(),
            family.m
        )));
    }
    let mut evaluated = 0;
    if max_candidates == 0 {
        return Ok(SearchOutcome { candidate: None, evaluated });
    }
    let guided = guided_choices(b, family)?;
    let cand = family.assemble(&guided)?;
    evaluated += 1;
    if is_isolating(b, &cand.weights)? {
        return Ok(SearchOutcome {
            candidate: Some(cand),
            evaluated,
        });
    }
    for choices in family.choices() {
        if evaluated >= max_candidates {
            break;
        }
        if choices == guided {
            continue;
        }
        let cand = family.assemble(&choices)?;
        evaluated += 1;
        if is_isolating(b, &cand.weights)? {
            return Ok(SearchOutcome {
                candidate: Some(cand),
                evaluated,
            });
        }
    }
    Ok(SearchOutcome { candidate: None, evaluated })
}

fn guided_choices(b: &SubsetFamily, family: &WeightFamily) -> Result<Vec<u64>> {
    let mut w = family.w0();
    let mut choices = Vec::with_capacity(family.p as usize);
    for i in 1..=family.p {
        let face = min_face(b, &w)?;
        let probe = face_lattice_short_vectors(&face, &bound_pow(&family.c, i + 1)?)?;
        let pick = family
            .fks
            .moduli()
            .find(|&j| hits_all(&family.round_vector(j), &probe.short_vectors));
        let j = match pick {
            Some(j) => j,
            None => {
                let mut best = (usize::MAX, 2);
                for j in family.fks.moduli() {
                    let next = min_face(&face, &family.refine(&w, &family.round_vector(j)))?;
                    if next.len() < best.0 {
                        best = (next.len(), j);
                    }
                }
                best.1
            }
        };
        w = family.refine(&w, &family.round_vector(j));
        choices.push(j);
    }
    Ok(choices)
}

/// Checks for one refinement round `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundTrace {
    pub round: u32,
    /// Modulus chosen this round; `None` for injected weights.
    pub choice: Option<u64>,
    pub face_before: usize,
    pub face_after: usize,
    /// The new face lies inside the previous one.
    pub subface: bool,
    /// The previous weights vanish on every probed vector of the previous face lattice.
    pub parallel: bool,
    /// The round vector is nonzero on every vector of the previous face
    /// lattice below `c^{i+1}`.
    pub hits_all: bool,
    /// The new face lattice has no nonzero vector below `c^{i+1}`.
    pub lambda_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceChainTrace {
    /// Round zero: the face lattice of `w_0` has no nonzero vector below `c`.
    pub initial_lambda_ok: bool,
    pub rounds: Vec<RoundTrace>,
    pub final_face: usize,
}

impl FaceChainTrace {
    pub fn subfaces_ok(&self) -> bool {
        self.rounds.iter().all(|r| r.subface)
    }

    pub fn parallel_ok(&self) -> bool {
        self.rounds.iter().all(|r| r.parallel)
    }

    /// Every face lattice reaches its norm threshold.
    pub fn lambda_ok(&self) -> bool {
        self.initial_lambda_ok && self.rounds.iter().all(|r| r.lambda_ok)
    }

    /// Whenever a round vector hits all short vectors, the threshold is met.
    pub fn lambda_implication_ok(&self) -> bool {
        self.initial_lambda_ok && self.rounds.iter().all(|r| !r.hits_all || r.lambda_ok)
    }

    pub fn final_is_point(&self) -> bool {
        self.final_face == 1
    }
}

impl fmt::Display for FaceChainTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "round 0 lambda_ok {}", self.initial_lambda_ok)?;
        for r in &self.rounds {
            let choice = r.choice.map_or_else(|| "custom".to_string(), |j| j.to_string());
            writeln!(
                f,
                "round {} choice {} face {} -> {} subface {} parallel {} hits_all {} lambda_ok {}",
                r.round, choice, r.face_before, r.face_after, r.subface, r.parallel, r.hits_all, r.lambda_ok
            )?;
        }
        writeln!(f, "final_face {}", self.final_face)
    }
}

/// Replays the rounds of `candidate` on `b` and records every check.
pub fn verify_face_chain(b: &SubsetFamily, family: &WeightFamily, choices: &[u64]) -> Result<FaceChainTrace> {
    family.assemble(choices)?;
    let rounds: Vec<(Option<u64>, Vec<BigInt>)> = choices.iter().map(|&j| (Some(j), family.round_vector(j))).collect();
    replay_chain(b, family, family.w0(), &rounds)
}

/// As [`verify_face_chain`] with arbitrary starting and round weights.
pub fn verify_custom_chain(
    b: &SubsetFamily,
    family: &WeightFamily,
    w0: Vec<BigInt>,
    rounds: &[Vec<BigInt>],
) -> Result<FaceChainTrace> {
    let rounds: Vec<(Option<u64>, Vec<BigInt>)> = rounds.iter().map(|w| (None, w.clone())).collect();
    replay_chain(b, family, w0, &rounds)
}

fn replay_chain(
    b: &SubsetFamily,
    family: &WeightFamily,
    w0: Vec<BigInt>,
    rounds: &[(Option<u64>, Vec<BigInt>)],
) -> Result<FaceChainTrace> {
    check_weights(b, &w0)?;
    let mut w = w0;
    let mut face = min_face(b, &w)?;
    let initial = face_lattice_short_vectors(&face, &family.c)?;
    let mut trace = FaceChainTrace {
        initial_lambda_ok: initial.short_vectors.is_empty(),
        rounds: Vec::with_capacity(rounds.len()),
        final_face: face.len(),
    };
    for (i, (choice, w_prime)) in rounds.iter().enumerate() {
        check_weights(b, w_prime)?;
        let round = i as u32 + 1;
        let threshold = bound_pow(&family.c, round + 1)?;
        let before = face_lattice_short_vectors(&face, &threshold)?;
        let parallel = before.short_vectors.iter().all(|v| {
            let dot: BigInt = v.0.iter().zip(&w).map(|(a, b)| a * b).sum();
            dot.is_zero()
        });
        let hits = hits_all(w_prime, &before.short_vectors);
        let next_w = family.refine(&w, w_prime);
        let next_face = min_face(b, &next_w)?;
        let after = face_lattice_short_vectors(&next_face, &threshold)?;
        trace.rounds.push(RoundTrace {
            round,
            choice: *choice,
            face_before: face.len(),
            face_after: next_face.len(),
            subface: face.contains_family(&next_face),
            parallel,
            hits_all: hits,
            lambda_ok: after.short_vectors.is_empty(),
        });
        w = next_w;
        face = next_face;
    }
    trace.final_face = face.len();
    Ok(trace)
}

/// Whether every set of at most `k` nonzero vectors in `(-t, t)^m` is hit
/// by some member of the modular family, checked exhaustively.
pub fn fks_guarantee_holds(m: usize, k: u64, t: u64) -> Result<bool> {
    let fam = fks_family(m, k, t)?;
    if fam.q - 1 > 128 {
        return Err(Error::guard("more than 128 moduli"));
    }
    let side = 2 * t - 1;
    let total = (side as u128).pow(m as u32);
    if total > 100_000 {
        return Err(Error::guard(format!("{total} vectors in the box")));
    }
    let mut masks: Vec<u128> = Vec::new();
    for code in 0..total {
        let mut c = code;
        let v: Vec<i64> = (0..m)
            .map(|_| {
                let x = (c % side as u128) as i64 - (t as i64 - 1);
                c /= side as u128;
                x
            })
            .collect();
        if v.iter().all(|&x| x == 0) {
            continue;
        }
        let mut mask = 0u128;
        for j in fam.moduli() {
            let dot: i128 = fam
                .member(j)
                .iter()
                .zip(&v)
                .map(|(&w, &x)| w as i128 * x as i128)
                .sum();
            if dot != 0 {
                mask |= 1 << (j - 2);
            }
        }
        masks.push(mask);
    }
    let full: u128 = if fam.q - 1 == 128 { u128::MAX } else { (1u128 << (fam.q - 1)) - 1 };
    Ok(all_subsets_hit(&masks, k as usize, 0, full))
}

fn all_subsets_hit(masks: &[u128], k: usize, start: usize, acc: u128) -> bool {
    if acc == 0 {
        return false;
    }
    if k == 0 {
        return true;
    }
    (start..masks.len()).all(|i| all_subsets_hit(masks, k - 1, i + 1, acc & masks[i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn fam(m: usize, members: &[&[usize]]) -> SubsetFamily {
        SubsetFamily::new(m, members.iter().map(|s| s.to_vec()).collect()).unwrap()
    }

    fn big(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// K_{2,2} with edges 11', 12', 21', 22'.
    fn k22() -> WeightedMultigraph {
        WeightedMultigraph::from_pairs(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap()
    }

    #[test]
    fn fks_examples() {
        let f = fks_family(3, 1, 2).unwrap();
        assert_eq!(f.member(5), &[1, 2, 4]);
        assert_eq!(f.member(3), &[1, 2, 1]);
        assert_eq!(f.q, 7);
        assert_eq!(fks_q(4, 3, 3), 20);
        assert_eq!(fks_q(2, 2, 4), 8);
        assert_eq!(fks_q(1, 1, 1), 7);
        assert!(fks_guarantee_holds(3, 3, 2).unwrap());
    }

    #[test]
    fn min_face_examples() {
        let b = fam(2, &[&[0], &[1]]);
        assert_eq!(min_face(&b, &[0i64, 0]).unwrap(), b);
        assert_eq!(min_face(&b, &[1i64, 2]).unwrap().members(), &[vec![0]]);
        let pm = bipartite_pm_family(&k22()).unwrap();
        assert_eq!(min_face(&pm, &[0i64, 1, 1, 0]).unwrap().members(), &[vec![0, 3]]);
        assert!(min_face(&fam(2, &[]), &[0i64, 0]).is_err());
    }

    #[test]
    fn isolation_examples() {
        assert!(is_isolating(&fam(3, &[&[1]]), &[0i64, 0, 0]).unwrap());
        assert!(!is_isolating(&fam(1, &[&[], &[0]]), &[0i64]).unwrap());
        let pm = bipartite_pm_family(&k22()).unwrap();
        assert!(is_isolating(&pm, &[0i64, 1, 1, 0]).unwrap());
        assert!(is_isolating(&fam(2, &[]), &[0i64, 0]).is_err());
    }

    #[test]
    fn matching_families() {
        assert_eq!(bipartite_pm_family(&k22()).unwrap().len(), 2);
        let k33 = WeightedMultigraph::from_pairs(
            6,
            &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)],
        )
        .unwrap();
        assert_eq!(bipartite_pm_family(&k33).unwrap().len(), 6);
        assert!(bipartite_pm_family(&WeightedMultigraph::path(3)).unwrap().is_empty());
        assert!(bipartite_pm_family(&WeightedMultigraph::complete(3)).is_err());
    }

    #[test]
    fn face_probe_examples() {
        let single = face_lattice_short_vectors(&fam(3, &[&[0, 1]]), &Bound::from_integer(5)).unwrap();
        assert!(single.short_vectors.is_empty());
        assert_eq!(single.dimension(), 0);

        let axis = face_lattice_short_vectors(&fam(2, &[&[], &[0]]), &Bound::from_integer(2)).unwrap();
        let expect: Vec<IntVector<BigInt>> = vec![IntVector(big(&[-1, 0])), IntVector(big(&[1, 0]))];
        assert_eq!(axis.short_vectors, expect);

        let pm = bipartite_pm_family(&k22()).unwrap();
        let probe = face_lattice_short_vectors(&pm, &Bound::from_integer(5)).unwrap();
        let expect: Vec<IntVector<BigInt>> = vec![IntVector(big(&[-1, 1, 1, -1])), IntVector(big(&[1, -1, -1, 1]))];
        assert_eq!(probe.short_vectors, expect);
        assert_eq!(probe.shortest(), Some(4));
    }

    #[test]
    fn family_parameters() {
        let f = build_family(1, Bound::new(3, 2), 1).unwrap();
        assert_eq!(f.p, 1);
        assert_eq!(f.t, 3);
        let f = build_family(4, Bound::new(3, 2), 2).unwrap();
        // 1.5^3 = 3.375 ≤ 5 < 1.5^4.
        assert_eq!(f.p, 3);
        assert_eq!(f.t, 8);
        assert_eq!(f.n_scale, f.fks.q + 1);
        assert_eq!(f.w0, vec![1; 4]);
        assert_eq!(f.candidate_count(), BigUint::from(f.fks.q - 1).pow(3));
        let all: Vec<Vec<u64>> = build_family(2, Bound::new(3, 2), 1).unwrap().choices().collect();
        assert_eq!(all.len(), 6usize.pow(2));
        assert!(build_family(3, Bound::one(), 1).is_err());
    }

    #[test]
    fn choice_indexing_matches_iteration() {
        let f = build_family(2, Bound::new(3, 2), 1).unwrap();
        for (i, ch) in f.choices().enumerate() {
            assert_eq!(f.choices_at(&BigUint::from(i)).unwrap(), ch);
        }
        assert!(f.choices_at(&f.candidate_count()).is_none());
    }

    #[test]
    fn candidate_weights_respect_bound() {
        let f = build_family(4, Bound::new(3, 2), 2).unwrap();
        let bound = BigInt::from(f.weight_bound());
        for ch in f.choices().step_by(97) {
            let c = f.assemble(&ch).unwrap();
            assert!(c.weights.iter().all(|x| !x.is_negative() && *x <= bound));
        }
    }

    #[test]
    fn k22_search_and_chain() {
        let pm = bipartite_pm_family(&k22()).unwrap();
        let c = Bound::new(3, 2);
        let k = measured_k(&pm, &c).unwrap();
        assert_eq!(k, 2);
        let f = build_family(4, c, k).unwrap();
        let found = find_isolating(&pm, &f, 1000).unwrap();
        let cand = found.candidate.expect("an isolating candidate");
        assert!(is_isolating(&pm, &cand.weights).unwrap());
        let trace = verify_face_chain(&pm, &f, &cand.choices).unwrap();
        assert!(trace.subfaces_ok() && trace.parallel_ok() && trace.final_is_point());
        assert!(trace.lambda_implication_ok());

        let none = find_isolating(&pm, &f, 0).unwrap();
        assert_eq!(none, SearchOutcome { candidate: None, evaluated: 0 });
    }

    #[test]
    fn zero_weights_fail_lambda_check() {
        let pm = bipartite_pm_family(&k22()).unwrap();
        let f = build_family(4, Bound::new(3, 2), 2).unwrap();
        let zeros = vec![BigInt::zero(); 4];
        let rounds = vec![zeros.clone(); f.p as usize];
        let trace = verify_custom_chain(&pm, &f, zeros, &rounds).unwrap();
        assert!(!trace.lambda_ok());
        assert!(!trace.final_is_point());
        assert!(trace.subfaces_ok());
    }

    #[test]
    fn single_member_chain_is_trivial() {
        let b = fam(3, &[&[0, 2]]);
        let f = build_family(3, Bound::new(3, 2), 1).unwrap();
        let choices: Vec<u64> = vec![2; f.p as usize];
        let trace = verify_face_chain(&b, &f, &choices).unwrap();
        assert!(trace.lambda_ok() && trace.final_is_point());
    }

    #[test]
    fn family_file_round_trip() {
        let b = fam(3, &[&[], &[0, 2], &[1]]);
        assert_eq!(SubsetFamily::parse(&b.to_text()).unwrap(), b);
        assert!(SubsetFamily::parse("2 1\n0 5\n").is_err());
        assert!(SubsetFamily::parse("2 2\n0\n0\n").is_err());
        assert!(matches!(SubsetFamily::parse("2 2\n0\n"), Err(Error::Parse { .. })));
    }
}
