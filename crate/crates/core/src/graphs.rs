//! Weighted multigraphs as the substrate of graphic and cographic matroids:
//! exact enumeration of light cycles and bonds, plus the randomized
//! contraction procedure that samples small cut-sets.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::Gf2Matrix;
use crate::matroid::{BinaryMatroid, ElementSet, WeightFn};
use crate::scalar::{below, Bound};
use crate::text::{parse_fields, Lines};

/// Largest connected component the bipartition bond enumerator accepts.
pub const MAX_BOND_COMPONENT: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: u64,
    pub label: String,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct WeightedMultigraph {
    n_vertices: usize,
    edges: Vec<Edge>,
    index: HashMap<String, usize>,
}

impl WeightedMultigraph {
    pub fn new(n_vertices: usize, edges: Vec<Edge>) -> Result<Self> {
        let mut index = HashMap::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            if e.u >= n_vertices || e.v >= n_vertices {
                return Err(Error::Dimension(format!(
                    "edge `{}` has endpoint outside 0..{n_vertices}",
                    e.label
                )));
            }
            if e.label.is_empty() || e.label.chars().any(char::is_whitespace) {
                return Err(Error::contract(format!("invalid edge label `{}`", e.label)));
            }
            if index.insert(e.label.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(e.label.clone()));
            }
        }
        Ok(WeightedMultigraph {
            n_vertices,
            edges,
            index,
        })
    }

    /// Unit-weight graph with edges labelled `e0`, `e1`, ... in list order.
    pub fn from_pairs(n_vertices: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let edges = pairs
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| Edge {
                u,
                v,
                weight: 1,
                label: format!("e{i}"),
            })
            .collect();
        Self::new(n_vertices, edges)
    }

    pub fn cycle(n: usize) -> Self {
        let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_pairs(n, &pairs).expect("valid cycle")
    }

    pub fn path(n: usize) -> Self {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_pairs(n, &pairs).expect("valid path")
    }

    pub fn complete(n: usize) -> Self {
        let pairs: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Self::from_pairs(n, &pairs).expect("valid complete graph")
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, label: &str) -> Result<&Edge> {
        Ok(&self.edges[self.edge_index(label)?])
    }

    pub fn edge_index(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn labels(&self) -> Vec<String> {
        self.edges.iter().map(|e| e.label.clone()).collect()
    }

    /// The stored edge weights as a weight function in edge order.
    pub fn weight_fn(&self) -> WeightFn {
        WeightFn::new(self.edges.iter().map(|e| e.weight).collect())
    }

    /// Same graph with the weights replaced, in edge order.
    pub fn with_weights(&self, w: &WeightFn) -> Result<Self> {
        self.check_weights(w)?;
        let mut g = self.clone();
        for (e, &x) in g.edges.iter_mut().zip(w.values()) {
            e.weight = x;
        }
        Ok(g)
    }

    pub fn total_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    fn check_weights(&self, w: &WeightFn) -> Result<()> {
        if w.len() != self.edges.len() {
            return Err(Error::Dimension(format!(
                "{} weights for {} edges",
                w.len(),
                self.edges.len()
            )));
        }
        Ok(())
    }

    fn edge_set(&self, idx: impl IntoIterator<Item = usize>) -> ElementSet {
        idx.into_iter().map(|i| self.edges[i].label.clone()).collect()
    }

    /// Incidence lists of non-loop edges: `(edge index, neighbour)`.
    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n_vertices];
        for (i, e) in self.edges.iter().enumerate() {
            if !e.is_loop() {
                adj[e.u].push((i, e.v));
                adj[e.v].push((i, e.u));
            }
        }
        adj
    }

    /// Connected components as sorted vertex lists, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n_vertices];
        let mut out = Vec::new();
        for s in 0..self.n_vertices {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut stack = vec![s];
            let mut comp = vec![s];
            while let Some(x) = stack.pop() {
                for &(_, y) in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                        stack.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n_vertices <= 1 || self.components().len() == 1
    }

    /// Whether `set` equals the cut-set of some vertex bipartition: every
    /// edge of `set` joins two components of `G - set`, and those
    /// components can be two-coloured with `set` as the bichromatic edges.
    pub fn is_cut_set(&self, set: &ElementSet) -> Result<bool> {
        let removed: BTreeSet<usize> = set
            .iter()
            .map(|l| self.edge_index(l))
            .collect::<Result<_>>()?;
        if removed.is_empty() {
            return Ok(false);
        }
        let kept: Vec<Edge> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| !removed.contains(i))
            .map(|(_, e)| e.clone())
            .collect();
        let rest = WeightedMultigraph::new(self.n_vertices, kept)?;
        let mut comp_of = vec![0; self.n_vertices];
        let comps = rest.components();
        for (c, vs) in comps.iter().enumerate() {
            for &v in vs {
                comp_of[v] = c;
            }
        }
        let mut colour: Vec<Option<bool>> = vec![None; comps.len()];
        let mut adj = vec![Vec::new(); comps.len()];
        for &i in &removed {
            let (a, b) = (comp_of[self.edges[i].u], comp_of[self.edges[i].v]);
            if a == b {
                return Ok(false);
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for s in 0..comps.len() {
            if colour[s].is_some() {
                continue;
            }
            colour[s] = Some(false);
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                let cx = colour[x].expect("coloured before push");
                for &y in &adj[x] {
                    match colour[y] {
                        None => {
                            colour[y] = Some(!cx);
                            stack.push(y);
                        }
                        Some(cy) if cy == cx => return Ok(false),
                        Some(_) => {}
                    }
                }
            }
        }
        Ok(true)
    }

    /// Contracts edge `label`: every edge between its endpoints is deleted,
    /// then the endpoints are identified. The merged vertex keeps the smaller
    /// index; higher vertices shift down by one.
    pub fn contract_edge(&self, label: &str) -> Result<WeightedMultigraph> {
        let e = self.edge(label)?;
        if e.is_loop() {
            return Err(Error::contract(format!("edge `{label}` is a self-loop")));
        }
        let (keep, gone) = (e.u.min(e.v), e.u.max(e.v));
        let relabel = |x: usize| match x.cmp(&gone) {
            std::cmp::Ordering::Less => x,
            std::cmp::Ordering::Equal => keep,
            std::cmp::Ordering::Greater => x - 1,
        };
        let edges = self
            .edges
            .iter()
            .filter(|f| !((f.u == keep && f.v == gone) || (f.u == gone && f.v == keep)))
            .map(|f| Edge {
                u: relabel(f.u),
                v: relabel(f.v),
                weight: f.weight,
                label: f.label.clone(),
            })
            .collect();
        WeightedMultigraph::new(self.n_vertices - 1, edges)
    }

    /// Parses the graph file format: `n_vertices n_edges`, then one
    /// `u v weight label` line per edge.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = Lines::new(text);
        let (n, header) = lines.expect_content("graph header `n_vertices n_edges`")?;
        let dims: Vec<usize> = parse_fields(n, header, 2)?;
        let mut edges = Vec::with_capacity(dims[1]);
        for _ in 0..dims[1] {
            let (n, line) = lines.expect_content("edge line `u v weight label`")?;
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 4 {
                return Err(Error::parse(n, format!("expected 4 fields, found {}", f.len())));
            }
            let num = |s: &str| -> Result<u64> {
                s.parse()
                    .map_err(|_| Error::parse(n, format!("cannot parse `{s}`")))
            };
            edges.push(Edge {
                u: num(f[0])? as usize,
                v: num(f[1])? as usize,
                weight: num(f[2])?,
                label: f[3].to_string(),
            });
        }
        if let Some((n, _)) = lines.next_content() {
            return Err(Error::parse(n, "trailing content after the last edge"));
        }
        Self::new(dims[0], edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n_vertices, self.edges.len());
        for e in &self.edges {
            out.push_str(&format!("{} {} {} {}\n", e.u, e.v, e.weight, e.label));
        }
        out
    }
}

impl fmt::Debug for WeightedMultigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightedMultigraph({}, [", self.n_vertices)?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}-{}/{}", e.label, e.u, e.v, e.weight)?;
        }
        write!(f, "])")
    }
}

/// The graphic matroid: vertex-edge incidence matrix over GF(2). Self-loops
/// give zero columns.
pub fn graphic_matroid(g: &WeightedMultigraph) -> BinaryMatroid {
    let mut rep = Gf2Matrix::zeros(g.n_vertices(), g.n_edges());
    for (i, e) in g.edges().iter().enumerate() {
        if !e.is_loop() {
            rep.set(e.u, i, true);
            rep.set(e.v, i, true);
        }
    }
    BinaryMatroid::new(g.labels(), rep).expect("edge labels are distinct")
}

/// The cographic matroid: circuits are the bonds of `g`.
pub fn cographic_matroid(g: &WeightedMultigraph) -> BinaryMatroid {
    graphic_matroid(g).dual()
}

fn required_edge(g: &WeightedMultigraph, r: &ElementSet) -> Result<Option<usize>> {
    match r.len() {
        0 => Ok(None),
        1 => g.edge_index(r.iter().next().expect("one element")).map(Some),
        n => Err(Error::contract(format!("|R| = {n}; at most one required edge"))),
    }
}

/// All simple cycles `C` with `R ⊆ C` and `w(C) < bound`, sorted by their
/// label sets. Self-loops are cycles of one edge; parallel pairs are cycles
/// of two.
pub fn cycles_below(
    g: &WeightedMultigraph,
    w: &WeightFn,
    r: &ElementSet,
    bound: &Bound,
) -> Result<Vec<ElementSet>> {
    g.check_weights(w)?;
    let required = required_edge(g, r)?;
    let adj = g.adjacency();
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    for (i, e) in g.edges().iter().enumerate() {
        if e.is_loop() && below(w.get(i), bound) {
            found.insert(vec![i]);
        }
    }
    let mut on_path = vec![false; g.n_vertices()];
    let mut path_edges = Vec::new();
    for s in 0..g.n_vertices() {
        on_path[s] = true;
        extend_cycles(
            &adj,
            w,
            bound,
            s,
            s,
            0,
            &mut on_path,
            &mut path_edges,
            &mut found,
        );
        on_path[s] = false;
    }
    Ok(found
        .into_iter()
        .filter(|c| required.is_none_or(|e| c.binary_search(&e).is_ok()))
        .map(|c| g.edge_set(c))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect())
}

/// Extends a simple path from `s` whose interior vertices all exceed `s`,
/// recording every closing edge back to `s`.
#[allow(clippy::too_many_arguments)]
fn extend_cycles(
    adj: &[Vec<(usize, usize)>],
    w: &WeightFn,
    bound: &Bound,
    s: usize,
    x: usize,
    weight: u64,
    on_path: &mut [bool],
    path_edges: &mut Vec<usize>,
    found: &mut BTreeSet<Vec<usize>>,
) {
    for &(e, y) in &adj[x] {
        if path_edges.last() == Some(&e) {
            continue;
        }
        let total = weight + w.get(e);
        if !below(total, bound) {
            continue;
        }
        if y == s {
            if !path_edges.is_empty() {
                let mut cycle = path_edges.clone();
                cycle.push(e);
                cycle.sort_unstable();
                found.insert(cycle);
            }
        } else if y > s && !on_path[y] {
            on_path[y] = true;
            path_edges.push(e);
            extend_cycles(adj, w, bound, s, y, total, on_path, path_edges, found);
            path_edges.pop();
            on_path[y] = false;
        }
    }
}

/// All bonds (inclusion-minimal cut-sets) `C` with `R ⊆ C` and
/// `w(C) < bound`, sorted by label sets. Each bond is the cut of a
/// bipartition of one component whose two shores are both connected.
pub fn bonds_below(
    g: &WeightedMultigraph,
    w: &WeightFn,
    r: &ElementSet,
    bound: &Bound,
) -> Result<Vec<ElementSet>> {
    g.check_weights(w)?;
    let required = required_edge(g, r)?;
    let mut out = BTreeSet::new();
    for comp in g.components() {
        if comp.len() > MAX_BOND_COMPONENT {
            return Err(Error::guard(format!(
                "component with {} vertices; bond enumeration supports at most {MAX_BOND_COMPONENT}",
                comp.len()
            )));
        }
        for cut in component_bonds(g, &comp) {
            let weight: u64 = cut.iter().map(|&i| w.get(i)).sum();
            if below(weight, bound) && required.is_none_or(|e| cut.binary_search(&e).is_ok()) {
                out.insert(g.edge_set(cut));
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Cut-sets of the bipartitions of `comp` with both shores connected.
fn component_bonds(g: &WeightedMultigraph, comp: &[usize]) -> Vec<Vec<usize>> {
    let c = comp.len();
    if c < 2 {
        return Vec::new();
    }
    let mut local = vec![usize::MAX; g.n_vertices()];
    for (i, &v) in comp.iter().enumerate() {
        local[v] = i;
    }
    // Neighbour masks within the component, ignoring loops.
    let mut nbr = vec![0u32; c];
    let mut comp_edges = Vec::new();
    for (i, e) in g.edges().iter().enumerate() {
        if e.is_loop() || local[e.u] == usize::MAX {
            continue;
        }
        let (a, b) = (local[e.u], local[e.v]);
        nbr[a] |= 1 << b;
        nbr[b] |= 1 << a;
        comp_edges.push((i, a, b));
    }
    let full: u32 = if c == 32 { u32::MAX } else { (1 << c) - 1 };
    let connected = |set: u32| {
        let mut reach = set & set.wrapping_neg();
        loop {
            let mut next = reach;
            let mut bits = reach;
            while bits != 0 {
                let v = bits.trailing_zeros();
                bits &= bits - 1;
                next |= nbr[v as usize] & set;
            }
            if next == reach {
                return reach == set;
            }
            reach = next;
        }
    };
    let mut out = Vec::new();
    // Vertex 0 stays on the first shore; the second shore is `side`.
    for rest in 1u32..(1 << (c - 1)) {
        let side = rest << 1;
        let shore = full & !side;
        if !connected(side) || !connected(shore) {
            continue;
        }
        let cut: Vec<usize> = comp_edges
            .iter()
            .filter(|&&(_, a, b)| (side >> a & 1) != (side >> b & 1))
            .map(|&(i, _, _)| i)
            .collect();
        out.push(cut);
    }
    out
}

/// Minimum weight of a cycle avoiding `R`, or `None` if there is none.
pub fn min_cycle_avoiding(g: &WeightedMultigraph, w: &WeightFn, r: &ElementSet) -> Result<Option<u64>> {
    required_edge(g, r)?;
    let kept: Vec<usize> = (0..g.n_edges())
        .filter(|&i| !r.contains(&g.edges()[i].label))
        .collect();
    let sub = graphic_matroid(g).delete(r)?;
    let sub_w = WeightFn::new(kept.iter().map(|&i| w.get(i)).collect());
    sub.girth(&sub_w)
}

/// Minimum weight of a bond avoiding `R`, or `None` if there is none.
pub fn min_bond_avoiding(g: &WeightedMultigraph, w: &WeightFn, r: &ElementSet) -> Result<Option<u64>> {
    g.check_weights(w)?;
    let required = required_edge(g, r)?;
    let mut best = None;
    for comp in g.components() {
        if comp.len() > MAX_BOND_COMPONENT {
            return Err(Error::guard(format!(
                "component with {} vertices; bond enumeration supports at most {MAX_BOND_COMPONENT}",
                comp.len()
            )));
        }
        for cut in component_bonds(g, &comp) {
            if required.is_some_and(|e| cut.binary_search(&e).is_ok()) {
                continue;
            }
            let weight: u64 = cut.iter().map(|&i| w.get(i)).sum();
            best = Some(best.map_or(weight, |b: u64| b.min(weight)));
        }
    }
    Ok(best)
}

/// Karger-style two-phase sampler for a small cut-set containing `R`.
///
/// Contraction runs `n - alpha - |R|` times, choosing a non-loop edge
/// outside `R` with probability proportional to its weight; `R` absorbs
/// every edge parallel to an `R`-edge. Selection then picks uniformly among
/// the bipartitions of the surviving vertices that separate the endpoints of
/// the `R`-edge, or among the nontrivial bipartitions when `R` is empty.
/// The result is the induced cut-set of the original graph.
pub fn small_cut<G: Rng + ?Sized>(
    g: &WeightedMultigraph,
    r: &ElementSet,
    alpha: usize,
    rng: &mut G,
) -> Result<ElementSet> {
    let required = required_edge(g, r)?;
    if alpha < 2 {
        return Err(Error::contract(format!("alpha = {alpha}; need alpha >= 2")));
    }
    if !g.is_connected() {
        return Err(Error::contract("graph is not connected"));
    }
    let n = g.n_vertices();
    let r_len = usize::from(required.is_some());
    if n < alpha + r_len {
        return Err(Error::contract(format!(
            "{n} vertices; need at least alpha + |R| = {}",
            alpha + r_len
        )));
    }
    if let Some(e) = required {
        if g.edges()[e].is_loop() {
            return Err(Error::contract("the required edge is a self-loop"));
        }
    }

    let mut class: Vec<usize> = (0..n).collect();
    let mut alive: Vec<bool> = g.edges().iter().map(|e| !e.is_loop()).collect();
    let mut in_r = vec![false; g.n_edges()];
    let ends = |class: &[usize], i: usize| {
        let e = &g.edges()[i];
        let (a, b) = (class[e.u], class[e.v]);
        (a.min(b), a.max(b))
    };
    let absorb = |class: &[usize], alive: &[bool], in_r: &mut [bool]| {
        if let Some(e) = required {
            let pair = ends(class, e);
            for i in 0..g.n_edges() {
                if alive[i] && ends(class, i) == pair {
                    in_r[i] = true;
                }
            }
        }
    };
    absorb(&class, &alive, &mut in_r);

    for _ in 0..n - alpha - r_len {
        let total: u64 = (0..g.n_edges())
            .filter(|&i| alive[i] && !in_r[i])
            .map(|i| g.edges()[i].weight)
            .sum();
        if total == 0 {
            return Err(Error::contract("w(E \\ R) = 0; no edge can be contracted"));
        }
        let mut x = rng.gen_range(0..total);
        let mut chosen = None;
        for i in 0..g.n_edges() {
            if !alive[i] || in_r[i] {
                continue;
            }
            let wi = g.edges()[i].weight;
            if x < wi {
                chosen = Some(i);
                break;
            }
            x -= wi;
        }
        let chosen = chosen.expect("cumulative weights cover the draw");
        let (a, b) = ends(&class, chosen);
        for i in 0..g.n_edges() {
            if alive[i] && ends(&class, i) == (a, b) {
                alive[i] = false;
            }
        }
        for c in class.iter_mut() {
            if *c == b {
                *c = a;
            }
        }
        absorb(&class, &alive, &mut in_r);
    }

    let mut survivors: Vec<usize> = class.clone();
    survivors.sort_unstable();
    survivors.dedup();
    let (anchor, free): (usize, Vec<usize>) = match required {
        Some(e) => {
            let (a, b) = ends(&class, e);
            (a, survivors.into_iter().filter(|&c| c != a && c != b).collect())
        }
        None => (survivors[0], survivors[1..].to_vec()),
    };
    let options = 1u64 << free.len();
    let pick = match required {
        Some(_) => rng.gen_range(0..options),
        None => rng.gen_range(1..options),
    };
    // Classes on the anchor's shore.
    let mut shore: BTreeSet<usize> = BTreeSet::from([anchor]);
    for (bit, &c) in free.iter().enumerate() {
        if pick >> bit & 1 == 0 {
            shore.insert(c);
        }
    }
    let cut = (0..g.n_edges()).filter(|&i| {
        let e = &g.edges()[i];
        !e.is_loop() && shore.contains(&class[e.u]) != shore.contains(&class[e.v])
    });
    Ok(g.edge_set(cut))
}

/// [`small_cut`] driven by a ChaCha8 generator seeded with `seed`.
pub fn small_cut_seeded(
    g: &WeightedMultigraph,
    r: &ElementSet,
    alpha: usize,
    seed: u64,
) -> Result<ElementSet> {
    small_cut(g, r, alpha, &mut ChaCha8Rng::seed_from_u64(seed))
}
