//! Seeded instance generators for property suites and the acceptance
//! harness. Graphs and TU matrices feed the enumerators; k-sum
//! specifications feed the composition checks.
//! Every generator is a pure function of its RNG state.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graphs::{cographic_matroid, graphic_matroid, WeightedMultigraph};
use crate::isolation::bipartite_pm_family;
use crate::ksum::KSumSpec;
use crate::linalg::IntMatrix;
use crate::matroid::{r10, BinaryMatroid, WeightFn};
use crate::scalar::Bound;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Connected multigraph: a random spanning tree plus `extra` random
/// non-loop edges (parallels allowed).
pub fn random_connected_graph<R: Rng + ?Sized>(rng: &mut R, n: usize, extra: usize) -> WeightedMultigraph {
    let mut pairs: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    if n >= 2 {
        for _ in 0..extra {
            let u = rng.gen_range(0..n);
            let mut v = rng.gen_range(0..n - 1);
            if v >= u {
                v += 1;
            }
            pairs.push((u.min(v), u.max(v)));
        }
    }
    WeightedMultigraph::from_pairs(n, &pairs).expect("endpoints in range")
}

/// 2-connected multigraph: a cycle on `n ≥ 2` vertices plus `extra` chords.
pub fn random_bridgeless_graph<R: Rng + ?Sized>(rng: &mut R, n: usize, extra: usize) -> WeightedMultigraph {
    let mut pairs: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    for _ in 0..extra {
        let u = rng.gen_range(0..n);
        let v = (u + rng.gen_range(1..n)) % n;
        pairs.push((u.min(v), u.max(v)));
    }
    WeightedMultigraph::from_pairs(n, &pairs).expect("endpoints in range")
}

/// `K4` on vertices 0..4, then `extra_vertices` vertices each joined to two
/// distinct earlier vertices, then `extra_edges` random edges. 2-connected.
pub fn random_k4_extension<R: Rng + ?Sized>(rng: &mut R, extra_vertices: usize, extra_edges: usize) -> WeightedMultigraph {
    let n = 4 + extra_vertices;
    let mut pairs = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    for v in 4..n {
        let x = rng.gen_range(0..v);
        let y = (x + rng.gen_range(1..v)) % v;
        pairs.push((x, v));
        pairs.push((y, v));
    }
    for _ in 0..extra_edges {
        let u = rng.gen_range(0..n);
        let v = (u + rng.gen_range(1..n)) % n;
        pairs.push((u.min(v), u.max(v)));
    }
    WeightedMultigraph::from_pairs(n, &pairs).expect("endpoints in range")
}

/// Weights drawn uniformly from `1..=max`.
pub fn random_weights<R: Rng + ?Sized>(rng: &mut R, m: usize, max: u64) -> WeightFn {
    WeightFn::new((0..m).map(|_| rng.gen_range(1..=max)).collect())
}

/// One representative per isomorphism class of connected simple graphs on
/// `n` vertices, in increasing order of canonical edge mask.
pub fn connected_graphs(n: usize) -> Vec<WeightedMultigraph> {
    if n == 0 {
        return Vec::new();
    }
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let slot_of = |u: usize, v: usize| slots.iter().position(|&p| p == (u.min(v), u.max(v))).expect("pair");
    let perms = permutations(n);
    let images: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| slots.iter().map(|&(u, v)| slot_of(p[u], p[v])).collect())
        .collect();
    let mut out = Vec::new();
    'masks: for mask in 0u32..(1 << slots.len()) {
        for image in &images {
            let mut mapped = 0u32;
            for (i, &j) in image.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    mapped |= 1 << j;
                }
            }
            if mapped < mask {
                continue 'masks;
            }
        }
        let pairs: Vec<(usize, usize)> = (0..slots.len()).filter(|&i| mask >> i & 1 == 1).map(|i| slots[i]).collect();
        let g = WeightedMultigraph::from_pairs(n, &pairs).expect("endpoints in range");
        if g.is_connected() {
            out.push(g);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Vertex-arc incidence matrix of `g` with each edge oriented `u → v`
/// (`+1` at the tail, `-1` at the head). Loops give zero columns.
pub fn directed_incidence(g: &WeightedMultigraph) -> IntMatrix<i64> {
    let mut a = IntMatrix::zeros(g.n_vertices(), g.n_edges());
    for (j, e) in g.edges().iter().enumerate() {
        if !e.is_loop() {
            a.set(e.u, j, 1);
            a.set(e.v, j, -1);
        }
    }
    a
}

/// Network matrix of a random directed spanning tree on `n` vertices and
/// `arcs` random non-tree arcs: column `j` is the signed tree path of arc `j`.
pub fn network_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, arcs: usize) -> IntMatrix<i64> {
    let parent: Vec<usize> = (0..n).map(|v| if v == 0 { 0 } else { rng.gen_range(0..v) }).collect();
    // Tree edge `v - 1` joins v and parent[v]; `up[v]` says it points towards the root.
    let up: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    let depth = |mut v: usize| {
        let mut d = 0;
        while v != 0 {
            v = parent[v];
            d += 1;
        }
        d
    };
    let mut a = IntMatrix::zeros(n.saturating_sub(1), arcs);
    for j in 0..arcs {
        let s = rng.gen_range(0..n);
        let t = rng.gen_range(0..n);
        let (mut x, mut y) = (s, t);
        let (mut dx, mut dy) = (depth(x), depth(y));
        while x != y {
            if dx >= dy {
                // Walking from the source side towards the root.
                a.set(x - 1, j, if up[x] { 1 } else { -1 });
                x = parent[x];
                dx -= 1;
            } else {
                // Target side: the path runs away from the root here.
                a.set(y - 1, j, if up[y] { -1 } else { 1 });
                y = parent[y];
                dy -= 1;
            }
        }
    }
    a
}

/// Rows are random intervals of consecutive ones.
pub fn interval_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> IntMatrix<i64> {
    let mut a = IntMatrix::zeros(rows, cols);
    for i in 0..rows {
        let lo = rng.gen_range(0..cols);
        let hi = rng.gen_range(lo..cols);
        for j in lo..=hi {
            a.set(i, j, 1);
        }
    }
    a
}

/// `count` TU matrices with at most `max_cols` columns, cycling through
/// network matrices, interval matrices, directed incidence matrices, and
/// transposes of each.
pub fn tu_corpus(seed: u64, count: usize, max_cols: usize) -> Vec<IntMatrix<i64>> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let kind = out.len() % 6;
        let cols = rng.gen_range(2..=max_cols);
        let a = match kind {
            0 => {
                let n = rng.gen_range(2..=6);
                network_matrix(&mut rng, n, cols)
            }
            1 => {
                let rows = rng.gen_range(1..=6);
                interval_matrix(&mut rng, rows, cols)
            }
            2 => {
                let n = rng.gen_range(2..=6);
                let extra = cols.saturating_sub(n - 1);
                directed_incidence(&random_connected_graph(&mut rng, n, extra))
            }
            3 => {
                let arcs = rng.gen_range(1..=6);
                network_matrix(&mut rng, cols + 1, arcs).transpose()
            }
            4 => {
                let inner = rng.gen_range(2..=6);
                interval_matrix(&mut rng, cols, inner).transpose()
            }
            _ => {
                let (n, extra) = (rng.gen_range(2..=4), rng.gen_range(0..=3));
                directed_incidence(&random_connected_graph(&mut rng, n, extra)).transpose()
            }
        };
        if a.n_cols() >= 1 && a.n_cols() <= max_cols && a.n_rows() >= 1 {
            out.push(a);
        }
    }
    out
}

/// Operand matroid kinds for random sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operand {
    Graphic,
    Cographic,
    R10,
}

fn operand_matroid<R: Rng + ?Sized>(rng: &mut R, op: Operand, kind: u8, prefix: &str) -> BinaryMatroid {
    let m = match (op, kind) {
        (Operand::R10, _) => r10(),
        (Operand::Graphic, 3) | (Operand::Cographic, 3) => {
            let (nv, ne) = (rng.gen_range(0..=2), rng.gen_range(1..=2));
            let g = random_k4_extension(rng, nv, ne);
            if op == Operand::Graphic {
                graphic_matroid(&g)
            } else {
                cographic_matroid(&g)
            }
        }
        _ => {
            let (n, extra) = (rng.gen_range(3..=5), rng.gen_range(1..=3));
            let g = random_bridgeless_graph(rng, n, extra);
            if op == Operand::Graphic {
                graphic_matroid(&g)
            } else {
                cographic_matroid(&g)
            }
        }
    };
    m.relabel(|l| format!("{prefix}{l}")).expect("prefixing keeps labels distinct")
}

fn shared_candidates(m: &BinaryMatroid, kind: u8) -> Result<Vec<Vec<String>>> {
    if kind == 2 {
        return Ok(m.labels().iter().map(|l| vec![l.clone()]).collect());
    }
    Ok(m
        .circuits_below(&WeightFn::unit(m.len()), &Bound::from_integer(4))?
        .into_iter()
        .filter(|c| c.len() == 3)
        .map(|c| c.into_iter().collect())
        .collect())
}

/// A valid 2- or 3-sum of random operands. R10 appears only in 2-sums.
pub fn random_sum_spec<R: Rng + ?Sized>(rng: &mut R, kind: u8, left: Operand, right: Operand) -> Result<KSumSpec> {
    if kind == 3 && (left == Operand::R10 || right == Operand::R10) {
        return Err(Error::contract("R10 has no triangles"));
    }
    for _ in 0..200 {
        let m1 = operand_matroid(rng, left, kind, "a");
        let m2 = operand_matroid(rng, right, kind, "b");
        let (c1, c2) = (shared_candidates(&m1, kind)?, shared_candidates(&m2, kind)?);
        if c1.is_empty() || c2.is_empty() {
            continue;
        }
        let s1 = c1.choose(rng).expect("nonempty").clone();
        let mut s2 = c2.choose(rng).expect("nonempty").clone();
        s2.shuffle(rng);
        let shared = s1.into_iter().zip(s2).collect();
        let spec = KSumSpec::new(kind, m1, m2, shared);
        if spec.validate().is_ok() {
            return Ok(spec);
        }
    }
    Err(Error::guard("no valid sum found in 200 draws"))
}

/// `count` seeded sums over graphic and cographic operands, with R10 mixed in.
pub fn sum_corpus(seed: u64, count: usize) -> Result<Vec<KSumSpec>> {
    let mut rng = rng(seed);
    let ops = [Operand::Graphic, Operand::Cographic];
    (0..count)
        .map(|i| {
            let kind = if i % 2 == 0 { 2 } else { 3 };
            let left = if kind == 2 && i % 10 == 0 { Operand::R10 } else { *ops.choose(&mut rng).expect("two") };
            let right = *ops.choose(&mut rng).expect("two");
            random_sum_spec(&mut rng, kind, left, right)
        })
        .collect()
}

/// Graphic operands `(M1, M3, M4)` for the association law: `M1` and `M3`
/// share one element `x`, and `M3`, `M4` share `s0` (2-sum) or the triangle
/// `s0 s1 s2` (3-sum), disjoint from `x`.
pub fn association_triple<R: Rng + ?Sized>(rng: &mut R) -> Result<(BinaryMatroid, BinaryMatroid, BinaryMatroid)> {
    let kind = if rng.gen_bool(0.5) { 2 } else { 3 };
    let inner = random_sum_spec(rng, kind, Operand::Graphic, Operand::Graphic)?;
    let s_left: Vec<&String> = inner.shared.iter().map(|(a, _)| a).collect();
    let s_right: Vec<&String> = inner.shared.iter().map(|(_, b)| b).collect();
    let choices: Vec<&String> = inner.left.labels().iter().filter(|l| !s_left.contains(l)).collect();
    let x = (*choices.choose(rng).ok_or_else(|| Error::contract("no element outside S"))?).clone();

    let rename_s = |l: &str, side: &[&String]| side.iter().position(|s| s.as_str() == l).map(|i| format!("s{i}"));
    let m3 = inner
        .left
        .relabel(|l| if l == x { "x".into() } else { rename_s(l, &s_left).unwrap_or_else(|| format!("c{}", &l[1..])) })?;
    let m4 = inner
        .right
        .relabel(|l| rename_s(l, &s_right).unwrap_or_else(|| format!("d{}", &l[1..])))?;
    let (n, extra) = (rng.gen_range(3..=4), rng.gen_range(1..=2));
    let g1 = random_bridgeless_graph(rng, n, extra);
    let first = g1.labels()[0].clone();
    let m1 = graphic_matroid(&g1).relabel(|l| if l == first { "x".into() } else { format!("a{l}") })?;
    Ok((m1, m3, m4))
}

/// Every subgraph of `K_{2,2}` and `K_{3,3}` with at least two perfect
/// matchings, as edge subsets of the complete bipartite graph.
pub fn small_bipartite_graphs() -> Vec<WeightedMultigraph> {
    let mut out = Vec::new();
    for side in [2usize, 3] {
        let slots: Vec<(usize, usize)> = (0..side).flat_map(|u| (0..side).map(move |v| (u, side + v))).collect();
        for mask in 0u32..(1 << slots.len()) {
            let pairs: Vec<(usize, usize)> = (0..slots.len()).filter(|&i| mask >> i & 1 == 1).map(|i| slots[i]).collect();
            let g = WeightedMultigraph::from_pairs(2 * side, &pairs).expect("endpoints in range");
            if bipartite_pm_family(&g).map(|f| f.len() >= 2).unwrap_or(false) {
                out.push(g);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tulattice::is_tu;

    #[test]
    fn connected_graph_census() {
        // Connected graphs up to isomorphism on 1..=5 vertices.
        let counts: Vec<usize> = (1..=5).map(|n| connected_graphs(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21]);
    }

    #[test]
    fn corpus_matrices_are_tu() {
        for a in tu_corpus(7, 60, 8) {
            assert!(is_tu(&a).unwrap(), "{a:?}");
        }
    }

    #[test]
    fn generated_sums_are_valid() {
        for spec in sum_corpus(3, 20).unwrap() {
            spec.validate().unwrap();
        }
    }

    #[test]
    fn bipartite_census() {
        let gs = small_bipartite_graphs();
        // K_{2,2} itself, plus subgraphs of K_{3,3} with two or more matchings.
        assert!(gs.iter().any(|g| g.n_vertices() == 4 && g.n_edges() == 4));
        assert!(gs.iter().all(|g| g.n_edges() <= 9));
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(tu_corpus(11, 10, 6), tu_corpus(11, 10, 6));
        let a = association_triple(&mut rng(5)).unwrap();
        let b = association_triple(&mut rng(5)).unwrap();
        assert_eq!(a, b);
    }
}
