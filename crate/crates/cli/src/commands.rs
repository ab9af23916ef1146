//! One function per subcommand. Each fills the report and returns an error
//! only when the run cannot produce results.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigUint;
use serde_json::json;
use tuiso::gen::{random_weights, rng};
use tuiso::graphs::{bonds_below, cycles_below, min_bond_avoiding, min_cycle_avoiding, small_cut};
use tuiso::isolation::{build_family, find_isolating, measured_k, verify_face_chain, FaceChainTrace};
use tuiso::ksum::{compose, split_witnesses, weighted_girth_sum_check, KSumSpec};
use tuiso::scalar::parse_bound;
use tuiso::tulattice::{is_tu, lambda, short_vectors, ShortVectorMethod};
use tuiso::{element_set, BinaryMatroid, Bound, ElementSet, SubsetFamily, WeightFn, WeightedMultigraph, ZMatrix};

use crate::report::RunReport;

/// Parses `label weight` lines; blank lines are skipped.
fn parse_weights(text: &str) -> Result<HashMap<String, u64>> {
    let mut out = HashMap::new();
    for (n, line) in text.lines().enumerate() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[..] {
            [] => continue,
            [label, w] => {
                let w: u64 = w.parse().with_context(|| format!("line {}: bad weight `{w}`", n + 1))?;
                if out.insert(label.to_string(), w).is_some() {
                    bail!("line {}: weight for `{label}` given twice", n + 1);
                }
            }
            _ => bail!("line {}: expected `label weight`", n + 1),
        }
    }
    Ok(out)
}

fn bound_arg(text: &str) -> Result<Bound> {
    parse_bound(text).ok_or_else(|| anyhow!("`{text}` is not a nonnegative rational"))
}

pub fn circuits(report: &mut RunReport, matroid: &Path, weights: Option<&PathBuf>, bound: u64) -> Result<()> {
    let m = BinaryMatroid::parse(&report.read_input(matroid)?)?;
    let w = match weights {
        Some(path) => WeightFn::from_labels(&m, &parse_weights(&report.read_input(path)?)?)?,
        None => WeightFn::unit(m.len()),
    };
    let found = m.circuits_up_to(&w, bound)?;
    report.set("elements", m.labels());
    report.set("rank", m.rank());
    report.set("weights", w.values());
    report.set("bound", bound);
    report.set("count", found.len());
    report.set("circuits", &found);
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Cycles,
    Cuts,
}

pub struct LightArgs<'a> {
    pub graph: &'a Path,
    pub alpha: u32,
    pub r: Option<u64>,
    pub required: Option<&'a str>,
    pub samples: u64,
    pub seed: u64,
}

/// Light cycles or bonds through `R` below `alpha·r/2`, where no member of
/// the same family avoiding `R` is lighter than `r`.
pub fn light(report: &mut RunReport, family: Family, args: &LightArgs<'_>) -> Result<()> {
    let g = WeightedMultigraph::parse(&report.read_input(args.graph)?)?;
    if args.alpha < 2 {
        bail!(tuiso::Error::Contract(format!("alpha = {}; need alpha >= 2", args.alpha)));
    }
    let r_set: ElementSet = match args.required {
        Some(label) => {
            g.edge_index(label)?;
            element_set([label])
        }
        None => ElementSet::new(),
    };
    let w = g.weight_fn();
    let lightest = match family {
        Family::Cycles => min_cycle_avoiding(&g, &w, &r_set)?,
        Family::Cuts => min_bond_avoiding(&g, &w, &r_set)?,
    };
    // With nothing avoiding R, every r is admissible.
    let r = args.r.unwrap_or_else(|| lightest.unwrap_or(g.total_weight() + 1));
    if let Some(l) = lightest.filter(|&l| l < r) {
        bail!(tuiso::Error::Contract(format!(
            "a member avoiding R has weight {l} < r = {r}"
        )));
    }
    let bound = Bound::new(u64::from(args.alpha) * r, 2);
    let found = match family {
        Family::Cycles => cycles_below(&g, &w, &r_set, &bound)?,
        Family::Cuts => bonds_below(&g, &w, &r_set, &bound)?,
    };
    let free = (g.n_edges() - r_set.len()) as u64;
    let limit = BigUint::from(2 * free).pow(args.alpha);
    report.set("edges", g.n_edges());
    report.set("vertices", g.n_vertices());
    report.set("alpha", args.alpha);
    report.set("r", r);
    report.set("lightest_avoiding_R", lightest);
    report.set("required", &r_set);
    report.set("bound", bound.to_string());
    report.set("count", found.len());
    report.set(if family == Family::Cycles { "cycles" } else { "bonds" }, &found);
    report.check(
        "light members through R: at most (2(m-|R|))^alpha",
        &limit,
        found.len(),
        BigUint::from(found.len()) <= limit,
    );
    if family == Family::Cuts && args.samples > 0 {
        sample_small_cuts(report, &g, &r_set, args, &found)?;
    }
    Ok(())
}

fn sample_small_cuts(
    report: &mut RunReport,
    g: &WeightedMultigraph,
    r_set: &ElementSet,
    args: &LightArgs<'_>,
    targets: &[ElementSet],
) -> Result<()> {
    let mut source = rng(args.seed);
    let mut hits: BTreeMap<ElementSet, u64> = BTreeMap::new();
    for _ in 0..args.samples {
        *hits.entry(small_cut(g, r_set, args.alpha as usize, &mut source)?).or_default() += 1;
    }
    let n = args.samples as f64;
    let floor = 1.0 / ((g.n_vertices() - r_set.len()) as f64).powi(args.alpha as i32);
    let margin = 3.0 * (floor * (1.0 - floor) / n).sqrt();
    let worst = targets
        .iter()
        .map(|c| hits.get(c).copied().unwrap_or(0) as f64 / n)
        .fold(f64::INFINITY, f64::min);
    let outputs: Vec<_> = hits.iter().map(|(c, k)| json!({ "cut": c, "hits": k })).collect();
    report.set("small_cut_samples", args.samples);
    report.set("small_cut_outputs", outputs);
    if !targets.is_empty() {
        report.check(
            "small-cut hit rate of each light bond: at least 1/(n-|R|)^alpha, less a 3-sigma margin",
            format!("{floor:.6}"),
            format!("{worst:.6}"),
            worst >= floor - margin,
        );
    }
    Ok(())
}

fn read_matrix(report: &mut RunReport, path: &Path) -> Result<ZMatrix> {
    Ok(ZMatrix::parse(&report.read_input(path)?)?)
}

pub fn tu_check(report: &mut RunReport, matrix: &Path) -> Result<()> {
    let a = read_matrix(report, matrix)?;
    report.set("rows", a.n_rows());
    report.set("cols", a.n_cols());
    report.set("is_tu", is_tu(&a)?);
    Ok(())
}

pub fn shortvecs(report: &mut RunReport, matrix: &Path, ratio: &str) -> Result<()> {
    let a = read_matrix(report, matrix)?;
    let ratio = bound_arg(ratio)?;
    let tu = is_tu(&a)?;
    report.set("is_tu", tu);
    report.set("bound_ratio", ratio.to_string());
    if !tu {
        report.refuse("matrix is not totally unimodular");
        return Ok(());
    }
    let Some(l) = lambda(&a)? else {
        report.set("trivial", true);
        report.set("lambda", None::<u64>);
        report.set("count", 0);
        return Ok(());
    };
    let bound = ratio * Bound::from_integer(l);
    // Circuits suffice below 2λ; past that only the scan is exact.
    let method = if ratio <= Bound::from_integer(2) {
        ShortVectorMethod::Circuits
    } else {
        ShortVectorMethod::BoxScan
    };
    let found = short_vectors(&a, &bound, method)?;
    let vectors: Vec<String> = found.vectors.iter().map(ToString::to_string).collect();
    report.set("trivial", false);
    report.set("lambda", l);
    report.set("bound", bound.to_string());
    report.set("count", found.count());
    report.set("vectors", vectors);
    if ratio <= Bound::new(3, 2) {
        let limit = BigUint::from(480u32) * BigUint::from(a.n_cols()).pow(5);
        report.check(
            "kernel vectors below (3/2)lambda: at most 480 m^5",
            &limit,
            found.count(),
            BigUint::from(found.count()) <= limit,
        );
    }
    Ok(())
}

pub fn ksum(report: &mut RunReport, paths: [&Path; 3], check_claims: bool, seed: u64) -> Result<()> {
    let [header, left, right] = paths.map(|p| report.read_input(p));
    let spec = KSumSpec::parse(&header?, &left?, &right?)?;
    let sum = compose(&spec)?;
    let circuits = sum.circuits()?;
    report.set("kind", spec.kind);
    report.set("elements", sum.labels());
    report.set("composed", sum.to_text());
    report.set("circuit_count", circuits.len());
    if !check_claims {
        return Ok(());
    }
    let worst = circuits
        .iter()
        .map(|c| split_witnesses(&spec, c).map(|s| s.len()))
        .collect::<tuiso::Result<Vec<_>>>()?;
    let ambiguous = worst.iter().filter(|&&k| k != 1).count();
    report.check(
        "each circuit of the sum splits in exactly one way",
        format!("{} circuits with one split", circuits.len()),
        format!("{ambiguous} circuits without exactly one split"),
        ambiguous == 0,
    );

    let mut source = rng(seed);
    let weightings = [WeightFn::unit(sum.len()), random_weights(&mut source, sum.len(), 4)];
    let (mut checks, mut unique, mut light) = (0usize, 0usize, 0usize);
    for w in &weightings {
        let girth = sum.girth(w)?.unwrap_or(1);
        for r in 1..=girth {
            let rep = weighted_girth_sum_check(&spec, w, r)?;
            checks += 1;
            unique += usize::from(!rep.unique_light_pieces());
            light += usize::from(!rep.no_light_right_circuit());
        }
    }
    report.set("girth_checks", checks);
    report.check(
        "at most one light piece per shared element when the sum has girth >= r",
        "0 violations",
        format!("{unique} violations in {checks} checks"),
        unique == 0,
    );
    report.check(
        "no circuit of the reweighted right operand below r",
        "0 violations",
        format!("{light} violations in {checks} checks"),
        light == 0,
    );
    Ok(())
}

fn trace_json(t: &FaceChainTrace) -> serde_json::Value {
    let rounds: Vec<_> = t
        .rounds
        .iter()
        .map(|r| {
            json!({
                "round": r.round,
                "choice": r.choice,
                "face_before": r.face_before,
                "face_after": r.face_after,
                "subface": r.subface,
                "parallel": r.parallel,
                "hits_all": r.hits_all,
                "lambda_ok": r.lambda_ok,
            })
        })
        .collect();
    json!({
        "initial_lambda_ok": t.initial_lambda_ok,
        "rounds": rounds,
        "final_face": t.final_face,
    })
}

pub fn isolate(report: &mut RunReport, family: &Path, c: &str, max_candidates: u64) -> Result<()> {
    let b = SubsetFamily::parse(&report.read_input(family)?)?;
    let c = bound_arg(c)?;
    report.set("ground_size", b.ground_size());
    report.set("members", b.len());
    report.set("c", c.to_string());
    report.set("max_candidates", max_candidates);
    if max_candidates == 0 {
        report.set("evaluated", 0);
        report.set("candidate", None::<()>);
        return Ok(());
    }
    let k = measured_k(&b, &c)?;
    let fam = build_family(b.ground_size(), c, k)?;
    report.set("short_vector_count", k);
    report.set("rounds", fam.p);
    report.set("t", fam.t);
    report.set("q", fam.fks.q);
    report.set("w0", &fam.w0);
    report.set("candidate_count", fam.candidate_count().to_string());
    report.set("weight_bound", fam.weight_bound().to_string());
    let outcome = find_isolating(&b, &fam, max_candidates)?;
    report.set("evaluated", outcome.evaluated);
    let Some(cand) = outcome.candidate else {
        report.set("candidate", None::<()>);
        return Ok(());
    };
    let trace = verify_face_chain(&b, &fam, &cand.choices)?;
    let weights: Vec<String> = cand.weights.iter().map(ToString::to_string).collect();
    report.set("candidate", json!({ "choices": cand.choices, "weights": weights }));
    report.set("trace", trace_json(&trace));
    report.check(
        "every candidate weight is below (mN)^(p+1) q",
        fam.weight_bound(),
        cand.weights.iter().max().map_or_else(String::new, ToString::to_string),
        cand.weights.iter().all(|x| x.magnitude() < &fam.weight_bound()),
    );
    report.check(
        "the final face is a single member",
        1,
        trace.final_face,
        trace.final_is_point(),
    );
    report.check(
        "face lattices reach their norm thresholds",
        "every round",
        format!("{} of {}", trace.rounds.iter().filter(|r| r.lambda_ok).count(), trace.rounds.len()),
        trace.lambda_ok(),
    );
    Ok(())
}
