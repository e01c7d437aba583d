#![allow(dead_code)]

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use spgraph::generators::{random_cycle, random_path, random_pseudotree, random_tree, traversal_profile_with};
use spgraph::lp::{LpModel, PairIndex};
use spgraph::profile::{is_compatible, Edge, Graph, Profile, Ranking};
use spgraph::recognition::EliminationCertificate;

/// Every graph on `1..=m` with exactly `k` edges.
pub fn graphs_with_edges(m: usize, k: usize) -> Vec<Graph> {
    let pairs: Vec<Edge> = PairIndex::new(m).pairs().to_vec();
    let mut out = Vec::new();
    let mut pick = Vec::new();
    fn rec(pairs: &[Edge], from: usize, k: usize, pick: &mut Vec<Edge>, m: usize, out: &mut Vec<Graph>) {
        if pick.len() == k {
            let mut g = Graph::empty(m);
            for e in pick.iter() {
                g.insert(*e);
            }
            out.push(g);
            return;
        }
        for i in from..pairs.len() {
            pick.push(pairs[i]);
            rec(pairs, i + 1, k, pick, m, out);
            pick.pop();
        }
    }
    rec(&pairs, 0, k, &mut pick, m, &mut out);
    out
}

/// Candidate graphs of every class for one `m`, built once per size.
pub struct ClassLists {
    pub trees: Vec<Graph>,
    pub paths: Vec<Graph>,
    pub cycles: Vec<Graph>,
    pub pseudotrees: Vec<Graph>,
}

impl ClassLists {
    pub fn new(m: usize) -> Self {
        let spanning = graphs_with_edges(m, m.saturating_sub(1));
        let trees: Vec<Graph> = spanning.iter().filter(|g| g.is_tree()).cloned().collect();
        let paths = trees.iter().filter(|g| g.is_path()).cloned().collect();
        let unicyclic: Vec<Graph> = if m >= 3 {
            graphs_with_edges(m, m).into_iter().filter(|g| g.is_connected()).collect()
        } else {
            Vec::new()
        };
        let cycles = unicyclic.iter().filter(|g| g.is_cycle()).cloned().collect();
        let mut pseudotrees = trees.clone();
        pseudotrees.extend(unicyclic);
        if m < 3 {
            pseudotrees.push(Graph::complete(m));
        }
        ClassLists { trees, paths, cycles, pseudotrees }
    }

    pub fn any_compatible(list: &[Graph], p: &Profile) -> bool {
        list.iter().any(|g| is_compatible(g, p).unwrap())
    }
}

pub fn random_ranking<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Ranking {
    let mut v: Vec<usize> = (1..=m).collect();
    v.shuffle(rng);
    Ranking::new(v).unwrap()
}

pub fn uniform_profile<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> Profile {
    Profile::from_rankings(m, (0..n).map(|_| random_ranking(m, rng)).collect::<Vec<_>>()).unwrap()
}

/// A mix of structured and unstructured profiles, so that both verdicts
/// show up often.
pub fn mixed_profile<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> Profile {
    let g = match rng.gen_range(0..6) {
        0 => random_tree(m, rng),
        1 => random_path(m, rng),
        2 if m >= 3 => random_cycle(m, rng),
        3 => random_pseudotree(m, rng),
        _ => return uniform_profile(m, n, rng),
    };
    let mut p = traversal_profile_with(&g, n, rng).unwrap();
    if rng.gen_bool(0.3) {
        // one stray voter breaks the structure some of the time
        let mut entries = p.entries().to_vec();
        entries.push((random_ranking(m, rng), 1));
        p = Profile::new(m, entries).unwrap();
    }
    p
}

pub fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Every traversal row of `model` is met with equality.
pub fn rows_tight(model: &LpModel, x: &[BigRational]) -> bool {
    model.traversal_rows().all(|row| {
        let s: BigRational = row.coeffs.iter().map(|&(j, a)| &x[j] * q(a)).sum();
        s.is_one()
    })
}

/// For every eliminated `k`: the pairs from `k` to its B-set carry exactly one
/// unit and the pairs from `k` to any other candidate still present are zero.
pub fn support_condition(pairs: &PairIndex, cert: &EliminationCertificate, x: &[BigRational]) -> bool {
    let order = cert.order();
    for (i, step) in cert.steps.iter().enumerate() {
        let k = step.removed;
        let later: BTreeSet<usize> = order[i + 1..].iter().copied().collect();
        let into_b: BigRational = step.attachments.iter().map(|&j| x[pairs.index(k, j)].clone()).sum();
        if !into_b.is_one() {
            return false;
        }
        if later.iter().filter(|l| !step.attachments.contains(l)).any(|&l| !x[pairs.index(k, l)].is_zero()) {
            return false;
        }
    }
    true
}

/// Distinct nonempty subsets of `1..=u`, as families of at most `max_sets`
/// sets covering the universe.
pub fn covering_families(u: usize, max_sets: usize) -> Vec<Vec<BTreeSet<usize>>> {
    let subsets: Vec<BTreeSet<usize>> = (1u32..1 << u)
        .map(|mask| (1..=u).filter(|e| mask >> (e - 1) & 1 == 1).collect())
        .collect();
    let mut out = Vec::new();
    fn rec(
        subsets: &[BTreeSet<usize>],
        from: usize,
        left: usize,
        cur: &mut Vec<BTreeSet<usize>>,
        u: usize,
        out: &mut Vec<Vec<BTreeSet<usize>>>,
    ) {
        if !cur.is_empty() && (1..=u).all(|e| cur.iter().any(|s| s.contains(&e))) {
            out.push(cur.clone());
        }
        if left == 0 {
            return;
        }
        for i in from..subsets.len() {
            cur.push(subsets[i].clone());
            rec(subsets, i + 1, left - 1, cur, u, out);
            cur.pop();
        }
    }
    rec(&subsets, 0, max_sets, &mut Vec::new(), u, &mut out);
    out
}
