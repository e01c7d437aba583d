//! Profile generators: random traversals of a fixed graph, random graphs of
//! the recognised classes, and the set-cover reduction profiles.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::profile::{Edge, Graph, Profile, ProfileError, Ranking};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("set family is empty")]
    EmptyFamily,
    #[error("universe is empty")]
    EmptyUniverse,
    #[error("set S{0} is empty")]
    EmptySet(usize),
    #[error("element e{0} is in no set")]
    Uncovered(usize),
    #[error("set S{set} mentions e{element}, outside 1..={universe}")]
    ElementOutOfRange { set: usize, element: usize, universe: usize },
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

/// One traversal: random start, then a uniformly random vertex adjacent to the
/// visited prefix at each step.
pub fn random_traversal<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Result<Ranking, GeneratorError> {
    if !g.is_connected() {
        return Err(GeneratorError::Disconnected);
    }
    let m = g.m();
    let nbrs = g.neighbors();
    let mut seen = vec![false; m + 1];
    let mut frontier: Vec<usize> = Vec::new();
    let mut in_frontier = vec![false; m + 1];
    let mut order = Vec::with_capacity(m);
    let mut next = rng.gen_range(1..=m);
    loop {
        seen[next] = true;
        order.push(next);
        for &v in &nbrs[next] {
            if !seen[v] && !in_frontier[v] {
                in_frontier[v] = true;
                frontier.push(v);
            }
        }
        if frontier.is_empty() {
            break;
        }
        let i = rng.gen_range(0..frontier.len());
        next = frontier.swap_remove(i);
    }
    Ok(Ranking::new(order)?)
}

/// `n` random traversals of `g`, so `g` is compatible with the result.
pub fn traversal_profile(g: &Graph, n: usize, seed: u64) -> Result<Profile, GeneratorError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    traversal_profile_with(g, n, &mut rng)
}

pub fn traversal_profile_with<R: Rng + ?Sized>(g: &Graph, n: usize, rng: &mut R) -> Result<Profile, GeneratorError> {
    let rankings = (0..n).map(|_| random_traversal(g, rng)).collect::<Result<Vec<_>, _>>()?;
    Ok(Profile::from_rankings(g.m(), rankings)?)
}

fn shuffled<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vec<usize> {
    let mut v: Vec<usize> = (1..=m).collect();
    v.shuffle(rng);
    v
}

/// Random labelled tree: each vertex of a shuffled order hangs off a uniformly
/// chosen earlier one.
pub fn random_tree<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Graph {
    let order = shuffled(m, rng);
    let mut g = Graph::empty(m);
    for i in 1..order.len() {
        let parent = order[rng.gen_range(0..i)];
        g.insert(Edge::new(parent, order[i]));
    }
    g
}

pub fn random_path<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Graph {
    Graph::path(m, &shuffled(m, rng)).expect("shuffle is a permutation")
}

/// Needs `m >= 3`.
pub fn random_cycle<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Graph {
    Graph::cycle(m, &shuffled(m, rng)).expect("shuffle is a permutation")
}

/// A random tree plus one random extra edge when one exists.
pub fn random_pseudotree<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Graph {
    let mut g = random_tree(m, rng);
    let missing: Vec<Edge> = (1..=m)
        .flat_map(|a| (a + 1..=m).map(move |b| Edge::new(a, b)))
        .filter(|e| !g.has_edge(e.low(), e.high()))
        .collect();
    if let Some(e) = missing.choose(rng) {
        g.insert(*e);
    }
    g
}

fn validate(universe: usize, sets: &[BTreeSet<usize>]) -> Result<(), GeneratorError> {
    if universe == 0 {
        return Err(GeneratorError::EmptyUniverse);
    }
    if sets.is_empty() {
        return Err(GeneratorError::EmptyFamily);
    }
    for (i, s) in sets.iter().enumerate() {
        if s.is_empty() {
            return Err(GeneratorError::EmptySet(i + 1));
        }
        if let Some(&e) = s.iter().find(|&&e| e == 0 || e > universe) {
            return Err(GeneratorError::ElementOutOfRange { set: i + 1, element: e, universe });
        }
    }
    if let Some(e) = (1..=universe).find(|e| !sets.iter().any(|s| s.contains(e))) {
        return Err(GeneratorError::Uncovered(e));
    }
    Ok(())
}

/// Per element: sets containing it (index order), `z`, the other sets, then `tail`.
fn element_voters(universe: usize, sets: &[BTreeSet<usize>], z: usize, tail: &[usize]) -> Vec<Vec<usize>> {
    let ids: Vec<usize> = (1..=sets.len()).collect();
    (1..=universe)
        .map(|e| {
            let (inside, outside): (Vec<usize>, Vec<usize>) = ids.iter().partition(|&&i| sets[i - 1].contains(&e));
            inside.into_iter().chain([z]).chain(outside).chain(tail.iter().copied()).collect()
        })
        .collect()
}

/// Per pair `i < j`: `S_i, S_j`, the other sets, `z`, then `tail`.
fn pair_voters(k: usize, z: usize, tail: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for i in 1..=k {
        for j in i + 1..=k {
            let rest = (1..=k).filter(|&s| s != i && s != j);
            out.push([i, j].into_iter().chain(rest).chain([z]).chain(tail.iter().copied()).collect());
        }
    }
    out
}

fn labelled(m: usize, orders: Vec<Vec<usize>>, labels: Vec<String>) -> Result<Profile, GeneratorError> {
    let entries = orders
        .into_iter()
        .map(|o| Ranking::new(o).map(|r| (r, 1)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Profile::with_labels(m, entries, labels)?)
}

/// Minimum-edge reduction. Candidates are `S_1..S_k` (ids `1..=k`) and `z`
/// (id `k+1`). An edge-optimal compatible graph has `k(k-1)/2 + c` edges
/// where `c` is the minimum cover size.
pub fn setcover_profile_edges(universe: usize, sets: &[BTreeSet<usize>]) -> Result<Profile, GeneratorError> {
    validate(universe, sets)?;
    let k = sets.len();
    let z = k + 1;
    let mut orders = element_voters(universe, sets, z, &[]);
    orders.extend(pair_voters(k, z, &[]));
    let labels = (1..=k).map(|i| format!("S{i}")).chain(["z".to_string()]).collect();
    labelled(k + 1, orders, labels)
}

/// Minimum-degree reduction. Candidates are `S_1..S_k` (`1..=k`), `z` (`k+1`)
/// and `t_1..t_k` (`k+2..=2k+1`). The optimal maximum degree is `k + c`.
pub fn setcover_profile_degree(universe: usize, sets: &[BTreeSet<usize>]) -> Result<Profile, GeneratorError> {
    validate(universe, sets)?;
    let k = sets.len();
    let z = k + 1;
    let t: Vec<usize> = (k + 2..=2 * k + 1).collect();
    let s: Vec<usize> = (1..=k).collect();
    let mut orders = element_voters(universe, sets, z, &t);
    orders.extend(pair_voters(k, z, &t));
    for &ti in &t {
        let others = t.iter().copied().filter(|&x| x != ti);
        orders.push([z, ti].into_iter().chain(others).chain(s.iter().copied()).collect());
    }
    orders.push([t[0]].into_iter().chain(s.iter().copied()).chain([z]).chain(t[1..].iter().copied()).collect());
    let labels = (1..=k)
        .map(|i| format!("S{i}"))
        .chain(["z".to_string()])
        .chain((1..=k).map(|i| format!("t{i}")))
        .collect();
    labelled(2 * k + 1, orders, labels)
}

/// Smallest number of sets covering `1..=universe`, by trying subsets in
/// order of size. `None` if no cover exists.
pub fn min_cover_size(universe: usize, sets: &[BTreeSet<usize>]) -> Option<usize> {
    let k = sets.len();
    assert!(k < usize::BITS as usize, "too many sets to enumerate");
    (0u64..1 << k)
        .filter(|mask| {
            (1..=universe).all(|e| (0..k).any(|i| mask >> i & 1 == 1 && sets[i].contains(&e)))
        })
        .map(|mask| mask.count_ones() as usize)
        .min()
}
