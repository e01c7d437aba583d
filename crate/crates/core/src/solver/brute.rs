use std::time::Instant;

use super::{requirement_sets, Objective, SolveReport, SolverError};
use crate::lp::PairIndex;
use crate::profile::{is_compatible, necessary_edges, Graph, Profile};

pub const BRUTE_FORCE_LIMIT: usize = 7;

/// Exhaustive oracle for small profiles.
///
/// For edges, subsets of the non-necessary pairs are tried by increasing size
/// and in lexicographic order within a size. For degree, each cap `d` is tried
/// in turn and a depth-first search looks for a compatible graph with maximum
/// degree at most `d`.
pub fn brute_force(p: &Profile, objective: Objective) -> Result<SolveReport, SolverError> {
    let m = p.m();
    if m > BRUTE_FORCE_LIMIT {
        return Err(SolverError::TooLarge { m, max: BRUTE_FORCE_LIMIT });
    }
    let start = Instant::now();
    let (witness, nodes) = match objective {
        Objective::MinEdges => min_edges(p),
        Objective::MinMaxDegree => min_degree(p),
    };
    Ok(SolveReport {
        objective,
        value: objective.value(&witness),
        witness,
        nodes,
        root_bound: f64::NAN,
        elapsed: start.elapsed(),
        optimal: true,
    })
}

fn min_edges(p: &Profile) -> (Graph, usize) {
    let m = p.m();
    let nec = necessary_edges(p);
    let mut base = Graph::empty(m);
    for &e in &nec {
        base.insert(e);
    }
    let free: Vec<_> = PairIndex::new(m).pairs().iter().copied().filter(|e| !nec.contains(e)).collect();
    let mut tested = 0;
    let first = m.saturating_sub(1).saturating_sub(nec.len());
    for k in first..=free.len() {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let mut g = base.clone();
            for &i in &idx {
                g.insert(free[i]);
            }
            tested += 1;
            if is_compatible(&g, p).expect("same candidate count") {
                return (g, tested);
            }
            // next k-combination of 0..free.len()
            let n = free.len();
            let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else { break };
            idx[i] += 1;
            for t in i + 1..k {
                idx[t] = idx[t - 1] + 1;
            }
        }
    }
    unreachable!("the complete graph is compatible with every profile")
}

struct DegreeSearch<'a> {
    m: usize,
    cap: usize,
    pairs: &'a [crate::profile::Edge],
    requirements: Vec<Vec<usize>>,
    /// Per pair: `Some(true)` chosen, `Some(false)` rejected, `None` undecided.
    state: Vec<Option<bool>>,
    degree: Vec<usize>,
    visited: usize,
}

impl DegreeSearch<'_> {
    fn possible(&self, j: usize) -> bool {
        match self.state[j] {
            Some(s) => s,
            None => {
                let e = self.pairs[j];
                self.degree[e.low()] < self.cap && self.degree[e.high()] < self.cap
            }
        }
    }

    fn alive(&self) -> bool {
        self.requirements.iter().all(|r| r.iter().any(|&j| self.possible(j)))
    }

    fn dfs(&mut self, j: usize) -> Option<Graph> {
        self.visited += 1;
        if !self.alive() {
            return None;
        }
        if j == self.pairs.len() {
            let mut g = Graph::empty(self.m);
            for (i, s) in self.state.iter().enumerate() {
                if *s == Some(true) {
                    g.insert(self.pairs[i]);
                }
            }
            return Some(g);
        }
        if self.state[j].is_some() {
            return self.dfs(j + 1);
        }
        let e = self.pairs[j];
        if self.degree[e.low()] < self.cap && self.degree[e.high()] < self.cap {
            self.state[j] = Some(true);
            self.degree[e.low()] += 1;
            self.degree[e.high()] += 1;
            let found = self.dfs(j + 1);
            self.degree[e.low()] -= 1;
            self.degree[e.high()] -= 1;
            if found.is_some() {
                self.state[j] = None;
                return found;
            }
        }
        self.state[j] = Some(false);
        let found = self.dfs(j + 1);
        self.state[j] = None;
        found
    }
}

fn min_degree(p: &Profile) -> (Graph, usize) {
    let m = p.m();
    let index = PairIndex::new(m);
    let requirements: Vec<Vec<usize>> = requirement_sets(p)
        .into_iter()
        .map(|s| s.into_iter().map(|e| index.edge_index(e)).collect())
        .collect();
    let nec = necessary_edges(p);
    let mut degree = vec![0; m + 1];
    let mut state = vec![None; index.len()];
    for e in &nec {
        state[index.edge_index(*e)] = Some(true);
        degree[e.low()] += 1;
        degree[e.high()] += 1;
    }
    let floor = degree.iter().copied().max().unwrap_or(0);
    let mut visited = 0;
    for cap in floor..m.max(1) {
        let mut s = DegreeSearch {
            m,
            cap,
            pairs: index.pairs(),
            requirements: requirements.clone(),
            state: state.clone(),
            degree: degree.clone(),
            visited: 0,
        };
        let found = s.dfs(0);
        visited += s.visited;
        if let Some(g) = found {
            debug_assert!(is_compatible(&g, p).unwrap());
            return (g, visited);
        }
    }
    (Graph::complete(m), visited)
}
