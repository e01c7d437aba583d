//! Exact minimisation of edges or maximum degree over compatible graphs.

mod bnb;
mod brute;
mod export;

pub use bnb::branch_and_bound;
pub use brute::{brute_force, BRUTE_FORCE_LIMIT};
pub use export::{export_model, ExportFormat};

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use thiserror::Error;

use crate::lp::LpError;
use crate::profile::{necessary_edges, Edge, Graph, Profile};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("brute force is limited to {max} candidates, got {m}")]
    TooLarge { m: usize, max: usize },
    #[error("edge {0} is fixed both to one and to zero")]
    ConflictingFixings(Edge),
    #[error("no compatible graph respects the fixings")]
    Infeasible,
    #[error("unsupported export format {0:?}")]
    UnsupportedFormat(String),
    #[error("unknown objective {0:?}, expected edges or degree")]
    UnknownObjective(String),
    #[error(transparent)]
    Lp(#[from] LpError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    MinEdges,
    MinMaxDegree,
}

impl Objective {
    pub fn value(&self, g: &Graph) -> usize {
        match self {
            Objective::MinEdges => g.edge_count(),
            Objective::MinMaxDegree => g.max_degree(),
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::MinEdges => "edges",
            Objective::MinMaxDegree => "degree",
        })
    }
}

impl FromStr for Objective {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edges" | "min-edges" => Ok(Objective::MinEdges),
            "degree" | "min-degree" | "max-degree" => Ok(Objective::MinMaxDegree),
            other => Err(SolverError::UnknownObjective(other.to_string())),
        }
    }
}

/// A minimisation problem over compatible graphs with some pairs forced in or
/// out. [`IlpInstance::new`] forces the necessary edges in.
#[derive(Debug, Clone)]
pub struct IlpInstance<'a> {
    pub profile: &'a Profile,
    pub objective: Objective,
    fixed_one: BTreeSet<Edge>,
    fixed_zero: BTreeSet<Edge>,
}

impl<'a> IlpInstance<'a> {
    pub fn new(profile: &'a Profile, objective: Objective) -> Self {
        IlpInstance { profile, objective, fixed_one: necessary_edges(profile), fixed_zero: BTreeSet::new() }
    }

    pub fn with_fixings(
        profile: &'a Profile,
        objective: Objective,
        fixed_one: BTreeSet<Edge>,
        fixed_zero: BTreeSet<Edge>,
    ) -> Result<Self, SolverError> {
        if let Some(e) = fixed_one.intersection(&fixed_zero).next() {
            return Err(SolverError::ConflictingFixings(*e));
        }
        Ok(IlpInstance { profile, objective, fixed_one, fixed_zero })
    }

    pub fn fixed_one(&self) -> &BTreeSet<Edge> {
        &self.fixed_one
    }

    pub fn fixed_zero(&self) -> &BTreeSet<Edge> {
        &self.fixed_zero
    }

    pub fn m(&self) -> usize {
        self.profile.m()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub objective: Objective,
    pub value: usize,
    pub witness: Graph,
    /// Search nodes whose relaxation was solved (brute force: graphs tested).
    pub nodes: usize,
    /// Relaxation value at the root, before rounding.
    pub root_bound: f64,
    pub elapsed: Duration,
    /// False when the time limit cut the search short.
    pub optimal: bool,
}

/// Every traversal requirement of the profile as a set of pairs, one per
/// distinct ranking and position `2..=m`, in ranking-major order.
pub(crate) fn requirement_sets(p: &Profile) -> Vec<Vec<Edge>> {
    let mut out = Vec::new();
    for r in p.rankings() {
        let o = r.order();
        for k in 1..o.len() {
            out.push(o[..k].iter().map(|&a| Edge::new(a, o[k])).collect());
        }
    }
    out
}

/// Starts from the necessary edges and repeatedly adds the pair that meets
/// the most unmet requirements. Ties go to the pair whose endpoints sit
/// closest together over all rankings, then to the lowest pair.
pub fn greedy_incumbent(p: &Profile) -> Graph {
    let m = p.m();
    let mut g = Graph::empty(m);
    for e in necessary_edges(p) {
        g.insert(e);
    }
    let positions: Vec<Vec<usize>> = p.rankings().map(|r| r.positions()).collect();
    let gap = |e: Edge| -> usize {
        positions.iter().map(|pos| pos[e.low()].abs_diff(pos[e.high()])).sum()
    };
    let mut open: Vec<Vec<Edge>> =
        requirement_sets(p).into_iter().filter(|s| !s.iter().any(|e| g.has_edge(e.low(), e.high()))).collect();
    while !open.is_empty() {
        let mut count = std::collections::BTreeMap::<Edge, usize>::new();
        for s in &open {
            for &e in s {
                *count.entry(e).or_default() += 1;
            }
        }
        let best = count
            .into_iter()
            .min_by_key(|&(e, c)| (std::cmp::Reverse(c), gap(e), e))
            .map(|(e, _)| e)
            .expect("open requirements are nonempty");
        g.insert(best);
        open.retain(|s| !s.contains(&best));
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::is_compatible;

    pub(crate) fn worked_example() -> Profile {
        Profile::from_orders(&[[1, 2, 3, 4, 5], [1, 3, 4, 2, 5], [2, 5, 3, 4, 1], [3, 5, 4, 2, 1]]).unwrap()
    }

    #[test]
    fn greedy_examples() {
        let p = worked_example();
        let g = greedy_incumbent(&p);
        assert!(is_compatible(&g, &p).unwrap());
        assert!(g.edge_count() >= 5 && g.edge_count() <= 6, "{g}");

        let one = Profile::from_orders(&[[3, 1, 4, 2, 5]]).unwrap();
        assert_eq!(greedy_incumbent(&one), Graph::path(5, &[3, 1, 4, 2, 5]).unwrap());

        let tree = Profile::from_orders(&[[1, 2, 3, 4], [2, 1, 3, 4], [4, 1, 2, 3]]).unwrap();
        assert!(is_compatible(&greedy_incumbent(&tree), &tree).unwrap());
    }

    #[test]
    fn conflicting_fixings() {
        let p = worked_example();
        let e: BTreeSet<Edge> = [Edge::new(1, 2)].into_iter().collect();
        assert!(matches!(
            IlpInstance::with_fixings(&p, Objective::MinEdges, e.clone(), e),
            Err(SolverError::ConflictingFixings(_))
        ));
    }

    #[test]
    fn objective_parsing() {
        assert_eq!("edges".parse::<Objective>().unwrap(), Objective::MinEdges);
        assert_eq!("degree".parse::<Objective>().unwrap(), Objective::MinMaxDegree);
        assert!("width".parse::<Objective>().is_err());
    }
}
