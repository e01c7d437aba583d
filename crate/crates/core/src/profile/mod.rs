//! Rankings, profiles and graphs over a dense candidate set `1..=m`, plus the
//! traversal test that defines single-peakedness on a graph.

mod graph;
pub mod soc;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub use graph::{Edge, Graph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProfileError {
    #[error("ranking is not a permutation of 1..={m}: {order:?}")]
    NotAPermutation { order: Vec<usize>, m: usize },
    #[error("ranking has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("graph has {graph} vertices but the profile has {profile} candidates")]
    DimensionMismatch { graph: usize, profile: usize },
    #[error("candidate {candidate} outside 1..={m}")]
    CandidateOutOfRange { candidate: usize, m: usize },
    #[error("self-loop on candidate {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("multiplicity must be at least 1")]
    ZeroMultiplicity,
    #[error("a profile needs at least one candidate")]
    NoCandidates,
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
}

/// A strict complete order; position `p` holds the `p+1`-th preferred candidate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ranking(Vec<usize>);

impl Ranking {
    pub fn new(order: Vec<usize>) -> Result<Self, ProfileError> {
        let m = order.len();
        let mut seen = vec![false; m + 1];
        for &c in &order {
            if c == 0 || c > m || seen[c] {
                return Err(ProfileError::NotAPermutation { order, m });
            }
            seen[c] = true;
        }
        Ok(Ranking(order))
    }

    /// The ranking `1, 2, ..., m`.
    pub fn identity(m: usize) -> Self {
        Ranking((1..=m).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn order(&self) -> &[usize] {
        &self.0
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// `positions()[c]` is the 0-based position of candidate `c`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![usize::MAX; self.0.len() + 1];
        for (p, &c) in self.0.iter().enumerate() {
            pos[c] = p;
        }
        pos
    }

    pub fn reversed(&self) -> Ranking {
        Ranking(self.0.iter().rev().copied().collect())
    }

    /// The unordered pair formed by the two most preferred candidates.
    pub fn top_pair(&self) -> Option<Edge> {
        match self.0.as_slice() {
            [a, b, ..] => Some(Edge::new(*a, *b)),
            _ => None,
        }
    }
}

impl fmt::Display for Ranking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Distinct rankings with multiplicities. Identical rankings are merged on
/// construction, keeping first-appearance order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    m: usize,
    entries: Vec<(Ranking, u64)>,
    labels: Vec<String>,
}

impl Profile {
    pub fn new(m: usize, entries: Vec<(Ranking, u64)>) -> Result<Self, ProfileError> {
        Profile::with_labels(m, entries, (1..=m).map(|c| c.to_string()).collect())
    }

    pub fn with_labels(
        m: usize,
        entries: Vec<(Ranking, u64)>,
        labels: Vec<String>,
    ) -> Result<Self, ProfileError> {
        if m == 0 {
            return Err(ProfileError::NoCandidates);
        }
        if labels.len() != m {
            return Err(ProfileError::LabelCount { expected: m, got: labels.len() });
        }
        let mut merged: Vec<(Ranking, u64)> = Vec::with_capacity(entries.len());
        let mut index: std::collections::HashMap<Ranking, usize> = std::collections::HashMap::new();
        for (r, count) in entries {
            if r.len() != m {
                return Err(ProfileError::LengthMismatch { expected: m, got: r.len() });
            }
            if count == 0 {
                return Err(ProfileError::ZeroMultiplicity);
            }
            match index.get(&r) {
                Some(&i) => merged[i].1 += count,
                None => {
                    index.insert(r.clone(), merged.len());
                    merged.push((r, count));
                }
            }
        }
        Ok(Profile { m, entries: merged, labels })
    }

    /// One voter per ranking.
    pub fn from_rankings<I>(m: usize, rankings: I) -> Result<Self, ProfileError>
    where
        I: IntoIterator<Item = Ranking>,
    {
        Profile::new(m, rankings.into_iter().map(|r| (r, 1)).collect())
    }

    /// Shorthand used heavily in tests: one voter per order, `m` taken from the first.
    pub fn from_orders<O: AsRef<[usize]>>(orders: &[O]) -> Result<Self, ProfileError> {
        let m = orders.first().map(|o| o.as_ref().len()).unwrap_or(0);
        let rankings = orders
            .iter()
            .map(|o| Ranking::new(o.as_ref().to_vec()))
            .collect::<Result<Vec<_>, _>>()?;
        Profile::from_rankings(m, rankings)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn entries(&self) -> &[(Ranking, u64)] {
        &self.entries
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, c: usize) -> &str {
        &self.labels[c - 1]
    }

    /// Distinct rankings in first-appearance order.
    pub fn rankings(&self) -> impl Iterator<Item = &Ranking> + '_ {
        self.entries.iter().map(|(r, _)| r)
    }

    pub fn distinct_count(&self) -> usize {
        self.entries.len()
    }

    /// Number of voters, i.e. the sum of multiplicities.
    pub fn voter_count(&self) -> u64 {
        self.entries.iter().map(|(_, c)| c).sum()
    }
}

fn check_dims(g: &Graph, m: usize) -> Result<(), ProfileError> {
    if g.m() != m {
        return Err(ProfileError::DimensionMismatch { graph: g.m(), profile: m });
    }
    Ok(())
}

/// Each candidate after the first must touch an earlier one; this is equivalent
/// to every prefix inducing a connected subgraph.
pub(crate) fn traverses(adj: &[Vec<bool>], order: &[usize]) -> bool {
    for (k, &c) in order.iter().enumerate().skip(1) {
        if !order[..k].iter().any(|&prev| adj[c][prev]) {
            return false;
        }
    }
    true
}

pub fn is_traversal(g: &Graph, r: &Ranking) -> Result<bool, ProfileError> {
    check_dims(g, r.len())?;
    Ok(traverses(&g.adjacency(), r.order()))
}

/// True iff every ranking of `p` is a traversal of `g`.
pub fn is_compatible(g: &Graph, p: &Profile) -> Result<bool, ProfileError> {
    check_dims(g, p.m())?;
    let adj = g.adjacency();
    Ok(p.rankings().all(|r| traverses(&adj, r.order())))
}

/// Pairs ranked in the first two positions by some voter. These belong to every
/// compatible graph.
pub fn necessary_edges(p: &Profile) -> BTreeSet<Edge> {
    p.rankings().filter_map(Ranking::top_pair).collect()
}
