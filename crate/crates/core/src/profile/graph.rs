use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use super::ProfileError;

/// An undirected edge between two candidates, stored with the smaller id first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(usize, usize);

impl Edge {
    /// Builds the edge `{a, b}`. Panics on a self-loop.
    pub fn new(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "self-loop {a}-{a}");
        if a < b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn low(&self) -> usize {
        self.0
    }

    pub fn high(&self) -> usize {
        self.1
    }

    pub fn contains(&self, c: usize) -> bool {
        self.0 == c || self.1 == c
    }

    /// The endpoint that is not `c`.
    pub fn other(&self, c: usize) -> usize {
        if self.0 == c {
            self.1
        } else {
            self.0
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

/// Simple undirected graph on the candidates `1..=m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    m: usize,
    edges: BTreeSet<Edge>,
}

impl Graph {
    pub fn empty(m: usize) -> Self {
        Graph { m, edges: BTreeSet::new() }
    }

    pub fn complete(m: usize) -> Self {
        let mut g = Graph::empty(m);
        for a in 1..=m {
            for b in a + 1..=m {
                g.edges.insert(Edge(a, b));
            }
        }
        g
    }

    /// Builds a graph from `(a, b)` pairs; rejects loops, out-of-range ids and duplicates.
    pub fn from_edges<I>(m: usize, pairs: I) -> Result<Self, ProfileError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(m);
        for (a, b) in pairs {
            if !g.add_edge(a, b)? {
                return Err(ProfileError::DuplicateEdge(a, b));
            }
        }
        Ok(g)
    }

    /// The path visiting `order` in sequence.
    pub fn path(m: usize, order: &[usize]) -> Result<Self, ProfileError> {
        Graph::from_edges(m, order.windows(2).map(|w| (w[0], w[1])))
    }

    /// The cycle visiting `order` in sequence and closing back to the start.
    pub fn cycle(m: usize, order: &[usize]) -> Result<Self, ProfileError> {
        let mut g = Graph::path(m, order)?;
        if order.len() >= 3 {
            g.add_edge(order[order.len() - 1], order[0])?;
        }
        Ok(g)
    }

    /// Inserts `{a, b}`; returns whether the edge was new.
    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<bool, ProfileError> {
        if a == b {
            return Err(ProfileError::SelfLoop(a));
        }
        for c in [a, b] {
            if c == 0 || c > self.m {
                return Err(ProfileError::CandidateOutOfRange { candidate: c, m: self.m });
            }
        }
        Ok(self.edges.insert(Edge::new(a, b)))
    }

    pub fn insert(&mut self, e: Edge) -> bool {
        debug_assert!(e.high() <= self.m);
        self.edges.insert(e)
    }

    pub fn remove(&mut self, e: &Edge) -> bool {
        self.edges.remove(e)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.edges.contains(&Edge::new(a, b))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_set(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, c: usize) -> usize {
        self.edges.iter().filter(|e| e.contains(c)).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.m + 1];
        for e in &self.edges {
            deg[e.low()] += 1;
            deg[e.high()] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Edges divided by `C(m, 2)`; zero for `m < 2`.
    pub fn density(&self) -> f64 {
        let pairs = self.m * self.m.saturating_sub(1) / 2;
        if pairs == 0 {
            0.0
        } else {
            self.edges.len() as f64 / pairs as f64
        }
    }

    /// Dense adjacency matrix indexed by candidate id (row and column 0 unused).
    pub fn adjacency(&self) -> Vec<Vec<bool>> {
        let mut adj = vec![vec![false; self.m + 1]; self.m + 1];
        for e in &self.edges {
            adj[e.low()][e.high()] = true;
            adj[e.high()][e.low()] = true;
        }
        adj
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut nb = vec![Vec::new(); self.m + 1];
        for e in &self.edges {
            nb[e.low()].push(e.high());
            nb[e.high()].push(e.low());
        }
        nb
    }

    pub fn is_connected(&self) -> bool {
        if self.m <= 1 {
            return true;
        }
        let nb = self.neighbors();
        let mut seen = vec![false; self.m + 1];
        let mut queue = VecDeque::from([1]);
        seen[1] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &nb[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.m
    }

    pub fn is_tree(&self) -> bool {
        self.m >= 1 && self.edge_count() + 1 == self.m && self.is_connected()
    }

    pub fn is_path(&self) -> bool {
        self.is_tree() && self.max_degree() <= 2
    }

    /// Connected with every vertex of degree exactly two.
    pub fn is_cycle(&self) -> bool {
        self.m >= 3 && self.is_connected() && self.degrees()[1..].iter().all(|&d| d == 2)
    }

    /// Connected with at most one cycle, i.e. at most `m` edges.
    pub fn is_pseudotree(&self) -> bool {
        self.is_connected() && self.edge_count() <= self.m
    }

    /// Walks a path graph from its lower-numbered end. `None` if not a path.
    pub fn path_order(&self) -> Option<Vec<usize>> {
        if !self.is_path() {
            return None;
        }
        if self.m == 1 {
            return Some(vec![1]);
        }
        let nb = self.neighbors();
        let start = (1..=self.m).find(|&v| nb[v].len() == 1)?;
        let mut order = vec![start];
        let mut prev = 0;
        let mut cur = start;
        while let Some(&next) = nb[cur].iter().find(|&&w| w != prev) {
            order.push(next);
            prev = cur;
            cur = next;
        }
        Some(order)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for e in &self.edges {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structural_predicates() {
        let p = Graph::path(4, &[2, 1, 4, 3]).unwrap();
        assert!(p.is_path() && p.is_tree() && p.is_pseudotree());
        assert_eq!(p.path_order().unwrap(), vec![2, 1, 4, 3]);
        let c = Graph::cycle(4, &[1, 2, 3, 4]).unwrap();
        assert!(c.is_cycle() && !c.is_tree() && c.is_pseudotree());
        let star = Graph::from_edges(4, [(1, 2), (1, 3), (1, 4)]).unwrap();
        assert!(star.is_tree() && !star.is_path());
        assert_eq!(star.max_degree(), 3);
        assert!(!Graph::empty(3).is_connected());
        assert!(Graph::complete(5).density() == 1.0);
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(Graph::from_edges(3, [(1, 1)]), Err(ProfileError::SelfLoop(1))));
        assert!(Graph::from_edges(3, [(1, 4)]).is_err());
        assert!(Graph::from_edges(3, [(1, 2), (2, 1)]).is_err());
    }

    #[test]
    fn display_lists_sorted_edges() {
        let g = Graph::from_edges(5, [(3, 4), (1, 2), (5, 2)]).unwrap();
        assert_eq!(g.to_string(), "1-2 2-5 3-4");
    }
}
