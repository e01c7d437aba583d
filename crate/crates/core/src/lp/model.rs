use std::collections::BTreeSet;

use crate::profile::{Edge, Graph, Profile};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Ge,
    Le,
    Eq,
}

impl Sense {
    pub fn symbol(&self) -> &'static str {
        match self {
            Sense::Ge => ">=",
            Sense::Le => "<=",
            Sense::Eq => "=",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    /// `ranking` (index among distinct rankings) must reach its candidate at
    /// 1-based `position` through an earlier one.
    Traversal { ranking: usize, position: usize },
    /// Degree of `candidate` at most the right-hand side.
    DegreeCap { candidate: usize },
    /// Degree of `candidate` at most the auxiliary variable z.
    DegreeLink { candidate: usize },
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpRow {
    pub coeffs: Vec<(usize, i64)>,
    pub sense: Sense,
    pub rhs: i64,
    pub kind: RowKind,
}

/// Bijection between unordered candidate pairs and variable indices `0..C(m,2)`,
/// in lexicographic pair order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairIndex {
    m: usize,
    pairs: Vec<Edge>,
}

impl PairIndex {
    pub fn new(m: usize) -> Self {
        let mut pairs = Vec::with_capacity(m * m.saturating_sub(1) / 2);
        for a in 1..=m {
            for b in a + 1..=m {
                pairs.push(Edge::new(a, b));
            }
        }
        PairIndex { m, pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn index(&self, a: usize, b: usize) -> usize {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        debug_assert!(a >= 1 && a < b && b <= self.m);
        (a - 1) * (2 * self.m - a) / 2 + (b - a - 1)
    }

    pub fn edge_index(&self, e: Edge) -> usize {
        self.index(e.low(), e.high())
    }

    pub fn pair(&self, idx: usize) -> Edge {
        self.pairs[idx]
    }

    pub fn pairs(&self) -> &[Edge] {
        &self.pairs
    }
}

/// A linear program over one variable per candidate pair, optionally followed
/// by the auxiliary max-degree variable `z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpModel {
    pub pairs: PairIndex,
    pub objective: Vec<i64>,
    pub rows: Vec<LpRow>,
    pub lower: Vec<i64>,
    pub upper: Vec<Option<i64>>,
    pub z: Option<usize>,
}

impl LpModel {
    pub fn m(&self) -> usize {
        self.pairs.m
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn var_name(&self, j: usize) -> String {
        if Some(j) == self.z {
            "z".to_string()
        } else {
            let e = self.pairs.pair(j);
            format!("x_{}_{}", e.low(), e.high())
        }
    }

    /// Traversal rows only.
    pub fn traversal_rows(&self) -> impl Iterator<Item = &LpRow> + '_ {
        self.rows.iter().filter(|r| matches!(r.kind, RowKind::Traversal { .. }))
    }

    /// The graph selected by pair values equal to one; `None` if any pair value
    /// is fractional.
    pub fn integral_graph(&self, values: &[f64], tol: f64) -> Option<Graph> {
        let mut g = Graph::empty(self.m());
        for (j, e) in self.pairs.pairs().iter().enumerate() {
            let v = values[j];
            if (v - 1.0).abs() <= tol {
                g.insert(*e);
            } else if v.abs() > tol {
                return None;
            }
        }
        Some(g)
    }
}

fn traversal_rows(p: &Profile, pairs: &PairIndex) -> Vec<LpRow> {
    let mut rows = Vec::with_capacity(p.distinct_count() * p.m().saturating_sub(1));
    for (i, r) in p.rankings().enumerate() {
        let order = r.order();
        for k in 1..order.len() {
            let coeffs = order[..k].iter().map(|&prev| (pairs.index(prev, order[k]), 1)).collect();
            rows.push(LpRow {
                coeffs,
                sense: Sense::Ge,
                rhs: 1,
                kind: RowKind::Traversal { ranking: i, position: k + 1 },
            });
        }
    }
    rows
}

fn incident(pairs: &PairIndex, c: usize) -> Vec<(usize, i64)> {
    (1..=pairs.m).filter(|&l| l != c).map(|l| (pairs.index(c, l), 1)).collect()
}

/// Minimum-edge relaxation: one `>= 1` row per distinct ranking and position
/// `2..=m`, every pair variable in `[0, 1]`.
pub fn build_lp_sp(p: &Profile) -> LpModel {
    let pairs = PairIndex::new(p.m());
    let n = pairs.len();
    LpModel {
        rows: traversal_rows(p, &pairs),
        objective: vec![1; n],
        lower: vec![0; n],
        upper: vec![Some(1); n],
        z: None,
        pairs,
    }
}

/// [`build_lp_sp`] plus a degree-at-most-two row per candidate.
pub fn build_lp_sp2(p: &Profile) -> LpModel {
    let mut model = build_lp_sp(p);
    for c in 1..=p.m() {
        model.rows.push(LpRow {
            coeffs: incident(&model.pairs, c),
            sense: Sense::Le,
            rhs: 2,
            kind: RowKind::DegreeCap { candidate: c },
        });
    }
    model
}

/// Minimum max-degree relaxation: minimise `z` subject to traversal rows and
/// `deg(c) - z <= 0` for every candidate.
pub fn build_min_degree(p: &Profile) -> LpModel {
    let pairs = PairIndex::new(p.m());
    let n = pairs.len();
    let z = n;
    let mut rows = traversal_rows(p, &pairs);
    for c in 1..=p.m() {
        let mut coeffs = incident(&pairs, c);
        coeffs.push((z, -1));
        rows.push(LpRow { coeffs, sense: Sense::Le, rhs: 0, kind: RowKind::DegreeLink { candidate: c } });
    }
    let mut objective = vec![0; n + 1];
    objective[z] = 1;
    let mut upper = vec![Some(1); n];
    upper.push(None);
    LpModel { pairs, objective, rows, lower: vec![0; n + 1], upper, z: Some(z) }
}

/// Pair-variable sets of the traversal rows, used by tests and the exporter.
pub fn row_supports(model: &LpModel) -> Vec<BTreeSet<usize>> {
    model.traversal_rows().map(|r| r.coeffs.iter().map(|&(j, _)| j).collect()).collect()
}
