use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;

use super::{greedy_incumbent, requirement_sets, IlpInstance, Objective, SolveReport, SolverError};
use crate::lp::{simplex_solve, LpModel, LpRow, LpStatus, PairIndex, RowKind, Sense};
use crate::profile::{is_compatible, Edge, Graph};

const BOUND_SLACK: f64 = 1e-6;
const FRACTIONAL: f64 = 1e-6;

struct Search<'a> {
    inst: &'a IlpInstance<'a>,
    pairs: PairIndex,
    requirements: Vec<Vec<usize>>,
    best: Option<(usize, Graph)>,
    nodes: usize,
}

enum NodeLp {
    Infeasible,
    Solved { bound: f64, values: Vec<(usize, f64)> },
}

fn fixed_graph(pairs: &PairIndex, m: usize, fix: &[Option<bool>]) -> Graph {
    let mut g = Graph::empty(m);
    for (j, f) in fix.iter().enumerate() {
        if *f == Some(true) {
            g.insert(pairs.pair(j));
        }
    }
    g
}

impl Search<'_> {
    fn objective(&self) -> Objective {
        self.inst.objective
    }

    /// Relaxation over the free pairs. Requirements already met by a fixed
    /// pair are dropped, duplicates and supersets of other requirements too.
    fn relax(&self, fix: &[Option<bool>]) -> Result<NodeLp, SolverError> {
        let m = self.inst.m();
        let free: Vec<usize> = (0..fix.len()).filter(|&j| fix[j].is_none()).collect();
        let mut local = vec![usize::MAX; fix.len()];
        for (c, &j) in free.iter().enumerate() {
            local[j] = c;
        }
        let mut sets: Vec<FixedBitSet> = Vec::new();
        for req in &self.requirements {
            if req.iter().any(|&j| fix[j] == Some(true)) {
                continue;
            }
            let mut s = FixedBitSet::with_capacity(free.len());
            s.extend(req.iter().filter(|&&j| fix[j].is_none()).map(|&j| local[j]));
            if s.is_clear() {
                return Ok(NodeLp::Infeasible);
            }
            sets.push(s);
        }
        sets.sort_by_key(|s| s.count_ones(..));
        let mut kept: Vec<FixedBitSet> = Vec::with_capacity(sets.len());
        for s in sets {
            if !kept.iter().any(|k| k.is_subset(&s)) {
                kept.push(s);
            }
        }

        let fixed_count = fix.iter().filter(|f| **f == Some(true)).count();
        let nfree = free.len();
        let mut rows: Vec<LpRow> = kept
            .iter()
            .map(|s| LpRow {
                coeffs: s.ones().map(|c| (c, 1)).collect(),
                sense: Sense::Ge,
                rhs: 1,
                kind: RowKind::Other,
            })
            .collect();
        let (objective, lower, upper, z, constant) = match self.objective() {
            Objective::MinEdges => (vec![1; nfree], vec![0; nfree], vec![Some(1); nfree], None, fixed_count as f64),
            Objective::MinMaxDegree => {
                let z = nfree;
                let mut fixed_deg = vec![0i64; m + 1];
                for (j, f) in fix.iter().enumerate() {
                    if *f == Some(true) {
                        let e = self.pairs.pair(j);
                        fixed_deg[e.low()] += 1;
                        fixed_deg[e.high()] += 1;
                    }
                }
                #[allow(clippy::needless_range_loop)]
                for c in 1..=m {
                    let mut coeffs: Vec<(usize, i64)> = free
                        .iter()
                        .enumerate()
                        .filter(|(_, &j)| self.pairs.pair(j).contains(c))
                        .map(|(col, _)| (col, 1))
                        .collect();
                    coeffs.push((z, -1));
                    rows.push(LpRow {
                        coeffs,
                        sense: Sense::Le,
                        rhs: -fixed_deg[c],
                        kind: RowKind::DegreeLink { candidate: c },
                    });
                }
                let mut obj = vec![0; nfree + 1];
                obj[z] = 1;
                let mut upper = vec![Some(1); nfree];
                upper.push(None);
                (obj, vec![0; nfree + 1], upper, Some(z), 0.0)
            }
        };
        let model = LpModel { pairs: PairIndex::new(0), objective, rows, lower, upper, z };
        let sol = simplex_solve::<f64>(&model)?;
        match sol.status {
            LpStatus::Infeasible => Ok(NodeLp::Infeasible),
            LpStatus::Unbounded => Err(SolverError::Lp(crate::lp::LpError::Malformed(
                "node relaxation is unbounded".into(),
            ))),
            LpStatus::Optimal => Ok(NodeLp::Solved {
                bound: sol.objective + constant,
                values: free.iter().enumerate().map(|(c, &j)| (j, sol.values[c])).collect(),
            }),
        }
    }

    fn offer(&mut self, g: Graph) {
        let v = self.objective().value(&g);
        if self.best.as_ref().is_none_or(|(b, _)| v < *b) {
            self.best = Some((v, g));
        }
    }

    /// Rounds every positive free pair up, then drops added pairs (weakest
    /// first) while the graph stays compatible.
    fn round(&mut self, fix: &[Option<bool>], values: &[(usize, f64)]) {
        let m = self.inst.m();
        let mut g = fixed_graph(&self.pairs, m, fix);
        let mut added: Vec<(f64, Edge)> = Vec::new();
        for &(j, v) in values {
            if v > FRACTIONAL {
                let e = self.pairs.pair(j);
                g.insert(e);
                added.push((v, e));
            }
        }
        if !is_compatible(&g, self.inst.profile).unwrap_or(false) {
            return;
        }
        added.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
        for (_, e) in added {
            g.remove(&e);
            if !is_compatible(&g, self.inst.profile).unwrap_or(false) {
                g.insert(e);
            }
        }
        self.offer(g);
    }
}

/// Depth-first branch and bound on the pair variables with float LP bounds.
/// Each node bound is the relaxation value rounded up; the branching pair is
/// the most fractional one and its 1-branch is explored first.
pub fn branch_and_bound(inst: &IlpInstance<'_>, time_limit: Duration) -> Result<SolveReport, SolverError> {
    let start = Instant::now();
    let m = inst.m();
    let pairs = PairIndex::new(m);
    let requirements = requirement_sets(inst.profile)
        .into_iter()
        .map(|s| s.into_iter().map(|e| pairs.edge_index(e)).collect())
        .collect();
    let mut fix: Vec<Option<bool>> = vec![None; pairs.len()];
    for e in inst.fixed_one() {
        fix[pairs.edge_index(*e)] = Some(true);
    }
    for e in inst.fixed_zero() {
        fix[pairs.edge_index(*e)] = Some(false);
    }
    let mut search = Search { inst, pairs, requirements, best: None, nodes: 0 };

    let greedy = greedy_incumbent(inst.profile);
    if greedy.edges().all(|e| !inst.fixed_zero().contains(&e))
        && inst.fixed_one().iter().all(|e| greedy.has_edge(e.low(), e.high()))
    {
        search.offer(greedy);
    }

    let mut root_bound = None;
    let mut optimal = true;
    let mut stack = vec![fix];
    while let Some(fix) = stack.pop() {
        if start.elapsed() > time_limit {
            optimal = false;
            break;
        }
        search.nodes += 1;
        let (bound, values) = match search.relax(&fix)? {
            NodeLp::Infeasible => {
                if root_bound.is_none() {
                    return Err(SolverError::Infeasible);
                }
                continue;
            }
            NodeLp::Solved { bound, values } => (bound, values),
        };
        if root_bound.is_none() {
            root_bound = Some(bound);
        }
        let ceil = (bound - BOUND_SLACK).ceil().max(0.0) as usize;
        if search.best.as_ref().is_some_and(|(b, _)| ceil >= *b) {
            continue;
        }
        let branch = values
            .iter()
            .filter(|(_, v)| *v > FRACTIONAL && *v < 1.0 - FRACTIONAL)
            .min_by(|a, b| (a.1 - 0.5).abs().total_cmp(&(b.1 - 0.5).abs()).then(a.0.cmp(&b.0)))
            .map(|&(j, _)| j);
        match branch {
            None => {
                let mut g = fixed_graph(&search.pairs, m, &fix);
                for &(j, v) in &values {
                    if v > 0.5 {
                        g.insert(search.pairs.pair(j));
                    }
                }
                search.offer(g);
            }
            Some(j) => {
                search.round(&fix, &values);
                let mut zero = fix.clone();
                zero[j] = Some(false);
                let mut one = fix;
                one[j] = Some(true);
                stack.push(zero);
                stack.push(one);
            }
        }
    }
    let (value, witness) = search.best.ok_or(SolverError::Infeasible)?;
    Ok(SolveReport {
        objective: inst.objective,
        value,
        witness,
        nodes: search.nodes,
        root_bound: root_bound.unwrap_or(0.0),
        elapsed: start.elapsed(),
        optimal,
    })
}
