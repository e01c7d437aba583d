//! Polynomial recognition of profiles that are single-peaked on an axis, a
//! tree, a cycle or a pseudotree.
//!
//! Trees come from leaf elimination: a candidate ranked last by someone must be
//! a leaf, and its admissible neighbours are the intersection of the voters'
//! upper-contour sets (the A-set). Pseudotrees peel off every candidate with a
//! nonempty A-set and hand the remainder to the cycle test. Axes and cycles are
//! interval problems: each ranking prefix must be a contiguous interval or arc,
//! decided by [`ones`].

pub mod ones;

use std::collections::BTreeSet;
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::profile::{Graph, Profile};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecognitionError {
    #[error("{structure} recognition needs at least {needed} candidates, got {got}")]
    TooFewCandidates { structure: Structure, needed: usize, got: usize },
    #[error("internal consistency violation: {0}")]
    Consistency(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Structure {
    Axis,
    Tree,
    Cycle,
    Pseudotree,
}

impl Structure {
    /// Whether `g` belongs to this graph class.
    pub fn admits(&self, g: &Graph) -> bool {
        match self {
            Structure::Axis => g.is_path(),
            Structure::Tree => g.is_tree(),
            Structure::Cycle => g.is_cycle(),
            Structure::Pseudotree => g.is_pseudotree(),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Structure::Axis => "axis",
            Structure::Tree => "tree",
            Structure::Cycle => "cycle",
            Structure::Pseudotree => "pseudotree",
        }
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Compatible,
    Incompatible,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Compatible => "COMPATIBLE",
            Verdict::Incompatible => "INCOMPATIBLE",
        })
    }
}

/// One leaf removal: the candidate, its admissible attachments at that point
/// (the B-set), and the attachment used in the witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationStep {
    pub removed: usize,
    pub attachments: BTreeSet<usize>,
    pub chosen: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EliminationCertificate {
    pub steps: Vec<EliminationStep>,
    /// Candidates left when elimination stopped, ascending.
    pub core: Vec<usize>,
}

impl EliminationCertificate {
    /// Elimination went all the way down to a single root.
    pub fn is_complete(&self) -> bool {
        self.core.len() == 1
    }

    /// Candidates in elimination order followed by the core.
    pub fn order(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.removed).chain(self.core.iter().copied()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecognitionResult {
    pub structure: Structure,
    pub verdict: Verdict,
    pub witness: Option<Graph>,
    pub certificate: Option<EliminationCertificate>,
}

impl RecognitionResult {
    pub fn compatible(
        structure: Structure,
        witness: Graph,
        certificate: Option<EliminationCertificate>,
    ) -> Self {
        RecognitionResult { structure, verdict: Verdict::Compatible, witness: Some(witness), certificate }
    }

    pub fn incompatible(structure: Structure, certificate: Option<EliminationCertificate>) -> Self {
        RecognitionResult { structure, verdict: Verdict::Incompatible, witness: None, certificate }
    }

    pub fn is_compatible(&self) -> bool {
        self.verdict == Verdict::Compatible
    }
}

/// A profile with some candidates deleted from every ranking; candidate ids
/// keep their original numbering.
#[derive(Debug, Clone)]
pub struct RestrictedProfile {
    m: usize,
    rankings: Vec<Vec<usize>>,
    alive: Vec<bool>,
    remaining: usize,
}

impl RestrictedProfile {
    pub fn new(p: &Profile) -> Self {
        RestrictedProfile {
            m: p.m(),
            rankings: p.rankings().map(|r| r.order().to_vec()).collect(),
            alive: std::iter::once(false).chain(std::iter::repeat_n(true, p.m())).collect(),
            remaining: p.m(),
        }
    }

    pub fn remaining(&self) -> usize {
        self.remaining
    }

    pub fn candidates(&self) -> Vec<usize> {
        (1..=self.m).filter(|&c| self.alive[c]).collect()
    }

    pub fn rankings(&self) -> &[Vec<usize>] {
        &self.rankings
    }

    pub fn remove(&mut self, c: usize) {
        if !self.alive[c] {
            return;
        }
        self.alive[c] = false;
        self.remaining -= 1;
        for r in &mut self.rankings {
            r.retain(|&x| x != c);
        }
        self.rankings.sort_unstable();
        self.rankings.dedup();
    }

    /// Candidates ranked last by at least one voter, ascending.
    pub fn last_ranked(&self) -> BTreeSet<usize> {
        self.rankings.iter().filter_map(|r| r.last().copied()).collect()
    }

    /// Intersection over voters of the candidates ranked above `k`; a voter
    /// ranking `k` first contributes only their second choice.
    pub fn a_set(&self, k: usize) -> BTreeSet<usize> {
        let mut hits = vec![0usize; self.m + 1];
        for r in &self.rankings {
            let pos = r.iter().position(|&c| c == k).expect("candidate removed");
            if pos == 0 {
                match r.get(1) {
                    Some(&second) => hits[second] += 1,
                    None => return BTreeSet::new(),
                }
            } else {
                for &c in &r[..pos] {
                    hits[c] += 1;
                }
            }
        }
        let n = self.rankings.len();
        (1..=self.m).filter(|&c| hits[c] == n && n > 0).collect()
    }
}

pub fn a_set(p: &Profile, k: usize) -> BTreeSet<usize> {
    RestrictedProfile::new(p).a_set(k)
}

fn leaf_edges_graph(m: usize, steps: &[EliminationStep]) -> Graph {
    let mut g = Graph::empty(m);
    for s in steps {
        g.add_edge(s.removed, s.chosen).expect("attachment is a distinct live candidate");
    }
    g
}

/// Leaf elimination. The lowest-numbered last-ranked candidate is removed
/// first and attached to the lowest member of its A-set; the certificate keeps
/// every A-set so all compatible trees can be rebuilt.
pub fn recognize_tree(p: &Profile) -> RecognitionResult {
    let mut rp = RestrictedProfile::new(p);
    let mut steps = Vec::with_capacity(p.m());
    while rp.remaining() > 1 {
        let k = *rp.last_ranked().first().expect("nonempty rankings");
        let attachments = rp.a_set(k);
        let Some(&chosen) = attachments.first() else {
            let cert = EliminationCertificate { steps, core: rp.candidates() };
            return RecognitionResult::incompatible(Structure::Tree, Some(cert));
        };
        steps.push(EliminationStep { removed: k, attachments, chosen });
        rp.remove(k);
    }
    let witness = leaf_edges_graph(p.m(), &steps);
    let cert = EliminationCertificate { steps, core: rp.candidates() };
    RecognitionResult::compatible(Structure::Tree, witness, Some(cert))
}

fn prefix_rows(candidates: &[usize], rankings: &[Vec<usize>], m: usize) -> Vec<FixedBitSet> {
    let mut local = vec![usize::MAX; m + 1];
    for (i, &c) in candidates.iter().enumerate() {
        local[c] = i;
    }
    let n = candidates.len();
    let mut rows = Vec::new();
    for r in rankings {
        let mut row = FixedBitSet::with_capacity(n);
        for (k, &c) in r.iter().enumerate() {
            row.insert(local[c]);
            if k >= 1 && k + 1 < n {
                rows.push(row.clone());
            }
        }
    }
    rows
}

/// Orders `candidates` so that every ranking prefix is an interval.
pub(crate) fn axis_order(candidates: &[usize], rankings: &[Vec<usize>], m: usize) -> Option<Vec<usize>> {
    let rows = prefix_rows(candidates, rankings, m);
    ones::consecutive_ones(candidates.len(), &rows)
        .map(|o| o.into_iter().map(|i| candidates[i]).collect())
}

/// Cyclically orders `candidates` so that every ranking prefix is an arc.
pub(crate) fn cycle_order(candidates: &[usize], rankings: &[Vec<usize>], m: usize) -> Option<Vec<usize>> {
    let rows = prefix_rows(candidates, rankings, m);
    ones::circular_ones(candidates.len(), &rows)
        .map(|o| o.into_iter().map(|i| candidates[i]).collect())
}

/// Single-peakedness on an axis: every prefix of every ranking must be an
/// interval of the axis, which is a consecutive-ones question on the matrix
/// of prefixes.
pub fn recognize_path(p: &Profile) -> RecognitionResult {
    let rp = RestrictedProfile::new(p);
    match axis_order(&rp.candidates(), rp.rankings(), p.m()) {
        Some(order) => {
            let g = Graph::path(p.m(), &order).expect("order is a permutation");
            RecognitionResult::compatible(Structure::Axis, g, None)
        }
        None => RecognitionResult::incompatible(Structure::Axis, None),
    }
}

pub fn recognize_cycle(p: &Profile) -> Result<RecognitionResult, RecognitionError> {
    if p.m() < 3 {
        return Err(RecognitionError::TooFewCandidates {
            structure: Structure::Cycle,
            needed: 3,
            got: p.m(),
        });
    }
    let rp = RestrictedProfile::new(p);
    Ok(match cycle_order(&rp.candidates(), rp.rankings(), p.m()) {
        Some(order) => {
            let g = Graph::cycle(p.m(), &order).expect("order is a permutation");
            RecognitionResult::compatible(Structure::Cycle, g, None)
        }
        None => RecognitionResult::incompatible(Structure::Cycle, None),
    })
}

/// Pseudotree recognition with the default choice: lowest-numbered candidate
/// with a nonempty A-set first.
pub fn recognize_pseudotree(p: &Profile) -> RecognitionResult {
    recognize_pseudotree_with(p, |_| 0)
}

/// Pseudotree recognition where `choose` picks which eligible candidate to
/// detach next; it receives the ascending list of candidates with a nonempty
/// A-set and returns an index into it.
pub fn recognize_pseudotree_with<F>(p: &Profile, mut choose: F) -> RecognitionResult
where
    F: FnMut(&[usize]) -> usize,
{
    let m = p.m();
    if m < 3 {
        let g = Graph::complete(m);
        return RecognitionResult::compatible(Structure::Pseudotree, g, None);
    }
    let mut rp = RestrictedProfile::new(p);
    let mut steps = Vec::new();
    while rp.remaining() >= 4 {
        let eligible: Vec<(usize, BTreeSet<usize>)> = rp
            .candidates()
            .into_iter()
            .map(|c| (c, rp.a_set(c)))
            .filter(|(_, a)| !a.is_empty())
            .collect();
        if eligible.is_empty() {
            break;
        }
        let ids: Vec<usize> = eligible.iter().map(|(c, _)| *c).collect();
        let pick = choose(&ids).min(ids.len() - 1);
        let (removed, attachments) = eligible.into_iter().nth(pick).expect("index in range");
        let chosen = *attachments.first().expect("nonempty");
        steps.push(EliminationStep { removed, attachments, chosen });
        rp.remove(removed);
    }
    let core = rp.candidates();
    let cert = EliminationCertificate { steps, core: core.clone() };
    match cycle_order(&core, rp.rankings(), m) {
        Some(order) => {
            let mut g = leaf_edges_graph(m, &cert.steps);
            for (i, &a) in order.iter().enumerate() {
                g.add_edge(a, order[(i + 1) % order.len()]).expect("valid cycle edge");
            }
            RecognitionResult::compatible(Structure::Pseudotree, g, Some(cert))
        }
        None => RecognitionResult::incompatible(Structure::Pseudotree, Some(cert)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{is_compatible, Edge};

    fn worked_example() -> Profile {
        Profile::from_orders(&[[1, 2, 3, 4, 5], [1, 3, 4, 2, 5], [2, 5, 3, 4, 1], [3, 5, 4, 2, 1]])
            .unwrap()
    }

    fn four_candidate_example() -> Profile {
        Profile::from_orders(&[[1, 2, 3, 4], [2, 1, 3, 4], [4, 1, 2, 3]]).unwrap()
    }

    fn set(items: &[usize]) -> BTreeSet<usize> {
        items.iter().copied().collect()
    }

    #[test]
    fn a_sets_of_four_candidate_example() {
        let p = four_candidate_example();
        assert_eq!(a_set(&p, 4), set(&[1]));
        let mut rp = RestrictedProfile::new(&p);
        rp.remove(4);
        assert_eq!(rp.a_set(3), set(&[1, 2]));
    }

    #[test]
    fn a_set_of_worked_example() {
        // upper contours of 4: {1,2,3}, {1,3}, {2,5,3}, {3,5}
        assert_eq!(a_set(&worked_example(), 4), set(&[3]));
        assert!(a_set(&worked_example(), 1).is_empty());
        assert!(a_set(&worked_example(), 5).is_empty());
    }

    #[test]
    fn tree_on_four_candidate_example() {
        let res = recognize_tree(&four_candidate_example());
        assert!(res.is_compatible());
        let cert = res.certificate.as_ref().unwrap();
        let sets: Vec<(usize, BTreeSet<usize>)> =
            cert.steps.iter().map(|s| (s.removed, s.attachments.clone())).collect();
        // last-ranked ties go to the lowest index, so 3 leaves before 4
        assert_eq!(sets, vec![(3, set(&[1, 2])), (2, set(&[1])), (1, set(&[4]))]);
        assert_eq!(cert.core, vec![4]);
        assert_eq!(a_set(&four_candidate_example(), 4), set(&[1]));
        let g = res.witness.unwrap();
        let star = Graph::from_edges(4, [(1, 2), (1, 3), (1, 4)]).unwrap();
        assert_eq!(g, star);
    }

    #[test]
    fn tree_rejects_worked_example() {
        let res = recognize_tree(&worked_example());
        assert_eq!(res.verdict, Verdict::Incompatible);
        assert!(!res.certificate.unwrap().is_complete());
    }

    #[test]
    fn single_voter_gives_its_own_path() {
        let p = Profile::from_orders(&[[3, 1, 4, 2, 5]]).unwrap();
        let tree = recognize_tree(&p);
        let g = tree.witness.unwrap();
        assert!(g.is_tree() && is_compatible(&g, &p).unwrap());
        let axis = recognize_path(&p).witness.unwrap();
        assert!(axis.is_path() && is_compatible(&axis, &p).unwrap());
    }

    #[test]
    fn axis_verdicts() {
        // 4-1-2-3 works
        let res = recognize_path(&four_candidate_example());
        assert!(is_compatible(&res.witness.unwrap(), &four_candidate_example()).unwrap());
        // 1 next to each of 2, 3 and 4
        let star = Profile::from_orders(&[[1, 2, 3, 4], [1, 3, 4, 2], [1, 4, 2, 3]]).unwrap();
        assert_eq!(recognize_path(&star).verdict, Verdict::Incompatible);
        assert!(recognize_tree(&star).is_compatible());
    }

    #[test]
    fn cycle_examples() {
        let restricted =
            Profile::from_orders(&[[1, 2, 3, 4], [1, 3, 2, 4], [2, 4, 3, 1], [3, 4, 2, 1]]).unwrap();
        // candidate 4 here plays the role of 5 in the five-candidate example
        let res = recognize_cycle(&restricted).unwrap();
        let expected = Graph::cycle(4, &[1, 2, 4, 3]).unwrap();
        assert_eq!(res.witness.unwrap(), expected);

        for orders in [[[1, 2, 3], [3, 1, 2]], [[2, 1, 3], [1, 3, 2]]] {
            let p = Profile::from_orders(&orders).unwrap();
            assert!(recognize_cycle(&p).unwrap().is_compatible());
        }
        let two = Profile::from_orders(&[[1, 2]]).unwrap();
        assert!(recognize_cycle(&two).is_err());
        assert!(!recognize_cycle(&worked_example()).unwrap().is_compatible());
    }

    #[test]
    fn pseudotree_on_worked_example() {
        let res = recognize_pseudotree(&worked_example());
        assert!(res.is_compatible());
        let g = res.witness.unwrap();
        let expected: BTreeSet<Edge> = [(1, 2), (2, 5), (5, 3), (3, 1), (3, 4)]
            .into_iter()
            .map(|(a, b)| Edge::new(a, b))
            .collect();
        assert_eq!(g.edge_set(), &expected);
        let cert = res.certificate.unwrap();
        // only 4 is detachable, and the last-ranked candidates 1 and 5 are not
        assert_eq!(cert.steps.len(), 1);
        assert_eq!(cert.steps[0].removed, 4);
    }

    #[test]
    fn three_candidates_always_form_a_triangle() {
        let p = Profile::from_orders(&[[1, 2, 3], [2, 3, 1], [3, 1, 2]]).unwrap();
        let res = recognize_pseudotree(&p);
        assert_eq!(res.witness.unwrap(), Graph::complete(3));
    }
}
