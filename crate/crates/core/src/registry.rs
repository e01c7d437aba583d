//! Named recognition and minimisation strategies, looked up at runtime.

use std::collections::BTreeMap;
use std::time::Duration;

use crate::flow::flow_tree_recognize;
use crate::lp::{lp_path_recognize, lp_tree_recognize};
use crate::profile::Profile;
use crate::recognition::{
    recognize_cycle, recognize_path, recognize_pseudotree, recognize_tree, RecognitionError, RecognitionResult,
    Structure,
};
use crate::solver::{branch_and_bound, brute_force, IlpInstance, Objective, SolveReport, SolverError};

pub trait Recognizer: Send + Sync {
    fn name(&self) -> &'static str;
    fn structure(&self) -> Structure;
    fn recognize(&self, p: &Profile) -> Result<RecognitionResult, RecognitionError>;
}

pub trait Minimizer: Send + Sync {
    fn name(&self) -> &'static str;
    fn minimize(&self, p: &Profile, objective: Objective, time_limit: Duration) -> Result<SolveReport, SolverError>;
}

struct FnRecognizer {
    name: &'static str,
    structure: Structure,
    run: fn(&Profile) -> Result<RecognitionResult, RecognitionError>,
}

impl Recognizer for FnRecognizer {
    fn name(&self) -> &'static str {
        self.name
    }

    fn structure(&self) -> Structure {
        self.structure
    }

    fn recognize(&self, p: &Profile) -> Result<RecognitionResult, RecognitionError> {
        (self.run)(p)
    }
}

struct BranchAndBound;

impl Minimizer for BranchAndBound {
    fn name(&self) -> &'static str {
        "bb"
    }

    fn minimize(&self, p: &Profile, objective: Objective, time_limit: Duration) -> Result<SolveReport, SolverError> {
        branch_and_bound(&IlpInstance::new(p, objective), time_limit)
    }
}

struct BruteForce;

impl Minimizer for BruteForce {
    fn name(&self) -> &'static str {
        "brute"
    }

    fn minimize(&self, p: &Profile, objective: Objective, _: Duration) -> Result<SolveReport, SolverError> {
        brute_force(p, objective)
    }
}

#[derive(Default)]
pub struct Registry {
    recognizers: BTreeMap<&'static str, Box<dyn Recognizer>>,
    minimizers: BTreeMap<&'static str, Box<dyn Minimizer>>,
}

impl Registry {
    pub fn empty() -> Self {
        Registry::default()
    }

    /// Every strategy shipped with the crate.
    pub fn builtin() -> Self {
        let mut r = Registry::empty();
        type Plain = (&'static str, Structure, fn(&Profile) -> RecognitionResult);
        let plain: [Plain; 4] = [
            ("axis", Structure::Axis, recognize_path),
            ("tree", Structure::Tree, recognize_tree),
            ("pseudotree", Structure::Pseudotree, recognize_pseudotree),
            ("flow-tree", Structure::Tree, flow_tree_recognize),
        ];
        for (name, structure, f) in plain {
            r.register_recognizer(Box::new(Infallible { name, structure, run: f }));
        }
        r.register_recognizer(Box::new(FnRecognizer { name: "cycle", structure: Structure::Cycle, run: recognize_cycle }));
        r.register_recognizer(Box::new(FnRecognizer {
            name: "lp-tree",
            structure: Structure::Tree,
            run: lp_tree_recognize,
        }));
        r.register_recognizer(Box::new(FnRecognizer {
            name: "lp-path",
            structure: Structure::Axis,
            run: lp_path_recognize,
        }));
        r.register_minimizer(Box::new(BranchAndBound));
        r.register_minimizer(Box::new(BruteForce));
        r
    }

    /// Replaces any strategy registered under the same name.
    pub fn register_recognizer(&mut self, rec: Box<dyn Recognizer>) {
        self.recognizers.insert(rec.name(), rec);
    }

    pub fn register_minimizer(&mut self, min: Box<dyn Minimizer>) {
        self.minimizers.insert(min.name(), min);
    }

    pub fn recognizer(&self, name: &str) -> Option<&dyn Recognizer> {
        self.recognizers.get(name).map(|b| b.as_ref())
    }

    pub fn minimizer(&self, name: &str) -> Option<&dyn Minimizer> {
        self.minimizers.get(name).map(|b| b.as_ref())
    }

    pub fn recognizer_names(&self) -> Vec<&'static str> {
        self.recognizers.keys().copied().collect()
    }

    pub fn minimizer_names(&self) -> Vec<&'static str> {
        self.minimizers.keys().copied().collect()
    }
}

struct Infallible {
    name: &'static str,
    structure: Structure,
    run: fn(&Profile) -> RecognitionResult,
}

impl Recognizer for Infallible {
    fn name(&self) -> &'static str {
        self.name
    }

    fn structure(&self) -> Structure {
        self.structure
    }

    fn recognize(&self, p: &Profile) -> Result<RecognitionResult, RecognitionError> {
        Ok((self.run)(p))
    }
}

/// Outcome of trying the structures from most to least restrictive.
#[derive(Debug, Clone)]
pub struct AutoReport {
    /// First compatible result in the order axis, tree, cycle, pseudotree.
    pub first: Option<RecognitionResult>,
    /// Edge count of the pseudotree witness, when there is one.
    pub pseudotree_edges: Option<usize>,
}

pub fn recognize_auto(p: &Profile) -> AutoReport {
    let pseudo = recognize_pseudotree(p);
    let pseudotree_edges = pseudo.witness.as_ref().map(|g| g.edge_count());
    let cycle = || recognize_cycle(p).ok().filter(|r| r.is_compatible());
    let first = Some(recognize_path(p))
        .filter(|r| r.is_compatible())
        .or_else(|| Some(recognize_tree(p)).filter(|r| r.is_compatible()))
        .or_else(cycle)
        .or_else(|| Some(pseudo).filter(|r| r.is_compatible()));
    AutoReport { first, pseudotree_edges }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_names() {
        let r = Registry::builtin();
        assert_eq!(
            r.recognizer_names(),
            vec!["axis", "cycle", "flow-tree", "lp-path", "lp-tree", "pseudotree", "tree"]
        );
        assert_eq!(r.minimizer_names(), vec!["bb", "brute"]);
        assert!(r.recognizer("star").is_none());
    }

    #[test]
    fn strategies_agree_on_example() {
        let p = Profile::from_orders(&[[1, 2, 3, 4, 5], [1, 3, 4, 2, 5], [2, 5, 3, 4, 1], [3, 5, 4, 2, 1]]).unwrap();
        let r = Registry::builtin();
        for name in ["tree", "lp-tree", "flow-tree"] {
            assert!(!r.recognizer(name).unwrap().recognize(&p).unwrap().is_compatible(), "{name}");
        }
        let pt = r.recognizer("pseudotree").unwrap().recognize(&p).unwrap();
        assert_eq!(pt.witness.unwrap().edge_count(), 5);
        for name in ["bb", "brute"] {
            let rep = r.minimizer(name).unwrap().minimize(&p, Objective::MinEdges, Duration::from_secs(10)).unwrap();
            assert_eq!(rep.value, 5, "{name}");
        }
    }

    #[test]
    fn auto_order() {
        let one = Profile::from_orders(&[[2, 3, 1]]).unwrap();
        let rep = recognize_auto(&one);
        assert_eq!(rep.first.unwrap().structure, Structure::Axis);
        let p = Profile::from_orders(&[[1, 2, 3, 4, 5], [1, 3, 4, 2, 5], [2, 5, 3, 4, 1], [3, 5, 4, 2, 1]]).unwrap();
        let rep = recognize_auto(&p);
        assert_eq!(rep.first.unwrap().structure, Structure::Pseudotree);
        assert_eq!(rep.pseudotree_edges, Some(5));
    }
}
