//! Linear relaxations of the minimum-edge and minimum-degree problems and a
//! small simplex solver for them.

mod model;
mod scalar;
mod simplex;

pub use model::{
    build_lp_sp, build_lp_sp2, build_min_degree, row_supports, LpModel, LpRow, PairIndex, RowKind, Sense,
};
pub use scalar::{Scalar, FLOAT_TOLERANCE, INTEGRALITY_TOLERANCE};
pub use simplex::{simplex_solve, LpSolution, LpStatus};

use num_rational::BigRational;
use thiserror::Error;

use crate::profile::{is_compatible, Graph, Profile};
use crate::recognition::{
    recognize_path, recognize_tree, RecognitionError, RecognitionResult, Structure,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("malformed model: {0}")]
    Malformed(String),
    #[error("simplex exceeded {0} pivots")]
    IterationLimit(usize),
}

/// Largest candidate count solved in exact arithmetic by the recognizers.
pub const EXACT_LIMIT: usize = 25;

/// Optimal vertex of `model` as floats, with integrality decided exactly when
/// `exact` is set.
#[derive(Debug, Clone)]
pub struct Vertex {
    pub values: Vec<f64>,
    pub objective: f64,
    pub integral: bool,
    pub exact: bool,
}

/// `Ok(None)` when the model is infeasible, which the degree-capped relaxation
/// can be.
pub fn solve_vertex(model: &LpModel, exact: bool) -> Result<Option<Vertex>, LpError> {
    fn finish<T: Scalar>(s: LpSolution<T>, exact: bool) -> Result<Option<Vertex>, LpError> {
        match s.status {
            LpStatus::Optimal => {}
            LpStatus::Infeasible => return Ok(None),
            LpStatus::Unbounded => return Err(LpError::Malformed("relaxation is unbounded".into())),
        }
        Ok(Some(Vertex {
            integral: s.values.iter().all(Scalar::is_integral),
            values: s.values_f64(),
            objective: s.objective.to_f64(),
            exact,
        }))
    }
    if exact {
        finish(simplex_solve::<BigRational>(model)?, true)
    } else {
        finish(simplex_solve::<f64>(model)?, false)
    }
}

fn lp_recognize(
    p: &Profile,
    structure: Structure,
    model: LpModel,
    combinatorial: RecognitionResult,
) -> Result<RecognitionResult, RecognitionError> {
    let m = p.m();
    let by_lp = if m <= 1 {
        Some(Graph::empty(m))
    } else {
        let v = solve_vertex(&model, m <= EXACT_LIMIT)
            .map_err(|e| RecognitionError::Consistency(e.to_string()))?;
        let target = (m - 1) as f64;
        match v {
            Some(v) if v.integral && (v.objective - target).abs() <= INTEGRALITY_TOLERANCE => {
                let tol = if v.exact { 1e-12 } else { INTEGRALITY_TOLERANCE };
                model.integral_graph(&v.values, tol)
            }
            _ => None,
        }
    };
    match (by_lp, combinatorial.is_compatible()) {
        (Some(g), true) => {
            if !structure.admits(&g) || !is_compatible(&g, p).unwrap_or(false) {
                return Err(RecognitionError::Consistency(format!(
                    "integral LP vertex {g} is not a compatible {structure}"
                )));
            }
            Ok(RecognitionResult::compatible(structure, g, combinatorial.certificate))
        }
        (None, false) => Ok(RecognitionResult::incompatible(structure, combinatorial.certificate)),
        (Some(g), false) => Err(RecognitionError::Consistency(format!(
            "LP produced {g} but the combinatorial test rejects the profile"
        ))),
        (None, true) => Err(RecognitionError::Consistency(
            "profile is compatible but the LP vertex is not an integral solution of value m-1".into(),
        )),
    }
}

/// Tree recognition from an optimal vertex of the minimum-edge relaxation,
/// checked against leaf elimination.
pub fn lp_tree_recognize(p: &Profile) -> Result<RecognitionResult, RecognitionError> {
    lp_recognize(p, Structure::Tree, build_lp_sp(p), recognize_tree(p))
}

/// Path recognition from the relaxation with degree at most two, checked
/// against the consecutive-ones test.
pub fn lp_path_recognize(p: &Profile) -> Result<RecognitionResult, RecognitionError> {
    lp_recognize(p, Structure::Axis, build_lp_sp2(p), recognize_path(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recognition::Verdict;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn half_integral_vertex() {
        let p = Profile::from_orders(&[[1, 2, 4, 3], [2, 3, 4, 1], [1, 3, 4, 2]]).unwrap();
        let model = build_lp_sp(&p);
        let s = simplex_solve::<BigRational>(&model).unwrap();
        assert_eq!(s.objective, q(9, 2));
        let idx = &model.pairs;
        for (a, b, want) in [(1, 2, q(1, 1)), (1, 3, q(1, 1)), (2, 3, q(1, 1)), (1, 4, q(1, 2)), (2, 4, q(1, 2)), (3, 4, q(1, 2))] {
            assert_eq!(s.values[idx.index(a, b)], want, "{a}-{b}");
        }
        let f = simplex_solve::<f64>(&model).unwrap();
        assert!((f.objective - 4.5).abs() < 1e-9);
        let res = lp_tree_recognize(&p).unwrap();
        assert_eq!(res.verdict, Verdict::Incompatible);
    }

    #[test]
    fn min_degree_single_voter() {
        let p = Profile::from_orders(&[[1, 2, 3]]).unwrap();
        let model = build_min_degree(&p);
        let s = simplex_solve::<BigRational>(&model).unwrap();
        assert_eq!(s.objective, q(3, 2));
        assert_eq!(Scalar::to_f64(&s.objective), 1.5);
    }

    #[test]
    fn worked_example_relaxations() {
        let p = Profile::from_orders(&[[1, 2, 3, 4, 5], [1, 3, 4, 2, 5], [2, 5, 3, 4, 1], [3, 5, 4, 2, 1]]).unwrap();
        let sp = simplex_solve::<BigRational>(&build_lp_sp(&p)).unwrap();
        assert!(sp.objective > q(4, 1) && sp.objective <= q(5, 1));
        let sp2 = simplex_solve::<BigRational>(&build_lp_sp2(&p)).unwrap();
        // the forced top-two edges already give 1, 2 and 3 degree two
        assert_eq!(sp2.status, LpStatus::Infeasible);
        assert_eq!(lp_tree_recognize(&p).unwrap().verdict, Verdict::Incompatible);
        assert_eq!(lp_path_recognize(&p).unwrap().verdict, Verdict::Incompatible);
    }

    #[test]
    fn single_ranking_path() {
        let p = Profile::from_orders(&[[2, 4, 1, 3]]).unwrap();
        // several axes fit one ranking; any of them is an acceptable vertex
        let res = lp_path_recognize(&p).unwrap();
        let g = res.witness.unwrap();
        assert!(g.is_path() && is_compatible(&g, &p).unwrap());
        let tree = lp_tree_recognize(&p).unwrap().witness.unwrap();
        assert!(tree.is_tree() && is_compatible(&tree, &p).unwrap());
    }

    #[test]
    fn trivial_sizes() {
        let one = Profile::from_orders(&[[1]]).unwrap();
        assert!(lp_tree_recognize(&one).unwrap().is_compatible());
        assert!(lp_path_recognize(&one).unwrap().is_compatible());
        let two = Profile::from_orders(&[[2, 1]]).unwrap();
        assert_eq!(lp_tree_recognize(&two).unwrap().witness.unwrap().edge_count(), 1);
    }
}
