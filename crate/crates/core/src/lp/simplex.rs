//! Bounded-variable primal simplex on a dense tableau, generic over the
//! arithmetic. Variables are shifted to a zero lower bound; finite upper
//! bounds are handled in the ratio test instead of as extra rows.

use super::model::{LpModel, Sense};
use super::scalar::Scalar;
use super::LpError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpSolution<T> {
    pub status: LpStatus,
    /// Structural variable values (empty unless optimal).
    pub values: Vec<T>,
    pub objective: T,
    /// Structural variables that ended in the basis.
    pub basis: Vec<usize>,
    pub pivots: usize,
}

impl<T: Scalar> LpSolution<T> {
    pub fn values_f64(&self) -> Vec<f64> {
        self.values.iter().map(Scalar::to_f64).collect()
    }
}

/// Consecutive degenerate pivots tolerated before switching to Bland's rule.
const DEGENERATE_STREAK: usize = 50;
const MAX_PIVOTS: usize = 1_000_000;

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    beta: Vec<T>,
    basis: Vec<usize>,
    upper: Vec<Option<T>>,
    at_upper: Vec<bool>,
    is_basic: Vec<bool>,
    d: Vec<T>,
    bland: bool,
    streak: usize,
    pivots: usize,
}

enum Step {
    Optimal,
    Unbounded,
    Moved,
}

impl<T: Scalar> Tableau<T> {
    fn ncols(&self) -> usize {
        self.upper.len()
    }

    fn reset_costs(&mut self, cost: &[T]) {
        let mut d = cost.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (dj, tij) in d.iter_mut().zip(&self.rows[i]) {
                if !tij.is_zero() {
                    dj.sub_mul_assign(cb, tij);
                }
            }
        }
        self.d = d;
    }

    fn entering(&self) -> Option<usize> {
        let mut best: Option<(usize, T)> = None;
        for j in 0..self.ncols() {
            if self.is_basic[j] || matches!(&self.upper[j], Some(u) if u.is_zero()) {
                continue;
            }
            let dj = &self.d[j];
            let improving = if self.at_upper[j] { dj.is_positive() } else { dj.is_negative() };
            if !improving {
                continue;
            }
            if self.bland {
                return Some(j);
            }
            let mag = if dj.is_negative() { dj.neg() } else { dj.clone() };
            if best.as_ref().is_none_or(|(_, b)| mag > *b) {
                best = Some((j, mag));
            }
        }
        best.map(|(j, _)| j)
    }

    fn step(&mut self) -> Step {
        let Some(q) = self.entering() else { return Step::Optimal };
        let increasing = !self.at_upper[q];
        // leaving row, step length, leaves at its upper bound
        let mut best: Option<(usize, T, bool)> = None;
        for i in 0..self.rows.len() {
            let a = &self.rows[i][q];
            if a.is_zero() {
                continue;
            }
            // change of basic i per unit step of the entering variable
            let delta = if increasing { a.neg() } else { a.clone() };
            let (limit, to_upper) = if delta.is_negative() {
                (self.beta[i].div(&delta.neg()), false)
            } else {
                match &self.upper[self.basis[i]] {
                    Some(u) => (u.sub(&self.beta[i]).div(&delta), true),
                    None => continue,
                }
            };
            let limit = if limit.is_negative() { T::zero() } else { limit };
            let better = match &best {
                None => true,
                Some((r, t, _)) => {
                    if limit.sub(t).is_negative() {
                        true
                    } else if limit.sub(t).is_zero() {
                        if self.bland {
                            self.basis[i] < self.basis[*r]
                        } else {
                            let cur = &self.rows[*r][q];
                            let mag = |x: &T| if x.is_negative() { x.neg() } else { x.clone() };
                            let (ma, mc) = (mag(a), mag(cur));
                            ma.sub(&mc).is_positive()
                                || (ma.sub(&mc).is_zero() && self.basis[i] < self.basis[*r])
                        }
                    } else {
                        false
                    }
                }
            };
            if better {
                best = Some((i, limit, to_upper));
            }
        }
        let range = self.upper[q].clone();
        let flip = match (&range, &best) {
            (None, None) => return Step::Unbounded,
            (Some(_), None) => true,
            (Some(u), Some((_, t, _))) => !u.sub(t).is_positive(),
            (None, Some(_)) => false,
        };
        self.pivots += 1;
        if flip {
            let u = range.expect("flip needs a finite bound");
            for i in 0..self.rows.len() {
                let a = &self.rows[i][q];
                if a.is_zero() {
                    continue;
                }
                let delta = if increasing { a.neg() } else { a.clone() };
                let change = delta.mul(&u);
                self.beta[i] = self.beta[i].add(&change);
            }
            self.at_upper[q] = increasing;
            self.streak = 0;
            return Step::Moved;
        }
        let (r, t, to_upper) = best.expect("pivot row");
        if t.is_zero() {
            self.streak += 1;
            if self.streak > DEGENERATE_STREAK {
                self.bland = true;
            }
        } else {
            self.streak = 0;
        }
        for i in 0..self.rows.len() {
            let a = &self.rows[i][q];
            if a.is_zero() {
                continue;
            }
            let delta = if increasing { a.neg() } else { a.clone() };
            let change = delta.mul(&t);
            self.beta[i] = self.beta[i].add(&change);
        }
        let entering_value = match (&range, increasing) {
            (_, true) => t,
            (Some(u), false) => u.sub(&t),
            (None, false) => unreachable!("variable at an infinite upper bound"),
        };
        let leaving = self.basis[r];
        self.at_upper[leaving] = to_upper;
        self.is_basic[leaving] = false;
        self.pivot(r, q);
        self.beta[r] = entering_value;
        self.basis[r] = q;
        self.is_basic[q] = true;
        self.at_upper[q] = false;
        Step::Moved
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let p = self.rows[r][q].clone();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v = v.div(&p);
            }
        }
        let nz: Vec<usize> = (0..self.ncols()).filter(|&j| !self.rows[r][j].is_zero()).collect();
        let pivot_row = std::mem::take(&mut self.rows[r]);
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[q].clone();
            if f.is_zero() {
                continue;
            }
            for &j in &nz {
                row[j].sub_mul_assign(&f, &pivot_row[j]);
            }
            row[q] = T::zero();
        }
        let f = self.d[q].clone();
        if !f.is_zero() {
            for &j in &nz {
                self.d[j].sub_mul_assign(&f, &pivot_row[j]);
            }
            self.d[q] = T::zero();
        }
        self.rows[r] = pivot_row;
    }

    fn run(&mut self) -> Result<bool, LpError> {
        loop {
            if self.pivots > MAX_PIVOTS {
                return Err(LpError::IterationLimit(MAX_PIVOTS));
            }
            match self.step() {
                Step::Optimal => return Ok(true),
                Step::Unbounded => return Ok(false),
                Step::Moved => {}
            }
        }
    }

    fn value(&self, j: usize) -> T {
        if let Some(i) = self.basis.iter().position(|&b| b == j) {
            return self.beta[i].clone();
        }
        if self.at_upper[j] {
            self.upper[j].clone().unwrap_or_else(T::zero)
        } else {
            T::zero()
        }
    }
}

/// Solves `min c.x` over the model's rows and bounds.
pub fn simplex_solve<T: Scalar>(model: &LpModel) -> Result<LpSolution<T>, LpError> {
    let n = model.num_vars();
    if model.lower.len() != n || model.upper.len() != n {
        return Err(LpError::Malformed(format!(
            "{} variables but {} lower and {} upper bounds",
            n,
            model.lower.len(),
            model.upper.len()
        )));
    }
    for j in 0..n {
        if let Some(u) = model.upper[j] {
            if u < model.lower[j] {
                return Err(LpError::Malformed(format!("empty bound range for {}", model.var_name(j))));
            }
        }
    }
    let nrows = model.rows.len();
    let slack_rows: Vec<usize> = (0..nrows).filter(|&i| model.rows[i].sense != Sense::Eq).collect();
    let nslack = slack_rows.len();
    let mut slack_of = vec![None; nrows];
    for (k, &i) in slack_rows.iter().enumerate() {
        slack_of[i] = Some(n + k);
    }

    // shifted rows, normalised to a nonnegative right-hand side
    let mut dense: Vec<Vec<T>> = Vec::with_capacity(nrows);
    let mut beta = Vec::with_capacity(nrows);
    let mut needs_artificial = Vec::with_capacity(nrows);
    for (i, row) in model.rows.iter().enumerate() {
        let mut v = vec![T::zero(); n + nslack];
        let mut rhs = row.rhs;
        for &(j, a) in &row.coeffs {
            if j >= n {
                return Err(LpError::Malformed(format!("row {i} references variable {j}")));
            }
            v[j] = v[j].add(&T::from_i64(a));
            rhs -= a * model.lower[j];
        }
        let slack_coef: i64 = match row.sense {
            Sense::Ge => -1,
            Sense::Le => 1,
            Sense::Eq => 0,
        };
        if let Some(s) = slack_of[i] {
            v[s] = T::from_i64(slack_coef);
        }
        let flip = rhs < 0;
        if flip {
            for x in v.iter_mut() {
                *x = x.neg();
            }
            rhs = -rhs;
        }
        let slack_positive = slack_of[i].is_some() && (slack_coef == 1) != flip;
        needs_artificial.push(!slack_positive);
        dense.push(v);
        beta.push(T::from_i64(rhs));
    }

    let nart = needs_artificial.iter().filter(|&&b| b).count();
    let ncols = n + nslack + nart;
    let mut basis = Vec::with_capacity(nrows);
    let mut next_art = n + nslack;
    for (i, v) in dense.iter_mut().enumerate() {
        v.resize(ncols, T::zero());
        if needs_artificial[i] {
            v[next_art] = T::one();
            basis.push(next_art);
            next_art += 1;
        } else {
            basis.push(slack_of[i].expect("slack row"));
        }
    }

    let mut upper: Vec<Option<T>> = Vec::with_capacity(ncols);
    for j in 0..n {
        upper.push(model.upper[j].map(|u| T::from_i64(u - model.lower[j])));
    }
    upper.resize(ncols, None);
    let mut is_basic = vec![false; ncols];
    for &b in &basis {
        is_basic[b] = true;
    }
    let mut tab = Tableau {
        rows: dense,
        beta,
        basis,
        upper,
        at_upper: vec![false; ncols],
        is_basic,
        d: Vec::new(),
        bland: false,
        streak: 0,
        pivots: 0,
    };

    if nart > 0 {
        let mut cost = vec![T::zero(); ncols];
        for c in cost.iter_mut().skip(n + nslack) {
            *c = T::one();
        }
        tab.reset_costs(&cost);
        tab.run()?;
        let infeas = (n + nslack..ncols).fold(T::zero(), |acc, j| acc.add(&tab.value(j)));
        if infeas.is_positive() {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                values: Vec::new(),
                objective: T::zero(),
                basis: Vec::new(),
                pivots: tab.pivots,
            });
        }
        for j in n + nslack..ncols {
            tab.upper[j] = Some(T::zero());
        }
        tab.streak = 0;
    }

    let mut cost = vec![T::zero(); ncols];
    for (j, c) in model.objective.iter().enumerate() {
        cost[j] = T::from_i64(*c);
    }
    tab.reset_costs(&cost);
    let bounded = tab.run()?;
    if !bounded {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            values: Vec::new(),
            objective: T::zero(),
            basis: Vec::new(),
            pivots: tab.pivots,
        });
    }

    let values: Vec<T> = (0..n).map(|j| tab.value(j).add(&T::from_i64(model.lower[j]))).collect();
    let objective = values
        .iter()
        .zip(&model.objective)
        .fold(T::zero(), |acc, (v, &c)| acc.add(&v.mul(&T::from_i64(c))));
    let mut basis: Vec<usize> = tab.basis.iter().copied().filter(|&b| b < n).collect();
    basis.sort_unstable();
    Ok(LpSolution { status: LpStatus::Optimal, values, objective, basis, pivots: tab.pivots })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::model::{LpRow, PairIndex, RowKind};
    use num_rational::BigRational;

    type Row = (Vec<(usize, i64)>, Sense, i64);

    fn model(obj: Vec<i64>, rows: Vec<Row>, upper: Vec<Option<i64>>) -> LpModel {
        let n = obj.len();
        LpModel {
            pairs: PairIndex::new(0),
            objective: obj,
            rows: rows
                .into_iter()
                .map(|(coeffs, sense, rhs)| LpRow { coeffs, sense, rhs, kind: RowKind::Other })
                .collect(),
            lower: vec![0; n],
            upper,
            z: None,
        }
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn textbook_max() {
        // max 3x + 5y st x <= 4, 2y <= 12, 3x + 2y <= 18  ->  36 at (2, 6)
        let m = model(
            vec![-3, -5],
            vec![(vec![(0, 1)], Sense::Le, 4), (vec![(1, 2)], Sense::Le, 12), (vec![(0, 3), (1, 2)], Sense::Le, 18)],
            vec![None, None],
        );
        let s = simplex_solve::<BigRational>(&m).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.objective, q(-36, 1));
        assert_eq!(s.values, vec![q(2, 1), q(6, 1)]);
        let f = simplex_solve::<f64>(&m).unwrap();
        assert!((f.objective + 36.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let inf = model(vec![1], vec![(vec![(0, 1)], Sense::Ge, 2)], vec![Some(1)]);
        assert_eq!(simplex_solve::<BigRational>(&inf).unwrap().status, LpStatus::Infeasible);
        let unb = model(vec![-1, 0], vec![(vec![(0, 1), (1, -1)], Sense::Le, 1)], vec![None, None]);
        assert_eq!(simplex_solve::<f64>(&unb).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn equality_and_bounds() {
        // min x - y st x + y = 3, x in [0,1], y in [0,1] -> infeasible
        let m = model(vec![1, -1], vec![(vec![(0, 1), (1, 1)], Sense::Eq, 3)], vec![Some(1), Some(1)]);
        assert_eq!(simplex_solve::<BigRational>(&m).unwrap().status, LpStatus::Infeasible);
        // min x - y st x + y = 1.5 (scaled by 2) -> y = 1, x = 1/2
        let m = model(vec![2, -2], vec![(vec![(0, 2), (1, 2)], Sense::Eq, 3)], vec![Some(1), Some(1)]);
        let s = simplex_solve::<BigRational>(&m).unwrap();
        assert_eq!(s.values, vec![q(1, 2), q(1, 1)]);
        assert_eq!(s.objective, q(-1, 1));
    }

    #[test]
    fn nonzero_lower_bounds() {
        let mut m = model(vec![1, 1], vec![(vec![(0, 1), (1, 1)], Sense::Ge, 5)], vec![Some(4), None]);
        m.lower = vec![2, 1];
        let s = simplex_solve::<BigRational>(&m).unwrap();
        assert_eq!(s.objective, q(5, 1));
        assert!(s.values[0] >= q(2, 1) && s.values[1] >= q(1, 1));
    }
}
