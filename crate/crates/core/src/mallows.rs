//! Mallows model: Kendall distance counts, first-two-position probabilities,
//! expected necessary edges and a seeded sampler.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::profile::{Profile, ProfileError, Ranking};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MallowsError {
    #[error("dispersion must be a finite number >= 0, got {0}")]
    InvalidTheta(f64),
    #[error("central ranking has {got} candidates, expected {expected}")]
    CentralLength { expected: usize, got: usize },
    #[error("need at least {needed} candidates, got {got}")]
    TooFewCandidates { needed: usize, got: usize },
    #[error("candidates {0} and {1} must differ and lie in 1..=m")]
    BadPair(usize, usize),
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

/// Number of discordant pairs.
pub fn kendall_tau(a: &Ranking, b: &Ranking) -> Result<u64, ProfileError> {
    if a.len() != b.len() {
        return Err(ProfileError::LengthMismatch { expected: a.len(), got: b.len() });
    }
    let pos = b.positions();
    let seq: Vec<usize> = a.order().iter().map(|&c| pos[c]).collect();
    let mut d = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                d += 1;
            }
        }
    }
    Ok(d)
}

/// `N[i][δ]`: permutations of length `i` at Kendall distance `δ` from a fixed
/// one, for `0 <= i <= m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceCountTable {
    rows: Vec<Vec<BigUint>>,
}

impl DistanceCountTable {
    pub fn m(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn row(&self, i: usize) -> &[BigUint] {
        &self.rows[i]
    }

    /// Zero outside `0..=i(i-1)/2`, including negative `delta`.
    pub fn get(&self, i: usize, delta: i64) -> BigUint {
        usize::try_from(delta)
            .ok()
            .and_then(|d| self.rows[i].get(d))
            .cloned()
            .unwrap_or_else(BigUint::zero)
    }
}

/// Builds the table with `N^i(δ) = Σ_{δ'=0}^{min(δ, i-1)} N^{i-1}(δ - δ')`,
/// starting from the single empty permutation.
pub fn distance_counts(m: usize) -> DistanceCountTable {
    let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
    for i in 1..=m {
        let prev = &rows[i - 1];
        let top = i * (i - 1) / 2;
        let mut row = Vec::with_capacity(top + 1);
        for delta in 0..=top {
            let mut s = BigUint::zero();
            for shift in 0..=delta.min(i - 1) {
                if let Some(v) = prev.get(delta - shift) {
                    s += v;
                }
            }
            row.push(s);
        }
        rows.push(row);
    }
    DistanceCountTable { rows }
}

fn ln_big(v: &BigUint) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = v.bits();
    if bits < 1000 {
        return v.to_f64().expect("finite below 2^1000").ln();
    }
    let shift = bits - 64;
    (v >> shift).to_f64().expect("64-bit value").ln() + shift as f64 * std::f64::consts::LN_2
}

fn log_sum_exp(terms: impl Iterator<Item = f64>) -> f64 {
    let terms: Vec<f64> = terms.filter(|t| *t > f64::NEG_INFINITY).collect();
    let Some(max) = terms.iter().copied().reduce(f64::max) else { return f64::NEG_INFINITY };
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

fn ln_weighted_sum(counts: &[BigUint], theta: f64) -> f64 {
    log_sum_exp(counts.iter().enumerate().map(|(d, n)| ln_big(n) - theta * d as f64))
}

/// Normalisation constant `Σ_δ N^m(δ) e^{-θδ}`.
pub fn psi(theta: f64, m: usize) -> f64 {
    ln_weighted_sum(distance_counts(m).row(m), theta).exp()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MallowsSpec {
    pub m: usize,
    pub theta: f64,
    pub central: Ranking,
    pub seed: u64,
}

impl MallowsSpec {
    /// Centred on the identity ranking.
    pub fn new(m: usize, theta: f64, seed: u64) -> Result<Self, MallowsError> {
        Self::with_central(Ranking::identity(m), theta, seed)
    }

    pub fn with_central(central: Ranking, theta: f64, seed: u64) -> Result<Self, MallowsError> {
        if !theta.is_finite() || theta < 0.0 {
            return Err(MallowsError::InvalidTheta(theta));
        }
        if central.is_empty() {
            return Err(MallowsError::TooFewCandidates { needed: 1, got: 0 });
        }
        Ok(MallowsSpec { m: central.len(), theta, central, seed })
    }
}

/// Distance tables for one candidate count, built once and shared by every
/// probability query.
#[derive(Debug, Clone)]
pub struct MallowsAnalytics {
    m: usize,
    table: DistanceCountTable,
}

impl MallowsAnalytics {
    pub fn new(m: usize) -> Self {
        MallowsAnalytics { m, table: distance_counts(m) }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn table(&self) -> &DistanceCountTable {
        &self.table
    }

    pub fn ln_psi(&self, theta: f64) -> f64 {
        ln_weighted_sum(self.table.row(self.m), theta)
    }

    /// Probability that `j` and `k` take the first two positions, in either
    /// order. Counts permutations through the two rankings that put `j, k`
    /// (resp. `k, j`) on top and keep the rest in central order.
    pub fn prob_first_two(&self, spec: &MallowsSpec, j: usize, k: usize) -> Result<f64, MallowsError> {
        let m = self.m;
        if spec.m != m {
            return Err(MallowsError::CentralLength { expected: m, got: spec.m });
        }
        if m < 2 {
            return Err(MallowsError::TooFewCandidates { needed: 2, got: m });
        }
        if j == k || j == 0 || k == 0 || j > m || k > m {
            return Err(MallowsError::BadPair(j, k));
        }
        let rest: Vec<usize> = spec.central.order().iter().copied().filter(|&c| c != j && c != k).collect();
        let top = |a: usize, b: usize| -> Ranking {
            Ranking::new([a, b].into_iter().chain(rest.iter().copied()).collect()).expect("permutation")
        };
        let d1 = kendall_tau(&spec.central, &top(j, k))? as i64;
        let d2 = kendall_tau(&spec.central, &top(k, j))? as i64;
        let max_d = (m * (m - 1) / 2) as i64;
        let counts: Vec<BigUint> = (0..=max_d)
            .map(|d| self.table.get(m - 2, d - d1) + self.table.get(m - 2, d - d2))
            .collect();
        Ok((ln_weighted_sum(&counts, spec.theta) - self.ln_psi(spec.theta)).exp())
    }

    /// `C(m,2) - Σ_{j<k} (1 - P({j,k}))^n`.
    pub fn expected_necessary_edges(&self, spec: &MallowsSpec, n: u64) -> Result<f64, MallowsError> {
        let m = self.m;
        let pairs = (m * (m.saturating_sub(1)) / 2) as f64;
        if m < 2 {
            return Ok(0.0);
        }
        let mut missing = 0.0;
        for j in 1..=m {
            for k in j + 1..=m {
                let p = self.prob_first_two(spec, j, k)?.min(1.0);
                missing += (n as f64 * (-p).ln_1p()).exp();
            }
        }
        Ok(pairs - missing)
    }
}

/// Draws one ranking by repeated insertion: the `i`-th central item goes to
/// slot `s` (0 = top) of the current list with weight `e^{-θ(i-1-s)}`.
pub fn sample_ranking<R: Rng + ?Sized>(spec: &MallowsSpec, rng: &mut R) -> Ranking {
    let mut out: Vec<usize> = Vec::with_capacity(spec.m);
    let mut weights = Vec::with_capacity(spec.m);
    for (i, &c) in spec.central.order().iter().enumerate() {
        weights.clear();
        weights.extend((0..=i).map(|s| (-spec.theta * (i - s) as f64).exp()));
        let total: f64 = weights.iter().sum();
        let mut u = rng.gen::<f64>() * total;
        let mut slot = i;
        for (s, w) in weights.iter().enumerate() {
            if u < *w {
                slot = s;
                break;
            }
            u -= w;
        }
        out.insert(slot, c);
    }
    Ranking::new(out).expect("insertion keeps a permutation")
}

/// `n` independent rankings drawn with a generator seeded from `spec.seed`.
pub fn sample_profile(spec: &MallowsSpec, n: usize) -> Result<Profile, MallowsError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    sample_profile_with(spec, n, &mut rng)
}

pub fn sample_profile_with<R: Rng + ?Sized>(spec: &MallowsSpec, n: usize, rng: &mut R) -> Result<Profile, MallowsError> {
    let rankings: Vec<Ranking> = (0..n).map(|_| sample_ranking(spec, rng)).collect();
    Ok(Profile::from_rankings(spec.m, rankings)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: &[usize]) -> Ranking {
        Ranking::new(v.to_vec()).unwrap()
    }

    fn permutations(m: usize) -> Vec<Vec<usize>> {
        if m == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(m - 1) {
            for slot in 0..=p.len() {
                let mut q = p.clone();
                q.insert(slot, m);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn kendall_examples() {
        assert_eq!(kendall_tau(&r(&[2, 3, 1]), &r(&[2, 3, 1])).unwrap(), 0);
        assert_eq!(kendall_tau(&r(&[1, 2, 3]), &r(&[3, 2, 1])).unwrap(), 3);
        assert_eq!(kendall_tau(&r(&[1, 2, 3, 4]), &r(&[2, 1, 3, 4])).unwrap(), 1);
        assert!(kendall_tau(&r(&[1, 2]), &r(&[1, 2, 3])).is_err());
    }

    #[test]
    fn table_values() {
        let t = distance_counts(10);
        let small: Vec<u64> = t.row(3).iter().map(|v| v.to_u64().unwrap()).collect();
        assert_eq!(small, vec![1, 2, 2, 1]);
        assert_eq!(t.get(4, 3), BigUint::from(6u32));
        assert_eq!(t.get(4, -1), BigUint::zero());
        let mut fact = BigUint::one();
        for i in 1..=10usize {
            fact *= i;
            let row = t.row(i);
            assert_eq!(row.iter().sum::<BigUint>(), fact);
            assert_eq!(row[0], BigUint::one());
            let rev: Vec<BigUint> = row.iter().rev().cloned().collect();
            assert_eq!(rev, row);
        }
        // enumeration for length 4
        let id = Ranking::identity(4);
        let mut hist = vec![0u32; 7];
        for p in permutations(4) {
            hist[kendall_tau(&id, &r(&p)).unwrap() as usize] += 1;
        }
        let row: Vec<u32> = t.row(4).iter().map(|v| v.to_u32().unwrap()).collect();
        assert_eq!(hist, row);
    }

    #[test]
    fn psi_values() {
        assert!((psi(0.0, 5) - 120.0).abs() < 1e-9);
        let th: f64 = 0.8;
        assert!((psi(th, 2) - (1.0 + (-th).exp())).abs() < 1e-12);
        let direct = 1.0 + 2.0 * (-1.0f64).exp() + 2.0 * (-2.0f64).exp() + (-3.0f64).exp();
        assert!((psi(1.0, 3) - direct).abs() < 1e-12);
        // product form, cross-check only
        for m in 1..12 {
            let prod: f64 = (1..=m).map(|i| (1.0 - (-(i as f64) * th).exp()) / (1.0 - (-th).exp())).product();
            assert!((psi(th, m) / prod - 1.0).abs() < 1e-12, "m={m}");
        }
    }

    #[test]
    fn first_two_probabilities() {
        for m in 2..=8 {
            let a = MallowsAnalytics::new(m);
            let uniform = MallowsSpec::new(m, 0.0, 0).unwrap();
            let c = (m * (m - 1) / 2) as f64;
            for theta in [0.0, 0.3, 1.0, 2.0] {
                let spec = MallowsSpec::with_central(
                    Ranking::new((1..=m).rev().collect()).unwrap(),
                    theta,
                    0,
                )
                .unwrap();
                let mut total = 0.0;
                for j in 1..=m {
                    for k in j + 1..=m {
                        total += a.prob_first_two(&spec, j, k).unwrap();
                        if theta == 0.0 {
                            assert!((a.prob_first_two(&uniform, j, k).unwrap() - 1.0 / c).abs() < 1e-12);
                        }
                    }
                }
                assert!((total - 1.0).abs() < 1e-12, "m={m} theta={theta} total={total}");
            }
        }
    }

    #[test]
    fn first_two_matches_enumeration() {
        for m in 2..=6 {
            let a = MallowsAnalytics::new(m);
            let central = r(&(2..=m).chain([1]).collect::<Vec<_>>());
            for theta in [0.3, 1.0] {
                let spec = MallowsSpec::with_central(central.clone(), theta, 0).unwrap();
                let mut mass = std::collections::HashMap::new();
                let mut z = 0.0;
                for p in permutations(m) {
                    let w = (-theta * kendall_tau(&central, &r(&p)).unwrap() as f64).exp();
                    z += w;
                    let key = (p[0].min(p[1]), p[0].max(p[1]));
                    *mass.entry(key).or_insert(0.0) += w;
                }
                for ((j, k), w) in mass {
                    let got = a.prob_first_two(&spec, j, k).unwrap();
                    assert!((got - w / z).abs() < 1e-12, "m={m} {j},{k}");
                }
            }
        }
    }

    #[test]
    fn expected_edges() {
        let a = MallowsAnalytics::new(20);
        let spec = MallowsSpec::new(20, 0.0, 0).unwrap();
        let got = a.expected_necessary_edges(&spec, 1000).unwrap();
        let want = 190.0 * (1.0 - (1.0 - 1.0 / 190.0f64).powi(1000));
        assert!((got - want).abs() < 1e-9 && (got - 189.0).abs() < 0.1, "{got}");
        let alpha = -(1.0 - 1.0 / 190.0f64).ln();
        assert!((got - 190.0 * (1.0 - (-alpha * 1000.0).exp())).abs() < 1e-9);

        let a = MallowsAnalytics::new(7);
        let spec = MallowsSpec::new(7, 0.9, 0).unwrap();
        assert!((a.expected_necessary_edges(&spec, 1).unwrap() - 1.0).abs() < 1e-12);
        let mut last = 0.0;
        for n in 1..60 {
            let v = a.expected_necessary_edges(&spec, n).unwrap();
            assert!(v > last);
            last = v;
        }
    }

    #[test]
    fn sampler_is_seeded() {
        let spec = MallowsSpec::new(6, 0.5, 42).unwrap();
        let a = sample_profile(&spec, 30).unwrap();
        let b = sample_profile(&spec, 30).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.voter_count(), 30);
        let other = MallowsSpec { seed: 43, ..spec };
        assert_ne!(sample_profile(&other, 30).unwrap(), a);
    }

    #[test]
    fn spec_validation() {
        assert!(MallowsSpec::new(4, -0.1, 0).is_err());
        assert!(MallowsSpec::new(4, f64::NAN, 0).is_err());
        let a = MallowsAnalytics::new(4);
        let spec = MallowsSpec::new(4, 1.0, 0).unwrap();
        assert!(a.prob_first_two(&spec, 2, 2).is_err());
        assert!(a.prob_first_two(&spec, 1, 5).is_err());
    }
}
