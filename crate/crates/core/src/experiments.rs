//! Mallows density experiments and the expected-necessary-edge grid.

use std::fmt::Write;
use std::time::Duration;

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::mallows::{sample_profile, MallowsAnalytics, MallowsError, MallowsSpec};
use crate::profile::necessary_edges;
use crate::solver::{branch_and_bound, IlpInstance, Objective, SolverError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExperimentError {
    #[error("invalid grid {0:?}: {1}")]
    BadGrid(String, String),
    #[error("at least {needed} {what} required")]
    TooSmall { what: &'static str, needed: usize },
    #[error(transparent)]
    Mallows(#[from] MallowsError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// Parses `a,b,c` or `start:stop:step` (inclusive stop) into floats.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, ExperimentError> {
    let bad = |why: &str| ExperimentError::BadGrid(s.to_string(), why.to_string());
    let s_trim = s.trim();
    if s_trim.is_empty() {
        return Err(bad("empty"));
    }
    if s_trim.contains(':') {
        let parts: Vec<f64> = s_trim
            .split(':')
            .map(|p| p.trim().parse::<f64>().map_err(|e| bad(&e.to_string())))
            .collect::<Result<_, _>>()?;
        let [start, stop, step] = parts[..] else { return Err(bad("expected start:stop:step")) };
        if step.is_nan() || step <= 0.0 || !start.is_finite() || !stop.is_finite() || stop < start {
            return Err(bad("need a positive step and start <= stop"));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        if count > 100_000 {
            return Err(bad("too many points"));
        }
        return Ok((0..count).map(|i| start + i as f64 * step).collect());
    }
    s_trim
        .split(',')
        .map(|p| {
            let v = p.trim().parse::<f64>().map_err(|e| bad(&e.to_string()))?;
            if v.is_finite() { Ok(v) } else { Err(bad("non-finite value")) }
        })
        .collect()
}

/// Like [`parse_grid`] but every value must be a positive whole number.
pub fn parse_count_grid(s: &str) -> Result<Vec<usize>, ExperimentError> {
    parse_grid(s)?
        .into_iter()
        .map(|v| {
            if v >= 1.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(ExperimentError::BadGrid(s.to_string(), format!("{v} is not a positive integer")))
            }
        })
        .collect()
}

fn pairs(m: usize) -> f64 {
    (m * m.saturating_sub(1) / 2) as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpectedRow {
    pub m: usize,
    pub theta: f64,
    pub n: usize,
    pub expected_necessary_edges: f64,
    /// Divided by `C(m,2)`.
    pub expected_necessary_density: f64,
}

pub fn expected_grid(m: usize, thetas: &[f64], ns: &[usize]) -> Result<Vec<ExpectedRow>, ExperimentError> {
    if m < 2 {
        return Err(ExperimentError::TooSmall { what: "candidates", needed: 2 });
    }
    let analytics = MallowsAnalytics::new(m);
    let mut rows = Vec::with_capacity(thetas.len() * ns.len());
    for &theta in thetas {
        let spec = MallowsSpec::new(m, theta, 0)?;
        for &n in ns {
            let e = analytics.expected_necessary_edges(&spec, n as u64)?;
            rows.push(ExpectedRow {
                m,
                theta,
                n,
                expected_necessary_edges: e,
                expected_necessary_density: e / pairs(m),
            });
        }
    }
    Ok(rows)
}

pub fn expected_csv(rows: &[ExpectedRow]) -> String {
    let mut out = String::from("m,theta,n,expected_necessary_edges,expected_necessary_density\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.m, r.theta, r.n, r.expected_necessary_edges, r.expected_necessary_density
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityConfig {
    pub m: usize,
    pub thetas: Vec<f64>,
    pub ns: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub time_limit: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityRow {
    pub theta: f64,
    pub n: usize,
    pub trials: usize,
    pub mean_density: f64,
    pub mean_necessary_density: f64,
    pub seed: u64,
    /// Trials whose optimum was not proven within the time limit.
    pub unproven_count: usize,
}

/// Seed of one trial, drawn from the master seed on a stream per grid point.
pub fn trial_seed(master: u64, point: usize, trial: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(point as u64);
    rng.set_word_pos(2 * trial as u128);
    rng.next_u64()
}

struct Trial {
    density: f64,
    necessary_density: f64,
    proven: bool,
}

/// For every `(theta, n)` point, samples `trials` Mallows profiles and
/// minimises the edge count of each; trials run in parallel.
pub fn density_experiment(cfg: &DensityConfig) -> Result<Vec<DensityRow>, ExperimentError> {
    if cfg.m < 2 {
        return Err(ExperimentError::TooSmall { what: "candidates", needed: 2 });
    }
    if cfg.trials == 0 {
        return Err(ExperimentError::TooSmall { what: "trials", needed: 1 });
    }
    let points: Vec<(f64, usize)> =
        cfg.thetas.iter().flat_map(|&t| cfg.ns.iter().map(move |&n| (t, n))).collect();
    for &(t, _) in &points {
        MallowsSpec::new(cfg.m, t, 0)?;
    }
    let jobs: Vec<(usize, usize)> =
        (0..points.len()).flat_map(|p| (0..cfg.trials).map(move |t| (p, t))).collect();
    let results: Vec<Trial> = jobs
        .par_iter()
        .map(|&(point, trial)| -> Result<Trial, ExperimentError> {
            let (theta, n) = points[point];
            let spec = MallowsSpec::new(cfg.m, theta, trial_seed(cfg.seed, point, trial))?;
            let profile = sample_profile(&spec, n)?;
            let report = branch_and_bound(&IlpInstance::new(&profile, Objective::MinEdges), cfg.time_limit)?;
            Ok(Trial {
                density: report.witness.density(),
                necessary_density: necessary_edges(&profile).len() as f64 / pairs(cfg.m),
                proven: report.optimal,
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(points
        .iter()
        .enumerate()
        .map(|(p, &(theta, n))| {
            let chunk = &results[p * cfg.trials..(p + 1) * cfg.trials];
            let k = cfg.trials as f64;
            DensityRow {
                theta,
                n,
                trials: cfg.trials,
                mean_density: chunk.iter().map(|t| t.density).sum::<f64>() / k,
                mean_necessary_density: chunk.iter().map(|t| t.necessary_density).sum::<f64>() / k,
                seed: cfg.seed,
                unproven_count: chunk.iter().filter(|t| !t.proven).count(),
            }
        })
        .collect())
}

pub fn density_csv(rows: &[DensityRow]) -> String {
    let mut out = String::from("theta,n,trials,mean_density,mean_necessary_density,seed,unproven_count\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.theta, r.n, r.trials, r.mean_density, r.mean_necessary_density, r.seed, r.unproven_count
        );
    }
    out
}
