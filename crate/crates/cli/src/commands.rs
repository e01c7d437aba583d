use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Duration;

use thiserror::Error;

use spgraph::experiments::{
    density_csv, density_experiment, expected_csv, expected_grid, parse_count_grid, parse_grid, DensityConfig,
    ExperimentError,
};
use spgraph::mallows::{sample_profile, MallowsSpec};
use spgraph::profile::soc::{parse_soc, serialize_soc};
use spgraph::profile::{is_compatible, Profile};
use spgraph::recognition::{RecognitionError, RecognitionResult};
use spgraph::registry::{recognize_auto, Registry};
use spgraph::solver::{export_model, ExportFormat, IlpInstance, Objective, SolverError};

#[derive(Debug, Error)]
pub enum Failure {
    #[error("{0}")]
    Input(String),
    #[error("internal consistency violation: {0}")]
    Consistency(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Consistency(_) => 3,
        }
    }
}

impl From<RecognitionError> for Failure {
    fn from(e: RecognitionError) -> Self {
        match e {
            RecognitionError::Consistency(s) => Failure::Consistency(s),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::Lp(lp) => Failure::Consistency(lp.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Solver(s) => s.into(),
            other => Failure::Input(other.to_string()),
        }
    }
}

fn read_profile(path: &Path) -> Result<Profile, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_soc(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn time_limit(secs: f64) -> Result<Duration, Failure> {
    Duration::try_from_secs_f64(secs).map_err(|_| Failure::Input(format!("invalid time limit {secs}")))
}

/// Rejects witnesses that do not do what the library claims.
fn audit(r: &RecognitionResult, p: &Profile) -> Result<(), Failure> {
    if let Some(w) = &r.witness {
        if !r.structure.admits(w) || !is_compatible(w, p).unwrap_or(false) {
            return Err(Failure::Consistency(format!("{} witness {w} fails verification", r.structure)));
        }
    }
    Ok(())
}

fn verdict_lines(r: &RecognitionResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "structure: {}", r.structure);
    match &r.witness {
        Some(w) => {
            let _ = writeln!(s, "verdict: {}, {} edges", r.verdict, w.edge_count());
            let _ = writeln!(s, "edges: {w}");
        }
        None => {
            let _ = writeln!(s, "verdict: {}", r.verdict);
        }
    }
    s
}

pub fn recognize(file: &Path, structure: &str) -> Result<(), Failure> {
    let p = read_profile(file)?;
    if structure == "auto" {
        let rep = recognize_auto(&p);
        match &rep.first {
            Some(r) => {
                audit(r, &p)?;
                print!("{}", verdict_lines(r));
            }
            None => println!("structure: none\nverdict: INCOMPATIBLE"),
        }
        match rep.pseudotree_edges {
            Some(k) => println!("pseudotree fallback: {k} edges"),
            None => println!("pseudotree fallback: none"),
        }
        return Ok(());
    }
    let registry = Registry::builtin();
    let rec = registry.recognizer(structure).ok_or_else(|| {
        Failure::Input(format!("unknown structure {structure:?}; expected auto or one of {:?}", registry.recognizer_names()))
    })?;
    let r = rec.recognize(&p)?;
    audit(&r, &p)?;
    print!("{}", verdict_lines(&r));
    Ok(())
}

pub fn minimize(file: &Path, objective: &str, engine: &str, limit: f64, out: Option<&Path>) -> Result<(), Failure> {
    let objective: Objective = objective.parse()?;
    let p = read_profile(file)?;
    if engine == "export" {
        let text = export_model(&IlpInstance::new(&p, objective), ExportFormat::LpText)?;
        return emit(&text, out);
    }
    let registry = Registry::builtin();
    let solver = registry.minimizer(engine).ok_or_else(|| {
        Failure::Input(format!("unknown engine {engine:?}; expected export or one of {:?}", registry.minimizer_names()))
    })?;
    let rep = solver.minimize(&p, objective, time_limit(limit)?)?;
    if !is_compatible(&rep.witness, &p).unwrap_or(false) || objective.value(&rep.witness) != rep.value {
        return Err(Failure::Consistency(format!("witness {} does not certify value {}", rep.witness, rep.value)));
    }
    println!("objective: {objective}");
    println!("value: {}", rep.value);
    println!("optimal: {}", rep.optimal);
    println!("nodes: {}", rep.nodes);
    println!("root bound: {}", rep.root_bound);
    println!("runtime: {:.3}s", rep.elapsed.as_secs_f64());
    println!("edges ({}): {}", rep.witness.edge_count(), rep.witness);
    if let Some(path) = out {
        let csv = format!(
            "file,objective,engine,value,optimal,nodes,root_bound,runtime_s,edges\n{},{},{},{},{},{},{},{},{}\n",
            file.display(),
            objective,
            engine,
            rep.value,
            rep.optimal,
            rep.nodes,
            rep.root_bound,
            rep.elapsed.as_secs_f64(),
            rep.witness
        );
        fs::write(path, csv).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

pub fn sample(m: usize, n: usize, theta: f64, seed: u64, out: Option<&Path>) -> Result<(), Failure> {
    let spec = MallowsSpec::new(m, theta, seed).map_err(|e| Failure::Input(e.to_string()))?;
    if n == 0 {
        return Err(Failure::Input("at least one voter required".into()));
    }
    let p = sample_profile(&spec, n).map_err(|e| Failure::Input(e.to_string()))?;
    emit(&serialize_soc(&p), out)
}

pub fn expected(m: usize, thetas: &str, ns: &str, out: Option<&Path>) -> Result<(), Failure> {
    let rows = expected_grid(m, &parse_grid(thetas)?, &parse_count_grid(ns)?)?;
    emit(&expected_csv(&rows), out)
}

pub fn density(
    m: usize,
    thetas: &str,
    ns: &str,
    trials: usize,
    seed: u64,
    limit: f64,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let cfg = DensityConfig {
        m,
        thetas: parse_grid(thetas)?,
        ns: parse_count_grid(ns)?,
        trials,
        seed,
        time_limit: time_limit(limit)?,
    };
    emit(&density_csv(&density_experiment(&cfg)?), out)
}
