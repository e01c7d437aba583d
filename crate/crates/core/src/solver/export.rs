use std::fmt::Write;
use std::str::FromStr;

use super::{IlpInstance, Objective, SolverError};
use crate::lp::{build_lp_sp, build_min_degree, LpModel, LpRow, RowKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    /// CPLEX-style LP text.
    LpText,
}

impl FromStr for ExportFormat {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "lp" | "lp-text" | "cplex" => Ok(ExportFormat::LpText),
            _ => Err(SolverError::UnsupportedFormat(s.to_string())),
        }
    }
}

const TERMS_PER_LINE: usize = 8;

fn write_terms(out: &mut String, model: &LpModel, terms: &[(usize, i64)]) {
    for (i, &(j, a)) in terms.iter().enumerate() {
        if i > 0 && i % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let sign = if a < 0 { "-" } else { "+" };
        let mag = a.unsigned_abs();
        if i == 0 {
            if a < 0 {
                out.push_str("- ");
            }
        } else {
            let _ = write!(out, " {sign} ");
        }
        if mag != 1 {
            let _ = write!(out, "{mag} ");
        }
        out.push_str(&model.var_name(j));
    }
}

fn sorted(row: &LpRow) -> Vec<(usize, i64)> {
    let mut t = row.coeffs.clone();
    t.sort_unstable();
    t
}

/// Writes the integer program of `inst` as LP text. Rows come ranking-major,
/// position-minor; fixings appear as equality bounds.
pub fn export_model(inst: &IlpInstance<'_>, format: ExportFormat) -> Result<String, SolverError> {
    let ExportFormat::LpText = format;
    let model = match inst.objective {
        Objective::MinEdges => build_lp_sp(inst.profile),
        Objective::MinMaxDegree => build_min_degree(inst.profile),
    };
    let mut out = String::new();
    let _ = writeln!(
        out,
        "\\ objective: {}, candidates: {}, distinct rankings: {}",
        inst.objective,
        inst.m(),
        inst.profile.distinct_count()
    );
    out.push_str("Minimize\n obj: ");
    let obj: Vec<(usize, i64)> =
        model.objective.iter().enumerate().filter(|(_, &c)| c != 0).map(|(j, &c)| (j, c)).collect();
    if obj.is_empty() {
        out.push('0');
    }
    write_terms(&mut out, &model, &obj);
    out.push_str("\nSubject To\n");
    let (mut c, mut d) = (0, 0);
    for row in &model.rows {
        let name = match row.kind {
            RowKind::DegreeLink { candidate } | RowKind::DegreeCap { candidate } => {
                d += 1;
                format!("deg{candidate}")
            }
            _ => {
                c += 1;
                format!("c{c}")
            }
        };
        let _ = write!(out, " {name}: ");
        write_terms(&mut out, &model, &sorted(row));
        let _ = writeln!(out, " {} {}", row.sense.symbol(), row.rhs);
    }
    debug_assert_eq!(c + d, model.rows.len());
    out.push_str("Bounds\n");
    for (j, e) in model.pairs.pairs().iter().enumerate() {
        let name = model.var_name(j);
        if inst.fixed_one().contains(e) {
            let _ = writeln!(out, " {name} = 1");
        } else if inst.fixed_zero().contains(e) {
            let _ = writeln!(out, " {name} = 0");
        } else {
            let _ = writeln!(out, " 0 <= {name} <= 1");
        }
    }
    if model.z.is_some() {
        out.push_str(" z >= 0\n");
    }
    out.push_str("Binary\n");
    for j in 0..model.pairs.len() {
        let _ = writeln!(out, " {}", model.var_name(j));
    }
    if model.z.is_some() {
        out.push_str("General\n z\n");
    }
    out.push_str("End\n");
    Ok(out)
}
