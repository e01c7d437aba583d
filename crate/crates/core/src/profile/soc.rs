//! Reading and writing PrefLib "strict order, complete" (`.soc`) files.
//!
//! Two layouts are accepted:
//!
//! * the current PrefLib layout, where `#`-prefixed lines carry metadata
//!   (`# NUMBER ALTERNATIVES: m`, `# NUMBER VOTERS: n`, optionally
//!   `# ALTERNATIVE NAME i: label`) and body lines read `count: c1,...,cm`;
//! * the legacy layout: a line with `m`, then `m` lines `i,label`, then
//!   `n,sum_of_counts,num_unique`, then body lines `count,c1,...,cm`.
//!
//! Output always uses the current layout.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::{Profile, Ranking};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct SocError {
    pub line: usize,
    pub kind: SocErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SocErrorKind {
    #[error("missing header `{0}`")]
    MissingHeader(&'static str),
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("malformed order line: {0}")]
    MalformedLine(String),
    #[error("order is not a permutation of 1..={m}: {line}")]
    NotAPermutation { m: usize, line: String },
    #[error("{what}: declared {declared}, found {found}")]
    CountMismatch { what: &'static str, declared: u64, found: u64 },
    #[error("unexpected end of file")]
    UnexpectedEof,
    #[error("empty profile")]
    Empty,
}

fn err(line: usize, kind: SocErrorKind) -> SocError {
    SocError { line, kind }
}

/// Parses either `.soc` layout; candidates must be numbered `1..=m`.
pub fn parse_soc(text: &str) -> Result<Profile, SocError> {
    let first = text.lines().map(str::trim).find(|l| !l.is_empty());
    match first {
        None => Err(err(1, SocErrorKind::Empty)),
        Some(l) if l.starts_with('#') => parse_current(text),
        Some(_) => parse_legacy(text),
    }
}

fn parse_count(s: &str, line_no: usize, raw: &str) -> Result<u64, SocError> {
    match s.trim().parse::<u64>() {
        Ok(c) if c > 0 => Ok(c),
        _ => Err(err(line_no, SocErrorKind::MalformedLine(raw.to_string()))),
    }
}

fn parse_order(fields: &[&str], m: usize, line_no: usize, raw: &str) -> Result<Ranking, SocError> {
    let mut order = Vec::with_capacity(fields.len());
    for f in fields {
        let f = f.trim();
        if f.starts_with('{') || f.ends_with('}') {
            return Err(err(line_no, SocErrorKind::MalformedLine(raw.to_string())));
        }
        let c = f
            .parse::<usize>()
            .map_err(|_| err(line_no, SocErrorKind::MalformedLine(raw.to_string())))?;
        order.push(c);
    }
    if order.len() != m {
        return Err(err(line_no, SocErrorKind::NotAPermutation { m, line: raw.to_string() }));
    }
    Ranking::new(order)
        .map_err(|_| err(line_no, SocErrorKind::NotAPermutation { m, line: raw.to_string() }))
}

fn parse_current(text: &str) -> Result<Profile, SocError> {
    let mut alternatives: Option<(usize, usize)> = None;
    let mut voters: Option<(u64, usize)> = None;
    let mut unique: Option<(u64, usize)> = None;
    let mut names: BTreeMap<usize, String> = BTreeMap::new();
    let mut body: Vec<(usize, &str)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(meta) = line.strip_prefix('#') {
            let Some((key, value)) = meta.split_once(':') else {
                continue;
            };
            let key = key.trim();
            let value = value.trim();
            let bad = || err(line_no, SocErrorKind::MalformedHeader(line.to_string()));
            match key {
                "NUMBER ALTERNATIVES" => {
                    alternatives = Some((value.parse().map_err(|_| bad())?, line_no));
                }
                "NUMBER VOTERS" => voters = Some((value.parse().map_err(|_| bad())?, line_no)),
                "NUMBER UNIQUE ORDERS" => {
                    unique = Some((value.parse().map_err(|_| bad())?, line_no));
                }
                "DATA TYPE" if value != "soc" => return Err(bad()),
                _ => {
                    if let Some(idx) = key.strip_prefix("ALTERNATIVE NAME ") {
                        let idx: usize = idx.trim().parse().map_err(|_| bad())?;
                        names.insert(idx, value.to_string());
                    }
                }
            }
            continue;
        }
        body.push((line_no, raw));
    }

    let (m, _) = alternatives.ok_or(err(1, SocErrorKind::MissingHeader("NUMBER ALTERNATIVES")))?;
    let (n, n_line) = voters.ok_or(err(1, SocErrorKind::MissingHeader("NUMBER VOTERS")))?;
    if m == 0 {
        return Err(err(1, SocErrorKind::MalformedHeader("NUMBER ALTERNATIVES: 0".into())));
    }

    let mut entries = Vec::with_capacity(body.len());
    for (line_no, raw) in &body {
        let (count, order) = raw
            .split_once(':')
            .ok_or_else(|| err(*line_no, SocErrorKind::MalformedLine(raw.to_string())))?;
        let count = parse_count(count, *line_no, raw)?;
        let fields: Vec<&str> = order.split(',').collect();
        entries.push((parse_order(&fields, m, *line_no, raw)?, count));
    }
    let total: u64 = entries.iter().map(|(_, c)| c).sum();
    if total != n {
        return Err(err(
            n_line,
            SocErrorKind::CountMismatch { what: "NUMBER VOTERS", declared: n, found: total },
        ));
    }
    if let Some((u, u_line)) = unique {
        if u != entries.len() as u64 {
            return Err(err(
                u_line,
                SocErrorKind::CountMismatch {
                    what: "NUMBER UNIQUE ORDERS",
                    declared: u,
                    found: entries.len() as u64,
                },
            ));
        }
    }

    let labels = (1..=m).map(|c| names.remove(&c).unwrap_or_else(|| c.to_string())).collect();
    Profile::with_labels(m, entries, labels).map_err(|_| err(1, SocErrorKind::Empty))
}

fn parse_legacy(text: &str) -> Result<Profile, SocError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());
    let mut next = |last: usize| lines.next().ok_or(err(last + 1, SocErrorKind::UnexpectedEof));

    let (m_line, raw) = next(0)?;
    let m: usize = raw
        .trim()
        .parse()
        .map_err(|_| err(m_line, SocErrorKind::MalformedHeader(raw.to_string())))?;
    if m == 0 {
        return Err(err(m_line, SocErrorKind::MalformedHeader(raw.to_string())));
    }

    let mut labels: Vec<Option<String>> = vec![None; m + 1];
    let mut last = m_line;
    for _ in 0..m {
        let (line_no, raw) = next(last)?;
        last = line_no;
        let bad = || err(line_no, SocErrorKind::MalformedHeader(raw.to_string()));
        let (idx, label) = raw.split_once(',').ok_or_else(bad)?;
        let idx: usize = idx.trim().parse().map_err(|_| bad())?;
        if idx == 0 || idx > m || labels[idx].is_some() {
            return Err(bad());
        }
        labels[idx] = Some(label.trim().to_string());
    }

    let (summary_line, raw) = next(last)?;
    let fields: Vec<&str> = raw.split(',').map(str::trim).collect();
    let bad = || err(summary_line, SocErrorKind::MalformedHeader(raw.to_string()));
    if fields.len() != 3 {
        return Err(bad());
    }
    let parsed: Vec<u64> = fields.iter().map(|f| f.parse()).collect::<Result<_, _>>().map_err(|_| bad())?;
    let (voters, sum, unique) = (parsed[0], parsed[1], parsed[2]);

    let mut entries = Vec::new();
    for (line_no, raw) in lines {
        let fields: Vec<&str> = raw.split(',').collect();
        let count = parse_count(fields[0], line_no, raw)?;
        entries.push((parse_order(&fields[1..], m, line_no, raw)?, count));
    }
    let total: u64 = entries.iter().map(|(_, c)| c).sum();
    for (what, declared) in [("number of voters", voters), ("sum of counts", sum)] {
        if declared != total {
            return Err(err(summary_line, SocErrorKind::CountMismatch { what, declared, found: total }));
        }
    }
    if unique != entries.len() as u64 {
        return Err(err(
            summary_line,
            SocErrorKind::CountMismatch {
                what: "number of unique orders",
                declared: unique,
                found: entries.len() as u64,
            },
        ));
    }

    let labels = labels.into_iter().skip(1).map(|l| l.unwrap_or_default()).collect();
    Profile::with_labels(m, entries, labels).map_err(|_| err(summary_line, SocErrorKind::Empty))
}

/// Writes the current PrefLib layout.
pub fn serialize_soc(p: &Profile) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# DATA TYPE: soc");
    let _ = writeln!(out, "# NUMBER ALTERNATIVES: {}", p.m());
    let _ = writeln!(out, "# NUMBER VOTERS: {}", p.voter_count());
    let _ = writeln!(out, "# NUMBER UNIQUE ORDERS: {}", p.distinct_count());
    for (i, label) in p.labels().iter().enumerate() {
        let _ = writeln!(out, "# ALTERNATIVE NAME {}: {}", i + 1, label);
    }
    for (r, count) in p.entries() {
        let order: Vec<String> = r.order().iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "{}: {}", count, order.join(","));
    }
    out
}
