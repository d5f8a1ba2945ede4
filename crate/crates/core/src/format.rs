//! Text formats for system descriptions (`.mbd`) and observation lists (`.obs`).
//!
//! ```text
//! c family encoder 10 10
//! c comp 1 g1_1
//! p mbd V C M
//! 0 -1 5 0        hard clause (group 0)
//! 3 2 -7 0        clause of component 3
//! ```
//!
//! Component selectors are not written; they are allocated as variables
//! `V+1..V+M` on parsing. An `.obs` file holds one observation per line as signed
//! literals terminated by `0`, optionally preceded by a `c obs ID` line.

use std::fmt::Write as _;

use thiserror::Error;

use crate::formula::{Clause, Lit};
use crate::mbd::{ComponentId, Family, MbdError, Observation, SystemBuilder, SystemDescription};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing header line")]
    MissingHeader,
    #[error("header declares {declared} clauses, body has {found}")]
    ClauseCount { declared: usize, found: usize },
    #[error("line {line}: {source}")]
    Observation { line: usize, source: MbdError },
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

fn parse_ints(line: usize, fields: &[&str]) -> Result<Vec<i64>, FormatError> {
    fields
        .iter()
        .map(|f| f.parse::<i64>().map_err(|_| syntax(line, format!("not an integer: {f}"))))
        .collect()
}

/// Literals up to the terminating `0`, which must be the last field.
fn terminated_lits(line: usize, values: &[i64], max_var: u32) -> Result<Vec<Lit>, FormatError> {
    match values.split_last() {
        Some((0, lits)) => lits
            .iter()
            .map(|&v| {
                if v == 0 {
                    Err(syntax(line, "0 before end of line"))
                } else if v.unsigned_abs() > max_var as u64 {
                    Err(syntax(line, format!("variable {} out of range 1..={max_var}", v.unsigned_abs())))
                } else {
                    Ok(Lit::from_dimacs(v as i32).expect("nonzero"))
                }
            })
            .collect(),
        _ => Err(syntax(line, "missing terminating 0")),
    }
}

#[derive(Debug)]
struct Header {
    vars: u32,
    clauses: usize,
    components: usize,
}

fn parse_header(line: usize, fields: &[&str]) -> Result<Header, FormatError> {
    if fields.len() != 5 || fields[1] != "mbd" {
        return Err(syntax(line, "expected 'p mbd V C M'"));
    }
    let n = parse_ints(line, &fields[2..])?;
    if n.iter().any(|&x| x < 0 || x > u32::MAX as i64 / 2) {
        return Err(syntax(line, "header counts out of range"));
    }
    Ok(Header {
        vars: n[0] as u32,
        clauses: n[1] as usize,
        components: n[2] as usize,
    })
}

/// Parses an `.mbd` text. Tautological clauses are counted against the header
/// but dropped, with a warning.
pub fn parse_mbd(text: &str) -> Result<SystemDescription, FormatError> {
    let mut header: Option<Header> = None;
    let mut builder: Option<SystemBuilder> = None;
    let mut names: Vec<(usize, u32, String)> = Vec::new();
    let mut family = None;
    let mut found = 0usize;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        match fields.first() {
            None => continue,
            Some(&"c") => {
                match fields.get(1) {
                    Some(&"comp") if fields.len() == 4 => {
                        let id = fields[2].parse::<u32>().map_err(|_| syntax(line, "bad component id"))?;
                        names.push((line, id, fields[3].to_string()));
                    }
                    Some(&"family") if fields.len() == 5 && fields[2] == "encoder" => {
                        let n = parse_ints(line, &fields[3..])?;
                        if n.iter().any(|&x| x < 1 || x > u32::MAX as i64) {
                            return Err(syntax(line, "bad family parameters"));
                        }
                        family = Some(Family::BuggyEncoder {
                            r: n[0] as u32,
                            k: n[1] as u32,
                        });
                    }
                    _ => {}
                }
                continue;
            }
            Some(&"p") => {
                if header.is_some() {
                    return Err(syntax(line, "second header"));
                }
                let h = parse_header(line, &fields)?;
                let mut b = SystemBuilder::new(h.vars);
                for c in 1..=h.components {
                    b.add_component(format!("c{c}"));
                }
                builder = Some(b);
                header = Some(h);
                continue;
            }
            Some(_) => {}
        }
        let (Some(h), Some(b)) = (&header, &mut builder) else {
            return Err(syntax(line, "clause before header"));
        };
        let values = parse_ints(line, &fields)?;
        let group = values[0];
        if group < 0 || group as u64 > h.components as u64 {
            return Err(syntax(line, format!("group {group} out of range 0..={}", h.components)));
        }
        let clause = Clause::new(terminated_lits(line, &values[1..], h.vars)?);
        if group == 0 {
            b.add_hard(clause);
        } else {
            b.add_component_clause(ComponentId::new(group as u32), clause);
        }
        found += 1;
    }
    let (header, builder) = match (header, builder) {
        (Some(h), Some(b)) => (h, b),
        _ => return Err(FormatError::MissingHeader),
    };
    if found != header.clauses {
        return Err(FormatError::ClauseCount {
            declared: header.clauses,
            found,
        });
    }
    if builder.dropped_tautologies() > 0 {
        log::warn!("dropped {} tautological clause(s)", builder.dropped_tautologies());
    }
    let mut builder = builder;
    for (line, id, name) in names {
        if id == 0 || id as usize > header.components {
            return Err(syntax(line, format!("component {id} out of range")));
        }
        builder.rename(ComponentId::new(id), name);
    }
    let mut sd = builder.build();
    sd.family = family;
    Ok(sd)
}

/// Writes `sd` so that [`parse_mbd`] reproduces it exactly.
pub fn write_mbd(sd: &SystemDescription) -> String {
    let mut out = String::new();
    if let Some(Family::BuggyEncoder { r, k }) = sd.family {
        let _ = writeln!(out, "c family encoder {r} {k}");
    }
    for c in sd.components() {
        let _ = writeln!(out, "c comp {} {}", c, sd.name(c));
    }
    let _ = writeln!(out, "p mbd {} {} {}", sd.num_system_vars(), sd.num_clauses(), sd.num_components());
    for i in 0..sd.num_clauses() {
        let group = sd.owner(i).map_or(0, |c| c.get());
        let _ = write!(out, "{group}");
        for l in sd.original_clause(i).lits() {
            let _ = write!(out, " {}", l.to_dimacs());
        }
        out.push_str(" 0\n");
    }
    out
}

/// Parses an `.obs` text. Observations without a preceding `c obs ID` line are
/// numbered by position, starting at 1.
pub fn parse_obs(text: &str, num_system_vars: u32) -> Result<Vec<Observation>, FormatError> {
    let mut observations = Vec::new();
    let mut pending_id: Option<u32> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        match fields.first() {
            None => continue,
            Some(&"c") => {
                if fields.get(1) == Some(&"obs") {
                    let id = fields
                        .get(2)
                        .and_then(|f| f.parse::<u32>().ok())
                        .ok_or_else(|| syntax(line, "expected 'c obs ID'"))?;
                    pending_id = Some(id);
                }
                continue;
            }
            Some(_) => {}
        }
        let values = parse_ints(line, &fields)?;
        let units = terminated_lits(line, &values, num_system_vars)?;
        let id = pending_id.take().unwrap_or(observations.len() as u32 + 1);
        let obs = Observation::new(id, units).map_err(|source| FormatError::Observation { line, source })?;
        observations.push(obs);
    }
    Ok(observations)
}

pub fn write_obs(observations: &[Observation]) -> String {
    let mut out = String::new();
    for o in observations {
        let _ = writeln!(out, "c obs {}", o.id);
        for l in o.units() {
            let _ = write!(out, "{} ", l.to_dimacs());
        }
        out.push_str("0\n");
    }
    out
}
