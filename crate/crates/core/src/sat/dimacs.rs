//! Plain DIMACS CNF reader, for standalone solver testing.

use thiserror::Error;

use crate::formula::{Clause, CnfFormula, Lit};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DimacsError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("header declares {declared} clauses, found {found}")]
    ClauseCount { declared: usize, found: usize },
}

fn syntax(line: usize, msg: impl Into<String>) -> DimacsError {
    DimacsError::Syntax { line, msg: msg.into() }
}

/// Parses `p cnf V C` followed by zero-terminated clauses. Clauses may span lines.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, DimacsError> {
    let mut header: Option<(u32, usize)> = None;
    let mut formula = CnfFormula::new(0);
    let mut current: Vec<Lit> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" || header.is_some() {
                return Err(syntax(line_no, "expected a single `p cnf V C` header"));
            }
            let v = parts[2].parse().map_err(|_| syntax(line_no, "bad variable count"))?;
            let c = parts[3].parse().map_err(|_| syntax(line_no, "bad clause count"))?;
            header = Some((v, c));
            formula.ensure_vars(v);
            continue;
        }
        let (num_vars, _) = header.ok_or_else(|| syntax(line_no, "clause before header"))?;
        for tok in line.split_whitespace() {
            let x: i32 = tok.parse().map_err(|_| syntax(line_no, format!("bad literal `{tok}`")))?;
            if x == 0 {
                formula.push(Clause::new(std::mem::take(&mut current)));
            } else {
                if x.unsigned_abs() > num_vars {
                    return Err(syntax(line_no, format!("literal {x} exceeds declared variable count")));
                }
                current.push(Lit::from_dimacs(x).expect("nonzero"));
            }
        }
    }
    let (_, declared) = header.ok_or_else(|| syntax(last_line.max(1), "missing header"))?;
    if !current.is_empty() {
        return Err(syntax(last_line, "missing terminating 0"));
    }
    if formula.len() != declared {
        return Err(DimacsError::ClauseCount { declared, found: formula.len() });
    }
    Ok(formula)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sat::Solver;

    #[test]
    fn parses_and_solves() {
        let f = parse_dimacs("c demo\np cnf 3 2\n1 -2 0\n2 3\n0\n").unwrap();
        assert_eq!(f.num_vars(), 3);
        assert_eq!(f.len(), 2);
        let mut s = Solver::new();
        for c in f.clauses() {
            s.add(c);
        }
        assert!(s.solve(&[]).is_sat());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_dimacs("1 2 0\n"), Err(DimacsError::Syntax { line: 1, .. })));
        assert!(matches!(parse_dimacs("p cnf 1 1\n1 2 0\n"), Err(DimacsError::Syntax { line: 2, .. })));
        assert!(matches!(parse_dimacs("p cnf 2 1\n1 2\n"), Err(DimacsError::Syntax { .. })));
        assert_eq!(
            parse_dimacs("p cnf 2 2\n1 2 0\n"),
            Err(DimacsError::ClauseCount { declared: 2, found: 1 })
        );
    }
}
