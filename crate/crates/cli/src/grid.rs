//! Benchmark grid specifications.
//!
//! A spec is either `full` (the 1140-instance grid) or `r=LIST;k=LIST`, where
//! a list holds comma-separated items of the form `N`, `A..B` or `A..B/STEP`
//! (bounds inclusive). Example: `r=10..30/10;k=2,3`.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSpecError(pub String);

impl fmt::Display for GridSpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bad grid spec: {}", self.0)
    }
}

impl std::error::Error for GridSpecError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    pub r: Vec<u32>,
    pub k: Vec<u32>,
}

impl Grid {
    pub fn full() -> Grid {
        Grid {
            r: (10..=300).step_by(10).collect(),
            k: (2..=9).chain((10..=300).step_by(10)).collect(),
        }
    }

    /// All `(r, k)` pairs, `r` major.
    pub fn points(&self) -> Vec<(u32, u32)> {
        self.r.iter().flat_map(|&r| self.k.iter().map(move |&k| (r, k))).collect()
    }

    pub fn parse(spec: &str) -> Result<Grid, GridSpecError> {
        let spec = spec.trim();
        if spec == "full" {
            return Ok(Grid::full());
        }
        let mut r = None;
        let mut k = None;
        for part in spec.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, list) = part
                .split_once('=')
                .ok_or_else(|| GridSpecError(format!("expected NAME=LIST, got '{part}'")))?;
            let values = parse_list(list)?;
            match name.trim() {
                "r" => r = Some(values),
                "k" => k = Some(values),
                other => return Err(GridSpecError(format!("unknown axis '{other}'"))),
            }
        }
        let (Some(r), Some(k)) = (r, k) else {
            return Err(GridSpecError("both r and k are required".into()));
        };
        if r.iter().any(|&x| x < 2) || k.iter().any(|&x| x < 1) {
            return Err(GridSpecError("need r >= 2 and k >= 1".into()));
        }
        Ok(Grid { r, k })
    }
}

fn number(s: &str) -> Result<u32, GridSpecError> {
    s.trim().parse().map_err(|_| GridSpecError(format!("not a number: '{s}'")))
}

fn parse_list(list: &str) -> Result<Vec<u32>, GridSpecError> {
    let mut out = Vec::new();
    for item in list.split(',').map(str::trim) {
        let (range, step) = match item.split_once('/') {
            Some((range, step)) => (range, number(step)?),
            None => (item, 1),
        };
        if step == 0 {
            return Err(GridSpecError("step must be positive".into()));
        }
        match range.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (number(a)?, number(b)?);
                if a > b {
                    return Err(GridSpecError(format!("empty range {a}..{b}")));
                }
                out.extend((a..=b).step_by(step as usize));
            }
            None => out.push(number(range)?),
        }
    }
    Ok(out)
}
