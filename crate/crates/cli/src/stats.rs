use std::io;

use serde::{Deserialize, Serialize};

/// One row of the statistics CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsRecord {
    pub instance: String,
    pub engine: String,
    pub r: Option<u32>,
    pub k: Option<u32>,
    pub vars: u64,
    pub clauses: u64,
    pub diagnoses: u64,
    pub explanations: u64,
    pub sat_calls: u64,
    pub elapsed_s: f64,
    pub exhausted: bool,
    /// Only for separate analysis: share of all per-observation diagnoses that were enumerated.
    pub percent_enumerated: Option<f64>,
}

pub const COLUMNS: [&str; 12] = [
    "instance",
    "engine",
    "r",
    "k",
    "vars",
    "clauses",
    "diagnoses",
    "explanations",
    "sat_calls",
    "elapsed_s",
    "exhausted",
    "percent_enumerated",
];

pub fn write_stats<W: io::Write>(out: W, records: &[StatsRecord]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if records.is_empty() {
        w.write_record(COLUMNS)?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_stats<R: io::Read>(input: R) -> csv::Result<Vec<StatsRecord>> {
    csv::Reader::from_reader(input).deserialize().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record() -> StatsRecord {
        StatsRecord {
            instance: "encoder_r10_k10".into(),
            engine: "ihsd".into(),
            r: Some(10),
            k: Some(10),
            vars: 91,
            clauses: 55,
            diagnoses: 1,
            explanations: 4,
            sat_calls: 30,
            elapsed_s: 0.01,
            exhausted: true,
            percent_enumerated: None,
        }
    }

    #[test]
    fn header_and_empty_percent() {
        let mut buf = Vec::new();
        write_stats(&mut buf, &[record()]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), COLUMNS.join(","));
        assert!(lines.next().unwrap().ends_with(",true,"));
        assert_eq!(read_stats(text.as_bytes()).unwrap(), vec![record()]);
    }

    #[test]
    fn empty_table_still_has_header() {
        let mut buf = Vec::new();
        write_stats(&mut buf, &[]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().trim_end(), COLUMNS.join(","));
    }
}
