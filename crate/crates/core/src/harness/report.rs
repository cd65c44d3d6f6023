//! Ratio reports and their CSV, JSON and table renderings.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::config::OutputFormat;
use crate::error::{Error, Result};
use crate::instances::BipartiteInstance;
use crate::rational::{format_rational, parse_rational, render_4dp, serde_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioReport {
    pub algorithm: String,
    pub n: usize,
    #[serde(with = "serde_rational")]
    pub ratio: Rational,
    pub ratio_4dp: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub worst_instance: Option<BipartiteInstance>,
    pub instances: u64,
    /// Arrival orders weighted into the minimum, summed over instances.
    pub permutations: u64,
    pub time_ms: u64,
}

impl RatioReport {
    pub fn new(algorithm: impl Into<String>, n: usize, ratio: Rational) -> Self {
        let ratio_4dp = render_4dp(&ratio);
        RatioReport {
            algorithm: algorithm.into(),
            n,
            ratio,
            ratio_4dp,
            worst_instance: None,
            instances: 0,
            permutations: 0,
            time_ms: 0,
        }
    }

    pub fn with_time(mut self, elapsed: Duration) -> Self {
        self.time_ms = elapsed.as_millis() as u64;
        self
    }

    /// The fields carried by the CSV form.
    pub fn row(&self) -> ReportRow {
        ReportRow {
            algorithm: self.algorithm.clone(),
            n: self.n,
            ratio_exact: format_rational(&self.ratio),
            ratio_4dp: self.ratio_4dp.clone(),
            instances: self.instances,
            time_ms: self.time_ms,
        }
    }
}

/// One CSV line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub algorithm: String,
    pub n: usize,
    pub ratio_exact: String,
    pub ratio_4dp: String,
    pub instances: u64,
    pub time_ms: u64,
}

impl ReportRow {
    pub fn ratio(&self) -> Result<Rational> {
        parse_rational(&self.ratio_exact)
            .ok_or_else(|| Error::Malformed(format!("bad rational {:?}", self.ratio_exact)))
    }
}

pub fn emit_report(reports: &[RatioReport], format: OutputFormat) -> Result<Vec<u8>> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in reports {
                w.serialize(r.row()).map_err(|e| Error::Io(e.to_string()))?;
            }
            w.into_inner().map_err(|e| Error::Io(e.to_string()))
        }
        OutputFormat::Json => {
            let mut out = serde_json::to_vec_pretty(reports)?;
            out.push(b'\n');
            Ok(out)
        }
        OutputFormat::Table => Ok(render_table(reports).into_bytes()),
    }
}

pub fn parse_report_csv(bytes: &[u8]) -> Result<Vec<ReportRow>> {
    csv::Reader::from_reader(bytes)
        .deserialize()
        .map(|r| r.map_err(|e| Error::parse(0, 0, e.to_string())))
        .collect()
}

/// Algorithms as rows, `n` as columns, four decimals per cell.
fn render_table(reports: &[RatioReport]) -> String {
    let mut ns: Vec<usize> = reports.iter().map(|r| r.n).collect();
    ns.sort_unstable();
    ns.dedup();
    let mut algorithms: Vec<&str> = Vec::new();
    for r in reports {
        if !algorithms.contains(&r.algorithm.as_str()) {
            algorithms.push(&r.algorithm);
        }
    }
    let width = algorithms.iter().map(|a| a.len()).max().unwrap_or(9).max(9);
    let mut out = format!("{:width$}", "algorithm");
    for n in &ns {
        out.push_str(&format!("  {:>7}", format!("n={n}")));
    }
    out.push('\n');
    for a in algorithms {
        out.push_str(&format!("{a:width$}"));
        for &n in &ns {
            let cell = reports
                .iter()
                .find(|r| r.algorithm == a && r.n == n)
                .map_or("-".to_string(), |r| r.ratio_4dp.clone());
            out.push_str(&format!("  {cell:>7}"));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn renders_four_decimals() {
        assert_eq!(RatioReport::new("a", 3, q(13, 18)).ratio_4dp, "0.7222");
        assert_eq!(RatioReport::new("a", 3, q(1, 1)).ratio_4dp, "1.0000");
    }

    #[test]
    fn csv_round_trip() {
        let reports = vec![
            RatioReport::new("fixed-ranking", 3, q(13, 18)),
            RatioReport::new("least, seen", 4, q(67, 96)),
        ];
        let bytes = emit_report(&reports, OutputFormat::Csv).unwrap();
        let text = String::from_utf8(bytes.clone()).unwrap();
        assert!(text.starts_with("algorithm,n,ratio_exact,ratio_4dp,instances,time_ms"));
        let rows = parse_report_csv(&bytes).unwrap();
        assert_eq!(rows, reports.iter().map(RatioReport::row).collect::<Vec<_>>());
        assert_eq!(rows[1].ratio().unwrap(), q(67, 96));
    }

    #[test]
    fn table_layout() {
        let reports = vec![RatioReport::new("x", 3, q(1, 2)), RatioReport::new("x", 4, q(1, 3))];
        let t = String::from_utf8(emit_report(&reports, OutputFormat::Table).unwrap()).unwrap();
        assert!(t.contains("0.5000") && t.contains("0.3333") && t.contains("n=4"));
    }
}
