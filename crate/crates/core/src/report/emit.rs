//! Rendering report tables as CSV, JSON or Markdown.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{ReportError, ReportRow, ReportTable};

pub const CSV_HEADER: [&str; 10] = [
    "zone",
    "series_label",
    "statistic",
    "pvalue",
    "lags_used",
    "nobs",
    "cv1",
    "cv5",
    "cv10",
    "verdict",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReportFormat {
    Csv,
    Json,
    Markdown,
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
            ReportFormat::Markdown => "md",
        }
    }
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            "md" | "markdown" => Ok(ReportFormat::Markdown),
            _ => Err(format!("unknown format '{s}' (expected csv, json or md)")),
        }
    }
}

fn row_cells(r: &ReportRow) -> [String; 10] {
    [
        r.zone.clone(),
        r.series_label.clone(),
        r.statistic.to_string(),
        r.pvalue.to_string(),
        r.lags_used.to_string(),
        r.nobs.to_string(),
        r.cv1.to_string(),
        r.cv5.to_string(),
        r.cv10.to_string(),
        r.verdict.as_str().to_string(),
    ]
}

fn render_csv(tables: &[ReportTable]) -> Result<String, ReportError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).map_err(csv_io)?;
    for row in tables.iter().flat_map(|t| &t.rows) {
        w.write_record(row_cells(row)).map_err(csv_io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| ReportError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn csv_io(e: csv::Error) -> ReportError {
    ReportError::Io(std::io::Error::other(e))
}

fn render_markdown(tables: &[ReportTable]) -> String {
    let mut out = String::new();
    for (i, t) in tables.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "## {} DATA\n", t.zone.to_uppercase());
        let _ = writeln!(
            out,
            "| {} | Test Statistic | P-Value | #Lags Used | Observations | CV*(1%) | CV*(5%) | CV*(10%) | Verdict |",
            t.zone.to_uppercase()
        );
        out.push_str("|---|---:|---:|---:|---:|---:|---:|---:|---|\n");
        for r in &t.rows {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} | {} | {} | {} |",
                r.series_label,
                r.statistic,
                r.pvalue,
                r.lags_used,
                r.nobs,
                r.cv1,
                r.cv5,
                r.cv10,
                r.verdict.as_str()
            );
        }
        if !t.skipped.is_empty() {
            out.push_str("\nSkipped:\n\n");
            for s in &t.skipped {
                let _ = writeln!(out, "- {}: {}", s.series_label, s.reason);
            }
        }
    }
    out
}

/// Render all tables. CSV carries only tested rows; JSON and Markdown also
/// list skipped cells.
pub fn render(tables: &[ReportTable], format: ReportFormat) -> Result<String, ReportError> {
    match format {
        ReportFormat::Csv => render_csv(tables),
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(tables)?;
            s.push('\n');
            Ok(s)
        }
        ReportFormat::Markdown => Ok(render_markdown(tables)),
    }
}

pub fn emit(
    tables: &[ReportTable],
    format: ReportFormat,
    path: impl AsRef<Path>,
) -> Result<(), ReportError> {
    std::fs::write(path, render(tables, format)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adf::Verdict;
    use crate::report::SkippedRow;

    fn table() -> Vec<ReportTable> {
        vec![ReportTable {
            zone: "ISONE CA".into(),
            rows: vec![ReportRow {
                zone: "ISONE CA".into(),
                series_label: "RT Price".into(),
                statistic: -3.530843502,
                pvalue: 0.007229413,
                lags_used: 25,
                nobs: 1771,
                cv1: -3.4340478,
                cv5: -2.863173373,
                cv10: -2.567639557,
                verdict: Verdict::Stationary,
            }],
            skipped: vec![SkippedRow {
                zone: "ISONE CA".into(),
                series_label: "Log RT Price".into(),
                reason: "non-positive value".into(),
            }],
        }]
    }

    #[test]
    fn csv_has_header_and_one_line() {
        let s = render(&table(), ReportFormat::Csv).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], CSV_HEADER.join(","));
        assert!(lines[1].starts_with("ISONE CA,RT Price,-3.530843502,0.007229413,25,1771,"));
        assert!(lines[1].ends_with(",Stationary"));
    }

    #[test]
    fn json_round_trips() {
        let t = table();
        let s = render(&t, ReportFormat::Json).unwrap();
        let back: Vec<ReportTable> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn markdown_title() {
        let s = render(&table(), ReportFormat::Markdown).unwrap();
        assert!(s.starts_with("## ISONE CA DATA\n"));
        assert!(s.contains("| RT Price | -3.530843502 |"));
        assert!(s.contains("- Log RT Price: non-positive value"));
    }

    #[test]
    fn emit_writes_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        emit(&table(), ReportFormat::Csv, &path).unwrap();
        assert_eq!(
            std::fs::read_to_string(&path).unwrap(),
            render(&table(), ReportFormat::Csv).unwrap()
        );
        assert!(matches!(
            emit(
                &table(),
                ReportFormat::Csv,
                dir.path().join("missing/r.csv")
            ),
            Err(ReportError::Io(_))
        ));
    }
}
