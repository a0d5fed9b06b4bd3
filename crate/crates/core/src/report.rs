//! Serializing reports as JSON, CSV tables or a text summary.
//!
//! JSON is the canonical, lossless format; the schema is described in
//! `docs/report-schema.md`. CSV output is a directory holding one table per
//! check, which is the plotting interface.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::config::CheckName;
use crate::error::{Error, Result};
use crate::scenario::{ConstantsReport, CorrectionReport, DefectReport, Report};
use crate::verify::CheckReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    CsvTables,
    TextSummary,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" | "csv-tables" => Ok(OutputFormat::CsvTables),
            "text" | "text-summary" => Ok(OutputFormat::TextSummary),
            other => Err(Error::config("format", format!("unknown output format `{other}`"))),
        }
    }
}

/// A named CSV table: header plus rows.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(name: &str, header: &[&str]) -> Self {
        Table {
            name: name.to_string(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }
}

/// Something the CLI can emit in every format.
pub trait Emit: Serialize + DeserializeOwned {
    fn text_summary(&self) -> String;
    fn tables(&self) -> Vec<Table>;

    fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Serialization(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |v| format!("{v:.6}"))
}

fn check_line(c: &CheckReport) -> String {
    format!(
        "{:<24} max_violation={:.3e} tolerance={:.3e} samples={} {}",
        c.name,
        c.max_violation,
        c.tolerance,
        c.samples_used,
        verdict(c.pass)
    )
}

fn check_table(c: &CheckReport) -> Table {
    let mut t = Table::new(&c.name, &["index", "value", "bound", "ratio"]);
    for r in &c.rows {
        t.rows.push(vec![
            r.index.to_string(),
            r.value.to_string(),
            r.bound.to_string(),
            r.ratio.to_string(),
        ]);
    }
    t
}

impl Emit for Report {
    /// Header lines prefixed with `#`, then one line per requested check.
    fn text_summary(&self) -> String {
        let mut s = String::new();
        let c = &self.config;
        let _ = writeln!(s, "# njordan {} variant={} dim={} n={} seed={}", self.version, c.variant, c.dim, c.n, c.seed);
        let _ = writeln!(
            s,
            "# theta_hat={} theta_used={} median_iterations={} rate_estimate={} non_converged={} overflows={}",
            self.theta_fit.theta_hat,
            self.theta_used,
            opt(self.correction.median_iterations),
            opt(self.correction.rate_estimate),
            self.correction.non_converged,
            self.correction.overflows.len()
        );
        let _ = writeln!(
            s,
            "# scaling worst_ratio={} {}",
            self.scaling.worst_ratio,
            verdict(self.scaling.pass)
        );
        for name in &c.checks {
            if *name == CheckName::Bound {
                match &self.bound {
                    Some(b) => {
                        if let Some(e) = &b.proof_consistent {
                            let _ = writeln!(
                                s,
                                "# bound-proof-consistent constant={:.6} max_ratio={} {}",
                                e.constant,
                                e.max_ratio,
                                verdict(e.pass)
                            );
                        }
                        let detail = match (&b.stated, &b.note) {
                            (Some(e), _) => format!("constant={:.6} max_ratio={}", e.constant, e.max_ratio),
                            (None, Some(note)) => note.clone(),
                            (None, None) => String::new(),
                        };
                        let _ = writeln!(s, "{:<24} {} {}", "bound", detail, verdict(b.pass));
                    }
                    None => {
                        let _ = writeln!(s, "{:<24} missing FAIL", "bound");
                    }
                }
            } else if let Some(report) = self.check(name.tag()) {
                let _ = writeln!(s, "{}", check_line(report));
            }
        }
        let _ = writeln!(s, "# overall {}", verdict(self.pass));
        s
    }

    fn tables(&self) -> Vec<Table> {
        self.checks.iter().map(check_table).collect()
    }
}

impl Emit for DefectReport {
    fn text_summary(&self) -> String {
        let f = &self.theta_fit;
        let mut s = String::new();
        let _ = writeln!(s, "theta_hat={} shape={}", f.theta_hat, f.shape);
        let _ = writeln!(s, "tuples_used={} tuples_skipped={}", f.tuples_used, f.tuples_skipped);
        let _ = writeln!(
            s,
            "max jensen={:.6e} njordan={:.6e} star={} combined={:.6e}",
            f.maxima.jensen,
            f.maxima.njordan,
            f.maxima.star.map_or_else(|| "n/a".to_string(), |v| format!("{v:.6e}")),
            f.maxima.combined
        );
        let _ = writeln!(s, "scaling worst_ratio={} {}", self.scaling.worst_ratio, verdict(self.scaling.pass));
        s
    }

    fn tables(&self) -> Vec<Table> {
        let f = &self.theta_fit;
        let mut t = Table::new(
            "theta_fit",
            &["theta_hat", "tuples_used", "tuples_skipped", "jensen", "njordan", "star", "combined"],
        );
        t.rows.push(vec![
            f.theta_hat.to_string(),
            f.tuples_used.to_string(),
            f.tuples_skipped.to_string(),
            f.maxima.jensen.to_string(),
            f.maxima.njordan.to_string(),
            f.maxima.star.map_or_else(String::new, |v| v.to_string()),
            f.maxima.combined.to_string(),
        ]);
        vec![t]
    }
}

impl Emit for CorrectionReport {
    fn text_summary(&self) -> String {
        let m = &self.summary;
        format!(
            "points={} median_iterations={} rate_estimate={} non_converged={} overflows={}\n",
            m.points,
            opt(m.median_iterations),
            opt(m.rate_estimate),
            m.non_converged,
            m.overflows.len()
        )
    }

    fn tables(&self) -> Vec<Table> {
        let mut t = Table::new(
            "correction",
            &["index", "norm", "iterations_used", "converged", "last_residual", "rate"],
        );
        for p in &self.points {
            t.rows.push(vec![
                p.index.to_string(),
                p.norm.to_string(),
                p.iterations_used.to_string(),
                p.converged.to_string(),
                p.last_residual.map_or_else(String::new, |v| v.to_string()),
                p.rate.map_or_else(String::new, |v| v.to_string()),
            ]);
        }
        vec![t]
    }
}

impl Emit for ConstantsReport {
    fn text_summary(&self) -> String {
        let mut s = format!("{} stated={}\n", self.variant, self.constants.stated);
        if let Some(c) = self.constants.proof_consistent {
            let _ = writeln!(s, "{} proof-consistent={}", self.variant, c);
        }
        s
    }

    fn tables(&self) -> Vec<Table> {
        let mut t = Table::new("constants", &["variant", "theta", "l", "stated", "proof_consistent"]);
        t.rows.push(vec![
            self.variant.to_string(),
            self.theta.to_string(),
            self.l.map_or_else(String::new, |v| v.to_string()),
            self.constants.stated.to_string(),
            self.constants.proof_consistent.map_or_else(String::new, |v| v.to_string()),
        ]);
        vec![t]
    }
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes one `<name>.csv` per table into `dir`, creating it if needed.
pub fn write_tables(tables: &[Table], dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(io_error(dir))?;
    let mut written = Vec::new();
    for table in tables {
        let path = dir.join(format!("{}.csv", table.name));
        let mut w = csv::Writer::from_path(&path).map_err(|e| csv_error(&path, e))?;
        w.write_record(&table.header).map_err(|e| csv_error(&path, e))?;
        for row in &table.rows {
            w.write_record(row).map_err(|e| csv_error(&path, e))?;
        }
        w.flush().map_err(io_error(&path))?;
        written.push(path);
    }
    Ok(written)
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        other => Error::Serialization(format!("{}: {other:?}", path.display())),
    }
}

/// Writes `value` to `path`: a file for JSON and text, a directory for CSV.
pub fn emit<T: Emit>(value: &T, format: OutputFormat, path: &Path) -> Result<()> {
    match format {
        OutputFormat::Json => fs::write(path, value.to_json()?).map_err(io_error(path)),
        OutputFormat::TextSummary => fs::write(path, value.text_summary()).map_err(io_error(path)),
        OutputFormat::CsvTables => write_tables(&value.tables(), path).map(|_| ()),
    }
}

pub fn emit_report(report: &Report, format: OutputFormat, path: &Path) -> Result<()> {
    emit(report, format, path)
}

/// Reads a JSON report back; I/O and parse errors carry the path.
pub fn read_report(path: &Path) -> Result<Report> {
    let text = fs::read_to_string(path).map_err(io_error(path))?;
    Report::from_json(&text).map_err(|e| Error::Serialization(format!("{}: {e}", path.display())))
}

/// The JSON text of a report with `wall_time_secs` zeroed, for byte comparison.
pub fn canonical_json(report: &Report) -> Result<String> {
    let mut r = report.clone();
    r.wall_time_secs = 0.0;
    r.to_json()
}
