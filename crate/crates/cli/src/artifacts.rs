//! Output files written by `backtest`, with readers for each.
//!
//! CSV numbers use fixed six-decimal formatting, so reading a file and
//! writing it back reproduces it byte for byte. JSON keeps full precision.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use chrono::NaiveDate;
use fractal_parity::backtest::Compounding;
use fractal_parity::metrics::PerformanceReport;
use fractal_parity::StrategyVariant;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::CliError;

pub const REPORT_JSON: &str = "report.json";
pub const REPORT_TXT: &str = "report.txt";
pub const PERIODS_CSV: &str = "periods.csv";
pub const CUMULATIVE_CSV: &str = "cumulative.csv";
pub const DIFFERENCE_CSV: &str = "difference.csv";
pub const MANIFEST_JSON: &str = "manifest.json";

const DATE_FORMAT: &str = "%Y-%m-%d";

pub fn fmt6(x: f64) -> String {
    format!("{x:.6}")
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::data(format!("{}: {e}", path.display()))
}

fn parse_f64(field: &str) -> Result<f64, CliError> {
    field
        .trim()
        .parse()
        .map_err(|_| CliError::data(format!("MalformedRow: `{field}` is not a number")))
}

fn parse_date(field: &str) -> Result<NaiveDate, CliError> {
    NaiveDate::parse_from_str(field.trim(), DATE_FORMAT)
        .map_err(|_| CliError::data(format!("MalformedRow: `{field}` is not a YYYY-MM-DD date")))
}

fn parse_usize(field: &str) -> Result<usize, CliError> {
    field
        .trim()
        .parse()
        .map_err(|_| CliError::data(format!("MalformedRow: `{field}` is not a period index")))
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::data(format!("MalformedRow: {e}"))
}

fn finish(writer: csv::Writer<Vec<u8>>) -> String {
    let bytes = writer.into_inner().expect("writing to memory cannot fail");
    String::from_utf8(bytes).expect("csv output is utf-8")
}

fn records<R: Read>(reader: R) -> Result<(Vec<String>, Vec<csv::StringRecord>), CliError> {
    let mut rdr = csv::Reader::from_reader(reader);
    let header = rdr
        .headers()
        .map_err(csv_error)?
        .iter()
        .map(String::from)
        .collect();
    let rows = rdr
        .records()
        .collect::<Result<Vec<_>, _>>()
        .map_err(csv_error)?;
    Ok((header, rows))
}

fn expect_prefix(header: &[String], prefix: &[&str]) -> Result<(), CliError> {
    if header.len() < prefix.len() || header.iter().zip(prefix).any(|(h, p)| h != p) {
        return Err(CliError::data(format!(
            "MissingColumn: header must start with {}",
            prefix.join(",")
        )));
    }
    Ok(())
}

/// Net return per holding period for every strategy and the benchmark.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodTable {
    pub columns: Vec<String>,
    pub rows: Vec<PeriodRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodRow {
    pub period: usize,
    pub start: NaiveDate,
    pub end: NaiveDate,
    pub values: Vec<f64>,
}

impl PeriodTable {
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["period".to_string(), "start".into(), "end".into()];
        header.extend(self.columns.iter().cloned());
        w.write_record(&header).expect("in-memory write");
        for r in &self.rows {
            let mut rec = vec![
                r.period.to_string(),
                r.start.format(DATE_FORMAT).to_string(),
                r.end.format(DATE_FORMAT).to_string(),
            ];
            rec.extend(r.values.iter().map(|v| fmt6(*v)));
            w.write_record(&rec).expect("in-memory write");
        }
        finish(w)
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<Self, CliError> {
        let (header, recs) = records(reader)?;
        expect_prefix(&header, &["period", "start", "end"])?;
        let rows = recs
            .iter()
            .map(|rec| {
                Ok(PeriodRow {
                    period: parse_usize(&rec[0])?,
                    start: parse_date(&rec[1])?,
                    end: parse_date(&rec[2])?,
                    values: rec
                        .iter()
                        .skip(3)
                        .map(parse_f64)
                        .collect::<Result<_, _>>()?,
                })
            })
            .collect::<Result<_, CliError>>()?;
        Ok(PeriodTable {
            columns: header[3..].to_vec(),
            rows,
        })
    }
}

/// Cumulative return in percent of initial capital, one row per period
/// boundary, starting from zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulativeTable {
    pub columns: Vec<String>,
    pub dates: Vec<NaiveDate>,
    pub values: Vec<Vec<f64>>,
}

impl CumulativeTable {
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["date".to_string()];
        header.extend(self.columns.iter().cloned());
        w.write_record(&header).expect("in-memory write");
        for (date, row) in self.dates.iter().zip(&self.values) {
            let mut rec = vec![date.format(DATE_FORMAT).to_string()];
            rec.extend(row.iter().map(|v| fmt6(*v)));
            w.write_record(&rec).expect("in-memory write");
        }
        finish(w)
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<Self, CliError> {
        let (header, recs) = records(reader)?;
        expect_prefix(&header, &["date"])?;
        let mut dates = Vec::with_capacity(recs.len());
        let mut values = Vec::with_capacity(recs.len());
        for rec in &recs {
            dates.push(parse_date(&rec[0])?);
            values.push(
                rec.iter()
                    .skip(1)
                    .map(parse_f64)
                    .collect::<Result<_, _>>()?,
            );
        }
        Ok(CumulativeTable {
            columns: header[1..].to_vec(),
            dates,
            values,
        })
    }
}

/// Per-period return difference between two strategies and its running sum.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceTable {
    pub a: String,
    pub b: String,
    pub rows: Vec<DifferenceRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceRow {
    pub period: usize,
    pub end: NaiveDate,
    pub a: f64,
    pub b: f64,
    pub difference: f64,
    pub cumulative: f64,
}

impl DifferenceTable {
    pub fn new(
        a: &str,
        b: &str,
        periods: &[usize],
        ends: &[NaiveDate],
        ra: &[f64],
        rb: &[f64],
    ) -> Self {
        let mut cumulative = 0.0;
        let rows = periods
            .iter()
            .zip(ends)
            .zip(ra.iter().zip(rb))
            .map(|((&period, &end), (&a, &b))| {
                cumulative += a - b;
                DifferenceRow {
                    period,
                    end,
                    a,
                    b,
                    difference: a - b,
                    cumulative,
                }
            })
            .collect();
        DifferenceTable {
            a: a.into(),
            b: b.into(),
            rows,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "period",
            "end",
            &self.a,
            &self.b,
            "difference",
            "cumulative_difference",
        ])
        .expect("in-memory write");
        for r in &self.rows {
            w.write_record([
                r.period.to_string(),
                r.end.format(DATE_FORMAT).to_string(),
                fmt6(r.a),
                fmt6(r.b),
                fmt6(r.difference),
                fmt6(r.cumulative),
            ])
            .expect("in-memory write");
        }
        finish(w)
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<Self, CliError> {
        let (header, recs) = records(reader)?;
        if header.len() != 6 || header[0] != "period" || header[1] != "end" {
            return Err(CliError::data(
                "MissingColumn: expected period,end,<a>,<b>,difference,cumulative_difference",
            ));
        }
        let rows = recs
            .iter()
            .map(|rec| {
                Ok(DifferenceRow {
                    period: parse_usize(&rec[0])?,
                    end: parse_date(&rec[1])?,
                    a: parse_f64(&rec[2])?,
                    b: parse_f64(&rec[3])?,
                    difference: parse_f64(&rec[4])?,
                    cumulative: parse_f64(&rec[5])?,
                })
            })
            .collect::<Result<_, CliError>>()?;
        Ok(DifferenceTable {
            a: header[2].clone(),
            b: header[3].clone(),
            rows,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyReport {
    pub variant: StrategyVariant,
    pub label: String,
    pub report: PerformanceReport<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub ticker: String,
    pub report: PerformanceReport<f64>,
}

/// Relative improvement of strategy `a` over `b`, in percent. Positive is
/// better for every field; STD and beta are sign-flipped accordingly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Improvement {
    pub a: StrategyVariant,
    pub b: StrategyVariant,
    pub sharpe: Option<f64>,
    pub treynor_x001: Option<f64>,
    pub avg_annual_return: Option<f64>,
    pub protection: Option<f64>,
    pub annualized_std: Option<f64>,
    pub beta: Option<f64>,
}

impl Improvement {
    pub fn from_row(a: StrategyVariant, b: StrategyVariant, row: [Option<f64>; 6]) -> Self {
        Improvement {
            a,
            b,
            sharpe: row[0],
            treynor_x001: row[1],
            avg_annual_return: row[2],
            protection: row[3],
            annualized_std: row[4],
            beta: row[5],
        }
    }

    pub fn row(&self) -> [Option<f64>; 6] {
        [
            self.sharpe,
            self.treynor_x001,
            self.avg_annual_return,
            self.protection,
            self.annualized_std,
            self.beta,
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub horizon: usize,
    pub compounding: Compounding,
    pub strategies: Vec<StrategyReport>,
    pub benchmark: BenchmarkReport,
    pub improvement: Option<Improvement>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub ticker: String,
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyntheticInput {
    pub rows: usize,
    pub seed: u64,
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub engine_version: String,
    pub created_at: String,
    /// Effective configuration, command-line overrides applied.
    pub config: RunConfig,
    pub synthetic: Option<SyntheticInput>,
    pub inputs: Vec<InputDigest>,
    pub outputs: Vec<String>,
}

pub fn sha256_file(path: &Path) -> Result<String, CliError> {
    let bytes = fs::read(path).map_err(|e| io_error(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("artifact types serialize");
    s.push('\n');
    s
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    let mut f = fs::File::create(path).map_err(|e| io_error(path, e))?;
    f.write_all(text.as_bytes()).map_err(|e| io_error(path, e))
}

fn open(path: &Path) -> Result<fs::File, CliError> {
    fs::File::open(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => CliError::data(format!("FileNotFound: {}", path.display())),
        _ => io_error(path, e),
    })
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    serde_json::from_reader(open(path)?).map_err(|e| io_error(path, e))
}

pub fn read_report(path: &Path) -> Result<RunReport, CliError> {
    read_json(path)
}

pub fn read_manifest(path: &Path) -> Result<RunManifest, CliError> {
    read_json(path)
}

pub fn read_periods(path: &Path) -> Result<PeriodTable, CliError> {
    PeriodTable::from_reader(open(path)?)
}

pub fn read_cumulative(path: &Path) -> Result<CumulativeTable, CliError> {
    CumulativeTable::from_reader(open(path)?)
}

pub fn read_difference(path: &Path) -> Result<DifferenceTable, CliError> {
    DifferenceTable::from_reader(open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn day(d: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(2010, 3, d).unwrap()
    }

    #[test]
    fn period_table_round_trips() {
        let t = PeriodTable {
            columns: vec!["fractal_biased".into(), "benchmark".into()],
            rows: vec![PeriodRow {
                period: 0,
                start: day(1),
                end: day(9),
                values: vec![1.25, -0.0000001],
            }],
        };
        let text = t.to_csv();
        assert_eq!(text, "period,start,end,fractal_biased,benchmark\n0,2010-03-01,2010-03-09,1.250000,-0.000000\n");
        let back = PeriodTable::from_reader(text.as_bytes()).unwrap();
        assert_eq!(back.to_csv(), text);
    }

    #[test]
    fn difference_accumulates() {
        let t = DifferenceTable::new(
            "a",
            "b",
            &[0, 1],
            &[day(2), day(3)],
            &[2.0, 1.0],
            &[1.5, 2.0],
        );
        assert_eq!(t.rows[1].cumulative, -0.5);
        let text = t.to_csv();
        assert_eq!(
            DifferenceTable::from_reader(text.as_bytes())
                .unwrap()
                .to_csv(),
            text
        );
    }

    #[test]
    fn readers_reject_foreign_files() {
        assert!(PeriodTable::from_reader("date,x\n2010-01-01,1\n".as_bytes()).is_err());
        assert!(CumulativeTable::from_reader("date,x\nnot-a-date,1\n".as_bytes()).is_err());
        let missing = read_periods(Path::new("/nonexistent/periods.csv")).unwrap_err();
        assert!(missing.message.starts_with("FileNotFound"));
    }
}
