use std::path::Path;

use super::run::SweepRecord;
use super::summary::{Metric, SummaryRow, SweepSummary};
use crate::error::{Error, Result};

pub const RECORD_COLUMNS: [&str; 13] = [
    "experiment",
    "capacity",
    "ratio",
    "repeat",
    "seed",
    "train_mse_osa",
    "test_mse_osa",
    "train_mse_free",
    "test_mse_free",
    "param_norm",
    "cond",
    "diverged",
    "wall_time_s",
];

pub const SUMMARY_COLUMNS: [&str; 6] = ["capacity", "ratio", "metric", "median", "q25", "q75"];

/// Shortest representation that parses back to the same value.
pub fn format_f64(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v:?}")
    }
}

fn format_opt(v: Option<f64>) -> String {
    v.map(format_f64).unwrap_or_default()
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |source| Error::Csv { path: path.to_path_buf(), source }
}

fn parse_err(path: &Path, line: u64, message: String) -> Error {
    Error::Parse { path: path.to_path_buf(), line: line as usize, message }
}

fn writer(path: &Path, header: &[&str]) -> Result<csv::Writer<std::fs::File>> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(header).map_err(csv_err(path))?;
    Ok(w)
}

pub fn write_records(path: impl AsRef<Path>, records: &[SweepRecord]) -> Result<()> {
    let path = path.as_ref();
    let mut w = writer(path, &RECORD_COLUMNS)?;
    for r in records {
        w.write_record([
            r.experiment.clone(),
            r.capacity.to_string(),
            format_f64(r.ratio),
            r.repeat.to_string(),
            r.seed.to_string(),
            format_f64(r.train_mse_osa),
            format_f64(r.test_mse_osa),
            format_f64(r.train_mse_free),
            format_f64(r.test_mse_free),
            format_opt(r.param_norm),
            format_opt(r.cond),
            r.diverged.to_string(),
            format_opt(r.wall_time_s),
        ])
        .map_err(csv_err(path))?;
    }
    w.flush().map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

pub fn write_summary(path: impl AsRef<Path>, summary: &SweepSummary) -> Result<()> {
    let path = path.as_ref();
    let mut w = writer(path, &SUMMARY_COLUMNS)?;
    for r in &summary.rows {
        w.write_record([
            r.capacity.to_string(),
            format_f64(r.ratio),
            r.metric.name().to_string(),
            format_f64(r.median),
            format_f64(r.q25),
            format_f64(r.q75),
        ])
        .map_err(csv_err(path))?;
    }
    w.flush().map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

struct Fields<'a> {
    rec: &'a csv::StringRecord,
    path: &'a Path,
    line: u64,
}

impl Fields<'_> {
    fn raw(&self, i: usize) -> &str {
        self.rec.get(i).unwrap_or("")
    }

    fn parse<T: std::str::FromStr>(&self, i: usize, name: &str) -> Result<T> {
        self.raw(i)
            .parse()
            .map_err(|_| parse_err(self.path, self.line, format!("bad {name} `{}`", self.raw(i))))
    }

    fn float(&self, i: usize, name: &str) -> Result<f64> {
        match self.raw(i) {
            "inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            _ => self.parse(i, name),
        }
    }

    fn opt_float(&self, i: usize, name: &str) -> Result<Option<f64>> {
        if self.raw(i).is_empty() {
            Ok(None)
        } else {
            self.float(i, name).map(Some)
        }
    }
}

fn read_rows<T>(path: &Path, header: &[&str], f: impl Fn(&Fields) -> Result<T>) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let got = r.headers().map_err(csv_err(path))?.clone();
    if got.iter().ne(header.iter().copied()) {
        return Err(parse_err(path, 1, format!("expected header `{}`", header.join(","))));
    }
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_err(path))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != header.len() {
            return Err(parse_err(path, line, format!("expected {} fields, got {}", header.len(), rec.len())));
        }
        out.push(f(&Fields { rec: &rec, path, line })?);
    }
    Ok(out)
}

pub fn read_records(path: impl AsRef<Path>) -> Result<Vec<SweepRecord>> {
    read_rows(path.as_ref(), &RECORD_COLUMNS, |f| {
        Ok(SweepRecord {
            experiment: f.raw(0).to_string(),
            capacity: f.parse(1, "capacity")?,
            ratio: f.float(2, "ratio")?,
            repeat: f.parse(3, "repeat")?,
            seed: f.parse(4, "seed")?,
            train_mse_osa: f.float(5, "train_mse_osa")?,
            test_mse_osa: f.float(6, "test_mse_osa")?,
            train_mse_free: f.float(7, "train_mse_free")?,
            test_mse_free: f.float(8, "test_mse_free")?,
            param_norm: f.opt_float(9, "param_norm")?,
            cond: f.opt_float(10, "cond")?,
            diverged: f.parse(11, "diverged")?,
            wall_time_s: f.opt_float(12, "wall_time_s")?,
        })
    })
}

/// Reads a summary file; `experiment` is taken from the caller since the
/// file itself holds a single label.
pub fn read_summary(path: impl AsRef<Path>, experiment: &str) -> Result<SweepSummary> {
    let path = path.as_ref();
    let rows = read_rows(path, &SUMMARY_COLUMNS, |f| {
        let metric = Metric::from_name(f.raw(2))
            .ok_or_else(|| parse_err(path, f.line, format!("unknown metric `{}`", f.raw(2))))?;
        Ok(SummaryRow {
            capacity: f.parse(0, "capacity")?,
            ratio: f.float(1, "ratio")?,
            metric,
            median: f.float(3, "median")?,
            q25: f.float(4, "q25")?,
            q75: f.float(5, "q75")?,
        })
    })?;
    Ok(SweepSummary { experiment: experiment.to_string(), rows })
}

/// File name for the summary of `label`: `summary.csv` for a single-label
/// run, otherwise `summary_<label>.csv` with unsafe characters replaced.
pub fn summary_file_name(label: &str, single: bool) -> String {
    if single {
        return "summary.csv".into();
    }
    let clean: String = label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' })
        .collect();
    format!("summary_{}.csv", clean.trim_end_matches('_'))
}
