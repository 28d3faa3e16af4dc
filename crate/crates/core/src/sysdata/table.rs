//! Plain-text two-column `(u, y)` tables.
//!
//! Rows are comma or whitespace delimited; a single non-numeric header line
//! is allowed before the data. Blank lines and lines starting with `#` are
//! ignored.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::TimeSeries;
use crate::error::{invalid, Error, Result};

/// Fraction of a measured record used for training.
pub const DEFAULT_SPLIT: f64 = 0.6;

const MIN_SAMPLES: usize = 10;

fn parse_row(line: &str) -> Option<Result<(f64, f64), String>> {
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return None;
    }
    let fields: Vec<&str> = trimmed
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|f| !f.is_empty())
        .collect();
    if fields.len() != 2 {
        return Some(Err(format!("expected 2 columns, found {}", fields.len())));
    }
    match (fields[0].parse::<f64>(), fields[1].parse::<f64>()) {
        (Ok(u), Ok(y)) if u.is_finite() && y.is_finite() => Some(Ok((u, y))),
        (Ok(_), Ok(_)) => Some(Err("non-finite value".to_string())),
        _ => Some(Err(format!("non-numeric row `{trimmed}`"))),
    }
}

/// Reads a whole table into one series.
pub fn read_table(path: impl AsRef<Path>) -> Result<TimeSeries> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut u = Vec::new();
    let mut y = Vec::new();
    let mut seen_content = false;
    for (idx, line) in text.lines().enumerate() {
        let Some(row) = parse_row(line) else { continue };
        let first_content = !seen_content;
        seen_content = true;
        match row {
            Ok((a, b)) => {
                u.push(a);
                y.push(b);
            }
            // A header is only accepted as the first non-blank line.
            Err(_) if first_content => {}
            Err(message) => {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: idx + 1,
                    message,
                })
            }
        }
    }
    if u.is_empty() {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: "no data rows".to_string(),
        });
    }
    TimeSeries::from_vecs(u, y)
}

/// Splits a record in temporal order: the first `floor(fraction * N)`
/// samples train, the rest test.
pub fn split_series(series: &TimeSeries, fraction: f64) -> Result<(TimeSeries, TimeSeries)> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(invalid("split_fraction", format!("must lie in (0, 1), got {fraction}")));
    }
    let n = series.len();
    let cut = (fraction * n as f64).floor() as usize;
    if cut == 0 || cut == n {
        return Err(invalid(
            "split_fraction",
            format!("{fraction} leaves an empty part of a {n}-sample record"),
        ));
    }
    let (u, y) = (series.u().values(), series.y().values());
    Ok((
        TimeSeries::from_vecs(u[..cut].to_vec(), y[..cut].to_vec())?,
        TimeSeries::from_vecs(u[cut..].to_vec(), y[cut..].to_vec())?,
    ))
}

/// Loads a CE8 record and splits it into train and test parts.
pub fn load_ce8(path: impl AsRef<Path>, split_fraction: f64) -> Result<(TimeSeries, TimeSeries)> {
    let path = path.as_ref();
    let series = read_table(path)?;
    if series.len() < MIN_SAMPLES {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: format!("{} samples, at least {MIN_SAMPLES} required", series.len()),
        });
    }
    split_series(&series, split_fraction)
}

/// Writes `series` as a `u,y` table with a header line.
pub fn write_table(series: &TimeSeries, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut out = String::with_capacity(series.len() * 40);
    out.push_str("u,y\n");
    for (u, y) in series.u().values().iter().zip(series.y().values()) {
        out.push_str(&format!("{u:?},{y:?}\n"));
    }
    let mut file = fs::File::create(path).map_err(io_err)?;
    file.write_all(out.as_bytes()).map_err(io_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> std::path::PathBuf {
        let p = dir.path().join(name);
        fs::write(&p, body).unwrap();
        p
    }

    fn numbered_rows(n: usize, sep: &str) -> String {
        (0..n).map(|i| format!("{}{sep}{}\n", i, 10 * i)).collect()
    }

    #[test]
    fn ce8_split_is_sixty_forty() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(&dir, "ce8.txt", &numbered_rows(500, " "));
        let (train, test) = load_ce8(&p, DEFAULT_SPLIT).unwrap();
        assert_eq!((train.len(), test.len()), (300, 200));
        assert_eq!(train.u().values()[299], 299.0);
        assert_eq!(test.u().values()[0], 300.0);
        assert_eq!(test.y().values()[199], 4990.0);
    }

    #[test]
    fn header_is_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let plain = write(&dir, "a.csv", &numbered_rows(20, ","));
        let headed = write(&dir, "b.csv", &format!("u,y\n{}", numbered_rows(20, ",")));
        assert_eq!(load_ce8(&plain, 0.6).unwrap(), load_ce8(&headed, 0.6).unwrap());
    }

    #[test]
    fn two_row_split() {
        let series = TimeSeries::from_vecs(vec![1.0, 3.0], vec![2.0, 4.0]).unwrap();
        let (train, test) = split_series(&series, 0.5).unwrap();
        assert_eq!((train.u().values(), train.y().values()), (&[1.0][..], &[2.0][..]));
        assert_eq!((test.u().values(), test.y().values()), (&[3.0][..], &[4.0][..]));
    }

    #[test]
    fn parse_errors_report_the_line() {
        let dir = tempfile::tempdir().unwrap();
        let body = format!("u,y\n{}oops,1\n{}", numbered_rows(5, ","), numbered_rows(10, ","));
        let p = write(&dir, "bad.csv", &body);
        match load_ce8(&p, 0.6) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 7),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn too_few_samples() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(&dir, "short.csv", &numbered_rows(9, ","));
        assert!(matches!(load_ce8(&p, 0.6), Err(Error::Parse { .. })));
        assert!(matches!(load_ce8(dir.path().join("missing"), 0.6), Err(Error::Io { .. })));
    }

    #[test]
    fn export_reads_back_identically() {
        let dir = tempfile::tempdir().unwrap();
        let series = TimeSeries::from_vecs(vec![0.1, -2.5e-9, 3.0], vec![1.0 / 3.0, 7.0, -0.0]).unwrap();
        let p = dir.path().join("out.csv");
        write_table(&series, &p).unwrap();
        assert_eq!(read_table(&p).unwrap(), series);
    }
}
