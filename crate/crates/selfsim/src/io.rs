//! CSV trace, spectrum, simulation and benchmark files.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so a
//! value read back parses to the same `f64`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use selfsim_core::benchmark::{AggregateRow, Record};
use selfsim_core::spectral::Spectrum;
use selfsim_core::TimeSeries;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("FileNotFound: {0}")]
    FileNotFound(PathBuf),
    #[error("MalformedCsv: {path}, line {line}: {reason}")]
    MalformedCsv { path: PathBuf, line: u64, reason: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {}", .0.name(), .0)]
    Series(#[from] selfsim_core::Error),
}

impl IoError {
    pub fn name(&self) -> &'static str {
        match self {
            IoError::FileNotFound(_) => "FileNotFound",
            IoError::MalformedCsv { .. } => "MalformedCsv",
            IoError::Io { .. } => "Io",
            IoError::Series(e) => e.name(),
        }
    }
}

/// A trace read from disk. `t0` is set when the file carries a time column.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub series: TimeSeries,
    pub t0: Option<f64>,
}

/// Relative tolerance on the spacing of a `t,value` file.
const SPACING_TOLERANCE: f64 = 1e-6;

pub fn read_trace(path: &Path) -> Result<Trace, IoError> {
    let file = File::open(path).map_err(|e| open_error(path, e))?;
    parse_trace(file, path)
}

pub fn parse_trace(reader: impl io::Read, path: &Path) -> Result<Trace, IoError> {
    let malformed =
        |line: u64, reason: String| IoError::MalformedCsv { path: path.to_path_buf(), line, reason };
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let header = rdr.headers().map_err(|e| malformed(1, e.to_string()))?.clone();
    let timed = match header.iter().collect::<Vec<_>>().as_slice() {
        ["value"] => false,
        ["t", "value"] => true,
        _ => {
            return Err(malformed(
                1,
                format!(
                    "expected header `value` or `t,value`, found `{}`",
                    header.iter().collect::<Vec<_>>().join(",")
                ),
            ))
        }
    };
    let mut times = Vec::new();
    let mut values = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            malformed(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize| -> Result<f64, IoError> {
            let raw = &record[i];
            let v: f64 = raw.parse().map_err(|_| malformed(line, format!("`{raw}` is not a number")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(malformed(line, format!("`{raw}` is not finite")))
            }
        };
        if timed {
            times.push((field(0)?, line));
            values.push(field(1)?);
        } else {
            values.push(field(0)?);
        }
    }
    let mut dt = 1.0;
    if times.len() >= 2 {
        dt = times[1].0 - times[0].0;
        if !(dt > 0.0) {
            return Err(malformed(times[1].1, "time column must increase".into()));
        }
        for (k, &(t, line)) in times.iter().enumerate() {
            let want = times[0].0 + k as f64 * dt;
            if (t - want).abs() > SPACING_TOLERANCE * dt.max(want.abs()) {
                return Err(malformed(line, "time column is not uniformly spaced".into()));
            }
        }
    }
    let t0 = if timed { Some(times.first().map_or(0.0, |t| t.0)) } else { None };
    let series = TimeSeries::new(values, dt)?;
    Ok(Trace { series, t0 })
}

fn open_error(path: &Path, e: io::Error) -> IoError {
    if e.kind() == io::ErrorKind::NotFound {
        IoError::FileNotFound(path.to_path_buf())
    } else {
        IoError::Io { path: path.to_path_buf(), source: e }
    }
}

/// Output sink: a file, or standard output when no path is given.
pub struct Sink {
    path: PathBuf,
    inner: BufWriter<Box<dyn Write>>,
}

impl Sink {
    pub fn open(path: Option<&Path>) -> Result<Sink, IoError> {
        let (path, inner): (PathBuf, Box<dyn Write>) = match path {
            Some(p) => (p.to_path_buf(), Box::new(File::create(p).map_err(|e| open_error(p, e))?)),
            None => (PathBuf::from("<stdout>"), Box::new(io::stdout())),
        };
        Ok(Sink { path, inner: BufWriter::new(inner) })
    }

    pub fn line(&mut self, text: impl std::fmt::Display) -> Result<(), IoError> {
        writeln!(self.inner, "{text}").map_err(|e| self.fail(e))
    }

    pub fn finish(mut self) -> Result<(), IoError> {
        self.inner.flush().map_err(|e| self.fail(e))
    }

    fn fail(&self, source: io::Error) -> IoError {
        IoError::Io { path: self.path.clone(), source }
    }
}

/// Writes `value` rows, or `t,value` rows starting at `t0`.
pub fn write_trace(sink: &mut Sink, series: &TimeSeries, t0: Option<f64>) -> Result<(), IoError> {
    match t0 {
        Some(t0) => {
            sink.line("t,value")?;
            for (k, v) in series.values().iter().enumerate() {
                sink.line(format_args!("{},{v}", t0 + k as f64 * series.dt()))?;
            }
        }
        None => {
            sink.line("value")?;
            for v in series.values() {
                sink.line(v)?;
            }
        }
    }
    Ok(())
}

/// `freq_rad_per_sample,power` rows, or `freq_cycles_per_sample,power`.
pub fn write_spectrum(sink: &mut Sink, spectrum: &Spectrum, cycles: bool) -> Result<(), IoError> {
    let freqs = if cycles {
        sink.line("freq_cycles_per_sample,power")?;
        spectrum.frequencies_cycles()
    } else {
        sink.line("freq_rad_per_sample,power")?;
        spectrum.frequencies.clone()
    };
    for (f, p) in freqs.iter().zip(&spectrum.power) {
        sink.line(format_args!("{f},{p}"))?;
    }
    Ok(())
}

/// Rows of the `simulate` output; `smoothed` is written when present.
pub fn write_simulation(
    sink: &mut Sink,
    tick: f64,
    clean: &[f64],
    measured: &[f64],
    smoothed: Option<&[f64]>,
) -> Result<(), IoError> {
    match smoothed {
        Some(s) => {
            sink.line("t,p_clean,p_measured,p_smoothed")?;
            for k in 0..clean.len() {
                sink.line(format_args!("{},{},{},{}", k as f64 * tick, clean[k], measured[k], s[k]))?;
            }
        }
        None => {
            sink.line("t,p_clean,p_measured")?;
            for k in 0..clean.len() {
                sink.line(format_args!("{},{},{}", k as f64 * tick, clean[k], measured[k]))?;
            }
        }
    }
    Ok(())
}

pub fn write_records(sink: &mut Sink, records: &[Record]) -> Result<(), IoError> {
    sink.line("smoother,alpha,seed,mse")?;
    for r in records {
        sink.line(format_args!("{},{},{},{}", r.smoother, r.alpha, r.seed, r.mse))?;
    }
    Ok(())
}

pub fn write_aggregate(sink: &mut Sink, rows: &[AggregateRow]) -> Result<(), IoError> {
    sink.line("smoother,alpha,mean_mse,std_mse")?;
    for r in rows {
        sink.line(format_args!("{},{},{},{}", r.smoother, r.alpha, r.mean_mse, r.std_mse))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Trace, IoError> {
        parse_trace(text.as_bytes(), Path::new("mem.csv"))
    }

    #[test]
    fn single_column() {
        let t = parse("value\n1\n2.5\n-3e-2\n").unwrap();
        assert_eq!(t.series.values(), &[1.0, 2.5, -0.03]);
        assert_eq!(t.series.dt(), 1.0);
        assert_eq!(t.t0, None);
    }

    #[test]
    fn timed_column_sets_spacing() {
        let t = parse("t,value\n0.5,1\n0.75,2\n1.0,3\n").unwrap();
        assert_eq!(t.series.dt(), 0.25);
        assert_eq!(t.t0, Some(0.5));
    }

    #[test]
    fn bad_field_reports_line() {
        match parse("value\n1\n2\nabc\n").unwrap_err() {
            IoError::MalformedCsv { line, .. } => assert_eq!(line, 4),
            e => panic!("{e}"),
        }
        match parse("t,value\n0,1\n1,2\n3,3\n").unwrap_err() {
            IoError::MalformedCsv { line, .. } => assert_eq!(line, 4),
            e => panic!("{e}"),
        }
        match parse("t,value\n0,1\n1\n").unwrap_err() {
            IoError::MalformedCsv { line, .. } => assert_eq!(line, 3),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn unknown_header() {
        assert_eq!(parse("x\n1\n").unwrap_err().name(), "MalformedCsv");
        assert_eq!(parse("").unwrap_err().name(), "MalformedCsv");
        assert_eq!(parse("value\n").unwrap_err().name(), "EmptySeries");
    }

    #[test]
    fn missing_file() {
        let err = read_trace(Path::new("/nonexistent/trace.csv")).unwrap_err();
        assert_eq!(err.name(), "FileNotFound");
    }

    #[test]
    fn values_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.csv");
        let x = TimeSeries::new(vec![0.1, 1.0 / 3.0, -2e-300, 12345.678], 0.01).unwrap();
        let mut sink = Sink::open(Some(&path)).unwrap();
        write_trace(&mut sink, &x, Some(0.0)).unwrap();
        sink.finish().unwrap();
        let back = read_trace(&path).unwrap();
        assert_eq!(back.series.values(), x.values());
        assert_eq!(back.series.dt(), 0.01);
    }
}
