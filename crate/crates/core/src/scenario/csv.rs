use std::path::Path;

use crate::error::{Error, Result};
use crate::lindblad::TimeSeries;

fn csv_error(e: csv::Error) -> Error {
    match e.position() {
        Some(pos) => Error::Io(format!("CSV line {}: {e}", pos.line())),
        None => Error::Io(format!("CSV: {e}")),
    }
}

/// `t,<labels>` header, one row per sample, 17 significant digits, LF endings.
pub fn render_csv(series: &TimeSeries) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let header = std::iter::once("t").chain(series.labels.iter().map(String::as_str));
    w.write_record(header).expect("in-memory write");
    for (i, t) in series.times.iter().enumerate() {
        let row = std::iter::once(*t)
            .chain(series.values.iter().map(|c| c[i]))
            .map(|v| format!("{v:.16e}"));
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8 input")
}

pub fn write_csv(series: &TimeSeries, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, render_csv(series))?;
    Ok(())
}

pub fn parse_csv(text: &str) -> Result<TimeSeries> {
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = r.headers().map_err(csv_error)?.clone();
    if header.is_empty() {
        return Err(Error::Io("empty CSV".into()));
    }
    if &header[0] != "t" {
        return Err(Error::Io("CSV header must start with `t`".into()));
    }
    let labels: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let mut series = TimeSeries::new(labels);
    let mut row = Vec::new();
    for record in r.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        row.clear();
        for f in &record {
            row.push(
                f.parse::<f64>()
                    .map_err(|_| Error::Io(format!("CSV line {line}: bad number `{f}`")))?,
            );
        }
        series.push(row[0], &row[1..]);
    }
    Ok(series)
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<TimeSeries> {
    parse_csv(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> TimeSeries {
        let mut s = TimeSeries::new(vec!["P(GHZ-)".into(), "F(GHZ-)".into()]);
        s.push(0.0, &[0.125, 0.353_553_390_593_273_8]);
        s.push(0.1, &[1.0 / 3.0, 2f64.sqrt() / 7.0]);
        s.push(200.0, &[0.996_941_234_567_89, -1e-17]);
        s
    }

    #[test]
    fn format_is_stable() {
        let text = render_csv(&sample());
        assert!(text.starts_with("t,P(GHZ-),F(GHZ-)\n"));
        assert!(!text.contains('\r'));
        let second = text.lines().nth(1).unwrap();
        assert_eq!(second.split(',').next().unwrap(), "0.0000000000000000e0");
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn round_trip_exact() {
        let s = sample();
        let back = parse_csv(&render_csv(&s)).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_csv("").is_err());
        assert!(parse_csv("x,a\n1,2\n").is_err());
        assert!(parse_csv("t,a\n1,2,3\n").is_err());
        assert!(parse_csv("t,a\n1,zz\n").is_err());
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        write_csv(&sample(), &path).unwrap();
        assert_eq!(read_csv(&path).unwrap(), sample());
    }

    proptest! {
        #[test]
        fn values_survive_within_1e12(vals in proptest::collection::vec(-1e3f64..1e3, 1..20)) {
            let mut s = TimeSeries::new(vec!["x".into()]);
            for (i, v) in vals.iter().enumerate() {
                s.push(i as f64 * 0.37, &[*v]);
            }
            let back = parse_csv(&render_csv(&s)).unwrap();
            for (a, b) in back.values[0].iter().zip(&vals) {
                prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
            }
        }
    }
}
