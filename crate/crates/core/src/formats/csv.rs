//! Numeric CSV tables: float series `t,v1,...,vN`, timelines
//! `onset,duration`, envelopes `t,volume` and trajectories `t,x,y`.
//!
//! Readers accept an optional header row. Writers always emit one.

use super::FormatError;
use crate::carriers::FloatSeries;
use crate::motion::{Trajectory2D, TrajectorySample};
use crate::timing::{EventTimeline, Utterance};

fn bad(msg: impl Into<String>) -> FormatError {
    FormatError::MalformedCsv(msg.into())
}

/// Parses every data row into numbers, skipping a leading header.
pub fn read_rows(text: &str) -> Result<Vec<Vec<f64>>, FormatError> {
    let mut reader = ::csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(::csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let parsed: Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(row) => rows.push(row),
            Err(_) if i == 0 => continue,
            Err(e) => return Err(bad(format!("row {}: {e}", i + 1))),
        }
    }
    Ok(rows)
}

fn fmt_num(v: f64, decimals: Option<usize>) -> String {
    match decimals {
        Some(d) => format!("{v:.d$}"),
        None => format!("{v}"),
    }
}

fn write_table(header: &[String], rows: impl Iterator<Item = Vec<f64>>, decimals: Option<usize>) -> String {
    let mut writer = ::csv::Writer::from_writer(Vec::new());
    writer.write_record(header).expect("in-memory write");
    for row in rows {
        writer.write_record(row.iter().map(|&v| fmt_num(v, decimals))).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("ASCII output")
}

fn expect_width(rows: &[Vec<f64>], width: usize, what: &str) -> Result<(), FormatError> {
    match rows.iter().position(|r| r.len() != width) {
        Some(i) => Err(bad(format!("{what} row {} has {} fields, expected {width}", i + 1, rows[i].len()))),
        None => Ok(()),
    }
}

pub fn write_float_series(series: &FloatSeries, decimals: usize) -> String {
    let header: Vec<String> =
        std::iter::once("t".to_string()).chain((1..=series.arity()).map(|i| format!("v{i}"))).collect();
    let rows = series
        .timestamps()
        .iter()
        .zip(series.values())
        .map(|(&t, v)| std::iter::once(t).chain(v.iter().copied()).collect());
    write_table(&header, rows, Some(decimals))
}

pub fn read_float_series(text: &str, quantum: f64) -> Result<FloatSeries, FormatError> {
    let rows = read_rows(text)?;
    if rows.iter().any(|r| r.len() < 2) {
        return Err(bad("float series rows need a timestamp and at least one value"));
    }
    let (t, v) = rows.into_iter().map(|r| (r[0], r[1..].to_vec())).unzip();
    FloatSeries::new(t, v, quantum).map_err(|e| bad(e.to_string()))
}

pub fn write_timeline(timeline: &EventTimeline, decimals: Option<usize>) -> String {
    let header = ["onset".to_string(), "duration".to_string()];
    write_table(&header, timeline.events().iter().map(|u| vec![u.onset, u.duration]), decimals)
}

pub fn read_timeline(text: &str) -> Result<EventTimeline, FormatError> {
    let rows = read_rows(text)?;
    expect_width(&rows, 2, "timeline")?;
    let events = rows.iter().map(|r| Utterance { onset: r[0], duration: r[1] }).collect();
    EventTimeline::new(events).map_err(|e| bad(e.to_string()))
}

/// `(t, volume)` pairs.
pub fn write_envelope(rate: f64, envelope: &[f64], decimals: Option<usize>) -> String {
    let header = ["t".to_string(), "volume".to_string()];
    write_table(&header, envelope.iter().enumerate().map(|(i, &v)| vec![i as f64 / rate, v]), decimals)
}

pub fn read_envelope(text: &str) -> Result<Vec<(f64, f64)>, FormatError> {
    let rows = read_rows(text)?;
    expect_width(&rows, 2, "envelope")?;
    Ok(rows.iter().map(|r| (r[0], r[1])).collect())
}

pub fn write_trajectory(traj: &Trajectory2D, decimals: Option<usize>) -> String {
    let header = ["t".to_string(), "x".to_string(), "y".to_string()];
    write_table(&header, traj.samples().iter().map(|s| vec![s.t, s.x, s.y]), decimals)
}

pub fn read_trajectory(text: &str) -> Result<Trajectory2D, FormatError> {
    let rows = read_rows(text)?;
    expect_width(&rows, 3, "trajectory")?;
    let samples = rows.iter().map(|r| TrajectorySample { t: r[0], x: r[1], y: r[2] }).collect();
    Trajectory2D::new(samples).map_err(|e| bad(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_series_text() {
        let s = FloatSeries::new(vec![0.0, 0.5], vec![vec![0.1, -0.25], vec![1.0, 2.0]], 1e-4).unwrap();
        let text = write_float_series(&s, 6);
        assert_eq!(text, "t,v1,v2\n0.000000,0.100000,-0.250000\n0.500000,1.000000,2.000000\n");
        assert_eq!(read_float_series(&text, 1e-4).unwrap(), s);
    }

    #[test]
    fn headerless_input_and_errors() {
        let s = read_float_series("0,1\n1,2\n", 1e-4).unwrap();
        assert_eq!(s.values(), &[vec![1.0], vec![2.0]]);
        assert!(read_float_series("t,v1\n0,abc\n", 1e-4).is_err());
        assert!(read_timeline("onset,duration\n0,1,2\n").is_err());
        assert!(read_timeline("0,1\n0.5,1\n").is_err());
    }

    #[test]
    fn timeline_and_trajectory() {
        let tl =
            EventTimeline::new(vec![Utterance { onset: 0.0, duration: 0.3 }, Utterance { onset: 0.9, duration: 0.3 }])
                .unwrap();
        assert_eq!(read_timeline(&write_timeline(&tl, None)).unwrap(), tl);

        let traj = Trajectory2D::new(vec![
            TrajectorySample { t: 0.0, x: 0.1, y: 0.0 },
            TrajectorySample { t: 0.02, x: 0.1000001, y: 0.1 },
        ])
        .unwrap();
        assert_eq!(read_trajectory(&write_trajectory(&traj, None)).unwrap(), traj);
    }

    #[test]
    fn envelope() {
        let text = write_envelope(40.0, &[0.0, 0.5], Some(3));
        assert_eq!(text, "t,volume\n0.000,0.000\n0.025,0.500\n");
        assert_eq!(read_envelope(&text).unwrap(), vec![(0.0, 0.0), (0.025, 0.5)]);
    }
}
