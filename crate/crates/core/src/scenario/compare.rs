use crate::error::{Error, Result};
use crate::lindblad::{interpolate, TimeSeries};

#[derive(Debug, Clone, PartialEq)]
pub struct CompareEntry {
    pub label: String,
    pub max_deviation: f64,
    pub at_time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub entries: Vec<CompareEntry>,
}

impl CompareReport {
    pub fn max_deviation(&self) -> f64 {
        self.entries.iter().map(|e| e.max_deviation).fold(0.0, f64::max)
    }

    pub fn get(&self, label: &str) -> Option<&CompareEntry> {
        self.entries.iter().find(|e| e.label == label)
    }
}

/// Per shared label, the largest `|a − b|` over `a`'s sample times inside the
/// overlap of both time ranges; `b` is linearly interpolated onto those times.
pub fn compare(a: &TimeSeries, b: &TimeSeries) -> Result<CompareReport> {
    let (Some(&a0), Some(&a1), Some(&b0), Some(&b1)) =
        (a.times.first(), a.times.last(), b.times.first(), b.times.last())
    else {
        return Err(Error::arg("cannot compare an empty series"));
    };
    let (lo, hi) = (a0.max(b0), a1.min(b1));
    if lo > hi {
        return Err(Error::arg(format!(
            "time ranges [{a0}, {a1}] and [{b0}, {b1}] are disjoint"
        )));
    }
    let mut entries = Vec::new();
    for (k, label) in a.labels.iter().enumerate() {
        let Some(bcol) = b.column(label) else { continue };
        let mut best = CompareEntry {
            label: label.clone(),
            max_deviation: 0.0,
            at_time: lo,
        };
        for (&t, &va) in a.times.iter().zip(&a.values[k]) {
            if t < lo || t > hi {
                continue;
            }
            let Some(vb) = interpolate(&b.times, bcol, t) else {
                continue;
            };
            let d = (va - vb).abs();
            if d > best.max_deviation {
                best.max_deviation = d;
                best.at_time = t;
            }
        }
        entries.push(best);
    }
    if entries.is_empty() {
        return Err(Error::arg("series share no observable labels"));
    }
    Ok(CompareReport { entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(times: &[f64], slope: f64) -> TimeSeries {
        let mut s = TimeSeries::new(vec!["x".into(), "y".into()]);
        for &t in times {
            s.push(t, &[slope * t, 1.0]);
        }
        s
    }

    #[test]
    fn identical_series_have_zero_deviation() {
        let a = ramp(&[0.0, 1.0, 2.0], 0.5);
        let r = compare(&a, &a).unwrap();
        assert_eq!(r.max_deviation(), 0.0);
        assert_eq!(r.entries.len(), 2);
    }

    #[test]
    fn resamples_different_strides() {
        let a = ramp(&[0.0, 0.5, 1.0, 1.5, 2.0], 1.0);
        let b = ramp(&[0.0, 2.0], 1.0);
        assert!(compare(&a, &b).unwrap().max_deviation() < 1e-15);
        let c = ramp(&[0.0, 1.0, 2.0], 1.1);
        let r = compare(&a, &c).unwrap();
        let x = r.get("x").unwrap();
        assert!((x.max_deviation - 0.2).abs() < 1e-12);
        assert_eq!(x.at_time, 2.0);
    }

    #[test]
    fn disjoint_ranges_fail() {
        let a = ramp(&[0.0, 1.0], 1.0);
        let b = ramp(&[2.0, 3.0], 1.0);
        assert!(compare(&a, &b).is_err());
        let mut other = TimeSeries::new(vec!["z".into()]);
        other.push(0.0, &[0.0]);
        other.push(1.0, &[0.0]);
        assert!(compare(&a, &other).is_err());
    }
}
