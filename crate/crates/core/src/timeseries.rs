//! Day-resolution dates, moving-window aggregates, gap filling and
//! detrending.

use chrono::{Datelike, Duration, NaiveDate};

use crate::error::{Error, Result};
use crate::univariate;

const MIN_YEAR: i32 = 1583;
const MAX_YEAR: i32 = 9999;

fn epoch() -> NaiveDate {
    NaiveDate::from_ymd_opt(1970, 1, 1).expect("valid date")
}

/// Days since 1970-01-01 of a `YYYY-MM-DD` date.
pub fn parse_date(text: &str) -> Result<i64> {
    let t = text.trim();
    let bytes = t.as_bytes();
    let shape_ok = bytes.len() == 10
        && bytes[4] == b'-'
        && bytes[7] == b'-'
        && bytes
            .iter()
            .enumerate()
            .all(|(i, b)| i == 4 || i == 7 || b.is_ascii_digit());
    if !shape_ok {
        return Err(Error::Invalid(format!("`{t}` is not a YYYY-MM-DD date")));
    }
    let d = NaiveDate::parse_from_str(t, "%Y-%m-%d").map_err(|e| Error::Invalid(format!("`{t}`: {e}")))?;
    if !(MIN_YEAR..=MAX_YEAR).contains(&d.year()) {
        return Err(Error::Invalid(format!("`{t}`: year outside {MIN_YEAR}..={MAX_YEAR}")));
    }
    Ok((d - epoch()).num_days())
}

/// Inverse of [`parse_date`].
pub fn format_date(days: i64) -> Result<String> {
    let d = epoch()
        .checked_add_signed(Duration::days(days))
        .filter(|d| (MIN_YEAR..=MAX_YEAR).contains(&d.year()))
        .ok_or_else(|| Error::Invalid(format!("day {days} is out of range")))?;
    Ok(d.format("%Y-%m-%d").to_string())
}

pub fn add_days(date: &str, n: i64) -> Result<String> {
    format_date(parse_date(date)? + n)
}

/// `b - a` in days.
pub fn diff_days(a: &str, b: &str) -> Result<i64> {
    Ok(parse_date(b)? - parse_date(a)?)
}

/// Values with optional missing entries and an optional day index.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub values: Vec<Option<f64>>,
    pub index: Option<Vec<i64>>,
}

impl Series {
    pub fn new(values: Vec<Option<f64>>) -> Self {
        Series { values, index: None }
    }

    pub fn from_values(values: &[f64]) -> Self {
        Series::new(values.iter().map(|&v| Some(v)).collect())
    }

    pub fn with_index(values: Vec<Option<f64>>, index: Vec<i64>) -> Result<Self> {
        if values.len() != index.len() {
            return Err(Error::Shape(format!("{} values, {} dates", values.len(), index.len())));
        }
        if index.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid("dates must be strictly increasing".into()));
        }
        Ok(Series {
            values,
            index: Some(index),
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn same_index(&self, values: Vec<Option<f64>>) -> Series {
        Series {
            values,
            index: self.index.clone(),
        }
    }

    /// Differences of consecutive values; the first entry becomes missing
    /// so the index is kept.
    pub fn diff(&self) -> Series {
        let mut out = vec![None];
        out.extend(self.values.windows(2).map(|w| Some(w[1]? - w[0]?)));
        out.truncate(self.len());
        self.same_index(out)
    }

    /// Two-column CSV: ISO date (or position) and value, missing as empty.
    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::from(if self.index.is_some() {
            "date,value\n"
        } else {
            "position,value\n"
        });
        for (i, v) in self.values.iter().enumerate() {
            let key = match &self.index {
                Some(ix) => format_date(ix[i])?,
                None => i.to_string(),
            };
            let val = v.map(|x| x.to_string()).unwrap_or_default();
            out.push_str(&format!("{key},{val}\n"));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RollingStat {
    Mean,
    Min,
    Median,
    Max,
}

/// Aggregate over windows of `k` consecutive observations. Window
/// `i..i+k-1` is placed at `i + (k-1)/2` when centred, at `i + k - 1`
/// otherwise. Positions without a full window, or whose window contains a
/// missing value, are missing.
pub fn rolling(s: &Series, k: usize, stat: RollingStat, centered: bool) -> Result<Series> {
    let n = s.len();
    if k == 0 || k > n {
        return Err(Error::Invalid(format!("window {k} for a series of length {n}")));
    }
    let shift = if centered { (k - 1) / 2 } else { k - 1 };
    let mut out = vec![None; n];
    let mut buf = Vec::with_capacity(k);
    for i in 0..=n - k {
        buf.clear();
        buf.extend(s.values[i..i + k].iter().flatten());
        if buf.len() < k {
            continue;
        }
        let v = match stat {
            RollingStat::Mean => buf.iter().sum::<f64>() / k as f64,
            RollingStat::Min => buf.iter().copied().fold(f64::INFINITY, f64::min),
            RollingStat::Max => buf.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            RollingStat::Median => univariate::median(&buf)?,
        };
        out[i + shift] = Some(v);
    }
    Ok(s.same_index(out))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FillMethod {
    /// Carry the last observation forward.
    Ffill,
    /// Carry the next observation backward.
    Bfill,
    /// Interpolate by position between the two bracketing observations.
    Linear,
}

pub fn fill(s: &Series, method: FillMethod) -> Result<Series> {
    if s.values.iter().all(Option::is_none) {
        return Err(Error::Missing("every entry of the series".into()));
    }
    let mut v = s.values.clone();
    match method {
        FillMethod::Ffill => {
            for i in 1..v.len() {
                if v[i].is_none() {
                    v[i] = v[i - 1];
                }
            }
        }
        FillMethod::Bfill => {
            for i in (0..v.len().saturating_sub(1)).rev() {
                if v[i].is_none() {
                    v[i] = v[i + 1];
                }
            }
        }
        FillMethod::Linear => {
            let known: Vec<usize> = (0..v.len()).filter(|&i| v[i].is_some()).collect();
            for w in known.windows(2) {
                let (a, b) = (w[0], w[1]);
                let (ya, yb) = (v[a].unwrap(), v[b].unwrap());
                for (i, slot) in v.iter_mut().enumerate().take(b).skip(a + 1) {
                    let t = (i - a) as f64 / (b - a) as f64;
                    *slot = Some(ya + t * (yb - ya));
                }
            }
        }
    }
    Ok(s.same_index(v))
}

/// Centred `k`-moving mean and the residual `s - trend`.
pub fn detrend(s: &Series, k: usize) -> Result<(Series, Series)> {
    let trend = rolling(s, k, RollingStat::Mean, true)?;
    let resid = s
        .values
        .iter()
        .zip(&trend.values)
        .map(|(x, t)| match (x, t) {
            (Some(x), Some(t)) => Some(x - t),
            _ => None,
        })
        .collect();
    Ok((trend, s.same_index(resid)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dates() {
        assert_eq!(parse_date("1970-01-01").unwrap(), 0);
        assert_eq!(parse_date("1970-01-02").unwrap(), 1);
        assert_eq!(parse_date("1889-08-01").unwrap(), -29372);
        assert!(parse_date("2021-02-29").is_err());
        assert!(parse_date("2020-02-29").is_ok());
        assert!(parse_date("1500-01-01").is_err());
        assert!(parse_date("2020-1-01").is_err());
        assert_eq!(format_date(-29372).unwrap(), "1889-08-01");
        assert_eq!(add_days("2021-12-31", 1).unwrap(), "2022-01-01");
        assert_eq!(diff_days("2021-12-25", "2021-12-31").unwrap(), 6);
    }

    fn round2(s: &Series) -> Vec<Option<f64>> {
        s.values
            .iter()
            .map(|v| v.map(|x| (x * 100.0).round() / 100.0))
            .collect()
    }

    #[test]
    fn spokane_rolling() {
        let s = Series::from_values(&[-1.4, -5.0, -9.4, -12.8, -12.2, -11.4, -11.4]);
        let r3 = rolling(&s, 3, RollingStat::Mean, true).unwrap();
        assert_eq!(
            round2(&r3),
            vec![
                None,
                Some(-5.27),
                Some(-9.07),
                Some(-11.47),
                Some(-12.13),
                Some(-11.67),
                None
            ]
        );
        let r5 = rolling(&s, 5, RollingStat::Mean, true).unwrap();
        assert_eq!(
            round2(&r5),
            vec![None, None, Some(-8.16), Some(-10.16), Some(-11.44), None, None]
        );
        assert_eq!(rolling(&s, 1, RollingStat::Median, true).unwrap(), s);
        assert!(rolling(&s, 8, RollingStat::Mean, true).is_err());
        let trailing = rolling(&s, 2, RollingStat::Max, false).unwrap();
        assert_eq!(trailing.values[0], None);
        assert_eq!(trailing.values[1], Some(-1.4));
    }

    #[test]
    fn solar_fill() {
        let s = Series::new(vec![
            Some(313.0),
            None,
            None,
            Some(299.0),
            Some(194.0),
            None,
            Some(256.0),
        ]);
        let f = fill(&s, FillMethod::Ffill).unwrap().values;
        assert_eq!(&f[1..3], &[Some(313.0), Some(313.0)]);
        let b = fill(&s, FillMethod::Bfill).unwrap().values;
        assert_eq!(&b[1..3], &[Some(299.0), Some(299.0)]);
        let l = fill(&s, FillMethod::Linear).unwrap().values;
        assert!((l[1].unwrap() - 308.333333).abs() < 1e-6);
        assert!((l[2].unwrap() - 303.666667).abs() < 1e-6);
        assert_eq!(l[5], Some(225.0));
    }

    #[test]
    fn fill_edges_stay_missing() {
        let s = Series::new(vec![None, Some(1.0), None, Some(3.0), None]);
        assert_eq!(fill(&s, FillMethod::Ffill).unwrap().values[0], None);
        assert_eq!(fill(&s, FillMethod::Bfill).unwrap().values[4], None);
        let l = fill(&s, FillMethod::Linear).unwrap().values;
        assert_eq!(l, vec![None, Some(1.0), Some(2.0), Some(3.0), None]);
        assert!(fill(&Series::new(vec![None, None]), FillMethod::Linear).is_err());
    }

    #[test]
    fn detrend_ramp() {
        let s = Series::from_values(&(0..20).map(|i| 3.0 * i as f64 - 1.0).collect::<Vec<_>>());
        let (trend, resid) = detrend(&s, 5).unwrap();
        for (i, r) in resid.values.iter().enumerate() {
            match r {
                Some(r) => {
                    assert!(r.abs() < 1e-10);
                    assert!((trend.values[i].unwrap() + r - s.values[i].unwrap()).abs() < 1e-12);
                }
                None => assert!(!(2..18).contains(&i)),
            }
        }
    }

    #[test]
    fn csv_export() {
        let s = Series::with_index(vec![Some(1.5), None], vec![0, 1]).unwrap();
        assert_eq!(s.to_csv().unwrap(), "date,value\n1970-01-01,1.5\n1970-01-02,\n");
        assert!(Series::with_index(vec![None, None], vec![1, 1]).is_err());
    }
}
