//! Aggregates, quantiles, scaling, ranks and binning for one-dimensional data.
//!
//! Every function here takes a slice of finite `f64` values. Missing
//! entries have to be removed (or imputed) beforehand, see
//! [`crate::tabular`].
//!
//! Histogram bins are half-open, `[a, b)`, except for the last bin which is
//! closed on both sides. A value lying exactly on an interior edge is
//! therefore counted in the bin to the *right* of that edge, and the maximum
//! of the data always lands in the final bin.

use std::cmp::Ordering;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A summary statistic understood by [`aggregate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stat {
    Mean,
    Median,
    Var {
        ddof: usize,
    },
    Std {
        ddof: usize,
    },
    Min,
    Max,
    Midrange,
    Iqr,
    Skewness,
    Gini,
    Entropy,
    /// Mean after dropping `p` observations from each side.
    TrimmedMean(usize),
    /// Mean after replacing `p` observations on each side with the
    /// `(p+1)`-th smallest/largest one.
    WinsorizedMean(usize),
    CoeffVariation,
    /// Mean absolute deviation from the mean.
    MadMean,
    /// Mean absolute deviation from the median.
    MadMedian,
    /// Median absolute deviation from the median.
    MedianAd,
}

impl Stat {
    pub fn name(&self) -> &'static str {
        match self {
            Stat::Mean => "mean",
            Stat::Median => "median",
            Stat::Var { .. } => "var",
            Stat::Std { .. } => "std",
            Stat::Min => "min",
            Stat::Max => "max",
            Stat::Midrange => "midrange",
            Stat::Iqr => "iqr",
            Stat::Skewness => "skewness",
            Stat::Gini => "gini",
            Stat::Entropy => "entropy",
            Stat::TrimmedMean(_) => "trimmed_mean",
            Stat::WinsorizedMean(_) => "winsorized_mean",
            Stat::CoeffVariation => "coeff_variation",
            Stat::MadMean => "mad_mean",
            Stat::MadMedian => "mad_median",
            Stat::MedianAd => "median_ad",
        }
    }
}

fn nonempty(v: &[f64], stat: &'static str) -> Result<()> {
    if v.is_empty() {
        Err(Error::domain(stat, "empty vector"))
    } else {
        Ok(())
    }
}

/// Sorted copy of `v`.
pub fn sorted(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    s
}

pub fn sum(v: &[f64]) -> f64 {
    v.iter().sum()
}

pub fn mean(v: &[f64]) -> Result<f64> {
    nonempty(v, "mean")?;
    Ok(sum(v) / v.len() as f64)
}

/// Variance with denominator `n - ddof`.
pub fn var(v: &[f64], ddof: usize) -> Result<f64> {
    if v.len() <= ddof {
        return Err(Error::domain(
            "var",
            format!("need more than {ddof} observations, got {}", v.len()),
        ));
    }
    let m = sum(v) / v.len() as f64;
    let ss: f64 = v.iter().map(|x| (x - m) * (x - m)).sum();
    Ok(ss / (v.len() - ddof) as f64)
}

pub fn std(v: &[f64], ddof: usize) -> Result<f64> {
    var(v, ddof).map(f64::sqrt)
}

pub fn median(v: &[f64]) -> Result<f64> {
    quantile(v, 0.5)
}

/// Linear interpolation between `a` and `b`, written so that `t = 1`
/// returns `b` exactly and `t = 0` returns `a` exactly.
fn lerp(a: f64, b: f64, t: f64) -> f64 {
    let d = b - a;
    if t >= 0.5 {
        b - d * (1.0 - t)
    } else {
        a + d * t
    }
}

/// Type-7 sample quantile of data that is already sorted nondecreasingly.
pub fn quantile_sorted(s: &[f64], p: f64) -> Result<f64> {
    nonempty(s, "quantile")?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain("quantile", format!("p = {p} outside [0, 1]")));
    }
    let h = (s.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(s.len() - 1);
    Ok(lerp(s[lo], s[hi], h - lo as f64))
}

/// Type-7 sample quantile: with `k = (n-1)p`, interpolates linearly between
/// the order statistics at positions `floor(k)` and `floor(k)+1` (0-based).
pub fn quantile(v: &[f64], p: f64) -> Result<f64> {
    quantile_sorted(&sorted(v), p)
}

/// Several quantiles sharing one sort.
pub fn quantiles(v: &[f64], ps: &[f64]) -> Result<Vec<f64>> {
    let s = sorted(v);
    ps.iter().map(|&p| quantile_sorted(&s, p)).collect()
}

pub fn iqr(v: &[f64]) -> Result<f64> {
    let q = quantiles(v, &[0.25, 0.75])?;
    Ok(q[1] - q[0])
}

fn min_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Computes the requested summary statistic.
pub fn aggregate(v: &[f64], stat: Stat) -> Result<f64> {
    let name = stat.name();
    nonempty(v, name)?;
    let n = v.len() as f64;
    match stat {
        Stat::Mean => mean(v),
        Stat::Median => median(v),
        Stat::Var { ddof } => var(v, ddof),
        Stat::Std { ddof } => std(v, ddof),
        Stat::Min => Ok(min_of(v)),
        Stat::Max => Ok(max_of(v)),
        Stat::Midrange => Ok((min_of(v) + max_of(v)) / 2.0),
        Stat::Iqr => iqr(v),
        Stat::Skewness => {
            let m = sum(v) / n;
            let m2 = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n;
            let m3 = v.iter().map(|x| (x - m).powi(3)).sum::<f64>() / n;
            if m2 <= 0.0 {
                return Err(Error::domain(name, "zero standard deviation"));
            }
            Ok(m3 / m2.powf(1.5))
        }
        Stat::Gini => {
            if v.iter().any(|&x| x < 0.0) {
                return Err(Error::domain(name, "negative value"));
            }
            let total = sum(v);
            if total <= 0.0 {
                return Err(Error::domain(name, "mean must be positive"));
            }
            if v.len() < 2 {
                return Err(Error::domain(name, "need at least 2 observations"));
            }
            // sum over i of (n - 2i + 1) x_(n-i+1), i.e. descending order
            let s = sorted(v);
            let num: f64 = s
                .iter()
                .rev()
                .enumerate()
                .map(|(i, &x)| (n - 2.0 * (i as f64 + 1.0) + 1.0) * x)
                .sum();
            Ok(num / ((n - 1.0) * total))
        }
        Stat::Entropy => {
            if v.iter().any(|&p| !(p > 0.0 && p <= 1.0)) {
                return Err(Error::domain(name, "values must lie in (0, 1]"));
            }
            Ok(-v.iter().map(|&p| p * p.ln()).sum::<f64>())
        }
        Stat::TrimmedMean(p) => {
            if 2 * p >= v.len() {
                return Err(Error::domain(
                    name,
                    format!("cannot trim {p} from each side of {}", v.len()),
                ));
            }
            let s = sorted(v);
            mean(&s[p..s.len() - p])
        }
        Stat::WinsorizedMean(p) => {
            if 2 * p >= v.len() {
                return Err(Error::domain(
                    name,
                    format!("cannot replace {p} on each side of {}", v.len()),
                ));
            }
            let mut s = sorted(v);
            let k = s.len();
            let (lo, hi) = (s[p], s[k - 1 - p]);
            s[..p].iter_mut().for_each(|x| *x = lo);
            s[k - p..].iter_mut().for_each(|x| *x = hi);
            mean(&s)
        }
        Stat::CoeffVariation => {
            let m = mean(v)?;
            if m == 0.0 {
                return Err(Error::domain(name, "zero mean"));
            }
            Ok(std(v, 0)? / m)
        }
        Stat::MadMean => {
            let m = mean(v)?;
            Ok(v.iter().map(|x| (x - m).abs()).sum::<f64>() / n)
        }
        Stat::MadMedian => {
            let m = median(v)?;
            Ok(v.iter().map(|x| (x - m).abs()).sum::<f64>() / n)
        }
        Stat::MedianAd => {
            let m = median(v)?;
            let dev: Vec<f64> = v.iter().map(|x| (x - m).abs()).collect();
            median(&dev)
        }
    }
}

/// Feature scaling methods for [`scale`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    /// z-scores, `(x - mean) / std(ddof=0)`.
    Standardize,
    /// `(x - median) / IQR`.
    RobustStandardize,
    MinMax,
    Clip {
        lo: f64,
        hi: f64,
    },
    NormalizeL2,
    NormalizeL1,
}

pub fn scale(v: &[f64], method: Scale) -> Result<Vec<f64>> {
    let degenerate = |what: &str| Error::DegenerateScale(what.to_string());
    match method {
        Scale::Standardize => {
            let m = mean(v)?;
            let s = std(v, 0)?;
            if s <= 0.0 {
                return Err(degenerate("standard deviation is zero"));
            }
            Ok(v.iter().map(|x| (x - m) / s).collect())
        }
        Scale::RobustStandardize => {
            let q = quantiles(v, &[0.25, 0.5, 0.75])?;
            let spread = q[2] - q[0];
            if spread <= 0.0 {
                return Err(degenerate("interquartile range is zero"));
            }
            Ok(v.iter().map(|x| (x - q[1]) / spread).collect())
        }
        Scale::MinMax => {
            nonempty(v, "minmax")?;
            let (lo, hi) = (min_of(v), max_of(v));
            if hi <= lo {
                return Err(degenerate("range is zero"));
            }
            Ok(v.iter().map(|x| (x - lo) / (hi - lo)).collect())
        }
        Scale::Clip { lo, hi } => {
            if lo > hi {
                return Err(Error::Invalid(format!("clip bounds {lo} > {hi}")));
            }
            Ok(v.iter().map(|x| x.clamp(lo, hi)).collect())
        }
        Scale::NormalizeL2 => {
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm <= 0.0 {
                return Err(degenerate("L2 norm is zero"));
            }
            Ok(v.iter().map(|x| x / norm).collect())
        }
        Scale::NormalizeL1 => {
            let norm = v.iter().map(|x| x.abs()).sum::<f64>();
            if norm <= 0.0 {
                return Err(degenerate("L1 norm is zero"));
            }
            Ok(v.iter().map(|x| x / norm).collect())
        }
    }
}

pub fn sort(v: &[f64]) -> Vec<f64> {
    sorted(v)
}

/// Indexes that sort `v`; ties keep their input order.
pub fn argsort_stable(v: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    idx
}

/// 1-based ranks, ties broken by position.
pub fn rank_ordinal(v: &[f64]) -> Vec<f64> {
    let mut r = vec![0.0; v.len()];
    for (rank, i) in argsort_stable(v).into_iter().enumerate() {
        r[i] = (rank + 1) as f64;
    }
    r
}

/// 1-based ranks; tied elements share the mean of their ordinal ranks.
pub fn rank_average(v: &[f64]) -> Vec<f64> {
    let idx = argsort_stable(v);
    let mut r = vec![0.0; v.len()];
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() && v[idx[end]].total_cmp(&v[idx[start]]) == Ordering::Equal {
            end += 1;
        }
        // ordinal ranks start+1 ..= end
        let avg = (start + 1 + end) as f64 / 2.0;
        for &i in &idx[start..end] {
            r[i] = avg;
        }
        start = end;
    }
    r
}

pub fn cumsum(v: &[f64]) -> Vec<f64> {
    v.iter()
        .scan(0.0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

/// Iterated differences, `v[i+1] - v[i]`; empty for `n <= 1`.
pub fn diff(v: &[f64]) -> Vec<f64> {
    v.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Tolerant comparison, `|a - b| <= atol + rtol * |b|` (not symmetric).
pub fn approx_equal(a: f64, b: f64, atol: f64, rtol: f64) -> bool {
    (a - b).abs() <= atol + rtol * b.abs()
}

/// [`approx_equal`] with `atol = 1e-8`, `rtol = 1e-5`.
pub fn isclose(a: f64, b: f64) -> bool {
    approx_equal(a, b, 1e-8, 1e-5)
}

/// Empirical cumulative distribution function.
#[derive(Debug, Clone, PartialEq)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

impl Ecdf {
    pub fn new(v: &[f64]) -> Result<Self> {
        nonempty(v, "ecdf")?;
        Ok(Ecdf { sorted: sorted(v) })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Fraction of observations `<= t`.
    pub fn eval(&self, t: f64) -> f64 {
        self.sorted.partition_point(|&x| x <= t) as f64 / self.sorted.len() as f64
    }

    /// `(x_(i), i/n)` for `i = 1..=n`.
    pub fn step_points(&self) -> Vec<(f64, f64)> {
        let n = self.sorted.len() as f64;
        self.sorted
            .iter()
            .enumerate()
            .map(|(i, &x)| (x, (i + 1) as f64 / n))
            .collect()
    }

    pub fn sorted_values(&self) -> &[f64] {
        &self.sorted
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("value,height\n");
        for (x, h) in self.step_points() {
            let _ = writeln!(out, "{x},{h}");
        }
        out
    }
}

/// Bin specification for [`histogram`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bins {
    Edges(Vec<f64>),
    EqualWidth(usize),
    /// `k` bins of equal length on the log scale, spanning `[min, max]`.
    Geometric(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramResult {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl HistogramResult {
    /// One row per bin: left edge and count, then a closing row holding the
    /// last edge and an empty count.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("edge,count\n");
        for (e, c) in self.edges.iter().zip(&self.counts) {
            let _ = writeln!(out, "{e},{c}");
        }
        if let Some(last) = self.edges.last() {
            let _ = writeln!(out, "{last},");
        }
        out
    }
}

fn linspace(start: f64, stop: f64, num: usize) -> Vec<f64> {
    let div = (num - 1) as f64;
    let step = (stop - start) / div;
    let mut out: Vec<f64> = (0..num).map(|i| start + i as f64 * step).collect();
    out[num - 1] = stop;
    out
}

pub fn histogram(v: &[f64], bins: &Bins) -> Result<HistogramResult> {
    let edges = match bins {
        Bins::Edges(e) => {
            if e.len() < 2 {
                return Err(Error::Invalid("need at least two bin edges".into()));
            }
            if e.windows(2).any(|w| !(w[0] < w[1])) {
                return Err(Error::Invalid("bin edges must be strictly increasing".into()));
            }
            e.clone()
        }
        Bins::EqualWidth(k) | Bins::Geometric(k) => {
            if *k == 0 {
                return Err(Error::Invalid("number of bins must be positive".into()));
            }
            nonempty(v, "histogram")?;
            let (mut lo, mut hi) = (min_of(v), max_of(v));
            if matches!(bins, Bins::Geometric(_)) {
                if lo <= 0.0 {
                    return Err(Error::domain("histogram", "geometric bins need positive data"));
                }
                if lo == hi {
                    lo *= 0.5;
                    hi *= 1.5;
                }
                let mut e: Vec<f64> = linspace(lo.log10(), hi.log10(), k + 1)
                    .into_iter()
                    .map(|t| 10f64.powf(t))
                    .collect();
                e[0] = lo;
                e[*k] = hi;
                e
            } else {
                if lo == hi {
                    lo -= 0.5;
                    hi += 0.5;
                }
                linspace(lo, hi, k + 1)
            }
        }
    };
    let k = edges.len() - 1;
    let (first, last) = (edges[0], edges[k]);
    let mut counts = vec![0u64; k];
    for &x in v {
        if x < first || x > last {
            continue;
        }
        let bin = (edges.partition_point(|&e| e <= x) - 1).min(k - 1);
        counts[bin] += 1;
    }
    Ok(HistogramResult { edges, counts })
}
