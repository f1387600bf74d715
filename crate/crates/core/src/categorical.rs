//! Factors (integer codes plus a level list), one-hot encoding, binning and
//! frequency tables.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rng::Rng;

/// Categorical vector in encoded form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    codes: Vec<usize>,
    levels: Vec<String>,
}

impl Factor {
    /// Builds a factor from existing codes and levels.
    pub fn new(codes: Vec<usize>, levels: Vec<String>) -> Result<Self> {
        let mut seen = HashMap::with_capacity(levels.len());
        for (i, l) in levels.iter().enumerate() {
            if seen.insert(l.as_str(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate level `{l}`")));
            }
        }
        if let Some(&c) = codes.iter().find(|&&c| c >= levels.len()) {
            return Err(Error::Invalid(format!(
                "code {c} out of range for {} levels",
                levels.len()
            )));
        }
        Ok(Factor { codes, levels })
    }

    /// Factor with a caller-chosen level order (e.g. for ordinal data).
    /// Labels not among `levels` are an error.
    pub fn with_levels<S: AsRef<str>>(labels: &[S], levels: Vec<String>) -> Result<Self> {
        let index: HashMap<&str, usize> = levels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let codes = labels
            .iter()
            .map(|l| {
                index
                    .get(l.as_ref())
                    .copied()
                    .ok_or_else(|| Error::Invalid(format!("unknown level `{}`", l.as_ref())))
            })
            .collect::<Result<Vec<_>>>()?;
        Factor::new(codes, levels)
    }

    pub fn codes(&self) -> &[usize] {
        &self.codes
    }

    pub fn levels(&self) -> &[String] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn n_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn decode(&self) -> Vec<&str> {
        self.codes.iter().map(|&c| self.levels[c].as_str()).collect()
    }
}

/// Encodes labels; levels are listed in order of first appearance.
pub fn factorize<S: AsRef<str>>(labels: &[S]) -> Factor {
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut levels = Vec::new();
    let codes = labels
        .iter()
        .map(|l| {
            let l = l.as_ref();
            *index.entry(l).or_insert_with(|| {
                levels.push(l.to_string());
                levels.len() - 1
            })
        })
        .collect();
    Factor { codes, levels }
}

/// Reorders levels: new level `i` is old level `permutation[i]`. The decoded
/// labels are unchanged.
pub fn recode(f: &Factor, permutation: &[usize]) -> Result<Factor> {
    let l = f.n_levels();
    if permutation.len() != l {
        return Err(Error::Invalid(format!(
            "permutation of length {} for {l} levels",
            permutation.len()
        )));
    }
    let mut inverse = vec![usize::MAX; l];
    for (new, &old) in permutation.iter().enumerate() {
        if old >= l || inverse[old] != usize::MAX {
            return Err(Error::Invalid("not a permutation".into()));
        }
        inverse[old] = new;
    }
    let levels = permutation.iter().map(|&i| f.levels[i].clone()).collect();
    let codes = f.codes.iter().map(|&c| inverse[c]).collect();
    Ok(Factor { codes, levels })
}

/// n-by-l 0/1 matrix with a single 1 per row.
pub fn one_hot(f: &Factor) -> Matrix {
    let l = f.n_levels();
    let mut m = Matrix::zeros(f.len(), l);
    for (i, &c) in f.codes.iter().enumerate() {
        m[(i, c)] = 1.0;
    }
    m
}

/// Row-wise argmax of a one-hot (or class-probability) matrix. Ties go to
/// the lowest column; all-zero rows are an error.
pub fn decode_one_hot(m: &Matrix) -> Result<Vec<usize>> {
    (0..m.n_rows())
        .map(|i| {
            let row = m.row(i);
            if row.iter().all(|&x| x == 0.0) {
                return Err(Error::Invalid(format!("row {i} is all zeros")));
            }
            let mut best = 0;
            for (j, &x) in row.iter().enumerate() {
                if x > row[best] {
                    best = j;
                }
            }
            Ok(best)
        })
        .collect()
}

/// Code of each value: the number of bounds strictly below it. Intervals are
/// closed on the right, `(a, b]`.
pub fn bin_codes(v: &[f64], bounds: &[f64]) -> Result<Vec<usize>> {
    if bounds.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Invalid("bounds must be strictly increasing".into()));
    }
    Ok(v.iter().map(|&x| bounds.partition_point(|&b| b < x)).collect())
}

/// Level list and per-level counts (including zero counts).
pub fn value_counts(f: &Factor) -> (Vec<String>, Vec<u64>) {
    let mut counts = vec![0u64; f.n_levels()];
    for &c in &f.codes {
        counts[c] += 1;
    }
    (f.levels.clone(), counts)
}

/// Two-way table of counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContingencyTable {
    pub row_levels: Vec<String>,
    pub col_levels: Vec<String>,
    /// `counts[i][j]`
    pub counts: Vec<Vec<u64>>,
}

impl ContingencyTable {
    pub fn new(row_levels: Vec<String>, col_levels: Vec<String>, counts: Vec<Vec<u64>>) -> Result<Self> {
        if counts.len() != row_levels.len() || counts.iter().any(|r| r.len() != col_levels.len()) {
            return Err(Error::Shape(format!(
                "counts do not match {}x{} levels",
                row_levels.len(),
                col_levels.len()
            )));
        }
        Ok(ContingencyTable {
            row_levels,
            col_levels,
            counts,
        })
    }

    /// Unlabelled table; levels become "0", "1", ...
    pub fn from_counts(counts: Vec<Vec<u64>>) -> Result<Self> {
        let n = counts.len();
        let m = counts.first().map_or(0, Vec::len);
        ContingencyTable::new(
            (0..n).map(|i| i.to_string()).collect(),
            (0..m).map(|j| j.to_string()).collect(),
            counts,
        )
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.row_levels.len(), self.col_levels.len())
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<u64> {
        let m = self.col_levels.len();
        (0..m).map(|j| self.counts.iter().map(|r| r[j]).sum()).collect()
    }

    pub fn total(&self) -> u64 {
        self.row_sums().iter().sum()
    }

    pub fn transpose(&self) -> ContingencyTable {
        let (n, m) = self.shape();
        let counts = (0..m).map(|j| (0..n).map(|i| self.counts[i][j]).collect()).collect();
        ContingencyTable {
            row_levels: self.col_levels.clone(),
            col_levels: self.row_levels.clone(),
            counts,
        }
    }

    /// CSV with the column levels as header and row levels in the first
    /// column.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec![String::new()];
        header.extend(self.col_levels.iter().cloned());
        let _ = w.write_record(&header);
        for (lvl, row) in self.row_levels.iter().zip(&self.counts) {
            let mut rec = vec![lvl.clone()];
            rec.extend(row.iter().map(u64::to_string));
            let _ = w.write_record(&rec);
        }
        String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default()
    }
}

pub fn crosstab(f1: &Factor, f2: &Factor) -> Result<ContingencyTable> {
    if f1.len() != f2.len() {
        return Err(Error::Shape(format!(
            "factor lengths differ: {} vs {}",
            f1.len(),
            f2.len()
        )));
    }
    let mut counts = vec![vec![0u64; f2.n_levels()]; f1.n_levels()];
    for (&a, &b) in f1.codes.iter().zip(&f2.codes) {
        counts[a][b] += 1;
    }
    ContingencyTable::new(f1.levels.clone(), f2.levels.clone(), counts)
}

/// All levels attaining the maximal count, in level order.
pub fn mode_set(f: &Factor) -> Result<Vec<String>> {
    if f.is_empty() {
        return Err(Error::Empty);
    }
    let (levels, counts) = value_counts(f);
    let top = counts.iter().copied().max().unwrap_or(0);
    Ok(levels
        .into_iter()
        .zip(counts)
        .filter(|&(_, c)| c == top)
        .map(|(l, _)| l)
        .collect())
}

/// Single mode: the tied level with the lowest code.
pub fn mode(f: &Factor) -> Result<String> {
    mode_set(f).map(|s| s[0].clone())
}

/// Single mode with ties resolved uniformly at random.
pub fn mode_random(f: &Factor, rng: &mut Rng) -> Result<String> {
    let s = mode_set(f)?;
    Ok(s[rng.below(s.len())].clone())
}

/// Proportion of `true` entries.
pub fn binary_rate(mask: &[bool]) -> Result<f64> {
    if mask.is_empty() {
        return Err(Error::Empty);
    }
    Ok(mask.iter().filter(|&&b| b).count() as f64 / mask.len() as f64)
}

/// Median of an ordinal factor (levels in their natural order). When the
/// middle falls between two different levels both are returned.
pub fn ordinal_median(f: &Factor) -> Result<Vec<String>> {
    if f.is_empty() {
        return Err(Error::Empty);
    }
    let mut c = f.codes.clone();
    c.sort_unstable();
    let n = c.len();
    let (a, b) = if n % 2 == 1 {
        (c[n / 2], c[n / 2])
    } else {
        (c[n / 2 - 1], c[n / 2])
    };
    let mut out = vec![f.levels[a].clone()];
    if b != a {
        out.push(f.levels[b].clone());
    }
    Ok(out)
}

/// `level,count` CSV for a frequency table.
pub fn value_counts_csv(f: &Factor) -> String {
    let (levels, counts) = value_counts(f);
    let mut out = String::from("level,count\n");
    for (l, c) in levels.iter().zip(counts) {
        let _ = writeln!(out, "{l},{c}");
    }
    out
}
