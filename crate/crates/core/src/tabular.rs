//! Tables of named columns, CSV input/output, missing values, group
//! splitting and imputation.

use std::collections::{HashMap, HashSet};
use std::io::Read;

use crate::categorical::Factor;
use crate::error::{Error, Result};
use crate::rng::Rng;
use crate::univariate;

/// One column of a [`Table`]; `None` marks a missing entry.
#[derive(Debug, Clone, PartialEq)]
pub enum Column {
    Numeric(Vec<Option<f64>>),
    Text(Vec<Option<String>>),
}

impl Column {
    pub fn len(&self) -> usize {
        match self {
            Column::Numeric(v) => v.len(),
            Column::Text(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, Column::Numeric(_))
    }

    pub fn is_missing(&self, i: usize) -> bool {
        match self {
            Column::Numeric(v) => v[i].is_none(),
            Column::Text(v) => v[i].is_none(),
        }
    }

    /// Cell rendered as text; numbers use the shortest round-trip form.
    pub fn cell(&self, i: usize) -> Option<String> {
        match self {
            Column::Numeric(v) => v[i].map(format_number),
            Column::Text(v) => v[i].clone(),
        }
    }

    fn take(&self, idx: &[usize]) -> Column {
        match self {
            Column::Numeric(v) => Column::Numeric(idx.iter().map(|&i| v[i]).collect()),
            Column::Text(v) => Column::Text(idx.iter().map(|&i| v[i].clone()).collect()),
        }
    }
}

/// Shortest decimal string that parses back to the same `f64`.
pub fn format_number(x: f64) -> String {
    if x.is_finite() && x != 0.0 && (x.abs() >= 1e16 || x.abs() < 1e-5) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// Named, equal-length columns.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    names: Vec<String>,
    columns: Vec<Column>,
    n_rows: usize,
}

impl Table {
    pub fn new(columns: Vec<(String, Column)>) -> Result<Self> {
        let n_rows = columns.first().map_or(0, |(_, c)| c.len());
        let mut seen = HashSet::new();
        for (name, c) in &columns {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateColumn(name.clone()));
            }
            if c.len() != n_rows {
                return Err(Error::Shape(format!(
                    "column `{name}` has {} rows, expected {n_rows}",
                    c.len()
                )));
            }
        }
        let (names, columns) = columns.into_iter().unzip();
        Ok(Table { names, columns, n_rows })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn columns(&self) -> impl Iterator<Item = (&str, &Column)> {
        self.names.iter().map(String::as_str).zip(&self.columns)
    }

    fn position(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::NoSuchColumn(name.to_string()))
    }

    pub fn column(&self, name: &str) -> Result<&Column> {
        Ok(&self.columns[self.position(name)?])
    }

    /// Numeric column with missing entries.
    pub fn numeric(&self, name: &str) -> Result<Vec<Option<f64>>> {
        match self.column(name)? {
            Column::Numeric(v) => Ok(v.clone()),
            Column::Text(_) => Err(Error::NotNumeric(name.to_string())),
        }
    }

    /// Numeric column that must have no missing entries.
    pub fn numeric_complete(&self, name: &str) -> Result<Vec<f64>> {
        self.numeric(name)?
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Missing(format!("column `{name}`")))
    }

    /// Labels of any column as text (numbers formatted).
    pub fn labels(&self, name: &str) -> Result<Vec<Option<String>>> {
        let c = self.column(name)?;
        Ok((0..c.len()).map(|i| c.cell(i)).collect())
    }

    pub fn select(&self, names: &[&str]) -> Result<Table> {
        let cols = names
            .iter()
            .map(|&n| Ok((n.to_string(), self.column(n)?.clone())))
            .collect::<Result<Vec<_>>>()?;
        Table::new(cols)
    }

    pub fn take_rows(&self, idx: &[usize]) -> Table {
        Table {
            names: self.names.clone(),
            columns: self.columns.iter().map(|c| c.take(idx)).collect(),
            n_rows: idx.len(),
        }
    }

    /// Keeps the rows for which `keep` returns true.
    pub fn filter_rows(&self, keep: impl Fn(usize) -> bool) -> Table {
        let idx: Vec<usize> = (0..self.n_rows).filter(|&i| keep(i)).collect();
        self.take_rows(&idx)
    }

    /// Matrix of the given numeric columns, rows with missing values
    /// rejected.
    pub fn to_matrix(&self, names: &[&str]) -> Result<crate::Matrix> {
        let cols = names
            .iter()
            .map(|n| self.numeric_complete(n))
            .collect::<Result<Vec<_>>>()?;
        crate::Matrix::from_columns(&cols)
    }

    /// RFC 4180 CSV with a header row; missing cells are empty.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let _ = w.write_record(&self.names);
        for i in 0..self.n_rows {
            let rec: Vec<String> = self.columns.iter().map(|c| c.cell(i).unwrap_or_default()).collect();
            let _ = w.write_record(&rec);
        }
        String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default()
    }
}

/// Options for [`read_csv`].
#[derive(Debug, Clone)]
pub struct CsvOptions {
    /// Lines starting with this prefix are skipped.
    pub comment_prefix: Option<String>,
    /// Cells equal to one of these (after trimming) are missing.
    pub missing_tokens: HashSet<String>,
    /// When false, columns are named `c0`, `c1`, ...
    pub has_header: bool,
    pub delimiter: u8,
}

impl Default for CsvOptions {
    fn default() -> Self {
        CsvOptions {
            comment_prefix: Some("#".to_string()),
            missing_tokens: ["", "NA", "NaN"].iter().map(|s| s.to_string()).collect(),
            has_header: true,
            delimiter: b',',
        }
    }
}

impl CsvOptions {
    pub fn headerless() -> Self {
        CsvOptions {
            has_header: false,
            ..CsvOptions::default()
        }
    }
}

fn parse_number(s: &str) -> Option<f64> {
    let t = s.trim();
    // reject words that Rust's float parser accepts ("inf", "nan", ...)
    // unless they are written the way the numeric literal forms allow
    let first = t.chars().next()?;
    if !(first.is_ascii_digit() || matches!(first, '+' | '-' | '.')) {
        return match t.to_ascii_lowercase().as_str() {
            "inf" | "infinity" => Some(f64::INFINITY),
            _ => None,
        };
    }
    t.parse::<f64>().ok().filter(|x| !x.is_nan())
}

/// Reads a table from CSV text.
///
/// A column is numeric when every non-missing cell parses as a decimal or
/// scientific-notation number; otherwise it is kept as text.
pub fn read_csv<R: Read>(mut source: R, opts: &CsvOptions) -> Result<Table> {
    let mut text = String::new();
    source.read_to_string(&mut text).map_err(|e| Error::Io(e.to_string()))?;

    // strip comment lines, remembering where every kept line came from
    let mut kept = String::with_capacity(text.len());
    let mut line_map = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if let Some(p) = &opts.comment_prefix {
            if !p.is_empty() && line.starts_with(p.as_str()) {
                continue;
            }
        }
        kept.push_str(line);
        kept.push('\n');
        line_map.push(i + 1);
    }
    let source_line = |csv_line: u64| -> usize {
        line_map
            .get((csv_line as usize).saturating_sub(1))
            .copied()
            .unwrap_or(csv_line as usize)
    };

    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .delimiter(opts.delimiter)
        .from_reader(kept.as_bytes());

    let mut header: Option<Vec<String>> = None;
    let mut rows: Vec<Vec<String>> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| source_line(p.line())),
            msg: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| source_line(p.line()));
        if rec.len() == 1 && rec.get(0).is_some_and(|c| c.trim().is_empty()) && header.is_some() {
            // blank line
            if rows.first().is_none_or(|r| r.len() != 1) {
                continue;
            }
        }
        let fields: Vec<String> = rec.iter().map(str::to_string).collect();
        match &header {
            None if opts.has_header => {
                header = Some(fields.iter().map(|f| f.trim().to_string()).collect());
            }
            None => {
                header = Some((0..fields.len()).map(|j| format!("c{j}")).collect());
                rows.push(fields);
            }
            Some(h) => {
                if fields.len() != h.len() {
                    return Err(Error::Parse {
                        line,
                        msg: format!("expected {} fields, found {}", h.len(), fields.len()),
                    });
                }
                rows.push(fields);
            }
        }
    }

    let Some(header) = header else {
        return Ok(Table::default());
    };
    if let Some(h) = header.first() {
        if header.len() == 1 && h.is_empty() && rows.is_empty() {
            return Ok(Table::default());
        }
    }

    let mut columns = Vec::with_capacity(header.len());
    for (j, name) in header.iter().enumerate() {
        let raw: Vec<Option<&str>> = rows
            .iter()
            .map(|r| {
                let cell = r[j].as_str();
                if opts.missing_tokens.contains(cell.trim()) {
                    None
                } else {
                    Some(cell)
                }
            })
            .collect();
        let parsed: Option<Vec<Option<f64>>> = raw
            .iter()
            .map(|c| match c {
                None => Some(None),
                Some(s) => parse_number(s).map(Some),
            })
            .collect();
        let col = match parsed {
            Some(v) => Column::Numeric(v),
            None => Column::Text(raw.iter().map(|c| c.map(str::to_string)).collect()),
        };
        columns.push((name.clone(), col));
    }
    Table::new(columns)
}

/// Reads a CSV file with default options.
pub fn read_csv_path(path: impl AsRef<std::path::Path>, opts: &CsvOptions) -> Result<Table> {
    let f = std::fs::File::open(path.as_ref()).map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    read_csv(std::io::BufReader::new(f), opts)
}

/// Splits `items` at the given cut points (like `numpy.split`).
pub fn split_at<T: Clone>(items: &[T], cuts: &[usize]) -> Result<Vec<Vec<T>>> {
    let mut out = Vec::with_capacity(cuts.len() + 1);
    let mut start = 0;
    for &c in cuts {
        if c < start || c > items.len() {
            return Err(Error::Invalid(format!("bad split index {c}")));
        }
        out.push(items[start..c].to_vec());
        start = c;
    }
    out.push(items[start..].to_vec());
    Ok(out)
}

/// What [`group_split`] does with rows whose key is missing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MissingKey {
    #[default]
    Error,
    /// Collected in a final group labelled [`MISSING_LEVEL`].
    Group,
}

pub const MISSING_LEVEL: &str = "<missing>";

/// Partitions the rows of `t` by the values of column `key`.
///
/// Rows are stably sorted by key (numbers numerically, text
/// lexicographically); groups are returned in sorted level order and each
/// keeps the original relative order of its rows.
pub fn group_split(t: &Table, key: &str, missing: MissingKey) -> Result<Vec<(String, Table)>> {
    let col = t.column(key)?;
    let mut present: Vec<usize> = Vec::new();
    let mut absent: Vec<usize> = Vec::new();
    for i in 0..t.n_rows() {
        if col.is_missing(i) {
            absent.push(i);
        } else {
            present.push(i);
        }
    }
    if !absent.is_empty() && missing == MissingKey::Error {
        return Err(Error::Missing(format!(
            "{} row(s) of grouping column `{key}`",
            absent.len()
        )));
    }
    match col {
        Column::Numeric(v) => present.sort_by(|&a, &b| v[a].unwrap().total_cmp(&v[b].unwrap())),
        Column::Text(v) => present.sort_by(|&a, &b| v[a].cmp(&v[b])),
    }
    let mut groups: Vec<(String, Vec<usize>)> = Vec::new();
    for i in present {
        let label = col.cell(i).unwrap_or_default();
        match groups.last_mut() {
            Some((l, rows)) if *l == label => rows.push(i),
            _ => groups.push((label, vec![i])),
        }
    }
    if !absent.is_empty() {
        groups.push((MISSING_LEVEL.to_string(), absent));
    }
    Ok(groups.into_iter().map(|(l, rows)| (l, t.take_rows(&rows))).collect())
}

/// Imputation strategies for [`impute`].
#[derive(Debug, Clone, PartialEq)]
pub enum Impute<'a> {
    Mean,
    Median,
    /// Most frequent value; ties go to the smallest.
    Mode,
    /// Mean of the non-missing values sharing the entry's group.
    GroupMean(&'a Factor),
}

fn mode_of(v: &[f64]) -> f64 {
    let s = univariate::sorted(v);
    let (mut best, mut best_n) = (s[0], 0usize);
    let mut i = 0;
    while i < s.len() {
        let mut j = i;
        while j < s.len() && s[j] == s[i] {
            j += 1;
        }
        if j - i > best_n {
            best = s[i];
            best_n = j - i;
        }
        i = j;
    }
    best
}

/// Replaces missing entries; present entries are returned unchanged.
pub fn impute(v: &[Option<f64>], strategy: &Impute<'_>) -> Result<Vec<f64>> {
    let observed: Vec<f64> = v.iter().flatten().copied().collect();
    let fill_all = |value: f64| v.iter().map(|x| x.unwrap_or(value)).collect();
    match strategy {
        Impute::Mean | Impute::Median | Impute::Mode if observed.is_empty() => {
            Err(Error::Missing("every entry".into()))
        }
        Impute::Mean => Ok(fill_all(univariate::mean(&observed)?)),
        Impute::Median => Ok(fill_all(univariate::median(&observed)?)),
        Impute::Mode => Ok(fill_all(mode_of(&observed))),
        Impute::GroupMean(groups) => {
            if groups.len() != v.len() {
                return Err(Error::Shape(format!(
                    "{} group codes for {} values",
                    groups.len(),
                    v.len()
                )));
            }
            let l = groups.n_levels();
            let mut sums = vec![0.0; l];
            let mut counts = vec![0usize; l];
            for (x, &g) in v.iter().zip(groups.codes()) {
                if let Some(x) = x {
                    sums[g] += x;
                    counts[g] += 1;
                }
            }
            v.iter()
                .zip(groups.codes())
                .map(|(x, &g)| match x {
                    Some(x) => Ok(*x),
                    None if counts[g] == 0 => {
                        Err(Error::Missing(format!("every entry of group `{}`", groups.levels()[g])))
                    }
                    None => Ok(sums[g] / counts[g] as f64),
                })
                .collect()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DropMode {
    /// Drop rows with at least one missing cell.
    AnyRow,
    /// Drop rows where every cell is missing.
    AllRow,
}

pub fn drop_missing(t: &Table, mode: DropMode) -> Table {
    let cols: Vec<&Column> = t.columns.iter().collect();
    t.filter_rows(|i| {
        let missing = cols.iter().filter(|c| c.is_missing(i)).count();
        match mode {
            DropMode::AnyRow => missing == 0,
            DropMode::AllRow => cols.is_empty() || missing < cols.len(),
        }
    })
}

/// Row indexes for a random train/test split via a seeded permutation.
/// Returns `(train, test)`; each keeps the permuted order.
pub fn train_test_split(n: usize, n_test: usize, rng: &mut Rng) -> Result<(Vec<usize>, Vec<usize>)> {
    if n_test > n {
        return Err(Error::Invalid(format!("test size {n_test} exceeds {n} rows")));
    }
    let p = rng.permutation(n);
    let (test, train) = p.split_at(n_test);
    Ok((train.to_vec(), test.to_vec()))
}

/// Per-level row counts of a grouping, handy for quick checks.
pub fn group_sizes(groups: &[(String, Table)]) -> HashMap<String, usize> {
    groups.iter().map(|(l, t)| (l.clone(), t.n_rows())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::categorical::factorize;

    fn read(s: &str) -> Result<Table> {
        read_csv(s.as_bytes(), &CsvOptions::default())
    }

    #[test]
    fn reads_comments_missing_and_types() {
        let t = read("# a comment\nx,y,z\n1.23e-4,a,NA\n2, b ,3\n# trailing\n").unwrap();
        assert_eq!(t.n_rows(), 2);
        assert_eq!(t.numeric("x").unwrap(), vec![Some(0.000123), Some(2.0)]);
        assert!(!t.column("y").unwrap().is_numeric());
        assert_eq!(t.numeric("z").unwrap(), vec![None, Some(3.0)]);
    }

    #[test]
    fn empty_after_comments() {
        let t = read("# only\n# comments\n").unwrap();
        assert_eq!((t.n_rows(), t.n_cols()), (0, 0));
        let t = read("").unwrap();
        assert_eq!((t.n_rows(), t.n_cols()), (0, 0));
    }

    #[test]
    fn ragged_rows_report_line() {
        let e = read("# c\na,b\n1,2\n3\n").unwrap_err();
        assert_eq!(
            e,
            Error::Parse {
                line: 4,
                msg: "expected 2 fields, found 1".into()
            }
        );
    }

    #[test]
    fn duplicate_header() {
        assert_eq!(read("a,a\n1,2\n").unwrap_err(), Error::DuplicateColumn("a".into()));
    }

    #[test]
    fn headerless_and_quotes() {
        let t = read_csv("1,\"x, y\"\n2,z\n".as_bytes(), &CsvOptions::headerless()).unwrap();
        assert_eq!(t.names(), &["c0", "c1"]);
        assert_eq!(t.labels("c1").unwrap()[0].as_deref(), Some("x, y"));
    }

    #[test]
    fn decimal_commas_are_text() {
        let t = read_csv("v\n\"1,5\"\n".as_bytes(), &CsvOptions::default()).unwrap();
        assert!(!t.column("v").unwrap().is_numeric());
    }

    #[test]
    fn csv_roundtrip_fixed_point() {
        let t = read("a,b\n0.1,x\n,\"q,r\"\n1e-300,NA\n").unwrap();
        let again = read(&t.to_csv()).unwrap();
        assert_eq!(t, again);
    }

    #[test]
    fn split_sizes() {
        let a: Vec<usize> = (0..9).collect();
        let parts = split_at(&a, &[2, 6]).unwrap();
        let sizes: Vec<usize> = parts.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![2, 4, 3]);
    }

    #[test]
    fn group_split_sorted_stable() {
        let t = read("g,v\nb,1\na,2\nb,3\na,4\n").unwrap();
        let g = group_split(&t, "g", MissingKey::Error).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g[0].0, "a");
        assert_eq!(g[0].1.numeric_complete("v").unwrap(), vec![2.0, 4.0]);
        assert_eq!(g[1].1.numeric_complete("v").unwrap(), vec![1.0, 3.0]);
        let one = read("g,v\nz,1\nz,2\n").unwrap();
        let g = group_split(&one, "g", MissingKey::Error).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].1, one);
    }

    #[test]
    fn group_split_missing_key_policy() {
        let t = read("g,v\n2,1\n,2\n1,3\n").unwrap();
        assert!(group_split(&t, "g", MissingKey::Error).is_err());
        let g = group_split(&t, "g", MissingKey::Group).unwrap();
        let labels: Vec<&str> = g.iter().map(|(l, _)| l.as_str()).collect();
        assert_eq!(labels, vec!["1", "2", MISSING_LEVEL]);
        assert_eq!(g.iter().map(|(_, s)| s.n_rows()).sum::<usize>(), 3);
    }

    #[test]
    fn impute_strategies() {
        let v = [Some(1.0), None, Some(3.0)];
        assert_eq!(impute(&v, &Impute::Mean).unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(impute(&v, &Impute::Median).unwrap(), vec![1.0, 2.0, 3.0]);
        let w = [Some(5.0), Some(2.0), Some(5.0), None];
        assert_eq!(impute(&w, &Impute::Mode).unwrap(), vec![5.0, 2.0, 5.0, 5.0]);
        let full = [Some(1.5), Some(2.5)];
        assert_eq!(impute(&full, &Impute::Mean).unwrap(), vec![1.5, 2.5]);
        assert!(impute(&[None, None], &Impute::Mean).is_err());
    }

    #[test]
    fn impute_group_mean() {
        let g = factorize(&["f", "m", "f", "m", "f"]);
        let v = [Some(1.0), Some(10.0), None, None, Some(3.0)];
        let out = impute(&v, &Impute::GroupMean(&g)).unwrap();
        assert_eq!(out, vec![1.0, 10.0, 2.0, 10.0, 3.0]);
        let g2 = factorize(&["f", "m"]);
        let e = impute(&[Some(1.0), None], &Impute::GroupMean(&g2)).unwrap_err();
        assert!(e.to_string().contains("`m`"));
    }

    #[test]
    fn drop_modes() {
        let t = read("a,b\n1,\n,\n3,4\n").unwrap();
        assert_eq!(drop_missing(&t, DropMode::AllRow).n_rows(), 2);
        let any = drop_missing(&t, DropMode::AnyRow);
        assert_eq!(any.numeric_complete("a").unwrap(), vec![3.0]);
        let clean = read("a\n1\n2\n").unwrap();
        assert_eq!(drop_missing(&clean, DropMode::AnyRow), clean);
    }

    #[test]
    fn split_is_partition() {
        let mut rng = Rng::new(10);
        let (train, test) = train_test_split(10, 3, &mut rng).unwrap();
        assert_eq!(test.len(), 3);
        let mut all: Vec<usize> = train.into_iter().chain(test).collect();
        all.sort();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
    }
}
