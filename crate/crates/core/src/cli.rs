//! The `wrangle` command-line front end.
//!
//! Every subcommand reads one CSV table (a path, or `-` for standard input)
//! and writes JSON or CSV to standard output. Exit status is 0 on success,
//! 1 on a usage error and 2 on a data or domain error; errors are written
//! to standard error as a single JSON line `{"error": ..., "detail": ...}`.

use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::categorical::factorize;
use crate::categorical::ContingencyTable;
use crate::distributions::{self, DistSpec, Family};
use crate::error::{Error, Result};
use crate::hypothesis::{self, IndependenceDof, KsMethod};
use crate::linalg::{self, Matrix, Preprocess};
use crate::regression::{self, StandardizePath, Term};
use crate::spatial::{self, TiePolicy};
use crate::tabular::{self, format_number, read_csv, Column, CsvOptions, Impute, Table};
use crate::timeseries::{self, FillMethod, RollingStat, Series};
use crate::univariate::{self, Bins, Scale, Stat};

#[derive(Debug, Parser)]
#[command(name = "wrangle", version, about = "Statistical data wrangling over CSV files")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum OutFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Input CSV file, or `-` for standard input.
    #[arg(default_value = "-")]
    pub input: String,
    #[arg(long, value_enum, default_value_t = OutFormat::Json)]
    pub out: OutFormat,
    /// Treat the first line as data rather than column names.
    #[arg(long)]
    pub no_header: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Location, dispersion and shape statistics of one column.
    Summary {
        #[command(flatten)]
        io: Common,
        #[arg(long)]
        col: Option<String>,
    },
    /// Type-7 sample quantiles.
    Quantile {
        #[command(flatten)]
        io: Common,
        #[arg(long)]
        col: Option<String>,
        /// Comma-separated probabilities.
        #[arg(long, default_value = "0,0.25,0.5,0.75,1")]
        p: String,
    },
    /// Standardize, normalize, min-max scale or clip a column.
    Scale {
        #[command(flatten)]
        io: Common,
        #[arg(long)]
        col: Option<String>,
        /// standardize, robust, minmax, clip, l2 or l1.
        #[arg(long, default_value = "standardize")]
        method: String,
        #[arg(long, allow_hyphen_values = true)]
        lo: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        hi: Option<f64>,
    },
    /// Histogram counts as plot data.
    Hist {
        #[command(flatten)]
        io: Common,
        #[arg(long)]
        col: Option<String>,
        /// A bin count, or a comma-separated list of edges.
        #[arg(long, default_value = "10", allow_hyphen_values = true)]
        bins: String,
        /// equal or geometric (ignored when edges are given).
        #[arg(long, default_value = "equal")]
        method: String,
    },
    /// Empirical CDF step points.
    Ecdf {
        #[command(flatten)]
        io: Common,
        #[arg(long)]
        col: Option<String>,
    },
    /// Fit a parametric family; CSV output gives Q-Q plot data.
    Fit {
        #[command(flatten)]
        io: Common,
        #[arg(long)]
        col: Option<String>,
        /// normal, normal-robust, lognormal, pareto, uniform or exponential.
        #[arg(long, default_value = "normal")]
        method: String,
        /// Known scale parameter for the Pareto family.
        #[arg(long)]
        s: Option<f64>,
    },
    /// Kolmogorov-Smirnov test: one column against a fitted family, or two
    /// columns against each other.
    TestKs {
        #[command(flatten)]
        io: Common,
        #[arg(long)]
        col: Option<String>,
        #[arg(long, value_delimiter = ',')]
        cols: Vec<String>,
        /// Family fitted to the data in the one-sample case.
        #[arg(long, default_value = "normal")]
        dist: String,
        /// asymptotic or exact critical values.
        #[arg(long, default_value = "asymptotic")]
        method: String,
        #[arg(long, default_value_t = 0.001)]
        alpha: f64,
    },
    /// Pearson chi-squared tests on count data.
    TestChisq {
        #[command(flatten)]
        io: Common,
        /// gof, two-sample or independence.
        #[arg(long, default_value = "independence")]
        method: String,
        /// Count column for the goodness-of-fit test.
        #[arg(long)]
        col: Option<String>,
        /// Count columns (two for two-sample, any for independence).
        #[arg(long, value_delimiter = ',')]
        cols: Vec<String>,
        /// Hypothesised proportions for the goodness-of-fit test.
        #[arg(long, value_delimiter = ',')]
        expected: Vec<f64>,
        /// Use (rows-1)(cols-1) degrees of freedom in the independence test.
        #[arg(long)]
        classical_dof: bool,
        #[arg(long, default_value_t = 0.001)]
        alpha: f64,
    },
    /// Correlation matrix and the most correlated pair.
    Corr {
        #[command(flatten)]
        io: Common,
        #[arg(long, value_delimiter = ',')]
        cols: Vec<String>,
        /// pearson or spearman.
        #[arg(long, default_value = "pearson")]
        method: String,
    },
    /// Least squares fit of `--col` on `--cols` (plus an intercept), or on
    /// transformed copies of a single predictor given by `--terms`.
    Regress {
        #[command(flatten)]
        io: Common,
        #[arg(long)]
        col: String,
        #[arg(long, value_delimiter = ',')]
        cols: Vec<String>,
        /// Terms such as `1,x,x^2,log` for a single predictor.
        #[arg(long, value_delimiter = ',')]
        terms: Vec<String>,
        /// auto, on or off.
        #[arg(long, default_value = "auto")]
        method: String,
    },
    /// Principal component analysis.
    Pca {
        #[command(flatten)]
        io: Common,
        #[arg(long, value_delimiter = ',')]
        cols: Vec<String>,
        /// center or standardize.
        #[arg(long, default_value = "center")]
        method: String,
    },
    /// k-nearest-neighbour classification of a test file.
    Knn {
        #[command(flatten)]
        io: Common,
        /// Test CSV with the same feature columns.
        #[arg(long)]
        test: String,
        #[arg(long, value_delimiter = ',')]
        cols: Vec<String>,
        /// Integer label column of the training data.
        #[arg(long)]
        col: String,
        #[arg(long, default_value_t = 5)]
        k: usize,
        /// Standardize features with the training means and deviations.
        #[arg(long)]
        standardize: bool,
        /// Break vote ties at random with this seed instead of taking the
        /// smallest label.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Lloyd k-means with random restarts.
    Kmeans {
        #[command(flatten)]
        io: Common,
        #[arg(long, value_delimiter = ',')]
        cols: Vec<String>,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 10)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Flag outliers.
    Outliers {
        #[command(flatten)]
        io: Common,
        /// iqr, density or isolated.
        #[arg(long, default_value = "iqr")]
        method: String,
        #[arg(long)]
        col: Option<String>,
        #[arg(long, value_delimiter = ',')]
        cols: Vec<String>,
        #[arg(long)]
        r: Option<f64>,
        /// Density threshold for the density method.
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Time series transforms.
    Ts {
        #[command(flatten)]
        io: Common,
        #[arg(long)]
        col: Option<String>,
        /// Optional YYYY-MM-DD column used as the index.
        #[arg(long)]
        date_col: Option<String>,
        /// diff, rolling-mean, rolling-median, rolling-min, rolling-max,
        /// ffill, bfill, linear or detrend.
        #[arg(long, default_value = "diff")]
        method: String,
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Place windows at their end instead of their centre.
        #[arg(long)]
        trailing: bool,
    },
    /// Fill missing values of a column.
    Impute {
        #[command(flatten)]
        io: Common,
        #[arg(long)]
        col: Option<String>,
        /// mean, median, mode or group-mean.
        #[arg(long, default_value = "mean")]
        method: String,
        /// Grouping column for group-mean.
        #[arg(long)]
        by: Option<String>,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Summary { io, .. }
            | Command::Quantile { io, .. }
            | Command::Scale { io, .. }
            | Command::Hist { io, .. }
            | Command::Ecdf { io, .. }
            | Command::Fit { io, .. }
            | Command::TestKs { io, .. }
            | Command::TestChisq { io, .. }
            | Command::Corr { io, .. }
            | Command::Regress { io, .. }
            | Command::Pca { io, .. }
            | Command::Knn { io, .. }
            | Command::Kmeans { io, .. }
            | Command::Outliers { io, .. }
            | Command::Ts { io, .. }
            | Command::Impute { io, .. } => io,
        }
    }
}

/// Short machine-readable error kind.
pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } => "parse error",
        Error::DuplicateColumn(_) => "duplicate column",
        Error::NoSuchColumn(_) => "no such column",
        Error::NotNumeric(_) => "not numeric",
        Error::Domain { .. } => "domain error",
        Error::DegenerateScale(_) => "degenerate scale",
        Error::Shape(_) => "shape mismatch",
        Error::Missing(_) => "missing value",
        Error::Empty => "empty input",
        Error::NoConvergence(_) => "no convergence",
        Error::Invalid(_) => "invalid argument",
        Error::Io(_) => "io error",
    }
}

fn error_line(error: &str, detail: &str) -> String {
    json!({ "error": error, "detail": detail }).to_string()
}

/// Runs one invocation. `argv` includes the program name.
pub fn run<I, T>(argv: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let _ = writeln!(
                stderr,
                "{}",
                error_line("usage", e.to_string().lines().next().unwrap_or(""))
            );
            let _ = write!(stderr, "{}", e.render());
            return 1;
        }
    };
    match execute(&cli.command, stdin) {
        Ok(text) => {
            let _ = stdout.write_all(text.as_bytes());
            if !text.ends_with('\n') {
                let _ = stdout.write_all(b"\n");
            }
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "{}", error_line(error_kind(&e), &e.to_string()));
            2
        }
    }
}

fn read_input(io: &Common, stdin: &mut dyn Read) -> Result<Table> {
    let opts = if io.no_header {
        CsvOptions::headerless()
    } else {
        CsvOptions::default()
    };
    read_source(&io.input, stdin, &opts)
}

fn read_source(path: &str, stdin: &mut dyn Read, opts: &CsvOptions) -> Result<Table> {
    let t = if path == "-" {
        read_csv(stdin, opts)?
    } else {
        tabular::read_csv_path(path, opts)?
    };
    if t.n_cols() == 0 || t.n_rows() == 0 {
        return Err(Error::Empty);
    }
    Ok(t)
}

// the named column, or the only numeric column when none is named
fn pick_column(t: &Table, col: &Option<String>) -> Result<String> {
    if let Some(c) = col {
        t.column(c)?;
        return Ok(c.clone());
    }
    let numeric: Vec<&str> = t.columns().filter(|(_, c)| c.is_numeric()).map(|(n, _)| n).collect();
    match numeric.as_slice() {
        [one] => Ok(one.to_string()),
        [] => Err(Error::Invalid("no numeric column; use --col".into())),
        _ => Err(Error::Invalid(format!(
            "{} numeric columns; choose one with --col",
            numeric.len()
        ))),
    }
}

fn pick_columns(t: &Table, cols: &[String]) -> Result<Vec<String>> {
    if !cols.is_empty() {
        for c in cols {
            t.column(c)?;
        }
        return Ok(cols.to_vec());
    }
    let numeric: Vec<String> = t
        .columns()
        .filter(|(_, c)| c.is_numeric())
        .map(|(n, _)| n.to_string())
        .collect();
    if numeric.is_empty() {
        return Err(Error::Invalid("no numeric columns; use --cols".into()));
    }
    Ok(numeric)
}

fn values(t: &Table, col: &Option<String>) -> Result<(String, Vec<f64>)> {
    let name = pick_column(t, col)?;
    let v = t.numeric_complete(&name)?;
    if v.is_empty() {
        return Err(Error::Empty);
    }
    Ok((name, v))
}

fn matrix(t: &Table, cols: &[String]) -> Result<(Vec<String>, Matrix)> {
    let names = pick_columns(t, cols)?;
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let m = t.to_matrix(&refs)?;
    Ok((names, m))
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn nums(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| num(x)).collect())
}

fn matrix_json(m: &Matrix) -> Value {
    Value::Array(m.rows().map(nums).collect())
}

fn csv_rows<S: AsRef<str>>(header: &[S], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let _ = w.write_record(header.iter().map(AsRef::as_ref));
    for r in rows {
        let _ = w.write_record(&r);
    }
    String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default()
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_default()
}

fn parse_scale(method: &str, lo: Option<f64>, hi: Option<f64>) -> Result<Scale> {
    Ok(match method {
        "standardize" | "z" => Scale::Standardize,
        "robust" => Scale::RobustStandardize,
        "minmax" => Scale::MinMax,
        "clip" => Scale::Clip {
            lo: lo.unwrap_or(f64::NEG_INFINITY),
            hi: hi.unwrap_or(f64::INFINITY),
        },
        "l2" => Scale::NormalizeL2,
        "l1" => Scale::NormalizeL1,
        other => return Err(Error::Invalid(format!("unknown scaling method `{other}`"))),
    })
}

pub fn parse_family(name: &str, s: Option<f64>) -> Result<Family> {
    Ok(match name {
        "normal" => Family::Normal,
        "normal-robust" => Family::NormalRobust,
        "lognormal" | "log-normal" => Family::LogNormal,
        "pareto" => Family::Pareto { s },
        "uniform" => Family::Uniform { a: None, b: None },
        "exponential" => Family::Exponential,
        other => return Err(Error::Invalid(format!("unknown family `{other}`"))),
    })
}

fn parse_floats(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Invalid(format!("`{t}` is not a number")))
        })
        .collect()
}

fn counts(t: &Table, name: &str) -> Result<Vec<u64>> {
    t.numeric_complete(name)?
        .into_iter()
        .map(|x| {
            if x >= 0.0 && x.fract() == 0.0 && x < 9.0e15 {
                Ok(x as u64)
            } else {
                Err(Error::domain("counts", format!("`{name}` holds {x}, not a count")))
            }
        })
        .collect()
}

fn execute(cmd: &Command, stdin: &mut dyn Read) -> Result<String> {
    let io = cmd.common();
    let out = io.out;
    let t = read_input(io, stdin)?;
    match cmd {
        Command::Summary { col, .. } => {
            let (name, v) = values(&t, col)?;
            let q = univariate::quantiles(&v, &[0.0, 0.25, 0.5, 0.75, 1.0])?;
            let mut stats: Vec<(&str, f64)> = vec![
                ("n", v.len() as f64),
                ("mean", univariate::mean(&v)?),
                ("median", univariate::median(&v)?),
                ("std", univariate::std(&v, 0)?),
                ("var", univariate::var(&v, 0)?),
                ("min", q[0]),
                ("q1", q[1]),
                ("q3", q[3]),
                ("max", q[4]),
                ("iqr", q[3] - q[1]),
            ];
            if let Ok(s) = univariate::aggregate(&v, Stat::Skewness) {
                stats.push(("skewness", s));
            }
            Ok(match out {
                OutFormat::Json => {
                    let mut m = serde_json::Map::new();
                    m.insert("column".into(), json!(name));
                    for (k, x) in &stats {
                        m.insert(k.to_string(), num(*x));
                    }
                    Value::Object(m).to_string()
                }
                OutFormat::Csv => csv_rows(
                    &["stat", "value"],
                    stats.iter().map(|(k, x)| vec![k.to_string(), format_number(*x)]),
                ),
            })
        }
        Command::Quantile { col, p, .. } => {
            let (name, v) = values(&t, col)?;
            let ps = parse_floats(p)?;
            let q = univariate::quantiles(&v, &ps)?;
            Ok(match out {
                OutFormat::Json => json!({ "column": name, "p": nums(&ps), "quantiles": nums(&q) }).to_string(),
                OutFormat::Csv => csv_rows(
                    &["p", "quantile"],
                    ps.iter()
                        .zip(&q)
                        .map(|(a, b)| vec![format_number(*a), format_number(*b)]),
                ),
            })
        }
        Command::Scale {
            col, method, lo, hi, ..
        } => {
            let (name, v) = values(&t, col)?;
            let s = univariate::scale(&v, parse_scale(method, *lo, *hi)?)?;
            Ok(match out {
                OutFormat::Json => json!({ "column": name, "method": method, "values": nums(&s) }).to_string(),
                OutFormat::Csv => csv_rows(&[name], s.iter().map(|x| vec![format_number(*x)])),
            })
        }
        Command::Hist { col, bins, method, .. } => {
            let (name, v) = values(&t, col)?;
            let spec = if bins.contains(',') {
                Bins::Edges(parse_floats(bins)?)
            } else {
                let k = bins
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Invalid(format!("--bins `{bins}` is neither a count nor an edge list")))?;
                match method.as_str() {
                    "equal" => Bins::EqualWidth(k),
                    "geometric" => Bins::Geometric(k),
                    other => return Err(Error::Invalid(format!("unknown binning `{other}`"))),
                }
            };
            let h = univariate::histogram(&v, &spec)?;
            Ok(match out {
                OutFormat::Json => json!({ "column": name, "edges": nums(&h.edges), "counts": h.counts }).to_string(),
                OutFormat::Csv => h.to_csv(),
            })
        }
        Command::Ecdf { col, .. } => {
            let (name, v) = values(&t, col)?;
            let e = univariate::Ecdf::new(&v)?;
            Ok(match out {
                OutFormat::Json => {
                    let (x, y): (Vec<f64>, Vec<f64>) = e.step_points().into_iter().unzip();
                    json!({ "column": name, "x": nums(&x), "ecdf": nums(&y) }).to_string()
                }
                OutFormat::Csv => e.to_csv(),
            })
        }
        Command::Fit { col, method, s, .. } => {
            let (name, v) = values(&t, col)?;
            let d = distributions::fit(parse_family(method, *s)?, &v)?;
            Ok(match out {
                OutFormat::Json => json!({ "column": name, "fit": d }).to_string(),
                OutFormat::Csv => distributions::qq_csv(&distributions::qq_pairs(&v, &d)?),
            })
        }
        Command::TestKs {
            col,
            cols,
            dist,
            method,
            alpha,
            ..
        } => {
            let ks_method = match method.as_str() {
                "asymptotic" => KsMethod::Asymptotic,
                "exact" => KsMethod::Exact,
                other => return Err(Error::Invalid(format!("unknown KS method `{other}`"))),
            };
            let (res, fitted) = if cols.is_empty() {
                let (_, v) = values(&t, col)?;
                let d = distributions::fit(parse_family(dist, None)?, &v)?;
                (hypothesis::ks_one_sample(&v, &d, *alpha, ks_method)?, Some(d))
            } else {
                let [a, b] = cols.as_slice() else {
                    return Err(Error::Invalid("two-sample KS needs exactly two --cols".into()));
                };
                let x = t.numeric_complete(a)?;
                let y = t.numeric_complete(b)?;
                (hypothesis::ks_two_sample(&x, &y, *alpha)?, None)
            };
            test_output(&res, fitted.as_ref(), None, out)
        }
        Command::TestChisq {
            method,
            col,
            cols,
            expected,
            classical_dof,
            alpha,
            ..
        } => match method.as_str() {
            "gof" => {
                let name = pick_column(&t, col)?;
                let c = counts(&t, &name)?;
                let p = if expected.is_empty() {
                    vec![1.0 / c.len() as f64; c.len()]
                } else {
                    expected.clone()
                };
                test_output(&hypothesis::chisq_gof(&c, &p, *alpha)?, None, None, out)
            }
            "two-sample" => {
                let [a, b] = cols.as_slice() else {
                    return Err(Error::Invalid(
                        "two-sample chi-squared test needs exactly two --cols".into(),
                    ));
                };
                test_output(
                    &hypothesis::chisq_two_sample(&counts(&t, a)?, &counts(&t, b)?, *alpha)?,
                    None,
                    None,
                    out,
                )
            }
            "independence" => {
                let names = pick_columns(&t, cols)?;
                let by_col: Vec<Vec<u64>> = names.iter().map(|n| counts(&t, n)).collect::<Result<_>>()?;
                let rows: Vec<Vec<u64>> = (0..by_col[0].len())
                    .map(|i| by_col.iter().map(|c| c[i]).collect())
                    .collect();
                let row_levels = match t.columns().find(|(_, c)| !c.is_numeric()) {
                    Some((n, _)) => t.labels(n)?.into_iter().map(Option::unwrap_or_default).collect(),
                    None => (0..rows.len()).map(|i| i.to_string()).collect(),
                };
                let table = ContingencyTable::new(row_levels, names, rows)?;
                let dof = if *classical_dof {
                    IndependenceDof::Classical
                } else {
                    IndependenceDof::Book
                };
                let res = hypothesis::chisq_independence(&table, *alpha, dof)?;
                let v = hypothesis::cramers_v(&table)?;
                test_output(&res, None, Some(v), out)
            }
            other => Err(Error::Invalid(format!("unknown chi-squared test `{other}`"))),
        },
        Command::Corr { cols, method, .. } => {
            let (names, m) = matrix(&t, cols)?;
            let r = match method.as_str() {
                "pearson" => regression::pearson_matrix(&m)?,
                "spearman" => {
                    let ranked: Vec<Vec<f64>> = (0..m.n_cols())
                        .map(|j| univariate::rank_average(&m.column(j)))
                        .collect();
                    regression::pearson_matrix(&Matrix::from_columns(&ranked)?)?
                }
                other => return Err(Error::Invalid(format!("unknown correlation `{other}`"))),
            };
            let pair = if names.len() >= 2 {
                Some(regression::most_correlated_pair(&r)?)
            } else {
                None
            };
            Ok(match out {
                OutFormat::Json => json!({
                    "columns": names,
                    "method": method,
                    "matrix": matrix_json(&r),
                    "most_correlated": pair.map(|(i, j)| vec![names[i].clone(), names[j].clone()]),
                })
                .to_string(),
                OutFormat::Csv => {
                    let mut header = vec!["column".to_string()];
                    header.extend(names.iter().cloned());
                    csv_rows(
                        &header,
                        r.rows().enumerate().map(|(i, row)| {
                            let mut v = vec![names[i].clone()];
                            v.extend(row.iter().map(|x| format_number(*x)));
                            v
                        }),
                    )
                }
            })
        }
        Command::Regress {
            col,
            cols,
            terms,
            method,
            ..
        } => {
            let path = match method.as_str() {
                "auto" => StandardizePath::Auto,
                "on" => StandardizePath::On,
                "off" => StandardizePath::Off,
                other => return Err(Error::Invalid(format!("unknown standardization `{other}`"))),
            };
            let model = if terms.is_empty() {
                let names = if cols.is_empty() {
                    pick_columns(&t, &[])?.into_iter().filter(|c| c != col).collect()
                } else {
                    cols.clone()
                };
                let mut all: Vec<&str> = names.iter().map(String::as_str).collect();
                all.push(col);
                let complete = t.select(&all)?;
                let complete = tabular::drop_missing(&complete, tabular::DropMode::AnyRow);
                let x = complete.to_matrix(&all[..all.len() - 1])?;
                let y = complete.numeric_complete(col)?;
                let mut m = regression::lstsq(&regression::with_intercept(&x), &y, path)?;
                m.columns = names;
                m.columns.push("(intercept)".into());
                m
            } else {
                let [xname] = cols.as_slice() else {
                    return Err(Error::Invalid("--terms needs exactly one predictor in --cols".into()));
                };
                let parsed: Vec<Term> = terms.iter().map(|s| Term::parse(s)).collect::<Result<_>>()?;
                let complete = tabular::drop_missing(&t.select(&[xname, col])?, tabular::DropMode::AnyRow);
                regression::fit_terms(
                    &complete.numeric_complete(xname)?,
                    &complete.numeric_complete(col)?,
                    &parsed,
                    path,
                )?
            };
            Ok(match out {
                OutFormat::Json => model.to_json(),
                OutFormat::Csv => csv_rows(
                    &["term", "coefficient"],
                    model
                        .columns
                        .iter()
                        .zip(&model.coefficients)
                        .map(|(n, c)| vec![n.clone(), format_number(*c)]),
                ),
            })
        }
        Command::Pca { cols, method, .. } => {
            let (names, m) = matrix(&t, cols)?;
            let pre = match method.as_str() {
                "center" => Preprocess::Center,
                "standardize" => Preprocess::Standardize,
                other => return Err(Error::Invalid(format!("unknown preprocessing `{other}`"))),
            };
            let p = linalg::pca(&m, pre)?;
            Ok(match out {
                OutFormat::Json => json!({
                    "columns": names,
                    "singular_values": nums(&p.singular_values),
                    "component_stds": nums(&p.component_stds()),
                    "cumvar_ratio": nums(&p.cumvar_ratio),
                    "loadings": matrix_json(&p.loadings),
                })
                .to_string(),
                OutFormat::Csv => {
                    let header: Vec<String> = (1..=p.scores.n_cols()).map(|j| format!("pc{j}")).collect();
                    csv_rows(
                        &header,
                        p.scores.rows().map(|r| r.iter().map(|x| format_number(*x)).collect()),
                    )
                }
            })
        }
        Command::Knn {
            test,
            cols,
            col,
            k,
            standardize,
            seed,
            ..
        } => {
            let names: Vec<String> = if cols.is_empty() {
                pick_columns(&t, &[])?.into_iter().filter(|c| c != col).collect()
            } else {
                cols.clone()
            };
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let mut x_train = t.to_matrix(&refs)?;
            let y_train = labels(&t, col)?;
            let opts = if io.no_header {
                CsvOptions::headerless()
            } else {
                CsvOptions::default()
            };
            let tt = read_source(test, &mut std::io::empty(), &opts)?;
            let mut x_test = tt.to_matrix(&refs)?;
            if *standardize {
                let (mu, sd) = (x_train.column_means(), x_train.column_stds());
                x_train = standardize_with(&x_train, &mu, &sd)?;
                x_test = standardize_with(&x_test, &mu, &sd)?;
            }
            let ties = seed.map_or(TiePolicy::LowestLabel, TiePolicy::SeededRandom);
            let pred = spatial::knn_classify(&x_train, &y_train, &x_test, *k, ties)?;
            let metrics = match tt.column(col) {
                Ok(_) => Some(spatial::classification_metrics(&labels(&tt, col)?, &pred)?),
                Err(_) => None,
            };
            Ok(match out {
                OutFormat::Json => json!({ "k": k, "predictions": pred, "metrics": metrics }).to_string(),
                OutFormat::Csv => csv_rows(&["prediction"], pred.iter().map(|p| vec![p.to_string()])),
            })
        }
        Command::Kmeans {
            cols,
            k,
            restarts,
            seed,
            ..
        } => {
            let (names, m) = matrix(&t, cols)?;
            let res = spatial::kmeans_restarts(&m, *k, *restarts, *seed)?;
            Ok(match out {
                OutFormat::Json => json!({
                    "columns": names,
                    "centres": matrix_json(&res.centres),
                    "wcss": num(res.wcss),
                    "cluster_sizes": res.cluster_sizes(),
                    "labels": res.labels,
                    "iterations": res.iterations,
                    "converged": res.converged,
                    "restarts_run": res.restarts_run,
                    "best_seed": res.best_seed,
                })
                .to_string(),
                OutFormat::Csv => csv_rows(&["label"], res.labels.iter().map(|l| vec![l.to_string()])),
            })
        }
        Command::Outliers {
            method,
            col,
            cols,
            r,
            threshold,
            ..
        } => {
            let need_r = || r.ok_or_else(|| Error::Invalid("--r is required".into()));
            let (flags, extra) = match method.as_str() {
                "iqr" => (spatial::outliers_iqr(&values(&t, col)?.1)?, Value::Null),
                "density" => {
                    let v = values(&t, col)?.1;
                    let th = threshold.ok_or_else(|| Error::Invalid("--threshold is required".into()))?;
                    let d = spatial::density_1d(&v, need_r()?)?;
                    (spatial::outliers_low_density(&v, need_r()?, th)?, nums(&d))
                }
                "isolated" => {
                    let (_, m) = matrix(&t, cols)?;
                    let counts = spatial::neighbour_counts(&m, need_r()?)?;
                    (spatial::outliers_isolated(&m, need_r()?)?, json!(counts))
                }
                other => return Err(Error::Invalid(format!("unknown outlier method `{other}`"))),
            };
            let idx: Vec<usize> = (0..flags.len()).filter(|&i| flags[i]).collect();
            Ok(match out {
                OutFormat::Json => json!({ "method": method, "outliers": idx, "scores": extra }).to_string(),
                OutFormat::Csv => csv_rows(&["outlier"], flags.iter().map(|f| vec![u8::from(*f).to_string()])),
            })
        }
        Command::Ts {
            col,
            date_col,
            method,
            k,
            trailing,
            ..
        } => {
            let name = pick_column(&t, col)?;
            let v = t.numeric(&name)?;
            let s = match date_col {
                Some(d) => {
                    let idx = t
                        .labels(d)?
                        .into_iter()
                        .map(|x| timeseries::parse_date(x.as_deref().unwrap_or("")))
                        .collect::<Result<_>>()?;
                    Series::with_index(v, idx)?
                }
                None => Series::new(v),
            };
            let rolled = |stat| timeseries::rolling(&s, *k, stat, !*trailing);
            let res = match method.as_str() {
                "diff" => s.diff(),
                "rolling-mean" => rolled(RollingStat::Mean)?,
                "rolling-median" => rolled(RollingStat::Median)?,
                "rolling-min" => rolled(RollingStat::Min)?,
                "rolling-max" => rolled(RollingStat::Max)?,
                "ffill" => timeseries::fill(&s, FillMethod::Ffill)?,
                "bfill" => timeseries::fill(&s, FillMethod::Bfill)?,
                "linear" => timeseries::fill(&s, FillMethod::Linear)?,
                "detrend" => timeseries::detrend(&s, *k)?.1,
                other => return Err(Error::Invalid(format!("unknown series transform `{other}`"))),
            };
            Ok(match out {
                OutFormat::Json => {
                    let vals: Vec<Value> = res.values.iter().map(|x| x.map_or(Value::Null, num)).collect();
                    let dates = match &res.index {
                        Some(ix) => Some(
                            ix.iter()
                                .map(|&d| timeseries::format_date(d))
                                .collect::<Result<Vec<_>>>()?,
                        ),
                        None => None,
                    };
                    json!({ "column": name, "method": method, "values": vals, "dates": dates }).to_string()
                }
                OutFormat::Csv => res.to_csv()?,
            })
        }
        Command::Impute { col, method, by, .. } => {
            let name = pick_column(&t, col)?;
            let v = t.numeric(&name)?;
            let filled = match method.as_str() {
                "mean" => tabular::impute(&v, &Impute::Mean)?,
                "median" => tabular::impute(&v, &Impute::Median)?,
                "mode" => tabular::impute(&v, &Impute::Mode)?,
                "group-mean" => {
                    let g = by
                        .as_ref()
                        .ok_or_else(|| Error::Invalid("group-mean needs --by".into()))?;
                    let keys = match t.column(g)? {
                        Column::Text(c) => c.clone(),
                        Column::Numeric(c) => c.iter().map(|x| x.map(format_number)).collect(),
                    };
                    if let Some(i) = keys.iter().position(Option::is_none) {
                        return Err(Error::Missing(format!("group key `{g}` at row {}", i + 1)));
                    }
                    let keys: Vec<String> = keys.into_iter().flatten().collect();
                    tabular::impute(&v, &Impute::GroupMean(&factorize(&keys)))?
                }
                other => return Err(Error::Invalid(format!("unknown imputation `{other}`"))),
            };
            Ok(match out {
                OutFormat::Json => json!({ "column": name, "method": method, "values": nums(&filled) }).to_string(),
                OutFormat::Csv => csv_rows(&[name], filled.iter().map(|x| vec![format_number(*x)])),
            })
        }
    }
}

fn labels(t: &Table, col: &str) -> Result<Vec<usize>> {
    t.numeric_complete(col)?
        .into_iter()
        .map(|x| {
            if x >= 0.0 && x.fract() == 0.0 {
                Ok(x as usize)
            } else {
                Err(Error::domain("labels", format!("`{col}` holds {x}, not a class label")))
            }
        })
        .collect()
}

fn standardize_with(x: &Matrix, mu: &[f64], sd: &[f64]) -> Result<Matrix> {
    if let Some(j) = sd.iter().position(|&s| s <= 0.0) {
        return Err(Error::DegenerateScale(format!("feature {j} has zero variance")));
    }
    let rows: Vec<Vec<f64>> = x
        .rows()
        .map(|r| r.iter().enumerate().map(|(j, v)| (v - mu[j]) / sd[j]).collect())
        .collect();
    Matrix::from_rows(&rows)
}

fn test_output(
    res: &hypothesis::TestResult,
    fitted: Option<&DistSpec>,
    cramers_v: Option<f64>,
    out: OutFormat,
) -> Result<String> {
    Ok(match out {
        OutFormat::Json => {
            let mut v = serde_json::to_value(res).map_err(|e| Error::Invalid(e.to_string()))?;
            if let Some(d) = fitted {
                v["fit"] = json!(d);
            }
            if let Some(c) = cramers_v {
                v["cramers_v"] = num(c);
            }
            v.to_string()
        }
        OutFormat::Csv => {
            let mut rows = vec![
                vec!["statistic".to_string(), format_number(res.statistic)],
                vec!["critical".to_string(), format_number(res.critical)],
                vec!["alpha".to_string(), format_number(res.alpha)],
                vec!["dof".to_string(), format_number(res.dof)],
                vec!["reject".to_string(), u8::from(res.reject).to_string()],
            ];
            if let Some(c) = cramers_v {
                rows.push(vec!["cramers_v".to_string(), fmt_opt(Some(c))]);
            }
            csv_rows(&["field", "value"], rows)
        }
    })
}
