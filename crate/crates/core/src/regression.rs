//! Correlation, model matrices, least squares and fit diagnostics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{condition_from_singular_values, svd_compact, Matrix, SVD_DEFAULT_TOL};
use crate::univariate::{self, rank_average};

fn centred_sums(x: &[f64], y: &[f64]) -> Result<(f64, f64, f64)> {
    if x.len() != y.len() {
        return Err(Error::Shape(format!("{} vs {} observations", x.len(), y.len())));
    }
    let (mx, my) = (univariate::mean(x)?, univariate::mean(y)?);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    Ok((sxy, sxx, syy))
}

/// Pearson's linear correlation coefficient.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    let (sxy, sxx, syy) = centred_sums(x, y)?;
    if sxx <= 0.0 || syy <= 0.0 {
        return Err(Error::domain("pearson", "zero variance"));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Spearman's rank correlation: Pearson's r of the average ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    pearson(&rank_average(x), &rank_average(y))
}

/// Correlation matrix of the columns of `x`.
pub fn pearson_matrix(x: &Matrix) -> Result<Matrix> {
    let m = x.n_cols();
    let cols: Vec<Vec<f64>> = (0..m).map(|j| x.column(j)).collect();
    let mut r = Matrix::identity(m);
    for i in 0..m {
        for j in i + 1..m {
            let v = pearson(&cols[i], &cols[j])?;
            r[(i, j)] = v;
            r[(j, i)] = v;
        }
    }
    Ok(r)
}

/// Indexes `(i, j)`, `i < j`, of the largest `|r_ij|`; ties go to the
/// lexicographically smallest pair.
pub fn most_correlated_pair(r: &Matrix) -> Result<(usize, usize)> {
    let m = r.n_rows();
    if m < 2 || r.n_cols() != m {
        return Err(Error::Shape(format!(
            "need a square matrix of size >= 2, got {:?}",
            r.shape()
        )));
    }
    let mut best = (0, 1);
    for i in 0..m {
        for j in i + 1..m {
            if r[(i, j)].abs() > r[best].abs() {
                best = (i, j);
            }
        }
    }
    Ok(best)
}

/// One column of a model matrix built from a single variable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Term {
    /// `x^k`; `power(0)` is the constant 1.
    Power(i32),
    Log,
    Identity,
    Const1,
}

impl Term {
    pub fn name(&self) -> String {
        match self {
            Term::Power(0) | Term::Const1 => "1".into(),
            Term::Power(1) | Term::Identity => "x".into(),
            Term::Power(k) => format!("x^{k}"),
            Term::Log => "log(x)".into(),
        }
    }

    /// Parses `x^k`, `x`, `1` and `log`.
    pub fn parse(s: &str) -> Result<Term> {
        let s = s.trim();
        Ok(match s {
            "1" | "const" => Term::Const1,
            "x" => Term::Identity,
            "log" | "log(x)" => Term::Log,
            _ => {
                let k = s
                    .strip_prefix("x^")
                    .or_else(|| s.strip_prefix("pow"))
                    .and_then(|k| k.parse::<i32>().ok())
                    .ok_or_else(|| Error::Invalid(format!("unknown model term `{s}`")))?;
                Term::Power(k)
            }
        })
    }
}

/// Model matrix with one column per term, in order.
pub fn design_matrix(x: &[f64], terms: &[Term]) -> Result<Matrix> {
    if terms.contains(&Term::Log) && x.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::domain("design_matrix", "log of a nonpositive value"));
    }
    let cols: Vec<Vec<f64>> = terms
        .iter()
        .map(|t| {
            x.iter()
                .map(|&v| match t {
                    Term::Power(k) => v.powi(*k),
                    Term::Log => v.ln(),
                    Term::Identity => v,
                    Term::Const1 => 1.0,
                })
                .collect()
        })
        .collect();
    if cols.is_empty() {
        return Err(Error::Invalid("empty term list".into()));
    }
    Matrix::from_columns(&cols)
}

/// `x` with a trailing column of ones.
pub fn with_intercept(x: &Matrix) -> Matrix {
    let mut cols: Vec<Vec<f64>> = (0..x.n_cols()).map(|j| x.column(j)).collect();
    cols.push(vec![1.0; x.n_rows()]);
    Matrix::from_columns(&cols).expect("columns share a length")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StandardizePath {
    /// Used when the condition number exceeds [`AUTO_STANDARDIZE_KAPPA`]
    /// and a constant column is present.
    #[default]
    Auto,
    On,
    Off,
}

pub const AUTO_STANDARDIZE_KAPPA: f64 = 1e8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub ssr: f64,
    pub rmse: f64,
    pub mae: f64,
    pub r2: f64,
    /// Undefined unless `n > m + 1`.
    pub adj_r2: Option<f64>,
    pub aic: f64,
    pub bic: f64,
}

/// Residual diagnostics for `m` fitted parameters.
pub fn diagnostics(y: &[f64], yhat: &[f64], m: usize) -> Result<Diagnostics> {
    if y.len() != yhat.len() {
        return Err(Error::Shape(format!("{} vs {} values", y.len(), yhat.len())));
    }
    let vy = univariate::var(y, 0)?;
    if vy <= 0.0 {
        return Err(Error::domain("diagnostics", "y has zero variance"));
    }
    let r: Vec<f64> = y.iter().zip(yhat).map(|(a, b)| a - b).collect();
    let n = y.len() as f64;
    let ssr: f64 = r.iter().map(|e| e * e).sum();
    let r2 = 1.0 - univariate::var(&r, 0)? / vy;
    let mf = m as f64;
    Ok(Diagnostics {
        ssr,
        rmse: (ssr / n).sqrt(),
        mae: r.iter().map(|e| e.abs()).sum::<f64>() / n,
        r2,
        adj_r2: (n > mf + 1.0).then(|| 1.0 - (1.0 - r2) * (n - 1.0) / (n - mf - 1.0)),
        aic: 2.0 * mf + n * ssr.ln() - n * n.ln(),
        bic: mf * n.ln() + n * ssr.ln() - n * n.ln(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub coefficients: Vec<f64>,
    /// Column labels, when known.
    pub columns: Vec<String>,
    pub diagnostics: Diagnostics,
    /// Condition number of the model matrix as given.
    pub condition_number: f64,
    /// Condition number of the standardized non-constant columns, when
    /// that path was taken.
    pub standardized_condition_number: Option<f64>,
    pub standardized_path: bool,
}

impl LinearModel {
    pub fn predict(&self, x: &Matrix) -> Result<Vec<f64>> {
        if x.n_cols() != self.coefficients.len() {
            return Err(Error::Shape(format!(
                "{} columns for {} coefficients",
                x.n_cols(),
                self.coefficients.len()
            )));
        }
        Ok(x.rows()
            .map(|r| r.iter().zip(&self.coefficients).map(|(a, c)| a * c).sum())
            .collect())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain struct serializes")
    }
}

/// Minimum-norm least squares via the compact SVD. Singular values below
/// `n_cols * eps * s_max` are treated as zero. Returns the solution and
/// the singular values.
pub fn svd_solve(x: &Matrix, y: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    if x.n_rows() != y.len() {
        return Err(Error::Shape(format!("{} rows vs {} responses", x.n_rows(), y.len())));
    }
    let svd = svd_compact(x, SVD_DEFAULT_TOL)?;
    let m = x.n_cols();
    let smax = svd.s.first().copied().unwrap_or(0.0);
    let cutoff = m as f64 * f64::EPSILON * smax;
    let mut c = vec![0.0; m];
    for (k, &sk) in svd.s.iter().enumerate() {
        if sk <= cutoff || sk == 0.0 {
            continue;
        }
        let uy: f64 = (0..x.n_rows()).map(|i| svd.u[(i, k)] * y[i]).sum();
        let w = uy / sk;
        for (j, cj) in c.iter_mut().enumerate() {
            *cj += svd.vt[(k, j)] * w;
        }
    }
    Ok((c, svd.s))
}

fn constant_columns(x: &Matrix) -> Vec<usize> {
    (0..x.n_cols())
        .filter(|&j| {
            let c = x.column(j);
            c[0] != 0.0 && c.iter().all(|&v| v == c[0])
        })
        .collect()
}

/// Least squares fit of `y` on the columns of `x`.
pub fn lstsq(x: &Matrix, y: &[f64], path: StandardizePath) -> Result<LinearModel> {
    let (n, m) = x.shape();
    if n < m {
        return Err(Error::Shape(format!("underdetermined system: {n} rows, {m} columns")));
    }
    if m == 0 {
        return Err(Error::Invalid("model matrix has no columns".into()));
    }
    let (plain, s) = svd_solve(x, y)?;
    let kappa = condition_from_singular_values(&s);
    let consts = constant_columns(x);
    let use_std = match path {
        StandardizePath::Off => false,
        StandardizePath::On => {
            if consts.len() != 1 {
                return Err(Error::Invalid(
                    "the standardized path needs exactly one constant column".into(),
                ));
            }
            true
        }
        StandardizePath::Auto => consts.len() == 1 && kappa > AUTO_STANDARDIZE_KAPPA,
    };

    let (coefficients, std_kappa) = if use_std {
        let k = consts[0];
        let others: Vec<usize> = (0..m).filter(|&j| j != k).collect();
        let sub = x.select_columns(&others);
        let means = sub.column_means();
        let sds = sub.column_stds();
        if let Some(j) = sds.iter().position(|&v| v <= 0.0) {
            return Err(Error::DegenerateScale(format!("column {} is constant", others[j])));
        }
        let z = Matrix::from_columns(
            &(0..others.len())
                .map(|j| {
                    sub.column(j)
                        .iter()
                        .map(|v| (v - means[j]) / sds[j])
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>(),
        )?;
        let (d, sz) = svd_solve(&z, y)?;
        let scaled: Vec<f64> = d.iter().zip(&sds).map(|(d, s)| d / s).collect();
        let intercept = univariate::mean(y)? - scaled.iter().zip(&means).map(|(c, mu)| c * mu).sum::<f64>();
        let mut c = vec![0.0; m];
        c[k] = intercept / x[(0, k)];
        for (j, v) in others.iter().zip(scaled) {
            c[*j] = v;
        }
        (c, Some(condition_from_singular_values(&sz)))
    } else {
        (plain, None)
    };

    let mut model = LinearModel {
        coefficients,
        columns: Vec::new(),
        diagnostics: Diagnostics {
            ssr: 0.0,
            rmse: 0.0,
            mae: 0.0,
            r2: 0.0,
            adj_r2: None,
            aic: 0.0,
            bic: 0.0,
        },
        condition_number: kappa,
        standardized_condition_number: std_kappa,
        standardized_path: use_std,
    };
    let yhat = model.predict(x)?;
    model.diagnostics = diagnostics(y, &yhat, m)?;
    Ok(model)
}

/// Fit on a model matrix built from a single variable, labelling columns.
pub fn fit_terms(x: &[f64], y: &[f64], terms: &[Term], path: StandardizePath) -> Result<LinearModel> {
    let mut model = lstsq(&design_matrix(x, terms)?, y, path)?;
    model.columns = terms.iter().map(Term::name).collect();
    Ok(model)
}
