//! Kolmogorov-Smirnov and Pearson chi-squared tests, Cramér's V.
//!
//! Every test returns a [`TestResult`] holding the statistic, the critical
//! value at the requested level and the decision. p-values are not
//! computed.

use serde::{Deserialize, Serialize};

use crate::categorical::ContingencyTable;
use crate::distributions::DistSpec;
use crate::error::{Error, Result};
use crate::special;
use crate::univariate::sorted;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub test: String,
    pub statistic: f64,
    pub critical: f64,
    pub alpha: f64,
    /// Degrees of freedom for chi-squared tests, sample size for KS tests.
    pub dof: f64,
    pub reject: bool,
}

impl TestResult {
    fn new(test: &str, statistic: f64, critical: f64, alpha: f64, dof: f64) -> Self {
        TestResult {
            test: test.to_string(),
            statistic,
            critical,
            alpha,
            dof,
            reject: statistic >= critical,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain struct serializes")
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain("test", format!("alpha = {alpha} outside (0, 1)")));
    }
    Ok(())
}

/// One-sample KS statistic `sup |F_n(t) - F(t)|`, probing `F` only at the
/// order statistics.
pub fn ks_statistic(v: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if v.is_empty() {
        return Err(Error::Empty);
    }
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    for (k, x) in sorted(v).into_iter().enumerate() {
        let f = cdf(x);
        d = d.max((k as f64 / n - f).abs()).max(((k + 1) as f64 / n - f).abs());
    }
    Ok(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KsMethod {
    /// `sqrt(-ln(alpha/2) / (2n))`.
    #[default]
    Asymptotic,
    /// Inverse of the finite-`n` Kolmogorov CDF.
    Exact,
}

/// Critical value `K_n` of the one-sample KS test.
pub fn ks_critical(n: usize, alpha: f64, method: KsMethod) -> Result<f64> {
    if n == 0 {
        return Err(Error::Empty);
    }
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::domain(
            "ks_critical",
            format!("alpha = {alpha} outside (0, 0.5)"),
        ));
    }
    match method {
        KsMethod::Asymptotic => Ok(special::kolmogorov_critical_asymptotic(n, alpha)),
        KsMethod::Exact => special::kolmogorov_critical_exact(n, alpha),
    }
}

pub fn ks_one_sample(v: &[f64], d: &DistSpec, alpha: f64, method: KsMethod) -> Result<TestResult> {
    let stat = ks_statistic(v, |x| d.cdf(x))?;
    let crit = ks_critical(v.len(), alpha, method)?;
    Ok(TestResult::new("ks_one_sample", stat, crit, alpha, v.len() as f64))
}

/// Two-sample statistic `sup |F'_n(t) - F''_m(t)|`, found by merging the
/// sorted samples and checking the gap after every distinct value.
pub fn ks_two_sample_statistic(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::Empty);
    }
    let (xs, ys) = (sorted(x), sorted(y));
    let (n, m) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xs.len() && j < ys.len() {
        let t = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= t {
            i += 1;
        }
        while j < ys.len() && ys[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    Ok(d)
}

/// Two-sample KS test with the approximate critical value
/// `sqrt(-ln(alpha/2) (n+m) / (2nm))`.
pub fn ks_two_sample(x: &[f64], y: &[f64], alpha: f64) -> Result<TestResult> {
    check_alpha(alpha)?;
    let stat = ks_two_sample_statistic(x, y)?;
    let (n, m) = (x.len() as f64, y.len() as f64);
    let crit = (-(alpha / 2.0).ln() * (n + m) / (2.0 * n * m)).sqrt();
    Ok(TestResult::new("ks_two_sample", stat, crit, alpha, n * m / (n + m)))
}

fn proportions(counts: &[u64]) -> Result<(Vec<f64>, f64)> {
    let n = counts.iter().sum::<u64>() as f64;
    if n == 0.0 {
        return Err(Error::Empty);
    }
    Ok((counts.iter().map(|&c| c as f64 / n).collect(), n))
}

fn check_expected(p: &[f64], what: &str) -> Result<()> {
    if let Some(i) = p.iter().position(|&x| !(x > 0.0)) {
        return Err(Error::domain(
            "chi-squared",
            format!("{what} of cell {i} is not positive"),
        ));
    }
    Ok(())
}

fn chi2_critical(alpha: f64, dof: usize) -> Result<f64> {
    if dof == 0 {
        return Err(Error::domain("chi-squared", "zero degrees of freedom"));
    }
    special::chi2_ppf(1.0 - alpha, dof as f64)
}

/// Goodness of fit: `T = n sum (p_obs - p)^2 / p` with `l - 1` degrees of
/// freedom.
pub fn chisq_gof(observed: &[u64], expected: &[f64], alpha: f64) -> Result<TestResult> {
    check_alpha(alpha)?;
    if observed.len() != expected.len() {
        return Err(Error::Shape(format!(
            "{} observed vs {} expected categories",
            observed.len(),
            expected.len()
        )));
    }
    check_expected(expected, "expected proportion")?;
    let total: f64 = expected.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::domain(
            "chi-squared",
            format!("expected proportions sum to {total}"),
        ));
    }
    let (p, n) = proportions(observed)?;
    let t = n * p.iter().zip(expected).map(|(o, e)| (o - e).powi(2) / e).sum::<f64>();
    let dof = observed.len() - 1;
    Ok(TestResult::new(
        "chisq_gof",
        t,
        chi2_critical(alpha, dof)?,
        alpha,
        dof as f64,
    ))
}

/// Two-sample test against pooled proportions, `l - 1` degrees of freedom.
pub fn chisq_two_sample(c1: &[u64], c2: &[u64], alpha: f64) -> Result<TestResult> {
    check_alpha(alpha)?;
    if c1.len() != c2.len() {
        return Err(Error::Shape(format!("{} vs {} categories", c1.len(), c2.len())));
    }
    let (p1, n1) = proportions(c1)?;
    let (p2, n2) = proportions(c2)?;
    let pp: Vec<f64> = p1.iter().zip(&p2).map(|(a, b)| (n1 * a + n2 * b) / (n1 + n2)).collect();
    check_expected(&pp, "pooled proportion")?;
    let part = |p: &[f64]| -> f64 { p.iter().zip(&pp).map(|(o, e)| (o - e).powi(2) / e).sum() };
    let t = n1 * part(&p1) + n2 * part(&p2);
    let dof = c1.len() - 1;
    Ok(TestResult::new(
        "chisq_two_sample",
        t,
        chi2_critical(alpha, dof)?,
        alpha,
        dof as f64,
    ))
}

/// Degrees of freedom used by [`chisq_independence`] for an `n x m` table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndependenceDof {
    /// `n + m - 1`.
    #[default]
    Book,
    /// `(n - 1)(m - 1)`.
    Classical,
}

/// Expected counts `e_ij = rowsum_i colsum_j / total`.
pub fn expected_counts(t: &ContingencyTable) -> Result<Vec<Vec<f64>>> {
    let total = t.total() as f64;
    if total == 0.0 {
        return Err(Error::Empty);
    }
    let (rs, cs) = (t.row_sums(), t.col_sums());
    let mut e = Vec::with_capacity(rs.len());
    for (i, &r) in rs.iter().enumerate() {
        let row: Vec<f64> = cs.iter().map(|&c| r as f64 * c as f64 / total).collect();
        if let Some(j) = row.iter().position(|&x| x <= 0.0) {
            return Err(Error::domain(
                "chi-squared",
                format!(
                    "expected count of cell ({}, {}) is zero",
                    t.row_levels[i], t.col_levels[j]
                ),
            ));
        }
        e.push(row);
    }
    Ok(e)
}

/// `T = sum (c_ij - e_ij)^2 / e_ij`.
pub fn independence_statistic(t: &ContingencyTable) -> Result<f64> {
    let e = expected_counts(t)?;
    Ok(t.counts
        .iter()
        .zip(&e)
        .flat_map(|(c, e)| c.iter().zip(e).map(|(&c, e)| (c as f64 - e).powi(2) / e))
        .sum())
}

pub fn chisq_independence(t: &ContingencyTable, alpha: f64, dof: IndependenceDof) -> Result<TestResult> {
    check_alpha(alpha)?;
    let stat = independence_statistic(t)?;
    let (n, m) = t.shape();
    let dof = match dof {
        IndependenceDof::Book => n + m - 1,
        IndependenceDof::Classical => (n - 1) * (m - 1),
    };
    Ok(TestResult::new(
        "chisq_independence",
        stat,
        chi2_critical(alpha, dof)?,
        alpha,
        dof as f64,
    ))
}

/// Cramér's V, `sqrt(T / (min(n-1, m-1) sum c_ij))`.
pub fn cramers_v(t: &ContingencyTable) -> Result<f64> {
    let (n, m) = t.shape();
    if n < 2 || m < 2 {
        return Err(Error::domain("cramers_v", format!("degenerate {n}x{m} table")));
    }
    let stat = independence_statistic(t)?;
    Ok((stat / ((n.min(m) - 1) as f64 * t.total() as f64)).sqrt().min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poll_gof() {
        let r = chisq_gof(&[516, 501], &[0.5, 0.5], 0.001).unwrap();
        assert!((r.statistic - 0.2212389380530986).abs() < 1e-12);
        assert!((r.critical - 10.827566170662733).abs() < 1e-9);
        assert!(!r.reject);
        assert_eq!(r.dof, 1.0);
    }

    #[test]
    fn gof_zero_when_matching() {
        let r = chisq_gof(&[10, 30, 60], &[0.1, 0.3, 0.6], 0.05).unwrap();
        assert!(r.statistic.abs() < 1e-12);
        assert!(chisq_gof(&[1, 2], &[1.0, 0.0], 0.05).is_err());
    }

    #[test]
    fn marathon_two_sample() {
        let r = chisq_two_sample(&[240, 449, 262, 43, 19], &[879, 2200, 1708, 541, 170], 0.001).unwrap();
        assert!((r.statistic - 75.31373854741857).abs() < 1e-9);
        assert!((r.critical - 18.46682695290317).abs() < 1e-9);
        assert!(r.reject);
    }

    #[test]
    fn cramers_v_edge_cases() {
        let rank1 = ContingencyTable::from_counts(vec![vec![2, 4, 6], vec![3, 6, 9]]).unwrap();
        assert!(cramers_v(&rank1).unwrap() < 1e-10);
        let diag = ContingencyTable::from_counts(vec![vec![5, 0], vec![0, 7]]).unwrap();
        assert!((cramers_v(&diag).unwrap() - 1.0).abs() < 1e-12);
        let row = ContingencyTable::from_counts(vec![vec![5, 3]]).unwrap();
        assert!(cramers_v(&row).is_err());
    }

    #[test]
    fn independence_zero_expected_names_cell() {
        let t = ContingencyTable::from_counts(vec![vec![1, 0], vec![2, 0]]).unwrap();
        let e = independence_statistic(&t).unwrap_err();
        assert!(e.to_string().contains("(0, 1)"), "{e}");
    }

    #[test]
    fn ks_equioscillation() {
        let n = 40;
        let d = DistSpec::normal(0.0, 1.0).unwrap();
        let v: Vec<f64> = (1..=n)
            .map(|k| d.ppf((2 * k - 1) as f64 / (2 * n) as f64).unwrap())
            .collect();
        let s = ks_statistic(&v, |x| d.cdf(x)).unwrap();
        assert!((s - 0.5 / n as f64).abs() < 1e-14);
    }

    #[test]
    fn two_sample_identical_is_zero() {
        let x = [3.0, 1.0, 2.0, 2.0];
        assert_eq!(ks_two_sample_statistic(&x, &x).unwrap(), 0.0);
        assert_eq!(ks_two_sample_statistic(&[0.0], &[1.0]).unwrap(), 1.0);
    }

    #[test]
    fn ks_critical_monotone_in_alpha() {
        let mut prev = 0.0;
        for &a in &[0.2, 0.1, 0.05, 0.01, 0.001, 1e-6] {
            let k = ks_critical(500, a, KsMethod::Asymptotic).unwrap();
            assert!(k > prev);
            prev = k;
        }
        assert!(ks_critical(10, 0.7, KsMethod::Exact).is_err());
    }

    #[test]
    fn result_json_shape() {
        let r = TestResult::new("x", 1.0, 2.0, 0.05, 3.0);
        assert_eq!(
            r.to_json(),
            r#"{"test":"x","statistic":1.0,"critical":2.0,"alpha":0.05,"dof":3.0,"reject":false}"#
        );
    }
}
