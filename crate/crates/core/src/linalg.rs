//! Dense row-major matrices, one-sided Jacobi SVD, condition numbers and
//! principal component analysis.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense `n_rows x n_cols` matrix of `f64`, stored row by row.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    n_rows: usize,
    n_cols: usize,
    data: Vec<f64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.n_rows, self.n_cols)?;
        for i in 0..self.n_rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn new(n_rows: usize, n_cols: usize, data: Vec<f64>) -> Result<Self> {
        if n_rows * n_cols != data.len() {
            return Err(Error::Shape(format!(
                "{} values for a {n_rows}x{n_cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { n_rows, n_cols, data })
    }

    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Matrix {
            n_rows,
            n_cols,
            data: vec![0.0; n_rows * n_cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * n_cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n_cols {
                return Err(Error::Shape(format!(
                    "row {i} has {} entries, expected {n_cols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix {
            n_rows: rows.len(),
            n_cols,
            data,
        })
    }

    pub fn from_columns<C: AsRef<[f64]>>(cols: &[C]) -> Result<Self> {
        let n_rows = cols.first().map_or(0, |c| c.as_ref().len());
        if let Some(j) = cols.iter().position(|c| c.as_ref().len() != n_rows) {
            return Err(Error::Shape(format!("column {j} has the wrong length")));
        }
        let mut m = Matrix::zeros(n_rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, &x) in c.as_ref().iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        Ok(m)
    }

    /// `n x 1` matrix.
    pub fn column_vector(v: &[f64]) -> Self {
        Matrix {
            n_rows: v.len(),
            n_cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n_rows, self.n_cols)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        (0..self.n_rows).map(move |i| self.row(i))
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n_rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.n_cols, self.n_rows);
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        matmul(self, other)
    }

    /// Keeps the given rows, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.n_cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Matrix {
            n_rows: idx.len(),
            n_cols: self.n_cols,
            data,
        }
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.n_rows, idx.len());
        for i in 0..self.n_rows {
            for (jj, &j) in idx.iter().enumerate() {
                m[(i, jj)] = self[(i, j)];
            }
        }
        m
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Matrix {
        Matrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        if self.shape() != other.shape() {
            return Err(Error::Shape(format!("{:?} minus {:?}", self.shape(), other.shape())));
        }
        Ok(Matrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// Column means.
    pub fn column_means(&self) -> Vec<f64> {
        let n = self.n_rows as f64;
        (0..self.n_cols)
            .map(|j| (0..self.n_rows).map(|i| self[(i, j)]).sum::<f64>() / n)
            .collect()
    }

    /// Column standard deviations with denominator `n`.
    pub fn column_stds(&self) -> Vec<f64> {
        let means = self.column_means();
        let n = self.n_rows as f64;
        (0..self.n_cols)
            .map(|j| {
                let m = means[j];
                ((0..self.n_rows).map(|i| (self[(i, j)] - m).powi(2)).sum::<f64>() / n).sqrt()
            })
            .collect()
    }

    /// Headerless comma-separated rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for r in self.rows() {
            let line: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    /// Parses headerless CSV (lines starting with `#` and blank lines are
    /// skipped).
    pub fn from_csv(text: &str) -> Result<Matrix> {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let row = t
                .split(',')
                .map(|c| {
                    c.trim().parse::<f64>().map_err(|_| Error::Parse {
                        line: lineno + 1,
                        msg: format!("not a number: `{}`", c.trim()),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if let Some(first) = rows.first() {
                if first.len() != row.len() {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        msg: format!("expected {} fields, got {}", first.len(), row.len()),
                    });
                }
            }
            rows.push(row);
        }
        Matrix::from_rows(&rows)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n_cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n_cols + j]
    }
}

/// `C = A B`, `c_ij = sum_k a_ik b_kj`.
pub fn matmul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.n_cols != b.n_rows {
        return Err(Error::Shape(format!(
            "cannot multiply {}x{} by {}x{}",
            a.n_rows, a.n_cols, b.n_rows, b.n_cols
        )));
    }
    let mut c = Matrix::zeros(a.n_rows, b.n_cols);
    for i in 0..a.n_rows {
        for k in 0..a.n_cols {
            let aik = a[(i, k)];
            if aik == 0.0 {
                continue;
            }
            let brow = b.row(k);
            let crow = &mut c.data[i * b.n_cols..(i + 1) * b.n_cols];
            for (cij, bkj) in crow.iter_mut().zip(brow) {
                *cij += aik * bkj;
            }
        }
    }
    Ok(c)
}

pub fn transpose(a: &Matrix) -> Matrix {
    a.transpose()
}

/// Compact SVD, `X = U diag(s) Vt`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvdResult {
    /// `n x k`, orthonormal columns.
    pub u: Matrix,
    /// `k = min(n, m)` singular values, nonincreasing.
    pub s: Vec<f64>,
    /// `k x m`, orthonormal rows.
    pub vt: Matrix,
    pub sweeps: usize,
}

impl SvdResult {
    pub fn reconstruct(&self) -> Matrix {
        let k = self.s.len();
        let mut us = self.u.clone();
        for i in 0..us.n_rows {
            for j in 0..k {
                us[(i, j)] *= self.s[j];
            }
        }
        matmul(&us, &self.vt).expect("conformable SVD factors")
    }
}

pub const SVD_DEFAULT_TOL: f64 = 1e-12;
pub const SVD_MAX_SWEEPS: usize = 60;

fn dot_cols(a: &[Vec<f64>], p: usize, q: usize) -> f64 {
    a[p].iter().zip(&a[q]).map(|(x, y)| x * y).sum()
}

/// One-sided (Hestenes) Jacobi SVD.
///
/// Columns of a working copy of `X` are rotated pairwise until every pair is
/// orthogonal to within `tol` relative to the product of their norms; the
/// column norms are then the singular values. Capped at
/// [`SVD_MAX_SWEEPS`] cyclic sweeps. Wide inputs are handled through the
/// transpose.
///
/// Signs are fixed so that the largest-magnitude entry of each row of `vt`
/// is positive.
pub fn svd_compact(x: &Matrix, tol: f64) -> Result<SvdResult> {
    if x.data.iter().any(|v| !v.is_finite()) {
        return Err(Error::Invalid("matrix has non-finite entries".into()));
    }
    if x.n_rows < x.n_cols {
        let t = svd_tall(&x.transpose(), tol)?;
        let mut r = SvdResult {
            u: t.vt.transpose(),
            s: t.s,
            vt: t.u.transpose(),
            sweeps: t.sweeps,
        };
        fix_signs(&mut r);
        return Ok(r);
    }
    let mut r = svd_tall(x, tol)?;
    fix_signs(&mut r);
    Ok(r)
}

fn svd_tall(x: &Matrix, tol: f64) -> Result<SvdResult> {
    let (n, m) = x.shape();
    // column-major working copies
    let mut a: Vec<Vec<f64>> = (0..m).map(|j| x.column(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..m)
        .map(|j| {
            let mut e = vec![0.0; m];
            e[j] = 1.0;
            e
        })
        .collect();

    let mut sweeps = 0;
    let mut converged = m < 2;
    while !converged {
        if sweeps == SVD_MAX_SWEEPS {
            return Err(Error::NoConvergence(format!(
                "Jacobi SVD did not converge in {SVD_MAX_SWEEPS} sweeps"
            )));
        }
        sweeps += 1;
        let mut rotated = false;
        for p in 0..m - 1 {
            for q in p + 1..m {
                let alpha = dot_cols(&a, p, p);
                let beta = dot_cols(&a, q, q);
                let gamma = dot_cols(&a, p, q);
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                if gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut a, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        converged = !rotated;
    }

    let norms: Vec<f64> = (0..m).map(|j| dot_cols(&a, j, j).sqrt()).collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]).then(i.cmp(&j)));

    let s: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let mut ucols: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut null_slots = Vec::new();
    for (k, &j) in order.iter().enumerate() {
        // rotated columns stay mutually orthogonal relative to their own
        // norms, so even tiny ones normalise to valid directions
        if s[k] > SINGULAR_ZERO {
            ucols.push(a[j].iter().map(|x| x / s[k]).collect());
        } else {
            ucols.push(vec![0.0; n]);
            null_slots.push(k);
        }
    }
    complete_orthonormal(&mut ucols, &null_slots);

    let mut u = Matrix::zeros(n, m);
    for (k, col) in ucols.iter().enumerate() {
        for i in 0..n {
            u[(i, k)] = col[i];
        }
    }
    let mut vt = Matrix::zeros(m, m);
    for (k, &j) in order.iter().enumerate() {
        for i in 0..m {
            vt[(k, i)] = v[j][i];
        }
    }
    Ok(SvdResult { u, s, vt, sweeps })
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (left, right) = cols.split_at_mut(q);
    let (cp, cq) = (&mut left[p], &mut right[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (xp, xq) = (*x, *y);
        *x = c * xp - s * xq;
        *y = s * xp + c * xq;
    }
}

/// Fills the listed (zero) columns with unit vectors orthogonal to all the
/// others, by Gram-Schmidt on the standard basis.
fn complete_orthonormal(cols: &mut [Vec<f64>], slots: &[usize]) {
    if slots.is_empty() {
        return;
    }
    let n = cols[0].len();
    let mut candidate = 0;
    for &k in slots {
        while candidate < n {
            let mut e = vec![0.0; n];
            e[candidate] = 1.0;
            candidate += 1;
            for _ in 0..2 {
                for (j, c) in cols.iter().enumerate() {
                    if j == k || c.iter().all(|&x| x == 0.0) {
                        continue;
                    }
                    let d: f64 = e.iter().zip(c).map(|(a, b)| a * b).sum();
                    for (ei, ci) in e.iter_mut().zip(c) {
                        *ei -= d * ci;
                    }
                }
            }
            let norm = e.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-8 {
                cols[k] = e.into_iter().map(|x| x / norm).collect();
                break;
            }
        }
    }
}

fn fix_signs(r: &mut SvdResult) {
    let k = r.s.len();
    for j in 0..k {
        let row = r.vt.row(j);
        let mut best = 0;
        for (i, x) in row.iter().enumerate() {
            if x.abs() > row[best].abs() {
                best = i;
            }
        }
        if row[best] < 0.0 {
            for i in 0..r.vt.n_cols {
                r.vt[(j, i)] = -r.vt[(j, i)];
            }
            for i in 0..r.u.n_rows {
                r.u[(i, j)] = -r.u[(i, j)];
            }
        }
    }
}

/// Singular values below this are treated as exact zeros by
/// [`condition_number`].
pub const SINGULAR_ZERO: f64 = 1e-300;

/// Ratio of the largest to the smallest singular value; `+inf` when the
/// smallest one vanishes.
pub fn condition_number(x: &Matrix) -> Result<f64> {
    let s = svd_compact(x, SVD_DEFAULT_TOL)?.s;
    Ok(condition_from_singular_values(&s))
}

pub fn condition_from_singular_values(s: &[f64]) -> f64 {
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > SINGULAR_ZERO => hi / lo,
        (Some(_), Some(_)) => f64::INFINITY,
        _ => f64::NAN,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preprocess {
    Center,
    /// Centre and divide by the column standard deviation (denominator n).
    Standardize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaResult {
    pub singular_values: Vec<f64>,
    /// Rows are the principal axes.
    pub loadings: Matrix,
    /// `U diag(s)`, the data expressed in the principal axes.
    pub scores: Matrix,
    /// `cumsum(s^2) / sum(s^2)`.
    pub cumvar_ratio: Vec<f64>,
    pub means: Vec<f64>,
    /// Column divisors used during preprocessing (all 1 for centring only).
    pub scales: Vec<f64>,
}

impl PcaResult {
    /// Standard deviations of the scores, `s / sqrt(n)`.
    pub fn component_stds(&self) -> Vec<f64> {
        let n = self.scores.n_rows() as f64;
        self.singular_values.iter().map(|s| s / n.sqrt()).collect()
    }
}

pub fn pca(x: &Matrix, preprocess: Preprocess) -> Result<PcaResult> {
    if x.n_rows < 2 {
        return Err(Error::Invalid("PCA needs at least 2 rows".into()));
    }
    let means = x.column_means();
    let scales = match preprocess {
        Preprocess::Center => vec![1.0; x.n_cols],
        Preprocess::Standardize => {
            let sd = x.column_stds();
            if let Some(j) = sd.iter().position(|&s| s <= 0.0) {
                return Err(Error::DegenerateScale(format!("column {j} has zero variance")));
            }
            sd
        }
    };
    let mut z = x.clone();
    for i in 0..z.n_rows {
        for j in 0..z.n_cols {
            z[(i, j)] = (z[(i, j)] - means[j]) / scales[j];
        }
    }
    let svd = svd_compact(&z, SVD_DEFAULT_TOL)?;
    let mut scores = svd.u.clone();
    for i in 0..scores.n_rows {
        for (j, s) in svd.s.iter().enumerate() {
            scores[(i, j)] *= s;
        }
    }
    let sq: Vec<f64> = svd.s.iter().map(|s| s * s).collect();
    let total: f64 = sq.iter().sum();
    let mut acc = 0.0;
    let mut cumvar_ratio: Vec<f64> = sq
        .iter()
        .map(|v| {
            acc += v;
            acc / total
        })
        .collect();
    if let Some(last) = cumvar_ratio.last_mut() {
        *last = 1.0;
    }
    Ok(PcaResult {
        singular_values: svd.s,
        loadings: svd.vt,
        scores,
        cumvar_ratio,
        means,
        scales,
    })
}
