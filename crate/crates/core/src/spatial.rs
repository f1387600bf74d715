//! Euclidean distances, K-d tree search, nearest-neighbour models,
//! k-means clustering and density-based outlier detection.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rng::Rng;
use crate::univariate;

fn sqdist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Euclidean distance between two points.
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    sqdist(a, b).sqrt()
}

fn same_dims(x: &Matrix, y: &Matrix) -> Result<()> {
    if x.n_cols() != y.n_cols() {
        return Err(Error::Shape(format!(
            "points of dimension {} vs {}",
            x.n_cols(),
            y.n_cols()
        )));
    }
    Ok(())
}

/// All pairwise distances, `d_ij = |x_i - y_j|`.
pub fn cdist(x: &Matrix, y: &Matrix) -> Result<Matrix> {
    same_dims(x, y)?;
    let mut d = Matrix::zeros(x.n_rows(), y.n_rows());
    for (i, a) in x.rows().enumerate() {
        for (j, b) in y.rows().enumerate() {
            d[(i, j)] = euclidean(a, b);
        }
    }
    Ok(d)
}

pub fn centroid(x: &Matrix) -> Result<Vec<f64>> {
    if x.n_rows() == 0 {
        return Err(Error::Empty);
    }
    Ok(x.column_means())
}

/// Root mean squared distance to the centroid.
pub fn dispersion(x: &Matrix) -> Result<f64> {
    let c = centroid(x)?;
    Ok((x.rows().map(|r| sqdist(r, &c)).sum::<f64>() / x.n_rows() as f64).sqrt())
}

const LEAF_SIZE: usize = 16;

#[derive(Debug, Clone)]
enum Node {
    Leaf {
        start: usize,
        end: usize,
    },
    Split {
        axis: usize,
        value: f64,
        left: usize,
        right: usize,
    },
}

/// Static K-d tree over the rows of a matrix: median splits on cycling
/// axes, leaves of at most 16 points, exact backtracking search.
#[derive(Debug, Clone)]
pub struct KdTree {
    points: Matrix,
    order: Vec<usize>,
    nodes: Vec<Node>,
}

#[derive(PartialEq)]
struct Candidate(f64, usize);

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

impl KdTree {
    pub fn new(points: &Matrix) -> Result<Self> {
        if points.n_cols() == 0 {
            return Err(Error::Invalid("points have no coordinates".into()));
        }
        if points.data().iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid("non-finite coordinate".into()));
        }
        let mut tree = KdTree {
            points: points.clone(),
            order: (0..points.n_rows()).collect(),
            nodes: Vec::new(),
        };
        if points.n_rows() > 0 {
            tree.build(0, points.n_rows(), 0);
        }
        Ok(tree)
    }

    pub fn len(&self) -> usize {
        self.points.n_rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> &Matrix {
        &self.points
    }

    fn build(&mut self, start: usize, end: usize, depth: usize) -> usize {
        let id = self.nodes.len();
        if end - start <= LEAF_SIZE {
            self.nodes.push(Node::Leaf { start, end });
            return id;
        }
        let axis = depth % self.points.n_cols();
        let mid = start + (end - start) / 2;
        let pts = &self.points;
        self.order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
            pts[(a, axis)].total_cmp(&pts[(b, axis)]).then(a.cmp(&b))
        });
        let value = pts[(self.order[mid], axis)];
        self.nodes.push(Node::Leaf { start, end });
        let left = self.build(start, mid, depth + 1);
        let right = self.build(mid, end, depth + 1);
        self.nodes[id] = Node::Split {
            axis,
            value,
            left,
            right,
        };
        id
    }

    fn check_query(&self, q: &[f64]) -> Result<()> {
        if q.len() != self.points.n_cols() {
            return Err(Error::Shape(format!(
                "query of dimension {} for points of dimension {}",
                q.len(),
                self.points.n_cols()
            )));
        }
        Ok(())
    }

    /// The `k` nearest points as `(index, distance)`, ordered by distance
    /// and then by index.
    pub fn knn(&self, q: &[f64], k: usize) -> Result<Vec<(usize, f64)>> {
        self.check_query(q)?;
        if k > self.len() {
            return Err(Error::Invalid(format!("k = {k} exceeds {} points", self.len())));
        }
        if k == 0 {
            return Ok(Vec::new());
        }
        let mut heap = BinaryHeap::with_capacity(k + 1);
        self.knn_visit(0, q, k, &mut heap);
        let mut out: Vec<Candidate> = heap.into_vec();
        out.sort();
        Ok(out.into_iter().map(|Candidate(d2, i)| (i, d2.sqrt())).collect())
    }

    fn knn_visit(&self, node: usize, q: &[f64], k: usize, heap: &mut BinaryHeap<Candidate>) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for &i in &self.order[start..end] {
                    let c = Candidate(sqdist(q, self.points.row(i)), i);
                    if heap.len() < k {
                        heap.push(c);
                    } else if c < *heap.peek().expect("heap is full") {
                        heap.pop();
                        heap.push(c);
                    }
                }
            }
            Node::Split {
                axis,
                value,
                left,
                right,
            } => {
                let diff = q[axis] - value;
                let (near, far) = if diff < 0.0 { (left, right) } else { (right, left) };
                self.knn_visit(near, q, k, heap);
                let bound = diff * diff;
                if heap.len() < k || bound <= heap.peek().expect("heap is nonempty").0 {
                    self.knn_visit(far, q, k, heap);
                }
            }
        }
    }

    /// Indexes of all points at distance at most `r`, in increasing order.
    pub fn ball(&self, q: &[f64], r: f64) -> Result<Vec<usize>> {
        self.check_query(q)?;
        if !(r >= 0.0) {
            return Err(Error::Invalid(format!("radius {r} must be nonnegative")));
        }
        let mut out = Vec::new();
        if !self.is_empty() {
            self.ball_visit(0, q, r, &mut out);
        }
        out.sort_unstable();
        Ok(out)
    }

    fn ball_visit(&self, node: usize, q: &[f64], r: f64, out: &mut Vec<usize>) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for &i in &self.order[start..end] {
                    if sqdist(q, self.points.row(i)).sqrt() <= r {
                        out.push(i);
                    }
                }
            }
            Node::Split {
                axis,
                value,
                left,
                right,
            } => {
                let diff = q[axis] - value;
                let (near, far) = if diff < 0.0 { (left, right) } else { (right, left) };
                self.ball_visit(near, q, r, out);
                if diff.abs() <= r {
                    self.ball_visit(far, q, r, out);
                }
            }
        }
    }

    /// [`KdTree::knn`] for every row of `queries`.
    pub fn knn_all(&self, queries: &Matrix, k: usize) -> Result<Vec<Vec<(usize, f64)>>> {
        queries.rows().map(|q| self.knn(q, k)).collect()
    }

    /// [`KdTree::ball`] for every row of `queries`.
    pub fn ball_all(&self, queries: &Matrix, r: f64) -> Result<Vec<Vec<usize>>> {
        queries.rows().map(|q| self.ball(q, r)).collect()
    }
}

/// Brute-force counterpart of [`KdTree::knn`], same ordering.
pub fn knn_brute(points: &Matrix, q: &[f64], k: usize) -> Result<Vec<(usize, f64)>> {
    if k > points.n_rows() {
        return Err(Error::Invalid(format!("k = {k} exceeds {} points", points.n_rows())));
    }
    let mut all: Vec<Candidate> = points
        .rows()
        .enumerate()
        .map(|(i, p)| Candidate(sqdist(q, p), i))
        .collect();
    all.sort();
    Ok(all.into_iter().take(k).map(|Candidate(d2, i)| (i, d2.sqrt())).collect())
}

/// Brute-force counterpart of [`KdTree::ball`].
pub fn ball_brute(points: &Matrix, q: &[f64], r: f64) -> Vec<usize> {
    points
        .rows()
        .enumerate()
        .filter(|(_, p)| sqdist(q, p).sqrt() <= r)
        .map(|(i, _)| i)
        .collect()
}

/// Mean response of the `k` nearest training points.
pub fn knn_regress(x_train: &Matrix, y_train: &[f64], x_test: &Matrix, k: usize) -> Result<Vec<f64>> {
    if y_train.len() != x_train.n_rows() {
        return Err(Error::Shape(format!(
            "{} points, {} responses",
            x_train.n_rows(),
            y_train.len()
        )));
    }
    same_dims(x_train, x_test)?;
    if k == 0 {
        return Err(Error::Invalid("k must be positive".into()));
    }
    let tree = KdTree::new(x_train)?;
    x_test
        .rows()
        .map(|q| {
            let nn = tree.knn(q, k)?;
            Ok(nn.iter().map(|&(i, _)| y_train[i]).sum::<f64>() / k as f64)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TiePolicy {
    /// The smallest of the most frequent labels.
    #[default]
    LowestLabel,
    /// A uniformly random pick among them, from a generator seeded once per
    /// call.
    SeededRandom(u64),
}

/// Majority vote among the `k` nearest training points.
pub fn knn_classify(
    x_train: &Matrix,
    y_train: &[usize],
    x_test: &Matrix,
    k: usize,
    ties: TiePolicy,
) -> Result<Vec<usize>> {
    if y_train.len() != x_train.n_rows() {
        return Err(Error::Shape(format!(
            "{} points, {} labels",
            x_train.n_rows(),
            y_train.len()
        )));
    }
    same_dims(x_train, x_test)?;
    if k == 0 {
        return Err(Error::Invalid("k must be positive".into()));
    }
    let n_labels = y_train.iter().max().map_or(0, |m| m + 1);
    let tree = KdTree::new(x_train)?;
    let mut rng = match ties {
        TiePolicy::SeededRandom(s) => Some(Rng::new(s)),
        TiePolicy::LowestLabel => None,
    };
    let mut out = Vec::with_capacity(x_test.n_rows());
    for q in x_test.rows() {
        let mut votes = vec![0usize; n_labels];
        for (i, _) in tree.knn(q, k)? {
            votes[y_train[i]] += 1;
        }
        let top = *votes.iter().max().expect("at least one label");
        let winners: Vec<usize> = (0..n_labels).filter(|&l| votes[l] == top).collect();
        let pick = match rng.as_mut() {
            Some(r) if winners.len() > 1 => winners[r.below(winners.len())],
            _ => winners[0],
        };
        out.push(pick);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub tn: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tp: u64,
}

impl Confusion {
    pub fn total(&self) -> u64 {
        self.tn + self.fp + self.fn_ + self.tp
    }
}

/// Binary classification metrics. A metric whose denominator is zero is
/// `None` (serialized as `null`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationMetrics {
    pub confusion: Confusion,
    pub accuracy: f64,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
}

pub fn confusion(y_true: &[usize], y_pred: &[usize]) -> Result<Confusion> {
    if y_true.len() != y_pred.len() {
        return Err(Error::Shape(format!("{} vs {} labels", y_true.len(), y_pred.len())));
    }
    let mut c = Confusion {
        tn: 0,
        fp: 0,
        fn_: 0,
        tp: 0,
    };
    for (&t, &p) in y_true.iter().zip(y_pred) {
        match (t, p) {
            (0, 0) => c.tn += 1,
            (0, 1) => c.fp += 1,
            (1, 0) => c.fn_ += 1,
            (1, 1) => c.tp += 1,
            _ => return Err(Error::Invalid(format!("labels must be 0 or 1, got ({t}, {p})"))),
        }
    }
    Ok(c)
}

pub fn metrics_from_confusion(c: Confusion) -> Result<ClassificationMetrics> {
    if c.total() == 0 {
        return Err(Error::Empty);
    }
    let ratio = |a: u64, b: u64| (b > 0).then(|| a as f64 / b as f64);
    let precision = ratio(c.tp, c.tp + c.fp);
    let recall = ratio(c.tp, c.tp + c.fn_);
    let f1 = match (precision, recall) {
        (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
        _ => None,
    };
    Ok(ClassificationMetrics {
        confusion: c,
        accuracy: (c.tn + c.tp) as f64 / c.total() as f64,
        precision,
        recall,
        f1,
    })
}

pub fn classification_metrics(y_true: &[usize], y_pred: &[usize]) -> Result<ClassificationMetrics> {
    metrics_from_confusion(confusion(y_true, y_pred)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringResult {
    pub centres: Matrix,
    pub labels: Vec<usize>,
    pub wcss: f64,
    pub iterations: usize,
    /// False when `max_iter` was reached first.
    pub converged: bool,
    /// Times an empty cluster had its centre moved to a far point.
    pub reseeded: usize,
    pub restarts_run: usize,
    pub best_seed: Option<u64>,
    /// WCSS reached by every restart, in restart order.
    pub restart_wcss: Vec<f64>,
}

impl ClusteringResult {
    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.centres.n_rows()];
        for &l in &self.labels {
            s[l] += 1;
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain struct serializes")
    }
}

// nearest centre (lowest index on ties) and the squared distance
fn assign(x: &Matrix, c: &Matrix) -> (Vec<usize>, Vec<f64>) {
    x.rows()
        .map(|p| {
            let mut best = (0, f64::INFINITY);
            for (j, cj) in c.rows().enumerate() {
                let d = sqdist(p, cj);
                if d < best.1 {
                    best = (j, d);
                }
            }
            best
        })
        .unzip()
}

/// Sum of squared distances to the nearest of the given centres.
pub fn wcss(x: &Matrix, centres: &Matrix) -> Result<f64> {
    same_dims(x, centres)?;
    Ok(assign(x, centres).1.iter().sum())
}

/// Lloyd's algorithm from the given initial centres; stops when the WCSS
/// decreases by less than `eps`.
pub fn kmeans_lloyd(x: &Matrix, init: &Matrix, eps: f64, max_iter: usize) -> Result<ClusteringResult> {
    same_dims(x, init)?;
    let k = init.n_rows();
    if k < 1 || k > x.n_rows() {
        return Err(Error::Invalid(format!("k = {k} for {} points", x.n_rows())));
    }
    let mut centres = init.clone();
    let (mut labels, mut d2) = assign(x, &centres);
    let mut w: f64 = d2.iter().sum();
    let mut reseeded = 0;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;
        let mut sums = Matrix::zeros(k, x.n_cols());
        let mut counts = vec![0usize; k];
        for (p, &l) in x.rows().zip(&labels) {
            counts[l] += 1;
            for (j, v) in p.iter().enumerate() {
                sums[(l, j)] += v;
            }
        }
        let mut next = sums;
        for (j, &cnt) in counts.iter().enumerate() {
            if cnt == 0 {
                // move the empty centre to the point worst served so far
                let far = (0..x.n_rows())
                    .max_by(|&a, &b| d2[a].total_cmp(&d2[b]).then(b.cmp(&a)))
                    .expect("x is nonempty");
                for c in 0..x.n_cols() {
                    next[(j, c)] = x[(far, c)];
                }
                d2[far] = 0.0;
                reseeded += 1;
            } else {
                for c in 0..x.n_cols() {
                    next[(j, c)] /= cnt as f64;
                }
            }
        }
        let (l2, dd) = assign(x, &next);
        let w2: f64 = dd.iter().sum();
        let done = (w - w2).abs() < eps;
        centres = next;
        labels = l2;
        d2 = dd;
        w = w2;
        if done {
            converged = true;
            break;
        }
    }
    Ok(ClusteringResult {
        centres,
        labels,
        wcss: w,
        iterations,
        converged,
        reseeded,
        restarts_run: 1,
        best_seed: None,
        restart_wcss: vec![w],
    })
}

/// Indexes of the first occurrence of every distinct row.
fn distinct_rows(x: &Matrix) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..x.n_rows()).collect();
    let cmp = |a: &usize, b: &usize| {
        x.row(*a)
            .iter()
            .zip(x.row(*b))
            .map(|(u, v)| u.total_cmp(v))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    };
    idx.sort_by(|a, b| cmp(a, b).then(a.cmp(b)));
    idx.dedup_by(|a, b| cmp(a, b).is_eq());
    idx.sort_unstable();
    idx
}

/// `k` distinct data points drawn without replacement.
pub fn kmeans_init(x: &Matrix, k: usize, rng: &mut Rng) -> Result<Matrix> {
    let distinct = distinct_rows(x);
    if k > distinct.len() {
        return Err(Error::Invalid(format!(
            "k = {k} exceeds {} distinct points",
            distinct.len()
        )));
    }
    let pick: Vec<usize> = rng
        .sample_indices(distinct.len(), k)
        .into_iter()
        .map(|i| distinct[i])
        .collect();
    Ok(x.select_rows(&pick))
}

pub const KMEANS_EPS: f64 = 1e-9;
pub const KMEANS_MAX_ITER: usize = 1000;

/// Best of `n_restarts` Lloyd runs. Restart `i` is initialised from
/// `Rng::new(seed + i)`; the smallest WCSS wins, ties to the lowest
/// restart index. Runs in parallel with the same result as a serial loop.
pub fn kmeans_restarts(x: &Matrix, k: usize, n_restarts: usize, seed: u64) -> Result<ClusteringResult> {
    if n_restarts == 0 {
        return Err(Error::Invalid("need at least one restart".into()));
    }
    if k < 1 {
        return Err(Error::Invalid("k must be positive".into()));
    }
    let runs: Vec<ClusteringResult> = (0..n_restarts as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = Rng::new(seed.wrapping_add(i));
            let init = kmeans_init(x, k, &mut rng)?;
            kmeans_lloyd(x, &init, KMEANS_EPS, KMEANS_MAX_ITER)
        })
        .collect::<Result<_>>()?;
    let all: Vec<f64> = runs.iter().map(|r| r.wcss).collect();
    let (best_i, _) = all
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(&b.0)))
        .expect("at least one run");
    let mut best = runs.into_iter().nth(best_i).expect("index in range");
    best.restarts_run = n_restarts;
    best.best_seed = Some(seed.wrapping_add(best_i as u64));
    best.restart_wcss = all;
    Ok(best)
}

/// Flags values outside `[Q1 - 1.5 IQR, Q3 + 1.5 IQR]`.
pub fn outliers_iqr(v: &[f64]) -> Result<Vec<bool>> {
    let q = univariate::quantiles(v, &[0.25, 0.75])?;
    let iqr = q[1] - q[0];
    let (lo, hi) = (q[0] - 1.5 * iqr, q[1] + 1.5 * iqr);
    Ok(v.iter().map(|&x| x < lo || x > hi).collect())
}

/// Number of points within distance `r` of every point, itself included.
pub fn neighbour_counts(x: &Matrix, r: f64) -> Result<Vec<usize>> {
    let tree = KdTree::new(x)?;
    x.rows().map(|q| tree.ball(q, r).map(|b| b.len())).collect()
}

/// Rectangular-kernel density `|B_r(z)| / (2rn)` at every observation.
pub fn density_1d(v: &[f64], r: f64) -> Result<Vec<f64>> {
    if !(r > 0.0) {
        return Err(Error::Invalid(format!("radius {r} must be positive")));
    }
    let n = v.len() as f64;
    let counts = neighbour_counts(&Matrix::column_vector(v), r)?;
    Ok(counts.iter().map(|&c| c as f64 / (2.0 * r * n)).collect())
}

/// Flags observations whose density estimate is below `threshold`.
pub fn outliers_low_density(v: &[f64], r: f64, threshold: f64) -> Result<Vec<bool>> {
    Ok(density_1d(v, r)?.into_iter().map(|d| d < threshold).collect())
}

/// Flags points with no other point within distance `r`.
pub fn outliers_isolated(x: &Matrix, r: f64) -> Result<Vec<bool>> {
    if !(r > 0.0) {
        return Err(Error::Invalid(format!("radius {r} must be positive")));
    }
    Ok(neighbour_counts(x, r)?.into_iter().map(|c| c == 1).collect())
}
