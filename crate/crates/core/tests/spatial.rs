use proptest::prelude::*;
use wrangle::spatial::{
    ball_brute, classification_metrics, kmeans_init, kmeans_lloyd, kmeans_restarts, knn_brute, knn_classify,
    knn_regress, outliers_iqr, wcss, KdTree, TiePolicy, KMEANS_EPS, KMEANS_MAX_ITER,
};
use wrangle::{Matrix, Rng};

fn cloud(n: usize, dim: usize, seed: u64) -> Matrix {
    let mut rng = Rng::new(seed);
    // a coarse grid makes distance ties common
    Matrix::new(
        n,
        dim,
        (0..n * dim).map(|_| (rng.below(21) as f64 - 10.0) / 2.0).collect(),
    )
    .unwrap()
}

proptest! {
    #[test]
    fn kd_tree_agrees_with_brute_force(n in 1usize..1000, dim in 1usize..=6, seed in any::<u64>(), k in 1usize..12, r in 0.0f64..4.0) {
        let x = cloud(n, dim, seed);
        let tree = KdTree::new(&x).unwrap();
        let q: Vec<f64> = x.row(n / 2).iter().map(|v| v + 0.25).collect();
        let k = k.min(n);
        prop_assert_eq!(tree.knn(&q, k).unwrap(), knn_brute(&x, &q, k).unwrap());
        let mut ball = tree.ball(&q, r).unwrap();
        ball.sort_unstable();
        prop_assert_eq!(ball, ball_brute(&x, &q, r));
    }

    #[test]
    fn lloyd_fixed_point(n in 10usize..200, k in 1usize..6, seed in any::<u64>()) {
        let mut rng = Rng::new(seed ^ 1);
        let x = Matrix::new(n, 2, (0..2 * n).map(|_| rng.uniform() * 10.0).collect()).unwrap();
        let init = kmeans_init(&x, k, &mut Rng::new(seed)).unwrap();
        let res = kmeans_lloyd(&x, &init, KMEANS_EPS, KMEANS_MAX_ITER).unwrap();
        let sizes = res.cluster_sizes();
        prop_assert!(sizes.iter().all(|&s| s > 0));
        prop_assert!((wcss(&x, &res.centres).unwrap() - res.wcss).abs() <= 1e-9 * res.wcss.max(1.0));
        let mut margin = f64::INFINITY;
        for (i, row) in x.rows().enumerate() {
            let d: Vec<f64> = res.centres.rows().map(|c| c.iter().zip(row).map(|(a, b)| (a - b).powi(2)).sum()).collect();
            let best = (0..d.len()).fold(0, |b, j| if d[j] < d[b] { j } else { b });
            prop_assert_eq!(res.labels[i], best);
            let second = (0..d.len()).filter(|&j| j != best).map(|j| d[j].sqrt()).fold(f64::INFINITY, f64::min);
            margin = margin.min(second - d[best].sqrt());
        }
        // a point closer than the probe step to a cluster boundary can
        // legitimately switch sides and lower the WCSS
        prop_assume!(margin > 1e-2);
        for j in 0..res.centres.n_rows() {
            for dim in 0..2 {
                for eps in [1e-3, -1e-3] {
                    let mut c = res.centres.clone();
                    c[(j, dim)] += eps;
                    prop_assert!(res.wcss <= wcss(&x, &c).unwrap() + 1e-9);
                }
            }
        }
    }

    #[test]
    fn one_nearest_neighbour_restores_training_labels(n in 1usize..100, seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let x = Matrix::new(n, 2, (0..2 * n).map(|_| rng.uniform()).collect()).unwrap();
        let y: Vec<usize> = (0..n).map(|_| rng.below(3)).collect();
        prop_assert_eq!(knn_classify(&x, &y, &x, 1, TiePolicy::LowestLabel).unwrap(), y);
    }

    #[test]
    fn metric_identities(y in prop::collection::vec(0usize..2, 1..200), seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let p: Vec<usize> = y.iter().map(|&v| if rng.uniform() < 0.7 { v } else { 1 - v }).collect();
        let m = classification_metrics(&y, &p).unwrap();
        let c = m.confusion;
        prop_assert_eq!(c.total(), y.len() as u64);
        prop_assert_eq!(m.accuracy, (c.tn + c.tp) as f64 / c.total() as f64);
        if let (Some(pr), Some(re), Some(f)) = (m.precision, m.recall, m.f1) {
            prop_assert!((f - 2.0 * pr * re / (pr + re)).abs() <= 1e-12);
        }
    }
}

#[test]
fn restarts_are_reproducible_and_keep_the_best() {
    let x = cloud(300, 3, 5);
    let a = kmeans_restarts(&x, 4, 12, 100).unwrap();
    let b = kmeans_restarts(&x, 4, 12, 100).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.restart_wcss.len(), 12);
    let min = a.restart_wcss.iter().copied().fold(f64::INFINITY, f64::min);
    assert_eq!(a.wcss, min);
    let first = a.restart_wcss.iter().position(|&w| w == min).unwrap();
    assert_eq!(a.best_seed, Some(100 + first as u64));
}

#[test]
fn knn_regression_averages_neighbours() {
    let x = Matrix::column_vector(&[0.0, 1.0, 2.0, 10.0]);
    let y = [1.0, 2.0, 3.0, 100.0];
    let q = Matrix::column_vector(&[0.9]);
    assert_eq!(knn_regress(&x, &y, &q, 3).unwrap(), vec![2.0]);
}

#[test]
fn iqr_rule() {
    let v = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 100.0, -50.0];
    let f = outliers_iqr(&v).unwrap();
    assert_eq!(f.iter().filter(|&&b| b).count(), 2);
    assert!(f[8] && f[9]);
}
