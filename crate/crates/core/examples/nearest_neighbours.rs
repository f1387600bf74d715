//! K-d tree queries and a k-nearest-neighbour classifier.
//!
//! With the wine quality data cached, the classifier is trained on the
//! standardized alcohol and sugar content; otherwise two synthetic classes
//! are used.

use wrangle::distributions::DistSpec;
use wrangle::spatial::{classification_metrics, knn_classify, KdTree, TiePolicy};
use wrangle::tabular::train_test_split;
use wrangle::{datasets, Matrix, Rng};

fn synthetic() -> wrangle::Result<(Matrix, Vec<usize>, Matrix, Vec<usize>)> {
    let mut rng = Rng::new(9);
    let n = 400;
    let noise = DistSpec::normal(0.0, 1.0)?.sample(2 * n, &mut rng);
    let y: Vec<usize> = (0..n).map(|i| i % 2).collect();
    let rows: Vec<[f64; 2]> = (0..n)
        .map(|i| [noise[2 * i] + 1.5 * y[i] as f64, noise[2 * i + 1] - y[i] as f64])
        .collect();
    let x = Matrix::from_rows(&rows)?;
    let (train, test) = train_test_split(n, 100, &mut rng)?;
    let pick = |idx: &[usize]| idx.iter().map(|&i| y[i]).collect::<Vec<_>>();
    Ok((x.select_rows(&train), pick(&train), x.select_rows(&test), pick(&test)))
}

fn standardize(train: &Matrix, other: &Matrix) -> Matrix {
    let (m, s) = (train.column_means(), train.column_stds());
    let mut out = other.clone();
    for i in 0..out.n_rows() {
        for j in 0..out.n_cols() {
            out[(i, j)] = (out[(i, j)] - m[j]) / s[j];
        }
    }
    out
}

fn main() -> wrangle::Result<()> {
    let (x_train, y_train, x_test, y_test) = match (datasets::wine("wine_train"), datasets::wine("wine_test")) {
        (Ok((a, b)), Ok((c, d))) => (a, b, c, d),
        _ => synthetic()?,
    };
    let (z_train, z_test) = (standardize(&x_train, &x_train), standardize(&x_train, &x_test));

    let tree = KdTree::new(&z_train)?;
    let q = z_test.row(0);
    println!("3 nearest to the first test point:");
    for (i, d) in tree.knn(q, 3)? {
        println!("  #{i:<5} at {d:.4}, label {}", y_train[i]);
    }
    println!("{} training points within 0.25", tree.ball(q, 0.25)?.len());

    for k in [1, 5, 15] {
        let pred = knn_classify(&z_train, &y_train, &z_test, k, TiePolicy::LowestLabel)?;
        let m = classification_metrics(&y_test, &pred)?;
        println!(
            "k = {k:>2}: accuracy {:.3}, F1 {:?}",
            m.accuracy,
            m.f1.map(|f| (f * 1000.0).round() / 1000.0)
        );
    }
    Ok(())
}
