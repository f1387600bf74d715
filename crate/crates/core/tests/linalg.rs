use proptest::prelude::*;
use wrangle::linalg::{condition_number, pca, svd_compact, Preprocess, SVD_DEFAULT_TOL};
use wrangle::{Matrix, Rng};

fn random(n: usize, m: usize, seed: u64) -> Matrix {
    let mut rng = Rng::new(seed);
    Matrix::new(n, m, (0..n * m).map(|_| rng.uniform() * 20.0 - 10.0).collect()).unwrap()
}

fn off_identity(a: &Matrix) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..a.n_rows() {
        for j in 0..a.n_cols() {
            worst = worst.max((a[(i, j)] - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    worst
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn svd_factors(n in 1usize..200, m in 1usize..20, seed in any::<u64>()) {
        let x = random(n, m, seed);
        let s = svd_compact(&x, SVD_DEFAULT_TOL).unwrap();
        prop_assert!(s.s.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(off_identity(&s.u.transpose().matmul(&s.u).unwrap()) <= 1e-10);
        prop_assert!(off_identity(&s.vt.matmul(&s.vt.transpose()).unwrap()) <= 1e-10);
        let err = s.reconstruct().sub(&x).unwrap().frobenius_norm() / x.frobenius_norm();
        prop_assert!(err <= 1e-9);
        prop_assert_eq!(svd_compact(&x, SVD_DEFAULT_TOL).unwrap(), s);
    }

    #[test]
    fn pca_scores_are_uncorrelated(n in 3usize..150, m in 1usize..8, seed in any::<u64>(), standardize in any::<bool>()) {
        let x = random(n, m, seed);
        let how = if standardize { Preprocess::Standardize } else { Preprocess::Center };
        let p = pca(&x, how).unwrap();
        let g = p.scores.transpose().matmul(&p.scores).unwrap();
        let total: f64 = (0..g.n_rows()).map(|i| g[(i, i)]).sum();
        for i in 0..g.n_rows() {
            for j in 0..g.n_cols() {
                if i != j {
                    prop_assert!(g[(i, j)].abs() <= 1e-8 * total);
                }
            }
        }
        let vars: Vec<f64> = (0..g.n_rows()).map(|i| g[(i, i)]).collect();
        prop_assert!(vars.windows(2).all(|w| w[0] >= w[1] * (1.0 - 1e-12)));
        prop_assert!(p.cumvar_ratio.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!((p.cumvar_ratio.last().unwrap() - 1.0).abs() <= 1e-12);
        for r in p.loadings.rows() {
            let big = r.iter().copied().fold(0.0f64, |a, v| if v.abs() > a.abs() { v } else { a });
            prop_assert!(big > 0.0);
        }
    }
}

#[test]
fn ill_conditioned_columns() {
    let x = Matrix::from_columns(&[vec![1.0, 1.0, 1.0], vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]]).unwrap();
    assert!(condition_number(&x).unwrap() > 1e15);
    let id = Matrix::identity(4);
    assert_eq!(condition_number(&id).unwrap(), 1.0);
}

#[test]
fn csv_round_trip() {
    let x = random(5, 3, 9);
    assert_eq!(Matrix::from_csv(&x.to_csv()).unwrap(), x);
    assert!(Matrix::from_csv("1,2\n3\n").is_err());
}
