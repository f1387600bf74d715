use proptest::prelude::*;
use wrangle::categorical::ContingencyTable;
use wrangle::distributions::DistSpec;
use wrangle::hypothesis::{
    chisq_gof, chisq_independence, chisq_two_sample, cramers_v, ks_critical, ks_one_sample, ks_statistic,
    ks_two_sample, IndependenceDof, KsMethod,
};
use wrangle::special::{chi2_cdf, chi2_ppf};
use wrangle::Rng;

/// Regularised lower incomplete gamma by plain series summation in log
/// space; slow but independent of the library's series/continued-fraction
/// split.
fn chi2_cdf_oracle(x: f64, k: f64) -> f64 {
    let (a, z) = (k / 2.0, x / 2.0);
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut n = 1.0;
    while term > sum * 1e-17 {
        term *= z / (a + n);
        sum += term;
        n += 1.0;
    }
    (a * z.ln() - z - ln_gamma(a)).exp() * sum
}

fn ln_gamma(a: f64) -> f64 {
    libm::lgamma(a)
}

proptest! {
    #[test]
    fn ks_statistic_is_invariant_under_the_cdf_transform(seed in any::<u64>(), n in 1usize..200) {
        let d = DistSpec::log_normal(1.0, 0.8).unwrap();
        let x = d.sample(n, &mut Rng::new(seed));
        let u: Vec<f64> = x.iter().map(|&v| d.cdf(v)).collect();
        let a = ks_statistic(&x, |v| d.cdf(v)).unwrap();
        let b = ks_statistic(&u, |v| v.clamp(0.0, 1.0)).unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn gof_ignores_category_order(counts in prop::collection::vec(1u64..500, 2..8), seed in any::<u64>()) {
        let l = counts.len();
        let p = vec![1.0 / l as f64; l];
        let perm = Rng::new(seed).permutation(l);
        let shuffled: Vec<u64> = perm.iter().map(|&i| counts[i]).collect();
        let a = chisq_gof(&counts, &p, 0.01).unwrap();
        let b = chisq_gof(&shuffled, &p, 0.01).unwrap();
        prop_assert!((a.statistic - b.statistic).abs() <= 1e-9 * a.statistic.max(1.0));
    }

    #[test]
    fn cramers_v_is_transpose_symmetric(rows in 2usize..6, cols in 2usize..6, seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let counts: Vec<Vec<u64>> = (0..rows).map(|_| (0..cols).map(|_| 1 + rng.below(200) as u64).collect()).collect();
        let t = ContingencyTable::from_counts(counts).unwrap();
        let (a, b) = (cramers_v(&t).unwrap(), cramers_v(&t.transpose()).unwrap());
        prop_assert!((a - b).abs() <= 1e-12);
        prop_assert!((0.0..=1.0).contains(&a));
    }

    #[test]
    fn chi2_ppf_inverts_an_independent_cdf(p in 0.001f64..0.999, dof in 1u32..40) {
        let k = f64::from(dof);
        let x = chi2_ppf(p, k).unwrap();
        prop_assert!((chi2_cdf_oracle(x, k) - p).abs() <= 1e-9);
        prop_assert!((chi2_cdf(x, k).unwrap() - p).abs() <= 1e-12);
    }

    #[test]
    fn reject_iff_statistic_reaches_critical(seed in any::<u64>(), shift in 0.0f64..1.0) {
        let mut rng = Rng::new(seed);
        let x = DistSpec::normal(shift, 1.0).unwrap().sample(60, &mut rng);
        let y = DistSpec::normal(0.0, 1.0).unwrap().sample(80, &mut rng);
        for t in [
            ks_one_sample(&x, &DistSpec::normal(0.0, 1.0).unwrap(), 0.05, KsMethod::Exact).unwrap(),
            ks_two_sample(&x, &y, 0.05).unwrap(),
        ] {
            prop_assert_eq!(t.reject, t.statistic >= t.critical);
        }
    }
}

#[test]
fn one_sample_rejection_rate_is_calibrated() {
    let null = DistSpec::normal(0.0, 1.0).unwrap();
    let k = ks_critical(100, 0.001, KsMethod::Exact).unwrap();
    let mut rng = Rng::new(2024);
    let rejected = (0..2000)
        .filter(|_| ks_statistic(&null.sample(100, &mut rng), |x| null.cdf(x)).unwrap() >= k)
        .count();
    assert!(rejected <= 10, "{rejected} of 2000 rejected");
}

#[test]
fn asymptotic_critical_value_is_close_for_large_n() {
    for n in [1000, 2000, 5000] {
        let a = ks_critical(n, 0.001, KsMethod::Asymptotic).unwrap();
        let e = ks_critical(n, 0.001, KsMethod::Exact).unwrap();
        assert!(((a - e) / e).abs() <= 0.005, "n={n}: {a} vs {e}");
    }
}

#[test]
fn two_sample_and_independence_shapes() {
    assert!(chisq_two_sample(&[1, 2], &[1, 2, 3], 0.01).is_err());
    assert!(chisq_gof(&[5, 5], &[0.6, 0.6], 0.01).is_err());
    let t = ContingencyTable::from_counts(vec![vec![10, 20, 30], vec![20, 20, 20]]).unwrap();
    let book = chisq_independence(&t, 0.05, IndependenceDof::Book).unwrap();
    let classical = chisq_independence(&t, 0.05, IndependenceDof::Classical).unwrap();
    assert_eq!((book.dof, classical.dof), (4.0, 2.0));
    assert_eq!(book.statistic, classical.statistic);
    assert!((classical.critical - 5.991464547107979).abs() < 1e-9);
}
