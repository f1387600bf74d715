//! Kolmogorov-Smirnov and chi-squared tests.

use wrangle::categorical::ContingencyTable;
use wrangle::distributions::DistSpec;
use wrangle::hypothesis::{chisq_gof, chisq_independence, chisq_two_sample, cramers_v, ks_two_sample, IndependenceDof};
use wrangle::Rng;

fn main() -> wrangle::Result<()> {
    // a two-candidate poll against a 50:50 split
    let t = chisq_gof(&[516, 501], &[0.5, 0.5], 0.05)?;
    println!("poll: {}", t.to_json());

    let mut rng = Rng::new(3);
    let a = DistSpec::normal(0.0, 1.0)?.sample(300, &mut rng);
    let b = DistSpec::normal(0.3, 1.0)?.sample(250, &mut rng);
    println!("ks two-sample: {}", ks_two_sample(&a, &b, 0.01)?.to_json());

    let t = chisq_two_sample(&[30, 41, 19, 10], &[22, 48, 25, 5], 0.05)?;
    println!("category shares: {}", t.to_json());

    let table = ContingencyTable::new(
        vec!["smoker".into(), "non-smoker".into()],
        vec!["low".into(), "mid".into(), "high".into()],
        vec![vec![40, 32, 28], vec![70, 45, 15]],
    )?;
    let t = chisq_independence(&table, 0.05, IndependenceDof::Classical)?;
    println!("independence: {}  V = {:.3}", t.to_json(), cramers_v(&table)?);
    Ok(())
}
