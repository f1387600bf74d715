//! Location, dispersion and shape of one numeric sample.
//!
//! Uses the adult female heights when they are cached, a simulated sample
//! with similar parameters otherwise.

use wrangle::distributions::DistSpec;
use wrangle::univariate::{aggregate, quantiles, Stat};
use wrangle::{datasets, Rng};

fn main() -> wrangle::Result<()> {
    let heights = match datasets::heights() {
        Ok(v) => v,
        Err(_) => {
            eprintln!("heights not cached, simulating");
            DistSpec::normal(160.13, 7.06)?.sample(4221, &mut Rng::new(1))
        }
    };

    let stats = [
        ("mean", Stat::Mean),
        ("median", Stat::Median),
        ("std", Stat::Std { ddof: 0 }),
        ("iqr", Stat::Iqr),
        ("skewness", Stat::Skewness),
        ("trimmed(100)", Stat::TrimmedMean(100)),
        ("gini", Stat::Gini),
    ];
    for (name, s) in stats {
        println!("{name:>12}: {:.4}", aggregate(&heights, s)?);
    }

    let five = quantiles(&heights, &[0.0, 0.25, 0.5, 0.75, 1.0])?;
    println!("five-number summary: {five:.2?}");
    Ok(())
}
