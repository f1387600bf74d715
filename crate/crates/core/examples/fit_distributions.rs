//! Fits a few parametric families to income-like data and compares them
//! with a KS statistic and Q-Q pairs.

use wrangle::distributions::{fit, qq_pairs, DistSpec, Family};
use wrangle::hypothesis::{ks_one_sample, KsMethod};
use wrangle::{datasets, Rng};

fn main() -> wrangle::Result<()> {
    let income = datasets::income()
        .or_else(|_| Ok::<_, wrangle::Error>(DistSpec::log_normal(10.3, 0.6)?.sample(1000, &mut Rng::new(7))))?;

    for family in [
        Family::Normal,
        Family::LogNormal,
        Family::Pareto { s: None },
        Family::Exponential,
    ] {
        let d = fit(family, &income)?;
        let t = ks_one_sample(&income, &d, 0.001, KsMethod::Exact)?;
        println!(
            "{d:?}\n    D = {:.4}, K = {:.4}, reject = {}",
            t.statistic, t.critical, t.reject
        );
    }

    let best = fit(Family::LogNormal, &income)?;
    let qq = qq_pairs(&income, &best)?;
    for &(theory, sample) in qq.iter().step_by(qq.len() / 5).take(5) {
        println!("{theory:>10.0} {sample:>10.0}");
    }
    println!("P(income > 100k) = {:.4}", best.sf(1e5));
    Ok(())
}
