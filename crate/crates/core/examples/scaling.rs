//! Rescaling a vector several ways, then binning it.

use wrangle::univariate::{histogram, scale, Bins, Scale};

fn main() -> wrangle::Result<()> {
    let x = [-3.0, 0.5, 1.0, 2.5, 4.0, 11.0, 1.5];

    for (name, m) in [
        ("z-scores", Scale::Standardize),
        ("robust", Scale::RobustStandardize),
        ("min-max", Scale::MinMax),
        ("clipped", Scale::Clip { lo: 0.0, hi: 3.0 }),
        ("unit L2", Scale::NormalizeL2),
    ] {
        println!("{name:>9}: {:.3?}", scale(&x, m)?);
    }

    let h = histogram(&x, &Bins::EqualWidth(4))?;
    print!("{}", h.to_csv());

    // log-spaced bins suit heavy right tails
    let incomes = [9e3, 1.2e4, 2.1e4, 2.4e4, 3.3e4, 5.5e4, 2.0e5, 1.1e6];
    let h = histogram(&incomes, &Bins::Geometric(3))?;
    for (w, c) in h.edges.windows(2).zip(&h.counts) {
        println!("[{:>9.0}, {:>9.0}) {}", w[0], w[1], c);
    }
    Ok(())
}
