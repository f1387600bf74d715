//! Three ways to flag unusual observations.

use wrangle::spatial::{density_1d, outliers_iqr, outliers_isolated, outliers_low_density};
use wrangle::{datasets, Matrix};

fn main() -> wrangle::Result<()> {
    let v = datasets::blobs2().unwrap_or_else(|_| {
        let mut v: Vec<f64> = (0..300).map(|i| (f64::from(i) * 0.37).sin() * 2.0).collect();
        v.extend([7.5, -6.0, 12.0]);
        v
    });

    let flagged = |f: &[bool]| {
        f.iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i)
            .collect::<Vec<_>>()
    };

    println!("IQR rule: {:?}", flagged(&outliers_iqr(&v)?));

    let d = density_1d(&v, 1.0)?;
    let cut = d.iter().copied().fold(f64::INFINITY, f64::min) * 1.5;
    println!(
        "density below {cut:.5}: {:?}",
        flagged(&outliers_low_density(&v, 1.0, cut)?)
    );

    let pts = Matrix::from_rows(&[[0.0, 0.0], [0.1, 0.2], [0.3, 0.1], [5.0, 5.0], [0.2, -0.1]])?;
    println!("isolated points: {:?}", flagged(&outliers_isolated(&pts, 1.0)?));
    Ok(())
}
