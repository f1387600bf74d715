//! Principal components of a correlated point cloud.

use wrangle::distributions::DistSpec;
use wrangle::linalg::{pca, Preprocess};
use wrangle::{Matrix, Rng};

fn main() -> wrangle::Result<()> {
    let z = DistSpec::normal(0.0, 1.0)?.sample(3 * 500, &mut Rng::new(5));
    let rows: Vec<[f64; 3]> = z
        .chunks(3)
        .map(|c| [c[0], 0.8 * c[0] + 0.2 * c[1], -0.5 * c[0] + 0.1 * c[2]])
        .collect();
    let x = Matrix::from_rows(&rows)?;

    let p = pca(&x, Preprocess::Standardize)?;
    println!("component stds: {:.4?}", p.component_stds());
    println!("cumulative variance: {:.4?}", p.cumvar_ratio);
    println!("loadings:");
    for row in p.loadings.rows() {
        println!("  {row:+.3?}");
    }
    // the first two scores keep nearly all the information
    println!("first point in PC space: {:.3?}", &p.scores.row(0)[..2]);
    Ok(())
}
