//! k-means clustering with several random restarts.

use wrangle::distributions::DistSpec;
use wrangle::spatial::kmeans_restarts;
use wrangle::{datasets, Matrix, Rng};

fn main() -> wrangle::Result<()> {
    let x = match datasets::blobs1() {
        Ok(x) => x,
        Err(_) => {
            let z = DistSpec::normal(0.0, 0.5)?.sample(2 * 300, &mut Rng::new(2));
            let rows: Vec<[f64; 2]> = z
                .chunks(2)
                .enumerate()
                .map(|(i, c)| {
                    if i < 200 {
                        [c[0], c[1]]
                    } else {
                        [c[0] + 3.0, c[1] + 2.0]
                    }
                })
                .collect();
            Matrix::from_rows(&rows)?
        }
    };

    for k in 1..=4 {
        let r = kmeans_restarts(&x, k, 10, 0)?;
        println!("k = {k}: WCSS {:>10.3}, sizes {:?}", r.wcss, r.cluster_sizes());
    }

    let r = kmeans_restarts(&x, 2, 10, 0)?;
    println!("best restart seed {:?}, {} iterations", r.best_seed, r.iterations);
    for c in r.centres.rows() {
        println!("  centre {c:.4?}");
    }
    Ok(())
}
