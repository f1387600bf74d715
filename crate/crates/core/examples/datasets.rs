//! Lists the datasets the library knows about and whether each one is in the
//! local cache.
//!
//! ```text
//! cargo run --example datasets
//! WRANGLE_DATA_DIR=/tmp/data cargo run --example datasets
//! ```

use wrangle::datasets::{data_dir, is_cached, MANIFEST};

fn main() {
    println!("cache: {}", data_dir().display());
    for d in MANIFEST {
        let state = if is_cached(d.name) { "cached" } else { "missing" };
        println!("{:<18} {:<8} {}", d.name, state, d.url());
    }
}
