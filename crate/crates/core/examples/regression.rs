//! Polynomial and logarithmic least squares, with fit diagnostics and the
//! condition number of the model matrix.

use wrangle::regression::{fit_terms, pearson, spearman, StandardizePath, Term};
use wrangle::{datasets, Rng};

fn main() -> wrangle::Result<()> {
    let (x, y) = match datasets::world() {
        Ok(t) => {
            // per capita GDP, then life expectancy
            let names = t.names();
            (t.numeric_complete(&names[0])?, t.numeric_complete(&names[1])?)
        }
        Err(_) => {
            let mut rng = Rng::new(11);
            let x: Vec<f64> = (0..150).map(|_| 500.0 + rng.uniform() * 80_000.0).collect();
            let y = x
                .iter()
                .map(|v| 35.0 + 4.5 * v.ln() + 3.0 * (rng.uniform() - 0.5))
                .collect();
            (x, y)
        }
    };
    println!(
        "n = {}, r = {:.3}, rho = {:.3}",
        x.len(),
        pearson(&x, &y)?,
        spearman(&x, &y)?
    );

    let models: [(&str, Vec<Term>); 4] = [
        ("linear", vec![Term::Const1, Term::Identity]),
        ("quadratic", (0..=2).map(Term::Power).collect()),
        ("quartic", (0..=4).map(Term::Power).collect()),
        ("log", vec![Term::Const1, Term::Log]),
    ];
    for (name, terms) in models {
        let m = fit_terms(&x, &y, &terms, StandardizePath::Auto)?;
        let d = &m.diagnostics;
        print!(
            "{name:>9}: R2 {:.3}  RMSE {:.3}  kappa {:.2e}",
            d.r2, d.rmse, m.condition_number
        );
        match m.standardized_condition_number {
            Some(k) => println!("  (standardized {k:.2e})"),
            None => println!(),
        }
    }
    Ok(())
}
