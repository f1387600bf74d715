//! Reading a CSV with missing values, splitting it into groups and imputing.

use wrangle::categorical::factorize;
use wrangle::tabular::{drop_missing, group_split, impute, read_csv, CsvOptions, DropMode, Impute, MissingKey};
use wrangle::univariate::mean;

const CSV: &str = "\
# runners, one per row
sex,age,time
f,34,215.5
m,41,198.0
m,,203.25
f,29,NA
\"m\",57,241.0
,38,230.0
f,45,226.5
";

fn main() -> wrangle::Result<()> {
    let t = read_csv(CSV.as_bytes(), &CsvOptions::default())?;
    println!("{} rows, columns {:?}", t.n_rows(), t.names());

    for (level, g) in group_split(&t, "sex", MissingKey::Group)? {
        let times = g.numeric("time")?.into_iter().flatten().collect::<Vec<_>>();
        println!("{level:>10}: {} rows, mean time {:?}", g.n_rows(), mean(&times).ok());
    }

    let complete = drop_missing(&t, DropMode::AnyRow);
    println!("complete rows:\n{}", complete.to_csv());

    let age = t.numeric("age")?;
    println!("age, mean-imputed: {:?}", impute(&age, &Impute::Mean)?);
    let sex: Vec<String> = t.labels("sex")?.into_iter().map(Option::unwrap_or_default).collect();
    let groups = factorize(&sex);
    println!(
        "time, group-imputed: {:?}",
        impute(&t.numeric("time")?, &Impute::GroupMean(&groups))?
    );
    Ok(())
}
