//! Factors, one-hot encoding, binning and contingency tables.

use wrangle::categorical::{
    bin_codes, crosstab, factorize, mode, one_hot, ordinal_median, recode, value_counts, Factor,
};

fn main() -> wrangle::Result<()> {
    let sex = factorize(&["f", "m", "m", "f", "f", "m", "f", "f"]);
    let age = [24.0, 37.0, 52.0, 61.0, 18.0, 45.0, 33.0, 70.0];

    println!("levels {:?}, codes {:?}", sex.levels(), sex.codes());
    let (levels, counts) = value_counts(&sex);
    println!("counts {levels:?} {counts:?}, mode {}", mode(&sex)?);

    let swapped = recode(&sex, &[1, 0])?;
    println!("recoded: levels {:?}, codes {:?}", swapped.levels(), swapped.codes());

    let onehot = one_hot(&sex);
    println!("one-hot row 1: {:?}", onehot.row(1));

    let band = bin_codes(&age, &[30.0, 50.0])?;
    let band = Factor::new(band, vec!["<30".into(), "30-50".into(), "50+".into()])?;
    let table = crosstab(&sex, &band)?;
    print!("{}", table.to_csv());
    println!("row sums {:?}, column sums {:?}", table.row_sums(), table.col_sums());

    let grades = Factor::with_levels(
        &["low", "high", "mid", "mid", "low"],
        vec!["low".into(), "mid".into(), "high".into()],
    )?;
    println!("median grade {:?}", ordinal_median(&grades)?);
    Ok(())
}
