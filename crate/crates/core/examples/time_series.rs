//! Dated series: differences, moving averages, gap filling, detrending.

use wrangle::datasets;
use wrangle::timeseries::{add_days, detrend, diff_days, fill, format_date, rolling, FillMethod, RollingStat, Series};

fn main() -> wrangle::Result<()> {
    let temps = match datasets::spokane() {
        Ok(s) => s,
        Err(_) => {
            let start = wrangle::timeseries::parse_date("2021-01-01")?;
            let v = (0..365)
                .map(|d| Some(8.0 - 12.0 * (2.0 * std::f64::consts::PI * (f64::from(d) + 10.0) / 365.0).cos()))
                .collect();
            Series::with_index(v, (start..start + 365).collect())?
        }
    };
    let n = temps.len();
    let tail = Series::with_index(
        temps.values[n - 7..].to_vec(),
        temps.index.as_ref().map(|ix| ix[n - 7..].to_vec()).unwrap(),
    )?;
    print!("{}", tail.to_csv()?);

    let deltas = tail.diff();
    println!("day-to-day: {:?}", deltas.values);
    println!("3-day mean: {:?}", rolling(&tail, 3, RollingStat::Mean, true)?.values);

    let (trend, resid) = detrend(&tail, 3)?;
    println!("trend {:?}\nresidual {:?}", trend.values, resid.values);

    let gappy = Series::new(vec![Some(41.0), None, None, Some(50.0), Some(47.0), None]);
    for m in [FillMethod::Ffill, FillMethod::Bfill, FillMethod::Linear] {
        match fill(&gappy, m) {
            Ok(s) => println!("{m:?}: {:?}", s.values),
            Err(e) => println!("{m:?}: {e}"),
        }
    }

    let last = format_date(*temps.index.as_ref().unwrap().last().unwrap())?;
    println!(
        "last day {last}, next {}, {} days since 1970",
        add_days(&last, 1)?,
        diff_days("1970-01-01", &last)?
    );
    Ok(())
}
