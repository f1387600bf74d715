use proptest::prelude::*;
use wrangle::distributions::DistSpec;
use wrangle::timeseries::{
    add_days, detrend, diff_days, fill, format_date, parse_date, rolling, FillMethod, RollingStat, Series,
};
use wrangle::univariate::{cumsum, histogram, mean, Bins};
use wrangle::Rng;

proptest! {
    #[test]
    fn deltas_rebuild_the_series(v in prop::collection::vec(-50.0f64..50.0, 2..100)) {
        let d = Series::from_values(&v).diff();
        let mut rebuilt = vec![v[0]];
        rebuilt.extend(cumsum(&d.values[1..].iter().map(|x| x.unwrap()).collect::<Vec<_>>()).iter().map(|c| v[0] + c));
        for (a, b) in rebuilt.iter().zip(&v) {
            prop_assert!((a - b).abs() <= 1e-9);
        }
    }

    #[test]
    fn rolling_mean_of_a_constant(c in -1e3f64..1e3, n in 1usize..60, k in 1usize..10, centered in any::<bool>()) {
        prop_assume!(k <= n);
        let r = rolling(&Series::from_values(&vec![c; n]), k, RollingStat::Mean, centered).unwrap();
        prop_assert_eq!(r.values.iter().flatten().count(), n - k + 1);
        for v in r.values.iter().flatten() {
            prop_assert!((v - c).abs() <= 1e-12 * c.abs().max(1.0));
        }
    }

    #[test]
    fn linear_fill_is_exact_on_lines(a in -10.0f64..10.0, b in -10.0f64..10.0, gaps in prop::collection::vec(any::<bool>(), 3..50)) {
        let n = gaps.len();
        let truth: Vec<f64> = (0..n).map(|i| a + b * i as f64).collect();
        let s = Series::new((0..n).map(|i| (i == 0 || i == n - 1 || !gaps[i]).then_some(truth[i])).collect());
        let f = fill(&s, FillMethod::Linear).unwrap();
        for (got, want) in f.values.iter().zip(&truth) {
            prop_assert!((got.unwrap() - want).abs() <= 1e-9);
        }
    }

    #[test]
    fn dates_round_trip(d in -141_000i64..2_900_000) {
        let s = format_date(d).unwrap();
        prop_assert_eq!(parse_date(&s).unwrap(), d);
    }
}

#[test]
fn exponential_arrivals_per_hour() {
    // one event every 12 seconds on average, so about 300 per hour
    let deltas = DistSpec::exponential(12.0)
        .unwrap()
        .sample(1200 * 100, &mut Rng::new(16));
    let times = cumsum(&deltas);
    let hours = (times.last().unwrap() / 3600.0).floor() as usize;
    let edges: Vec<f64> = (0..=hours).map(|h| h as f64 * 3600.0).collect();
    let counts = histogram(&times, &Bins::Edges(edges)).unwrap().counts;
    let m = mean(&counts.iter().map(|&c| c as f64).collect::<Vec<_>>()).unwrap();
    assert!((270.0..=330.0).contains(&m), "{m}");
}

#[test]
fn calendar_helpers() {
    assert_eq!(parse_date("1970-01-01").unwrap(), 0);
    assert_eq!(add_days("2021-12-31", 1).unwrap(), "2022-01-01");
    assert_eq!(diff_days("1889-08-01", "2021-12-31").unwrap(), 48_364);
    assert!(parse_date("2021-02-30").is_err());
}

#[test]
fn detrend_splits_trend_and_residual() {
    let s = Series::from_values(&[1.0, 2.0, 6.0, 4.0, 5.0]);
    let (trend, resid) = detrend(&s, 3).unwrap();
    assert_eq!(trend.values, vec![None, Some(3.0), Some(4.0), Some(5.0), None]);
    assert_eq!(resid.values, vec![None, Some(-1.0), Some(2.0), Some(-1.0), None]);
}

#[test]
fn indexed_series_export() {
    let start = parse_date("2021-12-30").unwrap();
    let s = Series::with_index(vec![Some(1.5), None], vec![start, start + 1]).unwrap();
    assert_eq!(s.to_csv().unwrap(), "date,value\n2021-12-30,1.5\n2021-12-31,\n");
    assert!(Series::with_index(vec![Some(1.0), Some(2.0)], vec![3, 3]).is_err());
}
