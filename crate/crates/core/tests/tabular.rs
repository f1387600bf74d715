use proptest::prelude::*;
use wrangle::categorical::factorize;
use wrangle::tabular::{group_split, impute, read_csv, Column, CsvOptions, Impute, MissingKey, Table, MISSING_LEVEL};
use wrangle::Rng;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        -1e6f64..1e6,
        (-300i32..300).prop_map(|e| 1.234_567_890_123_4 * 10f64.powi(e)),
        Just(0.0),
        Just(-0.5),
    ]
}

fn table() -> impl Strategy<Value = Table> {
    (1usize..30).prop_flat_map(|n| {
        (
            prop::collection::vec(prop::option::weighted(0.8, finite()), n),
            prop::collection::vec(prop::option::weighted(0.8, "[a-z ,\"]{1,6}"), n),
        )
            .prop_map(|(x, s)| {
                // a text column made only of numeric-looking cells would be
                // read back as numbers, so pin one cell to a word
                let mut s = s;
                s[0] = Some("label".into());
                Table::new(vec![("x".into(), Column::Numeric(x)), ("name".into(), Column::Text(s))]).unwrap()
            })
    })
}

proptest! {
    #[test]
    fn csv_round_trip_is_a_fixed_point(t in table()) {
        let text = t.to_csv();
        let back = read_csv(text.as_bytes(), &CsvOptions::default()).unwrap();
        // missing and whitespace-only text cells cannot be told apart once written
        let norm = |t: &Table| -> Vec<Option<String>> {
            t.labels("name").unwrap().into_iter().map(|c| c.filter(|s| !s.trim().is_empty())).collect()
        };
        prop_assert_eq!(back.numeric("x").unwrap(), t.numeric("x").unwrap());
        prop_assert_eq!(norm(&back), norm(&t));
        prop_assert_eq!(read_csv(back.to_csv().as_bytes(), &CsvOptions::default()).unwrap().to_csv(), back.to_csv());
    }

    #[test]
    fn group_split_partitions_rows(keys in prop::collection::vec(prop::option::weighted(0.85, 0u8..5), 1..60)) {
        let n = keys.len();
        let t = Table::new(vec![
            ("k".into(), Column::Numeric(keys.iter().map(|k| k.map(f64::from)).collect())),
            ("row".into(), Column::Numeric((0..n).map(|i| Some(i as f64)).collect())),
        ]).unwrap();
        let groups = group_split(&t, "k", MissingKey::Group).unwrap();
        prop_assert_eq!(groups.iter().map(|(_, g)| g.n_rows()).sum::<usize>(), n);
        for (label, g) in &groups {
            let rows = g.numeric_complete("row").unwrap();
            prop_assert!(rows.windows(2).all(|w| w[0] < w[1]), "group {} lost row order", label);
        }
        let has_missing = keys.iter().any(Option::is_none);
        prop_assert_eq!(groups.last().map(|(l, _)| l == MISSING_LEVEL).unwrap_or(false), has_missing);
        prop_assert_eq!(group_split(&t, "k", MissingKey::Error).is_err(), has_missing);
    }

    #[test]
    fn mean_imputation_keeps_the_mean(v in prop::collection::vec(prop::option::weighted(0.7, -1e3f64..1e3), 1..80)) {
        prop_assume!(v.iter().any(Option::is_some));
        let observed: Vec<f64> = v.iter().flatten().copied().collect();
        let m = observed.iter().sum::<f64>() / observed.len() as f64;
        let filled = impute(&v, &Impute::Mean).unwrap();
        let m2 = filled.iter().sum::<f64>() / filled.len() as f64;
        prop_assert!((m2 - m).abs() <= 1e-12 * m.abs().max(1.0));
    }
}

#[test]
fn comments_quotes_and_missing_tokens() {
    let text = "# header comment\nname,score\n\"Smith, J\",1.5\nNA,NaN\n\"say \"\"hi\"\"\", 2e3 \n";
    let t = read_csv(text.as_bytes(), &CsvOptions::default()).unwrap();
    assert_eq!(t.n_rows(), 3);
    assert_eq!(t.numeric("score").unwrap(), vec![Some(1.5), None, Some(2000.0)]);
    assert_eq!(
        t.labels("name").unwrap(),
        vec![Some("Smith, J".into()), None, Some("say \"hi\"".into())]
    );
}

#[test]
fn group_mean_imputation() {
    let g = factorize(&["a", "b", "a", "b", "a"]);
    let v = [Some(1.0), Some(10.0), None, None, Some(3.0)];
    assert_eq!(
        impute(&v, &Impute::GroupMean(&g)).unwrap(),
        vec![1.0, 10.0, 2.0, 10.0, 3.0]
    );
}

#[test]
fn train_test_split_is_a_seeded_partition() {
    let (tr, te) = wrangle::tabular::train_test_split(50, 10, &mut Rng::new(3)).unwrap();
    let (tr2, te2) = wrangle::tabular::train_test_split(50, 10, &mut Rng::new(3)).unwrap();
    assert_eq!((tr.len(), te.len()), (40, 10));
    assert_eq!((&tr, &te), (&tr2, &te2));
    let mut all: Vec<usize> = tr.into_iter().chain(te).collect();
    all.sort_unstable();
    assert_eq!(all, (0..50).collect::<Vec<_>>());
}
