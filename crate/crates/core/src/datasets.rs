//! Locating and loading the teaching datasets from a local cache.
//!
//! Nothing is downloaded here. `scripts/fetch-data.sh` copies the files
//! into the cache directory and records their SHA-256 digests in
//! `SHA256SUMS`; every loader checks the digest before parsing.
//!
//! The cache directory is, in order of preference, `$WRANGLE_DATA_DIR`,
//! `./data`, or the `data` directory at the root of this repository.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::tabular::{read_csv, CsvOptions, Table};
use crate::timeseries::{parse_date, Series};

pub const BASE_URL: &str = "https://raw.githubusercontent.com/gagolews/teaching-data/master/";
pub const DATA_DIR_ENV: &str = "WRANGLE_DATA_DIR";
pub const CHECKSUM_FILE: &str = "SHA256SUMS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dataset {
    pub name: &'static str,
    /// Path relative to [`BASE_URL`].
    pub remote: &'static str,
}

impl Dataset {
    /// Cache file name, the last component of the remote path.
    pub fn file_name(&self) -> &'static str {
        self.remote.rsplit('/').next().unwrap_or(self.remote)
    }

    pub fn url(&self) -> String {
        format!("{BASE_URL}{}", self.remote)
    }
}

pub const MANIFEST: &[Dataset] = &[
    Dataset {
        name: "heights",
        remote: "marek/nhanes_adult_female_height_2020.txt",
    },
    Dataset {
        name: "income",
        remote: "marek/uk_income_simulated_2020.txt",
    },
    Dataset {
        name: "us_cities",
        remote: "other/us_cities_2000.txt",
    },
    Dataset {
        name: "body",
        remote: "marek/nhanes_adult_female_bmx_2020.csv",
    },
    Dataset {
        name: "nhanes",
        remote: "marek/nhanes_p_demo_bmx_2020.csv",
    },
    Dataset {
        name: "world",
        remote: "marek/world_factbook_2020_subset1.csv",
    },
    Dataset {
        name: "ssi_indicators",
        remote: "marek/ssi_2016_indicators.csv",
    },
    Dataset {
        name: "ssi_categories",
        remote: "marek/ssi_2016_categories.csv",
    },
    Dataset {
        name: "marathon",
        remote: "marek/37_pzu_warsaw_marathon_simplified.csv",
    },
    Dataset {
        name: "blobs1",
        remote: "marek/blobs1.txt",
    },
    Dataset {
        name: "blobs2",
        remote: "marek/blobs2.txt",
    },
    Dataset {
        name: "spokane",
        remote: "marek/spokane_temperature.txt",
    },
    Dataset {
        name: "air_quality_1973",
        remote: "r/air_quality_1973.csv",
    },
    Dataset {
        name: "wine_train",
        remote: "other/sweetwhitewine_train2.csv",
    },
    Dataset {
        name: "wine_test",
        remote: "other/sweetwhitewine_test2.csv",
    },
    Dataset {
        name: "sipu_unbalance",
        remote: "clustering/sipu_unbalance.csv",
    },
];

pub fn dataset(name: &str) -> Result<Dataset> {
    MANIFEST
        .iter()
        .find(|d| d.name == name)
        .copied()
        .ok_or_else(|| Error::Invalid(format!("unknown dataset `{name}`")))
}

pub fn data_dir() -> PathBuf {
    if let Some(dir) = std::env::var_os(DATA_DIR_ENV) {
        return PathBuf::from(dir);
    }
    let local = PathBuf::from("data");
    if local.is_dir() {
        return local;
    }
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Digests listed in `SHA256SUMS` (`<hex>  <file>` per line).
pub fn read_checksums(dir: &Path) -> Result<Vec<(String, String)>> {
    let text = fs::read_to_string(dir.join(CHECKSUM_FILE))
        .map_err(|e| Error::Io(format!("{}: {e}", dir.join(CHECKSUM_FILE).display())))?;
    Ok(text
        .lines()
        .filter_map(|l| {
            let mut it = l.split_whitespace();
            Some((
                it.next()?.to_ascii_lowercase(),
                it.next()?.trim_start_matches('*').to_string(),
            ))
        })
        .collect())
}

/// True when the file for `name` is present in the cache.
pub fn is_cached(name: &str) -> bool {
    dataset(name)
        .map(|d| data_dir().join(d.file_name()).is_file())
        .unwrap_or(false)
}

/// Raw bytes of a cached dataset after checking its digest.
pub fn read_verified(name: &str) -> Result<Vec<u8>> {
    let d = dataset(name)?;
    let dir = data_dir();
    let path = dir.join(d.file_name());
    let bytes = fs::read(&path).map_err(|e| {
        Error::Io(format!(
            "{}: {e} (run scripts/fetch-data.sh to populate the cache)",
            path.display()
        ))
    })?;
    let sums = read_checksums(&dir)?;
    let want = sums
        .iter()
        .find(|(_, f)| f == d.file_name())
        .map(|(h, _)| h.as_str())
        .ok_or_else(|| Error::Io(format!("{} has no entry in {CHECKSUM_FILE}", d.file_name())))?;
    let got = sha256_hex(&bytes);
    if got != want {
        return Err(Error::Io(format!(
            "{}: checksum {got} does not match {want}",
            d.file_name()
        )));
    }
    Ok(bytes)
}

pub fn load_table(name: &str) -> Result<Table> {
    read_csv(read_verified(name)?.as_slice(), &CsvOptions::default())
}

/// Whitespace-separated numbers with `#` comments, flattened row by row.
pub fn load_numbers(name: &str) -> Result<Vec<f64>> {
    let bytes = read_verified(name)?;
    parse_numbers(&String::from_utf8_lossy(&bytes))
}

fn parse_numbers(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for tok in line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
        {
            let x = tok.parse::<f64>().map_err(|_| Error::Parse {
                line: i + 1,
                msg: format!("`{tok}` is not a number"),
            })?;
            out.push(x);
        }
    }
    if out.is_empty() {
        return Err(Error::Empty);
    }
    Ok(out)
}

/// Headerless numeric matrix, one row per non-comment line.
pub fn load_matrix(name: &str) -> Result<Matrix> {
    let bytes = read_verified(name)?;
    parse_matrix(&String::from_utf8_lossy(&bytes))
}

fn parse_matrix(text: &str) -> Result<Matrix> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = parse_numbers(line).map_err(|e| match e {
            Error::Parse { msg, .. } => Error::Parse { line: i + 1, msg },
            other => other,
        })?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Empty);
    }
    Matrix::from_rows(&rows)
}

pub fn heights() -> Result<Vec<f64>> {
    load_numbers("heights")
}

pub fn income() -> Result<Vec<f64>> {
    load_numbers("income")
}

pub fn us_cities() -> Result<Vec<f64>> {
    load_numbers("us_cities")
}

/// Adult female body measurements: weight, height, arm length, leg length,
/// arm circumference, hip circumference, waist circumference.
pub fn body() -> Result<Table> {
    load_table("body")
}

/// Weights of adult participants born in the US and elsewhere, keeping
/// only rows complete in age, weight, height, BMI, gender and birthplace.
pub fn nhanes_weights_by_birthplace() -> Result<(Vec<f64>, Vec<f64>)> {
    let cols = ["RIDAGEYR", "BMXWT", "BMXHT", "BMXBMI", "RIAGENDR", "DMDBORN4"];
    let t = load_table("nhanes")?.select(&cols)?;
    let t = crate::tabular::drop_missing(&t, crate::tabular::DropMode::AnyRow);
    let age = t.numeric_complete("RIDAGEYR")?;
    let born = t.numeric_complete("DMDBORN4")?;
    let weight = t.numeric_complete("BMXWT")?;
    let (mut us, mut other) = (Vec::new(), Vec::new());
    for i in 0..t.n_rows() {
        if age[i] < 18.0 {
            continue;
        }
        if born[i] == 1.0 {
            us.push(weight[i]);
        } else if born[i] == 2.0 {
            other.push(weight[i]);
        }
    }
    Ok((us, other))
}

pub fn world() -> Result<Table> {
    load_table("world")
}

/// The five indicators at column positions 3, 5, 13, 15 and 19.
pub fn ssi_indicators() -> Result<(Vec<String>, Matrix)> {
    let t = load_table("ssi_indicators")?;
    let names: Vec<String> = [3, 5, 13, 15, 19]
        .iter()
        .map(|&j| {
            t.names()
                .get(j)
                .cloned()
                .ok_or_else(|| Error::Shape(format!("indicator table has only {} columns", t.n_cols())))
        })
        .collect::<Result<_>>()?;
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let m = t.to_matrix(&refs)?;
    Ok((names, m))
}

pub const SSI_CATEGORIES: [&str; 3] = ["PersonalDevelopmentAndHealth", "WellBalancedSociety", "Economy"];

/// Country names and the three category scores.
pub fn ssi_categories() -> Result<(Vec<String>, Matrix)> {
    let t = load_table("ssi_categories")?;
    let countries = t
        .labels("Country")?
        .into_iter()
        .map(Option::unwrap_or_default)
        .collect();
    Ok((countries, t.to_matrix(&SSI_CATEGORIES)?))
}

pub fn blobs1() -> Result<Matrix> {
    load_matrix("blobs1")
}

pub fn blobs2() -> Result<Vec<f64>> {
    load_numbers("blobs2")
}

pub const SPOKANE_START: &str = "1889-08-01";

/// Daily midrange temperatures indexed from 1889-08-01.
pub fn spokane() -> Result<Series> {
    let v = load_numbers("spokane")?;
    let start = parse_date(SPOKANE_START)?;
    let index = (0..v.len() as i64).map(|i| start + i).collect();
    Series::with_index(v.into_iter().map(Some).collect(), index)
}

pub fn air_quality_1973() -> Result<Table> {
    load_table("air_quality_1973")
}

/// Feature matrix (alcohol, sugar) and the 0/1 `bad` labels.
pub fn wine(name: &str) -> Result<(Matrix, Vec<usize>)> {
    let t = load_table(name)?;
    let x = t.to_matrix(&["alcohol", "sugar"])?;
    let y = t
        .numeric_complete("bad")?
        .into_iter()
        .map(|v| {
            if v == 0.0 {
                Ok(0)
            } else if v == 1.0 {
                Ok(1)
            } else {
                Err(Error::Invalid(format!("label {v}")))
            }
        })
        .collect::<Result<_>>()?;
    Ok((x, y))
}

pub fn sipu_unbalance() -> Result<Matrix> {
    let t = load_table("sipu_unbalance")?;
    let names: Vec<&str> = t.names().iter().map(String::as_str).collect();
    t.to_matrix(&names)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_names_unique() {
        for (i, a) in MANIFEST.iter().enumerate() {
            assert!(MANIFEST[i + 1..]
                .iter()
                .all(|b| b.name != a.name && b.file_name() != a.file_name()));
        }
        assert_eq!(dataset("blobs1").unwrap().file_name(), "blobs1.txt");
        assert!(dataset("nope").is_err());
    }

    #[test]
    fn number_parsing() {
        assert_eq!(
            parse_numbers("# c\n1.5\n2\n\n-3e2 # trailing\n").unwrap(),
            vec![1.5, 2.0, -300.0]
        );
        assert!(matches!(parse_numbers("1\nx\n"), Err(Error::Parse { line: 2, .. })));
        assert_eq!(parse_numbers("# only\n"), Err(Error::Empty));
        let m = parse_matrix("1,2\n3,4\n").unwrap();
        assert_eq!(m.shape(), (2, 2));
        assert_eq!(m.row(1), &[3.0, 4.0]);
        assert!(parse_matrix("1,2\n3\n").is_err());
    }

    #[test]
    fn digest() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
