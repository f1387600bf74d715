//! Small inputs and printed outputs shared by the integration tests and the
//! acceptance harness.
#![allow(dead_code, clippy::approx_constant)]

pub const HEIGHTS_MEAN: f64 = 160.13679222932953;
pub const HEIGHTS_MEDIAN: f64 = 160.1;
pub const HEIGHTS_STD0: f64 = 7.062021850008261;
pub const HEIGHTS_STD1: f64 = 7.062858532891359;
pub const HEIGHTS_IQR: f64 = 9.5;
pub const HEIGHTS_SKEW: f64 = 0.0811184528074054;
pub const HEIGHTS_FIVE: [f64; 5] = [131.1, 155.3, 160.1, 164.8, 189.3];
pub const HEIGHTS_HIST11: [u64; 11] = [2, 11, 116, 409, 992, 1206, 948, 404, 110, 20, 3];
pub const HEIGHTS_EDGES11: [f64; 12] = [
    131.1,
    136.39090909,
    141.68181818,
    146.97272727,
    152.26363636,
    157.55454545,
    162.84545455,
    168.13636364,
    173.42727273,
    178.71818182,
    184.00909091,
    189.3,
];
pub const HEIGHTS_KS_D: f64 = 0.010470976524201148;
pub const HEIGHTS_N: usize = 4221;
pub const K_EXACT_4221: f64 = 0.029964456376393188;

pub const INCOME_MEAN: f64 = 35779.994;
pub const INCOME_MEDIAN: f64 = 30042.0;
pub const INCOME_IQR: f64 = 23454.0;
pub const INCOME_SKEW: f64 = 1.9768735693998942;
pub const INCOME_FIVE: [f64; 5] = [5750.0, 20669.75, 30042.0, 44123.75, 199969.0];
pub const INCOME_HIST20: [u64; 20] = [131, 238, 238, 147, 95, 55, 29, 23, 10, 12, 5, 7, 4, 3, 2, 0, 0, 0, 0, 1];
pub const INCOME_LOGNORMAL: (f64, f64) = (10.314409794364623, 0.5816585197803816);

pub const PARETO_ALPHA: f64 = 0.9496171695997675;
pub const NORMAL_PPF_09: f64 = 169.18820963937648;
pub const THREE_SIGMA_MASS: f64 = 0.9973002039367398;

// feature scaling
pub const MINMAX_X: [f64; 6] = [-1.5, 0.5, 3.5, -1.33, 0.25, 0.8];
pub const MINMAX_Y: [f64; 6] = [0.0, 0.4, 1.0, 0.034, 0.35, 0.46];
pub const CLIP_Y: [f64; 6] = [0.0, 0.5, 1.0, 0.0, 0.25, 0.8];
pub const NORM_X: [f64; 5] = [1.0, 5.0, -4.0, 2.0, 2.5];
pub const NORM_L2: [f64; 5] = [0.13834289, 0.69171446, -0.55337157, 0.27668579, 0.34585723];
pub const NORM_L1: [f64; 5] = [0.06896552, 0.34482759, -0.27586207, 0.13793103, 0.17241379];
pub const ENTROPY_P: [f64; 6] = [0.1, 0.3, 0.25, 0.15, 0.12, 0.08];
pub const ENTROPY: f64 = 1.6790818544987114;

// hypothesis tests
pub const WEIGHTS_KS_D: f64 = 0.22068075889911914;
pub const WEIGHTS_KS_K: f64 = 0.04607410479813944;
pub const POLL: [u64; 2] = [516, 501];
pub const POLL_T: f64 = 0.2212389380530986;
pub const POLL_K: f64 = 10.827566170662733;
pub const MARATHON_F: [u64; 5] = [240, 449, 262, 43, 19];
pub const MARATHON_M: [u64; 5] = [879, 2200, 1708, 541, 170];
pub const MARATHON_T: f64 = 75.31373854741857;
pub const MARATHON_K: f64 = 18.46682695290317;
pub const HEALTH_T: f64 = 3715440.465191512;
pub const HEALTH_K: f64 = 32.90949040736021;
pub const HEALTH_V: f64 = 0.316237999724298;

/// National Health Survey prevalence (thousands, truncated) by condition
/// and age group 15-44, 45-64, 65+.
pub fn health_survey() -> Vec<Vec<u64>> {
    let thousands: [[f64; 3]; 10] = [
        [360.2, 1489.0, 1772.2],
        [1069.7, 741.9, 433.7],
        [1469.6, 1513.3, 955.3],
        [28.1, 162.7, 237.5],
        [103.8, 207.0, 251.9],
        [135.4, 427.3, 607.7],
        [94.0, 344.4, 716.0],
        [29.6, 67.7, 123.3],
        [2218.9, 1390.6, 725.0],
        [36.1, 312.3, 564.7],
    ];
    thousands
        .iter()
        .map(|r| r.iter().map(|&x| 1000 * x.trunc() as u64).collect())
        .collect()
}

// regression and correlation
pub const HIP_COEF: [f64; 2] = [1.3052463, -65.10087248];
pub const HIP_RMSE: f64 = 6.948470091176111;
pub const HIP_MAE: f64 = 5.207073583769202;
pub const HIP_R2: f64 = 0.8959634726270759;
pub const MULTI_R2: f64 = 0.9243996585518783;
pub const MULTI_RMSE: f64 = 5.923223870044694;
pub const MULTI_MAE: f64 = 4.431548244333893;
pub const WORLD_R2: [f64; 4] = [0.431, 0.567, 0.607, 0.651];
pub const KAPPA_STD4: f64 = 139.42792257372338;
pub const KAPPA_RAW4: f64 = 9.774017018467434e19;
pub const R_ARM_HIP: f64 = 0.8680627457873239;
pub const R_GDP: f64 = 0.656471945486374;
pub const R_LOG_GDP: f64 = 0.8066505089380016;
pub const RHO_GDP: f64 = 0.8275220380818622;

// principal components of the five SSI indicators
pub const SSI_PC_STDS: [f64; 5] = [2.02953531, 0.7529221, 0.3943008, 0.31897889, 0.23848286];
pub const SSI_CUMVAR: [f64; 5] = [0.82380272, 0.93718105, 0.96827568, 0.98862519, 1.0];
pub const SSI_LOADINGS: [[f64; 5]; 2] = [[-0.43, -0.43, 0.44, 0.45, -0.47], [0.52, 0.5, 0.52, 0.45, -0.02]];

// spatial
pub const FOUR_POINTS: [[f64; 2]; 4] = [[0.0, 0.0], [1.0, 0.0], [-1.5, 1.0], [1.0, 1.0]];
pub const FOUR_POINTS_D: [[f64; 4]; 4] = [
    [0.0, 1.0, 1.80277564, 1.41421356],
    [1.0, 0.0, 2.6925824, 1.0],
    [1.80277564, 2.6925824, 0.0, 2.5],
    [1.41421356, 1.0, 2.5, 0.0],
];
pub const FOUR_POINTS_CENTROID: [f64; 2] = [0.125, 0.5];
pub const FOUR_POINTS_DISPERSION: f64 = 1.1388041973930374;
pub const BLOBS1_SIZES: [usize; 2] = [1017, 1039];
pub const BLOBS1_CENTRES: [[f64; 2]; 2] = [[0.99622971, 1.052801], [-0.90041365, -1.08411794]];
pub const BLOBS1_JUNK: [[f64; 2]; 8] = [
    [-3.0, 3.0],
    [3.0, 3.0],
    [3.0, -3.0],
    [-3.0, -3.0],
    [-3.5, 3.5],
    [-2.5, 2.5],
    [-2.0, 2.0],
    [-1.5, 1.5],
];
pub const BLOBS1_COUNTS: [usize; 4] = [42, 30, 1, 1];
pub const BLOBS2_FLAGGED: [f64; 5] = [0.0, 13.57157922, 15.0, 45.0, 50.0];
pub const SSI_WCSS: f64 = 437.51120966832775;
pub const SSI_CENTRES: [[f64; 3]; 3] = [
    [7.80779013, 5.19409177, 6.97790733],
    [7.92606993, 6.35691349, 3.91202972],
    [6.31794579, 3.12048584, 3.84519706],
];

// classification
pub const WINE_PRED10: [usize; 10] = [0, 1, 0, 0, 1, 0, 0, 0, 0, 0];
pub const WINE_TEST10: [usize; 10] = [0, 1, 0, 0, 0, 1, 0, 0, 0, 1];
pub const WINE_ACCURACY: f64 = 0.788;
pub const WINE_PRECISION: f64 = 0.7250755287009063;
pub const WINE_RECALL: f64 = 0.6648199445983379;
pub const WINE_F1: f64 = 0.6936416184971098;

// categorical
pub const CNTRS16: [&str; 16] = [
    "KE", "KE", "KE", "ET", "KE", "KE", "ET", "MA", "PL", "PL", "IL", "PL", "KE", "KE", "PL", "PL",
];
pub const CNTRS16_LEVELS: [&str; 5] = ["KE", "ET", "MA", "PL", "IL"];
pub const CNTRS16_CODES: [usize; 16] = [0, 0, 0, 1, 0, 0, 1, 2, 3, 3, 4, 3, 0, 0, 3, 3];
pub const RECODE_PERM: [usize; 5] = [3, 0, 2, 4, 1];
pub const RECODE_LEVELS: [&str; 5] = ["PL", "KE", "MA", "IL", "ET"];
pub const RECODE_CODES: [usize; 16] = [1, 1, 1, 4, 1, 1, 4, 2, 0, 0, 3, 0, 1, 1, 0, 0];
pub const MINS16: [f64; 16] = [
    129.32, 130.75, 130.97, 134.17, 134.68, 135.97, 139.88, 143.2, 145.22, 145.92, 146.83, 147.8, 149.65, 149.88,
    152.65, 152.88,
];
pub const MINS16_BOUNDS: [f64; 3] = [130.0, 140.0, 150.0];
pub const MINS16_CODES: [usize; 16] = [0, 1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 2, 3, 3];

/// The fastest 22 runners' countries: the top 16 followed by six more
/// whose order does not matter for counting.
pub fn top22_countries() -> Vec<&'static str> {
    let mut v = CNTRS16.to_vec();
    v.extend(["PL", "PL", "ET", "IL", "IL", "MD"]);
    v
}

/// (sex, age bracket, count) combinations of the marathon data.
pub const SEX_AGE_COUNTS: [(&str, &str, usize); 10] = [
    ("M", "30", 2200),
    ("M", "40", 1708),
    ("M", "20", 879),
    ("M", "50", 541),
    ("F", "30", 449),
    ("F", "40", 262),
    ("F", "20", 240),
    ("M", "60+", 170),
    ("F", "50", 43),
    ("F", "60+", 19),
];
pub const PL_RUNNERS: usize = 6033;
pub const ALL_RUNNERS: usize = 6511;
pub const PL_RATE: f64 = 0.9265857779142989;

// time series
pub const SPOKANE_LAST7: [f64; 7] = [-1.4, -5.0, -9.4, -12.8, -12.2, -11.4, -11.4];
pub const SPOKANE_DELTAS: [f64; 6] = [-3.6, -4.4, -3.4, 0.6, 0.8, 0.0];
pub const SPOKANE_MA3: [Option<f64>; 7] = [
    None,
    Some(-5.27),
    Some(-9.07),
    Some(-11.47),
    Some(-12.13),
    Some(-11.67),
    None,
];
pub const SPOKANE_MA5: [Option<f64>; 7] = [None, None, Some(-8.16), Some(-10.16), Some(-11.44), None, None];
pub const SOLAR_R: [Option<f64>; 12] = [
    Some(190.0),
    Some(118.0),
    Some(149.0),
    Some(313.0),
    None,
    None,
    Some(299.0),
    Some(99.0),
    Some(19.0),
    Some(194.0),
    None,
    Some(256.0),
];
pub const SOLAR_FFILL: [f64; 12] = [
    190.0, 118.0, 149.0, 313.0, 313.0, 313.0, 299.0, 99.0, 19.0, 194.0, 194.0, 256.0,
];
pub const SOLAR_BFILL: [f64; 12] = [
    190.0, 118.0, 149.0, 313.0, 299.0, 299.0, 299.0, 99.0, 19.0, 194.0, 256.0, 256.0,
];
pub const SOLAR_LINEAR: [f64; 12] = [
    190.0, 118.0, 149.0, 313.0, 308.333333, 303.666667, 299.0, 99.0, 19.0, 194.0, 225.0, 256.0,
];

pub fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}

pub fn round_to(x: f64, digits: i32) -> f64 {
    let f = 10f64.powi(digits);
    (x * f).round() / f
}
