//! Special functions behind the distributions and tests: the normal CDF and
//! quantile, the regularized incomplete gamma function, chi-squared
//! quantiles and the finite-sample Kolmogorov distribution.

use crate::error::{Error, Result};

const SQRT_2: f64 = std::f64::consts::SQRT_2;
const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Standard normal density.
pub fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() * FRAC_1_SQRT_2PI
}

/// Standard normal CDF, `erfc(-x/sqrt 2) / 2`.
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// Upper tail `1 - norm_cdf(x)` without cancellation.
pub fn norm_sf(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &k| acc * x + k)
}

// Wichura, Algorithm AS 241 (PPND16)
#[allow(clippy::excessive_precision)]
const A: [f64; 8] = [
    3.387_132_872_796_366_6,
    133.141_667_891_784_38,
    1_971.590_950_306_551_3,
    13_731.693_765_509_461,
    45_921.953_931_549_87,
    67_265.770_927_008_7,
    33_430.575_583_588_13,
    2_509.080_928_730_122_7,
];
const B: [f64; 8] = [
    1.0,
    42.313_330_701_600_91,
    687.187_007_492_057_9,
    5_394.196_021_424_751,
    21_213.794_301_586_597,
    39_307.895_800_092_71,
    28_729.085_735_721_943,
    5_226.495_278_852_546,
];
const C: [f64; 8] = [
    1.423_437_110_749_683_6,
    4.630_337_846_156_545,
    5.769_497_221_460_691,
    3.647_848_324_763_204_5,
    1.270_458_252_452_368_4,
    0.241_780_725_177_450_6,
    0.022_723_844_989_269_184,
    7.745_450_142_783_414e-4,
];
const D: [f64; 8] = [
    1.0,
    2.053_191_626_637_759,
    1.676_384_830_183_803_8,
    0.689_767_334_985_100_1,
    0.148_103_976_427_480_08,
    0.015_198_666_563_616_457,
    5.475_938_084_995_345e-4,
    1.050_750_071_644_416_8e-9,
];
const E: [f64; 8] = [
    6.657_904_643_501_104,
    5.463_784_911_164_114,
    1.784_826_539_917_291_3,
    0.296_560_571_828_504_9,
    0.026_532_189_526_576_124,
    0.001_242_660_947_388_078_4,
    2.711_555_568_743_487_6e-5,
    2.010_334_399_292_288_1e-7,
];
#[allow(clippy::excessive_precision)]
const F: [f64; 8] = [
    1.0,
    0.599_832_206_555_887_9,
    0.136_929_880_922_735_8,
    0.014_875_361_290_850_615,
    7.868_691_311_456_133e-4,
    1.846_318_317_510_054_8e-5,
    1.421_511_758_316_445_9e-7,
    2.044_263_103_389_939_8e-15,
];

/// Standard normal quantile: AS 241 followed by one Halley step.
pub fn norm_ppf(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::domain("norm_ppf", format!("p = {p} outside [0, 1]")));
    }
    if p == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if p == 1.0 {
        return Ok(f64::INFINITY);
    }
    let q = p - 0.5;
    let mut x = if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        q * poly(&A, r) / poly(&B, r)
    } else {
        let r = (-(p.min(1.0 - p)).ln()).sqrt();
        let z = if r <= 5.0 {
            let r = r - 1.6;
            poly(&C, r) / poly(&D, r)
        } else {
            let r = r - 5.0;
            poly(&E, r) / poly(&F, r)
        };
        if q < 0.0 {
            -z
        } else {
            z
        }
    };
    // Halley refinement; the residual is taken in whichever tail is small
    let e = if p < 0.5 {
        norm_cdf(x) - p
    } else {
        (1.0 - p) - norm_sf(x)
    };
    let u = e / norm_pdf(x);
    if u.is_finite() {
        x -= u / (1.0 + 0.5 * x * u);
    }
    Ok(x)
}

const EPS: f64 = f64::EPSILON;
const TINY: f64 = 1e-300;

fn check_gamma_args(a: f64, x: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain(
            "incomplete gamma",
            format!("shape a = {a} must be positive"),
        ));
    }
    if x < 0.0 || x.is_nan() {
        return Err(Error::domain(
            "incomplete gamma",
            format!("x = {x} must be nonnegative"),
        ));
    }
    Ok(())
}

// exp(-x + a ln x - lgamma(a)), the common prefactor
fn gamma_prefactor(a: f64, x: f64) -> f64 {
    (-x + a * x.ln() - libm::lgamma(a)).exp()
}

fn gamma_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut del = 1.0 / a;
    let mut sum = del;
    for _ in 0..10_000 {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * EPS {
            break;
        }
    }
    sum * gamma_prefactor(a, x)
}

// modified Lentz evaluation of the continued fraction for Q(a, x)
fn gamma_cf(a: f64, x: f64) -> f64 {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    gamma_prefactor(a, x) * h
}

/// Regularized lower incomplete gamma `P(a, x)`.
pub fn gamma_p(a: f64, x: f64) -> Result<f64> {
    check_gamma_args(a, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    Ok(if x < a + 1.0 {
        gamma_series(a, x)
    } else {
        1.0 - gamma_cf(a, x)
    })
}

/// Regularized upper incomplete gamma `Q(a, x) = 1 - P(a, x)`.
pub fn gamma_q(a: f64, x: f64) -> Result<f64> {
    check_gamma_args(a, x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    Ok(if x < a + 1.0 {
        1.0 - gamma_series(a, x)
    } else {
        gamma_cf(a, x)
    })
}

fn check_dof(dof: f64) -> Result<()> {
    if !(dof > 0.0) || !dof.is_finite() {
        return Err(Error::domain(
            "chi2",
            format!("degrees of freedom {dof} must be positive"),
        ));
    }
    Ok(())
}

pub fn chi2_pdf(x: f64, dof: f64) -> Result<f64> {
    check_dof(dof)?;
    if x < 0.0 {
        return Ok(0.0);
    }
    let a = dof / 2.0;
    if x == 0.0 {
        return Ok(if a < 1.0 {
            f64::INFINITY
        } else if a == 1.0 {
            0.5
        } else {
            0.0
        });
    }
    Ok((-(x / 2.0) + (a - 1.0) * (x / 2.0).ln() - libm::lgamma(a)).exp() / 2.0)
}

pub fn chi2_cdf(x: f64, dof: f64) -> Result<f64> {
    check_dof(dof)?;
    gamma_p(dof / 2.0, x.max(0.0) / 2.0)
}

pub fn chi2_sf(x: f64, dof: f64) -> Result<f64> {
    check_dof(dof)?;
    gamma_q(dof / 2.0, x.max(0.0) / 2.0)
}

/// Chi-squared quantile by bracketed Newton iteration with a bisection
/// fallback. The equation is solved in the smaller tail.
pub fn chi2_ppf(p: f64, dof: f64) -> Result<f64> {
    check_dof(dof)?;
    if !(0.0..1.0).contains(&p) || p.is_nan() {
        if p == 1.0 {
            return Ok(f64::INFINITY);
        }
        return Err(Error::domain("chi2_ppf", format!("p = {p} outside [0, 1)")));
    }
    if p == 0.0 {
        return Ok(0.0);
    }
    let upper = p > 0.5;
    let target = if upper { 1.0 - p } else { p };
    // residual that is increasing in x
    let resid = |x: f64| -> Result<f64> {
        Ok(if upper {
            target - chi2_sf(x, dof)?
        } else {
            chi2_cdf(x, dof)? - target
        })
    };

    // Wilson-Hilferty starting point
    let z = norm_ppf(p)?;
    let h = 2.0 / (9.0 * dof);
    let mut x = (dof * (1.0 - h + z * h.sqrt()).powi(3)).max(1e-3 * dof.min(1.0));

    let (mut lo, mut hi) = (0.0, f64::INFINITY);
    for _ in 0..300 {
        let r = resid(x)?;
        if r == 0.0 {
            return Ok(x);
        }
        if r < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let d = chi2_pdf(x, dof)?;
        let mut next = if d > 0.0 && d.is_finite() { x - r / d } else { f64::NAN };
        if !(next > lo && next < hi) {
            next = if hi.is_finite() {
                0.5 * (lo + hi)
            } else {
                2.0 * x.max(1.0)
            };
        }
        if (next - x).abs() <= 4.0 * EPS * x.abs() {
            return Ok(next);
        }
        if hi.is_finite() && (hi - lo) <= 4.0 * EPS * hi {
            return Ok(0.5 * (lo + hi));
        }
        x = next;
    }
    Err(Error::NoConvergence(format!("chi2_ppf({p}, {dof})")))
}

/// Asymptotic one-sample Kolmogorov critical value `sqrt(-ln(alpha/2) / (2n))`.
pub fn kolmogorov_critical_asymptotic(n: usize, alpha: f64) -> f64 {
    (-(alpha / 2.0).ln() / (2.0 * n as f64)).sqrt()
}

fn square_matmul(a: &[f64], b: &[f64], m: usize) -> Vec<f64> {
    let mut c = vec![0.0; m * m];
    for i in 0..m {
        let ci = &mut c[i * m..(i + 1) * m];
        for k in 0..m {
            let aik = a[i * m + k];
            if aik == 0.0 {
                continue;
            }
            let bk = &b[k * m..(k + 1) * m];
            for (cij, bkj) in ci.iter_mut().zip(bk) {
                *cij += aik * bkj;
            }
        }
    }
    c
}

// matrix power with a running base-10 exponent to keep entries in range
fn matrix_power(h: &[f64], m: usize, n: usize) -> (Vec<f64>, i32) {
    if n == 1 {
        return (h.to_vec(), 0);
    }
    let (v, e) = matrix_power(h, m, n / 2);
    let mut b = square_matmul(&v, &v, m);
    let mut eb = 2 * e;
    if n % 2 == 1 {
        b = square_matmul(h, &b, m);
    }
    let centre = (m / 2) * m + m / 2;
    if b[centre] > 1e140 {
        for x in &mut b {
            *x *= 1e-140;
        }
        eb += 140;
    }
    (b, eb)
}

/// Exact CDF of the one-sample Kolmogorov statistic, `P(D_n < d)`.
///
/// Uses the matrix-power formulation of Marsaglia, Tsang and Wang (2003).
pub fn kolmogorov_cdf(n: usize, d: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("kolmogorov_cdf", "n must be positive"));
    }
    if d <= 0.5 / n as f64 {
        return Ok(0.0);
    }
    if d >= 1.0 {
        return Ok(1.0);
    }
    let nf = n as f64;
    let k = (nf * d) as usize + 1;
    let m = 2 * k - 1;
    let h = k as f64 - nf * d;

    let mut hm = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            if i + 1 >= j {
                hm[i * m + j] = 1.0;
            }
        }
    }
    for i in 0..m {
        hm[i * m] -= h.powi(i as i32 + 1);
        hm[(m - 1) * m + i] -= h.powi((m - i) as i32);
    }
    if 2.0 * h - 1.0 > 0.0 {
        hm[(m - 1) * m] += (2.0 * h - 1.0).powi(m as i32);
    }
    for i in 0..m {
        for j in 0..m {
            if i + 1 > j {
                let mut g = 1.0;
                for f in 1..=(i + 1 - j) {
                    g *= f as f64;
                }
                hm[i * m + j] /= g;
            }
        }
    }

    let (q, mut eq) = matrix_power(&hm, m, n);
    let mut s = q[(k - 1) * m + k - 1];
    for i in 1..=n {
        s *= i as f64 / nf;
        if s < 1e-140 {
            s *= 1e140;
            eq -= 140;
        }
    }
    Ok((s * 10f64.powi(eq)).clamp(0.0, 1.0))
}

/// Inverse of [`kolmogorov_cdf`]: the exact critical value `K_n` at level
/// `alpha`, i.e. the `d` with `P(D_n < d) = 1 - alpha`.
///
/// Solved by the Illinois variant of regula falsi started from a bracket
/// around the asymptotic value.
pub fn kolmogorov_critical_exact(n: usize, alpha: f64) -> Result<f64> {
    if n == 0 || !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain("ks_critical", format!("n = {n}, alpha = {alpha}")));
    }
    let target = 1.0 - alpha;
    let f = |d: f64| kolmogorov_cdf(n, d).map(|c| c - target);
    let guess = kolmogorov_critical_asymptotic(n, alpha).min(1.0);
    let (mut a, mut b) = (0.5 * guess, (1.5 * guess).min(1.0));
    let (mut fa, mut fb) = (f(a)?, f(b)?);
    while fa > 0.0 {
        a *= 0.5;
        fa = f(a)?;
    }
    while fb < 0.0 && b < 1.0 {
        b = (b * 1.5).min(1.0);
        fb = f(b)?;
    }
    let mut side = 0i8;
    for _ in 0..200 {
        let c = (a * fb - b * fa) / (fb - fa);
        if (b - a).abs() <= 1e-15 * b {
            return Ok(c);
        }
        let fc = f(c)?;
        if fc == 0.0 {
            return Ok(c);
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa /= 2.0;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb /= 2.0;
            }
            side = 1;
        }
        if fc.abs() < 1e-16 {
            return Ok(c);
        }
    }
    Err(Error::NoConvergence(format!("exact Kolmogorov quantile for n = {n}")))
}
