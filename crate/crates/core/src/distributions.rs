//! Parametric distributions: densities, CDFs, quantiles, estimators and
//! seeded inverse-transform sampling.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::Rng;
use crate::special::{norm_cdf, norm_pdf, norm_ppf, norm_sf};
use crate::univariate::{self, sorted};

/// A parametric family with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum DistSpec {
    Normal {
        mu: f64,
        sigma: f64,
    },
    /// `ln X ~ N(mu, sigma)`.
    LogNormal {
        mu: f64,
        sigma: f64,
    },
    /// Density `alpha s^alpha / x^(alpha+1)` on `x >= s`.
    Pareto {
        alpha: f64,
        s: f64,
    },
    Uniform {
        a: f64,
        b: f64,
    },
    /// Exponential with scale `s` (mean `s`).
    Exponential {
        s: f64,
    },
    Mixture {
        weights: Vec<f64>,
        components: Vec<DistSpec>,
    },
}

impl DistSpec {
    pub fn normal(mu: f64, sigma: f64) -> Result<Self> {
        DistSpec::Normal { mu, sigma }.validated()
    }

    pub fn log_normal(mu: f64, sigma: f64) -> Result<Self> {
        DistSpec::LogNormal { mu, sigma }.validated()
    }

    pub fn pareto(alpha: f64, s: f64) -> Result<Self> {
        DistSpec::Pareto { alpha, s }.validated()
    }

    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        DistSpec::Uniform { a, b }.validated()
    }

    pub fn exponential(s: f64) -> Result<Self> {
        DistSpec::Exponential { s }.validated()
    }

    pub fn mixture(weights: Vec<f64>, components: Vec<DistSpec>) -> Result<Self> {
        DistSpec::Mixture { weights, components }.validated()
    }

    /// Checks the parameter constraints, returning `self` when they hold.
    pub fn validated(self) -> Result<Self> {
        let bad = |msg: String| Err(Error::domain("distribution", msg));
        match &self {
            DistSpec::Normal { mu, sigma } | DistSpec::LogNormal { mu, sigma } => {
                if !mu.is_finite() || !(*sigma > 0.0) || !sigma.is_finite() {
                    return bad(format!("need finite mu and sigma > 0, got ({mu}, {sigma})"));
                }
            }
            DistSpec::Pareto { alpha, s } => {
                if !(*alpha > 0.0 && *s > 0.0) || !alpha.is_finite() || !s.is_finite() {
                    return bad(format!("need alpha > 0 and s > 0, got ({alpha}, {s})"));
                }
            }
            DistSpec::Uniform { a, b } => {
                if !(a < b) || !a.is_finite() || !b.is_finite() {
                    return bad(format!("need a < b, got ({a}, {b})"));
                }
            }
            DistSpec::Exponential { s } => {
                if !(*s > 0.0) || !s.is_finite() {
                    return bad(format!("need scale > 0, got {s}"));
                }
            }
            DistSpec::Mixture { weights, components } => {
                if weights.is_empty() || weights.len() != components.len() {
                    return bad("mixture needs one weight per component".into());
                }
                if weights.iter().any(|w| !(*w >= 0.0)) {
                    return bad("mixture weights must be nonnegative".into());
                }
                let total: f64 = weights.iter().sum();
                if (total - 1.0).abs() > 1e-12 {
                    return bad(format!("mixture weights sum to {total}"));
                }
                for c in components {
                    c.clone().validated()?;
                }
            }
        }
        Ok(self)
    }

    /// Closed support `[lo, hi]`.
    pub fn support(&self) -> (f64, f64) {
        match self {
            DistSpec::Normal { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            DistSpec::LogNormal { .. } | DistSpec::Exponential { .. } => (0.0, f64::INFINITY),
            DistSpec::Pareto { s, .. } => (*s, f64::INFINITY),
            DistSpec::Uniform { a, b } => (*a, *b),
            DistSpec::Mixture { components, .. } => components
                .iter()
                .map(DistSpec::support)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), (a, b)| {
                    (l.min(a), h.max(b))
                }),
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match self {
            DistSpec::Normal { mu, sigma } => norm_pdf((x - mu) / sigma) / sigma,
            DistSpec::LogNormal { mu, sigma } => {
                if x <= 0.0 {
                    0.0
                } else {
                    norm_pdf((x.ln() - mu) / sigma) / (sigma * x)
                }
            }
            DistSpec::Pareto { alpha, s } => {
                if x < *s {
                    0.0
                } else {
                    alpha * s.powf(*alpha) / x.powf(alpha + 1.0)
                }
            }
            DistSpec::Uniform { a, b } => {
                if x < *a || x > *b {
                    0.0
                } else {
                    1.0 / (b - a)
                }
            }
            DistSpec::Exponential { s } => {
                if x < 0.0 {
                    0.0
                } else {
                    (-x / s).exp() / s
                }
            }
            DistSpec::Mixture { weights, components } => {
                weights.iter().zip(components).map(|(w, c)| w * c.pdf(x)).sum()
            }
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            DistSpec::Normal { mu, sigma } => norm_cdf((x - mu) / sigma),
            DistSpec::LogNormal { mu, sigma } => {
                if x <= 0.0 {
                    0.0
                } else {
                    norm_cdf((x.ln() - mu) / sigma)
                }
            }
            DistSpec::Pareto { alpha, s } => {
                if x <= *s {
                    0.0
                } else {
                    -(alpha * (s / x).ln()).exp_m1()
                }
            }
            DistSpec::Uniform { a, b } => ((x - a) / (b - a)).clamp(0.0, 1.0),
            DistSpec::Exponential { s } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-x / s).exp_m1()
                }
            }
            DistSpec::Mixture { weights, components } => weights
                .iter()
                .zip(components)
                .map(|(w, c)| w * c.cdf(x))
                .sum::<f64>()
                .min(1.0),
        }
    }

    /// Upper tail `1 - cdf(x)`, accurate where the CDF is close to 1.
    pub fn sf(&self, x: f64) -> f64 {
        match self {
            DistSpec::Normal { mu, sigma } => norm_sf((x - mu) / sigma),
            DistSpec::LogNormal { mu, sigma } => {
                if x <= 0.0 {
                    1.0
                } else {
                    norm_sf((x.ln() - mu) / sigma)
                }
            }
            DistSpec::Pareto { alpha, s } => {
                if x <= *s {
                    1.0
                } else {
                    (s / x).powf(*alpha)
                }
            }
            DistSpec::Exponential { s } => {
                if x <= 0.0 {
                    1.0
                } else {
                    (-x / s).exp()
                }
            }
            DistSpec::Uniform { a, b } => ((b - x) / (b - a)).clamp(0.0, 1.0),
            DistSpec::Mixture { weights, components } => weights.iter().zip(components).map(|(w, c)| w * c.sf(x)).sum(),
        }
    }

    /// Quantile function, the smallest `x` with `cdf(x) >= p`.
    pub fn ppf(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain("ppf", format!("p = {p} outside [0, 1]")));
        }
        let (lo, hi) = self.support();
        if p == 0.0 && lo.is_finite() {
            return Ok(lo);
        }
        if p == 1.0 && hi.is_finite() {
            return Ok(hi);
        }
        if p == 0.0 || p == 1.0 {
            return Err(Error::domain("ppf", format!("p = {p} maps to an infinite endpoint")));
        }
        Ok(match self {
            DistSpec::Normal { mu, sigma } => mu + sigma * norm_ppf(p)?,
            DistSpec::LogNormal { mu, sigma } => (mu + sigma * norm_ppf(p)?).exp(),
            DistSpec::Pareto { alpha, s } => s * (-(-p).ln_1p() / alpha).exp(),
            DistSpec::Uniform { a, b } => a + p * (b - a),
            DistSpec::Exponential { s } => -s * (-p).ln_1p(),
            DistSpec::Mixture { components, .. } => {
                // bracket by the component quantiles, then bisect
                let mut a = f64::INFINITY;
                let mut b = f64::NEG_INFINITY;
                for c in components {
                    let q = c.ppf(p)?;
                    a = a.min(q);
                    b = b.max(q);
                }
                if a == b {
                    return Ok(a);
                }
                for _ in 0..2000 {
                    let m = 0.5 * (a + b);
                    if m <= a || m >= b {
                        break;
                    }
                    if self.cdf(m) < p {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                b
            }
        })
    }

    /// Inverse-transform sample of size `n`. Mixtures pick a component by
    /// weight and then draw from it.
    pub fn sample(&self, n: usize, rng: &mut Rng) -> Vec<f64> {
        (0..n).map(|_| self.draw(rng)).collect()
    }

    fn draw(&self, rng: &mut Rng) -> f64 {
        match self {
            DistSpec::Mixture { weights, components } => {
                let u = rng.uniform();
                let mut acc = 0.0;
                let mut pick = components.len() - 1;
                for (i, w) in weights.iter().enumerate() {
                    acc += w;
                    if u < acc {
                        pick = i;
                        break;
                    }
                }
                components[pick].draw(rng)
            }
            _ => self.ppf(rng.uniform_open()).expect("uniform_open is inside (0, 1)"),
        }
    }

    /// Two-column CSV of `(x, pdf(x), cdf(x))` on an even grid.
    pub fn grid_csv(&self, from: f64, to: f64, points: usize) -> String {
        let mut out = String::from("x,pdf,cdf\n");
        let step = if points > 1 {
            (to - from) / (points - 1) as f64
        } else {
            0.0
        };
        for i in 0..points {
            let x = from + step * i as f64;
            out.push_str(&format!("{x},{},{}\n", self.pdf(x), self.cdf(x)));
        }
        out
    }
}

/// Families that [`fit`] can estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Mean and standard deviation (`ddof = 1`).
    Normal,
    /// Median and `IQR / 1.349`.
    NormalRobust,
    /// Mean and standard deviation (`ddof = 1`) of the logarithms.
    LogNormal,
    /// `alpha = 1 / mean(ln(x / s))`; `s` defaults to the sample minimum.
    Pareto { s: Option<f64> },
    /// Bounds default to the sample minimum and maximum.
    Uniform { a: Option<f64>, b: Option<f64> },
    /// Scale equal to the sample mean.
    Exponential,
}

pub fn fit(family: Family, v: &[f64]) -> Result<DistSpec> {
    if v.is_empty() {
        return Err(Error::Empty);
    }
    let positive = |name: &'static str| -> Result<()> {
        if v.iter().any(|&x| !(x > 0.0)) {
            return Err(Error::domain(name, "data must be positive"));
        }
        Ok(())
    };
    match family {
        Family::Normal => DistSpec::normal(univariate::mean(v)?, univariate::std(v, 1)?),
        Family::NormalRobust => DistSpec::normal(univariate::median(v)?, univariate::iqr(v)? / 1.349),
        Family::LogNormal => {
            positive("log-normal fit")?;
            let logs: Vec<f64> = v.iter().map(|x| x.ln()).collect();
            DistSpec::log_normal(univariate::mean(&logs)?, univariate::std(&logs, 1)?)
        }
        Family::Pareto { s } => {
            positive("Pareto fit")?;
            let s = s.unwrap_or_else(|| v.iter().copied().fold(f64::INFINITY, f64::min));
            if v.iter().any(|&x| x < s) {
                return Err(Error::domain("Pareto fit", format!("data below the scale {s}")));
            }
            let m = univariate::mean(&v.iter().map(|x| (x / s).ln()).collect::<Vec<_>>())?;
            DistSpec::pareto(1.0 / m, s)
        }
        Family::Uniform { a, b } => {
            let a = a.unwrap_or_else(|| v.iter().copied().fold(f64::INFINITY, f64::min));
            let b = b.unwrap_or_else(|| v.iter().copied().fold(f64::NEG_INFINITY, f64::max));
            DistSpec::uniform(a, b)
        }
        Family::Exponential => {
            if v.iter().any(|&x| x < 0.0) {
                return Err(Error::domain("exponential fit", "data must be nonnegative"));
            }
            DistSpec::exponential(univariate::mean(v)?)
        }
    }
}

/// Quantile-quantile pairs `(ppf(i/(n+1)), x_(i))` for `i = 1..n`.
pub fn qq_pairs(v: &[f64], d: &DistSpec) -> Result<Vec<(f64, f64)>> {
    if v.is_empty() {
        return Err(Error::Empty);
    }
    let n = v.len() as f64;
    sorted(v)
        .into_iter()
        .enumerate()
        .map(|(i, x)| Ok((d.ppf((i + 1) as f64 / (n + 1.0))?, x)))
        .collect()
}

pub fn qq_csv(pairs: &[(f64, f64)]) -> String {
    let mut out = String::from("theoretical,sample\n");
    for (t, s) in pairs {
        out.push_str(&format!("{t},{s}\n"));
    }
    out
}
