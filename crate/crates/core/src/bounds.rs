//! Generalization bounds for semi-stable compression schemes and the
//! schedules that drive the learners.
//!
//! All formulas are evaluated exactly as stated, non-tight constants
//! included. `q_bound` equals `(B_I + 1)·α + B_II`, where `B_I·α + B_II` is
//! the [`BoundMode::Final`] deviation.

use std::f64::consts::{LN_2, E};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arguments of `Q(n, α, k, b, δ, L)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub n: u64,
    pub alpha: f64,
    /// Compression-set size.
    pub k: u64,
    /// Side-information bits.
    pub b: u64,
    /// `ln δ`; kept in log form so that schedules like `δ = e^{−√n}` stay
    /// representable for large `n`.
    pub ln_delta: f64,
    /// Loss range.
    pub l: f64,
}

impl BoundParams {
    pub fn new(n: u64, alpha: f64, k: u64, b: u64, delta: f64, l: f64) -> Self {
        BoundParams::with_ln_delta(n, alpha, k, b, delta.ln(), l)
    }

    pub fn with_ln_delta(n: u64, alpha: f64, k: u64, b: u64, ln_delta: f64, l: f64) -> Self {
        BoundParams { n, alpha, k, b, ln_delta, l }
    }

    pub fn delta(&self) -> f64 {
        self.ln_delta.exp()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.ln_delta < 0.0 && self.ln_delta.is_finite()) {
            return Err(Error::pre(format!("delta must lie in (0,1), got {}", self.delta())));
        }
        if self.n == 0 {
            return Err(Error::pre("n must be at least 1"));
        }
        if !(self.alpha >= 0.0) || !self.alpha.is_finite() {
            return Err(Error::pre(format!("alpha must be nonnegative, got {}", self.alpha)));
        }
        if !(self.l >= 0.0) || !self.l.is_finite() {
            return Err(Error::pre(format!("L must be nonnegative, got {}", self.l)));
        }
        Ok(())
    }
}

/// `ln(4e²/δ)`
fn ln_confidence(ln_delta: f64) -> f64 {
    (4.0 * E * E).ln() - ln_delta
}

/// `ln(4/δ)`
fn ln_four_over(ln_delta: f64) -> f64 {
    4f64.ln() - ln_delta
}

/// `Q(n, α, k, b, δ, L)`.
pub fn q_bound(p: &BoundParams) -> Result<f64> {
    p.validate()?;
    let (a, b1, b2) = final_terms(p);
    Ok((b1 + 1.0) * a + b2)
}

/// `(α, B_I, B_II)` with validation already done.
fn final_terms(p: &BoundParams) -> (f64, f64, f64) {
    let n = p.n as f64;
    let k = p.k as f64 / n;
    let b = p.b as f64 / n;
    let c = ln_confidence(p.ln_delta) / n;
    let l = p.l;
    let b1 = 20.0 * k.sqrt() + 20.0 * b.sqrt() + 15.0 * c.sqrt();
    let b2 = (6.0 * l + 18.0) * k
        + 8.0 * l * k.sqrt()
        + (2.0 * l + 12.0) * b
        + 7.0 * l * b.sqrt()
        + (3.0 * l + 10.0) * c
        + 6.0 * l * c.sqrt();
    (p.alpha, b1, b2)
}

/// Checks that `q_bound` is ordered like the one field in which `p` and `p2`
/// differ (α or k).
pub fn q_monotone_check(p: &BoundParams, p2: &BoundParams) -> Result<bool> {
    let alpha_differs = p.alpha != p2.alpha;
    let k_differs = p.k != p2.k;
    let others_equal = p.n == p2.n && p.b == p2.b && p.ln_delta == p2.ln_delta && p.l == p2.l;
    if !others_equal || (alpha_differs && k_differs) {
        return Err(Error::pre("parameters may differ only in alpha or only in k"));
    }
    let (q1, q2) = (q_bound(p)?, q_bound(p2)?);
    let ok = if alpha_differs {
        (p.alpha <= p2.alpha) == (q1 <= q2) || q1 == q2
    } else if k_differs {
        (p.k <= p2.k) == (q1 <= q2) || q1 == q2
    } else {
        q1 == q2
    };
    Ok(ok)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundMode {
    /// Fixed size `k`, `b` bits; Hoeffding deviation (two-sided).
    Hoeffding,
    /// Fixed size `k`, `b` bits; empirical-Bernstein deviation.
    Bernstein,
    /// Sample-dependent size via a union bound over `(k, b)`.
    SampleDependent,
    /// The simplified form `B_I·α + B_II`.
    Final,
}

impl FromStr for BoundMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hoeffding" => Ok(BoundMode::Hoeffding),
            "bernstein" => Ok(BoundMode::Bernstein),
            "sample-dependent" | "sample_dependent" => Ok(BoundMode::SampleDependent),
            "final" => Ok(BoundMode::Final),
            _ => Err(Error::UnknownId {
                id: s.to_string(),
                valid: "hoeffding, bernstein, sample-dependent, final".into(),
            }),
        }
    }
}

/// Deviation `R − R̂` allowed by the chosen compression bound.
pub fn compression_deviation_bound(p: &BoundParams, mode: BoundMode) -> Result<f64> {
    p.validate()?;
    let n = p.n as f64;
    let k = p.k as f64;
    let b = p.b as f64;
    let l = p.l;
    let ln4 = 4f64.ln();
    match mode {
        BoundMode::Hoeffding => {
            if !(p.n > 2 * p.k) {
                return Err(Error::pre("fixed-size Hoeffding bound requires n > 2k"));
            }
            let m = n - 2.0 * k;
            let conf = ln_four_over(p.ln_delta);
            Ok((4.0 * l * l / m * (k * ln4 + conf)).sqrt() + (l * l / m * b * LN_2).sqrt())
        }
        BoundMode::Bernstein => {
            if !(p.n > 4 * p.k + 4) {
                return Err(Error::pre("fixed-size Bernstein bound requires n > 4k + 4"));
            }
            let t = ln_four_over(p.ln_delta) + k * ln4;
            Ok(bernstein_shape(n, p.alpha, t, b, l))
        }
        BoundMode::SampleDependent => {
            if !((p.k as f64) < n / 4.0 - 1.0) {
                return Err(Error::pre("sample-dependent Bernstein bound requires k < n/4 - 1"));
            }
            let t = ((k + 1.0) * (k + 2.0) * (b + 1.0) * (b + 2.0)).ln() + ln_four_over(p.ln_delta) + k * ln4;
            Ok(bernstein_shape(n, p.alpha, t, b, l))
        }
        BoundMode::Final => {
            let (a, b1, b2) = final_terms(p);
            Ok(b1 * a + b2)
        }
    }
}

fn bernstein_shape(n: f64, alpha: f64, t: f64, b: f64, l: f64) -> f64 {
    let conf = (8.0 * t / n).sqrt();
    let side = (8.0 * b * LN_2 / n).sqrt();
    alpha * (5.0 * conf + 4.0 * side)
        + 2.0 * l * conf
        + (28.0 + 8.0 * l) * t / (3.0 * n)
        + l * side
        + 28.0 * b * LN_2 / (3.0 * n)
}

/// One-sided upper deviation of the mean of `n` i.i.d. `[0, L]` variables:
/// `Z̄·√(2c/(n−1)) + L·√(2c/(n−1)) + 7Lc/(3(n−1))` with `c = ln(4/δ)`.
pub fn empirical_bernstein_bound(mean: f64, n: u64, delta: f64, l: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::pre("empirical Bernstein bound needs n >= 2"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::pre(format!("delta must lie in (0,1), got {delta}")));
    }
    if !(l >= 0.0) || !(mean >= 0.0 && mean <= l) {
        return Err(Error::pre(format!("mean {mean} outside [0, {l}]")));
    }
    let c = (4.0 / delta).ln();
    let m = (n - 1) as f64;
    let root = (2.0 * c / m).sqrt();
    Ok(mean * root + l * root + 7.0 * l * c / (3.0 * m))
}

/// Per-`n` choices of confidence, side-information bits, truncation radius
/// and label-net resolution. `None` fields follow the default schedule:
///
/// * `δₙ = e^{−√n}`
/// * `bₙ = ⌈√n⌉`
/// * `Lₙ = max(1, n^{1/8})`
/// * `εₙ = n^{−1/4}`
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Schedules {
    pub delta: Option<f64>,
    pub bits: Option<u32>,
    pub l_trunc: Option<f64>,
    pub eps: Option<f64>,
}

pub fn default_schedules() -> Schedules {
    Schedules::default()
}

impl Schedules {
    pub fn delta_n(&self, n: usize) -> f64 {
        self.ln_delta_n(n).exp()
    }

    /// `ln δₙ`, exact even where `δₙ` underflows.
    pub fn ln_delta_n(&self, n: usize) -> f64 {
        match self.delta {
            Some(d) => d.ln(),
            None => -(n as f64).sqrt(),
        }
    }

    pub fn bits_n(&self, n: usize) -> u32 {
        self.bits.unwrap_or_else(|| ceil_sqrt(n as u64) as u32)
    }

    pub fn l_n(&self, n: usize) -> f64 {
        self.l_trunc.unwrap_or_else(|| (n as f64).powf(0.125).max(1.0))
    }

    pub fn eps_n(&self, n: usize) -> f64 {
        self.eps.unwrap_or_else(|| (n as f64).powf(-0.25))
    }
}

/// `⌈√n⌉` in integer arithmetic.
pub fn ceil_sqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while r * r < n {
        r += 1;
    }
    r
}

/// `⌈log₂ m⌉` for `m ≥ 1`.
pub fn ceil_log2(m: usize) -> u32 {
    assert!(m >= 1);
    usize::BITS - (m - 1).leading_zeros()
}
