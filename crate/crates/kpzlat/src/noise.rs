//! Noise laws with exact moments and moment generating functions, plus
//! reproducible per-site sampling.
//!
//! Sampling is counter-based: the draw at site (x, t) is a pure function of
//! (seed, x, t), so enlarging a sheet never disturbs values at shared sites
//! and replicas can run in any order.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest argument for which exp() stays finite in f64; used to clip the
/// numerically evaluable MGF domain for bounded-support laws.
const MAX_EXP_ARG: f64 = 700.0;

const DEFAULT_GAUSSIAN_CUTOFF_SIGMAS: f64 = 8.0;

#[derive(Debug, Error)]
pub enum NoiseError {
    #[error("moment of order {k} unsupported for {family} (supported: 1..=8)")]
    UnsupportedMoment { family: String, k: u32 },
    #[error("mgf argument {theta} outside numeric domain (|theta| < {limit})")]
    MgfDomain { theta: f64, limit: f64 },
    #[error("invalid noise law: {0}")]
    InvalidLaw(String),
}

/// Mean-zero noise families. All have bounded support, hence an entire MGF;
/// the practical domain is limited only by f64 exponent range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum NoiseFamily {
    /// +1 or -1 with probability 1/2 each.
    Rademacher,
    /// Uniform on [-halfwidth, halfwidth].
    UniformCentered { halfwidth: f64 },
    /// N(0, sigma^2) conditioned on |y| <= cutoff (cutoff in absolute units;
    /// defaults to 8 sigma).
    GaussianTruncated {
        sigma: f64,
        #[serde(default)]
        cutoff: Option<f64>,
    },
    /// Value `a` with probability `p`, else -a p/(1-p); mean zero with
    /// nonzero third moment, for exercising skew-sensitive terms.
    TwoPoint { a: f64, p: f64 },
    /// Degenerate all-zeros law, for debugging deterministic pipelines.
    Zero,
}

impl NoiseFamily {
    fn name(&self) -> &'static str {
        match self {
            NoiseFamily::Rademacher => "rademacher",
            NoiseFamily::UniformCentered { .. } => "uniform-centered",
            NoiseFamily::GaussianTruncated { .. } => "gaussian-truncated",
            NoiseFamily::TwoPoint { .. } => "two-point",
            NoiseFamily::Zero => "zero",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseLaw {
    family: NoiseFamily,
    /// Essential support bound: |y| <= support almost surely.
    support: f64,
    /// Exact moments mu_1..mu_8.
    mu: [f64; 8],
}

impl NoiseLaw {
    pub fn new(family: NoiseFamily) -> Result<Self, NoiseError> {
        let family = match family {
            NoiseFamily::GaussianTruncated { sigma, cutoff } => NoiseFamily::GaussianTruncated {
                sigma,
                cutoff: Some(cutoff.unwrap_or(DEFAULT_GAUSSIAN_CUTOFF_SIGMAS * sigma)),
            },
            f => f,
        };
        validate(&family)?;
        let support = support_bound(&family);
        let mut mu = [0.0; 8];
        for (i, m) in mu.iter_mut().enumerate() {
            *m = raw_moment(&family, i as u32 + 1);
        }
        let law = NoiseLaw {
            family,
            support,
            mu,
        };
        debug_assert_eq!(law.mu[0], 0.0);
        Ok(law)
    }

    pub fn rademacher() -> Self {
        Self::new(NoiseFamily::Rademacher).unwrap()
    }

    pub fn uniform_centered(halfwidth: f64) -> Result<Self, NoiseError> {
        Self::new(NoiseFamily::UniformCentered { halfwidth })
    }

    /// Centered uniform with unit variance (halfwidth sqrt(3)).
    pub fn uniform_unit_variance() -> Self {
        Self::uniform_centered(3f64.sqrt()).unwrap()
    }

    pub fn gaussian_truncated(sigma: f64, cutoff: Option<f64>) -> Result<Self, NoiseError> {
        Self::new(NoiseFamily::GaussianTruncated { sigma, cutoff })
    }

    pub fn two_point(a: f64, p: f64) -> Result<Self, NoiseError> {
        Self::new(NoiseFamily::TwoPoint { a, p })
    }

    pub fn zero() -> Self {
        Self::new(NoiseFamily::Zero).unwrap()
    }

    pub fn family(&self) -> &NoiseFamily {
        &self.family
    }

    pub fn name(&self) -> &'static str {
        self.family.name()
    }

    pub fn support_bound(&self) -> f64 {
        self.support
    }

    /// Analytic k-th moment, k in 1..=8.
    pub fn exact_moment(&self, k: u32) -> Result<f64, NoiseError> {
        if k == 0 || k > 8 {
            return Err(NoiseError::UnsupportedMoment {
                family: self.family.name().to_string(),
                k,
            });
        }
        Ok(self.mu[(k - 1) as usize])
    }

    /// Open interval around 0 on which `mgf` evaluates without overflow.
    pub fn mgf_domain(&self) -> (f64, f64) {
        if self.support == 0.0 {
            (f64::NEG_INFINITY, f64::INFINITY)
        } else {
            let lim = MAX_EXP_ARG / self.support;
            (-lim, lim)
        }
    }

    /// E[exp(theta y)] in closed form.
    pub fn mgf(&self, theta: f64) -> Result<f64, NoiseError> {
        let (lo, hi) = self.mgf_domain();
        if !(theta > lo && theta < hi) {
            return Err(NoiseError::MgfDomain { theta, limit: hi });
        }
        Ok(match &self.family {
            NoiseFamily::Rademacher => theta.cosh(),
            NoiseFamily::UniformCentered { halfwidth } => {
                let a = halfwidth * theta;
                // sinh(a)/a, with the removable singularity filled by series.
                if a.abs() < 1e-4 {
                    1.0 + a * a / 6.0 + a * a * a * a / 120.0
                } else {
                    a.sinh() / a
                }
            }
            NoiseFamily::GaussianTruncated { sigma, cutoff } => {
                let c = cutoff.unwrap() / sigma;
                let shift = theta * sigma;
                let mass = libm::erf(c / std::f64::consts::SQRT_2);
                let num = phi_cdf(c - shift) - phi_cdf(-c - shift);
                (0.5 * shift * shift).exp() * num / mass
            }
            NoiseFamily::TwoPoint { a, p } => {
                let b = -a * p / (1.0 - p);
                p * (theta * a).exp() + (1.0 - p) * (theta * b).exp()
            }
            NoiseFamily::Zero => 1.0,
        })
    }

    /// One draw at lattice site (x, t) under `seed`.
    pub fn sample(&self, seed: u64, x: i64, t: i64) -> f64 {
        let key = site_key(seed, x, t);
        match &self.family {
            NoiseFamily::Rademacher => {
                if stream(key, 0) >> 63 == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
            NoiseFamily::UniformCentered { halfwidth } => {
                (2.0 * unit_f64(stream(key, 0)) - 1.0) * halfwidth
            }
            NoiseFamily::GaussianTruncated { sigma, cutoff } => {
                let cut = cutoff.unwrap();
                let mut i = 0u64;
                loop {
                    let u1 = unit_f64(stream(key, 2 * i)).max(f64::MIN_POSITIVE);
                    let u2 = unit_f64(stream(key, 2 * i + 1));
                    let z = (-2.0 * u1.ln()).sqrt()
                        * (2.0 * std::f64::consts::PI * u2).cos();
                    let y = sigma * z;
                    if y.abs() <= cut {
                        return y;
                    }
                    i += 1;
                }
            }
            NoiseFamily::TwoPoint { a, p } => {
                if unit_f64(stream(key, 0)) < *p {
                    *a
                } else {
                    -a * p / (1.0 - p)
                }
            }
            NoiseFamily::Zero => 0.0,
        }
    }
}

fn validate(family: &NoiseFamily) -> Result<(), NoiseError> {
    match family {
        NoiseFamily::Rademacher | NoiseFamily::Zero => Ok(()),
        NoiseFamily::UniformCentered { halfwidth } => {
            if *halfwidth > 0.0 && halfwidth.is_finite() {
                Ok(())
            } else {
                Err(NoiseError::InvalidLaw(format!(
                    "uniform halfwidth must be positive and finite, got {halfwidth}"
                )))
            }
        }
        NoiseFamily::GaussianTruncated { sigma, cutoff } => {
            let c = cutoff.unwrap_or(f64::NAN);
            if !(*sigma > 0.0 && sigma.is_finite()) {
                Err(NoiseError::InvalidLaw(format!(
                    "gaussian sigma must be positive and finite, got {sigma}"
                )))
            } else if !(c > 0.0 && c.is_finite()) {
                Err(NoiseError::InvalidLaw(format!(
                    "gaussian cutoff must be positive and finite, got {c}"
                )))
            } else {
                Ok(())
            }
        }
        NoiseFamily::TwoPoint { a, p } => {
            if !(a.is_finite() && *a != 0.0) {
                Err(NoiseError::InvalidLaw(format!(
                    "two-point value a must be nonzero and finite, got {a}"
                )))
            } else if !(*p > 0.0 && *p < 1.0) {
                Err(NoiseError::InvalidLaw(format!(
                    "two-point probability must lie in (0,1), got {p}"
                )))
            } else {
                Ok(())
            }
        }
    }
}

fn support_bound(family: &NoiseFamily) -> f64 {
    match family {
        NoiseFamily::Rademacher => 1.0,
        NoiseFamily::UniformCentered { halfwidth } => *halfwidth,
        NoiseFamily::GaussianTruncated { cutoff, .. } => cutoff.unwrap(),
        NoiseFamily::TwoPoint { a, p } => a.abs().max((a * p / (1.0 - p)).abs()),
        NoiseFamily::Zero => 0.0,
    }
}

fn raw_moment(family: &NoiseFamily, k: u32) -> f64 {
    match family {
        NoiseFamily::Rademacher => {
            if k % 2 == 0 {
                1.0
            } else {
                0.0
            }
        }
        NoiseFamily::UniformCentered { halfwidth } => {
            if k % 2 == 0 {
                halfwidth.powi(k as i32) / (k as f64 + 1.0)
            } else {
                0.0
            }
        }
        NoiseFamily::GaussianTruncated { sigma, cutoff } => {
            if k % 2 == 1 {
                0.0
            } else {
                let c = cutoff.unwrap() / sigma;
                sigma.powi(k as i32) * truncated_std_normal_moment(c, k)
            }
        }
        NoiseFamily::TwoPoint { a, p } => {
            let b = -a * p / (1.0 - p);
            p * a.powi(k as i32) + (1.0 - p) * b.powi(k as i32)
        }
        NoiseFamily::Zero => 0.0,
    }
}

/// E[Z^k | |Z| <= c] for standard normal Z and even k, by the
/// integration-by-parts recursion I_k = (k-1) I_{k-2} - 2 c^{k-1} phi(c).
fn truncated_std_normal_moment(c: f64, k: u32) -> f64 {
    let phi_c = (-0.5 * c * c).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mass = libm::erf(c / std::f64::consts::SQRT_2);
    let mut i_prev = mass; // I_0
    let mut order = 0u32;
    while order < k {
        order += 2;
        i_prev = (order as f64 - 1.0) * i_prev - 2.0 * c.powi(order as i32 - 1) * phi_c;
    }
    i_prev / mass
}

fn phi_cdf(x: f64) -> f64 {
    0.5 * (1.0 + libm::erf(x / std::f64::consts::SQRT_2))
}

// ---------------------------------------------------------------------------
// Counter-based site streams

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[inline]
fn site_key(seed: u64, x: i64, t: i64) -> u64 {
    let mut h = mix64(seed ^ 0x9e37_79b9_7f4a_7c15);
    h = mix64(h ^ (x as u64));
    mix64(h ^ (t as u64).rotate_left(32))
}

#[inline]
fn stream(key: u64, i: u64) -> u64 {
    mix64(key.wrapping_add((i + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}

#[inline]
fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Independent sub-seed for a named stream (replica index, sheet id, ...).
pub fn derive_seed(seed0: u64, stream_index: u64) -> u64 {
    mix64(mix64(seed0 ^ 0xa076_1d64_78bd_642f) ^ stream_index)
}

// ---------------------------------------------------------------------------
// Site-indexed noise sources

/// Anything that yields the noise value at a lattice site. Implementations
/// must be pure in (x, t).
pub trait SiteNoise: Sync {
    fn y(&self, x: i64, t: i64) -> f64;
}

/// The production source: law + seed, sampled per site.
#[derive(Debug, Clone)]
pub struct LawNoise {
    pub law: NoiseLaw,
    pub seed: u64,
}

impl LawNoise {
    pub fn new(law: NoiseLaw, seed: u64) -> Self {
        Self { law, seed }
    }
}

impl SiteNoise for LawNoise {
    fn y(&self, x: i64, t: i64) -> f64 {
        self.law.sample(self.seed, x, t)
    }
}

pub struct ZeroNoise;

impl SiteNoise for ZeroNoise {
    fn y(&self, _x: i64, _t: i64) -> f64 {
        0.0
    }
}

/// Spatial reflection x -> -x of an underlying source.
pub struct MirroredNoise<N: SiteNoise>(pub N);

impl<N: SiteNoise> SiteNoise for MirroredNoise<N> {
    fn y(&self, x: i64, t: i64) -> f64 {
        self.0.y(-x, t)
    }
}

/// Explicit table of site values (zero elsewhere); for hand-built examples.
pub struct TableNoise {
    pub entries: Vec<((i64, i64), f64)>,
}

impl SiteNoise for TableNoise {
    fn y(&self, x: i64, t: i64) -> f64 {
        self.entries
            .iter()
            .find(|((ex, et), _)| *ex == x && *et == t)
            .map(|(_, v)| *v)
            .unwrap_or(0.0)
    }
}

// ---------------------------------------------------------------------------
// Materialized sheets

/// A materialized rectangle of noise values, t in [1, t_max], x in
/// [x_min, x_max] (both parities). Mostly useful in tests; the simulation
/// paths sample on the fly through [`SiteNoise`].
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSheet {
    pub law: NoiseLaw,
    pub seed: u64,
    pub x_min: i64,
    pub x_max: i64,
    pub t_max: i64,
    values: Vec<f64>,
}

impl NoiseSheet {
    pub fn sample(law: &NoiseLaw, seed: u64, x_min: i64, x_max: i64, t_max: i64) -> Self {
        assert!(x_max >= x_min && t_max >= 1, "empty sheet bounds");
        let width = (x_max - x_min + 1) as usize;
        let mut values = Vec::with_capacity(width * t_max as usize);
        for t in 1..=t_max {
            for x in x_min..=x_max {
                values.push(law.sample(seed, x, t));
            }
        }
        NoiseSheet {
            law: law.clone(),
            seed,
            x_min,
            x_max,
            t_max,
            values,
        }
    }

    pub fn value(&self, x: i64, t: i64) -> f64 {
        assert!(t >= 1 && t <= self.t_max && x >= self.x_min && x <= self.x_max);
        let width = (self.x_max - self.x_min + 1) as usize;
        self.values[(t - 1) as usize * width + (x - self.x_min) as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().copied()
    }
}

impl SiteNoise for NoiseSheet {
    fn y(&self, x: i64, t: i64) -> f64 {
        self.value(x, t)
    }
}
