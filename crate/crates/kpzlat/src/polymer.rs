//! Directed-polymer reference surface at intermediate disorder.
//!
//! The log-partition surface obeys the same two-neighbor recursion as a
//! growth rule, with nonlinearity log cosh(beta u)/beta and the per-step
//! log-MGF drift. The partition function X = exp(beta f) then satisfies
//! X = (1 + xi) Gamma with Gamma the neighbor average of the previous row
//! and xi the centered exponential-tilted noise. That product structure
//! yields exact summation identities (a pseudo-chaos expansion) used here
//! both as implementation cross-checks and as the source of the K field.

use crate::noise::{NoiseError, NoiseLaw, SiteNoise};
use crate::surface::{ln_cosh, GrowBounds};
use crate::walk::WalkKernel;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PolymerError {
    #[error("polymer surface needs beta != 0 (use the linear reference for beta = 0)")]
    ZeroBeta,
    #[error("site ({x}, {t}) outside the stored field (light cone not covered)")]
    OutOfBounds { x: i64, t: i64 },
    #[error("kernel horizon {have} < required {need}")]
    KernelHorizon { have: usize, need: usize },
    #[error(transparent)]
    Noise(#[from] NoiseError),
    #[error(transparent)]
    Surface(#[from] crate::surface::SurfaceError),
}

/// Centered exponential-tilted noise: xi = exp(theta y)/m(theta) - 1,
/// materialized on a rectangle covering both parity classes.
#[derive(Debug, Clone)]
pub struct XiField {
    pub beta: f64,
    pub n: u64,
    pub theta: f64,
    pub m_theta: f64,
    x_half: i64,
    t_max: i64,
    values: Vec<f64>,
}

impl XiField {
    /// Tabulate xi over |x| <= x_half, 1 <= t <= t_max.
    pub fn build(
        law: &NoiseLaw,
        noise: &impl SiteNoise,
        beta: f64,
        n: u64,
        x_half: i64,
        t_max: i64,
    ) -> Result<Self, PolymerError> {
        if beta == 0.0 {
            return Err(PolymerError::ZeroBeta);
        }
        let theta = beta * (n as f64).powf(-0.25);
        let m_theta = law.mgf(theta)?;
        law.mgf(2.0 * theta)?; // second-moment tilt must stay in domain too
        let width = (2 * x_half + 1) as usize;
        let mut values = Vec::with_capacity(width * t_max as usize);
        for t in 1..=t_max {
            for x in -x_half..=x_half {
                values.push((theta * noise.y(x, t)).exp() / m_theta - 1.0);
            }
        }
        Ok(XiField {
            beta,
            n,
            theta,
            m_theta,
            x_half,
            t_max,
            values,
        })
    }

    pub fn value(&self, x: i64, t: i64) -> Option<f64> {
        if t < 1 || t > self.t_max || x.abs() > self.x_half {
            return None;
        }
        let width = (2 * self.x_half + 1) as usize;
        Some(self.values[(t - 1) as usize * width + (x + self.x_half) as usize])
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Log-partition surface and its partition function over a light-cone
/// trapezoid (one parity class).
#[derive(Debug, Clone)]
pub struct PolymerField {
    pub n: u64,
    pub beta: f64,
    bounds: GrowBounds,
    fpoly: Vec<Vec<f64>>,
    x: Vec<Vec<f64>>,
}

impl PolymerField {
    pub fn bounds(&self) -> GrowBounds {
        self.bounds
    }

    pub fn fpoly(&self, x: i64, t: i64) -> Option<f64> {
        self.lookup(&self.fpoly, x, t)
    }

    /// Partition function X = exp(beta fpoly).
    pub fn partition(&self, x: i64, t: i64) -> Option<f64> {
        self.lookup(&self.x, x, t)
    }

    /// Neighbor average of the previous row's partition values.
    pub fn gamma(&self, x: i64, t: i64) -> Option<f64> {
        if t == 0 {
            return None;
        }
        Some(0.5 * (self.partition(x - 1, t - 1)? + self.partition(x + 1, t - 1)?))
    }

    fn lookup(&self, rows: &[Vec<f64>], x: i64, t: i64) -> Option<f64> {
        if t < 0 || t > self.bounds.t_max {
            return None;
        }
        let w = row_halfwidth(&self.bounds, t);
        if x.abs() > w || (x + w) % 2 != 0 {
            return None;
        }
        Some(rows[t as usize][((x + w) / 2) as usize])
    }

    pub fn min_partition(&self) -> f64 {
        self.x
            .iter()
            .flat_map(|r| r.iter())
            .fold(f64::INFINITY, |a, v| a.min(*v))
    }
}

fn row_halfwidth(bounds: &GrowBounds, t: i64) -> i64 {
    let pad = if (bounds.x_max + bounds.t_max) % 2 == 0 {
        bounds.x_max
    } else {
        bounds.x_max + 1
    };
    pad + (bounds.t_max - t)
}

/// Evolve the polymer surface in the log domain (log-sum-exp form), keeping
/// fpoly and X = exp(beta fpoly) exactly consistent.
pub fn grow_polymer(
    law: &NoiseLaw,
    noise: &impl SiteNoise,
    beta: f64,
    n: u64,
    bounds: GrowBounds,
) -> Result<PolymerField, PolymerError> {
    if beta == 0.0 {
        return Err(PolymerError::ZeroBeta);
    }
    let theta = beta * (n as f64).powf(-0.25);
    let log_m = law.mgf(theta)?.ln();
    law.mgf(2.0 * theta)?;
    let nq = (n as f64).powf(-0.25);
    let t_max = bounds.t_max;

    let w0 = row_halfwidth(&bounds, 0) as usize;
    let mut fpoly: Vec<Vec<f64>> = Vec::with_capacity(t_max as usize + 1);
    let mut xrows: Vec<Vec<f64>> = Vec::with_capacity(t_max as usize + 1);
    fpoly.push(vec![0.0; w0 + 1]);
    xrows.push(vec![1.0; w0 + 1]);
    for t in 1..=t_max {
        let w = row_halfwidth(&bounds, t);
        let prev = &fpoly[(t - 1) as usize];
        let mut frow = Vec::with_capacity(w as usize + 1);
        let mut xrow = Vec::with_capacity(w as usize + 1);
        for i in 0..=w {
            let f1 = prev[i as usize];
            let f2 = prev[i as usize + 1];
            let x = -w + 2 * i;
            // (1/beta) lse(beta f1, beta f2) - log(2)/beta
            //   = (f1 + f2)/2 + log cosh(beta (f2 - f1)/2 ... ) in stable form
            let avg = 0.5 * (f1 + f2) + ln_cosh(0.5 * beta * (f2 - f1)) / beta;
            let f = avg + nq * noise.y(x, t) - log_m / beta;
            frow.push(f);
            xrow.push((beta * f).exp());
        }
        fpoly.push(frow);
        xrows.push(xrow);
    }
    Ok(PolymerField {
        n,
        beta,
        bounds,
        fpoly,
        x: xrows,
    })
}

/// Right-hand side of the partition expansion
/// 1 + sum over s <= t of p(x - z, t - s) xi(z, s) Gamma(z, s);
/// equals X(x, t) identically.
pub fn duhamel_expand(
    pf: &PolymerField,
    xi: &XiField,
    kernel: &WalkKernel<f64>,
    x: i64,
    t: i64,
) -> Result<f64, PolymerError> {
    if t as usize > kernel.horizon() {
        return Err(PolymerError::KernelHorizon {
            have: kernel.horizon(),
            need: t as usize,
        });
    }
    let mut acc = 1.0;
    for s in 1..=t {
        let reach = t - s;
        for z in (x - reach..=x + reach).step_by(2) {
            let gamma = pf
                .gamma(z, s)
                .ok_or(PolymerError::OutOfBounds { x: z, t: s })?;
            let xi_v = xi
                .value(z, s)
                .ok_or(PolymerError::OutOfBounds { x: z, t: s })?;
            acc += kernel.p(x - z, (t - s) as usize) * xi_v * gamma;
        }
    }
    Ok(acc)
}

/// Difference form of the expansion: X(x+1, t) - X(x-1, t) as the
/// D-kernel-weighted sum of xi Gamma.
pub fn x_difference_series(
    pf: &PolymerField,
    xi: &XiField,
    kernel: &WalkKernel<f64>,
    x: i64,
    t: i64,
) -> Result<f64, PolymerError> {
    if t as usize > kernel.horizon() {
        return Err(PolymerError::KernelHorizon {
            have: kernel.horizon(),
            need: t as usize,
        });
    }
    let mut acc = 0.0;
    for s in 1..=t {
        let reach = t - s + 1;
        for z in (x - reach..=x + reach).step_by(2) {
            let d = kernel.delta(x - z, (t - s) as usize);
            if d == 0.0 {
                continue;
            }
            let gamma = pf
                .gamma(z, s)
                .ok_or(PolymerError::OutOfBounds { x: z, t: s })?;
            let xi_v = xi
                .value(z, s)
                .ok_or(PolymerError::OutOfBounds { x: z, t: s })?;
            acc += d * xi_v * gamma;
        }
    }
    Ok(acc)
}

/// Log-odds form of a spatial difference: returns
/// (fpoly(x+1,t) - fpoly(x-1,t), r) where r is the normalized partition
/// difference; the two are linked exactly by
/// diff = (log(1+r) - log(1-r)) / beta, and |r| < 1 since X > 0.
pub fn log_odds_diff(pf: &PolymerField, x: i64, t: i64) -> Result<(f64, f64), PolymerError> {
    let hi = pf
        .partition(x + 1, t)
        .ok_or(PolymerError::OutOfBounds { x: x + 1, t })?;
    let lo = pf
        .partition(x - 1, t)
        .ok_or(PolymerError::OutOfBounds { x: x - 1, t })?;
    let diff = pf.fpoly(x + 1, t).unwrap() - pf.fpoly(x - 1, t).unwrap();
    let r = (hi - lo) / (hi + lo);
    Ok((diff, r))
}
