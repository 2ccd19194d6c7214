//! Renormalization quantities: the drift constant V built from kernel sums
//! and noise moments, the exact and surrogate drift rates, the truncated
//! difference field K, and the renormalization surface Y with its
//! expectation law.

use crate::noise::{NoiseError, NoiseLaw, SiteNoise};
use crate::polymer::XiField;
use crate::surface::{step_drift, DriftMode, GrowBounds, GrowthRule, SurfaceError};
use crate::walk::{kernel_constants, KernelConstants, WalkKernel};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RenormError {
    #[error("kernel horizon {have} < required window {need}")]
    KernelHorizon { have: usize, need: usize },
    #[error("site ({x}, {t}) outside the field under construction")]
    OutOfBounds { x: i64, t: i64 },
    #[error("Y prefactor for beta != 0 is 16 c / beta^4; got beta = 0")]
    ZeroBetaPrefactor,
    #[error(transparent)]
    Noise(#[from] NoiseError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// All scalar renormalization inputs for one (rule, law, N) triple.
#[derive(Debug, Clone, Serialize)]
pub struct RenormConstants {
    pub n: u64,
    pub beta: f64,
    pub c: f64,
    pub psi00: f64,
    pub mu2: f64,
    pub mu3: f64,
    pub mu4: f64,
    pub kernel: KernelConstants,
    /// c [C1 (mu4 - mu2^2) + (sum_sq mu2)^2].
    pub v: f64,
    /// The same kernel/moment combination carrying the full multinomial
    /// weights of the fourth moment of an independent linear sum:
    /// c [C1 (mu4 - 3 mu2^2) + 3 (sum_sq mu2)^2] = c (C1 mu4 + 3 C2 mu2^2).
    /// This is the constant the Y field's mean actually tracks; `v` keeps
    /// the single-weight form for reference.
    pub v_effective: f64,
    /// Drift per unit rescaled time, four-moment surrogate:
    /// v + beta sqrt(N) mu2 / 2 + beta^2 N^(1/4) mu3 / 6
    ///   + beta^3 (mu4 - 3 mu2^2) / 24 + N psi00.
    pub drift_cumulant_per_t: f64,
    /// Drift per unit rescaled time via the exact log-MGF (beta != 0):
    /// v + (N / beta) log m(beta N^(-1/4)) + N psi00.
    pub drift_logmgf_per_t: Option<f64>,
}

pub fn compute_constants(
    rule: &GrowthRule,
    law: &NoiseLaw,
    n: u64,
    kernel_horizon: usize,
) -> Result<RenormConstants, RenormError> {
    let kc = kernel_constants(kernel_horizon);
    let mu2 = law.exact_moment(2)?;
    let mu3 = law.exact_moment(3)?;
    let mu4 = law.exact_moment(4)?;
    let beta = rule.beta();
    let c = rule.c();
    let v = c * (kc.c1 * (mu4 - mu2 * mu2) + (kc.sum_sq * mu2).powi(2));
    let v_effective = c * (kc.c1 * (mu4 - 3.0 * mu2 * mu2) + 3.0 * (kc.sum_sq * mu2).powi(2));
    let nf = n as f64;
    let drift_cumulant_per_t =
        v + nf * step_drift(DriftMode::Cumulant, beta, law, n)? + nf * rule.psi00();
    let drift_logmgf_per_t = if beta != 0.0 {
        Some(v + nf * step_drift(DriftMode::LogMgf, beta, law, n)? + nf * rule.psi00())
    } else {
        None
    };
    Ok(RenormConstants {
        n,
        beta,
        c,
        psi00: rule.psi00(),
        mu2,
        mu3,
        mu4,
        kernel: kc,
        v,
        v_effective,
        drift_cumulant_per_t,
        drift_logmgf_per_t,
    })
}

/// Central moments (orders 2..4) of xi = exp(theta y)/m(theta) - 1 in
/// closed form through the MGF.
pub fn xi_central_moments(law: &NoiseLaw, theta: f64) -> Result<(f64, f64, f64), NoiseError> {
    let m1 = law.mgf(theta)?;
    let r2 = law.mgf(2.0 * theta)? / m1.powi(2);
    let r3 = law.mgf(3.0 * theta)? / m1.powi(3);
    let r4 = law.mgf(4.0 * theta)? / m1.powi(4);
    Ok((r2 - 1.0, r3 - 3.0 * r2 + 2.0, r4 - 4.0 * r3 + 6.0 * r2 - 3.0))
}

/// Fourth moment of sum_i a_i xi_i for i.i.d. mean-zero xi:
/// sum a^4 (m4 - 3 m2^2) + 3 (sum a^2)^2 m2^2.
pub fn linear_comb_fourth_moment(sum_a2: f64, sum_a4: f64, m2: f64, m4: f64) -> f64 {
    sum_a4 * (m4 - 3.0 * m2 * m2) + 3.0 * (sum_a2 * m2).powi(2)
}

/// Window truncation for the K field: rows r = t - s with 0 <= r <= window
/// and s >= 1.
pub fn k_window(n: u64, epsilon: f64) -> i64 {
    (n as f64).powf(epsilon).ceil() as i64
}

/// Sums of D^2 and D^4 over the K coefficient window at time t (clipped at
/// s >= 1).
pub fn window_delta_sums(kernel: &WalkKernel<f64>, t: i64, window: i64) -> (f64, f64) {
    let mut sq = 0.0;
    let mut p4 = 0.0;
    for r in 0..=window.min(t - 1) {
        for z in (-(r + 1)..=(r + 1)).step_by(2) {
            let d = kernel.delta(z, r as usize);
            sq += d * d;
            p4 += d * d * d * d;
        }
    }
    (sq, p4)
}

/// Truncated difference field over a light-cone trapezoid. Both parity
/// classes are stored: a center of one class draws on noise sites of the
/// other, and downstream consumers need both (the renormalization surface
/// accumulates centers on the height class, the ratio diagnostic sits
/// between them).
#[derive(Debug, Clone)]
pub struct KField {
    pub epsilon: f64,
    pub window: i64,
    bounds: GrowBounds,
    rows: Vec<Vec<f64>>,
}

impl KField {
    pub fn bounds(&self) -> GrowBounds {
        self.bounds
    }

    pub fn value(&self, x: i64, t: i64) -> Option<f64> {
        lookup(&self.rows, &self.bounds, x, t)
    }

    /// K(x, t) = (1/2) sum over the window of D(x-z, t-s) xi(z, s).
    pub fn build(
        xi: &XiField,
        kernel: &WalkKernel<f64>,
        epsilon: f64,
        bounds: GrowBounds,
    ) -> Result<Self, RenormError> {
        let window = k_window(xi.n, epsilon);
        build_k(
            kernel,
            window,
            bounds,
            |z, s| xi.value(z, s).ok_or(RenormError::OutOfBounds { x: z, t: s }),
            0.5,
        )
        .map(|rows| KField {
            epsilon,
            window,
            bounds,
            rows,
        })
    }

    /// Variant for beta = 0 rules: the raw scaled noise N^(-1/4) y replaces
    /// xi and the 1/2 prefactor is dropped.
    pub fn build_beta0(
        noise: &impl SiteNoise,
        kernel: &WalkKernel<f64>,
        epsilon: f64,
        n: u64,
        bounds: GrowBounds,
    ) -> Result<Self, RenormError> {
        let window = k_window(n, epsilon);
        let nq = (n as f64).powf(-0.25);
        build_k(
            kernel,
            window,
            bounds,
            |z, s| Ok(nq * noise.y(z, s)),
            1.0,
        )
        .map(|rows| KField {
            epsilon,
            window,
            bounds,
            rows,
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.rows
            .iter()
            .flat_map(|r| r.iter())
            .fold(0.0f64, |a, v| a.max(v.abs()))
    }
}

fn build_k<F>(
    kernel: &WalkKernel<f64>,
    window: i64,
    bounds: GrowBounds,
    source: F,
    prefactor: f64,
) -> Result<Vec<Vec<f64>>, RenormError>
where
    F: Fn(i64, i64) -> Result<f64, RenormError>,
{
    if kernel.horizon() < window as usize {
        return Err(RenormError::KernelHorizon {
            have: kernel.horizon(),
            need: window as usize,
        });
    }
    let mut rows = Vec::with_capacity(bounds.t_max as usize + 1);
    for t in 0..=bounds.t_max {
        let w = row_halfwidth(&bounds, t);
        let mut row = Vec::with_capacity(2 * w as usize + 1);
        for x in -w..=w {
            let mut acc = 0.0;
            for r in 0..=window.min(t - 1) {
                let s = t - r;
                // D support: x - z in {-r-1, -r+1, ..., r+1}
                for z in ((x - r - 1)..=(x + r + 1)).step_by(2) {
                    let d = kernel.delta(x - z, r as usize);
                    if d != 0.0 {
                        acc += d * source(z, s)?;
                    }
                }
            }
            row.push(prefactor * acc);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Renormalization surface: heat-kernel accumulation of prefactor * K^4.
#[derive(Debug, Clone)]
pub struct YField {
    pub prefactor: f64,
    bounds: GrowBounds,
    rows: Vec<Vec<f64>>,
}

impl YField {
    pub fn bounds(&self) -> GrowBounds {
        self.bounds
    }

    pub fn value(&self, x: i64, t: i64) -> Option<f64> {
        lookup(&self.rows, &self.bounds, x, t)
    }

    pub fn max_abs(&self) -> f64 {
        self.rows
            .iter()
            .flat_map(|r| r.iter())
            .fold(0.0f64, |a, v| a.max(v.abs()))
    }
}

/// Prefactor 16 c / beta^4 for beta != 0; plain c when beta = 0.
pub fn y_prefactor(c: f64, beta: f64) -> f64 {
    if beta == 0.0 {
        c
    } else {
        16.0 * c / beta.powi(4)
    }
}

/// Forward accumulation: Y(., 0) = 0 and
/// Y(x, t) = (Y(x-1, t-1) + Y(x+1, t-1)) / 2 + prefactor K(x, t)^4,
/// which telescopes to the kernel-weighted double sum at O(area) cost.
/// Each parity class accumulates independently.
pub fn y_field(k: &KField, prefactor: f64) -> YField {
    let bounds = k.bounds();
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(bounds.t_max as usize + 1);
    rows.push(vec![0.0; 2 * row_halfwidth(&bounds, 0) as usize + 1]);
    for t in 1..=bounds.t_max {
        let w = row_halfwidth(&bounds, t);
        let prev = &rows[(t - 1) as usize];
        let mut row = Vec::with_capacity(2 * w as usize + 1);
        for x in -w..=w {
            // previous row has halfwidth w + 1: parents sit at indices
            // (x -+ 1) + (w + 1)
            let i = (x + w) as usize;
            let kv = k.value(x, t).expect("K covers its own trapezoid");
            row.push(0.5 * (prev[i] + prev[i + 2]) + prefactor * kv.powi(4));
        }
        rows.push(row);
    }
    YField {
        prefactor,
        bounds,
        rows,
    }
}

/// Direct double-sum evaluation of Y at one site, for checking the forward
/// accumulation against the definition.
pub fn y_direct(
    k: &KField,
    kernel: &WalkKernel<f64>,
    prefactor: f64,
    x: i64,
    t: i64,
) -> Result<f64, RenormError> {
    if kernel.horizon() < t as usize {
        return Err(RenormError::KernelHorizon {
            have: kernel.horizon(),
            need: t as usize,
        });
    }
    let mut acc = 0.0;
    for s in 1..=t {
        let reach = t - s;
        for z in ((x - reach)..=(x + reach)).step_by(2) {
            let p = kernel.p(x - z, (t - s) as usize);
            if p != 0.0 {
                let kv = k
                    .value(z, s)
                    .ok_or(RenormError::OutOfBounds { x: z, t: s })?;
                acc += p * kv.powi(4);
            }
        }
    }
    Ok(prefactor * acc)
}

/// Deterministic prediction of E[Y(x, t)] from the exact xi moments and the
/// windowed kernel sums; exact given independence, up to nothing.
pub fn y_mean_prediction(
    law: &NoiseLaw,
    beta: f64,
    n: u64,
    epsilon: f64,
    t: i64,
    c: f64,
    kernel: &WalkKernel<f64>,
) -> Result<f64, RenormError> {
    let theta = beta * (n as f64).powf(-0.25);
    let (m2, _m3, m4) = xi_central_moments(law, theta)?;
    let window = k_window(n, epsilon);
    let prefactor = y_prefactor(c, beta);
    let mut acc = 0.0;
    for s in 1..=t {
        let (sq, p4) = window_delta_sums(kernel, s, window);
        // K coefficients are D/2
        acc += linear_comb_fourth_moment(sq / 4.0, p4 / 16.0, m2, m4);
    }
    Ok(prefactor * acc)
}

/// Same prediction for the beta = 0 wiring (raw N^(-1/4) y, no 1/2).
pub fn y_mean_prediction_beta0(
    law: &NoiseLaw,
    n: u64,
    epsilon: f64,
    t: i64,
    c: f64,
    kernel: &WalkKernel<f64>,
) -> Result<f64, RenormError> {
    let mu2 = law.exact_moment(2)?;
    let mu4 = law.exact_moment(4)?;
    let nf = n as f64;
    let (m2, m4) = (mu2 / nf.sqrt(), mu4 / nf);
    let window = k_window(n, epsilon);
    let mut acc = 0.0;
    for s in 1..=t {
        let (sq, p4) = window_delta_sums(kernel, s, window);
        acc += linear_comb_fourth_moment(sq, p4, m2, m4);
    }
    Ok(c * acc)
}

/// Per-slice flatness of Y and the sup of its spatial two-step differences.
#[derive(Debug, Clone, Serialize)]
pub struct FlatnessReport {
    /// sup_x |Y(x, t) - slice mean| per time slice.
    pub per_slice_sup_dev: Vec<f64>,
    pub sup_dev: f64,
    /// sup over stored pairs |Y(x+2, t) - Y(x, t)|.
    pub sup_spatial_diff: f64,
}

pub fn y_flatness(y: &YField) -> FlatnessReport {
    let bounds = y.bounds();
    let mut per_slice = Vec::with_capacity(bounds.t_max as usize + 1);
    let mut sup_spatial: f64 = 0.0;
    for t in 0..=bounds.t_max {
        let w = row_halfwidth(&bounds, t);
        // the two parity classes are independent fields; measure each
        let mut dev: f64 = 0.0;
        for class in 0..2i64 {
            let vals: Vec<f64> = (-w..=w)
                .filter(|x| (x - class).rem_euclid(2) == 0)
                .map(|x| y.value(x, t).unwrap())
                .collect();
            if vals.is_empty() {
                continue;
            }
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            dev = vals
                .iter()
                .map(|v| (v - mean).abs())
                .fold(dev, f64::max);
            for pair in vals.windows(2) {
                sup_spatial = sup_spatial.max((pair[1] - pair[0]).abs());
            }
        }
        per_slice.push(dev);
    }
    let sup_dev = per_slice.iter().cloned().fold(0.0, f64::max);
    FlatnessReport {
        per_slice_sup_dev: per_slice,
        sup_dev,
        sup_spatial_diff: sup_spatial,
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

fn lookup(rows: &[Vec<f64>], bounds: &GrowBounds, x: i64, t: i64) -> Option<f64> {
    if t < 0 || t > bounds.t_max {
        return None;
    }
    let w = row_halfwidth(bounds, t);
    if x.abs() > w {
        return None;
    }
    Some(rows[t as usize][(x + w) as usize])
}
