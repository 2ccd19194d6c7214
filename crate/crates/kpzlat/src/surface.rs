//! Growth rules and the lattice growth engine.
//!
//! A rule is a symmetric, shift-equivariant update psi(u, v); by equivariance
//! it reduces to the one-variable nonlinearity phi(u) = psi(u/2, -u/2) acting
//! on neighbor differences. The engine evolves heights on one parity class of
//! the lattice, trimming to the backward light cone of the requested
//! rectangle.

use crate::expr::Expr;
use crate::noise::{NoiseError, NoiseLaw, SiteNoise};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SurfaceError {
    #[error("inadmissible rule: {0}")]
    Inadmissible(String),
    #[error("derivative extraction unstable: Richardson levels disagree by {spread:e} (> {threshold:e})")]
    DerivativeExtraction { spread: f64, threshold: f64 },
    #[error("nonlinearity argument {arg} at site ({x}, {t}) left the validated range (+-{halfwidth}); N too small for this rule")]
    BlowUp {
        x: i64,
        t: i64,
        arg: f64,
        halfwidth: f64,
    },
    #[error("log-MGF drift requires beta != 0")]
    LogMgfWithZeroBeta,
    #[error("bad bounds: {0}")]
    BadBounds(String),
    #[error(transparent)]
    Noise(#[from] NoiseError),
    #[error(transparent)]
    Expr(#[from] crate::expr::ExprError),
}

/// Per-step drift subtracted during growth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum DriftMode {
    None,
    /// Four-moment surrogate of the log-MGF drift.
    Cumulant,
    /// (1/beta) log m(beta N^(-1/4)) per step; exact centering of the
    /// polymer comparison.
    #[default]
    LogMgf,
}

#[derive(Debug, Clone)]
enum RuleKind {
    Linear,
    /// psi = (u+v)/2 + (u-v)^2, the quadratic model rule.
    Quadratic,
    /// psi = (u+v)/2 + sqrt(1 + (u-v)^2).
    SqrtRule,
    /// phi(u) = log cosh(beta u) / beta; matches the polymer recursion.
    Polymer { beta: f64 },
    Custom { expr: Expr },
}

/// A validated growth rule with its extracted scalars.
#[derive(Debug, Clone)]
pub struct GrowthRule {
    name: String,
    kind: RuleKind,
    beta: f64,
    /// Fourth derivative of phi at 0 (= fourth u-partial of psi at the
    /// origin).
    d4: f64,
    c: f64,
    psi00: f64,
    phi_halfwidth: f64,
}

/// How to obtain beta and the fourth derivative for a custom rule.
#[derive(Debug, Clone, Copy)]
pub enum DerivSpec {
    Analytic { beta: f64, d4: f64 },
    FiniteDifference,
}

/// Validated argument range for custom nonlinearities. Named rules have
/// closed forms that are smooth everywhere and carry no cap.
pub const DEFAULT_PHI_HALFWIDTH: f64 = 0.5;

const EQUIVARIANCE_TOL: f64 = 1e-10;
const SYMMETRY_TOL: f64 = 1e-12;
const RICHARDSON_TOL: f64 = 1e-5;

impl GrowthRule {
    pub fn linear() -> Self {
        GrowthRule {
            name: "linear".into(),
            kind: RuleKind::Linear,
            beta: 0.0,
            d4: 0.0,
            c: 0.0,
            psi00: 0.0,
            phi_halfwidth: f64::INFINITY,
        }
    }

    pub fn quadratic() -> Self {
        GrowthRule {
            name: "kpz-quadratic".into(),
            kind: RuleKind::Quadratic,
            beta: 2.0,
            d4: 0.0,
            c: 2.0 / 3.0,
            psi00: 0.0,
            phi_halfwidth: f64::INFINITY,
        }
    }

    pub fn sqrt_rule() -> Self {
        GrowthRule {
            name: "kpz-sqrt".into(),
            kind: RuleKind::SqrtRule,
            beta: 1.0,
            d4: -3.0,
            c: -1.0 / 24.0,
            psi00: 1.0,
            phi_halfwidth: f64::INFINITY,
        }
    }

    pub fn polymer(beta: f64) -> Self {
        assert!(beta != 0.0, "polymer rule needs beta != 0");
        GrowthRule {
            name: format!("polymer(beta={beta})"),
            kind: RuleKind::Polymer { beta },
            beta,
            d4: -2.0 * beta.powi(3),
            c: 0.0,
            psi00: 0.0,
            phi_halfwidth: f64::INFINITY,
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "linear" => Some(Self::linear()),
            "kpz-quadratic" => Some(Self::quadratic()),
            "kpz-sqrt" => Some(Self::sqrt_rule()),
            _ => None,
        }
    }

    /// Build a rule from an expression over (u, v), validating admissibility
    /// on a grid around the origin and extracting derivatives as requested.
    pub fn from_expr(
        name: &str,
        text: &str,
        derivs: DerivSpec,
        phi_halfwidth: Option<f64>,
    ) -> Result<Self, SurfaceError> {
        let expr = Expr::parse(text)?;
        let psi00 = expr.eval(0.0, 0.0);
        let mut rule = GrowthRule {
            name: name.into(),
            kind: RuleKind::Custom { expr },
            beta: 0.0,
            d4: 0.0,
            c: 0.0,
            psi00,
            phi_halfwidth: phi_halfwidth.unwrap_or(DEFAULT_PHI_HALFWIDTH),
        };
        rule.validate()?;
        match derivs {
            DerivSpec::Analytic { beta, d4 } => {
                rule.beta = beta;
                rule.d4 = d4;
            }
            DerivSpec::FiniteDifference => {
                let (beta, d4) = rule.extract_derivatives()?;
                rule.beta = beta;
                rule.d4 = d4;
            }
        }
        rule.c = rule.d4 / 24.0 + rule.beta.powi(3) / 12.0;
        Ok(rule)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn d4(&self) -> f64 {
        self.d4
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn psi00(&self) -> f64 {
        self.psi00
    }

    pub fn phi_halfwidth(&self) -> f64 {
        self.phi_halfwidth
    }

    /// The update function as given (constant offset included).
    pub fn psi(&self, u: f64, v: f64) -> f64 {
        match &self.kind {
            RuleKind::Linear => 0.5 * (u + v),
            RuleKind::Quadratic => 0.5 * (u + v) + (u - v) * (u - v),
            RuleKind::SqrtRule => 0.5 * (u + v) + (1.0 + (u - v) * (u - v)).sqrt(),
            RuleKind::Polymer { beta } => 0.5 * (u + v) + ln_cosh(beta * (u - v)) / beta,
            RuleKind::Custom { expr } => expr.eval(u, v),
        }
    }

    /// Reduced nonlinearity with the constant offset removed: phi(0) = 0.
    pub fn phi(&self, u: f64) -> f64 {
        match &self.kind {
            RuleKind::Linear => 0.0,
            RuleKind::Quadratic => u * u,
            RuleKind::SqrtRule => (1.0 + u * u).sqrt() - 1.0,
            RuleKind::Polymer { beta } => ln_cosh(beta * u) / beta,
            RuleKind::Custom { expr } => expr.eval(0.5 * u, -0.5 * u) - self.psi00,
        }
    }

    fn validate(&self) -> Result<(), SurfaceError> {
        let grid: Vec<f64> = (-5..=5).map(|i| i as f64 * 0.1).collect();
        for &u in &grid {
            for &v in &grid {
                let s = self.psi(u, v) - self.psi(v, u);
                if s.abs() > SYMMETRY_TOL {
                    return Err(SurfaceError::Inadmissible(format!(
                        "symmetry fails at ({u}, {v}): psi(u,v) - psi(v,u) = {s:e}"
                    )));
                }
                for shift in [-0.31, 0.17, 0.5] {
                    let e = self.psi(u + shift, v + shift) - self.psi(u, v) - shift;
                    if e.abs() > EQUIVARIANCE_TOL {
                        return Err(SurfaceError::Inadmissible(format!(
                            "shift equivariance fails at ({u}, {v}) + {shift}: residual {e:e}"
                        )));
                    }
                }
            }
        }
        for &u in &grid {
            // phi(u) = psi(u, 0) - u/2, and phi is even
            let rel = self.phi(u) + self.psi00 - (self.psi(u, 0.0) - 0.5 * u);
            if rel.abs() > EQUIVARIANCE_TOL {
                return Err(SurfaceError::Inadmissible(format!(
                    "phi reduction fails at {u}: residual {rel:e}"
                )));
            }
            if (self.phi(u) - self.phi(-u)).abs() > SYMMETRY_TOL {
                return Err(SurfaceError::Inadmissible(format!(
                    "phi not even at {u}"
                )));
            }
        }
        Ok(())
    }

    /// Richardson-extrapolated central differences of phi at 0.
    fn extract_derivatives(&self) -> Result<(f64, f64), SurfaceError> {
        let phi = |u: f64| self.phi(u);
        let beta = richardson(|h| fd2(&phi, h))?;
        let d4 = richardson(|h| fd4(&phi, h))?;
        Ok((beta, d4))
    }

    /// Finite-difference table of the first five derivatives of phi at 0,
    /// with their expected values (odd orders vanish, second is beta, fourth
    /// is the stored d4).
    pub fn phi_table_check(&self) -> PhiTable {
        let phi = |u: f64| self.phi(u);
        let h = 1.0 / 32.0;
        let fd1 = |h: f64| (phi(h) - phi(-h)) / (2.0 * h);
        let fd3 = |h: f64| {
            (phi(2.0 * h) - 2.0 * phi(h) + 2.0 * phi(-h) - phi(-2.0 * h)) / (2.0 * h * h * h)
        };
        let fd5 = |h: f64| {
            (phi(3.0 * h) - 4.0 * phi(2.0 * h) + 5.0 * phi(h) - 5.0 * phi(-h)
                + 4.0 * phi(-2.0 * h)
                - phi(-3.0 * h))
                / (2.0 * h.powi(5))
        };
        let estimates = [
            r1(fd1, h),
            r1(|h| fd2(&phi, h), h),
            r1(fd3, h),
            r1(|h| fd4(&phi, h), h),
            r1(fd5, h),
        ];
        let expected = [0.0, self.beta, 0.0, self.d4, 0.0];
        let mut deviations = [0.0; 5];
        for i in 0..5 {
            deviations[i] = estimates[i] - expected[i];
        }
        PhiTable {
            estimates,
            expected,
            deviations,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PhiTable {
    pub estimates: [f64; 5],
    pub expected: [f64; 5],
    pub deviations: [f64; 5],
}

fn fd2(phi: &impl Fn(f64) -> f64, h: f64) -> f64 {
    (phi(h) - 2.0 * phi(0.0) + phi(-h)) / (h * h)
}

/// One Richardson level for an O(h^2) difference scheme.
fn r1(d: impl Fn(f64) -> f64, h: f64) -> f64 {
    let d0 = d(h);
    let d1 = d(h / 2.0);
    d1 + (d1 - d0) / 3.0
}

fn fd4(phi: &impl Fn(f64) -> f64, h: f64) -> f64 {
    (phi(2.0 * h) - 4.0 * phi(h) + 6.0 * phi(0.0) - 4.0 * phi(-h) + phi(-2.0 * h)) / h.powi(4)
}

/// Two Richardson levels over step halvings from bases 2^-4, 2^-5, 2^-6;
/// the three accelerated values must agree to the stability threshold.
fn richardson(d: impl Fn(f64) -> f64) -> Result<f64, SurfaceError> {
    let mut accelerated = Vec::new();
    for k in 4..=6 {
        let h = (2.0f64).powi(-k);
        let d0 = d(h);
        let d1 = d(h / 2.0);
        let d2 = d(h / 4.0);
        let r1 = d1 + (d1 - d0) / 3.0;
        let r2 = d2 + (d2 - d1) / 3.0;
        accelerated.push(r2 + (r2 - r1) / 15.0);
    }
    let max = accelerated.iter().cloned().fold(f64::MIN, f64::max);
    let min = accelerated.iter().cloned().fold(f64::MAX, f64::min);
    let spread = max - min;
    if spread > RICHARDSON_TOL {
        return Err(SurfaceError::DerivativeExtraction {
            spread,
            threshold: RICHARDSON_TOL,
        });
    }
    Ok(accelerated[1])
}

pub fn ln_cosh(x: f64) -> f64 {
    // |x| + log1p(exp(-2|x|)) - log 2 avoids overflow for large arguments
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

// ---------------------------------------------------------------------------
// Growth engine

/// Target rectangle |x| <= x_max, 0 <= t <= t_max. Growth covers the full
/// backward light cone so every stored value is fully determined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowBounds {
    pub x_max: i64,
    pub t_max: i64,
}

impl GrowBounds {
    pub fn new(x_max: i64, t_max: i64) -> Result<Self, SurfaceError> {
        if x_max < 0 || t_max < 0 {
            return Err(SurfaceError::BadBounds(format!(
                "x_max {x_max}, t_max {t_max} must be nonnegative"
            )));
        }
        Ok(GrowBounds { x_max, t_max })
    }

    /// Half-width of the light-cone row at time t; endpoints share the
    /// parity class of the stored sites.
    fn row_halfwidth(&self, t: i64) -> i64 {
        self.padded_x_max() + (self.t_max - t)
    }

    fn padded_x_max(&self) -> i64 {
        // keep x_max + t_max even so row endpoints sit on the stored class
        if (self.x_max + self.t_max) % 2 == 0 {
            self.x_max
        } else {
            self.x_max + 1
        }
    }
}

/// Heights on one parity class (x + t even, when x_max + t_max is even) over
/// the light-cone trapezoid of a target rectangle.
#[derive(Debug, Clone)]
pub struct SurfaceField {
    pub n: u64,
    pub rule_name: String,
    pub drift_mode: DriftMode,
    pub seed: Option<u64>,
    bounds: GrowBounds,
    rows: Vec<Vec<f64>>,
}

impl SurfaceField {
    pub fn bounds(&self) -> GrowBounds {
        self.bounds
    }

    pub fn x_max(&self) -> i64 {
        self.bounds.x_max
    }

    pub fn t_max(&self) -> i64 {
        self.bounds.t_max
    }

    /// Height at (x, t); None off the stored trapezoid or parity class.
    pub fn height(&self, x: i64, t: i64) -> Option<f64> {
        if t < 0 || t > self.bounds.t_max {
            return None;
        }
        let w = self.bounds.row_halfwidth(t);
        if x.abs() > w || (x + w) % 2 != 0 {
            return None;
        }
        Some(self.rows[t as usize][((x + w) / 2) as usize])
    }

    pub fn row(&self, t: i64) -> &[f64] {
        &self.rows[t as usize]
    }

    pub fn max_abs(&self) -> f64 {
        self.rows
            .iter()
            .flat_map(|r| r.iter())
            .fold(0.0f64, |a, v| a.max(v.abs()))
    }
}

/// Per-step drift for a mode: zero, the exact per-step log-MGF, or its
/// four-moment surrogate.
pub fn step_drift(
    mode: DriftMode,
    beta: f64,
    law: &NoiseLaw,
    n: u64,
) -> Result<f64, SurfaceError> {
    let nf = n as f64;
    match mode {
        DriftMode::None => Ok(0.0),
        DriftMode::LogMgf => {
            if beta == 0.0 {
                return Err(SurfaceError::LogMgfWithZeroBeta);
            }
            let theta = beta * nf.powf(-0.25);
            Ok(law.mgf(theta)?.ln() / beta)
        }
        DriftMode::Cumulant => {
            let mu2 = law.exact_moment(2)?;
            let mu3 = law.exact_moment(3)?;
            let mu4 = law.exact_moment(4)?;
            Ok(0.5 * beta * mu2 / nf.sqrt()
                + beta * beta * mu3 / (6.0 * nf.powf(0.75))
                + beta.powi(3) * (mu4 - 3.0 * mu2 * mu2) / (24.0 * nf))
        }
    }
}

/// Evolve the surface from flat initial data.
pub fn grow(
    rule: &GrowthRule,
    law: &NoiseLaw,
    noise: &impl SiteNoise,
    n: u64,
    bounds: GrowBounds,
    drift_mode: DriftMode,
) -> Result<SurfaceField, SurfaceError> {
    grow_from(rule, law, noise, n, bounds, drift_mode, 0.0)
}

/// Evolve from the constant initial condition `offset`; shift equivariance
/// makes this the flat-start surface plus `offset`.
pub fn grow_from(
    rule: &GrowthRule,
    law: &NoiseLaw,
    noise: &impl SiteNoise,
    n: u64,
    bounds: GrowBounds,
    drift_mode: DriftMode,
    offset: f64,
) -> Result<SurfaceField, SurfaceError> {
    let drift = step_drift(drift_mode, rule.beta, law, n)?;
    let nq = (n as f64).powf(-0.25);
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(bounds.t_max as usize + 1);
    rows.push(vec![offset; bounds.row_halfwidth(0) as usize + 1]);
    for t in 1..=bounds.t_max {
        let w = bounds.row_halfwidth(t);
        let prev = &rows[(t - 1) as usize];
        let mut row = Vec::with_capacity(w as usize + 1);
        for i in 0..=w {
            // parents of x = -w + 2i sit at indices i and i+1 of the wider row
            let left = prev[i as usize];
            let right = prev[i as usize + 1];
            let diff = right - left;
            if !(diff.abs() <= rule.phi_halfwidth) {
                return Err(SurfaceError::BlowUp {
                    x: -w + 2 * i,
                    t,
                    arg: diff,
                    halfwidth: rule.phi_halfwidth,
                });
            }
            let x = -w + 2 * i;
            row.push(0.5 * (left + right) + rule.phi(diff) + nq * noise.y(x, t) - drift);
        }
        rows.push(row);
    }
    Ok(SurfaceField {
        n,
        rule_name: rule.name.clone(),
        drift_mode,
        seed: None,
        bounds,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::{LawNoise, MirroredNoise, TableNoise, ZeroNoise};

    #[test]
    fn named_rule_constants() {
        let q = GrowthRule::quadratic();
        assert_eq!((q.beta(), q.d4()), (2.0, 0.0));
        assert!((q.c() - 2.0 / 3.0).abs() < 1e-15);

        let s = GrowthRule::sqrt_rule();
        assert_eq!((s.beta(), s.d4()), (1.0, -3.0));
        assert!((s.c() + 1.0 / 24.0).abs() < 1e-15);
        assert_eq!(s.psi00(), 1.0);

        let l = GrowthRule::linear();
        assert_eq!((l.beta(), l.c()), (0.0, 0.0));

        let p = GrowthRule::polymer(1.5);
        assert_eq!(p.beta(), 1.5);
        assert!((p.c()).abs() < 1e-15);
    }

    #[test]
    fn custom_rule_finite_difference_extraction() {
        let r = GrowthRule::from_expr(
            "half-quadratic",
            "(u+v)/2 + 0.5*(u-v)^2",
            DerivSpec::FiniteDifference,
            None,
        )
        .unwrap();
        assert!((r.beta() - 1.0).abs() < 1e-5, "beta = {}", r.beta());
        assert!(r.d4().abs() < 1e-4, "d4 = {}", r.d4());
        assert!((r.c() - 1.0 / 12.0).abs() < 1e-5);
        assert_eq!(r.phi_halfwidth(), DEFAULT_PHI_HALFWIDTH);
    }

    #[test]
    fn custom_rule_matches_named_derivatives() {
        let r = GrowthRule::from_expr(
            "quad",
            "(u+v)/2 + (u-v)^2",
            DerivSpec::FiniteDifference,
            None,
        )
        .unwrap();
        assert!((r.beta() - 2.0).abs() < 1e-6);
        let s = GrowthRule::from_expr(
            "sqrt",
            "(u+v)/2 + sqrt(1+(u-v)^2)",
            DerivSpec::FiniteDifference,
            None,
        )
        .unwrap();
        assert!((s.beta() - 1.0).abs() < 1e-6);
        assert!((s.d4() + 3.0).abs() < 1e-4, "d4 = {}", s.d4());
        assert!((s.psi00() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn asymmetric_rule_rejected() {
        let err = GrowthRule::from_expr("bad", "u + (u-v)^2", DerivSpec::FiniteDifference, None);
        assert!(matches!(err, Err(SurfaceError::Inadmissible(_))));
        // not equivariant
        let err = GrowthRule::from_expr("bad2", "u*v", DerivSpec::FiniteDifference, None);
        assert!(matches!(err, Err(SurfaceError::Inadmissible(_))));
    }

    #[test]
    fn phi_tables() {
        let q = GrowthRule::quadratic().phi_table_check();
        assert!((q.estimates[1] - 2.0).abs() < 1e-6);
        for i in [0, 2, 4] {
            assert!(q.deviations[i].abs() < 1e-8);
        }
        let s = GrowthRule::sqrt_rule().phi_table_check();
        assert!((s.estimates[3] + 3.0).abs() < 1e-4);
        let l = GrowthRule::linear().phi_table_check();
        for d in l.deviations {
            assert!(d.abs() < 1e-8);
        }
        let p = GrowthRule::polymer(1.0).phi_table_check();
        assert!((p.estimates[3] + 2.0).abs() < 1e-4);
    }

    #[test]
    fn zero_noise_fixed_point() {
        for rule in [
            GrowthRule::quadratic(),
            GrowthRule::linear(),
            GrowthRule::polymer(2.0),
        ] {
            let f = grow(
                &rule,
                &NoiseLaw::zero(),
                &ZeroNoise,
                16,
                GrowBounds::new(8, 8).unwrap(),
                DriftMode::None,
            )
            .unwrap();
            assert_eq!(f.max_abs(), 0.0, "{}", rule.name());
        }
    }

    #[test]
    fn single_step_is_scaled_noise() {
        let law = NoiseLaw::rademacher();
        let noise = LawNoise::new(law.clone(), 5);
        let n = 16u64;
        let f = grow(
            &GrowthRule::quadratic(),
            &law,
            &noise,
            n,
            GrowBounds::new(4, 4).unwrap(),
            DriftMode::None,
        )
        .unwrap();
        for x in [-4i64, -2, 0, 2, 4] {
            let want = (n as f64).powf(-0.25) * noise.y(x + 1, 1);
            // x+1 keeps the noise site on the stored class when x_max+t_max is even
            assert_eq!(f.height(x + 1, 1).unwrap(), want);
        }
    }

    #[test]
    fn two_step_hand_example() {
        // quadratic rule, N = 1, drift off, noise +1 at (-1,1), -1 at (1,1):
        // f(0,2) = 0 + phi(-2) + y(0,2) = 4 + y(0,2)
        let noise = TableNoise {
            entries: vec![((-1, 1), 1.0), ((1, 1), -1.0), ((0, 2), 0.25)],
        };
        let f = grow(
            &GrowthRule::quadratic(),
            &NoiseLaw::zero(),
            &noise,
            1,
            GrowBounds::new(2, 2).unwrap(),
            DriftMode::None,
        )
        .unwrap();
        assert_eq!(f.height(0, 2).unwrap(), 4.25);
    }

    #[test]
    fn shift_equivariance_of_growth() {
        let law = NoiseLaw::uniform_unit_variance();
        let noise = LawNoise::new(law.clone(), 77);
        let bounds = GrowBounds::new(6, 12).unwrap();
        let rule = GrowthRule::sqrt_rule();
        let base = grow(&rule, &law, &noise, 64, bounds, DriftMode::LogMgf).unwrap();
        let h = 0.37;
        let shifted = grow_from(&rule, &law, &noise, 64, bounds, DriftMode::LogMgf, h).unwrap();
        for t in 0..=12 {
            let w = bounds.row_halfwidth(t);
            for x in (-w..=w).step_by(2) {
                let a = base.height(x, t).unwrap() + h;
                let b = shifted.height(x, t).unwrap();
                assert!((a - b).abs() < 1e-12, "({x},{t}): {a} vs {b}");
            }
        }
    }

    #[test]
    fn mirror_symmetry_of_growth() {
        let law = NoiseLaw::rademacher();
        let noise = LawNoise::new(law.clone(), 123);
        let mirrored = MirroredNoise(LawNoise::new(law.clone(), 123));
        let bounds = GrowBounds::new(6, 10).unwrap();
        let rule = GrowthRule::quadratic();
        let a = grow(&rule, &law, &noise, 256, bounds, DriftMode::None).unwrap();
        let b = grow(&rule, &law, &mirrored, 256, bounds, DriftMode::None).unwrap();
        for t in 0..=10 {
            let w = bounds.row_halfwidth(t);
            for x in (-w..=w).step_by(2) {
                assert_eq!(a.height(x, t), b.height(-x, t), "({x},{t})");
            }
        }
    }

    #[test]
    fn blow_up_reports_site() {
        let rule = GrowthRule::from_expr(
            "quad-capped",
            "(u+v)/2 + (u-v)^2",
            DerivSpec::Analytic { beta: 2.0, d4: 0.0 },
            Some(0.5),
        )
        .unwrap();
        let noise = TableNoise {
            entries: vec![((-1, 1), 1.0), ((1, 1), -1.0)],
        };
        let err = grow(
            &rule,
            &NoiseLaw::zero(),
            &noise,
            1,
            GrowBounds::new(2, 2).unwrap(),
            DriftMode::None,
        );
        // first offending site in scan order is (-2, 2), whose parents
        // (-3,1) and (-1,1) differ by 1
        match err {
            Err(SurfaceError::BlowUp { x, t, arg, .. }) => {
                assert_eq!((x, t), (-2, 2));
                assert_eq!(arg.abs(), 1.0);
            }
            other => panic!("expected blow-up, got {other:?}"),
        }
    }

    #[test]
    fn drift_modes() {
        let law = NoiseLaw::rademacher();
        let log = step_drift(DriftMode::LogMgf, 2.0, &law, 256).unwrap();
        let theta: f64 = 2.0 * 256f64.powf(-0.25);
        assert!((log - theta.cosh().ln() / 2.0).abs() < 1e-15);
        let cum = step_drift(DriftMode::Cumulant, 2.0, &law, 256).unwrap();
        // rademacher: mu2 = 1, mu3 = 0, mu4 = 1
        let want = 0.5 * 2.0 / 16.0 + 8.0 * (1.0 - 3.0) / (24.0 * 256.0);
        assert!((cum - want).abs() < 1e-15);
        assert!(matches!(
            step_drift(DriftMode::LogMgf, 0.0, &law, 256),
            Err(SurfaceError::LogMgfWithZeroBeta)
        ));
        assert_eq!(step_drift(DriftMode::Cumulant, 0.0, &law, 256).unwrap(), 0.0);
    }
}
