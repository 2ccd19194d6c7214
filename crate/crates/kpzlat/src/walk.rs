//! Simple-random-walk transition kernel p(x, t), the spatial difference
//! kernel D(x, t) = p(x+1, t) - p(x-1, t), the kernel constants obtained by
//! summing powers of D, and the lazy-difference-walk generating functions
//! with brute-force enumeration oracles.

use crate::noise::NoiseLaw;
use crate::num::Coeff;
use crate::series::PowerSeries;
use thiserror::Error;

/// Tabulating beyond this horizon costs more memory than any caller here
/// needs; constants are computed by streaming instead.
pub const MAX_TABLE_HORIZON: usize = 4096;

pub const MAX_BRUTE_TIME: usize = 14;

#[derive(Debug, Error)]
pub enum WalkError {
    #[error("horizon {0} exceeds kernel table capacity {MAX_TABLE_HORIZON}; use streaming constants")]
    Capacity(usize),
    #[error("brute-force enumeration capped at t <= {MAX_BRUTE_TIME}, got {0}")]
    BruteCapacity(usize),
    #[error("mu must be >= 1 (Cauchy-Schwarz), got {0}")]
    MuBelowOne(f64),
    #[error(transparent)]
    Noise(#[from] crate::noise::NoiseError),
}

// ---------------------------------------------------------------------------
// Kernel table

/// Tabulated p(x, t) and D(x, t) for t up to a horizon.
///
/// Row t of p lives on {-t, -t+2, ..., t}; row t of D lives on
/// {-t-1, -t+1, ..., t+1}. Values off the support are zero.
#[derive(Debug, Clone)]
pub struct WalkKernel<T> {
    horizon: usize,
    rows: Vec<Vec<T>>,
    delta_rows: Vec<Vec<T>>,
}

impl<T: Coeff> WalkKernel<T> {
    pub fn build(horizon: usize) -> Result<Self, WalkError> {
        if horizon > MAX_TABLE_HORIZON {
            return Err(WalkError::Capacity(horizon));
        }
        let mut rows: Vec<Vec<T>> = Vec::with_capacity(horizon + 1);
        rows.push(vec![T::one()]);
        for t in 1..=horizon {
            rows.push(next_row(&rows[t - 1]));
        }
        let delta_rows = rows.iter().map(|row| delta_row(row)).collect();
        Ok(WalkKernel {
            horizon,
            rows,
            delta_rows,
        })
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// p(x, t): probability the walk started at 0 sits at x at time t.
    pub fn p(&self, x: i64, t: usize) -> T {
        assert!(t <= self.horizon, "time {t} beyond kernel horizon");
        let ti = t as i64;
        if x.abs() > ti || (x + ti) % 2 != 0 {
            return T::zero();
        }
        self.rows[t][((x + ti) / 2) as usize].clone()
    }

    /// D(x, t) = p(x+1, t) - p(x-1, t).
    pub fn delta(&self, x: i64, t: usize) -> T {
        assert!(t <= self.horizon, "time {t} beyond kernel horizon");
        let ti = t as i64;
        if x.abs() > ti + 1 || (x + ti) % 2 == 0 {
            return T::zero();
        }
        self.delta_rows[t][((x + ti + 1) / 2) as usize].clone()
    }

    pub fn row(&self, t: usize) -> &[T] {
        &self.rows[t]
    }
}

fn next_row<T: Coeff>(prev: &[T]) -> Vec<T> {
    // p(x, t) = (p(x-1, t-1) + p(x+1, t-1)) / 2 on the widened support
    let n = prev.len();
    let mut row = vec![T::zero(); n + 1];
    for (i, v) in prev.iter().enumerate() {
        let half = v.clone() * T::half();
        row[i] = row[i].clone() + half.clone();
        row[i + 1] = row[i + 1].clone() + half;
    }
    row
}

fn delta_row<T: Coeff>(row: &[T]) -> Vec<T> {
    // D support has two more entries than the p row
    let n = row.len();
    let mut out = vec![T::zero(); n + 1];
    for (i, slot) in out.iter_mut().enumerate() {
        let plus = if i < n { row[i].clone() } else { T::zero() };
        let minus = if i >= 1 { row[i - 1].clone() } else { T::zero() };
        *slot = plus - minus;
    }
    out
}

// ---------------------------------------------------------------------------
// Kernel constants

/// Sums of powers of D over all x and 0 <= t <= horizon, with the fitted
/// constant of the t^(-3/2) row bound and the induced tail estimates.
#[derive(Debug, Clone, serde::Serialize)]
pub struct KernelConstants {
    pub horizon: usize,
    /// sum of D^4 over the table.
    pub c1: f64,
    /// (sum of D^2)^2 - c1.
    pub c2: f64,
    /// sum of D^2 over the table.
    pub sum_sq: f64,
    /// sup over 1 <= t <= horizon of t^(3/2) * row sum of D^2.
    pub fitted_row_bound: f64,
    /// Bound on the D^2 mass beyond the horizon: 2 C / sqrt(horizon).
    pub sum_sq_tail_bound: f64,
    /// Bound on the D^4 mass beyond the horizon: C^2 / (2 horizon^2).
    pub c1_tail_bound: f64,
}

/// Streaming evaluation over rows t = 0..=horizon; memory stays O(horizon).
pub fn kernel_constants(horizon: usize) -> KernelConstants {
    assert!(horizon >= 1);
    let mut row: Vec<f64> = vec![1.0];
    let mut sum_sq = 0.0f64;
    let mut c1 = 0.0f64;
    let mut fitted = 0.0f64;
    for t in 0..=horizon {
        if t > 0 {
            row = next_row(&row);
        }
        let d = delta_row(&row);
        let row_sq: f64 = d.iter().map(|v| v * v).sum();
        let row_p4: f64 = d.iter().map(|v| v * v * v * v).sum();
        sum_sq += row_sq;
        c1 += row_p4;
        if t >= 1 {
            fitted = fitted.max((t as f64).powf(1.5) * row_sq);
        }
    }
    let h = horizon as f64;
    KernelConstants {
        horizon,
        c1,
        c2: sum_sq * sum_sq - c1,
        sum_sq,
        fitted_row_bound: fitted,
        sum_sq_tail_bound: 2.0 * fitted / h.sqrt(),
        c1_tail_bound: fitted * fitted / (2.0 * h * h),
    }
}

/// Row sums of D^2 for t in (lo, hi], for tail diagnostics.
pub fn delta_sq_row_sums(lo: usize, hi: usize) -> Vec<f64> {
    let mut row: Vec<f64> = vec![1.0];
    let mut out = Vec::new();
    for t in 1..=hi {
        row = next_row(&row);
        if t > lo {
            let d = delta_row(&row);
            out.push(d.iter().map(|v| v * v).sum());
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Lazy difference walk generating functions
//
// (S - S')/2 for two independent simple walks is a lazy walk: stay with
// probability 1/2, step +-1 with probability 1/4 each. N_t counts its
// returns to 0 during times 1..=t.

/// First-return generating function P(z) = 1 - sqrt(1 - z).
pub fn series_p<T: Coeff>(order: usize) -> PowerSeries<T> {
    let one = PowerSeries::constant(T::one(), order);
    one.sub(&PowerSeries::sqrt_one_minus_z(order))
}

/// R(z) = -1 + 1/sqrt(1 - z), the tail-mass remainder series.
pub fn series_r<T: Coeff>(order: usize) -> PowerSeries<T> {
    let one = PowerSeries::constant(T::one(), order);
    PowerSeries::inv_sqrt_one_minus_z(order).sub(&one)
}

/// O(z), SO(z): occupation-at-zero and strictly-above-then-return series.
///
/// O(n) is the probability the lazy walk is at 0 at time n having stayed
/// >= 0 up to then; SO(n) the probability it stays strictly above 0 on
/// 1..n-1 and returns at n. Closed forms come from the quadratic
/// O = SO * O + 1 with SO = z^2 O / 16 + z / 2.
pub fn series_o_so<T: Coeff>(order: usize) -> (PowerSeries<T>, PowerSeries<T>) {
    let n = order + 2;
    let sqrt = PowerSeries::<T>::sqrt_one_minus_z(n);
    let one = PowerSeries::constant(T::one(), n);
    let half_z = {
        let mut v = vec![T::zero(); n + 1];
        v[1] = T::half();
        PowerSeries::from_coeffs(v)
    };
    // core = 1 - z/2 - sqrt(1 - z) = (z^2 / 8) O(z)
    let core = one.sub(&half_z).sub(&sqrt);
    let o_full = core.shift_down(2).scale(&T::from_int(8));
    let so_full = half_z.add(&core.scale(&T::half()));
    let truncate =
        |s: &PowerSeries<T>| PowerSeries::from_coeffs(s.coeffs()[..=order].to_vec());
    (truncate(&o_full), truncate(&so_full))
}

/// E(z) with coefficient t equal to E[mu^(N_t)]:
/// E(z) = (1/sqrt(1-z)) * 1/(1 - mu (1 - sqrt(1-z))).
pub fn series_e<T: Coeff>(mu: T, order: usize) -> Result<PowerSeries<T>, WalkError> {
    if mu < T::one() {
        return Err(WalkError::MuBelowOne(mu.to_f64()));
    }
    let p = series_p::<T>(order);
    let one = PowerSeries::constant(T::one(), order);
    let denom = one.sub(&p.scale(&mu));
    Ok(PowerSeries::inv_sqrt_one_minus_z(order).mul(&denom.recip()))
}

/// mu = m(2 beta N^(-1/4)) / m(beta N^(-1/4))^2, asserted >= 1.
pub fn mu_of(law: &NoiseLaw, beta: f64, n: u64) -> Result<f64, WalkError> {
    let theta = beta * (n as f64).powf(-0.25);
    let m1 = law.mgf(theta)?;
    let m2 = law.mgf(2.0 * theta)?;
    let mu = m2 / (m1 * m1);
    debug_assert!(mu >= 1.0 - 1e-12, "mu = {mu} violates Cauchy-Schwarz");
    Ok(mu.max(1.0))
}

/// Exact moments of the lazy-walk return count by exhaustive enumeration of
/// all 3^t step sequences with weights (1/4, 1/2, 1/4).
#[derive(Debug, Clone, PartialEq)]
pub struct LazyWalkMoments<T> {
    pub e_mu_nt: T,
    pub e_nt: T,
    pub e_nt2: T,
}

pub fn lazy_walk_brute<T: Coeff>(t: usize, mu: T) -> Result<LazyWalkMoments<T>, WalkError> {
    if t > MAX_BRUTE_TIME {
        return Err(WalkError::BruteCapacity(t));
    }
    let quarter = T::from_ratio(1, 4);
    let mut acc = LazyWalkMoments {
        e_mu_nt: T::zero(),
        e_nt: T::zero(),
        e_nt2: T::zero(),
    };
    enumerate_paths(t, 0, 0, T::one(), &mu, &quarter, &mut acc);
    Ok(acc)
}

fn enumerate_paths<T: Coeff>(
    remaining: usize,
    pos: i64,
    returns: u32,
    weight: T,
    mu: &T,
    quarter: &T,
    acc: &mut LazyWalkMoments<T>,
) {
    if remaining == 0 {
        let mut mu_pow = T::one();
        for _ in 0..returns {
            mu_pow = mu_pow * mu.clone();
        }
        acc.e_mu_nt = acc.e_mu_nt.clone() + weight.clone() * mu_pow;
        let r = T::from_int(returns as i64);
        acc.e_nt = acc.e_nt.clone() + weight.clone() * r.clone();
        acc.e_nt2 = acc.e_nt2.clone() + weight * r.clone() * r;
        return;
    }
    for (step, w) in [(-1i64, quarter.clone()), (0, T::half()), (1, quarter.clone())] {
        let next = pos + step;
        let ret = returns + (next == 0) as u32;
        enumerate_paths(
            remaining - 1,
            next,
            ret,
            weight.clone() * w,
            mu,
            quarter,
            acc,
        );
    }
}

/// Monte Carlo moments of N_t for horizons beyond the enumeration cap.
pub fn lazy_walk_mc_nt2(t: usize, replicas: u64, seed: u64) -> (f64, f64) {
    let law = NoiseLaw::rademacher();
    let mut sum = 0.0;
    let mut sum2 = 0.0;
    for r in 0..replicas {
        let key = crate::noise::derive_seed(seed, r);
        let mut pos = 0i64;
        let mut returns = 0u64;
        for s in 0..t {
            // two independent fair bits make one lazy step
            let a = law.sample(key, s as i64, 1) > 0.0;
            let b = law.sample(key, s as i64, 2) > 0.0;
            pos += match (a, b) {
                (true, true) => 1,
                (false, false) => -1,
                _ => 0,
            };
            returns += (pos == 0) as u64;
        }
        sum += returns as f64;
        sum2 += (returns * returns) as f64;
    }
    (sum / replicas as f64, sum2 / replicas as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    #[test]
    fn kernel_small_values() {
        let k = WalkKernel::<f64>::build(4).unwrap();
        assert_eq!(k.p(0, 0), 1.0);
        assert_eq!(k.p(1, 1), 0.5);
        assert_eq!(k.p(-1, 1), 0.5);
        assert_eq!(k.p(0, 2), 0.5);
        assert_eq!(k.p(2, 2), 0.25);
        assert_eq!(k.p(-2, 2), 0.25);
        assert_eq!(k.p(3, 2), 0.0);
        assert_eq!(k.p(1, 2), 0.0); // parity
        assert_eq!(k.delta(1, 2), -0.25);
    }

    #[test]
    fn kernel_rows_normalized_and_antisymmetric() {
        let k = WalkKernel::<f64>::build(64).unwrap();
        for t in 0..=64usize {
            let sum: f64 = k.row(t).iter().sum();
            assert!((sum - 1.0).abs() < 1e-14, "row {t} sum {sum}");
            let dsum: f64 = (-(t as i64 + 1)..=(t as i64 + 1))
                .map(|x| k.delta(x, t))
                .sum();
            assert!(dsum.abs() < 1e-14);
            for x in 0..=(t as i64 + 1) {
                assert!((k.delta(-x, t) + k.delta(x, t)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn kernel_exact_matches_float() {
        let kq = WalkKernel::<Q>::build(12).unwrap();
        let kf = WalkKernel::<f64>::build(12).unwrap();
        for t in 0..=12usize {
            for x in -(t as i64)..=(t as i64) {
                assert_eq!(kq.p(x, t).to_f64(), kf.p(x, t));
            }
        }
    }

    #[test]
    fn kernel_capacity_error() {
        assert!(WalkKernel::<f64>::build(MAX_TABLE_HORIZON + 1).is_err());
    }

    #[test]
    fn row_delta_sq_sums_are_scaled_catalan_numbers() {
        // sum_x D(x,t)^2 = 2 [p(0,2t) - p(2,2t)] = 2 Catalan(t) / 4^t, since
        // the cross-correlation of two independent t-step walks is a 2t-step
        // walk. This certifies the Pascal recursion independently.
        let k = WalkKernel::<Q>::build(24).unwrap();
        let mut catalan = q(1, 1);
        for t in 0..=24usize {
            if t > 0 {
                // Cat(t) = Cat(t-1) * 2(2t-1)/(t+1)
                catalan = catalan * q(2 * (2 * t as i64 - 1), t as i64 + 1);
            }
            let row_sum: Q = (-(t as i64 + 1)..=(t as i64 + 1))
                .map(|x| {
                    let d = k.delta(x, t);
                    d.clone() * d
                })
                .fold(q(0, 1), |a, b| a + b);
            let mut pow4 = q(1, 1);
            for _ in 0..t {
                pow4 = pow4 * q(4, 1);
            }
            assert_eq!(row_sum * pow4, q(2, 1) * catalan.clone(), "t = {t}");
        }
    }

    #[test]
    fn constants_horizon_one() {
        // rows t = 0 (D = +-1 at x = -+1) and t = 1 (D = -+1/2 at x = +-2):
        // c1 = 2 + 1/8, sum_sq = 2 + 1/2
        let c = kernel_constants(1);
        assert!((c.c1 - 17.0 / 8.0).abs() < 1e-15);
        assert!((c.sum_sq - 2.5).abs() < 1e-15);
        assert!((c.c2 - (2.5 * 2.5 - 17.0 / 8.0)).abs() < 1e-15);
    }

    #[test]
    fn row_bound_is_uniform() {
        // t^(3/2) * row D^2 sum stays below a single constant over the horizon
        let c = kernel_constants(512);
        assert!(c.fitted_row_bound < 2.0, "fitted {}", c.fitted_row_bound);
        let rows = delta_sq_row_sums(0, 512);
        for (i, v) in rows.iter().enumerate() {
            let t = (i + 1) as f64;
            assert!(v * t.powf(1.5) <= c.fitted_row_bound + 1e-12);
        }
    }

    #[test]
    fn tail_rows_within_fitted_bound() {
        // Mass on rows (T, 2T] obeys the t^(-3/2) envelope with a factor-4
        // headroom; the fitted constant is approached from below, so the raw
        // envelope would be tight.
        let horizon = 400usize;
        let c = kernel_constants(horizon);
        let tail: f64 = delta_sq_row_sums(horizon, 2 * horizon).iter().sum();
        let envelope: f64 = (horizon + 1..=2 * horizon)
            .map(|t| 4.0 * c.fitted_row_bound * (t as f64).powf(-1.5))
            .sum();
        assert!(tail <= envelope, "tail {tail} vs envelope {envelope}");
        assert!(tail <= c.sum_sq_tail_bound);
    }

    #[test]
    fn first_return_series_leading_coefficients() {
        let p = series_p::<f64>(8);
        assert_eq!(p.coeff(0), 0.0);
        assert_eq!(p.coeff(1), 0.5);
        assert_eq!(p.coeff(2), 0.125);
    }

    #[test]
    fn first_return_against_enumeration() {
        // Exhaustive lazy-walk first-return probabilities at small times.
        // first return at 1: stay (1/2); at 2: up-down or down-up (1/8).
        let mut first_return = vec![0.0f64; 5];
        fn walk(depth: usize, pos: i64, t: usize, w: f64, out: &mut [f64]) {
            if pos == 0 && t > 0 {
                out[t] += w;
                return;
            }
            if t == depth {
                return;
            }
            for (s, sw) in [(-1, 0.25), (0, 0.5), (1, 0.25)] {
                walk(depth, pos + s, t + 1, w * sw, out);
            }
        }
        walk(4, 0, 0, 1.0, &mut first_return);
        let p = series_p::<f64>(4);
        for t in 1..=4 {
            assert!(
                (p.coeff(t) - first_return[t]).abs() < 1e-15,
                "t={t}: {} vs {}",
                p.coeff(t),
                first_return[t]
            );
        }
    }

    #[test]
    fn o_so_known_values_exact() {
        let (o, so) = series_o_so::<Q>(6);
        assert_eq!(o.coeff(0), q(1, 1));
        assert_eq!(o.coeff(1), q(1, 2));
        assert_eq!(o.coeff(2), q(5, 16));
        assert_eq!(so.coeff(0), q(0, 1));
        assert_eq!(so.coeff(1), q(1, 2));
        assert_eq!(so.coeff(2), q(1, 16));
    }

    #[test]
    fn coupled_identities_exact_to_order_20() {
        let order = 20;
        let (o, so) = series_o_so::<Q>(order);
        // SO = z^2 O / 16 + z/2
        let half_z = {
            let mut v = vec![Q::from_ratio(0, 1); order + 1];
            v[1] = q(1, 2);
            PowerSeries::from_coeffs(v)
        };
        let lhs = o.shift_up(2).scale(&q(1, 16)).add(&half_z);
        assert_eq!(lhs, so);
        // O = SO * O + 1
        let one = PowerSeries::constant(q(1, 1), order);
        assert_eq!(so.mul(&o).add(&one), o);
        // P = 2 (SO - z/2) + z/2
        let p = series_p::<Q>(order);
        assert_eq!(so.sub(&half_z).scale(&q(2, 1)).add(&half_z), p);
    }

    #[test]
    fn coupled_identities_float_tolerance() {
        let order = 20;
        let (o, so) = series_o_so::<f64>(order);
        let mut half_z = vec![0.0; order + 1];
        half_z[1] = 0.5;
        let half_z = PowerSeries::from_coeffs(half_z);
        let lhs = o.shift_up(2).scale(&(1.0 / 16.0)).add(&half_z);
        assert!(lhs.max_abs_diff(&so) < 1e-12);
        let one = PowerSeries::constant(1.0, order);
        assert!(so.mul(&o).add(&one).max_abs_diff(&o) < 1e-12);
    }

    #[test]
    fn e_series_relation_exact() {
        // E (1 - mu P) = 1 + R, coefficientwise.
        let order = 20;
        for mu in [q(1, 1), q(11, 10), q(2, 1)] {
            let e = series_e::<Q>(mu.clone(), order).unwrap();
            let p = series_p::<Q>(order);
            let one = PowerSeries::constant(q(1, 1), order);
            let lhs = e.mul(&one.sub(&p.scale(&mu)));
            let rhs = one.add(&series_r::<Q>(order));
            assert_eq!(lhs, rhs, "mu = {mu:?}");
        }
    }

    #[test]
    fn e_series_trivia() {
        let e = series_e::<f64>(1.0, 16).unwrap();
        for t in 0..=16 {
            assert!((e.coeff(t) - 1.0).abs() < 1e-12, "mu=1 coeff {t}");
        }
        let mu = 1.7;
        let e = series_e::<f64>(mu, 8).unwrap();
        assert_eq!(e.coeff(0), 1.0);
        assert!((e.coeff(1) - (1.0 + mu) / 2.0).abs() < 1e-14);
        assert!(series_e::<f64>(0.9, 4).is_err());
    }

    #[test]
    fn brute_force_trivia() {
        let m = lazy_walk_brute::<f64>(0, 2.0).unwrap();
        assert_eq!((m.e_mu_nt, m.e_nt, m.e_nt2), (1.0, 0.0, 0.0));
        let m = lazy_walk_brute::<f64>(1, 2.0).unwrap();
        assert_eq!(m.e_mu_nt, 1.5); // returns at time 1 with probability 1/2
        assert!(lazy_walk_brute::<f64>(15, 2.0).is_err());
    }

    #[test]
    fn brute_force_exact_matches_series() {
        // Rational enumeration against the closed-form series, exactly.
        let t = 9;
        for mu in [q(1, 1), q(11, 10), q(2, 1)] {
            let e = series_e::<Q>(mu.clone(), t).unwrap();
            for s in 0..=t {
                let m = lazy_walk_brute::<Q>(s, mu.clone()).unwrap();
                assert_eq!(m.e_mu_nt, e.coeff(s), "t={s} mu={mu:?}");
            }
        }
    }

    #[test]
    fn brute_force_float_matches_series_to_t12() {
        for mu in [1.0, 1.1, 2.0] {
            let e = series_e::<f64>(mu, 12).unwrap();
            for t in [4usize, 8, 12] {
                let m = lazy_walk_brute::<f64>(t, mu).unwrap();
                assert!(
                    (m.e_mu_nt - e.coeff(t)).abs() < 1e-10,
                    "t={t} mu={mu}: {} vs {}",
                    m.e_mu_nt,
                    e.coeff(t)
                );
            }
        }
    }

    #[test]
    fn nt2_growth_is_linear_in_horizon() {
        // E[N_t^2] / t stays bounded: exact values at small t, Monte Carlo
        // beyond the enumeration cap. The ratio saturates near 2 (half-normal
        // limit of N_t / sqrt(t)); linear growth in t means the ratio must
        // not keep climbing.
        let mut ratios = Vec::new();
        for t in [4usize, 8, 12] {
            let m = lazy_walk_brute::<f64>(t, 1.0).unwrap();
            ratios.push(m.e_nt2 / t as f64);
        }
        for t in [64usize, 256, 1024] {
            let (_, nt2) = lazy_walk_mc_nt2(t, 8000, 31);
            ratios.push(nt2 / t as f64);
        }
        let fitted = ratios.iter().cloned().fold(0.0, f64::max);
        assert!(fitted < 2.5, "E[N_t^2]/t grew to {fitted}");
        let last = ratios[ratios.len() - 1];
        let prev = ratios[ratios.len() - 2];
        assert!(last <= prev * 1.2, "ratio still climbing: {prev} -> {last}");
    }

    #[test]
    fn mu_examples() {
        let law = NoiseLaw::rademacher();
        assert!((mu_of(&law, 0.0, 16).unwrap() - 1.0).abs() < 1e-15);
        // theta = 1/2: cosh(1)/cosh(1/2)^2
        let expect = 1.0f64.cosh() / 0.5f64.cosh().powi(2);
        let got = mu_of(&law, 1.0, 16).unwrap();
        assert!((got - expect).abs() < 1e-14);
        assert!((got - 1.213_552_8).abs() < 1e-6);
    }

    #[test]
    fn mu_minus_one_scales_like_inverse_sqrt_n() {
        let law = NoiseLaw::rademacher();
        let beta = 1.0;
        let mut prev = mu_of(&law, beta, 64).unwrap() - 1.0;
        for n in [256u64, 1024, 4096] {
            let cur = mu_of(&law, beta, n).unwrap() - 1.0;
            let ratio = prev / cur;
            assert!(
                (ratio - 2.0).abs() < 0.3,
                "quadrupling N should halve mu - 1: ratio {ratio}"
            );
            prev = cur;
        }
    }
}
