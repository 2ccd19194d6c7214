//! Lattice surface growth in the KPZ class.
//!
//! A growing surface updates each height from its two neighbors through a
//! shift-equivariant, symmetric rule plus small i.i.d. noise. This crate
//! implements the growth engine, the directed-polymer reference surface at
//! intermediate disorder, the random-walk kernel constants and generating
//! functions that control second moments, the renormalization fields K and Y,
//! parabolic rescaling with triangulated interpolation, and the ensemble
//! statistics (Kolmogorov-Smirnov based) used to check that differently
//! grown surfaces share one rescaled limit.
//!
//! The exact-arithmetic core (kernel tables, power series, enumeration
//! oracles) is generic over the scalar; concrete aliases below fix `f64` for
//! production use and `BigRational` for exact checks.

pub mod expr;
pub mod noise;
pub mod num;
pub mod polymer;
pub mod renorm;
pub mod series;
pub mod surface;
pub mod walk;

pub use num::Coeff;

/// Production scalar.
pub type Real = f64;
/// Exact scalar for identity checks.
pub type Rational = num_rational::BigRational;

pub type Series = series::PowerSeries<Real>;
pub type ExactSeries = series::PowerSeries<Rational>;
pub type Kernel = walk::WalkKernel<Real>;
pub type ExactKernel = walk::WalkKernel<Rational>;
