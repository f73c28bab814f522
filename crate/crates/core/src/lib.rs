//! Ground states of the half-Laplacian scalar field equation
//!
//! ```text
//! (-Δ)^{1/2} u + u = f(u)   on ℝ,
//! ```
//!
//! computed by minimizing the energy
//!
//! ```text
//! J(u) = 1/2 ∫ ( |(-Δ)^{1/4} u|^2 + u^2 ) dx - ∫ F(u) dx
//! ```
//!
//! over the Nehari manifold `𝒩 = { u ≠ 0 : J'(u)u = 0 }`, together with
//! numerical checks of the variational machinery around it: hypothesis
//! audits for the nonlinearity, exponential (Ozawa/Trudinger–Moser type)
//! integral probes, Brezis–Lieb splitting experiments, and closed-form
//! oracles built on the explicit solution `u*(x) = 2/(1+x²)` of
//! `(-Δ)^{1/2} u + u = u²`.
//!
//! The line ℝ is truncated to a periodic box `[-L, L)` sampled on `N`
//! uniform points; the half-Laplacian acts spectrally through its Fourier
//! symbol `|ξ|`. All core math is generic over the scalar type via
//! [`Real`]; `f64` aliases are exported at the crate root.

pub mod functional;
pub mod grid;
pub mod moser;
pub mod nonlinearity;
pub mod quad;
pub mod scalar;
pub mod solver;
pub mod spectral;
pub mod verify;

mod error;

pub use error::Error;
pub use scalar::Real;

/// Result alias used by every fallible operation in this crate.
pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Double-precision grid description.
pub type GridSpec64 = grid::GridSpec<f64>;
/// Double-precision sampled field.
pub type Field64 = grid::Field<f64>;
/// Single-precision grid description.
pub type GridSpec32 = grid::GridSpec<f32>;
/// Single-precision sampled field.
pub type Field32 = grid::Field<f32>;
/// Double-precision nonlinearity.
pub type Nonlinearity64 = nonlinearity::Nonlinearity<f64>;
/// Double-precision energy report.
pub type EnergyReport64 = functional::EnergyReport<f64>;
