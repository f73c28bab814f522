use thiserror::Error;

/// Errors surfaced by the numeric operations.
///
/// Numeric *outcomes* of a solve (non-convergence, overflow mid-run) are
/// reported through [`crate::solver::Termination`]; this type covers
/// rejected inputs and genuinely exceptional states.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An input field contains NaN or infinite samples.
    #[error("non-finite value {value} at sample {index} in {context}")]
    NonFinite {
        context: &'static str,
        index: usize,
        value: f64,
    },

    /// Evaluating `F(u)` or `exp(α u²)` left the representable range.
    #[error("{context}: exponential overflow at amplitude |u| = {amplitude}")]
    Overflow {
        context: &'static str,
        amplitude: f64,
    },

    /// A constructor or operation parameter violates its admissible range.
    #[error("invalid parameter {name} = {value}: {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// The Nehari scaling `Φ(t u) = 0` has no sign change in the search
    /// bracket; the nonlinearity lacks the required superquadratic growth
    /// or the field is numerically degenerate.
    #[error(
        "no Nehari root: Φ(t·u) keeps sign {sign:+} over t ∈ [{t_lo:e}, {t_hi:e}]"
    )]
    NoNehariRoot { t_lo: f64, t_hi: f64, sign: f64 },

    /// An operation that requires `u ≠ 0` received the zero field.
    #[error("{context}: field is identically zero")]
    ZeroField { context: &'static str },

    /// A requested evaluation point does not lie on the grid.
    #[error("x = {x} is not a grid point (nearest {nearest})")]
    OffGrid { x: f64, nearest: f64 },
}
