//! Numerical probes of the exponential-integral inequality
//!
//! ```text
//! ∫ (e^{α u²} - 1) dx ≤ H_α ‖u‖²_{L²}   whenever ‖(-Δ)^{1/4}u‖²_{L²} ≤ 1,
//! ```
//!
//! valid for α below some threshold ω ∈ (0, π]. Both ω and H_α are unknown;
//! the lab records empirical *lower* envelopes of H_α over trial families
//! and growth diagnostics along concentration, never an asserted ω.

use crate::grid::{Field, GridSpec};
use crate::scalar::{lit, sq, Real};
use crate::spectral::{gagliardo_seminorm_sq, SeminormMethod};
use crate::{Error, Result};

/// Rectangle-rule quadrature of `e^{α u²} - 1` (via `expm1`, so the
/// small-amplitude regime loses no digits). Finite on every grid by
/// construction; the testable content is the ratio against `‖u‖²_{L²}`.
pub fn moser_integral<T: Real>(u: &Field<T>, alpha: T) -> Result<T> {
    u.ensure_finite("moser_integral input")?;
    if !(alpha > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha.to_f64().unwrap_or(f64::NAN),
            constraint: "must be positive",
        });
    }
    let overflow_edge = lit::<T>(709.0);
    let max_abs = u.max_abs();
    if alpha * sq(max_abs) > overflow_edge {
        return Err(Error::Overflow {
            context: "moser_integral",
            amplitude: max_abs.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(u.integrate(|v| (alpha * v * v).exp_m1()))
}

/// One recorded trial of [`probe_h_alpha`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord<T> {
    pub trial_id: usize,
    pub seminorm_sq: T,
    pub l2_sq: T,
    pub integral: T,
    /// `integral / l2_sq` — a lower witness for `H_α`.
    pub ratio: T,
}

/// Trial family generators. Families are fixed, parameter-swept, and
/// deterministic, so probes are reproducible run to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialFamily {
    /// `A e^{-x²/(2σ²)}` over a log grid of widths and amplitudes.
    Gaussians,
    /// Compact bumps `A exp(1 - 1/(1-(x/w)²))` over widths and amplitudes.
    Bumps,
    /// Truncated logarithmic concentration profiles: `√ln(1/ρ)` inside
    /// `|x| ≤ ρ`, `ln(1/|x|)/√ln(1/ρ)` on `ρ < |x| ≤ 1`, zero outside,
    /// concentrated by shrinking ρ.
    LogProfiles,
}

impl TrialFamily {
    pub fn as_str(&self) -> &'static str {
        match self {
            TrialFamily::Gaussians => "gaussians",
            TrialFamily::Bumps => "bumps",
            TrialFamily::LogProfiles => "log_profiles",
        }
    }

    /// Generates `budget` trial fields, ordered by trial index.
    fn generate<T: Real>(&self, grid: GridSpec<T>, budget: usize) -> Vec<Field<T>> {
        let mut out = Vec::with_capacity(budget);
        match self {
            TrialFamily::Gaussians | TrialFamily::Bumps => {
                // widths × amplitudes swept together on a fixed lattice
                let n_width = (budget as f64).sqrt().ceil() as usize;
                let mut k = 0usize;
                'outer: for iw in 0..n_width {
                    for ia in 0..n_width {
                        if k >= budget {
                            break 'outer;
                        }
                        let sigma = lit::<T>(0.25) * lit::<T>(1.5f64.powi(iw as i32));
                        let amp = lit::<T>(1e-3) * lit::<T>(10f64.powf(ia as f64 * 3.0 / (n_width.max(2) - 1) as f64));
                        let field = match self {
                            TrialFamily::Gaussians => Field::from_fn(grid, move |x| {
                                amp * (-(x * x) / (lit::<T>(2.0) * sigma * sigma)).exp()
                            }),
                            _ => Field::from_fn(grid, move |x| {
                                let r = x / (sigma * lit::<T>(4.0));
                                if r.abs() < T::one() {
                                    amp * (T::one() - T::one() / (T::one() - r * r)).exp()
                                } else {
                                    T::zero()
                                }
                            }),
                        };
                        out.push(field);
                        k += 1;
                    }
                }
            }
            TrialFamily::LogProfiles => {
                let h = grid.spacing().to_f64().unwrap_or(1.0);
                for k in 0..budget {
                    // ρ shrinks geometrically but stays resolvable (≥ 2h).
                    let rho_f = (0.5f64 * 0.7f64.powi(k as i32)).max(2.0 * h);
                    let rho = lit::<T>(rho_f);
                    let peak = (T::one() / rho).ln().sqrt();
                    out.push(Field::from_fn(grid, move |x| {
                        let a = x.abs();
                        if a <= rho {
                            peak
                        } else if a <= T::one() {
                            (T::one() / a).ln() / peak
                        } else {
                            T::zero()
                        }
                    }));
                }
            }
        }
        out
    }
}

/// Outcome of a probe: per-trial records plus the running sup of the ratio.
#[derive(Debug, Clone)]
pub struct MoserProbe<T> {
    pub alpha: T,
    pub family: TrialFamily,
    pub trials: Vec<TrialRecord<T>>,
    /// Empirical sup of `∫(e^{αu²}-1)/‖u‖²_{L²}` — a *lower* estimate of
    /// `H_α`.
    pub h_alpha_hat: T,
    /// Trials dropped because the exponential overflowed.
    pub skipped_overflow: usize,
    /// For [`TrialFamily::LogProfiles`]: ratios in concentration order,
    /// whose growth trend the caller reports per α.
    pub concentration_ratios: Vec<T>,
}

impl<T: Real> MoserProbe<T> {
    pub const CSV_HEADER: &'static str = "trial_id,alpha,seminorm_sq,l2_sq,integral,ratio";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for t in &self.trials {
            out.push_str(&format!(
                "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                t.trial_id, self.alpha, t.seminorm_sq, t.l2_sq, t.integral, t.ratio
            ));
        }
        out
    }

    /// Whether the concentration ratios are nondecreasing (reported, not
    /// asserted: the trend, together with its growth rate, is one-sided
    /// evidence about the threshold).
    pub fn concentration_nondecreasing(&self) -> bool {
        self.concentration_ratios
            .windows(2)
            .all(|w| w[1] >= w[0] * (T::one() - lit::<T>(1e-12)))
    }
}

/// Probes the empirical `H_α` over a trial family. Every trial is
/// amplitude-rescaled so its Gagliardo seminorm² is `min(1, seminorm²)`
/// exactly — the constraint side of the inequality; overflowing trials are
/// skipped and counted.
pub fn probe_h_alpha<T: Real>(
    grid: GridSpec<T>,
    alpha: T,
    family: TrialFamily,
    budget: usize,
) -> Result<MoserProbe<T>> {
    if !(alpha > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha.to_f64().unwrap_or(f64::NAN),
            constraint: "must be positive",
        });
    }
    let mut trials = Vec::new();
    let mut h_hat = T::zero();
    let mut skipped = 0usize;
    let mut concentration_ratios = Vec::new();
    for (trial_id, raw) in family.generate(grid, budget).into_iter().enumerate() {
        let semi = gagliardo_seminorm_sq(&raw, SeminormMethod::Spectral)?;
        let u = if semi > T::one() {
            raw.scale(T::one() / semi.sqrt())
        } else {
            raw
        };
        let semi = gagliardo_seminorm_sq(&u, SeminormMethod::Spectral)?;
        debug_assert!(semi <= T::one() + lit::<T>(1e-10));
        let l2_sq = u.integrate(sq);
        if l2_sq == T::zero() {
            continue;
        }
        match moser_integral(&u, alpha) {
            Ok(integral) => {
                let ratio = integral / l2_sq;
                h_hat = h_hat.max(ratio);
                if family == TrialFamily::LogProfiles {
                    concentration_ratios.push(ratio);
                }
                trials.push(TrialRecord {
                    trial_id,
                    seminorm_sq: semi,
                    l2_sq,
                    integral,
                    ratio,
                });
            }
            Err(Error::Overflow { .. }) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(MoserProbe {
        alpha,
        family,
        trials,
        h_alpha_hat: h_hat,
        skipped_overflow: skipped,
        concentration_ratios,
    })
}

/// Outcome of [`lambda_bound_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaBoundReport<T> {
    /// `‖u‖ > ρ₀`: the bound's hypothesis fails, nothing to check.
    NotApplicable { norm: T, rho0: T },
    /// The exactly-testable first inequality of the uniform bound:
    /// `∫(e^{αu²}-1) ≤ ∫(e^{αρ₀²(u/‖u‖)²}-1)`, with the measured slack.
    Checked {
        lhs: T,
        rhs: T,
        slack: T,
        holds: bool,
    },
}

/// Verifies the amplitude-monotonicity step behind the uniform bound
/// `∫(e^{αu²}-1) ≤ Λ(α, ρ₀)` for `‖u‖ ≤ ρ₀`: pointwise
/// `αu² ≤ αρ₀²(u/‖u‖)²`, so the two integrals are ordered; they coincide
/// to round-off at `‖u‖ = ρ₀`.
pub fn lambda_bound_check<T: Real>(
    u: &Field<T>,
    alpha: T,
    rho0: T,
) -> Result<LambdaBoundReport<T>> {
    if !(rho0 > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "rho0",
            value: rho0.to_f64().unwrap_or(f64::NAN),
            constraint: "must be positive",
        });
    }
    let norm = crate::spectral::norms(u)?.h_half_sq.sqrt();
    if norm > rho0 {
        return Ok(LambdaBoundReport::NotApplicable { norm, rho0 });
    }
    if norm == T::zero() {
        return Err(Error::ZeroField {
            context: "lambda_bound_check",
        });
    }
    let lhs = moser_integral(u, alpha)?;
    let scaled = u.scale(rho0 / norm);
    let rhs = moser_integral(&scaled, alpha)?;
    let slack = rhs - lhs;
    Ok(LambdaBoundReport::Checked {
        lhs,
        rhs,
        slack,
        holds: lhs <= rhs + lit::<T>(1e-12) * (lhs.abs() + rhs.abs()),
    })
}
