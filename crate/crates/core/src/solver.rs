//! Ground-state computation: Sobolev-gradient descent constrained to the
//! Nehari manifold, with periodic recentering of the iterate's windowed
//! L² mass.
//!
//! One step: project the iterate onto 𝒩 by the Nehari scale, take a
//! backtracking (Armijo) step along the negative Sobolev gradient, accept
//! when the *re-projected* energy satisfies sufficient decrease. The dual
//! residual `‖g‖_{H^{1/2}}` is the stopping criterion; at a constrained
//! minimizer the full gradient vanishes, so no tangential splitting is
//! needed.

use crate::functional::{energy, nehari_scale, sobolev_gradient, EnergyReport};
use crate::grid::{Field, GridSpec};
use crate::nonlinearity::Nonlinearity;
use crate::scalar::{lit, sq, Real};
use crate::spectral::norms;
use crate::{Error, Result};

/// Initial iterate.
#[derive(Debug, Clone)]
pub enum InitSpec<T> {
    /// `A · e^{-x²/(2 width²)}`; with `amplitude: None` the amplitude is
    /// rescaled so the first Nehari projection lands at `t₀ ∈ [0.1, 10]`.
    Gaussian { width: T, amplitude: Option<T> },
    /// Compact bump `A · exp(1 - 1/(1 - (x/width)²))` on `|x| < width`.
    Bump { width: T, amplitude: T },
    /// Explicit samples (e.g. loaded from a field CSV).
    Values(Field<T>),
}

/// Full configuration of one solve.
#[derive(Debug, Clone)]
pub struct SolveConfig<T> {
    pub grid: GridSpec<T>,
    pub init: InitSpec<T>,
    /// Initial line-search step.
    pub step_initial: T,
    /// Backtracking shrink factor.
    pub step_shrink: T,
    /// Armijo sufficient-decrease constant.
    pub armijo_c: T,
    /// Stop when the dual residual falls below this.
    pub tol_residual: T,
    pub max_iters: usize,
    /// Recenter every this many iterations (0 = never).
    pub recenter_every: usize,
    /// Half-width of the recentering window.
    pub recenter_radius: T,
    /// Norm-smallness monitor: the run reports whether `‖u‖ ≤ ρ₀` held.
    pub rho0: T,
    /// Echoed into outputs for provenance; the algorithm is deterministic.
    pub seed: u64,
}

impl<T: Real> SolveConfig<T> {
    /// Defaults tuned for the solitary-wave regime: centered unit-width
    /// Gaussian start, Armijo backtracking (c = 1e-4, shrink 0.5, initial
    /// step 1), residual tolerance 1e-8, recentering every 10 iterations.
    pub fn default_on(grid: GridSpec<T>) -> Self {
        Self {
            grid,
            init: InitSpec::Gaussian {
                width: lit::<T>(1.0),
                amplitude: None,
            },
            step_initial: lit::<T>(1.0),
            step_shrink: lit::<T>(0.5),
            armijo_c: lit::<T>(1e-4),
            tol_residual: lit::<T>(1e-8),
            max_iters: 500,
            recenter_every: 10,
            recenter_radius: lit::<T>(5.0),
            rho0: lit::<T>(1.0),
            seed: 0,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol_residual > T::zero()) {
            return Err(Error::InvalidParameter {
                name: "tol_residual",
                value: self.tol_residual.to_f64().unwrap_or(f64::NAN),
                constraint: "must be positive",
            });
        }
        if self.max_iters < 1 {
            return Err(Error::InvalidParameter {
                name: "max_iters",
                value: self.max_iters as f64,
                constraint: "must be ≥ 1",
            });
        }
        if !(self.recenter_radius > T::zero() && self.recenter_radius < self.grid.half_width()) {
            return Err(Error::InvalidParameter {
                name: "recenter_radius",
                value: self.recenter_radius.to_f64().unwrap_or(f64::NAN),
                constraint: "must lie in (0, L)",
            });
        }
        if !(self.step_shrink > T::zero() && self.step_shrink < T::one()) {
            return Err(Error::InvalidParameter {
                name: "step_shrink",
                value: self.step_shrink.to_f64().unwrap_or(f64::NAN),
                constraint: "must lie in (0, 1)",
            });
        }
        Ok(())
    }

    fn build_init(&self) -> Result<Field<T>> {
        let u = match &self.init {
            InitSpec::Gaussian { width, amplitude } => {
                if !(*width > T::zero()) {
                    return Err(Error::InvalidParameter {
                        name: "init width",
                        value: width.to_f64().unwrap_or(f64::NAN),
                        constraint: "must be positive",
                    });
                }
                let w = *width;
                let a = amplitude.unwrap_or_else(T::one);
                Field::from_fn(self.grid, move |x| {
                    a * (-(x * x) / (lit::<T>(2.0) * w * w)).exp()
                })
            }
            InitSpec::Bump { width, amplitude } => {
                if !(*width > T::zero()) {
                    return Err(Error::InvalidParameter {
                        name: "init width",
                        value: width.to_f64().unwrap_or(f64::NAN),
                        constraint: "must be positive",
                    });
                }
                let w = *width;
                let a = *amplitude;
                Field::from_fn(self.grid, move |x| {
                    let r = x / w;
                    if r.abs() < T::one() {
                        a * (T::one() - T::one() / (T::one() - r * r)).exp()
                    } else {
                        T::zero()
                    }
                })
            }
            InitSpec::Values(field) => {
                if field.grid() != self.grid {
                    return Err(Error::InvalidParameter {
                        name: "init field grid",
                        value: field.len() as f64,
                        constraint: "must match the solve grid",
                    });
                }
                field.clone()
            }
        };
        if u.max_abs() == T::zero() {
            return Err(Error::ZeroField {
                context: "solve init",
            });
        }
        Ok(u)
    }
}

/// Why the iteration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Dual residual fell below `tol_residual`.
    Converged,
    /// Iteration budget exhausted (including a stalled line search).
    MaxIters,
    /// `F(u)` overflowed: the iterate left the representable exponential
    /// regime.
    Overflow,
    /// No Nehari root for the iterate.
    ProjectionFailure,
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Termination::Converged => "converged",
            Termination::MaxIters => "max_iters",
            Termination::Overflow => "overflow",
            Termination::ProjectionFailure => "projection_failure",
        }
    }
}

/// One row of the iteration history.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow<T> {
    pub iter: usize,
    pub j: T,
    /// `Φ` of the raw iterate before this iteration's projection.
    pub phi_before: T,
    /// Nehari scale applied by this iteration's projection.
    pub t0: T,
    pub residual: T,
    /// Recentering shift applied this iteration (0 when none).
    pub shift: T,
    /// `‖u‖` of the projected iterate.
    pub norm: T,
}

/// Iteration history of one solve.
#[derive(Debug, Clone)]
pub struct SolveTrace<T> {
    pub rows: Vec<TraceRow<T>>,
    pub termination: Termination,
    /// Smallest `‖u‖` over all 𝒩-projected iterates (the observed Nehari
    /// floor; reported, not asserted a priori).
    pub min_norm: T,
    /// Whether `‖u‖ ≤ ρ₀` held for every projected iterate.
    pub within_rho0: bool,
    /// Sign of `Φ` on the tail-averaged iterate (weak-limit surrogate).
    pub tail_phi_sign: T,
    /// `|Φ(u) - Φ(u - ū) - Φ(ū)|` with `ū` the tail average — the
    /// splitting defect of the surrogate.
    pub tail_splitting_defect: T,
}

impl<T: Real> SolveTrace<T> {
    pub const CSV_HEADER: &'static str = "iter,J,phi,t0,residual,shift,norm";

    /// Trace as CSV (`iter,J,phi,t0,residual,shift,norm`).
    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                r.iter, r.j, r.phi_before, r.t0, r.residual, r.shift, r.norm
            ));
        }
        out
    }

    /// The monotone-descent invariant: `J` decreases across accepted steps,
    /// up to floating-point recomputation slack.
    pub fn j_monotone(&self) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[1].j <= w[0].j + lit::<T>(1e-12) * (T::one() + w[0].j.abs()))
    }
}

/// Result of a solve. `report` and `trace.termination` describe the final
/// iterate even when the run did not converge.
#[derive(Debug, Clone)]
pub struct SolveOutcome<T> {
    pub field: Field<T>,
    pub report: EnergyReport<T>,
    pub trace: SolveTrace<T>,
}

const TAIL_WINDOW: usize = 16;

/// Minimizes `J` over the Nehari manifold.
///
/// Numeric failures (overflow, lost projection) terminate the run and are
/// recorded in the trace, never silent; `Err` is reserved for invalid
/// configurations. On success the final iterate is freshly projected, so
/// `|Φ| ≤ 1e-10 ‖u‖²`. Deterministic: identical configs produce
/// bit-identical traces.
pub fn solve<T: Real>(cfg: &SolveConfig<T>, nl: &Nonlinearity<T>) -> Result<SolveOutcome<T>> {
    cfg.validate()?;
    let mut u_raw = cfg.build_init()?;

    // Auto-conditioning of the default Gaussian: rescale so the first
    // projection lands at t₀ ∈ [0.1, 10].
    if matches!(
        cfg.init,
        InitSpec::Gaussian {
            amplitude: None,
            ..
        }
    ) {
        if let Ok(t) = nehari_scale(&u_raw, nl) {
            if t < lit::<T>(0.1) || t > lit::<T>(10.0) {
                u_raw = u_raw.scale(t);
            }
        }
    }

    let mut rows: Vec<TraceRow<T>> = Vec::new();
    let mut min_norm = T::infinity();
    let mut within_rho0 = true;
    let mut tail: Vec<Field<T>> = Vec::new();
    let termination;
    let mut final_state: Option<(Field<T>, EnergyReport<T>)> = None;

    let mut iter = 0usize;
    loop {
        // Project onto 𝒩.
        let phi_before = match energy(&u_raw, nl) {
            Ok(rep) => rep.phi,
            Err(Error::Overflow { .. }) => {
                termination = Termination::Overflow;
                break;
            }
            Err(e) => return Err(e),
        };
        let t0 = match nehari_scale(&u_raw, nl) {
            Ok(t) => t,
            Err(Error::NoNehariRoot { .. }) | Err(Error::ZeroField { .. }) => {
                termination = Termination::ProjectionFailure;
                break;
            }
            Err(e) => return Err(e),
        };
        let mut u = u_raw.scale(t0);

        // Recenter the windowed mass every `recenter_every` iterations.
        let mut shift = T::zero();
        if cfg.recenter_every > 0 && iter > 0 && iter % cfg.recenter_every == 0 {
            let (recentered, s) = recenter(&u, cfg.recenter_radius)?;
            u = recentered;
            shift = s;
        }

        let rep = match energy(&u, nl) {
            Ok(rep) => rep,
            Err(Error::Overflow { .. }) => {
                termination = Termination::Overflow;
                break;
            }
            Err(e) => return Err(e),
        };
        let grad = match sobolev_gradient(&u, nl) {
            Ok(g) => g,
            Err(Error::Overflow { .. }) | Err(Error::NonFinite { .. }) => {
                termination = Termination::Overflow;
                break;
            }
            Err(e) => return Err(e),
        };

        let norm = rep.norm_sq.sqrt();
        min_norm = min_norm.min(norm);
        if norm > cfg.rho0 {
            within_rho0 = false;
        }
        rows.push(TraceRow {
            iter,
            j: rep.j,
            phi_before,
            t0,
            residual: grad.norm,
            shift,
            norm,
        });
        if tail.len() == TAIL_WINDOW {
            tail.remove(0);
        }
        tail.push(u.clone());
        final_state = Some((u.clone(), rep));

        if grad.norm < cfg.tol_residual {
            termination = Termination::Converged;
            break;
        }
        if iter + 1 >= cfg.max_iters {
            termination = Termination::MaxIters;
            break;
        }

        // Backtracking along -g; Armijo on the reprojected energy. Once the
        // requested decrease α·c·‖g‖² sinks below the floating-point
        // resolution of J, energy differences can no longer certify
        // descent; in that end-game regime a step is accepted on strict
        // residual decrease instead (the projected preconditioned step is
        // locally contracting), which is what carries the residual from
        // ~√ε down to the 1e-8 tolerance.
        let mut alpha = cfg.step_initial;
        let decrement = cfg.armijo_c * sq(grad.norm);
        let j_floor = lit::<T>(8.0) * T::epsilon() * (T::one() + rep.j.abs());
        let mut accepted = false;
        for _ in 0..60 {
            let candidate = u.axpy(-alpha, &grad.field);
            if let Ok(t) = nehari_scale(&candidate, nl) {
                let projected = candidate.scale(t);
                if let Ok(rep_c) = energy(&projected, nl) {
                    let armijo = rep_c.j <= rep.j - alpha * decrement;
                    let flat = alpha * decrement <= j_floor && rep_c.j <= rep.j + j_floor;
                    if armijo
                        || (flat
                            && sobolev_gradient(&projected, nl)
                                .map(|g| g.norm < grad.norm)
                                .unwrap_or(false))
                    {
                        u_raw = candidate;
                        accepted = true;
                        break;
                    }
                }
            }
            alpha = alpha * cfg.step_shrink;
        }
        if !accepted {
            // Line search stalled at floating-point resolution.
            termination = Termination::MaxIters;
            break;
        }
        iter += 1;
    }

    let (field, report) = match final_state {
        Some(pair) => pair,
        None => {
            // Failure before the first projected iterate: report the raw
            // initial field as-is.
            let rep = energy_or_zero(&u_raw, nl);
            (u_raw, rep)
        }
    };

    // Weak-limit surrogate diagnostics on the tail average.
    let (tail_phi_sign, tail_splitting_defect) = tail_diagnostics(&field, &tail, nl);

    Ok(SolveOutcome {
        field,
        report,
        trace: SolveTrace {
            rows,
            termination,
            min_norm,
            within_rho0,
            tail_phi_sign,
            tail_splitting_defect,
        },
    })
}

fn energy_or_zero<T: Real>(u: &Field<T>, nl: &Nonlinearity<T>) -> EnergyReport<T> {
    energy(u, nl).unwrap_or(EnergyReport {
        l2_sq: T::zero(),
        seminorm_sq: T::zero(),
        norm_sq: T::zero(),
        f_integral: T::zero(),
        j: T::zero(),
        phi: T::zero(),
        h_integral: T::zero(),
        dual_residual: T::zero(),
    })
}

fn tail_diagnostics<T: Real>(u: &Field<T>, tail: &[Field<T>], nl: &Nonlinearity<T>) -> (T, T) {
    if tail.is_empty() {
        return (T::zero(), T::zero());
    }
    let mut avg = Field::zeros(u.grid());
    let w = T::one() / lit::<T>(tail.len() as f64);
    for t in tail {
        avg = avg.axpy(w, t);
    }
    let phi = |v: &Field<T>| energy(v, nl).map(|r| r.phi).unwrap_or_else(|_| T::nan());
    let phi_avg = phi(&avg);
    let defect = (phi(u) - phi(&u.sub(&avg)) - phi_avg).abs();
    (phi_avg.signum(), defect)
}

/// Translates `u` so the grid center of maximal windowed L² mass
/// `∫_{y-R}^{y+R} u²` moves to the origin. The translation is a whole-step
/// sample rotation (exact, norm-preserving); ties in the argmax resolve to
/// the smallest `|y*|`. Returns the recentered field and the applied shift
/// (the new field is `x ↦ u(x - shift)`).
pub fn recenter<T: Real>(u: &Field<T>, radius: T) -> Result<(Field<T>, T)> {
    let grid = u.grid();
    if !(radius > T::zero() && radius < grid.half_width()) {
        return Err(Error::InvalidParameter {
            name: "recenter radius",
            value: radius.to_f64().unwrap_or(f64::NAN),
            constraint: "must lie in (0, L)",
        });
    }
    let masses = windowed_mass(u, radius);
    let n = grid.n_points();
    let mut best = 0usize;
    for j in 1..n {
        if masses[j] > masses[best]
            || (masses[j] == masses[best] && grid.point(j).abs() < grid.point(best).abs())
        {
            best = j;
        }
    }
    // Move x_best to the origin: new(x) = u(x + y*), shift = -y*.
    let center_index = n / 2; // x = 0
    let steps = best as isize - center_index as isize;
    let shifted = u.translate_steps(steps);
    let shift = -grid.point(best);
    Ok((shifted, shift))
}

/// Windowed mass `W_j = h Σ_{|m| ≤ R/h} u²_{j+m}` for every grid center.
fn windowed_mass<T: Real>(u: &Field<T>, radius: T) -> Vec<T> {
    let grid = u.grid();
    let n = grid.n_points();
    let h = grid.spacing();
    let w = (radius / h).to_f64().unwrap_or(0.0).floor() as usize;
    let w = w.min(n / 2 - 1);
    let sq_vals: Vec<T> = u.values().iter().map(|&v| v * v).collect();
    // circular window sums via prefix sums over a tripled array (window
    // ends reach up to 2n + w < 3n)
    let mut prefix = Vec::with_capacity(3 * n + 1);
    prefix.push(T::zero());
    for i in 0..3 * n {
        let last = *prefix.last().unwrap();
        prefix.push(last + sq_vals[i % n]);
    }
    (0..n)
        .map(|j| {
            let lo = j + n - w;
            let hi = j + n + w + 1;
            (prefix[hi] - prefix[lo]) * h
        })
        .collect()
}

/// Non-vanishing certificate for a field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VanishingReport<T> {
    /// `sup_y ∫_{y-R}^{y+R} u²` over grid centers.
    pub max_windowed_mass: T,
    /// Center attaining it.
    pub center: T,
    /// Whether the mass clears the configured γ.
    pub non_vanishing: bool,
}

/// Reports whether the windowed mass clears `γ` (the non-vanishing
/// certificate) or has decayed below it (the vanishing warning).
pub fn vanishing_monitor<T: Real>(
    u: &Field<T>,
    radius: T,
    gamma: T,
) -> Result<VanishingReport<T>> {
    if !(gamma > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma.to_f64().unwrap_or(f64::NAN),
            constraint: "must be positive",
        });
    }
    let grid = u.grid();
    if !(radius > T::zero() && radius < grid.half_width()) {
        return Err(Error::InvalidParameter {
            name: "radius",
            value: radius.to_f64().unwrap_or(f64::NAN),
            constraint: "must lie in (0, L)",
        });
    }
    let masses = windowed_mass(u, radius);
    let mut best = 0usize;
    for j in 1..masses.len() {
        if masses[j] > masses[best] {
            best = j;
        }
    }
    Ok(VanishingReport {
        max_windowed_mass: masses[best],
        center: grid.point(best),
        non_vanishing: masses[best] >= gamma,
    })
}

/// Sup-distance between two fields after optimally recentering the first
/// onto the second by whole grid steps (used by the soliton oracle).
pub fn recentered_sup_distance<T: Real>(u: &Field<T>, target: &Field<T>) -> T {
    let n = u.len() as isize;
    let mut best = T::infinity();
    for s in 0..n {
        let shifted = u.translate_steps(s);
        let d = shifted
            .values()
            .iter()
            .zip(target.values())
            .fold(T::zero(), |acc, (&a, &b)| acc.max((a - b).abs()));
        if d < best {
            best = d;
        }
    }
    best
}
