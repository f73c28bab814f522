//! The energy functional and the Nehari machinery.
//!
//! ```text
//! J(u)   = 1/2 ‖u‖² - ∫ F(u),          ‖u‖² = ‖u‖²_{L²} + ‖(-Δ)^{1/4}u‖²_{L²},
//! Φ(u)   = J'(u)u = ‖u‖² - ∫ f(u) u,
//! H(s)   = s f(s) - 2 F(s),            on 𝒩 (Φ=0):  J = 1/2 ∫ H(u).
//! ```
//!
//! The Sobolev gradient is the Riesz representative of `J'(u)` in the
//! `H^{1/2}` inner product: `ĝ_k = û_k - f̂(u)_k/(1+|ξ_k|)`, so that
//! `⟨g,v⟩_{H^{1/2}} = J'(u)v` for every grid `v`; its `H^{1/2}` norm is the
//! discretization-independent dual residual.

use rustfft::num_complex::Complex;

use crate::grid::{Field, GridSpec};
use crate::nonlinearity::Nonlinearity;
use crate::scalar::{lit, Real};
use crate::spectral::{dft, idft_real, spectral_weight};
use crate::{Error, Result};

/// Every scalar functional of a field in one record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport<T> {
    pub l2_sq: T,
    pub seminorm_sq: T,
    /// `‖u‖² = l2_sq + seminorm_sq`.
    pub norm_sq: T,
    /// `∫ F(u)`.
    pub f_integral: T,
    /// `J(u) = norm_sq/2 - f_integral`.
    pub j: T,
    /// `Φ(u) = J'(u)u = norm_sq - ∫ f(u)u`.
    pub phi: T,
    /// `∫ H(u) = ∫ (u f(u) - 2F(u))`; equals `2J - Φ` identically.
    pub h_integral: T,
    /// `‖g‖_{H^{1/2}}` of the Sobolev gradient.
    pub dual_residual: T,
}

impl<T: Real> EnergyReport<T> {
    /// CSV header matching [`EnergyReport::csv_row`].
    pub const CSV_HEADER: &'static str =
        "l2_sq,seminorm_sq,norm_sq,F_integral,J,Phi,H_integral,dual_residual";

    /// One CSV row per evaluation, full precision.
    pub fn csv_row(&self) -> String {
        format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            self.l2_sq,
            self.seminorm_sq,
            self.norm_sq,
            self.f_integral,
            self.j,
            self.phi,
            self.h_integral,
            self.dual_residual
        )
    }

    /// Flat `key=value` text block.
    pub fn to_kv_block(&self) -> String {
        format!(
            "l2_sq={:.16e}\nseminorm_sq={:.16e}\nnorm_sq={:.16e}\nF_integral={:.16e}\nJ={:.16e}\nPhi={:.16e}\nH_integral={:.16e}\ndual_residual={:.16e}\n",
            self.l2_sq,
            self.seminorm_sq,
            self.norm_sq,
            self.f_integral,
            self.j,
            self.phi,
            self.h_integral,
            self.dual_residual
        )
    }
}

fn check_integrand<T: Real>(u: &Field<T>, value: T, context: &'static str) -> Result<T> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow {
            context,
            amplitude: u.max_abs().to_f64().unwrap_or(f64::NAN),
        })
    }
}

/// Evaluates every scalar functional of `u` (one spectral pass for the
/// norms and gradient, rectangle rule for the superposition integrals).
///
/// Exponential overflow of `F(u)` is rejected with the offending amplitude:
/// the iterate has left the regime where the exponential integral is
/// numerically representable.
pub fn energy<T: Real>(u: &Field<T>, nl: &Nonlinearity<T>) -> Result<EnergyReport<T>> {
    u.ensure_finite("energy input")?;
    let grid = u.grid();
    let w = spectral_weight(&grid);

    let spectrum_u = dft(u.values());
    let fu = u.map(|s| nl.f(s));
    let spectrum_fu = dft(fu.values());

    let mut l2_sq = T::zero();
    let mut seminorm_sq = T::zero();
    let mut residual_sq = T::zero();
    for (i, (cu, cf)) in spectrum_u.iter().zip(spectrum_fu.iter()).enumerate() {
        let xi = grid.wavenumber(i).abs();
        l2_sq = l2_sq + cu.norm_sqr();
        seminorm_sq = seminorm_sq + xi * cu.norm_sqr();
        let denom = T::one() + xi;
        let gr = cu.re - cf.re / denom;
        let gi = cu.im - cf.im / denom;
        residual_sq = residual_sq + denom * (gr * gr + gi * gi);
    }
    l2_sq = l2_sq * w;
    seminorm_sq = seminorm_sq * w;
    residual_sq = residual_sq * w;

    let f_integral = check_integrand(u, u.integrate(|s| nl.big_f(s)), "energy: ∫F(u)")?;
    let fu_integral = check_integrand(u, u.integrate(|s| s * nl.f(s)), "energy: ∫f(u)u")?;
    let h_integral = check_integrand(
        u,
        u.integrate(|s| s * nl.f(s) - lit::<T>(2.0) * nl.big_f(s)),
        "energy: ∫H(u)",
    )?;

    let norm_sq = l2_sq + seminorm_sq;
    Ok(EnergyReport {
        l2_sq,
        seminorm_sq,
        norm_sq,
        f_integral,
        j: norm_sq * lit::<T>(0.5) - f_integral,
        phi: norm_sq - fu_integral,
        h_integral,
        dual_residual: residual_sq.sqrt(),
    })
}

/// The Sobolev gradient together with its `H^{1/2}` norm.
#[derive(Debug, Clone)]
pub struct SobolevGradient<T> {
    pub field: Field<T>,
    /// `‖g‖_{H^{1/2}}` — the dual residual.
    pub norm: T,
}

/// Riesz representative of `J'(u)` in `H^{1/2}`: `ĝ = û - f̂(u)/(1+|ξ|)`.
pub fn sobolev_gradient<T: Real>(
    u: &Field<T>,
    nl: &Nonlinearity<T>,
) -> Result<SobolevGradient<T>> {
    u.ensure_finite("sobolev_gradient input")?;
    let grid = u.grid();
    let w = spectral_weight(&grid);
    let spectrum_u = dft(u.values());
    let fu = u.map(|s| nl.f(s));
    fu.ensure_finite("sobolev_gradient: f(u)")?;
    let spectrum_fu = dft(fu.values());
    let mut norm_sq = T::zero();
    let mut spectrum_g: Vec<Complex<T>> = Vec::with_capacity(spectrum_u.len());
    for (i, (cu, cf)) in spectrum_u.iter().zip(spectrum_fu.iter()).enumerate() {
        let denom = T::one() + grid.wavenumber(i).abs();
        let g = Complex::new(cu.re - cf.re / denom, cu.im - cf.im / denom);
        norm_sq = norm_sq + denom * g.norm_sqr();
        spectrum_g.push(g);
    }
    let field = Field::new(grid, idft_real(spectrum_g))?;
    Ok(SobolevGradient {
        field,
        norm: (norm_sq * w).sqrt(),
    })
}

/// `Φ(t·u)` evaluated without forming the scaled field.
fn phi_along_ray<T: Real>(norm_sq: T, u: &Field<T>, nl: &Nonlinearity<T>, t: T) -> T {
    let coupling = u.integrate(|s| nl.f(t * s) * s); // ∫ f(tu) u
    t * t * norm_sq - t * coupling
}

/// The unique Nehari scale `t₀ > 0` with `Φ(t₀ u) = 0`.
///
/// Requires `u ≠ 0` and a hypothesis-passing nonlinearity (so that
/// `t ↦ ∫ f(tu)u/t` is increasing and the root unique). The root is
/// bracketed by geometric expansion from `t = 1` (factor 2, at most 60
/// doublings — (f3) guarantees `Φ(tu) → -∞`) and then bisected to relative
/// width `1e-12`; `Φ` is guaranteed to change sign across the final bracket.
pub fn nehari_scale<T: Real>(u: &Field<T>, nl: &Nonlinearity<T>) -> Result<T> {
    u.ensure_finite("nehari_scale input")?;
    let norm_sq = crate::spectral::norms(u)?.h_half_sq;
    if norm_sq == T::zero() {
        return Err(Error::ZeroField {
            context: "nehari_scale",
        });
    }
    let phi = |t: T| phi_along_ray(norm_sq, u, nl, t);

    // Φ(tu)/t² = ‖u‖² - ∫f(tu)u/t is decreasing in t; expand the bracket
    // until the sign of the scaled Φ changes.
    let psi = |t: T| norm_sq - u.integrate(|s| nl.f(t * s) * s) / t;
    let mut t_lo = T::one();
    let mut t_hi = T::one();
    let two = lit::<T>(2.0);
    let start = psi(T::one());
    if start > T::zero() {
        // root above 1
        for _ in 0..60 {
            t_hi = t_hi * two;
            if psi(t_hi) <= T::zero() {
                break;
            }
            t_lo = t_hi;
        }
    } else {
        for _ in 0..60 {
            t_lo = t_lo / two;
            if psi(t_lo) >= T::zero() {
                break;
            }
            t_hi = t_lo;
        }
    }
    let (p_lo, p_hi) = (psi(t_lo), psi(t_hi));
    if !(p_lo >= T::zero() && p_hi <= T::zero()) {
        return Err(Error::NoNehariRoot {
            t_lo: t_lo.to_f64().unwrap_or(f64::NAN),
            t_hi: t_hi.to_f64().unwrap_or(f64::NAN),
            sign: if start > T::zero() { 1.0 } else { -1.0 },
        });
    }

    let tol = lit::<T>(1e-12);
    let mut lo = t_lo;
    let mut hi = t_hi;
    while (hi - lo) > tol * (lo + hi) * lit::<T>(0.5) {
        let mid = (lo + hi) * lit::<T>(0.5);
        if psi(mid) >= T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
        if !(mid > lo) && !(mid < hi) {
            break; // bracket exhausted at floating-point resolution
        }
    }
    let t0 = (lo + hi) * lit::<T>(0.5);
    debug_assert!(phi(lo) >= phi(hi));
    Ok(t0)
}

/// The closed-form cap on the ground energy,
/// `(1/2 - 1/q) · S^{2q/(q-2)} / (qC_q)^{2/(q-2)}`,
/// valid for any `S ≥ S_q(ψ)` of a trial function ψ.
pub fn ground_energy_upper_bound<T: Real>(q: T, c_q: T, s_q_estimate: T) -> T {
    let two = lit::<T>(2.0);
    let expo = two * q / (q - two);
    (lit::<T>(0.5) - T::one() / q) * s_q_estimate.powf(expo)
        / (q * c_q).powf(two / (q - two))
}

/// The companion cap on `limsup ‖u_n‖²`:
/// `θ/(θ-2) · (q-2)/q · S^{2q/(q-2)} / (qC_q)^{2/(q-2)}`
/// (equals `2θ/(θ-2)` times [`ground_energy_upper_bound`]).
pub fn norm_sq_upper_bound<T: Real>(q: T, c_q: T, theta: T, s_q_estimate: T) -> T {
    let two = lit::<T>(2.0);
    theta / (theta - two) * (q - two) / q * s_q_estimate.powf(two * q / (q - two))
        / (q * c_q).powf(two / (q - two))
}

/// Sobolev quotient `S_q(v) = ‖v‖ / ‖v‖_{L^q}`, `v ≠ 0`, `q > 2`.
pub fn sq_quotient<T: Real>(v: &Field<T>, q: T) -> Result<T> {
    if !(q > lit::<T>(2.0)) {
        return Err(Error::InvalidParameter {
            name: "q",
            value: q.to_f64().unwrap_or(f64::NAN),
            constraint: "S_q needs q > 2",
        });
    }
    let norms = crate::spectral::norms(v)?;
    if norms.h_half_sq == T::zero() {
        return Err(Error::ZeroField {
            context: "sq_quotient",
        });
    }
    let lq = crate::spectral::lp_norm(v, q)?;
    Ok(norms.h_half_sq.sqrt() / lq)
}

/// `S_q` estimated by minimizing the quotient over a one-parameter family
/// of centered Gaussians `e^{-x²/(2σ²)}` (σ over `widths`) plus any extra
/// trial fields. Any member bounds the true infimum from above, which is
/// the safe direction for the energy caps above. Returns the minimum and
/// the width at which it was attained (NaN when an extra trial won).
pub fn sq_gaussian_family_min<T: Real>(
    grid: GridSpec<T>,
    q: T,
    widths: &[T],
    extra_trials: &[&Field<T>],
) -> Result<(T, T)> {
    let mut best = T::infinity();
    let mut best_width = T::nan();
    for &sigma in widths {
        if !(sigma > T::zero()) {
            return Err(Error::InvalidParameter {
                name: "width",
                value: sigma.to_f64().unwrap_or(f64::NAN),
                constraint: "Gaussian width must be positive",
            });
        }
        let g = Field::from_fn(grid, |x| (-(x * x) / (lit::<T>(2.0) * sigma * sigma)).exp());
        let s = sq_quotient(&g, q)?;
        if s < best {
            best = s;
            best_width = sigma;
        }
    }
    for trial in extra_trials {
        let s = sq_quotient(trial, q)?;
        if s < best {
            best = s;
            best_width = T::nan();
        }
    }
    if !best.is_finite() {
        return Err(Error::InvalidParameter {
            name: "widths",
            value: widths.len() as f64,
            constraint: "family must be nonempty",
        });
    }
    Ok((best, best_width))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nonlinearity::{make_builtin, Family};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn soliton_grid() -> GridSpec<f64> {
        GridSpec::new(80.0, 4096).unwrap()
    }

    fn soliton(grid: GridSpec<f64>) -> Field<f64> {
        Field::from_fn(grid, |x| 2.0 / (1.0 + x * x))
    }

    fn quadratic() -> Nonlinearity<f64> {
        make_builtin(Family::PurePower { p: 2.0 }).unwrap()
    }

    #[test]
    fn zero_field_report_is_zero() {
        let rep = energy(&Field::zeros(soliton_grid()), &quadratic()).unwrap();
        assert_eq!(rep.l2_sq, 0.0);
        assert_eq!(rep.j, 0.0);
        assert_eq!(rep.phi, 0.0);
        assert_eq!(rep.h_integral, 0.0);
        assert_eq!(rep.dual_residual, 0.0);
    }

    #[test]
    fn report_identities_hold() {
        let g = GridSpec::new(40.0, 512).unwrap();
        let u = Field::from_fn(g, |x: f64| 1.3 * (-0.4 * x * x).exp());
        let rep = energy(&u, &quadratic()).unwrap();
        // H = 2J - Φ identically
        let lhs = rep.h_integral;
        let rhs = 2.0 * rep.j - rep.phi;
        assert!(((lhs - rhs) / lhs).abs() < 1e-10);
        assert_relative_eq!(rep.j, rep.norm_sq / 2.0 - rep.f_integral, max_relative = 1e-14);
    }

    #[test]
    fn soliton_energy_closed_forms() {
        // ‖u*‖²_{L²}=2π, seminorm²=π, ∫F=π, J=π/2, Φ=0, ∫H=π.
        let u = soliton(soliton_grid());
        let rep = energy(&u, &quadratic()).unwrap();
        assert_relative_eq!(rep.l2_sq, 2.0 * PI, max_relative = 1e-3);
        assert_relative_eq!(rep.seminorm_sq, PI, max_relative = 1e-3);
        assert_relative_eq!(rep.j, PI / 2.0, max_relative = 1e-3);
        assert_relative_eq!(rep.h_integral, PI, max_relative = 1e-3);
        assert!(rep.phi.abs() <= 1e-3 * rep.norm_sq);
    }

    #[test]
    fn soliton_is_nearly_critical() {
        // J'(u*) = 0 analytically; discrete residual is truncation-limited.
        let u = soliton(soliton_grid());
        let g = sobolev_gradient(&u, &quadratic()).unwrap();
        assert!(g.norm <= 5e-3, "residual {}", g.norm);
    }

    #[test]
    fn gradient_of_zero_is_zero() {
        let g = sobolev_gradient(&Field::zeros(soliton_grid()), &quadratic()).unwrap();
        assert_eq!(g.norm, 0.0);
        assert!(g.field.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn nehari_scale_of_soliton_and_its_double() {
        let u = soliton(soliton_grid());
        let nl = quadratic();
        // discretization-limited at this grid: ~2e-4
        let t0 = nehari_scale(&u, &nl).unwrap();
        assert_relative_eq!(t0, 1.0, epsilon = 1e-3);
        let t0 = nehari_scale(&u.scale(2.0), &nl).unwrap();
        assert_relative_eq!(t0, 0.5, epsilon = 1e-3);
    }

    #[test]
    fn nehari_scale_matches_quadratic_closed_form() {
        // for f = |s|s the root is exactly ‖v‖²/∫|v|³.
        let g = GridSpec::new(40.0, 1024).unwrap();
        let v = Field::from_fn(g, |x: f64| 1.7 * (-0.3 * x * x).exp());
        let nl = quadratic();
        let n = crate::spectral::norms(&v).unwrap();
        let cubic = v.integrate(|s: f64| s.abs().powi(3));
        let expected = n.h_half_sq / cubic;
        let t0 = nehari_scale(&v, &nl).unwrap();
        assert_relative_eq!(t0, expected, max_relative = 1e-11);
    }

    #[test]
    fn nehari_dichotomy() {
        // Φ(u) < 0 ⇒ t₀ < 1; Φ(u) > 0 ⇒ t₀ > 1.
        let g = GridSpec::new(40.0, 1024).unwrap();
        let nl = quadratic();
        let v = Field::from_fn(g, |x: f64| (-0.3 * x * x).exp());
        let t_star = nehari_scale(&v, &nl).unwrap();
        let big = v.scale(1.5 * t_star);
        let small = v.scale(0.5 * t_star);
        assert!(energy(&big, &nl).unwrap().phi < 0.0);
        assert!(nehari_scale(&big, &nl).unwrap() < 1.0);
        assert!(energy(&small, &nl).unwrap().phi > 0.0);
        assert!(nehari_scale(&small, &nl).unwrap() > 1.0);
    }

    #[test]
    fn nehari_scale_rejects_zero_field() {
        let err = nehari_scale(&Field::zeros(soliton_grid()), &quadratic()).unwrap_err();
        assert!(matches!(err, Error::ZeroField { .. }));
    }

    #[test]
    fn projection_is_idempotent() {
        let g = GridSpec::new(40.0, 1024).unwrap();
        let nl = quadratic();
        let v = Field::from_fn(g, |x: f64| 0.8 * (-0.25 * x * x).exp() * (1.0 + 0.3 * x.cos()));
        let t0 = nehari_scale(&v, &nl).unwrap();
        let projected = v.scale(t0);
        let t1 = nehari_scale(&projected, &nl).unwrap();
        assert!((t1 - 1.0).abs() <= 1e-9, "t1 = {t1}");
    }

    #[test]
    fn bound_formulas() {
        assert_relative_eq!(ground_energy_upper_bound(4.0, 1.0, 1.0), 1.0 / 16.0);
        assert_relative_eq!(norm_sq_upper_bound(4.0, 1.0, 4.0, 1.0), 0.25);
        // norm bound = 2θ/(θ-2) · energy bound
        for (q, c, th, s) in [(3.0, 0.4, 3.0, 1.3), (4.0, 10.0, 4.0, 1.5), (5.0, 2.0, 6.0, 0.9)] {
            let e = ground_energy_upper_bound(q, c, s);
            let n = norm_sq_upper_bound(q, c, th, s);
            assert_relative_eq!(n, 2.0 * th / (th - 2.0) * e, max_relative = 1e-13);
        }
        // strictly decreasing in C_q
        assert!(
            ground_energy_upper_bound(4.0, 2.0, 1.0) < ground_energy_upper_bound(4.0, 1.0, 1.0)
        );
    }

    #[test]
    fn sq_quotient_soliton_and_scale_invariance() {
        let u = soliton(soliton_grid());
        let s3 = sq_quotient(&u, 3.0).unwrap();
        // ‖u*‖ = (3π)^{1/2}, ‖u*‖_{L³} = (3π)^{1/3} ⇒ S₃(u*) = (3π)^{1/6}
        assert_relative_eq!(s3, (3.0 * PI).powf(1.0 / 6.0), max_relative = 1e-3);
        for c in [0.01, 0.5, 17.0, -3.0] {
            let sc = sq_quotient(&u.scale(c), 3.0).unwrap();
            assert_relative_eq!(sc, s3, max_relative = 1e-12);
        }
    }

    #[test]
    fn sq_family_min_is_a_lower_envelope() {
        let grid = soliton_grid();
        let widths: Vec<f64> = (1..=16).map(|i| 0.25 * i as f64).collect();
        let (s_min, _) = sq_gaussian_family_min(grid, 4.0, &widths, &[]).unwrap();
        for &w in &widths {
            let g = Field::from_fn(grid, |x: f64| (-(x * x) / (2.0 * w * w)).exp());
            assert!(s_min <= sq_quotient(&g, 4.0).unwrap() + 1e-12);
        }
    }

    #[test]
    fn energy_rejects_overflowing_amplitudes() {
        let g = GridSpec::new(40.0, 256).unwrap();
        let nl = make_builtin(Family::PaperCritical {
            lambda: 1.0,
            q: 4.0,
            alpha0: PI / 4.0,
        })
        .unwrap();
        let u = Field::from_fn(g, |x: f64| 1e6 * (-x * x).exp());
        let err = energy(&u, &nl).unwrap_err();
        match err {
            Error::Overflow { amplitude, .. } => assert!(amplitude > 1e5),
            other => panic!("unexpected {other}"),
        }
    }
}
