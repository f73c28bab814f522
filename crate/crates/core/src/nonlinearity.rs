//! Nonlinearities `f` with primitive `F` and derivative `f'`, plus the
//! numerical audit of the structural hypotheses the variational argument
//! needs:
//!
//! * (f1) `f` is C¹, odd, convex on ℝ⁺, with `f(s)/s → 0` at 0;
//! * (f2) `s ↦ f(s)/s` increasing on ℝ⁺;
//! * (f3) `F(s) ≥ C_q |s|^q` for some `q > 2`, `C_q > 0`;
//! * (AR) `θ F(s) ≤ s f(s)` for some `θ > 2`;
//!
//! together with the derived pointwise properties `s²f'(s) - s f(s) > 0`,
//! `f' > 0`, `H := s f(s) - 2F(s) > 0`, and `H` even and increasing on ℝ⁺.
//!
//! The audit is sampling-based: it can falsify a hypothesis with a concrete
//! witness point but cannot prove it (the hypotheses quantify over all of
//! ℝ). Reports state the sample used.

use std::fmt;

use crate::quad;
use crate::scalar::{lit, Real};
use crate::{Error, Result};

/// Declared growth class of a nonlinearity at `±∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GrowthClass<T> {
    /// `f(s)/(e^{αs²}-1) → 0` for every `α > 0`.
    Subcritical,
    /// `α₀`-critical: the ratio diverges below `α₀` and vanishes above.
    Critical { alpha0: T },
}

/// Builder spec for the built-in families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family<T> {
    /// `f(s) = s|s|^{p-1}`, `p > 1`.
    PurePower { p: T },
    /// `f(s) = λ s|s|^{q-2} + s|s|^{q-2} e^{α₀ s²}`, `q > 2`, `α₀ > 0`, `λ ≥ 0`.
    PaperCritical { lambda: T, q: T, alpha0: T },
    /// `f(s) = s³ e^{α₀ |s|^ν}`, `α₀ > 0`, `ν > 0`.
    ExpPower { alpha0: T, nu: T },
}

type Scalar<T> = Box<dyn Fn(T) -> T + Send + Sync>;

/// An evaluatable triple `(f, F, f')` with declared parameters and growth
/// class. Immutable after construction (including any frozen quadrature
/// cache), safe to share across threads.
pub struct Nonlinearity<T> {
    name: &'static str,
    f: Scalar<T>,
    big_f: Scalar<T>,
    fprime: Scalar<T>,
    /// `ln f(s)` for `s > 0`, safe far beyond floating-point overflow of `f`.
    log_f: Scalar<T>,
    /// `ln (s f'(s))` for `s > 0`, same purpose.
    log_sfprime: Scalar<T>,
    params: Vec<(&'static str, T)>,
    declared_growth: GrowthClass<T>,
}

impl<T: Real> fmt::Debug for Nonlinearity<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Nonlinearity")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("declared_growth", &self.declared_growth)
            .finish()
    }
}

impl<T: Real> Nonlinearity<T> {
    #[inline]
    pub fn f(&self, s: T) -> T {
        (self.f)(s)
    }

    /// Primitive `F(s) = ∫_0^s f`, even, `F(0) = 0`.
    #[inline]
    pub fn big_f(&self, s: T) -> T {
        (self.big_f)(s)
    }

    #[inline]
    pub fn fprime(&self, s: T) -> T {
        (self.fprime)(s)
    }

    /// `H(s) = s f(s) - 2 F(s)`; nonnegative for hypothesis-passing
    /// nonlinearities.
    #[inline]
    pub fn hfun(&self, s: T) -> T {
        s * self.f(s) - lit::<T>(2.0) * self.big_f(s)
    }

    /// `ln f(s)` for `s > 0` (overflow-safe tail evaluation).
    #[inline]
    pub fn log_f(&self, s: T) -> T {
        (self.log_f)(s)
    }

    /// `ln (s f'(s))` for `s > 0` (overflow-safe tail evaluation).
    #[inline]
    pub fn log_sfprime(&self, s: T) -> T {
        (self.log_sfprime)(s)
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn params(&self) -> &[(&'static str, T)] {
        &self.params
    }

    pub fn declared_growth(&self) -> GrowthClass<T> {
        self.declared_growth
    }
}

/// Constructs one of the built-in families, validating parameter ranges.
pub fn make_builtin<T: Real>(family: Family<T>) -> Result<Nonlinearity<T>> {
    match family {
        Family::PurePower { p } => {
            if !(p > T::one()) {
                return Err(Error::InvalidParameter {
                    name: "p",
                    value: p.to_f64().unwrap_or(f64::NAN),
                    constraint: "pure_power needs p > 1, else (f1) lim f(s)/s = 0 fails",
                });
            }
            Ok(Nonlinearity {
                name: "pure_power",
                f: Box::new(move |s: T| s * s.abs().powf(p - T::one())),
                big_f: Box::new(move |s: T| s.abs().powf(p + T::one()) / (p + T::one())),
                fprime: Box::new(move |s: T| p * s.abs().powf(p - T::one())),
                log_f: Box::new(move |s: T| p * s.ln()),
                log_sfprime: Box::new(move |s: T| p.ln() + p * s.ln()),
                params: vec![("p", p)],
                declared_growth: GrowthClass::Subcritical,
            })
        }
        Family::PaperCritical { lambda, q, alpha0 } => {
            if !(q > lit::<T>(2.0)) {
                return Err(Error::InvalidParameter {
                    name: "q",
                    value: q.to_f64().unwrap_or(f64::NAN),
                    constraint: "(f3) requires q > 2",
                });
            }
            if !(alpha0 > T::zero()) {
                return Err(Error::InvalidParameter {
                    name: "alpha0",
                    value: alpha0.to_f64().unwrap_or(f64::NAN),
                    constraint: "critical growth requires alpha0 > 0",
                });
            }
            if !(lambda >= T::zero()) {
                return Err(Error::InvalidParameter {
                    name: "lambda",
                    value: lambda.to_f64().unwrap_or(f64::NAN),
                    constraint: "lambda must be ≥ 0",
                });
            }
            // F(s) = λ|s|^q/q + ∫_0^{|s|} σ^{q-1} e^{α₀σ²} dσ. The second
            // term has a positive-series form for even integer q; otherwise
            // it is tabulated by adaptive Gauss–Kronrod quadrature.
            let q_f64 = q.to_f64().unwrap_or(f64::NAN);
            let even_q = q_f64.fract() == 0.0 && (q_f64 as i64) % 2 == 0;
            let exp_term: Scalar<T> = if even_q {
                Box::new(move |s: T| exp_power_series(s.abs(), q, alpha0, lit::<T>(2.0)))
            } else {
                let table = PrimitiveTable::build(
                    move |s: T| s.powf(q - T::one()) * (alpha0 * s * s).exp(),
                    table_cutoff(alpha0, lit::<T>(2.0)),
                    q,
                    T::one() / q,
                );
                Box::new(move |s: T| table.eval(s.abs()))
            };
            Ok(Nonlinearity {
                name: "paper_critical",
                f: Box::new(move |s: T| {
                    s * s.abs().powf(q - lit::<T>(2.0)) * (lambda + (alpha0 * s * s).exp())
                }),
                big_f: Box::new(move |s: T| {
                    lambda * s.abs().powf(q) / q + exp_term(s)
                }),
                fprime: Box::new(move |s: T| {
                    let a = s.abs();
                    let e = (alpha0 * s * s).exp();
                    (q - T::one()) * a.powf(q - lit::<T>(2.0)) * (lambda + e)
                        + lit::<T>(2.0) * alpha0 * a.powf(q) * e
                }),
                log_f: Box::new(move |s: T| {
                    (q - T::one()) * s.ln()
                        + alpha0 * s * s
                        + (lambda * (-alpha0 * s * s).exp()).ln_1p()
                }),
                log_sfprime: Box::new(move |s: T| {
                    // s f'(s) = e^{αs²} [ (q-1) s^{q-1} (1 + λe^{-αs²}) + 2α s^{q+1} ]
                    let damp = (-alpha0 * s * s).exp();
                    let poly = (q - T::one()) * s.powf(q - T::one()) * (T::one() + lambda * damp)
                        + lit::<T>(2.0) * alpha0 * s.powf(q + T::one());
                    alpha0 * s * s + poly.ln()
                }),
                params: vec![("lambda", lambda), ("q", q), ("alpha0", alpha0)],
                declared_growth: GrowthClass::Critical { alpha0 },
            })
        }
        Family::ExpPower { alpha0, nu } => {
            if !(alpha0 > T::zero()) {
                return Err(Error::InvalidParameter {
                    name: "alpha0",
                    value: alpha0.to_f64().unwrap_or(f64::NAN),
                    constraint: "exp_power requires alpha0 > 0",
                });
            }
            if !(nu > T::zero()) {
                return Err(Error::InvalidParameter {
                    name: "nu",
                    value: nu.to_f64().unwrap_or(f64::NAN),
                    constraint: "exp_power requires nu > 0",
                });
            }
            let four = lit::<T>(4.0);
            let exp_term: Scalar<T> = if nu == lit::<T>(2.0) {
                Box::new(move |s: T| exp_power_series(s.abs(), four, alpha0, lit::<T>(2.0)))
            } else {
                let table = PrimitiveTable::build(
                    move |s: T| s * s * s * (alpha0 * s.powf(nu)).exp(),
                    table_cutoff(alpha0, nu),
                    four,
                    lit::<T>(0.25),
                );
                Box::new(move |s: T| table.eval(s.abs()))
            };
            let declared = if nu < lit::<T>(2.0) {
                GrowthClass::Subcritical
            } else {
                GrowthClass::Critical { alpha0 }
            };
            Ok(Nonlinearity {
                name: "exp_power",
                f: Box::new(move |s: T| s * s * s * (alpha0 * s.abs().powf(nu)).exp()),
                big_f: exp_term,
                fprime: Box::new(move |s: T| {
                    let a = s.abs();
                    let e = (alpha0 * a.powf(nu)).exp();
                    e * (lit::<T>(3.0) * s * s + alpha0 * nu * a.powf(nu + lit::<T>(2.0)))
                }),
                log_f: Box::new(move |s: T| lit::<T>(3.0) * s.ln() + alpha0 * s.powf(nu)),
                log_sfprime: Box::new(move |s: T| {
                    let poly = lit::<T>(3.0) * s * s * s + alpha0 * nu * s.powf(nu + lit::<T>(3.0));
                    alpha0 * s.powf(nu) + poly.ln()
                }),
                params: vec![("alpha0", alpha0), ("nu", nu)],
                declared_growth: declared,
            })
        }
    }
}

/// `∫_0^s σ^{w-1} e^{α σ^ν} dσ` by its everywhere-convergent positive
/// series `Σ_n αⁿ s^{w+νn} / (n! (w+νn))`. All terms are positive, so the
/// evaluation is cancellation-free; it overflows exactly when the integral
/// does.
pub fn exp_power_series<T: Real>(s: T, w: T, alpha: T, nu: T) -> T {
    if s == T::zero() {
        return T::zero();
    }
    let x = alpha * s.powf(nu);
    let mut base = s.powf(w); // αⁿ s^{w+νn} / n!, iterated
    let mut sum = base / w;
    let mut n = 0u32;
    loop {
        n += 1;
        base = base * x / lit::<T>(n as f64);
        let term = base / (w + nu * lit::<T>(n as f64));
        sum = sum + term;
        if !sum.is_finite() {
            return sum;
        }
        if term <= sum * lit::<T>(1e-18) && lit::<T>(n as f64) > x {
            return sum;
        }
        if n > 20_000 {
            return sum;
        }
    }
}

/// Largest `s` for which `s^w e^{α s^ν}` stays representable in `f64`
/// (the 650 margin absorbs the power-law factor).
fn table_cutoff<T: Real>(alpha: T, nu: T) -> T {
    (lit::<T>(650.0) / alpha).powf(T::one() / nu)
}

/// Lookup table for a primitive `F(s) = ∫_0^s f` built by cumulative
/// adaptive Gauss–Kronrod quadrature, interpolated with a 4-point cubic.
///
/// Nodes are uniform in `t = ln s` and the table stores `ln F`, which keeps
/// the interpolation error relative (documented tolerance 1e-10; the
/// attained error is validated against the series oracle in tests). Below
/// the smallest node the leading asymptotic `F ≈ coeff·s^w` is exact to
/// well beyond the tolerance; above the cutoff the value is `+∞`, i.e. the
/// overflow regime.
struct PrimitiveTable<T> {
    t_lo: T,
    dt: T,
    log_values: Vec<T>,
    s_max: T,
    leading_power: T,
    leading_coeff: T,
}

impl<T: Real> PrimitiveTable<T> {
    const NODES: usize = (1 << 16) + 1;
    const S_LO: f64 = 1e-9;

    fn build(f: impl Fn(T) -> T + Send + Sync, s_max: T, leading_power: T, leading_coeff: T) -> Self {
        let t_lo = lit::<T>(Self::S_LO.ln());
        let t_hi = s_max.ln();
        let dt = (t_hi - t_lo) / lit::<T>((Self::NODES - 1) as f64);
        let mut log_values = Vec::with_capacity(Self::NODES);
        // F(s_lo) from the asymptotic head plus a quadrature correction.
        let s_lo = lit::<T>(Self::S_LO);
        let mut acc = leading_coeff * s_lo.powf(leading_power);
        let mut comp = T::zero(); // Kahan compensation
        log_values.push(acc.ln());
        let mut prev = s_lo;
        for i in 1..Self::NODES {
            let s = (t_lo + dt * lit::<T>(i as f64)).exp();
            let panel = quad::adaptive(&f, prev, s, lit::<T>(1e-13));
            let y = panel - comp;
            let t = acc + y;
            comp = (t - acc) - y;
            acc = t;
            log_values.push(acc.ln());
            prev = s;
        }
        Self {
            t_lo,
            dt,
            log_values,
            s_max,
            leading_power,
            leading_coeff,
        }
    }

    fn eval(&self, s: T) -> T {
        debug_assert!(s >= T::zero());
        if s == T::zero() {
            return T::zero();
        }
        if s > self.s_max {
            return T::infinity();
        }
        if s <= lit::<T>(Self::S_LO) {
            return self.leading_coeff * s.powf(self.leading_power);
        }
        let t = s.ln();
        let pos = (t - self.t_lo) / self.dt;
        let n = self.log_values.len();
        let i = (pos.to_f64().unwrap_or(0.0).floor() as usize)
            .min(n - 2)
            .max(1)
            .min(n - 3);
        // 4-point Lagrange on nodes i-1 .. i+2 in normalized coordinates.
        let x = pos - lit::<T>(i as f64);
        let ym1 = self.log_values[i - 1];
        let y0 = self.log_values[i];
        let y1 = self.log_values[i + 1];
        let y2 = self.log_values[i + 2];
        let sixth = lit::<T>(1.0 / 6.0);
        let half = lit::<T>(0.5);
        let l = -sixth * x * (x - T::one()) * (x - lit::<T>(2.0)) * ym1
            + half * (x + T::one()) * (x - T::one()) * (x - lit::<T>(2.0)) * y0
            - half * (x + T::one()) * x * (x - lit::<T>(2.0)) * y1
            + sixth * (x + T::one()) * x * (x - T::one()) * y2;
        l.exp()
    }
}

/// A concrete failure location found by [`audit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness<T> {
    /// Name of the violated hypothesis or property.
    pub hypothesis: &'static str,
    /// Sample point at which it failed.
    pub s: T,
    /// The violated quantity (sign convention: negative = violated margin).
    pub value: T,
}

/// Outcome of the sampling-based hypothesis audit.
#[derive(Debug, Clone)]
pub struct HypothesisReport<T> {
    pub f1_pass: bool,
    pub f2_pass: bool,
    pub f3_pass: bool,
    pub ar_pass: bool,
    /// `s²f'(s) - s f(s) > 0`.
    pub monotone_quotient_pass: bool,
    /// `f'(s) > 0` for `s ≠ 0`.
    pub fprime_positive_pass: bool,
    /// `H(s) > 0` for `s ≠ 0`.
    pub h_positive_pass: bool,
    /// `H` even and increasing on ℝ⁺.
    pub h_even_increasing_pass: bool,
    pub c_q: T,
    pub q: T,
    pub theta: T,
    pub growth_class: GrowthClass<T>,
    /// Every failure carries a concrete witness point.
    pub witnesses: Vec<Witness<T>>,
    /// The sample the audit ran on: (min, max, count).
    pub sample: (T, T, usize),
}

impl<T: Real> HypothesisReport<T> {
    pub fn pass_all(&self) -> bool {
        self.f1_pass
            && self.f2_pass
            && self.f3_pass
            && self.ar_pass
            && self.monotone_quotient_pass
            && self.fprime_positive_pass
            && self.h_positive_pass
            && self.h_even_increasing_pass
    }
}

/// Log-spaced sign-symmetric sample `±[s_min, s_max]` for [`audit`].
pub fn audit_sample<T: Real>(s_min: T, s_max: T, count: usize) -> Vec<T> {
    let count = count.max(4);
    let lo = s_min.ln();
    let hi = s_max.ln();
    let step = (hi - lo) / lit::<T>((count - 1) as f64);
    let mut out = Vec::with_capacity(2 * count);
    for i in 0..count {
        let s = (lo + step * lit::<T>(i as f64)).exp();
        out.push(s);
    }
    let mirror: Vec<T> = out.iter().map(|&s| -s).collect();
    out.extend(mirror);
    out
}

// Relative slack absorbing floating-point rounding in inequality checks;
// hypotheses holding with equality (e.g. (AR) for pure powers) must pass.
fn slack<T: Real>(a: T, b: T) -> T {
    lit::<T>(1e-11) * (a.abs() + b.abs()) + lit::<T>(1e-300)
}

/// Pointwise audit of (f1)–(f3), (AR), and the derived properties on the
/// given sign-symmetric sample. Failures are reported with witnesses, never
/// thrown.
pub fn audit<T: Real>(
    nl: &Nonlinearity<T>,
    sample: &[T],
    theta: T,
    c_q: T,
    q: T,
) -> HypothesisReport<T> {
    let mut witnesses = Vec::new();
    let mut positives: Vec<T> = sample.iter().copied().filter(|&s| s > T::zero()).collect();
    positives.sort_by(|a, b| a.partial_cmp(b).unwrap());

    // (f1) oddness, small-s decay of f(s)/s, midpoint convexity on ℝ⁺.
    let mut f1_pass = true;
    for &s in &positives {
        let odd_defect = nl.f(-s) + nl.f(s);
        if odd_defect.abs() > slack(nl.f(s), T::zero()) {
            f1_pass = false;
            witnesses.push(Witness {
                hypothesis: "(f1) oddness",
                s,
                value: odd_defect,
            });
        }
    }
    if positives.len() >= 3 {
        let q0 = (nl.f(positives[0]) / positives[0]).abs();
        let q2 = (nl.f(positives[2]) / positives[2]).abs();
        if !(q0 <= lit::<T>(1e-3)) || q0 > q2 + slack(q0, q2) {
            f1_pass = false;
            witnesses.push(Witness {
                hypothesis: "(f1) f(s)/s → 0",
                s: positives[0],
                value: q0,
            });
        }
    }
    for w in positives.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mid = (a + b) * lit::<T>(0.5);
        let defect = (nl.f(a) + nl.f(b)) * lit::<T>(0.5) - nl.f(mid);
        if defect < -slack(nl.f(a), nl.f(b)) {
            f1_pass = false;
            witnesses.push(Witness {
                hypothesis: "(f1) convexity",
                s: mid,
                value: defect,
            });
        }
    }

    // (f2): f(s)/s nondecreasing on ℝ⁺.
    let mut f2_pass = true;
    for w in positives.windows(2) {
        let qa = nl.f(w[0]) / w[0];
        let qb = nl.f(w[1]) / w[1];
        if qb < qa - slack(qa, qb) {
            f2_pass = false;
            witnesses.push(Witness {
                hypothesis: "(f2) f(s)/s increasing",
                s: w[1],
                value: qb - qa,
            });
        }
    }

    // (f3): F(s) ≥ C_q |s|^q.
    let mut f3_pass = true;
    for &s in sample {
        let lhs = nl.big_f(s);
        let rhs = c_q * s.abs().powf(q);
        if lhs < rhs - slack(lhs, rhs) {
            f3_pass = false;
            witnesses.push(Witness {
                hypothesis: "(f3) F ≥ C_q|s|^q",
                s,
                value: lhs - rhs,
            });
        }
    }

    // (AR): θ F(s) ≤ s f(s).
    let mut ar_pass = true;
    for &s in sample {
        let lhs = theta * nl.big_f(s);
        let rhs = s * nl.f(s);
        if lhs > rhs + slack(lhs, rhs) {
            ar_pass = false;
            witnesses.push(Witness {
                hypothesis: "(AR) θF ≤ sf",
                s,
                value: rhs - lhs,
            });
        }
    }

    // s²f'(s) - s f(s) > 0 for s ≠ 0.
    let mut monotone_quotient_pass = true;
    for &s in sample {
        let v = s * s * nl.fprime(s) - s * nl.f(s);
        if v <= -slack(s * s * nl.fprime(s), s * nl.f(s)) {
            monotone_quotient_pass = false;
            witnesses.push(Witness {
                hypothesis: "s²f' - sf > 0",
                s,
                value: v,
            });
        }
    }

    // f'(s) > 0 for s ≠ 0.
    let mut fprime_positive_pass = true;
    for &s in sample {
        let v = nl.fprime(s);
        if !(v > T::zero()) {
            fprime_positive_pass = false;
            witnesses.push(Witness {
                hypothesis: "f' > 0",
                s,
                value: v,
            });
        }
    }

    // H(s) > 0 for s ≠ 0.
    let mut h_positive_pass = true;
    for &s in sample {
        let v = nl.hfun(s);
        if !(v > T::zero()) {
            h_positive_pass = false;
            witnesses.push(Witness {
                hypothesis: "H > 0",
                s,
                value: v,
            });
        }
    }

    // H even; H increasing on ℝ⁺.
    let mut h_even_increasing_pass = true;
    for &s in &positives {
        let defect = nl.hfun(-s) - nl.hfun(s);
        if defect.abs() > slack(nl.hfun(s), T::zero()) {
            h_even_increasing_pass = false;
            witnesses.push(Witness {
                hypothesis: "H even",
                s,
                value: defect,
            });
        }
    }
    for w in positives.windows(2) {
        let ha = nl.hfun(w[0]);
        let hb = nl.hfun(w[1]);
        if hb < ha - slack(ha, hb) {
            h_even_increasing_pass = false;
            witnesses.push(Witness {
                hypothesis: "H increasing on ℝ⁺",
                s: w[1],
                value: hb - ha,
            });
        }
    }

    let (lo, hi) = (positives.first().copied(), positives.last().copied());
    HypothesisReport {
        f1_pass,
        f2_pass,
        f3_pass,
        ar_pass,
        monotone_quotient_pass,
        fprime_positive_pass,
        h_positive_pass,
        h_even_increasing_pass,
        c_q,
        q,
        theta,
        growth_class: nl.declared_growth(),
        witnesses,
        sample: (
            lo.unwrap_or_else(T::zero),
            hi.unwrap_or_else(T::zero),
            sample.len(),
        ),
    }
}

/// Empirical trend of `f(s)/(e^{αs²}-1)` along the tail sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailTrend {
    DecreasingToZero,
    Diverging,
    Indeterminate,
}

/// Per-α result of [`classify_growth`]: the trend of `f(s)/(e^{αs²}-1)` and
/// of `s f'(s)/(e^{αs²}-1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaTrend<T> {
    pub alpha: T,
    pub f_trend: TailTrend,
    pub sfprime_trend: TailTrend,
}

/// Growth classification report. The bracket, when present, encloses the
/// empirical critical exponent: the largest diverging α and the smallest
/// decaying α of the `f`-ratio scan.
#[derive(Debug, Clone)]
pub struct GrowthScan<T> {
    pub trends: Vec<AlphaTrend<T>>,
    pub alpha0_bracket: Option<(T, T)>,
    pub subcritical_for_all_tested: bool,
    pub s_max: T,
}

/// Scans `f(s)/(e^{αs²}-1)` (and the companion `s f'` ratio) over the tail
/// sample for each α, entirely in log space so no overflow can occur.
pub fn classify_growth<T: Real>(nl: &Nonlinearity<T>, alpha_list: &[T], s_max: T) -> GrowthScan<T> {
    let tail: Vec<T> = {
        let lo = (s_max / lit::<T>(8.0)).ln();
        let hi = s_max.ln();
        let count = 16usize;
        (0..count)
            .map(|i| (lo + (hi - lo) * lit::<T>(i as f64 / (count - 1) as f64)).exp())
            .collect()
    };
    let log_em1 = |x: T| -> T {
        // ln(e^x - 1), stable for both tails.
        if x > lit::<T>(40.0) {
            x
        } else {
            x.exp_m1().ln()
        }
    };
    let trend_of = |log_num: &dyn Fn(T) -> T, alpha: T| -> TailTrend {
        let r: Vec<T> = tail
            .iter()
            .map(|&s| log_num(s) - log_em1(alpha * s * s))
            .collect();
        let n = r.len();
        let delta = r[n - 1] - r[0];
        let r_max = r.iter().fold(T::neg_infinity(), |a, &b| a.max(b));
        let climbing = r[n - 1] >= r[n - 2];
        let threshold = lit::<T>(2.3); // one decade in the ratio
        if delta > threshold && climbing {
            TailTrend::Diverging
        } else if delta < -threshold && !climbing && r[n - 1] < r_max - threshold {
            // past its peak by more than a decade and still falling
            TailTrend::DecreasingToZero
        } else {
            TailTrend::Indeterminate
        }
    };

    let mut trends = Vec::with_capacity(alpha_list.len());
    for &alpha in alpha_list {
        trends.push(AlphaTrend {
            alpha,
            f_trend: trend_of(&|s| nl.log_f(s), alpha),
            sfprime_trend: trend_of(&|s| nl.log_sfprime(s), alpha),
        });
    }

    let mut last_diverging: Option<T> = None;
    let mut first_decaying: Option<T> = None;
    for t in &trends {
        match t.f_trend {
            TailTrend::Diverging => last_diverging = Some(t.alpha),
            TailTrend::DecreasingToZero => {
                if first_decaying.is_none() {
                    first_decaying = Some(t.alpha);
                }
            }
            TailTrend::Indeterminate => {}
        }
    }
    let alpha0_bracket = match (last_diverging, first_decaying) {
        (Some(lo), Some(hi)) if lo < hi => Some((lo, hi)),
        _ => None,
    };
    let subcritical_for_all_tested = trends
        .iter()
        .all(|t| t.f_trend == TailTrend::DecreasingToZero);

    GrowthScan {
        trends,
        alpha0_bracket,
        subcritical_for_all_tested,
        s_max,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn pure_power(p: f64) -> Nonlinearity<f64> {
        make_builtin(Family::PurePower { p }).unwrap()
    }

    #[test]
    fn pure_power_values() {
        let nl = pure_power(2.0);
        assert_eq!(nl.f(0.5), 0.25);
        assert_relative_eq!(nl.big_f(0.5), 1.0 / 24.0, max_relative = 1e-15);
        assert_eq!(nl.fprime(0.5), 1.0);
        assert_eq!(nl.f(-0.5), -0.25);
        assert_eq!(nl.big_f(-0.5), nl.big_f(0.5));
    }

    #[test]
    fn paper_critical_value_at_one() {
        // f(1) = λ + e^{α₀} with λ=1, q=4, α₀=π/4.
        let nl = make_builtin(Family::PaperCritical {
            lambda: 1.0,
            q: 4.0,
            alpha0: PI / 4.0,
        })
        .unwrap();
        let expected = 1.0 + (PI / 4.0_f64).exp();
        assert_relative_eq!(nl.f(1.0), expected, max_relative = 1e-14);
        assert_relative_eq!(expected, 3.19328, max_relative = 1e-5);
    }

    #[test]
    fn hfun_algebra() {
        let nl = pure_power(2.0);
        assert_relative_eq!(nl.hfun(2.0), 8.0 / 3.0, max_relative = 1e-14);
        let nl3 = pure_power(3.0);
        assert_relative_eq!(nl3.hfun(1.0), 0.5, max_relative = 1e-14);
    }

    #[test]
    fn hfun_beats_its_rescalings() {
        for nl in [
            pure_power(2.0),
            make_builtin(Family::PaperCritical {
                lambda: 40.0,
                q: 4.0,
                alpha0: PI / 4.0,
            })
            .unwrap(),
        ] {
            for s in [0.3, 1.0, 2.5] {
                for lam in [0.25, 0.5, 0.9] {
                    assert!(nl.hfun(s) > nl.hfun(lam * s));
                }
            }
        }
    }

    #[test]
    fn big_f_is_primitive_of_f() {
        // central differences of F match f away from s = 0 (f = |s|s is
        // only C¹ there, hence the excluded point).
        let eps = 1e-5;
        for nl in [
            pure_power(2.5),
            make_builtin(Family::PaperCritical {
                lambda: 2.0,
                q: 4.0,
                alpha0: 0.5,
            })
            .unwrap(),
            make_builtin(Family::ExpPower {
                alpha0: 1.0,
                nu: 2.0,
            })
            .unwrap(),
        ] {
            for s in [0.25_f64, 0.8, 1.7, -1.2] {
                let fd = (nl.big_f(s + eps) - nl.big_f(s - eps)) / (2.0 * eps);
                assert_relative_eq!(fd, nl.f(s), max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn table_matches_series_oracle_to_declared_tolerance() {
        // General-q primitive goes through the quadrature table; the
        // positive series is the independent oracle. Documented: 1e-10.
        let q = 3.0;
        let alpha0 = 0.8;
        let nl = make_builtin(Family::PaperCritical {
            lambda: 1.5,
            q,
            alpha0,
        })
        .unwrap();
        for i in 0..200 {
            let s = 1e-8 * (10.0_f64).powf(i as f64 * 9.0 / 199.0); // 1e-8 .. 10
            let series = 1.5 * s.powf(q) / q + exp_power_series(s, q, alpha0, 2.0);
            let got = nl.big_f(s);
            assert!(
                ((got - series) / series).abs() < 1e-10,
                "s = {s}: table {got} vs series {series}"
            );
        }
    }

    #[test]
    fn exp_power_general_nu_table() {
        let nl = make_builtin(Family::ExpPower {
            alpha0: 1.0,
            nu: 1.0,
        })
        .unwrap();
        for s in [1e-6, 0.01, 0.5, 2.0, 10.0] {
            let series = exp_power_series(s, 4.0, 1.0, 1.0);
            assert_relative_eq!(nl.big_f(s), series, max_relative = 1e-10);
        }
    }

    #[test]
    fn rejects_out_of_range_parameters() {
        assert!(make_builtin(Family::PurePower { p: 1.0 }).is_err());
        assert!(make_builtin(Family::PaperCritical {
            lambda: 1.0,
            q: 2.0,
            alpha0: 1.0
        })
        .is_err());
        assert!(make_builtin(Family::PaperCritical {
            lambda: -1.0,
            q: 4.0,
            alpha0: 1.0
        })
        .is_err());
        assert!(make_builtin(Family::ExpPower {
            alpha0: 0.0,
            nu: 2.0
        })
        .is_err());
    }

    #[test]
    fn audit_passes_pure_power_with_equality_ar() {
        // (AR) holds with equality: 3·|s|³/3 = s·s|s|.
        let nl = pure_power(2.0);
        let sample = audit_sample(1e-6, 6.0, 48);
        let report = audit(&nl, &sample, 3.0, 1.0 / 3.0, 3.0);
        assert!(report.pass_all(), "witnesses: {:?}", report.witnesses);
    }

    #[test]
    fn audit_passes_paper_critical_large_lambda() {
        let nl = make_builtin(Family::PaperCritical {
            lambda: 40.0,
            q: 4.0,
            alpha0: PI / 4.0,
        })
        .unwrap();
        let sample = audit_sample(1e-6, 6.0, 48);
        let report = audit(&nl, &sample, 4.0, 10.0, 4.0);
        assert!(report.pass_all(), "witnesses: {:?}", report.witnesses);
    }

    #[test]
    fn audit_fails_f3_with_witness() {
        let nl = pure_power(2.0);
        let sample = audit_sample(1e-6, 6.0, 48);
        let report = audit(&nl, &sample, 3.0, 1.0, 3.0); // C_q = 1 > 1/3
        assert!(!report.f3_pass);
        assert!(report
            .witnesses
            .iter()
            .any(|w| w.hypothesis == "(f3) F ≥ C_q|s|^q" && w.value < 0.0));
        assert!(!report.pass_all());
    }

    #[test]
    fn classify_growth_brackets_exp_power() {
        let nl = make_builtin(Family::ExpPower {
            alpha0: 1.0,
            nu: 2.0,
        })
        .unwrap();
        let alphas: Vec<f64> = (1..=31).map(|i| i as f64 * 0.1).collect();
        let scan = classify_growth(&nl, &alphas, 20.0);
        let (lo, hi) = scan.alpha0_bracket.expect("bracket");
        assert!(lo >= 0.9 && hi <= 1.1, "bracket [{lo}, {hi}]");
        assert!(!scan.subcritical_for_all_tested);
    }

    #[test]
    fn classify_growth_subcritical_cases() {
        let alphas: Vec<f64> = (1..=31).map(|i| i as f64 * 0.1).collect();
        // ν < 2 has subcritical growth.
        let nl = make_builtin(Family::ExpPower {
            alpha0: 1.0,
            nu: 1.0,
        })
        .unwrap();
        let scan = classify_growth(&nl, &alphas, 20.0);
        assert!(scan.subcritical_for_all_tested, "{:?}", scan.trends);
        // polynomials lose to every exponential
        let scan = classify_growth(&pure_power(2.0), &alphas, 20.0);
        assert!(scan.subcritical_for_all_tested);
        assert!(scan.alpha0_bracket.is_none());
    }

    #[test]
    fn critical_ratio_vanishes_above_alpha0() {
        // f(s)/(e^{αs²}-1) → 0 for every α > α₀ = 1 (both ratios).
        let nl = make_builtin(Family::ExpPower {
            alpha0: 1.0,
            nu: 2.0,
        })
        .unwrap();
        let scan = classify_growth(&nl, &[1.2, 1.5, 2.0, 3.0], 20.0);
        for t in &scan.trends {
            assert_eq!(t.f_trend, TailTrend::DecreasingToZero);
            assert_eq!(t.sfprime_trend, TailTrend::DecreasingToZero);
        }
    }

    #[test]
    fn oddness_and_evenness_exact_on_symmetric_samples() {
        for nl in [
            pure_power(2.0),
            make_builtin(Family::ExpPower {
                alpha0: 0.7,
                nu: 2.0,
            })
            .unwrap(),
        ] {
            for s in [1e-4_f64, 0.3, 1.0, 4.0] {
                assert_eq!(nl.f(-s), -nl.f(s));
                assert_eq!(nl.big_f(-s), nl.big_f(s));
                assert_eq!(nl.hfun(-s), nl.hfun(s));
            }
        }
    }
}
