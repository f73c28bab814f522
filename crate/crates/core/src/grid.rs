//! Truncated periodic computational domain and sampled fields.
//!
//! The line is replaced by the box `[-L, L)` with periodic wrap, sampled at
//! `N` uniform points `x_j = -L + j h`, `h = 2L/N`. The discrete wavenumbers
//! are `ξ_k = πk/L` for `k ∈ {-N/2, …, N/2-1}` in FFT order.

use std::io::{BufRead, Write};

use crate::scalar::{lit, Real};
use crate::{Error, Result};

/// Description of the periodic computational domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    half_width: T,
    n_points: usize,
}

impl<T: Real> GridSpec<T> {
    /// Minimum admissible number of points.
    pub const MIN_POINTS: usize = 16;

    /// Creates a grid over `[-half_width, half_width)` with `n_points`
    /// samples. `n_points` must be even and at least 16.
    pub fn new(half_width: T, n_points: usize) -> Result<Self> {
        if !(half_width > T::zero()) || !half_width.is_finite() {
            return Err(Error::InvalidParameter {
                name: "half_width",
                value: half_width.to_f64().unwrap_or(f64::NAN),
                constraint: "must be finite and positive",
            });
        }
        if n_points < Self::MIN_POINTS || n_points % 2 != 0 {
            return Err(Error::InvalidParameter {
                name: "n_points",
                value: n_points as f64,
                constraint: "must be even and ≥ 16",
            });
        }
        Ok(Self {
            half_width,
            n_points,
        })
    }

    /// Domain half-width `L`.
    #[inline]
    pub fn half_width(&self) -> T {
        self.half_width
    }

    /// Number of samples `N`.
    #[inline]
    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Grid spacing `h = 2L/N`.
    #[inline]
    pub fn spacing(&self) -> T {
        lit::<T>(2.0) * self.half_width / lit::<T>(self.n_points as f64)
    }

    /// `j`-th sample location `x_j = -L + j h`.
    #[inline]
    pub fn point(&self, j: usize) -> T {
        debug_assert!(j < self.n_points);
        -self.half_width + lit::<T>(j as f64) * self.spacing()
    }

    /// All sample locations in order.
    pub fn points(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.n_points).map(move |j| self.point(j))
    }

    /// Wavenumber `ξ = πk/L` attached to FFT bin `i` (bins are ordered
    /// `k = 0, 1, …, N/2-1, -N/2, …, -1`).
    #[inline]
    pub fn wavenumber(&self, i: usize) -> T {
        let n = self.n_points;
        debug_assert!(i < n);
        let k = if i < n / 2 {
            i as f64
        } else {
            i as f64 - n as f64
        };
        T::PI() * lit::<T>(k) / self.half_width
    }

    /// Wavenumber spacing `Δξ = π/L`.
    #[inline]
    pub fn wavenumber_spacing(&self) -> T {
        T::PI() / self.half_width
    }

    /// Index of the grid point nearest to `x` (periodic wrap).
    pub fn nearest_index(&self, x: T) -> usize {
        let h = self.spacing();
        let raw = ((x + self.half_width) / h).round();
        let n = self.n_points as isize;
        let j = raw.to_f64().unwrap_or(0.0) as isize;
        (((j % n) + n) % n) as usize
    }

    /// Index of the grid point at `x`, rejecting off-grid requests.
    pub fn index_of(&self, x: T) -> Result<usize> {
        let j = self.nearest_index(x);
        let xj = self.point(j);
        let tol = self.spacing() * lit::<T>(1e-9);
        if (x - xj).abs() > tol {
            return Err(Error::OffGrid {
                x: x.to_f64().unwrap_or(f64::NAN),
                nearest: xj.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(j)
    }
}

/// Real-valued function sampled on a [`GridSpec`]; the discrete stand-in
/// for an element of `H^{1/2}(ℝ)`.
///
/// Fields are immutable after construction. Binary operations require
/// bit-identical grids and panic otherwise (a programming error, not a
/// runtime condition).
#[derive(Debug, Clone, PartialEq)]
pub struct Field<T> {
    grid: GridSpec<T>,
    values: Vec<T>,
}

impl<T: Real> Field<T> {
    /// Wraps raw samples, verifying length and finiteness.
    pub fn new(grid: GridSpec<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(Error::InvalidParameter {
                name: "values.len()",
                value: values.len() as f64,
                constraint: "must equal grid.n_points()",
            });
        }
        let field = Self { grid, values };
        field.ensure_finite("Field::new")?;
        Ok(field)
    }

    /// Samples `f` at every grid point.
    pub fn from_fn(grid: GridSpec<T>, f: impl Fn(T) -> T) -> Self {
        let values = grid.points().map(f).collect();
        Self { grid, values }
    }

    /// The zero field.
    pub fn zeros(grid: GridSpec<T>) -> Self {
        Self {
            grid,
            values: vec![T::zero(); grid.n_points()],
        }
    }

    #[inline]
    pub fn grid(&self) -> GridSpec<T> {
        self.grid
    }

    #[inline]
    pub fn values(&self) -> &[T] {
        &self.values
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest absolute sample.
    pub fn max_abs(&self) -> T {
        self.values
            .iter()
            .fold(T::zero(), |acc, &v| acc.max(v.abs()))
    }

    /// Rejects NaN/Inf samples with the offending index.
    pub fn ensure_finite(&self, context: &'static str) -> Result<()> {
        for (index, &v) in self.values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    context,
                    index,
                    value: v.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(())
    }

    /// Applies `f` sample-wise.
    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// `c · u`.
    pub fn scale(&self, c: T) -> Self {
        self.map(|v| c * v)
    }

    fn assert_same_grid(&self, other: &Self, op: &str) {
        assert!(
            self.grid == other.grid,
            "field {op} on mismatched grids: {:?} vs {:?}",
            self.grid,
            other.grid
        );
    }

    /// `u + v` (same grid required).
    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_grid(other, "add");
        self.zip(other, |a, b| a + b)
    }

    /// `u - v` (same grid required).
    pub fn sub(&self, other: &Self) -> Self {
        self.assert_same_grid(other, "sub");
        self.zip(other, |a, b| a - b)
    }

    /// `u + c·v` (same grid required).
    pub fn axpy(&self, c: T, other: &Self) -> Self {
        self.assert_same_grid(other, "axpy");
        self.zip(other, |a, b| a + c * b)
    }

    fn zip(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(other.values.iter())
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// Periodic rotation of the samples by `steps` whole grid steps:
    /// the result is `x ↦ u(x + steps·h)`. Exact (a permutation).
    pub fn translate_steps(&self, steps: isize) -> Self {
        let n = self.values.len() as isize;
        let shift = ((steps % n) + n) % n;
        let mut values = Vec::with_capacity(self.values.len());
        for j in 0..n {
            values.push(self.values[((j + shift) % n) as usize]);
        }
        Self {
            grid: self.grid,
            values,
        }
    }

    /// Rectangle-rule quadrature `h Σ g(u_j)` (spectrally accurate for
    /// smooth periodic data).
    pub fn integrate(&self, g: impl Fn(T) -> T) -> T {
        let h = self.grid.spacing();
        let mut acc = T::zero();
        for &v in &self.values {
            acc = acc + g(v);
        }
        acc * h
    }

    /// Rectangle-rule quadrature of a sample-wise product `h Σ g(u_j, v_j)`.
    pub fn integrate_with(&self, other: &Self, g: impl Fn(T, T) -> T) -> T {
        self.assert_same_grid(other, "integrate_with");
        let h = self.grid.spacing();
        let mut acc = T::zero();
        for (&a, &b) in self.values.iter().zip(other.values.iter()) {
            acc = acc + g(a, b);
        }
        acc * h
    }

    /// Writes the field as CSV with header `x,u`, one row per grid point,
    /// at full double precision (17 significant digits).
    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "x,u")?;
        for (x, v) in self.grid.points().zip(self.values.iter()) {
            writeln!(out, "{:.16e},{:.16e}", x, v)?;
        }
        Ok(())
    }

    /// Reads a field written by [`Field::write_csv`]. The grid is
    /// reconstructed from the sample locations.
    pub fn read_csv(input: &mut impl BufRead) -> Result<Field<T>> {
        let mut xs: Vec<f64> = Vec::new();
        let mut vs: Vec<T> = Vec::new();
        let mut lines = input.lines();
        let header = lines
            .next()
            .and_then(|l| l.ok())
            .unwrap_or_default();
        if header.trim() != "x,u" {
            return Err(Error::InvalidParameter {
                name: "csv header",
                value: 0.0,
                constraint: "expected `x,u`",
            });
        }
        for line in lines {
            let line = line.map_err(|_| Error::InvalidParameter {
                name: "csv line",
                value: xs.len() as f64,
                constraint: "unreadable",
            })?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row = xs.len();
            let mut parts = line.split(',');
            let (x, u) = match (parts.next(), parts.next()) {
                (Some(x), Some(u)) => (x, u),
                _ => {
                    return Err(Error::InvalidParameter {
                        name: "csv line",
                        value: row as f64,
                        constraint: "expected two comma-separated numbers",
                    })
                }
            };
            fn parse(s: &str, row: usize) -> Result<f64> {
                s.trim().parse::<f64>().map_err(|_| Error::InvalidParameter {
                    name: "csv number",
                    value: row as f64,
                    constraint: "not a floating-point literal",
                })
            }
            xs.push(parse(x, row)?);
            vs.push(lit::<T>(parse(u, row)?));
        }
        let n = xs.len();
        if n < GridSpec::<T>::MIN_POINTS || n % 2 != 0 {
            return Err(Error::InvalidParameter {
                name: "csv rows",
                value: n as f64,
                constraint: "need an even number of rows (≥ 16)",
            });
        }
        // x_0 = -L and h = x_1 - x_0 determine the grid.
        let h = xs[1] - xs[0];
        let half_width = -xs[0];
        let grid = GridSpec::new(lit::<T>(half_width), n)?;
        let expected_h = 2.0 * half_width / n as f64;
        if (h - expected_h).abs() > 1e-9 * expected_h {
            return Err(Error::InvalidParameter {
                name: "csv spacing",
                value: h,
                constraint: "rows are not uniformly spaced over [-L, L)",
            });
        }
        Field::new(grid, vs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn grid() -> GridSpec<f64> {
        GridSpec::new(10.0, 64).unwrap()
    }

    #[test]
    fn spacing_is_exact() {
        let g = grid();
        assert_eq!(g.spacing(), 20.0 / 64.0);
        assert_eq!(g.point(0), -10.0);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(GridSpec::new(0.0, 64).is_err());
        assert!(GridSpec::new(-1.0, 64).is_err());
        assert!(GridSpec::new(10.0, 63).is_err());
        assert!(GridSpec::new(10.0, 8).is_err());
    }

    #[test]
    fn wavenumbers_cover_symmetric_range() {
        let g = grid();
        let n = g.n_points();
        // k = 0..N/2-1 then -N/2..-1
        assert_eq!(g.wavenumber(0), 0.0);
        assert_relative_eq!(g.wavenumber(1), std::f64::consts::PI / 10.0);
        assert_relative_eq!(g.wavenumber(n - 1), -std::f64::consts::PI / 10.0);
        for k in 1..n / 2 {
            assert_eq!(g.wavenumber(k), -g.wavenumber(n - k));
        }
    }

    #[test]
    fn rejects_non_finite_samples() {
        let g = grid();
        let mut values = vec![0.0; g.n_points()];
        values[7] = f64::NAN;
        let err = Field::new(g, values).unwrap_err();
        match err {
            Error::NonFinite { index, .. } => assert_eq!(index, 7),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn translation_is_a_permutation() {
        let g = grid();
        let u = Field::from_fn(g, |x| (x * 0.7).sin() + 0.3 * x.cos());
        let v = u.translate_steps(5).translate_steps(-5);
        assert_eq!(u, v);
        let w = u.translate_steps(g.n_points() as isize);
        assert_eq!(u, w);
    }

    #[test]
    fn csv_roundtrip_preserves_samples() {
        let g = grid();
        let u = Field::from_fn(g, |x| 2.0 / (1.0 + x * x));
        let mut buf = Vec::new();
        u.write_csv(&mut buf).unwrap();
        let back = Field::<f64>::read_csv(&mut buf.as_slice()).unwrap();
        assert_eq!(u.grid(), back.grid());
        for (a, b) in u.values().iter().zip(back.values()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn index_of_rejects_off_grid_points() {
        let g = grid();
        assert_eq!(g.index_of(-10.0).unwrap(), 0);
        assert_eq!(g.index_of(0.0).unwrap(), 32);
        assert!(g.index_of(0.1).is_err());
    }

    #[test]
    #[should_panic(expected = "mismatched grids")]
    fn mixed_grid_arithmetic_panics() {
        let a = Field::zeros(GridSpec::new(10.0, 64).unwrap());
        let b = Field::zeros(GridSpec::new(10.0, 128).unwrap());
        let _ = a.add(&b);
    }
}
