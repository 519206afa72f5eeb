//! Uniform one-dimensional grids and complex sample fields.
//!
//! Periodic grids exclude the right endpoint (`x in [a, a + count*step)`);
//! finite-domain grids include both endpoints. Both are the same [`Grid1D`],
//! only the constructor differs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used when recognising a uniform spacing in sampled
/// coordinates.
pub const UNIFORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    start: f64,
    step: f64,
    count: usize,
}

impl Grid1D {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        if !start.is_finite() || !step.is_finite() {
            return Err(Error::Input("grid start and step must be finite".into()));
        }
        if step <= 0.0 {
            return Err(Error::Input(format!("grid step must be positive, got {step}")));
        }
        if count < 2 {
            return Err(Error::Input(format!("grid needs at least 2 points, got {count}")));
        }
        Ok(Self { start, step, count })
    }

    /// `count` points covering `[a, b)`, the usual DFT layout.
    pub fn periodic(a: f64, b: f64, count: usize) -> Result<Self> {
        if count == 0 || !(b > a) {
            return Err(Error::Input(format!("invalid periodic interval [{a}, {b})")));
        }
        Self::new(a, (b - a) / count as f64, count)
    }

    /// `count` points covering `[a, b]` including both endpoints.
    pub fn closed(a: f64, b: f64, count: usize) -> Result<Self> {
        if count < 2 || !(b > a) {
            return Err(Error::Input(format!("invalid closed interval [{a}, {b}]")));
        }
        Self::new(a, (b - a) / (count - 1) as f64, count)
    }

    /// Recovers a grid from sampled coordinates, rejecting non-uniform or
    /// non-monotone spacing.
    pub fn from_coordinates(xs: &[f64]) -> Result<Self> {
        if xs.len() < 2 {
            return Err(Error::Input(format!("need at least 2 coordinates, got {}", xs.len())));
        }
        let n = xs.len();
        let step = (xs[n - 1] - xs[0]) / (n - 1) as f64;
        if !(step > 0.0) {
            return Err(Error::Input("coordinates must be strictly increasing".into()));
        }
        let scale = xs[0].abs().max(xs[n - 1].abs()).max(step);
        for (i, &x) in xs.iter().enumerate() {
            let expected = xs[0] + i as f64 * step;
            if (x - expected).abs() > UNIFORM_TOLERANCE * scale {
                return Err(Error::Input(format!(
                    "non-uniform grid: coordinate {i} is {x}, expected {expected}"
                )));
            }
        }
        Self::new(xs[0], step, n)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.coordinate(self.count - 1)
    }

    /// Length of one period when the grid is read as a periodic layout.
    pub fn period(&self) -> f64 {
        self.count as f64 * self.step
    }

    pub fn coordinates(&self) -> impl DoubleEndedIterator<Item = f64> + ExactSizeIterator + '_ {
        (0..self.count).map(move |i| self.coordinate(i))
    }

    /// Index of a node sitting on the origin, if any.
    pub fn origin_index(&self) -> Option<usize> {
        let i = (-self.start / self.step).round();
        if i < 0.0 || i >= self.count as f64 {
            return None;
        }
        let i = i as usize;
        (self.coordinate(i).abs() <= 1e-9 * self.step).then_some(i)
    }

    /// Sub-grid made of nodes `lo..hi`.
    pub fn slice(&self, lo: usize, hi: usize) -> Result<Self> {
        if hi > self.count || hi < lo + 2 {
            return Err(Error::Input(format!("invalid grid slice {lo}..{hi} of {}", self.count)));
        }
        Self::new(self.coordinate(lo), self.step, hi - lo)
    }
}

/// Complex samples attached to a [`Grid1D`]. Values are finite by
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: Grid1D,
    values: Vec<Complex64>,
}

impl ComplexField {
    pub fn new(grid: Grid1D, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.count() {
            return Err(Error::Input(format!(
                "field has {} values but grid has {} points",
                values.len(),
                grid.count()
            )));
        }
        if let Some(i) = values.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Input(format!("non-finite value at index {i}")));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid1D) -> Self {
        Self { grid, values: vec![Complex64::new(0.0, 0.0); grid.count()] }
    }

    /// Samples `f` at every grid coordinate.
    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        Self::new(grid, grid.coordinates().map(f).collect())
    }

    pub fn from_real_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Pointwise `self*a + other*b`; grids must match.
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::Input("fields live on different grids".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(x, y)| x * a + y * b).collect();
        Self::new(self.grid, values)
    }

    pub fn scale(&self, a: Complex64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|z| z * a).collect() }
    }

    /// Restriction to nodes `lo..hi`.
    pub fn slice(&self, lo: usize, hi: usize) -> Result<Self> {
        let grid = self.grid.slice(lo, hi)?;
        Ok(Self { grid, values: self.values[lo..hi].to_vec() })
    }

    pub fn check_finite(&self) -> Result<()> {
        match self.values.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            Some(i) => Err(Error::Input(format!("non-finite value at index {i}"))),
            None => Ok(()),
        }
    }
}

/// Maximum pointwise distance between two equally long sample slices.
pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
