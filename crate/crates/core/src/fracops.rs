//! Discrete Riesz fractional derivatives.
//!
//! The Riesz derivative of order `alpha` has Fourier symbol `-|k|^alpha`.
//! Three discretizations live here:
//!
//! * [`riesz_spectral`] applies the symbol on a periodic grid.
//! * [`riesz_finite`] combines the left and right Riemann–Liouville
//!   derivatives on a closed interval, with the function extended by zero
//!   outside it, using Grünwald–Letnikov convolution weights.
//! * [`riesz_order_one`] handles `alpha = 1`, where the combination
//!   coefficient is singular, as the derivative of the Hilbert transform.
//!
//! The sign of the forward transform kernel does not matter here because
//! every symbol depends on `|k|` only (the Hilbert symbol is paired with the
//! derivative symbol under the same convention).

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::grid::{ComplexField, Grid1D};

/// Minimum number of samples accepted by the spectral operators.
pub const MIN_SPECTRAL_POINTS: usize = 8;

/// Endpoint magnitude, relative to `max |f|`, below which a finite-domain
/// input counts as vanishing at the boundary.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

/// Combination coefficient `c_alpha = 1 / (2 cos(alpha*pi/2))`.
///
/// Defined for `alpha` in `(1, 2]`; `alpha = 1` goes through
/// [`riesz_order_one`] instead.
pub fn riesz_coefficient(alpha: f64) -> Result<f64> {
    check_two_sided_order(alpha)?;
    Ok(1.0 / (2.0 * (alpha * PI / 2.0).cos()))
}

fn check_two_sided_order(alpha: f64) -> Result<()> {
    if alpha == 1.0 {
        return Err(Error::Domain(
            "coefficient undefined at alpha = 1; alpha = 1 uses the Hilbert path".into(),
        ));
    }
    if !(alpha > 1.0 && alpha <= 2.0) {
        return Err(Error::Domain(format!("order alpha = {alpha} outside (1, 2]")));
    }
    Ok(())
}

/// Signed angular wavenumber of DFT bin `m` for `n` samples over period `period`.
pub fn wavenumber(m: usize, n: usize, period: f64) -> f64 {
    let signed = if m <= (n - 1) / 2 { m as f64 } else { m as f64 - n as f64 };
    2.0 * PI * signed / period
}

/// Multiplies the DFT of `values` by `symbol(k)` and transforms back.
pub(crate) fn apply_symbol(
    values: &[Complex64],
    step: f64,
    symbol: impl Fn(f64) -> Complex64,
) -> Vec<Complex64> {
    let n = values.len();
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);
    let mut buf = values.to_vec();
    forward.process(&mut buf);
    let period = n as f64 * step;
    let norm = 1.0 / n as f64;
    for (m, c) in buf.iter_mut().enumerate() {
        *c *= symbol(wavenumber(m, n, period)) * norm;
    }
    inverse.process(&mut buf);
    buf
}

fn check_spectral_input(f: &ComplexField) -> Result<()> {
    if f.len() < MIN_SPECTRAL_POINTS {
        return Err(Error::Input(format!(
            "spectral operators need at least {MIN_SPECTRAL_POINTS} points, got {}",
            f.len()
        )));
    }
    f.check_finite()
}

/// Riesz derivative of a periodic field via the symbol `-|k|^alpha`.
///
/// `f` is read as one period of length `count * step`. The zero mode maps
/// to zero.
pub fn riesz_spectral(f: &ComplexField, alpha: f64) -> Result<ComplexField> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::Domain(format!("order alpha = {alpha} outside (0, 2]")));
    }
    check_spectral_input(f)?;
    let out = apply_symbol(f.values(), f.grid().step(), |k| {
        Complex64::new(-k.abs().powf(alpha), 0.0)
    });
    ComplexField::new(*f.grid(), out)
}

/// Hilbert transform `(1/pi) PV int f(z) / (z - x) dz` of a periodic field.
///
/// With this orientation the symbol is `i sgn(k)`. The Nyquist bin of an
/// even-length grid has no sign and is dropped.
pub fn hilbert_transform(f: &ComplexField) -> Result<ComplexField> {
    check_spectral_input(f)?;
    let n = f.len();
    let out = hilbert_values(f.values(), f.grid().step(), n);
    ComplexField::new(*f.grid(), out)
}

fn hilbert_values(values: &[Complex64], step: f64, n: usize) -> Vec<Complex64> {
    let nyquist = 2.0 * PI * (n / 2) as f64 / (n as f64 * step);
    apply_symbol(values, step, |k| {
        if k == 0.0 || (n.is_multiple_of(2) && (k.abs() - nyquist).abs() < 1e-9 * nyquist) {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, k.signum())
        }
    })
}

/// Order-one Riesz derivative `d/dx H f`, the principal-value case where
/// the two-sided coefficient is singular.
pub fn riesz_order_one(f: &ComplexField) -> Result<ComplexField> {
    check_spectral_input(f)?;
    let step = f.grid().step();
    let h = hilbert_values(f.values(), step, f.len());
    let out = apply_symbol(&h, step, |k| Complex64::new(0.0, k));
    ComplexField::new(*f.grid(), out)
}

/// Grünwald–Letnikov discretization used for the one-sided derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GrunwaldScheme {
    /// Shifted Grünwald formula (shift 1), first order.
    Shifted,
    /// Weighted combination of shifts 1 and 0 with weights `alpha/2` and
    /// `1 - alpha/2`, second order. Reduces to the three-point second
    /// difference at `alpha = 2`.
    #[default]
    WeightedShifted,
}

/// Binomial weights `w_j = (-1)^j C(alpha, j)` from the recursion
/// `w_0 = 1, w_j = w_{j-1} (1 - (alpha + 1) / j)`.
pub fn grunwald_weights(alpha: f64, n: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(n);
    if n == 0 {
        return w;
    }
    w.push(1.0);
    for j in 1..n {
        let prev = w[j - 1];
        w.push(prev * (1.0 - (alpha + 1.0) / j as f64));
    }
    w
}

/// Emitted when a finite-domain input does not vanish at the endpoints, so
/// the zero extension outside `[a, b]` introduces a jump.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryWarning {
    pub left: f64,
    pub right: f64,
    pub threshold: f64,
}

impl std::fmt::Display for BoundaryWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "endpoint values |f(a)| = {:e}, |f(b)| = {:e} exceed {:e}; zero extension is inexact",
            self.left, self.right, self.threshold
        )
    }
}

/// Output of a finite-domain operator: the field plus an optional
/// boundary-condition warning.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteOutput {
    pub field: ComplexField,
    pub warning: Option<BoundaryWarning>,
}

fn boundary_check(f: &ComplexField) -> Option<BoundaryWarning> {
    let threshold = BOUNDARY_TOLERANCE * f.max_abs();
    let v = f.values();
    let left = v[0].norm();
    let right = v[v.len() - 1].norm();
    (left > threshold || right > threshold).then_some(BoundaryWarning { left, right, threshold })
}

/// Combined convolution weights `g_k` so that the left derivative at node
/// `i` is `h^-alpha * sum_m g_{i+1-m} f_m`.
fn left_kernel(alpha: f64, n: usize, scheme: GrunwaldScheme) -> Vec<f64> {
    let w = grunwald_weights(alpha, n + 1);
    let (shift_one, shift_zero) = match scheme {
        GrunwaldScheme::Shifted => (1.0, 0.0),
        GrunwaldScheme::WeightedShifted => (alpha / 2.0, 1.0 - alpha / 2.0),
    };
    (0..=n)
        .map(|k| {
            let prev = if k == 0 { 0.0 } else { w[k - 1] };
            shift_one * w[k] + shift_zero * prev
        })
        .collect()
}

fn left_values(values: &[Complex64], step: f64, alpha: f64, scheme: GrunwaldScheme) -> Vec<Complex64> {
    let n = values.len();
    let g = left_kernel(alpha, n, scheme);
    let scale = step.powf(-alpha);
    (0..n)
        .map(|i| {
            let top = (i + 1).min(n - 1);
            let mut acc = Complex64::new(0.0, 0.0);
            for (m, f) in values[..=top].iter().enumerate() {
                acc += f * g[i + 1 - m];
            }
            acc * scale
        })
        .collect()
}

fn right_values(values: &[Complex64], step: f64, alpha: f64, scheme: GrunwaldScheme) -> Vec<Complex64> {
    let reflected: Vec<Complex64> = values.iter().rev().copied().collect();
    let mut out = left_values(&reflected, step, alpha, scheme);
    out.reverse();
    out
}

fn check_finite_input(f: &ComplexField, alpha: f64) -> Result<()> {
    check_two_sided_order(alpha)?;
    f.check_finite()
}

/// Left Riemann–Liouville derivative of order `alpha` in `(1, 2]` on a
/// closed grid, with `f` extended by zero to the left of the first node.
pub fn rl_left(f: &ComplexField, alpha: f64) -> Result<FiniteOutput> {
    rl_left_with(f, alpha, GrunwaldScheme::default())
}

pub fn rl_left_with(f: &ComplexField, alpha: f64, scheme: GrunwaldScheme) -> Result<FiniteOutput> {
    check_finite_input(f, alpha)?;
    let values = left_values(f.values(), f.grid().step(), alpha, scheme);
    Ok(FiniteOutput { field: ComplexField::new(*f.grid(), values)?, warning: boundary_check(f) })
}

/// Right Riemann–Liouville derivative; the mirror image of [`rl_left`].
pub fn rl_right(f: &ComplexField, alpha: f64) -> Result<FiniteOutput> {
    rl_right_with(f, alpha, GrunwaldScheme::default())
}

pub fn rl_right_with(f: &ComplexField, alpha: f64, scheme: GrunwaldScheme) -> Result<FiniteOutput> {
    check_finite_input(f, alpha)?;
    let values = right_values(f.values(), f.grid().step(), alpha, scheme);
    Ok(FiniteOutput { field: ComplexField::new(*f.grid(), values)?, warning: boundary_check(f) })
}

/// Finite-interval Riesz derivative `-c_alpha (D_left + D_right) f`.
pub fn riesz_finite(f: &ComplexField, alpha: f64) -> Result<FiniteOutput> {
    riesz_finite_with(f, alpha, GrunwaldScheme::default())
}

pub fn riesz_finite_with(f: &ComplexField, alpha: f64, scheme: GrunwaldScheme) -> Result<FiniteOutput> {
    let coefficient = riesz_coefficient(alpha)?;
    let left = rl_left_with(f, alpha, scheme)?;
    let right = rl_right_with(f, alpha, scheme)?;
    let values = left
        .field
        .values()
        .iter()
        .zip(right.field.values())
        .map(|(l, r)| -coefficient * (l + r))
        .collect();
    Ok(FiniteOutput { field: ComplexField::new(*f.grid(), values)?, warning: left.warning })
}

/// Spectral Riesz derivative of a field that is numerically supported inside
/// its grid: the samples are zero-padded to `pad` times their length before
/// the symbol is applied, which suppresses the periodic images of the
/// algebraically decaying result.
pub fn riesz_spectral_padded(f: &ComplexField, alpha: f64, pad: usize) -> Result<ComplexField> {
    if pad == 0 {
        return Err(Error::Input("padding factor must be at least 1".into()));
    }
    let n = f.len();
    let total = n * pad;
    let offset = (total - n) / 2;
    let mut padded = vec![Complex64::new(0.0, 0.0); total];
    padded[offset..offset + n].copy_from_slice(f.values());
    let grid = Grid1D::new(f.grid().start() - offset as f64 * f.grid().step(), f.grid().step(), total)?;
    let wide = riesz_spectral(&ComplexField::new(grid, padded)?, alpha)?;
    ComplexField::new(*f.grid(), wide.values()[offset..offset + n].to_vec())
}
