//! Similarity profile `phi(v)` of the equation with constant potential.
//!
//! In Fourier space the profile equation is first order and has the closed
//! form
//!
//! ```text
//! Psi(w) = c |w|^(-2i/eps - 1) exp(-i (eps/alpha) |w|^alpha).
//! ```
//!
//! `Psi` is not integrable at the origin, so `phi` is recovered through its
//! slope: `w Psi(w)` is bounded, its even extension transforms to
//!
//! ```text
//! I(tau) = (1/pi) int_0^inf w^(-2i/eps) exp(-i (eps/alpha) w^alpha) cos(w tau) dw
//! ```
//!
//! and `phi(v) = int_0^v I`. The result is odd, with `phi(0) = 0` exactly.
//! `I` is computed by [`quadrature::SlopeQuadrature`]; the outer integral is
//! composite Simpson with `tau_steps` subintervals per grid cell.

pub mod quadrature;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{max_abs_diff, ComplexField, Grid1D};
use crate::similarity::{reduced_ode_residual_with, PdeParams, ResidualOptions, ResidualReport};

pub use quadrature::SlopeQuadrature;

/// Doubling rounds allowed in [`refine_profile`].
pub const MAX_REFINEMENTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureControls {
    /// Start of the averaged oscillatory tail (raised automatically past the
    /// stationary phase point of the widest `tau`).
    pub omega_max: f64,
    /// Nodes per `2 pi` of phase in the resolved region.
    pub nodes_per_period: usize,
    /// Simpson subintervals per grid cell in `v` (rounded up to even).
    pub tau_steps: usize,
    /// Tail periods whose partial sums are averaged.
    pub tail_averaging_periods: usize,
}

impl Default for QuadratureControls {
    fn default() -> Self {
        Self { omega_max: 8.0, nodes_per_period: 8, tau_steps: 32, tail_averaging_periods: 8 }
    }
}

impl QuadratureControls {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega_max > 0.0) || !self.omega_max.is_finite() {
            return Err(Error::Input(format!("omega_max must be positive, got {}", self.omega_max)));
        }
        if self.nodes_per_period < 8 {
            return Err(Error::Input(format!(
                "nodes_per_period must be at least 8, got {}",
                self.nodes_per_period
            )));
        }
        if self.tau_steps < 32 {
            return Err(Error::Input(format!("tau_steps must be at least 32, got {}", self.tau_steps)));
        }
        if self.tail_averaging_periods < 4 {
            return Err(Error::Input(format!(
                "tail_averaging_periods must be at least 4, got {}",
                self.tail_averaging_periods
            )));
        }
        Ok(())
    }

    /// Every resolution control doubled.
    pub fn doubled(&self) -> Self {
        Self {
            omega_max: 2.0 * self.omega_max,
            nodes_per_period: 2 * self.nodes_per_period,
            tau_steps: 2 * self.tau_steps,
            tail_averaging_periods: self.tail_averaging_periods,
        }
    }

    /// Doubles one control, cycling through `omega_max`, `nodes_per_period`
    /// and `tau_steps` with `round`.
    pub fn doubled_one(&self, round: usize) -> Self {
        let mut q = *self;
        match round % 3 {
            0 => q.omega_max *= 2.0,
            1 => q.nodes_per_period *= 2,
            _ => q.tau_steps *= 2,
        }
        q
    }

    fn even_tau_steps(&self) -> usize {
        self.tau_steps + self.tau_steps % 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSpec {
    pub alpha: f64,
    pub epsilon: f64,
    /// Amplitude of the Fourier-space solution.
    pub branch_c: Complex64,
    pub quad: QuadratureControls,
}

impl ProfileSpec {
    /// Profile with the default amplitude `c = i` and default quadrature.
    pub fn new(alpha: f64, epsilon: f64) -> Result<Self> {
        PdeParams::new(alpha, epsilon)?;
        Ok(Self {
            alpha,
            epsilon,
            branch_c: Complex64::new(0.0, 1.0),
            quad: QuadratureControls::default(),
        })
    }

    pub fn with_quad(mut self, quad: QuadratureControls) -> Self {
        self.quad = quad;
        self
    }

    pub fn with_branch(mut self, c: Complex64) -> Self {
        self.branch_c = c;
        self
    }

    pub fn params(&self) -> Result<PdeParams> {
        PdeParams::new(self.alpha, self.epsilon)
    }

    fn validate(&self) -> Result<()> {
        self.params()?;
        if !self.branch_c.re.is_finite() || !self.branch_c.im.is_finite() {
            return Err(Error::Input("branch constant must be finite".into()));
        }
        self.quad.validate()
    }
}

/// Profile samples with a self-convergence estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub spec: ProfileSpec,
    pub field: ComplexField,
    /// Largest pointwise change when every quadrature control is doubled.
    pub convergence_estimate: f64,
    pub unconverged: bool,
}

impl Profile {
    pub fn grid(&self) -> &Grid1D {
        self.field.grid()
    }

    pub fn values(&self) -> &[Complex64] {
        self.field.values()
    }
}

/// Fourier-space profile with chirp coefficient `g`:
/// `c |w|^(-2i/eps - 1) exp(-i g |w|^alpha)` and its derivative.
fn closed_form(omega: f64, spec: &ProfileSpec, chirp: f64) -> (Complex64, Complex64) {
    let a = omega.abs();
    let beta = 2.0 / spec.epsilon;
    let psi = spec.branch_c / a * Complex64::from_polar(1.0, -beta * a.ln() - chirp * a.powf(spec.alpha));
    let log_slope = Complex64::new(-1.0, -beta) / omega
        - Complex64::new(0.0, chirp * spec.alpha * omega.signum() * a.powf(spec.alpha - 1.0));
    (psi, psi * log_slope)
}

fn check_frequency(omega: f64) -> Result<()> {
    if omega == 0.0 {
        return Err(Error::Singularity("the Fourier profile is singular at omega = 0".into()));
    }
    if !omega.is_finite() {
        return Err(Error::Input(format!("frequency must be finite, got {omega}")));
    }
    Ok(())
}

/// `Psi(omega)` of the profile.
pub fn fourier_profile(omega: f64, spec: &ProfileSpec) -> Result<Complex64> {
    spec.params()?;
    check_frequency(omega)?;
    Ok(closed_form(omega, spec, spec.epsilon / spec.alpha).0)
}

/// `Psi'(omega)` of the profile, analytically.
pub fn fourier_profile_derivative(omega: f64, spec: &ProfileSpec) -> Result<Complex64> {
    spec.params()?;
    check_frequency(omega)?;
    Ok(closed_form(omega, spec, spec.epsilon / spec.alpha).1)
}

/// Residual of the transformed profile equation,
/// `(eps/2)(w Psi' + Psi) + i (eps^2/2) |w|^alpha Psi + i Psi`,
/// for the closed form with chirp coefficient `chirp` (the solution has
/// `chirp = eps/alpha`).
pub fn fourier_ode_residual_with_chirp(omega: f64, spec: &ProfileSpec, chirp: f64) -> Result<Complex64> {
    spec.params()?;
    check_frequency(omega)?;
    let (psi, dpsi) = closed_form(omega, spec, chirp);
    Ok(fourier_equation(omega, spec, psi, dpsi))
}

/// Transformed profile equation applied to given values of `Psi` and `Psi'`.
pub fn fourier_equation(omega: f64, spec: &ProfileSpec, psi: Complex64, dpsi: Complex64) -> Complex64 {
    let eps = spec.epsilon;
    let i = Complex64::new(0.0, 1.0);
    (eps / 2.0) * (omega * dpsi + psi) + i * (eps * eps / 2.0) * omega.abs().powf(spec.alpha) * psi + i * psi
}

pub fn fourier_ode_residual(omega: f64, spec: &ProfileSpec) -> Result<Complex64> {
    fourier_ode_residual_with_chirp(omega, spec, spec.epsilon / spec.alpha)
}

/// Slope `phi'(tau)` of the profile (for `branch_c = i`; other amplitudes
/// scale it by `c / i`).
pub fn profile_slope_integrand(tau: f64, spec: &ProfileSpec) -> Result<Complex64> {
    spec.validate()?;
    if !tau.is_finite() {
        return Err(Error::Input(format!("tau must be finite, got {tau}")));
    }
    let q = SlopeQuadrature::new(spec.alpha, spec.epsilon, &spec.quad, tau);
    Ok(q.eval(tau) * branch_scale(spec))
}

/// Factor relating `branch_c` to the reference amplitude `i` used by the
/// quadrature.
fn branch_scale(spec: &ProfileSpec) -> Complex64 {
    spec.branch_c / Complex64::new(0.0, 1.0)
}

fn simpson(values: &[Complex64], h: f64) -> Complex64 {
    let n = values.len() - 1;
    let mut acc = values[0] + values[n];
    for (k, v) in values.iter().enumerate().take(n).skip(1) {
        acc += v * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * (h / 3.0)
}

/// Profile samples on `grid` with the controls in `spec` (no estimate).
pub fn profile_values(grid: &Grid1D, spec: &ProfileSpec) -> Result<Vec<Complex64>> {
    Ok(profile_and_slope(grid, spec)?.0)
}

/// Slope `phi'` at the nodes of `grid`, from the same quadrature as
/// [`profile_values`].
pub fn profile_slopes(grid: &Grid1D, spec: &ProfileSpec) -> Result<Vec<Complex64>> {
    Ok(profile_and_slope(grid, spec)?.1)
}

/// Profile samples and the slope at the same nodes.
fn profile_and_slope(grid: &Grid1D, spec: &ProfileSpec) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    spec.validate()?;
    let n = grid.count();
    let h = grid.step();
    let m = spec.quad.even_tau_steps();
    let tau_max = grid.start().abs().max(grid.end().abs());
    let q = SlopeQuadrature::new(spec.alpha, spec.epsilon, &spec.quad, tau_max);
    let scale = branch_scale(spec);
    let mut phi = vec![Complex64::new(0.0, 0.0); n];

    if let Some(i0) = grid.origin_index() {
        // Both sides share |tau| = k h / m, so the slope is sampled once.
        let cells = i0.max(n - 1 - i0);
        let taus: Vec<f64> = (0..=cells * m).map(|k| k as f64 * h / m as f64).collect();
        let slope = q.eval_many(&taus);
        let nodes = (0..n).map(|i| slope[i.abs_diff(i0) * m] * scale).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for c in 0..cells {
            acc += simpson(&slope[c * m..=(c + 1) * m], h / m as f64);
            let value = acc * scale;
            if i0 + c + 1 < n {
                phi[i0 + c + 1] = value;
            }
            if c < i0 {
                phi[i0 - c - 1] = -value;
            }
        }
        return Ok((phi, nodes));
    }

    // No node on the origin: integrate from 0 to the nearest node first,
    // then outwards cell by cell.
    let a = (0..n)
        .min_by(|&i, &j| grid.coordinate(i).abs().total_cmp(&grid.coordinate(j).abs()))
        .unwrap_or(0);
    let va = grid.coordinate(a);
    let first = (((va.abs() / h) * m as f64).ceil() as usize).max(2);
    let first = first + first % 2;
    let mut segments: Vec<(f64, f64, usize)> = vec![(0.0, va, first)];
    for i in a + 1..n {
        segments.push((grid.coordinate(i - 1), grid.coordinate(i), m));
    }
    for i in (0..a).rev() {
        segments.push((grid.coordinate(i + 1), grid.coordinate(i), m));
    }
    let mut taus = Vec::new();
    for &(s, e, k) in &segments {
        taus.extend((0..=k).map(|j| s + (e - s) * j as f64 / k as f64));
    }
    let slope = q.eval_many(&taus);
    let mut offset = 0;
    let mut integrals = Vec::with_capacity(segments.len());
    for &(s, e, k) in &segments {
        integrals.push(simpson(&slope[offset..=offset + k], (e - s) / k as f64) * scale);
        offset += k + 1;
    }
    phi[a] = integrals[0];
    let mut it = integrals.into_iter().skip(1);
    for i in a + 1..n {
        phi[i] = phi[i - 1] + it.next().unwrap_or_default();
    }
    for i in (0..a).rev() {
        phi[i] = phi[i + 1] + it.next().unwrap_or_default();
    }
    let abs: Vec<f64> = grid.coordinates().map(f64::abs).collect();
    let nodes = q.eval_many(&abs).into_iter().map(|z| z * scale).collect();
    Ok((phi, nodes))
}

/// Profile on `grid`. The convergence estimate is the largest change of the
/// profile or of its slope at the grid nodes, either under one doubling of
/// every control or under a doubling of `omega_max` alone.
pub fn evaluate_profile(grid: &Grid1D, spec: &ProfileSpec) -> Result<Profile> {
    let (base, base_slope) = profile_and_slope(grid, spec)?;
    let wide = QuadratureControls { omega_max: 2.0 * spec.quad.omega_max, ..spec.quad };
    let mut estimate = 0.0f64;
    for quad in [spec.quad.doubled(), wide] {
        let (phi, slope) = profile_and_slope(grid, &spec.with_quad(quad))?;
        estimate = estimate.max(max_abs_diff(&base, &phi)).max(max_abs_diff(&base_slope, &slope));
    }
    Ok(Profile {
        spec: *spec,
        field: ComplexField::new(*grid, base)?,
        convergence_estimate: estimate,
        unconverged: false,
    })
}

/// Doubles one control at a time (cycling) until the convergence estimate
/// drops below `target`, for at most [`MAX_REFINEMENTS`] rounds. The result
/// is flagged `unconverged` when the cap is reached first.
pub fn refine_profile(grid: &Grid1D, spec: &ProfileSpec, target: f64) -> Result<Profile> {
    if !(target > 0.0) || !target.is_finite() {
        return Err(Error::Input(format!("tolerance must be positive, got {target}")));
    }
    let mut current = *spec;
    let mut profile = evaluate_profile(grid, &current)?;
    for round in 0..MAX_REFINEMENTS {
        if profile.convergence_estimate < target {
            return Ok(profile);
        }
        current = current.with_quad(current.quad.doubled_one(round));
        profile = evaluate_profile(grid, &current)?;
    }
    profile.unconverged = profile.convergence_estimate >= target;
    Ok(profile)
}

/// Profile restricted to a window together with its equation residual,
/// both computed on a wider and denser verification grid.
#[derive(Debug, Clone)]
pub struct VerifiedProfile {
    pub profile: Profile,
    pub residual: ResidualReport,
}

/// Shape of the verification grid around a window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verification {
    /// Width of the verification grid in window widths.
    pub support_factor: usize,
    /// Verification nodes per window cell.
    pub density: usize,
}

impl Default for Verification {
    fn default() -> Self {
        Self { support_factor: 4, density: 2 }
    }
}

/// Verification grid around `window` and the index of the window's first
/// node in it; window node `i` is verification node `offset + i * density`.
pub fn support_grid(window: &Grid1D, shape: &Verification) -> Result<(Grid1D, usize)> {
    if shape.support_factor < 1 || shape.density < 1 {
        return Err(Error::Input("support factor and density must be at least 1".into()));
    }
    let cells = (window.count() - 1) * shape.density;
    let extra = (shape.support_factor - 1) * cells / 2;
    let step = window.step() / shape.density as f64;
    let grid = Grid1D::new(window.start() - extra as f64 * step, step, cells + 1 + 2 * extra)?;
    Ok((grid, extra))
}

/// Profile on `window` and its residual over `window`, evaluated on the
/// verification grid so that the residual sees neither the truncation of the
/// profile nor the coarseness of the window. `tol` switches from a single
/// evaluation to [`refine_profile`].
pub fn verify_profile(
    window: &Grid1D,
    spec: &ProfileSpec,
    shape: &Verification,
    tol: Option<f64>,
) -> Result<VerifiedProfile> {
    let (support, offset) = support_grid(window, shape)?;
    let full = match tol {
        Some(t) => refine_profile(&support, spec, t)?,
        None => evaluate_profile(&support, spec)?,
    };
    let opts = ResidualOptions { window: Some((window.start(), window.end())), ..Default::default() };
    let residual = reduced_ode_residual_with(&full.field, &full.spec.params()?, &opts)?;
    let values = (0..window.count()).map(|i| full.values()[offset + i * shape.density]).collect();
    let field = ComplexField::new(*window, values)?;
    Ok(VerifiedProfile { profile: Profile { field, ..full }, residual })
}
