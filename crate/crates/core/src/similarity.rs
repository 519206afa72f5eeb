//! Scaling-group reduction of
//!
//! ```text
//! eps t u_t - i (eps^2 / 2) t^(alpha/2) R_x^alpha u = -i u
//! ```
//!
//! (unit potential) to the profile equation
//!
//! ```text
//! -(eps/2) v phi'(v) - i (eps^2/2) R_v^alpha phi(v) = -i phi(v),   v = x t^(-1/2)
//! ```
//!
//! together with residual evaluators for both equations. The nonlocal
//! operator is applied through [`crate::window`], with the far-field exponent
//! `2/eps` that the profile equation itself dictates for large `|v|`.

use num_complex::Complex64;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::grid::{ComplexField, Grid1D};
use crate::window::{riesz_window, WindowExtension};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Exponents of the scaling group `t = mu^n t~, x = mu^p x~, u = mu^q u~`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimilarityScaling {
    pub n_exp: f64,
    pub p_exp: f64,
    pub q_exp: f64,
    pub mu: f64,
}

impl SimilarityScaling {
    pub fn new(n_exp: f64, p_exp: f64, q_exp: f64, mu: f64) -> Result<Self> {
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::Domain(format!("scale factor mu must be positive, got {mu}")));
        }
        Ok(Self { n_exp, p_exp, q_exp, mu })
    }

    pub fn with_mu(self, mu: f64) -> Result<Self> {
        Self::new(self.n_exp, self.p_exp, self.q_exp, mu)
    }

    /// True when the group leaves the equation invariant: `p = n/2`, `q = 0`.
    pub fn is_invariant(&self) -> bool {
        let tol = 1e-12 * self.n_exp.abs().max(1.0);
        (self.p_exp - self.n_exp / 2.0).abs() <= tol && self.q_exp == 0.0
    }
}

/// Balancing the powers of `mu` in the transformed equation gives
/// `n + q - n = n alpha/2 - alpha p + q = q`, so `p = n/2` for every
/// `alpha`; the `q = 0` branch is taken.
pub fn invariance_exponents(n_exp: f64) -> Result<SimilarityScaling> {
    if n_exp == 0.0 || !n_exp.is_finite() {
        return Err(Error::DegenerateScaling(format!("time exponent n = {n_exp} has no scaling direction")));
    }
    SimilarityScaling::new(n_exp, n_exp / 2.0, 0.0, 1.0)
}

/// `v = x t^(-1/2)`.
pub fn similarity_variable(x: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("time must be positive, got {t}")));
    }
    Ok(x / t.sqrt())
}

/// Maps a physical point to scaled coordinates `(x mu^-p, t mu^-n, u mu^-q)`.
pub fn scale_point(x: f64, t: f64, u: Complex64, s: &SimilarityScaling) -> (f64, f64, Complex64) {
    (x * s.mu.powf(-s.p_exp), t * s.mu.powf(-s.n_exp), u * s.mu.powf(-s.q_exp))
}

/// Parameters of the equation; the potential is the constant 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PdeParams {
    alpha: f64,
    epsilon: f64,
}

impl PdeParams {
    pub fn new(alpha: f64, epsilon: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha <= 2.0) {
            return Err(Error::Domain(format!("alpha = {alpha} outside (1, 2]")));
        }
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::Domain(format!("epsilon must be positive, got {epsilon}")));
        }
        Ok(Self { alpha, epsilon })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn potential(&self, _x: f64) -> f64 {
        1.0
    }

    /// `beta` of the far-field behaviour `phi ~ B |v|^(i beta)`, from the
    /// balance `-(eps/2) v phi' + i phi = 0`.
    pub fn far_exponent(&self) -> f64 {
        2.0 / self.epsilon
    }
}

/// Cubic (four-point Lagrange) interpolation of `phi` at `v`.
pub fn interpolate_cubic(phi: &ComplexField, v: f64) -> Result<Complex64> {
    let g = phi.grid();
    let (lo, hi) = (g.start(), g.end());
    let slack = 1e-12 * (lo.abs().max(hi.abs()) + g.step());
    if v < lo - slack || v > hi + slack || !v.is_finite() {
        return Err(Error::Extrapolation { x: v, v, lo, hi });
    }
    let vals = phi.values();
    let n = vals.len();
    let pos = ((v - lo) / g.step()).clamp(0.0, (n - 1) as f64);
    if n < 4 {
        let j = (pos.floor() as usize).min(n - 2);
        let s = pos - j as f64;
        return Ok(vals[j] * (1.0 - s) + vals[j + 1] * s);
    }
    let j = (pos.floor() as usize).clamp(1, n - 3);
    let s = pos - j as f64;
    let w = [
        -s * (s - 1.0) * (s - 2.0) / 6.0,
        (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0,
        -(s + 1.0) * s * (s - 2.0) / 2.0,
        (s + 1.0) * s * (s - 1.0) / 6.0,
    ];
    Ok(vals[j - 1] * w[0] + vals[j] * w[1] + vals[j + 1] * w[2] + vals[j + 2] * w[3])
}

/// `u(x, t) = phi(x t^(-1/2))` sampled on `x_grid`.
pub fn lift_profile(phi: &ComplexField, x_grid: &Grid1D, t: f64) -> Result<ComplexField> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("time must be positive, got {t}")));
    }
    let scale = t.sqrt().recip();
    let values = x_grid
        .coordinates()
        .map(|x| {
            interpolate_cubic(phi, x * scale).map_err(|e| match e {
                Error::Extrapolation { v, lo, hi, .. } => Error::Extrapolation { x, v, lo, hi },
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ComplexField::new(*x_grid, values)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    V,
    X,
}

impl Axis {
    pub fn key(&self) -> &'static str {
        match self {
            Axis::V => "v",
            Axis::X => "x",
        }
    }
}

/// Residual values at one time level (`t` is `None` for the profile equation).
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualSlice {
    pub t: Option<f64>,
    pub field: ComplexField,
}

/// Pointwise residuals and their norms. `l2` is the grid-weighted discrete
/// norm `sqrt(h sum |r|^2)` summed over all slices; `relative_linf` divides
/// the maximum residual by the largest maximum of the individual equation
/// terms over the same points.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub axis: Axis,
    pub slices: Vec<ResidualSlice>,
    pub l2: f64,
    pub linf: f64,
    pub relative_linf: f64,
}

impl ResidualReport {
    fn from_slices(axis: Axis, slices: Vec<ResidualSlice>, dominant: f64) -> Self {
        let mut sq = 0.0;
        let mut linf = 0.0f64;
        for s in &slices {
            let h = s.field.grid().step();
            for z in s.field.values() {
                sq += h * z.norm_sqr();
                linf = linf.max(z.norm());
            }
        }
        let relative_linf = if dominant > 0.0 { linf / dominant } else { 0.0 };
        Self { axis, slices, l2: sq.sqrt(), linf, relative_linf }
    }

    /// The single slice of a profile-equation report.
    pub fn pointwise(&self) -> &ComplexField {
        &self.slices[0].field
    }
}

struct Point<'a> {
    axis: Axis,
    t: Option<f64>,
    coord: f64,
    value: &'a Complex64,
}

impl Serialize for Point<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        if let Some(t) = self.t {
            map.serialize_entry("t", &t)?;
        }
        map.serialize_entry(self.axis.key(), &self.coord)?;
        map.serialize_entry("re", &self.value.re)?;
        map.serialize_entry("im", &self.value.im)?;
        map.end()
    }
}

impl Serialize for ResidualReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let points: Vec<Point<'_>> = self
            .slices
            .iter()
            .flat_map(|s| {
                s.field.grid().coordinates().zip(s.field.values()).map(move |(coord, value)| Point {
                    axis: self.axis,
                    t: s.t,
                    coord,
                    value,
                })
            })
            .collect();
        let mut st = serializer.serialize_struct("ResidualReport", 4)?;
        st.serialize_field("l2", &self.l2)?;
        st.serialize_field("linf", &self.linf)?;
        st.serialize_field("relative_linf", &self.relative_linf)?;
        st.serialize_field("points", &points)?;
        st.end()
    }
}

/// Where residual norms are measured and how the window is continued for
/// the nonlocal term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualOptions {
    /// Fraction of points dropped on each side when no window is given.
    pub exclusion_fraction: f64,
    /// Measure only at coordinates inside `[lo, hi]`.
    pub window: Option<(f64, f64)>,
    pub pad_factor: usize,
}

impl Default for ResidualOptions {
    fn default() -> Self {
        Self { exclusion_fraction: 0.1, window: None, pad_factor: 4 }
    }
}

/// Minimum samples for the profile residual.
pub const MIN_RESIDUAL_POINTS: usize = 64;

/// Index range where norms are taken. Always keeps the stencil half-width
/// clear of the edges.
fn measured_range(grid: &Grid1D, opts: &ResidualOptions) -> Result<(usize, usize)> {
    let n = grid.count();
    let (lo, hi) = match opts.window {
        None => {
            let m = (opts.exclusion_fraction * n as f64).floor() as usize;
            (m, n.saturating_sub(m))
        }
        Some((a, b)) => {
            let tol = 1e-9 * grid.step();
            let first = grid.coordinates().position(|x| x >= a - tol).unwrap_or(n);
            let last = grid.coordinates().rposition(|x| x <= b + tol).map_or(0, |i| i + 1);
            (first, last)
        }
    };
    let (lo, hi) = (lo.max(STENCIL), hi.min(n.saturating_sub(STENCIL)));
    if hi <= lo {
        return Err(Error::Input("no interior points left to measure the residual".into()));
    }
    Ok((lo, hi))
}

const STENCIL: usize = 4;
const STENCIL_WEIGHTS: [f64; STENCIL] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];

/// Eighth-order central first derivative at node `i`.
fn derivative8(vals: &[Complex64], i: usize, h: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, w) in STENCIL_WEIGHTS.iter().enumerate() {
        acc += (vals[i + k + 1] - vals[i - k - 1]) * *w;
    }
    acc / h
}

/// Residual of the profile equation,
/// `R(v) = -(eps/2) v phi' - i (eps^2/2) R^alpha phi + i phi`.
pub fn reduced_ode_residual(phi: &ComplexField, params: &PdeParams) -> Result<ResidualReport> {
    reduced_ode_residual_with(phi, params, &ResidualOptions::default())
}

pub fn reduced_ode_residual_with(
    phi: &ComplexField,
    params: &PdeParams,
    opts: &ResidualOptions,
) -> Result<ResidualReport> {
    if phi.len() < MIN_RESIDUAL_POINTS {
        return Err(Error::Input(format!(
            "profile residual needs at least {MIN_RESIDUAL_POINTS} points, got {}",
            phi.len()
        )));
    }
    let grid = *phi.grid();
    let (lo, hi) = measured_range(&grid, opts)?;
    let eps = params.epsilon();
    let ext = WindowExtension { pad_factor: opts.pad_factor, far_exponent: params.far_exponent() };
    let riesz = riesz_window(phi, params.alpha(), ext)?;
    let vals = phi.values();
    let h = grid.step();

    let mut dominant = [0.0f64; 3];
    let residual: Vec<Complex64> = (lo..hi)
        .map(|i| {
            let v = grid.coordinate(i);
            let advect = -(eps / 2.0) * v * derivative8(vals, i, h);
            let nonlocal = -I * (eps * eps / 2.0) * riesz.values()[i];
            let source = I * vals[i];
            for (d, term) in dominant.iter_mut().zip([advect, nonlocal, source]) {
                *d = d.max(term.norm());
            }
            advect + nonlocal + source
        })
        .collect();
    let slice = ResidualSlice { t: None, field: ComplexField::new(grid.slice(lo, hi)?, residual)? };
    Ok(ResidualReport::from_slices(Axis::V, vec![slice], dominant.into_iter().fold(0.0, f64::max)))
}

/// Residual of the time-dependent equation at every snapshot that has a
/// neighbour on each side in time,
/// `R = eps t u_t - i (eps^2/2) t^(alpha/2) R_x^alpha u + i u`.
/// `u_t` uses the three-point (second-order) difference on the possibly
/// non-uniform snapshot times.
pub fn pde_residual(snapshots: &[(f64, ComplexField)], params: &PdeParams) -> Result<ResidualReport> {
    pde_residual_with(snapshots, params, &ResidualOptions::default())
}

pub fn pde_residual_with(
    snapshots: &[(f64, ComplexField)],
    params: &PdeParams,
    opts: &ResidualOptions,
) -> Result<ResidualReport> {
    if snapshots.len() < 3 {
        return Err(Error::Input(format!("need at least 3 snapshots, got {}", snapshots.len())));
    }
    let mut order: Vec<usize> = (0..snapshots.len()).collect();
    order.sort_by(|&a, &b| snapshots[a].0.total_cmp(&snapshots[b].0));
    for &k in &order {
        if !(snapshots[k].0 > 0.0) {
            return Err(Error::Input(format!("snapshot time {} is not positive", snapshots[k].0)));
        }
    }
    if order.windows(2).any(|w| snapshots[w[0]].0 == snapshots[w[1]].0) {
        return Err(Error::Input("snapshot times must be distinct".into()));
    }
    let grid = *snapshots[0].1.grid();
    if snapshots.iter().any(|(_, u)| *u.grid() != grid) {
        return Err(Error::Input("snapshots must share one x grid".into()));
    }
    let (lo, hi) = measured_range(&grid, opts)?;
    let eps = params.epsilon();
    let alpha = params.alpha();
    let ext = WindowExtension { pad_factor: opts.pad_factor, far_exponent: params.far_exponent() };

    let mut dominant = [0.0f64; 3];
    let mut slices = Vec::new();
    for w in order.windows(3) {
        let (t0, u0) = (&snapshots[w[0]].0, &snapshots[w[0]].1);
        let (t1, u1) = (&snapshots[w[1]].0, &snapshots[w[1]].1);
        let (t2, u2) = (&snapshots[w[2]].0, &snapshots[w[2]].1);
        let (h1, h2) = (t1 - t0, t2 - t1);
        let (c0, c1, c2) = (-h2 / (h1 * (h1 + h2)), (h2 - h1) / (h1 * h2), h1 / (h2 * (h1 + h2)));
        let riesz = riesz_window(u1, alpha, ext)?;
        let time_factor = t1.powf(alpha / 2.0);
        let residual: Vec<Complex64> = (lo..hi)
            .map(|i| {
                let ut = u0.values()[i] * c0 + u1.values()[i] * c1 + u2.values()[i] * c2;
                let evolve = eps * t1 * ut;
                let nonlocal = -I * (eps * eps / 2.0) * time_factor * riesz.values()[i];
                let source = I * params.potential(grid.coordinate(i)) * u1.values()[i];
                for (d, term) in dominant.iter_mut().zip([evolve, nonlocal, source]) {
                    *d = d.max(term.norm());
                }
                evolve + nonlocal + source
            })
            .collect();
        slices.push(ResidualSlice { t: Some(*t1), field: ComplexField::new(grid.slice(lo, hi)?, residual)? });
    }
    Ok(ResidualReport::from_slices(Axis::X, slices, dominant.into_iter().fold(0.0, f64::max)))
}

/// Applies [`scale_point`] to every sample of every snapshot.
pub fn scale_snapshots(
    snapshots: &[(f64, ComplexField)],
    s: &SimilarityScaling,
) -> Result<Vec<(f64, ComplexField)>> {
    snapshots
        .iter()
        .map(|(t, u)| {
            let g = u.grid();
            let (start, t_scaled, _) = scale_point(g.start(), *t, Complex64::new(0.0, 0.0), s);
            let step = g.step() * s.mu.powf(-s.p_exp);
            let grid = Grid1D::new(start, step, g.count())?;
            let values =
                g.coordinates().zip(u.values()).map(|(x, &z)| scale_point(x, *t, z, s).2).collect();
            Ok((t_scaled, ComplexField::new(grid, values)?))
        })
        .collect()
}

/// Residual of the original snapshots and of their image under the scaling
/// group. For an invariant group the two agree up to rounding.
pub fn invariance_check(
    snapshots: &[(f64, ComplexField)],
    s: &SimilarityScaling,
    params: &PdeParams,
) -> Result<(ResidualReport, ResidualReport)> {
    if !s.is_invariant() {
        return Err(Error::Precondition(format!(
            "scaling (n, p, q) = ({}, {}, {}) is not invariant; need p = n/2 and q = 0",
            s.n_exp, s.p_exp, s.q_exp
        )));
    }
    let original = pde_residual(snapshots, params)?;
    let scaled = pde_residual(&scale_snapshots(snapshots, s)?, params)?;
    Ok((original, scaled))
}
