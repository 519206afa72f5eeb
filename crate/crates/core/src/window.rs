//! Riesz derivative of a sample window cut out of a field that continues
//! beyond it.
//!
//! Similarity profiles do not decay: far from the origin they approach
//! `B |x|^(i beta)`. Zero padding such a window puts jumps at its edges and
//! the spectral derivative rings across the whole window. Instead the window
//! is continued on both sides by
//!
//! 1. a cubic least-squares extrapolant of the last few samples, blended
//!    with a C-infinity step into
//! 2. the far-field form `B |x|^(i beta)`, with `B` fitted to the edge
//!    samples,
//!
//! and the continuation is tapered smoothly to zero over the outer half of
//! the padding so the padded array is periodic. The periodic spectral
//! operator is then applied and the window restored. Every length is counted
//! in grid points, so the construction commutes with a rescaling of the
//! coordinate.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fracops::riesz_spectral;
use crate::grid::{ComplexField, Grid1D};

/// Samples used to fit the far-field amplitude.
const FAR_FIT_POINTS: usize = 10;
/// Samples used for the local cubic extrapolant.
const POLY_FIT_POINTS: usize = 8;
/// Points over which the extrapolant hands over to the far-field form.
const BLEND_POINTS: f64 = 16.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowExtension {
    /// Total padded length as a multiple of the window length (at least 2).
    pub pad_factor: usize,
    /// `beta` in the far-field form `B |x|^(i beta)`; zero holds the edge
    /// level constant.
    pub far_exponent: f64,
}

/// C-infinity transition from 0 (at `x <= 0`) to 1 (at `x >= 1`).
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / x).exp();
    let b = (-1.0 / (1.0 - x)).exp();
    a / (a + b)
}

/// Least-squares cubic through `ys` sampled at `s = -(k-1), ..., 0`,
/// returned as a closure in the same local coordinate.
fn cubic_fit(ys: &[Complex64]) -> impl Fn(f64) -> Complex64 {
    let k = ys.len();
    let scale = k as f64;
    // Normal equations in u = s / k, basis 1, u, u^2, u^3.
    let mut ata = [[0.0f64; 4]; 4];
    let mut atb = [Complex64::new(0.0, 0.0); 4];
    for (j, y) in ys.iter().enumerate() {
        let u = (j as f64 - (k - 1) as f64) / scale;
        let basis = [1.0, u, u * u, u * u * u];
        for r in 0..4 {
            for c in 0..4 {
                ata[r][c] += basis[r] * basis[c];
            }
            atb[r] += y * basis[r];
        }
    }
    let coeffs = solve4(ata, atb);
    move |s: f64| {
        let u = s / scale;
        coeffs[0] + u * (coeffs[1] + u * (coeffs[2] + u * coeffs[3]))
    }
}

/// Gaussian elimination with partial pivoting for a 4x4 real system with a
/// complex right-hand side.
#[allow(clippy::needless_range_loop)]
fn solve4(mut a: [[f64; 4]; 4], mut b: [Complex64; 4]) -> [Complex64; 4] {
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap_or(col);
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..4 {
            let factor = a[row][col] / a[col][col];
            for c in col..4 {
                a[row][c] -= factor * a[col][c];
            }
            let bc = b[col];
            b[row] -= bc * factor;
        }
    }
    let mut x = [Complex64::new(0.0, 0.0); 4];
    for row in (0..4).rev() {
        let mut acc = b[row];
        for c in row + 1..4 {
            acc -= x[c] * a[row][c];
        }
        x[row] = acc / a[row][row];
    }
    x
}

/// Continuation of one edge. `edge` lists the window samples ordered so the
/// last entry is the edge node, `coords` their coordinates, and `outward`
/// the sign of the direction away from the window.
fn continue_edge(
    edge: &[Complex64],
    coords: &[f64],
    outward: f64,
    step: f64,
    length: usize,
    far_exponent: f64,
) -> Vec<Complex64> {
    let n = edge.len();
    let x_edge = coords[n - 1];
    let far_pts = FAR_FIT_POINTS.min(n);
    // The far-field form is only meaningful if the continuation stays on one
    // side of the origin, away from it.
    let crosses_origin = x_edge * outward < far_pts as f64 * step;
    let beta = if crosses_origin { 0.0 } else { far_exponent };
    let basis = |x: f64| Complex64::from_polar(1.0, beta * x.abs().ln());
    let amplitude = if beta == 0.0 {
        edge[n - far_pts..].iter().sum::<Complex64>() / far_pts as f64
    } else {
        edge[n - far_pts..]
            .iter()
            .zip(&coords[n - far_pts..])
            .map(|(f, &x)| f * basis(x).conj())
            .sum::<Complex64>()
            / far_pts as f64
    };
    let poly = cubic_fit(&edge[n - POLY_FIT_POINTS.min(n)..]);
    let half = length as f64 / 2.0;
    (1..=length)
        .map(|j| {
            let s = j as f64;
            let x = x_edge + outward * s * step;
            let hand_over = smooth_step(s / BLEND_POINTS);
            let far = amplitude * if beta == 0.0 { Complex64::new(1.0, 0.0) } else { basis(x) };
            let value = poly(s) * (1.0 - hand_over) + far * hand_over;
            let taper = if s > half { 1.0 - smooth_step((s - half) / half) } else { 1.0 };
            value * taper
        })
        .collect()
}

/// Window `f` continued on both sides to `pad_factor` times its length, and
/// the index where the window starts inside the padded field.
pub fn extend_window(f: &ComplexField, ext: WindowExtension) -> Result<(ComplexField, usize)> {
    if ext.pad_factor < 2 {
        return Err(Error::Input("window padding factor must be at least 2".into()));
    }
    let n = f.len();
    if n < POLY_FIT_POINTS {
        return Err(Error::Input(format!("window needs at least {POLY_FIT_POINTS} points")));
    }
    let grid = f.grid();
    let step = grid.step();
    let total = n * ext.pad_factor;
    let left_len = (total - n) / 2;
    let right_len = total - n - left_len;
    let coords: Vec<f64> = grid.coordinates().collect();

    let right = continue_edge(f.values(), &coords, 1.0, step, right_len, ext.far_exponent);
    let rev_vals: Vec<Complex64> = f.values().iter().rev().copied().collect();
    let rev_coords: Vec<f64> = coords.iter().rev().copied().collect();
    let left = continue_edge(&rev_vals, &rev_coords, -1.0, step, left_len, ext.far_exponent);

    let mut padded = Vec::with_capacity(total);
    padded.extend(left.iter().rev());
    padded.extend_from_slice(f.values());
    padded.extend(right);
    let wide = Grid1D::new(grid.start() - left_len as f64 * step, step, total)?;
    Ok((ComplexField::new(wide, padded)?, left_len))
}

fn restrict(f: &ComplexField, wide: &[Complex64], offset: usize) -> Result<ComplexField> {
    ComplexField::new(*f.grid(), wide[offset..offset + f.len()].to_vec())
}

/// Riesz derivative of order `alpha` of the window `f` (see module docs).
pub fn riesz_window(f: &ComplexField, alpha: f64, ext: WindowExtension) -> Result<ComplexField> {
    let (wide, offset) = extend_window(f, ext)?;
    let out = riesz_spectral(&wide, alpha)?;
    restrict(f, out.values(), offset)
}
