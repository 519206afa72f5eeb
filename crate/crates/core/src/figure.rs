//! Data behind the four profile figures: three curves `alpha = 1.7, 1.9, 2`
//! at one `epsilon` per figure.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::io::{write_field_file, write_json};
use crate::profile::{verify_profile, ProfileSpec, Verification, VerifiedProfile};

pub const FIGURE_ALPHAS: [f64; 3] = [1.7, 1.9, 2.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FigureId(u8);

impl FigureId {
    pub fn new(id: i64) -> Result<Self> {
        match id {
            1..=4 => Ok(Self(id as u8)),
            _ => Err(Error::Domain(format!("figure id must be 1, 2, 3 or 4, got {id}"))),
        }
    }

    pub fn id(&self) -> u8 {
        self.0
    }

    pub fn epsilon(&self) -> f64 {
        match self.0 {
            1 => 1.2,
            2 => 2.0,
            3 => 3.0,
            _ => 10.0,
        }
    }
}

/// Sampling window of the curves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureWindow {
    pub v_min: f64,
    pub v_max: f64,
    pub points: usize,
}

impl Default for FigureWindow {
    fn default() -> Self {
        Self { v_min: -5.0, v_max: 5.0, points: 201 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureCurve {
    pub alpha: f64,
    pub file: String,
    pub convergence_estimate: f64,
    pub residual_relative_linf: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureManifest {
    pub figure_id: u8,
    pub epsilon: f64,
    pub alphas: Vec<f64>,
    pub v_min: f64,
    pub v_max: f64,
    pub points: usize,
    pub curves: Vec<FigureCurve>,
}

pub fn curve_file_name(id: FigureId, alpha: f64) -> String {
    format!("figure{}_alpha{alpha:.1}.csv", id.id())
}

pub fn manifest_file_name(id: FigureId) -> String {
    format!("figure{}_manifest.json", id.id())
}

/// Computes the three curves of figure `id` with their residual checks.
pub fn compute_figure(id: FigureId, window: &FigureWindow) -> Result<Vec<VerifiedProfile>> {
    let grid = Grid1D::closed(window.v_min, window.v_max, window.points)?;
    let shape = Verification::default();
    FIGURE_ALPHAS
        .par_iter()
        .map(|&alpha| verify_profile(&grid, &ProfileSpec::new(alpha, id.epsilon())?, &shape, None))
        .collect()
}

/// Writes one CSV per curve and the manifest into `dir`; returns the
/// manifest path.
pub fn run_figure(id: FigureId, window: &FigureWindow, dir: &Path) -> Result<PathBuf> {
    let curves = compute_figure(id, window)?;
    std::fs::create_dir_all(dir)?;
    let mut entries = Vec::with_capacity(curves.len());
    for (alpha, curve) in FIGURE_ALPHAS.iter().zip(&curves) {
        let file = curve_file_name(id, *alpha);
        write_field_file(&dir.join(&file), &curve.profile.field, "v", true)?;
        entries.push(FigureCurve {
            alpha: *alpha,
            file,
            convergence_estimate: curve.profile.convergence_estimate,
            residual_relative_linf: curve.residual.relative_linf,
        });
    }
    let manifest = FigureManifest {
        figure_id: id.id(),
        epsilon: id.epsilon(),
        alphas: FIGURE_ALPHAS.to_vec(),
        v_min: window.v_min,
        v_max: window.v_max,
        points: window.points,
        curves: entries,
    };
    let path = dir.join(manifest_file_name(id));
    write_json(&path, &manifest)?;
    Ok(path)
}
