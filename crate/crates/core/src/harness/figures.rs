use alloc::string::String;
use alloc::vec::Vec;

use super::linspace;
use crate::disk::{dirichlet_mode, disk_mode_eigenvalue, radial_profile};
use crate::error::Result;

/// Radial samples per curve.
pub const FIGURE_POINTS: usize = 201;

/// One radial profile `g(r)` of the first mode with angular index `κ`.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureCurve {
    pub figure: u32,
    pub kappa: u32,
    /// `None` for the Dirichlet limit.
    pub alpha: Option<f64>,
    pub lambda: f64,
    pub r: Vec<f64>,
    pub g: Vec<f64>,
}

impl FigureCurve {
    pub fn label(&self) -> String {
        match self.alpha {
            Some(a) => alloc::format!("fig{}_kappa{}_alpha{}", self.figure, self.kappa, a),
            None => alloc::format!("fig{}_kappa{}_dirichlet", self.figure, self.kappa),
        }
    }
}

/// Profiles with `κ = 0` at `α ∈ {0, 0.5, 1, 2, 8}` and Dirichlet, and with
/// `κ = 1` at `α ∈ {−1, −0.5, 0, 1, 4}` and Dirichlet, on the unit disk.
pub fn emit_figures() -> Result<Vec<FigureCurve>> {
    let r = linspace(0.0, 1.0, FIGURE_POINTS);
    let mut out = Vec::new();
    for (figure, kappa, alphas) in [
        (1, 0, &[0.0, 0.5, 1.0, 2.0, 8.0][..]),
        (2, 1, &[-1.0, -0.5, 0.0, 1.0, 4.0][..]),
    ] {
        let modes = alphas
            .iter()
            .map(|&a| Ok((Some(a), disk_mode_eigenvalue(kappa, a, 1)?)))
            .chain(core::iter::once(dirichlet_mode(kappa, 1).map(|m| (None, m))))
            .collect::<Result<Vec<_>>>()?;
        for (alpha, mode) in modes {
            out.push(FigureCurve {
                figure,
                kappa,
                alpha,
                lambda: mode.lambda,
                g: radial_profile(&mode, &r)?,
                r: r.clone(),
            });
        }
    }
    Ok(out)
}
