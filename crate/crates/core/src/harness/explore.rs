use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{BatteryDomain, Check, PolygonSolver, ScanConfig, Tag, VerificationReport};
use crate::conformal::{map_perimeter, FemPlan};
use crate::disk::disk_spectrum;
use crate::error::Result;
use crate::fem::Extrapolated;
use crate::geometry::{polygonize, Domain};
use crate::rectangle::rectangle_spectrum;
use crate::specfun::{bessel_zero, BesselZero};

/// `2/(1/a + 1/b)` with an error propagated from both inputs.
fn harmonic(a: Extrapolated, b: Extrapolated) -> (f64, f64) {
    let h = 2.0 / (1.0 / a.value + 1.0 / b.value);
    (h, h * (a.error / a.value.abs() + b.error / b.value.abs()))
}

/// Normalized harmonic means of `σ₁, σ₂` (times `L`) and `μ₁, μ₂` (times
/// `A`), and of the Robin pair `λ₂, λ₃` at `α ∈ {1, π}`, against the disk.
pub fn explore_harmonic(cfg: &ScanConfig) -> Result<Vec<VerificationReport>> {
    let jp = bessel_zero(BesselZero::J11Prime);
    let mut rows = Vec::new();
    for entry in cfg.battery() {
        let solver = PolygonSolver::for_entry(&entry)?;
        let (area, l) = (solver.polygon.area(), solver.polygon.perimeter());
        let s = solver.steklov(3)?;
        let (h, e) = harmonic(s[1], s[2]);
        rows.push(row(&entry, "steklov", 0.0, h * l, 2.0 * PI, e * l, &solver));
        let m = solver.robin(0.0, 3)?;
        let (h, e) = harmonic(m[1], m[2]);
        rows.push(row(&entry, "neumann", 0.0, h * area, PI * jp * jp, e * area, &solver));
        for alpha in cfg.alphas_or(&[1.0, PI]) {
            let r = solver.robin(alpha / l, 3)?;
            if r[1].value <= 0.0 {
                continue;
            }
            let disk = disk_spectrum(alpha / (2.0 * PI), 3)?.values();
            let (h, e) = harmonic(r[1], r[2]);
            let dh = 2.0 / (1.0 / disk[1] + 1.0 / disk[2]);
            rows.push(row(&entry, "robin", alpha, h * area, PI * dh, e * area, &solver));
        }
    }
    Ok(rows)
}

fn row(
    entry: &BatteryDomain,
    kind: &str,
    alpha: f64,
    lhs: f64,
    rhs: f64,
    error: f64,
    solver: &PolygonSolver,
) -> VerificationReport {
    VerificationReport::new(
        Tag::HarmonicMean,
        format!("{}:{kind}", entry.name),
        alpha,
        lhs,
        rhs,
        error,
        solver.provenance(),
        Check::ReportOnly,
    )
}

/// `π λ₁(𝔻; α/2π)` against `λ₁(Ω; α/L)·A` over the convex battery; the
/// conjectured direction is a nonnegative margin.
pub fn explore_conj1(cfg: &ScanConfig) -> Result<Vec<VerificationReport>> {
    let alphas = cfg.alphas_or(&[-4.0, -1.0, 1.0, 4.0, 16.0]);
    let mut rows = Vec::new();
    for entry in cfg.battery() {
        let solver = if entry.is_rectangle().is_some() {
            None
        } else {
            Some(PolygonSolver::for_entry(&entry)?)
        };
        for &alpha in &alphas {
            let disk = PI * disk_spectrum(alpha / (2.0 * PI), 1)?.values()[0];
            let (value, error, provenance) = match (&solver, entry.is_rectangle()) {
                (None, Some((a, b))) => {
                    let v = rectangle_spectrum(a, b, alpha / (2.0 * (a + b)), 1)?.values()[0] * a * b;
                    (v, 0.0, alloc::string::String::from("analytic rectangle tensor product"))
                }
                (Some(s), _) => {
                    let e = s.robin(alpha / s.polygon.perimeter(), 1)?[0];
                    let area = s.polygon.area();
                    (e.value * area, e.error * area, s.provenance())
                }
                _ => unreachable!(),
            };
            rows.push(VerificationReport::new(
                Tag::Conj1,
                entry.name.as_str(),
                alpha,
                disk,
                value,
                error,
                provenance,
                Check::ReportOnly,
            ));
        }
    }
    Ok(rows)
}

/// `λ₂(Ω; α/L)|F′(0)|²` for the configured maps against `λ₂(𝔻; α/2π)`.
pub fn explore_conj4(cfg: &ScanConfig) -> Result<Vec<VerificationReport>> {
    let alphas = cfg.alphas_or(&[0.5, 1.0, 4.0, 16.0]);
    let plan = FemPlan::default();
    let mut rows = Vec::new();
    for (name, f) in cfg.maps() {
        let domain = Domain::conformal(f.clone());
        let solver = PolygonSolver::new(polygonize(&domain, plan.vertices)?, &plan.levels)?;
        let l = map_perimeter(&f);
        let scale = f.conformal_radius_sq();
        for &alpha in &alphas {
            let e = solver.robin(alpha / l, 2)?[1];
            let disk = disk_spectrum(alpha / (2.0 * PI), 2)?.values()[1];
            rows.push(VerificationReport::new(
                Tag::Conj4,
                name.as_str(),
                alpha,
                e.value * scale,
                disk,
                e.error * scale,
                solver.provenance(),
                Check::ReportOnly,
            ));
        }
    }
    Ok(rows)
}
