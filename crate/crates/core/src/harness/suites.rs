use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use super::{
    linspace, polygonization_defect, theorem_b_alphas, BatteryDomain, Check, PolygonSolver, ScanConfig, Tag,
    VerificationReport,
};
use crate::conformal::{
    hersch_recenter, lambda1_conformal_bound, lambda2_mode, lambda2_upper_bound, map_perimeter, recentred_map,
    DiskQuadrature, FemGroundState, FemPlan, PowerSeriesMap,
};
use crate::disk::{annulus_steklov, disk_spectrum, threshold_alpha, ANNULUS_MAX, ANNULUS_MIN};
use crate::error::{bail, Result};
use crate::geometry::{polygonize, Domain};
use crate::rectangle::{loglog_slope, rectangle_spectrum, theorem_a_sweep};
use crate::specfun::{bessel_zero, BesselZero};

const ANALYTIC_RECTANGLE: &str = "analytic rectangle tensor product";
const ANALYTIC_DISK: &str = "analytic disk bessel";

/// `λ_k(𝔻; a)` from the analytic spectrum.
fn disk_lambda(a: f64, k: usize) -> Result<f64> {
    match disk_spectrum(a, k)?.nth(k) {
        Some(v) => Ok(v),
        None => bail!(NoConvergence, "disk spectrum shorter than {k}"),
    }
}

/// Error of a FEM value, widened for polygonized disks by the polygon's
/// area and perimeter defect times the size of the eigenvalue and of the
/// boundary term (`boundary_scale`, in the same units as `value`).
fn scaled_error(entry: &BatteryDomain, solver: &PolygonSolver, value: f64, boundary_scale: f64, fem_error: f64) -> f64 {
    if entry.disk_like {
        fem_error + (value.abs() + boundary_scale.abs()) * polygonization_defect(&entry.domain, &solver.polygon)
    } else {
        fem_error
    }
}

/// `λ₁(Ω; α/L)·A < α` over the battery, plus the thin-rectangle family at
/// `α = 1` and its gap slope.
pub fn verify_theorem_a(cfg: &ScanConfig) -> Result<Vec<VerificationReport>> {
    let alphas = cfg.alphas_or(&[-2.0, -1.0, 1.0, 2.0]);
    let mut rows = Vec::new();
    for entry in cfg.battery() {
        if let Some((a, b)) = entry.is_rectangle() {
            let l = 2.0 * (a + b);
            for &alpha in &alphas {
                let lhs = rectangle_spectrum(a, b, alpha / l, 1)?.nth(1).unwrap() * a * b;
                rows.push(theorem_a_row(&entry.name, alpha, lhs, 0.0, ANALYTIC_RECTANGLE));
            }
            continue;
        }
        let solver = PolygonSolver::for_entry(&entry)?;
        let (area, l) = (solver.polygon.area(), solver.polygon.perimeter());
        for &alpha in &alphas {
            let e = solver.robin(alpha / l, 1)?[0];
            rows.push(theorem_a_row(
                &entry.name,
                alpha,
                e.value * area,
                e.error * area,
                &solver.provenance(),
            ));
        }
    }
    let t_grid = [4.0, 8.0, 16.0, 32.0];
    let sweep = theorem_a_sweep(1.0, &t_grid)?;
    for r in &sweep {
        rows.push(theorem_a_row(
            &format!("rectangle-family t={}", r.t),
            1.0,
            r.scaled,
            0.0,
            ANALYTIC_RECTANGLE,
        ));
    }
    let slope = loglog_slope(&sweep.iter().map(|r| (r.t, r.gap)).collect::<Vec<_>>());
    rows.push(VerificationReport::new(
        Tag::A,
        "rectangle-family gap slope",
        1.0,
        slope,
        -2.0,
        0.3,
        "least squares on ln(gap) vs ln(t), t = 4, 8, 16, 32",
        Check::Equal,
    ));
    Ok(rows)
}

fn theorem_a_row(name: &str, alpha: f64, lhs: f64, error: f64, provenance: &str) -> VerificationReport {
    let check = if alpha == 0.0 {
        Check::ReportOnly
    } else {
        Check::Strict(1.0)
    };
    VerificationReport::new(Tag::A, name, alpha, lhs, alpha, error, provenance, check)
}

/// `λ₂(Ω; α/L)·A ≤ π λ₂(𝔻; α/2π)` over the battery and α grid, with
/// equality for polygonized disks and a strict margin otherwise. Values
/// `α < −2π` are reported without a verdict. Trial-function bound rows for
/// the nonlinear maps follow.
pub fn verify_theorem_b(cfg: &ScanConfig) -> Result<Vec<VerificationReport>> {
    let alphas = cfg.alphas_or(&theorem_b_alphas());
    if let Some(a) = alphas.iter().find(|&&a| a > 2.0 * PI * (1.0 + 1e-12)) {
        bail!(Domain, "α = {a} exceeds 2π");
    }
    let factor = cfg.strict_factor();
    let mut rows = Vec::new();
    for entry in cfg.battery() {
        let solver = PolygonSolver::for_entry(&entry)?;
        let (area, l) = (solver.polygon.area(), solver.polygon.perimeter());
        for &alpha in &alphas {
            let e = solver.robin(alpha / l, 2)?[1];
            let lhs = e.value * area;
            let rhs = PI * disk_lambda(alpha / (2.0 * PI), 2)?;
            let check = if alpha < -2.0 * PI * (1.0 + 1e-12) {
                Check::ReportOnly
            } else if entry.disk_like {
                Check::Equal
            } else {
                Check::Strict(factor)
            };
            rows.push(VerificationReport::new(
                Tag::B,
                entry.name.as_str(),
                alpha,
                lhs,
                rhs,
                scaled_error(&entry, &solver, lhs, alpha, e.error * area),
                solver.provenance(),
                check,
            ));
        }
    }
    for (name, f) in cfg.maps() {
        if f.is_linear() {
            continue;
        }
        for alpha in [-PI, 0.0, PI] {
            if alphas.iter().any(|&a| (a - alpha).abs() < 1e-9) {
                rows.push(trial_bound_row(&name, &f, alpha)?);
            }
        }
    }
    Ok(rows)
}

/// FEM `λ₂(Ω; α/L)` on the polygonized image against the recentred
/// trial-function bound. Asserted only when the FEM value is positive.
pub fn trial_bound_row(name: &str, f: &PowerSeriesMap, alpha: f64) -> Result<VerificationReport> {
    let plan = FemPlan::default();
    let domain = Domain::conformal(f.clone());
    let l = map_perimeter(f);
    let beta = alpha / l;
    let solver = PolygonSolver::new(polygonize(&domain, plan.vertices)?, &plan.levels)?;
    let e = solver.robin(beta, 2)?[1];
    let quad = DiskQuadrature::standard();
    let ground = FemGroundState::compute(&domain, plan.vertices, *plan.levels.last().unwrap(), beta)?;
    let weights = ground.weights(&quad, f);
    let rc = hersch_recenter(&quad, &lambda2_mode(alpha)?, &weights, 1e-10)?;
    let (g, tail) = recentred_map(f, rc.zeta)?;
    let bound = lambda2_upper_bound(&quad, &g, alpha)?;
    let check = if e.value > 0.0 {
        Check::AtMost
    } else {
        Check::ReportOnly
    };
    Ok(VerificationReport::new(
        Tag::B,
        format!("{name}:trial-bound"),
        alpha,
        e.value,
        bound,
        e.error,
        format!(
            "{}; recentred zeta=({:.6},{:.6}) residual={:.1e} tail={:.1e}; quadrature gl{}x{}",
            solver.provenance(),
            rc.zeta.zeta().re,
            rc.zeta.zeta().im,
            rc.residual,
            tail,
            quad.radii().len(),
            quad.n_theta()
        ),
        check,
    ))
}

/// Unit-area-π comparison `λ₂(Ω; α) ≤ λ₂(𝔻; α)` for `α ∈ [−1, 0]`, and the
/// chain `λ₂(Ω; α) ≤ λ₂(Ω; 2πα/L)`.
pub fn verify_corollary_c(cfg: &ScanConfig) -> Result<Vec<VerificationReport>> {
    let alphas = cfg.alphas_or(&linspace(-1.0, 0.0, 5));
    if let Some(a) = alphas.iter().find(|&&a| !(-1.0..=0.0).contains(&a)) {
        bail!(Domain, "α = {a} outside [−1, 0]");
    }
    let mut rows = Vec::new();
    for entry in cfg.battery() {
        let poly = entry.polygon()?;
        let t = (PI / poly.area()).sqrt();
        let solver = PolygonSolver::new(poly.scaled(t), &entry.levels)?;
        let entry = BatteryDomain {
            domain: entry.domain.scaled(t)?,
            ..entry
        };
        let l = solver.polygon.perimeter();
        for &alpha in &alphas {
            let e = solver.robin(alpha, 2)?[1];
            let rhs = disk_lambda(alpha, 2)?;
            let check = if entry.disk_like { Check::Equal } else { Check::AtMost };
            let err = scaled_error(&entry, &solver, e.value, alpha * l / solver.polygon.area(), e.error);
            rows.push(VerificationReport::new(
                Tag::C,
                entry.name.as_str(),
                alpha,
                e.value,
                rhs,
                err,
                solver.provenance(),
                check,
            ));
            let chain = solver.robin(2.0 * PI * alpha / l, 2)?[1];
            rows.push(VerificationReport::new(
                Tag::C,
                format!("{}:chain", entry.name),
                alpha,
                e.value,
                chain.value,
                e.error + chain.error,
                solver.provenance(),
                Check::AtMost,
            ));
        }
    }
    Ok(rows)
}

/// Szegő (`μ₁A ≤ π j′₁,₁²`) and Weinstock (`σ₁L ≤ 2π`) rows over the
/// battery, a Schur versus Robin-crossing cross-check of `σ₁`, and the
/// annulus scan.
pub fn verify_corollary_d(cfg: &ScanConfig) -> Result<Vec<VerificationReport>> {
    let factor = cfg.strict_factor();
    let jp = bessel_zero(BesselZero::J11Prime);
    let mut rows = Vec::new();
    for entry in cfg.battery() {
        let solver = PolygonSolver::for_entry(&entry)?;
        let (area, l) = (solver.polygon.area(), solver.polygon.perimeter());
        let check = if entry.disk_like {
            Check::Equal
        } else {
            Check::Strict(factor)
        };
        let mu = solver.robin(0.0, 2)?[1];
        let lhs = mu.value * area;
        rows.push(VerificationReport::new(
            Tag::DSzego,
            entry.name.as_str(),
            0.0,
            lhs,
            PI * jp * jp,
            scaled_error(&entry, &solver, lhs, 0.0, mu.error * area),
            solver.provenance(),
            check,
        ));
        let sigma = solver.steklov(2)?[1];
        let lhs = sigma.value * l;
        rows.push(VerificationReport::new(
            Tag::DWeinstock,
            entry.name.as_str(),
            0.0,
            lhs,
            2.0 * PI,
            scaled_error(&entry, &solver, lhs, 0.0, sigma.error * l),
            format!("{} schur", solver.provenance()),
            check,
        ));
        let (schur, via) = solver.steklov_cross_check()?;
        rows.push(VerificationReport::new(
            Tag::DWeinstock,
            format!("{}:schur-vs-robin", entry.name),
            0.0,
            schur * l,
            via * l,
            1e-3 * (via * l).abs(),
            format!("finest level nodes={}; robin zero crossing", solver.finest().n()),
            Check::Equal,
        ));
    }
    rows.extend(annulus_scan(cfg)?);
    Ok(rows)
}

/// `σ₁L` of annuli `ε < r < 1` against `2π` (report-only), and a witness
/// row that passes when some scanned `ε` exceeds `2π`.
pub fn annulus_scan(cfg: &ScanConfig) -> Result<Vec<VerificationReport>> {
    let eps = if cfg.annulus_eps.is_empty() {
        linspace(ANNULUS_MIN, ANNULUS_MAX, 99)
    } else {
        cfg.annulus_eps.clone()
    };
    let mut rows = Vec::new();
    let mut best = (f64::NEG_INFINITY, 0.0);
    for &e in &eps {
        let sigma = annulus_steklov(e, 1)?.nth(1).unwrap();
        let sl = sigma * 2.0 * PI * (1.0 + e);
        if sl > best.0 {
            best = (sl, e);
        }
        rows.push(VerificationReport::new(
            Tag::Annulus,
            format!("annulus eps={e:.4}"),
            0.0,
            sl,
            2.0 * PI,
            0.0,
            "analytic annulus modes",
            Check::ReportOnly,
        ));
    }
    rows.push(VerificationReport::new(
        Tag::Annulus,
        format!("annulus witness 2pi < max sigma1*L (eps={:.4})", best.1),
        0.0,
        2.0 * PI,
        best.0,
        0.0,
        "analytic annulus modes",
        Check::Strict(1.0),
    ));
    Ok(rows)
}

/// `λ₁(Ω; α/L)|F′(0)|² ≤ λ₁(𝔻; α/2π)` for the configured maps, with
/// equality for linear maps.
pub fn verify_theorem_e(cfg: &ScanConfig) -> Result<Vec<VerificationReport>> {
    let alphas = cfg.alphas_or(&[0.5, 1.0, 4.0]);
    if let Some(a) = alphas.iter().find(|&&a| !(a > 0.0)) {
        bail!(Domain, "α = {a} must be positive");
    }
    let factor = cfg.strict_factor();
    let plan = FemPlan::default();
    let mut rows = Vec::new();
    for (name, f) in cfg.maps() {
        for &alpha in &alphas {
            let b = lambda1_conformal_bound(&f, alpha, &plan)?;
            let check = if b.linear { Check::Equal } else { Check::Strict(factor) };
            rows.push(VerificationReport::new(
                Tag::E,
                name.as_str(),
                alpha,
                b.lhs,
                b.rhs,
                b.error_estimate,
                format!(
                    "fem-p1 fan vertices={} levels={:?} richardson; fem error={:.2e} geometric={:.2e}",
                    plan.vertices, plan.levels, b.fem_error, b.geometric_error
                ),
                check,
            ));
        }
    }
    Ok(rows)
}

/// The disk threshold beyond which `π λ₂(𝔻; α/2π) < α`.
pub fn reproduce_threshold() -> Result<Vec<VerificationReport>> {
    let (x, alpha_star) = threshold_alpha();
    let mut rows = alloc::vec![
        VerificationReport::new(
            Tag::Threshold,
            "root x*",
            alpha_star,
            x,
            3.2261,
            5e-4,
            ANALYTIC_DISK,
            Check::Equal,
        ),
        VerificationReport::new(
            Tag::Threshold,
            "alpha* in [32.6, 32.7]",
            alpha_star,
            alpha_star,
            32.65,
            0.05,
            ANALYTIC_DISK,
            Check::Equal,
        ),
    ];
    let alpha = 33.0;
    let disk = PI * disk_lambda(alpha / (2.0 * PI), 2)?;
    rows.push(VerificationReport::new(
        Tag::Threshold,
        "disk below thin-rectangle limit",
        alpha,
        disk,
        alpha,
        0.0,
        ANALYTIC_DISK,
        Check::Strict(1.0),
    ));
    let rect = theorem_a_sweep(alpha, &[32.0])?[0].scaled;
    rows.push(VerificationReport::new(
        Tag::Threshold,
        String::from("disk vs rectangle t=32"),
        alpha,
        disk,
        rect,
        0.0,
        ANALYTIC_RECTANGLE,
        Check::ReportOnly,
    ));
    Ok(rows)
}
