//! Acceptance criteria 1–9: one PASS/FAIL line each, exit status 1 on any
//! failure.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use planar_spectra::conformal::{
    areabound_check, hersch_recenter, lambda2_mode, map_area, map_area_quadrature, mean_value, orthogonality_residuals,
    pullback_weights, DiskQuadrature, FemGroundState, PowerSeriesMap,
};
use planar_spectra::disk::{
    disk_mode_eigenvalue, disk_neumann_spectrum, disk_spectrum, radial_profile_with_derivative, threshold_alpha,
};
use planar_spectra::fem::{assemble, robin_eigs_forms, robin_study};
use planar_spectra::geometry::{mesh_convex_polygon, ConvexPolygon, Domain, MeshLocator};
use planar_spectra::harness::{self, ScanConfig, Tag, VerificationReport};
use planar_spectra::rectangle::rectangle_spectrum;
use planar_spectra::specfun::{bessel_zero, BesselZero};

// Criterion 1
const THRESHOLD_ROOT: f64 = 3.2261;
const THRESHOLD_ROOT_TOL: f64 = 5e-4;
const THRESHOLD_ALPHA_RANGE: (f64, f64) = (32.6, 32.7);
// Criterion 2
const DISK_IDENTITY_TOL: f64 = 1e-10;
const ZERO_FIGURE_TOL: f64 = 0.005;
// Criterion 3
const SQUARE_REL_TOL: f64 = 0.005;
const POLYGON_NEUMANN_REL_TOL: f64 = 0.01;
// Criterion 4
const GAP_SLOPE_RANGE: (f64, f64) = (-2.3, -1.7);
// Criteria 5–7
const STRICT_FACTOR: f64 = 3.0;
const WEINSTOCK_DISK_REL_TOL: f64 = 0.01;
const STEKLOV_PATH_REL_TOL: f64 = 1e-3;
// Criterion 8
const ORTHOGONALITY_TOL: f64 = 1e-6;
const QUADRATURE_AREA_TOL: f64 = 1e-8;
// Criterion 9
const SCALE_TOL: f64 = 1e-10;
const ODE_RESIDUAL_TOL: f64 = 1e-9;
const M_ORTHO_TOL: f64 = 1e-8;

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn failures(rows: &[VerificationReport]) -> Vec<String> {
    rows.iter()
        .filter(|r| r.pass == Some(false))
        .map(|r| {
            format!(
                "{} {} α={:.4}: lhs={:.6} rhs={:.6} err={:.2e}",
                r.tag.as_str(),
                r.domain,
                r.alpha,
                r.lhs,
                r.rhs,
                r.error_estimate
            )
        })
        .collect()
}

fn all_rows_pass(rows: &[VerificationReport]) -> Result<(), String> {
    let f = failures(rows);
    ensure(f.is_empty(), || f.join("; "))
}

fn criterion_1() -> Outcome {
    let (x, alpha) = threshold_alpha();
    ensure((x - THRESHOLD_ROOT).abs() <= THRESHOLD_ROOT_TOL, || format!("x* = {x}"))?;
    ensure(
        (THRESHOLD_ALPHA_RANGE.0..=THRESHOLD_ALPHA_RANGE.1).contains(&alpha),
        || format!("α* = {alpha}"),
    )?;
    all_rows_pass(&harness::reproduce_threshold().map_err(|e| e.to_string())?)?;
    Ok(format!("x* = {x:.7}, α* = {alpha:.4}"))
}

fn criterion_2() -> Outcome {
    let e = |r: planar_spectra::Result<planar_spectra::spectrum::Spectrum>| r.map_err(|e| e.to_string());
    let l_minus = e(disk_spectrum(-1.0, 2))?.nth(2).unwrap();
    ensure(l_minus.abs() <= DISK_IDENTITY_TOL, || format!("λ₂(𝔻;−1) = {l_minus}"))?;
    let j01 = bessel_zero(BesselZero::J01);
    let l_plus = e(disk_spectrum(1.0, 2))?.nth(2).unwrap();
    ensure((l_plus - j01 * j01).abs() <= DISK_IDENTITY_TOL, || {
        format!("λ₂(𝔻;1) = {l_plus}")
    })?;
    let jp = bessel_zero(BesselZero::J11Prime);
    let n = e(disk_neumann_spectrum(3))?.values();
    ensure(
        n[0].abs() <= DISK_IDENTITY_TOL
            && (n[1] - jp * jp).abs() <= DISK_IDENTITY_TOL
            && (n[2] - jp * jp).abs() <= DISK_IDENTITY_TOL,
        || format!("Neumann spectrum {n:?}"),
    )?;
    let j11 = bessel_zero(BesselZero::J11);
    ensure(
        (jp - 1.84).abs() <= ZERO_FIGURE_TOL && (j11 - 3.83).abs() <= ZERO_FIGURE_TOL,
        || format!("j′₁,₁ = {jp}, j₁,₁ = {j11}"),
    )?;
    Ok(format!(
        "λ₂(𝔻;−1) = {l_minus:.1e}, λ₂(𝔻;1) − j₀,₁² = {:.1e}",
        l_plus - j01 * j01
    ))
}

fn criterion_3() -> Outcome {
    let square = ConvexPolygon::rectangle(1.0, 1.0).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for beta in [-1.0, 0.0, 1.0] {
        let r = robin_study(&square, beta, 4, &[3, 4]).map_err(|e| e.to_string())?;
        let exact = rectangle_spectrum(1.0, 1.0, beta, 4)
            .map_err(|e| e.to_string())?
            .values();
        for (e, x) in r.extrapolated.as_ref().unwrap().iter().zip(&exact) {
            let dev = if x.abs() < 1e-12 {
                e.value.abs()
            } else {
                (e.value - x).abs() / x.abs()
            };
            worst = worst.max(dev);
            ensure(dev <= SQUARE_REL_TOL, || format!("β={beta}: {} vs {x}", e.value))?;
        }
    }
    let p = ConvexPolygon::regular(64, 1.0).unwrap();
    let r = robin_study(&p, 0.0, 2, &[2, 3]).map_err(|e| e.to_string())?;
    let jp = bessel_zero(BesselZero::J11Prime);
    let mu = r.extrapolated.unwrap()[1].value * p.area();
    let dev = (mu - PI * jp * jp).abs() / (PI * jp * jp);
    ensure(dev <= POLYGON_NEUMANN_REL_TOL, || format!("64-gon μ₁A = {mu}"))?;
    Ok(format!(
        "square worst rel dev {worst:.1e}; 64-gon μ₁A rel dev {dev:.1e}"
    ))
}

fn criterion_4() -> Outcome {
    let rows = harness::verify_theorem_a(&ScanConfig::default()).map_err(|e| e.to_string())?;
    all_rows_pass(&rows)?;
    let slope = rows.iter().find(|r| r.domain.contains("slope")).unwrap().lhs;
    ensure((GAP_SLOPE_RANGE.0..=GAP_SLOPE_RANGE.1).contains(&slope), || {
        format!("slope {slope}")
    })?;
    let checked = rows.iter().filter(|r| r.pass.is_some()).count();
    Ok(format!("{checked} checked rows, gap slope {slope:.3}"))
}

fn cfg() -> ScanConfig {
    ScanConfig {
        strict_factor: Some(STRICT_FACTOR),
        ..ScanConfig::default()
    }
}

fn criterion_5() -> Outcome {
    let rows = harness::verify_theorem_b(&cfg()).map_err(|e| e.to_string())?;
    all_rows_pass(&rows)?;
    let battery: Vec<_> = rows.iter().filter(|r| !r.domain.contains("trial-bound")).collect();
    ensure(battery.len() == 9 * 21, || format!("{} battery rows", battery.len()))?;
    let mut min_ratio = f64::INFINITY;
    for r in &battery {
        if r.domain.starts_with("disk") {
            ensure(r.margin.abs() <= r.error_estimate, || {
                format!("disk row α={}: {r:?}", r.alpha)
            })?;
        } else {
            ensure(r.margin > STRICT_FACTOR * r.error_estimate, || {
                format!("{} α={}", r.domain, r.alpha)
            })?;
            min_ratio = min_ratio.min(r.margin / r.error_estimate);
        }
    }
    Ok(format!(
        "{} rows, smallest non-disk margin/error {min_ratio:.1}",
        rows.len()
    ))
}

fn criterion_6() -> Outcome {
    let rows = harness::verify_corollary_d(&cfg()).map_err(|e| e.to_string())?;
    all_rows_pass(&rows)?;
    let find = |tag: Tag, d: &str| rows.iter().find(|r| r.tag == tag && r.domain == d).unwrap();
    let disk = find(Tag::DWeinstock, "disk-256gon");
    let dev = (disk.lhs - 2.0 * PI).abs() / (2.0 * PI);
    ensure(dev <= WEINSTOCK_DISK_REL_TOL, || format!("256-gon σ₁L = {}", disk.lhs))?;
    for d in ["square", "pentagon"] {
        let r = find(Tag::DWeinstock, d);
        ensure(r.lhs < 2.0 * PI && r.margin > STRICT_FACTOR * r.error_estimate, || {
            format!("{d}: {r:?}")
        })?;
    }
    let mut worst: f64 = 0.0;
    for r in rows.iter().filter(|r| r.domain.ends_with(":schur-vs-robin")) {
        let rel = (r.lhs - r.rhs).abs() / r.rhs.abs();
        worst = worst.max(rel);
        ensure(rel <= STEKLOV_PATH_REL_TOL, || format!("{}: {rel}", r.domain))?;
    }
    let witness = rows
        .iter()
        .filter(|r| r.tag == Tag::Annulus && r.lhs > 2.0 * PI)
        .count();
    ensure(witness > 0, || "no annulus with σ₁L > 2π".into())?;
    Ok(format!(
        "256-gon σ₁L rel dev {dev:.1e}; Schur/Robin worst {worst:.1e}; {witness} annulus witnesses"
    ))
}

fn criterion_7() -> Outcome {
    let rows = harness::verify_theorem_e(&cfg()).map_err(|e| e.to_string())?;
    all_rows_pass(&rows)?;
    for r in &rows {
        let linear = r.domain == "identity" || r.domain == "2z";
        if linear {
            ensure(r.margin.abs() <= r.error_estimate, || format!("{r:?}"))?;
        } else {
            ensure(r.margin > STRICT_FACTOR * r.error_estimate, || format!("{r:?}"))?;
        }
    }
    let worst = rows
        .iter()
        .filter(|r| r.domain == "z+0.2z^2")
        .map(|r| r.margin / r.error_estimate)
        .fold(f64::INFINITY, f64::min);
    Ok(format!("{} rows, z+0.2z² smallest margin/error {worst:.1}", rows.len()))
}

fn map_battery() -> Vec<PowerSeriesMap> {
    let c = Complex64::new;
    vec![
        PowerSeriesMap::from_real(&[0.0, 1.0, 0.2]).unwrap(),
        PowerSeriesMap::from_real(&[0.0, 1.0, 0.1, 0.05]).unwrap(),
        PowerSeriesMap::from_real(&[0.0, 1.0, 0.0, 0.08]).unwrap(),
        PowerSeriesMap::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.075, 0.13)]).unwrap(),
    ]
}

fn criterion_8() -> Outcome {
    let quad = DiskQuadrature::standard();
    let mut worst_orth: f64 = 0.0;
    for f in map_battery() {
        let domain = Domain::conformal(f.clone());
        let l = domain.perimeter();
        for alpha in [-PI, 1.0, 2.0 * PI] {
            let gs = FemGroundState::compute(&domain, 128, 3, alpha / l).map_err(|e| e.to_string())?;
            let w = gs.weights(&quad, &f);
            let loc = MeshLocator::new(&gs.mesh);
            let w2 = pullback_weights(&quad, &f, |p| loc.interpolate_clamped(&gs.values, p).powi(2));
            let mode = lambda2_mode(alpha).map_err(|e| e.to_string())?;
            let rc = hersch_recenter(&quad, &mode, &w, 1e-10).map_err(|e| e.to_string())?;
            let res = orthogonality_residuals(&quad, &mode, &f, rc.zeta, &w, &w2);
            worst_orth = worst_orth.max(res[0]).max(res[1]);
            ensure(res[0] < ORTHOGONALITY_TOL && res[1] < ORTHOGONALITY_TOL, || {
                format!("α={alpha}: {res:?}")
            })?;
        }
        let mut prev = mean_value(&f, 0.0);
        for k in 1..=200 {
            let m = mean_value(&f, k as f64 / 200.0);
            ensure(m > prev, || format!("M(r) not increasing at r = {}", k as f64 / 200.0))?;
            prev = m;
        }
        let unit = f.unit_area_normalized();
        for alpha in [0.0, PI, 2.0 * PI] {
            let a = areabound_check(&quad, &unit, alpha).map_err(|e| e.to_string())?;
            ensure(a.lhs < a.rhs, || format!("areabound α={alpha}: {a:?}"))?;
        }
        let q = map_area_quadrature(&f, &quad);
        ensure((q - map_area(&f)).abs() <= QUADRATURE_AREA_TOL * map_area(&f), || {
            format!("area {q}")
        })?;
    }
    Ok(format!("worst orthogonality residual {worst_orth:.1e}"))
}

/// `r²g'' + rg' + (λr² − κ²)g` relative to its terms, with `g''` from a
/// fourth-order difference of the analytic `g'`.
fn ode_residual(kappa: u32, alpha: f64, m: u32, r: f64) -> f64 {
    let mode = disk_mode_eigenvalue(kappa, alpha, m).unwrap();
    let d = |h: f64| {
        (radial_profile_with_derivative(&mode, r + h).1 - radial_profile_with_derivative(&mode, r - h).1) / (2.0 * h)
    };
    let h = 1e-3;
    let g2 = (4.0 * d(h / 2.0) - d(h)) / 3.0;
    let (g, g1) = radial_profile_with_derivative(&mode, r);
    let k2 = (kappa * kappa) as f64;
    let res = r * r * g2 + r * g1 + (mode.lambda * r * r - k2) * g;
    let scale = (r * r * g2).abs() + (r * g1).abs() + (mode.lambda * r * r).abs() * g.abs() + k2 * g.abs();
    res.abs() / scale
}

fn criterion_9() -> Outcome {
    // α-monotonicity: disk, rectangle and FEM.
    let alphas: Vec<f64> = (0..=24).map(|i| -3.0 + 0.25 * i as f64).collect();
    let mut prev_disk = vec![f64::NEG_INFINITY; 6];
    let mut prev_rect = vec![f64::NEG_INFINITY; 6];
    for &a in &alphas {
        let d = disk_spectrum(a, 6).unwrap().values();
        let r = rectangle_spectrum(2.0, 1.0, a, 6).unwrap().values();
        for k in 0..6 {
            ensure(d[k] >= prev_disk[k] && r[k] >= prev_rect[k], || {
                format!("non-monotone at α={a}, k={k}")
            })?;
        }
        prev_disk = d;
        prev_rect = r;
    }
    let mesh = mesh_convex_polygon(&ConvexPolygon::regular(6, 1.0).unwrap(), 4).unwrap();
    let f = assemble(&mesh).unwrap();
    let mut prev = vec![f64::NEG_INFINITY; 4];
    let mut worst_ortho: f64 = 0.0;
    for &b in &alphas {
        let r = robin_eigs_forms(&f, b, 4).unwrap();
        for (k, (now, before)) in r.eigenvalues.iter().zip(&prev).enumerate() {
            ensure(now >= before, || format!("FEM non-monotone at β={b}, k={k}"))?;
            for j in 0..4 {
                let g = f.mass.form(&r.eigenvectors[k], &r.eigenvectors[j]);
                worst_ortho = worst_ortho.max((g - if j == k { 1.0 } else { 0.0 }).abs());
            }
        }
        prev = r.eigenvalues;
    }
    ensure(worst_ortho <= M_ORTHO_TOL, || format!("M-orthogonality {worst_ortho}"))?;
    // Scale invariance at matrix level.
    let mut worst_scale: f64 = 0.0;
    for t in [0.5, 2.0] {
        let g = assemble(&mesh.scaled(t)).unwrap();
        for beta in [-1.0, 0.5] {
            let a = robin_eigs_forms(&f, beta, 4).unwrap().eigenvalues;
            let b = robin_eigs_forms(&g, beta / t, 4).unwrap().eigenvalues;
            for (x, y) in a.iter().zip(&b) {
                let dev = (y - x / (t * t)).abs() / x.abs().max(1.0);
                worst_scale = worst_scale.max(dev);
            }
        }
    }
    ensure(worst_scale <= SCALE_TOL, || format!("scale invariance {worst_scale}"))?;
    // Bessel ODE residuals of the radial profiles.
    let mut worst_ode: f64 = 0.0;
    for kappa in [0, 1, 2, 5] {
        for alpha in [-3.0, 0.0, 1.0, 10.0] {
            for m in [1, 2] {
                for i in 1..=8 {
                    worst_ode = worst_ode.max(ode_residual(kappa, alpha, m, 0.12 * i as f64));
                }
            }
        }
    }
    ensure(worst_ode <= ODE_RESIDUAL_TOL, || format!("ODE residual {worst_ode}"))?;
    Ok(format!(
        "M-orthogonality {worst_ortho:.1e}, scale {worst_scale:.1e}, ODE residual {worst_ode:.1e}"
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "threshold reproduction", criterion_1, Duration::from_secs(1)),
        (2, "disk analytic identities", criterion_2, Duration::from_secs(1)),
        (3, "FEM vs analytic oracle", criterion_3, Duration::from_secs(60)),
        (4, "suite A (rectangle gap)", criterion_4, Duration::from_secs(30)),
        (5, "suite B sweep", criterion_5, Duration::from_secs(600)),
        (6, "suite D (Steklov)", criterion_6, Duration::from_secs(300)),
        (7, "suite E (conformal maps)", criterion_7, Duration::from_secs(180)),
        (8, "conformal machinery", criterion_8, Duration::from_secs(120)),
        (9, "property suites", criterion_9, Duration::from_secs(120)),
    ];
    let mut failed = 0;
    for (n, name, run, limit) in criteria {
        let t = Instant::now();
        let outcome = run();
        let elapsed = t.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= limit => (true, d),
            Ok(d) => (
                false,
                format!(
                    "{d}; runtime {:.1}s over {:.0}s",
                    elapsed.as_secs_f64(),
                    limit.as_secs_f64()
                ),
            ),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {n} [{}] {name}: {detail} ({:.2}s)",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
