use std::f64::consts::PI;

use planar_spectra::disk::*;
use planar_spectra::specfun::{bessel_zero, BesselZero};
use planar_spectra::spectrum::Branch;

/// Bessel's integral `J_n(x) = (1/2π) ∫ cos(nτ − x sin τ) dτ`, trapezoid
/// rule over one period.
fn j_integral(n: u32, x: f64) -> f64 {
    let pts = 512;
    (0..pts)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / pts as f64;
            (n as f64 * t - x * t.sin()).cos()
        })
        .sum::<f64>()
        / pts as f64
}

/// Same representation for `I_n`: `(1/π) ∫₀^π e^{x cos τ} cos nτ dτ`.
fn i_integral(n: u32, x: f64) -> f64 {
    let pts = 512;
    (0..pts)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / pts as f64;
            (x * t.cos()).exp() * (n as f64 * t).cos()
        })
        .sum::<f64>()
        / pts as f64
}

/// Independent Robin condition `x J_κ′(x) + α J_κ(x)` with
/// `J_κ′ = (J_{κ−1} − J_{κ+1})/2`.
fn oracle_condition(kappa: u32, alpha: f64, x: f64) -> f64 {
    let jp = if kappa == 0 {
        -j_integral(1, x)
    } else {
        0.5 * (j_integral(kappa - 1, x) - j_integral(kappa + 1, x))
    };
    x * jp + alpha * j_integral(kappa, x)
}

/// Roots of the oracle condition by a dense sign scan plus bisection.
fn oracle_roots(kappa: u32, alpha: f64, xmax: f64) -> Vec<f64> {
    let n = 4000;
    let mut out = Vec::new();
    let mut a = 0.3;
    let mut fa = oracle_condition(kappa, alpha, a);
    for i in 1..=n {
        let b = xmax * i as f64 / n as f64;
        let fb = oracle_condition(kappa, alpha, b);
        if fa * fb < 0.0 {
            let (mut lo, mut hi, mut flo) = (a, b, fa);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let fm = oracle_condition(kappa, alpha, mid);
                if fm * flo <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        a = b;
        fa = fb;
    }
    out
}

#[test]
fn positive_modes_match_sign_scan_oracle() {
    for &kappa in &[0u32, 1, 2, 5] {
        for &alpha in &[-0.5, 0.0, 1.0, 7.5] {
            if alpha <= -(kappa as f64) {
                continue;
            }
            let roots = oracle_roots(kappa, alpha, 20.0);
            for (i, &x) in roots.iter().take(4).enumerate() {
                let mode = disk_mode_eigenvalue(kappa, alpha, i as u32 + 1).unwrap();
                assert!(
                    (mode.lambda - x * x).abs() <= 1e-10 * x * x,
                    "κ={kappa} α={alpha} m={}: {} vs {}",
                    i + 1,
                    mode.lambda,
                    x * x
                );
            }
        }
    }
}

#[test]
fn negative_modes_match_oracle() {
    for &(kappa, alpha) in &[(0u32, -0.5), (0, -3.0), (1, -2.0), (2, -6.0), (3, -20.0)] {
        let mode = disk_mode_eigenvalue(kappa, alpha, 1).unwrap();
        assert_eq!(mode.branch, Branch::Exponential);
        let y = (-mode.lambda).sqrt();
        let ip = if kappa == 0 {
            i_integral(1, y)
        } else {
            0.5 * (i_integral(kappa - 1, y) + i_integral(kappa + 1, y))
        };
        let residual = y * ip + alpha * i_integral(kappa, y);
        assert!(
            residual.abs() <= 1e-10 * (y * ip).abs(),
            "κ={kappa} α={alpha}: {residual}"
        );
        // the next mode is back on the oscillatory branch
        let next = disk_mode_eigenvalue(kappa, alpha, 2).unwrap();
        assert!(next.lambda > 0.0);
    }
}

#[test]
fn lambda2_identities() {
    let j01 = bessel_zero(BesselZero::J01);
    let j11p = bessel_zero(BesselZero::J11Prime);
    let zero = disk_mode_eigenvalue(1, -1.0, 1).unwrap();
    assert!(zero.lambda.abs() <= 1e-10);
    assert_eq!(zero.branch, Branch::Linear);
    let one = disk_mode_eigenvalue(1, 1.0, 1).unwrap();
    assert!((one.lambda - j01 * j01).abs() <= 1e-10);

    let neumann = disk_spectrum(0.0, 3).unwrap().values();
    assert_eq!(neumann[0], 0.0);
    assert!((neumann[1] - j11p * j11p).abs() < 1e-12);
    assert_eq!(neumann[1], neumann[2]);
    assert!((neumann[1] - 3.39).abs() < 0.01);

    let robin = disk_spectrum(-1.0, 3).unwrap().values();
    assert!(robin[0] < 0.0);
    assert!(robin[1].abs() <= 1e-12 && robin[2].abs() <= 1e-12);
}

#[test]
fn dirichlet_limit() {
    let j01 = bessel_zero(BesselZero::J01);
    let m = disk_mode_eigenvalue(0, 1e8, 1).unwrap();
    assert!((m.lambda / (j01 * j01) - 1.0).abs() <= 1e-6);
    let big = disk_spectrum(1e8, 10).unwrap().values();
    let dir = disk_dirichlet_spectrum(10).unwrap().values();
    for (a, b) in big.iter().zip(&dir) {
        assert!((a / b - 1.0).abs() <= 1e-6, "{a} vs {b}");
    }
    let j11 = bessel_zero(BesselZero::J11);
    assert!((dir[1] - j11 * j11).abs() < 1e-10);
}

#[test]
fn sign_laws_and_monotonicity() {
    for &a in &[-2.0, -0.5, 0.5, 2.0] {
        let s = disk_spectrum(a, 3).unwrap().values();
        assert_eq!(s[0] > 0.0, a > 0.0);
        assert_eq!(s[1] > 0.0, a > -1.0);
        assert_eq!(s[1], s[2], "λ₂ is double");
    }
    for kappa in 0..4u32 {
        for m in 1..4u32 {
            let mut prev = f64::NEG_INFINITY;
            for i in 0..=80 {
                let a = -10.0 + 0.25 * i as f64;
                let l = disk_mode_eigenvalue(kappa, a, m).unwrap().lambda;
                assert!(l > prev, "κ={kappa} m={m} α={a}");
                prev = l;
            }
        }
    }
}

#[test]
fn spectra_are_sorted_with_simple_ground_state() {
    for &a in &[-40.0, -3.0, -1.0, 0.0, 0.3, 5.0, 1e4] {
        let s = disk_spectrum(a, 40).unwrap();
        let v = s.values();
        assert_eq!(v.len(), 40);
        assert!(v.windows(2).all(|w| w[0] <= w[1]));
        assert!(v[0] < v[1], "λ₁ simple at α={a}");
        // brute force over a generous rectangle of modes
        let mut all = Vec::new();
        for kappa in 0..=25u32 {
            for m in 1..=10u32 {
                let l = disk_mode_eigenvalue(kappa, a, m).unwrap().lambda;
                all.push(l);
                if kappa > 0 {
                    all.push(l);
                }
            }
        }
        all.sort_by(f64::total_cmp);
        for (x, y) in v.iter().zip(&all) {
            assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0), "α={a}: {x} vs {y}");
        }
    }
}

#[test]
fn boundary_residuals() {
    for kappa in 0..6u32 {
        for &a in &[-8.0, -2.0, -1.0, -0.3, 0.0, 0.7, 3.0, 50.0] {
            for m in 1..4u32 {
                let mode = disk_mode_eigenvalue(kappa, a, m).unwrap();
                assert!(boundary_residual(&mode) <= 1e-10, "κ={kappa} α={a} m={m}");
            }
        }
    }
}

#[test]
fn radial_profiles() {
    let grid: Vec<f64> = (0..=200).map(|i| i as f64 / 200.0).collect();
    let lin = disk_mode_eigenvalue(1, -1.0, 1).unwrap();
    assert_eq!(radial_profile(&lin, &grid).unwrap(), grid);
    let neu = disk_mode_eigenvalue(0, 0.0, 1).unwrap();
    assert!(radial_profile(&neu, &grid).unwrap().iter().all(|&g| g == 1.0));

    let mode = disk_mode_eigenvalue(1, 1.0, 1).unwrap();
    let g = radial_profile(&mode, &grid).unwrap();
    let turns: Vec<usize> = (1..g.len() - 1)
        .filter(|&i| (g[i] - g[i - 1]) * (g[i + 1] - g[i]) < 0.0)
        .collect();
    assert_eq!(turns.len(), 1);
    let r_alpha = bessel_zero(BesselZero::J11Prime) / bessel_zero(BesselZero::J01);
    assert!((grid[turns[0]] - r_alpha).abs() <= 1.0 / 200.0);

    // normalization at the origin
    let (g0, dg0) = radial_profile_with_derivative(&mode, 0.0);
    assert_eq!(g0, 0.0);
    assert!((dg0 - 1.0).abs() < 1e-14);
    let neg = disk_mode_eigenvalue(0, -2.0, 1).unwrap();
    assert!((radial_profile_with_derivative(&neg, 0.0).0 - 1.0).abs() < 1e-14);

    // derivative against central differences
    for &(kappa, a) in &[(0u32, 2.0), (1, 0.5), (1, -3.0), (2, 1.0)] {
        let mode = disk_mode_eigenvalue(kappa, a, 1).unwrap();
        for &r in &[0.2, 0.5, 0.9] {
            let h = 1e-5;
            let fd = (radial_profile_with_derivative(&mode, r + h).0 - radial_profile_with_derivative(&mode, r - h).0)
                / (2.0 * h);
            assert!((fd - radial_profile_with_derivative(&mode, r).1).abs() < 1e-8);
        }
    }
    assert!(radial_profile(&mode, &[1.5]).is_err());
}

/// Composite Simpson rule on `[a, b]` with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

#[test]
fn g_at_one_antiderivative() {
    for &a in &[1.0, PI, 2.0 * PI] {
        let mode = disk_mode_eigenvalue(1, a / (2.0 * PI), 1).unwrap();
        let x = mode.frequency();
        let integral = simpson(
            |r| {
                let g = j_integral(1, x * r);
                let dg = 0.5 * x * (j_integral(0, x * r) - j_integral(2, x * r));
                2.0 * g * dg * PI * r * r
            },
            0.0,
            1.0,
            2000,
        );
        let closed = PI * j_integral(0, x) * j_integral(2, x);
        assert!((integral - closed).abs() <= 1e-9, "α={a}: {integral} vs {closed}");
        // in the unscaled variable s = x r the same integral is J₀J₂λ₂
        let unscaled = simpson(
            |s| 2.0 * j_integral(1, s) * 0.5 * (j_integral(0, s) - j_integral(2, s)) * s * s,
            0.0,
            x,
            2000,
        );
        let target = j_integral(0, x) * j_integral(2, x) * mode.lambda;
        assert!((unscaled - target).abs() <= 1e-9);
    }
}

#[test]
fn alpha_from_lambda2_examples() {
    let j11p = bessel_zero(BesselZero::J11Prime);
    let j01 = bessel_zero(BesselZero::J01);
    let at_j11p = alpha_from_lambda2(j11p * j11p * (1.0 + 1e-14)).unwrap();
    assert!(at_j11p.abs() < 1e-10);
    assert!((alpha_from_lambda2(j01 * j01).unwrap() - 2.0 * PI).abs() < 1e-10);
    assert!((alpha_from_lambda2(3.2261f64.powi(2)).unwrap() - 32.7).abs() < 0.01);
    // inverse of the disk solver and increasing
    let mut prev = f64::NEG_INFINITY;
    for i in 1..40 {
        let a = i as f64 * 2.0;
        let lambda = disk_mode_eigenvalue(1, a / (2.0 * PI), 1).unwrap().lambda;
        let back = alpha_from_lambda2(lambda).unwrap();
        assert!((back - a).abs() <= 1e-8 * a);
        assert!(back > prev);
        prev = back;
    }
    let j11 = bessel_zero(BesselZero::J11);
    assert!(alpha_from_lambda2(j11 * j11).is_err());
}

#[test]
fn threshold_values() {
    let (x, a) = threshold_alpha();
    assert!((x - 3.2261).abs() <= 5e-4);
    assert!((32.6..=32.7).contains(&a));
    let j0 = j_integral(0, x);
    let j1 = j_integral(1, x);
    let lhs = -2.0 * (j0 - j1 / x) / (x * j1);
    assert!((lhs - 1.0).abs() < 1e-10);
    // at α* the scaled disk value crosses the diagonal
    let l = disk_mode_eigenvalue(1, a / (2.0 * PI), 1).unwrap().lambda;
    assert!((PI * l - a).abs() < 1e-8);
    let l33 = disk_mode_eigenvalue(1, 33.0 / (2.0 * PI), 1).unwrap().lambda;
    assert!(PI * l33 < 33.0);
}

#[test]
fn annulus_quadratic_oracle() {
    for &eps in &[0.5f64, 0.1, 0.9] {
        for n in 1..4u32 {
            let nf = n as f64;
            let e2n = eps.powi(2 * n as i32);
            let a = eps * (1.0 - e2n);
            let b = -nf * (1.0 + eps) * (1.0 + e2n);
            let c = nf * nf * (1.0 - e2n);
            let d = (b * b - 4.0 * a * c).sqrt();
            let lo = (-b - d) / (2.0 * a);
            let hi = (-b + d) / (2.0 * a);
            let r = annulus_mode_roots(eps, n);
            assert!((r[0] - lo).abs() <= 1e-10 * lo && (r[1] - hi).abs() <= 1e-10 * hi);
        }
    }
    let r0 = annulus_radial_root(0.5);
    assert!((r0 - 1.5 / (0.5 * 2f64.ln())).abs() < 1e-14);
}

#[test]
fn annulus_scan() {
    let mut prev: Option<f64> = None;
    let mut witness = None;
    for i in 0..=98 {
        let eps = 0.01 + 0.01 * i as f64;
        let eps = eps.min(0.99);
        let s = annulus_steklov(eps, 6).unwrap();
        let v = s.values();
        assert!(v.iter().all(|&x| x > 0.0));
        assert!(v.windows(2).all(|w| w[0] <= w[1]));
        let scaled = v[0] * 2.0 * PI * (1.0 + eps);
        if let Some(p) = prev {
            assert!((scaled - p).abs() < 0.25, "jump at ε={eps}");
        }
        prev = Some(scaled);
        if scaled > 2.0 * PI && witness.is_none() {
            witness = Some(eps);
        }
    }
    assert!(witness.is_some());
}
