//! Separated Robin, Neumann and Dirichlet spectra of the unit disk, the
//! radial eigenfunction profiles, and the Steklov spectrum of annuli.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{bail, Result};
use crate::roots::{bisect, newton_polish};
use crate::specfun::{bessel_zero, i_ratio, in_series, j_zeros, jn, jn_pair, BesselZero};
use crate::spectrum::{BoundaryCondition, Branch, Eigenvalue, ModeTag, Spectrum};
#[allow(unused_imports)]
use num_traits::Float;

/// Largest angular mode accepted by [`disk_mode_eigenvalue`].
pub const MAX_KAPPA: u32 = 25;
/// Largest radial index accepted by [`disk_mode_eigenvalue`].
pub const MAX_RADIAL: u32 = 10;
/// Largest spectrum length accepted by [`disk_spectrum`].
pub const MAX_SPECTRUM: usize = 40;
/// Largest `|α|` accepted by [`disk_spectrum`].
pub const MAX_ALPHA: f64 = 1e8;

/// One separated eigenvalue `λ` of the unit disk, with radial part `g` and
/// angular part `cos κθ`, `sin κθ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskMode {
    pub kappa: u32,
    /// Radial index, 1-based.
    pub m: u32,
    /// Robin parameter, `+∞` for Dirichlet.
    pub alpha: f64,
    pub lambda: f64,
    pub branch: Branch,
}

impl DiskMode {
    pub fn multiplicity(&self) -> u32 {
        if self.kappa == 0 {
            1
        } else {
            2
        }
    }

    /// Square root of `|λ|`, the radial frequency.
    pub fn frequency(&self) -> f64 {
        self.lambda.abs().sqrt()
    }
}

/// `(κ + α) J_κ(x) − x J_{κ+1}(x)`, which is `x J_κ′(x) + α J_κ(x)`.
fn robin_residual(kappa: u32, alpha: f64, x: f64) -> f64 {
    let (j, jp1) = jn_pair(kappa, x);
    (kappa as f64 + alpha) * j - x * jp1
}

fn robin_residual_deriv(kappa: u32, alpha: f64, x: f64) -> f64 {
    let k = kappa as f64;
    let (j, jp1) = jn_pair(kappa, x);
    ((k + alpha) * k / x - x) * j - alpha * jp1
}

fn check_mode(kappa: u32, m: u32) -> Result<()> {
    if kappa > MAX_KAPPA {
        bail!(Domain, "angular mode {kappa} exceeds {MAX_KAPPA}");
    }
    if m == 0 || m > MAX_RADIAL {
        bail!(Domain, "radial index {m} outside 1..={MAX_RADIAL}");
    }
    Ok(())
}

/// The `m`-th Robin eigenvalue of angular mode `κ` on the unit disk,
/// boundary condition `g′(1) + αg(1) = 0`.
pub fn disk_mode_eigenvalue(kappa: u32, alpha: f64, m: u32) -> Result<DiskMode> {
    check_mode(kappa, m)?;
    if alpha.is_nan() {
        bail!(Domain, "Robin parameter is NaN");
    }
    if alpha == f64::INFINITY {
        return dirichlet_mode(kappa, m);
    }
    mode_unchecked(kappa, alpha, m, &j_zeros(kappa, m as usize))
}

/// `zeros` holds at least the first `m` positive zeros of `J_κ`.
fn mode_unchecked(kappa: u32, alpha: f64, m: u32, zeros: &[f64]) -> Result<DiskMode> {
    let k = kappa as f64;
    let mode = |lambda, branch| DiskMode {
        kappa,
        m,
        alpha,
        lambda,
        branch,
    };
    if m == 1 && alpha == -k {
        return Ok(mode(0.0, Branch::Linear));
    }
    if m == 1 && alpha < -k {
        // y I_κ′(y) + α I_κ(y) = (κ + α) I_κ + y I_{κ+1}; the ratio term
        // increases from 0 without bound, so the root is unique.
        let g = |y: f64| k + alpha + y * i_ratio(kappa, y);
        let mut hi = 3.0 * alpha.abs();
        while g(hi) <= 0.0 {
            hi *= 2.0;
            if !hi.is_finite() {
                bail!(Bracket, "negative branch of mode {kappa} at α = {alpha}");
            }
        }
        let y = bisect(g, 0.0, hi, 1e-15)?;
        return Ok(mode(-y * y, Branch::Exponential));
    }
    let lo = if m == 1 { 0.0 } else { zeros[m as usize - 2] };
    let hi = zeros[m as usize - 1];
    let f = |x: f64| {
        if x == 0.0 {
            // limit of F(x)/x^κ has the sign of κ + α
            k + alpha
        } else {
            robin_residual(kappa, alpha, x)
        }
    };
    let x = bisect(f, lo, hi, 1e-15)?;
    let x = newton_polish(
        |x| robin_residual(kappa, alpha, x),
        |x| robin_residual_deriv(kappa, alpha, x),
        x,
        lo,
        hi,
    );
    Ok(mode(x * x, Branch::Oscillatory))
}

/// `j_{κ,m}²` as a mode with `α = +∞`.
pub fn dirichlet_mode(kappa: u32, m: u32) -> Result<DiskMode> {
    check_mode(kappa, m)?;
    let x = j_zeros(kappa, m as usize)[m as usize - 1];
    Ok(DiskMode {
        kappa,
        m,
        alpha: f64::INFINITY,
        lambda: x * x,
        branch: Branch::Oscillatory,
    })
}

/// First `k` Robin eigenvalues of the unit disk with multiplicity.
pub fn disk_spectrum(alpha: f64, k: usize) -> Result<Spectrum> {
    if !(alpha.abs() <= MAX_ALPHA) {
        bail!(Domain, "|α| = {} exceeds {MAX_ALPHA}", alpha.abs());
    }
    if k > MAX_SPECTRUM {
        bail!(Domain, "spectrum length {k} exceeds {MAX_SPECTRUM}");
    }
    collect_modes(k, |kappa, count| {
        let zeros = j_zeros(kappa, count);
        (1..=count as u32)
            .map(|m| mode_unchecked(kappa, alpha, m, &zeros).map(|d| d.lambda))
            .collect()
    })
    .map(|e| Spectrum::from_unsorted(BoundaryCondition::Robin(alpha), e, k))
}

/// First `k` Neumann eigenvalues of the unit disk.
pub fn disk_neumann_spectrum(k: usize) -> Result<Spectrum> {
    disk_spectrum(0.0, k).map(|s| Spectrum::from_unsorted(BoundaryCondition::Neumann, s.entries().to_vec(), k))
}

/// First `k` Dirichlet eigenvalues of the unit disk.
pub fn disk_dirichlet_spectrum(k: usize) -> Result<Spectrum> {
    if k > MAX_SPECTRUM {
        bail!(Domain, "spectrum length {k} exceeds {MAX_SPECTRUM}");
    }
    collect_modes(k, |kappa, count| {
        Ok(j_zeros(kappa, count).into_iter().map(|x| x * x).collect())
    })
    .map(|mut e| {
        for v in &mut e {
            if let ModeTag::Disk { branch, .. } = &mut v.mode {
                *branch = Branch::Oscillatory;
            }
        }
        Spectrum::from_unsorted(BoundaryCondition::Dirichlet, e, k)
    })
}

/// Enumerates angular modes until the lowest value of the next mode exceeds
/// the current `k`-th candidate. `mode_values(κ, n)` returns the first `n`
/// eigenvalues of mode `κ` in increasing order.
fn collect_modes<F>(k: usize, mut mode_values: F) -> Result<Vec<Eigenvalue>>
where
    F: FnMut(u32, usize) -> Result<Vec<f64>>,
{
    let mut entries: Vec<Eigenvalue> = Vec::new();
    if k == 0 {
        return Ok(entries);
    }
    for kappa in 0u32.. {
        let mult = if kappa == 0 { 1 } else { 2 };
        let count = k.div_ceil(mult as usize);
        let vals = mode_values(kappa, count)?;
        if entries.len() >= k {
            let mut sorted: Vec<f64> = entries.iter().map(|e| e.lambda).collect();
            sorted.sort_by(f64::total_cmp);
            if vals[0] > sorted[k - 1] {
                break;
            }
        }
        for (i, &lambda) in vals.iter().enumerate() {
            let branch = if lambda > 0.0 {
                Branch::Oscillatory
            } else if lambda == 0.0 {
                Branch::Linear
            } else {
                Branch::Exponential
            };
            let mode = ModeTag::Disk {
                kappa,
                m: i as u32 + 1,
                branch,
            };
            for _ in 0..mult {
                entries.push(Eigenvalue {
                    lambda,
                    multiplicity: mult,
                    mode,
                });
            }
        }
    }
    Ok(entries)
}

/// Radial profile `g` and its derivative at `r ∈ [0, 1]`, normalized so that
/// `g(r) = r^κ + O(r^{κ+2})` (so `g(0) = 1` for `κ = 0` and `g′(0) = 1` for
/// `κ = 1`).
pub fn radial_profile_with_derivative(mode: &DiskMode, r: f64) -> (f64, f64) {
    let kappa = mode.kappa;
    let k = kappa as f64;
    match mode.branch {
        Branch::Linear => {
            let g = r.powi(kappa as i32);
            let dg = if kappa == 0 { 0.0 } else { k * r.powi(kappa as i32 - 1) };
            (g, dg)
        }
        Branch::Oscillatory => {
            let x = mode.frequency();
            if x == 0.0 {
                return (1.0, 0.0);
            }
            let c = leading_scale(kappa, x);
            let z = x * r;
            let (j, jp1) = jn_pair(kappa, z);
            let jp = if kappa == 0 {
                -jp1
            } else {
                0.5 * (jn(kappa - 1, z) - jp1)
            };
            (c * j, c * x * jp)
        }
        Branch::Exponential => {
            let y = mode.frequency();
            let c = leading_scale(kappa, y);
            let z = y * r;
            let i = in_series(kappa, z);
            let ip1 = in_series(kappa + 1, z);
            let ip = if kappa == 0 {
                ip1
            } else {
                0.5 * (in_series(kappa - 1, z) + ip1)
            };
            (c * i, c * y * ip)
        }
    }
}

/// `κ! (2/x)^κ`, the factor making `J_κ(xr)` or `I_κ(xr)` start as `r^κ`.
fn leading_scale(kappa: u32, x: f64) -> f64 {
    (1..=kappa).fold(1.0, |acc, i| acc * 2.0 * i as f64 / x)
}

/// Samples of the normalized radial profile on `r_grid`.
pub fn radial_profile(mode: &DiskMode, r_grid: &[f64]) -> Result<Vec<f64>> {
    if let Some(&r) = r_grid.iter().find(|r| !(0.0..=1.0).contains(*r)) {
        bail!(Domain, "radius {r} outside [0, 1]");
    }
    Ok(r_grid
        .iter()
        .map(|&r| radial_profile_with_derivative(mode, r).0)
        .collect())
}

/// `g′(1) + α g(1)` relative to `max(|g(1)|, |g′(1)|)`.
pub fn boundary_residual(mode: &DiskMode) -> f64 {
    let (g, dg) = radial_profile_with_derivative(mode, 1.0);
    if mode.alpha.is_infinite() {
        return g.abs() / dg.abs();
    }
    (dg + mode.alpha * g).abs() / g.abs().max(dg.abs())
}

/// The perimeter-scaled parameter `α` for which `λ₂(𝔻; α/2π) = λ`, valid
/// for `λ ∈ (j′₁,₁², j₁,₁²)`.
pub fn alpha_from_lambda2(lambda: f64) -> Result<f64> {
    let lo = bessel_zero(BesselZero::J11Prime);
    let hi = bessel_zero(BesselZero::J11);
    if !(lambda > lo * lo && lambda < hi * hi) {
        bail!(Domain, "λ = {lambda} outside ({}, {})", lo * lo, hi * hi);
    }
    Ok(2.0 * PI * log_derivative_j1(lambda.sqrt()))
}

/// `−x J₁′(x) / J₁(x)`.
fn log_derivative_j1(x: f64) -> f64 {
    let (j0, j1) = jn_pair(0, x);
    -x * (j0 - j1 / x) / j1
}

/// Root `x*` of `−2J₁′(x)/(xJ₁(x)) = 1` on `(j′₁,₁, j₁,₁)` and the scaled
/// parameter `α* = πx*²` at which `π λ₂(𝔻; α/2π)` meets `α`.
pub fn threshold_alpha() -> (f64, f64) {
    let lo = bessel_zero(BesselZero::J11Prime);
    let hi = bessel_zero(BesselZero::J11);
    let f = |x: f64| 2.0 * log_derivative_j1(x) / (x * x) - 1.0;
    // f(lo) = −1 and f → +∞ at hi; shrink hi off the pole.
    let x = bisect(f, lo, hi * (1.0 - 1e-12), 1e-15).expect("sign change on (j′₁,₁, j₁,₁)");
    let alpha = 2.0 * PI * log_derivative_j1(x);
    (x, alpha)
}

/// Lower end of the annulus parameter range.
pub const ANNULUS_MIN: f64 = 0.01;
/// Upper end of the annulus parameter range.
pub const ANNULUS_MAX: f64 = 0.99;

/// Steklov eigenvalues of Fourier mode `n ≥ 1` on `ε < r < 1`, ascending.
///
/// With `u = (A rⁿ + C εⁿ r⁻ⁿ) cos nθ` the two boundary conditions read
/// `P (A, C) = σ Q (A, C)` with well-scaled 2×2 matrices.
pub fn annulus_mode_roots(epsilon: f64, n: u32) -> [f64; 2] {
    let nf = n as f64;
    let en = epsilon.powi(n as i32);
    let p = [[nf, -nf * en], [-nf * en / epsilon, nf / epsilon]];
    let q = [[1.0, en], [en, 1.0]];
    // det(P − σQ) = a σ² − b σ + c
    let a = q[0][0] * q[1][1] - q[0][1] * q[1][0];
    let b = p[0][0] * q[1][1] + p[1][1] * q[0][0] - p[0][1] * q[1][0] - p[1][0] * q[0][1];
    let c = p[0][0] * p[1][1] - p[0][1] * p[1][0];
    let disc = (b * b - 4.0 * a * c).max(0.0).sqrt();
    let big = 0.5 * (b + disc) / a;
    let small = c / (a * big);
    [small, big]
}

/// The radially symmetric Steklov eigenvalue `(1+ε)/(ε ln(1/ε))`.
pub fn annulus_radial_root(epsilon: f64) -> f64 {
    (1.0 + epsilon) / (epsilon * (1.0 / epsilon).ln())
}

/// First `k` nonzero Steklov eigenvalues of the annulus `ε < r < 1`.
pub fn annulus_steklov(epsilon: f64, k: usize) -> Result<Spectrum> {
    if !(ANNULUS_MIN..=ANNULUS_MAX).contains(&epsilon) {
        bail!(Domain, "ε = {epsilon} outside [{ANNULUS_MIN}, {ANNULUS_MAX}]");
    }
    let mut entries = alloc::vec![Eigenvalue {
        lambda: annulus_radial_root(epsilon),
        multiplicity: 1,
        mode: ModeTag::Annulus { n: 0, root: 1 },
    }];
    // Lower roots grow roughly like n, so stop once one exceeds the k-th
    // value gathered so far.
    for n in 1u32.. {
        let roots = annulus_mode_roots(epsilon, n);
        if entries.len() >= k {
            let mut v: Vec<f64> = entries.iter().map(|e| e.lambda).collect();
            v.sort_by(f64::total_cmp);
            if roots[0] > v[k - 1] {
                break;
            }
        }
        for (root, &s) in roots.iter().enumerate() {
            for _ in 0..2 {
                entries.push(Eigenvalue {
                    lambda: s,
                    multiplicity: 2,
                    mode: ModeTag::Annulus { n, root: root as u32 },
                });
            }
        }
    }
    Ok(Spectrum::from_unsorted(BoundaryCondition::Steklov, entries, k))
}
