//! Power-series conformal maps of the unit disk.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::disk::{disk_mode_eigenvalue, radial_profile_with_derivative, DiskMode};
use crate::error::{bail, Result};
use crate::fem::{assemble, robin_eigs_forms, study, EigResult, Extrapolated};
use crate::geometry::{mesh_convex_polygon, polygonize, Domain, MeshLocator};

/// Largest supported polynomial degree.
pub const MAX_DEGREE: usize = 64;
/// Angular points of the boundary trapezoid rule.
pub const BOUNDARY_POINTS: usize = 256;

/// `f(z) = Σ aₙ zⁿ`, a polynomial map of the closed unit disk.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeriesMap {
    coeffs: Vec<Complex64>,
}

impl PowerSeriesMap {
    /// Builds the map and screens it for univalence: `|f'| > 0` on a 512×64
    /// polar grid and a simple 512-point boundary polyline. Univalence is
    /// not certified.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        let map = Self::new_unchecked(coeffs)?;
        let m = map.min_derivative_modulus(512, 64);
        if !(m > 0.0) {
            bail!(Geometry, "f' vanishes (min |f'| = {m}) on the closed disk");
        }
        if !map.boundary_is_simple(512) {
            bail!(Geometry, "boundary curve intersects itself");
        }
        Ok(map)
    }

    pub(crate) fn new_unchecked(mut coeffs: Vec<Complex64>) -> Result<Self> {
        while coeffs.len() > 2 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            bail!(Geometry, "a map needs at least the coefficients a0 and a1");
        }
        if coeffs.len() > MAX_DEGREE + 1 {
            bail!(Geometry, "degree {} exceeds {MAX_DEGREE}", coeffs.len() - 1);
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            bail!(Geometry, "non-finite coefficient");
        }
        Ok(Self { coeffs })
    }

    pub fn identity() -> Self {
        Self {
            coeffs: alloc::vec![Complex64::zero(), Complex64::new(1.0, 0.0)],
        }
    }

    /// Map from real coefficients `a₀, a₁, …`.
    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// True when `aₙ = 0` for all `n ≥ 2`.
    pub fn is_linear(&self) -> bool {
        self.coeffs.iter().skip(2).all(|c| c.norm() == 0.0)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::zero(), |acc, &c| acc * z + c)
    }

    pub fn deriv(&self, z: Complex64) -> Complex64 {
        let n = self.coeffs.len();
        let mut acc = Complex64::zero();
        for k in (1..n).rev() {
            acc = acc * z + self.coeffs[k] * k as f64;
        }
        acc
    }

    /// `|f'(0)|²`.
    pub fn conformal_radius_sq(&self) -> f64 {
        self.coeffs[1].norm_sqr()
    }

    /// Multiplies every coefficient by `t`, scaling the image by `t`.
    pub fn scaled(&self, t: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| c * t).collect(),
        }
    }

    /// Rescales so that `Σ n|aₙ|² = 1`, i.e. the image has area π.
    pub fn unit_area_normalized(&self) -> Self {
        let s = mean_value(self, 1.0);
        self.scaled(1.0 / s.sqrt())
    }

    /// Minimum of `|f'|` over `n_theta × n_r` polar grid points with
    /// radii `j/n_r`, `j = 0..=n_r`.
    pub fn min_derivative_modulus(&self, n_theta: usize, n_r: usize) -> f64 {
        let mut m = f64::INFINITY;
        for j in 0..=n_r {
            let r = j as f64 / n_r as f64;
            for k in 0..n_theta {
                let th = 2.0 * PI * k as f64 / n_theta as f64;
                let z = Complex64::from_polar(r, th);
                m = m.min(self.deriv(z).norm());
            }
        }
        m
    }

    /// Boundary curve sampled at `n` equally spaced angles.
    pub fn boundary_points(&self, n: usize) -> Vec<[f64; 2]> {
        (0..n)
            .map(|k| {
                let w = self.eval(Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64));
                [w.re, w.im]
            })
            .collect()
    }

    /// Checks that the boundary polyline on `n` samples does not cross itself.
    pub fn boundary_is_simple(&self, n: usize) -> bool {
        let p = self.boundary_points(n);
        polyline_is_simple(&p)
    }
}

fn polyline_is_simple(p: &[[f64; 2]]) -> bool {
    let n = p.len();
    let cross = |a: [f64; 2], b: [f64; 2], c: [f64; 2]| (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    for i in 0..n {
        let (a, b) = (p[i], p[(i + 1) % n]);
        for j in i + 2..n {
            if (j + 1) % n == i {
                continue;
            }
            let (c, d) = (p[j], p[(j + 1) % n]);
            let d1 = cross(a, b, c);
            let d2 = cross(a, b, d);
            let d3 = cross(c, d, a);
            let d4 = cross(c, d, b);
            if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
                return false;
            }
        }
    }
    true
}

/// Area of the image, `π Σ n|aₙ|²`.
pub fn map_area(f: &PowerSeriesMap) -> f64 {
    PI * mean_value(f, 1.0)
}

/// Perimeter of the image by the trapezoid rule on 256 boundary points.
pub fn map_perimeter(f: &PowerSeriesMap) -> f64 {
    map_perimeter_with(f, BOUNDARY_POINTS)
}

/// Perimeter by the trapezoid rule on `n` boundary points.
pub fn map_perimeter_with(f: &PowerSeriesMap, n: usize) -> f64 {
    let h = 2.0 * PI / n as f64;
    (0..n)
        .map(|k| f.deriv(Complex64::from_polar(1.0, h * k as f64)).norm())
        .sum::<f64>()
        * h
}

/// The mean-value function `M(r) = Σ n|aₙ|² r^{2(n−1)}`.
pub fn mean_value(f: &PowerSeriesMap, r: f64) -> f64 {
    let r2 = r * r;
    let mut pow = 1.0;
    let mut sum = 0.0;
    for (n, a) in f.coeffs.iter().enumerate().skip(1) {
        sum += n as f64 * a.norm_sqr() * pow;
        pow *= r2;
    }
    sum
}

/// Point of the open unit disk parametrizing `M_ζ(z) = (z + ζ)/(1 + z ζ̄)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusParameter {
    zeta: Complex64,
}

impl MobiusParameter {
    pub fn new(zeta: Complex64) -> Result<Self> {
        if !(zeta.norm() < 1.0) {
            bail!(Domain, "|ζ| = {} must be below 1", zeta.norm());
        }
        Ok(Self { zeta })
    }

    pub fn zero() -> Self {
        Self {
            zeta: Complex64::zero(),
        }
    }

    pub fn zeta(&self) -> Complex64 {
        self.zeta
    }

    /// Parameter of the inverse map, `M_ζ⁻¹ = M_{−ζ}`.
    pub fn inverse(&self) -> Self {
        Self { zeta: -self.zeta }
    }
}

/// `M_ζ(z) = (z + ζ)/(1 + z ζ̄)`.
pub fn mobius(p: MobiusParameter, z: Complex64) -> Complex64 {
    (z + p.zeta) / (Complex64::new(1.0, 0.0) + z * p.zeta.conj())
}

/// Gauss–Legendre nodes and weights on `(0, 1)`.
pub fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = alloc::vec![0.0; n];
    let mut w = alloc::vec![0.0; n];
    for i in 0..n {
        let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // P_n(t) and P_n'(t) by the three-term recurrence
            let (mut p0, mut p1) = (1.0, t);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (t * pn - pm) / (t * t - 1.0);
            let dt = pn / dp;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        x[n - 1 - i] = 0.5 * (1.0 + t);
        w[n - 1 - i] = 1.0 / ((1.0 - t * t) * dp * dp);
    }
    (x, w)
}

/// Radial order of the standard disk rule.
pub const RADIAL_ORDER: usize = 48;
/// Angular points of the standard disk rule.
pub const ANGULAR_POINTS: usize = 256;

/// Tensor rule on the unit disk: Gauss–Legendre in `r` times the trapezoid
/// rule in `θ`, weights including the Jacobian `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskQuadrature {
    radii: Vec<f64>,
    radial_weights: Vec<f64>,
    n_theta: usize,
    points: Vec<Complex64>,
    weights: Vec<f64>,
}

impl DiskQuadrature {
    pub fn new(n_r: usize, n_theta: usize) -> Self {
        let (radii, radial_weights) = gauss_legendre_unit(n_r);
        let mut points = Vec::with_capacity(n_r * n_theta);
        let mut weights = Vec::with_capacity(n_r * n_theta);
        let dth = 2.0 * PI / n_theta as f64;
        for (&r, &wr) in radii.iter().zip(&radial_weights) {
            for k in 0..n_theta {
                points.push(Complex64::from_polar(r, dth * k as f64));
                weights.push(wr * r * dth);
            }
        }
        Self {
            radii,
            radial_weights,
            n_theta,
            points,
            weights,
        }
    }

    /// The 48 × 256 rule.
    pub fn standard() -> Self {
        Self::new(RADIAL_ORDER, ANGULAR_POINTS)
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn radial_weights(&self) -> &[f64] {
        &self.radial_weights
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn integrate<F: Fn(Complex64) -> f64>(&self, f: F) -> f64 {
        self.points.iter().zip(&self.weights).map(|(&z, &w)| w * f(z)).sum()
    }

    /// `∫₀¹ h(r) dr` with the radial Gauss–Legendre rule.
    pub fn integrate_radial<F: Fn(f64) -> f64>(&self, h: F) -> f64 {
        self.radii
            .iter()
            .zip(&self.radial_weights)
            .map(|(&r, &w)| w * h(r))
            .sum()
    }
}

/// Area of the image by quadrature of `|f'|²`.
pub fn map_area_quadrature(f: &PowerSeriesMap, quad: &DiskQuadrature) -> f64 {
    quad.integrate(|z| f.deriv(z).norm_sqr())
}

/// `H(w) = g(|w|) w/|w|`, the vector trial field built from the `κ = 1`
/// radial profile.
pub fn trial_field(mode: &DiskMode, w: Complex64) -> Complex64 {
    let r = w.norm();
    if r == 0.0 {
        return Complex64::zero();
    }
    let g = radial_profile_with_derivative(mode, r.min(1.0)).0;
    w * (g / r)
}

/// Weights `quad_weight · v₁(F(z)) · |F'(z)|²` at the quadrature points,
/// the pullback of `v₁ dx` to the disk.
pub fn pullback_weights<V: Fn([f64; 2]) -> f64>(quad: &DiskQuadrature, f: &PowerSeriesMap, v1: V) -> Vec<f64> {
    quad.points()
        .iter()
        .zip(quad.weights())
        .map(|(&z, &w)| {
            let x = f.eval(z);
            w * v1([x.re, x.im]) * f.deriv(z).norm_sqr()
        })
        .collect()
}

/// `V(ζ) = Σ_q w_q H(M_ζ(z_q))` and the scale `Σ_q |w_q| |H(M_ζ(z_q))|`.
pub fn hersch_field(
    quad: &DiskQuadrature,
    mode: &DiskMode,
    weights: &[f64],
    zeta: MobiusParameter,
) -> (Complex64, f64) {
    let mut v = Complex64::zero();
    let mut scale = 0.0;
    for (&z, &w) in quad.points().iter().zip(weights) {
        let h = trial_field(mode, mobius(zeta, z));
        v += h * w;
        scale += w.abs() * h.norm();
    }
    (v, scale)
}

/// Central-difference Jacobian `∂(Re V, Im V)/∂(Re ζ, Im ζ)` with step `h`.
pub fn hersch_jacobian(
    quad: &DiskQuadrature,
    mode: &DiskMode,
    weights: &[f64],
    zeta: MobiusParameter,
    h: f64,
) -> Result<[[f64; 2]; 2]> {
    let mut jac = [[0.0; 2]; 2];
    for (col, dir) in [Complex64::new(h, 0.0), Complex64::new(0.0, h)].into_iter().enumerate() {
        let plus = hersch_field(quad, mode, weights, MobiusParameter::new(zeta.zeta + dir)?).0;
        let minus = hersch_field(quad, mode, weights, MobiusParameter::new(zeta.zeta - dir)?).0;
        let d = (plus - minus) / (2.0 * h);
        jac[0][col] = d.re;
        jac[1][col] = d.im;
    }
    Ok(jac)
}

/// Outcome of the centre-of-mass search.
#[derive(Debug, Clone, PartialEq)]
pub struct Recentering {
    pub zeta: MobiusParameter,
    /// `|V(ζ)| / Σ|w_q||H|`.
    pub residual: f64,
    pub newton_steps: usize,
    pub used_grid: bool,
    /// `(ζ, relative |V|)` on the coarse inspection grid, filled when the
    /// grid search ran.
    pub grid: Vec<(Complex64, f64)>,
}

/// Largest `|ζ|` visited by the grid fallback.
pub const GRID_RADIUS: f64 = 0.95;

/// Finds `ζ` with `|V(ζ)| ≤ tol · Σ|w_q||H|`, so that the trial fields
/// `H ∘ M_ζ ∘ F⁻¹` are orthogonal to `v₁`. Damped Newton from `ζ = 0` with
/// a finite-difference Jacobian, then from the best point of a coarse grid
/// if that fails.
pub fn hersch_recenter(quad: &DiskQuadrature, mode: &DiskMode, weights: &[f64], tol: f64) -> Result<Recentering> {
    if weights.len() != quad.len() {
        bail!(Domain, "expected {} weights, got {}", quad.len(), weights.len());
    }
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        bail!(Domain, "the weight must have positive integral (got {total})");
    }
    let rel = |z: MobiusParameter| {
        let (v, s) = hersch_field(quad, mode, weights, z);
        (v, if s > 0.0 { v.norm() / s } else { 0.0 })
    };
    let newton = |start: MobiusParameter| -> Result<(MobiusParameter, f64, usize)> {
        let mut z = start;
        let (mut v, mut r) = rel(z);
        for step in 0..60 {
            if r <= tol {
                return Ok((z, r, step));
            }
            let j = hersch_jacobian(quad, mode, weights, z, 1e-6)?;
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if det == 0.0 || !det.is_finite() {
                break;
            }
            let dx = (j[1][1] * v.re - j[0][1] * v.im) / det;
            let dy = (-j[1][0] * v.re + j[0][0] * v.im) / det;
            let mut t = 1.0;
            let mut moved = false;
            for _ in 0..30 {
                let cand = z.zeta - Complex64::new(dx, dy) * t;
                if cand.norm() < 0.99 {
                    let cz = MobiusParameter::new(cand)?;
                    let (cv, cr) = rel(cz);
                    if cr < r {
                        z = cz;
                        v = cv;
                        r = cr;
                        moved = true;
                        break;
                    }
                }
                t *= 0.5;
            }
            if !moved {
                break;
            }
        }
        Ok((z, r, 60))
    };
    let (z, r, steps) = newton(MobiusParameter::zero())?;
    if r <= tol {
        return Ok(Recentering {
            zeta: z,
            residual: r,
            newton_steps: steps,
            used_grid: false,
            grid: Vec::new(),
        });
    }
    let mut grid = Vec::new();
    for i in 1..=8 {
        let rad = GRID_RADIUS * i as f64 / 8.0;
        for k in 0..16 {
            let zeta = Complex64::from_polar(rad, 2.0 * PI * k as f64 / 16.0);
            grid.push((zeta, rel(MobiusParameter::new(zeta)?).1));
        }
    }
    grid.push((Complex64::zero(), rel(MobiusParameter::zero()).1));
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&a, &b| grid[a].1.total_cmp(&grid[b].1));
    for &i in order.iter().take(4) {
        let (z, r, steps) = newton(MobiusParameter::new(grid[i].0)?)?;
        if r <= tol {
            return Ok(Recentering {
                zeta: z,
                residual: r,
                newton_steps: steps,
                used_grid: true,
                grid,
            });
        }
    }
    let best = grid[order[0]];
    bail!(
        NoConvergence,
        "no centre of mass found: best grid |V| = {} at ζ = {} (tol {tol})",
        best.1,
        best.0
    )
}

/// Degree kept when resampling composed maps.
pub const RESAMPLE_DEGREE: usize = MAX_DEGREE;

/// `F ∘ M_{−ζ}` as a power series, by a discrete Fourier transform of its
/// boundary values. Also returns the largest dropped-coefficient estimate
/// (the modulus of the highest kept coefficient).
pub fn recentred_map(f: &PowerSeriesMap, zeta: MobiusParameter) -> Result<(PowerSeriesMap, f64)> {
    resample(|z| f.eval(mobius(zeta.inverse(), z)))
}

/// Power series of an analytic function on the closed disk, sampled on 256
/// boundary points and truncated to degree 64.
pub fn resample<G: Fn(Complex64) -> Complex64>(g: G) -> Result<(PowerSeriesMap, f64)> {
    let n = 4 * RESAMPLE_DEGREE;
    let samples: Vec<Complex64> = (0..n)
        .map(|k| g(Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)))
        .collect();
    let coeffs: Vec<Complex64> = (0..=RESAMPLE_DEGREE)
        .map(|m| {
            samples
                .iter()
                .enumerate()
                .map(|(k, &s)| s * Complex64::from_polar(1.0, -2.0 * PI * (m * k % n) as f64 / n as f64))
                .sum::<Complex64>()
                / n as f64
        })
        .collect();
    let tail = coeffs[RESAMPLE_DEGREE].norm();
    let cleaned: Vec<Complex64> = coeffs
        .into_iter()
        .map(|c| {
            let re = if c.re.abs() < 1e-15 { 0.0 } else { c.re };
            let im = if c.im.abs() < 1e-15 { 0.0 } else { c.im };
            Complex64::new(re, im)
        })
        .collect();
    Ok((PowerSeriesMap::new_unchecked(cleaned)?, tail))
}

/// Truncated power series of the Möbius map `M_ζ`, as a test domain.
pub fn mobius_map(zeta: MobiusParameter) -> Result<PowerSeriesMap> {
    resample(|z| mobius(zeta, z)).map(|(m, _)| m)
}

/// `∫_𝔻 g²|f'|²` over the disk for the `κ = 1` profile.
fn weighted_profile_mass(quad: &DiskQuadrature, mode: &DiskMode, f: &PowerSeriesMap) -> f64 {
    quad.integrate(|z| {
        let g = radial_profile_with_derivative(mode, z.norm()).0;
        g * g * f.deriv(z).norm_sqr()
    })
}

/// `κ = 1` profile at perimeter-scaled parameter `α`, i.e. Robin parameter
/// `α/2π` on the unit disk.
pub fn lambda2_mode(alpha: f64) -> Result<DiskMode> {
    disk_mode_eigenvalue(1, alpha / (2.0 * PI), 1)
}

/// Rayleigh-quotient upper bound for `λ₂(Ω; α/L(Ω))` on `Ω = f(𝔻)`, valid
/// when `f` has been recentred so the trial fields are orthogonal to `v₁`:
/// `[2π∫₀¹(g'² + g²/r²) r dr + α g(1)²] / ∫_𝔻 g²|f'|²`.
pub fn lambda2_upper_bound(quad: &DiskQuadrature, f: &PowerSeriesMap, alpha: f64) -> Result<f64> {
    if !(-2.0 * PI..=2.0 * PI).contains(&alpha) {
        bail!(Domain, "α = {alpha} outside [−2π, 2π]");
    }
    let mode = lambda2_mode(alpha)?;
    let energy = 2.0
        * PI
        * quad.integrate_radial(|r| {
            let (g, dg) = radial_profile_with_derivative(&mode, r);
            (dg * dg + g * g / (r * r)) * r
        });
    let g1 = radial_profile_with_derivative(&mode, 1.0).0;
    Ok((energy + alpha * g1 * g1) / weighted_profile_mass(quad, &mode, f))
}

/// Both sides of `∫_𝔻 g² < ∫_𝔻 g²|f'|²` for a map normalized to area π.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaBound {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// Evaluates the area inequality with the `κ = 1` profile at parameter
/// `α/2π`. Linear maps give equality, counted as a pass.
pub fn areabound_check(quad: &DiskQuadrature, f: &PowerSeriesMap, alpha: f64) -> Result<AreaBound> {
    if !(alpha <= 2.0 * PI) {
        bail!(Domain, "α = {alpha} exceeds 2π");
    }
    let m1 = mean_value(f, 1.0);
    if (m1 - 1.0).abs() > 1e-10 {
        bail!(Domain, "map is not area-normalized (Σ n|aₙ|² = {m1})");
    }
    let mode = lambda2_mode(alpha)?;
    let lhs = quad.integrate(|z| radial_profile_with_derivative(&mode, z.norm()).0.powi(2));
    let rhs = weighted_profile_mass(quad, &mode, f);
    let pass = if f.is_linear() {
        (lhs - rhs).abs() <= 1e-10 * lhs
    } else {
        lhs < rhs
    };
    Ok(AreaBound { lhs, rhs, pass })
}

/// Polygonization and refinement levels for FEM checks on conformal images.
#[derive(Debug, Clone, PartialEq)]
pub struct FemPlan {
    pub vertices: usize,
    pub levels: Vec<u32>,
}

impl Default for FemPlan {
    fn default() -> Self {
        Self {
            vertices: 256,
            levels: alloc::vec![2, 3],
        }
    }
}

/// `λ₁(Ω; α/L)|F'(0)|²` against `λ₁(𝔻; α/2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConformalBound {
    pub lhs: f64,
    pub rhs: f64,
    /// FEM extrapolation error plus the polygonization error
    /// `|lhs| (|ΔA|/A + |ΔL|/L)`.
    pub error_estimate: f64,
    pub fem_error: f64,
    pub geometric_error: f64,
    pub linear: bool,
    pub pass: bool,
}

impl ConformalBound {
    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }
}

/// First-eigenvalue bound for conformal images: `λ₁` from FEM on the
/// polygonized image with `β = α/L`, `L` the perimeter of the curved image.
pub fn lambda1_conformal_bound(f: &PowerSeriesMap, alpha: f64, plan: &FemPlan) -> Result<ConformalBound> {
    if !(alpha > 0.0) {
        bail!(Domain, "α must be positive (got {alpha})");
    }
    let domain = Domain::conformal(f.clone());
    let poly = polygonize(&domain, plan.vertices)?;
    let l = map_perimeter(f);
    let res = study(&plan.levels, |level| {
        robin_eigs_forms(&assemble(&mesh_convex_polygon(&poly, level)?)?, alpha / l, 1)
    })?;
    let lambda1 = finest_estimate(&res, 0);
    let scale = f.conformal_radius_sq();
    let lhs = lambda1.value * scale;
    let rhs = disk_mode_eigenvalue(0, alpha / (2.0 * PI), 1)?.lambda;
    let geometric_error =
        lhs.abs() * ((poly.area() - domain.area()).abs() / domain.area() + (poly.perimeter() - l).abs() / l);
    let fem_error = lambda1.error * scale;
    let error_estimate = fem_error + geometric_error;
    let linear = f.is_linear();
    let pass = if linear {
        (lhs - rhs).abs() <= error_estimate
    } else {
        lhs <= rhs + error_estimate
    };
    Ok(ConformalBound {
        lhs,
        rhs,
        error_estimate,
        fem_error,
        geometric_error,
        linear,
        pass,
    })
}

/// Extrapolated value of eigenvalue `i`, or the single-level value with
/// zero error.
pub fn finest_estimate(res: &EigResult, i: usize) -> Extrapolated {
    match &res.extrapolated {
        Some(e) => e[i],
        None => Extrapolated {
            value: res.eigenvalues[i],
            error: 0.0,
        },
    }
}

/// FEM first eigenfunction of the polygonized image, normalized positive,
/// as a function on the plane (P1 interpolation, clamped to the nearest
/// triangle outside the polygon).
pub struct FemGroundState {
    pub mesh: crate::geometry::Mesh,
    pub values: Vec<f64>,
    pub lambda: f64,
}

impl FemGroundState {
    /// Solves on `polygonize(domain, vertices)` at `level` with Robin
    /// parameter `beta`.
    pub fn compute(domain: &Domain, vertices: usize, level: u32, beta: f64) -> Result<Self> {
        let poly = polygonize(domain, vertices)?;
        let mesh = mesh_convex_polygon(&poly, level)?;
        let res = robin_eigs_forms(&assemble(&mesh)?, beta, 1)?;
        let mut values = res.eigenvectors[0].clone();
        if values.iter().sum::<f64>() < 0.0 {
            for v in values.iter_mut() {
                *v = -*v;
            }
        }
        Ok(Self {
            mesh,
            values,
            lambda: res.eigenvalues[0],
        })
    }

    /// Pullback weights of `v₁` for the quadrature through the map `f`.
    pub fn weights(&self, quad: &DiskQuadrature, f: &PowerSeriesMap) -> Vec<f64> {
        let loc = MeshLocator::new(&self.mesh);
        pullback_weights(quad, f, |p| loc.interpolate_clamped(&self.values, p))
    }
}

/// `|∫ u₂ v₁|` and `|∫ u₃ v₁|` relative to `‖u_j‖ ‖v₁‖`, for the recentred
/// trial fields, all integrals by the same quadrature.
pub fn orthogonality_residuals(
    quad: &DiskQuadrature,
    mode: &DiskMode,
    f: &PowerSeriesMap,
    zeta: MobiusParameter,
    v1_weights: &[f64],
    v1_sq_weights: &[f64],
) -> [f64; 2] {
    let (v, _) = hersch_field(quad, mode, v1_weights, zeta);
    let mut n2 = [0.0; 2];
    for (&z, &w) in quad.points().iter().zip(quad.weights()) {
        let h = trial_field(mode, mobius(zeta, z));
        let j = f.deriv(z).norm_sqr();
        n2[0] += w * h.re * h.re * j;
        n2[1] += w * h.im * h.im * j;
    }
    let nv: f64 = v1_sq_weights.iter().sum::<f64>().sqrt();
    [v.re.abs() / (n2[0].sqrt() * nv), v.im.abs() / (n2[1].sqrt() * nv)]
}
