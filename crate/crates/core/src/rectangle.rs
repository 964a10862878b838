//! Robin spectra of intervals and rectangles by separation of variables, and
//! the thin-rectangle sweep behind the first-eigenvalue inequality.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{bail, Result};
use crate::roots::bisect;
use crate::spectrum::{BoundaryCondition, Eigenvalue, ModeTag, Spectrum};
#[allow(unused_imports)]
use num_traits::Float;

/// Largest interval index accepted by [`interval_robin_eigen`].
pub const MAX_INTERVAL_INDEX: usize = 20;
/// Largest spectrum length accepted by [`rectangle_spectrum`].
pub const MAX_SPECTRUM: usize = 40;

/// `−u″ = λu` on `(0, ℓ)` with `u′(0) = βu(0)` and `−u′(ℓ) = βu(ℓ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalRobinProblem {
    pub length: f64,
    pub beta: f64,
}

impl IntervalRobinProblem {
    pub fn new(length: f64, beta: f64) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            bail!(Domain, "interval length must be positive");
        }
        if beta.is_nan() {
            bail!(Domain, "Robin parameter is NaN");
        }
        Ok(Self { length, beta })
    }

    /// `(ω² − β²) sin ωℓ − 2βω cos ωℓ` divided by `ω`; vanishes at
    /// `λ = ω² > 0` eigenvalues and stays finite at `ω = 0`.
    fn oscillatory(&self, w: f64) -> f64 {
        let (b, l) = (self.beta, self.length);
        if w == 0.0 {
            return -b * (b * l + 2.0);
        }
        let (s, c) = (w * l).sin_cos();
        ((w * w - b * b) * s - 2.0 * b * w * c) / w
    }

    /// `(ω² + β²) tanh ωℓ + 2βω`, vanishing at `λ = −ω² < 0` eigenvalues.
    fn hyperbolic(&self, w: f64) -> f64 {
        let b = self.beta;
        (w * w + b * b) * (w * self.length).tanh() + 2.0 * b * w
    }

    /// Negative eigenvalues, ascending. Present only for `β < 0`: two when
    /// `βℓ < −2`, one otherwise.
    fn negative(&self) -> Result<Vec<f64>> {
        let (b, l) = (self.beta, self.length);
        if b >= 0.0 {
            return Ok(Vec::new());
        }
        let h = |w| self.hyperbolic(w);
        // the symmetric mode sits above |β|, the antisymmetric one below
        let mut hi = 2.0 * b.abs() + 1.0;
        while h(hi) <= 0.0 {
            hi *= 2.0;
        }
        let top = bisect(h, b.abs(), hi, 1e-15)?;
        let mut out = alloc::vec![-top * top];
        if b * l < -2.0 {
            let w = bisect(h, 1e-300_f64.max(b.abs() * 1e-12), b.abs(), 1e-15)?;
            out.push(-w * w);
        }
        Ok(out)
    }

    /// First `count` eigenvalues, ascending.
    pub fn eigenvalues(&self, count: usize) -> Result<Vec<f64>> {
        let (b, l) = (self.beta, self.length);
        if b == 0.0 {
            return Ok((0..count).map(|k| (k as f64 * PI / l).powi(2)).collect());
        }
        let mut out = self.negative()?;
        if b < 0.0 && b * l == -2.0 {
            out.push(0.0);
        }
        // Positive eigenvalues: roots of the pole-free form, isolated by
        // scanning every half-period of tan(ωℓ) in eight cells.
        let f = |w| self.oscillatory(w);
        let mut j = 0usize;
        while out.len() < count {
            let a = if j == 0 { 0.0 } else { (j as f64 - 0.5) * PI / l };
            let c = (j as f64 + 0.5) * PI / l;
            let cells = 8;
            let mut x0 = a;
            let mut f0 = f(x0);
            for i in 1..=cells {
                let x1 = a + (c - a) * i as f64 / cells as f64;
                let f1 = f(x1);
                if f1 == 0.0 && x1 > 0.0 {
                    out.push(x1 * x1);
                } else if f0 != 0.0 && f0.signum() != f1.signum() {
                    let w = bisect(f, x0, x1, 1e-15)?;
                    if w > 0.0 {
                        out.push(w * w);
                    }
                }
                x0 = x1;
                f0 = f1;
            }
            j += 1;
            if j > 4 * count + 64 {
                bail!(Bracket, "interval spectrum scan stalled at ℓ = {l}, β = {b}");
            }
        }
        out.sort_by(f64::total_cmp);
        out.truncate(count);
        Ok(out)
    }
}

/// The `k`-th (1-based) eigenvalue of the interval problem.
pub fn interval_robin_eigen(p: &IntervalRobinProblem, k: usize) -> Result<f64> {
    if k == 0 || k > MAX_INTERVAL_INDEX {
        bail!(Domain, "interval index {k} outside 1..={MAX_INTERVAL_INDEX}");
    }
    Ok(p.eigenvalues(k)?[k - 1])
}

/// First `k` Robin eigenvalues of the `a × b` rectangle with parameter `β`
/// on every side.
pub fn rectangle_spectrum(a: f64, b: f64, beta: f64, k: usize) -> Result<Spectrum> {
    if k > MAX_SPECTRUM {
        bail!(Domain, "spectrum length {k} exceeds {MAX_SPECTRUM}");
    }
    let xs = IntervalRobinProblem::new(a, beta)?.eigenvalues(k)?;
    let ys = IntervalRobinProblem::new(b, beta)?.eigenvalues(k)?;
    let mut entries = Vec::with_capacity(k * k);
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in ys.iter().enumerate() {
            entries.push(Eigenvalue {
                lambda: x + y,
                multiplicity: 1,
                mode: ModeTag::Rectangle {
                    i: i as u32 + 1,
                    j: j as u32 + 1,
                },
            });
        }
    }
    let mut s = Spectrum::from_unsorted(BoundaryCondition::Robin(beta), entries, k);
    // count numerically coincident sums
    let vals = s.values();
    let fixed: Vec<Eigenvalue> = s
        .entries()
        .iter()
        .map(|e| {
            let tol = 1e-12 * e.lambda.abs().max(1.0);
            let mult = vals.iter().filter(|v| (*v - e.lambda).abs() <= tol).count() as u32;
            Eigenvalue {
                multiplicity: mult,
                ..*e
            }
        })
        .collect();
    s = Spectrum::from_unsorted(BoundaryCondition::Robin(beta), fixed, k);
    Ok(s)
}

/// Rectangle of sides `t` and `1/t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectangleFamily {
    pub t: f64,
}

impl RectangleFamily {
    pub fn new(t: f64) -> Result<Self> {
        if !(t >= 1.0 && t.is_finite()) {
            bail!(Domain, "aspect parameter t = {t} must be ≥ 1");
        }
        Ok(Self { t })
    }

    pub fn sides(&self) -> (f64, f64) {
        (self.t, 1.0 / self.t)
    }

    pub fn area(&self) -> f64 {
        1.0
    }

    pub fn perimeter(&self) -> f64 {
        2.0 * (self.t + 1.0 / self.t)
    }
}

/// One row of the thin-rectangle sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub t: f64,
    pub perimeter: f64,
    pub beta: f64,
    pub lambda1: f64,
    /// `λ₁ A`, equal to `λ₁` here since `A = 1`.
    pub scaled: f64,
    /// `α − λ₁ A`.
    pub gap: f64,
    pub alpha: f64,
}

/// `λ₁(Ω_t; α/L(t))·A(t)` over the family of unit-area rectangles.
pub fn theorem_a_sweep(alpha: f64, t_grid: &[f64]) -> Result<Vec<SweepRow>> {
    if alpha == 0.0 || !alpha.is_finite() {
        bail!(Domain, "α must be finite and nonzero");
    }
    t_grid
        .iter()
        .map(|&t| {
            let fam = RectangleFamily::new(t)?;
            let (a, b) = fam.sides();
            let l = fam.perimeter();
            let beta = alpha / l;
            let lambda1 = IntervalRobinProblem::new(a, beta)?.eigenvalues(1)?[0]
                + IntervalRobinProblem::new(b, beta)?.eigenvalues(1)?[0];
            let scaled = lambda1 * fam.area();
            Ok(SweepRow {
                t,
                perimeter: l,
                beta,
                lambda1,
                scaled,
                gap: alpha - scaled,
                alpha,
            })
        })
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}
