//! Bessel functions J₀, J₁, J₂ and I₀, I₁, their derivatives, and the first
//! zeros used by the disk analysis.
//!
//! Below `x = 12` the power series is summed in double-double arithmetic,
//! which absorbs the cancellation between its alternating terms. Above that
//! the functions come from Miller's backward recurrence normalized by
//! `J₀ + 2 Σ J₂ₖ = 1`. The integer-order routines are also used internally
//! for the higher angular modes of the disk.

use alloc::vec;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicU64, Ordering};

use crate::dd::Dd;
use crate::error::{bail, Error, Result};
use crate::roots::{bisect, newton_polish};
#[allow(unused_imports)]
use num_traits::Float;

/// Upper end of the public working range.
pub const WORKING_RANGE: f64 = 50.0;
/// Switch from the power series to backward recurrence.
pub const SERIES_CUTOFF: f64 = 12.0;

/// Order of a Bessel function of the first kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BesselOrder {
    Zero,
    One,
    Two,
}

impl BesselOrder {
    pub fn nu(self) -> u32 {
        match self {
            BesselOrder::Zero => 0,
            BesselOrder::One => 1,
            BesselOrder::Two => 2,
        }
    }
}

impl TryFrom<u32> for BesselOrder {
    type Error = Error;

    fn try_from(nu: u32) -> Result<Self> {
        match nu {
            0 => Ok(BesselOrder::Zero),
            1 => Ok(BesselOrder::One),
            2 => Ok(BesselOrder::Two),
            _ => bail!(Domain, "Bessel order {nu} is not supported (only 0, 1, 2)"),
        }
    }
}

fn check_range(x: f64) -> Result<()> {
    if !(0.0..=WORKING_RANGE).contains(&x) {
        bail!(Domain, "argument {x} outside [0, {WORKING_RANGE}]");
    }
    Ok(())
}

/// `J_ν(x)` for `ν ∈ {0, 1, 2}` and `0 ≤ x ≤ 50`.
pub fn bessel_j(order: BesselOrder, x: f64) -> Result<f64> {
    check_range(x)?;
    Ok(jn(order.nu(), x))
}

/// Derivative `J_ν'(x)` via `J₀' = −J₁`, `J₁' = J₀ − J₁/x`, `J₂' = J₁ − 2J₂/x`.
pub fn bessel_j_deriv(order: BesselOrder, x: f64) -> Result<f64> {
    check_range(x)?;
    match order {
        BesselOrder::Zero => Ok(-jn(1, x)),
        _ if x <= 0.0 => bail!(Domain, "J_{}' needs x > 0 (got {x})", order.nu()),
        BesselOrder::One => {
            let (j0, j1) = jn_pair(0, x);
            Ok(j0 - j1 / x)
        }
        BesselOrder::Two => {
            let (j1, j2) = jn_pair(1, x);
            Ok(j1 - 2.0 * j2 / x)
        }
    }
}

/// Modified Bessel function `I_ν(x)` for `ν ∈ {0, 1}` and `0 ≤ x ≤ 50`.
pub fn bessel_i(nu: u32, x: f64) -> Result<f64> {
    check_range(x)?;
    if nu > 1 {
        bail!(Domain, "modified Bessel order {nu} is not supported (only 0, 1)");
    }
    Ok(in_series(nu, x))
}

/// `I₀' = I₁` and `I₁' = I₀ − I₁/x`.
pub fn bessel_i_deriv(nu: u32, x: f64) -> Result<f64> {
    check_range(x)?;
    match nu {
        0 => Ok(in_series(1, x)),
        1 if x > 0.0 => Ok(in_series(0, x) - in_series(1, x) / x),
        1 => bail!(Domain, "I_1' needs x > 0"),
        _ => bail!(Domain, "modified Bessel order {nu} is not supported (only 0, 1)"),
    }
}

/// The zeros the analysis refers to by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BesselZero {
    /// First positive zero of `J₀`.
    J01,
    /// First positive zero of `J₁`.
    J11,
    /// First positive zero of `J₁'`.
    J11Prime,
    /// First positive zero of `J₂`.
    J21,
}

static ZERO_CACHE: [AtomicU64; 4] = [
    AtomicU64::new(0),
    AtomicU64::new(0),
    AtomicU64::new(0),
    AtomicU64::new(0),
];

/// The requested zero to about 1e−15, computed on first use and cached.
pub fn bessel_zero(kind: BesselZero) -> f64 {
    let slot = &ZERO_CACHE[kind as usize];
    let bits = slot.load(Ordering::Relaxed);
    if bits != 0 {
        return f64::from_bits(bits);
    }
    let z = compute_zero(kind);
    slot.store(z.to_bits(), Ordering::Relaxed);
    z
}

fn compute_zero(kind: BesselZero) -> f64 {
    let j1p = |x: f64| {
        let (j0, j1) = jn_pair(0, x);
        j0 - j1 / x
    };
    // J₁'' from the Bessel equation.
    let j1pp = |x: f64| ((1.0 - x * x) * jn(1, x) - x * j1p(x)) / (x * x);
    let root = match kind {
        BesselZero::J01 => {
            let r = bisect(|x| jn(0, x), 2.0, 3.0, 1e-15);
            r.map(|r| newton_polish(|x| jn(0, x), |x| -jn(1, x), r, 2.0, 3.0))
        }
        BesselZero::J11 => {
            let r = bisect(|x| jn(1, x), 3.0, 4.5, 1e-15);
            r.map(|r| newton_polish(|x| jn(1, x), j1p, r, 3.0, 4.5))
        }
        BesselZero::J11Prime => {
            let r = bisect(j1p, 1.0, 3.0, 1e-15);
            r.map(|r| newton_polish(j1p, j1pp, r, 1.0, 3.0))
        }
        BesselZero::J21 => {
            let d = |x: f64| {
                let (j1, j2) = jn_pair(1, x);
                j1 - 2.0 * j2 / x
            };
            let r = bisect(|x| jn(2, x), 4.5, 6.0, 1e-15);
            r.map(|r| newton_polish(|x| jn(2, x), d, r, 4.5, 6.0))
        }
    };
    root.expect("fixed brackets contain the zero")
}

// ---------------------------------------------------------------------------
// integer-order internals

/// `J_n(x)` for any integer order and `x ≥ 0`.
pub(crate) fn jn(n: u32, x: f64) -> f64 {
    if x <= SERIES_CUTOFF {
        jn_series(n, x)
    } else {
        miller(n, x)[n as usize]
    }
}

/// `(J_n(x), J_{n+1}(x))`.
pub(crate) fn jn_pair(n: u32, x: f64) -> (f64, f64) {
    if x <= SERIES_CUTOFF {
        (jn_series(n, x), jn_series(n + 1, x))
    } else {
        let v = miller(n + 1, x);
        (v[n as usize], v[n as usize + 1])
    }
}

fn jn_series(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * x;
    let mut term = Dd::from_f64(1.0);
    for i in 1..=n {
        term = (term * half).div_f64(i as f64);
    }
    let q = Dd::from_f64(-half) * Dd::from_f64(half);
    let mut sum = term;
    let mut biggest = term.abs_hi();
    for k in 0u32..400 {
        term = (term * q).div_f64(((k + 1) as f64) * ((k + 1 + n) as f64));
        sum = sum + term;
        let t = term.abs_hi();
        biggest = biggest.max(t);
        if t < 1e-34 * biggest && (k as f64) > half {
            break;
        }
    }
    sum.to_f64()
}

/// Miller's backward recurrence: returns `J_0..=J_nmax`.
fn miller(nmax: u32, x: f64) -> Vec<f64> {
    let top = (nmax as f64).max(x);
    let mut start = (top + 30.0 + 2.0 * (40.0 * top).sqrt()) as usize;
    start += start % 2;
    let mut vals = vec![0.0; start + 2];
    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-30; // J_k
    vals[start] = cur;
    for k in (1..=start).rev() {
        let prev = 2.0 * (k as f64) / x * cur - next;
        vals[k - 1] = prev;
        next = cur;
        cur = prev;
        if cur.abs() > 1e250 {
            for v in vals[k - 1..].iter_mut() {
                *v *= 1e-250;
            }
            next *= 1e-250;
            cur *= 1e-250;
        }
    }
    let mut norm = vals[0];
    let mut k = 2;
    while k <= start {
        norm += 2.0 * vals[k];
        k += 2;
    }
    vals.truncate(nmax as usize + 1);
    for v in vals.iter_mut() {
        *v /= norm;
    }
    vals
}

/// `I_n(x)` by its positive power series.
pub(crate) fn in_series(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * x;
    let mut term = 1.0;
    for i in 1..=n {
        term *= half / i as f64;
    }
    let q = half * half;
    let mut sum = term;
    for k in 0u32..1000 {
        term *= q / (((k + 1) as f64) * ((k + 1 + n) as f64));
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

/// Ratio `I_{n+1}(y) / I_n(y)` for `y ≥ 0`, free of overflow.
pub(crate) fn i_ratio(n: u32, y: f64) -> f64 {
    if y == 0.0 {
        return 0.0;
    }
    if y <= 2000.0 {
        let top = n as usize + (1.5 * y) as usize + 60;
        let mut r = 0.0;
        for k in (n as usize + 1..=top).rev() {
            r = 1.0 / (2.0 * k as f64 / y + r);
        }
        r
    } else {
        asymptotic_i_scaled(n + 1, y) / asymptotic_i_scaled(n, y)
    }
}

/// `I_ν(y) √(2πy) e^{−y}` from the large-argument expansion.
fn asymptotic_i_scaled(nu: u32, y: f64) -> f64 {
    let mu = 4.0 * (nu as f64) * (nu as f64);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..30 {
        let odd = (2 * k - 1) as f64;
        term *= -(mu - odd * odd) / (k as f64 * 8.0 * y);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// First `count` positive zeros of `J_n`.
pub(crate) fn j_zeros(n: u32, count: usize) -> Vec<f64> {
    let mut zeros = Vec::with_capacity(count);
    let step = 0.5;
    let mut a = (n as f64).max(0.5);
    let mut fa = jn(n, a);
    while zeros.len() < count {
        let b = a + step;
        let fb = jn(n, b);
        if fa == 0.0 {
            zeros.push(a);
        } else if fa.signum() != fb.signum() && fb != 0.0 {
            let r = bisect(|x| jn(n, x), a, b, 1e-15).expect("sign change present");
            let d = |x: f64| {
                let (j, jp1) = jn_pair(n, x);
                n as f64 / x * j - jp1
            };
            zeros.push(newton_polish(|x| jn(n, x), d, r, a, b));
        }
        a = b;
        fa = fb;
    }
    zeros
}
