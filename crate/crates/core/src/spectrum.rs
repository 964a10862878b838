//! Ordered eigenvalue lists shared by the analytic and discrete solvers.

use alloc::vec::Vec;

/// Boundary condition attached to a spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryCondition {
    /// `∂u/∂ν + αu = 0` with the given (already scaled) parameter.
    Robin(f64),
    Neumann,
    Dirichlet,
    /// `Δu = 0`, `∂u/∂ν = σu`.
    Steklov,
}

/// Radial behaviour of a separated disk eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    /// `λ > 0`, radial part `J_κ(√λ r)`.
    Oscillatory,
    /// `λ = 0`, radial part `r^κ`.
    Linear,
    /// `λ < 0`, radial part `I_κ(√−λ r)`.
    Exponential,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Oscillatory => "oscillatory",
            Branch::Linear => "linear",
            Branch::Exponential => "exponential",
        }
    }
}

/// Which separated mode produced an eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModeTag {
    /// Angular mode `kappa`, `m`-th radial root.
    Disk { kappa: u32, m: u32, branch: Branch },
    /// Product of the `i`-th and `j`-th interval modes (1-based).
    Rectangle { i: u32, j: u32 },
    /// Fourier mode `n` of the annulus, `root` 0 (lower) or 1 (upper).
    Annulus { n: u32, root: u32 },
    /// Position in a discrete spectrum.
    Discrete { index: u32 },
}

/// One eigenvalue. Degenerate eigenvalues appear once per copy, each copy
/// carrying the full multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenvalue {
    pub lambda: f64,
    pub multiplicity: u32,
    pub mode: ModeTag,
}

/// Nondecreasing list of eigenvalues for one boundary condition.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    bc: BoundaryCondition,
    entries: Vec<Eigenvalue>,
}

impl Spectrum {
    /// Sorts `entries` by value (stable) and keeps the first `k`.
    pub fn from_unsorted(bc: BoundaryCondition, mut entries: Vec<Eigenvalue>, k: usize) -> Self {
        entries.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
        entries.truncate(k);
        Self { bc, entries }
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.bc
    }

    pub fn entries(&self) -> &[Eigenvalue] {
        &self.entries
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.lambda).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The `k`-th eigenvalue, 1-based, counted with multiplicity.
    pub fn nth(&self, k: usize) -> Option<f64> {
        k.checked_sub(1).and_then(|i| self.entries.get(i)).map(|e| e.lambda)
    }
}
