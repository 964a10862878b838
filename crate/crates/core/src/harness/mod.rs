//! Verification suites, exploratory scans and figure data.

mod explore;
mod figures;
mod suites;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::conformal::PowerSeriesMap;
use crate::error::{bail, Result};
use crate::fem::{
    assemble, robin_eigs_forms, steklov_schur_forms, steklov_via_robin_forms, study, AssembledForms, EigResult,
    Extrapolated,
};
use crate::geometry::{mesh_convex_polygon, polygonize, ConvexPolygon, Domain, Shape};

pub use explore::{explore_conj1, explore_conj4, explore_harmonic};
pub use figures::{emit_figures, FigureCurve, FIGURE_POINTS};
pub use suites::{
    annulus_scan, reproduce_threshold, verify_corollary_c, verify_corollary_d, verify_theorem_a, verify_theorem_b,
    verify_theorem_e,
};

/// Which statement a report row checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    A,
    B,
    C,
    DSzego,
    DWeinstock,
    E,
    Threshold,
    Annulus,
    HarmonicMean,
    Conj1,
    Conj4,
}

impl Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::A => "A",
            Tag::B => "B",
            Tag::C => "C",
            Tag::DSzego => "D-szego",
            Tag::DWeinstock => "D-weinstock",
            Tag::E => "E",
            Tag::Threshold => "threshold",
            Tag::Annulus => "annulus",
            Tag::HarmonicMean => "harmonic-mean",
            Tag::Conj1 => "conj1",
            Tag::Conj4 => "conj4",
        }
    }
}

/// How a row's pass flag is decided from `margin = rhs − lhs` and the
/// error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Check {
    /// `lhs ≤ rhs + error`.
    AtMost,
    /// `margin > factor · error`.
    Strict(f64),
    /// `|margin| ≤ error`.
    Equal,
    /// No pass flag.
    ReportOnly,
}

/// One row of a verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub tag: Tag,
    pub domain: String,
    pub alpha: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub error_estimate: f64,
    pub provenance: String,
    pub pass: Option<bool>,
}

impl VerificationReport {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        tag: Tag,
        domain: impl Into<String>,
        alpha: f64,
        lhs: f64,
        rhs: f64,
        error_estimate: f64,
        provenance: impl Into<String>,
        check: Check,
    ) -> Self {
        let margin = rhs - lhs;
        let pass = match check {
            Check::AtMost => Some(lhs <= rhs + error_estimate),
            Check::Strict(factor) => Some(margin > factor * error_estimate),
            Check::Equal => Some(margin.abs() <= error_estimate),
            Check::ReportOnly => None,
        };
        Self {
            tag,
            domain: domain.into(),
            alpha,
            lhs,
            rhs,
            margin,
            error_estimate,
            provenance: provenance.into(),
            pass,
        }
    }
}

/// True when no checked row failed.
pub fn all_pass(rows: &[VerificationReport]) -> bool {
    rows.iter().all(|r| r.pass != Some(false))
}

/// Orders rows by tag, domain and α.
pub fn sort_reports(rows: &mut [VerificationReport]) {
    rows.sort_by(|a, b| {
        a.tag
            .cmp(&b.tag)
            .then_with(|| a.domain.cmp(&b.domain))
            .then_with(|| a.alpha.total_cmp(&b.alpha))
    });
}

/// A domain of the verification battery with its discretization plan.
#[derive(Debug, Clone, PartialEq)]
pub struct BatteryDomain {
    pub name: String,
    pub domain: Domain,
    /// Vertices used when the domain is curved.
    pub vertices: usize,
    pub levels: Vec<u32>,
    /// Polygonized disks, compared with equality.
    pub disk_like: bool,
}

impl BatteryDomain {
    pub fn new(name: impl Into<String>, domain: Domain, vertices: usize, levels: Vec<u32>) -> Self {
        let disk_like = matches!(domain.shape(), Shape::Disk { .. });
        Self {
            name: name.into(),
            domain,
            vertices,
            levels,
            disk_like,
        }
    }

    pub fn polygon(&self) -> Result<ConvexPolygon> {
        polygonize(&self.domain, self.vertices)
    }

    pub fn is_rectangle(&self) -> Option<(f64, f64)> {
        match self.domain.shape() {
            Shape::Rectangle { a, b } => Some((*a, *b)),
            _ => None,
        }
    }
}

/// The quadratic conformal image used throughout the battery.
pub fn quadratic_map() -> PowerSeriesMap {
    PowerSeriesMap::from_real(&[0.0, 1.0, 0.2]).expect("univalent quadratic")
}

/// Square, 2:1 and 4:1 rectangles, regular pentagon and hexagon, the image
/// of `z + 0.2z²` and inscribed 64-, 128- and 256-gon disks.
pub fn default_battery() -> Vec<BatteryDomain> {
    let v = alloc::vec![
        BatteryDomain::new("square", Domain::rectangle(1.0, 1.0).unwrap(), 4, alloc::vec![5, 6]),
        BatteryDomain::new(
            "rectangle-2:1",
            Domain::rectangle(2.0, 1.0).unwrap(),
            4,
            alloc::vec![5, 6]
        ),
        BatteryDomain::new(
            "rectangle-4:1",
            Domain::rectangle(4.0, 1.0).unwrap(),
            4,
            alloc::vec![5, 6]
        ),
        BatteryDomain::new(
            "pentagon",
            Domain::polygon(ConvexPolygon::regular(5, 1.0).unwrap()),
            5,
            alloc::vec![5, 6],
        ),
        BatteryDomain::new(
            "hexagon",
            Domain::polygon(ConvexPolygon::regular(6, 1.0).unwrap()),
            6,
            alloc::vec![5, 6],
        ),
        BatteryDomain::new(
            "conformal-z+0.2z^2",
            Domain::conformal(quadratic_map()),
            128,
            alloc::vec![2, 3]
        ),
        BatteryDomain::new("disk-64gon", Domain::disk(1.0).unwrap(), 64, alloc::vec![3, 4]),
        BatteryDomain::new("disk-128gon", Domain::disk(1.0).unwrap(), 128, alloc::vec![2, 3]),
        BatteryDomain::new("disk-256gon", Domain::disk(1.0).unwrap(), 256, alloc::vec![2, 3]),
    ];
    v
}

/// Maps used by the conformal suites: identity, `2z` and `z + 0.2z²`.
pub fn default_maps() -> Vec<(String, PowerSeriesMap)> {
    alloc::vec![
        (String::from("identity"), PowerSeriesMap::identity()),
        (String::from("2z"), PowerSeriesMap::from_real(&[0.0, 2.0]).unwrap()),
        (String::from("z+0.2z^2"), quadratic_map()),
    ]
}

/// Suite parameters. Empty grids select each suite's default.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScanConfig {
    pub battery: Vec<BatteryDomain>,
    pub alphas: Vec<f64>,
    pub maps: Vec<(String, PowerSeriesMap)>,
    pub annulus_eps: Vec<f64>,
    /// Required `margin / error` for strict inequalities (default 3).
    pub strict_factor: Option<f64>,
}

impl ScanConfig {
    pub fn battery(&self) -> Vec<BatteryDomain> {
        if self.battery.is_empty() {
            default_battery()
        } else {
            self.battery.clone()
        }
    }

    pub fn alphas_or(&self, default: &[f64]) -> Vec<f64> {
        if self.alphas.is_empty() {
            default.to_vec()
        } else {
            self.alphas.clone()
        }
    }

    pub fn maps(&self) -> Vec<(String, PowerSeriesMap)> {
        if self.maps.is_empty() {
            default_maps()
        } else {
            self.maps.clone()
        }
    }

    pub fn strict_factor(&self) -> f64 {
        self.strict_factor.unwrap_or(3.0)
    }
}

/// `n` equispaced points on `[a, b]`, endpoints included.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => alloc::vec![a],
        _ => (0..n)
            .map(|i| {
                if i + 1 == n {
                    b
                } else {
                    a + (b - a) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// The default Theorem B grid: 21 points on `[−2π, 2π]`.
pub fn theorem_b_alphas() -> Vec<f64> {
    linspace(-2.0 * PI, 2.0 * PI, 21)
}

/// A convex polygon assembled at several refinement levels, solved for
/// many parameters without reassembly.
pub struct PolygonSolver {
    pub polygon: ConvexPolygon,
    pub levels: Vec<u32>,
    forms: Vec<AssembledForms>,
}

impl PolygonSolver {
    pub fn new(polygon: ConvexPolygon, levels: &[u32]) -> Result<Self> {
        if levels.is_empty() {
            bail!(Domain, "no refinement levels given");
        }
        let forms = levels
            .iter()
            .map(|&l| assemble(&mesh_convex_polygon(&polygon, l)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            polygon,
            levels: levels.to_vec(),
            forms,
        })
    }

    pub fn for_entry(entry: &BatteryDomain) -> Result<Self> {
        Self::new(entry.polygon()?, &entry.levels)
    }

    pub fn finest(&self) -> &AssembledForms {
        self.forms.last().unwrap()
    }

    fn run<F: Fn(&AssembledForms) -> Result<EigResult>>(&self, solve: F) -> Result<EigResult> {
        study(&self.levels, |level| {
            let i = self.levels.iter().position(|&l| l == level).unwrap();
            solve(&self.forms[i])
        })
    }

    /// First `k` Robin eigenvalues with parameter `beta`, extrapolated.
    pub fn robin(&self, beta: f64, k: usize) -> Result<Vec<Extrapolated>> {
        Ok(estimates(&self.run(|f| robin_eigs_forms(f, beta, k))?))
    }

    /// First `k` Steklov eigenvalues (including `σ₀ = 0`), extrapolated.
    pub fn steklov(&self, k: usize) -> Result<Vec<Extrapolated>> {
        Ok(estimates(&self.run(|f| steklov_schur_forms(f, k))?))
    }

    /// `σ₁` at the finest level from the Schur complement and from the Robin
    /// zero crossing.
    pub fn steklov_cross_check(&self) -> Result<(f64, f64)> {
        let schur = steklov_schur_forms(self.finest(), 2)?.eigenvalues[1];
        Ok((schur, steklov_via_robin_forms(self.finest())?))
    }

    pub fn provenance(&self) -> String {
        let levels: Vec<String> = self.levels.iter().map(|l| format!("{l}")).collect();
        format!(
            "fem-p1 fan vertices={} levels={} nodes={} richardson",
            self.polygon.len(),
            levels.join(","),
            self.finest().n()
        )
    }
}

fn estimates(res: &EigResult) -> Vec<Extrapolated> {
    match &res.extrapolated {
        Some(e) => e.clone(),
        None => res
            .eigenvalues
            .iter()
            .map(|&value| Extrapolated { value, error: 0.0 })
            .collect(),
    }
}

/// Relative area and perimeter defect of a polygon standing in for a
/// curved domain.
pub fn polygonization_defect(domain: &Domain, poly: &ConvexPolygon) -> f64 {
    (poly.area() - domain.area()).abs() / domain.area()
        + (poly.perimeter() - domain.perimeter()).abs() / domain.perimeter()
}
