//! JSON and CSV wire formats.

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use planar_spectra::conformal::PowerSeriesMap;
use planar_spectra::geometry::{ConvexPolygon, Domain, Shape};
use planar_spectra::harness::{BatteryDomain, ScanConfig, VerificationReport};
use planar_spectra::rectangle::SweepRow;
use planar_spectra::spectrum::{ModeTag, Spectrum};
use serde::{Deserialize, Serialize};

/// `{"type": ..., params}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DomainSpec {
    Disk { radius: f64 },
    Annulus { inner: f64 },
    Rectangle { a: f64, b: f64 },
    Polygon { vertices: Vec<[f64; 2]> },
    RegularPolygon { n: usize, radius: f64 },
    Conformal { coeffs: Vec<[f64; 2]> },
}

impl DomainSpec {
    pub fn to_domain(&self) -> Result<Domain> {
        Ok(match self {
            DomainSpec::Disk { radius } => Domain::disk(*radius)?,
            DomainSpec::Annulus { inner } => Domain::annulus(*inner)?,
            DomainSpec::Rectangle { a, b } => Domain::rectangle(*a, *b)?,
            DomainSpec::Polygon { vertices } => Domain::polygon(ConvexPolygon::new(vertices.clone())?),
            DomainSpec::RegularPolygon { n, radius } => Domain::polygon(ConvexPolygon::regular(*n, *radius)?),
            DomainSpec::Conformal { coeffs } => Domain::conformal(MapSpec { coeffs: coeffs.clone() }.to_map()?),
        })
    }

    pub fn from_domain(domain: &Domain) -> Self {
        match domain.shape() {
            Shape::Disk { radius } => DomainSpec::Disk { radius: *radius },
            Shape::Annulus { inner } => DomainSpec::Annulus { inner: *inner },
            Shape::Rectangle { a, b } => DomainSpec::Rectangle { a: *a, b: *b },
            Shape::Polygon(p) => DomainSpec::Polygon {
                vertices: p.vertices().to_vec(),
            },
            Shape::Conformal(f) => DomainSpec::Conformal {
                coeffs: MapSpec::from_map(f).coeffs,
            },
        }
    }
}

/// `{"coeffs": [[re, im], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapSpec {
    pub coeffs: Vec<[f64; 2]>,
}

impl MapSpec {
    pub fn to_map(&self) -> Result<PowerSeriesMap> {
        Ok(PowerSeriesMap::new(
            self.coeffs.iter().map(|c| Complex64::new(c[0], c[1])).collect(),
        )?)
    }

    pub fn from_map(f: &PowerSeriesMap) -> Self {
        Self {
            coeffs: f.coeffs().iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &std::path::Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueEntry {
    pub lambda: f64,
    pub kappa: Option<u32>,
    pub mult: u32,
    pub branch: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<f64>,
}

/// `{alpha, eigenvalues: [{lambda, kappa, mult, branch}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub alpha: Option<f64>,
    pub bc: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainSpec>,
    pub eigenvalues: Vec<EigenvalueEntry>,
}

impl SpectrumReport {
    /// Collapses consecutive copies of a degenerate analytic eigenvalue.
    pub fn from_spectrum(alpha: Option<f64>, bc: &str, s: &Spectrum, scale: f64) -> Self {
        let mut eigenvalues: Vec<EigenvalueEntry> = Vec::new();
        for e in s.entries() {
            let (kappa, branch) = match e.mode {
                ModeTag::Disk { kappa, branch, .. } => (Some(kappa), Some(branch.as_str().to_string())),
                ModeTag::Annulus { n, .. } => (Some(n), None),
                _ => (None, None),
            };
            let lambda = e.lambda * scale;
            if let Some(last) = eigenvalues.last() {
                if last.lambda == lambda && last.kappa == kappa && last.branch == branch && e.multiplicity > 1 {
                    continue;
                }
            }
            eigenvalues.push(EigenvalueEntry {
                lambda,
                kappa,
                mult: e.multiplicity,
                branch,
                error: None,
            });
        }
        Self {
            alpha,
            bc: bc.to_string(),
            domain: None,
            eigenvalues,
        }
    }
}

/// One JSON report row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub tag: String,
    pub domain: String,
    pub alpha: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub error_estimate: f64,
    pub provenance: String,
    pub pass: Option<bool>,
}

impl From<&VerificationReport> for ReportRow {
    fn from(r: &VerificationReport) -> Self {
        Self {
            tag: r.tag.as_str().to_string(),
            domain: r.domain.clone(),
            alpha: r.alpha,
            lhs: r.lhs,
            rhs: r.rhs,
            margin: r.margin,
            error_estimate: r.error_estimate,
            provenance: r.provenance.clone(),
            pass: r.pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub t: f64,
    #[serde(rename = "L")]
    pub l: f64,
    pub beta: f64,
    pub lambda1: f64,
    pub scaled: f64,
    pub gap: f64,
    pub alpha: f64,
}

impl From<&SweepRow> for SweepRecord {
    fn from(r: &SweepRow) -> Self {
        Self {
            t: r.t,
            l: r.perimeter,
            beta: r.beta,
            lambda1: r.lambda1,
            scaled: r.scaled,
            gap: r.gap,
            alpha: r.alpha,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatteryEntrySpec {
    pub name: String,
    pub domain: DomainSpec,
    #[serde(default = "default_vertices")]
    pub vertices: usize,
    pub levels: Vec<u32>,
}

fn default_vertices() -> usize {
    256
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedMap {
    pub name: String,
    pub coeffs: Vec<[f64; 2]>,
}

/// `scan.json`: every field optional.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfigSpec {
    #[serde(default)]
    pub battery: Vec<BatteryEntrySpec>,
    #[serde(default)]
    pub alphas: Vec<f64>,
    #[serde(default)]
    pub maps: Vec<NamedMap>,
    #[serde(default)]
    pub annulus_eps: Vec<f64>,
    #[serde(default)]
    pub strict_factor: Option<f64>,
    #[serde(default)]
    pub output: Option<String>,
}

impl ScanConfigSpec {
    pub fn to_config(&self) -> Result<ScanConfig> {
        let battery = self
            .battery
            .iter()
            .map(|b| {
                if b.levels.is_empty() {
                    bail!("battery entry {} has no levels", b.name);
                }
                Ok(BatteryDomain::new(
                    b.name.clone(),
                    b.domain.to_domain()?,
                    b.vertices,
                    b.levels.clone(),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let maps = self
            .maps
            .iter()
            .map(|m| {
                Ok((
                    m.name.clone(),
                    MapSpec {
                        coeffs: m.coeffs.clone(),
                    }
                    .to_map()?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ScanConfig {
            battery,
            alphas: self.alphas.clone(),
            maps,
            annulus_eps: self.annulus_eps.clone(),
            strict_factor: self.strict_factor,
        })
    }
}
