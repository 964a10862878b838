mod wire;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use planar_spectra::disk::{annulus_steklov, disk_dirichlet_spectrum, disk_spectrum};
use planar_spectra::fem::{robin_study, steklov_study, EigResult, MAX_EIGS};
use planar_spectra::geometry::{mesh_convex_polygon, polygonize, Domain, Mesh, Shape};
use planar_spectra::harness::{self, ScanConfig, VerificationReport};
use planar_spectra::rectangle::{rectangle_spectrum, theorem_a_sweep};
use serde::Serialize;

use wire::{read_json, DomainSpec, EigenvalueEntry, ReportRow, ScanConfigSpec, SpectrumReport, SweepRecord};

#[derive(Parser)]
#[command(
    name = "planar-spectra",
    version,
    about = "Robin, Neumann and Steklov spectra of planar domains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues of one domain.
    Spectrum {
        /// Domain JSON file, `{"type": ..., params}`.
        domain: PathBuf,
        #[arg(long, value_enum, default_value_t = Bc::Robin)]
        bc: Bc,
        /// Perimeter-scaled Robin parameter α; the boundary coefficient is α/L.
        #[arg(long, allow_hyphen_values = true)]
        alpha_scaled: Option<f64>,
        /// Finest refinement level for FEM domains (the level below is also
        /// solved for extrapolation).
        #[arg(long, default_value_t = 4)]
        levels: u32,
        /// Number of eigenvalues.
        #[arg(long, default_value_t = 6)]
        count: usize,
        /// Vertices of the inscribed polygon for curved domains.
        #[arg(long, default_value_t = 256)]
        vertices: usize,
        /// Directory for mesh, eigenvector and diagnostics files (FEM only).
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Directory for CSV summaries.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report-only exploratory scans.
    Explore {
        #[arg(value_enum)]
        scan: Scan,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Radial profile data for the two disk figures.
    Figures {
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Bc {
    Robin,
    Neumann,
    Dirichlet,
    Steklov,
}

impl Bc {
    fn name(self) -> &'static str {
        match self {
            Bc::Robin => "robin",
            Bc::Neumann => "neumann",
            Bc::Dirichlet => "dirichlet",
            Bc::Steklov => "steklov",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    #[value(name = "A")]
    A,
    #[value(name = "B")]
    B,
    #[value(name = "C")]
    C,
    #[value(name = "D")]
    D,
    #[value(name = "E")]
    E,
    Threshold,
    Annulus,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scan {
    Conj1,
    Conj4,
    Harmonic,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Spectrum {
            domain,
            bc,
            alpha_scaled,
            levels,
            count,
            vertices,
            export,
        } => {
            let spec: DomainSpec = read_json(&domain)?;
            let domain = spec.to_domain()?;
            let alpha = match (bc, alpha_scaled) {
                (Bc::Robin, Some(a)) => Some(a),
                (Bc::Robin, None) => bail!("--bc robin needs --alpha-scaled"),
                (Bc::Neumann, None) => Some(0.0),
                (_, None) => None,
                (_, Some(_)) => bail!("--alpha-scaled only applies to --bc robin"),
            };
            let mut report = spectrum(&domain, bc, alpha, levels, count, vertices, export.as_deref())?;
            report.domain = Some(DomainSpec::from_domain(&domain));
            println!("{}", serde_json::to_string(&report)?);
            Ok(true)
        }
        Command::Verify { suite, config, out } => {
            let (cfg, out) = load_config(config.as_deref(), out)?;
            let rows = match suite {
                Suite::A => {
                    if let Some(dir) = &out {
                        let sweep = theorem_a_sweep(1.0, &[1.0, 2.0, 4.0, 8.0, 16.0, 32.0])?;
                        write_csv(&dir.join("theorem_a_sweep.csv"), sweep.iter().map(SweepRecord::from))?;
                    }
                    harness::verify_theorem_a(&cfg)?
                }
                Suite::B => harness::verify_theorem_b(&cfg)?,
                Suite::C => harness::verify_corollary_c(&cfg)?,
                Suite::D => harness::verify_corollary_d(&cfg)?,
                Suite::E => harness::verify_theorem_e(&cfg)?,
                Suite::Threshold => harness::reproduce_threshold()?,
                Suite::Annulus => harness::annulus_scan(&cfg)?,
            };
            let name = match suite {
                Suite::A => "A",
                Suite::B => "B",
                Suite::C => "C",
                Suite::D => "D",
                Suite::E => "E",
                Suite::Threshold => "threshold",
                Suite::Annulus => "annulus",
            };
            emit(rows, name, out.as_deref())
        }
        Command::Explore { scan, config, out } => {
            let (cfg, out) = load_config(config.as_deref(), out)?;
            let (rows, name) = match scan {
                Scan::Conj1 => (harness::explore_conj1(&cfg)?, "conj1"),
                Scan::Conj4 => (harness::explore_conj4(&cfg)?, "conj4"),
                Scan::Harmonic => (harness::explore_harmonic(&cfg)?, "harmonic"),
            };
            emit(rows, name, out.as_deref())
        }
        Command::Figures { out } => {
            fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            let curves = harness::emit_figures()?;
            let mut index = Vec::new();
            for c in &curves {
                #[derive(Serialize)]
                struct Point {
                    r: f64,
                    g: f64,
                }
                let file = format!("{}.csv", c.label());
                write_csv(&out.join(&file), c.r.iter().zip(&c.g).map(|(&r, &g)| Point { r, g }))?;
                index.push(serde_json::json!({
                    "file": file, "figure": c.figure, "kappa": c.kappa, "alpha": c.alpha, "lambda": c.lambda,
                }));
            }
            fs::write(out.join("figures.json"), serde_json::to_string_pretty(&index)?)?;
            eprintln!("wrote {} curves to {}", curves.len(), out.display());
            Ok(true)
        }
    }
}

fn load_config(path: Option<&Path>, out: Option<PathBuf>) -> Result<(ScanConfig, Option<PathBuf>)> {
    let spec = match path {
        Some(p) => read_json::<ScanConfigSpec>(p)?,
        None => ScanConfigSpec::default(),
    };
    let out = out.or_else(|| spec.output.as_ref().map(PathBuf::from));
    Ok((spec.to_config()?, out))
}

/// Prints one JSON object per row and, with `out`, a CSV summary. Returns
/// whether every checked row passed.
fn emit(mut rows: Vec<VerificationReport>, name: &str, out: Option<&Path>) -> Result<bool> {
    harness::sort_reports(&mut rows);
    let records: Vec<ReportRow> = rows.iter().map(ReportRow::from).collect();
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    for r in &records {
        writeln!(lock, "{}", serde_json::to_string(r)?)?;
    }
    if let Some(dir) = out {
        write_csv(&dir.join(format!("{name}_summary.csv")), records.iter().cloned())?;
    }
    let checked = rows.iter().filter(|r| r.pass.is_some()).count();
    let failed = rows.iter().filter(|r| r.pass == Some(false)).count();
    eprintln!("{name}: {} rows, {checked} checked, {failed} failed", rows.len());
    Ok(harness::all_pass(&rows))
}

fn write_csv<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn spectrum(
    domain: &Domain,
    bc: Bc,
    alpha: Option<f64>,
    levels: u32,
    count: usize,
    vertices: usize,
    export: Option<&Path>,
) -> Result<SpectrumReport> {
    if count == 0 {
        bail!("--count must be positive");
    }
    let beta = alpha.map(|a| a / domain.perimeter());
    match (domain.shape(), bc) {
        (Shape::Disk { radius }, Bc::Robin | Bc::Neumann) => {
            let s = disk_spectrum(beta.unwrap() * radius, count)?;
            Ok(SpectrumReport::from_spectrum(
                alpha,
                bc.name(),
                &s,
                1.0 / (radius * radius),
            ))
        }
        (Shape::Disk { radius }, Bc::Dirichlet) => {
            let s = disk_dirichlet_spectrum(count)?;
            Ok(SpectrumReport::from_spectrum(
                None,
                bc.name(),
                &s,
                1.0 / (radius * radius),
            ))
        }
        (Shape::Disk { radius }, Bc::Steklov) => {
            let mut eigenvalues = vec![EigenvalueEntry {
                lambda: 0.0,
                kappa: Some(0),
                mult: 1,
                branch: None,
                error: None,
            }];
            let mut k = 1;
            while eigenvalues.iter().map(|e| e.mult as usize).sum::<usize>() < count {
                eigenvalues.push(EigenvalueEntry {
                    lambda: k as f64 / radius,
                    kappa: Some(k),
                    mult: 2,
                    branch: None,
                    error: None,
                });
                k += 1;
            }
            Ok(SpectrumReport {
                alpha: None,
                bc: bc.name().into(),
                domain: None,
                eigenvalues,
            })
        }
        (Shape::Annulus { inner }, Bc::Steklov) => {
            let s = annulus_steklov(*inner, count)?;
            Ok(SpectrumReport::from_spectrum(None, bc.name(), &s, 1.0))
        }
        (Shape::Annulus { .. }, _) => bail!("annuli support only --bc steklov"),
        (Shape::Rectangle { a, b }, Bc::Robin | Bc::Neumann) => {
            let s = rectangle_spectrum(*a, *b, beta.unwrap(), count)?;
            Ok(SpectrumReport::from_spectrum(alpha, bc.name(), &s, 1.0))
        }
        (_, Bc::Dirichlet) => bail!("Dirichlet spectra are available for disks only"),
        _ => fem_spectrum(domain, bc, alpha, beta, levels, count, vertices, export),
    }
}

#[allow(clippy::too_many_arguments)]
fn fem_spectrum(
    domain: &Domain,
    bc: Bc,
    alpha: Option<f64>,
    beta: Option<f64>,
    levels: u32,
    count: usize,
    vertices: usize,
    export: Option<&Path>,
) -> Result<SpectrumReport> {
    if count > MAX_EIGS {
        bail!("FEM solves return at most {MAX_EIGS} eigenvalues");
    }
    let poly = polygonize(domain, vertices)?;
    let level_list: Vec<u32> = if levels == 0 { vec![0] } else { vec![levels - 1, levels] };
    let res = match bc {
        Bc::Steklov => steklov_study(&poly, count, &level_list)?,
        _ => robin_study(&poly, beta.unwrap(), count, &level_list)?,
    };
    if let Some(dir) = export {
        export_fem(dir, &mesh_convex_polygon(&poly, levels)?, &res, &level_list)?;
    }
    let eigenvalues = (0..res.eigenvalues.len())
        .map(|i| {
            let (lambda, error) = match &res.extrapolated {
                Some(e) => (e[i].value, Some(e[i].error)),
                None => (res.eigenvalues[i], None),
            };
            EigenvalueEntry {
                lambda,
                kappa: None,
                mult: 1,
                branch: None,
                error,
            }
        })
        .collect();
    Ok(SpectrumReport {
        alpha,
        bc: bc.name().into(),
        domain: None,
        eigenvalues,
    })
}

fn export_fem(dir: &Path, mesh: &Mesh, res: &EigResult, levels: &[u32]) -> Result<()> {
    #[derive(Serialize)]
    struct Node {
        id: usize,
        x: f64,
        y: f64,
    }
    #[derive(Serialize)]
    struct Triangle {
        a: usize,
        b: usize,
        c: usize,
    }
    write_csv(
        &dir.join("mesh_nodes.csv"),
        mesh.nodes()
            .iter()
            .enumerate()
            .map(|(id, p)| Node { id, x: p[0], y: p[1] }),
    )?;
    write_csv(
        &dir.join("mesh_triangles.csv"),
        mesh.triangles().iter().map(|t| Triangle {
            a: t[0],
            b: t[1],
            c: t[2],
        }),
    )?;
    let mut w = csv::Writer::from_path(dir.join("eigenvectors.csv"))?;
    let mut header = vec!["x".to_string(), "y".to_string()];
    header.extend((1..=res.eigenvectors.len()).map(|k| format!("u{k}")));
    w.write_record(&header)?;
    for (i, p) in mesh.nodes().iter().enumerate() {
        let mut rec = vec![p[0].to_string(), p[1].to_string()];
        rec.extend(res.eigenvectors.iter().map(|v| v[i].to_string()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    let diagnostics = serde_json::json!({
        "levels": levels,
        "nodes": mesh.n_nodes(),
        "eigenvalues": res.eigenvalues,
        "residuals": res.residuals,
        "extrapolation_errors": res.extrapolated.as_ref().map(|e| e.iter().map(|x| x.error).collect::<Vec<_>>()),
    });
    fs::write(
        dir.join("diagnostics.json"),
        serde_json::to_string_pretty(&diagnostics)?,
    )?;
    Ok(())
}
