//! P1 finite elements for Robin and Steklov eigenproblems on triangulated
//! convex polygons, with Richardson extrapolation over uniform refinements.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{bail, Result};
use crate::geometry::{mesh_convex_polygon, signed_area, ConvexPolygon, Mesh};
use crate::linalg::{dense_generalized_eigs, norm2, subspace_eigs, CsrMatrix, EnvelopeCholesky, SubspaceOptions};
#[allow(unused_imports)]
use num_traits::Float;

/// Largest mesh accepted by the eigensolvers.
pub const MAX_NODES: usize = 40_000;
/// Largest number of eigenpairs per solve.
pub const MAX_EIGS: usize = 10;
/// Meshes up to this size are solved densely.
pub const DENSE_LIMIT: usize = 400;
/// Boundaries up to this size use the explicit Schur complement.
pub const SCHUR_DENSE_LIMIT: usize = 600;
/// Initial bracket multiple of `2π` for the Steklov root search.
pub const STEKLOV_BRACKET: f64 = 8.0;

/// Stiffness, mass and boundary-mass matrices of a mesh.
#[derive(Debug, Clone)]
pub struct AssembledForms {
    pub stiffness: CsrMatrix,
    pub mass: CsrMatrix,
    pub boundary_mass: CsrMatrix,
    pub boundary_nodes: Vec<usize>,
    /// Mesh node coordinates, kept for start vectors and export.
    pub nodes: Vec<[f64; 2]>,
    pub level: u32,
    pub area: f64,
    pub perimeter: f64,
}

impl AssembledForms {
    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    /// `K + βB`.
    pub fn robin_operator(&self, beta: f64) -> CsrMatrix {
        CsrMatrix::combination(&[(1.0, &self.stiffness), (beta, &self.boundary_mass)])
    }
}

/// Exact P1 element matrices summed over the mesh.
pub fn assemble(mesh: &Mesh) -> Result<AssembledForms> {
    let n = mesh.n_nodes();
    let p = mesh.nodes();
    let mut kt = Vec::with_capacity(9 * mesh.triangles().len());
    let mut mt = Vec::with_capacity(9 * mesh.triangles().len());
    let mut area = 0.0;
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let a = signed_area(p[tri[0]], p[tri[1]], p[tri[2]]);
        if !(a > 0.0) {
            bail!(Geometry, "degenerate triangle {t} (area {a})");
        }
        area += a;
        let mut b = [0.0; 3];
        let mut c = [0.0; 3];
        for i in 0..3 {
            let (j, k) = (tri[(i + 1) % 3], tri[(i + 2) % 3]);
            b[i] = p[j][1] - p[k][1];
            c[i] = p[k][0] - p[j][0];
        }
        for i in 0..3 {
            for j in 0..3 {
                kt.push((tri[i], tri[j], (b[i] * b[j] + c[i] * c[j]) / (4.0 * a)));
                mt.push((tri[i], tri[j], if i == j { a / 6.0 } else { a / 12.0 }));
            }
        }
    }
    let mut bt = Vec::with_capacity(4 * mesh.boundary_edges().len());
    let mut perimeter = 0.0;
    for &[i, j] in mesh.boundary_edges() {
        let len = (p[j][0] - p[i][0]).hypot(p[j][1] - p[i][1]);
        perimeter += len;
        bt.push((i, i, len / 3.0));
        bt.push((j, j, len / 3.0));
        bt.push((i, j, len / 6.0));
        bt.push((j, i, len / 6.0));
    }
    Ok(AssembledForms {
        stiffness: CsrMatrix::from_triplets(n, kt),
        mass: CsrMatrix::from_triplets(n, mt),
        boundary_mass: CsrMatrix::from_triplets(n, bt),
        boundary_nodes: mesh.boundary_nodes(),
        nodes: p.to_vec(),
        level: mesh.level(),
        area,
        perimeter,
    })
}

/// Continuum estimate from a refinement study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolated {
    pub value: f64,
    pub error: f64,
}

/// Eigenpairs of one discrete problem.
#[derive(Debug, Clone, PartialEq)]
pub struct EigResult {
    pub eigenvalues: Vec<f64>,
    /// Nodal values, normalized in the mass (Robin) or boundary-mass
    /// (Steklov) inner product.
    pub eigenvectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub level: u32,
    pub extrapolated: Option<Vec<Extrapolated>>,
}

/// Monomials in centred, rescaled coordinates, used as start vectors.
fn start_block(nodes: &[[f64; 2]], count: usize) -> Vec<Vec<f64>> {
    let n = nodes.len() as f64;
    let cx = nodes.iter().map(|p| p[0]).sum::<f64>() / n;
    let cy = nodes.iter().map(|p| p[1]).sum::<f64>() / n;
    let s = nodes
        .iter()
        .map(|p| (p[0] - cx).abs().max((p[1] - cy).abs()))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut out = Vec::with_capacity(count);
    'outer: for deg in 0.. {
        for i in 0..=deg {
            if out.len() == count {
                break 'outer;
            }
            let j = deg - i;
            out.push(
                nodes
                    .iter()
                    .map(|p| ((p[0] - cx) / s).powi(i) * ((p[1] - cy) / s).powi(j))
                    .collect(),
            );
        }
    }
    out
}

fn check_size(n: usize, k: usize) -> Result<()> {
    if n > MAX_NODES {
        bail!(Domain, "mesh has {n} nodes, above the cap of {MAX_NODES}");
    }
    if k == 0 || k > MAX_EIGS {
        bail!(Domain, "requested {k} eigenpairs, allowed 1..={MAX_EIGS}");
    }
    if k >= n {
        bail!(Domain, "requested {k} eigenpairs from {n} nodes");
    }
    Ok(())
}

/// Smallest `k` eigenpairs of `(K + βB) u = λ M u` on a mesh.
pub fn robin_eigs(mesh: &Mesh, beta: f64, k: usize) -> Result<EigResult> {
    robin_eigs_forms(&assemble(mesh)?, beta, k)
}

/// [`robin_eigs`] on pre-assembled forms.
pub fn robin_eigs_forms(forms: &AssembledForms, beta: f64, k: usize) -> Result<EigResult> {
    let n = forms.n();
    check_size(n, k)?;
    if !beta.is_finite() {
        bail!(Domain, "Robin parameter must be finite");
    }
    let a = forms.robin_operator(beta);
    let (values, vectors) = if n <= DENSE_LIMIT {
        dense_generalized_eigs(&a.to_dense(), &forms.mass.to_dense(), k)?
    } else {
        let inv_area = 1.0 / forms.area;
        let shift = 2.0 * (beta * forms.perimeter * inv_area).min(0.0) - inv_area;
        let block = (2 * k + 4).min(n);
        let r = subspace_eigs(
            &a,
            &forms.mass,
            k,
            shift,
            shift.abs() + inv_area,
            start_block(&forms.nodes, block),
            SubspaceOptions::default(),
        )?;
        (r.values, r.vectors)
    };
    let residuals = residual_norms(&a, &forms.mass, &values, &vectors);
    let worst = residuals.iter().copied().fold(0.0, f64::max);
    if worst > 1e-8 {
        bail!(NoConvergence, "Robin residual {worst} above 1e-8");
    }
    Ok(EigResult {
        eigenvalues: values,
        eigenvectors: vectors,
        residuals,
        level: forms.level,
        extrapolated: None,
    })
}

fn residual_norms(a: &CsrMatrix, w: &CsrMatrix, values: &[f64], vectors: &[Vec<f64>]) -> Vec<f64> {
    values
        .iter()
        .zip(vectors)
        .map(|(&l, u)| {
            let au = a.mul_vec(u);
            let wu = w.mul_vec(u);
            norm2(&au.iter().zip(&wu).map(|(x, y)| x - l * y).collect::<Vec<_>>())
        })
        .collect()
}

/// Smallest `k` Steklov eigenpairs `K u = σ B u` (σ₀ = 0 included), from the
/// boundary Schur complement `S = K_bb − K_bi K_ii⁻¹ K_ib` against `B_bb`.
pub fn steklov_schur(mesh: &Mesh, k: usize) -> Result<EigResult> {
    steklov_schur_forms(&assemble(mesh)?, k)
}

/// [`steklov_schur`] on pre-assembled forms. Long boundaries use block
/// inverse iteration on the full pencil `(K, B)`, whose finite eigenvalues
/// are those of `(S, B_bb)`.
pub fn steklov_schur_forms(forms: &AssembledForms, k: usize) -> Result<EigResult> {
    if forms.boundary_nodes.len() <= SCHUR_DENSE_LIMIT {
        steklov_schur_dense(forms, k)
    } else {
        steklov_pencil_iterative(forms, k)
    }
}

/// Steklov eigenpairs from the explicitly formed Schur complement.
pub fn steklov_schur_dense(forms: &AssembledForms, k: usize) -> Result<EigResult> {
    let n = forms.n();
    let bnodes = &forms.boundary_nodes;
    let nb = bnodes.len();
    check_size(nb, k)?;
    let kmat = &forms.stiffness;
    let bmat = &forms.boundary_mass;
    let (values, vectors) = {
        let mut is_b = vec![false; n];
        for &i in bnodes {
            is_b[i] = true;
        }
        let interior: Vec<usize> = (0..n).filter(|&i| !is_b[i]).collect();
        let ni = interior.len();
        let mut pos_i = vec![usize::MAX; n];
        for (q, &i) in interior.iter().enumerate() {
            pos_i[i] = q;
        }
        let mut s = kmat.submatrix(bnodes).to_dense();
        // columns of K_ib, one per boundary node
        let mut kib = vec![Vec::new(); nb];
        for (c, &bj) in bnodes.iter().enumerate() {
            kib[c] = kmat
                .row(bj)
                .filter(|&(j, _)| !is_b[j])
                .map(|(j, v)| (pos_i[j], v))
                .collect();
        }
        let mut harm: Vec<Vec<f64>> = Vec::new();
        if ni > 0 {
            let kii = kmat.submatrix(&interior);
            let chol = EnvelopeCholesky::factor(&kii, &crate::linalg::rcm_ordering(&kii))
                .map_err(|_| crate::Error::Factorization("interior stiffness is singular".into()))?;
            harm = Vec::with_capacity(nb);
            for col in &kib {
                let mut rhs = vec![0.0; ni];
                for &(q, v) in col {
                    rhs[q] = v;
                }
                harm.push(chol.solve(&rhs));
            }
            for r in 0..nb {
                for c in 0..nb {
                    let dot: f64 = kib[r].iter().map(|&(q, v)| v * harm[c][q]).sum();
                    s[(r, c)] -= dot;
                }
            }
        }
        let s = 0.5 * (&s + s.transpose());
        let bbb: DMatrix<f64> = bmat.submatrix(bnodes).to_dense();
        let (vals, bvecs) = dense_generalized_eigs(&s, &bbb, k)?;
        let vecs = bvecs
            .iter()
            .map(|ub| {
                let mut u = vec![0.0; n];
                for (c, &bj) in bnodes.iter().enumerate() {
                    u[bj] = ub[c];
                }
                for (c, h) in harm.iter().enumerate() {
                    for (q, &i) in interior.iter().enumerate() {
                        u[i] -= h[q] * ub[c];
                    }
                }
                u
            })
            .collect();
        (vals, vecs)
    };
    steklov_result(forms, values, vectors)
}

/// Steklov eigenpairs by block inverse iteration on `(K + τB)⁻¹ B`.
pub fn steklov_pencil_iterative(forms: &AssembledForms, k: usize) -> Result<EigResult> {
    let nb = forms.boundary_nodes.len();
    check_size(nb, k)?;
    let kmat = &forms.stiffness;
    let bmat = &forms.boundary_mass;
    let (values, vectors) = {
        let tau = 2.0 * PI / forms.perimeter;
        let block = (2 * k + 4).min(nb);
        let r = subspace_eigs(
            kmat,
            bmat,
            k,
            -tau,
            tau,
            start_block(&forms.nodes, block),
            SubspaceOptions::default(),
        )?;
        (r.values, r.vectors)
    };
    steklov_result(forms, values, vectors)
}

fn steklov_result(forms: &AssembledForms, values: Vec<f64>, vectors: Vec<Vec<f64>>) -> Result<EigResult> {
    let residuals = residual_norms(&forms.stiffness, &forms.boundary_mass, &values, &vectors);
    let worst = residuals.iter().copied().fold(0.0, f64::max);
    if worst > 1e-8 {
        bail!(NoConvergence, "Steklov residual {worst} above 1e-8");
    }
    Ok(EigResult {
        eigenvalues: values,
        eigenvectors: vectors,
        residuals,
        level: forms.level,
        extrapolated: None,
    })
}

/// First nonzero Steklov eigenvalue found as `−α̃/L`, where `α̃ < 0` is the
/// greatest parameter with `λ₂(Ω; α̃/L) = 0`.
pub fn steklov_via_robin(mesh: &Mesh) -> Result<f64> {
    steklov_via_robin_forms(&assemble(mesh)?)
}

/// [`steklov_via_robin`] on pre-assembled forms.
pub fn steklov_via_robin_forms(forms: &AssembledForms) -> Result<f64> {
    let l = forms.perimeter;
    let lambda2 = |alpha: f64| robin_eigs_forms(forms, alpha / l, 2).map(|r| r.eigenvalues[1]);
    let mut hi = 0.0;
    let mut f_hi = lambda2(hi)?;
    if !(f_hi > 0.0) {
        bail!(Bracket, "λ₂ at α̃ = 0 is {f_hi}, expected positive");
    }
    let mut c = STEKLOV_BRACKET;
    let mut lo = -2.0 * PI * c;
    let mut f_lo = lambda2(lo)?;
    while f_lo >= 0.0 {
        if c > 1e4 {
            bail!(Bracket, "λ₂ stays nonnegative down to α̃ = {lo}");
        }
        // shrink the bracket from above while widening below
        hi = lo;
        f_hi = f_lo;
        c *= 2.0;
        lo = -2.0 * PI * c;
        f_lo = lambda2(lo)?;
    }
    // Illinois false position
    let mut side = 0i32;
    for _ in 0..200 {
        let x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        let x = if x > lo && x < hi { x } else { 0.5 * (lo + hi) };
        let fx = lambda2(x)?;
        if fx == 0.0 {
            return Ok(-x / l);
        }
        if fx > 0.0 {
            hi = x;
            f_hi = fx;
            if side == 1 {
                f_lo *= 0.5;
            }
            side = 1;
        } else {
            lo = x;
            f_lo = fx;
            if side == -1 {
                f_hi *= 0.5;
            }
            side = -1;
        }
        if hi - lo <= 1e-13 * lo.abs() {
            break;
        }
    }
    Ok(-0.5 * (lo + hi) / l)
}

/// Extrapolation from `(h, v)` pairs at mesh-size ratio 2, assuming an
/// `O(h²)` leading error.
pub fn richardson(values: &[(f64, f64)]) -> Result<Extrapolated> {
    if values.len() < 2 {
        bail!(Domain, "need at least two refinement levels");
    }
    for w in values.windows(2) {
        let ratio = w[0].0 / w[1].0;
        if !((ratio - 2.0).abs() <= 1e-9 * 2.0) {
            bail!(Domain, "mesh sizes must halve between levels (ratio {ratio})");
        }
    }
    let n = values.len();
    let (vc, vf) = (values[n - 2].1, values[n - 1].1);
    let diff = vf - vc;
    let monotone = values.windows(3).all(|w| (w[1].1 - w[0].1) * (w[2].1 - w[1].1) >= 0.0);
    if !monotone {
        return Ok(Extrapolated {
            value: vf,
            error: diff.abs(),
        });
    }
    Ok(Extrapolated {
        value: vf + diff / 3.0,
        error: diff.abs() / 3.0,
    })
}

/// Mesh size parameter of refinement level `level`.
pub fn level_h(level: u32) -> f64 {
    0.5f64.powi(level as i32)
}

/// Robin eigenvalues on a polygon at several refinement levels, extrapolated.
/// The returned result carries the finest level's eigenpairs.
pub fn robin_study(poly: &ConvexPolygon, beta: f64, k: usize, levels: &[u32]) -> Result<EigResult> {
    study(levels, |level| {
        let forms = assemble(&mesh_convex_polygon(poly, level)?)?;
        robin_eigs_forms(&forms, beta, k)
    })
}

/// Steklov eigenvalues on a polygon at several levels, extrapolated.
pub fn steklov_study(poly: &ConvexPolygon, k: usize, levels: &[u32]) -> Result<EigResult> {
    study(levels, |level| {
        let forms = assemble(&mesh_convex_polygon(poly, level)?)?;
        steklov_schur_forms(&forms, k)
    })
}

/// Runs `solve` on each level and attaches Richardson estimates per
/// eigenvalue index to the finest result.
pub fn study<F>(levels: &[u32], mut solve: F) -> Result<EigResult>
where
    F: FnMut(u32) -> Result<EigResult>,
{
    if levels.is_empty() {
        bail!(Domain, "no refinement levels given");
    }
    let runs: Vec<EigResult> = levels.iter().map(|&l| solve(l)).collect::<Result<_>>()?;
    let mut finest = runs.last().unwrap().clone();
    if runs.len() >= 2 {
        let k = finest.eigenvalues.len();
        let ext = (0..k)
            .map(|i| {
                let pts: Vec<(f64, f64)> = levels
                    .iter()
                    .zip(&runs)
                    .map(|(&l, r)| (level_h(l), r.eigenvalues[i]))
                    .collect();
                richardson(&pts)
            })
            .collect::<Result<Vec<_>>>()?;
        finest.extrapolated = Some(ext);
    }
    Ok(finest)
}
