use std::f64::consts::PI;

use planar_spectra::fem::*;
use planar_spectra::geometry::*;
use planar_spectra::linalg::CsrMatrix;
use planar_spectra::rectangle::rectangle_spectrum;
use planar_spectra::specfun::{bessel_zero, BesselZero};

fn square() -> ConvexPolygon {
    ConvexPolygon::rectangle(1.0, 1.0).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn assembly_identities() {
    let tri = Mesh::from_parts(
        vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
        vec![[0, 1, 2]],
        vec![[0, 1], [1, 2], [2, 0]],
        0,
    )
    .unwrap();
    let f = assemble(&tri).unwrap();
    assert!((f.mass.total() - 0.5).abs() < 1e-15);

    let f = assemble(&mesh_convex_polygon(&square(), 0).unwrap()).unwrap();
    assert!((f.boundary_mass.total() - 4.0).abs() < 1e-14);

    for (poly, level) in [(square(), 3u32), (ConvexPolygon::regular(7, 1.3).unwrap(), 2)] {
        let mesh = mesh_convex_polygon(&poly, level).unwrap();
        let f = assemble(&mesh).unwrap();
        let ones = vec![1.0; f.n()];
        assert!(f.stiffness.mul_vec(&ones).iter().all(|v| v.abs() <= 1e-12));
        assert!((f.mass.total() - poly.area()).abs() <= 1e-10 * poly.area());
        assert!((f.boundary_mass.total() - poly.perimeter()).abs() <= 1e-10 * poly.perimeter());
        assert!(f.stiffness.asymmetry() == 0.0 && f.mass.asymmetry() == 0.0);
        let bset = f.boundary_nodes.clone();
        for i in 0..f.n() {
            if bset.binary_search(&i).is_err() {
                assert!(f.boundary_mass.row(i).all(|(_, v)| v == 0.0));
            }
        }
    }
    let bad = Mesh::from_parts(vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]], vec![[0, 1, 2]], vec![], 0);
    assert!(bad.is_err());
}

#[test]
fn square_matches_tensor_solve() {
    for beta in [-1.0, 0.0, 1.0] {
        let r = robin_study(&square(), beta, 4, &[3, 4]).unwrap();
        let exact = rectangle_spectrum(1.0, 1.0, beta, 4).unwrap().values();
        for (e, x) in r.extrapolated.as_ref().unwrap().iter().zip(&exact) {
            if x.abs() < 1e-12 {
                assert!(e.value.abs() < 1e-9);
            } else {
                assert!(rel(e.value, *x) <= 5e-3, "β={beta}: {} vs {x}", e.value);
            }
        }
        // extrapolation beats the fine level
        let fine = r.eigenvalues[1];
        let ext = r.extrapolated.as_ref().unwrap()[1].value;
        assert!((ext - exact[1]).abs() < (fine - exact[1]).abs());
    }
}

#[test]
fn polygon_disk_neumann() {
    let p = ConvexPolygon::regular(64, 1.0).unwrap();
    let r = robin_study(&p, 0.0, 3, &[2, 3]).unwrap();
    let j = bessel_zero(BesselZero::J11Prime);
    let mu1_a = r.extrapolated.unwrap()[1].value * p.area();
    assert!(rel(mu1_a, PI * j * j) <= 0.01);
}

#[test]
fn dense_and_iterative_paths_agree() {
    let poly = ConvexPolygon::regular(5, 1.0).unwrap();
    // 381 nodes: dense; the same forms are pushed through the iterative
    // solver by a slightly larger mesh check below
    let mesh = mesh_convex_polygon(&poly, 3).unwrap();
    let f = assemble(&mesh).unwrap();
    assert!(f.n() <= DENSE_LIMIT);
    let dense = robin_eigs_forms(&f, -0.7, 5).unwrap();
    let start: Vec<Vec<f64>> = (0..14)
        .map(|d| f.nodes.iter().map(|p| p[0].powi(d % 4) * p[1].powi(d / 4)).collect())
        .collect();
    let a = f.robin_operator(-0.7);
    let it = planar_spectra::linalg::subspace_eigs(&a, &f.mass, 5, -10.0, 10.0, start, Default::default()).unwrap();
    for (x, y) in dense.eigenvalues.iter().zip(&it.values) {
        assert!((x - y).abs() < 1e-9 * x.abs().max(1.0), "{x} vs {y}");
    }
}

#[test]
fn m_orthogonality_and_residuals() {
    for (poly, level) in [(square(), 4u32), (ConvexPolygon::regular(6, 1.0).unwrap(), 4)] {
        let f = assemble(&mesh_convex_polygon(&poly, level).unwrap()).unwrap();
        for beta in [-2.0, 0.0, 3.0] {
            let r = robin_eigs_forms(&f, beta, 6).unwrap();
            for i in 0..6 {
                assert!(r.residuals[i] <= 1e-8);
                for j in 0..6 {
                    let g = f.mass.form(&r.eigenvectors[i], &r.eigenvectors[j]);
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((g - want).abs() <= 1e-8, "({i},{j}) = {g}");
                }
            }
        }
    }
}

#[test]
fn monotone_in_beta() {
    let f = assemble(&mesh_convex_polygon(&ConvexPolygon::regular(5, 1.0).unwrap(), 3).unwrap()).unwrap();
    let mut prev = vec![f64::NEG_INFINITY; 4];
    for i in 0..=20 {
        let beta = -4.0 + 0.5 * i as f64;
        let r = robin_eigs_forms(&f, beta, 4).unwrap();
        for (k, (now, before)) in r.eigenvalues.iter().zip(&prev).enumerate() {
            assert!(now > before, "k={k} β={beta}");
        }
        prev = r.eigenvalues.clone();
    }
}

#[test]
fn scale_invariance_at_matrix_level() {
    let mesh = mesh_convex_polygon(&ConvexPolygon::regular(6, 1.0).unwrap(), 4).unwrap();
    let f = assemble(&mesh).unwrap();
    for t in [0.5, 2.0] {
        let g = assemble(&mesh.scaled(t)).unwrap();
        let close = |a: &CsrMatrix, b: &CsrMatrix, s: f64| {
            (0..a.n()).all(|i| {
                a.row(i)
                    .all(|(j, v)| (b.get(i, j) - s * v).abs() <= 1e-12 * v.abs().max(1e-12))
            })
        };
        assert!(close(&f.stiffness, &g.stiffness, 1.0));
        assert!(close(&f.mass, &g.mass, t * t));
        assert!(close(&f.boundary_mass, &g.boundary_mass, t));
        for beta in [-1.0, 0.5] {
            let a = robin_eigs_forms(&f, beta, 4).unwrap().eigenvalues;
            let b = robin_eigs_forms(&g, beta / t, 4).unwrap().eigenvalues;
            for (x, y) in a.iter().zip(&b) {
                assert!(
                    (y - x / (t * t)).abs() <= 1e-10 * x.abs().max(1.0),
                    "t={t} β={beta}: {x} {y}"
                );
            }
        }
    }
}

#[test]
fn steklov_checks() {
    let p64 = ConvexPolygon::regular(64, 1.0).unwrap();
    let f = assemble(&mesh_convex_polygon(&p64, 3).unwrap()).unwrap();
    let s = steklov_schur_forms(&f, 3).unwrap();
    assert!(s.eigenvalues[0].abs() <= 1e-9);
    let c = s.eigenvectors[0][0];
    assert!(s.eigenvectors[0].iter().all(|v| (v - c).abs() <= 1e-8 * c.abs()));
    assert!(rel(s.eigenvalues[1] * p64.perimeter(), 2.0 * PI) <= 0.015);
    let via = steklov_via_robin_forms(&f).unwrap();
    assert!(rel(via, s.eigenvalues[1]) <= 1e-3);
    // the root condition itself
    let l2 = robin_eigs_forms(&f, -via, 2).unwrap().eigenvalues[1];
    assert!(l2.abs() <= 1e-8);

    let fs = assemble(&mesh_convex_polygon(&square(), 4).unwrap()).unwrap();
    let ss = steklov_schur_forms(&fs, 2).unwrap();
    assert!(ss.eigenvalues[1] * 4.0 < 2.0 * PI);
    let vs = steklov_via_robin_forms(&fs).unwrap();
    assert!(rel(vs, ss.eigenvalues[1]) <= 1e-3);
}

#[test]
fn steklov_paths_agree() {
    for (poly, level) in [(ConvexPolygon::regular(40, 1.0).unwrap(), 2u32), (square(), 4)] {
        let f = assemble(&mesh_convex_polygon(&poly, level).unwrap()).unwrap();
        let dense = steklov_schur_dense(&f, 5).unwrap();
        let iter = steklov_pencil_iterative(&f, 5).unwrap();
        for (a, b) in dense.eigenvalues.iter().zip(&iter.eigenvalues).skip(1) {
            assert!(rel(*a, *b) <= 1e-10, "{a} vs {b}");
        }
        for r in dense.residuals.iter().chain(&iter.residuals) {
            assert!(*r <= 1e-8);
        }
    }
}

#[test]
fn size_limits() {
    let f = assemble(&mesh_convex_polygon(&square(), 1).unwrap()).unwrap();
    assert!(robin_eigs_forms(&f, 0.0, 0).is_err());
    assert!(robin_eigs_forms(&f, 0.0, 11).is_err());
    assert!(robin_eigs_forms(&f, f64::NAN, 2).is_err());
}
