//! Planar domains, polygonization of curved boundaries, and P1 meshes of
//! convex polygons.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::conformal::{map_area, map_perimeter, PowerSeriesMap};
use crate::error::{bail, Result};
#[allow(unused_imports)]
use num_traits::Float;

pub type Point = [f64; 2];

/// Maximum number of uniform refinements accepted by the mesher.
pub const MAX_LEVELS: u32 = 6;

/// A strictly convex polygon with counterclockwise vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

fn cross(a: Point, b: Point) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

fn norm(a: Point) -> f64 {
    a[0].hypot(a[1])
}

impl ConvexPolygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            bail!(Geometry, "a polygon needs at least 3 vertices (got {n})");
        }
        if vertices.iter().any(|v| !v[0].is_finite() || !v[1].is_finite()) {
            bail!(Geometry, "non-finite vertex");
        }
        let mut turning = 0.0;
        for i in 0..n {
            let e1 = sub(vertices[(i + 1) % n], vertices[i]);
            let e2 = sub(vertices[(i + 2) % n], vertices[(i + 1) % n]);
            let (l1, l2) = (norm(e1), norm(e2));
            if l1 == 0.0 || l2 == 0.0 {
                bail!(Geometry, "repeated vertex at index {}", (i + 1) % n);
            }
            let c = cross(e1, e2);
            if c <= 1e-12 * l1 * l2 {
                bail!(
                    Geometry,
                    "not strictly convex and counterclockwise at vertex {}",
                    (i + 1) % n
                );
            }
            turning += c.atan2(e1[0] * e2[0] + e1[1] * e2[1]);
        }
        if (turning - 2.0 * PI).abs() > 1e-9 {
            bail!(Geometry, "boundary winds {turning} rad instead of 2π");
        }
        Ok(Self { vertices })
    }

    /// Regular `n`-gon inscribed in the circle of radius `r` about the origin,
    /// with a vertex on the positive x-axis.
    pub fn regular(n: usize, r: f64) -> Result<Self> {
        Self::new(
            (0..n)
                .map(|k| {
                    let t = 2.0 * PI * k as f64 / n as f64;
                    [r * t.cos(), r * t.sin()]
                })
                .collect(),
        )
    }

    /// Axis-aligned `a × b` rectangle with a corner at the origin.
    pub fn rectangle(a: f64, b: f64) -> Result<Self> {
        Self::new(alloc::vec![[0.0, 0.0], [a, 0.0], [a, b], [0.0, b]])
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Shoelace area.
    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        0.5 * (0..n)
            .map(|i| cross(self.vertices[i], self.vertices[(i + 1) % n]))
            .sum::<f64>()
    }

    pub fn perimeter(&self) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| norm(sub(self.vertices[(i + 1) % n], self.vertices[i])))
            .sum()
    }

    /// Area centroid.
    pub fn centroid(&self) -> Point {
        let n = self.vertices.len();
        let (mut cx, mut cy, mut a2) = (0.0, 0.0, 0.0);
        for i in 0..n {
            let p = self.vertices[i];
            let q = self.vertices[(i + 1) % n];
            let c = cross(p, q);
            a2 += c;
            cx += (p[0] + q[0]) * c;
            cy += (p[1] + q[1]) * c;
        }
        [cx / (3.0 * a2), cy / (3.0 * a2)]
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self {
            vertices: self.vertices.iter().map(|v| [t * v[0], t * v[1]]).collect(),
        }
    }

    /// Distance from `p` to the nearest edge.
    pub fn distance_to_boundary(&self, p: Point) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| segment_distance(p, self.vertices[i], self.vertices[(i + 1) % n]))
            .fold(f64::INFINITY, f64::min)
    }
}

fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = sub(b, a);
    let ap = sub(p, a);
    let t = ((ap[0] * ab[0] + ap[1] * ab[1]) / (ab[0] * ab[0] + ab[1] * ab[1])).clamp(0.0, 1.0);
    norm([ap[0] - t * ab[0], ap[1] - t * ab[1]])
}

/// Geometric description of a planar domain.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// Disk of the given radius about the origin.
    Disk {
        radius: f64,
    },
    /// The annulus `inner < r < 1`.
    Annulus {
        inner: f64,
    },
    Rectangle {
        a: f64,
        b: f64,
    },
    Polygon(ConvexPolygon),
    /// Image of the unit disk under a power-series map.
    Conformal(PowerSeriesMap),
}

/// A domain with its area and perimeter.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    shape: Shape,
    area: f64,
    perimeter: f64,
}

impl Domain {
    pub fn new(shape: Shape) -> Result<Self> {
        let (area, perimeter) = match &shape {
            Shape::Disk { radius } => {
                if !(*radius > 0.0) {
                    bail!(Geometry, "disk radius must be positive");
                }
                (PI * radius * radius, 2.0 * PI * radius)
            }
            Shape::Annulus { inner } => {
                if !(*inner > 0.0 && *inner < 1.0) {
                    bail!(Geometry, "annulus inner radius must lie in (0, 1)");
                }
                (PI * (1.0 - inner * inner), 2.0 * PI * (1.0 + inner))
            }
            Shape::Rectangle { a, b } => {
                if !(*a > 0.0 && *b > 0.0) {
                    bail!(Geometry, "rectangle sides must be positive");
                }
                (a * b, 2.0 * (a + b))
            }
            Shape::Polygon(p) => (p.area(), p.perimeter()),
            Shape::Conformal(f) => (map_area(f), map_perimeter(f)),
        };
        Ok(Self { shape, area, perimeter })
    }

    pub fn disk(radius: f64) -> Result<Self> {
        Self::new(Shape::Disk { radius })
    }

    pub fn annulus(inner: f64) -> Result<Self> {
        Self::new(Shape::Annulus { inner })
    }

    pub fn rectangle(a: f64, b: f64) -> Result<Self> {
        Self::new(Shape::Rectangle { a, b })
    }

    pub fn polygon(p: ConvexPolygon) -> Self {
        Self::new(Shape::Polygon(p)).expect("validated polygon")
    }

    pub fn conformal(f: PowerSeriesMap) -> Self {
        Self::new(Shape::Conformal(f)).expect("validated map")
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    /// Radius of the disk with the same area.
    pub fn area_radius(&self) -> f64 {
        (self.area / PI).sqrt()
    }

    /// The domain dilated by `t > 0`. Annuli (outer radius pinned to 1) are
    /// not rescalable.
    pub fn scaled(&self, t: f64) -> Result<Self> {
        if !(t > 0.0) {
            bail!(Domain, "scale factor must be positive");
        }
        let shape = match &self.shape {
            Shape::Disk { radius } => Shape::Disk { radius: t * radius },
            Shape::Annulus { .. } => bail!(Domain, "annuli are fixed to outer radius 1"),
            Shape::Rectangle { a, b } => Shape::Rectangle { a: t * a, b: t * b },
            Shape::Polygon(p) => Shape::Polygon(p.scaled(t)),
            Shape::Conformal(f) => Shape::Conformal(f.scaled(t)),
        };
        Self::new(shape)
    }

    /// The same shape rescaled to area `target`.
    pub fn with_area(&self, target: f64) -> Result<Self> {
        self.scaled((target / self.area).sqrt())
    }
}

/// `λ · A(Ω)`, the scale-invariant product when `λ` is computed with the
/// Robin parameter divided by the perimeter.
pub fn scaled_quantity(domain: &Domain, lambda: f64) -> f64 {
    lambda * domain.area()
}

/// Replaces a domain by a convex polygon. Disks and conformal images give
/// the `m`-gon with vertices on the true curve at equally spaced parameter
/// angles; rectangles and polygons are returned unchanged.
pub fn polygonize(domain: &Domain, m: usize) -> Result<ConvexPolygon> {
    if m < 3 {
        bail!(Domain, "need at least 3 vertices (got {m})");
    }
    match domain.shape() {
        Shape::Disk { radius } => ConvexPolygon::regular(m, *radius),
        Shape::Conformal(f) => ConvexPolygon::new(f.boundary_points(m))
            .map_err(|e| crate::Error::Geometry(alloc::format!("conformal image is not convex at m = {m}: {e}"))),
        Shape::Rectangle { a, b } => ConvexPolygon::rectangle(*a, *b),
        Shape::Polygon(p) => Ok(p.clone()),
        Shape::Annulus { .. } => bail!(Domain, "annuli are not simply connected"),
    }
}

/// P1 triangulation with its boundary loop.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    nodes: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    boundary_edges: Vec<[usize; 2]>,
    level: u32,
}

impl Mesh {
    /// Builds a mesh from raw parts, checking orientation and indices.
    pub fn from_parts(
        nodes: Vec<Point>,
        triangles: Vec<[usize; 3]>,
        boundary_edges: Vec<[usize; 2]>,
        level: u32,
    ) -> Result<Self> {
        let n = nodes.len();
        for (k, t) in triangles.iter().enumerate() {
            if t.iter().any(|&i| i >= n) {
                bail!(Geometry, "triangle {k} references a missing node");
            }
            let a = signed_area(nodes[t[0]], nodes[t[1]], nodes[t[2]]);
            if !(a > 0.0) {
                bail!(Geometry, "triangle {k} has non-positive signed area {a}");
            }
        }
        if boundary_edges.iter().any(|e| e[0] >= n || e[1] >= n) {
            bail!(Geometry, "boundary edge references a missing node");
        }
        Ok(Self {
            nodes,
            triangles,
            boundary_edges,
            level,
        })
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn boundary_edges(&self) -> &[[usize; 2]] {
        &self.boundary_edges
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Sorted, deduplicated boundary node indices.
    pub fn boundary_nodes(&self) -> Vec<usize> {
        let mut b: Vec<usize> = self.boundary_edges.iter().flat_map(|e| [e[0], e[1]]).collect();
        b.sort_unstable();
        b.dedup();
        b
    }

    pub fn triangle_area(&self, k: usize) -> f64 {
        let t = self.triangles[k];
        signed_area(self.nodes[t[0]], self.nodes[t[1]], self.nodes[t[2]])
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|k| self.triangle_area(k)).sum()
    }

    pub fn boundary_length(&self) -> f64 {
        self.boundary_edges
            .iter()
            .map(|e| norm(sub(self.nodes[e[1]], self.nodes[e[0]])))
            .sum()
    }

    /// Dilates every node by `t`.
    pub fn scaled(&self, t: f64) -> Self {
        Self {
            nodes: self.nodes.iter().map(|p| [t * p[0], t * p[1]]).collect(),
            triangles: self.triangles.clone(),
            boundary_edges: self.boundary_edges.clone(),
            level: self.level,
        }
    }

    /// True when the boundary edges chain head-to-tail into one closed loop
    /// visiting every boundary node once.
    pub fn boundary_is_single_loop(&self) -> bool {
        let m = self.boundary_edges.len();
        if m < 3 {
            return false;
        }
        let mut next = BTreeMap::new();
        for e in &self.boundary_edges {
            if next.insert(e[0], e[1]).is_some() {
                return false;
            }
        }
        let start = self.boundary_edges[0][0];
        let mut cur = start;
        for step in 0..m {
            match next.get(&cur) {
                Some(&n) => cur = n,
                None => return false,
            }
            if cur == start {
                return step + 1 == m;
            }
        }
        false
    }

    /// Midpoint (red) refinement: every triangle splits into four.
    pub fn refined(&self) -> Self {
        let mut nodes = self.nodes.clone();
        let mut mids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut midpoint = |a: usize, b: usize, nodes: &mut Vec<Point>| -> usize {
            let key = if a < b { (a, b) } else { (b, a) };
            *mids.entry(key).or_insert_with(|| {
                let (p, q) = (nodes[a], nodes[b]);
                nodes.push([0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])]);
                nodes.len() - 1
            })
        };
        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        for &[a, b, c] in &self.triangles {
            let ab = midpoint(a, b, &mut nodes);
            let bc = midpoint(b, c, &mut nodes);
            let ca = midpoint(c, a, &mut nodes);
            triangles.push([a, ab, ca]);
            triangles.push([ab, b, bc]);
            triangles.push([ca, bc, c]);
            triangles.push([ab, bc, ca]);
        }
        let mut boundary_edges = Vec::with_capacity(2 * self.boundary_edges.len());
        for &[a, b] in &self.boundary_edges {
            let m = midpoint(a, b, &mut nodes);
            boundary_edges.push([a, m]);
            boundary_edges.push([m, b]);
        }
        Self {
            nodes,
            triangles,
            boundary_edges,
            level: self.level + 1,
        }
    }
}

pub(crate) fn signed_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * cross(sub(b, a), sub(c, a))
}

/// Fan triangulation from the area centroid followed by `levels` red
/// refinements. Node count is `1 + V·2^L(2^L+1)/2` for a `V`-gon.
pub fn mesh_convex_polygon(poly: &ConvexPolygon, levels: u32) -> Result<Mesh> {
    if levels > MAX_LEVELS {
        bail!(Domain, "refinement level {levels} exceeds {MAX_LEVELS}");
    }
    let v = poly.len();
    let mut nodes = poly.vertices().to_vec();
    nodes.push(poly.centroid());
    let c = v;
    let triangles = (0..v).map(|i| [i, (i + 1) % v, c]).collect();
    let boundary_edges = (0..v).map(|i| [i, (i + 1) % v]).collect();
    let mut mesh = Mesh::from_parts(nodes, triangles, boundary_edges, 0)?;
    for _ in 0..levels {
        mesh = mesh.refined();
    }
    Ok(mesh)
}

/// Predicted node count of [`mesh_convex_polygon`].
pub fn fan_mesh_node_count(vertices: usize, levels: u32) -> usize {
    let s = 1usize << levels;
    1 + vertices * s * (s + 1) / 2
}

/// Point location and P1 interpolation on a mesh through a uniform bucket grid.
#[derive(Debug, Clone)]
pub struct MeshLocator<'a> {
    mesh: &'a Mesh,
    origin: Point,
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<usize>>,
}

impl<'a> MeshLocator<'a> {
    pub fn new(mesh: &'a Mesh) -> Self {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in mesh.nodes() {
            for d in 0..2 {
                lo[d] = lo[d].min(p[d]);
                hi[d] = hi[d].max(p[d]);
            }
        }
        let n_tri = mesh.triangles().len().max(1);
        let side = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(f64::MIN_POSITIVE);
        let per_side = ((n_tri as f64).sqrt().ceil() as usize).clamp(1, 1024);
        let cell = side / per_side as f64 * (1.0 + 1e-9);
        let nx = (((hi[0] - lo[0]) / cell).floor() as usize + 1).max(1);
        let ny = (((hi[1] - lo[1]) / cell).floor() as usize + 1).max(1);
        let mut buckets = alloc::vec![Vec::new(); nx * ny];
        for (k, t) in mesh.triangles().iter().enumerate() {
            let (mut tlo, mut thi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
            for &i in t {
                for d in 0..2 {
                    tlo[d] = tlo[d].min(mesh.nodes()[i][d]);
                    thi[d] = thi[d].max(mesh.nodes()[i][d]);
                }
            }
            let i0 = ((tlo[0] - lo[0]) / cell).floor() as usize;
            let i1 = (((thi[0] - lo[0]) / cell).floor() as usize).min(nx - 1);
            let j0 = ((tlo[1] - lo[1]) / cell).floor() as usize;
            let j1 = (((thi[1] - lo[1]) / cell).floor() as usize).min(ny - 1);
            for j in j0..=j1 {
                for i in i0..=i1 {
                    buckets[j * nx + i].push(k);
                }
            }
        }
        Self {
            mesh,
            origin: lo,
            cell,
            nx,
            ny,
            buckets,
        }
    }

    /// Triangle containing `p` (within a small tolerance) and the
    /// barycentric coordinates of `p` in it.
    pub fn locate(&self, p: Point) -> Option<(usize, [f64; 3])> {
        let fi = ((p[0] - self.origin[0]) / self.cell).floor();
        let fj = ((p[1] - self.origin[1]) / self.cell).floor();
        if fi < -1.0 || fj < -1.0 {
            return None;
        }
        let i = (fi.max(0.0) as usize).min(self.nx - 1);
        let j = (fj.max(0.0) as usize).min(self.ny - 1);
        let mut best: Option<(usize, [f64; 3], f64)> = None;
        for &k in &self.buckets[j * self.nx + i] {
            let t = self.mesh.triangles()[k];
            let n = self.mesh.nodes();
            let area = signed_area(n[t[0]], n[t[1]], n[t[2]]);
            let l0 = signed_area(p, n[t[1]], n[t[2]]) / area;
            let l1 = signed_area(n[t[0]], p, n[t[2]]) / area;
            let l2 = 1.0 - l0 - l1;
            let worst = l0.min(l1).min(l2);
            if worst >= 0.0 {
                return Some((k, [l0, l1, l2]));
            }
            if best.as_ref().is_none_or(|b| worst > b.2) {
                best = Some((k, [l0, l1, l2], worst));
            }
        }
        match best {
            Some((k, l, w)) if w > -1e-9 => Some((k, l)),
            _ => None,
        }
    }

    /// P1 interpolant at `p`, or for points outside the mesh the value at
    /// the closest point of the nearest triangle found in the surrounding
    /// buckets.
    pub fn interpolate_clamped(&self, values: &[f64], p: Point) -> f64 {
        if let Some(v) = self.interpolate(values, p) {
            return v;
        }
        let n = self.mesh.nodes();
        let fi = ((p[0] - self.origin[0]) / self.cell).floor();
        let fj = ((p[1] - self.origin[1]) / self.cell).floor();
        let mut best = (f64::INFINITY, 0.0);
        for ring in 1..=self.nx.max(self.ny) as i64 {
            for dj in -ring..=ring {
                for di in -ring..=ring {
                    let (i, j) = (fi as i64 + di, fj as i64 + dj);
                    if i < 0 || j < 0 || i >= self.nx as i64 || j >= self.ny as i64 {
                        continue;
                    }
                    for &k in &self.buckets[j as usize * self.nx + i as usize] {
                        let t = self.mesh.triangles()[k];
                        for e in 0..3 {
                            let (a, b) = (t[e], t[(e + 1) % 3]);
                            let (pa, pb) = (n[a], n[b]);
                            let ab = sub(pb, pa);
                            let s = (((p[0] - pa[0]) * ab[0] + (p[1] - pa[1]) * ab[1])
                                / (ab[0] * ab[0] + ab[1] * ab[1]))
                                .clamp(0.0, 1.0);
                            let q = [pa[0] + s * ab[0], pa[1] + s * ab[1]];
                            let d = norm(sub(p, q));
                            if d < best.0 {
                                best = (d, (1.0 - s) * values[a] + s * values[b]);
                            }
                        }
                    }
                }
            }
            if best.0.is_finite() {
                break;
            }
        }
        best.1
    }

    /// P1 interpolant of nodal `values` at `p`.
    pub fn interpolate(&self, values: &[f64], p: Point) -> Option<f64> {
        let (k, l) = self.locate(p)?;
        let t = self.mesh.triangles()[k];
        Some(l[0] * values[t[0]] + l[1] * values[t[1]] + l[2] * values[t[2]])
    }
}
