//! Convex polygons and polyhedra: hulls, halfspace data, clipping, radial
//! queries and exact curved volumes.

use crate::spaceform::{dot, edge_sector_area, gauss7, norm, radial_measure};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// planar polygons
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub(crate) struct Edge2 {
    pub normal: [f64; 2],
    pub offset: f64,
    pub length: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct Polygon {
    /// Counterclockwise vertex ring.
    pub verts: Vec<[f64; 2]>,
    pub edges: Vec<Edge2>,
    /// Set when the origin is interior; enables the binary-search radial
    /// query (vertex polar angles are then strictly increasing cyclically).
    star_angles: Option<Vec<f64>>,
    /// Edge-normal angles rotated to start ascending, with the rotation
    /// offset; valid for every convex ring and drives the support query.
    normal_angles: Vec<f64>,
    normal_offset: usize,
}

impl Polygon {
    /// Convex hull of a point set, counterclockwise.
    pub fn from_points(points: &[[f64; 2]]) -> Result<Polygon> {
        let hull = convex_hull_2d(points);
        if hull.len() < 3 {
            return Err(Error::InvalidBody("polygon needs nonempty interior".into()));
        }
        Polygon::from_ring(hull)
    }

    /// Builds from an already counterclockwise convex ring.
    pub fn from_ring(verts: Vec<[f64; 2]>) -> Result<Polygon> {
        if verts.len() < 3 {
            return Err(Error::InvalidBody("polygon needs at least 3 vertices".into()));
        }
        let mut edges = Vec::with_capacity(verts.len());
        for i in 0..verts.len() {
            let p = verts[i];
            let q = verts[(i + 1) % verts.len()];
            let e = [q[0] - p[0], q[1] - p[1]];
            let len = (e[0] * e[0] + e[1] * e[1]).sqrt();
            if len == 0.0 {
                return Err(Error::InvalidBody("repeated polygon vertex".into()));
            }
            let normal = [e[1] / len, -e[0] / len];
            edges.push(Edge2 { normal, offset: normal[0] * p[0] + normal[1] * p[1], length: len });
        }
        // edge-normal angles are cyclically ascending on a convex ring;
        // rotate so the stored copy is strictly ascending
        let raw: Vec<f64> = edges.iter().map(|e| e.normal[1].atan2(e.normal[0])).collect();
        let normal_offset = (1..raw.len()).find(|&i| raw[i] < raw[i - 1]).unwrap_or(0)
            % raw.len().max(1);
        let normal_angles: Vec<f64> =
            (0..raw.len()).map(|i| raw[(i + normal_offset) % raw.len()]).collect();
        let mut poly = Polygon { verts, edges, star_angles: None, normal_angles, normal_offset };
        if poly.edges.iter().all(|e| e.offset > 0.0) {
            let angles: Vec<f64> = poly.verts.iter().map(|v| v[1].atan2(v[0])).collect();
            poly.star_angles = Some(angles);
        }
        Ok(poly)
    }

    pub fn support(&self, v: &[f64]) -> f64 {
        let m = self.verts.len();
        let val = |i: usize| {
            let p = self.verts[i % m];
            p[0] * v[0] + p[1] * v[1]
        };
        if m < 64 {
            return (0..m).map(val).fold(f64::NEG_INFINITY, f64::max);
        }
        // the support vertex separates the edge whose normal angle bounds
        // the direction angle from below and the one bounding it above
        let phi = v[1].atan2(v[0]);
        let pos = match self
            .normal_angles
            .binary_search_by(|a| a.partial_cmp(&phi).unwrap())
        {
            Ok(i) => i,
            Err(0) => self.normal_angles.len() - 1,
            Err(i) => i - 1,
        };
        let edge = (pos + self.normal_offset) % m;
        // direction lies between normals of `edge` and `edge + 1`: the
        // shared vertex is `edge + 1`; scan a small window for safety
        let center = edge + 1;
        ((center + m - 2)..=(center + m + 2))
            .map(|i| val(i % m))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.edges
            .iter()
            .all(|e| e.normal[0] * x[0] + e.normal[1] * x[1] <= e.offset + tol)
    }

    /// `s`-interval of the line `base + s dir` inside the polygon.
    pub fn line_interval(&self, base: &[f64], dir: &[f64]) -> Option<(f64, f64)> {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for e in &self.edges {
            let nd = e.normal[0] * dir[0] + e.normal[1] * dir[1];
            let rest = e.offset - (e.normal[0] * base[0] + e.normal[1] * base[1]);
            if nd.abs() < 1e-15 {
                if rest < 0.0 {
                    return None;
                }
            } else if nd > 0.0 {
                hi = hi.min(rest / nd);
            } else {
                lo = lo.max(rest / nd);
            }
        }
        (lo < hi).then_some((lo, hi))
    }

    /// Radial function about the origin; requires the origin inside.
    pub fn radial(&self, u: &[f64]) -> Option<f64> {
        if let Some(angles) = &self.star_angles {
            let m = angles.len();
            let phi = u[1].atan2(u[0]);
            // wedge index: last vertex with angle <= phi (cyclically)
            let idx = match angles.binary_search_by(|a| a.partial_cmp(&phi).unwrap()) {
                Ok(i) => i,
                Err(0) => m - 1,
                Err(i) => i - 1,
            };
            let e = &self.edges[idx];
            let nd = e.normal[0] * u[0] + e.normal[1] * u[1];
            if nd <= 0.0 {
                // slight angle mismatch near a vertex: fall through to scan
            } else {
                return Some(e.offset / nd);
            }
        }
        let mut r = f64::INFINITY;
        for e in &self.edges {
            let nd = e.normal[0] * u[0] + e.normal[1] * u[1];
            if nd > 1e-15 {
                r = r.min(e.offset / nd);
            }
        }
        r.is_finite().then_some(r)
    }

    /// Exact flat area (shoelace).
    #[allow(dead_code)]
    pub fn area(&self) -> f64 {
        let mut a = 0.0;
        for i in 0..self.verts.len() {
            let p = self.verts[i];
            let q = self.verts[(i + 1) % self.verts.len()];
            a += p[0] * q[1] - q[0] * p[1];
        }
        0.5 * a
    }

    /// Exact curved area: the signed radial closed form summed over edges.
    pub fn lambda_area(&self, lambda: f64) -> f64 {
        let mut a = 0.0;
        for i in 0..self.verts.len() {
            a += edge_sector_area(lambda, self.verts[i], self.verts[(i + 1) % self.verts.len()]);
        }
        a
    }

    pub fn perimeter(&self) -> f64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    /// Sutherland–Hodgman clip by the halfplane `n . x <= o`.
    pub fn clip(&self, normal: [f64; 2], offset: f64) -> Option<Polygon> {
        let mut out: Vec<[f64; 2]> = Vec::with_capacity(self.verts.len() + 1);
        let m = self.verts.len();
        for i in 0..m {
            let p = self.verts[i];
            let q = self.verts[(i + 1) % m];
            let dp = normal[0] * p[0] + normal[1] * p[1] - offset;
            let dq = normal[0] * q[0] + normal[1] * q[1] - offset;
            if dp <= 0.0 {
                out.push(p);
            }
            if (dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq < 0.0) {
                let t = dp / (dp - dq);
                out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
            }
        }
        dedupe_ring(&mut out, 1e-14);
        if out.len() < 3 {
            return None;
        }
        Polygon::from_ring(out).ok()
    }
}

fn dedupe_ring(ring: &mut Vec<[f64; 2]>, tol: f64) {
    let scale = ring
        .iter()
        .map(|p| p[0].abs().max(p[1].abs()))
        .fold(1.0f64, f64::max);
    let mut out: Vec<[f64; 2]> = Vec::with_capacity(ring.len());
    for &p in ring.iter() {
        if let Some(&last) = out.last() {
            if (p[0] - last[0]).abs() + (p[1] - last[1]).abs() <= tol * scale {
                continue;
            }
        }
        out.push(p);
    }
    while out.len() > 1 {
        let first = out[0];
        let last = *out.last().unwrap();
        if (first[0] - last[0]).abs() + (first[1] - last[1]).abs() <= tol * scale {
            out.pop();
        } else {
            break;
        }
    }
    *ring = out;
}

/// Andrew's monotone chain, counterclockwise output. Near-collinear points
/// are dropped at a scaled tolerance, so rings stay strictly convex.
pub(crate) fn convex_hull_2d(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut pts: Vec<[f64; 2]> = points.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| a == b);
    if pts.len() < 3 {
        return pts;
    }
    let scale = pts
        .iter()
        .map(|p| p[0].abs().max(p[1].abs()))
        .fold(1.0f64, f64::max);
    let eps = 1e-12 * scale * scale;
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= eps {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= eps {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

// ---------------------------------------------------------------------------
// spatial polyhedra
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub(crate) struct Facet3 {
    pub normal: [f64; 3],
    pub offset: f64,
    /// Vertex loop, counterclockwise seen from outside.
    pub ring: Vec<usize>,
}

#[derive(Debug, Clone)]
pub(crate) struct Polyhedron {
    pub verts: Vec<[f64; 3]>,
    pub facets: Vec<Facet3>,
    /// Deduplicated facet planes, for line clipping.
    pub planes: Vec<([f64; 3], f64)>,
}

impl Polyhedron {
    pub fn from_points(points: &[[f64; 3]]) -> Result<Polyhedron> {
        let tris = convex_hull_3d(points)?;
        let mut facets = Vec::with_capacity(tris.len());
        for t in &tris {
            facets.push(Facet3 { normal: t.normal, offset: t.offset, ring: t.idx.to_vec() });
        }
        Ok(Polyhedron::assemble(points.to_vec(), facets))
    }

    pub(crate) fn assemble(verts: Vec<[f64; 3]>, facets: Vec<Facet3>) -> Polyhedron {
        let scale = verts
            .iter()
            .map(|v| norm(v).abs())
            .fold(1.0f64, f64::max);
        let mut planes: Vec<([f64; 3], f64)> = Vec::new();
        for f in &facets {
            let dup = planes.iter().any(|(n, o)| {
                (n[0] - f.normal[0]).abs() + (n[1] - f.normal[1]).abs() + (n[2] - f.normal[2]).abs()
                    < 1e-9
                    && (o - f.offset).abs() < 1e-9 * scale
            });
            if !dup {
                planes.push((f.normal, f.offset));
            }
        }
        Polyhedron { verts, facets, planes }
    }

    pub fn support(&self, v: &[f64]) -> f64 {
        self.verts
            .iter()
            .map(|p| p[0] * v[0] + p[1] * v[1] + p[2] * v[2])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.planes
            .iter()
            .all(|(n, o)| n[0] * x[0] + n[1] * x[1] + n[2] * x[2] <= o + tol)
    }

    pub fn line_interval(&self, base: &[f64], dir: &[f64]) -> Option<(f64, f64)> {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for (n, o) in &self.planes {
            let nd = dot(n, dir);
            let rest = o - dot(n, base);
            if nd.abs() < 1e-15 {
                if rest < 0.0 {
                    return None;
                }
            } else if nd > 0.0 {
                hi = hi.min(rest / nd);
            } else {
                lo = lo.max(rest / nd);
            }
        }
        (lo < hi).then_some((lo, hi))
    }

    pub fn radial(&self, u: &[f64]) -> Option<f64> {
        let mut r = f64::INFINITY;
        for (n, o) in &self.planes {
            let nd = dot(n, u);
            if nd > 1e-15 {
                r = r.min(o / nd);
            }
        }
        r.is_finite().then_some(r)
    }

    /// Exact-to-tolerance curved volume: the radial antiderivative integrated
    /// over the facet cones from the origin, signed, by recursive triangle
    /// quadrature.
    pub fn lambda_volume(&self, lambda: f64, rel_tol: f64) -> f64 {
        let mut total = 0.0;
        for f in &self.facets {
            for k in 1..f.ring.len() - 1 {
                let tri = [
                    self.verts[f.ring[0]],
                    self.verts[f.ring[k]],
                    self.verts[f.ring[k + 1]],
                ];
                total += cone_volume_triangle(lambda, &tri, rel_tol);
            }
        }
        total
    }

    pub fn surface_area(&self) -> f64 {
        let mut total = 0.0;
        for f in &self.facets {
            for k in 1..f.ring.len() - 1 {
                total += triangle_area(
                    self.verts[f.ring[0]],
                    self.verts[f.ring[k]],
                    self.verts[f.ring[k + 1]],
                );
            }
        }
        total
    }
}

fn triangle_area(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
    let cx = u[1] * v[2] - u[2] * v[1];
    let cy = u[2] * v[0] - u[0] * v[2];
    let cz = u[0] * v[1] - u[1] * v[0];
    0.5 * (cx * cx + cy * cy + cz * cz).sqrt()
}

/// Signed curved volume of the cone over a triangle from the origin:
/// `int_T radial(|y|) (y . n) / |y|^3 dA`, with `radial` the closed-form
/// radial measure of the density.
fn cone_volume_triangle(lambda: f64, tri: &[[f64; 3]; 3], rel_tol: f64) -> f64 {
    let u = [tri[1][0] - tri[0][0], tri[1][1] - tri[0][1], tri[1][2] - tri[0][2]];
    let v = [tri[2][0] - tri[0][0], tri[2][1] - tri[0][1], tri[2][2] - tri[0][2]];
    let nx = u[1] * v[2] - u[2] * v[1];
    let ny = u[2] * v[0] - u[0] * v[2];
    let nz = u[0] * v[1] - u[1] * v[0];
    let two_area = (nx * nx + ny * ny + nz * nz).sqrt();
    if two_area == 0.0 {
        return 0.0;
    }
    // y . n is constant on the triangle plane
    let yn = (tri[0][0] * nx + tri[0][1] * ny + tri[0][2] * nz) / two_area;
    if yn.abs() < 1e-300 {
        return 0.0;
    }
    let integrand = |y: [f64; 3]| {
        let r = norm(&y);
        radial_measure(3, lambda, 0.0, r) / (r * r * r)
    };
    let area = 0.5 * two_area;
    let scale = {
        let c = centroid(tri);
        integrand(c).abs() * area
    };
    yn * triangle_quad(integrand, tri, rel_tol * scale.max(1e-300), 24)
}

fn centroid(tri: &[[f64; 3]; 3]) -> [f64; 3] {
    [
        (tri[0][0] + tri[1][0] + tri[2][0]) / 3.0,
        (tri[0][1] + tri[1][1] + tri[2][1]) / 3.0,
        (tri[0][2] + tri[1][2] + tri[2][2]) / 3.0,
    ]
}

/// Degree-5 7-point rule on a triangle.
fn triangle_rule7<F: Fn([f64; 3]) -> f64>(f: &F, tri: &[[f64; 3]; 3]) -> f64 {
    const W: [f64; 3] = [0.225, 0.132_394_152_788_506_2, 0.125_939_180_544_827_2];
    const A: [f64; 2] = [0.059_715_871_789_769_8, 0.797_426_985_353_087_3];
    const B: [f64; 2] = [0.470_142_064_105_115_1, 0.101_286_507_323_456_3];
    let at = |l0: f64, l1: f64, l2: f64| {
        f([
            l0 * tri[0][0] + l1 * tri[1][0] + l2 * tri[2][0],
            l0 * tri[0][1] + l1 * tri[1][1] + l2 * tri[2][1],
            l0 * tri[0][2] + l1 * tri[1][2] + l2 * tri[2][2],
        ])
    };
    let mut acc = W[0] * at(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0);
    for k in 0..2 {
        acc += W[k + 1]
            * (at(A[k], B[k], B[k]) + at(B[k], A[k], B[k]) + at(B[k], B[k], A[k]));
    }
    acc * triangle_area(tri[0], tri[1], tri[2])
}

/// Recursive triangle quadrature of `f dA` on the degree-5 rule.
fn triangle_quad<F: Fn([f64; 3]) -> f64 + Copy>(
    f: F,
    tri: &[[f64; 3]; 3],
    abs_tol: f64,
    depth: u32,
) -> f64 {
    let coarse = triangle_rule7(&f, tri);
    let mids = [
        mid(tri[0], tri[1]),
        mid(tri[1], tri[2]),
        mid(tri[2], tri[0]),
    ];
    let children = [
        [tri[0], mids[0], mids[2]],
        [mids[0], tri[1], mids[1]],
        [mids[2], mids[1], tri[2]],
        [mids[0], mids[1], mids[2]],
    ];
    let fine: f64 = children.iter().map(|t| triangle_rule7(&f, t)).sum();
    if depth == 0 || (fine - coarse).abs() <= abs_tol {
        return fine;
    }
    children
        .iter()
        .map(|t| triangle_quad(f, t, abs_tol / 4.0, depth - 1))
        .sum()
}

fn mid(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0, (a[2] + b[2]) / 2.0]
}

// ---------------------------------------------------------------------------
// incremental 3-d convex hull
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub(crate) struct HullTri {
    pub idx: [usize; 3],
    pub normal: [f64; 3],
    pub offset: f64,
}

/// Incremental convex hull; outward-oriented triangles.
pub(crate) fn convex_hull_3d(points: &[[f64; 3]]) -> Result<Vec<HullTri>> {
    let n = points.len();
    if n < 4 {
        return Err(Error::InvalidBody("hull needs at least 4 points".into()));
    }
    let scale = points.iter().map(|p| norm(p)).fold(1.0f64, f64::max);
    let eps = 1e-12 * scale;

    // well-separated seed tetrahedron
    let (mut i0, mut i1) = (0, 1);
    let mut best = -1.0;
    for d in 0..3 {
        let lo = (0..n).min_by(|&a, &b| points[a][d].partial_cmp(&points[b][d]).unwrap()).unwrap();
        let hi = (0..n).max_by(|&a, &b| points[a][d].partial_cmp(&points[b][d]).unwrap()).unwrap();
        let dist = dist3(points[lo], points[hi]);
        if dist > best {
            best = dist;
            i0 = lo;
            i1 = hi;
        }
    }
    if best <= eps {
        return Err(Error::InvalidBody("degenerate point set".into()));
    }
    let i2 = (0..n)
        .max_by(|&a, &b| {
            line_dist(points[i0], points[i1], points[a])
                .partial_cmp(&line_dist(points[i0], points[i1], points[b]))
                .unwrap()
        })
        .unwrap();
    if line_dist(points[i0], points[i1], points[i2]) <= eps {
        return Err(Error::InvalidBody("collinear point set".into()));
    }
    let base = plane_of(points[i0], points[i1], points[i2]);
    let i3 = (0..n)
        .max_by(|&a, &b| {
            (dot(&base.0, &points[a]) - base.1)
                .abs()
                .partial_cmp(&(dot(&base.0, &points[b]) - base.1).abs())
                .unwrap()
        })
        .unwrap();
    if (dot(&base.0, &points[i3]) - base.1).abs() <= eps {
        return Err(Error::InvalidBody("coplanar point set".into()));
    }

    let inner = [
        (points[i0][0] + points[i1][0] + points[i2][0] + points[i3][0]) / 4.0,
        (points[i0][1] + points[i1][1] + points[i2][1] + points[i3][1]) / 4.0,
        (points[i0][2] + points[i1][2] + points[i2][2] + points[i3][2]) / 4.0,
    ];
    let mk = |a: usize, b: usize, c: usize| -> HullTri {
        let (mut normal, mut offset) = plane_of(points[a], points[b], points[c]);
        let mut idx = [a, b, c];
        if dot(&normal, &inner) > offset {
            normal = [-normal[0], -normal[1], -normal[2]];
            offset = -offset;
            idx.swap(1, 2);
        }
        HullTri { idx, normal, offset }
    };
    let mut tris = vec![
        mk(i0, i1, i2),
        mk(i0, i1, i3),
        mk(i0, i2, i3),
        mk(i1, i2, i3),
    ];

    for p in 0..n {
        if p == i0 || p == i1 || p == i2 || p == i3 {
            continue;
        }
        let pt = points[p];
        let visible: Vec<usize> = (0..tris.len())
            .filter(|&t| dot(&tris[t].normal, &pt) - tris[t].offset > eps)
            .collect();
        if visible.is_empty() {
            continue;
        }
        // horizon = directed edges of visible facets whose reverse is not visible
        let mut edge_set = std::collections::HashSet::new();
        for &t in &visible {
            let [a, b, c] = tris[t].idx;
            for (u, v) in [(a, b), (b, c), (c, a)] {
                edge_set.insert((u, v));
            }
        }
        let mut horizon: Vec<(usize, usize)> = Vec::new();
        for &(u, v) in &edge_set {
            if !edge_set.contains(&(v, u)) {
                horizon.push((u, v));
            }
        }
        let visible_set: std::collections::HashSet<usize> = visible.iter().copied().collect();
        let mut next: Vec<HullTri> = (0..tris.len())
            .filter(|t| !visible_set.contains(t))
            .map(|t| tris[t].clone())
            .collect();
        for (u, v) in horizon {
            if triangle_area(points[u], points[v], pt) <= 1e-20 * scale * scale {
                continue;
            }
            let (mut normal, mut offset) = plane_of(points[u], points[v], pt);
            let mut idx = [u, v, p];
            if dot(&normal, &inner) > offset {
                normal = [-normal[0], -normal[1], -normal[2]];
                offset = -offset;
                idx.swap(1, 2);
            }
            next.push(HullTri { idx, normal, offset });
        }
        tris = next;
    }
    Ok(tris)
}

fn dist3(a: [f64; 3], b: [f64; 3]) -> f64 {
    norm(&[b[0] - a[0], b[1] - a[1], b[2] - a[2]])
}

fn line_dist(a: [f64; 3], b: [f64; 3], p: [f64; 3]) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let ap = [p[0] - a[0], p[1] - a[1], p[2] - a[2]];
    let cx = ab[1] * ap[2] - ab[2] * ap[1];
    let cy = ab[2] * ap[0] - ab[0] * ap[2];
    let cz = ab[0] * ap[1] - ab[1] * ap[0];
    norm(&[cx, cy, cz]) / norm(&ab).max(1e-300)
}

fn plane_of(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> ([f64; 3], f64) {
    let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
    let mut nrm = [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ];
    let len = norm(&nrm).max(1e-300);
    nrm = [nrm[0] / len, nrm[1] / len, nrm[2] / len];
    (nrm, nrm[0] * a[0] + nrm[1] * a[1] + nrm[2] * a[2])
}

/// 1-d Gauss panels of a smooth function; used for facet strips.
#[allow(dead_code)]
pub(crate) fn panel_integral<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let mut acc = 0.0;
    let h = (b - a) / panels as f64;
    for i in 0..panels {
        acc += gauss7(f, a + i as f64 * h, a + (i + 1) as f64 * h);
    }
    acc
}
