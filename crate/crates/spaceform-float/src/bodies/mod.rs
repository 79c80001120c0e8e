//! Convex-body representations with exact support, boundary and curvature
//! oracles, plus Wulff-shape construction and the support-grid Hausdorff
//! distance.
//!
//! Four families cover the test surface: geodesic balls (any center),
//! origin-centered ellipsoids, polytopes in the plane or in space, and
//! strictly convex planar bodies from a trigonometric support expansion.
//! Projective motions map the families onto themselves (balls and ellipsoids
//! stay quadrics, polytopes stay polytopes, smooth bodies keep an exact
//! mapped parametrization).

mod polytope;
mod quadric;
mod smooth;
mod wulff;

use crate::spaceform::{norm, tan_lambda, Direction, Motion, Point, SpaceForm};
use crate::{Error, Result};
use polytope::{Polygon, Polyhedron};
use quadric::Quadric;
use smooth::{MappedSmooth, SmoothSupport2d};

/// Which family a body belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BodyKind {
    Ball,
    Ellipsoid,
    Polytope,
    Smooth2d,
}

/// One node of a boundary quadrature: position, Euclidean outer unit normal,
/// Euclidean Gauss–Kronecker curvature and the Euclidean surface weight.
#[derive(Debug, Clone)]
pub struct BoundarySample {
    pub x: Point,
    pub ne: Direction,
    pub he: f64,
    pub weight: f64,
}

#[derive(Debug, Clone)]
pub(crate) enum Rep {
    Quadric(Quadric),
    Polygon(Polygon),
    Polyhedron(Polyhedron),
    Smooth(SmoothSupport2d),
    Mapped(MappedSmooth),
}

/// A convex body bound to its space form.
#[derive(Debug, Clone)]
pub struct ConvexBody {
    space: SpaceForm,
    kind: BodyKind,
    pub(crate) rep: Rep,
}

impl ConvexBody {
    /// Geodesic ball. Centered at the origin it is the Euclidean ball of
    /// radius `tan_lambda(geodesic_radius)`; moved off center it becomes an
    /// ellipsoid (the image under the projective translation).
    pub fn ball(space: SpaceForm, center: &Point, geodesic_radius: f64) -> Result<ConvexBody> {
        space.check_point(center)?;
        let rho = tan_lambda(geodesic_radius, space.lambda)?;
        if rho <= 0.0 {
            return Err(Error::InvalidBody("geodesic radius must be positive".into()));
        }
        let mut q = Quadric::centered_ball(space.n, rho)?;
        q.ball_radius = Some(geodesic_radius);
        if center.norm() > 0.0 {
            q = q.transformed(&space.translation(center))?;
        }
        let body = ConvexBody { space, kind: BodyKind::Ball, rep: Rep::Quadric(q) };
        body.validate_in_model()?;
        Ok(body)
    }

    /// Origin-centered axis-aligned ellipsoid with the given semiaxes.
    pub fn ellipsoid(space: SpaceForm, semiaxes: &[f64]) -> Result<ConvexBody> {
        if semiaxes.len() != space.n {
            return Err(Error::InvalidBody("one semiaxis per dimension".into()));
        }
        let q = Quadric::axis_aligned(semiaxes)?;
        let body = ConvexBody { space, kind: BodyKind::Ellipsoid, rep: Rep::Quadric(q) };
        body.validate_in_model()?;
        Ok(body)
    }

    /// Polytope as the convex hull of `vertices` (plane or space).
    pub fn polytope_from_vertices(space: SpaceForm, vertices: &[Vec<f64>]) -> Result<ConvexBody> {
        let rep = match space.n {
            2 => {
                let pts: Vec<[f64; 2]> = vertices.iter().map(|v| [v[0], v[1]]).collect();
                Rep::Polygon(Polygon::from_points(&pts)?)
            }
            3 => {
                let pts: Vec<[f64; 3]> = vertices.iter().map(|v| [v[0], v[1], v[2]]).collect();
                Rep::Polyhedron(Polyhedron::from_points(&pts)?)
            }
            _ => return Err(Error::InvalidBody("polytopes are planar or spatial".into())),
        };
        let body = ConvexBody { space, kind: BodyKind::Polytope, rep };
        body.validate_in_model()?;
        Ok(body)
    }

    /// Polytope as an intersection of half-spaces `{x . v <= offset}`; the
    /// offsets must be positive (origin interior) and the normals must
    /// positively span, so the intersection is bounded.
    pub fn polytope_from_halfspaces(
        space: SpaceForm,
        halfspaces: &[(Direction, f64)],
    ) -> Result<ConvexBody> {
        if halfspaces.iter().any(|(_, o)| *o <= 0.0) {
            return Err(Error::InvalidBody(
                "halfspace construction expects positive offsets (origin interior)".into(),
            ));
        }
        let dirs: Vec<Direction> = halfspaces.iter().map(|(d, _)| d.clone()).collect();
        let values: Vec<f64> = halfspaces.iter().map(|(_, o)| *o).collect();
        wulff_shape(space, &DirectionGrid::custom(dirs), &values)
    }

    /// Strictly convex planar body from the support expansion
    /// `h(t) = a0 + sum (a_k cos kt + b_k sin kt)`, `k >= 2`.
    pub fn smooth2d(space: SpaceForm, a0: f64, harmonics: &[(usize, f64, f64)]) -> Result<ConvexBody> {
        if space.n != 2 {
            return Err(Error::InvalidBody("smooth support bodies are planar".into()));
        }
        let rep = Rep::Smooth(SmoothSupport2d::new(a0, harmonics.to_vec())?);
        let body = ConvexBody { space, kind: BodyKind::Smooth2d, rep };
        body.validate_in_model()?;
        Ok(body)
    }

    pub fn space(&self) -> &SpaceForm {
        &self.space
    }

    pub fn kind(&self) -> BodyKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.space.n
    }

    pub fn is_polytope(&self) -> bool {
        self.kind == BodyKind::Polytope
    }

    /// Geodesic radius when the body is an origin-centered geodesic ball.
    pub(crate) fn centered_ball_radius(&self) -> Option<f64> {
        match &self.rep {
            Rep::Quadric(q) if q.center.iter().all(|&c| c == 0.0) => q.ball_radius,
            _ => None,
        }
    }

    /// Euclidean support function.
    pub fn support(&self, v: &Direction) -> f64 {
        self.support_raw(v.coords())
    }

    pub(crate) fn support_raw(&self, v: &[f64]) -> f64 {
        match &self.rep {
            Rep::Quadric(q) => q.support(v),
            Rep::Polygon(p) => p.support(v),
            Rep::Polyhedron(p) => p.support(v),
            Rep::Smooth(s) => s.support(v),
            Rep::Mapped(m) => m.support(v, 4096),
        }
    }

    /// Geodesic support: `atan_lambda` of the Euclidean support.
    pub fn support_lambda(&self, v: &Direction) -> Result<f64> {
        crate::spaceform::atan_lambda(self.support(v), self.space.lambda)
    }

    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        let c = x.coords();
        match &self.rep {
            Rep::Quadric(q) => q.contains(c, tol),
            Rep::Polygon(p) => p.contains(c, tol),
            Rep::Polyhedron(p) => p.contains(c, tol),
            Rep::Smooth(s) => s.contains(c, tol),
            Rep::Mapped(m) => m.contains(c, tol),
        }
    }

    /// `s`-interval of the chord `base + s dir` inside the body.
    pub(crate) fn line_interval(&self, base: &[f64], dir: &[f64]) -> Option<(f64, f64)> {
        match &self.rep {
            Rep::Quadric(q) => q.line_interval(base, dir),
            Rep::Polygon(p) => p.line_interval(base, dir),
            Rep::Polyhedron(p) => p.line_interval(base, dir),
            Rep::Smooth(s) => s.line_interval(base, dir),
            Rep::Mapped(m) => m.line_interval(base, dir),
        }
    }

    /// Radial function about the origin, when the ray hits the body.
    pub(crate) fn radial(&self, u: &[f64]) -> Option<f64> {
        match &self.rep {
            Rep::Quadric(q) => q.radial(u),
            Rep::Polygon(p) => p.radial(u),
            Rep::Polyhedron(p) => p.radial(u),
            Rep::Smooth(s) => Some(s.radial(u)),
            Rep::Mapped(m) => m.radial(u),
        }
    }

    /// The body moved by a projective motion of its space form.
    pub fn transformed(&self, motion: &Motion) -> Result<ConvexBody> {
        let rep = match &self.rep {
            Rep::Quadric(q) => Rep::Quadric(q.transformed(motion)?),
            Rep::Polygon(p) => {
                let pts: Vec<[f64; 2]> = p
                    .verts
                    .iter()
                    .map(|v| {
                        let y = motion.apply(&Point::new(v.to_vec()));
                        [y.coords()[0], y.coords()[1]]
                    })
                    .collect();
                Rep::Polygon(Polygon::from_points(&pts)?)
            }
            Rep::Polyhedron(p) => {
                let pts: Vec<[f64; 3]> = p
                    .verts
                    .iter()
                    .map(|v| {
                        let y = motion.apply(&Point::new(v.to_vec()));
                        [y.coords()[0], y.coords()[1], y.coords()[2]]
                    })
                    .collect();
                Rep::Polyhedron(Polyhedron::from_points(&pts)?)
            }
            Rep::Smooth(s) => Rep::Mapped(MappedSmooth::new(s.clone(), motion.clone())),
            Rep::Mapped(m) => Rep::Mapped(MappedSmooth::new(
                m.base.clone(),
                motion.compose(&m.motion),
            )),
        };
        let body = ConvexBody { space: self.space, kind: self.kind, rep };
        body.validate_in_model()?;
        Ok(body)
    }

    /// The planar body rotated about the origin; smooth bodies stay in the
    /// support-expansion family (coefficients rotate exactly).
    pub fn rotated2(&self, angle: f64) -> Result<ConvexBody> {
        if let Rep::Smooth(s) = &self.rep {
            return Ok(ConvexBody {
                space: self.space,
                kind: self.kind,
                rep: Rep::Smooth(s.rotated(angle)),
            });
        }
        self.transformed(&Motion::rotation2(angle))
    }

    /// Boundary quadrature: nodes and Euclidean surface weights integrating
    /// continuous functions over the boundary.
    ///
    /// Smooth-family nodes are uniform in the support parameter (spectral
    /// accuracy for smooth integrands); quadric surfaces use a
    /// Gauss–Legendre-by-azimuth sphere product; polytope facets carry
    /// interior nodes with zero curvature.
    pub fn boundary_quadrature(&self, resolution: usize) -> Result<Vec<BoundarySample>> {
        if resolution < 4 {
            return Err(Error::OutOfRange("resolution must be at least 4".into()));
        }
        let samples = match &self.rep {
            Rep::Quadric(q) => {
                if self.space.n == 2 {
                    let m = resolution;
                    (0..m)
                        .map(|j| {
                            let t = j as f64 / m as f64 * std::f64::consts::TAU;
                            let (x, ne, he, scale) = q.boundary_at(&[t.cos(), t.sin()]);
                            BoundarySample {
                                x: Point::new(x[..2].to_vec()),
                                ne: Direction::new(ne[..2].to_vec()).expect("unit normal"),
                                he,
                                weight: scale * std::f64::consts::TAU / m as f64,
                            }
                        })
                        .collect()
                } else {
                    let mut out = Vec::with_capacity(resolution);
                    for (u, w) in sphere_product_grid(resolution) {
                        let (x, ne, he, scale) = q.boundary_at(&u);
                        out.push(BoundarySample {
                            x: Point::new(x.to_vec()),
                            ne: Direction::new(ne.to_vec()).expect("unit normal"),
                            he,
                            weight: scale * w,
                        });
                    }
                    out
                }
            }
            Rep::Smooth(s) => {
                let m = resolution;
                (0..m)
                    .map(|j| {
                        let t = j as f64 / m as f64 * std::f64::consts::TAU;
                        let rho = s.curvature_radius(t);
                        BoundarySample {
                            x: Point::new(s.point(t).to_vec()),
                            ne: Direction::from_angle(t),
                            he: 1.0 / rho,
                            weight: rho * std::f64::consts::TAU / m as f64,
                        }
                    })
                    .collect()
            }
            Rep::Mapped(mp) => {
                let m = resolution;
                (0..m)
                    .map(|j| {
                        let t = j as f64 / m as f64 * std::f64::consts::TAU;
                        let (x, ne, he, speed) = mp.boundary_at(t);
                        BoundarySample {
                            x: Point::new(x.to_vec()),
                            ne: Direction::new(ne.to_vec()).expect("unit normal"),
                            he,
                            weight: speed * std::f64::consts::TAU / m as f64,
                        }
                    })
                    .collect()
            }
            Rep::Polygon(p) => {
                let perimeter = p.perimeter();
                let mut out = Vec::with_capacity(resolution + p.edges.len());
                for (i, e) in p.edges.iter().enumerate() {
                    let k = ((resolution as f64 * e.length / perimeter).round() as usize).max(1);
                    let a = p.verts[i];
                    let b = p.verts[(i + 1) % p.verts.len()];
                    for j in 0..k {
                        let t = (j as f64 + 0.5) / k as f64;
                        out.push(BoundarySample {
                            x: Point::new(vec![
                                a[0] + t * (b[0] - a[0]),
                                a[1] + t * (b[1] - a[1]),
                            ]),
                            ne: Direction::new(e.normal.to_vec()).expect("unit normal"),
                            he: 0.0,
                            weight: e.length / k as f64,
                        });
                    }
                }
                out
            }
            Rep::Polyhedron(p) => polyhedron_samples(p, resolution),
        };
        Ok(samples)
    }

    fn validate_in_model(&self) -> Result<()> {
        let limit = self.space.admissible_radius();
        if limit.is_infinite() {
            return Ok(());
        }
        let max_norm = match &self.rep {
            Rep::Polygon(p) => p.verts.iter().map(|v| norm(v)).fold(0.0, f64::max),
            Rep::Polyhedron(p) => p.verts.iter().map(|v| norm(v)).fold(0.0, f64::max),
            Rep::Smooth(s) => s.max_radius(),
            Rep::Quadric(_) | Rep::Mapped(_) => {
                // max |x| over a convex body is the max of the support
                // function over directions
                let dirs: Vec<Vec<f64>> = if self.space.n == 2 {
                    (0..512)
                        .map(|j| {
                            let t = j as f64 / 512.0 * std::f64::consts::TAU;
                            vec![t.cos(), t.sin()]
                        })
                        .collect()
                } else {
                    sphere_directions(1280).iter().map(|d| d.to_vec()).collect()
                };
                dirs.iter()
                    .map(|d| self.support_raw(d))
                    .fold(0.0, f64::max)
            }
        };
        if max_norm >= limit {
            return Err(Error::OutsideModel(format!(
                "body reaches |x| = {max_norm}, admissible radius {limit}"
            )));
        }
        Ok(())
    }
}

fn polyhedron_samples(p: &Polyhedron, resolution: usize) -> Vec<BoundarySample> {
    let total_area = p.surface_area();
    let mut out = Vec::with_capacity(resolution * 2);
    for f in &p.facets {
        let ne = Direction::new(f.normal.to_vec()).expect("unit normal");
        for k in 1..f.ring.len() - 1 {
            let tri = [p.verts[f.ring[0]], p.verts[f.ring[k]], p.verts[f.ring[k + 1]]];
            let area = tri_area(&tri);
            if area == 0.0 {
                continue;
            }
            let want = (resolution as f64 * area / total_area).ceil().max(1.0) as usize;
            let mut depth = 0u32;
            while 4usize.pow(depth) < want {
                depth += 1;
            }
            push_tri_nodes(&tri, depth, &ne, &mut out);
        }
    }
    out
}

fn tri_area(tri: &[[f64; 3]; 3]) -> f64 {
    let u = [tri[1][0] - tri[0][0], tri[1][1] - tri[0][1], tri[1][2] - tri[0][2]];
    let v = [tri[2][0] - tri[0][0], tri[2][1] - tri[0][1], tri[2][2] - tri[0][2]];
    let c = [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ];
    0.5 * norm(&c)
}

fn push_tri_nodes(tri: &[[f64; 3]; 3], depth: u32, ne: &Direction, out: &mut Vec<BoundarySample>) {
    if depth == 0 {
        let c = [
            (tri[0][0] + tri[1][0] + tri[2][0]) / 3.0,
            (tri[0][1] + tri[1][1] + tri[2][1]) / 3.0,
            (tri[0][2] + tri[1][2] + tri[2][2]) / 3.0,
        ];
        out.push(BoundarySample {
            x: Point::new(c.to_vec()),
            ne: ne.clone(),
            he: 0.0,
            weight: tri_area(tri),
        });
        return;
    }
    let m01 = midp(tri[0], tri[1]);
    let m12 = midp(tri[1], tri[2]);
    let m20 = midp(tri[2], tri[0]);
    for t in [
        [tri[0], m01, m20],
        [m01, tri[1], m12],
        [m20, m12, tri[2]],
        [m01, m12, m20],
    ] {
        push_tri_nodes(&t, depth - 1, ne, out);
    }
}

fn midp(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0, (a[2] + b[2]) / 2.0]
}

// ---------------------------------------------------------------------------
// direction grids
// ---------------------------------------------------------------------------

/// A finite set of unit directions used for Wulff assembly, support
/// comparisons and the Hausdorff distance.
#[derive(Debug, Clone)]
pub struct DirectionGrid {
    dirs: Vec<Direction>,
}

impl DirectionGrid {
    /// Uniform angular grid in the plane.
    pub fn uniform_2d(count: usize) -> DirectionGrid {
        DirectionGrid {
            dirs: (0..count)
                .map(|k| Direction::from_angle(k as f64 / count as f64 * std::f64::consts::TAU))
                .collect(),
        }
    }

    /// Subdivided-icosahedron grid in space with at least `min_count`
    /// directions (the face normals after subdivision).
    pub fn icosahedral_3d(min_count: usize) -> DirectionGrid {
        DirectionGrid {
            dirs: sphere_directions(min_count)
                .into_iter()
                .map(|d| Direction::new(d.to_vec()).expect("unit"))
                .collect(),
        }
    }

    pub fn custom(dirs: Vec<Direction>) -> DirectionGrid {
        DirectionGrid { dirs }
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }

    pub fn dirs(&self) -> &[Direction] {
        &self.dirs
    }
}

/// Face-normal directions of a subdivided icosahedron, at least `min_count`
/// of them.
pub(crate) fn sphere_directions(min_count: usize) -> Vec<[f64; 3]> {
    let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
    let mut verts: Vec<[f64; 3]> = Vec::new();
    for &a in &[-1.0, 1.0] {
        for &b in &[-phi, phi] {
            verts.push([a, b, 0.0]);
            verts.push([0.0, a, b]);
            verts.push([b, 0.0, a]);
        }
    }
    for v in &mut verts {
        let l = norm(v);
        *v = [v[0] / l, v[1] / l, v[2] / l];
    }
    let hull = polytope::convex_hull_3d(&verts).expect("icosahedron");
    let mut faces: Vec<[[f64; 3]; 3]> = hull
        .iter()
        .map(|t| [verts[t.idx[0]], verts[t.idx[1]], verts[t.idx[2]]])
        .collect();
    while faces.len() < min_count {
        let mut next = Vec::with_capacity(faces.len() * 4);
        for f in &faces {
            let m01 = normalize3(midp(f[0], f[1]));
            let m12 = normalize3(midp(f[1], f[2]));
            let m20 = normalize3(midp(f[2], f[0]));
            next.push([f[0], m01, m20]);
            next.push([m01, f[1], m12]);
            next.push([m20, m12, f[2]]);
            next.push([m01, m12, m20]);
        }
        faces = next;
    }
    faces
        .iter()
        .map(|f| {
            normalize3([
                (f[0][0] + f[1][0] + f[2][0]) / 3.0,
                (f[0][1] + f[1][1] + f[2][1]) / 3.0,
                (f[0][2] + f[1][2] + f[2][2]) / 3.0,
            ])
        })
        .collect()
}

fn normalize3(v: [f64; 3]) -> [f64; 3] {
    let l = norm(&v);
    [v[0] / l, v[1] / l, v[2] / l]
}

/// Gauss–Legendre-by-azimuth product grid on the unit sphere with roughly
/// `resolution` nodes; returns `(direction, solid-angle weight)` pairs.
fn sphere_product_grid(resolution: usize) -> Vec<([f64; 3], f64)> {
    let p = ((resolution as f64 / 1.25).sqrt().round() as usize).max(4);
    let q = (resolution + p - 1) / p;
    let gl = legendre_nodes(p);
    let mut out = Vec::with_capacity(p * q);
    for (z, wz) in gl {
        let r = (1.0 - z * z).sqrt();
        for j in 0..q {
            let a = (j as f64 + 0.5) / q as f64 * std::f64::consts::TAU;
            out.push(([r * a.cos(), r * a.sin(), z], wz * std::f64::consts::TAU / q as f64));
        }
    }
    out
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub(crate) fn legendre_nodes(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (pn, dpn) = legendre_eval(n, x);
            let dx = pn / dpn;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dpn) = legendre_eval(n, x);
        out.push((x, 2.0 / ((1.0 - x * x) * dpn * dpn)));
    }
    out
}

fn legendre_eval(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

// ---------------------------------------------------------------------------
// Wulff shapes and the Hausdorff distance
// ---------------------------------------------------------------------------

/// The Wulff shape `[f]` of a profile over a direction grid: the halfspace
/// intersection polytope, an outer approximation of the intersection over
/// the full sphere of directions.
pub fn wulff_shape(space: SpaceForm, grid: &DirectionGrid, values: &[f64]) -> Result<ConvexBody> {
    if grid.len() != values.len() {
        return Err(Error::InvalidBody("one value per grid direction".into()));
    }
    let bound = {
        let vmax = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let cap = space.admissible_radius();
        if cap.is_finite() {
            cap.max(1.0) * 4.0
        } else {
            (vmax + 1.0) * 1e3
        }
    };
    let rep = match space.n {
        2 => {
            let dirs: Vec<[f64; 2]> = grid
                .dirs()
                .iter()
                .map(|d| [d.coords()[0], d.coords()[1]])
                .collect();
            let poly = wulff::wulff_2d(&dirs, values, bound)?;
            if poly.verts.iter().any(|v| norm(v) >= 0.999 * bound) {
                return Err(Error::InvalidBody(
                    "direction grid does not positively span the plane".into(),
                ));
            }
            Rep::Polygon(poly)
        }
        3 => {
            let dirs: Vec<[f64; 3]> = grid
                .dirs()
                .iter()
                .map(|d| [d.coords()[0], d.coords()[1], d.coords()[2]])
                .collect();
            Rep::Polyhedron(wulff::wulff_3d(&dirs, values)?)
        }
        _ => return Err(Error::InvalidBody("Wulff shapes are planar or spatial".into())),
    };
    Ok(ConvexBody { space, kind: BodyKind::Polytope, rep })
}

/// Support-grid approximation of the Hausdorff distance,
/// `max_grid |h_K - h_L|`.
pub fn hausdorff_distance(a: &ConvexBody, b: &ConvexBody, grid: &DirectionGrid) -> f64 {
    grid.dirs()
        .iter()
        .map(|v| (a.support(v) - b.support(v)).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaceform::dot;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn hyperbolic() -> SpaceForm {
        SpaceForm::new(-1.0, 2).unwrap()
    }

    fn euclidean() -> SpaceForm {
        SpaceForm::new(0.0, 2).unwrap()
    }

    #[test]
    fn support_examples() {
        let disk = ConvexBody::ball(euclidean(), &Point::origin(2), 1.0).unwrap();
        for k in 0..8 {
            let v = Direction::from_angle(0.7 * k as f64);
            assert_relative_eq!(disk.support(&v), 1.0, epsilon = 1e-14);
        }
        let hdisk = ConvexBody::ball(hyperbolic(), &Point::origin(2), 1.0).unwrap();
        assert_relative_eq!(
            hdisk.support(&Direction::axis(2, 0)),
            0.761_594_155_955_764_9,
            epsilon = 1e-14
        );
        let sq = ConvexBody::polytope_from_vertices(
            euclidean(),
            &[vec![1.0, 1.0], vec![-1.0, 1.0], vec![-1.0, -1.0], vec![1.0, -1.0]],
        )
        .unwrap();
        let diag = Direction::from_angle(std::f64::consts::FRAC_PI_4);
        assert_relative_eq!(sq.support(&diag), 2.0f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn support_lambda_examples() {
        let rho = 1.0f64.tanh();
        let disk = ConvexBody::ball(hyperbolic(), &Point::origin(2), 1.0).unwrap();
        let v = Direction::axis(2, 0);
        assert_relative_eq!(disk.support_lambda(&v).unwrap(), 1.0, epsilon = 1e-13);
        let edisk = ConvexBody::ball(euclidean(), &Point::origin(2), rho).unwrap();
        assert_relative_eq!(edisk.support_lambda(&v).unwrap(), rho, epsilon = 1e-14);
        let s = SpaceForm::new(1.0, 2).unwrap();
        let sball = ConvexBody::ball(s, &Point::origin(2), std::f64::consts::FRAC_PI_4).unwrap();
        assert_relative_eq!(
            sball.support_lambda(&v).unwrap(),
            std::f64::consts::FRAC_PI_4,
            epsilon = 1e-14
        );
    }

    #[test]
    fn off_center_ball_is_geodesic_sphere() {
        // every boundary point of the moved ball is at geodesic distance
        // alpha from the moved center
        let sf = hyperbolic();
        let c = Point::new(vec![0.3, -0.2]);
        let alpha = 0.8;
        let ball = ConvexBody::ball(sf, &c, alpha).unwrap();
        let samples = ball.boundary_quadrature(64).unwrap();
        for s in samples {
            assert_abs_diff_eq!(sf.distance(&s.x, &c), alpha, epsilon = 1e-9);
        }
        assert_eq!(ball.kind(), BodyKind::Ball);
    }

    #[test]
    fn ball_outside_model_rejected() {
        // geodesic balls always fit in negatively curved space
        let sf = hyperbolic();
        assert!(ConvexBody::ball(sf, &Point::new(vec![0.8, 0.0]), 1.5).is_ok());
        // but the center must be a model point
        assert!(ConvexBody::ball(sf, &Point::new(vec![1.1, 0.0]), 0.2).is_err());
        // and the positive chart rejects balls past the radius cap
        let s = SpaceForm::new(1.0, 2).unwrap();
        assert!(ConvexBody::ball(s, &Point::origin(2), 1.52).is_err());
        assert!(ConvexBody::ball(s, &Point::origin(2), 1.0).is_ok());
        let e = euclidean();
        assert!(ConvexBody::ball(e, &Point::origin(2), 1.5).is_ok());
    }

    #[test]
    fn boundary_quadrature_disk() {
        let disk = ConvexBody::ball(euclidean(), &Point::origin(2), 1.0).unwrap();
        let samples = disk.boundary_quadrature(10_000).unwrap();
        let total: f64 = samples.iter().map(|s| s.weight).sum();
        assert_abs_diff_eq!(total, std::f64::consts::TAU, epsilon = 1e-8);
        for s in samples.iter().step_by(97) {
            assert_relative_eq!(s.he, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn boundary_quadrature_square() {
        let sq = ConvexBody::polytope_from_vertices(
            euclidean(),
            &[vec![1.0, 1.0], vec![-1.0, 1.0], vec![-1.0, -1.0], vec![1.0, -1.0]],
        )
        .unwrap();
        let samples = sq.boundary_quadrature(256).unwrap();
        let total: f64 = samples.iter().map(|s| s.weight).sum();
        assert_relative_eq!(total, 8.0, epsilon = 1e-12);
        assert!(samples.iter().all(|s| s.he == 0.0));
    }

    #[test]
    fn boundary_quadrature_ellipse_perimeter() {
        let ell = ConvexBody::ellipsoid(euclidean(), &[2.0, 1.0]).unwrap();
        let samples = ell.boundary_quadrature(4096).unwrap();
        let total: f64 = samples.iter().map(|s| s.weight).sum();
        assert_relative_eq!(total, 9.688_448_220_547_676, epsilon = 1e-10);
    }

    #[test]
    fn boundary_quadrature_sphere() {
        let sf = SpaceForm::new(0.0, 3).unwrap();
        let ball = ConvexBody::ball(sf, &Point::origin(3), 1.0).unwrap();
        let samples = ball.boundary_quadrature(5000).unwrap();
        let total: f64 = samples.iter().map(|s| s.weight).sum();
        assert_relative_eq!(total, 4.0 * std::f64::consts::PI, epsilon = 1e-10);
        for s in samples.iter().step_by(173) {
            assert_relative_eq!(s.he, 1.0, epsilon = 1e-11);
        }
    }

    #[test]
    fn smooth_curvature_against_finite_differences() {
        let body = ConvexBody::smooth2d(euclidean(), 0.55, &[(3, 0.04, 0.0)]).unwrap();
        let samples = body.boundary_quadrature(10_000).unwrap();
        // reconstruct curvature from neighboring sample points
        let m = samples.len();
        for j in (7..m - 7).step_by(211) {
            let p0 = samples[j - 1].x.coords();
            let p1 = samples[j].x.coords();
            let p2 = samples[j + 1].x.coords();
            let h = std::f64::consts::TAU / m as f64;
            let d1 = [(p2[0] - p0[0]) / (2.0 * h), (p2[1] - p0[1]) / (2.0 * h)];
            let d2 = [
                (p2[0] - 2.0 * p1[0] + p0[0]) / (h * h),
                (p2[1] - 2.0 * p1[1] + p0[1]) / (h * h),
            ];
            let speed = (d1[0] * d1[0] + d1[1] * d1[1]).sqrt();
            let kappa = (d1[0] * d2[1] - d1[1] * d2[0]) / (speed.powi(3));
            assert_relative_eq!(samples[j].he, kappa, epsilon = 1e-6);
        }
    }

    #[test]
    fn wulff_of_support_contains_body() {
        let body = ConvexBody::smooth2d(euclidean(), 0.55, &[(3, 0.04, 0.0)]).unwrap();
        let mut last = f64::INFINITY;
        let probe = DirectionGrid::uniform_2d(4096);
        for &m in &[64usize, 128, 256, 512] {
            let grid = DirectionGrid::uniform_2d(m);
            let values: Vec<f64> = grid.dirs().iter().map(|v| body.support(v)).collect();
            let w = wulff_shape(euclidean(), &grid, &values).unwrap();
            // outer approximation
            let mut worst = f64::NEG_INFINITY;
            for v in probe.dirs() {
                worst = worst.max(body.support(v) - w.support(v));
            }
            assert!(worst <= 1e-12, "wulff lost containment by {worst}");
            let hd = hausdorff_distance(&w, &body, &probe);
            assert!(hd <= last + 1e-15, "hausdorff not decreasing: {hd} > {last}");
            last = hd;
        }
        assert!(last < 2e-4);
    }

    #[test]
    fn empty_wulff_detected() {
        let dirs = vec![
            Direction::axis(2, 0),
            Direction::new(vec![-1.0, 0.0]).unwrap(),
            Direction::axis(2, 1),
            Direction::new(vec![0.0, -1.0]).unwrap(),
        ];
        let grid = DirectionGrid::custom(dirs);
        let r = wulff_shape(euclidean(), &grid, &[-2.0, -2.0, 5.0, 5.0]);
        assert!(matches!(r, Err(Error::EmptyWulff)));
    }

    #[test]
    fn hausdorff_examples() {
        let e = euclidean();
        let d1 = ConvexBody::ball(e, &Point::origin(2), 1.0).unwrap();
        let d2 = ConvexBody::ball(e, &Point::origin(2), 2.0).unwrap();
        let grid = DirectionGrid::uniform_2d(2048);
        assert_relative_eq!(hausdorff_distance(&d1, &d1, &grid), 0.0);
        assert_relative_eq!(hausdorff_distance(&d1, &d2, &grid), 1.0, epsilon = 1e-12);
        let sq = ConvexBody::polytope_from_vertices(
            e,
            &[vec![1.0, 1.0], vec![-1.0, 1.0], vec![-1.0, -1.0], vec![1.0, -1.0]],
        )
        .unwrap();
        assert_relative_eq!(
            hausdorff_distance(&d1, &sq, &grid),
            2.0f64.sqrt() - 1.0,
            epsilon = 1e-6
        );
    }

    #[test]
    fn halfspace_polytope_roundtrip() {
        let e = euclidean();
        let hs = vec![
            (Direction::axis(2, 0), 1.0),
            (Direction::new(vec![-1.0, 0.0]).unwrap(), 1.0),
            (Direction::axis(2, 1), 1.0),
            (Direction::new(vec![0.0, -1.0]).unwrap(), 1.0),
        ];
        let sq = ConvexBody::polytope_from_halfspaces(e, &hs).unwrap();
        if let Rep::Polygon(p) = &sq.rep {
            assert_relative_eq!(p.area(), 4.0, epsilon = 1e-12);
        } else {
            panic!("expected polygon");
        }
    }

    #[test]
    fn transformed_polytope_and_rotation() {
        let sf = hyperbolic();
        let sq = ConvexBody::polytope_from_vertices(
            sf,
            &[vec![0.4, 0.4], vec![-0.4, 0.4], vec![-0.4, -0.4], vec![0.4, -0.4]],
        )
        .unwrap();
        let moved = sq.transformed(&sf.translation(&Point::new(vec![0.2, 0.1]))).unwrap();
        assert_eq!(moved.kind(), BodyKind::Polytope);
        // rotation preserves support up to angle shift
        let rot = sq.rotated2(0.3).unwrap();
        let v = Direction::from_angle(1.0);
        let v_back = Direction::from_angle(1.0 - 0.3);
        assert_abs_diff_eq!(rot.support(&v), sq.support(&v_back), epsilon = 1e-12);
    }

    #[test]
    fn icosahedral_grid_counts_and_norms() {
        let g = DirectionGrid::icosahedral_3d(1280);
        assert_eq!(g.len(), 1280);
        for d in g.dirs().iter().step_by(111) {
            assert_abs_diff_eq!(norm(d.coords()), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn ellipsoid_3d_volume() {
        let sf = SpaceForm::new(0.0, 3).unwrap();
        let ell = ConvexBody::ellipsoid(sf, &[1.5, 1.0, 0.5]).unwrap();
        // flat volume via the generic surface integral check: divergence of
        // x/3 over the boundary equals the volume
        let samples = ell.boundary_quadrature(20_480).unwrap();
        let vol: f64 = samples
            .iter()
            .map(|s| dot(s.x.coords(), s.ne.coords()) / 3.0 * s.weight)
            .sum();
        assert_relative_eq!(vol, 4.0 / 3.0 * std::f64::consts::PI * 0.75, epsilon = 1e-9);
    }
}
