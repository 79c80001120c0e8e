//! Wulff shapes: the intersection of the half-spaces `{x . v <= f(v)}` over
//! a finite direction grid, returned as an explicit polytope.
//!
//! For strictly positive profiles the intersection is computed through the
//! polar dual: the points `v_i / f(v_i)` are hulled and the hull is dualized
//! back, which is linear-time robust in the plane and a single 3-d hull in
//! space. Profiles with non-positive values fall back to sequential clipping
//! (plane) or a feasibility recentering (space); an infeasible profile is
//! reported as the empty Wulff shape.

use super::polytope::{convex_hull_2d, convex_hull_3d, Facet3, Polygon, Polyhedron};
use crate::spaceform::{dot, norm};
use crate::{Error, Result};

/// Planar Wulff shape over directions with values `f`.
pub(crate) fn wulff_2d(dirs: &[[f64; 2]], values: &[f64], bound: f64) -> Result<Polygon> {
    assert_eq!(dirs.len(), values.len());
    if dirs.len() < 3 {
        return Err(Error::InvalidBody("need at least 3 directions".into()));
    }
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-12);
    if values.iter().all(|&f| f > 1e-12 * scale) {
        wulff_2d_dual(dirs, values)
    } else {
        wulff_2d_clip(dirs, values, bound)
    }
}

fn wulff_2d_dual(dirs: &[[f64; 2]], values: &[f64]) -> Result<Polygon> {
    let duals: Vec<[f64; 2]> = dirs
        .iter()
        .zip(values)
        .map(|(v, &f)| [v[0] / f, v[1] / f])
        .collect();
    let hull = convex_hull_2d(&duals);
    if hull.len() < 3 {
        return Err(Error::EmptyWulff);
    }
    // dual vertex of each hull edge: intersection of the two constraints
    let m = hull.len();
    let mut verts = Vec::with_capacity(m);
    for i in 0..m {
        let p = hull[i];
        let q = hull[(i + 1) % m];
        // constraints p . x = 1, q . x = 1
        let det = p[0] * q[1] - p[1] * q[0];
        if det.abs() < 1e-300 {
            continue;
        }
        verts.push([(q[1] - p[1]) / det, (p[0] - q[0]) / det]);
    }
    if verts.len() < 3 {
        return Err(Error::EmptyWulff);
    }
    Polygon::from_ring(verts)
}

fn wulff_2d_clip(dirs: &[[f64; 2]], values: &[f64], bound: f64) -> Result<Polygon> {
    let b = bound;
    let mut poly =
        Polygon::from_points(&[[b, b], [-b, b], [-b, -b], [b, -b]]).expect("box");
    for (v, &f) in dirs.iter().zip(values) {
        match poly.clip([v[0], v[1]], f) {
            Some(p) => poly = p,
            None => return Err(Error::EmptyWulff),
        }
    }
    Ok(poly)
}

/// Spatial Wulff shape over directions with values `f`.
pub(crate) fn wulff_3d(dirs: &[[f64; 3]], values: &[f64]) -> Result<Polyhedron> {
    assert_eq!(dirs.len(), values.len());
    if dirs.len() < 4 {
        return Err(Error::InvalidBody("need at least 4 directions".into()));
    }
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-12);
    let shift = if values.iter().all(|&f| f > 1e-9 * scale) {
        vec![0.0; 3]
    } else {
        recenter(dirs, values)?
    };
    let shifted: Vec<f64> = dirs
        .iter()
        .zip(values)
        .map(|(v, &f)| f - dot(v, &shift))
        .collect();
    if shifted.iter().any(|&f| f <= 0.0) {
        return Err(Error::EmptyWulff);
    }

    let duals: Vec<[f64; 3]> = dirs
        .iter()
        .zip(&shifted)
        .map(|(v, &f)| [v[0] / f, v[1] / f, v[2] / f])
        .collect();
    let tris = convex_hull_3d(&duals)?;

    // vertices of the Wulff shape = dual planes of the hull facets
    let mut verts: Vec<[f64; 3]> = Vec::with_capacity(tris.len());
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); dirs.len()];
    for t in &tris {
        if t.offset <= 1e-12 {
            // origin is not interior to the dual hull: unbounded intersection
            return Err(Error::InvalidBody(
                "direction grid does not positively span space".into(),
            ));
        }
        let w = [
            t.normal[0] / t.offset + shift[0],
            t.normal[1] / t.offset + shift[1],
            t.normal[2] / t.offset + shift[2],
        ];
        let vid = verts.len();
        verts.push(w);
        for &c in &t.idx {
            incident[c].push(vid);
        }
    }

    // facet of the Wulff shape per active constraint: its incident vertices,
    // ordered around the constraint direction
    let mut facets = Vec::new();
    for (c, vids) in incident.iter().enumerate() {
        if vids.len() < 3 {
            continue;
        }
        let axis = dirs[c];
        let (e1, e2) = orthobasis(axis);
        let center: [f64; 3] = {
            let mut s = [0.0; 3];
            for &v in vids {
                s[0] += verts[v][0];
                s[1] += verts[v][1];
                s[2] += verts[v][2];
            }
            [s[0] / vids.len() as f64, s[1] / vids.len() as f64, s[2] / vids.len() as f64]
        };
        let mut ring: Vec<(f64, usize)> = vids
            .iter()
            .map(|&v| {
                let d = [
                    verts[v][0] - center[0],
                    verts[v][1] - center[1],
                    verts[v][2] - center[2],
                ];
                (dot(&d, &e2).atan2(dot(&d, &e1)), v)
            })
            .collect();
        ring.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        ring.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-12);
        if ring.len() < 3 {
            continue;
        }
        facets.push(Facet3 {
            normal: axis,
            offset: values[c],
            ring: ring.into_iter().map(|(_, v)| v).collect(),
        });
    }
    if facets.len() < 4 {
        return Err(Error::EmptyWulff);
    }
    Ok(Polyhedron::assemble(verts, facets))
}

/// Feasible point of `{x : x . v_i <= f_i}` by cyclic projections; errors
/// with the empty Wulff shape when the iteration stalls on violations.
fn recenter(dirs: &[[f64; 3]], values: &[f64]) -> Result<Vec<f64>> {
    let mut y = [0.0f64; 3];
    let spread = values.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v))
        - values.iter().fold(f64::INFINITY, |m, &v| m.min(v));
    let margin = 1e-3 * spread.abs().max(1e-6);
    for _ in 0..500 {
        let mut worst = 0.0f64;
        for (v, &f) in dirs.iter().zip(values) {
            let excess = dot(&y, v) - (f - margin);
            if excess > 0.0 {
                y[0] -= excess * v[0];
                y[1] -= excess * v[1];
                y[2] -= excess * v[2];
                worst = worst.max(excess);
            }
        }
        if worst <= 1e-14 {
            return Ok(y.to_vec());
        }
    }
    Err(Error::EmptyWulff)
}

fn orthobasis(axis: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let pick = if axis[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let mut e1 = [
        pick[1] * axis[2] - pick[2] * axis[1],
        pick[2] * axis[0] - pick[0] * axis[2],
        pick[0] * axis[1] - pick[1] * axis[0],
    ];
    let l1 = norm(&e1);
    e1 = [e1[0] / l1, e1[1] / l1, e1[2] / l1];
    let e2 = [
        axis[1] * e1[2] - axis[2] * e1[1],
        axis[2] * e1[0] - axis[0] * e1[2],
        axis[0] * e1[1] - axis[1] * e1[0],
    ];
    (e1, e2)
}
