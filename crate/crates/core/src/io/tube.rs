//! Tube meshes around the spline centreline, framed by rotation-minimizing
//! frames computed with the double reflection method.

use std::f64::consts::TAU;
use std::fmt::Write;

use crate::error::{KnotError, Result};
use crate::geom::{orthonormal_basis, Vec3};
use crate::polylink::PolyLink;
use crate::spline;

#[derive(Clone, Debug, PartialEq)]
pub struct TubeParams {
    pub radius: f64,
    /// Vertices per ring.
    pub nseg: usize,
    /// Rings per edge.
    pub ncur: usize,
    /// Extra rotation of the cross section, in radians, spread evenly over
    /// the length of each component. Missing entries count as zero.
    pub twist: Vec<f64>,
}

impl TubeParams {
    pub fn new(radius: f64, nseg: usize, ncur: usize) -> Self {
        TubeParams { radius, nseg, ncur, twist: Vec::new() }
    }

    fn validate(&self) -> Result<()> {
        if self.nseg < 3 {
            return Err(KnotError::BadTubeParams(format!("nseg must be at least 3, got {}", self.nseg)));
        }
        if self.ncur < 1 {
            return Err(KnotError::BadTubeParams("ncur must be at least 1".into()));
        }
        if !(self.radius > 0.0) {
            return Err(KnotError::BadTubeParams(format!("radius must be positive, got {}", self.radius)));
        }
        Ok(())
    }
}

/// Points along a curve with an orthonormal frame `(tangent, normal,
/// binormal)` at each, plus cumulative arc length.
#[derive(Clone, Debug, PartialEq)]
pub struct TubeFrame {
    pub points: Vec<Vec3>,
    pub tangents: Vec<Vec3>,
    pub normals: Vec<Vec3>,
    pub binormals: Vec<Vec3>,
    pub arclen: Vec<f64>,
    pub length: f64,
    pub closed: bool,
    /// Rotation about the first tangent carrying the first normal onto the
    /// normal transported once round a closed curve. Zero when open.
    pub holonomy: f64,
}

fn reflect(v: &Vec3, axis: &Vec3, c: f64) -> Vec3 {
    v - axis * (2.0 / c * axis.dot(v))
}

/// Transport `(r, t)` from `x0` to `x1`, arriving at tangent `t1`.
fn transport(x0: &Vec3, x1: &Vec3, r: &Vec3, t: &Vec3, t1: &Vec3) -> Vec3 {
    let v1 = x1 - x0;
    let c1 = v1.norm_squared();
    let (rl, tl) = if c1 > 0.0 { (reflect(r, &v1, c1), reflect(t, &v1, c1)) } else { (*r, *t) };
    let v2 = t1 - tl;
    let c2 = v2.norm_squared();
    let out = if c2 > 1e-30 { reflect(&rl, &v2, c2) } else { rl };
    // strip drift so the frame stays orthonormal
    (out - t1 * t1.dot(&out)).normalize()
}

pub fn rmf(points: &[Vec3], closed: bool) -> TubeFrame {
    let n = points.len();
    let tangents: Vec<Vec3> = (0..n)
        .map(|i| {
            let (a, b) = if closed {
                (points[(i + n - 1) % n], points[(i + 1) % n])
            } else {
                (points[i.saturating_sub(1)], points[(i + 1).min(n - 1)])
            };
            (b - a).normalize()
        })
        .collect();
    let mut normals = vec![orthonormal_basis(&tangents[0]).0];
    for i in 1..n {
        let r = transport(&points[i - 1], &points[i], &normals[i - 1], &tangents[i - 1], &tangents[i]);
        normals.push(r);
    }
    let binormals: Vec<Vec3> = tangents.iter().zip(&normals).map(|(t, r)| t.cross(r)).collect();
    let mut arclen = vec![0.0];
    for w in points.windows(2) {
        arclen.push(arclen.last().unwrap() + (w[1] - w[0]).norm());
    }
    let mut length = *arclen.last().unwrap();
    let mut holonomy = 0.0;
    if closed {
        length += (points[0] - points[n - 1]).norm();
        let back = transport(&points[n - 1], &points[0], &normals[n - 1], &tangents[n - 1], &tangents[0]);
        let sin = normals[0].cross(&back).dot(&tangents[0]);
        holonomy = sin.atan2(normals[0].dot(&back));
    }
    TubeFrame { points: points.to_vec(), tangents, normals, binormals, arclen, length, closed, holonomy }
}

fn centreline(link: &PolyLink, component: usize, ncur: usize) -> Result<TubeFrame> {
    let c = link.component(component)?;
    Ok(rmf(&spline::sample(&c.vertices, c.closed, ncur), c.closed))
}

/// Angle by which ring vertices miss their partners at the seam after the
/// cross section turns by `twist` over the whole length.
pub fn seam_mismatch(frame: &TubeFrame, nseg: usize, twist: f64) -> f64 {
    let step = TAU / nseg as f64;
    let x = (frame.holonomy + twist) / step;
    (x - x.round()).abs() * step
}

/// Twist in (−π/nseg, π/nseg] that lines up the cross sections where a
/// closed tube meets itself. It depends only on the centreline, so applying
/// it again changes nothing.
pub fn twfix(link: &PolyLink, component: usize, params: &TubeParams) -> Result<f64> {
    params.validate()?;
    if !link.component(component)?.closed {
        return Err(KnotError::OpenComponent(component));
    }
    let frame = centreline(link, component, params.ncur)?;
    let step = TAU / params.nseg as f64;
    let want = -frame.holonomy;
    let mut t = want - step * (want / step).round();
    if t <= -step / 2.0 {
        t += step;
    }
    Ok(t)
}

/// Indexed triangle mesh; `normals[i]` belongs to `vertices[i]`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TubeMesh {
    pub vertices: Vec<Vec3>,
    pub normals: Vec<Vec3>,
    pub faces: Vec<[usize; 3]>,
}

/// Tubes around the visible components. Closed components give closed
/// tubes; open ones are capped at both ends.
pub fn tube_mesh(link: &PolyLink, params: &TubeParams) -> Result<TubeMesh> {
    params.validate()?;
    let nseg = params.nseg;
    let step = TAU / nseg as f64;
    let mut mesh = TubeMesh::default();
    for (ci, c) in link.components.iter().enumerate() {
        if c.hidden {
            continue;
        }
        let f = centreline(link, ci, params.ncur)?;
        let twist = params.twist.get(ci).copied().unwrap_or(0.0);
        let base = mesh.vertices.len();
        let rings = f.points.len();
        for k in 0..rings {
            let extra = twist * f.arclen[k] / f.length;
            for j in 0..nseg {
                let th = step * j as f64 + extra;
                let dir = f.normals[k] * th.cos() + f.binormals[k] * th.sin();
                mesh.vertices.push(f.points[k] + dir * params.radius);
                mesh.normals.push(dir);
            }
        }
        let at = |k: usize, j: usize| base + k * nseg + j % nseg;
        let mut band = |k0: usize, k1: usize, shift: usize| {
            for j in 0..nseg {
                let (a, b) = (at(k0, j), at(k0, j + 1));
                let (c, d) = (at(k1, j + 1 + shift), at(k1, j + shift));
                mesh.faces.push([a, b, c]);
                mesh.faces.push([a, c, d]);
            }
        };
        for k in 0..rings - 1 {
            band(k, k + 1, 0);
        }
        if f.closed {
            let shift = ((f.holonomy + twist) / step).round().rem_euclid(nseg as f64) as usize;
            band(rings - 1, 0, shift);
        } else {
            for (k, sign) in [(0, -1.0), (rings - 1, 1.0)] {
                let centre = mesh.vertices.len();
                mesh.vertices.push(f.points[k]);
                mesh.normals.push(f.tangents[k] * sign);
                for j in 0..nseg {
                    let (a, b) = (at(k, j), at(k, j + 1));
                    mesh.faces.push(if sign < 0.0 { [centre, b, a] } else { [centre, a, b] });
                }
            }
        }
    }
    Ok(mesh)
}

/// Wavefront OBJ with per-vertex normals.
pub fn save_obj(link: &PolyLink, params: &TubeParams) -> Result<String> {
    let mesh = tube_mesh(link, params)?;
    let mut out = String::from("# tube mesh\n");
    for v in &mesh.vertices {
        let _ = writeln!(out, "v {} {} {}", v.x, v.y, v.z);
    }
    for n in &mesh.normals {
        let _ = writeln!(out, "vn {} {} {}", n.x, n.y, n.z);
    }
    for f in &mesh.faces {
        let [a, b, c] = f.map(|i| i + 1);
        let _ = writeln!(out, "f {a}//{a} {b}//{b} {c}//{c}");
    }
    Ok(out)
}
