//! Low-level geometric kernels shared by every other module: segment
//! distances, segment/triangle intersection and planar segment crossings.

use nalgebra::{Matrix3, Vector2, Vector3};

pub type Vec3 = Vector3<f64>;
pub type Vec2 = Vector2<f64>;
pub type Mat3 = Matrix3<f64>;

/// Distance from `p` to the closed segment `a`-`b`.
pub fn point_segment_distance(p: &Vec3, a: &Vec3, b: &Vec3) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).dot(&ab) / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Exact minimum Euclidean distance between the closed segments `p0`-`p1`
/// and `q0`-`q1`. Degenerate (zero-length) segments are treated as points.
///
/// The minimum is attained either at an endpoint of one segment or at a pair
/// of interior points where the connecting vector is perpendicular to both
/// directions, so both candidates are evaluated and the smaller one kept.
pub fn seg_min_distance(p0: &Vec3, p1: &Vec3, q0: &Vec3, q1: &Vec3) -> f64 {
    let mut best = point_segment_distance(p0, q0, q1)
        .min(point_segment_distance(p1, q0, q1))
        .min(point_segment_distance(q0, p0, p1))
        .min(point_segment_distance(q1, p0, p1));
    if let Some((s, t)) = interior_closest_params(p0, p1, q0, q1) {
        let d = ((p0 + (p1 - p0) * s) - (q0 + (q1 - q0) * t)).norm();
        best = best.min(d);
    }
    best
}

/// Parameters of the mutually closest points of the two supporting lines,
/// when the lines are not parallel and both parameters fall inside [0, 1].
fn interior_closest_params(p0: &Vec3, p1: &Vec3, q0: &Vec3, q1: &Vec3) -> Option<(f64, f64)> {
    let d1 = p1 - p0;
    let d2 = q1 - q0;
    let r = p0 - q0;
    let a = d1.dot(&d1);
    let e = d2.dot(&d2);
    let b = d1.dot(&d2);
    let c = d1.dot(&r);
    let f = d2.dot(&r);
    let denom = a * e - b * b;
    if a == 0.0 || e == 0.0 || denom <= 1e-14 * a * e {
        return None;
    }
    let s = (b * f - c * e) / denom;
    let t = (a * f - b * c) / denom;
    if (0.0..=1.0).contains(&s) && (0.0..=1.0).contains(&t) {
        Some((s, t))
    } else {
        None
    }
}

/// Conservative segment/triangle intersection test. Touching, grazing and
/// coplanar-overlap configurations within `tol` (a length) all report `true`.
pub fn segment_hits_triangle(p: &Vec3, q: &Vec3, a: &Vec3, b: &Vec3, c: &Vec3, tol: f64) -> bool {
    let n = (b - a).cross(&(c - a));
    let nn = n.norm();
    if nn == 0.0 {
        // Collapsed triangle: treat as the union of its edges.
        return seg_min_distance(p, q, a, b) <= tol
            || seg_min_distance(p, q, b, c) <= tol
            || seg_min_distance(p, q, c, a) <= tol;
    }
    let unit = n / nn;
    let dp = unit.dot(&(p - a));
    let dq = unit.dot(&(q - a));
    if (dp > tol && dq > tol) || (dp < -tol && dq < -tol) {
        return false;
    }
    if dp.abs() <= tol && dq.abs() <= tol {
        return point_in_triangle(p, a, b, c, &unit, tol)
            || point_in_triangle(q, a, b, c, &unit, tol)
            || seg_min_distance(p, q, a, b) <= tol
            || seg_min_distance(p, q, b, c) <= tol
            || seg_min_distance(p, q, c, a) <= tol;
    }
    let x = if dp.abs() <= tol {
        *p
    } else if dq.abs() <= tol {
        *q
    } else {
        p + (q - p) * (dp / (dp - dq))
    };
    point_in_triangle(&x, a, b, c, &unit, tol)
}

/// Inclusive containment of a (near-)coplanar point in a triangle.
fn point_in_triangle(x: &Vec3, a: &Vec3, b: &Vec3, c: &Vec3, unit_normal: &Vec3, tol: f64) -> bool {
    let edges = [(a, b), (b, c), (c, a)];
    let inside = edges.iter().all(|(u, v)| {
        let e = *v - *u;
        let len = e.norm();
        if len == 0.0 {
            return true;
        }
        // signed distance of x from the edge line, positive toward the interior
        e.cross(&(x - *u)).dot(unit_normal) / len >= -tol
    });
    inside
}

/// Proper or touching intersection of two planar segments. Returns the
/// parameters `(s, t)` along each segment of the intersection point when the
/// segments cross transversally.
pub fn segment_crossing_2d(p0: &Vec2, p1: &Vec2, q0: &Vec2, q1: &Vec2) -> Option<(f64, f64)> {
    let r = p1 - p0;
    let s = q1 - q0;
    let denom = cross2(&r, &s);
    if denom == 0.0 {
        return None;
    }
    let qp = q0 - p0;
    let t = cross2(&qp, &s) / denom;
    let u = cross2(&qp, &r) / denom;
    if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
        Some((t, u))
    } else {
        None
    }
}

pub fn cross2(a: &Vec2, b: &Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Rotation matrix about a coordinate axis (0 = x, 1 = y, 2 = z) by `degrees`,
/// right-handed.
pub fn axis_rotation(axis: usize, degrees: f64) -> Mat3 {
    let (s, c) = degrees.to_radians().sin_cos();
    match axis {
        0 => Mat3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c),
        1 => Mat3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c),
        _ => Mat3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0),
    }
}

/// Any orthonormal frame `(u, v)` perpendicular to the unit vector `d`.
pub fn orthonormal_basis(d: &Vec3) -> (Vec3, Vec3) {
    let helper = if d.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    let u = d.cross(&helper).normalize();
    let v = d.cross(&u);
    (u, v)
}
