//! Closed-form Gauss integrals over pairs of straight edges.

use nalgebra::DMatrix;

use crate::error::{KnotError, Result};
use crate::geom::{seg_min_distance, Vec3};
use crate::polylink::PolyLink;

/// Signed solid angle of the spherical triangle `a b c` of unit vectors.
fn triangle_solid_angle(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    let num = a.dot(&b.cross(c));
    let den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    2.0 * num.atan2(den)
}

/// The Gauss integral `∫∫ (t1 × t2) · (r1 − r2) / |r1 − r2|³` over the edges
/// `p1 p2` and `p3 p4`: the signed area swept on the unit sphere by the
/// direction from a point of the first edge to a point of the second.
/// Summing it over all pairs and dividing by 4π gives the linking number.
pub fn gauss_pair(p1: &Vec3, p2: &Vec3, p3: &Vec3, p4: &Vec3) -> Result<f64> {
    let scale = [p1, p2, p3, p4].iter().map(|p| p.amax()).fold(1.0, f64::max);
    if seg_min_distance(p1, p2, p3, p4) <= 1e-14 * scale {
        return Err(KnotError::TouchingSegments);
    }
    let corners = [p3 - p1, p4 - p1, p4 - p2, p3 - p2];
    let u: Vec<Vec3> = corners.iter().map(|r| r.normalize()).collect();
    let omega = triangle_solid_angle(&u[0], &u[1], &u[2]) + triangle_solid_angle(&u[0], &u[2], &u[3]);
    Ok(-omega)
}

/// Visit every non-adjacent edge pair `(i, j)`, `i < j`, with its Gauss
/// integral and the components the edges belong to.
fn for_each_pair(link: &PolyLink, mut f: impl FnMut(usize, usize, f64)) -> Result<()> {
    let fe = link.flat_edges();
    let mut err = None;
    fe.for_each_nonadjacent(|i, j| {
        if err.is_some() {
            return;
        }
        match gauss_pair(&fe.a[i], &fe.b[i], &fe.a[j], &fe.b[j]) {
            Ok(w) => f(fe.refs[i].component, fe.refs[j].component, w),
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AcnWrithe {
    /// Average crossing number over all projection directions, counting
    /// crossings between different components too.
    pub acn: f64,
    /// Sum of the self-writhes of the components.
    pub writhe: f64,
}

pub fn acn_writhe(link: &PolyLink) -> Result<AcnWrithe> {
    let mut acn = 0.0;
    let mut writhe = 0.0;
    for_each_pair(link, |ca, cb, w| {
        acn += w.abs();
        if ca == cb {
            writhe += w;
        }
    })?;
    let k = 1.0 / std::f64::consts::TAU;
    Ok(AcnWrithe { acn: acn * k, writhe: writhe * k })
}

/// Writhe of each component on its own.
pub fn component_writhes(link: &PolyLink) -> Result<Vec<f64>> {
    let mut out = vec![0.0; link.components.len()];
    for_each_pair(link, |ca, cb, w| {
        if ca == cb {
            out[ca] += w;
        }
    })?;
    Ok(out.into_iter().map(|w| w / std::f64::consts::TAU).collect())
}

/// Symmetric matrix of pairwise linking numbers, zero on the diagonal.
pub fn lnknum(link: &PolyLink) -> Result<DMatrix<i64>> {
    let n = link.components.len();
    if n < 2 {
        return Err(KnotError::TooFewComponents);
    }
    if let Some(i) = link.components.iter().position(|c| !c.closed) {
        return Err(KnotError::OpenComponent(i));
    }
    let mut raw = DMatrix::<f64>::zeros(n, n);
    for_each_pair(link, |ca, cb, w| {
        if ca != cb {
            raw[(ca, cb)] += w;
            raw[(cb, ca)] += w;
        }
    })?;
    let mut out = DMatrix::<i64>::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let x = raw[(a, b)] / (2.0 * std::f64::consts::TAU);
            let r = x.round();
            if (x - r).abs() >= 0.01 {
                return Err(KnotError::GenericityFailure(x));
            }
            out[(a, b)] = r as i64;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polylink::fixtures::hopf;
    use crate::polylink::{transform, Component, Transform};

    fn v(x: f64, y: f64, z: f64) -> Vec3 {
        Vec3::new(x, y, z)
    }

    /// Gauss–Legendre quadrature of the Gauss integrand, independent of the
    /// solid-angle construction.
    fn quadrature(p1: &Vec3, p2: &Vec3, p3: &Vec3, p4: &Vec3, panels: usize) -> f64 {
        let nodes = [
            (-0.906_179_845_938_664, 0.236_926_885_056_189),
            (-0.538_469_310_105_683, 0.478_628_670_499_366),
            (0.0, 0.568_888_888_888_889),
            (0.538_469_310_105_683, 0.478_628_670_499_366),
            (0.906_179_845_938_664, 0.236_926_885_056_189),
        ];
        let t1 = p2 - p1;
        let t2 = p4 - p3;
        let n = t1.cross(&t2);
        let h = 1.0 / panels as f64;
        let mut total = 0.0;
        for a in 0..panels {
            for b in 0..panels {
                for &(x, wx) in &nodes {
                    for &(y, wy) in &nodes {
                        let s = (a as f64 + (x + 1.0) / 2.0) * h;
                        let t = (b as f64 + (y + 1.0) / 2.0) * h;
                        let d = (p1 + t1 * s) - (p3 + t2 * t);
                        total += wx * wy * h * h / 4.0 * n.dot(&d) / d.norm().powi(3);
                    }
                }
            }
        }
        total
    }

    #[test]
    fn matches_quadrature() {
        let cases = [
            (v(-0.5, 0.0, 0.0), v(0.5, 0.0, 0.0), v(0.0, -0.5, 1.0), v(0.0, 0.5, 1.0)),
            (v(0.0, 0.0, 0.0), v(1.0, 0.2, 0.1), v(0.3, -1.0, 0.7), v(0.4, 1.5, -0.2)),
            (v(1.0, 2.0, 0.0), v(-1.0, 0.0, 0.5), v(0.0, 0.0, 3.0), v(2.0, 1.0, 2.0)),
        ];
        for (a, b, c, d) in cases {
            let exact = gauss_pair(&a, &b, &c, &d).unwrap();
            let numeric = quadrature(&a, &b, &c, &d, 24);
            assert!((exact - numeric).abs() < 1e-6, "{exact} vs {numeric}");
        }
    }

    #[test]
    fn symmetries() {
        let (a, b, c, d) = (v(0.0, 0.0, 0.0), v(1.0, 0.2, 0.1), v(0.3, -1.0, 0.7), v(0.4, 1.5, -0.2));
        let w = gauss_pair(&a, &b, &c, &d).unwrap();
        assert!((gauss_pair(&c, &d, &a, &b).unwrap() - w).abs() < 1e-12);
        assert!((gauss_pair(&b, &a, &c, &d).unwrap() + w).abs() < 1e-12);
        assert!(w.abs() <= 4.0 * std::f64::consts::PI);
    }

    #[test]
    fn coplanar_is_zero() {
        let w = gauss_pair(&v(0.0, 0.0, 0.0), &v(1.0, 0.0, 0.0), &v(0.0, 1.0, 0.0), &v(1.0, 2.0, 0.0)).unwrap();
        assert!(w.abs() < 1e-12);
        assert_eq!(
            gauss_pair(&v(0.0, 0.0, 0.0), &v(1.0, 0.0, 0.0), &v(0.5, 0.0, 0.0), &v(0.5, 1.0, 0.0)),
            Err(KnotError::TouchingSegments)
        );
    }

    #[test]
    fn hopf_links_once() {
        let m = lnknum(&hopf()).unwrap();
        assert_eq!(m[(0, 1)].abs(), 1);
        assert_eq!(m[(0, 1)], m[(1, 0)]);
        assert_eq!(m[(0, 0)], 0);
        let mirror = transform(&hopf(), &Transform::Reflect { axes: [true, false, false], component: None }).unwrap();
        assert_eq!(lnknum(&mirror).unwrap()[(0, 1)], -m[(0, 1)]);
    }

    fn circle(n: usize, r: f64, c: Vec3) -> Component {
        Component::new(
            (0..n)
                .map(|i| {
                    let t = std::f64::consts::TAU * i as f64 / n as f64;
                    c + v(r * t.cos(), r * t.sin(), 0.0)
                })
                .collect(),
            true,
        )
    }

    #[test]
    fn split_link_and_planar_polygon() {
        let link = PolyLink::new(vec![circle(12, 1.0, Vec3::zeros()), circle(12, 1.0, v(5.0, 0.0, 0.3))]);
        assert_eq!(lnknum(&link).unwrap()[(0, 1)], 0);
        let one = PolyLink::new(vec![circle(30, 2.0, Vec3::zeros())]);
        let aw = acn_writhe(&one).unwrap();
        assert!(aw.acn.abs() < 1e-9 && aw.writhe.abs() < 1e-9);
        assert_eq!(lnknum(&one), Err(KnotError::TooFewComponents));
    }
}
