//! Interpolating cubic Bézier spline through the beads of a component.
//!
//! Each edge is a cubic Bézier segment whose inner control points come from
//! Catmull-Rom tangents `(v[i+1] - v[i-1]) / 2`; at the ends of an open
//! component the tangent is the one-sided difference.

use crate::geom::Vec3;

fn tangent(vs: &[Vec3], closed: bool, i: usize) -> Vec3 {
    let n = vs.len();
    if closed {
        (vs[(i + 1) % n] - vs[(i + n - 1) % n]) / 2.0
    } else if n < 2 {
        Vec3::zeros()
    } else if i == 0 {
        vs[1] - vs[0]
    } else if i == n - 1 {
        vs[n - 1] - vs[n - 2]
    } else {
        (vs[i + 1] - vs[i - 1]) / 2.0
    }
}

/// Control points of the Bézier segment over edge `i`.
pub fn edge_controls(vs: &[Vec3], closed: bool, i: usize) -> [Vec3; 4] {
    let n = vs.len();
    let j = (i + 1) % n;
    let (a, b) = (vs[i], vs[j]);
    [a, a + tangent(vs, closed, i) / 3.0, b - tangent(vs, closed, j) / 3.0, b]
}

pub fn bezier(c: &[Vec3; 4], t: f64) -> Vec3 {
    let s = 1.0 - t;
    c[0] * (s * s * s) + c[1] * (3.0 * s * s * t) + c[2] * (3.0 * s * t * t) + c[3] * (t * t * t)
}

/// `per_edge` points per edge, starting at each bead. Open curves also get
/// their final bead appended.
pub fn sample(vs: &[Vec3], closed: bool, per_edge: usize) -> Vec<Vec3> {
    let n = vs.len();
    let edges = if closed { n } else { n.saturating_sub(1) };
    let per_edge = per_edge.max(1);
    let mut out = Vec::with_capacity(edges * per_edge + 1);
    for i in 0..edges {
        let c = edge_controls(vs, closed, i);
        for k in 0..per_edge {
            out.push(bezier(&c, k as f64 / per_edge as f64));
        }
    }
    if !closed {
        if let Some(last) = vs.last() {
            out.push(*last);
        }
    }
    out
}

/// `count` points spaced evenly by arc length along the spline. Closed curves
/// start at bead 0 and do not repeat it; open curves include both ends.
pub fn resample_arclength(vs: &[Vec3], closed: bool, count: usize) -> Vec<Vec3> {
    const DENSE: usize = 32;
    let mut dense = sample(vs, closed, DENSE);
    if closed {
        dense.push(vs[0]);
    }
    let mut cum = Vec::with_capacity(dense.len());
    let mut acc = 0.0;
    cum.push(0.0);
    for w in dense.windows(2) {
        acc += (w[1] - w[0]).norm();
        cum.push(acc);
    }
    let total = acc;
    let steps = if closed { count } else { count.saturating_sub(1).max(1) };
    let mut out = Vec::with_capacity(count);
    let mut seg = 0;
    for k in 0..count {
        let target = total * k as f64 / steps as f64;
        while seg + 1 < cum.len() - 1 && cum[seg + 1] < target {
            seg += 1;
        }
        let span = cum[seg + 1] - cum[seg];
        let t = if span > 0.0 { ((target - cum[seg]) / span).clamp(0.0, 1.0) } else { 0.0 };
        out.push(dense[seg] + (dense[seg + 1] - dense[seg]) * t);
    }
    if !closed && count >= 2 {
        out[count - 1] = *vs.last().unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(n: usize) -> Vec<Vec3> {
        (0..n)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / n as f64;
                Vec3::new(t.cos(), t.sin(), 0.0)
            })
            .collect()
    }

    #[test]
    fn interpolates_beads() {
        let vs = circle(7);
        let s = sample(&vs, true, 4);
        assert_eq!(s.len(), 28);
        for (i, v) in vs.iter().enumerate() {
            assert_eq!(s[4 * i], *v);
        }
    }

    #[test]
    fn straight_line_stays_straight() {
        let vs: Vec<_> = (0..4).map(|i| Vec3::new(i as f64, 0.0, 0.0)).collect();
        for p in sample(&vs, false, 5) {
            assert!(p.y.abs() < 1e-15 && p.z.abs() < 1e-15);
        }
        let r = resample_arclength(&vs, false, 7);
        for (k, p) in r.iter().enumerate() {
            assert!((p.x - k as f64 * 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn arclength_resample_is_even() {
        let r = resample_arclength(&circle(12), true, 40);
        let lens: Vec<f64> = (0..40).map(|i| (r[(i + 1) % 40] - r[i]).norm()).collect();
        let max = lens.iter().cloned().fold(0.0, f64::max);
        let min = lens.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(max / min < 1.01, "ratio {}", max / min);
    }
}
