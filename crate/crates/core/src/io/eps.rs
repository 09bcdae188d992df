//! Encapsulated PostScript knot diagrams with broken under-strands.

use std::fmt::Write;

use crate::codes::{project_crossings, ProjectionMode};
use crate::error::{KnotError, Result};
use crate::geom::Vec2;
use crate::polylink::{Color, Component, PolyLink};
use crate::spline;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BBox {
    #[default]
    Tight,
    Square,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpsOptions {
    /// 40 plain strands, 41 strands with a white outline, 45 filled bands.
    pub psmode: i64,
    /// Gap left in an under-strand, in strand widths.
    pub pserase: f64,
    pub bbox: BBox,
    /// Line width in points.
    pub strand_width: f64,
    /// Draw the spline through the beads rather than the polygon.
    pub smooth: bool,
    /// Spline samples per edge when smooth.
    pub ncur: usize,
}

impl Default for EpsOptions {
    fn default() -> Self {
        EpsOptions { psmode: 40, pserase: 4.0, bbox: BBox::Tight, strand_width: 1.5, smooth: false, ncur: 6 }
    }
}

/// Size of the longer side of the drawing, in points.
const PAGE: f64 = 288.0;

/// A stretch of strand between two gaps.
struct Arc {
    points: Vec<Vec2>,
    closed: bool,
    color: Color,
}

fn point_at(pts: &[Vec2], cum: &[f64], s: f64) -> Vec2 {
    let k = cum.partition_point(|&c| c <= s).clamp(1, pts.len() - 1);
    let (a, b) = (cum[k - 1], cum[k]);
    let t = if b > a { (s - a) / (b - a) } else { 0.0 };
    pts[k - 1] + (pts[k] - pts[k - 1]) * t
}

/// Polyline of `pts` (closed curves already repeat the first point) between
/// arc lengths `a < b`, where `b` may run past the end of a closed curve.
fn sub_path(pts: &[Vec2], cum: &[f64], a: f64, b: f64, total: f64) -> Vec<Vec2> {
    let mut out = vec![point_at(pts, cum, a.rem_euclid(total.max(f64::MIN_POSITIVE)))];
    let laps = if b > total { 2 } else { 1 };
    for lap in 0..laps {
        let off = lap as f64 * total;
        for (k, &c) in cum.iter().enumerate() {
            let s = c + off;
            // the repeated first point is already on the first lap
            if lap == 1 && k == 0 {
                continue;
            }
            if s > a && s < b {
                out.push(pts[k]);
            }
        }
    }
    out.push(point_at(pts, cum, if b > total { b - total } else { b }));
    out
}

fn strand_arcs(c: &Component, screen: Vec<Vec2>, mut gaps: Vec<f64>, half_gap: f64) -> Vec<Arc> {
    let mut pts = screen;
    if c.closed {
        pts.push(pts[0]);
    }
    let mut cum = vec![0.0];
    for w in pts.windows(2) {
        cum.push(cum.last().unwrap() + (w[1] - w[0]).norm());
    }
    let total = *cum.last().unwrap();
    gaps.sort_by(f64::total_cmp);
    let arc = |points: Vec<Vec2>, closed| Arc { points, closed, color: c.color };
    if gaps.is_empty() {
        if c.closed {
            pts.pop();
        }
        return vec![arc(pts, c.closed)];
    }
    let mut out = Vec::new();
    if c.closed {
        for i in 0..gaps.len() {
            let mut a = gaps[i] + half_gap;
            let mut b = if i + 1 < gaps.len() { gaps[i + 1] - half_gap } else { gaps[0] + total - half_gap };
            if a >= total {
                a -= total;
                b -= total;
            }
            if b > a {
                out.push(arc(sub_path(&pts, &cum, a, b, total), false));
            }
        }
    } else {
        let mut ends = vec![0.0];
        for g in &gaps {
            ends.push(g - half_gap);
            ends.push(g + half_gap);
        }
        ends.push(total);
        for w in ends.chunks(2) {
            let (a, b) = (w[0].max(0.0), w[1].min(total));
            if b > a {
                out.push(arc(sub_path(&pts, &cum, a, b, total), false));
            }
        }
    }
    out
}

fn path(out: &mut String, a: &Arc) {
    out.push_str("newpath\n");
    for (i, p) in a.points.iter().enumerate() {
        let _ = writeln!(out, "{:.3} {:.3} {}", p.x, p.y, if i == 0 { "moveto" } else { "lineto" });
    }
    if a.closed {
        out.push_str("closepath\n");
    }
}

/// Offset of a polyline to its left by `d`, using vertex normals averaged
/// from the neighbouring edges.
fn offset(points: &[Vec2], closed: bool, d: f64) -> Vec<Vec2> {
    let n = points.len();
    let normal = |i: usize, j: usize| {
        let e = points[j] - points[i];
        let l = e.norm();
        if l > 0.0 { Vec2::new(-e.y, e.x) / l } else { Vec2::zeros() }
    };
    (0..n)
        .map(|i| {
            let before = if i > 0 { Some(normal(i - 1, i)) } else if closed { Some(normal(n - 1, 0)) } else { None };
            let after = if i + 1 < n { Some(normal(i, i + 1)) } else if closed { Some(normal(n - 1, 0)) } else { None };
            let m = match (before, after) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) | (None, Some(a)) => a,
                _ => Vec2::zeros(),
            };
            let l = m.norm();
            if l > 0.0 { points[i] + m * (d / l) } else { points[i] }
        })
        .collect()
}

fn band(out: &mut String, a: &Arc, half: f64) {
    let left = offset(&a.points, a.closed, half);
    let mut right = offset(&a.points, a.closed, -half);
    out.push_str("newpath\n");
    let emit = |out: &mut String, pts: &[Vec2], first: &str| {
        for (i, p) in pts.iter().enumerate() {
            let _ = writeln!(out, "{:.3} {:.3} {}", p.x, p.y, if i == 0 { first } else { "lineto" });
        }
    };
    emit(out, &left, "moveto");
    if a.closed {
        out.push_str("closepath\n");
        emit(out, &right, "moveto");
    } else {
        right.reverse();
        emit(out, &right, "lineto");
    }
    out.push_str("closepath\n");
    let c = a.color;
    let _ = writeln!(out, "gsave {:.3} {:.3} {:.3} setrgbcolor eofill grestore", c.r, c.g, c.b);
    out.push_str("0 setgray stroke\n");
}

/// A knot diagram of the visible components seen through `proj`.
pub fn psout(link: &PolyLink, proj: &ProjectionMode, opts: &EpsOptions) -> Result<String> {
    if ![40, 41, 45].contains(&opts.psmode) {
        return Err(KnotError::UnsupportedMode(opts.psmode));
    }
    if !(opts.strand_width > 0.0) || !(opts.pserase >= 0.0) {
        return Err(KnotError::BadSpec("strand width must be positive and pserase non-negative".into()));
    }
    let comps: Vec<Component> = link
        .components
        .iter()
        .filter(|c| !c.hidden)
        .map(|c| {
            let mut c = c.clone();
            if opts.smooth {
                c.vertices = spline::sample(&c.vertices, c.closed, opts.ncur.max(1));
                c.anchors.clear();
            }
            c
        })
        .collect();
    let curve = PolyLink::new(comps);
    if curve.is_empty() {
        return Err(KnotError::EmptyLink);
    }
    let diagram = project_crossings(&curve, proj)?;
    let frame = proj.frame();
    let flat: Vec<Vec<Vec2>> = curve
        .components
        .iter()
        .map(|c| c.vertices.iter().map(|v| (frame * v).xy()).collect())
        .collect();

    let (mut lo, mut hi) = (Vec2::repeat(f64::INFINITY), Vec2::repeat(f64::NEG_INFINITY));
    for p in flat.iter().flatten() {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    let span = (hi - lo).max();
    if !(span > 0.0) {
        return Err(KnotError::ZeroScale);
    }
    let w = opts.strand_width;
    let margin = 3.0 * w;
    let scale = PAGE / span;
    let size = (hi - lo) * scale + Vec2::repeat(2.0 * margin);
    let (width, height) = match opts.bbox {
        BBox::Tight => (size.x.ceil(), size.y.ceil()),
        BBox::Square => {
            let s = size.x.max(size.y).ceil();
            (s, s)
        }
    };
    let shift = Vec2::new(width - size.x, height - size.y) / 2.0 + Vec2::repeat(margin);
    let to_page = |p: &Vec2| (p - lo) * scale + shift;

    let half_gap = opts.pserase * w / 2.0;
    let mut arcs = Vec::new();
    for (ci, c) in curve.components.iter().enumerate() {
        let screen: Vec<Vec2> = flat[ci].iter().map(to_page).collect();
        let lens: Vec<f64> = (0..c.edge_count())
            .map(|e| (screen[(e + 1) % screen.len()] - screen[e]).norm())
            .collect();
        let gaps = diagram
            .crossings
            .iter()
            .filter(|x| x.under.component == ci)
            .map(|x| lens[..x.under.edge].iter().sum::<f64>() + x.under.t * lens[x.under.edge])
            .collect();
        arcs.extend(strand_arcs(c, screen, gaps, half_gap));
    }

    let mut out = String::new();
    out.push_str("%!PS-Adobe-3.0 EPSF-3.0\n");
    let _ = writeln!(out, "%%BoundingBox: 0 0 {} {}", width as i64, height as i64);
    out.push_str("%%Creator: knotforge\n%%Pages: 1\n%%EndComments\n");
    out.push_str("save\n1 setlinecap 1 setlinejoin\n");
    match opts.psmode {
        40 => {
            let _ = writeln!(out, "0 setgray {w:.3} setlinewidth");
            for a in &arcs {
                path(&mut out, a);
                out.push_str("stroke\n");
            }
        }
        41 => {
            for a in &arcs {
                path(&mut out, a);
                let _ = writeln!(out, "gsave 1 setgray {:.3} setlinewidth stroke grestore", 3.0 * w);
                let _ = writeln!(out, "0 setgray {w:.3} setlinewidth stroke");
            }
        }
        _ => {
            let _ = writeln!(out, "{:.3} setlinewidth", w / 3.0);
            for a in &arcs {
                band(&mut out, a, 1.5 * w);
            }
        }
    }
    out.push_str("restore\nshowpage\n%%EOF\n");
    Ok(out)
}
