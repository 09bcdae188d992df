//! Crossing diagrams of generic planar projections, and the codes read off
//! them.
//!
//! The viewer sits on the positive side of the projection direction, so of
//! two strands meeting in the picture the one with larger depth is over. A
//! crossing is positive when the under-strand passes from right to left as
//! seen travelling along the over-strand.

use std::fmt;

use crate::error::{KnotError, Result};
use crate::geom::{cross2, orthonormal_basis, Mat3, Vec2, Vec3};
use crate::polylink::{PolyLink, ViewTransform};

#[derive(Clone, Debug, PartialEq)]
pub enum ProjectionMode {
    /// Look down the z-axis onto the xy-plane.
    Z,
    /// Orthographic projection through the rotation of a view.
    View(ViewTransform),
    /// Look along `-direction`.
    Direction(Vec3),
}

impl ProjectionMode {
    /// Rows are the screen x, screen y and depth axes.
    pub fn frame(&self) -> Mat3 {
        match self {
            ProjectionMode::Z => Mat3::identity(),
            ProjectionMode::View(v) => v.rotation,
            ProjectionMode::Direction(d) => {
                let d = d.normalize();
                let (u, w) = orthonormal_basis(&d);
                // u × w = d keeps the frame right-handed
                Mat3::from_rows(&[u.transpose(), w.transpose(), d.transpose()])
            }
        }
    }
}

/// Where a strand passes through a crossing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StrandPoint {
    pub component: usize,
    pub edge: usize,
    /// Position along the edge, in (0, 1).
    pub t: f64,
}

impl StrandPoint {
    /// Arc parameter `edge + t`, increasing along the component.
    pub fn arc(&self) -> f64 {
        self.edge as f64 + self.t
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Crossing {
    pub position: Vec2,
    pub over: StrandPoint,
    pub under: StrandPoint,
    /// +1 or -1.
    pub sign: i8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Passage {
    pub crossing: usize,
    pub over: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrossingDiagram {
    /// Numbered in order of first encounter, walking the components in turn.
    pub crossings: Vec<Crossing>,
    /// For each component, its passages in order along the curve.
    pub passages: Vec<Vec<Passage>>,
}

impl CrossingDiagram {
    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    /// Sum of crossing signs between components `a` and `b`, halved.
    pub fn linking(&self, a: usize, b: usize) -> f64 {
        let s: i64 = self
            .crossings
            .iter()
            .filter(|c| {
                (c.over.component == a && c.under.component == b) || (c.over.component == b && c.under.component == a)
            })
            .map(|c| c.sign as i64)
            .sum();
        s as f64 / 2.0
    }
}

fn degenerate(what: &str) -> KnotError {
    KnotError::DegenerateProjection(format!("{what}; try a small jitter"))
}

struct Projected {
    p: Vec<Vec2>,
    depth: Vec<f64>,
    /// (first vertex index, second vertex index, component, edge index)
    edges: Vec<(usize, usize, usize, usize)>,
    closed: Vec<bool>,
    counts: Vec<usize>,
    scale: f64,
}

fn project(link: &PolyLink, frame: &Mat3) -> Projected {
    let mut pr = Projected {
        p: Vec::with_capacity(link.bead_count()),
        depth: Vec::with_capacity(link.bead_count()),
        edges: Vec::with_capacity(link.edge_count()),
        closed: Vec::new(),
        counts: Vec::new(),
        scale: link.extent().max(1e-300),
    };
    for (ci, c) in link.components.iter().enumerate() {
        let base = pr.p.len();
        for v in &c.vertices {
            let q = frame * v;
            pr.p.push(Vec2::new(q.x, q.y));
            pr.depth.push(q.z);
        }
        for i in 0..c.edge_count() {
            pr.edges.push((base + i, base + (i + 1) % c.len(), ci, i));
        }
        pr.closed.push(c.closed);
        pr.counts.push(c.edge_count());
    }
    pr
}

fn adjacent(pr: &Projected, e: usize, f: usize) -> bool {
    let (a, b, _, _) = pr.edges[e];
    let (c, d, _, _) = pr.edges[f];
    a == c || a == d || b == c || b == d
}

/// All crossings of the projection, with genericity enforced.
pub fn project_crossings(link: &PolyLink, proj: &ProjectionMode) -> Result<CrossingDiagram> {
    let pr = project(link, &proj.frame());
    let eps = 1e-9 * pr.scale;
    let mut raw: Vec<Crossing> = Vec::new();
    let m = pr.edges.len();
    for e in 0..m {
        for f in (e + 1)..m {
            if adjacent(&pr, e, f) {
                // folded-back neighbours would overlap in the picture
                let (a, b, _, _) = pr.edges[e];
                let (c, d, _, _) = pr.edges[f];
                let shared = if a == c || a == d { a } else { b };
                let oe = if shared == a { b } else { a };
                let of = if shared == c { d } else { c };
                let (u, w) = (pr.p[oe] - pr.p[shared], pr.p[of] - pr.p[shared]);
                if cross2(&u, &w).abs() <= eps * (u.norm() + w.norm()) && u.dot(&w) > 0.0 {
                    return Err(degenerate("adjacent edges overlap in projection"));
                }
                continue;
            }
            if let Some(c) = crossing(&pr, e, f, eps)? {
                raw.push(c);
            }
        }
    }
    // two crossings at one spot on a strand means a triple point
    let mut along: Vec<(usize, usize, f64)> = raw
        .iter()
        .flat_map(|c| [(c.over.component, c.over.edge, c.over.t), (c.under.component, c.under.edge, c.under.t)])
        .collect();
    along.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)).then(x.2.total_cmp(&y.2)));
    for w in along.windows(2) {
        if w[0].0 == w[1].0 && w[0].1 == w[1].1 && (w[1].2 - w[0].2).abs() < 1e-9 {
            return Err(degenerate("three strands meet at one point"));
        }
    }
    Ok(assemble(link.components.len(), raw))
}

fn crossing(pr: &Projected, e: usize, f: usize, eps: f64) -> Result<Option<Crossing>> {
    let (a, b, ce, ie) = pr.edges[e];
    let (c, d, cf, jf) = pr.edges[f];
    let (p0, p1, q0, q1) = (pr.p[a], pr.p[b], pr.p[c], pr.p[d]);
    // quick reject on bounding boxes
    if p0.x.max(p1.x) < q0.x.min(q1.x) - eps
        || q0.x.max(q1.x) < p0.x.min(p1.x) - eps
        || p0.y.max(p1.y) < q0.y.min(q1.y) - eps
        || q0.y.max(q1.y) < p0.y.min(p1.y) - eps
    {
        return Ok(None);
    }
    let r = p1 - p0;
    let s = q1 - q0;
    let denom = cross2(&r, &s);
    let qp = q0 - p0;
    let (lr, ls) = (r.norm(), s.norm());
    if denom.abs() <= eps * (lr + ls).max(eps) {
        // parallel: degenerate only if collinear and overlapping
        if cross2(&qp, &r).abs() <= eps * lr.max(eps) {
            let t0 = qp.dot(&r) / (lr * lr);
            let t1 = (q1 - p0).dot(&r) / (lr * lr);
            if t0.max(t1) >= -1e-9 && t0.min(t1) <= 1.0 + 1e-9 {
                return Err(degenerate("parallel edges overlap in projection"));
            }
        }
        return Ok(None);
    }
    let t = cross2(&qp, &s) / denom;
    let u = cross2(&qp, &r) / denom;
    let tol_t = eps / lr.max(eps);
    let tol_u = eps / ls.max(eps);
    if t < -tol_t || t > 1.0 + tol_t || u < -tol_u || u > 1.0 + tol_u {
        return Ok(None);
    }
    if t <= tol_t || t >= 1.0 - tol_t || u <= tol_u || u >= 1.0 - tol_u {
        return Err(degenerate("a vertex projects onto another edge"));
    }
    let ze = pr.depth[a] + (pr.depth[b] - pr.depth[a]) * t;
    let zf = pr.depth[c] + (pr.depth[d] - pr.depth[c]) * u;
    if (ze - zf).abs() <= eps {
        return Err(KnotError::DegenerateProjection("edges intersect in space".into()));
    }
    let sp_e = StrandPoint { component: ce, edge: ie, t };
    let sp_f = StrandPoint { component: cf, edge: jf, t: u };
    let (over, under, od, ud) = if ze > zf { (sp_e, sp_f, r, s) } else { (sp_f, sp_e, s, r) };
    Ok(Some(Crossing {
        position: p0 + r * t,
        over,
        under,
        sign: if cross2(&od, &ud) > 0.0 { 1 } else { -1 },
    }))
}

fn assemble(ncomp: usize, raw: Vec<Crossing>) -> CrossingDiagram {
    // (component, arc, raw crossing, over?)
    let mut events: Vec<(usize, f64, usize, bool)> = Vec::with_capacity(raw.len() * 2);
    for (k, c) in raw.iter().enumerate() {
        events.push((c.over.component, c.over.arc(), k, true));
        events.push((c.under.component, c.under.arc(), k, false));
    }
    events.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)));
    let mut id = vec![usize::MAX; raw.len()];
    let mut crossings = Vec::with_capacity(raw.len());
    let mut passages = vec![Vec::new(); ncomp];
    for (comp, _, k, over) in events {
        if id[k] == usize::MAX {
            id[k] = crossings.len();
            crossings.push(raw[k]);
        }
        passages[comp].push(Passage { crossing: id[k], over });
    }
    CrossingDiagram { crossings, passages }
}

/// Number of crossings of a generic projection.
pub fn xing(link: &PolyLink, proj: &ProjectionMode) -> Result<usize> {
    Ok(project_crossings(link, proj)?.len())
}

/// Crossing count looking along `direction`, without genericity checks.
/// Meant for sampling many random directions.
pub fn count_crossings(link: &PolyLink, direction: &Vec3) -> usize {
    let frame = ProjectionMode::Direction(*direction).frame();
    let pr = project(link, &frame);
    let m = pr.edges.len();
    let boxes: Vec<[f64; 4]> = pr
        .edges
        .iter()
        .map(|&(a, b, _, _)| {
            let (p, q) = (pr.p[a], pr.p[b]);
            [p.x.min(q.x), p.x.max(q.x), p.y.min(q.y), p.y.max(q.y)]
        })
        .collect();
    let mut count = 0;
    for e in 0..m {
        let be = boxes[e];
        let (a, b, _, _) = pr.edges[e];
        for f in (e + 1)..m {
            let bf = boxes[f];
            if be[1] < bf[0] || bf[1] < be[0] || be[3] < bf[2] || bf[3] < be[2] {
                continue;
            }
            let (c, d, _, _) = pr.edges[f];
            if a == c || a == d || b == c || b == d {
                continue;
            }
            let (p0, p1, q0, q1) = (pr.p[a], pr.p[b], pr.p[c], pr.p[d]);
            let d1 = cross2(&(p1 - p0), &(q0 - p0));
            let d2 = cross2(&(p1 - p0), &(q1 - p0));
            let d3 = cross2(&(q1 - q0), &(p0 - q0));
            let d4 = cross2(&(q1 - q0), &(p1 - q0));
            if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
                count += 1;
            }
        }
    }
    count
}

/// Dowker–Thistlethwaite code of a one-component diagram, read from bead 0
/// along the component's orientation. Passages are labelled 1..2n; for each
/// odd label in turn the paired even label is reported, negated when the
/// even passage is the over-passage.
pub fn dowker(link: &PolyLink, proj: &ProjectionMode) -> Result<Vec<i64>> {
    if link.components.len() != 1 {
        return Err(KnotError::MultiComponent);
    }
    let d = project_crossings(link, proj)?;
    Ok(dowker_from(&d))
}

pub fn dowker_from(d: &CrossingDiagram) -> Vec<i64> {
    let seq = &d.passages[0];
    let mut labels = vec![[0usize; 2]; d.len()];
    let mut seen = vec![0usize; d.len()];
    for (k, p) in seq.iter().enumerate() {
        labels[p.crossing][seen[p.crossing]] = k + 1;
        seen[p.crossing] += 1;
    }
    let mut pairs: Vec<(usize, i64)> = Vec::with_capacity(d.len());
    for (k, p) in seq.iter().enumerate() {
        let label = k + 1;
        if label % 2 == 0 {
            continue;
        }
        let [x, y] = labels[p.crossing];
        let even = if x == label { y } else { x };
        let even_over = seq[even - 1].over;
        pairs.push((label, if even_over { -(even as i64) } else { even as i64 }));
    }
    pairs.sort_by_key(|p| p.0);
    pairs.into_iter().map(|p| p.1).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GaussToken {
    pub over: bool,
    /// 1-based crossing number.
    pub crossing: usize,
    pub sign: i8,
}

impl fmt::Display for GaussToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}{}",
            if self.over { 'O' } else { 'U' },
            self.crossing,
            if self.sign > 0 { '+' } else { '-' }
        )
    }
}

/// Extended Gauss code: per component, the passages as over/under, crossing
/// number and crossing sign.
pub fn gauss_extended(link: &PolyLink, proj: &ProjectionMode) -> Result<Vec<Vec<GaussToken>>> {
    let d = project_crossings(link, proj)?;
    Ok(gauss_from(&d))
}

pub fn gauss_from(d: &CrossingDiagram) -> Vec<Vec<GaussToken>> {
    d.passages
        .iter()
        .map(|seq| {
            seq.iter()
                .map(|p| GaussToken { over: p.over, crossing: p.crossing + 1, sign: d.crossings[p.crossing].sign })
                .collect()
        })
        .collect()
}

/// Space-separated signed integers.
pub fn format_dowker(code: &[i64]) -> String {
    code.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Comma-separated tokens per component, components separated by `/`.
pub fn format_gauss(code: &[Vec<GaussToken>]) -> String {
    code.iter()
        .map(|c| c.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join("/")
}

#[cfg(test)]
pub(crate) mod tests;
