//! The knot/link data model: ordered components of 3D beads.
//!
//! Edge `n` of a component joins vertex `n` to vertex `n + 1`, modulo the
//! vertex count when the component is closed. Two edges are adjacent iff
//! they share a vertex.

mod beads;
mod topology;
mod transform;
mod view;

pub use beads::{edit_beads, BeadEdit, NbeadsMode};
pub(crate) use beads::random_in_ball;
pub use topology::{edit_topology, visibility, Endpoint, Selection, TopoEdit, Visibility};
pub use transform::{align_axes, centre, fitto, random_unit, transform, Aligned, CentreMode, FitMode, Transform};
pub use view::{rotate_fix, view_ops, Projection, ViewOp, ViewTransform, ViewAxis};

use crate::error::{KnotError, Result};
use crate::geom::{seg_min_distance, Vec3};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Color {
    pub r: f64,
    pub g: f64,
    pub b: f64,
}

impl Color {
    pub const WHITE: Color = Color { r: 1.0, g: 1.0, b: 1.0 };
    pub const BLACK: Color = Color { r: 0.0, g: 0.0, b: 0.0 };

    pub fn new(r: f64, g: f64, b: f64) -> Self {
        Color {
            r: r.clamp(0.0, 1.0),
            g: g.clamp(0.0, 1.0),
            b: b.clamp(0.0, 1.0),
        }
    }

    /// HSV to RGB; hue in degrees, saturation and value in [0, 1].
    pub fn from_hsv(hue: f64, sat: f64, val: f64) -> Self {
        let h = hue.rem_euclid(360.0) / 60.0;
        let c = val * sat;
        let x = c * (1.0 - (h % 2.0 - 1.0).abs());
        let (r, g, b) = match h as u32 {
            0 => (c, x, 0.0),
            1 => (x, c, 0.0),
            2 => (0.0, c, x),
            3 => (0.0, x, c),
            4 => (x, 0.0, c),
            _ => (c, 0.0, x),
        };
        let m = val - c;
        Color::new(r + m, g + m, b + m)
    }
}

/// Automatic component colouring: hue starts at `hstart` and advances by
/// `hincr` degrees per component.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Palette {
    pub hstart: f64,
    pub hincr: f64,
    pub satur: f64,
    pub value: f64,
}

impl Default for Palette {
    fn default() -> Self {
        Palette { hstart: 0.0, hincr: 137.5, satur: 0.8, value: 0.9 }
    }
}

impl Palette {
    pub fn color(&self, index: usize) -> Color {
        Color::from_hsv(self.hstart + self.hincr * index as f64, self.satur, self.value)
    }
}

/// How a bead is tied to a fixed point in space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Anchor {
    /// Pulled toward the point by the `anch` force.
    Spring(Vec3),
    /// Never moved by relaxation.
    Pin(Vec3),
}

impl Anchor {
    pub fn point(&self) -> Vec3 {
        match self {
            Anchor::Spring(p) | Anchor::Pin(p) => *p,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub vertices: Vec<Vec3>,
    pub closed: bool,
    pub color: Color,
    pub hidden: bool,
    /// Either empty or exactly one slot per vertex.
    pub anchors: Vec<Option<Anchor>>,
}

impl Component {
    pub fn new(vertices: Vec<Vec3>, closed: bool) -> Self {
        Component { vertices, closed, color: Color::WHITE, hidden: false, anchors: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        let n = self.vertices.len();
        if self.closed {
            n
        } else {
            n.saturating_sub(1)
        }
    }

    /// Endpoints of local edge `i`.
    pub fn edge(&self, i: usize) -> (Vec3, Vec3) {
        let n = self.vertices.len();
        (self.vertices[i], self.vertices[(i + 1) % n])
    }

    pub fn edge_lengths(&self) -> Vec<f64> {
        (0..self.edge_count()).map(|i| {
            let (a, b) = self.edge(i);
            (b - a).norm()
        }).collect()
    }

    pub fn arc_length(&self) -> f64 {
        self.edge_lengths().iter().sum()
    }

    pub fn anchor(&self, i: usize) -> Option<Anchor> {
        self.anchors.get(i).copied().flatten()
    }

    pub fn is_pinned(&self, i: usize) -> bool {
        matches!(self.anchor(i), Some(Anchor::Pin(_)))
    }

    /// Insert a vertex before position `i`, keeping anchors aligned.
    pub fn insert_vertex(&mut self, i: usize, p: Vec3) {
        self.vertices.insert(i, p);
        if !self.anchors.is_empty() {
            self.anchors.insert(i, None);
        }
    }

    pub fn remove_vertex(&mut self, i: usize) -> Vec3 {
        if !self.anchors.is_empty() {
            self.anchors.remove(i);
        }
        self.vertices.remove(i)
    }

    /// Same geometry with vertex order reversed.
    pub fn reversed(&self) -> Self {
        let mut c = self.clone();
        c.vertices.reverse();
        c.anchors.reverse();
        c
    }

    fn check(&self, index: usize) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(KnotError::TooFewBeads(format!("component {index} has no vertices")));
        }
        if self.closed && self.vertices.len() < 3 {
            return Err(KnotError::CloseTooShort(index));
        }
        if !self.anchors.is_empty() && self.anchors.len() != self.vertices.len() {
            return Err(KnotError::BadSpec(format!("component {index} anchor count mismatch")));
        }
        for i in 0..self.edge_count() {
            let (a, b) = self.edge(i);
            if a == b {
                return Err(KnotError::CoincidentBeads(i, (i + 1) % self.vertices.len()));
            }
        }
        if self.vertices.iter().any(|v| !v.iter().all(|c| c.is_finite())) {
            return Err(KnotError::BadSpec(format!("component {index} has non-finite coordinates")));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct PolyLink {
    pub components: Vec<Component>,
    /// When set, only the first `n` beads (in global order) are shown.
    pub head: Option<usize>,
}

/// A (component, local edge index) pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeRef {
    pub component: usize,
    pub index: usize,
}

impl PolyLink {
    pub fn new(components: Vec<Component>) -> Self {
        PolyLink { components, head: None }
    }

    /// Build from raw polygons, colouring components with the default palette.
    pub fn from_polygons(polys: Vec<(Vec<Vec3>, bool)>) -> Self {
        let palette = Palette::default();
        let components = polys
            .into_iter()
            .enumerate()
            .map(|(i, (v, closed))| {
                let mut c = Component::new(v, closed);
                c.color = palette.color(i);
                c
            })
            .collect();
        PolyLink::new(components)
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn bead_count(&self) -> usize {
        self.components.iter().map(Component::len).sum()
    }

    pub fn edge_count(&self) -> usize {
        self.components.iter().map(Component::edge_count).sum()
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Vec3> {
        self.components.iter().flat_map(|c| c.vertices.iter())
    }

    pub fn vertices_mut(&mut self) -> impl Iterator<Item = &mut Vec3> {
        self.components.iter_mut().flat_map(|c| c.vertices.iter_mut())
    }

    /// Map a global bead index to (component, local index).
    pub fn locate_bead(&self, global: usize) -> Option<(usize, usize)> {
        let mut offset = 0;
        for (ci, c) in self.components.iter().enumerate() {
            if global < offset + c.len() {
                return Some((ci, global - offset));
            }
            offset += c.len();
        }
        None
    }

    pub fn component(&self, i: usize) -> Result<&Component> {
        self.components.get(i).ok_or(KnotError::BadComponentIndex(i))
    }

    pub fn validate(&self) -> Result<()> {
        self.components.iter().enumerate().try_for_each(|(i, c)| c.check(i))
    }

    pub fn centroid(&self) -> Option<Vec3> {
        let n = self.bead_count();
        if n == 0 {
            return None;
        }
        Some(self.vertices().fold(Vec3::zeros(), |acc, v| acc + v) / n as f64)
    }

    /// Largest absolute coordinate, used to scale tolerances.
    pub fn extent(&self) -> f64 {
        self.vertices().map(|v| v.amax()).fold(0.0, f64::max)
    }

    pub fn flat_edges(&self) -> FlatEdges {
        FlatEdges::new(self)
    }

    /// Minimum distance between non-adjacent edges and a pair achieving it.
    pub fn min_nonadjacent_distance(&self) -> Result<(f64, (EdgeRef, EdgeRef))> {
        self.flat_edges().min_nonadjacent_distance().ok_or(KnotError::NoNonadjacentPairs)
    }
}

/// All edges of a link flattened into one array, with the bookkeeping needed
/// to answer adjacency queries in constant time.
#[derive(Clone, Debug)]
pub struct FlatEdges {
    pub a: Vec<Vec3>,
    pub b: Vec<Vec3>,
    pub refs: Vec<EdgeRef>,
    comp_edges: Vec<usize>,
    comp_closed: Vec<bool>,
}

impl FlatEdges {
    pub fn new(link: &PolyLink) -> Self {
        let cap = link.edge_count();
        let mut fe = FlatEdges {
            a: Vec::with_capacity(cap),
            b: Vec::with_capacity(cap),
            refs: Vec::with_capacity(cap),
            comp_edges: Vec::new(),
            comp_closed: Vec::new(),
        };
        for (ci, c) in link.components.iter().enumerate() {
            for i in 0..c.edge_count() {
                let (p, q) = c.edge(i);
                fe.a.push(p);
                fe.b.push(q);
                fe.refs.push(EdgeRef { component: ci, index: i });
            }
            fe.comp_edges.push(c.edge_count());
            fe.comp_closed.push(c.closed);
        }
        fe
    }

    pub fn len(&self) -> usize {
        self.refs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.refs.is_empty()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        edges_adjacent(self.refs[i], self.refs[j], &self.comp_edges, &self.comp_closed)
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        seg_min_distance(&self.a[i], &self.b[i], &self.a[j], &self.b[j])
    }

    /// Visit every unordered non-adjacent pair `(i, j)` with `i < j`.
    pub fn for_each_nonadjacent(&self, mut f: impl FnMut(usize, usize)) {
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                if !self.adjacent(i, j) {
                    f(i, j);
                }
            }
        }
    }

    pub fn min_nonadjacent_distance(&self) -> Option<(f64, (EdgeRef, EdgeRef))> {
        // bounding spheres give a cheap lower bound that skips far pairs
        let mid: Vec<Vec3> = self.a.iter().zip(&self.b).map(|(a, b)| (a + b) * 0.5).collect();
        let half: Vec<f64> = self.a.iter().zip(&self.b).map(|(a, b)| (b - a).norm() * 0.5).collect();
        let mut best: Option<(f64, (EdgeRef, EdgeRef))> = None;
        self.for_each_nonadjacent(|i, j| {
            if let Some((b, _)) = best {
                let bound = (mid[i] - mid[j]).norm() - half[i] - half[j];
                if bound > b * (1.0 + 1e-9) + 1e-12 {
                    return;
                }
            }
            let d = self.distance(i, j);
            if best.is_none_or(|(b, _)| d < b) {
                best = Some((d, (self.refs[i], self.refs[j])));
            }
        });
        best
    }
}

pub(crate) fn edges_adjacent(e: EdgeRef, f: EdgeRef, comp_edges: &[usize], comp_closed: &[bool]) -> bool {
    if e.component != f.component {
        return false;
    }
    if e.index == f.index {
        return true;
    }
    let n = comp_edges[e.component];
    if comp_closed[e.component] {
        (e.index + 1) % n == f.index || (f.index + 1) % n == e.index
    } else {
        e.index.abs_diff(f.index) == 1
    }
}
