use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Component, PolyLink};
use crate::error::{KnotError, Result};

/// One component or all of them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    One(usize),
    All,
}

/// First (`F<i>`) or last (`L<i>`) bead of component `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Endpoint {
    First(usize),
    Last(usize),
}

impl Endpoint {
    pub fn component(&self) -> usize {
        match self {
            Endpoint::First(i) | Endpoint::Last(i) => *i,
        }
    }
}

impl std::str::FromStr for Endpoint {
    type Err = KnotError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || KnotError::Parse { position: 0, message: format!("bad endpoint '{s}', expected F<n> or L<n>") };
        let mut chars = s.chars();
        let kind = chars.next().ok_or_else(bad)?;
        let idx: usize = chars.as_str().parse().map_err(|_| bad())?;
        match kind {
            'F' | 'f' => Ok(Endpoint::First(idx)),
            'L' | 'l' => Ok(Endpoint::Last(idx)),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TopoEdit {
    /// Delete the edge starting at this global bead index.
    Cut(usize),
    /// Delete every edge lying entirely on the positive side of the plane
    /// `coordinate[axis] = offset`.
    CutOutside { axis: usize, offset: f64 },
    /// Cut every component into this many open pieces.
    CutPieces(usize),
    Join(Endpoint, Endpoint),
    Open(Selection),
    Close(Selection),
    /// Make bead `k` the new bead 0 of the selected closed components.
    Shift { by: usize, selection: Selection },
    RevBeads(Selection),
    Duplicate(usize),
    Delete(Selection),
    Keep(usize),
    Swap(usize, usize),
    SwapRandom { seed: u64 },
}

fn check_index(link: &PolyLink, sel: Selection) -> Result<()> {
    if let Selection::One(i) = sel {
        link.component(i)?;
    }
    Ok(())
}

fn selected(sel: Selection, i: usize) -> bool {
    match sel {
        Selection::All => true,
        Selection::One(k) => k == i,
    }
}

pub fn edit_topology(link: &PolyLink, spec: &TopoEdit) -> Result<PolyLink> {
    let mut out = link.clone();
    match spec {
        TopoEdit::Cut(global) => {
            let (ci, local) = link.locate_bead(*global).ok_or(KnotError::BadIndex(*global))?;
            let c = &link.components[ci];
            if local >= c.edge_count() {
                return Err(KnotError::BadIndex(*global));
            }
            if c.closed {
                let mut opened = c.clone();
                opened.vertices.rotate_left(local + 1);
                if !opened.anchors.is_empty() {
                    opened.anchors.rotate_left(local + 1);
                }
                opened.closed = false;
                out.components[ci] = opened;
            } else {
                let (first, second) = split_open(c, local + 1);
                out.components.splice(ci..=ci, [first, second]);
            }
        }
        TopoEdit::CutOutside { axis, offset } => {
            if *axis > 2 {
                return Err(KnotError::BadIndex(*axis));
            }
            let mut comps = Vec::new();
            for c in &link.components {
                let n = c.len();
                let removed: Vec<bool> = (0..c.edge_count())
                    .map(|i| {
                        let (a, b) = c.edge(i);
                        a[*axis] > *offset && b[*axis] > *offset
                    })
                    .collect();
                comps.extend(cut_edges(c, &removed, n));
            }
            out.components = comps;
        }
        TopoEdit::CutPieces(pieces) => {
            if *pieces == 0 {
                return Err(KnotError::BadCount(0));
            }
            let mut comps = Vec::new();
            for c in &link.components {
                let edges = c.edge_count();
                let cuts = if c.closed { *pieces } else { pieces - 1 };
                if cuts > edges || (c.closed && *pieces > c.len()) || (!c.closed && *pieces > c.len()) {
                    return Err(KnotError::TooFewBeads(format!("cannot cut {} beads into {pieces} pieces", c.len())));
                }
                let mut removed = vec![false; edges];
                if c.closed {
                    // piece k holds beads [k*n/p, (k+1)*n/p)
                    for k in 0..*pieces {
                        let end = (k + 1) * c.len() / pieces;
                        removed[end - 1] = true;
                    }
                } else {
                    for k in 1..*pieces {
                        let start = k * c.len() / pieces;
                        removed[start - 1] = true;
                    }
                }
                comps.extend(cut_edges(c, &removed, c.len()));
            }
            out.components = comps;
        }
        TopoEdit::Join(e1, e2) => {
            let (i, j) = (e1.component(), e2.component());
            let a = link.component(i)?;
            let b = link.component(j)?;
            if a.closed {
                return Err(KnotError::JoinOnClosedComponent(i));
            }
            if b.closed {
                return Err(KnotError::JoinOnClosedComponent(j));
            }
            if i == j {
                if matches!((e1, e2), (Endpoint::First(_), Endpoint::First(_)) | (Endpoint::Last(_), Endpoint::Last(_))) {
                    return Err(KnotError::BadSpec("cannot join an endpoint to itself".into()));
                }
                return edit_topology(link, &TopoEdit::Close(Selection::One(i)));
            }
            // orient so the chain runs ... e1 -> e2 ...
            let head = match e1 {
                Endpoint::Last(_) => a.clone(),
                Endpoint::First(_) => a.reversed(),
            };
            let tail = match e2 {
                Endpoint::First(_) => b.clone(),
                Endpoint::Last(_) => b.reversed(),
            };
            let mut joined = head.clone();
            let fuse = head.vertices.last() == tail.vertices.first();
            let skip = usize::from(fuse);
            if joined.anchors.is_empty() && !tail.anchors.is_empty() {
                joined.anchors = vec![None; joined.len()];
            }
            for k in skip..tail.len() {
                joined.vertices.push(tail.vertices[k]);
                if !joined.anchors.is_empty() {
                    joined.anchors.push(tail.anchor(k));
                }
            }
            let (lo, hi) = (i.min(j), i.max(j));
            out.components.remove(hi);
            out.components[lo] = joined;
        }
        TopoEdit::Open(sel) => {
            check_index(link, *sel)?;
            for (ci, c) in out.components.iter_mut().enumerate() {
                if selected(*sel, ci) {
                    c.closed = false;
                }
            }
        }
        TopoEdit::Close(sel) => {
            check_index(link, *sel)?;
            for (ci, c) in out.components.iter_mut().enumerate() {
                if selected(*sel, ci) && !c.closed {
                    if c.len() > 1 && c.vertices.first() == c.vertices.last() {
                        c.remove_vertex(c.len() - 1);
                    }
                    if c.len() < 3 {
                        return Err(KnotError::CloseTooShort(ci));
                    }
                    c.closed = true;
                }
            }
        }
        TopoEdit::Shift { by, selection } => {
            check_index(link, *selection)?;
            for (ci, c) in out.components.iter_mut().enumerate() {
                if selected(*selection, ci) && c.closed {
                    let k = by % c.len();
                    c.vertices.rotate_left(k);
                    if !c.anchors.is_empty() {
                        c.anchors.rotate_left(k);
                    }
                }
            }
        }
        TopoEdit::RevBeads(sel) => {
            check_index(link, *sel)?;
            for (ci, c) in out.components.iter_mut().enumerate() {
                if selected(*sel, ci) {
                    *c = c.reversed();
                }
            }
        }
        TopoEdit::Duplicate(i) => {
            let c = link.component(*i)?.clone();
            out.components.push(c);
        }
        TopoEdit::Delete(sel) => {
            check_index(link, *sel)?;
            match sel {
                Selection::All => out.components.clear(),
                Selection::One(i) => {
                    out.components.remove(*i);
                }
            }
        }
        TopoEdit::Keep(i) => {
            let c = link.component(*i)?.clone();
            out.components = vec![c];
        }
        TopoEdit::Swap(i, j) => {
            link.component(*i)?;
            link.component(*j)?;
            out.components.swap(*i, *j);
        }
        TopoEdit::SwapRandom { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            out.components.shuffle(&mut rng);
        }
    }
    Ok(out)
}

/// Split an open component before local vertex `at`.
fn split_open(c: &Component, at: usize) -> (Component, Component) {
    let mut first = c.clone();
    let mut second = c.clone();
    first.vertices.truncate(at);
    second.vertices.drain(..at);
    if !c.anchors.is_empty() {
        first.anchors.truncate(at);
        second.anchors.drain(..at);
    }
    (first, second)
}

/// Remove the flagged edges and return the surviving runs as components.
/// Vertices left with no surviving edge are dropped.
fn cut_edges(c: &Component, removed: &[bool], n: usize) -> Vec<Component> {
    if !removed.iter().any(|&r| r) {
        return vec![c.clone()];
    }
    let make = |idx: &[usize]| {
        let mut piece = c.clone();
        piece.closed = false;
        piece.vertices = idx.iter().map(|&k| c.vertices[k]).collect();
        piece.anchors = if c.anchors.is_empty() { Vec::new() } else { idx.iter().map(|&k| c.anchors[k]).collect() };
        piece
    };
    let mut pieces = Vec::new();
    // start right after a removed edge so runs never wrap for closed curves
    let start = if c.closed { removed.iter().position(|&r| r).unwrap() + 1 } else { 0 };
    let edges = removed.len();
    let mut run: Vec<usize> = vec![start % n];
    for step in 0..edges {
        let e = (start + step) % n;
        if e >= edges {
            break;
        }
        if removed[e] {
            if run.len() >= 2 {
                pieces.push(make(&run));
            }
            run = vec![(e + 1) % n];
        } else {
            run.push((e + 1) % n);
        }
    }
    if run.len() >= 2 {
        pieces.push(make(&run));
    }
    pieces
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Visibility {
    Hide(Selection),
    Unhide(Selection),
    /// Show only the first `n` beads, or everything with `None`.
    Head(Option<usize>),
}

/// Visibility only changes flags; hidden geometry still takes part in every
/// computation.
pub fn visibility(link: &PolyLink, spec: Visibility) -> Result<PolyLink> {
    let mut out = link.clone();
    match spec {
        Visibility::Hide(sel) | Visibility::Unhide(sel) => {
            check_index(link, sel)?;
            let hide = matches!(spec, Visibility::Hide(_));
            for (ci, c) in out.components.iter_mut().enumerate() {
                if selected(sel, ci) {
                    c.hidden = hide;
                }
            }
        }
        Visibility::Head(n) => out.head = n,
    }
    Ok(out)
}

impl PolyLink {
    /// Number of beads a renderer should draw.
    pub fn visible_bead_count(&self) -> usize {
        let shown: usize = self.components.iter().filter(|c| !c.hidden).map(Component::len).sum();
        match self.head {
            Some(n) => {
                let mut remaining = n;
                let mut count = 0;
                for c in &self.components {
                    let take = remaining.min(c.len());
                    if !c.hidden {
                        count += take;
                    }
                    remaining -= take;
                }
                count
            }
            None => shown,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::geom::Vec3;

    fn open_chain(n: usize, y: f64) -> Component {
        Component::new((0..n).map(|i| Vec3::new(i as f64, y, 0.0)).collect(), false)
    }

    #[test]
    fn open_close_roundtrip() {
        let p = ngon(9, 2.0);
        let o = edit_topology(&p, &TopoEdit::Open(Selection::One(0))).unwrap();
        assert!(!o.components[0].closed);
        let c = edit_topology(&o, &TopoEdit::Close(Selection::All)).unwrap();
        assert_eq!(c, p);
    }

    #[test]
    fn cut_closed_opens_at_edge() {
        let p = ngon(6, 1.0);
        let c = edit_topology(&p, &TopoEdit::Cut(2)).unwrap();
        let comp = &c.components[0];
        assert!(!comp.closed);
        assert_eq!(comp.vertices[0], p.components[0].vertices[3]);
        assert_eq!(comp.vertices[5], p.components[0].vertices[2]);
        let again = edit_topology(&c, &TopoEdit::Cut(1)).unwrap();
        assert_eq!(again.components.len(), 2);
        assert_eq!(again.components[0].len(), 2);
        assert_eq!(again.components[1].len(), 4);
        assert!(edit_topology(&p, &TopoEdit::Cut(17)).is_err());
    }

    #[test]
    fn cut_pieces_of_fifty_gon() {
        let p = ngon(50, 5.0);
        let c = edit_topology(&p, &TopoEdit::CutPieces(10)).unwrap();
        assert_eq!(c.components.len(), 10);
        assert!(c.components.iter().all(|k| !k.closed && k.len() == 5));
        assert!(c.validate().is_ok());
    }

    #[test]
    fn cut_outside_plane() {
        let p = ngon(8, 1.0);
        let c = edit_topology(&p, &TopoEdit::CutOutside { axis: 0, offset: 0.0 }).unwrap();
        assert_eq!(c.components.len(), 1);
        let k = &c.components[0];
        assert!(!k.closed);
        // edges with both ends at x > 0 are gone; the arc from the top through
        // the left half to the bottom remains
        assert!(k.vertices.iter().all(|v| v.x <= 1e-12 || k.vertices.len() > 2));
        for i in 0..k.edge_count() {
            let (a, b) = k.edge(i);
            assert!(!(a.x > 0.0 && b.x > 0.0));
        }
    }

    #[test]
    fn join_two_chains() {
        let link = PolyLink::new(vec![open_chain(3, 0.0), open_chain(3, 1.0)]);
        let j = edit_topology(&link, &TopoEdit::Join(Endpoint::Last(0), Endpoint::First(1))).unwrap();
        assert_eq!(j.components.len(), 1);
        assert_eq!(j.components[0].len(), 6);
        assert!(!j.components[0].closed);
        let j2 = edit_topology(&link, &TopoEdit::Join(Endpoint::First(0), Endpoint::First(1))).unwrap();
        assert_eq!(j2.components[0].vertices[2], Vec3::new(0.0, 0.0, 0.0));
        assert_eq!(j2.components[0].vertices[3], Vec3::new(0.0, 1.0, 0.0));
        let closed = PolyLink::new(vec![ngon(4, 1.0).components[0].clone(), open_chain(3, 1.0)]);
        assert_eq!(
            edit_topology(&closed, &TopoEdit::Join(Endpoint::Last(0), Endpoint::First(1))),
            Err(KnotError::JoinOnClosedComponent(0))
        );
        assert_eq!("L3".parse::<Endpoint>().unwrap(), Endpoint::Last(3));
        assert!("X3".parse::<Endpoint>().is_err());
    }

    #[test]
    fn close_too_short() {
        let link = PolyLink::new(vec![open_chain(2, 0.0)]);
        assert_eq!(edit_topology(&link, &TopoEdit::Close(Selection::All)), Err(KnotError::CloseTooShort(0)));
    }

    #[test]
    fn shift_rev_dup_delete_keep_swap() {
        let h = hopf();
        let s = edit_topology(&h, &TopoEdit::Shift { by: 1, selection: Selection::All }).unwrap();
        assert_eq!(s.components[0].vertices[0], h.components[0].vertices[1]);
        let r = edit_topology(&h, &TopoEdit::RevBeads(Selection::One(1))).unwrap();
        assert_eq!(r.components[1].vertices[0], h.components[1].vertices[2]);
        let d = edit_topology(&h, &TopoEdit::Duplicate(0)).unwrap();
        assert_eq!(d.components.len(), 3);
        assert_eq!(d.components[2], h.components[0]);
        let del = edit_topology(&h, &TopoEdit::Delete(Selection::One(0))).unwrap();
        assert_eq!(del.components, vec![h.components[1].clone()]);
        let keep = edit_topology(&h, &TopoEdit::Keep(1)).unwrap();
        assert_eq!(keep, del);
        let sw = edit_topology(&h, &TopoEdit::Swap(0, 1)).unwrap();
        assert_eq!(sw.components[0], h.components[1]);
        assert!(edit_topology(&h, &TopoEdit::Delete(Selection::One(2))).is_err());
        let sr = edit_topology(&h, &TopoEdit::SwapRandom { seed: 4 }).unwrap();
        assert_eq!(sr, edit_topology(&h, &TopoEdit::SwapRandom { seed: 4 }).unwrap());
    }

    #[test]
    fn visibility_flags() {
        let h = hopf();
        let hidden = visibility(&h, Visibility::Hide(Selection::All)).unwrap();
        assert!(hidden.components.iter().all(|c| c.hidden));
        assert_eq!(visibility(&hidden, Visibility::Unhide(Selection::All)).unwrap(), h);
        let one = visibility(&h, Visibility::Hide(Selection::One(1))).unwrap();
        assert_eq!(one.visible_bead_count(), 3);
        let p = ngon(50, 5.0);
        let head = visibility(&p, Visibility::Head(Some(22))).unwrap();
        assert_eq!(head.visible_bead_count(), 22);
        assert_eq!(visibility(&head, Visibility::Head(None)).unwrap().visible_bead_count(), 50);
        assert!(visibility(&h, Visibility::Hide(Selection::One(4))).is_err());
    }
}
