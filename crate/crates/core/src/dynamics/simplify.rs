//! Moves that change the bead count without changing the knot type.

use super::{Beads, Collision, RelaxConfig, RelaxState};
use crate::error::{KnotError, Result};
use crate::geom::{seg_min_distance, segment_hits_triangle};
use crate::polylink::{Anchor, EdgeRef, PolyLink};

/// Split, at their midpoints, the edges of every non-adjacent pair that is
/// both close (under `stuck_factor * close`) and stuck (all four endpoint
/// beads moved less than `stuck_eps * max_dir` since the previous check).
/// Splits that would leave the link unsafe are skipped.
pub fn stuck_split(link: &PolyLink, cfg: &RelaxConfig, state: &mut RelaxState) -> PolyLink {
    state.sync(link);
    let beads = Beads::new(link);
    let still: Vec<bool> = beads
        .pos
        .iter()
        .zip(&state.checkpoint)
        .map(|(p, q)| (p - q).norm() < cfg.stuck_eps * cfg.max_dir)
        .collect();
    state.checkpoint = beads.pos.clone();

    let refs = edge_refs(link);
    let near = cfg.stuck_factor * cfg.close;
    let mut chosen = vec![false; beads.edges.len()];
    for (i, &(a, b)) in beads.edges.iter().enumerate() {
        if !(still[a] && still[b]) {
            continue;
        }
        for (j, &(c, d)) in beads.edges.iter().enumerate().skip(i + 1) {
            if a == c || a == d || b == c || b == d || !(still[c] && still[d]) {
                continue;
            }
            if seg_min_distance(&beads.pos[a], &beads.pos[b], &beads.pos[c], &beads.pos[d]) < near {
                chosen[i] = true;
                chosen[j] = true;
            }
        }
    }
    if !chosen.iter().any(|&c| c) {
        return link.clone();
    }

    let mut todo: Vec<EdgeRef> = chosen.iter().enumerate().filter(|(_, &c)| c).map(|(i, _)| refs[i]).collect();
    // back to front so earlier indices stay valid
    todo.sort_by(|x, y| (y.component, y.index).cmp(&(x.component, x.index)));
    let mut out = link.clone();
    for e in todo {
        let c = &out.components[e.component];
        let (p, q) = c.edge(e.index);
        let mut candidate = out.clone();
        candidate.components[e.component].insert_vertex(e.index + 1, (p + q) / 2.0);
        if cfg.collision == Collision::Fast {
            let base: usize = candidate.components[..e.component].iter().map(|c| c.len()).sum();
            let g = base + e.index + 1;
            let nb = Beads::new(&candidate);
            if nb.move_violates(g, &nb.pos[g], cfg.close) {
                continue;
            }
        }
        out = candidate;
    }
    state.sync(&out);
    out
}

fn edge_refs(link: &PolyLink) -> Vec<EdgeRef> {
    link.components
        .iter()
        .enumerate()
        .flat_map(|(ci, c)| (0..c.edge_count()).map(move |i| EdgeRef { component: ci, index: i }))
        .collect()
}

/// Delete beads one at a time while the count is above `max(target, dbmin)`.
/// A bead `v` with neighbours `u`, `w` may go only if no other edge pierces
/// the triangle `u v w` and the new edge `u w` keeps the link safe. Stops
/// early once a full pass removes nothing.
pub fn delete_downto(link: &PolyLink, cfg: &RelaxConfig, target: usize) -> PolyLink {
    let limit = target.max(cfg.dbmin);
    let mut out = link.clone();
    loop {
        let mut removed = false;
        for ci in 0..out.components.len() {
            let mut i = 0;
            while i < out.components[ci].len() {
                if out.bead_count() <= limit {
                    return out;
                }
                if removable(&out, ci, i, cfg.close) {
                    out.components[ci].remove_vertex(i);
                    removed = true;
                } else {
                    i += 1;
                }
            }
        }
        if !removed {
            return out;
        }
    }
}

fn removable(link: &PolyLink, ci: usize, i: usize, close: f64) -> bool {
    let c = &link.components[ci];
    let n = c.len();
    if c.is_pinned(i) {
        return false;
    }
    if c.closed {
        if n <= 3 {
            return false;
        }
    } else if i == 0 || i + 1 >= n {
        return false;
    }
    let beads = Beads::new(link);
    let base: usize = link.components[..ci].iter().map(|c| c.len()).sum();
    let v = base + i;
    let (u, w) = match (beads.prev[v], beads.next[v]) {
        (Some(u), Some(w)) => (u, w),
        _ => return false,
    };
    let (pu, pv, pw) = (beads.pos[u], beads.pos[v], beads.pos[w]);
    let tol = 1e-12 * link.extent().max(1.0);
    for &(a, b) in &beads.edges {
        if a == v || b == v {
            continue;
        }
        let shares = |k: usize| k == u || k == w;
        let (pa, pb) = (beads.pos[a], beads.pos[b]);
        let hit = match (shares(a), shares(b)) {
            (false, false) => segment_hits_triangle(&pa, &pb, &pu, &pv, &pw, tol),
            // the edge starts at a triangle corner: only its far part matters
            (true, false) => segment_hits_triangle(&(pa + (pb - pa) * 1e-6), &pb, &pu, &pv, &pw, 0.0),
            (false, true) => segment_hits_triangle(&pa, &(pb + (pa - pb) * 1e-6), &pu, &pv, &pw, 0.0),
            (true, true) => false,
        };
        if hit {
            return false;
        }
        if !(shares(a) || shares(b)) && seg_min_distance(&pu, &pw, &pa, &pb) < close {
            return false;
        }
    }
    true
}

/// Pin the first and last bead of every open component where it is now.
pub fn mass_open(link: &PolyLink) -> Result<PolyLink> {
    let mut out = link.clone();
    let mut any = false;
    for c in out.components.iter_mut().filter(|c| !c.closed && !c.is_empty()) {
        any = true;
        if c.anchors.is_empty() {
            c.anchors = vec![None; c.len()];
        }
        let last = c.len() - 1;
        c.anchors[0] = Some(Anchor::Pin(c.vertices[0]));
        c.anchors[last] = Some(Anchor::Pin(c.vertices[last]));
    }
    if any {
        Ok(out)
    } else {
        Err(KnotError::NoOpenComponents)
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::ngon;
    use super::super::{check_safe, step, ForceKind, ForceSpec};
    use super::*;
    use crate::geom::Vec3;
    use crate::polylink::{edit_beads, BeadEdit, Component};

    #[test]
    fn round_polygon_not_stuck() {
        let mut p = ngon(30, 2.0);
        let cfg = RelaxConfig::default();
        let mut st = RelaxState::new(&p, 1);
        for _ in 0..3 {
            step(&mut p, &cfg, &mut st).unwrap();
        }
        let q = stuck_split(&p, &cfg, &mut st);
        assert_eq!(q.bead_count(), 30);
    }

    fn pinch() -> PolyLink {
        let a: Vec<Vec3> = (0..5).map(|i| Vec3::new(i as f64 - 2.0, 0.0, 0.0)).collect();
        let b: Vec<Vec3> = (0..5).map(|i| Vec3::new(0.5, i as f64 - 2.5, 0.15)).collect();
        let mut link = PolyLink::new(vec![Component::new(a, false), Component::new(b, false)]);
        for c in link.components.iter_mut() {
            c.anchors = c.vertices.iter().map(|v| Some(Anchor::Pin(*v))).collect();
        }
        link
    }

    #[test]
    fn pinched_strands_split() {
        let mut link = pinch();
        let cfg = RelaxConfig::default();
        assert!(check_safe(&link, cfg.close).safe);
        let mut st = RelaxState::new(&link, 1);
        for _ in 0..3 {
            step(&mut link, &cfg, &mut st).unwrap();
        }
        let out = stuck_split(&link, &cfg, &mut st);
        assert_eq!(out.bead_count(), link.bead_count() + 2);
        assert!(check_safe(&out, cfg.close).safe);
    }

    #[test]
    fn unknot_reduces_to_triangle() {
        let p = ngon(50, 5.0);
        let p = edit_beads(&p, &BeadEdit::Jitter { magnitude: 0.3, seed: 5 }).unwrap();
        let cfg = RelaxConfig { close: 0.01, max_dir: 0.005, ..Default::default() };
        let q = delete_downto(&p, &cfg, 0);
        assert_eq!(q.bead_count(), 3);
    }

    #[test]
    fn delete_respects_target() {
        let p = ngon(20, 3.0);
        let cfg = RelaxConfig::default();
        assert_eq!(delete_downto(&p, &cfg, 25), p);
        assert_eq!(delete_downto(&p, &cfg, 10).bead_count(), 10);
    }

    #[test]
    fn delete_blocked_by_piercing_edge() {
        // a square pierced by a rod can only become a triangle still pierced
        // by the rod
        let sq = vec![
            Vec3::new(-1.0, -1.0, 0.0),
            Vec3::new(1.0, -1.0, 0.0),
            Vec3::new(1.0, 1.0, 0.0),
            Vec3::new(-1.0, 1.0, 0.0),
        ];
        let rod = vec![Vec3::new(0.1, 0.2, -3.0), Vec3::new(0.1, 0.2, 3.0)];
        let link = PolyLink::new(vec![Component::new(sq, true), Component::new(rod, false)]);
        let out = delete_downto(&link, &RelaxConfig { dbmin: 0, ..Default::default() }, 0);
        assert_eq!(out.bead_count(), 5);
        let t = &out.components[0].vertices;
        let r = &out.components[1].vertices;
        assert!(segment_hits_triangle(&r[0], &r[1], &t[0], &t[1], &t[2], 0.0));
    }

    #[test]
    fn mass_open_pins_and_is_idempotent() {
        let chain: Vec<Vec3> = (0..10).map(|i| Vec3::new(i as f64, 0.0, 0.0)).collect();
        let link = PolyLink::new(vec![Component::new(chain, false)]);
        let a = mass_open(&link).unwrap();
        assert!(a.components[0].is_pinned(0) && a.components[0].is_pinned(9));
        assert_eq!(mass_open(&a).unwrap(), a);
        assert_eq!(mass_open(&ngon(5, 1.0)), Err(KnotError::NoOpenComponents));
        let cfg = RelaxConfig::only(&[ForceSpec::new(ForceKind::Elec, 1.0)]);
        let mut st = RelaxState::new(&a, 1);
        let mut moving = a.clone();
        for _ in 0..50 {
            step(&mut moving, &cfg, &mut st).unwrap();
        }
        assert_eq!(moving.components[0].vertices[0], a.components[0].vertices[0]);
    }
}
