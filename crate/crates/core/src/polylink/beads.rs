use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Component, PolyLink};
use crate::error::{KnotError, Result};
use crate::geom::Vec3;
use crate::spline;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NbeadsMode {
    /// Add (or remove, when negative) this many beads in total.
    Delta(i64),
    /// Resample to exactly this many beads in total.
    Absolute(usize),
    /// Multiply every component's bead count.
    Mult(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BeadEdit {
    /// Insert the midpoint of every edge.
    Split,
    Nbeads(NbeadsMode),
    /// Insert `factor - 1` spline points inside every edge.
    Refine(usize),
    /// Resample to near-uniform edge length.
    RefineEquilateral(f64),
    Jitter { magnitude: f64, seed: u64 },
}

pub fn edit_beads(link: &PolyLink, spec: &BeadEdit) -> Result<PolyLink> {
    let mut out = link.clone();
    match *spec {
        BeadEdit::Split => {
            for c in out.components.iter_mut() {
                split_all(c);
            }
        }
        BeadEdit::Nbeads(mode) => {
            let counts = target_counts(link, mode)?;
            for (c, n) in out.components.iter_mut().zip(counts) {
                resample(c, n)?;
            }
        }
        BeadEdit::Refine(factor) => {
            if factor == 0 {
                return Err(KnotError::BadFactor(factor as f64));
            }
            for c in out.components.iter_mut() {
                let mut vs = spline::sample(&c.vertices, c.closed, factor);
                dedup_consecutive(&mut vs, c.closed);
                c.vertices = vs;
                c.anchors.clear();
            }
        }
        BeadEdit::RefineEquilateral(len) => {
            if !(len > 0.0) {
                return Err(KnotError::BadFactor(len));
            }
            for c in out.components.iter_mut() {
                let dense_len = spline_length(c);
                let edges = (dense_len / len).round().max(if c.closed { 3.0 } else { 1.0 }) as usize;
                let n = if c.closed { edges } else { edges + 1 };
                resample(c, n)?;
            }
        }
        BeadEdit::Jitter { magnitude, seed } => {
            if !(magnitude >= 0.0) {
                return Err(KnotError::BadFactor(magnitude));
            }
            if magnitude > 0.0 {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for v in out.vertices_mut() {
                    *v += random_in_ball(&mut rng) * magnitude;
                }
            }
        }
    }
    Ok(out)
}

/// Uniform point in the unit ball.
pub(crate) fn random_in_ball(rng: &mut impl Rng) -> Vec3 {
    loop {
        let p = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if p.norm_squared() <= 1.0 {
            return p;
        }
    }
}

fn split_all(c: &mut Component) {
    let n = c.len();
    let edges = c.edge_count();
    let mut vs = Vec::with_capacity(n + edges);
    let mut anchors = Vec::new();
    for i in 0..n {
        vs.push(c.vertices[i]);
        if !c.anchors.is_empty() {
            anchors.push(c.anchors[i]);
        }
        if i < edges {
            let (a, b) = c.edge(i);
            vs.push((a + b) / 2.0);
            if !c.anchors.is_empty() {
                anchors.push(None);
            }
        }
    }
    c.vertices = vs;
    c.anchors = anchors;
}

fn spline_length(c: &Component) -> f64 {
    let mut dense = spline::sample(&c.vertices, c.closed, 32);
    if c.closed {
        dense.push(c.vertices[0]);
    }
    dense.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
}

fn target_counts(link: &PolyLink, mode: NbeadsMode) -> Result<Vec<usize>> {
    let current: Vec<usize> = link.components.iter().map(Component::len).collect();
    let total: usize = current.iter().sum();
    let distribute = |wanted: i64| -> Vec<usize> {
        // share the new total in proportion to arc length
        let lengths: Vec<f64> = link.components.iter().map(spline_length).collect();
        let sum: f64 = lengths.iter().sum();
        let mut counts: Vec<usize> = lengths
            .iter()
            .map(|l| if sum > 0.0 { (wanted as f64 * l / sum).round().max(0.0) as usize } else { 0 })
            .collect();
        let assigned: i64 = counts.iter().map(|&c| c as i64).sum();
        if let Some(last) = counts.last_mut() {
            *last = (*last as i64 + wanted - assigned).max(0) as usize;
        }
        counts
    };
    let counts = match mode {
        NbeadsMode::Mult(k) => {
            if !(k > 0.0) {
                return Err(KnotError::BadFactor(k));
            }
            current.iter().map(|&n| (n as f64 * k).round() as usize).collect()
        }
        NbeadsMode::Delta(d) => distribute(total as i64 + d),
        NbeadsMode::Absolute(n) => distribute(n as i64),
    };
    for (c, &n) in link.components.iter().zip(&counts) {
        let min = if c.closed { 3 } else { 2 };
        if n < min {
            return Err(KnotError::TooFewBeads(format!("resampling to {n} beads")));
        }
    }
    Ok(counts)
}

fn resample(c: &mut Component, n: usize) -> Result<()> {
    if c.closed && n < 3 {
        return Err(KnotError::TooFewBeads(format!("closed component needs 3 beads, asked for {n}")));
    }
    if c.len() < 2 {
        return Ok(());
    }
    c.vertices = spline::resample_arclength(&c.vertices, c.closed, n);
    c.anchors.clear();
    Ok(())
}

fn dedup_consecutive(vs: &mut Vec<Vec3>, closed: bool) {
    vs.dedup();
    if closed && vs.len() > 1 && vs.first() == vs.last() {
        vs.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::geom::point_segment_distance;

    #[test]
    fn split_keeps_point_set() {
        let p = ngon(50, 5.0);
        let s = edit_beads(&p, &BeadEdit::Split).unwrap();
        assert_eq!(s.bead_count(), 100);
        let c = &p.components[0];
        for v in s.vertices() {
            let d = (0..c.edge_count())
                .map(|i| {
                    let (a, b) = c.edge(i);
                    point_segment_distance(v, &a, &b)
                })
                .fold(f64::INFINITY, f64::min);
            assert!(d < 1e-12);
        }
        for (i, v) in c.vertices.iter().enumerate() {
            assert_eq!(s.components[0].vertices[2 * i], *v);
        }
    }

    #[test]
    fn nbeads_modes() {
        let p = ngon(20, 5.0);
        let t = edit_beads(&p, &BeadEdit::Nbeads(NbeadsMode::Mult(3.0))).unwrap();
        assert_eq!(t.bead_count(), 60);
        let t = edit_beads(&p, &BeadEdit::Nbeads(NbeadsMode::Delta(5))).unwrap();
        assert_eq!(t.bead_count(), 25);
        let t = edit_beads(&p, &BeadEdit::Nbeads(NbeadsMode::Delta(-7))).unwrap();
        assert_eq!(t.bead_count(), 13);
        let t = edit_beads(&p, &BeadEdit::Nbeads(NbeadsMode::Absolute(31))).unwrap();
        assert_eq!(t.bead_count(), 31);
        assert!(matches!(
            edit_beads(&p, &BeadEdit::Nbeads(NbeadsMode::Absolute(2))),
            Err(KnotError::TooFewBeads(_))
        ));
    }

    #[test]
    fn refine_factor() {
        let p = ngon(10, 5.0);
        let t = edit_beads(&p, &BeadEdit::Refine(3)).unwrap();
        assert_eq!(t.bead_count(), 30);
        assert!(t.validate().is_ok());
        assert!(matches!(edit_beads(&p, &BeadEdit::Refine(0)), Err(KnotError::BadFactor(_))));
    }

    #[test]
    fn refine_equilateral_is_near_uniform() {
        // an ellipse-like smooth curve with uneven spacing
        let vs: Vec<Vec3> = (0..24)
            .map(|i| {
                let t = std::f64::consts::TAU * (i as f64 / 24.0 + 0.03 * (i as f64).sin());
                Vec3::new(4.0 * t.cos(), 2.0 * t.sin(), 0.5 * (2.0 * t).sin())
            })
            .collect();
        let p = PolyLink::from_polygons(vec![(vs, true)]);
        let t = edit_beads(&p, &BeadEdit::RefineEquilateral(0.5)).unwrap();
        let lens = t.components[0].edge_lengths();
        let max = lens.iter().cloned().fold(0.0, f64::max);
        let min = lens.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(max / min <= 1.05, "ratio {}", max / min);
        assert!((lens.iter().sum::<f64>() / lens.len() as f64 - 0.5).abs() < 0.05);
    }

    #[test]
    fn jitter_behaviour() {
        let p = hopf();
        assert_eq!(edit_beads(&p, &BeadEdit::Jitter { magnitude: 0.0, seed: 9 }).unwrap(), p);
        let a = edit_beads(&p, &BeadEdit::Jitter { magnitude: 0.1, seed: 9 }).unwrap();
        let b = edit_beads(&p, &BeadEdit::Jitter { magnitude: 0.1, seed: 9 }).unwrap();
        assert_eq!(a, b);
        for (u, v) in p.vertices().zip(a.vertices()) {
            assert!((u - v).norm() <= 0.1);
        }
        let c = edit_beads(&p, &BeadEdit::Jitter { magnitude: 0.1, seed: 10 }).unwrap();
        assert_ne!(a, c);
    }
}
