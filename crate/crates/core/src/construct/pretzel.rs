//! Pretzel links P(p₁, …, p_k) from the pretzel fragment of Conway notation.

use super::{crossing_strand, stitch};
use crate::error::{KnotError, Result};
use crate::geom::Vec3;
use crate::polylink::PolyLink;

/// Parse `p1,p2,...,pk` into twist counts.
pub fn parse_pretzel(text: &str) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for field in text.split(',') {
        let trimmed = field.trim();
        let at = offset + field.len() - field.trim_start().len();
        let p: i64 = trimmed
            .parse()
            .map_err(|_| KnotError::Parse { position: at, message: format!("expected an integer, found '{trimmed}'") })?;
        if p == 0 {
            return Err(KnotError::ZeroTwist);
        }
        if p.unsigned_abs() > 10_000 {
            return Err(KnotError::Parse { position: at, message: "twist count too large".into() });
        }
        out.push(p);
        offset += field.len() + 1;
    }
    Ok(out)
}

/// The tangle calculator string for the same link, e.g. `6r3r#4r#N`.
fn tangle_string(twists: &[i64]) -> String {
    if let [p] = twists {
        return format!("{p}N");
    }
    let mut s = String::new();
    for (i, p) in twists.iter().enumerate() {
        s.push_str(&format!("{p}r"));
        if i > 0 {
            s.push('#');
        }
    }
    s.push('N');
    s
}

/// Caps joining neighbouring regions, plus the wide loop round the outside.
fn connectors(k: usize, height: f64) -> Vec<Vec<Vec3>> {
    let mut pieces = Vec::new();
    for (y0, dir) in [(height, 1.0), (0.0, -1.0)] {
        for i in 0..k - 1 {
            let a = 3.0 * i as f64 + 1.0;
            pieces.push(vec![
                Vec3::new(a, y0, 0.0),
                Vec3::new(a + 1.0, y0 + dir, 0.0),
                Vec3::new(a + 2.0, y0, 0.0),
            ]);
        }
        let far = 3.0 * (k - 1) as f64 + 1.0;
        let lift = y0 + 2.0 * dir;
        let mut outer = vec![Vec3::new(0.0, y0, 0.0), Vec3::new(0.0, y0 + dir, 0.0)];
        let steps = far.ceil() as usize;
        for m in 0..=steps {
            outer.push(Vec3::new(far * m as f64 / steps as f64, lift, 0.0));
        }
        outer.push(Vec3::new(far, y0 + dir, 0.0));
        outer.push(Vec3::new(far, y0, 0.0));
        pieces.push(outer);
    }
    pieces
}

/// Build P(p₁, …, p_k) with the twist regions side by side along x, region
/// `i` holding two vertical strands at `x = 3i` and `3i + 1`. Each crossing
/// takes one unit of height. The right strand of each region joins the left
/// strand of the next at top and bottom, and a wide loop joins the outermost
/// strands. A single entry `p` is read as the rational tangle `p`, whose
/// closure is the (2, p) torus link. Returns the link and its tangle
/// calculator string.
pub fn conway_pretzel(text: &str) -> Result<(PolyLink, String)> {
    let twists = parse_pretzel(text)?;
    let k = twists.len();
    let height = twists.iter().map(|p| p.unsigned_abs()).max().unwrap() as f64;
    let mut pieces = Vec::new();
    for (i, &p) in twists.iter().enumerate() {
        let (l, r) = (3.0 * i as f64, 3.0 * i as f64 + 1.0);
        let n = p.unsigned_abs() as usize;
        // pad short regions with straight runs so all tops are level
        let pad = (height - n as f64) / 2.0;
        for start in [l, r] {
            let mut x = start;
            let mut pts = vec![Vec3::new(x, 0.0, 0.0)];
            if pad > 0.0 {
                pts.push(Vec3::new(x, pad, 0.0));
            }
            for c in 0..n {
                let y = pad + c as f64;
                let from_left = x == l;
                let z = if from_left == (p > 0) { 0.5 } else { -0.5 };
                pts.extend(crossing_strand(l, r, y, from_left, z));
                x = if from_left { r } else { l };
            }
            if pad > 0.0 {
                pts.push(Vec3::new(x, height, 0.0));
            }
            pieces.push(pts);
        }
    }
    if k == 1 {
        // a lone entry is the rational tangle p: close the column like a braid
        for (x, out) in [(0.0, -2.0), (1.0, 3.0)] {
            let mut loop_pts = vec![Vec3::new(x, height, 0.0), Vec3::new(x, height + 1.0, 0.0)];
            let steps = (height as usize + 2).max(2);
            for m in 0..=steps {
                loop_pts.push(Vec3::new(out, height + 1.0 - (height + 2.0) * m as f64 / steps as f64, 0.0));
            }
            loop_pts.push(Vec3::new(x, -1.0, 0.0));
            loop_pts.push(Vec3::new(x, 0.0, 0.0));
            pieces.push(loop_pts);
        }
    } else {
        pieces.extend(connectors(k, height));
    }
    let polys = stitch(pieces, 1e-9);
    debug_assert!(polys.iter().all(|(_, closed)| *closed));
    Ok((PolyLink::from_polygons(polys), tangle_string(&twists)))
}
