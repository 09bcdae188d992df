//! Generators for standard knots and links.

mod braid;
mod pretzel;

pub use braid::{braid_close, parse_braid, render_braid, BraidWord, Generator};
pub use pretzel::{conway_pretzel, parse_pretzel};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

use crate::dynamics::{check_safe, SafetyReport};
use crate::error::{KnotError, Result};
use crate::geom::Vec3;
use crate::polylink::PolyLink;

/// Regular `n`-gon of circumradius `radius` in the plane z = 0.
pub fn unknot(n: usize, radius: f64) -> Result<PolyLink> {
    if n < 3 {
        return Err(KnotError::BadCount(n));
    }
    if !(radius > 0.0) {
        return Err(KnotError::BadSpec(format!("radius must be positive, got {radius}")));
    }
    let vs = (0..n)
        .map(|i| {
            let t = TAU * i as f64 / n as f64;
            Vec3::new(radius * t.cos(), radius * t.sin(), 0.0)
        })
        .collect();
    Ok(PolyLink::from_polygons(vec![(vs, true)]))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorusSpec {
    pub p: i64,
    pub q: i64,
    /// Total beads, shared evenly between the components.
    pub n: usize,
    /// Longitudinal radius.
    pub big_r: f64,
    /// Meridional radius.
    pub small_r: f64,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// The (p, q) torus knot or link: winding `p` times around the z-axis and
/// `q` times around the core circle. With `g = gcd(p, q) > 1` there are `g`
/// parallel components. Samples sit half a step off the parameter origin so
/// the crossings of the symmetric curve avoid the vertices.
pub fn torus(spec: &TorusSpec) -> Result<PolyLink> {
    let TorusSpec { p, q, n, big_r, small_r } = *spec;
    if !(big_r > small_r && small_r > 0.0) {
        return Err(KnotError::BadSpec(format!("need R > r > 0, got R = {big_r}, r = {small_r}")));
    }
    let g = gcd(p, q);
    if g == 0 {
        return Err(KnotError::BadSpec("p and q cannot both be zero".into()));
    }
    let g = g as usize;
    let per = n / g;
    if per < 3 {
        return Err(KnotError::BadSpec(format!("{n} beads is too few for {g} components")));
    }
    let (pp, qq) = ((p / g as i64) as f64, (q / g as i64) as f64);
    let polys = (0..g)
        .map(|k| {
            let shift = if pp != 0.0 { TAU * k as f64 / (g as f64 * pp) } else { TAU * k as f64 / g as f64 };
            let vs = (0..per)
                .map(|i| {
                    let t = TAU * (i as f64 + 0.5) / per as f64;
                    let phi = pp * t;
                    let theta = qq * t + shift;
                    let rad = big_r + small_r * theta.cos();
                    Vec3::new(rad * phi.cos(), rad * phi.sin(), small_r * theta.sin())
                })
                .collect();
            (vs, true)
        })
        .collect();
    Ok(PolyLink::from_polygons(polys))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LissajousSpec {
    pub freq: [u32; 3],
    pub phase: [f64; 3],
    pub n: usize,
    pub amplitude: f64,
}

/// `(cos(nx t + px), cos(ny t + py), cos(nz t + pz))` scaled by `amplitude`.
/// Many choices are unsafe, so the safety report comes along.
pub fn lissajous(spec: &LissajousSpec, close: f64) -> Result<(PolyLink, SafetyReport)> {
    if spec.n < 3 {
        return Err(KnotError::BadCount(spec.n));
    }
    if spec.freq.contains(&0) {
        return Err(KnotError::BadSpec("frequencies must be positive".into()));
    }
    let vs: Vec<Vec3> = (0..spec.n)
        .map(|i| {
            let t = TAU * i as f64 / spec.n as f64;
            let c = |k: usize| (spec.freq[k] as f64 * t + spec.phase[k]).cos() * spec.amplitude;
            Vec3::new(c(0), c(1), c(2))
        })
        .collect();
    let link = PolyLink::from_polygons(vec![(vs, true)]);
    if link.validate().is_err() {
        return Err(KnotError::BadSpec("curve retraces itself; pick other frequencies".into()));
    }
    let report = check_safe(&link, close);
    Ok((link, report))
}

/// Random frequencies (1 to 7) and phases until the curve is safe.
/// Returns the parameters that worked along with the link.
pub fn lissajous_until_safe(
    n: usize,
    amplitude: f64,
    close: f64,
    seed: u64,
    max_tries: usize,
) -> Result<(PolyLink, LissajousSpec)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..max_tries {
        let spec = LissajousSpec {
            freq: [rng.gen_range(1..=7), rng.gen_range(1..=7), rng.gen_range(1..=7)],
            phase: [rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU)],
            n,
            amplitude,
        };
        if let Ok((link, report)) = lissajous(&spec, close) {
            if report.safe {
                return Ok((link, spec));
            }
        }
    }
    Err(KnotError::BadSpec(format!("no safe Lissajous curve in {max_tries} tries")))
}

/// `k` interlocked round rings along the x-axis, alternating between the xy
/// and xz planes.
pub fn chain(k: usize, beads_per: usize) -> Result<PolyLink> {
    if k == 0 {
        return Err(KnotError::BadCount(0));
    }
    if beads_per < 3 {
        return Err(KnotError::BadCount(beads_per));
    }
    const RADIUS: f64 = 2.0;
    const SPACING: f64 = 3.0;
    let offset = (k as f64 - 1.0) * SPACING / 2.0;
    let polys = (0..k)
        .map(|c| {
            let centre = Vec3::new(c as f64 * SPACING - offset, 0.0, 0.0);
            let vs = (0..beads_per)
                .map(|i| {
                    let t = TAU * (i as f64 + 0.5) / beads_per as f64;
                    let (a, b) = (RADIUS * t.cos(), RADIUS * t.sin());
                    centre + if c % 2 == 0 { Vec3::new(a, b, 0.0) } else { Vec3::new(a, 0.0, b) }
                })
                .collect();
            (vs, true)
        })
        .collect();
    Ok(PolyLink::from_polygons(polys))
}

/// Open polyline of `n` evenly spaced beads.
pub fn line(from: Vec3, to: Vec3, n: usize) -> Result<PolyLink> {
    if n < 2 {
        return Err(KnotError::BadCount(n));
    }
    if from == to {
        return Err(KnotError::ZeroLength);
    }
    let vs = (0..n).map(|i| from + (to - from) * (i as f64 / (n - 1) as f64)).collect();
    Ok(PolyLink::from_polygons(vec![(vs, false)]))
}

/// Beads after `(from, y)` for a strand crossing from one of the columns
/// `l`, `r` to the other over one unit of height. The middle edge sits at
/// height `z`, so the projected crossing falls mid-edge rather than on a bead.
pub(crate) fn crossing_strand(l: f64, r: f64, y: f64, from_left: bool, z: f64) -> [Vec3; 3] {
    let (a, b) = if from_left { (l, r) } else { (r, l) };
    let at = |f: f64| a + (b - a) * f;
    [Vec3::new(at(1.0 / 3.0), y + 1.0 / 3.0, z), Vec3::new(at(2.0 / 3.0), y + 2.0 / 3.0, z), Vec3::new(b, y + 1.0, 0.0)]
}

/// Join open polylines whose endpoints coincide (within `tol`) into closed
/// loops, reversing pieces as needed. Pieces that never close up are
/// returned as open chains.
pub(crate) fn stitch(mut pieces: Vec<Vec<Vec3>>, tol: f64) -> Vec<(Vec<Vec3>, bool)> {
    let same = |a: &Vec3, b: &Vec3| (a - b).norm() <= tol;
    let mut out = Vec::new();
    while let Some(mut cur) = pieces.pop() {
        loop {
            if cur.len() > 2 && same(&cur[0], cur.last().unwrap()) {
                cur.pop();
                out.push((cur, true));
                break;
            }
            let end = *cur.last().unwrap();
            let found = pieces.iter().position(|p| same(&p[0], &end) || same(p.last().unwrap(), &end));
            match found {
                Some(k) => {
                    let mut next = pieces.swap_remove(k);
                    if !same(&next[0], &end) {
                        next.reverse();
                    }
                    cur.extend(next.into_iter().skip(1));
                }
                None => {
                    out.push((cur, false));
                    break;
                }
            }
        }
    }
    out.reverse();
    out
}
