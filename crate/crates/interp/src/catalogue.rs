//! A small built-in set of knots and links, named in the Rolfsen style
//! (`3.1` for the trefoil, `2.2.1` for the Hopf link).

use knotforge_core::construct::{braid_close, parse_braid, torus, unknot, TorusSpec};
use knotforge_core::{PolyLink, Result, Vec3};

enum Recipe {
    Unknot,
    Torus(i64, i64),
    Braid(&'static str),
    Hopf,
}

const ENTRIES: &[(&str, Recipe)] = &[
    ("0.1", Recipe::Unknot),
    ("2.2.1", Recipe::Hopf),
    ("3.1", Recipe::Torus(2, 3)),
    ("4.1", Recipe::Braid("aBaB")),
    ("4.2.1", Recipe::Torus(2, 4)),
    ("5.1", Recipe::Torus(2, 5)),
    ("5.2", Recipe::Braid("aaabAb")),
    ("6.2.1", Recipe::Torus(2, 6)),
    ("6.3.2", Recipe::Braid("(aB)^3")),
    ("7.1", Recipe::Torus(2, 7)),
    ("8.19", Recipe::Torus(3, 4)),
    ("10.124", Recipe::Torus(3, 5)),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    ENTRIES.iter().map(|(n, _)| *n)
}

/// Number of components of a named entry.
pub fn components(name: &str) -> Option<usize> {
    lookup(name).map(|l| l.map_or(0, |l| l.components.len()))
}

/// The three vertices per component listed for the Hopf link in the text
/// format example.
pub fn hopf() -> PolyLink {
    let p = Vec3::new;
    PolyLink::from_polygons(vec![
        (vec![p(0.10, -3.29, -0.49), p(1.11, 0.69, 0.13), p(-1.64, -0.27, 0.26)], true),
        (vec![p(0.01, 2.30, 0.44), p(-0.07, 2.10, -0.87), p(0.48, -1.55, 0.53)], true),
    ])
}

pub fn lookup(name: &str) -> Option<Result<PolyLink>> {
    let (_, recipe) = ENTRIES.iter().find(|(n, _)| *n == name)?;
    Some(match recipe {
        Recipe::Unknot => unknot(40, 3.0),
        Recipe::Hopf => Ok(hopf()),
        Recipe::Torus(p, q) => torus(&TorusSpec { p: *p, q: *q, n: 24 * *q as usize, big_r: 3.0, small_r: 1.2 }),
        Recipe::Braid(word) => parse_braid(word).and_then(|w| braid_close(&w)),
    })
}
