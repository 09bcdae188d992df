//! Braid words and their closures.
//!
//! Grammar: `word := atom+`, `atom := (letter | '(' word ')') ['^' digits]`.
//! Lowercase `a`, `b`, ... are σ₁, σ₂, ...; uppercase letters are inverses.

use std::f64::consts::PI;
use std::fmt::Write;

use super::{crossing_strand, stitch};
use crate::error::{KnotError, Result};
use crate::geom::Vec3;
use crate::polylink::PolyLink;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Generator {
    /// 1-based: σᵢ exchanges strands `i - 1` and `i` (0-based positions).
    pub index: u32,
    pub positive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidWord {
    pub letters: Vec<Generator>,
    pub strands: usize,
}

const MAX_LETTERS: usize = 1 << 20;
const MAX_DEPTH: usize = 200;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    depth: usize,
}

impl Parser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(KnotError::Parse { position: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn word(&mut self) -> Result<Vec<Generator>> {
        let mut out = Vec::new();
        let mut atoms = 0;
        while let Some(c) = self.peek() {
            if c == b')' {
                break;
            }
            out.extend(self.atom()?);
            atoms += 1;
            if out.len() > MAX_LETTERS {
                return self.err("word too long");
            }
        }
        if atoms == 0 {
            return self.err("expected a letter or '('");
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<Vec<Generator>> {
        let base = match self.peek() {
            Some(b'(') => {
                if self.depth >= MAX_DEPTH {
                    return self.err("nesting too deep");
                }
                self.pos += 1;
                self.depth += 1;
                let inner = self.word()?;
                self.depth -= 1;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                inner
            }
            Some(c) if c.is_ascii_alphabetic() => {
                self.pos += 1;
                let positive = c.is_ascii_lowercase();
                vec![Generator { index: (c.to_ascii_lowercase() - b'a') as u32 + 1, positive }]
            }
            Some(c) => return self.err(format!("unexpected '{}'", c as char)),
            None => return self.err("unexpected end of word"),
        };
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a non-negative exponent");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let reps: usize = match text.parse() {
            Ok(r) => r,
            Err(_) => return self.err("exponent too large"),
        };
        if base.len().saturating_mul(reps) > MAX_LETTERS {
            return self.err("word too long");
        }
        Ok(base.repeat(reps))
    }
}

pub fn parse_braid(text: &str) -> Result<BraidWord> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, depth: 0 };
    let letters = p.word()?;
    if p.peek().is_some() {
        return p.err("unmatched ')'");
    }
    if letters.is_empty() {
        return Err(KnotError::EmptyWord);
    }
    let strands = 1 + letters.iter().map(|g| g.index as usize).max().unwrap();
    Ok(BraidWord { letters, strands })
}

/// The flat letter sequence, e.g. `aBaBaBCa`.
pub fn render_braid(word: &BraidWord) -> String {
    let mut s = String::with_capacity(word.letters.len());
    for g in &word.letters {
        let c = (b'a' + (g.index - 1) as u8) as char;
        let _ = write!(s, "{}", if g.positive { c } else { c.to_ascii_uppercase() });
    }
    s
}

/// Closure of the braid: strands run up the y-axis two units apart, each
/// letter takes one unit of height with the over strand lifted to z = +½ and
/// the under strand dropped to z = −½, and the closing arcs are concentric
/// loops in the plane z = 0 to the right of the braid. In σᵢ the strand
/// coming from the left passes over.
pub fn braid_close(word: &BraidWord) -> Result<PolyLink> {
    if word.letters.is_empty() {
        return Err(KnotError::EmptyWord);
    }
    let s = word.strands;
    let h = word.letters.len() as f64;
    let x = |k: usize| 2.0 * k as f64;

    // one piece per strand through the braid, then one per closing loop
    let mut pieces = Vec::new();
    for start in 0..s {
        let mut pos = start;
        let mut pts = vec![Vec3::new(x(pos), 0.0, 0.0)];
        for (j, g) in word.letters.iter().enumerate() {
            let y = j as f64;
            let i = g.index as usize;
            if pos == i - 1 || pos == i {
                let from_left = pos == i - 1;
                let z = if from_left == g.positive { 0.5 } else { -0.5 };
                pts.extend(crossing_strand(x(i - 1), x(i), y, from_left, z));
                pos = if from_left { i } else { i - 1 };
            } else {
                pts.push(Vec3::new(x(pos), y + 1.0, 0.0));
            }
        }
        pieces.push(pts);
    }
    let centre = 2.0 * s as f64 - 1.0;
    for k in 0..s {
        let radius = centre - x(k);
        let right = centre + radius;
        let arc = |y0: f64, up: bool| -> Vec<Vec3> {
            let segs = ((PI * radius).ceil() as usize).max(4);
            (0..=segs)
                .map(|m| {
                    let a = PI * m as f64 / segs as f64;
                    let dy = radius * a.sin();
                    Vec3::new(centre - radius * a.cos(), if up { y0 + dy } else { y0 - dy }, 0.0)
                })
                .collect()
        };
        let mut pts = arc(h, true);
        let drop = (h.ceil() as usize).max(1);
        for m in 1..drop {
            pts.push(Vec3::new(right, h - h * m as f64 / drop as f64, 0.0));
        }
        let mut bottom = arc(0.0, false);
        bottom.reverse();
        pts.extend(bottom);
        pieces.push(pts);
    }
    let polys = stitch(pieces, 1e-9);
    debug_assert!(polys.iter().all(|(_, closed)| *closed));
    Ok(PolyLink::from_polygons(polys))
}
