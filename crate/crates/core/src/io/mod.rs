//! File formats: plain text, the native binary, VECT, OBJ tubes and EPS
//! diagrams.

mod color;
mod eps;
mod tube;

pub use color::{color_names, parse_color};
pub use eps::{psout, BBox, EpsOptions};
pub use tube::{rmf, save_obj, seam_mismatch, twfix, tube_mesh, TubeFrame, TubeMesh, TubeParams};

use std::path::Path;

use crate::error::{KnotError, Result};
use crate::geom::Vec3;
use crate::polylink::{Color, Component, PolyLink};

/// Formats chosen by file extension when saving.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FileFormat {
    Native,
    Text,
    Vect,
    Obj,
    Eps,
}

impl FileFormat {
    pub fn from_path(path: &Path) -> FileFormat {
        match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
            Some("txt") => FileFormat::Text,
            Some("vect") => FileFormat::Vect,
            Some("obj") => FileFormat::Obj,
            Some("eps") => FileFormat::Eps,
            _ => FileFormat::Native,
        }
    }
}

/// One vertex per line, blank lines between components. Every component
/// comes back closed. Lines starting with `%` are comments.
pub fn load_text(text: &str) -> Result<PolyLink> {
    let mut polys: Vec<Vec<Vec3>> = Vec::new();
    let mut current = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.starts_with('%') {
            continue;
        }
        if line.is_empty() {
            if !current.is_empty() {
                polys.push(std::mem::take(&mut current));
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(KnotError::WrongArity { line: k + 1, found: fields.len() });
        }
        let mut xyz = [0.0; 3];
        for (slot, f) in xyz.iter_mut().zip(&fields) {
            *slot = f.parse().map_err(|_| KnotError::Parse {
                position: k + 1,
                message: format!("'{f}' is not a number"),
            })?;
        }
        current.push(Vec3::from(xyz));
    }
    if !current.is_empty() {
        polys.push(current);
    }
    if polys.is_empty() {
        return Err(KnotError::EmptyLink);
    }
    let link = PolyLink::from_polygons(polys.into_iter().map(|p| (p, true)).collect());
    link.validate()?;
    Ok(link)
}

/// Shortest representation that parses back to the same value.
pub fn save_text(link: &PolyLink) -> String {
    let mut out = String::new();
    for (i, c) in link.components.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for v in &c.vertices {
            out.push_str(&format!("{} {} {}\n", v.x, v.y, v.z));
        }
    }
    out
}

const MAGIC: &[u8; 5] = b"KFRG1";

pub fn save_native(link: &PolyLink) -> Vec<u8> {
    let mut out = MAGIC.to_vec();
    out.extend((link.components.len() as u32).to_le_bytes());
    for c in &link.components {
        out.push(c.closed as u8 | (c.hidden as u8) << 1);
        for x in [c.color.r, c.color.g, c.color.b] {
            out.extend((x as f32).to_le_bytes());
        }
        out.extend((c.vertices.len() as u32).to_le_bytes());
        for v in &c.vertices {
            for x in v.iter() {
                out.extend(x.to_le_bytes());
            }
        }
    }
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N]> {
        let end = self.pos.checked_add(N).ok_or(KnotError::Truncated)?;
        let chunk = self.bytes.get(self.pos..end).ok_or(KnotError::Truncated)?;
        self.pos = end;
        Ok(chunk.try_into().unwrap())
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take()?))
    }
}

pub fn load_native(bytes: &[u8]) -> Result<PolyLink> {
    if bytes.len() < MAGIC.len() {
        return Err(if MAGIC.starts_with(bytes) { KnotError::Truncated } else { KnotError::BadMagic });
    }
    if &bytes[..MAGIC.len()] != MAGIC {
        return Err(KnotError::BadMagic);
    }
    let mut r = Reader { bytes, pos: MAGIC.len() };
    let count = r.u32()? as usize;
    let mut components = Vec::new();
    for _ in 0..count {
        let [flags] = r.take::<1>()?;
        let mut rgb = [0.0; 3];
        for x in &mut rgb {
            *x = f32::from_le_bytes(r.take()?) as f64;
        }
        let n = r.u32()? as usize;
        // guard against absurd counts before allocating
        if n.saturating_mul(24) > bytes.len() - r.pos {
            return Err(KnotError::Truncated);
        }
        let mut vertices = Vec::with_capacity(n);
        for _ in 0..n {
            let mut xyz = [0.0; 3];
            for x in &mut xyz {
                *x = f64::from_le_bytes(r.take()?);
            }
            vertices.push(Vec3::from(xyz));
        }
        let mut c = Component::new(vertices, flags & 1 != 0);
        c.hidden = flags & 2 != 0;
        c.color = Color { r: rgb[0], g: rgb[1], b: rgb[2] };
        components.push(c);
    }
    let link = PolyLink::new(components);
    link.validate()?;
    Ok(link)
}

/// Geomview VECT. Closed components repeat their first vertex.
pub fn save_vect(link: &PolyLink) -> String {
    let counts: Vec<usize> = link.components.iter().map(|c| c.len() + c.closed as usize).collect();
    let n = link.components.len();
    let mut out = format!("VECT\n{} {} {}\n", n, counts.iter().sum::<usize>(), n);
    out.push_str(&join(counts.iter()));
    out.push('\n');
    out.push_str(&join(std::iter::repeat_n(1, n)));
    out.push('\n');
    for c in &link.components {
        let mut vs = c.vertices.clone();
        if c.closed {
            vs.push(c.vertices[0]);
        }
        for v in vs {
            out.push_str(&format!("{} {} {}\n", v.x, v.y, v.z));
        }
    }
    for c in &link.components {
        out.push_str(&format!("{} {} {} 1\n", c.color.r, c.color.g, c.color.b));
    }
    out
}

fn join<T: ToString>(items: impl Iterator<Item = T>) -> String {
    items.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests;
