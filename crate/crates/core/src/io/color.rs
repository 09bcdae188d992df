use crate::error::{KnotError, Result};
use crate::polylink::Color;

const NAMED: &[(&str, [u8; 3])] = &[
    ("white", [255, 255, 255]),
    ("black", [0, 0, 0]),
    ("grey", [190, 190, 190]),
    ("gray", [190, 190, 190]),
    ("darkgrey", [169, 169, 169]),
    ("lightgrey", [211, 211, 211]),
    ("red", [255, 0, 0]),
    ("green", [0, 255, 0]),
    ("blue", [0, 0, 255]),
    ("yellow", [255, 255, 0]),
    ("cyan", [0, 255, 255]),
    ("magenta", [255, 0, 255]),
    ("orange", [255, 165, 0]),
    ("purple", [160, 32, 240]),
    ("pink", [255, 192, 203]),
    ("brown", [165, 42, 42]),
    ("navyblue", [0, 0, 128]),
    ("skyblue", [135, 206, 235]),
    ("forestgreen", [34, 139, 34]),
    ("gold", [255, 215, 0]),
    ("salmon", [250, 128, 114]),
    ("violet", [238, 130, 238]),
    ("turquoise", [64, 224, 208]),
    ("maroon", [176, 48, 96]),
];

pub fn color_names() -> impl Iterator<Item = &'static str> {
    NAMED.iter().map(|(n, _)| *n)
}

fn triple(body: &str, text: &str) -> Result<[f64; 3]> {
    let parts: Vec<&str> = body.split('/').collect();
    let bad = || KnotError::BadSpec(format!("bad colour '{text}'"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let mut out = [0.0; 3];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.trim().parse().map_err(|_| bad())?;
    }
    Ok(out)
}

/// A colour name (case and space insensitive), `rgb:r/g/b` with components
/// in [0, 1], or `rgbi:R/G/B` with components in [0, 255].
pub fn parse_color(text: &str) -> Result<Color> {
    let key: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
    if let Some(body) = key.strip_prefix("rgb:") {
        let [r, g, b] = triple(body, text)?;
        return Ok(Color::new(r, g, b));
    }
    if let Some(body) = key.strip_prefix("rgbi:") {
        let [r, g, b] = triple(body, text)?;
        return Ok(Color::new(r / 255.0, g / 255.0, b / 255.0));
    }
    NAMED
        .iter()
        .find(|(n, _)| *n == key)
        .map(|(_, [r, g, b])| Color::new(*r as f64 / 255.0, *g as f64 / 255.0, *b as f64 / 255.0))
        .ok_or_else(|| KnotError::BadSpec(format!("unknown colour '{text}'")))
}
