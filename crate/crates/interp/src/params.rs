//! Typed parameters settable with `name = value`.

use std::fmt;

use knotforge_core::io::parse_color;
use knotforge_core::Color;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Value {
    Real(f64),
    Int(i64),
    Bool(bool),
    Color(Color),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Real,
    Int,
    Bool,
    Color,
}

impl Value {
    pub fn kind(&self) -> Kind {
        match self {
            Value::Real(_) => Kind::Real,
            Value::Int(_) => Kind::Int,
            Value::Bool(_) => Kind::Bool,
            Value::Color(_) => Kind::Color,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Real(x) => write!(f, "{x}"),
            Value::Int(x) => write!(f, "{x}"),
            Value::Bool(b) => write!(f, "{}", if *b { "on" } else { "off" }),
            Value::Color(c) => write!(f, "rgb:{}/{}/{}", c.r, c.g, c.b),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Real => "a real number",
            Kind::Int => "a non-negative integer",
            Kind::Bool => "on or off",
            Kind::Color => "a colour",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ParamError {
    #[error("unknown parameter '{0}'")]
    Unknown(String),
    #[error("{name} must be {expected}, got '{value}'")]
    BadValue { name: &'static str, value: String, expected: Kind },
}

/// Force switches. Each can be set with `elec = on` and so on.
pub const FORCE_TOGGLES: [&str; 8] = ["elec", "mech", "amech", "velfo", "grav", "anch", "therm", "tanf"];

fn defaults() -> Vec<(&'static str, Value)> {
    use Value::*;
    vec![
        ("close", Real(0.12)),
        ("max-dir", Real(0.1)),
        ("dt", Real(0.05)),
        ("stusplit", Int(0)),
        ("dbmin", Int(3)),
        ("dstep", Int(1)),
        ("stuck_factor", Real(1.5)),
        ("stuck_eps", Real(0.01)),
        ("undamped", Bool(false)),
        ("elec", Bool(true)),
        ("mech", Bool(true)),
        ("amech", Bool(false)),
        ("velfo", Bool(false)),
        ("grav", Bool(false)),
        ("anch", Bool(false)),
        ("therm", Bool(false)),
        ("tanf", Bool(false)),
        ("charge", Real(1.0)),
        ("power", Real(4.0)),
        ("hooke", Real(1.0)),
        ("spring", Real(1.0)),
        ("velmag", Real(0.1)),
        ("gravmag", Real(0.1)),
        ("anchmag", Real(1.0)),
        ("thermmag", Real(0.01)),
        ("tanmag", Real(0.1)),
        ("vscale", Real(1.0)),
        ("sradius", Real(0.3)),
        ("cradius", Real(0.1)),
        ("bradius", Real(0.15)),
        ("ncur", Int(6)),
        ("nseg", Int(12)),
        ("N-torus", Int(120)),
        ("R-torus", Real(3.0)),
        ("d-torus", Real(1.0)),
        ("psmode", Int(40)),
        ("pserase", Real(4.0)),
        ("pswidth", Real(1.5)),
        ("background", Color(knotforge_core::Color::new(190.0 / 255.0, 190.0 / 255.0, 190.0 / 255.0))),
        ("hstart", Real(0.0)),
        ("hincr", Real(137.5)),
        ("satur", Real(0.8)),
        ("value", Real(0.9)),
        ("duc", Bool(false)),
    ]
}

/// Names compare case-insensitively with `_` and `-` treated alike, so
/// `max_dir`, `Max-Dir` and `max-dir` are one parameter.
fn key(name: &str) -> String {
    name.to_ascii_lowercase().replace('_', "-")
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParameterStore {
    entries: Vec<(&'static str, Value)>,
}

impl Default for ParameterStore {
    fn default() -> Self {
        ParameterStore { entries: defaults() }
    }
}

fn parse_bool(text: &str) -> Option<bool> {
    match text.to_ascii_lowercase().as_str() {
        "on" | "true" | "yes" | "1" => Some(true),
        "off" | "false" | "no" | "0" => Some(false),
        _ => None,
    }
}

impl ParameterStore {
    fn index(&self, name: &str) -> Option<usize> {
        let k = key(name);
        self.entries.iter().position(|(n, _)| key(n) == k)
    }

    pub fn get(&self, name: &str) -> Option<Value> {
        self.index(name).map(|i| self.entries[i].1)
    }

    /// Registered name as spelled in the registry.
    pub fn canonical(&self, name: &str) -> Option<&'static str> {
        self.index(name).map(|i| self.entries[i].0)
    }

    /// Numeric value of a registered real or integer parameter.
    pub fn real(&self, name: &str) -> f64 {
        match self.get(name) {
            Some(Value::Real(x)) => x,
            Some(Value::Int(x)) => x as f64,
            other => panic!("{name} is not numeric: {other:?}"),
        }
    }

    pub fn int(&self, name: &str) -> i64 {
        match self.get(name) {
            Some(Value::Int(x)) => x,
            other => panic!("{name} is not an integer: {other:?}"),
        }
    }

    pub fn count(&self, name: &str) -> usize {
        self.int(name).max(0) as usize
    }

    pub fn flag(&self, name: &str) -> bool {
        match self.get(name) {
            Some(Value::Bool(b)) => b,
            other => panic!("{name} is not a switch: {other:?}"),
        }
    }

    pub fn color(&self, name: &str) -> Color {
        match self.get(name) {
            Some(Value::Color(c)) => c,
            other => panic!("{name} is not a colour: {other:?}"),
        }
    }

    /// Parse `text` according to the parameter's type and store it.
    pub fn set(&mut self, name: &str, text: &str) -> Result<Value, ParamError> {
        let i = self.index(name).ok_or_else(|| ParamError::Unknown(name.to_string()))?;
        let (canon, old) = self.entries[i];
        let text = text.trim();
        let bad = || ParamError::BadValue { name: canon, value: text.to_string(), expected: old.kind() };
        let new = match old {
            Value::Real(_) => Value::Real(text.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(bad)?),
            Value::Int(_) => Value::Int(text.parse::<i64>().ok().filter(|x| *x >= 0).ok_or_else(bad)?),
            Value::Bool(_) => Value::Bool(parse_bool(text).ok_or_else(bad)?),
            Value::Color(_) => Value::Color(parse_color(text).map_err(|_| bad())?),
        };
        self.entries[i].1 = new;
        Ok(new)
    }

    /// Store an already typed value, as when undoing a rejected assignment.
    pub(crate) fn put(&mut self, name: &str, value: Value) {
        if let Some(i) = self.index(name) {
            self.entries[i].1 = value;
        }
    }

    /// Parameters in registry order whose names start with `prefix`.
    pub fn with_prefix<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = (&'static str, Value)> + 'a {
        let p = key(prefix);
        self.entries.iter().filter(move |(n, _)| key(n).starts_with(&p)).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn typed_assignment() {
        let mut p = ParameterStore::default();
        assert_eq!(p.set("stusplit", "3"), Ok(Value::Int(3)));
        assert_eq!(p.set("max_dir", "0.05"), Ok(Value::Real(0.05)));
        assert_eq!(p.real("max-dir"), 0.05);
        assert_eq!(p.set("velfo", "on"), Ok(Value::Bool(true)));
        assert_eq!(p.set("duc", "true"), Ok(Value::Bool(true)));
        assert_eq!(p.set("background", "white"), Ok(Value::Color(Color::new(1.0, 1.0, 1.0))));
        assert_eq!(p.set("n-torus", "50"), Ok(Value::Int(50)));
        assert_eq!(p.canonical("n-torus"), Some("N-torus"));
    }

    #[test]
    fn rejects_bad_values_and_names() {
        let mut p = ParameterStore::default();
        assert!(matches!(p.set("stusplit", "2.5"), Err(ParamError::BadValue { .. })));
        assert!(matches!(p.set("nseg", "-1"), Err(ParamError::BadValue { .. })));
        assert!(matches!(p.set("close", "nan"), Err(ParamError::BadValue { .. })));
        assert!(matches!(p.set("elec", "maybe"), Err(ParamError::BadValue { .. })));
        assert_eq!(p.set("bogus", "1"), Err(ParamError::Unknown("bogus".into())));
        assert_eq!(p, ParameterStore::default());
    }

    #[test]
    fn registry_has_the_documented_names() {
        let p = ParameterStore::default();
        for name in [
            "close", "max-dir", "stusplit", "dbmin", "dstep", "vscale", "sradius", "cradius", "bradius", "ncur",
            "nseg", "N-torus", "R-torus", "d-torus", "psmode", "pserase", "background", "hstart", "hincr", "satur",
            "value", "charge", "power", "hooke", "spring", "velmag", "duc", "stuck_factor", "stuck_eps",
        ] {
            assert!(p.get(name).is_some(), "{name}");
        }
        assert_eq!(p.with_prefix("ps").count(), 3);
    }
}
