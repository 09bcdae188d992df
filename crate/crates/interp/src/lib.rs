//! The knotforge command language: parsing, parameters, the session that
//! commands act on, and a small built-in catalogue.

pub mod catalogue;
mod commands;
pub mod params;
pub mod parse;
pub mod session;

pub use commands::{is_mutating, DEFAULT_STEPS, MAX_UNTIL, UNSUPPORTED};
pub use params::{ParamError, ParameterStore, Value};
pub use parse::{expand_alias, parse_line, Invocation, ParseError};
pub use session::{DisplayMode, DowkerProjection, Flow, Message, Response, Session};
