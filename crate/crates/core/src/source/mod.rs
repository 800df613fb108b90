//! Java source model: tolerant parsing, pretty-printing and project-wide
//! resolution.

mod body;
pub mod lexer;
mod loader;
mod model;
mod parser;
mod pretty;
mod resolve;
mod types;

pub use loader::{load_project, load_project_with, load_units, locate, LoadError};
pub use model::*;
pub use parser::{parse_source, parse_unit, parse_unit_with};
pub use pretty::to_java;
pub use resolve::*;
pub use types::{is_java_primitive, is_primitive_like, raw_type_name, ParseOptions};
