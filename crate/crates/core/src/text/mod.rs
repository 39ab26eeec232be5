//! Text front end: system files, rankings, human and JSON rendering.

pub mod json;
pub mod parse;
pub mod render;

pub use json::{verdict_json, ChainEntry, VerdictJson, SCHEMA};
pub use parse::{parse_expr, parse_ranking, parse_system, parse_system_file, Scope, SystemFile};
pub use render::{render_chain, render_grouped, render_poly, render_verdict, solved_form};
