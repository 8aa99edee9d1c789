//! Batch front end: run descriptions, reports and figures.
//!
//! `report.json` carries every number twice, as an exact rational string and
//! as a decimal; the exact form is authoritative.

mod config;
mod render;
mod run;

pub use config::{parse_config, Assertion, Command, ConfigError, MapSource, RunConfig};
pub use render::{render_cover, render_graph, render_map, render_tree, sig12, RenderError, MAX_ELEMENTS};
pub use run::{load_system, run, RunError, RunOutput};
