//! Command line, function registry, grid files and reports.

pub mod cli;
pub mod grid;
pub mod registry;
pub mod report;

pub use cli::{run, Outcome};
pub use grid::{load_grid, write_grid, GridFile};
pub use report::{Format, Report};
