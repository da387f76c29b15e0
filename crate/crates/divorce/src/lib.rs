//! File formats, wall-clock and parallel search, and Graphviz output on top
//! of [`divorce_core`]. The `divorce` binary is built from this crate.

pub mod dot;
pub mod json;
pub mod search;
pub mod text;

pub use divorce_core as core;
