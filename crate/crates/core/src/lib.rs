//! Orientation rules for partial ancestral graphs under background
//! knowledge, and enumeration of the covariate-adjustment sets a PAG admits.

pub mod adjustment;
pub mod bench;
pub mod cli;
pub mod gen;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod query;
pub mod rules;
pub mod vset;

pub use graph::{EdgeRecord, GraphError, Mark, MixedGraph};
pub use query::{Path, PathClass};
pub use vset::VertexSet;
