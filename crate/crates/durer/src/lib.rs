//! File formats, rendering and the `durer` command line on top of
//! [`durer_core`].

pub mod annotation;
pub mod cli;
pub mod config;
pub mod error;
pub mod mesh_io;
pub mod report;
pub mod svg;
pub mod synth;

pub use annotation::Annotation;
pub use config::RunConfig;
pub use error::{Error, Result};
