pub mod affiliation;
pub mod bib;
pub mod body;
pub mod citation;
pub mod classify;
pub mod dict;
pub mod error;
pub mod eval;
pub mod features;
pub mod metadata;
pub mod geom;
pub mod ingest;
pub mod model_io;
pub mod models;
pub mod order;
pub mod pipeline;
pub mod record;
pub mod segment;
pub mod synth;
pub mod tagger;
pub mod text;
pub mod tokens;

pub use error::{Error, Result};
