//! The `pack` command line: catalog listing, verification, packing documents
//! (JSON) and strip pictures (SVG).

pub mod commands;
pub mod document;
pub mod svg;

use std::path::Path;

use isometry_catalog::Catalog;
use thiserror::Error;

pub use commands::{cmd_catalog_list, cmd_catalog_show, cmd_generate, cmd_glue, cmd_render, cmd_verify, GenerateSource, GlueArgs, RenderArgs};
pub use document::{blend_document, circle_record, lattice_document, CircleRecord, ExactValue, Frame, Meta, PackingDocument};
pub use svg::{render, Inversion, RenderSpec, Window};

/// Exit status for a check that ran and failed.
pub const EXIT_FAILURE: i32 = 1;
/// Exit status for unusable input.
pub const EXIT_BAD_INPUT: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    BadInput(String),
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
    /// A computation that could not finish, e.g. a non-discrete group.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => EXIT_FAILURE,
            _ => EXIT_BAD_INPUT,
        }
    }
}

/// The catalog named by `PACK_CATALOG`, or the built-in one.
pub fn load_catalog() -> Result<Catalog, CliError> {
    match std::env::var_os("PACK_CATALOG") {
        Some(p) => Catalog::load(Path::new(&p)).map_err(|e| CliError::BadInput(format!("catalog {}: {e}", Path::new(&p).display()))),
        None => Ok(Catalog::embedded()),
    }
}
