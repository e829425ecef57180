pub mod braid_core;
pub mod branched_surface;
pub mod construction;
pub mod error;
pub mod oracle;
pub mod surface_model;
pub mod train_track;

pub use error::{Error, Result};
