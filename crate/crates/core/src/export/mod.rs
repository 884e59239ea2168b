//! Files produced by a run: images, iteration maps and metadata sidecars.
//! Every file is written to a temporary sibling first and renamed into
//! place, so a failed run never leaves a partial file behind.

mod image;
mod metadata;

use std::fs::File;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub use self::image::{
    decode_ppm, encode_pgm16, encode_png, encode_ppm, quantize, read_ppm, write_image, write_iters,
    ImageFormat, Rgb8,
};
pub use metadata::{
    metadata_path, parse_metadata, render_metadata, write_metadata, Command, RunConfig, RunStats,
    DYN_DEFAULT_BOUNDS, DYN_DEFAULT_MAXITER, DYN_DEFAULT_POINTS, PARAM_DEFAULT_BOUNDS,
    PARAM_DEFAULT_MAXITER, PARAM_DEFAULT_POINTS, TOOL_VERSION,
};

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed image: {0}")]
    Format(String),
    #[error("encoding failed: {0}")]
    Encode(String),
}

impl ExportError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        ExportError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

fn atomic_write(
    path: &Path,
    fill: impl FnOnce(&mut File) -> std::io::Result<()>,
) -> Result<(), ExportError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| ExportError::io(path, e))?;
    fill(tmp.as_file_mut()).map_err(|e| ExportError::io(path, e))?;
    tmp.as_file()
        .sync_all()
        .map_err(|e| ExportError::io(path, e))?;
    tmp.persist(path)
        .map_err(|e| ExportError::io(path, e.error))?;
    Ok(())
}
