//! All-or-nothing output staging.
//!
//! Commands collect every artifact in memory, then [`Staged::commit`] writes
//! each to a temporary file beside its destination and renames them into
//! place only after all temporaries are on disk.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::raster::{encode_for_path, GrayImage};

#[derive(Default)]
pub struct Staged {
    files: Vec<(PathBuf, Vec<u8>)>,
}

impl Staged {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bytes(&mut self, path: impl Into<PathBuf>, bytes: Vec<u8>) {
        self.files.push((path.into(), bytes));
    }

    pub fn image(&mut self, path: impl Into<PathBuf>, img: &GrayImage) -> Result<()> {
        let path = path.into();
        let bytes = encode_for_path(img, &path)?;
        self.bytes(path, bytes);
        Ok(())
    }

    pub fn text(&mut self, path: impl Into<PathBuf>, text: String) {
        self.bytes(path, text.into_bytes());
    }

    pub fn paths(&self) -> impl Iterator<Item = &Path> {
        self.files.iter().map(|(p, _)| p.as_path())
    }

    pub fn commit(self) -> Result<Vec<PathBuf>> {
        let mut pending = Vec::with_capacity(self.files.len());
        for (path, bytes) in &self.files {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
                _ => PathBuf::from("."),
            };
            std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
            let mut tmp = tempfile::Builder::new()
                .prefix(".lentirestore-")
                .tempfile_in(&dir)
                .map_err(|e| Error::io(&dir, e))?;
            tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
            pending.push((tmp, path.clone()));
        }
        // dropping an unpersisted temp file deletes it, so an early return
        // above leaves no partial artifacts
        let mut written = Vec::with_capacity(pending.len());
        for (tmp, path) in pending {
            tmp.persist(&path).map_err(|e| Error::io(&path, e.error))?;
            written.push(path);
        }
        Ok(written)
    }
}
