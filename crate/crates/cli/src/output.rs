use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use tempfile::NamedTempFile;

/// Output files held in memory until the whole command has succeeded.
#[derive(Debug, Default)]
pub struct Outputs {
    files: Vec<(&'static str, String)>,
}

impl Outputs {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn file(mut self, name: &'static str, contents: String) -> Self {
        self.files.push((name, contents));
        self
    }

    /// Writes every file to a temporary sibling first and renames them into
    /// place only once all writes succeeded.
    pub fn commit(self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut staged = Vec::with_capacity(self.files.len());
        for (name, contents) in self.files {
            let mut tmp = NamedTempFile::new_in(dir).with_context(|| format!("staging {name}"))?;
            tmp.write_all(contents.as_bytes()).with_context(|| format!("writing {name}"))?;
            tmp.as_file().sync_all()?;
            staged.push((name, tmp));
        }
        for (name, tmp) in staged {
            let target = dir.join(name);
            tmp.persist(&target).with_context(|| format!("moving {} into place", target.display()))?;
        }
        Ok(())
    }
}
