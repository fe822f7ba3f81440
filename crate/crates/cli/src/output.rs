//! Output directory with collision-free names `{config hash}-{name}`.

use std::path::PathBuf;

use serde::Serialize;

use crate::CliError;

pub struct Output {
    dir: PathBuf,
    prefix: String,
}

impl Output {
    pub fn create(dir: PathBuf, prefix: String) -> Result<Self, CliError> {
        std::fs::create_dir_all(&dir).map_err(|e| CliError::Output(format!("{}: {e}", dir.display())))?;
        Ok(Self { dir, prefix })
    }

    pub fn dir(&self) -> &PathBuf {
        &self.dir
    }

    pub fn prefix(&self) -> &str {
        &self.prefix
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(format!("{}-{name}", self.prefix))
    }

    pub fn write_text(&self, name: &str, text: &str) -> Result<PathBuf, CliError> {
        let p = self.path(name);
        std::fs::write(&p, text).map_err(|e| CliError::Output(format!("{}: {e}", p.display())))?;
        Ok(p)
    }

    pub fn write_json<T: Serialize + ?Sized>(&self, name: &str, value: &T) -> Result<PathBuf, CliError> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Output(e.to_string()))?;
        text.push('\n');
        self.write_text(name, &text)
    }
}
