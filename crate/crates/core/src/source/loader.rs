//! Walks source roots and parses every `.java` file in parallel.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use walkdir::WalkDir;

use super::model::SourceUnit;
use super::parser::parse_unit_with;
use super::resolve::{resolve_project, ProjectModel, ResolveError};
use super::types::ParseOptions;

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Resolve(#[from] ResolveError),
}

/// Lists `.java` files under `root` (or `root` itself), sorted.
fn java_files(root: &Path) -> Result<Vec<PathBuf>, LoadError> {
    let meta = std::fs::metadata(root).map_err(|source| LoadError::Io {
        path: root.to_path_buf(),
        source,
    })?;
    if meta.is_file() {
        return Ok(vec![root.to_path_buf()]);
    }
    let mut files = Vec::new();
    for entry in WalkDir::new(root).sort_by_file_name() {
        let entry = entry.map_err(|e| LoadError::Io {
            path: e.path().unwrap_or(root).to_path_buf(),
            source: e.into_io_error().unwrap_or_else(|| std::io::Error::other("walk failed")),
        })?;
        if entry.file_type().is_file()
            && entry.path().extension().is_some_and(|e| e == "java")
        {
            files.push(entry.into_path());
        }
    }
    Ok(files)
}

/// Path used in the model: relative to the root for directories, the file
/// name for a file root. Always `/`-separated.
fn unit_path(root: &Path, file: &Path) -> String {
    let rel = if root == file {
        file.file_name().map(PathBuf::from).unwrap_or_default()
    } else {
        file.strip_prefix(root).unwrap_or(file).to_path_buf()
    };
    rel.components()
        .map(|c| c.as_os_str().to_string_lossy())
        .collect::<Vec<_>>()
        .join("/")
}

/// Parses every `.java` file under the roots. Units are ordered by root,
/// then path.
pub fn load_units(roots: &[PathBuf], opts: &ParseOptions) -> Result<Vec<SourceUnit>, LoadError> {
    let mut jobs = Vec::new();
    for root in roots {
        for file in java_files(root)? {
            jobs.push((root.clone(), file));
        }
    }
    jobs.par_iter()
        .map(|(root, file)| {
            let bytes = std::fs::read(file).map_err(|source| LoadError::Io {
                path: file.clone(),
                source,
            })?;
            Ok(parse_unit_with(&bytes, &unit_path(root, file), opts))
        })
        .collect()
}

pub fn load_project(roots: &[PathBuf]) -> Result<ProjectModel, LoadError> {
    load_project_with(roots, &ParseOptions::default())
}

pub fn load_project_with(roots: &[PathBuf], opts: &ParseOptions) -> Result<ProjectModel, LoadError> {
    Ok(resolve_project(load_units(roots, opts)?)?)
}

/// Resolves `path` (as stored in a unit) against the roots.
pub fn locate(roots: &[PathBuf], path: &str) -> Option<PathBuf> {
    roots.iter().find_map(|root| {
        if root.is_file() {
            return (unit_path(root, root) == path).then(|| root.clone());
        }
        let candidate = root.join(path);
        candidate.is_file().then_some(candidate)
    })
}
