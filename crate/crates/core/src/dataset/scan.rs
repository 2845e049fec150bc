use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Split {
    Train,
    Test,
}

impl Split {
    pub fn dir_name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Test => "test",
        }
    }
}

impl std::fmt::Display for Split {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.dir_name())
    }
}

const CLASS_DIRS: [(&str, u8); 2] = [("REAL", 0), ("FAKE", 1)];

fn is_image(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .map(|e| matches!(e.to_ascii_lowercase().as_str(), "png" | "jpg" | "jpeg"))
        .unwrap_or(false)
}

fn scan_leaf(dir: &Path, label: u8, out: &mut Vec<(PathBuf, u8)>) -> Result<()> {
    if !dir.is_dir() {
        return Ok(());
    }
    let entries =
        std::fs::read_dir(dir).map_err(|e| Error::io(format!("listing {}", dir.display()), e))?;
    let mut files = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(format!("listing {}", dir.display()), e))?;
        let path = entry.path();
        if path.is_file() && is_image(&path) {
            files.push(path);
        }
    }
    files.sort();
    out.extend(files.into_iter().map(|p| (p, label)));
    Ok(())
}

/// Lists `root/<split>/{REAL,FAKE}` images: REAL first, then FAKE, each sorted by path.
pub fn scan_split(root: impl AsRef<Path>, split: Split) -> Result<Vec<(PathBuf, u8)>> {
    let root = root.as_ref();
    let mut out = Vec::new();
    for (dir, label) in CLASS_DIRS {
        scan_leaf(&root.join(split.dir_name()).join(dir), label, &mut out)?;
    }
    if out.is_empty() {
        return Err(Error::EmptyDataset(root.join(split.dir_name())));
    }
    Ok(out)
}

/// Lists every image in the tree, train split before test split.
pub fn scan_dataset(root: impl AsRef<Path>) -> Result<Vec<(PathBuf, u8)>> {
    let root = root.as_ref();
    let mut out = Vec::new();
    for split in [Split::Train, Split::Test] {
        for (dir, label) in CLASS_DIRS {
            scan_leaf(&root.join(split.dir_name()).join(dir), label, &mut out)?;
        }
    }
    if out.is_empty() {
        return Err(Error::EmptyDataset(root.to_path_buf()));
    }
    Ok(out)
}
