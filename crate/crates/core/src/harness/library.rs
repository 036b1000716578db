//! Vendored instance files and their manifest.
//!
//! A data directory holds `manifest.csv` (`name,dimension,optimum`) and one
//! `<name>.tsp` file per listed instance.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tsplib::TspInstance;

pub const MANIFEST_FILE: &str = "manifest.csv";

/// Environment variable that overrides the default data directory.
pub const DATA_DIR_ENV: &str = "COEBA_DATA_DIR";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    pub dimension: usize,
    /// Known optimal tour length, if any.
    pub optimum: Option<u64>,
}

/// `$COEBA_DATA_DIR`, or the `data/tsplib` directory of this repository.
pub fn default_data_dir() -> PathBuf {
    std::env::var_os(DATA_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            let core = Path::new(env!("CARGO_MANIFEST_DIR"));
            let root = core.parent().and_then(Path::parent).unwrap_or(core);
            root.join("data").join("tsplib")
        })
}

#[derive(Debug, Clone)]
pub struct InstanceLibrary {
    dir: PathBuf,
    entries: BTreeMap<String, ManifestEntry>,
}

impl InstanceLibrary {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        let path = dir.join(MANIFEST_FILE);
        let mut reader = csv::Reader::from_path(&path).map_err(|e| csv_error(&path, e))?;
        let mut entries = BTreeMap::new();
        for row in reader.deserialize::<ManifestEntry>() {
            let entry = row.map_err(|e| csv_error(&path, e))?;
            entries.insert(entry.name.clone(), entry);
        }
        Ok(InstanceLibrary { dir, entries })
    }

    pub fn open_default() -> Result<Self> {
        InstanceLibrary::open(default_data_dir())
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn entries(&self) -> impl Iterator<Item = &ManifestEntry> {
        self.entries.values()
    }

    pub fn entry(&self, name: &str) -> Result<&ManifestEntry> {
        self.entries
            .get(name)
            .ok_or_else(|| Error::UnknownInstance(name.to_string()))
    }

    pub fn optimum(&self, name: &str) -> Option<u64> {
        self.entries.get(name).and_then(|e| e.optimum)
    }

    pub fn path_of(&self, name: &str) -> PathBuf {
        self.dir.join(format!("{name}.tsp"))
    }

    /// Parses an instance and checks its dimension against the manifest.
    pub fn load(&self, name: &str) -> Result<TspInstance> {
        let entry = self.entry(name)?;
        let instance = TspInstance::load(self.path_of(name))?;
        if instance.dimension() != entry.dimension {
            return Err(Error::DimensionMismatch {
                expected: entry.dimension,
                actual: instance.dimension(),
            });
        }
        Ok(instance)
    }

    pub fn load_all<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<TspInstance>> {
        names.iter().map(|n| self.load(n.as_ref())).collect()
    }
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::format(path, format!("{other:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQUARE: &str = "NAME : sq\nTYPE : TSP\nDIMENSION : 4\nEDGE_WEIGHT_TYPE : EUC_2D\n\
                          NODE_COORD_SECTION\n1 0 0\n2 0 1\n3 1 1\n4 1 0\nEOF\n";

    #[test]
    fn loads_and_checks_dimension() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(
            dir.path().join(MANIFEST_FILE),
            "name,dimension,optimum\nsq,4,4\nbad,5,\nmissing,3,\n",
        )
        .unwrap();
        std::fs::write(dir.path().join("sq.tsp"), SQUARE).unwrap();
        std::fs::write(dir.path().join("bad.tsp"), SQUARE).unwrap();
        let lib = InstanceLibrary::open(dir.path()).unwrap();
        assert_eq!(lib.entries().count(), 3);
        assert_eq!(lib.optimum("sq"), Some(4));
        assert_eq!(lib.optimum("bad"), None);
        assert_eq!(lib.load("sq").unwrap().dimension(), 4);
        assert!(matches!(
            lib.load("bad"),
            Err(Error::DimensionMismatch {
                expected: 5,
                actual: 4
            })
        ));
        assert!(matches!(lib.load("missing"), Err(Error::Io { .. })));
        assert!(matches!(lib.load("nope"), Err(Error::UnknownInstance(_))));
    }

    #[test]
    fn missing_manifest_names_path() {
        let dir = tempfile::tempdir().unwrap();
        let err = InstanceLibrary::open(dir.path()).unwrap_err();
        assert!(err.to_string().contains(MANIFEST_FILE));
    }
}
