//! On-disk KG: a canonical N-Triples dump plus a provenance sidecar at
//! `<dump>.prov.jsonl` holding one JSON object per annotated triple, in
//! canonical triple order.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{parse_ntriples, serialize_ntriples, Graph, Provenance, RdfError, Triple};

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: RdfError,
    },
    #[error("{path} line {line}: {reason}")]
    Sidecar { path: PathBuf, line: usize, reason: String },
}

#[derive(Debug, Serialize, Deserialize)]
struct SidecarRecord {
    triple: String,
    #[serde(flatten)]
    provenance: Provenance,
}

/// Path of the provenance sidecar for a dump.
pub fn sidecar_path(dump: &Path) -> PathBuf {
    let mut name = dump.as_os_str().to_owned();
    name.push(".prov.jsonl");
    PathBuf::from(name)
}

/// Sidecar text: provenance of every annotated triple, canonical order.
pub fn serialize_provenance(graph: &Graph) -> String {
    let mut entries: Vec<(&Triple, &Provenance)> = graph.provenance_entries().collect();
    entries.sort_by_cached_key(|(t, _)| t.canonical_key());
    let mut out = String::new();
    for (t, p) in entries {
        let record = SidecarRecord {
            triple: t.to_ntriples(),
            provenance: p.clone(),
        };
        out.push_str(&serde_json::to_string(&record).expect("provenance serialises"));
        out.push('\n');
    }
    out
}

fn write(path: &Path, text: &str) -> Result<(), StoreError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| StoreError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, text).map_err(|source| StoreError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes the dump and its sidecar.
pub fn save_kg(graph: &Graph, path: &Path) -> Result<(), StoreError> {
    write(path, &serialize_ntriples(graph))?;
    write(&sidecar_path(path), &serialize_provenance(graph))
}

/// Reads a dump and, when present, its sidecar. A sidecar record for a
/// triple the dump lacks is an error.
pub fn load_kg(path: &Path) -> Result<Graph, StoreError> {
    let text = fs::read_to_string(path).map_err(|source| StoreError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut graph = parse_ntriples(&text).map_err(|source| StoreError::Parse {
        path: path.to_path_buf(),
        source,
    })?;
    let side = sidecar_path(path);
    if !side.exists() {
        return Ok(graph);
    }
    let text = fs::read_to_string(&side).map_err(|source| StoreError::Io {
        path: side.clone(),
        source,
    })?;
    for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let bad = |reason: String| StoreError::Sidecar {
            path: side.clone(),
            line: i + 1,
            reason,
        };
        let record: SidecarRecord = serde_json::from_str(line).map_err(|e| bad(e.to_string()))?;
        let triple = parse_ntriples(&record.triple)
            .map_err(|e| bad(e.to_string()))?
            .triples()
            .into_iter()
            .next()
            .ok_or_else(|| bad("no triple".into()))?;
        if !graph.attach_provenance(&triple, record.provenance) {
            return Err(bad(format!("triple not in the dump: {}", record.triple)));
        }
    }
    Ok(graph)
}
