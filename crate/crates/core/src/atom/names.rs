//! Named atoms of complexity at most 3.
//!
//! The shipped table (`data/atom_names.json`) maps canonical forms to the
//! classical letters. Symmetry groups pin down B, C1, C2, D1, D2, E1, E3 and
//! H1. The remaining letters follow the shape of the singular graph `K`
//! (3 vertices, 6 edges):
//!
//! * `E`: every pair of vertices joined by a double edge;
//! * `F`: a triple edge whose ends are each joined once to a third vertex
//!   carrying a loop;
//! * `G`: a chain of two double edges with a loop at each end;
//! * `H`: a triangle with a loop at every vertex.
//!
//! Within a letter, atoms with equal symmetry group are ordered by genus and
//! then by the larger boundary-circle count, descending: F1 is planar (2→3),
//! F2 has genus 1; G1 is 1→4, G3 is 2→3.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{canonical_form, standard_series, FGraph, Series};
use crate::error::{AtlasError, Result};
use crate::permgroup::Permutation;

/// Environment variable overriding the shipped name table.
pub const NAME_TABLE_ENV: &str = "ATLAS_NAME_TABLE";

const SHIPPED_TABLE: &str = include_str!("../../data/atom_names.json");

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AtomName(String);

impl AtomName {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_named(&self) -> bool {
        !self.0.starts_with("unnamed-")
    }
}

impl fmt::Display for AtomName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// One row of the name-table file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NameEntry {
    pub name: String,
    pub sigma: Permutation,
    pub tau: Permutation,
}

#[derive(Clone, Debug, Default)]
pub struct NameTable {
    by_form: BTreeMap<FGraph, String>,
    by_name: BTreeMap<String, FGraph>,
}

impl NameTable {
    pub fn shipped() -> &'static NameTable {
        static TABLE: OnceLock<NameTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            NameTable::from_json(SHIPPED_TABLE).expect("shipped atom name table is valid")
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let entries: Vec<NameEntry> = serde_json::from_str(text)?;
        let mut table = NameTable::default();
        for entry in entries {
            let form = canonical_form(&FGraph::new(entry.sigma, entry.tau)?);
            if let Some(prev) = table.by_form.get(&form) {
                return Err(AtlasError::Parse(format!(
                    "atoms {prev:?} and {:?} have the same canonical form",
                    entry.name
                )));
            }
            if table.by_name.contains_key(&entry.name) {
                return Err(AtlasError::Parse(format!(
                    "duplicate atom name {:?}",
                    entry.name
                )));
            }
            table.by_form.insert(form.clone(), entry.name.clone());
            table.by_name.insert(entry.name, form);
        }
        Ok(table)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| AtlasError::Parse(format!("cannot read {}: {e}", path.display())))?;
        NameTable::from_json(&text)
    }

    /// Explicit path, else `ATLAS_NAME_TABLE`, else the shipped table.
    pub fn load(path: Option<&Path>) -> Result<NameTable> {
        match path {
            Some(p) => NameTable::from_path(p),
            None => match std::env::var_os(NAME_TABLE_ENV) {
                Some(p) if !p.is_empty() => NameTable::from_path(Path::new(&p)),
                _ => Ok(NameTable::shipped().clone()),
            },
        }
    }

    pub fn len(&self) -> usize {
        self.by_form.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_form.is_empty()
    }

    pub fn entries(&self) -> Vec<NameEntry> {
        self.by_name
            .iter()
            .map(|(name, f)| NameEntry {
                name: name.clone(),
                sigma: f.sigma().clone(),
                tau: f.tau().clone(),
            })
            .collect()
    }

    pub fn identify(&self, f: &FGraph) -> AtomName {
        let form = canonical_form(f);
        match self.by_form.get(&form) {
            Some(name) => AtomName(name.clone()),
            None => AtomName(format!("unnamed-{}", form_hash(&form))),
        }
    }

    /// Table names resolve to their canonical f-graph; `X<m>` and `Y<m>`
    /// resolve to the series construction.
    pub fn resolve(&self, name: &str) -> Result<FGraph> {
        if let Some(f) = self.by_name.get(name) {
            return Ok(f.clone());
        }
        let series = match name.chars().next() {
            Some('X') => Some(Series::X),
            Some('Y') => Some(Series::Y),
            _ => None,
        };
        if let (Some(series), Ok(m)) = (series, name[1..].parse::<usize>()) {
            if m > 0 {
                return standard_series(series, m);
            }
        }
        Err(AtlasError::UnknownAtom(name.to_string()))
    }
}

/// Name of the atom according to the shipped table.
pub fn identify(f: &FGraph) -> AtomName {
    NameTable::shipped().identify(f)
}

fn form_hash(form: &FGraph) -> String {
    let mut hasher = Sha256::new();
    for &x in form.sigma().images().iter().chain(form.tau().images()) {
        hasher.update((x as u32).to_le_bytes());
    }
    hasher.finalize()[..4]
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
