//! A persisted list of small algebras up to isomorphism, with precomputed
//! property flags.
//!
//! File format: a header line `ririg-catalog v1 <params json>` followed by
//! one JSON record per line, `{"form": hex, "flags": {...}, "algebra": {...}}`
//! where `algebra` is in the algebra file format.

use std::collections::HashSet;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumerate::{canonical_form, enumerate_modal_expansions, enumerate_ririgs, CanonicalForm, Constraints};
use crate::error::{Error, Result};
use crate::io::{from_json, AlgebraFile};
use crate::irreducible::{is_simple, is_subdirectly_irreducible};
use crate::modal::FiniteIModalRirig;
use crate::varieties;

pub const CATALOG_MAGIC: &str = "ririg-catalog";
pub const CATALOG_VERSION: &str = "v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogFlags {
    pub trivial: bool,
    /// Always false for the trivial algebra.
    pub simple: bool,
    /// Always false for the trivial algebra.
    pub si: bool,
    pub chain: bool,
    pub contractive: bool,
    pub in_rc: bool,
}

impl CatalogFlags {
    pub fn compute(a: &FiniteIModalRirig) -> Result<Self> {
        let trivial = a.is_trivial();
        let (simple, si) = if trivial {
            (false, false)
        } else {
            (is_simple(a)?.simple, is_subdirectly_irreducible(a)?.si)
        };
        Ok(CatalogFlags {
            trivial,
            simple,
            si,
            chain: varieties::is_chain(a),
            contractive: varieties::is_contractive(a),
            in_rc: varieties::in_rc(a),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub algebra: FiniteIModalRirig,
    pub form: CanonicalForm,
    pub flags: CatalogFlags,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogParams {
    pub max_size: usize,
    /// Entries carry between 0 and this many modal symbols.
    pub modals: usize,
    pub constraints: Constraints,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog {
    pub params: CatalogParams,
    pub entries: Vec<CatalogEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Record {
    form: CanonicalForm,
    flags: CatalogFlags,
    algebra: AlgebraFile,
}

/// Every algebra of size `1..=max_size` with `0..=modals` modal symbols
/// (`m1, m2`) satisfying `constraints`, up to isomorphism; ordered by size,
/// number of modals, then canonical form.
pub fn catalog_build(max_size: usize, modals: usize, constraints: Constraints) -> Result<Catalog> {
    let mut algebras = Vec::new();
    for n in 1..=max_size {
        for r in enumerate_ririgs(n)? {
            for k in 0..=modals {
                algebras.extend(enumerate_modal_expansions(&r, k, constraints)?);
            }
        }
    }
    algebras.sort_by_cached_key(|a| (a.size(), a.k(), canonical_form(a)));
    let entries = algebras
        .into_par_iter()
        .map(|a| {
            Ok(CatalogEntry {
                form: canonical_form(&a),
                flags: CatalogFlags::compute(&a)?,
                algebra: a,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Catalog {
        params: CatalogParams {
            max_size,
            modals,
            constraints,
        },
        entries,
    })
}

impl Catalog {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn algebras(&self) -> Vec<FiniteIModalRirig> {
        self.entries.iter().map(|e| e.algebra.clone()).collect()
    }

    pub fn find(&self, a: &FiniteIModalRirig) -> Option<&CatalogEntry> {
        let form = canonical_form(a);
        self.entries.iter().find(|e| e.form == form)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{CATALOG_MAGIC} {CATALOG_VERSION} {}\n",
            serde_json::to_string(&self.params).expect("serializable")
        );
        for e in &self.entries {
            let record = Record {
                form: e.form.clone(),
                flags: e.flags,
                algebra: AlgebraFile::from_algebra(&e.algebra),
            };
            out.push_str(&serde_json::to_string(&record).expect("serializable"));
            out.push('\n');
        }
        out
    }

    /// Parses a catalog, recomputing canonical forms to reject corrupted or
    /// duplicated records.
    pub fn from_text(text: &str) -> Result<Catalog> {
        let mut lines = text.lines().enumerate();
        let header = lines.next().map(|(_, l)| l).unwrap_or("");
        let expected = format!("{CATALOG_MAGIC} {CATALOG_VERSION}");
        let Some(params) = header.strip_prefix(&expected).and_then(|r| r.strip_prefix(' ')) else {
            return Err(Error::CatalogVersion {
                expected,
                found: header.split(' ').take(2).collect::<Vec<_>>().join(" "),
            });
        };
        let relocate = |line: usize, e: Error| match e {
            Error::Parse { column, message, .. } => Error::Parse {
                line: line + 1,
                column,
                message,
            },
            Error::Input { path, message } => Error::Input {
                path: format!("line {}: {path}", line + 1),
                message,
            },
            other => other,
        };
        let params: CatalogParams = from_json(params).map_err(|e| relocate(0, e))?;
        let mut seen = HashSet::new();
        let mut entries = Vec::new();
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let record: Record = from_json(line).map_err(|e| relocate(i, e))?;
            let algebra = record.algebra.build().map_err(|e| relocate(i, e))?;
            let bad = |message: String| Error::Input {
                path: format!("line {}", i + 1),
                message,
            };
            if canonical_form(&algebra) != record.form {
                return Err(bad("canonical form does not match the algebra".into()));
            }
            if !seen.insert(record.form.clone()) {
                return Err(bad("duplicate canonical form".into()));
            }
            entries.push(CatalogEntry {
                algebra,
                form: record.form,
                flags: record.flags,
            });
        }
        Ok(Catalog { params, entries })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Catalog> {
        Catalog::from_text(&crate::io::read_text(path)?)
    }
}
