//! JSON file formats for algebras and finite functions.
//!
//! An algebra file is one JSON object:
//!
//! ```json
//! {
//!   "size": 3, "zero": 0, "one": 2,
//!   "join": [[0,1,2],[1,1,2],[2,2,2]],
//!   "prod": [[0,0,0],[0,1,1],[0,1,2]],
//!   "modals": {"m1": [0,0,2]},
//!   "labels": ["0","a","1"]
//! }
//! ```
//!
//! Tables are nested rows or one flat row-major list. `imp` is optional and
//! synthesized by residuation when absent. Entries are indices or labels.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::algebra::{synthesize_imp, Elem, FiniteRirig, RirigTables};
use crate::compat::FiniteFunction;
use crate::error::{Error, Result};
use crate::modal::{FiniteIModalRirig, ModalSignature};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, expecting = "an element index or label")]
pub enum Entry {
    Index(usize),
    Label(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, expecting = "a table: a list of rows or a flat row-major list of entries")]
pub enum Table {
    Nested(Vec<Vec<Entry>>),
    Flat(Vec<Entry>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub size: usize,
    pub zero: Entry,
    pub one: Entry,
    pub join: Table,
    pub prod: Table,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub imp: Option<Table>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub modals: IndexMap<String, Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// A shape-checked algebra whose axioms have not been checked yet.
#[derive(Clone, Debug)]
pub struct RawAlgebra {
    pub tables: RirigTables,
    /// False when `imp` was synthesized.
    pub imp_given: bool,
    pub labels: Option<Vec<String>>,
    pub signature: ModalSignature,
    pub modals: Vec<Vec<Elem>>,
}

struct Resolver<'a> {
    labels: Option<&'a [String]>,
}

impl Resolver<'_> {
    fn entry(&self, e: &Entry, path: impl FnOnce() -> String) -> Result<Elem> {
        match e {
            Entry::Index(i) => Ok(*i),
            Entry::Label(s) => self
                .labels
                .and_then(|ls| ls.iter().position(|l| l == s))
                .ok_or_else(|| Error::Input {
                    path: path(),
                    message: format!("unknown element label `{s}`"),
                }),
        }
    }

    fn table(&self, name: &str, t: &Table, size: usize) -> Result<Vec<Elem>> {
        match t {
            Table::Flat(entries) => entries
                .iter()
                .enumerate()
                .map(|(i, e)| self.entry(e, || format!("{name}[{i}]")))
                .collect(),
            Table::Nested(rows) => {
                if rows.len() != size {
                    return Err(Error::BadShape {
                        table: name.to_string(),
                        expected: size,
                        found: rows.len(),
                    });
                }
                let mut out = Vec::with_capacity(size * size);
                for (r, row) in rows.iter().enumerate() {
                    if row.len() != size {
                        return Err(Error::Input {
                            path: format!("{name}[{r}]"),
                            message: format!("row has {} entries, expected {size}", row.len()),
                        });
                    }
                    for (c, e) in row.iter().enumerate() {
                        out.push(self.entry(e, || format!("{name}[{r}][{c}]"))?);
                    }
                }
                Ok(out)
            }
        }
    }
}

impl AlgebraFile {
    /// Resolves labels and checks shapes, synthesizing `imp` if absent.
    pub fn to_raw(&self) -> Result<RawAlgebra> {
        let n = self.size;
        if n == 0 || n > crate::algebra::MAX_SIZE {
            return Err(Error::UnsupportedSize(n));
        }
        if let Some(ls) = &self.labels {
            if ls.len() != n {
                return Err(Error::BadShape {
                    table: "labels".into(),
                    expected: n,
                    found: ls.len(),
                });
            }
            if let Some((i, l)) = ls.iter().enumerate().find(|(i, l)| ls[..*i].contains(l)) {
                return Err(Error::Input {
                    path: format!("labels[{i}]"),
                    message: format!("duplicate label `{l}`"),
                });
            }
        }
        let res = Resolver {
            labels: self.labels.as_deref(),
        };
        let zero = res.entry(&self.zero, || "zero".into())?;
        let one = res.entry(&self.one, || "one".into())?;
        let join = res.table("join", &self.join, n)?;
        let prod = res.table("prod", &self.prod, n)?;
        let shape = RirigTables {
            size: n,
            zero,
            one,
            join: join.clone(),
            prod: prod.clone(),
            imp: vec![0; n * n],
        };
        shape.check_shape()?;
        let (imp, imp_given) = match &self.imp {
            Some(t) => (res.table("imp", t, n)?, true),
            None => (synthesize_imp(n, &join, &prod)?, false),
        };
        let tables = RirigTables { imp, ..shape };
        tables.check_shape()?;
        let signature = ModalSignature::new(self.modals.keys().cloned())?;
        let modals = self
            .modals
            .iter()
            .map(|(name, t)| {
                t.iter()
                    .enumerate()
                    .map(|(i, e)| res.entry(e, || format!("modals.{name}[{i}]")))
                    .collect()
            })
            .collect::<Result<Vec<Vec<Elem>>>>()?;
        Ok(RawAlgebra {
            tables,
            imp_given,
            labels: self.labels.clone(),
            signature,
            modals,
        })
    }

    /// The validated algebra.
    pub fn build(&self) -> Result<FiniteIModalRirig> {
        self.to_raw()?.build()
    }

    /// Integer tables in nested rows; labels only when not the defaults.
    pub fn from_algebra(a: &FiniteIModalRirig) -> Self {
        let n = a.size();
        let rows = |op: fn(&FiniteRirig, Elem, Elem) -> Elem| {
            Table::Nested(
                (0..n)
                    .map(|x| (0..n).map(|y| Entry::Index(op(a, x, y))).collect())
                    .collect(),
            )
        };
        let defaults = FiniteRirig::new(a.tables().clone()).expect("valid tables");
        AlgebraFile {
            size: n,
            zero: Entry::Index(a.zero()),
            one: Entry::Index(a.one()),
            join: rows(FiniteRirig::join),
            prod: rows(FiniteRirig::prod),
            imp: Some(rows(FiniteRirig::imp)),
            modals: a
                .signature()
                .names()
                .iter()
                .zip(a.modal_tables())
                .map(|(name, t)| (name.clone(), t.iter().map(|&x| Entry::Index(x)).collect()))
                .collect(),
            labels: (a.labels() != defaults.labels()).then(|| a.labels().to_vec()),
        }
    }
}

impl RawAlgebra {
    pub fn base(&self) -> Result<FiniteRirig> {
        let base = FiniteRirig::new(self.tables.clone())?;
        match &self.labels {
            Some(ls) => base.with_labels(ls.clone()),
            None => Ok(base),
        }
    }

    pub fn build(&self) -> Result<FiniteIModalRirig> {
        FiniteIModalRirig::new(self.base()?, self.signature.clone(), self.modals.clone())
    }
}

fn json_error(e: serde_path_to_error::Error<serde_json::Error>) -> Error {
    let path = e.path().to_string();
    let inner = e.into_inner();
    if inner.is_data() {
        Error::Input {
            path,
            message: inner.to_string(),
        }
    } else {
        Error::Parse {
            line: inner.line(),
            column: inner.column(),
            message: inner.to_string(),
        }
    }
}

/// Deserializes JSON with field-path diagnostics.
pub fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(json_error)?;
    de.end().map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Ok(value)
}

pub fn parse_algebra_file(text: &str) -> Result<AlgebraFile> {
    from_json(text)
}

pub fn parse_algebra(text: &str) -> Result<FiniteIModalRirig> {
    parse_algebra_file(text)?.build()
}

pub fn read_algebra(path: &std::path::Path) -> Result<FiniteIModalRirig> {
    let text = read_text(path)?;
    parse_algebra(&text).map_err(|e| with_path(path, e))
}

pub fn read_text(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn with_path(path: &std::path::Path, e: Error) -> Error {
    match e {
        Error::Parse { line, column, message } => Error::Parse {
            line,
            column,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    }
}

pub fn algebra_to_json(a: &FiniteIModalRirig) -> String {
    serde_json::to_string_pretty(&AlgebraFile::from_algebra(a)).expect("serializable")
}

/// `{"arity": k, "table": [...]}` with the table indexed by argument tuples
/// in lexicographic order.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionFile {
    pub arity: usize,
    pub table: Vec<Entry>,
}

pub fn parse_function(text: &str, a: &FiniteIModalRirig) -> Result<FiniteFunction> {
    let file: FunctionFile = from_json(text)?;
    let res = Resolver {
        labels: Some(a.labels()),
    };
    let table = file
        .table
        .iter()
        .enumerate()
        .map(|(i, e)| res.entry(e, || format!("table[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    FiniteFunction::new(a.size(), file.arity, table)
}

pub fn function_to_json(f: &FiniteFunction) -> String {
    serde_json::to_string(&FunctionFile {
        arity: f.arity(),
        table: f.table().iter().map(|&x| Entry::Index(x)).collect(),
    })
    .expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const G3_DELTA: &str = r#"{
        "size": 3, "zero": "0", "one": "1",
        "join": [[0,1,2],[1,1,2],[2,2,2]],
        "prod": [["0","0","0"],["0","a","a"],["0","a","1"]],
        "modals": {"m1": [0,0,2]},
        "labels": ["0","a","1"]
    }"#;

    #[test]
    fn parses_fixture_with_labels_and_synthesized_imp() {
        let a = parse_algebra(G3_DELTA).unwrap();
        assert_eq!(a, fixtures::g3_delta());
        let raw = parse_algebra_file(G3_DELTA).unwrap().to_raw().unwrap();
        assert!(!raw.imp_given);
    }

    #[test]
    fn round_trip() {
        for a in [fixtures::g3_delta(), fixtures::l3_top(), fixtures::g3_two_modals(), fixtures::b2_squared_id()] {
            assert_eq!(parse_algebra(&algebra_to_json(&a)).unwrap(), a);
        }
    }

    #[test]
    fn flat_tables_accepted() {
        let text = r#"{"size":2,"zero":0,"one":1,"join":[0,1,1,1],"prod":[0,0,0,1]}"#;
        assert_eq!(parse_algebra(text).unwrap(), fixtures::bare_b2());
    }

    #[test]
    fn diagnostics() {
        let e = parse_algebra(r#"{"size":2,"zero":0,"one":1,"join":[0,1,1,1],"prod":[0,0,0,7]}"#).unwrap_err();
        assert!(matches!(e, Error::EntryOutOfRange { ref table, position: 3, value: 7, .. } if table == "prod"));
        let e = parse_algebra(r#"{"size":2,"zero":0,"one":1,"join":[[0,1],[1]],"prod":[0,0,0,1]}"#).unwrap_err();
        assert!(matches!(e, Error::Input { ref path, .. } if path == "join[1]"), "{e}");
        let e = parse_algebra(r#"{"size":2,"zero":0,"one":1,"join":[0,1,1,1],"prod":[0,0,0,1],"extra":1}"#).unwrap_err();
        assert!(matches!(e, Error::Input { .. }), "{e}");
        let e = parse_algebra("{\"size\": 2,\n  \"zero\": }").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
        let e = parse_algebra(r#"{"size":"two"}"#).unwrap_err();
        assert!(matches!(e, Error::Input { ref path, .. } if path == "size"), "{e}");
        let e = parse_algebra(r#"{"size":2,"zero":0,"one":1,"join":[0,1,1,1],"prod":[0,0,0,1],"modals":{"m1":[0,0]}}"#)
            .unwrap_err();
        assert!(matches!(e, Error::AxiomsViolated(_)), "{e}");
        let e = parse_algebra(r#"{"size":2,"zero":"z","one":1,"join":[0,1,1,1],"prod":[0,0,0,1]}"#).unwrap_err();
        assert!(matches!(e, Error::Input { ref path, .. } if path == "zero"), "{e}");
    }

    #[test]
    fn function_files() {
        let a = fixtures::g3_delta();
        let f = parse_function(r#"{"arity":1,"table":["1","a",0]}"#, &a).unwrap();
        assert_eq!(f.table(), &[2, 1, 0]);
        assert_eq!(parse_function(&function_to_json(&f), &a).unwrap(), f);
        assert!(parse_function(r#"{"arity":2,"table":[0,1,2]}"#, &a).is_err());
    }
}
