//! Finite residuated integral rigs given by operation tables.
//!
//! Elements are dense indices `0..n`. The constants `0` and `1` are stored
//! indices and need not be the first and last element.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of a finite algebra, as an index into its universe.
pub type Elem = usize;

/// Largest universe supported; subsets are stored as 64-bit masks.
pub const MAX_SIZE: usize = 64;

/// Raw operation tables, not yet checked against the ririg axioms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RirigTables {
    pub size: usize,
    pub zero: Elem,
    pub one: Elem,
    /// Row-major `size × size`.
    pub join: Vec<Elem>,
    pub prod: Vec<Elem>,
    pub imp: Vec<Elem>,
}

/// One violated axiom together with the lexicographically first failing tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomFailure {
    pub axiom: String,
    pub witness: Vec<Elem>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub passed: bool,
    pub failures: Vec<AxiomFailure>,
}

impl AxiomReport {
    pub(crate) fn from_failures(failures: Vec<AxiomFailure>) -> Self {
        AxiomReport {
            passed: failures.is_empty(),
            failures,
        }
    }

    pub fn failure(&self, axiom: &str) -> Option<&AxiomFailure> {
        self.failures.iter().find(|f| f.axiom == axiom)
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed {
            return write!(f, "ok");
        }
        for (i, fail) in self.failures.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{} at {:?}", fail.axiom, fail.witness)?;
        }
        Ok(())
    }
}

fn check_table(name: &str, table: &[Elem], size: usize, expected: usize) -> Result<()> {
    if table.len() != expected {
        return Err(Error::BadShape {
            table: name.to_string(),
            expected,
            found: table.len(),
        });
    }
    if let Some((position, &value)) = table.iter().enumerate().find(|(_, &v)| v >= size) {
        return Err(Error::EntryOutOfRange {
            table: name.to_string(),
            position,
            value,
            size,
        });
    }
    Ok(())
}

fn check_constant(name: &str, value: Elem, size: usize) -> Result<()> {
    if value >= size {
        return Err(Error::EntryOutOfRange {
            table: name.to_string(),
            position: 0,
            value,
            size,
        });
    }
    Ok(())
}

impl RirigTables {
    pub fn check_shape(&self) -> Result<()> {
        let n = self.size;
        if n == 0 || n > MAX_SIZE {
            return Err(Error::UnsupportedSize(n));
        }
        check_constant("zero", self.zero, n)?;
        check_constant("one", self.one, n)?;
        check_table("join", &self.join, n, n * n)?;
        check_table("prod", &self.prod, n, n * n)?;
        check_table("imp", &self.imp, n, n * n)?;
        Ok(())
    }
}

/// Scans `0..n` tuples of the given arity in lexicographic order and returns
/// the first one on which `holds` is false.
pub(crate) fn first_failure(
    n: usize,
    arity: usize,
    mut holds: impl FnMut(&[Elem]) -> bool,
) -> Option<Vec<Elem>> {
    let mut tuple = vec![0; arity];
    loop {
        if !holds(&tuple) {
            return Some(tuple);
        }
        let mut i = arity;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            tuple[i] += 1;
            if tuple[i] < n {
                break;
            }
            tuple[i] = 0;
        }
    }
}

/// Checks every ririg axiom on candidate tables.
///
/// Each violated axiom is listed once, with the lexicographically first
/// witness tuple. A shape error is returned when a table is malformed.
pub fn validate_ririg(t: &RirigTables) -> Result<AxiomReport> {
    t.check_shape()?;
    let n = t.size;
    let join = |a: Elem, b: Elem| t.join[a * n + b];
    let prod = |a: Elem, b: Elem| t.prod[a * n + b];
    let imp = |a: Elem, b: Elem| t.imp[a * n + b];
    let leq = |a: Elem, b: Elem| join(a, b) == b;
    let (zero, one) = (t.zero, t.one);

    type Law<'a> = (&'static str, usize, Box<dyn Fn(&[Elem]) -> bool + 'a>);
    let laws: Vec<Law> = vec![
        ("join-commutative", 2, Box::new(|x| join(x[0], x[1]) == join(x[1], x[0]))),
        (
            "join-associative",
            3,
            Box::new(|x| join(join(x[0], x[1]), x[2]) == join(x[0], join(x[1], x[2]))),
        ),
        ("join-unit", 1, Box::new(|x| join(zero, x[0]) == x[0])),
        ("prod-commutative", 2, Box::new(|x| prod(x[0], x[1]) == prod(x[1], x[0]))),
        (
            "prod-associative",
            3,
            Box::new(|x| prod(prod(x[0], x[1]), x[2]) == prod(x[0], prod(x[1], x[2]))),
        ),
        ("prod-unit", 1, Box::new(|x| prod(one, x[0]) == x[0])),
        (
            "distributive",
            3,
            Box::new(|x| prod(x[0], join(x[1], x[2])) == join(prod(x[0], x[1]), prod(x[0], x[2]))),
        ),
        ("annihilation", 1, Box::new(|x| prod(x[0], zero) == zero)),
        ("integrality", 1, Box::new(|x| join(one, x[0]) == one)),
        (
            "residuation",
            3,
            Box::new(|x| leq(prod(x[0], x[1]), x[2]) == leq(x[0], imp(x[1], x[2]))),
        ),
    ];

    let failures = laws
        .iter()
        .filter_map(|(name, arity, law)| {
            first_failure(n, *arity, law).map(|witness| AxiomFailure {
                axiom: name.to_string(),
                witness,
            })
        })
        .collect();
    Ok(AxiomReport::from_failures(failures))
}

/// `max{a : a·b ≤ c}` computed from the join and product tables alone, or
/// `None` when that set has no maximum.
pub fn residual_of(size: usize, join: &[Elem], prod: &[Elem], b: Elem, c: Elem) -> Option<Elem> {
    let leq = |x: Elem, y: Elem| join[x * size + y] == y;
    let below: Vec<Elem> = (0..size).filter(|&a| leq(prod[a * size + b], c)).collect();
    below
        .iter()
        .copied()
        .find(|&top| below.iter().all(|&a| leq(a, top)))
}

/// Builds the implication table by residuation, failing on the first pair
/// `(b, c)` without a residual.
pub fn synthesize_imp(size: usize, join: &[Elem], prod: &[Elem]) -> Result<Vec<Elem>> {
    let mut imp = Vec::with_capacity(size * size);
    for b in 0..size {
        for c in 0..size {
            imp.push(residual_of(size, join, prod, b, c).ok_or(Error::NotResiduated { b, c })?);
        }
    }
    Ok(imp)
}

/// A validated finite ririg.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteRirig {
    tables: RirigTables,
    labels: Vec<String>,
}

impl FiniteRirig {
    pub fn new(tables: RirigTables) -> Result<Self> {
        let report = validate_ririg(&tables)?;
        if !report.passed {
            return Err(Error::AxiomsViolated(report));
        }
        let labels = default_labels(&tables);
        Ok(FiniteRirig { tables, labels })
    }

    /// Builds the algebra from join and product tables, synthesizing `→`.
    pub fn from_join_prod(
        size: usize,
        zero: Elem,
        one: Elem,
        join: Vec<Elem>,
        prod: Vec<Elem>,
    ) -> Result<Self> {
        if size == 0 || size > MAX_SIZE {
            return Err(Error::UnsupportedSize(size));
        }
        check_table("join", &join, size, size * size)?;
        check_table("prod", &prod, size, size * size)?;
        let imp = synthesize_imp(size, &join, &prod)?;
        Self::new(RirigTables {
            size,
            zero,
            one,
            join,
            prod,
            imp,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.size() {
            return Err(Error::BadShape {
                table: "labels".into(),
                expected: self.size(),
                found: labels.len(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.tables.size
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        self.tables.zero
    }

    #[inline]
    pub fn one(&self) -> Elem {
        self.tables.one
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.tables.size
    }

    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.tables.join[a * self.tables.size + b]
    }

    #[inline]
    pub fn prod(&self, a: Elem, b: Elem) -> Elem {
        self.tables.prod[a * self.tables.size + b]
    }

    #[inline]
    pub fn imp(&self, a: Elem, b: Elem) -> Elem {
        self.tables.imp[a * self.tables.size + b]
    }

    /// `a ≤ b` iff `a ∨ b = b`.
    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.join(a, b) == b
    }

    /// `(a → b)·(b → a)`.
    #[inline]
    pub fn star(&self, a: Elem, b: Elem) -> Elem {
        self.prod(self.imp(a, b), self.imp(b, a))
    }

    /// `a^p`, with `a^0 = 1`.
    pub fn power(&self, a: Elem, p: usize) -> Elem {
        (0..p).fold(self.one(), |acc, _| self.prod(acc, a))
    }

    pub fn product_of(&self, items: impl IntoIterator<Item = Elem>) -> Elem {
        items.into_iter().fold(self.one(), |acc, x| self.prod(acc, x))
    }

    pub fn join_of(&self, items: impl IntoIterator<Item = Elem>) -> Elem {
        items.into_iter().fold(self.zero(), |acc, x| self.join(acc, x))
    }

    pub fn residual_of(&self, b: Elem, c: Elem) -> Option<Elem> {
        residual_of(self.size(), &self.tables.join, &self.tables.prod, b, c)
    }

    pub fn tables(&self) -> &RirigTables {
        &self.tables
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: Elem) -> &str {
        &self.labels[a]
    }

    /// Looks an element up by label, falling back to a decimal index.
    pub fn parse_elem(&self, text: &str) -> Result<Elem> {
        let text = text.trim();
        if let Some(i) = self.labels.iter().position(|l| l == text) {
            return Ok(i);
        }
        match text.parse::<usize>() {
            Ok(i) if i < self.size() => Ok(i),
            _ => Err(Error::InvalidArgument(format!("unknown element `{text}`"))),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.size() == 1
    }

    /// Direct product; the pair `(i, j)` is encoded as `i * other.size() + j`.
    pub fn product(&self, other: &FiniteRirig) -> Result<FiniteRirig> {
        let (n, m) = (self.size(), other.size());
        let size = n * m;
        if size > MAX_SIZE {
            return Err(Error::UnsupportedSize(size));
        }
        let pair = |i: Elem, j: Elem| i * m + j;
        let table = |f: &dyn Fn(Elem, Elem) -> Elem, g: &dyn Fn(Elem, Elem) -> Elem| {
            let mut out = Vec::with_capacity(size * size);
            for x in 0..size {
                for y in 0..size {
                    out.push(pair(f(x / m, y / m), g(x % m, y % m)));
                }
            }
            out
        };
        let tables = RirigTables {
            size,
            zero: pair(self.zero(), other.zero()),
            one: pair(self.one(), other.one()),
            join: table(&|a, b| self.join(a, b), &|a, b| other.join(a, b)),
            prod: table(&|a, b| self.prod(a, b), &|a, b| other.prod(a, b)),
            imp: table(&|a, b| self.imp(a, b), &|a, b| other.imp(a, b)),
        };
        let labels = (0..size)
            .map(|x| format!("({},{})", self.label(x / m), other.label(x % m)))
            .collect();
        FiniteRirig::new(tables)?.with_labels(labels)
    }
}

fn default_labels(t: &RirigTables) -> Vec<String> {
    (0..t.size)
        .map(|i| {
            if i == t.one {
                "1".to_string()
            } else if i == t.zero {
                "0".to_string()
            } else {
                format!("e{i}")
            }
        })
        .collect()
}
