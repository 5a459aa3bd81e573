//! Plain-text formats for lattices, capacities, function tables and
//! polynomials, and a [`Workspace`] registry of parsed objects.
//!
//! All formats are line-oriented and whitespace-separated; `#` starts a
//! comment. Element tokens are 0-based indices or element labels.
//!
//! ```text
//! lattice c3
//! elements 3
//! cover 0 1
//! cover 1 2
//! label 2 top
//! ```
//!
//! ```text
//! capacity m
//! n 2
//! m {} 0
//! m {1} 1
//! m {2} 1
//! m {1,2} 2
//! ```
//!
//! ```text
//! function proj
//! n 1
//! f 0 -> 0
//! f 1 -> 1
//! f 2 -> 2
//! ```
//!
//! Polynomials are a single S-expression such as
//! `(join (meet (const 1) (var 0)) (var 1))`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::compat::{table_len, FunctionTable};
use crate::lattice::{ElementId, Lattice};
use crate::polynomial::{Polynomial, PolynomialError};
use crate::sugeno::{fmt_mask, Capacity};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("{msg}")]
    Validation { msg: String },
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        msg: msg.into(),
    }
}

fn invalid(msg: impl Into<String>) -> FormatError {
    FormatError::Validation { msg: msg.into() }
}

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((i + 1, body))
    })
}

fn split_keyword(body: &str) -> (&str, &str) {
    match body.split_once(char::is_whitespace) {
        Some((k, rest)) => (k, rest.trim()),
        None => (body, ""),
    }
}

fn parse_usize(line: usize, tok: &str, what: &str) -> Result<usize, FormatError> {
    tok.parse()
        .map_err(|_| syntax(line, format!("expected {what}, found `{tok}`")))
}

fn header<'a>(
    line: usize,
    slot: &mut Option<&'a str>,
    keyword: &str,
    rest: &'a str,
    seen_any: bool,
) -> Result<(), FormatError> {
    if seen_any {
        return Err(syntax(
            line,
            format!("`{keyword}` must be the first directive"),
        ));
    }
    if rest.is_empty() {
        return Err(syntax(line, format!("`{keyword}` needs a name")));
    }
    *slot = Some(rest);
    Ok(())
}

fn set_once(
    line: usize,
    slot: &mut Option<usize>,
    value: usize,
    keyword: &str,
) -> Result<(), FormatError> {
    if slot.replace(value).is_some() {
        return Err(syntax(line, format!("duplicate `{keyword}`")));
    }
    Ok(())
}

fn element(lattice: &Lattice, line: usize, tok: &str) -> Result<ElementId, FormatError> {
    lattice.resolve(tok).ok_or_else(|| {
        syntax(
            line,
            format!("`{tok}` is not an element of `{}`", lattice.name()),
        )
    })
}

/// Which kind of object a text holds, from its leading keyword.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Kind {
    Lattice,
    Capacity,
    Function,
    Polynomial,
}

impl Kind {
    pub fn detect(text: &str) -> Result<Kind, FormatError> {
        let (line, body) = lines(text).next().ok_or_else(|| invalid("empty input"))?;
        if body.starts_with('(') {
            return Ok(Kind::Polynomial);
        }
        match split_keyword(body).0 {
            "lattice" => Ok(Kind::Lattice),
            "capacity" => Ok(Kind::Capacity),
            "function" => Ok(Kind::Function),
            other => Err(syntax(line, format!("unknown object kind `{other}`"))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Lattice => "lattice",
            Kind::Capacity => "capacity",
            Kind::Function => "function",
            Kind::Polynomial => "polynomial",
        }
    }
}

pub fn parse_lattice(text: &str) -> Result<Lattice, FormatError> {
    let mut name = None;
    let mut size = None;
    let mut covers = Vec::new();
    let mut labels: Vec<(usize, usize, String)> = Vec::new();
    let mut seen_any = false;
    for (line, body) in lines(text) {
        let (keyword, rest) = split_keyword(body);
        let args: Vec<&str> = rest.split_whitespace().collect();
        match keyword {
            "lattice" => header(line, &mut name, keyword, rest, seen_any)?,
            _ if name.is_none() => return Err(syntax(line, "expected `lattice <name>`")),
            "elements" => {
                let [k] = args[..] else {
                    return Err(syntax(line, "expected `elements <k>`"));
                };
                set_once(
                    line,
                    &mut size,
                    parse_usize(line, k, "element count")?,
                    keyword,
                )?;
            }
            "cover" => {
                let [i, j] = args[..] else {
                    return Err(syntax(line, "expected `cover <i> <j>`"));
                };
                covers.push((
                    line,
                    parse_usize(line, i, "index")?,
                    parse_usize(line, j, "index")?,
                ));
            }
            "label" => {
                let Some((i, text)) = rest.split_once(char::is_whitespace) else {
                    return Err(syntax(line, "expected `label <i> <text>`"));
                };
                labels.push((
                    line,
                    parse_usize(line, i, "index")?,
                    text.trim().to_string(),
                ));
            }
            other => return Err(syntax(line, format!("unknown directive `{other}`"))),
        }
        seen_any = true;
    }
    let name = name.ok_or_else(|| invalid("missing `lattice <name>`"))?;
    let size = size.ok_or_else(|| invalid("missing `elements <k>`"))?;
    for &(line, i, j) in &covers {
        if i >= size || j >= size {
            return Err(syntax(line, format!("cover ({i}, {j}) outside 0..{size}")));
        }
    }
    let pairs: Vec<(usize, usize)> = covers.iter().map(|&(_, i, j)| (i, j)).collect();
    let mut lattice =
        Lattice::from_covers(name, size, &pairs).map_err(|e| invalid(e.to_string()))?;
    for (k, (line, i, text)) in labels.iter().enumerate() {
        if labels[..k].iter().any(|(_, _, t)| t == text) {
            return Err(syntax(*line, format!("duplicate label `{text}`")));
        }
        lattice
            .set_label(*i, text.clone())
            .map_err(|e| syntax(*line, e.to_string()))?;
    }
    Ok(lattice)
}

/// Serializes a lattice; `comments` are emitted as `#` lines after the header.
pub fn write_lattice(lattice: &Lattice, comments: &[String]) -> String {
    let mut out = String::new();
    writeln!(out, "lattice {}", lattice.name()).unwrap();
    for c in comments {
        writeln!(out, "# {c}").unwrap();
    }
    writeln!(out, "elements {}", lattice.size()).unwrap();
    for (a, b) in lattice.covers() {
        writeln!(out, "cover {a} {b}").unwrap();
    }
    for e in lattice.elements() {
        if let Some(l) = lattice.label(e) {
            writeln!(out, "label {e} {l}").unwrap();
        }
    }
    out
}

fn parse_subset(line: usize, text: &str, arity: usize) -> Result<(usize, &str), FormatError> {
    let open = text
        .strip_prefix('{')
        .ok_or_else(|| syntax(line, "expected a subset like `{1,3}`"))?;
    let (inner, rest) = open
        .split_once('}')
        .ok_or_else(|| syntax(line, "unterminated subset"))?;
    let mut mask = 0usize;
    for tok in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let i = parse_usize(line, tok, "criterion index")?;
        if i == 0 || i > arity {
            return Err(syntax(line, format!("criterion {i} outside 1..={arity}")));
        }
        if mask & 1 << (i - 1) != 0 {
            return Err(syntax(line, format!("criterion {i} repeated")));
        }
        mask |= 1 << (i - 1);
    }
    Ok((mask, rest.trim()))
}

/// Parses a capacity against `lattice`. All `2^n` subsets must be listed.
pub fn parse_capacity(text: &str, lattice: &Lattice) -> Result<(String, Capacity), FormatError> {
    let mut name = None;
    let mut arity = None;
    let mut values: Vec<Option<ElementId>> = Vec::new();
    let mut seen_any = false;
    for (line, body) in lines(text) {
        let (keyword, rest) = split_keyword(body);
        match keyword {
            "capacity" => header(line, &mut name, keyword, rest, seen_any)?,
            _ if name.is_none() => return Err(syntax(line, "expected `capacity <name>`")),
            "n" => {
                let n = parse_usize(line, rest, "arity")?;
                if n > 16 {
                    return Err(syntax(line, format!("arity {n} too large")));
                }
                set_once(line, &mut arity, n, keyword)?;
                values = vec![None; 1 << n];
            }
            "m" => {
                let n = arity.ok_or_else(|| syntax(line, "`n <arity>` must precede `m` lines"))?;
                let (mask, tok) = parse_subset(line, rest, n)?;
                if tok.is_empty() || tok.contains(char::is_whitespace) {
                    return Err(syntax(line, "expected `m {subset} <element>`"));
                }
                let v = element(lattice, line, tok)?;
                if values[mask].replace(v).is_some() {
                    return Err(syntax(line, format!("m({}) given twice", fmt_mask(mask))));
                }
            }
            other => return Err(syntax(line, format!("unknown directive `{other}`"))),
        }
        seen_any = true;
    }
    let name = name.ok_or_else(|| invalid("missing `capacity <name>`"))?;
    let n = arity.ok_or_else(|| invalid("missing `n <arity>`"))?;
    let missing: Vec<String> = (0..values.len())
        .filter(|&m| values[m].is_none())
        .map(fmt_mask)
        .collect();
    if !missing.is_empty() {
        return Err(invalid(format!(
            "incomplete capacity: missing {}",
            missing.join(" ")
        )));
    }
    let capacity = Capacity::new(lattice, n, values.into_iter().flatten().collect())
        .map_err(|e| invalid(e.to_string()))?;
    Ok((name.to_string(), capacity))
}

pub fn write_capacity(name: &str, m: &Capacity) -> String {
    let mut out = String::new();
    writeln!(out, "capacity {name}").unwrap();
    writeln!(out, "n {}", m.arity()).unwrap();
    for (mask, v) in m.values().iter().enumerate() {
        writeln!(out, "m {} {v}", fmt_mask(mask)).unwrap();
    }
    out
}

/// Parses a function table against `lattice`. All `size^n` inputs must be listed.
pub fn parse_function(
    text: &str,
    lattice: &Lattice,
) -> Result<(String, FunctionTable), FormatError> {
    let mut name = None;
    let mut arity = None;
    let mut values: Vec<Option<ElementId>> = Vec::new();
    let mut seen_any = false;
    for (line, body) in lines(text) {
        let (keyword, rest) = split_keyword(body);
        match keyword {
            "function" => header(line, &mut name, keyword, rest, seen_any)?,
            _ if name.is_none() => return Err(syntax(line, "expected `function <name>`")),
            "n" => {
                let n = parse_usize(line, rest, "arity")?;
                let len = table_len(lattice.size(), n).map_err(|e| syntax(line, e.to_string()))?;
                set_once(line, &mut arity, n, keyword)?;
                values = vec![None; len];
            }
            "f" => {
                let n = arity.ok_or_else(|| syntax(line, "`n <arity>` must precede `f` lines"))?;
                let (inputs, output) = rest
                    .split_once("->")
                    .ok_or_else(|| syntax(line, "expected `f <x1> … <xn> -> <value>`"))?;
                let x = inputs
                    .split_whitespace()
                    .map(|t| element(lattice, line, t))
                    .collect::<Result<Vec<_>, _>>()?;
                if x.len() != n {
                    return Err(syntax(
                        line,
                        format!("expected {n} inputs, found {}", x.len()),
                    ));
                }
                let out = output.trim();
                if out.is_empty() || out.contains(char::is_whitespace) {
                    return Err(syntax(line, "expected a single output element"));
                }
                let v = element(lattice, line, out)?;
                let idx = x.iter().fold(0, |acc, e| acc * lattice.size() + e.index());
                if values[idx].replace(v).is_some() {
                    return Err(syntax(line, "input listed twice"));
                }
            }
            other => return Err(syntax(line, format!("unknown directive `{other}`"))),
        }
        seen_any = true;
    }
    let name = name.ok_or_else(|| invalid("missing `function <name>`"))?;
    let n = arity.ok_or_else(|| invalid("missing `n <arity>`"))?;
    let missing = values.iter().filter(|v| v.is_none()).count();
    if missing > 0 {
        return Err(invalid(format!(
            "incomplete function table: {missing} input(s) missing"
        )));
    }
    let table = FunctionTable::new(lattice, n, values.into_iter().flatten().collect())
        .map_err(|e| invalid(e.to_string()))?;
    Ok((name.to_string(), table))
}

pub fn write_function(name: &str, f: &FunctionTable) -> String {
    let mut out = String::new();
    writeln!(out, "function {name}").unwrap();
    writeln!(out, "n {}", f.arity()).unwrap();
    f.for_each_input(|idx, x| {
        out.push('f');
        for e in x {
            write!(out, " {e}").unwrap();
        }
        writeln!(out, " -> {}", f.value_at(idx)).unwrap();
    });
    out
}

/// Parses a polynomial; `#` comments are allowed. `arity` overrides the
/// arity inferred from the highest variable index.
pub fn parse_polynomial(text: &str, arity: Option<usize>) -> Result<Polynomial, FormatError> {
    let body: String = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join("\n");
    let p = Polynomial::parse(&body).map_err(|e| match e {
        PolynomialError::Syntax { pos, msg } => {
            let line = body[..pos.min(body.len())].matches('\n').count() + 1;
            syntax(line, msg)
        }
        other => invalid(other.to_string()),
    })?;
    match arity {
        Some(n) => Polynomial::new(n, p.root().clone()).map_err(|e| invalid(e.to_string())),
        None => Ok(p),
    }
}

pub fn write_polynomial(p: &Polynomial) -> String {
    format!("{p}\n")
}

/// Pretty-printed JSON for any report type, with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
}

#[derive(Debug, Error)]
pub enum WorkspaceError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{source_name}: {error}")]
    Format {
        source_name: String,
        error: FormatError,
    },
    #[error("a {kind} named `{name}` is already registered")]
    DuplicateName { kind: &'static str, name: String },
    #[error("a {0} needs a lattice, but none is registered")]
    NoLattice(&'static str),
    #[error("{0} lattices are registered; name the one to use")]
    AmbiguousLattice(usize),
    #[error("no lattice named `{0}`")]
    UnknownLattice(String),
}

#[derive(Clone, Debug)]
pub struct Entry<T> {
    pub value: T,
    /// Where the object was read from.
    pub source: String,
    /// Lattice the object was resolved against, if any.
    pub lattice: Option<String>,
}

/// Parsed objects by kind and name. Every registered object passed its
/// validation.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    lattices: BTreeMap<String, Entry<Lattice>>,
    capacities: BTreeMap<String, Entry<Capacity>>,
    functions: BTreeMap<String, Entry<FunctionTable>>,
    polynomials: BTreeMap<String, Entry<Polynomial>>,
}

fn insert<T>(
    map: &mut BTreeMap<String, Entry<T>>,
    kind: &'static str,
    name: String,
    entry: Entry<T>,
) -> Result<String, WorkspaceError> {
    if map.contains_key(&name) {
        return Err(WorkspaceError::DuplicateName { kind, name });
    }
    map.insert(name.clone(), entry);
    Ok(name)
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    fn pick_lattice(
        &self,
        kind: &'static str,
        lattice: Option<&str>,
    ) -> Result<&Entry<Lattice>, WorkspaceError> {
        match lattice {
            Some(n) => self
                .lattices
                .get(n)
                .ok_or_else(|| WorkspaceError::UnknownLattice(n.to_string())),
            None => match self.lattices.len() {
                0 => Err(WorkspaceError::NoLattice(kind)),
                1 => Ok(self.lattices.values().next().expect("one entry")),
                k => Err(WorkspaceError::AmbiguousLattice(k)),
            },
        }
    }

    /// Parses `text`, inferring its kind, and registers it.
    ///
    /// Capacities and function tables are resolved against `lattice`, or the
    /// only registered lattice when `None`. Polynomials are named after
    /// `source`.
    pub fn add_text(
        &mut self,
        text: &str,
        source: &str,
        lattice: Option<&str>,
    ) -> Result<(Kind, String), WorkspaceError> {
        let wrap = |error| WorkspaceError::Format {
            source_name: source.to_string(),
            error,
        };
        let kind = Kind::detect(text).map_err(wrap)?;
        let name = match kind {
            Kind::Lattice => {
                let l = parse_lattice(text).map_err(wrap)?;
                let name = l.name().to_string();
                let entry = Entry {
                    value: l,
                    source: source.to_string(),
                    lattice: None,
                };
                insert(&mut self.lattices, "lattice", name, entry)?
            }
            Kind::Capacity => {
                let base = self.pick_lattice("capacity", lattice)?;
                let (name, m) = parse_capacity(text, &base.value).map_err(wrap)?;
                let entry = Entry {
                    value: m,
                    source: source.to_string(),
                    lattice: Some(base.value.name().to_string()),
                };
                insert(&mut self.capacities, "capacity", name, entry)?
            }
            Kind::Function => {
                let base = self.pick_lattice("function", lattice)?;
                let (name, f) = parse_function(text, &base.value).map_err(wrap)?;
                let entry = Entry {
                    value: f,
                    source: source.to_string(),
                    lattice: Some(base.value.name().to_string()),
                };
                insert(&mut self.functions, "function", name, entry)?
            }
            Kind::Polynomial => {
                let p = parse_polynomial(text, None).map_err(wrap)?;
                let name = Path::new(source)
                    .file_stem()
                    .map_or_else(|| source.to_string(), |s| s.to_string_lossy().into_owned());
                let entry = Entry {
                    value: p,
                    source: source.to_string(),
                    lattice: None,
                };
                insert(&mut self.polynomials, "polynomial", name, entry)?
            }
        };
        Ok((kind, name))
    }

    pub fn add_file(
        &mut self,
        path: impl AsRef<Path>,
        lattice: Option<&str>,
    ) -> Result<(Kind, String), WorkspaceError> {
        let path = path.as_ref();
        let shown = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| WorkspaceError::Io {
            path: shown.clone(),
            source,
        })?;
        self.add_text(&text, &shown, lattice)
    }

    pub fn lattice(&self, name: &str) -> Option<&Entry<Lattice>> {
        self.lattices.get(name)
    }

    pub fn capacity(&self, name: &str) -> Option<&Entry<Capacity>> {
        self.capacities.get(name)
    }

    pub fn function(&self, name: &str) -> Option<&Entry<FunctionTable>> {
        self.functions.get(name)
    }

    pub fn polynomial(&self, name: &str) -> Option<&Entry<Polynomial>> {
        self.polynomials.get(name)
    }

    pub fn lattice_names(&self) -> impl Iterator<Item = &str> {
        self.lattices.keys().map(String::as_str)
    }
}
