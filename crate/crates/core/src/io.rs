//! Line-oriented text format for lattices, based complexes and chain maps.
//!
//! ```text
//! # comment
//! [group]
//! rank = 1
//! phi = 1
//! c1 = 0
//! grading = z            # z2 | z | mod <2N>; derived from c1 when absent
//!
//! [complex two_term]
//! [module 1]
//! x1
//! [module 2]
//! x0
//! [differential]
//! x1 -> x0: 1 - 1*g(1)
//!
//! [map f]
//! source = two_term
//! target = two_term
//! x1 -> x1: 1
//! ```
//!
//! [`render`] writes the normal form: comments and blank-line noise
//! removed, `key = value` spacing fixed, literals in canonical order,
//! degrees reduced, one `[module]` block per run of equal degrees, entries
//! sorted by source then target generator, exact zero entries dropped.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};
use std::sync::Arc;

use num_rational::BigRational;
use thiserror::Error;

use crate::lattice::Lattice;
use crate::linalg::Matrix;
use crate::series::{parse_rational, NovikovElement, SeriesError};
use crate::torsion::{BasedComplex, ChainMap, Generator, Grading};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("undeclared generator '{0}'")]
    UndeclaredGenerator(String),
    #[error("duplicate generator '{0}'")]
    DuplicateGenerator(String),
    #[error("duplicate entry {0} -> {1}")]
    DuplicateEntry(String, String),
    #[error("undeclared complex '{0}'")]
    UndeclaredComplex(String),
    #[error("duplicate name '{0}'")]
    DuplicateName(String),
    #[error("invalid literal: {0}")]
    Literal(String),
    #[error("{0}")]
    Structure(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedComplex {
    pub name: String,
    pub complex: Arc<BasedComplex>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedMap {
    pub name: String,
    pub source: String,
    pub target: String,
    pub map: ChainMap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub lattice: Arc<Lattice>,
    pub grading: Grading,
    pub complexes: Vec<NamedComplex>,
    pub maps: Vec<NamedMap>,
}

impl Document {
    pub fn complex(&self, name: &str) -> Option<&Arc<BasedComplex>> {
        self.complexes.iter().find(|c| c.name == name).map(|c| &c.complex)
    }

    pub fn map(&self, name: &str) -> Option<&NamedMap> {
        self.maps.iter().find(|m| m.name == name)
    }
}

fn is_name(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.' || c == '\'')
}

#[derive(Clone, Copy)]
struct Line<'a> {
    number: usize,
    /// Content with comment stripped, untrimmed.
    text: &'a str,
}

impl<'a> Line<'a> {
    fn err(&self, at: &str, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.number,
            column: self.column_of(at),
            kind,
        }
    }

    /// 1-based character column of the subslice `at` of this line.
    fn column_of(&self, at: &str) -> usize {
        let base = self.text.as_ptr() as usize;
        let p = at.as_ptr() as usize;
        let offset = if p >= base && p <= base + self.text.len() {
            p - base
        } else {
            0
        };
        self.text[..offset].chars().count() + 1
    }

    fn trimmed(&self) -> &'a str {
        self.text.trim()
    }
}

#[derive(Default)]
struct GroupSpec {
    rank: Option<usize>,
    phi: Option<Vec<BigRational>>,
    c1: Option<Vec<i64>>,
    grading: Option<Grading>,
}

struct PendingEntry<'a> {
    line: Line<'a>,
    source: &'a str,
    target: &'a str,
    literal: &'a str,
}

struct PendingComplex<'a> {
    name: String,
    header: Line<'a>,
    modules: Vec<(i64, Line<'a>, &'a str)>,
    entries: Vec<PendingEntry<'a>>,
}

struct PendingMap<'a> {
    name: String,
    header: Line<'a>,
    source: Option<(Line<'a>, &'a str)>,
    target: Option<(Line<'a>, &'a str)>,
    entries: Vec<PendingEntry<'a>>,
}

enum Section {
    None,
    Group,
    Module,
    Differential,
    Map,
}

pub fn parse(text: &str) -> Result<Document, ParseError> {
    let mut group = GroupSpec::default();
    let mut group_line: Option<usize> = None;
    let mut complexes: Vec<PendingComplex> = Vec::new();
    let mut maps: Vec<PendingMap> = Vec::new();
    let mut section = Section::None;
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let content = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let line = Line {
            number: i + 1,
            text: content,
        };
        last_line = i + 1;
        let t = line.trimmed();
        if t.is_empty() {
            continue;
        }
        if let Some(rest) = t.strip_prefix('[') {
            let Some(inner) = rest.strip_suffix(']') else {
                return Err(line.err(t, ParseErrorKind::Syntax("unterminated block header".into())));
            };
            let mut words = inner.split_whitespace();
            let kind = words.next().unwrap_or("");
            let arg = words.next();
            if words.next().is_some() {
                return Err(line.err(t, ParseErrorKind::Syntax("too many words in block header".into())));
            }
            match (kind, arg) {
                ("group", None) => {
                    if group_line.is_some() {
                        return Err(line.err(t, ParseErrorKind::Syntax("second [group] block".into())));
                    }
                    if !complexes.is_empty() || !maps.is_empty() {
                        return Err(line.err(t, ParseErrorKind::Syntax("[group] must come first".into())));
                    }
                    group_line = Some(line.number);
                    section = Section::Group;
                }
                ("complex", Some(name)) | ("map", Some(name)) => {
                    let at = &inner[inner.find(name).unwrap_or(0)..];
                    if !is_name(name) {
                        return Err(line.err(at, ParseErrorKind::Syntax(format!("invalid name '{name}'"))));
                    }
                    if group_line.is_none() {
                        return Err(line.err(t, ParseErrorKind::Syntax("missing [group] block".into())));
                    }
                    if complexes.iter().any(|c| c.name == name) || maps.iter().any(|m| m.name == name) {
                        return Err(line.err(at, ParseErrorKind::DuplicateName(name.into())));
                    }
                    if kind == "complex" {
                        complexes.push(PendingComplex {
                            name: name.into(),
                            header: line,
                            modules: Vec::new(),
                            entries: Vec::new(),
                        });
                        section = Section::None;
                    } else {
                        maps.push(PendingMap {
                            name: name.into(),
                            header: line,
                            source: None,
                            target: None,
                            entries: Vec::new(),
                        });
                        section = Section::Map;
                    }
                }
                ("module", Some(d)) => {
                    let at = &inner[inner.find(d).unwrap_or(0)..];
                    let Some(c) = current_complex(&mut complexes, &section) else {
                        return Err(line.err(t, ParseErrorKind::Syntax("[module] outside a complex".into())));
                    };
                    let degree: i64 = d
                        .parse()
                        .map_err(|_| line.err(at, ParseErrorKind::Syntax(format!("invalid degree '{d}'"))))?;
                    c.modules.push((degree, line, ""));
                    section = Section::Module;
                }
                ("differential", None) => {
                    if current_complex(&mut complexes, &section).is_none() {
                        return Err(line.err(t, ParseErrorKind::Syntax("[differential] outside a complex".into())));
                    }
                    section = Section::Differential;
                }
                _ => {
                    return Err(line.err(t, ParseErrorKind::Syntax(format!("unknown block header [{inner}]"))));
                }
            }
            continue;
        }
        match section {
            Section::None => {
                return Err(line.err(t, ParseErrorKind::Syntax("content outside a block".into())));
            }
            Section::Group => parse_group_line(&line, t, &mut group)?,
            Section::Module => {
                let c = complexes.last_mut().expect("module section belongs to a complex");
                if !is_name(t) {
                    return Err(line.err(t, ParseErrorKind::Syntax(format!("invalid generator name '{t}'"))));
                }
                let degree = c.modules.last().expect("module header seen").0;
                c.modules.push((degree, line, t));
            }
            Section::Differential => {
                let entry = parse_entry(line)?;
                complexes.last_mut().expect("differential belongs to a complex").entries.push(entry);
            }
            Section::Map => {
                let m = maps.last_mut().expect("map section belongs to a map");
                if let Some((key, value)) = t.split_once('=') {
                    let key = key.trim();
                    let value = value.trim();
                    if key == "source" || key == "target" {
                        if !is_name(value) {
                            return Err(line.err(value, ParseErrorKind::Syntax(format!("invalid name '{value}'"))));
                        }
                        let slot = if key == "source" { &mut m.source } else { &mut m.target };
                        if slot.is_some() {
                            return Err(line.err(t, ParseErrorKind::Syntax(format!("repeated key '{key}'"))));
                        }
                        *slot = Some((line, value));
                        continue;
                    }
                    if !t.contains("->") {
                        return Err(line.err(t, ParseErrorKind::Syntax(format!("unknown key '{key}'"))));
                    }
                }
                let entry = parse_entry(line)?;
                m.entries.push(entry);
            }
        }
    }

    let Some(group_at) = group_line else {
        return Err(ParseError {
            line: last_line.max(1),
            column: 1,
            kind: ParseErrorKind::Syntax("missing [group] block".into()),
        });
    };
    let lattice = build_lattice(&group, group_at)?;
    let grading_default = Grading::from_chern(lattice.minimal_chern_number());
    let grading = group.grading.unwrap_or(grading_default);
    let lattice = Arc::new(lattice);

    let mut built: Vec<NamedComplex> = Vec::new();
    for c in complexes {
        built.push(build_complex(&lattice, grading, c)?);
    }
    let mut built_maps = Vec::new();
    for m in maps {
        built_maps.push(build_map(&lattice, &built, m)?);
    }
    Ok(Document {
        lattice,
        grading,
        complexes: built,
        maps: built_maps,
    })
}

fn current_complex<'c, 'a>(
    complexes: &'c mut [PendingComplex<'a>],
    section: &Section,
) -> Option<&'c mut PendingComplex<'a>> {
    if matches!(section, Section::Map | Section::Group) {
        return None;
    }
    complexes.last_mut()
}

fn parse_group_line(line: &Line, t: &str, group: &mut GroupSpec) -> Result<(), ParseError> {
    let Some((key, value)) = t.split_once('=') else {
        return Err(line.err(t, ParseErrorKind::Syntax("expected 'key = value'".into())));
    };
    let key = key.trim();
    let value = value.trim();
    let repeated = || line.err(t, ParseErrorKind::Syntax(format!("repeated key '{key}'")));
    match key {
        "rank" => {
            if group.rank.is_some() {
                return Err(repeated());
            }
            let r: usize = value
                .parse()
                .map_err(|_| line.err(value, ParseErrorKind::Syntax(format!("invalid rank '{value}'"))))?;
            group.rank = Some(r);
        }
        "phi" => {
            if group.phi.is_some() {
                return Err(repeated());
            }
            let mut v = Vec::new();
            for part in split_list(value) {
                let q = parse_rational(part)
                    .ok_or_else(|| line.err(part, ParseErrorKind::Syntax(format!("invalid rational '{}'", part.trim()))))?;
                v.push(q);
            }
            group.phi = Some(v);
        }
        "c1" => {
            if group.c1.is_some() {
                return Err(repeated());
            }
            let mut v = Vec::new();
            for part in split_list(value) {
                let n: i64 = part
                    .trim()
                    .parse()
                    .map_err(|_| line.err(part, ParseErrorKind::Syntax(format!("invalid integer '{}'", part.trim()))))?;
                v.push(n);
            }
            group.c1 = Some(v);
        }
        "grading" => {
            if group.grading.is_some() {
                return Err(repeated());
            }
            group.grading = Some(parse_grading(value).ok_or_else(|| {
                line.err(value, ParseErrorKind::Syntax(format!("invalid grading '{value}'")))
            })?);
        }
        _ => return Err(line.err(t, ParseErrorKind::Syntax(format!("unknown key '{key}'")))),
    }
    Ok(())
}

fn split_list(value: &str) -> Vec<&str> {
    if value.trim().is_empty() {
        return Vec::new();
    }
    value.split(',').collect()
}

pub fn parse_grading(value: &str) -> Option<Grading> {
    let value = value.trim();
    match value {
        "z2" => return Some(Grading::Z2),
        "z" => return Some(Grading::Integer),
        _ => {}
    }
    let m: u32 = value.strip_prefix("mod")?.trim().parse().ok()?;
    let g = Grading::Cyclic(m);
    g.check().ok()?;
    Some(g)
}

pub fn render_grading(g: Grading) -> String {
    match g {
        Grading::Cyclic(2) => "z2".into(),
        Grading::Cyclic(m) => format!("mod {m}"),
        Grading::Integer => "z".into(),
    }
}

fn build_lattice(group: &GroupSpec, line: usize) -> Result<Lattice, ParseError> {
    let err = |msg: String| ParseError {
        line,
        column: 1,
        kind: ParseErrorKind::Structure(msg),
    };
    let rank = group.rank.ok_or_else(|| err("[group] is missing 'rank'".into()))?;
    let phi = group.phi.clone().ok_or_else(|| err("[group] is missing 'phi'".into()))?;
    let c1 = group.c1.clone().ok_or_else(|| err("[group] is missing 'c1'".into()))?;
    if phi.len() != rank || c1.len() != rank {
        return Err(err(format!(
            "rank {rank} but phi has {} and c1 has {} entries",
            phi.len(),
            c1.len()
        )));
    }
    Lattice::new(phi, c1).map_err(|e| err(e.to_string()))
}

fn parse_entry(line: Line<'_>) -> Result<PendingEntry<'_>, ParseError> {
    let t = line.text.trim();
    let Some((lhs, literal)) = t.split_once(':') else {
        return Err(line.err(t, ParseErrorKind::Syntax("expected 'source -> target: literal'".into())));
    };
    let Some((source, target)) = lhs.split_once("->") else {
        return Err(line.err(t, ParseErrorKind::Syntax("expected 'source -> target: literal'".into())));
    };
    let (source, target) = (source.trim(), target.trim());
    for name in [source, target] {
        if !is_name(name) {
            let at = if name.is_empty() { lhs } else { name };
            return Err(line.err(at, ParseErrorKind::Syntax(format!("invalid generator name '{name}'"))));
        }
    }
    Ok(PendingEntry {
        source,
        target,
        literal,
        line,
    })
}

fn parse_literal(lattice: &Arc<Lattice>, entry: &PendingEntry) -> Result<NovikovElement, ParseError> {
    NovikovElement::parse(lattice, entry.literal).map_err(|e| match e {
        SeriesError::Literal { column, message } => ParseError {
            line: entry.line.number,
            column: entry.line.column_of(entry.literal) + column - 1,
            kind: ParseErrorKind::Literal(message),
        },
        other => entry.line.err(entry.literal, ParseErrorKind::Literal(other.to_string())),
    })
}

fn build_complex(lattice: &Arc<Lattice>, grading: Grading, c: PendingComplex) -> Result<NamedComplex, ParseError> {
    let mut generators: Vec<Generator> = Vec::new();
    let mut index: HashMap<&str, usize> = HashMap::new();
    for (degree, line, name) in &c.modules {
        if name.is_empty() {
            continue;
        }
        if index.contains_key(name) {
            return Err(line.err(name, ParseErrorKind::DuplicateGenerator((*name).into())));
        }
        index.insert(name, generators.len());
        generators.push(Generator::new(*name, grading.reduce(*degree)));
    }
    let n = generators.len();
    let mut d = Matrix::zeros(lattice, n, n);
    let mut seen: BTreeMap<(usize, usize), ()> = BTreeMap::new();
    for e in &c.entries {
        let s = *index
            .get(e.source)
            .ok_or_else(|| e.line.err(e.source, ParseErrorKind::UndeclaredGenerator(e.source.into())))?;
        let t = *index
            .get(e.target)
            .ok_or_else(|| e.line.err(e.target, ParseErrorKind::UndeclaredGenerator(e.target.into())))?;
        if seen.insert((s, t), ()).is_some() {
            return Err(e.line.err(e.source, ParseErrorKind::DuplicateEntry(e.source.into(), e.target.into())));
        }
        let value = parse_literal(lattice, e)?;
        if !value.is_zero_below_cutoff() && generators[t].degree != grading.successor(generators[s].degree) {
            return Err(e.line.err(
                e.source,
                ParseErrorKind::Structure(format!(
                    "entry {} -> {} goes from degree {} to degree {}, expected {}",
                    e.source,
                    e.target,
                    generators[s].degree,
                    generators[t].degree,
                    grading.successor(generators[s].degree)
                )),
            ));
        }
        d.set(t, s, value);
    }
    let complex = BasedComplex::new(lattice.clone(), grading, generators, d)
        .map_err(|e| c.header.err(c.header.trimmed(), ParseErrorKind::Structure(e.to_string())))?;
    Ok(NamedComplex {
        name: c.name,
        complex: Arc::new(complex),
    })
}

fn build_map(lattice: &Arc<Lattice>, complexes: &[NamedComplex], m: PendingMap) -> Result<NamedMap, ParseError> {
    let lookup = |slot: &Option<(Line, &str)>, key: &str| -> Result<Arc<BasedComplex>, ParseError> {
        let Some((line, name)) = slot else {
            return Err(m.header.err(
                m.header.trimmed(),
                ParseErrorKind::Syntax(format!("map '{}' is missing '{key} = <complex>'", m.name)),
            ));
        };
        complexes
            .iter()
            .find(|c| c.name == *name)
            .map(|c| c.complex.clone())
            .ok_or_else(|| line.err(name, ParseErrorKind::UndeclaredComplex((*name).into())))
    };
    let source = lookup(&m.source, "source")?;
    let target = lookup(&m.target, "target")?;
    let mut f = Matrix::zeros(lattice, target.len(), source.len());
    let mut seen: BTreeMap<(usize, usize), ()> = BTreeMap::new();
    for e in &m.entries {
        let s = source
            .index_of(e.source)
            .map_err(|_| e.line.err(e.source, ParseErrorKind::UndeclaredGenerator(e.source.into())))?;
        let t = target
            .index_of(e.target)
            .map_err(|_| e.line.err(e.target, ParseErrorKind::UndeclaredGenerator(e.target.into())))?;
        if seen.insert((s, t), ()).is_some() {
            return Err(e.line.err(e.source, ParseErrorKind::DuplicateEntry(e.source.into(), e.target.into())));
        }
        let value = parse_literal(lattice, e)?;
        if !value.is_zero_below_cutoff() && source.generators()[s].degree != target.generators()[t].degree {
            return Err(e.line.err(
                e.source,
                ParseErrorKind::Structure(format!(
                    "map entry {} -> {} does not preserve degree",
                    e.source, e.target
                )),
            ));
        }
        f.set(t, s, value);
    }
    let map = ChainMap::new(source, target, f)
        .map_err(|e| m.header.err(m.header.trimmed(), ParseErrorKind::Structure(e.to_string())))?;
    Ok(NamedMap {
        source: m.source.as_ref().map(|s| s.1.to_string()).unwrap_or_default(),
        target: m.target.as_ref().map(|s| s.1.to_string()).unwrap_or_default(),
        name: m.name,
        map,
    })
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn render_entries(out: &mut String, sources: &[Generator], targets: &[Generator], m: &Matrix) {
    for s in 0..m.cols() {
        for t in 0..m.rows() {
            let e = m.get(t, s);
            if e.is_exact() && e.is_zero() {
                continue;
            }
            let _ = writeln!(out, "{} -> {}: {}", sources[s].name, targets[t].name, e);
        }
    }
}

pub fn render_complex(out: &mut String, name: &str, c: &BasedComplex) {
    let _ = writeln!(out, "[complex {name}]");
    let mut current: Option<i64> = None;
    for g in c.generators() {
        if current != Some(g.degree) {
            let _ = writeln!(out, "[module {}]", g.degree);
            current = Some(g.degree);
        }
        let _ = writeln!(out, "{}", g.name);
    }
    let _ = writeln!(out, "[differential]");
    render_entries(out, c.generators(), c.generators(), c.differential());
}

/// Normal form of a document.
pub fn render(doc: &Document) -> String {
    let mut out = String::new();
    let l = &doc.lattice;
    let _ = writeln!(out, "[group]");
    let _ = writeln!(out, "rank = {}", l.rank());
    let _ = writeln!(out, "phi = {}", join(l.phi()));
    let _ = writeln!(out, "c1 = {}", join(l.c1()));
    let _ = writeln!(out, "grading = {}", render_grading(doc.grading));
    for c in &doc.complexes {
        out.push('\n');
        render_complex(&mut out, &c.name, &c.complex);
    }
    for m in &doc.maps {
        out.push('\n');
        let _ = writeln!(out, "[map {}]", m.name);
        let _ = writeln!(out, "source = {}", m.source);
        let _ = writeln!(out, "target = {}", m.target);
        render_entries(
            &mut out,
            m.map.source().generators(),
            m.map.target().generators(),
            m.map.matrix(),
        );
    }
    out
}

/// `render ∘ parse`.
pub fn normalize(text: &str) -> Result<String, ParseError> {
    Ok(render(&parse(text)?))
}
