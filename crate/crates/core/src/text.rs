//! Line-oriented text formats. `#` starts a comment anywhere on a line.
//!
//! Lattice:
//!
//! ```text
//! lattice spin_half
//! elements: 0 p q r s I
//! order: 0<p p<I 0<q q<I 0<r r<I 0<s s<I
//! complement: p:q r:s
//! ```
//!
//! `order:` items may be chains (`0<a<b<I`) and the directive may repeat. A
//! file without a `complement:` line describes a plain lattice.
//!
//! Model:
//!
//! ```text
//! model spin_half
//! universe: m1 m2 m3 m4
//! experiment X: X+ = {m1}, X- = {m2}
//! experiment Y: Y+ = {m3}, Y- = {m4}
//! equiv: X.{+} = Y.{+}
//! ```
//!
//! An outcome label that starts with its experiment's name has the prefix
//! stripped (`X+` becomes `+`, the event `X.{+}`). A bare outcome with no set
//! gets one fresh manifold named `<experiment><outcome>`. Without a
//! `universe:` line the universe is every manifold mentioned.
//!
//! Assignment:
//!
//! ```text
//! dim: 2
//! assign p: (1,0) (1,0)
//! ```
//!
//! Each `assign` line adds one spanning vector for the atom; components are
//! `(re,im)` pairs or plain reals.

use std::fmt::Write as _;

use num_complex::Complex64;
use thiserror::Error;

use crate::hilbert::{Assignment, EmbedError};
use crate::lattice::{build_lattice, build_plain_lattice, LatticeError, OrthoLattice};
use crate::model::{
    build_model, proposition_lattice, Equivalence, EventRef, Experiment, ExperimentModel,
    ManifoldId, ModelError, Outcome,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TextError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Embed(#[from] EmbedError),
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

/// A non-blank line with comments removed.
struct Line<'a> {
    number: usize,
    text: &'a str,
}

impl<'a> Line<'a> {
    fn column_of(&self, part: &str) -> usize {
        // `part` is always a subslice of `text`
        part.as_ptr() as usize - self.text.as_ptr() as usize + 1
    }

    fn error_at(&self, part: &str, message: impl Into<String>) -> ParseError {
        err(self.number, self.column_of(part), message)
    }

    /// Splits `keyword: rest`.
    fn directive(&self) -> Option<(&'a str, &'a str)> {
        let (key, rest) = self.text.split_once(':')?;
        let key = key.trim();
        (!key.is_empty()).then_some((key, rest))
    }
}

fn lines(src: &str) -> impl Iterator<Item = Line<'_>> {
    src.lines().enumerate().filter_map(|(i, raw)| {
        let text = raw.split('#').next().unwrap_or("");
        (!text.trim().is_empty()).then_some(Line {
            number: i + 1,
            text,
        })
    })
}

/// Whitespace-separated tokens with their source slices.
fn tokens(s: &str) -> impl Iterator<Item = &str> {
    s.split_whitespace()
}

fn header<'a>(line: &Line<'a>, keyword: &str) -> Result<&'a str, ParseError> {
    let mut it = tokens(line.text);
    match (it.next(), it.next(), it.next()) {
        (Some(k), Some(name), None) if k == keyword => Ok(name),
        (Some(k), None, None) if k == keyword => {
            Err(line.error_at(k, format!("`{keyword}` needs a name")))
        }
        _ => Err(err(line.number, 1, format!("expected `{keyword} <name>`"))),
    }
}

/// Which kind of document a source holds, judged by its first directive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocumentKind {
    Lattice,
    Model,
    Assignment,
}

pub fn document_kind(src: &str) -> Option<DocumentKind> {
    let first = lines(src).next()?;
    let word = tokens(first.text).next()?;
    match word.trim_end_matches(':') {
        "lattice" => Some(DocumentKind::Lattice),
        "model" => Some(DocumentKind::Model),
        "dim" | "assign" => Some(DocumentKind::Assignment),
        _ => None,
    }
}

pub fn parse_lattice(src: &str) -> Result<OrthoLattice, TextError> {
    let mut it = lines(src);
    let first = it.next().ok_or_else(|| err(1, 1, "empty lattice file"))?;
    let name = header(&first, "lattice")?;
    let mut elements: Option<Vec<&str>> = None;
    let mut order: Vec<(&str, &str)> = Vec::new();
    let mut complements: Option<Vec<(&str, &str)>> = None;
    for line in it {
        let (key, rest) = line.directive().ok_or_else(|| {
            err(
                line.number,
                1,
                "expected `elements:`, `order:` or `complement:`",
            )
        })?;
        match key {
            "elements" => {
                if elements.is_some() {
                    return Err(err(line.number, 1, "duplicate `elements:` line").into());
                }
                elements = Some(tokens(rest).collect());
            }
            "order" => {
                for tok in tokens(rest) {
                    let parts: Vec<&str> = tok.split('<').collect();
                    if parts.len() < 2 || parts.iter().any(|p| p.is_empty()) {
                        return Err(line
                            .error_at(tok, format!("malformed order item `{tok}`"))
                            .into());
                    }
                    order.extend(parts.windows(2).map(|w| (w[0], w[1])));
                }
            }
            "complement" => {
                let pairs = complements.get_or_insert_with(Vec::new);
                for tok in tokens(rest) {
                    match tok.split_once(':') {
                        Some((a, b)) if !a.is_empty() && !b.is_empty() && !b.contains(':') => {
                            pairs.push((a, b))
                        }
                        _ => {
                            return Err(line
                                .error_at(
                                    tok,
                                    format!("malformed complement pair `{tok}`, expected `a:b`"),
                                )
                                .into())
                        }
                    }
                }
            }
            other => {
                return Err(line
                    .error_at(other, format!("unknown directive `{other}`"))
                    .into());
            }
        }
    }
    let elements = elements.ok_or_else(|| err(first.number, 1, "missing `elements:` line"))?;
    Ok(match complements {
        Some(pairs) => build_lattice(name, &elements, &order, &pairs)?,
        None => build_plain_lattice(name, &elements, &order)?,
    })
}

/// Serialises a lattice: cover pairs as the order, each complement pair once.
pub fn write_lattice(l: &OrthoLattice) -> String {
    let mut out = String::new();
    writeln!(out, "lattice {}", l.name()).unwrap();
    writeln!(out, "elements: {}", l.labels().join(" ")).unwrap();
    let covers: Vec<String> = l
        .covers()
        .pairs
        .iter()
        .map(|&(a, b)| format!("{}<{}", l.label(a), l.label(b)))
        .collect();
    writeln!(out, "order: {}", covers.join(" ")).unwrap();
    if l.has_ortho() {
        let pairs: Vec<String> = l
            .complement_pairs()
            .iter()
            .map(|&(a, b)| format!("{}:{}", l.label(a), l.label(b)))
            .collect();
        writeln!(out, "complement: {}", pairs.join(" ")).unwrap();
    }
    out
}

/// Splits on commas outside braces, keeping slices into `s`.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '{' | '(' => depth += 1,
            '}' | ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

fn parse_outcome(line: &Line<'_>, experiment: &str, item: &str) -> Result<Outcome, ParseError> {
    let trimmed = item.trim();
    if trimmed.is_empty() {
        return Err(line.error_at(item, "empty outcome"));
    }
    let (label, set) = match trimmed.split_once('=') {
        Some((l, s)) => (l.trim(), Some(s.trim())),
        None => (trimmed, None),
    };
    let label = match label.strip_prefix(experiment) {
        Some(rest) if !rest.is_empty() => rest,
        _ => label,
    };
    if label.is_empty() || label.contains(char::is_whitespace) {
        return Err(line.error_at(trimmed, format!("bad outcome label in `{trimmed}`")));
    }
    let manifolds = match set {
        None => [ManifoldId(format!("{experiment}{label}"))].into(),
        Some(set) => {
            let inner = set
                .strip_prefix('{')
                .and_then(|s| s.strip_suffix('}'))
                .ok_or_else(|| {
                    line.error_at(set, format!("expected `{{...}}` after `{label} =`"))
                })?;
            inner
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|m| !m.is_empty())
                .map(|m| ManifoldId(m.to_string()))
                .collect()
        }
    };
    Ok(Outcome {
        label: label.to_string(),
        manifolds,
    })
}

pub fn parse_model(src: &str) -> Result<ExperimentModel, TextError> {
    let mut it = lines(src);
    let first = it.next().ok_or_else(|| err(1, 1, "empty model file"))?;
    let name = header(&first, "model")?;
    let mut universe: Option<Vec<ManifoldId>> = None;
    let mut experiments = Vec::new();
    let mut equivalences = Vec::new();
    for line in it {
        let (key, rest) = line.directive().ok_or_else(|| {
            err(
                line.number,
                1,
                "expected `universe:`, `experiment NAME:` or `equiv:`",
            )
        })?;
        if key == "universe" {
            universe = Some(tokens(rest).map(|m| ManifoldId(m.to_string())).collect());
        } else if key == "equiv" {
            let (a, b) = rest
                .split_once('=')
                .ok_or_else(|| line.error_at(rest, "expected `EVENT = EVENT`"))?;
            let parse = |s: &str| s.parse::<EventRef>().map_err(|m| line.error_at(s, m));
            equivalences.push(Equivalence(parse(a)?, parse(b)?));
        } else if let Some(exp) = key.strip_prefix("experiment") {
            let exp = exp.trim();
            if exp.is_empty() {
                return Err(line.error_at(key, "experiment needs a name").into());
            }
            let outcomes = split_top_level(rest)
                .into_iter()
                .map(|item| parse_outcome(&line, exp, item))
                .collect::<Result<Vec<_>, _>>()?;
            experiments.push(Experiment {
                name: exp.to_string(),
                outcomes,
            });
        } else {
            return Err(line
                .error_at(key, format!("unknown directive `{key}`"))
                .into());
        }
    }
    Ok(build_model(name, universe, experiments, equivalences)?)
}

pub fn write_model(model: &ExperimentModel) -> String {
    let mut out = String::new();
    writeln!(out, "model {}", model.name).unwrap();
    let universe: Vec<&str> = model.universe.iter().map(|m| m.0.as_str()).collect();
    writeln!(out, "universe: {}", universe.join(" ")).unwrap();
    for e in &model.experiments {
        let outcomes: Vec<String> = e
            .outcomes
            .iter()
            .map(|o| {
                let ms: Vec<&str> = o.manifolds.iter().map(|m| m.0.as_str()).collect();
                format!("{}{} = {{{}}}", e.name, o.label, ms.join(", "))
            })
            .collect();
        writeln!(out, "experiment {}: {}", e.name, outcomes.join(", ")).unwrap();
    }
    for Equivalence(a, b) in &model.equivalences {
        writeln!(out, "equiv: {a} = {b}").unwrap();
    }
    out
}

fn parse_component(line: &Line<'_>, tok: &str) -> Result<Complex64, ParseError> {
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| line.error_at(tok, format!("bad number `{}`", s.trim())))
    };
    match tok.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        Some(inner) => {
            let (re, im) = inner
                .split_once(',')
                .ok_or_else(|| line.error_at(tok, format!("expected `(re,im)`, got `{tok}`")))?;
            Ok(Complex64::new(num(re)?, num(im)?))
        }
        None => Ok(Complex64::new(num(tok)?, 0.0)),
    }
}

/// Splits on whitespace outside parentheses.
fn components(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, None);
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c.is_whitespace() && depth == 0 => {
                if let Some(st) = start.take() {
                    out.push(&s[st..i]);
                }
                continue;
            }
            _ => {}
        }
        start.get_or_insert(i);
    }
    if let Some(st) = start {
        out.push(&s[st..]);
    }
    out
}

pub fn parse_assignment(src: &str) -> Result<Assignment, TextError> {
    let mut dim: Option<usize> = None;
    let mut pending: Vec<(usize, String, Vec<Complex64>)> = Vec::new();
    for line in lines(src) {
        let (key, rest) = line
            .directive()
            .ok_or_else(|| err(line.number, 1, "expected `dim:` or `assign ATOM:`"))?;
        if key == "dim" {
            let d = rest.trim();
            dim = Some(
                d.parse()
                    .ok()
                    .filter(|&n: &usize| n > 0)
                    .ok_or_else(|| line.error_at(d, format!("bad dimension `{d}`")))?,
            );
        } else if let Some(atom) = key.strip_prefix("assign") {
            let atom = atom.trim();
            if atom.is_empty() {
                return Err(line.error_at(key, "assign needs an atom name").into());
            }
            let v = components(rest)
                .into_iter()
                .map(|tok| parse_component(&line, tok))
                .collect::<Result<Vec<_>, _>>()?;
            pending.push((line.number, atom.to_string(), v));
        } else {
            return Err(line
                .error_at(key, format!("unknown directive `{key}`"))
                .into());
        }
    }
    let dim = dim.ok_or_else(|| err(1, 1, "missing `dim:` line"))?;
    let mut a = Assignment::new(dim);
    for (_, atom, v) in pending {
        if v.len() != dim {
            return Err(EmbedError::DimensionMismatch {
                expected: dim,
                got: v.len(),
            }
            .into());
        }
        a.assign(&atom, v);
    }
    Ok(a)
}

pub fn write_assignment(a: &Assignment) -> String {
    let mut out = format!("dim: {}\n", a.dim);
    for (atom, vs) in &a.vectors {
        for v in vs {
            let comps: Vec<String> = v.iter().map(|z| format!("({},{})", z.re, z.im)).collect();
            writeln!(out, "assign {atom}: {}", comps.join(" ")).unwrap();
        }
    }
    out
}

/// Parses a lattice file, or compiles a model file into its proposition lattice.
pub fn load_lattice(src: &str) -> Result<OrthoLattice, TextError> {
    match document_kind(src) {
        Some(DocumentKind::Model) => Ok(proposition_lattice(&parse_model(src)?)?),
        _ => parse_lattice(src),
    }
}
