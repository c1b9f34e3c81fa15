//! Finite orthocomplemented posets and lattices.
//!
//! An [`OrthoLattice`] stores its order as a dense bit matrix built by
//! reflexive-transitive closure at construction time. Meets and joins are
//! derived from the order on first use and cached for the lifetime of the
//! value, so every query after the first is a table lookup.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

/// Reserved label of the bottom element.
pub const BOTTOM: &str = "0";
/// Reserved label of the top element.
pub const TOP: &str = "I";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("invalid element label `{0}`")]
    InvalidLabel(String),
    #[error("missing reserved element `{0}`")]
    MissingBound(&'static str),
    #[error("order contains a cycle: `{0}` <= `{1}` and `{1}` <= `{0}`")]
    Cycle(String, String),
    #[error("`{element}` is not between 0 and I")]
    Unbounded { element: String },
    #[error("element `{0}` has no complement")]
    IncompleteOrtho(String),
    #[error("element `{0}` is paired with itself")]
    SelfComplement(String),
    #[error("element `{element}` is given two complements, `{first}` and `{second}`")]
    ConflictingComplement {
        element: String,
        first: String,
        second: String,
    },
    #[error("`{0}` and `{1}` have no greatest lower bound")]
    NoMeet(String, String),
    #[error("`{0}` and `{1}` have no least upper bound")]
    NoJoin(String, String),
    #[error("lattice has no orthocomplement map")]
    NoOrtho,
    #[error("relation has {got} entries, expected {expected}")]
    Shape { expected: usize, got: usize },
}

/// Handle to an element of a particular lattice (its declaration index).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub usize);

impl Elem {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

/// Square boolean matrix with bit-packed rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub(crate) fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitMatrix {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    #[inline]
    pub(crate) fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    /// Warshall's algorithm over packed rows.
    pub(crate) fn close_transitively(&mut self) {
        for k in 0..self.n {
            let row_k: Vec<u64> = self.bits[k * self.words..(k + 1) * self.words].to_vec();
            for i in 0..self.n {
                if self.get(i, k) {
                    let row_i = &mut self.bits[i * self.words..(i + 1) * self.words];
                    for (dst, src) in row_i.iter_mut().zip(&row_k) {
                        *dst |= *src;
                    }
                }
            }
        }
    }
}

/// A finite poset with an optional orthocomplement map.
///
/// Values produced by [`build_lattice`] always carry `0`, `I` and a total
/// involutive complement map. [`OrthoLattice::from_relation`] admits
/// arbitrary relations so the checkers can be exercised on broken inputs.
pub struct OrthoLattice {
    name: String,
    labels: Vec<String>,
    index: HashMap<String, usize>,
    leq: BitMatrix,
    ortho: Option<Vec<usize>>,
    bottom: Option<usize>,
    top: Option<usize>,
    meets: OnceLock<Vec<Option<usize>>>,
    joins: OnceLock<Vec<Option<usize>>>,
}

impl Clone for OrthoLattice {
    fn clone(&self) -> Self {
        OrthoLattice {
            name: self.name.clone(),
            labels: self.labels.clone(),
            index: self.index.clone(),
            leq: self.leq.clone(),
            ortho: self.ortho.clone(),
            bottom: self.bottom,
            top: self.top,
            meets: OnceLock::new(),
            joins: OnceLock::new(),
        }
    }
}

impl fmt::Debug for OrthoLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OrthoLattice")
            .field("name", &self.name)
            .field("elements", &self.labels)
            .field("covers", &self.covers().pairs)
            .finish()
    }
}

/// Hasse diagram edges, `(lower, upper)`, sorted by declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverRelation {
    pub pairs: Vec<(Elem, Elem)>,
}

fn validate_label(label: &str) -> Result<(), LatticeError> {
    if label.is_empty()
        || label
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '<' | ':' | '#' | '"'))
    {
        return Err(LatticeError::InvalidLabel(label.to_string()));
    }
    Ok(())
}

fn index_labels(labels: &[String]) -> Result<HashMap<String, usize>, LatticeError> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, label) in labels.iter().enumerate() {
        validate_label(label)?;
        if index.insert(label.clone(), i).is_some() {
            return Err(LatticeError::DuplicateLabel(label.clone()));
        }
    }
    Ok(index)
}

fn lookup(index: &HashMap<String, usize>, label: &str) -> Result<usize, LatticeError> {
    index
        .get(label)
        .copied()
        .ok_or_else(|| LatticeError::UnknownElement(label.to_string()))
}

/// Closes `order` reflexively and transitively over `labels`, rejecting cycles.
fn closed_order(
    labels: &[String],
    index: &HashMap<String, usize>,
    order: &[(String, String)],
) -> Result<BitMatrix, LatticeError> {
    let n = labels.len();
    let mut leq = BitMatrix::new(n);
    for i in 0..n {
        leq.set(i, i);
    }
    for (a, b) in order {
        leq.set(lookup(index, a)?, lookup(index, b)?);
    }
    leq.close_transitively();
    for i in 0..n {
        for j in i + 1..n {
            if leq.get(i, j) && leq.get(j, i) {
                return Err(LatticeError::Cycle(labels[i].clone(), labels[j].clone()));
            }
        }
    }
    Ok(leq)
}

fn bounded(
    labels: &[String],
    leq: &BitMatrix,
    bottom: usize,
    top: usize,
) -> Result<(), LatticeError> {
    for (i, label) in labels.iter().enumerate() {
        if !leq.get(bottom, i) || !leq.get(i, top) {
            return Err(LatticeError::Unbounded {
                element: label.clone(),
            });
        }
    }
    Ok(())
}

/// Builds a validated ortholattice candidate.
///
/// `order` lists pairs `(a, b)` meaning `a <= b`; the stored order is their
/// reflexive-transitive closure. `ortho_pairs` is symmetrised and `0 <-> I` is
/// added. Lattice laws themselves are left to the checkers.
pub fn build_lattice<S: AsRef<str>>(
    name: &str,
    elements: &[S],
    order: &[(S, S)],
    ortho_pairs: &[(S, S)],
) -> Result<OrthoLattice, LatticeError> {
    let labels: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
    let order: Vec<(String, String)> = order
        .iter()
        .map(|(a, b)| (a.as_ref().to_string(), b.as_ref().to_string()))
        .collect();
    let index = index_labels(&labels)?;
    let bottom = *index
        .get(BOTTOM)
        .ok_or(LatticeError::MissingBound(BOTTOM))?;
    let top = *index.get(TOP).ok_or(LatticeError::MissingBound(TOP))?;
    let leq = closed_order(&labels, &index, &order)?;
    bounded(&labels, &leq, bottom, top)?;

    let n = labels.len();
    let mut ortho: Vec<Option<usize>> = vec![None; n];
    let mut pair = |a: usize, b: usize| -> Result<(), LatticeError> {
        if a == b {
            return Err(LatticeError::SelfComplement(labels[a].clone()));
        }
        for (x, y) in [(a, b), (b, a)] {
            match ortho[x] {
                Some(prev) if prev != y => {
                    return Err(LatticeError::ConflictingComplement {
                        element: labels[x].clone(),
                        first: labels[prev].clone(),
                        second: labels[y].clone(),
                    })
                }
                _ => ortho[x] = Some(y),
            }
        }
        Ok(())
    };
    pair(bottom, top)?;
    for (a, b) in ortho_pairs {
        pair(lookup(&index, a.as_ref())?, lookup(&index, b.as_ref())?)?;
    }
    let ortho = ortho
        .into_iter()
        .enumerate()
        .map(|(i, o)| o.ok_or_else(|| LatticeError::IncompleteOrtho(labels[i].clone())))
        .collect::<Result<Vec<_>, _>>()?;

    Ok(OrthoLattice::assemble(
        name,
        labels,
        index,
        leq,
        Some(ortho),
        Some(bottom),
        Some(top),
    ))
}

/// Builds a bounded lattice candidate without a complement map.
pub fn build_plain_lattice<S: AsRef<str>>(
    name: &str,
    elements: &[S],
    order: &[(S, S)],
) -> Result<OrthoLattice, LatticeError> {
    let labels: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
    let order: Vec<(String, String)> = order
        .iter()
        .map(|(a, b)| (a.as_ref().to_string(), b.as_ref().to_string()))
        .collect();
    let index = index_labels(&labels)?;
    let bottom = *index
        .get(BOTTOM)
        .ok_or(LatticeError::MissingBound(BOTTOM))?;
    let top = *index.get(TOP).ok_or(LatticeError::MissingBound(TOP))?;
    let leq = closed_order(&labels, &index, &order)?;
    bounded(&labels, &leq, bottom, top)?;
    Ok(OrthoLattice::assemble(
        name,
        labels,
        index,
        leq,
        None,
        Some(bottom),
        Some(top),
    ))
}

impl OrthoLattice {
    fn assemble(
        name: &str,
        labels: Vec<String>,
        index: HashMap<String, usize>,
        leq: BitMatrix,
        ortho: Option<Vec<usize>>,
        bottom: Option<usize>,
        top: Option<usize>,
    ) -> Self {
        OrthoLattice {
            name: name.to_string(),
            labels,
            index,
            leq,
            ortho,
            bottom,
            top,
            meets: OnceLock::new(),
            joins: OnceLock::new(),
        }
    }

    /// Wraps a raw relation without closing or validating it.
    ///
    /// `leq[i][j]` means element `i` is below element `j`. Bottom and top are
    /// whichever elements sit below (above) every other element, if any.
    pub fn from_relation<S: AsRef<str>>(
        name: &str,
        elements: &[S],
        leq: &[Vec<bool>],
        ortho: Option<Vec<usize>>,
    ) -> Result<Self, LatticeError> {
        let labels: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        let index = index_labels(&labels)?;
        let n = labels.len();
        if leq.len() != n || leq.iter().any(|row| row.len() != n) {
            return Err(LatticeError::Shape {
                expected: n * n,
                got: leq.iter().map(Vec::len).sum(),
            });
        }
        if let Some(o) = &ortho {
            if o.len() != n || o.iter().any(|&j| j >= n) {
                return Err(LatticeError::Shape {
                    expected: n,
                    got: o.len(),
                });
            }
        }
        let mut bits = BitMatrix::new(n);
        for (i, row) in leq.iter().enumerate() {
            for (j, &b) in row.iter().enumerate() {
                if b {
                    bits.set(i, j);
                }
            }
        }
        let bottom = (0..n).find(|&i| (0..n).all(|j| i == j || bits.get(i, j)));
        let top = (0..n).find(|&i| (0..n).all(|j| i == j || bits.get(j, i)));
        Ok(Self::assemble(
            name, labels, index, bits, ortho, bottom, top,
        ))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn elements(&self) -> impl ExactSizeIterator<Item = Elem> + Clone {
        (0..self.labels.len()).map(Elem)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, e: Elem) -> &str {
        &self.labels[e.0]
    }

    pub fn elem(&self, label: &str) -> Result<Elem, LatticeError> {
        lookup(&self.index, label).map(Elem)
    }

    pub fn bottom(&self) -> Option<Elem> {
        self.bottom.map(Elem)
    }

    pub fn top(&self) -> Option<Elem> {
        self.top.map(Elem)
    }

    pub fn has_ortho(&self) -> bool {
        self.ortho.is_some()
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq.get(a.0, b.0)
    }

    #[inline]
    pub fn lt(&self, a: Elem, b: Elem) -> bool {
        a != b && self.leq(a, b)
    }

    /// Orthocomplement, or `None` when the lattice carries no complement map.
    #[inline]
    pub fn ortho(&self, a: Elem) -> Option<Elem> {
        self.ortho.as_ref().map(|o| Elem(o[a.0]))
    }

    /// Orthocomplement of a lattice known to carry one.
    ///
    /// Panics on a plain lattice.
    #[inline]
    pub fn perp(&self, a: Elem) -> Elem {
        self.ortho(a).expect("lattice has no orthocomplement map")
    }

    /// Greatest lower bound, if one exists.
    pub fn try_meet(&self, a: Elem, b: Elem) -> Option<Elem> {
        let n = self.len();
        self.meets
            .get_or_init(|| self.bound_table(|x, y| self.leq.get(x, y)))[a.0 * n + b.0]
            .map(Elem)
    }

    /// Least upper bound, if one exists.
    pub fn try_join(&self, a: Elem, b: Elem) -> Option<Elem> {
        let n = self.len();
        self.joins
            .get_or_init(|| self.bound_table(|x, y| self.leq.get(y, x)))[a.0 * n + b.0]
            .map(Elem)
    }

    pub fn meet(&self, a: Elem, b: Elem) -> Result<Elem, LatticeError> {
        self.try_meet(a, b).ok_or_else(|| {
            LatticeError::NoMeet(self.label(a).to_string(), self.label(b).to_string())
        })
    }

    pub fn join(&self, a: Elem, b: Elem) -> Result<Elem, LatticeError> {
        self.try_join(a, b).ok_or_else(|| {
            LatticeError::NoJoin(self.label(a).to_string(), self.label(b).to_string())
        })
    }

    /// True when every pair has both a meet and a join.
    pub fn is_lattice(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| {
            (0..n).all(|b| {
                self.try_meet(Elem(a), Elem(b)).is_some()
                    && self.try_join(Elem(a), Elem(b)).is_some()
            })
        })
    }

    /// Greatest common lower bound table under `below`; the join table is the
    /// same computation on the reversed order.
    fn bound_table(&self, below: impl Fn(usize, usize) -> bool) -> Vec<Option<usize>> {
        let n = self.len();
        let mut table = vec![None; n * n];
        let mut common = Vec::with_capacity(n);
        for a in 0..n {
            for b in a..n {
                common.clear();
                common.extend((0..n).filter(|&c| below(c, a) && below(c, b)));
                let mut best = match common.first() {
                    Some(&c) => c,
                    None => continue,
                };
                for &c in &common[1..] {
                    if below(best, c) {
                        best = c;
                    }
                }
                if common.iter().all(|&c| below(c, best)) {
                    table[a * n + b] = Some(best);
                    table[b * n + a] = Some(best);
                }
            }
        }
        table
    }

    /// Hasse diagram edges: `(b, a)` with `b < a` and nothing strictly between.
    pub fn covers(&self) -> CoverRelation {
        let n = self.len();
        let mut pairs = Vec::new();
        for lo in 0..n {
            for hi in 0..n {
                if lo != hi
                    && self.leq.get(lo, hi)
                    && !(0..n)
                        .any(|c| c != lo && c != hi && self.leq.get(lo, c) && self.leq.get(c, hi))
                {
                    pairs.push((Elem(lo), Elem(hi)));
                }
            }
        }
        CoverRelation { pairs }
    }

    /// True when `upper` covers `lower`.
    pub fn is_cover(&self, lower: Elem, upper: Elem) -> bool {
        self.lt(lower, upper)
            && !self
                .elements()
                .any(|c| self.lt(lower, c) && self.lt(c, upper))
    }

    /// Elements covering the bottom, in declaration order.
    pub fn atoms(&self) -> Vec<Elem> {
        match self.bottom() {
            Some(bottom) => self
                .elements()
                .filter(|&a| self.is_cover(bottom, a))
                .collect(),
            None => Vec::new(),
        }
    }

    /// Atoms below `a`.
    pub fn atoms_below(&self, a: Elem) -> Vec<Elem> {
        self.atoms()
            .into_iter()
            .filter(|&x| self.leq(x, a))
            .collect()
    }

    /// Complement pairs `(a, a⊥)` listed once each, excluding `0 <-> I`.
    pub fn complement_pairs(&self) -> Vec<(Elem, Elem)> {
        let Some(o) = &self.ortho else {
            return Vec::new();
        };
        o.iter()
            .enumerate()
            .filter(|&(a, &b)| {
                a < b
                    && !(Some(a) == self.bottom && Some(b) == self.top)
                    && !(Some(b) == self.bottom && Some(a) == self.top)
            })
            .map(|(a, &b)| (Elem(a), Elem(b)))
            .collect()
    }
}
