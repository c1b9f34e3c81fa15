//! Exhaustive checkers for the lattice laws.
//!
//! Every checker scans all pairs or triples of elements in declaration order
//! and returns a [`PropertyReport`]. A failing report always carries at least
//! one [`Witness`]: the offending elements together with the two sides of the
//! law as evaluated on the lattice. [`replay`] re-evaluates a witness from its
//! labels alone, so a report can be audited independently of the scan that
//! produced it.
//!
//! Scans are partitioned over the outer element index. With more than one job
//! the partitions run on scoped threads and are merged in index order, so the
//! reported witnesses do not depend on the job count.

use std::fmt;
use std::str::FromStr;
use std::thread;

use serde::Serialize;

use crate::lattice::{Elem, LatticeError, OrthoLattice};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Poset,
    Lattice,
    Orthocomplementation,
    DeMorgan,
    Orthomodular,
    Modular,
    Distributive,
    Atomic,
    Covering,
    Compatible,
    Embedding,
}

impl Property {
    /// Properties evaluated by [`full_report`], in report order.
    pub const LATTICE_LAWS: [Property; 10] = [
        Property::Poset,
        Property::Lattice,
        Property::Orthocomplementation,
        Property::DeMorgan,
        Property::Orthomodular,
        Property::Modular,
        Property::Distributive,
        Property::Atomic,
        Property::Covering,
        Property::Compatible,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Poset => "poset",
            Property::Lattice => "lattice",
            Property::Orthocomplementation => "orthocomplementation",
            Property::DeMorgan => "de-morgan",
            Property::Orthomodular => "orthomodular",
            Property::Modular => "modular",
            Property::Distributive => "distributive",
            Property::Atomic => "atomic",
            Property::Covering => "covering",
            Property::Compatible => "compatible",
            Property::Embedding => "embedding",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let normalized = s.trim().to_ascii_lowercase().replace('_', "-");
        Property::LATTICE_LAWS
            .into_iter()
            .chain([Property::Embedding])
            .find(|p| {
                p.name() == normalized || (normalized == "demorgan" && *p == Property::DeMorgan)
            })
            .ok_or_else(|| format!("unknown property `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// A precondition (lattice structure, complement map) is missing.
    Skipped,
}

/// The specific identity a witness violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    Reflexivity,
    Antisymmetry,
    Transitivity,
    MeetExists,
    JoinExists,
    Involution,
    ComplementJoin,
    ComplementMeet,
    OrderReversal,
    DeMorganMeet,
    DeMorganJoin,
    Orthomodular,
    Modular,
    Distributive,
    Atomic,
    Covering,
    Compatible,
    EmbedInjective,
    EmbedOrder,
    EmbedMeet,
    EmbedJoin,
    EmbedComplement,
}

impl Law {
    /// Human-readable expressions for the two sides of the law.
    pub fn sides(self, e: &[String]) -> (String, String) {
        let g = |i: usize| e.get(i).map(String::as_str).unwrap_or("?");
        let (a, b, c) = (g(0), g(1), g(2));
        match self {
            Law::Reflexivity => (format!("{a}≤{a}"), "true".into()),
            Law::Antisymmetry => (format!("{a} (with {a}≤{b}≤{a})"), b.to_string()),
            Law::Transitivity => (format!("{a}≤{c}"), format!("{a}≤{b}≤{c}")),
            Law::MeetExists => (format!("{a}∧{b}"), "greatest lower bound".into()),
            Law::JoinExists => (format!("{a}∨{b}"), "least upper bound".into()),
            Law::Involution => (format!("({a}⊥)⊥"), a.to_string()),
            Law::ComplementJoin => (format!("{a}∨{a}⊥"), "I".into()),
            Law::ComplementMeet => (format!("{a}∧{a}⊥"), "0".into()),
            Law::OrderReversal => (format!("{b}⊥≤{a}⊥"), format!("{a}≤{b}")),
            Law::DeMorganMeet => (format!("({a}∧{b})⊥"), format!("{a}⊥∨{b}⊥")),
            Law::DeMorganJoin => (format!("({a}∨{b})⊥"), format!("{a}⊥∧{b}⊥")),
            Law::Orthomodular => (b.to_string(), format!("{a}∨({b}∧{a}⊥)")),
            Law::Modular => (format!("{a}∨({b}∧{c})"), format!("({a}∨{b})∧{c}")),
            Law::Distributive => (format!("{a}∧({b}∨{c})"), format!("({a}∧{b})∨({a}∧{c})")),
            Law::Atomic => (format!("atom below {a}"), "some atom".into()),
            Law::Covering => (
                format!("{a}∨{b}"),
                format!("element strictly between {a} and {a}∨{b}"),
            ),
            Law::Compatible => (a.to_string(), format!("({a}∧{b})∨({a}∧{b}⊥)")),
            Law::EmbedInjective => (format!("image({a})"), format!("image({b})")),
            Law::EmbedOrder => (format!("{a}≤{b}"), format!("image({a})⊆image({b})")),
            Law::EmbedMeet => (format!("image({a}∧{b})"), format!("image({a})∩image({b})")),
            Law::EmbedJoin => (format!("image({a}∨{b})"), format!("image({a})+image({b})")),
            Law::EmbedComplement => (format!("image({a}⊥)"), format!("image({a})⊥")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub law: Law,
    pub elements: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lhs, rhs) = self.law.sides(&self.elements);
        write!(
            f,
            "{}: {lhs} = {}, {rhs} = {}",
            self.elements.join(","),
            self.lhs,
            self.rhs
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub property: Property,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl PropertyReport {
    pub(crate) fn from_witnesses(property: Property, witnesses: Vec<Witness>) -> Self {
        let verdict = if witnesses.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        PropertyReport {
            property,
            verdict,
            witnesses,
            note: None,
        }
    }

    fn skipped(property: Property, why: &str) -> Self {
        PropertyReport {
            property,
            verdict: Verdict::Skipped,
            witnesses: Vec::new(),
            note: Some(why.to_string()),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.verdict {
            Verdict::Pass => write!(f, "{}: pass", self.property),
            Verdict::Skipped => write!(
                f,
                "{}: skipped ({})",
                self.property,
                self.note.as_deref().unwrap_or("precondition missing")
            ),
            Verdict::Fail => {
                write!(f, "{}: FAIL", self.property)?;
                for w in &self.witnesses {
                    write!(f, "\n  witness {w}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WitnessPolicy {
    #[default]
    First,
    All,
}

impl FromStr for WitnessPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "first" => Ok(WitnessPolicy::First),
            "all" => Ok(WitnessPolicy::All),
            other => Err(format!("unknown witness policy `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    pub witnesses: WitnessPolicy,
    pub jobs: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            witnesses: WitnessPolicy::First,
            jobs: 1,
        }
    }
}

impl CheckOptions {
    pub fn all_witnesses() -> Self {
        CheckOptions {
            witnesses: WitnessPolicy::All,
            jobs: 1,
        }
    }
}

/// Runs `visit(i, first_only)` for every outer index and merges the results in
/// index order. Under [`WitnessPolicy::First`] only the earliest witness is kept.
pub(crate) fn scan<F>(n: usize, opts: &CheckOptions, visit: F) -> Vec<Witness>
where
    F: Fn(usize, bool) -> Vec<Witness> + Sync,
{
    let first = opts.witnesses == WitnessPolicy::First;
    let run = |range: std::ops::Range<usize>| {
        let mut out = Vec::new();
        for i in range {
            let found = visit(i, first);
            if first && !found.is_empty() {
                out.extend(found.into_iter().take(1));
                break;
            }
            out.extend(found);
        }
        out
    };
    let jobs = opts.jobs.clamp(1, n.max(1));
    let mut merged = if jobs == 1 {
        run(0..n)
    } else {
        let chunk = n.div_ceil(jobs);
        thread::scope(|s| {
            let handles: Vec<_> = (0..jobs)
                .map(|j| {
                    let run = &run;
                    s.spawn(move || run(j * chunk..((j + 1) * chunk).min(n)))
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("checker worker panicked"))
                .collect()
        })
    };
    if first {
        merged.truncate(1);
    }
    merged
}

fn witness(l: &OrthoLattice, law: Law, elements: &[Elem], lhs: &str, rhs: &str) -> Witness {
    Witness {
        law,
        elements: elements.iter().map(|&e| l.label(e).to_string()).collect(),
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    }
}

/// Precondition gate shared by the meet/join based checkers.
fn precondition(l: &OrthoLattice, needs_ortho: bool) -> Option<&'static str> {
    if !l.is_lattice() {
        Some("not a lattice")
    } else if needs_ortho && !l.has_ortho() {
        Some("no orthocomplement map")
    } else if needs_ortho && (l.bottom().is_none() || l.top().is_none()) {
        Some("not bounded")
    } else {
        None
    }
}

// Infallible once `precondition` has passed.
fn m(l: &OrthoLattice, a: Elem, b: Elem) -> Elem {
    l.try_meet(a, b).expect("meet exists in a lattice")
}

fn j(l: &OrthoLattice, a: Elem, b: Elem) -> Elem {
    l.try_join(a, b).expect("join exists in a lattice")
}

fn tf(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

pub fn check_poset(l: &OrthoLattice, opts: &CheckOptions) -> PropertyReport {
    let n = l.len();
    let found = scan(n, opts, |i, first| {
        let a = Elem(i);
        let mut out = Vec::new();
        if !l.leq(a, a) {
            out.push(witness(l, Law::Reflexivity, &[a], "false", "true"));
            if first {
                return out;
            }
        }
        for b in l.elements().skip(i + 1) {
            if l.leq(a, b) && l.leq(b, a) {
                out.push(witness(
                    l,
                    Law::Antisymmetry,
                    &[a, b],
                    l.label(a),
                    l.label(b),
                ));
                if first {
                    return out;
                }
            }
        }
        for b in l.elements() {
            if !l.leq(a, b) {
                continue;
            }
            for c in l.elements() {
                if l.leq(b, c) && !l.leq(a, c) {
                    out.push(witness(l, Law::Transitivity, &[a, b, c], "false", "true"));
                    if first {
                        return out;
                    }
                }
            }
        }
        out
    });
    PropertyReport::from_witnesses(Property::Poset, found)
}

pub fn check_lattice(l: &OrthoLattice, opts: &CheckOptions) -> PropertyReport {
    let found = scan(l.len(), opts, |i, first| {
        let a = Elem(i);
        let mut out = Vec::new();
        for b in l.elements().skip(i) {
            if l.try_meet(a, b).is_none() {
                out.push(witness(l, Law::MeetExists, &[a, b], "none", "required"));
            }
            if l.try_join(a, b).is_none() {
                out.push(witness(l, Law::JoinExists, &[a, b], "none", "required"));
            }
            if first && !out.is_empty() {
                break;
            }
        }
        out
    });
    PropertyReport::from_witnesses(Property::Lattice, found)
}

/// Involution, `a∨a⊥ = I`, `a∧a⊥ = 0` and order reversal.
pub fn check_orthocomplementation(l: &OrthoLattice, opts: &CheckOptions) -> PropertyReport {
    if let Some(why) = precondition(l, true) {
        return PropertyReport::skipped(Property::Orthocomplementation, why);
    }
    let (bottom, top) = (l.bottom().unwrap(), l.top().unwrap());
    let found = scan(l.len(), opts, |i, first| {
        let a = Elem(i);
        let ap = l.perp(a);
        let mut out = Vec::new();
        if l.perp(ap) != a {
            out.push(witness(
                l,
                Law::Involution,
                &[a],
                l.label(l.perp(ap)),
                l.label(a),
            ));
        }
        let jn = j(l, a, ap);
        if jn != top {
            out.push(witness(
                l,
                Law::ComplementJoin,
                &[a],
                l.label(jn),
                l.label(top),
            ));
        }
        let mt = m(l, a, ap);
        if mt != bottom {
            out.push(witness(
                l,
                Law::ComplementMeet,
                &[a],
                l.label(mt),
                l.label(bottom),
            ));
        }
        if first && !out.is_empty() {
            return out;
        }
        for b in l.elements() {
            if l.leq(a, b) && !l.leq(l.perp(b), ap) {
                out.push(witness(l, Law::OrderReversal, &[a, b], "false", "true"));
                if first {
                    break;
                }
            }
        }
        out
    });
    PropertyReport::from_witnesses(Property::Orthocomplementation, found)
}

pub fn check_demorgan(l: &OrthoLattice, opts: &CheckOptions) -> PropertyReport {
    if let Some(why) = precondition(l, true) {
        return PropertyReport::skipped(Property::DeMorgan, why);
    }
    let found = scan(l.len(), opts, |i, first| {
        let a = Elem(i);
        let mut out = Vec::new();
        for b in l.elements().skip(i) {
            let lhs = l.perp(m(l, a, b));
            let rhs = j(l, l.perp(a), l.perp(b));
            if lhs != rhs {
                out.push(witness(
                    l,
                    Law::DeMorganMeet,
                    &[a, b],
                    l.label(lhs),
                    l.label(rhs),
                ));
            }
            let lhs = l.perp(j(l, a, b));
            let rhs = m(l, l.perp(a), l.perp(b));
            if lhs != rhs {
                out.push(witness(
                    l,
                    Law::DeMorganJoin,
                    &[a, b],
                    l.label(lhs),
                    l.label(rhs),
                ));
            }
            if first && !out.is_empty() {
                break;
            }
        }
        out
    });
    PropertyReport::from_witnesses(Property::DeMorgan, found)
}

/// `a ≤ b ⇒ b = a ∨ (b ∧ a⊥)` over every comparable pair.
pub fn check_orthomodular(l: &OrthoLattice, opts: &CheckOptions) -> PropertyReport {
    if let Some(why) = precondition(l, true) {
        return PropertyReport::skipped(Property::Orthomodular, why);
    }
    let found = scan(l.len(), opts, |i, first| {
        let a = Elem(i);
        let mut out = Vec::new();
        for b in l.elements().filter(|&b| l.leq(a, b)) {
            let rhs = j(l, a, m(l, b, l.perp(a)));
            if rhs != b {
                out.push(witness(
                    l,
                    Law::Orthomodular,
                    &[a, b],
                    l.label(b),
                    l.label(rhs),
                ));
                if first {
                    break;
                }
            }
        }
        out
    });
    PropertyReport::from_witnesses(Property::Orthomodular, found)
}

/// `a ≤ c ⇒ a ∨ (b ∧ c) = (a ∨ b) ∧ c` over every triple.
pub fn check_modular(l: &OrthoLattice, opts: &CheckOptions) -> PropertyReport {
    if let Some(why) = precondition(l, false) {
        return PropertyReport::skipped(Property::Modular, why);
    }
    let found = scan(l.len(), opts, |i, first| {
        let a = Elem(i);
        let mut out = Vec::new();
        for c in l.elements().filter(|&c| l.leq(a, c)) {
            for b in l.elements() {
                let lhs = j(l, a, m(l, b, c));
                let rhs = m(l, j(l, a, b), c);
                if lhs != rhs {
                    out.push(witness(
                        l,
                        Law::Modular,
                        &[a, b, c],
                        l.label(lhs),
                        l.label(rhs),
                    ));
                    if first {
                        return out;
                    }
                }
            }
        }
        out
    });
    PropertyReport::from_witnesses(Property::Modular, found)
}

/// `a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c)` over every triple.
///
/// For each `a`, triples of the form `(a, b, b⊥)` are tried before the general
/// scan; these are the incompatibility counterexamples and the most readable
/// witnesses.
pub fn check_distributive(l: &OrthoLattice, opts: &CheckOptions) -> PropertyReport {
    if let Some(why) = precondition(l, false) {
        return PropertyReport::skipped(Property::Distributive, why);
    }
    let found = scan(l.len(), opts, |i, first| {
        let a = Elem(i);
        let mut out = Vec::new();
        let test = |b: Elem, c: Elem, out: &mut Vec<Witness>| {
            let lhs = m(l, a, j(l, b, c));
            let rhs = j(l, m(l, a, b), m(l, a, c));
            if lhs != rhs {
                out.push(witness(
                    l,
                    Law::Distributive,
                    &[a, b, c],
                    l.label(lhs),
                    l.label(rhs),
                ));
                true
            } else {
                false
            }
        };
        for b in l.elements() {
            if let Some(bp) = l.ortho(b) {
                if test(b, bp, &mut out) && first {
                    return out;
                }
            }
        }
        // symmetric in b and c, and trivial when they coincide
        for b in l.elements() {
            for c in (b.0 + 1..l.len()).map(Elem) {
                if l.ortho(b) == Some(c) || l.ortho(c) == Some(b) {
                    continue;
                }
                if test(b, c, &mut out) && first {
                    return out;
                }
            }
        }
        out
    });
    PropertyReport::from_witnesses(Property::Distributive, found)
}

pub fn check_atomic(l: &OrthoLattice, opts: &CheckOptions) -> PropertyReport {
    let Some(bottom) = l.bottom() else {
        return PropertyReport::skipped(Property::Atomic, "no bottom element");
    };
    let atoms = l.atoms();
    let found = scan(l.len(), opts, |i, _| {
        let a = Elem(i);
        if a != bottom && !atoms.iter().any(|&x| l.leq(x, a)) {
            vec![witness(l, Law::Atomic, &[a], "none", "atom")]
        } else {
            Vec::new()
        }
    });
    PropertyReport::from_witnesses(Property::Atomic, found)
}

/// For every `a` and atom `x ≰ a`, `a ∨ x` must cover `a`. The witness records
/// the join and the first element strictly between.
pub fn check_covering(l: &OrthoLattice, opts: &CheckOptions) -> PropertyReport {
    if let Some(why) = precondition(l, false) {
        return PropertyReport::skipped(Property::Covering, why);
    }
    let atoms = l.atoms();
    let found = scan(l.len(), opts, |i, first| {
        let a = Elem(i);
        let mut out = Vec::new();
        for &x in atoms.iter().filter(|&&x| !l.leq(x, a)) {
            let ax = j(l, a, x);
            if let Some(c) = l.elements().find(|&c| l.lt(a, c) && l.lt(c, ax)) {
                out.push(witness(l, Law::Covering, &[a, x], l.label(ax), l.label(c)));
                if first {
                    break;
                }
            }
        }
        out
    });
    PropertyReport::from_witnesses(Property::Covering, found)
}

/// `a = (a∧b)∨(a∧b⊥)` and `b = (b∧a)∨(b∧a⊥)`.
pub fn compatible(l: &OrthoLattice, a: Elem, b: Elem) -> Result<bool, LatticeError> {
    Ok(compatibility_defect(l, a, b)?.is_none())
}

/// The failing direction of the compatibility identity, as
/// `(x, y, (x∧y)∨(x∧y⊥))` with `x ≠ (x∧y)∨(x∧y⊥)`.
fn compatibility_defect(
    l: &OrthoLattice,
    a: Elem,
    b: Elem,
) -> Result<Option<(Elem, Elem, Elem)>, LatticeError> {
    if !l.has_ortho() {
        return Err(LatticeError::NoOrtho);
    }
    for (x, y) in [(a, b), (b, a)] {
        let yp = l.perp(y);
        let v = l.join(l.meet(x, y)?, l.meet(x, yp)?)?;
        if v != x {
            return Ok(Some((x, y, v)));
        }
    }
    Ok(None)
}

/// Passes iff every pair of elements is compatible.
pub fn check_compatible(l: &OrthoLattice, opts: &CheckOptions) -> PropertyReport {
    if let Some(why) = precondition(l, true) {
        return PropertyReport::skipped(Property::Compatible, why);
    }
    let found = scan(l.len(), opts, |i, first| {
        let a = Elem(i);
        let mut out = Vec::new();
        for b in l.elements().skip(i + 1) {
            if let Some((x, y, v)) = compatibility_defect(l, a, b).expect("checked lattice") {
                out.push(witness(l, Law::Compatible, &[x, y], l.label(x), l.label(v)));
                if first {
                    break;
                }
            }
        }
        out
    });
    PropertyReport::from_witnesses(Property::Compatible, found)
}

pub fn check(l: &OrthoLattice, property: Property, opts: &CheckOptions) -> Option<PropertyReport> {
    Some(match property {
        Property::Poset => check_poset(l, opts),
        Property::Lattice => check_lattice(l, opts),
        Property::Orthocomplementation => check_orthocomplementation(l, opts),
        Property::DeMorgan => check_demorgan(l, opts),
        Property::Orthomodular => check_orthomodular(l, opts),
        Property::Modular => check_modular(l, opts),
        Property::Distributive => check_distributive(l, opts),
        Property::Atomic => check_atomic(l, opts),
        Property::Covering => check_covering(l, opts),
        Property::Compatible => check_compatible(l, opts),
        Property::Embedding => return None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    /// Distributive ortholattice.
    Boolean,
    ModularOrtholattice,
    Orthomodular,
    NotOrthomodular,
    NotOrtholattice,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Boolean => "Boolean (distributive)",
            Classification::ModularOrtholattice => "modular ortholattice",
            Classification::Orthomodular => "orthomodular",
            Classification::NotOrthomodular => "not orthomodular",
            Classification::NotOrtholattice => "not an ortholattice",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FullReport {
    pub lattice: String,
    pub elements: usize,
    pub atoms: usize,
    pub classification: Classification,
    pub reports: Vec<PropertyReport>,
}

impl FullReport {
    pub fn get(&self, property: Property) -> Option<&PropertyReport> {
        self.reports.iter().find(|r| r.property == property)
    }

    pub fn passed(&self, property: Property) -> bool {
        self.get(property).is_some_and(PropertyReport::passed)
    }
}

impl fmt::Display for FullReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "lattice {} ({} elements, {} atoms)",
            self.lattice, self.elements, self.atoms
        )?;
        for r in &self.reports {
            writeln!(f, "{r}")?;
        }
        write!(f, "classification: {}", self.classification)
    }
}

/// Runs every lattice checker and classifies the result.
pub fn full_report(l: &OrthoLattice, opts: &CheckOptions) -> FullReport {
    let reports: Vec<PropertyReport> = Property::LATTICE_LAWS
        .iter()
        .filter_map(|&p| check(l, p, opts))
        .collect();
    let pass = |p: Property| reports.iter().any(|r| r.property == p && r.passed());
    let classification = if !(pass(Property::Poset)
        && pass(Property::Lattice)
        && pass(Property::Orthocomplementation))
    {
        Classification::NotOrtholattice
    } else if pass(Property::Distributive) {
        Classification::Boolean
    } else if pass(Property::Modular) {
        Classification::ModularOrtholattice
    } else if pass(Property::Orthomodular) {
        Classification::Orthomodular
    } else {
        Classification::NotOrthomodular
    };
    FullReport {
        lattice: l.name().to_string(),
        elements: l.len(),
        atoms: l.atoms().len(),
        classification,
        reports,
    }
}

/// Re-evaluates a witness from its labels, returning the recomputed
/// `(lhs, rhs)`. Embedding witnesses cannot be replayed from the lattice
/// alone and yield `None`, as do witnesses naming unknown elements.
pub fn replay(l: &OrthoLattice, w: &Witness) -> Option<(String, String)> {
    let e: Vec<Elem> = w
        .elements
        .iter()
        .map(|s| l.elem(s))
        .collect::<Result<_, _>>()
        .ok()?;
    let lab = |x: Elem| l.label(x).to_string();
    let meet = |a: Elem, b: Elem| l.try_meet(a, b);
    let join = |a: Elem, b: Elem| l.try_join(a, b);
    let perp = |a: Elem| l.ortho(a);
    let pair = |a: String, b: String| Some((a, b));
    match w.law {
        Law::Reflexivity => pair(tf(l.leq(e[0], e[0])).into(), "true".into()),
        Law::Antisymmetry => {
            (l.leq(e[0], e[1]) && l.leq(e[1], e[0])).then(|| (lab(e[0]), lab(e[1])))
        }
        Law::Transitivity => (l.leq(e[0], e[1]) && l.leq(e[1], e[2]))
            .then(|| (tf(l.leq(e[0], e[2])).into(), "true".into())),
        Law::MeetExists => pair(
            meet(e[0], e[1]).map_or("none".into(), lab),
            "required".into(),
        ),
        Law::JoinExists => pair(
            join(e[0], e[1]).map_or("none".into(), lab),
            "required".into(),
        ),
        Law::Involution => pair(lab(perp(perp(e[0])?)?), lab(e[0])),
        Law::ComplementJoin => pair(lab(join(e[0], perp(e[0])?)?), lab(l.top()?)),
        Law::ComplementMeet => pair(lab(meet(e[0], perp(e[0])?)?), lab(l.bottom()?)),
        Law::OrderReversal => l
            .leq(e[0], e[1])
            .then(|| Some((tf(l.leq(perp(e[1])?, perp(e[0])?)).into(), "true".into())))?,
        Law::DeMorganMeet => pair(
            lab(perp(meet(e[0], e[1])?)?),
            lab(join(perp(e[0])?, perp(e[1])?)?),
        ),
        Law::DeMorganJoin => pair(
            lab(perp(join(e[0], e[1])?)?),
            lab(meet(perp(e[0])?, perp(e[1])?)?),
        ),
        Law::Orthomodular => l
            .leq(e[0], e[1])
            .then(|| Some((lab(e[1]), lab(join(e[0], meet(e[1], perp(e[0])?)?)?))))?,
        Law::Modular => l.leq(e[0], e[2]).then(|| {
            Some((
                lab(join(e[0], meet(e[1], e[2])?)?),
                lab(meet(join(e[0], e[1])?, e[2])?),
            ))
        })?,
        Law::Distributive => pair(
            lab(meet(e[0], join(e[1], e[2])?)?),
            lab(join(meet(e[0], e[1])?, meet(e[0], e[2])?)?),
        ),
        Law::Atomic => pair(
            if l.atoms_below(e[0]).is_empty() {
                "none".into()
            } else {
                "present".into()
            },
            "atom".into(),
        ),
        Law::Covering => {
            let ax = join(e[0], e[1])?;
            let between = l.elements().find(|&c| l.lt(e[0], c) && l.lt(c, ax))?;
            pair(lab(ax), lab(between))
        }
        Law::Compatible => pair(
            lab(e[0]),
            lab(join(meet(e[0], e[1])?, meet(e[0], perp(e[1])?)?)?),
        ),
        Law::EmbedInjective
        | Law::EmbedOrder
        | Law::EmbedMeet
        | Law::EmbedJoin
        | Law::EmbedComplement => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn labels(w: &Witness) -> Vec<&str> {
        w.elements.iter().map(String::as_str).collect()
    }

    #[test]
    fn spin_half_distributive_witness_is_complemented_triple() {
        let l = catalog::spin_half_lattice();
        let r = check_distributive(&l, &CheckOptions::default());
        assert_eq!(r.verdict, Verdict::Fail);
        let w = &r.witnesses[0];
        assert_eq!(labels(w), ["p", "r", "s"]);
        assert_eq!((w.lhs.as_str(), w.rhs.as_str()), ("p", "0"));
        assert_eq!(w.to_string(), "p,r,s: p∧(r∨s) = p, (p∧r)∨(p∧s) = 0");
    }

    #[test]
    fn reflexivity_failure_is_witnessed() {
        let leq = vec![vec![true, true], vec![false, false]];
        let l = OrthoLattice::from_relation("broken", &["0", "I"], &leq, None).unwrap();
        let r = check_poset(&l, &CheckOptions::default());
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.witnesses[0].law, Law::Reflexivity);
        assert_eq!(labels(&r.witnesses[0]), ["I"]);
    }

    #[test]
    fn transitivity_failure_is_witnessed() {
        let leq = vec![
            vec![true, true, false],
            vec![false, true, true],
            vec![false, false, true],
        ];
        let l = OrthoLattice::from_relation("broken", &["a", "b", "c"], &leq, None).unwrap();
        let r = check_poset(&l, &CheckOptions::default());
        assert_eq!(r.witnesses[0].law, Law::Transitivity);
        assert_eq!(labels(&r.witnesses[0]), ["a", "b", "c"]);
        assert_eq!(
            replay(&l, &r.witnesses[0]),
            Some(("false".into(), "true".into()))
        );
    }

    #[test]
    fn missing_top_fails_lattice_check() {
        // 0 < a, 0 < b, 0 < c < b; a and b maximal
        let t = true;
        let f = false;
        let leq = vec![
            vec![t, t, t, t],
            vec![f, t, f, f],
            vec![f, f, t, f],
            vec![f, f, t, t],
        ];
        let l = OrthoLattice::from_relation("vee", &["0", "a", "b", "c"], &leq, None).unwrap();
        let r = check_lattice(&l, &CheckOptions::default());
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.witnesses[0].law, Law::JoinExists);
        assert_eq!(labels(&r.witnesses[0]), ["a", "b"]);
        // the other checkers need a lattice
        assert_eq!(
            check_modular(&l, &CheckOptions::default()).verdict,
            Verdict::Skipped
        );
    }

    #[test]
    fn self_complemented_chain_fails_complement_laws() {
        let t = true;
        let f = false;
        let leq = vec![vec![t, t, t], vec![f, t, t], vec![f, f, t]];
        let l = OrthoLattice::from_relation("chain", &["0", "p", "I"], &leq, Some(vec![2, 1, 0]))
            .unwrap();
        let r = check_orthocomplementation(&l, &CheckOptions::all_witnesses());
        assert_eq!(r.verdict, Verdict::Fail);
        let laws: Vec<Law> = r.witnesses.iter().map(|w| w.law).collect();
        assert_eq!(laws, [Law::ComplementJoin, Law::ComplementMeet]);
        assert_eq!(labels(&r.witnesses[0]), ["p"]);
        assert_eq!(r.witnesses[1].lhs, "p");
    }

    #[test]
    fn pentagon_is_not_modular() {
        let l = catalog::pentagon();
        let r = check_modular(&l, &CheckOptions::default());
        assert_eq!(r.verdict, Verdict::Fail);
        let w = &r.witnesses[0];
        assert_eq!(replay(&l, w), Some((w.lhs.clone(), w.rhs.clone())));
        // plain lattice: ortho-dependent checks are skipped, not failed
        assert_eq!(
            check_orthomodular(&l, &CheckOptions::default()).verdict,
            Verdict::Skipped
        );
        assert_eq!(
            full_report(&l, &CheckOptions::default()).classification,
            Classification::NotOrtholattice
        );
    }

    #[test]
    fn hexagon_fails_orthomodularity_with_expected_witness() {
        let l = catalog::hexagon();
        let r = check_orthomodular(&l, &CheckOptions::default());
        assert_eq!(r.verdict, Verdict::Fail);
        let w = &r.witnesses[0];
        assert_eq!(labels(w), ["a", "b"]);
        assert_eq!((w.lhs.as_str(), w.rhs.as_str()), ("b", "a"));
        assert!(check_demorgan(&l, &CheckOptions::default()).passed());
        assert!(check_orthocomplementation(&l, &CheckOptions::default()).passed());
    }

    #[test]
    fn hexagon_covering_golden() {
        // atoms of O6 are a and b'; a ∨ b' = I, but a < b < I
        let l = catalog::hexagon();
        let r = check_covering(&l, &CheckOptions::default());
        assert_eq!(r.verdict, Verdict::Fail);
        let w = &r.witnesses[0];
        assert_eq!(labels(w), ["a", "b'"]);
        assert_eq!((w.lhs.as_str(), w.rhs.as_str()), ("I", "b"));
    }

    #[test]
    fn compatibility_on_spin_half() {
        let l = catalog::spin_half_lattice();
        let e = |s| l.elem(s).unwrap();
        assert!(compatible(&l, e("p"), e("q")).unwrap());
        assert!(!compatible(&l, e("p"), e("r")).unwrap());
        for a in l.elements() {
            assert!(compatible(&l, a, a).unwrap());
        }
    }

    #[test]
    fn job_count_does_not_change_witnesses() {
        let l = catalog::hexagon();
        for p in Property::LATTICE_LAWS {
            let one = check(&l, p, &CheckOptions::all_witnesses()).unwrap();
            for jobs in [2, 3, 8] {
                let opts = CheckOptions {
                    witnesses: WitnessPolicy::All,
                    jobs,
                };
                assert_eq!(check(&l, p, &opts).unwrap(), one, "{p} with {jobs} jobs");
                let opts = CheckOptions {
                    witnesses: WitnessPolicy::First,
                    jobs,
                };
                assert_eq!(
                    check(&l, p, &opts).unwrap().witnesses.first(),
                    one.witnesses.first()
                );
            }
        }
    }

    #[test]
    fn property_names_round_trip() {
        for p in Property::LATTICE_LAWS {
            assert_eq!(p.name().parse::<Property>().unwrap(), p);
        }
        assert_eq!("DeMorgan".parse::<Property>().unwrap(), Property::DeMorgan);
        assert!("bogus".parse::<Property>().is_err());
    }
}
