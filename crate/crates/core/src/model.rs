//! Experiment models: a universe of manifold labels and mutually exclusive
//! experiments, each partitioning its support into outcomes.
//!
//! Compilation turns every experiment into the Boolean algebra of its outcome
//! events and glues the blocks together at `0` (the empty events) and `I`
//! (the full supports). Complements are taken relative to the experiment's
//! own support. Declared equivalences identify further events; the result is
//! re-validated and rejected if the identification breaks the order or the
//! complement laws.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::checks::{check_lattice, check_orthocomplementation, CheckOptions};
use crate::lattice::{build_lattice, LatticeError, OrthoLattice, BOTTOM, TOP};

/// Largest outcome count per experiment; the event algebra has `2^k` elements.
pub const MAX_OUTCOMES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("experiments `{first}` and `{second}` share manifold `{manifold}`")]
    OverlappingExperiments {
        first: String,
        second: String,
        manifold: String,
    },
    #[error("outcomes `{first}` and `{second}` of experiment `{experiment}` share manifold `{manifold}`")]
    OverlappingOutcomes {
        experiment: String,
        first: String,
        second: String,
        manifold: String,
    },
    #[error("outcome `{outcome}` of experiment `{experiment}` has no manifolds")]
    EmptyOutcome { experiment: String, outcome: String },
    #[error("experiment `{experiment}` needs at least two outcomes")]
    TooFewOutcomes { experiment: String },
    #[error("experiment `{experiment}` has more than {MAX_OUTCOMES} outcomes")]
    TooManyOutcomes { experiment: String },
    #[error("manifold `{0}` is not in the universe")]
    UnknownManifold(String),
    #[error("duplicate manifold `{0}` in the universe")]
    DuplicateManifold(String),
    #[error("duplicate experiment `{0}`")]
    DuplicateExperiment(String),
    #[error("duplicate outcome `{outcome}` in experiment `{experiment}`")]
    DuplicateOutcome { experiment: String, outcome: String },
    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),
    #[error("unknown event `{0}`")]
    UnknownEvent(String),
    #[error("invalid name `{0}`")]
    InvalidName(String),
    #[error("model has no experiments")]
    NoExperiments,
    #[error("need at least two experiments")]
    NeedTwoExperiments,
    #[error("equivalence clash: {0}")]
    EquivalenceClash(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ManifoldId(pub String);

impl fmt::Display for ManifoldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ManifoldId {
    fn from(s: &str) -> Self {
        ManifoldId(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub label: String,
    pub manifolds: BTreeSet<ManifoldId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Experiment {
    pub name: String,
    pub outcomes: Vec<Outcome>,
}

impl Experiment {
    pub fn new<S: AsRef<str>>(name: &str, outcomes: &[(&str, &[S])]) -> Self {
        Experiment {
            name: name.to_string(),
            outcomes: outcomes
                .iter()
                .map(|(label, ms)| Outcome {
                    label: label.to_string(),
                    manifolds: ms
                        .iter()
                        .map(|m| ManifoldId(m.as_ref().to_string()))
                        .collect(),
                })
                .collect(),
        }
    }

    /// An experiment whose outcomes each get one fresh manifold, named
    /// `<experiment><outcome>`.
    pub fn minimal(name: &str, outcomes: &[&str]) -> Self {
        Experiment {
            name: name.to_string(),
            outcomes: outcomes
                .iter()
                .map(|o| Outcome {
                    label: o.to_string(),
                    manifolds: BTreeSet::from([ManifoldId(format!("{name}{o}"))]),
                })
                .collect(),
        }
    }

    /// Union of the outcome sets.
    pub fn support(&self) -> BTreeSet<ManifoldId> {
        self.outcomes
            .iter()
            .flat_map(|o| o.manifolds.iter().cloned())
            .collect()
    }

    fn outcome_index(&self, label: &str) -> Option<usize> {
        self.outcomes.iter().position(|o| o.label == label)
    }
}

/// A set of outcomes of one experiment, written `X.{+}` or `X.{a,b}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EventRef {
    pub experiment: String,
    pub outcomes: Vec<String>,
}

impl EventRef {
    pub fn new(experiment: &str, outcomes: &[&str]) -> Self {
        EventRef {
            experiment: experiment.to_string(),
            outcomes: outcomes.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl fmt::Display for EventRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{{{}}}", self.experiment, self.outcomes.join(","))
    }
}

impl std::str::FromStr for EventRef {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (exp, rest) = s
            .split_once(".{")
            .ok_or_else(|| format!("event `{s}` is not of the form NAME.{{outcomes}}"))?;
        let inner = rest
            .strip_suffix('}')
            .ok_or_else(|| format!("event `{s}` is missing a closing brace"))?;
        let outcomes = inner
            .split(',')
            .map(str::trim)
            .filter(|o| !o.is_empty())
            .map(str::to_string)
            .collect();
        Ok(EventRef {
            experiment: exp.trim().to_string(),
            outcomes,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equivalence(pub EventRef, pub EventRef);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentModel {
    pub name: String,
    pub universe: Vec<ManifoldId>,
    pub experiments: Vec<Experiment>,
    pub equivalences: Vec<Equivalence>,
}

fn valid_name(s: &str, extra: &[char]) -> bool {
    !s.is_empty()
        && !s.chars().any(|c| {
            c.is_whitespace()
                || matches!(c, '<' | ':' | '#' | '"' | ',' | '{' | '}' | '=')
                || extra.contains(&c)
        })
}

/// Validates a model. When `universe` is `None` it is the union of all outcome
/// sets in declaration order.
pub fn build_model(
    name: &str,
    universe: Option<Vec<ManifoldId>>,
    experiments: Vec<Experiment>,
    equivalences: Vec<Equivalence>,
) -> Result<ExperimentModel, ModelError> {
    let universe = match universe {
        Some(u) => {
            let mut seen = HashSet::new();
            for m in &u {
                if !seen.insert(m) {
                    return Err(ModelError::DuplicateManifold(m.0.clone()));
                }
            }
            u
        }
        None => {
            let mut seen = HashSet::new();
            experiments
                .iter()
                .flat_map(|e| e.outcomes.iter().flat_map(|o| o.manifolds.iter()))
                .filter(|m| seen.insert(*m))
                .cloned()
                .collect()
        }
    };
    let in_universe: HashSet<&ManifoldId> = universe.iter().collect();

    let mut names = HashSet::new();
    for e in &experiments {
        if !valid_name(&e.name, &['.']) {
            return Err(ModelError::InvalidName(e.name.clone()));
        }
        if !names.insert(e.name.as_str()) {
            return Err(ModelError::DuplicateExperiment(e.name.clone()));
        }
        if e.outcomes.len() < 2 {
            return Err(ModelError::TooFewOutcomes {
                experiment: e.name.clone(),
            });
        }
        if e.outcomes.len() > MAX_OUTCOMES {
            return Err(ModelError::TooManyOutcomes {
                experiment: e.name.clone(),
            });
        }
        let mut labels = HashSet::new();
        for (i, o) in e.outcomes.iter().enumerate() {
            if !valid_name(&o.label, &[]) {
                return Err(ModelError::InvalidName(o.label.clone()));
            }
            if !labels.insert(o.label.as_str()) {
                return Err(ModelError::DuplicateOutcome {
                    experiment: e.name.clone(),
                    outcome: o.label.clone(),
                });
            }
            if o.manifolds.is_empty() {
                return Err(ModelError::EmptyOutcome {
                    experiment: e.name.clone(),
                    outcome: o.label.clone(),
                });
            }
            if let Some(m) = o.manifolds.iter().find(|m| !in_universe.contains(m)) {
                return Err(ModelError::UnknownManifold(m.0.clone()));
            }
            for other in &e.outcomes[..i] {
                if let Some(m) = o.manifolds.intersection(&other.manifolds).next() {
                    return Err(ModelError::OverlappingOutcomes {
                        experiment: e.name.clone(),
                        first: other.label.clone(),
                        second: o.label.clone(),
                        manifold: m.0.clone(),
                    });
                }
            }
        }
    }
    let supports: Vec<BTreeSet<ManifoldId>> = experiments.iter().map(Experiment::support).collect();
    for i in 0..experiments.len() {
        for k in 0..i {
            if let Some(m) = supports[i].intersection(&supports[k]).next() {
                return Err(ModelError::OverlappingExperiments {
                    first: experiments[k].name.clone(),
                    second: experiments[i].name.clone(),
                    manifold: m.0.clone(),
                });
            }
        }
    }
    let model = ExperimentModel {
        name: name.to_string(),
        universe,
        experiments,
        equivalences,
    };
    for Equivalence(a, b) in &model.equivalences {
        model.resolve(a)?;
        model.resolve(b)?;
    }
    Ok(model)
}

impl ExperimentModel {
    /// Validated model with one fresh manifold per outcome.
    pub fn minimal(name: &str, experiments: &[(&str, &[&str])]) -> Result<Self, ModelError> {
        build_model(
            name,
            None,
            experiments
                .iter()
                .map(|(n, outcomes)| Experiment::minimal(n, outcomes))
                .collect(),
            Vec::new(),
        )
    }

    pub fn experiment(&self, name: &str) -> Result<&Experiment, ModelError> {
        self.experiments
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| ModelError::UnknownExperiment(name.to_string()))
    }

    fn resolve(&self, ev: &EventRef) -> Result<(usize, u32), ModelError> {
        let block = self
            .experiments
            .iter()
            .position(|e| e.name == ev.experiment)
            .ok_or_else(|| ModelError::UnknownEvent(ev.to_string()))?;
        let mut mask = 0u32;
        for o in &ev.outcomes {
            let i = self.experiments[block]
                .outcome_index(o)
                .ok_or_else(|| ModelError::UnknownEvent(ev.to_string()))?;
            mask |= 1 << i;
        }
        Ok((block, mask))
    }

    /// Manifolds realising an event.
    pub fn event_set(&self, ev: &EventRef) -> Result<BTreeSet<ManifoldId>, ModelError> {
        let (block, mask) = self.resolve(ev)?;
        Ok(self.experiments[block]
            .outcomes
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .flat_map(|(_, o)| o.manifolds.iter().cloned())
            .collect())
    }
}

/// Events of one experiment ordered by size, then lexicographically by
/// outcome index.
fn block_masks(k: usize) -> Vec<u32> {
    let mut masks: Vec<u32> = (0..1u32 << k).collect();
    masks.sort_by_key(|&m| {
        let idx: Vec<u32> = (0..k as u32).filter(|i| m >> i & 1 == 1).collect();
        (m.count_ones(), idx)
    });
    masks
}

fn event_of(e: &Experiment, mask: u32) -> EventRef {
    EventRef {
        experiment: e.name.clone(),
        outcomes: e
            .outcomes
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, o)| o.label.clone())
            .collect(),
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut c = x;
        while self.0[c] != r {
            let next = self.0[c];
            self.0[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        // keep the earlier node as representative so labels follow declaration order
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi] = lo;
    }
}

struct Compiled {
    lattice: OrthoLattice,
    classes: Vec<(EventRef, String)>,
}

fn compile(
    lattice_name: &str,
    model: &ExperimentModel,
    blocks: &[usize],
    equivalences: &[Equivalence],
) -> Result<Compiled, ModelError> {
    if blocks.is_empty() {
        return Err(ModelError::NoExperiments);
    }
    // nodes: every event of every selected block
    let mut nodes: Vec<(usize, u32)> = Vec::new();
    let mut offsets: Vec<(usize, usize, u32)> = Vec::new();
    let mut lookup: Vec<Vec<usize>> = Vec::new();
    for &b in blocks {
        let k = model.experiments[b].outcomes.len();
        let full = (1u32 << k) - 1;
        let mut pos = vec![0; 1 << k];
        for mask in block_masks(k) {
            pos[mask as usize] = nodes.len();
            nodes.push((b, mask));
        }
        offsets.push((b, k, full));
        lookup.push(pos);
    }
    let slot = |b: usize| blocks.iter().position(|&x| x == b);
    let node_of = |b: usize, mask: u32| lookup[slot(b).unwrap()][mask as usize];
    let complement = |node: usize| {
        let (b, mask) = nodes[node];
        let (_, _, full) = offsets[slot(b).unwrap()];
        node_of(b, full & !mask)
    };

    let mut uf = UnionFind((0..nodes.len()).collect());
    let zero = node_of(blocks[0], 0);
    let one = node_of(blocks[0], offsets[0].2);
    for &(b, _, full) in &offsets {
        uf.union(zero, node_of(b, 0));
        uf.union(one, node_of(b, full));
    }
    for Equivalence(x, y) in equivalences {
        let (bx, mx) = model.resolve(x)?;
        let (by, my) = model.resolve(y)?;
        if slot(bx).is_none() || slot(by).is_none() {
            continue;
        }
        let (nx, ny) = (node_of(bx, mx), node_of(by, my));
        uf.union(nx, ny);
        uf.union(complement(nx), complement(ny));
    }
    let (zero_root, one_root) = (uf.find(zero), uf.find(one));
    if zero_root == one_root {
        return Err(ModelError::EquivalenceClash(
            "0 is identified with I".into(),
        ));
    }
    for (node, &(b, mask)) in nodes.iter().enumerate() {
        let (_, _, full) = offsets[slot(b).unwrap()];
        let root = uf.find(node);
        let ev = event_of(&model.experiments[b], mask);
        if mask != 0 && root == zero_root {
            return Err(ModelError::EquivalenceClash(format!(
                "{ev} is identified with 0"
            )));
        }
        if mask != full && root == one_root {
            return Err(ModelError::EquivalenceClash(format!(
                "{ev} is identified with I"
            )));
        }
    }

    // one element per class: 0 first, I last, the rest by first member
    let mut class_label: Vec<Option<String>> = vec![None; nodes.len()];
    let mut elements = vec![BOTTOM.to_string()];
    class_label[zero_root] = Some(BOTTOM.to_string());
    class_label[one_root] = Some(TOP.to_string());
    for (node, &(b, mask)) in nodes.iter().enumerate() {
        let root = uf.find(node);
        if class_label[root].is_none() {
            let label = event_of(&model.experiments[b], mask).to_string();
            elements.push(label.clone());
            class_label[root] = Some(label);
        }
    }
    elements.push(TOP.to_string());
    let mut label_of = |node: usize| class_label[uf.find(node)].clone().unwrap();

    let mut order = Vec::new();
    let mut ortho = Vec::new();
    let mut classes = Vec::new();
    for (node, &(b, mask)) in nodes.iter().enumerate() {
        let (_, k, _) = offsets[slot(b).unwrap()];
        let here = label_of(node);
        for i in 0..k {
            if mask >> i & 1 == 0 {
                order.push((here.clone(), label_of(node_of(b, mask | 1 << i))));
            }
        }
        let there = label_of(complement(node));
        if here == there {
            return Err(ModelError::EquivalenceClash(format!(
                "{} would be its own complement",
                event_of(&model.experiments[b], mask)
            )));
        }
        ortho.push((here.clone(), there));
        classes.push((event_of(&model.experiments[b], mask), here));
    }

    let lattice = build_lattice(lattice_name, &elements, &order, &ortho).map_err(|e| match e {
        LatticeError::Cycle(a, b) => {
            ModelError::EquivalenceClash(format!("order cycle between {a} and {b}"))
        }
        LatticeError::ConflictingComplement { element, .. } => {
            ModelError::EquivalenceClash(format!("{element} has two complements"))
        }
        other => ModelError::Lattice(other),
    })?;
    if !equivalences.is_empty() {
        let opts = CheckOptions::default();
        for report in [
            check_lattice(&lattice, &opts),
            check_orthocomplementation(&lattice, &opts),
        ] {
            if !report.passed() {
                let detail = report
                    .witnesses
                    .first()
                    .map(|w| w.to_string())
                    .unwrap_or_else(|| report.note.clone().unwrap_or_default());
                return Err(ModelError::EquivalenceClash(format!(
                    "quotient fails {}: {detail}",
                    report.property
                )));
            }
        }
    }
    Ok(Compiled { lattice, classes })
}

/// Horizontal sum of the experiments' event algebras, quotiented by the
/// model's equivalences.
pub fn proposition_lattice(model: &ExperimentModel) -> Result<OrthoLattice, ModelError> {
    let blocks: Vec<usize> = (0..model.experiments.len()).collect();
    Ok(compile(&model.name, model, &blocks, &model.equivalences)?.lattice)
}

/// The full event algebra of a single experiment.
pub fn classical_lattice(
    model: &ExperimentModel,
    experiment: &str,
) -> Result<OrthoLattice, ModelError> {
    let b = model
        .experiments
        .iter()
        .position(|e| e.name == experiment)
        .ok_or_else(|| ModelError::UnknownExperiment(experiment.to_string()))?;
    Ok(compile(&format!("{}_{}", model.name, experiment), model, &[b], &[])?.lattice)
}

/// The quotient map from events to lattice element labels, in node order
/// (experiments in declaration order, events by size).
pub fn equivalence_classes(model: &ExperimentModel) -> Result<Vec<(EventRef, String)>, ModelError> {
    let blocks: Vec<usize> = (0..model.experiments.len()).collect();
    Ok(compile(&model.name, model, &blocks, &model.equivalences)?.classes)
}

/// Set-level form of the distributivity failure for a pair of experiments:
/// `P+ ≠ (P+ ∩ Q+) ∪ (P+ ∩ Q-)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetInequality {
    pub p_plus: EventRef,
    pub q_plus: EventRef,
    pub q_minus: EventRef,
    pub p_plus_set: BTreeSet<ManifoldId>,
    pub with_q_plus: BTreeSet<ManifoldId>,
    pub with_q_minus: BTreeSet<ManifoldId>,
    pub union: BTreeSet<ManifoldId>,
    pub differs: bool,
}

fn fmt_set(s: &BTreeSet<ManifoldId>) -> String {
    let items: Vec<&str> = s.iter().map(|m| m.0.as_str()).collect();
    format!("{{{}}}", items.join(", "))
}

impl fmt::Display for SetInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p, qp, qm) = (&self.p_plus, &self.q_plus, &self.q_minus);
        writeln!(f, "P+ = {p} = {}", fmt_set(&self.p_plus_set))?;
        writeln!(f, "P+ ∩ Q+ = {p} ∩ {qp} = {}", fmt_set(&self.with_q_plus))?;
        writeln!(f, "P+ ∩ Q- = {p} ∩ {qm} = {}", fmt_set(&self.with_q_minus))?;
        write!(
            f,
            "(P+ ∩ Q+) ∪ (P+ ∩ Q-) = {} {} P+",
            fmt_set(&self.union),
            if self.differs { "≠" } else { "=" }
        )
    }
}

/// The set inequality for experiments `p` and `q` (by index). `P+` and `Q+`
/// are the first declared outcomes; `Q-` is the rest of `Q`'s support.
pub fn set_inequality(
    model: &ExperimentModel,
    p: usize,
    q: usize,
) -> Result<SetInequality, ModelError> {
    let exp = |i: usize| {
        model
            .experiments
            .get(i)
            .ok_or_else(|| ModelError::UnknownExperiment(format!("#{i}")))
    };
    let (pe, qe) = (exp(p)?, exp(q)?);
    let p_plus = EventRef::new(&pe.name, &[pe.outcomes[0].label.as_str()]);
    let q_plus = EventRef::new(&qe.name, &[qe.outcomes[0].label.as_str()]);
    let rest: Vec<&str> = qe.outcomes[1..].iter().map(|o| o.label.as_str()).collect();
    let q_minus = EventRef::new(&qe.name, &rest);
    let p_plus_set = model.event_set(&p_plus)?;
    let with_q_plus: BTreeSet<ManifoldId> = p_plus_set
        .intersection(&model.event_set(&q_plus)?)
        .cloned()
        .collect();
    let with_q_minus: BTreeSet<ManifoldId> = p_plus_set
        .intersection(&model.event_set(&q_minus)?)
        .cloned()
        .collect();
    let union: BTreeSet<ManifoldId> = with_q_plus.union(&with_q_minus).cloned().collect();
    let differs = union != p_plus_set;
    Ok(SetInequality {
        p_plus,
        q_plus,
        q_minus,
        p_plus_set,
        with_q_plus,
        with_q_minus,
        union,
        differs,
    })
}

/// [`set_inequality`] for the first two experiments.
pub fn distributivity_witness_sets(model: &ExperimentModel) -> Result<SetInequality, ModelError> {
    if model.experiments.len() < 2 {
        return Err(ModelError::NeedTwoExperiments);
    }
    set_inequality(model, 0, 1)
}
