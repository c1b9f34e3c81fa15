//! Standard small lattices and models, plus a seeded random model generator.

use std::ops::RangeInclusive;

use rand::Rng;

use crate::lattice::{build_lattice, build_plain_lattice, OrthoLattice};
use crate::model::{build_model, Experiment, ExperimentModel};

/// The six-element spin-half lattice with atoms `p, q, r, s` (`p⊥ = q`, `r⊥ = s`).
pub fn spin_half_lattice() -> OrthoLattice {
    build_lattice(
        "spin_half",
        &["0", "p", "q", "r", "s", "I"],
        &[
            ("0", "p"),
            ("p", "I"),
            ("0", "q"),
            ("q", "I"),
            ("0", "r"),
            ("r", "I"),
            ("0", "s"),
            ("s", "I"),
        ],
        &[("p", "q"), ("r", "s")],
    )
    .expect("spin-half lattice is well formed")
}

/// Two two-outcome experiments `X` and `Y` on the universe `m1..m4`.
pub fn spin_half_model() -> ExperimentModel {
    build_model(
        "spin_half",
        Some(["m1", "m2", "m3", "m4"].map(Into::into).to_vec()),
        vec![
            Experiment::new("X", &[("+", &["m1"][..]), ("-", &["m2"][..])]),
            Experiment::new("Y", &[("+", &["m3"][..]), ("-", &["m4"][..])]),
        ],
        Vec::new(),
    )
    .expect("spin-half model is well formed")
}

/// `n` two-outcome experiments `X`, `Y`, `Z`, then `E4`, `E5`, ...
pub fn mo_model(n: usize) -> ExperimentModel {
    let names: Vec<String> = (0..n)
        .map(|i| match i {
            0 => "X".to_string(),
            1 => "Y".to_string(),
            2 => "Z".to_string(),
            _ => format!("E{}", i + 1),
        })
        .collect();
    let experiments: Vec<(&str, &[&str])> = names
        .iter()
        .map(|s| (s.as_str(), &["+", "-"][..]))
        .collect();
    ExperimentModel::minimal(&format!("mo{n}"), &experiments).expect("MO model is well formed")
}

/// The Boolean algebra of subsets of `{1..n}`, labelled `{1,3}` etc.
pub fn boolean(n: usize) -> OrthoLattice {
    let full = (1u32 << n) - 1;
    let mut masks: Vec<u32> = (0..=full).collect();
    let members = |m: u32| (0..n).filter(|i| m >> i & 1 == 1).collect::<Vec<_>>();
    masks.sort_by_key(|&m| (m.count_ones(), members(m)));
    let label = |m: u32| -> String {
        if m == 0 {
            "0".into()
        } else if m == full {
            "I".into()
        } else {
            let items: Vec<String> = members(m).iter().map(|i| (i + 1).to_string()).collect();
            format!("{{{}}}", items.join(","))
        }
    };
    let elements: Vec<String> = masks.iter().map(|&m| label(m)).collect();
    let mut order = Vec::new();
    let mut ortho = Vec::new();
    for &m in &masks {
        for i in 0..n {
            if m >> i & 1 == 0 {
                order.push((label(m), label(m | 1 << i)));
            }
        }
        if m != 0 && m != full {
            ortho.push((label(m), label(full & !m)));
        }
    }
    build_lattice(&format!("boolean{n}"), &elements, &order, &ortho)
        .expect("Boolean algebra is well formed")
}

/// The orthocomplemented hexagon `0 < a < b < I`, `0 < b' < a' < I`:
/// an ortholattice that is not orthomodular.
pub fn hexagon() -> OrthoLattice {
    build_lattice(
        "o6",
        &["0", "a", "b", "b'", "a'", "I"],
        &[
            ("0", "a"),
            ("a", "b"),
            ("b", "I"),
            ("0", "b'"),
            ("b'", "a'"),
            ("a'", "I"),
        ],
        &[("a", "a'"), ("b", "b'")],
    )
    .expect("hexagon is well formed")
}

/// The pentagon `0 < a < c < I`, `0 < b < I`, without complements.
pub fn pentagon() -> OrthoLattice {
    build_plain_lattice(
        "n5",
        &["0", "a", "b", "c", "I"],
        &[("0", "a"), ("a", "c"), ("c", "I"), ("0", "b"), ("b", "I")],
    )
    .expect("pentagon is well formed")
}

/// A minimal-universe model with a random number of experiments and outcomes.
pub fn random_model<R: Rng + ?Sized>(
    rng: &mut R,
    experiments: RangeInclusive<usize>,
    outcomes: RangeInclusive<usize>,
) -> ExperimentModel {
    let n = rng.gen_range(experiments);
    let labels = ["a", "b", "c", "d", "e", "f", "g", "h"];
    let blocks: Vec<(String, usize)> = (0..n)
        .map(|i| (format!("E{}", i + 1), rng.gen_range(outcomes.clone())))
        .collect();
    let layout: Vec<(&str, &[&str])> = blocks
        .iter()
        .map(|(name, k)| (name.as_str(), &labels[..*k]))
        .collect();
    ExperimentModel::minimal("random", &layout).expect("generated model is well formed")
}
