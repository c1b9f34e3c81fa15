//! End-to-end acceptance criteria. Run with
//! `cargo test -p orthologic --test acceptance -- --nocapture` to see the
//! per-criterion lines.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use orthologic::catalog::{hexagon, random_model};
use orthologic::checks::{
    check_atomic, check_covering, check_distributive, check_modular, check_orthocomplementation,
    check_orthomodular, replay, CheckOptions, Law, Verdict,
};
use orthologic::hilbert::{default_spin_half_assignment, verify_embedding};
use orthologic::model::{
    distributivity_witness_sets, proposition_lattice, ExperimentModel, ManifoldId,
};
use orthologic::text::parse_model;
use orthologic::{Elem, OrthoLattice};
use rand::rngs::StdRng;
use rand::SeedableRng;

const SPIN_HALF_MODEL: &str = include_str!(concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/../../fixtures/spin_half.model"
));

type Outcome = Result<(), String>;
type Criterion<'a> = (&'static str, Duration, Box<dyn Fn() -> Outcome + 'a>);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

/// Compiled spin-half lattice relabelled to `p, q, r, s`.
fn spin_half() -> OrthoLattice {
    let model = parse_model(SPIN_HALF_MODEL).expect("fixture parses");
    let l = proposition_lattice(&model).expect("fixture compiles");
    let rename = |s: &str| {
        match s {
            "X.{+}" => "p",
            "X.{-}" => "q",
            "Y.{+}" => "r",
            "Y.{-}" => "s",
            other => other,
        }
        .to_string()
    };
    let labels: Vec<String> = l.labels().iter().map(|s| rename(s)).collect();
    let leq: Vec<Vec<bool>> = l
        .elements()
        .map(|a| l.elements().map(|b| l.leq(a, b)).collect())
        .collect();
    let ortho = l.elements().map(|a| l.perp(a).index()).collect();
    OrthoLattice::from_relation(l.name(), &labels, &leq, Some(ortho)).expect("relabelled lattice")
}

fn e(l: &OrthoLattice, label: &str) -> Elem {
    l.elem(label).unwrap()
}

/// Generated corpus shared by the implication-chain and counting criteria.
fn corpus() -> Vec<ExperimentModel> {
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    let mut models: Vec<ExperimentModel> = (0..500)
        .map(|_| random_model(&mut rng, 1..=5, 2..=4))
        .collect();
    models.extend((0..100).map(|_| random_model(&mut rng, 1..=1, 2..=6)));
    models
}

fn criterion_1() -> Outcome {
    let l = spin_half();
    let labels: BTreeSet<&str> = l.labels().iter().map(String::as_str).collect();
    ensure!(
        labels == BTreeSet::from(["0", "p", "q", "r", "s", "I"]),
        "elements {labels:?}"
    );
    for (a, b) in [
        ("p", "q"),
        ("q", "p"),
        ("r", "s"),
        ("s", "r"),
        ("0", "I"),
        ("I", "0"),
    ] {
        let got = l.label(l.perp(e(&l, a)));
        ensure!(got == b, "{a}⊥ = {got}, expected {b}");
    }
    let atoms = ["p", "q", "r", "s"];
    for a in atoms {
        for b in atoms {
            let (m, j) = if a == b { (a, a) } else { ("0", "I") };
            let (am, aj) = (
                l.meet(e(&l, a), e(&l, b)).unwrap(),
                l.join(e(&l, a), e(&l, b)).unwrap(),
            );
            ensure!(l.label(am) == m, "{a}∧{b} = {}, expected {m}", l.label(am));
            ensure!(l.label(aj) == j, "{a}∨{b} = {}, expected {j}", l.label(aj));
        }
    }
    for x in ["0", "I"] {
        let ex = e(&l, x);
        ensure!(
            l.meet(ex, ex).unwrap() == ex && l.join(ex, ex).unwrap() == ex,
            "{x} not idempotent"
        );
    }
    // Where the printed table disagrees, the stated rules a∧I = a and a∨0 = a win.
    let (zero, top) = (e(&l, "0"), e(&l, "I"));
    for a in l.elements() {
        ensure!(
            l.meet(a, top).unwrap() == a,
            "{}∧I ≠ {}",
            l.label(a),
            l.label(a)
        );
        ensure!(
            l.join(a, zero).unwrap() == a,
            "{}∨0 ≠ {}",
            l.label(a),
            l.label(a)
        );
        ensure!(l.meet(a, zero).unwrap() == zero, "{}∧0 ≠ 0", l.label(a));
        ensure!(l.join(a, top).unwrap() == top, "{}∨I ≠ I", l.label(a));
    }
    Ok(())
}

fn criterion_2() -> Outcome {
    let l = spin_half();
    let r = check_orthomodular(&l, &CheckOptions::default());
    ensure!(r.passed(), "orthomodular failed: {:?}", r.witnesses);
    let (zero, top) = (e(&l, "0"), e(&l, "I"));
    let j = |x, y| l.join(x, y).unwrap();
    let m = |x, y| l.meet(x, y).unwrap();
    for a in l.elements() {
        ensure!(a == j(zero, m(a, top)), "0 ≤ {0} case", l.label(a));
        ensure!(top == j(a, m(top, l.perp(a))), "{0} ≤ I case", l.label(a));
        ensure!(a == j(a, m(a, l.perp(a))), "{0} ≤ {0} case", l.label(a));
    }
    ensure!(top == j(zero, m(top, top)), "0 ≤ I case");
    Ok(())
}

fn criterion_3() -> Outcome {
    let l = spin_half();
    let r = check_distributive(&l, &CheckOptions::default());
    ensure!(r.verdict == Verdict::Fail, "distributive passed");
    let w = r.witnesses.first().ok_or("no witness")?;
    ensure!(
        w.elements == ["p", "r", "s"],
        "witness elements {:?}",
        w.elements
    );
    ensure!(
        w.lhs == "p" && w.rhs == "0",
        "witness sides {} / {}",
        w.lhs,
        w.rhs
    );
    let replayed = replay(&l, w).ok_or("witness does not replay")?;
    ensure!(
        replayed == (w.lhs.clone(), w.rhs.clone()),
        "replay gave {replayed:?}"
    );
    // p ∧ (r ∨ r⊥) = p ∧ I = p, (p ∧ r) ∨ (p ∧ r⊥) = 0 ∨ 0 = 0
    let (p, rr) = (e(&l, "p"), e(&l, "r"));
    let rp = l.perp(rr);
    ensure!(l.join(rr, rp).unwrap() == e(&l, "I"), "r ∨ r⊥ ≠ I");
    ensure!(
        l.meet(p, rr).unwrap() == e(&l, "0") && l.meet(p, rp).unwrap() == e(&l, "0"),
        "p ∧ r ≠ 0"
    );
    Ok(())
}

fn criterion_4() -> Outcome {
    let l = spin_half();
    let opts = CheckOptions::default();
    for r in [
        check_modular(&l, &opts),
        check_atomic(&l, &opts),
        check_covering(&l, &opts),
    ] {
        ensure!(
            r.passed(),
            "{} failed: {:?}",
            r.property.name(),
            r.witnesses
        );
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    let model = parse_model(SPIN_HALF_MODEL).map_err(|e| e.to_string())?;
    let s = distributivity_witness_sets(&model).map_err(|e| e.to_string())?;
    let set = |xs: &[&str]| {
        xs.iter()
            .map(|x| ManifoldId(x.to_string()))
            .collect::<BTreeSet<_>>()
    };
    ensure!(s.p_plus.to_string() == "X.{+}", "P+ is {}", s.p_plus);
    ensure!(s.p_plus_set == set(&["m1"]), "P+ = {:?}", s.p_plus_set);
    ensure!(s.with_q_plus.is_empty(), "P+ ∩ Q+ = {:?}", s.with_q_plus);
    ensure!(s.with_q_minus.is_empty(), "P+ ∩ Q- = {:?}", s.with_q_minus);
    ensure!(s.union != s.p_plus_set && s.differs, "union equals P+");
    Ok(())
}

fn criterion_6() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0006);
    let opts = CheckOptions::default();
    for i in 0..120 {
        let model = random_model(&mut rng, 1..=1, 2..=6);
        let k = model.experiments[0].outcomes.len();
        let l = proposition_lattice(&model).map_err(|e| e.to_string())?;
        ensure!(
            l.len() == 1 << k,
            "model {i}: {} elements for {k} outcomes",
            l.len()
        );
        let d = check_distributive(&l, &opts);
        ensure!(
            d.passed(),
            "model {i}: distributive failed {:?}",
            d.witnesses
        );
        ensure!(
            check_orthocomplementation(&l, &opts).passed(),
            "model {i}: not orthocomplemented"
        );
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let l = hexagon();
    let r = check_orthomodular(&l, &CheckOptions::default());
    ensure!(r.verdict == Verdict::Fail, "hexagon passed orthomodularity");
    let w = r.witnesses.first().ok_or("no witness")?;
    ensure!(w.law == Law::Orthomodular, "law {:?}", w.law);
    ensure!(
        w.elements == ["a", "b"],
        "witness elements {:?}",
        w.elements
    );
    let (a, b) = (e(&l, "a"), e(&l, "b"));
    ensure!(l.leq(a, b), "a ≰ b");
    let rhs = l.join(a, l.meet(b, l.perp(a)).unwrap()).unwrap();
    ensure!(rhs == a && rhs != b, "a∨(b∧a⊥) = {}", l.label(rhs));
    ensure!(
        replay(&l, w) == Some((w.lhs.clone(), w.rhs.clone())),
        "witness does not replay"
    );
    ensure!(
        w.lhs == "b" && w.rhs == "a",
        "witness sides {} / {}",
        w.lhs,
        w.rhs
    );
    Ok(())
}

fn criterion_8(models: &[ExperimentModel]) -> Outcome {
    let opts = CheckOptions::default();
    let mut checked = 0;
    for (i, model) in models.iter().take(500).enumerate() {
        let l = proposition_lattice(model).map_err(|e| e.to_string())?;
        let d = check_distributive(&l, &opts).passed();
        let m = check_modular(&l, &opts).passed();
        let om = check_orthomodular(&l, &opts).passed();
        ensure!(!d || m, "model {i}: distributive but not modular");
        ensure!(!m || om, "model {i}: modular but not orthomodular");
        checked += 1;
    }
    ensure!(checked >= 500, "only {checked} models");
    Ok(())
}

fn criterion_9() -> Outcome {
    let l = orthologic::catalog::spin_half_lattice();
    let asgn = default_spin_half_assignment();
    let r = verify_embedding(&l, &asgn, 1e-9).map_err(|e| e.to_string())?;
    ensure!(r.passed(), "default assignment fails: {:?}", r.witnesses);
    // e1 is neither parallel nor orthogonal to any default eigenvector.
    let dir = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    for atom in ["p", "q", "r", "s"] {
        let mut bent = asgn.clone();
        let v = &mut bent.vectors.get_mut(atom).unwrap()[0];
        for (x, d) in v.iter_mut().zip(dir) {
            *x += d * 1e-3;
        }
        let r = verify_embedding(&l, &bent, 1e-9).map_err(|e| e.to_string())?;
        ensure!(
            r.witnesses.iter().any(|w| w.law == Law::EmbedComplement),
            "perturbing {atom} keeps complements: {:?}",
            r.witnesses
        );
    }
    Ok(())
}

fn criterion_10(models: &[ExperimentModel]) -> Outcome {
    for (i, model) in models.iter().enumerate() {
        let ks: Vec<usize> = model.experiments.iter().map(|x| x.outcomes.len()).collect();
        let l = proposition_lattice(model).map_err(|e| e.to_string())?;
        let want: usize = ks.iter().map(|k| (1 << k) - 2).sum::<usize>() + 2;
        ensure!(
            l.len() == want,
            "model {i} {ks:?}: {} elements, expected {want}",
            l.len()
        );
        let atoms: usize = ks.iter().sum();
        ensure!(
            l.atoms().len() == atoms,
            "model {i} {ks:?}: {} atoms",
            l.atoms().len()
        );
    }
    Ok(())
}

#[test]
fn acceptance_criteria() {
    let models = corpus();
    let ms = Duration::from_millis;
    let criteria: Vec<Criterion> = vec![
        ("1 spin-half reconstruction", ms(100), Box::new(criterion_1)),
        ("2 orthomodularity", ms(100), Box::new(criterion_2)),
        (
            "3 non-distributivity witness",
            ms(100),
            Box::new(criterion_3),
        ),
        (
            "4 modular, atomic, covering",
            ms(100),
            Box::new(criterion_4),
        ),
        ("5 set-level origin", ms(100), Box::new(criterion_5)),
        ("6 classical control", ms(5_000), Box::new(criterion_6)),
        ("7 hexagon negative control", ms(100), Box::new(criterion_7)),
        (
            "8 implication chain",
            ms(30_000),
            Box::new(|| criterion_8(&models)),
        ),
        ("9 subspace realization", ms(100), Box::new(criterion_9)),
        (
            "10 counting law",
            ms(30_000),
            Box::new(|| criterion_10(&models)),
        ),
    ];
    let mut failures = Vec::new();
    for (name, budget, run) in &criteria {
        let start = Instant::now();
        let mut outcome = run();
        let took = start.elapsed();
        if outcome.is_ok() && took > *budget {
            outcome = Err(format!("took {took:?}, budget {budget:?}"));
        }
        match &outcome {
            Ok(()) => println!(
                "PASS  criterion {name} ({:.1} ms)",
                took.as_secs_f64() * 1e3
            ),
            Err(why) => {
                println!(
                    "FAIL  criterion {name} ({:.1} ms): {why}",
                    took.as_secs_f64() * 1e3
                );
                failures.push(*name);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
