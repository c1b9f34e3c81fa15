//! Subspaces of a finite-dimensional complex inner-product space and the
//! check that a lattice is realised by them.
//!
//! Every rank decision goes through one primitive: Gram-Schmidt with a
//! residual-norm cutoff `tol`. Sums orthonormalise the union of two bases,
//! complements extend a basis by pivoted projection of the standard basis, and
//! intersections use `A ∩ B = (A⊥ + B⊥)⊥`.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use thiserror::Error;

use crate::checks::{Law, Property, PropertyReport, Witness};
use crate::lattice::{Elem, OrthoLattice};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

pub type Vector = Vec<Complex64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EmbedError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("atom `{0}` has no assigned subspace")]
    UnassignedAtom(String),
    #[error("`{0}` is assigned but is not an atom of the lattice")]
    NotAnAtom(String),
    #[error("lattice is not an atomic ortholattice: {0}")]
    NotAtomicOrtholattice(String),
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
}

/// Removes the components of `v` along the orthonormal `basis`, twice for
/// numerical stability.
fn project_out(v: &mut [Complex64], basis: &[Vector]) {
    for _ in 0..2 {
        for b in basis {
            let c = dot(b, v);
            for (x, y) in v.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
    }
}

/// Inner product `⟨a, b⟩`, conjugate-linear in `a`.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    dot(a, b)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    dim: usize,
    basis: Vec<Vector>,
    tol: f64,
}

impl Subspace {
    pub fn zero(dim: usize, tol: f64) -> Self {
        Subspace {
            dim,
            basis: Vec::new(),
            tol,
        }
    }

    pub fn full(dim: usize, tol: f64) -> Self {
        let basis = (0..dim)
            .map(|i| {
                let mut v = vec![Complex64::new(0.0, 0.0); dim];
                v[i] = Complex64::new(1.0, 0.0);
                v
            })
            .collect();
        Subspace { dim, basis, tol }
    }

    /// Orthonormalised span of `vectors`; vectors whose residual norm falls
    /// below `tol` are dropped.
    pub fn from_vectors(dim: usize, vectors: &[Vector], tol: f64) -> Result<Self, EmbedError> {
        let mut s = Subspace::zero(dim, tol);
        for v in vectors {
            if v.len() != dim {
                return Err(EmbedError::DimensionMismatch {
                    expected: dim,
                    got: v.len(),
                });
            }
            s.extend(v);
        }
        Ok(s)
    }

    fn extend(&mut self, v: &[Complex64]) -> bool {
        let mut r = v.to_vec();
        project_out(&mut r, &self.basis);
        let n = norm(&r);
        if n < self.tol {
            return false;
        }
        r.iter_mut().for_each(|x| *x /= n);
        self.basis.push(r);
        true
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    fn same_dim(&self, other: &Subspace) -> Result<(), EmbedError> {
        if self.dim != other.dim {
            return Err(EmbedError::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(())
    }

    /// Norm of the component of `v` outside this subspace.
    pub fn residual(&self, v: &[Complex64]) -> f64 {
        let mut r = v.to_vec();
        project_out(&mut r, &self.basis);
        norm(&r)
    }

    /// Largest residual of `other`'s basis against `self`: zero when
    /// `other ⊆ self`.
    pub fn gap(&self, other: &Subspace) -> f64 {
        other
            .basis
            .iter()
            .map(|v| self.residual(v))
            .fold(0.0, f64::max)
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        self.gap(other) < self.tol
    }

    pub fn approx_eq(&self, other: &Subspace) -> bool {
        self.dim == other.dim && self.rank() == other.rank() && self.contains(other)
    }

    /// Symmetric containment defect used in witness messages.
    pub fn distance(&self, other: &Subspace) -> f64 {
        self.gap(other).max(other.gap(self))
    }

    pub fn join(&self, other: &Subspace) -> Result<Subspace, EmbedError> {
        self.same_dim(other)?;
        let mut s = self.clone();
        for v in &other.basis {
            s.extend(v);
        }
        Ok(s)
    }

    pub fn ortho(&self) -> Subspace {
        // Pivoted completion: at each step take the standard basis vector with
        // the largest residual against everything collected so far.
        let mut all = self.clone();
        let mut comp = Subspace::zero(self.dim, self.tol);
        let target = self.dim - self.rank();
        let unit = |i: usize| {
            let mut v = vec![Complex64::new(0.0, 0.0); self.dim];
            v[i] = Complex64::new(1.0, 0.0);
            v
        };
        while comp.rank() < target {
            let best = (0..self.dim)
                .map(|i| (i, all.residual(&unit(i))))
                .max_by(|a, b| a.1.total_cmp(&b.1));
            match best {
                Some((i, r)) if r >= self.tol => {
                    let mut v = unit(i);
                    project_out(&mut v, &all.basis);
                    let n = norm(&v);
                    v.iter_mut().for_each(|x| *x /= n);
                    all.basis.push(v.clone());
                    comp.basis.push(v);
                }
                _ => break,
            }
        }
        comp
    }

    pub fn meet(&self, other: &Subspace) -> Result<Subspace, EmbedError> {
        self.same_dim(other)?;
        Ok(self.ortho().join(&other.ortho())?.ortho())
    }
}

pub fn subspace_from_vectors(vectors: &[Vector], tol: f64) -> Result<Subspace, EmbedError> {
    let dim = vectors.first().map_or(0, Vec::len);
    Subspace::from_vectors(dim, vectors, tol)
}

pub fn subspace_meet(a: &Subspace, b: &Subspace) -> Result<Subspace, EmbedError> {
    a.meet(b)
}

pub fn subspace_join(a: &Subspace, b: &Subspace) -> Result<Subspace, EmbedError> {
    a.join(b)
}

pub fn subspace_ortho(a: &Subspace) -> Subspace {
    a.ortho()
}

/// Spanning vectors for each atom, by label.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub dim: usize,
    pub vectors: BTreeMap<String, Vec<Vector>>,
}

impl Assignment {
    pub fn new(dim: usize) -> Self {
        Assignment {
            dim,
            vectors: BTreeMap::new(),
        }
    }

    pub fn assign(&mut self, atom: &str, vector: Vector) -> &mut Self {
        self.vectors
            .entry(atom.to_string())
            .or_default()
            .push(vector);
        self
    }

    /// Copy with atoms renamed through `rename`; unmapped names are kept.
    pub fn relabel(&self, rename: &[(&str, &str)]) -> Self {
        let vectors = self
            .vectors
            .iter()
            .map(|(k, v)| {
                let name = rename
                    .iter()
                    .find(|(from, _)| from == k)
                    .map_or(k.as_str(), |(_, to)| to);
                (name.to_string(), v.clone())
            })
            .collect();
        Assignment {
            dim: self.dim,
            vectors,
        }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Spin-half eigenvectors in the z basis: `p, q` for x-spin `±`, `r, s` for
/// y-spin `±`.
pub fn default_spin_half_assignment() -> Assignment {
    let h = FRAC_1_SQRT_2;
    let mut a = Assignment::new(2);
    a.assign("p", vec![c(h, 0.0), c(h, 0.0)])
        .assign("q", vec![c(h, 0.0), c(-h, 0.0)])
        .assign("r", vec![c(h, 0.0), c(0.0, h)])
        .assign("s", vec![c(h, 0.0), c(0.0, -h)]);
    a
}

/// Images of every element: atoms from the assignment, `0` and `I` as the
/// trivial subspaces, anything else as the span of the atoms below it.
pub fn element_images(
    l: &OrthoLattice,
    asgn: &Assignment,
    tol: f64,
) -> Result<Vec<Subspace>, EmbedError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(EmbedError::BadTolerance(tol));
    }
    let (Some(bottom), Some(top)) = (l.bottom(), l.top()) else {
        return Err(EmbedError::NotAtomicOrtholattice("not bounded".into()));
    };
    if !l.has_ortho() || !l.is_lattice() {
        return Err(EmbedError::NotAtomicOrtholattice(
            "needs a lattice with an orthocomplement".into(),
        ));
    }
    let atoms = l.atoms();
    for name in asgn.vectors.keys() {
        match l.elem(name) {
            Ok(e) if atoms.contains(&e) => {}
            _ => return Err(EmbedError::NotAnAtom(name.clone())),
        }
    }
    let mut atom_images: BTreeMap<Elem, Subspace> = BTreeMap::new();
    for &a in &atoms {
        let vs = asgn
            .vectors
            .get(l.label(a))
            .ok_or_else(|| EmbedError::UnassignedAtom(l.label(a).to_string()))?;
        atom_images.insert(a, Subspace::from_vectors(asgn.dim, vs, tol)?);
    }
    l.elements()
        .map(|e| {
            if e == bottom {
                return Ok(Subspace::zero(asgn.dim, tol));
            }
            if e == top {
                return Ok(Subspace::full(asgn.dim, tol));
            }
            let below = l.atoms_below(e);
            if below.is_empty() {
                return Err(EmbedError::NotAtomicOrtholattice(format!(
                    "no atom below `{}`",
                    l.label(e)
                )));
            }
            let mut s = Subspace::zero(asgn.dim, tol);
            for x in below {
                s = s.join(&atom_images[&x])?;
            }
            Ok(s)
        })
        .collect()
}

fn describe(s: &Subspace) -> String {
    format!("rank {}", s.rank())
}

/// Checks that the induced map is an injective ortholattice embedding:
/// order is containment, meet is intersection, join is sum and the
/// complement is the orthogonal complement.
pub fn verify_embedding(
    l: &OrthoLattice,
    asgn: &Assignment,
    tol: f64,
) -> Result<PropertyReport, EmbedError> {
    let images = element_images(l, asgn, tol)?;
    let mut witnesses = Vec::new();
    let mut push = |law: Law, es: &[Elem], lhs: String, rhs: String| {
        witnesses.push(Witness {
            law,
            elements: es.iter().map(|&e| l.label(e).to_string()).collect(),
            lhs,
            rhs,
        })
    };
    let mismatch = |want: &Subspace, got: &Subspace| {
        (
            describe(want),
            format!("{}, gap {:.3e}", describe(got), want.distance(got)),
        )
    };
    for a in l.elements() {
        let ia = &images[a.index()];
        let comp = ia.ortho();
        let ip = &images[l.perp(a).index()];
        if !ip.approx_eq(&comp) {
            let (x, y) = mismatch(ip, &comp);
            push(Law::EmbedComplement, &[a], x, y);
        }
        for b in l.elements() {
            let ib = &images[b.index()];
            if a < b && ia.approx_eq(ib) {
                push(Law::EmbedInjective, &[a, b], describe(ia), describe(ib));
            }
            if l.leq(a, b) != ib.contains(ia) {
                push(
                    Law::EmbedOrder,
                    &[a, b],
                    l.leq(a, b).to_string(),
                    ib.contains(ia).to_string(),
                );
            }
            if a <= b {
                let meet = ia.meet(ib)?;
                let im = &images[l.try_meet(a, b).expect("lattice").index()];
                if !im.approx_eq(&meet) {
                    let (x, y) = mismatch(im, &meet);
                    push(Law::EmbedMeet, &[a, b], x, y);
                }
                let join = ia.join(ib)?;
                let ij = &images[l.try_join(a, b).expect("lattice").index()];
                if !ij.approx_eq(&join) {
                    let (x, y) = mismatch(ij, &join);
                    push(Law::EmbedJoin, &[a, b], x, y);
                }
            }
        }
    }
    Ok(PropertyReport::from_witnesses(
        Property::Embedding,
        witnesses,
    ))
}
