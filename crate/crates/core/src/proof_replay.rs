//! Replays the averaging argument on a quotient `X = B/I`: the representation
//! `π` of `B` on `X`, a finite group `K` of operators `π(m_{u,y})`, an inner
//! product averaged over `K`, the *-representation identity, and `Ker π = I`.
//!
//! The compact group of the continuous argument becomes a finite group here,
//! generated from a chosen finite set of unitaries of `A`, and its Haar
//! measure becomes the normalized counting measure.

use std::collections::HashSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::coeff_algebra::{AlgElement, BlockShape};
use crate::conv_algebra::{self, ConvError};
use crate::ideal_lab::{IdealLab, IdealWitness, QuotientAlgebra, Subspace, TranslationWitness};
use crate::linalg::Matrix;
use crate::scalars::{CycScalar, Rational};
use crate::twisted_action::TwistedSystem;

pub const DEFAULT_CAP: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReplayError {
    #[error("subspace is not a two-sided ideal: {0:?}")]
    NotAnIdeal(IdealWitness),
    #[error("ideal is not stable under a multiplier: {0:?}")]
    NotInvariant(TranslationWitness),
    #[error("operator group exceeds {0} elements; use a smaller generating set")]
    CapExceeded(usize),
    #[error("generating element is not unitary")]
    NotUnitary,
}

impl From<ConvError> for ReplayError {
    fn from(_: ConvError) -> Self {
        ReplayError::NotUnitary
    }
}

/// Which unitaries of `A` generate the operator group.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorChoice {
    /// The cocycle values and the unit.
    #[default]
    Cocycle,
    /// The cocycle values, the unit, and per-block signed permutation
    /// generators (diagonal sign flips and adjacent transpositions).
    SignedPerm,
}

impl std::str::FromStr for GeneratorChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cocycle" => Ok(GeneratorChoice::Cocycle),
            "signed-perm" => Ok(GeneratorChoice::SignedPerm),
            other => Err(format!("unknown generator set `{other}` (expected cocycle or signed-perm)")),
        }
    }
}

/// Per-block sign flips and adjacent transpositions, identity elsewhere.
/// Together they generate the signed permutation matrices of every block,
/// whose span is all of `A`.
pub fn signed_permutation_generators(shape: &BlockShape, conductor: u32) -> Vec<AlgElement> {
    let unit = AlgElement::unit(shape, conductor);
    let mut out = Vec::new();
    for (b, &n) in shape.blocks().iter().enumerate() {
        for i in 0..n {
            let mut blocks = unit.blocks().to_vec();
            blocks[b][(i, i)] = CycScalar::from_int(conductor, -1);
            out.push(AlgElement::from_blocks(blocks).expect("square blocks"));
        }
        for i in 0..n.saturating_sub(1) {
            let mut blocks = unit.blocks().to_vec();
            let one = CycScalar::one(conductor);
            let zero = CycScalar::zero(conductor);
            blocks[b][(i, i)] = zero.clone();
            blocks[b][(i + 1, i + 1)] = zero;
            blocks[b][(i, i + 1)] = one.clone();
            blocks[b][(i + 1, i)] = one;
            out.push(AlgElement::from_blocks(blocks).expect("square blocks"));
        }
    }
    out
}

/// The generating unitaries for `choice`, unit first, without repeats.
pub fn generating_unitaries(system: &TwistedSystem, choice: &GeneratorChoice) -> Vec<AlgElement> {
    let mut out = vec![system.unit()];
    let mut push = |a: AlgElement| {
        if !out.contains(&a) {
            out.push(a);
        }
    };
    for w in system.cocycle().distinct_values() {
        push(w);
    }
    if *choice == GeneratorChoice::SignedPerm {
        for w in signed_permutation_generators(system.shape(), system.conductor()) {
            push(w);
        }
    }
    out
}

/// `π` on `B/I`: one quotient-coordinate matrix per basis element of `B`.
#[derive(Debug, Clone)]
pub struct Representation {
    quotient: QuotientAlgebra,
    matrices: Vec<Matrix>,
}

impl Representation {
    pub fn quotient(&self) -> &QuotientAlgebra {
        &self.quotient
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    /// `π(Φ)` for `Φ` given in coordinates of `B`.
    pub fn apply_coords(&self, phi: &[CycScalar]) -> Matrix {
        let q = self.dim();
        let m = self.quotient.ideal().conductor();
        let mut out = Matrix::zeros(q, q, m);
        for (c, p) in phi.iter().zip(&self.matrices) {
            if !c.is_zero() {
                out = out.add(&p.scale(c));
            }
        }
        out
    }

    /// Operator induced on `B/I` by a map of `B` that preserves `I`.
    pub fn induce(&self, map: &Matrix) -> Matrix {
        induce(&self.quotient, map)
    }
}

fn induce(quotient: &QuotientAlgebra, map: &Matrix) -> Matrix {
    let q = quotient.dim();
    let m = quotient.ideal().conductor();
    let cols: Vec<Vec<CycScalar>> = (0..q)
        .map(|l| {
            let mut e = vec![CycScalar::zero(m); q];
            e[l] = CycScalar::one(m);
            quotient.project(&map.mul_vec(&quotient.lift(&e)))
        })
        .collect();
    Matrix::from_columns(&cols, q, m)
}

/// Builds `π(Φ)(Ψ + I) = Φ*Ψ + I`. Fails if `I` is not a two-sided ideal, or
/// if some `m_{u,y}` moves `I`, which would make `π(m_{u,y})` ill-defined.
pub fn build_pi(lab: &IdealLab, ideal: &Subspace) -> Result<Representation, ReplayError> {
    lab.is_two_sided(ideal).map_err(ReplayError::NotAnIdeal)?;
    lab.is_translation_invariant(ideal)
        .map_err(ReplayError::NotInvariant)?;
    let quotient = lab.quotient(ideal).map_err(|e| match e {
        crate::ideal_lab::IdealError::NotAnIdeal(w) => ReplayError::NotAnIdeal(w),
        other => panic!("quotient of a checked ideal failed: {other}"),
    })?;
    let table = lab.table();
    let matrices = (0..table.dim())
        .into_par_iter()
        .map(|i| induce(&quotient, table.left_basis(i)))
        .collect();
    Ok(Representation { quotient, matrices })
}

/// First basis pair `(i, j)` with `π(b_i)π(b_j) ≠ π(b_i b_j)`.
pub fn multiplicativity_witness(lab: &IdealLab, rep: &Representation) -> Option<(usize, usize)> {
    let table = lab.table();
    let d = table.dim();
    (0..d * d).into_par_iter().find_map_first(|t| {
        let (i, j) = (t / d, t % d);
        let lhs = rep.matrices[i].mul(&rep.matrices[j]);
        let rhs = rep.apply_coords(table.product(i, j));
        (lhs != rhs).then_some((i, j))
    })
}

/// Finite group of operators on `B/I`, sorted canonically.
#[derive(Debug, Clone)]
pub struct MultiplierGroup {
    operators: Vec<Matrix>,
    generator_tags: Vec<(usize, usize)>,
}

impl MultiplierGroup {
    pub fn order(&self) -> usize {
        self.operators.len()
    }

    pub fn operators(&self) -> &[Matrix] {
        &self.operators
    }

    /// `(w, y)` for each generator `π(m_{W[w], y})`, in generation order.
    pub fn generator_tags(&self) -> &[(usize, usize)] {
        &self.generator_tags
    }
}

/// Closure of `{π(m_{w,y}) : w ∈ W, y ∈ G}` together with the operators of
/// the adjoint symbols `m_{ω(y⁻¹,y)* α_{y⁻¹}(w*), y⁻¹}`, under products.
pub fn multiplier_group(
    system: &Arc<TwistedSystem>,
    rep: &Representation,
    generators: &[AlgElement],
    cap: usize,
) -> Result<MultiplierGroup, ReplayError> {
    let q = rep.dim();
    let m = system.conductor();
    let g = system.group();
    let tags: Vec<(usize, usize)> = (0..generators.len())
        .flat_map(|w| g.elements().map(move |y| (w, y)))
        .collect();
    let mut gens: Vec<Matrix> = Vec::with_capacity(2 * tags.len());
    for &(w, y) in &tags {
        let u = &generators[w];
        let (adj, yi) = conv_algebra::adjoint_symbol(system, u, y)?;
        for (s, z) in [(u.clone(), y), (adj, yi)] {
            let op = rep.induce(&conv_algebra::multiplier_matrix(system, &s, z)?);
            if !gens.contains(&op) {
                gens.push(op);
            }
        }
    }
    let mut seen: HashSet<Matrix> = HashSet::new();
    let id = Matrix::identity(q, m);
    seen.insert(id.clone());
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let products: Vec<Matrix> = frontier
            .par_iter()
            .flat_map_iter(|t| gens.iter().map(move |s| s.mul(t)))
            .collect();
        let mut next = Vec::new();
        for p in products {
            if !seen.contains(&p) {
                if seen.len() >= cap {
                    return Err(ReplayError::CapExceeded(cap));
                }
                seen.insert(p.clone());
                next.push(p);
            }
        }
        frontier = next;
    }
    let mut operators: Vec<Matrix> = seen.into_iter().collect();
    operators.sort();
    Ok(MultiplierGroup {
        operators,
        generator_tags: tags,
    })
}

/// Hermitian form on quotient coordinates: `⟨ξ,η⟩ = η^H G ξ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AveragedForm {
    gram: Matrix,
}

impl AveragedForm {
    pub fn from_gram(gram: Matrix) -> Self {
        AveragedForm { gram }
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn is_hermitian(&self) -> bool {
        self.gram.adjoint() == self.gram
    }

    /// First operator index with `T^H G T ≠ G`.
    pub fn invariance_witness(&self, k: &MultiplierGroup) -> Option<usize> {
        k.operators
            .par_iter()
            .position_first(|t| t.adjoint().mul(&self.gram).mul(t) != self.gram)
    }

    /// Smallest eigenvalue under the complex embedding. Diagnostic only.
    pub fn min_eigenvalue(&self) -> Option<f64> {
        if self.gram.rows() == 0 {
            return None;
        }
        let e = self.gram.embed();
        let h = (&e + e.adjoint()) * num_complex::Complex64::new(0.5, 0.0);
        h.symmetric_eigenvalues().iter().copied().reduce(f64::min)
    }
}

/// `G = (1/|K|) Σ_{T∈K} T^H T`, starting from the standard coordinate form.
pub fn average_form(k: &MultiplierGroup, dim: usize, conductor: u32) -> AveragedForm {
    let sum = k
        .operators
        .par_iter()
        .map(|t| t.adjoint().mul(t))
        .reduce(|| Matrix::zeros(dim, dim, conductor), |a, b| a.add(&b));
    let n = Rational::from_integer((k.order() as i64).into());
    let inv = CycScalar::from_rational(conductor, n.recip());
    AveragedForm {
        gram: sum.scale(&inv),
    }
}

/// Checks `G π(Φ) = π(Φ*)^H G` for every basis element `Φ` of `B`; returns the
/// first failing basis index.
pub fn verify_star_property(
    lab: &IdealLab,
    rep: &Representation,
    form: &AveragedForm,
) -> Result<(), usize> {
    let star = lab
        .table()
        .star_matrix()
        .expect("convolution algebra has an involution");
    let g = &form.gram;
    match (0..lab.dim()).into_par_iter().find_first(|&i| {
        let lhs = g.mul(&rep.matrices[i]);
        let rhs = rep.apply_coords(&star.column(i)).adjoint().mul(g);
        lhs != rhs
    }) {
        Some(i) => Err(i),
        None => Ok(()),
    }
}

/// `Ker π` as a subspace of `B`.
pub fn kernel_of_pi(rep: &Representation) -> Subspace {
    let ideal = rep.quotient.ideal();
    let (d, m) = (ideal.ambient_dim(), ideal.conductor());
    let q = rep.dim();
    // column i = π(b_i) flattened; the kernel is the null space
    let cols: Vec<Vec<CycScalar>> = rep
        .matrices
        .iter()
        .map(|p| p.entries().to_vec())
        .collect();
    if q == 0 {
        return Subspace::full(d, m);
    }
    let mat = Matrix::from_columns(&cols, q * q, m);
    Subspace::span(d, m, &mat.null_space()).expect("null vectors have length d")
}

/// Where a replay check failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReplayWitness {
    NotMultiplicative { i: usize, j: usize },
    GramNotInvariant { operator: usize },
    StarProperty { basis: usize },
    KernelMismatch { kernel_dim: usize, ideal_dim: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplayReport {
    #[serde(rename = "K_order")]
    pub k_order: usize,
    pub ideal_dim: usize,
    pub quotient_dim: usize,
    pub multiplicative: bool,
    pub gram_hermitian: bool,
    #[serde(rename = "gram_K_invariant")]
    pub gram_k_invariant: bool,
    pub positive_definite: bool,
    pub star_property: bool,
    pub kernel_equals_ideal: bool,
    pub witness: Option<ReplayWitness>,
}

impl ReplayReport {
    pub fn passed(&self) -> bool {
        self.multiplicative
            && self.gram_hermitian
            && self.gram_k_invariant
            && self.positive_definite
            && self.star_property
            && self.kernel_equals_ideal
    }
}

/// Threshold for the floating-point positivity check on the averaged form.
pub const EIGENVALUE_FLOOR: f64 = 1e-9;

/// Runs every step of the replay for one ideal.
pub fn replay(
    lab: &IdealLab,
    ideal: &Subspace,
    choice: &GeneratorChoice,
    cap: usize,
) -> Result<ReplayReport, ReplayError> {
    let system = lab.system();
    let rep = build_pi(lab, ideal)?;
    let gens = generating_unitaries(system, choice);
    let k = multiplier_group(system, &rep, &gens, cap)?;
    let form = average_form(&k, rep.dim(), system.conductor());
    let kernel = kernel_of_pi(&rep);

    let mut witness = None;
    let mult = multiplicativity_witness(lab, &rep);
    if let Some((i, j)) = mult {
        witness.get_or_insert(ReplayWitness::NotMultiplicative { i, j });
    }
    let invariant = form.invariance_witness(&k);
    if let Some(operator) = invariant {
        witness.get_or_insert(ReplayWitness::GramNotInvariant { operator });
    }
    let star = verify_star_property(lab, &rep, &form);
    if let Err(basis) = star {
        witness.get_or_insert(ReplayWitness::StarProperty { basis });
    }
    let kernel_ok = &kernel == ideal;
    if !kernel_ok {
        witness.get_or_insert(ReplayWitness::KernelMismatch {
            kernel_dim: kernel.dim(),
            ideal_dim: ideal.dim(),
        });
    }
    Ok(ReplayReport {
        k_order: k.order(),
        ideal_dim: ideal.dim(),
        quotient_dim: rep.dim(),
        multiplicative: mult.is_none(),
        gram_hermitian: form.is_hermitian(),
        gram_k_invariant: invariant.is_none(),
        positive_definite: form.min_eigenvalue().is_none_or(|e| e >= EIGENVALUE_FLOOR),
        star_property: star.is_ok(),
        kernel_equals_ideal: kernel_ok,
        witness,
    })
}
