//! Exact linear algebra over finite-dimensional algebras: subspaces, ideal
//! closure, quotients, the Jacobson radical, and the structural checks run on
//! the convolution algebra.
//!
//! Algebras are handled through [`AlgebraTable`], a structure-constant table
//! with an optional conjugate-linear involution, so the same routines serve the
//! convolution algebra, its quotients, and raw oracle algebras.
//!
//! In finite dimension every subspace is closed and every ideal is cofinite,
//! so neither hypothesis has a counterpart in code.

use std::collections::VecDeque;
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::coeff_algebra::basis as alg_basis;
use crate::conv_algebra::{self, ConvElement};
use crate::linalg::{vec_is_zero, Matrix};
use crate::scalars::CycScalar;
use crate::twisted_action::TwistedSystem;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdealError {
    #[error("expected vectors of length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("subspace is not a two-sided ideal: {0:?}")]
    NotAnIdeal(IdealWitness),
    #[error("structure constants are not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("exhaustive enumeration needs a commutative algebra of dimension ≤ {max}")]
    EnumerationUnsupported { max: usize },
    #[error("algebra does not split into one-dimensional ideals over this field")]
    NotSplit,
    #[error("generator does not belong to this system")]
    ForeignGenerator,
}

/// Which closure property failed, and where.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum IdealWitness {
    /// `e_basis · row ∉ S`
    LeftProduct { basis: usize, row: usize },
    /// `row · e_basis ∉ S`
    RightProduct { basis: usize, row: usize },
    /// `row* ∉ S`
    Star { row: usize },
}

/// `m_{u,y}(row) ∉ S`, with `u` the `u_basis`-th matrix unit of `A`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranslationWitness {
    pub u_basis: usize,
    pub y: usize,
    pub row: usize,
}

/// Linear subspace of `K^d`, stored as its reduced row-echelon basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient_dim: usize,
    conductor: u32,
    pivots: Vec<usize>,
    rows: Vec<Vec<CycScalar>>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize, conductor: u32) -> Self {
        Subspace {
            ambient_dim,
            conductor,
            pivots: vec![],
            rows: vec![],
        }
    }

    pub fn full(ambient_dim: usize, conductor: u32) -> Self {
        let mut s = Self::zero(ambient_dim, conductor);
        for i in 0..ambient_dim {
            let mut v = vec![CycScalar::zero(conductor); ambient_dim];
            v[i] = CycScalar::one(conductor);
            s.insert(&v);
        }
        s
    }

    pub fn span(
        ambient_dim: usize,
        conductor: u32,
        vectors: &[Vec<CycScalar>],
    ) -> Result<Self, IdealError> {
        let mut s = Self::zero(ambient_dim, conductor);
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(IdealError::DimensionMismatch {
                    expected: ambient_dim,
                    found: v.len(),
                });
            }
            s.insert(v);
        }
        Ok(s)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim - self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient_dim
    }

    pub fn rows(&self) -> &[Vec<CycScalar>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates not used as pivots; a deterministic complement basis.
    pub fn non_pivots(&self) -> Vec<usize> {
        (0..self.ambient_dim)
            .filter(|c| !self.pivots.contains(c))
            .collect()
    }

    /// `v` minus its component along the echelon basis; zero at every pivot.
    pub fn reduce(&self, v: &[CycScalar]) -> Vec<CycScalar> {
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if w[p].is_zero() {
                continue;
            }
            let f = w[p].clone();
            for (wj, rj) in w.iter_mut().zip(row) {
                if !rj.is_zero() {
                    *wj = &*wj - &(&f * rj);
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[CycScalar]) -> bool {
        vec_is_zero(&self.reduce(v))
    }

    /// Adds `v` to the span, keeping reduced row-echelon form. Returns whether
    /// the dimension grew.
    pub fn insert(&mut self, v: &[CycScalar]) -> bool {
        assert_eq!(v.len(), self.ambient_dim, "vector length mismatch");
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = w[p].inv().expect("nonzero pivot");
        for c in w.iter_mut() {
            if !c.is_zero() {
                *c = &*c * &inv;
            }
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (rj, wj) in row.iter_mut().zip(&w) {
                if !wj.is_zero() {
                    *rj = &*rj - &(&f * wj);
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, w);
        true
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for r in &other.rows {
            s.insert(r);
        }
        s
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // solve Σ a_i u_i - Σ b_j w_j = 0
        let n = self.dim() + other.dim();
        let mut cols: Vec<Vec<CycScalar>> = self.rows.clone();
        cols.extend(other.rows.iter().map(|r| r.iter().map(|c| -c).collect()));
        let m = Matrix::from_columns(&cols, self.ambient_dim, self.conductor);
        let mut out = Subspace::zero(self.ambient_dim, self.conductor);
        if n == 0 {
            return out;
        }
        for coeffs in m.null_space() {
            let mut v = vec![CycScalar::zero(self.conductor); self.ambient_dim];
            for (a, row) in coeffs.iter().zip(&self.rows) {
                if a.is_zero() {
                    continue;
                }
                for (vj, rj) in v.iter_mut().zip(row) {
                    *vj = &*vj + &(a * rj);
                }
            }
            out.insert(&v);
        }
        out
    }
}

/// Finite-dimensional algebra given by structure constants, with an optional
/// conjugate-linear involution `v ↦ S·conj(v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraTable {
    dim: usize,
    conductor: u32,
    /// `products[i][j]` = coordinates of `e_i · e_j`
    products: Vec<Vec<Vec<CycScalar>>>,
    left: Vec<Matrix>,
    right: Vec<Matrix>,
    star: Option<Matrix>,
}

impl AlgebraTable {
    pub fn from_products(
        dim: usize,
        conductor: u32,
        products: Vec<Vec<Vec<CycScalar>>>,
        star: Option<Matrix>,
    ) -> Result<Self, IdealError> {
        let mismatch = |found| IdealError::DimensionMismatch {
            expected: dim,
            found,
        };
        if products.len() != dim {
            return Err(mismatch(products.len()));
        }
        for row in &products {
            if row.len() != dim {
                return Err(mismatch(row.len()));
            }
            if let Some(v) = row.iter().find(|v| v.len() != dim) {
                return Err(mismatch(v.len()));
            }
        }
        let left = (0..dim)
            .map(|i| Matrix::from_columns(&products[i], dim, conductor))
            .collect();
        let right = (0..dim)
            .map(|j| {
                let cols: Vec<Vec<CycScalar>> =
                    (0..dim).map(|i| products[i][j].clone()).collect();
                Matrix::from_columns(&cols, dim, conductor)
            })
            .collect();
        Ok(AlgebraTable {
            dim,
            conductor,
            products,
            left,
            right,
            star,
        })
    }

    /// Structure constants of the convolution algebra of `system`, with its
    /// involution.
    pub fn for_system(system: &Arc<TwistedSystem>) -> Self {
        let basis = conv_algebra::basis(system);
        let products: Vec<Vec<Vec<CycScalar>>> = basis
            .par_iter()
            .map(|a| {
                basis
                    .iter()
                    .map(|b| a.convolve(b).expect("same system").to_vector())
                    .collect()
            })
            .collect();
        let d = system.conv_dim();
        let star_cols: Vec<Vec<CycScalar>> =
            basis.iter().map(|b| b.involve().to_vector()).collect();
        let star = Matrix::from_columns(&star_cols, d, system.conductor());
        Self::from_products(d, system.conductor(), products, Some(star))
            .expect("convolution table is square")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn products(&self) -> &[Vec<Vec<CycScalar>>] {
        &self.products
    }

    pub fn product(&self, i: usize, j: usize) -> &[CycScalar] {
        &self.products[i][j]
    }

    /// Matrix of left multiplication by the `i`-th basis element.
    pub fn left_basis(&self, i: usize) -> &Matrix {
        &self.left[i]
    }

    /// Matrix of right multiplication by the `j`-th basis element.
    pub fn right_basis(&self, j: usize) -> &Matrix {
        &self.right[j]
    }

    pub fn star_matrix(&self) -> Option<&Matrix> {
        self.star.as_ref()
    }

    /// Matrix of `v ↦ u·v`.
    pub fn left_mult(&self, u: &[CycScalar]) -> Matrix {
        let mut out = Matrix::zeros(self.dim, self.dim, self.conductor);
        for (c, l) in u.iter().zip(&self.left) {
            if !c.is_zero() {
                out = out.add(&l.scale(c));
            }
        }
        out
    }

    pub fn mul(&self, u: &[CycScalar], v: &[CycScalar]) -> Vec<CycScalar> {
        let mut out = vec![CycScalar::zero(self.conductor); self.dim];
        for (i, a) in u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in v.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (o, p) in out.iter_mut().zip(&self.products[i][j]) {
                    if !p.is_zero() {
                        *o = &*o + &(&ab * p);
                    }
                }
            }
        }
        out
    }

    pub fn star(&self, v: &[CycScalar]) -> Option<Vec<CycScalar>> {
        let s = self.star.as_ref()?;
        let conj: Vec<CycScalar> = v.iter().map(CycScalar::conj).collect();
        Some(s.mul_vec(&conj))
    }

    /// First triple of basis indices where `(e_i e_j) e_k ≠ e_i (e_j e_k)`.
    pub fn associativity_witness(&self) -> Option<(usize, usize, usize)> {
        let d = self.dim;
        (0..d * d * d).into_par_iter().find_map_first(|t| {
            let (i, j, k) = (t / (d * d), (t / d) % d, t % d);
            let lhs = self.right[k].mul_vec(&self.products[i][j]);
            let rhs = self.left[i].mul_vec(&self.products[j][k]);
            (lhs != rhs).then_some((i, j, k))
        })
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.products[i][j] == self.products[j][i]))
    }

    fn basis_vector(&self, i: usize) -> Vec<CycScalar> {
        let mut v = vec![CycScalar::zero(self.conductor); self.dim];
        v[i] = CycScalar::one(self.conductor);
        v
    }
}

/// Least subspace containing `gens` and closed under the requested
/// multiplications by basis elements. Terminates because the rank is bounded
/// by the dimension.
fn close(table: &AlgebraTable, gens: &[Vec<CycScalar>], left: bool, right: bool) -> Subspace {
    let mut s = Subspace::zero(table.dim, table.conductor);
    let mut queue: VecDeque<Vec<CycScalar>> = gens.iter().cloned().collect();
    while let Some(v) = queue.pop_front() {
        if s.is_full() {
            break;
        }
        if !s.insert(&v) {
            continue;
        }
        for i in 0..table.dim {
            if left {
                queue.push_back(table.left[i].mul_vec(&v));
            }
            if right {
                queue.push_back(table.right[i].mul_vec(&v));
            }
        }
    }
    s
}

pub fn generate_two_sided_ideal(table: &AlgebraTable, gens: &[Vec<CycScalar>]) -> Subspace {
    close(table, gens, true, true)
}

pub fn generate_left_ideal(table: &AlgebraTable, gens: &[Vec<CycScalar>]) -> Subspace {
    close(table, gens, true, false)
}

pub fn is_left_ideal(table: &AlgebraTable, s: &Subspace) -> Result<(), IdealWitness> {
    for (row, v) in s.rows().iter().enumerate() {
        for basis in 0..table.dim {
            if !s.contains(&table.left[basis].mul_vec(v)) {
                return Err(IdealWitness::LeftProduct { basis, row });
            }
        }
    }
    Ok(())
}

pub fn is_right_ideal(table: &AlgebraTable, s: &Subspace) -> Result<(), IdealWitness> {
    for (row, v) in s.rows().iter().enumerate() {
        for basis in 0..table.dim {
            if !s.contains(&table.right[basis].mul_vec(v)) {
                return Err(IdealWitness::RightProduct { basis, row });
            }
        }
    }
    Ok(())
}

pub fn is_two_sided(table: &AlgebraTable, s: &Subspace) -> Result<(), IdealWitness> {
    is_left_ideal(table, s)?;
    is_right_ideal(table, s)
}

/// Whether `s` is closed under the involution. Checking the echelon rows
/// suffices since the involution is conjugate-linear. Tables without an
/// involution report the first row as a witness.
pub fn is_star_closed(table: &AlgebraTable, s: &Subspace) -> Result<(), IdealWitness> {
    for (row, v) in s.rows().iter().enumerate() {
        match table.star(v) {
            Some(w) if s.contains(&w) => {}
            _ => return Err(IdealWitness::Star { row }),
        }
    }
    Ok(())
}

/// Span of all products `u·v` (`u ∈ I`, `v ∈ J`), closed as a two-sided ideal.
pub fn ideal_product(table: &AlgebraTable, i: &Subspace, j: &Subspace) -> Subspace {
    let gens: Vec<Vec<CycScalar>> = i
        .rows()
        .iter()
        .flat_map(|u| j.rows().iter().map(move |v| table.mul(u, v)))
        .collect();
    generate_two_sided_ideal(table, &gens)
}

/// Radical by the trace-form criterion: the null space of
/// `G_ij = Tr(L_{e_i} L_{e_j})`, valid in characteristic zero.
pub fn radical(table: &AlgebraTable) -> Subspace {
    let d = table.dim;
    let mut gram = Matrix::zeros(d, d, table.conductor);
    for i in 0..d {
        for j in i..d {
            let (a, b) = (&table.left[i], &table.left[j]);
            let mut t = CycScalar::zero(table.conductor);
            for r in 0..d {
                for c in 0..d {
                    let (x, y) = (&a[(r, c)], &b[(c, r)]);
                    if !x.is_zero() && !y.is_zero() {
                        t = &t + &(x * y);
                    }
                }
            }
            gram[(i, j)] = t.clone();
            gram[(j, i)] = t;
        }
    }
    Subspace::span(d, table.conductor, &gram.null_space()).expect("null vectors have length d")
}

pub fn center_dim(table: &AlgebraTable) -> usize {
    let d = table.dim;
    // x e_j - e_j x = Σ_i x_i (e_i e_j - e_j e_i) = 0 for every j
    let mut rows = Vec::with_capacity(d * d);
    for j in 0..d {
        for k in 0..d {
            rows.push(
                (0..d)
                    .map(|i| &table.products[i][j][k] - &table.products[j][i][k])
                    .collect(),
            );
        }
    }
    let m = Matrix::from_rows(rows, table.conductor).expect("rows have length d");
    d - m.rank()
}

/// `B/I` with structure constants in the complement basis of non-pivot
/// coordinates of `I`.
#[derive(Debug, Clone)]
pub struct QuotientAlgebra {
    ideal: Subspace,
    complement: Vec<usize>,
    table: AlgebraTable,
}

impl QuotientAlgebra {
    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    pub fn ideal(&self) -> &Subspace {
        &self.ideal
    }

    /// Ambient coordinates used as the quotient basis.
    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    pub fn table(&self) -> &AlgebraTable {
        &self.table
    }

    /// Quotient coordinates of the coset `v + I`.
    pub fn project(&self, v: &[CycScalar]) -> Vec<CycScalar> {
        let r = self.ideal.reduce(v);
        self.complement.iter().map(|&c| r[c].clone()).collect()
    }

    /// Coset representative supported on the complement coordinates.
    pub fn lift(&self, q: &[CycScalar]) -> Vec<CycScalar> {
        let mut v = vec![CycScalar::zero(self.ideal.conductor()); self.ideal.ambient_dim()];
        for (&c, x) in self.complement.iter().zip(q) {
            v[c] = x.clone();
        }
        v
    }
}

pub fn quotient(table: &AlgebraTable, ideal: &Subspace) -> Result<QuotientAlgebra, IdealError> {
    if ideal.ambient_dim() != table.dim {
        return Err(IdealError::DimensionMismatch {
            expected: table.dim,
            found: ideal.ambient_dim(),
        });
    }
    is_two_sided(table, ideal).map_err(IdealError::NotAnIdeal)?;
    let complement = ideal.non_pivots();
    let proj = |v: &[CycScalar]| -> Vec<CycScalar> {
        let r = ideal.reduce(v);
        complement.iter().map(|&c| r[c].clone()).collect()
    };
    let products: Vec<Vec<Vec<CycScalar>>> = complement
        .iter()
        .map(|&a| complement.iter().map(|&b| proj(&table.products[a][b])).collect())
        .collect();
    let q = complement.len();
    let star = match (&table.star, is_star_closed(table, ideal)) {
        (Some(s), Ok(())) => {
            let cols: Vec<Vec<CycScalar>> =
                complement.iter().map(|&c| proj(&s.column(c))).collect();
            Some(Matrix::from_columns(&cols, q, table.conductor))
        }
        _ => None,
    };
    let qt = AlgebraTable::from_products(q, table.conductor, products, star)?;
    if let Some((i, j, k)) = qt.associativity_witness() {
        return Err(IdealError::NotAssociative(i, j, k));
    }
    Ok(QuotientAlgebra {
        ideal: ideal.clone(),
        complement,
        table: qt,
    })
}

/// Associative algebra given only by structure constants, without involution.
#[derive(Debug, Clone)]
pub struct RawAlgebra {
    table: AlgebraTable,
}

impl RawAlgebra {
    pub fn new(
        dim: usize,
        conductor: u32,
        structure: Vec<Vec<Vec<CycScalar>>>,
    ) -> Result<Self, IdealError> {
        let table = AlgebraTable::from_products(dim, conductor, structure, None)?;
        if let Some((i, j, k)) = table.associativity_witness() {
            return Err(IdealError::NotAssociative(i, j, k));
        }
        Ok(RawAlgebra { table })
    }

    pub fn table(&self) -> &AlgebraTable {
        &self.table
    }
}

/// Largest dimension for exhaustive ideal enumeration.
pub const ENUMERATION_MAX_DIM: usize = 8;

/// All two-sided ideals of a commutative algebra that splits over its field
/// into one-dimensional ideals (a product of copies of the field).
///
/// The algebra is split by joint generalized eigenspaces of the left
/// multiplications by basis elements, with eigenvalues searched among `0` and
/// `±ζ_m^k`. If the pieces are not all one-dimensional and idempotent the
/// ideal lattice is not the Boolean lattice of pieces, and enumeration is
/// refused.
pub fn enumerate_ideals(table: &AlgebraTable) -> Result<Vec<Subspace>, IdealError> {
    let d = table.dim;
    let m = table.conductor;
    if d > ENUMERATION_MAX_DIM || !table.is_commutative() {
        return Err(IdealError::EnumerationUnsupported {
            max: ENUMERATION_MAX_DIM,
        });
    }
    let mut candidates = vec![CycScalar::zero(m)];
    for k in 0..m as i64 {
        for z in [CycScalar::root_power(m, k), -CycScalar::root_power(m, k)] {
            if !candidates.contains(&z) {
                candidates.push(z);
            }
        }
    }
    let mut parts = vec![Subspace::full(d, m)];
    for b in 0..d {
        let l = &table.left[b];
        let spaces: Vec<Subspace> = candidates
            .iter()
            .map(|lambda| {
                let shifted = l.sub(&Matrix::identity(d, m).scale(lambda));
                let mut p = Matrix::identity(d, m);
                for _ in 0..d {
                    p = p.mul(&shifted);
                }
                Subspace::span(d, m, &p.null_space()).expect("length d")
            })
            .filter(|s| !s.is_zero())
            .collect();
        if spaces.iter().map(Subspace::dim).sum::<usize>() != d {
            continue;
        }
        parts = parts
            .iter()
            .flat_map(|p| spaces.iter().map(move |s| p.intersection(s)))
            .filter(|s| !s.is_zero())
            .collect();
    }
    let split = parts.iter().all(|p| {
        p.dim() == 1 && {
            let v = &p.rows()[0];
            !vec_is_zero(&table.mul(v, v))
        }
    });
    if !split {
        return Err(IdealError::NotSplit);
    }
    let k = parts.len();
    let mut out: Vec<Subspace> = (0..1u32 << k)
        .map(|mask| {
            (0..k)
                .filter(|i| mask & (1 << i) != 0)
                .fold(Subspace::zero(d, m), |acc, i| acc.sum(&parts[i]))
        })
        .collect();
    out.sort_by_key(Subspace::dim);
    Ok(out)
}

/// One scanned ideal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanEntry {
    pub dim: usize,
    pub codim: usize,
    pub star_closed: bool,
    pub radical_dim: usize,
    pub idempotent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub seed: u64,
    pub ideals: Vec<ScanEntry>,
}

/// Convolution-algebra front end: structure table plus cached multiplier
/// matrices.
pub struct IdealLab {
    system: Arc<TwistedSystem>,
    table: AlgebraTable,
    multipliers: OnceLock<Vec<Matrix>>,
}

impl IdealLab {
    pub fn new(system: Arc<TwistedSystem>) -> Self {
        let table = AlgebraTable::for_system(&system);
        IdealLab {
            system,
            table,
            multipliers: OnceLock::new(),
        }
    }

    pub fn system(&self) -> &Arc<TwistedSystem> {
        &self.system
    }

    pub fn table(&self) -> &AlgebraTable {
        &self.table
    }

    pub fn dim(&self) -> usize {
        self.table.dim
    }

    fn vectors(&self, gens: &[ConvElement]) -> Result<Vec<Vec<CycScalar>>, IdealError> {
        gens.iter()
            .map(|g| {
                conv_algebra::ensure_member(&self.system, g)
                    .map(|_| g.to_vector())
                    .map_err(|_| IdealError::ForeignGenerator)
            })
            .collect()
    }

    pub fn span(&self, elems: &[ConvElement]) -> Result<Subspace, IdealError> {
        Subspace::span(self.dim(), self.system.conductor(), &self.vectors(elems)?)
    }

    pub fn generate_two_sided_ideal(&self, gens: &[ConvElement]) -> Result<Subspace, IdealError> {
        Ok(generate_two_sided_ideal(&self.table, &self.vectors(gens)?))
    }

    pub fn generate_left_ideal(&self, gens: &[ConvElement]) -> Result<Subspace, IdealError> {
        Ok(generate_left_ideal(&self.table, &self.vectors(gens)?))
    }

    pub fn is_left_ideal(&self, s: &Subspace) -> Result<(), IdealWitness> {
        is_left_ideal(&self.table, s)
    }

    pub fn is_two_sided(&self, s: &Subspace) -> Result<(), IdealWitness> {
        is_two_sided(&self.table, s)
    }

    pub fn is_star_closed(&self, s: &Subspace) -> Result<(), IdealWitness> {
        is_star_closed(&self.table, s)
    }

    /// Matrices of `m_{u,y}` for `u` a matrix unit of `A`, indexed
    /// `y·dim(A) + u`.
    fn multiplier_matrices(&self) -> &[Matrix] {
        self.multipliers.get_or_init(|| {
            let sys = &self.system;
            let units = alg_basis(sys.shape(), sys.conductor());
            sys.group()
                .elements()
                .flat_map(|y| units.iter().map(move |u| (y, u)))
                .collect::<Vec<_>>()
                .par_iter()
                .map(|(y, u)| conv_algebra::multiplier_matrix(sys, u, *y).expect("unit of A"))
                .collect()
        })
    }

    /// Stability under every `m_{u,y}`; `u` ranges over a basis of `A`, which
    /// suffices by linearity in `u`.
    pub fn is_translation_invariant(&self, s: &Subspace) -> Result<(), TranslationWitness> {
        let k = self.system.algebra_dim();
        for (idx, m) in self.multiplier_matrices().iter().enumerate() {
            for (row, v) in s.rows().iter().enumerate() {
                if !s.contains(&m.mul_vec(v)) {
                    return Err(TranslationWitness {
                        u_basis: idx % k,
                        y: idx / k,
                        row,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn quotient(&self, ideal: &Subspace) -> Result<QuotientAlgebra, IdealError> {
        quotient(&self.table, ideal)
    }

    pub fn radical(&self) -> Subspace {
        radical(&self.table)
    }

    pub fn center_dim(&self) -> usize {
        center_dim(&self.table)
    }

    pub fn ideal_product(&self, i: &Subspace, j: &Subspace) -> Subspace {
        ideal_product(&self.table, i, j)
    }

    pub fn enumerate_ideals(&self) -> Result<Vec<Subspace>, IdealError> {
        enumerate_ideals(&self.table)
    }

    /// Random sparse element: one to three coordinates with coefficients
    /// `±ζ_m^k`.
    fn random_sparse(&self, rng: &mut ChaCha8Rng) -> Vec<CycScalar> {
        let d = self.dim();
        let m = self.system.conductor();
        let mut v = vec![CycScalar::zero(m); d];
        for _ in 0..rng.random_range(1..=3usize) {
            let i = rng.random_range(0..d);
            let mut c = CycScalar::root_power(m, rng.random_range(0..m as i64));
            if rng.random_bool(0.5) {
                c = -c;
            }
            v[i] = &v[i] + &c;
        }
        v
    }

    /// Generator sets for a seeded scan: one or two generators, each a product
    /// of one to three random sparse elements.
    pub fn scan_generators(&self, seed: u64, count: usize) -> Vec<Vec<Vec<CycScalar>>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                (0..rng.random_range(1..=2usize))
                    .map(|_| {
                        let mut g = self.random_sparse(&mut rng);
                        for _ in 1..rng.random_range(1..=3usize) {
                            let h = self.random_sparse(&mut rng);
                            g = self.table.mul(&g, &h);
                        }
                        g
                    })
                    .collect()
            })
            .collect()
    }

    /// Builds ideals from seeded random generators and reports, for each, its
    /// dimension, codimension, star closure, radical dimension of the quotient,
    /// and whether `I² = I`. Also returns the ideals themselves.
    pub fn random_ideal_scan(&self, seed: u64, count: usize) -> (ScanReport, Vec<Subspace>) {
        let gens = self.scan_generators(seed, count);
        let ideals: Vec<Subspace> = gens
            .par_iter()
            .map(|g| generate_two_sided_ideal(&self.table, g))
            .collect();
        let entries = ideals
            .par_iter()
            .map(|i| self.describe(i))
            .collect();
        (
            ScanReport {
                seed,
                ideals: entries,
            },
            ideals,
        )
    }

    pub fn describe(&self, ideal: &Subspace) -> ScanEntry {
        let q = self.quotient(ideal).expect("generated ideals are two-sided");
        ScanEntry {
            dim: ideal.dim(),
            codim: ideal.codim(),
            star_closed: self.is_star_closed(ideal).is_ok(),
            radical_dim: radical(q.table()).dim(),
            idempotent: &self.ideal_product(ideal, ideal) == ideal,
        }
    }

    /// A mixed sample of subspaces for the left-ideal/translation-invariance
    /// comparison: random spans, single basis lines, left ideals and
    /// two-sided ideals from random generators.
    pub fn sample_subspaces(&self, seed: u64, count: usize) -> Vec<Subspace> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_1e44a);
        let d = self.dim();
        let m = self.system.conductor();
        let mut out = vec![Subspace::zero(d, m), Subspace::full(d, m)];
        let mut k = 0usize;
        while out.len() < count {
            let s = match k % 4 {
                0 => {
                    let n = rng.random_range(1..d.max(2));
                    let vs: Vec<Vec<CycScalar>> =
                        (0..n).map(|_| self.random_sparse(&mut rng)).collect();
                    Subspace::span(d, m, &vs).expect("length d")
                }
                1 => {
                    let i = rng.random_range(0..d);
                    Subspace::span(d, m, &[self.table.basis_vector(i)]).expect("length d")
                }
                2 => generate_left_ideal(&self.table, &[self.random_sparse(&mut rng)]),
                _ => generate_two_sided_ideal(&self.table, &[self.random_sparse(&mut rng)]),
            };
            out.push(s);
            k += 1;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff_algebra::{AlgElement, BlockShape};
    use crate::groups::FiniteGroup;

    fn q(m: u32, v: i64) -> CycScalar {
        CycScalar::from_int(m, v)
    }

    fn raw(dim: usize, entries: &[(usize, usize, usize, i64)]) -> RawAlgebra {
        let mut s = vec![vec![vec![q(1, 0); dim]; dim]; dim];
        for &(i, j, k, c) in entries {
            s[i][j][k] = q(1, c);
        }
        RawAlgebra::new(dim, 1, s).unwrap()
    }

    #[test]
    fn span_examples() {
        let s = Subspace::span(2, 1, &[vec![q(1, 1), q(1, 0)], vec![q(1, 1), q(1, 1)]]).unwrap();
        assert!(s.is_full());
        let v = vec![q(1, 3), q(1, -1)];
        let w: Vec<CycScalar> = v.iter().map(|c| c * &q(1, 2)).collect();
        assert_eq!(Subspace::span(2, 1, &[v, w]).unwrap().dim(), 1);
        let i = CycScalar::root(4);
        let a = vec![q(4, 1), i.clone()];
        let b = vec![i, q(4, -1)];
        assert_eq!(Subspace::span(2, 4, &[a, b]).unwrap().dim(), 1);
        assert!(Subspace::span(2, 1, &[vec![q(1, 1)]]).is_err());
    }

    #[test]
    fn echelon_is_canonical() {
        let a = Subspace::span(3, 1, &[vec![q(1, 1), q(1, 2), q(1, 3)], vec![q(1, 0), q(1, 1), q(1, 1)]]).unwrap();
        let b = Subspace::span(3, 1, &[vec![q(1, 1), q(1, 3), q(1, 4)], vec![q(1, 2), q(1, 5), q(1, 7)]]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.non_pivots(), vec![2]);
    }

    #[test]
    fn intersection_of_planes() {
        let a = Subspace::span(3, 1, &[vec![q(1, 1), q(1, 0), q(1, 0)], vec![q(1, 0), q(1, 1), q(1, 0)]]).unwrap();
        let b = Subspace::span(3, 1, &[vec![q(1, 0), q(1, 1), q(1, 0)], vec![q(1, 0), q(1, 0), q(1, 1)]]).unwrap();
        let c = a.intersection(&b);
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&[q(1, 0), q(1, 1), q(1, 0)]));
    }

    #[test]
    fn dual_numbers_radical() {
        // basis 1, ε with ε² = 0
        let alg = raw(2, &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)]);
        let r = radical(alg.table());
        assert_eq!(r.dim(), 1);
        assert!(r.contains(&[q(1, 0), q(1, 1)]));
        let quo = quotient(alg.table(), &r).unwrap();
        assert_eq!(radical(quo.table()).dim(), 0);
    }

    #[test]
    fn non_associative_structure_rejected() {
        // e0 e0 = e1, everything else zero except e0 e1 = e0
        let mut s = vec![vec![vec![q(1, 0); 2]; 2]; 2];
        s[0][0][1] = q(1, 1);
        s[0][1][0] = q(1, 1);
        assert!(matches!(RawAlgebra::new(2, 1, s), Err(IdealError::NotAssociative(..))));
    }

    #[test]
    fn center_of_m2() {
        let shape = BlockShape::new(vec![2]).unwrap();
        let sys = Arc::new(TwistedSystem::trivial(FiniteGroup::cyclic(1), shape, 1));
        let lab = IdealLab::new(sys);
        assert_eq!(lab.center_dim(), 1);
        assert_eq!(lab.radical().dim(), 0);
    }

    #[test]
    fn z2_ideals_and_quotients() {
        let shape = BlockShape::new(vec![1]).unwrap();
        let sys = Arc::new(TwistedSystem::trivial(FiniteGroup::cyclic(2), shape.clone(), 1));
        let lab = IdealLab::new(sys.clone());
        let one = AlgElement::unit(&shape, 1);
        let d0 = ConvElement::delta(&sys, 0, one.clone());
        let d1 = ConvElement::delta(&sys, 1, one);
        let sum = d0.try_add(&d1).unwrap();
        let i = lab.generate_two_sided_ideal(&[sum]).unwrap();
        assert_eq!(i.dim(), 1);
        let full = lab.generate_two_sided_ideal(&[ConvElement::unit(&sys)]).unwrap();
        assert!(full.is_full());

        let line = lab.span(&[d0]).unwrap();
        assert!(matches!(lab.is_left_ideal(&line), Err(IdealWitness::LeftProduct { basis: 1, row: 0 })));
        assert!(lab.is_translation_invariant(&line).is_err());

        let quo = lab.quotient(&i).unwrap();
        assert_eq!(quo.dim(), 1);
        // basis δ1 with δ1² = δ0 ≡ -δ1
        assert_eq!(quo.table().product(0, 0), &[q(1, -1)]);
        assert_eq!(lab.quotient(&full).unwrap().dim(), 0);
        let zero = Subspace::zero(2, 1);
        assert_eq!(lab.quotient(&zero).unwrap().table().products(), lab.table().products());
        assert!(matches!(lab.quotient(&line), Err(IdealError::NotAnIdeal(_))));
    }

    #[test]
    fn ideal_product_of_whole_algebra() {
        let shape = BlockShape::new(vec![1, 1]).unwrap();
        let sys = Arc::new(TwistedSystem::trivial(FiniteGroup::cyclic(3), shape, 3));
        let lab = IdealLab::new(sys);
        let b = Subspace::full(lab.dim(), 3);
        assert_eq!(lab.ideal_product(&b, &b), b);
    }

    #[test]
    fn enumeration_refuses_non_split() {
        // ℚ[x]/(x²) is commutative but local with a nilpotent
        let alg = raw(2, &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)]);
        assert_eq!(enumerate_ideals(alg.table()), Err(IdealError::NotSplit));
        let m2 = {
            let shape = BlockShape::new(vec![2]).unwrap();
            IdealLab::new(Arc::new(TwistedSystem::trivial(FiniteGroup::cyclic(1), shape, 1)))
        };
        assert!(matches!(m2.enumerate_ideals(), Err(IdealError::EnumerationUnsupported { .. })));
    }

    #[test]
    fn scan_is_reproducible() {
        let shape = BlockShape::new(vec![1]).unwrap();
        let sys = Arc::new(TwistedSystem::trivial(FiniteGroup::cyclic(4), shape, 4));
        let lab = IdealLab::new(sys);
        let (a, ia) = lab.random_ideal_scan(11, 20);
        let (b, ib) = lab.random_ideal_scan(11, 20);
        assert_eq!(a, b);
        assert_eq!(ia, ib);
        assert_eq!(a.ideals.len(), 20);
    }
}
