//! Twisted actions `(G, α, ω, A)` and exhaustive validation of the cocycle
//! identities.
//!
//! Automorphisms are kept as raw linear maps on the coordinates of `A` and are
//! checked, never assumed, to be unital *-automorphisms.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::coeff_algebra::{basis, AlgElement, BlockShape};
use crate::groups::FiniteGroup;
use crate::linalg::Matrix;
use crate::scalars::CycScalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutoMapError {
    #[error("map has size {found}, algebra has dimension {expected}")]
    WrongSize { expected: usize, found: usize },
    #[error("α(e_{0}·e_{1}) ≠ α(e_{0})·α(e_{1})")]
    NotMultiplicative(usize, usize),
    #[error("α(e_{0}*) ≠ α(e_{0})*")]
    NotStarPreserving(usize),
    #[error("α(1) ≠ 1")]
    NotUnital,
    #[error("map is not invertible")]
    NotInvertible,
    #[error("block permutation {0:?} is invalid for this shape")]
    BadPermutation(Vec<usize>),
    #[error("inner automorphism needs a unitary")]
    NotUnitary,
}

/// Which normalization in axiom (iii) failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Normalization {
    /// `ω(x, e) ≠ 1`
    RightUnit(usize),
    /// `ω(e, y) ≠ 1`
    LeftUnit(usize),
    /// `α_e ≠ id`
    AlphaIdentity,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ActionError {
    #[error("expected {expected} automorphisms, found {found}")]
    AlphaCount { expected: usize, found: usize },
    #[error("cocycle table must be {0}×{0}")]
    CocycleShape(usize),
    #[error("entry of shape/conductor different from the algebra")]
    ForeignElement,
    #[error("α_{x} is not a *-automorphism: {source}")]
    BadAutomorphism { x: usize, source: AutoMapError },
    #[error("ω({0}, {1}) is not unitary")]
    NonUnitaryCocycleEntry(usize, usize),
    #[error("axiom (iii) violated: {0:?}")]
    AxiomIIIViolated(Normalization),
    #[error("axiom (i) violated at (x, y, z) = ({0}, {1}, {2})")]
    AxiomIViolated(usize, usize, usize),
    #[error("axiom (ii) violated at (x, y) = ({0}, {1}) on basis element {2}")]
    AxiomIIViolated(usize, usize, usize),
    #[error("bicharacter cocycle needs n | conductor (n = {n}, conductor = {conductor})")]
    ConductorIncompatible { n: usize, conductor: u32 },
    #[error("bicharacter cocycle needs a group of order n² = {expected}, got {found}")]
    GroupOrder { expected: usize, found: usize },
}

/// Linear map on `A`, acting on coordinate column vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutoMap {
    matrix: Matrix,
    identity: bool,
}

impl AutoMap {
    pub fn from_matrix(matrix: Matrix) -> Self {
        let identity = matrix.is_identity();
        AutoMap { matrix, identity }
    }

    pub fn identity(shape: &BlockShape, conductor: u32) -> Self {
        Self::from_matrix(Matrix::identity(shape.dim(), conductor))
    }

    /// Moves block `i` to block `perm[i]`. Only blocks of equal size may be
    /// exchanged.
    pub fn swap_blocks(
        shape: &BlockShape,
        conductor: u32,
        perm: &[usize],
    ) -> Result<Self, AutoMapError> {
        let sizes = shape.blocks();
        let bad = || AutoMapError::BadPermutation(perm.to_vec());
        if perm.len() != sizes.len() {
            return Err(bad());
        }
        let mut seen = vec![false; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            if p >= perm.len() || seen[p] || sizes[p] != sizes[i] {
                return Err(bad());
            }
            seen[p] = true;
        }
        let d = shape.dim();
        let mut m = Matrix::zeros(d, d, conductor);
        for src in 0..d {
            let (b, i, j) = shape.locate(src);
            m[(shape.index_of(perm[b], i, j), src)] = CycScalar::one(conductor);
        }
        Ok(Self::from_matrix(m))
    }

    /// `a ↦ u a u*` for a unitary `u`.
    pub fn inner(u: &AlgElement) -> Result<Self, AutoMapError> {
        if !u.is_unitary() {
            return Err(AutoMapError::NotUnitary);
        }
        let shape = u.shape();
        let us = u.star();
        let cols: Vec<Vec<CycScalar>> = basis(&shape, u.conductor())
            .iter()
            .map(|e| u.mul(e).mul(&us).to_coords())
            .collect();
        Ok(Self::from_matrix(Matrix::from_columns(
            &cols,
            shape.dim(),
            u.conductor(),
        )))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }

    pub fn apply(&self, a: &AlgElement) -> AlgElement {
        if self.identity {
            return a.clone();
        }
        let v = self.matrix.mul_vec(&a.to_coords());
        AlgElement::from_coords(&a.shape(), a.conductor(), &v).expect("map matches shape")
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AutoMap) -> AutoMap {
        Self::from_matrix(self.matrix.mul(&other.matrix))
    }
}

/// Checks that `map` is a unital *-automorphism of the algebra of the given
/// shape, on all pairs of basis elements.
pub fn validate_automorphism(
    map: &AutoMap,
    shape: &BlockShape,
) -> Result<(), AutoMapError> {
    let d = shape.dim();
    if map.matrix.rows() != d || map.matrix.cols() != d {
        return Err(AutoMapError::WrongSize {
            expected: d,
            found: map.matrix.rows(),
        });
    }
    let m = map.matrix.conductor();
    let e = basis(shape, m);
    let images: Vec<AlgElement> = e.iter().map(|b| map.apply(b)).collect();
    for i in 0..d {
        for j in 0..d {
            if map.apply(&e[i].mul(&e[j])) != images[i].mul(&images[j]) {
                return Err(AutoMapError::NotMultiplicative(i, j));
            }
        }
    }
    for i in 0..d {
        if map.apply(&e[i].star()) != images[i].star() {
            return Err(AutoMapError::NotStarPreserving(i));
        }
    }
    if !map.apply(&AlgElement::unit(shape, m)).is_unit() {
        return Err(AutoMapError::NotUnital);
    }
    if map.matrix.inverse().is_err() {
        return Err(AutoMapError::NotInvertible);
    }
    Ok(())
}

/// Unitary-valued 2-cocycle, stored as a dense `|G|×|G|` table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle {
    order: usize,
    table: Vec<AlgElement>,
}

impl Cocycle {
    pub fn from_table(table: Vec<Vec<AlgElement>>) -> Result<Self, ActionError> {
        let n = table.len();
        if table.iter().any(|r| r.len() != n) || n == 0 {
            return Err(ActionError::CocycleShape(n));
        }
        Ok(Cocycle {
            order: n,
            table: table.into_iter().flatten().collect(),
        })
    }

    pub fn trivial(group: &FiniteGroup, shape: &BlockShape, conductor: u32) -> Self {
        let n = group.order();
        Cocycle {
            order: n,
            table: vec![AlgElement::unit(shape, conductor); n * n],
        }
    }

    /// `ω((a,b),(c,d)) = ζ_n^{bc}` on `ℤ_n × ℤ_n`, with `(a, b)` at index
    /// `a·n + b` as produced by [`FiniteGroup::direct_product`].
    pub fn bicharacter(
        n: usize,
        group: &FiniteGroup,
        shape: &BlockShape,
        conductor: u32,
    ) -> Result<Self, ActionError> {
        if n == 0 || !(conductor as usize).is_multiple_of(n) {
            return Err(ActionError::ConductorIncompatible { n, conductor });
        }
        if group.order() != n * n {
            return Err(ActionError::GroupOrder {
                expected: n * n,
                found: group.order(),
            });
        }
        let step = (conductor as usize / n) as i64;
        let mut table = Vec::with_capacity(n * n * n * n);
        for x in 0..n * n {
            for y in 0..n * n {
                let (b, c) = (x % n, y / n);
                let z = CycScalar::root_power(conductor, step * (b * c) as i64);
                table.push(AlgElement::scalar(shape, &z));
            }
        }
        Ok(Cocycle {
            order: n * n,
            table,
        })
    }

    pub fn get(&self, x: usize, y: usize) -> &AlgElement {
        &self.table[x * self.order + y]
    }

    pub fn set(&mut self, x: usize, y: usize, value: AlgElement) {
        self.table[x * self.order + y] = value;
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Distinct table values, in first-occurrence order.
    pub fn distinct_values(&self) -> Vec<AlgElement> {
        let mut out: Vec<AlgElement> = Vec::new();
        for v in &self.table {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
        out
    }

    /// True when every value is a scalar multiple of the unit.
    pub fn is_scalar(&self) -> bool {
        self.table.iter().all(|w| {
            let c = w.blocks()[0][(0, 0)].clone();
            *w == AlgElement::scalar(&w.shape(), &c)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub group_order: usize,
    pub algebra_dim: usize,
    pub axiom_i_triples: usize,
    pub axiom_ii_checks: usize,
    pub axiom_iii_checks: usize,
}

/// The 4-tuple `(G, α, ω, A)` over ℚ(ζ_m).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedSystem {
    group: FiniteGroup,
    shape: BlockShape,
    conductor: u32,
    alphas: Vec<AutoMap>,
    omega: Cocycle,
}

impl TwistedSystem {
    /// Structural assembly without axiom checks.
    pub fn assemble(
        group: FiniteGroup,
        shape: BlockShape,
        conductor: u32,
        alphas: Vec<AutoMap>,
        omega: Cocycle,
    ) -> Result<Self, ActionError> {
        let n = group.order();
        if alphas.len() != n {
            return Err(ActionError::AlphaCount {
                expected: n,
                found: alphas.len(),
            });
        }
        if omega.order() != n {
            return Err(ActionError::CocycleShape(n));
        }
        let d = shape.dim();
        for (x, a) in alphas.iter().enumerate() {
            if a.matrix.rows() != d || a.matrix.cols() != d {
                return Err(ActionError::BadAutomorphism {
                    x,
                    source: AutoMapError::WrongSize {
                        expected: d,
                        found: a.matrix.rows(),
                    },
                });
            }
            if a.matrix.conductor() != conductor {
                return Err(ActionError::ForeignElement);
            }
        }
        if omega
            .table
            .iter()
            .any(|w| w.shape() != shape || w.conductor() != conductor)
        {
            return Err(ActionError::ForeignElement);
        }
        Ok(TwistedSystem {
            group,
            shape,
            conductor,
            alphas,
            omega,
        })
    }

    /// Assembles and validates all axioms.
    pub fn new(
        group: FiniteGroup,
        shape: BlockShape,
        conductor: u32,
        alphas: Vec<AutoMap>,
        omega: Cocycle,
    ) -> Result<Self, ActionError> {
        let sys = Self::assemble(group, shape, conductor, alphas, omega)?;
        sys.validate_axioms()?;
        Ok(sys)
    }

    /// The trivial system: `α ≡ id`, `ω ≡ 1`.
    pub fn trivial(group: FiniteGroup, shape: BlockShape, conductor: u32) -> Self {
        let alphas = vec![AutoMap::identity(&shape, conductor); group.order()];
        let omega = Cocycle::trivial(&group, &shape, conductor);
        Self::assemble(group, shape, conductor, alphas, omega).expect("trivial system is well formed")
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn shape(&self) -> &BlockShape {
        &self.shape
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn alpha(&self, x: usize) -> &AutoMap {
        &self.alphas[x]
    }

    pub fn alphas(&self) -> &[AutoMap] {
        &self.alphas
    }

    pub fn omega(&self, x: usize, y: usize) -> &AlgElement {
        self.omega.get(x, y)
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.omega
    }

    pub fn unit(&self) -> AlgElement {
        AlgElement::unit(&self.shape, self.conductor)
    }

    /// Dimension of `A`.
    pub fn algebra_dim(&self) -> usize {
        self.shape.dim()
    }

    /// Dimension of the convolution algebra, `|G|·dim(A)`.
    pub fn conv_dim(&self) -> usize {
        self.group.order() * self.shape.dim()
    }

    /// Exhaustive check of axioms (i)–(iii), plus unitarity of ω and the
    /// *-automorphism property of every α_x. Returns the first failure.
    pub fn validate_axioms(&self) -> Result<AxiomReport, ActionError> {
        let g = &self.group;
        let n = g.order();
        let e = g.identity();
        for (x, a) in self.alphas.iter().enumerate() {
            validate_automorphism(a, &self.shape)
                .map_err(|source| ActionError::BadAutomorphism { x, source })?;
        }
        for x in 0..n {
            for y in 0..n {
                if !self.omega(x, y).is_unitary() {
                    return Err(ActionError::NonUnitaryCocycleEntry(x, y));
                }
            }
        }
        if !self.alphas[e].is_identity() {
            return Err(ActionError::AxiomIIIViolated(Normalization::AlphaIdentity));
        }
        for x in 0..n {
            if !self.omega(x, e).is_unit() {
                return Err(ActionError::AxiomIIIViolated(Normalization::RightUnit(x)));
            }
            if !self.omega(e, x).is_unit() {
                return Err(ActionError::AxiomIIIViolated(Normalization::LeftUnit(x)));
            }
        }

        // (i) α_x(ω(y,z)) ω(x,yz) = ω(x,y) ω(xy,z)
        let first_i = (0..n * n * n).into_par_iter().find_first(|&t| {
            let (x, y, z) = (t / (n * n), (t / n) % n, t % n);
            let lhs = self.alphas[x]
                .apply(self.omega(y, z))
                .mul(self.omega(x, g.mul(y, z)));
            let rhs = self.omega(x, y).mul(self.omega(g.mul(x, y), z));
            lhs != rhs
        });
        if let Some(t) = first_i {
            return Err(ActionError::AxiomIViolated(t / (n * n), (t / n) % n, t % n));
        }

        // (ii) α_x(α_y(a)) ω(x,y) = ω(x,y) α_{xy}(a) on basis elements a
        let d = self.shape.dim();
        let elems = basis(&self.shape, self.conductor);
        let first_ii = (0..n * n * d).into_par_iter().find_first(|&t| {
            let (x, y, k) = (t / (n * d), (t / d) % n, t % d);
            let w = self.omega(x, y);
            let lhs = self.alphas[x].apply(&self.alphas[y].apply(&elems[k])).mul(w);
            let rhs = w.mul(&self.alphas[g.mul(x, y)].apply(&elems[k]));
            lhs != rhs
        });
        if let Some(t) = first_ii {
            return Err(ActionError::AxiomIIViolated(t / (n * d), (t / d) % n, t % d));
        }

        Ok(AxiomReport {
            group_order: n,
            algebra_dim: d,
            axiom_i_triples: n * n * n,
            axiom_ii_checks: n * n * d,
            axiom_iii_checks: 2 * n + 1,
        })
    }

    /// Exterior equivalence by unitaries `u_x` with `u_e = 1`:
    /// `α'_x = Ad(u_x)∘α_x` and `ω'(x,y) = u_x α_x(u_y) ω(x,y) u_{xy}*`.
    pub fn exterior_equivalent(&self, u: &[AlgElement]) -> Result<Self, ActionError> {
        let g = &self.group;
        let n = g.order();
        if u.len() != n {
            return Err(ActionError::AlphaCount {
                expected: n,
                found: u.len(),
            });
        }
        let mut alphas = Vec::with_capacity(n);
        for (x, ux) in u.iter().enumerate() {
            let ad = AutoMap::inner(ux)
                .map_err(|source| ActionError::BadAutomorphism { x, source })?;
            alphas.push(ad.compose(&self.alphas[x]));
        }
        let mut omega = self.omega.clone();
        for x in 0..n {
            for y in 0..n {
                let w = u[x]
                    .mul(&self.alphas[x].apply(&u[y]))
                    .mul(self.omega(x, y))
                    .mul(&u[g.mul(x, y)].star());
                omega.set(x, y, w);
            }
        }
        Self::assemble(g.clone(), self.shape.clone(), self.conductor, alphas, omega)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(b: &[usize]) -> BlockShape {
        BlockShape::new(b.to_vec()).unwrap()
    }

    fn klein() -> FiniteGroup {
        FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2))
    }

    fn pauli_system() -> TwistedSystem {
        let g = klein();
        let s = shape(&[1]);
        let omega = Cocycle::bicharacter(2, &g, &s, 2).unwrap();
        let alphas = vec![AutoMap::identity(&s, 2); 4];
        TwistedSystem::new(g, s, 2, alphas, omega).unwrap()
    }

    #[test]
    fn identity_and_swap_are_automorphisms() {
        let m2 = shape(&[2]);
        validate_automorphism(&AutoMap::identity(&m2, 1), &m2).unwrap();
        let cc = shape(&[1, 1]);
        validate_automorphism(&AutoMap::swap_blocks(&cc, 1, &[1, 0]).unwrap(), &cc).unwrap();
        assert!(AutoMap::swap_blocks(&shape(&[1, 2]), 1, &[1, 0]).is_err());
    }

    #[test]
    fn transpose_is_not_multiplicative() {
        let m2 = shape(&[2]);
        let d = m2.dim();
        let mut t = Matrix::zeros(d, d, 1);
        for src in 0..d {
            let (_, i, j) = m2.locate(src);
            t[(m2.index_of(0, j, i), src)] = CycScalar::one(1);
        }
        let map = AutoMap::from_matrix(t);
        match validate_automorphism(&map, &m2) {
            Err(AutoMapError::NotMultiplicative(i, j)) => {
                let e = basis(&m2, 1);
                assert_ne!(map.apply(&e[i].mul(&e[j])), map.apply(&e[i]).mul(&map.apply(&e[j])));
            }
            other => panic!("expected NotMultiplicative, got {other:?}"),
        }
    }

    #[test]
    fn non_star_and_non_unital_maps_rejected() {
        // a ↦ v a v⁻¹ with v = diag(1, 2) is multiplicative but not *-preserving
        let m2 = shape(&[2]);
        let d = m2.dim();
        let mut t = Matrix::zeros(d, d, 1);
        let v = [1, 2];
        for src in 0..d {
            // v E_ij v⁻¹ = (v_i / v_j) E_ij
            let (_, i, j) = m2.locate(src);
            let c = crate::scalars::Rational::new(v[i].into(), v[j].into());
            t[(src, src)] = CycScalar::from_rational(1, c);
        }
        assert!(matches!(
            validate_automorphism(&AutoMap::from_matrix(t), &m2),
            Err(AutoMapError::NotStarPreserving(_))
        ));
        let zero = AutoMap::from_matrix(Matrix::zeros(d, d, 1));
        assert!(matches!(validate_automorphism(&zero, &m2), Err(AutoMapError::NotUnital)));
    }

    #[test]
    fn trivial_systems_pass() {
        for (g, s) in [
            (FiniteGroup::cyclic(4), shape(&[1])),
            (FiniteGroup::dihedral(3), shape(&[2, 1])),
            (klein(), shape(&[1, 1])),
        ] {
            TwistedSystem::trivial(g, s, 3).validate_axioms().unwrap();
        }
    }

    #[test]
    fn pauli_cocycle_table() {
        let sys = pauli_system();
        for x in 0..4 {
            for y in 0..4 {
                let (b, c) = (x % 2, y / 2);
                let expected = if b * c == 1 { -1 } else { 1 };
                assert_eq!(sys.omega(x, y).blocks()[0][(0, 0)], CycScalar::from_int(2, expected));
            }
        }
        let report = sys.validate_axioms().unwrap();
        assert_eq!(report.axiom_i_triples, 64);
    }

    #[test]
    fn negated_entry_breaks_axiom_i() {
        let sys = pauli_system();
        let mut omega = sys.cocycle().clone();
        // (0,1) is index 1, (1,0) is index 2
        omega.set(1, 2, sys.omega(1, 2).scale(&CycScalar::from_int(2, -1)));
        let broken = TwistedSystem::assemble(
            sys.group().clone(),
            sys.shape().clone(),
            2,
            sys.alphas().to_vec(),
            omega,
        )
        .unwrap();
        match broken.validate_axioms() {
            Err(ActionError::AxiomIViolated(x, y, z)) => {
                let g = broken.group();
                let lhs = broken.omega(y, z).mul(broken.omega(x, g.mul(y, z)));
                let rhs = broken.omega(x, y).mul(broken.omega(g.mul(x, y), z));
                assert_ne!(lhs, rhs);
            }
            other => panic!("expected axiom (i) failure, got {other:?}"),
        }
    }

    #[test]
    fn bicharacter_family() {
        let s = shape(&[1]);
        let g1 = FiniteGroup::direct_product(&FiniteGroup::cyclic(1), &FiniteGroup::cyclic(1));
        let w = Cocycle::bicharacter(1, &g1, &s, 1).unwrap();
        assert_eq!(w, Cocycle::trivial(&g1, &s, 1));
        let g3 = FiniteGroup::direct_product(&FiniteGroup::cyclic(3), &FiniteGroup::cyclic(3));
        let w3 = Cocycle::bicharacter(3, &g3, &s, 3).unwrap();
        let sys = TwistedSystem::new(g3.clone(), s.clone(), 3, vec![AutoMap::identity(&s, 3); 9], w3).unwrap();
        assert_eq!(sys.validate_axioms().unwrap().axiom_i_triples, 729);
        assert!(matches!(
            Cocycle::bicharacter(3, &g3, &s, 4),
            Err(ActionError::ConductorIncompatible { n: 3, conductor: 4 })
        ));
    }

    #[test]
    fn alpha_not_homomorphism_breaks_axiom_ii() {
        let g = FiniteGroup::cyclic(3);
        let s = shape(&[1, 1]);
        let swap = AutoMap::swap_blocks(&s, 1, &[1, 0]).unwrap();
        let alphas = vec![AutoMap::identity(&s, 1), swap.clone(), swap];
        let omega = Cocycle::trivial(&g, &s, 1);
        let sys = TwistedSystem::assemble(g, s, 1, alphas, omega).unwrap();
        assert_eq!(sys.validate_axioms(), Err(ActionError::AxiomIIViolated(1, 1, 0)));
    }

    #[test]
    fn normalization_and_unitarity_failures() {
        let g = FiniteGroup::cyclic(2);
        let s = shape(&[1]);
        let mut omega = Cocycle::trivial(&g, &s, 4);
        omega.set(1, 1, AlgElement::scalar(&s, &CycScalar::from_int(4, 2)));
        let sys = TwistedSystem::assemble(g.clone(), s.clone(), 4, vec![AutoMap::identity(&s, 4); 2], omega).unwrap();
        assert_eq!(sys.validate_axioms(), Err(ActionError::NonUnitaryCocycleEntry(1, 1)));

        let mut omega = Cocycle::trivial(&g, &s, 4);
        omega.set(1, 0, AlgElement::scalar(&s, &CycScalar::root(4)));
        let sys = TwistedSystem::assemble(g, s.clone(), 4, vec![AutoMap::identity(&s, 4); 2], omega).unwrap();
        assert_eq!(
            sys.validate_axioms(),
            Err(ActionError::AxiomIIIViolated(Normalization::RightUnit(1)))
        );
    }

    #[test]
    fn unit_axiom_ii_is_tautological() {
        let sys = pauli_system();
        let one = sys.unit();
        for x in 0..4 {
            for y in 0..4 {
                let w = sys.omega(x, y);
                let lhs = sys.alpha(x).apply(&sys.alpha(y).apply(&one)).mul(w);
                let rhs = w.mul(&sys.alpha(sys.group().mul(x, y)).apply(&one));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn exterior_equivalence_preserves_axioms() {
        // Pauli instance: scalar unitaries ±1
        let sys = pauli_system();
        let s = sys.shape().clone();
        let u: Vec<AlgElement> = [1, -1, 1, -1]
            .iter()
            .map(|&c| AlgElement::scalar(&s, &CycScalar::from_int(2, c)))
            .collect();
        sys.exterior_equivalent(&u).unwrap().validate_axioms().unwrap();

        // a fixed inner automorphism of M₂ composed into every α_x, x ≠ e
        let m2 = shape(&[2]);
        let base = TwistedSystem::trivial(klein(), m2.clone(), 4);
        let i = CycScalar::root(4);
        let z = CycScalar::zero(4);
        let o = CycScalar::one(4);
        let v = AlgElement::from_blocks(vec![Matrix::from_rows(
            vec![vec![z.clone(), i.clone()], vec![o.clone(), z.clone()]],
            4,
        )
        .unwrap()])
        .unwrap();
        let mut u = vec![v; 4];
        u[0] = AlgElement::unit(&m2, 4);
        let twisted = base.exterior_equivalent(&u).unwrap();
        twisted.validate_axioms().unwrap();
        assert!(!twisted.alpha(1).is_identity());
    }
}
