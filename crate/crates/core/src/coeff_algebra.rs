//! The coefficient algebra `A = M_{n₁} ⊕ … ⊕ M_{n_k}` over ℚ(ζ_m).
//!
//! `A` is unital, so its multiplier algebra is `A` itself and unitary
//! multipliers are just unitaries of `A`. Coordinates run block by block,
//! row-major inside each block; the basis is the matching list of matrix units.

use thiserror::Error;

use crate::linalg::Matrix;
use crate::scalars::CycScalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgError {
    #[error("shape mismatch: {0:?} vs {1:?}")]
    ShapeMismatch(Vec<usize>, Vec<usize>),
    #[error("block shape must be a nonempty list of positive sizes")]
    InvalidShape,
    #[error("expected {expected} coordinates, found {found}")]
    CoordinateLength { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockShape(Vec<usize>);

impl BlockShape {
    pub fn new(blocks: Vec<usize>) -> Result<Self, AlgError> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(AlgError::InvalidShape);
        }
        Ok(BlockShape(blocks))
    }

    pub fn blocks(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.iter().map(|n| n * n).sum()
    }

    /// `(block, row, col)` for a global coordinate index.
    pub fn locate(&self, mut idx: usize) -> (usize, usize, usize) {
        for (b, &n) in self.0.iter().enumerate() {
            if idx < n * n {
                return (b, idx / n, idx % n);
            }
            idx -= n * n;
        }
        panic!("coordinate index out of range")
    }

    pub fn index_of(&self, block: usize, row: usize, col: usize) -> usize {
        let offset: usize = self.0[..block].iter().map(|n| n * n).sum();
        offset + row * self.0[block] + col
    }
}

/// Element of `A`, one square matrix per block.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgElement {
    blocks: Vec<Matrix>,
}

impl std::fmt::Debug for AlgElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(&self.blocks).finish()
    }
}

impl AlgElement {
    pub fn zero(shape: &BlockShape, conductor: u32) -> Self {
        AlgElement {
            blocks: shape
                .blocks()
                .iter()
                .map(|&n| Matrix::zeros(n, n, conductor))
                .collect(),
        }
    }

    pub fn unit(shape: &BlockShape, conductor: u32) -> Self {
        AlgElement {
            blocks: shape
                .blocks()
                .iter()
                .map(|&n| Matrix::identity(n, conductor))
                .collect(),
        }
    }

    /// `c · 1`.
    pub fn scalar(shape: &BlockShape, c: &CycScalar) -> Self {
        Self::unit(shape, c.conductor()).scale(c)
    }

    pub fn from_blocks(blocks: Vec<Matrix>) -> Result<Self, AlgError> {
        if blocks.is_empty() || blocks.iter().any(|b| b.rows() != b.cols() || b.rows() == 0) {
            return Err(AlgError::InvalidShape);
        }
        Ok(AlgElement { blocks })
    }

    /// Matrix unit `E_{row,col}` in the given block.
    pub fn matrix_unit(
        shape: &BlockShape,
        conductor: u32,
        block: usize,
        row: usize,
        col: usize,
    ) -> Self {
        let mut e = Self::zero(shape, conductor);
        e.blocks[block][(row, col)] = CycScalar::one(conductor);
        e
    }

    pub fn shape(&self) -> BlockShape {
        BlockShape(self.blocks.iter().map(Matrix::rows).collect())
    }

    pub fn conductor(&self) -> u32 {
        self.blocks[0].conductor()
    }

    pub fn blocks(&self) -> &[Matrix] {
        &self.blocks
    }

    fn same_shape(&self, other: &Self) -> Result<(), AlgError> {
        let (a, b) = (self.shape(), other.shape());
        if a == b {
            Ok(())
        } else {
            Err(AlgError::ShapeMismatch(a.0, b.0))
        }
    }

    fn zip_blocks(
        &self,
        other: &Self,
        f: impl Fn(&Matrix, &Matrix) -> Matrix,
    ) -> Result<Self, AlgError> {
        self.same_shape(other)?;
        Ok(AlgElement {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgError> {
        self.zip_blocks(other, Matrix::mul)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgError> {
        self.zip_blocks(other, Matrix::add)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgError> {
        self.zip_blocks(other, Matrix::sub)
    }

    /// Panicking product for internal use where shapes are known to agree.
    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("shape mismatch")
    }

    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("shape mismatch")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.try_sub(other).expect("shape mismatch")
    }

    pub fn scale(&self, c: &CycScalar) -> Self {
        AlgElement {
            blocks: self.blocks.iter().map(|b| b.scale(c)).collect(),
        }
    }

    /// Blockwise conjugate transpose.
    pub fn star(&self) -> Self {
        AlgElement {
            blocks: self.blocks.iter().map(Matrix::adjoint).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Matrix::is_zero)
    }

    pub fn is_unit(&self) -> bool {
        self.blocks.iter().all(Matrix::is_identity)
    }

    /// `u u* = u* u = 1`, exactly.
    pub fn is_unitary(&self) -> bool {
        let s = self.star();
        self.mul(&s).is_unit() && s.mul(self).is_unit()
    }

    pub fn to_coords(&self) -> Vec<CycScalar> {
        self.blocks
            .iter()
            .flat_map(|b| b.entries().iter().cloned())
            .collect()
    }

    pub fn from_coords(
        shape: &BlockShape,
        conductor: u32,
        coords: &[CycScalar],
    ) -> Result<Self, AlgError> {
        if coords.len() != shape.dim() {
            return Err(AlgError::CoordinateLength {
                expected: shape.dim(),
                found: coords.len(),
            });
        }
        let mut out = Self::zero(shape, conductor);
        for (idx, c) in coords.iter().enumerate() {
            let (b, i, j) = shape.locate(idx);
            out.blocks[b][(i, j)] = c.clone();
        }
        Ok(out)
    }

    /// Operator norm: the largest singular value over all blocks, computed in
    /// floating point under the complex embedding. Diagnostic only.
    pub fn op_norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| {
                let m = b.embed();
                m.singular_values().max()
            })
            .fold(0.0, f64::max)
    }
}

/// All matrix units, in coordinate order.
pub fn basis(shape: &BlockShape, conductor: u32) -> Vec<AlgElement> {
    (0..shape.dim())
        .map(|idx| {
            let (b, i, j) = shape.locate(idx);
            AlgElement::matrix_unit(shape, conductor, b, i, j)
        })
        .collect()
}
