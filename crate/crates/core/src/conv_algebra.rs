//! The twisted convolution algebra `B = ℓ¹_{α,ω}(G, A)` of a finite group.
//!
//! Haar measure is counting measure and the modular function is identically 1,
//! so integrals over `G` are plain sums. `B` is unital with unit `δ_e ⊗ 1`.
//!
//! Coordinates use the basis `δ_x ⊗ E` (`E` a matrix unit of `A`), with index
//! `x·dim(A) + k`.

use std::sync::Arc;

use thiserror::Error;

use crate::coeff_algebra::{AlgElement, BlockShape};
use crate::linalg::Matrix;
use crate::scalars::CycScalar;
use crate::twisted_action::TwistedSystem;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConvError {
    #[error("elements belong to different twisted systems")]
    SystemMismatch,
    #[error("multiplier symbol is not unitary")]
    NotUnitary,
    #[error("expected dimension {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("value has the wrong shape or conductor")]
    ForeignValue,
}

/// A function `G → A`.
#[derive(Clone)]
pub struct ConvElement {
    system: Arc<TwistedSystem>,
    values: Vec<AlgElement>,
}

impl PartialEq for ConvElement {
    fn eq(&self, other: &Self) -> bool {
        same_system(&self.system, &other.system) && self.values == other.values
    }
}

impl Eq for ConvElement {}

impl std::fmt::Debug for ConvElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map()
            .entries(
                self.values
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero()),
            )
            .finish()
    }
}

fn same_system(a: &Arc<TwistedSystem>, b: &Arc<TwistedSystem>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl ConvElement {
    pub fn zero(system: &Arc<TwistedSystem>) -> Self {
        let z = AlgElement::zero(system.shape(), system.conductor());
        ConvElement {
            system: system.clone(),
            values: vec![z; system.group().order()],
        }
    }

    /// `δ_x^a`: the function supported at `x` with value `a`.
    pub fn delta(system: &Arc<TwistedSystem>, x: usize, a: AlgElement) -> Self {
        let mut out = Self::zero(system);
        out.values[x] = a;
        out
    }

    /// The unit `δ_e^1`.
    pub fn unit(system: &Arc<TwistedSystem>) -> Self {
        Self::delta(system, system.group().identity(), system.unit())
    }

    pub fn from_values(
        system: &Arc<TwistedSystem>,
        values: Vec<AlgElement>,
    ) -> Result<Self, ConvError> {
        if values.len() != system.group().order() {
            return Err(ConvError::DimensionMismatch {
                expected: system.group().order(),
                found: values.len(),
            });
        }
        if values
            .iter()
            .any(|v| &v.shape() != system.shape() || v.conductor() != system.conductor())
        {
            return Err(ConvError::ForeignValue);
        }
        Ok(ConvElement {
            system: system.clone(),
            values,
        })
    }

    pub fn system(&self) -> &Arc<TwistedSystem> {
        &self.system
    }

    pub fn value(&self, x: usize) -> &AlgElement {
        &self.values[x]
    }

    pub fn values(&self) -> &[AlgElement] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(AlgElement::is_zero)
    }

    fn check(&self, other: &Self) -> Result<(), ConvError> {
        if same_system(&self.system, &other.system) {
            Ok(())
        } else {
            Err(ConvError::SystemMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ConvError> {
        self.check(other)?;
        Ok(ConvElement {
            system: self.system.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ConvError> {
        self.check(other)?;
        Ok(ConvElement {
            system: self.system.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.sub(b))
                .collect(),
        })
    }

    pub fn scale(&self, c: &CycScalar) -> Self {
        ConvElement {
            system: self.system.clone(),
            values: self.values.iter().map(|a| a.scale(c)).collect(),
        }
    }

    /// `(Φ*Ψ)(x) = Σ_y Φ(y) α_y(Ψ(y⁻¹x)) ω(y, y⁻¹x)`.
    pub fn convolve(&self, other: &Self) -> Result<Self, ConvError> {
        self.check(other)?;
        let sys = &self.system;
        let g = sys.group();
        let mut out = Self::zero(sys);
        for (y, phi_y) in self.values.iter().enumerate() {
            if phi_y.is_zero() {
                continue;
            }
            for (z, psi_z) in other.values.iter().enumerate() {
                if psi_z.is_zero() {
                    continue;
                }
                // x = yz, so y⁻¹x = z
                let x = g.mul(y, z);
                let term = phi_y.mul(&sys.alpha(y).apply(psi_z)).mul(sys.omega(y, z));
                out.values[x] = out.values[x].add(&term);
            }
        }
        Ok(out)
    }

    /// `Φ*(x) = ω(x, x⁻¹)* α_x(Φ(x⁻¹)*)`, with Δ ≡ 1.
    pub fn involve(&self) -> Self {
        let sys = &self.system;
        let g = sys.group();
        let values = g
            .elements()
            .map(|x| {
                let xi = g.inv(x);
                sys.omega(x, xi)
                    .star()
                    .mul(&sys.alpha(x).apply(&self.values[xi].star()))
            })
            .collect();
        ConvElement {
            system: sys.clone(),
            values,
        }
    }

    /// `Σ_x ‖Φ(x)‖_A`, float diagnostic.
    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(AlgElement::op_norm).sum()
    }

    pub fn to_vector(&self) -> Vec<CycScalar> {
        self.values.iter().flat_map(AlgElement::to_coords).collect()
    }

    pub fn from_vector(
        system: &Arc<TwistedSystem>,
        v: &[CycScalar],
    ) -> Result<Self, ConvError> {
        let d = system.conv_dim();
        if v.len() != d {
            return Err(ConvError::DimensionMismatch {
                expected: d,
                found: v.len(),
            });
        }
        let k = system.algebra_dim();
        let values = v
            .chunks(k)
            .map(|c| AlgElement::from_coords(system.shape(), system.conductor(), c))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| ConvError::ForeignValue)?;
        Ok(ConvElement {
            system: system.clone(),
            values,
        })
    }
}

/// Basis element `δ_x ⊗ E_k` for coordinate index `i = x·dim(A) + k`.
pub fn basis_element(system: &Arc<TwistedSystem>, i: usize) -> ConvElement {
    let k = system.algebra_dim();
    let shape: &BlockShape = system.shape();
    let (b, r, c) = shape.locate(i % k);
    ConvElement::delta(
        system,
        i / k,
        AlgElement::matrix_unit(shape, system.conductor(), b, r, c),
    )
}

pub fn basis(system: &Arc<TwistedSystem>) -> Vec<ConvElement> {
    (0..system.conv_dim())
        .map(|i| basis_element(system, i))
        .collect()
}

/// `m_{u,y}(Φ)(x) = u α_y(Φ(y⁻¹x)) ω(y, y⁻¹x)`, for any `u ∈ A`.
pub fn multiplier_apply(u: &AlgElement, y: usize, phi: &ConvElement) -> Result<ConvElement, ConvError> {
    let sys = &phi.system;
    if &u.shape() != sys.shape() || u.conductor() != sys.conductor() {
        return Err(ConvError::ForeignValue);
    }
    let g = sys.group();
    let mut out = ConvElement::zero(sys);
    for (z, v) in phi.values.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        out.values[g.mul(y, z)] = u.mul(&sys.alpha(y).apply(v)).mul(sys.omega(y, z));
    }
    Ok(out)
}

/// Symbol `(ω(y⁻¹,y)* α_{y⁻¹}(u*), y⁻¹)` of the adjoint of `m_{u,y}`.
pub fn adjoint_symbol(
    system: &TwistedSystem,
    u: &AlgElement,
    y: usize,
) -> Result<(AlgElement, usize), ConvError> {
    if !u.is_unitary() {
        return Err(ConvError::NotUnitary);
    }
    let yi = system.group().inv(y);
    let w = system
        .omega(yi, y)
        .star()
        .mul(&system.alpha(yi).apply(&u.star()));
    Ok((w, yi))
}

/// Applies the adjoint of `m_{u,y}` for unitary `u`.
pub fn multiplier_adjoint_apply(
    u: &AlgElement,
    y: usize,
    phi: &ConvElement,
) -> Result<ConvElement, ConvError> {
    let (w, yi) = adjoint_symbol(&phi.system, u, y)?;
    multiplier_apply(&w, yi, phi)
}

/// Matrix of `m_{u,y}` in the standard coordinates of `B`.
pub fn multiplier_matrix(
    system: &Arc<TwistedSystem>,
    u: &AlgElement,
    y: usize,
) -> Result<Matrix, ConvError> {
    let cols = basis(system)
        .iter()
        .map(|b| multiplier_apply(u, y, b).map(|r| r.to_vector()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_columns(&cols, system.conv_dim(), system.conductor()))
}

/// Matrix of `Ψ ↦ Φ*Ψ`.
pub fn left_mult_matrix(phi: &ConvElement) -> Matrix {
    let sys = &phi.system;
    let cols: Vec<Vec<CycScalar>> = basis(sys)
        .iter()
        .map(|b| phi.convolve(b).expect("same system").to_vector())
        .collect();
    Matrix::from_columns(&cols, sys.conv_dim(), sys.conductor())
}

/// Matrix of `Ψ ↦ Ψ*Φ`.
pub fn right_mult_matrix(phi: &ConvElement) -> Matrix {
    let sys = &phi.system;
    let cols: Vec<Vec<CycScalar>> = basis(sys)
        .iter()
        .map(|b| b.convolve(phi).expect("same system").to_vector())
        .collect();
    Matrix::from_columns(&cols, sys.conv_dim(), sys.conductor())
}

/// Checks that `phi` lives in `system`; used by callers that accept
/// externally built elements.
pub fn ensure_member(system: &Arc<TwistedSystem>, phi: &ConvElement) -> Result<(), ConvError> {
    if same_system(system, &phi.system) {
        Ok(())
    } else {
        Err(ConvError::SystemMismatch)
    }
}
