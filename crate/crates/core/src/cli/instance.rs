//! JSON instance files and their translation into engine objects.
//!
//! ```json
//! {
//!   "name": "pauli_z2z2",
//!   "conductor": 2,
//!   "group": {"family": "product", "factors": [{"family": "cyclic", "n": 2},
//!                                             {"family": "cyclic", "n": 2}]},
//!   "algebra": {"blocks": [1]},
//!   "action": {"kind": "trivial"},
//!   "cocycle": {"kind": "bicharacter", "n": 2},
//!   "options": {"seed": 7, "count": 200}
//! }
//! ```
//!
//! Scalars are written as an integer, a rational string `"p/q"`, or a list of
//! rational coefficients of `1, ζ, ζ², …` (any length; reduced mod Φ_m).
//! Elements of `A` are a single scalar (meaning that multiple of the unit) or
//! a list of blocks, each a list of rows.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;
use thiserror::Error;

use crate::coeff_algebra::{AlgElement, BlockShape};
use crate::conv_algebra::ConvElement;
use crate::groups::{FiniteGroup, GroupError};
use crate::ideal_lab::{IdealError, RawAlgebra};
use crate::linalg::Matrix;
use crate::proof_replay::GeneratorChoice;
use crate::scalars::{parse_rational, CycScalar, Rational};
use crate::twisted_action::{ActionError, AutoMap, AutoMapError, Cocycle, TwistedSystem};

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("group table rejected: {0}")]
    Group(#[from] GroupError),
    #[error("{0}")]
    Action(#[from] ActionError),
    #[error("{0}")]
    Ideal(#[from] IdealError),
}

impl InstanceError {
    /// Whether the failure is a mathematical verdict rather than bad input.
    pub fn is_math_failure(&self) -> bool {
        matches!(
            self,
            InstanceError::Group(_) | InstanceError::Action(_) | InstanceError::Ideal(_)
        )
    }
}

fn read(path: &Path) -> Result<String, InstanceError> {
    std::fs::read_to_string(path).map_err(|source| InstanceError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, InstanceError> {
    serde_json::from_str(text).map_err(|e| InstanceError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ScalarSpec {
    Int(i64),
    Text(String),
    Powers(Vec<PowerCoeff>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum PowerCoeff {
    Int(i64),
    Text(String),
}

impl PowerCoeff {
    fn to_rational(&self) -> Result<Rational, InstanceError> {
        match self {
            PowerCoeff::Int(v) => Ok(Rational::from_integer((*v).into())),
            PowerCoeff::Text(s) => {
                parse_rational(s).map_err(|e| InstanceError::Invalid(format!("scalar `{s}`: {e}")))
            }
        }
    }
}

impl ScalarSpec {
    pub fn build(&self, conductor: u32) -> Result<CycScalar, InstanceError> {
        match self {
            ScalarSpec::Int(v) => Ok(CycScalar::from_int(conductor, *v)),
            ScalarSpec::Text(s) => PowerCoeff::Text(s.clone())
                .to_rational()
                .map(|r| CycScalar::from_rational(conductor, r)),
            ScalarSpec::Powers(cs) => {
                let rs = cs
                    .iter()
                    .map(PowerCoeff::to_rational)
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(CycScalar::from_power_coeffs(conductor, &rs))
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum AlgSpec {
    Scalar(ScalarSpec),
    Blocks(Vec<Vec<Vec<ScalarSpec>>>),
}

impl AlgSpec {
    pub fn build(&self, shape: &BlockShape, conductor: u32) -> Result<AlgElement, InstanceError> {
        match self {
            AlgSpec::Scalar(s) => Ok(AlgElement::scalar(shape, &s.build(conductor)?)),
            AlgSpec::Blocks(blocks) => {
                if blocks.len() != shape.blocks().len() {
                    return Err(InstanceError::Invalid(format!(
                        "element has {} blocks, algebra has {}",
                        blocks.len(),
                        shape.blocks().len()
                    )));
                }
                let mats = blocks
                    .iter()
                    .zip(shape.blocks())
                    .map(|(rows, &n)| {
                        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                            return Err(InstanceError::Invalid(format!(
                                "block must be {n}×{n}"
                            )));
                        }
                        build_matrix(rows, conductor)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                AlgElement::from_blocks(mats).map_err(|e| InstanceError::Invalid(e.to_string()))
            }
        }
    }
}

fn build_matrix(rows: &[Vec<ScalarSpec>], conductor: u32) -> Result<Matrix, InstanceError> {
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|s| s.build(conductor)).collect())
        .collect::<Result<Vec<Vec<_>>, _>>()?;
    Matrix::from_rows(rows, conductor).map_err(|e| InstanceError::Invalid(e.to_string()))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Cyclic { n: usize },
    Dihedral { n: usize },
    Product { factors: Vec<GroupSpec> },
    Table { table: Vec<Vec<usize>> },
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup, InstanceError> {
        let g = match self {
            GroupSpec::Cyclic { n } | GroupSpec::Dihedral { n } if *n == 0 => {
                return Err(InstanceError::Invalid("group parameter n must be ≥ 1".into()));
            }
            GroupSpec::Cyclic { n } => FiniteGroup::cyclic(*n),
            GroupSpec::Dihedral { n } => FiniteGroup::dihedral(*n),
            GroupSpec::Product { factors } => {
                let mut it = factors.iter();
                let first = it
                    .next()
                    .ok_or_else(|| InstanceError::Invalid("empty product".into()))?
                    .build()?;
                it.try_fold(first, |acc, f| {
                    Ok::<_, InstanceError>(FiniteGroup::direct_product(&acc, &f.build()?))
                })?
            }
            GroupSpec::Table { table } => return Ok(FiniteGroup::validate_table(table)?),
        };
        if g.order() > crate::groups::DEFAULT_ORDER_CAP {
            return Err(GroupError::OrderCap {
                order: g.order(),
                cap: crate::groups::DEFAULT_ORDER_CAP,
            }
            .into());
        }
        Ok(g)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub blocks: Vec<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapSpec {
    Identity,
    SwapBlocks { perm: Vec<usize> },
    Inner { unitary: AlgSpec },
    Matrix { matrix: Vec<Vec<ScalarSpec>> },
}

impl MapSpec {
    fn build(&self, x: usize, shape: &BlockShape, conductor: u32) -> Result<AutoMap, InstanceError> {
        let bad = |source: AutoMapError| InstanceError::Action(ActionError::BadAutomorphism { x, source });
        match self {
            MapSpec::Identity => Ok(AutoMap::identity(shape, conductor)),
            MapSpec::SwapBlocks { perm } => AutoMap::swap_blocks(shape, conductor, perm).map_err(bad),
            MapSpec::Inner { unitary } => AutoMap::inner(&unitary.build(shape, conductor)?).map_err(bad),
            MapSpec::Matrix { matrix } => Ok(AutoMap::from_matrix(build_matrix(matrix, conductor)?)),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ActionSpec {
    Trivial,
    PerElement { maps: Vec<MapSpec> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CocycleSpec {
    Trivial,
    Bicharacter { n: usize },
    Table { table: Vec<Vec<AlgSpec>> },
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    pub seed: Option<u64>,
    pub count: Option<usize>,
    pub wgen: Option<String>,
    pub cap: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub name: String,
    pub conductor: u32,
    pub group: GroupSpec,
    pub algebra: AlgebraSpec,
    pub action: ActionSpec,
    pub cocycle: CocycleSpec,
    #[serde(default)]
    pub options: Options,
}

impl InstanceSpec {
    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        parse_json(text)
    }

    pub fn load(path: &Path) -> Result<Self, InstanceError> {
        Self::parse(&read(path)?)
    }

    pub fn shape(&self) -> Result<BlockShape, InstanceError> {
        BlockShape::new(self.algebra.blocks.clone()).map_err(|e| InstanceError::Invalid(e.to_string()))
    }

    pub fn generator_choice(&self) -> Result<Option<GeneratorChoice>, InstanceError> {
        self.options
            .wgen
            .as_deref()
            .map(|s| s.parse().map_err(InstanceError::Invalid))
            .transpose()
    }

    /// Builds the system without checking the axioms.
    pub fn assemble(&self) -> Result<TwistedSystem, InstanceError> {
        let m = self.conductor;
        if m == 0 {
            return Err(InstanceError::Invalid("conductor must be ≥ 1".into()));
        }
        let group = self.group.build()?;
        let shape = self.shape()?;
        let n = group.order();
        let alphas = match &self.action {
            ActionSpec::Trivial => vec![AutoMap::identity(&shape, m); n],
            ActionSpec::PerElement { maps } => {
                if maps.len() != n {
                    return Err(ActionError::AlphaCount {
                        expected: n,
                        found: maps.len(),
                    }
                    .into());
                }
                maps.iter()
                    .enumerate()
                    .map(|(x, s)| s.build(x, &shape, m))
                    .collect::<Result<Vec<_>, _>>()?
            }
        };
        let omega = match &self.cocycle {
            CocycleSpec::Trivial => Cocycle::trivial(&group, &shape, m),
            CocycleSpec::Bicharacter { n } => Cocycle::bicharacter(*n, &group, &shape, m)?,
            CocycleSpec::Table { table } => {
                let t = table
                    .iter()
                    .map(|row| row.iter().map(|a| a.build(&shape, m)).collect())
                    .collect::<Result<Vec<Vec<_>>, _>>()?;
                Cocycle::from_table(t)?
            }
        };
        Ok(TwistedSystem::assemble(group, shape, m, alphas, omega)?)
    }

    /// Builds and validates the system.
    pub fn build(&self) -> Result<TwistedSystem, InstanceError> {
        let sys = self.assemble()?;
        sys.validate_axioms()?;
        Ok(sys)
    }
}

/// Ideal generators: each a map from group element index to its value.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorsSpec {
    pub generators: Vec<BTreeMap<String, AlgSpec>>,
}

impl GeneratorsSpec {
    pub fn load(path: &Path) -> Result<Self, InstanceError> {
        parse_json(&read(path)?)
    }

    pub fn build(&self, system: &Arc<TwistedSystem>) -> Result<Vec<ConvElement>, InstanceError> {
        let n = system.group().order();
        self.generators
            .iter()
            .map(|g| {
                let mut values = vec![AlgElement::zero(system.shape(), system.conductor()); n];
                for (k, v) in g {
                    let x: usize = k
                        .parse()
                        .ok()
                        .filter(|&x| x < n)
                        .ok_or_else(|| InstanceError::Invalid(format!("`{k}` is not a group element")))?;
                    values[x] = v.build(system.shape(), system.conductor())?;
                }
                ConvElement::from_values(system, values).map_err(|e| InstanceError::Invalid(e.to_string()))
            })
            .collect()
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgebraSpec {
    dim: usize,
    #[serde(default = "one")]
    conductor: u32,
    structure: Vec<Vec<Vec<ScalarSpec>>>,
}

fn one() -> u32 {
    1
}

/// Loads `{"dim": q, "structure": [[[scalar, …], …], …]}` where
/// `structure[i][j]` holds the coordinates of `e_i e_j`.
pub fn parse_raw_algebra(text: &str) -> Result<RawAlgebra, InstanceError> {
    let spec: RawAlgebraSpec = parse_json(text)?;
    if spec.conductor == 0 {
        return Err(InstanceError::Invalid("conductor must be ≥ 1".into()));
    }
    let s = spec
        .structure
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| v.iter().map(|c| c.build(spec.conductor)).collect())
                .collect()
        })
        .collect::<Result<Vec<Vec<Vec<_>>>, _>>()?;
    Ok(RawAlgebra::new(spec.dim, spec.conductor, s)?)
}

pub fn load_raw_algebra(path: &Path) -> Result<RawAlgebra, InstanceError> {
    parse_raw_algebra(&read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_forms() {
        let i: ScalarSpec = serde_json::from_str(r#"["0", 1]"#).unwrap();
        assert_eq!(i.build(4).unwrap(), CycScalar::root(4));
        let h: ScalarSpec = serde_json::from_str(r#""-1/2""#).unwrap();
        assert_eq!(h.build(1).unwrap().as_rational().unwrap(), &Rational::new((-1).into(), 2.into()));
        // ζ3² = -1 - ζ3
        let z: ScalarSpec = serde_json::from_str("[0, 0, 1]").unwrap();
        assert_eq!(z.build(3).unwrap(), CycScalar::root_power(3, 2));
        let bad: ScalarSpec = serde_json::from_str(r#""x/2""#).unwrap();
        assert!(bad.build(1).is_err());
    }

    #[test]
    fn parse_errors_carry_position() {
        match InstanceSpec::parse("{\n  \"name\": 3,\n}") {
            Err(InstanceError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn algebra_elements() {
        let shape = BlockShape::new(vec![2, 1]).unwrap();
        let a: AlgSpec = serde_json::from_str(r#"[[[0, 1], [1, 0]], [[-1]]]"#).unwrap();
        let a = a.build(&shape, 1).unwrap();
        assert!(a.is_unitary());
        let s: AlgSpec = serde_json::from_str("3").unwrap();
        assert_eq!(s.build(&shape, 1).unwrap(), AlgElement::scalar(&shape, &CycScalar::from_int(1, 3)));
        let wrong: AlgSpec = serde_json::from_str(r#"[[[1]]]"#).unwrap();
        assert!(wrong.build(&shape, 1).is_err());
    }

    #[test]
    fn raw_algebra_checks_associativity() {
        let ok = r#"{"dim": 1, "structure": [[[1]]]}"#;
        assert_eq!(parse_raw_algebra(ok).unwrap().table().dim(), 1);
        let bad = r#"{"dim": 2, "structure": [[[0, 1], [1, 0]], [[0, 0], [0, 0]]]}"#;
        assert!(matches!(
            parse_raw_algebra(bad),
            Err(InstanceError::Ideal(IdealError::NotAssociative(..)))
        ));
    }
}
