#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twisted_lab::cli::instance::{load_raw_algebra, InstanceSpec};
use twisted_lab::ideal_lab::{AlgebraTable, RawAlgebra, Subspace};
use twisted_lab::proof_replay::signed_permutation_generators;
use twisted_lab::{AlgElement, BlockShape, ConvElement, CycScalar, TwistedSystem};

pub const GOLDEN: [&str; 5] = [
    "group_z4_trivial",
    "pauli_z2z2",
    "nc_torus_3",
    "swap_z2",
    "dihedral3_trivial",
];

pub const RAW: [&str; 5] = [
    "upper_triangular",
    "dual_numbers",
    "m2",
    "q2",
    "truncated_poly",
];

pub fn instance_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("instances")
        .join(format!("{name}.json"))
}

pub fn spec(name: &str) -> InstanceSpec {
    InstanceSpec::load(&instance_path(name)).unwrap()
}

pub fn system(name: &str) -> Arc<TwistedSystem> {
    Arc::new(spec(name).build().unwrap())
}

pub fn raw(name: &str) -> RawAlgebra {
    load_raw_algebra(&instance_path(&format!("raw/{name}"))).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small random scalar: integer coefficients in [-3, 3] on the power basis.
pub fn scalar(rng: &mut ChaCha8Rng, m: u32) -> CycScalar {
    if rng.random_bool(0.3) {
        return CycScalar::zero(m);
    }
    let n = twisted_lab::scalars::totient(m);
    let coeffs: Vec<_> = (0..n)
        .map(|_| twisted_lab::Rational::from_integer(rng.random_range(-3i64..=3).into()))
        .collect();
    CycScalar::from_reduced(m, coeffs).unwrap()
}

pub fn alg_element(rng: &mut ChaCha8Rng, shape: &BlockShape, m: u32) -> AlgElement {
    let coords: Vec<CycScalar> = (0..shape.dim()).map(|_| scalar(rng, m)).collect();
    AlgElement::from_coords(shape, m, &coords).unwrap()
}

pub fn conv_element(rng: &mut ChaCha8Rng, sys: &Arc<TwistedSystem>) -> ConvElement {
    let values = (0..sys.group().order())
        .map(|_| alg_element(rng, sys.shape(), sys.conductor()))
        .collect();
    ConvElement::from_values(sys, values).unwrap()
}

/// Random unitary of `A`: a product of signed permutation generators and a
/// diagonal of roots of unity.
pub fn unitary(rng: &mut ChaCha8Rng, shape: &BlockShape, m: u32) -> AlgElement {
    let gens = signed_permutation_generators(shape, m);
    let mut u = AlgElement::unit(shape, m);
    for _ in 0..rng.random_range(0..6) {
        u = u.mul(&gens[rng.random_range(0..gens.len())]);
    }
    let mut phase = AlgElement::unit(shape, m).blocks().to_vec();
    for b in phase.iter_mut() {
        for i in 0..b.rows() {
            b[(i, i)] = CycScalar::root_power(m, rng.random_range(0..m as i64));
        }
    }
    u.mul(&AlgElement::from_blocks(phase).unwrap())
}

fn basis_vector(d: usize, m: u32, i: usize) -> Vec<CycScalar> {
    let mut v = vec![CycScalar::zero(m); d];
    v[i] = CycScalar::one(m);
    v
}

/// Product in an algebra table, computed directly from structure constants.
fn mul(t: &AlgebraTable, u: &[CycScalar], v: &[CycScalar]) -> Vec<CycScalar> {
    let (d, m) = (t.dim(), t.conductor());
    let mut out = vec![CycScalar::zero(m); d];
    for (i, ui) in u.iter().enumerate() {
        for (j, vj) in v.iter().enumerate() {
            let c = ui * vj;
            if c.is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(t.product(i, j)) {
                *o = &*o + &(&c * p);
            }
        }
    }
    out
}

/// Two-sided ideal generated by `v`: span of `a v b` over basis elements
/// `a, b` (including the unit-free terms `v`, `a v`, `v b`).
fn principal_ideal(t: &AlgebraTable, v: &[CycScalar]) -> Subspace {
    let (d, m) = (t.dim(), t.conductor());
    let mut vecs = vec![v.to_vec()];
    for a in 0..d {
        let ea = basis_vector(d, m, a);
        let av = mul(t, &ea, v);
        vecs.push(mul(t, v, &ea));
        for b in 0..d {
            vecs.push(mul(t, &av, &basis_vector(d, m, b)));
        }
        vecs.push(av);
    }
    Subspace::span(d, m, &vecs).unwrap()
}

fn is_nilpotent(t: &AlgebraTable, j: &Subspace) -> bool {
    let (d, m) = (t.dim(), t.conductor());
    let mut power = j.clone();
    for _ in 0..=d {
        if power.is_zero() {
            return true;
        }
        let prods: Vec<Vec<CycScalar>> = power
            .rows()
            .iter()
            .flat_map(|p| j.rows().iter().map(move |q| mul(t, p, q)))
            .collect();
        power = Subspace::span(d, m, &prods).unwrap();
    }
    power.is_zero()
}

/// Sum of the nilpotent principal ideals generated by vectors with entries in
/// {-1, 0, 1}. Equals the radical whenever the radical has such a spanning set.
pub fn nilpotent_oracle(t: &AlgebraTable) -> Subspace {
    let (d, m) = (t.dim(), t.conductor());
    let mut acc = Subspace::zero(d, m);
    let total = 3usize.pow(d as u32);
    for code in 0..total {
        let v: Vec<CycScalar> = (0..d)
            .map(|i| CycScalar::from_int(m, (code / 3usize.pow(i as u32) % 3) as i64 - 1))
            .collect();
        if v.iter().all(CycScalar::is_zero) || acc.contains(&v) {
            continue;
        }
        let j = principal_ideal(t, &v);
        if is_nilpotent(t, &j) {
            acc = acc.sum(&j);
        }
    }
    acc
}
