mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use twisted_lab::conv_algebra::basis_element;
use twisted_lab::ideal_lab::{self, IdealLab, IdealWitness, Subspace};
use twisted_lab::{AlgElement, ConvElement, CycScalar};

use common::*;

fn lab(name: &str) -> IdealLab {
    IdealLab::new(system(name))
}

#[test]
fn unit_generates_everything() {
    for name in GOLDEN {
        let l = lab(name);
        let sys = l.system().clone();
        let i = l.generate_two_sided_ideal(&[ConvElement::unit(&sys)]).unwrap();
        assert!(i.is_full(), "{name}");
        let b = Subspace::full(l.dim(), sys.conductor());
        assert_eq!(l.ideal_product(&b, &b), b, "{name}");
    }
}

#[test]
fn basis_line_is_not_a_left_ideal() {
    let l = lab("group_z2_trivial");
    let sys = l.system().clone();
    let line = l.span(&[basis_element(&sys, 0)]).unwrap();
    // δ₁ * δ₀ = δ₁ leaves the line
    assert_eq!(l.is_left_ideal(&line), Err(IdealWitness::LeftProduct { basis: 1, row: 0 }));
    let w = l.is_translation_invariant(&line).unwrap_err();
    assert_eq!((w.u_basis, w.y), (0, 1));
    assert!(l.is_translation_invariant(&Subspace::full(2, 1)).is_ok());
}

#[test]
fn quotient_by_zero_reproduces_structure() {
    for name in GOLDEN {
        let l = lab(name);
        let zero = Subspace::zero(l.dim(), l.system().conductor());
        let q = l.quotient(&zero).unwrap();
        assert_eq!(q.table().products(), l.table().products(), "{name}");
        assert_eq!(q.table().star_matrix(), l.table().star_matrix(), "{name}");
        let full = Subspace::full(l.dim(), l.system().conductor());
        assert_eq!(l.quotient(&full).unwrap().dim(), 0);
    }
}

#[test]
fn center_dimensions() {
    // ℤ₄ is abelian; D₃ has three conjugacy classes; the twisted and crossed
    // products are full matrix algebras
    let expected = [4, 1, 1, 1, 3];
    for (name, want) in GOLDEN.iter().zip(expected) {
        assert_eq!(lab(name).center_dim(), want, "{name}");
    }
}

#[test]
fn z4_ideals_are_sums_of_character_lines() {
    let l = lab("group_z4_trivial");
    let i = CycScalar::root(4);
    // e_k = Σ_x i^{kx} δ_x spans the line on which δ_1 acts by i^{-k}
    let lines: Vec<Subspace> = (0..4u64)
        .map(|k| {
            let v: Vec<CycScalar> = (0..4u64).map(|x| i.pow(k * x)).collect();
            Subspace::span(4, 4, &[v]).unwrap()
        })
        .collect();
    let oracle: BTreeSet<Subspace> = (0..16u32)
        .map(|mask| {
            (0..4)
                .filter(|b| mask & (1 << b) != 0)
                .fold(Subspace::zero(4, 4), |acc, b| acc.sum(&lines[b]))
        })
        .collect();
    let found: BTreeSet<Subspace> = l.enumerate_ideals().unwrap().into_iter().collect();
    assert_eq!(found.len(), 16);
    assert_eq!(found, oracle);
    for ideal in &found {
        assert!(l.is_star_closed(ideal).is_ok());
        assert!(ideal_lab::radical(l.quotient(ideal).unwrap().table()).is_zero());
    }
}

#[test]
fn radical_matches_nilpotent_oracle() {
    for name in RAW {
        let alg = raw(name);
        let rad = ideal_lab::radical(alg.table());
        assert_eq!(rad, nilpotent_oracle(alg.table()), "{name}");
        let q = ideal_lab::quotient(alg.table(), &rad).unwrap();
        assert!(ideal_lab::radical(q.table()).is_zero(), "{name}");
    }
    let ut = raw("upper_triangular");
    let rad = ideal_lab::radical(ut.table());
    assert_eq!(rad.dim(), 1);
    assert!(rad.contains(&[CycScalar::zero(1), CycScalar::one(1), CycScalar::zero(1)]));
}

#[test]
fn simple_instances_have_zero_radical() {
    for name in ["pauli_z2z2", "nc_torus_3", "swap_z2"] {
        assert!(lab(name).radical().is_zero(), "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn nonzero_elements_generate_pauli(seed in any::<u64>()) {
        let l = lab("pauli_z2z2");
        let g = conv_element(&mut rng(seed), l.system());
        prop_assume!(!g.is_zero());
        prop_assert!(l.generate_two_sided_ideal(&[g]).unwrap().is_full());
    }

    #[test]
    fn generated_ideals_are_star_ideals_with_semisimple_quotient(k in 0usize..5, seed in any::<u64>()) {
        let l = lab(GOLDEN[k]);
        let mut r = rng(seed);
        let g = conv_element(&mut r, l.system());
        let h = conv_element(&mut r, l.system());
        let prod = g.convolve(&h).unwrap();
        let i = l.generate_two_sided_ideal(&[prod]).unwrap();
        prop_assert!(l.is_two_sided(&i).is_ok());
        prop_assert!(l.is_star_closed(&i).is_ok());
        prop_assert!(ideal_lab::radical(l.quotient(&i).unwrap().table()).is_zero());
        prop_assert_eq!(&l.ideal_product(&i, &i), &i);
    }

    #[test]
    fn left_ideals_are_exactly_the_invariant_subspaces(k in 0usize..5, seed in any::<u64>()) {
        let l = lab(GOLDEN[k]);
        let mut r = rng(seed);
        let g = conv_element(&mut r, l.system());
        let left = l.generate_left_ideal(std::slice::from_ref(&g)).unwrap();
        prop_assert!(l.is_left_ideal(&left).is_ok());
        prop_assert!(l.is_translation_invariant(&left).is_ok());
        let line = l.span(&[g]).unwrap();
        prop_assert_eq!(l.is_left_ideal(&line).is_ok(), l.is_translation_invariant(&line).is_ok());
        // a left ideal generated by one element is the least invariant subspace containing it
        if let Some(v) = line.rows().first() {
            let sys = l.system();
            let u = AlgElement::unit(sys.shape(), sys.conductor());
            let phi = ConvElement::from_vector(sys, v).unwrap();
            for y in sys.group().elements() {
                let moved = twisted_lab::conv_algebra::multiplier_apply(&u, y, &phi).unwrap();
                prop_assert!(left.contains(&moved.to_vector()));
            }
        }
    }
}
