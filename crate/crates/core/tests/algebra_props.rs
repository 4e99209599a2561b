mod common;

use std::sync::Arc;

use proptest::prelude::*;
use twisted_lab::conv_algebra::{adjoint_symbol, multiplier_matrix};
use twisted_lab::{AlgElement, BlockShape, FiniteGroup, TwistedSystem};

use common::*;

fn small_group() -> impl Strategy<Value = FiniteGroup> {
    let leaf = prop_oneof![
        (1usize..6).prop_map(FiniteGroup::cyclic),
        (1usize..5).prop_map(FiniteGroup::dihedral),
    ];
    (leaf.clone(), prop::option::of(leaf)).prop_filter_map("order cap", |(g, h)| {
        let p = match h {
            Some(h) => FiniteGroup::direct_product(&g, &h),
            None => g,
        };
        (p.order() <= 40).then_some(p)
    })
}

fn shape() -> impl Strategy<Value = BlockShape> {
    prop::collection::vec(1usize..=3, 1..=3).prop_map(|b| BlockShape::new(b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constructed_groups_are_groups(g in small_group()) {
        let again = FiniteGroup::validate_table(&g.table()).unwrap();
        prop_assert_eq!(&again, &g);
        for x in g.elements() {
            prop_assert_eq!(g.mul(x, g.inv(x)), g.identity());
            prop_assert_eq!(g.mul(g.inv(x), x), g.identity());
        }
    }

    #[test]
    fn product_order(g in small_group(), h in small_group()) {
        prop_assume!(g.order() * h.order() <= 200);
        prop_assert_eq!(FiniteGroup::direct_product(&g, &h).order(), g.order() * h.order());
    }

    #[test]
    fn coefficient_algebra_laws(s in shape(), m in prop::sample::select(vec![1u32, 3, 4]), seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b, c) = (alg_element(&mut r, &s, m), alg_element(&mut r, &s, m), alg_element(&mut r, &s, m));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b).star(), b.star().mul(&a.star()));
        prop_assert_eq!(AlgElement::from_coords(&s, m, &a.to_coords()).unwrap(), a);
    }

    #[test]
    fn unitaries_have_norm_one(s in shape(), m in prop::sample::select(vec![1u32, 4, 6]), seed in any::<u64>()) {
        let u = unitary(&mut rng(seed), &s, m);
        prop_assert!(u.is_unitary());
        prop_assert!((u.op_norm() - 1.0).abs() <= 1e-6);
    }

    #[test]
    fn convolution_norm_is_submultiplicative(k in 0usize..5, seed in any::<u64>()) {
        let sys = system(GOLDEN[k]);
        let mut r = rng(seed);
        let (a, b) = (conv_element(&mut r, &sys), conv_element(&mut r, &sys));
        prop_assert!(a.convolve(&b).unwrap().l1_norm() <= a.l1_norm() * b.l1_norm() + 1e-6);
    }

    #[test]
    fn multipliers_compose_and_are_unitary(k in 0usize..5, seed in any::<u64>()) {
        use rand::Rng;
        let sys = system(GOLDEN[k]);
        let (shape, m) = (sys.shape().clone(), sys.conductor());
        let mut r = rng(seed);
        let n = sys.group().order();
        let (y, z) = (r.random_range(0..n), r.random_range(0..n));
        let (u, v) = (unitary(&mut r, &shape, m), unitary(&mut r, &shape, m));
        let mu = multiplier_matrix(&sys, &u, y).unwrap();
        let mv = multiplier_matrix(&sys, &v, z).unwrap();
        let w = u.mul(&sys.alpha(y).apply(&v)).mul(sys.omega(y, z));
        prop_assert!(w.is_unitary());
        prop_assert_eq!(mu.mul(&mv), multiplier_matrix(&sys, &w, sys.group().mul(y, z)).unwrap());
        let (a, yi) = adjoint_symbol(&sys, &u, y).unwrap();
        prop_assert_eq!(multiplier_matrix(&sys, &a, yi).unwrap(), mu.adjoint());
    }

    #[test]
    fn exterior_equivalence_preserves_axioms(k in 0usize..5, seed in any::<u64>()) {
        let sys = system(GOLDEN[k]);
        let mut r = rng(seed);
        let (shape, m) = (sys.shape().clone(), sys.conductor());
        let e = sys.group().identity();
        let us: Vec<AlgElement> = sys
            .group()
            .elements()
            .map(|x| if x == e { AlgElement::unit(&shape, m) } else { unitary(&mut r, &shape, m) })
            .collect();
        let twisted = sys.exterior_equivalent(&us).unwrap();
        prop_assert!(twisted.validate_axioms().is_ok());
    }
}

#[test]
fn normalization_holds_on_shipped_instances() {
    for name in GOLDEN {
        let sys: Arc<TwistedSystem> = system(name);
        let e = sys.group().identity();
        assert!(sys.alpha(e).is_identity(), "{name}");
        for x in sys.group().elements() {
            assert!(sys.omega(x, e).is_unit() && sys.omega(e, x).is_unit(), "{name}");
        }
        // axiom (ii) at a = 1 reads ω(x,y) = ω(x,y)
        let one = sys.unit();
        for x in sys.group().elements() {
            for y in sys.group().elements() {
                let w = sys.omega(x, y);
                let lhs = sys.alpha(x).apply(&sys.alpha(y).apply(&one)).mul(w);
                let rhs = w.mul(&sys.alpha(sys.group().mul(x, y)).apply(&one));
                assert_eq!(lhs, rhs, "{name}");
            }
        }
    }
}
