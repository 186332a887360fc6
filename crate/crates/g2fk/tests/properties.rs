//! Randomized property tests for the group engine invariants.

use g2fk::engine::{GroupTable, Model};
use g2fk::field::Fp;
use proptest::prelude::*;
use std::sync::OnceLock;

fn table5() -> &'static GroupTable {
    static T: OnceLock<GroupTable> = OnceLock::new();
    T.get_or_init(|| GroupTable::build(Fp::new(5).unwrap(), Model::Poly).unwrap())
}

fn table3() -> &'static GroupTable {
    static T: OnceLock<GroupTable> = OnceLock::new();
    T.get_or_init(|| GroupTable::build(Fp::new(3).unwrap(), Model::Chevalley).unwrap())
}

proptest! {
    #[test]
    fn associativity_p5(a in 0u32..15_625, b in 0u32..15_625, c in 0u32..15_625) {
        let t = table5();
        prop_assert_eq!(t.mul(t.mul(a, b), c), t.mul(a, t.mul(b, c)));
    }

    #[test]
    fn identity_and_inverse_p5(a in 0u32..15_625) {
        let t = table5();
        let e = t.identity();
        prop_assert_eq!(t.mul(a, e), a);
        prop_assert_eq!(t.mul(e, a), a);
        prop_assert_eq!(t.mul(a, t.inv(a)), e);
        prop_assert_eq!(t.mul(t.inv(a), a), e);
    }

    #[test]
    fn factorization_round_trip_p5(a in 0u32..15_625) {
        let t = table5();
        let coords = t.factor(a);
        let mut acc = t.identity();
        for (i, &l) in coords.iter().enumerate() {
            acc = t.mul(acc, t.pow(t.generator(i + 1, 1), l));
        }
        prop_assert_eq!(acc, a);
    }

    #[test]
    fn element_orders_divide_exponent_p5(a in 0u32..15_625) {
        // S has exponent p^2 at p = 5.
        let t = table5();
        prop_assert!([1, 5, 25].contains(&t.element_order(a)));
    }

    #[test]
    fn conjugation_preserves_order_p5(a in 0u32..15_625, g in 0u32..15_625) {
        let t = table5();
        let conj = t.mul(t.mul(t.inv(g), a), g);
        prop_assert_eq!(t.element_order(conj), t.element_order(a));
    }

    #[test]
    fn inverse_antihomomorphism_p3(a in 0u32..729, b in 0u32..729) {
        let t = table3();
        prop_assert_eq!(t.inv(t.mul(a, b)), t.mul(t.inv(b), t.inv(a)));
    }

    #[test]
    fn commutators_land_in_derived_p3(a in 0u32..729, b in 0u32..729) {
        let t = table3();
        let comm = t.mul(t.mul(t.inv(a), t.inv(b)), t.mul(a, b));
        // [S, S] = Phi(S) has order 27 here.
        static DERIVED: OnceLock<g2fk::engine::Subgroup> = OnceLock::new();
        let d = DERIVED.get_or_init(|| {
            let gens: Vec<u32> = t.gens.to_vec();
            t.derived(&gens, &gens)
        });
        prop_assert!(d.contains(comm));
    }

    #[test]
    fn generator_parameters_add_p5(i in 1usize..=6, l in 0i64..5, m in 0i64..5) {
        // Each root subgroup is one-parameter: x_i(l) x_i(m) = x_i(l + m).
        let t = table5();
        prop_assert_eq!(
            t.mul(t.generator(i, l), t.generator(i, m)),
            t.generator(i, l + m)
        );
    }
}
