//! Randomized invariants.

use proptest::prelude::*;
use rug::Rational;

use attractor_lab::curve::{hodge_profile, PointConfiguration};
use attractor_lab::cyclotomic::{recognize, required_digits, totient, unit_residues, CycloElement};
use attractor_lab::monodromy::BraidWord;
use attractor_lab::mp::Precision;
use attractor_lab::shimura::{dim_sh, dims_sh_a, enumerate_cm_types};

fn element(order: u32) -> impl Strategy<Value = CycloElement> {
    let phi = totient(order) as usize;
    proptest::collection::vec((-30i64..=30, 1i64..=12), phi).prop_map(move |c| {
        let coeffs = c.into_iter().map(Rational::from).collect();
        CycloElement::from_coeffs(order, coeffs).unwrap()
    })
}

fn order() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![3u32, 4, 5, 7, 8, 9, 12])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_operations_are_consistent((a, b) in order().prop_flat_map(|n| (element(n), element(n)))) {
        if !b.is_zero() {
            prop_assert_eq!(a.mul(&b).div(&b).unwrap(), a.clone());
        }
        prop_assert_eq!(a.add(&b).sub(&b), a.clone());
        prop_assert_eq!(a.conj().conj(), a.clone());
    }

    #[test]
    fn galois_action_is_a_ring_map((a, b) in order().prop_flat_map(|n| (element(n), element(n))), pick in 0usize..8) {
        let units = unit_residues(a.n());
        let r = units[pick % units.len()] as i64;
        let lhs = a.mul(&b).galois_conjugate(r).unwrap();
        let rhs = a.galois_conjugate(r).unwrap().mul(&b.galois_conjugate(r).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn embedding_is_multiplicative((a, b) in order().prop_flat_map(|n| (element(n), element(n)))) {
        let p = Precision::digits(40).unwrap();
        let lhs = a.mul(&b).embed(1, p).unwrap().value;
        let rhs = &a.embed(1, p).unwrap().value * &b.embed(1, p).unwrap().value;
        let scale = 1.0 + rhs.abs_f64();
        prop_assert!((&lhs - &rhs).abs_f64() < 1e-35 * scale);
    }

    #[test]
    fn recognition_recovers_small_elements(a in order().prop_flat_map(element)) {
        let n = a.n();
        let p = Precision::digits(required_digits(totient(n), 400) + 5).unwrap();
        let z = a.embed(1, p).unwrap();
        let found = recognize(&z.value, z.error, n, 400, p).unwrap();
        prop_assert_eq!(found.map(|r| r.element), Some(a));
    }

    #[test]
    fn braid_words_print_and_parse_back(letters in proptest::collection::vec((1usize..=8, any::<bool>()), 0..12)) {
        let text: Vec<String> = letters.iter().map(|(j, inv)| if *inv { format!("-{j}") } else { j.to_string() }).collect();
        let w = BraidWord::parse(&text.join(" ")).unwrap();
        prop_assert_eq!(BraidWord::parse(&w.to_string()).unwrap(), w);
    }

    #[test]
    fn sub_shimura_dimensions_add_up(n in 2u32..=40, pick in any::<prop::sample::Index>()) {
        let types = enumerate_cm_types(n).unwrap();
        let t = pick.get(&types);
        let (d, c) = dims_sh_a(n, t).unwrap();
        prop_assert!(d >= 0 && c >= 2 * n as i64 - 3);
        prop_assert_eq!(d + c, dim_sh(n).unwrap());
    }

    #[test]
    fn hodge_rows_are_symmetric(n in 2u32..=40) {
        let rows = hodge_profile(n).unwrap().rows;
        for (i, &(h10, h01)) in rows.iter().enumerate() {
            prop_assert_eq!(h10 + h01, 2 * n - 2);
            prop_assert_eq!(rows[rows.len() - 1 - i], (h01, h10));
        }
    }

    #[test]
    fn configuration_json_round_trips(free in proptest::collection::vec((-2.0f64..2.0, 0.1f64..2.0), 3)) {
        let cfg = PointConfiguration::from_f64(3, 200, &free).unwrap();
        let back: PointConfiguration = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        prop_assert!(back.distance(&cfg) < 1e-45);
    }
}
