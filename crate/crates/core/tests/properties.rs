mod common;

use std::collections::BTreeMap;

use common::*;
use fusionring_core::automorph::{action_on_chain_group, automorphisms};
use fusionring_core::catalog::{parse_ring, resolve, ring_to_json, signed_length, su2_ring, RingFile};
use fusionring_core::central::{
    chain_group, enumerate_central_subobjects, is_central_subobject, merge_closure, trivial_class, Centrality,
};
use fusionring_core::ring::{validate_ring, Truncation};
use fusionring_core::unionfind::UnionFind;
use fusionring_core::{FusionError, FusionRing, Mult, DEFAULT_SEARCH_BUDGET};
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn small_ring() -> impl Strategy<Value = String> {
    let atom = prop_oneof![
        (1usize..7).prop_map(|n| format!("cyclic:{n}")),
        (1usize..7).prop_map(|n| format!("rep-cyclic:{n}")),
        Just("s3".to_string()),
        Just("rep-s3".to_string()),
        Just("klein".to_string()),
    ];
    prop_oneof![atom.clone(), (atom.clone(), 1usize..4).prop_map(|(a, n)| format!("prod:({a})+cyclic:{n}"))]
}

/// Coefficients as a dense map, for comparisons that do not trust the
/// library's own lookups.
fn coefficients(t: &Truncation) -> BTreeMap<(usize, usize, usize), Mult> {
    let mut out = BTreeMap::new();
    for a in 0..t.explored() {
        for b in 0..t.explored() {
            for (c, n) in t.product(a, b) {
                out.insert((a, b, *c), n.clone());
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn file_round_trip_is_byte_identical(name in small_ring()) {
        let ring = resolve(&name).unwrap();
        let text = ring_to_json(&ring, 1).unwrap();
        let back = parse_ring(&text, "x").unwrap();
        prop_assert_eq!(ring_to_json(&back, 1).unwrap(), text);
    }

    #[test]
    fn perturbed_tables_are_rejected(name in small_ring(), pick in any::<prop::sample::Index>(), bump in 1u64..3) {
        let ring = resolve(&name).unwrap();
        let mut file: RingFile = serde_json::from_str(&ring_to_json(&ring, 1).unwrap()).unwrap();
        let k = pick.index(file.fusion.len());
        file.fusion[k].n += bump;
        let text = serde_json::to_string(&file).unwrap();
        prop_assert!(parse_ring(&text, "x").is_err());
    }

    #[test]
    fn dimensions_are_multiplicative(a in 0u64..40, b in 0u64..40) {
        let ring = su2_ring();
        let (va, vb) = (format!("V{a}"), format!("V{b}"));
        let decomp = ring.product(&va, &vb).unwrap();
        // Clebsch-Gordan: V_a x V_b = V_|a-b| + V_|a-b|+2 + ... + V_a+b
        let expected: Vec<String> = ((a.abs_diff(b))..=(a + b)).step_by(2).map(|n| format!("V{n}")).collect();
        let got: Vec<String> = decomp.iter().map(|(l, _)| l.clone()).collect();
        prop_assert_eq!(got, expected);
        let total: u64 = decomp.iter().map(|(l, n)| ring.dim(l).unwrap() * n.to_u64().unwrap()).sum();
        prop_assert_eq!(total, (a + 1) * (b + 1));
    }

    #[test]
    fn au_signed_length_is_additive(x in "[uv]{1,5}", y in "[uv]{1,5}") {
        let ring = resolve("au").unwrap();
        let want = signed_length(&x).unwrap() + signed_length(&y).unwrap();
        for (c, _) in ring.product(&x, &y).unwrap() {
            prop_assert_eq!(signed_length(&c).unwrap(), want);
        }
    }

    #[test]
    fn union_find_matches_naive_closure(n in 1usize..24, pairs in prop::collection::vec((0usize..24, 0usize..24), 0..30)) {
        let pairs: Vec<(usize, usize)> = pairs.into_iter().map(|(a, b)| (a % n, b % n)).collect();
        let mut uf = UnionFind::new(n);
        for &(a, b) in &pairs {
            uf.union(a, b);
        }
        let mut label: Vec<usize> = (0..n).collect();
        loop {
            let mut changed = false;
            for &(a, b) in &pairs {
                let m = label[a].min(label[b]);
                if label[a] != m || label[b] != m {
                    label[a] = m;
                    label[b] = m;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        for a in 0..n {
            for b in 0..n {
                prop_assert_eq!(uf.find(a) == uf.find(b), label[a] == label[b]);
            }
        }
    }

    #[test]
    fn central_subobjects_contain_the_unit_class(name in small_ring()) {
        let t = resolve(&name).unwrap().truncate(1).unwrap();
        let ez = trivial_class(&t).unwrap();
        for s in enumerate_central_subobjects(&t, DEFAULT_SEARCH_BUDGET).unwrap() {
            prop_assert!(ez.is_subset(&s));
            let Centrality::Central(g) = is_central_subobject(&t, &s).unwrap() else {
                return Err(TestCaseError::fail("enumerated subobject is not central"));
            };
            prop_assert!(g.to_group_table(&t).unwrap().is_some());
        }
    }

    #[test]
    fn chain_classes_are_unions_of_product_supports(name in small_ring()) {
        let t = resolve(&name).unwrap().truncate(1).unwrap();
        let p = merge_closure(&t);
        for a in 0..t.explored() {
            for b in 0..t.explored() {
                let blocks: Vec<usize> = t.support(a, b).map(|c| p.block_of(c)).collect();
                prop_assert!(blocks.windows(2).all(|w| w[0] == w[1]));
            }
        }
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn automorphisms_preserve_fusion_and_form_a_group(name in small_ring()) {
        let ring = resolve(&name).unwrap();
        let t = ring.truncate(1).unwrap();
        let coeff = coefficients(&t);
        let autos = automorphisms(&ring, 1, DEFAULT_SEARCH_BUDGET).unwrap().automorphisms;
        prop_assert!(autos[0].is_identity());
        for a in &autos {
            let p = a.perm();
            prop_assert_eq!(p[t.unit()], t.unit());
            for x in 0..t.explored() {
                prop_assert_eq!(t.dim(p[x]), t.dim(x));
                prop_assert_eq!(p[t.dual(x)], t.dual(p[x]));
            }
            for ((x, y, z), n) in &coeff {
                prop_assert_eq!(coeff.get(&(p[*x], p[*y], p[*z])), Some(n));
            }
            for b in &autos {
                prop_assert!(autos.contains(&a.compose(b)));
            }
            prop_assert!(autos.contains(&a.inverse()));
        }
    }

    #[test]
    fn chain_group_action_is_a_homomorphism(name in small_ring()) {
        let ring = resolve(&name).unwrap();
        let autos = automorphisms(&ring, 1, DEFAULT_SEARCH_BUDGET).unwrap().automorphisms;
        for a in &autos {
            for b in &autos {
                let (fa, fb) = (action_on_chain_group(&ring, a, 1).unwrap(), action_on_chain_group(&ring, b, 1).unwrap());
                let fab = action_on_chain_group(&ring, &a.compose(b), 1).unwrap();
                let composed: Vec<Option<usize>> = fb.image.iter().map(|x| x.and_then(|x| fa.image[x])).collect();
                prop_assert_eq!(&fab.image, &composed);
            }
        }
    }
}

#[test]
fn fixtures_validate() {
    for ring in explicit_fixtures() {
        assert!(validate_ring(&ring, 1).unwrap().is_valid(), "{}", ring.name());
    }
    for ring in generated_catalog() {
        let report = validate_ring(&ring, 3).unwrap();
        assert!(report.is_valid(), "{}: {report}", ring.name());
        assert_eq!(report.checked_to_depth, Some(3));
    }
}

#[test]
fn nonassociative_table_is_reported() {
    // a 1-dimensional g with g x g = 1 + g is not dimension-preserving
    let text = r#"{"basis":[{"label":"1","dim":1},{"label":"g","dim":1}],"unit":"1","dual":{"1":"1","g":"g"},
        "fusion":[{"a":"1","b":"1","c":"1","n":1},{"a":"1","b":"g","c":"g","n":1},{"a":"g","b":"1","c":"g","n":1},
                  {"a":"g","b":"g","c":"1","n":1},{"a":"g","b":"g","c":"g","n":1}]}"#;
    let Err(FusionError::AxiomViolation(report)) = parse_ring(text, "bad") else { panic!("accepted") };
    assert!(!report.is_valid());
}

#[test]
fn generated_automorphisms_are_stable() {
    for (name, depth, count) in [("au", 3, 2), ("au", 4, 2), ("su2", 6, 1), ("z", 6, 2), ("so3", 5, 1)] {
        let ring: FusionRing = resolve(name).unwrap();
        let a = automorphisms(&ring, depth, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(a.count, count, "{name} at {depth}");
        assert_eq!(a.flag.to_string(), format!("stable_at_depth({depth})"));
    }
}

#[test]
fn chain_group_is_depth_stable_for_catalog_rings() {
    for (name, order) in [("su2", Some(2)), ("so3", Some(1)), ("au", None), ("z", None), ("au:3", None)] {
        let g = chain_group(&resolve(name).unwrap(), 5, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(g.descriptor.finite_order(), order, "{name}");
        assert_eq!(g.descriptor.flag.to_string(), "stable_at_depth(5)", "{name}");
    }
}
