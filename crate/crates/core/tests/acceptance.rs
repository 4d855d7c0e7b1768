//! The fourteen acceptance criteria. Each prints one line
//! `criterion NN PASS|FAIL ...` with its wall time against the pinned limit;
//! the process exits non-zero if any fails.

mod common;

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use fusionring_core::automorph::automorphisms;
use fusionring_core::catalog::{au_word_ring, free_product, resolve, so3_ring, su2_ring};
use fusionring_core::central::{
    center_subobject, chain_group, chain_oracle, enumerate_central_subobjects, is_central_subobject, merge_closure,
    trivial_class, Centrality,
};
use fusionring_core::group::{abelian_invariants, find_isomorphism, GroupOrder, GroupTable, Stability};
use fusionring_core::ring::validate_ring;
use fusionring_core::subgroups::{
    centrality_agreement, grouplikes, is_central_subgroup, is_normal, Normality, SubgroupCentrality,
};
use fusionring_core::{FusionRing, DEFAULT_SEARCH_BUDGET};
use proptest::prelude::*;
use rand::{rngs::StdRng, Rng, SeedableRng};

const BUDGET: u64 = DEFAULT_SEARCH_BUDGET;

/// Runs `check` and prints the criterion line. Errors, panics and time
/// overruns are failures.
fn criterion(n: u32, title: &str, limit: Duration, check: impl FnOnce() -> Result<String, String>) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(check));
    let elapsed = start.elapsed();
    let result = match outcome {
        Ok(Ok(detail)) if elapsed <= limit => Ok(detail),
        Ok(Ok(detail)) => Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}")),
        Ok(Err(e)) => Err(e),
        Err(panic) => Err(panic
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into())),
    };
    match &result {
        Ok(detail) => println!("criterion {n:02} PASS {title}: {detail} [{elapsed:.2?} / {limit:?}]"),
        Err(e) => println!("criterion {n:02} FAIL {title}: {e} [{elapsed:.2?} / {limit:?}]"),
    }
    result.is_ok()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn s3_by_composition() -> GroupTable {
    let mut perms: Vec<[usize; 3]> = Vec::new();
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                if a != b && b != c && a != c {
                    perms.push([a, b, c]);
                }
            }
        }
    }
    let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
    let mult = perms.iter().map(|p| perms.iter().map(|q| index([p[q[0]], p[q[1]], p[q[2]]])).collect()).collect();
    let labels = perms.iter().map(|p| format!("{p:?}")).collect();
    GroupTable::new(labels, mult, index([0, 1, 2])).unwrap()
}

fn criterion_01_su2_center_is_z2() -> bool {
    criterion(1, "SU(2) chain group", Duration::from_secs(1), || {
        let g = chain_group(&su2_ring(), 6, BUDGET).map_err(|e| e.to_string())?;
        let d = &g.descriptor;
        ensure(d.order == GroupOrder::Finite(2), || format!("order {:?}", d.order))?;
        ensure(d.abelian_invariants.as_deref() == Some(&[2][..]), || format!("invariants {:?}", d.abelian_invariants))?;
        ensure(d.flag == Stability::StableAtDepth(6), || format!("flag {}", d.flag))?;
        Ok(format!("order 2, invariants [2], {}", d.flag))
    })
}

fn criterion_02_so3_center_is_trivial() -> bool {
    criterion(2, "SO(3) center", Duration::from_secs(1), || {
        let ring = so3_ring();
        let g = chain_group(&ring, 6, BUDGET).map_err(|e| e.to_string())?;
        ensure(g.descriptor.is_trivial(), || format!("chain group {}", g.descriptor))?;
        let t = ring.truncate(6).map_err(|e| e.to_string())?;
        let z = center_subobject(&t, BUDGET).map_err(|e| e.to_string())?;
        let explored = z.explored_members(&t).count();
        ensure(explored == t.explored(), || format!("center subobject has {explored} of {}", t.explored()))?;
        Ok(format!("trivial, center subobject = all {explored} explored classes, {}", g.descriptor.flag))
    })
}

fn criterion_03_s3_group_ring() -> bool {
    criterion(3, "group ring of S3", Duration::from_secs(1), || {
        let g = chain_group(&fixture("s3"), 6, BUDGET).map_err(|e| e.to_string())?;
        ensure(g.descriptor.order == GroupOrder::Finite(6) && !g.descriptor.is_abelian, || g.descriptor.to_string())?;
        let table = g.table.ok_or("no table")?;
        let iso = find_isomorphism(&table, &s3_by_composition()).ok_or("not isomorphic to S3")?;
        Ok(format!("order 6, nonabelian, isomorphism {iso:?}"))
    })
}

fn criterion_04_au_center_is_z() -> bool {
    criterion(4, "A_u chain group", Duration::from_secs(30), || {
        let ring = au_word_ring(2);
        let at4 = chain_group(&ring, 4, BUDGET).map_err(|e| e.to_string())?.descriptor;
        let at5 = chain_group(&ring, 5, BUDGET).map_err(|e| e.to_string())?.descriptor;
        for d in [&at4, &at5] {
            let p = d.presentation.as_ref().ok_or("no presentation")?;
            ensure(p.generators == ["[u]"] && p.relations.is_empty(), || format!("presentation {p}"))?;
            ensure(d.name.as_deref() == Some("Z"), || format!("name {:?}", d.name))?;
            ensure(matches!(d.order, GroupOrder::Infinite { .. }), || format!("order {:?}", d.order))?;
        }
        ensure(at4.presentation == at5.presentation, || "presentations differ between depths 4 and 5".into())?;
        ensure(at4.flag == Stability::StableAtDepth(4), || format!("flag {}", at4.flag))?;
        ensure(at5.flag == Stability::StableAtDepth(5), || format!("flag {}", at5.flag))?;
        Ok(format!("{} at depths 4 and 5", at4.presentation.unwrap()))
    })
}

fn oracle_equivalence(ring: &FusionRing) -> Result<(), String> {
    let t = ring.truncate(1).map_err(|e| e.to_string())?;
    let fast = merge_closure(&t);
    let six = chain_oracle(&t, 6).map_err(|e| e.to_string())?;
    let five = chain_oracle(&t, 5).map_err(|e| e.to_string())?;
    ensure(fast.labelled(&t) == six.labelled(&t), || {
        format!("{}: union-find {:?} vs words {:?}", ring.name(), fast.labelled(&t), six.labelled(&t))
    })?;
    ensure(five.labelled(&t) == six.labelled(&t), || format!("{}: lengths 5 and 6 differ", ring.name()))
}

fn criterion_05_oracle_equivalence() -> bool {
    criterion(5, "merge closure vs bounded words", Duration::from_secs(10), || {
        let rings = explicit_fixtures();
        for ring in &rings {
            oracle_equivalence(ring)?;
        }
        let mut runner = proptest::test_runner::TestRunner::new(ProptestConfig {
            cases: 24,
            failure_persistence: None,
            ..ProptestConfig::default()
        });
        runner
            .run(&(2usize..9, 1usize..4, prop::bool::ANY), |(n, m, rep)| {
                let name =
                    if rep { format!("prod:rep-cyclic:{n}+cyclic:{m}") } else { format!("prod:cyclic:{n}+cyclic:{m}") };
                let ring = resolve(&name).unwrap();
                prop_assert!(oracle_equivalence(&ring).is_ok(), "{}", name);
                Ok(())
            })
            .map_err(|e| e.to_string())?;
        Ok(format!("{} fixtures and 24 random products agree", rings.len()))
    })
}

fn criterion_06_unit_class_is_central() -> bool {
    criterion(6, "E_z is central", Duration::from_secs(10), || {
        let mut rings = explicit_fixtures();
        rings.extend(generated_catalog());
        for ring in &rings {
            let t = ring.truncate(6).map_err(|e| e.to_string())?;
            let ez = trivial_class(&t).map_err(|e| e.to_string())?;
            match is_central_subobject(&t, &ez).map_err(|e| e.to_string())? {
                Centrality::Central(_) => {}
                Centrality::NotCentral(w) => return Err(format!("{}: {:?} x {:?}", ring.name(), w.left, w.right)),
            }
        }
        Ok(format!("central on {} rings", rings.len()))
    })
}

fn criterion_07_center_is_meet_of_central_subobjects() -> bool {
    criterion(7, "intersection of central subobjects", Duration::from_secs(10), || {
        let mut detail = Vec::new();
        for ring in explicit_fixtures() {
            let t = ring.truncate(1).map_err(|e| e.to_string())?;
            let central = enumerate_central_subobjects(&t, BUDGET).map_err(|e| e.to_string())?;
            let meet = central.iter().skip(1).fold(central[0].clone(), |m, s| m.intersection(s));
            let block = merge_closure(&t);
            let unit_block: Vec<usize> = block.blocks()[block.identity_block()].clone();
            let members: Vec<usize> = meet.members().iter().copied().collect();
            ensure(members == unit_block, || {
                format!("{}: meet {:?} vs unit block {:?}", ring.name(), meet.labels(&t), t.labels_of(&unit_block))
            })?;
            detail.push(format!("{}:{}", ring.name(), central.len()));
        }
        Ok(format!("central subobject counts {}", detail.join(" ")))
    })
}

fn criterion_08_su2_subgroups() -> bool {
    criterion(8, "SU(2) restrictions", Duration::from_secs(1), || {
        let parity = restriction("su2_z2_parity");
        ensure(matches!(is_normal(&parity, 6).unwrap(), Normality::Normal { .. }), || "Z2 not normal".into())?;
        ensure(is_central_subgroup(&parity, 6).unwrap().is_central(), || "Z2 not central".into())?;
        let torus = restriction("s1_branching");
        let normal = is_normal(&torus, 6).unwrap();
        ensure(normal == Normality::NotNormal { witness: "V2".into(), multiplicity: 1, dim: 3 }, || {
            format!("{normal:?}")
        })?;
        let central = is_central_subgroup(&torus, 6).unwrap();
        ensure(matches!(&central, SubgroupCentrality::NotCentral { witness, .. } if witness == "V1"), || {
            format!("{central:?}")
        })?;
        Ok("Z2: normal and central; S1: not normal (V2), not central (V1)".into())
    })
}

fn cyclic_quotient(n: usize, d: usize) -> fusionring_core::subgroups::RestrictionData {
    use fusionring_core::Mult;
    let label = |k: usize| match k {
        0 => "e".to_string(),
        1 => "g".to_string(),
        k => format!("g^{k}"),
    };
    let map = (0..n).map(|k| (label(k), vec![(label(k % d), Mult::from(1u32))])).collect();
    fusionring_core::subgroups::RestrictionData::from_table(
        resolve(&format!("cyclic:{n}")).unwrap(),
        resolve(&format!("cyclic:{d}")).unwrap(),
        map,
    )
    .unwrap()
}

fn criterion_09_centrality_implies_normality() -> bool {
    criterion(9, "central => normal, subgroup/subobject agreement", Duration::from_secs(5), || {
        let mut checked = 0;
        let mut check = |r: &fusionring_core::subgroups::RestrictionData, name: &str| -> Result<(), String> {
            let normal = matches!(is_normal(r, 6).map_err(|e| e.to_string())?, Normality::Normal { .. });
            let central = is_central_subgroup(r, 6).map_err(|e| e.to_string())?.is_central();
            ensure(!central || normal, || format!("{name}: central but not normal"))?;
            let agree = centrality_agreement(r, 6).map_err(|e| e.to_string())?;
            ensure(agree != Some(false), || format!("{name}: subgroup and subobject tests disagree"))?;
            checked += 1;
            Ok(())
        };
        for name in RESTRICTION_FIXTURES {
            check(&restriction(name), name)?;
        }
        for n in 2..=12 {
            for d in (1..=n).filter(|d| n % d == 0) {
                check(&cyclic_quotient(n, d), &format!("Z{n} -> Z{d}"))?;
            }
        }
        Ok(format!("{checked} restrictions"))
    })
}

fn random_dims(seed: u64) -> impl Fn(&str) -> u64 + Send + Sync + 'static {
    move |label: &str| {
        let mut h = DefaultHasher::new();
        (seed, label).hash(&mut h);
        StdRng::seed_from_u64(h.finish()).gen_range(1..1000)
    }
}

fn criterion_10_dimension_invariance() -> bool {
    criterion(10, "chain group ignores dimensions", Duration::from_secs(5), || {
        let mut rings: Vec<(FusionRing, usize)> = explicit_fixtures().into_iter().map(|r| (r, 1)).collect();
        rings.extend([(su2_ring(), 6), (so3_ring(), 6), (au_word_ring(2), 3), (resolve("z").unwrap(), 6)]);
        for (ring, depth) in &rings {
            let base = chain_group(ring, *depth, BUDGET).map_err(|e| e.to_string())?;
            for seed in 0..20 {
                let other =
                    chain_group(&ring.with_dims(random_dims(seed)), *depth, BUDGET).map_err(|e| e.to_string())?;
                ensure(other.descriptor == base.descriptor && other.classes == base.classes, || {
                    format!("{} seed {seed}: {} vs {}", ring.name(), other.descriptor, base.descriptor)
                })?;
            }
        }
        Ok(format!("{} rings x 20 seeds", rings.len()))
    })
}

fn singly_generated(ring: &FusionRing, depth: usize) -> Result<String, String> {
    let g = chain_group(ring, depth, BUDGET).map_err(|e| e.to_string())?;
    match (&g.table, &g.descriptor.presentation) {
        (Some(t), _) => {
            let cyclic = (0..t.order()).any(|x| t.generated_by(&[x]).len() == t.order());
            ensure(cyclic, || format!("{}: {} is not cyclic", ring.name(), g.descriptor))?;
            ensure(abelian_invariants(t).len() <= 1, || format!("{}: invariants", ring.name()))?;
        }
        (None, Some(p)) => {
            ensure(p.generators.len() == 1, || format!("{}: presentation {p}", ring.name()))?;
        }
        (None, None) => return Err(format!("{}: neither table nor presentation", ring.name())),
    }
    Ok(g.descriptor.to_string())
}

fn criterion_11_single_generator_gives_cyclic_chain_group() -> bool {
    criterion(11, "singly generated => cyclic chain group", Duration::from_secs(5), || {
        singly_generated(&su2_ring(), 6)?;
        singly_generated(&au_word_ring(2), 4)?;
        let mut runner = proptest::test_runner::TestRunner::new(ProptestConfig {
            cases: 16,
            failure_persistence: None,
            ..ProptestConfig::default()
        });
        runner
            .run(&(1usize..30), |n| {
                let ring = resolve(&format!("cyclic:{n}")).unwrap();
                prop_assert!(singly_generated(&ring, 1).is_ok(), "cyclic:{}", n);
                Ok(())
            })
            .map_err(|e| e.to_string())?;
        Ok("SU(2), A_u and 16 random Z_n".into())
    })
}

fn criterion_12_automorphism_counts() -> bool {
    criterion(12, "automorphism counts", Duration::from_secs(30), || {
        let rep = automorphisms(&fixture("rep_s3"), 1, BUDGET).map_err(|e| e.to_string())?;
        let z3 = automorphisms(&fixture("z3"), 1, BUDGET).map_err(|e| e.to_string())?;
        let au = automorphisms(&au_word_ring(2), 3, BUDGET).map_err(|e| e.to_string())?;
        ensure(rep.count == 1 && rep.automorphisms[0].is_identity(), || format!("Rep(S3): {}", rep.count))?;
        ensure(z3.count == 2, || format!("Z3: {}", z3.count))?;
        ensure(z3.automorphisms[1].apply("g") == Some("g^2"), || "Z3: second automorphism is not inversion".into())?;
        ensure(au.count == 2, || format!("A_u: {}", au.count))?;
        ensure(au.automorphisms[1].apply("u") == Some("v"), || "A_u: second symmetry is not u <-> v".into())?;
        Ok(format!("Rep(S3) 1, Z3 2, A_u 2 [{}]", au.flag))
    })
}

fn criterion_13_free_product_grouplikes() -> bool {
    criterion(13, "grouplikes of a free product", Duration::from_secs(30), || {
        let ring = free_product(&su2_ring(), &fixture("z2"));
        let report = validate_ring(&ring, 4).map_err(|e| e.to_string())?;
        ensure(report.is_valid(), || format!("{report}"))?;
        let g = grouplikes(&ring, 4).map_err(|e| e.to_string())?;
        let table = g.table.ok_or("grouplikes not closed")?;
        ensure(table.order() == 2, || format!("order {}", table.order()))?;
        Ok(format!("grouplikes {:?} form Z/2, valid to depth 4", g.elements))
    })
}

fn cli(args: &[&str], threads: Option<&str>) -> (Option<i32>, Vec<u8>) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fusionring"));
    cmd.args(args).current_dir(fixture_path("z2").parent().unwrap());
    match threads {
        Some(t) => cmd.env("RAYON_NUM_THREADS", t),
        None => cmd.env_remove("RAYON_NUM_THREADS"),
    };
    let out = cmd.output().expect("run fusionring");
    (out.status.code(), out.stdout)
}

fn criterion_14_cli_determinism() -> bool {
    criterion(14, "CLI JSON determinism", Duration::from_secs(60), || {
        let commands: &[&[&str]] = &[
            &["validate", "--catalog", "su2"],
            &["info", "--catalog", "au", "--depth", "3"],
            &["product", "--catalog", "su2", "V1", "V1", "V2"],
            &["chain-group", "--catalog", "su2", "--depth", "6"],
            &["chain-group", "--ring", "s3.json"],
            &["chain-group", "--catalog", "free:su2+cyclic:2", "--depth", "4"],
            &["center", "--catalog", "so3"],
            &["cosets", "--catalog", "rep-s3", "--sigma", "1,sgn"],
            &["central-subobjects", "--ring", "rep_s3_x_z2.json"],
            &["is-normal", "--ring", "su2", "--restriction", "s1_branching.json"],
            &["is-central", "--restriction", "su2_z2_parity.json"],
            &["is-central", "--ring", "klein.json", "--sigma", "e,a"],
            &["grouplikes", "--catalog", "free:su2+cyclic:2", "--depth", "4"],
            &["automorphisms", "--catalog", "au", "--depth", "3"],
            &["automorphisms", "--ring", "klein.json"],
            &["catalog"],
        ];
        for args in commands {
            let reference = cli(args, None);
            ensure(matches!(reference.0, Some(0 | 1)), || format!("{args:?} exited with {:?}", reference.0))?;
            for threads in [None, None, Some("1"), Some("2"), Some("8")] {
                let again = cli(args, threads);
                ensure(again == reference, || format!("{args:?} differs with RAYON_NUM_THREADS={threads:?}"))?;
            }
        }
        Ok(format!("{} commands x 6 runs byte-identical", commands.len()))
    })
}

fn main() {
    // the panic hook would interleave messages with the criterion lines
    std::panic::set_hook(Box::new(|_| {}));
    let criteria: [fn() -> bool; 14] = [
        criterion_01_su2_center_is_z2,
        criterion_02_so3_center_is_trivial,
        criterion_03_s3_group_ring,
        criterion_04_au_center_is_z,
        criterion_05_oracle_equivalence,
        criterion_06_unit_class_is_central,
        criterion_07_center_is_meet_of_central_subobjects,
        criterion_08_su2_subgroups,
        criterion_09_centrality_implies_normality,
        criterion_10_dimension_invariance,
        criterion_11_single_generator_gives_cyclic_chain_group,
        criterion_12_automorphism_counts,
        criterion_13_free_product_grouplikes,
        criterion_14_cli_determinism,
    ];
    let failed = criteria.iter().filter(|c| !c()).count();
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
