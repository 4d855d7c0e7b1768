#![allow(dead_code)]

use std::path::PathBuf;

use fusionring_core::catalog::{load_ring, resolve};
use fusionring_core::subgroups::{load_restriction, RestrictionData};
use fusionring_core::FusionRing;

pub const EXPLICIT_FIXTURES: &[&str] = &["z2", "z3", "z4", "s3", "klein", "rep_s3", "rep_z4", "rep_s3_x_z2"];

pub const GENERATED_CATALOG: &[&str] =
    &["su2", "so3", "au", "au:3", "z", "free:su2+cyclic:2", "free:cyclic:2+cyclic:3"];

pub const RESTRICTION_FIXTURES: &[&str] = &[
    "su2_z2_parity",
    "s1_branching",
    "so3_trivial",
    "au_identity",
    "rep_s3_a3",
    "rep_s3_z2",
    "rep_s3_trivial",
    "z4_z2",
    "z4_trivial",
];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.json"))
}

pub fn fixture(name: &str) -> FusionRing {
    load_ring(fixture_path(name)).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

pub fn explicit_fixtures() -> Vec<FusionRing> {
    EXPLICIT_FIXTURES.iter().map(|n| fixture(n)).collect()
}

pub fn generated_catalog() -> Vec<FusionRing> {
    GENERATED_CATALOG.iter().map(|n| resolve(n).unwrap()).collect()
}

pub fn restriction(name: &str) -> RestrictionData {
    load_restriction(fixture_path(name), None).unwrap_or_else(|e| panic!("restriction {name}: {e}"))
}
