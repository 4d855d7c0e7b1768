//! Builders for the rings used throughout the crate, the ring-file format,
//! and the name resolver shared by the CLI and the Python bindings.

mod au;
mod file;
mod free;
mod groups;
mod product;
mod spin;

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use num_traits::{One, Zero};

pub use au::{au_word_ring, signed_length, AuRule};
pub use file::{load_ring, parse_ring, ring_to_json, save_ring, FusionEntry, RingFile};
pub(crate) use file::{read_mult, write_mult};
pub use free::{free_product, FreeProductRule};
pub use groups::{group_ring, group_ring_named, ring_of_table, GroupPresentationInput};
pub use product::direct_product;
pub use spin::{circle_dual_ring, so3_ring, su2_ring, IntegerRule, So3Rule, Su2Rule};

use crate::error::{FusionError, Result};
use crate::ring::{validate_ring, BasisElement, FusionRing, Mult};

/// Default `n` for `A_u(n)`.
pub const DEFAULT_AU_N: u64 = 2;

/// Builds an explicit ring from label-level fusion entries.
///
/// The unit is `unit`; duals come from `dual` when given, and are otherwise
/// read off the table as the unique `b` with `N_{ab}^1 = 1`. Entries for the
/// same `(a, b, c)` are summed.
pub fn ring_from_entries(
    name: &str,
    basis: Vec<BasisElement>,
    unit: &str,
    dual: Option<&BTreeMap<String, String>>,
    entries: &[FusionEntry],
) -> Result<FusionRing> {
    let index: HashMap<&str, usize> = basis.iter().enumerate().map(|(i, b)| (b.label.as_str(), i)).collect();
    let find =
        |l: &str| index.get(l).copied().ok_or_else(|| FusionError::MalformedRing(format!("unknown label `{l}`")));
    let n = basis.len();
    let unit = find(unit)?;
    let mut cells: Vec<BTreeMap<usize, Mult>> = vec![BTreeMap::new(); n * n];
    for e in entries {
        if e.n.is_zero() {
            return Err(FusionError::MalformedRing(format!("zero multiplicity for {} x {} -> {}", e.a, e.b, e.c)));
        }
        let (a, b, c) = (find(&e.a)?, find(&e.b)?, find(&e.c)?);
        *cells[a * n + b].entry(c).or_default() += &e.n;
    }
    let dual = match dual {
        Some(map) => basis
            .iter()
            .map(|b| {
                let d = map
                    .get(&b.label)
                    .ok_or_else(|| FusionError::MalformedRing(format!("no dual given for `{}`", b.label)))?;
                find(d)
            })
            .collect::<Result<Vec<_>>>()?,
        None => (0..n)
            .map(|a| {
                let mut hits = (0..n).filter(|&b| cells[a * n + b].get(&unit).is_some_and(|m| m.is_one()));
                match (hits.next(), hits.next()) {
                    (Some(b), None) => Ok(b),
                    _ => Err(FusionError::MalformedRing(format!("no unique dual for `{}`", basis[a].label))),
                }
            })
            .collect::<Result<Vec<_>>>()?,
    };
    let table = cells.into_iter().map(|c| c.into_iter().collect()).collect();
    FusionRing::from_table(name, basis, unit, dual, table)
}

/// Representation ring of a finite group given by irreducibles and fusion
/// entries. The first irreducible is the trivial one; duals are derived.
/// The result is validated and rejected with the full report on failure.
pub fn rep_ring_char_table(name: &str, irreps: &[(&str, u64)], entries: &[FusionEntry]) -> Result<FusionRing> {
    let (unit, _) = irreps.first().ok_or_else(|| FusionError::MalformedRing("no irreducibles".into()))?;
    let basis = irreps.iter().map(|(l, d)| BasisElement::new(*l, *d)).collect();
    let ring = ring_from_entries(name, basis, unit, None, entries)?;
    let report = validate_ring(&ring, 1)?;
    if report.is_valid() {
        Ok(ring)
    } else {
        Err(FusionError::AxiomViolation(report))
    }
}

/// `Rep(S₃)`: `1`, `sgn`, and the 2-dimensional `rho`.
pub fn rep_s3() -> FusionRing {
    let e = FusionEntry::new;
    let mut entries = Vec::new();
    for x in ["1", "sgn", "rho"] {
        entries.push(e("1", x, x, 1));
        if x != "1" {
            entries.push(e(x, "1", x, 1));
        }
    }
    entries.extend([
        e("sgn", "sgn", "1", 1),
        e("sgn", "rho", "rho", 1),
        e("rho", "sgn", "rho", 1),
        e("rho", "rho", "1", 1),
        e("rho", "rho", "sgn", 1),
        e("rho", "rho", "rho", 1),
    ]);
    rep_ring_char_table("rep-s3", &[("1", 1), ("sgn", 1), ("rho", 2)], &entries).expect("Rep(S3) is a fusion ring")
}

/// `Rep(Z_n)`: characters `chi0 … chi{n-1}` with `chi_k × chi_l = chi_{k+l}`.
pub fn rep_cyclic(n: usize) -> FusionRing {
    assert!(n >= 1, "Rep(Z_n) needs n >= 1");
    let labels: Vec<String> = (0..n).map(|k| format!("chi{k}")).collect();
    let irreps: Vec<(&str, u64)> = labels.iter().map(|l| (l.as_str(), 1)).collect();
    let entries: Vec<FusionEntry> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .map(|(a, b)| FusionEntry::new(&labels[a], &labels[b], &labels[(a + b) % n], 1))
        .collect();
    rep_ring_char_table(&format!("rep-cyclic:{n}"), &irreps, &entries).expect("Rep(Z_n) is a fusion ring")
}

/// The ring with a single basis element `1`.
pub fn trivial_ring() -> FusionRing {
    FusionRing::from_table("unit", vec![BasisElement::new("1", 1)], 0, vec![0], vec![vec![(0, Mult::one())]])
        .expect("unit ring")
}

/// Catalog names accepted by [`resolve`], for help output.
pub const CATALOG_NAMES: &[(&str, &str)] = &[
    ("su2", "SU(2), SU_q(2), B_u(Q): V_n, dim n+1"),
    ("so3", "SO(3), A_aut(B,tau): W_n, dim 2n+1"),
    ("au[:n]", "A_u(n) word ring (default n = 2)"),
    ("z", "dual of the circle: group ring of Z"),
    ("cyclic:N", "group ring of Z/N"),
    ("klein", "group ring of Z/2 x Z/2"),
    ("s3", "group ring of S_3"),
    ("rep-s3", "Rep(S_3)"),
    ("rep-cyclic:N", "Rep(Z/N)"),
    ("unit", "the one-element ring"),
    ("group:FILE", "group ring of a group file"),
    ("repring:FILE", "ring file"),
    ("free:A+B", "free product (parenthesize nested names)"),
    ("prod:A+B", "direct product (parenthesize nested names)"),
];

/// Resolves a catalog name. File names are taken relative to `base` when
/// given and relative.
pub fn resolve(name: &str) -> Result<FusionRing> {
    resolve_in(name, None)
}

pub fn resolve_in(name: &str, base: Option<&Path>) -> Result<FusionRing> {
    let name = strip_parens(name.trim());
    let bad = || FusionError::MalformedInput(format!("unknown catalog name `{name}`"));
    let count = |s: &str| -> Result<usize> { s.parse::<usize>().ok().filter(|&n| n >= 1).ok_or_else(bad) };
    let path = |p: &str| match base {
        Some(b) if Path::new(p).is_relative() => b.join(p),
        _ => Path::new(p).to_path_buf(),
    };
    let (head, arg) = match name.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (name, None),
    };
    match (head, arg) {
        ("su2", None) => Ok(su2_ring()),
        ("so3", None) => Ok(so3_ring()),
        ("z", None) => Ok(circle_dual_ring()),
        ("au", None) => Ok(au_word_ring(DEFAULT_AU_N)),
        ("au", Some(n)) => {
            let n: u64 = n.parse().ok().filter(|&n| n >= 2).ok_or_else(bad)?;
            Ok(au_word_ring(n))
        }
        ("cyclic", Some(n)) => group_ring_named(name, &GroupPresentationInput::cyclic(count(n)?)),
        ("klein", None) => group_ring_named(name, &GroupPresentationInput::klein()),
        ("s3", None) => group_ring_named(name, &GroupPresentationInput::symmetric(3)),
        ("rep-s3", None) => Ok(rep_s3()),
        ("rep-cyclic", Some(n)) => Ok(rep_cyclic(count(n)?)),
        ("unit", None) => Ok(trivial_ring()),
        ("group", Some(f)) => {
            let text = std::fs::read_to_string(path(f))?;
            let input: GroupPresentationInput =
                serde_json::from_str(&text).map_err(|e| FusionError::MalformedFile(format!("{f}: {e}")))?;
            group_ring_named(name, &input)
        }
        ("repring", Some(f)) => load_ring(path(f)),
        ("free" | "prod", Some(rest)) => {
            let (a, b) = split_plus(rest).ok_or_else(bad)?;
            let (a, b) = (resolve_in(a, base)?, resolve_in(b, base)?);
            if head == "free" {
                Ok(free_product(&a, &b))
            } else {
                direct_product(&a, &b)
            }
        }
        _ => Err(bad()),
    }
}

fn strip_parens(s: &str) -> &str {
    match s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        Some(inner) if balanced(inner) => strip_parens(inner),
        _ => s,
    }
}

fn balanced(s: &str) -> bool {
    let mut depth = 0i32;
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return false;
        }
    }
    depth == 0
}

/// Splits at the first `+` outside parentheses.
fn split_plus(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Axiom;

    #[test]
    fn rep_s3_products() {
        let r = rep_s3();
        let support: Vec<String> = r.product("rho", "rho").unwrap().into_iter().map(|(l, _)| l).collect();
        assert_eq!(support, ["1", "sgn", "rho"]);
        assert_eq!(r.dual("rho").unwrap(), "rho");
        assert_eq!(r.dim("rho").unwrap(), 2);
    }

    #[test]
    fn rep_z4_is_valid() {
        let r = rep_cyclic(4);
        assert_eq!(r.basis().unwrap().len(), 4);
        assert_eq!(r.dual("chi1").unwrap(), "chi3");
        assert!(validate_ring(&r, 1).unwrap().is_valid());
    }

    #[test]
    fn missing_constituent_is_rejected() {
        let e = FusionEntry::new;
        let mut entries = vec![
            e("1", "1", "1", 1),
            e("1", "sgn", "sgn", 1),
            e("sgn", "1", "sgn", 1),
            e("1", "rho", "rho", 1),
            e("rho", "1", "rho", 1),
            e("sgn", "sgn", "1", 1),
            e("sgn", "rho", "rho", 1),
            e("rho", "sgn", "rho", 1),
        ];
        entries.extend([e("rho", "rho", "1", 1), e("rho", "rho", "rho", 1)]);
        match rep_ring_char_table("broken", &[("1", 1), ("sgn", 1), ("rho", 2)], &entries) {
            Err(FusionError::AxiomViolation(report)) => {
                let w: Vec<_> = report.witnesses(Axiom::DimensionHomomorphism).collect();
                assert_eq!(w, vec![&["rho".to_string(), "rho".to_string()][..]]);
            }
            other => panic!("expected an axiom violation, got {other:?}"),
        }
    }

    #[test]
    fn names_resolve() {
        for name in [
            "su2",
            "so3",
            "au",
            "au:3",
            "z",
            "cyclic:4",
            "klein",
            "s3",
            "rep-s3",
            "rep-cyclic:4",
            "unit",
            "free:su2+cyclic:2",
            "prod:cyclic:2+cyclic:2",
            "prod:(free:cyclic:2+cyclic:2)+cyclic:3",
        ] {
            assert!(resolve(name).is_ok(), "{name}");
        }
        for name in ["su3", "au:1", "cyclic:0", "free:su2", "cyclic", ""] {
            assert!(matches!(resolve(name), Err(FusionError::MalformedInput(_))), "{name}");
        }
        assert_eq!(resolve("prod:cyclic:2+cyclic:2").unwrap().basis().unwrap().len(), 4);
    }
}
