//! Quantum subgroups as restriction data, and the normality and centrality
//! tests that only need branching multiplicities.
//!
//! [`grouplikes`] returns the group of 1-dimensional classes, which is dual
//! to the abelianization. It does not decide whether the abelianization
//! comes from a normal subgroup; that question is not visible in fusion
//! data.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::catalog::{read_mult, resolve_in, write_mult};
use crate::central::is_central_subobject;
use crate::error::{FusionError, Result};
use crate::group::GroupTable;
use crate::ring::{Axiom, Decomposition, FusionRing, Mult, Recorder, Subobject, Truncation, ValidationReport};

type RuleFn = dyn Fn(&str) -> Result<Decomposition> + Send + Sync;

/// Closed-form branching rules for generated sources.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BranchingRule {
    /// SU(2) onto its center: `V_n ↦ (n+1)·g^n` in the group ring of Z/2.
    Su2Parity,
    /// SU(2) onto the maximal torus: `V_n ↦ z^{-n} + z^{-n+2} + … + z^n`.
    Su2Weights,
    /// Any ring onto the one-element ring: `τ ↦ dim(τ)·1`.
    Trivial,
    /// A ring onto itself.
    Identity,
}

impl BranchingRule {
    pub const ALL: [BranchingRule; 4] =
        [BranchingRule::Su2Parity, BranchingRule::Su2Weights, BranchingRule::Trivial, BranchingRule::Identity];

    pub fn name(self) -> &'static str {
        match self {
            BranchingRule::Su2Parity => "su2-parity",
            BranchingRule::Su2Weights => "su2-weights",
            BranchingRule::Trivial => "trivial",
            BranchingRule::Identity => "identity",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|r| r.name() == name)
            .ok_or_else(|| FusionError::MalformedInput(format!("unknown branching rule `{name}`")))
    }
}

fn spin(label: &str) -> Result<u64> {
    label
        .strip_prefix('V')
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| FusionError::MalformedInput(format!("`{label}` is not an SU(2) label")))
}

fn rule_fn(rule: BranchingRule, source: &FusionRing, target: &FusionRing) -> Arc<RuleFn> {
    match rule {
        BranchingRule::Su2Parity => Arc::new(|l: &str| {
            let n = spin(l)?;
            let g = if n % 2 == 0 { "e" } else { "g" };
            Ok(vec![(g.to_string(), Mult::from(n + 1))])
        }),
        BranchingRule::Su2Weights => Arc::new(|l: &str| {
            let n = spin(l)? as i64;
            Ok((0..=n).map(|k| (format!("z^{}", 2 * k - n), Mult::one())).collect())
        }),
        BranchingRule::Trivial => {
            let (source, unit) = (source.clone(), target.unit());
            Arc::new(move |l: &str| Ok(vec![(unit.clone(), Mult::from(source.dim(l)?))]))
        }
        BranchingRule::Identity => {
            let source = source.clone();
            Arc::new(move |l: &str| {
                source.check(l)?;
                Ok(vec![(l.to_string(), Mult::one())])
            })
        }
    }
}

#[derive(Clone)]
enum MapRepr {
    Table(BTreeMap<String, Decomposition>),
    Rule(BranchingRule, Arc<RuleFn>),
}

/// Restriction from irreducibles of `G` to multisets of irreducibles of a
/// quantum subgroup `H`.
#[derive(Clone)]
pub struct RestrictionData {
    source: FusionRing,
    target: FusionRing,
    map: MapRepr,
}

impl fmt::Debug for RestrictionData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let map = match &self.map {
            MapRepr::Table(t) => format!("table of {}", t.len()),
            MapRepr::Rule(r, _) => r.name().to_string(),
        };
        f.debug_struct("RestrictionData")
            .field("source", &self.source.name())
            .field("target", &self.target.name())
            .field("map", &map)
            .finish()
    }
}

impl RestrictionData {
    /// A tabulated map; only explicit sources can be tabulated.
    pub fn from_table(source: FusionRing, target: FusionRing, map: BTreeMap<String, Decomposition>) -> Result<Self> {
        if !source.is_explicit() {
            return Err(FusionError::MalformedInput(format!(
                "source `{}` is infinite; give a branching rule instead of a table",
                source.name()
            )));
        }
        Ok(RestrictionData { source, target, map: MapRepr::Table(map) })
    }

    pub fn from_rule(source: FusionRing, target: FusionRing, rule: BranchingRule) -> Self {
        let f = rule_fn(rule, &source, &target);
        RestrictionData { source, target, map: MapRepr::Rule(rule, f) }
    }

    pub fn source(&self) -> &FusionRing {
        &self.source
    }

    pub fn target(&self) -> &FusionRing {
        &self.target
    }

    pub fn rule(&self) -> Option<BranchingRule> {
        match &self.map {
            MapRepr::Rule(r, _) => Some(*r),
            MapRepr::Table(_) => None,
        }
    }

    /// `τ|_H`, merged and sorted in target basis order.
    pub fn restrict(&self, label: &str) -> Result<Decomposition> {
        self.source.check(label)?;
        let raw = match &self.map {
            MapRepr::Table(t) => t
                .get(label)
                .cloned()
                .ok_or_else(|| FusionError::MalformedInput(format!("no restriction given for `{label}`")))?,
            MapRepr::Rule(_, f) => f(label)?,
        };
        let mut merged: HashMap<String, Mult> = HashMap::new();
        for (l, m) in raw {
            self.target.check(&l).map_err(|_| {
                FusionError::MalformedInput(format!("restriction of `{label}` names unknown target label `{l}`"))
            })?;
            if !m.is_zero() {
                *merged.entry(l).or_default() += m;
            }
        }
        Ok(self.target.sorted(merged.into_iter()))
    }

    /// `(τ|_H, 1_H)`.
    pub fn unit_multiplicity(&self, label: &str) -> Result<Mult> {
        let unit = self.target.unit();
        Ok(self.restrict(label)?.into_iter().find(|(l, _)| *l == unit).map(|(_, m)| m).unwrap_or_default())
    }
}

fn add_into(acc: &mut HashMap<String, Mult>, d: &[(String, Mult)], scale: &Mult) {
    for (l, m) in d {
        *acc.entry(l.clone()).or_default() += m * scale;
    }
}

/// Checks unit, dimension, conjugation and multiplicativity of the map on
/// the explored part of the source.
pub fn validate_restriction(r: &RestrictionData, depth: usize) -> Result<ValidationReport> {
    let trunc = r.source.truncate(depth)?;
    validate_restriction_on(r, &trunc)
}

fn validate_restriction_on(r: &RestrictionData, trunc: &Truncation) -> Result<ValidationReport> {
    let n = trunc.explored();
    let mut rec = Recorder::new();
    let restricted: Vec<Decomposition> = (0..n).map(|i| r.restrict(trunc.label(i))).collect::<Result<_>>()?;
    let as_map = |d: &Decomposition| -> HashMap<String, Mult> { d.iter().cloned().collect() };

    let unit = r.target.unit();
    let ru = &restricted[trunc.unit()];
    if ru.len() != 1 || ru[0].0 != unit || !ru[0].1.is_one() {
        rec.push(Axiom::RestrictionUnit, &[trunc.label(trunc.unit())], format!("restricts to {}", show(ru)));
    }
    for (i, d) in restricted.iter().enumerate() {
        let mut total = Mult::zero();
        for (l, m) in d {
            total += m * Mult::from(r.target.dim(l)?);
        }
        if total != Mult::from(trunc.dim(i)) {
            rec.push(Axiom::RestrictionDimension, &[trunc.label(i)], format!("dim {} vs {total}", trunc.dim(i)));
        }
        let dual: HashMap<String, Mult> =
            d.iter().map(|(l, m)| Ok((r.target.dual(l)?, m.clone()))).collect::<Result<_>>()?;
        if dual != as_map(&restricted[trunc.dual(i)]) {
            rec.push(
                Axiom::RestrictionConjugation,
                &[trunc.label(i)],
                format!(
                    "conjugate of the restriction differs from the restriction of `{}`",
                    trunc.label(trunc.dual(i))
                ),
            );
        }
    }
    let mut target_products: HashMap<(String, String), Decomposition> = HashMap::new();
    for a in 0..n {
        for b in 0..n {
            let mut lhs: HashMap<String, Mult> = HashMap::new();
            for (x, m) in &restricted[a] {
                for (y, k) in &restricted[b] {
                    let key = (x.clone(), y.clone());
                    if !target_products.contains_key(&key) {
                        target_products.insert(key.clone(), r.target.product(x, y)?);
                    }
                    add_into(&mut lhs, &target_products[&key], &(m * k));
                }
            }
            let mut rhs: HashMap<String, Mult> = HashMap::new();
            for (c, m) in trunc.product(a, b) {
                let rc = if trunc.is_explored(*c) { restricted[*c].clone() } else { r.restrict(trunc.label(*c))? };
                add_into(&mut rhs, &rc, m);
            }
            if lhs != rhs {
                rec.push(
                    Axiom::RestrictionMultiplicativity,
                    &[trunc.label(a), trunc.label(b)],
                    "restriction of the product differs from the product of restrictions".into(),
                );
            }
        }
    }
    Ok(rec.finish(trunc.depth()))
}

fn show(d: &[(String, Mult)]) -> String {
    let parts: Vec<String> = d.iter().map(|(l, m)| if m.is_one() { l.clone() } else { format!("{m}·{l}") }).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn validated(r: &RestrictionData, depth: usize) -> Result<Truncation> {
    let trunc = r.source.truncate(depth)?;
    let report = validate_restriction_on(r, &trunc)?;
    if report.is_valid() {
        Ok(trunc)
    } else {
        Err(FusionError::InvalidRestriction(report))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Normality {
    Normal {
        checked_to_depth: Option<usize>,
    },
    /// `0 < (τ|_H, 1_H) < d_τ`.
    NotNormal {
        witness: String,
        multiplicity: u64,
        dim: u64,
    },
}

/// `H` is normal iff every irreducible restricts with trivial multiplicity
/// `0` or `d_τ`.
pub fn is_normal(r: &RestrictionData, depth: usize) -> Result<Normality> {
    let trunc = validated(r, depth)?;
    for i in 0..trunc.explored() {
        let m = r.unit_multiplicity(trunc.label(i))?;
        let d = Mult::from(trunc.dim(i));
        if !m.is_zero() && m != d {
            return Ok(Normality::NotNormal {
                witness: trunc.label(i).to_string(),
                multiplicity: m.to_u64().expect("bounded by the dimension"),
                dim: trunc.dim(i),
            });
        }
    }
    Ok(Normality::Normal { checked_to_depth: trunc.depth() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SubgroupCentrality {
    /// Each `τ` restricts to `d_τ` copies of one grouplike `λ_τ`.
    Central {
        assignment: Vec<(String, String)>,
        checked_to_depth: Option<usize>,
    },
    NotCentral {
        witness: String,
        restriction: Vec<(String, String)>,
    },
}

impl SubgroupCentrality {
    pub fn is_central(&self) -> bool {
        matches!(self, SubgroupCentrality::Central { .. })
    }
}

/// `H` is central iff every `τ|_H` is `d_τ·λ_τ` for a 1-dimensional `λ_τ`.
pub fn is_central_subgroup(r: &RestrictionData, depth: usize) -> Result<SubgroupCentrality> {
    let trunc = validated(r, depth)?;
    let mut assignment = Vec::with_capacity(trunc.explored());
    for i in 0..trunc.explored() {
        let d = r.restrict(trunc.label(i))?;
        let single = d.len() == 1 && r.target.dim(&d[0].0)? == 1 && d[0].1 == Mult::from(trunc.dim(i));
        if !single {
            return Ok(SubgroupCentrality::NotCentral {
                witness: trunc.label(i).to_string(),
                restriction: d.into_iter().map(|(l, m)| (l, m.to_string())).collect(),
            });
        }
        assignment.push((trunc.label(i).to_string(), d[0].0.clone()));
    }
    Ok(SubgroupCentrality::Central { assignment, checked_to_depth: trunc.depth() })
}

/// `Σ_H = {τ : τ|_H = d_τ·1_H}` on the explored part of the source.
pub fn trivial_restriction_subobject(r: &RestrictionData, trunc: &Truncation) -> Result<Subobject> {
    let report = validate_restriction_on(r, trunc)?;
    if !report.is_valid() {
        return Err(FusionError::InvalidRestriction(report));
    }
    let unit = r.target.unit();
    let mut members = Vec::new();
    for i in 0..trunc.explored() {
        let d = r.restrict(trunc.label(i))?;
        if d.len() == 1 && d[0].0 == unit && d[0].1 == Mult::from(trunc.dim(i)) {
            members.push(i);
        }
    }
    let sigma = Subobject::from_members(members);
    sigma.check(trunc).map_err(|e| {
        FusionError::InternalInconsistency(format!("trivially restricting classes are not a subobject: {e}"))
    })?;
    Ok(sigma)
}

/// For a normal restriction: whether the subgroup test and the subobject
/// test on `Σ_H` agree. `None` when the restriction is not normal.
pub fn centrality_agreement(r: &RestrictionData, depth: usize) -> Result<Option<bool>> {
    if !matches!(is_normal(r, depth)?, Normality::Normal { .. }) {
        return Ok(None);
    }
    let trunc = r.source.truncate(depth)?;
    let sigma = trivial_restriction_subobject(r, &trunc)?;
    let by_subobject = is_central_subobject(&trunc, &sigma)?.is_central();
    let by_subgroup = is_central_subgroup(r, depth)?.is_central();
    Ok(Some(by_subobject == by_subgroup))
}

/// The 1-dimensional classes of a ring with their group law.
#[derive(Clone, Debug)]
pub struct Grouplikes {
    pub elements: Vec<String>,
    /// `None` when products of explored grouplikes leave the exploration.
    pub table: Option<GroupTable>,
    pub checked_to_depth: Option<usize>,
}

pub fn grouplikes(ring: &FusionRing, depth: usize) -> Result<Grouplikes> {
    let trunc = ring.truncate(depth)?;
    let elems: Vec<usize> = (0..trunc.explored()).filter(|&i| trunc.dim(i) == 1).collect();
    let slot: HashMap<usize, usize> = elems.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let mut mult = vec![vec![0; elems.len()]; elems.len()];
    let mut closed = true;
    for (x, &a) in elems.iter().enumerate() {
        for (y, &b) in elems.iter().enumerate() {
            let p = trunc.product(a, b);
            if p.len() != 1 || !p[0].1.is_one() || trunc.dim(p[0].0) != 1 {
                return Err(FusionError::InternalInconsistency(format!(
                    "{} x {} of 1-dimensional classes is not a single 1-dimensional class",
                    trunc.label(a),
                    trunc.label(b)
                )));
            }
            match slot.get(&p[0].0) {
                Some(&z) => mult[x][y] = z,
                None => closed = false,
            }
        }
    }
    let labels: Vec<String> = trunc.labels_of(&elems);
    let table = if closed {
        let identity = slot[&trunc.unit()];
        Some(GroupTable::new(labels.clone(), mult, identity).map_err(FusionError::NotAGroup)?)
    } else {
        None
    };
    Ok(Grouplikes { elements: labels, table, checked_to_depth: trunc.depth() })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapEntry {
    from: String,
    to: Vec<TargetEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TargetEntry {
    label: String,
    #[serde(serialize_with = "write_mult", deserialize_with = "read_mult")]
    n: Mult,
}

/// Restriction file: `source` and `target` are catalog names (files
/// relative to the restriction file), then either `rule` or `map`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RestrictionFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    pub target: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<BranchingRule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    map: Option<Vec<MapEntry>>,
}

/// Loads a restriction file. `source` overrides the file's source ring.
pub fn load_restriction(path: impl AsRef<Path>, source: Option<FusionRing>) -> Result<RestrictionData> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let file: RestrictionFile =
        serde_json::from_str(&text).map_err(|e| FusionError::MalformedFile(format!("{}: {e}", path.display())))?;
    let base = path.parent();
    let source = match (source, &file.source) {
        (Some(s), _) => s,
        (None, Some(name)) => resolve_in(name, base)?,
        (None, None) => return Err(FusionError::MalformedFile(format!("{}: no source ring given", path.display()))),
    };
    let target = resolve_in(&file.target, base)?;
    match (file.rule, file.map) {
        (Some(rule), None) => Ok(RestrictionData::from_rule(source, target, rule)),
        (None, Some(entries)) => {
            let mut map: BTreeMap<String, Decomposition> = BTreeMap::new();
            for e in entries {
                let d = e.to.into_iter().map(|t| (t.label, t.n)).collect();
                if map.insert(e.from.clone(), d).is_some() {
                    return Err(FusionError::MalformedFile(format!("duplicate map entry for `{}`", e.from)));
                }
            }
            RestrictionData::from_table(source, target, map)
        }
        _ => Err(FusionError::MalformedFile(format!("{}: give exactly one of `rule` and `map`", path.display()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{
        circle_dual_ring, free_product, group_ring, rep_cyclic, rep_s3, su2_ring, trivial_ring, GroupPresentationInput,
    };
    use crate::group::abelian_invariants;

    fn z2() -> FusionRing {
        group_ring(&GroupPresentationInput::cyclic(2)).unwrap()
    }

    fn parity() -> RestrictionData {
        RestrictionData::from_rule(su2_ring(), z2(), BranchingRule::Su2Parity)
    }

    fn weights() -> RestrictionData {
        RestrictionData::from_rule(su2_ring(), circle_dual_ring(), BranchingRule::Su2Weights)
    }

    fn table(pairs: &[(&str, &[(&str, u64)])]) -> BTreeMap<String, Decomposition> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.iter().map(|(l, n)| (l.to_string(), Mult::from(*n))).collect()))
            .collect()
    }

    #[test]
    fn su2_restrictions_validate() {
        for r in [parity(), weights()] {
            let report = validate_restriction(&r, 6).unwrap();
            assert!(report.is_valid(), "{report}");
        }
        assert_eq!(
            weights().restrict("V2").unwrap(),
            vec![("z^0".into(), Mult::one()), ("z^-2".into(), Mult::one()), ("z^2".into(), Mult::one())]
        );
    }

    #[test]
    fn normality() {
        assert!(matches!(is_normal(&parity(), 6).unwrap(), Normality::Normal { checked_to_depth: Some(6) }));
        assert_eq!(
            is_normal(&weights(), 6).unwrap(),
            Normality::NotNormal { witness: "V2".into(), multiplicity: 1, dim: 3 }
        );
        let id = RestrictionData::from_rule(rep_s3(), rep_s3(), BranchingRule::Identity);
        assert!(matches!(is_normal(&id, 1).unwrap(), Normality::Normal { .. }));
    }

    #[test]
    fn centrality() {
        let SubgroupCentrality::Central { assignment, .. } = is_central_subgroup(&parity(), 6).unwrap() else {
            panic!("parity restriction is central")
        };
        assert_eq!(assignment[3], ("V3".to_string(), "g".to_string()));
        let SubgroupCentrality::NotCentral { witness, .. } = is_central_subgroup(&weights(), 6).unwrap() else {
            panic!("weight restriction is not central")
        };
        assert_eq!(witness, "V1");
        let trivial = RestrictionData::from_rule(su2_ring(), trivial_ring(), BranchingRule::Trivial);
        assert!(is_central_subgroup(&trivial, 6).unwrap().is_central());
    }

    #[test]
    fn trivially_restricting_classes() {
        let t = su2_ring().truncate(6).unwrap();
        assert_eq!(trivial_restriction_subobject(&parity(), &t).unwrap().labels(&t), ["V0", "V2", "V4", "V6"]);
        let trivial = RestrictionData::from_rule(su2_ring(), trivial_ring(), BranchingRule::Trivial);
        assert_eq!(trivial_restriction_subobject(&trivial, &t).unwrap().len(), 7);
        let id = RestrictionData::from_rule(su2_ring(), su2_ring(), BranchingRule::Identity);
        assert_eq!(trivial_restriction_subobject(&id, &t).unwrap().labels(&t), ["V0"]);
    }

    #[test]
    fn tabulated_restrictions() {
        let a3 = RestrictionData::from_table(
            rep_s3(),
            rep_cyclic(3),
            table(&[("1", &[("chi0", 1)]), ("sgn", &[("chi0", 1)]), ("rho", &[("chi1", 1), ("chi2", 1)])]),
        )
        .unwrap();
        assert!(matches!(is_normal(&a3, 1).unwrap(), Normality::Normal { .. }));
        assert!(!is_central_subgroup(&a3, 1).unwrap().is_central());
        assert_eq!(centrality_agreement(&a3, 1).unwrap(), Some(true));

        let s2 = RestrictionData::from_table(
            rep_s3(),
            rep_cyclic(2),
            table(&[("1", &[("chi0", 1)]), ("sgn", &[("chi1", 1)]), ("rho", &[("chi0", 1), ("chi1", 1)])]),
        )
        .unwrap();
        assert_eq!(is_normal(&s2, 1).unwrap(), Normality::NotNormal { witness: "rho".into(), multiplicity: 1, dim: 2 });

        let broken = RestrictionData::from_table(
            rep_s3(),
            rep_cyclic(2),
            table(&[("1", &[("chi0", 1)]), ("sgn", &[("chi1", 1)]), ("rho", &[("chi0", 2)])]),
        )
        .unwrap();
        let Err(FusionError::InvalidRestriction(report)) = is_normal(&broken, 1) else { panic!("should be invalid") };
        assert!(report.has(Axiom::RestrictionMultiplicativity));
        assert!(RestrictionData::from_table(su2_ring(), z2(), BTreeMap::new()).is_err());
    }

    #[test]
    fn grouplike_groups() {
        let g = grouplikes(&rep_s3(), 1).unwrap();
        assert_eq!(g.elements, ["1", "sgn"]);
        assert_eq!(abelian_invariants(g.table.as_ref().unwrap()), [2]);
        let g = grouplikes(&su2_ring(), 6).unwrap();
        assert_eq!(g.elements, ["V0"]);
        let g = grouplikes(&free_product(&su2_ring(), &z2()), 4).unwrap();
        assert_eq!(g.elements, ["e", "(2:g)"]);
        assert_eq!(g.table.unwrap().order(), 2);
        assert!(grouplikes(&circle_dual_ring(), 3).unwrap().table.is_none());
    }
}
