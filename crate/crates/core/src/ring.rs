//! Fusion ring data model.
//!
//! A [`FusionRing`] is either an explicit finite table or a generated ring
//! backed by an exact [`FusionRule`] oracle over canonical labels. Every
//! combinatorial algorithm in the crate works on a [`Truncation`]: the whole
//! basis for explicit rings, or the breadth-first ball of a given depth
//! around the unit for generated rings, together with the pairwise products
//! of its elements.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{FusionError, Result};

/// Fusion multiplicity `N_{ab}^c`.
pub type Mult = BigUint;

/// Decomposition of `a ⊗ b` into irreducible classes with multiplicities.
pub type Decomposition = Vec<(String, Mult)>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisElement {
    pub label: String,
    pub dim: u64,
}

impl BasisElement {
    pub fn new(label: impl Into<String>, dim: u64) -> Self {
        BasisElement { label: label.into(), dim }
    }
}

/// Exact fusion oracle for a ring with infinitely many irreducibles.
///
/// Labels are canonical: two labels name the same class iff they are equal
/// as strings. `product` must return every constituent with its exact
/// multiplicity, ordered by [`FusionRule::grade`] and then label.
pub trait FusionRule: Send + Sync {
    fn unit(&self) -> String;

    /// A generating set closed under duality.
    fn generators(&self) -> Vec<String>;

    fn check(&self, label: &str) -> Result<()>;

    fn dim(&self, label: &str) -> Result<u64>;

    fn dual(&self, label: &str) -> Result<String>;

    fn product(&self, a: &str, b: &str) -> Result<Decomposition>;

    /// Natural size of a label (spin, word length, ...), used for ordering
    /// constituents that lie outside any truncation.
    fn grade(&self, label: &str) -> usize;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RingKind {
    Explicit,
    Generated,
}

struct ExplicitTable {
    basis: Vec<BasisElement>,
    index: HashMap<String, usize>,
    unit: usize,
    dual: Vec<usize>,
    /// Row-major `n × n`, each entry sorted by constituent index.
    table: Vec<Vec<(usize, Mult)>>,
}

impl ExplicitTable {
    fn product(&self, a: usize, b: usize) -> &[(usize, Mult)] {
        &self.table[a * self.basis.len() + b]
    }
}

#[derive(Clone)]
enum Repr {
    Explicit(Arc<ExplicitTable>),
    Generated(Arc<dyn FusionRule>),
}

/// A based ring with unit, conjugation and nonnegative structure constants.
///
/// Immutable after construction; clones share the underlying data.
#[derive(Clone)]
pub struct FusionRing {
    name: String,
    repr: Repr,
}

impl fmt::Debug for FusionRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FusionRing").field("name", &self.name).field("kind", &self.kind()).finish()
    }
}

impl FusionRing {
    /// Builds an explicit ring from an index-level table.
    ///
    /// Only structural well-formedness is checked here (indices in range,
    /// unique labels, no zero or duplicate entries, every pair covered);
    /// axioms are checked by [`validate_ring`].
    pub fn from_table(
        name: impl Into<String>,
        basis: Vec<BasisElement>,
        unit: usize,
        dual: Vec<usize>,
        table: Vec<Vec<(usize, Mult)>>,
    ) -> Result<Self> {
        let n = basis.len();
        if n == 0 {
            return Err(FusionError::MalformedRing("empty basis".into()));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, b) in basis.iter().enumerate() {
            if b.label.is_empty() {
                return Err(FusionError::MalformedRing(format!("empty label at position {i}")));
            }
            if b.dim == 0 {
                return Err(FusionError::MalformedRing(format!("`{}` has dimension 0", b.label)));
            }
            if index.insert(b.label.clone(), i).is_some() {
                return Err(FusionError::MalformedRing(format!("duplicate label `{}`", b.label)));
            }
        }
        if unit >= n {
            return Err(FusionError::MalformedRing(format!("unit index {unit} out of range")));
        }
        if dual.len() != n || dual.iter().any(|&d| d >= n) {
            return Err(FusionError::MalformedRing("dual map does not cover the basis".into()));
        }
        if table.len() != n * n {
            return Err(FusionError::MalformedRing(format!(
                "fusion table has {} entries, expected {}",
                table.len(),
                n * n
            )));
        }
        let mut sorted = Vec::with_capacity(n * n);
        for (k, row) in table.into_iter().enumerate() {
            let (a, b) = (&basis[k / n].label, &basis[k % n].label);
            if row.is_empty() {
                return Err(FusionError::MalformedRing(format!("product {a} x {b} has empty support")));
            }
            let mut merged: BTreeMap<usize, Mult> = BTreeMap::new();
            for (c, m) in row {
                if c >= n {
                    return Err(FusionError::MalformedRing(format!("dangling constituent index {c}")));
                }
                if m.is_zero() {
                    return Err(FusionError::MalformedRing(format!(
                        "zero multiplicity for {a} x {b} -> {}",
                        basis[c].label
                    )));
                }
                if merged.insert(c, m).is_some() {
                    return Err(FusionError::MalformedRing(format!(
                        "duplicate entry for {a} x {b} -> {}",
                        basis[c].label
                    )));
                }
            }
            sorted.push(merged.into_iter().collect());
        }
        Ok(FusionRing {
            name: name.into(),
            repr: Repr::Explicit(Arc::new(ExplicitTable { basis, index, unit, dual, table: sorted })),
        })
    }

    pub fn generated(name: impl Into<String>, rule: Arc<dyn FusionRule>) -> Self {
        FusionRing { name: name.into(), repr: Repr::Generated(rule) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> RingKind {
        match self.repr {
            Repr::Explicit(_) => RingKind::Explicit,
            Repr::Generated(_) => RingKind::Generated,
        }
    }

    pub fn is_explicit(&self) -> bool {
        self.kind() == RingKind::Explicit
    }

    /// The full basis of an explicit ring, `None` for generated rings.
    pub fn basis(&self) -> Option<&[BasisElement]> {
        match &self.repr {
            Repr::Explicit(t) => Some(&t.basis),
            Repr::Generated(_) => None,
        }
    }

    pub fn unit(&self) -> String {
        match &self.repr {
            Repr::Explicit(t) => t.basis[t.unit].label.clone(),
            Repr::Generated(r) => r.unit(),
        }
    }

    /// Duality-closed generating set. For explicit rings this is every
    /// non-unit basis element.
    pub fn generators(&self) -> Vec<String> {
        match &self.repr {
            Repr::Explicit(t) => {
                t.basis.iter().enumerate().filter(|&(i, _)| i != t.unit).map(|(_, b)| b.label.clone()).collect()
            }
            Repr::Generated(r) => r.generators(),
        }
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        match &self.repr {
            Repr::Explicit(t) => t.index.get(label).copied(),
            Repr::Generated(_) => None,
        }
    }

    pub fn check(&self, label: &str) -> Result<()> {
        match &self.repr {
            Repr::Explicit(t) => {
                t.index.contains_key(label).then_some(()).ok_or_else(|| FusionError::UnknownLabel(label.to_string()))
            }
            Repr::Generated(r) => r.check(label),
        }
    }

    fn explicit_index(t: &ExplicitTable, label: &str) -> Result<usize> {
        t.index.get(label).copied().ok_or_else(|| FusionError::UnknownLabel(label.to_string()))
    }

    pub fn dim(&self, label: &str) -> Result<u64> {
        match &self.repr {
            Repr::Explicit(t) => Ok(t.basis[Self::explicit_index(t, label)?].dim),
            Repr::Generated(r) => r.dim(label),
        }
    }

    pub fn dual(&self, label: &str) -> Result<String> {
        match &self.repr {
            Repr::Explicit(t) => Ok(t.basis[t.dual[Self::explicit_index(t, label)?]].label.clone()),
            Repr::Generated(r) => r.dual(label),
        }
    }

    /// Exact decomposition of `a ⊗ b`.
    pub fn product(&self, a: &str, b: &str) -> Result<Decomposition> {
        match &self.repr {
            Repr::Explicit(t) => {
                let (i, j) = (Self::explicit_index(t, a)?, Self::explicit_index(t, b)?);
                Ok(t.product(i, j).iter().map(|(c, m)| (t.basis[*c].label.clone(), m.clone())).collect())
            }
            Repr::Generated(r) => r.product(a, b),
        }
    }

    /// Left-associated iterated fusion `((z₁ × z₂) × …) × zₙ`.
    pub fn product_word<S: AsRef<str>>(&self, word: &[S]) -> Result<Decomposition> {
        let (first, rest) = word.split_first().ok_or_else(|| FusionError::MalformedInput("empty word".into()))?;
        let first = first.as_ref();
        self.check(first)?;
        let mut acc: Decomposition = vec![(first.to_string(), Mult::one())];
        for z in rest {
            let mut next: HashMap<String, Mult> = HashMap::new();
            for (x, m) in &acc {
                for (c, n) in self.product(x, z.as_ref())? {
                    *next.entry(c).or_default() += m * n;
                }
            }
            acc = self.sorted(next.into_iter());
        }
        Ok(acc)
    }

    /// Sort key realizing basis order: input order for explicit rings,
    /// (grade, label) for generated ones.
    pub fn order_key(&self, label: &str) -> (usize, String) {
        match &self.repr {
            Repr::Explicit(t) => (t.index.get(label).copied().unwrap_or(usize::MAX), String::new()),
            Repr::Generated(r) => (r.grade(label), label.to_string()),
        }
    }

    pub(crate) fn sorted(&self, items: impl Iterator<Item = (String, Mult)>) -> Decomposition {
        let mut v: Decomposition = items.collect();
        v.sort_by_cached_key(|(l, _)| self.order_key(l));
        v
    }

    /// Same fusion data with every dimension replaced by `dims(label)`.
    /// No validity check is performed on the result.
    pub fn with_dims(&self, dims: impl Fn(&str) -> u64 + Send + Sync + 'static) -> FusionRing {
        match &self.repr {
            Repr::Explicit(t) => {
                let basis = t.basis.iter().map(|b| BasisElement::new(b.label.clone(), dims(&b.label))).collect();
                let table = ExplicitTable {
                    basis,
                    index: t.index.clone(),
                    unit: t.unit,
                    dual: t.dual.clone(),
                    table: t.table.clone(),
                };
                FusionRing { name: self.name.clone(), repr: Repr::Explicit(Arc::new(table)) }
            }
            Repr::Generated(r) => FusionRing {
                name: self.name.clone(),
                repr: Repr::Generated(Arc::new(DimOverride { inner: r.clone(), dims: Box::new(dims) })),
            },
        }
    }

    /// Explores the ring: whole basis if explicit, breadth-first ball of
    /// radius `depth` around the unit if generated.
    pub fn truncate(&self, depth: usize) -> Result<Truncation> {
        Truncation::new(self, depth)
    }
}

struct DimOverride {
    inner: Arc<dyn FusionRule>,
    dims: Box<dyn Fn(&str) -> u64 + Send + Sync>,
}

impl FusionRule for DimOverride {
    fn unit(&self) -> String {
        self.inner.unit()
    }
    fn generators(&self) -> Vec<String> {
        self.inner.generators()
    }
    fn check(&self, label: &str) -> Result<()> {
        self.inner.check(label)
    }
    fn dim(&self, label: &str) -> Result<u64> {
        self.inner.check(label)?;
        Ok((self.dims)(label))
    }
    fn dual(&self, label: &str) -> Result<String> {
        self.inner.dual(label)
    }
    fn product(&self, a: &str, b: &str) -> Result<Decomposition> {
        self.inner.product(a, b)
    }
    fn grade(&self, label: &str) -> usize {
        self.inner.grade(label)
    }
}

/// A finite explored region of a fusion ring.
///
/// Indices `0..explored()` are the explored basis in basis order (input
/// order or breadth-first discovery order). Indices beyond that form the
/// frontier: constituents of explored products that lie outside the
/// exploration depth. Pairwise products are available for explored
/// elements only, and every constituent of such a product has an index.
#[derive(Clone)]
pub struct Truncation {
    ring: FusionRing,
    depth: Option<usize>,
    labels: Vec<String>,
    index: HashMap<String, usize>,
    dims: Vec<u64>,
    duals: Vec<usize>,
    explored: usize,
    unit: usize,
    products: Vec<Vec<(usize, Mult)>>,
}

impl fmt::Debug for Truncation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Truncation")
            .field("ring", &self.ring.name)
            .field("depth", &self.depth)
            .field("explored", &self.explored)
            .field("frontier", &(self.labels.len() - self.explored))
            .finish()
    }
}

impl Truncation {
    fn new(ring: &FusionRing, depth: usize) -> Result<Self> {
        match &ring.repr {
            Repr::Explicit(t) => Ok(Truncation {
                ring: ring.clone(),
                depth: None,
                labels: t.basis.iter().map(|b| b.label.clone()).collect(),
                index: t.index.clone(),
                dims: t.basis.iter().map(|b| b.dim).collect(),
                duals: t.dual.clone(),
                explored: t.basis.len(),
                unit: t.unit,
                products: t.table.clone(),
            }),
            Repr::Generated(rule) => Self::explore(ring, rule.as_ref(), depth),
        }
    }

    fn explore(ring: &FusionRing, rule: &dyn FusionRule, depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(FusionError::MalformedInput("depth must be at least 1".into()));
        }
        let unit = rule.unit();
        let gens = rule.generators();
        let mut labels = vec![unit.clone()];
        let mut index: HashMap<String, usize> = HashMap::from([(unit, 0)]);
        let mut level = vec![0usize];
        for _ in 0..depth {
            let mut next = Vec::new();
            for &x in &level {
                for g in &gens {
                    for (c, _) in rule.product(&labels[x], g)? {
                        if !index.contains_key(&c) {
                            index.insert(c.clone(), labels.len());
                            next.push(labels.len());
                            labels.push(c);
                        }
                    }
                }
            }
            level = next;
        }
        let explored = labels.len();

        let raw: Vec<Decomposition> = (0..explored * explored)
            .into_par_iter()
            .map(|k| rule.product(&labels[k / explored], &labels[k % explored]))
            .collect::<Result<_>>()?;

        let mut intern = |label: String, labels: &mut Vec<String>| -> usize {
            *index.entry(label).or_insert_with_key(|l| {
                labels.push(l.clone());
                labels.len() - 1
            })
        };
        let mut products = Vec::with_capacity(raw.len());
        for decomp in raw {
            let mut row: Vec<(usize, Mult)> = decomp.into_iter().map(|(c, m)| (intern(c, &mut labels), m)).collect();
            row.sort_by_key(|(c, _)| *c);
            products.push(row);
        }
        // frontier is closed under duality; the loop also covers any
        // label a misbehaving rule might introduce
        let mut duals = Vec::with_capacity(labels.len());
        let mut i = 0;
        while i < labels.len() {
            let d = rule.dual(&labels[i])?;
            duals.push(intern(d, &mut labels));
            i += 1;
        }
        for (i, &d) in duals.iter().enumerate().take(explored) {
            if d >= explored {
                return Err(FusionError::InternalInconsistency(format!(
                    "dual of explored `{}` lies outside the exploration",
                    labels[i]
                )));
            }
        }
        let dims = labels.iter().map(|l| rule.dim(l)).collect::<Result<Vec<_>>>()?;
        Ok(Truncation {
            ring: ring.clone(),
            depth: Some(depth),
            labels,
            index,
            dims,
            duals,
            explored,
            unit: 0,
            products,
        })
    }

    pub fn ring(&self) -> &FusionRing {
        &self.ring
    }

    /// Exploration depth, `None` when the truncation is the whole ring.
    pub fn depth(&self) -> Option<usize> {
        self.depth
    }

    pub fn is_complete(&self) -> bool {
        self.depth.is_none()
    }

    /// Number of explored basis elements.
    pub fn explored(&self) -> usize {
        self.explored
    }

    /// Number of indexed elements, frontier included.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn is_explored(&self, i: usize) -> bool {
        i < self.explored
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Index of an explored element, or an error naming the label.
    pub fn resolve(&self, label: &str) -> Result<usize> {
        match self.index.get(label) {
            Some(&i) if i < self.explored => Ok(i),
            Some(_) => Err(FusionError::DepthExceeded { label: label.to_string(), depth: self.depth.unwrap_or(0) }),
            None => {
                self.ring.check(label)?;
                Err(FusionError::DepthExceeded { label: label.to_string(), depth: self.depth.unwrap_or(0) })
            }
        }
    }

    pub fn dim(&self, i: usize) -> u64 {
        self.dims[i]
    }

    pub fn dual(&self, i: usize) -> usize {
        self.duals[i]
    }

    /// Product of two explored elements, sorted by index.
    ///
    /// # Panics
    /// If either index is not explored.
    pub fn product(&self, a: usize, b: usize) -> &[(usize, Mult)] {
        assert!(a < self.explored && b < self.explored, "product outside the explored region");
        &self.products[a * self.explored + b]
    }

    pub fn support(&self, a: usize, b: usize) -> impl Iterator<Item = usize> + '_ {
        self.product(a, b).iter().map(|(c, _)| *c)
    }

    pub fn coefficient(&self, a: usize, b: usize, c: usize) -> Mult {
        self.product(a, b)
            .binary_search_by_key(&c, |(x, _)| *x)
            .map(|k| self.product(a, b)[k].1.clone())
            .unwrap_or_default()
    }

    pub fn labels_of<'a>(&'a self, set: impl IntoIterator<Item = &'a usize>) -> Vec<String> {
        set.into_iter().map(|&i| self.labels[i].clone()).collect()
    }
}

/// A set of basis elements containing the unit, closed under duality and
/// fusion, given by indices into a [`Truncation`].
///
/// On truncated rings closure is only meaningful for constituents that lie
/// inside the explored region.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subobject {
    members: BTreeSet<usize>,
}

impl Subobject {
    /// Wraps a member set without checking the subobject axioms.
    pub fn from_members(members: impl IntoIterator<Item = usize>) -> Self {
        Subobject { members: members.into_iter().collect() }
    }

    pub fn from_labels<S: AsRef<str>>(trunc: &Truncation, labels: &[S]) -> Result<Self> {
        let members = labels
            .iter()
            .map(|l| {
                trunc.index_of(l.as_ref()).map(Ok).unwrap_or_else(|| {
                    trunc.ring().check(l.as_ref())?;
                    Err(FusionError::DepthExceeded { label: l.as_ref().to_string(), depth: trunc.depth().unwrap_or(0) })
                })
            })
            .collect::<Result<BTreeSet<_>>>()?;
        Ok(Subobject { members })
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.contains(&i)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members inside the explored region.
    pub fn explored_members<'a>(&'a self, trunc: &'a Truncation) -> impl Iterator<Item = usize> + 'a {
        self.members.iter().copied().filter(|&i| trunc.is_explored(i))
    }

    pub fn labels(&self, trunc: &Truncation) -> Vec<String> {
        trunc.labels_of(&self.members)
    }

    pub fn is_subset(&self, other: &Subobject) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn intersection(&self, other: &Subobject) -> Subobject {
        Subobject { members: self.members.intersection(&other.members).copied().collect() }
    }

    /// Checks unit membership, dual closure and fusion closure (for products
    /// of explored members, on explored constituents).
    pub fn check(&self, trunc: &Truncation) -> Result<()> {
        if let Some(&bad) = self.members.iter().find(|&&i| i >= trunc.len()) {
            return Err(FusionError::NotASubobject(format!("index {bad} out of range")));
        }
        if !self.contains(trunc.unit()) {
            return Err(FusionError::NotASubobject("missing the unit".into()));
        }
        for &a in &self.members {
            if !self.contains(trunc.dual(a)) {
                return Err(FusionError::NotASubobject(format!(
                    "`{}` present but its dual `{}` is not",
                    trunc.label(a),
                    trunc.label(trunc.dual(a))
                )));
            }
        }
        let inner: Vec<usize> = self.explored_members(trunc).collect();
        for &a in &inner {
            for &b in &inner {
                if let Some(c) = trunc.support(a, b).find(|&c| trunc.is_explored(c) && !self.contains(c)) {
                    return Err(FusionError::NotASubobject(format!(
                        "{} x {} contains `{}` outside the set",
                        trunc.label(a),
                        trunc.label(b),
                        trunc.label(c)
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Smallest subobject containing `seed` and the unit.
///
/// Fails with `DepthExceeded` when the closure leaves the explored region.
pub fn generated_subobject(trunc: &Truncation, seed: &[usize]) -> Result<Subobject> {
    let mut members: BTreeSet<usize> = BTreeSet::from([trunc.unit()]);
    let mut queue: Vec<usize> = Vec::new();
    let escape =
        |c: usize| FusionError::DepthExceeded { label: trunc.label(c).to_string(), depth: trunc.depth().unwrap_or(0) };
    for &s in seed {
        if !trunc.is_explored(s) {
            return Err(escape(s));
        }
        for x in [s, trunc.dual(s)] {
            if members.insert(x) {
                queue.push(x);
            }
        }
    }
    while let Some(a) = queue.pop() {
        let current: Vec<usize> = members.iter().copied().collect();
        for b in current {
            for (x, y) in [(a, b), (b, a)] {
                for c in trunc.support(x, y) {
                    if !trunc.is_explored(c) {
                        return Err(escape(c));
                    }
                    if members.insert(c) {
                        queue.push(c);
                    }
                }
            }
        }
    }
    Ok(Subobject { members })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    UnitDimension,
    UnitLaw,
    Duality,
    DualInvolution,
    DualDimension,
    DualOfUnit,
    Frobenius,
    ConjugationAntiMultiplicative,
    Associativity,
    DimensionHomomorphism,
    RestrictionUnit,
    RestrictionDimension,
    RestrictionConjugation,
    RestrictionMultiplicativity,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::UnitDimension => "unit dimension",
            Axiom::UnitLaw => "unit law",
            Axiom::Duality => "duality",
            Axiom::DualInvolution => "dual involution",
            Axiom::DualDimension => "dual dimension",
            Axiom::DualOfUnit => "dual of unit",
            Axiom::Frobenius => "Frobenius symmetry",
            Axiom::ConjugationAntiMultiplicative => "conjugation anti-multiplicativity",
            Axiom::Associativity => "associativity",
            Axiom::DimensionHomomorphism => "dimension homomorphism",
            Axiom::RestrictionUnit => "restriction of the unit",
            Axiom::RestrictionDimension => "restriction preserves dimension",
            Axiom::RestrictionConjugation => "restriction commutes with conjugation",
            Axiom::RestrictionMultiplicativity => "restriction is multiplicative",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<String>,
    pub detail: String,
}

/// Outcome of axiom validation. Empty `violations` means every checked
/// identity holds; `checked_to_depth` is set for generated rings.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checked_to_depth: Option<usize>,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }

    pub fn witnesses(&self, axiom: Axiom) -> impl Iterator<Item = &[String]> {
        self.violations.iter().filter(move |v| v.axiom == axiom).map(|v| v.witness.as_slice())
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "no violations");
        }
        for v in &self.violations {
            writeln!(f, "  {} ({}): {}", v.axiom, v.witness.join(", "), v.detail)?;
        }
        Ok(())
    }
}

/// Witnesses kept per axiom.
const MAX_WITNESSES: usize = 50;

pub(crate) struct Recorder {
    violations: Vec<Violation>,
    counts: HashMap<Axiom, usize>,
}

impl Recorder {
    pub(crate) fn new() -> Self {
        Recorder { violations: Vec::new(), counts: HashMap::new() }
    }

    pub(crate) fn finish(self, checked_to_depth: Option<usize>) -> ValidationReport {
        ValidationReport { checked_to_depth, violations: self.violations }
    }

    pub(crate) fn push(&mut self, axiom: Axiom, witness: &[&str], detail: String) {
        let count = self.counts.entry(axiom).or_default();
        *count += 1;
        if *count <= MAX_WITNESSES {
            self.violations.push(Violation { axiom, witness: witness.iter().map(|s| s.to_string()).collect(), detail });
        }
    }
}

/// Label-level product cache used for identities that reach past the
/// explored region.
struct LabelProducts<'a> {
    ring: &'a FusionRing,
    cache: HashMap<(String, String), HashMap<String, Mult>>,
}

impl LabelProducts<'_> {
    fn get(&mut self, a: &str, b: &str) -> Result<&HashMap<String, Mult>> {
        let key = (a.to_string(), b.to_string());
        if !self.cache.contains_key(&key) {
            let value = self.ring.product(a, b)?.into_iter().collect();
            self.cache.insert(key.clone(), value);
        }
        Ok(&self.cache[&key])
    }
}

/// Checks every fusion-ring axiom and reports each violation with a witness.
///
/// Generated rings are checked on the breadth-first ball of radius `depth`:
/// all identities whose free variables range over explored elements, with
/// intermediate constituents computed exactly by the oracle.
pub fn validate_ring(ring: &FusionRing, depth: usize) -> Result<ValidationReport> {
    let trunc = ring.truncate(depth)?;
    validate_truncation(&trunc)
}

pub fn validate_truncation(trunc: &Truncation) -> Result<ValidationReport> {
    let n = trunc.explored();
    let unit = trunc.unit();
    let l = |i: usize| trunc.label(i);
    let mut rec = Recorder::new();

    if trunc.dim(unit) != 1 {
        rec.push(Axiom::UnitDimension, &[l(unit)], format!("dim = {}", trunc.dim(unit)));
    }
    if trunc.dual(unit) != unit {
        rec.push(Axiom::DualOfUnit, &[l(unit)], format!("dual is `{}`", l(trunc.dual(unit))));
    }
    for a in 0..n {
        let d = trunc.dual(a);
        if trunc.dual(d) != a {
            rec.push(Axiom::DualInvolution, &[l(a)], format!("dual of dual is `{}`", l(trunc.dual(d))));
        }
        if trunc.dim(d) != trunc.dim(a) {
            rec.push(Axiom::DualDimension, &[l(a), l(d)], format!("dim {} vs {}", trunc.dim(a), trunc.dim(d)));
        }
        for (x, y) in [(unit, a), (a, unit)] {
            let p = trunc.product(x, y);
            if p.len() != 1 || p[0].0 != a || !p[0].1.is_one() {
                rec.push(Axiom::UnitLaw, &[l(x), l(y)], "product with the unit is not a singleton".into());
            }
        }
    }

    let one = Mult::one();
    for a in 0..n {
        for b in 0..n {
            let to_unit = trunc.coefficient(a, b, unit);
            let expected = if b == trunc.dual(a) { one.clone() } else { Mult::zero() };
            if to_unit != expected {
                rec.push(
                    Axiom::Duality,
                    &[l(a), l(b)],
                    format!("multiplicity of the unit is {to_unit}, expected {expected}"),
                );
            }

            let mut dim_sum = Mult::zero();
            for (c, m) in trunc.product(a, b) {
                dim_sum += m * Mult::from(trunc.dim(*c));
            }
            let dim_prod = Mult::from(trunc.dim(a)) * Mult::from(trunc.dim(b));
            if dim_sum != dim_prod {
                rec.push(Axiom::DimensionHomomorphism, &[l(a), l(b)], format!("{dim_prod} != {dim_sum}"));
            }

            // N_{ab}^c = N_{b̄ ā}^{c̄}
            let (bd, ad) = (trunc.dual(b), trunc.dual(a));
            let lhs: BTreeMap<usize, &Mult> = trunc.product(a, b).iter().map(|(c, m)| (trunc.dual(*c), m)).collect();
            let rhs: BTreeMap<usize, &Mult> = trunc.product(bd, ad).iter().map(|(c, m)| (*c, m)).collect();
            if lhs != rhs {
                rec.push(
                    Axiom::ConjugationAntiMultiplicative,
                    &[l(a), l(b)],
                    format!("dual of {} x {} differs from {} x {}", l(a), l(b), l(bd), l(ad)),
                );
            }

            // N_{ab}^c = N_{āc}^b = N_{cb̄}^a over explored c
            for c in 0..n {
                let nab = trunc.coefficient(a, b, c);
                let nacb = trunc.coefficient(ad, c, b);
                let ncba = trunc.coefficient(c, bd, a);
                if nab != nacb || nab != ncba {
                    rec.push(
                        Axiom::Frobenius,
                        &[l(a), l(b), l(c)],
                        format!("N_ab^c = {nab}, N_(a*)c^b = {nacb}, N_c(b*)^a = {ncba}"),
                    );
                }
            }
        }
    }

    let mut cache = LabelProducts { ring: trunc.ring(), cache: HashMap::new() };
    let explored_products: Vec<HashMap<String, Mult>> = (0..n * n)
        .map(|k| trunc.product(k / n, k % n).iter().map(|(c, m)| (l(*c).to_string(), m.clone())).collect())
        .collect();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let mut left: HashMap<String, Mult> = HashMap::new();
                for (e, m) in &explored_products[a * n + b] {
                    for (d, k) in cache.get(e, l(c))? {
                        *left.entry(d.clone()).or_default() += m * k;
                    }
                }
                let mut right: HashMap<String, Mult> = HashMap::new();
                for (f, m) in &explored_products[b * n + c] {
                    for (d, k) in cache.get(l(a), f)? {
                        *right.entry(d.clone()).or_default() += m * k;
                    }
                }
                if left != right {
                    rec.push(Axiom::Associativity, &[l(a), l(b), l(c)], "(a x b) x c differs from a x (b x c)".into());
                }
            }
        }
    }

    Ok(rec.finish(trunc.depth()))
}
