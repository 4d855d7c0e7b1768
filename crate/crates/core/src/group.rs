//! Finite group tables and their structural identification.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{FusionError, Result};

/// Which group axiom failed, and on which elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum GroupAxiomWitness {
    Shape { detail: String },
    Identity { element: String },
    Inverse { element: String },
    Associativity { a: String, b: String, c: String },
}

impl fmt::Display for GroupAxiomWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupAxiomWitness::Shape { detail } => write!(f, "malformed table: {detail}"),
            GroupAxiomWitness::Identity { element } => write!(f, "identity law fails at `{element}`"),
            GroupAxiomWitness::Inverse { element } => write!(f, "`{element}` has no inverse"),
            GroupAxiomWitness::Associativity { a, b, c } => {
                write!(f, "({a}*{b})*{c} != {a}*({b}*{c})")
            }
        }
    }
}

/// Multiplication table of a finite group, verified on construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupTable {
    labels: Vec<String>,
    mult: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl GroupTable {
    pub fn new(labels: Vec<String>, mult: Vec<Vec<usize>>, identity: usize) -> Result<Self, GroupAxiomWitness> {
        let n = labels.len();
        let shape = |detail: String| GroupAxiomWitness::Shape { detail };
        if n == 0 {
            return Err(shape("empty table".into()));
        }
        if identity >= n {
            return Err(shape(format!("identity index {identity} out of range")));
        }
        if mult.len() != n || mult.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(shape(format!("table is not a total {n}x{n} map into the elements")));
        }
        let mut table = GroupTable { labels, mult, identity, inverse: vec![0; n] };
        table.inverse = table.check_axioms()?;
        Ok(table)
    }

    fn check_axioms(&self) -> Result<Vec<usize>, GroupAxiomWitness> {
        let n = self.order();
        let l = |i: usize| self.labels[i].clone();
        for a in 0..n {
            if self.mult[self.identity][a] != a || self.mult[a][self.identity] != a {
                return Err(GroupAxiomWitness::Identity { element: l(a) });
            }
        }
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| self.mult[a][b] == self.identity && self.mult[b][a] == self.identity)
                .ok_or_else(|| GroupAxiomWitness::Inverse { element: l(a) })?;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.mult[a][b];
                for c in 0..n {
                    if self.mult[ab][c] != self.mult[a][self.mult[b][c]] {
                        return Err(GroupAxiomWitness::Associativity { a: l(a), b: l(b), c: l(c) });
                    }
                }
            }
        }
        Ok(inverse)
    }

    /// Re-runs the axiom check.
    pub fn verify(&self) -> Result<(), GroupAxiomWitness> {
        self.check_axioms().map(|_| ())
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mult
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (a + 1..n).all(|b| self.mult[a][b] == self.mult[b][a]))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mult[x][a];
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> u64 {
        (0..self.order()).map(|a| self.element_order(a) as u64).fold(1, lcm)
    }

    pub fn center_size(&self) -> usize {
        let n = self.order();
        (0..n).filter(|&a| (0..n).all(|b| self.mult[a][b] == self.mult[b][a])).count()
    }

    /// Subgroup generated by `gens`.
    pub fn generated_by(&self, gens: &[usize]) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([self.identity]);
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mult[x][g];
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// Greedy generating set in element order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = BTreeSet::from([self.identity]);
        for x in 0..self.order() {
            if !span.contains(&x) {
                gens.push(x);
                span = self.generated_by(&gens);
            }
        }
        gens
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut ps = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            ps.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        ps.push(n);
    }
    ps
}

/// Invariant factors `d₁ | d₂ | … | d_r` of a finite abelian group, from
/// counts of elements killed by each prime power.
pub fn abelian_invariants(table: &GroupTable) -> Vec<u64> {
    let n = table.order() as u64;
    let orders: Vec<u64> = (0..table.order()).map(|a| table.element_order(a) as u64).collect();
    let mut parts_by_prime: Vec<(u64, Vec<u32>)> = Vec::new();
    for p in prime_factors(n) {
        // log_p |G[p^i]| = Σ_j min(λ_j, i)
        let mut logs = vec![0u32];
        let mut pk = 1u64;
        loop {
            pk *= p;
            let count = orders.iter().filter(|&&o| pk.is_multiple_of(o)).count() as u64;
            let log = count.ilog(p);
            if log == *logs.last().unwrap() {
                break;
            }
            logs.push(log);
        }
        // number of cyclic factors of exponent ≥ i
        let at_least: Vec<u32> = logs.windows(2).map(|w| w[1] - w[0]).collect();
        let mut parts = Vec::new();
        for (i, &count) in at_least.iter().enumerate() {
            let next = at_least.get(i + 1).copied().unwrap_or(0);
            parts.extend(std::iter::repeat_n(i as u32 + 1, (count - next) as usize));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        parts_by_prime.push((p, parts));
    }
    let r = parts_by_prime.iter().map(|(_, parts)| parts.len()).max().unwrap_or(0);
    let mut factors: Vec<u64> = (0..r)
        .map(|k| parts_by_prime.iter().map(|(p, parts)| parts.get(k).map_or(1, |&e| p.pow(e))).product())
        .collect();
    factors.reverse();
    factors
}

fn abelian_name(invariants: &[u64]) -> String {
    if invariants.is_empty() {
        "1".to_string()
    } else {
        invariants.iter().map(|d| format!("Z/{d}Z")).collect::<Vec<_>>().join(" x ")
    }
}

/// Backtracking search for an isomorphism `g → h`, as an index map.
pub fn find_isomorphism(g: &GroupTable, h: &GroupTable) -> Option<Vec<usize>> {
    if g.order() != h.order() || g.is_abelian() != h.is_abelian() || g.center_size() != h.center_size() {
        return None;
    }
    let mut g_profile: Vec<usize> = (0..g.order()).map(|a| g.element_order(a)).collect();
    let mut h_profile: Vec<usize> = (0..h.order()).map(|a| h.element_order(a)).collect();
    let h_orders = h_profile.clone();
    g_profile.sort_unstable();
    h_profile.sort_unstable();
    if g_profile != h_profile {
        return None;
    }
    let gens = g.generators();
    let mut images = Vec::with_capacity(gens.len());
    assign(g, h, &gens, &h_orders, &mut images)
}

fn assign(
    g: &GroupTable,
    h: &GroupTable,
    gens: &[usize],
    h_orders: &[usize],
    images: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    if images.len() == gens.len() {
        return extend(g, h, gens, images);
    }
    let want = g.element_order(gens[images.len()]);
    for y in (0..h.order()).filter(|&y| h_orders[y] == want) {
        images.push(y);
        if let Some(map) = assign(g, h, gens, h_orders, images) {
            return Some(map);
        }
        images.pop();
    }
    None
}

fn extend(g: &GroupTable, h: &GroupTable, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let n = g.order();
    let mut map = vec![usize::MAX; n];
    map[g.identity()] = h.identity();
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        for (&s, &t) in gens.iter().zip(images) {
            let y = g.mul(x, s);
            let img = h.mul(map[x], t);
            if map[y] == usize::MAX {
                map[y] = img;
                queue.push_back(y);
            } else if map[y] != img {
                return None;
            }
        }
    }
    let distinct: BTreeSet<usize> = map.iter().copied().collect();
    if distinct.len() != n {
        return None;
    }
    (0..n).all(|a| (0..n).all(|b| map[g.mul(a, b)] == h.mul(map[a], map[b]))).then_some(map)
}

pub fn are_isomorphic(g: &GroupTable, h: &GroupTable) -> bool {
    find_isomorphism(g, h).is_some()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupOrder {
    Finite(u64),
    /// No relation bounding the group was found; agreed between two depths.
    Infinite {
        stable_depth: usize,
    },
}

/// How much a result can be trusted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stability {
    /// Computed on the whole (finite) ring.
    Exact,
    /// Identical results at depths `k` and `k + 1`.
    StableAtDepth(usize),
    /// Results at depths `k` and `k + 1` disagree; rerun deeper.
    UnstableAtDepth(usize),
    /// Truncated computation at depth `k` without a stability comparison.
    CheckedToDepth(usize),
}

impl fmt::Display for Stability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stability::Exact => write!(f, "exact"),
            Stability::StableAtDepth(k) => write!(f, "stable_at_depth({k})"),
            Stability::UnstableAtDepth(k) => write!(f, "unstable_at_depth({k})"),
            Stability::CheckedToDepth(k) => write!(f, "checked_to_depth({k})"),
        }
    }
}

impl Serialize for Stability {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Generators and discovered relators of a finitely generated group.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relations: Vec<String>,
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{} | {}>", self.generators.join(", "), self.relations.join(", "))
    }
}

/// Structural identification of a finite or finitely presented group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupDescriptor {
    pub order: GroupOrder,
    pub is_abelian: bool,
    /// Present iff the group is abelian and finite.
    pub abelian_invariants: Option<Vec<u64>>,
    pub exponent: Option<u64>,
    pub center_size: Option<u64>,
    pub name: Option<String>,
    pub presentation: Option<Presentation>,
    pub flag: Stability,
}

impl GroupDescriptor {
    pub fn finite_order(&self) -> Option<u64> {
        match self.order {
            GroupOrder::Finite(n) => Some(n),
            GroupOrder::Infinite { .. } => None,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.finite_order() == Some(1)
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.name, self.order) {
            (Some(name), _) => write!(f, "{name}")?,
            (None, GroupOrder::Finite(n)) => write!(f, "group of order {n}")?,
            (None, GroupOrder::Infinite { .. }) => write!(f, "infinite group")?,
        }
        if let Some(p) = &self.presentation {
            write!(f, " {p}")?;
        }
        write!(f, " [{}]", self.flag)
    }
}

impl Serialize for GroupDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(None)?;
        match self.order {
            GroupOrder::Finite(n) => map.serialize_entry("order", &n)?,
            GroupOrder::Infinite { .. } => map.serialize_entry("order", "infinite")?,
        }
        map.serialize_entry("abelian", &self.is_abelian)?;
        if let Some(inv) = &self.abelian_invariants {
            map.serialize_entry("invariants", inv)?;
        } else {
            if let Some(name) = &self.name {
                map.serialize_entry("name", name)?;
            }
            if let Some(e) = self.exponent {
                map.serialize_entry("exponent", &e)?;
            }
            if let Some(c) = self.center_size {
                map.serialize_entry("center_size", &c)?;
            }
            if let Some(p) = &self.presentation {
                map.serialize_entry("presentation", p)?;
            }
        }
        map.serialize_entry("flag", &self.flag)?;
        map.end()
    }
}

/// Identifies a finite group table: order and abelian flag always;
/// invariant factors when abelian; exponent and center size otherwise.
pub fn identify_group(table: &GroupTable) -> Result<GroupDescriptor> {
    identify_group_among(table, &[])
}

/// As [`identify_group`], naming the group after the first isomorphic
/// candidate table.
pub fn identify_group_among(table: &GroupTable, candidates: &[(&str, &GroupTable)]) -> Result<GroupDescriptor> {
    table.verify().map_err(FusionError::NotAGroup)?;
    let order = table.order() as u64;
    let is_abelian = table.is_abelian();
    let matched = candidates.iter().find(|(_, c)| are_isomorphic(table, c)).map(|(name, _)| name.to_string());
    if is_abelian {
        let inv = abelian_invariants(table);
        Ok(GroupDescriptor {
            order: GroupOrder::Finite(order),
            is_abelian,
            name: Some(matched.unwrap_or_else(|| abelian_name(&inv))),
            abelian_invariants: Some(inv),
            exponent: Some(table.exponent()),
            center_size: Some(order),
            presentation: None,
            flag: Stability::Exact,
        })
    } else {
        Ok(GroupDescriptor {
            order: GroupOrder::Finite(order),
            is_abelian,
            abelian_invariants: None,
            exponent: Some(table.exponent()),
            center_size: Some(table.center_size() as u64),
            name: matched,
            presentation: None,
            flag: Stability::Exact,
        })
    }
}

/// Order statistics used by tests and reports: element order ↦ count.
pub fn order_profile(table: &GroupTable) -> BTreeMap<usize, usize> {
    let mut profile = BTreeMap::new();
    for a in 0..table.order() {
        *profile.entry(table.element_order(a)).or_default() += 1;
    }
    profile
}
