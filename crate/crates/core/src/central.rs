//! Σ-cosets, central subobjects, the center subobject and the chain group.
//!
//! The chain relation `~₁` is computed as the union-find fixed point of
//! "all constituents of `a × b` are equivalent" over explored pairs. On
//! finite rings [`chain_oracle`] recomputes it from bounded words.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{FusionError, Result};
use crate::group::{are_isomorphic, identify_group, GroupDescriptor, GroupOrder, GroupTable, Presentation, Stability};
use crate::ring::{generated_subobject, FusionRing, Subobject, Truncation};
use crate::unionfind::UnionFind;

/// A partition of the indexed elements of a truncation (frontier included).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetPartition {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
    identity: usize,
}

impl CosetPartition {
    fn from_union_find(mut uf: UnionFind, unit: usize) -> Self {
        let blocks = uf.components();
        let mut block_of = vec![0; uf.len()];
        for (b, members) in blocks.iter().enumerate() {
            for &x in members {
                block_of[x] = b;
            }
        }
        let identity = block_of[unit];
        CosetPartition { blocks, block_of, identity }
    }

    /// Blocks ordered by smallest member.
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.block_of[i]
    }

    /// The block of the unit.
    pub fn identity_block(&self) -> usize {
        self.identity
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn has_explored(&self, trunc: &Truncation, b: usize) -> bool {
        self.blocks[b].first().is_some_and(|&x| trunc.is_explored(x))
    }

    /// Blocks cut down to the explored basis, empty ones dropped.
    pub fn explored_blocks(&self, trunc: &Truncation) -> Vec<Vec<usize>> {
        self.blocks
            .iter()
            .map(|b| b.iter().copied().filter(|&x| trunc.is_explored(x)).collect::<Vec<_>>())
            .filter(|b| !b.is_empty())
            .collect()
    }

    pub fn labelled(&self, trunc: &Truncation) -> Vec<Vec<String>> {
        self.explored_blocks(trunc).iter().map(|b| trunc.labels_of(b)).collect()
    }

    /// Whether `self` is coarser than or equal to `finer` on the explored basis.
    pub fn coarsens(&self, finer: &CosetPartition, trunc: &Truncation) -> bool {
        (0..trunc.explored()).all(|a| {
            (0..trunc.explored())
                .all(|b| finer.block_of(a) != finer.block_of(b) || self.block_of(a) == self.block_of(b))
        })
    }

    /// Members naming a block: the explored ones, or all if none is explored.
    pub fn block_names(&self, trunc: &Truncation, b: usize) -> Vec<String> {
        let inner: Vec<usize> = self.blocks[b].iter().copied().filter(|&x| trunc.is_explored(x)).collect();
        if inner.is_empty() {
            trunc.labels_of(&self.blocks[b])
        } else {
            trunc.labels_of(&inner)
        }
    }
}

/// Union-find closure of "constituents of one product are equivalent".
pub fn merge_closure(trunc: &Truncation) -> CosetPartition {
    let mut uf = UnionFind::new(trunc.len());
    for a in 0..trunc.explored() {
        for b in 0..trunc.explored() {
            uf.union_all(trunc.support(a, b));
        }
    }
    CosetPartition::from_union_find(uf, trunc.unit())
}

/// Brute-force `~₁` on a finite ring: `x ~ y` whenever both occur in the
/// support of a single word `z₁ × … × z_n` with `n ≤ max_len`, followed by
/// transitive closure.
pub fn chain_oracle(trunc: &Truncation, max_len: usize) -> Result<CosetPartition> {
    if !trunc.is_complete() {
        return Err(FusionError::MalformedInput("the chain oracle needs a finite ring".into()));
    }
    if max_len == 0 {
        return Err(FusionError::MalformedInput("max_len must be at least 1".into()));
    }
    let n = trunc.explored();
    let mut uf = UnionFind::new(n);
    // a word's support depends only on the support of its prefix
    let mut level: BTreeSet<Vec<usize>> = (0..n).map(|z| vec![z]).collect();
    let mut seen: HashSet<Vec<usize>> = level.iter().cloned().collect();
    for _ in 1..max_len {
        let mut next = BTreeSet::new();
        for support in &level {
            for z in 0..n {
                let s: BTreeSet<usize> = support.iter().flat_map(|&x| trunc.support(x, z)).collect();
                let s: Vec<usize> = s.into_iter().collect();
                if seen.insert(s.clone()) {
                    next.insert(s);
                }
            }
        }
        level = next;
    }
    for support in &seen {
        uf.union_all(support.iter().copied());
    }
    Ok(CosetPartition::from_union_find(uf, trunc.unit()))
}

/// `E_z`: the chain class of the unit, as a subobject.
pub fn trivial_class(trunc: &Truncation) -> Result<Subobject> {
    let p = merge_closure(trunc);
    let ez = Subobject::from_members(p.blocks()[p.identity_block()].iter().copied());
    ez.check(trunc)
        .map_err(|e| FusionError::InternalInconsistency(format!("the unit's chain class is not a subobject: {e}")))?;
    Ok(ez)
}

/// Σ-cosets: `a ~ b` iff `a × b̄` meets Σ, closed transitively.
///
/// Frontier elements join the coset of `b` when they occur in `s × b` for
/// some explored `s ∈ Σ`, which is the same relation read through
/// Frobenius reciprocity.
pub fn sigma_cosets(trunc: &Truncation, sigma: &Subobject) -> Result<CosetPartition> {
    sigma.check(trunc)?;
    let n = trunc.explored();
    let related = |a: usize, b: usize| trunc.support(a, trunc.dual(b)).any(|c| sigma.contains(c));
    let inner: Vec<usize> = sigma.explored_members(trunc).collect();
    let mut uf = UnionFind::new(trunc.len());
    uf.union_all(sigma.members().iter().copied());
    for a in 0..n {
        for b in 0..n {
            if related(a, b) {
                uf.union(a, b);
            }
        }
        for &s in &inner {
            for c in trunc.support(s, a) {
                uf.union(a, c);
            }
        }
    }
    let p = CosetPartition::from_union_find(uf, trunc.unit());

    if trunc.is_complete() {
        let added = p
            .blocks()
            .iter()
            .flat_map(|b| b.iter().flat_map(move |&x| b.iter().map(move |&y| (x, y))))
            .find(|&(x, y)| !related(x, y));
        if let Some((x, y)) = added {
            log::warn!(
                "Σ-coset relation was not transitive: {} and {} were joined by closure",
                trunc.label(x),
                trunc.label(y)
            );
        }
    }

    let unit_block: BTreeSet<usize> =
        p.blocks()[p.identity_block()].iter().copied().filter(|&x| trunc.is_explored(x)).collect();
    let expected: BTreeSet<usize> = inner.into_iter().collect();
    if unit_block != expected {
        return Err(FusionError::InternalInconsistency(format!(
            "the unit's Σ-coset {:?} differs from Σ {:?}",
            trunc.labels_of(&unit_block),
            trunc.labels_of(&expected)
        )));
    }
    Ok(p)
}

/// The Σ-cosets with their induced multiplication.
///
/// A coset is known when it has an explored member. Products are recorded
/// between known cosets and ignore constituents lying in unknown ones, so
/// the table is partial on truncated rings.
#[derive(Clone, Debug)]
pub struct CosetGroup {
    partition: CosetPartition,
    known: Vec<usize>,
    table: Vec<Vec<Option<usize>>>,
    inverse: Vec<Option<usize>>,
}

impl CosetGroup {
    pub fn partition(&self) -> &CosetPartition {
        &self.partition
    }

    pub fn identity(&self) -> usize {
        self.partition.identity_block()
    }

    pub fn len(&self) -> usize {
        self.partition.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partition.is_empty()
    }

    pub fn mul(&self, x: usize, y: usize) -> Option<usize> {
        self.table[x][y]
    }

    pub fn inverse(&self, x: usize) -> Option<usize> {
        self.inverse[x]
    }

    /// Blocks with an explored member, in block order.
    pub fn known(&self) -> &[usize] {
        &self.known
    }

    /// Every product of known blocks is a known block.
    pub fn is_complete(&self) -> bool {
        self.known.iter().all(|&x| self.known.iter().all(|&y| self.table[x][y].is_some()))
    }

    /// `[x]` for the first explored member `x` of the block.
    pub fn block_label(&self, trunc: &Truncation, b: usize) -> String {
        format!("[{}]", self.partition.block_names(trunc, b)[0])
    }

    /// The finite group table, when complete.
    pub fn to_group_table(&self, trunc: &Truncation) -> Result<Option<GroupTable>> {
        if !self.is_complete() {
            return Ok(None);
        }
        let mut slot = vec![usize::MAX; self.len()];
        for (i, &b) in self.known.iter().enumerate() {
            slot[b] = i;
        }
        let labels = self.known.iter().map(|&b| self.block_label(trunc, b)).collect();
        let mult = self
            .known
            .iter()
            .map(|&x| self.known.iter().map(|&y| slot[self.table[x][y].expect("complete")]).collect())
            .collect();
        GroupTable::new(labels, mult, slot[self.identity()])
            .map(Some)
            .map_err(|w| FusionError::InternalInconsistency(format!("coset table is not a group: {w}")))
    }
}

/// A pair of cosets whose product is not a single coset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonCentralWitness {
    pub left: Vec<String>,
    pub right: Vec<String>,
    /// The representatives whose product exposed the failure.
    pub representatives: (String, String),
    /// The cosets met by products of the two cosets.
    pub spans: Vec<Vec<String>>,
}

#[derive(Clone, Debug)]
pub enum Centrality {
    Central(CosetGroup),
    NotCentral(NonCentralWitness),
}

impl Centrality {
    pub fn is_central(&self) -> bool {
        matches!(self, Centrality::Central(_))
    }
}

/// Σ is central iff for all representatives `a`, `b` of any two Σ-cosets,
/// `a × b` lies in a single coset that depends only on the two cosets.
pub fn is_central_subobject(trunc: &Truncation, sigma: &Subobject) -> Result<Centrality> {
    let partition = sigma_cosets(trunc, sigma)?;
    let nb = partition.len();
    let known_block: Vec<bool> = (0..nb).map(|b| partition.has_explored(trunc, b)).collect();
    let mut table: Vec<Vec<Option<usize>>> = vec![vec![None; nb]; nb];
    let witness_from = |a: usize, b: usize, spans: BTreeSet<usize>, partition: &CosetPartition| {
        Centrality::NotCentral(NonCentralWitness {
            left: partition.block_names(trunc, partition.block_of(a)),
            right: partition.block_names(trunc, partition.block_of(b)),
            representatives: (trunc.label(a).to_string(), trunc.label(b).to_string()),
            spans: spans.into_iter().map(|s| partition.block_names(trunc, s)).collect(),
        })
    };
    for a in 0..trunc.explored() {
        for b in 0..trunc.explored() {
            let hit: BTreeSet<usize> =
                trunc.support(a, b).map(|c| partition.block_of(c)).filter(|&c| known_block[c]).collect();
            let (x, y) = (partition.block_of(a), partition.block_of(b));
            if hit.len() > 1 {
                return Ok(witness_from(a, b, hit, &partition));
            }
            let Some(&c) = hit.first() else { continue };
            match table[x][y] {
                Some(prev) if prev != c => return Ok(witness_from(a, b, BTreeSet::from([prev, c]), &partition)),
                _ => table[x][y] = Some(c),
            }
        }
    }
    let mut inverse = vec![None; nb];
    for a in 0..trunc.explored() {
        inverse[partition.block_of(a)] = Some(partition.block_of(trunc.dual(a)));
    }
    let known = (0..nb).filter(|&b| known_block[b]).collect();
    Ok(Centrality::Central(CosetGroup { partition, known, table, inverse }))
}

/// Every subobject of a finite ring, from closures of singletons and pairs
/// joined until nothing new appears. Sorted by size, then members.
pub fn all_subobjects(trunc: &Truncation, budget: u64) -> Result<Vec<Subobject>> {
    if !trunc.is_complete() {
        return Err(FusionError::MalformedInput("subobject enumeration needs a finite ring".into()));
    }
    let n = trunc.explored();
    let mut spent: u64 = 0;
    let mut charge = |k: u64| -> Result<()> {
        spent += k;
        if spent > budget {
            Err(FusionError::SearchBudgetExceeded(budget))
        } else {
            Ok(())
        }
    };
    let mut found: BTreeSet<Subobject> = BTreeSet::new();
    found.insert(generated_subobject(trunc, &[])?);
    for a in 0..n {
        for b in a..n {
            charge(1)?;
            found.insert(generated_subobject(trunc, &[a, b])?);
        }
    }
    let mut frontier: Vec<Subobject> = found.iter().cloned().collect();
    while !frontier.is_empty() {
        let base: Vec<Subobject> = found.iter().cloned().collect();
        let mut next = Vec::new();
        for s in &frontier {
            for t in &base {
                charge(1)?;
                if s.is_subset(t) || t.is_subset(s) {
                    continue;
                }
                let seed: Vec<usize> = s.members().union(t.members()).copied().collect();
                let joined = generated_subobject(trunc, &seed)?;
                if found.insert(joined.clone()) {
                    next.push(joined);
                }
            }
        }
        frontier = next;
    }
    let mut all: Vec<Subobject> = found.into_iter().collect();
    all.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    Ok(all)
}

/// All central subobjects of a finite ring, sorted by size.
pub fn enumerate_central_subobjects(trunc: &Truncation, budget: u64) -> Result<Vec<Subobject>> {
    let all = all_subobjects(trunc, budget)?;
    let verdicts: Vec<bool> =
        all.par_iter().map(|s| is_central_subobject(trunc, s).map(|c| c.is_central())).collect::<Result<_>>()?;
    Ok(all.into_iter().zip(verdicts).filter(|(_, c)| *c).map(|(s, _)| s).collect())
}

/// The center subobject `Σ̃ = E_z`. On finite rings it is cross-checked
/// against the intersection of all central subobjects.
pub fn center_subobject(trunc: &Truncation, budget: u64) -> Result<Subobject> {
    let ez = trivial_class(trunc)?;
    if trunc.is_complete() {
        let central = enumerate_central_subobjects(trunc, budget)?;
        let meet = central
            .iter()
            .fold(None::<Subobject>, |acc, s| Some(acc.map_or_else(|| s.clone(), |m| m.intersection(s))))
            .ok_or_else(|| FusionError::InternalInconsistency("no central subobject at all".into()))?;
        if meet != ez {
            return Err(FusionError::InternalInconsistency(format!(
                "intersection of central subobjects {:?} differs from the unit's chain class {:?}",
                meet.labels(trunc),
                ez.labels(trunc)
            )));
        }
    }
    Ok(ez)
}

/// The chain group `Ĝ/~₁ ≅ Ĝ/E_z`.
#[derive(Clone, Debug)]
pub struct ChainGroup {
    pub descriptor: GroupDescriptor,
    /// Multiplication table over chain classes, when finite.
    pub table: Option<GroupTable>,
    /// Explored chain classes at the requested depth.
    pub classes: Vec<Vec<String>>,
}

enum Shape {
    Finite(GroupTable),
    Presented { presentation: Presentation, abelian: bool, cyclic_order: Option<u64> },
}

fn shape_at(trunc: &Truncation, budget: u64) -> Result<(CosetGroup, Shape)> {
    let ez = trivial_class(trunc)?;
    let group = match is_central_subobject(trunc, &ez)? {
        Centrality::Central(g) => g,
        Centrality::NotCentral(w) => {
            return Err(FusionError::InternalInconsistency(format!(
                "the unit's chain class is not central: {:?} x {:?} spans {:?}",
                w.left, w.right, w.spans
            )))
        }
    };
    if let Some(table) = group.to_group_table(trunc)? {
        return Ok((group, Shape::Finite(table)));
    }
    let shape = present(trunc, &group, trunc.depth().unwrap_or(1), budget)?;
    Ok((group, shape))
}

/// Letters are `2·i` for generator `i` and `2·i + 1` for its inverse.
fn present(trunc: &Truncation, group: &CosetGroup, max_len: usize, budget: u64) -> Result<Shape> {
    let id = group.identity();
    let mut gens: Vec<usize> = Vec::new();
    let mut names: Vec<String> = Vec::new();
    for g in trunc.ring().generators() {
        let block = group.partition().block_of(trunc.resolve(&g)?);
        if block == id || gens.contains(&block) || gens.iter().any(|&h| group.inverse(h) == Some(block)) {
            continue;
        }
        gens.push(block);
        names.push(group.block_label(trunc, block));
    }
    let letter_block = |l: usize| -> Option<usize> {
        let g = gens[l / 2];
        if l.is_multiple_of(2) {
            Some(g)
        } else {
            group.inverse(g)
        }
    };
    let eval =
        |word: &[usize]| -> Option<usize> { word.iter().try_fold(id, |acc, &l| group.mul(acc, letter_block(l)?)) };

    if gens.len() == 1 {
        let g = gens[0];
        let mut cur = Some(g);
        let mut n = 1u64;
        while let Some(c) = cur {
            if c == id {
                break;
            }
            cur = group.mul(c, g);
            n += 1;
        }
        let order = cur.map(|_| n);
        let relations = order.map(|n| vec![format!("{}^{n}", names[0])]).unwrap_or_default();
        return Ok(Shape::Presented {
            presentation: Presentation { generators: names, relations },
            abelian: true,
            cyclic_order: order,
        });
    }

    let involutive: Vec<bool> = gens.iter().map(|&g| group.mul(g, g) == Some(id)).collect();
    let letters: Vec<usize> = (0..2 * gens.len()).filter(|l| l % 2 == 0 || !involutive[l / 2]).collect();
    let inv = |l: usize| if involutive[l / 2] { l } else { l ^ 1 };
    let canonical = |w: &[usize]| -> Vec<usize> {
        let mut best = w.to_vec();
        let reversed: Vec<usize> = w.iter().rev().map(|&l| inv(l)).collect();
        for cand in [w.to_vec(), reversed] {
            for r in 0..cand.len() {
                let mut rot = cand[r..].to_vec();
                rot.extend_from_slice(&cand[..r]);
                if rot < best {
                    best = rot;
                }
            }
        }
        best
    };

    let mut relators: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut spent = 0u64;
    let mut stack: Vec<Vec<usize>> = letters.iter().map(|&l| vec![l]).collect();
    stack.reverse();
    while let Some(word) = stack.pop() {
        spent += 1;
        if spent > budget {
            return Err(FusionError::SearchBudgetExceeded(budget));
        }
        let Some(value) = eval(&word) else { continue };
        if value == id {
            let cyclic = word.len() == 1 || involutive[word[0] / 2] || inv(word[0]) != *word.last().expect("nonempty");
            let minimal =
                (1..word.len()).all(|len| (0..=word.len() - len).all(|s| eval(&word[s..s + len]) != Some(id)));
            if cyclic && minimal {
                relators.insert(canonical(&word));
            }
            continue;
        }
        if word.len() == max_len {
            continue;
        }
        let last = *word.last().expect("nonempty");
        for &l in letters.iter().rev() {
            if l == inv(last) && !involutive[l / 2] {
                continue;
            }
            let mut w = word.clone();
            w.push(l);
            stack.push(w);
        }
    }
    let format_word = |w: &[usize]| -> String {
        let mut out = String::new();
        let mut i = 0;
        while i < w.len() {
            let mut j = i;
            while j < w.len() && w[j] == w[i] {
                j += 1;
            }
            let sign = if w[i] % 2 == 1 { -1 } else { 1 };
            let exp = sign * (j - i) as i64;
            out.push_str(&names[w[i] / 2]);
            if exp != 1 {
                let _ = write!(out, "^{exp}");
            }
            i = j;
        }
        out
    };
    let mut relations: Vec<(usize, String)> = relators.iter().map(|w| (w.len(), format_word(w))).collect();
    relations.sort();
    let abelian = (0..gens.len()).all(|i| {
        (i + 1..gens.len()).all(|j| {
            let (x, y) = (group.mul(gens[i], gens[j]), group.mul(gens[j], gens[i]));
            x.is_some() && x == y
        })
    });
    Ok(Shape::Presented {
        presentation: Presentation { generators: names, relations: relations.into_iter().map(|(_, r)| r).collect() },
        abelian,
        cyclic_order: None,
    })
}

fn same_shape(a: &Shape, b: &Shape) -> bool {
    match (a, b) {
        (Shape::Finite(x), Shape::Finite(y)) => are_isomorphic(x, y),
        (
            Shape::Presented { presentation: p, abelian: x, cyclic_order: m },
            Shape::Presented { presentation: q, abelian: y, cyclic_order: n },
        ) => p == q && x == y && m == n,
        _ => false,
    }
}

fn describe(shape: &Shape, flag: Stability, depth: usize) -> Result<GroupDescriptor> {
    match shape {
        Shape::Finite(table) => {
            let mut d = identify_group(table)?;
            d.flag = flag;
            Ok(d)
        }
        Shape::Presented { presentation, abelian, cyclic_order: Some(n) } => Ok(GroupDescriptor {
            order: GroupOrder::Finite(*n),
            is_abelian: *abelian,
            abelian_invariants: Some(if *n == 1 { Vec::new() } else { vec![*n] }),
            exponent: Some(*n),
            center_size: Some(*n),
            name: Some(format!("Z/{n}Z")),
            presentation: Some(presentation.clone()),
            flag,
        }),
        Shape::Presented { presentation, abelian, cyclic_order: None } => Ok(GroupDescriptor {
            order: GroupOrder::Infinite { stable_depth: depth },
            is_abelian: *abelian,
            abelian_invariants: None,
            exponent: None,
            center_size: None,
            name: (presentation.generators.len() == 1 && presentation.relations.is_empty()).then(|| "Z".to_string()),
            presentation: Some(presentation.clone()),
            flag,
        }),
    }
}

/// Computes the chain group. Finite rings give an exact answer; generated
/// rings are computed at `depth` and `depth + 1` and flagged stable when
/// the two agree.
pub fn chain_group(ring: &FusionRing, depth: usize, budget: u64) -> Result<ChainGroup> {
    let trunc = ring.truncate(depth)?;
    let (group, shape) = shape_at(&trunc, budget)?;
    let flag = if trunc.is_complete() {
        Stability::Exact
    } else {
        let (_, deeper) = shape_at(&ring.truncate(depth + 1)?, budget)?;
        if same_shape(&shape, &deeper) {
            Stability::StableAtDepth(depth)
        } else {
            Stability::UnstableAtDepth(depth)
        }
    };
    let descriptor = describe(&shape, flag, depth)?;
    let table = match shape {
        Shape::Finite(t) => Some(t),
        Shape::Presented { .. } => None,
    };
    Ok(ChainGroup { descriptor, table, classes: group.partition().labelled(&trunc) })
}

/// The block of `label` in the chain group of `trunc`, plus the coset group.
pub fn chain_classes(trunc: &Truncation) -> Result<CosetGroup> {
    let ez = trivial_class(trunc)?;
    match is_central_subobject(trunc, &ez)? {
        Centrality::Central(g) => Ok(g),
        Centrality::NotCentral(w) => Err(FusionError::InternalInconsistency(format!(
            "the unit's chain class is not central: {:?} x {:?}",
            w.left, w.right
        ))),
    }
}

/// DOT graph with an edge between any two constituents of one product.
pub fn merge_graph_dot(trunc: &Truncation) -> String {
    let partition = merge_closure(trunc);
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for a in 0..trunc.explored() {
        for b in 0..trunc.explored() {
            let s: Vec<usize> = trunc.support(a, b).collect();
            for (i, &x) in s.iter().enumerate() {
                for &y in &s[i + 1..] {
                    edges.insert((x.min(y), x.max(y)));
                }
            }
        }
    }
    let mut out = String::from("graph merge {\n");
    for i in 0..trunc.len() {
        let style = if trunc.is_explored(i) { "" } else { ", style=dashed" };
        let _ = writeln!(out, "  {:?} [block={}{style}];", trunc.label(i), partition.block_of(i));
    }
    for (x, y) in edges {
        let _ = writeln!(out, "  {:?} -- {:?};", trunc.label(x), trunc.label(y));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{group_ring, rep_s3, so3_ring, su2_ring, GroupPresentationInput};

    const BUDGET: u64 = 1_000_000;

    fn labelled(p: &CosetPartition, t: &Truncation) -> Vec<Vec<String>> {
        p.labelled(t)
    }

    #[test]
    fn rep_s3_merges_everything() {
        let t = rep_s3().truncate(1).unwrap();
        assert_eq!(labelled(&merge_closure(&t), &t), [["1", "sgn", "rho"]]);
        assert_eq!(chain_oracle(&t, 2).unwrap(), merge_closure(&t));
        assert_eq!(chain_oracle(&t, 1).unwrap().len(), 3);
    }

    #[test]
    fn group_ring_has_singletons() {
        let t = group_ring(&GroupPresentationInput::symmetric(3)).unwrap().truncate(1).unwrap();
        assert_eq!(merge_closure(&t).len(), 6);
        assert_eq!(trivial_class(&t).unwrap().labels(&t), ["e"]);
    }

    #[test]
    fn su2_parity() {
        let t = su2_ring().truncate(6).unwrap();
        assert_eq!(labelled(&merge_closure(&t), &t), [vec!["V0", "V2", "V4", "V6"], vec!["V1", "V3", "V5"]]);
        let even = Subobject::from_labels(&t, &["V0", "V2", "V4", "V6"]).unwrap();
        let Centrality::Central(g) = is_central_subobject(&t, &even).unwrap() else { panic!("not central") };
        assert!(g.is_complete());
        assert_eq!(g.to_group_table(&t).unwrap().unwrap().order(), 2);
    }

    #[test]
    fn rep_s3_sigma_cosets() {
        let t = rep_s3().truncate(1).unwrap();
        let sigma = Subobject::from_labels(&t, &["1", "sgn"]).unwrap();
        let p = sigma_cosets(&t, &sigma).unwrap();
        assert_eq!(labelled(&p, &t), [vec!["1", "sgn"], vec!["rho"]]);
        let Centrality::NotCentral(w) = is_central_subobject(&t, &sigma).unwrap() else { panic!("central") };
        assert_eq!(w.left, ["rho"]);
        assert_eq!(w.right, ["rho"]);
        assert_eq!(w.spans, [vec!["1", "sgn"], vec!["rho"]]);
        let all = Subobject::from_labels(&t, &["1", "sgn", "rho"]).unwrap();
        assert!(is_central_subobject(&t, &all).unwrap().is_central());
        let bad = Subobject::from_labels(&t, &["1", "rho"]).unwrap();
        assert!(matches!(sigma_cosets(&t, &bad), Err(FusionError::NotASubobject(_))));
    }

    #[test]
    fn central_enumeration() {
        let t = rep_s3().truncate(1).unwrap();
        let central = enumerate_central_subobjects(&t, BUDGET).unwrap();
        assert_eq!(central.len(), 1);
        assert_eq!(central[0].len(), 3);
        let z4 = group_ring(&GroupPresentationInput::cyclic(4)).unwrap().truncate(1).unwrap();
        let labels: Vec<Vec<String>> =
            enumerate_central_subobjects(&z4, BUDGET).unwrap().iter().map(|s| s.labels(&z4)).collect();
        assert_eq!(labels, [vec!["e"], vec!["e", "g^2"], vec!["e", "g", "g^2", "g^3"]]);
        assert!(matches!(all_subobjects(&z4, 3), Err(FusionError::SearchBudgetExceeded(3))));
    }

    #[test]
    fn centers() {
        let t = so3_ring().truncate(6).unwrap();
        assert_eq!(center_subobject(&t, BUDGET).unwrap().explored_members(&t).count(), 7);
        let t = rep_s3().truncate(1).unwrap();
        assert_eq!(center_subobject(&t, BUDGET).unwrap().len(), 3);
    }

    #[test]
    fn chain_groups() {
        let su2 = chain_group(&su2_ring(), 6, BUDGET).unwrap();
        assert_eq!(su2.descriptor.abelian_invariants, Some(vec![2]));
        assert_eq!(su2.descriptor.flag, Stability::StableAtDepth(6));
        let z3 = chain_group(&group_ring(&GroupPresentationInput::cyclic(3)).unwrap(), 6, BUDGET).unwrap();
        assert_eq!(z3.descriptor.finite_order(), Some(3));
        assert_eq!(z3.descriptor.flag, Stability::Exact);
        for depth in [6, 7] {
            assert_eq!(chain_group(&su2_ring(), depth, BUDGET).unwrap().descriptor.finite_order(), Some(2));
        }
    }

    #[test]
    fn infinite_chain_groups() {
        use crate::catalog::{au_word_ring, circle_dual_ring, free_product};
        for ring in [au_word_ring(2), circle_dual_ring()] {
            let g = chain_group(&ring, 4, BUDGET).unwrap();
            assert_eq!(g.descriptor.name.as_deref(), Some("Z"), "{}", ring.name());
            assert_eq!(g.descriptor.flag, Stability::StableAtDepth(4));
        }
        let z2 = group_ring(&GroupPresentationInput::cyclic(2)).unwrap();
        let g = chain_group(&free_product(&su2_ring(), &z2), 5, BUDGET).unwrap();
        let p = g.descriptor.presentation.unwrap();
        assert_eq!(p.generators, ["[(1:V1)]", "[(2:g)]"]);
        assert_eq!(p.relations, ["[(1:V1)]^2", "[(2:g)]^2"]);
        assert!(!g.descriptor.is_abelian);
    }

    #[test]
    fn dot_output() {
        let t = rep_s3().truncate(1).unwrap();
        let dot = merge_graph_dot(&t);
        assert!(dot.starts_with("graph merge {"));
        assert!(dot.contains("\"1\" -- \"rho\";"));
    }
}
