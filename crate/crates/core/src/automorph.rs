//! Fusion-ring automorphisms and their action on the chain group.
//!
//! These are automorphisms of the fusion data only. Automorphisms of the
//! quantum group that act trivially on irreducible classes are invisible
//! here, so the result bounds the outer action from above.

use std::collections::HashMap;

use serde::{Serialize, Serializer};

use crate::central::chain_classes;
use crate::error::{FusionError, Result};
use crate::group::Stability;
use crate::ring::{FusionRing, Mult, Truncation};

/// A bijection of explored basis indices preserving unit, duality,
/// dimension and every explored fusion coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingAutomorphism {
    perm: Vec<usize>,
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl RingAutomorphism {
    fn new(perm: Vec<usize>, trunc: &Truncation) -> Self {
        let labels: Vec<String> = trunc.labels()[..perm.len()].to_vec();
        let index = labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        RingAutomorphism { perm, labels, index }
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// Image of `label`, if it lies in the domain.
    pub fn apply(&self, label: &str) -> Option<&str> {
        self.index.get(label).map(|&i| self.labels[self.perm[i]].as_str())
    }

    /// `(x, α(x))` in basis order.
    pub fn mapping(&self) -> Vec<(String, String)> {
        self.perm.iter().enumerate().map(|(i, &p)| (self.labels[i].clone(), self.labels[p].clone())).collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &RingAutomorphism) -> RingAutomorphism {
        let perm = other.perm.iter().map(|&p| self.perm[p]).collect();
        RingAutomorphism { perm, labels: self.labels.clone(), index: self.index.clone() }
    }

    pub fn inverse(&self) -> RingAutomorphism {
        let mut perm = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            perm[p] = i;
        }
        RingAutomorphism { perm, labels: self.labels.clone(), index: self.index.clone() }
    }
}

impl Serialize for RingAutomorphism {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.mapping().serialize(s)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Automorphisms {
    pub ring: String,
    pub count: usize,
    /// Generated rings: automorphisms are determined by a permutation of
    /// the generators and verified on the explored ball.
    pub generator_level: bool,
    pub flag: Stability,
    pub automorphisms: Vec<RingAutomorphism>,
}

/// All fusion automorphisms of an explicit ring, or the generator-level
/// symmetries of a generated ring verified to `depth`.
pub fn automorphisms(ring: &FusionRing, depth: usize, budget: u64) -> Result<Automorphisms> {
    let trunc = ring.truncate(depth)?;
    if trunc.is_complete() {
        let autos = explicit_search(&trunc, budget)?;
        return Ok(Automorphisms {
            ring: ring.name().to_string(),
            count: autos.len(),
            generator_level: false,
            flag: Stability::Exact,
            automorphisms: autos,
        });
    }
    let autos = generated_search(&trunc, budget)?;
    let deeper = generated_search(&ring.truncate(depth + 1)?, budget)?;
    let flag = if generator_images(&autos, &trunc) == generator_images(&deeper, &trunc) {
        Stability::StableAtDepth(depth)
    } else {
        Stability::UnstableAtDepth(depth)
    };
    Ok(Automorphisms {
        ring: ring.name().to_string(),
        count: autos.len(),
        generator_level: true,
        flag,
        automorphisms: autos,
    })
}

fn generator_images(autos: &[RingAutomorphism], trunc: &Truncation) -> Vec<Vec<String>> {
    let gens = trunc.ring().generators();
    autos.iter().map(|a| gens.iter().map(|g| a.apply(g).unwrap_or_default().to_string()).collect()).collect()
}

struct Coefficients {
    n: usize,
    table: Vec<Mult>,
}

impl Coefficients {
    fn new(trunc: &Truncation) -> Self {
        let n = trunc.explored();
        let mut table = vec![Mult::default(); n * n * n];
        for a in 0..n {
            for b in 0..n {
                for (c, m) in trunc.product(a, b) {
                    if *c < n {
                        table[(a * n + b) * n + c] = m.clone();
                    }
                }
            }
        }
        Coefficients { n, table }
    }

    fn get(&self, a: usize, b: usize, c: usize) -> &Mult {
        &self.table[(a * self.n + b) * self.n + c]
    }
}

struct Search<'a> {
    trunc: &'a Truncation,
    coeff: Coefficients,
    /// Pairs `(x, y)` whose coefficients are constrained.
    checked: Box<dyn Fn(usize, usize) -> bool + 'a>,
    perm: Vec<Option<usize>>,
    used: Vec<bool>,
    assigned: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl<'a> Search<'a> {
    fn new(trunc: &'a Truncation, budget: u64, checked: Box<dyn Fn(usize, usize) -> bool + 'a>) -> Self {
        let n = trunc.explored();
        Search {
            trunc,
            coeff: Coefficients::new(trunc),
            checked,
            perm: vec![None; n],
            used: vec![false; n],
            assigned: Vec::new(),
            nodes: 0,
            budget,
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(FusionError::SearchBudgetExceeded(self.budget));
        }
        Ok(())
    }

    /// Whether `a ↦ b` is consistent with everything assigned so far.
    fn consistent(&self, a: usize, b: usize) -> bool {
        let t = self.trunc;
        if self.used[b] || t.dim(a) != t.dim(b) || (a == t.unit()) != (b == t.unit()) {
            return false;
        }
        let da = t.dual(a);
        if da == a {
            if t.dual(b) != b {
                return false;
            }
        } else if let Some(p) = self.perm[da] {
            if p != t.dual(b) {
                return false;
            }
        }
        let image = |x: usize| if x == a { b } else { self.perm[x].expect("assigned") };
        let mut scope = self.assigned.clone();
        scope.push(a);
        for &x in &scope {
            for &y in &scope {
                if !(self.checked)(x, y) {
                    continue;
                }
                for &z in &scope {
                    if (x == a || y == a || z == a)
                        && self.coeff.get(x, y, z) != self.coeff.get(image(x), image(y), image(z))
                    {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn assign(&mut self, a: usize, b: usize) {
        self.perm[a] = Some(b);
        self.used[b] = true;
        self.assigned.push(a);
    }

    fn unassign(&mut self, a: usize) {
        let b = self.perm[a].take().expect("assigned");
        self.used[b] = false;
        self.assigned.pop();
    }

    fn finished(&self) -> Vec<usize> {
        self.perm.iter().map(|p| p.expect("complete")).collect()
    }
}

fn explicit_search(trunc: &Truncation, budget: u64) -> Result<Vec<RingAutomorphism>> {
    let n = trunc.explored();
    let mut search = Search::new(trunc, budget, Box::new(|_, _| true));
    let key = |a: usize| (a != trunc.unit(), trunc.dim(a), trunc.dual(a) != a, search.coeff.get(a, a, a).clone(), a);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&a| key(a));
    let mut found = Vec::new();
    explicit_step(&mut search, &order, 0, &mut found)?;
    found.sort();
    Ok(found.into_iter().map(|p| RingAutomorphism::new(p, trunc)).collect())
}

fn explicit_step(search: &mut Search, order: &[usize], k: usize, found: &mut Vec<Vec<usize>>) -> Result<()> {
    search.tick()?;
    let Some(&a) = order.get(k) else {
        found.push(search.finished());
        return Ok(());
    };
    let aa = search.coeff.get(a, a, a).clone();
    for b in 0..search.trunc.explored() {
        if search.coeff.get(b, b, b) != &aa || !search.consistent(a, b) {
            continue;
        }
        search.assign(a, b);
        explicit_step(search, order, k + 1, found)?;
        search.unassign(a);
    }
    Ok(())
}

/// Breadth-first level of each explored element, and for each element
/// beyond the generators a pair `(x, g)` with `c ⊂ x × g` one level down.
fn levels(trunc: &Truncation, gens: &[usize]) -> (Vec<usize>, Vec<Option<(usize, usize)>>) {
    let n = trunc.explored();
    let mut level = vec![usize::MAX; n];
    let mut parent = vec![None; n];
    level[trunc.unit()] = 0;
    for x in 0..n {
        if level[x] == usize::MAX {
            continue;
        }
        for &g in gens {
            for &c in trunc.support(x, g).collect::<Vec<_>>().iter() {
                if c < n && level[c] == usize::MAX {
                    level[c] = level[x] + 1;
                    parent[c] = Some((x, g));
                }
            }
        }
    }
    (level, parent)
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

fn generated_search(trunc: &Truncation, budget: u64) -> Result<Vec<RingAutomorphism>> {
    let gens: Vec<usize> = trunc.ring().generators().iter().map(|g| trunc.resolve(g)).collect::<Result<_>>()?;
    let depth = trunc.depth().unwrap_or(0);
    let (level, parent) = levels(trunc, &gens);
    let level_ref = &level;
    let mut search = Search::new(trunc, budget, Box::new(move |x, y| level_ref[x] + level_ref[y] <= depth));
    // the breadth-first discovery order puts every parent before its child
    let mut order: Vec<usize> = (0..trunc.explored()).filter(|&c| parent[c].is_some()).collect();
    order.retain(|c| !gens.contains(c));
    order.sort_by_key(|&c| (level[c], c));

    let mut found = Vec::new();
    for images in permutations(&gens) {
        search.tick()?;
        let unit = trunc.unit();
        if !search.consistent(unit, unit) {
            continue;
        }
        search.assign(unit, unit);
        let mut placed = 1;
        for (&g, &h) in gens.iter().zip(&images) {
            if !search.consistent(g, h) {
                break;
            }
            search.assign(g, h);
            placed += 1;
        }
        if placed == gens.len() + 1 {
            extend(&mut search, &order, &parent, 0, &mut found)?;
        }
        for _ in 0..placed {
            let last = *search.assigned.last().expect("assigned");
            search.unassign(last);
        }
    }
    found.retain(|p| verify(trunc, &level, depth, p));
    found.sort();
    Ok(found.into_iter().map(|p| RingAutomorphism::new(p, trunc)).collect())
}

fn extend(
    search: &mut Search,
    order: &[usize],
    parent: &[Option<(usize, usize)>],
    k: usize,
    found: &mut Vec<Vec<usize>>,
) -> Result<()> {
    search.tick()?;
    let Some(&c) = order.get(k) else {
        found.push(search.finished());
        return Ok(());
    };
    let (x, g) = parent[c].expect("non-generator has a parent");
    let (px, pg) = (search.perm[x].expect("parent first"), search.perm[g].expect("generator"));
    let m = search.coeff.get(x, g, c).clone();
    let candidates: Vec<usize> = search
        .trunc
        .support(px, pg)
        .filter(|&d| d < search.trunc.explored() && search.coeff.get(px, pg, d) == &m)
        .collect();
    for d in candidates {
        if !search.consistent(c, d) {
            continue;
        }
        search.assign(c, d);
        extend(search, order, parent, k + 1, found)?;
        search.unassign(c);
    }
    Ok(())
}

/// Full products of pairs within the checked range map onto each other.
fn verify(trunc: &Truncation, level: &[usize], depth: usize, perm: &[usize]) -> bool {
    let n = perm.len();
    (0..n).all(|x| {
        (0..n).filter(|&y| level[x] + level[y] <= depth).all(|y| {
            let mut mapped: Vec<(usize, Mult)> = Vec::new();
            for (c, m) in trunc.product(x, y) {
                if *c >= n {
                    return false;
                }
                mapped.push((perm[*c], m.clone()));
            }
            mapped.sort();
            mapped.as_slice() == trunc.product(perm[x], perm[y])
        })
    })
}

/// The permutation an automorphism induces on known chain classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockAction {
    pub blocks: Vec<String>,
    /// Index into `blocks`, or `None` if no member of the block lies in
    /// the automorphism's domain.
    pub image: Vec<Option<usize>>,
    #[serde(skip)]
    inverse: Vec<Option<usize>>,
}

impl BlockAction {
    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, p)| p.is_none_or(|p| p == i))
    }

    /// Every block goes to its inverse.
    pub fn is_inversion(&self) -> bool {
        self.image.iter().zip(&self.inverse).all(|(p, q)| p.is_none() || p == q)
    }

    pub fn mapping(&self) -> Vec<(String, String)> {
        self.image
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.map(|p| (self.blocks[i].clone(), self.blocks[p].clone())))
            .collect()
    }
}

pub fn action_on_chain_group(ring: &FusionRing, auto: &RingAutomorphism, depth: usize) -> Result<BlockAction> {
    let trunc = ring.truncate(depth)?;
    let group = chain_classes(&trunc)?;
    let known = group.known();
    let mut slot = vec![None; group.len()];
    for (i, &b) in known.iter().enumerate() {
        slot[b] = Some(i);
    }
    let partition = group.partition();
    let mut image = vec![None; known.len()];
    for (i, &b) in known.iter().enumerate() {
        for &x in &partition.blocks()[b] {
            if !trunc.is_explored(x) {
                continue;
            }
            let Some(target) = auto.apply(trunc.label(x)).and_then(|l| trunc.index_of(l)) else {
                continue;
            };
            let Some(j) = slot[partition.block_of(target)] else {
                continue;
            };
            match image[i] {
                None => image[i] = Some(j),
                Some(k) if k == j => {}
                Some(_) => {
                    return Err(FusionError::InternalInconsistency(format!(
                        "automorphism splits the chain class of `{}`",
                        trunc.label(x)
                    )))
                }
            }
        }
    }
    let inverse = known.iter().map(|&b| group.inverse(b).and_then(|v| slot[v])).collect();
    Ok(BlockAction { blocks: known.iter().map(|&b| group.block_label(&trunc, b)).collect(), image, inverse })
}
