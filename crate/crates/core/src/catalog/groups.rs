use std::collections::HashMap;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{FusionError, Result};
use crate::group::{GroupAxiomWitness, GroupTable};
use crate::ring::{BasisElement, FusionRing, Mult};

/// A finite group given by its multiplication table, as read from a group
/// file: `table[i][j]` is the label of `elements[i] * elements[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPresentationInput {
    pub elements: Vec<String>,
    pub identity: String,
    pub table: Vec<Vec<String>>,
}

impl GroupPresentationInput {
    pub fn cyclic(n: usize) -> Self {
        let label = |k: usize| match k {
            0 => "e".to_string(),
            1 => "g".to_string(),
            k => format!("g^{k}"),
        };
        let elements: Vec<String> = (0..n).map(label).collect();
        let table = (0..n).map(|a| (0..n).map(|b| label((a + b) % n)).collect()).collect();
        GroupPresentationInput { elements, identity: "e".into(), table }
    }

    pub fn klein() -> Self {
        Self::from_fn(&["e", "a", "b", "ab"], "e", |x, y| x ^ y)
    }

    /// Symmetric group on `n` points; elements in lexicographic order of
    /// their image lists, labelled in cycle notation.
    pub fn symmetric(n: usize) -> Self {
        let mut perms: Vec<Vec<usize>> = vec![(0..n).collect()];
        for k in 0..n {
            perms = perms
                .into_iter()
                .flat_map(|p| {
                    (k..n).map(move |j| {
                        let mut q = p.clone();
                        q.swap(k, j);
                        q
                    })
                })
                .collect();
        }
        perms.sort();
        perms.dedup();
        let index: HashMap<Vec<usize>, usize> = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let labels: Vec<String> = perms.iter().map(|p| cycle_notation(p)).collect();
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| {
                        // (a*b)(i) = a(b(i))
                        let ab: Vec<usize> = b.iter().map(|&i| a[i]).collect();
                        labels[index[&ab]].clone()
                    })
                    .collect()
            })
            .collect();
        GroupPresentationInput { elements: labels.clone(), identity: labels[0].clone(), table }
    }

    fn from_fn(labels: &[&str], identity: &str, mul: impl Fn(usize, usize) -> usize) -> Self {
        let n = labels.len();
        GroupPresentationInput {
            elements: labels.iter().map(|s| s.to_string()).collect(),
            identity: identity.to_string(),
            table: (0..n).map(|a| (0..n).map(|b| labels[mul(a, b)].to_string()).collect()).collect(),
        }
    }

    /// Checks the group axioms and returns the verified table.
    pub fn to_table(&self) -> Result<GroupTable> {
        let bad = |detail: String| FusionError::NotAGroup(GroupAxiomWitness::Shape { detail });
        let index: HashMap<&str, usize> = self.elements.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        if index.len() != self.elements.len() {
            return Err(bad("duplicate element labels".into()));
        }
        let identity = *index
            .get(self.identity.as_str())
            .ok_or_else(|| bad(format!("identity `{}` is not an element", self.identity)))?;
        let mult = self
            .table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|l| index.get(l.as_str()).copied().ok_or_else(|| bad(format!("unknown element `{l}`"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        GroupTable::new(self.elements.clone(), mult, identity).map_err(FusionError::NotAGroup)
    }
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            out.push_str(&(i + 1).to_string());
            i = p[i];
        }
        out.push(')');
    }
    if out.is_empty() {
        "e".to_string()
    } else {
        out
    }
}

/// Group ring `C*(Γ)` seen through its fusion rules: all dimensions 1,
/// dual is the group inverse, `g × h = {gh}`.
pub fn group_ring(g: &GroupPresentationInput) -> Result<FusionRing> {
    group_ring_named(&format!("group[{}]", g.elements.len()), g)
}

pub fn group_ring_named(name: &str, g: &GroupPresentationInput) -> Result<FusionRing> {
    let table = g.to_table()?;
    ring_of_table(name, &table)
}

pub fn ring_of_table(name: &str, table: &GroupTable) -> Result<FusionRing> {
    let n = table.order();
    let basis = table.labels().iter().map(|l| BasisElement::new(l.clone(), 1)).collect();
    let dual = (0..n).map(|a| table.inverse(a)).collect();
    let products = (0..n * n).map(|k| vec![(table.mul(k / n, k % n), Mult::one())]).collect();
    FusionRing::from_table(name, basis, table.identity(), dual, products)
}
