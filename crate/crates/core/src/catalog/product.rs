//! Direct (tensor) products of fusion rings, labelled `(a,b)`.

use std::sync::Arc;

use crate::error::{FusionError, Result};
use crate::ring::{BasisElement, Decomposition, FusionRing, FusionRule};

fn pair_label(a: &str, b: &str) -> String {
    format!("({a},{b})")
}

/// Splits `(a,b)` at the top-level comma.
fn split_pair(label: &str) -> Option<(&str, &str)> {
    let inner = label.strip_prefix('(')?.strip_suffix(')')?;
    let mut depth = 0i32;
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some((&inner[..i], &inner[i + 1..])),
            _ => {}
        }
    }
    None
}

struct DirectProductRule {
    left: FusionRing,
    right: FusionRing,
}

impl DirectProductRule {
    fn parse<'a>(&self, label: &'a str) -> Result<(&'a str, &'a str)> {
        let (a, b) = split_pair(label).ok_or_else(|| FusionError::UnknownLabel(label.to_string()))?;
        self.left.check(a)?;
        self.right.check(b)?;
        Ok((a, b))
    }
}

impl FusionRule for DirectProductRule {
    fn unit(&self) -> String {
        pair_label(&self.left.unit(), &self.right.unit())
    }

    fn generators(&self) -> Vec<String> {
        let (lu, ru) = (self.left.unit(), self.right.unit());
        let mut gens: Vec<String> = self.left.generators().iter().map(|g| pair_label(g, &ru)).collect();
        gens.extend(self.right.generators().iter().map(|h| pair_label(&lu, h)));
        gens
    }

    fn check(&self, label: &str) -> Result<()> {
        self.parse(label).map(|_| ())
    }

    fn dim(&self, label: &str) -> Result<u64> {
        let (a, b) = self.parse(label)?;
        self.left
            .dim(a)?
            .checked_mul(self.right.dim(b)?)
            .ok_or_else(|| FusionError::DimensionOverflow(label.to_string()))
    }

    fn dual(&self, label: &str) -> Result<String> {
        let (a, b) = self.parse(label)?;
        Ok(pair_label(&self.left.dual(a)?, &self.right.dual(b)?))
    }

    fn product(&self, x: &str, y: &str) -> Result<Decomposition> {
        let ((a1, b1), (a2, b2)) = (self.parse(x)?, self.parse(y)?);
        let (left, right) = (self.left.product(a1, a2)?, self.right.product(b1, b2)?);
        let mut out = Vec::with_capacity(left.len() * right.len());
        for (c, m) in &left {
            for (d, k) in &right {
                out.push((pair_label(c, d), m * k));
            }
        }
        out.sort_by_cached_key(|(l, _)| (self.grade(l), l.clone()));
        Ok(out)
    }

    fn grade(&self, label: &str) -> usize {
        self.parse(label)
            .map_or(usize::MAX, |(a, b)| self.left.order_key(a).0.saturating_add(self.right.order_key(b).0))
    }
}

/// Basis = pairs, dimensions multiply, `N_{(a,b)(a',b')}^{(c,c')} =
/// N_{aa'}^c · N_{bb'}^{c'}`. Explicit when both factors are explicit.
pub fn direct_product(r1: &FusionRing, r2: &FusionRing) -> Result<FusionRing> {
    let name = format!("prod:{}+{}", r1.name(), r2.name());
    let (Some(b1), Some(b2)) = (r1.basis(), r2.basis()) else {
        return Ok(FusionRing::generated(name, Arc::new(DirectProductRule { left: r1.clone(), right: r2.clone() })));
    };
    let (n1, n2) = (b1.len(), b2.len());
    let idx = |i: usize, j: usize| i * n2 + j;
    let basis = b1
        .iter()
        .flat_map(|x| b2.iter().map(move |y| BasisElement::new(pair_label(&x.label, &y.label), x.dim * y.dim)))
        .collect();
    let index1 = |l: &str| r1.index_of(l).expect("label from the ring itself");
    let index2 = |l: &str| r2.index_of(l).expect("label from the ring itself");
    let unit = idx(index1(&r1.unit()), index2(&r2.unit()));
    let mut dual = Vec::with_capacity(n1 * n2);
    for x in b1 {
        for y in b2 {
            dual.push(idx(index1(&r1.dual(&x.label)?), index2(&r2.dual(&y.label)?)));
        }
    }
    let n = n1 * n2;
    let mut table = Vec::with_capacity(n * n);
    for p in 0..n {
        for q in 0..n {
            let left = r1.product(&b1[p / n2].label, &b1[q / n2].label)?;
            let right = r2.product(&b2[p % n2].label, &b2[q % n2].label)?;
            let mut row = Vec::with_capacity(left.len() * right.len());
            for (c, m) in &left {
                for (d, k) in &right {
                    row.push((idx(index1(c), index2(d)), m * k));
                }
            }
            table.push(row);
        }
    }
    FusionRing::from_table(name, basis, unit, dual, table)
}
