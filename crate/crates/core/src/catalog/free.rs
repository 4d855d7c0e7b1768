//! Free products of fusion rings.
//!
//! Irreducibles of `G₁ * G₂` are alternating words in the nontrivial
//! irreducibles of the factors. A word is labelled `(1:a)(2:b)(1:c)…`; the
//! unit is `e`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_traits::One;

use crate::error::{FusionError, Result};
use crate::ring::{Decomposition, FusionRing, FusionRule, Mult};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Letter {
    factor: u8,
    label: String,
}

type Word = Vec<Letter>;

pub struct FreeProductRule {
    factors: [FusionRing; 2],
    units: [String; 2],
    memo: Mutex<HashMap<(String, String), Vec<(Word, Mult)>>>,
}

impl FreeProductRule {
    pub fn new(left: FusionRing, right: FusionRing) -> Self {
        let units = [left.unit(), right.unit()];
        FreeProductRule { factors: [left, right], units, memo: Mutex::new(HashMap::new()) }
    }

    fn factor(&self, f: u8) -> &FusionRing {
        &self.factors[(f - 1) as usize]
    }

    fn format(word: &[Letter]) -> String {
        if word.is_empty() {
            return "e".to_string();
        }
        word.iter().map(|l| format!("({}:{})", l.factor, l.label)).collect()
    }

    fn parse(&self, label: &str) -> Result<Word> {
        let bad = || FusionError::UnknownLabel(label.to_string());
        if label == "e" {
            return Ok(Vec::new());
        }
        let bytes = label.as_bytes();
        if bytes.is_empty() {
            return Err(bad());
        }
        let mut word = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            if bytes[i] != b'(' || i + 3 >= bytes.len() || bytes[i + 2] != b':' {
                return Err(bad());
            }
            let factor = match bytes[i + 1] {
                b'1' => 1,
                b'2' => 2,
                _ => return Err(bad()),
            };
            let start = i + 3;
            let mut depth = 1;
            let mut j = start;
            while j < bytes.len() {
                match bytes[j] {
                    b'(' => depth += 1,
                    b')' => {
                        depth -= 1;
                        if depth == 0 {
                            break;
                        }
                    }
                    _ => {}
                }
                j += 1;
            }
            if j == bytes.len() {
                return Err(bad());
            }
            let inner = &label[start..j];
            self.factor(factor).check(inner).map_err(|_| bad())?;
            if inner == self.units[(factor - 1) as usize] {
                return Err(bad());
            }
            if word.last().is_some_and(|l: &Letter| l.factor == factor) {
                return Err(bad());
            }
            word.push(Letter { factor, label: inner.to_string() });
            i = j + 1;
        }
        Ok(word)
    }

    fn fuse(&self, s: &[Letter], t: &[Letter]) -> Result<Vec<(Word, Mult)>> {
        let (Some(last), Some(first)) = (s.last(), t.first()) else {
            let mut w = s.to_vec();
            w.extend_from_slice(t);
            return Ok(vec![(w, Mult::one())]);
        };
        if last.factor != first.factor {
            let mut w = s.to_vec();
            w.extend_from_slice(t);
            return Ok(vec![(w, Mult::one())]);
        }
        let key = (Self::format(s), Self::format(t));
        if let Some(hit) = self.memo.lock().expect("memo poisoned").get(&key) {
            return Ok(hit.clone());
        }

        let f = last.factor;
        let (head, tail) = (&s[..s.len() - 1], &t[1..]);
        let mut acc: HashMap<Word, Mult> = HashMap::new();
        for (c, m) in self.factor(f).product(&last.label, &first.label)? {
            if c == self.units[(f - 1) as usize] {
                for (w, k) in self.fuse(head, tail)? {
                    *acc.entry(w).or_default() += &m * k;
                }
            } else {
                let mut w = head.to_vec();
                w.push(Letter { factor: f, label: c });
                w.extend_from_slice(tail);
                *acc.entry(w).or_default() += m;
            }
        }
        let result: Vec<(Word, Mult)> = acc.into_iter().collect();
        self.memo.lock().expect("memo poisoned").insert(key, result.clone());
        Ok(result)
    }
}

impl FusionRule for FreeProductRule {
    fn unit(&self) -> String {
        "e".into()
    }

    fn generators(&self) -> Vec<String> {
        let mut gens = Vec::new();
        for f in [1u8, 2] {
            for g in self.factor(f).generators() {
                gens.push(Self::format(&[Letter { factor: f, label: g }]));
            }
        }
        gens
    }

    fn check(&self, label: &str) -> Result<()> {
        self.parse(label).map(|_| ())
    }

    fn dim(&self, label: &str) -> Result<u64> {
        self.parse(label)?.iter().try_fold(1u64, |acc, l| {
            acc.checked_mul(self.factor(l.factor).dim(&l.label)?)
                .ok_or_else(|| FusionError::DimensionOverflow(label.to_string()))
        })
    }

    fn dual(&self, label: &str) -> Result<String> {
        let word = self
            .parse(label)?
            .into_iter()
            .rev()
            .map(|l| Ok(Letter { label: self.factor(l.factor).dual(&l.label)?, factor: l.factor }))
            .collect::<Result<Word>>()?;
        Ok(Self::format(&word))
    }

    fn product(&self, a: &str, b: &str) -> Result<Decomposition> {
        let (s, t) = (self.parse(a)?, self.parse(b)?);
        let mut out: Decomposition = self.fuse(&s, &t)?.into_iter().map(|(w, m)| (Self::format(&w), m)).collect();
        out.sort_by_cached_key(|(l, _)| (self.grade(l), l.clone()));
        Ok(out)
    }

    /// Sum of the factor grades of the letters.
    fn grade(&self, label: &str) -> usize {
        self.parse(label)
            .map_or(usize::MAX, |w| w.iter().map(|l| self.factor(l.factor).order_key(&l.label).0.max(1)).sum())
    }
}

pub fn free_product(r1: &FusionRing, r2: &FusionRing) -> FusionRing {
    FusionRing::generated(
        format!("free:{}+{}", r1.name(), r2.name()),
        Arc::new(FreeProductRule::new(r1.clone(), r2.clone())),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{group_ring, su2_ring, GroupPresentationInput};

    fn z2() -> FusionRing {
        group_ring(&GroupPresentationInput::cyclic(2)).unwrap()
    }

    fn support(r: &FusionRing, a: &str, b: &str) -> Vec<String> {
        r.product(a, b).unwrap().into_iter().map(|(l, _)| l).collect()
    }

    #[test]
    fn different_factors_concatenate() {
        let r = free_product(&z2(), &z2());
        assert_eq!(support(&r, "(1:g)", "(2:g)"), ["(1:g)(2:g)"]);
        let r = free_product(&su2_ring(), &z2());
        assert_eq!(support(&r, "(1:V1)", "(2:g)"), ["(1:V1)(2:g)"]);
    }

    #[test]
    fn cancellation_recurses() {
        // infinite dihedral group: (ab)(ba) = e
        let r = free_product(&z2(), &z2());
        assert_eq!(r.product("(1:g)(2:g)", "(2:g)(1:g)").unwrap(), vec![("e".to_string(), Mult::one())]);
        assert_eq!(support(&r, "(1:g)(2:g)", "(2:g)"), ["(1:g)"]);
    }

    #[test]
    fn nontrivial_constituents_stay_in_place() {
        let r = free_product(&su2_ring(), &z2());
        assert_eq!(support(&r, "(2:g)(1:V1)", "(1:V1)(2:g)"), ["e", "(2:g)(1:V2)(2:g)"]);
        assert_eq!(r.dim("(2:g)(1:V2)(2:g)").unwrap(), 3);
        assert_eq!(r.dual("(1:V1)(2:g)").unwrap(), "(2:g)(1:V1)");
    }

    #[test]
    fn labels_are_checked() {
        let r = free_product(&su2_ring(), &z2());
        for bad in ["(1:V0)", "(1:V1)(1:V2)", "(3:g)", "(2:h)", "(1:V1", "x", ""] {
            assert!(r.check(bad).is_err(), "{bad}");
        }
        assert!(r.check("(1:V1)(2:g)(1:V3)").is_ok());
    }

    #[test]
    fn nested_labels_parse() {
        let inner = free_product(&z2(), &z2());
        let r = free_product(&inner, &z2());
        assert!(r.check("(1:(1:g)(2:g))(2:g)").is_ok());
        assert_eq!(support(&r, "(1:(1:g))", "(1:(1:g))"), ["e"]);
    }
}
