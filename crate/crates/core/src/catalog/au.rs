//! The free unitary quantum group `A_u(n)`: irreducibles are words over
//! `{u, v}` with `v = ū`.

use std::sync::Arc;

use num_traits::One;

use crate::error::{FusionError, Result};
use crate::ring::{Decomposition, FusionRing, FusionRule, Mult};

const EMPTY: &str = "e";

pub struct AuRule {
    n: u64,
}

impl AuRule {
    pub fn new(n: u64) -> Self {
        AuRule { n }
    }

    fn word(label: &str) -> Result<&[u8]> {
        if label == EMPTY {
            return Ok(&[]);
        }
        let bytes = label.as_bytes();
        if bytes.is_empty() || bytes.iter().any(|&b| b != b'u' && b != b'v') {
            return Err(FusionError::UnknownLabel(label.to_string()));
        }
        Ok(bytes)
    }

    fn label(word: &[u8]) -> String {
        if word.is_empty() {
            EMPTY.to_string()
        } else {
            String::from_utf8(word.to_vec()).expect("ascii word")
        }
    }
}

fn bar(letter: u8) -> u8 {
    if letter == b'u' {
        b'v'
    } else {
        b'u'
    }
}

/// `#u − #v`; additive on every constituent of every product.
pub fn signed_length(label: &str) -> Result<i64> {
    Ok(AuRule::word(label)?.iter().map(|&b| if b == b'u' { 1 } else { -1 }).sum())
}

impl FusionRule for AuRule {
    fn unit(&self) -> String {
        EMPTY.into()
    }

    fn generators(&self) -> Vec<String> {
        vec!["u".into(), "v".into()]
    }

    fn check(&self, label: &str) -> Result<()> {
        Self::word(label).map(|_| ())
    }

    /// `dim(x·w) = n·dim(w) − dim(w')` when `w = x̄·w'`, else `n·dim(w)`;
    /// this is the dimension count of `x × w`.
    fn dim(&self, label: &str) -> Result<u64> {
        let w = Self::word(label)?;
        // dims of suffixes, shortest first
        let mut suffix = vec![1u64; w.len() + 1];
        for i in (0..w.len()).rev() {
            let full =
                suffix[i + 1].checked_mul(self.n).ok_or_else(|| FusionError::DimensionOverflow(label.to_string()))?;
            let cancel = if i + 1 < w.len() && w[i + 1] == bar(w[i]) { suffix[i + 2] } else { 0 };
            suffix[i] = full - cancel;
        }
        Ok(suffix[0])
    }

    fn dual(&self, label: &str) -> Result<String> {
        let w = Self::word(label)?;
        Ok(Self::label(&w.iter().rev().map(|&b| bar(b)).collect::<Vec<_>>()))
    }

    /// `x × y = ⊕ a·b` over factorizations `x = a·g`, `y = ḡ·b`.
    fn product(&self, a: &str, b: &str) -> Result<Decomposition> {
        let (x, y) = (Self::word(a)?, Self::word(b)?);
        let mut out = Vec::new();
        let mut k = 0;
        loop {
            let mut w = x[..x.len() - k].to_vec();
            w.extend_from_slice(&y[k..]);
            out.push((Self::label(&w), Mult::one()));
            if k == x.len().min(y.len()) || y[k] != bar(x[x.len() - 1 - k]) {
                break;
            }
            k += 1;
        }
        // longest first from the loop; basis order is shortest first
        out.reverse();
        Ok(out)
    }

    fn grade(&self, label: &str) -> usize {
        Self::word(label).map_or(usize::MAX, |w| w.len())
    }
}

pub fn au_word_ring(n: u64) -> FusionRing {
    FusionRing::generated(format!("au:{n}"), Arc::new(AuRule::new(n)))
}
