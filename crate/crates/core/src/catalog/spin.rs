//! Clebsch-Gordan type rings: SU(2), SO(3) and the dual of the circle.

use std::sync::Arc;

use num_traits::One;

use crate::error::{FusionError, Result};
use crate::ring::{Decomposition, FusionRing, FusionRule, Mult};

fn parse_index(label: &str, prefix: char) -> Result<u64> {
    let digits = label.strip_prefix(prefix).ok_or_else(|| FusionError::UnknownLabel(label.to_string()))?;
    let canonical =
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) && (digits == "0" || !digits.starts_with('0'));
    if !canonical {
        return Err(FusionError::UnknownLabel(label.to_string()));
    }
    digits.parse().map_err(|_| FusionError::UnknownLabel(label.to_string()))
}

/// `V_n` has dimension `n + 1`;
/// `V_a × V_b = V_{|a−b|} ⊕ V_{|a−b|+2} ⊕ … ⊕ V_{a+b}`.
///
/// The same rules govern `SU_q(2)` and `B_u(Q)`, so one builder serves all of
/// them.
pub struct Su2Rule;

impl FusionRule for Su2Rule {
    fn unit(&self) -> String {
        "V0".into()
    }
    fn generators(&self) -> Vec<String> {
        vec!["V1".into()]
    }
    fn check(&self, label: &str) -> Result<()> {
        parse_index(label, 'V').map(|_| ())
    }
    fn dim(&self, label: &str) -> Result<u64> {
        Ok(parse_index(label, 'V')? + 1)
    }
    fn dual(&self, label: &str) -> Result<String> {
        self.check(label)?;
        Ok(label.to_string())
    }
    fn product(&self, a: &str, b: &str) -> Result<Decomposition> {
        let (a, b) = (parse_index(a, 'V')?, parse_index(b, 'V')?);
        Ok((a.abs_diff(b)..=a + b).step_by(2).map(|c| (format!("V{c}"), Mult::one())).collect())
    }
    fn grade(&self, label: &str) -> usize {
        parse_index(label, 'V').unwrap_or(u64::MAX) as usize
    }
}

/// Integer-spin part of SU(2): `W_n = V_{2n}`, dimension `2n + 1`,
/// `W_a × W_b = W_{|a−b|} ⊕ … ⊕ W_{a+b}`. Also the fusion rules of
/// `A_aut(B, τ)`.
pub struct So3Rule;

impl FusionRule for So3Rule {
    fn unit(&self) -> String {
        "W0".into()
    }
    fn generators(&self) -> Vec<String> {
        vec!["W1".into()]
    }
    fn check(&self, label: &str) -> Result<()> {
        parse_index(label, 'W').map(|_| ())
    }
    fn dim(&self, label: &str) -> Result<u64> {
        Ok(2 * parse_index(label, 'W')? + 1)
    }
    fn dual(&self, label: &str) -> Result<String> {
        self.check(label)?;
        Ok(label.to_string())
    }
    fn product(&self, a: &str, b: &str) -> Result<Decomposition> {
        let (a, b) = (parse_index(a, 'W')?, parse_index(b, 'W')?);
        Ok((a.abs_diff(b)..=a + b).map(|c| (format!("W{c}"), Mult::one())).collect())
    }
    fn grade(&self, label: &str) -> usize {
        parse_index(label, 'W').unwrap_or(u64::MAX) as usize
    }
}

/// Group ring of ℤ (characters of the circle): `z^a × z^b = z^{a+b}`.
pub struct IntegerRule;

impl IntegerRule {
    fn parse(label: &str) -> Result<i64> {
        let bad = || FusionError::UnknownLabel(label.to_string());
        let k: i64 = label.strip_prefix("z^").ok_or_else(bad)?.parse().map_err(|_| bad())?;
        (format!("z^{k}") == label).then_some(k).ok_or_else(bad)
    }
}

impl FusionRule for IntegerRule {
    fn unit(&self) -> String {
        "z^0".into()
    }
    fn generators(&self) -> Vec<String> {
        vec!["z^1".into(), "z^-1".into()]
    }
    fn check(&self, label: &str) -> Result<()> {
        Self::parse(label).map(|_| ())
    }
    fn dim(&self, label: &str) -> Result<u64> {
        Self::parse(label).map(|_| 1)
    }
    fn dual(&self, label: &str) -> Result<String> {
        Ok(format!("z^{}", -Self::parse(label)?))
    }
    fn product(&self, a: &str, b: &str) -> Result<Decomposition> {
        Ok(vec![(format!("z^{}", Self::parse(a)? + Self::parse(b)?), Mult::one())])
    }
    fn grade(&self, label: &str) -> usize {
        Self::parse(label).map_or(usize::MAX, |k| k.unsigned_abs() as usize)
    }
}

pub fn su2_ring() -> FusionRing {
    FusionRing::generated("su2", Arc::new(Su2Rule))
}

pub fn so3_ring() -> FusionRing {
    FusionRing::generated("so3", Arc::new(So3Rule))
}

/// Dual of the circle group, i.e. the group ring of ℤ.
pub fn circle_dual_ring() -> FusionRing {
    FusionRing::generated("z", Arc::new(IntegerRule))
}
