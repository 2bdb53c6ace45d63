//! Walk property `t′`: reading `F` left to right as up/right steps, the walk
//! reaches the line `y = x + t′`.

use num_bigint::BigUint;

use crate::error::{invalid, Error, Result};
use crate::setcore::{binom, enumerate_k_subsets, KSet, SetFamily};

use super::uniformities;

const COUNT_CAP: u64 = 50_000_000;

/// Some `i >= 0` has `|F ∩ [t′+2i]| >= t′+i`.
pub fn has_property_t(set: &KSet, t: usize) -> Result<bool> {
    if t == 0 {
        return invalid("property t′ needs t′ >= 1");
    }
    Ok(has_property_unchecked(set, t))
}

fn has_property_unchecked(set: &KSet, t: usize) -> bool {
    let n = set.universe();
    let mut i = 0;
    while t + 2 * i <= n && t + i <= set.len() {
        if set.prefix_count_unchecked(t + 2 * i) >= t + i {
            return true;
        }
        i += 1;
    }
    false
}

/// Number of `k`-subsets of `[n]` with property `t′`, by enumeration.
pub fn count_property_t(n: usize, k: usize, t: usize) -> Result<BigUint> {
    if t == 0 || t > k || k > n {
        return invalid(format!("need 1 <= t′ <= k <= n, got t′={t}, k={k}, n={n}"));
    }
    let total = binom(n as i64, k as i64)?;
    if total > BigUint::from(COUNT_CAP) {
        return Err(Error::ResourceLimit(format!(
            "C({n},{k}) = {total} sets exceeds the enumeration cap {COUNT_CAP}"
        )));
    }
    let count = enumerate_k_subsets(n, k)?
        .filter(|s| has_property_unchecked(s, t))
        .count();
    Ok(BigUint::from(count))
}

/// Closed form for [`count_property_t`]: `C(n, k−t′)` when `n >= 2k−t′`.
/// Below that every walk is forced onto the line and all `C(n, k)` sets qualify.
pub fn property_t_count_formula(n: usize, k: usize, t: usize) -> Result<BigUint> {
    if t == 0 || t > k || k > n {
        return invalid(format!("need 1 <= t′ <= k <= n, got t′={t}, k={k}, n={n}"));
    }
    if n + t >= 2 * k {
        binom(n as i64, (k - t) as i64)
    } else {
        binom(n as i64, k as i64)
    }
}

/// Every `A ∈ a` has property `t′`, or every `B ∈ b` has property `t′+1`.
pub fn dichotomy_check(a: &SetFamily, b: &SetFamily, t: usize) -> Result<bool> {
    if t == 0 {
        return invalid("property t′ needs t′ >= 1");
    }
    Ok(a.iter().all(|s| has_property_unchecked(s, t)) || b.iter().all(|s| has_property_unchecked(s, t + 1)))
}

/// Both forms of the size conclusion for a cross-`t′` pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LemcrossOutcome {
    /// `|A| <= C(n, a−t′)` or `|B| <= C(n, b−t′)`.
    pub stated: bool,
    /// `|A| <= C(n, a−t′)` or `|B| <= C(n, b−t′−1)`.
    pub strengthened: bool,
}

pub fn lemcross_check(a: &SetFamily, b: &SetFamily, t: usize) -> Result<LemcrossOutcome> {
    if t == 0 {
        return invalid("cross t′-intersection needs t′ >= 1");
    }
    if a.universe() != b.universe() {
        return invalid("families live in different universes");
    }
    let ks = uniformities(&[a.clone(), b.clone()])?;
    let (ka, kb, n) = (ks[0] as i64, ks[1] as i64, a.universe());
    if n < 2 * ks[0].max(ks[1]) {
        return invalid(format!("need n >= 2·max(a, b), got n={n}, a={ka}, b={kb}"));
    }
    let n = n as i64;
    let t = t as i64;
    let a_ok = BigUint::from(a.len()) <= binom(n, ka - t)?;
    let b_len = BigUint::from(b.len());
    Ok(LemcrossOutcome {
        stated: a_ok || b_len <= binom(n, kb - t)?,
        strengthened: a_ok || b_len <= binom(n, kb - t - 1)?,
    })
}
