use crate::error::{invalid, Result};
use crate::junta::JuntaSpec;
use crate::setcore::{binom, KSet, SetFamily};
use crate::shifting::is_shifted;

/// `{F ∈ C([n], k) : F ∩ [s-1] ≠ ∅}`.
pub fn emc_extremal(n: usize, k: usize, s: usize) -> Result<SetFamily> {
    if s == 0 || s - 1 > n || k > n {
        return invalid(format!("need 1 <= s-1+1, s-1 <= n, k <= n; got n={n} k={k} s={s}"));
    }
    let family = SetFamily::level_filtered(n, k, |f| f.prefix_count_unchecked(s - 1) > 0)?;
    let expected = binom(n as i64, k as i64)? - binom((n + 1 - s) as i64, k as i64)?;
    assert_eq!(
        num_bigint::BigUint::from(family.len()),
        expected,
        "extremal size identity"
    );
    Ok(family)
}

/// `{F ∈ C([n], k) : |F ∩ [2j-1]| >= m}`.
pub fn threshold_family(n: usize, k: usize, j: usize, m: usize) -> Result<SetFamily> {
    if j == 0 || 2 * j - 1 > n || k > n {
        return invalid(format!("need 1 <= j, 2j-1 <= n, k <= n; got n={n} k={k} j={j}"));
    }
    let family = SetFamily::level_filtered(n, k, |f| f.prefix_count_unchecked(2 * j - 1) >= m)?;
    assert!(is_shifted(&family)?, "threshold families are shifted");
    Ok(family)
}

/// Best defining family over the center `[j]` (`j <= 3`) among those
/// accepted by `accept`: least residual `|F ∖ J|`, then fewest members, then
/// smallest bitmask over the patterns. `None` when nothing is accepted.
pub fn exhaustive_min_junta(
    family: &SetFamily,
    j: usize,
    accept: impl Fn(&SetFamily) -> bool,
) -> Result<Option<(JuntaSpec, usize)>> {
    let n = family.universe();
    if j > 3 || j > n {
        return invalid(format!("center size {j} must be at most min(3, n)"));
    }
    let patterns = 1usize << j;
    let mut counts = vec![0usize; patterns];
    for f in family {
        counts[(f.low_word() as usize) & (patterns - 1)] += 1;
    }
    let mut candidates: Vec<u32> = (0..1u32 << patterns).collect();
    candidates.sort_by_key(|&c| (c.count_ones(), c));

    let center = KSet::prefix(n, j)?;
    let mut best: Option<(usize, JuntaSpec)> = None;
    for c in candidates {
        let residual: usize = (0..patterns).filter(|&p| c >> p & 1 == 0).map(|p| counts[p]).sum();
        if best.as_ref().is_some_and(|(r, _)| *r <= residual) {
            continue;
        }
        let members = (0..patterns)
            .filter(|&p| c >> p & 1 == 1)
            .map(|p| KSet::from_mask(n, p as u64))
            .collect::<Result<Vec<_>>>()?;
        let defining = SetFamily::new(n, None, members)?;
        if accept(&defining) {
            best = Some((residual, JuntaSpec::new(center, defining, family.uniformity())?));
        }
    }
    Ok(best.map(|(r, spec)| (spec, r)))
}
