use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::pow;

use crate::error::{invalid, Result};
use crate::setcore::{binom, KSet, SetFamily};

fn check_levels(g: &SetFamily, t: usize) -> Result<usize> {
    let k = g
        .uniformity()
        .ok_or_else(|| crate::Error::InvalidArgument("family must be k-uniform".into()))?;
    if t < k {
        return invalid(format!("shadow level t = {t} is below the uniformity k = {k}"));
    }
    if t > g.universe() {
        return invalid(format!("shadow level t = {t} exceeds n = {}", g.universe()));
    }
    Ok(k)
}

/// All `t`-subsets of `[n]` containing some member of `g`.
pub fn upper_shadow(g: &SetFamily, t: usize) -> Result<SetFamily> {
    let k = check_levels(g, t)?;
    let n = g.universe();
    let mut layer: Vec<KSet> = g.members().to_vec();
    for _ in k..t {
        let mut next: HashSet<KSet> = HashSet::new();
        for a in &layer {
            for x in 1..=n {
                if !a.contains(x) {
                    next.insert(a.with(x));
                }
            }
        }
        layer = next.into_iter().collect();
    }
    SetFamily::new(n, Some(t), layer)
}

/// `(|∂G| / C(n,t))^{n−k} >= (|G| / C(n,k))^{n−t}`, compared exactly after
/// clearing denominators.
pub fn bollobas_thomason_check(g: &SetFamily, t: usize) -> Result<bool> {
    let k = check_levels(g, t)?;
    if g.is_empty() {
        return Ok(true);
    }
    let n = g.universe();
    let shadow = BigUint::from(upper_shadow(g, t)?.len());
    let size = BigUint::from(g.len());
    let cn_k = binom(n as i64, k as i64)?;
    let cn_t = binom(n as i64, t as i64)?;
    let lhs = pow(shadow, n - k) * pow(cn_k, n - t);
    let rhs = pow(size, n - t) * pow(cn_t, n - k);
    Ok(lhs >= rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setcore::enumerate_k_subsets;
    use proptest::prelude::*;

    fn fam(n: usize, k: usize, lists: &[&[usize]]) -> SetFamily {
        SetFamily::from_lists(n, Some(k), lists).unwrap()
    }

    #[test]
    fn shadow_examples() {
        let g = fam(4, 2, &[&[1, 2]]);
        assert_eq!(upper_shadow(&g, 3).unwrap(), fam(4, 3, &[&[1, 2, 3], &[1, 2, 4]]));
        assert_eq!(upper_shadow(&g, 2).unwrap(), g);
        let empty = SetFamily::empty(4, Some(2)).unwrap();
        assert!(upper_shadow(&empty, 3).unwrap().is_empty());
        assert!(upper_shadow(&g, 1).is_err());
        assert!(upper_shadow(&g, 5).is_err());
    }

    #[test]
    fn bt_examples() {
        assert!(bollobas_thomason_check(&fam(4, 2, &[&[1, 2]]), 3).unwrap());
        let full = SetFamily::full_level(6, 3).unwrap();
        for t in 3..=6 {
            assert!(bollobas_thomason_check(&full, t).unwrap());
        }
    }

    fn arb_family() -> impl Strategy<Value = (SetFamily, usize)> {
        (3usize..10).prop_flat_map(|n| {
            (Just(n), 1..n).prop_flat_map(|(n, k)| {
                let all: Vec<KSet> = enumerate_k_subsets(n, k).unwrap().collect();
                let len = all.len();
                (proptest::collection::vec(0..len, 0..15), k..=n)
                    .prop_map(move |(idx, t)| (SetFamily::new(n, Some(k), idx.into_iter().map(|i| all[i])).unwrap(), t))
            })
        })
    }

    proptest! {
        #[test]
        fn shadow_matches_definition((g, t) in arb_family()) {
            let n = g.universe();
            let expected: Vec<KSet> = enumerate_k_subsets(n, t)
                .unwrap()
                .filter(|s| g.iter().any(|a| a.is_subset(s)))
                .collect();
            let got = upper_shadow(&g, t).unwrap();
            prop_assert_eq!(got.members(), &expected[..]);
        }

        #[test]
        fn bt_always_holds((g, t) in arb_family()) {
            prop_assert!(bollobas_thomason_check(&g, t).unwrap());
        }
    }
}
