//! Backtracking searches over transversals `(F_1, ..., F_s)`, `F_i ∈ F_i`.
//!
//! Each search looks for a violating transversal, visiting families in index
//! order and members in canonical order, so the first hit is the canonical
//! witness.

use crate::budget::{Budget, Ticker};
use crate::error::Result;
use crate::setcore::{KSet, SetFamily};

use super::{common_universe, uniformities, Outcome};

/// Cross-dependence: no pairwise disjoint transversal (no rainbow matching).
pub fn is_cross_dependent(families: &[SetFamily]) -> Result<Outcome<Vec<KSet>>> {
    is_cross_dependent_within(families, &Budget::unlimited())
}

pub fn is_cross_dependent_within(families: &[SetFamily], budget: &Budget) -> Result<Outcome<Vec<KSet>>> {
    let n = common_universe(families, 2)?;
    if families.iter().any(|f| f.is_empty()) {
        return Ok(Outcome::Holds);
    }
    let mut ticker = Ticker::new(budget);
    let mut chosen = Vec::with_capacity(families.len());
    let found = disjoint_dfs(families, 0, KSet::empty(n)?, &mut chosen, &mut ticker)?;
    Ok(if found { Outcome::Fails(chosen) } else { Outcome::Holds })
}

fn disjoint_dfs(
    families: &[SetFamily],
    depth: usize,
    used: KSet,
    chosen: &mut Vec<KSet>,
    ticker: &mut Ticker<'_>,
) -> Result<bool> {
    if depth == families.len() {
        return Ok(true);
    }
    for f in &families[depth] {
        ticker.tick()?;
        if !f.is_disjoint(&used) {
            continue;
        }
        chosen.push(*f);
        if disjoint_dfs(families, depth + 1, used.union(f), chosen, ticker)? {
            return Ok(true);
        }
        chosen.pop();
    }
    Ok(false)
}

/// Cross-union: `|F_1 ∪ ... ∪ F_s| <= k_1 + ... + k_s - q` for every transversal.
pub fn check_cross_union(families: &[SetFamily], q: usize) -> Result<Outcome<Vec<KSet>>> {
    check_cross_union_within(families, q, &Budget::unlimited())
}

pub fn check_cross_union_within(families: &[SetFamily], q: usize, budget: &Budget) -> Result<Outcome<Vec<KSet>>> {
    let n = common_universe(families, 2)?;
    if q == 0 {
        return crate::error::invalid("cross-union offset q must be >= 1");
    }
    let ks = uniformities(families)?;
    if families.iter().any(|f| f.is_empty()) {
        return Ok(Outcome::Holds);
    }
    // violation: union size >= target
    let total: usize = ks.iter().sum();
    let target = total as i64 - q as i64 + 1;
    let mut remaining = vec![0usize; ks.len() + 1];
    for i in (0..ks.len()).rev() {
        remaining[i] = remaining[i + 1] + ks[i];
    }
    let mut ticker = Ticker::new(budget);
    let mut chosen = Vec::with_capacity(families.len());
    let search = UnionSearch {
        families,
        remaining: &remaining,
        target,
    };
    let found = search.dfs(0, KSet::empty(n)?, &mut chosen, &mut ticker)?;
    Ok(if found { Outcome::Fails(chosen) } else { Outcome::Holds })
}

struct UnionSearch<'a> {
    families: &'a [SetFamily],
    remaining: &'a [usize],
    target: i64,
}

impl UnionSearch<'_> {
    fn dfs(&self, depth: usize, union: KSet, chosen: &mut Vec<KSet>, ticker: &mut Ticker<'_>) -> Result<bool> {
        if ((union.len() + self.remaining[depth]) as i64) < self.target {
            return Ok(false);
        }
        if depth == self.families.len() {
            return Ok(true);
        }
        for f in &self.families[depth] {
            ticker.tick()?;
            chosen.push(*f);
            if self.dfs(depth + 1, union.union(f), chosen, ticker)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }
}

/// Cross-agreeing: `|F_1 ∩ ... ∩ F_s| >= t` for every transversal.
pub fn check_cross_agreeing(families: &[SetFamily], t: usize) -> Result<Outcome<Vec<KSet>>> {
    check_cross_agreeing_within(families, t, &Budget::unlimited())
}

pub fn check_cross_agreeing_within(families: &[SetFamily], t: usize, budget: &Budget) -> Result<Outcome<Vec<KSet>>> {
    let n = common_universe(families, 2)?;
    if t == 0 {
        return crate::error::invalid("cross-agreeing needs t >= 1");
    }
    if families.iter().any(|f| f.is_empty()) {
        return Ok(Outcome::Holds);
    }
    let mut ticker = Ticker::new(budget);
    let mut chosen = Vec::with_capacity(families.len());
    let found = agree_dfs(families, t, 0, KSet::full(n)?, &mut chosen, &mut ticker)?;
    Ok(if found { Outcome::Fails(chosen) } else { Outcome::Holds })
}

fn agree_dfs(
    families: &[SetFamily],
    t: usize,
    depth: usize,
    common: KSet,
    chosen: &mut Vec<KSet>,
    ticker: &mut Ticker<'_>,
) -> Result<bool> {
    if common.len() < t {
        // every completion already fails; the canonical one takes first members
        chosen.extend(families[depth..].iter().map(|f| f.members()[0]));
        return Ok(true);
    }
    if depth == families.len() {
        return Ok(false);
    }
    for f in &families[depth] {
        ticker.tick()?;
        chosen.push(*f);
        if agree_dfs(families, t, depth + 1, common.intersection(f), chosen, ticker)? {
            return Ok(true);
        }
        chosen.pop();
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setcore::enumerate_k_subsets;
    use proptest::prelude::*;

    fn fam(n: usize, k: usize, lists: &[&[usize]]) -> SetFamily {
        SetFamily::from_lists(n, Some(k), lists).unwrap()
    }

    fn set(n: usize, xs: &[usize]) -> KSet {
        KSet::from_elements(n, xs.iter().copied()).unwrap()
    }

    /// Brute-force product enumeration.
    fn all_transversals(families: &[SetFamily]) -> Vec<Vec<KSet>> {
        families.iter().fold(vec![vec![]], |acc, f| {
            acc.into_iter()
                .flat_map(|prefix| {
                    f.iter().map(move |m| {
                        let mut p = prefix.clone();
                        p.push(*m);
                        p
                    })
                })
                .collect()
        })
    }

    fn pairwise_disjoint(t: &[KSet]) -> bool {
        (0..t.len()).all(|i| (i + 1..t.len()).all(|j| t[i].is_disjoint(&t[j])))
    }

    #[test]
    fn cross_dependent_examples() {
        let f = fam(4, 2, &[&[1, 2]]);
        assert!(is_cross_dependent(&[f.clone(), f.clone()]).unwrap().holds());

        let f1 = fam(4, 2, &[&[1, 2], &[3, 4]]);
        let out = is_cross_dependent(&[f1, f]).unwrap();
        assert_eq!(out.witness().unwrap(), &vec![set(4, &[3, 4]), set(4, &[1, 2])]);
        assert!(is_cross_dependent(&[fam(4, 2, &[&[1, 2]])]).is_err());
    }

    #[test]
    fn emc_extremal_copies_are_cross_dependent() {
        // {F ∈ ([6] choose 2) : F ∩ [2] ≠ ∅}, three copies
        let f = SetFamily::level_filtered(6, 2, |s| s.prefix_count(2).unwrap() > 0).unwrap();
        assert_eq!(f.len(), 9);
        let fams = vec![f.clone(), f.clone(), f];
        assert_eq!(all_transversals(&fams).len(), 729);
        assert!(all_transversals(&fams).iter().all(|t| !pairwise_disjoint(t)));
        assert!(is_cross_dependent(&fams).unwrap().holds());
    }

    #[test]
    fn cross_union_examples() {
        let a = fam(4, 2, &[&[1, 2]]);
        let b = fam(4, 2, &[&[1, 3]]);
        let c = fam(4, 2, &[&[3, 4]]);
        assert!(check_cross_union(&[a.clone(), b], 1).unwrap().holds());
        assert!(!check_cross_union(&[a, c], 1).unwrap().holds());
    }

    #[test]
    fn cross_agreeing_examples() {
        let f = fam(3, 2, &[&[1, 2], &[1, 3]]);
        assert!(check_cross_agreeing(&[f.clone(), f], 1).unwrap().holds());
        let out = check_cross_agreeing(&[fam(3, 2, &[&[1, 2]]), fam(3, 2, &[&[2, 3]])], 2).unwrap();
        assert!(!out.holds());
        let star = SetFamily::level_filtered(5, 2, |s| s.contains(1)).unwrap();
        let three = vec![star.clone(), star.clone(), star];
        assert!(all_transversals(&three).iter().all(|t| !t
            .iter()
            .fold(KSet::full(5).unwrap(), |a, b| a.intersection(b))
            .is_empty()));
        assert!(check_cross_agreeing(&three, 1).unwrap().holds());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let f = SetFamily::level_filtered(16, 4, |s| s.contains(1)).unwrap();
        let fams = vec![f.clone(), f.clone(), f];
        let budget = Budget::from_duration(std::time::Duration::ZERO);
        assert!(matches!(
            is_cross_dependent_within(&fams, &budget),
            Err(crate::Error::BudgetExceeded)
        ));
    }

    fn arb_families() -> impl Strategy<Value = Vec<SetFamily>> {
        (4usize..8, 1usize..3, 2usize..4).prop_flat_map(|(n, k, s)| {
            let all: Vec<KSet> = enumerate_k_subsets(n, k).unwrap().collect();
            let len = all.len();
            proptest::collection::vec(proptest::collection::vec(0..len, 0..6), s).prop_map(move |idx| {
                idx.into_iter()
                    .map(|is| SetFamily::new(n, Some(k), is.into_iter().map(|i| all[i])).unwrap())
                    .collect()
            })
        })
    }

    proptest! {
        #[test]
        fn cross_dependence_matches_brute_force(fams in arb_families()) {
            let all = all_transversals(&fams);
            let expected = all.iter().find(|t| pairwise_disjoint(t)).cloned();
            let got = is_cross_dependent(&fams).unwrap();
            prop_assert_eq!(got.witness().cloned(), expected);
        }

        #[test]
        fn union_with_q1_is_cross_dependence(fams in arb_families()) {
            let a = is_cross_dependent(&fams).unwrap();
            let b = check_cross_union(&fams, 1).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn union_matches_brute_force(fams in arb_families(), q in 1usize..4) {
            let total: usize = fams.iter().map(|f| f.uniformity().unwrap()).sum();
            let all = all_transversals(&fams);
            let expected = all.iter().find(|t| {
                let u = t.iter().fold(KSet::empty(t[0].universe()).unwrap(), |a, b| a.union(b));
                u.len() + q > total
            }).cloned();
            prop_assert_eq!(check_cross_union(&fams, q).unwrap().witness().cloned(), expected);
        }

        #[test]
        fn agreeing_matches_brute_force(fams in arb_families(), t in 1usize..3) {
            let all = all_transversals(&fams);
            let expected = all.iter().find(|tr| {
                tr.iter().fold(KSet::full(tr[0].universe()).unwrap(), |a, b| a.intersection(b)).len() < t
            }).cloned();
            prop_assert_eq!(check_cross_agreeing(&fams, t).unwrap().witness().cloned(), expected);
        }
    }
}
