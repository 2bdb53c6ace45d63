use std::collections::HashSet;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{invalid, Result};

use super::enumerate::{all_subsets, enumerate_k_subsets};
use super::exact::{binom_u, pow, uint_rational};
use super::kset::KSet;

/// A family of subsets of `[n]`, stored sorted in canonical order without duplicates.
///
/// Families are immutable once built: every operation returns a new family.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SetFamily {
    n: usize,
    k: Option<usize>,
    members: Vec<KSet>,
}

impl SetFamily {
    /// Builds a family, sorting and deduplicating `members`.
    ///
    /// With `k = Some(_)` every member must have exactly `k` elements.
    pub fn new<I>(n: usize, k: Option<usize>, members: I) -> Result<Self>
    where
        I: IntoIterator<Item = KSet>,
    {
        KSet::empty(n)?;
        if let Some(k) = k {
            if k > n {
                return invalid(format!("uniformity {k} exceeds universe {n}"));
            }
        }
        let mut members: Vec<KSet> = members.into_iter().collect();
        for m in &members {
            if m.universe() != n {
                return invalid(format!(
                    "member {m} lives in [{}], family universe is [{n}]",
                    m.universe()
                ));
            }
            if let Some(k) = k {
                if m.len() != k {
                    return invalid(format!("member {m} has size {}, expected {k}", m.len()));
                }
            }
        }
        members.sort_unstable();
        members.dedup();
        Ok(SetFamily { n, k, members })
    }

    /// Members given as element lists; convenient for tests and fixtures.
    pub fn from_lists(n: usize, k: Option<usize>, lists: &[&[usize]]) -> Result<Self> {
        let members = lists
            .iter()
            .map(|l| KSet::from_elements(n, l.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        SetFamily::new(n, k, members)
    }

    pub fn empty(n: usize, k: Option<usize>) -> Result<Self> {
        SetFamily::new(n, k, std::iter::empty())
    }

    /// `([n] choose k)`.
    pub fn full_level(n: usize, k: usize) -> Result<Self> {
        SetFamily::new(n, Some(k), enumerate_k_subsets(n, k)?)
    }

    /// `2^[n]`.
    pub fn power_set(n: usize) -> Result<Self> {
        SetFamily::new(n, None, all_subsets(n)?)
    }

    /// All `k`-sets satisfying `keep`.
    pub fn level_filtered(n: usize, k: usize, keep: impl Fn(&KSet) -> bool) -> Result<Self> {
        let members: Vec<KSet> = enumerate_k_subsets(n, k)?.filter(|s| keep(s)).collect();
        Ok(SetFamily { n, k: Some(k), members })
    }

    /// Internal constructor for member lists already sorted and deduplicated.
    pub(crate) fn from_sorted_unchecked(n: usize, k: Option<usize>, members: Vec<KSet>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        SetFamily { n, k, members }
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn uniformity(&self) -> Option<usize> {
        self.k
    }

    #[inline]
    pub fn members(&self) -> &[KSet] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, KSet> {
        self.members.iter()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, set: &KSet) -> bool {
        self.members.binary_search(set).is_ok()
    }

    /// The same members with the uniformity tag replaced.
    pub fn with_uniformity(&self, k: Option<usize>) -> Result<Self> {
        SetFamily::new(self.n, k, self.members.iter().copied())
    }

    pub fn filter(&self, keep: impl Fn(&KSet) -> bool) -> SetFamily {
        SetFamily {
            n: self.n,
            k: self.k,
            members: self.members.iter().copied().filter(|m| keep(m)).collect(),
        }
    }

    /// `self ∖ other`.
    pub fn difference(&self, other: &SetFamily) -> SetFamily {
        self.filter(|m| !other.contains(m))
    }

    pub fn union(&self, other: &SetFamily) -> Result<SetFamily> {
        if self.n != other.n {
            return invalid("union of families over different universes");
        }
        let k = if self.k == other.k { self.k } else { None };
        SetFamily::new(self.n, k, self.members.iter().chain(other.members.iter()).copied())
    }

    pub fn is_subfamily_of(&self, other: &SetFamily) -> bool {
        self.members.iter().all(|m| other.contains(m))
    }

    /// Hash set of members for O(1) lookups in hot loops.
    pub(crate) fn member_set(&self) -> HashSet<KSet> {
        self.members.iter().copied().collect()
    }

    /// `F(X, S) = {F ∖ X : F ∈ F, F ∩ S = X}`.
    ///
    /// Members keep their original labels, so the result lives in `[n] ∖ S`
    /// inside the same universe. Uniformity drops by `|X|`.
    pub fn trace(&self, x: &KSet, s: &KSet) -> Result<SetFamily> {
        if x.universe() != self.n || s.universe() != self.n {
            return invalid("trace sets must share the family universe");
        }
        if !x.is_subset(s) {
            return invalid(format!("trace needs X ⊆ S, got X = {x}, S = {s}"));
        }
        let members = self
            .members
            .iter()
            .filter(|f| f.intersection(s) == *x)
            .map(|f| f.difference(x));
        SetFamily::new(self.n, self.k.map(|k| k.saturating_sub(x.len())), members)
    }

    /// Relabels a family avoiding `S` onto `[n - |S|]`, preserving the order of
    /// the remaining elements.
    pub fn relabel_avoiding(&self, s: &KSet) -> Result<SetFamily> {
        let new_n = self.n - s.len();
        if new_n == 0 {
            return invalid("relabeling would leave an empty universe");
        }
        let mut label = vec![0usize; self.n + 1];
        let mut next = 0;
        for x in 1..=self.n {
            if !s.contains(x) {
                next += 1;
                label[x] = next;
            }
        }
        let members = self
            .members
            .iter()
            .map(|f| {
                if !f.is_disjoint(s) {
                    return invalid(format!("member {f} meets the removed set {s}"));
                }
                KSet::from_elements(new_n, f.elements().map(|x| label[x]))
            })
            .collect::<Result<Vec<_>>>()?;
        SetFamily::new(new_n, self.k, members)
    }

    /// Relabels every member by the permutation `perm` (`perm[x - 1]` is the image of `x`).
    pub fn permuted(&self, perm: &[usize]) -> Result<SetFamily> {
        if perm.len() != self.n {
            return invalid("permutation length differs from universe");
        }
        let members = self
            .members
            .iter()
            .map(|f| KSet::from_elements(self.n, f.elements().map(|x| perm[x - 1])))
            .collect::<Result<Vec<_>>>()?;
        SetFamily::new(self.n, self.k, members)
    }

    /// The same sets regarded inside a larger universe `[m]`, `m >= n`.
    pub fn embedded(&self, m: usize) -> Result<SetFamily> {
        if m < self.n {
            return invalid("cannot embed into a smaller universe");
        }
        let members = self
            .members
            .iter()
            .map(|f| f.with_universe(m))
            .collect::<Result<Vec<_>>>()?;
        SetFamily::new(m, self.k, members)
    }

    /// `μ_p(F) = Σ_{F ∈ F} p^|F| (1 - p)^(n - |F|)`, exactly.
    pub fn biased_measure(&self, p: &BigRational) -> Result<BigRational> {
        if *p <= BigRational::zero() || *p >= BigRational::one() {
            return invalid(format!("bias {p} outside (0, 1)"));
        }
        let mut by_size = vec![0u64; self.n + 1];
        for m in &self.members {
            by_size[m.len()] += 1;
        }
        let q = BigRational::one() - p;
        let total = by_size
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(size, &c)| {
                BigRational::from_integer(c.into()) * pow(p, size as u32) * pow(&q, (self.n - size) as u32)
            })
            .fold(BigRational::zero(), |a, b| a + b);
        Ok(total)
    }

    /// Size as a fraction of `binom(n, k)`; only meaningful for uniform families.
    pub fn density(&self) -> Option<BigRational> {
        let k = self.k?;
        let total = binom_u(self.n, k as i64);
        Some(BigRational::from_integer(self.len().into()) / uint_rational(&total))
    }
}

impl fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SetFamily(n={}, k={:?}, ", self.n, self.k)?;
        f.debug_list().entries(self.members.iter()).finish()?;
        f.write_str(")")
    }
}

impl<'a> IntoIterator for &'a SetFamily {
    type Item = &'a KSet;
    type IntoIter = std::slice::Iter<'a, KSet>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setcore::exact::rational;
    use proptest::prelude::*;

    fn fam(n: usize, k: Option<usize>, lists: &[&[usize]]) -> SetFamily {
        SetFamily::from_lists(n, k, lists).unwrap()
    }

    fn set(n: usize, xs: &[usize]) -> KSet {
        KSet::from_elements(n, xs.iter().copied()).unwrap()
    }

    #[test]
    fn trace_examples() {
        let f = fam(3, Some(2), &[&[1, 2], &[1, 3], &[2, 3]]);
        let t = f.trace(&set(3, &[1]), &set(3, &[1, 2])).unwrap();
        assert_eq!(t, fam(3, Some(1), &[&[3]]));

        let e = KSet::empty(3).unwrap();
        assert_eq!(f.trace(&e, &e).unwrap(), f);

        let g = fam(3, Some(2), &[&[1, 2]]);
        let t = g.trace(&set(3, &[2]), &set(3, &[2, 3])).unwrap();
        assert_eq!(t, fam(3, Some(1), &[&[1]]));

        assert!(f.trace(&set(3, &[3]), &set(3, &[1, 2])).is_err());
    }

    #[test]
    fn measure_examples() {
        let single_empty = SetFamily::new(2, None, [KSet::empty(2).unwrap()]).unwrap();
        assert_eq!(single_empty.biased_measure(&rational(1, 2)).unwrap(), rational(1, 4));
        let two = fam(2, Some(1), &[&[1], &[2]]);
        assert_eq!(two.biased_measure(&rational(1, 3)).unwrap(), rational(4, 9));
        assert!(two.biased_measure(&rational(0, 1)).is_err());
        assert!(two.biased_measure(&rational(1, 1)).is_err());
        for n in 1..=8 {
            let full = SetFamily::power_set(n).unwrap();
            assert_eq!(full.biased_measure(&rational(2, 7)).unwrap(), rational(1, 1));
        }
    }

    #[test]
    fn construction_validates() {
        assert!(SetFamily::from_lists(3, Some(2), &[&[1]]).is_err());
        assert!(SetFamily::from_lists(3, None, &[&[4]]).is_err());
        let f = fam(3, None, &[&[2], &[1], &[2]]);
        assert_eq!(f.len(), 2);
        assert_eq!(f.members()[0], set(3, &[1]));
    }

    #[test]
    fn relabel_avoiding_prefix() {
        let f = fam(5, Some(2), &[&[3, 5], &[4, 5]]);
        let r = f.relabel_avoiding(&set(5, &[1, 2])).unwrap();
        assert_eq!(r, fam(3, Some(2), &[&[1, 3], &[2, 3]]));
        assert!(fam(5, Some(1), &[&[1]]).relabel_avoiding(&set(5, &[1])).is_err());
    }

    fn arb_family() -> impl Strategy<Value = SetFamily> {
        (2usize..8).prop_flat_map(|n| {
            proptest::collection::vec(0u64..(1u64 << n), 0..20).prop_map(move |masks| {
                SetFamily::new(n, None, masks.into_iter().map(|m| KSet::from_mask(n, m).unwrap())).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn traces_partition_the_family(f in arb_family(), s_mask in 0u64..256) {
            let n = f.universe();
            let s = KSet::from_mask(n, s_mask & ((1u64 << n) - 1)).unwrap();
            let total: usize = (0u64..1 << n)
                .map(|m| KSet::from_mask(n, m).unwrap())
                .filter(|x| x.is_subset(&s))
                .map(|x| f.trace(&x, &s).unwrap().len())
                .sum();
            prop_assert_eq!(total, f.len());
        }

        #[test]
        fn measure_is_additive(f in arb_family(), g_mask in 0u64..u64::MAX) {
            let n = f.universe();
            let p = rational(1, 3);
            let pick = |i: usize| g_mask >> (i % 64) & 1 == 1;
            let fa = SetFamily::new(n, None, f.iter().enumerate().filter(|(i, _)| pick(*i)).map(|(_, s)| *s)).unwrap();
            let fb = SetFamily::new(n, None, f.iter().enumerate().filter(|(i, _)| !pick(*i)).map(|(_, s)| *s)).unwrap();
            prop_assert_eq!(
                fa.biased_measure(&p).unwrap() + fb.biased_measure(&p).unwrap(),
                f.biased_measure(&p).unwrap()
            );
        }
    }
}
