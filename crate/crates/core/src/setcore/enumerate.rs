use crate::error::{invalid, Error, Result};

use super::kset::{KSet, MAX_UNIVERSE};

/// Largest `n` accepted by [`all_subsets`].
pub const POWER_SET_CAP: usize = 24;

/// All `k`-subsets of `[n]` in canonical (increasing integer) order.
pub fn enumerate_k_subsets(n: usize, k: usize) -> Result<KSubsets> {
    enumerate_k_subsets_capped(n, k, MAX_UNIVERSE)
}

pub fn enumerate_k_subsets_capped(n: usize, k: usize, cap: usize) -> Result<KSubsets> {
    if n > cap.min(MAX_UNIVERSE) {
        return Err(Error::ResourceLimit(format!(
            "universe {n} exceeds enumeration cap {}",
            cap.min(MAX_UNIVERSE)
        )));
    }
    if n == 0 {
        return invalid("universe must be non-empty");
    }
    if k > n {
        return invalid(format!("k = {k} exceeds n = {n}"));
    }
    Ok(KSubsets {
        n,
        positions: (1..=k).collect(),
        done: false,
    })
}

/// Successor iteration in colexicographic order, which coincides with the
/// integer order of the bit vectors.
pub struct KSubsets {
    n: usize,
    positions: Vec<usize>,
    done: bool,
}

impl Iterator for KSubsets {
    type Item = KSet;

    fn next(&mut self) -> Option<KSet> {
        if self.done {
            return None;
        }
        let current = KSet::from_elements(self.n, self.positions.iter().copied()).expect("positions stay in range");
        let k = self.positions.len();
        // lowest position that can move up without colliding with its successor
        let movable = (0..k).find(|&i| {
            let limit = if i + 1 < k { self.positions[i + 1] } else { self.n + 1 };
            self.positions[i] + 1 < limit
        });
        match movable {
            Some(i) => {
                self.positions[i] += 1;
                for (j, p) in self.positions[..i].iter_mut().enumerate() {
                    *p = j + 1;
                }
            }
            None => self.done = true,
        }
        Some(current)
    }
}

/// The whole power set of `[n]` in canonical order.
pub fn all_subsets(n: usize) -> Result<impl Iterator<Item = KSet>> {
    if n == 0 || n > POWER_SET_CAP {
        return Err(Error::ResourceLimit(format!(
            "power set of [{n}] outside 1..={POWER_SET_CAP}"
        )));
    }
    Ok((0u64..1u64 << n).map(move |mask| KSet::from_mask(n, mask).expect("mask fits")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setcore::exact::binom;
    use std::collections::HashSet;

    #[test]
    fn small_examples() {
        let v: Vec<_> = enumerate_k_subsets(3, 2).unwrap().map(|s| s.to_vec()).collect();
        assert_eq!(v, vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        let v: Vec<_> = enumerate_k_subsets(3, 0).unwrap().collect();
        assert_eq!(v.len(), 1);
        assert!(v[0].is_empty());
        assert_eq!(enumerate_k_subsets(4, 2).unwrap().count(), 6);
    }

    #[test]
    fn counts_and_order_match_binomials() {
        for n in 1..=12usize {
            for k in 0..=n {
                let sets: Vec<_> = enumerate_k_subsets(n, k).unwrap().collect();
                assert_eq!(
                    num_bigint::BigUint::from(sets.len()),
                    binom(n as i64, k as i64).unwrap()
                );
                assert!(sets.windows(2).all(|w| w[0] < w[1]));
                let distinct: HashSet<_> = sets.iter().collect();
                assert_eq!(distinct.len(), sets.len());
                assert!(sets.iter().all(|s| s.len() == k));
            }
        }
    }

    #[test]
    fn wide_universe_enumerates() {
        assert_eq!(enumerate_k_subsets(100, 2).unwrap().count(), 4950);
        let last = enumerate_k_subsets(100, 2).unwrap().last().unwrap();
        assert_eq!(last.to_vec(), vec![99, 100]);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(enumerate_k_subsets(300, 2), Err(Error::ResourceLimit(_))));
        assert!(matches!(
            enumerate_k_subsets_capped(20, 2, 10),
            Err(Error::ResourceLimit(_))
        ));
        assert!(all_subsets(30).is_err());
        assert_eq!(all_subsets(4).unwrap().count(), 16);
    }
}
