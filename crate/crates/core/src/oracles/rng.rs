use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::setcore::KSet;

/// Seeded generator: splitmix64 (state += 0x9e3779b97f4a7c15, then the
/// 0xbf58476d1ce4e5b9 / 0x94d049bb133111eb finalizer). The bounded draws on
/// top of it are defined here so a seed reproduces independently of any
/// sampling library's version.
#[derive(Clone, Debug)]
pub struct Rng(SplitMix64);

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng(SplitMix64::seed_from_u64(seed))
    }

    /// Independent stream number `index` derived from `seed`.
    pub fn stream(seed: u64, index: u64) -> Rng {
        let mut base = Rng::new(seed ^ index.wrapping_mul(0xd1b5_4a32_d192_ed03));
        Rng::new(base.next_u64())
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `0..bound` by rejection; `bound > 0`.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }

    pub fn index(&mut self, len: usize) -> usize {
        self.below(len as u64) as usize
    }

    /// Uniform in `lo..=hi`.
    pub fn between(&mut self, lo: usize, hi: usize) -> usize {
        assert!(lo <= hi, "empty range");
        lo + self.index(hi - lo + 1)
    }

    /// True with probability `num/den`.
    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }

    /// Uniform `k`-subset of `[n]` (Floyd's algorithm).
    pub fn k_subset(&mut self, n: usize, k: usize) -> KSet {
        assert!(k <= n);
        let mut set = KSet::empty(n).expect("universe checked by caller");
        for m in n - k + 1..=n {
            let x = self.between(1, m);
            set = if set.contains(x) { set.with(m) } else { set.with(x) };
        }
        set
    }

    /// Uniform subset of `[n]`.
    pub fn subset(&mut self, n: usize) -> KSet {
        let mut set = KSet::empty(n).expect("universe checked by caller");
        for x in 1..=n {
            if self.chance(1, 2) {
                set = set.with(x);
            }
        }
        set
    }

    /// Uniform permutation of `1..=n`, as the image list `perm[x-1]`.
    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (1..=n).collect();
        for i in (1..n).rev() {
            let j = self.index(i + 1);
            p.swap(i, j);
        }
        p
    }
}
