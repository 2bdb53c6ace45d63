//! The hyperplane-hitting property: every transversal satisfies
//! `Σ α_i |F_i ∩ [ℓ]| >= ℓ + q` at some level `ℓ ∈ S`.

use std::collections::HashMap;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::budget::{Budget, Ticker};
use crate::error::{invalid, Result};
use crate::setcore::{common_denominator, KSet, SetFamily};

use super::{common_universe, Outcome};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HittingSystem {
    weights: Vec<BigRational>,
    offset: BigRational,
    levels: Option<Vec<usize>>,
}

impl HittingSystem {
    pub fn new(weights: Vec<BigRational>, offset: BigRational) -> Result<Self> {
        if weights.len() < 2 {
            return invalid("a hitting system needs at least two weights");
        }
        if weights.iter().any(|w| !w.is_positive()) {
            return invalid("hitting weights must be positive");
        }
        if offset.is_negative() {
            return invalid("hitting offset must be non-negative");
        }
        Ok(HittingSystem {
            weights,
            offset,
            levels: None,
        })
    }

    /// All weights 1 and integer offset `q`.
    pub fn unit(s: usize, q: usize) -> Result<Self> {
        HittingSystem::new(vec![BigRational::one(); s], BigRational::from_integer(q.into()))
    }

    /// Restricts the level set; the default is every level of the universe.
    pub fn with_levels(mut self, levels: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut levels: Vec<usize> = levels.into_iter().collect();
        levels.sort_unstable();
        levels.dedup();
        if levels.is_empty() {
            return invalid("level set must be nonempty");
        }
        if levels[0] == 0 {
            return invalid("levels start at 1");
        }
        self.levels = Some(levels);
        Ok(self)
    }

    /// Same system with level set `S ∩ [j]`, which may be empty.
    pub fn restricted_to_prefix(&self, n: usize, j: usize) -> HittingSystem {
        let levels = match &self.levels {
            Some(ls) => ls.iter().copied().filter(|&l| l <= j).collect(),
            None => (1..=j.min(n)).collect(),
        };
        HittingSystem {
            levels: Some(levels),
            ..self.clone()
        }
    }

    pub fn arity(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn offset(&self) -> &BigRational {
        &self.offset
    }

    pub fn explicit_levels(&self) -> Option<&[usize]> {
        self.levels.as_deref()
    }

    pub fn levels_for(&self, n: usize) -> Result<Vec<usize>> {
        match &self.levels {
            None => Ok((1..=n).collect()),
            Some(ls) => {
                if let Some(&bad) = ls.iter().find(|&&l| l > n) {
                    return invalid(format!("level {bad} exceeds the universe size {n}"));
                }
                Ok(ls.clone())
            }
        }
    }

    /// `Σ α_i x_i` for per-family sizes or biases `x_i`.
    pub fn sigma(&self, scale: &[BigRational]) -> Result<BigRational> {
        if scale.len() != self.arity() {
            return invalid("scale vector does not match the system arity");
        }
        Ok(self
            .weights
            .iter()
            .zip(scale)
            .fold(BigRational::zero(), |acc, (a, x)| acc + a * x))
    }

    /// The first level at which the tuple hits, by direct evaluation.
    pub fn hitting_level(&self, sets: &[KSet]) -> Result<Option<usize>> {
        if sets.len() != self.arity() {
            return invalid("tuple does not match the system arity");
        }
        let n = sets.first().map_or(0, |s| s.universe());
        for l in self.levels_for(n)? {
            let lhs = self.weights.iter().zip(sets).fold(BigRational::zero(), |acc, (a, s)| {
                acc + a * BigRational::from_integer(s.prefix_count_unchecked(l).into())
            });
            if lhs >= BigRational::from_integer(l.into()) + &self.offset {
                return Ok(Some(l));
            }
        }
        Ok(None)
    }
}

/// Whether every transversal of `families` hits; the canonical first miss otherwise.
pub fn check_hitting(system: &HittingSystem, families: &[SetFamily]) -> Result<Outcome<Vec<KSet>>> {
    check_hitting_within(system, families, &Budget::unlimited())
}

pub fn check_hitting_within(
    system: &HittingSystem,
    families: &[SetFamily],
    budget: &Budget,
) -> Result<Outcome<Vec<KSet>>> {
    let n = common_universe(families, 2)?;
    if families.len() != system.arity() {
        return invalid(format!(
            "system has {} weights but {} families were given",
            system.arity(),
            families.len()
        ));
    }
    let levels = system.levels_for(n)?;
    if families.iter().any(|f| f.is_empty()) {
        return Ok(Outcome::Holds);
    }

    // distinct prefix profiles per family, first canonical representative kept
    let profiles: Vec<Vec<(Vec<u16>, KSet)>> = families
        .iter()
        .map(|f| {
            let mut seen: HashMap<Vec<u16>, ()> = HashMap::new();
            let mut out = Vec::new();
            for m in f {
                let p: Vec<u16> = levels.iter().map(|&l| m.prefix_count_unchecked(l) as u16).collect();
                if seen.insert(p.clone(), ()).is_none() {
                    out.push((p, *m));
                }
            }
            out
        })
        .collect();

    // scale everything to integers: D·α_i, D·ℓ + D·q
    let denom = common_denominator(system.weights.iter().chain([&system.offset]));
    let scaled = |r: &BigRational| (r * BigRational::from_integer(denom.clone())).to_integer();
    let weights: Vec<BigInt> = system.weights.iter().map(scaled).collect();
    let offset = scaled(&system.offset);
    let thresholds: Vec<BigInt> = levels.iter().map(|&l| &denom * BigInt::from(l) + &offset).collect();

    let mut ticker = Ticker::new(budget);
    let small = weights.iter().chain(&thresholds).all(|v| v.bits() < 60);
    let found = if small {
        let w: Vec<i128> = weights.iter().map(|v| v.to_i128().unwrap()).collect();
        let t: Vec<i128> = thresholds.iter().map(|v| v.to_i128().unwrap()).collect();
        Search::new(&w, &t, &profiles).run(&mut ticker)?
    } else {
        Search::new(&weights, &thresholds, &profiles).run(&mut ticker)?
    };
    Ok(match found {
        Some(w) => Outcome::Fails(w),
        None => Outcome::Holds,
    })
}

trait Num: Clone + Ord + Zero + From<u16> + Add<Output = Self> + Mul<Output = Self> {}
impl<T: Clone + Ord + Zero + From<u16> + Add<Output = T> + Mul<Output = T>> Num for T {}

struct Search<'a, T> {
    thresholds: &'a [T],
    // contrib[i][p][l]: weighted prefix count of profile p of family i
    contrib: Vec<Vec<Vec<T>>>,
    reps: Vec<Vec<KSet>>,
    // min_rest[d][l]: least total any choice of families d.. can add at level l
    min_rest: Vec<Vec<T>>,
}

impl<'a, T: Num> Search<'a, T> {
    fn new(weights: &[T], thresholds: &'a [T], profiles: &[Vec<(Vec<u16>, KSet)>]) -> Self {
        let levels = thresholds.len();
        let contrib: Vec<Vec<Vec<T>>> = profiles
            .iter()
            .zip(weights)
            .map(|(ps, w)| {
                ps.iter()
                    .map(|(p, _)| p.iter().map(|&c| w.clone() * T::from(c)).collect())
                    .collect()
            })
            .collect();
        let reps = profiles.iter().map(|ps| ps.iter().map(|(_, m)| *m).collect()).collect();
        let s = profiles.len();
        let mut min_rest = vec![vec![T::zero(); levels]; s + 1];
        for d in (0..s).rev() {
            for l in 0..levels {
                let least = contrib[d].iter().map(|c| c[l].clone()).min().unwrap();
                min_rest[d][l] = min_rest[d + 1][l].clone() + least;
            }
        }
        Search {
            thresholds,
            contrib,
            reps,
            min_rest,
        }
    }

    fn run(&self, ticker: &mut Ticker<'_>) -> Result<Option<Vec<KSet>>> {
        let mut chosen = Vec::with_capacity(self.reps.len());
        let partial = vec![T::zero(); self.thresholds.len()];
        Ok(if self.dfs(0, &partial, &mut chosen, ticker)? {
            Some(chosen)
        } else {
            None
        })
    }

    fn dfs(&self, depth: usize, partial: &[T], chosen: &mut Vec<KSet>, ticker: &mut Ticker<'_>) -> Result<bool> {
        let forced_hit =
            (0..partial.len()).any(|l| partial[l].clone() + self.min_rest[depth][l].clone() >= self.thresholds[l]);
        if forced_hit {
            return Ok(false);
        }
        if depth == self.reps.len() {
            return Ok(true);
        }
        let mut next = partial.to_vec();
        for (p, rep) in self.contrib[depth].iter().zip(&self.reps[depth]) {
            ticker.tick()?;
            for l in 0..next.len() {
                next[l] = partial[l].clone() + p[l].clone();
            }
            chosen.push(*rep);
            if self.dfs(depth + 1, &next, chosen, ticker)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setcore::{enumerate_k_subsets, rational};
    use crate::shifting::make_shifted;
    use proptest::prelude::*;

    fn fam(n: usize, k: usize, lists: &[&[usize]]) -> SetFamily {
        SetFamily::from_lists(n, Some(k), lists).unwrap()
    }

    #[test]
    fn examples() {
        let sys = HittingSystem::unit(2, 1).unwrap();
        let f = fam(3, 1, &[&[1]]);
        assert!(check_hitting(&sys, &[f.clone(), f]).unwrap().holds());

        let sys4 = HittingSystem::unit(2, 1).unwrap().with_levels(1..=4).unwrap();
        let g = fam(4, 2, &[&[3, 4]]);
        let out = check_hitting(&sys4, &[g.clone(), g.clone()]).unwrap();
        assert_eq!(out.witness().unwrap(), &vec![g.members()[0], g.members()[0]]);
    }

    #[test]
    fn validation() {
        assert!(HittingSystem::new(vec![rational(1, 1)], rational(0, 1)).is_err());
        assert!(HittingSystem::new(vec![rational(1, 1), rational(0, 1)], rational(0, 1)).is_err());
        assert!(HittingSystem::new(vec![rational(1, 1); 2], rational(-1, 1)).is_err());
        let sys = HittingSystem::unit(2, 1).unwrap();
        assert!(sys.clone().with_levels(Vec::new()).is_err());
        assert!(sys.clone().with_levels([0, 1]).is_err());
        let too_high = sys.clone().with_levels([9]).unwrap();
        let f = fam(4, 1, &[&[1]]);
        assert!(check_hitting(&too_high, &[f.clone(), f.clone()]).is_err());
        assert!(check_hitting(&sys, &[f.clone(), f.clone(), f]).is_err());
    }

    #[test]
    fn empty_level_set_misses_everything() {
        let sys = HittingSystem::unit(2, 1).unwrap().restricted_to_prefix(4, 0);
        let f = fam(4, 1, &[&[1]]);
        assert!(!check_hitting(&sys, &[f.clone(), f]).unwrap().holds());
    }

    #[test]
    fn large_weights_take_the_bigint_path() {
        let huge = BigRational::new(BigInt::one() << 80u32, BigInt::one());
        let sys = HittingSystem::new(vec![huge.clone(), huge], rational(1, 1)).unwrap();
        let f = fam(4, 1, &[&[1]]);
        assert!(check_hitting(&sys, &[f.clone(), f]).unwrap().holds());
        let g = fam(4, 1, &[&[4]]);
        let sys2 = HittingSystem::new(
            vec![rational(1, 1), rational(1, 1)],
            BigRational::new(BigInt::one() << 70u32, BigInt::from(3)),
        )
        .unwrap();
        assert!(!check_hitting(&sys2, &[g.clone(), g]).unwrap().holds());
    }

    fn brute(system: &HittingSystem, families: &[SetFamily]) -> Option<Vec<KSet>> {
        let mut tuples: Vec<Vec<KSet>> = vec![vec![]];
        for f in families {
            tuples = tuples
                .into_iter()
                .flat_map(|p| {
                    f.iter().map(move |m| {
                        let mut q = p.clone();
                        q.push(*m);
                        q
                    })
                })
                .collect();
        }
        tuples.into_iter().find(|t| system.hitting_level(t).unwrap().is_none())
    }

    fn arb_case() -> impl Strategy<Value = (HittingSystem, Vec<SetFamily>)> {
        (4usize..8, 1usize..4, 2usize..4).prop_flat_map(|(n, k, s)| {
            let all: Vec<KSet> = enumerate_k_subsets(n, k.min(n)).unwrap().collect();
            let len = all.len();
            (
                proptest::collection::vec((1i64..5, 1i64..4), s),
                (0i64..6, 1i64..3),
                proptest::collection::vec(proptest::collection::vec(0..len, 0..5), s),
            )
                .prop_map(move |(ws, (qn, qd), idx)| {
                    let sys =
                        HittingSystem::new(ws.into_iter().map(|(a, b)| rational(a, b)).collect(), rational(qn, qd))
                            .unwrap();
                    let fams = idx
                        .into_iter()
                        .map(|is| SetFamily::new(n, Some(k), is.into_iter().map(|i| all[i])).unwrap())
                        .collect();
                    (sys, fams)
                })
        })
    }

    proptest! {
        #[test]
        fn search_matches_brute_force((sys, fams) in arb_case()) {
            prop_assert_eq!(check_hitting(&sys, &fams).unwrap().witness().cloned(), brute(&sys, &fams));
        }

        #[test]
        fn shifted_cross_dependent_pairs_hit(n in 4usize..9, k in 1usize..4, picks in proptest::collection::vec(any::<u16>(), 1..8)) {
            // shifted families inside a cross-dependent template {|F∩[m]| >= c}
            let k = k.min(n / 2).max(1);
            let m = 2 * k - 1;
            let base = SetFamily::level_filtered(n, k, |f| f.prefix_count_unchecked(m) >= k).unwrap();
            let chosen: Vec<KSet> = picks.iter().map(|&p| base.members()[p as usize % base.len()]).collect();
            let f = make_shifted(&SetFamily::new(n, Some(k), chosen).unwrap());
            let fams = vec![f.clone(), f];
            prop_assert!(crate::properties::is_cross_dependent(&fams).unwrap().holds());
            prop_assert!(check_hitting(&HittingSystem::unit(2, 1).unwrap(), &fams).unwrap().holds());
        }
    }
}
