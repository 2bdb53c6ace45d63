use std::collections::HashSet;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::properties::{
    are_cross_t_intersecting, check_cross_agreeing, check_cross_union, check_hitting, is_cross_dependent, HittingSystem,
};
use crate::setcore::{int_rational, KSet, SetFamily};
use crate::shifting::{is_shifted, make_shifted, shift_family};

use super::rng::Rng;

/// Closure sizes beyond this are refused.
const CLOSURE_CAP: usize = 4_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub s: usize,
    /// Random draws per family.
    pub samples: usize,
}

/// Generated families plus the record of hypothesis checks run on them.
#[derive(Clone, Debug)]
pub struct Generated {
    pub families: Vec<SetFamily>,
    pub transcript: Vec<String>,
}

impl Generated {
    fn new(families: Vec<SetFamily>) -> Generated {
        Generated {
            families,
            transcript: Vec::new(),
        }
    }

    fn verify(&mut self, name: String, ok: bool) -> Result<()> {
        self.transcript
            .push(format!("{name}: {}", if ok { "pass" } else { "fail" }));
        if ok {
            Ok(())
        } else {
            Err(Error::Hypothesis {
                what: format!("generated families fail {name}"),
                witness: Vec::new(),
            })
        }
    }

    fn verify_shifted(&mut self) -> Result<()> {
        for i in 0..self.families.len() {
            if self.families[i].uniformity().is_some() {
                let ok = is_shifted(&self.families[i])?;
                self.verify(format!("is_shifted[{i}]"), ok)?;
            }
        }
        Ok(())
    }
}

/// All `k`-sets dominated elementwise by some sample, computed by closing
/// under single left moves `x -> x-1`.
pub fn shifted_closure(n: usize, k: usize, samples: &[KSet]) -> Result<SetFamily> {
    if let Some(bad) = samples.iter().find(|s| s.universe() != n || s.len() != k) {
        return invalid(format!("sample {bad} is not a {k}-subset of [{n}]"));
    }
    let mut seen: HashSet<KSet> = samples.iter().copied().collect();
    let mut stack: Vec<KSet> = seen.iter().copied().collect();
    while let Some(set) = stack.pop() {
        for v in set.elements().filter(|&v| v > 1) {
            if !set.contains(v - 1) {
                let next = set.without(v).with(v - 1);
                if seen.insert(next) {
                    stack.push(next);
                }
            }
        }
        if seen.len() > CLOSURE_CAP {
            return Err(Error::ResourceLimit(format!(
                "shifted closure exceeds {CLOSURE_CAP} sets"
            )));
        }
    }
    SetFamily::new(n, Some(k), seen)
}

/// Closure of `config.samples` uniform random `k`-sets.
pub fn gen_random_shifted(config: &GeneratorConfig) -> Result<Generated> {
    let GeneratorConfig { n, k, .. } = *config;
    if k > n {
        return invalid(format!("k = {k} exceeds n = {n}"));
    }
    let mut rng = Rng::new(config.seed);
    let samples: Vec<KSet> = (0..config.samples).map(|_| rng.k_subset(n, k)).collect();
    let mut out = Generated::new(vec![shifted_closure(n, k, &samples)?]);
    out.verify_shifted()?;
    Ok(out)
}

/// Applies one random relabeling of `[n]` to every family.
pub fn scramble(rng: &mut Rng, families: &[SetFamily]) -> Result<Vec<SetFamily>> {
    let Some(n) = families.first().map(SetFamily::universe) else {
        return Ok(Vec::new());
    };
    let perm = rng.permutation(n);
    families.iter().map(|f| f.permuted(&perm)).collect()
}

fn prefix_template(n: usize, k: Option<usize>, m: usize, c: usize) -> Result<SetFamily> {
    let keep = |f: &KSet| f.prefix_count_unchecked(m) >= c;
    match k {
        Some(k) => SetFamily::level_filtered(n, k, keep),
        None => Ok(SetFamily::power_set(n)?.filter(keep)),
    }
}

/// `draws` picks with replacement from `pool`.
fn sample_from(rng: &mut Rng, pool: &SetFamily, draws: usize) -> SetFamily {
    let members = pool.members();
    let picked: Vec<KSet> = if members.is_empty() {
        Vec::new()
    } else {
        (0..draws).map(|_| members[rng.index(members.len())]).collect()
    };
    SetFamily::new(pool.universe(), pool.uniformity(), picked).expect("members come from the pool")
}

/// Random `c` with `c_i <= caps_i` and `Σ w_i c_i >= need`, if possible.
fn thresholds(rng: &mut Rng, caps: &[usize], weights: &[BigRational], need: &BigRational) -> Option<Vec<usize>> {
    let total = |c: &[usize]| -> BigRational {
        c.iter()
            .zip(weights)
            .map(|(&ci, w)| w * int_rational(ci as i64))
            .fold(BigRational::zero(), |a, b| a + b)
    };
    if total(caps) < *need {
        return None;
    }
    let mut c: Vec<usize> = caps.iter().map(|&cap| rng.between(0, cap)).collect();
    while total(&c) < *need {
        let open: Vec<usize> = (0..c.len()).filter(|&i| c[i] < caps[i]).collect();
        c[open[rng.index(open.len())]] += 1;
    }
    Some(c)
}

/// Families `{F : |F ∩ [m]| >= c_i}` (randomly thinned, then closed downward) with
/// `Σ w_i c_i >= need(m)`, for a random feasible `m`.
fn prefix_tuple(
    rng: &mut Rng,
    n: usize,
    sizes: &[Option<usize>],
    weights: &[BigRational],
    need: impl Fn(usize) -> BigRational,
    draws: usize,
) -> Result<Option<Vec<SetFamily>>> {
    if let Some(k) = sizes.iter().flatten().find(|&&k| k > n) {
        return invalid(format!("uniformity {k} exceeds n = {n}"));
    }
    let caps = |m: usize| -> Vec<usize> { sizes.iter().map(|k| k.map_or(m, |k| k.min(m))).collect() };
    let feasible: Vec<usize> = (1..=n)
        .filter(|&m| {
            let total: BigRational = caps(m)
                .iter()
                .zip(weights)
                .map(|(&c, w)| w * int_rational(c as i64))
                .fold(BigRational::zero(), |a, b| a + b);
            total >= need(m)
        })
        .collect();
    if feasible.is_empty() {
        return Ok(None);
    }
    let m = feasible[rng.index(feasible.len())];
    let c = thresholds(rng, &caps(m), weights, &need(m)).expect("m is feasible");
    let mut families = Vec::with_capacity(sizes.len());
    for (i, &k) in sizes.iter().enumerate() {
        let pool = prefix_template(n, k, m, c[i])?;
        let picked = sample_from(rng, &pool, draws);
        // templates are shifted, so closing the sample keeps it inside
        families.push(match k {
            Some(k) => shifted_closure(n, k, picked.members())?,
            None => make_shifted(&picked),
        });
    }
    Ok(Some(families))
}

/// Applies the same shifts to every family until all are shifted. Unlike
/// shifting each family separately this preserves cross properties. Sweeps
/// all pairs repeatedly rather than restarting after each change.
pub fn make_shifted_jointly(families: &[SetFamily]) -> Result<Vec<SetFamily>> {
    let Some(n) = families.first().map(SetFamily::universe) else {
        return Ok(Vec::new());
    };
    let mut current = families.to_vec();
    loop {
        let mut changed = false;
        for u in 1..n {
            for v in u + 1..=n {
                let moved = current
                    .iter()
                    .map(|f| shift_family(f, u, v))
                    .collect::<Result<Vec<_>>>()?;
                if moved != current {
                    current = moved;
                    changed = true;
                }
            }
        }
        if !changed {
            return Ok(current);
        }
    }
}

/// Random sets, with members of each violation deleted until `violation`
/// finds none; `sizes` as in [`prefix_tuple`].
fn random_by_deletion(
    rng: &mut Rng,
    n: usize,
    sizes: &[Option<usize>],
    draws: usize,
    violation: impl Fn(&[SetFamily]) -> Result<Option<Vec<KSet>>>,
) -> Result<Vec<SetFamily>> {
    let mut families = sizes
        .iter()
        .map(|&k| {
            let picked: Vec<KSet> = (0..draws)
                .map(|_| match k {
                    Some(k) => rng.k_subset(n, k),
                    None => rng.subset(n),
                })
                .collect();
            SetFamily::new(n, k, picked)
        })
        .collect::<Result<Vec<_>>>()?;
    while let Some(witness) = violation(&families)? {
        let i = rng.index(families.len());
        let victim = witness[i];
        families[i] = families[i].filter(|f| *f != victim);
    }
    Ok(families)
}

/// `raw` shifted jointly, unless deletion emptied one of its families.
fn nonempty_or(raw: Vec<SetFamily>, fallback: Vec<SetFamily>) -> Result<Vec<SetFamily>> {
    if raw.iter().any(SetFamily::is_empty) {
        Ok(fallback)
    } else {
        make_shifted_jointly(&raw)
    }
}

fn infeasible<T>(what: &str) -> Result<T> {
    Err(Error::ResourceLimit(format!(
        "no {what} template exists for these parameters"
    )))
}

fn unit_weights(s: usize) -> Vec<BigRational> {
    vec![BigRational::one(); s]
}

/// Shifted cross-`t`-intersecting pair, `k`-uniform on both sides.
pub fn gen_cross_t_pair(config: &GeneratorConfig, t: usize) -> Result<Generated> {
    gen_cross_t_pair_sized(config, config.k, config.k, t)
}

/// Shifted cross-`t`-intersecting pair with uniformities `a` and `b`: a
/// thinned template pair, a template with a thinned maximal partner, or a
/// random pair cleaned of violations and then shifted jointly (a third each).
pub fn gen_cross_t_pair_sized(config: &GeneratorConfig, a: usize, b: usize, t: usize) -> Result<Generated> {
    if t == 0 {
        return invalid("t must be >= 1");
    }
    let n = config.n;
    let mut rng = Rng::new(config.seed);
    let need = |m: usize| int_rational((m + t) as i64);
    let Some(mut pair) = prefix_tuple(&mut rng, n, &[Some(a), Some(b)], &unit_weights(2), need, config.samples)? else {
        return infeasible("cross-t-intersecting");
    };
    match rng.below(3) {
        0 => {}
        1 => {
            let left = &pair[0];
            let partner = SetFamily::level_filtered(n, b, |g| left.iter().all(|f| f.intersection_len(g) >= t))?;
            pair[1] = shifted_closure(n, b, sample_from(&mut rng, &partner, config.samples).members())?;
        }
        _ => {
            let raw = random_by_deletion(&mut rng, n, &[Some(a), Some(b)], config.samples, |p| {
                Ok(are_cross_t_intersecting(&p[0], &p[1], t)?
                    .witness()
                    .map(|&(x, y)| vec![x, y]))
            })?;
            if raw.iter().all(|f| !f.is_empty()) {
                pair = make_shifted_jointly(&raw)?;
            }
        }
    }
    let mut out = Generated::new(pair);
    out.verify_shifted()?;
    let ok = are_cross_t_intersecting(&out.families[0], &out.families[1], t)?.holds();
    out.verify(format!("cross_t({t})"), ok)?;
    Ok(out)
}

fn check_arity(ks: &[usize]) -> Result<()> {
    if ks.len() < 2 {
        return invalid("need at least two families");
    }
    Ok(())
}

/// Shifted cross-dependent tuple: either a thinned template with `Σ c_i > m`
/// (two members must share a prefix element) or a cleaned random tuple
/// shifted jointly.
pub fn gen_cross_dependent(config: &GeneratorConfig, ks: &[usize]) -> Result<Generated> {
    check_arity(ks)?;
    let mut rng = Rng::new(config.seed);
    let sizes: Vec<Option<usize>> = ks.iter().map(|&k| Some(k)).collect();
    let need = |m: usize| int_rational(m as i64 + 1);
    let Some(template) = prefix_tuple(
        &mut rng,
        config.n,
        &sizes,
        &unit_weights(ks.len()),
        need,
        config.samples,
    )?
    else {
        return infeasible("cross-dependent");
    };
    let families = if rng.chance(1, 2) {
        let raw = random_by_deletion(&mut rng, config.n, &sizes, config.samples, |f| {
            Ok(is_cross_dependent(f)?.witness().cloned())
        })?;
        nonempty_or(raw, template)?
    } else {
        template
    };
    let mut out = Generated::new(families);
    out.verify_shifted()?;
    let ok = is_cross_dependent(&out.families)?.holds();
    out.verify("cross_dependent".into(), ok)?;
    Ok(out)
}

/// Shifted tuple with `|F_1 ∪ ... ∪ F_s| <= Σ k_i - q` on every transversal.
pub fn gen_cross_union(config: &GeneratorConfig, ks: &[usize], q: usize) -> Result<Generated> {
    check_arity(ks)?;
    if q == 0 {
        return invalid("q must be >= 1");
    }
    let mut rng = Rng::new(config.seed);
    let sizes: Vec<Option<usize>> = ks.iter().map(|&k| Some(k)).collect();
    let need = |m: usize| int_rational((m + q) as i64);
    let Some(template) = prefix_tuple(
        &mut rng,
        config.n,
        &sizes,
        &unit_weights(ks.len()),
        need,
        config.samples,
    )?
    else {
        return infeasible("cross-union");
    };
    let families = if rng.chance(1, 2) {
        let raw = random_by_deletion(&mut rng, config.n, &sizes, config.samples, |f| {
            Ok(check_cross_union(f, q)?.witness().cloned())
        })?;
        nonempty_or(raw, template)?
    } else {
        template
    };
    let mut out = Generated::new(families);
    out.verify_shifted()?;
    let ok = check_cross_union(&out.families, q)?.holds();
    out.verify(format!("cross_union({q})"), ok)?;
    Ok(out)
}

/// Shifted tuple with `|F_1 ∩ ... ∩ F_s| >= t` on every transversal.
pub fn gen_cross_agreeing(config: &GeneratorConfig, ks: &[usize], t: usize) -> Result<Generated> {
    check_arity(ks)?;
    if t == 0 {
        return invalid("t must be >= 1");
    }
    let s = ks.len();
    let mut rng = Rng::new(config.seed);
    let sizes: Vec<Option<usize>> = ks.iter().map(|&k| Some(k)).collect();
    let need = |m: usize| int_rational(((s - 1) * m + t) as i64);
    let Some(template) = prefix_tuple(&mut rng, config.n, &sizes, &unit_weights(s), need, config.samples)? else {
        return infeasible("cross-agreeing");
    };
    let families = if rng.chance(1, 2) {
        let raw = random_by_deletion(&mut rng, config.n, &sizes, config.samples, |f| {
            Ok(check_cross_agreeing(f, t)?.witness().cloned())
        })?;
        nonempty_or(raw, template)?
    } else {
        template
    };
    let mut out = Generated::new(families);
    out.verify_shifted()?;
    let ok = check_cross_agreeing(&out.families, t)?.holds();
    out.verify(format!("cross_agreeing({t})"), ok)?;
    Ok(out)
}

/// Shifted tuple hitting `Σ α_i y_i = x + q`; `None` sizes give families of
/// arbitrary sets (universe capped by the power-set limit).
pub fn gen_hitting_instance(
    config: &GeneratorConfig,
    sizes: &[Option<usize>],
    system: &HittingSystem,
) -> Result<Generated> {
    if sizes.len() != system.arity() {
        return invalid("one size per weight is required");
    }
    if system.explicit_levels().is_some() {
        return invalid("generated instances hit on the full level set");
    }
    let mut rng = Rng::new(config.seed);
    let q = system.offset().clone();
    let need = |m: usize| int_rational(m as i64) + &q;
    let Some(families) = prefix_tuple(&mut rng, config.n, sizes, system.weights(), need, config.samples)? else {
        return infeasible("hitting");
    };
    let mut out = Generated::new(families);
    out.verify_shifted()?;
    let ok = check_hitting(system, &out.families)?.holds();
    out.verify("hitting".into(), ok)?;
    Ok(out)
}

/// Unshifted cross-dependent tuple: random `k_i`-sets, then members of each
/// rainbow matching found are deleted until none is left.
pub fn gen_random_cross_dependent(config: &GeneratorConfig, ks: &[usize]) -> Result<Generated> {
    check_arity(ks)?;
    let n = config.n;
    if let Some(k) = ks.iter().find(|&&k| k > n) {
        return invalid(format!("uniformity {k} exceeds n = {n}"));
    }
    let mut rng = Rng::new(config.seed);
    let sizes: Vec<Option<usize>> = ks.iter().map(|&k| Some(k)).collect();
    let families = random_by_deletion(&mut rng, n, &sizes, config.samples, |f| {
        Ok(is_cross_dependent(f)?.witness().cloned())
    })?;
    let mut out = Generated::new(families);
    let ok = is_cross_dependent(&out.families)?.holds();
    out.verify("cross_dependent".into(), ok)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::Rng;
    use super::*;
    use crate::setcore::rational;
    use proptest::prelude::*;

    fn set(n: usize, xs: &[usize]) -> KSet {
        KSet::from_elements(n, xs.iter().copied()).unwrap()
    }

    fn cfg(seed: u64, n: usize, k: usize, samples: usize) -> GeneratorConfig {
        GeneratorConfig {
            seed,
            n,
            k,
            s: 2,
            samples,
        }
    }

    #[test]
    fn closure_example() {
        let got = shifted_closure(4, 2, &[set(4, &[2, 4])]).unwrap();
        let want = SetFamily::from_lists(4, Some(2), &[&[1, 2], &[1, 3], &[1, 4], &[2, 3], &[2, 4]]).unwrap();
        assert_eq!(got, want);
        assert!(shifted_closure(4, 2, &[]).unwrap().is_empty());
        assert!(shifted_closure(4, 2, &[set(4, &[1])]).is_err());
    }

    #[test]
    fn random_shifted_is_deterministic() {
        let c = cfg(7, 10, 3, 4);
        let a = gen_random_shifted(&c).unwrap();
        let b = gen_random_shifted(&c).unwrap();
        assert_eq!(a.families, b.families);
        assert_eq!(a.transcript, vec!["is_shifted[0]: pass".to_string()]);
        assert!(gen_random_shifted(&cfg(7, 10, 3, 0)).unwrap().families[0].is_empty());
    }

    #[test]
    fn cross_t_infeasible() {
        assert!(matches!(
            gen_cross_t_pair(&cfg(1, 8, 2, 5), 3),
            Err(Error::ResourceLimit(_))
        ));
        assert!(gen_cross_t_pair(&cfg(1, 8, 2, 5), 2).is_ok());
    }

    #[test]
    fn template_example_verifies() {
        let t = prefix_template(5, Some(3), 3, 2).unwrap();
        assert!(is_shifted(&t).unwrap());
        assert!(are_cross_t_intersecting(&t, &t, 1).unwrap().holds());
    }

    #[test]
    fn hitting_nonuniform() {
        let system = HittingSystem::new(vec![rational(1, 1), rational(3, 2)], rational(1, 2)).unwrap();
        let g = gen_hitting_instance(&cfg(4, 8, 0, 12), &[None, Some(3)], &system).unwrap();
        assert_eq!(g.families[0].uniformity(), None);
        assert!(g.transcript.iter().any(|l| l == "hitting: pass"));
    }

    #[test]
    fn scramble_keeps_sizes() {
        let g = gen_cross_dependent(&cfg(2, 9, 3, 10), &[3, 2]).unwrap();
        let mut rng = Rng::new(0);
        let s = scramble(&mut rng, &g.families).unwrap();
        assert_eq!(s[0].len(), g.families[0].len());
        assert!(is_cross_dependent(&s).unwrap().holds());
    }

    #[test]
    fn joint_shifting_keeps_cross_dependence() {
        for seed in 0..20 {
            let g = gen_random_cross_dependent(&cfg(seed, 8, 2, 12), &[2, 3, 2]).unwrap();
            let shifted = make_shifted_jointly(&g.families).unwrap();
            for (f, h) in g.families.iter().zip(&shifted) {
                assert_eq!(f.len(), h.len());
                assert!(is_shifted(h).unwrap());
            }
            assert!(is_cross_dependent(&shifted).unwrap().holds());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn generators_verify(seed in any::<u64>(), n in 4usize..=10, k in 1usize..=3, t in 1usize..=2, q in 1usize..=2) {
            let c = cfg(seed, n, k, 8);
            if t <= k {
                let g = gen_cross_t_pair(&c, t).unwrap();
                prop_assert!(!g.families[0].is_empty() && !g.families[1].is_empty());
            }
            gen_cross_dependent(&c, &[k, k, 1]).unwrap();
            gen_random_cross_dependent(&c, &[k, k]).unwrap();
            match gen_cross_union(&c, &[k, k], q) {
                Ok(_) | Err(Error::ResourceLimit(_)) => {}
                Err(e) => prop_assert!(false, "{e}"),
            }
            gen_cross_agreeing(&c, &[k, k], t.min(k)).unwrap();
        }
    }
}
