use num_bigint::BigUint;

use crate::error::Result;
use crate::junta::{residual, JuntaSpec};
use crate::oracles::{
    emc_extremal as extremal, gen_cross_dependent, gen_cross_t_pair, gen_cross_t_pair_sized,
    gen_random_cross_dependent, gen_random_shifted, scramble, GeneratorConfig, ManifestEntry, Rng,
};
use crate::properties::{
    are_cross_t_intersecting, bollobas_thomason_check, count_property_t, dichotomy_check, is_cross_dependent_within,
    lemcross_check, lemhls_check, lemshift_check, property_t_count_formula, Outcome,
};
use crate::report::Report;
use crate::setcore::{binom, enumerate_k_subsets, KSet, SetFamily};
use crate::shifting::{is_shifted, make_shifted, shift_family, shift_junta};

use super::{fold, or_skip, run_instances, Instance, Observation, SweepParams};

pub(super) fn config(rng: &mut Rng, n: usize, k: usize, samples: usize) -> GeneratorConfig {
    GeneratorConfig {
        seed: rng.next_u64(),
        n,
        k,
        s: 2,
        samples,
    }
}

/// Random `u < v` in `[n]`, `n >= 2`.
fn shift_pair(rng: &mut Rng, n: usize) -> (usize, usize) {
    let u = rng.between(1, n - 1);
    (u, rng.between(u + 1, n))
}

fn random_family(rng: &mut Rng, n: usize, k: usize, draws: usize) -> Result<SetFamily> {
    SetFamily::new(n, Some(k), (0..draws).map(|_| rng.k_subset(n, k)).collect::<Vec<_>>())
}

pub(super) fn prop_walk_count(p: &SweepParams, report: &mut Report) -> Result<()> {
    let nmax = p.nmax.unwrap_or(14);
    let grid: Vec<(usize, usize, usize)> = (1..=nmax)
        .flat_map(|n| (1..=n).flat_map(move |k| (1..=k).map(move |t| (n, k, t))))
        .collect();
    let results = run_instances(grid.len(), p, |i, _| {
        let (n, k, t) = grid[i];
        let mut inst = Instance::new(format!("n={n} k={k} t'={t}"));
        let count = count_property_t(n, k, t)?;
        let formula = property_t_count_formula(n, k, t)?;
        inst.push(Observation::test("count_equals_formula", count == formula, || {
            format!("count {count} vs formula {formula}")
        }));
        let literal = binom(n as i64, k as i64 - t as i64)?;
        if n + t >= 2 * k {
            inst.push(Observation::test(
                "count_equals_binom_n_k_minus_t",
                count == literal,
                || format!("count {count} vs C(n, k-t') = {literal}"),
            ));
        } else {
            inst.push(Observation::skipped("count_equals_binom_n_k_minus_t", "n < 2k - t'"));
            let agrees = count == literal;
            inst.push(Observation::test("binom_n_k_minus_t_below_2k_minus_t", agrees, || {
                format!("count {count} vs C(n, k-t') = {literal}")
            }));
        }
        Ok(inst)
    });
    fold(
        report,
        &["count_equals_formula", "count_equals_binom_n_k_minus_t"],
        &["binom_n_k_minus_t_below_2k_minus_t"],
        results,
    )?;
    report.notes.push(
        "below n = 2k - t' every k-set has property t' and the count is C(n, k); \
         the closed form C(n, k - t') is checked only where n + t' >= 2k"
            .into(),
    );
    Ok(())
}

/// A shifted cross-`t` pair with `n >= 2 max(a, b)`.
fn lemma_pair(rng: &mut Rng) -> Result<(Instance, SetFamily, SetFamily, usize)> {
    let n = rng.between(4, 12);
    let a = rng.between(1, n / 2);
    let b = rng.between(1, n / 2);
    let t = rng.between(1, a.min(b));
    let samples = rng.between(1, 12);
    let cfg = config(rng, n, a, samples);
    let g = gen_cross_t_pair_sized(&cfg, a, b, t)?;
    let mut inst = Instance::new(format!("seed={} n={n} a={a} b={b} t={t} samples={samples}", cfg.seed));
    inst.generated("cross-t-pair", &cfg, &g);
    let [x, y]: [SetFamily; 2] = g.families.try_into().expect("pair");
    Ok((inst, x, y, t))
}

pub(super) fn prop_dichotomy(p: &SweepParams, report: &mut Report) -> Result<()> {
    let results = run_instances(p.instances.unwrap_or(500), p, |_, rng| {
        let (mut inst, a, b, t) = lemma_pair(rng)?;
        inst.push(Observation::test("dichotomy", dichotomy_check(&a, &b, t)?, String::new));
        Ok(inst)
    });
    fold(report, &["dichotomy"], &[], results)
}

pub(super) fn lemcross(p: &SweepParams, report: &mut Report) -> Result<()> {
    let results = run_instances(p.instances.unwrap_or(500), p, |_, rng| {
        let (mut inst, a, b, t) = lemma_pair(rng)?;
        let out = lemcross_check(&a, &b, t)?;
        let sizes = || format!("|A| = {}, |B| = {}", a.len(), b.len());
        inst.push(Observation::test("size_bound", out.stated, sizes));
        inst.push(Observation::test("size_bound_strengthened", out.strengthened, sizes));
        Ok(inst)
    });
    fold(report, &["size_bound"], &["size_bound_strengthened"], results)
}

pub(super) fn lemshift(p: &SweepParams, report: &mut Report) -> Result<()> {
    let results = run_instances(p.instances.unwrap_or(300), p, |_, rng| {
        let n = rng.between(4, 12);
        let k = rng.between(1, 4.min(n / 2));
        let t = rng.between(1, k.min(3));
        let samples = rng.between(1, 12);
        let cfg = config(rng, n, k, samples);
        let g = gen_cross_t_pair(&cfg, t)?;
        let mut inst = Instance::new(format!("seed={} n={n} k={k} t={t} samples={samples}", cfg.seed));
        inst.generated("cross-t-pair", &cfg, &g);
        for s in 1..=3.min(n) {
            let out = lemshift_check(&g.families[0], &g.families[1], t, s)?;
            let o = match out {
                Outcome::Holds => Observation::test("traces_cross_intersecting", true, String::new),
                Outcome::Fails(v) => Observation::test("traces_cross_intersecting", false, || {
                    format!("s={s} X={} Y={} need {}", v.x, v.y, v.required)
                })
                .witness([v.pair.0, v.pair.1]),
            };
            inst.push(o);
        }
        Ok(inst)
    });
    fold(report, &["traces_cross_intersecting"], &[], results)
}

pub(super) fn lemhls(p: &SweepParams, report: &mut Report) -> Result<()> {
    let xmax = p.xmax.unwrap_or(8).max(4);
    let results = run_instances(p.instances.unwrap_or(200), p, |i, rng| {
        let l = rng.between(2, 3);
        let m = rng.between(l.max(2), xmax);
        let mut ts = Vec::with_capacity(l);
        for idx in 0..l {
            let room = m - ts.iter().sum::<usize>() - (l - idx - 1);
            ts.push(rng.between(1, room.min(4)));
        }
        let samples = rng.between(1, 30);
        let cfg = config(rng, m, ts[0], samples);
        let g = if i % 2 == 0 {
            gen_random_cross_dependent(&cfg, &ts)?
        } else {
            gen_cross_dependent(&cfg, &ts)?
        };
        let mut inst = Instance::new(format!("seed={} |X|={m} t={ts:?} samples={samples}", cfg.seed));
        inst.generated(
            if i % 2 == 0 {
                "random-cross-dependent"
            } else {
                "cross-dependent"
            },
            &cfg,
            &g,
        );
        let sizes: Vec<usize> = g.families.iter().map(SetFamily::len).collect();
        inst.push(Observation::test(
            "some_family_within_bound",
            lemhls_check(&g.families)?,
            || format!("sizes {sizes:?}"),
        ));
        Ok(inst)
    });
    fold(report, &["some_family_within_bound"], &[], results)
}

pub(super) fn shifting(p: &SweepParams, report: &mut Report) -> Result<()> {
    let budget = p.budget;
    let results = run_instances(p.instances.unwrap_or(1000), p, |i, rng| {
        let n = rng.between(4, 12);
        let k = rng.between(1, 4);
        let s = rng.between(2, 3);
        let samples = rng.between(1, 16);
        let mut inst = Instance::new(format!("n={n} k={k} s={s} samples={samples}"));

        let f = random_family(rng, n, k, samples)?;
        inst.drawn(p.seed, i, std::slice::from_ref(&f));
        let (u, v) = shift_pair(rng, n);
        let shifted = shift_family(&f, u, v)?;
        inst.push(Observation::test(
            "shift_preserves_size",
            shifted.len() == f.len(),
            || format!("({u}<-{v}) size {} -> {}", f.len(), shifted.len()),
        ));
        let closed = make_shifted(&f);
        inst.push(
            Observation::test("make_shifted_is_shifted", is_shifted(&closed)?, String::new).witness(f.iter().copied()),
        );

        let t = rng.between(1, k.min(2));
        let cfg = config(rng, n, k, samples);
        let g = gen_cross_t_pair(&cfg, t)?;
        inst.generated("cross-t-pair", &cfg, &g);
        let mut pair = scramble(rng, &g.families)?;
        inst.drawn(p.seed, i, &pair);
        let mut ok = true;
        for _ in 0..3 {
            let (u, v) = shift_pair(rng, n);
            pair = vec![shift_family(&pair[0], u, v)?, shift_family(&pair[1], u, v)?];
            ok &= are_cross_t_intersecting(&pair[0], &pair[1], t)?.holds();
        }
        inst.push(Observation::test("shifts_preserve_cross_t", ok, || {
            format!("seed={} t={t}", cfg.seed)
        }));

        let ks: Vec<usize> = (0..s).map(|_| rng.between(1, k)).collect();
        let cfg = config(rng, n, k, samples);
        let g = gen_random_cross_dependent(&cfg, &ks)?;
        inst.generated("random-cross-dependent", &cfg, &g);
        let mut tuple = g.families;
        let mut dep = Some(true);
        for _ in 0..3 {
            let (u, v) = shift_pair(rng, n);
            tuple = tuple.iter().map(|f| shift_family(f, u, v)).collect::<Result<_>>()?;
            match is_cross_dependent_within(&tuple, &budget) {
                Ok(o) => dep = dep.map(|d| d && o.holds()),
                Err(crate::Error::BudgetExceeded) => dep = None,
                Err(e) => return Err(e),
            }
        }
        inst.push(match dep {
            Some(ok) => Observation::test("shifts_preserve_cross_dependence", ok, || {
                format!("seed={} ks={ks:?}", cfg.seed)
            }),
            None => Observation::skipped("shifts_preserve_cross_dependence", "budget"),
        });

        let draws = rng.between(1, 4);
        let cfg = config(rng, n, k, draws);
        let g = gen_random_shifted(&cfg)?;
        inst.generated("random-shifted", &cfg, &g);
        let fam = g.families[0].clone();
        let size = rng.between(0, 3.min(n));
        let center = rng.k_subset(n, size);
        let elems = center.to_vec();
        let mut defining = Vec::new();
        for mask in 0u32..1 << elems.len() {
            if rng.chance(1, 2) {
                let pick = elems
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| mask >> b & 1 == 1)
                    .map(|(_, &x)| x);
                defining.push(KSet::from_elements(n, pick)?);
            }
        }
        let defining = SetFamily::new(n, None, defining)?;
        let upset = up_closure(&center, &defining)?;
        let (u, v) = shift_pair(rng, n);
        for (name, d) in [
            ("shift_junta_residual", &defining),
            ("shift_junta_residual_upset", &upset),
        ] {
            let before = residual(&fam, &JuntaSpec::new(center, d.clone(), Some(k))?)?.len();
            let (c2, d2) = shift_junta(&center, d, u, v)?;
            let after = residual(&fam, &JuntaSpec::new(c2, d2, Some(k))?)?.len();
            inst.push(Observation::test(name, after <= before, || {
                format!(
                    "seed={} center={center} defining={d:?} ({u}<-{v}): {before} -> {after}",
                    cfg.seed
                )
            }));
        }
        Ok(inst)
    });
    fold(
        report,
        &[
            "shift_preserves_size",
            "make_shifted_is_shifted",
            "shifts_preserve_cross_t",
            "shifts_preserve_cross_dependence",
            "shift_junta_residual_upset",
        ],
        &["shift_junta_residual"],
        results,
    )?;
    report.notes.push(
        "shift_junta_residual (arbitrary defining family) can grow: F = {123} on [4], center {1,3,4}, \
         defining {13}, shift (2<-4) takes the residual from 0 to 1; the bound is checked for defining \
         families closed upward inside the center"
            .into(),
    );
    Ok(())
}

/// Smallest family containing `defining` and closed under supersets inside `center`.
fn up_closure(center: &KSet, defining: &SetFamily) -> Result<SetFamily> {
    let n = center.universe();
    let elems = center.to_vec();
    let subsets = (0u32..1 << elems.len())
        .map(|mask| {
            KSet::from_elements(
                n,
                elems
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| mask >> b & 1 == 1)
                    .map(|(_, &x)| x),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    SetFamily::new(
        n,
        None,
        subsets.into_iter().filter(|e| defining.iter().any(|d| d.is_subset(e))),
    )
}

pub(super) fn bollobas_thomason(p: &SweepParams, report: &mut Report) -> Result<()> {
    let results = run_instances(p.instances.unwrap_or(1000), p, |i, rng| {
        let n = rng.between(1, p.nmax.unwrap_or(10).clamp(1, 16));
        let k = rng.between(1, n);
        let t = rng.between(k, n);
        let draws = rng.between(0, 20);
        let mut inst = Instance::new(format!("i={i} n={n} k={k} t={t} draws={draws}"));
        let g = if i % 2 == 0 {
            let g = random_family(rng, n, k, draws)?;
            inst.drawn(p.seed, i, std::slice::from_ref(&g));
            g
        } else {
            let cfg = config(rng, n, k, draws.min(3));
            let g = gen_random_shifted(&cfg)?;
            inst.generated("random-shifted", &cfg, &g);
            g.families[0].clone()
        };
        inst.push(
            Observation::test("shadow_density", bollobas_thomason_check(&g, t)?, String::new)
                .witness(g.iter().copied()),
        );
        Ok(inst)
    });
    fold(report, &["shadow_density"], &[], results)
}

pub(super) fn emc_extremal(p: &SweepParams, report: &mut Report) -> Result<()> {
    let budget = p.budget;
    let nmax = p.nmax.unwrap_or(12);
    let mut grid = Vec::new();
    for n in 1..=30usize {
        for k in 0..=5.min(n) {
            for s in 1..=5.min(n + 1) {
                grid.push((n, k, s));
            }
        }
    }
    let results = run_instances(grid.len(), p, |i, _| {
        let (n, k, s) = grid[i];
        let mut inst = Instance::new(format!("n={n} k={k} s={s}"));
        let f = extremal(n, k, s)?;
        let expect = binom(n as i64, k as i64)? - binom((n + 1 - s) as i64, k as i64)?;
        inst.push(Observation::test(
            "size_identity",
            BigUint::from(f.len()) == expect,
            || format!("|F| = {} vs {expect}", f.len()),
        ));
        if n > nmax || k == 0 || k > 3 || !(2..=3).contains(&s) {
            return Ok(inst);
        }
        inst.constructed(
            ManifestEntry::new("emc-extremal", None, std::slice::from_ref(&f))
                .param("n", n)
                .param("k", k)
                .param("s", s),
        );
        let copies = vec![f.clone(); s];
        let dep = or_skip(
            "cross_dependent",
            is_cross_dependent_within(&copies, &budget).map(|o| match o {
                Outcome::Holds => Observation::test("cross_dependent", true, String::new),
                Outcome::Fails(w) => {
                    Observation::test("cross_dependent", false, || "rainbow matching".into()).witness(w)
                }
            }),
        )?;
        inst.push(dep);
        if n >= s * k {
            let mut first_bad = None;
            for x in enumerate_k_subsets(n, k)?.filter(|x| x.prefix_count_unchecked(s - 1) == 0) {
                let grown = f.union(&SetFamily::new(n, Some(k), [x])?)?;
                match is_cross_dependent_within(&vec![grown; s], &budget) {
                    Ok(Outcome::Holds) => {
                        first_bad = Some(x);
                        break;
                    }
                    Ok(Outcome::Fails(_)) => {}
                    Err(crate::Error::BudgetExceeded) => {
                        inst.push(Observation::skipped("maximal", "budget"));
                        return Ok(inst);
                    }
                    Err(e) => return Err(e),
                }
            }
            inst.push(
                Observation::test("maximal", first_bad.is_none(), || {
                    "adding a set kept it cross-dependent".into()
                })
                .witness(first_bad),
            );
        }
        Ok(inst)
    });
    fold(report, &["size_identity", "cross_dependent", "maximal"], &[], results)
}

pub(super) fn thm_emc(p: &SweepParams, report: &mut Report) -> Result<()> {
    use crate::junta::Bracket;
    let budget = p.budget;
    let mut grid = Vec::new();
    for (k, s) in [(1usize, 2usize), (1, 3), (2, 2)] {
        // n >= 12 k s ln(e^2 s)
        let lnes = Bracket::of_int(2).add(Bracket::of_int(s as i64).ln());
        let need = Bracket::of_int((12 * k * s) as i64).mul(lnes).ceil_hi() as usize;
        report.value(format!("threshold.k{k}.s{s}"), need);
        for n in [need, need + 3] {
            grid.push((n, k, s));
        }
    }
    let per = p.instances.unwrap_or(24).div_ceil(grid.len()).max(1);
    let results = run_instances(grid.len() * per, p, |i, rng| {
        let (n, k, s) = grid[i / per];
        let samples = rng.between(1, 40);
        let cfg = config(rng, n, k, samples);
        let g = gen_cross_dependent(&cfg, &vec![k; s])?;
        let mut inst = Instance::new(format!("seed={} n={n} k={k} s={s} samples={samples}", cfg.seed));
        inst.generated("cross-dependent", &cfg, &g);
        let min = g.families.iter().map(SetFamily::len).min().unwrap_or(0);
        let bound = binom(n as i64, k as i64)? - binom((n + 1 - s) as i64, k as i64)?;
        inst.push(Observation::test("min_size_bound", BigUint::from(min) <= bound, || {
            format!("min |F_i| = {min} > {bound}")
        }));
        let dep = or_skip(
            "input_cross_dependent",
            is_cross_dependent_within(&g.families, &budget)
                .map(|o| Observation::test("input_cross_dependent", o.holds(), String::new)),
        )?;
        inst.push(dep);
        Ok(inst)
    });
    fold(report, &["min_size_bound", "input_cross_dependent"], &[], results)
}
