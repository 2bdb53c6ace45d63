use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Pow};

use crate::error::{Error, Result};
use crate::junta::{
    compute_regime_j, extract_biased_juntas, extract_hitting_juntas, extract_pair_juntas, extract_pair_juntas_cor,
    junta_member, residual, Check, ExtractOptions, HittingExtraction, LogBase, PairOptions, Regime, Scale,
};
use crate::oracles::{
    gen_cross_agreeing, gen_cross_dependent, gen_cross_t_pair, gen_cross_union, gen_hitting_instance,
};
use crate::properties::{check_hitting_within, HittingSystem, Outcome};
use crate::report::Report;
use crate::setcore::{binom, int_rational, pow, rational, SetFamily};

use super::combinatorics::config;
use super::{fold, or_skip, run_instances, Instance, Observation, SweepParams};

fn push_checks(inst: &mut Instance, checks: &[Check]) {
    for c in checks {
        inst.push(Observation::new(c.name.clone(), c.verdict.clone()));
    }
}

/// Hypothesis violations reported by an extraction become failed observations.
fn extraction<T>(inst: &mut Instance, r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Hypothesis { what, witness }) => {
            inst.push(Observation::test("hypothesis", false, || what).witness(witness));
            Ok(None)
        }
        Err(Error::BudgetExceeded) => {
            inst.push(Observation::skipped("hypothesis", "budget"));
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

pub(super) fn thm_pair(p: &SweepParams, report: &mut Report) -> Result<()> {
    let opts = PairOptions {
        check_hypotheses: true,
        budget: p.budget,
    };
    let (a, t, r) = (3usize, 1usize, 2usize);
    let results = run_instances(p.instances.unwrap_or(250), p, |i, rng| {
        let n = 8 + i % 5;
        let samples = rng.between(1, 16);
        let cfg = config(rng, n, a, samples);
        let g = gen_cross_t_pair(&cfg, t)?;
        let mut inst = Instance::new(format!("seed={} n={n} samples={samples}", cfg.seed));
        inst.generated("cross-t-pair", &cfg, &g);
        let (fa, fb) = (&g.families[0], &g.families[1]);
        let Some(ex) = extraction(&mut inst, extract_pair_juntas(fa, fb, t, r, &opts))? else {
            return Ok(inst);
        };
        push_checks(&mut inst, &ex.checks);
        // recomputed from scratch
        let j = 2 * r - t - 1;
        let bound = (BigUint::one() << j) * binom((n - j) as i64, (a - r) as i64)?;
        for (name, fam, junta) in [
            ("residual_a_recomputed", fa, &ex.junta_a),
            ("residual_b_recomputed", fb, &ex.junta_b),
        ] {
            let res = residual(fam, junta)?.len();
            inst.push(Observation::test(
                name,
                BigUint::from(res) <= bound && j == ex.j,
                || format!("|F \\ J| = {res} vs 2^{j} C({}, {}) = {bound}", n - j, a - r),
            ));
        }
        let (da, db) = (ex.junta_a.defining(), ex.junta_b.defining());
        let cross = da.iter().all(|x| db.iter().all(|y| x.intersection_len(y) >= t));
        inst.push(Observation::test("defining_pairs_exhaustive", cross, String::new));
        Ok(inst)
    });
    fold(
        report,
        &[
            "cross_t_defining",
            "residual_a",
            "residual_b",
            "residual_a_recomputed",
            "residual_b_recomputed",
            "defining_pairs_exhaustive",
        ],
        &[],
        results,
    )
}

pub(super) fn thm_pair_cor(p: &SweepParams, report: &mut Report) -> Result<()> {
    let opts = PairOptions {
        check_hypotheses: true,
        budget: p.budget,
    };
    let results = run_instances(p.instances.unwrap_or(100), p, |i, rng| {
        let n = rng.between(6, 12);
        let a = rng.between(2, 3.min(n / 2));
        let eps = if i % 2 == 0 { rational(1, 2) } else { rational(1, 1) };
        let samples = rng.between(1, 12);
        let cfg = config(rng, n, a, samples);
        let g = gen_cross_t_pair(&cfg, 1)?;
        let mut inst = Instance::new(format!("seed={} n={n} a={a} eps={eps} samples={samples}", cfg.seed));
        inst.generated("cross-t-pair", &cfg, &g);
        let got = extract_pair_juntas_cor(&g.families[0], &g.families[1], 1, 2, &eps, &opts);
        if let Some(ex) = extraction(&mut inst, got)? {
            push_checks(&mut inst, &ex.checks);
        }
        Ok(inst)
    });
    fold(report, &["cross_t_defining", "residual_a", "residual_b"], &[], results)
}

struct HittingCase {
    regime: Regime,
    weights: Vec<BigRational>,
    sizes: Vec<usize>,
    r: BigRational,
    n: usize,
    q: usize,
}

fn hitting_case(i: usize, rng: &mut crate::oracles::Rng) -> Result<HittingCase> {
    let base2 = || LogBase::rational(int_rational(2));
    Ok(match i % 4 {
        0 => HittingCase {
            regime: Regime::III { base: base2()? },
            weights: vec![int_rational(1); 2],
            sizes: vec![2, 2],
            r: int_rational(1),
            n: rng.between(22, 24),
            q: 0,
        },
        1 => HittingCase {
            regime: Regime::III { base: base2()? },
            weights: vec![int_rational(1); 2],
            sizes: vec![2, 2],
            r: int_rational(1),
            n: rng.between(8, 16),
            q: rng.between(0, 1),
        },
        2 => HittingCase {
            regime: Regime::II { eps: rational(1, 3) },
            weights: vec![int_rational(1); 2],
            sizes: vec![2, 3],
            r: rational(1, 2),
            n: rng.between(10, 20),
            q: 1,
        },
        _ => HittingCase {
            regime: Regime::I { eps: rational(1, 4) },
            weights: vec![int_rational(1), int_rational(2)],
            sizes: vec![2, 2],
            r: int_rational(1),
            n: rng.between(10, 18),
            q: 1,
        },
    })
}

fn structural_observations(inst: &mut Instance, ex: &HittingExtraction) -> Result<()> {
    push_checks(inst, &ex.checks);
    for (i, (fpp, junta)) in ex.double_prime.iter().zip(&ex.juntas).enumerate() {
        let mut outside = None;
        for m in fpp {
            if !junta_member(junta, m)? {
                outside = Some(*m);
                break;
            }
        }
        inst.push(
            Observation::test(
                format!("inclusion_recomputed[{}]", i + 1),
                outside.is_none(),
                String::new,
            )
            .witness(outside),
        );
    }
    Ok(())
}

pub(super) fn thm_hitting(p: &SweepParams, report: &mut Report) -> Result<()> {
    let opts = ExtractOptions {
        check_hypotheses: true,
        budget: p.budget,
    };
    let results = run_instances(p.instances.unwrap_or(120), p, |i, rng| {
        let case = hitting_case(i, rng)?;
        let system = HittingSystem::new(case.weights.clone(), int_rational(case.q as i64))?;
        let samples = rng.between(1, 12);
        let cfg = config(rng, case.n, case.sizes[0], samples);
        let sizes: Vec<Option<usize>> = case.sizes.iter().map(|&k| Some(k)).collect();
        let g = gen_hitting_instance(&cfg, &sizes, &system)?;
        let params = compute_regime_j(
            case.regime.clone(),
            &case.weights,
            Scale::Sizes(case.sizes.clone()),
            case.r.clone(),
        )?;
        let mut inst = Instance::new(format!(
            "seed={} regime={} n={} q={} j={} samples={samples}",
            cfg.seed,
            case.regime.name(),
            case.n,
            case.q,
            params.j
        ));
        inst.generated("hitting", &cfg, &g);
        let Some(ex) = extraction(&mut inst, extract_hitting_juntas(&system, &g.families, &params, &opts))? else {
            return Ok(inst);
        };
        structural_observations(&mut inst, &ex)?;
        // |F′_i| n^r <= k_i^r C(n, k_i), integer r only
        let n = case.n;
        for (i, (fp, &k)) in ex.prime.iter().zip(&case.sizes).enumerate() {
            let name = format!("prime_size_recomputed[{}]", i + 1);
            if !ex.admissibility.is_admissible() {
                inst.push(Observation::skipped(name, "inadmissible"));
            } else if !case.r.is_integer() {
                inst.push(Observation::skipped(name, "non-integer r"));
            } else {
                let r: u32 = case.r.to_integer().try_into().expect("small r");
                let lhs = BigUint::from(fp.len()) * BigUint::from(n).pow(r);
                let rhs = BigUint::from(k).pow(r) * binom(n as i64, k as i64)?;
                inst.push(Observation::test(name, lhs <= rhs, || format!("{lhs} > {rhs}")));
            }
        }
        Ok(inst)
    });
    fold(
        report,
        &[
            "hypothesis",
            "inclusion[1]",
            "inclusion[2]",
            "inclusion_recomputed[1]",
            "inclusion_recomputed[2]",
            "transversals_hit",
            "residual_bound[1]",
            "residual_bound[2]",
            "prime_size_recomputed[1]",
            "prime_size_recomputed[2]",
        ],
        &[],
        results,
    )
}

fn hits(check: &str, system: &HittingSystem, families: &[SetFamily], p: &SweepParams) -> Result<Observation> {
    or_skip(
        check,
        check_hitting_within(system, families, &p.budget).map(|o| match o {
            Outcome::Holds => Observation::test(check, true, String::new),
            Outcome::Fails(w) => Observation::test(check, false, || "transversal misses every level".into()).witness(w),
        }),
    )
}

pub(super) fn propsumzero(p: &SweepParams, report: &mut Report) -> Result<()> {
    let results = run_instances(p.instances.unwrap_or(500), p, |i, rng| {
        let n = rng.between(3, 12);
        let s = rng.between(2, 3);
        let ks: Vec<usize> = (0..s).map(|_| rng.between(1, 4.min(n))).collect();
        let samples = rng.between(1, 14);
        let cfg = config(rng, n, ks[0], samples);
        if i % 2 == 0 {
            let g = gen_cross_dependent(&cfg, &ks)?;
            let mut inst = Instance::new(format!("seed={} n={n} ks={ks:?} samples={samples}", cfg.seed));
            inst.generated("cross-dependent", &cfg, &g);
            inst.push(hits(
                "cross_dependent_hits_q1",
                &HittingSystem::unit(s, 1)?,
                &g.families,
                p,
            )?);
            Ok(inst)
        } else {
            let mut q = rng.between(1, 3);
            let g = loop {
                match gen_cross_union(&cfg, &ks, q) {
                    Err(Error::ResourceLimit(_)) if q > 1 => q -= 1,
                    other => break other?,
                }
            };
            let mut inst = Instance::new(format!("seed={} n={n} ks={ks:?} q={q} samples={samples}", cfg.seed));
            inst.generated("cross-union", &cfg, &g);
            inst.push(hits("cross_union_hits_q", &HittingSystem::unit(s, q)?, &g.families, p)?);
            Ok(inst)
        }
    });
    fold(report, &["cross_dependent_hits_q1", "cross_union_hits_q"], &[], results)
}

pub(super) fn cross_agreeing(p: &SweepParams, report: &mut Report) -> Result<()> {
    let results = run_instances(p.instances.unwrap_or(200), p, |_, rng| {
        let n = rng.between(3, 12);
        let s = rng.between(2, 3);
        let ks: Vec<usize> = (0..s).map(|_| rng.between(1, 4.min(n))).collect();
        let t = rng.between(1, *ks.iter().min().unwrap());
        let samples = rng.between(1, 14);
        let cfg = config(rng, n, ks[0], samples);
        let g = gen_cross_agreeing(&cfg, &ks, t)?;
        let mut inst = Instance::new(format!("seed={} n={n} ks={ks:?} t={t} samples={samples}", cfg.seed));
        inst.generated("cross-agreeing", &cfg, &g);
        let w = rational(1, s as i64 - 1);
        let system = HittingSystem::new(vec![w.clone(); s], &w * int_rational(t as i64))?;
        inst.push(hits("agreeing_hits", &system, &g.families, p)?);
        Ok(inst)
    });
    fold(report, &["agreeing_hits"], &[], results)
}

pub(super) fn biased(p: &SweepParams, report: &mut Report) -> Result<()> {
    let mut norm = Instance::new("power sets".to_string());
    for n in 1..=10 {
        for prob in [rational(1, 2), rational(1, 3), rational(2, 7), rational(9, 10)] {
            let mu = SetFamily::power_set(n)?.biased_measure(&prob)?;
            norm.push(Observation::test("normalization", mu == BigRational::one(), || {
                format!("n={n} p={prob}: {mu}")
            }));
        }
    }
    let opts = ExtractOptions {
        check_hypotheses: true,
        budget: p.budget,
    };
    let mut results = vec![Ok(norm)];
    results.extend(run_instances(p.instances.unwrap_or(100), p, |i, rng| {
        let n = rng.between(6, 12);
        let weights = vec![int_rational(1); 2];
        let (regime, ps) = if i % 2 == 0 {
            let choices = [rational(1, 16), rational(1, 20), rational(1, 32)];
            let ps = vec![choices[rng.index(3)].clone(), choices[rng.index(3)].clone()];
            (
                Regime::III {
                    base: LogBase::rational(int_rational(2))?,
                },
                ps,
            )
        } else {
            let choices = [rational(1, 4), rational(1, 8)];
            let ps = vec![choices[rng.index(2)].clone(), choices[rng.index(2)].clone()];
            (Regime::II { eps: rational(1, 3) }, ps)
        };
        let r = int_rational(rng.between(1, 2) as i64);
        let q = rng.between(0, 1);
        let system = HittingSystem::new(weights.clone(), int_rational(q as i64))?;
        let samples = rng.between(1, 20);
        let cfg = config(rng, n, 0, samples);
        let g = gen_hitting_instance(&cfg, &[None, None], &system)?;
        let params = compute_regime_j(regime.clone(), &weights, Scale::Biases(ps.clone()), r.clone())?;
        let mut inst = Instance::new(format!(
            "seed={} regime={} n={n} p=({}, {}) r={r} q={q} samples={samples}",
            cfg.seed,
            regime.name(),
            ps[0],
            ps[1]
        ));
        inst.generated("hitting", &cfg, &g);
        let Some(ex) = extraction(&mut inst, extract_biased_juntas(&system, &g.families, &params, &opts))? else {
            return Ok(inst);
        };
        structural_observations(&mut inst, &ex)?;
        let rr: u32 = r.to_integer().try_into().expect("small r");
        for (i, (res, prob)) in ex.residuals.iter().zip(&ps).enumerate() {
            let name = format!("residual_measure_recomputed[{}]", i + 1);
            if !ex.admissibility.is_admissible() {
                inst.push(Observation::skipped(name, "inadmissible"));
                continue;
            }
            let mu = res.biased_measure(prob)?;
            let cap = pow(prob, rr);
            inst.push(Observation::test(name, mu <= cap, || format!("{mu} > {cap}")));
        }
        Ok(inst)
    }));
    fold(
        report,
        &[
            "normalization",
            "hypothesis",
            "inclusion[1]",
            "inclusion[2]",
            "inclusion_recomputed[1]",
            "inclusion_recomputed[2]",
            "transversals_hit",
            "residual_bound[1]",
            "residual_bound[2]",
            "residual_measure_recomputed[1]",
            "residual_measure_recomputed[2]",
        ],
        &[],
        results,
    )
}
