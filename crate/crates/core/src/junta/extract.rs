//! Juntas for families with the hyperplane-hitting property.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::budget::Budget;
use crate::error::{invalid, Error, Result};
use crate::properties::{check_hitting_within, HittingSystem, Outcome};
use crate::setcore::{binom, format_rational, pow_ge, uint_rational, KSet, SetFamily};

use super::regime::{Admissibility, RegimeParams, Scale};
use super::{residual, Check, JuntaSpec, Verdict};

#[derive(Clone, Copy, Debug)]
pub struct ExtractOptions {
    pub check_hypotheses: bool,
    pub budget: Budget,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            check_hypotheses: true,
            budget: Budget::unlimited(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct HittingExtraction {
    pub params: RegimeParams,
    /// `min(j, n)`.
    pub center_size: usize,
    pub admissibility: Admissibility,
    pub juntas: Vec<JuntaSpec>,
    pub prime: Vec<SetFamily>,
    pub double_prime: Vec<SetFamily>,
    pub residuals: Vec<SetFamily>,
    pub checks: Vec<Check>,
}

/// `(F′, F″)`: `F ∈ F′` iff `σ·|F ∩ [ℓ]| >= ℓ·k` for some `ℓ ∈ (j, n]`.
pub fn split_by_line(
    family: &SetFamily,
    k: &BigRational,
    sigma: &BigRational,
    j: usize,
) -> Result<(SetFamily, SetFamily)> {
    if !k.is_positive() || !sigma.is_positive() {
        return invalid("split slope needs k > 0 and sigma > 0");
    }
    let n = family.universe();
    if j > n {
        return invalid(format!("j = {j} exceeds n = {n}"));
    }
    // σ·c >= ℓ·k  ⇔  (σ_num·k_den)·c >= (k_num·σ_den)·ℓ
    let lhs = sigma.numer() * k.denom();
    let rhs = k.numer() * sigma.denom();
    let above = |f: &KSet| -> bool {
        match (lhs.to_i64(), rhs.to_i64()) {
            (Some(a), Some(b)) => crosses(f, j, |c, l| a as i128 * c as i128 >= b as i128 * l as i128),
            _ => crosses(f, j, |c, l| &lhs * BigInt::from(c) >= &rhs * BigInt::from(l)),
        }
    };
    let prime = family.filter(above);
    let double = family.difference(&prime);
    Ok((prime, double))
}

fn crosses(f: &KSet, j: usize, hit: impl Fn(usize, usize) -> bool) -> bool {
    let n = f.universe();
    let mut c = f.prefix_count_unchecked(j);
    for l in j + 1..=n {
        if f.contains(l) {
            c += 1;
        }
        if hit(c, l) {
            return true;
        }
    }
    false
}

/// Juntas with center `[j]` whose defining families are the `[j]`-traces of `F″_i`.
pub fn extract_hitting_juntas(
    system: &HittingSystem,
    families: &[SetFamily],
    params: &RegimeParams,
    opts: &ExtractOptions,
) -> Result<HittingExtraction> {
    let ks = match &params.scale {
        Scale::Sizes(ks) => ks,
        Scale::Biases(_) => return invalid("uniform extraction needs per-family sizes"),
    };
    for (i, (f, &k)) in families.iter().zip(ks).enumerate() {
        if f.uniformity() != Some(k) {
            return invalid(format!("family {} is not {k}-uniform", i + 1));
        }
    }
    extract(system, families, params, opts)
}

/// Measure version: families are arbitrary subfamilies of `2^[n]`.
pub fn extract_biased_juntas(
    system: &HittingSystem,
    families: &[SetFamily],
    params: &RegimeParams,
    opts: &ExtractOptions,
) -> Result<HittingExtraction> {
    if !params.scale.is_biased() {
        return invalid("biased extraction needs per-family biases");
    }
    extract(system, families, params, opts)
}

fn extract(
    system: &HittingSystem,
    families: &[SetFamily],
    params: &RegimeParams,
    opts: &ExtractOptions,
) -> Result<HittingExtraction> {
    let s = system.arity();
    if families.len() != s || params.arity() != s {
        return invalid(format!(
            "arity mismatch: {s} weights, {} families, {} parameter weights",
            families.len(),
            params.arity()
        ));
    }
    if params.weights != system.weights() {
        return invalid("parameters were computed for different weights");
    }
    let n = families[0].universe();
    if families.iter().any(|f| f.universe() != n) {
        return invalid("families live in different universes");
    }

    let mut checks = Vec::new();
    if opts.check_hypotheses {
        match check_hitting_within(system, families, &opts.budget) {
            Ok(Outcome::Holds) => checks.push(Check::new("hypothesis", Verdict::Pass)),
            Ok(Outcome::Fails(w)) => {
                return Err(Error::Hypothesis {
                    what: "a transversal misses the hyperplane at every level".into(),
                    witness: w,
                })
            }
            Err(Error::BudgetExceeded) => checks.push(Check::new("hypothesis", Verdict::Skipped("budget".into()))),
            Err(e) => return Err(e),
        }
    } else {
        checks.push(Check::new("hypothesis", Verdict::Skipped("disabled".into())));
    }

    let jc = params.j.min(n);
    let center = KSet::prefix(n, jc)?;
    let biased = params.scale.is_biased();
    let xs = params.scale.values();
    let admissibility = params.admissibility(n);

    let mut juntas = Vec::with_capacity(s);
    let mut prime = Vec::with_capacity(s);
    let mut double_prime = Vec::with_capacity(s);
    let mut residuals = Vec::with_capacity(s);
    for (i, f) in families.iter().enumerate() {
        let (num, den) = params.slope(i);
        let (fp, fpp) = split_by_line(f, &num, &den, jc)?;
        let defining = SetFamily::new(n, None, fpp.iter().map(|m| m.intersection(&center)))?;
        let junta = JuntaSpec::new(center, defining, if biased { None } else { f.uniformity() })?;
        let res = residual(f, &junta)?;
        let leaked = res.iter().find(|m| fpp.contains(m));
        checks.push(Check::new(
            format!("inclusion[{}]", i + 1),
            match leaked {
                None => Verdict::Pass,
                Some(m) => Verdict::Fail(format!("{m} ∈ F″ lies outside the junta")),
            },
        ));
        checks.push(Check::new(
            format!("residual_bound[{}]", i + 1),
            residual_bound(&admissibility, biased, n, &xs[i], &params.r, &fp)?,
        ));
        juntas.push(junta);
        prime.push(fp);
        double_prime.push(fpp);
        residuals.push(res);
    }

    let restricted = system.restricted_to_prefix(n, jc);
    let defining: Vec<SetFamily> = juntas.iter().map(|j| j.defining().clone()).collect();
    let hit = match check_hitting_within(&restricted, &defining, &opts.budget) {
        Ok(Outcome::Holds) => Verdict::Pass,
        Ok(Outcome::Fails(w)) => Verdict::Fail(format!(
            "defining transversal ({}) misses every level in S ∩ [{jc}]",
            w.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(", ")
        )),
        Err(Error::BudgetExceeded) => Verdict::Skipped("budget".into()),
        Err(e) => return Err(e),
    };
    checks.push(Check::new("transversals_hit", hit));

    Ok(HittingExtraction {
        params: params.clone(),
        center_size: jc,
        admissibility,
        juntas,
        prime,
        double_prime,
        residuals,
        checks,
    })
}

/// Uniform: `|F′| <= (k/n)^r C(n,k)`. Biased: `μ_p(F′) <= p^r`.
fn residual_bound(
    admissibility: &Admissibility,
    biased: bool,
    n: usize,
    x: &BigRational,
    r: &BigRational,
    fp: &SetFamily,
) -> Result<Verdict> {
    // the reason travels with `HittingExtraction::admissibility`
    if !admissibility.is_admissible() {
        return Ok(Verdict::Skipped("inadmissible".into()));
    }
    if biased {
        let mu = fp.biased_measure(x)?;
        let ok = pow_ge(x, r, &mu)?;
        return Ok(Verdict::from_bool(ok, || {
            format!(
                "mu_p(F') = {} exceeds p^r with p = {}, r = {}",
                format_rational(&mu),
                format_rational(x),
                format_rational(r)
            )
        }));
    }
    let k = x.to_integer().to_i64().unwrap_or(0);
    let total = binom(n as i64, k)?;
    let ratio = BigRational::from_integer(BigInt::from(fp.len())) / uint_rational(&total);
    let base = x / BigRational::from_integer(BigInt::from(n));
    let ok = pow_ge(&base, r, &ratio)?;
    Ok(Verdict::from_bool(ok, || {
        format!(
            "|F'| = {} exceeds (k/n)^r C(n,k) with k = {k}, n = {n}, r = {}",
            fp.len(),
            format_rational(r)
        )
    }))
}
