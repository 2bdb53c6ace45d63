//! Cross `t`-intersecting pairs of juntas with center `[j]`, `j = 2r − t − 1`.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::budget::Budget;
use crate::error::{invalid, Error, Result};
use crate::properties::{are_cross_t_intersecting, Outcome};
use crate::setcore::{binom, format_rational, int_rational, KSet, SetFamily};
use crate::shifting::first_unshifted;

use super::regime::cor_constants;
use super::{residual, Check, JuntaSpec, Verdict};

#[derive(Clone, Copy, Debug)]
pub struct PairOptions {
    pub check_hypotheses: bool,
    pub budget: Budget,
}

impl Default for PairOptions {
    fn default() -> Self {
        PairOptions {
            check_hypotheses: true,
            budget: Budget::unlimited(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PairExtraction {
    pub j: usize,
    /// The `r` used in the thresholds (`⌈c·r⌉` for the corollary form).
    pub r: usize,
    pub threshold_a: BigUint,
    pub threshold_b: BigUint,
    pub junta_a: JuntaSpec,
    pub junta_b: JuntaSpec,
    pub residual_a: SetFamily,
    pub residual_b: SetFamily,
    pub checks: Vec<Check>,
}

fn pair_sizes(a: &SetFamily, b: &SetFamily) -> Result<(usize, usize, usize)> {
    if a.universe() != b.universe() {
        return invalid("families live in different universes");
    }
    let ka = a
        .uniformity()
        .ok_or_else(|| Error::InvalidArgument("A must be uniform".into()))?;
    let kb = b
        .uniformity()
        .ok_or_else(|| Error::InvalidArgument("B must be uniform".into()))?;
    Ok((a.universe(), ka, kb))
}

fn check_hypotheses(a: &SetFamily, b: &SetFamily, t: usize) -> Result<()> {
    for (name, f) in [("A", a), ("B", b)] {
        if let Some((set, u, v)) = first_unshifted(f) {
            return Err(Error::Hypothesis {
                what: format!("{name} is not shifted: S_({u}<-{v}) moves {set} out of the family"),
                witness: vec![set],
            });
        }
    }
    if let Outcome::Fails((x, y)) = are_cross_t_intersecting(a, b, t)? {
        return Err(Error::Hypothesis {
            what: format!("A and B are not cross {t}-intersecting"),
            witness: vec![x, y],
        });
    }
    Ok(())
}

/// `{X ⊆ [j] : |F(X, [j])| > threshold}`; traces never seen have size 0.
fn heavy_traces(f: &SetFamily, j: usize, threshold: &BigUint) -> Result<SetFamily> {
    let n = f.universe();
    let ground = KSet::prefix(n, j)?;
    let mut counts: HashMap<KSet, usize> = HashMap::new();
    for m in f {
        *counts.entry(m.intersection(&ground)).or_default() += 1;
    }
    SetFamily::new(
        n,
        None,
        counts
            .into_iter()
            .filter(|(_, c)| BigUint::from(*c) > *threshold)
            .map(|(x, _)| x),
    )
}

fn defining_cross_t(ja: &JuntaSpec, jb: &JuntaSpec, t: usize) -> Result<Verdict> {
    Ok(match are_cross_t_intersecting(ja.defining(), jb.defining(), t)? {
        Outcome::Holds => Verdict::Pass,
        Outcome::Fails((x, y)) => Verdict::Fail(format!("|{x} ∩ {y}| < {t}")),
    })
}

fn size_bound(name: &str, actual: usize, bound: &BigUint) -> Check {
    Check::new(
        name,
        Verdict::from_bool(BigUint::from(actual) <= *bound, || format!("{actual} exceeds {bound}")),
    )
}

struct Built {
    threshold_a: BigUint,
    threshold_b: BigUint,
    junta_a: JuntaSpec,
    junta_b: JuntaSpec,
    residual_a: SetFamily,
    residual_b: SetFamily,
}

fn build(a: &SetFamily, b: &SetFamily, r: usize, j: usize) -> Result<Built> {
    let (n, ka, kb) = pair_sizes(a, b)?;
    let rest = (n - j) as i64;
    let threshold_a = binom(rest, ka as i64 - r as i64)?;
    let threshold_b = binom(rest, kb as i64 - r as i64)?;
    let center = KSet::prefix(n, j)?;
    let junta_a = JuntaSpec::new(center, heavy_traces(a, j, &threshold_a)?, Some(ka))?;
    let junta_b = JuntaSpec::new(center, heavy_traces(b, j, &threshold_b)?, Some(kb))?;
    let residual_a = residual(a, &junta_a)?;
    let residual_b = residual(b, &junta_b)?;
    Ok(Built {
        threshold_a,
        threshold_b,
        junta_a,
        junta_b,
        residual_a,
        residual_b,
    })
}

/// Juntas `J*`, `I*` by the strict threshold rule. Checks: defining families
/// cross `t`-intersecting and `|A ∖ J| <= 2^j C(n−j, a−r)` (same for `B`, `I`).
pub fn extract_pair_juntas(
    a: &SetFamily,
    b: &SetFamily,
    t: usize,
    r: usize,
    opts: &PairOptions,
) -> Result<PairExtraction> {
    let (n, ka, kb) = pair_sizes(a, b)?;
    if !(ka >= kb && kb >= r && r > t && t > 0) {
        return invalid(format!("need a >= b >= r > t > 0, got a={ka}, b={kb}, r={r}, t={t}"));
    }
    if n < 2 * ka {
        return invalid(format!("need n >= 2a, got n={n}, a={ka}"));
    }
    if opts.check_hypotheses {
        check_hypotheses(a, b, t)?;
    }
    let j = 2 * r - t - 1;
    let built = build(a, b, r, j)?;
    let pow2 = BigUint::from(1u8) << j;
    let checks = vec![
        Check::new("cross_t_defining", defining_cross_t(&built.junta_a, &built.junta_b, t)?),
        size_bound("residual_a", built.residual_a.len(), &(&pow2 * &built.threshold_a)),
        size_bound("residual_b", built.residual_b.len(), &(&pow2 * &built.threshold_b)),
    ];
    Ok(PairExtraction {
        j,
        r,
        threshold_a: built.threshold_a,
        threshold_b: built.threshold_b,
        junta_a: built.junta_a,
        junta_b: built.junta_b,
        residual_a: built.residual_a,
        residual_b: built.residual_b,
        checks,
    })
}

/// The constant-free form: the construction runs with `⌈c·r⌉` in place of `r`
/// (center capped at `[n]`), and the residuals are checked against
/// `C(n−r, a−r)` and `C(n−r, b−r)` when `n >= (2+ε)a`.
pub fn extract_pair_juntas_cor(
    a: &SetFamily,
    b: &SetFamily,
    t: usize,
    r: usize,
    eps: &num_rational::BigRational,
    opts: &PairOptions,
) -> Result<PairExtraction> {
    let (n, ka, kb) = pair_sizes(a, b)?;
    if !(ka >= kb && kb >= r && r > t && t > 0) {
        return invalid(format!("need a >= b >= r > t > 0, got a={ka}, b={kb}, r={r}, t={t}"));
    }
    let c = cor_constants(eps)?;
    if opts.check_hypotheses {
        check_hypotheses(a, b, t)?;
    }
    let cr = (c.hi * r as f64).ceil();
    let cr = cr
        .to_usize()
        .filter(|&v| v <= 4 * crate::setcore::MAX_UNIVERSE)
        .ok_or_else(|| Error::ResourceLimit(format!("c·r = {cr} is out of range")))?;
    let j = (2 * cr - t - 1).min(n);
    let built = build(a, b, cr, j)?;
    let admissible = int_rational(n as i64) >= (int_rational(2) + eps) * int_rational(ka as i64);
    let bound_check = |name: &str, actual: usize, k: usize| -> Result<Check> {
        if !admissible {
            return Ok(Check::new(
                name,
                Verdict::Skipped(format!("inadmissible: n < (2+{})a", format_rational(eps))),
            ));
        }
        let bound = binom(n as i64 - r as i64, k as i64 - r as i64)?;
        Ok(size_bound(name, actual, &bound))
    };
    let checks = vec![
        Check::new("cross_t_defining", defining_cross_t(&built.junta_a, &built.junta_b, t)?),
        bound_check("residual_a", built.residual_a.len(), ka)?,
        bound_check("residual_b", built.residual_b.len(), kb)?,
    ];
    Ok(PairExtraction {
        j,
        r: cr,
        threshold_a: built.threshold_a,
        threshold_b: built.threshold_b,
        junta_a: built.junta_a,
        junta_b: built.junta_b,
        residual_a: built.residual_a,
        residual_b: built.residual_b,
        checks,
    })
}
