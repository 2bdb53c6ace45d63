use num_rational::BigRational;
use num_traits::{FromPrimitive, One};

use crate::error::Result;
use crate::junta::{compute_regime_j, cor111_params, Bracket, LogBase, Regime, Scale};
use crate::report::Report;
use crate::setcore::{int_rational, rational};

use super::exact_log::{ln, Span};
use super::{fold, run_instances, Instance, Observation, SweepParams};

fn bases() -> Vec<LogBase> {
    let mut out: Vec<LogBase> = [
        rational(2, 1),
        rational(5, 2),
        rational(3, 1),
        rational(4, 1),
        rational(10, 1),
    ]
    .into_iter()
    .map(|c| LogBase::rational(c).expect("valid base"))
    .collect();
    out.push(LogBase::E);
    out
}

fn ln_base(base: &LogBase) -> Span {
    match base {
        LogBase::E => Span::exact(BigRational::one()),
        LogBase::Rational(c) => ln(c),
    }
}

fn to_rational(x: f64) -> BigRational {
    BigRational::from_f64(x).expect("finite")
}

/// The f64 enclosure must meet the exact one.
fn consistent(b: &Bracket, exact: &Span) -> bool {
    to_rational(b.lo) <= exact.hi && exact.lo <= to_rational(b.hi)
}

pub(super) fn cor111(p: &SweepParams, report: &mut Report) -> Result<()> {
    let alphas = [
        rational(1, 4),
        rational(1, 2),
        rational(1, 1),
        rational(2, 1),
        rational(5, 1),
    ];
    let mut grid = Vec::new();
    for base in bases() {
        for s in 2..=12usize {
            for a in &alphas {
                grid.push((base.clone(), s, a.clone()));
            }
        }
    }
    let results = run_instances(grid.len(), p, |i, _| {
        let (base, s, alpha) = &grid[i];
        let mut inst = Instance::new(format!("C={base} s={s} alpha={alpha}"));
        let cp = cor111_params(base, alpha, *s)?;
        inst.push(Observation::test("j_below_bound", cp.below_bound == Some(true), || {
            format!("j in {} vs bound {}", cp.j, cp.bound)
        }));
        // j / (2(1+α)s) = (1 + 1/ln(Cs)) / 2, below 1 iff ln(Cs) > 1
        let lc = ln_base(base);
        let lcs = lc.add(&ln(&int_rational(*s as i64)));
        inst.push(Observation::test(
            "j_below_bound_exact",
            lcs.lo > BigRational::one(),
            || format!("ln(Cs) may be <= 1: [{}, {}]", lcs.lo, lcs.hi),
        ));
        let one_a = Span::exact(BigRational::one() + alpha);
        let r_exact = one_a.mul(&lc).div(&lcs);
        let j_exact = r_exact
            .mul(&Span::exact(int_rational(*s as i64)))
            .mul(
                &lc.add(&Span::exact(BigRational::one()))
                    .add(&ln(&int_rational(*s as i64))),
            )
            .div(&lc);
        inst.push(Observation::test(
            "enclosures_consistent",
            consistent(&cp.r, &r_exact) && consistent(&cp.j, &j_exact),
            || format!("r {} / j {} disagree with the exact evaluation", cp.r, cp.j),
        ));
        if let Some(r) = &cp.r_exact {
            let ok = r_exact.lo <= *r && *r <= r_exact.hi;
            inst.push(Observation::test("exact_r", ok, || format!("r = {r}")));
        }
        Ok(inst)
    });
    fold(
        report,
        &[
            "j_below_bound",
            "j_below_bound_exact",
            "enclosures_consistent",
            "exact_r",
        ],
        &[],
        results,
    )
}

/// Value of the regime formula by exact rational enclosures.
fn exact_formula(regime: &Regime, weights: &[BigRational], xs: &[BigRational], r: &BigRational) -> Span {
    let s = int_rational(weights.len() as i64);
    let sigma = weights.iter().zip(xs).fold(int_rational(0), |acc, (a, x)| acc + a * x);
    let rs = Span::exact(r.clone());
    let mut best: Option<Span> = None;
    for (a, x) in weights.iter().zip(xs) {
        let term = match regime {
            Regime::I { eps } | Regime::II { eps } => {
                let lead = if matches!(regime, Regime::I { .. }) {
                    &sigma / x
                } else {
                    a * &s
                };
                let eps2 = eps * eps;
                let arg = &lead / (BigRational::one() - eps);
                let factor = Span::exact(int_rational(4) * &lead / &eps2);
                let inner = rs.mul(&ln(&arg)).add(&ln(&(int_rational(8) / &eps2)));
                factor.mul(&inner).max(&Span::exact(&lead * r / eps))
            }
            Regime::III { base } => {
                let lead = a * &s;
                let lc = ln_base(base);
                let log = lc.add(&Span::exact(BigRational::one())).add(&ln(&lead)).div(&lc);
                Span::exact(&lead * r).mul(&log)
            }
        };
        best = Some(match best {
            Some(b) => b.max(&term),
            None => term,
        });
    }
    best.expect("at least two weights")
}

pub(super) fn regime_j(p: &SweepParams, report: &mut Report) -> Result<()> {
    let mut regimes = Vec::new();
    for eps in [rational(1, 10), rational(1, 4), rational(1, 3)] {
        regimes.push(Regime::I { eps: eps.clone() });
        regimes.push(Regime::II { eps });
    }
    for b in bases()
        .into_iter()
        .filter(|b| !matches!(b, LogBase::Rational(c) if *c > int_rational(3)))
    {
        regimes.push(Regime::III { base: b });
    }
    let ints = |v: &[i64]| v.iter().map(|&x| int_rational(x)).collect::<Vec<_>>();
    let setups: Vec<(Vec<BigRational>, Scale)> = vec![
        (ints(&[1, 1]), Scale::Sizes(vec![2, 2])),
        (ints(&[1, 2]), Scale::Sizes(vec![3, 2])),
        (
            vec![rational(1, 2), rational(3, 2), rational(1, 1)],
            Scale::Sizes(vec![2, 3, 4]),
        ),
        (ints(&[1, 1]), Scale::Biases(vec![rational(1, 8), rational(1, 4)])),
        (ints(&[1, 2]), Scale::Biases(vec![rational(1, 16), rational(1, 10)])),
    ];
    let rs = [rational(1, 2), rational(1, 1), rational(2, 1), rational(3, 1)];
    let mut grid = Vec::new();
    for reg in &regimes {
        for (w, sc) in &setups {
            grid.push((reg.clone(), w.clone(), sc.clone()));
        }
    }
    let results = run_instances(grid.len(), p, |i, _| {
        let (regime, weights, scale) = &grid[i];
        let mut inst = Instance::new(format!("regime={} weights={weights:?} scale={scale:?}", regime.name()));
        let mut last = 0usize;
        for r in &rs {
            let params = compute_regime_j(regime.clone(), weights, scale.clone(), r.clone())?;
            let exact = exact_formula(regime, weights, &scale.values(), r);
            let j = int_rational(params.j as i64);
            inst.push(Observation::test("upper_rounded", j >= exact.hi, || {
                format!("r={r}: j = {} below the exact value {}", params.j, exact.hi)
            }));
            inst.push(Observation::test("tight", j < &exact.lo + int_rational(2), || {
                format!(
                    "r={r}: j = {} exceeds the exact value {} by 2 or more",
                    params.j, exact.lo
                )
            }));
            inst.push(Observation::test("monotone_in_r", params.j >= last, || {
                format!("r={r}: j = {} dropped below {last}", params.j)
            }));
            last = params.j;
        }
        Ok(inst)
    });
    fold(report, &["upper_rounded", "tight", "monotone_in_r"], &[], results)
}
