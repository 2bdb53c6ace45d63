//! Junta-size parameters for the three regimes, plus the corollary constants.
//!
//! Formulas that involve logarithms are evaluated in outward-rounded `f64`
//! interval arithmetic; purely rational terms are evaluated exactly. `j` is the
//! ceiling of the upper end, so it is never smaller than the true value.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Result};
use crate::setcore::{format_rational, int_rational, rational};

/// A closed interval `[lo, hi]` guaranteed to contain the true value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

fn down(x: f64, ulps: u32) -> f64 {
    (0..ulps).fold(x, |v, _| v.next_down())
}

fn up(x: f64, ulps: u32) -> f64 {
    (0..ulps).fold(x, |v, _| v.next_up())
}

impl Bracket {
    pub fn of_rational(r: &BigRational) -> Bracket {
        let v = r.to_f64().unwrap_or(f64::NAN);
        Bracket {
            lo: down(v, 2),
            hi: up(v, 2),
        }
    }

    pub fn of_int(v: i64) -> Bracket {
        Bracket::of_rational(&int_rational(v))
    }

    pub fn e() -> Bracket {
        Bracket {
            lo: down(std::f64::consts::E, 1),
            hi: up(std::f64::consts::E, 1),
        }
    }

    pub fn add(self, o: Bracket) -> Bracket {
        Bracket {
            lo: down(self.lo + o.lo, 1),
            hi: up(self.hi + o.hi, 1),
        }
    }

    pub fn mul(self, o: Bracket) -> Bracket {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        Bracket {
            lo: down(c.iter().copied().fold(f64::INFINITY, f64::min), 1),
            hi: up(c.iter().copied().fold(f64::NEG_INFINITY, f64::max), 1),
        }
    }

    /// Divisor must not contain zero.
    pub fn div(self, o: Bracket) -> Bracket {
        debug_assert!(o.lo > 0.0 || o.hi < 0.0);
        let c = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi];
        Bracket {
            lo: down(c.iter().copied().fold(f64::INFINITY, f64::min), 1),
            hi: up(c.iter().copied().fold(f64::NEG_INFINITY, f64::max), 1),
        }
    }

    /// Natural logarithm; the argument must be positive.
    pub fn ln(self) -> Bracket {
        debug_assert!(self.lo > 0.0);
        Bracket {
            lo: down(self.lo.ln(), 2),
            hi: up(self.hi.ln(), 2),
        }
    }

    pub fn max(self, o: Bracket) -> Bracket {
        Bracket {
            lo: self.lo.max(o.lo),
            hi: self.hi.max(o.hi),
        }
    }

    pub fn midpoint(&self) -> f64 {
        (self.lo + self.hi) / 2.0
    }

    /// `Some(true)` if every point is `>= x`, `Some(false)` if every point is `< x`.
    pub fn ge(&self, x: f64) -> Option<bool> {
        if self.lo >= x {
            Some(true)
        } else if self.hi < x {
            Some(false)
        } else {
            None
        }
    }

    /// Ceiling of the upper end.
    pub fn ceil_hi(&self) -> f64 {
        self.hi.ceil()
    }
}

impl fmt::Display for Bracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Logarithm base `C >= 2` for regime (iii): a rational or Euler's number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LogBase {
    E,
    Rational(BigRational),
}

impl LogBase {
    pub fn parse(text: &str) -> Result<LogBase> {
        let t = text.trim();
        if t == "e" || t == "E" {
            return Ok(LogBase::E);
        }
        let c = crate::setcore::parse_rational(t)?;
        LogBase::rational(c)
    }

    pub fn rational(c: BigRational) -> Result<LogBase> {
        if c < int_rational(2) {
            return invalid(format!("log base C must be >= 2, got {}", format_rational(&c)));
        }
        Ok(LogBase::Rational(c))
    }

    pub fn value(&self) -> Bracket {
        match self {
            LogBase::E => Bracket::e(),
            LogBase::Rational(c) => Bracket::of_rational(c),
        }
    }

    pub fn ln(&self) -> Bracket {
        match self {
            LogBase::E => Bracket { lo: 1.0, hi: 1.0 },
            LogBase::Rational(c) => Bracket::of_rational(c).ln(),
        }
    }

    /// `log_C(x)` for positive `x`.
    pub fn log(&self, x: Bracket) -> Bracket {
        x.ln().div(self.ln())
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogBase::E => write!(f, "e"),
            LogBase::Rational(c) => write!(f, "{}", format_rational(c)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Regime {
    I { eps: BigRational },
    II { eps: BigRational },
    III { base: LogBase },
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::I { .. } => "i",
            Regime::II { .. } => "ii",
            Regime::III { .. } => "iii",
        }
    }
}

/// Per-family uniformities `k_i`, or biases `p_i` for the measure version.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scale {
    Sizes(Vec<usize>),
    Biases(Vec<BigRational>),
}

impl Scale {
    pub fn len(&self) -> usize {
        match self {
            Scale::Sizes(v) => v.len(),
            Scale::Biases(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn values(&self) -> Vec<BigRational> {
        match self {
            Scale::Sizes(v) => v.iter().map(|&k| int_rational(k as i64)).collect(),
            Scale::Biases(v) => v.clone(),
        }
    }

    pub fn is_biased(&self) -> bool {
        matches!(self, Scale::Biases(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Admissibility {
    Admissible,
    Inadmissible(String),
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        matches!(self, Admissibility::Admissible)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegimeParams {
    pub regime: Regime,
    pub r: BigRational,
    pub weights: Vec<BigRational>,
    pub scale: Scale,
    /// `Σ α_i k_i` (or `Σ α_i p_i`).
    pub sigma: BigRational,
    /// Enclosure of the formula value before rounding.
    pub formula: Bracket,
    pub j: usize,
}

impl RegimeParams {
    pub fn arity(&self) -> usize {
        self.weights.len()
    }

    /// Slope `num/den` of the line separating `F′_i`: a member goes to `F′_i`
    /// when `den·|F ∩ [ℓ]| >= ℓ·num` for some `ℓ > j`.
    pub fn slope(&self, i: usize) -> (BigRational, BigRational) {
        let s = int_rational(self.arity() as i64);
        match self.regime {
            Regime::I { .. } => (self.scale.values()[i].clone(), self.sigma.clone()),
            Regime::II { .. } | Regime::III { .. } => (BigRational::one(), &self.weights[i] * s),
        }
    }

    /// Whether `n` meets the regime's lower bound (or, for biases, the bias bound).
    /// Comparisons that interval arithmetic cannot decide count as inadmissible.
    pub fn admissibility(&self, n: usize) -> Admissibility {
        let s = int_rational(self.arity() as i64);
        let nn = int_rational(n as i64);
        let xs = self.scale.values();
        let biased = self.scale.is_biased();
        match &self.regime {
            Regime::I { eps } => {
                if let Some(x) = xs.iter().find(|x| self.sigma < **x) {
                    return Admissibility::Inadmissible(format!(
                        "sigma = {} is below {}",
                        format_rational(&self.sigma),
                        format_rational(x)
                    ));
                }
                let need = &self.sigma / (BigRational::one() - eps);
                if nn >= need {
                    Admissibility::Admissible
                } else {
                    Admissibility::Inadmissible(format!("n = {n} is below sigma/(1-eps) = {}", format_rational(&need)))
                }
            }
            Regime::II { eps } => {
                let one_m = BigRational::one() - eps;
                for (a, x) in self.weights.iter().zip(&xs) {
                    let v = a * &s * x;
                    let ok = if biased { v <= one_m } else { &nn * &one_m >= v };
                    if !ok {
                        return Admissibility::Inadmissible(format!(
                            "alpha*s*{} = {} violates the regime (ii) bound",
                            if biased { "p" } else { "k" },
                            format_rational(&v)
                        ));
                    }
                }
                Admissibility::Admissible
            }
            Regime::III { base } => {
                let ce = base.value().mul(Bracket::e());
                for (a, x) in self.weights.iter().zip(&xs) {
                    let v = ce.mul(Bracket::of_rational(&(a * &s * x)));
                    let verdict = if biased {
                        // C e α s p <= 1
                        Bracket { lo: -v.hi, hi: -v.lo }.ge(-1.0)
                    } else {
                        Bracket { lo: -v.hi, hi: -v.lo }.ge(-(n as f64))
                    };
                    match verdict {
                        Some(true) => {}
                        Some(false) => {
                            return Admissibility::Inadmissible(format!(
                                "C*e*alpha*s*{} = {v} violates the regime (iii) bound",
                                if biased { "p" } else { "k" }
                            ))
                        }
                        None => {
                            return Admissibility::Inadmissible(format!(
                                "regime (iii) bound undecided: C*e*alpha*s*x in {v}"
                            ))
                        }
                    }
                }
                Admissibility::Admissible
            }
        }
    }
}

fn eps_in_range(eps: &BigRational) -> Result<()> {
    if !eps.is_positive() || *eps > rational(1, 3) {
        return invalid(format!("eps must lie in (0, 1/3], got {}", format_rational(eps)));
    }
    Ok(())
}

fn ceil_rational(r: &BigRational) -> BigInt {
    let (q, m) = r.numer().div_mod_floor(r.denom());
    if m.is_zero() {
        q
    } else {
        q + 1
    }
}

/// Evaluates the regime formula for `j`.
pub fn compute_regime_j(regime: Regime, weights: &[BigRational], scale: Scale, r: BigRational) -> Result<RegimeParams> {
    let s = weights.len();
    if s < 2 {
        return invalid("need at least two families");
    }
    if scale.len() != s {
        return invalid("scale vector does not match the number of weights");
    }
    if weights.iter().any(|a| !a.is_positive()) {
        return invalid("weights must be positive");
    }
    if !r.is_positive() {
        return invalid("r must be positive");
    }
    match &scale {
        Scale::Sizes(ks) => {
            if ks.contains(&0) {
                return invalid("uniformities must be positive");
            }
        }
        Scale::Biases(ps) => {
            if ps.iter().any(|p| !p.is_positive() || *p >= BigRational::one()) {
                return invalid("biases must lie in (0, 1)");
            }
        }
    }
    match &regime {
        Regime::I { eps } | Regime::II { eps } => eps_in_range(eps)?,
        Regime::III { .. } => {}
    }

    let xs = scale.values();
    let sigma = weights
        .iter()
        .zip(&xs)
        .fold(BigRational::zero(), |acc, (a, x)| acc + a * x);
    let sr = int_rational(s as i64);
    let rb = Bracket::of_rational(&r);

    // exact rational terms and interval log terms, maximized separately
    let mut exact: Option<BigRational> = None;
    let mut logs: Option<Bracket> = None;
    let mut push_exact = |v: BigRational| {
        exact = Some(match exact.take() {
            Some(e) if e >= v => e,
            _ => v,
        })
    };
    let mut push_log = |b: Bracket| logs = Some(logs.map_or(b, |l| l.max(b)));

    match &regime {
        Regime::I { eps } | Regime::II { eps } => {
            let eps2 = eps * eps;
            let log8 = Bracket::of_rational(&(int_rational(8) / &eps2)).ln();
            let one_m = BigRational::one() - eps;
            for (a, x) in weights.iter().zip(&xs) {
                // (i): lead = σ/x, arg = σ/((1-ε)x); (ii): lead = α s, arg = α s/(1-ε)
                let lead = match regime {
                    Regime::I { .. } => &sigma / x,
                    _ => a * &sr,
                };
                let arg = &lead / &one_m;
                let factor = Bracket::of_rational(&(int_rational(4) * &lead / &eps2));
                let inner = rb.mul(Bracket::of_rational(&arg).ln()).add(log8);
                push_log(factor.mul(inner));
                push_exact(&lead * &r / eps);
            }
        }
        Regime::III { base } => {
            let ce = base.value().mul(Bracket::e());
            for a in weights {
                let lead = a * &sr;
                let lb = Bracket::of_rational(&lead);
                push_log(lb.mul(rb).mul(base.log(ce.mul(lb))));
            }
        }
    }

    let mut formula = logs.expect("at least one family");
    let mut j = formula.ceil_hi().max(0.0);
    if let Some(e) = &exact {
        formula = formula.max(Bracket::of_rational(e));
        let c = ceil_rational(e).to_f64().unwrap_or(f64::INFINITY);
        j = j.max(c);
    }
    if !j.is_finite() || j > u32::MAX as f64 {
        return Err(crate::Error::ResourceLimit(format!("junta size {j} is out of range")));
    }
    Ok(RegimeParams {
        regime,
        r,
        weights: weights.to_vec(),
        scale,
        sigma,
        formula,
        j: j as usize,
    })
}

/// `c = 1 + ((2+ε)/(2ε))² ln 4`.
pub fn cor_constants(eps: &BigRational) -> Result<Bracket> {
    if !eps.is_positive() {
        return invalid("eps must be positive");
    }
    let q = (int_rational(2) + eps) / (int_rational(2) * eps);
    let ln4 = Bracket::of_int(4).ln();
    Ok(Bracket::of_int(1).add(Bracket::of_rational(&(&q * &q)).mul(ln4)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cor111Params {
    /// `r = (1+α)/log_C(Cs)`.
    pub r: Bracket,
    /// Exact `r` when `Cs` is an integer power of a rational `C`.
    pub r_exact: Option<BigRational>,
    /// `j = r s log_C(Ces)`.
    pub j: Bracket,
    /// `2(1+α)s`.
    pub bound: BigRational,
    /// `j < bound`, when the enclosure decides it.
    pub below_bound: Option<bool>,
}

pub fn cor111_params(base: &LogBase, alpha: &BigRational, s: usize) -> Result<Cor111Params> {
    if s < 2 {
        return invalid("s must be >= 2");
    }
    if !alpha.is_positive() {
        return invalid("alpha must be positive");
    }
    let one_a = BigRational::one() + alpha;
    let sb = Bracket::of_int(s as i64);
    let cs = base.value().mul(sb);
    let r = Bracket::of_rational(&one_a).div(base.log(cs));
    let j = r.mul(sb).mul(base.log(cs.mul(Bracket::e())));
    let r_exact = match base {
        LogBase::Rational(c) => {
            let target = c * int_rational(s as i64);
            let mut power = c.clone();
            let mut m = 1i64;
            while power < target && m < 256 {
                power = &power * c;
                m += 1;
            }
            (power == target).then(|| &one_a / int_rational(m))
        }
        LogBase::E => None,
    };
    let bound = int_rational(2) * &one_a * int_rational(s as i64);
    let bf = bound.to_f64().unwrap_or(f64::INFINITY);
    let below_bound = if j.hi < bf {
        Some(true)
    } else if j.lo >= bf {
        Some(false)
    } else {
        None
    };
    Ok(Cor111Params {
        r,
        r_exact,
        j,
        bound,
        below_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ones(s: usize) -> Vec<BigRational> {
        vec![BigRational::one(); s]
    }

    #[test]
    fn regime_iii_examples() {
        let p = compute_regime_j(
            Regime::III { base: LogBase::E },
            &ones(3),
            Scale::Sizes(vec![2, 2, 2]),
            int_rational(3),
        )
        .unwrap();
        // 9 ln(3e²) = 9 (ln 3 + 2)
        let truth = 9.0 * (3f64.ln() + 2.0);
        assert!(p.formula.lo <= truth && truth <= p.formula.hi);
        assert_eq!(p.j, 28);

        for s in 2..12usize {
            let p = compute_regime_j(
                Regime::III { base: LogBase::E },
                &ones(s),
                Scale::Sizes(vec![3; s]),
                int_rational(3),
            )
            .unwrap();
            let truth = 3.0 * s as f64 * (2.0 + (s as f64).ln());
            assert_eq!(p.j, truth.ceil() as usize, "s = {s}");
        }

        let p = compute_regime_j(
            Regime::III {
                base: LogBase::rational(int_rational(2)).unwrap(),
            },
            &ones(2),
            Scale::Sizes(vec![2, 2]),
            int_rational(1),
        )
        .unwrap();
        // 2 log2(4e)
        assert_eq!(p.j, 7);
        assert!(p.admissibility(22).is_admissible());
        assert!(!p.admissibility(21).is_admissible());
    }

    #[test]
    fn range_checks() {
        let r = int_rational(1);
        let sz = || Scale::Sizes(vec![2, 2]);
        assert!(compute_regime_j(Regime::I { eps: rational(1, 2) }, &ones(2), sz(), r.clone()).is_err());
        assert!(compute_regime_j(Regime::II { eps: rational(0, 1) }, &ones(2), sz(), r.clone()).is_err());
        assert!(compute_regime_j(
            Regime::I { eps: rational(1, 3) },
            &ones(1),
            Scale::Sizes(vec![2]),
            r.clone()
        )
        .is_err());
        assert!(compute_regime_j(Regime::I { eps: rational(1, 3) }, &ones(2), sz(), int_rational(0)).is_err());
        assert!(LogBase::parse("3/2").is_err());
        assert_eq!(LogBase::parse("e").unwrap(), LogBase::E);
        assert!(compute_regime_j(
            Regime::I { eps: rational(1, 4) },
            &ones(2),
            Scale::Biases(vec![rational(1, 2), int_rational(1)]),
            r
        )
        .is_err());
    }

    #[test]
    fn regime_i_exact_term_is_not_overcounted() {
        // equal k_i: σ = 2k, σ r /(ε k) = 2r/ε; the log term dominates here
        let p = compute_regime_j(
            Regime::I { eps: rational(1, 3) },
            &ones(2),
            Scale::Sizes(vec![4, 4]),
            int_rational(1),
        )
        .unwrap();
        let eps: f64 = 1.0 / 3.0;
        let t1 = 4.0 * 2.0 / (eps * eps) * ((2.0 / (1.0 - eps)).ln() + (8.0 / (eps * eps)).ln());
        let t2 = 2.0 / eps;
        let truth = t1.max(t2);
        assert!(p.formula.lo <= truth && truth <= p.formula.hi);
        assert_eq!(p.j, truth.ceil() as usize);
        assert_eq!(p.sigma, int_rational(8));
        assert!(p.admissibility(12).is_admissible());
        assert!(!p.admissibility(11).is_admissible());
    }

    #[test]
    fn regimes_i_and_ii_agree_when_alpha_k_is_constant() {
        let ws = vec![int_rational(1), rational(1, 2)];
        let ks = Scale::Sizes(vec![2, 4]);
        let a = compute_regime_j(Regime::I { eps: rational(1, 4) }, &ws, ks.clone(), int_rational(2)).unwrap();
        let b = compute_regime_j(Regime::II { eps: rational(1, 4) }, &ws, ks, int_rational(2)).unwrap();
        assert_eq!(a.j, b.j);
    }

    #[test]
    fn slopes() {
        let ws = vec![int_rational(1), rational(1, 2)];
        let p = compute_regime_j(
            Regime::I { eps: rational(1, 4) },
            &ws,
            Scale::Sizes(vec![2, 4]),
            int_rational(1),
        )
        .unwrap();
        assert_eq!(p.slope(0), (int_rational(2), int_rational(4)));
        let q = compute_regime_j(
            Regime::II { eps: rational(1, 4) },
            &ws,
            Scale::Sizes(vec![2, 4]),
            int_rational(1),
        )
        .unwrap();
        assert_eq!(q.slope(1), (int_rational(1), int_rational(1)));
    }

    #[test]
    fn cor_examples() {
        let c = cor_constants(&int_rational(1)).unwrap();
        let truth = 1.0 + 2.25 * 4f64.ln();
        assert!(c.lo <= truth && truth <= c.hi);
        assert!((c.midpoint() - 4.119).abs() < 1e-3);
        assert!(cor_constants(&int_rational(0)).is_err());

        let p = cor111_params(&LogBase::rational(int_rational(2)).unwrap(), &int_rational(1), 2).unwrap();
        assert_eq!(p.r_exact, Some(int_rational(1)));
        assert!(p.r.lo <= 1.0 && 1.0 <= p.r.hi);
        let truth = 2.0 * (4.0 * std::f64::consts::E).log2();
        assert!(p.j.lo <= truth && truth <= p.j.hi);
        assert_eq!(p.below_bound, Some(true));
        assert_eq!(p.bound, int_rational(8));
    }

    proptest! {
        #[test]
        fn cor111_j_is_below_bound(c in 2i64..60, cd in 1i64..4, a in 1i64..20, ad in 1i64..8, s in 2usize..40) {
            let c = rational(c, cd).max(int_rational(2));
            let base = LogBase::rational(c).unwrap();
            let p = cor111_params(&base, &rational(a, ad), s).unwrap();
            prop_assert_eq!(p.below_bound, Some(true));
            let pe = cor111_params(&LogBase::E, &rational(a, ad), s).unwrap();
            prop_assert_eq!(pe.below_bound, Some(true));
        }

        #[test]
        fn j_dominates_every_formula_term(s in 2usize..6, k in 1usize..6, r in 1i64..5, e in 4i64..20) {
            let eps = rational(1, e.max(3));
            let ws = ones(s);
            let p = compute_regime_j(Regime::II { eps: eps.clone() }, &ws, Scale::Sizes(vec![k; s]), int_rational(r)).unwrap();
            let ef = 1.0 / e.max(3) as f64;
            let sf = s as f64;
            let rf = r as f64;
            let t1 = 4.0 * sf / (ef * ef) * (rf * (sf / (1.0 - ef)).ln() + (8.0 / (ef * ef)).ln());
            let t2 = rf * sf / ef;
            prop_assert!(p.j as f64 >= t1.max(t2) - 1e-9);
            prop_assert!((p.j as f64) < t1.max(t2) + 1.0 + 1e-9);
        }
    }
}
