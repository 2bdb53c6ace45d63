//! Junta extraction and the parameter calculators behind it.

mod extract;
mod pair;
mod regime;
mod spec;

pub use extract::{extract_biased_juntas, extract_hitting_juntas, split_by_line, ExtractOptions, HittingExtraction};
pub use pair::{extract_pair_juntas, extract_pair_juntas_cor, PairExtraction, PairOptions};
pub use regime::{
    compute_regime_j, cor111_params, cor_constants, Admissibility, Bracket, Cor111Params, LogBase, Regime,
    RegimeParams, Scale,
};
pub use spec::{junta_member, residual, JuntaSpec};

use std::fmt;

/// Outcome of one post-hoc guarantee.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(String),
    Skipped(String),
}

impl Verdict {
    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail(_))
    }

    pub fn from_bool(ok: bool, why: impl FnOnce() -> String) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail(why())
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => write!(f, "pass"),
            Verdict::Fail(why) => write!(f, "fail({why})"),
            Verdict::Skipped(why) => write!(f, "skipped({why})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
}

impl Check {
    pub fn new(name: impl Into<String>, verdict: Verdict) -> Check {
        Check {
            name: name.into(),
            verdict,
        }
    }
}
