//! Decision procedures for the family properties the junta constructions rely on.
//!
//! Every checker reports a [`Outcome`]; when a property fails, the witness is the
//! first violation in canonical order (families in index order, members in
//! canonical order).

mod hitting;
mod intersecting;
mod lemmas;
mod shadow;
mod transversal;
mod walk;

pub use hitting::{check_hitting, check_hitting_within, HittingSystem};
pub use intersecting::are_cross_t_intersecting;
pub use lemmas::{lemhls_bound, lemhls_check, lemshift_check, LemshiftViolation};
pub use shadow::{bollobas_thomason_check, upper_shadow};
pub use transversal::{
    check_cross_agreeing, check_cross_agreeing_within, check_cross_union, check_cross_union_within, is_cross_dependent,
    is_cross_dependent_within,
};
pub use walk::{
    count_property_t, dichotomy_check, has_property_t, lemcross_check, property_t_count_formula, LemcrossOutcome,
};

use crate::error::{invalid, Result};
use crate::setcore::SetFamily;

/// Result of a property check: either it holds, or here is a violation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome<W> {
    Holds,
    Fails(W),
}

impl<W> Outcome<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Outcome::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Outcome::Holds => None,
            Outcome::Fails(w) => Some(w),
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Outcome<V> {
        match self {
            Outcome::Holds => Outcome::Holds,
            Outcome::Fails(w) => Outcome::Fails(f(w)),
        }
    }
}

pub(crate) fn common_universe(families: &[SetFamily], min_count: usize) -> Result<usize> {
    if families.len() < min_count {
        return invalid(format!("need at least {min_count} families, got {}", families.len()));
    }
    let n = families[0].universe();
    if families.iter().any(|f| f.universe() != n) {
        return invalid("families live in different universes");
    }
    Ok(n)
}

pub(crate) fn uniformities(families: &[SetFamily]) -> Result<Vec<usize>> {
    families
        .iter()
        .map(|f| {
            f.uniformity()
                .ok_or_else(|| crate::Error::InvalidArgument("family must be k-uniform".into()))
        })
        .collect()
}
