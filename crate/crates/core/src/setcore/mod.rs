//! Sets, families, exact arithmetic, enumeration and file formats.

mod enumerate;
mod exact;
mod family;
pub mod io;
mod kset;

pub use enumerate::{all_subsets, enumerate_k_subsets, enumerate_k_subsets_capped, KSubsets, POWER_SET_CAP};
pub use exact::{
    binom, common_denominator, format_rational, int_rational, parse_rational, pow, pow_ge, rational, uint_rational,
    ExactInt, ExactRational,
};
pub use family::SetFamily;
pub use io::{family_from_json, family_to_json, parse_any, parse_family, serialize_family};
pub use kset::{Elements, KSet, MAX_UNIVERSE};

/// `|F ∩ [l]|`.
pub fn prefix_count(set: &KSet, l: usize) -> crate::Result<usize> {
    set.prefix_count(l)
}
