//! Seeded generators, extremal constructions and reference searches.

mod constructions;
mod generators;
mod manifest;
mod rng;

pub use constructions::{emc_extremal, exhaustive_min_junta, threshold_family};
pub use generators::{
    gen_cross_agreeing, gen_cross_dependent, gen_cross_t_pair, gen_cross_t_pair_sized, gen_cross_union,
    gen_hitting_instance, gen_random_cross_dependent, gen_random_shifted, make_shifted_jointly, scramble,
    shifted_closure, Generated, GeneratorConfig,
};
pub use manifest::{content_hash, hash_text, Manifest, ManifestEntry};
pub use rng::Rng;
