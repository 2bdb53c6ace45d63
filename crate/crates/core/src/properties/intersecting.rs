use crate::error::{invalid, Result};
use crate::setcore::{KSet, SetFamily};

use super::Outcome;

/// Whether `|A ∩ B| >= t` for every `A ∈ a`, `B ∈ b`; the first violating pair otherwise.
pub fn are_cross_t_intersecting(a: &SetFamily, b: &SetFamily, t: usize) -> Result<Outcome<(KSet, KSet)>> {
    if t == 0 {
        return invalid("cross t-intersection needs t >= 1");
    }
    if a.universe() != b.universe() {
        return invalid("families live in different universes");
    }
    for x in a {
        if x.len() < t {
            if let Some(y) = b.members().first() {
                return Ok(Outcome::Fails((*x, *y)));
            }
            continue;
        }
        if let Some(y) = b.iter().find(|y| x.intersection_len(y) < t) {
            return Ok(Outcome::Fails((*x, *y)));
        }
    }
    Ok(Outcome::Holds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let star = SetFamily::level_filtered(5, 2, |s| s.contains(1)).unwrap();
        assert!(are_cross_t_intersecting(&star, &star, 1).unwrap().holds());

        let a = SetFamily::from_lists(4, Some(2), &[&[1, 2]]).unwrap();
        let b = SetFamily::from_lists(4, Some(2), &[&[3, 4]]).unwrap();
        let out = are_cross_t_intersecting(&a, &b, 1).unwrap();
        assert_eq!(out.witness().unwrap(), &(a.members()[0], b.members()[0]));

        let heavy = SetFamily::level_filtered(5, 3, |s| s.prefix_count(3).unwrap() >= 2).unwrap();
        assert!(are_cross_t_intersecting(&heavy, &heavy, 1).unwrap().holds());

        assert!(are_cross_t_intersecting(&a, &b, 0).is_err());
    }

    #[test]
    fn empty_side_is_vacuous() {
        let a = SetFamily::empty(4, Some(2)).unwrap();
        let b = SetFamily::from_lists(4, Some(2), &[&[3, 4]]).unwrap();
        assert!(are_cross_t_intersecting(&a, &b, 3).unwrap().holds());
        assert!(are_cross_t_intersecting(&b, &a, 3).unwrap().holds());
    }
}
