//! `(u ← v)`-shifts of sets, families and juntas.

use crate::error::{invalid, Result};
use crate::setcore::{KSet, SetFamily};

fn check_pair(n: usize, u: usize, v: usize) -> Result<()> {
    if u == 0 || u >= v || v > n {
        return invalid(format!("shift needs 1 <= u < v <= n, got u={u}, v={v}, n={n}"));
    }
    Ok(())
}

#[inline]
fn shift_unchecked(a: &KSet, u: usize, v: usize) -> KSet {
    if a.contains(v) && !a.contains(u) {
        a.without(v).with(u)
    } else {
        *a
    }
}

/// Replaces `v` by `u` when `v ∈ A` and `u ∉ A`.
pub fn shift_set(a: &KSet, u: usize, v: usize) -> Result<KSet> {
    check_pair(a.universe(), u, v)?;
    Ok(shift_unchecked(a, u, v))
}

/// `S_{u←v}(F)`: each member is shifted unless its image is already in `F`.
pub fn shift_family(family: &SetFamily, u: usize, v: usize) -> Result<SetFamily> {
    check_pair(family.universe(), u, v)?;
    Ok(shift_family_unchecked(family, u, v))
}

fn shift_family_unchecked(family: &SetFamily, u: usize, v: usize) -> SetFamily {
    let mut members: Vec<KSet> = family
        .iter()
        .map(|a| {
            let b = shift_unchecked(a, u, v);
            if b != *a && family.contains(&b) {
                *a
            } else {
                b
            }
        })
        .collect();
    members.sort_unstable();
    SetFamily::from_sorted_unchecked(family.universe(), family.uniformity(), members)
}

/// True when some member would move under `S_{u←v}`.
fn shift_moves(family: &SetFamily, u: usize, v: usize) -> bool {
    family.iter().any(|a| {
        let b = shift_unchecked(a, u, v);
        b != *a && !family.contains(&b)
    })
}

/// Applies shifts over pairs `(u, v)` in lexicographic order, restarting from
/// `(1, 2)` after every effective shift, until the family is fixed by all of them.
pub fn make_shifted(family: &SetFamily) -> SetFamily {
    let n = family.universe();
    let mut current = family.clone();
    'restart: loop {
        for u in 1..n {
            for v in u + 1..=n {
                if shift_moves(&current, u, v) {
                    current = shift_family_unchecked(&current, u, v);
                    continue 'restart;
                }
            }
        }
        return current;
    }
}

/// Shiftedness of a `k`-uniform family, tested as fixedness under every single shift.
pub fn is_shifted(family: &SetFamily) -> Result<bool> {
    if family.uniformity().is_none() {
        return invalid("is_shifted is defined for k-uniform families only");
    }
    Ok(first_unshifted(family).is_none())
}

/// A member `A` and pair `(u, v)` with `S_{u←v}(A) ∉ F`, if one exists.
pub fn first_unshifted(family: &SetFamily) -> Option<(KSet, usize, usize)> {
    let lookup = family.member_set();
    let n = family.universe();
    for a in family {
        for v in a.elements() {
            for u in 1..v {
                if !a.contains(u) && !lookup.contains(&a.without(v).with(u)) {
                    return Some((*a, u, v));
                }
            }
        }
        debug_assert!(a.max_element().unwrap_or(0) <= n);
    }
    None
}

/// Shifts a junta: both its center and its defining family.
///
/// The defining family must consist of subsets of the center.
pub fn shift_junta(center: &KSet, defining: &SetFamily, u: usize, v: usize) -> Result<(KSet, SetFamily)> {
    if defining.universe() != center.universe() {
        return invalid("center and defining family live in different universes");
    }
    if let Some(bad) = defining.iter().find(|d| !d.is_subset(center)) {
        return invalid(format!("defining member {bad} is not inside the center {center}"));
    }
    Ok((shift_set(center, u, v)?, shift_family(defining, u, v)?))
}
