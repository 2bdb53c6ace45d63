use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::setcore::{KSet, SetFamily};

/// `{F : F ∩ J ∈ J*}` for a center `J` and defining family `J* ⊆ 2^J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JuntaSpec {
    center: KSet,
    defining: SetFamily,
    k: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct JuntaJson {
    center: Vec<usize>,
    defining: Vec<Vec<usize>>,
    n: usize,
    k: Option<usize>,
}

impl JuntaSpec {
    pub fn new(center: KSet, defining: SetFamily, k: Option<usize>) -> Result<Self> {
        let n = center.universe();
        if defining.universe() != n {
            return invalid("center and defining family live in different universes");
        }
        if let Some(bad) = defining.iter().find(|d| !d.is_subset(&center)) {
            return invalid(format!("defining member {bad} is not inside the center {center}"));
        }
        if k.is_some_and(|k| k > n) {
            return invalid("uniformity exceeds the universe size");
        }
        let defining = defining.with_uniformity(None)?;
        Ok(JuntaSpec { center, defining, k })
    }

    pub fn center(&self) -> &KSet {
        &self.center
    }

    pub fn defining(&self) -> &SetFamily {
        &self.defining
    }

    pub fn universe(&self) -> usize {
        self.center.universe()
    }

    pub fn uniformity(&self) -> Option<usize> {
        self.k
    }

    /// All members, as an explicit family; subject to the enumeration caps.
    pub fn materialize(&self) -> Result<SetFamily> {
        let n = self.universe();
        match self.k {
            Some(k) => SetFamily::level_filtered(n, k, |f| self.contains_unchecked(f)),
            None => Ok(SetFamily::power_set(n)?.filter(|f| self.contains_unchecked(f))),
        }
    }

    fn contains_unchecked(&self, f: &KSet) -> bool {
        self.defining.contains(&f.intersection(&self.center))
    }

    pub fn to_json(&self) -> String {
        let j = JuntaJson {
            center: self.center.to_vec(),
            defining: self.defining.iter().map(|d| d.to_vec()).collect(),
            n: self.universe(),
            k: self.k,
        };
        serde_json::to_string(&j).expect("junta serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: JuntaJson = serde_json::from_str(text)?;
        let center = KSet::from_elements(j.n, j.center.iter().copied())?;
        let defining = SetFamily::new(
            j.n,
            None,
            j.defining
                .iter()
                .map(|d| KSet::from_elements(j.n, d.iter().copied()))
                .collect::<Result<Vec<_>>>()?,
        )?;
        JuntaSpec::new(center, defining, j.k)
    }
}

/// `F ∩ J ∈ J*`.
pub fn junta_member(junta: &JuntaSpec, f: &KSet) -> Result<bool> {
    if f.universe() != junta.universe() {
        return invalid("set and junta live in different universes");
    }
    Ok(junta.contains_unchecked(f))
}

/// `F ∖ J`: members of `family` outside the junta.
pub fn residual(family: &SetFamily, junta: &JuntaSpec) -> Result<SetFamily> {
    if family.universe() != junta.universe() {
        return invalid("family and junta live in different universes");
    }
    Ok(family.filter(|f| !junta.contains_unchecked(f)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(n: usize, xs: &[usize]) -> KSet {
        KSet::from_elements(n, xs.iter().copied()).unwrap()
    }

    fn star_junta(n: usize) -> JuntaSpec {
        JuntaSpec::new(set(n, &[1]), SetFamily::from_lists(n, None, &[&[1]]).unwrap(), None).unwrap()
    }

    #[test]
    fn membership_examples() {
        let j = star_junta(6);
        assert!(junta_member(&j, &set(6, &[1, 5])).unwrap());
        assert!(!junta_member(&j, &set(6, &[2, 5])).unwrap());
        let full = JuntaSpec::new(
            KSet::empty(6).unwrap(),
            SetFamily::from_lists(6, None, &[&[]]).unwrap(),
            None,
        )
        .unwrap();
        for f in SetFamily::power_set(6).unwrap().iter() {
            assert!(junta_member(&full, f).unwrap());
        }
        assert!(junta_member(&j, &set(7, &[1])).is_err());
    }

    #[test]
    fn residual_examples() {
        let star = SetFamily::level_filtered(6, 2, |s| s.contains(1)).unwrap();
        assert!(residual(&star, &star_junta(6)).unwrap().is_empty());
        let complement = JuntaSpec::new(set(6, &[1]), SetFamily::from_lists(6, None, &[&[]]).unwrap(), None).unwrap();
        assert_eq!(residual(&star, &complement).unwrap(), star);
    }

    #[test]
    fn validation_and_json() {
        assert!(JuntaSpec::new(set(4, &[1]), SetFamily::from_lists(4, None, &[&[2]]).unwrap(), None).is_err());
        let j = JuntaSpec::new(
            set(8, &[1, 2]),
            SetFamily::from_lists(8, None, &[&[1], &[1, 2], &[]]).unwrap(),
            Some(3),
        )
        .unwrap();
        let text = j.to_json();
        assert_eq!(text, "{\"center\":[1,2],\"defining\":[[],[1],[1,2]],\"n\":8,\"k\":3}\n");
        assert_eq!(JuntaSpec::from_json(&text).unwrap(), j);
        assert!(JuntaSpec::from_json("{\"center\":[1],\"defining\":[[2]],\"n\":3,\"k\":null}").is_err());
        assert_eq!(j.materialize().unwrap().len(), 20 + 15 + 6);
    }

    proptest! {
        #[test]
        fn membership_ignores_outside_elements(mask in 0u64..(1 << 10), center in 0u64..(1 << 10), defs in proptest::collection::vec(0u64..(1 << 10), 0..6), x in 1usize..=10) {
            let n = 10;
            let center = center & !(1 << (x - 1));
            let c = KSet::from_mask(n, center).unwrap();
            let defining = SetFamily::new(n, None, defs.iter().map(|&d| KSet::from_mask(n, d & center).unwrap())).unwrap();
            let j = JuntaSpec::new(c, defining, None).unwrap();
            let f = KSet::from_mask(n, mask).unwrap();
            let flipped = if f.contains(x) { f.without(x) } else { f.with(x) };
            prop_assert_eq!(junta_member(&j, &f).unwrap(), junta_member(&j, &flipped).unwrap());
        }
    }
}
