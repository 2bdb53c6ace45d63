use num_bigint::BigUint;

use crate::error::{invalid, Result};
use crate::setcore::{binom, KSet, SetFamily};

use super::{are_cross_t_intersecting, common_universe, uniformities, Outcome};

/// `(l−1)·C(|X|−1, t−1)`.
pub fn lemhls_bound(l: usize, x: usize, t: usize) -> Result<BigUint> {
    if l == 0 || x == 0 || t == 0 {
        return invalid("lemhls bound needs l, |X|, t >= 1");
    }
    Ok(BigUint::from(l - 1) * binom(x as i64 - 1, t as i64 - 1)?)
}

/// Families `G_i ⊆ (X choose t_i)` over `X = [m]`: some `|G_i|` is within
/// [`lemhls_bound`]. The uniformities play the role of `t_i`.
pub fn lemhls_check(families: &[SetFamily]) -> Result<bool> {
    let m = common_universe(families, 1)?;
    let ts = uniformities(families)?;
    if ts.contains(&0) {
        return invalid("every t_i must be >= 1");
    }
    if ts.iter().sum::<usize>() > m {
        return invalid(format!("Σ t_i = {} exceeds |X| = {m}", ts.iter().sum::<usize>()));
    }
    let l = families.len();
    for (g, &t) in families.iter().zip(&ts) {
        if BigUint::from(g.len()) <= lemhls_bound(l, m, t)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// A pair of traces that is not cross `(t+s−|X|−|Y|)`-intersecting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemshiftViolation {
    pub x: KSet,
    pub y: KSet,
    pub required: usize,
    pub pair: (KSet, KSet),
}

/// For all `X, Y ⊆ [s]` with `|X ∩ Y| <= t−1`, the traces `A(X, [s])` and
/// `B(Y, [s])` are cross `(t+s−|X|−|Y|)`-intersecting.
pub fn lemshift_check(a: &SetFamily, b: &SetFamily, t: usize, s: usize) -> Result<Outcome<LemshiftViolation>> {
    let n = common_universe(&[a.clone(), b.clone()], 2)?;
    if t == 0 {
        return invalid("cross t-intersection needs t >= 1");
    }
    if s == 0 || s > n || s > 16 {
        return invalid(format!("need 1 <= s <= min(n, 16), got s = {s}"));
    }
    let ground = KSet::prefix(n, s)?;
    let subsets: Vec<KSet> = (0u64..1 << s)
        .map(|mask| KSet::from_elements(n, (1..=s).filter(|i| mask >> (i - 1) & 1 == 1)))
        .collect::<Result<_>>()?;
    for x in &subsets {
        let ta = a.trace(x, &ground)?;
        for y in &subsets {
            if x.intersection_len(y) + 1 > t {
                continue;
            }
            let need = (t + s) as i64 - (x.len() + y.len()) as i64;
            if need <= 0 {
                continue;
            }
            let tb = b.trace(y, &ground)?;
            if let Outcome::Fails(pair) = are_cross_t_intersecting(&ta, &tb, need as usize)? {
                return Ok(Outcome::Fails(LemshiftViolation {
                    x: *x,
                    y: *y,
                    required: need as usize,
                    pair,
                }));
            }
        }
    }
    Ok(Outcome::Holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::properties::is_cross_dependent;
    use crate::setcore::enumerate_k_subsets;
    use crate::shifting::make_shifted;
    use proptest::prelude::*;

    #[test]
    fn lemhls_examples() {
        let g = SetFamily::from_lists(4, Some(2), &[&[1, 2], &[1, 3], &[1, 4]]).unwrap();
        assert_eq!(lemhls_bound(2, 4, 2).unwrap(), BigUint::from(3u32));
        assert!(lemhls_check(&[g.clone(), g.clone()]).unwrap());
        let empty = SetFamily::empty(4, Some(2)).unwrap();
        let full = SetFamily::full_level(4, 2).unwrap();
        assert!(lemhls_check(&[full.clone(), empty]).unwrap());
        assert!(!lemhls_check(&[full.clone(), full]).unwrap());
        let three = SetFamily::full_level(4, 3).unwrap();
        assert!(lemhls_check(&[three.clone(), three]).is_err());
    }

    #[test]
    fn lemshift_on_stars() {
        let star = SetFamily::level_filtered(6, 3, |f| f.prefix_count(2).unwrap() == 2).unwrap();
        assert!(are_cross_t_intersecting(&star, &star, 2).unwrap().holds());
        for s in 1..=3 {
            assert!(lemshift_check(&star, &star, 2, s).unwrap().holds());
        }
    }

    #[test]
    fn lemshift_detects_unshifted_counterexample() {
        // cross 1-intersecting through element 3 only; X = Y = ∅ over [2] leaves {3}
        // and the requirement t+s = 3 cannot hold
        let a = SetFamily::from_lists(4, Some(2), &[&[3, 4]]).unwrap();
        let out = lemshift_check(&a, &a, 1, 2).unwrap();
        assert!(!out.holds());
        let w = out.witness().unwrap();
        assert!(w.pair.0.intersection_len(&w.pair.1) < w.required);
    }

    fn arb_cross_dependent() -> impl Strategy<Value = Vec<SetFamily>> {
        (4usize..9, 2usize..4).prop_flat_map(|(m, l)| {
            (Just(m), Just(l), proptest::collection::vec(1usize..4, l)).prop_flat_map(|(m, l, ts)| {
                let ts: Vec<usize> = ts.into_iter().map(|t| t.min(m / l).max(1)).collect();
                let pools: Vec<Vec<KSet>> = ts
                    .iter()
                    .map(|&t| enumerate_k_subsets(m, t).unwrap().collect())
                    .collect();
                let lens: Vec<usize> = pools.iter().map(|p| p.len()).collect();
                lens.iter()
                    .map(|&len| proptest::collection::vec(0..len, 0..20))
                    .collect::<Vec<_>>()
                    .prop_map(move |idx| {
                        let mut fams: Vec<SetFamily> = idx
                            .into_iter()
                            .zip(&pools)
                            .zip(&ts)
                            .map(|((is, pool), &t)| {
                                SetFamily::new(m, Some(t), is.into_iter().map(|i| pool[i])).unwrap()
                            })
                            .collect();
                        // drop rainbow witnesses until cross-dependent
                        while let Outcome::Fails(w) = is_cross_dependent(&fams).unwrap() {
                            let i = fams.iter().position(|f| !f.is_empty()).unwrap();
                            let victim = w[i];
                            fams[i] = fams[i].filter(|s| *s != victim);
                        }
                        fams
                    })
            })
        })
    }

    fn arb_shifted_cross_t() -> impl Strategy<Value = (SetFamily, SetFamily, usize)> {
        (
            5usize..9,
            2usize..4,
            2usize..4,
            1usize..3,
            proptest::collection::vec(any::<u16>(), 1..10),
        )
            .prop_map(|(n, a, b, t, picks)| {
                let t = t.min(a).min(b);
                // templates |F∩[m]| >= c_a, c_b with c_a + c_b >= m + t
                let m = (a + b - t).min(n);
                let (ca, cb) = (a.min(m), (m + t).saturating_sub(a.min(m)).max(t));
                let ta = SetFamily::level_filtered(n, a, |f| f.prefix_count(m).unwrap() >= ca).unwrap();
                let tb = SetFamily::level_filtered(n, b, |f| f.prefix_count(m).unwrap() >= cb).unwrap();
                let pick = |tpl: &SetFamily, k: usize| {
                    if tpl.is_empty() {
                        return tpl.clone();
                    }
                    let ms = picks.iter().map(|&p| tpl.members()[p as usize % tpl.len()]);
                    make_shifted(&SetFamily::new(n, Some(k), ms).unwrap())
                };
                (pick(&ta, a), pick(&tb, b), t)
            })
    }

    proptest! {
        #[test]
        fn lemhls_holds_on_cross_dependent(fams in arb_cross_dependent()) {
            prop_assert!(is_cross_dependent(&fams).unwrap().holds());
            prop_assert!(lemhls_check(&fams).unwrap());
        }

        #[test]
        fn lemshift_holds_on_shifted_pairs((a, b, t) in arb_shifted_cross_t(), s in 1usize..4) {
            prop_assert!(are_cross_t_intersecting(&a, &b, t).unwrap().holds());
            prop_assert!(lemshift_check(&a, &b, t, s.min(a.universe())).unwrap().holds());
        }
    }
}
