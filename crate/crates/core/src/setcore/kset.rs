use std::cmp::Ordering;
use std::fmt;

use crate::error::{invalid, Result};

/// Largest supported ground set `[n]`.
pub const MAX_UNIVERSE: usize = 256;

const WORDS: usize = MAX_UNIVERSE / 64;

/// A subset of `[n] = {1, ..., n}` stored as a bit vector, element `x` at bit `x - 1`.
///
/// Universes up to 64 live entirely in the first word; the remaining words stay
/// zero and every operation touches only the words the universe needs.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct KSet {
    n: u16,
    len: u16,
    words: [u64; WORDS],
}

#[inline]
fn word_count(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

impl KSet {
    /// The empty set over `[n]`.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_UNIVERSE {
            return invalid(format!("universe size {n} outside 1..={MAX_UNIVERSE}"));
        }
        Ok(KSet {
            n: n as u16,
            len: 0,
            words: [0; WORDS],
        })
    }

    pub fn from_elements<I>(n: usize, elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut set = KSet::empty(n)?;
        for x in elements {
            if x == 0 || x > n {
                return invalid(format!("element {x} outside [1, {n}]"));
            }
            set.words[(x - 1) / 64] |= 1u64 << ((x - 1) % 64);
        }
        set.recount();
        Ok(set)
    }

    /// The prefix `[l]` as a subset of `[n]`.
    pub fn prefix(n: usize, l: usize) -> Result<Self> {
        if l > n {
            return invalid(format!("prefix length {l} exceeds universe {n}"));
        }
        let mut set = KSet::empty(n)?;
        set.words = prefix_mask(l);
        set.len = l as u16;
        Ok(set)
    }

    pub fn full(n: usize) -> Result<Self> {
        KSet::prefix(n, n)
    }

    /// Builds a set from raw words; bits at or above `n` must be clear.
    pub fn from_words(n: usize, words: &[u64]) -> Result<Self> {
        let mut set = KSet::empty(n)?;
        if words.len() > WORDS {
            return invalid("too many words");
        }
        set.words[..words.len()].copy_from_slice(words);
        let mask = prefix_mask(n);
        if set.words.iter().zip(mask.iter()).any(|(w, m)| w & !m != 0) {
            return invalid(format!("bits set outside [1, {n}]"));
        }
        set.recount();
        Ok(set)
    }

    /// Small-universe constructor from a mask (`bit i` is element `i + 1`).
    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        KSet::from_words(n, &[mask])
    }

    fn recount(&mut self) {
        self.len = self.words.iter().map(|w| w.count_ones()).sum::<u32>() as u16;
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words[..word_count(self.n as usize)]
    }

    /// The first word; exact for universes up to 64.
    #[inline]
    pub fn low_word(&self) -> u64 {
        self.words[0]
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        x >= 1 && x <= self.n as usize && self.words[(x - 1) / 64] >> ((x - 1) % 64) & 1 == 1
    }

    /// Copy with `x` added. `x` must lie in `[n]`.
    pub fn with(&self, x: usize) -> KSet {
        debug_assert!(x >= 1 && x <= self.n as usize);
        let mut out = *self;
        let bit = 1u64 << ((x - 1) % 64);
        if out.words[(x - 1) / 64] & bit == 0 {
            out.words[(x - 1) / 64] |= bit;
            out.len += 1;
        }
        out
    }

    /// Copy with `x` removed.
    pub fn without(&self, x: usize) -> KSet {
        if !self.contains(x) {
            return *self;
        }
        let mut out = *self;
        out.words[(x - 1) / 64] &= !(1u64 << ((x - 1) % 64));
        out.len -= 1;
        out
    }

    pub fn elements(&self) -> Elements<'_> {
        Elements {
            set: self,
            word: 0,
            rest: self.words[0],
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.elements().collect()
    }

    /// Largest element, if any.
    pub fn max_element(&self) -> Option<usize> {
        (0..word_count(self.n as usize))
            .rev()
            .find(|&w| self.words[w] != 0)
            .map(|w| w * 64 + 64 - self.words[w].leading_zeros() as usize)
    }

    fn zip_with(&self, other: &KSet, f: impl Fn(u64, u64) -> u64) -> KSet {
        let mut out = *self;
        for w in 0..word_count(self.n as usize) {
            out.words[w] = f(self.words[w], other.words[w]);
        }
        out.recount();
        out
    }

    pub fn union(&self, other: &KSet) -> KSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &KSet) -> KSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &KSet) -> KSet {
        self.zip_with(other, |a, b| a & !b)
    }

    /// Symmetric difference.
    pub fn toggled(&self, other: &KSet) -> KSet {
        self.zip_with(other, |a, b| a ^ b)
    }

    #[inline]
    pub fn intersection_len(&self, other: &KSet) -> usize {
        (0..word_count(self.n as usize))
            .map(|w| (self.words[w] & other.words[w]).count_ones() as usize)
            .sum()
    }

    #[inline]
    pub fn is_disjoint(&self, other: &KSet) -> bool {
        (0..word_count(self.n as usize)).all(|w| self.words[w] & other.words[w] == 0)
    }

    #[inline]
    pub fn is_subset(&self, other: &KSet) -> bool {
        (0..word_count(self.n as usize)).all(|w| self.words[w] & !other.words[w] == 0)
    }

    /// `|F ∩ [l]|`, with `0 <= l <= n`.
    pub fn prefix_count(&self, l: usize) -> Result<usize> {
        if l > self.n as usize {
            return invalid(format!("prefix length {l} exceeds universe {}", self.n));
        }
        Ok(self.prefix_count_unchecked(l))
    }

    #[inline]
    pub(crate) fn prefix_count_unchecked(&self, l: usize) -> usize {
        let full = l / 64;
        let mut count: u32 = self.words[..full].iter().map(|w| w.count_ones()).sum();
        let rem = l % 64;
        if rem > 0 {
            count += (self.words[full] & ((1u64 << rem) - 1)).count_ones();
        }
        count as usize
    }

    /// The same elements viewed inside a different universe.
    pub fn with_universe(&self, n: usize) -> Result<KSet> {
        KSet::from_words(n, &self.words)
    }
}

fn prefix_mask(l: usize) -> [u64; WORDS] {
    let mut words = [0u64; WORDS];
    for (w, word) in words.iter_mut().enumerate() {
        let lo = w * 64;
        if l >= lo + 64 {
            *word = u64::MAX;
        } else if l > lo {
            *word = (1u64 << (l - lo)) - 1;
        }
    }
    words
}

/// Canonical order: the bit vector read as an integer, element 1 least significant.
impl Ord for KSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.words
            .iter()
            .rev()
            .cmp(other.words.iter().rev())
            .then(self.n.cmp(&other.n))
    }
}

impl PartialOrd for KSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

pub struct Elements<'a> {
    set: &'a KSet,
    word: usize,
    rest: u64,
}

impl Iterator for Elements<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.rest != 0 {
                let bit = self.rest.trailing_zeros() as usize;
                self.rest &= self.rest - 1;
                return Some(self.word * 64 + bit + 1);
            }
            self.word += 1;
            if self.word >= word_count(self.set.n as usize) {
                return None;
            }
            self.rest = self.set.words[self.word];
        }
    }
}
