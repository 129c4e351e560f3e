//! Inversion sequences, word patterns and the `max` / `prmx` / `rank`
//! statistics.
//!
//! Entries are stored 0-based, but every public accessor that takes a
//! position uses 1-based indexing, so `e.get(1)` is the first entry.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;

/// Default upper bound on `n` for [`enumerate_is`].
pub const IS_GUARD: usize = 11;

/// A sequence `e_1 .. e_n` with `0 <= e_j <= j - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct InversionSequence(Vec<u32>);

impl InversionSequence {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::DomainError("inversion sequences have length >= 1".into()));
        }
        for (i, &v) in entries.iter().enumerate() {
            if v as usize > i {
                return Err(Error::NotInversionSequence { position: i + 1, value: v });
            }
        }
        Ok(InversionSequence(entries))
    }

    pub(crate) fn from_vec_unchecked(entries: Vec<u32>) -> Self {
        debug_assert!(InversionSequence::new(entries.clone()).is_ok(), "{entries:?}");
        InversionSequence(entries)
    }

    /// The all-zero sequence of length `n`.
    pub fn zeros(n: usize) -> Self {
        InversionSequence(vec![0; n.max(1)])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<u32> {
        self.0
    }

    /// `e_j` for `1 <= j <= n`.
    pub fn get(&self, j: usize) -> u32 {
        self.0[j - 1]
    }

    /// `e_j` as a signed value, with the sentinel `e_{n+1} = -1` and `0`
    /// positions mapped to `None`.
    pub fn get_signed(&self, j: usize) -> Option<i64> {
        match j {
            0 => None,
            j if j <= self.len() => Some(self.0[j - 1] as i64),
            j if j == self.len() + 1 => Some(-1),
            _ => None,
        }
    }

    pub fn max_value(&self) -> u32 {
        *self.0.iter().max().expect("nonempty")
    }

    /// Position of the first descent, with the virtual sentinel `e_{n+1} = -1`.
    pub fn prmx(&self) -> usize {
        prmx_of(&self.0)
    }

    /// `prmx(e) - max(e) - 1` without checking that `e` avoids 102.
    pub fn rank_value(&self) -> i64 {
        self.prmx() as i64 - self.max_value() as i64 - 1
    }

    pub fn contains(&self, p: &Pattern) -> bool {
        contains_pattern(&self.0, p)
    }

    pub fn avoids(&self, p: &Pattern) -> bool {
        !self.contains(p)
    }
}

pub(crate) fn prmx_of(entries: &[u32]) -> usize {
    let mut p = 1;
    while p < entries.len() && entries[p - 1] <= entries[p] {
        p += 1;
    }
    p
}

impl TryFrom<Vec<u32>> for InversionSequence {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        InversionSequence::new(v)
    }
}

impl From<InversionSequence> for Vec<u32> {
    fn from(e: InversionSequence) -> Self {
        e.0
    }
}

impl fmt::Display for InversionSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// A reduced word over `{0, .., k-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern(Vec<u32>);

impl Pattern {
    /// Reduces `word` and wraps the result.
    pub fn new(word: &[u32]) -> Result<Self> {
        reduce(word)
    }

    /// Parses `"102"` (one digit per letter) or a JSON array such as `[1,0,2]`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let word: Vec<u32> = if s.starts_with('[') {
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).ok_or_else(|| Error::Parse(format!("bad pattern letter {c:?}"))))
                .collect::<Result<_>>()?
        };
        let p = reduce(&word)?;
        if p.0 != word {
            return Err(Error::Parse(format!("pattern {s} is not reduced")));
        }
        Ok(p)
    }

    pub fn word(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&v| v <= 9) {
            for v in &self.0 {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            write!(f, "{}", serde_json::to_string(&self.0).expect("serializable"))
        }
    }
}

impl Serialize for Pattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.iter().all(|&v| v <= 9) {
            s.serialize_str(&self.to_string())
        } else {
            self.0.serialize(s)
        }
    }
}

impl<'de> Deserialize<'de> for Pattern {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Digits(String),
            Word(Vec<u32>),
        }
        let p = match Repr::deserialize(d)? {
            Repr::Digits(s) => Pattern::parse(&s),
            Repr::Word(w) => reduce(&w).and_then(|p| {
                if p.0 == w {
                    Ok(p)
                } else {
                    Err(Error::Parse("pattern is not reduced".into()))
                }
            }),
        };
        p.map_err(serde::de::Error::custom)
    }
}

/// Replaces the i-th smallest distinct value of `word` by `i - 1`.
pub fn reduce(word: &[u32]) -> Result<Pattern> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    let mut values = word.to_vec();
    values.sort_unstable();
    values.dedup();
    let reduced = word
        .iter()
        .map(|v| values.binary_search(v).expect("value present") as u32)
        .collect();
    Ok(Pattern(reduced))
}

/// Whether some subsequence of `word` is order-isomorphic to `p`.
pub fn contains_pattern(word: &[u32], p: &Pattern) -> bool {
    let mut chosen = Vec::with_capacity(p.len());
    search(word, p.word(), &mut chosen, 0, false)
}

/// Whether some occurrence of `p` in `word` uses the last entry of `word`.
///
/// Used to prune enumeration: a prefix that avoids `p` can only gain an
/// occurrence through its newest entry.
pub fn contains_pattern_at_end(word: &[u32], p: &Pattern) -> bool {
    if word.len() < p.len() {
        return false;
    }
    let mut chosen = Vec::with_capacity(p.len());
    search(word, p.word(), &mut chosen, 0, true)
}

fn search(word: &[u32], pat: &[u32], chosen: &mut Vec<usize>, start: usize, end_at_last: bool) -> bool {
    let depth = chosen.len();
    if depth == pat.len() {
        return true;
    }
    let remaining = pat.len() - depth;
    if word.len() < start + remaining {
        return false;
    }
    let last_slot = depth + 1 == pat.len();
    let range = if last_slot && end_at_last {
        word.len() - 1..word.len()
    } else {
        start..word.len() - remaining + 1
    };
    for i in range {
        if i < start {
            continue;
        }
        let consistent = chosen
            .iter()
            .zip(pat)
            .all(|(&j, &q)| word[i].cmp(&word[j]) == pat[depth].cmp(&q));
        if consistent {
            chosen.push(i);
            if search(word, pat, chosen, i + 1, end_at_last) {
                chosen.pop();
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// `max`, `prmx` and `rank` of an inversion sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeqStats {
    pub max_val: u32,
    pub prmx: usize,
    pub rank: i64,
    /// False when the sequence contains 102; `rank` is then only the
    /// arithmetic value `prmx - max - 1`.
    pub rank_defined: bool,
}

pub fn stats(e: &InversionSequence) -> SeqStats {
    SeqStats {
        max_val: e.max_value(),
        prmx: e.prmx(),
        rank: e.rank_value(),
        rank_defined: e.avoids(&pattern_102()),
    }
}

/// Like [`stats`], but refuses sequences that contain 102.
pub fn stats_strict(e: &InversionSequence) -> Result<SeqStats> {
    let s = stats(e);
    if s.rank_defined {
        Ok(s)
    } else {
        Err(Error::RankUndefined)
    }
}

pub fn pattern_102() -> Pattern {
    Pattern(vec![1, 0, 2])
}

/// Shorthand for building patterns from digit strings in code and tests.
///
/// # Panics
/// Panics when `s` is not a reduced digit word.
pub fn pat(s: &str) -> Pattern {
    Pattern::parse(s).unwrap_or_else(|e| panic!("bad pattern {s}: {e}"))
}

/// All `e` in `IS_n` avoiding every pattern in `avoid`, in lexicographic order.
pub fn enumerate_is(n: usize, avoid: &[Pattern]) -> Result<Vec<InversionSequence>> {
    enumerate_is_with(n, avoid, IS_GUARD, Exec::default())
}

pub fn enumerate_is_with(n: usize, avoid: &[Pattern], guard: usize, exec: Exec) -> Result<Vec<InversionSequence>> {
    if n == 0 {
        return Err(Error::DomainError("n must be positive".into()));
    }
    if n > guard {
        return Err(Error::GuardExceeded { what: "enumerate_is", n, guard });
    }
    // Expand a short prefix sequentially, then finish each branch independently.
    let split = n.min(4);
    let mut prefixes = Vec::new();
    extend_is(&mut vec![], split, avoid, &mut |w| prefixes.push(w.to_vec()));
    let out = exec.flat_map(&prefixes, |prefix| {
        let mut acc = Vec::new();
        let mut word = prefix.clone();
        extend_is(&mut word, n, avoid, &mut |w| acc.push(InversionSequence::from_vec_unchecked(w.to_vec())));
        acc
    });
    Ok(out)
}

fn extend_is(word: &mut Vec<u32>, n: usize, avoid: &[Pattern], emit: &mut dyn FnMut(&[u32])) {
    if word.len() == n {
        emit(word);
        return;
    }
    let j = word.len() as u32;
    for v in 0..=j {
        word.push(v);
        if !avoid.iter().any(|p| contains_pattern_at_end(word, p)) {
            extend_is(word, n, avoid, emit);
        }
        word.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is(v: &[u32]) -> InversionSequence {
        InversionSequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce(&[2, 0, 2]).unwrap().word(), &[1, 0, 1]);
        assert_eq!(reduce(&[0, 0, 1]).unwrap().word(), &[0, 0, 1]);
        assert_eq!(reduce(&[5, 1, 7]).unwrap().word(), &[1, 0, 2]);
        assert_eq!(reduce(&[]), Err(Error::EmptyWord));
    }

    #[test]
    fn containment_examples() {
        assert!(is(&[0, 1, 0, 2]).contains(&pat("102")));
        assert!(!is(&[0, 0, 1]).contains(&pat("011")));
        assert!(is(&[0, 1, 1]).contains(&pat("011")));
    }

    #[test]
    fn at_end_agrees_with_full_search() {
        let p = pat("102");
        let w = [0, 1, 0, 2];
        assert!(contains_pattern_at_end(&w, &p));
        assert!(!contains_pattern_at_end(&w[..3], &p));
        assert!(contains_pattern_at_end(&[0, 1, 0, 2, 3], &p));
    }

    #[test]
    fn stats_examples() {
        let s = stats(&is(&[0]));
        assert_eq!((s.max_val, s.prmx, s.rank), (0, 1, 0));
        let fig = [0, 0, 0, 0, 1, 4, 4, 4, 4, 6, 7, 7, 9, 7, 9, 7, 9, 9, 8, 7, 8, 8, 6, 6, 4];
        let s = stats(&is(&fig));
        assert_eq!((s.max_val, s.prmx, s.rank), (9, 13, 3));
        assert!(s.rank_defined);
        let s = stats(&is(&[0, 0, 0]));
        assert_eq!((s.max_val, s.prmx, s.rank), (0, 3, 2));
    }

    #[test]
    fn strict_stats_reject_102() {
        let e = is(&[0, 1, 0, 2]);
        assert_eq!(stats_strict(&e), Err(Error::RankUndefined));
        let s = stats(&e);
        assert!(!s.rank_defined);
        assert_eq!(s.rank, 2 - 2 - 1);
    }

    #[test]
    fn enumerate_examples() {
        let all2 = enumerate_is(2, &[]).unwrap();
        assert_eq!(all2, vec![is(&[0, 0]), is(&[0, 1])]);
        assert_eq!(enumerate_is(3, &[pat("102")]).unwrap().len(), 6);
        let two = enumerate_is(3, &[pat("102"), pat("011")]).unwrap();
        assert_eq!(two.len(), 5);
        assert!(!two.contains(&is(&[0, 1, 1])));
        assert!(matches!(enumerate_is(12, &[]), Err(Error::GuardExceeded { .. })));
    }

    #[test]
    fn enumeration_is_ordered_and_complete() {
        for n in 1..=6 {
            let all = enumerate_is(n, &[]).unwrap();
            assert_eq!(all.len(), (1..=n).product::<usize>());
            assert!(all.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn invalid_sequences_rejected() {
        assert!(InversionSequence::new(vec![1]).is_err());
        assert!(InversionSequence::new(vec![0, 2]).is_err());
        assert!(InversionSequence::new(vec![]).is_err());
    }

    #[test]
    fn pattern_text_forms() {
        assert_eq!(pat("102").to_string(), "102");
        assert_eq!(serde_json::to_string(&pat("102")).unwrap(), "\"102\"");
        let big = reduce(&(0..11).collect::<Vec<_>>()).unwrap();
        assert!(big.to_string().starts_with('['));
        let back: Pattern = serde_json::from_str(&serde_json::to_string(&big).unwrap()).unwrap();
        assert_eq!(back, big);
        assert!(Pattern::parse("202").is_err());
    }
}
