//! Free-group words over an index-based alphabet.
//!
//! A [`Letter`] packs a generator index and a sign into one byte: code `2i`
//! is generator `i`, code `2i + 1` its inverse. The text form maps generator
//! `i` to the `i`-th lowercase ASCII letter and its inverse to the uppercase
//! one, so `"abAB"` is the commutator of the first two generators.
//!
//! Letters are ordered by code (`a < A < b < B < ...`); that order is the
//! basis of every shortlex comparison in the crate.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest alphabet the text format can express.
pub const MAX_RANK: usize = 26;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u8);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Letter {
        debug_assert!(generator < MAX_RANK);
        Letter((generator as u8) << 1 | inverse as u8)
    }

    pub fn gen(generator: usize) -> Letter {
        Letter::new(generator, false)
    }

    pub fn from_code(code: u8) -> Letter {
        debug_assert!((code as usize) < 2 * MAX_RANK);
        Letter(code)
    }

    #[inline]
    pub fn code(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    #[inline]
    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    /// +1 for a generator, -1 for an inverse.
    #[inline]
    pub fn sign(self) -> i64 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }

    #[inline]
    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    pub fn to_char(self) -> char {
        let c = (b'a' + (self.0 >> 1)) as char;
        if self.is_inverse() {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }

    pub fn from_char(c: char) -> Result<Letter> {
        if c.is_ascii_lowercase() {
            Ok(Letter::new((c as u8 - b'a') as usize, false))
        } else if c.is_ascii_uppercase() {
            Ok(Letter::new((c as u8 - b'A') as usize, true))
        } else {
            Err(Error::InvalidLetter(c))
        }
    }

    /// All `2 * rank` letters in shortlex order.
    pub fn alphabet(rank: usize) -> impl Iterator<Item = Letter> + Clone {
        (0..2 * rank as u8).map(Letter)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    /// Freely reduce an arbitrary letter sequence.
    pub fn reduce(raw: &[Letter]) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(raw.len());
        push_reduced(&mut out, raw);
        Word(out)
    }

    /// Wraps letters that are already freely reduced.
    pub fn from_reduced(letters: Vec<Letter>) -> Word {
        debug_assert!(is_freely_reduced(&letters));
        Word(letters)
    }

    pub fn letter(l: Letter) -> Word {
        Word(vec![l])
    }

    pub fn parse(text: &str) -> Result<Word> {
        text.parse()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest generator index used, plus one.
    pub fn min_rank(&self) -> usize {
        self.0.iter().map(|l| l.generator() + 1).max().unwrap_or(0)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        push_reduced(&mut out, &other.0);
        Word(out)
    }

    pub fn mul_letter(&self, l: Letter) -> Word {
        let mut out = self.0.clone();
        push_reduced(&mut out, &[l]);
        Word(out)
    }

    pub fn invert(&self) -> Word {
        Word(invert_letters(&self.0))
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.invert() } else { self.clone() };
        let mut out = Vec::with_capacity(base.len() * n.unsigned_abs() as usize);
        for _ in 0..n.unsigned_abs() {
            push_reduced(&mut out, &base.0);
        }
        Word(out)
    }

    /// `self * w * self^-1`.
    pub fn conjugate(&self, w: &Word) -> Word {
        self.concat(w).concat(&self.invert())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(&f), Some(&l)) => self.0.len() == 1 || f != l.inverse(),
            _ => true,
        }
    }

    /// Splits `self = conjugator * core * conjugator^-1` with `core`
    /// cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let n = self.0.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.0[k] == self.0[n - 1 - k].inverse() {
            k += 1;
        }
        (Word(self.0[k..n - k].to_vec()), Word(self.0[..k].to_vec()))
    }

    /// Number of (possibly overlapping) positions where `pattern` occurs as
    /// a contiguous subword.
    pub fn count_occurrences(&self, pattern: &Word) -> usize {
        count_occurrences(&self.0, &pattern.0)
    }

    /// Rotation `w[k..] w[..k]`; only meaningful for cyclically reduced words.
    pub fn rotate(&self, k: usize) -> Word {
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    /// Total order: shorter first, then lexicographic in letter order.
    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        shortlex_cmp(&self.0, &other.0)
    }

    /// Exponent sum of every generator, `rank` entries.
    pub fn exponent_vector(&self, rank: usize) -> Vec<i64> {
        let mut v = vec![0; rank];
        for l in &self.0 {
            v[l.generator()] += l.sign();
        }
        v
    }

    /// Image under the homomorphism sending generator `i` to `images[i]`.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Vec::new();
        for l in &self.0 {
            let img = &images[l.generator()];
            if l.is_inverse() {
                push_reduced(&mut out, &invert_letters(&img.0));
            } else {
                push_reduced(&mut out, &img.0);
            }
        }
        Word(out)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Words order by shortlex.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.shortlex_cmp(other)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "Word(e)")
        } else {
            write!(f, "Word({self})")
        }
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let s = s.trim();
        if s == "e" || s == "1" {
            return Ok(Word::identity());
        }
        let raw = s.chars().map(Letter::from_char).collect::<Result<Vec<_>>>()?;
        Ok(Word::reduce(&raw))
    }
}

impl Serialize for Letter {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_char(self.to_char())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Word, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Allocation-free hash key for short letter sequences.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum WordKey {
    /// Up to 20 letters, six bits each above a five-bit length.
    Packed(u128),
    Long(Box<[Letter]>),
}

impl WordKey {
    pub fn new(t: &[Letter]) -> WordKey {
        if t.len() <= 20 {
            let mut x = t.len() as u128;
            for (i, l) in t.iter().enumerate() {
                x |= (l.code() as u128) << (5 + 6 * i);
            }
            WordKey::Packed(x)
        } else {
            WordKey::Long(t.into())
        }
    }
}

/// Appends `raw` to the reduced buffer `out`, cancelling as it goes.
pub fn push_reduced(out: &mut Vec<Letter>, raw: &[Letter]) {
    for &l in raw {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
}

pub fn invert_letters(letters: &[Letter]) -> Vec<Letter> {
    letters.iter().rev().map(|l| l.inverse()).collect()
}

pub fn is_freely_reduced(letters: &[Letter]) -> bool {
    letters.windows(2).all(|p| p[0] != p[1].inverse())
}

pub fn shortlex_cmp(a: &[Letter], b: &[Letter]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

pub fn count_occurrences(w: &[Letter], pattern: &[Letter]) -> usize {
    if pattern.is_empty() || pattern.len() > w.len() {
        return 0;
    }
    w.windows(pattern.len()).filter(|win| *win == pattern).count()
}

/// Every reduced word of length exactly `len` over `rank` generators, in
/// shortlex order.
pub fn reduced_words_of_length(rank: usize, len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut buf = Vec::with_capacity(len);
    fn rec(rank: usize, len: usize, buf: &mut Vec<Letter>, out: &mut Vec<Word>) {
        if buf.len() == len {
            out.push(Word(buf.clone()));
            return;
        }
        for l in Letter::alphabet(rank) {
            if buf.last() == Some(&l.inverse()) {
                continue;
            }
            buf.push(l);
            rec(rank, len, buf, out);
            buf.pop();
        }
    }
    rec(rank, len, &mut buf, &mut out);
    out
}

/// Every reduced word of length at most `max_len` over `rank` generators,
/// in shortlex order (identity first).
pub fn reduced_words_up_to(rank: usize, max_len: usize) -> Vec<Word> {
    (0..=max_len).flat_map(|n| reduced_words_of_length(rank, n)).collect()
}

/// Reduced words up to `max_len` over an explicit letter set (closed under
/// inversion is not required), in shortlex order.
pub fn reduced_words_over(letters: &[Letter], max_len: usize) -> Vec<Word> {
    let mut sorted = letters.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut out = vec![Word::identity()];
    let mut frontier = vec![Word::identity()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in &sorted {
                if w.0.last() == Some(&l.inverse()) {
                    continue;
                }
                let mut v = w.0.clone();
                v.push(l);
                next.push(Word(v));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Uniformly random reduced word of length `len` over `rank` generators.
pub fn random_reduced_word<R: Rng + ?Sized>(rng: &mut R, rank: usize, len: usize) -> Word {
    let alphabet: Vec<Letter> = Letter::alphabet(rank).collect();
    let mut out: Vec<Letter> = Vec::with_capacity(len);
    while out.len() < len {
        let l = alphabet[rng.gen_range(0..alphabet.len())];
        if out.last() != Some(&l.inverse()) {
            out.push(l);
        }
    }
    Word(out)
}

/// Random reduced word with length uniform in `0..=max_len`.
pub fn random_word_up_to<R: Rng + ?Sized>(rng: &mut R, rank: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    random_reduced_word(rng, rank, len)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn raw(s: &str) -> Vec<Letter> {
        s.chars().map(|c| Letter::from_char(c).unwrap()).collect()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(Word::reduce(&raw("aAb")), w("b"));
        assert_eq!(Word::reduce(&[]), Word::identity());
        assert_eq!(Word::reduce(&raw("abBAc")), w("c"));
    }

    #[test]
    fn concat_examples() {
        assert!(w("ab").concat(&w("BA")).is_identity());
        assert_eq!(w("ab").concat(&w("ab")).to_string(), "abab");
        assert_eq!(w("a").concat(&Word::identity()), w("a"));
    }

    #[test]
    fn invert_examples() {
        assert_eq!(w("ab").invert().to_string(), "BA");
        assert!(Word::identity().invert().is_identity());
        assert_eq!(w("abAB").invert().to_string(), "baBA");
    }

    #[test]
    fn cyclic_reduce_examples() {
        assert_eq!(w("baB").cyclic_reduce(), (w("a"), w("b")));
        assert_eq!(w("abAB").cyclic_reduce(), (w("abAB"), Word::identity()));
        // a (bA) A reduces to abAA
        let x = w("abAA");
        assert_eq!(x.cyclic_reduce(), (w("bA"), w("a")));
        assert_eq!(w("aaA"), w("a"));
    }

    #[test]
    fn count_examples() {
        assert_eq!(w("abab").count_occurrences(&w("ab")), 2);
        assert_eq!(w("aaa").count_occurrences(&w("aa")), 2);
        assert_eq!(w("abab").count_occurrences(&w("BA")), 0);
    }

    #[test]
    fn text_format_round_trip() {
        assert_eq!(w("e"), Word::identity());
        assert_eq!(Word::identity().to_string(), "");
        assert_eq!(w("abABcc").to_string(), "abABcc");
        assert!("ab1".parse::<Word>().is_err());
        let json = serde_json::to_string(&w("aB")).unwrap();
        assert_eq!(json, "\"aB\"");
        assert_eq!(serde_json::from_str::<Word>(&json).unwrap(), w("aB"));
    }

    #[test]
    fn shortlex_order() {
        assert!(w("b") < w("aa"));
        assert!(w("a") < w("A"));
        assert!(w("A") < w("b"));
        assert!(Word::identity() < w("a"));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(reduced_words_of_length(2, 2).len(), 12);
        assert_eq!(reduced_words_up_to(2, 2).len(), 17);
        let gens = [Letter::gen(0), Letter::gen(0).inverse()];
        assert_eq!(reduced_words_over(&gens, 3).len(), 7);
    }

    #[test]
    fn substitute_is_homomorphic() {
        let images = vec![w("ab"), w("B")];
        assert_eq!(w("aB").substitute(&images), w("abb"));
        assert!(w("aA").substitute(&images).is_identity());
    }
}
