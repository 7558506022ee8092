//! Twist words in the letters `R` and `L` describing 2-bridge links.
//!
//! A [`Word`] is stored as a list of maximal syllables `(letter, exponent)`.
//! Text uses `^` for exponents of two or more, for example `R^2LR`.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// One of the two twist letters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    /// Vertical twist.
    R,
    /// Horizontal twist.
    L,
}

impl Letter {
    /// The other letter.
    pub fn swap(self) -> Letter {
        match self {
            Letter::R => Letter::L,
            Letter::L => Letter::R,
        }
    }

    fn as_char(self) -> char {
        match self {
            Letter::R => 'R',
            Letter::L => 'L',
        }
    }
}

/// A maximal run of a single letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Syllable {
    /// The repeated letter.
    pub letter: Letter,
    /// Length of the run, at least one.
    pub exponent: u32,
}

/// Errors raised while parsing or reshaping words.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    /// The input contained no letters.
    #[error("empty word")]
    Empty,
    /// A character outside `R`, `L`, `^` and digits was found.
    #[error("unexpected character {ch:?} at position {pos}")]
    BadChar {
        /// The offending character.
        ch: char,
        /// Byte offset in the input.
        pos: usize,
    },
    /// A `^` was not followed by digits or did not follow a letter.
    #[error("malformed exponent at position {0}")]
    BadExponent(usize),
    /// An exponent of zero was given.
    #[error("zero exponent at position {0}")]
    ZeroExponent(usize),
    /// The letter sequence is too short for the requested operation.
    #[error("word has {len} letters, at least {needed} required")]
    TooShort {
        /// Letters present.
        len: usize,
        /// Letters required.
        needed: usize,
    },
    /// The enumeration was asked for an empty exponent set.
    #[error("empty exponent set")]
    EmptyExponentSet,
}

/// A twist word as a sequence of maximal syllables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    syllables: Vec<Syllable>,
}

impl Word {
    /// Builds a word from a letter sequence, merging equal neighbours.
    pub fn from_letters(letters: &[Letter]) -> Word {
        let mut syllables: Vec<Syllable> = Vec::new();
        for &letter in letters {
            match syllables.last_mut() {
                Some(s) if s.letter == letter => s.exponent += 1,
                _ => syllables.push(Syllable { letter, exponent: 1 }),
            }
        }
        Word { syllables }
    }

    /// Builds a word from syllables, merging adjacent syllables that share a
    /// letter and dropping zero exponents.
    pub fn from_syllables(parts: &[Syllable]) -> Word {
        let mut syllables: Vec<Syllable> = Vec::new();
        for &p in parts.iter().filter(|p| p.exponent > 0) {
            match syllables.last_mut() {
                Some(s) if s.letter == p.letter => s.exponent += p.exponent,
                _ => syllables.push(p),
            }
        }
        Word { syllables }
    }

    /// Builds `first^{a_1} other^{a_2} ...` with alternating letters.
    pub fn alternating(first: Letter, exponents: &[u32]) -> Word {
        let mut letter = first;
        let parts: Vec<Syllable> = exponents
            .iter()
            .map(|&exponent| {
                let s = Syllable { letter, exponent };
                letter = letter.swap();
                s
            })
            .collect();
        Word::from_syllables(&parts)
    }

    /// The syllables in order.
    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    /// The exponents in order.
    pub fn exponents(&self) -> Vec<u32> {
        self.syllables.iter().map(|s| s.exponent).collect()
    }

    /// Number of syllables.
    pub fn n(&self) -> usize {
        self.syllables.len()
    }

    /// Total number of letters.
    pub fn ell(&self) -> usize {
        self.syllables.iter().map(|s| s.exponent as usize).sum()
    }

    /// The word expanded into single letters.
    pub fn letters(&self) -> Vec<Letter> {
        self.syllables.iter().flat_map(|s| std::iter::repeat_n(s.letter, s.exponent as usize)).collect()
    }

    /// The first letter, if any.
    pub fn first_letter(&self) -> Option<Letter> {
        self.syllables.first().map(|s| s.letter)
    }

    /// The last letter, if any.
    pub fn last_letter(&self) -> Option<Letter> {
        self.syllables.last().map(|s| s.letter)
    }

    /// Swaps `R` and `L` throughout.
    pub fn mirror(&self) -> Word {
        Word {
            syllables: self
                .syllables
                .iter()
                .map(|s| Syllable { letter: s.letter.swap(), exponent: s.exponent })
                .collect(),
        }
    }

    /// Mirrors the word if needed so that it starts with `R`.
    pub fn normalize(&self) -> Word {
        match self.first_letter() {
            Some(Letter::L) => self.mirror(),
            _ => self.clone(),
        }
    }

    /// True when the word starts with `R` (or is empty).
    pub fn is_normalized(&self) -> bool {
        self.first_letter() != Some(Letter::L)
    }

    /// Hyperbolicity by syllable count: at least two syllables.
    pub fn is_hyperbolic(&self) -> bool {
        self.n() >= 2
    }

    /// The word with its first and last letters removed.
    pub fn inner_word(&self) -> Result<Word, WordError> {
        let letters = self.letters();
        if letters.len() < 3 {
            return Err(WordError::TooShort { len: letters.len(), needed: 3 });
        }
        Ok(Word::from_letters(&letters[1..letters.len() - 1]))
    }

    /// For a word of the form `R L^{a_1} R^{a_2} ... X^{a_n} Y` whose final
    /// letter `Y` differs from the last inner letter `X`, returns the inner
    /// exponents `a_1, ..., a_n`. Returns `None` for words of any other form.
    pub fn family_exponents(&self) -> Option<Vec<u32>> {
        let letters = self.letters();
        if letters.len() < 3 || letters[0] != Letter::R || letters[1] != Letter::L {
            return None;
        }
        let last = letters[letters.len() - 1];
        if last == letters[letters.len() - 2] {
            return None;
        }
        Some(Word::from_letters(&letters[1..letters.len() - 1]).exponents())
    }

    /// Builds the family word `R L^{a_1} ... X^{a_n} Y` with `Y ≠ X`.
    pub fn from_family_exponents(exponents: &[u32]) -> Word {
        let inner = Word::alternating(Letter::L, exponents);
        let terminal = inner.last_letter().map_or(Letter::L, Letter::swap);
        let mut letters = vec![Letter::R];
        letters.extend(inner.letters());
        letters.push(terminal);
        Word::from_letters(&letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.syllables {
            write!(f, "{}", s.letter.as_char())?;
            if s.exponent >= 2 {
                write!(f, "^{}", s.exponent)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Word, WordError> {
        parse_word(s)
    }
}

/// Parses `(R|L)(^[0-9]+)?` repeated at least once. Runs of the same letter
/// are merged into one syllable.
pub fn parse_word(text: &str) -> Result<Word, WordError> {
    let bytes = text.as_bytes();
    if bytes.is_empty() {
        return Err(WordError::Empty);
    }
    let mut parts = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let letter = match bytes[i] {
            b'R' => Letter::R,
            b'L' => Letter::L,
            b'^' => return Err(WordError::BadExponent(i)),
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(WordError::BadChar { ch, pos: i });
            }
        };
        i += 1;
        let mut exponent = 1u32;
        if i < bytes.len() && bytes[i] == b'^' {
            let start = i;
            i += 1;
            let digits_start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i == digits_start {
                return Err(WordError::BadExponent(start));
            }
            exponent = text[digits_start..i].parse().map_err(|_| WordError::BadExponent(start))?;
            if exponent == 0 {
                return Err(WordError::ZeroExponent(start));
            }
        }
        parts.push(Syllable { letter, exponent });
    }
    Ok(Word::from_syllables(&parts))
}

/// Words `R L^{a_1} ... X^{a_n} Y` with `n ≤ max_inner_syllables` and every
/// `a_i` drawn from `exponent_set`, optionally restricted to
/// `Σ a_i = n + C`. Words are ordered by `n`, then lexicographically by
/// their exponent tuples.
pub fn enumerate_words(
    max_inner_syllables: usize,
    exponent_set: &[u32],
    fixed_c: Option<u32>,
) -> Result<impl Iterator<Item = Word>, WordError> {
    let mut exps: Vec<u32> = exponent_set.iter().copied().filter(|&e| e > 0).collect();
    exps.sort_unstable();
    exps.dedup();
    if exps.is_empty() {
        return Err(WordError::EmptyExponentSet);
    }
    let k = exps.len();
    let mut out = Vec::new();
    for n in 1..=max_inner_syllables {
        for code in 0..k.pow(n as u32) {
            let mut a = vec![0u32; n];
            let mut rest = code;
            for slot in a.iter_mut().rev() {
                *slot = exps[rest % k];
                rest /= k;
            }
            let c = a.iter().sum::<u32>() as i64 - n as i64;
            if fixed_c.is_none_or(|fc| c == fc as i64) {
                out.push(Word::from_family_exponents(&a));
            }
        }
    }
    Ok(out.into_iter())
}

/// Every letter string of length `2..=max_len` with at least two syllables,
/// including both starting letters, in length-then-lexicographic order.
pub fn enumerate_letter_strings(max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for len in 2..=max_len {
        for bits in 0u32..(1 << len) {
            let letters: Vec<Letter> = (0..len)
                .map(|i| if bits >> (len - 1 - i) & 1 == 0 { Letter::R } else { Letter::L })
                .collect();
            let w = Word::from_letters(&letters);
            if w.is_hyperbolic() {
                out.push(w);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    fn syl(letter: Letter, exponent: u32) -> Syllable {
        Syllable { letter, exponent }
    }

    #[test]
    fn parse_examples() {
        use Letter::*;
        assert_eq!(w("R^2LR").syllables(), &[syl(R, 2), syl(L, 1), syl(R, 1)]);
        assert_eq!(w("RRLR").syllables(), &[syl(R, 2), syl(L, 1), syl(R, 1)]);
        assert!(matches!(parse_word("R^0L"), Err(WordError::ZeroExponent(1))));
        assert_eq!(parse_word(""), Err(WordError::Empty));
        assert!(matches!(parse_word("RQ"), Err(WordError::BadChar { ch: 'Q', pos: 1 })));
        assert!(matches!(parse_word("R^"), Err(WordError::BadExponent(1))));
        assert!(matches!(parse_word("^2R"), Err(WordError::BadExponent(0))));
        assert_eq!(w("R^2R^3L").syllables(), &[syl(R, 5), syl(L, 1)]);
        assert_eq!(w("R^12L").exponents(), vec![12, 1]);
    }

    #[test]
    fn normalize_examples() {
        use Letter::*;
        assert_eq!(w("L^2R").normalize().syllables(), &[syl(R, 2), syl(L, 1)]);
        assert_eq!(w("R^2L").normalize(), w("R^2L"));
        assert_eq!(w("L").normalize(), w("R"));
    }

    #[test]
    fn hyperbolicity() {
        assert!(!w("R^3").is_hyperbolic());
        assert!(w("RL").is_hyperbolic());
        assert!(w("R^2LR").is_hyperbolic());
    }

    #[test]
    fn inner_word_examples() {
        assert_eq!(w("RL^2R").inner_word().unwrap(), w("L^2"));
        assert_eq!(w("RLR^2L").inner_word().unwrap(), w("LR^2"));
        assert_eq!(w("RLR").inner_word().unwrap(), w("L"));
        assert_eq!(w("RL").inner_word(), Err(WordError::TooShort { len: 2, needed: 3 }));
    }

    #[test]
    fn render() {
        assert_eq!(w("RRLR").to_string(), "R^2LR");
        assert_eq!(w("RL^3R").to_string(), "RL^3R");
    }

    #[test]
    fn family_exponents() {
        assert_eq!(w("RL^2R").family_exponents(), Some(vec![2]));
        assert_eq!(w("RLR^2L").family_exponents(), Some(vec![1, 2]));
        assert_eq!(w("RLRR").family_exponents(), None);
        assert_eq!(w("R^2LR").family_exponents(), None);
        assert_eq!(Word::from_family_exponents(&[1, 2]), w("RLR^2L"));
        assert_eq!(Word::from_family_exponents(&[1, 1]), w("RLRL"));
    }

    #[test]
    fn enumeration_examples() {
        let a: Vec<String> = enumerate_words(1, &[1, 2], None).unwrap().map(|w| w.to_string()).collect();
        assert_eq!(a, vec!["RLR", "RL^2R"]);
        let b: Vec<String> = enumerate_words(2, &[1], None).unwrap().map(|w| w.to_string()).collect();
        assert_eq!(b, vec!["RLR", "RLRL"]);
        let c: Vec<Word> = enumerate_words(3, &[1, 2], Some(0)).unwrap().collect();
        assert_eq!(c.len(), 3);
        assert!(c.iter().all(|w| w.family_exponents().unwrap().iter().all(|&a| a == 1)));
        assert!(enumerate_words(3, &[], None).is_err());
    }

    #[test]
    fn enumeration_respects_c() {
        for c in 0..4u32 {
            for w in enumerate_words(6, &[1, 2], Some(c)).unwrap() {
                let a = w.family_exponents().unwrap();
                assert_eq!(a.iter().sum::<u32>() - a.len() as u32, c);
            }
        }
        assert_eq!(enumerate_words(6, &[1, 2], None).unwrap().count(), 126);
    }

    #[test]
    fn letter_strings() {
        let all = enumerate_letter_strings(8);
        assert_eq!(all.len(), 494);
        assert!(all.iter().all(|w| w.is_hyperbolic() && w.ell() <= 8));
    }

    fn word_strategy() -> impl Strategy<Value = Word> {
        prop::collection::vec(1u32..6, 1..8).prop_map(|exps| Word::alternating(Letter::R, &exps))
    }

    proptest! {
        #[test]
        fn parse_render_round_trip(word in word_strategy()) {
            let text = word.to_string();
            prop_assert_eq!(parse_word(&text).unwrap(), word);
        }

        #[test]
        fn family_inner_word_exponents_in_set(exps in prop::collection::vec(1u32..3, 1..7)) {
            let word = Word::from_family_exponents(&exps);
            let inner = word.inner_word().unwrap();
            prop_assert!(inner.exponents().iter().all(|&a| a == 1 || a == 2));
            prop_assert_eq!(inner.exponents(), exps);
        }
    }
}
