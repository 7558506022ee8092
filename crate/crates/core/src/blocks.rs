//! Decomposition of an inner word with exponents in `{1, 2}` into blocks.
//!
//! Block kinds:
//!
//! * `B1`: alternating single letters, `L^p (RL)^m`.
//! * `B2_start` / `B2_end`: alternating squared letters at either end of the word.
//! * `B3`: single-letter syllables separated by runs of squared syllables,
//!   starting and ending on a single letter.
//! * `UnfinishedB3`: a `B3` that runs into the end of the word on a squared
//!   syllable (the word ends `..., 1, 2`).
//! * `AllB2`: every syllable is squared.
//!
//! Spans are half-open syllable ranges `[start, end)` into the inner word.

use crate::word::Word;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors from [`decompose`].
#[derive(Debug, Error, PartialEq, Eq)]
pub enum BlockError {
    /// The inner word has no syllables.
    #[error("inner word is empty")]
    Empty,
    /// An exponent outside `{1, 2}`.
    #[error("syllable {index} has exponent {exponent}; blocks need exponents 1 or 2")]
    BadExponent {
        /// Syllable index.
        index: usize,
        /// Its exponent.
        exponent: u32,
    },
}

/// Block kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlockKind {
    /// Alternating single letters.
    B1,
    /// Leading run of squared syllables.
    #[serde(rename = "B2_start")]
    B2Start,
    /// Trailing run of at least two squared syllables.
    #[serde(rename = "B2_end")]
    B2End,
    /// Single letters separated by runs of squared syllables.
    B3,
    /// A `B3` cut off by the end of the word after a squared syllable.
    UnfinishedB3,
    /// The whole word is squared syllables.
    AllB2,
}

/// One block of a decomposition.
///
/// For `B1` and the `B2` kinds, `k` is the length and `2m + p` equals it.
/// For `B3` and `UnfinishedB3`, `k` counts the runs of squared syllables,
/// `m` counts squared syllables and `p = 0`; the length is `(k + 1) + m`
/// for `B3` and `k + m` for `UnfinishedB3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    /// Block kind.
    pub kind: BlockKind,
    /// Half-open syllable range.
    pub span: (usize, usize),
    /// See the type-level description.
    pub m: u32,
    /// See the type-level description.
    pub p: u32,
    /// See the type-level description.
    pub k: u32,
}

impl Block {
    /// Number of syllables.
    pub fn len(&self) -> usize {
        self.span.1 - self.span.0
    }

    /// True for a block with no syllables (never produced by [`decompose`]).
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn plain(kind: BlockKind, start: usize, end: usize) -> Block {
        let len = (end - start) as u32;
        Block { kind, span: (start, end), m: len / 2, p: len % 2, k: len }
    }

    fn runs(kind: BlockKind, start: usize, end: usize, a: &[u32]) -> Block {
        let twos = a[start..end].iter().filter(|&&x| x == 2).count() as u32;
        let runs = (start..end).filter(|&i| a[i] == 2 && (i == start || a[i - 1] == 1)).count() as u32;
        Block { kind, span: (start, end), m: twos, p: 0, k: runs }
    }
}

/// An ordered list of blocks covering the inner word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDecomposition {
    /// Exponents of the inner word.
    pub exponents: Vec<u32>,
    /// Blocks in word order.
    pub blocks: Vec<Block>,
    /// The last block is an `UnfinishedB3`.
    pub ends_with_unfinished_b3: bool,
    /// The word is a single `AllB2` block.
    pub is_all_b2: bool,
}

impl BlockDecomposition {
    /// Exponents covered by a block.
    pub fn block_exponents(&self, b: &Block) -> &[u32] {
        &self.exponents[b.span.0..b.span.1]
    }

    /// Number of leading squared syllables.
    pub fn leading_twos(&self) -> usize {
        self.exponents.iter().take_while(|&&x| x == 2).count()
    }

    /// Number of trailing squared syllables.
    pub fn trailing_twos(&self) -> usize {
        self.exponents.iter().rev().take_while(|&&x| x == 2).count()
    }
}

/// Decomposes the inner word into blocks.
pub fn decompose(inner: &Word) -> Result<BlockDecomposition, BlockError> {
    decompose_exponents(&inner.exponents())
}

/// Decomposes an exponent sequence into blocks.
pub fn decompose_exponents(a: &[u32]) -> Result<BlockDecomposition, BlockError> {
    let n = a.len();
    if n == 0 {
        return Err(BlockError::Empty);
    }
    if let Some((index, &exponent)) = a.iter().enumerate().find(|(_, &x)| x != 1 && x != 2) {
        return Err(BlockError::BadExponent { index, exponent });
    }
    let exponents = a.to_vec();
    if a.iter().all(|&x| x == 2) {
        return Ok(BlockDecomposition {
            exponents,
            blocks: vec![Block::plain(BlockKind::AllB2, 0, n)],
            ends_with_unfinished_b3: false,
            is_all_b2: true,
        });
    }
    let s = a.iter().take_while(|&&x| x == 2).count();
    let e = a.iter().rev().take_while(|&&x| x == 2).count();

    let mut head = Vec::new();
    if s > 0 {
        head.push(Block::plain(BlockKind::B2Start, 0, s));
    }
    let lo = s;
    let (hi, tail) = match e {
        0 => (n, None),
        1 => {
            // Walk back over (run of twos, single one) pairs without entering the leading run.
            let mut st = n - 2;
            loop {
                let mut j = st;
                if j == lo || a[j - 1] != 2 {
                    break;
                }
                j -= 1;
                while j > lo && a[j - 1] == 2 {
                    j -= 1;
                }
                if j == lo {
                    break;
                }
                st = j - 1;
            }
            (st, Some(Block::runs(BlockKind::UnfinishedB3, st, n, a)))
        }
        _ => (n - e, Some(Block::plain(BlockKind::B2End, n - e, n))),
    };

    let starts_b3 = |i: usize| a[i] == 1 && i + 1 < hi && a[i + 1] == 2;
    let mut middle = Vec::new();
    let mut i = lo;
    while i < hi {
        if starts_b3(i) {
            let mut j = i + 1;
            loop {
                while a[j] == 2 {
                    j += 1;
                }
                if j + 1 < hi && a[j + 1] == 2 {
                    j += 1;
                    continue;
                }
                break;
            }
            middle.push(Block::runs(BlockKind::B3, i, j + 1, a));
            i = j + 1;
        } else {
            let mut j = i + 1;
            while j < hi && !starts_b3(j) {
                j += 1;
            }
            middle.push(Block::plain(BlockKind::B1, i, j));
            i = j;
        }
    }

    let ends_with_unfinished_b3 = matches!(tail, Some(Block { kind: BlockKind::UnfinishedB3, .. }));
    let mut blocks = head;
    blocks.extend(middle);
    blocks.extend(tail);
    Ok(BlockDecomposition { exponents, blocks, ends_with_unfinished_b3, is_all_b2: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::parse_word;
    use proptest::prelude::*;

    fn kinds(a: &[u32]) -> Vec<(BlockKind, (usize, usize))> {
        decompose_exponents(a).unwrap().blocks.iter().map(|b| (b.kind, b.span)).collect()
    }

    #[test]
    fn single_b1() {
        let d = decompose(&parse_word("LRL").unwrap()).unwrap();
        assert_eq!(d.blocks.len(), 1);
        let b = d.blocks[0];
        assert_eq!((b.kind, b.m, b.p), (BlockKind::B1, 1, 1));
    }

    #[test]
    fn single_b3() {
        let d = decompose(&parse_word("LR^2L").unwrap()).unwrap();
        assert_eq!(d.blocks.len(), 1);
        assert_eq!(d.blocks[0].kind, BlockKind::B3);
        assert_eq!((d.blocks[0].k, d.blocks[0].m), (1, 1));
    }

    #[test]
    fn all_b2() {
        let d = decompose(&parse_word("L^2").unwrap()).unwrap();
        assert!(d.is_all_b2);
        assert_eq!(d.blocks[0].k, 1);
    }

    #[test]
    fn mixed_examples() {
        use BlockKind::*;
        assert_eq!(kinds(&[2, 1]), vec![(B2Start, (0, 1)), (B1, (1, 2))]);
        assert_eq!(kinds(&[1, 2]), vec![(UnfinishedB3, (0, 2))]);
        assert_eq!(kinds(&[1, 1, 2]), vec![(B1, (0, 1)), (UnfinishedB3, (1, 3))]);
        assert_eq!(kinds(&[1, 2, 1, 2]), vec![(UnfinishedB3, (0, 4))]);
        assert_eq!(kinds(&[2, 1, 2]), vec![(B2Start, (0, 1)), (UnfinishedB3, (1, 3))]);
        assert_eq!(kinds(&[1, 2, 2]), vec![(B1, (0, 1)), (B2End, (1, 3))]);
        assert_eq!(kinds(&[1, 2, 1, 1, 1, 2, 1]), vec![(B3, (0, 3)), (B1, (3, 4)), (B3, (4, 7))]);
        assert_eq!(kinds(&[1, 2, 1, 1, 2, 1]), vec![(B3, (0, 3)), (B3, (3, 6))]);
        assert_eq!(kinds(&[1, 2, 2, 1, 2, 1]), vec![(B3, (0, 6))]);
        let d = decompose_exponents(&[1, 2, 1, 2, 2, 1, 1]).unwrap();
        assert_eq!((d.blocks[0].k, d.blocks[0].m), (2, 3));
    }

    #[test]
    fn rejects_large_exponents() {
        assert_eq!(decompose_exponents(&[1, 3]), Err(BlockError::BadExponent { index: 1, exponent: 3 }));
        assert_eq!(decompose_exponents(&[]), Err(BlockError::Empty));
    }

    #[test]
    fn json_shape() {
        let d = decompose_exponents(&[2, 1, 2, 2]).unwrap();
        let v = serde_json::to_value(&d.blocks).unwrap();
        assert_eq!(v[0]["kind"], "B2_start");
        assert_eq!(v[2]["kind"], "B2_end");
        assert_eq!(v[0]["span"], serde_json::json!([0, 1]));
    }

    proptest! {
        #[test]
        fn decomposition_invariants(a in proptest::collection::vec(1u32..=2, 1..12)) {
            let d = decompose_exponents(&a).unwrap();
            let mut pos = 0;
            let last = d.blocks.len() - 1;
            for (i, b) in d.blocks.iter().enumerate() {
                prop_assert_eq!(b.span.0, pos);
                prop_assert!(b.span.1 > b.span.0);
                pos = b.span.1;
                let ex = d.block_exponents(b);
                let len = b.len() as u32;
                match b.kind {
                    BlockKind::B1 => {
                        prop_assert!(ex.iter().all(|&x| x == 1));
                        prop_assert_eq!(2 * b.m + b.p, len);
                    }
                    BlockKind::B2Start | BlockKind::B2End | BlockKind::AllB2 => {
                        prop_assert!(ex.iter().all(|&x| x == 2));
                        prop_assert_eq!(2 * b.m + b.p, len);
                    }
                    BlockKind::B3 => {
                        prop_assert_eq!(b.k + 1 + b.m, len);
                        prop_assert_eq!(ex[0], 1);
                        prop_assert_eq!(*ex.last().unwrap(), 1);
                        prop_assert!(ex.windows(2).all(|w| w[0] == 2 || w[1] == 2));
                    }
                    BlockKind::UnfinishedB3 => {
                        prop_assert_eq!(b.k + b.m, len);
                        prop_assert_eq!(i, last);
                    }
                }
                match b.kind {
                    BlockKind::B2Start => prop_assert_eq!(i, 0),
                    BlockKind::B2End => prop_assert_eq!(i, last),
                    _ => {}
                }
            }
            prop_assert_eq!(pos, a.len());
            let again = decompose_exponents(&d.exponents).unwrap();
            prop_assert_eq!(again, d);
        }
    }
}
