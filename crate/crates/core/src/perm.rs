//! Permutations of the four vertex labels of a tetrahedron.
//!
//! A [`Perm`] is stored as its image array: `p.apply(i) == p.images()[i]`.
//! Composition follows function notation, so `p.compose(q)` applies `q`
//! first and then `p`.

use serde::{Deserialize, Serialize};
use std::fmt;

/// A permutation of `{0, 1, 2, 3}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Perm([u8; 4]);

/// All 24 permutations in lexicographic order of their image arrays.
pub const S4: [Perm; 24] = {
    let mut out = [Perm([0, 1, 2, 3]); 24];
    let mut idx = 0;
    let mut a = 0;
    while a < 4 {
        let mut b = 0;
        while b < 4 {
            let mut c = 0;
            while c < 4 {
                if a != b && a != c && b != c {
                    let d = 6 - a - b - c;
                    out[idx] = Perm([a as u8, b as u8, c as u8, d as u8]);
                    idx += 1;
                }
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
};

impl Perm {
    /// The identity permutation.
    pub const IDENTITY: Perm = Perm([0, 1, 2, 3]);

    /// Builds a permutation from its images, returning `None` unless the
    /// array is a bijection of `{0, 1, 2, 3}`.
    pub fn new(images: [u8; 4]) -> Option<Perm> {
        let mut seen = [false; 4];
        for &x in &images {
            if x > 3 || seen[x as usize] {
                return None;
            }
            seen[x as usize] = true;
        }
        Some(Perm(images))
    }

    /// The transposition exchanging `a` and `b`.
    pub fn transposition(a: usize, b: usize) -> Perm {
        let mut img = [0u8, 1, 2, 3];
        img.swap(a, b);
        Perm(img)
    }

    /// Builds the permutation sending `pairs[i].0` to `pairs[i].1`.
    ///
    /// # Panics
    ///
    /// Panics if the pairs do not describe a permutation.
    pub fn from_pairs(pairs: [(usize, usize); 4]) -> Perm {
        let mut img = [u8::MAX; 4];
        for (a, b) in pairs {
            img[a] = b as u8;
        }
        Perm::new(img).expect("pairs must describe a permutation")
    }

    /// The image array.
    pub fn images(self) -> [u8; 4] {
        self.0
    }

    /// The image of `i`.
    pub fn apply(self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// The preimage of `i`.
    pub fn preimage(self, i: usize) -> usize {
        self.0.iter().position(|&x| x as usize == i).expect("permutation is total")
    }

    /// `self ∘ other`: apply `other`, then `self`.
    pub fn compose(self, other: Perm) -> Perm {
        Perm([
            self.0[other.0[0] as usize],
            self.0[other.0[1] as usize],
            self.0[other.0[2] as usize],
            self.0[other.0[3] as usize],
        ])
    }

    /// The inverse permutation.
    pub fn inverse(self) -> Perm {
        let mut r = [0u8; 4];
        for (i, &x) in self.0.iter().enumerate() {
            r[x as usize] = i as u8;
        }
        Perm(r)
    }

    /// `+1` for even permutations and `-1` for odd ones.
    pub fn sign(self) -> i32 {
        let mut s = 1;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.0[i] > self.0[j] {
                    s = -s;
                }
            }
        }
        s
    }

    /// Position of this permutation in [`S4`].
    pub fn lex_index(self) -> usize {
        S4.iter().position(|&p| p == self).expect("S4 is complete")
    }

    /// Inverse of [`Perm::lex_index`].
    pub fn from_lex_index(i: usize) -> Option<Perm> {
        S4.get(i).copied()
    }

    /// Images of the three vertices of the face opposite `face`, in
    /// increasing vertex order, written as digits (`"102"` style).
    pub fn face_images(self, face: usize) -> String {
        (0..4).filter(|&v| v != face).map(|v| char::from(b'0' + self.0[v])).collect()
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in self.0 {
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl From<Perm> for String {
    fn from(p: Perm) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for Perm {
    type Error = String;

    fn try_from(s: String) -> Result<Perm, String> {
        let bytes = s.as_bytes();
        if bytes.len() != 4 {
            return Err(format!("permutation must have 4 digits, got {s:?}"));
        }
        let mut img = [0u8; 4];
        for (slot, &b) in img.iter_mut().zip(bytes) {
            if !(b'0'..=b'3').contains(&b) {
                return Err(format!("invalid permutation digit in {s:?}"));
            }
            *slot = b - b'0';
        }
        Perm::new(img).ok_or_else(|| format!("{s:?} is not a permutation"))
    }
}
