//! Isomorphism signatures: canonical strings identifying a triangulation up
//! to relabelling of tetrahedra and their vertices.
//!
//! The encoding is the classic one used by Regina. A breadth-first walk from
//! a chosen tetrahedron and vertex labelling records, per facet, whether it
//! is a boundary (0), leads to a new tetrahedron (1) or joins a known one (2).
//! The signature is the smallest string over every starting choice.
//! Permutations are indexed in lexicographic order of their image arrays.

use crate::perm::{Perm, S4};
use crate::triangulation::{Triangulation, TriangulationError};
use thiserror::Error;

const ALPHABET: &[u8; 64] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789+-";

/// Errors from decoding a signature.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum IsosigError {
    /// A character outside the signature alphabet.
    #[error("invalid character {0:?} in signature")]
    BadChar(char),
    /// The string ended early.
    #[error("signature is truncated")]
    Truncated,
    /// Characters remain after a complete component.
    #[error("unexpected trailing characters in signature")]
    Trailing,
    /// The data describe an impossible gluing.
    #[error("inconsistent signature: {0}")]
    Inconsistent(String),
}

impl From<TriangulationError> for IsosigError {
    fn from(e: TriangulationError) -> IsosigError {
        IsosigError::Inconsistent(e.to_string())
    }
}

fn char_value(c: u8) -> Result<usize, IsosigError> {
    ALPHABET.iter().position(|&a| a == c).ok_or(IsosigError::BadChar(char::from(c)))
}

fn push_value(out: &mut String, mut value: usize, chars: usize) {
    for _ in 0..chars {
        out.push(char::from(ALPHABET[value & 63]));
        value >>= 6;
    }
}

/// Canonical relabelling found while encoding a connected triangulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    /// The signature.
    pub signature: String,
    /// New index of each tetrahedron.
    pub tet_map: Vec<usize>,
    /// New vertex labels of each tetrahedron.
    pub vertex_maps: Vec<Perm>,
}

struct Walk {
    signature: String,
    image: Vec<usize>,
    vmap: Vec<Perm>,
}

/// Encodes the component containing `start`, beginning with the vertex
/// labelling `vmap(start) = labels`. Tetrahedra outside the component keep
/// `usize::MAX` as image.
fn walk_from(t: &Triangulation, start: usize, labels: Perm) -> Walk {
    let n = t.tet_count();
    let mut image = vec![usize::MAX; n];
    let mut vmap = vec![Perm::IDENTITY; n];
    let mut pre = Vec::with_capacity(n);
    image[start] = 0;
    vmap[start] = labels;
    pre.push(start);

    let mut actions: Vec<u8> = Vec::new();
    let mut dests: Vec<usize> = Vec::new();
    let mut perms: Vec<usize> = Vec::new();
    let mut pos = 0;
    while pos < pre.len() * 4 {
        let (si, fi) = (pos / 4, pos % 4);
        pos += 1;
        let src = pre[si];
        let fs = vmap[src].preimage(fi);
        let Some(g) = t.adjacent(src, fs) else {
            actions.push(0);
            continue;
        };
        let d = g.tet;
        if image[d] != usize::MAX {
            if image[d] < si || (image[d] == si && vmap[src].apply(g.perm.apply(fs)) < fi) {
                continue;
            }
            actions.push(2);
            dests.push(image[d]);
            perms.push(vmap[d].compose(g.perm).compose(vmap[src].inverse()).lex_index());
        } else {
            image[d] = pre.len();
            vmap[d] = vmap[src].compose(g.perm.inverse());
            pre.push(d);
            actions.push(1);
        }
    }

    let size = pre.len();
    let mut s = String::new();
    let width = if size < 63 {
        1
    } else {
        let mut w = 0;
        let mut tmp = size;
        while tmp > 0 {
            tmp >>= 6;
            w += 1;
        }
        s.push(char::from(ALPHABET[63]));
        s.push(char::from(ALPHABET[w]));
        w
    };
    push_value(&mut s, size, width);
    for chunk in actions.chunks(3) {
        let v = chunk.iter().enumerate().fold(0usize, |acc, (j, &a)| acc | (usize::from(a) << (2 * j)));
        s.push(char::from(ALPHABET[v]));
    }
    for d in dests {
        push_value(&mut s, d, width);
    }
    for p in perms {
        push_value(&mut s, p, 1);
    }
    Walk { signature: s, image, vmap }
}

/// Signature and canonical relabelling of a connected triangulation.
///
/// Returns `None` for an empty or disconnected triangulation.
pub fn canonical_form(t: &Triangulation) -> Option<CanonicalForm> {
    if t.tet_count() == 0 || !t.is_connected() {
        return None;
    }
    let mut best: Option<Walk> = None;
    for start in 0..t.tet_count() {
        for &p in &S4 {
            let w = walk_from(t, start, p);
            if best.as_ref().is_none_or(|b| w.signature < b.signature) {
                best = Some(w);
            }
        }
    }
    best.map(|w| CanonicalForm { signature: w.signature, tet_map: w.image, vertex_maps: w.vmap })
}

/// The isomorphism signature. Disconnected triangulations get the sorted
/// concatenation of their component signatures; the empty one gets `"a"`.
pub fn encode(t: &Triangulation) -> String {
    if t.tet_count() == 0 {
        return "a".to_string();
    }
    if let Some(c) = canonical_form(t) {
        return c.signature;
    }
    let mut parts = Vec::new();
    let mut covered = vec![false; t.tet_count()];
    for s in 0..t.tet_count() {
        if covered[s] {
            continue;
        }
        let mut best: Option<String> = None;
        let mut members = Vec::new();
        for &p in &S4 {
            let w = walk_from(t, s, p);
            if members.is_empty() {
                members = (0..t.tet_count()).filter(|&x| w.image[x] != usize::MAX).collect();
            }
            if best.as_ref().is_none_or(|b| w.signature < *b) {
                best = Some(w.signature);
            }
        }
        for &m in &members {
            covered[m] = true;
            for &p in &S4 {
                let w = walk_from(t, m, p);
                if best.as_ref().is_none_or(|b| w.signature < *b) {
                    best = Some(w.signature);
                }
            }
        }
        parts.extend(best);
    }
    parts.sort();
    parts.concat()
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn value(&mut self, chars: usize) -> Result<usize, IsosigError> {
        let mut v = 0;
        for i in 0..chars {
            let c = *self.bytes.get(self.pos).ok_or(IsosigError::Truncated)?;
            v |= char_value(c)? << (6 * i);
            self.pos += 1;
        }
        Ok(v)
    }
}

fn decode_component(r: &mut Reader<'_>) -> Result<Triangulation, IsosigError> {
    let first = r.value(1)?;
    let (size, width) = if first < 63 {
        (first, 1)
    } else {
        let w = r.value(1)?;
        (r.value(w)?, w)
    };
    if size == 0 {
        return Ok(Triangulation::new(0));
    }
    let mut actions = Vec::new();
    let mut facets = 0;
    let mut joins = 0;
    while facets < 4 * size {
        let v = r.value(1)?;
        for j in 0..3 {
            if facets >= 4 * size {
                break;
            }
            let a = (v >> (2 * j)) & 3;
            match a {
                0 => facets += 1,
                1 => facets += 2,
                2 => {
                    facets += 2;
                    joins += 1;
                }
                _ => return Err(IsosigError::Inconsistent("action 3".into())),
            }
            actions.push(a);
        }
    }
    if facets != 4 * size {
        return Err(IsosigError::Inconsistent("facet count mismatch".into()));
    }
    let mut dests = Vec::with_capacity(joins);
    for _ in 0..joins {
        dests.push(r.value(width)?);
    }
    let mut perms = Vec::with_capacity(joins);
    for _ in 0..joins {
        let idx = r.value(1)?;
        perms.push(
            Perm::from_lex_index(idx)
                .ok_or_else(|| IsosigError::Inconsistent(format!("perm index {idx}")))?,
        );
    }

    let mut t = Triangulation::new(size);
    let mut next = 1;
    let (mut ai, mut ji) = (0, 0);
    for pos in 0..4 * size {
        let (tet, face) = (pos / 4, pos % 4);
        if t.adjacent(tet, face).is_some() {
            continue;
        }
        let a = *actions.get(ai).ok_or(IsosigError::Truncated)?;
        ai += 1;
        match a {
            0 => {}
            1 => {
                if next >= size {
                    return Err(IsosigError::Inconsistent("too many new tetrahedra".into()));
                }
                t.join(tet, face, next, Perm::IDENTITY)?;
                next += 1;
            }
            _ => {
                let (d, p) = (dests[ji], perms[ji]);
                ji += 1;
                if d >= size {
                    return Err(IsosigError::Inconsistent(format!("destination {d}")));
                }
                t.join(tet, face, d, p)?;
            }
        }
    }
    if ai != actions.len() {
        return Err(IsosigError::Inconsistent("unused facet actions".into()));
    }
    Ok(t)
}

/// Rebuilds a triangulation from its signature.
pub fn decode(sig: &str) -> Result<Triangulation, IsosigError> {
    let mut r = Reader { bytes: sig.as_bytes(), pos: 0 };
    let mut comps = Vec::new();
    loop {
        comps.push(decode_component(&mut r)?);
        if r.pos == r.bytes.len() {
            break;
        }
        if comps.last().is_some_and(|c| c.tet_count() == 0) {
            return Err(IsosigError::Trailing);
        }
    }
    if comps.len() == 1 {
        return Ok(comps.pop().expect("one component"));
    }
    let total: usize = comps.iter().map(Triangulation::tet_count).sum();
    let mut out = Triangulation::new(total);
    let mut base = 0;
    for c in &comps {
        for tet in 0..c.tet_count() {
            for face in 0..4 {
                if let Some(g) = c.adjacent(tet, face) {
                    if out.adjacent(base + tet, face).is_none() {
                        out.join(base + tet, face, base + g.tet, g.perm)?;
                    }
                }
            }
        }
        base += c.tet_count();
    }
    Ok(out)
}

/// True when the triangulations are combinatorially isomorphic.
pub fn are_isomorphic(a: &Triangulation, b: &Triangulation) -> bool {
    a.tet_count() == b.tet_count() && encode(a) == encode(b)
}

/// A combinatorial isomorphism taking `a` to `b`, as a tetrahedron map and
/// per-tetrahedron vertex maps suitable for [`Triangulation::relabel`].
/// Both triangulations must be connected.
pub fn isomorphism(a: &Triangulation, b: &Triangulation) -> Option<(Vec<usize>, Vec<Perm>)> {
    let ca = canonical_form(a)?;
    let cb = canonical_form(b)?;
    if ca.signature != cb.signature {
        return None;
    }
    let mut inv_b = vec![0; cb.tet_map.len()];
    for (t, &c) in cb.tet_map.iter().enumerate() {
        inv_b[c] = t;
    }
    let tet_map: Vec<usize> = ca.tet_map.iter().map(|&c| inv_b[c]).collect();
    let vertex_maps =
        (0..a.tet_count()).map(|t| cb.vertex_maps[tet_map[t]].inverse().compose(ca.vertex_maps[t])).collect();
    Some((tet_map, vertex_maps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::{build_sakuma_weeks, tables};
    use crate::word::parse_word;
    use proptest::prelude::*;

    fn build(s: &str) -> Triangulation {
        build_sakuma_weeks(&parse_word(s).unwrap()).unwrap()
    }

    #[test]
    fn known_signatures() {
        assert_eq!(encode(&build("R^2LR")), "gLLPQccdefffhggaaof");
        assert_eq!(encode(&build("RL^3R")), "iLLPwQcccdfehghhhggaaaagb");
        assert_eq!(encode(&build("RL")), "cPcbbbiht");
        let t1 = Triangulation::from_gluing_rows(&tables::TABLE_R2LR).unwrap();
        assert_eq!(encode(&t1), "gLLPQccdefffhggaaof");
        let t2 = Triangulation::from_gluing_rows(&tables::TABLE_RL3R).unwrap();
        assert_eq!(encode(&t2), "iLLPwQcccdfehghhhggaaaagb");
    }

    #[test]
    fn decode_round_trip() {
        for s in ["RL", "R^2LR", "RL^3R", "R^2L^2R^3L"] {
            let t = build(s);
            let sig = encode(&t);
            let back = decode(&sig).unwrap();
            assert!(are_isomorphic(&t, &back));
            assert_eq!(encode(&back), sig);
        }
    }

    #[test]
    fn canonical_relabel_reproduces_decoded() {
        let t = build("RL^3R");
        let c = canonical_form(&t).unwrap();
        assert_eq!(t.relabel(&c.tet_map, &c.vertex_maps), decode(&c.signature).unwrap());
    }

    #[test]
    fn isomorphism_maps_builder_to_table() {
        let t = build("R^2LR").without_layers();
        let table = Triangulation::from_gluing_rows(&tables::TABLE_R2LR).unwrap();
        let (tm, vm) = isomorphism(&t, &table).unwrap();
        assert_eq!(t.relabel(&tm, &vm), table);
    }

    #[test]
    fn distinguishes_different_words() {
        assert!(!are_isomorphic(&build("R^2LR"), &build("RL^3R")));
        assert_ne!(encode(&build("R^2LR")), encode(&build("RL^3R")));
    }

    #[test]
    fn decode_errors() {
        assert_eq!(decode("c!"), Err(IsosigError::BadChar('!')));
        assert_eq!(decode("cPc"), Err(IsosigError::Truncated));
        assert!(decode("").is_err());
    }

    #[test]
    fn empty_and_large() {
        assert_eq!(encode(&Triangulation::new(0)), "a");
        assert_eq!(decode("a").unwrap().tet_count(), 0);
        let w = parse_word(&"RL".repeat(33)).unwrap();
        let t = build_sakuma_weeks(&w).unwrap();
        assert!(t.tet_count() >= 63);
        let sig = encode(&t);
        assert!(sig.starts_with('-'));
        let back = decode(&sig).unwrap();
        assert_eq!(back.tet_count(), t.tet_count());
        assert_eq!(encode(&back), sig);
    }

    #[test]
    fn disconnected_concatenates() {
        let a = build("RL");
        let mut t = Triangulation::new(4);
        for tet in 0..2 {
            for face in 0..4 {
                let g = a.adjacent(tet, face).unwrap();
                for off in [0, 2] {
                    if t.adjacent(tet + off, face).is_none() {
                        t.join(tet + off, face, g.tet + off, g.perm).unwrap();
                    }
                }
            }
        }
        let sig = encode(&t);
        assert_eq!(sig, "cPcbbbihtcPcbbbiht");
        assert_eq!(decode(&sig).unwrap().tet_count(), 4);
    }

    proptest! {
        #[test]
        fn relabelling_preserves_signature(seed in 0u64..10_000, word in 0usize..6) {
            use rand::{seq::SliceRandom, Rng, SeedableRng};
            let words = ["RL", "R^2LR", "RL^3R", "RLRL", "R^2L^2", "RL^2RL"];
            let t = build(words[word]);
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let mut tm: Vec<usize> = (0..t.tet_count()).collect();
            tm.shuffle(&mut rng);
            let vm: Vec<Perm> = (0..t.tet_count()).map(|_| S4[rng.gen_range(0..24)]).collect();
            let r = t.relabel(&tm, &vm);
            prop_assert!(r.validate().passed());
            prop_assert_eq!(encode(&r), encode(&t));
        }
    }
}
