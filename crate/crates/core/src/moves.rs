//! Local retriangulation moves (2-3, 3-2, 4-4) and a greedy simplifier.
//!
//! Every move returns a fresh [`Triangulation`]. Tetrahedra untouched by the
//! move keep their relative order and come first; new tetrahedra follow.

use crate::perm::Perm;
use crate::triangulation::{edge_index, Triangulation, EDGE_VERTICES};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

/// Errors from applying a move.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum MoveError {
    /// Edge class id out of range.
    #[error("no edge class {0}")]
    NoSuchEdge(usize),
    /// Triangle id out of range.
    #[error("no triangle {0}")]
    NoSuchTriangle(usize),
    /// The edge has the wrong degree for the move.
    #[error("edge class {edge} has degree {degree}, the move needs {needed}")]
    WrongDegree {
        /// Edge class id.
        edge: usize,
        /// Its degree.
        degree: usize,
        /// The degree the move needs.
        needed: usize,
    },
    /// The tetrahedra around the edge are not distinct.
    #[error("edge class {0} meets some tetrahedron more than once")]
    RepeatedTetrahedra(usize),
    /// The triangle is a boundary face.
    #[error("triangle {0} is not glued on both sides")]
    Boundary(usize),
    /// The triangle joins a tetrahedron to itself.
    #[error("triangle {0} has the same tetrahedron on both sides")]
    SameTetrahedron(usize),
    /// The 4-4 axis must be 0 or 1.
    #[error("4-4 axis must be 0 or 1, got {0}")]
    BadAxis(usize),
}

/// Which move a trace entry records.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MoveKind {
    /// Three tetrahedra around an edge become two.
    #[serde(rename = "3-2")]
    ThreeTwo,
    /// Two tetrahedra sharing a face become three.
    #[serde(rename = "2-3")]
    TwoThree,
    /// Four tetrahedra around an edge are rearranged around the other diagonal.
    #[serde(rename = "4-4")]
    FourFour,
}

/// One step of a simplification run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    /// The move applied.
    #[serde(rename = "move")]
    pub kind: MoveKind,
    /// Edge class id (or triangle id for 2-3) in the triangulation before the move.
    pub target: usize,
    /// Axis for 4-4 moves.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis: Option<usize>,
    /// Tetrahedron count after the move.
    pub tets_after: usize,
}

/// One step around an edge: a tetrahedron and the labels `(u, v, w, z)`
/// where `uv` is the edge and the walk leaves through the face opposite `w`.
pub type RingStep = (usize, [usize; 4]);

/// Walks around edge `edge` of tetrahedron `tet`, returning one step per
/// tetrahedron edge in the class. Returns `None` if a face on the way is
/// unglued.
pub fn edge_ring(t: &Triangulation, tet: usize, edge: usize) -> Option<Vec<RingStep>> {
    let (u, v) = EDGE_VERTICES[edge];
    let mut rest = (0..4).filter(|&x| x != u && x != v);
    let (w, z) = (rest.next()?, rest.next()?);
    let mut cur = (tet, [u, v, w, z]);
    let mut ring = Vec::new();
    loop {
        ring.push(cur);
        let (tt, s) = cur;
        let g = t.adjacent(tt, s[2])?;
        let p = g.perm;
        let ns = [p.apply(s[0]), p.apply(s[1]), p.apply(s[3]), p.apply(s[2])];
        if g.tet == tet && edge_index(ns[0], ns[1]) == edge {
            return Some(ring);
        }
        if ring.len() > 6 * t.tet_count() {
            return None;
        }
        cur = (g.tet, ns);
    }
}

/// Replaces the tetrahedra in `removed` by `new_count` new ones.
///
/// `internal` lists gluings among the new tetrahedra as
/// `(a, face, b, perm)`. `boundary` sends each outward face `(old, face)` of
/// a removed tetrahedron to `(new, phi)`, where `phi` maps the old vertex
/// labels to the new tetrahedron's labels.
fn retriangulate(
    t: &Triangulation,
    removed: &[usize],
    new_count: usize,
    internal: &[(usize, usize, usize, Perm)],
    boundary: &HashMap<(usize, usize), (usize, Perm)>,
) -> Triangulation {
    let keep: Vec<usize> = (0..t.tet_count()).filter(|x| !removed.contains(x)).collect();
    let mut index = vec![usize::MAX; t.tet_count()];
    for (i, &k) in keep.iter().enumerate() {
        index[k] = i;
    }
    let base = keep.len();
    let mut out = Triangulation::new(base + new_count);
    for &(a, f, b, p) in internal {
        if out.adjacent(base + a, f).is_none() {
            out.join(base + a, f, base + b, p).expect("internal gluings are consistent");
        }
    }
    let locate = |tet: usize, face: usize| -> (usize, Perm) {
        if removed.contains(&tet) {
            let (nt, phi) = boundary[&(tet, face)];
            (base + nt, phi)
        } else {
            (index[tet], Perm::IDENTITY)
        }
    };
    for tet in 0..t.tet_count() {
        for face in 0..4 {
            let Some(g) = t.adjacent(tet, face) else { continue };
            if removed.contains(&tet) && !boundary.contains_key(&(tet, face)) {
                continue;
            }
            let (a, phi_a) = locate(tet, face);
            let (b, phi_b) = locate(g.tet, g.perm.apply(face));
            let fa = phi_a.apply(face);
            if out.adjacent(a, fa).is_some() {
                continue;
            }
            out.join(a, fa, b, phi_b.compose(g.perm).compose(phi_a.inverse()))
                .expect("outer gluings are consistent");
        }
    }
    out
}

fn ring_for_class(t: &Triangulation, edge: usize, needed: usize) -> Result<Vec<RingStep>, MoveError> {
    let classes = t.edge_classes();
    let class = classes.classes.get(edge).ok_or(MoveError::NoSuchEdge(edge))?;
    if class.degree() != needed {
        return Err(MoveError::WrongDegree { edge, degree: class.degree(), needed });
    }
    if class.distinct_tets() != needed {
        return Err(MoveError::RepeatedTetrahedra(edge));
    }
    let first = class.embeddings[0];
    edge_ring(t, first.tet, first.edge).ok_or(MoveError::NoSuchEdge(edge))
}

fn three_two(t: &Triangulation, ring: &[RingStep]) -> Triangulation {
    let mut boundary = HashMap::new();
    for (i, &(tt, s)) in ring.iter().enumerate() {
        for (pole, other, nt) in [(s[0], s[1], 0), (s[1], s[0], 1)] {
            let phi = Perm::from_pairs([(pole, 3), (s[2], i), (s[3], (i + 1) % 3), (other, (i + 2) % 3)]);
            boundary.insert((tt, other), (nt, phi));
        }
    }
    let removed: Vec<usize> = ring.iter().map(|r| r.0).collect();
    retriangulate(t, &removed, 2, &[(0, 3, 1, Perm::IDENTITY)], &boundary)
}

fn two_three(t: &Triangulation, tet: usize, face: usize) -> Triangulation {
    let g = t.adjacent(tet, face).expect("caller checked the face is glued");
    let (d, p) = (g.tet, g.perm);
    let xs: Vec<usize> = (0..4).filter(|&x| x != face).collect();
    let mut boundary = HashMap::new();
    let mut internal = Vec::new();
    let swap23 = Perm::transposition(2, 3);
    for i in 0..3 {
        let (xi, xj, xk) = (xs[i], xs[(i + 1) % 3], xs[(i + 2) % 3]);
        boundary.insert((tet, xk), (i, Perm::from_pairs([(face, 0), (xk, 1), (xi, 2), (xj, 3)])));
        boundary.insert(
            (d, p.apply(xk)),
            (i, Perm::from_pairs([(p.apply(face), 1), (p.apply(xk), 0), (p.apply(xi), 2), (p.apply(xj), 3)])),
        );
        internal.push((i, 2, (i + 1) % 3, swap23));
    }
    retriangulate(t, &[tet, d], 3, &internal, &boundary)
}

/// 3-2 move on a degree-3 edge class meeting three distinct tetrahedra.
pub fn pachner_32(t: &Triangulation, edge: usize) -> Result<Triangulation, MoveError> {
    let ring = ring_for_class(t, edge, 3)?;
    Ok(three_two(t, &ring))
}

/// 2-3 move on a triangle, numbered as in [`Triangulation::triangles`].
pub fn pachner_23(t: &Triangulation, triangle: usize) -> Result<Triangulation, MoveError> {
    let &(tet, face) = t.triangles().get(triangle).ok_or(MoveError::NoSuchTriangle(triangle))?;
    let g = t.adjacent(tet, face).ok_or(MoveError::Boundary(triangle))?;
    if g.tet == tet {
        return Err(MoveError::SameTetrahedron(triangle));
    }
    Ok(two_three(t, tet, face))
}

/// 4-4 move on a degree-4 edge class meeting four distinct tetrahedra.
///
/// Walking around the edge gives tetrahedra `T0, T1, T2, T3`. Axis `a`
/// performs a 2-3 move across the face shared by `Ta` and `T(a+1)`, then a
/// 3-2 move on the resulting degree-3 edge. Axis 0 and axis 1 yield the two
/// possible new diagonals.
pub fn move_44(t: &Triangulation, edge: usize, axis: usize) -> Result<Triangulation, MoveError> {
    if axis > 1 {
        return Err(MoveError::BadAxis(axis));
    }
    let ring = ring_for_class(t, edge, 4)?;
    Ok(four_four(t, &ring, axis))
}

fn four_four(t: &Triangulation, ring: &[RingStep], axis: usize) -> Triangulation {
    let (tt, s) = ring[axis];
    let partner = t.adjacent(tt, s[2]).expect("ring faces are glued").tet;
    let mid = two_three(t, tt, s[2]);
    let (t3, s3) = ring[(axis + 2) % 4];
    let new_index = (0..t.tet_count())
        .filter(|&x| x != tt && x != partner)
        .position(|x| x == t3)
        .expect("opposite tetrahedron survives the 2-3 move");
    let ring2 = edge_ring(&mid, new_index, edge_index(s3[0], s3[1])).expect("closed triangulation");
    three_two(&mid, &ring2)
}

fn first_32(t: &Triangulation) -> Option<usize> {
    t.edge_classes().classes.iter().position(|c| c.degree() == 3 && c.distinct_tets() == 3)
}

/// Greedy simplification: apply 3-2 moves on the lowest-numbered eligible
/// edge while possible; otherwise look for a 4-4 move that creates a 3-2
/// opportunity and apply both. Stops when neither applies.
pub fn simplify(t: &Triangulation) -> (Triangulation, Vec<TraceEntry>) {
    let mut cur = t.clone().without_layers();
    let mut trace = Vec::new();
    'outer: loop {
        if let Some(e) = first_32(&cur) {
            cur = pachner_32(&cur, e).expect("eligible edge");
            trace.push(TraceEntry {
                kind: MoveKind::ThreeTwo,
                target: e,
                axis: None,
                tets_after: cur.tet_count(),
            });
            continue;
        }
        let classes = cur.edge_classes();
        for (id, c) in classes.classes.iter().enumerate() {
            if c.degree() != 4 || c.distinct_tets() != 4 {
                continue;
            }
            for axis in 0..2 {
                let next = move_44(&cur, id, axis).expect("eligible edge");
                if let Some(e) = first_32(&next) {
                    trace.push(TraceEntry {
                        kind: MoveKind::FourFour,
                        target: id,
                        axis: Some(axis),
                        tets_after: next.tet_count(),
                    });
                    cur = pachner_32(&next, e).expect("eligible edge");
                    trace.push(TraceEntry {
                        kind: MoveKind::ThreeTwo,
                        target: e,
                        axis: None,
                        tets_after: cur.tet_count(),
                    });
                    continue 'outer;
                }
            }
        }
        return (cur, trace);
    }
}
