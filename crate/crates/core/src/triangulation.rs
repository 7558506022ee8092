//! Ideal triangulations as face-gluing tables, the layered Sakuma-Weeks
//! builder, and edge-class analysis.
//!
//! Tetrahedron vertices are labelled `0..4`; face `f` is the face opposite
//! vertex `f`. A gluing of face `f` of tetrahedron `t` carries a permutation
//! `p` sending each vertex of `t` to the vertex of the partner tetrahedron it
//! is identified with, so the partner face is `p(f)`.
//!
//! Edges inside a tetrahedron are numbered `0 = 01, 1 = 02, 2 = 03, 3 = 12,
//! 4 = 13, 5 = 23`. Opposite edge pairs are numbered by the edge through
//! vertex 0: pair `0 = {01, 23}`, pair `1 = {02, 13}`, pair `2 = {03, 12}`.

use crate::perm::Perm;
use crate::word::{Letter, Word};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use thiserror::Error;

/// Endpoints of each edge, indexed by edge number.
pub const EDGE_VERTICES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Opposite-pair number of each edge.
pub const EDGE_PAIR: [usize; 6] = [0, 1, 2, 2, 1, 0];

/// The two vertex pairs making up each opposite-edge pair.
pub const PAIR_VERTICES: [[(usize, usize); 2]; 3] = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];

/// Edge number joining vertices `a` and `b`.
///
/// # Panics
///
/// Panics if `a == b` or either is not a vertex label.
pub fn edge_index(a: usize, b: usize) -> usize {
    let (u, v) = if a < b { (a, b) } else { (b, a) };
    EDGE_VERTICES.iter().position(|&e| e == (u, v)).expect("distinct vertex labels")
}

/// The far end of a face gluing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gluing {
    /// Partner tetrahedron.
    pub tet: usize,
    /// Vertex correspondence from this tetrahedron to the partner.
    pub perm: Perm,
}

/// Role of an edge pair inside one layer of a layered triangulation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    /// Edges that an `R` twist turns into diagonals.
    Vertical,
    /// Edges that an `L` twist turns into diagonals.
    Horizontal,
    /// The edges flipped by the layer.
    Diagonal,
}

/// Which opposite-edge pair plays each role in one layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerRoles {
    /// Pair number of the vertical edges.
    pub vertical: usize,
    /// Pair number of the horizontal edges.
    pub horizontal: usize,
    /// Pair number of the diagonal edges.
    pub diagonal: usize,
}

impl LayerRoles {
    /// Pair number holding `role`.
    pub fn pair(&self, role: Role) -> usize {
        match role {
            Role::Vertical => self.vertical,
            Role::Horizontal => self.horizontal,
            Role::Diagonal => self.diagonal,
        }
    }

    /// Role held by pair number `pair`.
    pub fn role_of_pair(&self, pair: usize) -> Role {
        if pair == self.vertical {
            Role::Vertical
        } else if pair == self.horizontal {
            Role::Horizontal
        } else {
            Role::Diagonal
        }
    }
}

/// Errors from constructing or editing triangulations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum TriangulationError {
    /// A tetrahedron or face index is out of range.
    #[error("tetrahedron {tet} face {face} is out of range")]
    OutOfRange {
        /// Tetrahedron index.
        tet: usize,
        /// Face index.
        face: usize,
    },
    /// The face is already glued.
    #[error("tetrahedron {tet} face {face} is already glued")]
    AlreadyGlued {
        /// Tetrahedron index.
        tet: usize,
        /// Face index.
        face: usize,
    },
    /// A face cannot be glued to itself.
    #[error("tetrahedron {tet} face {face} cannot be glued to itself")]
    SelfGluing {
        /// Tetrahedron index.
        tet: usize,
        /// Face index.
        face: usize,
    },
    /// The word describes a torus link or is otherwise unusable.
    #[error("word {0} is not hyperbolic (needs at least two syllables)")]
    NotHyperbolic(String),
    /// The builder expects words starting with `R`.
    #[error("word {0} must start with R; normalize it first")]
    NotNormalized(String),
    /// A gluing table could not be parsed.
    #[error("gluing table: {0}")]
    Parse(String),
}

/// One edge of one tetrahedron, as a member of an edge class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeEmbedding {
    /// Tetrahedron index.
    pub tet: usize,
    /// Edge number inside the tetrahedron.
    pub edge: usize,
    /// Layer role, for builder output.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub role: Option<Role>,
}

/// An equivalence class of tetrahedron edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeClass {
    /// Members in order of discovery (tetrahedron, then edge number).
    pub embeddings: Vec<EdgeEmbedding>,
}

impl EdgeClass {
    /// Number of tetrahedron edges in the class.
    pub fn degree(&self) -> usize {
        self.embeddings.len()
    }

    /// Number of distinct tetrahedra meeting the class.
    pub fn distinct_tets(&self) -> usize {
        let mut tets: Vec<usize> = self.embeddings.iter().map(|e| e.tet).collect();
        tets.sort_unstable();
        tets.dedup();
        tets.len()
    }
}

/// All edge classes of a triangulation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeClassTable {
    /// Classes numbered by first appearance, scanning tetrahedra then edges.
    pub classes: Vec<EdgeClass>,
    /// `class_of[tet][edge]` is the class id of that edge.
    pub class_of: Vec<[usize; 6]>,
}

impl EdgeClassTable {
    /// Degrees of all classes in class order.
    pub fn degrees(&self) -> Vec<usize> {
        self.classes.iter().map(EdgeClass::degree).collect()
    }

    /// Number of classes.
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    /// True when there are no classes.
    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

/// Summary of a structural check of a triangulation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// Every gluing is matched by its inverse.
    pub involution: bool,
    /// No face is left unglued.
    pub all_faces_glued: bool,
    /// The number of edge classes equals the number of tetrahedra.
    pub edge_count_matches: bool,
    /// No edge is identified with itself in reverse.
    pub edges_valid: bool,
    /// Euler characteristic of each ideal-vertex link, when all faces are glued.
    pub vertex_link_euler: Vec<i64>,
    /// Every vertex link is a closed surface of Euler characteristic zero.
    pub links_euler_zero: bool,
    /// Human-readable descriptions of failed checks.
    pub problems: Vec<String>,
}

impl ValidationReport {
    /// True when every check passed.
    pub fn passed(&self) -> bool {
        self.involution
            && self.all_faces_glued
            && self.edge_count_matches
            && self.edges_valid
            && self.links_euler_zero
    }
}

/// Serializable form of a single gluing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingRecord {
    /// Source tetrahedron.
    pub tet: usize,
    /// Source face.
    pub face: usize,
    /// Destination tetrahedron.
    pub dest_tet: usize,
    /// Destination face.
    pub dest_face: usize,
    /// Vertex correspondence as four digits.
    pub perm: Perm,
}

/// Serializable form of a whole triangulation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationRecord {
    /// Number of tetrahedra.
    pub tet_count: usize,
    /// Every glued face, listed once from each side.
    pub gluings: Vec<GluingRecord>,
    /// Layer roles for builder output.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layers: Option<Vec<LayerRoles>>,
}

/// A triangulation by ideal tetrahedra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    adj: Vec<[Option<Gluing>; 4]>,
    layers: Option<Vec<LayerRoles>>,
}

impl Triangulation {
    /// `n` tetrahedra with no faces glued.
    pub fn new(n: usize) -> Triangulation {
        Triangulation { adj: vec![[None; 4]; n], layers: None }
    }

    /// Number of tetrahedra.
    pub fn tet_count(&self) -> usize {
        self.adj.len()
    }

    /// The gluing on face `face` of tetrahedron `tet`.
    pub fn adjacent(&self, tet: usize, face: usize) -> Option<Gluing> {
        self.adj.get(tet).and_then(|row| row.get(face).copied().flatten())
    }

    /// Glues face `face` of `tet` to face `perm(face)` of `dest`.
    pub fn join(
        &mut self,
        tet: usize,
        face: usize,
        dest: usize,
        perm: Perm,
    ) -> Result<(), TriangulationError> {
        let n = self.adj.len();
        if tet >= n || face > 3 {
            return Err(TriangulationError::OutOfRange { tet, face });
        }
        let dest_face = perm.apply(face);
        if dest >= n {
            return Err(TriangulationError::OutOfRange { tet: dest, face: dest_face });
        }
        if tet == dest && face == dest_face {
            return Err(TriangulationError::SelfGluing { tet, face });
        }
        if self.adj[tet][face].is_some() {
            return Err(TriangulationError::AlreadyGlued { tet, face });
        }
        if self.adj[dest][dest_face].is_some() {
            return Err(TriangulationError::AlreadyGlued { tet: dest, face: dest_face });
        }
        self.adj[tet][face] = Some(Gluing { tet: dest, perm });
        self.adj[dest][dest_face] = Some(Gluing { tet, perm: perm.inverse() });
        Ok(())
    }

    /// Removes the gluing on a face and on its partner.
    pub fn unjoin(&mut self, tet: usize, face: usize) -> Option<Gluing> {
        let g = self.adjacent(tet, face)?;
        self.adj[tet][face] = None;
        let back = g.perm.apply(face);
        if self.adj[g.tet][back].map(|b| b.tet) == Some(tet) {
            self.adj[g.tet][back] = None;
        }
        Some(g)
    }

    /// Layer roles recorded by the builder.
    pub fn layers(&self) -> Option<&[LayerRoles]> {
        self.layers.as_deref()
    }

    /// Layer of a tetrahedron in builder output.
    pub fn layer_index(&self, tet: usize) -> Option<usize> {
        self.layers.as_ref().map(|_| tet / 2)
    }

    /// Role of edge `edge` of tetrahedron `tet` in builder output.
    pub fn edge_role(&self, tet: usize, edge: usize) -> Option<Role> {
        let layers = self.layers.as_ref()?;
        layers.get(tet / 2).map(|l| l.role_of_pair(EDGE_PAIR[edge]))
    }

    /// Drops layer metadata.
    pub fn without_layers(mut self) -> Triangulation {
        self.layers = None;
        self
    }

    /// True if every tetrahedron is reachable from tetrahedron 0.
    pub fn is_connected(&self) -> bool {
        let n = self.tet_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(t) = stack.pop() {
            for g in self.adj[t].iter().flatten() {
                if !seen[g.tet] {
                    seen[g.tet] = true;
                    stack.push(g.tet);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Renumbers tetrahedra and vertices: tetrahedron `t` becomes
    /// `tet_map[t]` and its vertex `v` becomes `vertex_maps[t](v)`.
    ///
    /// # Panics
    ///
    /// Panics if `tet_map` is not a permutation of the tetrahedra.
    pub fn relabel(&self, tet_map: &[usize], vertex_maps: &[Perm]) -> Triangulation {
        let n = self.tet_count();
        let mut out = Triangulation::new(n);
        for t in 0..n {
            for f in 0..4 {
                if let Some(g) = self.adj[t][f] {
                    let nt = tet_map[t];
                    let nf = vertex_maps[t].apply(f);
                    let perm = vertex_maps[g.tet].compose(g.perm).compose(vertex_maps[t].inverse());
                    out.adj[nt][nf] = Some(Gluing { tet: tet_map[g.tet], perm });
                }
            }
        }
        out
    }

    /// Edge classes via union-find over face gluings.
    pub fn edge_classes(&self) -> EdgeClassTable {
        let n = self.tet_count();
        let mut uf = UnionFind::new(6 * n);
        for t in 0..n {
            for f in 0..4 {
                if let Some(g) = self.adj[t][f] {
                    for (e, &(a, b)) in EDGE_VERTICES.iter().enumerate() {
                        if a != f && b != f {
                            let e2 = edge_index(g.perm.apply(a), g.perm.apply(b));
                            uf.union(6 * t + e, 6 * g.tet + e2);
                        }
                    }
                }
            }
        }
        let mut id_of_root = vec![usize::MAX; 6 * n];
        let mut classes: Vec<EdgeClass> = Vec::new();
        let mut class_of = vec![[0usize; 6]; n];
        for (t, row) in class_of.iter_mut().enumerate() {
            for (e, slot) in row.iter_mut().enumerate() {
                let r = uf.find(6 * t + e);
                if id_of_root[r] == usize::MAX {
                    id_of_root[r] = classes.len();
                    classes.push(EdgeClass { embeddings: Vec::new() });
                }
                let id = id_of_root[r];
                *slot = id;
                classes[id].embeddings.push(EdgeEmbedding { tet: t, edge: e, role: self.edge_role(t, e) });
            }
        }
        EdgeClassTable { classes, class_of }
    }

    /// Triangle classes as their first (tetrahedron, face) occurrence.
    pub fn triangles(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for t in 0..self.tet_count() {
            for f in 0..4 {
                match self.adj[t][f] {
                    Some(g) if (g.tet, g.perm.apply(f)) < (t, f) => {}
                    _ => out.push((t, f)),
                }
            }
        }
        out
    }

    /// Checks gluing consistency, closure, the edge count and vertex links.
    pub fn validate(&self) -> ValidationReport {
        let n = self.tet_count();
        let mut problems = Vec::new();
        let mut involution = true;
        let mut all_faces_glued = true;
        for t in 0..n {
            for f in 0..4 {
                match self.adj[t][f] {
                    None => {
                        all_faces_glued = false;
                        problems.push(format!("tetrahedron {t} face {f} is unglued"));
                    }
                    Some(g) => {
                        let back = self.adjacent(g.tet, g.perm.apply(f));
                        if back != Some(Gluing { tet: t, perm: g.perm.inverse() }) {
                            involution = false;
                            problems.push(format!("gluing of tetrahedron {t} face {f} is not matched"));
                        }
                    }
                }
            }
        }
        let edge_count = self.edge_classes().len();
        let edge_count_matches = edge_count == n;
        if !edge_count_matches {
            problems.push(format!("{edge_count} edge classes for {n} tetrahedra"));
        }

        // Edge ends: slot 12 t + 2 e + k is the end of edge e at its k-th vertex.
        let mut ends = UnionFind::new(12 * n);
        let mut corners = UnionFind::new(4 * n);
        for t in 0..n {
            for f in 0..4 {
                if let Some(g) = self.adj[t][f] {
                    for v in (0..4).filter(|&v| v != f) {
                        corners.union(4 * t + v, 4 * g.tet + g.perm.apply(v));
                    }
                    for (e, &(a, b)) in EDGE_VERTICES.iter().enumerate() {
                        if a == f || b == f {
                            continue;
                        }
                        let (pa, pb) = (g.perm.apply(a), g.perm.apply(b));
                        let e2 = edge_index(pa, pb);
                        let (k_a, k_b) = if pa < pb { (0, 1) } else { (1, 0) };
                        ends.union(12 * t + 2 * e, 12 * g.tet + 2 * e2 + k_a);
                        ends.union(12 * t + 2 * e + 1, 12 * g.tet + 2 * e2 + k_b);
                    }
                }
            }
        }
        let mut edges_valid = true;
        for t in 0..n {
            for e in 0..6 {
                if ends.find(12 * t + 2 * e) == ends.find(12 * t + 2 * e + 1) {
                    edges_valid = false;
                }
            }
        }
        if !edges_valid {
            problems.push("an edge is identified with itself in reverse".to_string());
        }

        let mut vertex_link_euler = Vec::new();
        let mut links_euler_zero = all_faces_glued && involution;
        if all_faces_glued && involution {
            let mut root_ids: Vec<usize> = Vec::new();
            let mut faces_of: Vec<i64> = Vec::new();
            let mut verts_of: Vec<i64> = Vec::new();
            let mut class_id = vec![usize::MAX; 4 * n];
            for c in 0..4 * n {
                let r = corners.find(c);
                if class_id[r] == usize::MAX {
                    class_id[r] = root_ids.len();
                    root_ids.push(r);
                    faces_of.push(0);
                    verts_of.push(0);
                }
                faces_of[class_id[r]] += 1;
            }
            let mut end_seen = vec![false; 12 * n];
            for t in 0..n {
                for (e, &(a, b)) in EDGE_VERTICES.iter().enumerate() {
                    for (k, v) in [(0, a), (1, b)] {
                        let r = ends.find(12 * t + 2 * e + k);
                        if !end_seen[r] {
                            end_seen[r] = true;
                            verts_of[class_id[corners.find(4 * t + v)]] += 1;
                        }
                    }
                }
            }
            for (f, v) in faces_of.iter().zip(&verts_of) {
                let chi = v - 3 * f / 2 + f;
                vertex_link_euler.push(chi);
                if chi != 0 {
                    links_euler_zero = false;
                }
            }
            if !links_euler_zero {
                problems.push(format!("vertex link Euler characteristics {vertex_link_euler:?}"));
            }
        } else {
            problems.push("vertex links not computed on an open complex".to_string());
        }

        ValidationReport {
            involution,
            all_faces_glued,
            edge_count_matches,
            edges_valid,
            vertex_link_euler,
            links_euler_zero,
            problems,
        }
    }

    /// Table entries per tetrahedron for faces 012, 013, 023 and 123.
    pub fn gluing_rows(&self) -> Vec<[String; 4]> {
        (0..self.tet_count())
            .map(|t| {
                [3, 2, 1, 0].map(|f| match self.adj[t][f] {
                    Some(g) => format!("{} ({})", g.tet, g.perm.face_images(f)),
                    None => "-".to_string(),
                })
            })
            .collect()
    }

    /// Text gluing table with one row per tetrahedron.
    pub fn gluing_table(&self) -> String {
        let mut out = String::from("Tet | Face 012   Face 013   Face 023   Face 123\n");
        for (t, row) in self.gluing_rows().iter().enumerate() {
            let _ = write!(out, "{t:>3} |");
            for entry in row {
                let _ = write!(out, " {entry:<10}");
            }
            out.truncate(out.trim_end().len());
            out.push('\n');
        }
        out
    }

    /// Builds a triangulation from table rows in the format of
    /// [`Triangulation::gluing_rows`]: entries for faces 012, 013, 023, 123.
    pub fn from_gluing_rows<S: AsRef<str>>(rows: &[[S; 4]]) -> Result<Triangulation, TriangulationError> {
        let n = rows.len();
        let mut tri = Triangulation::new(n);
        for (t, row) in rows.iter().enumerate() {
            for (col, entry) in row.iter().enumerate() {
                let face = 3 - col;
                let entry = entry.as_ref().trim();
                if entry == "-" {
                    continue;
                }
                let (dest, perm) = parse_entry(entry, face)?;
                if dest >= n {
                    return Err(TriangulationError::Parse(format!("destination {dest} out of range")));
                }
                match tri.adj[t][face] {
                    Some(g) if g == (Gluing { tet: dest, perm }) => {}
                    Some(_) => {
                        return Err(TriangulationError::Parse(format!(
                            "tetrahedron {t} face {face} disagrees with its partner"
                        )))
                    }
                    None => tri.join(t, face, dest, perm)?,
                }
            }
        }
        Ok(tri)
    }

    /// Parses the text produced by [`Triangulation::gluing_table`].
    pub fn from_gluing_table(text: &str) -> Result<Triangulation, TriangulationError> {
        let mut rows: Vec<[String; 4]> = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with("Tet") {
                continue;
            }
            let body = line.split_once('|').map_or(line, |(_, b)| b);
            let tokens: Vec<&str> = body.split_whitespace().collect();
            let mut entries = Vec::new();
            let mut i = 0;
            while i < tokens.len() {
                if tokens[i] == "-" {
                    entries.push("-".to_string());
                    i += 1;
                } else if i + 1 < tokens.len() {
                    entries.push(format!("{} {}", tokens[i], tokens[i + 1]));
                    i += 2;
                } else {
                    return Err(TriangulationError::Parse(format!("truncated row {line:?}")));
                }
            }
            let row: [String; 4] = entries
                .try_into()
                .map_err(|_| TriangulationError::Parse(format!("row {line:?} needs four entries")))?;
            rows.push(row);
        }
        Triangulation::from_gluing_rows(&rows)
    }

    /// Serializable record of all gluings.
    pub fn to_record(&self) -> TriangulationRecord {
        let mut gluings = Vec::new();
        for t in 0..self.tet_count() {
            for f in 0..4 {
                if let Some(g) = self.adj[t][f] {
                    gluings.push(GluingRecord {
                        tet: t,
                        face: f,
                        dest_tet: g.tet,
                        dest_face: g.perm.apply(f),
                        perm: g.perm,
                    });
                }
            }
        }
        TriangulationRecord { tet_count: self.tet_count(), gluings, layers: self.layers.clone() }
    }

    /// Rebuilds a triangulation from its record.
    pub fn from_record(rec: &TriangulationRecord) -> Result<Triangulation, TriangulationError> {
        let mut tri = Triangulation::new(rec.tet_count);
        for g in &rec.gluings {
            if g.perm.apply(g.face) != g.dest_face {
                return Err(TriangulationError::Parse(format!(
                    "gluing of tetrahedron {} face {} names the wrong destination face",
                    g.tet, g.face
                )));
            }
            match tri.adjacent(g.tet, g.face) {
                Some(existing) if existing == (Gluing { tet: g.dest_tet, perm: g.perm }) => {}
                _ => tri.join(g.tet, g.face, g.dest_tet, g.perm)?,
            }
        }
        tri.layers = rec.layers.clone();
        Ok(tri)
    }
}

fn parse_entry(entry: &str, face: usize) -> Result<(usize, Perm), TriangulationError> {
    let bad = || TriangulationError::Parse(format!("malformed entry {entry:?}"));
    let (dest, rest) = entry.split_once('(').ok_or_else(bad)?;
    let dest: usize = dest.trim().parse().map_err(|_| bad())?;
    let digits = rest.trim().strip_suffix(')').ok_or_else(bad)?;
    let digits: Vec<u8> = digits.bytes().collect();
    if digits.len() != 3 || digits.iter().any(|d| !(b'0'..=b'3').contains(d)) {
        return Err(bad());
    }
    let mut img = [u8::MAX; 4];
    for (v, d) in (0..4).filter(|&v| v != face).zip(&digits) {
        img[v] = d - b'0';
    }
    let used: u8 = digits.iter().map(|d| d - b'0').sum();
    img[face] = 6u8.checked_sub(used).ok_or_else(bad)?;
    Perm::new(img).map(|p| (dest, p)).ok_or_else(bad)
}

/// Computed degree facts beside the values predicted from the word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    /// Some edge class has degree 3.
    pub has_degree3: bool,
    /// Some edge class has degree 4.
    pub has_degree4: bool,
    /// Prediction: first or last exponent exceeds one.
    pub predicted_degree3: bool,
    /// Prediction: an interior exponent is at least two or an end exponent
    /// is at least three.
    pub predicted_degree4: bool,
}

impl DegreeReport {
    /// True when both computed facts agree with the predictions.
    pub fn matches(&self) -> bool {
        self.has_degree3 == self.predicted_degree3 && self.has_degree4 == self.predicted_degree4
    }
}

/// Degree-3 and degree-4 presence in `t`, next to the predictions made from
/// the exponents of `w`.
pub fn degree_predicates(t: &Triangulation, w: &Word) -> DegreeReport {
    let degrees = t.edge_classes().degrees();
    let a = w.exponents();
    let n = a.len();
    let first = a.first().copied().unwrap_or(0);
    let last = a.last().copied().unwrap_or(0);
    let interior = if n > 2 { a[1..n - 1].iter().any(|&x| x >= 2) } else { false };
    DegreeReport {
        has_degree3: degrees.contains(&3),
        has_degree4: degrees.contains(&4),
        predicted_degree3: first > 1 || last > 1,
        predicted_degree4: interior || first >= 3 || last >= 3,
    }
}

/// Builds the layered Sakuma-Weeks triangulation of the word.
///
/// The word must start with `R` and have at least two syllables. Layer `i`
/// holds tetrahedra `2i` and `2i + 1`. All tetrahedra share the labelling in
/// which vertices are the four punctures, so each opposite-edge pair is one
/// of the three slope classes on the four-punctured sphere.
pub fn build_sakuma_weeks(w: &Word) -> Result<Triangulation, TriangulationError> {
    if !w.is_hyperbolic() {
        return Err(TriangulationError::NotHyperbolic(w.to_string()));
    }
    if !w.is_normalized() {
        return Err(TriangulationError::NotNormalized(w.to_string()));
    }
    let letters = w.letters();
    let layer_count = letters.len() - 1;

    // roles[0], roles[1], roles[2]: pair numbers of vertical, horizontal, diagonal.
    let mut roles = [0usize, 1, 2];
    let slot = |l: Letter| match l {
        Letter::R => 0,
        Letter::L => 1,
    };
    let bottom_fold = roles[slot(letters[0])];
    let mut layers = Vec::with_capacity(layer_count);
    for (i, &letter) in letters.iter().enumerate().take(layer_count) {
        if i > 0 {
            roles.swap(slot(letter), 2);
        }
        layers.push(LayerRoles { vertical: roles[0], horizontal: roles[1], diagonal: roles[2] });
    }
    let top_fold = roles[slot(letters[letters.len() - 1])];

    let tet_of = |layer: usize, v: usize, top: bool| -> usize {
        let [(a, b), _] = PAIR_VERTICES[layers[layer].diagonal];
        let in_first = v == a || v == b;
        2 * layer + usize::from(in_first != top)
    };

    let mut tri = Triangulation::new(2 * layer_count);
    for i in 0..layer_count - 1 {
        for v in 0..4 {
            tri.join(tet_of(i, v, true), v, tet_of(i + 1, v, false), Perm::IDENTITY)?;
        }
    }
    let mut fold = |layer: usize, pair: usize, top: bool| -> Result<(), TriangulationError> {
        let [(x, y), (z, w)] = PAIR_VERTICES[pair];
        for (p, q) in [(z, w), (x, y)] {
            let t1 = tet_of(layer, q, top);
            let t2 = tet_of(layer, p, top);
            tri.join(t1, q, t2, Perm::transposition(p, q))?;
        }
        Ok(())
    };
    fold(0, bottom_fold, false)?;
    fold(layer_count - 1, top_fold, true)?;
    tri.layers = Some(layers);
    Ok(tri)
}

/// Minimal union-find with path halving.
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// The two tables from the worked examples, as text rows.
pub mod tables {
    /// Six-tetrahedron table for `R^2LR`.
    pub const TABLE_R2LR: [[&str; 4]; 6] = [
        ["3 (102)", "1 (213)", "1 (021)", "2 (023)"],
        ["0 (032)", "2 (103)", "3 (123)", "0 (103)"],
        ["4 (032)", "1 (103)", "0 (123)", "5 (321)"],
        ["0 (102)", "4 (031)", "5 (021)", "1 (023)"],
        ["5 (032)", "3 (031)", "2 (021)", "5 (103)"],
        ["3 (032)", "4 (213)", "4 (021)", "2 (321)"],
    ];

    /// Eight-tetrahedron table for `RL^3R`.
    pub const TABLE_RL3R: [[&str; 4]; 8] = [
        ["2 (032)", "1 (213)", "1 (021)", "3 (321)"],
        ["0 (032)", "2 (031)", "3 (021)", "0 (103)"],
        ["4 (032)", "1 (031)", "0 (021)", "5 (321)"],
        ["1 (032)", "4 (031)", "5 (021)", "0 (321)"],
        ["6 (032)", "3 (031)", "2 (021)", "7 (321)"],
        ["3 (032)", "6 (031)", "7 (021)", "2 (321)"],
        ["7 (032)", "5 (031)", "4 (021)", "7 (103)"],
        ["5 (032)", "6 (213)", "6 (021)", "4 (321)"],
    ];
}
