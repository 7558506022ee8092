//! Exact angle structures on layered triangulations.
//!
//! Angles are rational multiples of π ([`PiAngle`]). A layer carries one
//! ordered triple `(θ1, θ2, θ3)` shared by both of its tetrahedra; `θ1` sits
//! on the horizontal edge pair, `θ2` on the vertical pair and `θ3` on the
//! diagonal pair.
//!
//! Synthesis has two stages. [`shape_sequence`] picks one catalog shape per
//! layer from the block decomposition. [`orient_shapes`] then searches for
//! the order of each shape's three angles that satisfies every edge
//! equation exactly, trying the block's natural orientation first.

use crate::blocks::{Block, BlockDecomposition, BlockError, BlockKind};
use crate::triangulation::{build_sakuma_weeks, Role, Triangulation, TriangulationError, EDGE_PAIR};
use crate::word::Word;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// A rational multiple of π.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct PiAngle(pub Rational64);

impl PiAngle {
    /// `num/den · π`.
    pub fn new(num: i64, den: i64) -> PiAngle {
        PiAngle(Rational64::new(num, den))
    }

    /// `units · π/24`.
    pub fn from_units(units: i64) -> PiAngle {
        PiAngle::new(units, 24)
    }

    /// Zero.
    pub fn zero() -> PiAngle {
        PiAngle(Rational64::zero())
    }

    /// Value in radians.
    pub fn radians(self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN) * std::f64::consts::PI
    }
}

impl std::ops::Add for PiAngle {
    type Output = PiAngle;
    fn add(self, o: PiAngle) -> PiAngle {
        PiAngle(self.0 + o.0)
    }
}

impl std::ops::Sub for PiAngle {
    type Output = PiAngle;
    fn sub(self, o: PiAngle) -> PiAngle {
        PiAngle(self.0 - o.0)
    }
}

impl std::ops::Mul<i64> for PiAngle {
    type Output = PiAngle;
    fn mul(self, k: i64) -> PiAngle {
        PiAngle(self.0 * k)
    }
}

impl fmt::Display for PiAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} π", self.0)
    }
}

impl FromStr for PiAngle {
    type Err = String;
    fn from_str(s: &str) -> Result<PiAngle, String> {
        let body = s.trim().trim_end_matches('π').trim();
        body.parse::<Rational64>().map(PiAngle).map_err(|_| format!("cannot parse angle {s:?}"))
    }
}

impl From<PiAngle> for String {
    fn from(a: PiAngle) -> String {
        a.to_string()
    }
}

impl TryFrom<String> for PiAngle {
    type Error = String;
    fn try_from(s: String) -> Result<PiAngle, String> {
        s.parse()
    }
}

/// Catalog shapes of ideal tetrahedra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Shape {
    /// Regular ideal tetrahedron.
    #[serde(rename = "0")]
    Zero,
    /// `(1/3, 3/8, 7/24)·π`.
    I,
    /// `(1/3, 1/4, 5/12)·π`.
    II,
    /// `(1/4, 1/4, 1/2)·π`.
    III,
    /// `(5/24, 7/24, 1/2)·π`.
    IV,
    /// `(1/6, 1/2, 1/3)·π`.
    V,
    /// `(1/6, 1/4, 7/12)·π`.
    VI,
    /// `(1/8, 3/8, 1/2)·π`.
    VII,
    /// `(1/8, 1/4, 5/8)·π`.
    VIII,
    /// `(1/12, 7/12, 1/3)·π`.
    IX,
    /// `(2/3, 1/6, 1/6)·π`, used for the three-layer all-squared word.
    X2,
}

impl Shape {
    /// Every shape in catalog order.
    pub const ALL: [Shape; 11] = [
        Shape::Zero,
        Shape::I,
        Shape::II,
        Shape::III,
        Shape::IV,
        Shape::V,
        Shape::VI,
        Shape::VII,
        Shape::VIII,
        Shape::IX,
        Shape::X2,
    ];

    /// Display name.
    pub fn name(self) -> &'static str {
        match self {
            Shape::Zero => "0",
            Shape::I => "I",
            Shape::II => "II",
            Shape::III => "III",
            Shape::IV => "IV",
            Shape::V => "V",
            Shape::VI => "VI",
            Shape::VII => "VII",
            Shape::VIII => "VIII",
            Shape::IX => "IX",
            Shape::X2 => "X2",
        }
    }

    /// Catalog triple in units of π/24.
    fn catalog_units(self) -> [i64; 3] {
        match self {
            Shape::Zero => [8, 8, 8],
            Shape::I => [8, 9, 7],
            Shape::II => [8, 6, 10],
            Shape::III => [6, 6, 12],
            Shape::IV => [5, 7, 12],
            Shape::V => [4, 12, 8],
            Shape::VI => [4, 6, 14],
            Shape::VII => [3, 9, 12],
            Shape::VIII => [3, 6, 15],
            Shape::IX => [2, 14, 8],
            Shape::X2 => [16, 4, 4],
        }
    }

    /// Orientation used by blocks that start with `L`, in units of π/24.
    fn nominal_units(self) -> [i64; 3] {
        match self {
            Shape::Zero => [8, 8, 8],
            Shape::I => [7, 9, 8],
            Shape::II => [6, 10, 8],
            Shape::III => [6, 6, 12],
            Shape::IV => [5, 7, 12],
            Shape::V => [4, 12, 8],
            Shape::VI => [4, 14, 6],
            Shape::VII => [3, 9, 12],
            Shape::VIII => [3, 15, 6],
            Shape::IX => [2, 14, 8],
            Shape::X2 => [16, 4, 4],
        }
    }

    /// The catalog triple.
    pub fn triple(self) -> [PiAngle; 3] {
        self.catalog_units().map(PiAngle::from_units)
    }

    /// Identifies the shape of a triple up to reordering.
    pub fn of_triple(t: &[PiAngle; 3]) -> Option<Shape> {
        let mut key = *t;
        key.sort();
        Shape::ALL.into_iter().find(|s| {
            let mut c = s.triple();
            c.sort();
            c == key
        })
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A catalog entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeInfo {
    /// The shape.
    pub shape: Shape,
    /// Its dihedral angles.
    pub triple: [PiAngle; 3],
}

/// All catalog shapes with their triples.
pub fn shape_catalog() -> Vec<ShapeInfo> {
    Shape::ALL.into_iter().map(|shape| ShapeInfo { shape, triple: shape.triple() }).collect()
}

/// Which shape rules to use for the trailing blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShapeRules {
    /// Rules checked to produce valid structures: trailing squared runs of
    /// length `k ≥ 4` use `IX, IV, III^(2k-7), IV, V^4`, and an unfinished
    /// `B3` always ends on `VII`.
    Verified,
    /// The per-block counts as tabulated: `IX, III^(2k-5), V^4` for trailing
    /// runs with `k ≥ 3`, and an unfinished `B3` with several squared runs
    /// ending on `III`.
    Tabulated,
}

/// One shape per layer: `Δ1` first, then one per inner letter.
pub fn shape_sequence(d: &BlockDecomposition) -> Vec<Shape> {
    sequence_with(d, ShapeRules::Verified)
}

/// Like [`shape_sequence`] but following the tabulated counts, which do not
/// always admit a valid orientation.
pub fn tabulated_shape_sequence(d: &BlockDecomposition) -> Vec<Shape> {
    sequence_with(d, ShapeRules::Tabulated)
}

fn b2_end_letters(e: usize, rules: ShapeRules) -> Vec<Shape> {
    use Shape::*;
    let mut out = vec![IX];
    match (e, rules) {
        (2, _) => out.extend([V, V, V]),
        (3, _) => out.extend([III, V, V, V, V]),
        (_, ShapeRules::Verified) => {
            out.push(IV);
            out.extend(std::iter::repeat_n(III, 2 * e - 7));
            out.extend([IV, V, V, V, V]);
        }
        (_, ShapeRules::Tabulated) => {
            out.extend(std::iter::repeat_n(III, 2 * e - 5));
            out.extend([V, V, V, V]);
        }
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum B3Mode {
    Mid,
    End,
    Unfinished,
}

fn b3_shapes(a: &[u32], block: &Block, mode: B3Mode, rules: ShapeRules, ss: &mut [Vec<Shape>]) {
    use Shape::*;
    let (x, y) = block.span;
    for t in x..y {
        ss[t] = vec![III; a[t] as usize];
    }
    ss[x] = vec![I];
    let mut t = x + 1;
    let mut first_run = true;
    let mut last_run_end = x;
    while t < y {
        if a[t] == 2 {
            let mut u = t;
            while u < y && a[u] == 2 {
                u += 1;
            }
            ss[t][0] = if first_run { VI } else { VIII };
            first_run = false;
            last_run_end = u - 1;
            t = u;
        } else {
            t += 1;
        }
    }
    match mode {
        B3Mode::Mid => {
            ss[last_run_end][1] = IV;
            ss[y - 1] = vec![II];
        }
        B3Mode::End => ss[y - 1] = vec![VIII],
        B3Mode::Unfinished => {
            ss[y - 1][1] = if rules == ShapeRules::Tabulated && block.k > 1 { III } else { VII };
        }
    }
}

fn sequence_with(d: &BlockDecomposition, rules: ShapeRules) -> Vec<Shape> {
    use Shape::*;
    let a = &d.exponents;
    let n = a.len();
    if d.is_all_b2 {
        if n == 1 {
            return vec![II, X2, II];
        }
        let mut out = vec![VII];
        out.extend(std::iter::repeat_n(III, 2 * n - 1));
        out.push(VII);
        return out;
    }
    let mut ss: Vec<Vec<Shape>> = a.iter().map(|&x| vec![Zero; x as usize]).collect();
    let mut first = V;
    let last_index = d.blocks.len() - 1;
    for (bi, b) in d.blocks.iter().enumerate() {
        let (x, y) = b.span;
        let is_last = bi == last_index;
        match b.kind {
            BlockKind::B2Start => {
                first = VII;
                for syl in ss.iter_mut().take(y).skip(x) {
                    *syl = vec![III, III];
                }
                ss[y - 1] = vec![VI, I];
            }
            BlockKind::B2End => {
                let letters = b2_end_letters(y - x, rules);
                for (i, t) in (x..y).enumerate() {
                    ss[t] = letters[2 * i..2 * i + 2].to_vec();
                }
            }
            BlockKind::UnfinishedB3 => b3_shapes(a, b, B3Mode::Unfinished, rules, &mut ss),
            BlockKind::B3 => {
                let mode = if is_last { B3Mode::End } else { B3Mode::Mid };
                b3_shapes(a, b, mode, rules, &mut ss);
            }
            BlockKind::B1 => {
                for syl in ss.iter_mut().take(y).skip(x) {
                    syl.fill(Zero);
                }
                if is_last {
                    if let Some(l) = ss[y - 1].last_mut() {
                        *l = V;
                    }
                }
            }
            BlockKind::AllB2 => {}
        }
    }
    let mut out = vec![first];
    out.extend(ss.into_iter().flatten());
    out
}

/// Angles of one layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerAngles {
    /// Catalog shape of the layer.
    pub shape: Shape,
    /// `(θ1, θ2, θ3)` on the horizontal, vertical and diagonal pairs.
    pub triple: [PiAngle; 3],
}

/// Angles for every layer, `Δ1` first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AngleAssignment {
    /// Per-layer angles.
    pub layers: Vec<LayerAngles>,
}

/// Angles per tetrahedron, indexed by opposite-edge pair number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TetAngles {
    /// `angles[tet][pair]`.
    pub angles: Vec<[PiAngle; 3]>,
}

impl TetAngles {
    /// The same angles in radians.
    pub fn radians(&self) -> Vec<[f64; 3]> {
        self.angles.iter().map(|t| t.map(PiAngle::radians)).collect()
    }
}

/// Errors from angle synthesis.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum AngleError {
    /// The inner word could not be decomposed.
    #[error(transparent)]
    Blocks(#[from] BlockError),
    /// The triangulation could not be built.
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
    /// The word is not of the form `R L^{a1} ... X^{an} Y` with `Y ≠ X`.
    #[error(
        "word {0} is not of the form R L^a1 ... with a final letter differing from the last inner letter"
    )]
    NotFamily(String),
    /// The decomposition does not belong to the word.
    #[error("decomposition exponents {found:?} do not match the word's {expected:?}")]
    DecompositionMismatch {
        /// Exponents of the word.
        expected: Vec<u32>,
        /// Exponents of the decomposition.
        found: Vec<u32>,
    },
    /// The triangulation carries no layer roles.
    #[error("triangulation has no layer metadata")]
    MissingLayers,
    /// Layer count differs from the assignment.
    #[error("assignment has {got} layers, triangulation has {expected}")]
    LayerCount {
        /// Layers in the triangulation.
        expected: usize,
        /// Layers in the assignment.
        got: usize,
    },
    /// No ordering of the chosen shapes satisfies the edge equations.
    #[error("no orientation of the shape sequence satisfies the edge equations")]
    NoOrientation,
}

/// Triple position of each layer role.
pub fn role_position(role: Role) -> usize {
    match role {
        Role::Horizontal => 0,
        Role::Vertical => 1,
        Role::Diagonal => 2,
    }
}

/// One edge equation: `((layer, position), multiplicity)` terms.
type LayerEquation = Vec<((usize, usize), i64)>;

/// Edge equations, one per distinct equation, in order of first edge class.
fn layer_equations(t: &Triangulation) -> Result<Vec<LayerEquation>, AngleError> {
    if t.layers().is_none() {
        return Err(AngleError::MissingLayers);
    }
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for c in t.edge_classes().classes {
        let mut coef: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        for e in &c.embeddings {
            let layer = e.tet / 2;
            let role = t.edge_role(e.tet, e.edge).ok_or(AngleError::MissingLayers)?;
            *coef.entry((layer, role_position(role))).or_default() += 1;
        }
        let eq: Vec<_> = coef.into_iter().collect();
        if seen.insert(eq.clone()) {
            out.push(eq);
        }
    }
    Ok(out)
}

fn candidate_orders(shape: Shape, swap_first_two: bool) -> Vec<[i64; 3]> {
    let mut nominal = shape.nominal_units();
    if swap_first_two {
        nominal.swap(0, 1);
    }
    let mut swapped = nominal;
    swapped.swap(0, 1);
    let mut out = vec![nominal];
    if !out.contains(&swapped) {
        out.push(swapped);
    }
    let c = shape.catalog_units();
    let mut perms = Vec::new();
    for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)] {
        perms.push([c[i], c[j], c[k]]);
    }
    perms.sort();
    for p in perms {
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// Finds an ordering of each layer's shape angles that satisfies every edge
/// equation exactly. `swap_hint[i]` makes layer `i` try its natural
/// orientation with the first two angles exchanged first.
pub fn orient_shapes(
    t: &Triangulation,
    shapes: &[Shape],
    swap_hint: &[bool],
) -> Result<AngleAssignment, AngleError> {
    let layer_count = t.layers().ok_or(AngleError::MissingLayers)?.len();
    if shapes.len() != layer_count {
        return Err(AngleError::LayerCount { expected: layer_count, got: shapes.len() });
    }
    let eqs = layer_equations(t)?;
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); layer_count];
    let mut max_layer = Vec::with_capacity(eqs.len());
    for (qi, q) in eqs.iter().enumerate() {
        let mut layers: Vec<usize> = q.iter().map(|((l, _), _)| *l).collect();
        layers.dedup();
        for &l in &layers {
            touching[l].push(qi);
        }
        max_layer.push(*layers.iter().max().expect("edge classes are nonempty"));
    }
    let cands: Vec<Vec<[i64; 3]>> = shapes
        .iter()
        .enumerate()
        .map(|(i, &s)| candidate_orders(s, swap_hint.get(i).copied().unwrap_or(false)))
        .collect();

    const FULL: i64 = 48;
    let mut choice = vec![0usize; layer_count];
    let mut assigned: Vec<[i64; 3]> = vec![[0; 3]; layer_count];
    let feasible = |assigned: &[[i64; 3]], layer: usize| -> bool {
        touching[layer].iter().all(|&qi| {
            let sum: i64 = eqs[qi]
                .iter()
                .filter(|((l, _), _)| *l <= layer)
                .map(|((l, p), c)| c * assigned[*l][*p])
                .sum();
            if max_layer[qi] == layer {
                sum == FULL
            } else {
                sum < FULL
            }
        })
    };
    let mut layer = 0;
    loop {
        if layer == layer_count {
            break;
        }
        if choice[layer] >= cands[layer].len() {
            choice[layer] = 0;
            if layer == 0 {
                return Err(AngleError::NoOrientation);
            }
            layer -= 1;
            choice[layer] += 1;
            continue;
        }
        assigned[layer] = cands[layer][choice[layer]];
        if feasible(&assigned, layer) {
            layer += 1;
        } else {
            choice[layer] += 1;
        }
    }
    Ok(AngleAssignment {
        layers: shapes
            .iter()
            .zip(&assigned)
            .map(|(&shape, u)| LayerAngles { shape, triple: u.map(PiAngle::from_units) })
            .collect(),
    })
}

/// For each layer, whether it belongs to a block whose first letter is `R`.
fn swap_hints(d: &BlockDecomposition) -> Vec<bool> {
    let mut out = vec![false];
    let mut syllable_block = vec![0usize; d.exponents.len()];
    for (bi, b) in d.blocks.iter().enumerate() {
        syllable_block[b.span.0..b.span.1].fill(bi);
    }
    for (s, &e) in d.exponents.iter().enumerate() {
        // Inner syllables alternate L, R, L, ... from index 0.
        let start = d.blocks[syllable_block[s]].span.0;
        out.extend(std::iter::repeat_n(start % 2 == 1, e as usize));
    }
    out
}

/// Explicit angle structure for a word `R L^{a1} ... X^{an} Y` with all
/// `a_i ∈ {1, 2}`, following the block decomposition `d` of its inner word.
pub fn assign_angles(w: &Word, d: &BlockDecomposition) -> Result<AngleAssignment, AngleError> {
    let expected = w.family_exponents().ok_or_else(|| AngleError::NotFamily(w.to_string()))?;
    if expected != d.exponents {
        return Err(AngleError::DecompositionMismatch { expected, found: d.exponents.clone() });
    }
    let t = build_sakuma_weeks(w)?;
    orient_shapes(&t, &shape_sequence(d), &swap_hints(d))
}

/// Places each layer's triple on both of its tetrahedra.
pub fn expand_to_tetrahedra(a: &AngleAssignment, t: &Triangulation) -> Result<TetAngles, AngleError> {
    let layers = t.layers().ok_or(AngleError::MissingLayers)?;
    if layers.len() != a.layers.len() {
        return Err(AngleError::LayerCount { expected: layers.len(), got: a.layers.len() });
    }
    let mut angles = vec![[PiAngle::zero(); 3]; t.tet_count()];
    for (tet, slot) in angles.iter_mut().enumerate() {
        let roles = layers[tet / 2];
        let triple = a.layers[tet / 2].triple;
        for (pair, v) in slot.iter_mut().enumerate() {
            *v = triple[role_position(roles.role_of_pair(pair))];
        }
    }
    Ok(TetAngles { angles })
}

/// An edge class whose angle sum is not 2π.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSumFailure {
    /// Edge class id.
    pub class: usize,
    /// The actual sum.
    pub sum: PiAngle,
}

/// Result of checking an angle structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// `(tet, pair)` entries outside `(0, π)`.
    pub bad_angles: Vec<(usize, usize)>,
    /// Tetrahedra whose three pair angles do not sum to π.
    pub bad_tetrahedra: Vec<usize>,
    /// Edge classes whose sum is not 2π.
    pub failing_classes: Vec<EdgeSumFailure>,
}

impl VerificationReport {
    /// True when every check passed.
    pub fn passed(&self) -> bool {
        self.bad_angles.is_empty() && self.bad_tetrahedra.is_empty() && self.failing_classes.is_empty()
    }
}

/// Checks positivity, tetrahedron sums and edge sums exactly.
pub fn verify_angle_structure(t: &Triangulation, angles: &TetAngles) -> VerificationReport {
    let pi = PiAngle::new(1, 1);
    let mut bad_angles = Vec::new();
    let mut bad_tetrahedra = Vec::new();
    for (tet, tr) in angles.angles.iter().enumerate() {
        for (pair, &v) in tr.iter().enumerate() {
            if v <= PiAngle::zero() || v >= pi {
                bad_angles.push((tet, pair));
            }
        }
        if tr[0] + tr[1] + tr[2] != pi {
            bad_tetrahedra.push(tet);
        }
    }
    let mut failing_classes = Vec::new();
    for (class, c) in t.edge_classes().classes.iter().enumerate() {
        let sum =
            c.embeddings.iter().fold(PiAngle::zero(), |acc, e| acc + angles.angles[e.tet][EDGE_PAIR[e.edge]]);
        if sum != PiAngle::new(2, 1) {
            failing_classes.push(EdgeSumFailure { class, sum });
        }
    }
    VerificationReport { bad_angles, bad_tetrahedra, failing_classes }
}

/// Angle deficits on the three boundary edge classes at one end of a block,
/// indexed by triple position of the block's first (or last) layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeficitTriple(pub [PiAngle; 3]);

/// Layer range `[first, last]` of a block (layer `0` is `Δ1`).
pub fn block_layers(d: &BlockDecomposition, b: &Block) -> (usize, usize) {
    let before: u32 = d.exponents[..b.span.0].iter().sum();
    let inside: u32 = d.exponents[b.span.0..b.span.1].iter().sum();
    (before as usize + 1, (before + inside) as usize)
}

/// Start (`δ`) and end (`ε`) deficits of a block: 2π minus the angle sum
/// contributed by the block's layers, on each edge class crossing that end.
/// An end with no crossing classes gives `None`.
pub fn boundary_deficits(
    t: &Triangulation,
    d: &BlockDecomposition,
    block: &Block,
    a: &AngleAssignment,
) -> Result<(Option<DeficitTriple>, Option<DeficitTriple>), AngleError> {
    let eqs = layer_equations(t)?;
    let (lo, hi) = block_layers(d, block);
    let inside = |eq: &[((usize, usize), i64)]| -> PiAngle {
        eq.iter()
            .filter(|((l, _), _)| (lo..=hi).contains(l))
            .fold(PiAngle::zero(), |acc, ((l, p), c)| acc + a.layers[*l].triple[*p] * *c)
    };
    let end = |boundary_layer: usize, crosses: &dyn Fn(usize) -> bool| -> Option<DeficitTriple> {
        let mut out = [None; 3];
        for eq in &eqs {
            if !eq.iter().any(|((l, _), _)| crosses(*l)) {
                continue;
            }
            for ((l, p), _) in eq {
                if *l == boundary_layer && out[*p].is_none() {
                    out[*p] = Some(PiAngle::new(2, 1) - inside(eq));
                }
            }
        }
        match out {
            [Some(x), Some(y), Some(z)] => Some(DeficitTriple([x, y, z])),
            _ => None,
        }
    };
    let start = end(lo, &|l| l < lo);
    let finish = end(hi, &|l| l > hi);
    Ok((start, finish))
}
