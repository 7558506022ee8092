//! Hyperbolic volumes of ideal tetrahedra, the volume functional on angle
//! structures, its maximization over the angle-structure polytope, and the
//! complexity bounds derived from these volumes.
//!
//! Angles are in radians throughout this module. A tetrahedron carries one
//! angle per opposite-edge pair, indexed by pair number as in
//! [`crate::triangulation::EDGE_PAIR`].

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::angles::{assign_angles, expand_to_tetrahedra, AngleAssignment, AngleError, Shape};
use crate::blocks::{decompose_exponents, BlockError};
use crate::triangulation::{build_sakuma_weeks, Triangulation, TriangulationError, EDGE_PAIR};
use crate::word::Word;

/// Number of terms kept in the Clausen series. Each term shrinks by at
/// least a factor of four, so thirty terms are far below double precision.
const CLAUSEN_TERMS: usize = 30;

/// `ζ(2k)` for `k = 1..=CLAUSEN_TERMS`.
fn zeta_even() -> [f64; CLAUSEN_TERMS] {
    let mut z = [0.0; CLAUSEN_TERMS];
    let p2 = PI * PI;
    z[0] = p2 / 6.0;
    z[1] = p2 * p2 / 90.0;
    z[2] = p2.powi(3) / 945.0;
    z[3] = p2.powi(4) / 9450.0;
    z[4] = p2.powi(5) / 93555.0;
    for (k, slot) in z.iter_mut().enumerate().skip(5) {
        let s = 2 * (k as i32 + 1);
        *slot = (1..=50).rev().map(|n| (n as f64).powi(-s)).sum();
    }
    z
}

/// Clausen function `Cl2(x) = -∫₀^x log|2 sin(u/2)| du`.
fn clausen(x: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut y = x.rem_euclid(two_pi);
    if y > PI {
        y -= two_pi;
    }
    if y == 0.0 {
        return 0.0;
    }
    let sign = y.signum();
    let y = y.abs();
    let z = zeta_even();
    let r = (y / two_pi).powi(2);
    let mut power = y;
    let mut sum = y - y * y.ln();
    for (i, zk) in z.iter().enumerate() {
        let k = (i + 1) as f64;
        power *= r;
        sum += zk * power / (k * (2.0 * k + 1.0));
    }
    sign * sum
}

/// The Lobachevsky function `Λ(θ) = -∫₀^θ log|2 sin u| du`.
///
/// Evaluated as `Cl2(2θ) / 2`. It is odd and π-periodic.
pub fn lobachevsky(theta: f64) -> f64 {
    0.5 * clausen(2.0 * theta)
}

/// Derivative of the Lobachevsky function, `-log|2 sin θ|`.
pub fn lobachevsky_derivative(theta: f64) -> f64 {
    -(2.0 * theta.sin()).abs().ln()
}

/// Volume of the regular ideal tetrahedron, `3Λ(π/3)`.
pub fn v3() -> f64 {
    3.0 * lobachevsky(PI / 3.0)
}

/// Volume of an ideal tetrahedron with the given dihedral angles.
pub fn triple_volume(t: &[f64; 3]) -> f64 {
    t.iter().map(|&a| lobachevsky(a)).sum()
}

/// Volume of a catalog shape.
pub fn tet_volume(s: Shape) -> f64 {
    let t = s.triple().map(|a| a.radians());
    triple_volume(&t)
}

/// Volume of a catalog shape in units of `v3`.
pub fn shape_ratio(s: Shape) -> f64 {
    tet_volume(s) / v3()
}

/// Sum of tetrahedron volumes over an angle assignment.
pub fn volume_functional(angles: &[[f64; 3]]) -> f64 {
    angles.iter().map(triple_volume).sum()
}

/// Gradient of the volume functional, one entry per angle.
pub fn volume_gradient(angles: &[[f64; 3]]) -> Vec<[f64; 3]> {
    angles.iter().map(|t| t.map(lobachevsky_derivative)).collect()
}

/// Errors from volume computations.
#[derive(Debug, Error, PartialEq)]
pub enum VolumeError {
    /// The angle equations have no solution at all.
    #[error("angle equations are inconsistent (residual {residual:.3e})")]
    Infeasible {
        /// Least-squares residual of the equations.
        residual: f64,
    },
    /// No point with all angles strictly between 0 and π was found.
    #[error("no strictly positive angle structure found")]
    NoInteriorSeed,
    /// The seed does not fit the triangulation or violates the equations.
    #[error("seed is not an interior angle structure: {0}")]
    BadSeed(String),
    /// The volume increases towards the boundary of the polytope.
    #[error("maximizer lies on the boundary (volume {volume:.10}, smallest angle {min_angle:.3e})")]
    OnBoundary {
        /// Volume reached.
        volume: f64,
        /// Smallest angle at the last iterate.
        min_angle: f64,
    },
    /// The iteration limit was reached in the interior.
    #[error("no convergence after {iterations} iterations (projected gradient {gradient_norm:.3e})")]
    NotConverged {
        /// Iterations performed.
        iterations: usize,
        /// Projected gradient norm at the last iterate.
        gradient_norm: f64,
    },
    /// Angle synthesis failed.
    #[error(transparent)]
    Angles(#[from] AngleError),
    /// Block decomposition failed.
    #[error(transparent)]
    Blocks(#[from] BlockError),
    /// The triangulation could not be built.
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
}

/// Stopping rules for [`maximize_volume`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaximizeOptions {
    /// Target norm of the projected gradient.
    pub tolerance: f64,
    /// Maximum number of ascent steps.
    pub max_iters: usize,
}

impl Default for MaximizeOptions {
    fn default() -> MaximizeOptions {
        MaximizeOptions { tolerance: 1e-10, max_iters: 500 }
    }
}

/// Result of [`maximize_volume`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaximizeResult {
    /// Angles at the maximizer, `angles[tet][pair]`.
    pub angles: Vec<[f64; 3]>,
    /// Volume at the maximizer.
    pub volume: f64,
    /// Norm of the gradient projected onto the equations' null space.
    pub gradient_norm: f64,
    /// Volume of the starting point.
    pub seed_volume: f64,
    /// Ascent steps taken.
    pub iterations: usize,
}

/// The linear angle equations of a triangulation: per-tetrahedron sums π
/// and per-edge-class sums 2π.
pub fn angle_equations(t: &Triangulation) -> (DMatrix<f64>, DVector<f64>) {
    let classes = t.edge_classes();
    let n = t.tet_count();
    let rows = n + classes.len();
    let mut a = DMatrix::zeros(rows, 3 * n);
    let mut b = DVector::zeros(rows);
    for tet in 0..n {
        for p in 0..3 {
            a[(tet, 3 * tet + p)] = 1.0;
        }
        b[tet] = PI;
    }
    for (c, class) in classes.classes.iter().enumerate() {
        for e in &class.embeddings {
            a[(n + c, 3 * e.tet + EDGE_PAIR[e.edge])] += 1.0;
        }
        b[n + c] = 2.0 * PI;
    }
    (a, b)
}

/// Affine parametrization `x = base + Z y` of the solutions of `A x = b`,
/// with `Z` orthonormal.
struct AffineHull {
    base: DVector<f64>,
    basis: DMatrix<f64>,
}

fn affine_hull(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<AffineHull, VolumeError> {
    let cols = a.ncols();
    let svd = a.clone().svd(true, true);
    let base = svd.solve(b, 1e-10).map_err(|e| VolumeError::BadSeed(e.to_string()))?;
    let residual = (a * &base - b).norm();
    if residual > 1e-8 {
        return Err(VolumeError::Infeasible { residual });
    }
    let ata = a.transpose() * a;
    let eig = ata.symmetric_eigen();
    let scale = eig.eigenvalues.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let null: Vec<usize> = (0..cols).filter(|&i| eig.eigenvalues[i].abs() <= 1e-9 * scale).collect();
    let mut basis = DMatrix::zeros(cols, null.len());
    for (j, &i) in null.iter().enumerate() {
        basis.set_column(j, &eig.eigenvectors.column(i));
    }
    Ok(AffineHull { base, basis })
}

fn to_triples(x: &DVector<f64>) -> Vec<[f64; 3]> {
    x.as_slice().chunks(3).map(|c| [c[0], c[1], c[2]]).collect()
}

fn from_triples(t: &[[f64; 3]]) -> DVector<f64> {
    DVector::from_iterator(3 * t.len(), t.iter().flatten().copied())
}

fn min_angle(x: &DVector<f64>) -> f64 {
    x.iter().fold(f64::INFINITY, |m, &v| m.min(v.min(PI - v)))
}

fn volume_at(x: &DVector<f64>) -> f64 {
    x.iter().map(|&a| lobachevsky(a)).sum()
}

fn gradient_at(x: &DVector<f64>) -> DVector<f64> {
    x.map(lobachevsky_derivative)
}

/// Finds a point of the affine hull with every angle in `(0, π)`.
fn interior_seed(hull: &AffineHull, a: &DMatrix<f64>, b: &DVector<f64>) -> Option<DVector<f64>> {
    let cols = hull.base.len();
    let regular = DVector::from_element(cols, PI / 3.0);
    if (a * &regular - b).norm() <= 1e-9 {
        return Some(regular);
    }
    if min_angle(&hull.base) > 1e-9 {
        return Some(hull.base.clone());
    }
    let project = |x: &DVector<f64>| -> DVector<f64> {
        let d = x - &hull.base;
        &hull.base + &hull.basis * (hull.basis.transpose() * d)
    };
    for eps in [1e-2, 1e-4, 1e-6] {
        let mut x = project(&regular);
        for _ in 0..20_000 {
            if min_angle(&x) > 0.0 {
                return Some(x);
            }
            let clipped = x.map(|v| v.clamp(eps, PI - eps));
            x = project(&clipped);
        }
    }
    None
}

/// Maximizes the volume functional over the angle structures of `t`.
///
/// The seed, when given, must be an interior angle structure of `t` (for
/// example the explicit assignment of a family word). Without a seed an
/// interior point is searched for. Ascent is Newton's method on the
/// constraint null space with backtracking that keeps every angle strictly
/// inside `(0, π)`.
pub fn maximize_volume(
    t: &Triangulation,
    seed: Option<&AngleAssignment>,
    options: &MaximizeOptions,
) -> Result<MaximizeResult, VolumeError> {
    let (a, b) = angle_equations(t);
    let hull = affine_hull(&a, &b)?;
    let mut x = match seed {
        Some(s) => {
            let x = from_triples(&expand_to_tetrahedra(s, t)?.radians());
            let residual = (&a * &x - &b).norm();
            if residual > 1e-9 {
                return Err(VolumeError::BadSeed(format!("equation residual {residual:.3e}")));
            }
            if min_angle(&x) <= 0.0 {
                return Err(VolumeError::BadSeed("an angle is 0 or π".into()));
            }
            x
        }
        None => interior_seed(&hull, &a, &b).ok_or(VolumeError::NoInteriorSeed)?,
    };
    let z = &hull.basis;
    let seed_volume = volume_at(&x);
    let mut value = seed_volume;
    let mut iterations = 0;
    loop {
        let g = z.transpose() * gradient_at(&x);
        let gnorm = g.norm();
        if gnorm <= options.tolerance {
            let m = min_angle(&x);
            if m < 1e-7 {
                return Err(VolumeError::OnBoundary { volume: value, min_angle: m });
            }
            return Ok(MaximizeResult {
                angles: to_triples(&x),
                volume: value,
                gradient_norm: gnorm,
                seed_volume,
                iterations,
            });
        }
        if iterations >= options.max_iters {
            let m = min_angle(&x);
            if m < 1e-6 {
                return Err(VolumeError::OnBoundary { volume: value, min_angle: m });
            }
            return Err(VolumeError::NotConverged { iterations, gradient_norm: gnorm });
        }
        iterations += 1;

        // Newton direction for the concave objective; the negated reduced
        // Hessian Zᵀ diag(cot x) Z is positive definite in the interior.
        let curvature = x.map(|v| 1.0 / v.tan());
        let scaled = DMatrix::from_fn(z.nrows(), z.ncols(), |i, j| z[(i, j)] * curvature[i]);
        let neg_hessian = z.transpose() * scaled;
        let dir = match neg_hessian.cholesky() {
            Some(ch) => ch.solve(&g),
            None => g.clone(),
        };
        let dir = if dir.dot(&g) > 0.0 { dir } else { g.clone() };
        let step_x = z * &dir;
        let slope = g.dot(&dir);

        let mut s = 1.0;
        let mut accepted = false;
        while s > 1e-20 {
            let trial = &x + &step_x * s;
            if min_angle(&trial) > 0.0 {
                let tv = volume_at(&trial);
                let close = gnorm < 1e-6;
                if tv >= value + 1e-4 * s * slope || (close && tv >= value - 1e-12) {
                    x = trial;
                    value = tv;
                    accepted = true;
                    break;
                }
            }
            s *= 0.5;
        }
        if !accepted {
            let m = min_angle(&x);
            if m < 1e-6 {
                return Err(VolumeError::OnBoundary { volume: value, min_angle: m });
            }
            return Err(VolumeError::NotConverged { iterations, gradient_norm: gnorm });
        }
    }
}

/// Explicit angle structure and its volume for a family word.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplicitVolume {
    /// The per-layer assignment.
    pub assignment: AngleAssignment,
    /// Volume functional of the assignment.
    pub volume: f64,
    /// The same volume in units of `v3`.
    pub ratio: f64,
}

/// Builds the explicit angle structure of a family word and evaluates it.
pub fn explicit_volume(w: &Word) -> Result<ExplicitVolume, VolumeError> {
    let a = w.family_exponents().ok_or_else(|| AngleError::NotFamily(w.to_string()))?;
    let d = decompose_exponents(&a)?;
    let assignment = assign_angles(w, &d)?;
    let t = build_sakuma_weeks(w)?;
    let volume = volume_functional(&expand_to_tetrahedra(&assignment, &t)?.radians());
    Ok(ExplicitVolume { ratio: volume / v3(), assignment, volume })
}

/// Complexity bounds for one word.
///
/// Fields that need the explicit angle structure are `None` for words
/// outside the family `R L^{a1} ... X^{an} Y` with every `a_i ∈ {1, 2}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    /// The word.
    pub word: String,
    /// Number of tetrahedra of the layered triangulation.
    pub tet_count: usize,
    /// Syllables of the inner word.
    pub n_inner: usize,
    /// Letters minus syllables of the inner word.
    pub c: usize,
    /// Volume of the explicit angle structure.
    pub explicit_volume: Option<f64>,
    /// Explicit volume in units of `v3`.
    pub lower_mult: Option<f64>,
    /// `2n + 1 + 0.9632C + 0.393`, for family words with `n ≥ C`.
    pub lower_additive: Option<f64>,
    /// `2n + 1 + 2C + 1`, for family words with `n ≥ C`.
    pub upper_additive: Option<usize>,
    /// `Σa + 2(n - 1) - #{a = 1}` over the syllables of the full word.
    pub ishikawa_nemoto: usize,
    /// `max{2, 2n - 2.6667}` with `n` the inner syllable count.
    pub petronio_vesnin: f64,
    /// Largest applicable lower bound.
    pub best_lower: f64,
    /// Smallest applicable upper bound.
    pub best_upper: usize,
    /// Whether `0.8|T|` beats the additive lower bound, `C ≥ 0.628n - 0.325`.
    pub crossover_flag: Option<bool>,
    /// True when the rounded-up lower bound meets the upper bound.
    pub certified_minimal: bool,
}

/// Ishikawa–Nemoto upper bound from the syllable exponents of a word.
pub fn ishikawa_nemoto(exponents: &[u32]) -> usize {
    let n = exponents.len();
    let sum: usize = exponents.iter().map(|&a| a as usize).sum();
    let ones = exponents.iter().filter(|&&a| a == 1).count();
    (sum + 2 * n).saturating_sub(2 + ones)
}

/// Petronio–Vesnin lower bound `max{2, 2n - 2.6667}`.
pub fn petronio_vesnin(n: usize) -> f64 {
    (2.0 * n as f64 - 2.6667).max(2.0)
}

/// Additive lower bound `2n + 1 + 0.9632C + 0.393`.
pub fn additive_lower(n: usize, c: usize) -> f64 {
    2.0 * n as f64 + 1.0 + 0.9632 * c as f64 + 0.393
}

/// Additive upper bound `2n + 1 + 2C + 1`.
pub fn additive_upper(n: usize, c: usize) -> usize {
    2 * n + 2 * c + 2
}

/// Computes every bound for a word. The word is mirrored to start with `R`
/// first.
pub fn bounds_report(w: &Word) -> Result<BoundsReport, VolumeError> {
    let w = w.normalize();
    let t = build_sakuma_weeks(&w)?;
    let tet_count = t.tet_count();
    let (n_inner, c) = match w.inner_word() {
        Ok(inner) => (inner.n(), inner.ell() - inner.n()),
        Err(_) => (0, 0),
    };
    let ishikawa = ishikawa_nemoto(&w.exponents());
    let pv = petronio_vesnin(n_inner);
    let family = w.family_exponents().filter(|a| a.iter().all(|&e| e == 1 || e == 2));
    let explicit = match family {
        Some(_) => Some(explicit_volume(&w)?),
        None => None,
    };
    let in_wc = explicit.is_some() && n_inner >= c;
    let lower_mult = explicit.as_ref().map(|e| e.ratio);
    let lower_additive = in_wc.then(|| additive_lower(n_inner, c));
    let upper_additive = in_wc.then(|| additive_upper(n_inner, c));
    let best_lower =
        [Some(pv), lower_mult, lower_additive].into_iter().flatten().fold(f64::NEG_INFINITY, f64::max);
    let best_upper = tet_count.min(ishikawa);
    let crossover_flag = explicit.is_some().then_some(c as f64 >= 0.628 * n_inner as f64 - 0.325);
    let certified_minimal = (best_lower - 1e-9).ceil() >= best_upper as f64;
    Ok(BoundsReport {
        word: w.to_string(),
        tet_count,
        n_inner,
        c,
        explicit_volume: explicit.as_ref().map(|e| e.volume),
        lower_mult,
        lower_additive,
        upper_additive,
        ishikawa_nemoto: ishikawa,
        petronio_vesnin: pv,
        best_lower,
        best_upper,
        crossover_flag,
        certified_minimal,
    })
}

/// One volume ratio from the subcomplex estimates of the `0.8|T|` argument.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubcomplexRatio {
    /// Which subcomplex and block type.
    pub case: String,
    /// Block parameter the ratio is evaluated at.
    pub parameter: String,
    /// Volume over `|S| v3`, at full precision.
    pub value: f64,
    /// Reference value to four decimals.
    pub reference: f64,
}

/// Sum of `count · vol(shape) / v3` over a multiset of layer shapes, times
/// two for the two tetrahedra of each layer, divided by the tetrahedron
/// count.
fn layer_ratio(layers: &[(Shape, usize)], tets: usize) -> f64 {
    let layers_volume: f64 = layers.iter().map(|&(s, k)| k as f64 * shape_ratio(s)).sum();
    2.0 * layers_volume / tets as f64
}

/// Layers of a first-position squared-run block of length `k`, including
/// the closing layer.
fn first_b2(k: usize) -> Vec<(Shape, usize)> {
    vec![(Shape::VII, 1), (Shape::I, 1), (Shape::VI, 1), (Shape::III, 2 * (k - 1))]
}

/// Layers of a first-position mixed block with `m` squared runs of length
/// one, including the closing layer.
fn first_b3(m: usize) -> Vec<(Shape, usize)> {
    vec![
        (Shape::V, 1),
        (Shape::I, 1),
        (Shape::II, 1),
        (Shape::IV, 1),
        (Shape::VI, 1),
        (Shape::III, 2 * (m - 1)),
        (Shape::VIII, m - 1),
    ]
}

/// The same block in the middle of a word, without the closing layer.
fn middle_b3(m: usize) -> Vec<(Shape, usize)> {
    let mut v = first_b3(m);
    v.remove(0);
    v
}

/// Layers of a final squared-run block of length `k ≥ 2`.
fn last_b2(k: usize) -> Vec<(Shape, usize)> {
    if k == 2 {
        vec![(Shape::V, 3), (Shape::IX, 1)]
    } else {
        vec![(Shape::V, 4), (Shape::IX, 1), (Shape::III, 2 * k - 5)]
    }
}

fn concat(parts: &[Vec<(Shape, usize)>]) -> Vec<(Shape, usize)> {
    parts.concat()
}

/// The ratios of the `0.8|T|` argument, each at the block parameter where
/// it is quoted.
pub fn subcomplex_ratios() -> Vec<SubcomplexRatio> {
    let r = |case: &str, parameter: &str, layers: Vec<(Shape, usize)>, tets: usize, reference: f64| {
        SubcomplexRatio {
            case: case.into(),
            parameter: parameter.into(),
            value: layer_ratio(&layers, tets),
            reference,
        }
    };
    vec![
        r("first B2", "k1=1", first_b2(1), 6, 0.8357),
        r("first B3", "m1=1", first_b3(1), 10, 0.8889),
        r("middle B3", "m2=1", middle_b3(1), 8, 0.9028),
        r("last B2", "k3=2", last_b2(2), 8, 0.7708),
        r("last B2", "k3=3", last_b2(3), 12, 0.8031),
        r("first B3 + last B2", "m1=1, k3=2", concat(&[first_b3(1), last_b2(2)]), 18, 0.8364),
        r(
            "first B2 + middle B3 + last B2",
            "k1=1, m2=1, k3=2",
            concat(&[first_b2(1), middle_b3(1), last_b2(2)]),
            22,
            0.8365,
        ),
        r("last unfinished B3", "m3=1", vec![(Shape::I, 1), (Shape::VI, 1), (Shape::VII, 1)], 6, 0.8357),
        r(
            "last unfinished B3",
            "m3=2",
            vec![(Shape::I, 1), (Shape::VI, 1), (Shape::III, 3), (Shape::VIII, 1)],
            12,
            0.8582,
        ),
        r("single B2", "k=2", vec![(Shape::III, 3), (Shape::VII, 2)], 10, 0.8381),
        r("single B2", "k=1", vec![(Shape::III, 1), (Shape::VII, 2)], 6, 0.7952),
        r("single B2, special", "k=1", vec![(Shape::II, 2), (Shape::X2, 1)], 6, 0.8720),
    ]
}

/// Linear coefficients of the additive bound argument, in units of `v3`.
///
/// The worst mixed structure with `C` squared syllables has volume
/// `worst_slope·C + worst_constant`. Its deficit against the all-single
/// structure is `deficit_slope·C + deficit_constant`, and the resulting
/// lower bound is `2n + 1 + bound_slope·C + bound_constant`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdditiveChain {
    /// Reference value 4.9632.
    pub worst_slope: f64,
    /// Reference value 3.3930.
    pub worst_constant: f64,
    /// Quoted as both 1.0368 and 1.0369.
    pub deficit_slope: f64,
    /// Quoted as both -0.0598 and -0.0597.
    pub deficit_constant: f64,
    /// Reference value 0.9632.
    pub bound_slope: f64,
    /// Reference value 0.393.
    pub bound_constant: f64,
}

/// Recomputes the coefficients of the additive bound at full precision.
pub fn additive_chain() -> AdditiveChain {
    let v = shape_ratio;
    let worst_slope = 2.0 * (2.0 * v(Shape::III) + v(Shape::VIII));
    let worst_constant = 2.0 * (v(Shape::V) + v(Shape::I) + v(Shape::VI) - v(Shape::III));
    let deficit_slope = 6.0 - worst_slope;
    let deficit_constant = 4.0 * v(Shape::V) - worst_constant;
    AdditiveChain {
        worst_slope,
        worst_constant,
        deficit_slope,
        deficit_constant,
        bound_slope: 2.0 - deficit_slope,
        bound_constant: 4.0 * v(Shape::V) - 3.0 - deficit_constant,
    }
}
