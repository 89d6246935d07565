//! Saddle 2-atoms encoded as f-graphs.
//!
//! An atom of complexity `m` is a pair of permutations on `2m` points:
//! `sigma`, whose cycles are the oriented negative boundary circles, and
//! `tau`, a fixed-point-free involution pairing the two negative corners of
//! each saddle. Point `i` doubles as the edge of the singular leaf that leaves
//! corner `i` and arrives at corner `sigma(i)`, so the `2m` edges of the leaf
//! and the `2m` f-graph vertices are the same set.
//!
//! Composition convention: `sigma∘tau` applies `tau` first. Positive boundary
//! circles are the cycles of `sigma∘tau`.

mod enumerate;
mod names;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{AtlasError, Result};
use crate::permgroup::{Permutation, PermutationGroup};

pub use enumerate::{enumerate_atoms, enumerate_atoms_bounded, DEFAULT_MAX_COMPLEXITY};
pub use names::{identify, AtomName, NameEntry, NameTable, NAME_TABLE_ENV};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawFGraph")]
pub struct FGraph {
    sigma: Permutation,
    tau: Permutation,
}

#[derive(Deserialize)]
struct RawFGraph {
    sigma: Permutation,
    tau: Permutation,
}

impl TryFrom<RawFGraph> for FGraph {
    type Error = AtlasError;

    fn try_from(raw: RawFGraph) -> Result<Self> {
        FGraph::new(raw.sigma, raw.tau)
    }
}

impl fmt::Debug for FGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FGraph(sigma={}, tau={})", self.sigma, self.tau)
    }
}

impl FGraph {
    /// Validates and builds an atom; see [`validate`] for the checks.
    pub fn new(sigma: Permutation, tau: Permutation) -> Result<Self> {
        validate(FGraph { sigma, tau })
    }

    pub fn from_images(sigma: &[usize], tau: &[usize]) -> Result<Self> {
        FGraph::new(
            Permutation::new(sigma.to_vec())?,
            Permutation::new(tau.to_vec())?,
        )
    }

    pub fn sigma(&self) -> &Permutation {
        &self.sigma
    }

    pub fn tau(&self) -> &Permutation {
        &self.tau
    }

    /// Number of saddle points.
    pub fn complexity(&self) -> usize {
        self.sigma.degree() / 2
    }

    pub fn points(&self) -> usize {
        self.sigma.degree()
    }

    /// `sigma∘tau`, whose cycles are the positive boundary circles.
    pub fn positive_cycles_perm(&self) -> Permutation {
        self.sigma.compose(&self.tau)
    }

    /// Saddles as tau-orbits `(i, tau(i))` with `i < tau(i)`, ordered by `i`.
    pub fn saddles(&self) -> Vec<(usize, usize)> {
        (0..self.points())
            .filter(|&i| i < self.tau.apply(i))
            .map(|i| (i, self.tau.apply(i)))
            .collect()
    }

    /// Number of saddles mapped to themselves (setwise) by `perm`.
    pub fn fixed_saddles(&self, perm: &Permutation) -> usize {
        self.saddles()
            .into_iter()
            .filter(|&(a, b)| {
                let x = perm.apply(a);
                x == a || x == b
            })
            .count()
    }

    pub fn is_symmetry(&self, perm: &Permutation) -> bool {
        perm.degree() == self.points()
            && perm.commutes_with(&self.sigma)
            && perm.commutes_with(&self.tau)
    }

    /// `π·f·π⁻¹`: the same atom with points renamed by `π`.
    pub fn relabel(&self, perm: &Permutation) -> FGraph {
        FGraph {
            sigma: self.sigma.conjugate_by(perm),
            tau: self.tau.conjugate_by(perm),
        }
    }

    pub fn apply_move(&self, mv: Move) -> FGraph {
        let sigma = match mv {
            Move::Identity => self.sigma.clone(),
            Move::Mirror => self.sigma.inverse(),
            Move::Flip => self.sigma.compose(&self.tau),
            Move::MirrorFlip => self.sigma.compose(&self.tau).inverse(),
        };
        FGraph {
            sigma,
            tau: self.tau.clone(),
        }
    }

    pub fn to_json(&self, name: Option<String>) -> FGraphJson {
        FGraphJson {
            format: FGRAPH_FORMAT.to_string(),
            complexity: self.complexity(),
            sigma: self.sigma.clone(),
            tau: self.tau.clone(),
            name,
        }
    }
}

/// Checks the f-graph invariants: even degree `2m` with `m ≥ 1`, matching
/// degrees, `tau` a fixed-point-free involution, and connectivity.
pub fn validate(f: FGraph) -> Result<FGraph> {
    let d = f.sigma.degree();
    if f.tau.degree() != d {
        return Err(AtlasError::DegreeMismatch {
            expected: d,
            found: f.tau.degree(),
        });
    }
    if d == 0 {
        return Err(AtlasError::EmptyAtom);
    }
    if !d.is_multiple_of(2) {
        return Err(AtlasError::DegreeMismatch {
            expected: d + 1,
            found: d,
        });
    }
    for i in 0..d {
        let j = f.tau.apply(i);
        if j == i || f.tau.apply(j) != i {
            return Err(AtlasError::BadMatching { point: i });
        }
    }
    let reached = reachable_from_zero(&f.sigma, &f.tau);
    if reached != d {
        return Err(AtlasError::Disconnected { reached, total: d });
    }
    Ok(f)
}

fn reachable_from_zero(sigma: &Permutation, tau: &Permutation) -> usize {
    let d = sigma.degree();
    let sigma_inv = sigma.inverse();
    let mut seen = vec![false; d];
    seen[0] = true;
    let mut stack = vec![0];
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for v in [sigma.apply(u), sigma_inv.apply(u), tau.apply(u)] {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    count
}

/// `(negative, positive)`: cycles of `sigma` and of `sigma∘tau`.
pub fn boundary_circles(f: &FGraph) -> (usize, usize) {
    (
        f.sigma.cycle_count(),
        f.positive_cycles_perm().cycle_count(),
    )
}

/// Genus of the closed surface obtained by capping every boundary circle.
pub fn genus(f: &FGraph) -> usize {
    let (neg, pos) = boundary_circles(f);
    let twice = 2 + f.complexity() as i64 - (neg + pos) as i64;
    assert!(twice >= 0 && twice % 2 == 0, "non-integral genus for {f:?}");
    (twice / 2) as usize
}

/// Moves identifying atoms beyond relabeling: orientation reversal and the
/// sign change of the function. They form a Klein four-group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Move {
    Identity,
    Mirror,
    Flip,
    MirrorFlip,
}

impl Move {
    pub const ALL: [Move; 4] = [Move::Identity, Move::Mirror, Move::Flip, Move::MirrorFlip];

    fn bits(self) -> (bool, bool) {
        match self {
            Move::Identity => (false, false),
            Move::Mirror => (true, false),
            Move::Flip => (false, true),
            Move::MirrorFlip => (true, true),
        }
    }

    fn from_bits(mirror: bool, flip: bool) -> Move {
        match (mirror, flip) {
            (false, false) => Move::Identity,
            (true, false) => Move::Mirror,
            (false, true) => Move::Flip,
            (true, true) => Move::MirrorFlip,
        }
    }

    pub fn then(self, other: Move) -> Move {
        let (a, b) = self.bits();
        let (c, d) = other.bits();
        Move::from_bits(a ^ c, b ^ d)
    }

    /// Whether the move exchanges the negative and positive boundary circles.
    pub fn swaps_sides(self) -> bool {
        self.bits().1
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Move::Identity => "identity",
            Move::Mirror => "mirror",
            Move::Flip => "flip",
            Move::MirrorFlip => "mirror-flip",
        };
        f.write_str(s)
    }
}

/// The eight words in `(sigma, tau)` reachable from `sigma` by the moves,
/// tagged by the move class. Words in the same class differ by conjugation
/// with `tau`.
fn move_words(f: &FGraph) -> Vec<(Move, Permutation)> {
    let s = &f.sigma;
    let t = &f.tau;
    let s_inv = s.inverse();
    vec![
        (Move::Identity, s.clone()),
        (Move::Identity, s.conjugate_by(t)),
        (Move::Mirror, s_inv.clone()),
        (Move::Mirror, s_inv.conjugate_by(t)),
        (Move::Flip, s.compose(t)),
        (Move::Flip, t.compose(s)),
        (Move::MirrorFlip, t.compose(&s_inv)),
        (Move::MirrorFlip, s_inv.compose(t)),
    ]
}

/// All `φ` with `φ·a·φ⁻¹ = c` and `φ·b·φ⁻¹ = d`, given that `⟨a, b⟩` is
/// transitive. Each candidate is fixed by the image of point 0.
fn intertwiners(
    a: &Permutation,
    b: &Permutation,
    c: &Permutation,
    d: &Permutation,
) -> Vec<Permutation> {
    let n = a.degree();
    if c.degree() != n || d.degree() != n {
        return Vec::new();
    }
    let mut out = Vec::new();
    'candidate: for target in 0..n {
        let mut phi = vec![usize::MAX; n];
        let mut used = vec![false; n];
        phi[0] = target;
        used[target] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            for (src, dst) in [(a, c), (b, d)] {
                let x = src.apply(u);
                let y = dst.apply(phi[u]);
                if phi[x] == usize::MAX {
                    if used[y] {
                        continue 'candidate;
                    }
                    phi[x] = y;
                    used[y] = true;
                    queue.push_back(x);
                } else if phi[x] != y {
                    continue 'candidate;
                }
            }
        }
        if phi.contains(&usize::MAX) {
            continue;
        }
        out.push(Permutation::new_unchecked(phi));
    }
    out
}

/// Orientation- and sign-preserving symmetries: the centralizer of
/// `⟨sigma, tau⟩`. It acts freely on the `2m` points, so its order is at most `2m`.
pub fn symmetry_group(f: &FGraph) -> PermutationGroup {
    let elements: BTreeSet<Permutation> = intertwiners(&f.sigma, &f.tau, &f.sigma, &f.tau)
        .into_iter()
        .collect();
    PermutationGroup::from_elements(f.points(), elements)
}

/// Relabelings `φ` carrying `from` onto a move-image of `to`: `φ` conjugates
/// `from.tau` to `to.tau` and `from.sigma` to one of the move words of `to`.
pub fn isomorphisms(from: &FGraph, to: &FGraph) -> BTreeSet<(Permutation, Move)> {
    let mut out = BTreeSet::new();
    if from.points() != to.points() {
        return out;
    }
    for (mv, word) in move_words(to) {
        for phi in intertwiners(&from.sigma, &from.tau, &word, &to.tau) {
            out.insert((phi, mv));
        }
    }
    out
}

/// Symmetries up to the mirror and flip moves, each tagged with its move
/// class. The underlying permutations form a group normalizing
/// [`symmetry_group`]; composing two tagged elements composes their tags.
pub fn extended_symmetries(f: &FGraph) -> BTreeSet<(Permutation, Move)> {
    isomorphisms(f, f)
}

/// The permutations of [`extended_symmetries`] without their tags.
pub fn extended_symmetry_group(f: &FGraph) -> PermutationGroup {
    let elements = extended_symmetries(f).into_iter().map(|(p, _)| p).collect();
    PermutationGroup::from_elements(f.points(), elements)
}

/// Breadth-first relabeling from `root`: visiting a point numbers its
/// `sigma`-image and then its `tau`-image.
fn bfs_relabeling(sigma: &Permutation, tau: &Permutation, root: usize) -> Permutation {
    let n = sigma.degree();
    let mut label = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    label[root] = 0;
    order.push(root);
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        for v in [sigma.apply(u), tau.apply(u)] {
            if label[v] == usize::MAX {
                label[v] = order.len();
                order.push(v);
            }
        }
    }
    debug_assert_eq!(order.len(), n, "relabeling a disconnected f-graph");
    Permutation::new_unchecked(label)
}

/// Canonical representative of the atom: the lexicographically smallest
/// `(sigma, tau)` among breadth-first relabelings from every root of every
/// move-image. Two f-graphs are the same atom iff their canonical forms agree.
pub fn canonical_form(f: &FGraph) -> FGraph {
    Move::ALL
        .iter()
        .map(|&mv| f.apply_move(mv))
        .flat_map(|g| {
            (0..g.points())
                .map(|root| g.relabel(&bfs_relabeling(&g.sigma, &g.tau, root)))
                .collect::<Vec<_>>()
        })
        .min()
        .expect("atoms have at least two points")
}

/// The maximally symmetric series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Series {
    X,
    Y,
}

/// `X_m`: two equally oriented `m`-cycles joined rung by rung.
/// `Y_m`: one `2m`-cycle with the antipodal matching.
pub fn standard_series(series: Series, m: usize) -> Result<FGraph> {
    if m == 0 {
        return Err(AtlasError::EmptyAtom);
    }
    let d = 2 * m;
    let (sigma, tau): (Vec<usize>, Vec<usize>) = match series {
        Series::X => (
            (0..d)
                .map(|i| {
                    if i < m {
                        (i + 1) % m
                    } else {
                        m + (i - m + 1) % m
                    }
                })
                .collect(),
            (0..d).map(|i| if i < m { i + m } else { i - m }).collect(),
        ),
        Series::Y => (
            (0..d).map(|i| (i + 1) % d).collect(),
            (0..d).map(|i| (i + m) % d).collect(),
        ),
    };
    FGraph::from_images(&sigma, &tau)
}

/// A cyclic group acting on an atom through one of its symmetries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomAction {
    atom: FGraph,
    generator: Permutation,
    order: usize,
}

impl AtomAction {
    pub fn new(atom: FGraph, generator: Permutation) -> Result<Self> {
        if !atom.is_symmetry(&generator) {
            return Err(AtlasError::NotASymmetry { perm: generator });
        }
        let order = generator.order();
        Ok(AtomAction {
            atom,
            generator,
            order,
        })
    }

    pub fn atom(&self) -> &FGraph {
        &self.atom
    }

    pub fn generator(&self) -> &Permutation {
        &self.generator
    }

    pub fn order(&self) -> usize {
        self.order
    }
}

/// Number of saddles fixed setwise by `generator^power`. With `power = k/2`
/// this is the count of rank-0 points whose stabilizer is `Z2`.
pub fn rank0_fixed_count(action: &AtomAction, power: i64) -> usize {
    action.atom.fixed_saddles(&action.generator.pow(power))
}

/// The atom `f/h` for a group `h` of symmetries acting freely on the surface.
///
/// Freeness fails when a non-identity element fixes an f-graph vertex or
/// swaps the two corners of a saddle (fixing the saddle point itself).
/// Quotient points are the `h`-orbits numbered by their smallest element.
pub fn quotient_atom(f: &FGraph, h: &PermutationGroup) -> Result<FGraph> {
    if h.degree() != f.points() {
        return Err(AtlasError::DegreeMismatch {
            expected: f.points(),
            found: h.degree(),
        });
    }
    for g in h.elements() {
        if !f.is_symmetry(g) {
            return Err(AtlasError::NotASymmetry { perm: g.clone() });
        }
        if g.is_identity() {
            continue;
        }
        for i in 0..f.points() {
            if g.apply(i) == i {
                return Err(AtlasError::NonFreeAction {
                    element: g.to_string(),
                    location: format!("f-graph vertex {i}"),
                });
            }
            if g.apply(i) == f.tau.apply(i) {
                return Err(AtlasError::NonFreeAction {
                    element: g.to_string(),
                    location: format!(
                        "saddle ({}, {})",
                        i.min(f.tau.apply(i)),
                        i.max(f.tau.apply(i))
                    ),
                });
            }
        }
    }
    let orbit_of = orbit_index(f.points(), h);
    let count = orbit_of.iter().max().map_or(0, |&x| x + 1);
    let mut sigma = vec![0; count];
    let mut tau = vec![0; count];
    for i in 0..f.points() {
        sigma[orbit_of[i]] = orbit_of[f.sigma.apply(i)];
        tau[orbit_of[i]] = orbit_of[f.tau.apply(i)];
    }
    FGraph::from_images(&sigma, &tau)
}

/// Orbit number of every point, orbits numbered in order of their smallest point.
pub(crate) fn orbit_index(points: usize, h: &PermutationGroup) -> Vec<usize> {
    let mut index = vec![usize::MAX; points];
    let mut next = 0;
    for i in 0..points {
        if index[i] != usize::MAX {
            continue;
        }
        for g in h.elements() {
            index[g.apply(i)] = next;
        }
        next += 1;
    }
    index
}

pub const FGRAPH_FORMAT: &str = "fgraph-v1";

/// `{"format":"fgraph-v1","complexity":m,"sigma":[…],"tau":[…],"name":…}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FGraphJson {
    pub format: String,
    pub complexity: usize,
    pub sigma: Permutation,
    pub tau: Permutation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl FGraphJson {
    pub fn to_fgraph(&self) -> Result<FGraph> {
        if self.format != FGRAPH_FORMAT {
            return Err(AtlasError::Parse(format!(
                "expected format {FGRAPH_FORMAT:?}, found {:?}",
                self.format
            )));
        }
        let f = FGraph::new(self.sigma.clone(), self.tau.clone())?;
        if f.complexity() != self.complexity {
            return Err(AtlasError::DegreeMismatch {
                expected: 2 * self.complexity,
                found: f.points(),
            });
        }
        Ok(f)
    }
}
