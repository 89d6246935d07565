//! Small permutation groups stored as explicit element sets.
//!
//! Every group the engine meets is the symmetry group of an atom (order at
//! most `2m`) or a finite product action built on top of one, so closure by
//! breadth-first multiplication is exact and cheap. Permutations are 0-based
//! image sequences: entry `i` is the image of point `i`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{AtlasError, Result};

/// Closure aborts past this many elements.
pub const MAX_GROUP_ORDER: usize = 100_000;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let degree = images.len();
        let mut seen = vec![false; degree];
        for &x in &images {
            if x >= degree || seen[x] {
                return Err(AtlasError::InvalidPermutation { images, degree });
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub(crate) fn new_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Permutation::new(images.clone()).is_ok());
        Permutation { images }
    }

    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    /// Builds a permutation from disjoint cycles; unlisted points are fixed.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (pos, &x) in cycle.iter().enumerate() {
                let y = cycle[(pos + 1) % cycle.len()];
                if x >= degree || y >= degree || touched[x] {
                    return Err(AtlasError::InvalidPermutation { images, degree });
                }
                touched[x] = true;
                images[x] = y;
            }
        }
        Permutation::new(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(
            self.degree(),
            other.degree(),
            "composing permutations of different degree"
        );
        Permutation {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x] = i;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Integer power; negative exponents use the inverse.
    pub fn pow(&self, exponent: i64) -> Permutation {
        let base = if exponent < 0 {
            self.inverse()
        } else {
            self.clone()
        };
        let mut result = Permutation::identity(self.degree());
        for _ in 0..exponent.unsigned_abs() {
            result = base.compose(&result);
        }
        result
    }

    /// `conjugator ∘ self ∘ conjugator⁻¹`.
    pub fn conjugate_by(&self, conjugator: &Permutation) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[conjugator.images[i]] = conjugator.images[x];
        }
        Permutation { images }
    }

    pub fn commutes_with(&self, other: &Permutation) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &x)| other.images[x] == self.images[other.images[i]])
    }

    /// Disjoint cycles, each starting at its smallest point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut cycles = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            cycles.push(cycle);
        }
        cycles
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    /// Order as the lcm of cycle lengths.
    pub fn order(&self) -> usize {
        self.cycles().iter().fold(1, |acc, c| acc.lcm(&c.len()))
    }

    pub fn fixed_points(&self) -> impl Iterator<Item = usize> + '_ {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, x)| i == *x)
            .map(|(i, _)| i)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = AtlasError;

    fn try_from(images: Vec<usize>) -> Result<Self> {
        Permutation::new(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.images
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Isomorphism-type label for the small groups occurring as atom symmetries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupLabel {
    Trivial,
    Cyclic(usize),
    Klein,
    S3,
    Other { order: usize, abelian: bool },
}

impl GroupLabel {
    pub fn is_abelian(&self) -> bool {
        !matches!(
            self,
            GroupLabel::S3 | GroupLabel::Other { abelian: false, .. }
        )
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupLabel::Trivial => write!(f, "e"),
            GroupLabel::Cyclic(n) => write!(f, "Z{n}"),
            GroupLabel::Klein => write!(f, "Z2+Z2"),
            GroupLabel::S3 => write!(f, "S3"),
            GroupLabel::Other { order, .. } => write!(f, "order-{order}"),
        }
    }
}

/// A finite permutation group held as its full element set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PermutationGroup {
    degree: usize,
    elements: BTreeSet<Permutation>,
}

impl fmt::Debug for PermutationGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermutationGroup")
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("elements", &self.elements)
            .finish()
    }
}

impl PermutationGroup {
    pub fn trivial(degree: usize) -> Self {
        PermutationGroup {
            degree,
            elements: BTreeSet::from([Permutation::identity(degree)]),
        }
    }

    /// Closure of `generators` under composition.
    pub fn generate<'a, I>(degree: usize, generators: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Permutation>,
    {
        let generators: Vec<&Permutation> = generators.into_iter().collect();
        for g in &generators {
            if g.degree() != degree {
                return Err(AtlasError::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let identity = Permutation::identity(degree);
        let mut elements = BTreeSet::from([identity.clone()]);
        let mut queue = VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            for g in &generators {
                let y = g.compose(&x);
                if elements.insert(y.clone()) {
                    if elements.len() > MAX_GROUP_ORDER {
                        return Err(AtlasError::GroupTooLarge {
                            limit: MAX_GROUP_ORDER,
                        });
                    }
                    queue.push_back(y);
                }
            }
        }
        Ok(PermutationGroup { degree, elements })
    }

    pub fn cyclic(generator: &Permutation) -> Self {
        let degree = generator.degree();
        let mut elements = BTreeSet::new();
        let mut x = Permutation::identity(degree);
        while elements.insert(x.clone()) {
            x = generator.compose(&x);
        }
        PermutationGroup { degree, elements }
    }

    /// Wraps an element set already known to be a group.
    pub(crate) fn from_elements(degree: usize, elements: BTreeSet<Permutation>) -> Self {
        debug_assert!(elements.contains(&Permutation::identity(degree)));
        PermutationGroup { degree, elements }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = &Permutation> {
        self.elements.iter()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.contains(p)
    }

    pub fn is_subgroup_of(&self, other: &PermutationGroup) -> bool {
        self.degree == other.degree && self.elements.is_subset(&other.elements)
    }

    pub fn is_abelian(&self) -> bool {
        let elems: Vec<_> = self.elements.iter().collect();
        elems
            .iter()
            .enumerate()
            .all(|(i, a)| elems[i + 1..].iter().all(|b| a.commutes_with(b)))
    }

    pub fn is_cyclic(&self) -> bool {
        let n = self.order();
        self.elements.iter().any(|g| g.order() == n)
    }

    /// A generating set picked greedily in element order.
    pub fn generators(&self) -> Vec<Permutation> {
        let mut gens = Vec::new();
        let mut span = PermutationGroup::trivial(self.degree);
        for g in &self.elements {
            if !span.contains(g) {
                gens.push(g.clone());
                span = PermutationGroup::generate(self.degree, &gens)
                    .expect("subgroup of a finite group");
            }
        }
        gens
    }

    pub fn conjugate_by(&self, conjugator: &Permutation) -> PermutationGroup {
        PermutationGroup {
            degree: self.degree,
            elements: self
                .elements
                .iter()
                .map(|g| g.conjugate_by(conjugator))
                .collect(),
        }
    }

    pub fn iso_type(&self) -> GroupLabel {
        let n = self.order();
        if n == 1 {
            GroupLabel::Trivial
        } else if self.is_cyclic() {
            GroupLabel::Cyclic(n)
        } else if n == 4 {
            GroupLabel::Klein
        } else if n == 6 && !self.is_abelian() {
            GroupLabel::S3
        } else {
            GroupLabel::Other {
                order: n,
                abelian: self.is_abelian(),
            }
        }
    }

    /// Every cyclic subgroup exactly once, trivial subgroup included, ordered
    /// by order and then by element set.
    pub fn cyclic_subgroups(&self) -> Vec<PermutationGroup> {
        let subgroups: BTreeSet<(usize, PermutationGroup)> = self
            .elements
            .iter()
            .map(|g| {
                let h = PermutationGroup::cyclic(g);
                (h.order(), h)
            })
            .collect();
        subgroups.into_iter().map(|(_, h)| h).collect()
    }

    /// A generator of a cyclic group, the smallest element of full order.
    pub fn cyclic_generator(&self) -> Option<&Permutation> {
        let n = self.order();
        self.elements.iter().find(|g| g.order() == n)
    }

    pub fn to_spec(&self) -> GroupSpec {
        GroupSpec {
            degree: self.degree,
            generators: self.generators(),
        }
    }
}

/// Whether some listed conjugator `π` satisfies `π·h1·π⁻¹ = h2` as sets.
pub fn are_conjugate<'a, I>(
    h1: &PermutationGroup,
    h2: &PermutationGroup,
    conjugators: I,
) -> Result<bool>
where
    I: IntoIterator<Item = &'a Permutation>,
{
    if h1.degree() != h2.degree() {
        return Err(AtlasError::DegreeMismatch {
            expected: h1.degree(),
            found: h2.degree(),
        });
    }
    let conjugators: Vec<&Permutation> = conjugators.into_iter().collect();
    if let Some(bad) = conjugators.iter().find(|p| p.degree() != h1.degree()) {
        return Err(AtlasError::DegreeMismatch {
            expected: h1.degree(),
            found: bad.degree(),
        });
    }
    if h1.order() != h2.order() {
        return Ok(false);
    }
    Ok(conjugators
        .iter()
        .any(|p| h1.elements().all(|g| h2.contains(&g.conjugate_by(p)))))
}

/// Serialized form `{"degree": d, "generators": [[...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub degree: usize,
    pub generators: Vec<Permutation>,
}

impl GroupSpec {
    pub fn build(&self) -> Result<PermutationGroup> {
        PermutationGroup::generate(self.degree, &self.generators)
    }
}
