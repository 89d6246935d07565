//! Topological invariants of simple minimal models.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::SimpleMinimalModel;
use crate::atom::{canonical_form, FGraph, NameTable};
use crate::permgroup::Permutation;

/// Number of rank-0 points: `m·n/k`.
pub fn rank0_count(model: &SimpleMinimalModel) -> usize {
    model.complexity() * model.n / model.k
}

/// Saddles fixed by `alpha^{k/2}`; 0 when `k` is odd (including `k = 1`).
pub fn half_order_fixed_count(model: &SimpleMinimalModel) -> usize {
    if model.k % 2 == 1 {
        return 0;
    }
    model
        .atom
        .fixed_saddles(&model.generator.pow((model.k / 2) as i64))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct M1 {
    pub atom: String,
    pub copies: usize,
}

/// The saddle stratum: `n/k` copies of the atom.
pub fn m1_decomposition(model: &SimpleMinimalModel) -> M1 {
    m1_decomposition_with(model, NameTable::shipped())
}

pub fn m1_decomposition_with(model: &SimpleMinimalModel, names: &NameTable) -> M1 {
    M1 {
        atom: names.identify(&model.atom).to_string(),
        copies: model.n / model.k,
    }
}

/// The focus stratum as `(focus complexity, copies)` terms, zero-copy terms
/// omitted.
pub fn m2_decomposition(model: &SimpleMinimalModel) -> Vec<(usize, usize)> {
    let (m, n, k) = (model.complexity(), model.n, model.k);
    let terms = if k % 2 == 1 {
        assert_eq!(
            m % k,
            0,
            "odd-order symmetries fix no saddle, so k divides m"
        );
        vec![(n, m / k)]
    } else {
        let s = half_order_fixed_count(model);
        let k1 = k / 2;
        assert_eq!((m - s) % k, 0, "free saddle orbits have size k");
        assert_eq!(
            s % k1,
            0,
            "saddles fixed by the involution lie in orbits of size k/2"
        );
        vec![(n, (m - s) / k), (n / 2, s / k1)]
    };
    terms.into_iter().filter(|&(_, c)| c > 0).collect()
}

fn cycle_orbit_count(cycles_of: &Permutation, generator: &Permutation) -> usize {
    let mut cycle_id = vec![0; cycles_of.degree()];
    let cycles = cycles_of.cycles();
    for (c, cycle) in cycles.iter().enumerate() {
        for &i in cycle {
            cycle_id[i] = c;
        }
    }
    let mut seen = vec![false; cycles.len()];
    let mut orbits = 0;
    for start in 0..cycles.len() {
        if seen[start] {
            continue;
        }
        orbits += 1;
        let mut c = start;
        while !seen[c] {
            seen[c] = true;
            c = cycle_id[generator.apply(cycles[c][0])];
        }
    }
    orbits
}

/// Orbits of `⟨alpha⟩` on the negative and on the positive boundary circles,
/// as an ascending pair.
pub fn torus_counts(model: &SimpleMinimalModel) -> (usize, usize) {
    let neg = cycle_orbit_count(model.atom.sigma(), &model.generator);
    let pos = cycle_orbit_count(&model.atom.positive_cycles_perm(), &model.generator);
    (neg.min(pos), neg.max(pos))
}

/// Per chain, the number of 1-dimensional and 3-dimensional orbits, sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChainInvariant(pub Vec<(usize, usize)>);

impl ChainInvariant {
    pub fn chains(&self) -> &[(usize, usize)] {
        &self.0
    }

    pub fn total_one_dim(&self) -> usize {
        self.0.iter().map(|c| c.0).sum()
    }

    pub fn total_three_dim(&self) -> usize {
        self.0.iter().map(|c| c.1).sum()
    }
}

/// Incidence graph of the singular leaf modulo the group.
///
/// Node `(v, x_i)` is a 1-dimensional orbit, node `(v, c_j)` a 3-dimensional
/// one, for each leaf edge `v`. `(v, x_i)` touches `(v, c_j)` when
/// `i ∈ {j, j+1 mod n}`.
struct ChainGraph {
    points: usize,
    n: usize,
    /// Orbit representative of every node.
    rep: Vec<usize>,
    /// Union-find parent over representatives.
    parent: Vec<usize>,
}

impl ChainGraph {
    fn new(model: &SimpleMinimalModel) -> Self {
        let points = model.atom.points();
        let n = model.n;
        let step = n / model.k;
        let total = 2 * points * n;
        let mut rep = vec![usize::MAX; total];
        for node in 0..total {
            if rep[node] != usize::MAX {
                continue;
            }
            let mut orbit = Vec::new();
            let mut x = node;
            loop {
                orbit.push(x);
                let (three, v, i) = decode(x, points, n);
                x = encode(three, model.generator.apply(v), (i + step) % n, points, n);
                if x == node {
                    break;
                }
            }
            let min = *orbit.iter().min().expect("orbit contains the node");
            for y in orbit {
                rep[y] = min;
            }
        }
        let mut graph = ChainGraph {
            points,
            n,
            rep,
            parent: (0..total).collect(),
        };
        for (a, b) in graph.edges() {
            graph.union(a, b);
        }
        graph
    }

    /// Edges between orbit representatives, deduplicated.
    fn edges(&self) -> BTreeSet<(usize, usize)> {
        let (points, n) = (self.points, self.n);
        let mut out = BTreeSet::new();
        for v in 0..points {
            for j in 0..n {
                let c = self.rep[encode(true, v, j, points, n)];
                for i in [j, (j + 1) % n] {
                    let x = self.rep[encode(false, v, i, points, n)];
                    out.insert((x, c));
                }
            }
        }
        out
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    fn representatives(&self) -> BTreeSet<usize> {
        self.rep.iter().copied().collect()
    }
}

fn encode(three: bool, v: usize, i: usize, points: usize, n: usize) -> usize {
    usize::from(three) * points * n + v * n + i
}

fn decode(node: usize, points: usize, n: usize) -> (bool, usize, usize) {
    let three = node >= points * n;
    let rest = node % (points * n);
    (three, rest / n, rest % n)
}

pub fn chain_invariant(model: &SimpleMinimalModel) -> ChainInvariant {
    let mut graph = ChainGraph::new(model);
    let mut counts: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for r in graph.representatives() {
        let root = graph.find(r);
        let entry = counts.entry(root).or_default();
        if decode(r, graph.points, graph.n).0 {
            entry.1 += 1;
        } else {
            entry.0 += 1;
        }
    }
    let mut chains: Vec<(usize, usize)> = counts.into_values().collect();
    chains.sort();
    ChainInvariant(chains)
}

/// The quotient incidence graph in Graphviz DOT, one cluster per chain.
pub fn chains_dot(model: &SimpleMinimalModel) -> String {
    let mut graph = ChainGraph::new(model);
    let (points, n) = (graph.points, graph.n);
    let name = |node: usize| {
        let (three, v, i) = decode(node, points, n);
        if three {
            format!("e{v}_c{i}")
        } else {
            format!("e{v}_x{i}")
        }
    };
    let mut clusters: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for r in graph.representatives() {
        let root = graph.find(r);
        clusters.entry(root).or_default().push(r);
    }
    let mut out = String::from("graph chains {\n");
    for (c, members) in clusters.values().enumerate() {
        let _ = writeln!(out, "  subgraph cluster_{c} {{");
        for &r in members {
            let shape = if decode(r, points, n).0 {
                "box"
            } else {
                "circle"
            };
            let _ = writeln!(out, "    {} [shape={shape}];", name(r));
        }
        out.push_str("  }\n");
    }
    for (a, b) in graph.edges() {
        let _ = writeln!(out, "  {} -- {};", name(a), name(b));
    }
    out.push_str("}\n");
    out
}

/// Invariants used to tell models apart. Equal models have equal
/// fingerprints under any relabeling of the atom.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fingerprint {
    pub atom_canonical: FGraph,
    pub n: usize,
    pub k: usize,
    pub s: usize,
    pub rank0_count: usize,
    pub m1: M1,
    pub m2: Vec<(usize, usize)>,
    pub torus_pair: (usize, usize),
    pub chains: ChainInvariant,
}

pub fn fingerprint(model: &SimpleMinimalModel) -> Fingerprint {
    fingerprint_with(model, NameTable::shipped())
}

pub fn fingerprint_with(model: &SimpleMinimalModel, names: &NameTable) -> Fingerprint {
    let mut m2 = m2_decomposition(model);
    m2.sort();
    Fingerprint {
        atom_canonical: canonical_form(&model.atom),
        n: model.n,
        k: model.k,
        s: half_order_fixed_count(model),
        rank0_count: rank0_count(model),
        m1: m1_decomposition_with(model, names),
        m2,
        torus_pair: torus_counts(model),
        chains: chain_invariant(model),
    }
}
