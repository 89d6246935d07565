//! Exhaustive enumeration of saddle atoms by complexity.
//!
//! Rather than scanning all `(2m)!` choices of `sigma`, the generator builds
//! f-graphs directly in breadth-first normal form: points are numbered in the
//! order a breadth-first walk from point 0 discovers them (sigma-image first,
//! then tau-image). Every rooted connected f-graph has exactly one such
//! labeling, so the search visits each rooted atom once and never produces a
//! disconnected one. Results are deduplicated by [`canonical_form`].

use std::collections::BTreeSet;

use super::{canonical_form, FGraph};
use crate::error::{AtlasError, Result};
use crate::permgroup::Permutation;

pub const DEFAULT_MAX_COMPLEXITY: usize = 6;

const UNSET: usize = usize::MAX;

/// All saddle atoms of complexity `m`, one canonical form each, sorted.
pub fn enumerate_atoms(m: usize) -> Result<Vec<FGraph>> {
    enumerate_atoms_bounded(m, DEFAULT_MAX_COMPLEXITY)
}

pub fn enumerate_atoms_bounded(m: usize, max_complexity: usize) -> Result<Vec<FGraph>> {
    if m == 0 || m > max_complexity {
        return Err(AtlasError::ComplexityOutOfBounds {
            requested: m,
            max: max_complexity,
        });
    }
    let mut search = Search {
        n: 2 * m,
        sigma: vec![UNSET; 2 * m],
        sigma_used: vec![false; 2 * m],
        tau: vec![UNSET; 2 * m],
        found: BTreeSet::new(),
    };
    search.visit(0, 1);
    Ok(search.found.into_iter().collect())
}

struct Search {
    n: usize,
    sigma: Vec<usize>,
    sigma_used: Vec<bool>,
    tau: Vec<usize>,
    found: BTreeSet<FGraph>,
}

impl Search {
    /// Assigns `sigma(u)` for the next unprocessed point `u`; `labeled` points
    /// have been discovered so far.
    fn visit(&mut self, u: usize, labeled: usize) {
        if u == self.n {
            self.record();
            return;
        }
        if u >= labeled {
            // u was never reached: the walk stalled, so the graph is disconnected.
            return;
        }
        for target in 0..=labeled.min(self.n - 1) {
            if self.sigma_used[target] {
                continue;
            }
            let labeled_after = if target == labeled {
                labeled + 1
            } else {
                labeled
            };
            self.sigma[u] = target;
            self.sigma_used[target] = true;
            self.assign_tau(u, labeled_after);
            self.sigma_used[target] = false;
            self.sigma[u] = UNSET;
        }
    }

    fn assign_tau(&mut self, u: usize, labeled: usize) {
        if self.tau[u] != UNSET {
            self.visit(u + 1, labeled);
            return;
        }
        for target in 0..=labeled.min(self.n - 1) {
            if target == u || self.tau[target] != UNSET {
                continue;
            }
            let labeled_after = if target == labeled {
                labeled + 1
            } else {
                labeled
            };
            self.tau[u] = target;
            self.tau[target] = u;
            self.visit(u + 1, labeled_after);
            self.tau[target] = UNSET;
            self.tau[u] = UNSET;
        }
    }

    fn record(&mut self) {
        let f = FGraph::new(
            Permutation::new_unchecked(self.sigma.clone()),
            Permutation::new_unchecked(self.tau.clone()),
        )
        .expect("breadth-first generation yields valid f-graphs");
        self.found.insert(canonical_form(&f));
    }
}
