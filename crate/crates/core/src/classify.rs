//! Enumeration and deduplication of simple minimal models of a given
//! complexity.
//!
//! For every divisor `m` of `p`, every atom of complexity `m` and every
//! cyclic subgroup `Z_k` of its symmetry group (up to conjugacy by extended
//! symmetries), the candidate `(atom × F_{kp/m})/Z_k` is formed with each
//! generator of `Z_k` up to inversion paired to the shift `n/k`. Candidates
//! are merged when an isomorphism of atoms carries one generator to the other
//! or to its inverse; otherwise fingerprints must separate them, and pairs
//! that neither test settles are kept and reported.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::atom::{
    canonical_form, enumerate_atoms_bounded, extended_symmetry_group, isomorphisms, symmetry_group,
    FGraph, NameTable, DEFAULT_MAX_COMPLEXITY,
};
use crate::error::{AtlasError, Result};
use crate::model::{fingerprint_with, Fingerprint, ModelJson, SimpleMinimalModel};
use crate::permgroup::{are_conjugate, Permutation, PermutationGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    Distinct,
    Unknown,
}

/// Equivalent when some atom isomorphism (any move class) conjugates the
/// generator of `a` to the generator of `b` or its inverse; the focus side
/// follows by the identity or by the reflection of `F_n`.
pub fn decide_equivalence(a: &SimpleMinimalModel, b: &SimpleMinimalModel) -> Verdict {
    decide_equivalence_with(a, b, NameTable::shipped())
}

pub fn decide_equivalence_with(
    a: &SimpleMinimalModel,
    b: &SimpleMinimalModel,
    names: &NameTable,
) -> Verdict {
    if a.n() != b.n() || a.k() != b.k() || a.complexity() != b.complexity() {
        return Verdict::Distinct;
    }
    if canonical_form(a.atom()) != canonical_form(b.atom()) {
        return Verdict::Distinct;
    }
    decide_same_shape(
        a,
        &fingerprint_with(a, names),
        b,
        &fingerprint_with(b, names),
    )
}

/// The verdict for two models already known to share atom, `n` and `k`.
fn decide_same_shape(
    a: &SimpleMinimalModel,
    fa: &Fingerprint,
    b: &SimpleMinimalModel,
    fb: &Fingerprint,
) -> Verdict {
    let beta = b.generator();
    let beta_inv = beta.inverse();
    let conjugate = isomorphisms(a.atom(), b.atom())
        .into_iter()
        .any(|(phi, _)| {
            let image = a.generator().conjugate_by(&phi);
            image == *beta || image == beta_inv
        });
    if conjugate {
        assert_eq!(fa, fb, "conjugate models must have equal fingerprints");
        return Verdict::Equivalent;
    }
    if fa != fb {
        Verdict::Distinct
    } else {
        Verdict::Unknown
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "status", content = "with")]
pub enum EntryStatus {
    Distinct,
    /// Could not be separated from, nor identified with, the named entries.
    Unresolved(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub model: SimpleMinimalModel,
    pub fingerprint: Fingerprint,
    pub name: String,
    pub status: EntryStatus,
    pub symmetry_order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct UnresolvedPair {
    pub first: String,
    pub second: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog {
    pub complexity: usize,
    pub entries: Vec<CatalogEntry>,
    pub warnings: Vec<UnresolvedPair>,
}

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    pub names: NameTable,
    pub max_complexity: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            names: NameTable::shipped().clone(),
            max_complexity: DEFAULT_MAX_COMPLEXITY,
        }
    }
}

pub fn classify(p: usize) -> Result<Catalog> {
    classify_with(p, &ClassifyOptions::default())
}

pub fn classify_with(p: usize, options: &ClassifyOptions) -> Result<Catalog> {
    check_bounds(p, options)?;
    let mut candidates = Vec::new();
    for m in (1..=p).filter(|m| p.is_multiple_of(*m)) {
        for atom in enumerate_atoms_bounded(m, options.max_complexity)? {
            let sym = symmetry_group(&atom);
            let ext = extended_symmetry_group(&atom);
            for h in subgroup_representatives(&sym, &ext)? {
                let k = h.order();
                let n = k * p / m;
                for g in generators_up_to_inversion(&h) {
                    candidates.push((SimpleMinimalModel::new(atom.clone(), n, g)?, sym.order()));
                }
            }
        }
    }
    Ok(assemble(p, candidates, &options.names))
}

/// Every cyclic action, with no conjugacy pre-reduction: one candidate per
/// element of every symmetry group. Used to cross-check [`classify`].
pub fn classify_exhaustive(p: usize, options: &ClassifyOptions) -> Result<Catalog> {
    check_bounds(p, options)?;
    let mut candidates = Vec::new();
    for m in (1..=p).filter(|m| p.is_multiple_of(*m)) {
        for atom in enumerate_atoms_bounded(m, options.max_complexity)? {
            let sym = symmetry_group(&atom);
            for g in sym.elements() {
                let n = g.order() * p / m;
                candidates.push((
                    SimpleMinimalModel::new(atom.clone(), n, g.clone())?,
                    sym.order(),
                ));
            }
        }
    }
    Ok(assemble(p, candidates, &options.names))
}

fn check_bounds(p: usize, options: &ClassifyOptions) -> Result<()> {
    if p == 0 || p > options.max_complexity {
        return Err(AtlasError::ComplexityOutOfBounds {
            requested: p,
            max: options.max_complexity,
        });
    }
    Ok(())
}

/// Cyclic subgroups of `sym`, one per conjugacy class under `ext`.
fn subgroup_representatives(
    sym: &PermutationGroup,
    ext: &PermutationGroup,
) -> Result<Vec<PermutationGroup>> {
    let mut reps: Vec<PermutationGroup> = Vec::new();
    for h in sym.cyclic_subgroups() {
        let mut seen = false;
        for r in reps.iter().filter(|r| r.order() == h.order()) {
            if are_conjugate(r, &h, ext.elements())? {
                seen = true;
                break;
            }
        }
        if !seen {
            reps.push(h);
        }
    }
    Ok(reps)
}

fn generators_up_to_inversion(h: &PermutationGroup) -> Vec<Permutation> {
    let k = h.order();
    let mut out: Vec<Permutation> = Vec::new();
    for g in h.elements().filter(|g| g.order() == k) {
        if !out.contains(&g.inverse()) {
            out.push(g.clone());
        }
    }
    out
}

fn assemble(p: usize, candidates: Vec<(SimpleMinimalModel, usize)>, names: &NameTable) -> Catalog {
    struct Pending {
        model: SimpleMinimalModel,
        fingerprint: Fingerprint,
        symmetry_order: usize,
        unresolved: Vec<usize>,
    }
    let mut kept: Vec<Pending> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    // Only models with the same canonical atom, n and k can be equivalent.
    let mut buckets: BTreeMap<(FGraph, usize, usize), Vec<usize>> = BTreeMap::new();
    for (model, symmetry_order) in candidates {
        let fingerprint = fingerprint_with(&model, names);
        let bucket = buckets
            .entry((fingerprint.atom_canonical.clone(), model.n(), model.k()))
            .or_default();
        let mut unknown = Vec::new();
        let mut merged = false;
        for &i in bucket.iter() {
            let other = &kept[i];
            match decide_same_shape(&other.model, &other.fingerprint, &model, &fingerprint) {
                Verdict::Equivalent => {
                    merged = true;
                    break;
                }
                Verdict::Unknown => unknown.push(i),
                Verdict::Distinct => {}
            }
        }
        if merged {
            continue;
        }
        let idx = kept.len();
        for &i in &unknown {
            kept[i].unresolved.push(idx);
            pairs.push((i, idx));
        }
        bucket.push(idx);
        kept.push(Pending {
            fingerprint,
            model,
            symmetry_order,
            unresolved: unknown,
        });
    }

    // Display ordering: m, atom name, k, s, then the full fingerprint.
    let atom_names: Vec<String> = kept
        .iter()
        .map(|e| names.identify(e.model.atom()).to_string())
        .collect();
    let mut order: Vec<usize> = (0..kept.len()).collect();
    order.sort_by(|&a, &b| {
        let key = |i: usize| {
            let e = &kept[i];
            (
                e.model.complexity(),
                &atom_names[i],
                e.model.k(),
                e.fingerprint.s,
            )
        };
        key(a)
            .cmp(&key(b))
            .then_with(|| kept[a].fingerprint.cmp(&kept[b].fingerprint))
    });

    let base: Vec<String> = kept.iter().map(|e| e.model.display_name(names)).collect();
    let with_s: Vec<String> = kept
        .iter()
        .zip(&base)
        .map(|(e, b)| format!("{b} [s={}]", e.fingerprint.s))
        .collect();
    let mut display = vec![String::new(); kept.len()];
    let mut counters: BTreeMap<String, usize> = BTreeMap::new();
    for &i in &order {
        let name = if base.iter().filter(|b| **b == base[i]).count() == 1 {
            base[i].clone()
        } else if with_s.iter().filter(|b| **b == with_s[i]).count() == 1 {
            with_s[i].clone()
        } else {
            let c = counters.entry(with_s[i].clone()).or_insert(0);
            *c += 1;
            format!("{} #{c}", with_s[i])
        };
        display[i] = name;
    }

    let warnings = pairs
        .iter()
        .map(|&(a, b)| {
            let (first, second) =
                if order.iter().position(|&x| x == a) < order.iter().position(|&x| x == b) {
                    (a, b)
                } else {
                    (b, a)
                };
            UnresolvedPair {
                first: display[first].clone(),
                second: display[second].clone(),
            }
        })
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    let entries = order
        .iter()
        .map(|&i| {
            let e = &kept[i];
            let status = if e.unresolved.is_empty() {
                EntryStatus::Distinct
            } else {
                let mut with: Vec<String> =
                    e.unresolved.iter().map(|&j| display[j].clone()).collect();
                with.sort();
                EntryStatus::Unresolved(with)
            };
            CatalogEntry {
                model: e.model.clone(),
                fingerprint: e.fingerprint.clone(),
                name: display[i].clone(),
                status,
                symmetry_order: e.symmetry_order,
            }
        })
        .collect();
    Catalog {
        complexity: p,
        entries,
        warnings,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
}

impl std::str::FromStr for Format {
    type Err = AtlasError;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "table" => Ok(Format::Table),
            "json" => Ok(Format::Json),
            other => Err(AtlasError::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Serialize)]
struct EntryJson<'a> {
    name: &'a str,
    atom: String,
    n: usize,
    k: usize,
    symmetry_order: usize,
    fingerprint: &'a Fingerprint,
    #[serde(flatten)]
    status: &'a EntryStatus,
    model: ModelJson,
}

#[derive(Serialize)]
struct CatalogJson<'a> {
    complexity: usize,
    count: usize,
    entries: Vec<EntryJson<'a>>,
    warnings: &'a [UnresolvedPair],
}

impl Catalog {
    pub fn to_json_value(&self, names: &NameTable) -> serde_json::Value {
        let doc = CatalogJson {
            complexity: self.complexity,
            count: self.entries.len(),
            entries: self
                .entries
                .iter()
                .map(|e| EntryJson {
                    name: &e.name,
                    atom: names.identify(e.model.atom()).to_string(),
                    n: e.model.n(),
                    k: e.model.k(),
                    symmetry_order: e.symmetry_order,
                    fingerprint: &e.fingerprint,
                    status: &e.status,
                    model: e.model.to_json(names),
                })
                .collect(),
            warnings: &self.warnings,
        };
        serde_json::to_value(doc).expect("catalog serializes")
    }
}

pub fn render(catalog: &Catalog, format: Format, names: &NameTable) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&catalog.to_json_value(names))
                .expect("catalog serializes");
            s.push('\n');
            s
        }
        Format::Table => render_table(catalog),
    }
}

fn pairs(items: &[(usize, usize)]) -> String {
    items
        .iter()
        .map(|(a, b)| format!("{a}:{b}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn render_table(catalog: &Catalog) -> String {
    let header = [
        "name",
        "m",
        "|Sym|",
        "n",
        "k",
        "s",
        "rank0",
        "M1",
        "M2 (F:copies)",
        "tori",
        "chains (1d:3d)",
    ];
    let rows: Vec<Vec<String>> = catalog
        .entries
        .iter()
        .map(|e| {
            let f = &e.fingerprint;
            let mut name = e.name.clone();
            if matches!(e.status, EntryStatus::Unresolved(_)) {
                name.push_str(" (?)");
            }
            vec![
                name,
                e.model.complexity().to_string(),
                e.symmetry_order.to_string(),
                f.n.to_string(),
                f.k.to_string(),
                f.s.to_string(),
                f.rank0_count.to_string(),
                format!("{} x{}", f.m1.atom, f.m1.copies),
                pairs(&f.m2),
                format!("{{{},{}}}", f.torus_pair.0, f.torus_pair.1),
                pairs(&f.chains.0),
            ]
        })
        .collect();
    let widths: Vec<usize> = (0..header.len())
        .map(|c| {
            rows.iter()
                .map(|r| r[c].len())
                .chain([header[c].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (c, cell) in cells.iter().enumerate() {
            let _ = write!(
                s,
                "{}{:<w$}",
                if c == 0 { "" } else { "  " },
                cell,
                w = widths[c]
            );
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = format!(
        "complexity {}: {} models\n",
        catalog.complexity,
        catalog.entries.len()
    );
    out.push_str(&line(header.to_vec()));
    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    out.push_str(&line(rule.iter().map(|s| s.as_str()).collect()));
    for r in &rows {
        out.push_str(&line(r.iter().map(|s| s.as_str()).collect()));
    }
    if catalog.warnings.is_empty() {
        out.push_str("warnings: none\n");
    } else {
        out.push_str("warnings:\n");
        for w in &catalog.warnings {
            let _ = writeln!(out, "  unresolved: {} vs {}", w.first, w.second);
        }
    }
    out
}
