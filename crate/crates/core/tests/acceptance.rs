//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use atlas_core::atom::{
    boundary_circles, canonical_form, enumerate_atoms, genus, quotient_atom, standard_series,
    symmetry_group, FGraph, NameTable, Series,
};
use atlas_core::classify::classify;
use atlas_core::focus::{shift_automorphism, Angle};
use atlas_core::model::{
    chain_invariant, m2_decomposition, rank0_count, reduce, torus_counts, AlmostDirectProduct,
    ProductElement, SimpleMinimalModel,
};
use atlas_core::permgroup::Permutation;
use proptest::strategy::{Just, Strategy};
use proptest::test_runner::{Config, TestRunner};

fn named(name: &str) -> FGraph {
    NameTable::shipped().resolve(name).unwrap()
}

fn atom_symmetry_groups() -> Result<String, String> {
    let expected = [
        ("B", "Z2"),
        ("C1", "Z4"),
        ("C2", "Z2+Z2"),
        ("D1", "Z2"),
        ("D2", "e"),
        ("E1", "Z6"),
        ("E2", "Z2"),
        ("E3", "S3"),
        ("F1", "e"),
        ("F2", "e"),
        ("G1", "Z2"),
        ("G2", "e"),
        ("G3", "Z2"),
        ("H1", "Z3"),
        ("H2", "e"),
    ];
    for (name, group) in expected {
        let got = symmetry_group(&named(name)).iso_type().to_string();
        if got != group {
            return Err(format!("{name}: expected {group}, got {got}"));
        }
    }
    // The table must also cover every atom of complexity at most 3.
    let all: usize = (1..=3).map(|m| enumerate_atoms(m).unwrap().len()).sum();
    if all != expected.len() {
        return Err(format!(
            "{all} atoms of complexity <= 3, table has {}",
            expected.len()
        ));
    }
    Ok(format!("{} atoms", expected.len()))
}

fn enumeration_counts() -> Result<String, String> {
    let counts: Vec<usize> = (1..=3).map(|m| enumerate_atoms(m).unwrap().len()).collect();
    if counts == [1, 4, 10] {
        Ok(format!("{counts:?}"))
    } else {
        Err(format!("got {counts:?}"))
    }
}

/// Saddles swapped onto themselves by `g`, counted from corner pairs.
fn swapped_saddles(f: &FGraph, g: &Permutation) -> usize {
    (0..f.points())
        .filter(|&i| g.apply(i) == f.tau().apply(i))
        .count()
        / 2
}

fn classification() -> Result<String, String> {
    // (atom, n, k, s) per entry; |Sym| is looked up from the atom.
    let expected: [&[(&str, usize, usize, usize)]; 3] = [
        &[("B", 1, 1, 0), ("B", 2, 2, 1)],
        &[
            ("B", 2, 1, 0),
            ("B", 4, 2, 1),
            ("D1", 1, 1, 0),
            ("D1", 2, 2, 0),
            ("D2", 1, 1, 0),
            ("C1", 1, 1, 0),
            ("C1", 2, 2, 2),
            ("C1", 4, 4, 2),
            ("C2", 1, 1, 0),
            ("C2", 2, 2, 0),
            ("C2", 2, 2, 2),
        ],
        &[
            ("B", 3, 1, 0),
            ("B", 6, 2, 1),
            ("E1", 1, 1, 0),
            ("E1", 2, 2, 3),
            ("E1", 3, 3, 0),
            ("E1", 6, 6, 3),
            ("E2", 1, 1, 0),
            ("E2", 2, 2, 1),
            ("E3", 1, 1, 0),
            ("E3", 2, 2, 1),
            // Complexity 3 = m·n/k forces k = 3 here.
            ("E3", 3, 3, 0),
            ("F1", 1, 1, 0),
            ("F2", 1, 1, 0),
            ("G1", 1, 1, 0),
            ("G1", 2, 2, 1),
            ("G2", 1, 1, 0),
            ("G3", 1, 1, 0),
            ("G3", 2, 2, 1),
            ("H1", 1, 1, 0),
            ("H1", 3, 3, 0),
            ("H2", 1, 1, 0),
        ],
    ];
    let mut counts = Vec::new();
    for (p, list) in (1..=3).zip(expected) {
        let catalog = classify(p).map_err(|e| e.to_string())?;
        if !catalog.warnings.is_empty() {
            return Err(format!(
                "p = {p}: {} unresolved pairs",
                catalog.warnings.len()
            ));
        }
        let want: BTreeMap<(usize, usize, usize, usize, String), usize> =
            list.iter()
                .fold(BTreeMap::new(), |mut acc, &(atom, n, k, s)| {
                    let sym = symmetry_group(&named(atom)).order();
                    *acc.entry((sym, n, k, s, atom.to_string())).or_default() += 1;
                    acc
                });
        let mut got: BTreeMap<(usize, usize, usize, usize, String), usize> = BTreeMap::new();
        for e in &catalog.entries {
            let model = &e.model;
            let s = if model.k() % 2 == 0 {
                swapped_saddles(model.atom(), &model.generator().pow(model.k() as i64 / 2))
            } else {
                0
            };
            if s != e.fingerprint.s {
                return Err(format!(
                    "{}: s = {} but {s} saddles swapped",
                    e.name, e.fingerprint.s
                ));
            }
            let atom = NameTable::shipped().identify(model.atom()).to_string();
            let sym = symmetry_group(model.atom()).order();
            *got.entry((sym, model.n(), model.k(), s, atom)).or_default() += 1;
        }
        if got != want {
            return Err(format!("p = {p}: signatures {got:?} != {want:?}"));
        }
        counts.push(catalog.entries.len());
    }
    if counts != [2, 11, 21] {
        return Err(format!("counts {counts:?}"));
    }
    Ok(format!("counts {counts:?}, no warnings"))
}

fn chain_fixtures() -> Result<String, String> {
    let c1 = named("C1");
    let direct = SimpleMinimalModel::new(c1.clone(), 1, Permutation::identity(4)).unwrap();
    let r = symmetry_group(&c1)
        .elements()
        .find(|g| g.order() == 4)
        .unwrap()
        .clone();
    let quotient = SimpleMinimalModel::new(c1, 2, r.pow(2)).unwrap();
    let a = chain_invariant(&direct).0;
    let b = chain_invariant(&quotient).0;
    if a != vec![(1, 1); 4] {
        return Err(format!("C1 x F1: {a:?}"));
    }
    if b != vec![(2, 2); 2] {
        return Err(format!("(C1 x F2)/Z2: {b:?}"));
    }
    Ok("4 x (1,1) and 2 x (2,2)".to_string())
}

fn reduction_fixture() -> Result<String, String> {
    let d1 = named("D1");
    let free = symmetry_group(&d1)
        .elements()
        .find(|g| g.order() == 2 && d1.fixed_saddles(g) == 0)
        .ok_or("D1 has no free involution")?
        .clone();
    let g = ProductElement::new(
        free,
        shift_automorphism(1, 0, Angle::new(1, 2).unwrap()).unwrap(),
    );
    let adp = AlmostDirectProduct::build(d1, 1, vec![g], Some(2)).map_err(|e| e.to_string())?;
    let (model, _) = reduce(&adp).map_err(|e| e.to_string())?;
    let name = model.display_name(NameTable::shipped());
    if name == "B x F1" && model.k() == 1 && model.n() == 1 {
        Ok(name)
    } else {
        Err(format!("reduced to {name}"))
    }
}

/// Pairs a cyclic subgroup of order `k` with no saddle fixed by a nontrivial
/// element against one of order `2k` whose involution fixes every saddle.
fn torus_table() -> Result<String, String> {
    let mut checked = 0;
    for m in 2..=6 {
        for series in [Series::X, Series::Y] {
            let f = standard_series(series, m).unwrap();
            let mut free: BTreeMap<usize, BTreeSet<(usize, usize)>> = BTreeMap::new();
            let mut fixing: BTreeMap<usize, BTreeSet<(usize, usize)>> = BTreeMap::new();
            for h in symmetry_group(&f).cyclic_subgroups() {
                let k = h.order();
                let g = h.cyclic_generator().unwrap().clone();
                let tori = torus_counts(&SimpleMinimalModel::new(f.clone(), k, g.clone()).unwrap());
                if h.elements()
                    .all(|e| e.is_identity() || f.fixed_saddles(e) == 0)
                {
                    free.entry(k).or_default().insert(tori);
                }
                if k % 2 == 0 && f.fixed_saddles(&g.pow(k as i64 / 2)) == m {
                    fixing.entry(k).or_default().insert(tori);
                }
            }
            let expected_free = match (series, m % 2) {
                (Series::X, 0) => (2, 2),
                (Series::Y, 0) => (1, 1),
                _ => (1, 2),
            };
            let mut pairs = 0;
            for (k, tori) in &free {
                let Some(partner) = fixing.get(&(2 * k)) else {
                    continue;
                };
                if tori != &BTreeSet::from([expected_free]) || partner != &BTreeSet::from([(1, 1)])
                {
                    return Err(format!("{series:?}{m}, k = {k}: {tori:?} / {partner:?}"));
                }
                pairs += 1;
            }
            if pairs == 0 {
                return Err(format!("{series:?}{m}: no pair of actions"));
            }
            checked += pairs;
        }
    }
    Ok(format!("{checked} pairs over m = 2..6"))
}

fn chains_brute_force(model: &SimpleMinimalModel) -> Vec<(usize, usize)> {
    let (points, n, k) = (model.atom().points(), model.n(), model.k());
    // Node (dim, v, i) with dim 1 or 3.
    let image = |(d, v, i): (usize, usize, usize), e: usize| {
        (
            d,
            model.generator().pow(e as i64).apply(v),
            (i + e * (n / k)) % n,
        )
    };
    let nodes: Vec<(usize, usize, usize)> = [1, 3]
        .into_iter()
        .flat_map(|d| (0..points).flat_map(move |v| (0..n).map(move |i| (d, v, i))))
        .collect();
    let orbits: BTreeSet<BTreeSet<(usize, usize, usize)>> = nodes
        .iter()
        .map(|&x| (0..k).map(|e| image(x, e)).collect())
        .collect();
    let orbits: Vec<_> = orbits.into_iter().collect();
    let adjacent = |a: (usize, usize, usize), b: (usize, usize, usize)| {
        let ((_, v, i), (_, w, j)) = if a.0 == 1 { (a, b) } else { (b, a) };
        a.0 != b.0 && v == w && (i == j || i == (j + 1) % n)
    };
    let mut comp = vec![usize::MAX; orbits.len()];
    let mut out = Vec::new();
    for s in 0..orbits.len() {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = s;
        let mut stack = vec![s];
        let mut count = (0, 0);
        while let Some(o) = stack.pop() {
            if orbits[o].iter().next().unwrap().0 == 1 {
                count.0 += 1;
            } else {
                count.1 += 1;
            }
            for t in 0..orbits.len() {
                if comp[t] == usize::MAX
                    && orbits[o]
                        .iter()
                        .any(|&x| orbits[t].iter().any(|&y| adjacent(x, y)))
                {
                    comp[t] = s;
                    stack.push(t);
                }
            }
        }
        out.push(count);
    }
    out.sort();
    out
}

fn property_suites() -> Result<String, String> {
    let atoms: Vec<FGraph> = (1..=4).flat_map(|m| enumerate_atoms(m).unwrap()).collect();
    let mut cases: BTreeMap<&str, usize> = BTreeMap::new();
    let mut bump = |k: &'static str| *cases.entry(k).or_default() += 1;

    for f in &atoms {
        let m = f.complexity();
        let sym = symmetry_group(f);
        if sym.order() > 2 * m {
            return Err(format!("|Sym| > 2m for {f:?}"));
        }
        let (neg, pos) = boundary_circles(f);
        if (neg + pos) % 2 != m % 2 || 2 * genus(f) + neg + pos != m + 2 {
            return Err(format!("parity or genus for {f:?}"));
        }
        bump("sym+parity");
        for g in sym.elements() {
            let k = g.order();
            for n in (k..=6).step_by(k) {
                let model = SimpleMinimalModel::new(f.clone(), n, g.clone()).unwrap();
                let chains = chain_invariant(&model);
                let total = 2 * m * n / k;
                if chains.total_one_dim() != total || chains.total_three_dim() != total {
                    return Err(format!("chain totals for {model:?}"));
                }
                let mass: usize = m2_decomposition(&model).iter().map(|(c, x)| c * x).sum();
                if mass != rank0_count(&model) {
                    return Err(format!("m2 mass balance for {model:?}"));
                }
                bump("chains+m2");
                if m <= 2 && n <= 4 {
                    if chain_invariant(&model).0 != chains_brute_force(&model) {
                        return Err(format!("chain oracle for {model:?}"));
                    }
                    bump("chain-oracle");
                }
            }
        }
    }

    // Symmetry-level properties run over m <= 5 for a larger exhaustive sample.
    for f in (1..=5).flat_map(|m| enumerate_atoms(m).unwrap()) {
        let sym = symmetry_group(&f);
        for g in sym.elements() {
            if g.order() % 2 == 1 && !g.is_identity() && f.fixed_saddles(g) != 0 {
                return Err(format!("odd-order {g} fixes a saddle of {f:?}"));
            }
            bump("odd-order");
        }
        for h in sym.cyclic_subgroups() {
            if let Ok(q) = quotient_atom(&f, &h) {
                if q.complexity() * h.order() != f.complexity() {
                    return Err(format!("quotient law for {f:?}"));
                }
                bump("quotient");
            }
        }
    }

    for m in 1..=4 {
        let series: BTreeSet<FGraph> = [Series::X, Series::Y]
            .into_iter()
            .map(|s| canonical_form(&standard_series(s, m).unwrap()))
            .collect();
        for f in enumerate_atoms(m).unwrap() {
            let all_fixing = symmetry_group(&f)
                .elements()
                .any(|g| g.order() == 2 && f.fixed_saddles(g) == m);
            if all_fixing != series.contains(&f) {
                return Err(format!("all-fixing involution mismatch for {f:?}"));
            }
        }
    }

    let mut runner = TestRunner::new(Config {
        cases: 256,
        failure_persistence: None,
        ..Config::default()
    });
    let atoms_for_relabel = atoms.clone();
    let strategy = (0..atoms_for_relabel.len()).prop_flat_map(move |i| {
        let f = atoms_for_relabel[i].clone();
        let pts: Vec<usize> = (0..f.points()).collect();
        (Just(f), Just(pts).prop_shuffle())
    });
    runner
        .run(&strategy, |(f, perm)| {
            let pi = Permutation::new(perm).unwrap();
            assert_eq!(canonical_form(&f.relabel(&pi)), canonical_form(&f));
            Ok(())
        })
        .map_err(|e| format!("canonical form: {e}"))?;
    cases.insert("relabel", 256);

    // Random labeled f-graphs, not just the enumerated canonical forms.
    let random_atoms = (1..=4usize)
        .prop_flat_map(|m| {
            let pts: Vec<usize> = (0..2 * m).collect();
            (Just(pts.clone()).prop_shuffle(), Just(pts).prop_shuffle())
        })
        .prop_filter_map("disconnected", |(sigma, order)| {
            let mut tau = vec![0; sigma.len()];
            for pair in order.chunks(2) {
                tau[pair[0]] = pair[1];
                tau[pair[1]] = pair[0];
            }
            FGraph::from_images(&sigma, &tau).ok()
        });
    runner
        .run(&random_atoms, |f| {
            let m = f.complexity();
            let (neg, pos) = boundary_circles(&f);
            assert!(symmetry_group(&f).order() <= 2 * m);
            assert_eq!((neg + pos) % 2, m % 2);
            assert_eq!(2 * genus(&f) + neg + pos, m + 2);
            Ok(())
        })
        .map_err(|e| format!("random atoms: {e}"))?;
    *cases.entry("sym+parity").or_default() += 256;

    if let Some((name, n)) = cases
        .iter()
        .find(|(name, &n)| n < 200 && **name != "chain-oracle")
    {
        return Err(format!("only {n} cases for {name}"));
    }
    Ok(cases
        .iter()
        .map(|(k, v)| format!("{k}:{v}"))
        .collect::<Vec<_>>()
        .join(" "))
}

fn main() -> ExitCode {
    type Check = fn() -> Result<String, String>;
    let criteria: [(&str, Check); 7] = [
        ("atom symmetry groups", atom_symmetry_groups),
        ("atom counts 1/4/10", enumeration_counts),
        ("classification 2/11/21 with signatures", classification),
        ("chain fixtures", chain_fixtures),
        ("reduction fixture", reduction_fixture),
        ("torus counts on X/Y series", torus_table),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".to_string()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{}] {name} ({detail}) {secs:.2}s", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{}] {name}: {detail} {secs:.2}s", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
