use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use atlas_core::atom::{
    boundary_circles, enumerate_atoms, extended_symmetries, genus, symmetry_group, FGraph,
    FGraphJson, NameTable,
};
use atlas_core::classify::{classify_with, render, ClassifyOptions, Format};
use atlas_core::error::AtlasError;
use atlas_core::model::{
    chain_invariant, chains_dot, fingerprint_with, m2_decomposition, reduce, ModelJson,
    SimpleMinimalModel,
};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "atlas",
    version,
    about = "Classify saddle-focus singularities by simple minimal models"
)]
struct Cli {
    /// Atom name table (JSON); defaults to $ATLAS_NAME_TABLE, then the shipped table.
    #[arg(long, global = true, value_name = "PATH")]
    name_table: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List all saddle atoms of a complexity.
    Atoms {
        #[arg(long)]
        complexity: usize,
        #[arg(long, default_value = "table")]
        format: String,
    },
    /// Symmetry group of an atom.
    Sym {
        #[command(flatten)]
        source: AtomSource,
        #[arg(long, default_value = "table")]
        format: String,
    },
    /// Invariants of a simple minimal model (other products are reduced first).
    Invariants {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value = "table")]
        format: String,
    },
    /// Reduce an almost direct product to its simple minimal model.
    Reduce {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value = "table")]
        format: String,
    },
    /// Chains of adjoined orbits on the singular leaf.
    Chains {
        #[arg(long)]
        model: PathBuf,
        /// Emit the quotient incidence graph in DOT.
        #[arg(long)]
        dot: bool,
    },
    /// Catalog of all simple minimal models of a complexity.
    Classify {
        #[arg(long)]
        complexity: usize,
        #[arg(long, default_value = "table")]
        format: String,
        /// Exit with status 2 if any pair of models stays unresolved.
        #[arg(long)]
        strict: bool,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct AtomSource {
    /// Atom name such as C2, or X4 / Y4 for the series.
    #[arg(long)]
    atom: Option<String>,
    /// fgraph-v1 JSON file (a single atom or an array of atoms).
    #[arg(long)]
    file: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok((text, code)) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(text.as_bytes());
            ExitCode::from(code)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<(String, u8)> {
    let names = NameTable::load(cli.name_table.as_deref())?;
    let out = match cli.command {
        Command::Atoms { complexity, format } => atoms(complexity, format.parse()?, &names)?,
        Command::Sym { source, format } => sym(&source, format.parse()?, &names)?,
        Command::Invariants { model, format } => invariants(&model, format.parse()?, &names)?,
        Command::Reduce { model, format } => reduce_cmd(&model, format.parse()?, &names)?,
        Command::Chains { model, dot } => chains(&model, dot, &names)?,
        Command::Classify {
            complexity,
            format,
            strict,
        } => {
            let format: Format = format.parse()?;
            let options = ClassifyOptions {
                names: names.clone(),
                ..ClassifyOptions::default()
            };
            let catalog = classify_with(complexity, &options)?;
            let code = if strict && !catalog.warnings.is_empty() {
                2
            } else {
                0
            };
            return Ok((render(&catalog, format, &names), code));
        }
    };
    Ok((out, 0))
}

fn to_json(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("JSON values serialize") + "\n"
}

/// Left-aligned ASCII table with a dashed rule under the header.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let widths: Vec<usize> = (0..header.len())
        .map(|c| {
            rows.iter()
                .map(|r| r[c].len())
                .chain([header[c].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(cell, &w)| format!("{cell:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let head: Vec<String> = header.iter().map(|s| s.to_string()).collect();
    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    let mut out = line(&head) + &line(&rule);
    for r in rows {
        out += &line(r);
    }
    out
}

fn atom_json(f: &FGraph, names: &NameTable) -> Value {
    let group = symmetry_group(f);
    let mut value = serde_json::to_value(f.to_json(Some(names.identify(f).to_string())))
        .expect("atom serializes");
    value["symmetry_group"] = json!(group.iso_type().to_string());
    value["symmetry_order"] = json!(group.order());
    value
}

fn atoms(m: usize, format: Format, names: &NameTable) -> Result<String> {
    let list = enumerate_atoms(m)?;
    let mut named: Vec<(String, FGraph)> = list
        .into_iter()
        .map(|f| (names.identify(&f).to_string(), f))
        .collect();
    named.sort();
    Ok(match format {
        Format::Json => to_json(&Value::Array(
            named.iter().map(|(_, f)| atom_json(f, names)).collect(),
        )),
        Format::Table => {
            let rows: Vec<Vec<String>> = named
                .iter()
                .map(|(name, f)| {
                    let group = symmetry_group(f);
                    let (neg, pos) = boundary_circles(f);
                    vec![
                        name.clone(),
                        group.iso_type().to_string(),
                        group.order().to_string(),
                        format!("{neg}+{pos}"),
                        genus(f).to_string(),
                        f.sigma().to_string(),
                        f.tau().to_string(),
                    ]
                })
                .collect();
            format!("complexity {m}: {} atoms\n", named.len())
                + &table(
                    &["atom", "Sym", "|Sym|", "circles", "genus", "sigma", "tau"],
                    &rows,
                )
        }
    })
}

fn read_atoms(path: &Path) -> Result<Vec<FGraph>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let value: Value = serde_json::from_str(&text).map_err(AtlasError::from)?;
    let items = match value {
        Value::Array(items) => items,
        other => vec![other],
    };
    items
        .into_iter()
        .map(|v| {
            let parsed: FGraphJson = serde_json::from_value(v).map_err(AtlasError::from)?;
            Ok(parsed.to_fgraph()?)
        })
        .collect()
}

fn sym(source: &AtomSource, format: Format, names: &NameTable) -> Result<String> {
    let atoms = match (&source.atom, &source.file) {
        (Some(name), _) => vec![names.resolve(name)?],
        (None, Some(path)) => read_atoms(path)?,
        (None, None) => bail!("one of --atom or --file is required"),
    };
    let mut reports = Vec::new();
    let mut text = String::new();
    for f in &atoms {
        let group = symmetry_group(f);
        let ext = extended_symmetries(f);
        let (neg, pos) = boundary_circles(f);
        let name = names.identify(f);
        match format {
            Format::Json => {
                let mut v = atom_json(f, names);
                v["elements"] = json!(group.elements().collect::<Vec<_>>());
                v["extended_symmetries"] = json!(ext
                    .iter()
                    .map(|(p, mv)| json!({"perm": p, "move": mv}))
                    .collect::<Vec<_>>());
                reports.push(v);
            }
            Format::Table => {
                text += &format!(
                    "atom {name} (complexity {}, circles {neg}+{pos}, genus {})\n",
                    f.complexity(),
                    genus(f)
                );
                text += &format!("Sym = {} (order {})\n", group.iso_type(), group.order());
                let rows: Vec<Vec<String>> = group
                    .elements()
                    .map(|g| {
                        vec![
                            g.to_string(),
                            g.order().to_string(),
                            f.fixed_saddles(g).to_string(),
                        ]
                    })
                    .collect();
                text += &table(&["element", "order", "fixed saddles"], &rows);
                text += &format!("extended symmetries: {}\n", ext.len());
            }
        }
    }
    Ok(match format {
        Format::Json if reports.len() == 1 => to_json(&reports[0]),
        Format::Json => to_json(&Value::Array(reports)),
        Format::Table => text,
    })
}

/// Loads a model; products that are not yet simple minimal models are reduced.
fn load_simple(path: &Path, names: &NameTable) -> Result<(SimpleMinimalModel, bool)> {
    let doc = ModelJson::from_path(path)?;
    match doc.to_simple(names) {
        Ok(m) => Ok((m, false)),
        Err(AtlasError::InvalidModel(_)) => Ok((reduce(&doc.to_adp(names)?)?.0, true)),
        Err(e) => Err(e.into()),
    }
}

fn pairs(items: &[(usize, usize)]) -> String {
    items
        .iter()
        .map(|(a, b)| format!("{a}:{b}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn invariants(path: &Path, format: Format, names: &NameTable) -> Result<String> {
    let (model, reduced) = load_simple(path, names)?;
    let fp = fingerprint_with(&model, names);
    let name = model.display_name(names);
    Ok(match format {
        Format::Json => to_json(&json!({
            "name": name,
            "reduced": reduced,
            "fingerprint": fp,
            "model": model.to_json(names),
        })),
        Format::Table => {
            let mut out = String::new();
            if reduced {
                out += "input reduced to its simple minimal model\n";
            }
            out += &format!("model: {name}\n");
            out += &format!("rank-0 points: {}\n", fp.rank0_count);
            out += &format!(
                "saddle stratum: {} copies of {}\n",
                fp.m1.copies, fp.m1.atom
            );
            out += &format!(
                "focus stratum (F:copies): {}\n",
                pairs(&m2_decomposition(&model))
            );
            out += &format!("s (saddles fixed by the half-order element): {}\n", fp.s);
            out += &format!("tori: {{{}, {}}}\n", fp.torus_pair.0, fp.torus_pair.1);
            out += &format!("chains (1d:3d): {}\n", pairs(&fp.chains.0));
            out
        }
    })
}

fn reduce_cmd(path: &Path, format: Format, names: &NameTable) -> Result<String> {
    let adp = ModelJson::from_path(path)?.to_adp(names)?;
    let (model, report) = reduce(&adp)?;
    let name = model.display_name(names);
    Ok(match format {
        Format::Json => to_json(&json!({
            "report": report,
            "name": name,
            "model": model.to_json(names),
        })),
        Format::Table => format!(
            "|G| = {}\n|N| = {}\natom complexity m' = {}\nfocus complexity n' = {}\nk = {}\nsimple minimal model: {name}\n",
            report.group_order, report.normal_order, report.atom_complexity, report.focus_complexity, report.k
        ),
    })
}

fn chains(path: &Path, dot: bool, names: &NameTable) -> Result<String> {
    let (model, _) = load_simple(path, names)?;
    if dot {
        return Ok(chains_dot(&model));
    }
    let inv = chain_invariant(&model);
    let rows: Vec<Vec<String>> = inv
        .chains()
        .iter()
        .enumerate()
        .map(|(i, (ones, threes))| vec![(i + 1).to_string(), ones.to_string(), threes.to_string()])
        .collect();
    Ok(format!(
        "model: {}\n{} chains\n",
        model.display_name(names),
        inv.chains().len()
    ) + &table(&["chain", "1-dim orbits", "3-dim orbits"], &rows))
}
