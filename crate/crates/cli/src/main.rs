//! `splitc`: decompose implicational bases and enumerate meet-irreducibles.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 verification failure,
//! 3 budget exceeded.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use split_closure::ccm::{ccm_with, CcmOptions, Strategy};
use split_closure::dual::{ldual, min_transversals, Border, Hypergraph, Polarity};
use split_closure::generate::{generate, GenMode, GeneratorSpec};
use split_closure::harness::{parse_bench_specs, run_bench, verify};
use split_closure::oracle::{enumerate_closed_sets_with, meet_irreducibles_oracle_with, DEFAULT_BUDGET};
use split_closure::split::{find_acyclic_split, find_split, is_split, premise_components, SplitKind};
use split_closure::text::{format_set_list, parse_base, parse_hypergraph, parse_set_list, serialize_base};
use split_closure::tree::{build_acyclic_tree, build_tree, h_build_tree};
use split_closure::{closure, Error, ImplicationBase, SetFamily};

#[derive(Parser)]
#[command(name = "splitc", version, about = "Split decompositions and meet-irreducibles of implicational bases")]
struct Cli {
    /// Closure evaluations allowed per brute-force enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Seed for generated instances.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closure of a set of elements.
    Closure {
        base: PathBuf,
        /// Elements of the seed set; none means the empty set.
        elements: Vec<String>,
    },
    /// Premise-connected components, one per line.
    Components { base: PathBuf },
    /// Find or classify a split.
    Split {
        base: PathBuf,
        /// Only look for an acyclic split.
        #[arg(long)]
        acyclic: bool,
        /// Classify the bipartition (U1, ground minus U1) instead of searching.
        #[arg(long, value_name = "ELEMENTS")]
        u1: Option<String>,
    },
    /// Build a decomposition tree; `--out` receives it as JSON.
    Decompose {
        base: PathBuf,
        #[arg(long, value_enum, default_value_t = TreeKind::Hfactor)]
        mode: TreeKind,
    },
    /// Enumerate meet-irreducible closed sets.
    Ccm {
        base: PathBuf,
        #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
        strategy: StrategyArg,
        /// Tag each set with how it was produced.
        #[arg(long)]
        provenance: bool,
    },
    /// Brute-force views of the closure system.
    Oracle {
        base: PathBuf,
        #[arg(long, value_enum, default_value_t = OracleWhat::Meets)]
        what: OracleWhat,
    },
    /// Minimal transversals of a hypergraph file (one edge per line).
    Dualize {
        #[arg(long)]
        hypergraph: PathBuf,
    },
    /// Positive border dual to a negative border inside the closure system of a base.
    Ldual {
        base: PathBuf,
        /// Negative border, one closed set per line.
        #[arg(long)]
        bminus: PathBuf,
        /// Meet-irreducibles of the base; computed when absent.
        #[arg(long)]
        meets: Option<PathBuf>,
    },
    /// Write a random base.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        m: usize,
        /// Largest premise size.
        #[arg(long, default_value_t = 2)]
        p: usize,
        /// random, acyclic, chain, layered:K or ranked:K.
        #[arg(long, default_value = "random")]
        mode: String,
    },
    /// Cross-check trees and ccm against the oracle.
    Verify { base: PathBuf },
    /// Time generated instances and write CSV.
    Bench { specs: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum TreeKind {
    Strict,
    Hfactor,
    Acyclic,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Auto,
    Layered,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleWhat {
    Lattice,
    Meets,
    Covers,
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_base(path: &Path) -> anyhow::Result<ImplicationBase> {
    parse_base(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn lines(items: impl IntoIterator<Item = String>) -> String {
    items.into_iter().map(|l| l + "\n").collect()
}

fn sub_bases(base: &ImplicationBase, names: [&str; 3], parts: [&ImplicationBase; 3]) -> String {
    let mut out = String::new();
    for (name, part) in names.iter().zip(parts) {
        let imps: Vec<String> = part.implications().iter().map(|i| base.format_implication(i)).collect();
        out.push_str(&format!("{name}: {}\n", if imps.is_empty() { "{}".into() } else { imps.join(", ") }));
    }
    out
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let out = cli.out.as_deref();
    match cli.command {
        Command::Closure { base, elements } => {
            let base = load_base(&base)?;
            let seed = base.parse_subset(&elements.join(" "))?;
            let c = closure(&base, &seed)?;
            emit(out, &format!("{}\n", base.format_set(&c.elements)))?;
        }
        Command::Components { base } => {
            let base = load_base(&base)?;
            let parts = premise_components(&base);
            emit(out, &lines(parts.blocks().iter().map(|b| base.format_set(b))))?;
        }
        Command::Split { base, acyclic, u1 } => {
            let base = load_base(&base)?;
            let pair = match u1 {
                Some(text) => {
                    let u1 = base.parse_subset(&text)?;
                    Some((u1.clone(), base.ground().difference(&u1)))
                }
                None if acyclic => find_acyclic_split(&base),
                None => find_split(&base),
            };
            let Some((u1, u2)) = pair else {
                emit(out, "NONE\n")?;
                return Ok(ExitCode::SUCCESS);
            };
            let report = is_split(&base, &u1, &u2)?;
            let kind = match report.kind {
                SplitKind::NotASplit => "NotASplit",
                SplitKind::Split => "Split",
                SplitKind::AcyclicSplit => "AcyclicSplit",
            };
            let mut text = format!(
                "{kind}\nU1: {}\nU2: {}\n",
                base.format_set(&report.u1),
                base.format_set(&report.u2)
            );
            if let Some(v) = &report.violation {
                text.push_str(&format!("violation: {}\n", base.format_implication(v)));
            }
            if let Some(p) = &report.parts {
                text.push_str(&sub_bases(&base, ["I[U1]", "I[U2]", "I[U1,U2]"], [&p.left, &p.right, &p.cross]));
            }
            emit(out, &text)?;
        }
        Command::Decompose { base, mode } => {
            let base = load_base(&base)?;
            let tree = match mode {
                TreeKind::Strict => build_tree(&base),
                TreeKind::Hfactor => Some(h_build_tree(&base)),
                TreeKind::Acyclic => Some(build_acyclic_tree(&base)),
            };
            match tree {
                None => println!("FAIL"),
                Some(tree) => {
                    print!("{}", tree.render());
                    if let Some(path) = out {
                        fs::write(path, format!("{}\n", tree.to_json())).with_context(|| format!("writing {}", path.display()))?;
                    }
                }
            }
        }
        Command::Ccm {
            base,
            strategy,
            provenance,
        } => {
            let base = load_base(&base)?;
            let strategy = match strategy {
                StrategyArg::Auto => Strategy::Auto,
                StrategyArg::Layered => Strategy::Layered,
                StrategyArg::Oracle => Strategy::Oracle,
            };
            let meets = ccm_with(
                &base,
                CcmOptions {
                    strategy,
                    budget: cli.budget,
                },
            )?;
            emit(out, &lines(meets.format(base.universe(), provenance)))?;
        }
        Command::Oracle { base, what } => {
            let base = load_base(&base)?;
            let u = base.universe();
            let text = match what {
                OracleWhat::Meets => format_set_list(u, &meet_irreducibles_oracle_with(&base, cli.budget)?),
                OracleWhat::Lattice => format_set_list(u, &enumerate_closed_sets_with(&base, cli.budget)?.sorted()),
                OracleWhat::Covers => {
                    let cs = enumerate_closed_sets_with(&base, cli.budget)?;
                    let mut text = String::new();
                    for c in cs.sorted().iter() {
                        let covers: Vec<String> = cs.covers_of(c)?.format(u);
                        text.push_str(&format!("{} < {}\n", u.format_set(c), covers.join(" | ")));
                    }
                    text
                }
            };
            emit(out, &text)?;
        }
        Command::Dualize { hypergraph } => {
            let (universe, edges) = parse_hypergraph(&read(&hypergraph)?)?;
            let tr = min_transversals(&Hypergraph::new(universe.full_set(), edges));
            emit(out, &format_set_list(&universe, &tr.edges))?;
        }
        Command::Ldual { base, bminus, meets } => {
            let base = load_base(&base)?;
            let u = base.universe();
            let bminus = Border {
                sets: parse_set_list(u, &read(&bminus)?)?,
                polarity: Polarity::Negative,
            };
            let m1: SetFamily = match meets {
                Some(path) => parse_set_list(u, &read(&path)?)?,
                None => ccm_with(
                    &base,
                    CcmOptions {
                        budget: cli.budget,
                        ..CcmOptions::default()
                    },
                )?
                .family(),
            };
            let bplus = ldual(&base, &m1, &bminus)?;
            emit(out, &format_set_list(u, &bplus.sets))?;
        }
        Command::Generate { n, m, p, mode } => {
            let mode: GenMode = mode.parse()?;
            let base = generate(&GeneratorSpec {
                n,
                m,
                p,
                mode,
                seed: cli.seed,
            })?;
            emit(out, &serialize_base(&base))?;
        }
        Command::Verify { base } => {
            let base = load_base(&base)?;
            let report = verify(&base, cli.budget);
            emit(out, &lines(report.lines()))?;
            if !report.passed() {
                return Ok(ExitCode::from(2));
            }
            if report.budget_exhausted() {
                return Ok(ExitCode::from(3));
            }
        }
        Command::Bench { specs } => {
            let specs = parse_bench_specs(&read(&specs)?)?;
            let rows = run_bench(&specs, cli.budget);
            let sink: Box<dyn Write> = match out {
                Some(path) => Box::new(fs::File::create(path).with_context(|| format!("creating {}", path.display()))?),
                None => Box::new(io::stdout()),
            };
            let mut w = csv::Writer::from_writer(sink);
            w.write_record(["n", "m", "mode", "strategy", "millis", "|M|", "agreed"])?;
            for r in &rows {
                let meets = r.meets.map(|x| x.to_string()).unwrap_or_default();
                let agreed = r.agreed.map(|x| x.to_string()).unwrap_or_default();
                w.write_record([
                    r.n.to_string(),
                    r.m.to_string(),
                    r.mode.clone(),
                    r.strategy.clone(),
                    format!("{:.3}", r.millis),
                    meets,
                    agreed,
                ])?;
                if let Some(e) = &r.error {
                    eprintln!("n={} mode={} {}: {e}", r.n, r.mode, r.strategy);
                }
            }
            w.flush()?;
            if rows.iter().any(|r| r.agreed == Some(false)) {
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::BudgetExceeded { .. }) => ExitCode::from(3),
                _ => ExitCode::from(1),
            }
        }
    }
}
