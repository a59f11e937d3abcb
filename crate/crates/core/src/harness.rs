//! Cross-checks of one base against the oracle, and timing runs over
//! generated instances.

use std::time::Instant;

use crate::base::ImplicationBase;
use crate::ccm::{ccm_layered, ccm_with, detect_layering, CcmOptions, Strategy};
use crate::error::{Error, Result};
use crate::generate::{generate, GenMode, GeneratorSpec};
use crate::oracle::{enumerate_closed_sets_with, meet_irreducibles_oracle_with, BRUTE_FORCE_MAX};
use crate::tree::{build_acyclic_tree, build_tree, h_build_tree, validate_tree};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(String),
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    /// `name = value` facts worth printing (sizes, counts).
    pub facts: Vec<(String, String)>,
}

impl VerifyReport {
    /// No check failed. Skipped checks do not count as failures.
    pub fn passed(&self) -> bool {
        !self.checks.iter().any(|c| matches!(c.outcome, Outcome::Fail(_)))
    }

    pub fn budget_exhausted(&self) -> bool {
        self.checks.iter().any(|c| matches!(c.outcome, Outcome::Skipped(_)))
    }

    fn check(&mut self, name: &'static str, outcome: Outcome) {
        self.checks.push(Check { name, outcome });
    }

    fn fact(&mut self, name: &str, value: impl ToString) {
        self.facts.push((name.to_string(), value.to_string()));
    }

    pub fn lines(&self) -> Vec<String> {
        let mut out: Vec<String> = self.facts.iter().map(|(k, v)| format!("{k} = {v}")).collect();
        for c in &self.checks {
            out.push(match &c.outcome {
                Outcome::Pass => format!("PASS {}", c.name),
                Outcome::Fail(why) => format!("FAIL {}: {why}", c.name),
                Outcome::Skipped(why) => format!("SKIP {}: {why}", c.name),
            });
        }
        out.push(if self.passed() { "OVERALL PASS".into() } else { "OVERALL FAIL".into() });
        out
    }
}

fn tree_outcome(base: &ImplicationBase, tree: &crate::tree::DecompositionTree) -> Outcome {
    match validate_tree(base, tree).violation {
        None => Outcome::Pass,
        Some(v) => Outcome::Fail(format!("{v:?}")),
    }
}

/// Runs every available check on `base`. Oracle-based checks that exceed
/// `budget` are reported as skipped.
pub fn verify(base: &ImplicationBase, budget: u64) -> VerifyReport {
    let mut report = VerifyReport::default();
    report.fact("|U|", base.ground().len());
    report.fact("|I|", base.len());

    match build_tree(base) {
        Some(t) => {
            report.fact("build_tree", "tree");
            report.check("strict tree valid", tree_outcome(base, &t));
        }
        None => {
            report.fact("build_tree", "FAIL");
            let h = h_build_tree(base);
            report.check(
                "strict failure has a factor leaf",
                if h.h_factors().is_empty() {
                    Outcome::Fail("strict build failed but the factor tree has no factor".into())
                } else {
                    Outcome::Pass
                },
            );
        }
    }
    let h = h_build_tree(base);
    report.fact("h-factors", h.h_factors().len());
    report.check("factor tree valid", tree_outcome(base, &h));
    let acyclic = build_acyclic_tree(base);
    report.check("acyclic tree valid", tree_outcome(base, &acyclic));

    match enumerate_closed_sets_with(base, budget) {
        Ok(cs) => report.fact("|C|", cs.len()),
        Err(e) => report.fact("|C|", format!("unknown ({e})")),
    }

    let options = CcmOptions {
        strategy: Strategy::Auto,
        budget,
    };
    let meets = match ccm_with(base, options) {
        Ok(m) => m,
        Err(Error::BudgetExceeded { budget }) => {
            report.check("ccm", Outcome::Skipped(format!("leaf budget {budget} exceeded")));
            return report;
        }
        Err(e) => {
            report.check("ccm", Outcome::Fail(e.to_string()));
            return report;
        }
    };
    report.check("ccm", Outcome::Pass);
    report.fact("|M|", meets.len());
    if let Some(root) = meets.stats.last() {
        report.fact("|M1|", root.m1);
        report.fact("|M2|", root.m2);
    }
    let broken: Vec<_> = meets.stats.iter().filter(|s| !s.holds()).collect();
    report.check(
        "combine inequality |M| >= |M1| + |M2|",
        if broken.is_empty() {
            Outcome::Pass
        } else {
            Outcome::Fail(format!("{broken:?}"))
        },
    );

    match meet_irreducibles_oracle_with(base, budget) {
        Ok(oracle) => report.check(
            "ccm agrees with oracle",
            if oracle.same_members(&meets.family()) {
                Outcome::Pass
            } else {
                Outcome::Fail(format!("ccm found {}, oracle {}", meets.len(), oracle.len()))
            },
        ),
        Err(Error::BudgetExceeded { budget }) => {
            report.check("ccm agrees with oracle", Outcome::Skipped(format!("budget {budget} exceeded")))
        }
        Err(e) => report.check("ccm agrees with oracle", Outcome::Fail(e.to_string())),
    }

    if let Some(layering) = detect_layering(base) {
        report.fact("layers", layering.blocks.len());
        report.check(
            "layered ccm agrees",
            match ccm_layered(base, &layering) {
                Ok(m) if m.family().same_members(&meets.family()) => Outcome::Pass,
                Ok(m) => Outcome::Fail(format!("layered found {}, tree {}", m.len(), meets.len())),
                Err(e) => Outcome::Fail(e.to_string()),
            },
        );
    }
    report
}

/// One line of a bench specs file, e.g.
/// `mode=layered:4 n=16 m=20 p=2 count=5 seed=1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BenchSpec {
    pub generator: GeneratorSpec,
    pub count: usize,
}

pub fn parse_bench_specs(text: &str) -> Result<Vec<BenchSpec>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let err = |message: String| Error::Syntax { line: i + 1, message };
        let mut g = GeneratorSpec {
            n: 0,
            m: 0,
            p: 2,
            mode: GenMode::Random,
            seed: 0,
        };
        let mut count = 1;
        for field in body.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, got `{field}`")))?;
            let num = || value.parse::<u64>().map_err(|_| err(format!("bad number `{value}`")));
            match key {
                "mode" => g.mode = value.parse().map_err(|e: Error| err(e.to_string()))?,
                "n" => g.n = num()? as usize,
                "m" => g.m = num()? as usize,
                "p" => g.p = num()? as usize,
                "seed" => g.seed = num()?,
                "count" => count = num()? as usize,
                _ => return Err(err(format!("unknown key `{key}`"))),
            }
        }
        out.push(BenchSpec { generator: g, count });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub mode: String,
    /// `build_tree`, `acyclic_tree`, or the ccm strategy used.
    pub strategy: String,
    pub millis: f64,
    pub meets: Option<usize>,
    /// Only set when the oracle ran within budget.
    pub agreed: Option<bool>,
    pub error: Option<String>,
}

fn row(spec: &GeneratorSpec, strategy: &str) -> BenchRow {
    BenchRow {
        n: spec.n,
        m: spec.m,
        mode: spec.mode.to_string(),
        strategy: strategy.to_string(),
        millis: 0.0,
        meets: None,
        agreed: None,
        error: None,
    }
}

fn millis_since(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1000.0
}

/// Times tree building and ccm on each generated instance. Seeds run from
/// the spec's seed upward, one per instance. Errors are recorded per row.
pub fn run_bench(specs: &[BenchSpec], budget: u64) -> Vec<BenchRow> {
    let mut rows = Vec::new();
    for spec in specs {
        for i in 0..spec.count {
            let g = GeneratorSpec {
                seed: spec.generator.seed + i as u64,
                ..spec.generator
            };
            let base = match generate(&g) {
                Ok(b) => b,
                Err(e) => {
                    rows.push(BenchRow {
                        error: Some(e.to_string()),
                        ..row(&g, "generate")
                    });
                    continue;
                }
            };
            let t = Instant::now();
            let strict = build_tree(&base);
            rows.push(BenchRow {
                millis: millis_since(t),
                error: strict.is_none().then(|| "FAIL".to_string()),
                ..row(&g, "build_tree")
            });
            let t = Instant::now();
            build_acyclic_tree(&base);
            rows.push(BenchRow {
                millis: millis_since(t),
                ..row(&g, "acyclic_tree")
            });

            let strategy = if detect_layering(&base).is_some() && matches!(g.mode, GenMode::Layered(_) | GenMode::Ranked(_)) {
                Strategy::Layered
            } else {
                Strategy::Auto
            };
            let t = Instant::now();
            let result = ccm_with(&base, CcmOptions { strategy, budget });
            let mut r = BenchRow {
                millis: millis_since(t),
                ..row(&g, strategy.name())
            };
            match result {
                Ok(meets) => {
                    r.meets = Some(meets.len());
                    if base.ground().len() <= BRUTE_FORCE_MAX {
                        if let Ok(oracle) = meet_irreducibles_oracle_with(&base, budget) {
                            r.agreed = Some(oracle.same_members(&meets.family()));
                        }
                    }
                }
                Err(e) => r.error = Some(e.to_string()),
            }
            rows.push(r);
        }
    }
    rows
}
