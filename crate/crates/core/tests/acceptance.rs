//! Acceptance suite. One PASS/FAIL line per criterion; exits non-zero when
//! any criterion fails. Run with `cargo test -p split-closure --test acceptance`.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use split_closure::ccm::{ccm_with, combine_meets, max_ext, CcmOptions, Provenance, Strategy};
use split_closure::dual::{ldual, min_transversals, negative_border, verify_dual, Hypergraph};
use split_closure::generate::{exponential_example, generate, GenMode, GeneratorSpec};
use split_closure::oracle::{direct_product, enumerate_closed_sets, meet_irreducibles_oracle};
use split_closure::split::{acyclic_split_report, find_split, has_split, is_split, SplitKind, SplitReport};
use split_closure::tree::{build_tree, h_build_tree, h_build_tree_with, validate_tree, Node};
use split_closure::{ccm, parse_base, ElementSet, ImplicationBase, SetFamily, Universe};

use rand::Rng;

type Verdict = Result<String, Vec<String>>;

struct Collector {
    failures: Vec<String>,
}

impl Collector {
    fn new() -> Collector {
        Collector { failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok && self.failures.len() < 20 {
            self.failures.push(what());
        }
    }

    fn finish(self, detail: String) -> Verdict {
        if self.failures.is_empty() {
            Ok(detail)
        } else {
            Err(self.failures)
        }
    }
}

fn base(text: &str) -> ImplicationBase {
    parse_base(text).expect("fixture parses")
}

fn names(b: &ImplicationBase, f: &SetFamily) -> Vec<String> {
    let mut v = f.format(b.universe());
    v.sort();
    v
}

fn sorted(v: &[&str]) -> Vec<String> {
    let mut v: Vec<String> = v.iter().map(|s| s.to_string()).collect();
    v.sort();
    v
}

fn imps(b: &ImplicationBase) -> Vec<String> {
    let mut v: Vec<String> = b.implications().iter().map(|i| b.format_implication(i)).collect();
    v.sort();
    v
}

/// Random instances of criterion 2 plus the layered and ranked ones.
struct Corpus {
    random: Vec<ImplicationBase>,
    layered: Vec<ImplicationBase>,
}

impl Corpus {
    fn build() -> Corpus {
        let random = (0..1000).map(random_instance).collect();
        let mut layered = Vec::new();
        let mut seed = 0u64;
        while layered.len() < 200 {
            seed += 1;
            let mut r = rng(10_000 + seed);
            let k = r.gen_range(2..=4);
            let n = r.gen_range(k.max(3)..=10);
            let m = r.gen_range(0..=2 * n);
            let p = r.gen_range(1..=3);
            let mode = if seed.is_multiple_of(2) { GenMode::Layered(k) } else { GenMode::Ranked(k) };
            if let Ok(b) = generate(&GeneratorSpec { n, m, p, mode, seed }) {
                layered.push(b);
            }
        }
        Corpus { random, layered }
    }

    fn all(&self) -> impl Iterator<Item = &ImplicationBase> {
        self.random.iter().chain(&self.layered)
    }

    fn acyclic(&self) -> Vec<(&ImplicationBase, SplitReport)> {
        self.all().filter_map(|b| acyclic_split_report(b).map(|r| (b, r))).collect()
    }
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let mut c = Collector::new();

    let b = base(FOUR_ELEMENTS);
    let got = names(&b, &ccm(&b).unwrap().family());
    let stated = sorted(&["2", "1 4", "1 3", "1 3 4"]);
    c.check(got == stated, || format!("meet-irreducibles of {{12->3, 23->4, 4->1}}: stated {stated:?}, computed {got:?}"));

    let b = base(SEVEN_ELEMENTS);
    let r = is_split(&b, &b.parse_subset("1 2 3").unwrap(), &b.parse_subset("4 5 6 7").unwrap()).unwrap();
    c.check(r.kind == SplitKind::Split, || format!("seven-element split classified {:?}", r.kind));
    match &r.parts {
        Some(p) => {
            c.check(imps(&p.left) == sorted(&["1 2 -> 3", "3 -> 1"]), || format!("I[U1] = {:?}", imps(&p.left)));
            c.check(imps(&p.right) == sorted(&["4 5 -> 6", "5 -> 7"]), || format!("I[U2] = {:?}", imps(&p.right)));
            c.check(imps(&p.cross) == sorted(&["5 6 -> 2", "2 3 -> 7"]), || format!("I[U1,U2] = {:?}", imps(&p.cross)));
        }
        None => c.check(false, || "seven-element split has no sub-bases".into()),
    }

    let b = base(NO_SPLIT);
    c.check(!has_split(&b) && find_split(&b).is_none(), || "{12->3, 13->2} has a split".into());

    let b = base("1 2 -> 3\n1 3 -> 2\n2 3 -> 4\n");
    c.check(build_tree(&b).is_none(), || "{12->3, 13->2, 23->4} did not FAIL".into());

    let b = base(WITH_FACTOR);
    let factors: Vec<Vec<String>> = h_build_tree(&b).h_factors().iter().map(imps).collect();
    c.check(
        factors == vec![sorted(&["1 2 -> 3", "2 3 -> 1", "1 3 -> 2"])],
        || format!("factors of the six-element base {factors:?}"),
    );

    let b = base(RUNNING);
    let split = is_split(&b, &b.parse_subset("1 2 3").unwrap(), &b.parse_subset("4 5 6").unwrap()).unwrap();
    let parts = split.parts.as_ref().unwrap();
    let m1 = ccm(&parts.left).unwrap().family();
    let m2 = ccm(&parts.right).unwrap().family();
    c.check(names(&b, &m1) == sorted(&["1", "1 3", "2", "2 3"]), || format!("M1 = {:?}", names(&b, &m1)));
    c.check(names(&b, &m2) == sorted(&["{}", "4 6", "5 6"]), || format!("M2 = {:?}", names(&b, &m2)));
    let ext = max_ext(&split, &m1, &b.parse_subset("4 6").unwrap()).unwrap();
    c.check(names(&b, &ext) == sorted(&["3 4 6", "2 4 6"]), || format!("max_ext(46) = {:?}", names(&b, &ext)));
    let m = ccm(&b).unwrap();
    let tagged = |s: &str, p: Provenance| m.entries().iter().any(|(x, q)| *x == b.parse_subset(s).unwrap() && *q == p);
    c.check(tagged("2 3 4 5 6", Provenance::Type1), || "23456 missing or not Type1".into());
    c.check(tagged("3 5 6", Provenance::Type2), || "356 missing or not Type2".into());
    let combined = combine_meets(&split, &m1, &m2).unwrap();
    c.check(combined.family() == m.family(), || "combine at the root differs from ccm".into());

    let elapsed = start.elapsed();
    c.check(elapsed.as_secs_f64() < 1.0, || format!("took {elapsed:?}"));
    c.finish(format!("{:.0} ms", elapsed.as_secs_f64() * 1e3))
}

fn criterion_2(corpus: &Corpus) -> Verdict {
    let start = Instant::now();
    let mut c = Collector::new();
    for (i, b) in corpus.random.iter().enumerate() {
        let want = Naive::of(b).meets();
        let got = masks(&ccm(b).unwrap().family());
        c.check(got == want, || format!("random instance {i}: ccm {got:?} vs oracle {want:?}"));
        let lib = masks(&meet_irreducibles_oracle(b).unwrap());
        c.check(lib == want, || format!("random instance {i}: library oracle disagrees with bitmask oracle"));
    }
    for (i, b) in corpus.layered.iter().enumerate() {
        let want = Naive::of(b).meets();
        for strategy in [Strategy::Auto, Strategy::Layered] {
            let got = ccm_with(b, CcmOptions { strategy, ..CcmOptions::default() })
                .map(|m| masks(&m.family()))
                .map_err(|e| e.to_string());
            c.check(got.as_ref() == Ok(&want), || format!("layered instance {i} ({}): {got:?} vs {want:?}", strategy.name()));
        }
    }
    let elapsed = start.elapsed();
    c.check(elapsed.as_secs() < 300, || format!("took {elapsed:?}"));
    c.finish(format!(
        "{} random + {} layered/ranked instances, {:.1} s",
        corpus.random.len(),
        corpus.layered.len(),
        elapsed.as_secs_f64()
    ))
}

/// Extension traces `Ext(c2):u1` keyed by `c2`, each as a bitset over `u1` subsets (ground of at most 10).
fn ext_traces(closed: &[u32], u2: u32) -> std::collections::HashMap<u32, [u64; 16]> {
    let mut out = std::collections::HashMap::new();
    for &c in closed {
        let t = c & !u2;
        let e: &mut [u64; 16] = out.entry(c & u2).or_insert([0; 16]);
        e[(t >> 6) as usize] |= 1 << (t & 63);
    }
    out
}

fn bits_subset(a: &[u64; 16], b: &[u64; 16]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Every tie-break sequence of the component chooser, depth first, up to `cap` runs.
fn all_choice_runs(b: &ImplicationBase, cap: usize, mut each: impl FnMut(&split_closure::DecompositionTree)) -> (usize, bool) {
    let mut prefix: Vec<(usize, usize)> = Vec::new();
    let mut runs = 0;
    loop {
        let mut step = 0;
        let mut trail = prefix.clone();
        let tree = h_build_tree_with(b, |parts| {
            let choice = if step < trail.len() {
                trail[step].0
            } else {
                trail.push((0, parts.len()));
                0
            };
            step += 1;
            choice
        });
        trail.truncate(step);
        each(&tree);
        runs += 1;
        while let Some((i, n)) = trail.pop() {
            if i + 1 < n {
                trail.push((i + 1, n));
                break;
            }
        }
        if trail.is_empty() {
            return (runs, true);
        }
        if runs >= cap {
            return (runs, false);
        }
        prefix = trail;
    }
}

fn leaf_multiset(t: &split_closure::DecompositionTree) -> Vec<String> {
    let u = t.universe();
    let mut v: Vec<String> = t
        .preorder()
        .into_iter()
        .filter_map(|id| match t.node(id) {
            Node::Element(e) => Some(format!("element {}", u.name(*e))),
            Node::Factor(f) => Some(format!("factor {}", f.normalize())),
            Node::Interior { .. } => None,
        })
        .collect();
    v.sort();
    v
}

fn criterion_3(corpus: &Corpus) -> Verdict {
    let mut c = Collector::new();

    // Splits exist exactly when the base is not premise-connected; every
    // bipartition is classified against the definition.
    let mut split_bases = 0;
    for seed in 0..400u64 {
        let mut r = rng(20_000 + seed);
        let n = r.gen_range(1..=7);
        let m = r.gen_range(0..=10);
        let b = random_base(&mut r, n, m, 3);
        let nb = Naive::of(&b);
        let splits = naive_splits(&nb);
        split_bases += usize::from(!splits.is_empty());
        let components = split_closure::premise_components(&b).len();
        c.check(has_split(&b) == !splits.is_empty(), || format!("seed {seed}: has_split disagrees with exhaustive search"));
        c.check((components >= 2) == !splits.is_empty(), || format!("seed {seed}: premise components vs exhaustive search"));
        if let Some((u1, u2)) = find_split(&b) {
            c.check(splits.contains(&(mask(&u1), mask(&u2))) || splits.contains(&(mask(&u2), mask(&u1))), || {
                format!("seed {seed}: find_split returned a non-split")
            });
        }
        let w = b.universe().len();
        for l in subsets(nb.ground).filter(|&l| l != 0 && l != nb.ground) {
            let rep = is_split(&b, &unmask(w, l), &unmask(w, nb.ground & !l)).unwrap();
            let naive = splits.contains(&(l, nb.ground & !l));
            c.check((rep.kind != SplitKind::NotASplit) == naive, || format!("seed {seed}: bipartition {l:b} misclassified"));
        }
    }

    // build_tree succeeds exactly on H-decomposable bases.
    let (mut yes, mut no) = (0, 0);
    for seed in 0..600u64 {
        let mut r = rng(30_000 + seed);
        let n = r.gen_range(1..=6);
        let m = r.gen_range(0..=8);
        let b = random_base(&mut r, n, m, 3);
        let expect = decomposable(&Naive::of(&b));
        let got = build_tree(&b);
        if expect { yes += 1 } else { no += 1 }
        c.check(got.is_some() == expect, || format!("seed {seed}: build_tree {} vs oracle {expect}", got.is_some()));
        if let Some(t) = &got {
            c.check(validate_tree(&b, t).is_valid(), || format!("seed {seed}: invalid tree"));
        }
    }

    // Same leaves whatever component is peeled first.
    let mut bases = vec![base(TWO_BLOCKS)];
    bases.extend((0..100u64).map(|s| {
        let mut r = rng(40_000 + s);
        let n = r.gen_range(2..=7);
        let m = r.gen_range(0..=9);
        random_base(&mut r, n, m, 3)
    }));
    let (mut total_runs, mut truncated) = (0, 0);
    for (i, b) in bases.iter().enumerate() {
        let reference = leaf_multiset(&h_build_tree(b));
        let (runs, complete) = all_choice_runs(b, 50_000, |t| {
            c.check(leaf_multiset(t) == reference, || format!("base {i}: leaves depend on tie-breaks"));
            c.check(validate_tree(b, t).is_valid(), || format!("base {i}: invalid factor tree"));
        });
        total_runs += runs;
        truncated += usize::from(!complete);
    }
    c.check(truncated == 0, || format!("{truncated} bases hit the tie-break enumeration cap"));

    // Extension monotonicity on the found acyclic split, and the restricted
    // meet-irreducible test against the full test on every closed U2.
    let acyclic = corpus.acyclic();
    let mut bipartitions = 0;
    for (i, (b, rep)) in acyclic.iter().enumerate() {
        let nb = Naive::of(b);
        let closed = nb.closed_sets();
        let u2 = mask(&rep.u2);
        let ext = ext_traces(&closed, u2);
        let c2s = nb.restrict(u2).closed_sets();
        for &a in &c2s {
            for &d in c2s.iter().filter(|&&d| is_subset(a, d)) {
                let (ea, ed) = (ext.get(&a), ext.get(&d));
                c.check(ea.is_some() && ed.is_some() && bits_subset(ea.unwrap(), ed.unwrap()), || {
                    format!("acyclic instance {i}: Ext({a:b}) not inside Ext({d:b})")
                });
            }
        }
        for &v2 in closed.iter().filter(|&&v| v != 0 && v != nb.ground) {
            bipartitions += 1;
            let ext = ext_traces(&closed, v2);
            let down: Vec<u32> = closed.iter().copied().filter(|&x| is_subset(x, v2)).collect();
            let m2 = meets_of(&down);
            let empty = [0u64; 16];
            let e = |x: u32| ext.get(&x).unwrap_or(&empty);
            let full = down
                .iter()
                .all(|&a| down.iter().filter(|&&d| is_subset(a, d)).all(|&d| bits_subset(e(a), e(d))));
            let restricted = down.iter().all(|&a| {
                m2.iter()
                    .copied()
                    .filter(|&m| is_subset(a, m))
                    .chain([v2])
                    .all(|d| bits_subset(e(a), e(d)))
            });
            c.check(full == restricted, || format!("acyclic instance {i}, U2 = {v2:b}: full {full}, restricted {restricted}"));
            if v2 == u2 {
                c.check(full, || format!("acyclic instance {i}: found split fails the extension test"));
            }
        }
    }

    c.finish(format!(
        "400 split checks ({split_bases} with a split), 600 tree checks ({yes} decomposable, {no} not), \
         {total_runs} tie-break runs on {} bases, {} acyclic instances, {bipartitions} closed bipartitions",
        bases.len(),
        acyclic.len()
    ))
}

fn criterion_4(corpus: &Corpus) -> Verdict {
    let start = Instant::now();
    let mut c = Collector::new();
    for seed in 0..500u64 {
        let mut r = rng(50_000 + seed);
        let n = r.gen_range(1..=10);
        let k = r.gen_range(0..=8);
        let u = Universe::numbered(n);
        let edges: Vec<u32> = (0..k).map(|_| r.gen_range(1..1u32 << n)).collect();
        let h = Hypergraph::new(u.full_set(), edges.iter().map(|&e| unmask(n, e)));
        let tr = min_transversals(&h);
        let brute = minimal(&subsets((1 << n) - 1).filter(|&t| edges.iter().all(|&e| e & t != 0)).collect::<Vec<_>>());
        c.check(masks(&tr.edges) == brute, || format!("hypergraph {seed}: Tr differs from brute force"));
        let back = min_transversals(&tr);
        c.check(masks(&back.edges) == minimal(&edges), || format!("hypergraph {seed}: Tr(Tr(H)) != min(H)"));
    }

    let acyclic = corpus.acyclic();
    let mut pairs = 0;
    for (i, (b, rep)) in acyclic.iter().enumerate() {
        let parts = rep.parts.as_ref().unwrap();
        let nb = Naive::of(b);
        let (u1, u2) = (mask(&rep.u1), mask(&rep.u2));
        let c1 = nb.restrict(u1).closed_sets();
        let m1 = meet_irreducibles_oracle(&parts.left).unwrap();
        let w = b.universe().len();
        for c2 in nb.restrict(u2).closed_sets() {
            let outside: Vec<u32> = c1.iter().copied().filter(|&x| !nb.is_closed(x | c2)).collect();
            let inside: Vec<u32> = c1.iter().copied().filter(|&x| nb.is_closed(x | c2)).collect();
            let bm = negative_border(&parts.left, &parts.cross, &unmask(w, c2));
            c.check(masks(&bm.sets) == minimal(&outside), || format!("acyclic instance {i}, C2 = {c2:b}: negative border"));
            let bp = ldual(&parts.left, &m1, &bm).unwrap();
            c.check(masks(&bp.sets) == maximal(&inside), || format!("acyclic instance {i}, C2 = {c2:b}: positive border"));
            c.check(verify_dual(&parts.left, &bm, &bp).unwrap(), || format!("acyclic instance {i}, C2 = {c2:b}: verify_dual"));
            pairs += 1;
        }
    }
    let elapsed = start.elapsed();
    c.check(elapsed.as_secs() < 120, || format!("took {elapsed:?}"));
    c.finish(format!(
        "500 hypergraphs, {pairs} border pairs over {} acyclic instances, {:.1} s",
        acyclic.len(),
        elapsed.as_secs_f64()
    ))
}

fn criterion_5(corpus: &Corpus) -> Verdict {
    let mut c = Collector::new();
    for k in 2..=6 {
        let b = exponential_example(k);
        let naive = Naive::of(&b).closed_sets().len();
        let lib = enumerate_closed_sets(&b).unwrap().len();
        c.check(naive == 3 * k + 4 && lib == 3 * k + 4, || format!("k = {k}: |C| = {naive} (library {lib}), want {}", 3 * k + 4));
    }

    let mut combines = 0;
    for (i, b) in corpus.all().enumerate() {
        for stat in ccm(b).unwrap().stats {
            combines += 1;
            c.check(stat.holds(), || format!("instance {i}: combine {stat:?}"));
        }
    }
    for (i, (b, rep)) in corpus.acyclic().iter().enumerate() {
        let nb = Naive::of(b);
        let (m, m1, m2) = (nb.meets().len(), nb.restrict(mask(&rep.u1)).meets().len(), nb.restrict(mask(&rep.u2)).meets().len());
        c.check(m >= m1 + m2, || format!("acyclic instance {i}: |M| = {m} < {m1} + {m2}"));
    }

    for seed in 0..100u64 {
        let mut r = rng(60_000 + seed);
        let (n1, n2) = (r.gen_range(1..=4), r.gen_range(1..=4));
        let n = n1 + n2;
        let whole = random_base(&mut r, n, 0, 1);
        let u = whole.universe().clone();
        // Left part on the first n1 tokens, right part on the rest.
        let part = |r: &mut rand_chacha::ChaCha8Rng, lo: usize, hi: usize| {
            let m = r.gen_range(0..=5);
            let local = random_base(r, hi - lo, m, 2);
            let rename = |e: split_closure::Element| u.element(&(e.index() + lo + 1).to_string()).unwrap();
            let imps = local
                .implications()
                .iter()
                .map(|i| split_closure::Implication::unit(i.premise().iter().map(|&e| rename(e)), rename(i.head())))
                .collect();
            let ground = ElementSet::from_elements(n, (lo..hi).map(|i| u.element(&(i + 1).to_string()).unwrap()));
            ImplicationBase::new(u.clone(), ground, imps).unwrap()
        };
        let b1 = part(&mut r, 0, n1);
        let b2 = part(&mut r, n1, n);
        let joined = b1.disjoint_union(&b2).unwrap();
        let (g1, g2) = (mask(b1.ground()), mask(b2.ground()));
        let mut want: Vec<u32> = Naive::of(&b1).meets().into_iter().map(|x| x | g2).collect();
        want.extend(Naive::of(&b2).meets().into_iter().map(|x| x | g1));
        want.sort_unstable();
        c.check(Naive::of(&joined).meets() == want, || format!("pair {seed}: bitmask meets differ from the formula"));
        c.check(masks(&meet_irreducibles_oracle(&joined).unwrap()) == want, || format!("pair {seed}: library meets"));
        c.check(masks(&ccm(&joined).unwrap().family()) == want, || format!("pair {seed}: ccm"));
        let product = direct_product(&enumerate_closed_sets(&b1).unwrap(), &enumerate_closed_sets(&b2).unwrap()).unwrap();
        c.check(masks(product.closed_sets()) == Naive::of(&joined).closed_sets(), || format!("pair {seed}: direct product"));
    }
    c.finish(format!("k = 2..6, {combines} combine nodes, 100 direct products"))
}

fn criterion_6() -> Verdict {
    let mut c = Collector::new();
    let chain = generate(&GeneratorSpec { n: 2000, m: 1999, p: 1, mode: GenMode::Chain, seed: 0 }).unwrap();
    let start = Instant::now();
    let tree = build_tree(&chain);
    let chain_time = start.elapsed();
    c.check(tree.as_ref().is_some_and(|t| t.leaf_count() == 2000), || "chain tree missing or wrong size".into());
    c.check(chain_time.as_secs_f64() < 5.0, || format!("chain build_tree took {chain_time:?}"));

    let mut worst = 0.0f64;
    for seed in 0..5 {
        let b = generate(&GeneratorSpec { n: 16, m: 24, p: 2, mode: GenMode::Layered(4), seed }).unwrap();
        let start = Instant::now();
        let m = ccm_with(&b, CcmOptions { strategy: Strategy::Layered, ..CcmOptions::default() });
        let t = start.elapsed().as_secs_f64();
        worst = worst.max(t);
        c.check(t < 10.0, || format!("layered seed {seed}: {t:.2} s"));
        match m {
            Ok(m) => c.check(masks(&m.family()) == Naive::of(&b).meets(), || format!("layered seed {seed}: wrong output")),
            Err(e) => c.check(false, || format!("layered seed {seed}: {e}")),
        }
    }
    c.finish(format!(
        "chain build_tree {:.0} ms, slowest layered 4x4 ccm {:.1} ms",
        chain_time.as_secs_f64() * 1e3,
        worst * 1e3
    ))
}

fn main() -> ExitCode {
    let corpus = Corpus::build();
    let results = [
        ("1 worked examples", criterion_1()),
        ("2 oracle equivalence", criterion_2(&corpus)),
        ("3 characterizations", criterion_3(&corpus)),
        ("4 dualization", criterion_4(&corpus)),
        ("5 counting identities", criterion_5(&corpus)),
        ("6 performance envelope", criterion_6()),
    ];
    let mut failed = false;
    for (name, verdict) in &results {
        match verdict {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(reasons) => {
                failed = true;
                println!("FAIL criterion {name}: {}", reasons.join("; "));
            }
        }
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
