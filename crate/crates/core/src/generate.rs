//! Seeded random bases and a few fixed families.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::base::{Implication, ImplicationBase};
use crate::error::{Error, Result};
use crate::set::{Element, Universe};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenMode {
    /// Premises of size `1..=p`, head anywhere outside the premise.
    Random,
    /// Like `Random`, but every implication points forward along a hidden
    /// random order, so the base has no cycle.
    Acyclic,
    /// `k` consecutive blocks; premise inside one block, head in a later one.
    Layered(usize),
    /// As `Layered`, head always in the next block.
    Ranked(usize),
    /// `u1 -> u2, u2 -> u3, ...`, at most `m` links.
    Chain,
}

impl fmt::Display for GenMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenMode::Random => write!(f, "random"),
            GenMode::Acyclic => write!(f, "acyclic"),
            GenMode::Layered(k) => write!(f, "layered{k}"),
            GenMode::Ranked(k) => write!(f, "ranked{k}"),
            GenMode::Chain => write!(f, "chain"),
        }
    }
}

impl FromStr for GenMode {
    type Err = Error;

    /// `random`, `acyclic`, `chain`, `layered:K` or `ranked:K` (`layeredK` also accepted).
    fn from_str(s: &str) -> Result<GenMode> {
        let bad = || Error::Infeasible(format!("unknown mode `{s}`"));
        let block_count = |rest: &str| rest.trim_start_matches(':').parse::<usize>().map_err(|_| bad());
        match s {
            "random" => Ok(GenMode::Random),
            "acyclic" => Ok(GenMode::Acyclic),
            "chain" => Ok(GenMode::Chain),
            _ if s.starts_with("layered") => Ok(GenMode::Layered(block_count(&s[7..])?)),
            _ if s.starts_with("ranked") => Ok(GenMode::Ranked(block_count(&s[6..])?)),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub n: usize,
    pub m: usize,
    /// Largest premise size.
    pub p: usize,
    pub mode: GenMode,
    pub seed: u64,
}

/// Element tokens are `1..=n`. Implications are distinct unit implications,
/// in generation order. Same spec, same base.
pub fn generate(spec: &GeneratorSpec) -> Result<ImplicationBase> {
    let GeneratorSpec { n, m, p, mode, seed } = *spec;
    if n == 0 {
        return Err(Error::Infeasible("n must be at least 1".into()));
    }
    let universe = Universe::new((1..=n).map(|i| i.to_string()));
    let el = |i: usize| universe.element(&(i + 1).to_string()).expect("numbered token");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    if mode == GenMode::Chain {
        let imps = (0..m.min(n - 1)).map(|i| Implication::unit([el(i)], el(i + 1))).collect();
        return ImplicationBase::new(universe.clone(), universe.full_set(), imps);
    }
    if m > 0 && p == 0 {
        return Err(Error::Infeasible("premise size p must be at least 1".into()));
    }
    if m > 0 && n < 2 {
        return Err(Error::Infeasible("implications need at least two elements".into()));
    }
    let blocks: Vec<Vec<usize>> = match mode {
        GenMode::Layered(k) | GenMode::Ranked(k) => {
            if k < 2 || k > n {
                return Err(Error::Infeasible(format!("need 2 <= k <= n, got k = {k}, n = {n}")));
            }
            // Sizes differ by at most one, larger blocks first.
            let mut out = Vec::with_capacity(k);
            let mut next = 0;
            for b in 0..k {
                let size = n / k + usize::from(b < n % k);
                out.push((next..next + size).collect());
                next += size;
            }
            out
        }
        _ => Vec::new(),
    };
    let mut order: Vec<usize> = (0..n).collect();
    if mode == GenMode::Acyclic {
        order.shuffle(&mut rng);
    }

    let mut seen: BTreeSet<(Vec<usize>, usize)> = BTreeSet::new();
    let mut imps = Vec::with_capacity(m);
    let max_tries = 1000 + 100 * m;
    let mut tries = 0;
    while imps.len() < m {
        tries += 1;
        if tries > max_tries {
            return Err(Error::Infeasible(format!(
                "only {} distinct implications fit mode {mode} with n = {n}, p = {p}",
                imps.len()
            )));
        }
        let (mut premise, head) = match mode {
            GenMode::Random => {
                let size = rng.gen_range(1..=p.min(n - 1));
                let premise: Vec<usize> = rand::seq::index::sample(&mut rng, n, size).into_vec();
                let outside: Vec<usize> = (0..n).filter(|i| !premise.contains(i)).collect();
                let head = *outside.choose(&mut rng).expect("n > size");
                (premise, head)
            }
            GenMode::Acyclic => {
                let pos = rng.gen_range(1..n);
                let size = rng.gen_range(1..=p.min(pos));
                let premise = rand::seq::index::sample(&mut rng, pos, size)
                    .into_iter()
                    .map(|i| order[i])
                    .collect();
                (premise, order[pos])
            }
            GenMode::Layered(k) | GenMode::Ranked(k) => {
                let i = rng.gen_range(0..k - 1);
                let j = match mode {
                    GenMode::Ranked(_) => i + 1,
                    _ => rng.gen_range(i + 1..k),
                };
                let src = &blocks[i];
                let size = rng.gen_range(1..=p.min(src.len()));
                let premise = rand::seq::index::sample(&mut rng, src.len(), size)
                    .into_iter()
                    .map(|x| src[x])
                    .collect();
                (premise, *blocks[j].choose(&mut rng).expect("blocks are non-empty"))
            }
            GenMode::Chain => unreachable!(),
        };
        premise.sort_unstable();
        if seen.insert((premise.clone(), head)) {
            imps.push(Implication::unit(premise.into_iter().map(el), el(head)));
        }
    }
    ImplicationBase::new(universe.clone(), universe.full_set(), imps)
}

/// `{u_i u_j -> x, u_i u_j -> y | i != j} ∪ {x y -> u_i}` over `u1..uk, x, y`.
/// Its closure system has `3k + 4` members while its only split has a
/// Boolean left side with `2^k`.
pub fn exponential_example(k: usize) -> ImplicationBase {
    let names: Vec<String> = (1..=k).map(|i| format!("u{i}")).chain(["x".into(), "y".into()]).collect();
    let universe = Universe::new(names);
    let e = |s: &str| universe.element(s).expect("declared");
    let us: Vec<Element> = (1..=k).map(|i| e(&format!("u{i}"))).collect();
    let (x, y) = (e("x"), e("y"));
    let mut imps = Vec::new();
    for (a, &ui) in us.iter().enumerate() {
        for &uj in &us[a + 1..] {
            imps.push(Implication::unit([ui, uj], x));
            imps.push(Implication::unit([ui, uj], y));
        }
    }
    for &ui in &us {
        imps.push(Implication::unit([x, y], ui));
    }
    ImplicationBase::new(universe.clone(), universe.full_set(), imps).expect("well-formed")
}
