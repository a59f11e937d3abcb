//! Bitmask oracles and random instances shared by the integration tests.
//! Nothing here goes through the library's own closure or lattice code.
#![allow(dead_code)]

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use split_closure::{Element, ElementSet, Implication, ImplicationBase, SetFamily, Universe};

pub const FOUR_ELEMENTS: &str = "1 2 -> 3\n2 3 -> 4\n4 -> 1\n";
pub const SEVEN_ELEMENTS: &str = "1 2 -> 3\n3 -> 1\n5 6 -> 2\n2 3 -> 7\n4 5 -> 6\n5 -> 7\n";
pub const NO_SPLIT: &str = "1 2 -> 3\n1 3 -> 2\n";
pub const TWO_BLOCKS: &str = "1 2 -> 3\n2 3 -> 4\n3 4 -> 5\n5 6 -> 7\n6 7 -> 8\n";
pub const WITH_FACTOR: &str = "4 5 -> 1\n1 2 -> 3\n2 3 -> 1\n1 3 -> 2\n3 -> 6\n1 -> 4\n";
pub const RUNNING: &str = "1 2 -> 3\n1 3 -> 4\n2 3 -> 5\n2 -> 4\n1 -> 5\n5 -> 6\n4 -> 6\n";

pub fn mask(s: &ElementSet) -> u32 {
    s.iter().fold(0, |m, e| m | 1 << e.index())
}

pub fn unmask(width: usize, m: u32) -> ElementSet {
    ElementSet::from_elements(width, (0..width).filter(|i| m >> i & 1 == 1).map(|i| Element(i as u32)))
}

pub fn masks(f: &SetFamily) -> Vec<u32> {
    let mut v: Vec<u32> = f.iter().map(mask).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// A base as `(ground, [(premise, conclusion)])` bitmasks.
pub struct Naive {
    pub ground: u32,
    pub imps: Vec<(u32, u32)>,
}

impl Naive {
    pub fn of(base: &ImplicationBase) -> Naive {
        let bits = |es: &[Element]| es.iter().fold(0u32, |m, e| m | 1 << e.index());
        Naive {
            ground: mask(base.ground()),
            imps: base.implications().iter().map(|i| (bits(i.premise()), bits(i.conclusion()))).collect(),
        }
    }

    /// Implications with premise and conclusion inside `sub`.
    pub fn restrict(&self, sub: u32) -> Naive {
        Naive {
            ground: sub,
            imps: self.imps.iter().copied().filter(|&(a, b)| (a | b) & !sub == 0).collect(),
        }
    }

    pub fn close(&self, mut x: u32) -> u32 {
        loop {
            let before = x;
            for &(a, b) in &self.imps {
                if a & x == a {
                    x |= b;
                }
            }
            if x == before {
                return x;
            }
        }
    }

    pub fn is_closed(&self, x: u32) -> bool {
        self.imps.iter().all(|&(a, b)| a & x != a || b & x == b)
    }

    /// Every closed subset of the ground, ascending.
    pub fn closed_sets(&self) -> Vec<u32> {
        subsets(self.ground).filter(|&x| self.is_closed(x)).collect()
    }

    pub fn meets(&self) -> Vec<u32> {
        meets_of(&self.closed_sets())
    }
}

/// All subsets of `m`, ascending.
pub fn subsets(m: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(0u32);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == m { None } else { Some(((cur | !m).wrapping_add(1)) & m) };
        Some(cur)
    })
}

/// Closed sets with exactly one upper cover in `family`.
pub fn meets_of(family: &[u32]) -> Vec<u32> {
    let mut out: Vec<u32> = family
        .iter()
        .copied()
        .filter(|&c| {
            let above: Vec<u32> = family.iter().copied().filter(|&d| d != c && d & c == c).collect();
            let covers = above.iter().filter(|&&d| !above.iter().any(|&e| e != d && e & d == e)).count();
            covers == 1
        })
        .collect();
    out.sort_unstable();
    out
}

pub fn is_subset(a: u32, b: u32) -> bool {
    a & b == a
}

pub fn minimal(v: &[u32]) -> Vec<u32> {
    let mut out: Vec<u32> = v.iter().copied().filter(|&x| !v.iter().any(|&y| y != x && is_subset(y, x))).collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub fn maximal(v: &[u32]) -> Vec<u32> {
    let mut out: Vec<u32> = v.iter().copied().filter(|&x| !v.iter().any(|&y| y != x && is_subset(x, y))).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Random unit base over `1..=n`: premise sizes `1..=pmax`, head outside the premise.
pub fn random_base(rng: &mut ChaCha8Rng, n: usize, m: usize, pmax: usize) -> ImplicationBase {
    let u = Universe::numbered(n);
    let el = |i: usize| u.element(&(i + 1).to_string()).unwrap();
    let mut imps = Vec::new();
    if n >= 2 {
        for _ in 0..m {
            let size = rng.gen_range(1..=pmax.min(n - 1));
            let mut pool: Vec<usize> = (0..n).collect();
            pool.shuffle(rng);
            let premise = pool[..size].iter().map(|&i| el(i));
            imps.push(Implication::unit(premise, el(pool[size])));
        }
    }
    ImplicationBase::new(Arc::clone(&u), u.full_set(), imps).unwrap()
}

/// The criterion-sized random family: |U| in 1..=8, |I| in 0..=12, premises of size 1 to 3.
pub fn random_instance(seed: u64) -> ImplicationBase {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=8);
    let m = rng.gen_range(0..=12);
    random_base(&mut rng, n, m, 3)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// H-decomposability straight from the definition: a single element, or some
/// bipartition every premise respects with both restrictions decomposable.
pub fn decomposable(n: &Naive) -> bool {
    let mut memo = std::collections::HashMap::new();
    decomposable_rec(n, n.ground, &mut memo)
}

fn decomposable_rec(n: &Naive, sub: u32, memo: &mut std::collections::HashMap<u32, bool>) -> bool {
    if sub.count_ones() <= 1 {
        return true;
    }
    if let Some(&v) = memo.get(&sub) {
        return v;
    }
    let local = n.restrict(sub);
    let low = sub & sub.wrapping_neg();
    // Fix the lowest element on the left to visit each unordered pair once.
    let rest = sub & !low;
    let mut ok = false;
    for extra in subsets(rest) {
        let left = low | extra;
        let right = sub & !left;
        if right == 0 {
            continue;
        }
        let respects = local.imps.iter().all(|&(a, _)| is_subset(a, left) || is_subset(a, right));
        if respects && decomposable_rec(n, left, memo) && decomposable_rec(n, right, memo) {
            ok = true;
            break;
        }
    }
    memo.insert(sub, ok);
    ok
}

/// Nontrivial bipartitions `(left, right)` of `ground` that every premise respects.
pub fn naive_splits(n: &Naive) -> Vec<(u32, u32)> {
    subsets(n.ground)
        .filter(|&l| l != 0 && l != n.ground)
        .map(|l| (l, n.ground & !l))
        .filter(|&(l, r)| n.imps.iter().all(|&(a, _)| is_subset(a, l) || is_subset(a, r)))
        .collect()
}
