//! Meet-irreducible enumeration by recursion over acyclic splits.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::base::ImplicationBase;
use crate::closure::ClosureEngine;
use crate::dual::{ldual, ldual_closed, negative_border};
use crate::error::{Error, Result};
use crate::oracle::{meet_irreducibles_oracle_with, DEFAULT_BUDGET};
use crate::set::{Element, ElementSet, SetFamily, Universe};
use crate::split::{component_condensation, is_split, SplitReport};
use crate::tree::{build_acyclic_tree, Node};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Provenance {
    /// `M1 ∪ U2` for a meet-irreducible `M1` of the left side.
    Type1,
    /// A maximal extension of a meet-irreducible of the right side.
    Type2,
    /// Computed directly on a leaf of the decomposition.
    LeafOracle,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::Type1 => "Type1",
            Provenance::Type2 => "Type2",
            Provenance::LeafOracle => "LeafOracle",
        }
    }
}

/// Sizes seen at one combine step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CombineStat {
    pub m1: usize,
    pub m2: usize,
    pub m: usize,
}

impl CombineStat {
    pub fn holds(&self) -> bool {
        self.m >= self.m1 + self.m2
    }
}

/// Meet-irreducible sets sorted by (size, lexicographic), each tagged with
/// the step that produced it, plus the sizes seen at every combine.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MeetSet {
    entries: Vec<(ElementSet, Provenance)>,
    pub stats: Vec<CombineStat>,
}

impl MeetSet {
    fn from_entries(mut entries: Vec<(ElementSet, Provenance)>, stats: Vec<CombineStat>) -> MeetSet {
        entries.sort();
        entries.dedup_by(|a, b| a.0 == b.0);
        MeetSet { entries, stats }
    }

    fn leaf(family: SetFamily) -> MeetSet {
        MeetSet::from_entries(family.into_iter().map(|s| (s, Provenance::LeafOracle)).collect(), Vec::new())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(ElementSet, Provenance)] {
        &self.entries
    }

    pub fn family(&self) -> SetFamily {
        SetFamily::canonical(self.entries.iter().map(|(s, _)| s.clone()))
    }

    pub fn format(&self, universe: &Universe, provenance: bool) -> Vec<String> {
        self.entries
            .iter()
            .map(|(s, p)| {
                let text = universe.format_set(s);
                if provenance {
                    format!("{text}\t{}", p.name())
                } else {
                    text
                }
            })
            .collect()
    }
}

/// Left-side closures of the cross premises of one acyclic split, shared by
/// every extension query on that split.
struct Extender<'a> {
    ground: &'a ElementSet,
    boolean: bool,
    m1: &'a SetFamily,
    cross: Vec<(ElementSet, Vec<Element>)>,
}

impl<'a> Extender<'a> {
    fn new(split: &'a SplitReport, m1: &'a SetFamily) -> Result<Extender<'a>> {
        let parts = split.require_acyclic()?;
        let engine = ClosureEngine::new(&parts.left);
        let width = parts.left.universe().len();
        let cross = parts
            .cross
            .implications()
            .iter()
            .map(|imp| {
                let premise = ElementSet::from_elements(width, imp.premise().iter().copied());
                (engine.close(&premise), imp.conclusion().to_vec())
            })
            .collect();
        Ok(Extender {
            ground: parts.left.ground(),
            boolean: parts.left.is_empty(),
            m1,
            cross,
        })
    }

    fn max_ext(&self, c2: &ElementSet) -> SetFamily {
        let violated = self
            .cross
            .iter()
            .filter(|(_, heads)| !c2.contains_all(heads))
            .map(|(closed, _)| closed.clone());
        let bminus = SetFamily::canonical(violated).minimal();
        let bplus = ldual_closed(self.ground, self.boolean, self.m1, &bminus);
        SetFamily::canonical(bplus.iter().map(|p| p.union(c2)))
    }
}

/// Maximal extensions of `c2` across an acyclic split, given the
/// meet-irreducibles `m1` of the left side: the members of the positive
/// border dual to the negative border of `c2`, each joined with `c2`.
pub fn max_ext(split: &SplitReport, m1: &SetFamily, c2: &ElementSet) -> Result<SetFamily> {
    let parts = split.require_acyclic()?;
    let bminus = negative_border(&parts.left, &parts.cross, c2);
    let bplus = ldual(&parts.left, m1, &bminus)?;
    Ok(SetFamily::canonical(bplus.sets.iter().map(|p| p.union(c2))))
}

/// The meet-irreducibles of the whole system from those of the two sides of
/// an acyclic split.
pub fn combine_meets(split: &SplitReport, m1: &SetFamily, m2: &SetFamily) -> Result<MeetSet> {
    let extender = Extender::new(split, m1)?;
    let mut entries: Vec<(ElementSet, Provenance)> =
        m1.iter().map(|m| (m.union(&split.u2), Provenance::Type1)).collect();
    for c2 in m2.iter() {
        entries.extend(extender.max_ext(c2).into_iter().map(|e| (e, Provenance::Type2)));
    }
    let out = MeetSet::from_entries(entries, Vec::new());
    let stat = CombineStat {
        m1: m1.len(),
        m2: m2.len(),
        m: out.len(),
    };
    Ok(MeetSet {
        stats: vec![stat],
        ..out
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Recurse over the acyclic decomposition tree, oracle at its leaves.
    Auto,
    /// Requires a layered base; every dualization is Boolean.
    Layered,
    /// Enumerate the whole closure system.
    Oracle,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Auto => "auto",
            Strategy::Layered => "layered",
            Strategy::Oracle => "oracle",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CcmOptions {
    pub strategy: Strategy,
    /// Candidate budget for each oracle call.
    pub budget: u64,
}

impl Default for CcmOptions {
    fn default() -> CcmOptions {
        CcmOptions {
            strategy: Strategy::Auto,
            budget: DEFAULT_BUDGET,
        }
    }
}

pub fn ccm(base: &ImplicationBase) -> Result<MeetSet> {
    ccm_with(base, CcmOptions::default())
}

pub fn ccm_with(base: &ImplicationBase, options: CcmOptions) -> Result<MeetSet> {
    match options.strategy {
        Strategy::Oracle => Ok(MeetSet::leaf(meet_irreducibles_oracle_with(base, options.budget)?)),
        Strategy::Layered => {
            let layering = detect_layering(base).ok_or(Error::NotLayered)?;
            ccm_layered(base, &layering)
        }
        Strategy::Auto => ccm_tree(base, options.budget),
    }
}

fn ccm_tree(base: &ImplicationBase, budget: u64) -> Result<MeetSet> {
    let tree = build_acyclic_tree(base);
    let Some(root) = tree.root() else {
        return Ok(MeetSet::default());
    };
    let units = base.unit_expand();
    let mut results: Vec<Option<MeetSet>> = vec![None; tree.nodes().len()];
    for id in (0..tree.nodes().len()).rev() {
        let meets = match tree.node(id) {
            Node::Element(_) => MeetSet::leaf(SetFamily::canonical([base.universe().empty_set()])),
            Node::Factor(f) => MeetSet::leaf(meet_irreducibles_oracle_with(f, budget)?),
            Node::Interior { u1, u2, children, .. } => {
                let left = results[children[0]].take().expect("child computed first");
                let right = results[children[1]].take().expect("child computed first");
                let sub = units.restrict(&u1.union(u2))?;
                let split = is_split(&sub, u1, u2)?;
                let mut out = combine_meets(&split, &left.family(), &right.family())?;
                let mut stats = left.stats;
                stats.extend(right.stats);
                stats.append(&mut out.stats);
                out.stats = stats;
                out
            }
        };
        results[id] = Some(meets);
    }
    Ok(results[root].take().expect("root computed"))
}

/// Blocks `U1 … Uk` such that every implication has its premise in some `Ui`
/// and its head in a later `Uj`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredPartition {
    pub blocks: Vec<ElementSet>,
}

/// Premise components in topological order of the component digraph, when
/// that digraph is acyclic and no implication stays inside a block. Ties go
/// to the block with the smaller minimum element.
pub fn detect_layering(base: &ImplicationBase) -> Option<LayeredPartition> {
    let cond = component_condensation(base);
    if cond.internal_heads.iter().any(|&h| h) {
        return None;
    }
    let k = cond.partition.len();
    let mut indegree = vec![0usize; k];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); k];
    for &(a, b) in &cond.arcs {
        indegree[b] += 1;
        out[a].push(b);
    }
    let mut ready: BinaryHeap<Reverse<usize>> = (0..k).filter(|&i| indegree[i] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(k);
    while let Some(Reverse(b)) = ready.pop() {
        order.push(b);
        for &c in &out[b] {
            indegree[c] -= 1;
            if indegree[c] == 0 {
                ready.push(Reverse(c));
            }
        }
    }
    if order.len() < k {
        return None;
    }
    Some(LayeredPartition {
        blocks: order.into_iter().map(|b| cond.partition.block(b)).collect(),
    })
}

/// Combines from the last block backwards using the splits
/// `(Ui, Ui+1 ∪ … ∪ Uk)`. Each left side has no implications, so its
/// meet-irreducibles are its co-atoms and every dualization is Boolean.
pub fn ccm_layered(base: &ImplicationBase, layering: &LayeredPartition) -> Result<MeetSet> {
    let Some((last, rest)) = layering.blocks.split_last() else {
        return Ok(MeetSet::default());
    };
    let units = base.unit_expand();
    let coatoms = |block: &ElementSet| -> SetFamily {
        SetFamily::canonical(block.iter().map(|e| {
            let mut s = block.clone();
            s.remove(e);
            s
        }))
    };
    let mut acc = MeetSet::leaf(coatoms(last));
    let mut below = last.clone();
    for block in rest.iter().rev() {
        let sub = units.restrict(&block.union(&below))?;
        let split = is_split(&sub, block, &below)?;
        if !split.is_acyclic() || &split.u1 != block {
            return Err(Error::NotLayered);
        }
        let mut next = combine_meets(&split, &coatoms(block), &acc.family())?;
        let mut stats = std::mem::take(&mut acc.stats);
        stats.append(&mut next.stats);
        next.stats = stats;
        acc = next;
        below.union_with(block);
    }
    Ok(acc)
}
