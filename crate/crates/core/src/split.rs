//! Premise connectivity, split classification and acyclic-split detection.

use std::collections::BTreeSet;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::unionfind::UnionFind;

use crate::base::{Implication, ImplicationBase};
use crate::error::{Error, Result};
use crate::set::{Element, ElementSet};

/// Partition of the ground set into premise-connected components.
///
/// Blocks are ordered by their smallest element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentPartition {
    width: usize,
    blocks: Vec<Vec<Element>>,
    block_of: Vec<Option<usize>>,
}

impl ComponentPartition {
    /// Elements of block `i`, increasing.
    pub fn block_elements(&self, i: usize) -> &[Element] {
        &self.blocks[i]
    }

    pub fn block(&self, i: usize) -> ElementSet {
        ElementSet::from_elements(self.width, self.blocks[i].iter().copied())
    }

    pub fn blocks(&self) -> Vec<ElementSet> {
        (0..self.blocks.len()).map(|i| self.block(i)).collect()
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_of(&self, e: Element) -> Option<usize> {
        self.block_of.get(e.index()).copied().flatten()
    }

    /// Block holding a premise; premises never straddle blocks.
    fn premise_block(&self, imp: &Implication) -> usize {
        self.block_of(imp.premise()[0]).expect("premise inside ground")
    }
}

/// Components of the "occur together in a premise" relation, via union-find
/// over consecutive premise elements.
pub fn premise_components(base: &ImplicationBase) -> ComponentPartition {
    let width = base.universe().len();
    let mut uf = UnionFind::<usize>::new(width);
    for imp in base.implications() {
        for pair in imp.premise().windows(2) {
            uf.union(pair[0].index(), pair[1].index());
        }
    }
    let mut block_of = vec![None; width];
    let mut root_block = vec![usize::MAX; width];
    let mut blocks: Vec<Vec<Element>> = Vec::new();
    // Ground elements in increasing order, so blocks come out sorted by minimum.
    for e in base.ground().iter() {
        let root = uf.find_mut(e.index());
        if root_block[root] == usize::MAX {
            root_block[root] = blocks.len();
            blocks.push(Vec::new());
        }
        let b = root_block[root];
        blocks[b].push(e);
        block_of[e.index()] = Some(b);
    }
    ComponentPartition {
        width,
        blocks,
        block_of,
    }
}

pub fn has_split(base: &ImplicationBase) -> bool {
    premise_components(base).len() >= 2
}

/// `(C, U \ C)` where `C` is the component holding the smallest element.
pub fn find_split(base: &ImplicationBase) -> Option<(ElementSet, ElementSet)> {
    let parts = premise_components(base);
    if parts.len() < 2 {
        return None;
    }
    let c = parts.block(0);
    let rest = base.ground().difference(&c);
    Some((c, rest))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitKind {
    NotASplit,
    Split,
    AcyclicSplit,
}

/// The three sub-bases a split induces: `I[U1]`, `I[U2]` and `I[U1,U2]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitParts {
    pub left: ImplicationBase,
    pub right: ImplicationBase,
    pub cross: ImplicationBase,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitReport {
    pub u1: ElementSet,
    pub u2: ElementSet,
    pub kind: SplitKind,
    pub parts: Option<SplitParts>,
    pub violation: Option<Implication>,
}

impl SplitReport {
    pub fn is_acyclic(&self) -> bool {
        self.kind == SplitKind::AcyclicSplit
    }

    pub(crate) fn require_acyclic(&self) -> Result<&SplitParts> {
        match (&self.kind, &self.parts) {
            (SplitKind::AcyclicSplit, Some(parts)) => Ok(parts),
            _ => Err(Error::NotAcyclic(format!("{:?}", self.kind))),
        }
    }
}

/// Classifies a non-trivial bipartition. Acyclic splits come back oriented so
/// that every cross implication has its premise in `u1`.
pub fn is_split(base: &ImplicationBase, u1: &ElementSet, u2: &ElementSet) -> Result<SplitReport> {
    base.check_bipartition(u1, u2)?;
    let cross = match base.bipartite_part(u1, u2) {
        Ok(cross) => cross,
        Err(Error::NotASplit { implication, .. }) => {
            return Ok(SplitReport {
                u1: u1.clone(),
                u2: u2.clone(),
                kind: SplitKind::NotASplit,
                parts: None,
                violation: Some(implication),
            })
        }
        Err(e) => return Err(e),
    };
    let forward = cross.implications().iter().all(|i| i.premise_within(u1));
    let backward = cross.implications().iter().all(|i| i.premise_within(u2));
    let (kind, u1, u2) = if forward {
        (SplitKind::AcyclicSplit, u1, u2)
    } else if backward {
        (SplitKind::AcyclicSplit, u2, u1)
    } else {
        (SplitKind::Split, u1, u2)
    };
    Ok(SplitReport {
        u1: u1.clone(),
        u2: u2.clone(),
        kind,
        parts: Some(SplitParts {
            left: base.restrict_unchecked(u1),
            right: base.restrict_unchecked(u2),
            cross,
        }),
        violation: None,
    })
}

/// Digraph on premise components: an arc `i -> j` whenever some implication
/// has its premise in block `i` and its head in block `j != i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condensation {
    pub partition: ComponentPartition,
    pub arcs: BTreeSet<(usize, usize)>,
    /// Blocks holding both the premise and the head of some implication.
    pub internal_heads: Vec<bool>,
}

pub fn component_condensation(base: &ImplicationBase) -> Condensation {
    let partition = premise_components(base);
    let mut arcs = BTreeSet::new();
    let mut internal_heads = vec![false; partition.len()];
    for imp in base.unit_expand().implications() {
        let from = partition.premise_block(imp);
        let to = partition.block_of(imp.head()).expect("head inside ground");
        if from == to {
            internal_heads[from] = true;
        } else {
            arcs.insert((from, to));
        }
    }
    Condensation {
        partition,
        arcs,
        internal_heads,
    }
}

impl Condensation {
    /// Strongly connected components as lists of block indices, each sorted.
    pub fn strong_components(&self) -> Vec<Vec<usize>> {
        let mut g: DiGraph<(), ()> = DiGraph::new();
        let nodes: Vec<NodeIndex> = (0..self.partition.len()).map(|_| g.add_node(())).collect();
        for &(a, b) in &self.arcs {
            g.add_edge(nodes[a], nodes[b], ());
        }
        tarjan_scc(&g)
            .into_iter()
            .map(|scc| {
                let mut v: Vec<usize> = scc.into_iter().map(|n| n.index()).collect();
                v.sort_unstable();
                v
            })
            .collect()
    }
}

/// An acyclic split read off the condensation, if the condensation has at
/// least two strongly connected components.
///
/// `u1` is the source component whose blocks hold the smallest element among
/// all source components; `u2` is everything else. No arc enters a source
/// component, so every cross implication runs from `u1` to `u2`.
pub fn find_acyclic_split(base: &ImplicationBase) -> Option<(ElementSet, ElementSet)> {
    if base.ground().len() < 2 {
        return None;
    }
    let cond = component_condensation(base);
    let sccs = cond.strong_components();
    if sccs.len() < 2 {
        return None;
    }
    let mut scc_of = vec![0; cond.partition.len()];
    for (i, scc) in sccs.iter().enumerate() {
        for &b in scc {
            scc_of[b] = i;
        }
    }
    let mut has_incoming = vec![false; sccs.len()];
    for &(a, b) in &cond.arcs {
        if scc_of[a] != scc_of[b] {
            has_incoming[scc_of[b]] = true;
        }
    }
    // Blocks are sorted by minimum element, so the smallest block index wins.
    let source = (0..sccs.len())
        .filter(|&i| !has_incoming[i])
        .min_by_key(|&i| sccs[i][0])?;
    let mut u1 = base.universe().empty_set();
    for &b in &sccs[source] {
        for &e in cond.partition.block_elements(b) {
            u1.insert(e);
        }
    }
    let u2 = base.ground().difference(&u1);
    debug_assert!(is_split(base, &u1, &u2).map(|r| r.is_acyclic() && r.u1 == u1).unwrap_or(false));
    Some((u1, u2))
}

/// Full [`SplitReport`] for [`find_acyclic_split`].
pub fn acyclic_split_report(base: &ImplicationBase) -> Option<SplitReport> {
    let (u1, u2) = find_acyclic_split(base)?;
    let report = is_split(base, &u1, &u2).ok()?;
    (report.is_acyclic() && report.u1 == u1).then_some(report)
}
