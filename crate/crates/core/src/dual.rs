//! Minimal transversals, negative borders and dualization inside a closure
//! system known through both a base and its meet-irreducibles.

use crate::base::ImplicationBase;
use crate::closure::ClosureEngine;
use crate::error::{Error, Result};
use crate::oracle::{enumerate_closed_sets_with, DEFAULT_BUDGET};
use crate::set::{ElementSet, SetFamily};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    pub vertices: ElementSet,
    pub edges: SetFamily,
}

impl Hypergraph {
    pub fn new(vertices: ElementSet, edges: impl IntoIterator<Item = ElementSet>) -> Hypergraph {
        Hypergraph {
            vertices,
            edges: edges.into_iter().collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Polarity {
    Negative,
    Positive,
}

/// An antichain of closed sets of the left-hand system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Border {
    pub sets: SetFamily,
    pub polarity: Polarity,
}

/// Inclusion-minimal vertex sets meeting every edge, by Berge multiplication.
///
/// No edges gives `{∅}`; an empty edge gives no transversal at all.
pub fn min_transversals(h: &Hypergraph) -> Hypergraph {
    let width = h.vertices.width();
    let mut edges = h.edges.minimal().into_vec();
    edges.sort_by_key(ElementSet::len);
    let mut current = vec![ElementSet::empty(width)];
    for edge in &edges {
        if edge.is_empty() {
            current.clear();
            break;
        }
        let (hit, miss): (Vec<ElementSet>, Vec<ElementSet>) =
            current.into_iter().partition(|t| !t.is_disjoint(edge));
        let mut next = hit.clone();
        for t in &miss {
            for v in edge.iter() {
                let mut grown = t.clone();
                grown.insert(v);
                // A grown set is redundant when an old hitting set already lies inside it.
                if !hit.iter().any(|s| s.is_subset(&grown)) {
                    next.push(grown);
                }
            }
        }
        current = SetFamily::canonical(next).minimal().into_vec();
    }
    Hypergraph {
        vertices: h.vertices.clone(),
        edges: SetFamily::canonical(current),
    }
}

/// `min{cl1(A) | A -> b in cross, b not in c2}`.
pub fn negative_border(i1: &ImplicationBase, cross: &ImplicationBase, c2: &ElementSet) -> Border {
    let engine = ClosureEngine::new(i1);
    let width = i1.universe().len();
    let sets: SetFamily = cross
        .implications()
        .iter()
        .filter(|imp| !c2.contains_all(imp.conclusion()))
        .map(|imp| engine.close(&ElementSet::from_elements(width, imp.premise().iter().copied())))
        .collect();
    Border {
        sets: SetFamily::canonical(sets).minimal(),
        polarity: Polarity::Negative,
    }
}

/// The maximal closed sets of `i1` containing no member of `bminus`, given
/// the meet-irreducibles `m1` of `i1`.
///
/// A closed set avoids every member of `bminus` exactly when it misses some
/// minimal transversal `T`. Closed sets missing `T` lie below intersections
/// `⋂_{t in T} M_t` with `M_t` meet-irreducible and `t` not in `M_t`, and every
/// such intersection is itself closed and misses `T`.
pub fn ldual(i1: &ImplicationBase, m1: &SetFamily, bminus: &Border) -> Result<Border> {
    let engine = ClosureEngine::new(i1);
    let ground = i1.ground();
    for b in bminus.sets.iter() {
        if !b.is_subset(ground) || &engine.close(b) != b {
            return Err(Error::InconsistentInput(format!(
                "border member {{{}}} is not closed",
                i1.format_set(b)
            )));
        }
    }
    Ok(Border {
        sets: ldual_closed(ground, i1.is_empty(), m1, &bminus.sets),
        polarity: Polarity::Positive,
    })
}

/// [`ldual`] without the closedness check. `boolean` says the left system
/// has no implications, in which case `m1` is not consulted.
pub(crate) fn ldual_closed(ground: &ElementSet, boolean: bool, m1: &SetFamily, bminus: &SetFamily) -> SetFamily {
    let tr = min_transversals(&Hypergraph::new(ground.clone(), bminus.iter().cloned()));
    let mut found: Vec<ElementSet> = Vec::new();
    if boolean {
        found.extend(tr.edges.iter().map(|t| ground.difference(t)));
    } else {
        for t in tr.edges.iter() {
            let mut partial = vec![ground.clone()];
            for e in t.iter() {
                let mut next = Vec::new();
                for x in &partial {
                    if !x.contains(e) {
                        next.push(x.clone());
                        continue;
                    }
                    next.extend(m1.iter().filter(|m| !m.contains(e)).map(|m| x.intersection(m)));
                }
                partial = SetFamily::canonical(next).maximal().into_vec();
            }
            found.extend(partial);
        }
    }
    SetFamily::canonical(found).maximal()
}

/// Checks that `bplus` is the antichain of closed sets dual to `bminus`: every
/// closed set of `i1` lies below some member of `bplus` or above some member
/// of `bminus`, never both.
pub fn verify_dual(i1: &ImplicationBase, bminus: &Border, bplus: &Border) -> Result<bool> {
    verify_dual_with(i1, bminus, bplus, DEFAULT_BUDGET)
}

pub fn verify_dual_with(i1: &ImplicationBase, bminus: &Border, bplus: &Border, budget: u64) -> Result<bool> {
    let cs = enumerate_closed_sets_with(i1, budget)?;
    if !bplus.sets.is_antichain() || !bminus.sets.is_antichain() {
        return Ok(false);
    }
    if !bplus.sets.iter().chain(bminus.sets.iter()).all(|s| cs.contains(s)) {
        return Ok(false);
    }
    Ok(cs.closed_sets().iter().all(|c| {
        let below = bplus.sets.iter().any(|p| c.is_subset(p));
        let above = bminus.sets.iter().any(|b| b.is_subset(c));
        below != above
    }))
}
