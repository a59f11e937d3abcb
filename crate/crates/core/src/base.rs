//! Implications, implicational bases and the base-partitioning primitives.

use std::borrow::Cow;
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::set::{Element, ElementSet, Universe};

type Elems = SmallVec<[Element; 4]>;

/// `premise -> conclusion`, both kept sorted and duplicate-free.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Implication {
    premise: Elems,
    conclusion: Elems,
}

fn sorted(elems: impl IntoIterator<Item = Element>) -> Elems {
    let mut v: Elems = elems.into_iter().collect();
    v.sort_unstable();
    v.dedup();
    v
}

impl Implication {
    pub fn new(
        premise: impl IntoIterator<Item = Element>,
        conclusion: impl IntoIterator<Item = Element>,
    ) -> Implication {
        Implication {
            premise: sorted(premise),
            conclusion: sorted(conclusion),
        }
    }

    pub fn unit(premise: impl IntoIterator<Item = Element>, head: Element) -> Implication {
        Implication {
            premise: sorted(premise),
            conclusion: smallvec::smallvec![head],
        }
    }

    pub fn premise(&self) -> &[Element] {
        &self.premise
    }

    pub fn conclusion(&self) -> &[Element] {
        &self.conclusion
    }

    pub fn is_unit(&self) -> bool {
        self.conclusion.len() == 1
    }

    /// The single conclusion element of a unit implication.
    pub fn head(&self) -> Element {
        debug_assert!(self.is_unit());
        self.conclusion[0]
    }

    pub fn premise_within(&self, set: &ElementSet) -> bool {
        set.contains_all(&self.premise)
    }

    fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        self.premise.iter().chain(self.conclusion.iter()).copied()
    }

    /// Conclusion minus premise; `None` when nothing remains.
    fn normalized(&self) -> Option<Implication> {
        let conclusion: Elems = self
            .conclusion
            .iter()
            .copied()
            .filter(|c| self.premise.binary_search(c).is_err())
            .collect();
        if conclusion.is_empty() {
            None
        } else {
            Some(Implication {
                premise: self.premise.clone(),
                conclusion,
            })
        }
    }

    pub fn display<'a>(&'a self, universe: &'a Universe) -> impl fmt::Display + 'a {
        ImplicationDisplay { imp: self, universe }
    }
}

struct ImplicationDisplay<'a> {
    imp: &'a Implication,
    universe: &'a Universe,
}

impl fmt::Display for ImplicationDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |elems: &[Element]| {
            elems
                .iter()
                .map(|&e| self.universe.name(e))
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(f, "{} -> {}", side(&self.imp.premise), side(&self.imp.conclusion))
    }
}

/// A ground set together with an ordered list of implications over it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImplicationBase {
    universe: Arc<Universe>,
    ground: ElementSet,
    implications: Vec<Implication>,
}

impl ImplicationBase {
    /// Checks that every implication lives inside `ground` and has a non-empty premise.
    pub fn new(
        universe: Arc<Universe>,
        ground: ElementSet,
        implications: Vec<Implication>,
    ) -> Result<ImplicationBase> {
        debug_assert_eq!(ground.width(), universe.len());
        for imp in &implications {
            if imp.premise.is_empty() {
                return Err(Error::EmptyPremise { line: 0 });
            }
            if let Some(e) = imp.elements().find(|&e| !ground.contains(e)) {
                return Err(Error::ElementOutOfGround(universe.name(e).to_string()));
            }
        }
        Ok(ImplicationBase {
            universe,
            ground,
            implications,
        })
    }

    /// Base with no implications over the whole universe.
    pub fn empty(universe: Arc<Universe>) -> ImplicationBase {
        let ground = universe.full_set();
        ImplicationBase {
            universe,
            ground,
            implications: Vec::new(),
        }
    }

    /// Same universe and ground, different implications. Callers guarantee validity.
    pub(crate) fn with_implications(&self, ground: ElementSet, implications: Vec<Implication>) -> ImplicationBase {
        ImplicationBase {
            universe: Arc::clone(&self.universe),
            ground,
            implications,
        }
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn ground(&self) -> &ElementSet {
        &self.ground
    }

    pub fn implications(&self) -> &[Implication] {
        &self.implications
    }

    /// Number of implications.
    pub fn len(&self) -> usize {
        self.implications.len()
    }

    pub fn is_empty(&self) -> bool {
        self.implications.is_empty()
    }

    pub fn is_unit_expanded(&self) -> bool {
        self.implications
            .iter()
            .all(|i| i.is_unit() && i.premise.binary_search(&i.head()).is_err())
    }

    /// Strips premise elements from conclusions, drops emptied implications
    /// and sorts the rest. Duplicates are kept.
    pub fn normalize(&self) -> ImplicationBase {
        let mut implications: Vec<Implication> =
            self.implications.iter().filter_map(Implication::normalized).collect();
        implications.sort();
        self.with_implications(self.ground.clone(), implications)
    }

    /// `{A -> b | A -> B in I, b in B \ A}`, input order preserved.
    pub fn unit_expand(&self) -> ImplicationBase {
        if self.is_unit_expanded() {
            return self.clone();
        }
        let implications = self
            .implications
            .iter()
            .flat_map(|imp| {
                imp.conclusion
                    .iter()
                    .filter(|c| imp.premise.binary_search(c).is_err())
                    .map(|&c| Implication::unit(imp.premise.iter().copied(), c))
            })
            .collect();
        self.with_implications(self.ground.clone(), implications)
    }

    /// Sorted, duplicate-free unit implications.
    pub fn unit_set(&self) -> Vec<Implication> {
        let mut v = self.unit_expand().implications;
        v.sort();
        v.dedup();
        v
    }

    fn check_within_ground(&self, subset: &ElementSet) -> Result<()> {
        match subset.difference(&self.ground).min_element() {
            Some(e) => Err(Error::ElementOutOfGround(self.universe.name(e).to_string())),
            None => Ok(()),
        }
    }

    /// The sub-base of unit implications `A -> b` with `A ∪ {b} ⊆ subset`.
    pub fn restrict(&self, subset: &ElementSet) -> Result<ImplicationBase> {
        self.check_within_ground(subset)?;
        Ok(self.restrict_unchecked(subset))
    }

    /// Unit implications, borrowed when the base is already unit-expanded.
    fn units(&self) -> Cow<'_, [Implication]> {
        if self.is_unit_expanded() {
            Cow::Borrowed(&self.implications)
        } else {
            Cow::Owned(self.unit_expand().implications)
        }
    }

    pub(crate) fn restrict_unchecked(&self, subset: &ElementSet) -> ImplicationBase {
        let implications = self
            .units()
            .iter()
            .filter(|i| subset.contains(i.head()) && i.premise_within(subset))
            .cloned()
            .collect();
        self.with_implications(subset.clone(), implications)
    }

    pub(crate) fn check_bipartition(&self, u1: &ElementSet, u2: &ElementSet) -> Result<()> {
        self.check_within_ground(u1)?;
        self.check_within_ground(u2)?;
        if u1.is_empty() || u2.is_empty() {
            return Err(Error::BadBipartition("one side is empty".into()));
        }
        if !u1.is_disjoint(u2) {
            return Err(Error::BadBipartition("sides overlap".into()));
        }
        if &u1.union(u2) != self.ground() {
            return Err(Error::BadBipartition("sides do not cover the ground set".into()));
        }
        Ok(())
    }

    /// The unit implications crossing a split, in either direction. A premise
    /// meeting both sides is reported as [`Error::NotASplit`].
    pub fn bipartite_part(&self, u1: &ElementSet, u2: &ElementSet) -> Result<ImplicationBase> {
        self.check_bipartition(u1, u2)?;
        let mut cross = Vec::new();
        for imp in self.units().iter() {
            let head = imp.head();
            if imp.premise_within(u1) {
                if u2.contains(head) {
                    cross.push(imp.clone());
                }
            } else if imp.premise_within(u2) {
                if u1.contains(head) {
                    cross.push(imp.clone());
                }
            } else {
                let text = imp.display(&self.universe).to_string();
                return Err(Error::NotASplit {
                    implication: imp.clone(),
                    text,
                });
            }
        }
        Ok(self.with_implications(self.ground.clone(), cross))
    }

    pub fn format_implication(&self, imp: &Implication) -> String {
        imp.display(&self.universe).to_string()
    }

    /// Implications as token lists, for comparisons across universes.
    pub fn named_implications(&self) -> Vec<(Vec<String>, Vec<String>)> {
        let names = |elems: &[Element]| elems.iter().map(|&e| self.universe.name(e).to_string()).collect();
        self.implications
            .iter()
            .map(|i| (names(&i.premise), names(&i.conclusion)))
            .collect()
    }

    pub fn ground_names(&self) -> Vec<String> {
        self.universe.names_of(&self.ground)
    }

    /// Set parsed against this base's universe, rejecting tokens outside the ground set.
    pub fn parse_subset(&self, text: &str) -> Result<ElementSet> {
        let mut s = self.universe.empty_set();
        for tok in text.split_whitespace().filter(|t| *t != "{}") {
            let e = self
                .universe
                .element(tok)
                .ok_or_else(|| Error::UnknownElement(tok.to_string()))?;
            if !self.ground.contains(e) {
                return Err(Error::ElementOutOfGround(tok.to_string()));
            }
            s.insert(e);
        }
        Ok(s)
    }

    pub fn format_set(&self, set: &ElementSet) -> String {
        self.universe.format_set(set)
    }

    /// Disjoint union of two bases over disjoint parts of one universe.
    pub fn disjoint_union(&self, other: &ImplicationBase) -> Result<ImplicationBase> {
        if self.universe != other.universe {
            return Err(Error::GroundMismatch);
        }
        if !self.ground.is_disjoint(&other.ground) {
            return Err(Error::GroundOverlap);
        }
        let mut implications = self.implications.clone();
        implications.extend(other.implications.iter().cloned());
        Ok(self.with_implications(self.ground.union(&other.ground), implications))
    }
}

impl fmt::Display for ImplicationBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .implications
            .iter()
            .map(|i| i.display(&self.universe).to_string())
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}
