//! Elements, ground-set interning and set families.
//!
//! Every element of a ground set is interned into a dense index. Indices are
//! assigned in lexicographic order of the element tokens, so comparing index
//! lists is the same as comparing sorted token lists.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

/// Dense index of an element inside a [`Universe`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(pub u32);

impl Element {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Interning table shared by a base and all of its sub-bases.
#[derive(Debug, PartialEq, Eq)]
pub struct Universe {
    names: Vec<String>,
    lookup: HashMap<String, Element>,
}

impl Universe {
    /// Builds a universe from arbitrary tokens; duplicates are collapsed and
    /// indices follow lexicographic token order.
    pub fn new<I, S>(tokens: I) -> Arc<Universe>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = tokens.into_iter().map(Into::into).collect();
        names.sort();
        names.dedup();
        let lookup = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), Element(i as u32)))
            .collect();
        Arc::new(Universe { names, lookup })
    }

    /// Universe with tokens `"1"..="n"`.
    pub fn numbered(n: usize) -> Arc<Universe> {
        Universe::new((1..=n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, e: Element) -> &str {
        &self.names[e.index()]
    }

    pub fn element(&self, token: &str) -> Option<Element> {
        self.lookup.get(token).copied()
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.names.len()).map(|i| Element(i as u32))
    }

    pub fn empty_set(&self) -> ElementSet {
        ElementSet::empty(self.len())
    }

    pub fn full_set(&self) -> ElementSet {
        let mut s = ElementSet::empty(self.len());
        s.bits.insert_range(..);
        s
    }

    /// Parses whitespace-separated tokens into a set. `{}` denotes the empty set.
    pub fn parse_set(&self, text: &str) -> Option<ElementSet> {
        let mut s = self.empty_set();
        for tok in text.split_whitespace() {
            if tok == "{}" {
                continue;
            }
            s.insert(self.element(tok)?);
        }
        Some(s)
    }

    /// Sorted tokens joined by a single space; `{}` for the empty set.
    pub fn format_set(&self, set: &ElementSet) -> String {
        if set.is_empty() {
            return "{}".to_string();
        }
        let names: Vec<&str> = set.iter().map(|e| self.name(e)).collect();
        names.join(" ")
    }

    pub fn names_of(&self, set: &ElementSet) -> Vec<String> {
        set.iter().map(|e| self.name(e).to_string()).collect()
    }
}

/// A subset of a universe as a fixed-width bit vector.
///
/// All sets drawn from one universe share the same width. Ordering is
/// canonical: by cardinality first, then lexicographically on the sorted
/// element indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    bits: FixedBitSet,
}

impl ElementSet {
    pub fn empty(width: usize) -> ElementSet {
        ElementSet {
            bits: FixedBitSet::with_capacity(width),
        }
    }

    pub fn from_elements<I: IntoIterator<Item = Element>>(width: usize, elems: I) -> ElementSet {
        let mut s = ElementSet::empty(width);
        for e in elems {
            s.insert(e);
        }
        s
    }

    pub fn width(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn contains(&self, e: Element) -> bool {
        self.bits.contains(e.index())
    }

    #[inline]
    pub fn insert(&mut self, e: Element) -> bool {
        !self.bits.put(e.index())
    }

    #[inline]
    pub fn remove(&mut self, e: Element) {
        self.bits.set(e.index(), false);
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = Element> + '_ {
        self.bits.ones().map(|i| Element(i as u32))
    }

    pub fn min_element(&self) -> Option<Element> {
        self.bits.minimum().map(|i| Element(i as u32))
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_superset(&self, other: &ElementSet) -> bool {
        self.bits.is_superset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &ElementSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn contains_all(&self, elems: &[Element]) -> bool {
        elems.iter().all(|&e| self.contains(e))
    }

    pub fn union(&self, other: &ElementSet) -> ElementSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &ElementSet) -> ElementSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn union_with(&mut self, other: &ElementSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &ElementSet) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &ElementSet) {
        self.bits.difference_with(&other.bits);
    }

    pub fn to_vec(&self) -> Vec<Element> {
        self.iter().collect()
    }
}

impl Ord for ElementSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for ElementSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|e| e.0)).finish()
    }
}

/// A collection of sets over a shared universe.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SetFamily {
    sets: Vec<ElementSet>,
}

impl SetFamily {
    pub fn new() -> SetFamily {
        SetFamily { sets: Vec::new() }
    }

    /// Builds a family and puts it in canonical form (sorted, no duplicates).
    pub fn canonical<I: IntoIterator<Item = ElementSet>>(sets: I) -> SetFamily {
        let mut f = SetFamily {
            sets: sets.into_iter().collect(),
        };
        f.canonicalize();
        f
    }

    pub fn push(&mut self, s: ElementSet) {
        self.sets.push(s);
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ElementSet> {
        self.sets.iter()
    }

    pub fn as_slice(&self) -> &[ElementSet] {
        &self.sets
    }

    pub fn into_vec(self) -> Vec<ElementSet> {
        self.sets
    }

    pub fn contains(&self, s: &ElementSet) -> bool {
        self.sets.contains(s)
    }

    pub fn canonicalize(&mut self) {
        self.sets.sort();
        self.sets.dedup();
    }

    /// Inclusion-maximal members, canonical order.
    pub fn maximal(&self) -> SetFamily {
        let c = SetFamily::canonical(self.sets.iter().cloned());
        let kept = c
            .sets
            .iter()
            .filter(|s| !c.sets.iter().any(|t| t != *s && s.is_subset(t)))
            .cloned();
        SetFamily::canonical(kept)
    }

    /// Inclusion-minimal members, canonical order.
    pub fn minimal(&self) -> SetFamily {
        let c = SetFamily::canonical(self.sets.iter().cloned());
        let kept = c
            .sets
            .iter()
            .filter(|s| !c.sets.iter().any(|t| t != *s && t.is_subset(s)))
            .cloned();
        SetFamily::canonical(kept)
    }

    /// No two distinct members are comparable.
    pub fn is_antichain(&self) -> bool {
        self.sets.iter().enumerate().all(|(i, s)| {
            self.sets
                .iter()
                .enumerate()
                .all(|(j, t)| i == j || (s != t && !s.is_subset(t)))
        })
    }

    /// The trace `{S ∩ subset | S ∈ self}` with duplicates collapsed.
    pub fn trace(&self, subset: &ElementSet) -> SetFamily {
        SetFamily::canonical(self.sets.iter().map(|s| s.intersection(subset)))
    }

    /// Set equality regardless of order and multiplicity.
    pub fn same_members(&self, other: &SetFamily) -> bool {
        SetFamily::canonical(self.sets.iter().cloned())
            == SetFamily::canonical(other.sets.iter().cloned())
    }

    pub fn format(&self, universe: &Universe) -> Vec<String> {
        self.sets.iter().map(|s| universe.format_set(s)).collect()
    }
}

impl FromIterator<ElementSet> for SetFamily {
    fn from_iter<I: IntoIterator<Item = ElementSet>>(iter: I) -> Self {
        SetFamily {
            sets: iter.into_iter().collect(),
        }
    }
}

impl IntoIterator for SetFamily {
    type Item = ElementSet;
    type IntoIter = std::vec::IntoIter<ElementSet>;

    fn into_iter(self) -> Self::IntoIter {
        self.sets.into_iter()
    }
}

impl<'a> IntoIterator for &'a SetFamily {
    type Item = &'a ElementSet;
    type IntoIter = std::slice::Iter<'a, ElementSet>;

    fn into_iter(self) -> Self::IntoIter {
        self.sets.iter()
    }
}
