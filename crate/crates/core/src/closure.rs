//! Forward chaining, model checking and base equivalence.

use crate::base::ImplicationBase;
use crate::error::{Error, Result};
use crate::set::ElementSet;

/// A set closed under `witness`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedSet<'a> {
    pub elements: ElementSet,
    pub witness: &'a ImplicationBase,
}

/// Forward chaining with one pending-premise counter per implication.
///
/// The watch lists are built once per base; each call only allocates its own
/// counters, so one engine can serve many closure calls.
#[derive(Debug)]
pub struct ClosureEngine<'a> {
    base: &'a ImplicationBase,
    watchers: Vec<Vec<u32>>,
    premise_len: Vec<u32>,
}

impl<'a> ClosureEngine<'a> {
    pub fn new(base: &'a ImplicationBase) -> ClosureEngine<'a> {
        let mut watchers = vec![Vec::new(); base.universe().len()];
        let mut premise_len = Vec::with_capacity(base.len());
        for (i, imp) in base.implications().iter().enumerate() {
            premise_len.push(imp.premise().len() as u32);
            for &e in imp.premise() {
                watchers[e.index()].push(i as u32);
            }
        }
        ClosureEngine {
            base,
            watchers,
            premise_len,
        }
    }

    pub fn base(&self) -> &'a ImplicationBase {
        self.base
    }

    /// Closure of a seed already known to lie in the ground set.
    pub fn close(&self, seed: &ElementSet) -> ElementSet {
        let implications = self.base.implications();
        let mut pending = self.premise_len.clone();
        let mut result = seed.clone();
        let mut queue: Vec<_> = seed.iter().collect();
        while let Some(e) = queue.pop() {
            for &i in &self.watchers[e.index()] {
                let slot = &mut pending[i as usize];
                *slot -= 1;
                if *slot == 0 {
                    for &c in implications[i as usize].conclusion() {
                        if result.insert(c) {
                            queue.push(c);
                        }
                    }
                }
            }
        }
        result
    }

    pub fn closure(&self, seed: &ElementSet) -> Result<ElementSet> {
        check_seed(self.base, seed)?;
        Ok(self.close(seed))
    }

    pub fn is_closed(&self, x: &ElementSet) -> bool {
        self.base.implications().iter().all(|imp| {
            !imp.premise_within(x) || x.contains_all(imp.conclusion())
        })
    }
}

fn check_seed(base: &ImplicationBase, seed: &ElementSet) -> Result<()> {
    match seed.difference(base.ground()).min_element() {
        Some(e) => Err(Error::ElementOutOfGround(base.universe().name(e).to_string())),
        None => Ok(()),
    }
}

pub fn closure<'a>(base: &'a ImplicationBase, seed: &ElementSet) -> Result<ClosedSet<'a>> {
    let elements = ClosureEngine::new(base).closure(seed)?;
    Ok(ClosedSet {
        elements,
        witness: base,
    })
}

/// Whether `x` satisfies every implication of `base`.
pub fn is_model(base: &ImplicationBase, x: &ElementSet) -> Result<bool> {
    check_seed(base, x)?;
    Ok(base
        .implications()
        .iter()
        .all(|imp| !imp.premise_within(x) || x.contains_all(imp.conclusion())))
}

/// Two bases over the same ground set describing the same closure system.
pub fn equivalent(b1: &ImplicationBase, b2: &ImplicationBase) -> Result<bool> {
    if b1.universe() != b2.universe() && b1.ground_names() != b2.ground_names() {
        return Err(Error::GroundMismatch);
    }
    if b1.universe() != b2.universe() {
        // Same tokens, different interning: compare through the textual form.
        let b2 = crate::text::parse_base(&crate::text::serialize_base(b2))?;
        let b1 = crate::text::parse_base(&crate::text::serialize_base(b1))?;
        return equivalent(&b1, &b2);
    }
    if b1.ground() != b2.ground() {
        return Err(Error::GroundMismatch);
    }
    let entails = |from: &ImplicationBase, to: &ImplicationBase| {
        let engine = ClosureEngine::new(from);
        to.implications().iter().all(|imp| {
            let premise = ElementSet::from_elements(from.universe().len(), imp.premise().iter().copied());
            engine.close(&premise).contains_all(imp.conclusion())
        })
    };
    Ok(entails(b2, b1) && entails(b1, b2))
}
