//! Brute-force ground truth over the full closure system.
//!
//! Everything here is exponential in the worst case. Enumeration walks the
//! closed sets in lectic order (NextClosure), so its cost follows the number
//! of closed sets rather than `2^|U|`; a plain subset filter is kept as a
//! second, independent route for small ground sets.

use std::sync::Arc;

use crate::base::ImplicationBase;
use crate::closure::ClosureEngine;
use crate::error::{Error, Result};
use crate::set::{Element, ElementSet, SetFamily, Universe};

/// Default cap on closure evaluations for one oracle call.
pub const DEFAULT_BUDGET: u64 = 1 << 25;

/// Largest ground set the subset filter accepts.
pub const BRUTE_FORCE_MAX: usize = 20;

/// All closed sets of a base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureSystem {
    universe: Arc<Universe>,
    ground: ElementSet,
    closed_sets: SetFamily,
}

impl ClosureSystem {
    /// Wraps a family that the caller knows to be a closure system over `ground`.
    pub fn from_family(universe: Arc<Universe>, ground: ElementSet, closed_sets: SetFamily) -> ClosureSystem {
        ClosureSystem {
            universe,
            ground,
            closed_sets,
        }
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn ground(&self) -> &ElementSet {
        &self.ground
    }

    pub fn closed_sets(&self) -> &SetFamily {
        &self.closed_sets
    }

    pub fn len(&self) -> usize {
        self.closed_sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.closed_sets.is_empty()
    }

    pub fn contains(&self, c: &ElementSet) -> bool {
        self.closed_sets.contains(c)
    }

    fn require(&self, c: &ElementSet) -> Result<()> {
        if self.contains(c) {
            Ok(())
        } else {
            Err(Error::NotClosed(self.universe.format_set(c)))
        }
    }

    /// Closed subsets of `c`.
    pub fn ideal_of(&self, c: &ElementSet) -> Result<SetFamily> {
        self.require(c)?;
        Ok(SetFamily::canonical(self.closed_sets.iter().filter(|s| s.is_subset(c)).cloned()))
    }

    /// Closed supersets of `c`.
    pub fn filter_of(&self, c: &ElementSet) -> Result<SetFamily> {
        self.require(c)?;
        Ok(SetFamily::canonical(self.closed_sets.iter().filter(|s| c.is_subset(s)).cloned()))
    }

    /// Minimal closed strict supersets of `c`.
    pub fn covers_of(&self, c: &ElementSet) -> Result<SetFamily> {
        self.require(c)?;
        let above = SetFamily::canonical(
            self.closed_sets
                .iter()
                .filter(|s| *s != c && c.is_subset(s))
                .cloned(),
        );
        Ok(above.minimal())
    }

    /// Closed sets with exactly one upper cover, read off the family alone.
    pub fn meet_irreducibles(&self) -> SetFamily {
        SetFamily::canonical(
            self.closed_sets
                .iter()
                .filter(|c| self.covers_of(c).map(|f| f.len() == 1).unwrap_or(false))
                .cloned(),
        )
    }

    /// Every intersection of a subfamily equals a member, and the ground set is a member.
    pub fn is_intersection_closed(&self) -> bool {
        let sets = self.closed_sets.as_slice();
        self.contains(&self.ground)
            && sets
                .iter()
                .all(|a| sets.iter().all(|b| self.contains(&a.intersection(b))))
    }

    pub fn sorted(&self) -> SetFamily {
        SetFamily::canonical(self.closed_sets.iter().cloned())
    }
}

struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    fn new(limit: u64) -> Budget {
        Budget { limit, used: 0 }
    }

    fn spend(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(Error::BudgetExceeded { budget: self.limit })
        } else {
            Ok(())
        }
    }
}

/// Closed sets in lectic order, with the default budget.
pub fn enumerate_closed_sets(base: &ImplicationBase) -> Result<ClosureSystem> {
    enumerate_closed_sets_with(base, DEFAULT_BUDGET)
}

pub fn enumerate_closed_sets_with(base: &ImplicationBase, budget: u64) -> Result<ClosureSystem> {
    let engine = ClosureEngine::new(base);
    let mut budget = Budget::new(budget);
    let order: Vec<Element> = base.ground().iter().collect();
    let width = base.universe().len();

    let mut family = SetFamily::new();
    budget.spend()?;
    let mut current = engine.close(&ElementSet::empty(width));
    family.push(current.clone());

    'outer: while current != *base.ground() {
        for pos in (0..order.len()).rev() {
            let e = order[pos];
            if current.contains(e) {
                continue;
            }
            let mut seed = ElementSet::from_elements(width, order[..pos].iter().copied().filter(|&x| current.contains(x)));
            let prefix = seed.clone();
            seed.insert(e);
            budget.spend()?;
            let next = engine.close(&seed);
            let next_prefix = ElementSet::from_elements(width, order[..pos].iter().copied().filter(|&x| next.contains(x)));
            if next_prefix == prefix {
                family.push(next.clone());
                current = next;
                continue 'outer;
            }
        }
        unreachable!("lectic successor always exists below the ground set");
    }

    Ok(ClosureSystem {
        universe: Arc::clone(base.universe()),
        ground: base.ground().clone(),
        closed_sets: family,
    })
}

/// Filters all `2^|U|` subsets through the model check. Independent of the
/// closure engine; only for `|U| <= 20`.
pub fn enumerate_closed_sets_brute(base: &ImplicationBase) -> Result<ClosureSystem> {
    let order: Vec<Element> = base.ground().iter().collect();
    if order.len() > BRUTE_FORCE_MAX {
        return Err(Error::BudgetExceeded {
            budget: 1u64 << BRUTE_FORCE_MAX,
        });
    }
    let width = base.universe().len();
    let mut family = SetFamily::new();
    for mask in 0u64..(1u64 << order.len()) {
        let x = ElementSet::from_elements(
            width,
            order.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e),
        );
        let model = base
            .implications()
            .iter()
            .all(|imp| !imp.premise().iter().all(|&p| x.contains(p)) || imp.conclusion().iter().all(|&c| x.contains(c)));
        if model {
            family.push(x);
        }
    }
    family.canonicalize();
    Ok(ClosureSystem {
        universe: Arc::clone(base.universe()),
        ground: base.ground().clone(),
        closed_sets: family,
    })
}

pub fn meet_irreducibles_oracle(base: &ImplicationBase) -> Result<SetFamily> {
    meet_irreducibles_oracle_with(base, DEFAULT_BUDGET)
}

/// Closed sets with a unique upper cover. Covers are found as the minimal
/// sets among `cl(C ∪ {u})`, `u ∉ C`.
pub fn meet_irreducibles_oracle_with(base: &ImplicationBase, budget: u64) -> Result<SetFamily> {
    let system = enumerate_closed_sets_with(base, budget)?;
    let engine = ClosureEngine::new(base);
    let mut spent = Budget::new(budget);
    spent.used = system.len() as u64;
    let mut meets = SetFamily::new();
    for c in system.closed_sets() {
        if c == base.ground() {
            continue;
        }
        let mut candidates = SetFamily::new();
        for u in base.ground().difference(c).iter() {
            spent.spend()?;
            let mut seed = c.clone();
            seed.insert(u);
            candidates.push(engine.close(&seed));
        }
        if candidates.minimal().len() == 1 {
            meets.push(c.clone());
        }
    }
    meets.canonicalize();
    Ok(meets)
}

/// `{C closed | C ∩ u2 = c2}` for a closed `u2` and a closed `c2 ⊆ u2`.
pub fn extensions_oracle(base: &ImplicationBase, c2: &ElementSet, u2: &ElementSet) -> Result<SetFamily> {
    let engine = ClosureEngine::new(base);
    for s in [u2, c2] {
        if &engine.closure(s)? != s {
            return Err(Error::NotClosed(base.format_set(s)));
        }
    }
    if !c2.is_subset(u2) {
        return Err(Error::InconsistentInput(format!(
            "`{}` is not inside `{}`",
            base.format_set(c2),
            base.format_set(u2)
        )));
    }
    let system = enumerate_closed_sets(base)?;
    Ok(SetFamily::canonical(
        system
            .closed_sets()
            .iter()
            .filter(|c| &c.intersection(u2) == c2)
            .cloned(),
    ))
}

/// `{C1 ∪ C2}` over two closure systems on disjoint ground sets.
pub fn direct_product(cs1: &ClosureSystem, cs2: &ClosureSystem) -> Result<ClosureSystem> {
    if cs1.universe != cs2.universe {
        return Err(Error::GroundMismatch);
    }
    if !cs1.ground.is_disjoint(&cs2.ground) {
        return Err(Error::GroundOverlap);
    }
    let product = cs1
        .closed_sets
        .iter()
        .flat_map(|a| cs2.closed_sets.iter().map(move |b| a.union(b)))
        .collect::<SetFamily>();
    Ok(ClosureSystem {
        universe: Arc::clone(&cs1.universe),
        ground: cs1.ground.union(&cs2.ground),
        closed_sets: SetFamily::canonical(product),
    })
}
