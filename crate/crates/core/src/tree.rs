//! Decomposition trees: strict (every leaf an element), with H-factor leaves,
//! and with acyclic splits only.
//!
//! Trees live in an arena. Children are always allocated after their parent,
//! so iterating node ids backwards visits every child before its parent.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::base::{Implication, ImplicationBase};
use crate::error::{Error, Result};
use crate::set::{Element, ElementSet, Universe};
use crate::split::{acyclic_split_report, premise_components, ComponentPartition};

pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeMode {
    /// Fails on premise-connected sub-bases.
    Strict,
    /// Premise-connected sub-bases become factor leaves.
    HFactor,
    /// Acyclic splits only; sub-bases without one become factor leaves.
    Acyclic,
}

impl TreeMode {
    pub fn name(self) -> &'static str {
        match self {
            TreeMode::Strict => "strict",
            TreeMode::HFactor => "hfactor",
            TreeMode::Acyclic => "acyclic",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    /// `children[0]` holds `u1`, `children[1]` holds `u2`.
    Interior {
        u1: ElementSet,
        u2: ElementSet,
        label: Vec<Implication>,
        acyclic: bool,
        children: [NodeId; 2],
    },
    Element(Element),
    Factor(ImplicationBase),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionTree {
    universe: Arc<Universe>,
    mode: TreeMode,
    nodes: Vec<Node>,
    root: Option<NodeId>,
}

impl DecompositionTree {
    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn mode(&self) -> TreeMode {
        self.mode
    }

    pub fn root(&self) -> Option<NodeId> {
        self.root
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// The tree of an empty ground set.
    pub fn is_empty(&self) -> bool {
        self.root.is_none()
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| !matches!(n, Node::Interior { .. })).count()
    }

    pub fn height(&self) -> usize {
        let mut h = vec![0usize; self.nodes.len()];
        for id in (0..self.nodes.len()).rev() {
            if let Node::Interior { children, .. } = &self.nodes[id] {
                h[id] = 1 + h[children[0]].max(h[children[1]]);
            }
        }
        self.root.map_or(0, |r| h[r])
    }

    /// Ids reachable from the root, parents before children.
    pub fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack: Vec<NodeId> = self.root.into_iter().collect();
        while let Some(id) = stack.pop() {
            out.push(id);
            if let Node::Interior { children, .. } = &self.nodes[id] {
                stack.push(children[1]);
                stack.push(children[0]);
            }
        }
        out
    }

    /// Factor leaf labels, normalized and sorted.
    pub fn h_factors(&self) -> Vec<ImplicationBase> {
        let mut out: Vec<ImplicationBase> = self
            .nodes
            .iter()
            .filter_map(|n| match n {
                Node::Factor(b) => Some(b.normalize()),
                _ => None,
            })
            .collect();
        out.sort_by(|a, b| (a.ground(), a.implications()).cmp(&(b.ground(), b.implications())));
        out
    }

    /// Indented text rendering, one node per line.
    pub fn render(&self) -> String {
        if self.root.is_none() {
            return "EMPTY\n".into();
        }
        let u = &self.universe;
        let mut out = String::new();
        let mut stack = vec![(self.root.unwrap(), 0usize)];
        while let Some((id, depth)) = stack.pop() {
            let pad = "  ".repeat(depth);
            match &self.nodes[id] {
                Node::Interior {
                    u1,
                    u2,
                    label,
                    acyclic,
                    children,
                } => {
                    let label: Vec<String> = label.iter().map(|i| i.display(u).to_string()).collect();
                    let arrow = if *acyclic { "=>" } else { "|" };
                    let _ = writeln!(
                        out,
                        "{pad}split {{{}}} {arrow} {{{}}} [{}]",
                        u.format_set(u1),
                        u.format_set(u2),
                        label.join(", ")
                    );
                    stack.push((children[1], depth + 1));
                    stack.push((children[0], depth + 1));
                }
                Node::Element(e) => {
                    let _ = writeln!(out, "{pad}leaf {}", u.name(*e));
                }
                Node::Factor(b) => {
                    let imps: Vec<String> = b.implications().iter().map(|i| i.display(u).to_string()).collect();
                    let _ = writeln!(out, "{pad}factor {{{}}} [{}]", u.format_set(b.ground()), imps.join(", "));
                }
            }
        }
        out
    }

    /// Elements under each node, indexed by node id.
    fn leaf_sets(&self) -> Vec<ElementSet> {
        let mut sets = vec![self.universe.empty_set(); self.nodes.len()];
        for id in (0..self.nodes.len()).rev() {
            sets[id] = match &self.nodes[id] {
                Node::Interior { children, .. } => sets[children[0]].union(&sets[children[1]]),
                Node::Element(e) => ElementSet::from_elements(self.universe.len(), [*e]),
                Node::Factor(b) => b.ground().clone(),
            };
        }
        sets
    }
}

/// Builds a tree whose leaves are all elements; `None` when the base is not
/// H-decomposable.
pub fn build_tree(base: &ImplicationBase) -> Option<DecompositionTree> {
    build_tree_with(base, |_| 0)
}

/// [`build_tree`] with a caller-chosen component at every step. The chooser
/// returns an index into the partition's blocks.
pub fn build_tree_with(
    base: &ImplicationBase,
    mut chooser: impl FnMut(&ComponentPartition) -> usize,
) -> Option<DecompositionTree> {
    build(base, TreeMode::Strict, &mut chooser)
}

pub fn h_build_tree(base: &ImplicationBase) -> DecompositionTree {
    h_build_tree_with(base, |_| 0)
}

pub fn h_build_tree_with(
    base: &ImplicationBase,
    mut chooser: impl FnMut(&ComponentPartition) -> usize,
) -> DecompositionTree {
    build(base, TreeMode::HFactor, &mut chooser).expect("factor trees never fail")
}

pub fn build_acyclic_tree(base: &ImplicationBase) -> DecompositionTree {
    build(base, TreeMode::Acyclic, &mut |_| 0).expect("acyclic trees never fail")
}

struct Split {
    u1: ElementSet,
    u2: ElementSet,
    label: Vec<Implication>,
    left: ImplicationBase,
    right: ImplicationBase,
    acyclic: bool,
}

fn component_split(
    sub: &ImplicationBase,
    chooser: &mut dyn FnMut(&ComponentPartition) -> usize,
) -> Option<Split> {
    let parts = premise_components(sub);
    if parts.len() < 2 {
        return None;
    }
    let pick = chooser(&parts).min(parts.len() - 1);
    let u1 = parts.block(pick);
    let u2 = sub.ground().difference(&u1);
    let cross = sub.bipartite_part(&u1, &u2).expect("component cut is a split");
    Some(Split {
        label: cross.implications().to_vec(),
        left: sub.restrict_unchecked(&u1),
        right: sub.restrict_unchecked(&u2),
        u1,
        u2,
        acyclic: false,
    })
}

fn acyclic_split(sub: &ImplicationBase) -> Option<Split> {
    let report = acyclic_split_report(sub)?;
    let parts = report.parts?;
    Some(Split {
        u1: report.u1,
        u2: report.u2,
        label: parts.cross.implications().to_vec(),
        left: parts.left,
        right: parts.right,
        acyclic: true,
    })
}

fn build(
    base: &ImplicationBase,
    mode: TreeMode,
    chooser: &mut dyn FnMut(&ComponentPartition) -> usize,
) -> Option<DecompositionTree> {
    let universe = Arc::clone(base.universe());
    let root_base = base.with_implications(base.ground().clone(), base.unit_set());
    if root_base.ground().is_empty() {
        return Some(DecompositionTree {
            universe,
            mode,
            nodes: Vec::new(),
            root: None,
        });
    }
    let mut slots: Vec<Option<Node>> = vec![None];
    let mut work = vec![(0usize, root_base)];
    while let Some((slot, sub)) = work.pop() {
        if sub.ground().len() == 1 {
            slots[slot] = Some(Node::Element(sub.ground().min_element().unwrap()));
            continue;
        }
        let split = match mode {
            TreeMode::Acyclic => acyclic_split(&sub),
            _ => component_split(&sub, chooser),
        };
        let Some(split) = split else {
            if mode == TreeMode::Strict {
                return None;
            }
            slots[slot] = Some(Node::Factor(sub));
            continue;
        };
        let children = [slots.len(), slots.len() + 1];
        slots.push(None);
        slots.push(None);
        work.push((children[0], split.left));
        work.push((children[1], split.right));
        slots[slot] = Some(Node::Interior {
            u1: split.u1,
            u2: split.u2,
            label: split.label,
            acyclic: split.acyclic,
            children,
        });
    }
    Some(DecompositionTree {
        universe,
        mode,
        nodes: slots.into_iter().map(|n| n.expect("every slot filled")).collect(),
        root: Some(0),
    })
}

/// First violated condition of a tree against a base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeViolation {
    /// Malformed arena: unreachable or shared nodes, wrong split sides, a
    /// tree whose ground differs from the base.
    Structure(String),
    /// A leaf that is neither an element nor an allowed factor.
    Condition1(String),
    /// An interior label that is not a set of implications of the base.
    Condition2(String),
    /// A label implication not separated by its node.
    Condition3(String),
    /// Labels do not partition the elements and implications.
    Condition4(String),
    /// A cross implication of an acyclic node with its premise on the `u2` side.
    Orientation(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeCheck {
    pub violation: Option<TreeViolation>,
}

impl TreeCheck {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

pub fn validate_tree(base: &ImplicationBase, tree: &DecompositionTree) -> TreeCheck {
    TreeCheck {
        violation: check(base, tree).err(),
    }
}

fn check(base: &ImplicationBase, tree: &DecompositionTree) -> std::result::Result<(), TreeViolation> {
    use TreeViolation::*;
    let u = base.universe();
    if tree.universe.names_of(&tree.universe.full_set()) != u.names_of(&u.full_set()) {
        return Err(Structure("tree and base use different universes".into()));
    }
    let units = base.unit_set();
    let Some(root) = tree.root else {
        return if base.ground().is_empty() && units.is_empty() {
            Ok(())
        } else {
            Err(Condition4("empty tree for a non-empty base".into()))
        };
    };

    let mut seen = vec![false; tree.nodes.len()];
    let mut stack = vec![root];
    while let Some(id) = stack.pop() {
        if id >= tree.nodes.len() || seen[id] {
            return Err(Structure(format!("node {id} is missing or shared")));
        }
        seen[id] = true;
        if let Node::Interior { children, .. } = &tree.nodes[id] {
            if children.iter().any(|&c| c <= id) {
                return Err(Structure(format!("node {id} has a child allocated before it")));
            }
            stack.extend(children);
        }
    }
    if let Some(id) = seen.iter().position(|s| !s) {
        return Err(Structure(format!("node {id} is unreachable")));
    }
    let leaves = tree.leaf_sets();

    let mut element_count = vec![0usize; u.len()];
    let mut used: BTreeMap<&Implication, usize> = BTreeMap::new();
    let unit_index: BTreeMap<&Implication, ()> = units.iter().map(|i| (i, ())).collect();
    let mut factor_units: Vec<Vec<Implication>> = Vec::new();

    for (id, node) in tree.nodes.iter().enumerate() {
        match node {
            Node::Element(e) => {
                if !base.ground().contains(*e) {
                    return Err(Condition1(format!("leaf {} is outside the ground set", u.name(*e))));
                }
                element_count[e.index()] += 1;
            }
            Node::Factor(f) => {
                if tree.mode == TreeMode::Strict {
                    return Err(Condition1(format!("factor leaf at node {id} in a strict tree")));
                }
                if f.ground().is_empty() || !f.ground().is_subset(base.ground()) {
                    return Err(Condition1(format!("factor leaf at node {id} has a bad ground set")));
                }
                for e in f.ground().iter() {
                    element_count[e.index()] += 1;
                }
                factor_units.push(f.unit_set());
            }
            Node::Interior {
                u1,
                u2,
                label,
                acyclic,
                children,
            } => {
                let (l0, l1) = (&leaves[children[0]], &leaves[children[1]]);
                if l0 != u1 || l1 != u2 {
                    return Err(Structure(format!("node {id} records sides that differ from its leaves")));
                }
                for imp in label {
                    if !imp.is_unit() || !unit_index.contains_key(imp) {
                        return Err(Condition2(format!(
                            "{} at node {id} is not an implication of the base",
                            imp.display(u)
                        )));
                    }
                    let forward = imp.premise_within(l0) && l1.contains(imp.head());
                    let backward = imp.premise_within(l1) && l0.contains(imp.head());
                    if !forward && !backward {
                        return Err(Condition3(format!("{} is not separated at node {id}", imp.display(u))));
                    }
                    if *acyclic && !forward {
                        return Err(Orientation(format!("{} runs from u2 to u1 at node {id}", imp.display(u))));
                    }
                    *used.entry(imp).or_default() += 1;
                }
            }
        }
    }
    for imps in &factor_units {
        for imp in imps {
            if !unit_index.contains_key(imp) {
                return Err(Condition4(format!("factor implication {} is not in the base", imp.display(u))));
            }
            *used.entry(imp).or_default() += 1;
        }
    }
    for e in base.ground().iter() {
        if element_count[e.index()] != 1 {
            return Err(Condition4(format!(
                "element {} labels {} leaves",
                u.name(e),
                element_count[e.index()]
            )));
        }
    }
    if &leaves[root] != base.ground() {
        return Err(Structure("leaves do not cover the ground set".into()));
    }
    for imp in &units {
        let n = used.get(imp).copied().unwrap_or(0);
        if n != 1 {
            return Err(Condition4(format!("{} labels {n} nodes", imp.display(u))));
        }
    }
    Ok(())
}

fn names(u: &Universe, elems: impl IntoIterator<Item = Element>) -> Vec<String> {
    elems.into_iter().map(|e| u.name(e).to_string()).collect()
}

fn imp_json(u: &Universe, imp: &Implication) -> Value {
    json!({
        "premise": names(u, imp.premise().iter().copied()),
        "conclusion": names(u, imp.conclusion().iter().copied()),
    })
}

impl DecompositionTree {
    /// JSON document: the root node, or `null` for the empty tree.
    pub fn to_json(&self) -> Value {
        let Some(root) = self.root else {
            return Value::Null;
        };
        let u = &self.universe;
        let mut built: Vec<Option<Value>> = vec![None; self.nodes.len()];
        for id in (0..self.nodes.len()).rev() {
            let v = match &self.nodes[id] {
                Node::Element(e) => json!({ "element": u.name(*e) }),
                Node::Factor(b) => json!({
                    "factor": {
                        "ground": u.names_of(b.ground()),
                        "implications": b.implications().iter().map(|i| imp_json(u, i)).collect::<Vec<_>>(),
                    }
                }),
                Node::Interior {
                    u1,
                    u2,
                    label,
                    acyclic,
                    children,
                } => {
                    let left = built[children[0]].take().unwrap_or(Value::Null);
                    let right = built[children[1]].take().unwrap_or(Value::Null);
                    json!({
                        "split": { "u1": u.names_of(u1), "u2": u.names_of(u2) },
                        "implications": label.iter().map(|i| imp_json(u, i)).collect::<Vec<_>>(),
                        "children": [left, right],
                        "acyclic": acyclic,
                    })
                }
            };
            built[id] = Some(v);
        }
        built[root].take().unwrap_or(Value::Null)
    }

    /// Reads a tree written by [`DecompositionTree::to_json`], resolving
    /// tokens against `base`'s universe. The mode is inferred: acyclic if any
    /// node is marked acyclic, factor if any factor leaf occurs, else strict.
    pub fn from_json(base: &ImplicationBase, value: &Value) -> Result<DecompositionTree> {
        let universe = Arc::clone(base.universe());
        let mut tree = DecompositionTree {
            universe,
            mode: TreeMode::Strict,
            nodes: Vec::new(),
            root: None,
        };
        if value.is_null() {
            return Ok(tree);
        }
        let mut pending: Vec<(NodeId, &Value)> = vec![(0, value)];
        let mut slots: Vec<Option<Node>> = vec![None];
        let (mut any_factor, mut any_acyclic) = (false, false);
        while let Some((slot, v)) = pending.pop() {
            let node = if let Some(tok) = v.get("element") {
                Node::Element(token(base, tok)?)
            } else if let Some(f) = v.get("factor") {
                any_factor = true;
                let ground = token_set(base, field(f, "ground")?)?;
                let imps = implications(base, field(f, "implications")?)?;
                Node::Factor(ImplicationBase::new(Arc::clone(base.universe()), ground, imps)?)
            } else if let Some(split) = v.get("split") {
                let acyclic = v.get("acyclic").and_then(Value::as_bool).unwrap_or(false);
                any_acyclic |= acyclic;
                let kids = field(v, "children")?
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| Error::Tree("interior node needs two children".into()))?;
                let children = [slots.len(), slots.len() + 1];
                slots.push(None);
                slots.push(None);
                pending.push((children[0], &kids[0]));
                pending.push((children[1], &kids[1]));
                let label = match v.get("implications") {
                    Some(list) => implications(base, list)?,
                    None => Vec::new(),
                };
                Node::Interior {
                    u1: token_set(base, field(split, "u1")?)?,
                    u2: token_set(base, field(split, "u2")?)?,
                    label,
                    acyclic,
                    children,
                }
            } else {
                return Err(Error::Tree(format!("unrecognized node {v}")));
            };
            slots[slot] = Some(node);
        }
        tree.nodes = slots.into_iter().map(|n| n.expect("filled")).collect();
        tree.root = Some(0);
        tree.mode = if any_acyclic {
            TreeMode::Acyclic
        } else if any_factor {
            TreeMode::HFactor
        } else {
            TreeMode::Strict
        };
        Ok(tree)
    }
}

fn field<'v>(v: &'v Value, key: &str) -> Result<&'v Value> {
    v.get(key).ok_or_else(|| Error::Tree(format!("missing field `{key}`")))
}

fn token(base: &ImplicationBase, v: &Value) -> Result<Element> {
    let s = v.as_str().ok_or_else(|| Error::Tree(format!("expected a token, got {v}")))?;
    base.universe()
        .element(s)
        .ok_or_else(|| Error::UnknownElement(s.to_string()))
}

fn tokens(base: &ImplicationBase, v: &Value) -> Result<Vec<Element>> {
    v.as_array()
        .ok_or_else(|| Error::Tree(format!("expected a token list, got {v}")))?
        .iter()
        .map(|t| token(base, t))
        .collect()
}

fn token_set(base: &ImplicationBase, v: &Value) -> Result<ElementSet> {
    Ok(ElementSet::from_elements(base.universe().len(), tokens(base, v)?))
}

fn implications(base: &ImplicationBase, v: &Value) -> Result<Vec<Implication>> {
    v.as_array()
        .ok_or_else(|| Error::Tree("expected a list of implications".into()))?
        .iter()
        .map(|i| {
            Ok(Implication::new(
                tokens(base, field(i, "premise")?)?,
                tokens(base, field(i, "conclusion")?)?,
            ))
        })
        .collect()
}
