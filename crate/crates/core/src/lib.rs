//! Closure systems given by implicational bases, split decompositions, and
//! meet-irreducible computation by combining the parts of acyclic splits.

pub mod base;
pub mod ccm;
pub mod closure;
pub mod dual;
pub mod error;
pub mod generate;
pub mod harness;
pub mod oracle;
pub mod set;
pub mod split;
pub mod text;
pub mod tree;

pub use base::{Implication, ImplicationBase};
pub use closure::{closure, equivalent, is_model, ClosedSet, ClosureEngine};
pub use error::{Error, Result};
pub use oracle::{enumerate_closed_sets, meet_irreducibles_oracle, ClosureSystem};
pub use set::{Element, ElementSet, SetFamily, Universe};
pub use split::{find_acyclic_split, find_split, is_split, premise_components, SplitKind, SplitReport};
pub use text::{parse_base, serialize_base};
pub use tree::{build_acyclic_tree, build_tree, h_build_tree, validate_tree, DecompositionTree, Node, TreeMode};
pub use ccm::{ccm, ccm_with, combine_meets, detect_layering, max_ext, CcmOptions, MeetSet, Provenance, Strategy};
pub use dual::{ldual, min_transversals, negative_border, verify_dual, Border, Hypergraph};
pub use generate::{exponential_example, generate, GenMode, GeneratorSpec};
