//! Human- and machine-readable renderings of a policy.

mod explain;
mod pseudocode;
mod python;

pub use explain::{explain, render_explanation, ExplanationTrace, LeafValue, RuleTrace};
pub use pseudocode::{emit_pseudocode, render_condition, render_predicate};
pub use python::emit_executable;
