//! LTL(F,G) formulas: syntax tree, parser, canonicalization and the exact
//! lasso-word evaluator used as the correctness oracle by the other modules.
//!
//! Formulas are immutable after construction and safe to share across
//! threads; all operations here are pure.

mod canonical;
mod formula;
mod lasso;
mod parse;

pub use canonical::{canon_var_count, canonicalize, CanonCtx, MAX_CANON_VARS};
pub use formula::{fg_subformulas, Formula, Node};
pub use lasso::{eval_lasso, LassoWord, Letter};
pub use parse::{parse, parse_any_atoms, LtlError};
