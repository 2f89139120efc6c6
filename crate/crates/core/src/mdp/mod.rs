//! Explicit-state Markov decision processes: model and text format, maximal
//! end components, product with a deterministic automaton, maximal
//! reachability, and the model-checking pipeline.

mod mc;
mod mec;
mod model;
mod product;
mod reach;

pub use mc::{model_check, model_check_with, solve_product, winning_union, McError, McMode, McOutcome, McValue};
pub use mec::{mec_decomposition, mec_decomposition_masked};
pub use model::{parse_mdp, write_mdp, Mdp, MdpError, Rational, VertexKind};
pub use product::{product, product_rabin, ProductMdp};
pub use reach::{max_reach, rational_to_f64, ReachMode, ReachValues};
