//! Translation of LTL(F,G) into deterministic automata with generalized
//! Rabin pairs, degeneralization into Rabin automata, and the bounded
//! language-equivalence gate.

mod build;
mod degen;
mod equiv;
mod format;
mod progress;
mod run;
mod types;

pub use build::{build_dgrw, build_dgrw_with, TranslateError, TranslateOptions};
pub use degen::{degeneralization_index, degeneralize, degeneralize_with};
pub use equiv::{
    check_equiv_acceptor, check_equiv_bounded, check_equiv_bounded_rabin, EquivVerdict,
    LassoAcceptor,
};
pub use format::{parse_dgrw, parse_drw, write_dgrw, write_drw, FormatError};
pub use progress::{progress, step_raw, Progressor};
pub use run::{accepts_lasso, accepts_lasso_rabin, inf_set};
pub use types::{
    Alphabet, DgrwAutomaton, DgrwState, GrpCondition, GrpPair, RabinAutomaton, RabinPair,
    WaitingVector,
};
