//! Verification toolkit for the (F,G)-fragment of linear temporal logic.
//!
//! The pipeline has three stages:
//!
//! 1. [`ltl`] — formulas, parsing, canonicalization and an exact evaluator
//!    for ultimately periodic (lasso) words,
//! 2. [`automata`] — translation of a formula into a deterministic automaton
//!    whose acceptance condition is a disjunction of generalized Rabin pairs
//!    (DGRW), plus degeneralization into a plain Rabin automaton,
//! 3. [`mdp`] / [`games`] — model checking of explicit-state Markov decision
//!    processes and solving of two-player games against such conditions.
//!
//! [`bench`] holds the benchmark generators and the CSV emitter used by the
//! command-line frontend.

pub mod automata;
pub mod bench;
pub mod games;
pub mod ltl;
pub mod mdp;
pub mod util;

pub use ltl::{canonicalize, eval_lasso, fg_subformulas, parse, Formula, LassoWord, Letter};
