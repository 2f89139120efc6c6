//! Benchmark generators and the CSV results emitter.

mod gen;
mod suite;

pub use gen::{
    gen_appendix_arena, gen_fairness, gen_random_game, gen_random_mdp, ArenaBundle, GenError,
};
pub use suite::{rows_to_csv, run_suite, BenchRow, Suite, SuiteError, CSV_HEADER};
