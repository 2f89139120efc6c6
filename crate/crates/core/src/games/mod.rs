//! Two-player games with generalized-Rabin-pairs conditions: the product
//! with a deterministic automaton, the ranking/lifting solver with strategy
//! extraction and verification, and the recursive fixpoint solver.

mod game;
mod rank;
mod solve;
mod strategy;
mod symbolic;

pub use game::{game_product, parse_game, write_game, Game, GameError, GrpGame, Player};
pub use rank::{min_increase, next_wf, rank_greater, strict_level, RankValue};
pub use solve::{
    is_good, lift, next_rank, solve_ranking, solve_ranking_with, Ranking, RankingSolution,
    SolveError, SolveOptions,
};
pub use strategy::{verify_strategy, Strategy};
pub use symbolic::{cpre, solve_symbolic};

use crate::automata::{build_dgrw_with, TranslateError, TranslateOptions};
use crate::ltl::Formula;

#[derive(Debug, thiserror::Error)]
pub enum GameSolveError {
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Winner {
    Player0,
    Player1,
}

pub struct LtlGameOutcome {
    pub winner: Winner,
    pub grp_game: GrpGame,
    pub strategy: Option<Strategy>,
}

/// Solves an LTL(F,G) game: product of the arena with the translated
/// automaton, then the ranking solver; the winner is reported at the
/// initial vertex.
pub fn solve_ltl_game(g: &Game, f: &Formula) -> Result<LtlGameOutcome, GameSolveError> {
    solve_ltl_game_with(g, f, &TranslateOptions::default(), &SolveOptions::default())
}

pub fn solve_ltl_game_with(
    g: &Game,
    f: &Formula,
    topts: &TranslateOptions,
    sopts: &SolveOptions,
) -> Result<LtlGameOutcome, GameSolveError> {
    let a = build_dgrw_with(f, topts)?;
    let grp = game_product(g, &a);
    let sol = solve_ranking_with(&grp, sopts)?;
    let winner = if sol.winning.contains(grp.game.initial) {
        Winner::Player0
    } else {
        Winner::Player1
    };
    Ok(LtlGameOutcome {
        winner,
        grp_game: grp,
        strategy: Some(sol.strategy),
    })
}
