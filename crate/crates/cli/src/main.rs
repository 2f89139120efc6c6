//! Command-line frontend: translate formulas, model-check MDPs, solve
//! games, check bounded equivalence, run benchmark suites and generate
//! inputs.
//!
//! Exit codes: 0 success, 1 equivalence counterexample, 2 parse error,
//! 3 resource guard, 4 model validation failure, 5 solver disagreement.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use fgltl_core::automata::{
    accepts_lasso, build_dgrw_with, check_equiv_bounded, degeneralization_index,
    degeneralize_with, parse_dgrw, write_dgrw, write_drw, EquivVerdict, TranslateError,
    TranslateOptions,
};
use fgltl_core::bench::{
    gen_appendix_arena, gen_fairness, gen_random_game, gen_random_mdp, rows_to_csv, run_suite,
    Suite,
};
use fgltl_core::games::{
    game_product, parse_game, solve_ranking_with, solve_symbolic, verify_strategy, write_game,
    SolveError, SolveOptions, Winner,
};
use fgltl_core::ltl::{eval_lasso, parse_any_atoms, Formula};
use fgltl_core::mdp::{model_check_with, parse_mdp, write_mdp, McMode, McValue, ReachMode};

#[derive(Parser)]
#[command(name = "fgltl", version, about = "LTL(F,G) verification toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FormulaArg {
    /// Formula text, e.g. "F a | G b".
    #[arg(long, conflicts_with = "formula_file")]
    formula: Option<String>,
    /// Read the formula from a file instead.
    #[arg(long)]
    formula_file: Option<PathBuf>,
}

impl FormulaArg {
    fn read(&self) -> Result<Formula, CliError> {
        let text = match (&self.formula, &self.formula_file) {
            (Some(t), None) => t.clone(),
            (None, Some(p)) => std::fs::read_to_string(p)
                .map_err(|e| CliError::parse(format!("cannot read {}: {e}", p.display())))?,
            _ => {
                return Err(CliError::parse(
                    "exactly one of --formula/--formula-file".into(),
                ))
            }
        };
        parse_any_atoms(text.trim()).map_err(|e| CliError::parse(e.to_string()))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Translate a formula into an automaton with generalized Rabin pairs.
    Translate {
        #[command(flatten)]
        formula: FormulaArg,
        /// Degeneralize into a plain Rabin automaton.
        #[arg(long)]
        drw: bool,
        /// Keep the full state product instead of pruning unreachable states.
        #[arg(long)]
        no_prune: bool,
        /// Write the automaton to this path.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        max_atoms: usize,
        #[arg(long, default_value_t = 1_000_000)]
        max_degen_states: u128,
    },
    /// Model-check an MDP against a formula.
    Mc {
        /// MDP file.
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        formula: FormulaArg,
        /// max or min over schedulers.
        #[arg(long, default_value = "max")]
        mode: String,
        /// Exact rational arithmetic instead of value iteration.
        #[arg(long, conflicts_with = "epsilon")]
        exact: bool,
        /// Value-iteration halting threshold.
        #[arg(long, default_value_t = 1e-6)]
        epsilon: f64,
        #[arg(long, default_value_t = 10)]
        max_atoms: usize,
    },
    /// Solve a two-player LTL(F,G) game.
    Game {
        /// Arena file.
        #[arg(long)]
        arena: PathBuf,
        #[command(flatten)]
        formula: FormulaArg,
        /// ranking, symbolic, or both (with agreement check).
        #[arg(long, default_value = "ranking")]
        solver: String,
        /// Dump the verified strategy to this path.
        #[arg(long)]
        strategy: Option<PathBuf>,
        #[arg(long, default_value_t = 1_000_000_000)]
        budget: u128,
        #[arg(long, default_value_t = 10)]
        max_atoms: usize,
    },
    /// Exhaustively compare automaton and formula on bounded lassos.
    Equiv {
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long, default_value_t = 3)]
        bound: usize,
        /// Check this automaton file instead of a fresh translation.
        #[arg(long)]
        automaton: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        max_atoms: usize,
    },
    /// Run a benchmark suite and write the CSV.
    Bench {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate formulas, arenas and random models.
    #[command(subcommand)]
    Gen(GenCommand),
}

#[derive(Subcommand)]
enum GenCommand {
    /// Conjunction of n fairness constraints over 2n atoms.
    Fairness {
        #[arg(long)]
        n: usize,
    },
    /// Experiment arena with 1..=3 copies (vertex-labeled encoding).
    Arena {
        #[arg(long)]
        copies: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded random MDP.
    Mdp {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        vertices: usize,
        #[arg(long, default_value_t = 2)]
        atoms: usize,
        #[arg(long, default_value_t = 2)]
        branch: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded random game.
    Game {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        vertices: usize,
        #[arg(long, default_value_t = 2)]
        atoms: usize,
        #[arg(long, default_value_t = 2)]
        branch: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Error carrying its exit code.
struct CliError {
    code: u8,
    msg: String,
}

impl CliError {
    fn parse(msg: String) -> CliError {
        CliError { code: 2, msg }
    }
    fn resource(msg: String) -> CliError {
        CliError { code: 3, msg }
    }
    fn model(msg: String) -> CliError {
        CliError { code: 4, msg }
    }
    fn disagreement(msg: String) -> CliError {
        CliError { code: 5, msg }
    }
}

impl From<TranslateError> for CliError {
    fn from(e: TranslateError) -> CliError {
        CliError::resource(e.to_string())
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> CliError {
        CliError::resource(e.to_string())
    }
}

fn write_or_print(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| CliError::model(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Translate {
            formula,
            drw,
            no_prune,
            out,
            max_atoms,
            max_degen_states,
        } => {
            let f = formula.read()?;
            let opts = TranslateOptions {
                max_atoms,
                max_degen_states,
            };
            let t0 = Instant::now();
            let a = build_dgrw_with(&f, &opts)?;
            eprintln!("translation took {} ms", t0.elapsed().as_millis());
            let b = degeneralization_index(&a);
            if drw {
                let r = degeneralize_with(&a, &opts, !no_prune)?;
                println!("states={} pairs={} B={}", r.state_count(), r.pairs.len(), b);
                if out.is_some() {
                    write_or_print(&out, &write_drw(&r, &a))?;
                }
            } else {
                println!(
                    "states={} pairs={} B={}",
                    a.state_count(),
                    a.condition.pair_count(),
                    b
                );
                if out.is_some() {
                    write_or_print(&out, &write_dgrw(&a))?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Mc {
            model,
            formula,
            mode,
            exact,
            epsilon,
            max_atoms,
        } => {
            let f = formula.read()?;
            let text = std::fs::read_to_string(&model)
                .map_err(|e| CliError::model(format!("cannot read {}: {e}", model.display())))?;
            let m = parse_mdp(&text).map_err(|e| CliError::model(e.to_string()))?;
            let mode = match mode.as_str() {
                "max" => McMode::Max,
                "min" => McMode::Min,
                other => return Err(CliError::parse(format!("unknown mode `{other}`"))),
            };
            let reach = if exact {
                ReachMode::Exact
            } else {
                ReachMode::Iterative { epsilon }
            };
            let opts = TranslateOptions {
                max_atoms,
                ..TranslateOptions::default()
            };
            let t0 = Instant::now();
            let outc = model_check_with(&m, &f, mode, reach, &opts)
                .map_err(|e| CliError::resource(e.to_string()))?;
            eprintln!("model checking took {} ms", t0.elapsed().as_millis());
            match &outc.value {
                McValue::Exact(r) => println!("probability={}/{}", r.numer(), r.denom()),
                McValue::Approx(x) => println!("probability={x}"),
            }
            println!(
                "automaton_states={} product_states={} pairs={}",
                outc.automaton_states, outc.product_states, outc.pair_count
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Game {
            arena,
            formula,
            solver,
            strategy,
            budget,
            max_atoms,
        } => {
            let f = formula.read()?;
            let text = std::fs::read_to_string(&arena)
                .map_err(|e| CliError::model(format!("cannot read {}: {e}", arena.display())))?;
            let g = parse_game(&text).map_err(|e| CliError::model(e.to_string()))?;
            let topts = TranslateOptions {
                max_atoms,
                ..TranslateOptions::default()
            };
            let a = build_dgrw_with(&f, &topts)?;
            let grp = game_product(&g, &a);
            let sopts = SolveOptions { budget };
            let t0 = Instant::now();
            let (winning, strategy_out) = match solver.as_str() {
                "ranking" => {
                    let sol = solve_ranking_with(&grp, &sopts)?;
                    (sol.winning, Some(sol.strategy))
                }
                "symbolic" => (solve_symbolic(&grp), None),
                "both" => {
                    let sol = solve_ranking_with(&grp, &sopts)?;
                    let sym = solve_symbolic(&grp);
                    if sol.winning != sym {
                        return Err(CliError::disagreement(
                            "ranking and symbolic solvers disagree".into(),
                        ));
                    }
                    (sol.winning, Some(sol.strategy))
                }
                other => return Err(CliError::parse(format!("unknown solver `{other}`"))),
            };
            eprintln!("solving took {} ms", t0.elapsed().as_millis());
            let winner = if winning.contains(grp.game.initial) {
                Winner::Player0
            } else {
                Winner::Player1
            };
            println!(
                "winner={}",
                match winner {
                    Winner::Player0 => "player0",
                    Winner::Player1 => "player1",
                }
            );
            if let Some(path) = strategy {
                let s = strategy_out.ok_or_else(|| {
                    CliError::parse("--strategy requires the ranking solver".into())
                })?;
                if !verify_strategy(&grp, &s) {
                    return Err(CliError::disagreement(
                        "extracted strategy failed verification".into(),
                    ));
                }
                std::fs::write(&path, s.dump())
                    .map_err(|e| CliError::model(format!("cannot write strategy: {e}")))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Equiv {
            formula,
            bound,
            automaton,
            max_atoms,
        } => {
            let f = formula.read()?;
            let a = match automaton {
                Some(path) => {
                    let text = std::fs::read_to_string(&path).map_err(|e| {
                        CliError::model(format!("cannot read {}: {e}", path.display()))
                    })?;
                    parse_dgrw(&text).map_err(|e| CliError::model(e.to_string()))?
                }
                None => {
                    let opts = TranslateOptions {
                        max_atoms,
                        ..TranslateOptions::default()
                    };
                    build_dgrw_with(&f, &opts)?
                }
            };
            match check_equiv_bounded(&a, &f, bound) {
                EquivVerdict::Equal => {
                    println!("equal bound={bound}");
                    Ok(ExitCode::SUCCESS)
                }
                EquivVerdict::Counterexample(w) => {
                    println!("counterexample: {w}");
                    println!(
                        "automaton={} formula={}",
                        accepts_lasso(&a, &w),
                        eval_lasso(&f, &w)
                    );
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Bench { suite, out } => {
            let suite: Suite = suite.parse().map_err(CliError::parse)?;
            let rows = run_suite(suite).map_err(|e| match e {
                fgltl_core::bench::SuiteError::Disagreement { .. } => {
                    CliError::disagreement(e.to_string())
                }
                other => CliError::resource(other.to_string()),
            })?;
            let csv = rows_to_csv(&rows);
            write_or_print(&out, &csv)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen(gen) => {
            match gen {
                GenCommand::Fairness { n } => {
                    let f = gen_fairness(n).map_err(|e| CliError::parse(e.to_string()))?;
                    println!("{f}");
                }
                GenCommand::Arena { copies, out } => {
                    let arena =
                        gen_appendix_arena(copies).map_err(|e| CliError::parse(e.to_string()))?;
                    write_or_print(&out, &write_game(&arena.game))?;
                }
                GenCommand::Mdp {
                    seed,
                    vertices,
                    atoms,
                    branch,
                    out,
                } => {
                    let m = gen_random_mdp(seed, vertices, atoms, branch)
                        .map_err(|e| CliError::parse(e.to_string()))?;
                    write_or_print(&out, &write_mdp(&m))?;
                }
                GenCommand::Game {
                    seed,
                    vertices,
                    atoms,
                    branch,
                    out,
                } => {
                    let g = gen_random_game(seed, vertices, atoms, branch)
                        .map_err(|e| CliError::parse(e.to_string()))?;
                    write_or_print(&out, &write_game(&g))?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
