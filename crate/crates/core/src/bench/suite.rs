//! Benchmark suites and the CSV emitter. Every row runs both the
//! generalized-pairs pipeline and the degeneralized-Rabin pipeline and is
//! only written after the two agree.

use std::time::Instant;

use thiserror::Error;

use crate::automata::{
    build_dgrw, degeneralization_index, degeneralize, DgrwAutomaton, GrpCondition, GrpPair,
    TranslateError,
};
use crate::games::{
    game_product, solve_ranking_with, GrpGame, SolveError, SolveOptions, Winner,
};
use crate::games::solve_symbolic;
use crate::ltl::{parse_any_atoms, Formula};
use crate::mdp::{product, product_rabin, solve_product, McValue, Mdp, ReachMode};
use crate::util::BitSet;

use super::gen::{gen_appendix_arena, gen_fairness, gen_random_mdp, GenError};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Suite {
    Fairness,
    AppendixB,
    Random,
}

impl std::str::FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fairness" => Ok(Suite::Fairness),
            "appendixB" | "appendixb" => Ok(Suite::AppendixB),
            "random" => Ok(Suite::Random),
            other => Err(format!("unknown suite `{other}`")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub formula: String,
    pub model: String,
    pub dgrw_states: usize,
    pub k: usize,
    pub b: u128,
    pub drw_states: Option<usize>,
    pub product_gr: Option<usize>,
    pub product_r: Option<usize>,
    pub result: String,
    pub t_translate_ms: u128,
    pub t_solve_ms: u128,
}

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("pipelines disagree on {formula} / {model}: GR = {gr}, R = {r}")]
    Disagreement {
        formula: String,
        model: String,
        gr: String,
        r: String,
    },
}

pub const CSV_HEADER: &str =
    "formula,model,dgrw_states,k,B,drw_states,product_gr,product_r,result,t_translate_ms,t_solve_ms";

pub fn rows_to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    let opt = |o: &Option<usize>| o.map_or("-".to_string(), |v| v.to_string());
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            csv_quote(&r.formula),
            r.model,
            r.dgrw_states,
            r.k,
            r.b,
            opt(&r.drw_states),
            opt(&r.product_gr),
            opt(&r.product_r),
            r.result,
            r.t_translate_ms,
            r.t_solve_ms,
        ));
    }
    out
}

fn csv_quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn run_suite(suite: Suite) -> Result<Vec<BenchRow>, SuiteError> {
    match suite {
        Suite::Fairness => fairness_suite(),
        Suite::AppendixB => appendix_suite(),
        Suite::Random => random_suite(),
    }
}

fn mc_value_string(v: &McValue) -> String {
    match v {
        McValue::Exact(r) => format!("{}/{}", r.numer(), r.denom()),
        McValue::Approx(x) => format!("{x}"),
    }
}

/// Runs both model-checking pipelines on an already built automaton and
/// asserts agreement (exact arithmetic end to end).
fn mc_both(
    f: &Formula,
    a: &DgrwAutomaton,
    m: &Mdp,
    model_name: &str,
) -> Result<(String, Option<usize>, Option<usize>, Option<usize>), SuiteError> {
    let p_gr = product(m, a);
    let gr = solve_product(&p_gr, ReachMode::Exact);
    let gr_str = mc_value_string(&gr.value);

    match degeneralize(a) {
        Ok(r) => {
            let p_r = product_rabin(m, &r);
            let rr = solve_product(&p_r, ReachMode::Exact);
            let r_str = mc_value_string(&rr.value);
            if gr_str != r_str {
                return Err(SuiteError::Disagreement {
                    formula: f.to_string(),
                    model: model_name.to_string(),
                    gr: gr_str,
                    r: r_str,
                });
            }
            Ok((
                gr_str,
                Some(r.state_count()),
                Some(p_gr.mdp.vertex_count()),
                Some(p_r.mdp.vertex_count()),
            ))
        }
        // Degeneralization over the size limit: report the direct pipeline.
        Err(TranslateError::DegeneralizationTooLarge { .. }) => {
            Ok((gr_str, None, Some(p_gr.mdp.vertex_count()), None))
        }
        Err(e) => Err(e.into()),
    }
}

fn fairness_suite() -> Result<Vec<BenchRow>, SuiteError> {
    let mut rows = Vec::new();
    for n in 1..=4usize {
        let f = gen_fairness(n)?;
        let t0 = Instant::now();
        let a = build_dgrw(&f)?;
        let t_translate = t0.elapsed().as_millis();
        let m = gen_random_mdp(100 + n as u64, 4, 2 * n, 2)?;
        let t1 = Instant::now();
        let (result, drw_states, product_gr, product_r) =
            mc_both(&f, &a, &m, &format!("random4/{n}"))?;
        rows.push(BenchRow {
            formula: f.to_string(),
            model: format!("random4/{n}"),
            dgrw_states: a.state_count(),
            k: a.condition.pair_count(),
            b: degeneralization_index(&a),
            drw_states,
            product_gr,
            product_r,
            result,
            t_translate_ms: t_translate,
            t_solve_ms: t1.elapsed().as_millis(),
        });
    }
    Ok(rows)
}

/// Plain-pair view of a Rabin game product for the degeneralized pipeline.
fn rabin_game(g: &crate::games::Game, r: &crate::automata::RabinAutomaton) -> GrpGame {
    let mask_of = |v: usize, alphabet: &crate::automata::Alphabet| alphabet.mask_of(&g.labels[v]);
    let mut index = std::collections::HashMap::new();
    let mut verts: Vec<(usize, usize)> = Vec::new();
    let q0 = r.next(r.initial, mask_of(g.initial, &r.alphabet));
    index.insert((g.initial, q0), 0);
    verts.push((g.initial, q0));
    let mut head = 0;
    while head < verts.len() {
        let (v, q) = verts[head];
        head += 1;
        for &w in &g.edges[v] {
            let qw = r.next(q, mask_of(w, &r.alphabet));
            index.entry((w, qw)).or_insert_with(|| {
                verts.push((w, qw));
                verts.len() - 1
            });
        }
    }
    let n = verts.len();
    let mut owner = Vec::with_capacity(n);
    let mut edges = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for &(v, q) in &verts {
        owner.push(g.owner[v]);
        labels.push(g.labels[v].clone());
        let mut row: Vec<usize> = g.edges[v]
            .iter()
            .map(|&w| index[&(w, r.next(q, mask_of(w, &r.alphabet)))])
            .collect();
        row.sort_unstable();
        row.dedup();
        edges.push(row);
    }
    let pairs = r
        .pairs
        .iter()
        .map(|p| {
            let mut fset = BitSet::new(n);
            let mut iset = BitSet::new(n);
            for (s, &(_, q)) in verts.iter().enumerate() {
                if p.fset.contains(q) {
                    fset.insert(s);
                }
                if p.iset.contains(q) {
                    iset.insert(s);
                }
            }
            GrpPair {
                fset,
                isets: vec![iset],
            }
        })
        .collect();
    GrpGame {
        game: crate::games::Game {
            owner,
            edges,
            labels,
            initial: 0,
        },
        condition: GrpCondition { pairs },
    }
}

fn winner_str(w: Winner) -> &'static str {
    match w {
        Winner::Player0 => "player0",
        Winner::Player1 => "player1",
    }
}

fn appendix_suite() -> Result<Vec<BenchRow>, SuiteError> {
    let f = parse_any_atoms("(G F a & G F b & G F c) | (G F !a & G F !b & G F !c)")
        .expect("well-formed formula");
    let sopts = SolveOptions {
        budget: 10_000_000_000,
    };
    let mut rows = Vec::new();
    for copies in 1..=3usize {
        let arena = gen_appendix_arena(copies)?;
        let t0 = Instant::now();
        let a = build_dgrw(&f)?;
        let t_translate = t0.elapsed().as_millis();

        let t1 = Instant::now();
        let grp = game_product(&arena.game, &a);
        let sol = solve_ranking_with(&grp, &sopts)?;
        let gr_winner = if sol.winning.contains(grp.game.initial) {
            Winner::Player0
        } else {
            Winner::Player1
        };
        // the two solvers must agree before anything is published
        let sym = solve_symbolic(&grp);
        if sym != sol.winning {
            return Err(SuiteError::Disagreement {
                formula: f.to_string(),
                model: format!("arena{copies}"),
                gr: format!("ranking winning set {:?}", sol.winning),
                r: format!("symbolic winning set {sym:?}"),
            });
        }

        let r = degeneralize(&a)?;
        let rg = rabin_game(&arena.game, &r);
        let rsol = solve_ranking_with(&rg, &sopts)?;
        let r_winner = if rsol.winning.contains(rg.game.initial) {
            Winner::Player0
        } else {
            Winner::Player1
        };
        if gr_winner != r_winner {
            return Err(SuiteError::Disagreement {
                formula: f.to_string(),
                model: format!("arena{copies}"),
                gr: winner_str(gr_winner).into(),
                r: winner_str(r_winner).into(),
            });
        }

        rows.push(BenchRow {
            formula: f.to_string(),
            model: format!("arena{copies}"),
            dgrw_states: a.state_count(),
            k: a.condition.pair_count(),
            b: degeneralization_index(&a),
            drw_states: Some(r.state_count()),
            product_gr: Some(grp.vertex_count()),
            product_r: Some(rg.vertex_count()),
            result: winner_str(gr_winner).into(),
            t_translate_ms: t_translate,
            t_solve_ms: t1.elapsed().as_millis(),
        });
    }
    Ok(rows)
}

fn random_suite() -> Result<Vec<BenchRow>, SuiteError> {
    let formulas = ["G F a & G F !a", "F G a | G F b", "F a | G b"];
    let mut rows = Vec::new();
    for text in formulas {
        let f = parse_any_atoms(text).expect("well-formed formula");
        let t0 = Instant::now();
        let a = build_dgrw(&f)?;
        let t_translate = t0.elapsed().as_millis();
        for seed in 0..8u64 {
            let m = gen_random_mdp(1000 + seed, 6, 2, 2)?;
            let name = format!("random6/{seed}");
            let t1 = Instant::now();
            let (result, drw_states, product_gr, product_r) = mc_both(&f, &a, &m, &name)?;
            rows.push(BenchRow {
                formula: text.to_string(),
                model: name,
                dgrw_states: a.state_count(),
                k: a.condition.pair_count(),
                b: degeneralization_index(&a),
                drw_states,
                product_gr,
                product_r,
                result,
                t_translate_ms: t_translate,
                t_solve_ms: t1.elapsed().as_millis(),
            });
        }
    }
    Ok(rows)
}
