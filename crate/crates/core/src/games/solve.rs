//! Worklist solver: the least fixpoint of the lift operator over rankings,
//! with winning-set and strategy extraction.

use std::collections::VecDeque;

use thiserror::Error;

use crate::automata::WaitingVector;
use crate::util::BitSet;

use super::game::{GrpGame, Player};
use super::rank::{min_increase, next_wf, rank_greater, RankValue};
use super::strategy::Strategy;

/// Total ranking over (vertex, waiting vector).
#[derive(Clone, Debug)]
pub struct Ranking {
    pub wfs: Vec<WaitingVector>,
    /// `values[v * wfs.len() + wf_index]`.
    pub values: Vec<RankValue>,
}

impl Ranking {
    pub fn wf_index(&self, wf: &WaitingVector) -> usize {
        self.wfs
            .iter()
            .position(|w| w == wf)
            .expect("waiting vector in domain")
    }

    pub fn get(&self, v: usize, wfi: usize) -> &RankValue {
        &self.values[v * self.wfs.len() + wfi]
    }
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("ranking domain too large: {size} exceeds budget {budget}")]
    BudgetExceeded { size: u128, budget: u128 },
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Bound on `n^(k+1) * k! * |B|`.
    pub budget: u128,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { budget: 1_000_000_000 }
    }
}

pub struct RankingSolution {
    pub winning: BitSet,
    pub ranking: Ranking,
    pub strategy: Strategy,
    /// Number of lift applications performed (tested against the
    /// `|V| * |B| * |R|` bound).
    pub lift_count: u64,
}

/// `next(v, wf)`: the best successor rank — minimum over successors for
/// player 0, maximum for player 1 — at the advanced waiting vector.
pub fn next_rank(g: &GrpGame, r: &Ranking, v: usize, wfi: usize) -> RankValue {
    let wf2 = next_wf(g, v, &r.wfs[wfi]);
    let wf2i = r.wf_index(&wf2);
    let ranks = g.game.edges[v].iter().map(|&w| r.get(w, wf2i));
    match g.game.owner[v] {
        Player::Zero => ranks.min().expect("vertex has successors").clone(),
        Player::One => ranks.max().expect("vertex has successors").clone(),
    }
}

/// One lift: `max(r(v,wf), min { x | x >_{v,wf} next(v,wf) })`.
pub fn lift(g: &GrpGame, r: &Ranking, v: usize, wfi: usize) -> RankValue {
    let nxt = next_rank(g, r, v, wfi);
    let n = g.vertex_count() as u32;
    let inc = min_increase(g, n, v, &r.wfs[wfi], &nxt);
    std::cmp::max(r.get(v, wfi).clone(), inc)
}

pub fn solve_ranking(g: &GrpGame) -> Result<RankingSolution, SolveError> {
    solve_ranking_with(g, &SolveOptions::default())
}

pub fn solve_ranking_with(
    g: &GrpGame,
    opts: &SolveOptions,
) -> Result<RankingSolution, SolveError> {
    let n = g.vertex_count();
    let k = g.pair_count();
    let lens = g.iset_lens();
    let b: u128 = lens.iter().map(|&l| l as u128).product();
    let fact: u128 = (1..=k as u128).product();
    let size = (n as u128)
        .saturating_pow(k as u32 + 1)
        .saturating_mul(fact)
        .saturating_mul(b);
    if size > opts.budget {
        return Err(SolveError::BudgetExceeded {
            size,
            budget: opts.budget,
        });
    }

    let wfs = WaitingVector::enumerate(&lens);
    let nb = wfs.len();
    let mut r = Ranking {
        wfs: wfs.clone(),
        values: vec![RankValue::bottom(k); n * nb],
    };

    // advanced waiting vector index per (vertex, wf index)
    let adv: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            (0..nb)
                .map(|wfi| {
                    let wf2 = next_wf(g, v, &wfs[wfi]);
                    wfs.iter().position(|w| *w == wf2).unwrap()
                })
                .collect()
        })
        .collect();

    // dependents[(v, wfi)] = entries whose next() reads r(v, wfi)
    let mut dependents: Vec<Vec<u32>> = vec![Vec::new(); n * nb];
    for u in 0..n {
        for wfi in 0..nb {
            let target_wf = adv[u][wfi];
            for &w in &g.game.edges[u] {
                dependents[w * nb + target_wf].push((u * nb + wfi) as u32);
            }
        }
    }

    let mut queue: VecDeque<u32> = (0..(n * nb) as u32).collect();
    let mut queued = vec![true; n * nb];
    let mut lift_count: u64 = 0;
    while let Some(slot) = queue.pop_front() {
        queued[slot as usize] = false;
        let (v, wfi) = ((slot as usize) / nb, (slot as usize) % nb);
        let new = lift(g, &r, v, wfi);
        lift_count += 1;
        if new > *r.get(v, wfi) {
            r.values[v * nb + wfi] = new;
            for &dep in &dependents[slot as usize] {
                if !queued[dep as usize] {
                    queued[dep as usize] = true;
                    queue.push_back(dep);
                }
            }
        }
    }

    let mut winning = BitSet::new(n);
    for v in 0..n {
        if (0..nb).any(|wfi| !r.get(v, wfi).is_infinite()) {
            winning.insert(v);
        }
    }

    let strategy = extract_strategy(g, &r, &winning);
    Ok(RankingSolution {
        winning,
        ranking: r,
        strategy,
        lift_count,
    })
}

/// The strategy of the soundness construction: memory `B`, update
/// `wf -> next_v(wf)`, and at player-0 vertices the successor of minimal
/// rank at the advanced memory (ties to the smallest vertex id).
fn extract_strategy(g: &GrpGame, r: &Ranking, winning: &BitSet) -> Strategy {
    let nb = r.wfs.len();
    let mut choice = vec![usize::MAX; g.vertex_count() * nb];
    for v in 0..g.vertex_count() {
        if g.game.owner[v] != Player::Zero {
            continue;
        }
        for wfi in 0..nb {
            let wf2 = next_wf(g, v, &r.wfs[wfi]);
            let wf2i = r.wf_index(&wf2);
            let best = g.game.edges[v]
                .iter()
                .copied()
                .min_by(|&a, &b| r.get(a, wf2i).cmp(r.get(b, wf2i)).then(a.cmp(&b)))
                .expect("vertex has successors");
            choice[v * nb + wfi] = best;
        }
    }
    // Verification starts: every finite-rank entry claims a win from there.
    let mut starts = Vec::new();
    for v in winning.iter() {
        for wfi in 0..nb {
            if !r.get(v, wfi).is_infinite() {
                starts.push((v, r.wfs[wfi].clone()));
            }
        }
    }
    Strategy {
        wfs: r.wfs.clone(),
        choice,
        starts,
    }
}

/// Goodness of a ranking: every finite entry strictly dominates its next
/// value in the vertex-relative order.
pub fn is_good(g: &GrpGame, r: &Ranking) -> bool {
    let nb = r.wfs.len();
    for v in 0..g.vertex_count() {
        for wfi in 0..nb {
            let val = r.get(v, wfi);
            if val.is_infinite() {
                continue;
            }
            let nxt = next_rank(g, r, v, wfi);
            if !rank_greater(g, v, &r.wfs[wfi], val, &nxt) {
                return false;
            }
        }
    }
    true
}
