//! Finite-memory strategies and their verification.

use std::fmt::Write as _;

use crate::automata::WaitingVector;
use crate::util::{sccs, BitSet};

use super::game::{GrpGame, Player};
use super::rank::next_wf;

/// A player-0 strategy with memory domain `B` (the waiting vectors): the
/// memory update is `wf -> next_v(wf)` and the choice map picks a successor
/// per (player-0 vertex, memory).
#[derive(Clone, Debug)]
pub struct Strategy {
    pub wfs: Vec<WaitingVector>,
    /// `choice[v * wfs.len() + wf_index]`; `usize::MAX` on player-1 vertices.
    pub choice: Vec<usize>,
    /// (vertex, memory) pairs the strategy claims to win from.
    pub starts: Vec<(usize, WaitingVector)>,
}

impl Strategy {
    pub fn memory_size(&self) -> usize {
        self.wfs.len()
    }

    pub fn wf_index(&self, wf: &WaitingVector) -> Option<usize> {
        self.wfs.iter().position(|w| w == wf)
    }

    pub fn choice_at(&self, v: usize, wfi: usize) -> usize {
        self.choice[v * self.wfs.len() + wfi]
    }

    /// Dump format: `memory: <|B|>` then one `choice <v> <wf> -> <v'>` line
    /// per player-0 vertex and memory.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        writeln!(out, "memory: {}", self.memory_size()).unwrap();
        let n = self.choice.len() / self.wfs.len().max(1);
        for v in 0..n {
            for (wfi, wf) in self.wfs.iter().enumerate() {
                let c = self.choice_at(v, wfi);
                if c != usize::MAX {
                    writeln!(out, "choice {v} {wf} -> {c}").unwrap();
                }
            }
        }
        out
    }
}

/// Checks that every play conforming to the strategy from its start pairs
/// satisfies the condition: in the strategy-fixed graph over
/// (vertex, memory), no reachable strongly connected set with an edge may
/// violate every pair. Violation of pair `i` means touching its avoid set or
/// missing one of its Buechi sets; candidate sets are explored by branching,
/// per pair, on which part fails.
pub fn verify_strategy(g: &GrpGame, s: &Strategy) -> bool {
    let n = g.vertex_count();
    let nb = s.wfs.len();
    let total = n * nb;
    let node = |v: usize, wfi: usize| v * nb + wfi;

    // successor list of the strategy-fixed graph
    let succ: Vec<Vec<usize>> = (0..total)
        .map(|x| {
            let (v, wfi) = (x / nb, x % nb);
            let wf2 = next_wf(g, v, &s.wfs[wfi]);
            let wf2i = s.wf_index(&wf2).expect("closed memory domain");
            match g.game.owner[v] {
                Player::Zero => {
                    let c = s.choice_at(v, wfi);
                    if c == usize::MAX {
                        Vec::new()
                    } else {
                        vec![node(c, wf2i)]
                    }
                }
                Player::One => g.game.edges[v].iter().map(|&w| node(w, wf2i)).collect(),
            }
        })
        .collect();

    // reachable part from the start pairs
    let mut reach = BitSet::new(total);
    let mut stack: Vec<usize> = Vec::new();
    for (v, wf) in &s.starts {
        let Some(wfi) = s.wf_index(wf) else {
            return false;
        };
        let x = node(*v, wfi);
        if !reach.contains(x) {
            reach.insert(x);
            stack.push(x);
        }
    }
    while let Some(x) = stack.pop() {
        if succ[x].is_empty() {
            return false; // play gets stuck: no infinite play, reject
        }
        for &y in &succ[x] {
            if !reach.contains(y) {
                reach.insert(y);
                stack.push(y);
            }
        }
    }

    // Branch over how each pair is violated: the candidate set must either
    // meet F_i (recorded as an obligation) or avoid some I_i^j (restricting
    // the universe). A violating set exists iff some branch leaves an SCC
    // with an edge meeting all recorded F obligations.
    fn bad_exists(
        g: &GrpGame,
        succ: &[Vec<usize>],
        total: usize,
        nb: usize,
        universe: &BitSet,
        pair: usize,
        must_hit: &mut Vec<usize>,
    ) -> bool {
        if pair == g.pair_count() {
            let comps = sccs(total, |x| universe.contains(x), |x| succ[x].iter().copied());
            return comps.iter().any(|c| {
                c.has_edge
                    && must_hit
                        .iter()
                        .all(|&p| c.vertices.iter().any(|&x| g.in_f(p, x / nb)))
            });
        }
        // option 1: the set meets F_pair
        must_hit.push(pair);
        if bad_exists(g, succ, total, nb, universe, pair + 1, must_hit) {
            must_hit.pop();
            return true;
        }
        must_hit.pop();
        // option 2: the set misses I_pair^j for some j
        for j in 0..g.condition.pairs[pair].isets.len() {
            let mut restricted = universe.clone();
            for x in universe.iter() {
                if g.in_i(pair, j, x / nb) {
                    restricted.remove(x);
                }
            }
            if bad_exists(g, succ, total, nb, &restricted, pair + 1, must_hit) {
                return true;
            }
        }
        false
    }

    let mut must_hit = Vec::new();
    !bad_exists(g, &succ, total, nb, &reach, 0, &mut must_hit)
}
