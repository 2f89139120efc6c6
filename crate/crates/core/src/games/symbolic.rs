//! Recursive fixpoint solver over explicit vertex sets.
//!
//! The winning region is the least fixpoint of `Z -> GR(pairs, V, cpre(Z))`,
//! where `GR` peels one pair at a time: for each pair it computes a greatest
//! fixpoint over a conjunction (one least fixpoint per Buechi set) whose body
//! recurses into the remaining pairs with the avoid set removed from the
//! invariant.

use crate::util::BitSet;

use super::game::{GrpGame, Player};

/// Controllable predecessors: player-0 vertices with some successor in `s`,
/// player-1 vertices with all successors in `s`.
pub fn cpre(g: &GrpGame, s: &BitSet) -> BitSet {
    let n = g.vertex_count();
    let mut out = BitSet::new(n);
    for v in 0..n {
        let hit = match g.game.owner[v] {
            Player::Zero => g.game.edges[v].iter().any(|&w| s.contains(w)),
            Player::One => g.game.edges[v].iter().all(|&w| s.contains(w)),
        };
        if hit {
            out.insert(v);
        }
    }
    out
}

/// Winning set of player 0 for the disjunction of generalized Rabin pairs.
pub fn solve_symbolic(g: &GrpGame) -> BitSet {
    let n = g.vertex_count();
    let all: Vec<usize> = (0..g.pair_count()).collect();
    let mut z = BitSet::new(n);
    loop {
        let next = gr(g, &all, &BitSet::full(n), &cpre(g, &z));
        if next == z {
            return z;
        }
        z = next;
    }
}

fn gr(g: &GrpGame, pairs: &[usize], invariant: &BitSet, already_ok: &BitSet) -> BitSet {
    if pairs.is_empty() {
        return already_ok.clone();
    }
    let n = g.vertex_count();
    let mut win = BitSet::new(n);
    for (pos, &i) in pairs.iter().enumerate() {
        let mut rest: Vec<usize> = pairs.to_vec();
        rest.remove(pos);
        // invariant minus the avoid set of the chosen pair
        let mut inv = invariant.clone();
        inv.subtract(&g.condition.pairs[i].fset);

        let mut y = BitSet::full(n);
        loop {
            let mut conj = BitSet::full(n);
            for iset in &g.condition.pairs[i].isets {
                let mut x = BitSet::new(n);
                loop {
                    // ok now: already satisfied, or inside the invariant and
                    // either visiting the awaited set with Y ahead, or X ahead
                    let mut via_y = inv.clone();
                    via_y.intersect_with(iset);
                    via_y.intersect_with(&cpre(g, &y));
                    let mut via_x = inv.clone();
                    via_x.intersect_with(&cpre(g, &x));
                    let mut new_ok = already_ok.clone();
                    new_ok.union_with(&via_y);
                    new_ok.union_with(&via_x);
                    let next = gr(g, &rest, &inv, &new_ok);
                    if next == x {
                        break;
                    }
                    x = next;
                }
                conj.intersect_with(&x);
            }
            if conj == y {
                break;
            }
            y = conj;
        }
        win.union_with(&y);
    }
    win
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{GrpCondition, GrpPair};
    use crate::games::game::Game;
    use crate::ltl::Letter;

    fn chain_game(owner: Vec<Player>, edges: Vec<Vec<usize>>) -> Game {
        let n = owner.len();
        Game {
            owner,
            edges,
            labels: vec![Letter::empty(); n],
            initial: 0,
        }
    }

    #[test]
    fn trivial_pair_wins_everywhere() {
        // pair (empty, {Q}): forcing any infinite play suffices
        let game = chain_game(vec![Player::Zero, Player::One], vec![vec![1], vec![0]]);
        let g = GrpGame {
            game,
            condition: GrpCondition {
                pairs: vec![GrpPair {
                    fset: BitSet::new(2),
                    isets: vec![BitSet::full(2)],
                }],
            },
        };
        assert_eq!(solve_symbolic(&g).count(), 2);
    }

    #[test]
    fn full_avoid_set_loses_everywhere() {
        let game = chain_game(vec![Player::Zero], vec![vec![0]]);
        let g = GrpGame {
            game,
            condition: GrpCondition {
                pairs: vec![GrpPair {
                    fset: BitSet::full(1),
                    isets: vec![BitSet::full(1)],
                }],
            },
        };
        assert!(solve_symbolic(&g).is_empty());
    }
}
