//! The ranking domain for the lifting solver.
//!
//! A finite rank is a permutation of the pair indices `1..=k` (their current
//! importance) together with weights `w0..wk` bounded by the vertex count.
//! Ranks compare lexicographically on the interleaving
//! `w0 pi1 w1 pi2 w2 ... pik wk`, with infinity on top. The vertex-relative
//! relation `greater_at` additionally lets a vertex that visits the awaited
//! Buechi set of a pair count as progress even without a weight drop.

use smallvec::SmallVec;

use crate::automata::WaitingVector;

use super::game::GrpGame;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum RankValue {
    Finite {
        /// Pair indices `1..=k` in importance order.
        perm: SmallVec<[u8; 8]>,
        /// Weights `w0..wk` (one more entry than `perm`).
        weights: SmallVec<[u32; 9]>,
    },
    Infinite,
}

impl RankValue {
    /// The least element: identity permutation, all weights zero.
    pub fn bottom(pair_count: usize) -> RankValue {
        RankValue::Finite {
            perm: (1..=pair_count as u8).collect(),
            weights: std::iter::repeat(0).take(pair_count + 1).collect(),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, RankValue::Infinite)
    }

    /// The interleaving `w0 pi1 w1 ... pik wk` that defines the order.
    fn key(&self) -> Option<SmallVec<[u32; 17]>> {
        match self {
            RankValue::Infinite => None,
            RankValue::Finite { perm, weights } => {
                let mut key = SmallVec::new();
                key.push(weights[0]);
                for (i, p) in perm.iter().enumerate() {
                    key.push(*p as u32);
                    key.push(weights[i + 1]);
                }
                Some(key)
            }
        }
    }
}

impl PartialOrd for RankValue {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RankValue {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self.key(), other.key()) {
            (None, None) => std::cmp::Ordering::Equal,
            (None, _) => std::cmp::Ordering::Greater,
            (_, None) => std::cmp::Ordering::Less,
            (Some(a), Some(b)) => a.cmp(&b),
        }
    }
}

impl std::fmt::Display for RankValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RankValue::Infinite => write!(f, "inf"),
            RankValue::Finite { perm, weights } => {
                write!(f, "({}", weights[0])?;
                for (i, p) in perm.iter().enumerate() {
                    write!(f, " {} {}", p, weights[i + 1])?;
                }
                write!(f, ")")
            }
        }
    }
}

/// The vertex-relative strict relation `x >_{v,wf} y`: either `w0` strictly
/// drops, or they agree on `w0` and at the first level where the values
/// differ one of the progress cases fires (more important pair index, weight
/// drop outside the avoid set, or an awaited-Buechi-set visit).
pub fn rank_greater(
    g: &GrpGame,
    v: usize,
    wf: &WaitingVector,
    x: &RankValue,
    y: &RankValue,
) -> bool {
    strict_level(g, v, wf, x, y).is_some()
}

/// The level at which `x >_{v,wf} y` fires: 0 for the `w0` case, otherwise
/// the recursion depth `1..=k`; `None` when `x` is not greater. The
/// infinite rank is greater than every finite one.
pub fn strict_level(
    g: &GrpGame,
    v: usize,
    wf: &WaitingVector,
    x: &RankValue,
    y: &RankValue,
) -> Option<usize> {
    let (xp, xw) = match x {
        RankValue::Infinite => {
            return if y.is_infinite() { None } else { Some(0) };
        }
        RankValue::Finite { perm, weights } => (perm, weights),
    };
    let (yp, yw) = match y {
        RankValue::Infinite => return None,
        RankValue::Finite { perm, weights } => (perm, weights),
    };
    if xw[0] > yw[0] {
        return Some(0);
    }
    if xw[0] < yw[0] {
        return None;
    }
    let k = xp.len();
    for l in 0..k {
        if xp[l] > yp[l] {
            return Some(l + 1);
        }
        if xp[l] < yp[l] {
            return None;
        }
        let pair = xp[l] as usize - 1;
        if g.in_f(pair, v) {
            return None;
        }
        if g.in_i(pair, wf.get(pair) - 1, v) {
            return Some(l + 1);
        }
        if xw[l + 1] > yw[l + 1] {
            return Some(l + 1);
        }
        if xw[l + 1] < yw[l + 1] {
            return None;
        }
    }
    None // level k+1 never holds
}

/// The `>_lg`-least rank strictly greater (in the `>_{v,wf}` sense) than
/// `y`, or infinity when no finite rank qualifies. `n` bounds the weights.
pub fn min_increase(
    g: &GrpGame,
    n: u32,
    v: usize,
    wf: &WaitingVector,
    y: &RankValue,
) -> RankValue {
    let (yp, yw) = match y {
        RankValue::Infinite => return RankValue::Infinite,
        RankValue::Finite { perm, weights } => (perm, weights),
    };
    let k = yp.len();
    let mut best: Option<RankValue> = None;
    let mut consider = |cand: RankValue| {
        if best.as_ref().is_none_or(|b| cand < *b) {
            best = Some(cand);
        }
    };

    // Candidate that agrees with `y` up to level `l-1`, places `head` and
    // `w` at level `l`, and minimizes everything below.
    let build = |l: usize, head: u8, w: u32| -> RankValue {
        let mut perm: SmallVec<[u8; 8]> = yp[..l].to_vec().into();
        perm.push(head);
        let mut rest: Vec<u8> = (1..=k as u8)
            .filter(|p| !perm.contains(p))
            .collect();
        rest.sort_unstable();
        perm.extend(rest);
        let mut weights: SmallVec<[u32; 9]> = yw[..=l].to_vec().into();
        weights.push(w);
        while weights.len() < k + 1 {
            weights.push(0);
        }
        RankValue::Finite { perm, weights }
    };

    // w0 bump.
    if yw[0] + 1 <= n {
        let mut weights: SmallVec<[u32; 9]> = SmallVec::new();
        weights.push(yw[0] + 1);
        weights.extend(std::iter::repeat(0).take(k));
        consider(RankValue::Finite {
            perm: (1..=k as u8).collect(),
            weights,
        });
    }

    for l in 0..k {
        // A larger unused pair index at this level (no condition on v).
        let used = &yp[..l];
        if let Some(head) = (yp[l] + 1..=k as u8).find(|p| !used.contains(p)) {
            consider(build(l, head, 0));
        }
        let pair = yp[l] as usize - 1;
        if g.in_f(pair, v) {
            break; // deeper levels require v outside the avoid set
        }
        if g.in_i(pair, wf.get(pair) - 1, v) {
            // Progress by visiting the awaited Buechi set: any weight works,
            // the minimum is 0.
            consider(build(l, yp[l], 0));
        }
        if yw[l + 1] + 1 <= n {
            consider(build(l, yp[l], yw[l + 1] + 1));
        }
    }

    best.unwrap_or(RankValue::Infinite)
}

/// Advances the waiting vector at `v`: each pair whose awaited Buechi set
/// contains `v` moves to the next set, cyclically.
pub fn next_wf(g: &GrpGame, v: usize, wf: &WaitingVector) -> WaitingVector {
    let lens = g.iset_lens();
    wf.advanced(&lens, |i, j| g.in_i(i, j, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{GrpCondition, GrpPair};
    use crate::games::game::{Game, Player};
    use crate::ltl::Letter;
    use crate::util::BitSet;

    fn tiny_game(k_isets: Vec<Vec<Vec<usize>>>, fsets: Vec<Vec<usize>>) -> GrpGame {
        // two vertices 0 (player 0) and 1 (player 1), fully connected
        let n = 2;
        let pairs = fsets
            .into_iter()
            .zip(k_isets)
            .map(|(f, isets)| GrpPair {
                fset: BitSet::from_iter(n, f),
                isets: isets
                    .into_iter()
                    .map(|i| BitSet::from_iter(n, i))
                    .collect(),
            })
            .collect();
        GrpGame {
            game: Game {
                owner: vec![Player::Zero, Player::One],
                edges: vec![vec![0, 1], vec![0, 1]],
                labels: vec![Letter::empty(), Letter::empty()],
                initial: 0,
            },
            condition: GrpCondition { pairs },
        }
    }

    #[test]
    fn infinity_is_greatest() {
        let g = tiny_game(vec![vec![vec![0]]], vec![vec![]]);
        let wf = WaitingVector::initial(1);
        let bot = RankValue::bottom(1);
        assert!(rank_greater(&g, 0, &wf, &RankValue::Infinite, &bot));
        assert!(!rank_greater(&g, 0, &wf, &bot, &RankValue::Infinite));
        assert!(!rank_greater(&g, 0, &wf, &RankValue::Infinite, &RankValue::Infinite));
    }

    #[test]
    fn equal_ranks_not_greater_without_progress() {
        // v=1 is in no I set and no F set
        let g = tiny_game(vec![vec![vec![0]]], vec![vec![]]);
        let wf = WaitingVector::initial(1);
        let r = RankValue::bottom(1);
        assert!(!rank_greater(&g, 1, &wf, &r, &r));
    }

    #[test]
    fn buechi_visit_makes_equal_ranks_greater() {
        // v=0 lies in I_1^1 and outside F_1
        let g = tiny_game(vec![vec![vec![0]]], vec![vec![]]);
        let wf = WaitingVector::initial(1);
        let r = RankValue::bottom(1);
        assert!(rank_greater(&g, 0, &wf, &r, &r));
    }

    #[test]
    fn min_increase_examples() {
        let g = tiny_game(vec![vec![vec![0]]], vec![vec![]]);
        let wf = WaitingVector::initial(1);
        // y = infinity stays infinity
        assert_eq!(
            min_increase(&g, 3, 1, &wf, &RankValue::Infinite),
            RankValue::Infinite
        );
        // k=1, v=1 outside F and I, y=(pi=(1), w=(0,2)) -> weight bump to 3
        let y = RankValue::Finite {
            perm: [1u8].into_iter().collect(),
            weights: [0u32, 2].into_iter().collect(),
        };
        let expect = RankValue::Finite {
            perm: [1u8].into_iter().collect(),
            weights: [0u32, 3].into_iter().collect(),
        };
        assert_eq!(min_increase(&g, 3, 1, &wf, &y), expect);
        // with n = 2 the weight cannot rise; w0 must bump
        let expect2 = RankValue::Finite {
            perm: [1u8].into_iter().collect(),
            weights: [1u32, 0].into_iter().collect(),
        };
        assert_eq!(min_increase(&g, 2, 1, &wf, &y), expect2);
        // at v=0 (inside I) the same rank is already greater, minimum resets
        let expect3 = RankValue::Finite {
            perm: [1u8].into_iter().collect(),
            weights: [0u32, 0].into_iter().collect(),
        };
        assert_eq!(min_increase(&g, 3, 0, &wf, &y), expect3);
    }
}
