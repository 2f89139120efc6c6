//! The model-checking pipeline: translate, product, winning end components,
//! maximal reachability.

use num::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::automata::{build_dgrw_with, TranslateError, TranslateOptions};
use crate::ltl::Formula;
use crate::util::BitSet;

use super::mec::mec_decomposition_masked;
use super::model::{Mdp, Rational, VertexKind};
use super::product::{product, ProductMdp};
use super::reach::{max_reach, rational_to_f64, ReachMode, ReachValues};

/// Union of the winning end components of the product: for each pair, the
/// avoid set is removed (iterated to closure so distributions stay total),
/// the remainder is decomposed into MECs, and a MEC wins when it meets every
/// Buechi set of the pair.
pub fn winning_union(p: &ProductMdp) -> BitSet {
    let n = p.mdp.vertex_count();
    let per_pair: Vec<BitSet> = p
        .condition
        .pairs
        .par_iter()
        .map(|pair| {
            let alive = remove_closure(&p.mdp, &pair.fset);
            let mut win = BitSet::new(n);
            for mec in mec_decomposition_masked(&p.mdp, &alive) {
                if pair.isets.iter().all(|iset| iset.intersects(&mec)) {
                    win.union_with(&mec);
                }
            }
            win
        })
        .collect();
    let mut w = BitSet::new(n);
    for win in per_pair {
        w.union_with(&win);
    }
    w
}

/// Deletes `avoid` and iterates to closure: probabilistic vertices keep
/// their whole distribution alive, player-0 vertices keep some successor.
fn remove_closure(m: &Mdp, avoid: &BitSet) -> BitSet {
    let n = m.vertex_count();
    let mut alive = BitSet::full(n);
    alive.subtract(avoid);
    loop {
        let mut changed = false;
        for v in alive.iter().collect::<Vec<_>>() {
            let bad = match m.kind[v] {
                VertexKind::Probabilistic => {
                    m.edges[v].iter().any(|&w| !alive.contains(w))
                }
                VertexKind::Player0 => !m.edges[v].iter().any(|&w| alive.contains(w)),
            };
            if bad {
                alive.remove(v);
                changed = true;
            }
        }
        if !changed {
            return alive;
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum McMode {
    Max,
    Min,
}

#[derive(Debug, Error)]
pub enum McError {
    #[error(transparent)]
    Translate(#[from] TranslateError),
}

#[derive(Clone, Debug)]
pub struct McOutcome {
    pub value: McValue,
    pub automaton_states: usize,
    pub product_states: usize,
    pub pair_count: usize,
}

#[derive(Clone, Debug)]
pub enum McValue {
    Approx(f64),
    Exact(Rational),
}

impl McValue {
    pub fn approx(&self) -> f64 {
        match self {
            McValue::Approx(x) => *x,
            McValue::Exact(r) => rational_to_f64(r),
        }
    }
}

/// Maximal (or minimal) probability that the MDP satisfies the formula, at
/// the initial vertex. The minimal case runs the maximal pipeline on the
/// negated formula and returns the exact complement.
pub fn model_check(m: &Mdp, f: &Formula, mode: McMode, reach: ReachMode) -> Result<McOutcome, McError> {
    model_check_with(m, f, mode, reach, &TranslateOptions::default())
}

pub fn model_check_with(
    m: &Mdp,
    f: &Formula,
    mode: McMode,
    reach: ReachMode,
    opts: &TranslateOptions,
) -> Result<McOutcome, McError> {
    match mode {
        McMode::Max => {
            let a = build_dgrw_with(f, opts)?;
            let p = product(m, &a);
            let outcome = solve_product(&p, reach);
            Ok(McOutcome {
                automaton_states: a.state_count(),
                ..outcome
            })
        }
        McMode::Min => {
            let neg = f.negated();
            let max = model_check_with(m, &neg, McMode::Max, reach, opts)?;
            Ok(McOutcome {
                value: match max.value {
                    McValue::Approx(x) => McValue::Approx(1.0 - x),
                    McValue::Exact(r) => McValue::Exact(Rational::one() - r),
                },
                ..max
            })
        }
    }
}

/// Step 3 of the pipeline on an already-built product.
pub fn solve_product(p: &ProductMdp, reach: ReachMode) -> McOutcome {
    let w = winning_union(p);
    let value = if w.is_empty() {
        match reach {
            ReachMode::Iterative { .. } => McValue::Approx(0.0),
            ReachMode::Exact => McValue::Exact(Rational::zero()),
        }
    } else {
        match max_reach(&p.mdp, &w, reach) {
            ReachValues::Iterative(x) => McValue::Approx(x[p.mdp.initial]),
            ReachValues::Exact(x) => McValue::Exact(x[p.mdp.initial].clone()),
        }
    };
    McOutcome {
        value,
        automaton_states: 0,
        product_states: p.mdp.vertex_count(),
        pair_count: p.condition.pair_count(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse_any_atoms;
    use crate::mdp::model::parse_mdp;

    #[test]
    fn trivial_formula_has_probability_one() {
        let m = parse_mdp(
            "mdp\nstates: 2\ninit: 0\nplayer0: 0\nprob: 1\nedge 0 1\npedge 1 0 1/1\n",
        )
        .unwrap();
        let out = model_check(&m, &Formula::tt(), McMode::Max, ReachMode::Exact).unwrap();
        match out.value {
            McValue::Exact(r) => assert!(r.is_one()),
            _ => unreachable!(),
        }
    }

    #[test]
    fn recurrence_on_self_loop() {
        let m = parse_mdp("mdp\nstates: 1\ninit: 0\nplayer0: 0\nprob:\nlabel 0: a\nedge 0 0\n")
            .unwrap();
        let f = parse_any_atoms("G F a").unwrap();
        let out = model_check(&m, &f, McMode::Max, ReachMode::Exact).unwrap();
        assert!(matches!(out.value, McValue::Exact(r) if r.is_one()));
    }

    #[test]
    fn choice_between_sure_and_risky_loop() {
        // start chooses between an {a}-self-loop and a probabilistic vertex
        // that keeps alternating; G F a is surely achievable via the left.
        let m = parse_mdp(
            "mdp\nstates: 3\ninit: 0\nplayer0: 0 1\nprob: 2\n\
             label 1: a\nlabel 2: a\n\
             edge 0 1\nedge 0 2\nedge 1 1\npedge 2 2 1/2\npedge 2 0 1/2\n",
        )
        .unwrap();
        let f = parse_any_atoms("G F a").unwrap();
        let out = model_check(&m, &f, McMode::Max, ReachMode::Exact).unwrap();
        assert!(matches!(out.value, McValue::Exact(r) if r.is_one()));
    }

    #[test]
    fn min_is_exact_complement_of_negation_max() {
        let m = parse_mdp(
            "mdp\nstates: 2\ninit: 0\nplayer0:\nprob: 0 1\nlabel 1: a\n\
             pedge 0 0 1/2\npedge 0 1 1/2\npedge 1 1 1/1\n",
        )
        .unwrap();
        let f = parse_any_atoms("F a").unwrap();
        let min = model_check(&m, &f, McMode::Min, ReachMode::Exact).unwrap();
        let neg_max = model_check(&m, &f.negated(), McMode::Max, ReachMode::Exact).unwrap();
        match (min.value, neg_max.value) {
            (McValue::Exact(a), McValue::Exact(b)) => {
                assert_eq!(a + b, Rational::one());
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn winning_union_trivial_pairs() {
        let m = parse_mdp(
            "mdp\nstates: 2\ninit: 0\nplayer0: 0 1\nprob:\nedge 0 1\nedge 1 0\n",
        )
        .unwrap();
        let a = crate::automata::build_dgrw(&Formula::tt()).unwrap();
        let p = product(&m, &a);
        // the tt pair is (empty, {Q}): every MEC wins
        let w = winning_union(&p);
        assert_eq!(w.count(), 2);
    }
}
