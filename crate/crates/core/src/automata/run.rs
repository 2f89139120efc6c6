//! Running automata on ultimately periodic words.

use crate::ltl::LassoWord;
use crate::util::BitSet;

use super::types::{Alphabet, DgrwAutomaton, RabinAutomaton};

/// The exact set of states visited infinitely often by the unique run on
/// `prefix . cycle^omega`, where `next` is the transition function and the
/// lasso has already been projected to letter masks.
pub fn inf_set<F: Fn(usize, usize) -> usize>(
    state_count: usize,
    initial: usize,
    next: F,
    prefix: &[usize],
    cycle: &[usize],
) -> BitSet {
    let mut s = initial;
    for &mask in prefix {
        s = next(s, mask);
    }
    // Iterate whole cycle passes until the state at the cycle boundary
    // repeats; everything visited from the first repeat on is infinite.
    let mut seen_at = vec![usize::MAX; state_count];
    let mut trajectory = vec![s];
    loop {
        let at = *trajectory.last().unwrap();
        if seen_at[at] != usize::MAX {
            break;
        }
        seen_at[at] = trajectory.len() - 1;
        let mut t = at;
        for &mask in cycle {
            t = next(t, mask);
        }
        trajectory.push(t);
    }
    let loop_start = seen_at[*trajectory.last().unwrap()];
    let mut inf = BitSet::new(state_count);
    for &entry in &trajectory[loop_start..trajectory.len() - 1] {
        let mut t = entry;
        inf.insert(t);
        for &mask in cycle {
            t = next(t, mask);
            inf.insert(t);
        }
    }
    inf
}

fn project(alphabet: &Alphabet, w: &LassoWord) -> (Vec<usize>, Vec<usize>) {
    (
        w.prefix.iter().map(|l| alphabet.mask_of(l)).collect(),
        w.cycle.iter().map(|l| alphabet.mask_of(l)).collect(),
    )
}

/// Whether the automaton accepts the lasso word: the infinity set of the run
/// must avoid some pair's `fset` while meeting all of its Buechi sets.
pub fn accepts_lasso(a: &DgrwAutomaton, w: &LassoWord) -> bool {
    let (prefix, cycle) = project(&a.alphabet, w);
    let inf = inf_set(a.state_count(), a.initial, |s, m| a.next(s, m), &prefix, &cycle);
    a.condition.accepts_inf(&inf)
}

/// Rabin-acceptance variant of [`accepts_lasso`].
pub fn accepts_lasso_rabin(r: &RabinAutomaton, w: &LassoWord) -> bool {
    let (prefix, cycle) = project(&r.alphabet, w);
    let inf = inf_set(r.state_count(), r.initial, |s, m| r.next(s, m), &prefix, &cycle);
    r.accepts_inf(&inf)
}
