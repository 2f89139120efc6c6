//! Degeneralization: from generalized Rabin pairs to plain Rabin pairs.
//!
//! Pair `i` multiplies the state space by `[1..l_i]`, tracking which Buechi
//! set is awaited; visiting the awaited set advances the counter cyclically.
//! The `i`th Rabin pair then forbids `fset_i x B` and requires the awaited
//! wrap-around position `iset_i^{l_i} x {wf | wf(i) = l_i}` infinitely often.

use std::collections::HashMap;

use crate::util::BitSet;

use super::build::{TranslateError, TranslateOptions};
use super::types::{DgrwAutomaton, RabinAutomaton, RabinPair, WaitingVector};

/// The blow-up factor `|B|` of the condition.
pub fn degeneralization_index(a: &DgrwAutomaton) -> u128 {
    a.condition.degeneralization_index()
}

/// Degeneralizes with reachable-state pruning and default size limits.
pub fn degeneralize(a: &DgrwAutomaton) -> Result<RabinAutomaton, TranslateError> {
    degeneralize_with(a, &TranslateOptions::default(), true)
}

pub fn degeneralize_with(
    a: &DgrwAutomaton,
    opts: &TranslateOptions,
    prune: bool,
) -> Result<RabinAutomaton, TranslateError> {
    let b = a.condition.degeneralization_index();
    let total = a.state_count() as u128 * b;
    if total > opts.max_degen_states {
        return Err(TranslateError::DegeneralizationTooLarge {
            states: total,
            limit: opts.max_degen_states,
        });
    }
    let lens: Vec<usize> = a.condition.pairs.iter().map(|p| p.isets.len()).collect();
    let letters = a.alphabet.letter_count();

    let advance = |q: usize, wf: &WaitingVector| -> WaitingVector {
        wf.advanced(&lens, |i, j| a.condition.pairs[i].isets[j].contains(q))
    };

    let mut states: Vec<(usize, WaitingVector)> = Vec::new();
    let mut index: HashMap<(usize, WaitingVector), usize> = HashMap::new();
    if prune {
        states.push((a.initial, WaitingVector::initial(lens.len())));
        index.insert(states[0].clone(), 0);
        let mut head = 0;
        while head < states.len() {
            let (q, wf) = states[head].clone();
            head += 1;
            for mask in 0..letters {
                let key = (a.next(q, mask), advance(q, &wf));
                if !index.contains_key(&key) {
                    index.insert(key.clone(), states.len());
                    states.push(key);
                }
            }
        }
    } else {
        for q in 0..a.state_count() {
            for wf in WaitingVector::enumerate(&lens) {
                index.insert((q, wf.clone()), states.len());
                states.push((q, wf));
            }
        }
    }

    let delta: Vec<Vec<usize>> = states
        .iter()
        .map(|(q, wf)| {
            (0..letters)
                .map(|mask| index[&(a.next(*q, mask), advance(*q, wf))])
                .collect()
        })
        .collect();

    let n = states.len();
    let pairs: Vec<RabinPair> = a
        .condition
        .pairs
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let li = p.isets.len();
            let mut fset = BitSet::new(n);
            let mut iset = BitSet::new(n);
            for (s, (q, wf)) in states.iter().enumerate() {
                if p.fset.contains(*q) {
                    fset.insert(s);
                }
                if wf.get(i) == li && p.isets[li - 1].contains(*q) {
                    iset.insert(s);
                }
            }
            RabinPair { fset, iset }
        })
        .collect();

    let initial = index[&(a.initial, WaitingVector::initial(lens.len()))];
    Ok(RabinAutomaton {
        alphabet: a.alphabet.clone(),
        states,
        initial,
        delta,
        pairs,
    })
}
