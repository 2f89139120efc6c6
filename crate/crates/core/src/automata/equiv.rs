//! Bounded language-equivalence check between an automaton and a formula.
//!
//! Exhaustively compares automaton acceptance with the lasso evaluator on
//! every ultimately periodic word with `|prefix| <= bound` and
//! `1 <= |cycle| <= bound` over the automaton's alphabet. This is the gate
//! that certifies the translation; the acceptance extraction is only trusted
//! because this check passes on the regression corpus.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::ltl::{Formula, LassoWord, Node};
use crate::util::BitSet;

use super::types::{Alphabet, DgrwAutomaton, RabinAutomaton};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivVerdict {
    Equal,
    /// First lasso (cycles ordered by length then lexicographically, prefixes
    /// in depth-first letter order) where automaton and formula disagree.
    Counterexample(LassoWord),
}

/// Word-level view of an automaton: enough to run it and judge an infinity
/// set.
pub trait LassoAcceptor: Sync {
    fn state_count(&self) -> usize;
    fn initial(&self) -> usize;
    fn next(&self, state: usize, mask: usize) -> usize;
    fn accepts_inf(&self, inf: &BitSet) -> bool;
    fn alphabet(&self) -> &Alphabet;
}

impl LassoAcceptor for DgrwAutomaton {
    fn state_count(&self) -> usize {
        self.states.len()
    }
    fn initial(&self) -> usize {
        self.initial
    }
    fn next(&self, state: usize, mask: usize) -> usize {
        self.delta[state][mask]
    }
    fn accepts_inf(&self, inf: &BitSet) -> bool {
        self.condition.accepts_inf(inf)
    }
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }
}

impl LassoAcceptor for RabinAutomaton {
    fn state_count(&self) -> usize {
        self.states.len()
    }
    fn initial(&self) -> usize {
        self.initial
    }
    fn next(&self, state: usize, mask: usize) -> usize {
        self.delta[state][mask]
    }
    fn accepts_inf(&self, inf: &BitSet) -> bool {
        RabinAutomaton::accepts_inf(self, inf)
    }
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }
}

pub fn check_equiv_bounded(a: &DgrwAutomaton, f: &Formula, bound: usize) -> EquivVerdict {
    check_equiv_acceptor(a, f, bound)
}

pub fn check_equiv_bounded_rabin(r: &RabinAutomaton, f: &Formula, bound: usize) -> EquivVerdict {
    check_equiv_acceptor(r, f, bound)
}

pub fn check_equiv_acceptor<A: LassoAcceptor>(a: &A, f: &Formula, bound: usize) -> EquivVerdict {
    assert!(bound >= 1, "bound must be at least 1");
    let alphabet = a.alphabet();
    let letters = alphabet.letter_count();

    // All cycles, ordered by length then lexicographically.
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for c in 1..=bound {
        let mut tuple = vec![0usize; c];
        loop {
            cycles.push(tuple.clone());
            let mut i = c;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                tuple[i] += 1;
                if tuple[i] < letters {
                    break;
                }
                tuple[i] = 0;
            }
            if tuple.iter().all(|&d| d == 0) {
                break;
            }
        }
    }

    let hit = cycles
        .par_iter()
        .enumerate()
        .filter_map(|(ci, cycle)| {
            check_one_cycle(a, f, bound, cycle).map(|(pi, lasso)| (ci, pi, lasso))
        })
        .min_by_key(|(ci, pi, _)| (*ci, *pi));

    match hit {
        None => EquivVerdict::Equal,
        Some((_, _, (prefix, cycle))) => EquivVerdict::Counterexample(LassoWord::new(
            prefix.iter().map(|&m| alphabet.letter_of(m)).collect(),
            cycle.iter().map(|&m| alphabet.letter_of(m)).collect(),
        )),
    }
}

type Mismatch = (usize, (Vec<usize>, Vec<usize>));

/// Checks all prefixes for one cycle; returns the first mismatch with its
/// depth-first prefix index.
fn check_one_cycle<A: LassoAcceptor>(
    a: &A,
    f: &Formula,
    bound: usize,
    cycle: &[usize],
) -> Option<Mismatch> {
    let n = a.state_count();
    let letters_in_cycle = cycle;

    // Automaton side: verdict for every possible state at cycle entry.
    let mut path_states: Vec<BitSet> = Vec::with_capacity(n);
    let mut hop: Vec<usize> = Vec::with_capacity(n);
    for q in 0..n {
        let mut set = BitSet::new(n);
        let mut t = q;
        set.insert(t);
        for &m in letters_in_cycle {
            t = a.next(t, m);
            set.insert(t);
        }
        path_states.push(set);
        hop.push(t);
    }
    let mut verdict = vec![false; n];
    let mut loop_cache: HashMap<usize, bool> = HashMap::new();
    for q0 in 0..n {
        // Walk the cycle-composite map until a state repeats.
        let mut stamp = HashMap::new();
        let mut t = q0;
        while !stamp.contains_key(&t) {
            stamp.insert(t, true);
            t = hop[t];
        }
        // t is on the loop; take its minimal element as representative.
        let mut rep = t;
        let mut u = hop[t];
        while u != t {
            rep = rep.min(u);
            u = hop[u];
        }
        let acc = *loop_cache.entry(rep).or_insert_with(|| {
            let mut inf = BitSet::new(n);
            let mut u = rep;
            loop {
                inf.union_with(&path_states[u]);
                u = hop[u];
                if u == rep {
                    break;
                }
            }
            a.accepts_inf(&inf)
        });
        verdict[q0] = acc;
    }

    // Formula side: truth of every subformula at each cycle position.
    let mut cycle_truths: HashMap<*const Node, Vec<bool>> = HashMap::new();
    eval_cycle(f, cycle, a.alphabet(), &mut cycle_truths);

    // Depth-first prefix enumeration carrying the automaton state.
    let mut prefix: Vec<usize> = Vec::new();
    let mut counter = 0usize;
    dfs_prefixes(
        a,
        f,
        bound,
        cycle,
        &cycle_truths,
        a.initial(),
        &mut prefix,
        &mut counter,
        &verdict,
    )
}

#[allow(clippy::too_many_arguments)]
fn dfs_prefixes<A: LassoAcceptor>(
    a: &A,
    f: &Formula,
    bound: usize,
    cycle: &[usize],
    cycle_truths: &HashMap<*const Node, Vec<bool>>,
    state: usize,
    prefix: &mut Vec<usize>,
    counter: &mut usize,
    verdict: &[bool],
) -> Option<Mismatch> {
    let auto = verdict[state];
    let formula = eval_prefixed(f, prefix, cycle_truths, a.alphabet())[0];
    let idx = *counter;
    *counter += 1;
    if auto != formula {
        return Some((idx, (prefix.clone(), cycle.to_vec())));
    }
    if prefix.len() < bound {
        for mask in 0..a.alphabet().letter_count() {
            prefix.push(mask);
            let hit = dfs_prefixes(
                a,
                f,
                bound,
                cycle,
                cycle_truths,
                a.next(state, mask),
                prefix,
                counter,
                verdict,
            );
            prefix.pop();
            if hit.is_some() {
                return hit;
            }
        }
    }
    None
}

/// Truth of `f` at every cycle position, memoized per subformula node.
fn eval_cycle(
    f: &Formula,
    cycle: &[usize],
    alphabet: &Alphabet,
    memo: &mut HashMap<*const Node, Vec<bool>>,
) -> Vec<bool> {
    let key = f.node() as *const Node;
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let c = cycle.len();
    let out: Vec<bool> = match f.node() {
        Node::True => vec![true; c],
        Node::False => vec![false; c],
        Node::Atom(a) => {
            let i = alphabet.atom_index(a).expect("atom in alphabet");
            cycle.iter().map(|m| m >> i & 1 == 1).collect()
        }
        Node::NegAtom(a) => {
            let i = alphabet.atom_index(a).expect("atom in alphabet");
            cycle.iter().map(|m| m >> i & 1 == 0).collect()
        }
        Node::And(cs) => {
            let mut v = vec![true; c];
            for ch in cs {
                for (o, x) in v.iter_mut().zip(eval_cycle(ch, cycle, alphabet, memo)) {
                    *o &= x;
                }
            }
            v
        }
        Node::Or(cs) => {
            let mut v = vec![false; c];
            for ch in cs {
                for (o, x) in v.iter_mut().zip(eval_cycle(ch, cycle, alphabet, memo)) {
                    *o |= x;
                }
            }
            v
        }
        Node::F(x) => {
            let any = eval_cycle(x, cycle, alphabet, memo).iter().any(|b| *b);
            vec![any; c]
        }
        Node::G(x) => {
            let all = eval_cycle(x, cycle, alphabet, memo).iter().all(|b| *b);
            vec![all; c]
        }
    };
    memo.insert(key, out.clone());
    out
}

/// Truth of `f` at positions `0..=|prefix|` of `prefix . cycle^omega`;
/// slot `|prefix|` is the (precomputed) truth at cycle position 0.
fn eval_prefixed(
    f: &Formula,
    prefix: &[usize],
    cycle_truths: &HashMap<*const Node, Vec<bool>>,
    alphabet: &Alphabet,
) -> Vec<bool> {
    let p = prefix.len();
    let entry = cycle_truths[&(f.node() as *const Node)][0];
    match f.node() {
        Node::True => vec![true; p + 1],
        Node::False => vec![false; p + 1],
        Node::Atom(a) => {
            let i = alphabet.atom_index(a).expect("atom in alphabet");
            let mut v: Vec<bool> = prefix.iter().map(|m| m >> i & 1 == 1).collect();
            v.push(entry);
            v
        }
        Node::NegAtom(a) => {
            let i = alphabet.atom_index(a).expect("atom in alphabet");
            let mut v: Vec<bool> = prefix.iter().map(|m| m >> i & 1 == 0).collect();
            v.push(entry);
            v
        }
        Node::And(cs) => {
            let mut v = vec![true; p + 1];
            for ch in cs {
                for (o, x) in v
                    .iter_mut()
                    .zip(eval_prefixed(ch, prefix, cycle_truths, alphabet))
                {
                    *o &= x;
                }
            }
            v
        }
        Node::Or(cs) => {
            let mut v = vec![false; p + 1];
            for ch in cs {
                for (o, x) in v
                    .iter_mut()
                    .zip(eval_prefixed(ch, prefix, cycle_truths, alphabet))
                {
                    *o |= x;
                }
            }
            v
        }
        Node::F(x) => {
            let cv = eval_prefixed(x, prefix, cycle_truths, alphabet);
            let mut v = vec![false; p + 1];
            v[p] = entry;
            for i in (0..p).rev() {
                v[i] = cv[i] || v[i + 1];
            }
            v
        }
        Node::G(x) => {
            let cv = eval_prefixed(x, prefix, cycle_truths, alphabet);
            let mut v = vec![false; p + 1];
            v[p] = entry;
            for i in (0..p).rev() {
                v[i] = cv[i] && v[i + 1];
            }
            v
        }
    }
}
