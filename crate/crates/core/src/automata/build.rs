//! Construction of the deterministic automaton with generalized Rabin pairs.
//!
//! States are pairs (progressed formula, class of the last letter read). The
//! acceptance condition is extracted by enumerating assignments to the
//! temporal subformulas: a `G`-subformula is guessed to hold from some point
//! on or never again, an `F`-subformula to hold at infinitely many positions
//! or almost never. Each consistent assignment yields one candidate pair:
//!
//!  * avoid set: states whose formula component evaluates to false under the
//!    assignment, plus states whose letter violates the body of an assumed
//!    `G`-subformula,
//!  * one Buechi set per letter-dependent `F`-subformula assumed recurrent:
//!    the states whose letter satisfies its body under the assignment.
//!
//! Pairs that can accept nothing are dropped, subsumed pairs are pruned, and
//! states indistinguishable by the surviving condition are merged, which
//! collapses the letter classes to exactly the distinctions the condition
//! needs. Construction correctness is gated by bounded language-equivalence
//! checks against the lasso evaluator, not by the construction alone.

use std::collections::HashMap;

use thiserror::Error;

use crate::ltl::{canon_var_count, canonicalize, Formula, Node, MAX_CANON_VARS};
use crate::util::{sccs, BitSet};

use super::progress::Progressor;
use super::types::{Alphabet, DgrwAutomaton, DgrwState, GrpCondition, GrpPair};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TranslateError {
    #[error("alphabet too large: {atoms} atoms (limit {limit})")]
    AlphabetTooLarge { atoms: usize, limit: usize },
    #[error("formula too large ({vars} boolean variables, limit {limit})")]
    FormulaTooLarge { vars: usize, limit: usize },
    #[error("degeneralization too large: {states} states (limit {limit})")]
    DegeneralizationTooLarge { states: u128, limit: u128 },
}

#[derive(Debug, Clone)]
pub struct TranslateOptions {
    /// Bound on `|Ap(f)|`; the state space and the letter-indexed transition
    /// tables grow with `2^atoms`.
    pub max_atoms: usize,
    /// Bound on `|Q| * |B|` for degeneralization.
    pub max_degen_states: u128,
}

impl Default for TranslateOptions {
    fn default() -> Self {
        TranslateOptions {
            max_atoms: 10,
            max_degen_states: 1_000_000,
        }
    }
}

/// Translates a canonical formula into a deterministic automaton with a
/// generalized-Rabin-pairs condition accepting exactly its language.
pub fn build_dgrw(f: &Formula) -> Result<DgrwAutomaton, TranslateError> {
    build_dgrw_with(f, &TranslateOptions::default())
}

pub fn build_dgrw_with(
    f: &Formula,
    opts: &TranslateOptions,
) -> Result<DgrwAutomaton, TranslateError> {
    let vars = canon_var_count(f);
    if vars > MAX_CANON_VARS {
        return Err(TranslateError::FormulaTooLarge {
            vars,
            limit: MAX_CANON_VARS,
        });
    }
    let f = canonicalize(f);
    let alphabet = Alphabet::of_formula(&f);
    if alphabet.atom_count() > opts.max_atoms {
        return Err(TranslateError::AlphabetTooLarge {
            atoms: alphabet.atom_count(),
            limit: opts.max_atoms,
        });
    }

    let raw = explore(&f, alphabet.clone());
    let mut pairs = extract_condition(&f, &raw);
    prune_empty(&mut pairs, &raw);
    prune_subsumed(&mut pairs);
    if pairs.is_empty() {
        // Nothing can be accepted; keep the condition shape well-formed.
        let full = BitSet::full(raw.states.len());
        pairs.push(GrpPair {
            fset: full.clone(),
            isets: vec![full],
        });
    }
    Ok(assemble(f, raw, pairs))
}

// ---------------------------------------------------------------------------
// Raw state space: every (formula, letter) pair reachable by progression,
// with `true`/`false` collapsed and the unread-letter initial state.

struct RawSpace {
    alphabet: Alphabet,
    /// (formula, letter mask); the mask is `None` for the initial state and
    /// for the collapsed `true`/`false` sinks.
    states: Vec<(Formula, Option<usize>)>,
    initial: usize,
    delta: Vec<Vec<usize>>,
}

fn explore(f: &Formula, alphabet: Alphabet) -> RawSpace {
    let letters = alphabet.letter_count();
    let mut prog = Progressor::new(alphabet.clone());
    let mut index: HashMap<(Formula, Option<usize>), usize> = HashMap::new();
    let mut states: Vec<(Formula, Option<usize>)> = Vec::new();
    let mut delta: Vec<Vec<usize>> = Vec::new();
    let key_of = |chi: &Formula, mask: usize| -> (Formula, Option<usize>) {
        if chi.is_true() || chi.is_false() {
            (chi.clone(), None)
        } else {
            (chi.clone(), Some(mask))
        }
    };

    let init_key = (f.clone(), None);
    index.insert(init_key.clone(), 0);
    states.push(init_key);
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        let chi = states[s].0.clone();
        let mut row = Vec::with_capacity(letters);
        for mask in 0..letters {
            let next = prog.step(&chi, mask);
            let key = key_of(&next, mask);
            let id = *index.entry(key.clone()).or_insert_with(|| {
                states.push(key);
                queue.push_back(states.len() - 1);
                states.len() - 1
            });
            row.push(id);
        }
        delta.push(row);
        debug_assert_eq!(delta.len() - 1, s);
    }
    RawSpace {
        alphabet,
        states,
        initial: 0,
        delta,
    }
}

// ---------------------------------------------------------------------------
// Acceptance extraction.

/// Value vector over the letter space `2^{Ap}` (bit per letter mask).
type LetterVec = Vec<u64>;

fn lv_words(letters: usize) -> usize {
    letters.div_ceil(64)
}

fn lv_const(letters: usize, value: bool) -> LetterVec {
    let mut v = vec![if value { !0u64 } else { 0 }; lv_words(letters)];
    if value && letters % 64 != 0 {
        let last = v.len() - 1;
        v[last] &= (1u64 << (letters % 64)) - 1;
    }
    v
}

fn lv_get(v: &LetterVec, mask: usize) -> bool {
    v[mask / 64] >> (mask % 64) & 1 == 1
}

fn lv_is_const(v: &LetterVec, letters: usize) -> Option<bool> {
    if *v == lv_const(letters, false) {
        Some(false)
    } else if *v == lv_const(letters, true) {
        Some(true)
    } else {
        None
    }
}

/// Evaluates `body` for every letter, with maximal temporal subformulas
/// resolved through `alpha`.
fn eval_letters(
    body: &Formula,
    alpha: &dyn Fn(&Formula) -> bool,
    atom_cols: &HashMap<std::sync::Arc<str>, LetterVec>,
    letters: usize,
) -> LetterVec {
    match body.node() {
        Node::True => lv_const(letters, true),
        Node::False => lv_const(letters, false),
        Node::Atom(a) => atom_cols[a].clone(),
        Node::NegAtom(a) => {
            let mut v = atom_cols[a].clone();
            for w in v.iter_mut() {
                *w = !*w;
            }
            let mut t = lv_const(letters, true);
            for (w, m) in v.iter_mut().zip(&t) {
                *w &= m;
            }
            t.clear();
            v
        }
        Node::F(_) | Node::G(_) => lv_const(letters, alpha(body)),
        Node::And(cs) => {
            let mut v = lv_const(letters, true);
            for c in cs {
                let cv = eval_letters(c, alpha, atom_cols, letters);
                for (w, x) in v.iter_mut().zip(&cv) {
                    *w &= x;
                }
            }
            v
        }
        Node::Or(cs) => {
            let mut v = lv_const(letters, false);
            for c in cs {
                let cv = eval_letters(c, alpha, atom_cols, letters);
                for (w, x) in v.iter_mut().zip(&cv) {
                    *w |= x;
                }
            }
            v
        }
    }
}

/// Evaluates a letter-free state formula under the assignment.
fn eval_const(chi: &Formula, alpha: &dyn Fn(&Formula) -> bool) -> bool {
    match chi.node() {
        Node::True => true,
        Node::False => false,
        Node::Atom(_) | Node::NegAtom(_) => {
            unreachable!("progressed state formulas are literal-free")
        }
        Node::F(_) | Node::G(_) => alpha(chi),
        Node::And(cs) => cs.iter().all(|c| eval_const(c, alpha)),
        Node::Or(cs) => cs.iter().any(|c| eval_const(c, alpha)),
    }
}

fn extract_condition(f: &Formula, raw: &RawSpace) -> Vec<GrpPair> {
    let letters = raw.alphabet.letter_count();
    let n = raw.states.len();
    let (fsubs_set, gsubs_set) = f.fg_subformulas();
    let mut fsubs: Vec<Formula> = fsubs_set.into_iter().collect();
    // Inner subformulas first, so assignments of a body's own F-subformulas
    // are fixed before the body is evaluated.
    fsubs.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| a.cmp(b)));
    let gsubs: Vec<Formula> = gsubs_set.into_iter().collect();

    let mut atom_cols: HashMap<std::sync::Arc<str>, LetterVec> = HashMap::new();
    for (i, a) in raw.alphabet.atoms().enumerate() {
        let mut col = lv_const(letters, false);
        for mask in 0..letters {
            if mask >> i & 1 == 1 {
                col[mask / 64] |= 1 << (mask % 64);
            }
        }
        atom_cols.insert(a.into(), col);
    }

    // Positions of the temporal subformulas for assignment lookup.
    let mut pos: HashMap<Formula, (bool, usize)> = HashMap::new();
    for (i, g) in gsubs.iter().enumerate() {
        pos.insert(g.clone(), (true, i));
    }
    for (i, h) in fsubs.iter().enumerate() {
        pos.insert(h.clone(), (false, i));
    }

    let bodies: Vec<Formula> = fsubs
        .iter()
        .map(|h| match h.node() {
            Node::F(x) => x.clone(),
            _ => unreachable!(),
        })
        .collect();
    let gbodies: Vec<Formula> = gsubs
        .iter()
        .map(|g| match g.node() {
            Node::G(x) => x.clone(),
            _ => unreachable!(),
        })
        .collect();

    // Distinct state formulas (excluding the true/false sinks handled
    // specially) for the formula-component test.
    let mut chis: Vec<Formula> = raw
        .states
        .iter()
        .map(|(c, _)| c.clone())
        .filter(|c| !c.is_true() && !c.is_false())
        .collect();
    chis.sort();
    chis.dedup();

    let mut out: Vec<GrpPair> = Vec::new();
    let gcount = gsubs.len();
    let fcount = fsubs.len();
    assert!(gcount + fcount < 32, "too many temporal subformulas");

    for gmask in 0..(1u32 << gcount) {
        'combo: for fmask in 0..(1u32 << fcount) {
            let alpha = |t: &Formula| -> bool {
                let (is_g, i) = pos[t];
                if is_g {
                    gmask >> i & 1 == 1
                } else {
                    fmask >> i & 1 == 1
                }
            };
            // Letter profile of every F-subformula body; assignments that
            // contradict a letter-independent value are skipped (the
            // consistent assignment produces the same pair).
            let mut obligations: Vec<LetterVec> = Vec::new();
            for (i, body) in bodies.iter().enumerate() {
                let lv = eval_letters(body, &alpha, &atom_cols, letters);
                let bit = fmask >> i & 1 == 1;
                match lv_is_const(&lv, letters) {
                    Some(c) => {
                        if c != bit {
                            continue 'combo;
                        }
                    }
                    None => {
                        if bit {
                            obligations.push(lv);
                        }
                    }
                }
            }
            // Letters contradicting an assumed G-subformula body.
            let mut gbad = lv_const(letters, false);
            for (i, body) in gbodies.iter().enumerate() {
                if gmask >> i & 1 == 1 {
                    let lv = eval_letters(body, &alpha, &atom_cols, letters);
                    for (w, x) in gbad.iter_mut().zip(&lv) {
                        *w |= !x;
                    }
                }
            }
            let mut t = lv_const(letters, true);
            for (w, m) in gbad.iter_mut().zip(&t) {
                *w &= m;
            }
            t.clear();

            let chi_ok: HashMap<&Formula, bool> =
                chis.iter().map(|c| (c, eval_const(c, &alpha))).collect();

            // Assemble the pair over the raw states.
            let mut fset = BitSet::new(n);
            let mut isets: Vec<BitSet> = obligations.iter().map(|_| BitSet::new(n)).collect();
            for (s, (chi, mask)) in raw.states.iter().enumerate() {
                if chi.is_true() {
                    for iset in isets.iter_mut() {
                        iset.insert(s);
                    }
                    continue;
                }
                if chi.is_false() {
                    fset.insert(s);
                    continue;
                }
                let Some(mask) = mask else {
                    continue; // unread-letter initial state: in no set
                };
                if !chi_ok[chi] || lv_get(&gbad, *mask) {
                    fset.insert(s);
                }
                for (iset, lv) in isets.iter_mut().zip(&obligations) {
                    if lv_get(lv, *mask) {
                        iset.insert(s);
                    }
                }
            }
            if isets.is_empty() {
                isets.push(BitSet::full(n));
            }
            // Within a pair, a Buechi set containing another is implied by it.
            isets.sort();
            isets.dedup();
            let mut keep = vec![true; isets.len()];
            for i in 0..isets.len() {
                for j in 0..isets.len() {
                    if i != j && keep[i] && keep[j] && isets[j].is_subset(&isets[i]) {
                        keep[i] = false;
                    }
                }
            }
            let isets: Vec<BitSet> = isets
                .into_iter()
                .zip(keep)
                .filter(|(_, k)| *k)
                .map(|(s, _)| s)
                .collect();
            let pair = GrpPair { fset, isets };
            if !out.contains(&pair) {
                out.push(pair);
            }
        }
    }
    out.sort_by(|a, b| a.fset.cmp(&b.fset).then_with(|| a.isets.cmp(&b.isets)));
    out
}

/// Drops pairs that cannot accept any run: there must be a strongly
/// connected set avoiding the pair's `fset` and meeting every Buechi set.
fn prune_empty(pairs: &mut Vec<GrpPair>, raw: &RawSpace) {
    let n = raw.states.len();
    let mut scc_cache: HashMap<BitSet, Vec<BitSet>> = HashMap::new();
    pairs.retain(|p| {
        let comps = scc_cache.entry(p.fset.clone()).or_insert_with(|| {
            sccs(
                n,
                |v| !p.fset.contains(v),
                |v| raw.delta[v].iter().copied(),
            )
            .into_iter()
            .filter(|c| c.has_edge)
            .map(|c| BitSet::from_iter(n, c.vertices))
            .collect()
        });
        comps
            .iter()
            .any(|c| p.isets.iter().all(|iset| iset.intersects(c)))
    });
}

/// `a` subsumes `b` when every run accepted by `b` is accepted by `a`:
/// `a.fset` is contained in `b.fset` and every Buechi set of `a` contains
/// some Buechi set of `b`.
fn subsumes(a: &GrpPair, b: &GrpPair) -> bool {
    a.fset.is_subset(&b.fset)
        && a.isets
            .iter()
            .all(|ia| b.isets.iter().any(|ib| ib.is_subset(ia)))
}

fn prune_subsumed(pairs: &mut Vec<GrpPair>) {
    let mut alive = vec![true; pairs.len()];
    for i in 0..pairs.len() {
        if !alive[i] {
            continue;
        }
        for j in 0..pairs.len() {
            if i == j || !alive[j] || !alive[i] {
                continue;
            }
            if subsumes(&pairs[i], &pairs[j]) && (!subsumes(&pairs[j], &pairs[i]) || i < j) {
                alive[j] = false;
            }
        }
    }
    let mut it = alive.iter();
    pairs.retain(|_| *it.next().unwrap());
}

// ---------------------------------------------------------------------------
// Quotient: states with the same formula component and the same membership
// profile across the surviving condition are indistinguishable (identical
// successors and identical acceptance), and the initial state can be merged
// into any state sharing its formula component because acceptance never
// depends on the first state of a run.

fn assemble(f: Formula, raw: RawSpace, pairs: Vec<GrpPair>) -> DgrwAutomaton {
    let n = raw.states.len();
    let letters = raw.alphabet.letter_count();

    let profile = |s: usize| -> Vec<bool> {
        let mut v = Vec::new();
        for p in &pairs {
            v.push(p.fset.contains(s));
            for iset in &p.isets {
                v.push(iset.contains(s));
            }
        }
        v
    };

    // Group raw states by (formula, membership profile).
    let mut group_of = vec![usize::MAX; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut key_to_group: HashMap<(Formula, Vec<bool>), usize> = HashMap::new();
    for s in 0..n {
        let key = (raw.states[s].0.clone(), profile(s));
        let g = *key_to_group.entry(key).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        group_of[s] = g;
        groups[g].push(s);
    }

    // Initial state: prefer a state that also occurs with a letter read, so
    // the unread-letter marker disappears whenever the initial formula is
    // reachable again (the choice does not affect acceptance).
    let mut init_group = group_of[raw.initial];
    if groups[init_group] == vec![raw.initial] {
        if let Some(host) = (0..n)
            .find(|&s| s != raw.initial && raw.states[s].0 == raw.states[raw.initial].0)
        {
            init_group = group_of[host];
        }
    }

    // Reachability over groups, letters in ascending order, dense final ids.
    let mut final_id = vec![usize::MAX; groups.len()];
    let mut order: Vec<usize> = Vec::new();
    let mut queue = std::collections::VecDeque::from([init_group]);
    final_id[init_group] = 0;
    order.push(init_group);
    while let Some(g) = queue.pop_front() {
        let rep = groups[g][0];
        for mask in 0..letters {
            let tg = group_of[raw.delta[rep][mask]];
            if final_id[tg] == usize::MAX {
                final_id[tg] = order.len();
                order.push(tg);
                queue.push_back(tg);
            }
        }
    }

    let m = order.len();
    let mut states = Vec::with_capacity(m);
    let mut delta = Vec::with_capacity(m);
    for &g in &order {
        let rep = groups[g][0];
        let min_mask = groups[g]
            .iter()
            .filter_map(|&s| raw.states[s].1)
            .min();
        states.push(DgrwState {
            formula: raw.states[rep].0.clone(),
            letter: min_mask.map(|mask| raw.alphabet.letter_of(mask)),
        });
        delta.push(
            (0..letters)
                .map(|mask| final_id[group_of[raw.delta[rep][mask]]])
                .collect::<Vec<usize>>(),
        );
    }

    let remap = |set: &BitSet| -> BitSet {
        let mut out = BitSet::new(m);
        for s in set.iter() {
            let id = final_id[group_of[s]];
            if id != usize::MAX {
                out.insert(id);
            }
        }
        out
    };
    let mut mapped: Vec<GrpPair> = pairs
        .iter()
        .map(|p| GrpPair {
            fset: remap(&p.fset),
            isets: p.isets.iter().map(&remap).collect(),
        })
        .collect();
    for p in mapped.iter_mut() {
        p.isets.sort();
        p.isets.dedup();
    }
    mapped.sort_by(|a, b| a.fset.cmp(&b.fset).then_with(|| a.isets.cmp(&b.isets)));
    mapped.dedup();

    DgrwAutomaton {
        formula: f,
        alphabet: raw.alphabet,
        states,
        initial: 0,
        delta,
        condition: GrpCondition { pairs: mapped },
    }
}
