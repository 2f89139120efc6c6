use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::ltl::{Formula, Letter};
use crate::util::BitSet;

/// The atoms of a formula, sorted; letters are bitmasks over this order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Alphabet {
    atoms: Vec<Arc<str>>,
}

impl Alphabet {
    pub fn new<I: IntoIterator<Item = S>, S: AsRef<str>>(atoms: I) -> Alphabet {
        let mut atoms: Vec<Arc<str>> = atoms.into_iter().map(|a| a.as_ref().into()).collect();
        atoms.sort();
        atoms.dedup();
        Alphabet { atoms }
    }

    pub fn of_formula(f: &Formula) -> Alphabet {
        Alphabet {
            atoms: f.atoms().into_iter().collect(),
        }
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn atoms(&self) -> impl Iterator<Item = &str> {
        self.atoms.iter().map(|a| a.as_ref())
    }

    pub fn letter_count(&self) -> usize {
        1usize << self.atoms.len()
    }

    pub fn atom_index(&self, name: &str) -> Option<usize> {
        self.atoms.binary_search_by(|a| a.as_ref().cmp(name)).ok()
    }

    /// Projects a letter onto this alphabet; atoms outside it are dropped.
    pub fn mask_of(&self, letter: &Letter) -> usize {
        let mut m = 0;
        for (i, a) in self.atoms.iter().enumerate() {
            if letter.contains(a) {
                m |= 1 << i;
            }
        }
        m
    }

    pub fn letter_of(&self, mask: usize) -> Letter {
        Letter::from_names(
            self.atoms
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, a)| a.as_ref()),
        )
    }
}

/// A generalized Rabin pair: a run is accepted by it when it visits `fset`
/// finitely often and every member of `isets` infinitely often.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GrpPair {
    pub fset: BitSet,
    pub isets: Vec<BitSet>,
}

/// Disjunction of generalized Rabin pairs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GrpCondition {
    pub pairs: Vec<GrpPair>,
}

impl GrpCondition {
    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    /// Does the exact infinity set `inf` satisfy some pair?
    pub fn accepts_inf(&self, inf: &BitSet) -> bool {
        self.pairs.iter().any(|p| {
            !p.fset.intersects(inf) && p.isets.iter().all(|i| i.intersects(inf))
        })
    }

    /// The degeneralization domain size `|B|`, the product of the `isets`
    /// lengths over all pairs.
    pub fn degeneralization_index(&self) -> u128 {
        self.pairs.iter().map(|p| p.isets.len() as u128).product()
    }
}

/// Per-pair counters over `[1..l_i]` used by degeneralization and by game
/// strategies; entry `i` records which Buechi set of pair `i` is awaited.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct WaitingVector(pub SmallVec<[u8; 8]>);

impl WaitingVector {
    pub fn initial(pair_count: usize) -> WaitingVector {
        WaitingVector(std::iter::repeat(1).take(pair_count).collect())
    }

    pub fn get(&self, pair: usize) -> usize {
        self.0[pair] as usize
    }

    /// Componentwise update: entry `i` advances cyclically in `[1..lens[i]]`
    /// exactly when `visits(i, waited_set_index)` holds for the current
    /// position.
    pub fn advanced<V: Fn(usize, usize) -> bool>(&self, lens: &[usize], visits: V) -> WaitingVector {
        WaitingVector(
            self.0
                .iter()
                .enumerate()
                .map(|(i, &w)| {
                    if visits(i, w as usize - 1) {
                        if (w as usize) < lens[i] {
                            w + 1
                        } else {
                            1
                        }
                    } else {
                        w
                    }
                })
                .collect(),
        )
    }

    /// All vectors of the domain `B`, in mixed-radix order starting from
    /// `(1, ..., 1)`.
    pub fn enumerate(lens: &[usize]) -> Vec<WaitingVector> {
        let mut out = vec![WaitingVector::initial(lens.len())];
        loop {
            let last = out.last().unwrap().clone();
            let mut next = last.clone();
            let mut i = lens.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if (next.0[i] as usize) < lens[i] {
                    next.0[i] += 1;
                    break;
                }
                next.0[i] = 1;
            }
            out.push(next);
        }
    }
}

impl fmt::Display for WaitingVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, w) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, ")")
    }
}

/// A state of the translated automaton: the progressed formula plus (a
/// representative of the class of) the last letter read. The initial state
/// before any letter is read has no letter.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DgrwState {
    pub formula: Formula,
    pub letter: Option<Letter>,
}

/// Deterministic automaton with a generalized-Rabin-pairs condition.
#[derive(Clone, Debug)]
pub struct DgrwAutomaton {
    pub formula: Formula,
    pub alphabet: Alphabet,
    pub states: Vec<DgrwState>,
    pub initial: usize,
    /// `delta[state][letter_mask]` — total and deterministic.
    pub delta: Vec<Vec<usize>>,
    pub condition: GrpCondition,
}

impl DgrwAutomaton {
    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn next(&self, state: usize, mask: usize) -> usize {
        self.delta[state][mask]
    }
}

/// A plain Rabin pair: finitely many `fset` visits, infinitely many `iset`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RabinPair {
    pub fset: BitSet,
    pub iset: BitSet,
}

/// Rabin automaton produced by degeneralizing a [`DgrwAutomaton`].
#[derive(Clone, Debug)]
pub struct RabinAutomaton {
    pub alphabet: Alphabet,
    /// (source automaton state, waiting vector) per state.
    pub states: Vec<(usize, WaitingVector)>,
    pub initial: usize,
    pub delta: Vec<Vec<usize>>,
    pub pairs: Vec<RabinPair>,
}

impl RabinAutomaton {
    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn next(&self, state: usize, mask: usize) -> usize {
        self.delta[state][mask]
    }

    pub fn accepts_inf(&self, inf: &BitSet) -> bool {
        self.pairs
            .iter()
            .any(|p| !p.fset.intersects(inf) && p.iset.intersects(inf))
    }
}
