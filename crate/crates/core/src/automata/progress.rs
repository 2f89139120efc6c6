//! Formula progression: updating the pending formula after reading a letter.

use std::collections::HashMap;

use crate::ltl::{CanonCtx, Formula, Letter, Node};

use super::types::Alphabet;

/// One progression step: reading `letter` turns the pending formula `f` into
/// `progress(f, letter)`. Literals are resolved against the letter, `F x`
/// unfolds to `step(x) | F x` and `G x` to `step(x) & G x`; the result is
/// canonicalized.
pub fn progress(f: &Formula, letter: &Letter) -> Formula {
    let alphabet = Alphabet::of_formula(f);
    let mask = alphabet.mask_of(letter);
    let mut ctx = CanonCtx::new();
    let raw = step_raw(f, mask, &alphabet);
    ctx.canonicalize_with_hint(&raw, f)
}

/// Uncanonicalized progression over a letter bitmask.
pub fn step_raw(f: &Formula, mask: usize, alphabet: &Alphabet) -> Formula {
    match f.node() {
        Node::True => Formula::tt(),
        Node::False => Formula::ff(),
        Node::Atom(a) => {
            let i = alphabet.atom_index(a).expect("atom in alphabet");
            if mask >> i & 1 == 1 {
                Formula::tt()
            } else {
                Formula::ff()
            }
        }
        Node::NegAtom(a) => {
            let i = alphabet.atom_index(a).expect("atom in alphabet");
            if mask >> i & 1 == 1 {
                Formula::ff()
            } else {
                Formula::tt()
            }
        }
        Node::And(cs) => Formula::and(cs.iter().map(|c| step_raw(c, mask, alphabet))),
        Node::Or(cs) => Formula::or(cs.iter().map(|c| step_raw(c, mask, alphabet))),
        Node::F(x) => Formula::or([step_raw(x, mask, alphabet), f.clone()]),
        Node::G(x) => Formula::and([step_raw(x, mask, alphabet), f.clone()]),
    }
}

/// Progression with memoization shared across an automaton construction.
pub struct Progressor {
    pub alphabet: Alphabet,
    canon: CanonCtx,
    cache: HashMap<(Formula, usize), Formula>,
}

impl Progressor {
    pub fn new(alphabet: Alphabet) -> Progressor {
        Progressor {
            alphabet,
            canon: CanonCtx::new(),
            cache: HashMap::new(),
        }
    }

    pub fn step(&mut self, f: &Formula, mask: usize) -> Formula {
        if let Some(r) = self.cache.get(&(f.clone(), mask)) {
            return r.clone();
        }
        let raw = step_raw(f, mask, &self.alphabet);
        let out = self.canon.canonicalize_with_hint(&raw, f);
        self.cache.insert((f.clone(), mask), out.clone());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse;

    #[test]
    fn progression_examples() {
        let f = parse("F a | G b", &["a", "b"]).unwrap();
        // self-loop on {b}
        assert_eq!(progress(&f, &Letter::from_names(["b"])), f);
        // reading {} drops the G b disjunct
        assert_eq!(
            progress(&f, &Letter::empty()),
            parse("F a", &["a", "b"]).unwrap()
        );
        // reading {a} satisfies the formula
        assert_eq!(progress(&f, &Letter::from_names(["a"])), Formula::tt());

        let inf = parse("G F a & G F !a", &["a"]).unwrap();
        assert_eq!(progress(&inf, &Letter::from_names(["a"])), inf);
        assert_eq!(progress(&inf, &Letter::empty()), inf);
    }
}
