use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::formula::{Formula, Node};

/// A letter: the set of atomic propositions holding at one position.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Letter(BTreeSet<Arc<str>>);

impl Letter {
    pub fn empty() -> Letter {
        Letter(BTreeSet::new())
    }

    pub fn from_names<I: IntoIterator<Item = S>, S: AsRef<str>>(names: I) -> Letter {
        Letter(names.into_iter().map(|s| s.as_ref().into()).collect())
    }

    pub fn insert(&mut self, name: &str) {
        self.0.insert(name.into());
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.contains(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|s| s.as_ref())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Projection onto a sub-alphabet.
    pub fn restricted_to<'a, I: IntoIterator<Item = &'a str>>(&self, ap: I) -> Letter {
        Letter(
            ap.into_iter()
                .filter(|a| self.contains(a))
                .map(|a| a.into())
                .collect(),
        )
    }
}

impl fmt::Display for Letter {
    /// Braced, space-separated: `{a b}`, `{}` for the empty letter.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// An ultimately periodic word `prefix . cycle^omega`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LassoWord {
    pub prefix: Vec<Letter>,
    pub cycle: Vec<Letter>,
}

impl LassoWord {
    pub fn new(prefix: Vec<Letter>, cycle: Vec<Letter>) -> LassoWord {
        assert!(!cycle.is_empty(), "lasso cycle must be non-empty");
        LassoWord { prefix, cycle }
    }

    /// Letter at absolute position `i`.
    pub fn at(&self, i: usize) -> &Letter {
        if i < self.prefix.len() {
            &self.prefix[i]
        } else {
            &self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// The same word with the first cycle letter moved into the prefix.
    pub fn rotated(&self) -> LassoWord {
        let mut prefix = self.prefix.clone();
        prefix.push(self.cycle[0].clone());
        let mut cycle = self.cycle[1..].to_vec();
        cycle.push(self.cycle[0].clone());
        LassoWord { prefix, cycle }
    }
}

impl fmt::Display for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.prefix {
            write!(f, "{l}")?;
        }
        write!(f, "(")?;
        for l in &self.cycle {
            write!(f, "{l}")?;
        }
        write!(f, ")^w")
    }
}

/// Exact satisfaction of `f` on the ultimately periodic word `w`.
///
/// Positions `0 .. |prefix|+|cycle|` are evaluated; on the cycle, `F` holds
/// iff its argument holds somewhere on the cycle and `G` iff it holds
/// everywhere on the cycle (every cycle position sees every other one again),
/// and prefix positions are resolved by backward induction.
pub fn eval_lasso(f: &Formula, w: &LassoWord) -> bool {
    eval_positions(f, w)[0]
}

/// Truth of `f` at every position in `0 .. |prefix|+|cycle|`.
fn eval_positions(f: &Formula, w: &LassoWord) -> Vec<bool> {
    let p = w.prefix.len();
    let c = w.cycle.len();
    let n = p + c;
    match f.node() {
        Node::True => vec![true; n],
        Node::False => vec![false; n],
        Node::Atom(a) => (0..n).map(|i| w.at(i).contains(a)).collect(),
        Node::NegAtom(a) => (0..n).map(|i| !w.at(i).contains(a)).collect(),
        Node::And(cs) => {
            let mut out = vec![true; n];
            for ch in cs {
                for (o, v) in out.iter_mut().zip(eval_positions(ch, w)) {
                    *o &= v;
                }
            }
            out
        }
        Node::Or(cs) => {
            let mut out = vec![false; n];
            for ch in cs {
                for (o, v) in out.iter_mut().zip(eval_positions(ch, w)) {
                    *o |= v;
                }
            }
            out
        }
        Node::F(x) => {
            let v = eval_positions(x, w);
            let on_cycle = v[p..].iter().any(|b| *b);
            let mut out = vec![false; n];
            for o in out[p..].iter_mut() {
                *o = on_cycle;
            }
            for i in (0..p).rev() {
                out[i] = v[i] || out[i + 1];
            }
            out
        }
        Node::G(x) => {
            let v = eval_positions(x, w);
            let on_cycle = v[p..].iter().all(|b| *b);
            let mut out = vec![false; n];
            for o in out[p..].iter_mut() {
                *o = on_cycle;
            }
            for i in (0..p).rev() {
                out[i] = v[i] && out[i + 1];
            }
            out
        }
    }
}
