use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// A formula of the (F,G)-fragment of LTL in negation normal form.
///
/// Negation occurs only directly on atoms. `And`/`Or` children are kept
/// flattened, sorted by the canonical formula order and deduplicated by the
/// smart constructors; full semantic canonicalization is performed by
/// [`crate::ltl::canonicalize`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Formula(Arc<Node>);

#[derive(PartialEq, Eq, Hash)]
pub enum Node {
    True,
    False,
    Atom(Arc<str>),
    NegAtom(Arc<str>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    F(Formula),
    G(Formula),
}

impl Formula {
    pub fn tt() -> Formula {
        Formula(Arc::new(Node::True))
    }

    pub fn ff() -> Formula {
        Formula(Arc::new(Node::False))
    }

    pub fn atom(name: &str) -> Formula {
        Formula(Arc::new(Node::Atom(name.into())))
    }

    pub fn neg_atom(name: &str) -> Formula {
        Formula(Arc::new(Node::NegAtom(name.into())))
    }

    /// Conjunction. Flattens nested `And`, folds constants, sorts and
    /// deduplicates; this is structural cleanup only, not full
    /// canonicalization.
    pub fn and<I: IntoIterator<Item = Formula>>(children: I) -> Formula {
        let mut flat = Vec::new();
        for c in children {
            match c.node() {
                Node::True => {}
                Node::False => return Formula::ff(),
                Node::And(cs) => flat.extend(cs.iter().cloned()),
                _ => flat.push(c),
            }
        }
        flat.sort();
        flat.dedup();
        match flat.len() {
            0 => Formula::tt(),
            1 => flat.pop().unwrap(),
            _ => Formula(Arc::new(Node::And(flat))),
        }
    }

    /// Disjunction, dual to [`Formula::and`].
    pub fn or<I: IntoIterator<Item = Formula>>(children: I) -> Formula {
        let mut flat = Vec::new();
        for c in children {
            match c.node() {
                Node::False => {}
                Node::True => return Formula::tt(),
                Node::Or(cs) => flat.extend(cs.iter().cloned()),
                _ => flat.push(c),
            }
        }
        flat.sort();
        flat.dedup();
        match flat.len() {
            0 => Formula::ff(),
            1 => flat.pop().unwrap(),
            _ => Formula(Arc::new(Node::Or(flat))),
        }
    }

    /// `F` (eventually). Constants are folded and `F F x` collapses to `F x`.
    pub fn ev(x: Formula) -> Formula {
        match x.node() {
            Node::True | Node::False => x,
            Node::F(_) => x.clone(),
            _ => Formula(Arc::new(Node::F(x))),
        }
    }

    /// `G` (always). Constants are folded and `G G x` collapses to `G x`.
    pub fn al(x: Formula) -> Formula {
        match x.node() {
            Node::True | Node::False => x,
            Node::G(_) => x.clone(),
            _ => Formula(Arc::new(Node::G(x))),
        }
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn is_true(&self) -> bool {
        matches!(self.node(), Node::True)
    }

    pub fn is_false(&self) -> bool {
        matches!(self.node(), Node::False)
    }

    pub fn is_temporal(&self) -> bool {
        matches!(self.node(), Node::F(_) | Node::G(_))
    }

    /// NNF negation: duals of all connectives, negation pushed to atoms.
    pub fn negated(&self) -> Formula {
        match self.node() {
            Node::True => Formula::ff(),
            Node::False => Formula::tt(),
            Node::Atom(a) => Formula(Arc::new(Node::NegAtom(a.clone()))),
            Node::NegAtom(a) => Formula(Arc::new(Node::Atom(a.clone()))),
            Node::And(cs) => Formula::or(cs.iter().map(|c| c.negated())),
            Node::Or(cs) => Formula::and(cs.iter().map(|c| c.negated())),
            Node::F(x) => Formula::al(x.negated()),
            Node::G(x) => Formula::ev(x.negated()),
        }
    }

    /// Names of all atoms occurring in the formula, sorted.
    pub fn atoms(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Arc<str>>) {
        match self.node() {
            Node::True | Node::False => {}
            Node::Atom(a) | Node::NegAtom(a) => {
                out.insert(a.clone());
            }
            Node::And(cs) | Node::Or(cs) => cs.iter().for_each(|c| c.collect_atoms(out)),
            Node::F(x) | Node::G(x) => x.collect_atoms(out),
        }
    }

    /// All `F`-rooted and all `G`-rooted subformulas, including nested ones.
    pub fn fg_subformulas(&self) -> (BTreeSet<Formula>, BTreeSet<Formula>) {
        let mut fs = BTreeSet::new();
        let mut gs = BTreeSet::new();
        self.collect_fg(&mut fs, &mut gs);
        (fs, gs)
    }

    fn collect_fg(&self, fs: &mut BTreeSet<Formula>, gs: &mut BTreeSet<Formula>) {
        match self.node() {
            Node::True | Node::False | Node::Atom(_) | Node::NegAtom(_) => {}
            Node::And(cs) | Node::Or(cs) => cs.iter().for_each(|c| c.collect_fg(fs, gs)),
            Node::F(x) => {
                fs.insert(self.clone());
                x.collect_fg(fs, gs);
            }
            Node::G(x) => {
                gs.insert(self.clone());
                x.collect_fg(fs, gs);
            }
        }
    }

    /// True when every atom occurrence has both an `F` and a `G` ancestor.
    /// For such formulas the formula component of the translated automaton is
    /// constant along every run.
    pub fn is_infinitary(&self) -> bool {
        self.infinitary_walk(false, false)
    }

    fn infinitary_walk(&self, under_f: bool, under_g: bool) -> bool {
        match self.node() {
            Node::True | Node::False => true,
            Node::Atom(_) | Node::NegAtom(_) => under_f && under_g,
            Node::And(cs) | Node::Or(cs) => {
                cs.iter().all(|c| c.infinitary_walk(under_f, under_g))
            }
            Node::F(x) => x.infinitary_walk(true, under_g),
            Node::G(x) => x.infinitary_walk(under_f, true),
        }
    }

    /// Number of syntax-tree nodes.
    pub fn size(&self) -> usize {
        match self.node() {
            Node::True | Node::False | Node::Atom(_) | Node::NegAtom(_) => 1,
            Node::And(cs) | Node::Or(cs) => 1 + cs.iter().map(|c| c.size()).sum::<usize>(),
            Node::F(x) | Node::G(x) => 1 + x.size(),
        }
    }

    fn kind_rank(&self) -> u8 {
        match self.node() {
            Node::True => 0,
            Node::False => 1,
            Node::Atom(_) => 2,
            Node::NegAtom(_) => 3,
            Node::F(_) => 4,
            Node::G(_) => 5,
            Node::And(_) => 6,
            Node::Or(_) => 7,
        }
    }
}

/// Canonical total order: node-kind rank, then recursive child comparison,
/// then atom name. Used for sorting `And`/`Or` children and automaton state
/// naming, so it must be stable across runs.
impl Ord for Formula {
    fn cmp(&self, other: &Formula) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.kind_rank()
            .cmp(&other.kind_rank())
            .then_with(|| match (self.node(), other.node()) {
                (Node::Atom(a), Node::Atom(b)) | (Node::NegAtom(a), Node::NegAtom(b)) => a.cmp(b),
                (Node::F(a), Node::F(b)) | (Node::G(a), Node::G(b)) => a.cmp(b),
                (Node::And(a), Node::And(b)) | (Node::Or(a), Node::Or(b)) => a.cmp(b),
                _ => Ordering::Equal,
            })
    }
}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Formula) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Formula {
    /// Precedence levels: 0 = or, 1 = and, 2 = unary.
    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        match self.node() {
            Node::True => write!(f, "true"),
            Node::False => write!(f, "false"),
            Node::Atom(a) => write!(f, "{a}"),
            Node::NegAtom(a) => write!(f, "!{a}"),
            Node::Or(cs) => {
                if prec > 0 {
                    write!(f, "(")?;
                }
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " | ")?;
                    }
                    c.fmt_prec(f, 1)?;
                }
                if prec > 0 {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Node::And(cs) => {
                if prec > 1 {
                    write!(f, "(")?;
                }
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " & ")?;
                    }
                    c.fmt_prec(f, 2)?;
                }
                if prec > 1 {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Node::F(x) => {
                write!(f, "F ")?;
                x.fmt_prec(f, 2)
            }
            Node::G(x) => {
                write!(f, "G ")?;
                x.fmt_prec(f, 2)
            }
        }
    }
}

/// All `F`-rooted and `G`-rooted subformulas of `f` (nested ones included),
/// deduplicated up to the canonical form of `f`.
pub fn fg_subformulas(f: &Formula) -> (BTreeSet<Formula>, BTreeSet<Formula>) {
    f.fg_subformulas()
}
