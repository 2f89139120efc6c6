//! Semantic canonicalization of formulas.
//!
//! Two formulas are identified when they are equivalent under propositional
//! reasoning that treats maximal `F`/`G`-subformulas as opaque atoms,
//! strengthened by the temporal implications
//! `G p => p`, `p => F p`, `F G p => G F p`
//! (and their consequences, e.g. `G p => F G p` and `G F p => F p`).
//! Equivalence is decided by truth tables over the subformula closure, where
//! assignments violating the implications are excluded. The canonical
//! representative is rebuilt from the truth table, so equivalent formulas map
//! to the identical tree. Exponential in the number of distinct subformulas,
//! which is fine at the formula sizes this crate targets.

use std::collections::HashMap;
use std::sync::Arc;

use super::formula::{Formula, Node};

/// Hard cap on truth-table variables (atoms + temporal subformulas).
pub const MAX_CANON_VARS: usize = 26;

/// Canonicalizes `f`; see the module docs for the equivalence involved.
/// Idempotent. Panics if the subformula closure exceeds [`MAX_CANON_VARS`]
/// variables; callers that take user input should check with
/// [`canon_var_count`] first.
pub fn canonicalize(f: &Formula) -> Formula {
    CanonCtx::new().canonicalize(f)
}

/// Number of truth-table variables `canonicalize` would use for `f`.
pub fn canon_var_count(f: &Formula) -> usize {
    collect_vars(f).len()
}

/// Canonicalization context with memoization; reuse it when canonicalizing
/// many related formulas (e.g. during automaton construction).
pub struct CanonCtx {
    cache: HashMap<Formula, Formula>,
    adm_cache: HashMap<Vec<Var>, Tv>,
}

impl Default for CanonCtx {
    fn default() -> Self {
        Self::new()
    }
}

impl CanonCtx {
    pub fn new() -> Self {
        CanonCtx {
            cache: HashMap::new(),
            adm_cache: HashMap::new(),
        }
    }

    pub fn canonicalize(&mut self, f: &Formula) -> Formula {
        if let Some(c) = self.cache.get(f) {
            return c.clone();
        }
        let out = match f.node() {
            Node::True | Node::False | Node::Atom(_) | Node::NegAtom(_) => f.clone(),
            Node::F(x) => Formula::ev(self.canonicalize(x)),
            Node::G(x) => Formula::al(self.canonicalize(x)),
            Node::And(cs) => {
                let kids: Vec<Formula> = cs.iter().map(|c| self.canonicalize(c)).collect();
                self.boolean_layer(Formula::and(kids))
            }
            Node::Or(cs) => {
                let kids: Vec<Formula> = cs.iter().map(|c| self.canonicalize(c)).collect();
                self.boolean_layer(Formula::or(kids))
            }
        };
        self.cache.insert(f.clone(), out.clone());
        out
    }

    /// Canonicalizes `raw`; `hint` (typically the formula `raw` was derived
    /// from) lets the common progresses-to-itself case return the existing
    /// tree instead of a freshly built identical one.
    pub fn canonicalize_with_hint(&mut self, raw: &Formula, hint: &Formula) -> Formula {
        let out = self.canonicalize(raw);
        if out == *hint {
            hint.clone()
        } else {
            out
        }
    }

    /// Semantic equivalence test over the joint closure.
    pub fn equivalent(&mut self, a: &Formula, b: &Formula) -> bool {
        let mut vars = collect_vars(a);
        for v in collect_vars(b) {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        vars.sort();
        check_var_limit(&vars, a);
        let adm = self.admissible(&vars);
        let va = eval_layer(a, &vars);
        let vb = eval_layer(b, &vars);
        let mut d = va;
        d.xor_with(&vb);
        d.and_with(&adm);
        d.is_zero()
    }

    fn boolean_layer(&mut self, f: Formula) -> Formula {
        match f.node() {
            Node::And(_) | Node::Or(_) => {}
            _ => return f, // constant folding in the constructors already ran
        }
        if let Some(out) = self.split_disjoint_groups(&f) {
            return out;
        }
        let vars = collect_vars(&f);
        check_var_limit(&vars, &f);
        let adm = self.admissible(&vars);
        let val = eval_layer(&f, &vars);
        let mut space = Space {
            k: vars.len(),
            vars,
            adm,
            val,
        };
        space.eliminate_all();
        let form = build_form(&space);
        // The rebuilt form must agree with the input wherever the temporal
        // implications allow an assignment.
        debug_assert!(self.equivalent(&form, &f), "canonical form mismatch for {f}");
        form
    }

    /// Children of an `And`/`Or` node with disjoint subformula closures
    /// never interact (there are no admissibility constraints across
    /// disjoint closures), so each group canonicalizes separately. This is a
    /// shortcut for the factorization the full engine would find anyway and
    /// keeps truth-table sizes proportional to the groups.
    fn split_disjoint_groups(&mut self, f: &Formula) -> Option<Formula> {
        let (children, conj) = match f.node() {
            Node::And(cs) => (cs, true),
            Node::Or(cs) => (cs, false),
            _ => return None,
        };
        let var_sets: Vec<Vec<Var>> = children.iter().map(collect_vars).collect();
        let mut group_of: Vec<usize> = (0..children.len()).collect();
        for i in 0..children.len() {
            for j in 0..i {
                if var_sets[i].iter().any(|v| var_sets[j].contains(v)) {
                    let (gi, gj) = (group_of[i], group_of[j]);
                    if gi != gj {
                        for g in group_of.iter_mut() {
                            if *g == gi {
                                *g = gj;
                            }
                        }
                    }
                }
            }
        }
        let mut seen: Vec<usize> = group_of.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() < 2 {
            return None;
        }
        let parts: Vec<Formula> = seen
            .iter()
            .map(|&g| {
                let members = children
                    .iter()
                    .zip(&group_of)
                    .filter(|(_, gg)| **gg == g)
                    .map(|(c, _)| c.clone());
                let sub = if conj {
                    Formula::and(members)
                } else {
                    Formula::or(members)
                };
                self.canonicalize(&sub)
            })
            .collect();
        Some(if conj {
            Formula::and(parts)
        } else {
            Formula::or(parts)
        })
    }

    fn admissible(&mut self, vars: &[Var]) -> Tv {
        if let Some(a) = self.adm_cache.get(vars) {
            return a.clone();
        }
        let k = vars.len();
        let mut adm = Tv::ones(k);
        for (i, v) in vars.iter().enumerate() {
            let Var::Temporal(t) = v else { continue };
            match t.node() {
                Node::G(body) => {
                    // G body => body holds now
                    let b = eval_layer(body, vars);
                    let mut c = Tv::column(k, i);
                    c.not_in_place();
                    c.or_with(&b);
                    adm.and_with(&c);
                }
                Node::F(body) => {
                    // body holds now => F body
                    let mut b = eval_layer(body, vars);
                    b.not_in_place();
                    b.or_with(&Tv::column(k, i));
                    adm.and_with(&b);
                    // F G x => G F x
                    if let Node::G(inner) = body.node() {
                        let gf = Formula::al(Formula::ev(inner.clone()));
                        if let Some(j) = vars.iter().position(|w| w == &Var::Temporal(gf.clone()))
                        {
                            let mut c = Tv::column(k, i);
                            c.not_in_place();
                            c.or_with(&Tv::column(k, j));
                            adm.and_with(&c);
                        }
                    }
                }
                _ => unreachable!("temporal var is F- or G-rooted"),
            }
        }
        self.adm_cache.insert(vars.to_vec(), adm.clone());
        adm
    }
}

fn check_var_limit(vars: &[Var], f: &Formula) {
    assert!(
        vars.len() <= MAX_CANON_VARS,
        "formula too large to canonicalize: {} boolean variables (limit {MAX_CANON_VARS}) in {f}",
        vars.len(),
    );
}

/// A truth-table variable: a maximal temporal subformula or an atom.
/// Temporal variables sort before atoms so they occupy the low dimensions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
enum Var {
    Temporal(Formula),
    Atom(Arc<str>),
}

impl Var {
    fn to_formula(&self) -> Formula {
        match self {
            Var::Temporal(t) => t.clone(),
            Var::Atom(a) => Formula::atom(a),
        }
    }
}

/// Subformula closure of `f` as a sorted variable list: every temporal
/// subformula (nested ones included) and every atom.
fn collect_vars(f: &Formula) -> Vec<Var> {
    fn walk(f: &Formula, out: &mut Vec<Var>) {
        match f.node() {
            Node::True | Node::False => {}
            Node::Atom(a) | Node::NegAtom(a) => {
                let v = Var::Atom(a.clone());
                if !out.contains(&v) {
                    out.push(v);
                }
            }
            Node::And(cs) | Node::Or(cs) => cs.iter().for_each(|c| walk(c, out)),
            Node::F(x) | Node::G(x) => {
                let v = Var::Temporal(f.clone());
                if !out.contains(&v) {
                    out.push(v);
                }
                walk(x, out);
            }
        }
    }
    let mut out = Vec::new();
    walk(f, &mut out);
    out.sort();
    out.dedup();
    out
}

/// Evaluates the boolean layer of `f` over all assignments of `vars`:
/// maximal temporal subformulas and atoms are looked up as variables.
fn eval_layer(f: &Formula, vars: &[Var]) -> Tv {
    let k = vars.len();
    let idx = |v: &Var| -> usize {
        vars.iter()
            .position(|w| w == v)
            .expect("variable not in closure")
    };
    match f.node() {
        Node::True => Tv::ones(k),
        Node::False => Tv::zeros(k),
        Node::Atom(a) => Tv::column(k, idx(&Var::Atom(a.clone()))),
        Node::NegAtom(a) => {
            let mut v = Tv::column(k, idx(&Var::Atom(a.clone())));
            v.not_in_place();
            v
        }
        Node::F(_) | Node::G(_) => Tv::column(k, idx(&Var::Temporal(f.clone()))),
        Node::And(cs) => {
            let mut v = Tv::ones(k);
            for c in cs {
                v.and_with(&eval_layer(c, vars));
            }
            v
        }
        Node::Or(cs) => {
            let mut v = Tv::zeros(k);
            for c in cs {
                v.or_with(&eval_layer(c, vars));
            }
            v
        }
    }
}

// ---------------------------------------------------------------------------
// Truth vectors: bit vectors over the 2^k assignments of k variables.
// Assignment sigma is the bit at index sigma, variable d is bit d of sigma.

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Tv {
    k: usize,
    bits: Vec<u64>,
}

/// Repeating in-word masks for dimensions 0..6: bit `sigma` is set iff
/// `sigma >> d & 1 == 1`.
const DIM_PAT: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

impl Tv {
    fn nbits(k: usize) -> usize {
        1usize << k
    }

    fn words(k: usize) -> usize {
        Self::nbits(k).div_ceil(64)
    }

    fn zeros(k: usize) -> Tv {
        Tv {
            k,
            bits: vec![0; Self::words(k)],
        }
    }

    fn ones(k: usize) -> Tv {
        let mut v = Tv {
            k,
            bits: vec![!0u64; Self::words(k)],
        };
        v.mask_tail();
        v
    }

    fn mask_tail(&mut self) {
        let n = Self::nbits(self.k);
        if n < 64 {
            self.bits[0] &= (1u64 << n) - 1;
        }
    }

    fn column(k: usize, d: usize) -> Tv {
        let mut v = Tv::zeros(k);
        if d < 6 {
            let pat = DIM_PAT[d];
            for w in v.bits.iter_mut() {
                *w = pat;
            }
        } else {
            let period_words = 1usize << (d - 6);
            for (i, w) in v.bits.iter_mut().enumerate() {
                if (i / period_words) % 2 == 1 {
                    *w = !0;
                }
            }
        }
        v.mask_tail();
        v
    }

    fn get(&self, sigma: usize) -> bool {
        self.bits[sigma / 64] >> (sigma % 64) & 1 == 1
    }

    fn and_with(&mut self, o: &Tv) {
        for (a, b) in self.bits.iter_mut().zip(&o.bits) {
            *a &= b;
        }
    }

    fn or_with(&mut self, o: &Tv) {
        for (a, b) in self.bits.iter_mut().zip(&o.bits) {
            *a |= b;
        }
    }

    fn xor_with(&mut self, o: &Tv) {
        for (a, b) in self.bits.iter_mut().zip(&o.bits) {
            *a ^= b;
        }
    }

    fn not_in_place(&mut self) {
        for a in self.bits.iter_mut() {
            *a = !*a;
        }
        self.mask_tail();
    }

    fn is_zero(&self) -> bool {
        self.bits.iter().all(|w| *w == 0)
    }

    fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Mirrors along dimension d: bit at sigma goes to sigma ^ (1<<d).
    fn mirror(&self, d: usize) -> Tv {
        let mut out = Tv::zeros(self.k);
        if d < 6 {
            let s = 1u32 << d;
            let lo = !DIM_PAT[d]; // bits with dimension-d = 0
            for (o, w) in out.bits.iter_mut().zip(&self.bits) {
                *o = ((w & lo) << s) | ((w & DIM_PAT[d]) >> s);
            }
        } else {
            let step = 1usize << (d - 6);
            for i in 0..self.bits.len() {
                out.bits[i] = self.bits[i ^ step];
            }
        }
        out
    }

    /// ORs both values of dimension d into each other ("smear"), making the
    /// vector constant along d while keeping the full space size.
    fn smear(&mut self, d: usize) {
        let m = self.mirror(d);
        self.or_with(&m);
    }

    /// Removes dimension d, halving the space. `pick(lo, hi)` combines the
    /// two cofactor bit streams word-wise.
    fn project<F: Fn(u64, u64) -> u64>(&self, d: usize, pick: F) -> Tv {
        let mut out = Tv::zeros(self.k - 1);
        if d >= 6 {
            let step = 1usize << (d - 6); // words per half-block
            let mut oi = 0;
            let mut i = 0;
            while i < self.bits.len() {
                for j in 0..step.min(self.bits.len() - i) {
                    let lo = self.bits[i + j];
                    let hi = self.bits.get(i + step + j).copied().unwrap_or(0);
                    if oi < out.bits.len() {
                        out.bits[oi] = pick(lo, hi);
                        oi += 1;
                    }
                }
                i += 2 * step;
            }
        } else {
            // In-word interleave: extract the d=0 and d=1 bit streams of each
            // input word (32 bits each) and repack.
            let lo_mask = !DIM_PAT[d];
            let hi_mask = DIM_PAT[d];
            for (oi, ow) in out.bits.iter_mut().enumerate() {
                let w0 = self.bits.get(2 * oi).copied().unwrap_or(0);
                let w1 = self.bits.get(2 * oi + 1).copied().unwrap_or(0);
                let lo = pext(w0, lo_mask) | pext(w1, lo_mask) << 32;
                let hi = pext(w0, hi_mask) | pext(w1, hi_mask) << 32;
                *ow = pick(lo, hi);
            }
        }
        out.mask_tail();
        out
    }
}

/// Software parallel bit extract: packs the bits of `x` selected by `mask`.
fn pext(x: u64, mut mask: u64) -> u64 {
    let mut res = 0u64;
    let mut out_bit = 0u32;
    while mask != 0 {
        let lsb = mask & mask.wrapping_neg();
        if x & lsb != 0 {
            res |= 1 << out_bit;
        }
        out_bit += 1;
        mask &= mask - 1;
    }
    res
}

// ---------------------------------------------------------------------------
// Reduced spaces: (variables, admissible set, value) with support elimination
// and conjunctive/disjunctive factorization.

struct Space {
    k: usize,
    vars: Vec<Var>,
    adm: Tv,
    val: Tv,
}

impl Space {
    /// Drops every variable the function does not depend on (compared over
    /// pairs of admissible assignments). Values of projected points are taken
    /// from any admissible preimage.
    fn eliminate_all(&mut self) {
        loop {
            let mut changed = false;
            let mut d = 0;
            while d < self.k {
                if self.try_eliminate(d) {
                    changed = true;
                } else {
                    d += 1;
                }
            }
            if !changed {
                break;
            }
        }
    }

    fn try_eliminate(&mut self, d: usize) -> bool {
        // Pairs (sigma, sigma^d) that are both admissible must agree on val.
        let adm_m = self.adm.mirror(d);
        let val_m = self.val.mirror(d);
        let mut diff = self.val.clone();
        diff.xor_with(&val_m);
        diff.and_with(&self.adm);
        diff.and_with(&adm_m);
        if !diff.is_zero() {
            return false;
        }
        let mut va = self.val.clone();
        va.and_with(&self.adm);
        let new_val = va.project(d, |lo, hi| lo | hi);
        let new_adm = self.adm.project(d, |lo, hi| lo | hi);
        self.val = new_val;
        self.adm = new_adm;
        self.vars.remove(d);
        self.k -= 1;
        true
    }

    fn restrict(&self, dims: &[usize], full_val: &Tv) -> Space {
        // Keep only `dims`; `full_val` is constant along the others by
        // construction. Admissibility becomes the union over dropped slices.
        let mut val = full_val.clone();
        let mut adm = self.adm.clone();
        for d in 0..self.k {
            if !dims.contains(&d) {
                adm.smear(d);
            }
        }
        let vars: Vec<Var> = dims.iter().map(|&d| self.vars[d].clone()).collect();
        // Project dropped dimensions from highest to lowest so indices of the
        // remaining lower dimensions stay valid.
        for d in (0..self.k).rev() {
            if !dims.contains(&d) {
                val = val.project(d, |lo, hi| lo | hi);
                adm = adm.project(d, |lo, hi| lo | hi);
            }
        }
        Space {
            k: dims.len(),
            vars,
            adm,
            val,
        }
    }
}

fn build_form(space: &Space) -> Formula {
    // Constant on the admissible set?
    let mut on = space.val.clone();
    on.and_with(&space.adm);
    if on.is_zero() {
        return Formula::ff();
    }
    if on == space.adm {
        return Formula::tt();
    }
    if space.k == 1 {
        return qm_form(space);
    }
    if let Some(parts) = split(space, false) {
        return Formula::and(parts.iter().map(build_form));
    }
    if let Some(parts) = split(space, true) {
        return Formula::or(parts.iter().map(build_form));
    }
    qm_form(space)
}

/// Tries to split the space into independent factors: conjunctive when
/// `dual` is false (f = f1 & f2 & ...), disjunctive when true
/// (f = f1 | f2 | ...).
///
/// Candidate variable blocks come from a cube cover: of the complement for a
/// conjunctive split (the complement of a conjunction of independent parts is
/// a disjunction whose cubes each live inside one part), of the function
/// itself for a disjunctive split. The candidate partition is then verified
/// with the projection test, which is what guarantees soundness.
fn split(space: &Space, dual: bool) -> Option<Vec<Space>> {
    let mut f_on = space.val.clone();
    f_on.and_with(&space.adm);
    let mut nf_on = space.val.clone();
    nf_on.not_in_place();
    nf_on.and_with(&space.adm);
    let mut not_adm = space.adm.clone();
    not_adm.not_in_place();

    let discovery = if dual { &f_on } else { &nf_on };
    let mut ok = discovery.clone();
    ok.or_with(&not_adm);
    // Literal polarity is unrestricted here: these cubes are analysis only,
    // never rendered as formulas.
    let cubes = cover_cubes(space, discovery, &ok, false);

    // Variables connected through a common cube must stay together.
    let mut rep: Vec<usize> = (0..space.k).collect();
    fn find(rep: &mut [usize], i: usize) -> usize {
        if rep[i] != i {
            let r = find(rep, rep[i]);
            rep[i] = r;
            r
        } else {
            i
        }
    }
    for cube in &cubes {
        let dims: Vec<usize> = (0..space.k).filter(|&d| cube[d].is_some()).collect();
        for w in dims.windows(2) {
            let (a, b) = (find(&mut rep, w[0]), find(&mut rep, w[1]));
            if a != b {
                rep[a] = b;
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for d in 0..space.k {
        let r = find(&mut rep, d);
        match blocks
            .iter_mut()
            .find(|b| find(&mut rep, b[0]) == r)
        {
            Some(b) => b.push(d),
            None => blocks.push(vec![d]),
        }
    }
    if blocks.len() < 2 {
        return None;
    }
    blocks.sort();

    // Verify on the dual side: the conjunctive-side function must equal the
    // conjunction of its OR-projections onto the blocks, over adm.
    let test_src = if dual { &nf_on } else { &f_on };
    let projections: Vec<Tv> = blocks
        .iter()
        .map(|block| {
            let mut v = test_src.clone();
            for d in 0..space.k {
                if !block.contains(&d) {
                    v.smear(d);
                }
            }
            v
        })
        .collect();
    let mut combined = Tv::ones(space.k);
    for p in &projections {
        combined.and_with(p);
    }
    combined.and_with(&space.adm);
    if combined != *test_src {
        return None;
    }

    Some(
        blocks
            .iter()
            .zip(projections)
            .map(|(block, mut p)| {
                if dual {
                    p.not_in_place(); // projection was of the complement
                }
                space.restrict(block, &p)
            })
            .collect(),
    )
}

/// Greedy cube cover of `on` within `on | dc` (`ok`), deterministic.
/// With `positive_temporal` set, cubes never fix a temporal variable to 0
/// (such cubes could not be rendered in negation normal form); this relies
/// on the function being monotone in temporal variables.
fn cover_cubes(
    space: &Space,
    on: &Tv,
    ok: &Tv,
    positive_temporal: bool,
) -> Vec<Vec<Option<bool>>> {
    let k = space.k;
    let cube_vec = |cube: &[Option<bool>]| -> Tv {
        let mut v = Tv::ones(k);
        for (d, lit) in cube.iter().enumerate() {
            if let Some(b) = lit {
                let mut c = Tv::column(k, d);
                if !b {
                    c.not_in_place();
                }
                v.and_with(&c);
            }
        }
        v
    };
    let mut not_ok = ok.clone();
    not_ok.not_in_place();
    let covered = |cube: &[Option<bool>]| -> bool {
        let mut v = cube_vec(cube);
        v.and_with(&not_ok);
        v.is_zero()
    };

    let mut cubes: Vec<Vec<Option<bool>>> = Vec::new();
    for sigma in 0..Tv::nbits(k) {
        if !on.get(sigma) {
            continue;
        }
        let mut cube: Vec<Option<bool>> = (0..k)
            .map(|d| {
                let bit = sigma >> d & 1 == 1;
                if positive_temporal && !bit && matches!(space.vars[d], Var::Temporal(_)) {
                    None
                } else {
                    Some(bit)
                }
            })
            .collect();
        assert!(
            covered(&cube),
            "canonicalization invariant violated: function not monotone \
             in a temporal variable"
        );
        for d in 0..k {
            if cube[d].is_some() {
                let save = cube[d].take();
                if !covered(&cube) {
                    cube[d] = save;
                }
            }
        }
        if !cubes.contains(&cube) {
            cubes.push(cube);
        }
    }
    cubes
}

/// Irredundant disjunctive form over the admissible set, restricted to cubes
/// that are positive in temporal variables (negating one would leave the
/// opaque-atom equivalence; the function is monotone there, so such a cover
/// always exists).
fn qm_form(space: &Space) -> Formula {
    let k = space.k;
    let mut on = space.val.clone();
    on.and_with(&space.adm);
    let mut ok = space.val.clone(); // ON union DC = val | !adm
    let mut nadm = space.adm.clone();
    nadm.not_in_place();
    ok.or_with(&nadm);

    let mut cubes = cover_cubes(space, &on, &ok, true);
    cubes.sort();
    let cube_vec = |cube: &[Option<bool>]| -> Tv {
        let mut v = Tv::ones(k);
        for (d, lit) in cube.iter().enumerate() {
            if let Some(b) = lit {
                let mut c = Tv::column(k, d);
                if !b {
                    c.not_in_place();
                }
                v.and_with(&c);
            }
        }
        v
    };

    // Greedy irredundant cover of the on-set, lexicographically tie-broken.
    let mut chosen: Vec<usize> = Vec::new();
    let mut uncovered = on.clone();
    while !uncovered.is_zero() {
        let mut best: Option<(usize, usize)> = None; // (gain, index)
        for (i, c) in cubes.iter().enumerate() {
            if chosen.contains(&i) {
                continue;
            }
            let mut v = cube_vec(c);
            v.and_with(&uncovered);
            let gain = v.count();
            if gain > 0 && best.map_or(true, |(g, _)| gain > g) {
                best = Some((gain, i));
            }
        }
        let (_, i) = best.expect("cover must exist");
        chosen.push(i);
        let mut v = cube_vec(&cubes[i]);
        v.not_in_place();
        uncovered.and_with(&v);
    }
    chosen.sort();

    Formula::or(chosen.into_iter().map(|i| {
        Formula::and(cubes[i].iter().enumerate().filter_map(|(d, lit)| {
            lit.map(|b| {
                let f = space.vars[d].to_formula();
                if b {
                    f
                } else {
                    debug_assert!(
                        matches!(space.vars[d], Var::Atom(_)),
                        "negative temporal literal cannot be rendered"
                    );
                    f.negated()
                }
            })
        }))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(n: &str) -> Formula {
        Formula::atom(n)
    }
    fn f_(x: Formula) -> Formula {
        Formula::ev(x)
    }
    fn g_(x: Formula) -> Formula {
        Formula::al(x)
    }

    #[test]
    fn absorption_examples() {
        // F a & G F a -> G F a
        let gfa = g_(f_(at("a")));
        assert_eq!(canonicalize(&Formula::and([f_(at("a")), gfa.clone()])), gfa);
        // G a | F G a -> F G a
        let fga = f_(g_(at("a")));
        assert_eq!(canonicalize(&Formula::or([g_(at("a")), fga.clone()])), fga);
        // a & a -> a
        assert_eq!(canonicalize(&Formula::and([at("a"), at("a")])), at("a"));
    }

    #[test]
    fn propositional_simplification() {
        // (Fa & Gb) | (Fa & !...) style: (x & y) | (x & !y) == x over atoms
        let x = at("a");
        let y = at("b");
        let f = Formula::or([
            Formula::and([x.clone(), y.clone()]),
            Formula::and([x.clone(), y.negated()]),
        ]);
        assert_eq!(canonicalize(&f), x);
        // a | !a -> true, a & !a -> false
        assert_eq!(canonicalize(&Formula::or([at("a"), at("a").negated()])), Formula::tt());
        assert_eq!(
            canonicalize(&Formula::and([at("a"), at("a").negated()])),
            Formula::ff()
        );
    }

    #[test]
    fn temporal_chain_identifications() {
        // G a & a -> G a (G p => p)
        assert_eq!(canonicalize(&Formula::and([g_(at("a")), at("a")])), g_(at("a")));
        // F G a & G F a -> F G a (FG => GF)
        let fga = f_(g_(at("a")));
        let gfa = g_(f_(at("a")));
        assert_eq!(canonicalize(&Formula::and([fga.clone(), gfa])), fga);
        // G a | F a -> F a (G p => F p via p)
        assert_eq!(canonicalize(&Formula::or([g_(at("a")), f_(at("a"))])), f_(at("a")));
    }

    #[test]
    fn fairness_shape_is_stable() {
        let fair = Formula::and([
            Formula::or([f_(g_(at("a"))), g_(f_(at("b")))]),
            Formula::or([f_(g_(at("c"))), g_(f_(at("d")))]),
        ]);
        let c = canonicalize(&fair);
        assert_eq!(c, fair);
    }

    #[test]
    fn idempotent_on_junk() {
        let raw = Formula::or([
            Formula::and([at("a"), g_(at("b")), at("a")]),
            Formula::and([g_(at("b")), at("a")]),
            Formula::ff(),
        ]);
        let c1 = canonicalize(&raw);
        let c2 = canonicalize(&c1);
        assert_eq!(c1, c2);
    }

    #[test]
    fn mirror_and_project_consistency() {
        for k in 1..=8usize {
            let col0 = Tv::column(k, 0);
            let m = col0.mirror(0);
            let mut nm = col0.clone();
            nm.not_in_place();
            assert_eq!(m, nm, "mirror of column 0 at k={k}");
            if k >= 2 {
                let c1 = Tv::column(k, k - 1);
                let p = c1.project(k - 1, |lo, hi| lo | hi);
                assert_eq!(p, Tv::ones(k - 1));
                let p2 = c1.project(k - 1, |lo, _| lo);
                assert_eq!(p2, Tv::zeros(k - 1));
            }
        }
    }
}
