//! Product of an MDP with a deterministic automaton.
//!
//! The automaton component tracks the word of vertex labels including the
//! current vertex: the product pairs vertex `v` with the automaton state
//! reached after reading the label of `v`. For "infinitary" formulas the
//! automaton only remembers the last letter, so the product has exactly one
//! automaton state per reachable model vertex.

use crate::automata::{Alphabet, DgrwAutomaton, GrpCondition, GrpPair, RabinAutomaton};
use crate::util::BitSet;

use super::model::Mdp;

#[derive(Clone, Debug)]
pub struct ProductMdp {
    pub mdp: Mdp,
    pub condition: GrpCondition,
    /// Model vertex per product vertex.
    pub model_vertex: Vec<usize>,
    /// Automaton state per product vertex.
    pub automaton_state: Vec<usize>,
}

pub fn product(m: &Mdp, a: &DgrwAutomaton) -> ProductMdp {
    product_raw(
        m,
        &a.alphabet,
        a.state_count(),
        a.initial,
        |s, mask| a.next(s, mask),
        |q| {
            a.condition
                .pairs
                .iter()
                .map(|p| (p.fset.contains(q), p.isets.iter().map(|i| i.contains(q)).collect()))
                .collect()
        },
        a.condition.pair_count(),
    )
}

pub fn product_rabin(m: &Mdp, r: &RabinAutomaton) -> ProductMdp {
    product_raw(
        m,
        &r.alphabet,
        r.state_count(),
        r.initial,
        |s, mask| r.next(s, mask),
        |q| {
            r.pairs
                .iter()
                .map(|p| (p.fset.contains(q), vec![p.iset.contains(q)]))
                .collect()
        },
        r.pairs.len(),
    )
}

#[allow(clippy::too_many_arguments)]
fn product_raw<N, M>(
    m: &Mdp,
    alphabet: &Alphabet,
    _auto_states: usize,
    auto_initial: usize,
    next: N,
    membership: M,
    pair_count: usize,
) -> ProductMdp
where
    N: Fn(usize, usize) -> usize,
    M: Fn(usize) -> Vec<(bool, Vec<bool>)>,
{
    let mask_of = |v: usize| alphabet.mask_of(&m.labels[v]);
    let mut index = std::collections::HashMap::new();
    let mut verts: Vec<(usize, usize)> = Vec::new();
    let q0 = next(auto_initial, mask_of(m.initial));
    index.insert((m.initial, q0), 0);
    verts.push((m.initial, q0));
    let mut head = 0;
    while head < verts.len() {
        let (v, q) = verts[head];
        head += 1;
        for &w in &m.edges[v] {
            let qw = next(q, mask_of(w));
            index.entry((w, qw)).or_insert_with(|| {
                verts.push((w, qw));
                verts.len() - 1
            });
        }
    }

    let n = verts.len();
    let mut kind = Vec::with_capacity(n);
    let mut edges = Vec::with_capacity(n);
    let mut dist = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for &(v, q) in &verts {
        kind.push(m.kind[v]);
        labels.push(m.labels[v].clone());
        let mut row: Vec<usize> = m.edges[v]
            .iter()
            .map(|&w| index[&(w, next(q, mask_of(w)))])
            .collect();
        let mut drow: Vec<crate::mdp::model::Rational> = m.dist[v].to_vec();
        // product successors inherit the model's sort order; re-sort by id
        let mut paired: Vec<(usize, usize)> = row.iter().copied().enumerate().collect();
        paired.sort_by_key(|(_, t)| *t);
        row = paired.iter().map(|(_, t)| *t).collect();
        if !drow.is_empty() {
            drow = paired.iter().map(|(i, _)| m.dist[v][*i].clone()).collect();
        }
        edges.push(row);
        dist.push(drow);
    }

    // Lift the condition through the automaton component.
    let mut pairs: Vec<GrpPair> = Vec::with_capacity(pair_count);
    if n > 0 {
        let memberships: Vec<Vec<(bool, Vec<bool>)>> =
            verts.iter().map(|&(_, q)| membership(q)).collect();
        for pi in 0..pair_count {
            let mut fset = BitSet::new(n);
            let iset_count = memberships[0][pi].1.len();
            let mut isets = vec![BitSet::new(n); iset_count];
            for (s, mem) in memberships.iter().enumerate() {
                if mem[pi].0 {
                    fset.insert(s);
                }
                for (j, in_i) in mem[pi].1.iter().enumerate() {
                    if *in_i {
                        isets[j].insert(s);
                    }
                }
            }
            pairs.push(GrpPair { fset, isets });
        }
    }

    let mdp = Mdp {
        kind,
        edges,
        dist,
        labels,
        initial: 0,
    };
    debug_assert!(mdp.validate().is_ok());
    ProductMdp {
        mdp,
        condition: GrpCondition { pairs },
        model_vertex: verts.iter().map(|&(v, _)| v).collect(),
        automaton_state: verts.iter().map(|&(_, q)| q).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::build_dgrw;
    use crate::ltl::{parse_any_atoms, Formula};
    use crate::mdp::model::parse_mdp;

    #[test]
    fn trivial_automaton_gives_isomorphic_product() {
        let m = parse_mdp(
            "mdp\nstates: 3\ninit: 0\nplayer0: 0\nprob: 1 2\nlabel 1: a\n\
             edge 0 1\nedge 0 2\npedge 1 1 1/1\npedge 2 0 1/2\npedge 2 2 1/2\n",
        )
        .unwrap();
        let a = build_dgrw(&Formula::tt()).unwrap();
        let p = product(&m, &a);
        assert_eq!(p.mdp.vertex_count(), 3);
    }

    #[test]
    fn infinitary_formula_keeps_model_size() {
        let m = parse_mdp(
            "mdp\nstates: 4\ninit: 0\nplayer0: 0 1\nprob: 2 3\nlabel 0: a\nlabel 2: b\n\
             edge 0 1\nedge 0 2\nedge 1 0\nedge 1 3\npedge 2 0 1/3\npedge 2 3 2/3\n\
             pedge 3 3 1/1\n",
        )
        .unwrap();
        let f = parse_any_atoms("(F G a | G F b) & G F a").unwrap();
        assert!(f.is_infinitary());
        let a = build_dgrw(&f).unwrap();
        let p = product(&m, &a);
        assert_eq!(p.mdp.vertex_count(), 4);
    }

    #[test]
    fn two_state_model_times_two_state_automaton() {
        let m = parse_mdp(
            "mdp\nstates: 2\ninit: 0\nplayer0: 0 1\nlabel 0: a\nprob:\n\
             edge 0 1\nedge 1 0\n",
        )
        .unwrap();
        let f = parse_any_atoms("G F a & G F !a").unwrap();
        let a = build_dgrw(&f).unwrap();
        let p = product(&m, &a);
        assert!(p.mdp.vertex_count() <= 4);
        assert_eq!(p.condition.pair_count(), a.condition.pair_count());
    }
}
