//! Shared test oracles, independent of the pipelines they check.

use fgltl_core::mdp::{Mdp, ProductMdp, Rational, VertexKind};
use fgltl_core::util::{sccs, BitSet};
use num::{One, Zero};

/// Exact optimal satisfaction probability of a product MDP by brute force:
/// enumerate every memoryless player-0 strategy (memoryless optimality holds
/// on the product), compute the accepting bottom SCCs of each induced chain,
/// and solve the reachability system exactly. Returns `None` when the
/// strategy space exceeds `max_strategies`.
pub fn oracle_product_value(p: &ProductMdp, max_strategies: usize) -> Option<Rational> {
    let m = &p.mdp;
    let n = m.vertex_count();
    let choices: Vec<usize> = (0..n)
        .map(|v| if m.is_player0(v) { m.edges[v].len() } else { 1 })
        .collect();
    let mut count: usize = 1;
    for &c in &choices {
        count = count.checked_mul(c)?;
        if count > max_strategies {
            return None;
        }
    }

    let mut best = Rational::zero();
    for combo in 0..count {
        let mut c = combo;
        let pick: Vec<usize> = (0..n)
            .map(|v| {
                let d = choices[v];
                let i = c % d;
                c /= d;
                if m.is_player0(v) {
                    m.edges[v][i]
                } else {
                    usize::MAX
                }
            })
            .collect();
        let succ = |v: usize| -> Vec<usize> {
            if m.is_player0(v) {
                vec![pick[v]]
            } else {
                m.edges[v].clone()
            }
        };

        // bottom SCCs of the chain
        let comps = sccs(n, |_| true, |v| succ(v).into_iter());
        let mut accepting = BitSet::new(n);
        for comp in &comps {
            if !comp.has_edge {
                continue;
            }
            let set = BitSet::from_iter(n, comp.vertices.iter().copied());
            let bottom = comp
                .vertices
                .iter()
                .all(|&v| succ(v).iter().all(|&w| set.contains(w)));
            if !bottom {
                continue;
            }
            let ok = p.condition.pairs.iter().any(|pair| {
                !pair.fset.intersects(&set) && pair.isets.iter().all(|i| i.intersects(&set))
            });
            if ok {
                accepting.union_with(&set);
            }
        }
        let value = chain_reach(m, &pick, &accepting);
        if value > best {
            best = value;
        }
    }
    Some(best)
}

/// Probability of reaching `target` from the initial vertex in the chain
/// induced by `pick`; self-contained Gaussian elimination.
fn chain_reach(m: &Mdp, pick: &[usize], target: &BitSet) -> Rational {
    let n = m.vertex_count();
    let succ_dist = |v: usize| -> Vec<(usize, Rational)> {
        if m.is_player0(v) {
            vec![(pick[v], Rational::one())]
        } else {
            m.edges[v]
                .iter()
                .copied()
                .zip(m.dist[v].iter().cloned())
                .collect()
        }
    };
    // vertices that can reach the target at all
    let mut can = target.clone();
    loop {
        let mut changed = false;
        for v in 0..n {
            if !can.contains(v) && succ_dist(v).iter().any(|&(w, _)| can.contains(w)) {
                can.insert(v);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if !can.contains(m.initial) {
        return Rational::zero();
    }
    let unknowns: Vec<usize> = (0..n)
        .filter(|&v| can.contains(v) && !target.contains(v))
        .collect();
    let col: std::collections::HashMap<usize, usize> =
        unknowns.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let k = unknowns.len();
    let mut mat = vec![vec![Rational::zero(); k + 1]; k];
    for (row, &v) in unknowns.iter().enumerate() {
        mat[row][row] += Rational::one();
        for (w, pr) in succ_dist(v) {
            if target.contains(w) {
                mat[row][k] += pr;
            } else if let Some(&c) = col.get(&w) {
                mat[row][c] -= pr;
            }
        }
    }
    // dense elimination
    for c in 0..k {
        let piv = (c..k).find(|&r| !mat[r][c].is_zero()).expect("nonsingular");
        mat.swap(c, piv);
        let d = mat[c][c].clone();
        for x in c..=k {
            mat[c][x] = &mat[c][x] / &d;
        }
        for r in 0..k {
            if r != c && !mat[r][c].is_zero() {
                let f = mat[r][c].clone();
                for x in c..=k {
                    let s = &f * &mat[c][x];
                    mat[r][x] = &mat[r][x] - &s;
                }
            }
        }
    }
    if target.contains(m.initial) {
        Rational::one()
    } else {
        mat[col[&m.initial]][k].clone()
    }
}

/// Brute-force check that a vertex set is an end component.
pub fn is_end_component(m: &Mdp, set: &BitSet) -> bool {
    let verts: Vec<usize> = set.iter().collect();
    if verts.is_empty() {
        return false;
    }
    for &v in &verts {
        let inside: Vec<usize> = m.edges[v]
            .iter()
            .copied()
            .filter(|&w| set.contains(w))
            .collect();
        if inside.is_empty() {
            return false;
        }
        if m.kind[v] == VertexKind::Probabilistic && inside.len() != m.edges[v].len() {
            return false;
        }
    }
    // strong connectivity of the induced subgraph
    for &v in &verts {
        let mut seen = BitSet::new(m.vertex_count());
        seen.insert(v);
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for &w in &m.edges[u] {
                if set.contains(w) && !seen.contains(w) {
                    seen.insert(w);
                    stack.push(w);
                }
            }
        }
        if verts.iter().any(|&w| !seen.contains(w)) {
            return false;
        }
    }
    true
}
