//! Maximal end-component decomposition by iterated SCC refinement: compute
//! the strongly connected components, delete probabilistic vertices with an
//! edge leaving their component (and everything that loses its successors),
//! and repeat until stable.

use crate::util::{sccs, BitSet};

use super::model::{Mdp, VertexKind};

/// The unique MEC decomposition, components sorted by smallest vertex.
pub fn mec_decomposition(m: &Mdp) -> Vec<BitSet> {
    mec_decomposition_masked(m, &BitSet::full(m.vertex_count()))
}

/// MEC decomposition of the sub-MDP induced by `alive`.
pub fn mec_decomposition_masked(m: &Mdp, alive: &BitSet) -> Vec<BitSet> {
    let n = m.vertex_count();
    let mut alive = alive.clone();
    loop {
        let comps = sccs(
            n,
            |v| alive.contains(v),
            |v| m.edges[v].iter().copied(),
        );
        let mut changed = false;
        for comp in &comps {
            let in_comp = BitSet::from_iter(n, comp.vertices.iter().copied());
            if !comp.has_edge {
                for &v in &comp.vertices {
                    alive.remove(v);
                }
                changed = true;
                continue;
            }
            for &v in &comp.vertices {
                let bad = match m.kind[v] {
                    // a probabilistic vertex must keep its whole distribution
                    // inside the component
                    VertexKind::Probabilistic => m
                        .edges[v]
                        .iter()
                        .any(|&w| !in_comp.contains(w) || !alive.contains(w)),
                    // a player-0 vertex must have some choice inside
                    VertexKind::Player0 => !m.edges[v]
                        .iter()
                        .any(|&w| in_comp.contains(w) && alive.contains(w)),
                };
                if bad {
                    alive.remove(v);
                    changed = true;
                }
            }
        }
        if !changed {
            let mut out: Vec<BitSet> = comps
                .into_iter()
                .filter(|c| c.has_edge)
                .map(|c| BitSet::from_iter(n, c.vertices))
                .collect();
            out.sort_by_key(|c| c.iter().next().unwrap_or(usize::MAX));
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::model::parse_mdp;

    #[test]
    fn self_loop_is_a_mec() {
        let m = parse_mdp("mdp\nstates: 1\ninit: 0\nplayer0:\nprob: 0\npedge 0 0 1/1\n").unwrap();
        let mecs = mec_decomposition(&m);
        assert_eq!(mecs.len(), 1);
        assert_eq!(mecs[0].iter().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn probabilistic_exit_excluded() {
        // 0 <-> 1 player-0 cycle; 2 probabilistic with mass to 0 and to sink 3.
        let m = parse_mdp(
            "mdp\nstates: 4\ninit: 0\nplayer0: 0 1 3\nprob: 2\n\
             edge 0 1\nedge 1 0\npedge 2 0 1/2\npedge 2 3 1/2\nedge 3 3\n",
        )
        .unwrap();
        let mecs = mec_decomposition(&m);
        let sets: Vec<Vec<usize>> = mecs.iter().map(|c| c.iter().collect()).collect();
        assert_eq!(sets, vec![vec![0, 1], vec![3]]);
    }

    #[test]
    fn dag_of_choices_has_single_mec() {
        let m = parse_mdp(
            "mdp\nstates: 4\ninit: 0\nplayer0: 0 1 2 3\nprob:\n\
             edge 0 1\nedge 0 2\nedge 1 3\nedge 2 3\nedge 3 3\n",
        )
        .unwrap();
        let mecs = mec_decomposition(&m);
        let sets: Vec<Vec<usize>> = mecs.iter().map(|c| c.iter().collect()).collect();
        assert_eq!(sets, vec![vec![3]]);
    }
}
