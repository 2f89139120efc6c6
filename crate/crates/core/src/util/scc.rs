/// A strongly connected component, given as a sorted list of vertex indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scc {
    pub vertices: Vec<usize>,
    /// True when the component carries at least one internal edge (a
    /// non-singleton component, or a singleton with a self-loop).
    pub has_edge: bool,
}

/// Tarjan's algorithm, iterative. `succ(v)` yields the successors of `v`;
/// vertices for which `alive(v)` is false are skipped entirely.
pub fn sccs<FS, FA, I>(n: usize, alive: FA, succ: FS) -> Vec<Scc>
where
    FS: Fn(usize) -> I,
    FA: Fn(usize) -> bool,
    I: Iterator<Item = usize>,
{
    const UNVISITED: u32 = u32::MAX;
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0u32;
    let mut out = Vec::new();

    // Explicit DFS stack of (vertex, saved successor list, position).
    let mut call: Vec<(usize, Vec<usize>, usize)> = Vec::new();

    for root in 0..n {
        if !alive(root) || index[root] != UNVISITED {
            continue;
        }
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        let succs: Vec<usize> = succ(root).filter(|&w| alive(w)).collect();
        call.push((root, succs, 0));

        while let Some((v, succs, pos)) = call.last_mut() {
            let v = *v;
            if *pos < succs.len() {
                let w = succs[*pos];
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    let ws: Vec<usize> = succ(w).filter(|&u| alive(u)).collect();
                    call.push((w, ws, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some((parent, _, _)) = call.last() {
                    let p = *parent;
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    let has_edge = comp.len() > 1
                        || succ(comp[0]).any(|w| w == comp[0] && alive(comp[0]));
                    out.push(Scc {
                        vertices: comp,
                        has_edge,
                    });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_cycles_and_bridge() {
        // 0 <-> 1 -> 2 <-> 3, 4 isolated self-loop, 5 isolated.
        let adj: Vec<Vec<usize>> = vec![vec![1], vec![0, 2], vec![3], vec![2], vec![4], vec![]];
        let comps = sccs(6, |_| true, |v| adj[v].iter().copied());
        let mut with_edges: Vec<Vec<usize>> = comps
            .iter()
            .filter(|c| c.has_edge)
            .map(|c| c.vertices.clone())
            .collect();
        with_edges.sort();
        assert_eq!(with_edges, vec![vec![0, 1], vec![2, 3], vec![4]]);
        assert_eq!(comps.len(), 4);
    }

    #[test]
    fn respects_alive_mask() {
        let adj: Vec<Vec<usize>> = vec![vec![1], vec![0]];
        let comps = sccs(2, |v| v == 0, |v| adj[v].iter().copied());
        assert_eq!(comps.len(), 1);
        assert!(!comps[0].has_edge);
    }
}
