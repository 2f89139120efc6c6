//! Maximal reachability probabilities: value iteration from below, and an
//! exact rational mode (qualitative zero-set precomputation followed by
//! strategy improvement with exact linear solves).

use num::{One, Zero};

use crate::util::BitSet;

use super::model::{Mdp, Rational, VertexKind};

#[derive(Clone, Copy, Debug)]
pub enum ReachMode {
    /// Value iteration from below until the supremum-norm step difference
    /// drops under epsilon.
    Iterative { epsilon: f64 },
    Exact,
}

#[derive(Clone, Debug)]
pub enum ReachValues {
    Iterative(Vec<f64>),
    Exact(Vec<Rational>),
}

impl ReachValues {
    pub fn approx(&self, v: usize) -> f64 {
        match self {
            ReachValues::Iterative(x) => x[v],
            ReachValues::Exact(x) => rational_to_f64(&x[v]),
        }
    }

    pub fn exact(&self, v: usize) -> Option<&Rational> {
        match self {
            ReachValues::Iterative(_) => None,
            ReachValues::Exact(x) => Some(&x[v]),
        }
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    let f = |i: &num::BigInt| i.to_string().parse::<f64>().unwrap_or(f64::NAN);
    f(r.numer()) / f(r.denom())
}

/// Maximal probability, per vertex, of reaching `target`.
pub fn max_reach(m: &Mdp, target: &BitSet, mode: ReachMode) -> ReachValues {
    match mode {
        ReachMode::Iterative { epsilon } => ReachValues::Iterative(value_iteration(m, target, epsilon)),
        ReachMode::Exact => ReachValues::Exact(exact_reach(m, target)),
    }
}

fn value_iteration(m: &Mdp, target: &BitSet, epsilon: f64) -> Vec<f64> {
    let n = m.vertex_count();
    let dist_f64: Vec<Vec<f64>> = m
        .dist
        .iter()
        .map(|row| row.iter().map(rational_to_f64).collect())
        .collect();
    let mut x = vec![0.0f64; n];
    for v in target.iter() {
        x[v] = 1.0;
    }
    loop {
        let mut delta = 0.0f64;
        let mut next = x.clone();
        for v in 0..n {
            if target.contains(v) {
                continue;
            }
            let val = match m.kind[v] {
                VertexKind::Player0 => m
                    .edges[v]
                    .iter()
                    .map(|&w| x[w])
                    .fold(0.0, f64::max),
                VertexKind::Probabilistic => m.edges[v]
                    .iter()
                    .zip(&dist_f64[v])
                    .map(|(&w, p)| p * x[w])
                    .sum(),
            };
            delta = delta.max(val - x[v]);
            next[v] = val;
        }
        x = next;
        if delta < epsilon {
            return x;
        }
    }
}

/// Vertices from which `target` is reachable in the underlying graph (the
/// maximal probability is positive exactly there).
fn can_reach(edges: &[Vec<usize>], n: usize, target: &BitSet) -> BitSet {
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (u, row) in edges.iter().enumerate() {
        for &v in row {
            preds[v].push(u);
        }
    }
    let mut seen = target.clone();
    let mut queue: Vec<usize> = target.iter().collect();
    while let Some(v) = queue.pop() {
        for &u in &preds[v] {
            if !seen.contains(u) {
                seen.insert(u);
                queue.push(u);
            }
        }
    }
    seen
}

fn exact_reach(m: &Mdp, target: &BitSet) -> Vec<Rational> {
    let n = m.vertex_count();
    let positive = can_reach(&m.edges, n, target);

    // Initial strategy: any successor, preferring one that can still reach
    // the target.
    let mut choice: Vec<usize> = (0..n)
        .map(|v| {
            m.edges[v]
                .iter()
                .copied()
                .find(|&w| positive.contains(w))
                .unwrap_or(m.edges[v][0])
        })
        .collect();

    loop {
        let x = strategy_values(m, target, &choice);
        // Switch to a strictly better successor where one exists.
        let mut improved = false;
        for v in 0..n {
            if m.kind[v] != VertexKind::Player0 || target.contains(v) {
                continue;
            }
            let mut best = choice[v];
            for &w in &m.edges[v] {
                if x[w] > x[best] {
                    best = w;
                }
            }
            if x[best] > x[choice[v]] {
                choice[v] = best;
                improved = true;
            }
        }
        if !improved {
            return x;
        }
    }
}

/// Exact reach probabilities of the Markov chain induced by fixing player-0
/// choices.
fn strategy_values(m: &Mdp, target: &BitSet, choice: &[usize]) -> Vec<Rational> {
    let n = m.vertex_count();
    let chain_succ = |v: usize| -> Vec<usize> {
        if target.contains(v) {
            vec![]
        } else {
            match m.kind[v] {
                VertexKind::Player0 => vec![choice[v]],
                VertexKind::Probabilistic => m.edges[v].clone(),
            }
        }
    };
    let chain_edges: Vec<Vec<usize>> = (0..n).map(chain_succ).collect();
    let alive = can_reach(&chain_edges, n, target);

    // Unknowns: alive non-target vertices; x = P x + b restricted there.
    let unknowns: Vec<usize> = (0..n)
        .filter(|&v| alive.contains(v) && !target.contains(v))
        .collect();
    let index_of: std::collections::HashMap<usize, usize> =
        unknowns.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let k = unknowns.len();
    let mut mat: Vec<Vec<Rational>> = vec![vec![Rational::zero(); k + 1]; k];
    for (row, &v) in unknowns.iter().enumerate() {
        mat[row][row] = Rational::one();
        let add = |w: usize, p: Rational, mat_row: &mut Vec<Rational>| {
            if target.contains(w) {
                mat_row[k] += p;
            } else if let Some(&col) = index_of.get(&w) {
                mat_row[col] -= p;
            } // vertices that cannot reach the target contribute 0
        };
        match m.kind[v] {
            VertexKind::Player0 => {
                let w = choice[v];
                let row_ref = &mut mat[row];
                add(w, Rational::one(), row_ref);
            }
            VertexKind::Probabilistic => {
                let row_ref = &mut mat[row];
                for (&w, p) in m.edges[v].iter().zip(&m.dist[v]) {
                    add(w, p.clone(), row_ref);
                }
            }
        }
    }
    let sol = gauss_solve(mat, k);

    let mut x = vec![Rational::zero(); n];
    for v in target.iter() {
        x[v] = Rational::one();
    }
    for (i, &v) in unknowns.iter().enumerate() {
        x[v] = sol[i].clone();
    }
    x
}

/// Solves the k x k system given as rows of length k+1 (augmented column).
fn gauss_solve(mut mat: Vec<Vec<Rational>>, k: usize) -> Vec<Rational> {
    for col in 0..k {
        let pivot = (col..k)
            .find(|&r| !mat[r][col].is_zero())
            .expect("reach system is non-singular");
        mat.swap(col, pivot);
        let p = mat[col][col].clone();
        for c in col..=k {
            mat[col][c] = &mat[col][c] / &p;
        }
        for r in 0..k {
            if r != col && !mat[r][col].is_zero() {
                let factor = mat[r][col].clone();
                for c in col..=k {
                    let sub = &factor * &mat[col][c];
                    mat[r][c] = &mat[r][c] - &sub;
                }
            }
        }
    }
    (0..k).map(|r| mat[r][k].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::model::parse_mdp;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn target_vertex_has_value_one() {
        let m = parse_mdp("mdp\nstates: 1\ninit: 0\nplayer0: 0\nprob:\nedge 0 0\n").unwrap();
        let t = BitSet::from_iter(1, [0]);
        match max_reach(&m, &t, ReachMode::Exact) {
            ReachValues::Exact(x) => assert_eq!(x[0], Rational::one()),
            _ => unreachable!(),
        }
    }

    #[test]
    fn coin_flip_is_half() {
        // 0 prob: 1/2 -> 1 (target), 1/2 -> 2 (dead)
        let m = parse_mdp(
            "mdp\nstates: 3\ninit: 0\nplayer0: 1 2\nprob: 0\n\
             pedge 0 1 1/2\npedge 0 2 1/2\nedge 1 1\nedge 2 2\n",
        )
        .unwrap();
        let t = BitSet::from_iter(3, [1]);
        match max_reach(&m, &t, ReachMode::Exact) {
            ReachValues::Exact(x) => assert_eq!(x[0], rat(1, 2)),
            _ => unreachable!(),
        }
        match max_reach(&m, &t, ReachMode::Iterative { epsilon: 1e-9 }) {
            ReachValues::Iterative(x) => assert!((x[0] - 0.5).abs() < 1e-6),
            _ => unreachable!(),
        }
    }

    #[test]
    fn player_zero_takes_the_better_branch() {
        // 0 chooses between a 1/3 branch and a 2/3 branch into the target 3.
        let m = parse_mdp(
            "mdp\nstates: 5\ninit: 0\nplayer0: 0 3 4\nprob: 1 2\n\
             edge 0 1\nedge 0 2\npedge 1 3 1/3\npedge 1 4 2/3\n\
             pedge 2 3 2/3\npedge 2 4 1/3\nedge 3 3\nedge 4 4\n",
        )
        .unwrap();
        let t = BitSet::from_iter(5, [3]);
        match max_reach(&m, &t, ReachMode::Exact) {
            ReachValues::Exact(x) => assert_eq!(x[0], rat(2, 3)),
            _ => unreachable!(),
        }
    }

    #[test]
    fn iteration_is_monotone_from_below() {
        let m = parse_mdp(
            "mdp\nstates: 3\ninit: 0\nplayer0: 2\nprob: 0 1\n\
             pedge 0 1 1/2\npedge 0 0 1/2\npedge 1 2 1/2\npedge 1 0 1/2\nedge 2 2\n",
        )
        .unwrap();
        let t = BitSet::from_iter(3, [2]);
        // successive sup-norm deltas are non-negative by construction;
        // value stays within [0, 1] and under the exact value
        match (
            max_reach(&m, &t, ReachMode::Iterative { epsilon: 1e-9 }),
            max_reach(&m, &t, ReachMode::Exact),
        ) {
            (ReachValues::Iterative(apx), ReachValues::Exact(ex)) => {
                for v in 0..3 {
                    let e = rational_to_f64(&ex[v]);
                    assert!(apx[v] <= e + 1e-12);
                    assert!(e - apx[v] < 1e-6);
                }
            }
            _ => unreachable!(),
        }
    }
}
