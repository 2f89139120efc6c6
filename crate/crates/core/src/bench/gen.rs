//! Benchmark generators: fairness formula families, the three experiment
//! arenas, and seeded random models.

use num::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::games::{Game, Player};
use crate::ltl::{Formula, Letter};
use crate::mdp::{Mdp, VertexKind};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("parameter {name} = {value} out of range {range}")]
    OutOfRange {
        name: &'static str,
        value: usize,
        range: &'static str,
    },
}

const FAIRNESS_ATOMS: [&str; 8] = ["a", "b", "c", "d", "e", "f", "g", "h"];

/// Conjunction of `n` fairness constraints `(F G x | G F y)` over `2n` fresh
/// atoms.
pub fn gen_fairness(n: usize) -> Result<Formula, GenError> {
    if !(1..=4).contains(&n) {
        return Err(GenError::OutOfRange {
            name: "n",
            value: n,
            range: "1..=4",
        });
    }
    Ok(Formula::and((0..n).map(|i| {
        Formula::or([
            Formula::ev(Formula::al(Formula::atom(FAIRNESS_ATOMS[2 * i]))),
            Formula::al(Formula::ev(Formula::atom(FAIRNESS_ATOMS[2 * i + 1]))),
        ])
    })))
}

/// An experiment arena (3 core vertices per copy) in the vertex-labeled
/// encoding: each letter-labeled edge of the drawing runs through a fresh
/// intermediate vertex carrying that letter, owned by the edge's source
/// owner.
pub struct ArenaBundle {
    pub game: Game,
    /// Number of drawn (circle/square) vertices, 3 per copy.
    pub core_vertices: usize,
}

/// The chained arenas over `Ap = {a, b, c}`: per copy one player-0 circle
/// with a self-loop on every letter except `{a}` and `{b}`, and two player-1
/// squares (self-loops on `{b}` resp. `{c}`, exits on the complements) that
/// exit to the next copy's circle, or back to their own circle in the last
/// copy.
pub fn gen_appendix_arena(copies: usize) -> Result<ArenaBundle, GenError> {
    if !(1..=3).contains(&copies) {
        return Err(GenError::OutOfRange {
            name: "copies",
            value: copies,
            range: "1..=3",
        });
    }
    let ap = ["a", "b", "c"];
    let all_letters: Vec<Letter> = (0..8)
        .map(|mask: usize| {
            Letter::from_names(
                ap.iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, x)| *x),
            )
        })
        .collect();
    let only = |names: &[&str]| Letter::from_names(names.iter().copied());
    let except = |bad: &[Letter]| -> Vec<Letter> {
        all_letters
            .iter()
            .filter(|l| !bad.contains(l))
            .cloned()
            .collect()
    };

    // Core vertices: circle_i = 3i, upper_i = 3i+1, lower_i = 3i+2.
    let core = 3 * copies;
    let mut owner: Vec<Player> = Vec::new();
    let mut labels: Vec<Letter> = Vec::new();
    for _ in 0..copies {
        owner.extend([Player::Zero, Player::One, Player::One]);
        labels.extend([Letter::empty(), Letter::empty(), Letter::empty()]);
    }
    let mut edges: Vec<Vec<usize>> = vec![Vec::new(); core];

    // (source, target, letters) in drawing order
    let mut drawn: Vec<(usize, usize, Vec<Letter>)> = Vec::new();
    for i in 0..copies {
        let circle = 3 * i;
        let upper = 3 * i + 1;
        let lower = 3 * i + 2;
        let exit_to = if i + 1 < copies { 3 * (i + 1) } else { circle };
        drawn.push((circle, circle, except(&[only(&["a"]), only(&["b"])])));
        drawn.push((circle, upper, vec![only(&["a"])]));
        drawn.push((circle, lower, vec![only(&["b"])]));
        drawn.push((upper, upper, vec![only(&["b"])]));
        drawn.push((upper, exit_to, except(&[only(&["b"])])));
        drawn.push((lower, lower, vec![only(&["c"])]));
        drawn.push((lower, exit_to, except(&[only(&["c"])])));
    }

    for (src, dst, letters) in drawn {
        for l in letters {
            let inter = owner.len();
            owner.push(owner[src]);
            labels.push(l);
            edges.push(vec![dst]);
            edges[src].push(inter);
        }
    }

    let game = Game {
        owner,
        edges,
        labels,
        initial: 0,
    };
    game.validate().expect("generated arena is valid");
    Ok(ArenaBundle {
        game,
        core_vertices: core,
    })
}

fn atom_names(n_atoms: usize) -> Vec<String> {
    (0..n_atoms)
        .map(|i| {
            FAIRNESS_ATOMS
                .get(i)
                .map(|s| s.to_string())
                .unwrap_or_else(|| format!("x{i}"))
        })
        .collect()
}

fn random_label<R: Rng>(rng: &mut R, atoms: &[String]) -> Letter {
    Letter::from_names(atoms.iter().filter(|_| rng.gen_bool(0.5)).map(|s| s.as_str()))
}

/// Splits the unit into `parts` positive rationals with denominator at
/// most 8.
fn random_distribution<R: Rng>(rng: &mut R, parts: usize) -> Vec<BigRational> {
    let denom: usize = 8;
    debug_assert!(parts <= denom);
    // positive composition of `denom` into `parts` summands
    let mut cuts: Vec<usize> = (1..denom).collect();
    for i in (1..cuts.len()).rev() {
        cuts.swap(i, rng.gen_range(0..=i));
    }
    let mut chosen: Vec<usize> = cuts.into_iter().take(parts - 1).collect();
    chosen.sort_unstable();
    chosen.insert(0, 0);
    chosen.push(denom);
    chosen
        .windows(2)
        .map(|w| BigRational::new(((w[1] - w[0]) as i64).into(), (denom as i64).into()))
        .collect()
}

/// Seeded random MDP: every vertex reachable from 0, every distribution a
/// rational with denominator at most 8, deterministic per seed.
pub fn gen_random_mdp(
    seed: u64,
    n_vertices: usize,
    n_atoms: usize,
    branch: usize,
) -> Result<Mdp, GenError> {
    if n_vertices == 0 || n_vertices > 64 {
        return Err(GenError::OutOfRange {
            name: "n_vertices",
            value: n_vertices,
            range: "1..=64",
        });
    }
    if n_atoms > 8 {
        return Err(GenError::OutOfRange {
            name: "n_atoms",
            value: n_atoms,
            range: "0..=8",
        });
    }
    let branch = branch.clamp(2, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let atoms = atom_names(n_atoms);
    let n = n_vertices;

    let kind: Vec<VertexKind> = (0..n)
        .map(|_| {
            if rng.gen_bool(0.5) {
                VertexKind::Player0
            } else {
                VertexKind::Probabilistic
            }
        })
        .collect();
    let labels: Vec<Letter> = (0..n).map(|_| random_label(&mut rng, &atoms)).collect();

    // spanning structure: vertex v > 0 is entered from some earlier vertex
    let mut targets: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 1..n {
        loop {
            let p = rng.gen_range(0..v);
            if targets[p].len() < branch {
                targets[p].push(v);
                break;
            }
        }
    }
    for (v, t) in targets.iter_mut().enumerate() {
        let want = rng.gen_range(1..=branch);
        while t.len() < want {
            t.push(rng.gen_range(0..n));
        }
        if t.is_empty() {
            t.push(v); // self-loop fallback
        }
        t.sort_unstable();
        t.dedup();
    }

    let mut dist: Vec<Vec<BigRational>> = vec![Vec::new(); n];
    for v in 0..n {
        if kind[v] == VertexKind::Probabilistic {
            dist[v] = random_distribution(&mut rng, targets[v].len());
        }
    }
    let m = Mdp {
        kind,
        edges: targets,
        dist,
        labels,
        initial: 0,
    };
    m.validate().expect("generated mdp is valid");
    Ok(m)
}

/// Seeded random game, same conventions as [`gen_random_mdp`].
pub fn gen_random_game(
    seed: u64,
    n_vertices: usize,
    n_atoms: usize,
    branch: usize,
) -> Result<Game, GenError> {
    if n_vertices == 0 || n_vertices > 64 {
        return Err(GenError::OutOfRange {
            name: "n_vertices",
            value: n_vertices,
            range: "1..=64",
        });
    }
    if n_atoms > 8 {
        return Err(GenError::OutOfRange {
            name: "n_atoms",
            value: n_atoms,
            range: "0..=8",
        });
    }
    let branch = branch.clamp(2, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let atoms = atom_names(n_atoms);
    let n = n_vertices;
    let owner: Vec<Player> = (0..n)
        .map(|_| if rng.gen_bool(0.5) { Player::Zero } else { Player::One })
        .collect();
    let labels: Vec<Letter> = (0..n).map(|_| random_label(&mut rng, &atoms)).collect();
    let mut edges: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 1..n {
        let p = rng.gen_range(0..v);
        edges[p].push(v);
    }
    for (v, row) in edges.iter_mut().enumerate() {
        let want = rng.gen_range(1..=branch);
        while row.len() < want {
            row.push(rng.gen_range(0..n));
        }
        if row.is_empty() {
            row.push(v);
        }
        row.sort_unstable();
        row.dedup();
    }
    let g = Game {
        owner,
        edges,
        labels,
        initial: 0,
    };
    g.validate().expect("generated game is valid");
    Ok(g)
}
