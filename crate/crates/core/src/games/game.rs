use std::fmt::Write as _;

use thiserror::Error;

use crate::automata::{DgrwAutomaton, GrpCondition, GrpPair};
use crate::ltl::Letter;
use crate::util::BitSet;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Player {
    Zero,
    One,
}

/// Two-player turn-based game with vertex labels.
#[derive(Clone, Debug)]
pub struct Game {
    pub owner: Vec<Player>,
    pub edges: Vec<Vec<usize>>,
    pub labels: Vec<Letter>,
    pub initial: usize,
}

#[derive(Debug, Error)]
pub enum GameError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("vertex {v}: {msg}")]
    Invalid { v: usize, msg: String },
}

impl Game {
    pub fn vertex_count(&self) -> usize {
        self.owner.len()
    }

    pub fn validate(&self) -> Result<(), GameError> {
        let n = self.vertex_count();
        if self.initial >= n {
            return Err(GameError::Invalid {
                v: self.initial,
                msg: "initial vertex out of range".into(),
            });
        }
        for v in 0..n {
            if self.edges[v].is_empty() {
                return Err(GameError::Invalid {
                    v,
                    msg: "vertex has no outgoing edge".into(),
                });
            }
            if self.edges[v].iter().any(|&w| w >= n) {
                return Err(GameError::Invalid {
                    v,
                    msg: "dangling edge target".into(),
                });
            }
        }
        Ok(())
    }
}

/// A game together with a condition given as a disjunction of generalized
/// Rabin pairs over its vertices.
#[derive(Clone, Debug)]
pub struct GrpGame {
    pub game: Game,
    pub condition: GrpCondition,
}

impl GrpGame {
    pub fn vertex_count(&self) -> usize {
        self.game.vertex_count()
    }

    pub fn pair_count(&self) -> usize {
        self.condition.pair_count()
    }

    pub fn iset_lens(&self) -> Vec<usize> {
        self.condition.pairs.iter().map(|p| p.isets.len()).collect()
    }

    /// Is `v` in the avoid set of `pair` (0-based)?
    pub fn in_f(&self, pair: usize, v: usize) -> bool {
        self.condition.pairs[pair].fset.contains(v)
    }

    /// Is `v` in Buechi set `j` (0-based) of `pair` (0-based)?
    pub fn in_i(&self, pair: usize, j: usize, v: usize) -> bool {
        self.condition.pairs[pair].isets[j].contains(v)
    }
}

/// Product of a game arena with a deterministic automaton; the automaton
/// tracks the label word including the current vertex, ownership is
/// inherited, and the condition is lifted through the automaton component.
pub fn game_product(g: &Game, a: &DgrwAutomaton) -> GrpGame {
    let mask_of = |v: usize| a.alphabet.mask_of(&g.labels[v]);
    let mut index = std::collections::HashMap::new();
    let mut verts: Vec<(usize, usize)> = Vec::new();
    let q0 = a.next(a.initial, mask_of(g.initial));
    index.insert((g.initial, q0), 0);
    verts.push((g.initial, q0));
    let mut head = 0;
    while head < verts.len() {
        let (v, q) = verts[head];
        head += 1;
        for &w in &g.edges[v] {
            let qw = a.next(q, mask_of(w));
            index.entry((w, qw)).or_insert_with(|| {
                verts.push((w, qw));
                verts.len() - 1
            });
        }
    }

    let n = verts.len();
    let mut owner = Vec::with_capacity(n);
    let mut edges = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for &(v, q) in &verts {
        owner.push(g.owner[v]);
        labels.push(g.labels[v].clone());
        let mut row: Vec<usize> = g.edges[v]
            .iter()
            .map(|&w| index[&(w, a.next(q, mask_of(w)))])
            .collect();
        row.sort_unstable();
        row.dedup();
        edges.push(row);
    }

    let pairs = a
        .condition
        .pairs
        .iter()
        .map(|p| {
            let mut fset = BitSet::new(n);
            let mut isets = vec![BitSet::new(n); p.isets.len()];
            for (s, &(_, q)) in verts.iter().enumerate() {
                if p.fset.contains(q) {
                    fset.insert(s);
                }
                for (j, iset) in p.isets.iter().enumerate() {
                    if iset.contains(q) {
                        isets[j].insert(s);
                    }
                }
            }
            GrpPair { fset, isets }
        })
        .collect();

    GrpGame {
        game: Game {
            owner,
            edges,
            labels,
            initial: 0,
        },
        condition: GrpCondition { pairs },
    }
}

/// Parses the game format: like the MDP format with `player1:` instead of
/// `prob:` and only plain `edge` lines.
pub fn parse_game(text: &str) -> Result<Game, GameError> {
    let p = |line: usize, msg: String| GameError::Parse { line, msg };
    let mut n: Option<usize> = None;
    let mut initial: Option<usize> = None;
    let mut p0: Vec<usize> = Vec::new();
    let mut p1: Vec<usize> = Vec::new();
    let mut labels: Vec<(usize, usize, Letter)> = Vec::new();
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut seen_header = false;
    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !seen_header {
            if line != "game" {
                return Err(p(ln, format!("expected header `game`, found `{line}`")));
            }
            seen_header = true;
            continue;
        }
        if let Some(rest) = line.strip_prefix("states:") {
            n = Some(rest.trim().parse().map_err(|_| p(ln, "bad state count".into()))?);
        } else if let Some(rest) = line.strip_prefix("init:") {
            initial = Some(rest.trim().parse().map_err(|_| p(ln, "bad initial".into()))?);
        } else if let Some(rest) = line.strip_prefix("player0:") {
            for tok in rest.split_whitespace() {
                p0.push(tok.parse().map_err(|_| p(ln, "bad vertex id".into()))?);
            }
        } else if let Some(rest) = line.strip_prefix("player1:") {
            for tok in rest.split_whitespace() {
                p1.push(tok.parse().map_err(|_| p(ln, "bad vertex id".into()))?);
            }
        } else if let Some(rest) = line.strip_prefix("label") {
            let (id_str, atoms) = rest
                .split_once(':')
                .ok_or_else(|| p(ln, "malformed label line".into()))?;
            let id: usize = id_str.trim().parse().map_err(|_| p(ln, "bad vertex id".into()))?;
            labels.push((ln, id, Letter::from_names(atoms.split_whitespace())));
        } else if let Some(rest) = line.strip_prefix("edge ") {
            let toks: Vec<&str> = rest.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(p(ln, "edge needs `<u> <v>`".into()));
            }
            edges.push((
                ln,
                toks[0].parse().map_err(|_| p(ln, "bad vertex id".into()))?,
                toks[1].parse().map_err(|_| p(ln, "bad vertex id".into()))?,
            ));
        } else {
            return Err(p(ln, format!("unrecognized line `{line}`")));
        }
    }
    let n = n.ok_or_else(|| p(0, "missing `states:`".into()))?;
    let initial = initial.ok_or_else(|| p(0, "missing `init:`".into()))?;
    let mut owner: Vec<Option<Player>> = vec![None; n];
    for &v in &p0 {
        if v >= n {
            return Err(p(0, format!("player0 vertex {v} out of range")));
        }
        if owner[v].is_some() {
            return Err(p(0, format!("vertex {v} listed twice")));
        }
        owner[v] = Some(Player::Zero);
    }
    for &v in &p1 {
        if v >= n {
            return Err(p(0, format!("player1 vertex {v} out of range")));
        }
        if owner[v].is_some() {
            return Err(p(0, format!("vertex {v} listed twice")));
        }
        owner[v] = Some(Player::One);
    }
    let owner: Vec<Player> = owner
        .into_iter()
        .enumerate()
        .map(|(v, o)| o.ok_or_else(|| p(0, format!("vertex {v} in neither player0 nor player1"))))
        .collect::<Result<_, _>>()?;
    let mut label_vec = vec![Letter::empty(); n];
    for (ln, id, l) in labels {
        if id >= n {
            return Err(p(ln, "label vertex out of range".into()));
        }
        label_vec[id] = l;
    }
    let mut edge_vec: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (ln, u, v) in edges {
        if u >= n || v >= n {
            return Err(p(ln, "edge endpoint out of range".into()));
        }
        edge_vec[u].push(v);
    }
    for row in edge_vec.iter_mut() {
        row.sort_unstable();
        row.dedup();
    }
    let g = Game {
        owner,
        edges: edge_vec,
        labels: label_vec,
        initial,
    };
    g.validate()?;
    Ok(g)
}

pub fn write_game(g: &Game) -> String {
    let mut out = String::new();
    writeln!(out, "game").unwrap();
    writeln!(out, "states: {}", g.vertex_count()).unwrap();
    writeln!(out, "init: {}", g.initial).unwrap();
    let list = |pl: Player| -> String {
        (0..g.vertex_count())
            .filter(|&v| g.owner[v] == pl)
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    writeln!(out, "player0: {}", list(Player::Zero)).unwrap();
    writeln!(out, "player1: {}", list(Player::One)).unwrap();
    for (v, l) in g.labels.iter().enumerate() {
        if !l.is_empty() {
            writeln!(out, "label {v}: {}", l.names().collect::<Vec<_>>().join(" ")).unwrap();
        }
    }
    for v in 0..g.vertex_count() {
        for &w in &g.edges[v] {
            writeln!(out, "edge {v} {w}").unwrap();
        }
    }
    out
}
