use std::fmt::Write as _;

use num::{BigRational, One, Zero};
use thiserror::Error;

use crate::ltl::Letter;

pub type Rational = BigRational;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VertexKind {
    Player0,
    Probabilistic,
}

/// Explicit-state Markov decision process. Player-0 vertices choose an
/// outgoing edge; probabilistic vertices carry a rational distribution whose
/// support is exactly their edge set.
#[derive(Clone, Debug)]
pub struct Mdp {
    pub kind: Vec<VertexKind>,
    /// Successors, sorted; for probabilistic vertices this is the support of
    /// the distribution.
    pub edges: Vec<Vec<usize>>,
    /// Distribution per probabilistic vertex, aligned with `edges`.
    pub dist: Vec<Vec<Rational>>,
    pub labels: Vec<Letter>,
    pub initial: usize,
}

#[derive(Debug, Error)]
pub enum MdpError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("vertex {v}: {msg}")]
    Invalid { v: usize, msg: String },
}

impl Mdp {
    pub fn vertex_count(&self) -> usize {
        self.kind.len()
    }

    pub fn is_player0(&self, v: usize) -> bool {
        self.kind[v] == VertexKind::Player0
    }

    /// Probability of the edge `(u, v)`; zero when absent.
    pub fn probability(&self, u: usize, v: usize) -> Rational {
        match self.edges[u].iter().position(|&w| w == v) {
            Some(i) if self.kind[u] == VertexKind::Probabilistic => self.dist[u][i].clone(),
            _ => Rational::zero(),
        }
    }

    /// Checks the structural invariants; every constructor and parser ends
    /// here.
    pub fn validate(&self) -> Result<(), MdpError> {
        let n = self.vertex_count();
        if self.edges.len() != n || self.dist.len() != n || self.labels.len() != n {
            return Err(MdpError::Invalid {
                v: 0,
                msg: "field lengths disagree".into(),
            });
        }
        if self.initial >= n {
            return Err(MdpError::Invalid {
                v: self.initial,
                msg: "initial vertex out of range".into(),
            });
        }
        for v in 0..n {
            if self.edges[v].is_empty() {
                return Err(MdpError::Invalid {
                    v,
                    msg: "vertex has no outgoing edge".into(),
                });
            }
            if self.edges[v].iter().any(|&w| w >= n) {
                return Err(MdpError::Invalid {
                    v,
                    msg: "dangling edge target".into(),
                });
            }
            let mut sorted = self.edges[v].clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted != self.edges[v] {
                return Err(MdpError::Invalid {
                    v,
                    msg: "edges must be sorted and duplicate-free".into(),
                });
            }
            match self.kind[v] {
                VertexKind::Player0 => {
                    if !self.dist[v].is_empty() {
                        return Err(MdpError::Invalid {
                            v,
                            msg: "player-0 vertex with a distribution".into(),
                        });
                    }
                }
                VertexKind::Probabilistic => {
                    if self.dist[v].len() != self.edges[v].len() {
                        return Err(MdpError::Invalid {
                            v,
                            msg: "edge/distribution mismatch".into(),
                        });
                    }
                    if self.dist[v].iter().any(|p| *p <= Rational::zero()) {
                        return Err(MdpError::Invalid {
                            v,
                            msg: "distribution entries must be positive".into(),
                        });
                    }
                    let sum: Rational = self.dist[v].iter().sum();
                    if !sum.is_one() {
                        return Err(MdpError::Invalid {
                            v,
                            msg: format!("distribution does not sum to 1 (sum = {sum})"),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Parses the line-oriented MDP format:
///
/// ```text
/// mdp
/// states: 3
/// init: 0
/// player0: 0
/// prob: 1 2
/// label 0: a b
/// edge 0 1
/// pedge 1 0 1/2
/// pedge 1 2 1/2
/// ```
pub fn parse_mdp(text: &str) -> Result<Mdp, MdpError> {
    let p = |line: usize, msg: String| MdpError::Parse { line, msg };
    let mut n: Option<usize> = None;
    let mut initial: Option<usize> = None;
    let mut player0: Vec<usize> = Vec::new();
    let mut prob: Vec<usize> = Vec::new();
    let mut labels: Vec<(usize, usize, Letter)> = Vec::new();
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut pedges: Vec<(usize, usize, usize, Rational)> = Vec::new();
    let mut seen_header = false;

    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !seen_header {
            if line != "mdp" {
                return Err(p(ln, format!("expected header `mdp`, found `{line}`")));
            }
            seen_header = true;
            continue;
        }
        if let Some(rest) = line.strip_prefix("states:") {
            n = Some(
                rest.trim()
                    .parse()
                    .map_err(|_| p(ln, "bad state count".into()))?,
            );
        } else if let Some(rest) = line.strip_prefix("init:") {
            initial = Some(
                rest.trim()
                    .parse()
                    .map_err(|_| p(ln, "bad initial vertex".into()))?,
            );
        } else if let Some(rest) = line.strip_prefix("player0:") {
            for tok in rest.split_whitespace() {
                player0.push(tok.parse().map_err(|_| p(ln, "bad vertex id".into()))?);
            }
        } else if let Some(rest) = line.strip_prefix("prob:") {
            for tok in rest.split_whitespace() {
                prob.push(tok.parse().map_err(|_| p(ln, "bad vertex id".into()))?);
            }
        } else if let Some(rest) = line.strip_prefix("label") {
            let (id_str, atoms) = rest
                .split_once(':')
                .ok_or_else(|| p(ln, "malformed label line".into()))?;
            let id: usize = id_str
                .trim()
                .parse()
                .map_err(|_| p(ln, "bad vertex id".into()))?;
            labels.push((ln, id, Letter::from_names(atoms.split_whitespace())));
        } else if let Some(rest) = line.strip_prefix("edge ") {
            let toks: Vec<&str> = rest.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(p(ln, "edge needs `<u> <v>`".into()));
            }
            let u = toks[0].parse().map_err(|_| p(ln, "bad vertex id".into()))?;
            let v = toks[1].parse().map_err(|_| p(ln, "bad vertex id".into()))?;
            edges.push((ln, u, v));
        } else if let Some(rest) = line.strip_prefix("pedge ") {
            let toks: Vec<&str> = rest.split_whitespace().collect();
            if toks.len() != 3 {
                return Err(p(ln, "pedge needs `<u> <v> <p>/<q>`".into()));
            }
            let u = toks[0].parse().map_err(|_| p(ln, "bad vertex id".into()))?;
            let v = toks[1].parse().map_err(|_| p(ln, "bad vertex id".into()))?;
            let prob_val = parse_rational(toks[2]).ok_or_else(|| {
                p(ln, format!("bad probability `{}`", toks[2]))
            })?;
            pedges.push((ln, u, v, prob_val));
        } else {
            return Err(p(ln, format!("unrecognized line `{line}`")));
        }
    }

    let n = n.ok_or_else(|| p(0, "missing `states:`".into()))?;
    let initial = initial.ok_or_else(|| p(0, "missing `init:`".into()))?;
    let mut kind: Vec<Option<VertexKind>> = vec![None; n];
    for &v in &player0 {
        if v >= n {
            return Err(p(0, format!("player0 vertex {v} out of range")));
        }
        kind[v] = Some(VertexKind::Player0);
    }
    for &v in &prob {
        if v >= n {
            return Err(p(0, format!("prob vertex {v} out of range")));
        }
        if kind[v].is_some() {
            return Err(p(0, format!("vertex {v} listed twice")));
        }
        kind[v] = Some(VertexKind::Probabilistic);
    }
    let kind: Vec<VertexKind> = kind
        .into_iter()
        .enumerate()
        .map(|(v, k)| k.ok_or_else(|| p(0, format!("vertex {v} in neither player0 nor prob"))))
        .collect::<Result<_, _>>()?;

    let mut label_vec = vec![Letter::empty(); n];
    for (ln, id, l) in labels {
        if id >= n {
            return Err(p(ln, "label vertex out of range".into()));
        }
        label_vec[id] = l;
    }

    let mut edge_vec: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut dist_vec: Vec<Vec<Rational>> = vec![Vec::new(); n];
    for (ln, u, v) in edges {
        if u >= n || v >= n {
            return Err(p(ln, "edge endpoint out of range".into()));
        }
        if kind[u] != VertexKind::Player0 {
            return Err(p(ln, format!("`edge` from probabilistic vertex {u}; use `pedge`")));
        }
        edge_vec[u].push(v);
    }
    for (ln, u, v, prob_val) in pedges {
        if u >= n || v >= n {
            return Err(p(ln, "pedge endpoint out of range".into()));
        }
        if kind[u] != VertexKind::Probabilistic {
            return Err(p(ln, format!("`pedge` from player-0 vertex {u}; use `edge`")));
        }
        edge_vec[u].push(v);
        dist_vec[u].push(prob_val);
    }
    // Sort edges (and distributions alongside) per vertex.
    for v in 0..n {
        if kind[v] == VertexKind::Probabilistic {
            let mut paired: Vec<(usize, Rational)> = edge_vec[v]
                .iter()
                .copied()
                .zip(dist_vec[v].iter().cloned())
                .collect();
            paired.sort_by_key(|(t, _)| *t);
            // merge duplicate targets
            let mut merged: Vec<(usize, Rational)> = Vec::new();
            for (t, pr) in paired {
                match merged.last_mut() {
                    Some((lt, lp)) if *lt == t => *lp += pr,
                    _ => merged.push((t, pr)),
                }
            }
            edge_vec[v] = merged.iter().map(|(t, _)| *t).collect();
            dist_vec[v] = merged.into_iter().map(|(_, pr)| pr).collect();
        } else {
            edge_vec[v].sort_unstable();
            edge_vec[v].dedup();
        }
    }

    let m = Mdp {
        kind,
        edges: edge_vec,
        dist: dist_vec,
        labels: label_vec,
        initial,
    };
    m.validate()?;
    Ok(m)
}

fn parse_rational(tok: &str) -> Option<Rational> {
    if let Some((num, den)) = tok.split_once('/') {
        let num: num::BigInt = num.parse().ok()?;
        let den: num::BigInt = den.parse().ok()?;
        if den.is_zero() {
            return None;
        }
        Some(Rational::new(num, den))
    } else {
        let num: num::BigInt = tok.parse().ok()?;
        Some(Rational::from_integer(num))
    }
}

pub fn write_mdp(m: &Mdp) -> String {
    let mut out = String::new();
    writeln!(out, "mdp").unwrap();
    writeln!(out, "states: {}", m.vertex_count()).unwrap();
    writeln!(out, "init: {}", m.initial).unwrap();
    let list = |k: VertexKind| -> String {
        (0..m.vertex_count())
            .filter(|&v| m.kind[v] == k)
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    writeln!(out, "player0: {}", list(VertexKind::Player0)).unwrap();
    writeln!(out, "prob: {}", list(VertexKind::Probabilistic)).unwrap();
    for (v, l) in m.labels.iter().enumerate() {
        if !l.is_empty() {
            writeln!(
                out,
                "label {v}: {}",
                l.names().collect::<Vec<_>>().join(" ")
            )
            .unwrap();
        }
    }
    for v in 0..m.vertex_count() {
        match m.kind[v] {
            VertexKind::Player0 => {
                for &w in &m.edges[v] {
                    writeln!(out, "edge {v} {w}").unwrap();
                }
            }
            VertexKind::Probabilistic => {
                for (&w, p) in m.edges[v].iter().zip(&m.dist[v]) {
                    writeln!(out, "pedge {v} {w} {}/{}", p.numer(), p.denom()).unwrap();
                }
            }
        }
    }
    out
}
