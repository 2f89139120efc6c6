//! Line-oriented text format for automata.
//!
//! ```text
//! dgrw
//! alphabet: a b
//! states: 3
//! initial: 0
//! state 0: F a | G b | {b}
//! trans 0 {b} 0
//! pair 1 F: 1 I1: 2
//! ```
//!
//! The last ` | ` of a `state` line separates the letter class
//! (a braced set, or `-` when no letter has been read); everything before it
//! is the formula. The Rabin variant uses header `drw`, state lines carry a
//! waiting-vector component `(w1,...,wk)`, and pair lines have a single
//! `I:` group.

use std::fmt::Write as _;

use smallvec::SmallVec;
use thiserror::Error;

use crate::ltl::{parse as parse_formula, Letter};
use crate::util::BitSet;

use super::types::{
    Alphabet, DgrwAutomaton, DgrwState, GrpCondition, GrpPair, RabinAutomaton, RabinPair,
    WaitingVector,
};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Bad { line: usize, msg: String },
}

fn bad(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Bad {
        line,
        msg: msg.into(),
    }
}

fn letter_str(l: &Letter) -> String {
    l.to_string()
}

pub fn write_dgrw(a: &DgrwAutomaton) -> String {
    let mut out = String::new();
    writeln!(out, "dgrw").unwrap();
    writeln!(
        out,
        "alphabet: {}",
        a.alphabet.atoms().collect::<Vec<_>>().join(" ")
    )
    .unwrap();
    writeln!(out, "states: {}", a.state_count()).unwrap();
    writeln!(out, "initial: {}", a.initial).unwrap();
    for (i, s) in a.states.iter().enumerate() {
        let letter = s.letter.as_ref().map_or("-".to_string(), |l| letter_str(l));
        writeln!(out, "state {i}: {} | {letter}", s.formula).unwrap();
    }
    for (s, row) in a.delta.iter().enumerate() {
        for (mask, t) in row.iter().enumerate() {
            writeln!(out, "trans {s} {} {t}", letter_str(&a.alphabet.letter_of(mask))).unwrap();
        }
    }
    for (i, p) in a.condition.pairs.iter().enumerate() {
        write!(out, "pair {} F:", i + 1).unwrap();
        for v in p.fset.iter() {
            write!(out, " {v}").unwrap();
        }
        for (j, iset) in p.isets.iter().enumerate() {
            write!(out, " I{}:", j + 1).unwrap();
            for v in iset.iter() {
                write!(out, " {v}").unwrap();
            }
        }
        writeln!(out).unwrap();
    }
    out
}

pub fn write_drw(r: &RabinAutomaton, dgrw: &DgrwAutomaton) -> String {
    let mut out = String::new();
    writeln!(out, "drw").unwrap();
    writeln!(
        out,
        "alphabet: {}",
        r.alphabet.atoms().collect::<Vec<_>>().join(" ")
    )
    .unwrap();
    writeln!(out, "states: {}", r.state_count()).unwrap();
    writeln!(out, "initial: {}", r.initial).unwrap();
    for (i, (q, wf)) in r.states.iter().enumerate() {
        let s = &dgrw.states[*q];
        let letter = s.letter.as_ref().map_or("-".to_string(), |l| letter_str(l));
        writeln!(out, "state {i}: {} | {letter} | {wf}", s.formula).unwrap();
    }
    for (s, row) in r.delta.iter().enumerate() {
        for (mask, t) in row.iter().enumerate() {
            writeln!(out, "trans {s} {} {t}", letter_str(&r.alphabet.letter_of(mask))).unwrap();
        }
    }
    for (i, p) in r.pairs.iter().enumerate() {
        write!(out, "pair {} F:", i + 1).unwrap();
        for v in p.fset.iter() {
            write!(out, " {v}").unwrap();
        }
        write!(out, " I:").unwrap();
        for v in p.iset.iter() {
            write!(out, " {v}").unwrap();
        }
        writeln!(out).unwrap();
    }
    out
}

/// Splits a state line payload at its final ` | ` into formula text and the
/// trailing component.
fn split_tail(payload: &str) -> Option<(&str, &str)> {
    let idx = payload.rfind(" | ")?;
    Some((&payload[..idx], &payload[idx + 3..]))
}

fn parse_letter(text: &str, line: usize, ap: &[&str]) -> Result<Letter, FormatError> {
    let inner = text
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| bad(line, format!("malformed letter `{text}`")))?;
    let mut l = Letter::empty();
    for name in inner.split_whitespace() {
        if !ap.contains(&name) {
            return Err(bad(line, format!("letter atom `{name}` not in alphabet")));
        }
        l.insert(name);
    }
    Ok(l)
}

struct Header {
    alphabet: Alphabet,
    n_states: usize,
    initial: usize,
}

struct Lines<'a> {
    items: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Lines<'a> {
        Lines {
            items: text
                .lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.trim()))
                .filter(|(_, l)| !l.is_empty())
                .collect(),
            pos: 0,
        }
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        let item = self.items.get(self.pos).copied();
        self.pos += 1;
        item
    }

    fn expect_kv(&mut self, key: &str) -> Result<(usize, &'a str), FormatError> {
        let (ln, l) = self
            .next()
            .ok_or_else(|| bad(0, format!("missing `{key}:` line")))?;
        l.strip_prefix(key)
            .and_then(|r| r.strip_prefix(':'))
            .map(|r| (ln, r.trim()))
            .ok_or_else(|| bad(ln, format!("expected `{key}:`")))
    }
}

fn parse_header(lines: &mut Lines, kind: &str) -> Result<Header, FormatError> {
    let (ln, head) = lines.next().ok_or_else(|| bad(0, "empty file"))?;
    if head != kind {
        return Err(bad(ln, format!("expected header `{kind}`, found `{head}`")));
    }
    let (_, atoms) = lines.expect_kv("alphabet")?;
    let alphabet = Alphabet::new(atoms.split_whitespace());
    let (ln, n) = lines.expect_kv("states")?;
    let n_states: usize = n.parse().map_err(|_| bad(ln, "bad state count"))?;
    let (ln, init) = lines.expect_kv("initial")?;
    let initial: usize = init.parse().map_err(|_| bad(ln, "bad initial state"))?;
    if initial >= n_states {
        return Err(bad(ln, "initial state out of range"));
    }
    Ok(Header {
        alphabet,
        n_states,
        initial,
    })
}

/// Common state/trans/pair scaffold. Returns per-state payload tails, the
/// transition table, and raw pair groups (`F` ids plus `I` groups).
struct Body<'a> {
    state_payloads: Vec<(usize, &'a str)>,
    delta: Vec<Vec<usize>>,
    pairs: Vec<(Vec<usize>, Vec<Vec<usize>>)>,
}

fn parse_body<'a>(
    lines: &mut Lines<'a>,
    header: &Header,
) -> Result<Body<'a>, FormatError> {
    let n = header.n_states;
    let letters = header.alphabet.letter_count();
    let ap: Vec<&str> = header.alphabet.atoms().collect();
    let mut state_payloads: Vec<Option<(usize, &str)>> = vec![None; n];
    let mut delta: Vec<Vec<Option<usize>>> = vec![vec![None; letters]; n];
    let mut pairs: Vec<(Vec<usize>, Vec<Vec<usize>>)> = Vec::new();

    while let Some((ln, line)) = lines.next() {
        if let Some(rest) = line.strip_prefix("state ") {
            let (id_str, payload) = rest
                .split_once(':')
                .ok_or_else(|| bad(ln, "malformed state line"))?;
            let id: usize = id_str
                .trim()
                .parse()
                .map_err(|_| bad(ln, "bad state id"))?;
            if id >= n {
                return Err(bad(ln, "state id out of range"));
            }
            if state_payloads[id].is_some() {
                return Err(bad(ln, format!("duplicate state {id}")));
            }
            state_payloads[id] = Some((ln, payload.trim()));
        } else if let Some(rest) = line.strip_prefix("trans ") {
            let mut it = rest.split_whitespace();
            let s: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| bad(ln, "bad source state"))?;
            let letter_tok: String = {
                // letter may contain spaces: collect tokens until one ends with '}'
                let mut tok = it
                    .next()
                    .ok_or_else(|| bad(ln, "missing letter"))?
                    .to_string();
                while !tok.ends_with('}') {
                    tok.push(' ');
                    tok.push_str(it.next().ok_or_else(|| bad(ln, "unterminated letter"))?);
                }
                tok
            };
            let t: usize = it
                .next()
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| bad(ln, "bad target state"))?;
            if s >= n || t >= n {
                return Err(bad(ln, "transition state out of range"));
            }
            let letter = parse_letter(&letter_tok, ln, &ap)?;
            let mask = header.alphabet.mask_of(&letter);
            if delta[s][mask].is_some() {
                return Err(bad(ln, "duplicate transition"));
            }
            delta[s][mask] = Some(t);
        } else if let Some(rest) = line.strip_prefix("pair ") {
            let mut toks = rest.split_whitespace().peekable();
            let idx: usize = toks
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| bad(ln, "bad pair index"))?;
            if idx != pairs.len() + 1 {
                return Err(bad(ln, "pair indices must be consecutive from 1"));
            }
            match toks.next() {
                Some("F:") => {}
                _ => return Err(bad(ln, "expected `F:`")),
            }
            let mut fids = Vec::new();
            let mut groups: Vec<Vec<usize>> = Vec::new();
            for tok in toks {
                if tok.ends_with(':') && (tok.starts_with('I')) {
                    groups.push(Vec::new());
                } else {
                    let id: usize = tok
                        .parse()
                        .map_err(|_| bad(ln, format!("bad state id `{tok}`")))?;
                    if id >= n {
                        return Err(bad(ln, "pair state id out of range"));
                    }
                    match groups.last_mut() {
                        Some(g) => g.push(id),
                        None => fids.push(id),
                    }
                }
            }
            if groups.is_empty() {
                return Err(bad(ln, "pair needs at least one I group"));
            }
            pairs.push((fids, groups));
        } else {
            return Err(bad(ln, format!("unrecognized line `{line}`")));
        }
    }

    let mut payloads = Vec::with_capacity(n);
    for (i, p) in state_payloads.into_iter().enumerate() {
        payloads.push(p.ok_or_else(|| bad(0, format!("missing state {i}")))?);
    }
    let mut table = Vec::with_capacity(n);
    for (s, row) in delta.into_iter().enumerate() {
        let mut out_row = Vec::with_capacity(letters);
        for (mask, t) in row.into_iter().enumerate() {
            out_row.push(t.ok_or_else(|| {
                bad(
                    0,
                    format!(
                        "missing transition from state {s} on {}",
                        header.alphabet.letter_of(mask)
                    ),
                )
            })?);
        }
        table.push(out_row);
    }
    Ok(Body {
        state_payloads: payloads,
        delta: table,
        pairs,
    })
}

pub fn parse_dgrw(text: &str) -> Result<DgrwAutomaton, FormatError> {
    let mut lines = Lines::new(text);
    let header = parse_header(&mut lines, "dgrw")?;
    let body = parse_body(&mut lines, &header)?;
    let ap: Vec<&str> = header.alphabet.atoms().collect();

    let mut states = Vec::with_capacity(header.n_states);
    for (ln, payload) in &body.state_payloads {
        let (ftext, tail) = split_tail(payload)
            .ok_or_else(|| bad(*ln, "state line needs `<formula> | <letter or ->`"))?;
        let formula = parse_formula(ftext.trim(), &ap)
            .map_err(|e| bad(*ln, format!("bad state formula: {e}")))?;
        let letter = if tail.trim() == "-" {
            None
        } else {
            Some(parse_letter(tail.trim(), *ln, &ap)?)
        };
        states.push(DgrwState { formula, letter });
    }

    if body.pairs.is_empty() {
        return Err(bad(0, "automaton needs at least one pair"));
    }
    let n = header.n_states;
    let pairs = body
        .pairs
        .into_iter()
        .map(|(fids, groups)| GrpPair {
            fset: BitSet::from_iter(n, fids),
            isets: groups
                .into_iter()
                .map(|g| BitSet::from_iter(n, g))
                .collect(),
        })
        .collect();

    let formula = states[header.initial].formula.clone();
    Ok(DgrwAutomaton {
        formula,
        alphabet: header.alphabet,
        states,
        initial: header.initial,
        delta: body.delta,
        condition: GrpCondition { pairs },
    })
}

pub fn parse_drw(text: &str) -> Result<RabinAutomaton, FormatError> {
    let mut lines = Lines::new(text);
    let header = parse_header(&mut lines, "drw")?;
    let body = parse_body(&mut lines, &header)?;

    let mut states = Vec::with_capacity(header.n_states);
    for (ln, payload) in &body.state_payloads {
        // formula | letter | (w1,...,wk); only the waiting vector matters
        // for the structure, the rest is annotation.
        let (_, wf_text) = split_tail(payload)
            .ok_or_else(|| bad(*ln, "state line needs a waiting-vector component"))?;
        let inner = wf_text
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| bad(*ln, format!("malformed waiting vector `{wf_text}`")))?;
        let mut wf: SmallVec<[u8; 8]> = SmallVec::new();
        if !inner.is_empty() {
            for part in inner.split(',') {
                wf.push(
                    part.trim()
                        .parse()
                        .map_err(|_| bad(*ln, "bad waiting vector entry"))?,
                );
            }
        }
        states.push((0usize, WaitingVector(wf)));
    }

    if body.pairs.is_empty() {
        return Err(bad(0, "automaton needs at least one pair"));
    }
    let n = header.n_states;
    let mut pairs = Vec::new();
    for (ln_pairs, (fids, groups)) in body.pairs.into_iter().enumerate() {
        if groups.len() != 1 {
            return Err(bad(
                0,
                format!("rabin pair {} must have exactly one I group", ln_pairs + 1),
            ));
        }
        pairs.push(RabinPair {
            fset: BitSet::from_iter(n, fids),
            iset: BitSet::from_iter(n, groups.into_iter().next().unwrap()),
        });
    }

    Ok(RabinAutomaton {
        alphabet: header.alphabet,
        states,
        initial: header.initial,
        delta: body.delta,
        pairs,
    })
}
