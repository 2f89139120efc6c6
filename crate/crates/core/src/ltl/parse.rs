use thiserror::Error;

use super::canonical::{canon_var_count, canonicalize, MAX_CANON_VARS};
use super::formula::Formula;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LtlError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown atom `{name}` at offset {pos}")]
    UnknownAtom { pos: usize, name: String },
    #[error("unsupported operator `{op}` at offset {pos}")]
    UnsupportedOperator { pos: usize, op: String },
    #[error("formula too large ({vars} boolean variables, limit {limit})")]
    TooLarge { vars: usize, limit: usize },
}

/// Parses a formula over the declared alphabet `ap` and returns its
/// canonicalized negation normal form.
///
/// Grammar (ASCII): atoms `[a-zA-Z][a-zA-Z0-9_]*`; operators `!`, `&`, `|`,
/// `F`, `G`; keywords `true`, `false`; parentheses. Precedence
/// `!`/`F`/`G` > `&` > `|`. `U`, `X`, `R` and `W` are reserved and rejected.
/// General negation is accepted and pushed down to the atoms.
pub fn parse(text: &str, ap: &[&str]) -> Result<Formula, LtlError> {
    parse_impl(text, Some(ap))
}

/// Like [`parse`], but accepts any atom names (the alphabet is inferred).
pub fn parse_any_atoms(text: &str) -> Result<Formula, LtlError> {
    parse_impl(text, None)
}

fn parse_impl(text: &str, ap: Option<&[&str]>) -> Result<Formula, LtlError> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0, ap };
    let surface = p.parse_or()?;
    match p.peek() {
        (Tok::End, _) => {}
        (t, pos) => {
            return Err(LtlError::Syntax {
                pos,
                msg: format!("unexpected {}", t.describe()),
            })
        }
    }
    let nnf = surface.to_nnf(false);
    let vars = canon_var_count(&nnf);
    if vars > MAX_CANON_VARS {
        return Err(LtlError::TooLarge {
            vars,
            limit: MAX_CANON_VARS,
        });
    }
    Ok(canonicalize(&nnf))
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    True,
    False,
    OpF,
    OpG,
    Bang,
    Amp,
    Pipe,
    LPar,
    RPar,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("atom `{s}`"),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::OpF => "`F`".into(),
            Tok::OpG => "`G`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::LPar => "`(`".into(),
            Tok::RPar => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, LtlError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '!' => {
                out.push((Tok::Bang, i));
                i += 1;
            }
            '&' => {
                out.push((Tok::Amp, i));
                i += 1;
            }
            '|' => {
                out.push((Tok::Pipe, i));
                i += 1;
            }
            '(' => {
                out.push((Tok::LPar, i));
                i += 1;
            }
            ')' => {
                out.push((Tok::RPar, i));
                i += 1;
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let word = &text[start..i];
                let tok = match word {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    "F" => Tok::OpF,
                    "G" => Tok::OpG,
                    "U" | "X" | "R" | "W" => {
                        return Err(LtlError::UnsupportedOperator {
                            pos: start,
                            op: word.into(),
                        })
                    }
                    _ => Tok::Ident(word.into()),
                };
                out.push((tok, start));
            }
            other => {
                return Err(LtlError::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    out.push((Tok::End, bytes.len()));
    Ok(out)
}

/// Surface syntax tree; negation is pushed inward afterwards.
enum Surface {
    True,
    False,
    Atom(String),
    Not(Box<Surface>),
    And(Box<Surface>, Box<Surface>),
    Or(Box<Surface>, Box<Surface>),
    F(Box<Surface>),
    G(Box<Surface>),
}

impl Surface {
    fn to_nnf(&self, negate: bool) -> Formula {
        match self {
            Surface::True => {
                if negate {
                    Formula::ff()
                } else {
                    Formula::tt()
                }
            }
            Surface::False => {
                if negate {
                    Formula::tt()
                } else {
                    Formula::ff()
                }
            }
            Surface::Atom(a) => {
                if negate {
                    Formula::neg_atom(a)
                } else {
                    Formula::atom(a)
                }
            }
            Surface::Not(x) => x.to_nnf(!negate),
            Surface::And(a, b) => {
                let (l, r) = (a.to_nnf(negate), b.to_nnf(negate));
                if negate {
                    Formula::or([l, r])
                } else {
                    Formula::and([l, r])
                }
            }
            Surface::Or(a, b) => {
                let (l, r) = (a.to_nnf(negate), b.to_nnf(negate));
                if negate {
                    Formula::and([l, r])
                } else {
                    Formula::or([l, r])
                }
            }
            Surface::F(x) => {
                let inner = x.to_nnf(negate);
                if negate {
                    Formula::al(inner)
                } else {
                    Formula::ev(inner)
                }
            }
            Surface::G(x) => {
                let inner = x.to_nnf(negate);
                if negate {
                    Formula::ev(inner)
                } else {
                    Formula::al(inner)
                }
            }
        }
    }
}

struct Parser<'a> {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
    ap: Option<&'a [&'a str]>,
}

impl Parser<'_> {
    fn peek(&self) -> (Tok, usize) {
        self.tokens[self.pos].clone()
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn parse_or(&mut self) -> Result<Surface, LtlError> {
        let mut lhs = self.parse_and()?;
        while let (Tok::Pipe, _) = self.peek() {
            self.bump();
            let rhs = self.parse_and()?;
            lhs = Surface::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_and(&mut self) -> Result<Surface, LtlError> {
        let mut lhs = self.parse_unary()?;
        while let (Tok::Amp, _) = self.peek() {
            self.bump();
            let rhs = self.parse_unary()?;
            lhs = Surface::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_unary(&mut self) -> Result<Surface, LtlError> {
        match self.peek() {
            (Tok::Bang, _) => {
                self.bump();
                Ok(Surface::Not(Box::new(self.parse_unary()?)))
            }
            (Tok::OpF, _) => {
                self.bump();
                Ok(Surface::F(Box::new(self.parse_unary()?)))
            }
            (Tok::OpG, _) => {
                self.bump();
                Ok(Surface::G(Box::new(self.parse_unary()?)))
            }
            _ => self.parse_primary(),
        }
    }

    fn parse_primary(&mut self) -> Result<Surface, LtlError> {
        match self.bump() {
            (Tok::True, _) => Ok(Surface::True),
            (Tok::False, _) => Ok(Surface::False),
            (Tok::Ident(name), pos) => {
                if let Some(ap) = self.ap {
                    if !ap.contains(&name.as_str()) {
                        return Err(LtlError::UnknownAtom { pos, name });
                    }
                }
                Ok(Surface::Atom(name))
            }
            (Tok::LPar, lpos) => {
                let inner = self.parse_or()?;
                match self.bump() {
                    (Tok::RPar, _) => Ok(inner),
                    (t, pos) => Err(LtlError::Syntax {
                        pos,
                        msg: format!(
                            "expected `)` to close `(` at offset {lpos}, found {}",
                            t.describe()
                        ),
                    }),
                }
            }
            (t, pos) => Err(LtlError::Syntax {
                pos,
                msg: format!("expected a formula, found {}", t.describe()),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_formulas() {
        let f = parse("F a | G b", &["a", "b"]).unwrap();
        assert_eq!(
            f,
            Formula::or([
                Formula::ev(Formula::atom("a")),
                Formula::al(Formula::atom("b"))
            ])
        );
        // negation is pushed inward: !(F a) -> G !a
        let g = parse("!(F a)", &["a"]).unwrap();
        assert_eq!(g, Formula::al(Formula::neg_atom("a")));
        let h = parse("G F a & G F !a", &["a"]).unwrap();
        assert_eq!(
            h,
            Formula::and([
                Formula::al(Formula::ev(Formula::atom("a"))),
                Formula::al(Formula::ev(Formula::neg_atom("a")))
            ])
        );
    }

    #[test]
    fn error_positions() {
        match parse("F a |", &["a"]) {
            Err(LtlError::Syntax { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("expected syntax error, got {other:?}"),
        }
        match parse("F a & b", &["a"]) {
            Err(LtlError::UnknownAtom { name, pos }) => {
                assert_eq!(name, "b");
                assert_eq!(pos, 6);
            }
            other => panic!("expected unknown atom, got {other:?}"),
        }
        match parse("a U b", &["a", "b"]) {
            Err(LtlError::UnsupportedOperator { op, .. }) => assert_eq!(op, "U"),
            other => panic!("expected unsupported operator, got {other:?}"),
        }
        assert!(matches!(
            parse("X a", &["a"]),
            Err(LtlError::UnsupportedOperator { .. })
        ));
    }

    #[test]
    fn precedence_and_parens() {
        let f = parse("!a & b | c", &["a", "b", "c"]).unwrap();
        // (!a & b) | c
        assert_eq!(
            f,
            Formula::or([
                Formula::and([Formula::neg_atom("a"), Formula::atom("b")]),
                Formula::atom("c")
            ])
        );
        let g = parse("!(a & b)", &["a", "b"]).unwrap();
        assert_eq!(
            g,
            Formula::or([Formula::neg_atom("a"), Formula::neg_atom("b")])
        );
        let h = parse("G(a | b)", &["a", "b"]).unwrap();
        assert_eq!(
            h,
            Formula::al(Formula::or([Formula::atom("a"), Formula::atom("b")]))
        );
    }

    #[test]
    fn display_round_trip() {
        for text in [
            "F a | G b",
            "G F a & G F !a",
            "(F G a | G F b) & (F G c | G F d)",
            "true",
            "!a",
        ] {
            let f = parse_any_atoms(text).unwrap();
            let printed = f.to_string();
            let re = parse_any_atoms(&printed).unwrap();
            assert_eq!(f, re, "round trip of `{text}` via `{printed}`");
        }
    }
}
