//! Concrete syntax.
//!
//! ```text
//! fml   := quant | bin
//! quant := ('A' | 'E') var 'in' 'S' label '.' fml | 'Aall' var '.' fml
//! bin   := '(' fml ')' (op '(' fml ')')? | '!' '(' fml ')' | atom
//! op    := '&' | '|' | '->' | '<->'
//! atom  := var '=' var | var 'in' var | var 'in' 'S' label
//!        | 'I' label label '(' var ')' '=' var
//! ```

use super::Formula;
use crate::error::{Error, Result};
use crate::labels::{Label, LabelScanner};

/// Parses an admissible formula; `Aall` is rejected.
pub fn parse_formula(text: &str) -> Result<Formula> {
    parse_with(text, false)
}

/// Also accepts `Aall v . φ` with `φ` a pure membership formula.
pub fn parse_formula_extended(text: &str) -> Result<Formula> {
    parse_with(text, true)
}

/// One formula per line; `#` starts a comment, blank lines are skipped.
/// Error positions are byte offsets into the whole file.
pub fn parse_formula_file(text: &str, extended: bool) -> Result<Vec<Formula>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let body = line.split('#').next().unwrap_or("");
        if !body.trim().is_empty() {
            let f = parse_with(body, extended).map_err(|e| match e {
                Error::Parse { pos, message } => Error::Parse {
                    pos: pos + offset,
                    message,
                },
                other => other,
            })?;
            out.push(f);
        }
        offset += line.len();
    }
    Ok(out)
}

fn parse_with(text: &str, extended: bool) -> Result<Formula> {
    let mut p = Parser {
        s: LabelScanner {
            src: text.as_bytes(),
            pos: 0,
        },
        extended,
    };
    let f = p.formula()?;
    p.s.skip_ws();
    if p.s.pos != p.s.src.len() {
        return Err(Error::parse(p.s.pos, "unexpected trailing input"));
    }
    Ok(f)
}

struct Parser<'a> {
    s: LabelScanner<'a>,
    extended: bool,
}

impl Parser<'_> {
    fn peek(&mut self) -> Option<u8> {
        self.s.skip_ws();
        self.s.src.get(self.s.pos).copied()
    }

    fn rest(&self) -> &[u8] {
        &self.s.src[self.s.pos..]
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        self.s.skip_ws();
        if self.rest().starts_with(tok.as_bytes()) {
            self.s.pos += tok.len();
            Ok(())
        } else {
            Err(Error::parse(self.s.pos, format!("expected '{tok}'")))
        }
    }

    /// A maximal run of identifier characters, without consuming it.
    fn word(&mut self) -> &str {
        self.s.skip_ws();
        let len = self
            .rest()
            .iter()
            .take_while(|c| c.is_ascii_alphanumeric() || **c == b'_')
            .count();
        std::str::from_utf8(&self.rest()[..len]).expect("ascii")
    }

    fn var(&mut self) -> Result<String> {
        let at = {
            self.s.skip_ws();
            self.s.pos
        };
        let w = self.word().to_string();
        let valid = w.as_bytes().first().is_some_and(u8::is_ascii_lowercase)
            && w.bytes()
                .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == b'_');
        if !valid || w == "in" {
            return Err(Error::parse(at, "expected a variable"));
        }
        self.s.pos += w.len();
        Ok(w)
    }

    fn label(&mut self) -> Result<Label> {
        self.s.label()
    }

    fn formula(&mut self) -> Result<Formula> {
        let at = {
            self.s.skip_ws();
            self.s.pos
        };
        match self.word() {
            "A" | "E" => {
                let universal = self.word() == "A";
                self.s.pos += 1;
                let v = self.var()?;
                if self.peek() == Some(b'.') {
                    return Err(Error::Admissibility(format!(
                        "quantifier over `{v}` at position {at} has no level bound"
                    )));
                }
                self.keyword_in()?;
                self.expect("S")?;
                let a = self.label()?;
                self.expect(".")?;
                let body = Box::new(self.formula()?);
                return Ok(if universal {
                    Formula::ForallIn(v, a, body)
                } else {
                    Formula::ExistsIn(v, a, body)
                });
            }
            "Aall" => {
                if !self.extended {
                    return Err(Error::Admissibility(format!(
                        "unbounded quantifier at position {at}"
                    )));
                }
                self.s.pos += 4;
                let v = self.var()?;
                self.expect(".")?;
                let body = self.formula()?;
                if !body.is_pure_membership() {
                    return Err(Error::Admissibility(format!(
                        "the body of the unbounded quantifier at position {at} mentions levels"
                    )));
                }
                return Ok(Formula::UnboundedForall(v, Box::new(body)));
            }
            _ => {}
        }
        match self.peek() {
            Some(b'(') => {
                let lhs = self.parenthesized()?;
                self.s.skip_ws();
                let op = [("<->", 0), ("->", 1), ("&", 2), ("|", 3)]
                    .into_iter()
                    .find(|(tok, _)| self.rest().starts_with(tok.as_bytes()));
                let Some((tok, op)) = op else {
                    return Ok(lhs);
                };
                self.s.pos += tok.len();
                let rhs = self.parenthesized()?;
                Ok(match op {
                    0 => Formula::iff(lhs, rhs),
                    1 => Formula::implies(lhs, rhs),
                    2 => Formula::and(lhs, rhs),
                    _ => Formula::or(lhs, rhs),
                })
            }
            Some(b'!') => {
                self.s.pos += 1;
                Ok(Formula::negate(self.parenthesized()?))
            }
            Some(b'I') => {
                self.s.pos += 1;
                let from = self.label()?;
                let to = self.label()?;
                if from.len() != to.len() {
                    return Err(Error::Admissibility(format!(
                        "embedding I{from}{to} at position {at} relates labels of different sizes"
                    )));
                }
                self.expect("(")?;
                let arg = self.var()?;
                self.expect(")")?;
                self.expect("=")?;
                let value = self.var()?;
                Ok(Formula::Emb {
                    from,
                    to,
                    arg,
                    value,
                })
            }
            Some(c) if c.is_ascii_lowercase() => {
                let u = self.var()?;
                if self.peek() == Some(b'=') {
                    self.s.pos += 1;
                    return Ok(Formula::Eq(u, self.var()?));
                }
                self.keyword_in()?;
                if self.peek() == Some(b'S') {
                    self.s.pos += 1;
                    return Ok(Formula::InLevel(u, self.label()?));
                }
                Ok(Formula::Mem(u, self.var()?))
            }
            Some(_) => Err(Error::parse(self.s.pos, "expected a formula")),
            None => Err(Error::parse(self.s.pos, "unexpected end of input")),
        }
    }

    fn keyword_in(&mut self) -> Result<()> {
        let at = self.s.pos;
        if self.word() == "in" {
            self.s.pos += 2;
            Ok(())
        } else {
            Err(Error::parse(at, "expected 'in' or '='"))
        }
    }

    fn parenthesized(&mut self) -> Result<Formula> {
        self.expect("(")?;
        let f = self.formula()?;
        self.expect(")")?;
        Ok(f)
    }
}
