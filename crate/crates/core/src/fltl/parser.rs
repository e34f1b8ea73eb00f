//! Recursive-descent parser.
//!
//! Precedence from loosest to tightest: `U` (left associative), `|`, `&`,
//! then the prefix operators `!`, `G`, `F`.

use super::{Formula, Slot};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Token<'a> {
    LParen,
    RParen,
    Comma,
    Not,
    And,
    Or,
    Globally,
    Finally,
    Until,
    Ident(&'a str),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token<'_>)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Token::LParen,
            b')' => Token::RParen,
            b',' => Token::Comma,
            b'!' => Token::Not,
            b'&' => Token::And,
            b'|' => Token::Or,
            b'G' => Token::Globally,
            b'F' => Token::Finally,
            b'U' => Token::Until,
            b'a'..=b'z' | b'_' => {
                while i < bytes.len() && matches!(bytes[i], b'a'..=b'z' | b'_' | b'0'..=b'9') {
                    i += 1;
                }
                out.push((start, Token::Ident(&text[start..i])));
                continue;
            }
            _ => {
                return Err(Error::Syntax {
                    offset: i,
                    message: format!("unexpected character {:?}", text[i..].chars().next().unwrap()),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token<'a>)>,
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token<'a>> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Token<'a>> {
        self.tokens.get(self.pos + k).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn expect(&mut self, want: Token<'a>, what: &str) -> Result<()> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn until(&mut self) -> Result<Formula> {
        let mut lhs = self.or()?;
        while self.peek() == Some(&Token::Until) {
            self.pos += 1;
            let rhs = self.or()?;
            lhs = Formula::until(lhs, rhs);
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Token::Or) {
            self.pos += 1;
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Token::And) {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Token::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Token::Globally) => {
                self.pos += 1;
                Ok(Formula::globally(self.unary()?))
            }
            Some(Token::Finally) => {
                self.pos += 1;
                Ok(Formula::finally(self.unary()?))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula> {
        if self.peek() != Some(&Token::LParen) {
            return self.error("expected `(`, `!`, `G` or `F`");
        }
        if matches!(self.peek_at(1), Some(Token::Ident(_))) {
            self.pos += 1;
            let a = self.slot()?;
            self.expect(Token::Comma, "`,`")?;
            let b = self.slot()?;
            self.expect(Token::RParen, "`)`")?;
            return Ok(Formula::atom(a, b));
        }
        self.pos += 1;
        let inner = self.until()?;
        self.expect(Token::RParen, "`)`")?;
        Ok(inner)
    }

    fn slot(&mut self) -> Result<Slot> {
        match self.peek() {
            Some(Token::Ident("_")) => {
                self.pos += 1;
                Ok(Slot::Any)
            }
            Some(Token::Ident(name)) => {
                let p = name.parse()?;
                self.pos += 1;
                Ok(Slot::Prop(p))
            }
            _ => self.error("expected a proposition or `_`"),
        }
    }
}

pub fn parse(text: &str) -> Result<Formula> {
    let mut p = Parser {
        tokens: tokenize(text)?,
        pos: 0,
        end: text.len(),
    };
    let f = p.until()?;
    if p.pos != p.tokens.len() {
        return p.error("trailing input");
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::AtomicProposition::*;

    fn atom(a: Slot, b: Slot) -> Formula {
        Formula::atom(a, b)
    }

    #[test]
    fn sidewalk_rule() {
        let f = parse("G !(_, sw)").unwrap();
        let want = Formula::globally(Formula::not(atom(Slot::Any, Slot::Prop(Sw))));
        assert_eq!(f, want);
    }

    #[test]
    fn bare_atom() {
        assert_eq!(
            parse("(rl, ll)").unwrap(),
            atom(Slot::Prop(Rl), Slot::Prop(Ll))
        );
    }

    #[test]
    fn solid_rule_literal_text() {
        let f = parse("G (!((rl,solid) & (rl,ll)) | ((ll,solid) & (ll,rl)))").unwrap();
        let p = |a, b| atom(Slot::Prop(a), Slot::Prop(b));
        let want = Formula::globally(Formula::or(
            Formula::not(Formula::and(p(Rl, Solid), p(Rl, Ll))),
            Formula::and(p(Ll, Solid), p(Ll, Rl)),
        ));
        assert_eq!(f, want);
    }

    #[test]
    fn precedence() {
        let p = |a, b| atom(Slot::Prop(a), Slot::Prop(b));
        let f = parse("(sw,sw) | (rl,rl) & (ll,ll) U (dir,dir)").unwrap();
        let want = Formula::until(
            Formula::or(p(Sw, Sw), Formula::and(p(Rl, Rl), p(Ll, Ll))),
            p(Dir, Dir),
        );
        assert_eq!(f, want);
        let g = parse("(sw,sw) U (rl,rl) U (ll,ll)").unwrap();
        let want = Formula::until(Formula::until(p(Sw, Sw), p(Rl, Rl)), p(Ll, Ll));
        assert_eq!(g, want);
        let h = parse("G !(sw,sw) & (rl,rl)").unwrap();
        let want = Formula::and(Formula::globally(Formula::not(p(Sw, Sw))), p(Rl, Rl));
        assert_eq!(h, want);
    }

    #[test]
    fn errors_carry_offsets() {
        match parse("G (rl sw)") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 6),
            other => panic!("{other:?}"),
        }
        match parse("G (_, sw) )") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 10),
            other => panic!("{other:?}"),
        }
        match parse("(rl, x#)") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 6),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("(rl, road)"), Err(Error::UnknownProposition(_))));
        assert!(matches!(parse(""), Err(Error::Syntax { offset: 0, .. })));
    }
}
