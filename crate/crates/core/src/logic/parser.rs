use super::Formula;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Zero,
    One,
    Plus,
    Star,
    Arrow,
    Tilde,
    LParen,
    RParen,
    Comma,
    Min,
    Max,
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        i += 1;
        let tok = match c {
            c if c.is_whitespace() => continue,
            '+' | '⊕' => Tok::Plus,
            '*' | '⊗' => Tok::Star,
            '~' | '¬' => Tok::Tilde,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '⇒' => Tok::Arrow,
            '-' if chars.get(i).map(|p| p.1) == Some('>') => {
                i += 1;
                Tok::Arrow
            }
            '0' | '1' if !chars.get(i).is_some_and(|p| p.1.is_ascii_digit() || p.1 == '.') => {
                if c == '0' {
                    Tok::Zero
                } else {
                    Tok::One
                }
            }
            c if is_ident_start(c) => {
                let mut name = String::from(c);
                while let Some(&(_, d)) = chars.get(i) {
                    if !is_ident_char(d) {
                        break;
                    }
                    name.push(d);
                    i += 1;
                }
                let next = chars[i..].iter().find(|p| !p.1.is_whitespace()).map(|p| p.1);
                match (name.as_str(), next) {
                    ("min", Some('(')) => Tok::Min,
                    ("max", Some('(')) => Tok::Max,
                    _ => Tok::Ident(name),
                }
            }
            other => return Err(Error::parse(pos, format!("unexpected character `{other}`"))),
        };
        out.push((pos, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |t| t.0)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(Error::parse(self.pos(), format!("expected {t:?}")))
        }
    }

    fn sum(&mut self) -> Result<Formula> {
        let mut f = self.imp()?;
        while self.eat(&Tok::Plus) {
            f = Formula::strong_sum(f, self.imp()?);
        }
        Ok(f)
    }

    fn imp(&mut self) -> Result<Formula> {
        let f = self.prod()?;
        if self.eat(&Tok::Arrow) {
            return Ok(Formula::implies(f, self.imp()?));
        }
        Ok(f)
    }

    fn prod(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while self.eat(&Tok::Star) {
            f = Formula::fusion(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula> {
        let pos = self.pos();
        let tok = self.peek().cloned().ok_or_else(|| Error::parse(pos, "unexpected end of input"))?;
        self.i += 1;
        match tok {
            Tok::Tilde => Ok(Formula::neg(self.unary()?)),
            Tok::Zero => Ok(Formula::Zero),
            Tok::One => Ok(Formula::One),
            Tok::Ident(v) => Ok(Formula::Var(v)),
            Tok::LParen => {
                let f = self.sum()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Min | Tok::Max => {
                self.expect(Tok::LParen)?;
                let a = self.sum()?;
                self.expect(Tok::Comma)?;
                let b = self.sum()?;
                self.expect(Tok::RParen)?;
                Ok(if tok == Tok::Min { Formula::meet(a, b) } else { Formula::join(a, b) })
            }
            other => Err(Error::parse(pos, format!("unexpected token {other:?}"))),
        }
    }
}

/// Parse the ASCII formula syntax: `+` strong sum, `*` fusion, `->`
/// implication (right associative), `~` negation, `min(,)`, `max(,)`,
/// constants `0` and `1`. The Unicode symbols `⊕ ⊗ ⇒ ¬` are also accepted.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = Parser { toks: lex(text)?, i: 0, end: text.len() };
    let f = p.sum()?;
    if p.i != p.toks.len() {
        return Err(Error::parse(p.pos(), "trailing input"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Formula::*;

    fn v(s: &str) -> Box<Formula> {
        Box::new(Var(s.into()))
    }

    #[test]
    fn parses_examples() {
        assert_eq!(parse_formula("x * y").unwrap(), Fusion(v("x"), v("y")));
        assert_eq!(parse_formula("~ ~ x").unwrap(), Neg(Box::new(Neg(v("x")))));
        let phi = parse_formula("(x * y -> z) + (z -> w)").unwrap();
        let expect = StrongSum(
            Box::new(Implies(Box::new(Fusion(v("x"), v("y"))), v("z"))),
            Box::new(Implies(v("z"), v("w"))),
        );
        assert_eq!(phi, expect);
        assert_eq!(parse_formula("a -> b -> c").unwrap(), Implies(v("a"), Box::new(Implies(v("b"), v("c")))));
        assert_eq!(parse_formula("A_1' ⊗ ¬B").unwrap(), Fusion(v("A_1'"), Box::new(Neg(v("B")))));
    }

    #[test]
    fn reports_positions() {
        assert_eq!(parse_formula("x * ").unwrap_err(), Error::parse(4, "unexpected end of input"));
        match parse_formula("x $ y") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("{other:?}"),
        }
        assert!(parse_formula("(x + y").is_err());
        assert!(parse_formula("x y").is_err());
        assert!(parse_formula("2").is_err());
    }

    #[test]
    fn min_is_a_variable_without_call() {
        assert_eq!(parse_formula("min + max").unwrap(), StrongSum(v("min"), v("max")));
    }
}
