use super::{Constraint, Item, Mark, MarkKind, SortDecl, SortKind, Specification, ViewDecl};
use crate::error::{Error, Result};
use crate::logic::parse_formula;
use std::collections::HashSet;

/// Parse and validate a specification.
///
/// ```text
/// item   := names ':' '{' values '}' ';'                 enumerated sort
///         | names ':' sort (',' sort)* ';'               product sort
///         | names ':' '{' header [';' item*] '}' ';'     view
///         | sign ':' view ('*' view)* ';'                diagram
///         | [sign ':'] '[' diagram ']' ['_' λ] ';'       commutativity
///         | sign ':' [λ '-'] ('lim' | 'colim') diagram ';'
///         | sign ':' 'is_a' '(' sign ')' ';'
///         | sign ':' 'similarity' ';'
///         | sign '(' vars ')' ':' [target ('=' | '~' λ)] formula ';'
/// header := sorts '->' sorts | sorts
/// ```
pub fn parse_spec(text: &str) -> Result<Specification> {
    let mut p = Parser { src: text, pos: 0, sorts: HashSet::new() };
    let items = p.items(false)?;
    Specification::from_items(items)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    /// Sort names seen so far; `X : Y;` is a sort when `Y` is one.
    sorts: HashSet<String>,
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '\'' | '.' | '/')
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.pos, msg)
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip(&mut self) {
        loop {
            let r = self.rest();
            let t = r.trim_start();
            self.pos += r.len() - t.len();
            if t.starts_with('%') {
                self.pos += t.find('\n').unwrap_or(t.len());
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip();
        self.rest().chars().next()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip();
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{s}`")))
        }
    }

    fn word(&mut self) -> Result<String> {
        self.skip();
        let len: usize = self.rest().chars().take_while(|&c| is_word_char(c)).map(char::len_utf8).sum();
        if len == 0 {
            return Err(self.err("expected a name"));
        }
        let w = self.rest()[..len].to_string();
        self.pos += len;
        Ok(w)
    }

    fn words(&mut self) -> Result<Vec<String>> {
        let mut out = vec![self.word()?];
        while self.eat(",") {
            out.push(self.word()?);
        }
        Ok(out)
    }

    fn lambda(&self, text: &str, at: usize) -> Result<f64> {
        text.parse().map_err(|_| Error::parse(at, format!("bad lambda `{text}`")))
    }

    fn items(&mut self, nested: bool) -> Result<Vec<Item>> {
        let mut out = Vec::new();
        loop {
            match self.peek() {
                None if !nested => return Ok(out),
                None => return Err(self.err("unclosed block")),
                Some('}') if nested => return Ok(out),
                Some(_) => out.push(self.item()?),
            }
        }
    }

    fn commutative(&mut self, sign: Option<String>) -> Result<Item> {
        self.expect("[")?;
        let diagram = self.word()?;
        self.expect("]")?;
        let lambda = if self.rest().starts_with('_') {
            let at = self.pos;
            let w = self.word()?;
            Some(self.lambda(&w[1..], at)?)
        } else {
            None
        };
        self.expect(";")?;
        Ok(Item::Mark(Mark { sign, kind: MarkKind::Commutative { diagram }, lambda }))
    }

    fn item(&mut self) -> Result<Item> {
        if self.peek() == Some('[') {
            return self.commutative(None);
        }
        let start = self.pos;
        let names = self.words()?;
        if names.len() == 1 && self.eat("(") {
            return self.constraint(names[0].clone());
        }
        self.expect(":")?;
        let single = (names.len() == 1).then(|| names[0].clone());
        if self.eat("{") {
            return self.block(names);
        }
        if self.peek() == Some('[') {
            let sign = single.ok_or_else(|| Error::parse(start, "a mark names one sign"))?;
            return self.commutative(Some(sign));
        }
        let at = self.pos;
        let first = self.word()?;
        let sign = || single.clone().ok_or_else(|| Error::parse(start, "expected a single name"));
        let mark = |kind, lambda| Item::Mark(Mark { sign: single.clone(), kind, lambda });
        let item = match first.as_str() {
            "similarity" => mark(MarkKind::Similarity, None),
            "is_a" => {
                sign()?;
                self.expect("(")?;
                let gamma = self.word()?;
                self.expect(")")?;
                mark(MarkKind::IsA { gamma }, None)
            }
            "lim" | "colim" => self.limit(sign()?, &first, None)?,
            _ if self.rest().starts_with("-lim") || self.rest().starts_with("-colim") => {
                let l = self.lambda(&first, at)?;
                self.expect("-")?;
                let which = self.word()?;
                self.limit(sign()?, &which, Some(l))?
            }
            _ => {
                let mut parts = vec![first];
                let mut product = false;
                loop {
                    if self.eat("*") {
                        parts.push(self.word()?);
                    } else if self.eat(",") {
                        product = true;
                        parts.push(self.word()?);
                    } else {
                        break;
                    }
                }
                if product || (parts.len() == 1 && self.sorts.contains(&parts[0])) {
                    self.sorts.extend(names.iter().cloned());
                    Item::Sort(SortDecl { names, kind: SortKind::Product(parts) })
                } else {
                    Item::Glue { sign: sign()?, parts }
                }
            }
        };
        self.expect(";")?;
        Ok(item)
    }

    fn limit(&mut self, sign: String, which: &str, lambda: Option<f64>) -> Result<Item> {
        let diagram = self.word()?;
        let kind = match which {
            "lim" => MarkKind::Lim { diagram },
            "colim" => MarkKind::Colim { diagram },
            other => return Err(self.err(format!("expected lim or colim, found `{other}`"))),
        };
        Ok(Item::Mark(Mark { sign: Some(sign), kind, lambda }))
    }

    /// After `names : {`.
    fn block(&mut self, names: Vec<String>) -> Result<Item> {
        let first = self.words()?;
        let (inputs, outputs, directed) = if self.eat("->") {
            (first, self.words()?, true)
        } else if self.peek() == Some('}') {
            self.expect("}")?;
            self.expect(";")?;
            self.sorts.extend(names.iter().cloned());
            return Ok(Item::Sort(SortDecl { names, kind: SortKind::Values(first) }));
        } else if self.peek() == Some(';') {
            (first, vec![], false)
        } else {
            return Err(self.err("expected `->`, `;` or `}`"));
        };
        let body = if self.eat(";") { Some(self.items(true)?) } else { None };
        self.expect("}")?;
        self.expect(";")?;
        Ok(Item::View(ViewDecl { names, inputs, outputs, directed, body }))
    }

    /// After `sign (`.
    fn constraint(&mut self, sign: String) -> Result<Item> {
        let vars = if self.peek() == Some(')') { vec![] } else { self.words()? };
        self.expect(")")?;
        self.expect(":")?;
        self.skip();
        let at = self.pos;
        let end = self.rest().find(';').ok_or_else(|| self.err("constraint without `;`"))?;
        let text = &self.rest()[..end];
        self.pos += end + 1;
        let (target, lambda, body) = split_constraint(text).map_err(|m| Error::parse(at, m))?;
        let formula = parse_formula(body).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::parse(at + text.len() - body.len() + pos, msg),
            other => other,
        })?;
        Ok(Item::Mark(Mark { sign: Some(sign), kind: MarkKind::Constraint(Constraint { vars, target, formula }), lambda }))
    }
}

/// `target = f`, `target ~λ f`, `~λ f` or just `f`.
///
/// `~0 * x` is a formula, not λ = 0 applied to `* x`: the `~λ` reading is
/// taken only when what follows the number is itself a formula.
fn split_constraint(text: &str) -> std::result::Result<(Option<String>, Option<f64>, &str), String> {
    fn approx(t: &str) -> Option<std::result::Result<(f64, &str), String>> {
        let r = t.strip_prefix('~')?;
        if !r.starts_with(|c: char| c.is_ascii_digit()) {
            return None;
        }
        let len = r.find(|c: char| !(c.is_ascii_digit() || c == '.')).unwrap_or(r.len());
        if parse_formula(&r[len..]).is_err() {
            return None;
        }
        Some(r[..len].parse().map(|l| (l, &r[len..])).map_err(|_| format!("bad lambda `{}`", &r[..len])))
    }
    let t = text.trim();
    if let Some(a) = approx(t) {
        let (l, rest) = a?;
        return Ok((None, Some(l), rest.trim()));
    }
    let len: usize = t.chars().take_while(|&c| is_word_char(c)).map(char::len_utf8).sum();
    if len > 0 {
        let after = t[len..].trim_start();
        if let Some(rest) = after.strip_prefix('=') {
            return Ok((Some(t[..len].to_string()), None, rest.trim()));
        }
        if let Some(a) = approx(after) {
            let (l, rest) = a?;
            return Ok((Some(t[..len].to_string()), Some(l), rest.trim()));
        }
    }
    Ok((None, None, t))
}
