//! Network files.
//!
//! ```text
//! base b = true
//! name lambda : not T(lambda)
//! name s : T(lambda) and b
//! ```
//!
//! Bodies use `not`, `and`, `or`, `->`, `<->`, `true`, `false`, `T(name)`
//! and bare base atoms. Sentences may be referenced before they are declared.

use thiserror::Error;

use super::{Body, SentenceNetwork};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct NetworkParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, NetworkParseError> {
    Err(NetworkParseError {
        line,
        message: message.into(),
    })
}

fn ident(line: usize, s: &str) -> Result<String, NetworkParseError> {
    let s = s.trim();
    if s.is_empty()
        || !s
            .chars()
            .all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
    {
        return err(line, format!("bad identifier {s:?}"));
    }
    Ok(s.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Arrow,
    DArrow,
}

fn lex(s: &str, line: usize) -> Result<Vec<Tok>, NetworkParseError> {
    let mut out = Vec::new();
    let mut rest = s;
    loop {
        rest = rest.trim_start();
        let Some(c) = rest.chars().next() else {
            return Ok(out);
        };
        let (tok, len) = if rest.starts_with("<->") {
            (Tok::DArrow, 3)
        } else if rest.starts_with("->") {
            (Tok::Arrow, 2)
        } else if c == '(' {
            (Tok::LParen, 1)
        } else if c == ')' {
            (Tok::RParen, 1)
        } else if c.is_alphanumeric() || c == '_' {
            let len = rest
                .find(|c: char| !(c.is_alphanumeric() || c == '_' || c == '\''))
                .unwrap_or(rest.len());
            (Tok::Ident(rest[..len].to_string()), len)
        } else {
            return err(line, format!("unexpected character {c:?}"));
        };
        out.push(tok);
        rest = &rest[len..];
    }
}

struct BodyParser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    line: usize,
    names: &'a [String],
    base: &'a [String],
}

impl BodyParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn iff(&mut self) -> Result<Body, NetworkParseError> {
        let lhs = self.implies()?;
        if self.peek() == Some(&Tok::DArrow) {
            self.pos += 1;
            return Ok(Body::Iff(Box::new(lhs), Box::new(self.iff()?)));
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Body, NetworkParseError> {
        let lhs = self.or()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            return Ok(Body::Implies(Box::new(lhs), Box::new(self.implies()?)));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Body, NetworkParseError> {
        let mut lhs = self.and()?;
        while self.is_kw("or") {
            self.pos += 1;
            lhs = Body::Or(Box::new(lhs), Box::new(self.and()?));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Body, NetworkParseError> {
        let mut lhs = self.unary()?;
        while self.is_kw("and") {
            self.pos += 1;
            lhs = Body::And(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), NetworkParseError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            err(self.line, format!("expected {what}"))
        }
    }

    fn unary(&mut self) -> Result<Body, NetworkParseError> {
        let tok = self.peek().cloned();
        self.pos += 1;
        match tok {
            Some(Tok::LParen) => {
                let b = self.iff()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(b)
            }
            Some(Tok::Ident(s)) => match s.as_str() {
                "not" => Ok(Body::Not(Box::new(self.unary()?))),
                "true" => Ok(Body::Const(true)),
                "false" => Ok(Body::Const(false)),
                "T" if self.peek() == Some(&Tok::LParen) => {
                    self.pos += 1;
                    let Some(Tok::Ident(n)) = self.peek().cloned() else {
                        return err(self.line, "expected a sentence name after `T(`");
                    };
                    self.pos += 1;
                    self.expect(Tok::RParen, "`)`")?;
                    match self.names.iter().position(|x| *x == n) {
                        Some(i) => Ok(Body::T(i)),
                        None => err(self.line, format!("undeclared sentence {n}")),
                    }
                }
                _ => match self.base.iter().position(|x| *x == s) {
                    Some(i) => Ok(Body::Base(i)),
                    None if self.names.contains(&s) => err(
                        self.line,
                        format!("{s} is a sentence; write T({s}) to refer to its truth"),
                    ),
                    None => err(self.line, format!("undeclared base atom {s}")),
                },
            },
            Some(t) => err(self.line, format!("unexpected {t:?}")),
            None => err(self.line, "unexpected end of body"),
        }
    }
}

pub fn parse_network(text: &str) -> Result<SentenceNetwork, NetworkParseError> {
    let mut names = Vec::new();
    let mut raw_bodies = Vec::new();
    let mut base_names = Vec::new();
    let mut base = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let code = raw.split('#').next().unwrap_or("").trim();
        if code.is_empty() {
            continue;
        }
        let (head, rest) = code.split_once(char::is_whitespace).unwrap_or((code, ""));
        match head {
            "name" => {
                let Some((n, body)) = rest.split_once(':') else {
                    return err(no, "expected `name <id> : <body>`");
                };
                names.push(ident(no, n)?);
                raw_bodies.push((no, body.trim().to_string()));
            }
            "base" => {
                let Some((b, v)) = rest.split_once('=') else {
                    return err(no, "expected `base <id> = true|false`");
                };
                let v = match v.trim() {
                    "true" => true,
                    "false" => false,
                    other => return err(no, format!("expected true or false, found {other:?}")),
                };
                base_names.push(ident(no, b)?);
                base.push(v);
            }
            _ => return err(no, format!("cannot read {code:?}")),
        }
    }
    let mut bodies = Vec::new();
    for (no, src) in &raw_bodies {
        let mut p = BodyParser {
            toks: lex(src, *no)?,
            pos: 0,
            line: *no,
            names: &names,
            base: &base_names,
        };
        let b = p.iff()?;
        if p.pos != p.toks.len() {
            return err(*no, "trailing input in body");
        }
        bodies.push(b);
    }
    let first = raw_bodies.first().map_or(1, |b| b.0);
    SentenceNetwork::new(names, bodies, base_names, base).map_err(|e| NetworkParseError {
        line: first,
        message: e.to_string(),
    })
}

fn prec(b: &Body) -> u8 {
    match b {
        Body::Iff(..) => 1,
        Body::Implies(..) => 2,
        Body::Or(..) => 3,
        Body::And(..) => 4,
        Body::Not(_) => 5,
        _ => 6,
    }
}

pub(crate) fn show_body(b: &Body, names: &[String], base: &[String]) -> String {
    let wrap = |c: &Body, min: u8| {
        let s = show_body(c, names, base);
        if prec(c) < min {
            format!("({s})")
        } else {
            s
        }
    };
    match b {
        Body::Const(v) => v.to_string(),
        Body::T(i) => format!("T({})", names[*i]),
        Body::Base(i) => base[*i].clone(),
        Body::Not(a) => format!("not {}", wrap(a, 5)),
        Body::And(a, c) => format!("{} and {}", wrap(a, 4), wrap(c, 5)),
        Body::Or(a, c) => format!("{} or {}", wrap(a, 3), wrap(c, 4)),
        Body::Implies(a, c) => format!("{} -> {}", wrap(a, 3), wrap(c, 2)),
        Body::Iff(a, c) => format!("{} <-> {}", wrap(a, 2), wrap(c, 1)),
    }
}

pub fn write_network(net: &SentenceNetwork) -> String {
    let mut out = String::new();
    for (b, v) in net.base_names.iter().zip(&net.base) {
        out.push_str(&format!("base {b} = {v}\n"));
    }
    for (n, b) in net.names.iter().zip(&net.bodies) {
        out.push_str(&format!(
            "name {n} : {}\n",
            show_body(b, &net.names, &net.base_names)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_the_documented_example() {
        let net =
            parse_network("base b = true\nname lambda : not T(lambda)\nname s : T(lambda) and b\n")
                .unwrap();
        assert_eq!(net.names(), ["lambda", "s"]);
        assert_eq!(
            net.bodies()[1],
            Body::And(Box::new(Body::T(0)), Box::new(Body::Base(0)))
        );
        assert_eq!(parse_network(&write_network(&net)).unwrap(), net);
    }

    #[test]
    fn forward_references_and_precedence() {
        let net = parse_network(
            "name a : T(b) -> T(a) -> false or not T(b) and true\nname b : (T(a) <-> T(b))",
        )
        .unwrap();
        let text = write_network(&net);
        assert_eq!(
            text,
            "name a : T(b) -> T(a) -> false or not T(b) and true\nname b : T(a) <-> T(b)\n"
        );
        let net2 = parse_network("name a : (T(a) -> T(a)) -> T(a)").unwrap();
        assert!(write_network(&net2).contains("(T(a) -> T(a)) -> T(a)"));
        assert_eq!(parse_network(&write_network(&net2)).unwrap(), net2);
    }

    #[test]
    fn errors_carry_lines() {
        assert_eq!(
            parse_network("name a : T(a)\nname b : T(c)")
                .unwrap_err()
                .line,
            2
        );
        assert_eq!(parse_network("name a : a").unwrap_err().line, 1);
        assert_eq!(parse_network("\nbase b = maybe").unwrap_err().line, 2);
        assert!(parse_network("name a : T(a) and").is_err());
        assert!(parse_network("name a : T(a)\nname a : T(a)").is_err());
        assert!(parse_network("name T : true").is_err());
    }
}
