//! Poset files and name literals.
//!
//! ```text
//! elem p q r
//! le p q
//! le q r        # closed reflexively and transitively
//! bottom p      # optional when there is a least element
//! ```
//!
//! Names are written `{(name, cond), ...}` with `{}` for the empty name.

use thiserror::Error;

use super::{PName, Poset};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct PosetParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, PosetParseError> {
    Err(PosetParseError {
        line,
        message: message.into(),
    })
}

pub fn parse_poset(text: &str) -> Result<Poset, PosetParseError> {
    let mut labels: Vec<String> = Vec::new();
    let mut edges: Vec<(usize, String, String)> = Vec::new();
    let mut bottom: Option<(usize, String)> = None;
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let code = raw.split('#').next().unwrap_or("").trim();
        let words: Vec<&str> = code.split_whitespace().collect();
        match words.as_slice() {
            [] => {}
            ["elem", rest @ ..] => {
                for w in rest {
                    if labels.iter().any(|l| l == w) {
                        return err(no, format!("element {w} listed twice"));
                    }
                    labels.push(w.to_string());
                }
            }
            ["le", a, b] => edges.push((no, a.to_string(), b.to_string())),
            ["bottom", b] => {
                if bottom.is_some() {
                    return err(no, "bottom given twice");
                }
                bottom = Some((no, b.to_string()));
            }
            _ => return err(no, format!("cannot read {code:?}")),
        }
    }
    let n = labels.len();
    if n == 0 {
        return err(1, "no elements");
    }
    let idx = |no: usize, l: &str| {
        labels
            .iter()
            .position(|x| x == l)
            .map_or_else(|| err(no, format!("unknown element {l}")), Ok)
    };
    let mut le = vec![vec![false; n]; n];
    for (i, row) in le.iter_mut().enumerate() {
        row[i] = true;
    }
    for (no, a, b) in &edges {
        let (a, b) = (idx(*no, a)?, idx(*no, b)?);
        le[a][b] = true;
    }
    for m in 0..n {
        for a in 0..n {
            if le[a][m] {
                for b in 0..n {
                    if le[m][b] {
                        le[a][b] = true;
                    }
                }
            }
        }
    }
    let (line, b) = match bottom {
        Some((no, b)) => (no, idx(no, &b)?),
        None => match (0..n).find(|&b| (0..n).all(|p| le[b][p])) {
            Some(b) => (1, b),
            None => return err(1, "no least element"),
        },
    };
    Poset::new(labels, le, b).map_err(|e| PosetParseError {
        line,
        message: e.to_string(),
    })
}

pub fn write_poset(p: &Poset) -> String {
    let mut out = format!("elem {}\n", p.labels().join(" "));
    for a in 0..p.len() {
        for b in 0..p.len() {
            if a != b && p.le(a, b) {
                out.push_str(&format!("le {} {}\n", p.label(a), p.label(b)));
            }
        }
    }
    out.push_str(&format!("bottom {}\n", p.label(p.bottom())));
    out
}

struct Cursor<'a> {
    s: &'a [u8],
    i: usize,
}

impl Cursor<'_> {
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.ws();
        if self.s.get(self.i) == Some(&c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), PosetParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            err(1, format!("expected `{}` at offset {}", c as char, self.i))
        }
    }

    fn name(&mut self, p: &Poset) -> Result<PName, PosetParseError> {
        self.expect(b'{')?;
        let mut pairs = Vec::new();
        if !self.eat(b'}') {
            loop {
                self.expect(b'(')?;
                let s = self.name(p)?;
                self.expect(b',')?;
                self.ws();
                let start = self.i;
                while self.i < self.s.len()
                    && !matches!(self.s[self.i], b')' | b',' | b'{' | b'}' | b'(')
                    && !self.s[self.i].is_ascii_whitespace()
                {
                    self.i += 1;
                }
                let label = std::str::from_utf8(&self.s[start..self.i]).unwrap_or("");
                let Some(q) = p.index_of(label) else {
                    return err(1, format!("unknown condition {label:?} at offset {start}"));
                };
                self.expect(b')')?;
                pairs.push((s, q));
                if self.eat(b'}') {
                    break;
                }
                self.expect(b',')?;
            }
        }
        Ok(PName::from_pairs(pairs))
    }
}

pub fn parse_name(text: &str, p: &Poset) -> Result<PName, PosetParseError> {
    let mut c = Cursor {
        s: text.as_bytes(),
        i: 0,
    };
    let n = c.name(p)?;
    c.ws();
    if c.i != text.len() {
        return err(1, format!("trailing input at offset {}", c.i));
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_file() {
        let p = parse_poset("elem z a b top\nle z a\nle z b\nle a top\nle b top\n").unwrap();
        assert_eq!(p.label(p.bottom()), "z");
        assert!(p.le(0, 3));
        assert_eq!(parse_poset(&write_poset(&p)).unwrap(), p);
        assert_eq!(parse_poset("elem a b\nle a b\nle b a").unwrap_err().line, 1);
        assert_eq!(parse_poset("elem a\nle a c").unwrap_err().line, 2);
        assert!(parse_poset("elem a b").is_err());
    }

    #[test]
    fn name_literals() {
        let p = parse_poset("elem z a\nle z a").unwrap();
        let n = parse_name("{({}, z), ({({}, a)}, a), ({}, z)}", &p).unwrap();
        assert_eq!(n.len(), 2);
        assert_eq!(n.rank(), 2);
        assert_eq!(parse_name(&n.display(&p).to_string(), &p).unwrap(), n);
        assert!(parse_name("{({}, q)}", &p).is_err());
        assert!(parse_name("{} x", &p).is_err());
    }
}
