//! Surface syntax for formulas.
//!
//! ```text
//! formula := iff
//! iff     := imp ("<->" iff)?
//! imp     := or ("->" imp)?
//! or      := and ("or" and)*
//! and     := unary ("and" unary)*
//! unary   := "not" unary | "dia" unary | "box" unary
//!          | ("exists" | "forall") var (":" sort)? "."? formula
//!          | atom
//! atom    := ident "(" vars ")" | "(" vars ")" "<<-" var | var "<<-" var
//!          | var "=" var | var "!=" var | "(" formula ")"
//! ```
//!
//! `not`, `dia` and `box` apply to the smallest following unit; quantifiers
//! extend as far right as possible. Sorts of unannotated variables are
//! inferred from the relation positions they occupy, defaulting to `Stat`.

use std::collections::BTreeMap;

use thiserror::Error;

use super::formula::{Formula, SortError, Var};
use super::signature::{dyn_arity, dyn_sort, manifest_rel, Signature, STAT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("sort error at offset {offset}: {source}")]
    Sort { offset: usize, source: SortError },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::Sort { offset, .. } => *offset,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Colon,
    Dot,
    Eq,
    Neq,
    Arrow,
    DArrow,
    Manifest,
    Eof,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Colon => "`:`".into(),
        Tok::Dot => "`.`".into(),
        Tok::Eq => "`=`".into(),
        Tok::Neq => "`!=`".into(),
        Tok::Arrow => "`->`".into(),
        Tok::DArrow => "`<->`".into(),
        Tok::Manifest => "`<<-`".into(),
        Tok::Eof => "end of input".into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = text[i..].chars().next().unwrap();
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        let start = i;
        let rest = &text[i..];
        let (tok, len) = if rest.starts_with("<->") {
            (Tok::DArrow, 3)
        } else if rest.starts_with("<<-") {
            (Tok::Manifest, 3)
        } else if rest.starts_with("->") {
            (Tok::Arrow, 2)
        } else if rest.starts_with("!=") {
            (Tok::Neq, 2)
        } else {
            match c {
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                ',' => (Tok::Comma, 1),
                ':' => (Tok::Colon, 1),
                '.' => (Tok::Dot, 1),
                '=' => (Tok::Eq, 1),
                c if c.is_alphanumeric() || c == '_' => {
                    let len = rest
                        .char_indices()
                        .find(|(_, ch)| !(ch.is_alphanumeric() || *ch == '_' || *ch == '\''))
                        .map(|(j, _)| j)
                        .unwrap_or(rest.len());
                    (Tok::Ident(rest[..len].to_string()), len)
                }
                other => {
                    return Err(ParseError::Syntax {
                        offset: start,
                        message: format!("unexpected character {other:?}"),
                    })
                }
            }
        };
        out.push((tok, start));
        i += len;
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

const KEYWORDS: &[&str] = &["not", "and", "or", "exists", "forall", "dia", "box"];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

/// Variable occurrence before sort resolution. `id` identifies the binder
/// (or the free name) the occurrence refers to.
#[derive(Clone, Debug)]
struct RawVar {
    name: String,
    id: usize,
    offset: usize,
}

#[derive(Clone, Debug)]
enum Raw {
    Atom {
        rel: String,
        args: Vec<RawVar>,
        offset: usize,
    },
    Manifest {
        args: Vec<RawVar>,
        dynamic: RawVar,
    },
    Eq(RawVar, RawVar),
    Not(Box<Raw>),
    And(Box<Raw>, Box<Raw>),
    Or(Box<Raw>, Box<Raw>),
    Implies(Box<Raw>, Box<Raw>),
    Iff(Box<Raw>, Box<Raw>),
    Exists(RawVar, Box<Raw>),
    Forall(RawVar, Box<Raw>),
    Dia(Box<Raw>),
    Box(Box<Raw>),
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    sig: &'a Signature,
    /// Scope stack of (name, id).
    scope: Vec<(String, usize)>,
    free_ids: BTreeMap<String, usize>,
    /// Per id: variable name, annotated sort (binders only), first offset.
    ids: Vec<(String, Option<(String, usize)>, usize)>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<usize, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            self.err(format!(
                "expected {}, found {}",
                describe(&tok),
                describe(self.peek())
            ))
        }
    }

    fn keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn var_name(&mut self) -> Result<(String, usize), ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                let off = self.bump().1;
                Ok((s, off))
            }
            other => self.err(format!("expected a variable, found {}", describe(&other))),
        }
    }

    fn occurrence(&mut self, name: String, offset: usize) -> RawVar {
        let id = match self.scope.iter().rev().find(|(n, _)| *n == name) {
            Some((_, id)) => *id,
            None => *self.free_ids.entry(name.clone()).or_insert_with(|| {
                self.ids.push((name.clone(), None, offset));
                self.ids.len() - 1
            }),
        };
        RawVar { name, id, offset }
    }

    fn formula(&mut self) -> Result<Raw, ParseError> {
        self.iff()
    }

    fn iff(&mut self) -> Result<Raw, ParseError> {
        let left = self.imp()?;
        if *self.peek() == Tok::DArrow {
            self.bump();
            let right = self.iff()?;
            return Ok(Raw::Iff(Box::new(left), Box::new(right)));
        }
        Ok(left)
    }

    fn imp(&mut self) -> Result<Raw, ParseError> {
        let left = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let right = self.imp()?;
            return Ok(Raw::Implies(Box::new(left), Box::new(right)));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Raw, ParseError> {
        let mut left = self.and()?;
        while self.keyword("or") {
            self.bump();
            let right = self.and()?;
            left = Raw::Or(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Raw, ParseError> {
        let mut left = self.unary()?;
        while self.keyword("and") {
            self.bump();
            let right = self.unary()?;
            left = Raw::And(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Raw, ParseError> {
        if let Tok::Ident(kw) = self.peek().clone() {
            match kw.as_str() {
                "not" => {
                    self.bump();
                    return Ok(Raw::Not(Box::new(self.unary()?)));
                }
                "dia" => {
                    self.bump();
                    return Ok(Raw::Dia(Box::new(self.unary()?)));
                }
                "box" => {
                    self.bump();
                    return Ok(Raw::Box(Box::new(self.unary()?)));
                }
                "exists" | "forall" => {
                    self.bump();
                    let (name, off) = self.var_name()?;
                    let sort = if *self.peek() == Tok::Colon {
                        self.bump();
                        match self.peek().clone() {
                            Tok::Ident(s) if !is_keyword(&s) => {
                                let soff = self.bump().1;
                                Some((s, soff))
                            }
                            other => {
                                return self
                                    .err(format!("expected a sort, found {}", describe(&other)))
                            }
                        }
                    } else {
                        None
                    };
                    if *self.peek() == Tok::Dot {
                        self.bump();
                    }
                    self.ids.push((name.clone(), sort, off));
                    let id = self.ids.len() - 1;
                    self.scope.push((name.clone(), id));
                    let body = self.formula();
                    self.scope.pop();
                    let v = RawVar {
                        name,
                        id,
                        offset: off,
                    };
                    let body = Box::new(body?);
                    return Ok(if kw == "exists" {
                        Raw::Exists(v, body)
                    } else {
                        Raw::Forall(v, body)
                    });
                }
                "and" | "or" => return self.err(format!("unexpected {}", describe(self.peek()))),
                _ => {}
            }
        }
        self.atom()
    }

    fn var_list(&mut self) -> Result<Vec<RawVar>, ParseError> {
        let mut out = Vec::new();
        if *self.peek() == Tok::RParen {
            return Ok(out);
        }
        loop {
            let (name, off) = self.var_name()?;
            out.push(self.occurrence(name, off));
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RParen => return Ok(out),
                Tok::Eof => {
                    return Err(ParseError::Syntax {
                        offset: self.offset(),
                        message: "unexpected end of input in argument list".into(),
                    })
                }
                other => {
                    let msg = format!("expected `,` or `)`, found {}", describe(other));
                    return self.err(msg);
                }
            }
        }
    }

    /// Try `( vars ) <<- var`; restores the position on failure.
    fn try_manifest(&mut self) -> Option<Raw> {
        let save = (self.pos, self.free_ids.clone(), self.ids.len());
        let attempt = (|| -> Result<Raw, ParseError> {
            self.expect(Tok::LParen)?;
            let args = self.var_list()?;
            self.expect(Tok::RParen)?;
            self.expect(Tok::Manifest)?;
            let (name, off) = self.var_name()?;
            let dynamic = self.occurrence(name, off);
            Ok(Raw::Manifest { args, dynamic })
        })();
        match attempt {
            Ok(r) => Some(r),
            Err(_) => {
                self.pos = save.0;
                self.free_ids = save.1;
                self.ids.truncate(save.2);
                None
            }
        }
    }

    fn atom(&mut self) -> Result<Raw, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                if let Some(m) = self.try_manifest() {
                    return Ok(m);
                }
                let open = self.bump().1;
                let inner = self.formula()?;
                if *self.peek() != Tok::RParen {
                    if *self.peek() == Tok::Eof {
                        return Err(ParseError::Syntax {
                            offset: open,
                            message: "unclosed `(`".into(),
                        });
                    }
                    return self.err(format!("expected `)`, found {}", describe(self.peek())));
                }
                self.bump();
                Ok(inner)
            }
            Tok::Ident(name) if !is_keyword(&name) => {
                let off = self.bump().1;
                match self.peek().clone() {
                    Tok::LParen => {
                        let open = self.bump().1;
                        let args = match self.var_list() {
                            Ok(a) => a,
                            Err(e) if matches!(self.peek(), Tok::Eof) => {
                                let _ = e;
                                return Err(ParseError::Syntax {
                                    offset: open,
                                    message: "unclosed `(`".into(),
                                });
                            }
                            Err(e) => return Err(e),
                        };
                        if *self.peek() != Tok::RParen {
                            return Err(ParseError::Syntax {
                                offset: open,
                                message: "unclosed `(`".into(),
                            });
                        }
                        self.bump();
                        Ok(Raw::Atom {
                            rel: name,
                            args,
                            offset: off,
                        })
                    }
                    Tok::Eq | Tok::Neq => {
                        let neg = self.bump().0 == Tok::Neq;
                        let lhs = self.occurrence(name, off);
                        let (rname, roff) = self.var_name()?;
                        let rhs = self.occurrence(rname, roff);
                        let eq = Raw::Eq(lhs, rhs);
                        Ok(if neg { Raw::Not(Box::new(eq)) } else { eq })
                    }
                    Tok::Manifest => {
                        self.bump();
                        let arg = self.occurrence(name, off);
                        let (dname, doff) = self.var_name()?;
                        let dynamic = self.occurrence(dname, doff);
                        Ok(Raw::Manifest {
                            args: vec![arg],
                            dynamic,
                        })
                    }
                    other => Err(ParseError::Syntax {
                        offset: self.offset(),
                        message: format!(
                            "expected `(`, `=` or `<<-` after `{name}`, found {}",
                            describe(&other)
                        ),
                    }),
                }
            }
            other => self.err(format!("expected a formula, found {}", describe(&other))),
        }
    }
}

/// Union-find over variable identities carrying inferred sorts.
struct Sorts {
    parent: Vec<usize>,
    sort: Vec<Option<(String, String, usize)>>,
}

impl Sorts {
    fn find(&mut self, i: usize) -> usize {
        let p = self.parent[i];
        if p == i {
            return i;
        }
        let r = self.find(p);
        self.parent[i] = r;
        r
    }

    /// Record that `v` has sort `sort` because of `why` (relation or annotation).
    fn constrain(&mut self, v: &RawVar, sort: &str, why: &str) -> Result<(), ParseError> {
        let r = self.find(v.id);
        match &self.sort[r] {
            Some((s, prev, _)) if s != sort => Err(ParseError::Sort {
                offset: v.offset,
                source: SortError::Mismatch {
                    var: v.name.clone(),
                    relation: why.to_string(),
                    expected: sort.to_string(),
                    found: format!("{s} (from {prev})"),
                },
            }),
            Some(_) => Ok(()),
            None => {
                self.sort[r] = Some((sort.to_string(), why.to_string(), v.offset));
                Ok(())
            }
        }
    }

    fn union(&mut self, a: &RawVar, b: &RawVar) -> Result<(), ParseError> {
        let (ra, rb) = (self.find(a.id), self.find(b.id));
        if ra == rb {
            return Ok(());
        }
        let sb = self.sort[rb].clone();
        self.parent[rb] = ra;
        if let Some((s, why, _)) = sb {
            self.constrain(a, &s, &why).map_err(|e| match e {
                ParseError::Sort { source, .. } => ParseError::Sort {
                    offset: b.offset,
                    source,
                },
                other => other,
            })?;
        }
        Ok(())
    }
}

fn collect(raw: &Raw, sig: &Signature, sorts: &mut Sorts) -> Result<(), ParseError> {
    match raw {
        Raw::Atom { rel, args, offset } => {
            let decl = sig
                .relation(rel)
                .filter(|d| !d.is_manifestation())
                .ok_or_else(|| ParseError::Sort {
                    offset: *offset,
                    source: SortError::UnknownRelation(rel.clone()),
                })?;
            if decl.arity() != args.len() {
                return Err(ParseError::Sort {
                    offset: *offset,
                    source: SortError::Arity {
                        relation: rel.clone(),
                        expected: decl.arity(),
                        found: args.len(),
                    },
                });
            }
            for (v, s) in args.iter().zip(&decl.sorts) {
                sorts.constrain(v, s, rel)?;
            }
            Ok(())
        }
        Raw::Manifest { args, dynamic } => {
            let n = args.len();
            let rel = manifest_rel(n);
            if !sig.has_sort(&dyn_sort(n)) {
                return Err(ParseError::Sort {
                    offset: dynamic.offset,
                    source: SortError::UnknownRelation(rel),
                });
            }
            for v in args {
                sorts.constrain(v, STAT, &rel)?;
            }
            sorts.constrain(dynamic, &dyn_sort(n), &rel)
        }
        Raw::Eq(a, b) => sorts.union(a, b),
        Raw::Not(a) | Raw::Dia(a) | Raw::Box(a) => collect(a, sig, sorts),
        Raw::Exists(_, a) | Raw::Forall(_, a) => collect(a, sig, sorts),
        Raw::And(a, b) | Raw::Or(a, b) | Raw::Implies(a, b) | Raw::Iff(a, b) => {
            collect(a, sig, sorts)?;
            collect(b, sig, sorts)
        }
    }
}

fn build(raw: &Raw, resolve: &dyn Fn(&RawVar) -> Var) -> Formula {
    let b = |r: &Raw| build(r, resolve);
    match raw {
        Raw::Atom { rel, args, .. } => Formula::Atom {
            rel: rel.clone(),
            args: args.iter().map(resolve).collect(),
        },
        Raw::Manifest { args, dynamic } => Formula::Manifest {
            args: args.iter().map(resolve).collect(),
            dynamic: resolve(dynamic),
        },
        Raw::Eq(x, y) => Formula::Eq(resolve(x), resolve(y)),
        Raw::Not(a) => Formula::not(b(a)),
        Raw::Dia(a) => Formula::dia(b(a)),
        Raw::Box(a) => Formula::boxed(b(a)),
        Raw::And(x, y) => Formula::and(b(x), b(y)),
        Raw::Or(x, y) => Formula::or(b(x), b(y)),
        Raw::Implies(x, y) => Formula::implies(b(x), b(y)),
        Raw::Iff(x, y) => Formula::iff(b(x), b(y)),
        Raw::Exists(v, a) => Formula::exists(resolve(v), b(a)),
        Raw::Forall(v, a) => Formula::forall(resolve(v), b(a)),
    }
}

/// Parse `text` against `sig`, inferring the sorts of unannotated variables.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        sig,
        scope: Vec::new(),
        free_ids: BTreeMap::new(),
        ids: Vec::new(),
    };
    let raw = p.formula()?;
    if *p.peek() != Tok::Eof {
        return p.err(format!("unexpected {}", describe(p.peek())));
    }
    let _ = p.sig;
    let n = p.ids.len();
    let mut sorts = Sorts {
        parent: (0..n).collect(),
        sort: vec![None; n],
    };
    for (id, (name, ann, off)) in p.ids.iter().enumerate() {
        if let Some((s, soff)) = ann {
            if !sig.has_sort(s) && dyn_arity(s).is_none() {
                return Err(ParseError::Sort {
                    offset: *soff,
                    source: SortError::UnknownSort {
                        var: name.clone(),
                        sort: s.clone(),
                    },
                });
            }
            let v = RawVar {
                name: name.clone(),
                id,
                offset: *off,
            };
            sorts.constrain(&v, s, "annotation")?;
        }
    }
    collect(&raw, sig, &mut sorts)?;
    let mut resolved = Vec::with_capacity(n);
    for id in 0..n {
        let r = sorts.find(id);
        let s = sorts.sort[r]
            .as_ref()
            .map(|(s, _, _)| s.clone())
            .unwrap_or_else(|| STAT.into());
        if !sig.has_sort(&s) {
            let (name, _, off) = &p.ids[id];
            return Err(ParseError::Sort {
                offset: *off,
                source: SortError::UnknownSort {
                    var: name.clone(),
                    sort: s,
                },
            });
        }
        resolved.push(s);
    }
    let formula = build(&raw, &|v: &RawVar| {
        Var::new(v.name.clone(), resolved[v.id].clone())
    });
    formula
        .check_sorts(sig)
        .map_err(|source| ParseError::Sort { offset: 0, source })?;
    Ok(formula)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::RelKind;

    fn sig() -> Signature {
        Signature::new()
            .with_sort("Dyn1")
            .with_relation("R", &["Stat"], RelKind::Static)
            .with_relation("S", &["Stat", "Stat"], RelKind::Static)
            .with_relation("T", &["Stat"], RelKind::Dynamic)
    }

    #[test]
    fn quantifier_with_annotation() {
        let f = parse_formula("dia exists x:Stat. R(x)", &sig()).unwrap();
        let x = Var::stat("x");
        assert_eq!(
            f,
            Formula::dia(Formula::exists(x.clone(), Formula::atom("R", &[x])))
        );
    }

    #[test]
    fn boxed_universal_implication() {
        let f = parse_formula("box forall x. forall y. (S(x,y) -> not x = y)", &sig()).unwrap();
        let (x, y) = (Var::stat("x"), Var::stat("y"));
        let expected = Formula::boxed(Formula::forall(
            x.clone(),
            Formula::forall(
                y.clone(),
                Formula::implies(
                    Formula::atom("S", &[x.clone(), y.clone()]),
                    Formula::not(Formula::eq(x, y)),
                ),
            ),
        ));
        assert_eq!(f, expected);
    }

    #[test]
    fn unclosed_paren_reports_its_offset() {
        let err = parse_formula("exists x R(", &sig()).unwrap_err();
        assert!(matches!(err, ParseError::Syntax { .. }));
        assert_eq!(err.offset(), 10);
    }

    #[test]
    fn modal_prefix_binds_tightly() {
        let f = parse_formula("box (dia T(lambda) and dia not T(lambda))", &sig()).unwrap();
        let l = Var::stat("lambda");
        let t = Formula::atom("T", &[l]);
        assert_eq!(
            f,
            Formula::boxed(Formula::and(
                Formula::dia(t.clone()),
                Formula::dia(Formula::not(t))
            ))
        );
    }

    #[test]
    fn dynamic_sort_is_inferred() {
        let f = parse_formula("exists x. (x <<- xi and R(x))", &sig()).unwrap();
        assert_eq!(f.free_vars(), vec![Var::new("xi", "Dyn1")]);
        let g = parse_formula("exists x. ((x) <<- xi and R(x))", &sig()).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn sort_conflicts_are_reported() {
        let err = parse_formula("x <<- y and R(y)", &sig()).unwrap_err();
        match err {
            ParseError::Sort {
                source: SortError::Mismatch { var, .. },
                ..
            } => assert_eq!(var, "y"),
            other => panic!("unexpected {other:?}"),
        }
        let err = parse_formula("Q(x)", &sig()).unwrap_err();
        assert!(matches!(
            err,
            ParseError::Sort {
                source: SortError::UnknownRelation(_),
                ..
            }
        ));
    }

    #[test]
    fn precedence_and_associativity() {
        let s = sig();
        let f = parse_formula("R(a) or R(b) and R(c) -> R(d) -> R(e)", &s).unwrap();
        let at = |n: &str| Formula::atom("R", &[Var::stat(n)]);
        let expected = Formula::implies(
            Formula::or(at("a"), Formula::and(at("b"), at("c"))),
            Formula::implies(at("d"), at("e")),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn quantifiers_extend_right() {
        let f = parse_formula("not exists x. R(x) and R(y)", &sig()).unwrap();
        let (x, y) = (Var::stat("x"), Var::stat("y"));
        assert_eq!(
            f,
            Formula::not(Formula::exists(
                x.clone(),
                Formula::and(Formula::atom("R", &[x]), Formula::atom("R", &[y]))
            ))
        );
    }
}
