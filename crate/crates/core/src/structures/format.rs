//! Line-oriented text format for finite structures.
//!
//! ```text
//! sort Stat = a b c
//! sort Color = red green
//! rel le(Stat,Stat) = (a,a) (a,b) (b,b)
//! dynrel T(Stat) = a
//! dynsort Dyn1 = d0
//! manifest d0 = a
//! ```
//!
//! `#` starts a comment and `;` separates statements on one line. A relation
//! may be declared without tuples (`rel R(Stat)`) and filled later with
//! `rel R = ...`. Unary tuples may be written without parentheses.

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use super::{show_tuple, Elem, FiniteStructure, StructError};
use crate::logic::{dyn_arity, dyn_sort, manifest_rel, RelKind, Signature, STAT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct StructureParseError {
    pub line: usize,
    pub message: String,
}

fn perr<T>(line: usize, message: impl Into<String>) -> Result<T, StructureParseError> {
    Err(StructureParseError {
        line,
        message: message.into(),
    })
}

/// A statement or brace with its 1-based source line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Line {
    pub no: usize,
    pub text: String,
}

/// Strip comments, split on `;`, and put braces into pieces of their own.
pub(crate) fn split_lines(text: &str) -> Vec<Line> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let code = raw.split('#').next().unwrap_or("");
        let mut cur = String::new();
        let flush = |cur: &mut String, out: &mut Vec<Line>| {
            let t = cur.trim();
            if !t.is_empty() {
                out.push(Line {
                    no,
                    text: t.to_string(),
                });
            }
            cur.clear();
        };
        for c in code.chars() {
            match c {
                ';' => flush(&mut cur, &mut out),
                '{' | '}' => {
                    flush(&mut cur, &mut out);
                    out.push(Line {
                        no,
                        text: c.to_string(),
                    });
                }
                _ => cur.push(c),
            }
        }
        flush(&mut cur, &mut out);
    }
    out
}

#[derive(Clone, Debug)]
pub(crate) enum Stmt {
    Sort {
        name: String,
        elems: Vec<String>,
    },
    Rel {
        name: String,
        sorts: Option<Vec<String>>,
        kind: RelKind,
        tuples: Option<Vec<Vec<String>>>,
    },
    Manifest {
        dynamic: String,
        tuple: Vec<String>,
    },
}

fn ident_ok(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_alphanumeric() || c == '_' || c == '\'' || c == '/' || c == '-')
}

/// Parse `(a,b) (c,d)` or bare unary `a b`.
pub(crate) fn parse_tuples(
    text: &str,
    line: usize,
) -> Result<Vec<Vec<String>>, StructureParseError> {
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        if let Some(after) = rest.strip_prefix('(') {
            let close = match after.find(')') {
                Some(c) => c,
                None => return perr(line, format!("unclosed `(` in {text:?}")),
            };
            let inner = after[..close].trim();
            let t: Vec<String> = if inner.is_empty() {
                Vec::new()
            } else {
                inner.split(',').map(|p| p.trim().to_string()).collect()
            };
            if let Some(bad) = t.iter().find(|p| !ident_ok(p)) {
                return perr(line, format!("bad element name {bad:?}"));
            }
            out.push(t);
            rest = after[close + 1..].trim_start();
        } else {
            let end = rest
                .find(|c: char| c.is_whitespace() || c == '(')
                .unwrap_or(rest.len());
            let word = &rest[..end];
            if !ident_ok(word) {
                return perr(line, format!("bad element name {word:?}"));
            }
            out.push(vec![word.to_string()]);
            rest = rest[end..].trim_start();
        }
    }
    Ok(out)
}

pub(crate) fn parse_stmt(l: &Line) -> Result<Stmt, StructureParseError> {
    let text = l.text.as_str();
    let (head, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
    let rest = rest.trim();
    match head {
        "sort" | "dynsort" => {
            let (name, elems) = match rest.split_once('=') {
                Some((n, e)) => (n.trim(), e.trim()),
                None => (rest, ""),
            };
            if !ident_ok(name) {
                return perr(l.no, format!("bad sort name {name:?}"));
            }
            if head == "dynsort" && dyn_arity(name).is_none() {
                return perr(l.no, format!("{name} is not a Dyn sort"));
            }
            let elems: Vec<String> = elems.split_whitespace().map(String::from).collect();
            let mut seen = BTreeSet::new();
            for e in &elems {
                if !ident_ok(e) {
                    return perr(l.no, format!("bad element name {e:?}"));
                }
                if !seen.insert(e) {
                    return perr(l.no, format!("element {e} listed twice"));
                }
            }
            Ok(Stmt::Sort {
                name: name.to_string(),
                elems,
            })
        }
        "rel" | "dynrel" => {
            let kind = if head == "rel" {
                RelKind::Static
            } else {
                RelKind::Dynamic
            };
            let (decl, tuples) = match rest.split_once('=') {
                Some((d, t)) => (d.trim(), Some(t.trim())),
                None => (rest, None),
            };
            let (name, sorts) = match decl.split_once('(') {
                Some((n, s)) => {
                    let s = s.trim();
                    let Some(s) = s.strip_suffix(')') else {
                        return perr(l.no, format!("unclosed sort list in {decl:?}"));
                    };
                    let sorts: Vec<String> = if s.trim().is_empty() {
                        Vec::new()
                    } else {
                        s.split(',').map(|p| p.trim().to_string()).collect()
                    };
                    (n.trim(), Some(sorts))
                }
                None => (decl, None),
            };
            if !ident_ok(name) {
                return perr(l.no, format!("bad relation name {name:?}"));
            }
            let tuples = match tuples {
                Some(t) => {
                    let ts = parse_tuples(t, l.no)?;
                    let mut seen = BTreeSet::new();
                    for t in &ts {
                        if !seen.insert(t) {
                            return perr(l.no, format!("tuple ({}) listed twice", t.join(",")));
                        }
                    }
                    Some(ts)
                }
                None => None,
            };
            if sorts.is_none() && tuples.is_none() {
                return perr(l.no, format!("relation {name} needs a sort list or tuples"));
            }
            Ok(Stmt::Rel {
                name: name.to_string(),
                sorts,
                kind,
                tuples,
            })
        }
        "manifest" => {
            let Some((d, t)) = rest.split_once('=') else {
                return perr(l.no, "expected `manifest <elem> = <tuple>`");
            };
            let mut ts = parse_tuples(t, l.no)?;
            if ts.len() != 1 {
                return perr(l.no, "a manifestation names exactly one tuple");
            }
            Ok(Stmt::Manifest {
                dynamic: d.trim().to_string(),
                tuple: ts.remove(0),
            })
        }
        other => perr(l.no, format!("unknown statement {other:?}")),
    }
}

/// Collects a signature over several structure bodies and then builds them.
#[derive(Default)]
pub(crate) struct BodyParser {
    pub sig: Signature,
}

impl BodyParser {
    pub fn declare(&mut self, l: &Line, stmt: &Stmt) -> Result<(), StructureParseError> {
        let wrap = |e: crate::logic::SignatureError| StructureParseError {
            line: l.no,
            message: e.to_string(),
        };
        match stmt {
            Stmt::Sort { name, .. } => self.sig.add_sort(name).map_err(wrap),
            Stmt::Rel {
                name,
                sorts: Some(sorts),
                kind,
                ..
            } => {
                for s in sorts {
                    if dyn_arity(s).is_some() {
                        self.sig.add_sort(s).map_err(wrap)?;
                    }
                }
                match self.sig.relation(name) {
                    Some(d) if d.sorts == *sorts && d.kind == *kind => Ok(()),
                    Some(_) => perr(l.no, format!("relation {name} redeclared differently")),
                    None => {
                        let refs: Vec<&str> = sorts.iter().map(String::as_str).collect();
                        self.sig.add_relation(name, &refs, *kind).map_err(wrap)
                    }
                }
            }
            Stmt::Rel { .. } => Ok(()),
            Stmt::Manifest { tuple, .. } => self.sig.add_sort(&dyn_sort(tuple.len())).map_err(wrap),
        }
    }

    /// Apply statements to `u`. With `strict`, a sort or relation filled twice is an error.
    pub fn apply(
        &self,
        u: &mut FiniteStructure,
        stmts: &[(Line, Stmt)],
        strict: bool,
    ) -> Result<(), StructureParseError> {
        let mut sorts_seen = BTreeSet::new();
        let mut rels_seen = BTreeSet::new();
        let mut manifests_seen = BTreeSet::new();
        // domains first so that tuples may precede their elements' sort line
        for (l, stmt) in stmts {
            if let Stmt::Sort { name, elems } = stmt {
                if strict && !sorts_seen.insert(name.clone()) {
                    return perr(l.no, format!("sort {name} given twice"));
                }
                for e in elems {
                    u.add_element(name, e.as_str()).map_err(|e| se(l.no, e))?;
                }
            }
        }
        for (l, stmt) in stmts {
            match stmt {
                Stmt::Rel {
                    name,
                    tuples: Some(tuples),
                    sorts,
                    ..
                } => {
                    if strict && !rels_seen.insert(name.clone()) && sorts.is_some() {
                        return perr(l.no, format!("relation {name} given twice"));
                    }
                    if u.signature().relation(name).is_none() {
                        return perr(l.no, format!("relation {name} is not declared"));
                    }
                    for t in tuples {
                        let t: Vec<Elem> = t.iter().map(|e| Elem::new(e)).collect();
                        if !u.add_tuple(name, t.clone()).map_err(|e| se(l.no, e))? {
                            return perr(l.no, format!("tuple {} listed twice", show_tuple(&t)));
                        }
                    }
                }
                Stmt::Manifest { dynamic, tuple } => {
                    if !manifests_seen.insert((dynamic.clone(), tuple.clone())) {
                        return perr(l.no, format!("manifestation of {dynamic} listed twice"));
                    }
                    let n = tuple.len();
                    let d = Elem::new(dynamic);
                    if !u.domain(&dyn_sort(n)).contains(&d) {
                        return perr(
                            l.no,
                            format!("{dynamic} is not an element of {}", dyn_sort(n)),
                        );
                    }
                    let mut t: Vec<Elem> = tuple.iter().map(|e| Elem::new(e)).collect();
                    t.push(d);
                    u.add_tuple(&manifest_rel(n), t).map_err(|e| se(l.no, e))?;
                }
                _ => {}
            }
        }
        Ok(())
    }
}

fn se(line: usize, e: StructError) -> StructureParseError {
    StructureParseError {
        line,
        message: e.to_string(),
    }
}

/// Parse a standalone structure file.
pub fn parse_structure(text: &str) -> Result<FiniteStructure, StructureParseError> {
    let mut stmts = Vec::new();
    for l in split_lines(text) {
        if l.text == "{" || l.text == "}" {
            return perr(l.no, "unexpected brace");
        }
        let s = parse_stmt(&l)?;
        stmts.push((l, s));
    }
    let mut bp = BodyParser::default();
    let mut declared = BTreeSet::new();
    for (l, s) in &stmts {
        if let Stmt::Rel {
            name,
            sorts: Some(_),
            ..
        } = s
        {
            if !declared.insert(name.clone()) {
                return perr(l.no, format!("relation {name} declared twice"));
            }
        }
        bp.declare(l, s)?;
    }
    let mut u = FiniteStructure::with_signature(Arc::new(bp.sig.clone()));
    bp.apply(&mut u, &stmts, true)?;
    Ok(u)
}

/// Render `u` in the format read by [`parse_structure`].
pub fn write_structure(u: &FiniteStructure) -> String {
    let mut out = String::new();
    let sig = u.signature();
    for sort in sig.sorts() {
        let elems: Vec<&str> = u.domain(sort).iter().map(Elem::as_str).collect();
        let kw = if sort == STAT || dyn_arity(sort).is_none() {
            "sort"
        } else {
            "dynsort"
        };
        if elems.is_empty() {
            out.push_str(&format!("{kw} {sort}\n"));
        } else {
            out.push_str(&format!("{kw} {sort} = {}\n", elems.join(" ")));
        }
    }
    for decl in sig.relations() {
        if decl.is_manifestation() {
            continue;
        }
        let kw = if decl.kind == RelKind::Static {
            "rel"
        } else {
            "dynrel"
        };
        let tuples: Vec<String> = u
            .relation(&decl.name)
            .iter()
            .map(|t| show_tuple(t))
            .collect();
        out.push_str(&format!(
            "{kw} {}({}) = {}\n",
            decl.name,
            decl.sorts.join(","),
            tuples.join(" ")
        ));
    }
    for decl in sig.relations().filter(|d| d.is_manifestation()) {
        let n = decl.arity() - 1;
        for t in u.relation(&decl.name) {
            out.push_str(&format!("manifest {} = {}\n", t[n], show_tuple(&t[..n])));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::tuple;

    const SAMPLE: &str = "\
# a small order with a dynamic point
sort Stat = a b c
rel le(Stat,Stat) = (a,a) (a,b) (b,b) (c,c) ; dynrel T(Stat) = a
dynsort Dyn1 = d0
manifest d0 = b
rel flag() = ()
";

    #[test]
    fn parses_sample() {
        let u = parse_structure(SAMPLE).unwrap();
        assert_eq!(u.stat().len(), 3);
        assert!(u.holds("le", &tuple(&["a", "b"])));
        assert!(u.holds("T", &tuple(&["a"])));
        assert!(u.holds("<<-1", &tuple(&["b", "d0"])));
        assert!(u.holds("flag", &[]));
        assert!(!u.signature().is_static("T"));
    }

    #[test]
    fn round_trips_through_writer() {
        let u = parse_structure(SAMPLE).unwrap();
        let again = parse_structure(&write_structure(&u)).unwrap();
        assert_eq!(u, again);
    }

    #[test]
    fn rejects_duplicates_and_strays() {
        assert_eq!(parse_structure("sort Stat = a a").unwrap_err().line, 1);
        assert!(parse_structure("sort Stat = a\nsort Stat = b").is_err());
        assert!(parse_structure("sort Stat = a\nrel R(Stat) = a a").is_err());
        assert!(parse_structure("sort Stat = a\nrel R(Stat) = a\nrel R(Stat) = a").is_err());
        let err = parse_structure("sort Stat = a\nrel R(Stat) = b").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(parse_structure("sort Stat = a\nrel R(Color) = a").is_err());
    }
}
