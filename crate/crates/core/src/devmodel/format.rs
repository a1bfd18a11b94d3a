//! Text format for development models.
//!
//! ```text
//! rel le(Stat,Stat)            # shared declarations, applied to every state
//! state s0 { sort Stat = a ; rel le = (a,a) }
//! state s1 {
//!   sort Stat = a b
//!   rel le = (a,a) (a,b) (b,b)
//! }
//! edge s0 <= s1
//! dyn d0 : Dyn1 { s0 -> a ; s1 -> b }
//! ```
//!
//! Reflexive edges are implicit; no other closure is applied.

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use super::{DevelopmentModel, Frame};
use crate::logic::{dyn_arity, dyn_sort, manifest_rel};
use crate::structures::{
    parse_stmt, parse_tuples, split_lines, write_structure, BodyParser, Elem, FiniteStructure,
    Line, Stmt,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct DevParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, DevParseError> {
    Err(DevParseError {
        line,
        message: message.into(),
    })
}

fn lift(e: crate::structures::StructureParseError) -> DevParseError {
    DevParseError {
        line: e.line,
        message: e.message,
    }
}

struct DynBlock {
    line: usize,
    elem: String,
    sort: String,
    values: Vec<(usize, String, Vec<String>)>,
}

pub fn parse_dev_model(text: &str) -> Result<DevelopmentModel, DevParseError> {
    let lines = split_lines(text);
    let mut common: Vec<(Line, Stmt)> = Vec::new();
    let mut states: Vec<(String, usize, Vec<(Line, Stmt)>)> = Vec::new();
    let mut edges: Vec<(usize, String, String)> = Vec::new();
    let mut dyns: Vec<DynBlock> = Vec::new();
    let mut i = 0;
    let take_block = |i: &mut usize, open_line: usize| -> Result<Vec<Line>, DevParseError> {
        if lines.get(*i).map(|l| l.text.as_str()) != Some("{") {
            return err(open_line, "expected `{`");
        }
        *i += 1;
        let mut body = Vec::new();
        while let Some(l) = lines.get(*i) {
            *i += 1;
            match l.text.as_str() {
                "}" => return Ok(body),
                "{" => return err(l.no, "nested `{`"),
                _ => body.push(l.clone()),
            }
        }
        err(open_line, "unclosed `{`")
    };
    while i < lines.len() {
        let l = lines[i].clone();
        i += 1;
        let words: Vec<&str> = l.text.split_whitespace().collect();
        match words.first().copied() {
            Some("state") => {
                if words.len() != 2 {
                    return err(l.no, "expected `state <name> {`");
                }
                let name = words[1].to_string();
                if states.iter().any(|(n, _, _)| *n == name) {
                    return err(l.no, format!("state {name} declared twice"));
                }
                let body = take_block(&mut i, l.no)?;
                let stmts = body
                    .into_iter()
                    .map(|b| parse_stmt(&b).map(|s| (b, s)))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(lift)?;
                states.push((name, l.no, stmts));
            }
            Some("edge") => {
                let rest = l.text["edge".len()..].trim();
                let parts: Vec<&str> = rest.split("<=").map(str::trim).collect();
                if parts.len() < 2 || parts.iter().any(|p| p.is_empty()) {
                    return err(l.no, "expected `edge <state> <= <state>`");
                }
                for w in parts.windows(2) {
                    edges.push((l.no, w[0].to_string(), w[1].to_string()));
                }
            }
            Some("dyn") => {
                let rest = l.text["dyn".len()..].trim();
                let Some((elem, sort)) = rest.split_once(':') else {
                    return err(l.no, "expected `dyn <elem> : Dyn<n> {`");
                };
                let (elem, sort) = (elem.trim().to_string(), sort.trim().to_string());
                if dyn_arity(&sort).is_none() {
                    return err(l.no, format!("{sort} is not a Dyn sort"));
                }
                let body = take_block(&mut i, l.no)?;
                let mut values = Vec::new();
                for b in body {
                    let Some((st, t)) = b.text.split_once("->") else {
                        return err(b.no, "expected `<state> -> <tuple>`");
                    };
                    let mut ts = parse_tuples(t, b.no).map_err(lift)?;
                    if ts.len() != 1 {
                        return err(b.no, "expected exactly one tuple");
                    }
                    values.push((b.no, st.trim().to_string(), ts.remove(0)));
                }
                dyns.push(DynBlock {
                    line: l.no,
                    elem,
                    sort,
                    values,
                });
            }
            Some("{") | Some("}") => return err(l.no, "unexpected brace"),
            _ => {
                let s = parse_stmt(&l).map_err(lift)?;
                common.push((l, s));
            }
        }
    }

    let mut bp = BodyParser::default();
    for (l, s) in common
        .iter()
        .chain(states.iter().flat_map(|(_, _, b)| b.iter()))
    {
        bp.declare(l, s).map_err(lift)?;
    }
    for d in &dyns {
        bp.sig.add_sort(&d.sort).map_err(|e| DevParseError {
            line: d.line,
            message: e.to_string(),
        })?;
    }
    let sig = Arc::new(bp.sig.clone());
    let names: Vec<String> = states.iter().map(|(n, _, _)| n.clone()).collect();
    let index = |line: usize, n: &str| -> Result<usize, DevParseError> {
        names
            .iter()
            .position(|m| m == n)
            .map_or_else(|| err(line, format!("unknown state {n}")), Ok)
    };
    let mut structs: Vec<FiniteStructure> = Vec::new();
    for (_, _, body) in &states {
        let mut u = FiniteStructure::with_signature(sig.clone());
        bp.apply(&mut u, &common, true).map_err(lift)?;
        bp.apply(&mut u, body, true).map_err(lift)?;
        structs.push(u);
    }
    let mut dyn_names = BTreeSet::new();
    for d in &dyns {
        if !dyn_names.insert(d.elem.clone()) {
            return err(d.line, format!("dynamic element {} declared twice", d.elem));
        }
        let n = dyn_arity(&d.sort).expect("checked");
        for u in structs.iter_mut() {
            u.add_element(&d.sort, d.elem.as_str())
                .expect("declared sort");
        }
        let mut seen = BTreeSet::new();
        for (line, st, t) in &d.values {
            let s = index(*line, st)?;
            if !seen.insert(s) {
                return err(*line, format!("state {st} given twice for {}", d.elem));
            }
            if t.len() != n {
                return err(
                    *line,
                    format!("{} needs a tuple of length {n}", dyn_sort(n)),
                );
            }
            let mut tup: Vec<Elem> = t.iter().map(|e| Elem::new(e)).collect();
            tup.push(Elem::new(&d.elem));
            structs[s]
                .add_tuple(&manifest_rel(n), tup)
                .map_err(|e| DevParseError {
                    line: *line,
                    message: e.to_string(),
                })?;
        }
    }
    let mut edge_idx = Vec::new();
    for (line, a, b) in &edges {
        edge_idx.push((index(*line, a)?, index(*line, b)?));
    }
    let frame = Frame::new(names, &edge_idx);
    DevelopmentModel::new(frame, structs.into_iter().map(Arc::new).collect()).map_err(|e| {
        DevParseError {
            line: 0,
            message: e.to_string(),
        }
    })
}

/// Render a model in the format read by [`parse_dev_model`].
pub fn write_dev_model(m: &DevelopmentModel) -> String {
    let mut out = String::new();
    for s in 0..m.len() {
        out.push_str(&format!("state {} {{\n", m.state_name(s)));
        for line in write_structure(&m.structures()[s]).lines() {
            out.push_str("  ");
            out.push_str(line);
            out.push('\n');
        }
        out.push_str("}\n");
    }
    for s in 0..m.len() {
        for &t in m.frame().above(s) {
            if s != t {
                out.push_str(&format!(
                    "edge {} <= {}\n",
                    m.state_name(s),
                    m.state_name(t)
                ));
            }
        }
    }
    out
}
