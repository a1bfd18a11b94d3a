//! Text format for lassos.
//!
//! ```text
//! transient 0
//! period 2
//! sort Stat = l             # shared statements, applied to every structure
//! dynrel T(Stat)
//! structure { }
//! structure { rel T = l }
//! ```
//!
//! Exactly `transient + period` structure blocks follow, in state order.

use std::sync::Arc;

use thiserror::Error;

use super::Lasso;
use crate::structures::{
    parse_stmt, split_lines, write_structure, BodyParser, FiniteStructure, Line, Stmt,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct LassoParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, LassoParseError> {
    Err(LassoParseError {
        line,
        message: message.into(),
    })
}

fn lift(e: crate::structures::StructureParseError) -> LassoParseError {
    LassoParseError {
        line: e.line,
        message: e.message,
    }
}

fn header(l: &Line, value: &str, slot: &mut Option<usize>) -> Result<(), LassoParseError> {
    if slot.is_some() {
        return err(l.no, "header given twice");
    }
    match value.trim().parse() {
        Ok(v) => {
            *slot = Some(v);
            Ok(())
        }
        Err(_) => err(l.no, format!("expected a number, found {:?}", value.trim())),
    }
}

pub fn parse_lasso(text: &str) -> Result<Lasso, LassoParseError> {
    let lines = split_lines(text);
    let (mut mu, mut pi) = (None, None);
    let mut common: Vec<(Line, Stmt)> = Vec::new();
    let mut blocks: Vec<(usize, Vec<(Line, Stmt)>)> = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let l = lines[i].clone();
        i += 1;
        let (head, rest) = l
            .text
            .split_once(char::is_whitespace)
            .unwrap_or((l.text.as_str(), ""));
        match head {
            "transient" => header(&l, rest, &mut mu)?,
            "period" => header(&l, rest, &mut pi)?,
            "structure" => {
                if !rest.trim().is_empty() || lines.get(i).map(|x| x.text.as_str()) != Some("{") {
                    return err(l.no, "expected `structure {`");
                }
                i += 1;
                let mut body = Vec::new();
                loop {
                    let Some(b) = lines.get(i) else {
                        return err(l.no, "unclosed `{`");
                    };
                    i += 1;
                    match b.text.as_str() {
                        "}" => break,
                        "{" => return err(b.no, "nested `{`"),
                        _ => body.push((b.clone(), parse_stmt(b).map_err(lift)?)),
                    }
                }
                blocks.push((l.no, body));
            }
            "{" | "}" => return err(l.no, "unexpected brace"),
            _ => common.push((l.clone(), parse_stmt(&l).map_err(lift)?)),
        }
    }
    let Some(mu) = mu else {
        return err(1, "missing `transient` header");
    };
    let Some(pi) = pi else {
        return err(1, "missing `period` header");
    };
    if pi == 0 {
        return err(1, "period must be at least 1");
    }
    if blocks.len() != mu + pi {
        let line = blocks.last().map_or(1, |b| b.0);
        return err(
            line,
            format!(
                "expected {} structure blocks, found {}",
                mu + pi,
                blocks.len()
            ),
        );
    }
    let mut bp = BodyParser::default();
    for (l, s) in common
        .iter()
        .chain(blocks.iter().flat_map(|(_, b)| b.iter()))
    {
        bp.declare(l, s).map_err(lift)?;
    }
    let sig = Arc::new(bp.sig.clone());
    let mut structs = Vec::new();
    for (_, body) in &blocks {
        let mut u = FiniteStructure::with_signature(sig.clone());
        bp.apply(&mut u, &common, true).map_err(lift)?;
        bp.apply(&mut u, body, true).map_err(lift)?;
        structs.push(Arc::new(u));
    }
    Lasso::new(mu, pi, structs).map_err(|e| LassoParseError {
        line: 1,
        message: e.to_string(),
    })
}

pub fn write_lasso(l: &Lasso) -> String {
    let mut out = format!("transient {}\nperiod {}\n", l.transient(), l.period());
    for u in l.structures() {
        out.push_str("structure {\n");
        for line in write_structure(u).lines() {
            out.push_str("  ");
            out.push_str(line);
            out.push('\n');
        }
        out.push_str("}\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::tuple;

    const LIAR: &str = "transient 0\nperiod 2\nsort Stat = l\ndynrel T(Stat)\nstructure { }\nstructure { rel T = l }\n";

    #[test]
    fn parses_and_round_trips() {
        let l = parse_lasso(LIAR).unwrap();
        assert_eq!((l.transient(), l.period()), (0, 2));
        assert!(l.state(3).holds("T", &tuple(&["l"])));
        assert!(!l.state(4).holds("T", &tuple(&["l"])));
        let again = parse_lasso(&write_lasso(&l)).unwrap();
        assert_eq!(l.structures(), again.structures());
    }

    #[test]
    fn block_count_must_match() {
        let e = parse_lasso("transient 1\nperiod 2\nstructure { }\n").unwrap_err();
        assert!(e.message.contains("expected 3"));
        assert!(parse_lasso("period 1\nstructure { }").is_err());
        assert!(parse_lasso("transient x\nperiod 1").is_err());
    }
}
