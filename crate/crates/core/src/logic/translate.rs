use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use super::formula::{Formula, Var};
use super::signature::{dyn_arity, Signature, STAT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("formula already contains modal operators")]
    ModalInput,
    #[error("variable {0} occurs bound in the formula")]
    BoundVariable(String),
    #[error("variable {0} listed twice in the substituted tuple")]
    DuplicateVariable(String),
    #[error("{dynamic} has sort {sort}, which does not fit a tuple of length {arity}")]
    ArityMismatch {
        dynamic: String,
        sort: String,
        arity: usize,
    },
    #[error("{0} already occurs in the formula")]
    NotFresh(String),
    #[error("substituted variable {0} is not of sort Stat")]
    NonStatic(String),
}

/// Replace every `exists` by `dia exists` and every `forall` by `box forall`.
pub fn potentialist_translate(phi: &Formula) -> Result<Formula, TranslateError> {
    if !phi.is_modal_free() {
        return Err(TranslateError::ModalInput);
    }
    Ok(modalize(phi))
}

fn modalize(phi: &Formula) -> Formula {
    match phi {
        Formula::Exists(v, a) => Formula::dia(Formula::exists(v.clone(), modalize(a))),
        Formula::Forall(v, a) => Formula::boxed(Formula::forall(v.clone(), modalize(a))),
        Formula::Not(a) => Formula::not(modalize(a)),
        Formula::And(a, b) => Formula::and(modalize(a), modalize(b)),
        Formula::Or(a, b) => Formula::or(modalize(a), modalize(b)),
        Formula::Implies(a, b) => Formula::implies(modalize(a), modalize(b)),
        Formula::Iff(a, b) => Formula::iff(modalize(a), modalize(b)),
        _ => phi.clone(),
    }
}

/// Which atoms [`dynamic_substitute`] wraps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum WrapMode {
    /// Only atoms mentioning a variable of the tuple.
    #[default]
    Mentioning,
    /// Every atomic subformula.
    Full,
}

/// Replace each atomic `psi` by `exists x1..xn ((x1..xn) <<- xi and psi)`.
pub fn dynamic_substitute(
    phi: &Formula,
    xs: &[Var],
    xi: &Var,
    mode: WrapMode,
) -> Result<Formula, TranslateError> {
    if dyn_arity(&xi.sort) != Some(xs.len()) {
        return Err(TranslateError::ArityMismatch {
            dynamic: xi.name.clone(),
            sort: xi.sort.clone(),
            arity: xs.len(),
        });
    }
    let mut seen = BTreeSet::new();
    for x in xs {
        if x.sort != STAT {
            return Err(TranslateError::NonStatic(x.name.clone()));
        }
        if !seen.insert(x.name.as_str()) {
            return Err(TranslateError::DuplicateVariable(x.name.clone()));
        }
    }
    let bound = phi.bound_var_names();
    if let Some(x) = xs.iter().find(|x| bound.contains(&x.name)) {
        return Err(TranslateError::BoundVariable(x.name.clone()));
    }
    if phi.all_var_names().contains(&xi.name) || seen.contains(xi.name.as_str()) {
        return Err(TranslateError::NotFresh(xi.name.clone()));
    }
    Ok(phi.map_atoms(&mut |atom| {
        let mentions = atom
            .atom_vars()
            .iter()
            .any(|v| seen.contains(v.name.as_str()));
        if !mentions && mode == WrapMode::Mentioning {
            return atom.clone();
        }
        let body = Formula::and(Formula::manifest(xs, xi.clone()), atom.clone());
        xs.iter()
            .rev()
            .fold(body, |acc, x| Formula::exists(x.clone(), acc))
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub literal: bool,
    pub sigma2: bool,
    pub static_language: bool,
    pub modal_free: bool,
}

fn all_stat(f: &Formula) -> bool {
    f.atom_vars().iter().all(|v| v.sort == STAT)
}

fn is_static_atom(f: &Formula, sig: &Signature) -> bool {
    match f {
        Formula::Atom { rel, .. } => sig.is_static(rel),
        Formula::Eq(..) => true,
        _ => false,
    }
}

fn quantifier_free(f: &Formula) -> bool {
    f.quantifier_depth() == 0 && f.is_modal_free()
}

/// `exists* forall* B` with `B` quantifier-free; no prenexing is attempted.
pub fn is_sigma2(f: &Formula) -> bool {
    let mut g = f;
    while let Formula::Exists(_, body) = g {
        g = body;
    }
    while let Formula::Forall(_, body) = g {
        g = body;
    }
    quantifier_free(g)
}

pub fn classify(phi: &Formula, sig: &Signature) -> Classification {
    let literal = match phi {
        Formula::Not(inner) => is_static_atom(inner, sig) && all_stat(inner),
        atom => is_static_atom(atom, sig) && all_stat(atom),
    };
    let mut static_language = true;
    phi.visit(&mut |g| match g {
        Formula::Manifest { .. } => static_language = false,
        Formula::Atom { rel, .. } if !sig.is_static(rel) => static_language = false,
        _ => {}
    });
    Classification {
        literal,
        sigma2: is_sigma2(phi),
        static_language,
        modal_free: phi.is_modal_free(),
    }
}

/// Prenex `exists`-block variables and the body below them.
pub fn split_sigma2(f: &Formula) -> Option<(Vec<Var>, Vec<Var>, &Formula)> {
    if !is_sigma2(f) {
        return None;
    }
    let mut ex = Vec::new();
    let mut all = Vec::new();
    let mut g = f;
    while let Formula::Exists(v, body) = g {
        ex.push(v.clone());
        g = body;
    }
    while let Formula::Forall(v, body) = g {
        all.push(v.clone());
        g = body;
    }
    Some((ex, all, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_formula, RelKind};

    fn sig() -> Signature {
        Signature::new()
            .with_sort("Dyn1")
            .with_relation("R", &["Stat"], RelKind::Static)
            .with_relation("Q", &["Stat"], RelKind::Static)
            .with_relation("S", &["Stat", "Stat"], RelKind::Static)
            .with_relation("B", &["Stat", "Stat"], RelKind::Static)
            .with_relation("T", &["Stat"], RelKind::Dynamic)
    }

    fn p(s: &str) -> Formula {
        parse_formula(s, &sig()).unwrap()
    }

    #[test]
    fn potentialist_boxes_every_universal() {
        assert_eq!(
            potentialist_translate(&p("exists x. R(x)")).unwrap(),
            p("dia exists x. R(x)")
        );
        assert_eq!(
            potentialist_translate(&p("forall x. forall y. (S(x,y) -> not x = y)")).unwrap(),
            p("box forall x. box forall y. (S(x,y) -> not x = y)")
        );
        assert_eq!(potentialist_translate(&p("R(a)")).unwrap(), p("R(a)"));
        assert_eq!(
            potentialist_translate(&p("dia R(a)")),
            Err(TranslateError::ModalInput)
        );
    }

    #[test]
    fn dynamic_substitution_wraps_mentioning_atoms() {
        let x = Var::stat("x");
        let xi = Var::new("xi", "Dyn1");
        let out = dynamic_substitute(&p("R(x)"), &[x.clone()], &xi, WrapMode::Mentioning).unwrap();
        assert_eq!(out, p("exists x. (x <<- xi and R(x))"));
        let untouched =
            dynamic_substitute(&p("Q(y)"), &[x.clone()], &xi, WrapMode::Mentioning).unwrap();
        assert_eq!(untouched, p("Q(y)"));
        let full = dynamic_substitute(&p("Q(y)"), &[x.clone()], &xi, WrapMode::Full).unwrap();
        assert_eq!(full, p("exists x. (x <<- xi and Q(y))"));
        let modal = dynamic_substitute(&p("dia R(x)"), &[x], &xi, WrapMode::Mentioning).unwrap();
        assert_eq!(modal, p("dia exists x. (x <<- xi and R(x))"));
    }

    #[test]
    fn dynamic_substitution_errors() {
        let x = Var::stat("x");
        let xi = Var::new("xi", "Dyn1");
        assert_eq!(
            dynamic_substitute(
                &p("exists x. R(x)"),
                &[x.clone()],
                &xi,
                WrapMode::Mentioning
            ),
            Err(TranslateError::BoundVariable("x".into()))
        );
        let bad = Var::new("xi", "Dyn2");
        assert!(matches!(
            dynamic_substitute(&p("R(x)"), &[x.clone()], &bad, WrapMode::Mentioning),
            Err(TranslateError::ArityMismatch { .. })
        ));
        assert_eq!(
            dynamic_substitute(&p("T(xi) and R(x)"), &[x], &xi, WrapMode::Mentioning),
            Err(TranslateError::NotFresh("xi".into()))
        );
    }

    #[test]
    fn classification_flags() {
        let s = sig();
        let c = classify(&p("not S(x,y)"), &s);
        assert!(c.literal && c.static_language && c.modal_free);
        let c = classify(&p("exists x. forall y. B(x,y)"), &s);
        assert!(c.sigma2 && !c.literal);
        let c = classify(&p("dia R(x)"), &s);
        assert!(!c.literal && !c.modal_free);
        let c = classify(&p("T(x)"), &s);
        assert!(!c.literal && !c.static_language);
        assert!(!classify(&p("forall y. exists x. B(x,y)"), &s).sigma2);
    }
}
