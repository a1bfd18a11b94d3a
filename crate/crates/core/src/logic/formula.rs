use std::collections::BTreeSet;

use serde::Serialize;

use super::signature::{dyn_arity, manifest_rel, Signature, STAT};

/// A sorted variable. Variables of the same name always carry the same sort
/// within a well-sorted formula.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Var {
    pub name: String,
    pub sort: String,
}

impl Var {
    pub fn new(name: impl Into<String>, sort: impl Into<String>) -> Self {
        Var {
            name: name.into(),
            sort: sort.into(),
        }
    }

    /// A variable of sort `Stat`.
    pub fn stat(name: impl Into<String>) -> Self {
        Var::new(name, STAT)
    }
}

/// Formulas of sorted first-order modal logic.
///
/// `Not`, `Or`, `Exists` and `Dia` are primitive; the other connectives are
/// kept in the tree so that printing preserves the surface syntax, and
/// [`Formula::desugar`] removes them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom {
        rel: String,
        args: Vec<Var>,
    },
    /// `(x1, .., xn) <<- xi`: the dynamic tuple `xi` manifests as `x1..xn`.
    Manifest {
        args: Vec<Var>,
        dynamic: Var,
    },
    Eq(Var, Var),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(Var, Box<Formula>),
    Forall(Var, Box<Formula>),
    Dia(Box<Formula>),
    Box(Box<Formula>),
}

impl Formula {
    pub fn atom(rel: &str, args: &[Var]) -> Self {
        Formula::Atom {
            rel: rel.to_string(),
            args: args.to_vec(),
        }
    }

    pub fn manifest(args: &[Var], dynamic: Var) -> Self {
        Formula::Manifest {
            args: args.to_vec(),
            dynamic,
        }
    }

    pub fn eq(a: Var, b: Var) -> Self {
        Formula::Eq(a, b)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn exists(v: Var, f: Formula) -> Self {
        Formula::Exists(v, Box::new(f))
    }

    pub fn forall(v: Var, f: Formula) -> Self {
        Formula::Forall(v, Box::new(f))
    }

    pub fn dia(f: Formula) -> Self {
        Formula::Dia(Box::new(f))
    }

    pub fn boxed(f: Formula) -> Self {
        Formula::Box(Box::new(f))
    }

    /// Conjunction of a non-empty list, associated to the left.
    pub fn conjunction(mut parts: Vec<Formula>) -> Option<Self> {
        if parts.is_empty() {
            return None;
        }
        let first = parts.remove(0);
        Some(parts.into_iter().fold(first, Formula::and))
    }

    pub fn is_atomic(&self) -> bool {
        matches!(
            self,
            Formula::Atom { .. } | Formula::Manifest { .. } | Formula::Eq(..)
        )
    }

    /// Variables occurring in an atomic formula, in argument order.
    pub fn atom_vars(&self) -> Vec<&Var> {
        match self {
            Formula::Atom { args, .. } => args.iter().collect(),
            Formula::Manifest { args, dynamic } => {
                args.iter().chain(std::iter::once(dynamic)).collect()
            }
            Formula::Eq(a, b) => vec![a, b],
            _ => Vec::new(),
        }
    }

    /// Immediate subformulas.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom { .. } | Formula::Manifest { .. } | Formula::Eq(..) => vec![],
            Formula::Not(a) | Formula::Dia(a) | Formula::Box(a) => vec![a],
            Formula::Exists(_, a) | Formula::Forall(_, a) => vec![a],
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                vec![a, b]
            }
        }
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<Var> {
        fn walk(f: &Formula, bound: &mut Vec<String>, out: &mut Vec<Var>) {
            match f {
                Formula::Exists(v, body) | Formula::Forall(v, body) => {
                    bound.push(v.name.clone());
                    walk(body, bound, out);
                    bound.pop();
                }
                _ if f.is_atomic() => {
                    for v in f.atom_vars() {
                        if !bound.contains(&v.name) && !out.iter().any(|o| o.name == v.name) {
                            out.push(v.clone());
                        }
                    }
                }
                _ => {
                    for c in f.children() {
                        walk(c, bound, out);
                    }
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    /// Names of all variables bound somewhere in the formula.
    pub fn bound_var_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Exists(v, _) | Formula::Forall(v, _) = f {
                out.insert(v.name.clone());
            }
        });
        out
    }

    /// Names of all variables occurring anywhere (free, bound or binding).
    pub fn all_var_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Exists(v, _) | Formula::Forall(v, _) => {
                out.insert(v.name.clone());
            }
            _ => {
                for v in f.atom_vars() {
                    out.insert(v.name.clone());
                }
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    pub fn is_modal_free(&self) -> bool {
        self.modal_depth() == 0
    }

    pub fn modal_depth(&self) -> usize {
        let inner = self
            .children()
            .iter()
            .map(|c| c.modal_depth())
            .max()
            .unwrap_or(0);
        match self {
            Formula::Dia(_) | Formula::Box(_) => inner + 1,
            _ => inner,
        }
    }

    pub fn quantifier_depth(&self) -> usize {
        let inner = self
            .children()
            .iter()
            .map(|c| c.quantifier_depth())
            .max()
            .unwrap_or(0);
        match self {
            Formula::Exists(..) | Formula::Forall(..) => inner + 1,
            _ => inner,
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Rewrite into the primitives `not`, `or`, `exists`, `dia`.
    pub fn desugar(&self) -> Formula {
        match self {
            Formula::Atom { .. } | Formula::Manifest { .. } | Formula::Eq(..) => self.clone(),
            Formula::Not(a) => Formula::not(a.desugar()),
            Formula::Or(a, b) => Formula::or(a.desugar(), b.desugar()),
            Formula::And(a, b) => Formula::not(Formula::or(
                Formula::not(a.desugar()),
                Formula::not(b.desugar()),
            )),
            Formula::Implies(a, b) => Formula::or(Formula::not(a.desugar()), b.desugar()),
            Formula::Iff(a, b) => Formula::and(
                Formula::implies((**a).clone(), (**b).clone()),
                Formula::implies((**b).clone(), (**a).clone()),
            )
            .desugar(),
            Formula::Exists(v, a) => Formula::exists(v.clone(), a.desugar()),
            Formula::Forall(v, a) => {
                Formula::not(Formula::exists(v.clone(), Formula::not(a.desugar())))
            }
            Formula::Dia(a) => Formula::dia(a.desugar()),
            Formula::Box(a) => Formula::not(Formula::dia(Formula::not(a.desugar()))),
        }
    }

    /// Rebuild the formula bottom-up, replacing each atomic subformula by `f(atom)`.
    pub fn map_atoms(&self, f: &mut impl FnMut(&Formula) -> Formula) -> Formula {
        match self {
            Formula::Atom { .. } | Formula::Manifest { .. } | Formula::Eq(..) => f(self),
            Formula::Not(a) => Formula::not(a.map_atoms(f)),
            Formula::Dia(a) => Formula::dia(a.map_atoms(f)),
            Formula::Box(a) => Formula::boxed(a.map_atoms(f)),
            Formula::And(a, b) => Formula::and(a.map_atoms(f), b.map_atoms(f)),
            Formula::Or(a, b) => Formula::or(a.map_atoms(f), b.map_atoms(f)),
            Formula::Implies(a, b) => Formula::implies(a.map_atoms(f), b.map_atoms(f)),
            Formula::Iff(a, b) => Formula::iff(a.map_atoms(f), b.map_atoms(f)),
            Formula::Exists(v, a) => Formula::exists(v.clone(), a.map_atoms(f)),
            Formula::Forall(v, a) => Formula::forall(v.clone(), a.map_atoms(f)),
        }
    }

    /// Rename free occurrences of variable `from` to `to` (same sort).
    /// The caller guarantees `to` is not captured.
    pub fn rename_free(&self, from: &str, to: &str) -> Formula {
        match self {
            Formula::Exists(v, _) | Formula::Forall(v, _) if v.name == from => self.clone(),
            Formula::Exists(v, a) => Formula::exists(v.clone(), a.rename_free(from, to)),
            Formula::Forall(v, a) => Formula::forall(v.clone(), a.rename_free(from, to)),
            Formula::Atom { rel, args } => Formula::Atom {
                rel: rel.clone(),
                args: args.iter().map(|v| rename(v, from, to)).collect(),
            },
            Formula::Manifest { args, dynamic } => Formula::Manifest {
                args: args.iter().map(|v| rename(v, from, to)).collect(),
                dynamic: rename(dynamic, from, to),
            },
            Formula::Eq(a, b) => Formula::Eq(rename(a, from, to), rename(b, from, to)),
            Formula::Not(a) => Formula::not(a.rename_free(from, to)),
            Formula::Dia(a) => Formula::dia(a.rename_free(from, to)),
            Formula::Box(a) => Formula::boxed(a.rename_free(from, to)),
            Formula::And(a, b) => Formula::and(a.rename_free(from, to), b.rename_free(from, to)),
            Formula::Or(a, b) => Formula::or(a.rename_free(from, to), b.rename_free(from, to)),
            Formula::Implies(a, b) => {
                Formula::implies(a.rename_free(from, to), b.rename_free(from, to))
            }
            Formula::Iff(a, b) => Formula::iff(a.rename_free(from, to), b.rename_free(from, to)),
        }
    }

    /// Relation symbols mentioned (manifestation atoms count as `<<-n`).
    pub fn relations(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Atom { rel, .. } => {
                out.insert(rel.clone());
            }
            Formula::Manifest { args, .. } => {
                out.insert(manifest_rel(args.len()));
            }
            _ => {}
        });
        out
    }

    /// Check sort correctness against `sig`.
    pub fn check_sorts(&self, sig: &Signature) -> Result<(), SortError> {
        let mut seen: Vec<(String, String)> = Vec::new();
        self.check_sorts_inner(sig, &mut Vec::new(), &mut seen)
    }

    fn check_sorts_inner(
        &self,
        sig: &Signature,
        bound: &mut Vec<Var>,
        free: &mut Vec<(String, String)>,
    ) -> Result<(), SortError> {
        let mut note = |v: &Var, bound: &Vec<Var>| -> Result<(), SortError> {
            if !sig.has_sort(&v.sort) {
                return Err(SortError::UnknownSort {
                    var: v.name.clone(),
                    sort: v.sort.clone(),
                });
            }
            if let Some(b) = bound.iter().rev().find(|b| b.name == v.name) {
                if b.sort != v.sort {
                    return Err(SortError::Inconsistent {
                        var: v.name.clone(),
                    });
                }
            } else if let Some((_, s)) = free.iter().find(|(n, _)| n == &v.name) {
                if s != &v.sort {
                    return Err(SortError::Inconsistent {
                        var: v.name.clone(),
                    });
                }
            } else {
                free.push((v.name.clone(), v.sort.clone()));
            }
            Ok(())
        };
        match self {
            Formula::Atom { rel, args } => {
                let decl = sig
                    .relation(rel)
                    .filter(|d| !d.is_manifestation())
                    .ok_or_else(|| SortError::UnknownRelation(rel.clone()))?;
                if decl.arity() != args.len() {
                    return Err(SortError::Arity {
                        relation: rel.clone(),
                        expected: decl.arity(),
                        found: args.len(),
                    });
                }
                for (v, s) in args.iter().zip(&decl.sorts) {
                    if &v.sort != s {
                        return Err(SortError::Mismatch {
                            var: v.name.clone(),
                            relation: rel.clone(),
                            expected: s.clone(),
                            found: v.sort.clone(),
                        });
                    }
                    note(v, bound)?;
                }
                Ok(())
            }
            Formula::Manifest { args, dynamic } => {
                let n = args.len();
                if dyn_arity(&dynamic.sort) != Some(n) {
                    return Err(SortError::Mismatch {
                        var: dynamic.name.clone(),
                        relation: manifest_rel(n),
                        expected: super::signature::dyn_sort(n),
                        found: dynamic.sort.clone(),
                    });
                }
                for v in args {
                    if v.sort != STAT {
                        return Err(SortError::Mismatch {
                            var: v.name.clone(),
                            relation: manifest_rel(n),
                            expected: STAT.into(),
                            found: v.sort.clone(),
                        });
                    }
                    note(v, bound)?;
                }
                note(dynamic, bound)
            }
            Formula::Eq(a, b) => {
                if a.sort != b.sort {
                    return Err(SortError::Mismatch {
                        var: b.name.clone(),
                        relation: "=".into(),
                        expected: a.sort.clone(),
                        found: b.sort.clone(),
                    });
                }
                note(a, bound)?;
                note(b, bound)
            }
            Formula::Exists(v, a) | Formula::Forall(v, a) => {
                if !sig.has_sort(&v.sort) {
                    return Err(SortError::UnknownSort {
                        var: v.name.clone(),
                        sort: v.sort.clone(),
                    });
                }
                bound.push(v.clone());
                let r = a.check_sorts_inner(sig, bound, free);
                bound.pop();
                r
            }
            _ => {
                for c in self.children() {
                    c.check_sorts_inner(sig, bound, free)?;
                }
                Ok(())
            }
        }
    }
}

fn rename(v: &Var, from: &str, to: &str) -> Var {
    if v.name == from {
        Var::new(to, v.sort.clone())
    } else {
        v.clone()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SortError {
    #[error("unknown relation {0}")]
    UnknownRelation(String),
    #[error("variable {var} has undeclared sort {sort}")]
    UnknownSort { var: String, sort: String },
    #[error("relation {relation} expects {expected} arguments, found {found}")]
    Arity {
        relation: String,
        expected: usize,
        found: usize,
    },
    #[error("variable {var} has sort {found} but {relation} expects {expected}")]
    Mismatch {
        var: String,
        relation: String,
        expected: String,
        found: String,
    },
    #[error("variable {var} is used at two different sorts")]
    Inconsistent { var: String },
}
