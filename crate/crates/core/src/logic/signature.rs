use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Name of the sort of static individuals.
pub const STAT: &str = "Stat";

/// Sort name of dynamic tuples of length `n`.
pub fn dyn_sort(n: usize) -> String {
    format!("Dyn{n}")
}

/// Arity `n` if `sort` names a `Dyn<n>` sort.
pub fn dyn_arity(sort: &str) -> Option<usize> {
    sort.strip_prefix("Dyn")
        .map(|rest| rest.strip_prefix('_').unwrap_or(rest))
        .filter(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
        .and_then(|rest| rest.parse().ok())
}

/// Relation name used for the manifestation relation of `Dyn<n>`.
pub fn manifest_rel(n: usize) -> String {
    format!("<<-{n}")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum RelKind {
    Static,
    Dynamic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationDecl {
    pub name: String,
    pub sorts: Vec<String>,
    pub kind: RelKind,
}

impl RelationDecl {
    pub fn arity(&self) -> usize {
        self.sorts.len()
    }

    pub fn is_manifestation(&self) -> bool {
        self.name.starts_with("<<-")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("relation {relation} refers to undeclared sort {sort}")]
    UnknownSort { relation: String, sort: String },
    #[error("relation {0} is declared twice")]
    DuplicateRelation(String),
    #[error("relation name {0} is reserved")]
    ReservedName(String),
    #[error("invalid sort name {0:?}")]
    InvalidSort(String),
}

/// Sorts and relation symbols of a (purely relational) sorted language.
///
/// `Stat` is always present. Declaring `Dyn<n>` also declares the dynamic
/// manifestation relation `<<-n : (Stat^n, Dyn<n>)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    sorts: BTreeSet<String>,
    relations: BTreeMap<String, RelationDecl>,
}

impl Default for Signature {
    fn default() -> Self {
        Self::new()
    }
}

impl Signature {
    pub fn new() -> Self {
        Signature {
            sorts: BTreeSet::from([STAT.to_string()]),
            relations: BTreeMap::new(),
        }
    }

    pub fn add_sort(&mut self, name: &str) -> Result<(), SignatureError> {
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(SignatureError::InvalidSort(name.to_string()));
        }
        if !self.sorts.insert(name.to_string()) {
            return Ok(());
        }
        if let Some(n) = dyn_arity(name) {
            let mut sorts = vec![STAT.to_string(); n];
            sorts.push(name.to_string());
            let rel = manifest_rel(n);
            self.relations.insert(
                rel.clone(),
                RelationDecl {
                    name: rel,
                    sorts,
                    kind: RelKind::Dynamic,
                },
            );
        }
        Ok(())
    }

    pub fn add_relation(
        &mut self,
        name: &str,
        sorts: &[&str],
        kind: RelKind,
    ) -> Result<(), SignatureError> {
        if name.contains("<<-") || name.is_empty() {
            return Err(SignatureError::ReservedName(name.to_string()));
        }
        if self.relations.contains_key(name) {
            return Err(SignatureError::DuplicateRelation(name.to_string()));
        }
        for sort in sorts {
            if !self.sorts.contains(*sort) {
                return Err(SignatureError::UnknownSort {
                    relation: name.to_string(),
                    sort: sort.to_string(),
                });
            }
        }
        self.relations.insert(
            name.to_string(),
            RelationDecl {
                name: name.to_string(),
                sorts: sorts.iter().map(|s| s.to_string()).collect(),
                kind,
            },
        );
        Ok(())
    }

    /// Builder form of [`Signature::add_relation`] for literals in code and tests.
    pub fn with_relation(mut self, name: &str, sorts: &[&str], kind: RelKind) -> Self {
        self.add_relation(name, sorts, kind)
            .expect("valid relation declaration");
        self
    }

    pub fn with_sort(mut self, name: &str) -> Self {
        self.add_sort(name).expect("valid sort name");
        self
    }

    pub fn has_sort(&self, sort: &str) -> bool {
        self.sorts.contains(sort)
    }

    pub fn sorts(&self) -> impl Iterator<Item = &str> {
        self.sorts.iter().map(String::as_str)
    }

    pub fn relation(&self, name: &str) -> Option<&RelationDecl> {
        self.relations.get(name)
    }

    pub fn relations(&self) -> impl Iterator<Item = &RelationDecl> {
        self.relations.values()
    }

    pub fn is_static(&self, name: &str) -> bool {
        self.relations
            .get(name)
            .is_some_and(|r| r.kind == RelKind::Static)
    }

    /// Names of the static predicates (the relation symbols of `L_StatPred`).
    pub fn static_relations(&self) -> BTreeSet<String> {
        self.relations
            .values()
            .filter(|r| r.kind == RelKind::Static)
            .map(|r| r.name.clone())
            .collect()
    }

    /// Merge `other` into `self`; identical declarations are shared.
    pub fn merge(&mut self, other: &Signature) -> Result<(), SignatureError> {
        for sort in &other.sorts {
            self.add_sort(sort)?;
        }
        for rel in other.relations.values() {
            match self.relations.get(&rel.name) {
                Some(existing) if existing == rel => {}
                Some(_) => return Err(SignatureError::DuplicateRelation(rel.name.clone())),
                None => {
                    self.relations.insert(rel.name.clone(), rel.clone());
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sorts: Vec<_> = self.sorts.iter().map(String::as_str).collect();
        write!(f, "sorts {}", sorts.join(" "))?;
        for rel in self.relations.values() {
            let kind = match rel.kind {
                RelKind::Static => "static",
                RelKind::Dynamic => "dynamic",
            };
            write!(f, "; {kind} {}({})", rel.name, rel.sorts.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyn_sorts_declare_manifestation() {
        let sig = Signature::new().with_sort("Dyn2");
        let rel = sig.relation("<<-2").unwrap();
        assert_eq!(rel.sorts, vec!["Stat", "Stat", "Dyn2"]);
        assert_eq!(rel.kind, RelKind::Dynamic);
        assert!(!sig.is_static("<<-2"));
    }

    #[test]
    fn relation_sorts_must_be_declared() {
        let mut sig = Signature::new();
        let err = sig
            .add_relation("R", &["Stat", "Color"], RelKind::Static)
            .unwrap_err();
        assert!(matches!(err, SignatureError::UnknownSort { .. }));
        sig.add_relation("R", &["Stat"], RelKind::Static).unwrap();
        assert_eq!(
            sig.add_relation("R", &["Stat"], RelKind::Static),
            Err(SignatureError::DuplicateRelation("R".into()))
        );
    }

    #[test]
    fn dyn_arity_parses_both_spellings() {
        assert_eq!(dyn_arity("Dyn1"), Some(1));
        assert_eq!(dyn_arity("Dyn_3"), Some(3));
        assert_eq!(dyn_arity("Dynamo"), None);
        assert_eq!(dyn_arity("Stat"), None);
    }
}
