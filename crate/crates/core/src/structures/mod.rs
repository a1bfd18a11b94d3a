//! Finite sorted structures and the structure-level relations between them.

mod format;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::eval::{eval, Assignment, EvalError, Single};
use crate::logic::{dyn_arity, manifest_rel, Formula, RelKind, Signature, STAT};

pub(crate) use format::{parse_stmt, parse_tuples, split_lines, BodyParser, Line, Stmt};
pub use format::{parse_structure, write_structure, StructureParseError};

/// Opaque element identifier; equality is identifier equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(Arc<str>);

impl Elem {
    pub fn new(name: &str) -> Self {
        Elem(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Elem {
    fn from(s: &str) -> Self {
        Elem::new(s)
    }
}

impl From<String> for Elem {
    fn from(s: String) -> Self {
        Elem(Arc::from(s))
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for Elem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

pub type Tuple = Vec<Elem>;

pub fn tuple(names: &[&str]) -> Tuple {
    names.iter().map(|n| Elem::new(n)).collect()
}

pub fn show_tuple(t: &[Elem]) -> String {
    let parts: Vec<&str> = t.iter().map(Elem::as_str).collect();
    format!("({})", parts.join(","))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructError {
    #[error("structures have different signatures")]
    SignatureMismatch,
    #[error("unknown sort {0}")]
    UnknownSort(String),
    #[error("unknown relation {0}")]
    UnknownRelation(String),
    #[error("tuple {tuple} does not fit {relation}")]
    BadTuple { relation: String, tuple: String },
    #[error("element {elem} of sort {sort} is not in the domain of the larger structure")]
    Domain { sort: String, elem: String },
    #[error("formula contains modal operators")]
    ModalInput,
    #[error("nothing to take the union of")]
    EmptyUnion,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

static EMPTY_DOMAIN: BTreeSet<Elem> = BTreeSet::new();
static EMPTY_REL: BTreeSet<Tuple> = BTreeSet::new();

/// A finite model of a relational sorted signature. Manifestation relations
/// `<<-n` are stored like any other relation.
#[derive(Clone, Debug)]
pub struct FiniteStructure {
    sig: Arc<Signature>,
    domains: BTreeMap<String, BTreeSet<Elem>>,
    rels: BTreeMap<String, BTreeSet<Tuple>>,
}

impl FiniteStructure {
    pub fn new(sig: Signature) -> Self {
        Self::with_signature(Arc::new(sig))
    }

    pub fn with_signature(sig: Arc<Signature>) -> Self {
        FiniteStructure {
            sig,
            domains: BTreeMap::new(),
            rels: BTreeMap::new(),
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn signature_arc(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn add_element(&mut self, sort: &str, name: impl Into<Elem>) -> Result<bool, StructError> {
        if !self.sig.has_sort(sort) {
            return Err(StructError::UnknownSort(sort.to_string()));
        }
        Ok(self
            .domains
            .entry(sort.to_string())
            .or_default()
            .insert(name.into()))
    }

    pub fn add_tuple(&mut self, rel: &str, t: Tuple) -> Result<bool, StructError> {
        let decl = self
            .sig
            .relation(rel)
            .ok_or_else(|| StructError::UnknownRelation(rel.to_string()))?;
        let fits = decl.arity() == t.len()
            && t.iter()
                .zip(&decl.sorts)
                .all(|(e, s)| self.domain(s).contains(e));
        if !fits {
            return Err(StructError::BadTuple {
                relation: rel.to_string(),
                tuple: show_tuple(&t),
            });
        }
        Ok(self.rels.entry(rel.to_string()).or_default().insert(t))
    }

    /// Builder form for literals in tests and presets.
    pub fn with_elements(mut self, sort: &str, names: &[&str]) -> Self {
        for n in names {
            self.add_element(sort, *n).expect("declared sort");
        }
        self
    }

    pub fn with_tuples(mut self, rel: &str, tuples: &[&[&str]]) -> Self {
        for t in tuples {
            self.add_tuple(rel, tuple(t))
                .expect("tuple within the domains");
        }
        self
    }

    pub fn domain(&self, sort: &str) -> &BTreeSet<Elem> {
        self.domains.get(sort).unwrap_or(&EMPTY_DOMAIN)
    }

    pub fn stat(&self) -> &BTreeSet<Elem> {
        self.domain(STAT)
    }

    pub fn relation(&self, rel: &str) -> &BTreeSet<Tuple> {
        self.rels.get(rel).unwrap_or(&EMPTY_REL)
    }

    pub fn holds(&self, rel: &str, args: &[Elem]) -> bool {
        self.rels.get(rel).is_some_and(|r| r.contains(args))
    }

    /// Sorts with a non-empty domain.
    pub fn populated_sorts(&self) -> impl Iterator<Item = &str> {
        self.domains
            .iter()
            .filter(|(_, d)| !d.is_empty())
            .map(|(s, _)| s.as_str())
    }

    /// Whether every component of `t` lies in the domain of the matching sort.
    pub fn contains_all(&self, sorts: &[String], t: &[Elem]) -> bool {
        sorts.len() == t.len() && t.iter().zip(sorts).all(|(e, s)| self.domain(s).contains(e))
    }

    /// Tuples `d` manifests as (the last column of `<<-n` equal to `d`).
    pub fn manifestations(&self, d: &Elem, n: usize) -> Vec<&[Elem]> {
        self.relation(&manifest_rel(n))
            .iter()
            .filter(|t| t.last() == Some(d))
            .map(|t| &t[..n])
            .collect()
    }

    /// Substructure induced on the given domains.
    pub fn induced(&self, domains: &BTreeMap<String, BTreeSet<Elem>>) -> FiniteStructure {
        let mut out = FiniteStructure::with_signature(self.sig.clone());
        for (sort, elems) in domains {
            let keep: BTreeSet<Elem> = elems
                .iter()
                .filter(|e| self.domain(sort).contains(*e))
                .cloned()
                .collect();
            out.domains.insert(sort.clone(), keep);
        }
        for (rel, tuples) in &self.rels {
            let decl = self.sig.relation(rel).expect("declared");
            let kept: BTreeSet<Tuple> = tuples
                .iter()
                .filter(|t| out.contains_all(&decl.sorts, t))
                .cloned()
                .collect();
            if !kept.is_empty() {
                out.rels.insert(rel.clone(), kept);
            }
        }
        out
    }

    /// Induced substructure keeping every non-`Stat` domain and the given `Stat` elements.
    pub fn induced_on_stat(&self, stat: &BTreeSet<Elem>) -> FiniteStructure {
        let mut doms = self.domains.clone();
        doms.insert(STAT.to_string(), stat.clone());
        self.induced(&doms)
    }

    /// All sorts with a domain entry (possibly empty), including declared ones.
    pub fn domain_map(&self) -> &BTreeMap<String, BTreeSet<Elem>> {
        &self.domains
    }

    pub fn relation_map(&self) -> &BTreeMap<String, BTreeSet<Tuple>> {
        &self.rels
    }

    /// Drop empty entries so that structurally equal structures compare equal.
    pub fn normalized(mut self) -> Self {
        self.domains.retain(|_, d| !d.is_empty());
        self.rels.retain(|_, r| !r.is_empty());
        self
    }

    /// Remove all tuples of `rel`.
    pub fn clear_relation(&mut self, rel: &str) {
        self.rels.remove(rel);
    }

    /// Replace the signature by a compatible extension.
    pub fn extend_signature(&mut self, sig: Arc<Signature>) {
        self.sig = sig;
    }
}

impl PartialEq for FiniteStructure {
    fn eq(&self, other: &Self) -> bool {
        fn nonempty<K: Ord, V>(m: &BTreeMap<K, BTreeSet<V>>) -> Vec<(&K, &BTreeSet<V>)> {
            m.iter().filter(|(_, v)| !v.is_empty()).collect()
        }
        (Arc::ptr_eq(&self.sig, &other.sig) || self.sig == other.sig)
            && nonempty(&self.domains) == nonempty(&other.domains)
            && nonempty(&self.rels) == nonempty(&other.rels)
    }
}

impl Eq for FiniteStructure {}

fn same_signature(u: &FiniteStructure, v: &FiniteStructure) -> Result<(), StructError> {
    if Arc::ptr_eq(&u.sig, &v.sig) || u.sig == v.sig {
        Ok(())
    } else {
        Err(StructError::SignatureMismatch)
    }
}

/// `u` is a `K`-substructure of `v`: domains included and each `R` in `K`
/// restricts exactly.
pub fn substructure_check(
    u: &FiniteStructure,
    v: &FiniteStructure,
    k: &BTreeSet<String>,
) -> Result<bool, StructError> {
    same_signature(u, v)?;
    for sort in u.sig.sorts() {
        if !u.domain(sort).is_subset(v.domain(sort)) {
            return Ok(false);
        }
    }
    for rel in k {
        let decl = u
            .sig
            .relation(rel)
            .ok_or_else(|| StructError::UnknownRelation(rel.to_string()))?;
        let restricted: BTreeSet<&Tuple> = v
            .relation(rel)
            .iter()
            .filter(|t| u.contains_all(&decl.sorts, t))
            .collect();
        let here: BTreeSet<&Tuple> = u.relation(rel).iter().collect();
        if restricted != here {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All assignments of `vars` over the domains of `u`, in lexicographic order.
pub fn assignments(u: &FiniteStructure, vars: &[crate::logic::Var]) -> Vec<Assignment> {
    let mut out = vec![Assignment::new()];
    for v in vars {
        let mut next = Vec::new();
        for a in &out {
            for e in u.domain(&v.sort) {
                let mut b = a.clone();
                b.insert(v.name.clone(), e.clone());
                next.push(b);
            }
        }
        out = next;
    }
    out
}

/// `u` is a `K`-elementary substructure of `v`: each formula in `K` agrees on
/// all tuples from `u`.
pub fn elementary_check(
    u: &FiniteStructure,
    v: &FiniteStructure,
    k: &[Formula],
) -> Result<bool, StructError> {
    same_signature(u, v)?;
    for sort in u.sig.sorts() {
        if let Some(e) = u.domain(sort).difference(v.domain(sort)).next() {
            return Err(StructError::Domain {
                sort: sort.to_string(),
                elem: e.to_string(),
            });
        }
    }
    for phi in k {
        if !phi.is_modal_free() {
            return Err(StructError::ModalInput);
        }
        for asg in assignments(u, &phi.free_vars()) {
            if eval(&Single(u), 0, phi, &asg)? != eval(&Single(v), 0, phi, &asg)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Per-sort union of domains and per-relation union of interpretations.
pub fn union_structure<'a>(
    w: impl IntoIterator<Item = &'a FiniteStructure>,
) -> Result<FiniteStructure, StructError> {
    let mut iter = w.into_iter();
    let first = iter.next().ok_or(StructError::EmptyUnion)?;
    let mut out = first.clone();
    for u in iter {
        same_signature(&out, u)?;
        for (sort, d) in &u.domains {
            out.domains
                .entry(sort.clone())
                .or_default()
                .extend(d.iter().cloned());
        }
        for (rel, r) in &u.rels {
            out.rels
                .entry(rel.clone())
                .or_default()
                .extend(r.iter().cloned());
        }
    }
    Ok(out)
}

/// `{ a : u |= phi(a) }` over the free variables of `phi` in order of first occurrence.
pub fn interpret(phi: &Formula, u: &FiniteStructure) -> Result<BTreeSet<Tuple>, StructError> {
    if !phi.is_modal_free() {
        return Err(StructError::ModalInput);
    }
    let vars = phi.free_vars();
    let mut out = BTreeSet::new();
    for asg in assignments(u, &vars) {
        if eval(&Single(u), 0, phi, &asg)? {
            out.insert(vars.iter().map(|v| asg[&v.name].clone()).collect());
        }
    }
    Ok(out)
}

/// Restrict every `Stat` quantifier to the unary marker `nu`.
pub fn relativize(phi: &Formula, nu: &str) -> Formula {
    let r = |f: &Formula| relativize(f, nu);
    match phi {
        Formula::Exists(v, a) if v.sort == STAT => Formula::exists(
            v.clone(),
            Formula::and(Formula::atom(nu, std::slice::from_ref(v)), r(a)),
        ),
        Formula::Forall(v, a) if v.sort == STAT => Formula::forall(
            v.clone(),
            Formula::implies(Formula::atom(nu, std::slice::from_ref(v)), r(a)),
        ),
        Formula::Exists(v, a) => Formula::exists(v.clone(), r(a)),
        Formula::Forall(v, a) => Formula::forall(v.clone(), r(a)),
        Formula::Not(a) => Formula::not(r(a)),
        Formula::Dia(a) => Formula::dia(r(a)),
        Formula::Box(a) => Formula::boxed(r(a)),
        Formula::And(a, b) => Formula::and(r(a), r(b)),
        Formula::Or(a, b) => Formula::or(r(a), r(b)),
        Formula::Implies(a, b) => Formula::implies(r(a), r(b)),
        Formula::Iff(a, b) => Formula::iff(r(a), r(b)),
        _ => phi.clone(),
    }
}

/// A structure over a single `Stat` domain with one static binary relation,
/// the usual test fixture for orders.
pub fn linear_order(names: &[&str], rel: &str) -> FiniteStructure {
    let sig = Signature::new().with_relation(rel, &[STAT, STAT], RelKind::Static);
    let mut u = FiniteStructure::new(sig).with_elements(STAT, names);
    for (i, a) in names.iter().enumerate() {
        for b in &names[i..] {
            u.add_tuple(rel, tuple(&[a, b])).expect("in domain");
        }
    }
    u
}

/// Whether the signature declares a `Dyn` sort with elements in `u`.
pub fn has_dynamic_elements(u: &FiniteStructure) -> bool {
    u.populated_sorts().any(|s| dyn_arity(s).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn set(names: &[&str]) -> BTreeSet<Elem> {
        names.iter().map(|n| Elem::new(n)).collect()
    }

    #[test]
    fn substructure_reflexive_and_restriction_clause() {
        let v = linear_order(&["0", "1"], "le");
        let k = BTreeSet::from(["le".to_string()]);
        assert!(substructure_check(&v, &v, &k).unwrap());
        let bottom = v.induced_on_stat(&set(&["0"]));
        assert!(substructure_check(&bottom, &v, &k).unwrap());
        let mut broken = bottom.clone();
        broken.clear_relation("le");
        assert!(!substructure_check(&broken, &v, &k).unwrap());
        assert!(substructure_check(&broken, &v, &BTreeSet::new()).unwrap());
    }

    #[test]
    fn elementary_check_detects_lost_upper_bound() {
        let v = linear_order(&["a", "b", "c"], "le");
        let u = v.induced_on_stat(&set(&["a"]));
        let phi = parse_formula("exists y. (le(x, y) and not x = y)", v.signature()).unwrap();
        assert!(!elementary_check(&u, &v, &[phi.clone()]).unwrap());
        assert!(elementary_check(&u, &v, &[]).unwrap());
        assert!(elementary_check(&v, &v, &[phi]).unwrap());
    }

    #[test]
    fn interpret_examples() {
        let u = linear_order(&["a", "b", "c"], "le");
        let sig = u.signature().clone();
        let all = interpret(&parse_formula("x = x", &sig).unwrap(), &u).unwrap();
        assert_eq!(all.len(), 3);
        let max = parse_formula("forall y. le(y, x)", &sig).unwrap();
        assert_eq!(
            interpret(&max, &u).unwrap(),
            BTreeSet::from([tuple(&["c"])])
        );
        let none = parse_formula("not x = x", &sig).unwrap();
        assert!(interpret(&none, &u).unwrap().is_empty());
        let modal = parse_formula("dia x = x", &sig).unwrap();
        assert_eq!(interpret(&modal, &u), Err(StructError::ModalInput));
    }

    #[test]
    fn empty_domain_quantifiers() {
        let u = linear_order(&[], "le");
        let sig = u.signature().clone();
        let ex = parse_formula("exists x. x = x", &sig).unwrap();
        let all = parse_formula("forall x. not x = x", &sig).unwrap();
        assert!(!eval(&Single(&u), 0, &ex, &Assignment::new()).unwrap());
        assert!(eval(&Single(&u), 0, &all, &Assignment::new()).unwrap());
    }

    #[test]
    fn union_of_disjoint_pieces() {
        let u = linear_order(&["a", "b"], "le");
        let left = u.induced_on_stat(&set(&["a"]));
        let right = u.induced_on_stat(&set(&["b"]));
        let joined = union_structure([&left, &right]).unwrap();
        assert_eq!(joined.stat(), u.stat());
        assert_eq!(joined.relation("le").len(), 2);
        assert_eq!(union_structure([&u]).unwrap(), u);
    }

    #[test]
    fn relativize_examples() {
        let sig = Signature::new()
            .with_relation("R", &[STAT], RelKind::Static)
            .with_relation("S", &[STAT, STAT], RelKind::Static)
            .with_relation("nu", &[STAT], RelKind::Static);
        let p = |s: &str| parse_formula(s, &sig).unwrap();
        assert_eq!(
            relativize(&p("exists x. R(x)"), "nu"),
            p("exists x. (nu(x) and R(x))")
        );
        assert_eq!(relativize(&p("R(a)"), "nu"), p("R(a)"));
        assert_eq!(
            relativize(&p("forall x. exists y. S(x, y)"), "nu"),
            p("forall x. (nu(x) -> exists y. (nu(y) and S(x, y)))")
        );
    }
}
