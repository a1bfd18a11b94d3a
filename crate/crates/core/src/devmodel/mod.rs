//! Development models: a directed frame of states, each carrying a finite
//! structure, monotone on static predicates.

mod format;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::eval::Kripke;
use crate::logic::{dyn_arity, dyn_sort, manifest_rel, Signature, STAT};
use crate::structures::{show_tuple, union_structure, Elem, FiniteStructure, Tuple};

pub use format::{parse_dev_model, write_dev_model, DevParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DevError {
    #[error("{states} states but {structures} structures")]
    CountMismatch { states: usize, structures: usize },
    #[error("state {0} has a different signature")]
    SignatureMismatch(String),
    #[error("fin_dev needs a structure with only Stat populated; {0} is populated")]
    DynSortPresent(String),
    #[error("too many states: {0}")]
    TooLarge(usize),
    #[error("frame is not a valid development frame: {0}")]
    FrameInvalid(String),
    #[error("dynamic tuple {index} is not defined at state {state} or leaves its Stat domain")]
    PartialTuple { index: usize, state: String },
    #[error("{elem} does not manifest as exactly one tuple at state {state}")]
    NotManifesting { elem: String, state: String },
    #[error("edge mentions unknown state {0}")]
    UnknownState(String),
}

/// States with an explicit accessibility relation. Reflexive pairs are
/// added on construction; nothing else is closed off.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    names: Vec<String>,
    le: Vec<Vec<bool>>,
    above: Vec<Vec<usize>>,
}

impl Frame {
    pub fn new(names: Vec<String>, edges: &[(usize, usize)]) -> Self {
        let n = names.len();
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in edges {
            le[a][b] = true;
        }
        let above = le
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        Frame { names, le, above }
    }

    /// Frame from a predicate, evaluated on every pair.
    pub fn from_order(names: Vec<String>, le: impl Fn(usize, usize) -> bool) -> Self {
        let n = names.len();
        let mut edges = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if le(a, b) {
                    edges.push((a, b));
                }
            }
        }
        Frame::new(names, &edges)
    }

    /// The chain `0 <= 1 <= .. <= n-1`.
    pub fn chain(n: usize) -> Self {
        Frame::from_order((0..n).map(|i| format!("s{i}")).collect(), |a, b| a <= b)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, s: usize) -> &str {
        &self.names[s]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.le[a][b]
    }

    pub fn above(&self, s: usize) -> &[usize] {
        &self.above[s]
    }

    /// Violations of reflexivity, transitivity and directedness, and
    /// antisymmetry warnings.
    pub fn check(&self) -> (Vec<Violation>, Vec<Warning>) {
        let n = self.len();
        let mut v = Vec::new();
        let mut w = Vec::new();
        for a in 0..n {
            if !self.le[a][a] {
                v.push(Violation::NotReflexive {
                    state: self.names[a].clone(),
                });
            }
        }
        'trans: for a in 0..n {
            for &b in &self.above[a] {
                for &c in &self.above[b] {
                    if !self.le[a][c] {
                        v.push(Violation::NotTransitive {
                            a: self.names[a].clone(),
                            b: self.names[b].clone(),
                            c: self.names[c].clone(),
                        });
                        break 'trans;
                    }
                }
            }
        }
        'dir: for a in 0..n {
            for b in a + 1..n {
                if !(0..n).any(|t| self.le[a][t] && self.le[b][t]) {
                    v.push(Violation::NotDirected {
                        a: self.names[a].clone(),
                        b: self.names[b].clone(),
                    });
                    break 'dir;
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if self.le[a][b] && self.le[b][a] {
                    w.push(Warning::NotAntisymmetric {
                        a: self.names[a].clone(),
                        b: self.names[b].clone(),
                    });
                }
            }
        }
        (v, w)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NotReflexive {
        state: String,
    },
    NotTransitive {
        a: String,
        b: String,
        c: String,
    },
    NotDirected {
        a: String,
        b: String,
    },
    Manifestation {
        state: String,
        elem: String,
        sort: String,
        tuples: Vec<String>,
    },
    DomainShrinks {
        lower: String,
        upper: String,
        sort: String,
        elem: String,
    },
    StaticRelation {
        lower: String,
        upper: String,
        relation: String,
        tuple: String,
        at_lower: bool,
    },
    NonStatSortVaries {
        sort: String,
        a: String,
        b: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotReflexive { state } => write!(f, "(a) {state} is not related to itself"),
            Violation::NotTransitive { a, b, c } => {
                write!(f, "(a) {a} <= {b} <= {c} but not {a} <= {c}")
            }
            Violation::NotDirected { a, b } => {
                write!(f, "(a) {a} and {b} have no common upper bound")
            }
            Violation::Manifestation {
                state,
                elem,
                sort,
                tuples,
            } => write!(
                f,
                "(b) {elem}:{sort} manifests as {} tuples at {state} [{}]",
                tuples.len(),
                tuples.join(" ")
            ),
            Violation::DomainShrinks {
                lower,
                upper,
                sort,
                elem,
            } => {
                write!(f, "(c) {elem}:{sort} is in {lower} but not in {upper} although {lower} <= {upper}")
            }
            Violation::StaticRelation {
                lower,
                upper,
                relation,
                tuple,
                at_lower,
            } => {
                if *at_lower {
                    write!(
                        f,
                        "(c) {relation}{tuple} holds at {lower} but not at {upper}"
                    )
                } else {
                    write!(f, "(c) {relation}{tuple} holds at {upper} but not at {lower} where the tuple exists")
                }
            }
            Violation::NonStatSortVaries { sort, a, b } => {
                write!(f, "sort {sort} differs between {a} and {b}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    NotAntisymmetric { a: String, b: String },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::NotAntisymmetric { a, b } => write!(f, "{a} and {b} are mutually accessible"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Warning>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DevelopmentModel {
    frame: Frame,
    sig: Arc<Signature>,
    states: Vec<Arc<FiniteStructure>>,
}

impl Kripke for DevelopmentModel {
    fn state_count(&self) -> usize {
        self.frame.len()
    }

    fn structure(&self, s: usize) -> &FiniteStructure {
        &self.states[s]
    }

    fn above(&self, s: usize) -> &[usize] {
        self.frame.above(s)
    }
}

impl DevelopmentModel {
    pub fn new(frame: Frame, structures: Vec<Arc<FiniteStructure>>) -> Result<Self, DevError> {
        if frame.len() != structures.len() {
            return Err(DevError::CountMismatch {
                states: frame.len(),
                structures: structures.len(),
            });
        }
        let sig = match structures.first() {
            Some(u) => u.signature_arc().clone(),
            None => Arc::new(Signature::new()),
        };
        for (i, u) in structures.iter().enumerate() {
            if u.signature() != &*sig {
                return Err(DevError::SignatureMismatch(frame.name(i).to_string()));
            }
        }
        Ok(DevelopmentModel {
            frame,
            sig,
            states: structures,
        })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn len(&self) -> usize {
        self.frame.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frame.is_empty()
    }

    pub fn state_name(&self, s: usize) -> &str {
        self.frame.name(s)
    }

    pub fn structures(&self) -> &[Arc<FiniteStructure>] {
        &self.states
    }

    pub fn validate(&self) -> ValidationReport {
        let (mut violations, warnings) = self.frame.check();
        let n = self.len();
        let name = |s: usize| self.frame.name(s).to_string();
        // (b): unique manifestation
        for s in 0..n {
            let u = &self.states[s];
            for sort in self.sig.sorts() {
                let Some(k) = dyn_arity(sort) else { continue };
                for d in u.domain(sort) {
                    let ms = u.manifestations(d, k);
                    if ms.len() != 1 {
                        violations.push(Violation::Manifestation {
                            state: name(s),
                            elem: d.to_string(),
                            sort: sort.to_string(),
                            tuples: ms.iter().map(|t| show_tuple(t)).collect(),
                        });
                    }
                }
            }
        }
        // constant non-Stat sorts
        for sort in self.sig.sorts().filter(|s| *s != STAT) {
            for s in 1..n {
                if self.states[s].domain(sort) != self.states[0].domain(sort) {
                    violations.push(Violation::NonStatSortVaries {
                        sort: sort.to_string(),
                        a: name(0),
                        b: name(s),
                    });
                    break;
                }
            }
        }
        // (c): static-substructure along every explicit edge
        let statics: Vec<_> = self
            .sig
            .relations()
            .filter(|r| self.sig.is_static(&r.name))
            .collect();
        for s in 0..n {
            for &t in self.frame.above(s) {
                if s == t {
                    continue;
                }
                let (lo, hi) = (&self.states[s], &self.states[t]);
                for sort in self.sig.sorts() {
                    if let Some(e) = lo.domain(sort).difference(hi.domain(sort)).next() {
                        violations.push(Violation::DomainShrinks {
                            lower: name(s),
                            upper: name(t),
                            sort: sort.to_string(),
                            elem: e.to_string(),
                        });
                    }
                }
                for decl in &statics {
                    if let Some(tp) = lo
                        .relation(&decl.name)
                        .iter()
                        .find(|tp| !hi.holds(&decl.name, tp))
                    {
                        violations.push(Violation::StaticRelation {
                            lower: name(s),
                            upper: name(t),
                            relation: decl.name.clone(),
                            tuple: show_tuple(tp),
                            at_lower: true,
                        });
                    }
                    if let Some(tp) = hi
                        .relation(&decl.name)
                        .iter()
                        .find(|tp| lo.contains_all(&decl.sorts, tp) && !lo.holds(&decl.name, tp))
                    {
                        violations.push(Violation::StaticRelation {
                            lower: name(s),
                            upper: name(t),
                            relation: decl.name.clone(),
                            tuple: show_tuple(tp),
                            at_lower: false,
                        });
                    }
                }
            }
        }
        ValidationReport {
            violations,
            warnings,
        }
    }

    /// The union structure of all states.
    pub fn union(&self) -> FiniteStructure {
        union_of(self)
    }

    /// States whose structure contains `a` (sorts given per component).
    /// The flag is false when `a` is not in the union at all.
    pub fn states_containing(&self, sorts: &[String], a: &[Elem]) -> (Vec<usize>, bool) {
        let states: Vec<usize> = (0..self.len())
            .filter(|&s| self.states[s].contains_all(sorts, a))
            .collect();
        let present = !states.is_empty();
        (states, present)
    }

    pub fn is_up_set(&self, set: &[usize]) -> bool {
        let member: BTreeSet<usize> = set.iter().copied().collect();
        set.iter()
            .all(|&s| self.frame.above(s).iter().all(|t| member.contains(t)))
    }

    /// The model with its frame replaced (structures kept by index).
    pub fn with_frame(&self, frame: Frame) -> Result<Self, DevError> {
        DevelopmentModel::new(frame, self.states.clone())
    }
}

pub fn union_of(m: &DevelopmentModel) -> FiniteStructure {
    union_structure(m.states.iter().map(|s| &**s))
        .unwrap_or_else(|_| FiniteStructure::with_signature(m.sig.clone()))
}

/// Name of a subset state, e.g. `{a,b}`.
pub fn subset_name(elems: &BTreeSet<Elem>) -> String {
    let parts: Vec<&str> = elems.iter().map(Elem::as_str).collect();
    format!("{{{}}}", parts.join(","))
}

/// Maximum `Stat` size accepted by [`fin_dev`].
pub const FIN_DEV_LIMIT: usize = 16;

/// All subsets of `u`'s `Stat` domain ordered by inclusion, each carrying the
/// induced substructure. Subsets are listed in order of their bitmask.
pub fn fin_dev(u: &FiniteStructure) -> Result<DevelopmentModel, DevError> {
    if let Some(s) = u.populated_sorts().find(|s| *s != STAT) {
        return Err(DevError::DynSortPresent(s.to_string()));
    }
    let elems: Vec<Elem> = u.stat().iter().cloned().collect();
    if elems.len() > FIN_DEV_LIMIT {
        return Err(DevError::TooLarge(1 << elems.len().min(63)));
    }
    let count = 1usize << elems.len();
    let subsets: Vec<BTreeSet<Elem>> = (0..count)
        .map(|mask| {
            elems
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, e)| e.clone())
                .collect()
        })
        .collect();
    let names = subsets.iter().map(subset_name).collect();
    let frame = Frame::from_order(names, |a, b| a & b == a);
    let structures = subsets
        .iter()
        .map(|s| Arc::new(u.induced_on_stat(s)))
        .collect();
    DevelopmentModel::new(frame, structures)
}

/// Every state carries `u`.
pub fn simple_dev(u: &FiniteStructure, frame: Frame) -> Result<DevelopmentModel, DevError> {
    let (v, _) = frame.check();
    if let Some(first) = v.first() {
        return Err(DevError::FrameInvalid(first.to_string()));
    }
    let shared = Arc::new(u.clone());
    let n = frame.len();
    DevelopmentModel::new(frame, vec![shared; n])
}

/// A meta-level function from states to `Stat^n` tuples.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FunctionalDynamicTuple {
    pub arity: usize,
    pub values: Vec<Tuple>,
}

impl FunctionalDynamicTuple {
    pub fn constant(m: &DevelopmentModel, t: Tuple) -> Self {
        FunctionalDynamicTuple {
            arity: t.len(),
            values: vec![t; m.len()],
        }
    }
}

fn fresh_name(taken: &BTreeSet<Elem>, base: &str, i: usize) -> Elem {
    let mut k = 0;
    loop {
        let cand = if k == 0 {
            format!("{base}{i}")
        } else {
            format!("{base}{i}_{k}")
        };
        let e = Elem::from(cand);
        if !taken.contains(&e) {
            return e;
        }
        k += 1;
    }
}

/// The least development model extending `m` by a fresh `Dyn_n` element for
/// each tuple in `ds`. Returns the model and the fresh elements in order.
pub fn extend_by_dynamic(
    m: &DevelopmentModel,
    ds: &[FunctionalDynamicTuple],
) -> Result<(DevelopmentModel, Vec<Elem>), DevError> {
    if ds.is_empty() {
        return Ok((m.clone(), Vec::new()));
    }
    for (i, d) in ds.iter().enumerate() {
        if d.values.len() != m.len() {
            let state = m
                .frame
                .names
                .get(d.values.len())
                .cloned()
                .unwrap_or_default();
            return Err(DevError::PartialTuple { index: i, state });
        }
        for (s, t) in d.values.iter().enumerate() {
            if t.len() != d.arity || !t.iter().all(|e| m.states[s].stat().contains(e)) {
                return Err(DevError::PartialTuple {
                    index: i,
                    state: m.state_name(s).to_string(),
                });
            }
        }
    }
    let mut sig = (*m.sig).clone();
    for d in ds {
        sig.add_sort(&dyn_sort(d.arity))
            .expect("Dyn sort names are valid");
    }
    let sig = Arc::new(sig);
    let mut taken: BTreeSet<Elem> = BTreeSet::new();
    for u in &m.states {
        for d in u.domain_map().values() {
            taken.extend(d.iter().cloned());
        }
    }
    let mut fresh = Vec::new();
    for i in 0..ds.len() {
        let e = fresh_name(&taken, "delta", i);
        taken.insert(e.clone());
        fresh.push(e);
    }
    let mut states = Vec::with_capacity(m.len());
    for s in 0..m.len() {
        let mut u = (*m.states[s]).clone();
        u.extend_signature(sig.clone());
        for (d, e) in ds.iter().zip(&fresh) {
            u.add_element(&dyn_sort(d.arity), e.clone())
                .expect("declared");
            let mut t = d.values[s].clone();
            t.push(e.clone());
            u.add_tuple(&manifest_rel(d.arity), t)
                .expect("within domains");
        }
        states.push(Arc::new(u));
    }
    Ok((DevelopmentModel::new(m.frame.clone(), states)?, fresh))
}

/// `D_delta`: the tuple `delta` manifests as at each state.
pub fn d_delta(
    m: &DevelopmentModel,
    delta: &Elem,
    n: usize,
) -> Result<FunctionalDynamicTuple, DevError> {
    let mut values = Vec::with_capacity(m.len());
    for s in 0..m.len() {
        let ms = m.states[s].manifestations(delta, n);
        if ms.len() != 1 {
            return Err(DevError::NotManifesting {
                elem: delta.to_string(),
                state: m.state_name(s).to_string(),
            });
        }
        values.push(ms[0].to_vec());
    }
    Ok(FunctionalDynamicTuple { arity: n, values })
}

/// Elements of each sort across all states.
pub fn universe(m: &DevelopmentModel) -> BTreeMap<String, BTreeSet<Elem>> {
    let mut out: BTreeMap<String, BTreeSet<Elem>> = BTreeMap::new();
    for u in &m.states {
        for (sort, d) in u.domain_map() {
            out.entry(sort.clone())
                .or_default()
                .extend(d.iter().cloned());
        }
    }
    out
}
