//! Revision semantics of truth over finite sentence networks.
//!
//! A network names finitely many sentences whose bodies are boolean
//! combinations of `T(name)` atoms and fixed base facts. The revision
//! operator [`gamma`] maps a hypothesis (the extension of `T`) to the set of
//! names whose bodies come out true under it. Iterating it from any start is
//! eventually periodic, so each run is a [`Lasso`] with `T` dynamic.

mod format;
pub mod sweeps;
mod uct;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::eval::Assignment;
use crate::logic::{Formula, RelKind, Signature, STAT};
use crate::omega::{detect_lasso, lasso_satisfies, Lasso, OmegaError};
use crate::structures::{Elem, FiniteStructure};

pub use format::{parse_network, write_network, NetworkParseError};
pub use uct::{
    battery, image_of_gamma, image_tabulation, uct_fragment_check, BatteryViolation, DepthFragment,
    FragNode, Tabulation, TabulationRow, UctReport, UctViolation,
};

/// Name of the dynamic truth predicate in [`truth_dev_model`].
pub const TRUTH: &str = "T";

/// Networks are capped so hypotheses fit a `u64` and the lasso bound
/// `2^n + 1` fits a `usize`.
pub const MAX_NAMES: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RevisionError {
    #[error("sentence {name} refers to undeclared {what} {target}")]
    Undeclared {
        name: String,
        what: &'static str,
        target: String,
    },
    #[error("{0} is declared twice")]
    Duplicate(String),
    #[error("{0} cannot be used as a sentence or base name")]
    Reserved(String),
    #[error("network has {found} sentences, at most {cap} supported")]
    TooLarge { found: usize, cap: usize },
    #[error("hypothesis mentions unknown sentence {0}")]
    UnknownSentence(String),
    #[error(transparent)]
    Omega(#[from] OmegaError),
}

/// Boolean sentence bodies. `T(i)` reads the hypothesis at name `i`, `Base(i)`
/// the fixed base valuation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Body {
    Const(bool),
    T(usize),
    Base(usize),
    Not(Box<Body>),
    And(Box<Body>, Box<Body>),
    Or(Box<Body>, Box<Body>),
    Implies(Box<Body>, Box<Body>),
    Iff(Box<Body>, Box<Body>),
}

impl Body {
    pub fn eval(&self, hyp: Hypothesis, base: &[bool]) -> bool {
        match self {
            Body::Const(b) => *b,
            Body::T(i) => hyp.contains(*i),
            Body::Base(i) => base[*i],
            Body::Not(a) => !a.eval(hyp, base),
            Body::And(a, b) => a.eval(hyp, base) && b.eval(hyp, base),
            Body::Or(a, b) => a.eval(hyp, base) || b.eval(hyp, base),
            Body::Implies(a, b) => !a.eval(hyp, base) || b.eval(hyp, base),
            Body::Iff(a, b) => a.eval(hyp, base) == b.eval(hyp, base),
        }
    }

    /// Names read through `T`, as a bitmask.
    pub fn t_support(&self) -> u64 {
        match self {
            Body::Const(_) | Body::Base(_) => 0,
            Body::T(i) => 1 << i,
            Body::Not(a) => a.t_support(),
            Body::And(a, b) | Body::Or(a, b) | Body::Implies(a, b) | Body::Iff(a, b) => {
                a.t_support() | b.t_support()
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Body::Const(_) | Body::T(_) | Body::Base(_) => 0,
            Body::Not(a) => 1 + a.depth(),
            Body::And(a, b) | Body::Or(a, b) | Body::Implies(a, b) | Body::Iff(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }
}

/// A subset of the network's names, as a bitmask over declaration order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Hypothesis(pub u64);

impl Hypothesis {
    pub fn empty() -> Self {
        Hypothesis(0)
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Self {
        Hypothesis(self.0 | 1 << i)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.contains(i))
    }

    pub fn show(self, net: &SentenceNetwork) -> String {
        let names: Vec<&str> = self.iter().map(|i| net.names[i].as_str()).collect();
        format!("{{{}}}", names.join(", "))
    }
}

/// Self-referential sentences over fixed base facts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SentenceNetwork {
    names: Vec<String>,
    bodies: Vec<Body>,
    base_names: Vec<String>,
    base: Vec<bool>,
}

fn check_ident(s: &str) -> Result<(), RevisionError> {
    if s == TRUTH
        || crate::logic::is_keyword(s)
        || matches!(s, "true" | "false" | "implies" | "iff")
    {
        return Err(RevisionError::Reserved(s.to_string()));
    }
    Ok(())
}

impl SentenceNetwork {
    pub fn new(
        names: Vec<String>,
        bodies: Vec<Body>,
        base_names: Vec<String>,
        base: Vec<bool>,
    ) -> Result<Self, RevisionError> {
        assert_eq!(names.len(), bodies.len(), "one body per name");
        assert_eq!(base_names.len(), base.len(), "one value per base atom");
        if names.len() > MAX_NAMES {
            return Err(RevisionError::TooLarge {
                found: names.len(),
                cap: MAX_NAMES,
            });
        }
        let mut seen = std::collections::BTreeSet::new();
        for n in names.iter().chain(&base_names) {
            check_ident(n)?;
            if !seen.insert(n) {
                return Err(RevisionError::Duplicate(n.clone()));
            }
        }
        for (name, body) in names.iter().zip(&bodies) {
            let mut bad = None;
            visit(body, &mut |b| match b {
                Body::T(i) if *i >= names.len() => bad = Some(("sentence", format!("#{i}"))),
                Body::Base(i) if *i >= base.len() => bad = Some(("base atom", format!("#{i}"))),
                _ => {}
            });
            if let Some((what, target)) = bad {
                return Err(RevisionError::Undeclared {
                    name: name.clone(),
                    what,
                    target,
                });
            }
        }
        Ok(SentenceNetwork {
            names,
            bodies,
            base_names,
            base,
        })
    }

    /// `{lambda: not T(lambda)}`.
    pub fn liar() -> Self {
        Self::new(
            vec!["lambda".into()],
            vec![Body::Not(Box::new(Body::T(0)))],
            vec![],
            vec![],
        )
        .unwrap()
    }

    /// `{tau: T(tau)}`.
    pub fn truth_teller() -> Self {
        Self::new(vec!["tau".into()], vec![Body::T(0)], vec![], vec![]).unwrap()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn bodies(&self) -> &[Body] {
        &self.bodies
    }

    pub fn base_names(&self) -> &[String] {
        &self.base_names
    }

    pub fn base(&self) -> &[bool] {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn hypothesis(&self, names: &[&str]) -> Result<Hypothesis, RevisionError> {
        names.iter().try_fold(Hypothesis::empty(), |h, n| {
            self.index_of(n)
                .map(|i| h.with(i))
                .ok_or_else(|| RevisionError::UnknownSentence(n.to_string()))
        })
    }

    /// Every hypothesis, in bitmask order.
    pub fn all_hypotheses(&self) -> impl Iterator<Item = Hypothesis> {
        (0..1u64 << self.len()).map(Hypothesis)
    }
}

fn visit(b: &Body, f: &mut impl FnMut(&Body)) {
    f(b);
    match b {
        Body::Const(_) | Body::T(_) | Body::Base(_) => {}
        Body::Not(a) => visit(a, f),
        Body::And(a, c) | Body::Or(a, c) | Body::Implies(a, c) | Body::Iff(a, c) => {
            visit(a, f);
            visit(c, f);
        }
    }
}

/// One revision step.
pub fn gamma(net: &SentenceNetwork, p: Hypothesis) -> Hypothesis {
    net.bodies
        .iter()
        .enumerate()
        .filter(|(_, b)| b.eval(p, &net.base))
        .fold(Hypothesis::empty(), |h, (i, _)| h.with(i))
}

/// The revision sequence from `p0`: `hyps[n]` for `n < mu + pi`, periodic
/// afterwards.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RevisionSequence {
    pub mu: usize,
    pub pi: usize,
    pub hyps: Vec<Hypothesis>,
}

impl RevisionSequence {
    pub fn at(&self, n: usize) -> Hypothesis {
        if n < self.mu {
            self.hyps[n]
        } else {
            self.hyps[self.mu + (n - self.mu) % self.pi]
        }
    }
}

pub fn revision_sequence(net: &SentenceNetwork, p0: Hypothesis) -> RevisionSequence {
    let limit = (1usize << net.len()) + 1;
    let (mu, pi, hyps) = detect_lasso(p0, |p| gamma(net, *p), limit)
        .expect("pigeonhole bounds every revision sequence");
    RevisionSequence { mu, pi, hyps }
}

/// Signature of the truth model: `T(Stat)` dynamic and one static nullary
/// relation per base atom.
pub fn truth_signature(net: &SentenceNetwork) -> Signature {
    let mut sig = Signature::new().with_relation(TRUTH, &[STAT], RelKind::Dynamic);
    for b in &net.base_names {
        sig = sig.with_relation(b, &[], RelKind::Static);
    }
    sig
}

fn truth_structure(net: &SentenceNetwork, sig: &Arc<Signature>, p: Hypothesis) -> FiniteStructure {
    let mut u = FiniteStructure::with_signature(sig.clone());
    for n in &net.names {
        u.add_element(STAT, n.as_str()).expect("Stat is declared");
    }
    for (b, v) in net.base_names.iter().zip(&net.base) {
        if *v {
            u.add_tuple(b, vec![]).expect("base atoms are declared");
        }
    }
    for i in p.iter() {
        u.add_tuple(TRUTH, vec![Elem::new(&net.names[i])])
            .expect("T is declared");
    }
    u
}

/// The revision run from `p0` as a development model over the ω-frame:
/// state `n` carries the base facts and `T = P_n`.
pub fn truth_dev_model(net: &SentenceNetwork, p0: Hypothesis) -> Result<Lasso, RevisionError> {
    let seq = revision_sequence(net, p0);
    lasso_of(net, &seq)
}

fn lasso_of(net: &SentenceNetwork, seq: &RevisionSequence) -> Result<Lasso, RevisionError> {
    let sig = Arc::new(truth_signature(net));
    let structs = seq
        .hyps
        .iter()
        .map(|&p| Arc::new(truth_structure(net, &sig, p)))
        .collect();
    Ok(Lasso::new(seq.mu, seq.pi, structs)?)
}

/// Structures of the run from `p0` obtained by applying [`gamma`] `len`
/// times directly, without lasso detection.
pub fn iterate_structures(
    net: &SentenceNetwork,
    p0: Hypothesis,
    len: usize,
) -> Vec<Arc<FiniteStructure>> {
    let sig = Arc::new(truth_signature(net));
    let mut p = p0;
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(Arc::new(truth_structure(net, &sig, p)));
        p = gamma(net, p);
    }
    out
}

/// Binds each free variable to the sentence of the same name.
pub fn bind_sentences(net: &SentenceNetwork, phi: &Formula) -> Result<Assignment, RevisionError> {
    let mut asg = Assignment::new();
    for v in phi.free_vars() {
        if net.index_of(&v.name).is_none() || v.sort != STAT {
            return Err(RevisionError::UnknownSentence(v.name));
        }
        asg.insert(v.name.clone(), Elem::new(&v.name));
    }
    Ok(asg)
}

#[derive(Clone, Debug, Serialize)]
pub struct RootRow {
    pub p0: String,
    pub mu: usize,
    pub pi: usize,
    /// Per formula: does `box phi` hold at the root.
    pub boxed: Vec<bool>,
}

/// One isolated ω-run per starting hypothesis.
#[derive(Clone, Debug, Serialize)]
pub struct MultiRootReport {
    pub formulas: Vec<String>,
    pub roots: Vec<RootRow>,
}

impl MultiRootReport {
    /// Every root satisfies `box phi_i` or `box phi_j`, and each alternative
    /// is realized at some root.
    pub fn dichotomy(&self, i: usize, j: usize) -> bool {
        self.roots.iter().all(|r| r.boxed[i] || r.boxed[j])
            && self.roots.iter().any(|r| r.boxed[i])
            && self.roots.iter().any(|r| r.boxed[j])
    }

    /// Every root satisfies `box phi_i`.
    pub fn everywhere(&self, i: usize) -> bool {
        self.roots.iter().all(|r| r.boxed[i])
    }
}

pub fn multi_root(
    net: &SentenceNetwork,
    formulas: &[Formula],
) -> Result<MultiRootReport, RevisionError> {
    let asgs = formulas
        .iter()
        .map(|f| bind_sentences(net, f))
        .collect::<Result<Vec<_>, _>>()?;
    let roots: Vec<Hypothesis> = net.all_hypotheses().collect();
    let roots = roots
        .par_iter()
        .map(|&p0| {
            let seq = revision_sequence(net, p0);
            let l = lasso_of(net, &seq)?;
            let boxed = formulas
                .iter()
                .zip(&asgs)
                .map(|(f, a)| lasso_satisfies(&l, 0, &Formula::boxed(f.clone()), a))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(RootRow {
                p0: p0.show(net),
                mu: seq.mu,
                pi: seq.pi,
                boxed,
            })
        })
        .collect::<Result<Vec<_>, RevisionError>>()?;
    Ok(MultiRootReport {
        formulas: formulas.iter().map(|f| f.to_string()).collect(),
        roots,
    })
}

/// Truth-table map of each body, keyed by the restriction of the hypothesis
/// to the body's `T`-support.
pub(crate) fn truth_table(b: &Body, base: &[bool]) -> BTreeMap<u64, bool> {
    let sup = b.t_support();
    let mut out = BTreeMap::new();
    let mut sub = 0u64;
    loop {
        out.insert(sub, b.eval(Hypothesis(sub), base));
        if sub == sup {
            break;
        }
        sub = (sub.wrapping_sub(sup)) & sup;
    }
    out
}

impl fmt::Display for SentenceNetwork {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_network(self))
    }
}
