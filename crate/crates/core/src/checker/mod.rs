//! Satisfaction over development models and the theorem-level checks built
//! on it.
//!
//! Global truth of a formula with parameters is taken over the states that
//! contain the parameters: `M |= phi(a)` iff `s |= phi(a)` for every state
//! `s` whose structure contains `a`. Teleological truth (`dia box`) is
//! checked at every state; on directed frames both readings agree.

mod reflect;
mod sigma2;
pub mod sweeps;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::eval::{eval, Assignment, EvalError, Kripke};
use crate::logic::{
    classify, dynamic_substitute, potentialist_translate, Formula, Signature, TranslateError, Var,
    WrapMode,
};
use crate::structures::{Elem, FiniteStructure};

pub use reflect::{reflection_dev, ReflectionFormula, ReflectionReport, ReflectionTele};
pub use sigma2::{
    curated_pairs, sigma2_certificate, verify_sigma2_exhaustive, Sigma2Certificate, Sigma2Outcome,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error("{0} is not a literal of the static language")]
    NotALiteral(String),
    #[error("{0} is not a modal-free formula of the static language")]
    NotStaticLanguage(String),
    #[error("{elem} does not manifest as ({tuple}) at state {state}")]
    NotManifesting {
        elem: String,
        tuple: String,
        state: String,
    },
    #[error("{0} is not of the form exists* forall* B with B quantifier-free")]
    NotSigma2(String),
    #[error("formula has free variables: {0}")]
    FreeVariables(String),
    #[error("chain is not an increasing sequence of substructures ending in the structure: {0}")]
    ChainInvalid(String),
    #[error("free variable {var} does not name an element of sort {sort}")]
    UnknownConstant { var: String, sort: String },
    #[error("{0}")]
    TooLarge(String),
}

/// Elements of each sort over all states.
pub fn universe_of<K: Kripke + ?Sized>(k: &K) -> BTreeMap<String, BTreeSet<Elem>> {
    let mut out: BTreeMap<String, BTreeSet<Elem>> = BTreeMap::new();
    for s in 0..k.state_count() {
        for (sort, d) in k.structure(s).domain_map() {
            out.entry(sort.clone())
                .or_default()
                .extend(d.iter().cloned());
        }
    }
    out
}

fn check_params<K: Kripke + ?Sized>(
    k: &K,
    phi: &Formula,
    asg: &Assignment,
) -> Result<(), CheckError> {
    let uni = universe_of(k);
    for v in phi.free_vars() {
        let e = asg
            .get(&v.name)
            .ok_or_else(|| EvalError::UnboundVariable(v.name.clone()))?;
        if !uni.get(&v.sort).is_some_and(|d| d.contains(e)) {
            return Err(EvalError::Sort {
                var: v.name,
                sort: v.sort,
                elem: e.to_string(),
            }
            .into());
        }
    }
    Ok(())
}

/// Bind each free variable to the element of the same name (constants as
/// free variables).
pub fn bind_by_name<K: Kripke + ?Sized>(k: &K, phi: &Formula) -> Result<Assignment, CheckError> {
    let uni = universe_of(k);
    let mut asg = Assignment::new();
    for v in phi.free_vars() {
        let e = Elem::new(&v.name);
        if !uni.get(&v.sort).is_some_and(|d| d.contains(&e)) {
            return Err(CheckError::UnknownConstant {
                var: v.name,
                sort: v.sort,
            });
        }
        asg.insert(v.name, e);
    }
    Ok(asg)
}

/// `M, s |= phi[asg]`, with parameters required to lie in the union.
pub fn satisfies<K: Kripke + ?Sized>(
    k: &K,
    s: usize,
    phi: &Formula,
    asg: &Assignment,
) -> Result<bool, CheckError> {
    check_params(k, phi, asg)?;
    Ok(eval(k, s, phi, asg)?)
}

/// States containing the values of `phi`'s free variables.
pub fn parameter_states<K: Kripke + ?Sized>(k: &K, phi: &Formula, asg: &Assignment) -> Vec<usize> {
    let fv = phi.free_vars();
    (0..k.state_count())
        .filter(|&s| {
            let u = k.structure(s);
            fv.iter().all(|v| {
                asg.get(&v.name)
                    .is_some_and(|e| u.domain(&v.sort).contains(e))
            })
        })
        .collect()
}

/// `M |= phi(a)`: truth at every state containing the parameters.
pub fn holds_everywhere<K: Kripke + ?Sized>(
    k: &K,
    phi: &Formula,
    asg: &Assignment,
) -> Result<bool, CheckError> {
    check_params(k, phi, asg)?;
    for s in parameter_states(k, phi, asg) {
        if !eval(k, s, phi, asg)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TeleRow {
    pub state: String,
    /// A state above this one where `box phi` holds.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TeleologyReport {
    pub formula: String,
    pub parameters: Vec<(String, String)>,
    pub verdict: bool,
    pub rows: Vec<TeleRow>,
}

fn state_names(names: Option<&[String]>, s: usize) -> String {
    names.map(|n| n[s].clone()).unwrap_or_else(|| s.to_string())
}

/// `M |= dia box phi(a)` using directedness: one `box`-witness `w` suffices,
/// and any common upper bound of `s` and `w` serves as the witness for `s`.
pub fn tele<K: Kripke + ?Sized>(
    k: &K,
    phi: &Formula,
    asg: &Assignment,
    names: Option<&[String]>,
) -> Result<TeleologyReport, CheckError> {
    check_params(k, phi, asg)?;
    let boxed = Formula::boxed(phi.clone());
    let mut w = None;
    for t in 0..k.state_count() {
        if eval(k, t, &boxed, asg)? {
            w = Some(t);
            break;
        }
    }
    let mut rows = Vec::with_capacity(k.state_count());
    for s in 0..k.state_count() {
        let witness = w.and_then(|w| {
            let above_w: BTreeSet<usize> = k.above(w).iter().copied().collect();
            k.above(s).iter().copied().find(|t| above_w.contains(t))
        });
        rows.push(TeleRow {
            state: state_names(names, s),
            witness: witness.map(|t| state_names(names, t)),
        });
    }
    let verdict = rows.iter().all(|r| r.witness.is_some());
    let parameters = phi
        .free_vars()
        .into_iter()
        .filter_map(|v| asg.get(&v.name).map(|e| (v.name, e.to_string())))
        .collect();
    Ok(TeleologyReport {
        formula: phi.to_string(),
        parameters,
        verdict,
        rows,
    })
}

/// `dia box phi` evaluated at every state separately.
pub fn tele_naive<K: Kripke + ?Sized>(
    k: &K,
    phi: &Formula,
    asg: &Assignment,
) -> Result<bool, CheckError> {
    check_params(k, phi, asg)?;
    let f = Formula::dia(Formula::boxed(phi.clone()));
    for s in 0..k.state_count() {
        if !eval(k, s, &f, asg)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Per-state truth of `dia box phi`, for the directedness-collapse check.
pub fn tele_profile<K: Kripke + ?Sized>(
    k: &K,
    phi: &Formula,
    asg: &Assignment,
) -> Result<Vec<bool>, CheckError> {
    check_params(k, phi, asg)?;
    let f = Formula::dia(Formula::boxed(phi.clone()));
    (0..k.state_count())
        .map(|s| Ok(eval(k, s, &f, asg)?))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConvergeReport {
    /// The union structure satisfies the literal.
    pub union: bool,
    /// Some state containing the parameters satisfies it.
    pub some_state: bool,
    /// `dia box` of it holds at every state.
    pub teleological: bool,
}

impl ConvergeReport {
    pub fn agree(&self) -> bool {
        self.union == self.some_state && self.some_state == self.teleological
    }
}

pub fn check_converge<K: Kripke + ?Sized>(
    k: &K,
    sig: &Signature,
    phi: &Formula,
    asg: &Assignment,
) -> Result<ConvergeReport, CheckError> {
    if !classify(phi, sig).literal {
        return Err(CheckError::NotALiteral(phi.to_string()));
    }
    check_params(k, phi, asg)?;
    let union = union_structure_of(k);
    let union_side = eval(&crate::eval::Single(&union), 0, phi, asg)?;
    let mut some_state = false;
    for s in parameter_states(k, phi, asg) {
        if eval(k, s, phi, asg)? {
            some_state = true;
            break;
        }
    }
    let teleological = tele_naive(k, phi, asg)?;
    Ok(ConvergeReport {
        union: union_side,
        some_state,
        teleological,
    })
}

pub fn union_structure_of<K: Kripke + ?Sized>(k: &K) -> FiniteStructure {
    let first = k.structure(0);
    let mut pieces = (0..k.state_count()).map(|s| k.structure(s));
    crate::structures::union_structure(&mut pieces)
        .unwrap_or_else(|_| FiniteStructure::with_signature(first.signature_arc().clone()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MirrorReport {
    pub formula: String,
    pub translated: String,
    pub union_side: bool,
    pub modal_side: bool,
}

impl MirrorReport {
    pub fn agree(&self) -> bool {
        self.union_side == self.modal_side
    }
}

/// `union(M) |= phi(a)` against `M |= phi^dia(a)`.
pub fn check_mirroring<K: Kripke + ?Sized>(
    k: &K,
    sig: &Signature,
    phi: &Formula,
    asg: &Assignment,
) -> Result<MirrorReport, CheckError> {
    let c = classify(phi, sig);
    if !c.static_language || !c.modal_free {
        return Err(CheckError::NotStaticLanguage(phi.to_string()));
    }
    check_params(k, phi, asg)?;
    let translated = potentialist_translate(phi)?;
    let union = union_structure_of(k);
    let union_side = eval(&crate::eval::Single(&union), 0, phi, asg)?;
    let modal_side = holds_everywhere(k, &translated, asg)?;
    Ok(MirrorReport {
        formula: phi.to_string(),
        translated: translated.to_string(),
        union_side,
        modal_side,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Schema {
    K,
    T,
    Four,
    G,
    Stability,
}

impl Schema {
    pub fn label(&self) -> &'static str {
        match self {
            Schema::K => "K",
            Schema::T => "T",
            Schema::Four => "4",
            Schema::G => "G",
            Schema::Stability => "Stability",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CmpViolation {
    pub schema: Schema,
    pub instance: String,
    pub state: usize,
    pub assignment: Vec<(String, String)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CmpReport {
    pub instances: usize,
    pub violations: Vec<CmpViolation>,
}

/// Schema instances over `sample`: T, 4, G and Stability (for literals) for
/// each formula and K for each ordered pair.
pub fn cmp_instances(sig: &Signature, sample: &[Formula]) -> Vec<(Schema, Formula)> {
    let bx = |f: &Formula| Formula::boxed(f.clone());
    let dia = |f: Formula| Formula::dia(f);
    let mut out = Vec::new();
    for phi in sample {
        out.push((Schema::T, Formula::implies(bx(phi), phi.clone())));
        out.push((Schema::Four, Formula::implies(bx(phi), bx(&bx(phi)))));
        out.push((
            Schema::G,
            Formula::implies(dia(bx(phi)), bx(&dia(phi.clone()))),
        ));
        if classify(phi, sig).literal {
            out.push((Schema::Stability, Formula::implies(phi.clone(), bx(phi))));
        }
    }
    for phi in sample {
        for psi in sample {
            let k = Formula::implies(
                bx(&Formula::implies(phi.clone(), psi.clone())),
                Formula::implies(bx(phi), bx(psi)),
            );
            out.push((Schema::K, k));
        }
    }
    out
}

/// Evaluate every schema instance at every state, for every assignment of its
/// free variables over the union, at the states containing the assignment.
pub fn check_cmp<K: Kripke + ?Sized>(
    k: &K,
    sig: &Signature,
    sample: &[Formula],
) -> Result<CmpReport, CheckError> {
    let uni = universe_of(k);
    let mut report = CmpReport::default();
    for (schema, inst) in cmp_instances(sig, sample) {
        let vars = inst.free_vars();
        for asg in assignments_over(&uni, &vars) {
            for s in parameter_states(k, &inst, &asg) {
                report.instances += 1;
                if !eval(k, s, &inst, &asg)? {
                    report.violations.push(CmpViolation {
                        schema,
                        instance: inst.to_string(),
                        state: s,
                        assignment: asg
                            .iter()
                            .map(|(a, b)| (a.clone(), b.to_string()))
                            .collect(),
                    });
                }
            }
        }
    }
    Ok(report)
}

/// All assignments of `vars` over a sorted universe.
pub fn assignments_over(uni: &BTreeMap<String, BTreeSet<Elem>>, vars: &[Var]) -> Vec<Assignment> {
    let empty = BTreeSet::new();
    let mut out = vec![Assignment::new()];
    for v in vars {
        let dom = uni.get(&v.sort).unwrap_or(&empty);
        let mut next = Vec::with_capacity(out.len() * dom.len());
        for a in &out {
            for e in dom {
                let mut b = a.clone();
                b.insert(v.name.clone(), e.clone());
                next.push(b);
            }
        }
        out = next;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DynSubReport {
    pub substituted: String,
    pub static_side: bool,
    pub dynamic_side: bool,
}

impl DynSubReport {
    pub fn agree(&self) -> bool {
        self.static_side == self.dynamic_side
    }
}

/// Compare `phi(a)` with `phi(a / delta)` at `s`, where `delta` manifests as `a` at `s`.
/// `asg` gives `a` as the values of `xs` plus any other free variables.
#[allow(clippy::too_many_arguments)]
pub fn check_dynsub<K: Kripke + ?Sized>(
    k: &K,
    s: usize,
    phi: &Formula,
    xs: &[Var],
    asg: &Assignment,
    delta: &Elem,
    mode: WrapMode,
    names: Option<&[String]>,
) -> Result<DynSubReport, CheckError> {
    let n = xs.len();
    let a: Vec<Elem> = xs
        .iter()
        .map(|x| {
            asg.get(&x.name)
                .cloned()
                .ok_or_else(|| EvalError::UnboundVariable(x.name.clone()))
        })
        .collect::<Result<_, _>>()?;
    let u = k.structure(s);
    let ms = u.manifestations(delta, n);
    if ms.len() != 1 || ms[0] != &a[..] {
        return Err(CheckError::NotManifesting {
            elem: delta.to_string(),
            tuple: a.iter().map(Elem::as_str).collect::<Vec<_>>().join(","),
            state: state_names(names, s),
        });
    }
    let taken = phi.all_var_names();
    let mut xi_name = "xi".to_string();
    while taken.contains(&xi_name) || xs.iter().any(|x| x.name == xi_name) {
        xi_name.push('_');
    }
    let xi = Var::new(xi_name.clone(), crate::logic::dyn_sort(n));
    let sub = dynamic_substitute(phi, xs, &xi, mode)?;
    let static_side = satisfies(k, s, phi, asg)?;
    let mut dasg: Assignment = asg
        .iter()
        .filter(|(v, _)| !xs.iter().any(|x| &x.name == *v))
        .map(|(a, b)| (a.clone(), b.clone()))
        .collect();
    dasg.insert(xi_name, delta.clone());
    let dynamic_side = satisfies(k, s, &sub, &dasg)?;
    Ok(DynSubReport {
        substituted: sub.to_string(),
        static_side,
        dynamic_side,
    })
}
