//! Development models over the ω-frame.
//!
//! A [`Lasso`] presents an eventually periodic assignment of structures to
//! the natural numbers. Since the frame is linear, the states visible from
//! `n` are `n..` and they realize exactly the structures of the transient
//! suffix from `n` plus the whole cycle. Evaluating on the quotient whose
//! cycle states see each other is therefore exact.
//!
//! [`bounded_satisfies`] handles streams that are not eventually periodic.

mod bounded;
mod format;
pub mod sweeps;

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

use thiserror::Error;

use crate::devmodel::{DevError, DevelopmentModel, Frame, ValidationReport};
use crate::eval::{eval, Assignment, EvalError, Kripke};
use crate::logic::{Formula, Signature};
use crate::structures::FiniteStructure;

pub use bounded::{
    bounded_satisfies, check_bounded_soundness, preset, ArithBasic, BoundedVerdict, CertEntry,
    CertKind, LassoStream, RationalsGrid, Stream, Verdict,
};
pub use format::{parse_lasso, write_lasso, LassoParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OmegaError {
    #[error("period must be at least 1")]
    ZeroPeriod,
    #[error("expected {expected} structures for transient {mu} and period {pi}, found {found}")]
    Length {
        mu: usize,
        pi: usize,
        expected: usize,
        found: usize,
    },
    #[error(transparent)]
    Dev(#[from] DevError),
    #[error("parameter {var} = {elem} is not in any structure of the lasso")]
    ParameterOutOfUniverse { var: String, elem: String },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("unknown stream preset {0:?}")]
    UnknownPreset(String),
}

/// An eventually periodic ω-indexed development model.
#[derive(Clone, Debug)]
pub struct Lasso {
    mu: usize,
    pi: usize,
    quotient: DevelopmentModel,
}

impl Lasso {
    pub fn new(
        mu: usize,
        pi: usize,
        structures: Vec<Arc<FiniteStructure>>,
    ) -> Result<Self, OmegaError> {
        if pi == 0 {
            return Err(OmegaError::ZeroPeriod);
        }
        if structures.len() != mu + pi {
            return Err(OmegaError::Length {
                mu,
                pi,
                expected: mu + pi,
                found: structures.len(),
            });
        }
        let names = (0..mu + pi).map(|i| format!("n{i}")).collect();
        let frame = Frame::from_order(names, |a, b| if a < mu { b >= a } else { b >= mu });
        let quotient = DevelopmentModel::new(frame, structures)?;
        Ok(Lasso { mu, pi, quotient })
    }

    pub fn transient(&self) -> usize {
        self.mu
    }

    pub fn period(&self) -> usize {
        self.pi
    }

    pub fn signature(&self) -> &Signature {
        self.quotient.signature()
    }

    /// Quotient index of state `n`.
    pub fn rep(&self, n: usize) -> usize {
        if n < self.mu {
            n
        } else {
            self.mu + (n - self.mu) % self.pi
        }
    }

    pub fn state(&self, n: usize) -> &Arc<FiniteStructure> {
        &self.quotient.structures()[self.rep(n)]
    }

    pub fn structures(&self) -> &[Arc<FiniteStructure>] {
        self.quotient.structures()
    }

    /// The finite quotient: transient states see their suffix, cycle states
    /// see the whole cycle (including the wrap edge).
    pub fn quotient(&self) -> &DevelopmentModel {
        &self.quotient
    }

    /// Development-model clauses checked on the quotient's edges.
    pub fn validate(&self) -> ValidationReport {
        let mut r = self.quotient.validate();
        // the cycle is a cluster by construction
        r.warnings.clear();
        r
    }
}

impl Kripke for Lasso {
    fn state_count(&self) -> usize {
        self.quotient.state_count()
    }

    fn structure(&self, s: usize) -> &FiniteStructure {
        self.quotient.structure(s)
    }

    fn above(&self, s: usize) -> &[usize] {
        self.quotient.above(s)
    }
}

fn check_lasso_params(l: &Lasso, phi: &Formula, asg: &Assignment) -> Result<(), OmegaError> {
    for v in phi.free_vars() {
        let e = asg
            .get(&v.name)
            .ok_or_else(|| EvalError::UnboundVariable(v.name.clone()))?;
        if !l.structures().iter().any(|u| u.domain(&v.sort).contains(e)) {
            return Err(OmegaError::ParameterOutOfUniverse {
                var: v.name,
                elem: e.to_string(),
            });
        }
    }
    Ok(())
}

/// Exact truth of `phi` at state `n` of the ω-model.
pub fn lasso_satisfies(
    l: &Lasso,
    n: usize,
    phi: &Formula,
    asg: &Assignment,
) -> Result<bool, OmegaError> {
    check_lasso_params(l, phi, asg)?;
    Ok(eval(l, l.rep(n), phi, asg)?)
}

/// Truth at every state of the ω-model that contains the parameters.
pub fn lasso_holds(l: &Lasso, phi: &Formula, asg: &Assignment) -> Result<bool, OmegaError> {
    check_lasso_params(l, phi, asg)?;
    for s in crate::checker::parameter_states(l, phi, asg) {
        if !eval(l, s, phi, asg)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The ω-model unrolled to `len` states. A modal operator at `m` ranges over
/// `m .. max(m, mu) + pi`, which meets every structure visible from `m`.
pub struct Unrolled<'a> {
    lasso: &'a Lasso,
    above: Vec<Vec<usize>>,
}

impl<'a> Unrolled<'a> {
    pub fn new(lasso: &'a Lasso, len: usize) -> Self {
        let (mu, pi) = (lasso.mu, lasso.pi);
        let above = (0..len)
            .map(|m| (m..(m.max(mu) + pi).min(len)).collect())
            .collect();
        Unrolled { lasso, above }
    }

    /// Length needed to evaluate formulas of modal depth `depth` at states
    /// below `mu + pi`.
    pub fn length_for(lasso: &Lasso, depth: usize) -> usize {
        lasso.mu + (depth + 1) * lasso.pi
    }
}

impl Kripke for Unrolled<'_> {
    fn state_count(&self) -> usize {
        self.above.len()
    }

    fn structure(&self, s: usize) -> &FiniteStructure {
        self.lasso.state(s)
    }

    fn above(&self, s: usize) -> &[usize] {
        &self.above[s]
    }
}

/// Compare exact evaluation with the unrolled one at states `0..mu+pi`, and
/// check periodicity at cycle states `n` against `n + pi`. Returns the first disagreeing
/// state.
pub fn cross_check_unrolled(
    l: &Lasso,
    phi: &Formula,
    asg: &Assignment,
) -> Result<Option<usize>, OmegaError> {
    let len = Unrolled::length_for(l, phi.modal_depth()) + l.pi;
    let u = Unrolled::new(l, len);
    for n in 0..l.mu + l.pi {
        let exact = lasso_satisfies(l, n, phi, asg)?;
        let periodic = n < l.mu || exact == lasso_satisfies(l, n + l.pi, phi, asg)?;
        if exact != eval(&u, n, phi, asg)? || !periodic {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Iterate `step` from `start` until a value repeats. Returns the transient
/// length, the period and the distinct values in order, or `None` when
/// `limit` steps pass without repetition.
pub fn detect_lasso<T: Clone + Eq + Hash>(
    start: T,
    mut step: impl FnMut(&T) -> T,
    limit: usize,
) -> Option<(usize, usize, Vec<T>)> {
    let mut seen: HashMap<T, usize> = HashMap::new();
    let mut seq = Vec::new();
    let mut cur = start;
    for i in 0..=limit {
        if let Some(&j) = seen.get(&cur) {
            return Some((j, i - j, seq));
        }
        seen.insert(cur.clone(), i);
        seq.push(cur.clone());
        cur = step(&cur);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_formula, RelKind, STAT};

    fn liar() -> Lasso {
        let sig = Signature::new().with_relation("T", &[STAT], RelKind::Dynamic);
        let base = FiniteStructure::new(sig).with_elements(STAT, &["l"]);
        let on = base.clone().with_tuples("T", &[&["l"]]);
        Lasso::new(0, 2, vec![Arc::new(base), Arc::new(on)]).unwrap()
    }

    #[test]
    fn liar_oscillates() {
        let l = liar();
        assert!(l.validate().is_valid());
        let phi = parse_formula("dia T(l) and dia not T(l)", l.signature()).unwrap();
        let a: Assignment = [("l".to_string(), "l".into())].into_iter().collect();
        for n in 0..6 {
            assert!(lasso_satisfies(&l, n, &phi, &a).unwrap());
        }
        let boxed = parse_formula("box (dia T(l) and dia not T(l))", l.signature()).unwrap();
        assert!(lasso_holds(&l, &boxed, &a).unwrap());
        assert!(!lasso_holds(&l, &parse_formula("T(l)", l.signature()).unwrap(), &a).unwrap());
        assert_eq!(cross_check_unrolled(&l, &boxed, &a).unwrap(), None);
    }

    #[test]
    fn constant_lasso_collapses_modalities() {
        let sig = Signature::new().with_relation("R", &[STAT, STAT], RelKind::Static);
        let u = FiniteStructure::new(sig)
            .with_elements(STAT, &["a", "b"])
            .with_tuples("R", &[&["a", "b"]]);
        let l = Lasso::new(0, 1, vec![Arc::new(u)]).unwrap();
        for text in [
            "R(a, b)",
            "exists x. R(x, x)",
            "forall x. exists y. R(x, y) or R(y, x)",
        ] {
            let phi = parse_formula(text, l.signature()).unwrap();
            let a = crate::checker::bind_by_name(&l, &phi).unwrap();
            let plain = lasso_satisfies(&l, 0, &phi, &a).unwrap();
            assert_eq!(
                plain,
                lasso_satisfies(&l, 3, &Formula::boxed(phi.clone()), &a).unwrap()
            );
            assert_eq!(
                plain,
                lasso_satisfies(&l, 7, &Formula::dia(phi.clone()), &a).unwrap()
            );
        }
    }

    #[test]
    fn transient_states_do_not_come_back() {
        let sig = Signature::new().with_relation("T", &[STAT], RelKind::Dynamic);
        let base = FiniteStructure::new(sig).with_elements(STAT, &["l"]);
        let on = base.clone().with_tuples("T", &[&["l"]]);
        let l = Lasso::new(1, 1, vec![Arc::new(on), Arc::new(base)]).unwrap();
        let a: Assignment = [("l".to_string(), "l".into())].into_iter().collect();
        let dia = parse_formula("dia T(l)", l.signature()).unwrap();
        assert!(lasso_satisfies(&l, 0, &dia, &a).unwrap());
        assert!(!lasso_satisfies(&l, 1, &dia, &a).unwrap());
        assert!(!lasso_satisfies(&l, 50, &dia, &a).unwrap());
        assert_eq!(cross_check_unrolled(&l, &dia, &a).unwrap(), None);
    }

    #[test]
    fn static_change_on_the_cycle_is_invalid() {
        let sig = Signature::new().with_relation("R", &[STAT], RelKind::Static);
        let base = FiniteStructure::new(sig).with_elements(STAT, &["a"]);
        let on = base.clone().with_tuples("R", &[&["a"]]);
        let l = Lasso::new(0, 2, vec![Arc::new(on.clone()), Arc::new(base.clone())]).unwrap();
        assert!(!l.validate().is_valid());
        // a static fact appearing later about an existing element also breaks (c)
        let late = Lasso::new(1, 1, vec![Arc::new(base), Arc::new(on)]).unwrap();
        assert!(!late.validate().is_valid());
    }

    #[test]
    fn lasso_detection() {
        // 0 -> 1 -> 2 -> 3 -> 1
        let r = detect_lasso(0u32, |&x| if x == 3 { 1 } else { x + 1 }, 10).unwrap();
        assert_eq!((r.0, r.1), (1, 3));
        assert_eq!(r.2, vec![0, 1, 2, 3]);
        assert!(detect_lasso(0u64, |&x| x + 1, 5).is_none());
    }

    #[test]
    fn parameters_must_exist() {
        let l = liar();
        let phi = parse_formula("T(z)", l.signature()).unwrap();
        let a: Assignment = [("z".to_string(), "zz".into())].into_iter().collect();
        assert!(matches!(
            lasso_satisfies(&l, 0, &phi, &a),
            Err(OmegaError::ParameterOutOfUniverse { .. })
        ));
    }
}
