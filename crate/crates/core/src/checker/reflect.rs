//! Reflection developments over a finite chain of substructures.
//!
//! States are pairs `(G, A)` of a set of formulas and a set of parameters,
//! ordered componentwise by inclusion. A dynamic unary predicate `nu` marks,
//! at each state, the least chain member containing `A` that reflects every
//! formula of `G` for all parameter tuples from `A`.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use super::{assignments_over, tele, CheckError};
use crate::devmodel::{DevelopmentModel, Frame};
use crate::eval::{eval, Single};
use crate::logic::{Formula, RelKind, Var, STAT};
use crate::structures::{relativize, substructure_check, Elem, FiniteStructure};

/// A formula with designated parameter variables; its other free variables
/// are universally quantified in the reflection biconditional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReflectionFormula {
    pub formula: Formula,
    pub params: Vec<Var>,
}

impl ReflectionFormula {
    pub fn new(formula: Formula, params: &[&str]) -> Self {
        let fv = formula.free_vars();
        let params = params
            .iter()
            .filter_map(|p| fv.iter().find(|v| v.name == *p).cloned())
            .collect();
        ReflectionFormula { formula, params }
    }

    /// `forall x (phi <-> phi^nu)` with the parameters left free.
    fn biconditional(&self, nu: &str) -> Formula {
        let body = Formula::iff(self.formula.clone(), relativize(&self.formula, nu));
        self.formula
            .free_vars()
            .into_iter()
            .filter(|v| !self.params.iter().any(|p| p.name == v.name))
            .rev()
            .fold(body, |acc, v| Formula::forall(v, acc))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReflectionTele {
    pub formula: String,
    pub params: Vec<String>,
    pub verdict: bool,
}

#[derive(Clone, Debug)]
pub struct ReflectionReport {
    pub model: DevelopmentModel,
    /// Chain index `nu` manifests as, per state.
    pub nu: Vec<usize>,
    pub tele: Vec<ReflectionTele>,
    pub nu_relation: String,
}

impl ReflectionReport {
    pub fn all_teleological(&self) -> bool {
        self.tele.iter().all(|t| t.verdict)
    }
}

const MAX_STATES: usize = 1 << 14;

fn mask_name(prefix: &str, mask: usize, n: usize) -> String {
    let parts: Vec<String> = (0..n)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| format!("{prefix}{i}"))
        .collect();
    format!("{{{}}}", parts.join(","))
}

pub fn reflection_dev(
    u: &FiniteStructure,
    chain: &[BTreeSet<Elem>],
    gamma: &[ReflectionFormula],
    params: &[Elem],
) -> Result<ReflectionReport, CheckError> {
    if chain.is_empty() || chain.last() != Some(u.stat()) {
        return Err(CheckError::ChainInvalid(
            "the last member must be the whole domain".into(),
        ));
    }
    for w in chain.windows(2) {
        if !w[0].is_subset(&w[1]) {
            return Err(CheckError::ChainInvalid("members must increase".into()));
        }
    }
    for p in params {
        if !u.stat().contains(p) {
            return Err(CheckError::ChainInvalid(format!(
                "parameter {p} is not in the structure"
            )));
        }
    }
    for g in gamma {
        if !g.formula.is_modal_free() {
            return Err(CheckError::NotStaticLanguage(g.formula.to_string()));
        }
    }
    let (ng, np) = (gamma.len(), params.len());
    if ng + np > 14 || (1usize << (ng + np)) > MAX_STATES {
        return Err(CheckError::TooLarge(format!("2^{} states", ng + np)));
    }

    let mut nu_rel = "nu".to_string();
    while u.signature().relation(&nu_rel).is_some() {
        nu_rel.push('_');
    }
    let mut sig = u.signature().clone();
    sig.add_relation(&nu_rel, &[STAT], RelKind::Dynamic)
        .expect("fresh name");
    let sig = Arc::new(sig);
    let base = {
        let mut b = u.clone();
        b.extend_signature(sig.clone());
        b
    };
    let members: Vec<FiniteStructure> = chain
        .iter()
        .map(|c| {
            let mut s = base.clone();
            for e in c {
                s.add_tuple(&nu_rel, vec![e.clone()]).expect("element of u");
            }
            s
        })
        .collect();
    let static_rels: BTreeSet<String> = u.signature().static_relations();
    for (i, c) in chain.iter().enumerate() {
        let sub = u.induced_on_stat(c);
        if !substructure_check(&sub, u, &static_rels).unwrap_or(false) {
            return Err(CheckError::ChainInvalid(format!("member {i}")));
        }
    }

    let bicond: Vec<Formula> = gamma.iter().map(|g| g.biconditional(&nu_rel)).collect();
    let reflects = |member: usize, g: usize, a_mask: usize| -> Result<bool, CheckError> {
        let avail: BTreeSet<Elem> = (0..np)
            .filter(|i| a_mask >> i & 1 == 1)
            .map(|i| params[i].clone())
            .collect();
        let uni = std::iter::once((STAT.to_string(), avail)).collect();
        for asg in assignments_over(&uni, &gamma[g].params) {
            if !eval(&Single(&members[member]), 0, &bicond[g], &asg)? {
                return Ok(false);
            }
        }
        Ok(true)
    };

    let count = 1usize << (ng + np);
    let mut names = Vec::with_capacity(count);
    let mut nu = Vec::with_capacity(count);
    for st in 0..count {
        let (g_mask, a_mask) = (st & ((1 << ng) - 1), st >> ng);
        names.push(format!(
            "({},{})",
            mask_name("g", g_mask, ng),
            mask_name("p", a_mask, np)
        ));
        let needed: BTreeSet<&Elem> = (0..np)
            .filter(|i| a_mask >> i & 1 == 1)
            .map(|i| &params[i])
            .collect();
        let mut chosen = chain.len() - 1;
        'members: for (mi, c) in chain.iter().enumerate() {
            if !needed.iter().all(|e| c.contains(*e)) {
                continue;
            }
            for g in 0..ng {
                if g_mask >> g & 1 == 1 && !reflects(mi, g, a_mask)? {
                    continue 'members;
                }
            }
            chosen = mi;
            break;
        }
        nu.push(chosen);
    }
    let frame = Frame::from_order(names, |a, b| a & b == a);
    let shared: Vec<Arc<FiniteStructure>> = members.into_iter().map(Arc::new).collect();
    let model = DevelopmentModel::new(frame, nu.iter().map(|&i| shared[i].clone()).collect())
        .expect("shared signature");

    let mut teles = Vec::new();
    let all_params =
        std::iter::once((STAT.to_string(), params.iter().cloned().collect())).collect();
    for (g, rf) in gamma.iter().enumerate() {
        for asg in assignments_over(&all_params, &rf.params) {
            let r = tele(&model, &bicond[g], &asg, None)?;
            teles.push(ReflectionTele {
                formula: rf.formula.to_string(),
                params: rf
                    .params
                    .iter()
                    .map(|p| format!("{}={}", p.name, asg[&p.name]))
                    .collect(),
                verdict: r.verdict,
            });
        }
    }
    Ok(ReflectionReport {
        model,
        nu,
        tele: teles,
        nu_relation: nu_rel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;
    use crate::structures::linear_order;

    fn set(names: &[&str]) -> BTreeSet<Elem> {
        names.iter().map(|n| Elem::new(n)).collect()
    }

    #[test]
    fn vacuous_reflection_uses_the_bottom() {
        let u = linear_order(&["a", "b", "c"], "le");
        let chain = vec![set(&["a"]), set(&["a", "b"]), set(&["a", "b", "c"])];
        let r = reflection_dev(&u, &chain, &[], &[]).unwrap();
        assert_eq!(r.nu, vec![0]);
        assert!(r.model.validate().is_valid());
    }

    #[test]
    fn maximality_needs_the_top() {
        let u = linear_order(&["a", "b", "c"], "le");
        let chain = vec![set(&["a"]), set(&["a", "b"]), set(&["a", "b", "c"])];
        let phi = parse_formula("forall y. (le(x, y) -> y = x)", u.signature()).unwrap();
        let g = vec![ReflectionFormula::new(phi, &[])];
        let r = reflection_dev(&u, &chain, &g, &[Elem::new("a")]).unwrap();
        assert!(r.model.validate().is_valid());
        for (s, &i) in r.nu.iter().enumerate() {
            let mentions = s & 1 == 1;
            assert_eq!(i == 2, mentions, "state {s}");
        }
        assert!(r.all_teleological());
    }

    #[test]
    fn parameters_pick_members_containing_them() {
        let u = linear_order(&["a", "b", "c"], "le");
        let chain = vec![set(&["a"]), set(&["a", "b"]), set(&["a", "b", "c"])];
        let phi = parse_formula("exists y. (le(p, y) and not p = y)", u.signature()).unwrap();
        let g = vec![ReflectionFormula::new(phi, &["p"])];
        let params = vec![Elem::new("a"), Elem::new("b")];
        let r = reflection_dev(&u, &chain, &g, &params).unwrap();
        assert!(r.all_teleological());
        assert_eq!(r.tele.len(), 2);
        // (g0, {a}): a needs a strict upper bound inside nu
        let idx = r.model.frame().index_of("({g0},{p0})").unwrap();
        assert_eq!(r.nu[idx], 1);
        assert!(reflection_dev(&u, &chain[..2], &g, &params).is_err());
    }
}
