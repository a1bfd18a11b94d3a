//! The satisfaction recursion over finite Kripke-style presentations.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::logic::{manifest_rel, Formula};
use crate::structures::{Elem, FiniteStructure};

/// Values of free variables, by name.
pub type Assignment = BTreeMap<String, Elem>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("free variable {0} has no value")]
    UnboundVariable(String),
    #[error("value {elem} of {var} is not an element of sort {sort} anywhere in the model")]
    Sort {
        var: String,
        sort: String,
        elem: String,
    },
    #[error("state {0} does not exist")]
    NoSuchState(usize),
}

/// Finitely many states, each with a structure and an up-set.
pub trait Kripke: Sync {
    fn state_count(&self) -> usize;
    fn structure(&self, s: usize) -> &FiniteStructure;
    /// States `t` with `s <= t`, including `s`.
    fn above(&self, s: usize) -> &[usize];
}

/// A single structure viewed as a one-state model.
pub struct Single<'a>(pub &'a FiniteStructure);

impl Kripke for Single<'_> {
    fn state_count(&self) -> usize {
        1
    }

    fn structure(&self, _s: usize) -> &FiniteStructure {
        self.0
    }

    fn above(&self, _s: usize) -> &[usize] {
        &[0]
    }
}

struct Env<'a> {
    base: &'a Assignment,
    stack: Vec<(&'a str, Elem)>,
}

impl<'a> Env<'a> {
    fn get(&self, name: &str) -> &Elem {
        self.stack
            .iter()
            .rev()
            .find(|(n, _)| *n == name)
            .map(|(_, e)| e)
            .or_else(|| self.base.get(name))
            .expect("free variables checked before evaluation")
    }
}

/// `M, s |= phi[asg]`. Every free variable of `phi` must be assigned.
pub fn eval<K: Kripke + ?Sized>(
    k: &K,
    s: usize,
    phi: &Formula,
    asg: &Assignment,
) -> Result<bool, EvalError> {
    if s >= k.state_count() {
        return Err(EvalError::NoSuchState(s));
    }
    for v in phi.free_vars() {
        if !asg.contains_key(&v.name) {
            return Err(EvalError::UnboundVariable(v.name));
        }
    }
    let mut env = Env {
        base: asg,
        stack: Vec::new(),
    };
    Ok(go(k, s, phi, &mut env))
}

fn go<'a, K: Kripke + ?Sized>(k: &K, s: usize, phi: &'a Formula, env: &mut Env<'a>) -> bool {
    match phi {
        Formula::Atom { rel, args } => {
            let t: Vec<Elem> = args.iter().map(|v| env.get(&v.name).clone()).collect();
            k.structure(s).holds(rel, &t)
        }
        Formula::Manifest { args, dynamic } => {
            let mut t: Vec<Elem> = args.iter().map(|v| env.get(&v.name).clone()).collect();
            t.push(env.get(&dynamic.name).clone());
            k.structure(s).holds(&manifest_rel(args.len()), &t)
        }
        Formula::Eq(a, b) => env.get(&a.name) == env.get(&b.name),
        Formula::Not(a) => !go(k, s, a, env),
        Formula::And(a, b) => go(k, s, a, env) && go(k, s, b, env),
        Formula::Or(a, b) => go(k, s, a, env) || go(k, s, b, env),
        Formula::Implies(a, b) => !go(k, s, a, env) || go(k, s, b, env),
        Formula::Iff(a, b) => go(k, s, a, env) == go(k, s, b, env),
        Formula::Exists(v, a) | Formula::Forall(v, a) => {
            let want = matches!(phi, Formula::Exists(..));
            for e in k.structure(s).domain(&v.sort) {
                env.stack.push((v.name.as_str(), e.clone()));
                let r = go(k, s, a, env);
                env.stack.pop();
                if r == want {
                    return want;
                }
            }
            !want
        }
        Formula::Dia(a) => k.above(s).iter().any(|&t| go(k, t, a, env)),
        Formula::Box(a) => k.above(s).iter().all(|&t| go(k, t, a, env)),
    }
}
