//! Seeded generators for development models and formulas.
//!
//! Every case is produced by its own ChaCha8 stream (`seed`, case index), so
//! sweeps give identical results whether run sequentially or in parallel.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::devmodel::{extend_by_dynamic, DevelopmentModel, Frame, FunctionalDynamicTuple};
use crate::eval::Assignment;
use crate::logic::{Formula, RelKind, Signature, Var, STAT};
use crate::omega::Lasso;
use crate::revision::{Body, SentenceNetwork, TRUTH};
use crate::structures::{Elem, FiniteStructure};

pub fn case_rng(seed: u64, case: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case);
    rng
}

/// Signature shared by generated models: static `P/1`, `Q/1`, `R/2` and
/// dynamic `D/1`.
pub fn fuzz_signature() -> Signature {
    Signature::new()
        .with_relation("P", &[STAT], RelKind::Static)
        .with_relation("Q", &[STAT], RelKind::Static)
        .with_relation("R", &[STAT, STAT], RelKind::Static)
        .with_relation("D", &[STAT], RelKind::Dynamic)
}

pub const STATIC_RELS: &[(&str, usize)] = &[("P", 1), ("Q", 1), ("R", 2)];

#[derive(Clone, Debug)]
pub struct ModelParams {
    pub max_elems: usize,
    pub max_states: usize,
    pub dynamic_individuals: bool,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            max_elems: 4,
            max_states: 6,
            dynamic_individuals: false,
        }
    }
}

/// A random structure over [`fuzz_signature`] with `Stat = e0..e(k-1)`.
pub fn random_structure(rng: &mut impl Rng, k: usize) -> FiniteStructure {
    let mut u = FiniteStructure::new(fuzz_signature());
    let elems: Vec<Elem> = (0..k).map(|i| Elem::from(format!("e{i}"))).collect();
    for e in &elems {
        u.add_element(STAT, e.clone()).unwrap();
    }
    for (rel, arity) in STATIC_RELS {
        let density = rng.gen_range(0.2..0.7);
        let tuples: Vec<Vec<Elem>> = if *arity == 1 {
            elems.iter().map(|e| vec![e.clone()]).collect()
        } else {
            elems
                .iter()
                .flat_map(|a| elems.iter().map(move |b| vec![a.clone(), b.clone()]))
                .collect()
        };
        for t in tuples {
            if rng.gen_bool(density) {
                u.add_tuple(rel, t).unwrap();
            }
        }
    }
    u
}

/// A random valid development model: a random partial order with a top
/// (sometimes a two-state top cluster), monotone domains and induced static
/// facts, with a dynamic predicate `D` chosen freely per state.
pub fn random_model(rng: &mut impl Rng, p: &ModelParams) -> DevelopmentModel {
    let k = rng.gen_range(1..=p.max_elems);
    let u = random_structure(rng, k);
    let elems: Vec<Elem> = u.stat().iter().cloned().collect();
    let body = rng.gen_range(1..p.max_states.max(2));
    let cluster = rng.gen_bool(0.2);
    let n = body + if cluster { 2 } else { 1 };
    // order on the body: random edges i -> j for i < j, then closure
    let mut le = vec![vec![false; n]; n];
    for (i, row) in le.iter_mut().enumerate() {
        row[i] = true;
    }
    for i in 0..body {
        for j in i + 1..body {
            if rng.gen_bool(0.4) {
                le[i][j] = true;
            }
        }
    }
    for t in body..n {
        for (i, row) in le.iter_mut().enumerate() {
            if i < body || cluster {
                row[t] = true;
            }
        }
    }
    for m in 0..n {
        for i in 0..n {
            if le[i][m] {
                for j in 0..n {
                    if le[m][j] {
                        le[i][j] = true;
                    }
                }
            }
        }
    }
    // domains grow along the order
    let mut doms: Vec<BTreeSet<Elem>> = vec![BTreeSet::new(); n];
    for s in 0..body {
        let mut d: BTreeSet<Elem> = elems
            .iter()
            .filter(|_| rng.gen_bool(0.35))
            .cloned()
            .collect();
        for t in 0..s {
            if le[t][s] {
                d.extend(doms[t].iter().cloned());
            }
        }
        doms[s] = d;
    }
    let mut top: BTreeSet<Elem> = doms[..body].iter().flatten().cloned().collect();
    top.extend(elems.iter().filter(|_| rng.gen_bool(0.5)).cloned());
    for d in doms.iter_mut().skip(body) {
        *d = top.clone();
    }
    let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let frame = Frame::from_order(names, |a, b| le[a][b]);
    let structures = doms
        .iter()
        .map(|d| {
            let mut s = u.induced_on_stat(d);
            for e in d {
                if rng.gen_bool(0.5) {
                    s.add_tuple("D", vec![e.clone()]).unwrap();
                }
            }
            Arc::new(s)
        })
        .collect();
    let m = DevelopmentModel::new(frame, structures).expect("shared signature");
    if !p.dynamic_individuals || doms.iter().any(|d| d.is_empty()) {
        return m;
    }
    let count = rng.gen_range(1..=2);
    let mut ds = Vec::new();
    for _ in 0..count {
        let constant = rng.gen_bool(0.3);
        let first: Vec<Elem> = doms[0].iter().cloned().collect();
        let pick = first.choose(rng).cloned();
        let values = doms
            .iter()
            .map(|d| {
                let v: Vec<Elem> = d.iter().cloned().collect();
                match (&pick, constant) {
                    (Some(e), true) if d.contains(e) => vec![e.clone()],
                    _ => vec![v.choose(rng).expect("non-empty").clone()],
                }
            })
            .collect();
        ds.push(FunctionalDynamicTuple { arity: 1, values });
    }
    extend_by_dynamic(&m, &ds).expect("total tuples").0
}

/// A random valid lasso: growing domains along the transient, a fixed domain
/// on the cycle, induced static facts and a free dynamic `D`.
pub fn random_lasso(rng: &mut impl Rng, max_elems: usize) -> Lasso {
    let k = rng.gen_range(1..=max_elems);
    let u = random_structure(rng, k);
    let elems: Vec<Elem> = u.stat().iter().cloned().collect();
    let mu = rng.gen_range(0..=3);
    let pi = rng.gen_range(1..=3);
    let mut dom: BTreeSet<Elem> = BTreeSet::new();
    let mut structures = Vec::with_capacity(mu + pi);
    for i in 0..mu + pi {
        if i <= mu {
            dom.extend(elems.iter().filter(|_| rng.gen_bool(0.4)).cloned());
        }
        let mut s = u.induced_on_stat(&dom);
        for e in &dom {
            if rng.gen_bool(0.5) {
                s.add_tuple("D", vec![e.clone()]).unwrap();
            }
        }
        structures.push(Arc::new(s));
    }
    Lasso::new(mu, pi, structures).expect("lengths match")
}

#[derive(Clone, Debug)]
pub struct FormulaParams {
    pub quantifier_depth: usize,
    pub modal_depth: usize,
    pub free: Vec<&'static str>,
    pub dynamic_atoms: bool,
}

impl Default for FormulaParams {
    fn default() -> Self {
        FormulaParams {
            quantifier_depth: 2,
            modal_depth: 0,
            free: vec!["a", "b"],
            dynamic_atoms: false,
        }
    }
}

const BOUND: &[&str] = &["x", "y", "z"];

fn random_atom(rng: &mut impl Rng, vars: &[String], dynamic: bool) -> Formula {
    let v =
        |rng: &mut dyn rand::RngCore| Var::stat(vars.choose(rng).expect("some variable").clone());
    let choices = if dynamic { 5 } else { 4 };
    match rng.gen_range(0..choices) {
        0 => Formula::atom("P", &[v(rng)]),
        1 => Formula::atom("Q", &[v(rng)]),
        2 => Formula::atom("R", &[v(rng), v(rng)]),
        3 => Formula::eq(v(rng), v(rng)),
        _ => Formula::atom("D", &[v(rng)]),
    }
}

fn gen(
    rng: &mut impl Rng,
    p: &FormulaParams,
    vars: &mut Vec<String>,
    q: usize,
    m: usize,
    size: usize,
) -> Formula {
    if size == 0 {
        return random_atom(rng, vars, p.dynamic_atoms);
    }
    let roll = rng.gen_range(0..10);
    match roll {
        0 | 1 => random_atom(rng, vars, p.dynamic_atoms),
        2 => Formula::not(gen(rng, p, vars, q, m, size - 1)),
        3 => Formula::and(
            gen(rng, p, vars, q, m, size / 2),
            gen(rng, p, vars, q, m, size / 2),
        ),
        4 => Formula::or(
            gen(rng, p, vars, q, m, size / 2),
            gen(rng, p, vars, q, m, size / 2),
        ),
        5 => Formula::implies(
            gen(rng, p, vars, q, m, size / 2),
            gen(rng, p, vars, q, m, size / 2),
        ),
        6 | 7 if q < p.quantifier_depth => {
            let name = BOUND[q % BOUND.len()].to_string();
            vars.push(name.clone());
            let body = gen(rng, p, vars, q + 1, m, size - 1);
            vars.pop();
            if roll == 6 {
                Formula::exists(Var::stat(name), body)
            } else {
                Formula::forall(Var::stat(name), body)
            }
        }
        8 | 9 if m < p.modal_depth => {
            let body = gen(rng, p, vars, q, m + 1, size - 1);
            if roll == 8 {
                Formula::dia(body)
            } else {
                Formula::boxed(body)
            }
        }
        _ => Formula::not(gen(rng, p, vars, q, m, size - 1)),
    }
}

/// A random formula within the depth bounds of `p`, free variables drawn from `p.free`.
pub fn random_formula(rng: &mut impl Rng, p: &FormulaParams) -> Formula {
    let mut vars: Vec<String> = p.free.iter().map(|s| s.to_string()).collect();
    let size = rng.gen_range(1..8);
    gen(rng, p, &mut vars, 0, 0, size)
}

/// A random literal over the static relations and the free variables.
pub fn random_literal(rng: &mut impl Rng, free: &[&str]) -> Formula {
    let vars: Vec<String> = free.iter().map(|s| s.to_string()).collect();
    let atom = random_atom(rng, &vars, false);
    if rng.gen_bool(0.5) {
        Formula::not(atom)
    } else {
        atom
    }
}

/// Values for `phi`'s free variables drawn from the union's `Stat` domain.
pub fn random_assignment(
    rng: &mut impl Rng,
    m: &DevelopmentModel,
    phi: &Formula,
) -> Option<Assignment> {
    random_assignment_from(rng, m.structures(), phi)
}

pub fn random_assignment_from(
    rng: &mut impl Rng,
    states: &[Arc<FiniteStructure>],
    phi: &Formula,
) -> Option<Assignment> {
    let pool: Vec<Elem> = states
        .iter()
        .flat_map(|u| u.stat().iter().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut asg = Assignment::new();
    for v in phi.free_vars() {
        asg.insert(v.name, pool.choose(rng)?.clone());
    }
    Some(asg)
}

fn random_body(rng: &mut impl Rng, names: usize, bases: usize, size: usize) -> Body {
    if size == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..10) {
            0 => Body::Const(rng.gen_bool(0.5)),
            1 | 2 if bases > 0 => Body::Base(rng.gen_range(0..bases)),
            _ => Body::T(rng.gen_range(0..names)),
        };
    }
    let sub = |rng: &mut _| Box::new(random_body(rng, names, bases, size / 2));
    match rng.gen_range(0..6) {
        0 | 1 => Body::Not(Box::new(random_body(rng, names, bases, size - 1))),
        2 => Body::And(sub(rng), sub(rng)),
        3 => Body::Or(sub(rng), sub(rng)),
        4 => Body::Implies(sub(rng), sub(rng)),
        _ => Body::Iff(sub(rng), sub(rng)),
    }
}

/// A random network with `1..=max_names` sentences `s0..` and up to
/// `max_base` base atoms `b0..`. With `liar` set, `s0` is a liar.
pub fn random_network(
    rng: &mut impl Rng,
    max_names: usize,
    max_base: usize,
    liar: bool,
) -> SentenceNetwork {
    let n = rng.gen_range(1..=max_names);
    let k = rng.gen_range(0..=max_base);
    let bodies = (0..n)
        .map(|i| {
            if i == 0 && liar {
                Body::Not(Box::new(Body::T(0)))
            } else {
                let size = rng.gen_range(0..5);
                random_body(rng, n, k, size)
            }
        })
        .collect();
    let base = (0..k).map(|_| rng.gen_bool(0.5)).collect();
    SentenceNetwork::new(
        (0..n).map(|i| format!("s{i}")).collect(),
        bodies,
        (0..k).map(|i| format!("b{i}")).collect(),
        base,
    )
    .expect("generated networks are well formed")
}

fn truth_gen(
    rng: &mut impl Rng,
    net: &SentenceNetwork,
    vars: &mut Vec<String>,
    q: usize,
    m: usize,
    md: usize,
    size: usize,
) -> Formula {
    let atom = |rng: &mut dyn rand::RngCore, vars: &[String]| {
        let v = |rng: &mut dyn rand::RngCore| {
            Var::stat(vars.choose(rng).expect("some variable").clone())
        };
        match rng.gen_range(0..6) {
            0 if !net.base_names().is_empty() => {
                Formula::atom(net.base_names().choose(rng).expect("non-empty"), &[])
            }
            1 => Formula::eq(v(rng), v(rng)),
            _ => Formula::atom(TRUTH, &[v(rng)]),
        }
    };
    if size == 0 {
        return atom(rng, vars);
    }
    let roll = rng.gen_range(0..10);
    match roll {
        0 | 1 => atom(rng, vars),
        2 => Formula::not(truth_gen(rng, net, vars, q, m, md, size - 1)),
        3 => Formula::and(
            truth_gen(rng, net, vars, q, m, md, size / 2),
            truth_gen(rng, net, vars, q, m, md, size / 2),
        ),
        4 => Formula::or(
            truth_gen(rng, net, vars, q, m, md, size / 2),
            truth_gen(rng, net, vars, q, m, md, size / 2),
        ),
        5 if q < 1 => {
            let name = BOUND[q].to_string();
            vars.push(name.clone());
            let body = truth_gen(rng, net, vars, q + 1, m, md, size - 1);
            vars.pop();
            if rng.gen_bool(0.5) {
                Formula::exists(Var::stat(name), body)
            } else {
                Formula::forall(Var::stat(name), body)
            }
        }
        6..=8 if m < md => {
            let body = truth_gen(rng, net, vars, q, m + 1, md, size - 1);
            if roll == 6 {
                Formula::boxed(body)
            } else {
                Formula::dia(body)
            }
        }
        _ => Formula::not(truth_gen(rng, net, vars, q, m, md, size - 1)),
    }
}

/// A random formula over the truth signature of `net`, with free variables
/// named after its sentences and modal depth at most `modal_depth`.
pub fn random_truth_formula(
    rng: &mut impl Rng,
    net: &SentenceNetwork,
    modal_depth: usize,
) -> Formula {
    let mut vars: Vec<String> = net.names().to_vec();
    let size = rng.gen_range(1..8);
    truth_gen(rng, net, &mut vars, 0, 0, modal_depth, size)
}
