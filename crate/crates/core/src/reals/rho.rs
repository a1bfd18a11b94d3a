//! The convergence and equivalence formulas on finite rational grids.
//!
//! A grid model has one state per non-empty subset of a finite lattice of
//! rationals, ordered by inclusion, with static `le`, `lt`, `add`, `mul`
//! and `pos`. `|x - y| < z` is written with negated existentials so that it
//! stays exact on a lattice segment that is not closed under addition.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{cauchy_convergent, cauchy_equiv, q, qi, IndexFrame, Net, NetError, Verdict, Q};
use crate::checker::holds_everywhere;
use crate::devmodel::{
    extend_by_dynamic, subset_name, DevelopmentModel, Frame, FunctionalDynamicTuple,
};
use crate::eval::{eval, Assignment};
use crate::logic::{
    dyn_sort, dynamic_substitute, parse_formula, potentialist_translate, Formula, RelKind,
    Signature, Var, WrapMode, STAT,
};
use crate::omega::{lasso_holds, Lasso};
use crate::structures::{Elem, FiniteStructure};

/// Largest lattice used for a periodic ω-net.
pub const MAX_LATTICE: usize = 64;

/// `{k * h : lo <= k <= hi}`.
pub fn lattice(h: &Q, lo: i64, hi: i64) -> Vec<Q> {
    (lo..=hi).map(|k| qi(k) * h).collect()
}

fn grid_signature() -> Signature {
    Signature::new()
        .with_relation("le", &[STAT, STAT], RelKind::Static)
        .with_relation("lt", &[STAT, STAT], RelKind::Static)
        .with_relation("add", &[STAT, STAT, STAT], RelKind::Static)
        .with_relation("mul", &[STAT, STAT, STAT], RelKind::Static)
        .with_relation("pos", &[STAT], RelKind::Static)
}

fn elem(v: &Q) -> Elem {
    Elem::new(&v.to_string())
}

/// The structure on `grid` with its order, arithmetic and positivity.
pub fn grid_structure(grid: &[Q]) -> FiniteStructure {
    let mut u = FiniteStructure::new(grid_signature());
    let idx: BTreeMap<&Q, Elem> = grid.iter().map(|v| (v, elem(v))).collect();
    for e in idx.values() {
        u.add_element(STAT, e.clone()).expect("Stat");
    }
    for (a, ea) in &idx {
        if a.is_positive() {
            u.add_tuple("pos", vec![ea.clone()]).expect("declared");
        }
        for (b, eb) in &idx {
            if a <= b {
                u.add_tuple("le", vec![ea.clone(), eb.clone()])
                    .expect("declared");
            }
            if a < b {
                u.add_tuple("lt", vec![ea.clone(), eb.clone()])
                    .expect("declared");
            }
            if let Some(ec) = idx.get(&(*a + *b)) {
                u.add_tuple("add", vec![ea.clone(), eb.clone(), ec.clone()])
                    .expect("declared");
            }
            if let Some(ec) = idx.get(&(*a * *b)) {
                u.add_tuple("mul", vec![ea.clone(), eb.clone(), ec.clone()])
                    .expect("declared");
            }
        }
    }
    u
}

/// Non-empty subsets of a grid ordered by inclusion.
#[derive(Clone, Debug)]
pub struct GridModel {
    pub grid: Vec<Q>,
    pub model: DevelopmentModel,
    /// Per state, its members.
    pub members: Vec<Vec<Q>>,
}

pub fn grid_model(grid: &[Q]) -> Result<GridModel, NetError> {
    let mut grid = grid.to_vec();
    grid.sort();
    grid.dedup();
    assert!(
        grid.len() <= crate::devmodel::FIN_DEV_LIMIT,
        "grid too large for subset states"
    );
    let full = grid_structure(&grid);
    let masks: Vec<usize> = (1..1usize << grid.len()).collect();
    let members: Vec<Vec<Q>> = masks
        .iter()
        .map(|m| {
            grid.iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .map(|(_, v)| v.clone())
                .collect()
        })
        .collect();
    let names = members
        .iter()
        .map(|s| subset_name(&s.iter().map(elem).collect()))
        .collect();
    let frame = Frame::from_order(names, |a, b| masks[a] & masks[b] == masks[a]);
    let structs = members
        .iter()
        .map(|s| Arc::new(full.induced_on_stat(&s.iter().map(elem).collect())))
        .collect();
    Ok(GridModel {
        grid,
        model: DevelopmentModel::new(frame, structs)?,
        members,
    })
}

impl GridModel {
    pub fn frame(&self) -> Arc<Frame> {
        Arc::new(self.model.frame().clone())
    }

    /// Extends the model by one dynamic individual per value list.
    pub fn with_individuals(
        &self,
        ds: &[Vec<Q>],
    ) -> Result<(DevelopmentModel, Vec<Elem>), NetError> {
        let tuples: Vec<FunctionalDynamicTuple> = ds
            .iter()
            .map(|d| FunctionalDynamicTuple {
                arity: 1,
                values: d.iter().map(|v| vec![elem(v)]).collect(),
            })
            .collect();
        Ok(extend_by_dynamic(&self.model, &tuples)?)
    }

    /// Every function choosing a member of each state, in odometer order.
    pub fn all_individuals(&self) -> Vec<Vec<Q>> {
        let mut out = vec![Vec::new()];
        for m in &self.members {
            out = out
                .into_iter()
                .flat_map(|p| m.iter().map(move |v| [p.clone(), vec![v.clone()]].concat()))
                .collect();
        }
        out
    }
}

/// `|x - y| < z` over `le` and `add`.
pub fn abs_lt_text(x: &str, y: &str, z: &str) -> String {
    format!("(not exists w (add({y}, {z}, w) and le(w, {x}))) and not exists w (add({x}, {z}, w) and le(w, {y}))")
}

fn dist_translated(sig: &Signature) -> Formula {
    let plain = parse_formula(&abs_lt_text("x", "y", "z"), sig).expect("distance formula parses");
    potentialist_translate(&plain).expect("modal-free")
}

fn dyn1(name: &str) -> Var {
    Var::new(name, dyn_sort(1))
}

fn full_sig(sig: &Signature) -> Signature {
    let mut s = sig.clone();
    if !s.has_sort(&dyn_sort(1)) {
        s.add_sort(&dyn_sort(1)).expect("Dyn1");
    }
    s
}

/// `box forall z (pos(z) -> dia box exists x ((x) <<- xi and box D))` where
/// `D` is the potentialist distance formula with `xi` substituted for `y`.
pub fn rho_formula() -> Formula {
    let sig = full_sig(&grid_signature());
    let d = dynamic_substitute(
        &dist_translated(&sig),
        &[Var::stat("y")],
        &dyn1("xi"),
        WrapMode::Mentioning,
    )
    .expect("xi is fresh");
    let text = format!("box forall z (pos(z) -> dia box exists x ((x) <<- xi and box ({d})))");
    parse_formula(&text, &sig).expect("rho parses")
}

/// `box forall z (pos(z) -> dia box D)` with `xi` for `x` and `upsilon`
/// for `y`.
pub fn equiv_formula() -> Formula {
    let sig = full_sig(&grid_signature());
    let d = dynamic_substitute(
        &dist_translated(&sig),
        &[Var::stat("y")],
        &dyn1("upsilon"),
        WrapMode::Mentioning,
    )
    .and_then(|d| dynamic_substitute(&d, &[Var::stat("x")], &dyn1("xi"), WrapMode::Mentioning))
    .expect("fresh dynamic variables");
    parse_formula(&format!("box forall z (pos(z) -> dia box ({d}))"), &sig)
        .expect("equivalence parses")
}

fn boxed_relation(rel: &str) -> Formula {
    let sig = full_sig(&grid_signature());
    let atom = parse_formula(&format!("{rel}(x, y, w)"), &sig).expect("atom parses");
    let f = [("x", "xi"), ("y", "upsilon"), ("w", "zeta")]
        .iter()
        .fold(atom, |f, (v, d)| {
            dynamic_substitute(&f, &[Var::stat(*v)], &dyn1(d), WrapMode::Mentioning).expect("fresh")
        });
    parse_formula(&format!("box ({f})"), &sig).expect("boxed relation parses")
}

/// `box add(xi, upsilon, zeta)` by dynamic substitution.
pub fn plus_formula() -> Formula {
    boxed_relation("add")
}

/// `box mul(xi, upsilon, zeta)` by dynamic substitution.
pub fn times_formula() -> Formula {
    boxed_relation("mul")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainLine {
    pub statement: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RhoReport {
    /// The formula evaluated literally, when a finite presentation exists.
    pub literal: Option<bool>,
    pub chain: Vec<ChainLine>,
    pub verdict: Verdict,
}

impl RhoReport {
    /// All evaluated sides agree.
    pub fn agree(&self) -> bool {
        let mut vals = self.chain.iter().map(|c| c.holds).chain(self.literal);
        let first = vals.next();
        vals.all(|v| Some(v) == first)
            && match (&self.verdict, first) {
                (Verdict::Certified { .. }, Some(v)) => v,
                (Verdict::Refuted { .. }, Some(v)) => !v,
                _ => true,
            }
    }

    pub fn holds(&self) -> Option<bool> {
        self.literal.or_else(|| self.chain.last().map(|c| c.holds))
    }
}

const CHAIN: [&str; 5] = [
    "rho(xi) holds in the model",
    "forall z forall s in states_z exists t >= s forall t' >= t forall t'' >= t': t'' |= (|D(t') - D(t'')| < z)^dia",
    "forall z forall s in states_z exists t >= s forall t' >= t forall t'' >= t': |D(t') - D(t'')| < z",
    "forall z exists t in states_z forall t' >= t forall t'' >= t': |D(t') - D(t'')| < z",
    "forall z exists t in states_z forall t', t'' >= t: |D(t') - D(t'')| < z",
];

/// Evaluates rho for the individual with values `d` on a grid model, both
/// literally and along each line of the equivalence chain; `z` ranges over
/// the positive grid points.
pub fn eval_rho(g: &GridModel, d: &[Q]) -> Result<RhoReport, NetError> {
    let (m, fresh) = g.with_individuals(&[d.to_vec()])?;
    let rho = rho_formula();
    let mut asg = Assignment::new();
    asg.insert("xi".into(), fresh[0].clone());
    let literal = holds_everywhere(&m, &rho, &asg)?;

    let f = m.frame();
    let sig = full_sig(&grid_signature());
    let dist = dist_translated(&sig);
    let zs: Vec<&Q> = g.grid.iter().filter(|v| v.is_positive()).collect();
    let states_z = |z: &Q| {
        (0..f.len())
            .filter(|&s| g.members[s].contains(z))
            .collect::<Vec<_>>()
    };
    let exact = |a: usize, b: usize, z: &Q| (&d[a] - &d[b]).abs() < *z;
    let modal = |a: usize, b: usize, z: &Q| -> Result<bool, NetError> {
        let mut asg = Assignment::new();
        asg.insert("x".into(), elem(&d[a]));
        asg.insert("y".into(), elem(&d[b]));
        asg.insert("z".into(), elem(z));
        Ok(eval(&m, b, &dist, &asg).map_err(crate::checker::CheckError::from)?)
    };
    let nested = |t: usize,
                  z: &Q,
                  test: &dyn Fn(usize, usize, &Q) -> Result<bool, NetError>|
     -> Result<bool, NetError> {
        for &t1 in f.above(t) {
            for &t2 in f.above(t1) {
                if !test(t1, t2, z)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    };
    let line_from_s =
        |test: &dyn Fn(usize, usize, &Q) -> Result<bool, NetError>| -> Result<bool, NetError> {
            for z in &zs {
                for s in states_z(z) {
                    let mut found = false;
                    for &t in f.above(s) {
                        if nested(t, z, test)? {
                            found = true;
                            break;
                        }
                    }
                    if !found {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        };
    let exact_test = |a: usize, b: usize, z: &Q| Ok(exact(a, b, z));
    let line2 = line_from_s(&modal)?;
    let line3 = line_from_s(&exact_test)?;
    let mut line4 = true;
    let mut line5 = true;
    for z in &zs {
        let cands = states_z(z);
        let mut l4 = false;
        for &t in &cands {
            if nested(t, z, &exact_test)? {
                l4 = true;
                break;
            }
        }
        line4 &= l4;
        line5 &= cands.iter().any(|&t| {
            f.above(t)
                .iter()
                .all(|&a| f.above(t).iter().all(|&b| exact(a, b, z)))
        });
    }
    let values = [literal, line2, line3, line4, line5];
    let chain = CHAIN
        .iter()
        .zip(values)
        .map(|(s, holds)| ChainLine {
            statement: s.to_string(),
            holds,
        })
        .collect();
    let net = Net::on_frame("D_xi", Arc::new(f.clone()), d.to_vec());
    Ok(RhoReport {
        literal: Some(literal),
        chain,
        verdict: cauchy_convergent(&net, 0),
    })
}

/// `xi ~ upsilon` evaluated literally on a grid model, paired with the
/// net-level verdict.
pub fn eval_equiv(g: &GridModel, d1: &[Q], d2: &[Q]) -> Result<(bool, Verdict), NetError> {
    let (m, fresh) = g.with_individuals(&[d1.to_vec(), d2.to_vec()])?;
    let mut asg = Assignment::new();
    asg.insert("xi".into(), fresh[0].clone());
    asg.insert("upsilon".into(), fresh[1].clone());
    let literal = holds_everywhere(&m, &equiv_formula(), &asg)?;
    let f = g.frame();
    let v = cauchy_equiv(
        &Net::on_frame("xi", f.clone(), d1.to_vec()),
        &Net::on_frame("upsilon", f, d2.to_vec()),
        0,
    )?;
    Ok((literal, v))
}

fn lattice_for(values: &[Q]) -> Option<Vec<Q>> {
    let den = values
        .iter()
        .fold(num_bigint::BigInt::from(1), |acc, v| acc.lcm(v.denom()));
    let h = Q::new(1.into(), den);
    let ks: Vec<i64> = values
        .iter()
        .map(|v| (v / &h).to_integer().try_into().ok())
        .collect::<Option<_>>()?;
    let lo = ks.iter().copied().min().unwrap_or(0).min(0);
    let hi = ks.iter().copied().max().unwrap_or(1).max(1);
    ((hi - lo + 1) as usize <= MAX_LATTICE).then(|| lattice(&h, lo, hi))
}

/// rho for an ω-net. A declared-periodic net whose values fit a small
/// lattice is also evaluated literally on its lasso; otherwise the last line
/// of the chain is decided by the modulus.
pub fn eval_rho_omega(net: &Net, horizon: usize) -> Result<RhoReport, NetError> {
    if net.frame() != &IndexFrame::Omega {
        return Err(NetError::FrameMismatch);
    }
    let verdict = cauchy_convergent(net, horizon);
    let last = |holds: bool| ChainLine {
        statement: CHAIN[4].to_string(),
        holds,
    };
    if let Some((mu, pi)) = net.period() {
        let values: Vec<Q> = (0..mu + pi).map(|s| net.value(s)).collect();
        if let Some(grid) = lattice_for(&values) {
            let base = grid_structure(&grid);
            let frame_model = crate::devmodel::simple_dev(&base, Frame::chain(mu + pi))?;
            let ds = FunctionalDynamicTuple {
                arity: 1,
                values: values.iter().map(|v| vec![elem(v)]).collect(),
            };
            let (m, fresh) = extend_by_dynamic(&frame_model, &[ds])?;
            let lasso =
                Lasso::new(mu, pi, m.structures().to_vec()).map_err(|e| NetError::Undecided {
                    real: e.to_string(),
                    q: String::new(),
                    bits: 0,
                })?;
            let mut asg = Assignment::new();
            asg.insert("xi".into(), fresh[0].clone());
            let literal =
                lasso_holds(&lasso, &rho_formula(), &asg).map_err(|e| NetError::Undecided {
                    real: e.to_string(),
                    q: String::new(),
                    bits: 0,
                })?;
            let holds = verdict.is_certified();
            return Ok(RhoReport {
                literal: Some(literal),
                chain: vec![last(holds)],
                verdict,
            });
        }
    }
    match &verdict {
        Verdict::Certified { .. } => Ok(RhoReport {
            literal: None,
            chain: vec![last(true)],
            verdict,
        }),
        Verdict::Refuted { .. } => Ok(RhoReport {
            literal: None,
            chain: vec![last(false)],
            verdict,
        }),
        _ => Err(NetError::NoModulus(net.name.clone())),
    }
}

/// The grid `{0, 1/2, 1}`.
pub fn small_grid() -> Vec<Q> {
    vec![Q::zero(), q(1, 2), qi(1)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reals::{best_approximant, const_net, Real};

    #[test]
    fn distance_formula_is_exact_on_lattices() {
        let grid = lattice(&q(1, 2), -2, 2);
        let u = grid_structure(&grid);
        let sig = grid_signature();
        let f = parse_formula(&abs_lt_text("x", "y", "z"), &sig).unwrap();
        for a in &grid {
            for b in &grid {
                for c in grid.iter().filter(|c| c.is_positive()) {
                    let mut asg = Assignment::new();
                    asg.insert("x".into(), elem(a));
                    asg.insert("y".into(), elem(b));
                    asg.insert("z".into(), elem(c));
                    let got = eval(&crate::eval::Single(&u), 0, &f, &asg).unwrap();
                    assert_eq!(got, (a - b).abs() < *c, "{a} {b} {c}");
                }
            }
        }
    }

    #[test]
    fn rho_on_best_approximants() {
        let g = grid_model(&small_grid()).unwrap();
        let d: Vec<Q> = g
            .members
            .iter()
            .map(|s| best_approximant(&Real::rational(q(1, 2)), s).unwrap())
            .collect();
        let r = eval_rho(&g, &d).unwrap();
        assert_eq!(r.holds(), Some(true));
        assert!(r.agree(), "{r:?}");
    }

    #[test]
    fn rho_chain_agrees_on_every_individual() {
        let g = grid_model(&small_grid()).unwrap();
        let all = g.all_individuals();
        assert_eq!(all.len(), 24);
        let mut counts = [0, 0];
        for d in &all {
            let r = eval_rho(&g, d).unwrap();
            assert!(r.agree(), "{d:?}: {r:?}");
            counts[r.holds().unwrap() as usize] += 1;
        }
        // the value at the top state decides, so every individual converges
        assert_eq!(counts, [0, 24]);
    }

    #[test]
    fn equivalence_matches_nets() {
        let g = grid_model(&small_grid()).unwrap();
        let all = g.all_individuals();
        for (i, a) in all.iter().enumerate().step_by(5) {
            for b in all.iter().skip(i % 3).step_by(4) {
                let (lit, v) = eval_equiv(&g, a, b).unwrap();
                assert_eq!(lit, v.is_certified(), "{a:?} {b:?}");
            }
        }
    }

    #[test]
    fn arithmetic_formulas_are_pointwise() {
        let g = grid_model(&small_grid()).unwrap();
        let all = g.all_individuals();
        let mut seen = [0usize; 2];
        for (i, a) in all.iter().enumerate().step_by(3) {
            for (j, b) in all.iter().enumerate().skip(i % 2).step_by(5) {
                let c = &all[(i * 7 + j) % all.len()];
                let (m, fresh) = g
                    .with_individuals(&[a.clone(), b.clone(), c.clone()])
                    .unwrap();
                let mut asg = Assignment::new();
                for (v, e) in ["xi", "upsilon", "zeta"].iter().zip(&fresh) {
                    asg.insert(v.to_string(), e.clone());
                }
                let sum = (0..a.len()).all(|s| &a[s] + &b[s] == c[s]);
                let prod = (0..a.len()).all(|s| &a[s] * &b[s] == c[s]);
                assert_eq!(holds_everywhere(&m, &plus_formula(), &asg).unwrap(), sum);
                assert_eq!(holds_everywhere(&m, &times_formula(), &asg).unwrap(), prod);
                seen[prod as usize] += 1;
            }
        }
        let top: Vec<Q> = g
            .members
            .iter()
            .map(|s| s.iter().max().unwrap().clone())
            .collect();
        let ones: Vec<Q> = top.iter().map(|_| qi(1)).collect();
        let (m, fresh) = g
            .with_individuals(&[top.clone(), top.clone(), top.clone()])
            .unwrap();
        let mut asg = Assignment::new();
        for (v, e) in ["xi", "upsilon", "zeta"].iter().zip(&fresh) {
            asg.insert(v.to_string(), e.clone());
        }
        // top * top = top fails only where the top is 1/2
        assert!(!holds_everywhere(&m, &times_formula(), &asg).unwrap());
        assert_ne!(top, ones);
        assert!(seen[0] > 0);
    }

    #[test]
    fn omega_rho() {
        let osc = Net::omega("osc", |s| if s % 2 == 0 { qi(1) } else { qi(-1) }).with_period(0, 2);
        let r = eval_rho_omega(&osc, 10).unwrap();
        assert_eq!(r.literal, Some(false));
        assert!(r.agree());
        assert_eq!(
            r.verdict,
            Verdict::Refuted {
                eps: "1".into(),
                at: (0, 1)
            }
        );
        let c = eval_rho_omega(&const_net(q(1, 3)), 10).unwrap();
        assert_eq!(c.literal, Some(true));
        assert!(c.agree());
        let l = eval_rho_omega(&crate::reals::leibniz_net(), 10).unwrap();
        assert_eq!((l.literal, l.holds()), (None, Some(true)));
        assert!(eval_rho_omega(&Net::omega("bare", |s| qi(s as i64)), 10).is_err());
    }
}
