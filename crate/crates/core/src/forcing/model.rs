use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Display;
use std::hash::Hash;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::{
    contains_maximal, enumerate_posets, gen_pnames, ideals, is_generic_ideal, is_ideal, val_memo,
    ForcingError, HFSet, PName, Poset,
};
use crate::devmodel::{DevelopmentModel, Frame, FunctionalDynamicTuple};
use crate::eval::{eval, Assignment};
use crate::logic::{Formula, RelKind, Signature, Var, STAT};
use crate::structures::{Elem, FiniteStructure};

pub const MEMBERSHIP: &str = "in_star";

/// The development model over an ideal whose `Stat` domain is a set of names.
#[derive(Clone, Debug)]
pub struct ForcingModel {
    pub poset: Poset,
    pub ideal: Vec<usize>,
    /// Names in the domain, closed under taking the names inside a name.
    pub names: Vec<PName>,
    elems: HashMap<PName, Elem>,
    pub model: DevelopmentModel,
}

fn close_names(names: &[PName]) -> Vec<PName> {
    let mut all = BTreeSet::new();
    let mut stack: Vec<PName> = names.to_vec();
    while let Some(n) = stack.pop() {
        if all.insert(n.clone()) {
            stack.extend(n.pairs().map(|(s, _)| s.clone()));
        }
    }
    all.into_iter().collect()
}

/// States are the members of `ideal` ordered as in the poset; at `s`,
/// `in_star(x, y)` holds iff `(x, q)` is in `y` for some `q <= s`.
pub fn forcing_dev_model(
    p: &Poset,
    ideal: &[usize],
    names: &[PName],
) -> Result<ForcingModel, ForcingError> {
    if !is_ideal(p, ideal) {
        let ls: Vec<&str> = ideal
            .iter()
            .filter(|&&i| i < p.len())
            .map(|&i| p.label(i))
            .collect();
        return Err(ForcingError::NotAnIdeal(format!("{{{}}}", ls.join(","))));
    }
    let mut ideal = ideal.to_vec();
    ideal.sort_unstable();
    ideal.dedup();
    let names = close_names(names);
    let elems: HashMap<PName, Elem> = names
        .iter()
        .map(|n| (n.clone(), Elem::from(n.display(p).to_string())))
        .collect();
    let sig = Arc::new(Signature::new().with_relation(MEMBERSHIP, &[STAT, STAT], RelKind::Dynamic));
    let mut base = FiniteStructure::with_signature(sig);
    for n in &names {
        base.add_element(STAT, elems[n].clone()).expect("Stat");
    }
    let structures = ideal
        .iter()
        .map(|&s| {
            let mut u = base.clone();
            for tau in &names {
                for (sigma, q) in tau.pairs() {
                    if p.le(*q, s) {
                        u.add_tuple(MEMBERSHIP, vec![elems[sigma].clone(), elems[tau].clone()])
                            .expect("closed names");
                    }
                }
            }
            Arc::new(u)
        })
        .collect();
    let labels = ideal.iter().map(|&i| p.label(i).to_string()).collect();
    let frame = Frame::from_order(labels, |a, b| p.le(ideal[a], ideal[b]));
    let model = DevelopmentModel::new(frame, structures).expect("shared signature");
    Ok(ForcingModel {
        poset: p.clone(),
        ideal,
        names,
        elems,
        model,
    })
}

impl ForcingModel {
    pub fn elem(&self, n: &PName) -> Option<&Elem> {
        self.elems.get(n)
    }

    fn asg(&self, sigma: &PName, tau: &PName) -> Assignment {
        [
            ("x".to_string(), self.elems[sigma].clone()),
            ("y".to_string(), self.elems[tau].clone()),
        ]
        .into_iter()
        .collect()
    }

    fn atom() -> Formula {
        Formula::atom(MEMBERSHIP, &[Var::stat("x"), Var::stat("y")])
    }

    fn everywhere(&self, f: &Formula, asg: &Assignment) -> bool {
        (0..self.model.len()).all(|s| eval(&self.model, s, f, asg).expect("bound"))
    }

    /// `M |= dia box (sigma in* tau)`.
    pub fn tele_in(&self, sigma: &PName, tau: &PName) -> bool {
        self.everywhere(
            &Formula::dia(Formula::boxed(Self::atom())),
            &self.asg(sigma, tau),
        )
    }

    pub fn holds_at(&self, s: usize, sigma: &PName, tau: &PName) -> bool {
        eval(&self.model, s, &Self::atom(), &self.asg(sigma, tau)).expect("bound")
    }

    /// Teleological membership between names of the domain. Only names
    /// occurring in `tau` can be related to it, so only those are evaluated.
    pub fn membership(&self) -> BTreeMap<PName, Vec<PName>> {
        self.names
            .iter()
            .map(|tau| {
                let cands: BTreeSet<&PName> = tau.pairs().map(|(s, _)| s).collect();
                let preds = cands
                    .into_iter()
                    .filter(|s| self.tele_in(s, tau))
                    .cloned()
                    .collect();
                (tau.clone(), preds)
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipRoutes {
    /// `M |= dia box (sigma in* tau)`.
    pub tele: bool,
    /// `M |= dia (sigma in* tau)`.
    pub dia: bool,
    /// `(sigma, s) in tau` for some `s` in the ideal.
    pub direct: bool,
}

impl MembershipRoutes {
    pub fn agree(&self) -> bool {
        self.tele == self.dia && self.dia == self.direct
    }
}

pub fn tele_membership(m: &ForcingModel, sigma: &PName, tau: &PName) -> MembershipRoutes {
    let asg = m.asg(sigma, tau);
    MembershipRoutes {
        tele: m.tele_in(sigma, tau),
        dia: m.everywhere(&Formula::dia(ForcingModel::atom()), &asg),
        direct: tau.pairs().any(|(s, q)| s == sigma && m.ideal.contains(q)),
    }
}

/// `mos(t) = { mos(s) : s in preds(t) }`, failing on a membership cycle.
pub fn mostowski<K: Clone + Eq + Hash + Display>(
    nodes: &[K],
    preds: &HashMap<K, Vec<K>>,
) -> Result<HashMap<K, HFSet>, ForcingError> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    let mut marks: HashMap<K, Mark> = HashMap::new();
    let mut out: HashMap<K, HFSet> = HashMap::new();
    for root in nodes {
        if marks.contains_key(root) {
            continue;
        }
        // explicit stack of (node, next child index)
        let mut stack: Vec<(K, usize)> = vec![(root.clone(), 0)];
        marks.insert(root.clone(), Mark::Open);
        while let Some((node, i)) = stack.last().cloned() {
            let children = preds.get(&node).map(Vec::as_slice).unwrap_or(&[]);
            if i < children.len() {
                stack.last_mut().expect("non-empty").1 += 1;
                let c = &children[i];
                match marks.get(c) {
                    Some(Mark::Done) => {}
                    Some(Mark::Open) => {
                        let start = stack
                            .iter()
                            .position(|(n, _)| n == c)
                            .expect("open node on stack");
                        let mut cycle: Vec<String> =
                            stack[start..].iter().map(|(n, _)| n.to_string()).collect();
                        cycle.push(c.to_string());
                        cycle.reverse();
                        return Err(ForcingError::NotWellFounded { cycle });
                    }
                    None => {
                        marks.insert(c.clone(), Mark::Open);
                        stack.push((c.clone(), 0));
                    }
                }
            } else {
                stack.pop();
                let set = HFSet::from_members(children.iter().map(|c| out[c].clone()));
                out.insert(node.clone(), set);
                marks.insert(node, Mark::Done);
            }
        }
    }
    Ok(out)
}

struct Shown<'a>(&'a PName, &'a Poset);

impl Display for Shown<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0.display(self.1))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremCheck {
    pub names: usize,
    /// Names with `mos(t) != val(t, I)`.
    pub pointwise_failures: Vec<String>,
    pub image_equal: bool,
}

impl TheoremCheck {
    pub fn passed(&self) -> bool {
        self.pointwise_failures.is_empty() && self.image_equal
    }
}

/// The collapse of teleological membership against the valuation by the ideal.
pub fn theorem_check(m: &ForcingModel) -> Result<TheoremCheck, ForcingError> {
    let rel = m.membership();
    let preds: HashMap<PName, Vec<PName>> = rel.into_iter().collect();
    // run the collapse on display wrappers so cycles print readably
    let keyed: HashMap<String, Vec<String>> = preds
        .iter()
        .map(|(t, ps)| {
            (
                Shown(t, &m.poset).to_string(),
                ps.iter().map(|s| Shown(s, &m.poset).to_string()).collect(),
            )
        })
        .collect();
    let keys: Vec<String> = m
        .names
        .iter()
        .map(|n| Shown(n, &m.poset).to_string())
        .collect();
    let mos = mostowski(&keys, &keyed)?;
    let mut memo = HashMap::new();
    let mut failures = Vec::new();
    let mut image_mos = BTreeSet::new();
    let mut image_val = BTreeSet::new();
    for (n, key) in m.names.iter().zip(&keys) {
        let v = val_memo(n, &m.ideal, &mut memo);
        let c = &mos[key];
        if *c != v {
            failures.push(format!("{key}: mos {c} val {v}"));
        }
        image_mos.insert(c.clone());
        image_val.insert(v);
    }
    Ok(TheoremCheck {
        names: m.names.len(),
        pointwise_failures: failures,
        image_equal: image_mos == image_val,
    })
}

/// `D_tau(s) = { (sigma, 0) : (sigma, q) in tau for some q <= s }` as a
/// dynamic individual, together with the model whose domain includes the
/// values of `D_tau`.
pub fn d_tau(
    m: &ForcingModel,
    tau: &PName,
) -> Result<(ForcingModel, FunctionalDynamicTuple), ForcingError> {
    let p = &m.poset;
    let values: Vec<PName> = m.ideal.iter().map(|&s| d_tau_value(p, tau, s)).collect();
    let mut names = m.names.clone();
    names.push(tau.clone());
    names.extend(values.iter().cloned());
    let ext = forcing_dev_model(p, &m.ideal, &names)?;
    let values = values.iter().map(|v| vec![ext.elems[v].clone()]).collect();
    Ok((ext, FunctionalDynamicTuple { arity: 1, values }))
}

pub(crate) fn d_tau_value(p: &Poset, tau: &PName, s: usize) -> PName {
    PName::from_pairs(
        tau.pairs()
            .filter(|(_, q)| p.le(*q, s))
            .map(|(sigma, _)| (sigma.clone(), p.bottom())),
    )
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ForceSweepReport {
    pub posets: usize,
    pub ideals: usize,
    pub names_checked: usize,
    pub pointwise_failures: usize,
    pub image_failures: usize,
    pub route_disagreements: usize,
    pub validation_failures: usize,
    pub monotonicity_failures: usize,
    pub d_tau_failures: usize,
    /// First few failure descriptions.
    pub examples: Vec<String>,
}

impl ForceSweepReport {
    pub fn passed(&self) -> bool {
        self.pointwise_failures == 0
            && self.image_failures == 0
            && self.route_disagreements == 0
            && self.validation_failures == 0
            && self.monotonicity_failures == 0
            && self.d_tau_failures == 0
            && self.names_checked > 0
    }

    fn absorb(&mut self, o: ForceSweepReport) {
        self.posets += o.posets;
        self.ideals += o.ideals;
        self.names_checked += o.names_checked;
        self.pointwise_failures += o.pointwise_failures;
        self.image_failures += o.image_failures;
        self.route_disagreements += o.route_disagreements;
        self.validation_failures += o.validation_failures;
        self.monotonicity_failures += o.monotonicity_failures;
        self.d_tau_failures += o.d_tau_failures;
        for e in o.examples {
            if self.examples.len() < 10 {
                self.examples.push(e);
            }
        }
    }
}

fn check_instance(p: &Poset, ideal: &[usize], names: &[PName]) -> ForceSweepReport {
    let mut r = ForceSweepReport {
        ideals: 1,
        ..ForceSweepReport::default()
    };
    let where_ = || {
        format!(
            "ideal {} of {}",
            p.set_label(ideal),
            super::format::write_poset(p).replace('\n', "; ")
        )
    };
    let m = match forcing_dev_model(p, ideal, names) {
        Ok(m) => m,
        Err(e) => {
            r.validation_failures += 1;
            r.examples.push(format!("{}: {e}", where_()));
            return r;
        }
    };
    if !m.model.validate().is_valid() {
        r.validation_failures += 1;
        r.examples.push(format!("{}: model invalid", where_()));
    }
    for a in 0..m.model.len() {
        for &b in m.model.frame().above(a) {
            if !m.model.structures()[a]
                .relation(MEMBERSHIP)
                .is_subset(m.model.structures()[b].relation(MEMBERSHIP))
            {
                r.monotonicity_failures += 1;
            }
        }
    }
    match theorem_check(&m) {
        Ok(t) => {
            r.names_checked += t.names;
            r.pointwise_failures += t.pointwise_failures.len();
            if !t.image_equal {
                r.image_failures += 1;
            }
            if let Some(f) = t.pointwise_failures.first() {
                r.examples.push(format!("{}: {f}", where_()));
            }
        }
        Err(e) => {
            r.pointwise_failures += 1;
            r.examples.push(format!("{}: {e}", where_()));
        }
    }
    for tau in &m.names {
        let mut sigmas: BTreeSet<&PName> = tau.pairs().map(|(s, _)| s).collect();
        sigmas.insert(tau);
        for sigma in sigmas {
            if !tele_membership(&m, sigma, tau).agree() {
                r.route_disagreements += 1;
            }
        }
        // names outside tau are neither coded nor members; probe those inside plus tau itself
        let mut probe: BTreeSet<&PName> = tau.pairs().map(|(s, _)| s).collect();
        probe.insert(tau);
        for (si, &s) in m.ideal.iter().enumerate() {
            let d = d_tau_value(p, tau, s);
            for &sigma in &probe {
                let coded = d.pairs().any(|(x, q)| x == sigma && *q == p.bottom());
                if coded != m.holds_at(si, sigma, tau) {
                    r.d_tau_failures += 1;
                }
            }
            for &t in m.model.frame().above(si) {
                let dt = d_tau_value(p, tau, m.ideal[t]);
                if !d.pairs().all(|x| dt.pairs().any(|y| y == x)) {
                    r.d_tau_failures += 1;
                }
            }
        }
    }
    r
}

/// Every poset of size `1..=max_poset`, every ideal and every name of the
/// given bounds: collapse against valuation, the three membership routes,
/// model validity, monotone membership and the `D_tau` coding.
pub fn force_sweep(
    max_poset: usize,
    rank: usize,
    width: usize,
) -> Result<ForceSweepReport, ForcingError> {
    let mut total = ForceSweepReport::default();
    for n in 1..=max_poset {
        let posets = enumerate_posets(n);
        let Some(first) = posets.first() else {
            continue;
        };
        let names = gen_pnames(first, rank, width)?;
        let mut jobs = Vec::new();
        for p in &posets {
            for i in ideals(p)? {
                jobs.push((p, i));
            }
        }
        let parts: Vec<ForceSweepReport> = jobs
            .par_iter()
            .map(|(p, i)| check_instance(p, i, &names))
            .collect();
        total.posets += posets.len();
        for part in parts {
            total.absorb(part);
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GenericSweepReport {
    pub posets: usize,
    pub ideals: usize,
    pub generic: usize,
    pub disagreements: Vec<String>,
}

/// Genericity by dense-set enumeration against "contains a maximal element".
pub fn generic_sweep(max_poset: usize) -> Result<GenericSweepReport, ForcingError> {
    let mut r = GenericSweepReport::default();
    for n in 1..=max_poset {
        let posets = enumerate_posets(n);
        r.posets += posets.len();
        let parts: Vec<Result<(usize, usize, Vec<String>), ForcingError>> = posets
            .par_iter()
            .map(|p| {
                let mut out = (0, 0, Vec::new());
                for i in ideals(p)? {
                    out.0 += 1;
                    let g = is_generic_ideal(p, &i)?;
                    if g {
                        out.1 += 1;
                    }
                    if g != contains_maximal(p, &i) {
                        out.2.push(format!(
                            "ideal {} of {}",
                            p.set_label(&i),
                            super::format::write_poset(p)
                        ));
                    }
                }
                Ok(out)
            })
            .collect();
        for part in parts {
            let (i, g, d) = part?;
            r.ideals += i;
            r.generic += g;
            r.disagreements.extend(d);
        }
    }
    Ok(r)
}
