//! Seeded sweeps over random sentence networks.

use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;

use super::{
    battery, bind_sentences, gamma, iterate_structures, revision_sequence, truth_dev_model,
    uct_fragment_check, Hypothesis,
};
use crate::checker::sweeps::SweepReport;
use crate::eval::{eval, Kripke};
use crate::fuzz::{case_rng, random_network, random_truth_formula};
use crate::omega::lasso_satisfies;
use crate::structures::FiniteStructure;

/// Formulas per network in [`revision_sweep`].
pub const FORMULAS_PER_NETWORK: usize = 4;

/// The run obtained by iterating revision directly for `mu + 3 pi` steps. A
/// modal operator at `m` ranges over `m .. max(m, mu) + pi`, which covers
/// every structure visible from `m` in the ω-run.
struct DirectRun {
    structs: Vec<Arc<FiniteStructure>>,
    above: Vec<Vec<usize>>,
}

impl DirectRun {
    fn new(structs: Vec<Arc<FiniteStructure>>, mu: usize, pi: usize) -> Self {
        let len = structs.len();
        let above = (0..len)
            .map(|m| (m..(m.max(mu) + pi).min(len)).collect())
            .collect();
        DirectRun { structs, above }
    }
}

impl Kripke for DirectRun {
    fn state_count(&self) -> usize {
        self.structs.len()
    }

    fn structure(&self, s: usize) -> &FiniteStructure {
        &self.structs[s]
    }

    fn above(&self, s: usize) -> &[usize] {
        &self.above[s]
    }
}

fn check_case(seed: u64, case: u64) -> Result<(), String> {
    let mut rng = case_rng(seed, case);
    let liar = rng.gen_bool(0.3);
    let net = random_network(&mut rng, 4, 2, liar);
    let p0 = Hypothesis(rng.gen_range(0..1u64 << net.len()));
    let seq = revision_sequence(&net, p0);
    if seq.mu + seq.pi > (1 << net.len()) + 1 {
        return Err(format!(
            "lasso ({}, {}) exceeds the pigeonhole bound",
            seq.mu, seq.pi
        ));
    }
    if revision_sequence(&net, p0) != seq {
        return Err("revision sequence is not reproducible".into());
    }
    if liar {
        for n in seq.mu..seq.mu + 2 * seq.pi {
            if seq.at(n).contains(0) == seq.at(n + 1).contains(0) {
                return Err(format!("liar does not alternate at step {n}"));
            }
        }
    }
    let l = truth_dev_model(&net, p0).map_err(|e| e.to_string())?;
    let v = l.validate();
    if !v.is_valid() {
        return Err(format!("truth model invalid: {:?}", v.violations));
    }
    let len = seq.mu + 3 * seq.pi;
    let direct = DirectRun::new(iterate_structures(&net, p0, len), seq.mu, seq.pi);
    for n in 0..len {
        if **l.state(n) != *direct.structs[n] {
            return Err(format!("lasso state {n} differs from direct iteration"));
        }
    }
    for _ in 0..FORMULAS_PER_NETWORK {
        let phi = random_truth_formula(&mut rng, &net, 2);
        let asg = bind_sentences(&net, &phi).map_err(|e| e.to_string())?;
        for n in 0..seq.mu + seq.pi {
            let exact = lasso_satisfies(&l, n, &phi, &asg).map_err(|e| e.to_string())?;
            let brute = eval(&direct, n, &phi, &asg).map_err(|e| e.to_string())?;
            if exact != brute {
                return Err(format!(
                    "{phi} at state {n}: lasso {exact}, unrolled {brute}\n{net}"
                ));
            }
        }
    }
    let g = gamma(&net, p0);
    let bad = battery(&net, g).map_err(|e| e.to_string())?;
    if !bad.is_empty() {
        return Err(format!("revised hypothesis fails the battery: {bad:?}"));
    }
    let r = uct_fragment_check(&net, p0, 1).map_err(|e| e.to_string())?;
    if !r.passed() {
        return Err(format!("compositional clauses fail: {:?}", r.violations));
    }
    Ok(())
}

/// Random networks with at most four sentences: lasso bound, liar
/// alternation, model validity, exact evaluation against direct iteration
/// unrolled to `mu + 3 pi`, and the battery on revised hypotheses.
pub fn revision_sweep(seed: u64, count: u64) -> SweepReport {
    let results = (0..count)
        .into_par_iter()
        .map(|case| match check_case(seed, case) {
            Ok(()) => (case, Some(true), None),
            Err(e) => (case, Some(false), Some(e)),
        })
        .collect();
    SweepReport::tally("revision", seed, count, results)
}
