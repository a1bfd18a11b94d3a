//! Seeded randomized sweeps over generated development models.

use rayon::prelude::*;
use serde::Serialize;

use super::{
    check_cmp, check_converge, check_dynsub, check_mirroring, tele, tele_naive, tele_profile,
    CheckError,
};
use std::sync::Arc;

use super::CmpReport;
use crate::devmodel::{DevelopmentModel, Frame};
use crate::eval::Assignment;
use crate::fuzz::{
    case_rng, fuzz_signature, random_assignment, random_formula, random_literal, random_model,
    FormulaParams, ModelParams,
};
use crate::logic::{dyn_sort, WrapMode};
use crate::logic::{Formula, RelKind, Signature, Var, STAT};
use crate::structures::Elem;
use crate::structures::FiniteStructure;
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepFailure {
    pub case: u64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub name: String,
    pub seed: u64,
    pub cases: u64,
    /// Cases whose property was asserted.
    pub checked: u64,
    /// Cases generated but not asserted (no parameters available, or outside
    /// the hypotheses of the property).
    pub skipped: u64,
    pub failures: Vec<SweepFailure>,
    /// Disagreements observed on cases outside the property's hypotheses.
    pub notes: Vec<SweepFailure>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checked > 0
    }

    /// Tally per-case results: `checked` is `None` for skipped cases.
    pub(crate) fn tally(
        name: &str,
        seed: u64,
        count: u64,
        results: Vec<(u64, Option<bool>, Option<String>)>,
    ) -> Self {
        let mut r = SweepReport {
            name: name.to_string(),
            seed,
            cases: count,
            checked: 0,
            skipped: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        };
        for (case, checked, failure) in results {
            match checked {
                Some(_) => r.checked += 1,
                None => r.skipped += 1,
            }
            if let Some(detail) = failure {
                r.failures.push(SweepFailure { case, detail });
            }
        }
        r
    }
}

enum Outcome {
    Pass,
    Skip,
    Fail(String),
    Note(String),
}

fn run(
    name: &str,
    seed: u64,
    count: u64,
    f: impl Fn(u64) -> Result<Outcome, CheckError> + Sync,
) -> SweepReport {
    let outcomes: Vec<(u64, Outcome)> = (0..count)
        .into_par_iter()
        .map(|case| {
            let o = f(case).unwrap_or_else(|e| Outcome::Fail(format!("error: {e}")));
            (case, o)
        })
        .collect();
    let mut r = SweepReport {
        name: name.to_string(),
        seed,
        cases: count,
        checked: 0,
        skipped: 0,
        failures: Vec::new(),
        notes: Vec::new(),
    };
    for (case, o) in outcomes {
        match o {
            Outcome::Pass => r.checked += 1,
            Outcome::Skip => r.skipped += 1,
            Outcome::Fail(detail) => {
                r.checked += 1;
                r.failures.push(SweepFailure { case, detail });
            }
            Outcome::Note(detail) => {
                r.skipped += 1;
                r.notes.push(SweepFailure { case, detail });
            }
        }
    }
    r
}

fn describe(m: &DevelopmentModel, asg: &Assignment) -> String {
    let a: Vec<String> = asg.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("{} states, [{}]", m.len(), a.join(", "))
}

/// `union(M) |= phi(a)` iff `M |= phi^dia(a)` on random static formulas.
pub fn mirroring_sweep(seed: u64, count: u64) -> SweepReport {
    let sig = fuzz_signature();
    run("mirroring", seed, count, |case| {
        let mut rng = case_rng(seed, case);
        let m = random_model(&mut rng, &ModelParams::default());
        let phi = random_formula(&mut rng, &FormulaParams::default());
        let Some(asg) = random_assignment(&mut rng, &m, &phi) else {
            return Ok(Outcome::Skip);
        };
        let r = check_mirroring(&m, &sig, &phi, &asg)?;
        Ok(if r.agree() {
            Outcome::Pass
        } else {
            Outcome::Fail(format!(
                "{} on {}: union {} modal {}",
                phi,
                describe(&m, &asg),
                r.union_side,
                r.modal_side
            ))
        })
    })
}

/// The three readings of a literal coincide.
pub fn converge_sweep(seed: u64, count: u64) -> SweepReport {
    let sig = fuzz_signature();
    run("converge", seed, count, |case| {
        let mut rng = case_rng(seed, case);
        let m = random_model(&mut rng, &ModelParams::default());
        let phi = random_literal(&mut rng, &["a", "b"]);
        let Some(asg) = random_assignment(&mut rng, &m, &phi) else {
            return Ok(Outcome::Skip);
        };
        let r = check_converge(&m, &sig, &phi, &asg)?;
        Ok(if r.agree() {
            Outcome::Pass
        } else {
            Outcome::Fail(format!("{} on {}: {:?}", phi, describe(&m, &asg), r))
        })
    })
}

/// K, T, 4, G and Stability over random models and small formula samples.
pub fn cmp_sweep(seed: u64, count: u64) -> SweepReport {
    let sig = fuzz_signature();
    let fp = FormulaParams {
        quantifier_depth: 1,
        modal_depth: 1,
        free: vec!["a"],
        dynamic_atoms: true,
    };
    run("cmp", seed, count, |case| {
        let mut rng = case_rng(seed, case);
        let m = random_model(&mut rng, &ModelParams::default());
        let mut sample = vec![random_literal(&mut rng, &["a"])];
        sample.extend((0..2).map(|_| random_formula(&mut rng, &fp)));
        let r = check_cmp(&m, &sig, &sample)?;
        Ok(match r.violations.first() {
            None => Outcome::Pass,
            Some(v) => Outcome::Fail(format!(
                "{} {} at state {} {:?}",
                v.schema.label(),
                v.instance,
                v.state,
                v.assignment
            )),
        })
    })
}

/// A three-state fork where `R(a)` holds on one branch only, so `dia box
/// R(a) -> box dia R(a)` fails at the root. Checks that the CMP harness can
/// see a G violation.
pub fn fork_g_check() -> Result<CmpReport, CheckError> {
    let sig = Signature::new().with_relation("R", &[STAT], RelKind::Static);
    let base = FiniteStructure::new(sig.clone()).with_elements(STAT, &["a"]);
    let marked = base.clone().with_tuples("R", &[&["a"]]);
    let fork = Frame::new(vec!["r".into(), "x".into(), "y".into()], &[(0, 1), (0, 2)]);
    let m = DevelopmentModel::new(
        fork,
        vec![Arc::new(base.clone()), Arc::new(marked), Arc::new(base)],
    )
    .expect("fork states share a signature");
    check_cmp(&m, &sig, &[Formula::atom("R", &[Var::stat("a")])])
}

/// The directed shortcut agrees with per-state evaluation, and `dia box phi`
/// holds at all states or at none.
pub fn tele_sweep(seed: u64, count: u64) -> SweepReport {
    let fp = FormulaParams {
        quantifier_depth: 2,
        modal_depth: 1,
        free: vec!["a"],
        dynamic_atoms: true,
    };
    run("tele", seed, count, |case| {
        let mut rng = case_rng(seed, case);
        let m = random_model(&mut rng, &ModelParams::default());
        let phi = random_formula(&mut rng, &fp);
        let Some(asg) = random_assignment(&mut rng, &m, &phi) else {
            return Ok(Outcome::Skip);
        };
        let fast = tele(&m, &phi, &asg, None)?.verdict;
        let slow = tele_naive(&m, &phi, &asg)?;
        let profile = tele_profile(&m, &phi, &asg)?;
        let collapsed = profile.iter().all(|&b| b) || profile.iter().all(|&b| !b);
        Ok(if fast == slow && collapsed {
            Outcome::Pass
        } else {
            Outcome::Fail(format!(
                "{} on {}: fast {fast} naive {slow} profile {profile:?}",
                phi,
                describe(&m, &asg)
            ))
        })
    })
}

/// `phi(a)` against `phi(a / delta)` at a state where `delta` manifests as
/// `a`. Asserted for modal-free `phi` or constant `delta`; other cases are
/// recorded as notes when the sides differ.
pub fn dynsub_sweep(seed: u64, count: u64) -> SweepReport {
    let fp = FormulaParams {
        quantifier_depth: 1,
        modal_depth: 1,
        free: vec!["a"],
        dynamic_atoms: true,
    };
    let mp = ModelParams {
        dynamic_individuals: true,
        ..ModelParams::default()
    };
    run("dynsub", seed, count, |case| {
        let mut rng = case_rng(seed, case);
        let m = random_model(&mut rng, &mp);
        let phi = random_formula(&mut rng, &fp);
        let dyns: Vec<Elem> = m.union().domain(&dyn_sort(1)).iter().cloned().collect();
        let Some(delta) = dyns.choose(&mut rng).cloned() else {
            return Ok(Outcome::Skip);
        };
        let s = rng.gen_range(0..m.len());
        let values: Vec<Vec<Elem>> = m
            .structures()
            .iter()
            .map(|u| {
                u.manifestations(&delta, 1)
                    .first()
                    .map(|t| t.to_vec())
                    .unwrap_or_default()
            })
            .collect();
        let constant = values.windows(2).all(|w| w[0] == w[1]);
        let mut asg = Assignment::new();
        asg.insert("a".to_string(), values[s][0].clone());
        let r = check_dynsub(
            &m,
            s,
            &phi,
            &[Var::stat("a")],
            &asg,
            &delta,
            WrapMode::Mentioning,
            None,
        )?;
        let asserted = phi.is_modal_free() || constant;
        Ok(match (asserted, r.agree()) {
            (true, true) => Outcome::Pass,
            (true, false) => Outcome::Fail(format!("{phi} at state {s} with {delta}: {r:?}")),
            (false, true) => Outcome::Skip,
            (false, false) => {
                Outcome::Note(format!("{phi} at state {s} with moving {delta}: {r:?}"))
            }
        })
    })
}

/// All sweeps in a fixed order.
pub fn all_sweeps(seed: u64, count: u64) -> Vec<SweepReport> {
    vec![
        mirroring_sweep(seed, count),
        converge_sweep(seed, count),
        cmp_sweep(seed, count / 4 + 1),
        tele_sweep(seed, count),
        dynsub_sweep(seed, count),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweeps_pass_on_small_runs() {
        for r in all_sweeps(0, 60) {
            assert!(r.passed(), "{}: {:?}", r.name, r.failures);
        }
    }

    #[test]
    fn sweeps_are_deterministic() {
        assert_eq!(mirroring_sweep(5, 30), mirroring_sweep(5, 30));
        assert_eq!(dynsub_sweep(5, 30), dynsub_sweep(5, 30));
    }
}
