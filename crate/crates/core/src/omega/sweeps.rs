//! Seeded sweeps over random lassos.

use rayon::prelude::*;

use super::{
    bounded_satisfies, cross_check_unrolled, lasso_holds, BoundedVerdict, LassoStream, Verdict,
};
use crate::checker::sweeps::{SweepFailure, SweepReport};
use crate::fuzz::{case_rng, random_assignment_from, random_formula, random_lasso, FormulaParams};

/// Exact lasso evaluation against the unrolled ω-prefix, for formulas of
/// modal depth at most `depth`.
pub fn lasso_exactness_sweep(seed: u64, count: u64, depth: usize) -> SweepReport {
    let fp = FormulaParams {
        quantifier_depth: 1,
        modal_depth: depth,
        free: vec!["a"],
        dynamic_atoms: true,
    };
    let results = (0..count)
        .into_par_iter()
        .map(|case| {
            let mut rng = case_rng(seed, case);
            let l = random_lasso(&mut rng, 3);
            let phi = random_formula(&mut rng, &fp);
            let Some(asg) = random_assignment_from(&mut rng, l.structures(), &phi) else {
                return (case, None, None);
            };
            match cross_check_unrolled(&l, &phi, &asg) {
                Ok(None) => (case, Some(true), None),
                Ok(Some(n)) => (
                    case,
                    Some(false),
                    Some(format!("{phi} differs at state {n}")),
                ),
                Err(e) => (case, Some(false), Some(format!("error: {e}"))),
            }
        })
        .collect();
    SweepReport::tally("lasso-exactness", seed, count, results)
}

/// Definite bounded verdicts on random lassos. Verdicts resting on
/// persistence or counterexamples must agree with exact evaluation and
/// survive doubling the horizon; so must every verdict once the horizon
/// covers the whole lasso. A window-checked verdict on a longer lasso is
/// evidence only, and its disagreements are recorded as notes.
pub fn bounded_soundness_sweep(seed: u64, count: u64, horizon: usize) -> SweepReport {
    let fp = FormulaParams {
        quantifier_depth: 1,
        modal_depth: 2,
        free: vec!["a"],
        dynamic_atoms: true,
    };
    let results: Vec<_> = (0..count)
        .into_par_iter()
        .map(|case| {
            let mut rng = case_rng(seed, case);
            let l = random_lasso(&mut rng, 3);
            let phi = random_formula(&mut rng, &fp);
            let Some(asg) = random_assignment_from(&mut rng, l.structures(), &phi) else {
                return ((case, None, None), None);
            };
            let exact = match lasso_holds(&l, &phi, &asg) {
                Ok(b) => b,
                Err(e) => return ((case, Some(false), Some(format!("error: {e}"))), None),
            };
            let covered = horizon >= l.transient() + l.period();
            let stream = LassoStream(l);
            let short = bounded_satisfies(&stream, horizon, &phi, &asg);
            let long = bounded_satisfies(&stream, 2 * horizon, &phi, &asg);
            let agrees = |v: &Verdict| match v {
                Verdict::True => exact,
                Verdict::False => !exact,
                Verdict::Unknown(_) => true,
            };
            let sound = |b: &BoundedVerdict| {
                agrees(&b.verdict)
                    && (matches!(b.verdict, Verdict::Unknown(_)) || b.verdict == long.verdict)
            };
            let detail = format!(
                "{phi}: exact {exact}, H {:?}, 2H {:?}",
                short.verdict, long.verdict
            );
            let strict = covered || !short.uses_horizon();
            if sound(&short) && agrees(&long.verdict) {
                ((case, Some(true), None), None)
            } else if strict {
                ((case, Some(false), Some(detail)), None)
            } else {
                let note = SweepFailure {
                    case,
                    detail: format!("{detail}, window evidence on a lasso longer than H"),
                };
                ((case, Some(true), None), Some(note))
            }
        })
        .collect();
    let (results, notes): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    let mut r = SweepReport::tally("bounded-soundness", seed, count, results);
    r.notes = notes.into_iter().flatten().collect();
    r
}
