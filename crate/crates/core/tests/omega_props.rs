use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use devmodal::checker::satisfies;
use devmodal::fuzz::{
    case_rng, random_assignment, random_assignment_from, random_formula, random_lasso,
    random_model, FormulaParams, ModelParams,
};
use devmodal::logic::{Formula, Var};
use devmodal::omega::sweeps::bounded_soundness_sweep;
use devmodal::omega::{cross_check_unrolled, lasso_satisfies, parse_lasso, write_lasso};

/// Positive existential formulas over the static relations.
fn positive(rng: &mut impl Rng, vars: &mut Vec<String>, size: usize) -> Formula {
    let v =
        |rng: &mut dyn rand::RngCore, vars: &[String]| Var::stat(vars.choose(rng).unwrap().clone());
    match if size == 0 { 0 } else { rng.gen_range(0..4) } {
        0 => match rng.gen_range(0..4) {
            0 => Formula::atom("P", &[v(rng, vars)]),
            1 => Formula::atom("Q", &[v(rng, vars)]),
            2 => Formula::atom("R", &[v(rng, vars), v(rng, vars)]),
            _ => Formula::eq(v(rng, vars), v(rng, vars)),
        },
        1 => Formula::and(positive(rng, vars, size / 2), positive(rng, vars, size / 2)),
        2 => Formula::or(positive(rng, vars, size / 2), positive(rng, vars, size / 2)),
        _ => {
            let name = format!("x{}", vars.len());
            vars.push(name.clone());
            let body = positive(rng, vars, size - 1);
            vars.pop();
            Formula::exists(Var::stat(name), body)
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn lasso_evaluation_is_periodic_and_exact(seed in any::<u64>(), depth in 0usize..=3) {
        let mut rng = case_rng(seed, 0);
        let l = random_lasso(&mut rng, 3);
        let fp = FormulaParams { quantifier_depth: 1, modal_depth: depth, free: vec!["a"], dynamic_atoms: true };
        let phi = random_formula(&mut rng, &fp);
        let Some(asg) = random_assignment_from(&mut rng, l.structures(), &phi) else { return Ok(()) };
        let (mu, pi) = (l.transient(), l.period());
        for n in mu..mu + pi {
            let here = lasso_satisfies(&l, n, &phi, &asg);
            if let Ok(b) = here {
                prop_assert_eq!(b, lasso_satisfies(&l, n + pi, &phi, &asg).unwrap());
            }
        }
        prop_assert_eq!(cross_check_unrolled(&l, &phi, &asg).unwrap(), None, "{}", phi);
    }

    #[test]
    fn bounded_verdicts_are_sound(seed in any::<u64>(), h in 1usize..8) {
        let r = bounded_soundness_sweep(seed, 4, h);
        prop_assert!(r.failures.is_empty(), "{:?}", r.failures);
    }

    #[test]
    fn positive_existential_facts_persist(seed in any::<u64>()) {
        let mut rng = case_rng(seed, 1);
        let m = random_model(&mut rng, &ModelParams::default());
        let mut vars = vec!["a".to_string()];
        let phi = positive(&mut rng, &mut vars, 4);
        let Some(asg) = random_assignment(&mut rng, &m, &phi) else { return Ok(()) };
        for s in 0..m.len() {
            let Ok(true) = satisfies(&m, s, &phi, &asg) else { continue };
            for &t in m.frame().above(s) {
                prop_assert!(satisfies(&m, t, &phi, &asg).unwrap(), "{} lost from {} to {}", phi, s, t);
            }
        }
    }

    #[test]
    fn lasso_text_round_trips(seed in any::<u64>()) {
        let l = random_lasso(&mut case_rng(seed, 2), 3);
        let text = write_lasso(&l);
        prop_assert_eq!(write_lasso(&parse_lasso(&text).unwrap()), text);
    }
}
