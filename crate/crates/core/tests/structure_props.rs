use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::Rng;

use devmodal::checker::satisfies;
use devmodal::devmodel::{simple_dev, Frame};
use devmodal::eval::Assignment;
use devmodal::fuzz::{case_rng, random_formula, random_structure, FormulaParams};
use devmodal::structures::{
    interpret, parse_structure, substructure_check, union_structure, write_structure, Elem,
    FiniteStructure,
};

fn subset(rng: &mut impl Rng, of: &BTreeSet<Elem>, p: f64) -> BTreeSet<Elem> {
    of.iter().filter(|_| rng.gen_bool(p)).cloned().collect()
}

/// A random structure and three nested induced substructures, smallest first.
fn chain(seed: u64) -> Vec<FiniteStructure> {
    let mut rng = case_rng(seed, 0);
    let k = rng.gen_range(1..=5);
    let u = random_structure(&mut rng, k);
    let b = subset(&mut rng, u.stat(), 0.7);
    let a = subset(&mut rng, &b, 0.6);
    vec![u.induced_on_stat(&a), u.induced_on_stat(&b), u]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn substructure_is_a_partial_order(seed in any::<u64>()) {
        let c = chain(seed);
        let k = c[0].signature().static_relations();
        for u in &c {
            prop_assert!(substructure_check(u, u, &k).unwrap());
        }
        for i in 0..3 {
            for j in 0..3 {
                let ij = substructure_check(&c[i], &c[j], &k).unwrap();
                let ji = substructure_check(&c[j], &c[i], &k).unwrap();
                if i <= j {
                    prop_assert!(ij);
                }
                if ij && ji {
                    prop_assert_eq!(&c[i], &c[j]);
                }
            }
        }
    }

    #[test]
    fn substructure_is_transitive_on_unrelated_triples(seed in any::<u64>()) {
        let mut rng = case_rng(seed, 1);
        let u = random_structure(&mut rng, 4);
        let k = u.signature().static_relations();
        let parts: Vec<FiniteStructure> =
            (0..3).map(|_| u.induced_on_stat(&subset(&mut rng, u.stat(), 0.6))).collect();
        let le = |a: usize, b: usize| substructure_check(&parts[a], &parts[b], &k).unwrap();
        if le(0, 1) && le(1, 2) {
            prop_assert!(le(0, 2));
        }
    }

    #[test]
    fn interpret_agrees_with_single_state_checking(seed in any::<u64>()) {
        let mut rng = case_rng(seed, 2);
        let k = rng.gen_range(1..=4);
        let u = random_structure(&mut rng, k);
        let phi = random_formula(&mut rng, &FormulaParams::default());
        let m = simple_dev(&u, Frame::chain(1)).unwrap();
        let ext = interpret(&phi, &u).unwrap();
        let vars = phi.free_vars();
        for asg in devmodal::structures::assignments(&u, &vars) {
            let t: Vec<Elem> = vars.iter().map(|v| asg[&v.name].clone()).collect();
            let asg: Assignment = asg;
            prop_assert_eq!(ext.contains(&t), satisfies(&m, 0, &phi, &asg).unwrap(), "{}", phi);
        }
    }

    #[test]
    fn union_is_idempotent_commutative_associative(seed in any::<u64>()) {
        let mut rng = case_rng(seed, 3);
        let us: Vec<FiniteStructure> = (0..3).map(|_| {
            let k = rng.gen_range(1..=4);
            random_structure(&mut rng, k)
        }).collect();
        let (a, b, c) = (&us[0], &us[1], &us[2]);
        prop_assert_eq!(union_structure([a, a]).unwrap(), a.clone());
        prop_assert_eq!(union_structure([a, b]).unwrap(), union_structure([b, a]).unwrap());
        let ab_c = union_structure([&union_structure([a, b]).unwrap(), c]).unwrap();
        let a_bc = union_structure([a, &union_structure([b, c]).unwrap()]).unwrap();
        prop_assert_eq!(ab_c, a_bc);
    }

    #[test]
    fn structure_text_round_trips(seed in any::<u64>()) {
        let mut rng = case_rng(seed, 4);
        let k = rng.gen_range(0..=4);
        let u = random_structure(&mut rng, k);
        let text = write_structure(&u);
        prop_assert_eq!(parse_structure(&text).unwrap(), u, "{}", text);
    }
}
