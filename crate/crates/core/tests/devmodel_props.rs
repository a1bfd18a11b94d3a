use proptest::prelude::*;
use rand::Rng;

use devmodal::devmodel::{fin_dev, parse_dev_model, write_dev_model};
use devmodal::fuzz::{case_rng, random_model, random_structure, ModelParams};
use devmodal::logic::STAT;

fn model(seed: u64) -> devmodal::devmodel::DevelopmentModel {
    let p = ModelParams {
        dynamic_individuals: true,
        ..ModelParams::default()
    };
    random_model(&mut case_rng(seed, 0), &p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn generated_models_validate(seed in any::<u64>()) {
        let m = model(seed);
        let v = m.validate();
        prop_assert!(v.violations.is_empty(), "{:?}", v.violations);
    }

    #[test]
    fn non_stat_domains_are_shared(seed in any::<u64>()) {
        let m = model(seed);
        let s0 = &m.structures()[0];
        for u in m.structures() {
            for sort in m.signature().sorts().filter(|s| *s != STAT) {
                prop_assert_eq!(u.domain(sort), s0.domain(sort));
            }
        }
    }

    #[test]
    fn static_facts_are_induced_upward(seed in any::<u64>()) {
        let m = model(seed);
        let f = m.frame();
        for rel in m.signature().static_relations() {
            let decl = m.signature().relation(&rel).unwrap();
            for s in 0..m.len() {
                for &t in f.above(s) {
                    let (us, ut) = (&m.structures()[s], &m.structures()[t]);
                    for a in ut.relation(&rel) {
                        if us.contains_all(&decl.sorts, a) {
                            prop_assert!(us.holds(&rel, a), "{} {:?} lost going down", rel, a);
                        }
                    }
                    for a in us.relation(&rel) {
                        prop_assert!(ut.holds(&rel, a), "{} {:?} lost going up", rel, a);
                    }
                }
            }
        }
    }

    #[test]
    fn fin_dev_has_one_state_per_subset(seed in any::<u64>()) {
        let mut rng = case_rng(seed, 1);
        let k = rng.gen_range(0..=5);
        let u = random_structure(&mut rng, k);
        let m = fin_dev(&u).unwrap();
        prop_assert_eq!(m.len(), 1usize << k);
        prop_assert!(m.validate().violations.is_empty());
    }

    #[test]
    fn model_text_round_trips(seed in any::<u64>()) {
        let m = model(seed);
        let text = write_dev_model(&m);
        let back = parse_dev_model(&text).unwrap();
        prop_assert_eq!(write_dev_model(&back), text);
    }
}
