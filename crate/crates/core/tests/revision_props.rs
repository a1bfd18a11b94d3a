use proptest::prelude::*;
use rand::Rng;

use devmodal::fuzz::{case_rng, random_network};
use devmodal::revision::sweeps::revision_sweep;
use devmodal::revision::{
    gamma, parse_network, revision_sequence, truth_dev_model, write_network, Hypothesis,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn revision_is_deterministic_and_bounded(seed in any::<u64>(), liar in any::<bool>()) {
        let mut rng = case_rng(seed, 0);
        let net = random_network(&mut rng, 4, 2, liar);
        let p0 = Hypothesis(rng.gen_range(0..1u64 << net.len()));
        let seq = revision_sequence(&net, p0);
        prop_assert_eq!(&revision_sequence(&net, p0), &seq);
        prop_assert_eq!(gamma(&net, p0), gamma(&net, p0));
        prop_assert!(seq.mu + seq.pi <= (1 << net.len()) + 1);
        for n in 0..seq.mu + 2 * seq.pi {
            prop_assert_eq!(seq.at(n + 1), gamma(&net, seq.at(n)));
        }
    }

    #[test]
    fn liar_alternates_with_period_two(seed in any::<u64>()) {
        let mut rng = case_rng(seed, 1);
        let net = random_network(&mut rng, 4, 2, true);
        let p0 = Hypothesis(rng.gen_range(0..1u64 << net.len()));
        let seq = revision_sequence(&net, p0);
        prop_assert_eq!(seq.pi % 2, 0);
        for n in seq.mu..seq.mu + 2 * seq.pi {
            prop_assert_ne!(seq.at(n).contains(0), seq.at(n + 1).contains(0));
        }
    }

    #[test]
    fn truth_models_validate(seed in any::<u64>(), liar in any::<bool>()) {
        let mut rng = case_rng(seed, 2);
        let net = random_network(&mut rng, 4, 2, liar);
        let p0 = Hypothesis(rng.gen_range(0..1u64 << net.len()));
        let l = truth_dev_model(&net, p0).unwrap();
        let v = l.validate();
        prop_assert!(v.is_valid(), "{:?}", v.violations);
    }

    #[test]
    fn network_text_round_trips(seed in any::<u64>()) {
        let net = random_network(&mut case_rng(seed, 3), 4, 2, false);
        let text = write_network(&net);
        prop_assert_eq!(write_network(&parse_network(&text).unwrap()), text);
    }

    #[test]
    fn lasso_matches_direct_iteration(seed in any::<u64>()) {
        let r = revision_sweep(seed, 4);
        prop_assert!(r.failures.is_empty(), "{:?}", r.failures);
    }
}
