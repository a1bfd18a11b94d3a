use proptest::prelude::*;
use rand::Rng;

use devmodal::checker::sweeps::{
    cmp_sweep, converge_sweep, dynsub_sweep, mirroring_sweep, tele_sweep,
};
use devmodal::checker::{sigma2_certificate, verify_sigma2_exhaustive, Sigma2Outcome};
use devmodal::fuzz::{case_rng, random_formula, random_structure, FormulaParams};
use devmodal::logic::{Formula, Var};

// Each case is a fresh seed for the seeded sweeps, which generate and check
// a handful of models per seed.
proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mirroring_holds(seed in any::<u64>()) {
        let r = mirroring_sweep(seed, 8);
        prop_assert!(r.failures.is_empty(), "{:?}", r.failures);
    }

    #[test]
    fn literals_converge(seed in any::<u64>()) {
        let r = converge_sweep(seed, 8);
        prop_assert!(r.failures.is_empty(), "{:?}", r.failures);
    }

    #[test]
    fn cmp_schemata_are_valid(seed in any::<u64>()) {
        let r = cmp_sweep(seed, 4);
        prop_assert!(r.failures.is_empty(), "{:?}", r.failures);
    }

    #[test]
    fn teleology_collapses(seed in any::<u64>()) {
        let r = tele_sweep(seed, 8);
        prop_assert!(r.failures.is_empty(), "{:?}", r.failures);
    }

    #[test]
    fn dynamic_substitution_matches_manifestation(seed in any::<u64>()) {
        let r = dynsub_sweep(seed, 8);
        prop_assert!(r.failures.is_empty(), "{:?}", r.failures);
    }

    #[test]
    fn sigma2_certificates_verify(seed in any::<u64>()) {
        let mut rng = case_rng(seed, 0);
        let k = rng.gen_range(1..=4);
        let u = random_structure(&mut rng, k);
        let fp = FormulaParams { quantifier_depth: 0, modal_depth: 0, free: vec!["a", "b"], dynamic_atoms: false };
        let body = random_formula(&mut rng, &fp);
        let phi = Formula::exists(Var::stat("a"), Formula::forall(Var::stat("b"), body));
        match sigma2_certificate(&u, &phi).unwrap() {
            Sigma2Outcome::Certificate(_) => prop_assert!(verify_sigma2_exhaustive(&u, &phi).unwrap(), "{}", phi),
            Sigma2Outcome::NoCertificate => {}
        }
    }
}
