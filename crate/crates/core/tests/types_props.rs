use proptest::prelude::*;

use devmodal::omega::Verdict;
use devmodal::types::{d_p, eventual_los, preset, tele_type, LosVerdict};

/// Quantifier-free unary formulas over the arithmetic signature.
fn qf() -> impl Strategy<Value = String> {
    let atom = prop_oneof![
        (0u64..12).prop_map(|c| format!("lt({c}, x)")),
        (0u64..12).prop_map(|c| format!("le(x, {c})")),
        (0u64..12).prop_map(|c| format!("x = {c}")),
        (0u64..12).prop_map(|c| format!("S({c}, x)")),
    ];
    atom.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| format!("not ({a})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) and ({b})")),
            (inner.clone(), inner).prop_map(|(a, b)| format!("({a}) or ({b})")),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn d_p_is_deterministic(k in 1usize..12) {
        let a = d_p(&preset("n-less-x", k).unwrap()).unwrap();
        let b = d_p(&preset("n-less-x", k).unwrap()).unwrap();
        for s in 0..30 {
            prop_assert_eq!(a.at(s).unwrap(), b.at(s).unwrap());
        }
    }

    #[test]
    fn classified_formulas_respect_the_chain(text in qf()) {
        let frag = preset("n-less-x", 10).unwrap();
        let net = d_p(&frag).unwrap();
        let phi = frag.parse(&text).unwrap();
        let r = eventual_los(&net, &phi, None, 40).unwrap();
        prop_assert!(r.chain_ok, "{}: {}", text, r.verdict);
        prop_assert_ne!(r.verdict, LosVerdict::Unclassified, "{}", text);
        let truth = |s: usize| net.ambient().holds(&phi, &frag.vars, &net.at(s).unwrap()).unwrap();
        match r.verdict {
            LosVerdict::Satisfied => prop_assert!((30..40).all(truth)),
            LosVerdict::Unsatisfied => prop_assert!(!(30..40).any(truth)),
            _ => {}
        }
    }

    #[test]
    fn prefix_membership_tele_and_satisfaction_coincide(i in 0usize..10) {
        let frag = preset("n-less-x", 10).unwrap();
        let net = d_p(&frag).unwrap();
        let rows = tele_type(&net, 20).unwrap();
        prop_assert_eq!(rows[i].verdict, Verdict::True);
        let p = frag.formula(i).unwrap();
        prop_assert_eq!(eventual_los(&net, &p, None, 20).unwrap().verdict, LosVerdict::Satisfied);
        let not_p = frag.parse(&format!("not ({p})")).unwrap();
        let r = eventual_los(&net, &not_p, None, 20).unwrap();
        prop_assert_eq!(r.in_prefix, None);
        prop_assert_eq!(r.verdict, LosVerdict::Unsatisfied);
    }
}
