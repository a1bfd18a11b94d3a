use std::collections::HashMap;

use proptest::prelude::*;
use proptest::sample::Index;

use devmodal::forcing::{
    contains_maximal, enumerate_posets, forcing_dev_model, gen_pnames, ideals, is_generic_ideal,
    mostowski, parse_poset, val, write_poset, PName, Poset,
};

fn poset(n: usize, pick: Index) -> Poset {
    let all = enumerate_posets(n);
    all[pick.index(all.len())].clone()
}

fn mask(tau: &PName, ideal: &[usize]) -> PName {
    PName::from_pairs(
        tau.pairs()
            .filter(|(_, q)| ideal.contains(q))
            .map(|(s, q)| (mask(s, ideal), *q)),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn generic_iff_contains_a_maximal_element(n in 1usize..=5, pick: Index, which: Index) {
        let p = poset(n, pick);
        let is = ideals(&p).unwrap();
        let i = &is[which.index(is.len())];
        prop_assert_eq!(is_generic_ideal(&p, i).unwrap(), contains_maximal(&p, i));
    }

    #[test]
    fn val_ignores_pairs_outside_the_ideal(n in 1usize..=3, pick: Index, which: Index, name: Index) {
        let p = poset(n, pick);
        let is = ideals(&p).unwrap();
        let i = &is[which.index(is.len())];
        let names = gen_pnames(&p, 2, 2).unwrap();
        let tau = &names[name.index(names.len())];
        prop_assert_eq!(val(&mask(tau, i), i), val(tau, i));
    }

    #[test]
    fn membership_persists_upward(n in 1usize..=4, pick: Index, which: Index, a: Index, b: Index) {
        let p = poset(n, pick);
        let is = ideals(&p).unwrap();
        let i = &is[which.index(is.len())];
        let names = gen_pnames(&p, 2, 2).unwrap();
        let (sigma, tau) = (&names[a.index(names.len())], &names[b.index(names.len())]);
        let m = forcing_dev_model(&p, i, &[sigma.clone(), tau.clone()]).unwrap();
        let f = m.model.frame();
        for s in 0..m.model.len() {
            if m.holds_at(s, sigma, tau) {
                for &t in f.above(s) {
                    prop_assert!(m.holds_at(t, sigma, tau));
                }
            }
        }
        let reach = (0..m.model.len()).any(|s| m.holds_at(s, sigma, tau));
        prop_assert_eq!(m.tele_in(sigma, tau), reach);
    }

    #[test]
    fn collapse_respects_membership(n in 1usize..=3, pick: Index, which: Index, a: Index, b: Index) {
        let p = poset(n, pick);
        let is = ideals(&p).unwrap();
        let i = &is[which.index(is.len())];
        let names = gen_pnames(&p, 2, 2).unwrap();
        let m = forcing_dev_model(&p, i, &[names[a.index(names.len())].clone(), names[b.index(names.len())].clone()])
            .unwrap();
        let show = |n: &PName| n.display(&p).to_string();
        let preds: HashMap<String, Vec<String>> =
            m.membership().iter().map(|(t, ps)| (show(t), ps.iter().map(show).collect())).collect();
        let keys: Vec<String> = m.names.iter().map(show).collect();
        let mos = mostowski(&keys, &preds).unwrap();
        for tau in &m.names {
            for sigma in &m.names {
                if m.tele_in(sigma, tau) {
                    prop_assert!(mos[&show(tau)].contains(&mos[&show(sigma)]));
                }
            }
        }
    }

    #[test]
    fn poset_text_round_trips(n in 1usize..=4, pick: Index) {
        let p = poset(n, pick);
        prop_assert_eq!(parse_poset(&write_poset(&p)).unwrap(), p);
    }
}
