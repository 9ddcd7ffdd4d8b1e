mod common;

use common::*;
use forest_ted::cost::INF;
use forest_ted::forest::Forest;
use forest_ted::freeopt::optimized_ted;
use forest_ted::klein::{
    bounded_klein, edit_script, enumerate_fragments, klein_dp, klein_store, trace_alignment,
    ted_doubling_medium, Band, Dep,
};
use forest_ted::oracle::{
    brute_force_ted, is_forest_alignment, oracle_ted, oracle_ted_le, path_cost, width, Oracle,
};
use forest_ted::weights::CostModel;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pair(seed: u64, nf: usize, ng: usize) -> (Forest, Forest, CostModel) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = random_forest(&mut rng, nf, 3);
    let g = random_forest(&mut rng, ng, 3);
    let m = models(&mut rng, 3, 1).pop().unwrap().1;
    (f, g, m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn full_klein_equals_oracle(seed in any::<u64>(), nf in 0usize..6, ng in 0usize..6) {
        let (f, g, m) = pair(seed, nf, ng);
        prop_assert_eq!(klein_dp(&f, &g, &m).unwrap(), oracle_ted(&f, &g, &m));
    }

    #[test]
    fn bounded_equals_capped_oracle(seed in any::<u64>(), nf in 0usize..6, ng in 0usize..6, k in 1usize..5) {
        let (f, g, m) = pair(seed, nf, ng);
        prop_assert_eq!(bounded_klein(&f, &g, &m, k), oracle_ted_le(&f, &g, &m, k as u64));
        prop_assert_eq!(optimized_ted(&f, &g, &m, k, &[]).unwrap(), bounded_klein(&f, &g, &m, k));
    }

    #[test]
    fn oracle_matches_enumeration(seed in any::<u64>(), nf in 0usize..3, ng in 0usize..3) {
        let (f, g, m) = pair(seed, nf, ng);
        let mut o = Oracle::new(&f, &g, &m);
        for lf in 0..=f.len() {
            for rf in lf..=f.len() {
                for lg in 0..=g.len() {
                    for rg in lg..=g.len() {
                        if rf - lf + rg - lg <= 10 {
                            let bf = brute_force_ted(&f, (lf, rf), &g, (lg, rg), &m, None);
                            prop_assert_eq!(o.get(lf, rf, lg, rg), bf);
                        }
                    }
                }
            }
        }
        let mut ob = Oracle::bounded(&f, &g, &m, 1);
        prop_assert_eq!(ob.get(0, f.len(), 0, g.len()),
            brute_force_ted(&f, (0, f.len()), &g, (0, g.len()), &m, Some(1)));
    }

    #[test]
    fn sandwich_holds(seed in any::<u64>(), nf in 0usize..5, ng in 0usize..5, k in 1usize..4) {
        let (f, g, m) = pair(seed, nf, ng);
        let st = klein_store(&f, &g, &m, Band::K(k), false).unwrap();
        let mut o = Oracle::new(&f, &g, &m);
        let mut ob = Oracle::bounded(&f, &g, &m, k);
        for (i, pf) in st.plan().frags().iter().enumerate() {
            for (lg, rg) in st.window(i) {
                let v = st.get(Dep::Frag(i as u32), lg, rg);
                prop_assert!(o.get(pf.l, pf.r, lg, rg) <= v);
                prop_assert!(v <= ob.get(pf.l, pf.r, lg, rg));
            }
        }
    }

    #[test]
    fn traced_alignment_is_valid(seed in any::<u64>(), nf in 0usize..7, k in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_forest(&mut rng, nf, 3);
        let g = planted(&mut rng, &f, 2, 3);
        let m = CostModel::unit(3);
        let st = klein_store(&f, &g, &m, Band::K(k), true).unwrap();
        match trace_alignment(&st, &f, &g) {
            Ok(p) => {
                prop_assert!(is_forest_alignment(&f, (0, f.len()), &g, (0, g.len()), &p));
                prop_assert_eq!(path_cost(&f, (0, f.len()), &g, (0, g.len()), &m, &p).unwrap(), st.result());
                prop_assert!(width(&p) <= 2 * k);
                let script = edit_script(&p, &f, &g);
                prop_assert_eq!(script.is_empty(), st.result() == 0);
            }
            Err(_) => prop_assert_eq!(st.result(), INF),
        }
    }

    #[test]
    fn doubling_is_exact(seed in any::<u64>(), nf in 0usize..7, ng in 0usize..7) {
        let (f, g, m) = pair(seed, nf, ng);
        let d = ted_doubling_medium(&f, &g, &m);
        prop_assert_eq!(d.value, oracle_ted(&f, &g, &m));
    }

    #[test]
    fn catalog_bound(seed in any::<u64>(), n in 1usize..400) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = if seed % 2 == 0 { random_forest(&mut rng, n, 2) } else { chainy_forest(&mut rng, n, 2) };
        let len = f.len() as f64;
        let cat = enumerate_fragments(&f);
        prop_assert!((cat.len() as f64) <= 4.0 * len * (1.0 + len.log2()));
    }
}

#[test]
fn doubling_planted_three_edits() {
    let mut al = forest_ted::forest::Alphabet::new();
    let f = Forest::parse("(a(b)(c(d)))(e)", &mut al).unwrap();
    let g = Forest::parse("(a(c(x)))(e(y))(z)", &mut al).unwrap();
    let m = CostModel::unit(al.len());
    let d = ted_doubling_medium(&f, &g, &m);
    assert_eq!(d.value, oracle_ted(&f, &g, &m));
    assert_eq!(d.value.to_string(), "4");
    assert_eq!(d.thresholds, vec![1, 2, 4]);
}
