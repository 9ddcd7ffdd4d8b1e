mod common;

use common::*;
use forest_ted::cost::CostValue;
use forest_ted::driver::{first_threshold, ted_auto, ted_bounded};
use forest_ted::klein::{bounded_klein, ted_doubling_medium};
use forest_ted::oracle::oracle_ted;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn auto_is_exact(seed in any::<u64>(), nf in 0usize..14, edits in 0usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_forest(&mut rng, nf, 3);
        let g = planted(&mut rng, &f, edits, 3);
        for (_, m) in models(&mut rng, 3, 1) {
            let run = ted_auto(&f, &g, &m);
            let want = oracle_ted(&f, &g, &m);
            prop_assert_eq!(run.value, want);
            prop_assert_eq!(ted_doubling_medium(&f, &g, &m).value, want);
            if let Some(&last) = run.thresholds.last() {
                let d0 = first_threshold(f.len() + g.len());
                if last > d0 {
                    prop_assert!(CostValue::integer(last as u64) < want + want);
                }
            }
        }
    }

    #[test]
    fn bounded_matches_klein(seed in any::<u64>(), n in 0usize..120, edits in 0usize..5, k in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = chainy_forest(&mut rng, n, 3);
        let g = planted(&mut rng, &f, edits, 3);
        for (_, m) in models(&mut rng, 3, 1) {
            prop_assert_eq!(ted_bounded(&f, &g, &m, k), bounded_klein(&f, &g, &m, k));
        }
    }
}

#[test]
fn length_gap_is_infinite() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f = random_forest(&mut rng, 10, 3);
    let g = random_forest(&mut rng, 13, 3);
    let m = forest_ted::weights::CostModel::unit(3);
    assert_eq!(ted_bounded(&f, &g, &m, 2), CostValue::Inf);
}
