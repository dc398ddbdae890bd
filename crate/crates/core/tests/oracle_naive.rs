mod common;

use dispersive::oracle::{exact_max_dispersion, feasible_at, OracleBudget};
use dispersive::Dispersion;

#[test]
fn oracle_matches_brute_force_on_small_fixtures() {
    let corpus = common::small_corpus();
    assert!(corpus.len() >= 12);
    for (name, p) in corpus {
        assert!(p.len() <= 16, "{name}");
        let levels: Vec<u32> = (1..=12).collect();
        let (naive_best, naive_reach) = common::naive(&p, 6, &levels);
        let sol = exact_max_dispersion(&p, &[], OracleBudget::default()).unwrap();
        assert_eq!(Some(sol.best), naive_best, "{name}");
        for (&l, &reach) in levels.iter().zip(&naive_reach) {
            let got = feasible_at(&p, Dispersion::Finite(l), &[], OracleBudget::default()).unwrap().is_some();
            assert_eq!(got, reach, "{name} at {l}");
        }
    }
}

proptest::proptest! {
    #![proptest_config(proptest::prelude::ProptestConfig::with_cases(300))]

    #[test]
    fn oracle_matches_brute_force_on_random_shapes(
        seed in proptest::prelude::any::<u64>(),
        n in 2usize..=12,
        tree in proptest::prelude::any::<bool>(),
        pre_mask in proptest::prelude::any::<u16>(),
        use_pre in proptest::prelude::any::<bool>(),
    ) {
        let p = if tree { dispersive::random_tree(seed, n) } else { dispersive::random_simple(seed, n) }.unwrap();
        let pre: Vec<dispersive::Cell> = if use_pre {
            p.cells().iter().enumerate().filter(|(i, _)| pre_mask & (1 << i) != 0).map(|(_, &c)| c).collect()
        } else {
            Vec::new()
        };
        let levels: Vec<u32> = (1..=10).collect();
        let (naive_best, naive_reach) = common::naive_with(&p, &pre, 6, &levels);
        let sol = exact_max_dispersion(&p, &pre, OracleBudget::default()).unwrap();
        proptest::prop_assert_eq!(Some(sol.best), naive_best);
        for (&l, &reach) in levels.iter().zip(&naive_reach) {
            let got = feasible_at(&p, Dispersion::Finite(l), &pre, OracleBudget::default()).unwrap();
            proptest::prop_assert_eq!(got.is_some(), reach, "at {}", l);
        }
    }
}
