use hyperpart::RunConfig;
use hyperpart_core::{AlphaSpec, LossKind, Pool};
use proptest::prelude::*;

fn loss() -> impl Strategy<Value = LossKind> {
    prop_oneof![Just(LossKind::ZeroOne), Just(LossKind::LogLoss), Just(LossKind::Brier)]
}

fn alpha() -> impl Strategy<Value = AlphaSpec> {
    prop_oneof![
        (0.0f64..100.0).prop_map(AlphaSpec::Fixed),
        (0.001f64..1.0, 1usize..64).prop_map(|(delta, k_assumed)| AlphaSpec::FromDelta { delta, k_assumed }),
    ]
}

proptest! {
    #[test]
    fn toml_round_trip_is_lossless(
        gamma in 2usize..=3,
        alpha in alpha(),
        loss in loss(),
        seed in any::<u64>(),
        s_min in 1usize..500,
        v_min in 1usize..500,
        frac in 0.01f64..0.99,
        cap in proptest::option::of(1usize..100),
        pool in proptest::sample::subsequence(vec!["constant", "logistic", "tree", "naive_bayes", "knn"], 2..=5),
        levels in proptest::collection::vec(0.51f64..1.0, 1..6),
        drop in proptest::collection::vec("[a-z]{1,8}", 0..4),
    ) {
        let mut c = RunConfig::default();
        c.fit.gamma = gamma;
        c.fit.alpha = alpha;
        c.fit.loss = loss;
        c.fit.seed = seed;
        c.fit.s_min = s_min;
        c.fit.v_min = v_min;
        c.fit.validation_fraction = frac;
        c.fit.max_leaves = cap;
        c.pool = Pool::from_ids(&pool).unwrap();
        c.report.confidence_levels = levels;
        c.prep.drop_columns = drop;
        let text = c.to_toml();
        let back = RunConfig::from_toml(&text).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(back.to_toml(), text);
        prop_assert!(c.validate().is_ok());
    }
}
