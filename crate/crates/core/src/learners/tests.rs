use alloc::vec;
use alloc::vec::Vec;

use rand::Rng as _;

use super::*;
use crate::data::LabeledInstance;
use crate::schema::FeatureSchema;
use crate::DatasetRole;

fn ds(rows: Vec<Vec<f64>>, labels: Vec<u8>) -> Dataset {
    Dataset::from_rows(rows, labels).unwrap()
}

fn noisy_blobs(n: usize, seed: u64) -> Dataset {
    let mut rng = math::rng(seed);
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for _ in 0..n {
        let x0: f64 = rng.gen_range(-2.0..2.0);
        let x1: f64 = rng.gen_range(-2.0..2.0);
        let p = math::sigmoid(1.5 * x0 - x1 + 0.3);
        labels.push((rng.gen::<f64>() < p) as u8);
        rows.push(vec![x0, x1, rng.gen_range(0.0..1.0)]);
    }
    ds(rows, labels)
}

fn step_data() -> Dataset {
    ds((0..10).map(|v| vec![v as f64]).collect(), (0..10).map(|v| (v >= 5) as u8).collect())
}

#[test]
fn constant_is_smoothed_frequency() {
    let p = fit(&LearnerSpec::Constant, &ds(vec![vec![0.0]; 3], vec![1, 1, 1]), 0).unwrap();
    assert!((p.predict_proba(&[123.0]).unwrap() - 0.8).abs() < 1e-15);
}

#[test]
fn empty_training_set_is_an_error() {
    let empty = Dataset::new(FeatureSchema::anonymous(1).unwrap(), vec![], DatasetRole::Train).unwrap();
    for spec in [LearnerSpec::Constant, LearnerSpec::logistic(), LearnerSpec::knn()] {
        assert_eq!(fit(&spec, &empty, 0), Err(Error::EmptyTrainingSet));
    }
}

#[test]
fn single_class_training_falls_back_to_smoothed_rate() {
    let d = ds((0..8).map(|v| vec![v as f64, 1.0]).collect(), vec![0; 8]);
    let specs = [
        LearnerSpec::logistic(),
        LearnerSpec::tree(),
        LearnerSpec::naive_bayes(),
        LearnerSpec::knn(),
        LearnerSpec::lasso(),
        LearnerSpec::random_forest(),
        LearnerSpec::adaboost(),
    ];
    for spec in specs {
        let p = fit(&spec, &d, 1).unwrap();
        assert!((p.predict_proba(&[3.0, 1.0]).unwrap() - 0.1).abs() < 1e-15, "{}", spec.id());
    }
}

#[test]
fn logistic_separable_and_gradient_checks() {
    let mut rows = vec![];
    let mut labels = vec![];
    for _ in 0..50 {
        rows.push(vec![-1.0]);
        labels.push(0);
        rows.push(vec![1.0]);
        labels.push(1);
    }
    let d = ds(rows, labels);
    let p = fit(&LearnerSpec::logistic(), &d, 0).unwrap();
    assert!(p.predict_proba(&[1.0]).unwrap() > 0.9);
    let FittedParams::Linear(m) = &p.params else { panic!("expected linear model") };
    let g = l2_gradient(m, Rows::from(&d));
    let norm = math::sqrt(g.iter().map(|v| v * v).sum());
    assert!(norm < 1e-6, "gradient norm {norm}");
}

#[test]
fn logistic_gradient_matches_finite_differences() {
    let d = noisy_blobs(400, 11);
    let rows = Rows::from(&d);
    let p = fit(&LearnerSpec::logistic(), &d, 0).unwrap();
    let FittedParams::Linear(m) = &p.params else { panic!() };
    assert!(m.iterations < 2000);
    let g = l2_gradient(m, rows);
    assert!(math::sqrt(g.iter().map(|v| v * v).sum()) < 1e-6);

    // Finite differences away from the optimum, where the gradient is not ~0.
    let w: Vec<f64> = m.weights.iter().map(|v| v + 0.3).collect();
    let b = m.intercept - 0.2;
    let shifted = LinearModel { weights: w.clone(), intercept: b, ..m.clone() };
    let analytic = l2_gradient(&shifted, rows);
    let h = 1e-6;
    for j in 0..=w.len() {
        let (mut wp, mut wm) = (w.clone(), w.clone());
        let (mut bp, mut bm) = (b, b);
        if j < w.len() {
            wp[j] += h;
            wm[j] -= h;
        } else {
            bp += h;
            bm -= h;
        }
        let fd = (l2_objective(m, rows, &wp, bp) - l2_objective(m, rows, &wm, bm)) / (2.0 * h);
        let rel = (fd - analytic[j]).abs() / analytic[j].abs().max(1e-8);
        assert!(rel < 1e-5, "coordinate {j}: fd {fd} vs analytic {}", analytic[j]);
    }
}

#[test]
fn zero_coefficients_predict_one_half() {
    let p = TrainedPredictor {
        spec: LearnerSpec::logistic(),
        dim: 2,
        params: FittedParams::Linear(LinearModel {
            center: vec![0.0; 2],
            scale: vec![1.0; 2],
            weights: vec![0.0; 2],
            intercept: 0.0,
            penalty: 1e-3,
            iterations: 0,
        }),
    };
    assert_eq!(p.predict_proba(&[5.0, -3.0]).unwrap(), 0.5);
    assert!(matches!(p.predict_proba(&[5.0]), Err(Error::DimensionMismatch { .. })));
}

/// Brute force: best stump threshold by training accuracy over every midpoint.
fn best_stump_thresholds(values: &[f64], labels: &[u8]) -> Vec<f64> {
    let mut sorted: Vec<f64> = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    let mut best = (usize::MAX, vec![]);
    for w in sorted.windows(2) {
        let t = (w[0] + w[1]) / 2.0;
        let errs = values.iter().zip(labels).filter(|(v, y)| ((**v >= t) as u8) != **y).count();
        if errs < best.0 {
            best = (errs, vec![t]);
        } else if errs == best.0 {
            best.1.push(t);
        }
    }
    best.1
}

#[test]
fn depth_one_tree_finds_the_step() {
    let d = step_data();
    let spec = LearnerSpec::Tree(TreeParams { max_depth: 1, ..TreeParams::default() });
    let p = fit(&spec, &d, 0).unwrap();
    let FittedParams::Tree(t) = &p.params else { panic!() };
    let Node::Split { threshold, .. } = t.nodes[0] else { panic!("expected a split") };
    assert!(threshold > 4.0 && threshold <= 5.0);
    let values: Vec<f64> = d.instances().iter().map(|i| i.x[0]).collect();
    let labels: Vec<u8> = d.labels().collect();
    assert_eq!(best_stump_thresholds(&values, &labels), vec![threshold]);
    let (errs, _) = eval_loss(&p, &d, LossKind::ZeroOne).unwrap();
    assert_eq!(errs, 0.0);
}

#[test]
fn tree_leaf_lookup() {
    let p = TrainedPredictor {
        spec: LearnerSpec::tree(),
        dim: 2,
        params: FittedParams::Tree(TreeModel {
            nodes: vec![
                Node::Split { feature: 0, threshold: 5.0, left: 1, right: 2 },
                Node::Leaf { p: 0.1 },
                Node::Leaf { p: 0.9 },
            ],
        }),
    };
    assert_eq!(p.predict_proba(&[7.0, 0.0]).unwrap(), 0.9);
    assert_eq!(p.predict_proba(&[5.0, 0.0]).unwrap(), 0.9);
    assert_eq!(p.predict_proba(&[4.99, 0.0]).unwrap(), 0.1);
}

#[test]
fn eval_loss_examples() {
    let labels = vec![1, 0, 1, 1, 0, 0, 1, 0, 1, 1];
    let d = ds((0..10).map(|v| vec![v as f64]).collect(), labels.clone());
    let half = TrainedPredictor {
        spec: LearnerSpec::Constant,
        dim: 1,
        params: FittedParams::Constant(ConstantModel { p: 0.5 }),
    };
    assert_eq!(eval_loss(&half, &d, LossKind::Brier).unwrap(), (2.5, 10));
    let zeros = labels.iter().filter(|&&y| y == 0).count() as f64;
    assert_eq!(eval_loss(&half, &d, LossKind::ZeroOne).unwrap(), (zeros, 10));
    let perfect = fit(&LearnerSpec::Tree(TreeParams { max_depth: 4, min_leaf: 1, max_features: None }), &d, 0).unwrap();
    assert_eq!(eval_loss(&perfect, &d, LossKind::ZeroOne).unwrap(), (0.0, 10));
    let empty = Dataset::new(d.schema().clone(), vec![], DatasetRole::Test).unwrap();
    assert_eq!(eval_loss(&half, &empty, LossKind::LogLoss).unwrap(), (0.0, 0));
}

#[test]
fn degenerate_forest_equals_stump() {
    let d = noisy_blobs(200, 3);
    let forest = LearnerSpec::RandomForest(ForestParams {
        n_trees: 1,
        max_depth: 1,
        min_leaf: 1,
        max_features: Some(3),
        bootstrap: false,
    });
    let stump = LearnerSpec::Tree(TreeParams { max_depth: 1, min_leaf: 1, max_features: None });
    let f = fit_baseline(&forest, &d, 9).unwrap();
    let s = fit(&stump, &d, 9).unwrap();
    let mut rng = math::rng(5);
    for _ in 0..500 {
        let x = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(0.0..1.0)];
        assert_eq!(f.predict_proba(&x).unwrap(), s.predict_proba(&x).unwrap());
    }
}

#[test]
fn one_round_adaboost_keeps_stump_boundary() {
    let d = noisy_blobs(200, 4);
    let ab = fit_baseline(&LearnerSpec::AdaBoost(AdaBoostParams { rounds: 1 }), &d, 0).unwrap();
    let stump = fit(&LearnerSpec::Tree(TreeParams { max_depth: 1, min_leaf: 1, max_features: None }), &d, 0).unwrap();
    let mut rng = math::rng(6);
    for _ in 0..500 {
        let x = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(0.0..1.0)];
        assert_eq!(objective_class(ab.predict_proba(&x).unwrap()), objective_class(stump.predict_proba(&x).unwrap()));
    }
}

fn objective_class(p: f64) -> u8 {
    crate::objective::predict_class(p)
}

#[test]
fn infinite_lasso_penalty_is_intercept_only() {
    let d = noisy_blobs(300, 8);
    let spec = LearnerSpec::LassoLogistic(LassoParams { lambda: Some(f64::INFINITY), ..LassoParams::default() });
    let p = fit_baseline(&spec, &d, 0).unwrap();
    let FittedParams::Linear(m) = &p.params else { panic!() };
    assert!(m.weights.iter().all(|&w| w == 0.0));
    let rate = d.positives() as f64 / d.len() as f64;
    assert!((math::sigmoid(m.intercept) - rate).abs() < 1e-4);
}

#[test]
fn lasso_selects_from_grid() {
    let d = noisy_blobs(400, 2);
    let p = fit_baseline(&LearnerSpec::lasso(), &d, 3).unwrap();
    let FittedParams::Linear(m) = &p.params else { panic!() };
    assert!(LassoParams::default().grid.contains(&m.penalty));
    assert!(fit_baseline(&LearnerSpec::logistic(), &d, 0).is_err());
}

#[test]
fn fits_are_deterministic() {
    let d = noisy_blobs(300, 21);
    let specs = Pool::standard().specs().to_vec().into_iter().chain([
        LearnerSpec::lasso(),
        LearnerSpec::RandomForest(ForestParams { n_trees: 10, ..ForestParams::default() }),
        LearnerSpec::AdaBoost(AdaBoostParams { rounds: 20 }),
    ]);
    for spec in specs {
        assert_eq!(fit(&spec, &d, 77).unwrap(), fit(&spec, &d, 77).unwrap(), "{}", spec.id());
    }
}

#[test]
fn probabilities_stay_in_unit_interval() {
    let d = noisy_blobs(300, 31);
    let specs = Pool::standard().specs().to_vec().into_iter().chain([
        LearnerSpec::lasso(),
        LearnerSpec::RandomForest(ForestParams { n_trees: 10, ..ForestParams::default() }),
        LearnerSpec::adaboost(),
    ]);
    let mut rng = math::rng(1);
    let predictors: Vec<_> = specs.map(|s| fit(&s, &d, 2).unwrap()).collect();
    for _ in 0..10_000 {
        let x = [rng.gen_range(-1e3..1e3), rng.gen_range(-1e3..1e3), rng.gen_range(-1e3..1e3)];
        for p in &predictors {
            let v = p.predict_proba(&x).unwrap();
            assert!((0.0..=1.0).contains(&v), "{} gave {v}", p.spec.id());
        }
    }
}

#[test]
fn tree_never_worse_than_constant_on_training_data() {
    for seed in 0..20 {
        let d = noisy_blobs(150, 100 + seed);
        let tree = fit(&LearnerSpec::tree(), &d, 0).unwrap();
        let constant = fit(&LearnerSpec::Constant, &d, 0).unwrap();
        let (lt, _) = eval_loss(&tree, &d, LossKind::ZeroOne).unwrap();
        let (lc, _) = eval_loss(&constant, &d, LossKind::ZeroOne).unwrap();
        assert!(lt <= lc, "seed {seed}: tree {lt} > constant {lc}");
    }
}

#[test]
fn knn_smoothing_and_ties() {
    let rows = vec![vec![0.0], vec![1.0], vec![2.0], vec![10.0], vec![11.0], vec![12.0]];
    let d = ds(rows, vec![1, 1, 1, 0, 0, 1]);
    let p = fit(&LearnerSpec::Knn(KnnParams { k: 3 }), &d, 0).unwrap();
    assert!((p.predict_proba(&[1.0]).unwrap() - 4.0 / 5.0).abs() < 1e-15);
    assert!((p.predict_proba(&[11.0]).unwrap() - 2.0 / 5.0).abs() < 1e-15);
}

#[test]
fn naive_bayes_separates_gaussians() {
    let mut rng = math::rng(12);
    let mut inst = Vec::new();
    for i in 0..400 {
        let y = (i % 2) as u8;
        let mu = if y == 1 { 2.0 } else { -2.0 };
        inst.push(LabeledInstance::new(vec![mu + math::standard_normal(&mut rng)], y));
    }
    let d = Dataset::new(FeatureSchema::anonymous(1).unwrap(), inst, DatasetRole::Train).unwrap();
    let p = fit(&LearnerSpec::naive_bayes(), &d, 0).unwrap();
    assert!(p.predict_proba(&[3.0]).unwrap() > 0.99);
    assert!(p.predict_proba(&[-3.0]).unwrap() < 0.01);
    assert!((p.predict_proba(&[0.0]).unwrap() - 0.5).abs() < 0.2);
}

#[test]
fn pool_rejects_benchmark_learners() {
    assert!(Pool::new(vec![LearnerSpec::Constant, LearnerSpec::adaboost()]).is_err());
    assert!(Pool::from_ids(&["constant", "bogus"]).is_err());
    assert_eq!(Pool::standard().len(), 5);
    assert_eq!(Pool::from_ids(&["constant", "logistic"]).unwrap().ids(), vec!["constant", "logistic"]);
}
