//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits nonzero if any fails.

use std::path::Path;
use std::time::{Duration, Instant};

use hyperpart::model_file;
use hyperpart::report;
use hyperpart_core::dataprep::{knn_impute, mean_impute, synth_generate, true_expected_loss, Preset, DEFAULT_IMPUTE_K};
use hyperpart_core::eval::{benchmark_report, standard_baselines, tradeoff_curve, DEFAULT_LEVELS, MODEL_COLUMN};
use hyperpart_core::learners::{fit, LearnerSpec};
use hyperpart_core::matching::{stable_match, ScoreMatrix};
use hyperpart_core::objective::predict_class;
use hyperpart_core::partitioner::{fit_model_traced, opt_partition, CellContext, Decision, GlobalState, SearchData};
use hyperpart_core::{
    fit_model, min_alpha, AlphaSpec, Dataset, DatasetRole, FeatureSchema, FitConfig, LabeledInstance, LossKind, Pool,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(limit: Duration, start: Instant, detail: String) -> Outcome {
    let took = start.elapsed();
    check(took < limit, format!("{detail}; {:.2}s of {}s", took.as_secs_f64(), limit.as_secs()))
}

fn constant_pair() -> Pool {
    Pool::new(vec![LearnerSpec::Constant, LearnerSpec::Constant]).unwrap()
}

fn dataset(rows: Vec<Vec<f64>>, labels: Vec<u8>, role: DatasetRole) -> Dataset {
    let schema = FeatureSchema::anonymous(rows[0].len()).unwrap();
    let inst = rows.into_iter().zip(labels).map(|(x, y)| LabeledInstance::new(x, y)).collect();
    Dataset::new(schema, inst, role).unwrap()
}

/// Zero-one validation loss of the smoothed constant fitted on `train`.
fn constant_loss(train: &[&LabeledInstance], val: &[&LabeledInstance]) -> f64 {
    let pos = train.iter().filter(|r| r.y == 1).count() as f64;
    let p = (pos + 1.0) / (train.len() as f64 + 2.0);
    val.iter().filter(|r| predict_class(p) != r.y).count() as f64
}

/// Best objective over keeping the cell and every single cut between
/// distinct validation values, both sides meeting the size minima.
fn exhaustive_objective(train: &Dataset, val: &Dataset, alpha: f64, s_min: usize, v_min: usize) -> f64 {
    let n = val.len() as f64;
    let ln_m = 2f64.ln();
    let pen = |k: f64| alpha * (k * k * ln_m / n).sqrt();
    let all_t: Vec<&LabeledInstance> = train.instances().iter().collect();
    let all_v: Vec<&LabeledInstance> = val.instances().iter().collect();
    let mut best = constant_loss(&all_t, &all_v) / n + pen(1.0);
    for dim in 0..train.dim() {
        let mut values: Vec<f64> = val.instances().iter().map(|r| r.x[dim]).collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        for w in values.windows(2) {
            let t = (w[0] + w[1]) / 2.0;
            let (tl, tr): (Vec<_>, Vec<_>) = all_t.iter().partition(|r| r.x[dim] < t);
            let (vl, vr): (Vec<_>, Vec<_>) = all_v.iter().partition(|r| r.x[dim] < t);
            if tl.len() < s_min || tr.len() < s_min || vl.len() < v_min || vr.len() < v_min {
                continue;
            }
            let obj = (constant_loss(&tl, &vl) + constant_loss(&tr, &vr)) / n + pen(2.0);
            if obj < best {
                best = obj;
            }
        }
    }
    best
}

fn random_split_data(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> (Dataset, Dataset) {
    let grid = rng.gen_range(3..12) as f64;
    let t = rng.gen_range(0.2..0.8);
    let noise = rng.gen_range(0.0..0.3);
    let rows: Vec<Vec<f64>> =
        (0..n).map(|_| (0..dim).map(|_| (rng.gen::<f64>() * grid).floor() / grid).collect()).collect();
    let labels: Vec<u8> = rows.iter().map(|x| ((x[dim - 1] < t) ^ (rng.gen::<f64>() < noise)) as u8).collect();
    let n_val = rng.gen_range(n / 3..=n / 2);
    let (val_rows, train_rows) = rows.split_at(n_val);
    let (val_y, train_y) = labels.split_at(n_val);
    (
        dataset(train_rows.to_vec(), train_y.to_vec(), DatasetRole::Train),
        dataset(val_rows.to_vec(), val_y.to_vec(), DatasetRole::Validation),
    )
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let pool = constant_pair();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut worst, mut splits) = (0.0f64, 0);
    let runs = 60;
    for i in 0..runs {
        let n = rng.gen_range(12..=40);
        let dim = rng.gen_range(1..=2);
        let (train, val) = random_split_data(&mut rng, n, dim);
        let alpha = [0.0, 0.05, 0.3][i % 3];
        let config = FitConfig {
            gamma: 2,
            s_min: 2,
            v_min: 2,
            alpha: AlphaSpec::Fixed(alpha),
            improvement_tol: 0.0,
            max_cuts_per_dim: 64,
            ..FitConfig::default()
        };
        let data = SearchData::new(&train, &val).map_err(|e| e.to_string())?;
        let root = CellContext::root(data, &pool, LossKind::ZeroOne, 7).map_err(|e| e.to_string())?;
        let state = GlobalState { leaves: 1, loss_sum: root.incumbent.val_loss, n_val: val.len() };
        let out = opt_partition(data, &root, state, &pool, &config, alpha, 7).map_err(|e| e.to_string())?;
        splits += matches!(out.decision, Decision::Split { .. }) as usize;
        let oracle = exhaustive_objective(&train, &val, alpha, config.s_min, config.v_min);
        worst = worst.max((out.after - oracle).abs());
    }
    let detail = format!("{runs} datasets ({splits} split), max |delta| = {worst:e}");
    if worst > 1e-12 {
        return Err(detail);
    }
    within(Duration::from_secs(10), start, detail)
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let pool = Pool::from_ids(&["constant", "logistic", "tree"]).unwrap();
    let cap = 4;
    let delta = 0.1;
    // min_alpha grows with k, so the value at the leaf cap covers every model size
    let alpha = min_alpha(delta, cap, pool.len()).map_err(|e| e.to_string())?;
    let redraws = 200;
    let mut violations = 0;
    let mut gap = 0.0;
    for i in 0..redraws {
        let spec = Preset::ThreeSegment.spec(600, 1000 + i);
        let data = synth_generate(&spec).map_err(|e| e.to_string())?.complete;
        let config =
            FitConfig { alpha: AlphaSpec::Fixed(alpha), max_leaves: Some(cap), seed: i, ..FitConfig::default() };
        let model = fit_model(&data, &config, &pool).map_err(|e| e.to_string())?;
        let d = true_expected_loss(&spec, |x| model.predict(x).unwrap(), LossKind::ZeroOne, 20_000)
            .map_err(|e| e.to_string())?;
        let d_hat = model.metrics.objective;
        violations += (d >= d_hat) as usize;
        gap += d_hat - d;
    }
    let rate = violations as f64 / redraws as f64;
    let detail =
        format!("alpha {alpha:.4}, violation rate {rate:.3} (bound 0.15), mean d_hat - d {:.4}", gap / redraws as f64);
    if rate > 0.15 {
        return Err(detail);
    }
    within(Duration::from_secs(300), start, detail)
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let seed = 0;
    let train = synth_generate(&Preset::Xor.spec(4000, seed)).map_err(|e| e.to_string())?.complete;
    let test_spec = Preset::Xor.spec(4000, seed + 1);
    let test = synth_generate(&test_spec).map_err(|e| e.to_string())?.complete;
    let pool = constant_pair();
    // finer than the default 32 candidates per axis so thresholds can land near 0
    let config = FitConfig { gamma: 3, seed, max_cuts_per_dim: 128, ..FitConfig::default() };
    let model = fit_model(&train, &config, &pool).map_err(|e| e.to_string())?;
    let error = |predict: &dyn Fn(&[f64]) -> f64| {
        test.instances().iter().filter(|r| predict_class(predict(&r.x)) != r.y).count() as f64 / test.len() as f64
    };
    let err = error(&|x| model.predict(x).unwrap());
    let bayes = error(&|x| test_spec.probability(x));
    let finite: Vec<f64> = model
        .cells
        .iter()
        .flat_map(|c| c.cell.bounds().iter().flat_map(|b| [b.lo, b.hi]))
        .filter(|v| v.is_finite())
        .collect();
    let max_off = finite.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let single = pool
        .specs()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let p = fit(s, &train, i as u64).unwrap();
            error(&|x| p.predict_unchecked(x))
        })
        .fold(f64::INFINITY, f64::min);
    let ok = model.len() == 4 && !finite.is_empty() && max_off <= 0.05 && err <= 0.05 && single >= 0.25;
    let detail = format!(
        "{} cells, max |threshold| {max_off:.4}, test error {err:.4} (Bayes classifier {bayes:.4}), best single learner error {single:.4}",
        model.len()
    );
    if !ok {
        return Err(detail);
    }
    within(Duration::from_secs(60), start, detail)
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let seed = 0;
    let train = synth_generate(&Preset::Piecewise.spec(400, seed)).map_err(|e| e.to_string())?.complete;
    let test = synth_generate(&Preset::Piecewise.spec(20_000, seed + 1)).map_err(|e| e.to_string())?.complete;
    let pool = Pool::from_ids(&["constant", "logistic"]).unwrap();
    let config = FitConfig { alpha: AlphaSpec::Fixed(0.0), s_min: 5, v_min: 3, seed, ..FitConfig::default() };
    let caps = [1, 2, 4, 8, 16, 32];
    let curve =
        tradeoff_curve(&train, &test, &config, &pool, &caps, &standard_baselines(), 0.95).map_err(|e| e.to_string())?;
    let acc: Vec<f64> = curve.iter().map(|p| p.accuracy).collect();
    let best = acc.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let argmax = acc.iter().position(|&a| a == best).unwrap();
    let ok = argmax > 0 && argmax < caps.len() - 1 && acc[caps.len() - 1] < best && acc[0] < best;
    let shown: Vec<String> = curve.iter().map(|p| format!("{}:{}/{:.4}", p.max_leaves, p.leaves, p.accuracy)).collect();
    let detail = format!("cap:leaves/accuracy {}; peak at cap {}", shown.join(" "), caps[argmax]);
    if !ok {
        return Err(detail);
    }
    within(Duration::from_secs(300), start, detail)
}

fn criterion_5() -> Outcome {
    let seed = 0;
    let train = synth_generate(&Preset::Piecewise.spec(4000, seed)).map_err(|e| e.to_string())?.complete;
    let test = synth_generate(&Preset::Piecewise.spec(4000, seed + 1)).map_err(|e| e.to_string())?.complete;
    let config = FitConfig { seed, ..FitConfig::default() };
    let baselines = standard_baselines();
    let bench = benchmark_report(&train, &test, &config, &Pool::standard(), &baselines, &DEFAULT_LEVELS)
        .map_err(|e| e.to_string())?;
    let table = report::table1_csv(&bench);
    let lines: Vec<&str> = table.lines().collect();
    let mut header = vec!["level".to_string(), MODEL_COLUMN.to_string()];
    header.extend(baselines.iter().map(|b| b.name.clone()));
    let mut shape = lines.len() == 5 && lines[0] == header.join(",");
    for (line, level) in lines.iter().skip(1).zip(DEFAULT_LEVELS) {
        let cells: Vec<&str> = line.split(',').collect();
        shape &= cells.len() == header.len() && cells[0].parse::<f64>() == Ok(level);
        shape &= cells[1..].iter().all(|c| c.parse::<usize>().is_ok());
    }
    let mut monotone = true;
    for a in &bench.algorithms {
        let Some(r) = &a.report else { return Err(format!("{} failed: {:?}", a.name, a.failure)) };
        monotone &= r.rows.windows(2).all(|w| w[1].confident <= w[0].confident);
        monotone &= r.rows.iter().all(|row| row.correct <= row.confident && row.confident <= r.n_test);
    }
    let count = |i: usize| bench.algorithms[i].report.as_ref().unwrap().count(0.95).unwrap();
    let ours = count(0);
    let best_other =
        (1..bench.algorithms.len()).map(|i| (count(i), &bench.algorithms[i].name)).max_by_key(|c| c.0).unwrap();
    let detail = format!(
        "shape {shape}, monotone {monotone}, 0.95 counts: {MODEL_COLUMN} {ours} vs best baseline {} {} ({} cells)",
        best_other.1,
        best_other.0,
        bench.model_cells.unwrap_or(0)
    );
    check(shape && monotone && ours >= best_other.0, detail)
}

fn criterion_6() -> Outcome {
    let exact = min_alpha(1.0, 1, 2).unwrap();
    let spot = min_alpha(0.05, 1, 2).unwrap();
    let detail = format!("min_alpha(1, 1, 2) = {exact}, min_alpha(0.05, 1, 2) = {spot:.6}");
    check(exact == 1.0 && (spot - 1.7779).abs() <= 1e-3, detail)
}

/// True when no recipient and donor both strictly prefer each other to
/// their current partners, checked by brute force over all pairs.
fn stable_by_brute_force(scores: &[Vec<f64>], assignment: &[Option<usize>]) -> bool {
    let donors = scores.first().map_or(0, Vec::len);
    let holder = |d: usize| assignment.iter().position(|&a| a == Some(d));
    // earlier index wins ties on both sides
    let r_prefers = |r: usize, d: usize, cur: Option<usize>| match cur {
        None => true,
        Some(c) => scores[r][d] > scores[r][c] || (scores[r][d] == scores[r][c] && d < c),
    };
    let d_prefers = |d: usize, r: usize, cur: Option<usize>| match cur {
        None => true,
        Some(c) => scores[r][d] > scores[c][d] || (scores[r][d] == scores[c][d] && r < c),
    };
    (0..scores.len()).all(|r| {
        (0..donors).all(|d| assignment[r] == Some(d) || !(r_prefers(r, d, assignment[r]) && d_prefers(d, r, holder(d))))
    })
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for r in 1..=7 {
        for d in 1..=7 {
            for trial in 0..40 {
                let coarse = trial % 2 == 0;
                let scores: Vec<Vec<f64>> = (0..r)
                    .map(|_| {
                        (0..d)
                            .map(|_| if coarse { rng.gen_range(0..4) as f64 / 3.0 } else { rng.gen::<f64>() })
                            .collect()
                    })
                    .collect();
                let m = ScoreMatrix::new(scores.clone()).map_err(|e| e.to_string())?;
                let a = stable_match(&m);
                if !stable_by_brute_force(&scores, &a) {
                    return Err(format!("blocking pair in {r}x{d} trial {trial}: {scores:?} -> {a:?}"));
                }
                checked += 1;
            }
        }
    }
    within(Duration::from_secs(10), start, format!("{checked} matrices up to 7x7, no blocking pair"))
}

fn criterion_8() -> Outcome {
    let spec = Preset::Correlated.spec(2000, 0);
    let data = synth_generate(&spec).map_err(|e| e.to_string())?;
    let knn = knn_impute(&data.observed, DEFAULT_IMPUTE_K).map_err(|e| e.to_string())?;
    let mean = mean_impute(&data.observed).map_err(|e| e.to_string())?;
    let rmse = |imputed: &Dataset| {
        let (mut sum, mut count) = (0.0, 0usize);
        for ((obs, full), got) in data.observed.rows.iter().zip(data.complete.instances()).zip(imputed.instances()) {
            for (j, v) in obs.iter().enumerate() {
                if v.is_none() {
                    sum += (got.x[j] - full.x[j]).powi(2);
                    count += 1;
                }
            }
        }
        ((sum / count as f64).sqrt(), count)
    };
    let (k, cells) = rmse(&knn);
    let (m, _) = rmse(&mean);
    check(k < m, format!("{cells} missing cells, knn RMSE {k:.4} vs mean RMSE {m:.4}"))
}

fn criterion_9() -> Outcome {
    let seed = 9;
    let data = synth_generate(&Preset::Piecewise.spec(1500, seed)).map_err(|e| e.to_string())?.complete;
    let test = synth_generate(&Preset::Piecewise.spec(800, seed + 1)).map_err(|e| e.to_string())?.complete;
    let config = FitConfig { seed, ..FitConfig::default() };
    let pool = Pool::from_ids(&["constant", "logistic"]).unwrap();
    let a = fit_model_traced(&data, &config, &pool).map_err(|e| e.to_string())?;
    let b = fit_model_traced(&data, &config, &pool).map_err(|e| e.to_string())?;
    let same_model = model_file::to_json(&a.model) == model_file::to_json(&b.model) && a.trace == b.trace;
    let reports: Vec<String> = (0..2)
        .map(|_| {
            let r = benchmark_report(&data, &test, &config, &pool, &standard_baselines(), &DEFAULT_LEVELS).unwrap();
            let calib = report::calibration_csv(r.algorithms.iter().filter_map(|a| a.report.as_ref()));
            format!("{}{}{}", report::table1_csv(&r), report::gain_csv(&r), calib)
        })
        .collect();
    let same_report = reports[0] == reports[1];
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("model.json");
    model_file::save(&a.model, &path).map_err(|e| e.to_string())?;
    let loaded = model_file::load(Path::new(&path)).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let x: Vec<f64> = (0..a.model.dim()).map(|_| rng.gen_range(-0.25..1.25)).collect();
        mismatches += (a.model.predict(&x).unwrap().to_bits() != loaded.predict(&x).unwrap().to_bits()) as usize;
    }
    let detail = format!(
        "models identical {same_model}, reports identical {same_report}, {} cells, {mismatches}/1000 prediction mismatches after reload",
        a.model.len()
    );
    check(same_model && same_report && mismatches == 0, detail)
}

fn main() {
    let name_filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let criteria: [Criterion; 9] = [
        ("oracle equivalence", criterion_1),
        ("bound verification", criterion_2),
        ("structure recovery", criterion_3),
        ("trade-off shape", criterion_4),
        ("table shape and dominance", criterion_5),
        ("min_alpha spot values", criterion_6),
        ("matching stability", criterion_7),
        ("imputation quality", criterion_8),
        ("determinism and persistence", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let label = format!("criterion {} ({name})", i + 1);
        if !name_filter.is_empty() && !name_filter.iter().any(|n| label.contains(n.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("PASS {label}: {d} [{secs:.1}s]"),
            Err(d) => {
                failed += 1;
                println!("FAIL {label}: {d} [{secs:.1}s]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
