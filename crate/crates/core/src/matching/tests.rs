use alloc::vec;
use alloc::vec::Vec;

use rand::Rng as _;

use super::*;
use crate::math;

fn random_matrix(r: usize, d: usize, seed: u64, coarse: bool) -> ScoreMatrix {
    let mut rng = math::rng(seed);
    let scores = (0..r)
        .map(|_| {
            (0..d).map(|_| if coarse { f64::from(rng.gen_range(0..4u8)) / 4.0 } else { rng.gen::<f64>() }).collect()
        })
        .collect();
    ScoreMatrix::new(scores).unwrap()
}

/// Every assignment that respects capacities, including leaving recipients unmatched.
fn all_assignments(m: &ScoreMatrix) -> Vec<Assignment> {
    let mut out = Vec::new();
    let mut cur = vec![None; m.recipients()];
    fn rec(m: &ScoreMatrix, r: usize, cur: &mut Assignment, load: &mut Vec<usize>, out: &mut Vec<Assignment>) {
        if r == m.recipients() {
            out.push(cur.clone());
            return;
        }
        cur[r] = None;
        rec(m, r + 1, cur, load, out);
        for d in 0..m.donors() {
            if load[d] < m.capacity(d) {
                load[d] += 1;
                cur[r] = Some(d);
                rec(m, r + 1, cur, load, out);
                load[d] -= 1;
            }
        }
        cur[r] = None;
    }
    let mut load = vec![0; m.donors()];
    rec(m, 0, &mut cur, &mut load, &mut out);
    out
}

#[test]
fn one_by_one() {
    let m = ScoreMatrix::new(vec![vec![0.9]]).unwrap();
    assert_eq!(stable_match(&m), vec![Some(0)]);
}

#[test]
fn two_by_two_example() {
    let m = ScoreMatrix::new(vec![vec![0.9, 0.1], vec![0.8, 0.2]]).unwrap();
    let a = stable_match(&m);
    assert_eq!(a, vec![Some(0), Some(1)]);
    // Of the two perfect matchings only this one is free of blocking pairs.
    assert!(blocking_pairs(&m, &vec![Some(1), Some(0)]).contains(&(0, 0)));
    assert!(is_stable(&m, &a));
}

#[test]
fn three_by_three_random() {
    let m = random_matrix(3, 3, 42, false);
    let a = stable_match(&m);
    assert!(blocking_pairs(&m, &a).is_empty());
    assert!(a.iter().all(Option::is_some));
}

#[test]
fn empty_matrix() {
    let m = ScoreMatrix::new(vec![]).unwrap();
    assert_eq!(stable_match(&m), Vec::<Option<usize>>::new());
}

#[test]
fn invalid_matrices() {
    assert!(ScoreMatrix::new(vec![vec![1.5]]).is_err());
    assert!(ScoreMatrix::new(vec![vec![f64::NAN]]).is_err());
    assert!(ScoreMatrix::new(vec![vec![0.1, 0.2], vec![0.3]]).is_err());
    assert!(ScoreMatrix::with_capacities(vec![vec![0.1]], vec![0]).is_err());
}

#[test]
fn stable_for_all_small_shapes() {
    for r in 1..=7 {
        for d in 1..=7 {
            for seed in 0..4 {
                let m = random_matrix(r, d, seed * 100 + (r * 10 + d) as u64, seed % 2 == 1);
                let a = stable_match(&m);
                assert!(is_stable(&m, &a), "{r}x{d} seed {seed}");
                assert_eq!(a.iter().flatten().count(), r.min(d));
            }
        }
    }
}

#[test]
fn recipient_optimal_among_stable_matchings() {
    for r in 1..=5 {
        for d in 1..=5 {
            let m = random_matrix(r, d, (r * 7 + d) as u64, (r + d) % 2 == 0);
            let da = stable_match(&m);
            let stable: Vec<Assignment> = all_assignments(&m).into_iter().filter(|a| is_stable(&m, a)).collect();
            assert!(stable.contains(&da));
            let rank = |r_: usize, a: &Assignment| a[r_].map_or(usize::MAX, |d_| recipient_rank(&m, r_, d_));
            for s in &stable {
                for i in 0..r {
                    assert!(rank(i, &da) <= rank(i, s), "{r}x{d}: recipient {i}");
                }
            }
        }
    }
}

#[test]
fn capacities_are_honored() {
    let m = ScoreMatrix::with_capacities(vec![vec![0.9, 0.1], vec![0.8, 0.2], vec![0.7, 0.3]], vec![2, 1]).unwrap();
    let a = stable_match(&m);
    assert_eq!(a, vec![Some(0), Some(0), Some(1)]);
    assert!(is_stable(&m, &a));
    for seed in 0..20 {
        let base = random_matrix(4, 3, seed, false);
        let scores = (0..4).map(|i| (0..3).map(|j| base.score(i, j)).collect()).collect();
        let m = ScoreMatrix::with_capacities(scores, vec![2, 1, 1]).unwrap();
        assert!(is_stable(&m, &stable_match(&m)));
    }
}

#[test]
fn deterministic() {
    let m = random_matrix(6, 4, 9, true);
    assert_eq!(stable_match(&m), stable_match(&m));
}
