use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::cube::{Hypercube, Interval, Partition};
use crate::math::{self, derive_seed, STREAM_MISSING, STREAM_SYNTH};
use crate::{Dataset, DatasetRole, Error, FeatureSchema, LabeledInstance, LossKind, PartialDataset, Result};

/// Joint distribution of the features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FeatureDist {
    /// Independent uniforms on `[lo, hi)`.
    Uniform { lo: f64, hi: f64 },
    /// Standard normals with pairwise correlation `rho`.
    Gaussian { rho: f64 },
}

/// Success probability inside one ground-truth cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum CellLaw {
    Constant {
        p: f64,
    },
    /// `sigmoid(bias + weights . x)`.
    Logistic {
        bias: f64,
        weights: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthCell {
    pub cell: Hypercube,
    pub law: CellLaw,
}

/// A synthetic data source whose label distribution is known exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub dim: usize,
    pub n: usize,
    pub features: FeatureDist,
    /// Cells of a guillotine partition with their laws.
    pub truth: Vec<TruthCell>,
    /// Probability that any single feature value is missing.
    pub missing_rate: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// Two features on `[-1, 1)`, quadrant rates 0.95 / 0.05 / 0.05 / 0.95.
    Xor,
    /// Three features on `[0, 1)`, four rectangular cells at 0.95 / 0.05 and
    /// one noise feature.
    Piecewise,
    /// One feature on `[0, 1)`, rates 0.9 / 0.1 / 0.9 on thirds.
    ThreeSegment,
    /// Four correlated Gaussian features, logistic label, 10% missing.
    Correlated,
    /// Six uniform features; the label follows feature 1 where
    /// `x0 < 0` and feature 3 elsewhere, with features 2 and 4 shared.
    Planted,
}

impl Preset {
    pub const ALL: [Preset; 5] =
        [Preset::Xor, Preset::Piecewise, Preset::ThreeSegment, Preset::Correlated, Preset::Planted];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Xor => "xor",
            Preset::Piecewise => "piecewise",
            Preset::ThreeSegment => "three_segment",
            Preset::Correlated => "correlated",
            Preset::Planted => "planted",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == s || p.name().replace('_', "-") == s)
    }

    pub fn spec(self, n: usize, seed: u64) -> SynthSpec {
        let uniform = |lo, hi| FeatureDist::Uniform { lo, hi };
        let (dim, features, truth, missing_rate) = match self {
            Preset::Xor => {
                let c =
                    |a: Interval, b: Interval, p| TruthCell { cell: cube(vec![a, b]), law: CellLaw::Constant { p } };
                let (neg, pos) = (Interval { lo: f64::NEG_INFINITY, hi: 0.0 }, Interval { lo: 0.0, hi: f64::INFINITY });
                let truth = vec![c(neg, neg, 0.95), c(neg, pos, 0.05), c(pos, neg, 0.05), c(pos, pos, 0.95)];
                (2, uniform(-1.0, 1.0), truth, 0.0)
            }
            Preset::Piecewise => {
                let full = Interval::FULL;
                let c = |x0: (f64, f64), x1: (f64, f64), p| TruthCell {
                    cell: cube(vec![bound(x0), bound(x1), full]),
                    law: CellLaw::Constant { p },
                };
                let (inf, ninf) = (f64::INFINITY, f64::NEG_INFINITY);
                let truth = vec![
                    c((ninf, 0.5), (ninf, 0.5), 0.95),
                    c((ninf, 0.5), (0.5, inf), 0.05),
                    c((0.5, inf), (ninf, 0.75), 0.05),
                    c((0.5, inf), (0.75, inf), 0.95),
                ];
                (3, uniform(0.0, 1.0), truth, 0.0)
            }
            Preset::ThreeSegment => {
                let c = |lo, hi, p| TruthCell { cell: cube(vec![bound((lo, hi))]), law: CellLaw::Constant { p } };
                let truth = vec![
                    c(f64::NEG_INFINITY, 1.0 / 3.0, 0.9),
                    c(1.0 / 3.0, 2.0 / 3.0, 0.1),
                    c(2.0 / 3.0, f64::INFINITY, 0.9),
                ];
                (1, uniform(0.0, 1.0), truth, 0.0)
            }
            Preset::Correlated => {
                let law = CellLaw::Logistic { bias: 0.0, weights: vec![1.5, -1.0, 0.75, 0.0] };
                (4, FeatureDist::Gaussian { rho: 0.8 }, vec![TruthCell { cell: Hypercube::full(4), law }], 0.10)
            }
            Preset::Planted => {
                let half = |lo, hi| {
                    let mut b = vec![Interval::FULL; 6];
                    b[0] = bound((lo, hi));
                    cube(b)
                };
                let a = CellLaw::Logistic { bias: 0.0, weights: vec![0.0, 3.0, 1.5, 0.0, 1.5, 0.0] };
                let b = CellLaw::Logistic { bias: 0.0, weights: vec![0.0, 0.0, 1.5, 2.0, 1.5, 0.0] };
                let truth = vec![
                    TruthCell { cell: half(f64::NEG_INFINITY, 0.0), law: a },
                    TruthCell { cell: half(0.0, f64::INFINITY), law: b },
                ];
                (6, uniform(-1.0, 1.0), truth, 0.0)
            }
        };
        SynthSpec { dim, n, features, truth, missing_rate, seed }
    }
}

fn bound((lo, hi): (f64, f64)) -> Interval {
    Interval { lo, hi }
}

fn cube(bounds: Vec<Interval>) -> Hypercube {
    Hypercube::new(bounds).expect("preset cells are non-empty")
}

/// Observed and complete versions of one synthetic draw.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthData {
    /// Every value, before missingness is applied.
    pub complete: Dataset,
    pub observed: PartialDataset,
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidConfig("synthetic data needs at least one feature".into()));
        }
        if !(0.0..1.0).contains(&self.missing_rate) {
            return Err(Error::InvalidConfig(format!("missing rate must lie in [0, 1), got {}", self.missing_rate)));
        }
        match self.features {
            FeatureDist::Uniform { lo, hi } if !(lo < hi && lo.is_finite() && hi.is_finite()) => {
                return Err(Error::InvalidConfig(format!("uniform range [{lo}, {hi}) is empty or unbounded")));
            }
            FeatureDist::Gaussian { rho } if !(0.0..1.0).contains(&rho) => {
                return Err(Error::InvalidConfig(format!("correlation must lie in [0, 1), got {rho}")));
            }
            _ => {}
        }
        for (i, t) in self.truth.iter().enumerate() {
            if t.cell.dim() != self.dim {
                return Err(Error::InvalidConfig(format!("truth cell {i} has the wrong dimension")));
            }
            match &t.law {
                CellLaw::Constant { p } if !(0.0..=1.0).contains(p) => {
                    return Err(Error::InvalidConfig(format!("truth cell {i} has probability {p} outside [0, 1]")));
                }
                CellLaw::Logistic { weights, .. } if weights.len() != self.dim => {
                    return Err(Error::InvalidConfig(format!("truth cell {i} has {} weights", weights.len())));
                }
                _ => {}
            }
        }
        Partition::new(self.truth.iter().map(|t| t.cell.clone()).collect())
            .map_err(|e| Error::InvalidConfig(format!("truth cells: {e}")))?;
        Ok(())
    }

    /// True success probability at `x`.
    pub fn probability(&self, x: &[f64]) -> f64 {
        let cell = self.truth.iter().find(|t| t.cell.contains_unchecked(x));
        match cell.map(|t| &t.law) {
            Some(CellLaw::Constant { p }) => *p,
            Some(CellLaw::Logistic { bias, weights }) => {
                math::sigmoid(bias + weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>())
            }
            None => 0.5,
        }
    }

    pub fn schema(&self) -> FeatureSchema {
        FeatureSchema::anonymous(self.dim).expect("dim checked by validate")
    }

    pub fn with_n(&self, n: usize) -> Self {
        Self { n, ..self.clone() }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }
}

/// Draws `spec.n` labeled rows, then hides values completely at random.
pub fn synth_generate(spec: &SynthSpec) -> Result<SynthData> {
    spec.validate()?;
    let mut rng = math::rng(derive_seed(spec.seed, STREAM_SYNTH));
    let mut instances = Vec::with_capacity(spec.n);
    for _ in 0..spec.n {
        let x: Vec<f64> = match spec.features {
            FeatureDist::Uniform { lo, hi } => (0..spec.dim).map(|_| rng.gen_range(lo..hi)).collect(),
            FeatureDist::Gaussian { rho } => {
                let common = math::standard_normal(&mut rng);
                (0..spec.dim)
                    .map(|_| math::sqrt(rho) * common + math::sqrt(1.0 - rho) * math::standard_normal(&mut rng))
                    .collect()
            }
        };
        let y = (rng.gen::<f64>() < spec.probability(&x)) as u8;
        instances.push(LabeledInstance::new(x, y));
    }
    let complete = Dataset::new(spec.schema(), instances, DatasetRole::Unsplit)?;
    let mut miss = math::rng(derive_seed(spec.seed, STREAM_MISSING));
    let rows = complete
        .instances()
        .iter()
        .map(|r| {
            r.x.iter()
                .map(|&v| if spec.missing_rate > 0.0 && miss.gen::<f64>() < spec.missing_rate { None } else { Some(v) })
                .collect()
        })
        .collect();
    let observed = PartialDataset::new(spec.schema(), rows, complete.labels().collect())?;
    Ok(SynthData { complete, observed })
}

/// Expected loss of `predict` under the generator's distribution, by the midpoint
/// rule on a grid of `grid` points per axis. Requires uniform features.
pub fn true_expected_loss<F>(spec: &SynthSpec, predict: F, loss: LossKind, grid: usize) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let FeatureDist::Uniform { lo, hi } = spec.features else {
        return Err(Error::InvalidArgument("exact loss needs uniform features".into()));
    };
    if grid == 0 {
        return Err(Error::InvalidArgument("grid needs at least one point per axis".into()));
    }
    let total = grid
        .checked_pow(spec.dim as u32)
        .filter(|&t| t <= 50_000_000)
        .ok_or_else(|| Error::InvalidArgument(format!("grid {grid}^{} is too large", spec.dim)))?;
    let step = (hi - lo) / grid as f64;
    let mut x = vec![0.0; spec.dim];
    let mut sum = 0.0;
    for flat in 0..total {
        let mut rem = flat;
        for v in x.iter_mut() {
            *v = lo + (rem % grid) as f64 * step + 0.5 * step;
            rem /= grid;
        }
        let p = predict(&x);
        let q = spec.probability(&x);
        sum += q * loss.pointwise(p, 1) + (1.0 - q) * loss.pointwise(p, 0);
    }
    Ok(sum / total as f64)
}

/// Names of the available presets.
pub fn preset_names() -> Vec<String> {
    Preset::ALL.iter().map(|p| String::from(p.name())).collect()
}
