//! Scalar math (via `libm`, since `core` has no float intrinsics), the
//! logistic function, and seed derivation.
//!
//! Every random stream in the crate is a ChaCha8 generator seeded with
//! `derive_seed(root, stream)`. Streams are small integer constants, so any
//! stage can be re-run on its own and reproduce the same draws.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Stream used by the stratified train/validation split.
pub const STREAM_SPLIT: u64 = 1;
/// Stream used for fitting pool learners.
pub const STREAM_FIT: u64 = 2;
/// Stream used by the synthetic generator.
pub const STREAM_SYNTH: u64 = 3;
/// Stream used for feature missingness in the synthetic generator.
pub const STREAM_MISSING: u64 = 4;
/// Train/test split done by the command-line tools.
pub const STREAM_TEST: u64 = 5;
/// Base stream for benchmark baselines; baseline `i` uses `STREAM_BASELINE + i`.
pub const STREAM_BASELINE: u64 = 16;

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn ln1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn expm1(x: f64) -> f64 {
    libm::expm1(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn round(x: f64) -> f64 {
    libm::round(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

/// Numerically stable logistic function.
#[inline]
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + exp(-z))
    } else {
        let e = exp(z);
        e / (1.0 + e)
    }
}

/// `ln(1 + e^z)` without overflow.
#[inline]
pub fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + ln1p(exp(-z))
    } else {
        ln1p(exp(z))
    }
}

#[inline]
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Sub-seed for `stream` under the root `seed`.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(stream.wrapping_mul(0xD1B5_4A32_D192_ED03)))
}

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard normal draw by Box-Muller.
pub fn standard_normal<R: rand::Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = rng.gen::<f64>().max(1e-300);
    let u2: f64 = rng.gen::<f64>();
    sqrt(-2.0 * ln(u1)) * cos(2.0 * core::f64::consts::PI * u2)
}

/// Population mean and standard deviation; a zero deviation becomes 1 so
/// callers can always divide by it.
pub fn mean_and_scale<I: Iterator<Item = f64> + Clone>(values: I) -> (f64, f64) {
    let mut n = 0usize;
    let mut sum = 0.0;
    for v in values.clone() {
        n += 1;
        sum += v;
    }
    if n == 0 {
        return (0.0, 1.0);
    }
    let mean = sum / n as f64;
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
    let sd = sqrt(var);
    (mean, if sd > 1e-12 { sd } else { 1.0 })
}
