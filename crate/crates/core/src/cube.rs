//! Axis-aligned cells with half-open bounds `[lo, hi)` over the extended
//! reals, and partitions built from them.
//!
//! Bounds serialize as decimal strings, with `"-inf"` and `"inf"` for the
//! unbounded ends. Rust's float formatting is shortest-round-trip, so a
//! parsed bound is bit-identical to the original.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const FULL: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo == f64::INFINITY || hi == f64::NEG_INFINITY || lo >= hi {
            return Err(Error::InvalidArgument(format!("empty or invalid interval [{lo}, {hi})")));
        }
        Ok(Self { lo, hi })
    }

    #[inline]
    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v < self.hi
    }

    /// True when `t` splits the interval into two non-empty halves.
    #[inline]
    pub fn splits_at(&self, t: f64) -> bool {
        self.lo < t && t < self.hi
    }

    fn disjoint(&self, other: &Interval) -> bool {
        self.hi <= other.lo || other.hi <= self.lo
    }
}

fn bound_to_string(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        v.to_string()
    }
}

fn bound_from_str(s: &str) -> core::result::Result<f64, String> {
    match s {
        "inf" | "+inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        _ => s.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| format!("invalid bound `{s}`")),
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, serializer: S) -> core::result::Result<S::Ok, S::Error> {
        [bound_to_string(self.lo), bound_to_string(self.hi)].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> core::result::Result<Self, D::Error> {
        let [lo, hi] = <[String; 2]>::deserialize(deserializer)?;
        let lo = bound_from_str(&lo).map_err(serde::de::Error::custom)?;
        let hi = bound_from_str(&hi).map_err(serde::de::Error::custom)?;
        Interval::new(lo, hi).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Hypercube {
    bounds: Vec<Interval>,
}

impl Hypercube {
    /// The whole space in `dim` dimensions.
    pub fn full(dim: usize) -> Self {
        Self { bounds: alloc::vec![Interval::FULL; dim] }
    }

    pub fn new(bounds: Vec<Interval>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::InvalidArgument("hypercube needs at least one dimension".into()));
        }
        for b in &bounds {
            Interval::new(b.lo, b.hi)?;
        }
        Ok(Self { bounds })
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[Interval] {
        &self.bounds
    }

    pub fn is_full(&self) -> bool {
        self.bounds.iter().all(|b| *b == Interval::FULL)
    }

    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        Ok(self.contains_unchecked(x))
    }

    #[inline]
    pub fn contains_unchecked(&self, x: &[f64]) -> bool {
        self.bounds.iter().zip(x).all(|(b, &v)| b.contains(v))
    }

    /// Guillotine cut along `dim` at `t`: `(x_dim < t, x_dim >= t)`.
    pub fn split(&self, dim: usize, t: f64) -> Result<(Hypercube, Hypercube)> {
        let b = *self.bounds.get(dim).ok_or(Error::DimensionMismatch { expected: self.dim(), got: dim + 1 })?;
        if !b.splits_at(t) {
            return Err(Error::InvalidArgument(format!("threshold {t} does not split [{}, {})", b.lo, b.hi)));
        }
        let mut left = self.clone();
        let mut right = self.clone();
        left.bounds[dim].hi = t;
        right.bounds[dim].lo = t;
        Ok((left, right))
    }

    pub fn disjoint(&self, other: &Hypercube) -> bool {
        self.bounds.iter().zip(&other.bounds).any(|(a, b)| a.disjoint(b))
    }
}

/// A disjoint cover of the whole space by hypercubes.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    cells: Vec<Hypercube>,
}

impl Partition {
    /// Validates disjointness and cover exactly, by interval arithmetic.
    pub fn new(cells: Vec<Hypercube>) -> Result<Self> {
        let dim = cells.first().map(|c| c.dim()).ok_or_else(|| Error::Invariant("partition has no cells".into()))?;
        if cells.iter().any(|c| c.dim() != dim) {
            return Err(Error::Invariant("partition cells differ in dimension".into()));
        }
        for i in 0..cells.len() {
            for j in i + 1..cells.len() {
                if !cells[i].disjoint(&cells[j]) {
                    return Err(Error::Invariant(format!("cells {i} and {j} overlap")));
                }
            }
        }
        let refs: Vec<&Hypercube> = cells.iter().collect();
        if !covers(&refs, Hypercube::full(dim)) {
            return Err(Error::Invariant("cells do not cover the space".into()));
        }
        Ok(Self { cells })
    }

    pub fn cells(&self) -> &[Hypercube] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn locate(&self, x: &[f64]) -> Option<usize> {
        self.cells.iter().position(|c| c.contains_unchecked(x))
    }
}

/// Whether `boxes` (all intersecting `region`) cover `region`. Splits the
/// region at any box boundary strictly inside it; once no boundary is
/// inside, every remaining box contains the whole region.
fn covers(boxes: &[&Hypercube], region: Hypercube) -> bool {
    if boxes.is_empty() {
        return false;
    }
    for b in boxes {
        for (j, iv) in b.bounds.iter().enumerate() {
            let r = region.bounds[j];
            let t = if r.splits_at(iv.lo) {
                iv.lo
            } else if r.splits_at(iv.hi) {
                iv.hi
            } else {
                continue;
            };
            let (left, right) = match region.split(j, t) {
                Ok(halves) => halves,
                Err(_) => return false,
            };
            let l: Vec<&Hypercube> = boxes.iter().copied().filter(|c| !c.disjoint(&left)).collect();
            let rr: Vec<&Hypercube> = boxes.iter().copied().filter(|c| !c.disjoint(&right)).collect();
            return covers(&l, left) && covers(&rr, right);
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn unit_square() -> Hypercube {
        Hypercube::new(vec![Interval::new(0.0, 1.0).unwrap(), Interval::new(0.0, 1.0).unwrap()]).unwrap()
    }

    #[test]
    fn membership_is_half_open() {
        assert!(Hypercube::full(3).contains(&[1e300, -1e300, 0.0]).unwrap());
        let c = unit_square();
        assert!(!c.contains(&[1.0, 0.5]).unwrap());
        assert!(c.contains(&[0.0, 0.999]).unwrap());
        assert!(c.contains(&[0.0]).is_err());
    }

    #[test]
    fn empty_intervals_rejected() {
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(f64::INFINITY, f64::INFINITY).is_err());
    }

    #[test]
    fn split_routes_threshold_right() {
        let (l, r) = Hypercube::full(1).split(0, 5.0).unwrap();
        assert!(l.contains(&[4.9]).unwrap());
        assert!(r.contains(&[5.0]).unwrap());
        assert!(Hypercube::full(1).split(0, f64::INFINITY).is_err());
        assert!(l.split(0, 6.0).is_err());
    }

    #[test]
    fn partition_validation() {
        let (l, r) = Hypercube::full(2).split(0, 0.0).unwrap();
        let (rl, rr) = r.split(1, 0.0).unwrap();
        let p = Partition::new(vec![l.clone(), rl.clone(), rr.clone()]).unwrap();
        assert_eq!(p.locate(&[0.5, -3.0]), Some(1));
        assert!(Partition::new(vec![l.clone(), rl.clone()]).is_err());
        assert!(Partition::new(vec![l.clone(), r.clone(), rl]).is_err());
        assert!(Partition::new(vec![Hypercube::full(2)]).is_ok());
    }

    #[test]
    fn bound_strings_round_trip() {
        for v in [f64::NEG_INFINITY, -0.1, 1.0 / 3.0, 5e-324, f64::INFINITY] {
            assert_eq!(bound_from_str(&bound_to_string(v)).map(f64::to_bits), Ok(v.to_bits()));
        }
        assert!(bound_from_str("nan").is_err());
    }
}
