//! Capacity limits and the parallel cochain scan behind the exhaustive searches.

use rayon::prelude::*;

use crate::cochains::{Cochain1, CochainSpace};
use crate::groups::Elem;
use crate::{Error, Result};

/// Default bound on state visits for any exhaustive enumeration.
pub const DEFAULT_MAX_ENUM: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
  /// Maximum number of state visits an enumeration may perform.
  pub max_enum: u64,
}

impl Default for SearchLimits {
  fn default() -> Self {
    Self { max_enum: DEFAULT_MAX_ENUM }
  }
}

impl SearchLimits {
  pub fn new(max_enum: u64) -> Self {
    Self { max_enum }
  }
}

/// `base^exp`, or `None` on overflow.
pub(crate) fn checked_pow(base: u64, exp: usize) -> Option<u64> {
  let mut acc: u64 = 1;
  for _ in 0..exp {
    acc = acc.checked_mul(base)?;
  }
  Some(acc)
}

/// Writes the mixed-radix digits of `index` (most significant first) into `out`.
pub(crate) fn decode_index(mut index: u64, base: u64, out: &mut [u32]) {
  for slot in out.iter_mut().rev() {
    *slot = (index % base) as u32;
    index /= base;
  }
}

/// Best candidate of a ratio search: `num / den` with its cochain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct RatioBest {
  pub num: u128,
  pub den: u128,
  pub values: Vec<Elem>,
}

impl RatioBest {
  /// Smaller ratio wins; ties go to the lexicographically smaller cochain.
  fn better_than(&self, other: &RatioBest) -> bool {
    let lhs = self.num * other.den;
    let rhs = other.num * self.den;
    lhs < rhs || (lhs == rhs && self.values < other.values)
  }

  fn pick(a: Option<RatioBest>, b: Option<RatioBest>) -> Option<RatioBest> {
    match (a, b) {
      (Some(a), Some(b)) => Some(if b.better_than(&a) { b } else { a }),
      (a, b) => a.or(b),
    }
  }
}

pub(crate) struct ScanOutcome {
  pub best: Option<RatioBest>,
  pub scanned: u64,
}

/// Minimizes `score(φ)` over all 1-cochains, or over cochains that are trivial on a
/// spanning forest when `gauge_fixed` is set.
///
/// `score` returns `None` for cochains that are excluded from the minimum and
/// `Some((num, den))` otherwise. Each candidate is charged `cost_per_candidate` state
/// visits against the limit.
pub(crate) fn scan_cochains<F>(
  space: &CochainSpace,
  gauge_fixed: bool,
  cost_per_candidate: u64,
  limits: SearchLimits,
  score: F,
) -> Result<ScanOutcome>
where
  F: Fn(&Cochain1) -> Option<(u128, u128)> + Sync,
{
  let fixed = if gauge_fixed { space.spanning_forest() } else { Vec::new() };
  let free: Vec<usize> = (0..space.num_edges()).filter(|e| !fixed.contains(e)).collect();
  let base = space.group().order() as u64;
  let total = checked_pow(base, free.len())
    .filter(|n| n.checked_mul(cost_per_candidate.max(1)).is_some_and(|v| v <= limits.max_enum))
    .ok_or_else(|| {
      Error::capacity(
        "cochain enumeration",
        format!("{base}^{} x {cost_per_candidate}", free.len()),
        limits.max_enum,
      )
    })?;

  const BLOCK: u64 = 256;
  let blocks = total.div_ceil(BLOCK);
  let best = (0..blocks)
    .into_par_iter()
    .map(|block| {
      let mut digits = vec![0u32; free.len()];
      let mut phi = space.trivial1();
      let mut best: Option<RatioBest> = None;
      for index in block * BLOCK..((block + 1) * BLOCK).min(total) {
        decode_index(index, base, &mut digits);
        for (&e, &d) in free.iter().zip(&digits) {
          phi.set(e, Elem(d));
        }
        if let Some((num, den)) = score(&phi) {
          let cand = RatioBest { num, den, values: phi.values().to_vec() };
          best = RatioBest::pick(best, Some(cand));
        }
      }
      best
    })
    .reduce(|| None, RatioBest::pick);
  Ok(ScanOutcome { best, scanned: total })
}
