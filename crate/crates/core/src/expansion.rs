//! Exact cosystolic expansion and checks of the stability/expansion inequalities.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cochains::{Cochain1, CochainSpace, CocycleSource};
use crate::complex::SimplicialComplex;
use crate::covers::{cover_stability_exact, lift_complex};
use crate::groups::{Elem, GroupAction};
use crate::search::{decode_index, scan_cochains, SearchLimits};
use crate::{Error, Rational, Result};

/// One row of the optional per-cochain table: `(‖d₁φ‖, ‖φ‖_csy, h(φ))`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionRow {
  pub cochain: Cochain1,
  pub d1_norm: Rational,
  pub csy_norm: Rational,
  pub ratio: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionReport {
  /// `h₁(X; G)`.
  pub h1: Rational,
  pub witness: Cochain1,
  pub d1_norm: Rational,
  pub csy_norm: Rational,
  pub scanned: u64,
  pub table: Option<Vec<ExpansionRow>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpansionOptions {
  /// Scan only cochains trivial on a spanning forest.
  pub gauge_fixed: bool,
  /// Keep a row for every non-cocycle scanned.
  pub table: bool,
}

impl Default for ExpansionOptions {
  fn default() -> Self {
    Self { gauge_fixed: true, table: false }
  }
}

/// `h₁(X; G)` by exhaustive search with the default options.
pub fn h1_exact(
  x: &SimplicialComplex,
  group: &GroupAction,
  limits: SearchLimits,
) -> Result<ExpansionReport> {
  h1_exact_with(x, group, ExpansionOptions::default(), limits)
}

/// `min ‖d₁φ‖ / ‖φ‖_csy` over all non-cocycles.
///
/// Both norms are invariant under the `C⁰`-action, so gauge fixing a spanning forest
/// visits one representative per orbit of every connected component.
pub fn h1_exact_with(
  x: &SimplicialComplex,
  group: &GroupAction,
  options: ExpansionOptions,
  limits: SearchLimits,
) -> Result<ExpansionReport> {
  if !x.is_pure() {
    return Err(Error::NotPure);
  }
  let space = CochainSpace::new(x, group);
  let tri_den = space.triangle_denominator()?;
  let edge_den = space.edge_denominator()?;
  let cocycles = space.cocycles(limits)?;

  let score = |phi: &Cochain1| {
    if space.is_cocycle(phi) {
      return None;
    }
    let d1 = space.d1_norm_count(phi).ok()?;
    let (dist, _) = space.nearest_in(phi, &cocycles).ok()?;
    Some((d1 as u128, dist as u128))
  };
  let outcome = scan_cochains(&space, options.gauge_fixed, cocycles.len() as u64, limits, score)?;
  let best = outcome
    .best
    .ok_or_else(|| Error::Degenerate("every cochain is a cocycle; h1 is undefined".into()))?;

  let d1_norm = Rational::new(BigInt::from(best.num), tri_den.clone());
  let csy_norm = Rational::new(BigInt::from(best.den), edge_den.clone());
  let table = if options.table {
    let mut rows = Vec::new();
    enumerate_rows(&space, options.gauge_fixed, &cocycles, &tri_den, &edge_den, &mut rows)?;
    Some(rows)
  } else {
    None
  };
  Ok(ExpansionReport {
    h1: &d1_norm / &csy_norm,
    witness: Cochain1::from_values(best.values),
    d1_norm,
    csy_norm,
    scanned: outcome.scanned,
    table,
  })
}

fn enumerate_rows(
  space: &CochainSpace,
  gauge_fixed: bool,
  cocycles: &[Cochain1],
  tri_den: &BigInt,
  edge_den: &BigInt,
  rows: &mut Vec<ExpansionRow>,
) -> Result<()> {
  let fixed = if gauge_fixed { space.spanning_forest() } else { Vec::new() };
  let free: Vec<usize> = (0..space.num_edges()).filter(|e| !fixed.contains(e)).collect();
  let base = space.group().order() as u64;
  let mut digits = vec![0u32; free.len()];
  let mut phi = space.trivial1();
  for index in 0..base.pow(free.len() as u32) {
    decode_index(index, base, &mut digits);
    for (&e, &d) in free.iter().zip(&digits) {
      phi.set(e, Elem(d));
    }
    if space.is_cocycle(&phi) {
      continue;
    }
    let d1_norm = Rational::new(space.d1_norm_count(&phi)?.into(), tri_den.clone());
    let csy_norm = Rational::new(space.nearest_in(&phi, cocycles)?.0.into(), edge_den.clone());
    rows.push(ExpansionRow {
      cochain: phi.clone(),
      ratio: &d1_norm / &csy_norm,
      d1_norm,
      csy_norm,
    });
  }
  Ok(())
}

/// `(1 − Fix/|S|)‖d₁φ‖ ≤ m(Y_φ) ≤ ‖d₁φ‖` for one cochain.
#[derive(Clone, Debug, PartialEq)]
pub struct SandwichCertificate {
  pub lower: Rational,
  pub deficiency: Rational,
  pub upper: Rational,
  pub holds: bool,
}

/// `1 − Fix_G(S)/|S|`.
pub fn fixity_factor(action: &GroupAction) -> Result<Rational> {
  let fix = action.fixity()?.fixity;
  Ok(Rational::one() - Rational::new(fix.into(), action.t().into()))
}

/// Evaluates both sides of the deficiency sandwich on the lift `Y_φ`.
pub fn verify_sandwich(
  x: &SimplicialComplex,
  action: &GroupAction,
  phi: &Cochain1,
) -> Result<SandwichCertificate> {
  let space = CochainSpace::new(x, action);
  let upper = space.d1_norm(phi)?;
  let lower = fixity_factor(action)? * &upper;
  let deficiency = lift_complex(x, phi, action)?.deficiency_exact()?.m;
  let holds = lower <= deficiency && deficiency <= upper;
  Ok(SandwichCertificate { lower, deficiency, upper, holds })
}

/// `(2/|S|)h₁ ≤ (1 − Fix/|S|)h₁ ≤ c(X; G, S) ≤ h₁`, all computed exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct MainTheoremReport {
  pub h1: Rational,
  pub stability: Rational,
  pub fixity: usize,
  pub t: usize,
  pub free_bound: Rational,
  pub fixity_bound: Rational,
  pub holds: bool,
}

pub fn verify_main_theorem(
  x: &SimplicialComplex,
  action: &GroupAction,
  limits: SearchLimits,
) -> Result<MainTheoremReport> {
  let h1 = h1_exact(x, action, limits)?.h1;
  let stability = cover_stability_exact(x, action, true, limits)?.stability;
  let fixity = action.fixity()?.fixity;
  let t = action.t();
  let free_bound = Rational::new(2.into(), t.into()) * &h1;
  let fixity_bound = fixity_factor(action)? * &h1;
  let holds = free_bound <= fixity_bound && fixity_bound <= stability && stability <= h1;
  Ok(MainTheoremReport { h1, stability, fixity, t, free_bound, fixity_bound, holds })
}

/// Inputs that stand in for exact search in [`nearest_cocycle_bound_check`].
#[derive(Clone, Debug, Default)]
pub struct NearestInputs {
  /// A known lower bound on `h₁`, used instead of computing it.
  pub h1_lower_bound: Option<Rational>,
  /// A cocycle to measure against instead of the exact nearest one.
  pub candidate: Option<Cochain1>,
  /// The caller asserts the complex is simply connected.
  pub simply_connected: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NearestBoundReport {
  pub distance: Rational,
  pub deficiency: Rational,
  pub h1: Rational,
  /// `m / ((1 − Fix/|S|)·h₁)`, or `None` when the factor vanishes.
  pub bound: Option<Rational>,
  pub witness: Cochain1,
  pub holds: bool,
}

/// Checks `dist(φ, ψ) ≤ m(Y_φ) / ((1 − Fix/|S|)·h₁)` for the nearest (or supplied) cocycle.
pub fn nearest_cocycle_bound_check(
  x: &SimplicialComplex,
  action: &GroupAction,
  phi: &Cochain1,
  inputs: NearestInputs,
  limits: SearchLimits,
) -> Result<NearestBoundReport> {
  let space = CochainSpace::new(x, action);
  let (distance, witness) = match inputs.candidate {
    Some(candidate) => {
      if !space.is_cocycle(&candidate) {
        return Err(Error::MalformedInput("candidate is not a cocycle".into()));
      }
      (space.dist(phi, &candidate)?, candidate)
    }
    None => {
      let source =
        if inputs.simply_connected { CocycleSource::Coboundaries } else { CocycleSource::Search };
      space.cosystolic_norm_exact(phi, source, limits)?
    }
  };
  let h1 = match inputs.h1_lower_bound {
    Some(h) => h,
    None => h1_exact(x, action, limits)?.h1,
  };
  let deficiency = lift_complex(x, phi, action)?.deficiency_exact()?.m;
  let factor = fixity_factor(action)? * &h1;
  let bound = (!factor.is_zero()).then(|| &deficiency / &factor);
  let holds = bound.as_ref().is_none_or(|b| distance <= *b);
  Ok(NearestBoundReport { distance, deficiency, h1, bound, witness, holds })
}

#[cfg(test)]
mod tests {
  use super::*;
  use crate::ratio;

  fn tri() -> SimplicialComplex {
    SimplicialComplex::from_facets(&[[0, 1, 2]]).unwrap()
  }

  #[test]
  fn triangle_expansion() {
    let z2 = GroupAction::symmetric(2).unwrap();
    let report = h1_exact(&tri(), &z2, SearchLimits::default()).unwrap();
    assert_eq!(report.h1, ratio(3, 1));
    let s3 = GroupAction::symmetric(3).unwrap();
    let report = h1_exact(&tri(), &s3, SearchLimits::default()).unwrap();
    assert_eq!(report.h1, ratio(3, 1));
  }

  #[test]
  fn gauge_fixing_matches_full_scan_on_the_triangle() {
    for group in [GroupAction::symmetric(2).unwrap(), GroupAction::symmetric(3).unwrap()] {
      let full = ExpansionOptions { gauge_fixed: false, table: true };
      let a = h1_exact_with(&tri(), &group, full, SearchLimits::default()).unwrap();
      let b = h1_exact(&tri(), &group, SearchLimits::default()).unwrap();
      assert_eq!(a.h1, b.h1);
      let rows = a.table.unwrap();
      assert_eq!(rows.len() as u64, a.scanned - a.scanned / group.order() as u64);
      assert_eq!(rows.iter().map(|r| r.ratio.clone()).min().unwrap(), a.h1);
    }
  }

  #[test]
  fn degenerate_inputs() {
    let path = SimplicialComplex::from_facets(&[[0, 1], [1, 2]]).unwrap();
    let z2 = GroupAction::symmetric(2).unwrap();
    assert!(matches!(h1_exact(&path, &z2, SearchLimits::default()), Err(Error::Degenerate(_))));
    let trivial = GroupAction::symmetric(1).unwrap();
    assert!(matches!(
      h1_exact(&tri(), &trivial, SearchLimits::default()),
      Err(Error::Degenerate(_))
    ));
  }

  #[test]
  fn sandwich_examples() {
    let x = tri();
    let s3 = GroupAction::symmetric(3).unwrap();
    let transposition = s3.elements().find(|&g| s3.fix(g) == 1).unwrap();
    let mut phi = Cochain1::from_values(vec![Elem::IDENTITY; 3]);
    let cert = verify_sandwich(&x, &s3, &phi).unwrap();
    assert_eq!(
      (cert.lower.clone(), cert.deficiency.clone(), cert.upper.clone()),
      (ratio(0, 1), ratio(0, 1), ratio(0, 1))
    );
    phi.set(0, transposition);
    let cert = verify_sandwich(&x, &s3, &phi).unwrap();
    assert_eq!((cert.lower, cert.deficiency, cert.upper), (ratio(2, 3), ratio(2, 3), ratio(1, 1)));

    let z2 = GroupAction::symmetric(2).unwrap();
    phi.set(0, Elem(1));
    let cert = verify_sandwich(&x, &z2, &phi).unwrap();
    assert_eq!((cert.lower, cert.deficiency, cert.upper), (ratio(1, 1), ratio(1, 1), ratio(1, 1)));
  }

  #[test]
  fn main_theorem_on_the_triangle() {
    let z2 = GroupAction::symmetric(2).unwrap();
    let r = verify_main_theorem(&tri(), &z2, SearchLimits::default()).unwrap();
    assert!(r.holds);
    assert_eq!(
      [r.free_bound, r.fixity_bound, r.stability, r.h1],
      [ratio(3, 1), ratio(3, 1), ratio(3, 1), ratio(3, 1)]
    );
    let s3 = GroupAction::symmetric(3).unwrap();
    let r = verify_main_theorem(&tri(), &s3, SearchLimits::default()).unwrap();
    assert!(r.holds);
    assert_eq!(
      [r.free_bound, r.fixity_bound, r.stability, r.h1],
      [ratio(2, 1), ratio(2, 1), ratio(2, 1), ratio(3, 1)]
    );
  }

  #[test]
  fn nearest_bound_examples() {
    let x = tri();
    let z2 = GroupAction::symmetric(2).unwrap();
    let phi = Cochain1::from_values(vec![Elem(1), Elem(0), Elem(0)]);
    let r =
      nearest_cocycle_bound_check(&x, &z2, &phi, NearestInputs::default(), SearchLimits::default())
        .unwrap();
    assert_eq!(r.distance, ratio(1, 3));
    assert_eq!(r.bound, Some(ratio(1, 3)));
    assert!(r.holds);
    let cocycle = Cochain1::from_values(vec![Elem(0); 3]);
    let r = nearest_cocycle_bound_check(
      &x,
      &z2,
      &cocycle,
      NearestInputs::default(),
      SearchLimits::default(),
    )
    .unwrap();
    assert_eq!((r.distance, r.bound), (ratio(0, 1), Some(ratio(0, 1))));
  }
}
