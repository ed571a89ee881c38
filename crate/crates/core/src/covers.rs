//! Lifts of a complex along a 1-cochain and how far they are from genuine covers.
//!
//! For a cochain `φ` and an action of `G` on `S`, the lift `Y_φ` has vertices `[u, s]`
//! and a face `{[u₀, s₀], .., [u_k, s_k]}` over every face `{u₀, .., u_k}` of `X` whose
//! labels satisfy `s_i = φ(u_i, u_j) s_j` for all `i, j`. Over each edge `uv` the lift
//! is the perfect matching `[v, s] ↔ [u, φ(u, v)s]`, so the stored group element
//! `g_uv = φ(u, v)` carries the fibre over `v` onto the fibre over `u`.

use std::collections::HashSet;

use num_bigint::BigInt;
use rand::seq::index::sample;
use rand::Rng as _;
use rayon::prelude::*;

use crate::cochains::{Cochain1, CochainSpace};
use crate::complex::{Simplex, SimplicialComplex, VertexId};
use crate::groups::{GroupAction, Permutation};
use crate::rng::{derive_seed, rng_from_seed};
use crate::search::{scan_cochains, SearchLimits};
use crate::{Error, Rational, Result};

/// Samples drawn from one derived random stream in [`NearCover::triangle_test`].
const SHARD_SIZE: u64 = 4096;

/// A `t`-to-1 simplicial map `Y → X` given by a lift `Y_φ`.
#[derive(Clone, Debug)]
pub struct NearCover<'a> {
  base: &'a SimplicialComplex,
  action: &'a GroupAction,
  total: SimplicialComplex,
  cochain: Cochain1,
}

/// Deficiency `m(Y)` and the local deficiencies `μ([u, s])`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeficiencyReport {
  pub m: Rational,
  /// `local[u][s]` is `μ([u, s])`, indexed by vertex position of `u`.
  pub local: Vec<Vec<Rational>>,
  /// Triangles of `X` whose fibre is not `|S|` disjoint triangles.
  pub violated: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TriangleTestReport {
  pub samples: u64,
  pub failures: u64,
  pub frequency: f64,
  pub std_error: f64,
  /// `Σ c(τ)` over the violated triangles.
  pub exact_failure: Rational,
  pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityReport {
  /// `c(X; G, S)`.
  pub stability: Rational,
  pub witness: Cochain1,
  pub deficiency: Rational,
  pub distance: Rational,
  pub scanned: u64,
}

/// Builds `Y_φ` over `x`.
pub fn lift_complex<'a>(
  x: &'a SimplicialComplex,
  phi: &Cochain1,
  action: &'a GroupAction,
) -> Result<NearCover<'a>> {
  if !x.is_pure() {
    return Err(Error::NotPure);
  }
  let space = CochainSpace::new(x, action);
  if phi.len() != space.num_edges() {
    return Err(Error::Totality(format!("{} values for {} edges", phi.len(), space.num_edges())));
  }
  let t = action.t();
  let labels: Vec<String> =
    x.vertices().flat_map(|u| (0..t).map(move |s| format!("{}:{s}", x.label(u)))).collect();

  let mut lifted: Vec<Vec<VertexId>> = Vec::new();
  let mut labels_s = vec![0u32; x.n()];
  for k in 0..x.n() {
    for face in x.faces(k)? {
      let vs = face.vertices();
      for s0 in 0..t as u32 {
        labels_s[0] = s0;
        for i in 1..vs.len() {
          labels_s[i] = action.apply(space.get(phi, vs[i], vs[0])?, s0);
        }
        let mut compatible = true;
        'pairs: for i in 1..vs.len() {
          for j in i + 1..vs.len() {
            if labels_s[i] != action.apply(space.get(phi, vs[i], vs[j])?, labels_s[j]) {
              compatible = false;
              break 'pairs;
            }
          }
        }
        if compatible {
          lifted.push(
            vs.iter()
              .zip(&labels_s)
              .map(|(&u, &s)| (x.vertex_index(u).unwrap() * t) as VertexId + s)
              .collect(),
          );
        }
      }
    }
  }
  let total = SimplicialComplex::from_labeled_facets(labels, &lifted)?;
  Ok(NearCover { base: x, action, total, cochain: phi.clone() })
}

impl<'a> NearCover<'a> {
  pub fn base(&self) -> &'a SimplicialComplex {
    self.base
  }

  pub fn action(&self) -> &'a GroupAction {
    self.action
  }

  /// The total complex `Y`.
  pub fn total(&self) -> &SimplicialComplex {
    &self.total
  }

  /// The cochain the cover was lifted from.
  pub fn cochain(&self) -> &Cochain1 {
    &self.cochain
  }

  pub fn t(&self) -> usize {
    self.action.t()
  }

  /// Vertex `[u, s]` of `Y` for the base vertex id `u`.
  pub fn lifted_vertex(&self, u: VertexId, s: u32) -> VertexId {
    (self.base.vertex_index(u).expect("base vertex") * self.t()) as VertexId + s
  }

  /// Base vertex id `f(y)`.
  pub fn project(&self, y: VertexId) -> VertexId {
    self.base.faces_or_empty(0)[y as usize / self.t()].vertices()[0]
  }

  pub fn project_simplex(&self, s: &Simplex) -> Vec<VertexId> {
    s.vertices().iter().map(|&y| self.project(y)).collect()
  }

  fn sheet(&self, y: VertexId) -> u32 {
    y % self.t() as u32
  }

  /// Number of lifts of base triangle `tri` present in `Y`.
  pub fn lifts_of_triangle(&self, tri: usize) -> usize {
    let vs = self.base.triangles()[tri].vertices();
    let (g, space) = (self.action, CochainSpace::new(self.base, self.action));
    (0..self.t() as u32)
      .filter(|&s0| {
        let lift: Vec<VertexId> = vs
          .iter()
          .map(|&u| {
            let s = if u == vs[0] {
              s0
            } else {
              g.apply(space.get(&self.cochain, u, vs[0]).unwrap(), s0)
            };
            self.lifted_vertex(u, s)
          })
          .collect();
        Simplex::new(lift).is_ok_and(|s| self.total.contains(&s))
      })
      .count()
  }

  /// Base triangles whose fibre is not `|S|` disjoint triangles.
  pub fn violated_triangles(&self) -> Vec<usize> {
    (0..self.base.triangles().len()).filter(|&t| self.lifts_of_triangle(t) != self.t()).collect()
  }

  /// For every base edge `u < v`, the map `s ↦ s'` with `{[v, s], [u, s']}` in `Y`.
  pub fn matchings(&self) -> Result<Vec<Vec<u32>>> {
    let t = self.t();
    let mut out = vec![vec![u32::MAX; t]; self.base.edges().len()];
    for edge in self.total.edges() {
      let (a, b) = (edge.vertices()[0], edge.vertices()[1]);
      let (pa, pb) = (self.project(a), self.project(b));
      let e = self
        .base
        .edge_index(pa, pb)
        .ok_or_else(|| Error::Construction(format!("edge {edge} does not map to an edge")))?;
      // orient so that `lo` lies over the smaller base vertex
      let (lo, hi) = if pa < pb { (a, b) } else { (b, a) };
      let slot = &mut out[e][self.sheet(hi) as usize];
      if *slot != u32::MAX {
        return Err(Error::Construction(format!("fibre over edge {e} is not a matching")));
      }
      *slot = self.sheet(lo);
    }
    for (e, m) in out.iter().enumerate() {
      if m.contains(&u32::MAX) {
        return Err(Error::Construction(format!("fibre over edge {e} is not a perfect matching")));
      }
    }
    Ok(out)
  }

  /// Reads `g_uv` off the edge fibres of `Y`.
  pub fn extract_cochain(&self) -> Result<Cochain1> {
    let values = self
      .matchings()?
      .into_iter()
      .map(|m| {
        let p = Permutation::new(m)?;
        self
          .action
          .find(&p)
          .ok_or_else(|| Error::Construction(format!("matching {p} is not a group element")))
      })
      .collect::<Result<Vec<_>>>()?;
    Ok(Cochain1::from_values(values))
  }

  /// Checks the structural invariants of a member of `M(X; G, S)`.
  pub fn validate(&self) -> Result<()> {
    let t = self.t();
    if self.total.num_vertices() != self.base.num_vertices() * t {
      return Err(Error::Construction("vertex fibres have the wrong size".into()));
    }
    for k in 0..self.total.n() {
      for face in self.total.faces(k)? {
        let image = self.project_simplex(face);
        let projected = Simplex::new(image)
          .map_err(|_| Error::Construction(format!("face {face} collapses under projection")))?;
        if !self.base.contains(&projected) {
          return Err(Error::Construction(format!("face {face} does not map to a face")));
        }
      }
    }
    self.matchings().map(|_| ())
  }

  /// Whether `f` maps the star of every vertex of `Y` isomorphically onto the star below.
  pub fn is_covering(&self) -> Result<bool> {
    for y in self.total.vertices() {
      let star = self.total.star(&Simplex::vertex(y))?;
      let base_star = self.base.star(&Simplex::vertex(self.project(y)))?;
      let star_vertices: HashSet<VertexId> =
        star.iter().flat_map(|s| s.vertices().iter().copied()).collect();
      let images: HashSet<VertexId> = star_vertices.iter().map(|&v| self.project(v)).collect();
      if images.len() != star_vertices.len() || star.len() != base_star.len() {
        return Ok(false);
      }
      let mapped: HashSet<Simplex> = star
        .iter()
        .map(|s| Simplex::new(self.project_simplex(s)))
        .collect::<Result<HashSet<_>>>()?;
      if mapped.len() != star.len() || !base_star.iter().all(|s| mapped.contains(s)) {
        return Ok(false);
      }
    }
    Ok(true)
  }

  /// Deficiency `m(Y)`, computed from the definition and again from fixed-point counts
  /// of `d₁φ`; the two must agree exactly.
  pub fn deficiency_exact(&self) -> Result<DeficiencyReport> {
    let x = self.base;
    let t = self.t();
    let g = self.action;
    let space = CochainSpace::new(x, g);

    // link edges of the base covered above each vertex of Y
    let mut covered: Vec<HashSet<(VertexId, VertexId)>> =
      vec![HashSet::new(); self.total.num_vertices()];
    for tri in self.total.triangles() {
      let vs = tri.vertices();
      for i in 0..3 {
        let (a, b) = (self.project(vs[(i + 1) % 3]), self.project(vs[(i + 2) % 3]));
        covered[vs[i] as usize].insert((a.min(b), a.max(b)));
      }
    }
    let mut fibre_size = vec![0usize; x.num_vertices()];
    for y in self.total.vertices() {
      fibre_size[y as usize / t] += 1;
    }

    let mut direct = Rational::from_integer(0.into());
    let mut by_fix = Rational::from_integer(0.into());
    let mut local = Vec::with_capacity(x.num_vertices());
    for (pos, u) in x.vertices().enumerate() {
      let cu = x.weight(&Simplex::vertex(u))?;
      let link = x.link(&Simplex::vertex(u))?;
      let link_edges: Vec<(VertexId, VertexId, Rational)> = if link.n() >= 2 {
        link
          .edges()
          .iter()
          .map(|e| Ok((e.vertices()[0], e.vertices()[1], link.weight(e)?)))
          .collect::<Result<_>>()?
      } else {
        Vec::new()
      };

      let mut mus = Vec::with_capacity(t);
      let mut mu_sum = Rational::from_integer(0.into());
      for s in 0..t {
        let y = pos * t + s;
        let mu: Rational = link_edges
          .iter()
          .filter(|(a, b, _)| !covered[y].contains(&(*a, *b)))
          .map(|(_, _, w)| w.clone())
          .sum();
        mu_sum += &mu;
        mus.push(mu);
      }
      local.push(mus);
      direct += &cu * mu_sum / BigInt::from(fibre_size[pos]);

      let mut moved = Rational::from_integer(0.into());
      for (v1, v2, w) in &link_edges {
        let d = g.mul(
          g.mul(space.get(&self.cochain, u, *v1)?, space.get(&self.cochain, *v1, *v2)?),
          space.get(&self.cochain, *v2, u)?,
        );
        moved += w * BigInt::from(t - g.fix(d));
      }
      by_fix += cu * moved;
    }
    by_fix /= BigInt::from(t);

    if direct != by_fix {
      return Err(Error::Consistency(format!(
        "deficiency {direct} from the definition, {by_fix} from fix counts"
      )));
    }
    Ok(DeficiencyReport { m: direct, local, violated: self.violated_triangles() })
  }

  /// Samples triangles with probability `c(τ)` and checks their fibres.
  pub fn triangle_test(&self, samples: u64, seed: u64) -> Result<TriangleTestReport> {
    if samples == 0 {
      return Err(Error::MalformedInput("triangle test needs at least one sample".into()));
    }
    let x = self.base;
    if x.n() < 3 {
      return Err(Error::Degenerate("complex has no triangles".into()));
    }
    let violated = self.violated_triangles();
    let mut bad = vec![false; x.triangles().len()];
    for &t in &violated {
      bad[t] = true;
    }
    let exact_failure: Rational = violated
      .iter()
      .map(|&t| x.weight(&x.triangles()[t]))
      .collect::<Result<Vec<_>>>()?
      .into_iter()
      .sum();

    let facets = x.facets();
    let shards = samples.div_ceil(SHARD_SIZE);
    let failures: u64 = (0..shards)
      .into_par_iter()
      .map(|shard| {
        let mut rng = rng_from_seed(derive_seed(seed, shard));
        let count = SHARD_SIZE.min(samples - shard * SHARD_SIZE);
        let mut fails = 0u64;
        for _ in 0..count {
          let facet = &facets[rng.gen_range(0..facets.len())];
          let mut picked: Vec<VertexId> =
            sample(&mut rng, facet.len(), 3).into_iter().map(|i| facet.vertices()[i]).collect();
          picked.sort_unstable();
          let tri = x.face_index(&Simplex::new(picked).expect("distinct")).expect("face of facet");
          fails += bad[tri] as u64;
        }
        fails
      })
      .sum();
    let frequency = failures as f64 / samples as f64;
    let std_error = (frequency * (1.0 - frequency) / samples as f64).sqrt();
    Ok(TriangleTestReport { samples, failures, frequency, std_error, exact_failure, seed })
  }
}

/// Weighted fraction of base edges over which the two covers have different matchings.
pub fn cover_distance(a: &NearCover, b: &NearCover) -> Result<Rational> {
  if !(std::ptr::eq(a.base, b.base) || a.base.facets() == b.base.facets()) {
    return Err(Error::Shape("covers have different base complexes".into()));
  }
  if a.action.spec() != b.action.spec() || a.t() != b.t() || a.action.order() != b.action.order() {
    return Err(Error::Shape("covers use different actions".into()));
  }
  let space = CochainSpace::new(a.base, a.action);
  let (ma, mb) = (a.matchings()?, b.matchings()?);
  let mut count = 0u64;
  for (e, (x, y)) in ma.iter().zip(&mb).enumerate() {
    if x != y {
      count += space.edge_count(e)?;
    }
  }
  Ok(Rational::new(count.into(), space.edge_denominator()?))
}

/// Numerator of `m(Y_φ)` over `|S| · triangle_denominator`, from
/// `|S|·m = Σ_τ c(τ)(|S| − fix(d₁φ(τ)))`.
pub(crate) fn deficiency_count(space: &CochainSpace, phi: &Cochain1) -> Result<u128> {
  let g = space.group();
  let t = g.t();
  let mut total = 0u128;
  for tri in 0..space.num_triangles() {
    let moved = t - g.fix(space.d1_value(phi, tri));
    total += moved as u128 * space.triangle_count(tri)? as u128;
  }
  Ok(total)
}

/// `m(Y_φ)` from fixed-point counts of `d₁φ`, without building the lift.
pub fn deficiency_from_fix_counts(space: &CochainSpace, phi: &Cochain1) -> Result<Rational> {
  let num = deficiency_count(space, phi)?;
  Ok(Rational::new(num.into(), space.triangle_denominator()? * BigInt::from(space.group().t())))
}

/// `c(X; G, S)`: the least `m(Y_φ) / dist(Y_φ, M₀)` over non-cocycles `φ`.
///
/// The distance to the genuine covers equals the cosystolic norm of `φ`. With
/// `gauge_fixed`, only cochains trivial on a spanning forest are scanned; both the
/// deficiency and the cosystolic norm are constant on `C⁰`-orbits.
pub fn cover_stability_exact(
  x: &SimplicialComplex,
  action: &GroupAction,
  gauge_fixed: bool,
  limits: SearchLimits,
) -> Result<StabilityReport> {
  if !x.is_pure() {
    return Err(Error::NotPure);
  }
  let space = CochainSpace::new(x, action);
  space.triangle_denominator()?;
  let cocycles = space.cocycles(limits)?;
  let outcome = scan_cochains(&space, gauge_fixed, cocycles.len() as u64, limits, |phi| {
    if space.is_cocycle(phi) {
      return None;
    }
    let m = deficiency_count(&space, phi).ok()?;
    let (dist, _) = space.nearest_in(phi, &cocycles).ok()?;
    Some((m, dist as u128))
  })?;
  let best = outcome.best.ok_or_else(|| {
    Error::Degenerate("every cochain is a cocycle; stability is undefined".into())
  })?;
  let witness = Cochain1::from_values(best.values);
  let deficiency = deficiency_from_fix_counts(&space, &witness)?;
  let distance = Rational::new(BigInt::from(best.den), space.edge_denominator()?);
  Ok(StabilityReport {
    stability: &deficiency / &distance,
    witness,
    deficiency,
    distance,
    scanned: outcome.scanned,
  })
}

#[cfg(test)]
mod tests {
  use super::*;
  use crate::groups::Elem;
  use crate::ratio;

  fn tri() -> SimplicialComplex {
    SimplicialComplex::from_facets(&[[0, 1, 2]]).unwrap()
  }
  fn tet() -> SimplicialComplex {
    SimplicialComplex::from_facets(&[[0, 1, 2, 3]]).unwrap()
  }

  fn swapped(x: &SimplicialComplex, edges: &[(u32, u32)], g: Elem) -> Cochain1 {
    let mut phi = Cochain1::from_values(vec![Elem::IDENTITY; x.edges().len()]);
    for &(u, v) in edges {
      phi.set(x.edge_index(u, v).unwrap(), g);
    }
    phi
  }

  #[test]
  fn trivial_lift_is_disjoint_copies() {
    let x = tet();
    let s3 = GroupAction::symmetric(3).unwrap();
    let phi = swapped(&x, &[], Elem::IDENTITY);
    let cover = lift_complex(&x, &phi, &s3).unwrap();
    assert_eq!(cover.total().f_vector(), vec![12, 18, 12, 3]);
    assert!(cover.is_covering().unwrap());
    assert_eq!(cover.deficiency_exact().unwrap().m, ratio(0, 1));
    cover.validate().unwrap();
  }

  #[test]
  fn one_swapped_edge_gives_a_hexagon() {
    let x = tri();
    let z2 = GroupAction::symmetric(2).unwrap();
    let phi = swapped(&x, &[(0, 1)], Elem(1));
    let cover = lift_complex(&x, &phi, &z2).unwrap();
    assert_eq!(cover.total().f_vector(), vec![6, 6]);
    assert!(!cover.is_covering().unwrap());
    let report = cover.deficiency_exact().unwrap();
    assert_eq!(report.m, ratio(1, 1));
    assert_eq!(report.violated, vec![0]);
    for mus in &report.local {
      assert_eq!(mus, &vec![ratio(1, 1), ratio(1, 1)]);
    }
  }

  #[test]
  fn transposition_holonomy_on_three_sheets() {
    let x = tri();
    let s3 = GroupAction::symmetric(3).unwrap();
    let transposition = s3.elements().find(|&g| s3.fix(g) == 1).unwrap();
    let phi = swapped(&x, &[(0, 1)], transposition);
    let cover = lift_complex(&x, &phi, &s3).unwrap();
    let report = cover.deficiency_exact().unwrap();
    assert_eq!(report.m, ratio(2, 3));
    let space = CochainSpace::new(&x, &s3);
    assert_eq!(deficiency_from_fix_counts(&space, &phi).unwrap(), ratio(2, 3));
  }

  #[test]
  fn matching_orientation() {
    let x = tri();
    let s3 = GroupAction::symmetric(3).unwrap();
    let g = s3.elements().find(|&g| s3.fix(g) == 0).unwrap();
    let phi = swapped(&x, &[(0, 1)], g);
    let cover = lift_complex(&x, &phi, &s3).unwrap();
    // g_01 sends the sheet over 1 to the sheet over 0
    for s in 0..3 {
      let edge = Simplex::edge(cover.lifted_vertex(0, s3.apply(g, s)), cover.lifted_vertex(1, s));
      assert!(cover.total().contains(&edge));
    }
    assert_eq!(cover.extract_cochain().unwrap(), phi);
  }

  #[test]
  fn triangle_test_examples() {
    let z2 = GroupAction::symmetric(2).unwrap();
    let x = tri();
    let cover = lift_complex(&x, &swapped(&x, &[(0, 1)], Elem(1)), &z2).unwrap();
    let report = cover.triangle_test(500, 3).unwrap();
    assert_eq!(report.failures, 500);
    assert_eq!(report.exact_failure, ratio(1, 1));

    let x = tet();
    let genuine = lift_complex(&x, &swapped(&x, &[], Elem(0)), &z2).unwrap();
    assert_eq!(genuine.triangle_test(1000, 3).unwrap().failures, 0);
    let near = lift_complex(&x, &swapped(&x, &[(0, 1)], Elem(1)), &z2).unwrap();
    let report = near.triangle_test(10_000, 3).unwrap();
    assert_eq!(report.exact_failure, ratio(1, 2));
    assert_eq!(report, near.triangle_test(10_000, 3).unwrap());
    assert!(near.triangle_test(0, 3).is_err());
  }

  #[test]
  fn distances_between_covers() {
    let x = tet();
    let z2 = GroupAction::symmetric(2).unwrap();
    let a = lift_complex(&x, &swapped(&x, &[(0, 1)], Elem(1)), &z2).unwrap();
    let b = lift_complex(&x, &swapped(&x, &[], Elem(1)), &z2).unwrap();
    assert_eq!(cover_distance(&a, &a).unwrap(), ratio(0, 1));
    assert_eq!(cover_distance(&a, &b).unwrap(), ratio(1, 6));
    let s3 = GroupAction::symmetric(3).unwrap();
    let c = lift_complex(&x, &swapped(&x, &[], Elem(0)), &s3).unwrap();
    assert!(matches!(cover_distance(&a, &c), Err(Error::Shape(_))));
  }

  #[test]
  fn stability_of_the_triangle() {
    let x = tri();
    let z2 = GroupAction::symmetric(2).unwrap();
    let report = cover_stability_exact(&x, &z2, false, SearchLimits::default()).unwrap();
    assert_eq!(report.stability, ratio(3, 1));
    let s3 = GroupAction::symmetric(3).unwrap();
    let report = cover_stability_exact(&x, &s3, false, SearchLimits::default()).unwrap();
    assert_eq!(report.stability, ratio(2, 1));
    assert_eq!(report.scanned, 216);
    assert_eq!(report.deficiency, ratio(2, 3));
    assert_eq!(report.distance, ratio(1, 3));
  }

  #[test]
  fn gauge_fixing_preserves_stability() {
    for x in [tri(), tet()] {
      for action in [GroupAction::symmetric(3).unwrap(), GroupAction::cyclic(3).unwrap()] {
        let full = cover_stability_exact(&x, &action, false, SearchLimits::default()).unwrap();
        let fixed = cover_stability_exact(&x, &action, true, SearchLimits::default()).unwrap();
        assert_eq!(full.stability, fixed.stability);
        assert!(fixed.scanned < full.scanned);
      }
    }
  }

  #[test]
  fn non_pure_bases_are_rejected() {
    let x = SimplicialComplex::from_facets(&[vec![0, 1, 2], vec![2, 3]]).unwrap();
    let z2 = GroupAction::symmetric(2).unwrap();
    let phi = Cochain1::from_values(vec![Elem(0); x.edges().len()]);
    assert_eq!(lift_complex(&x, &phi, &z2).unwrap_err(), Error::NotPure);
    let short = Cochain1::from_values(vec![Elem(0); 2]);
    assert!(matches!(lift_complex(&tri(), &short, &z2), Err(Error::Totality(_))));
  }
}
