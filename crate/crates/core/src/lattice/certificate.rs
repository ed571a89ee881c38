//! The `δ` statistics, the certificate `h₁ ≥ 1/γ`, and the decoder built from `ψ_s`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use super::filling::{filling_from_atoms, psi_s, FillingDisc};
use super::ordering::{min_atom, min_atom_below, AtomOrder, OrderingScheme};
use super::{GeometricLattice, OrderComplex};
use crate::cochains::{Cochain1, CochainSpace};
use crate::{Error, Rational, Result};

/// Edges of the order complex as `(edge index, v₀, v₁)` with `v₀ < v₁` in the lattice.
fn oriented_edges(oc: &OrderComplex, lattice: &GeometricLattice) -> Vec<(usize, usize, usize)> {
  oc.complex()
    .edges()
    .iter()
    .enumerate()
    .map(|(i, e)| {
      let (x, y) = (oc.element(e.vertices()[0]), oc.element(e.vertices()[1]));
      if lattice.leq(x, y) {
        (i, x, y)
      } else {
        (i, y, x)
      }
    })
    .collect()
}

struct Fillings<'a> {
  oc: &'a OrderComplex,
  lattice: &'a GeometricLattice,
  edges: Vec<(usize, usize, usize)>,
  triangle_of: HashMap<[usize; 3], usize>,
}

impl<'a> Fillings<'a> {
  fn new(oc: &'a OrderComplex, lattice: &'a GeometricLattice) -> Self {
    let triangle_of = oc
      .complex()
      .triangles()
      .iter()
      .enumerate()
      .map(|(i, t)| {
        let mut key: [usize; 3] = std::array::from_fn(|k| oc.element(t.vertices()[k]));
        key.sort_by_key(|&x| (lattice.rank(x), x));
        (key, i)
      })
      .collect();
    Self { oc, lattice, edges: oriented_edges(oc, lattice), triangle_of }
  }

  /// All discs for one order, with `b(s, ·)` computed once.
  fn for_order(&self, order: &AtomOrder) -> Result<Vec<(usize, FillingDisc)>> {
    let a2 = min_atom(self.lattice, order);
    let mut b = vec![usize::MAX; self.lattice.len()];
    for v in self.oc.complex().vertices() {
      let u = self.oc.element(v);
      b[u] = min_atom_below(self.lattice, order, u)?;
    }
    self
      .edges
      .iter()
      .map(|&(e, v0, v1)| Ok((e, filling_from_atoms(self.lattice, v0, v1, [b[v0], b[v1], a2])?)))
      .collect()
  }

  fn triangle_index(&self, tri: &[usize; 3]) -> Result<usize> {
    self
      .triangle_of
      .get(tri)
      .copied()
      .ok_or_else(|| Error::Consistency(format!("filling triangle {tri:?} is not in the complex")))
  }
}

/// Counts `c(uv)·D₁` and `c(τ)·D₂` as integers with their common denominators.
struct Counts {
  edge: Vec<u64>,
  triangle: Vec<u64>,
  d1: BigInt,
  d2: BigInt,
}

impl Counts {
  fn new(space: &CochainSpace) -> Result<Self> {
    let edge = (0..space.num_edges()).map(|e| space.edge_count(e)).collect::<Result<_>>()?;
    let triangle =
      (0..space.num_triangles()).map(|t| space.triangle_count(t)).collect::<Result<_>>()?;
    Ok(Self { edge, triangle, d1: space.edge_denominator()?, d2: space.triangle_denominator()? })
  }

  /// `(Σ μ-weighted c(uv)·D₁) / D₁ ÷ (c(τ)·D₂ / D₂)`.
  fn delta(&self, weighted_edge_mass: &Rational, t: usize) -> Rational {
    weighted_edge_mass
      * Rational::new(self.d2.clone(), self.d1.clone() * BigInt::from(self.triangle[t]))
  }
}

/// `δ_s(τ)` for every order of the scheme, and its `μ`-mean `δ(τ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaReport {
  pub triangle: usize,
  pub per_order: Vec<Rational>,
  pub mean: Rational,
}

pub fn delta(
  oc: &OrderComplex,
  lattice: &GeometricLattice,
  space: &CochainSpace,
  scheme: &OrderingScheme,
  triangle: usize,
) -> Result<DeltaReport> {
  if triangle >= space.num_triangles() {
    return Err(Error::NotAFace(format!("triangle index {triangle}")));
  }
  let fillings = Fillings::new(oc, lattice);
  let counts = Counts::new(space)?;
  let per_order: Vec<Rational> = scheme
    .orders()
    .par_iter()
    .map(|order| {
      let mut mass = 0u64;
      for (e, disc) in fillings.for_order(order)? {
        for tri in &disc.triangles {
          if fillings.triangle_index(tri)? == triangle {
            mass += counts.edge[e];
          }
        }
      }
      Ok(counts.delta(&Rational::from_integer(mass.into()), triangle))
    })
    .collect::<Result<_>>()?;
  let mean = per_order.iter().enumerate().map(|(s, d)| d * scheme.weight(s)).sum();
  Ok(DeltaReport { triangle, per_order, mean })
}

/// `γ = max_τ δ(τ)` and the bound `h₁ ≥ 1/γ`, with the statistics used to cross-check it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaCertificate {
  pub gamma: Rational,
  /// `1/γ`; `None` when `γ = 0`.
  pub lower_bound: Option<Rational>,
  /// `δ(τ)` for every triangle.
  pub delta: Vec<Rational>,
  pub argmax: usize,
  /// Whether `δ` takes a single value on all triangles.
  pub constant: bool,
  pub orders: usize,
  pub fillings: u64,
  pub max_disc_triangles: usize,
  /// `E_s[Σ_uv f₂(Y_s(uv))]`.
  pub disc_triangle_mean: Rational,
  /// `Σ_τ c(τ) δ(τ)`.
  pub delta_mass: Rational,
  /// `E_s[Σ_uv c(uv) f₂(Y_s(uv))]`; equals `delta_mass`.
  pub disc_mass: Rational,
  /// Number of discs checked for the cycle and collapsibility (all of them, or 0).
  pub discs_verified: u64,
}

#[derive(Clone, Copy, Debug)]
pub struct GammaOptions {
  /// Check every disc for the boundary cycle and collapsibility.
  pub verify_discs: bool,
}

impl Default for GammaOptions {
  fn default() -> Self {
    Self { verify_discs: true }
  }
}

#[derive(Clone, Default)]
struct Tally {
  /// `Σ_s w_s Σ_{uv: τ ∈ Y_s(uv)} c(uv)·D₁` per triangle; integer weights when uniform.
  mass: Vec<u64>,
  mass_weighted: Vec<Rational>,
  discs: u64,
  verified: u64,
  max_triangles: usize,
  /// `Σ_s w_s Σ_uv f₂` and `Σ_s w_s Σ_uv c(uv)·D₁·f₂`.
  sizes: u64,
  sizes_weighted: Rational,
  edge_sizes: u64,
  edge_sizes_weighted: Rational,
}

impl Tally {
  fn merge(mut self, other: Tally) -> Tally {
    if self.mass.is_empty() {
      return other;
    }
    if other.mass.is_empty() {
      return self;
    }
    for (a, b) in self.mass.iter_mut().zip(other.mass) {
      *a += b;
    }
    for (a, b) in self.mass_weighted.iter_mut().zip(other.mass_weighted) {
      *a += b;
    }
    self.discs += other.discs;
    self.verified += other.verified;
    self.max_triangles = self.max_triangles.max(other.max_triangles);
    self.sizes += other.sizes;
    self.sizes_weighted += other.sizes_weighted;
    self.edge_sizes += other.edge_sizes;
    self.edge_sizes_weighted += other.edge_sizes_weighted;
    self
  }
}

pub fn gamma_certificate(
  oc: &OrderComplex,
  lattice: &GeometricLattice,
  space: &CochainSpace,
  scheme: &OrderingScheme,
  options: GammaOptions,
) -> Result<GammaCertificate> {
  let fillings = Fillings::new(oc, lattice);
  let counts = Counts::new(space)?;
  let nt = space.num_triangles();
  let uniform = scheme.is_uniform();

  let tally = (0..scheme.len())
    .into_par_iter()
    .map(|s| -> Result<Tally> {
      let mut local = vec![0u64; nt];
      let mut t = Tally::default();
      let (mut sizes, mut edge_sizes) = (0u64, 0u64);
      for (e, disc) in fillings.for_order(scheme.order(s))? {
        if options.verify_discs {
          if !disc.contains_cycle(lattice) || !disc.is_collapsible() {
            return Err(Error::Consistency(format!(
              "filling disc for order {s}, edge {e} is not a collapsible disc"
            )));
          }
          t.verified += 1;
        }
        for tri in &disc.triangles {
          local[fillings.triangle_index(tri)?] += counts.edge[e];
        }
        t.discs += 1;
        t.max_triangles = t.max_triangles.max(disc.num_triangles());
        sizes += disc.num_triangles() as u64;
        edge_sizes += counts.edge[e] * disc.num_triangles() as u64;
      }
      if uniform {
        t.mass = local;
        t.sizes = sizes;
        t.edge_sizes = edge_sizes;
        t.mass_weighted = vec![Rational::zero(); nt];
      } else {
        let w = scheme.weight(s);
        t.mass_weighted = local.iter().map(|&m| &w * Rational::from_integer(m.into())).collect();
        t.mass = vec![0; nt];
        t.sizes_weighted = &w * Rational::from_integer(sizes.into());
        t.edge_sizes_weighted = &w * Rational::from_integer(edge_sizes.into());
      }
      Ok(t)
    })
    .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;

  let n = Rational::from_integer(scheme.len().into());
  let (mass, sizes, edge_sizes): (Vec<Rational>, Rational, Rational) = if uniform {
    (
      tally.mass.iter().map(|&m| Rational::from_integer(m.into()) / &n).collect(),
      Rational::from_integer(tally.sizes.into()) / &n,
      Rational::from_integer(tally.edge_sizes.into()) / &n,
    )
  } else {
    (tally.mass_weighted, tally.sizes_weighted, tally.edge_sizes_weighted)
  };
  let delta: Vec<Rational> = (0..nt).map(|t| counts.delta(&mass[t], t)).collect();
  let argmax = (0..nt).rev().max_by(|&a, &b| delta[a].cmp(&delta[b])).unwrap_or(0);
  let gamma = delta.get(argmax).cloned().unwrap_or_else(Rational::zero);
  let lower_bound = (!gamma.is_zero()).then(|| gamma.recip());
  let delta_mass = (0..nt)
    .map(|t| &delta[t] * Rational::new(BigInt::from(counts.triangle[t]), counts.d2.clone()))
    .sum();
  let disc_mass = edge_sizes / Rational::from_integer(counts.d1.clone());
  Ok(GammaCertificate {
    constant: delta.iter().all(|d| *d == gamma),
    gamma,
    lower_bound,
    delta,
    argmax,
    orders: scheme.len(),
    fillings: tally.discs,
    max_disc_triangles: tally.max_triangles,
    disc_triangle_mean: sizes,
    delta_mass,
    disc_mass,
    discs_verified: tally.verified,
  })
}

/// Outcome of decoding `φ` to the coboundary `d₀(ψ_s⁻¹)` of the best sampled order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeReport {
  pub candidate: Cochain1,
  /// `dist(φ, candidate) = ‖(ψ_s).φ‖` for the chosen `s`.
  pub distance: Rational,
  pub best_order: usize,
  /// `Σ_s μ(s) ‖(ψ_s).φ‖`.
  pub mean_distance: Rational,
  pub d1_norm: Rational,
  /// Edges on which the cycle holonomy and the disc were checked.
  pub edge_checks: u64,
}

#[derive(Clone, Copy, Debug)]
pub struct DecodeOptions {
  /// For every order and edge, check `(ψ_s).φ(v₀,v₁)` against the cycle holonomy and,
  /// when it is not 1, that some disc triangle is violated.
  pub check_discs: bool,
}

impl Default for DecodeOptions {
  fn default() -> Self {
    Self { check_discs: true }
  }
}

pub fn decode(
  oc: &OrderComplex,
  lattice: &GeometricLattice,
  space: &CochainSpace,
  phi: &Cochain1,
  scheme: &OrderingScheme,
  options: DecodeOptions,
) -> Result<DecodeReport> {
  let fillings = Fillings::new(oc, lattice);
  let g = space.group();
  let per_order: Vec<(u64, Cochain1, u64)> = scheme
    .orders()
    .par_iter()
    .map(|order| {
      let psi = psi_s(oc, lattice, space, phi, order)?;
      let corrected = space.act(&psi, phi);
      let mut checks = 0u64;
      if options.check_discs {
        for (e, disc) in fillings.for_order(order)? {
          // stored orientation is the smaller vertex id first; the cycle runs v₀ → v₁
          let u = oc.complex().edges()[e].vertices()[0];
          let stored = corrected.value(e);
          let forward = if oc.element(u) == disc.v0 { stored } else { g.inv(stored) };
          if forward != disc.holonomy(oc, space, phi)? {
            return Err(Error::Consistency(format!(
              "edge {e}: corrected value differs from the cycle holonomy"
            )));
          }
          if !forward.is_identity() && disc.violated_triangle(oc, space, phi)?.is_none() {
            return Err(Error::Consistency(format!(
              "edge {e}: nontrivial holonomy on a disc with d1 = 1"
            )));
          }
          checks += 1;
        }
      }
      let candidate = space.d0(&space.inv0(&psi));
      Ok((space.norm_count(&corrected)?, candidate, checks))
    })
    .collect::<Result<_>>()?;

  let d1 = Rational::from_integer(space.edge_denominator()?);
  let best_order = (0..per_order.len()).min_by_key(|&s| per_order[s].0).expect("nonempty scheme");
  let mean_distance: Rational = per_order
    .iter()
    .enumerate()
    .map(|(s, p)| scheme.weight(s) * Rational::from_integer(p.0.into()))
    .sum::<Rational>()
    / &d1;
  Ok(DecodeReport {
    distance: Rational::from_integer(per_order[best_order].0.into()) / &d1,
    candidate: per_order[best_order].1.clone(),
    best_order,
    mean_distance,
    d1_norm: space.d1_norm(phi)?,
    edge_checks: per_order.iter().map(|p| p.2).sum(),
  })
}

/// The chain `E_s‖(ψ_s).φ‖ ≤ Σ_{τ ∈ supp d₁φ} c(τ)δ(τ) ≤ γ‖d₁φ‖`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundChain {
  pub mean_distance: Rational,
  pub support_mass: Rational,
  pub gamma_bound: Rational,
  pub holds: bool,
}

pub fn bound_chain(
  space: &CochainSpace,
  phi: &Cochain1,
  report: &DecodeReport,
  certificate: &GammaCertificate,
) -> Result<BoundChain> {
  let d2 = Rational::from_integer(space.triangle_denominator()?);
  let mut support_mass = Rational::zero();
  for t in space.d1(phi).violated {
    support_mass +=
      &certificate.delta[t] * Rational::from_integer(space.triangle_count(t)?.into()) / &d2;
  }
  let gamma_bound = &certificate.gamma * &report.d1_norm;
  Ok(BoundChain {
    holds: report.mean_distance <= support_mass && support_mass <= gamma_bound,
    mean_distance: report.mean_distance.clone(),
    support_mass,
    gamma_bound,
  })
}

#[cfg(test)]
mod tests {
  use super::*;
  use crate::groups::GroupAction;
  use crate::lattice::{order_complex, subspace_lattice};

  #[test]
  fn sampled_certificate_on_a3_f2() {
    let l = subspace_lattice(2).unwrap();
    let oc = order_complex(l.lattice()).unwrap();
    let z2 = GroupAction::cyclic(2).unwrap();
    let space = CochainSpace::new(oc.complex(), &z2);
    let scheme = OrderingScheme::gl_sampled(&l, 40, 5).unwrap();
    let cert =
      gamma_certificate(&oc, l.lattice(), &space, &scheme, GammaOptions::default()).unwrap();
    assert_eq!(cert.fillings, 40 * 315);
    assert_eq!(cert.discs_verified, 40 * 315);
    assert!(cert.max_disc_triangles <= 9);
    assert_eq!(cert.delta_mass, cert.disc_mass);
    // c(uv)/c(τ) = 1 here, so Σ_τ δ(τ) is the mean total disc size
    let total: Rational = cert.delta.iter().sum();
    assert_eq!(total, cert.disc_triangle_mean);
    let one = delta(&oc, l.lattice(), &space, &scheme, cert.argmax).unwrap();
    assert_eq!(one.mean, cert.gamma);
  }

  #[test]
  fn trivial_cochain_decodes_to_itself() {
    let l = subspace_lattice(2).unwrap();
    let oc = order_complex(l.lattice()).unwrap();
    let z2 = GroupAction::cyclic(2).unwrap();
    let space = CochainSpace::new(oc.complex(), &z2);
    let scheme = OrderingScheme::gl_sampled(&l, 3, 1).unwrap();
    let phi = space.trivial1();
    let r = decode(&oc, l.lattice(), &space, &phi, &scheme, DecodeOptions::default()).unwrap();
    assert_eq!(r.candidate, phi);
    assert!(r.distance.is_zero());
    assert_eq!(r.edge_checks, 3 * 315);
  }
}
