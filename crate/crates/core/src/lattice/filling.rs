//! The correction cochains `ψ_s` and the filling discs `Y_s(uv)`.
//!
//! For an edge `v₀ < v₁` and an order `≺_s`, put `a₀ = b(s,v₀)`, `a₁ = b(s,v₁)`,
//! `a₂ = a(s)` and `w = a₀ ∨ a₁ ∨ a₂`. The disc is the cone from `w` over the hexagon
//! `a₀, a₀∨a₁, a₁, a₁∨a₂, a₂, a₀∨a₂`, together with the fan `{a₀, a₀∨a₁, v₁}`,
//! `{a₁, a₀∨a₁, v₁}`, `{a₀, v₀, v₁}`. Its boundary is the cycle
//! `a₂, a₀∨a₂, a₀, v₀, v₁, a₁, a₁∨a₂, a₂`. Coinciding vertices are merged and triangles
//! with fewer than three distinct vertices dropped.

use std::collections::{BTreeMap, BTreeSet};

use super::ordering::{min_atom, min_atom_below, AtomOrder};
use super::{GeometricLattice, OrderComplex};
use crate::cochains::{Cochain0, Cochain1, CochainSpace};
use crate::complex::Simplex;
use crate::groups::Elem;
use crate::{Error, Result};

/// A filling disc, with vertices given as lattice elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FillingDisc {
  pub v0: usize,
  pub v1: usize,
  /// `(a₀, a₁, a₂)`.
  pub atoms: [usize; 3],
  /// `x₀, …, x₇` with `x₇ = x₀`.
  pub cycle: [usize; 8],
  /// Chains, each sorted by rank, without repeats.
  pub triangles: Vec<[usize; 3]>,
  /// Cycle steps between distinct vertices, each sorted by rank.
  pub cycle_edges: Vec<[usize; 2]>,
}

/// Builds `Y_s(v₀v₁)` for the order `order`. The endpoints may be given in either order.
pub fn filling(
  lattice: &GeometricLattice,
  order: &AtomOrder,
  u: usize,
  v: usize,
) -> Result<FillingDisc> {
  let (v0, v1) = edge_endpoints(lattice, u, v)?;
  let a0 = min_atom_below(lattice, order, v0)?;
  let a1 = min_atom_below(lattice, order, v1)?;
  let a2 = min_atom(lattice, order);
  filling_from_atoms(lattice, v0, v1, [a0, a1, a2])
}

fn edge_endpoints(lattice: &GeometricLattice, u: usize, v: usize) -> Result<(usize, usize)> {
  if u == v || !lattice.is_proper(u) || !lattice.is_proper(v) || !lattice.comparable(u, v) {
    return Err(Error::Construction(format!(
      "{} {} is not an edge of the order complex",
      lattice.label(u),
      lattice.label(v)
    )));
  }
  Ok(if lattice.leq(u, v) { (u, v) } else { (v, u) })
}

pub(crate) fn filling_from_atoms(
  lattice: &GeometricLattice,
  v0: usize,
  v1: usize,
  atoms: [usize; 3],
) -> Result<FillingDisc> {
  let [a0, a1, a2] = atoms;
  let j01 = lattice.join(a0, a1);
  let j02 = lattice.join(a0, a2);
  let j12 = lattice.join(a1, a2);
  let w = lattice.join(j01, a2);
  let listed = [
    [a1, j12, w],
    [a2, j12, w],
    [a2, j02, w],
    [a0, j02, w],
    [a0, j01, w],
    [a1, j01, w],
    [a0, j01, v1],
    [a1, j01, v1],
    [a0, v0, v1],
  ];
  let mut triangles: Vec<[usize; 3]> = Vec::with_capacity(9);
  for mut tri in listed {
    if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
      continue;
    }
    tri.sort_by_key(|&x| (lattice.rank(x), x));
    if !(lattice.leq(tri[0], tri[1]) && lattice.leq(tri[1], tri[2]))
      || !tri.iter().all(|&x| lattice.is_proper(x))
    {
      let names: Vec<&str> = tri.iter().map(|&x| lattice.label(x)).collect();
      return Err(Error::Construction(format!(
        "filling triangle {names:?} is not a chain of proper elements"
      )));
    }
    if !triangles.contains(&tri) {
      triangles.push(tri);
    }
  }
  let cycle = [a2, j02, a0, v0, v1, a1, j12, a2];
  let mut cycle_edges = Vec::with_capacity(7);
  for step in cycle.windows(2) {
    if step[0] == step[1] {
      continue;
    }
    let mut e = [step[0], step[1]];
    e.sort_by_key(|&x| (lattice.rank(x), x));
    if !cycle_edges.contains(&e) {
      cycle_edges.push(e);
    }
  }
  Ok(FillingDisc { v0, v1, atoms, cycle, triangles, cycle_edges })
}

impl FillingDisc {
  pub fn num_triangles(&self) -> usize {
    self.triangles.len()
  }

  /// Every non-degenerate cycle step is an edge of the order complex, and the cycle
  /// closes up.
  pub fn contains_cycle(&self, lattice: &GeometricLattice) -> bool {
    self.cycle[0] == self.cycle[7]
      && self
        .cycle_edges
        .iter()
        .all(|&[x, y]| x != y && lattice.is_proper(x) && lattice.is_proper(y) && lattice.leq(x, y))
  }

  /// Whether the disc (triangles, their faces, and the cycle edges) collapses to a point.
  pub fn is_collapsible(&self) -> bool {
    collapses_to_point(&self.triangles, &self.cycle_edges)
  }

  /// Product of `φ` around the cycle `x₀ → … → x₇`.
  pub fn holonomy(&self, oc: &OrderComplex, space: &CochainSpace, phi: &Cochain1) -> Result<Elem> {
    let g = space.group();
    self.cycle.windows(2).try_fold(Elem::IDENTITY, |acc, step| {
      Ok(g.mul(acc, element_phi(oc, space, phi, step[0], step[1])?))
    })
  }

  /// First disc triangle with `d₁φ ≠ 1`, if any.
  pub fn violated_triangle(
    &self,
    oc: &OrderComplex,
    space: &CochainSpace,
    phi: &Cochain1,
  ) -> Result<Option<[usize; 3]>> {
    for tri in &self.triangles {
      let simplex = Simplex::new(tri.iter().map(|&x| oc.vertex_of(x)).collect())?;
      let t = oc.complex().face_index(&simplex).ok_or_else(|| {
        Error::Consistency(format!("filling triangle {simplex} is not in the complex"))
      })?;
      if !space.d1_value(phi, t).is_identity() {
        return Ok(Some(*tri));
      }
    }
    Ok(None)
  }
}

/// `φ(x, y)` for comparable proper elements, with `φ(x, x) = 1`.
pub fn element_phi(
  oc: &OrderComplex,
  space: &CochainSpace,
  phi: &Cochain1,
  x: usize,
  y: usize,
) -> Result<Elem> {
  if x == y {
    return Ok(Elem::IDENTITY);
  }
  match (oc.vertex(x), oc.vertex(y)) {
    (Some(u), Some(v)) => space.get(phi, u, v),
    _ => Err(Error::Construction(format!("path step {x} -> {y} leaves the proper part"))),
  }
}

/// `ψ_s(u) = φ(a, a∨b)·φ(a∨b, b)·φ(b, u)` with `a = a(s)`, `b = b(s, u)`, indexed by vertex
/// position in `oc`.
pub fn psi_s(
  oc: &OrderComplex,
  lattice: &GeometricLattice,
  space: &CochainSpace,
  phi: &Cochain1,
  order: &AtomOrder,
) -> Result<Cochain0> {
  let g = space.group();
  let a = min_atom(lattice, order);
  let mut values = Vec::with_capacity(space.num_vertices());
  for v in oc.complex().vertices() {
    let u = oc.element(v);
    let b = min_atom_below(lattice, order, u)?;
    let j = lattice.join(a, b);
    let value = g.mul(
      g.mul(element_phi(oc, space, phi, a, j)?, element_phi(oc, space, phi, j, b)?),
      element_phi(oc, space, phi, b, u)?,
    );
    values.push(value);
  }
  Ok(Cochain0::from_values(values))
}

/// Greedy elementary collapses of the complex generated by `triangles` and `edges`;
/// true when a single vertex remains.
pub fn collapses_to_point<V: Copy + Ord>(triangles: &[[V; 3]], edges: &[[V; 2]]) -> bool {
  let mut tris: BTreeSet<[V; 3]> = triangles
    .iter()
    .map(|t| {
      let mut t = *t;
      t.sort();
      t
    })
    .collect();
  let mut edge_set: BTreeSet<[V; 2]> =
    edges.iter().map(|e| if e[0] <= e[1] { *e } else { [e[1], e[0]] }).collect();
  for t in &tris {
    edge_set.extend([[t[0], t[1]], [t[0], t[2]], [t[1], t[2]]]);
  }
  let mut verts: BTreeSet<V> = edge_set.iter().flat_map(|e| [e[0], e[1]]).collect();
  if verts.is_empty() {
    return false;
  }

  loop {
    // an edge in exactly one triangle is free
    let mut cofaces: BTreeMap<[V; 2], Vec<[V; 3]>> = BTreeMap::new();
    for t in &tris {
      for e in [[t[0], t[1]], [t[0], t[2]], [t[1], t[2]]] {
        cofaces.entry(e).or_default().push(*t);
      }
    }
    if let Some((e, t)) = cofaces.iter().find(|(_, ts)| ts.len() == 1).map(|(e, ts)| (*e, ts[0])) {
      tris.remove(&t);
      edge_set.remove(&e);
      continue;
    }
    // a vertex in exactly one edge, that edge in no triangle
    let mut degree: BTreeMap<V, Vec<[V; 2]>> = BTreeMap::new();
    for e in &edge_set {
      degree.entry(e[0]).or_default().push(*e);
      degree.entry(e[1]).or_default().push(*e);
    }
    let free = degree
      .iter()
      .find(|(_, es)| es.len() == 1 && !cofaces.contains_key(&es[0]))
      .map(|(v, es)| (*v, es[0]));
    match free {
      Some((v, e)) => {
        edge_set.remove(&e);
        verts.remove(&v);
      }
      None => break,
    }
  }
  tris.is_empty() && edge_set.is_empty() && verts.len() == 1
}

#[cfg(test)]
mod tests {
  use super::*;
  use crate::lattice::ordering::OrderingScheme;
  use crate::lattice::subspace_lattice;

  #[test]
  fn collapse_basics() {
    assert!(collapses_to_point(&[[0, 1, 2]], &[]));
    assert!(collapses_to_point(&[[0, 1, 2], [1, 2, 3]], &[[3, 4]]));
    // a hollow triangle and the boundary of a tetrahedron are not collapsible
    assert!(!collapses_to_point::<u32>(&[], &[[0, 1], [1, 2], [0, 2]]));
    assert!(!collapses_to_point(&[[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]], &[]));
    // two components
    assert!(!collapses_to_point(&[[0, 1, 2]], &[[5, 6]]));
  }

  #[test]
  fn generic_filling_has_nine_triangles() {
    let l = subspace_lattice(2).unwrap();
    let lat = l.lattice();
    let scheme = OrderingScheme::gl_sampled(&l, 50, 11).unwrap();
    let mut seen_nine = false;
    for order in scheme.orders() {
      for u in 0..lat.len() {
        for v in 0..lat.len() {
          if u == v || !lat.is_proper(u) || !lat.is_proper(v) || !lat.leq(u, v) {
            continue;
          }
          let disc = filling(lat, order, u, v).unwrap();
          assert!(disc.num_triangles() <= 9);
          assert!(disc.contains_cycle(lat));
          assert!(disc.is_collapsible(), "{disc:?}");
          seen_nine |= disc.num_triangles() == 9;
        }
      }
    }
    assert!(seen_nine);
  }

  #[test]
  fn non_edges_are_rejected() {
    let l = subspace_lattice(2).unwrap();
    let lat = l.lattice();
    let order = AtomOrder::base(15);
    let [a, b] = [lat.atoms()[0], lat.atoms()[1]];
    assert!(matches!(filling(lat, &order, a, b), Err(Error::Construction(_))));
    assert!(filling(lat, &order, a, lat.top()).is_err());
  }
}
