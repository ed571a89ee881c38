//! Group-valued 0- and 1-cochains on a simplicial complex.
//!
//! A [`Cochain1`] stores one group element per unordered edge `{u < v}`, read as
//! `φ(u, v)`; the reverse orientation is the inverse, so antisymmetry holds by
//! construction. All operations go through a [`CochainSpace`], which fixes the complex
//! and the coefficient group and precomputes the edge/triangle incidences.

use std::collections::VecDeque;

use num_bigint::BigInt;

use crate::complex::{SimplicialComplex, VertexId};
use crate::groups::{Elem, GroupAction};
use crate::search::{checked_pow, decode_index, SearchLimits};
use crate::{Error, Rational, Result};

/// A function `X(0) → G`, indexed by vertex position in `X(0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cochain0 {
  values: Vec<Elem>,
}

impl Cochain0 {
  pub fn from_values(values: Vec<Elem>) -> Self {
    Self { values }
  }

  pub fn values(&self) -> &[Elem] {
    &self.values
  }

  pub fn get(&self, vertex_pos: usize) -> Elem {
    self.values[vertex_pos]
  }

  pub fn set(&mut self, vertex_pos: usize, g: Elem) {
    self.values[vertex_pos] = g;
  }
}

/// An antisymmetric edge labelling, indexed by edge position in `X(1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cochain1 {
  values: Vec<Elem>,
}

impl Cochain1 {
  pub fn from_values(values: Vec<Elem>) -> Self {
    Self { values }
  }

  /// Value `φ(u, v)` for the stored orientation `u < v` of edge `e`.
  pub fn value(&self, e: usize) -> Elem {
    self.values[e]
  }

  pub fn values(&self) -> &[Elem] {
    &self.values
  }

  pub fn set(&mut self, e: usize, g: Elem) {
    self.values[e] = g;
  }

  pub fn len(&self) -> usize {
    self.values.len()
  }

  pub fn is_empty(&self) -> bool {
    self.values.is_empty()
  }
}

/// Values of `d₁φ` on every triangle, evaluated on the sorted vertex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleValues {
  pub values: Vec<Elem>,
  /// Triangle indices with `d₁φ ≠ 1`.
  pub violated: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CochainNorms {
  pub norm: Rational,
  pub d1_norm: Rational,
  pub support: Vec<usize>,
  pub d1_support: Vec<usize>,
}

/// Where `cosystolic_norm_exact` looks for cocycles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CocycleSource {
  /// Depth-first search over `Z¹` with triangle propagation.
  Search,
  /// The caller asserts `X` is simply connected, so `Z¹` is the set of coboundaries.
  Coboundaries,
}

/// A complex and a coefficient group, with incidence data for cochain calculus.
#[derive(Clone, Debug)]
pub struct CochainSpace<'a> {
  complex: &'a SimplicialComplex,
  group: &'a GroupAction,
  /// Vertex positions of each edge `(u, v)` with `u < v`.
  edge_ends: Vec<(usize, usize)>,
  /// Edge positions `(ab, bc, ac)` of each triangle `a < b < c`.
  triangle_edges: Vec<[usize; 3]>,
  edge_counts: Option<Vec<u64>>,
  triangle_counts: Option<Vec<u64>>,
}

impl<'a> CochainSpace<'a> {
  pub fn new(complex: &'a SimplicialComplex, group: &'a GroupAction) -> Self {
    let edge_ends = complex
      .edges()
      .iter()
      .map(|e| {
        let v = e.vertices();
        (complex.vertex_index(v[0]).unwrap(), complex.vertex_index(v[1]).unwrap())
      })
      .collect();
    let triangle_edges = complex
      .triangles()
      .iter()
      .map(|t| {
        let v = t.vertices();
        [
          complex.edge_index(v[0], v[1]).unwrap(),
          complex.edge_index(v[1], v[2]).unwrap(),
          complex.edge_index(v[0], v[2]).unwrap(),
        ]
      })
      .collect();
    let counts = |k: usize| {
      (complex.is_pure() && complex.n() > k)
        .then(|| (0..complex.faces_or_empty(k).len()).map(|i| complex.facet_count(k, i)).collect())
    };
    Self {
      complex,
      group,
      edge_ends,
      triangle_edges,
      edge_counts: counts(1),
      triangle_counts: counts(2),
    }
  }

  pub fn complex(&self) -> &'a SimplicialComplex {
    self.complex
  }

  pub fn group(&self) -> &'a GroupAction {
    self.group
  }

  pub fn num_edges(&self) -> usize {
    self.edge_ends.len()
  }

  pub fn num_vertices(&self) -> usize {
    self.complex.num_vertices()
  }

  pub fn num_triangles(&self) -> usize {
    self.triangle_edges.len()
  }

  pub fn edge_ends(&self, e: usize) -> (usize, usize) {
    self.edge_ends[e]
  }

  pub fn triangle_edges(&self, t: usize) -> [usize; 3] {
    self.triangle_edges[t]
  }

  pub fn trivial0(&self) -> Cochain0 {
    Cochain0::from_values(vec![Elem::IDENTITY; self.num_vertices()])
  }

  pub fn trivial1(&self) -> Cochain1 {
    Cochain1::from_values(vec![Elem::IDENTITY; self.num_edges()])
  }

  /// Wraps raw edge values, checking totality and membership in the group.
  pub fn cochain1(&self, values: Vec<Elem>) -> Result<Cochain1> {
    if values.len() != self.num_edges() {
      return Err(Error::Totality(format!(
        "{} values for {} edges",
        values.len(),
        self.num_edges()
      )));
    }
    if let Some(g) = values.iter().find(|g| g.index() >= self.group.order()) {
      return Err(Error::MalformedInput(format!("element {} not in group", g.0)));
    }
    Ok(Cochain1::from_values(values))
  }

  pub fn cochain0(&self, values: Vec<Elem>) -> Result<Cochain0> {
    if values.len() != self.num_vertices() {
      return Err(Error::Totality(format!(
        "{} values for {} vertices",
        values.len(),
        self.num_vertices()
      )));
    }
    if let Some(g) = values.iter().find(|g| g.index() >= self.group.order()) {
      return Err(Error::MalformedInput(format!("element {} not in group", g.0)));
    }
    Ok(Cochain0::from_values(values))
  }

  fn check1(&self, phi: &Cochain1) -> Result<()> {
    if phi.len() != self.num_edges() {
      return Err(Error::Shape(format!(
        "cochain has {} edges, complex has {}",
        phi.len(),
        self.num_edges()
      )));
    }
    Ok(())
  }

  /// `φ(u, v)` on an ordered pair of vertex ids.
  pub fn get(&self, phi: &Cochain1, u: VertexId, v: VertexId) -> Result<Elem> {
    let e = self
      .complex
      .edge_index(u, v)
      .ok_or_else(|| Error::Path(format!("{}-{}", self.complex.label(u), self.complex.label(v))))?;
    Ok(if u < v { phi.value(e) } else { self.group.inv(phi.value(e)) })
  }

  /// `d₀ψ(u, v) = ψ(u)ψ(v)⁻¹`.
  pub fn d0(&self, psi: &Cochain0) -> Cochain1 {
    let g = self.group;
    Cochain1::from_values(
      self.edge_ends.iter().map(|&(u, v)| g.mul(psi.get(u), g.inv(psi.get(v)))).collect(),
    )
  }

  /// `d₁φ(a, b, c) = φ(a, b)φ(b, c)φ(c, a)` for triangle `t` with `a < b < c`.
  pub fn d1_value(&self, phi: &Cochain1, t: usize) -> Elem {
    self.d1_raw(&phi.values, t)
  }

  fn d1_raw(&self, values: &[Elem], t: usize) -> Elem {
    let g = self.group;
    let [ab, bc, ac] = self.triangle_edges[t];
    g.mul(g.mul(values[ab], values[bc]), g.inv(values[ac]))
  }

  pub fn d1(&self, phi: &Cochain1) -> TriangleValues {
    let values: Vec<Elem> = (0..self.num_triangles()).map(|t| self.d1_value(phi, t)).collect();
    let violated =
      values.iter().enumerate().filter(|(_, g)| !g.is_identity()).map(|(i, _)| i).collect();
    TriangleValues { values, violated }
  }

  pub fn is_cocycle(&self, phi: &Cochain1) -> bool {
    (0..self.num_triangles()).all(|t| self.d1_value(phi, t).is_identity())
  }

  /// `(ψ.φ)(u, v) = ψ(u)φ(u, v)ψ(v)⁻¹`.
  pub fn act(&self, psi: &Cochain0, phi: &Cochain1) -> Cochain1 {
    let g = self.group;
    Cochain1::from_values(
      self
        .edge_ends
        .iter()
        .enumerate()
        .map(|(e, &(u, v))| g.mul(g.mul(psi.get(u), phi.value(e)), g.inv(psi.get(v))))
        .collect(),
    )
  }

  /// Pointwise product `(ψ₂ψ₁)(v) = ψ₂(v)ψ₁(v)`.
  pub fn mul0(&self, a: &Cochain0, b: &Cochain0) -> Cochain0 {
    Cochain0::from_values(
      a.values.iter().zip(&b.values).map(|(x, y)| self.group.mul(*x, *y)).collect(),
    )
  }

  /// Pointwise inverse.
  pub fn inv0(&self, a: &Cochain0) -> Cochain0 {
    Cochain0::from_values(a.values.iter().map(|x| self.group.inv(*x)).collect())
  }

  fn edge_counts(&self) -> Result<&[u64]> {
    self.edge_counts.as_deref().ok_or(Error::NotPure)
  }

  fn triangle_counts(&self) -> Result<&[u64]> {
    self.triangle_counts.as_deref().ok_or(Error::NotPure)
  }

  /// Facet-count numerator of `c(e)`; the denominator is `edge_denominator`.
  pub fn edge_count(&self, e: usize) -> Result<u64> {
    Ok(self.edge_counts()?[e])
  }

  pub fn triangle_count(&self, t: usize) -> Result<u64> {
    Ok(self.triangle_counts()?[t])
  }

  pub fn edge_denominator(&self) -> Result<BigInt> {
    self.complex.weight_denominator(1)
  }

  pub fn triangle_denominator(&self) -> Result<BigInt> {
    if self.triangle_counts.is_none() {
      return Err(if self.complex.is_pure() {
        Error::Degenerate("complex has no triangles".into())
      } else {
        Error::NotPure
      });
    }
    self.complex.weight_denominator(2)
  }

  /// Numerator of `‖φ‖` over `edge_denominator`.
  pub fn norm_count(&self, phi: &Cochain1) -> Result<u64> {
    let w = self.edge_counts()?;
    Ok(phi.values.iter().zip(w).filter(|(g, _)| !g.is_identity()).map(|(_, c)| c).sum())
  }

  /// Numerator of `dist(φ, ψ)` over `edge_denominator`.
  pub fn dist_count(&self, a: &Cochain1, b: &Cochain1) -> Result<u64> {
    self.check1(a)?;
    self.check1(b)?;
    let w = self.edge_counts()?;
    Ok(a.values.iter().zip(&b.values).zip(w).filter(|((x, y), _)| x != y).map(|(_, c)| c).sum())
  }

  /// Numerator of `‖d₁φ‖` over `triangle_denominator`.
  pub fn d1_norm_count(&self, phi: &Cochain1) -> Result<u64> {
    let w = self.triangle_counts()?;
    Ok(
      (0..self.num_triangles())
        .filter(|&t| !self.d1_value(phi, t).is_identity())
        .map(|t| w[t])
        .sum(),
    )
  }

  pub fn norm(&self, phi: &Cochain1) -> Result<Rational> {
    self.check1(phi)?;
    Ok(Rational::new(self.norm_count(phi)?.into(), self.edge_denominator()?))
  }

  /// `dist(φ, ψ) = ‖φψ⁻¹‖`: weight of the edges where the two cochains differ.
  pub fn dist(&self, a: &Cochain1, b: &Cochain1) -> Result<Rational> {
    Ok(Rational::new(self.dist_count(a, b)?.into(), self.edge_denominator()?))
  }

  pub fn d1_norm(&self, phi: &Cochain1) -> Result<Rational> {
    self.check1(phi)?;
    Ok(Rational::new(self.d1_norm_count(phi)?.into(), self.triangle_denominator()?))
  }

  pub fn norms(&self, phi: &Cochain1) -> Result<CochainNorms> {
    let support =
      phi.values.iter().enumerate().filter(|(_, g)| !g.is_identity()).map(|(i, _)| i).collect();
    Ok(CochainNorms {
      norm: self.norm(phi)?,
      d1_norm: self.d1_norm(phi)?,
      support,
      d1_support: self.d1(phi).violated,
    })
  }

  /// Ordered product of `φ` along a closed vertex path `v₀, .., v_m = v₀`.
  pub fn holonomy(&self, phi: &Cochain1, path: &[VertexId]) -> Result<Elem> {
    if path.len() < 2 || path.first() != path.last() {
      return Err(Error::Path("path is not closed".into()));
    }
    let mut acc = Elem::IDENTITY;
    for w in path.windows(2) {
      acc = self.group.mul(acc, self.get(phi, w[0], w[1])?);
    }
    Ok(acc)
  }

  /// `(neighbour, edge)` lists per vertex position.
  fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
    let mut adjacency = vec![Vec::new(); self.num_vertices()];
    for (e, &(u, v)) in self.edge_ends.iter().enumerate() {
      adjacency[u].push((v, e));
      adjacency[v].push((u, e));
    }
    adjacency
  }

  /// Edge order that closes triangles early: breadth-first over vertices, adding the
  /// edges from each new vertex back to the already visited ones.
  fn propagation_order(&self) -> Vec<usize> {
    let nv = self.num_vertices();
    let adjacency = self.adjacency();
    let mut visited = vec![false; nv];
    let mut placed = vec![false; self.num_edges()];
    let mut order = Vec::with_capacity(self.num_edges());
    for root in 0..nv {
      if visited[root] {
        continue;
      }
      visited[root] = true;
      let mut queue = VecDeque::from([root]);
      while let Some(u) = queue.pop_front() {
        for &(w, _) in &adjacency[u] {
          if !visited[w] {
            visited[w] = true;
            queue.push_back(w);
            for &(x, e) in &adjacency[w] {
              if visited[x] && !placed[e] {
                placed[e] = true;
                order.push(e);
              }
            }
          }
        }
      }
    }
    order
  }

  /// Every 1-cocycle, in lexicographic order of edge values.
  pub fn cocycles(&self, limits: SearchLimits) -> Result<Vec<Cochain1>> {
    let order = self.propagation_order();
    let mut position = vec![0usize; self.num_edges()];
    for (i, &e) in order.iter().enumerate() {
      position[e] = i;
    }
    // triangles that become fully assigned when the edge at each position is set
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); order.len()];
    for (t, edges) in self.triangle_edges.iter().enumerate() {
      let last = edges.iter().map(|&e| position[e]).max().unwrap();
      closing[last].push(t);
    }

    let g = self.group;
    let mut values = vec![Elem::IDENTITY; self.num_edges()];
    let mut out = Vec::new();
    let mut visits: u64 = 0;
    let mut stack: Vec<(usize, u32)> = vec![(0, 0)];
    // iterative depth-first search; each frame is (depth, next element to try)
    while let Some((depth, next)) = stack.pop() {
      if depth == order.len() {
        out.push(Cochain1::from_values(values.clone()));
        continue;
      }
      if next as usize >= g.order() {
        continue;
      }
      visits += 1;
      if visits > limits.max_enum {
        return Err(Error::capacity(
          "cocycle enumeration",
          format!("more than {}", limits.max_enum),
          limits.max_enum,
        ));
      }
      let e = order[depth];
      let forced = closing[depth].first().map(|&t| self.forced_value(&values, t, e));
      let candidate = match forced {
        Some(_) if next > 0 => continue,
        Some(f) => f,
        None => Elem(next),
      };
      if forced.is_none() {
        stack.push((depth, next + 1));
      }
      values[e] = candidate;
      if closing[depth].iter().all(|&t| self.d1_raw(&values, t).is_identity()) {
        stack.push((depth + 1, 0));
      }
    }
    out.sort_unstable();
    Ok(out)
  }

  /// The value of edge `e` that makes `d₁φ(t) = 1`, given the other two edges of `t`.
  fn forced_value(&self, values: &[Elem], t: usize, e: usize) -> Elem {
    let g = self.group;
    let [ab, bc, ac] = self.triangle_edges[t];
    // φ(ab)·φ(bc) = φ(ac)
    if e == ac {
      g.mul(values[ab], values[bc])
    } else if e == ab {
      g.mul(values[ac], g.inv(values[bc]))
    } else {
      g.mul(g.inv(values[ab]), values[ac])
    }
  }

  /// Edges of a breadth-first spanning forest of the 1-skeleton.
  pub fn spanning_forest(&self) -> Vec<usize> {
    let nv = self.num_vertices();
    let adjacency = self.adjacency();
    let mut visited = vec![false; nv];
    let mut tree = Vec::new();
    for root in 0..nv {
      if visited[root] {
        continue;
      }
      visited[root] = true;
      let mut queue = VecDeque::from([root]);
      while let Some(u) = queue.pop_front() {
        for &(w, e) in &adjacency[u] {
          if !visited[w] {
            visited[w] = true;
            tree.push(e);
            queue.push_back(w);
          }
        }
      }
    }
    tree.sort_unstable();
    tree
  }

  /// One vertex per connected component of the 1-skeleton (its smallest position).
  pub fn component_roots(&self) -> Vec<usize> {
    let nv = self.num_vertices();
    let mut parent: Vec<usize> = (0..nv).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
      let mut r = x;
      while p[r] != r {
        r = p[r];
      }
      let mut y = x;
      while p[y] != r {
        let next = p[y];
        p[y] = r;
        y = next;
      }
      r
    }
    for &(u, v) in &self.edge_ends {
      let (a, b) = (find(&mut parent, u), find(&mut parent, v));
      if a != b {
        parent[a.max(b)] = a.min(b);
      }
    }
    (0..nv).filter(|&v| find(&mut parent, v) == v).collect()
  }

  /// `d₀ψ` for every `ψ` pinned to the identity on one root per component.
  pub fn coboundaries(&self, limits: SearchLimits) -> Result<Vec<Cochain1>> {
    let roots = self.component_roots();
    let free: Vec<usize> = (0..self.num_vertices()).filter(|v| !roots.contains(v)).collect();
    let base = self.group.order() as u64;
    let total =
      checked_pow(base, free.len()).filter(|n| *n <= limits.max_enum).ok_or_else(|| {
        Error::capacity("coboundary enumeration", format!("{base}^{}", free.len()), limits.max_enum)
      })?;
    let mut digits = vec![0u32; free.len()];
    let mut out = Vec::with_capacity(total as usize);
    let mut psi = self.trivial0();
    for index in 0..total {
      decode_index(index, base, &mut digits);
      for (&v, &d) in free.iter().zip(&digits) {
        psi.set(v, Elem(d));
      }
      out.push(self.d0(&psi));
    }
    out.sort_unstable();
    Ok(out)
  }

  pub fn cocycle_list(&self, source: CocycleSource, limits: SearchLimits) -> Result<Vec<Cochain1>> {
    match source {
      CocycleSource::Search => self.cocycles(limits),
      CocycleSource::Coboundaries => self.coboundaries(limits),
    }
  }

  /// `‖φ‖_csy` and the lexicographically least nearest cocycle.
  pub fn cosystolic_norm_exact(
    &self,
    phi: &Cochain1,
    source: CocycleSource,
    limits: SearchLimits,
  ) -> Result<(Rational, Cochain1)> {
    self.check1(phi)?;
    let cocycles = self.cocycle_list(source, limits)?;
    let (count, witness) = self.nearest_in(phi, &cocycles)?;
    Ok((Rational::new(count.into(), self.edge_denominator()?), witness.clone()))
  }

  /// Nearest member of a lexicographically sorted cocycle list, as a distance numerator.
  pub(crate) fn nearest_in<'c>(
    &self,
    phi: &Cochain1,
    cocycles: &'c [Cochain1],
  ) -> Result<(u64, &'c Cochain1)> {
    let w = self.edge_counts()?;
    let mut best: Option<(u64, &Cochain1)> = None;
    for z in cocycles {
      let d: u64 =
        phi.values.iter().zip(&z.values).zip(w).filter(|((x, y), _)| x != y).map(|(_, c)| c).sum();
      if best.is_none_or(|(b, _)| d < b) {
        best = Some((d, z));
      }
    }
    best.ok_or_else(|| Error::Consistency("empty cocycle set".into()))
  }

  /// A `ψ` with `ψ.φ₁ = φ₂`, if one exists.
  ///
  /// Fixing `ψ` at a root determines it along the spanning tree; every root value is
  /// tried, so the cost is `|G|^{#components}` propagations.
  pub fn same_orbit(
    &self,
    a: &Cochain1,
    b: &Cochain1,
    limits: SearchLimits,
  ) -> Result<Option<Cochain0>> {
    self.check1(a)?;
    self.check1(b)?;
    let g = self.group;
    let roots = self.component_roots();
    let base = g.order() as u64;
    let total =
      checked_pow(base, roots.len()).filter(|n| *n <= limits.max_enum).ok_or_else(|| {
        Error::capacity("orbit test", format!("{base}^{}", roots.len()), limits.max_enum)
      })?;
    let nv = self.num_vertices();
    let adjacency = self.adjacency();
    let mut digits = vec![0u32; roots.len()];
    'outer: for index in 0..total {
      decode_index(index, base, &mut digits);
      let mut psi: Vec<Option<Elem>> = vec![None; nv];
      for (&r, &d) in roots.iter().zip(&digits) {
        psi[r] = Some(Elem(d));
        let mut queue = VecDeque::from([r]);
        while let Some(u) = queue.pop_front() {
          for &(w, e) in &adjacency[u] {
            // ψ(u)·a(u,w)·ψ(w)⁻¹ = b(u,w)  ⇒  ψ(w) = b(u,w)⁻¹·ψ(u)·a(u,w)
            let (au, bu) = if self.edge_ends[e].0 == u {
              (a.value(e), b.value(e))
            } else {
              (g.inv(a.value(e)), g.inv(b.value(e)))
            };
            let want = g.mul(g.mul(g.inv(bu), psi[u].unwrap()), au);
            match psi[w] {
              None => {
                psi[w] = Some(want);
                queue.push_back(w);
              }
              Some(x) if x != want => continue 'outer,
              Some(_) => {}
            }
          }
        }
      }
      return Ok(Some(Cochain0::from_values(psi.into_iter().map(Option::unwrap).collect())));
    }
    Ok(None)
  }
}
