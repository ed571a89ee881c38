//! Finite simplicial complexes with the facet-count probability weights.
//!
//! Faces are stored per dimension as sorted arrays with a hash index. For a pure
//! `(n-1)`-dimensional complex the weight of a face `σ` is
//!
//! ```text
//! c(σ) = #{facets ⊇ σ} / (binom(n, |σ|) · f_{n-1})
//! ```
//!
//! i.e. the probability of hitting `σ` by picking a uniform facet and then a uniform
//! `|σ|`-subset of it. The weights of each dimension sum to one.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;

use crate::{Error, Rational, Result};

pub type VertexId = u32;

/// Largest facet cardinality accepted by the subset-closure construction.
const MAX_FACET_SIZE: usize = 24;

/// A face given by its strictly increasing vertex list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<VertexId>);

impl Simplex {
  /// Sorts the vertices; repeated vertices are rejected.
  pub fn new(mut vertices: Vec<VertexId>) -> Result<Self> {
    vertices.sort_unstable();
    if vertices.windows(2).any(|w| w[0] == w[1]) {
      return Err(Error::MalformedInput(format!("repeated vertex in {vertices:?}")));
    }
    Ok(Self(vertices))
  }

  pub fn vertex(v: VertexId) -> Self {
    Self(vec![v])
  }

  pub fn edge(u: VertexId, v: VertexId) -> Self {
    if u < v {
      Self(vec![u, v])
    } else {
      Self(vec![v, u])
    }
  }

  pub fn vertices(&self) -> &[VertexId] {
    &self.0
  }

  /// Number of vertices (dimension + 1).
  pub fn len(&self) -> usize {
    self.0.len()
  }

  pub fn is_empty(&self) -> bool {
    self.0.is_empty()
  }

  pub fn dim(&self) -> usize {
    self.0.len().saturating_sub(1)
  }

  pub fn contains_vertex(&self, v: VertexId) -> bool {
    self.0.binary_search(&v).is_ok()
  }

  pub fn is_subset_of(&self, other: &Simplex) -> bool {
    self.0.iter().all(|v| other.contains_vertex(*v))
  }

  pub fn is_disjoint(&self, other: &Simplex) -> bool {
    self.0.iter().all(|v| !other.contains_vertex(*v))
  }

  pub fn union(&self, other: &Simplex) -> Simplex {
    let mut vs: Vec<VertexId> = self.0.iter().chain(other.0.iter()).copied().collect();
    vs.sort_unstable();
    vs.dedup();
    Simplex(vs)
  }

  /// All nonempty subsets, each in sorted form.
  pub fn nonempty_subsets(&self) -> impl Iterator<Item = Simplex> + '_ {
    let k = self.0.len();
    (1u64..(1u64 << k))
      .map(move |mask| Simplex((0..k).filter(|i| mask >> i & 1 == 1).map(|i| self.0[i]).collect()))
  }
}

impl fmt::Display for Simplex {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "{{")?;
    for (i, v) in self.0.iter().enumerate() {
      if i > 0 {
        write!(f, ",")?;
      }
      write!(f, "{v}")?;
    }
    write!(f, "}}")
  }
}

/// A finite simplicial complex, closed under taking nonempty subsets.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
  labels: Vec<String>,
  faces: Vec<Vec<Simplex>>,
  index: Vec<HashMap<Simplex, usize>>,
  edge_lookup: HashMap<(VertexId, VertexId), usize>,
  facets: Vec<Simplex>,
  /// Per dimension and face: number of top-dimensional facets containing it.
  facet_counts: Vec<Vec<u64>>,
  pure: bool,
}

impl SimplicialComplex {
  /// Downward closure of `facets`, vertices labelled by their decimal id.
  pub fn from_facets<F: AsRef<[VertexId]>>(facets: &[F]) -> Result<Self> {
    let max = facets.iter().flat_map(|f| f.as_ref().iter().copied()).max().unwrap_or(0);
    let labels = (0..=max).map(|v| v.to_string()).collect();
    Self::from_labeled_facets(labels, facets)
  }

  /// Downward closure of `facets`; `labels[v]` names vertex `v`.
  pub fn from_labeled_facets<F: AsRef<[VertexId]>>(
    labels: Vec<String>,
    facets: &[F],
  ) -> Result<Self> {
    if facets.is_empty() {
      return Err(Error::MalformedInput("no facets given".into()));
    }
    let mut simplices = Vec::with_capacity(facets.len());
    for f in facets {
      let f = f.as_ref();
      if f.is_empty() {
        return Err(Error::MalformedInput("empty facet".into()));
      }
      if f.len() > MAX_FACET_SIZE {
        return Err(Error::MalformedInput(format!("facet with {} vertices is too large", f.len())));
      }
      if let Some(v) = f.iter().find(|v| **v as usize >= labels.len()) {
        return Err(Error::MalformedInput(format!("vertex {v} has no label")));
      }
      simplices.push(Simplex::new(f.to_vec())?);
    }
    Ok(Self::build(labels, simplices))
  }

  /// The complex with no faces at all (e.g. the link of a facet).
  pub fn empty(labels: Vec<String>) -> Self {
    Self {
      labels,
      faces: Vec::new(),
      index: Vec::new(),
      edge_lookup: HashMap::new(),
      facets: Vec::new(),
      facet_counts: Vec::new(),
      pure: true,
    }
  }

  fn build(labels: Vec<String>, generators: Vec<Simplex>) -> Self {
    let top = generators.iter().map(Simplex::len).max().unwrap_or(0);
    let mut index: Vec<HashMap<Simplex, usize>> = vec![HashMap::new(); top];
    for g in &generators {
      for s in g.nonempty_subsets() {
        let d = s.len() - 1;
        let next = index[d].len();
        index[d].entry(s).or_insert(next);
      }
    }
    let mut faces: Vec<Vec<Simplex>> =
      index.iter().map(|m| m.keys().cloned().collect::<Vec<_>>()).collect();
    for (d, list) in faces.iter_mut().enumerate() {
      list.sort_unstable();
      index[d] = list.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    }

    // a face is maximal iff it is not a codimension-one face of anything
    let mut covered: Vec<Vec<bool>> = faces.iter().map(|l| vec![false; l.len()]).collect();
    for d in 1..faces.len() {
      for s in &faces[d] {
        for skip in 0..s.len() {
          let sub: Vec<VertexId> =
            s.0.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| *v).collect();
          covered[d - 1][index[d - 1][&Simplex(sub)]] = true;
        }
      }
    }
    let mut facets = Vec::new();
    for d in 0..faces.len() {
      for (i, s) in faces[d].iter().enumerate() {
        if !covered[d][i] {
          facets.push(s.clone());
        }
      }
    }
    facets.sort_unstable();
    let pure = facets.iter().all(|f| f.len() == top);

    let mut facet_counts: Vec<Vec<u64>> = faces.iter().map(|l| vec![0; l.len()]).collect();
    if pure {
      for f in &facets {
        for s in f.nonempty_subsets() {
          let d = s.len() - 1;
          facet_counts[d][index[d][&s]] += 1;
        }
      }
    }

    let edge_lookup = faces
      .get(1)
      .map(|edges| edges.iter().enumerate().map(|(i, e)| ((e.0[0], e.0[1]), i)).collect())
      .unwrap_or_default();

    Self { labels, faces, index, edge_lookup, facets, facet_counts, pure }
  }

  /// `n` such that the complex is `(n-1)`-dimensional.
  pub fn n(&self) -> usize {
    self.faces.len()
  }

  pub fn is_pure(&self) -> bool {
    self.pure
  }

  pub fn is_empty(&self) -> bool {
    self.faces.is_empty()
  }

  pub fn f_vector(&self) -> Vec<usize> {
    self.faces.iter().map(Vec::len).collect()
  }

  pub fn facets(&self) -> &[Simplex] {
    &self.facets
  }

  pub fn labels(&self) -> &[String] {
    &self.labels
  }

  pub fn label(&self, v: VertexId) -> &str {
    &self.labels[v as usize]
  }

  /// All `k`-faces in lexicographic order.
  pub fn faces(&self, k: usize) -> Result<&[Simplex]> {
    if k >= self.faces.len() {
      return Err(Error::Range { k, max: self.faces.len().saturating_sub(1) });
    }
    Ok(&self.faces[k])
  }

  /// `k`-faces, or an empty slice when the complex has no faces of that dimension.
  pub fn faces_or_empty(&self, k: usize) -> &[Simplex] {
    self.faces.get(k).map(Vec::as_slice).unwrap_or(&[])
  }

  pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
    self.faces_or_empty(0).iter().map(|s| s.0[0])
  }

  pub fn num_vertices(&self) -> usize {
    self.faces_or_empty(0).len()
  }

  pub fn edges(&self) -> &[Simplex] {
    self.faces_or_empty(1)
  }

  pub fn triangles(&self) -> &[Simplex] {
    self.faces_or_empty(2)
  }

  pub fn contains(&self, s: &Simplex) -> bool {
    self.face_index(s).is_some()
  }

  /// Position of `s` within `faces(s.dim())`.
  pub fn face_index(&self, s: &Simplex) -> Option<usize> {
    if s.is_empty() {
      return None;
    }
    self.index.get(s.len() - 1)?.get(s).copied()
  }

  /// Position of the edge `{u, v}` within `edges()`.
  pub fn edge_index(&self, u: VertexId, v: VertexId) -> Option<usize> {
    let key = if u < v { (u, v) } else { (v, u) };
    self.edge_lookup.get(&key).copied()
  }

  /// Position of vertex `v` within `faces(0)`.
  pub fn vertex_index(&self, v: VertexId) -> Option<usize> {
    self.index.first()?.get(&Simplex::vertex(v)).copied()
  }

  fn require_face(&self, tau: &Simplex) -> Result<()> {
    if self.contains(tau) {
      Ok(())
    } else {
      Err(Error::NotAFace(tau.to_string()))
    }
  }

  /// `{σ : σ ∪ τ ∈ X}`, in dimension-then-lexicographic order.
  pub fn star(&self, tau: &Simplex) -> Result<Vec<Simplex>> {
    self.require_face(tau)?;
    Ok(
      self
        .faces
        .iter()
        .flat_map(|l| l.iter())
        .filter(|s| self.contains(&s.union(tau)))
        .cloned()
        .collect(),
    )
  }

  /// `{σ ∈ st(X, τ) : σ ∩ τ = ∅}` as a complex on the same label set.
  pub fn link(&self, tau: &Simplex) -> Result<SimplicialComplex> {
    self.require_face(tau)?;
    let members: Vec<Simplex> = self
      .faces
      .iter()
      .flat_map(|l| l.iter())
      .filter(|s| s.is_disjoint(tau) && self.contains(&s.union(tau)))
      .cloned()
      .collect();
    if members.is_empty() {
      return Ok(Self::empty(self.labels.clone()));
    }
    Ok(Self::build(self.labels.clone(), members))
  }

  /// Number of top-dimensional facets containing the `k`-face with index `i`.
  pub fn facet_count(&self, k: usize, i: usize) -> u64 {
    self.facet_counts[k][i]
  }

  /// `binom(n, k+1) · f_{n-1}`, the common denominator of all `k`-face weights.
  pub fn weight_denominator(&self, k: usize) -> Result<BigInt> {
    if !self.pure {
      return Err(Error::NotPure);
    }
    let n = self.n();
    if k >= n {
      return Err(Error::Range { k, max: n.saturating_sub(1) });
    }
    let f_top = self.faces[n - 1].len();
    Ok(BigInt::from(binomial(n as u64, k as u64 + 1)) * BigInt::from(f_top))
  }

  /// The weight `c(σ)` of a face of a pure complex.
  pub fn weight(&self, sigma: &Simplex) -> Result<Rational> {
    if !self.pure {
      return Err(Error::NotPure);
    }
    let i = self.face_index(sigma).ok_or_else(|| Error::NotAFace(sigma.to_string()))?;
    let k = sigma.len() - 1;
    Ok(Rational::new(BigInt::from(self.facet_counts[k][i]), self.weight_denominator(k)?))
  }

  /// Weights of every face, per dimension, aligned with `faces(k)`.
  pub fn weight_table(&self) -> Result<WeightTable> {
    if !self.pure {
      return Err(Error::NotPure);
    }
    let mut by_dim = Vec::with_capacity(self.n());
    for k in 0..self.n() {
      let den = self.weight_denominator(k)?;
      by_dim.push(
        self.facet_counts[k].iter().map(|c| Rational::new(BigInt::from(*c), den.clone())).collect(),
      );
    }
    Ok(WeightTable { by_dim })
  }
}

/// Exact face weights, indexed like [`SimplicialComplex::faces`].
#[derive(Clone, Debug, PartialEq)]
pub struct WeightTable {
  by_dim: Vec<Vec<Rational>>,
}

impl WeightTable {
  pub fn dim_weights(&self, k: usize) -> &[Rational] {
    &self.by_dim[k]
  }

  pub fn get(&self, k: usize, i: usize) -> &Rational {
    &self.by_dim[k][i]
  }

  pub fn total(&self, k: usize) -> Rational {
    self.by_dim[k].iter().cloned().sum()
  }
}

pub fn binomial(n: u64, k: u64) -> u64 {
  if k > n {
    return 0;
  }
  num_integer::binomial(n, k)
}

#[cfg(test)]
mod tests {
  use super::*;
  use crate::ratio;

  fn simplex(vs: &[VertexId]) -> Simplex {
    Simplex::new(vs.to_vec()).unwrap()
  }

  #[test]
  fn f_vectors_of_small_complexes() {
    let tri = SimplicialComplex::from_facets(&[[0, 1, 2]]).unwrap();
    assert_eq!(tri.f_vector(), vec![3, 3, 1]);
    let tet = SimplicialComplex::from_facets(&[[0, 1, 2, 3]]).unwrap();
    assert_eq!(tet.f_vector(), vec![4, 6, 4, 1]);
    assert!(tet.is_pure());
  }

  #[test]
  fn mixed_dimensions_are_not_pure() {
    let x = SimplicialComplex::from_facets(&[vec![0, 1, 2], vec![2, 3]]).unwrap();
    assert!(!x.is_pure());
    assert_eq!(x.facets().len(), 2);
    assert_eq!(x.weight(&simplex(&[0])), Err(Error::NotPure));
  }

  #[test]
  fn redundant_generators_are_not_facets() {
    let x = SimplicialComplex::from_facets(&[vec![0, 1], vec![0, 1, 2]]).unwrap();
    assert!(x.is_pure());
    assert_eq!(x.facets(), &[simplex(&[0, 1, 2])]);
  }

  #[test]
  fn malformed_facets() {
    assert!(matches!(SimplicialComplex::from_facets(&[[0, 1, 1]]), Err(Error::MalformedInput(_))));
    let none: [[VertexId; 2]; 0] = [];
    assert!(SimplicialComplex::from_facets(&none).is_err());
    let empty: [Vec<VertexId>; 1] = [vec![]];
    assert!(SimplicialComplex::from_facets(&empty).is_err());
  }

  #[test]
  fn faces_by_dimension() {
    let tet = SimplicialComplex::from_facets(&[[0, 1, 2, 3]]).unwrap();
    assert_eq!(tet.faces(1).unwrap().len(), 6);
    assert_eq!(tet.faces(2).unwrap().len(), 4);
    assert_eq!(tet.faces(4), Err(Error::Range { k: 4, max: 3 }));
    let tri = SimplicialComplex::from_facets(&[[0, 1, 2]]).unwrap();
    assert_eq!(tri.faces(2).unwrap(), &[simplex(&[0, 1, 2])]);
  }

  #[test]
  fn links_and_stars() {
    let tet = SimplicialComplex::from_facets(&[[0, 1, 2, 3]]).unwrap();
    let lk = tet.link(&simplex(&[0])).unwrap();
    assert_eq!(lk.facets(), &[simplex(&[1, 2, 3])]);
    let lk01 = tet.link(&simplex(&[0, 1])).unwrap();
    assert_eq!(lk01.facets(), &[simplex(&[2, 3])]);
    let tri = SimplicialComplex::from_facets(&[[0, 1, 2]]).unwrap();
    assert_eq!(tri.link(&simplex(&[0])).unwrap().facets(), &[simplex(&[1, 2])]);
    assert!(tri.link(&simplex(&[0, 1, 2])).unwrap().is_empty());
    // star of a vertex of a triangle is the whole triangle
    assert_eq!(tri.star(&simplex(&[0])).unwrap().len(), 7);
    assert!(matches!(tri.link(&simplex(&[0, 5])), Err(Error::NotAFace(_))));
  }

  #[test]
  fn weights_of_simplices() {
    let tet = SimplicialComplex::from_facets(&[[0, 1, 2, 3]]).unwrap();
    assert_eq!(tet.weight(&simplex(&[0, 1])).unwrap(), ratio(1, 6));
    let tri = SimplicialComplex::from_facets(&[[0, 1, 2]]).unwrap();
    assert_eq!(tri.weight(&simplex(&[0])).unwrap(), ratio(1, 3));
  }

  #[test]
  fn weights_of_a_two_triangle_strip() {
    // 0-1-2 and 1-2-3 sharing the edge 12
    let x = SimplicialComplex::from_facets(&[[0, 1, 2], [1, 2, 3]]).unwrap();
    assert_eq!(x.weight(&simplex(&[1, 2])).unwrap(), ratio(2, 6));
    assert_eq!(x.weight(&simplex(&[0, 1])).unwrap(), ratio(1, 6));
    assert_eq!(x.weight(&simplex(&[1])).unwrap(), ratio(2, 6));
    let table = x.weight_table().unwrap();
    for k in 0..3 {
      assert_eq!(table.total(k), ratio(1, 1));
    }
  }
}
