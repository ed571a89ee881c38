//! Geometric lattices, their order complexes, and the filling machinery that bounds the
//! 1-expansion of an order complex.
//!
//! An order complex `L̄` of a lattice `L` has the proper elements (neither bottom nor top)
//! as vertices and the chains among them as faces. The submodules provide
//! - [`fq`]: linear algebra over `F_2` and `F_3`,
//! - [`ordering`]: atom orderings `≺_s` with weights, including the ones induced by
//!   `GL_4(F_q)` on subspaces,
//! - [`filling`]: the correction cochains `ψ_s` and the filling discs `Y_s(uv)`,
//! - [`certificate`]: the `δ` statistics, the `γ` certificate and the decoder.

pub mod certificate;
pub mod filling;
pub mod fq;
pub mod ordering;

use std::collections::HashMap;

use crate::complex::{SimplicialComplex, VertexId};
use crate::{Error, Result};

pub use certificate::{
  bound_chain, decode, delta, gamma_certificate, BoundChain, DecodeOptions, DecodeReport,
  DeltaReport, GammaCertificate, GammaOptions,
};
pub use filling::{collapses_to_point, element_phi, filling, psi_s, FillingDisc};
pub use fq::PrimeField;
pub use ordering::{min_atom, min_atom_below, AtomOrder, OrderingScheme, SchemeKind};

/// A finite ranked lattice with explicit join and meet tables.
#[derive(Clone, Debug)]
pub struct GeometricLattice {
  labels: Vec<String>,
  rank: Vec<usize>,
  leq: Vec<Vec<bool>>,
  join: Vec<u32>,
  meet: Vec<u32>,
  bottom: usize,
  top: usize,
  atoms: Vec<usize>,
  /// For each element, positions in `atoms` of the atoms below it.
  atoms_below: Vec<Vec<usize>>,
}

impl GeometricLattice {
  /// Builds the lattice of `labels.len()` elements ordered by `leq`, checking the lattice,
  /// grading, semimodularity and atomicity axioms.
  pub fn from_order(labels: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
    let n = labels.len();
    let leq: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| leq(i, j)).collect()).collect();
    let bad = |msg: String| Err(Error::Construction(msg));
    for i in 0..n {
      if !leq[i][i] {
        return bad(format!("order is not reflexive at {}", labels[i]));
      }
      for j in 0..n {
        if i != j && leq[i][j] && leq[j][i] {
          return bad(format!("order is not antisymmetric at {}, {}", labels[i], labels[j]));
        }
      }
    }
    let Some(bottom) = (0..n).find(|&i| (0..n).all(|j| leq[i][j])) else {
      return bad("no bottom element".into());
    };
    let Some(top) = (0..n).find(|&i| (0..n).all(|j| leq[j][i])) else {
      return bad("no top element".into());
    };

    let bound = |upper: bool, i: usize, j: usize| -> Option<usize> {
      let candidates: Vec<usize> = (0..n)
        .filter(|&k| if upper { leq[i][k] && leq[j][k] } else { leq[k][i] && leq[k][j] })
        .collect();
      candidates
        .iter()
        .copied()
        .find(|&k| candidates.iter().all(|&c| if upper { leq[k][c] } else { leq[c][k] }))
    };
    let mut join = vec![0u32; n * n];
    let mut meet = vec![0u32; n * n];
    for i in 0..n {
      for j in 0..n {
        let (Some(jn), Some(mt)) = (bound(true, i, j), bound(false, i, j)) else {
          return bad(format!("{} and {} have no join or meet", labels[i], labels[j]));
        };
        join[i * n + j] = jn as u32;
        meet[i * n + j] = mt as u32;
      }
    }

    // rank = length of the longest chain from the bottom; gradedness checked on covers
    let mut by_height: Vec<usize> = (0..n).collect();
    by_height.sort_by_key(|&i| (0..n).filter(|&k| leq[k][i]).count());
    let mut rank = vec![0usize; n];
    for &i in &by_height {
      rank[i] = (0..n).filter(|&k| k != i && leq[k][i]).map(|k| rank[k] + 1).max().unwrap_or(0);
    }
    let covers = |i: usize, j: usize| {
      i != j && leq[i][j] && !(0..n).any(|k| k != i && k != j && leq[i][k] && leq[k][j])
    };
    for i in 0..n {
      for j in 0..n {
        if covers(i, j) && rank[j] != rank[i] + 1 {
          return bad(format!("lattice is not graded at {} < {}", labels[i], labels[j]));
        }
        if rank[i] + rank[j] < rank[join[i * n + j] as usize] + rank[meet[i * n + j] as usize] {
          return bad(format!("rank is not submodular at {}, {}", labels[i], labels[j]));
        }
      }
    }

    let atoms: Vec<usize> = (0..n).filter(|&i| rank[i] == 1).collect();
    let atoms_below: Vec<Vec<usize>> =
      (0..n).map(|u| (0..atoms.len()).filter(|&a| leq[atoms[a]][u]).collect()).collect();
    for u in 0..n {
      let generated =
        atoms_below[u].iter().fold(bottom, |acc, &a| join[acc * n + atoms[a]] as usize);
      if generated != u {
        return bad(format!("{} is not a join of atoms", labels[u]));
      }
    }
    Ok(Self { labels, rank, leq, join, meet, bottom, top, atoms, atoms_below })
  }

  /// Subsets of an `n`-set ordered by inclusion.
  pub fn boolean(n: usize) -> Result<Self> {
    if n > 10 {
      return Err(Error::capacity("boolean lattice", format!("2^{n} elements"), 1 << 10));
    }
    let mut masks: Vec<u32> = (0..1u32 << n).collect();
    masks.sort_by_key(|m| (m.count_ones(), m.reverse_bits()));
    let labels = masks
      .iter()
      .map(|m| {
        if *m == 0 {
          "0".into()
        } else {
          (0..n).filter(|i| m >> i & 1 == 1).map(|i| i.to_string()).collect::<Vec<_>>().join("")
        }
      })
      .collect();
    Self::from_order(labels, |i, j| masks[i] & !masks[j] == 0)
  }

  pub fn len(&self) -> usize {
    self.labels.len()
  }

  pub fn is_empty(&self) -> bool {
    self.labels.is_empty()
  }

  pub fn label(&self, u: usize) -> &str {
    &self.labels[u]
  }

  pub fn labels(&self) -> &[String] {
    &self.labels
  }

  pub fn rank(&self, u: usize) -> usize {
    self.rank[u]
  }

  pub fn leq(&self, u: usize, v: usize) -> bool {
    self.leq[u][v]
  }

  pub fn comparable(&self, u: usize, v: usize) -> bool {
    self.leq[u][v] || self.leq[v][u]
  }

  pub fn join(&self, u: usize, v: usize) -> usize {
    self.join[u * self.len() + v] as usize
  }

  pub fn meet(&self, u: usize, v: usize) -> usize {
    self.meet[u * self.len() + v] as usize
  }

  pub fn bottom(&self) -> usize {
    self.bottom
  }

  pub fn top(&self) -> usize {
    self.top
  }

  pub fn top_rank(&self) -> usize {
    self.rank[self.top]
  }

  /// Atoms in lattice order; an atom's position in this list is its base-order rank.
  pub fn atoms(&self) -> &[usize] {
    &self.atoms
  }

  /// Positions (in [`Self::atoms`]) of the atoms below `u`.
  pub fn atoms_below(&self, u: usize) -> &[usize] {
    &self.atoms_below[u]
  }

  pub fn is_proper(&self, u: usize) -> bool {
    u != self.bottom && u != self.top
  }
}

/// The order complex of `L̄ = L ∖ {0̂, 1̂}` with its vertex/element correspondence.
#[derive(Clone, Debug)]
pub struct OrderComplex {
  complex: SimplicialComplex,
  element_of_vertex: Vec<usize>,
  vertex_of_element: Vec<Option<VertexId>>,
}

impl OrderComplex {
  pub fn complex(&self) -> &SimplicialComplex {
    &self.complex
  }

  pub fn element(&self, v: VertexId) -> usize {
    self.element_of_vertex[v as usize]
  }

  pub fn vertex(&self, u: usize) -> Option<VertexId> {
    self.vertex_of_element[u]
  }

  /// Vertex of a proper element; panics on the bottom or top.
  pub fn vertex_of(&self, u: usize) -> VertexId {
    self.vertex_of_element[u].expect("proper element")
  }

  /// Recognizes `complex` (e.g. read from a file) as the order complex of `lattice`, with
  /// vertex labels resolved to elements by `element_of_label`.
  pub fn identify(
    lattice: &GeometricLattice,
    complex: SimplicialComplex,
    element_of_label: impl Fn(&str) -> Option<usize>,
  ) -> Result<Self> {
    let mut element_of_vertex = Vec::with_capacity(complex.num_vertices());
    let mut vertex_of_element = vec![None; lattice.len()];
    for v in complex.vertices() {
      let label = complex.label(v);
      let u = element_of_label(label).filter(|&u| lattice.is_proper(u)).ok_or_else(|| {
        Error::MalformedInput(format!("vertex {label} is not a proper lattice element"))
      })?;
      if v as usize != element_of_vertex.len() || vertex_of_element[u].is_some() {
        return Err(Error::MalformedInput(format!("vertex {label} is repeated or out of order")));
      }
      element_of_vertex.push(u);
      vertex_of_element[u] = Some(v);
    }
    let reference = order_complex(lattice)?;
    let as_elements = |oc_facets: &[crate::complex::Simplex], map: &dyn Fn(VertexId) -> usize| {
      let mut out: Vec<Vec<usize>> = oc_facets
        .iter()
        .map(|f| {
          let mut e: Vec<usize> = f.vertices().iter().map(|&v| map(v)).collect();
          e.sort_unstable();
          e
        })
        .collect();
      out.sort();
      out
    };
    let ours = as_elements(complex.facets(), &|v| element_of_vertex[v as usize]);
    let theirs =
      as_elements(reference.complex.facets(), &|v| reference.element_of_vertex[v as usize]);
    if ours != theirs {
      return Err(Error::MalformedInput("complex is not the order complex of the lattice".into()));
    }
    Ok(Self { complex, element_of_vertex, vertex_of_element })
  }
}

/// Order complex of the proper part of `lattice`: facets are the maximal chains.
pub fn order_complex(lattice: &GeometricLattice) -> Result<OrderComplex> {
  let n = lattice.len();
  let proper: Vec<usize> = (0..n).filter(|&u| lattice.is_proper(u)).collect();
  if proper.is_empty() {
    return Err(Error::Construction("lattice has no proper elements".into()));
  }
  let mut vertex_of_element = vec![None; n];
  for (v, &u) in proper.iter().enumerate() {
    vertex_of_element[u] = Some(v as VertexId);
  }
  let covers: Vec<Vec<usize>> = (0..n)
    .map(|u| {
      proper
        .iter()
        .copied()
        .filter(|&w| lattice.leq(u, w) && lattice.rank(w) == lattice.rank(u) + 1)
        .collect()
    })
    .collect();

  let mut facets: Vec<Vec<VertexId>> = Vec::new();
  let mut stack: Vec<Vec<usize>> = lattice.atoms().iter().map(|&a| vec![a]).collect();
  while let Some(chain) = stack.pop() {
    let last = *chain.last().unwrap();
    if covers[last].is_empty() {
      facets.push(chain.iter().map(|&u| vertex_of_element[u].unwrap()).collect());
    } else {
      for &w in &covers[last] {
        let mut next = chain.clone();
        next.push(w);
        stack.push(next);
      }
    }
  }
  let labels = proper.iter().map(|&u| lattice.label(u).to_string()).collect();
  let complex = SimplicialComplex::from_labeled_facets(labels, &facets)?;
  Ok(OrderComplex { complex, element_of_vertex: proper, vertex_of_element })
}

/// The lattice of subspaces of `F_q^4`, `q ∈ {2, 3}`.
#[derive(Clone, Debug)]
pub struct SubspaceLattice {
  field: PrimeField,
  lattice: GeometricLattice,
  bases: Vec<Vec<fq::Vector>>,
  masks: Vec<u128>,
  by_mask: HashMap<u128, usize>,
  by_label: HashMap<String, usize>,
}

/// Label of a subspace: the rows of its reduced echelon basis, digits concatenated and
/// rows separated by dots (`"0"` for the zero space).
pub fn subspace_label(basis: &[fq::Vector]) -> String {
  if basis.is_empty() {
    return "0".into();
  }
  basis
    .iter()
    .map(|row| row.iter().map(|d| char::from(b'0' + d)).collect::<String>())
    .collect::<Vec<_>>()
    .join(".")
}

pub fn subspace_lattice(q: u32) -> Result<SubspaceLattice> {
  let field = PrimeField::new(q)?;
  let nv = field.num_vectors();
  // every subspace is reached by adding one vector at a time to a smaller one
  let mut found: HashMap<u128, Vec<fq::Vector>> = HashMap::from([(1u128, Vec::new())]);
  let mut frontier = vec![Vec::<fq::Vector>::new()];
  while let Some(basis) = frontier.pop() {
    let mask = field.span_mask(&basis);
    for i in 0..nv {
      if mask >> i & 1 == 1 {
        continue;
      }
      let mut rows = basis.clone();
      rows.push(field.decode(i));
      let rows = field.rref(&rows);
      let m = field.span_mask(&rows);
      if let std::collections::hash_map::Entry::Vacant(slot) = found.entry(m) {
        slot.insert(rows.clone());
        frontier.push(rows);
      }
    }
  }
  let mut entries: Vec<(u128, Vec<fq::Vector>)> = found.into_iter().collect();
  entries.sort_by(|a, b| (a.1.len(), &a.1).cmp(&(b.1.len(), &b.1)));
  let labels: Vec<String> = entries.iter().map(|(_, b)| subspace_label(b)).collect();
  let masks: Vec<u128> = entries.iter().map(|(m, _)| *m).collect();
  let bases: Vec<Vec<fq::Vector>> = entries.into_iter().map(|(_, b)| b).collect();
  let lattice = GeometricLattice::from_order(labels.clone(), |i, j| masks[i] & !masks[j] == 0)?;
  let by_mask = masks.iter().enumerate().map(|(i, m)| (*m, i)).collect();
  let by_label = labels.into_iter().enumerate().map(|(i, l)| (l, i)).collect();
  Ok(SubspaceLattice { field, lattice, bases, masks, by_mask, by_label })
}

impl SubspaceLattice {
  pub fn q(&self) -> u32 {
    self.field.q() as u32
  }

  pub fn field(&self) -> PrimeField {
    self.field
  }

  pub fn lattice(&self) -> &GeometricLattice {
    &self.lattice
  }

  pub fn basis(&self, u: usize) -> &[fq::Vector] {
    &self.bases[u]
  }

  pub fn dimension(&self, u: usize) -> usize {
    self.bases[u].len()
  }

  pub fn mask(&self, u: usize) -> u128 {
    self.masks[u]
  }

  pub fn element_of_mask(&self, mask: u128) -> Option<usize> {
    self.by_mask.get(&mask).copied()
  }

  pub fn element_of_label(&self, label: &str) -> Option<usize> {
    self.by_label.get(label).copied()
  }

  /// Image `m·u` of a subspace.
  pub fn apply(&self, m: &fq::Matrix, u: usize) -> usize {
    self.by_mask[&self.field.apply_mask(m, self.masks[u])]
  }
}
