//! Linear orders on the atoms of a lattice, weighted into an ordering scheme `(S, μ)`.

use num_traits::{One, Zero};

use super::fq::{Matrix, PrimeField};
use super::{GeometricLattice, SubspaceLattice};
use crate::rng::rng_from_seed;
use crate::search::SearchLimits;
use crate::{Error, Rational, Result};

/// A total order on the atoms, stored as the position of each atom (indexed like
/// [`GeometricLattice::atoms`]) in the order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AtomOrder {
  key: Vec<u32>,
}

impl AtomOrder {
  /// The base order: atoms in lattice order.
  pub fn base(num_atoms: usize) -> Self {
    Self { key: (0..num_atoms as u32).collect() }
  }

  /// Order listing `sequence[0] ≺ sequence[1] ≺ ...` (atom positions).
  pub fn from_sequence(sequence: &[usize]) -> Result<Self> {
    let mut key = vec![u32::MAX; sequence.len()];
    for (pos, &a) in sequence.iter().enumerate() {
      if a >= key.len() || key[a] != u32::MAX {
        return Err(Error::MalformedInput(format!(
          "atom sequence is not a permutation: {sequence:?}"
        )));
      }
      key[a] = pos as u32;
    }
    Ok(Self { key })
  }

  pub fn len(&self) -> usize {
    self.key.len()
  }

  pub fn is_empty(&self) -> bool {
    self.key.is_empty()
  }

  /// Position of atom `a` (an index into the atom list) in this order.
  pub fn key(&self, a: usize) -> u32 {
    self.key[a]
  }

  pub fn less(&self, a: usize, b: usize) -> bool {
    self.key[a] < self.key[b]
  }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Weights {
  Uniform,
  Explicit(Vec<Rational>),
}

/// How a scheme was produced; recorded in reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchemeKind {
  Explicit,
  GlExact,
  GlSampled { seed: u64 },
}

/// A finite family of atom orders `≺_s` with a probability distribution `μ`.
#[derive(Clone, Debug)]
pub struct OrderingScheme {
  orders: Vec<AtomOrder>,
  weights: Weights,
  matrices: Vec<Matrix>,
  kind: SchemeKind,
}

impl OrderingScheme {
  /// Uniform distribution over `orders`.
  pub fn uniform(lattice: &GeometricLattice, orders: Vec<AtomOrder>) -> Result<Self> {
    Self::check_orders(lattice, &orders)?;
    Ok(Self { orders, weights: Weights::Uniform, matrices: Vec::new(), kind: SchemeKind::Explicit })
  }

  /// Arbitrary `(order, weight)` pairs; weights must be nonnegative and sum to 1.
  pub fn explicit(lattice: &GeometricLattice, pairs: Vec<(AtomOrder, Rational)>) -> Result<Self> {
    let (orders, weights): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    Self::check_orders(lattice, &orders)?;
    if weights.iter().any(|w| *w < Rational::zero()) {
      return Err(Error::MalformedInput("negative ordering weight".into()));
    }
    if weights.iter().cloned().sum::<Rational>() != Rational::one() {
      return Err(Error::MalformedInput("ordering weights do not sum to 1".into()));
    }
    Ok(Self {
      orders,
      weights: Weights::Explicit(weights),
      matrices: Vec::new(),
      kind: SchemeKind::Explicit,
    })
  }

  fn check_orders(lattice: &GeometricLattice, orders: &[AtomOrder]) -> Result<()> {
    if orders.is_empty() {
      return Err(Error::MalformedInput("ordering scheme is empty".into()));
    }
    if let Some(o) = orders.iter().find(|o| o.len() != lattice.atoms().len()) {
      return Err(Error::Shape(format!(
        "order on {} atoms, lattice has {}",
        o.len(),
        lattice.atoms().len()
      )));
    }
    Ok(())
  }

  /// All of `GL_4(F_q)` with the uniform distribution; `≺_s` is `a ≺_s a' ⇔ s⁻¹a ≺ s⁻¹a'`
  /// for the base order. `limits` bounds `|GL_4(F_q)| · f_1`, the work of a full pass.
  pub fn gl_exact(l: &SubspaceLattice, limits: SearchLimits) -> Result<Self> {
    let field = l.field();
    let edges = edge_count(l.lattice()) as u64;
    let needed = field.gl_order().saturating_mul(edges);
    if needed > limits.max_enum {
      return Err(Error::capacity(
        format!("exhaustive GL_4(F_{}) ordering scheme", field.q()),
        needed.to_string(),
        limits.max_enum,
      ));
    }
    let matrices = field.general_linear_group();
    Ok(Self::from_matrices(l, matrices, SchemeKind::GlExact))
  }

  /// `samples` independent uniform elements of `GL_4(F_q)`, uniform weights.
  pub fn gl_sampled(l: &SubspaceLattice, samples: usize, seed: u64) -> Result<Self> {
    if samples == 0 {
      return Err(Error::MalformedInput("need at least one sampled ordering".into()));
    }
    let field = l.field();
    let mut rng = rng_from_seed(seed);
    let matrices = (0..samples).map(|_| field.random_invertible(&mut rng)).collect();
    Ok(Self::from_matrices(l, matrices, SchemeKind::GlSampled { seed }))
  }

  /// Orders induced by explicit matrices, uniform weights.
  pub fn from_matrices(l: &SubspaceLattice, matrices: Vec<Matrix>, kind: SchemeKind) -> Self {
    let field: PrimeField = l.field();
    let atoms = l.lattice().atoms();
    let mut atom_pos = vec![usize::MAX; l.lattice().len()];
    for (i, &a) in atoms.iter().enumerate() {
      atom_pos[a] = i;
    }
    let orders = matrices
      .iter()
      .map(|m| {
        let inv = field.inverse(m).expect("invertible matrix");
        let key = atoms.iter().map(|&a| atom_pos[l.apply(&inv, a)] as u32).collect();
        AtomOrder { key }
      })
      .collect();
    Self { orders, weights: Weights::Uniform, matrices, kind }
  }

  pub fn len(&self) -> usize {
    self.orders.len()
  }

  pub fn is_empty(&self) -> bool {
    self.orders.is_empty()
  }

  pub fn kind(&self) -> SchemeKind {
    self.kind
  }

  pub fn order(&self, s: usize) -> &AtomOrder {
    &self.orders[s]
  }

  pub fn orders(&self) -> &[AtomOrder] {
    &self.orders
  }

  /// Inducing matrix of order `s`, for schemes built from `GL_4(F_q)`.
  pub fn matrix(&self, s: usize) -> Option<&Matrix> {
    self.matrices.get(s)
  }

  pub fn is_uniform(&self) -> bool {
    self.weights == Weights::Uniform
  }

  pub fn weight(&self, s: usize) -> Rational {
    match &self.weights {
      Weights::Uniform => Rational::new(1.into(), self.orders.len().into()),
      Weights::Explicit(w) => w[s].clone(),
    }
  }
}

fn edge_count(l: &GeometricLattice) -> usize {
  let n = l.len();
  (0..n)
    .flat_map(|u| (0..n).map(move |v| (u, v)))
    .filter(|&(u, v)| u != v && l.is_proper(u) && l.is_proper(v) && l.leq(u, v))
    .count()
}

/// `a(s)`: the `≺_s`-least atom, as a lattice element.
pub fn min_atom(lattice: &GeometricLattice, order: &AtomOrder) -> usize {
  let atoms = lattice.atoms();
  let best = (0..atoms.len()).min_by_key(|&i| order.key(i)).expect("lattice has atoms");
  atoms[best]
}

/// `b(s, u)`: the `≺_s`-least atom below `u`, as a lattice element.
pub fn min_atom_below(lattice: &GeometricLattice, order: &AtomOrder, u: usize) -> Result<usize> {
  let below = lattice.atoms_below(u);
  let best = below
    .iter()
    .copied()
    .min_by_key(|&i| order.key(i))
    .ok_or_else(|| Error::Construction(format!("no atom below {}", lattice.label(u))))?;
  Ok(lattice.atoms()[best])
}

#[cfg(test)]
mod tests {
  use super::*;
  use crate::lattice::subspace_lattice;
  use crate::ratio;

  #[test]
  fn identity_matrix_gives_the_base_order() {
    let l = subspace_lattice(2).unwrap();
    let id: Matrix = std::array::from_fn(|i| std::array::from_fn(|j| (i == j) as u8));
    let scheme = OrderingScheme::from_matrices(&l, vec![id], SchemeKind::Explicit);
    assert_eq!(scheme.order(0), &AtomOrder::base(15));
    assert_eq!(min_atom(l.lattice(), scheme.order(0)), l.lattice().atoms()[0]);
  }

  #[test]
  fn atom_is_its_own_minimum() {
    let l = subspace_lattice(2).unwrap();
    let scheme = OrderingScheme::gl_sampled(&l, 5, 3).unwrap();
    for order in scheme.orders() {
      for &a in l.lattice().atoms() {
        assert_eq!(min_atom_below(l.lattice(), order, a).unwrap(), a);
      }
    }
    assert!(min_atom_below(l.lattice(), scheme.order(0), l.lattice().bottom()).is_err());
  }

  #[test]
  fn explicit_weights_must_be_a_distribution() {
    let b = GeometricLattice::boolean(3).unwrap();
    let o1 = AtomOrder::base(3);
    let o2 = AtomOrder::from_sequence(&[2, 0, 1]).unwrap();
    assert!(OrderingScheme::explicit(
      &b,
      vec![(o1.clone(), ratio(1, 3)), (o2.clone(), ratio(2, 3))]
    )
    .is_ok());
    assert!(OrderingScheme::explicit(&b, vec![(o1, ratio(1, 3)), (o2, ratio(1, 3))]).is_err());
    assert!(AtomOrder::from_sequence(&[0, 0, 1]).is_err());
  }

  #[test]
  fn exact_scheme_is_guarded_for_q3() {
    let l3 = subspace_lattice(3).unwrap();
    assert!(OrderingScheme::gl_exact(&l3, SearchLimits::default()).unwrap_err().is_capacity());
  }
}
