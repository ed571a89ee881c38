use std::collections::BTreeSet;

use coverlab::cochains::{Cochain0, Cochain1, CochainSpace, CocycleSource};
use coverlab::complex::{binomial, Simplex, SimplicialComplex};
use coverlab::covers::{deficiency_from_fix_counts, lift_complex};
use coverlab::expansion::verify_sandwich;
use coverlab::groups::{Elem, GroupAction, Permutation};
use coverlab::search::SearchLimits;
use coverlab::Rational;
use num_traits::{One, Zero};
use proptest::prelude::*;

/// Pure complexes with facets of size `k` on at most 7 vertices.
fn pure_complex(k: usize) -> impl Strategy<Value = SimplicialComplex> {
  prop::collection::vec(prop::collection::btree_set(0u32..7, k..=k), 1..6).prop_map(|facets| {
    let facets: Vec<Vec<u32>> = facets.into_iter().map(|f| f.into_iter().collect()).collect();
    SimplicialComplex::from_facets(&facets).unwrap()
  })
}

fn groups() -> Vec<GroupAction> {
  vec![
    GroupAction::cyclic(2).unwrap(),
    GroupAction::cyclic(3).unwrap(),
    GroupAction::symmetric(3).unwrap(),
    GroupAction::from_spec("gen:1,0,2,3;0,1,3,2").unwrap(),
  ]
}

fn values(len: usize, order: usize, seeds: &[u32]) -> Vec<Elem> {
  (0..len)
    .map(|i| {
      Elem(
        seeds[i % seeds.len()].wrapping_mul(2654435761).wrapping_add(i as u32 * 7) % order as u32,
      )
    })
    .collect()
}

/// A complex, a group and two cochains and two 0-cochains on it.
fn instance() -> impl Strategy<Value = (SimplicialComplex, usize, Vec<u32>)> {
  (pure_complex(3), 0..4usize, prop::collection::vec(any::<u32>(), 1..12))
}

proptest! {
  #![proptest_config(ProptestConfig::with_cases(64))]

  #[test]
  fn weights_sum_to_one(x in pure_complex(3)) {
    let table = x.weight_table().unwrap();
    for k in 0..x.n() {
      prop_assert_eq!(table.total(k), Rational::one());
    }
  }

  #[test]
  fn vertex_link_edge_product(x in prop_oneof![pure_complex(3), pure_complex(4)]) {
    for v in x.vertices() {
      let alpha = Simplex::vertex(v);
      let link = x.link(&alpha).unwrap();
      for e in link.edges() {
        let lhs = x.weight(&alpha).unwrap() * link.weight(e).unwrap();
        let rhs = x.weight(&alpha.union(e)).unwrap() / Rational::from_integer(3.into());
        prop_assert_eq!(lhs, rhs);
      }
    }
  }

  #[test]
  fn general_product_identity(x in pure_complex(4)) {
    // c(α)·c_lk(α)(β) = c(α ∪ β) / binom(|α|+|β|, |α|)
    for k in 0..2 {
      for alpha in x.faces(k).unwrap() {
        let link = x.link(alpha).unwrap();
        for j in 0..link.n() {
          for beta in link.faces(j).unwrap() {
            let b = binomial((alpha.len() + beta.len()) as u64, alpha.len() as u64);
            let lhs = x.weight(alpha).unwrap() * link.weight(beta).unwrap();
            let rhs = x.weight(&alpha.union(beta)).unwrap() / Rational::from_integer(b.into());
            prop_assert_eq!(lhs, rhs);
          }
        }
      }
    }
  }

  #[test]
  fn faces_are_downward_closed(x in pure_complex(4), pick in any::<prop::sample::Index>(), mask in 1u32..16) {
    let facet = pick.get(x.facets());
    let sub: Vec<u32> = facet.vertices().iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| *v).collect();
    prop_assume!(!sub.is_empty());
    prop_assert!(x.contains(&Simplex::new(sub).unwrap()));
  }

  #[test]
  fn coboundaries_are_cocycles((x, gi, seeds) in instance()) {
    let g = &groups()[gi];
    let space = CochainSpace::new(&x, g);
    let psi = Cochain0::from_values(values(space.num_vertices(), g.order(), &seeds));
    prop_assert!(space.is_cocycle(&space.d0(&psi)));
    prop_assert_eq!(space.act(&psi, &space.trivial1()), space.d0(&psi));
  }

  #[test]
  fn action_is_a_group_action((x, gi, seeds) in instance()) {
    let g = &groups()[gi];
    let space = CochainSpace::new(&x, g);
    let nv = space.num_vertices();
    let phi = Cochain1::from_values(values(space.num_edges(), g.order(), &seeds));
    let p1 = Cochain0::from_values(values(nv, g.order(), &[seeds[0] ^ 5]));
    let p2 = Cochain0::from_values(values(nv, g.order(), &[seeds[0] ^ 9, 3]));
    let lhs = space.act(&p2, &space.act(&p1, &phi));
    let rhs = space.act(&space.mul0(&p2, &p1), &phi);
    prop_assert_eq!(lhs, rhs);
    // Z¹ is preserved, as is the violated support
    prop_assert_eq!(space.d1(&phi).violated, space.d1(&space.act(&p1, &phi)).violated);
  }

  #[test]
  fn violation_ignores_vertex_order((x, gi, seeds) in instance()) {
    let g = &groups()[gi];
    let space = CochainSpace::new(&x, g);
    let phi = Cochain1::from_values(values(space.num_edges(), g.order(), &seeds));
    let violated: BTreeSet<usize> = space.d1(&phi).violated.into_iter().collect();
    for (t, tri) in x.triangles().iter().enumerate() {
      let [a, b, c] = [tri.vertices()[0], tri.vertices()[1], tri.vertices()[2]];
      for loop_ in [[a, b, c, a], [b, a, c, b], [c, b, a, c], [b, c, a, b]] {
        let h = space.holonomy(&phi, &loop_).unwrap();
        prop_assert_eq!(!h.is_identity(), violated.contains(&t));
      }
    }
  }

  #[test]
  fn distance_is_a_metric((x, gi, seeds) in instance()) {
    let g = &groups()[gi];
    let space = CochainSpace::new(&x, g);
    let ne = space.num_edges();
    let a = Cochain1::from_values(values(ne, g.order(), &seeds));
    let b = Cochain1::from_values(values(ne, g.order(), &[seeds[0].wrapping_add(1)]));
    let c = Cochain1::from_values(values(ne, g.order(), &[seeds[0].wrapping_add(2), 11]));
    prop_assert!(space.dist(&a, &a).unwrap().is_zero());
    prop_assert_eq!(space.dist(&a, &b).unwrap(), space.dist(&b, &a).unwrap());
    prop_assert!(space.dist(&a, &c).unwrap() <= space.dist(&a, &b).unwrap() + space.dist(&b, &c).unwrap());
    prop_assert_eq!(space.dist(&a, &b).unwrap().is_zero(), a == b);
    let n = space.norm(&a).unwrap();
    prop_assert!(n >= Rational::zero() && n <= Rational::one());
  }

  #[test]
  fn lift_of_gauge_equivalent_cochain_is_isomorphic((x, gi, seeds) in instance()) {
    let g = &groups()[gi];
    let space = CochainSpace::new(&x, g);
    let phi = Cochain1::from_values(values(space.num_edges(), g.order(), &seeds));
    let psi = Cochain0::from_values(values(space.num_vertices(), g.order(), &[seeds[0] ^ 77]));
    let y = lift_complex(&x, &phi, g).unwrap();
    let z = lift_complex(&x, &space.act(&psi, &phi), g).unwrap();
    prop_assert_eq!(y.total().f_vector(), z.total().f_vector());
    // [u, s] ↦ [u, ψ(u)s] carries faces of Y_φ onto faces of Y_{ψ.φ}
    let pos: std::collections::HashMap<u32, usize> = x.vertices().enumerate().map(|(p, v)| (v, p)).collect();
    for k in 0..y.total().n() {
      for face in y.total().faces(k).unwrap() {
        let image: Vec<u32> = face
          .vertices()
          .iter()
          .map(|&w| {
            let u = y.project(w);
            let s = w % g.t() as u32;
            z.lifted_vertex(u, g.apply(psi.get(pos[&u]), s))
          })
          .collect();
        prop_assert!(z.total().contains(&Simplex::new(image).unwrap()));
      }
    }
    prop_assert_eq!(y.deficiency_exact().unwrap().m, z.deficiency_exact().unwrap().m);
  }

  #[test]
  fn deficiency_sandwich((x, gi, seeds) in instance()) {
    let g = &groups()[gi];
    let space = CochainSpace::new(&x, g);
    let phi = Cochain1::from_values(values(space.num_edges(), g.order(), &seeds));
    let cert = verify_sandwich(&x, g, &phi).unwrap();
    prop_assert!(cert.holds);
    prop_assert_eq!(cert.deficiency, deficiency_from_fix_counts(&space, &phi).unwrap());
  }
}

proptest! {
  #![proptest_config(ProptestConfig::with_cases(24))]

  #[test]
  fn cosystolic_norm_vanishes_exactly_on_cocycles(x in pure_complex(3), seeds in prop::collection::vec(any::<u32>(), 1..8)) {
    prop_assume!(x.edges().len() <= 9);
    let g = GroupAction::cyclic(2).unwrap();
    let space = CochainSpace::new(&x, &g);
    let phi = Cochain1::from_values(values(space.num_edges(), 2, &seeds));
    let (norm, witness) = space.cosystolic_norm_exact(&phi, CocycleSource::Search, SearchLimits::default()).unwrap();
    prop_assert_eq!(norm.is_zero(), space.is_cocycle(&phi));
    prop_assert!(space.is_cocycle(&witness));
    prop_assert_eq!(norm, space.dist(&phi, &witness).unwrap());
  }
}

fn perm_strategy(t: usize) -> impl Strategy<Value = Permutation> {
  Just((0..t as u32).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Permutation::new(v).unwrap())
}

proptest! {
  #[test]
  fn closure_satisfies_group_axioms(a in perm_strategy(5), b in perm_strategy(5)) {
    let g = GroupAction::closure(&[a, b]).unwrap();
    let elems: Vec<Elem> = g.elements().collect();
    let n = elems.len();
    for (i, &x) in elems.iter().enumerate().step_by(1 + n / 12) {
      prop_assert!(g.mul(x, g.inv(x)).is_identity());
      for &y in elems.iter().skip(i % 3).step_by(1 + n / 10) {
        let xy = g.permutation(x).compose(g.permutation(y));
        prop_assert_eq!(g.find(&xy), Some(g.mul(x, y)));
        for &z in elems.iter().step_by(1 + n / 5) {
          prop_assert_eq!(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
        }
        // fix is a class function
        prop_assert_eq!(g.fix(g.mul(g.mul(y, x), g.inv(y))), g.fix(x));
      }
    }
  }
}

#[test]
fn symmetric_fixity_is_t_minus_two() {
  for t in 3..=6 {
    let g = GroupAction::symmetric(t).unwrap();
    assert_eq!(g.fixity().unwrap().fixity, t - 2);
  }
}
